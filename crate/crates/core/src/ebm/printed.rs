//! The published EBMs of the three studied models, transcribed literally.
//!
//! These are kept separate from the constructed generators so they can be
//! compared entry by entry. Two-qubit σ₁, σ₂, σ₄, σ₅ follow the published
//! direct-sum formulas; σ₃ is the published 5×5 matrix.

use crate::anyon::ModelSpec;
use crate::numerics::{ExactComplex, ExactMatrix, Surd};

fn e(k: i64) -> ExactComplex {
    ExactComplex::root24(k)
}

fn q(n: i64, d: i64) -> ExactComplex {
    ExactComplex::real(Surd::rational(n, d))
}

fn r2() -> ExactComplex {
    ExactComplex::real(Surd::sqrt_term(2, 1, 1))
}

struct Published {
    s1: [i64; 2],
    /// (1/3)[[x·e(p) + y·e(s), √2(−e(p) + e(s))], [.., y'·e(p) + x'·e(s)]]
    s2_phases: (i64, i64),
    s2_diag: [(i64, i64); 2],
    nc: [i64; 4],
    s3_scalars: (i64, i64),
    s3_mix: usize,
    s3_diag: [(usize, i64); 3],
}

fn published(model: &ModelSpec) -> Option<Published> {
    match model.id().as_str() {
        "V113_3" => Some(Published {
            s1: [9, 1],
            s2_phases: (7, 3),
            s2_diag: [(2, 1), (1, 2)],
            nc: [1, 7, 7, 1],
            s3_scalars: (-3, -11),
            s3_mix: 4,
            s3_diag: [(1, -3), (2, -11), (3, -11)],
        }),
        "V131_3" => Some(Published {
            s1: [7, 3],
            s2_phases: (7, 3),
            s2_diag: [(1, 2), (2, 1)],
            nc: [7, 7, 7, 7],
            s3_scalars: (9, 1),
            s3_mix: 1,
            s3_diag: [(2, -1), (3, -1), (4, 9)],
        }),
        "V133_1" => Some(Published {
            s1: [7, 3],
            s2_phases: (-3, -11),
            s2_diag: [(2, 1), (1, 2)],
            nc: [7, -11, -11, 7],
            s3_scalars: (-3, -11),
            s3_mix: 1,
            s3_diag: [(2, -11), (3, -11), (4, -3)],
        }),
        _ => None,
    }
}

/// Published σ₁⁽³⁾, σ₂⁽³⁾; `None` outside the three studied models.
pub fn one_qubit(model: &ModelSpec) -> Option<Vec<ExactMatrix>> {
    let p = published(model)?;
    let s1 = ExactMatrix::diag(&[e(p.s1[0]), e(p.s1[1])]);
    let (a, b) = (e(p.s2_phases.0), e(p.s2_phases.1));
    let third = q(1, 3);
    let off = r2() * (b - a) * third;
    let d = |(x, y): (i64, i64)| (q(x, 1) * a + q(y, 1) * b) * third;
    let s2 = ExactMatrix::from_rows(&[&[d(p.s2_diag[0]), off], &[off, d(p.s2_diag[1])]]);
    Some(vec![s1, s2])
}

/// Published σ₁⁽⁶⁾…σ₅⁽⁶⁾; `None` outside the three studied models.
pub fn two_qubit(model: &ModelSpec) -> Option<Vec<ExactMatrix>> {
    let p = published(model)?;
    let one = one_qubit(model)?;
    let i2 = ExactMatrix::identity(2);
    let lift = |k: i64, m: ExactMatrix| ExactMatrix::direct_sum(&ExactMatrix::diag(&[e(k)]), &m);
    let g1 = lift(p.nc[0], ExactMatrix::kron(&one[0], &i2));
    let g2 = lift(p.nc[1], ExactMatrix::kron(&one[1], &i2));
    let g4 = lift(p.nc[2], ExactMatrix::kron(&i2, &one[0]));
    let g5 = lift(p.nc[3], ExactMatrix::kron(&i2, &one[1]));

    let (r0, r2) = (e(p.s3_scalars.0), e(p.s3_scalars.1));
    let half = q(1, 2);
    let mut g3 = ExactMatrix::zeros(5);
    let m = p.s3_mix;
    g3.set(0, 0, (r0 + r2) * half);
    g3.set(m, m, (r0 + r2) * half);
    g3.set(0, m, (r2 - r0) * half);
    g3.set(m, 0, (r2 - r0) * half);
    for (k, phase) in p.s3_diag {
        g3.set(k, k, e(phase));
    }
    Some(vec![g1, g2, g3, g4, g5])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn published_sets_exist_only_for_studied_models() {
        for m in ModelSpec::studied() {
            assert_eq!(one_qubit(&m).unwrap().len(), 2);
            assert_eq!(two_qubit(&m).unwrap().len(), 5);
        }
        assert!(one_qubit(&"V331_1".parse().unwrap()).is_none());
    }

    #[test]
    fn published_matrices_are_unitary() {
        for m in ModelSpec::studied() {
            for g in one_qubit(&m)
                .unwrap()
                .into_iter()
                .chain(two_qubit(&m).unwrap())
            {
                assert!(g.mul(&g.dagger()).is_identity(), "{m}");
            }
        }
    }
}
