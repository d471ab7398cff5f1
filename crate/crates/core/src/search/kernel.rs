//! Fixed-size f64 arithmetic for the hot loops of exhaustive and GA search.

use num_complex::Complex64 as C;

use super::objective::{ObjectiveKind, LEAKAGE_TOLERANCE, LEAKY_OFFSET};
use super::SearchError;
use crate::ebm::{BraidWord, EbmSet, Letter};

pub(crate) type Mat<const N: usize> = [[C; N]; N];

const ZERO: C = C::new(0.0, 0.0);

pub(crate) fn identity<const N: usize>() -> Mat<N> {
    let mut m = [[ZERO; N]; N];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = C::new(1.0, 0.0);
    }
    m
}

#[inline]
pub(crate) fn mul<const N: usize>(a: &Mat<N>, b: &Mat<N>) -> Mat<N> {
    let mut out = [[ZERO; N]; N];
    for i in 0..N {
        for k in 0..N {
            let aik = a[i][k];
            for j in 0..N {
                out[i][j] += aik * b[k][j];
            }
        }
    }
    out
}

fn det4(m: &Mat<4>) -> C {
    let mut a = *m;
    let mut det = C::new(1.0, 0.0);
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&x, &y| a[x][col].norm_sqr().total_cmp(&a[y][col].norm_sqr()))
            .unwrap_or(col);
        if a[pivot][col].norm_sqr() == 0.0 {
            return ZERO;
        }
        if pivot != col {
            a.swap(pivot, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for r in col + 1..4 {
            let f = a[r][col] / p;
            for c in col..4 {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
        }
    }
    det
}

/// Per-objective scoring of a product matrix.
pub(crate) trait NativeScore<const N: usize>: Sync {
    fn score(&self, m: &Mat<N>) -> f64;
}

pub(crate) struct GateScore {
    target: Mat<2>,
}

impl NativeScore<2> for GateScore {
    fn score(&self, u: &Mat<2>) -> f64 {
        let mut tr = ZERO;
        for i in 0..2 {
            for j in 0..2 {
                tr += self.target[i][j] * u[i][j].conj();
            }
        }
        (1.0 - tr.norm() / 2.0).max(0.0).sqrt()
    }
}

pub(crate) struct CnotScore {
    q: Mat<4>,
    q_dag: Mat<4>,
}

impl CnotScore {
    fn new() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let (r, i) = (C::new(h, 0.0), C::new(0.0, h));
        let q = [
            [r, ZERO, ZERO, i],
            [ZERO, i, r, ZERO],
            [ZERO, i, -r, ZERO],
            [r, ZERO, ZERO, -i],
        ];
        let mut q_dag = [[ZERO; 4]; 4];
        for a in 0..4 {
            for b in 0..4 {
                q_dag[b][a] = q[a][b].conj();
            }
        }
        Self { q, q_dag }
    }

    fn distance(&self, a: &Mat<4>) -> f64 {
        let ub = mul(&mul(&self.q_dag, a), &self.q);
        let mut m = [[ZERO; 4]; 4];
        for i in 0..4 {
            for k in 0..4 {
                let t = ub[k][i];
                for j in 0..4 {
                    m[i][j] += t * ub[k][j];
                }
            }
        }
        let tr: C = (0..4).map(|i| m[i][i]).sum();
        let tr_m2: C = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| m[i][j] * m[j][i])
            .sum();
        let det = det4(a);
        let g12 = tr * tr / (det * 16.0);
        let g3 = (tr * tr - tr_m2) / (det * 4.0);
        g12.norm_sqr() + (g3.re - 1.0).powi(2)
    }
}

impl NativeScore<5> for CnotScore {
    fn score(&self, u: &Mat<5>) -> f64 {
        let leak = (1.0 - u[0][0].norm()).abs();
        if leak > LEAKAGE_TOLERANCE {
            return LEAKY_OFFSET + leak;
        }
        let mut a = [[ZERO; 4]; 4];
        for i in 0..4 {
            a[i].copy_from_slice(&u[i + 1][1..5]);
        }
        let d = self.distance(&a);
        if d.is_nan() {
            f64::INFINITY
        } else {
            d
        }
    }
}

/// Alphabet matrices (generators, then inverses) plus a scorer.
pub(crate) struct Kernel<const N: usize, S: NativeScore<N>> {
    pub mats: Vec<Mat<N>>,
    pub generators: usize,
    pub scorer: S,
}

impl<const N: usize, S: NativeScore<N>> Kernel<N, S> {
    fn build(ebms: &EbmSet<f64>, scorer: S) -> Self {
        let to_mat = |l: Letter| {
            let m = ebms.letter_matrix(l).expect("letter in range");
            let mut out = [[ZERO; N]; N];
            for (i, row) in out.iter_mut().enumerate() {
                for (j, v) in row.iter_mut().enumerate() {
                    *v = m[(i, j)];
                }
            }
            out
        };
        let n = ebms.len();
        let mats = (0..n)
            .map(Letter::gen)
            .chain((0..n).map(Letter::inv))
            .map(to_mat)
            .collect();
        Self {
            mats,
            generators: n,
            scorer,
        }
    }

    pub fn word_matrix(&self, letters: &[u8]) -> Mat<N> {
        letters
            .iter()
            .fold(identity(), |acc, &l| mul(&acc, &self.mats[l as usize]))
    }
}

pub(crate) enum NativeEvaluator {
    Gate(Kernel<2, GateScore>),
    Cnot(Box<Kernel<5, CnotScore>>),
}

impl NativeEvaluator {
    pub fn new(ebms: &EbmSet<f64>, kind: &ObjectiveKind) -> Result<Self, SearchError> {
        if ebms.arity != kind.arity() {
            return Err(SearchError::ArityMismatch {
                objective: kind.to_string(),
                arity: ebms.arity,
            });
        }
        Ok(match kind {
            ObjectiveKind::OneQubitGate(t) => {
                let g = t.gate::<f64>()?.matrix;
                let target = [[g[(0, 0)], g[(0, 1)]], [g[(1, 0)], g[(1, 1)]]];
                NativeEvaluator::Gate(Kernel::build(ebms, GateScore { target }))
            }
            ObjectiveKind::CnotLocalClass => {
                NativeEvaluator::Cnot(Box::new(Kernel::build(ebms, CnotScore::new())))
            }
        })
    }

    pub fn generators(&self) -> usize {
        match self {
            NativeEvaluator::Gate(k) => k.generators,
            NativeEvaluator::Cnot(k) => k.generators,
        }
    }

    /// Score of a word given as alphabet indices.
    pub fn score(&self, letters: &[u8]) -> f64 {
        match self {
            NativeEvaluator::Gate(k) => k.scorer.score(&k.word_matrix(letters)),
            NativeEvaluator::Cnot(k) => k.scorer.score(&k.word_matrix(letters)),
        }
    }
}

/// Alphabet index ↔ letter: generators first, then inverses.
pub(crate) fn index_to_letter(i: u8, generators: usize) -> Letter {
    let i = i as usize;
    if i < generators {
        Letter::gen(i)
    } else {
        Letter::inv(i - generators)
    }
}

pub(crate) fn letter_to_index(l: Letter, generators: usize) -> u8 {
    (if l.inverse {
        l.generator + generators
    } else {
        l.generator
    }) as u8
}

pub(crate) fn indices_to_word(letters: &[u8], generators: usize) -> BraidWord {
    letters
        .iter()
        .map(|&i| index_to_letter(i, generators))
        .collect()
}
