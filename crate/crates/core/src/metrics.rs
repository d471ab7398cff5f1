//! Gate distances, Makhlin local invariants, unitarity defect and leakage.

use std::fmt;

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::{cabs, CMatrix, Cx, NumericsError, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("{op} expects a {expected}×{expected} matrix, got {got}×{got}")]
    Dimension {
        op: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("{op}: input is not unitary (residual {residual:e})")]
    NotUnitary { op: &'static str, residual: f64 },
    #[error("determinant too small for local invariants (|det| = {0:e})")]
    SingularDeterminant(f64),
    #[error("g3 has imaginary residue {0:e}")]
    ComplexG3(f64),
    #[error("phase distance radicand {0:e} is negative beyond roundoff")]
    NegativeRadicand(f64),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

fn expect_dim<R: Real>(
    op: &'static str,
    m: &CMatrix<R>,
    expected: usize,
) -> Result<(), MetricsError> {
    if m.dim() == expected {
        Ok(())
    } else {
        Err(MetricsError::Dimension {
            op,
            expected,
            got: m.dim(),
        })
    }
}

fn expect_unitary<R: Real>(op: &'static str, m: &CMatrix<R>, tol: f64) -> Result<(), MetricsError> {
    let residual = m.unitarity_residual().to_f64();
    if residual <= tol {
        Ok(())
    } else {
        Err(MetricsError::NotUnitary { op, residual })
    }
}

/// d(U₀, U) = √(1 − |tr(U₀U†)|/2).
pub fn global_phase_distance<R: Real>(u0: &CMatrix<R>, u: &CMatrix<R>) -> Result<R, MetricsError> {
    expect_dim("global_phase_distance", u0, 2)?;
    expect_dim("global_phase_distance", u, 2)?;
    expect_unitary("global_phase_distance", u0, 1e-10)?;
    expect_unitary("global_phase_distance", u, 1e-10)?;
    let overlap = cabs(&u0.mul(&u.dagger()).trace()) / R::from_ratio(2, 1);
    let radicand = R::one() - overlap;
    if radicand < R::zero() {
        let r = radicand.to_f64();
        if r < -1e-8 {
            return Err(MetricsError::NegativeRadicand(r));
        }
        return Ok(R::zero());
    }
    Ok(radicand.sqrt())
}

/// Q of the magic-basis change, `(1/√2)[[1,0,0,i],[0,i,1,0],[0,i,−1,0],[1,0,0,−i]]`.
pub fn bell_basis<R: Real>() -> CMatrix<R> {
    let h = R::one() / R::from_ratio(2, 1).sqrt();
    let z = Cx::new(R::zero(), R::zero());
    let re = |s: i64| Cx::new(h.clone() * R::from_ratio(s, 1), R::zero());
    let im = |s: i64| Cx::new(R::zero(), h.clone() * R::from_ratio(s, 1));
    CMatrix::from_rows(vec![
        vec![re(1), z.clone(), z.clone(), im(1)],
        vec![z.clone(), im(1), re(1), z.clone()],
        vec![z.clone(), im(1), re(-1), z.clone()],
        vec![re(1), z.clone(), z, im(-1)],
    ])
    .expect("finite")
}

/// U_B = Q†UQ.
pub fn bell_transform<R: Real>(u: &CMatrix<R>) -> Result<CMatrix<R>, MetricsError> {
    expect_dim("bell_transform", u, 4)?;
    let q = bell_basis::<R>();
    Ok(q.dagger().mul(u).mul(&q))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalInvariants {
    pub g1: f64,
    pub g2: f64,
    pub g3: f64,
}

impl fmt::Display for LocalInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:.6e}, {:.6e}, {:.6e})", self.g1, self.g2, self.g3)
    }
}

/// Invariants in the backend's own precision.
#[derive(Clone, Debug)]
pub struct PreciseInvariants<R: Real> {
    pub g1: R,
    pub g2: R,
    pub g3: R,
}

impl<R: Real> PreciseInvariants<R> {
    pub fn to_f64(&self) -> LocalInvariants {
        LocalInvariants {
            g1: self.g1.to_f64(),
            g2: self.g2.to_f64(),
            g3: self.g3.to_f64(),
        }
    }

    /// Σ (gᵢ − gᵢ(CNOT))² with gᵢ(CNOT) = (0, 0, 1).
    pub fn cnot_distance(&self) -> R {
        let d3 = self.g3.clone() - R::one();
        self.g1.clone() * self.g1.clone() + self.g2.clone() * self.g2.clone() + d3.clone() * d3
    }
}

/// Makhlin invariants: g₁ + i g₂ = tr²(m)/(16 det U), g₃ = (tr²m − tr m²)/(4 det U),
/// with m = U_Bᵀ U_B.
pub fn local_invariants_precise<R: Real>(
    u: &CMatrix<R>,
) -> Result<PreciseInvariants<R>, MetricsError> {
    expect_dim("local_invariants", u, 4)?;
    expect_unitary("local_invariants", u, 1e-8)?;
    let det = u.det();
    let det_abs = cabs(&det).to_f64();
    if det_abs < 1e-8 {
        return Err(MetricsError::SingularDeterminant(det_abs));
    }
    let ub = bell_transform(u)?;
    let m = ub.transpose().mul(&ub);
    let tr = m.trace();
    let tr2 = tr.clone() * tr;
    let tr_m2 = m.mul(&m).trace();
    let g12 = tr2.clone() / (det.clone() * R::from_ratio(16, 1));
    let g3 = (tr2 - tr_m2) / (det * R::from_ratio(4, 1));
    let residue = g3.im.abs().to_f64();
    if residue > 1e-8 * (1.0 + g3.re.abs().to_f64()) {
        return Err(MetricsError::ComplexG3(residue));
    }
    Ok(PreciseInvariants {
        g1: g12.re,
        g2: g12.im,
        g3: g3.re,
    })
}

pub fn local_invariants<R: Real>(u: &CMatrix<R>) -> Result<LocalInvariants, MetricsError> {
    Ok(local_invariants_precise(u)?.to_f64())
}

/// d^CNOT(A) = Σ Δgᵢ².
pub fn cnot_distance<R: Real>(a: &CMatrix<R>) -> Result<R, MetricsError> {
    Ok(local_invariants_precise(a)?.cnot_distance())
}

/// Σ|λᵢ(A†A − I)|.
pub fn unitarity_defect<R: Real>(a: &CMatrix<R>) -> Result<R, MetricsError> {
    let g = a.dagger().mul(a).sub(&CMatrix::identity(a.dim()))?;
    let eig = g.hermitian_eigenvalues()?;
    Ok(eig.into_iter().fold(R::zero(), |acc, x| acc + x.abs()))
}

pub fn leakage_magnitude<R: Real>(m11: &Cx<R>) -> R {
    cabs(m11)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateName {
    H,
    T,
    Cnot,
    Custom,
}

#[derive(Clone, Debug)]
pub struct GateTarget<R: Real> {
    pub name: GateName,
    pub label: String,
    pub matrix: CMatrix<R>,
}

impl<R: Real> GateTarget<R> {
    pub fn h() -> Self {
        let h = R::one() / R::from_ratio(2, 1).sqrt();
        let c = |s: i64| Cx::new(h.clone() * R::from_ratio(s, 1), R::zero());
        let matrix = CMatrix::from_rows(vec![vec![c(1), c(1)], vec![c(1), c(-1)]]).expect("finite");
        Self {
            name: GateName::H,
            label: "H".into(),
            matrix,
        }
    }

    pub fn t() -> Self {
        let h = R::one() / R::from_ratio(2, 1).sqrt();
        let matrix = CMatrix::diag(vec![Cx::one(), Cx::new(h.clone(), h)]);
        Self {
            name: GateName::T,
            label: "T".into(),
            matrix,
        }
    }

    pub fn cnot() -> Self {
        let mut matrix = CMatrix::zeros(4);
        matrix[(0, 0)] = Cx::one();
        matrix[(1, 1)] = Cx::one();
        matrix[(2, 3)] = Cx::one();
        matrix[(3, 2)] = Cx::one();
        Self {
            name: GateName::Cnot,
            label: "CNOT".into(),
            matrix,
        }
    }

    pub fn custom(label: &str, matrix: CMatrix<R>) -> Result<Self, MetricsError> {
        expect_unitary("custom gate", &matrix, 1e-10)?;
        Ok(Self {
            name: GateName::Custom,
            label: label.to_string(),
            matrix,
        })
    }

    pub fn by_name(name: &str) -> Option<Self> {
        match name.to_ascii_uppercase().as_str() {
            "H" => Some(Self::h()),
            "T" => Some(Self::t()),
            "CNOT" => Some(Self::cnot()),
            _ => None,
        }
    }
}

impl<R: Real> PartialEq for GateTarget<R> {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.label == other.label && self.matrix == other.matrix
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::BigFloat;
    use num_complex::Complex64;
    use num_traits::Zero;

    fn swap() -> CMatrix<f64> {
        let mut m = CMatrix::zeros(4);
        m[(0, 0)] = Complex64::one();
        m[(1, 2)] = Complex64::one();
        m[(2, 1)] = Complex64::one();
        m[(3, 3)] = Complex64::one();
        m
    }

    #[test]
    fn phase_distance_examples() {
        let h = GateTarget::<f64>::h().matrix;
        assert!(global_phase_distance(&h, &h).unwrap() < 1e-7);
        let i = CMatrix::<f64>::identity(2);
        let phased = i.scale(&Complex64::from_polar(1.0, 0.7));
        assert!(global_phase_distance(&i, &phased).unwrap() < 1e-7);
        let z = CMatrix::diag(vec![Complex64::one(), -Complex64::one()]);
        assert!((global_phase_distance(&i, &z).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(
            global_phase_distance(&i, &CMatrix::identity(3)),
            Err(MetricsError::Dimension { .. })
        ));
    }

    #[test]
    fn bell_basis_is_unitary() {
        let q = bell_basis::<BigFloat<256>>();
        assert!(q.unitarity_residual().to_f64() < 1e-70);
        let u = bell_transform(&CMatrix::<f64>::identity(4)).unwrap();
        assert!(u.close_to(&CMatrix::identity(4), 1e-15));
    }

    #[test]
    fn invariant_examples() {
        let c = local_invariants(&GateTarget::<f64>::cnot().matrix).unwrap();
        assert!(c.g1.abs() < 1e-15 && c.g2.abs() < 1e-15 && (c.g3 - 1.0).abs() < 1e-15);
        let i = local_invariants(&CMatrix::<f64>::identity(4)).unwrap();
        assert!((i.g1 - 1.0).abs() < 1e-15 && i.g2.abs() < 1e-15 && (i.g3 - 3.0).abs() < 1e-14);
        let s = local_invariants(&swap()).unwrap();
        assert!((s.g1 + 1.0).abs() < 1e-15 && s.g2.abs() < 1e-15 && (s.g3 + 3.0).abs() < 1e-14);
        assert!((cnot_distance(&CMatrix::<f64>::identity(4)).unwrap() - 5.0).abs() < 1e-13);
    }

    #[test]
    fn invariants_reject_non_unitary() {
        let m = CMatrix::<f64>::identity(4).scale(&Complex64::new(0.5, 0.0));
        assert!(matches!(
            local_invariants(&m),
            Err(MetricsError::NotUnitary { .. })
        ));
    }

    #[test]
    fn unitarity_defect_examples() {
        assert!(unitarity_defect(&GateTarget::<f64>::cnot().matrix).unwrap() < 1e-15);
        let d = CMatrix::diag(vec![
            Complex64::one(),
            Complex64::one(),
            Complex64::one(),
            Complex64::zero(),
        ]);
        assert!((unitarity_defect(&d).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn leakage_of_phases() {
        assert_eq!(leakage_magnitude(&Complex64::one()), 1.0);
        assert!((leakage_magnitude(&Complex64::from_polar(1.0, 2.0)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn custom_gate_requires_unitary() {
        let m = CMatrix::<f64>::identity(2).scale(&Complex64::new(2.0, 0.0));
        assert!(GateTarget::custom("bad", m).is_err());
        assert_eq!(GateTarget::<f64>::by_name("h").unwrap().name, GateName::H);
    }
}
