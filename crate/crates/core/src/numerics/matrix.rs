use std::fmt;

use num_complex::Complex;
use num_traits::{One, Zero};
use serde_json::Value;

use super::{NumericsError, Real};

pub type Cx<R> = Complex<R>;

/// |z| in the backend's precision.
pub fn cabs<R: Real>(z: &Cx<R>) -> R {
    z.norm_sqr().sqrt()
}

/// Unit complex number with the phase of `z`; 1 for z = 0.
pub fn unit_phase<R: Real>(z: &Cx<R>) -> Cx<R> {
    let n = cabs(z);
    if n.is_zero() {
        Cx::one()
    } else {
        Cx::new(z.re.clone() / n.clone(), z.im.clone() / n)
    }
}

/// Dense square complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix<R: Real> {
    dim: usize,
    data: Vec<Cx<R>>,
}

impl<R: Real> fmt::Debug for CMatrix<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = &self[(i, j)];
                write!(f, "{:+.6e}{:+.6e}i  ", z.re.to_f64(), z.im.to_f64())?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl<R: Real> std::ops::Index<(usize, usize)> for CMatrix<R> {
    type Output = Cx<R>;
    fn index(&self, (i, j): (usize, usize)) -> &Cx<R> {
        &self.data[i * self.dim + j]
    }
}

impl<R: Real> std::ops::IndexMut<(usize, usize)> for CMatrix<R> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Cx<R> {
        &mut self.data[i * self.dim + j]
    }
}

fn check_same(op: &'static str, a: usize, b: usize) -> Result<(), NumericsError> {
    if a == b {
        Ok(())
    } else {
        Err(NumericsError::DimensionMismatch {
            op,
            left: a,
            right: b,
        })
    }
}

impl<R: Real> CMatrix<R> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Cx::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Cx::one();
        }
        m
    }

    pub fn diag(entries: Vec<Cx<R>>) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, z) in entries.into_iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Builds a matrix from rows; every row must have as many entries as there are rows.
    pub fn from_rows(rows: Vec<Vec<Cx<R>>>) -> Result<Self, NumericsError> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            check_same("from_rows", dim, row.len())?;
            data.extend(row);
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(NumericsError::NonFinite);
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Self {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&x| Cx::new(R::from_f64(x), R::zero()))
                    .collect()
            })
            .collect();
        Self::from_rows(rows).expect("square literal")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &[Cx<R>] {
        &self.data
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self, NumericsError> {
        check_same("matmul", self.dim, rhs.dim)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = &self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let prod = a.clone() * rhs.data[k * n + j].clone();
                    out.data[i * n + j] = out.data[i * n + j].clone() + prod;
                }
            }
        }
        Ok(out)
    }

    /// Panicking product for call sites where dimensions are fixed by construction.
    pub fn mul(&self, rhs: &Self) -> Self {
        self.matmul(rhs).expect("matching dimensions")
    }

    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn trace(&self) -> Cx<R> {
        (0..self.dim).fold(Cx::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn scale(&self, s: &Cx<R>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| z.clone() * s.clone()).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, NumericsError> {
        check_same("add", self.dim, rhs.dim)?;
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Ok(Self {
            dim: self.dim,
            data,
        })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, NumericsError> {
        check_same("sub", self.dim, rhs.dim)?;
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Ok(Self {
            dim: self.dim,
            data,
        })
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> Cx<R> {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut det = Cx::<R>::one();
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| {
                    a[x * n + col]
                        .norm_sqr()
                        .partial_cmp(&a[y * n + col].norm_sqr())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap();
            if a[pivot * n + col].is_zero() {
                return Cx::zero();
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(col * n + j, pivot * n + j);
                }
                det = -det;
            }
            let p = a[col * n + col].clone();
            det = det * p.clone();
            for row in col + 1..n {
                let f = a[row * n + col].clone() / p.clone();
                if f.is_zero() {
                    continue;
                }
                for j in col..n {
                    let t = f.clone() * a[col * n + j].clone();
                    a[row * n + j] = a[row * n + j].clone() - t;
                }
            }
        }
        det
    }

    pub fn det4(&self) -> Result<Cx<R>, NumericsError> {
        check_same("det4", 4, self.dim)?;
        Ok(self.det())
    }

    /// Block-diagonal `a ⊕ b`.
    pub fn direct_sum(a: &Self, b: &Self) -> Self {
        let n = a.dim + b.dim;
        let mut out = Self::zeros(n);
        for i in 0..a.dim {
            for j in 0..a.dim {
                out[(i, j)] = a[(i, j)].clone();
            }
        }
        for i in 0..b.dim {
            for j in 0..b.dim {
                out[(a.dim + i, a.dim + j)] = b[(i, j)].clone();
            }
        }
        out
    }

    /// `s ⊕ b` for a scalar `s`.
    pub fn scalar_sum(s: Cx<R>, b: &Self) -> Self {
        Self::direct_sum(&Self::diag(vec![s]), b)
    }

    /// Kronecker product `a ⊗ b`.
    pub fn kron(a: &Self, b: &Self) -> Self {
        let n = a.dim * b.dim;
        let mut out = Self::zeros(n);
        for i in 0..a.dim {
            for j in 0..a.dim {
                for k in 0..b.dim {
                    for l in 0..b.dim {
                        out[(i * b.dim + k, j * b.dim + l)] = a[(i, j)].clone() * b[(k, l)].clone();
                    }
                }
            }
        }
        out
    }

    /// Trailing principal block starting at `offset`.
    pub fn sub_block(&self, offset: usize) -> Self {
        let n = self.dim - offset;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(offset + i, offset + j)].clone();
            }
        }
        out
    }

    /// max |entry| (the entrywise ∞-norm used throughout for tolerances).
    pub fn max_abs(&self) -> R {
        self.data.iter().map(cabs).fold(R::zero(), R::max)
    }

    pub fn max_abs_diff(&self, rhs: &Self) -> Result<R, NumericsError> {
        Ok(self.sub(rhs)?.max_abs())
    }

    /// ‖A·A† − I‖∞.
    pub fn unitarity_residual(&self) -> R {
        let p = self.mul(&self.dagger());
        p.max_abs_diff(&Self::identity(self.dim)).expect("square")
    }

    pub fn close_to(&self, rhs: &Self, tol: f64) -> bool {
        match self.max_abs_diff(rhs) {
            Ok(d) => d <= R::from_f64(tol),
            Err(_) => false,
        }
    }

    /// Compares after rotating `self` by the unit phase that best aligns it with `rhs`.
    pub fn phase_close_to(&self, rhs: &Self, tol: f64) -> bool {
        if self.dim != rhs.dim {
            return false;
        }
        let overlap = rhs.mul(&self.dagger()).trace();
        let aligned = self.scale(&unit_phase(&overlap));
        aligned.close_to(rhs, tol)
    }

    /// Eigenvalues of a Hermitian matrix in ascending order (cyclic complex Jacobi).
    pub fn hermitian_eigenvalues(&self) -> Result<Vec<R>, NumericsError> {
        let residual = self.max_abs_diff(&self.dagger())?;
        let allowed = R::epsilon() * R::from_f64(1e3) * (R::one() + self.max_abs());
        if residual > allowed {
            return Err(NumericsError::NotHermitian(residual.to_f64()));
        }
        let n = self.dim;
        let mut a = self.clone();
        let scale = R::one() + a.max_abs();
        let stop = R::epsilon() * scale;
        for _sweep in 0..100 {
            let mut off = R::zero();
            for p in 0..n {
                for q in p + 1..n {
                    off = off.max(cabs(&a[(p, q)]));
                }
            }
            if off <= stop {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    let b = a[(p, q)].clone();
                    let bn = cabs(&b);
                    if bn <= stop.clone() * R::from_f64(1e-3) {
                        continue;
                    }
                    let phase = Cx::new(b.re.clone() / bn.clone(), b.im.clone() / bn.clone());
                    let app = a[(p, p)].re.clone();
                    let aqq = a[(q, q)].re.clone();
                    let two = R::from_ratio(2, 1);
                    let tau = (aqq - app) / (two * bn);
                    let root = (R::one() + tau.clone() * tau.clone()).sqrt();
                    let t = if tau < R::zero() {
                        -(R::one() / (-tau + root))
                    } else {
                        R::one() / (tau + root)
                    };
                    let c = R::one() / (R::one() + t.clone() * t.clone()).sqrt();
                    let s = t * c.clone();
                    let conj_phase = phase.conj();
                    let mut j = Self::identity(n);
                    j[(p, p)] = Cx::new(c.clone(), R::zero());
                    j[(p, q)] = Cx::new(s.clone(), R::zero());
                    j[(q, p)] = conj_phase.clone() * Cx::new(-s, R::zero());
                    j[(q, q)] = conj_phase * Cx::new(c, R::zero());
                    a = j.dagger().mul(&a).mul(&j);
                }
            }
        }
        let mut ev: Vec<R> = (0..n).map(|i| a[(i, i)].re.clone()).collect();
        ev.sort_by(|x, y| x.partial_cmp(y).unwrap_or(std::cmp::Ordering::Equal));
        Ok(ev)
    }

    /// Re-expresses the matrix in another backend through decimal strings.
    pub fn convert<S: Real>(&self) -> CMatrix<S> {
        let data = self
            .data
            .iter()
            .map(|z| {
                Cx::new(
                    S::parse_decimal(&z.re.to_decimal_string()).expect("decimal"),
                    S::parse_decimal(&z.im.to_decimal_string()).expect("decimal"),
                )
            })
            .collect();
        CMatrix {
            dim: self.dim,
            data,
        }
    }

    /// JSON array-of-arrays of `[re, im]` decimal strings.
    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.dim)
                .map(|i| {
                    Value::Array(
                        (0..self.dim)
                            .map(|j| {
                                let z = &self[(i, j)];
                                Value::Array(vec![
                                    Value::String(z.re.to_decimal_string()),
                                    Value::String(z.im.to_decimal_string()),
                                ])
                            })
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Self, NumericsError> {
        let bad = || NumericsError::Json("expected array of arrays of [re, im] strings".into());
        let rows = v.as_array().ok_or_else(bad)?;
        let mut out = Vec::with_capacity(rows.len());
        for row in rows {
            let mut r = Vec::new();
            for entry in row.as_array().ok_or_else(bad)? {
                let pair = entry.as_array().ok_or_else(bad)?;
                if pair.len() != 2 {
                    return Err(bad());
                }
                let parse = |x: &Value| -> Result<R, NumericsError> {
                    match x {
                        Value::String(s) => R::parse_decimal(s),
                        Value::Number(n) => Ok(R::from_f64(n.as_f64().ok_or_else(bad)?)),
                        _ => Err(bad()),
                    }
                };
                r.push(Cx::new(parse(&pair[0])?, parse(&pair[1])?));
            }
            out.push(r);
        }
        Self::from_rows(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::BigFloat;

    fn c(re: f64, im: f64) -> Cx<f64> {
        Cx::new(re, im)
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let i2 = CMatrix::<f64>::identity(2);
        assert_eq!(CMatrix::kron(&i2, &i2), CMatrix::identity(4));
    }

    #[test]
    fn scalar_sum_builds_five_by_five() {
        let i4 = CMatrix::<f64>::identity(4);
        let m = CMatrix::scalar_sum(c(0.0, 1.0), &i4);
        assert_eq!(m.dim(), 5);
        assert_eq!(m[(0, 0)], c(0.0, 1.0));
        assert_eq!(m[(0, 1)], c(0.0, 0.0));
        assert_eq!(m[(4, 4)], c(1.0, 0.0));
    }

    #[test]
    fn eigenvalues_of_diagonal() {
        let m = CMatrix::<f64>::from_real_rows(&[
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, -1.0],
        ]);
        assert_eq!(
            m.hermitian_eigenvalues().unwrap(),
            vec![-1.0, 0.0, 0.0, 0.0]
        );
    }

    #[test]
    fn eigenvalues_of_complex_hermitian() {
        // [[2, 1-i], [1+i, 3]] has eigenvalues (5 ± sqrt(9))/2 = 1, 4.
        let m = CMatrix::from_rows(vec![
            vec![c(2.0, 0.0), c(1.0, -1.0)],
            vec![c(1.0, 1.0), c(3.0, 0.0)],
        ])
        .unwrap();
        let ev = m.hermitian_eigenvalues().unwrap();
        assert!(
            (ev[0] - 1.0).abs() < 1e-14 && (ev[1] - 4.0).abs() < 1e-14,
            "{ev:?}"
        );
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = CMatrix::from_rows(vec![
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(
            m.hermitian_eigenvalues(),
            Err(NumericsError::NotHermitian(_))
        ));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let a = CMatrix::<f64>::identity(2);
        let b = CMatrix::<f64>::identity(3);
        assert!(matches!(
            a.matmul(&b),
            Err(NumericsError::DimensionMismatch { .. })
        ));
        assert!(CMatrix::<f64>::identity(3).det4().is_err());
    }

    #[test]
    fn det_of_permutation() {
        let swap = CMatrix::<f64>::from_real_rows(&[
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 0.0, 1.0],
        ]);
        assert_eq!(swap.det4().unwrap(), c(-1.0, 0.0));
    }

    #[test]
    fn phase_closeness() {
        let u = CMatrix::from_rows(vec![
            vec![c(0.6, 0.0), c(0.0, 0.8)],
            vec![c(0.0, 0.8), c(0.6, 0.0)],
        ])
        .unwrap();
        let ph = Cx::from_polar(1.0, std::f64::consts::PI / 7.0);
        let v = u.scale(&ph);
        assert!(v.phase_close_to(&u, 1e-12));
        assert!(!v.close_to(&u, 1e-12));
        let i = CMatrix::<f64>::identity(2);
        assert!(i.close_to(&i, 0.0));
    }

    #[test]
    fn json_round_trip_big() {
        let m = CMatrix::<BigFloat<256>>::identity(3).scale(&Cx::new(
            BigFloat::from_ratio(1, 3),
            BigFloat::from_ratio(-2, 7),
        ));
        let back = CMatrix::<BigFloat<256>>::from_json(&m.to_json()).unwrap();
        assert!(back.max_abs_diff(&m).unwrap().to_f64() < 1e-70);
    }
}
