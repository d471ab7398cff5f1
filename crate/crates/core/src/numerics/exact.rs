//! Exact arithmetic in Q(√2, √3)(i).
//!
//! Every F entry and every R phase of the metaplectic tables is an element of
//! this field (R phases are 24th roots of unity), so generator matrices are
//! assembled exactly and only rounded once, when instantiated in a backend.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

use super::{CMatrix, Cx, Real};

/// `c0 + c1·√2 + c2·√3 + c3·√6` with rational coefficients.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Surd {
    pub c: [Rational64; 4],
}

const RADICANDS: [i64; 4] = [1, 2, 3, 6];

impl Surd {
    pub fn rational(n: i64, d: i64) -> Self {
        Self::term(0, n, d)
    }

    /// `(n/d)·√r` for r ∈ {1, 2, 3, 6}.
    pub fn sqrt_term(r: i64, n: i64, d: i64) -> Self {
        let slot = RADICANDS
            .iter()
            .position(|&x| x == r)
            .expect("radicand in {1,2,3,6}");
        Self::term(slot, n, d)
    }

    fn term(slot: usize, n: i64, d: i64) -> Self {
        let mut c = [Rational64::zero(); 4];
        c[slot] = Rational64::new(n, d);
        Self { c }
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn to_real<R: Real>(&self) -> R {
        let mut acc = R::zero();
        for (slot, coef) in self.c.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let q = R::from_ratio(*coef.numer(), *coef.denom());
            acc = if RADICANDS[slot] == 1 {
                acc + q
            } else {
                acc + q * R::from_ratio(RADICANDS[slot], 1).sqrt()
            };
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.to_real::<f64>()
    }
}

impl Add for Surd {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(rhs.c) {
            *a += b;
        }
        Self { c }
    }
}

impl Sub for Surd {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for Surd {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            c: self.c.map(|x| -x),
        }
    }
}

impl Mul for Surd {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        // √a·√b = k·√r over the basis {1, √2, √3, √6}.
        const TABLE: [[(usize, i64); 4]; 4] = [
            [(0, 1), (1, 1), (2, 1), (3, 1)],
            [(1, 1), (0, 2), (3, 1), (2, 2)],
            [(2, 1), (3, 1), (0, 3), (1, 3)],
            [(3, 1), (2, 2), (1, 3), (0, 6)],
        ];
        let mut c = [Rational64::zero(); 4];
        for i in 0..4 {
            for j in 0..4 {
                let (slot, k) = TABLE[i][j];
                c[slot] += self.c[i] * rhs.c[j] * Rational64::from_integer(k);
            }
        }
        Self { c }
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (slot, coef) in self.c.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let sign = if coef.is_negative() { "-" } else { "+" };
            let mag = coef.abs();
            parts.push(match RADICANDS[slot] {
                1 => format!("{sign}{mag}"),
                r => format!("{sign}{mag}√{r}"),
            });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(""))
        }
    }
}

/// Complex number with [`Surd`] parts.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, Debug)]
pub struct ExactComplex {
    pub re: Surd,
    pub im: Surd,
}

impl ExactComplex {
    pub fn new(re: Surd, im: Surd) -> Self {
        Self { re, im }
    }

    pub fn real(re: Surd) -> Self {
        Self {
            re,
            im: Surd::default(),
        }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::real(Surd::rational(1, 1))
    }

    /// `e^{iπk/12}`.
    pub fn root24(k: i64) -> Self {
        Self {
            re: cos_pi_12(k),
            im: cos_pi_12(6 - k),
        }
    }

    pub fn conj(self) -> Self {
        Self {
            re: self.re,
            im: -self.im,
        }
    }

    pub fn norm_sqr(self) -> Surd {
        self.re * self.re + self.im * self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn to_complex<R: Real>(&self) -> Cx<R> {
        Cx::new(self.re.to_real(), self.im.to_real())
    }
}

/// cos(kπ/12) as an exact surd.
fn cos_pi_12(k: i64) -> Surd {
    let k = k.rem_euclid(24);
    let k = if k > 12 { 24 - k } else { k };
    let (base, flip) = if k > 6 { (12 - k, true) } else { (k, false) };
    let v = match base {
        0 => Surd::rational(1, 1),
        1 => Surd::sqrt_term(6, 1, 4) + Surd::sqrt_term(2, 1, 4),
        2 => Surd::sqrt_term(3, 1, 2),
        3 => Surd::sqrt_term(2, 1, 2),
        4 => Surd::rational(1, 2),
        5 => Surd::sqrt_term(6, 1, 4) - Surd::sqrt_term(2, 1, 4),
        _ => Surd::default(),
    };
    if flip {
        -v
    } else {
        v
    }
}

impl Add for ExactComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for ExactComplex {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Neg for ExactComplex {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Mul for ExactComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Self {
            re: self.re * rhs.re - self.im * rhs.im,
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

/// Square matrix over [`ExactComplex`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactMatrix {
    dim: usize,
    data: Vec<ExactComplex>,
}

impl ExactMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ExactComplex::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, ExactComplex::one());
        }
        m
    }

    pub fn diag(entries: &[ExactComplex]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, z) in entries.iter().enumerate() {
            m.set(i, i, *z);
        }
        m
    }

    pub fn from_rows(rows: &[&[ExactComplex]]) -> Self {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), dim, "square literal");
            for (j, z) in row.iter().enumerate() {
                m.set(i, j, *z);
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> ExactComplex {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, z: ExactComplex) {
        self.data[i * self.dim + j] = z;
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ExactComplex::zero();
                for k in 0..n {
                    acc = acc + self.get(i, k) * rhs.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn scale(&self, s: ExactComplex) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|z| *z * s).collect(),
        }
    }

    pub fn direct_sum(a: &Self, b: &Self) -> Self {
        let mut out = Self::zeros(a.dim + b.dim);
        for i in 0..a.dim {
            for j in 0..a.dim {
                out.set(i, j, a.get(i, j));
            }
        }
        for i in 0..b.dim {
            for j in 0..b.dim {
                out.set(a.dim + i, a.dim + j, b.get(i, j));
            }
        }
        out
    }

    pub fn kron(a: &Self, b: &Self) -> Self {
        let mut out = Self::zeros(a.dim * b.dim);
        for i in 0..a.dim {
            for j in 0..a.dim {
                for k in 0..b.dim {
                    for l in 0..b.dim {
                        out.set(i * b.dim + k, j * b.dim + l, a.get(i, j) * b.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn to_cmatrix<R: Real>(&self) -> CMatrix<R> {
        let rows = (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j).to_complex()).collect())
            .collect();
        CMatrix::from_rows(rows).expect("finite exact entries")
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.dim)
    }
}

impl One for Surd {
    fn one() -> Self {
        Surd::rational(1, 1)
    }
}

impl Zero for Surd {
    fn zero() -> Self {
        Surd::default()
    }
    fn is_zero(&self) -> bool {
        Surd::is_zero(self)
    }
}
