//! Scalar field abstraction shared by the 64-bit and arbitrary-precision backends.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::str::FromStr;

use dashu_float::round::mode::HalfEven;
use dashu_float::{DBig, FBig};
use num_traits::{Num, One, Zero};

use super::NumericsError;

/// Real scalar used as the component type of [`num_complex::Complex`].
///
/// Everything above the numerics layer is generic over this trait, so the
/// same code path runs at double precision for search and at 256 bits (or
/// more) for rescoring.
pub trait Real:
    Num + Clone + Neg<Output = Self> + PartialOrd + Debug + Send + Sync + 'static
{
    /// Mantissa width in bits.
    const PRECISION_BITS: u32;
    /// Short backend tag, e.g. `native64` or `bigfloat:256`.
    fn backend_tag() -> String;

    fn from_f64(x: f64) -> Self;
    fn from_ratio(num: i64, den: i64) -> Self;
    fn to_f64(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn abs(&self) -> Self {
        if *self < Self::zero() {
            -self.clone()
        } else {
            self.clone()
        }
    }
    /// Unit roundoff of the backend.
    fn epsilon() -> Self;
    fn is_finite(&self) -> bool;
    /// Lossless decimal rendering (scientific notation).
    fn to_decimal_string(&self) -> String;
    fn parse_decimal(s: &str) -> Result<Self, NumericsError>;

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    const PRECISION_BITS: u32 = 53;

    fn backend_tag() -> String {
        "native64".to_string()
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    fn epsilon() -> Self {
        f64::EPSILON
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn to_decimal_string(&self) -> String {
        format!("{:e}", self)
    }
    fn parse_decimal(s: &str) -> Result<Self, NumericsError> {
        s.trim()
            .parse::<f64>()
            .map_err(|_| NumericsError::Parse(s.to_string()))
    }
}

type Inner = FBig<HalfEven>;

/// Binary floating point number with a fixed `BITS`-bit mantissa.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct BigFloat<const BITS: usize>(Inner);

impl<const BITS: usize> BigFloat<BITS> {
    fn wrap(x: Inner) -> Self {
        if x.precision() == BITS {
            Self(x)
        } else {
            Self(x.with_precision(BITS).value())
        }
    }

    fn int(n: i64) -> Self {
        Self::wrap(Inner::from(n))
    }
}

impl<const BITS: usize> Debug for BigFloat<BITS> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

impl<const BITS: usize> Display for BigFloat<BITS> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

macro_rules! big_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl<const BITS: usize> $tr for BigFloat<BITS> {
            type Output = Self;
            fn $method(self, rhs: Self) -> Self {
                Self::wrap(self.0 $op rhs.0)
            }
        }
        impl<'a, const BITS: usize> $tr<&'a BigFloat<BITS>> for &'a BigFloat<BITS> {
            type Output = BigFloat<BITS>;
            fn $method(self, rhs: Self) -> BigFloat<BITS> {
                BigFloat::wrap(&self.0 $op &rhs.0)
            }
        }
    };
}

big_binop!(Add, add, +);
big_binop!(Sub, sub, -);
big_binop!(Mul, mul, *);
big_binop!(Div, div, /);

impl<const BITS: usize> Rem for BigFloat<BITS> {
    type Output = Self;
    fn rem(self, rhs: Self) -> Self {
        let q = (&self.0 / &rhs.0).trunc();
        Self::wrap(self.0 - q * rhs.0)
    }
}

impl<const BITS: usize> Neg for BigFloat<BITS> {
    type Output = Self;
    fn neg(self) -> Self {
        Self(-self.0)
    }
}

impl<const BITS: usize> Zero for BigFloat<BITS> {
    fn zero() -> Self {
        Self::wrap(Inner::ZERO)
    }
    fn is_zero(&self) -> bool {
        self.0 == Inner::ZERO
    }
}

impl<const BITS: usize> One for BigFloat<BITS> {
    fn one() -> Self {
        Self::wrap(Inner::ONE)
    }
}

impl<const BITS: usize> Num for BigFloat<BITS> {
    type FromStrRadixErr = NumericsError;
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, NumericsError> {
        if radix != 10 {
            return Err(NumericsError::Parse(format!("radix {radix} unsupported")));
        }
        Self::parse_decimal(s)
    }
}

impl<const BITS: usize> Real for BigFloat<BITS> {
    const PRECISION_BITS: u32 = BITS as u32;

    fn backend_tag() -> String {
        format!("bigfloat:{BITS}")
    }
    fn from_f64(x: f64) -> Self {
        Self::wrap(Inner::try_from(x).expect("finite f64"))
    }
    fn from_ratio(num: i64, den: i64) -> Self {
        Self::int(num) / Self::int(den)
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }
    fn sqrt(&self) -> Self {
        Self::wrap(self.0.sqrt())
    }
    fn epsilon() -> Self {
        Self::wrap(Inner::from_parts(1.into(), -(BITS as isize)))
    }
    fn is_finite(&self) -> bool {
        !self.0.repr().is_infinite()
    }
    fn to_decimal_string(&self) -> String {
        format!("{:e}", self.0.to_decimal().value())
    }
    fn parse_decimal(s: &str) -> Result<Self, NumericsError> {
        let d = DBig::from_str(s.trim()).map_err(|_| NumericsError::Parse(s.to_string()))?;
        let b = d.with_precision(BITS * 3 / 10 + 20).value();
        Ok(Self::wrap(
            b.with_base::<2>().value().with_rounding::<HalfEven>(),
        ))
    }
}
