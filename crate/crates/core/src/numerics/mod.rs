//! Dense complex linear algebra over interchangeable precision backends.

mod exact;
mod matrix;
mod real;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use exact::{ExactComplex, ExactMatrix, Surd};
pub use matrix::{cabs, unit_phase, CMatrix, Cx};
pub use real::{BigFloat, Real};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NumericsError {
    #[error("dimension mismatch in {op}: {left} vs {right}")]
    DimensionMismatch {
        op: &'static str,
        left: usize,
        right: usize,
    },
    #[error("matrix is not Hermitian (residual {0:e})")]
    NotHermitian(f64),
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("cannot parse number {0:?}")]
    Parse(String),
    #[error("bad matrix json: {0}")]
    Json(String),
    #[error("unsupported backend {0:?}; use native64 or bigfloat:{{128,256,512,1024}}")]
    UnsupportedBackend(String),
}

/// Precision bits accepted for the arbitrary-precision backend.
pub const BIGFLOAT_PRECISIONS: [u32; 4] = [128, 256, 512, 1024];
pub const DEFAULT_BIGFLOAT_BITS: u32 = 256;

/// Runtime selector for the scalar backend.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum Backend {
    Native64,
    BigFloat { precision_bits: u32 },
}

impl Backend {
    pub fn bigfloat(precision_bits: u32) -> Result<Self, NumericsError> {
        if BIGFLOAT_PRECISIONS.contains(&precision_bits) {
            Ok(Backend::BigFloat { precision_bits })
        } else {
            Err(NumericsError::UnsupportedBackend(format!(
                "bigfloat:{precision_bits}"
            )))
        }
    }

    pub fn precision_bits(&self) -> u32 {
        match self {
            Backend::Native64 => 53,
            Backend::BigFloat { precision_bits } => *precision_bits,
        }
    }

    /// Values below `10^(-0.2·bits)` are classified as numerically zero.
    pub fn zero_threshold(&self) -> f64 {
        10f64.powf(-0.2 * self.precision_bits() as f64)
    }

    pub fn is_numerically_zero(&self, x: f64) -> bool {
        x.abs() < self.zero_threshold()
    }
}

impl Default for Backend {
    fn default() -> Self {
        Backend::BigFloat {
            precision_bits: DEFAULT_BIGFLOAT_BITS,
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Backend::Native64 => write!(f, "native64"),
            Backend::BigFloat { precision_bits } => write!(f, "bigfloat:{precision_bits}"),
        }
    }
}

impl FromStr for Backend {
    type Err = NumericsError;
    fn from_str(s: &str) -> Result<Self, NumericsError> {
        let s = s.trim();
        match s {
            "native64" | "f64" | "native" => Ok(Backend::Native64),
            "bigfloat" => Ok(Backend::default()),
            _ => {
                let bits = s
                    .strip_prefix("bigfloat:")
                    .and_then(|b| b.parse::<u32>().ok())
                    .ok_or_else(|| NumericsError::UnsupportedBackend(s.to_string()))?;
                Backend::bigfloat(bits)
            }
        }
    }
}

impl From<Backend> for String {
    fn from(b: Backend) -> String {
        b.to_string()
    }
}

impl TryFrom<String> for Backend {
    type Error = NumericsError;
    fn try_from(s: String) -> Result<Self, NumericsError> {
        s.parse()
    }
}

/// Runs `$body` with the type alias `$R` bound to the scalar type of `$backend`.
#[macro_export]
macro_rules! with_backend {
    ($backend:expr, $R:ident => $body:expr) => {{
        match $backend {
            $crate::numerics::Backend::Native64 => {
                type $R = f64;
                $body
            }
            $crate::numerics::Backend::BigFloat {
                precision_bits: 128,
            } => {
                type $R = $crate::numerics::BigFloat<128>;
                $body
            }
            $crate::numerics::Backend::BigFloat {
                precision_bits: 512,
            } => {
                type $R = $crate::numerics::BigFloat<512>;
                $body
            }
            $crate::numerics::Backend::BigFloat {
                precision_bits: 1024,
            } => {
                type $R = $crate::numerics::BigFloat<1024>;
                $body
            }
            $crate::numerics::Backend::BigFloat { .. } => {
                type $R = $crate::numerics::BigFloat<256>;
                $body
            }
        }
    }};
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_backends() {
        assert_eq!("native64".parse::<Backend>().unwrap(), Backend::Native64);
        assert_eq!(
            "bigfloat:512".parse::<Backend>().unwrap().precision_bits(),
            512
        );
        assert_eq!("bigfloat".parse::<Backend>().unwrap().precision_bits(), 256);
        assert!("bigfloat:300".parse::<Backend>().is_err());
        assert!("quad".parse::<Backend>().is_err());
    }

    #[test]
    fn zero_thresholds() {
        assert!(Backend::default().is_numerically_zero(1e-60));
        assert!(!Backend::default().is_numerically_zero(1e-40));
        assert!(Backend::Native64.is_numerically_zero(1e-12));
    }

    #[test]
    fn dispatch_macro_picks_precision() {
        let b = Backend::bigfloat(512).unwrap();
        let bits = with_backend!(b, R => <R as Real>::PRECISION_BITS);
        assert_eq!(bits, 512);
        let n = with_backend!(Backend::Native64, R => <R as Real>::PRECISION_BITS);
        assert_eq!(n, 53);
    }
}
