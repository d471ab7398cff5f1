use serde::{Deserialize, Serialize};

use crate::codec::LetterCodec;
use crate::ebm::{Arity, EbmSource, ProductOrder};
use crate::numerics::{Backend, Real};
use crate::search::{evaluate_matrix, ObjectiveKind, SearchError};
use crate::with_backend;

use super::ReportError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderReport {
    pub order: ProductOrder,
    pub distance: Option<f64>,
    pub distance_decimal: Option<String>,
    pub m11_abs: Option<f64>,
    pub unitarity_defect: Option<f64>,
    pub off_block_norm: Option<f64>,
    pub numerically_zero: bool,
}

/// CNOT-class check of one word under both product orders.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub model: String,
    pub word: String,
    pub backend: Backend,
    /// Values of the left-to-right product, the convention used everywhere else.
    pub distance: Option<f64>,
    pub m11_abs: Option<f64>,
    pub unitarity_defect: Option<f64>,
    pub off_block_norm: Option<f64>,
    pub order_convention: ProductOrder,
    pub orders: Vec<OrderReport>,
}

impl VerifyReport {
    /// True when some order gives a numerically-zero distance.
    pub fn reaches_zero(&self) -> bool {
        self.orders.iter().any(|o| o.numerically_zero)
    }
}

pub fn verify_word(
    source: &EbmSource,
    letters: &str,
    backend: Backend,
) -> Result<VerifyReport, ReportError> {
    let arity = Arity::TwoQubit;
    let word = LetterCodec::new(arity)
        .decode(letters)
        .map_err(SearchError::from)?;
    let orders = with_backend!(backend, R => {
        let ebms = source.build::<R>(arity)?;
        [ProductOrder::LeftToRight, ProductOrder::RightToLeft]
            .into_iter()
            .map(|order| {
                let u = ebms.braidword_unitary_ordered(&word, order)?;
                let ev = evaluate_matrix(&ObjectiveKind::CnotLocalClass, &u)?;
                let distance = ev.distance.as_ref().map(Real::to_f64);
                Ok(OrderReport {
                    order,
                    distance,
                    distance_decimal: ev.distance.as_ref().map(Real::to_decimal_string),
                    m11_abs: ev.m11_abs.as_ref().map(Real::to_f64),
                    unitarity_defect: ev.unitarity_defect.as_ref().map(Real::to_f64),
                    off_block_norm: ev.off_block_norm.as_ref().map(Real::to_f64),
                    numerically_zero: distance.is_some_and(|d| backend.is_numerically_zero(d)),
                })
            })
            .collect::<Result<Vec<_>, ReportError>>()
    })?;
    let first = &orders[0];
    Ok(VerifyReport {
        model: source.label(),
        word: letters.split_whitespace().collect(),
        backend,
        distance: first.distance,
        m11_abs: first.m11_abs,
        unitarity_defect: first.unitarity_defect,
        off_block_norm: first.off_block_norm,
        order_convention: ProductOrder::LeftToRight,
        orders: orders.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anyon::ModelSpec;

    #[test]
    fn identity_word_sits_at_plateau() {
        let r = verify_word(&ModelSpec::v113_3().into(), "AF", Backend::Native64).unwrap();
        assert_eq!(r.orders.len(), 2);
        for o in &r.orders {
            assert!((o.distance.unwrap() - 5.0).abs() < 1e-12);
            assert!((o.m11_abs.unwrap() - 1.0).abs() < 1e-12);
        }
        assert!(!r.reaches_zero());
    }

    #[test]
    fn unknown_letter_is_an_error() {
        assert!(verify_word(&ModelSpec::v113_3().into(), "AZ", Backend::Native64).is_err());
    }
}
