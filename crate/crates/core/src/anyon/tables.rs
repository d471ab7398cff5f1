use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;

use serde::Serialize;
use serde_json::{json, Value};

use super::{AnyonError, AnyonLabel};
use crate::numerics::{CMatrix, ExactComplex, ExactMatrix, Real, Surd};

/// Index of an F-matrix `F^{abc}_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FKey {
    pub a: AnyonLabel,
    pub b: AnyonLabel,
    pub c: AnyonLabel,
    pub d: AnyonLabel,
}

impl FKey {
    pub fn new(a: u8, b: u8, c: u8, d: u8) -> Self {
        let l = |v| AnyonLabel::new(v).expect("label");
        Self {
            a: l(a),
            b: l(b),
            c: l(c),
            d: l(d),
        }
    }
}

impl fmt::Display for FKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "F^{{{}{}{}}}_{}",
            self.a.value(),
            self.b.value(),
            self.c.value(),
            self.d.value()
        )
    }
}

/// Index of an R-symbol `R^{ab}_c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct RKey {
    pub a: AnyonLabel,
    pub b: AnyonLabel,
    pub c: AnyonLabel,
}

impl RKey {
    pub fn new(a: u8, b: u8, c: u8) -> Self {
        let l = |v| AnyonLabel::new(v).expect("label");
        Self {
            a: l(a),
            b: l(b),
            c: l(c),
        }
    }
}

impl fmt::Display for RKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "R^{{{}{}}}_{}",
            self.a.value(),
            self.b.value(),
            self.c.value()
        )
    }
}

/// A 2×2 recoupling block.
///
/// Rows are labelled by the `b ⊗ c` channel, columns by the `a ⊗ b` channel:
/// `|(ab)_e c⟩ = Σ_f F[f][e] |a (bc)_f⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FMatrix {
    pub rows: [AnyonLabel; 2],
    pub cols: [AnyonLabel; 2],
    pub entries: [[Surd; 2]; 2],
    /// True for blocks inferred from X↔X′ symmetry rather than tabulated.
    pub inferred: bool,
}

impl FMatrix {
    pub fn exact(&self) -> ExactMatrix {
        let e = |s: Surd| ExactComplex::real(s);
        ExactMatrix::from_rows(&[
            &[e(self.entries[0][0]), e(self.entries[0][1])],
            &[e(self.entries[1][0]), e(self.entries[1][1])],
        ])
    }

    pub fn to_cmatrix<R: Real>(&self) -> CMatrix<R> {
        self.exact().to_cmatrix()
    }

    pub fn is_symmetric(&self) -> bool {
        self.entries[0][1] == self.entries[1][0]
    }

    pub fn is_involutory(&self) -> bool {
        self.exact().mul(&self.exact()).is_identity()
    }
}

/// F-matrices and R-symbols of the metaplectic qubit models.
#[derive(Debug)]
pub struct FRTable {
    f: BTreeMap<FKey, FMatrix>,
    /// Phases stored as exponents k of e^{iπk/12}.
    r: BTreeMap<RKey, i64>,
}

fn s(n: i64, d: i64, radicand: i64) -> Surd {
    Surd::sqrt_term(radicand, n, d)
}

fn l(v: u8) -> AnyonLabel {
    AnyonLabel::new(v).expect("label")
}

impl FRTable {
    /// The shared, immutable table.
    pub fn global() -> &'static FRTable {
        static TABLE: OnceLock<FRTable> = OnceLock::new();
        TABLE.get_or_init(FRTable::build)
    }

    fn build() -> Self {
        // (1/√3)[[−√2, 1], [1, √2]]
        let thirds_a = [[s(-1, 3, 6), s(1, 3, 3)], [s(1, 3, 3), s(1, 3, 6)]];
        // (1/√3)[[−1, √2], [√2, 1]]
        let thirds_b = [[s(-1, 3, 3), s(1, 3, 6)], [s(1, 3, 6), s(1, 3, 3)]];
        // (1/√2)[[1, −1], [−1, −1]]
        let halves_a = [[s(1, 2, 2), s(-1, 2, 2)], [s(-1, 2, 2), s(-1, 2, 2)]];
        // (1/√2)[[−1, 1], [1, 1]]
        let halves_b = [[s(-1, 2, 2), s(1, 2, 2)], [s(1, 2, 2), s(1, 2, 2)]];

        let block =
            |rows: [u8; 2], cols: [u8; 2], entries: [[Surd; 2]; 2], inferred: bool| FMatrix {
                rows: rows.map(l),
                cols: cols.map(l),
                entries,
                inferred,
            };
        let mut f = BTreeMap::new();
        f.insert(
            FKey::new(1, 1, 3, 3),
            block([2, 4], [0, 2], thirds_a, false),
        );
        f.insert(
            FKey::new(3, 1, 1, 3),
            block([0, 2], [2, 4], thirds_a, false),
        );
        f.insert(
            FKey::new(3, 3, 2, 2),
            block([1, 3], [0, 2], halves_a, false),
        );
        f.insert(
            FKey::new(1, 1, 2, 2),
            block([1, 3], [0, 2], halves_b, false),
        );
        f.insert(
            FKey::new(1, 3, 1, 3),
            block([2, 4], [2, 4], thirds_b, false),
        );
        f.insert(
            FKey::new(1, 3, 3, 1),
            block([0, 2], [2, 4], thirds_a, false),
        );
        f.insert(
            FKey::new(3, 3, 1, 1),
            block([2, 4], [0, 2], thirds_a, false),
        );
        // Not tabulated; the X↔X′ image of F^{131}_3.
        f.insert(FKey::new(3, 1, 3, 1), block([2, 4], [2, 4], thirds_b, true));

        let mut r = BTreeMap::new();
        r.insert(RKey::new(1, 1, 0), 9);
        r.insert(RKey::new(1, 1, 2), 1);
        r.insert(RKey::new(1, 3, 2), 7);
        r.insert(RKey::new(3, 1, 2), 7);
        r.insert(RKey::new(1, 3, 4), 3);
        r.insert(RKey::new(3, 1, 4), 3);
        r.insert(RKey::new(3, 3, 0), -3);
        r.insert(RKey::new(3, 3, 2), -11);
        Self { f, r }
    }

    pub fn f_matrix(&self, key: FKey) -> Result<&FMatrix, AnyonError> {
        self.f
            .get(&key)
            .ok_or_else(|| AnyonError::UnknownF(key.to_string()))
    }

    /// Exponent k with R = e^{iπk/12}.
    pub fn r_exponent(&self, key: RKey) -> Result<i64, AnyonError> {
        self.r
            .get(&key)
            .copied()
            .ok_or_else(|| AnyonError::UnknownR(key.to_string()))
    }

    pub fn r_symbol(&self, key: RKey) -> Result<ExactComplex, AnyonError> {
        Ok(ExactComplex::root24(self.r_exponent(key)?))
    }

    pub fn f_keys(&self) -> impl Iterator<Item = &FKey> {
        self.f.keys()
    }

    pub fn r_keys(&self) -> impl Iterator<Item = &RKey> {
        self.r.keys()
    }

    pub fn to_json(&self) -> Value {
        let f: Vec<Value> = self
            .f
            .iter()
            .map(|(k, m)| {
                json!({
                    "symbol": k.to_string(),
                    "rows": m.rows.map(u8::from),
                    "cols": m.cols.map(u8::from),
                    "exact": m.entries.iter().map(|row| row.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "matrix": m.to_cmatrix::<f64>().to_json(),
                    "inferred": m.inferred,
                })
            })
            .collect();
        let r: Vec<Value> = self
            .r
            .iter()
            .map(|(k, e)| json!({ "symbol": k.to_string(), "phase_pi_over_12": e }))
            .collect();
        json!({ "f": f, "r": r })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{cabs, BigFloat};

    #[test]
    fn f113_matches_table() {
        let t = FRTable::global();
        let f = t
            .f_matrix(FKey::new(1, 1, 3, 3))
            .unwrap()
            .to_cmatrix::<f64>();
        let r3 = 3f64.sqrt();
        let expect = CMatrix::from_real_rows(&[
            &[-2f64.sqrt() / r3, 1.0 / r3],
            &[1.0 / r3, 2f64.sqrt() / r3],
        ]);
        assert!(f.close_to(&expect, 1e-15));
    }

    #[test]
    fn r11_0_is_three_quarter_turn() {
        let t = FRTable::global();
        let z = t.r_symbol(RKey::new(1, 1, 0)).unwrap().to_complex::<f64>();
        let expect = num_complex::Complex64::from_polar(1.0, 3.0 * std::f64::consts::PI / 4.0);
        assert!((z - expect).norm() < 1e-15);
    }

    #[test]
    fn every_f_block_is_real_symmetric_involutory() {
        let t = FRTable::global();
        for k in t.f_keys() {
            let m = t.f_matrix(*k).unwrap();
            assert!(m.is_symmetric(), "{k}");
            assert!(m.is_involutory(), "{k}");
            let f = m.to_cmatrix::<f64>();
            let resid = f.mul(&f).max_abs_diff(&CMatrix::identity(2)).unwrap();
            assert!(resid <= 1e-15, "{k}: {resid:e}");
        }
    }

    #[test]
    fn every_r_symbol_has_unit_modulus() {
        let t = FRTable::global();
        for k in t.r_keys() {
            let z = t.r_symbol(*k).unwrap();
            assert_eq!(z.norm_sqr(), Surd::rational(1, 1));
            let big = z.to_complex::<BigFloat<256>>();
            let dev = (cabs(&big) - BigFloat::<256>::from_ratio(1, 1)).abs();
            assert!(
                dev <= BigFloat::<256>::epsilon() * BigFloat::from_ratio(8, 1),
                "{k}"
            );
        }
    }

    #[test]
    fn z_fusion_symmetry_of_r_symbols() {
        // R^{33}_c = −R^{11}_c and the mixed symbols agree.
        let t = FRTable::global();
        for c in [0u8, 2] {
            let a = t.r_symbol(RKey::new(1, 1, c)).unwrap();
            let b = t.r_symbol(RKey::new(3, 3, c)).unwrap();
            assert_eq!(a, -b);
        }
        for c in [2u8, 4] {
            assert_eq!(
                t.r_exponent(RKey::new(1, 3, c)),
                t.r_exponent(RKey::new(3, 1, c))
            );
        }
    }

    #[test]
    fn missing_symbols_are_named() {
        let t = FRTable::global();
        let err = t.f_matrix(FKey::new(2, 2, 2, 2)).unwrap_err();
        assert_eq!(err.to_string(), "no F-matrix F^{222}_2 in the table");
        assert!(matches!(
            t.r_symbol(RKey::new(2, 2, 0)),
            Err(AnyonError::UnknownR(_))
        ));
    }
}
