//! SO(3)₂ fusion algebra, F/R data and qubit-model enumeration.
//!
//! Anyons are labelled by twice their topological spin, so the truncated
//! Clebsch-Gordan rule becomes integer arithmetic with level 4.

mod tables;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use tables::{FKey, FMatrix, FRTable, RKey};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnyonError {
    #[error("anyon label {0} outside 0..=4")]
    InvalidLabel(u8),
    #[error("unknown anyon name {0:?}")]
    UnknownName(String),
    #[error("no F-matrix {0} in the table")]
    UnknownF(String),
    #[error("no R-symbol {0} in the table")]
    UnknownR(String),
    #[error("cannot parse model {0:?}; expected e.g. V113_3")]
    BadModelName(String),
    #[error("model {0} is not one of the 28 candidate encodings")]
    NotCandidate(String),
}

/// Twice the topological spin: 0 ↔ 1, 1 ↔ X, 2 ↔ Y, 3 ↔ X′, 4 ↔ Z.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct AnyonLabel(u8);

impl AnyonLabel {
    pub const VACUUM: Self = Self(0);
    pub const X: Self = Self(1);
    pub const Y: Self = Self(2);
    pub const XP: Self = Self(3);
    pub const Z: Self = Self(4);

    pub const ALL: [Self; 5] = [Self::VACUUM, Self::X, Self::Y, Self::XP, Self::Z];

    pub fn new(value: u8) -> Result<Self, AnyonError> {
        if value <= 4 {
            Ok(Self(value))
        } else {
            Err(AnyonError::InvalidLabel(value))
        }
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn name(self) -> &'static str {
        ["1", "X", "Y", "X′", "Z"][self.0 as usize]
    }

    /// Image under fusion with Z, which exchanges X and X′ and fixes the rest.
    pub fn z_image(self) -> Self {
        match self.0 {
            1 => Self::XP,
            3 => Self::X,
            _ => self,
        }
    }
}

impl TryFrom<u8> for AnyonLabel {
    type Error = AnyonError;
    fn try_from(v: u8) -> Result<Self, AnyonError> {
        Self::new(v)
    }
}

impl From<AnyonLabel> for u8 {
    fn from(a: AnyonLabel) -> u8 {
        a.0
    }
}

impl fmt::Display for AnyonLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AnyonLabel {
    type Err = AnyonError;
    fn from_str(s: &str) -> Result<Self, AnyonError> {
        match s.trim() {
            "1" | "0" => Ok(Self::VACUUM),
            "X" => Ok(Self::X),
            "Y" => Ok(Self::Y),
            "X′" | "X'" | "Xp" => Ok(Self::XP),
            "Z" => Ok(Self::Z),
            other => Err(AnyonError::UnknownName(other.to_string())),
        }
    }
}

/// Fusion channels of `a ⊗ b`, ascending.
pub fn fusion_product(a: AnyonLabel, b: AnyonLabel) -> Vec<AnyonLabel> {
    let (a, b) = (a.0, b.0);
    let lo = a.abs_diff(b);
    let hi = (a + b).min(8 - a - b);
    (lo..=hi).step_by(2).map(AnyonLabel).collect()
}

/// A three-anyon qubit encoding `V^{abc}_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModelSpec {
    pub initial: [AnyonLabel; 3],
    pub total_charge: AnyonLabel,
    /// Fusion outcomes of the first two anyons encoding |0⟩ and |1⟩.
    pub channels: [AnyonLabel; 2],
}

impl ModelSpec {
    /// Builds a model, checking that it encodes a qubit.
    pub fn new(initial: [AnyonLabel; 3], total_charge: AnyonLabel) -> Option<Self> {
        let ch = fusion_product(initial[0], initial[1]);
        if ch.len() != 2 {
            return None;
        }
        let channels = [ch[0], ch[1]];
        let admissible = channels
            .iter()
            .all(|&c| fusion_product(c, initial[2]).contains(&total_charge));
        admissible.then_some(Self {
            initial,
            total_charge,
            channels,
        })
    }

    fn digits(&self) -> String {
        self.initial.iter().map(|a| a.0.to_string()).collect()
    }

    /// Typeset name, `V^{113}_3`.
    pub fn name(&self) -> String {
        format!("V^{{{}}}_{}", self.digits(), self.total_charge.0)
    }

    /// File- and CLI-friendly identifier, `V113_3`.
    pub fn id(&self) -> String {
        format!("V{}_{}", self.digits(), self.total_charge.0)
    }

    /// The encoding obtained by exchanging X and X′ everywhere.
    pub fn z_conjugate(&self) -> Self {
        let initial = self.initial.map(AnyonLabel::z_image);
        Self::new(initial, self.total_charge.z_image())
            .expect("Z-conjugation preserves admissibility")
    }

    pub fn is_braidable(&self) -> bool {
        self.initial
            .windows(2)
            .all(|w| w[0] == w[1] || matches!((w[0].0, w[1].0), (1, 3) | (3, 1)))
    }

    pub fn v113_3() -> Self {
        "V113_3".parse().unwrap()
    }
    pub fn v131_3() -> Self {
        "V131_3".parse().unwrap()
    }
    pub fn v133_1() -> Self {
        "V133_1".parse().unwrap()
    }

    /// The three encodings studied in depth.
    pub fn studied() -> [Self; 3] {
        [Self::v113_3(), Self::v131_3(), Self::v133_1()]
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id())
    }
}

impl FromStr for ModelSpec {
    type Err = AnyonError;

    /// Accepts `V113_3`, `V^{113}_3` and `113_3`.
    fn from_str(s: &str) -> Result<Self, AnyonError> {
        let bad = || AnyonError::BadModelName(s.to_string());
        let digits: Vec<u8> = s
            .chars()
            .filter(|c| c.is_ascii_digit())
            .map(|c| c as u8 - b'0')
            .collect();
        if digits.len() != 4 {
            return Err(bad());
        }
        let label = |d: u8| AnyonLabel::new(d).map_err(|_| bad());
        let initial = [label(digits[0])?, label(digits[1])?, label(digits[2])?];
        let model = ModelSpec::new(initial, label(digits[3])?).ok_or_else(bad)?;
        if enumerate_candidate_models().contains(&model) {
            Ok(model)
        } else {
            Err(AnyonError::NotCandidate(model.id()))
        }
    }
}

// Ordered first/second anyon pairs with exactly two fusion channels.
const QUBIT_PAIRS: [(u8, u8); 8] = [
    (1, 1),
    (3, 3),
    (1, 2),
    (2, 1),
    (1, 3),
    (3, 1),
    (2, 3),
    (3, 2),
];

/// All 28 three-anyon qubit encodings.
pub fn enumerate_candidate_models() -> Vec<ModelSpec> {
    let mut out = Vec::new();
    for (a, b) in QUBIT_PAIRS {
        for c in AnyonLabel::ALL {
            for d in AnyonLabel::ALL {
                if let Some(m) = ModelSpec::new([AnyonLabel(a), AnyonLabel(b), c], d) {
                    out.push(m);
                }
            }
        }
    }
    out
}

/// Keeps the encodings whose adjacent distinct anyons are all X/X′ pairs,
/// which the Z-pair insertion restores after an exchange.
pub fn filter_braidable(models: &[ModelSpec]) -> Result<Vec<ModelSpec>, AnyonError> {
    let candidates = enumerate_candidate_models();
    if let Some(m) = models.iter().find(|m| !candidates.contains(m)) {
        return Err(AnyonError::NotCandidate(m.id()));
    }
    Ok(models
        .iter()
        .copied()
        .filter(ModelSpec::is_braidable)
        .collect())
}

/// Standard encodings reported unable to build H/T gates; dropped from the qubit classes.
pub fn standard_encodings() -> [ModelSpec; 2] {
    ["V111_1".parse().unwrap(), "V333_3".parse().unwrap()]
}

/// Relation between the one-qubit generators of two Z-conjugate models.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhaseDifference {
    /// σ₁⁽³⁾ differs by a global phase π.
    Sigma1Pi,
    /// Identical generators.
    Same,
    /// σ₂⁽³⁾ differs by a global phase π.
    Sigma2Pi,
}

impl PhaseDifference {
    pub fn describe(&self) -> &'static str {
        match self {
            PhaseDifference::Sigma1Pi => "σ₁⁽³⁾ differs by π",
            PhaseDifference::Same => "same",
            PhaseDifference::Sigma2Pi => "σ₂⁽³⁾ differs by π",
        }
    }
}

/// A pair of Z-conjugate qubit models and how their generators differ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelClass {
    pub first: ModelSpec,
    pub second: ModelSpec,
    pub phase_difference: PhaseDifference,
}

/// The three classes of usable qubit models.
///
/// Exchanging identical anyons picks up R^{11} or R^{33} = −R^{11}; exchanging
/// X with X′ is unchanged by conjugation. Hence a generator flips sign exactly
/// when it braids two anyons of the same kind.
pub fn qubit_model_classes() -> Vec<ModelClass> {
    let braidable = filter_braidable(&enumerate_candidate_models()).expect("candidates");
    let excluded = standard_encodings();
    let usable: Vec<ModelSpec> = braidable
        .into_iter()
        .filter(|m| !excluded.contains(m))
        .collect();
    let mut classes = Vec::new();
    let mut seen: Vec<ModelSpec> = Vec::new();
    for m in usable.iter() {
        if seen.contains(m) {
            continue;
        }
        let partner = m.z_conjugate();
        seen.push(*m);
        seen.push(partner);
        let flips = [m.initial[0] == m.initial[1], m.initial[1] == m.initial[2]];
        let phase_difference = match flips {
            [true, false] => PhaseDifference::Sigma1Pi,
            [false, true] => PhaseDifference::Sigma2Pi,
            _ => PhaseDifference::Same,
        };
        // The member with total charge X′ is listed first.
        let (first, second) = if m.total_charge == AnyonLabel::XP {
            (*m, partner)
        } else {
            (partner, *m)
        };
        classes.push(ModelClass {
            first,
            second,
            phase_difference,
        });
    }
    classes
}

/// Every model appearing in [`qubit_model_classes`].
pub fn qubit_models() -> Vec<ModelSpec> {
    qubit_model_classes()
        .iter()
        .flat_map(|c| [c.first, c.second])
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(v: u8) -> AnyonLabel {
        AnyonLabel::new(v).unwrap()
    }

    #[test]
    fn fusion_examples() {
        assert_eq!(fusion_product(l(1), l(1)), vec![l(0), l(2)]);
        assert_eq!(fusion_product(l(0), l(3)), vec![l(3)]);
        assert_eq!(fusion_product(l(2), l(2)), vec![l(0), l(2), l(4)]);
        assert_eq!(fusion_product(l(4), l(4)), vec![l(0)]);
    }

    #[test]
    fn fusion_rules_listed_for_metaplectic_anyons() {
        use AnyonLabel as A;
        let cases = [
            (A::X, A::Y, vec![A::X, A::XP]),
            (A::X, A::XP, vec![A::Y, A::Z]),
            (A::XP, A::Z, vec![A::X]),
            (A::Y, A::Z, vec![A::Y]),
            (A::XP, A::XP, vec![A::VACUUM, A::Y]),
            (A::Y, A::XP, vec![A::X, A::XP]),
            (A::X, A::Z, vec![A::XP]),
        ];
        for (a, b, want) in cases {
            assert_eq!(fusion_product(a, b), want, "{a} ⊗ {b}");
        }
    }

    #[test]
    fn fusion_is_commutative_and_unital() {
        for a in AnyonLabel::ALL {
            assert_eq!(fusion_product(AnyonLabel::VACUUM, a), vec![a]);
            for b in AnyonLabel::ALL {
                assert_eq!(fusion_product(a, b), fusion_product(b, a));
            }
        }
    }

    #[test]
    fn labels_and_names() {
        assert!(AnyonLabel::new(5).is_err());
        let names: Vec<_> = AnyonLabel::ALL.iter().map(|a| a.name()).collect();
        assert_eq!(names, ["1", "X", "Y", "X′", "Z"]);
        for a in AnyonLabel::ALL {
            assert_eq!(a.name().parse::<AnyonLabel>().unwrap(), a);
        }
    }

    #[test]
    fn twenty_eight_candidates_in_listed_order() {
        let ids: Vec<String> = enumerate_candidate_models()
            .iter()
            .map(|m| m.id())
            .collect();
        let expect = "V111_1 V112_2 V113_3 V331_1 V332_2 V333_3 V121_2 V122_1 V122_3 V123_2 \
                      V211_2 V212_1 V212_3 V213_2 V131_3 V132_2 V133_1 V311_3 V312_2 V313_1 \
                      V231_2 V232_1 V232_3 V233_2 V321_2 V322_1 V322_3 V323_2";
        assert_eq!(ids.join(" "), expect);
    }

    #[test]
    fn channels_are_the_two_fusion_outcomes() {
        for m in enumerate_candidate_models() {
            assert_eq!(
                fusion_product(m.initial[0], m.initial[1]),
                m.channels.to_vec()
            );
            for c in m.channels {
                assert!(fusion_product(c, m.initial[2]).contains(&m.total_charge));
            }
        }
    }

    #[test]
    fn braidable_models() {
        let ids: Vec<String> = filter_braidable(&enumerate_candidate_models())
            .unwrap()
            .iter()
            .map(|m| m.id())
            .collect();
        assert_eq!(
            ids,
            ["V111_1", "V113_3", "V331_1", "V333_3", "V131_3", "V133_1", "V311_3", "V313_1"]
        );
        let v121: ModelSpec = "V121_2".parse().unwrap();
        assert!(!v121.is_braidable());
        assert!(ModelSpec::v113_3().is_braidable());
    }

    #[test]
    fn filter_rejects_foreign_models() {
        let fake = ModelSpec {
            initial: [l(1), l(1), l(3)],
            total_charge: l(1),
            channels: [l(0), l(2)],
        };
        assert!(matches!(
            filter_braidable(&[fake]),
            Err(AnyonError::NotCandidate(_))
        ));
    }

    #[test]
    fn three_classes_of_two() {
        let classes = qubit_model_classes();
        let rows: Vec<(String, String, PhaseDifference)> = classes
            .iter()
            .map(|c| (c.first.id(), c.second.id(), c.phase_difference))
            .collect();
        assert_eq!(
            rows,
            vec![
                ("V113_3".into(), "V331_1".into(), PhaseDifference::Sigma1Pi),
                ("V131_3".into(), "V313_1".into(), PhaseDifference::Same),
                ("V311_3".into(), "V133_1".into(), PhaseDifference::Sigma2Pi),
            ]
        );
        let all = qubit_models();
        assert_eq!(all.len(), 6);
        assert!(!all.contains(&"V111_1".parse().unwrap()));
        assert!(!all.contains(&"V333_3".parse().unwrap()));
    }

    #[test]
    fn model_names_parse() {
        let m: ModelSpec = "V^{113}_3".parse().unwrap();
        assert_eq!(m.id(), "V113_3");
        assert_eq!(m.name(), "V^{113}_3");
        assert_eq!(m.channels, [l(0), l(2)]);
        assert!("V114_3".parse::<ModelSpec>().is_err());
        assert!("V11".parse::<ModelSpec>().is_err());
        assert_eq!(ModelSpec::v113_3().z_conjugate().id(), "V331_1");
    }
}
