use std::fmt;

use serde::{Deserialize, Serialize};

use super::SearchError;
use crate::ebm::{split_blocks, Arity, BraidWord, EbmSet};
use crate::metrics::{
    cnot_distance, global_phase_distance, unitarity_defect, GateName, GateTarget,
};
use crate::numerics::{cabs, Backend, CMatrix, Real};

/// Words whose |M₁₁| differs from 1 by more than this leak out of the
/// computational space and are ranked after every leak-free word.
pub const LEAKAGE_TOLERANCE: f64 = 1e-9;

/// Score offset for leaky two-qubit words.
pub const LEAKY_OFFSET: f64 = 100.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    H,
    T,
    /// Row-major 2×2 entries as (re, im).
    Custom {
        label: String,
        entries: Vec<(f64, f64)>,
    },
}

impl Target {
    pub fn parse(name: &str) -> Option<Self> {
        match name.to_ascii_uppercase().as_str() {
            "H" => Some(Target::H),
            "T" => Some(Target::T),
            _ => None,
        }
    }

    pub fn label(&self) -> &str {
        match self {
            Target::H => "H",
            Target::T => "T",
            Target::Custom { label, .. } => label,
        }
    }

    pub fn gate<R: Real>(&self) -> Result<GateTarget<R>, SearchError> {
        match self {
            Target::H => Ok(GateTarget::h()),
            Target::T => Ok(GateTarget::t()),
            Target::Custom { label, entries } => {
                if entries.len() != 4 {
                    return Err(SearchError::InvalidConfig(format!(
                        "custom target {label} needs 4 entries"
                    )));
                }
                let c = |k: usize| {
                    num_complex::Complex::new(R::from_f64(entries[k].0), R::from_f64(entries[k].1))
                };
                let m = CMatrix::from_rows(vec![vec![c(0), c(1)], vec![c(2), c(3)]])?;
                Ok(GateTarget::custom(label, m)?)
            }
        }
    }

    pub fn from_gate(g: &GateTarget<f64>) -> Self {
        match g.name {
            GateName::H => Target::H,
            GateName::T => Target::T,
            _ => Target::Custom {
                label: g.label.clone(),
                entries: g.matrix.entries().iter().map(|z| (z.re, z.im)).collect(),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ObjectiveKind {
    OneQubitGate(Target),
    CnotLocalClass,
}

impl ObjectiveKind {
    pub fn arity(&self) -> Arity {
        match self {
            ObjectiveKind::OneQubitGate(_) => Arity::OneQubit,
            ObjectiveKind::CnotLocalClass => Arity::TwoQubit,
        }
    }
}

impl fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectiveKind::OneQubitGate(t) => write!(f, "gate:{}", t.label()),
            ObjectiveKind::CnotLocalClass => write!(f, "cnot"),
        }
    }
}

/// What is minimized, and at which precision reported values are computed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Objective {
    pub kind: ObjectiveKind,
    pub backend: Backend,
}

impl Objective {
    pub fn cnot(backend: Backend) -> Self {
        Self {
            kind: ObjectiveKind::CnotLocalClass,
            backend,
        }
    }

    pub fn gate(target: Target, backend: Backend) -> Self {
        Self {
            kind: ObjectiveKind::OneQubitGate(target),
            backend,
        }
    }

    pub fn check_arity(&self, arity: Arity) -> Result<(), SearchError> {
        if self.kind.arity() == arity {
            Ok(())
        } else {
            Err(SearchError::ArityMismatch {
                objective: self.kind.to_string(),
                arity,
            })
        }
    }
}

/// Full evaluation of one word.
#[derive(Clone, Debug)]
pub struct Evaluation<R: Real> {
    /// Value that is minimized.
    pub score: R,
    /// Distance to the target; `None` for leaky two-qubit words.
    pub distance: Option<R>,
    pub m11_abs: Option<R>,
    pub unitarity_defect: Option<R>,
    pub off_block_norm: Option<R>,
    pub admissible: bool,
}

pub fn evaluate_matrix<R: Real>(
    kind: &ObjectiveKind,
    u: &CMatrix<R>,
) -> Result<Evaluation<R>, SearchError> {
    match kind {
        ObjectiveKind::OneQubitGate(t) => {
            let d = global_phase_distance(&t.gate::<R>()?.matrix, u)?;
            Ok(Evaluation {
                score: d.clone(),
                distance: Some(d),
                m11_abs: None,
                unitarity_defect: None,
                off_block_norm: None,
                admissible: true,
            })
        }
        ObjectiveKind::CnotLocalClass => {
            let blocks = split_blocks(u)?;
            let m11 = cabs(&blocks.m11);
            let defect = unitarity_defect(&blocks.a)?;
            let leak = (R::one() - m11.clone()).abs();
            let admissible = leak.to_f64() <= LEAKAGE_TOLERANCE;
            let distance = if admissible {
                Some(cnot_distance(&blocks.a)?)
            } else {
                None
            };
            let score = match &distance {
                Some(d) => d.clone(),
                None => R::from_f64(LEAKY_OFFSET) + leak,
            };
            Ok(Evaluation {
                score,
                distance,
                m11_abs: Some(m11),
                unitarity_defect: Some(defect),
                off_block_norm: Some(blocks.off_block_norm),
                admissible,
            })
        }
    }
}

pub fn evaluate_word<R: Real>(
    kind: &ObjectiveKind,
    ebms: &EbmSet<R>,
    word: &BraidWord,
) -> Result<Evaluation<R>, SearchError> {
    evaluate_matrix(kind, &ebms.braidword_unitary(word)?)
}
