//! Objectives, search records and brute-force enumeration of braidwords.

mod exhaustive;
pub(crate) mod kernel;
mod objective;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::{CodecError, LetterCodec};
use crate::ebm::{Arity, BraidWord, EbmError, EbmSource};
use crate::metrics::MetricsError;
use crate::numerics::{Backend, NumericsError, Real};
use crate::with_backend;

pub use exhaustive::{exhaustive_search, node_count, LengthResult, SearchConfig, SearchOutcome};
pub use objective::{
    evaluate_matrix, evaluate_word, Evaluation, Objective, ObjectiveKind, Target,
    LEAKAGE_TOLERANCE, LEAKY_OFFSET,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SearchError {
    #[error("objective {objective} does not apply to {arity:?} generators")]
    ArityMismatch { objective: String, arity: Arity },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Ebm(#[from] EbmError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Codec(#[from] CodecError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exhaustive,
    Ga,
    Ska,
    Given,
}

/// Where a GA result came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub restart: usize,
    pub generation: usize,
}

/// One evaluated word, with values computed at `backend`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchRecord {
    pub model: String,
    pub arity: Arity,
    pub objective: String,
    pub method: Method,
    pub word: String,
    pub length: usize,
    /// Minimized value; equals `distance` for admissible words.
    pub score: f64,
    pub distance: Option<f64>,
    /// `distance` at full backend precision.
    pub distance_decimal: Option<String>,
    pub native_score: Option<f64>,
    pub m11_abs: Option<f64>,
    pub unitarity_defect: Option<f64>,
    pub off_block_norm: Option<f64>,
    pub admissible: bool,
    pub backend: Backend,
    pub provenance: Option<Provenance>,
}

impl SearchRecord {
    /// Evaluates `word` at `backend` and packages the result.
    pub fn evaluate(
        source: &EbmSource,
        arity: Arity,
        kind: &ObjectiveKind,
        backend: Backend,
        word: &BraidWord,
        method: Method,
    ) -> Result<Self, SearchError> {
        Ok(Self::evaluate_batch(
            source,
            arity,
            kind,
            backend,
            std::slice::from_ref(word),
            method,
        )?
        .remove(0))
    }

    pub fn evaluate_batch(
        source: &EbmSource,
        arity: Arity,
        kind: &ObjectiveKind,
        backend: Backend,
        words: &[BraidWord],
        method: Method,
    ) -> Result<Vec<Self>, SearchError> {
        with_backend!(backend, R => {
            let ebms = source.build::<R>(arity)?;
            let codec = LetterCodec::new(arity);
            words
                .iter()
                .map(|w| {
                    let ev = evaluate_word(kind, &ebms, w)?;
                    Ok(Self::from_evaluation(source, arity, kind, backend, codec.encode(w)?, w.len(), &ev, method))
                })
                .collect()
        })
    }

    #[allow(clippy::too_many_arguments)]
    fn from_evaluation<R: Real>(
        source: &EbmSource,
        arity: Arity,
        kind: &ObjectiveKind,
        backend: Backend,
        word: String,
        length: usize,
        ev: &Evaluation<R>,
        method: Method,
    ) -> Self {
        Self {
            model: source.label(),
            arity,
            objective: kind.to_string(),
            method,
            word,
            length,
            score: ev.score.to_f64(),
            distance: ev.distance.as_ref().map(Real::to_f64),
            distance_decimal: ev.distance.as_ref().map(Real::to_decimal_string),
            native_score: None,
            m11_abs: ev.m11_abs.as_ref().map(Real::to_f64),
            unitarity_defect: ev.unitarity_defect.as_ref().map(Real::to_f64),
            off_block_norm: ev.off_block_norm.as_ref().map(Real::to_f64),
            admissible: ev.admissible,
            backend,
            provenance: None,
        }
    }

    /// Alphabet-order key used for tie-breaking (generators before inverses).
    pub fn word_key(&self) -> Vec<u8> {
        let codec = LetterCodec::new(self.arity);
        let n = self.arity.generator_count();
        match codec.decode(&self.word) {
            Ok(w) => w
                .letters()
                .iter()
                .map(|&l| kernel::letter_to_index(l, n))
                .collect(),
            Err(_) => self.word.bytes().collect(),
        }
    }
}

/// Orders by score, then by word in alphabet order.
pub fn compare_records(a: &SearchRecord, b: &SearchRecord) -> std::cmp::Ordering {
    a.score
        .total_cmp(&b.score)
        .then_with(|| a.word_key().cmp(&b.word_key()))
}

/// Top-`k` records per length, ordered by score then word.
pub fn rank_words(records: &[SearchRecord], k: usize) -> Vec<(usize, Vec<SearchRecord>)> {
    let mut lengths: Vec<usize> = records.iter().map(|r| r.length).collect();
    lengths.sort_unstable();
    lengths.dedup();
    lengths
        .into_iter()
        .map(|len| {
            let mut group: Vec<SearchRecord> = records
                .iter()
                .filter(|r| r.length == len)
                .cloned()
                .collect();
            group.sort_by(compare_records);
            group.truncate(k);
            (len, group)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anyon::ModelSpec;

    fn rec(word: &str, score: f64) -> SearchRecord {
        SearchRecord {
            model: "V113_3".into(),
            arity: Arity::TwoQubit,
            objective: "cnot".into(),
            method: Method::Exhaustive,
            word: word.into(),
            length: word.len(),
            score,
            distance: Some(score),
            distance_decimal: None,
            native_score: None,
            m11_abs: None,
            unitarity_defect: None,
            off_block_norm: None,
            admissible: true,
            backend: Backend::Native64,
            provenance: None,
        }
    }

    #[test]
    fn ranking_breaks_ties_lexicographically() {
        let rs = vec![
            rec("BA", 1.0),
            rec("AB", 1.0),
            rec("CC", 0.5),
            rec("A", 3.0),
        ];
        let ranked = rank_words(&rs, 2);
        assert_eq!(ranked.len(), 2);
        assert_eq!(ranked[0].1[0].word, "A");
        let words: Vec<_> = ranked[1].1.iter().map(|r| r.word.as_str()).collect();
        assert_eq!(words, ["CC", "AB"]);
        assert_eq!(rank_words(&rs, 10)[1].1.len(), 3);
    }

    #[test]
    fn one_qubit_tie_break_puts_generators_first() {
        let mut a = rec("A", 1.0);
        let mut b = rec("b", 1.0);
        a.arity = Arity::OneQubit;
        b.arity = Arity::OneQubit;
        assert_eq!(compare_records(&b, &a), std::cmp::Ordering::Less);
    }

    #[test]
    fn evaluate_identity_word() {
        let w = LetterCodec::new(Arity::TwoQubit).decode("AF").unwrap();
        let r = SearchRecord::evaluate(
            &ModelSpec::v113_3().into(),
            Arity::TwoQubit,
            &ObjectiveKind::CnotLocalClass,
            Backend::default(),
            &w,
            Method::Given,
        )
        .unwrap();
        assert!((r.score - 5.0).abs() < 1e-12);
        assert!(r.admissible);
    }

    #[test]
    fn arity_mismatch_is_reported() {
        let obj = Objective::cnot(Backend::Native64);
        assert!(obj.check_arity(Arity::OneQubit).is_err());
    }
}
