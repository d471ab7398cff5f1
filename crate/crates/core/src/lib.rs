//! Braidword compilation over SO(3)₂ metaplectic anyons.
//!
//! The crate builds elementary braid matrices from the anyon model's F/R
//! data, evaluates braidwords, and searches for words approximating one-qubit
//! gates (genetic algorithm + Solovay-Kitaev) and the CNOT local-equivalence
//! class (exhaustive enumeration + genetic algorithm).

#![allow(clippy::needless_range_loop)]

pub mod anyon;
pub mod codec;
pub mod ebm;
pub mod ga;
pub mod metrics;
pub mod numerics;
pub mod report;
pub mod search;
pub mod ska;
