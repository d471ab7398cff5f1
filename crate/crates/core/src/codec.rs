//! Text encoding of braidwords.
//!
//! Two-qubit words use `A`–`E` for σ₁…σ₅ and `F`–`J` for their inverses.
//! One-qubit words use `a`, `b` for σ₁, σ₂ and `A`, `B` for the inverses.

use thiserror::Error;

use crate::ebm::{Arity, BraidWord, Letter};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodecError {
    #[error("unknown letter {letter:?} at position {position} for {arity:?} words")]
    UnknownLetter {
        letter: char,
        position: usize,
        arity: Arity,
    },
    #[error("generator {0} has no letter")]
    Unencodable(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LetterCodec {
    arity: Arity,
}

impl LetterCodec {
    pub fn new(arity: Arity) -> Self {
        Self { arity }
    }

    pub fn arity(&self) -> Arity {
        self.arity
    }

    pub fn encode_letter(&self, l: Letter) -> Result<char, CodecError> {
        let n = self.arity.generator_count();
        if l.generator >= n {
            return Err(CodecError::Unencodable(l.generator));
        }
        let g = l.generator as u8;
        Ok(match (self.arity, l.inverse) {
            (Arity::TwoQubit, false) => b'A' + g,
            (Arity::TwoQubit, true) => b'F' + g,
            (Arity::OneQubit, false) => b'a' + g,
            (Arity::OneQubit, true) => b'A' + g,
        } as char)
    }

    pub fn decode_letter(&self, c: char, position: usize) -> Result<Letter, CodecError> {
        let bad = CodecError::UnknownLetter {
            letter: c,
            position,
            arity: self.arity,
        };
        let n = self.arity.generator_count();
        let idx = |base: char| {
            (c as u32)
                .checked_sub(base as u32)
                .map(|d| d as usize)
                .filter(|&d| d < n)
        };
        match self.arity {
            Arity::TwoQubit => match (idx('A'), idx('F')) {
                (Some(g), _) => Ok(Letter::gen(g)),
                (_, Some(g)) => Ok(Letter::inv(g)),
                _ => Err(bad),
            },
            Arity::OneQubit => match (idx('a'), idx('A')) {
                (Some(g), _) => Ok(Letter::gen(g)),
                (_, Some(g)) => Ok(Letter::inv(g)),
                _ => Err(bad),
            },
        }
    }

    pub fn encode(&self, w: &BraidWord) -> Result<String, CodecError> {
        w.letters().iter().map(|&l| self.encode_letter(l)).collect()
    }

    /// Whitespace is ignored.
    pub fn decode(&self, s: &str) -> Result<BraidWord, CodecError> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .enumerate()
            .map(|(i, c)| self.decode_letter(c, i))
            .collect()
    }

    /// Letters in generator-then-inverse order; this is also the tie-break order.
    pub fn alphabet(&self, with_inverses: bool) -> Vec<Letter> {
        let n = self.arity.generator_count();
        let mut out: Vec<Letter> = (0..n).map(Letter::gen).collect();
        if with_inverses {
            out.extend((0..n).map(Letter::inv));
        }
        out
    }
}
