use serde::{Deserialize, Serialize};

/// One letter of a braidword: a generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn gen(generator: usize) -> Self {
        Self {
            generator,
            inverse: false,
        }
    }

    pub fn inv(generator: usize) -> Self {
        Self {
            generator,
            inverse: true,
        }
    }

    pub fn inverted(self) -> Self {
        Self {
            generator: self.generator,
            inverse: !self.inverse,
        }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.generator == other.generator && self.inverse != other.inverse
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductOrder {
    /// U = M(w₁)·M(w₂)·…·M(wₙ).
    #[default]
    LeftToRight,
    /// U = M(wₙ)·…·M(w₁).
    RightToLeft,
}

/// A finite sequence of letters.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BraidWord(Vec<Letter>);

impl BraidWord {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, l: Letter) {
        self.0.push(l);
    }

    pub fn concat(&self, other: &BraidWord) -> BraidWord {
        BraidWord(self.0.iter().chain(other.0.iter()).copied().collect())
    }

    /// The word whose matrix is the inverse: reversed, each letter inverted.
    pub fn inverse(&self) -> BraidWord {
        BraidWord(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    pub fn uses_inverses(&self) -> bool {
        self.0.iter().any(|l| l.inverse)
    }

    /// No adjacent `x x⁻¹` pair.
    pub fn is_freely_reduced(&self) -> bool {
        self.0.windows(2).all(|w| !w[0].cancels(w[1]))
    }

    pub fn free_reduce(&self) -> BraidWord {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            match out.last() {
                Some(&prev) if prev.cancels(l) => {
                    out.pop();
                }
                _ => out.push(l),
            }
        }
        BraidWord(out)
    }
}

impl FromIterator<Letter> for BraidWord {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        BraidWord(iter.into_iter().collect())
    }
}
