//! Elementary braid matrices (EBMs) and braidword evaluation.

mod fibonacci;
pub mod printed;
mod word;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::anyon::{qubit_models, AnyonError, AnyonLabel, FKey, FRTable, ModelSpec, RKey};
use crate::numerics::{CMatrix, Cx, ExactComplex, ExactMatrix, NumericsError, Real};

pub use word::{BraidWord, Letter, ProductOrder};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EbmError {
    #[error("model {0} has no EBM construction (supported: the six qubit-class models)")]
    UnsupportedModel(String),
    #[error("letter refers to generator {index} but the alphabet has {size}")]
    LetterOutOfRange { index: usize, size: usize },
    #[error("expected a {expected}×{expected} matrix, got {got}×{got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("generator {index} is not unitary (residual {residual:e})")]
    NotUnitary { index: usize, residual: f64 },
    #[error(transparent)]
    Anyon(#[from] AnyonError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Arity {
    OneQubit,
    TwoQubit,
}

impl Arity {
    pub fn generator_count(self) -> usize {
        match self {
            Arity::OneQubit => 2,
            Arity::TwoQubit => 5,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Arity::OneQubit => 2,
            Arity::TwoQubit => 5,
        }
    }

    pub fn from_qubits(n: u8) -> Option<Self> {
        match n {
            1 => Some(Arity::OneQubit),
            2 => Some(Arity::TwoQubit),
            _ => None,
        }
    }
}

/// Where a generator set came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "name")]
pub enum EbmSource {
    Metaplectic(ModelSpec),
    Fibonacci,
    External(String),
}

impl From<ModelSpec> for EbmSource {
    fn from(m: ModelSpec) -> Self {
        EbmSource::Metaplectic(m)
    }
}

impl EbmSource {
    /// Rebuilds the generators at precision `R`; external sets cannot be rebuilt.
    pub fn build<R: Real>(&self, arity: Arity) -> Result<EbmSet<R>, EbmError> {
        match (self, arity) {
            (EbmSource::Metaplectic(m), _) => EbmSet::for_model(m, arity),
            (EbmSource::Fibonacci, Arity::OneQubit) => Ok(EbmSet::fibonacci()),
            _ => Err(EbmError::UnsupportedModel(format!(
                "{} ({arity:?})",
                self.label()
            ))),
        }
    }

    pub fn label(&self) -> String {
        match self {
            EbmSource::Metaplectic(m) => m.id(),
            EbmSource::Fibonacci => "Fibonacci".to_string(),
            EbmSource::External(n) => n.clone(),
        }
    }
}

impl std::str::FromStr for EbmSource {
    type Err = EbmError;

    /// Accepts `fibonacci` or a metaplectic model name such as `V113_3`.
    fn from_str(s: &str) -> Result<Self, EbmError> {
        if s.eq_ignore_ascii_case("fibonacci") || s.eq_ignore_ascii_case("fib") {
            return Ok(EbmSource::Fibonacci);
        }
        Ok(EbmSource::Metaplectic(s.parse()?))
    }
}

/// Exact generators of a metaplectic model, before rounding into a backend.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactEbms {
    pub model: ModelSpec,
    pub arity: Arity,
    pub generators: Vec<ExactMatrix>,
}

impl ExactEbms {
    pub fn instantiate<R: Real>(&self) -> EbmSet<R> {
        EbmSet::from_parts(
            EbmSource::Metaplectic(self.model),
            self.arity,
            self.generators
                .iter()
                .map(ExactMatrix::to_cmatrix)
                .collect(),
            basis_names(&self.model, self.arity),
        )
    }
}

/// A generator alphabet with cached inverses.
#[derive(Clone, Debug)]
pub struct EbmSet<R: Real> {
    pub source: EbmSource,
    pub arity: Arity,
    generators: Vec<CMatrix<R>>,
    inverses: Vec<CMatrix<R>>,
    pub basis: Vec<String>,
}

fn check_model(model: &ModelSpec) -> Result<(), EbmError> {
    if qubit_models().contains(model) {
        Ok(())
    } else {
        Err(EbmError::UnsupportedModel(model.id()))
    }
}

fn r(a: AnyonLabel, b: AnyonLabel, c: AnyonLabel) -> Result<ExactComplex, EbmError> {
    Ok(FRTable::global().r_symbol(RKey { a, b, c })?)
}

fn basis_names(model: &ModelSpec, arity: Arity) -> Vec<String> {
    match arity {
        Arity::OneQubit => vec!["|0⟩".into(), "|1⟩".into()],
        Arity::TwoQubit => {
            let mut names = vec!["|NC⟩".to_string()];
            for x in model.channels {
                for y in model.channels {
                    names.push(format!("|{x}{y}⟩"));
                }
            }
            names
        }
    }
}

/// σ₁⁽³⁾ and σ₂⁽³⁾ of a model, exactly.
///
/// σ₁ is diagonal in the fusion channel of the first pair. σ₂ exchanges
/// the second and third anyons, so it is diagonal in the `b ⊗ c` basis and
/// is carried back by the F-move: σ₂ = Fᵀ·diag(R^{bc}_f)·F.
pub fn exact_one_qubit(model: &ModelSpec) -> Result<ExactEbms, EbmError> {
    check_model(model)?;
    let [a, b, c] = model.initial;
    let s1 = ExactMatrix::diag(&[r(a, b, model.channels[0])?, r(a, b, model.channels[1])?]);
    let f = FRTable::global().f_matrix(FKey {
        a,
        b,
        c,
        d: model.total_charge,
    })?;
    let phases = ExactMatrix::diag(&[r(b, c, f.rows[0])?, r(b, c, f.rows[1])?]);
    let fx = f.exact();
    let s2 = fx.transpose().mul(&phases).mul(&fx);
    Ok(ExactEbms {
        model: *model,
        arity: Arity::OneQubit,
        generators: vec![s1, s2],
    })
}

/// σ₁⁽⁶⁾…σ₅⁽⁶⁾ of a model, exactly, in the basis (|NC⟩, |00⟩, |01⟩, |10⟩, |11⟩).
///
/// The six anyons are the model's triple followed by its mirror image, so the
/// second qubit is read right to left: σ₅ braids its fusion pair and is
/// diagonal, σ₄ carries the F-move. σ₁, σ₂, σ₄, σ₅ leave |NC⟩ invariant with
/// phase R^{ab}_Y of the braided pair. σ₃ exchanges the two identical middle
/// anyons c, c: the (Y,Y) state mixes with |NC⟩ through F^{ccY}_Y, equal
/// channels pick up R^{cc}_1 and unequal channels R^{cc}_Y.
pub fn exact_two_qubit(model: &ModelSpec) -> Result<ExactEbms, EbmError> {
    let one = exact_one_qubit(model)?;
    let (s1, s2) = (&one.generators[0], &one.generators[1]);
    let strand: Vec<AnyonLabel> = model
        .initial
        .iter()
        .chain(model.initial.iter().rev())
        .copied()
        .collect();
    let nc = |i: usize| r(strand[i], strand[i + 1], AnyonLabel::Y);
    let i2 = ExactMatrix::identity(2);
    let lift =
        |s: ExactComplex, m: ExactMatrix| ExactMatrix::direct_sum(&ExactMatrix::diag(&[s]), &m);

    let g1 = lift(nc(0)?, ExactMatrix::kron(s1, &i2));
    let g2 = lift(nc(1)?, ExactMatrix::kron(s2, &i2));
    let g4 = lift(nc(3)?, ExactMatrix::kron(&i2, s2));
    let g5 = lift(nc(4)?, ExactMatrix::kron(&i2, s1));

    let c = model.initial[2];
    let f = FRTable::global().f_matrix(FKey {
        a: c,
        b: c,
        c: AnyonLabel::Y,
        d: AnyonLabel::Y,
    })?;
    let fx = f.exact();
    let block = fx
        .mul(&ExactMatrix::diag(&[
            r(c, c, f.cols[0])?,
            r(c, c, f.cols[1])?,
        ]))
        .mul(&fx.transpose());
    let mut g3 = ExactMatrix::zeros(5);
    g3.set(0, 0, block.get(0, 0));
    let states = model
        .channels
        .iter()
        .flat_map(|&x| model.channels.iter().map(move |&y| (x, y)));
    for (idx, (x, y)) in states.enumerate() {
        let k = idx + 1;
        if x == AnyonLabel::Y && y == AnyonLabel::Y {
            g3.set(0, k, block.get(0, 1));
            g3.set(k, 0, block.get(1, 0));
            g3.set(k, k, block.get(1, 1));
        } else if x == y {
            g3.set(k, k, r(c, c, AnyonLabel::VACUUM)?);
        } else {
            g3.set(k, k, r(c, c, AnyonLabel::Y)?);
        }
    }
    Ok(ExactEbms {
        model: *model,
        arity: Arity::TwoQubit,
        generators: vec![g1, g2, g3, g4, g5],
    })
}

pub fn exact_ebms(model: &ModelSpec, arity: Arity) -> Result<ExactEbms, EbmError> {
    match arity {
        Arity::OneQubit => exact_one_qubit(model),
        Arity::TwoQubit => exact_two_qubit(model),
    }
}

pub fn one_qubit_ebms<R: Real>(model: &ModelSpec) -> Result<EbmSet<R>, EbmError> {
    Ok(exact_one_qubit(model)?.instantiate())
}

pub fn two_qubit_ebms<R: Real>(model: &ModelSpec) -> Result<EbmSet<R>, EbmError> {
    Ok(exact_two_qubit(model)?.instantiate())
}

impl<R: Real> EbmSet<R> {
    fn from_parts(
        source: EbmSource,
        arity: Arity,
        generators: Vec<CMatrix<R>>,
        basis: Vec<String>,
    ) -> Self {
        let inverses = generators.iter().map(CMatrix::dagger).collect();
        Self {
            source,
            arity,
            generators,
            inverses,
            basis,
        }
    }

    pub fn for_model(model: &ModelSpec, arity: Arity) -> Result<Self, EbmError> {
        Ok(exact_ebms(model, arity)?.instantiate())
    }

    /// Standard Fibonacci one-qubit generators.
    pub fn fibonacci() -> Self {
        let gens = fibonacci::generators();
        Self::from_parts(
            EbmSource::Fibonacci,
            Arity::OneQubit,
            gens,
            vec!["|0⟩".into(), "|1⟩".into()],
        )
    }

    /// Wraps externally supplied generators after checking shape and unitarity.
    pub fn external(
        name: &str,
        arity: Arity,
        generators: Vec<CMatrix<R>>,
    ) -> Result<Self, EbmError> {
        if generators.len() != arity.generator_count() {
            return Err(EbmError::LetterOutOfRange {
                index: generators.len(),
                size: arity.generator_count(),
            });
        }
        for (index, g) in generators.iter().enumerate() {
            if g.dim() != arity.dim() {
                return Err(EbmError::WrongDimension {
                    expected: arity.dim(),
                    got: g.dim(),
                });
            }
            let residual = g.unitarity_residual().to_f64();
            if residual > 1e-10 {
                return Err(EbmError::NotUnitary { index, residual });
            }
        }
        let basis = (0..arity.dim()).map(|i| format!("|e{i}⟩")).collect();
        Ok(Self::from_parts(
            EbmSource::External(name.to_string()),
            arity,
            generators,
            basis,
        ))
    }

    pub fn generators(&self) -> &[CMatrix<R>] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.arity.dim()
    }

    /// Matrix of a single letter (the conjugate transpose for inverses).
    pub fn letter_matrix(&self, letter: Letter) -> Result<&CMatrix<R>, EbmError> {
        let table = if letter.inverse {
            &self.inverses
        } else {
            &self.generators
        };
        table
            .get(letter.generator)
            .ok_or(EbmError::LetterOutOfRange {
                index: letter.generator,
                size: self.generators.len(),
            })
    }

    /// U(word) = M(letter₁)·M(letter₂)·…·M(letterₙ).
    pub fn braidword_unitary(&self, word: &BraidWord) -> Result<CMatrix<R>, EbmError> {
        self.braidword_unitary_ordered(word, ProductOrder::LeftToRight)
    }

    pub fn braidword_unitary_ordered(
        &self,
        word: &BraidWord,
        order: ProductOrder,
    ) -> Result<CMatrix<R>, EbmError> {
        let mut acc = CMatrix::identity(self.dim());
        let letters: Box<dyn Iterator<Item = &Letter>> = match order {
            ProductOrder::LeftToRight => Box::new(word.letters().iter()),
            ProductOrder::RightToLeft => Box::new(word.letters().iter().rev()),
        };
        for &l in letters {
            acc = acc.mul(self.letter_matrix(l)?);
        }
        Ok(acc)
    }

    /// Re-expresses the generators in another backend.
    pub fn convert<S: Real>(&self) -> EbmSet<S> {
        EbmSet::from_parts(
            self.source.clone(),
            self.arity,
            self.generators.iter().map(CMatrix::convert).collect(),
            self.basis.clone(),
        )
    }
}

/// Blocks of a two-qubit braidword matrix `B = M₁₁ ⊕ A`.
#[derive(Clone, Debug)]
pub struct BlockSplit<R: Real> {
    pub m11: Cx<R>,
    pub a: CMatrix<R>,
    /// Largest |entry| coupling |NC⟩ to the computational block.
    pub off_block_norm: R,
}

pub fn split_blocks<R: Real>(u: &CMatrix<R>) -> Result<BlockSplit<R>, EbmError> {
    if u.dim() != 5 {
        return Err(EbmError::WrongDimension {
            expected: 5,
            got: u.dim(),
        });
    }
    let off_block_norm = (1..5)
        .flat_map(|k| {
            [
                crate::numerics::cabs(&u[(0, k)]),
                crate::numerics::cabs(&u[(k, 0)]),
            ]
        })
        .fold(R::zero(), R::max);
    Ok(BlockSplit {
        m11: u[(0, 0)].clone(),
        a: u.sub_block(1),
        off_block_norm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{cabs, BigFloat};
    use num_traits::One;

    fn e(k: i64) -> ExactComplex {
        ExactComplex::root24(k)
    }

    #[test]
    fn v113_one_qubit_entries() {
        let set = exact_one_qubit(&ModelSpec::v113_3()).unwrap();
        assert_eq!(set.generators[0], ExactMatrix::diag(&[e(9), e(1)]));
        let third = ExactComplex::real(crate::numerics::Surd::rational(1, 3));
        let two = ExactComplex::real(crate::numerics::Surd::rational(2, 1));
        assert_eq!(set.generators[1].get(0, 0), (two * e(7) + e(3)) * third);
    }

    #[test]
    fn v133_sigma2_corner() {
        let set = exact_one_qubit(&ModelSpec::v133_1()).unwrap();
        let third = ExactComplex::real(crate::numerics::Surd::rational(1, 3));
        let two = ExactComplex::real(crate::numerics::Surd::rational(2, 1));
        assert_eq!(set.generators[1].get(1, 1), (e(-3) + two * e(-11)) * third);
    }

    #[test]
    fn two_qubit_examples() {
        let v113 = exact_two_qubit(&ModelSpec::v113_3()).unwrap();
        assert_eq!(v113.generators[2].get(2, 2), e(-11));
        assert_eq!(v113.generators[0].get(0, 0), e(1));
        let v131 = exact_two_qubit(&ModelSpec::v131_3()).unwrap();
        assert_eq!(v131.generators[2].get(4, 4), e(9));
    }

    #[test]
    fn unsupported_models_rejected() {
        let m: ModelSpec = "V121_2".parse().unwrap();
        assert!(matches!(
            exact_one_qubit(&m),
            Err(EbmError::UnsupportedModel(_))
        ));
        let std: ModelSpec = "V111_1".parse().unwrap();
        assert!(matches!(
            exact_two_qubit(&std),
            Err(EbmError::UnsupportedModel(_))
        ));
    }

    #[test]
    fn split_identity() {
        let s = split_blocks(&CMatrix::<f64>::identity(5)).unwrap();
        assert_eq!(s.m11, Cx::one());
        assert_eq!(s.a, CMatrix::identity(4));
        assert_eq!(s.off_block_norm, 0.0);
        assert!(split_blocks(&CMatrix::<f64>::identity(4)).is_err());
    }

    #[test]
    fn sigma3_leaks_for_v113() {
        let set = two_qubit_ebms::<f64>(&ModelSpec::v113_3()).unwrap();
        let s = split_blocks(&set.generators()[2]).unwrap();
        let want = (Cx::from_polar(1.0, -std::f64::consts::PI / 4.0) * -1.0
            + Cx::from_polar(1.0, -11.0 * std::f64::consts::PI / 12.0))
        .norm()
            / 2.0;
        assert!((s.off_block_norm - want).abs() < 1e-15);
        assert!(s.off_block_norm > 0.0);
    }

    #[test]
    fn word_evaluation_basics() {
        let set = two_qubit_ebms::<BigFloat<256>>(&ModelSpec::v113_3()).unwrap();
        let empty = BraidWord::default();
        assert_eq!(set.braidword_unitary(&empty).unwrap(), CMatrix::identity(5));
        let one = BraidWord::new(vec![Letter::gen(0)]);
        assert_eq!(&set.braidword_unitary(&one).unwrap(), &set.generators()[0]);
        let back = BraidWord::new(vec![Letter::gen(0), Letter::inv(0)]);
        let u = set.braidword_unitary(&back).unwrap();
        assert!(u.max_abs_diff(&CMatrix::identity(5)).unwrap().to_f64() < 1e-70);
        let bad = BraidWord::new(vec![Letter::gen(7)]);
        assert!(matches!(
            set.braidword_unitary(&bad),
            Err(EbmError::LetterOutOfRange { .. })
        ));
    }

    #[test]
    fn basis_names_follow_channels() {
        let set = two_qubit_ebms::<f64>(&ModelSpec::v113_3()).unwrap();
        assert_eq!(set.basis, ["|NC⟩", "|11⟩", "|1Y⟩", "|Y1⟩", "|YY⟩"]);
        let set = two_qubit_ebms::<f64>(&ModelSpec::v131_3()).unwrap();
        assert_eq!(set.basis, ["|NC⟩", "|YY⟩", "|YZ⟩", "|ZY⟩", "|ZZ⟩"]);
    }

    #[test]
    fn fibonacci_is_unitary() {
        let set = EbmSet::<BigFloat<256>>::fibonacci();
        for g in set.generators() {
            assert!(g.unitarity_residual().to_f64() < 1e-70);
        }
        let d = set.generators()[0][(0, 0)].clone();
        assert!((cabs(&d).to_f64() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn external_sets_are_validated() {
        let ok = EbmSet::<f64>::external(
            "ext",
            Arity::OneQubit,
            vec![CMatrix::identity(2), CMatrix::identity(2)],
        );
        assert!(ok.is_ok());
        let wrong = EbmSet::<f64>::external(
            "ext",
            Arity::OneQubit,
            vec![CMatrix::identity(3), CMatrix::identity(3)],
        );
        assert!(matches!(wrong, Err(EbmError::WrongDimension { .. })));
        let nonunitary = CMatrix::<f64>::identity(2).scale(&Cx::new(2.0, 0.0));
        let bad = EbmSet::<f64>::external(
            "ext",
            Arity::OneQubit,
            vec![nonunitary, CMatrix::identity(2)],
        );
        assert!(matches!(bad, Err(EbmError::NotUnitary { .. })));
    }
}
