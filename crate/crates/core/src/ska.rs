//! Solovay-Kitaev compilation of one-qubit gates with GA level-0 approximations.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::Mutex;

use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::codec::LetterCodec;
use crate::ebm::{Arity, BraidWord, EbmSource};
use crate::ga::{ga_search, GAConfig};
use crate::metrics::global_phase_distance;
use crate::numerics::{Backend, CMatrix};
use crate::search::{Objective, SearchError, Target};

#[derive(Debug, Error)]
pub enum SkaError {
    #[error("rotation angle {0} is too close to π for a balanced commutator")]
    Domain(f64),
    #[error("target is not unitary (residual {0:e})")]
    NotUnitary(f64),
    #[error("level {level} exceeds max_level {max}")]
    Level { level: usize, max: usize },
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error("cache: {0}")]
    Cache(String),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SKAConfig {
    pub basic_length: usize,
    pub max_level: usize,
    pub ga: GAConfig,
    pub model: EbmSource,
}

impl SKAConfig {
    pub fn new(model: impl Into<EbmSource>, seed: u64) -> Self {
        Self {
            basic_length: 30,
            max_level: 3,
            ga: GAConfig::with_length(30, seed),
            model: model.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Approximation {
    pub word: BraidWord,
    pub matrix: CMatrix<f64>,
    pub distance: f64,
    pub level: usize,
}

type M2 = [[C; 2]; 2];

fn to_m2(m: &CMatrix<f64>) -> M2 {
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

fn from_m2(m: &M2) -> CMatrix<f64> {
    CMatrix::from_rows(vec![m[0].to_vec(), m[1].to_vec()]).expect("finite")
}

fn mul2(a: &M2, b: &M2) -> M2 {
    let mut o = [[C::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            o[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    o
}

fn dag2(a: &M2) -> M2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

/// Divides out a square root of the determinant and picks the sign with Re tr ≥ 0.
pub fn to_su2(u: &CMatrix<f64>) -> CMatrix<f64> {
    let m = to_m2(u);
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let mut s = C::new(1.0, 0.0) / det.sqrt();
    if ((m[0][0] + m[1][1]) * s).re < 0.0 {
        s = -s;
    }
    u.scale(&s)
}

/// (θ, n) with U = cos(θ/2)·I − i·sin(θ/2)·(n·σ), θ ∈ [0, π].
fn axis_angle(su: &M2) -> (f64, [f64; 3]) {
    let a = su[0][0];
    let b = su[0][1];
    let c = ((a.re + su[1][1].re) / 2.0).clamp(-1.0, 1.0);
    let v = [-b.im, -b.re, -a.im];
    let s = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
    let theta = 2.0 * s.atan2(c);
    if s < 1e-300 {
        (theta, [0.0, 0.0, 1.0])
    } else {
        (theta, [v[0] / s, v[1] / s, v[2] / s])
    }
}

fn rotation(n: [f64; 3], angle: f64) -> M2 {
    let (s, c) = (angle / 2.0).sin_cos();
    [
        [C::new(c, -s * n[2]), C::new(-s * n[1], -s * n[0])],
        [C::new(s * n[1], -s * n[0]), C::new(c, s * n[2])],
    ]
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn norm(a: [f64; 3]) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

/// SU(2) element rotating axis `from` onto axis `to`.
fn align(from: [f64; 3], to: [f64; 3]) -> M2 {
    let dot = (from[0] * to[0] + from[1] * to[1] + from[2] * to[2]).clamp(-1.0, 1.0);
    let ax = cross(from, to);
    let n = norm(ax);
    if n < 1e-12 {
        if dot > 0.0 {
            return rotation([0.0, 0.0, 1.0], 0.0);
        }
        let helper = if from[0].abs() < 0.9 {
            [1.0, 0.0, 0.0]
        } else {
            [0.0, 1.0, 0.0]
        };
        let p = cross(from, helper);
        let pn = norm(p);
        return rotation([p[0] / pn, p[1] / pn, p[2] / pn], std::f64::consts::PI);
    }
    rotation([ax[0] / n, ax[1] / n, ax[2] / n], n.atan2(dot))
}

/// φ solving sin(θ/2) = 2 sin²(φ/2)·√(1 − sin⁴(φ/2)).
pub fn balanced_angle(theta: f64) -> f64 {
    2.0 * (theta / 4.0).sin().sqrt().asin()
}

/// Balanced group commutator: V, W with V·W·V†·W† = Δ.
pub fn gc_decompose(delta: &CMatrix<f64>) -> Result<(CMatrix<f64>, CMatrix<f64>), SkaError> {
    let d = to_m2(&to_su2(delta));
    let (theta, axis) = axis_angle(&d);
    if theta >= std::f64::consts::PI - 1e-6 {
        return Err(SkaError::Domain(theta));
    }
    if theta < 1e-15 {
        return Ok((CMatrix::identity(2), CMatrix::identity(2)));
    }
    let phi = balanced_angle(theta);
    let v = rotation([1.0, 0.0, 0.0], phi);
    let w = rotation([0.0, 1.0, 0.0], phi);
    let comm = mul2(&mul2(&mul2(&v, &w), &dag2(&v)), &dag2(&w));
    let (_, comm_axis) = axis_angle(&comm);
    let s = align(comm_axis, axis);
    let conj = |m: &M2| mul2(&mul2(&s, m), &dag2(&s));
    Ok((from_m2(&conj(&v)), from_m2(&conj(&w))))
}

fn target_key(u: &CMatrix<f64>) -> [u64; 8] {
    let mut k = [0u64; 8];
    for (i, z) in u.entries().iter().enumerate() {
        k[2 * i] = z.re.to_bits();
        k[2 * i + 1] = z.im.to_bits();
    }
    k
}

fn derived_seed(seed: u64, key: &[u64; 8]) -> u64 {
    use sha2::{Digest, Sha256};
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    for k in key {
        h.update(k.to_le_bytes());
    }
    u64::from_le_bytes(h.finalize()[..8].try_into().expect("8 bytes"))
}

/// A compiler run with its own memo of (target, level) results.
pub struct Compiler {
    cfg: SKAConfig,
    memo: Mutex<HashMap<([u64; 8], usize), Approximation>>,
}

impl Compiler {
    pub fn new(cfg: SKAConfig) -> Self {
        Self {
            cfg,
            memo: Mutex::new(HashMap::new()),
        }
    }

    pub fn config(&self) -> &SKAConfig {
        &self.cfg
    }

    fn word_matrix(&self, word: &BraidWord) -> Result<CMatrix<f64>, SkaError> {
        let ebms = self
            .cfg
            .model
            .build::<f64>(Arity::OneQubit)
            .map_err(SearchError::from)?;
        Ok(ebms.braidword_unitary(word).map_err(SearchError::from)?)
    }

    /// GA over words of length L₀ minimizing the phase-invariant distance to `target`.
    pub fn basic_approximation(&self, target: &CMatrix<f64>) -> Result<Approximation, SkaError> {
        let key = target_key(target);
        let mut ga = self.cfg.ga.clone();
        ga.word_length = self.cfg.basic_length;
        ga.use_inverses = true;
        ga.seed = derived_seed(self.cfg.ga.seed, &key);
        let entries = target.entries().iter().map(|z| (z.re, z.im)).collect();
        let obj = Objective::gate(
            Target::Custom {
                label: "ska".into(),
                entries,
            },
            Backend::Native64,
        );
        let res = ga_search(&ga, &self.cfg.model, Arity::OneQubit, &obj)?;
        let word = LetterCodec::new(Arity::OneQubit)
            .decode(&res.record.word)
            .map_err(SearchError::from)?;
        let matrix = self.word_matrix(&word)?;
        let distance = global_phase_distance(target, &matrix).map_err(SearchError::from)?;
        Ok(Approximation {
            word,
            matrix,
            distance,
            level: 0,
        })
    }

    pub fn solovay_kitaev(
        &self,
        target: &CMatrix<f64>,
        level: usize,
    ) -> Result<Approximation, SkaError> {
        if level > self.cfg.max_level {
            return Err(SkaError::Level {
                level,
                max: self.cfg.max_level,
            });
        }
        let residual = target.unitarity_residual();
        if residual > 1e-10 {
            return Err(SkaError::NotUnitary(residual));
        }
        let key = (target_key(target), level);
        if let Some(hit) = self.memo.lock().expect("memo").get(&key) {
            return Ok(hit.clone());
        }
        let out = if level == 0 {
            self.basic_approximation(target)?
        } else {
            let prev = self.solovay_kitaev(target, level - 1)?;
            let delta = target.mul(&prev.matrix.dagger());
            let (v, w) = match gc_decompose(&delta) {
                Ok(vw) => vw,
                // Shrink an antipodal residual just inside the domain.
                Err(SkaError::Domain(_)) => {
                    let d = to_m2(&to_su2(&delta));
                    let (_, axis) = axis_angle(&d);
                    gc_decompose(&from_m2(&rotation(axis, std::f64::consts::PI - 2e-6)))?
                }
                Err(e) => return Err(e),
            };
            let (av, aw) = rayon::join(
                || self.solovay_kitaev(&v, level - 1),
                || self.solovay_kitaev(&w, level - 1),
            );
            let (av, aw) = (av?, aw?);
            let word = av
                .word
                .concat(&aw.word)
                .concat(&av.word.inverse())
                .concat(&aw.word.inverse())
                .concat(&prev.word);
            let matrix = av
                .matrix
                .mul(&aw.matrix)
                .mul(&av.matrix.dagger())
                .mul(&aw.matrix.dagger())
                .mul(&prev.matrix);
            let distance = global_phase_distance(target, &matrix).map_err(SearchError::from)?;
            Approximation {
                word,
                matrix,
                distance,
                level,
            }
        };
        self.memo.lock().expect("memo").insert(key, out.clone());
        Ok(out)
    }

    /// Approximations at every level 0..=max_level.
    pub fn compile(&self, target: &CMatrix<f64>) -> Result<Vec<Approximation>, SkaError> {
        (0..=self.cfg.max_level)
            .map(|l| self.solovay_kitaev(target, l))
            .collect()
    }
}

pub fn basic_approximation(
    target: &CMatrix<f64>,
    cfg: &SKAConfig,
) -> Result<Approximation, SkaError> {
    Compiler::new(cfg.clone()).basic_approximation(target)
}

pub fn solovay_kitaev(
    target: &CMatrix<f64>,
    level: usize,
    cfg: &SKAConfig,
) -> Result<Approximation, SkaError> {
    Compiler::new(cfg.clone()).solovay_kitaev(target, level)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CachedApproximation {
    pub word: String,
    pub length: usize,
    pub distance: f64,
}

/// Persistent results keyed by (model, gate, L₀, seed, level).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SkaCache {
    pub entries: BTreeMap<String, CachedApproximation>,
}

impl SkaCache {
    pub fn key(model: &str, gate: &str, basic_length: usize, seed: u64, level: usize) -> String {
        format!("{model}|{gate}|{basic_length}|{seed}|{level}")
    }

    pub fn load(path: &Path) -> Result<Self, SkaError> {
        if !path.exists() {
            return Ok(Self::default());
        }
        let text = std::fs::read_to_string(path).map_err(|e| SkaError::Cache(e.to_string()))?;
        serde_json::from_str(&text).map_err(|e| SkaError::Cache(e.to_string()))
    }

    pub fn save(&self, path: &Path) -> Result<(), SkaError> {
        let text =
            serde_json::to_string_pretty(self).map_err(|e| SkaError::Cache(e.to_string()))?;
        std::fs::write(path, text).map_err(|e| SkaError::Cache(e.to_string()))
    }

    pub fn insert(&mut self, key: String, a: &Approximation) {
        let word = LetterCodec::new(Arity::OneQubit)
            .encode(&a.word)
            .unwrap_or_default();
        self.entries.insert(
            key,
            CachedApproximation {
                word,
                length: a.word.len(),
                distance: a.distance,
            },
        );
    }

    pub fn get(&self, key: &str) -> Option<&CachedApproximation> {
        self.entries.get(key)
    }
}
