use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::anyon::ModelSpec;
use crate::codec::LetterCodec;
use crate::ebm::{Arity, EbmSource};
use crate::ga::{ga_search, GAConfig};
use crate::numerics::Backend;
use crate::search::{
    exhaustive_search, Objective, SearchConfig, SearchError, SearchRecord, Target,
};
use crate::ska::{Compiler, SKAConfig, SkaCache};

use super::{sci, ReportError, Table};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig2,
    Fig45,
}

impl FromStr for FigureId {
    type Err = ReportError;
    fn from_str(s: &str) -> Result<Self, ReportError> {
        match s.to_ascii_lowercase().as_str() {
            "fig2" | "2" => Ok(FigureId::Fig2),
            "fig45" | "fig4" | "fig5" | "45" => Ok(FigureId::Fig45),
            _ => Err(ReportError::Invalid(format!("unknown figure {s:?}"))),
        }
    }
}

/// Level-by-level compilation of H and T.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fig2Config {
    pub models: Vec<EbmSource>,
    pub seeds: Vec<u64>,
    pub max_level: usize,
    pub basic_length: usize,
    pub cache: Option<PathBuf>,
}

impl Default for Fig2Config {
    fn default() -> Self {
        let mut models: Vec<EbmSource> = ModelSpec::studied()
            .into_iter()
            .map(EbmSource::from)
            .collect();
        models.push(EbmSource::Fibonacci);
        Self {
            models,
            seeds: vec![1],
            max_level: 3,
            basic_length: 30,
            cache: None,
        }
    }
}

/// Best CNOT-class distance per length: exhaustive up to the crossover, GA above.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Fig45Config {
    pub models: Vec<ModelSpec>,
    pub max_len: usize,
    pub crossover_plain: usize,
    pub crossover_inverses: usize,
    pub seed: u64,
    pub ga: GAConfig,
    pub backend: Backend,
    pub node_budget: u64,
    pub threads: usize,
}

impl Default for Fig45Config {
    fn default() -> Self {
        Self {
            models: ModelSpec::studied().to_vec(),
            max_len: 20,
            crossover_plain: 10,
            crossover_inverses: 7,
            seed: 0,
            ga: GAConfig::default(),
            backend: Backend::default(),
            node_budget: 200_000_000,
            threads: 0,
        }
    }
}

pub fn run_figure(
    id: FigureId,
    fig2_cfg: &Fig2Config,
    fig45_cfg: &Fig45Config,
) -> Result<Table, ReportError> {
    match id {
        FigureId::Fig2 => fig2(fig2_cfg),
        FigureId::Fig45 => fig45(fig45_cfg),
    }
}

pub fn fig2(cfg: &Fig2Config) -> Result<Table, ReportError> {
    let mut t = Table::new(
        "fig2",
        &[
            "model", "gate", "seed", "level", "length", "distance", "word",
        ],
    );
    let mut cache = match &cfg.cache {
        Some(p) => SkaCache::load(p)?,
        None => SkaCache::default(),
    };
    let codec = LetterCodec::new(Arity::OneQubit);
    for model in &cfg.models {
        for gate in [Target::H, Target::T] {
            let target = gate.gate::<f64>()?.matrix;
            for &seed in &cfg.seeds {
                let key = |level| {
                    SkaCache::key(&model.label(), gate.label(), cfg.basic_length, seed, level)
                };
                let cached: Option<Vec<_>> = (0..=cfg.max_level)
                    .map(|l| cache.get(&key(l)).cloned())
                    .collect();
                let levels = match cached {
                    Some(levels) => levels,
                    None => {
                        let mut ska = SKAConfig::new(model.clone(), seed);
                        ska.max_level = cfg.max_level;
                        ska.basic_length = cfg.basic_length;
                        let approx = Compiler::new(ska).compile(&target)?;
                        for a in &approx {
                            cache.insert(key(a.level), a);
                        }
                        (0..=cfg.max_level)
                            .filter_map(|l| cache.get(&key(l)).cloned())
                            .collect()
                    }
                };
                for (level, a) in levels.iter().enumerate() {
                    // Stored words are re-decoded so corrupt caches surface here.
                    codec.decode(&a.word).map_err(SearchError::from)?;
                    t.push(vec![
                        model.label(),
                        gate.label().into(),
                        seed.to_string(),
                        level.to_string(),
                        a.length.to_string(),
                        sci(a.distance),
                        a.word.clone(),
                    ]);
                }
            }
        }
    }
    if let Some(p) = &cfg.cache {
        cache.save(p)?;
    }
    Ok(t)
}

fn push_record(t: &mut Table, model: &ModelSpec, inverses: bool, rec: &SearchRecord) {
    let method = match rec.method {
        crate::search::Method::Exhaustive => "exhaustive",
        _ => "ga",
    };
    t.push(vec![
        model.id(),
        inverses.to_string(),
        rec.length.to_string(),
        method.into(),
        rec.native_score.map(sci).unwrap_or_default(),
        rec.distance_decimal
            .clone()
            .unwrap_or_else(|| sci(rec.score)),
        rec.m11_abs.map(sci).unwrap_or_default(),
        rec.unitarity_defect.map(sci).unwrap_or_default(),
        rec.word.clone(),
        rec.backend.to_string(),
    ]);
}

pub fn fig45(cfg: &Fig45Config) -> Result<Table, ReportError> {
    let mut t = Table::new(
        "fig45",
        &[
            "model",
            "inverses",
            "length",
            "method",
            "native64",
            "distance",
            "m11_abs",
            "unitarity_defect",
            "word",
            "backend",
        ],
    );
    let obj = Objective::cnot(cfg.backend);
    for model in &cfg.models {
        for inverses in [false, true] {
            let crossover = if inverses {
                cfg.crossover_inverses
            } else {
                cfg.crossover_plain
            }
            .min(cfg.max_len);
            let search = SearchConfig::new(*model, Arity::TwoQubit)
                .lengths(1, crossover)
                .inverses(inverses)
                .top_k(1)
                .threads(cfg.threads)
                .budget(cfg.node_budget);
            let out = exhaustive_search(&search, &obj)?;
            t.truncated |= out.truncated;
            for res in &out.lengths {
                let mut rec = res.best().clone();
                rec.native_score = Some(res.native_best);
                push_record(&mut t, model, inverses, &rec);
            }
            for len in crossover + 1..=cfg.max_len {
                let ga = GAConfig {
                    word_length: len,
                    use_inverses: inverses,
                    seed: cfg.seed,
                    ..cfg.ga.clone()
                };
                let res = ga_search(&ga, &EbmSource::from(*model), Arity::TwoQubit, &obj)?;
                push_record(&mut t, model, inverses, &res.record);
            }
        }
    }
    Ok(t)
}
