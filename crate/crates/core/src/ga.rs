//! Genetic algorithm over fixed-length braidwords.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::ebm::{Arity, BraidWord, EbmSource};
use crate::search::kernel::{indices_to_word, NativeEvaluator};
use crate::search::{Method, Objective, ObjectiveKind, Provenance, SearchError, SearchRecord};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GAConfig {
    pub word_length: usize,
    pub population: usize,
    pub generations: usize,
    pub crossover_rate: f64,
    /// Per-letter probability.
    pub mutation_rate: f64,
    pub elite_fraction: f64,
    pub restarts: usize,
    pub seed: u64,
    pub use_inverses: bool,
    pub threads: usize,
}

impl Default for GAConfig {
    fn default() -> Self {
        Self {
            word_length: 20,
            population: 200,
            generations: 500,
            crossover_rate: 0.8,
            mutation_rate: 0.03,
            elite_fraction: 0.05,
            restarts: 3,
            seed: 0,
            use_inverses: true,
            threads: 1,
        }
    }
}

impl GAConfig {
    pub fn with_length(word_length: usize, seed: u64) -> Self {
        Self {
            word_length,
            seed,
            ..Self::default()
        }
    }

    pub fn elite_count(&self) -> usize {
        ((self.elite_fraction * self.population as f64).round() as usize).clamp(1, self.population)
    }

    pub fn validate(&self) -> Result<(), SearchError> {
        let bad = |m: &str| Err(SearchError::InvalidConfig(m.to_string()));
        if self.population < 2 {
            return bad("population must be at least 2");
        }
        if self.word_length == 0 {
            return bad("word_length must be positive");
        }
        for (name, p) in [
            ("crossover_rate", self.crossover_rate),
            ("mutation_rate", self.mutation_rate),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return bad(&format!("{name} must lie in [0, 1]"));
            }
        }
        if !(0.0..=1.0).contains(&self.elite_fraction)
            || self.elite_fraction * (self.population as f64) < 1.0
        {
            return bad("elite_fraction · population must be at least 1");
        }
        if self.restarts == 0 {
            return bad("restarts must be positive");
        }
        Ok(())
    }
}

/// A word (alphabet indices) and its objective value; fitness is `−score`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Individual {
    pub letters: Vec<u8>,
    pub score: f64,
}

impl Individual {
    pub fn fitness(&self) -> f64 {
        -self.score
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats {
    pub restart: usize,
    pub generation: usize,
    pub best: f64,
    pub mean: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestartBest {
    pub restart: usize,
    pub generation: usize,
    pub individual: Individual,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GaResult {
    pub config: GAConfig,
    /// Overall best, rescored at the objective's backend.
    pub record: SearchRecord,
    pub restarts: Vec<RestartBest>,
    pub trace: Vec<GenerationStats>,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Independent stream for one individual slot of one generation.
fn slot_rng(seed: u64, restart: usize, generation: usize, slot: usize) -> ChaCha8Rng {
    let mut h = splitmix64(seed);
    for part in [restart as u64, generation as u64, slot as u64] {
        h = splitmix64(h ^ part);
    }
    ChaCha8Rng::seed_from_u64(h)
}

fn by_score(a: &Individual, b: &Individual) -> std::cmp::Ordering {
    a.score
        .total_cmp(&b.score)
        .then_with(|| a.letters.cmp(&b.letters))
}

/// Fitness evaluator plus the GA operators for one alphabet.
pub struct GaEngine {
    cfg: GAConfig,
    evaluator: NativeEvaluator,
    alphabet: u8,
    pool: Option<rayon::ThreadPool>,
}

impl GaEngine {
    pub fn new(
        cfg: &GAConfig,
        source: &EbmSource,
        arity: Arity,
        kind: &ObjectiveKind,
    ) -> Result<Self, SearchError> {
        cfg.validate()?;
        let ebms = source.build::<f64>(arity)?;
        let evaluator = NativeEvaluator::new(&ebms, kind)?;
        let alphabet = (evaluator.generators() * if cfg.use_inverses { 2 } else { 1 }) as u8;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads.max(1))
            .build()
            .ok();
        Ok(Self {
            cfg: cfg.clone(),
            evaluator,
            alphabet,
            pool,
        })
    }

    pub fn config(&self) -> &GAConfig {
        &self.cfg
    }

    pub fn score(&self, letters: &[u8]) -> f64 {
        let s = self.evaluator.score(letters);
        if s.is_nan() {
            f64::INFINITY
        } else {
            s
        }
    }

    pub fn word(&self, letters: &[u8]) -> BraidWord {
        indices_to_word(letters, self.evaluator.generators())
    }

    fn scored(&self, words: Vec<Vec<u8>>) -> Vec<Individual> {
        let eval = || {
            words
                .into_par_iter()
                .map(|letters| {
                    let score = self.score(&letters);
                    Individual { letters, score }
                })
                .collect::<Vec<_>>()
        };
        let mut pop = match &self.pool {
            Some(p) => p.install(eval),
            None => eval(),
        };
        pop.sort_by(by_score);
        pop
    }

    pub fn random_population(&self, restart: usize) -> Vec<Individual> {
        let words = (0..self.cfg.population)
            .map(|slot| {
                let mut rng = slot_rng(self.cfg.seed, restart, 0, slot);
                (0..self.cfg.word_length)
                    .map(|_| rng.gen_range(0..self.alphabet))
                    .collect()
            })
            .collect();
        self.scored(words)
    }

    /// Scores and sorts an arbitrary population.
    pub fn population_from(&self, words: Vec<Vec<u8>>) -> Vec<Individual> {
        self.scored(words)
    }

    fn tournament<'a>(&self, pop: &'a [Individual], rng: &mut ChaCha8Rng) -> &'a Individual {
        // pop is sorted, so the lowest index wins.
        let best = (0..3)
            .map(|_| rng.gen_range(0..pop.len()))
            .min()
            .expect("three draws");
        &pop[best]
    }

    /// Next generation: elites copied, the rest bred by tournament
    /// selection, single-point crossover and per-letter mutation.
    pub fn evolve_step(
        &self,
        pop: &[Individual],
        restart: usize,
        generation: usize,
    ) -> Vec<Individual> {
        let elites = self.cfg.elite_count().min(pop.len());
        let mut words: Vec<Vec<u8>> = pop[..elites].iter().map(|i| i.letters.clone()).collect();
        for slot in elites..self.cfg.population {
            let mut rng = slot_rng(self.cfg.seed, restart, generation, slot);
            let p1 = self.tournament(pop, &mut rng);
            let p2 = self.tournament(pop, &mut rng);
            let len = p1.letters.len();
            let mut child = if len > 1 && rng.gen::<f64>() < self.cfg.crossover_rate {
                let cut = rng.gen_range(1..len);
                p1.letters[..cut]
                    .iter()
                    .chain(&p2.letters[cut..])
                    .copied()
                    .collect()
            } else {
                p1.letters.clone()
            };
            if self.alphabet > 1 {
                for l in child.iter_mut() {
                    if rng.gen::<f64>() < self.cfg.mutation_rate {
                        let r = rng.gen_range(0..self.alphabet - 1);
                        *l = if r >= *l { r + 1 } else { r };
                    }
                }
            }
            words.push(child);
        }
        self.scored(words)
    }

    fn run_restart(&self, restart: usize, trace: &mut Vec<GenerationStats>) -> RestartBest {
        let mut pop = self.random_population(restart);
        let mut best = RestartBest {
            restart,
            generation: 0,
            individual: pop[0].clone(),
        };
        let stats = |pop: &[Individual], generation| GenerationStats {
            restart,
            generation,
            best: pop[0].score,
            mean: pop.iter().map(|i| i.score).sum::<f64>() / pop.len() as f64,
        };
        trace.push(stats(&pop, 0));
        for generation in 1..=self.cfg.generations {
            pop = self.evolve_step(&pop, restart, generation);
            trace.push(stats(&pop, generation));
            if pop[0].score < best.individual.score {
                best = RestartBest {
                    restart,
                    generation,
                    individual: pop[0].clone(),
                };
            }
        }
        best
    }

    /// Runs every restart; results are ordered by restart.
    pub fn run(&self) -> (Vec<RestartBest>, Vec<GenerationStats>) {
        let mut trace = Vec::new();
        let bests = (0..self.cfg.restarts)
            .map(|r| self.run_restart(r, &mut trace))
            .collect();
        (bests, trace)
    }
}

/// Best word over `cfg.restarts` independent populations, rescored at the
/// objective's backend.
pub fn ga_search(
    cfg: &GAConfig,
    source: &EbmSource,
    arity: Arity,
    obj: &Objective,
) -> Result<GaResult, SearchError> {
    obj.check_arity(arity)?;
    let engine = GaEngine::new(cfg, source, arity, &obj.kind)?;
    let (restarts, trace) = engine.run();
    let winner = restarts
        .iter()
        .min_by(|a, b| by_score(&a.individual, &b.individual).then(a.restart.cmp(&b.restart)))
        .expect("at least one restart");
    let word = engine.word(&winner.individual.letters);
    let mut record =
        SearchRecord::evaluate(source, arity, &obj.kind, obj.backend, &word, Method::Ga)?;
    record.native_score = Some(winner.individual.score);
    record.provenance = Some(Provenance {
        seed: cfg.seed,
        restart: winner.restart,
        generation: winner.generation,
    });
    Ok(GaResult {
        config: cfg.clone(),
        record,
        restarts,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anyon::ModelSpec;
    use crate::numerics::Backend;
    use crate::search::Target;

    fn engine(cfg: &GAConfig) -> GaEngine {
        GaEngine::new(
            cfg,
            &ModelSpec::v113_3().into(),
            Arity::TwoQubit,
            &ObjectiveKind::CnotLocalClass,
        )
        .unwrap()
    }

    #[test]
    fn identical_population_without_mutation_is_stable() {
        let cfg = GAConfig {
            word_length: 6,
            population: 20,
            mutation_rate: 0.0,
            ..GAConfig::default()
        };
        let e = engine(&cfg);
        let pop = e.population_from(vec![vec![0, 1, 2, 3, 4, 0]; 20]);
        let next = e.evolve_step(&pop, 0, 1);
        assert_eq!(next, pop);
    }

    #[test]
    fn elites_survive_and_steps_are_deterministic() {
        let cfg = GAConfig {
            word_length: 8,
            population: 40,
            seed: 9,
            ..GAConfig::default()
        };
        let e = engine(&cfg);
        let pop = e.random_population(0);
        let a = e.evolve_step(&pop, 0, 1);
        let b = e.evolve_step(&pop, 0, 1);
        assert_eq!(a, b);
        assert!(a.iter().any(|i| i.letters == pop[0].letters));
        assert!(a[0].score <= pop[0].score);
    }

    #[test]
    fn mutation_always_changes_the_letter() {
        let cfg = GAConfig {
            word_length: 10,
            population: 10,
            mutation_rate: 1.0,
            crossover_rate: 0.0,
            elite_fraction: 0.1,
            ..GAConfig::default()
        };
        let e = engine(&cfg);
        let pop = e.population_from(vec![vec![3; 10]; 10]);
        let next = e.evolve_step(&pop, 0, 1);
        for ind in &next[..] {
            if ind.letters != pop[0].letters {
                assert!(ind.letters.iter().all(|&l| l != 3));
            }
        }
    }

    #[test]
    fn length_one_matches_brute_force() {
        let m = ModelSpec::v131_3();
        let cfg = GAConfig {
            word_length: 1,
            population: 8,
            generations: 5,
            elite_fraction: 0.125,
            ..GAConfig::default()
        };
        let obj = Objective::gate(Target::H, Backend::Native64);
        let r = ga_search(&cfg, &m.into(), Arity::OneQubit, &obj).unwrap();
        let ebms = crate::ebm::one_qubit_ebms::<f64>(&m).unwrap();
        let h = crate::metrics::GateTarget::<f64>::h().matrix;
        let oracle = ebms
            .generators()
            .iter()
            .flat_map(|g| [g.clone(), g.dagger()])
            .map(|g| crate::metrics::global_phase_distance(&h, &g).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!((r.record.score - oracle).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(GAConfig {
            population: 1,
            ..GAConfig::default()
        }
        .validate()
        .is_err());
        assert!(GAConfig {
            mutation_rate: 1.5,
            ..GAConfig::default()
        }
        .validate()
        .is_err());
        assert!(GAConfig {
            elite_fraction: 0.001,
            ..GAConfig::default()
        }
        .validate()
        .is_err());
        assert!(GAConfig::default().validate().is_ok());
        assert_eq!(GAConfig::default().elite_count(), 10);
    }
}
