use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kernel::{indices_to_word, mul, Kernel, Mat, NativeEvaluator, NativeScore};
use super::{compare_records, Method, Objective, SearchError, SearchRecord};
use crate::ebm::{Arity, EbmSource};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub model: EbmSource,
    pub arity: Arity,
    pub use_inverses: bool,
    pub min_len: usize,
    pub max_len: usize,
    pub keep_top_k: usize,
    pub threads: usize,
    /// Upper bound on visited nodes; longer lengths are dropped to fit.
    pub node_budget: u64,
}

impl SearchConfig {
    pub fn new(model: impl Into<EbmSource>, arity: Arity) -> Self {
        Self {
            model: model.into(),
            arity,
            use_inverses: false,
            min_len: 1,
            max_len: 6,
            keep_top_k: 1,
            threads: 1,
            node_budget: 200_000_000,
        }
    }

    pub fn lengths(mut self, min_len: usize, max_len: usize) -> Self {
        self.min_len = min_len;
        self.max_len = max_len;
        self
    }

    pub fn inverses(mut self, on: bool) -> Self {
        self.use_inverses = on;
        self
    }

    pub fn top_k(mut self, k: usize) -> Self {
        self.keep_top_k = k;
        self
    }

    pub fn threads(mut self, n: usize) -> Self {
        self.threads = n;
        self
    }

    pub fn budget(mut self, nodes: u64) -> Self {
        self.node_budget = nodes;
        self
    }

    fn validate(&self) -> Result<(), SearchError> {
        if self.min_len == 0 || self.min_len > self.max_len {
            return Err(SearchError::InvalidConfig(format!(
                "need 1 ≤ min_len ≤ max_len, got {}..{}",
                self.min_len, self.max_len
            )));
        }
        if self.keep_top_k == 0 {
            return Err(SearchError::InvalidConfig(
                "keep_top_k must be positive".into(),
            ));
        }
        Ok(())
    }

    fn alphabet_size(&self) -> usize {
        self.arity.generator_count() * if self.use_inverses { 2 } else { 1 }
    }
}

/// Words of exactly length `len`: `aᴸ`, or `a(a−1)^{L−1}` when inverse
/// letters are present and adjacent cancelling pairs are pruned.
pub fn node_count(alphabet: usize, with_inverses: bool, len: usize) -> u64 {
    if len == 0 {
        return 1;
    }
    let a = alphabet as u64;
    if with_inverses {
        a.saturating_mul((a - 1).saturating_pow(len as u32 - 1))
    } else {
        a.saturating_pow(len as u32)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LengthResult {
    pub length: usize,
    pub nodes: u64,
    /// Best native64 score at this exact length.
    pub native_best: f64,
    /// Survivors rescored at the objective's backend, best first.
    pub records: Vec<SearchRecord>,
    /// Best rescored score over all searched lengths ≤ `length`.
    pub cumulative_best: f64,
}

impl LengthResult {
    pub fn best(&self) -> &SearchRecord {
        &self.records[0]
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchOutcome {
    pub config: SearchConfig,
    pub objective: Objective,
    pub lengths: Vec<LengthResult>,
    /// Set when the node budget cut lengths off the requested range.
    pub truncated: bool,
    pub searched_max_len: usize,
    pub nodes_visited: u64,
}

impl SearchOutcome {
    pub fn length(&self, len: usize) -> Option<&LengthResult> {
        self.lengths.iter().find(|l| l.length == len)
    }
}

/// Bounded list of the lowest scores; equal scores keep arrival order.
#[derive(Clone, Debug)]
struct Top {
    k: usize,
    items: Vec<(f64, Vec<u8>)>,
}

impl Top {
    fn new(k: usize) -> Self {
        Self {
            k,
            items: Vec::with_capacity(k + 1),
        }
    }

    #[inline]
    fn offer(&mut self, score: f64, word: &[u8]) {
        let score = if score.is_nan() { f64::INFINITY } else { score };
        if self.items.len() == self.k && score >= self.items[self.k - 1].0 {
            return;
        }
        let at = self.items.partition_point(|(s, _)| *s <= score);
        self.items.insert(at, (score, word.to_vec()));
        self.items.truncate(self.k);
    }

    fn merge(mut self, other: Top) -> Top {
        for (s, w) in other.items {
            let at = self.items.partition_point(|(x, _)| *x <= s);
            self.items.insert(at, (s, w));
        }
        self.items.truncate(self.k);
        self
    }
}

struct Walk<'a, const N: usize, S: NativeScore<N>> {
    kernel: &'a Kernel<N, S>,
    min_len: usize,
    max_len: usize,
    inverses: bool,
    alphabet: u8,
    prefixes: Vec<Mat<N>>,
    word: Vec<u8>,
    tops: Vec<Top>,
    nodes: Vec<u64>,
}

impl<const N: usize, S: NativeScore<N>> Walk<'_, N, S> {
    fn visit(&mut self, depth: usize) {
        self.nodes[depth] += 1;
        if depth >= self.min_len {
            let s = self.kernel.scorer.score(&self.prefixes[depth]);
            self.tops[depth].offer(s, &self.word);
        }
        if depth == self.max_len {
            return;
        }
        let n = self.kernel.generators as u8;
        let last = *self.word.last().expect("non-empty prefix");
        for l in 0..self.alphabet {
            if self.inverses && (l + n == last || last + n == l) {
                continue;
            }
            self.prefixes[depth + 1] = mul(&self.prefixes[depth], &self.kernel.mats[l as usize]);
            self.word.push(l);
            self.visit(depth + 1);
            self.word.pop();
        }
    }
}

fn walk_from<const N: usize, S: NativeScore<N>>(
    kernel: &Kernel<N, S>,
    first: u8,
    cfg: &SearchConfig,
    max_len: usize,
    survivors: usize,
) -> (Vec<Top>, Vec<u64>) {
    let mut prefixes = vec![super::kernel::identity::<N>(); max_len + 1];
    prefixes[1] = kernel.mats[first as usize];
    let mut walk = Walk {
        kernel,
        min_len: cfg.min_len,
        max_len,
        inverses: cfg.use_inverses,
        alphabet: cfg.alphabet_size() as u8,
        prefixes,
        word: vec![first],
        tops: vec![Top::new(survivors); max_len + 1],
        nodes: vec![0; max_len + 1],
    };
    walk.visit(1);
    (walk.tops, walk.nodes)
}

fn run_walks<const N: usize, S: NativeScore<N>>(
    kernel: &Kernel<N, S>,
    cfg: &SearchConfig,
    max_len: usize,
    survivors: usize,
    alphabet: usize,
) -> (Vec<Top>, Vec<u64>) {
    let run = || {
        (0..alphabet as u8)
            .into_par_iter()
            .map(|first| walk_from(kernel, first, cfg, max_len, survivors))
            .collect::<Vec<_>>()
    };
    let parts = match rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads.max(1))
        .build()
    {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    };
    let mut tops = vec![Top::new(survivors); max_len + 1];
    let mut nodes = vec![0u64; max_len + 1];
    for (t, n) in parts {
        tops = tops.into_iter().zip(t).map(|(a, b)| a.merge(b)).collect();
        for (acc, x) in nodes.iter_mut().zip(n) {
            *acc += x;
        }
    }
    (tops, nodes)
}

/// Minimum-objective words of each length in `[min_len, max_len]`.
///
/// Enumeration runs at native64 with prefix products cached along each
/// depth-first path; freely reducible words are skipped. The best
/// `max(keep_top_k, 16)` words per length are rescored at the objective's
/// backend and the top `keep_top_k` are returned, ordered by rescored value
/// then word.
pub fn exhaustive_search(
    cfg: &SearchConfig,
    obj: &Objective,
) -> Result<SearchOutcome, SearchError> {
    cfg.validate()?;
    obj.check_arity(cfg.arity)?;
    let alphabet = cfg.alphabet_size();

    let mut searched_max_len = 0;
    let mut total = 0u64;
    for len in 1..=cfg.max_len {
        total = total.saturating_add(node_count(alphabet, cfg.use_inverses, len));
        if total > cfg.node_budget {
            break;
        }
        searched_max_len = len;
    }
    let truncated = searched_max_len < cfg.max_len;
    if searched_max_len < cfg.min_len {
        return Ok(SearchOutcome {
            config: cfg.clone(),
            objective: obj.clone(),
            lengths: Vec::new(),
            truncated,
            searched_max_len,
            nodes_visited: 0,
        });
    }

    let ebms = cfg.model.build::<f64>(cfg.arity)?;
    let native = NativeEvaluator::new(&ebms, &obj.kind)?;
    let survivors = cfg.keep_top_k.max(16);
    let (tops, nodes) = match &native {
        NativeEvaluator::Gate(k) => run_walks(k, cfg, searched_max_len, survivors, alphabet),
        NativeEvaluator::Cnot(k) => run_walks(k, cfg, searched_max_len, survivors, alphabet),
    };

    let n = native.generators();
    let mut lengths = Vec::new();
    let mut cumulative = f64::INFINITY;
    for len in cfg.min_len..=searched_max_len {
        let top = &tops[len];
        let words: Vec<_> = top
            .items
            .iter()
            .map(|(_, w)| indices_to_word(w, n))
            .collect();
        let mut records = SearchRecord::evaluate_batch(
            &cfg.model,
            cfg.arity,
            &obj.kind,
            obj.backend,
            &words,
            Method::Exhaustive,
        )?;
        for (r, (s, _)) in records.iter_mut().zip(&top.items) {
            r.native_score = Some(*s);
        }
        records.sort_by(compare_records);
        records.truncate(cfg.keep_top_k);
        cumulative = cumulative.min(records[0].score);
        lengths.push(LengthResult {
            length: len,
            nodes: nodes[len],
            native_best: top.items[0].0,
            records,
            cumulative_best: cumulative,
        });
    }
    Ok(SearchOutcome {
        config: cfg.clone(),
        objective: obj.clone(),
        lengths,
        truncated,
        searched_max_len,
        nodes_visited: nodes.iter().sum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anyon::ModelSpec;
    use crate::numerics::Backend;
    use crate::search::Target;

    #[test]
    fn node_counts_match_closed_form() {
        for inv in [false, true] {
            let cfg = SearchConfig::new(ModelSpec::v113_3(), Arity::TwoQubit)
                .lengths(1, 5)
                .inverses(inv);
            let out = exhaustive_search(&cfg, &Objective::cnot(Backend::Native64)).unwrap();
            let a = if inv { 10 } else { 5 };
            for l in &out.lengths {
                assert_eq!(
                    l.nodes,
                    node_count(a, inv, l.length),
                    "L={} inv={inv}",
                    l.length
                );
            }
        }
        assert_eq!(node_count(10, true, 3), 810);
        assert_eq!(node_count(5, false, 3), 125);
    }

    #[test]
    fn budget_truncates() {
        let cfg = SearchConfig::new(ModelSpec::v113_3(), Arity::TwoQubit)
            .lengths(1, 6)
            .budget(200);
        let out = exhaustive_search(&cfg, &Objective::cnot(Backend::Native64)).unwrap();
        assert!(out.truncated);
        assert_eq!(out.searched_max_len, 3);
        assert_eq!(out.lengths.len(), 3);
    }

    #[test]
    fn length_one_h_is_brute_force_minimum() {
        let m = ModelSpec::v131_3();
        let cfg = SearchConfig::new(m, Arity::OneQubit).lengths(1, 1);
        let obj = Objective::gate(Target::H, Backend::Native64);
        let out = exhaustive_search(&cfg, &obj).unwrap();
        let ebms = crate::ebm::one_qubit_ebms::<f64>(&m).unwrap();
        let h = crate::metrics::GateTarget::<f64>::h().matrix;
        let oracle = ebms
            .generators()
            .iter()
            .map(|g| crate::metrics::global_phase_distance(&h, g).unwrap())
            .fold(f64::INFINITY, f64::min);
        assert!((out.lengths[0].best().score - oracle).abs() < 1e-12);
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let base = SearchConfig::new(ModelSpec::v133_1(), Arity::TwoQubit)
            .lengths(2, 4)
            .inverses(true)
            .top_k(3);
        let obj = Objective::cnot(Backend::Native64);
        let a = exhaustive_search(&base.clone().threads(1), &obj).unwrap();
        let b = exhaustive_search(&base.threads(3), &obj).unwrap();
        assert_eq!(a.lengths, b.lengths);
    }

    #[test]
    fn invalid_lengths_rejected() {
        let cfg = SearchConfig::new(ModelSpec::v113_3(), Arity::TwoQubit).lengths(3, 2);
        assert!(exhaustive_search(&cfg, &Objective::cnot(Backend::Native64)).is_err());
    }
}
