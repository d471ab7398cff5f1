use metaplectic_core::anyon::ModelSpec;
use metaplectic_core::codec::LetterCodec;
use metaplectic_core::ebm::Arity;
use metaplectic_core::numerics::Backend;
use metaplectic_core::search::{
    exhaustive_search, node_count, Objective, SearchConfig, SearchOutcome, Target,
};

fn run(model: ModelSpec, max_len: usize, inverses: bool) -> SearchOutcome {
    let cfg = SearchConfig::new(model, Arity::TwoQubit)
        .lengths(1, max_len)
        .inverses(inverses)
        .top_k(3);
    exhaustive_search(&cfg, &Objective::cnot(Backend::Native64)).unwrap()
}

#[test]
fn cumulative_best_never_increases() {
    for model in ModelSpec::studied() {
        let out = run(model, 7, false);
        let cum: Vec<f64> = out.lengths.iter().map(|l| l.cumulative_best).collect();
        assert!(cum.windows(2).all(|w| w[1] <= w[0]), "{cum:?}");
        for l in &out.lengths {
            assert!(l.cumulative_best <= l.best().score);
        }
    }
}

#[test]
fn inverse_letters_never_hurt() {
    for model in ModelSpec::studied() {
        let plain = run(model, 6, false);
        let both = run(model, 6, true);
        for (p, b) in plain.lengths.iter().zip(&both.lengths) {
            assert_eq!(p.length, b.length);
            assert!(
                b.native_best <= p.native_best + 1e-12,
                "{} L{}",
                model.id(),
                p.length
            );
        }
    }
}

#[test]
fn visited_nodes_follow_the_pruned_count() {
    let out = run(ModelSpec::v113_3(), 4, true);
    for l in &out.lengths {
        assert_eq!(l.nodes, node_count(10, true, l.length));
    }
    let out = run(ModelSpec::v113_3(), 4, false);
    assert_eq!(
        out.nodes_visited,
        (1..=4).map(|l| node_count(5, false, l)).sum::<u64>()
    );
}

#[test]
fn reported_words_are_reduced_and_ranked() {
    let out = run(ModelSpec::v131_3(), 5, true);
    let codec = LetterCodec::new(Arity::TwoQubit);
    for l in &out.lengths {
        let scores: Vec<f64> = l.records.iter().map(|r| r.score).collect();
        assert!(scores.windows(2).all(|w| w[0] <= w[1]));
        for r in &l.records {
            let w = codec.decode(&r.word).unwrap();
            assert_eq!(w.len(), l.length);
            assert!(w.is_freely_reduced());
        }
    }
}

#[test]
fn one_qubit_search_improves_with_length() {
    let cfg = SearchConfig::new(ModelSpec::v131_3(), Arity::OneQubit)
        .lengths(1, 12)
        .inverses(true);
    let out = exhaustive_search(&cfg, &Objective::gate(Target::H, Backend::Native64)).unwrap();
    let first = out.lengths.first().unwrap().cumulative_best;
    let last = out.lengths.last().unwrap().cumulative_best;
    assert!(last < first);
    assert!(last < 0.2);
}
