mod common;

use common::{derive_bracketed, derive_case};
use frobgap::suite::SUITE;
use frobgap::{bundled_lexicon, BUNDLED_LEXICON};
use frobgap_core::lexicon::{load_lexicon_str, Lexicon, Provenance};
use frobgap_core::tensor::{eval_diagram, Tensor, TensorStore};
use frobgap_core::SearchConfig;

#[test]
fn bundled_lexicon_loads_and_saves_verbatim() {
    let lex = bundled_lexicon();
    assert_eq!(lex.save(), BUNDLED_LEXICON);
    let again = load_lexicon_str(&lex.save()).unwrap();
    assert_eq!(again.entries().len(), lex.entries().len());
    for e in lex.entries() {
        let other = again.get(&e.word).unwrap();
        assert_eq!(other.syn, e.syn, "{}", e.word);
        assert_eq!(lex.parse(&lex.show(&e.syn)).unwrap(), e.syn, "{}", e.word);
        lex.semantics(e).unwrap_or_else(|err| panic!("{}: {err}", e.word));
    }
}

#[test]
fn derived_entries_replay_to_their_declared_types() {
    let lex = bundled_lexicon();
    let mut derived = 0;
    for e in lex.entries() {
        if let Provenance::Derived { .. } = e.provenance {
            let rows = lex.derivation_rows(e).unwrap().unwrap();
            assert_eq!(rows.last(), Some(&e.syn), "{}", e.word);
            derived += 1;
        }
    }
    assert!(derived >= 6);
}

fn all_indices(dims: &[usize]) -> Vec<Vec<usize>> {
    dims.iter().fold(vec![vec![]], |acc, &d| {
        acc.into_iter()
            .flat_map(|p| {
                (0..d).map(move |i| {
                    let mut q = p.clone();
                    q.push(i);
                    q
                })
            })
            .collect()
    })
}

fn network(lex: &Lexicon, name: &str, st: &TensorStore) -> Tensor {
    eval_diagram(&lex.networks()[name], st).unwrap()
}

#[test]
fn gap_network_restricts_to_base_network() {
    let lex = bundled_lexicon();
    let st = TensorStore::seeded(&[("N", 3), ("S", 2)], 0);
    let gap = network(&lex, "subord_gap", &st);
    let base = network(&lex, "subord_base", &st);
    const GAP_LEGS: [usize; 3] = [0, 5, 6];
    let dims: Vec<usize> = gap.shape.iter().map(|s| s.1).collect();
    assert_eq!(dims.len(), base.shape.len() + GAP_LEGS.len());
    for idx in all_indices(&dims) {
        let rest: Vec<usize> = idx
            .iter()
            .enumerate()
            .filter(|(k, _)| !GAP_LEGS.contains(k))
            .map(|(_, &i)| i)
            .collect();
        let g = GAP_LEGS.map(|k| idx[k]);
        let want = if g[0] == g[1] && g[1] == g[2] { base.get(&rest) } else { 0.0 };
        assert_eq!(gap.get(&idx), want, "{idx:?}");
    }
}

/// Sentences whose only gap sits inside an adjunct.
const ISLAND_PROBES: [&str; 3] = [
    "window (that (Bob ((left (the room)) <i>(HEAD closing))))",
    "papers (that (Bob ((rejected (the proposal)) <i>(HEAD reading))))",
    "papers (that (reviewers ((rejected (the proposal)) <i>(HEAD (reading carefully^gp)))))",
];

#[test]
fn adjunct_islands_block_extraction() {
    let mut lex = bundled_lexicon();
    let cfg = SearchConfig::default();
    for probe in ISLAND_PROBES {
        let b = probe.replace("HEAD", "without^bc");
        assert!(!derive_bracketed(&lex, &b, "n", &cfg).is_derivable(), "{b}");
    }
    lex.add_entry("without^open", "(iv\\iv)/gp", Some("subord_base")).unwrap();
    for probe in ISLAND_PROBES {
        let b = probe.replace("<i>(HEAD", "(without^open");
        assert!(derive_bracketed(&lex, &b, "n", &cfg).is_derivable(), "{b}");
    }
}

#[test]
fn count_pruning_keeps_every_suite_proof() {
    let lex = bundled_lexicon();
    for bound in [8, 12] {
        for c in SUITE {
            let run = |count_pruning| {
                let cfg = SearchConfig {
                    max_proof_size: bound,
                    count_pruning,
                    find_all: true,
                    ..SearchConfig::default()
                };
                derive_case(&lex, c, &cfg)
            };
            let (with, without) = (run(true), run(false));
            let terms = |o: &frobgap_core::prover::SentenceOutcome| {
                o.proofs.iter().map(|p| p.term.clone()).collect::<Vec<_>>()
            };
            assert_eq!(terms(&with), terms(&without), "{} at {bound}", c.id);
        }
    }
}

#[test]
fn derivation_is_deterministic() {
    let lex = bundled_lexicon();
    let cfg = SearchConfig {
        find_all: true,
        ..SearchConfig::default()
    };
    for c in SUITE.iter().filter(|c| c.derivable) {
        let a = derive_case(&lex, c, &cfg);
        let b = derive_case(&bundled_lexicon(), c, &cfg);
        assert_eq!(a.proofs.len(), b.proofs.len(), "{}", c.id);
        for (p, q) in a.proofs.iter().zip(&b.proofs) {
            assert_eq!(p.term, q.term, "{}", c.id);
            assert_eq!(p.entries, q.entries, "{}", c.id);
        }
    }
}
