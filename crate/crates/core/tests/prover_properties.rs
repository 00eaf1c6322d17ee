mod common;

use common::formula_strategy;
use frobgap_core::prover::random::random_proof;
use frobgap_core::formula::{Formula, Mode};
use frobgap_core::prover::{residuate, residuate_proof, Arrow, Residuation};
use frobgap_core::{prove, SearchConfig};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn residuation_strategy() -> impl Strategy<Value = Residuation> {
    prop::sample::select(Residuation::ALL.to_vec())
}

/// A goal whose top connective fits `r`.
fn goal_for(r: Residuation, a: Formula, b: Formula, c: Formula, m: Mode) -> Arrow {
    match r {
        Residuation::TensorToOver | Residuation::TensorToUnder => Arrow::new(Formula::tensor(a, b), c),
        Residuation::OverToTensor => Arrow::new(a, Formula::over(c, b)),
        Residuation::UnderToTensor => Arrow::new(b, Formula::under(a, c)),
        Residuation::DiaToBox => Arrow::new(Formula::dia(m, a), c),
        Residuation::BoxToDia => Arrow::new(a, Formula::boxed(m, c)),
    }
}

fn small_cfg(count_pruning: bool) -> SearchConfig {
    SearchConfig {
        max_proof_size: 12,
        count_pruning,
        ..SearchConfig::default()
    }
}

/// Antecedent trees built by expanding a result type into function and
/// argument leaves, with an optional mutation that usually breaks
/// derivability.
fn small_goal() -> impl Strategy<Value = Arrow> {
    let atoms = vec!["n", "np", "s"];
    (
        prop::sample::select(atoms.clone()),
        prop::collection::vec((prop::sample::select(atoms.clone()), 0u8..4), 1..=3),
        prop::option::of((0usize..8, prop::sample::select(atoms))),
    )
        .prop_map(|(result, steps, mutation)| {
            let mut lhs = Formula::atom(result);
            for (arg, how) in steps {
                let x = Formula::atom(arg);
                let slot = match how {
                    2 => Formula::dia(Mode::X, Formula::boxed(Mode::X, x.clone())),
                    _ => x.clone(),
                };
                lhs = expand_leftmost_atom(&lhs, &x, &slot, how % 2 == 0);
            }
            if let Some((k, a)) = mutation {
                lhs = replace_nth_atom(&lhs, k, &Formula::atom(a));
            }
            Arrow::new(lhs, Formula::atom(result))
        })
}

/// Rewrites the leftmost atom `t` of `f` into `x ⊗ x\t` or `t/x ⊗ x`, with
/// `slot` standing in for the argument.
fn expand_leftmost_atom(f: &Formula, x: &Formula, slot: &Formula, left: bool) -> Formula {
    fn go(f: &Formula, x: &Formula, slot: &Formula, left: bool, done: &mut bool) -> Formula {
        match f {
            Formula::Atom(_) if !*done => {
                *done = true;
                if left {
                    Formula::tensor(slot.clone(), Formula::under(x.clone(), f.clone()))
                } else {
                    Formula::tensor(Formula::over(f.clone(), x.clone()), slot.clone())
                }
            }
            Formula::Tensor(a, b) => {
                let a2 = go(a, x, slot, left, done);
                let b2 = go(b, x, slot, left, done);
                Formula::tensor(a2, b2)
            }
            _ => f.clone(),
        }
    }
    let mut done = false;
    go(f, x, slot, left, &mut done)
}

fn replace_nth_atom(f: &Formula, n: usize, with: &Formula) -> Formula {
    fn go(f: &Formula, n: usize, with: &Formula, seen: &mut usize) -> Formula {
        match f {
            Formula::Atom(_) => {
                *seen += 1;
                if *seen - 1 == n {
                    with.clone()
                } else {
                    f.clone()
                }
            }
            Formula::Tensor(a, b) => Formula::tensor(go(a, n, with, seen), go(b, n, with, seen)),
            Formula::Over(a, b) => Formula::over(go(a, n, with, seen), go(b, n, with, seen)),
            Formula::Under(a, b) => Formula::under(go(a, n, with, seen), go(b, n, with, seen)),
            Formula::Dia(m, a) => Formula::dia(*m, go(a, n, with, seen)),
            Formula::Box(m, a) => Formula::boxed(*m, go(a, n, with, seen)),
        }
    }
    let mut seen = 0;
    go(f, n, with, &mut seen)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn residuation_round_trip(
        r in residuation_strategy(),
        a in formula_strategy(),
        b in formula_strategy(),
        c in formula_strategy(),
        x in any::<bool>(),
    ) {
        let m = if x { Mode::X } else { Mode::I };
        let goal = goal_for(r, a, b, c, m);
        let moved = residuate(&goal, r).unwrap();
        prop_assert_eq!(residuate(&moved, r.inverse()).unwrap(), goal);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn residuated_proofs_prove_residuated_goals(goal in small_goal(), r in residuation_strategy()) {
        let Ok(target) = residuate(&goal, r) else { return Ok(()) };
        let out = prove(&goal, &small_cfg(true)).unwrap();
        for p in &out.proofs {
            let q = residuate_proof(p, &goal, r).unwrap();
            prop_assert_eq!(q.validate().unwrap(), target.clone());
        }
    }

    #[test]
    fn count_pruning_is_conservative(goal in small_goal()) {
        let plain = prove(&goal, &small_cfg(false)).unwrap();
        let pruned = prove(&goal, &small_cfg(true)).unwrap();
        if plain.is_derivable() {
            prop_assert!(pruned.is_derivable(), "pruning lost {}", goal);
        }
        for p in &pruned.proofs {
            prop_assert_eq!(p.validate().unwrap(), goal.clone());
        }
    }

    #[test]
    fn search_is_deterministic(goal in small_goal()) {
        let cfg = SearchConfig { find_all: true, ..small_cfg(true) };
        let a = prove(&goal, &cfg).unwrap();
        let b = prove(&goal, &cfg).unwrap();
        prop_assert_eq!(a.proofs, b.proofs);
        prop_assert_eq!(a.deepest_failure, b.deepest_failure);
    }
}

#[test]
fn random_proof_terms_validate() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..500 {
        let p = random_proof(&mut rng, 4);
        assert!(p.validate().is_ok(), "{p:?}");
    }
}

#[test]
fn relative_clause_goal_proves_with_every_configuration() {
    let atoms = common::atom_names();
    let lhs = frobgap_core::parse_formula("np*((np\\s)/np*<x>[x]np)", &atoms).unwrap();
    let goal = Arrow::new(lhs, Formula::atom("s"));
    for memoize in [false, true] {
        for count_pruning in [false, true] {
            let cfg = SearchConfig {
                memoize,
                count_pruning,
                ..SearchConfig::default()
            };
            let out = prove(&goal, &cfg).unwrap();
            assert!(out.is_derivable());
            assert_eq!(out.proofs[0].validate().unwrap(), goal);
        }
    }
}

#[test]
fn small_goal_sample_contains_derivable_goals() {
    use proptest::strategy::ValueTree;
    use proptest::test_runner::TestRunner;
    let mut runner = TestRunner::deterministic();
    let strategy = small_goal();
    let mut derivable = 0;
    for _ in 0..300 {
        let goal = strategy.new_tree(&mut runner).unwrap().current();
        if prove(&goal, &small_cfg(false)).unwrap().is_derivable() {
            derivable += 1;
        }
    }
    assert!(derivable >= 30, "only {derivable} derivable goals");
    assert!(derivable <= 290, "only {} underivable goals", 300 - derivable);
}
