mod common;

use frobgap_core::prover::random::random_proof;
use frobgap_core::diagram::random::{random_diagram, RandomConfig};
use frobgap_core::diagram::{normalize, Diagram};
use frobgap_core::tensor::{eval_diagram, oracle_eval, rel_error, Tensor, TensorStore};
use frobgap_core::translate::{extract_axiom_links, interpret_proof, linking_diagram, AtomRegistry};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_cfg() -> RandomConfig {
    RandomConfig {
        max_nodes: 5,
        max_boundary: 3,
        ..RandomConfig::default()
    }
}

fn store(n: usize, s: usize, seed: u64) -> TensorStore {
    TensorStore::seeded(&[("N", n), ("S", s)], seed)
}

/// Moves the axes of `a ⊗ b` (as `in_a out_a in_b out_b`) into diagram
/// order `in_a in_b out_a out_b`.
fn outer_in_diagram_order(a: &Tensor, ia: usize, b: &Tensor, ib: usize) -> Tensor {
    let (ra, rb) = (a.rank(), b.rank());
    let mut perm: Vec<usize> = (0..ia).collect();
    perm.extend(ra..ra + ib);
    perm.extend(ia..ra);
    perm.extend(ra + ib..ra + rb);
    a.outer(b).permute(&perm)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tensor_product_evaluates_to_outer_product(seed in any::<u64>(), n in 1usize..=3, s in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d1 = random_diagram(&mut rng, &small_cfg());
        let mut d2 = random_diagram(&mut rng, &small_cfg());
        // Keep generator names distinct between the factors.
        for k in d2.nodes.iter_mut() {
            if let frobgap_core::diagram::NodeKind::Generator { name, .. } = k {
                name.push_str("_r");
            }
        }
        let st = store(n, s, seed);
        let whole = eval_diagram(&d1.tensor(&d2), &st).unwrap();
        let a = eval_diagram(&d1, &st).unwrap();
        let b = eval_diagram(&d2, &st).unwrap();
        let want = outer_in_diagram_order(&a, d1.inputs.len(), &b, d2.inputs.len());
        prop_assert!(rel_error(&whole, &want) <= 1e-12);
    }

    #[test]
    fn node_order_does_not_change_value(seed in any::<u64>(), n in 1usize..=3, s in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_diagram(&mut rng, &small_cfg());
        let mut perm: Vec<usize> = (0..d.nodes.len()).collect();
        perm.shuffle(&mut rng);
        let mut shuffled = d.relabel_nodes(&perm);
        shuffled.wires.shuffle(&mut rng);
        let st = store(n, s, seed);
        let a = eval_diagram(&d, &st).unwrap();
        let b = eval_diagram(&shuffled, &st).unwrap();
        prop_assert!(rel_error(&b, &a) <= 1e-12);
    }

    #[test]
    fn normalization_agrees_with_summation(seed in any::<u64>(), n in 1usize..=3, s in 1usize..=3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = random_diagram(&mut rng, &small_cfg());
        let st = store(n, s, seed);
        let nd = normalize(&d);
        prop_assert!(nd.check().is_ok());
        prop_assert_eq!((&nd.inputs, &nd.outputs), (&d.inputs, &d.outputs));
        let want = oracle_eval(&d, &st).unwrap();
        prop_assert!(rel_error(&eval_diagram(&nd, &st).unwrap(), &want) <= 1e-9);
    }
}

#[test]
fn linking_and_compositional_interpretation_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let reg = AtomRegistry::standard();
    let st = store(2, 2, 0);
    let mut checked = 0;
    while checked < 300 {
        let p = random_proof(&mut rng, 4);
        let goal = p.validate().unwrap();
        let compositional = interpret_proof(&p, &reg).unwrap();
        if compositional.inputs.len() + compositional.outputs.len() > 12 {
            continue;
        }
        let linking = extract_axiom_links(&p).unwrap();
        let direct = linking_diagram(&linking, &goal, &reg).unwrap();
        assert_eq!((&direct.inputs, &direct.outputs), (&compositional.inputs, &compositional.outputs));
        let a = eval_diagram(&compositional, &st).unwrap();
        let b = eval_diagram(&direct, &st).unwrap();
        assert!(rel_error(&a, &b) <= 1e-12, "{goal}");
        checked += 1;
    }
}

#[test]
fn every_linking_is_a_perfect_matching_of_opposite_polarities() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..300 {
        let p = random_proof(&mut rng, 4);
        let l = extract_axiom_links(&p).unwrap();
        let mut seen = vec![0; l.occurrences.len()];
        for &(neg, pos) in &l.links {
            seen[neg] += 1;
            seen[pos] += 1;
            assert_eq!(l.occurrences[neg].atom, l.occurrences[pos].atom);
            assert_ne!(l.occurrences[neg].polarity, l.occurrences[pos].polarity);
        }
        assert!(seen.iter().all(|&c| c == 1));
    }
}

#[test]
fn empty_diagram_tensor_unit() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let d = random_diagram(&mut rng, &small_cfg());
    let st = store(2, 2, 1);
    let a = eval_diagram(&d, &st).unwrap();
    let b = eval_diagram(&Diagram::empty().tensor(&d), &st).unwrap();
    assert_eq!(a, b);
}
