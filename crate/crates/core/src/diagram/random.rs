//! Seeded random diagrams for property tests.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use super::{Diagram, End, NodeKind, Space, Wire, WireType};

#[derive(Clone, Debug)]
pub struct RandomConfig {
    pub max_nodes: usize,
    pub spaces: Vec<Space>,
    /// Boundary ports before parity fixing.
    pub max_boundary: usize,
    pub generators: bool,
    pub cups_caps_swaps: bool,
    pub max_spider_legs: usize,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            max_nodes: 12,
            spaces: alloc::vec![Space::new("N"), Space::new("S")],
            max_boundary: 3,
            generators: true,
            cups_caps_swaps: true,
            max_spider_legs: 4,
        }
    }
}

fn random_wire(rng: &mut impl Rng, spaces: &[Space]) -> Wire {
    Wire {
        space: spaces[rng.gen_range(0..spaces.len())].clone(),
        dual: rng.gen_bool(0.5),
    }
}

/// A well-formed diagram. Generators are named `g0`, `g1`, ...
pub fn random_diagram(rng: &mut impl Rng, cfg: &RandomConfig) -> Diagram {
    let mut d = Diagram::empty();
    let n = rng.gen_range(0..=cfg.max_nodes);
    let mut kinds: Vec<u8> = alloc::vec![0];
    if cfg.generators {
        kinds.push(1);
    }
    if cfg.cups_caps_swaps {
        kinds.extend([2, 3, 4]);
    }
    for i in 0..n {
        let space = cfg.spaces[rng.gen_range(0..cfg.spaces.len())].clone();
        let kind = match kinds[rng.gen_range(0..kinds.len())] {
            0 => {
                let legs = rng.gen_range(0..=cfg.max_spider_legs);
                let ins = rng.gen_range(0..=legs);
                NodeKind::spider(space, ins, legs - ins)
            }
            1 => {
                let ni = rng.gen_range(0..=1);
                let no = rng.gen_range(1..=2);
                NodeKind::Generator {
                    name: alloc::format!("g{i}"),
                    inputs: WireType((0..ni).map(|_| random_wire(rng, &cfg.spaces)).collect()),
                    outputs: WireType((0..no).map(|_| random_wire(rng, &cfg.spaces)).collect()),
                }
            }
            2 => NodeKind::Cup(space),
            3 => NodeKind::Cap(space),
            _ => NodeKind::Swap(space, cfg.spaces[rng.gen_range(0..cfg.spaces.len())].clone()),
        };
        d.nodes.push(kind);
    }
    let nb = rng.gen_range(0..=cfg.max_boundary);
    for _ in 0..nb {
        let w = random_wire(rng, &cfg.spaces);
        if rng.gen_bool(0.5) {
            d.inputs.0.push(w);
        } else {
            d.outputs.0.push(w);
        }
    }
    let mut by_space: BTreeMap<Space, Vec<End>> = BTreeMap::new();
    for e in d.all_ends() {
        by_space.entry(d.space_of(e).unwrap()).or_default().push(e);
    }
    for (space, ends) in by_space.iter_mut() {
        if ends.len() % 2 == 1 {
            d.outputs.0.push(Wire::plain(space.clone()));
            ends.push(End::Output(d.outputs.len() - 1));
        }
        ends.shuffle(rng);
        for pair in ends.chunks(2) {
            d.wires.push((pair[0], pair[1]));
        }
    }
    debug_assert!(d.check().is_ok());
    d
}
