//! Independent evaluators: exhaustive index summation and the closed form
//! for the parasitic-gap relative clause.

use alloc::string::ToString;
use alloc::vec::Vec;

use super::{odometer, show_shape, Tensor, TensorError, TensorStore};
use crate::diagram::{Diagram, End, NodeKind};

/// Largest number of summation terms [`oracle_eval`] accepts.
pub const ORACLE_LIMIT: u128 = 100_000_000;

/// Number of terms exhaustive evaluation of `d` would visit.
pub fn oracle_cost(d: &Diagram, store: &TensorStore) -> Result<u128, TensorError> {
    let mut cost: u128 = 1;
    for &(a, _) in &d.wires {
        let space = d.space_of(a).expect("wire end exists");
        cost = cost.saturating_mul(store.dim(&space)? as u128);
    }
    Ok(cost)
}

/// Sums the product of all node values over every assignment of an index
/// to every wire.
pub fn oracle_eval(d: &Diagram, store: &TensorStore) -> Result<Tensor, TensorError> {
    let cost = oracle_cost(d, store)?;
    if cost > ORACLE_LIMIT {
        return Err(TensorError::TooExpensive(cost));
    }
    let wire_dims: Vec<usize> = d
        .wires
        .iter()
        .map(|&(a, _)| store.dim(&d.space_of(a).expect("wire end exists")))
        .collect::<Result<_, _>>()?;
    let wire_of = |e: End| {
        d.wires
            .iter()
            .position(|&(a, b)| a == e || b == e)
            .expect("every end is wired")
    };
    // Per node: its tensor (generators only) and the wire at each leg.
    let mut nodes: Vec<(Option<Tensor>, Vec<usize>)> = Vec::new();
    for (n, kind) in d.nodes.iter().enumerate() {
        let legs: Vec<usize> = (0..kind.arity()).map(|leg| wire_of(End::Leg { node: n, leg })).collect();
        let t = match kind {
            NodeKind::Generator { name, inputs, outputs } => {
                let shape = store.shape_of(&inputs.concat(outputs))?;
                let t = store.lookup(name, &shape)?;
                if t.dims() != shape.iter().map(|s| s.1).collect::<Vec<_>>() {
                    return Err(TensorError::ShapeMismatch {
                        name: name.to_string(),
                        expected: show_shape(&shape),
                        found: show_shape(&t.shape),
                    });
                }
                Some(t)
            }
            _ => None,
        };
        nodes.push((t, legs));
    }
    let ports: Vec<usize> = (0..d.inputs.len())
        .map(|i| wire_of(End::Input(i)))
        .chain((0..d.outputs.len()).map(|j| wire_of(End::Output(j))))
        .collect();
    let shape = store.shape_of(&d.inputs.concat(&d.outputs))?;
    let mut out = Tensor::zeros(shape);
    let mut out_idx = alloc::vec![0usize; ports.len()];
    let mut idx = alloc::vec![0usize; d.wires.len()];
    let mut leg_idx: Vec<usize> = Vec::new();
    loop {
        let mut v = 1.0;
        for ((t, legs), kind) in nodes.iter().zip(&d.nodes) {
            leg_idx.clear();
            leg_idx.extend(legs.iter().map(|&w| idx[w]));
            v *= match (kind, t) {
                (NodeKind::Generator { .. }, Some(t)) => t.get(&leg_idx),
                (NodeKind::Spider { space, .. }, _) if leg_idx.is_empty() => store.dim(space)? as f64,
                (NodeKind::Swap(..), _) => {
                    if leg_idx[0] == leg_idx[3] && leg_idx[1] == leg_idx[2] {
                        1.0
                    } else {
                        0.0
                    }
                }
                _ => {
                    if leg_idx.iter().all(|&i| i == leg_idx[0]) {
                        1.0
                    } else {
                        0.0
                    }
                }
            };
        }
        for (k, &w) in ports.iter().enumerate() {
            out_idx[k] = idx[w];
        }
        let cur = out.get(&out_idx);
        out.set(&out_idx, cur + v);
        if !odometer(&mut idx, &wire_dims) {
            break;
        }
    }
    Ok(out)
}

fn expect(store: &TensorStore, name: &str, dims: &[(&str, usize)]) -> Result<Tensor, TensorError> {
    let shape: Vec<(alloc::string::String, usize)> = dims.iter().map(|(s, d)| (s.to_string(), *d)).collect();
    store.lookup(name, &shape)
}

/// `papers ⊙ Σ_s Σ_subj Bob[subj] · (rejected ⊙ reading)[subj, s, ·]`,
/// with verb cubes indexed (subject, sentence, object).
pub fn closed_form_parasitic_adjunct(store: &TensorStore) -> Result<Tensor, TensorError> {
    let n = store.dims.get("N").copied().ok_or_else(|| TensorError::MissingDim("N".to_string()))?;
    let s = store.dims.get("S").copied().ok_or_else(|| TensorError::MissingDim("S".to_string()))?;
    let papers = expect(store, "papers", &[("N", n)])?;
    let bob = expect(store, "Bob", &[("N", n)])?;
    let rejected = expect(store, "rejected", &[("N", n), ("S", s), ("N", n)])?;
    let reading = expect(store, "reading", &[("N", n), ("S", s), ("N", n)])?;
    let mut out = Tensor::zeros(alloc::vec![("N".to_string(), n)]);
    for j in 0..n {
        let mut acc = 0.0;
        for k in 0..s {
            for i in 0..n {
                acc += bob.data[i] * rejected.get(&[i, k, j]) * reading.get(&[i, k, j]);
            }
        }
        out.data[j] = papers.data[j] * acc;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{Space, Wire};

    #[test]
    fn empty_is_one() {
        let s = TensorStore::seeded(&[("N", 2)], 0);
        assert_eq!(oracle_eval(&Diagram::empty(), &s).unwrap(), Tensor::scalar(1.0));
    }

    #[test]
    fn cup_is_pairing() {
        let s = TensorStore::seeded(&[("N", 2)], 0);
        let cup = Diagram::cup(&Wire::plain(Space::new("N")));
        let t = oracle_eval(&cup, &s).unwrap();
        assert_eq!(t.get(&[0, 1]), 0.0);
        assert_eq!(t.get(&[0, 0]), 1.0);
    }

    #[test]
    fn rejects_huge_sums() {
        let s = TensorStore::seeded(&[("N", 100)], 0);
        let w = Wire::plain(Space::new("N"));
        let mut d = Diagram::empty();
        for _ in 0..5 {
            d = d.tensor(&Diagram::cup(&w));
        }
        assert!(matches!(oracle_eval(&d, &s), Err(TensorError::TooExpensive(_))));
    }

    #[test]
    fn closed_form_all_ones() {
        let mut s = TensorStore::seeded(&[("N", 2), ("S", 2)], 0);
        s.generate = false;
        let ones = |dims: &[usize]| {
            let shape: Vec<_> = dims
                .iter()
                .zip(["N", "S", "N"])
                .map(|(d, n)| (n.to_string(), *d))
                .collect();
            let len = dims.iter().product();
            Tensor::new(shape, alloc::vec![1.0; len]).unwrap()
        };
        s.tensors.insert("papers".to_string(), ones(&[2]));
        s.tensors.insert("Bob".to_string(), ones(&[2]));
        s.tensors.insert("rejected".to_string(), ones(&[2, 2, 2]));
        s.tensors.insert("reading".to_string(), ones(&[2, 2, 2]));
        // Brute force: each output sums dim(S) * dim(N) unit products.
        let mut want = 0.0;
        for _ in 0..2 {
            for _ in 0..2 {
                want += 1.0;
            }
        }
        let got = closed_form_parasitic_adjunct(&s).unwrap();
        assert_eq!(got.data, alloc::vec![want, want]);
        s.tensors.insert("papers".to_string(), Tensor::zeros(alloc::vec![("N".to_string(), 2)]));
        assert_eq!(closed_form_parasitic_adjunct(&s).unwrap().data, alloc::vec![0.0, 0.0]);
    }
}
