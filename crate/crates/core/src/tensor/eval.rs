//! Contraction of a diagram's tensor network.
//!
//! Spiders, cups, caps and swaps only identify indices, so they are folded
//! into a union-find over wires before any arithmetic. Generator tensors are
//! then contracted pairwise, greedily picking the pair with the smallest
//! intermediate.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{odometer, Tensor, TensorError, TensorStore};
use crate::diagram::{Diagram, End, NodeKind};

struct Factor {
    labels: Vec<usize>,
    dims: Vec<usize>,
    data: Vec<f64>,
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let next = parent[y];
        parent[y] = r;
        y = next;
    }
    r
}

fn union(parent: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(parent, a), find(parent, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        parent[hi] = lo;
    }
}

/// Contracts `factors` (or sums a single one) onto the labels in `keep`.
fn contract(parts: &[&Factor], keep: &[usize], dim: &BTreeMap<usize, usize>) -> Factor {
    let mut all: Vec<usize> = Vec::new();
    for f in parts {
        for &l in &f.labels {
            if !all.contains(&l) {
                all.push(l);
            }
        }
    }
    let out_labels: Vec<usize> = all.iter().copied().filter(|l| keep.contains(l)).collect();
    let out_dims: Vec<usize> = out_labels.iter().map(|l| dim[l]).collect();
    let all_dims: Vec<usize> = all.iter().map(|l| dim[l]).collect();
    let pos = |l: usize| all.iter().position(|&x| x == l).expect("label present");
    let maps: Vec<Vec<usize>> = parts.iter().map(|f| f.labels.iter().map(|&l| pos(l)).collect()).collect();
    let out_map: Vec<usize> = out_labels.iter().map(|&l| pos(l)).collect();
    let mut data = alloc::vec![0.0; out_dims.iter().product::<usize>()];
    let mut idx = alloc::vec![0usize; all.len()];
    loop {
        let mut v = 1.0;
        for (f, m) in parts.iter().zip(&maps) {
            let mut off = 0;
            for (k, &p) in m.iter().enumerate() {
                off = off * f.dims[k] + idx[p];
            }
            v *= f.data[off];
        }
        let mut off = 0;
        for (k, &p) in out_map.iter().enumerate() {
            off = off * out_dims[k] + idx[p];
        }
        data[off] += v;
        if !odometer(&mut idx, &all_dims) {
            break;
        }
    }
    Factor {
        labels: out_labels,
        dims: out_dims,
        data,
    }
}

fn needed(factors: &[Factor], skip: &[usize], boundary: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = boundary.to_vec();
    for (i, f) in factors.iter().enumerate() {
        if !skip.contains(&i) {
            v.extend(f.labels.iter().copied());
        }
    }
    v.sort();
    v.dedup();
    v
}

/// Evaluates `d`. The result has one axis per input port, then one per
/// output port.
pub fn eval_diagram(d: &Diagram, store: &TensorStore) -> Result<Tensor, TensorError> {
    let mut end_wire: BTreeMap<End, usize> = BTreeMap::new();
    for (w, &(a, b)) in d.wires.iter().enumerate() {
        end_wire.insert(a, w);
        end_wire.insert(b, w);
    }
    let mut parent: Vec<usize> = (0..d.wires.len()).collect();
    let mut scalar = 1.0;
    let leg = |node: usize, leg: usize| end_wire[&End::Leg { node, leg }];
    for (n, kind) in d.nodes.iter().enumerate() {
        match kind {
            NodeKind::Spider { space, .. } if kind.arity() == 0 => scalar *= store.dim(space)? as f64,
            NodeKind::Spider { .. } | NodeKind::Cup(_) | NodeKind::Cap(_) => {
                for k in 1..kind.arity() {
                    union(&mut parent, leg(n, 0), leg(n, k));
                }
            }
            NodeKind::Swap(..) => {
                union(&mut parent, leg(n, 0), leg(n, 3));
                union(&mut parent, leg(n, 1), leg(n, 2));
            }
            NodeKind::Generator { .. } => {}
        }
    }
    let mut dim: BTreeMap<usize, usize> = BTreeMap::new();
    for (w, &(a, _)) in d.wires.iter().enumerate() {
        let r = find(&mut parent, w);
        let space = d.space_of(a).expect("wire end exists");
        dim.insert(r, store.dim(&space)?);
    }
    let mut factors: Vec<Factor> = Vec::new();
    for (n, kind) in d.nodes.iter().enumerate() {
        if let NodeKind::Generator { name, inputs, outputs } = kind {
            let shape = store.shape_of(&inputs.concat(outputs))?;
            let t = store.lookup(name, &shape)?;
            let labels: Vec<usize> = (0..kind.arity()).map(|k| find(&mut parent, leg(n, k))).collect();
            factors.push(Factor {
                labels,
                dims: t.dims(),
                data: t.data,
            });
        }
    }
    let ports: Vec<End> = (0..d.inputs.len())
        .map(End::Input)
        .chain((0..d.outputs.len()).map(End::Output))
        .collect();
    let port_labels: Vec<usize> = ports.iter().map(|e| find(&mut parent, end_wire[e])).collect();
    // Index classes touched by nothing but structure contribute their dimension.
    let mut touched: Vec<usize> = port_labels.clone();
    for f in &factors {
        touched.extend(f.labels.iter().copied());
    }
    for (&r, &dm) in &dim {
        if !touched.contains(&r) {
            scalar *= dm as f64;
        }
    }
    // Collapse repeated labels and sum out private ones.
    for i in 0..factors.len() {
        let keep = needed(&factors, &[i], &port_labels);
        let f = &factors[i];
        let mut uniq = f.labels.clone();
        uniq.sort();
        uniq.dedup();
        if uniq.len() != f.labels.len() || f.labels.iter().any(|l| !keep.contains(l)) {
            let reduced = contract(&[f], &keep, &dim);
            factors[i] = reduced;
        }
    }
    while factors.len() > 1 {
        let mut best: Option<((bool, usize, usize), usize, usize)> = None;
        for i in 0..factors.len() {
            for j in i + 1..factors.len() {
                let keep = needed(&factors, &[i, j], &port_labels);
                let shares = factors[i].labels.iter().any(|l| factors[j].labels.contains(l));
                let mut labels: Vec<usize> = factors[i].labels.clone();
                labels.extend(factors[j].labels.iter().copied());
                labels.sort();
                labels.dedup();
                let size: usize = labels.iter().filter(|l| keep.contains(l)).map(|l| dim[l]).product();
                let cost: usize = labels.iter().map(|l| dim[l]).product();
                let key = (!shares, size, cost);
                if best.as_ref().is_none_or(|b| key < b.0) {
                    best = Some((key, i, j));
                }
            }
        }
        let (_, i, j) = best.expect("at least one pair");
        let keep = needed(&factors, &[i, j], &port_labels);
        let merged = contract(&[&factors[i], &factors[j]], &keep, &dim);
        factors.remove(j);
        factors[i] = merged;
    }
    let last = factors.pop().unwrap_or(Factor {
        labels: Vec::new(),
        dims: Vec::new(),
        data: alloc::vec![1.0],
    });
    let shape = store.shape_of(&d.inputs.concat(&d.outputs))?;
    let mut out = Tensor::zeros(shape);
    let port_dims = out.dims();
    let mut idx = alloc::vec![0usize; ports.len()];
    let mut value_of: BTreeMap<usize, usize> = BTreeMap::new();
    'outer: loop {
        value_of.clear();
        let mut consistent = true;
        for (k, &l) in port_labels.iter().enumerate() {
            match value_of.get(&l) {
                Some(&v) if v != idx[k] => {
                    consistent = false;
                    break;
                }
                _ => {
                    value_of.insert(l, idx[k]);
                }
            }
        }
        if consistent {
            let mut off = 0;
            for (k, l) in last.labels.iter().enumerate() {
                off = off * last.dims[k] + value_of[l];
            }
            let v = scalar * last.data[off];
            out.set(&idx, v);
        }
        if !odometer(&mut idx, &port_dims) {
            break 'outer;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{Space, Wire, WireType};

    fn n() -> Space {
        Space::new("N")
    }

    fn store(dim: usize) -> TensorStore {
        TensorStore::seeded(&[("N", dim), ("S", 2)], 11)
    }

    #[test]
    fn identity_is_identity_matrix() {
        let d = Diagram::identity(&WireType(alloc::vec![Wire::plain(n())]));
        assert_eq!(eval_diagram(&d, &store(3)).unwrap(), Tensor::identity("N", 3));
    }

    #[test]
    fn snake_is_identity() {
        let w = Wire::plain(n());
        let left = Diagram::identity(&WireType(alloc::vec![w.clone()])).tensor(&Diagram::cap(&w.dual()));
        let right = Diagram::cup(&w).tensor(&Diagram::identity(&WireType(alloc::vec![w.clone()])));
        let snake = left.compose(&right).unwrap();
        assert_eq!(eval_diagram(&snake, &store(4)).unwrap(), Tensor::identity("N", 4));
    }

    #[test]
    fn multiplication_copies_basis() {
        let mu = Diagram::spider(&n(), 2, 1);
        let t = eval_diagram(&mu, &store(3)).unwrap();
        assert_eq!(t.get(&[1, 1, 1]), 1.0);
        assert_eq!(t.get(&[1, 2, 1]), 0.0);
        assert_eq!(t.get(&[1, 2, 2]), 0.0);
    }

    #[test]
    fn closed_loop_is_dimension() {
        let w = Wire::plain(n());
        let lp = Diagram::cap(&w).compose(&Diagram::cup(&w)).unwrap();
        assert_eq!(eval_diagram(&lp, &store(5)).unwrap().data, alloc::vec![5.0]);
    }

    #[test]
    fn empty_is_one() {
        assert_eq!(eval_diagram(&Diagram::empty(), &store(2)).unwrap(), Tensor::scalar(1.0));
    }

    #[test]
    fn generator_matrix_product() {
        let t1 = WireType(alloc::vec![Wire::plain(n())]);
        let f = Diagram::generator("f", t1.clone(), t1.clone());
        let g = Diagram::generator("g", t1.clone(), t1.clone());
        let s = store(3);
        let fg = eval_diagram(&f.compose(&g).unwrap(), &s).unwrap();
        let (a, b) = (eval_diagram(&f, &s).unwrap(), eval_diagram(&g, &s).unwrap());
        for i in 0..3 {
            for k in 0..3 {
                let want: f64 = (0..3).map(|j| a.get(&[i, j]) * b.get(&[j, k])).sum();
                assert!(super::super::abs(fg.get(&[i, k]) - want) < 1e-12);
            }
        }
    }
}
