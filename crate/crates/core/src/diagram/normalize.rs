//! Rewriting to normal form: yanking, swap removal, identity spiders,
//! spider self-loops and spider fusion.
//!
//! Fusion and loop removal are sound for the copying algebra because it is
//! special (`μ∘Δ = id`). Every rewrite strictly decreases the number of nodes
//! plus wires, which bounds the number of steps.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{Diagram, End, NodeKind};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RewriteKind {
    Yank,
    SwapRemoval,
    IdentitySpider,
    SpiderLoop,
    SpiderFusion,
}

struct Work {
    d: Diagram,
    alive: Vec<bool>,
    wires: Vec<Option<(End, End)>>,
    at: BTreeMap<End, usize>,
}

impl Work {
    fn new(d: &Diagram) -> Work {
        let mut at = BTreeMap::new();
        for (i, &(a, b)) in d.wires.iter().enumerate() {
            at.insert(a, i);
            at.insert(b, i);
        }
        Work {
            alive: alloc::vec![true; d.nodes.len()],
            wires: d.wires.iter().copied().map(Some).collect(),
            d: d.clone(),
            at,
        }
    }

    fn size(&self) -> usize {
        self.alive.iter().filter(|&&a| a).count() + self.wires.iter().filter(|w| w.is_some()).count()
    }

    fn partner(&self, e: End) -> End {
        let (a, b) = self.wires[self.at[&e]].expect("live wire");
        if a == e {
            b
        } else {
            a
        }
    }

    fn remove_wire_at(&mut self, e: End) -> End {
        let idx = self.at[&e];
        let (a, b) = self.wires[idx].take().expect("live wire");
        self.at.remove(&a);
        self.at.remove(&b);
        if a == e {
            b
        } else {
            a
        }
    }

    fn add_wire(&mut self, a: End, b: End) {
        let idx = self.wires.len();
        self.wires.push(Some((a, b)));
        self.at.insert(a, idx);
        self.at.insert(b, idx);
    }

    fn add_node(&mut self, k: NodeKind) -> usize {
        self.d.nodes.push(k);
        self.alive.push(true);
        self.d.nodes.len() - 1
    }

    /// Deletes `node`, joining its legs pairwise as given. Chains through the
    /// node's own legs are followed; loops become scalar spiders.
    fn dissolve(&mut self, node: usize, pairs: &[(usize, usize)]) {
        let arity = self.d.nodes[node].arity();
        let spaces = self.d.nodes[node].leg_spaces();
        let mut mate = alloc::vec![usize::MAX; arity];
        for &(a, b) in pairs {
            mate[a] = b;
            mate[b] = a;
        }
        let mut outside = alloc::vec![None; arity];
        let mut own = alloc::vec![None; arity];
        for leg in 0..arity {
            let e = End::Leg { node, leg };
            if !self.at.contains_key(&e) {
                continue;
            }
            match self.remove_wire_at(e) {
                End::Leg { node: n, leg: l } if n == node => {
                    own[leg] = Some(l);
                    own[l] = Some(leg);
                }
                other => outside[leg] = Some(other),
            }
        }
        self.alive[node] = false;
        let mut seen = alloc::vec![false; arity];
        for start in 0..arity {
            let Some(from) = outside[start] else { continue };
            if seen[start] {
                continue;
            }
            seen[start] = true;
            let mut cur = mate[start];
            loop {
                seen[cur] = true;
                if let Some(to) = outside[cur] {
                    self.add_wire(from, to);
                    break;
                }
                let next = own[cur].expect("every leg is wired");
                seen[next] = true;
                cur = mate[next];
            }
        }
        for start in 0..arity {
            if seen[start] {
                continue;
            }
            let mut cur = start;
            loop {
                seen[cur] = true;
                let next = own[cur].expect("every leg is wired");
                seen[next] = true;
                cur = mate[next];
                if cur == start {
                    break;
                }
            }
            self.add_node(NodeKind::spider(spaces[start].clone(), 0, 0));
        }
    }

    /// Replaces `node` by `kind`, whose legs are `legs[k]` = old leg index
    /// (or `(other_node, leg)`); wires follow their legs.
    fn rewire_legs(&mut self, moves: &[(End, End)]) {
        // detach first so that targets never collide with sources
        let mut pending = Vec::new();
        for &(old, new) in moves {
            let idx = self.at.remove(&old).expect("leg is wired");
            pending.push((idx, old, new));
        }
        for (idx, old, new) in pending {
            let (a, b) = self.wires[idx].expect("live wire");
            let w = if a == old { (new, b) } else { (a, new) };
            self.wires[idx] = Some(w);
            self.at.insert(new, idx);
        }
    }

    fn try_step(&mut self) -> Option<RewriteKind> {
        for node in 0..self.d.nodes.len() {
            if !self.alive[node] {
                continue;
            }
            match self.d.nodes[node].clone() {
                NodeKind::Cup(_) | NodeKind::Cap(_) => {
                    self.dissolve(node, &[(0, 1)]);
                    return Some(RewriteKind::Yank);
                }
                NodeKind::Swap(..) => {
                    self.dissolve(node, &[(0, 3), (1, 2)]);
                    return Some(RewriteKind::SwapRemoval);
                }
                NodeKind::Spider { ins, outs, .. } if ins + outs == 2 => {
                    self.dissolve(node, &[(0, 1)]);
                    return Some(RewriteKind::IdentitySpider);
                }
                _ => {}
            }
        }
        for node in 0..self.d.nodes.len() {
            if !self.alive[node] {
                continue;
            }
            let NodeKind::Spider { space, ins, outs } = self.d.nodes[node].clone() else {
                continue;
            };
            for leg in 0..ins + outs {
                let p = self.partner(End::Leg { node, leg });
                if let End::Leg { node: n2, leg: l2 } = p {
                    if n2 == node {
                        self.spider_loop(node, leg, l2, &space, ins, outs);
                        return Some(RewriteKind::SpiderLoop);
                    }
                    if let NodeKind::Spider { space: s2, ins: i2, outs: o2 } = &self.d.nodes[n2] {
                        if *s2 == space && self.alive[n2] {
                            let (i2, o2) = (*i2, *o2);
                            self.fuse(node, leg, (ins, outs), n2, l2, (i2, o2));
                            return Some(RewriteKind::SpiderFusion);
                        }
                    }
                }
            }
        }
        None
    }

    fn spider_loop(&mut self, node: usize, a: usize, b: usize, space: &super::Space, ins: usize, outs: usize) {
        self.remove_wire_at(End::Leg { node, leg: a });
        let dropped_in = usize::from(a < ins) + usize::from(b < ins);
        let new_ins = ins - dropped_in;
        let new_outs = outs - (2 - dropped_in);
        let mut moves = Vec::new();
        let mut next = 0;
        for leg in 0..ins + outs {
            if leg == a || leg == b {
                continue;
            }
            if leg != next {
                moves.push((End::Leg { node, leg }, End::Leg { node, leg: next }));
            }
            next += 1;
        }
        self.rewire_legs(&moves);
        self.d.nodes[node] = NodeKind::spider(space.clone(), new_ins, new_outs);
    }

    fn fuse(&mut self, n1: usize, l1: usize, (i1, o1): (usize, usize), n2: usize, l2: usize, (i2, o2): (usize, usize)) {
        let space = match &self.d.nodes[n1] {
            NodeKind::Spider { space, .. } => space.clone(),
            _ => unreachable!(),
        };
        self.remove_wire_at(End::Leg { node: n1, leg: l1 });
        // new leg order: ins of n1, ins of n2, outs of n1, outs of n2
        let ins1: Vec<usize> = (0..i1).filter(|&l| l != l1).collect();
        let ins2: Vec<usize> = (0..i2).filter(|&l| l != l2).collect();
        let outs1: Vec<usize> = (i1..i1 + o1).filter(|&l| l != l1).collect();
        let outs2: Vec<usize> = (i2..i2 + o2).filter(|&l| l != l2).collect();
        let mut moves = Vec::new();
        let mut k = 0;
        let push = |node: usize, legs: &[usize], moves: &mut Vec<(End, End)>, k: &mut usize| {
            for &leg in legs {
                moves.push((End::Leg { node, leg }, End::Leg { node: n1, leg: *k }));
                *k += 1;
            }
        };
        push(n1, &ins1, &mut moves, &mut k);
        push(n2, &ins2, &mut moves, &mut k);
        push(n1, &outs1, &mut moves, &mut k);
        push(n2, &outs2, &mut moves, &mut k);
        moves.retain(|(a, b)| a != b);
        self.rewire_legs(&moves);
        self.d.nodes[n1] = NodeKind::spider(space, ins1.len() + ins2.len(), outs1.len() + outs2.len());
        self.alive[n2] = false;
    }

    fn finish(self) -> Diagram {
        let mut index = alloc::vec![usize::MAX; self.d.nodes.len()];
        let mut nodes = Vec::new();
        for (i, k) in self.d.nodes.into_iter().enumerate() {
            if self.alive[i] {
                index[i] = nodes.len();
                nodes.push(k);
            }
        }
        let map = |e: End| match e {
            End::Leg { node, leg } => End::Leg { node: index[node], leg },
            e => e,
        };
        Diagram {
            inputs: self.d.inputs,
            outputs: self.d.outputs,
            nodes,
            wires: self.wires.into_iter().flatten().map(|(a, b)| (map(a), map(b))).collect(),
        }
    }
}

/// Rewrites until no rule applies.
pub fn normalize(d: &Diagram) -> Diagram {
    normalize_with_trace(d).0
}

/// As [`normalize`], also returning the rewrites in the order applied.
pub fn normalize_with_trace(d: &Diagram) -> (Diagram, Vec<RewriteKind>) {
    let mut w = Work::new(d);
    let mut trace = Vec::new();
    let mut size = w.size();
    while let Some(step) = w.try_step() {
        let now = w.size();
        assert!(now < size, "rewrite {step:?} did not shrink the diagram");
        size = now;
        trace.push(step);
    }
    (w.finish(), trace)
}
