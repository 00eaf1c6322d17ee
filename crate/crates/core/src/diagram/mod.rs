//! String diagrams for a compact closed category with a Frobenius algebra
//! on every space.
//!
//! A [`Diagram`] is an open graph. Nodes have numbered legs (inputs first,
//! then outputs) and every leg and every boundary port is the endpoint of
//! exactly one undirected wire. Bending a wire is free, so transposition is a
//! relabelling of the boundary and closed loops become zero-leg spiders.

mod network;
mod normalize;
pub mod random;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

pub use network::{frobenius_network, NetworkError};
pub use normalize::{normalize, normalize_with_trace, RewriteKind};

/// A semantic space such as `N` or `S`. Dimensions are bound at evaluation.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Space(Arc<str>);

impl Space {
    pub fn new(name: &str) -> Space {
        Space(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Wire {
    pub space: Space,
    pub dual: bool,
}

impl Wire {
    pub fn plain(space: Space) -> Wire {
        Wire { space, dual: false }
    }

    pub fn dual(&self) -> Wire {
        Wire {
            space: self.space.clone(),
            dual: !self.dual,
        }
    }
}

impl fmt::Display for Wire {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.space, if self.dual { "*" } else { "" })
    }
}

impl fmt::Debug for Wire {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A sequence of polarised spaces.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct WireType(pub Vec<Wire>);

impl WireType {
    pub fn empty() -> WireType {
        WireType(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Reverses the order and flips every polarity.
    pub fn dual(&self) -> WireType {
        WireType(self.0.iter().rev().map(Wire::dual).collect())
    }

    pub fn concat(&self, other: &WireType) -> WireType {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        WireType(v)
    }

    /// Drops polarities.
    pub fn spaces(&self) -> Vec<Space> {
        self.0.iter().map(|w| w.space.clone()).collect()
    }
}

impl fmt::Display for WireType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{w}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for WireType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum NodeKind {
    /// An opaque box, evaluated by looking up `name` in a tensor store.
    Generator {
        name: String,
        inputs: WireType,
        outputs: WireType,
    },
    /// Two inputs, no outputs.
    Cup(Space),
    /// No inputs, two outputs.
    Cap(Space),
    /// Inputs `(a, b)`, outputs `(b, a)`.
    Swap(Space, Space),
    /// Copying-algebra spider; `(1,2)` is Δ, `(2,1)` μ, `(1,0)` ι, `(0,1)` ζ.
    Spider { space: Space, ins: usize, outs: usize },
}

impl NodeKind {
    pub fn spider(space: Space, ins: usize, outs: usize) -> NodeKind {
        NodeKind::Spider { space, ins, outs }
    }

    pub fn in_arity(&self) -> usize {
        match self {
            NodeKind::Generator { inputs, .. } => inputs.len(),
            NodeKind::Cup(_) | NodeKind::Swap(..) => 2,
            NodeKind::Cap(_) => 0,
            NodeKind::Spider { ins, .. } => *ins,
        }
    }

    pub fn out_arity(&self) -> usize {
        match self {
            NodeKind::Generator { outputs, .. } => outputs.len(),
            NodeKind::Cap(_) | NodeKind::Swap(..) => 2,
            NodeKind::Cup(_) => 0,
            NodeKind::Spider { outs, .. } => *outs,
        }
    }

    pub fn arity(&self) -> usize {
        self.in_arity() + self.out_arity()
    }

    /// Space of every leg, inputs first.
    pub fn leg_spaces(&self) -> Vec<Space> {
        match self {
            NodeKind::Generator { inputs, outputs, .. } => {
                let mut v = inputs.spaces();
                v.extend(outputs.spaces());
                v
            }
            NodeKind::Cup(s) | NodeKind::Cap(s) => alloc::vec![s.clone(), s.clone()],
            NodeKind::Swap(a, b) => alloc::vec![a.clone(), b.clone(), b.clone(), a.clone()],
            NodeKind::Spider { space, ins, outs } => alloc::vec![space.clone(); ins + outs],
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            NodeKind::Generator { .. } => "generator",
            NodeKind::Cup(_) => "cup",
            NodeKind::Cap(_) => "cap",
            NodeKind::Swap(..) => "swap",
            NodeKind::Spider { .. } => "spider",
        }
    }
}

/// A wire endpoint.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum End {
    Input(usize),
    Output(usize),
    /// Leg `leg` of node `node`; inputs are numbered before outputs.
    Leg { node: usize, leg: usize },
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            End::Input(i) => write!(f, "in{i}"),
            End::Output(i) => write!(f, "out{i}"),
            End::Leg { node, leg } => write!(f, "n{node}.{leg}"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Diagram {
    pub inputs: WireType,
    pub outputs: WireType,
    pub nodes: Vec<NodeKind>,
    pub wires: Vec<(End, End)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("boundary mismatch at port {port}: {left} vs {right}")]
    Boundary {
        port: usize,
        left: String,
        right: String,
    },
    #[error("boundary lengths differ: {left} vs {right}")]
    BoundaryLength { left: usize, right: usize },
    #[error("endpoint {0} is used by more than one wire")]
    Reused(String),
    #[error("endpoint {0} is not connected")]
    Dangling(String),
    #[error("endpoint {0} does not exist")]
    NoSuchEnd(String),
    #[error("wire {a} - {b} joins space {sa} to space {sb}")]
    SpaceMismatch {
        a: String,
        b: String,
        sa: String,
        sb: String,
    },
}

impl Diagram {
    pub fn empty() -> Diagram {
        Diagram::default()
    }

    pub fn identity(t: &WireType) -> Diagram {
        Diagram {
            inputs: t.clone(),
            outputs: t.clone(),
            nodes: Vec::new(),
            wires: (0..t.len()).map(|i| (End::Input(i), End::Output(i))).collect(),
        }
    }

    /// A diagram consisting of one node whose input legs are the diagram
    /// inputs and whose output legs are the diagram outputs.
    pub fn single(kind: NodeKind, inputs: WireType, outputs: WireType) -> Diagram {
        assert_eq!(kind.in_arity(), inputs.len());
        assert_eq!(kind.out_arity(), outputs.len());
        let ni = inputs.len();
        let mut wires: Vec<(End, End)> = (0..ni)
            .map(|i| (End::Input(i), End::Leg { node: 0, leg: i }))
            .collect();
        wires.extend((0..outputs.len()).map(|j| (End::Leg { node: 0, leg: ni + j }, End::Output(j))));
        Diagram {
            inputs,
            outputs,
            nodes: alloc::vec![kind],
            wires,
        }
    }

    pub fn generator(name: &str, inputs: WireType, outputs: WireType) -> Diagram {
        let kind = NodeKind::Generator {
            name: String::from(name),
            inputs: inputs.clone(),
            outputs: outputs.clone(),
        };
        Diagram::single(kind, inputs, outputs)
    }

    /// `ε : w ⊗ w* → I`
    pub fn cup(w: &Wire) -> Diagram {
        Diagram::single(
            NodeKind::Cup(w.space.clone()),
            WireType(alloc::vec![w.clone(), w.dual()]),
            WireType::empty(),
        )
    }

    /// `η : I → w ⊗ w*`
    pub fn cap(w: &Wire) -> Diagram {
        Diagram::single(
            NodeKind::Cap(w.space.clone()),
            WireType::empty(),
            WireType(alloc::vec![w.clone(), w.dual()]),
        )
    }

    pub fn swap(a: &Wire, b: &Wire) -> Diagram {
        Diagram::single(
            NodeKind::Swap(a.space.clone(), b.space.clone()),
            WireType(alloc::vec![a.clone(), b.clone()]),
            WireType(alloc::vec![b.clone(), a.clone()]),
        )
    }

    pub fn spider(space: &Space, ins: usize, outs: usize) -> Diagram {
        let w = Wire::plain(space.clone());
        Diagram::single(
            NodeKind::spider(space.clone(), ins, outs),
            WireType(alloc::vec![w.clone(); ins]),
            WireType(alloc::vec![w; outs]),
        )
    }

    /// The same graph read as a map `outputs* → inputs*`.
    pub fn transpose(&self) -> Diagram {
        let (ni, no) = (self.inputs.len(), self.outputs.len());
        let flip = |e: End| match e {
            End::Input(i) => End::Output(ni - 1 - i),
            End::Output(j) => End::Input(no - 1 - j),
            leg => leg,
        };
        Diagram {
            inputs: self.outputs.dual(),
            outputs: self.inputs.dual(),
            nodes: self.nodes.clone(),
            wires: self.wires.iter().map(|&(a, b)| (flip(a), flip(b))).collect(),
        }
    }

    pub fn space_of(&self, e: End) -> Option<Space> {
        match e {
            End::Input(i) => self.inputs.0.get(i).map(|w| w.space.clone()),
            End::Output(j) => self.outputs.0.get(j).map(|w| w.space.clone()),
            End::Leg { node, leg } => self.nodes.get(node)?.leg_spaces().get(leg).cloned(),
        }
    }

    /// Checks that every endpoint exists, is used once and that wires
    /// respect spaces.
    pub fn check(&self) -> Result<(), DiagramError> {
        let mut seen = BTreeMap::new();
        for &(a, b) in &self.wires {
            for e in [a, b] {
                if self.space_of(e).is_none() {
                    return Err(DiagramError::NoSuchEnd(alloc::format!("{e}")));
                }
                if seen.insert(e, ()).is_some() {
                    return Err(DiagramError::Reused(alloc::format!("{e}")));
                }
            }
            let (sa, sb) = (self.space_of(a).unwrap(), self.space_of(b).unwrap());
            if sa != sb {
                return Err(DiagramError::SpaceMismatch {
                    a: alloc::format!("{a}"),
                    b: alloc::format!("{b}"),
                    sa: alloc::format!("{sa}"),
                    sb: alloc::format!("{sb}"),
                });
            }
        }
        for e in self.all_ends() {
            if !seen.contains_key(&e) {
                return Err(DiagramError::Dangling(alloc::format!("{e}")));
            }
        }
        Ok(())
    }

    pub fn all_ends(&self) -> Vec<End> {
        let mut v: Vec<End> = (0..self.inputs.len()).map(End::Input).collect();
        v.extend((0..self.outputs.len()).map(End::Output));
        for (node, k) in self.nodes.iter().enumerate() {
            v.extend((0..k.arity()).map(|leg| End::Leg { node, leg }));
        }
        v
    }

    /// Sequential composition: `self` first, then `next`.
    pub fn compose(&self, next: &Diagram) -> Result<Diagram, DiagramError> {
        check_boundary(&self.outputs, &next.inputs)?;
        let offset = self.nodes.len();
        // middle ports are glued; everything else keeps its identity
        #[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
        enum P {
            Outer(End),
            Mid(usize),
        }
        let mut edges: Vec<(P, P)> = Vec::with_capacity(self.wires.len() + next.wires.len());
        for &(a, b) in &self.wires {
            let m = |e: End| match e {
                End::Output(j) => P::Mid(j),
                e => P::Outer(e),
            };
            edges.push((m(a), m(b)));
        }
        for &(a, b) in &next.wires {
            let m = |e: End| match e {
                End::Input(i) => P::Mid(i),
                End::Leg { node, leg } => P::Outer(End::Leg { node: node + offset, leg }),
                e => P::Outer(e),
            };
            edges.push((m(a), m(b)));
        }
        let mut incident: BTreeMap<P, Vec<usize>> = BTreeMap::new();
        for (i, &(a, b)) in edges.iter().enumerate() {
            incident.entry(a).or_default().push(i);
            incident.entry(b).or_default().push(i);
        }
        let other = |e: usize, p: P| if edges[e].0 == p { edges[e].1 } else { edges[e].0 };
        let mut used = alloc::vec![false; edges.len()];
        let mut nodes = self.nodes.clone();
        nodes.extend(next.nodes.iter().cloned());
        let mut wires = Vec::new();
        for (p, inc) in &incident {
            let P::Outer(s) = *p else { continue };
            let first = inc[0];
            if used[first] {
                continue;
            }
            used[first] = true;
            let mut last = first;
            let mut cur = other(first, *p);
            while let P::Mid(_) = cur {
                let e = *incident[&cur].iter().find(|&&e| e != last).expect("middle ports have two wires");
                used[e] = true;
                cur = other(e, cur);
                last = e;
            }
            let P::Outer(t) = cur else { unreachable!() };
            wires.push((s, t));
        }
        // closed loops made only of middle ports
        for start in 0..edges.len() {
            if used[start] {
                continue;
            }
            let P::Mid(j) = edges[start].0 else { unreachable!("unvisited wire touches the outer boundary") };
            used[start] = true;
            let origin = edges[start].0;
            let mut last = start;
            let mut cur = edges[start].1;
            while cur != origin {
                let e = *incident[&cur].iter().find(|&&e| e != last).expect("middle ports have two wires");
                used[e] = true;
                cur = other(e, cur);
                last = e;
            }
            nodes.push(NodeKind::spider(self.outputs.0[j].space.clone(), 0, 0));
        }
        Ok(Diagram {
            inputs: self.inputs.clone(),
            outputs: next.outputs.clone(),
            nodes,
            wires,
        })
    }

    /// Parallel composition, `self` on the left.
    pub fn tensor(&self, other: &Diagram) -> Diagram {
        let (ni, no, nn) = (self.inputs.len(), self.outputs.len(), self.nodes.len());
        let shift = |e: End| match e {
            End::Input(i) => End::Input(i + ni),
            End::Output(j) => End::Output(j + no),
            End::Leg { node, leg } => End::Leg { node: node + nn, leg },
        };
        let mut wires = self.wires.clone();
        wires.extend(other.wires.iter().map(|&(a, b)| (shift(a), shift(b))));
        let mut nodes = self.nodes.clone();
        nodes.extend(other.nodes.iter().cloned());
        Diagram {
            inputs: self.inputs.concat(&other.inputs),
            outputs: self.outputs.concat(&other.outputs),
            nodes,
            wires,
        }
    }

    /// Renumbers the diagram under a permutation of its nodes; `perm[i]` is
    /// the new index of node `i`.
    pub fn relabel_nodes(&self, perm: &[usize]) -> Diagram {
        assert_eq!(perm.len(), self.nodes.len());
        let mut nodes = alloc::vec![None; self.nodes.len()];
        for (i, k) in self.nodes.iter().enumerate() {
            nodes[perm[i]] = Some(k.clone());
        }
        let map = |e: End| match e {
            End::Leg { node, leg } => End::Leg { node: perm[node], leg },
            e => e,
        };
        Diagram {
            inputs: self.inputs.clone(),
            outputs: self.outputs.clone(),
            nodes: nodes.into_iter().map(|k| k.expect("perm is a bijection")).collect(),
            wires: self.wires.iter().map(|&(a, b)| (map(a), map(b))).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.nodes.len() + self.wires.len()
    }

    pub fn count_kind(&self, kind: &str) -> usize {
        self.nodes.iter().filter(|k| k.kind_name() == kind).count()
    }

    pub fn generator_names(&self) -> Vec<&str> {
        self.nodes
            .iter()
            .filter_map(|k| match k {
                NodeKind::Generator { name, .. } => Some(name.as_str()),
                _ => None,
            })
            .collect()
    }
}

/// Parallel composition of a list of diagrams, left to right.
pub fn tensor_all<'a>(ds: impl IntoIterator<Item = &'a Diagram>) -> Diagram {
    ds.into_iter().fold(Diagram::empty(), |acc, d| acc.tensor(d))
}

fn check_boundary(left: &WireType, right: &WireType) -> Result<(), DiagramError> {
    for (i, (a, b)) in left.0.iter().zip(right.0.iter()).enumerate() {
        if a != b {
            return Err(DiagramError::Boundary {
                port: i,
                left: alloc::format!("{a}"),
                right: alloc::format!("{b}"),
            });
        }
    }
    if left.len() != right.len() {
        return Err(DiagramError::BoundaryLength {
            left: left.len(),
            right: right.len(),
        });
    }
    Ok(())
}
