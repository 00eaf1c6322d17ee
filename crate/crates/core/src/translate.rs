//! The interpretation of types and proofs in a compact closed category.
//!
//! `⟦A/B⟧ = ⟦A⟧ ⊗ ⟦B⟧*`, `⟦A\B⟧ = ⟦A⟧* ⊗ ⟦B⟧`, both unary families are
//! erased, and `(X⊗Y)* = Y*⊗X*`. Evaluations become cups, co-evaluations
//! caps, and the structural postulates become plain rewirings.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::diagram::{normalize, tensor_all, Diagram, DiagramError, End, NodeKind, Space, Wire, WireType};
use crate::formula::{Atom, Formula, Polarity};
use crate::lexicon::Lexicon;
use crate::prover::{Arrow, ProofTerm, TermError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("atom `{0}` has no registered semantic type")]
    UnregisteredAtom(String),
    #[error("invalid proof: {0}")]
    InvalidProof(#[from] TermError),
    #[error("diagram error: {0}")]
    Diagram(#[from] DiagramError),
    #[error("lexical network for word {word} has boundary {found}, expected {expected}")]
    LexicalBoundary {
        word: usize,
        found: String,
        expected: String,
    },
    #[error("no lexicon entry `{0}`")]
    UnknownEntry(String),
    #[error("linking leaves wire {0} unmatched")]
    Unmatched(String),
}

/// Semantic type of every atom.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AtomRegistry {
    map: BTreeMap<Atom, WireType>,
}

impl AtomRegistry {
    pub fn new() -> Self {
        AtomRegistry::default()
    }

    /// `n, np, pp ↦ N`, `s, wh ↦ S`, `gp, ap, to_inf ↦ N*⊗S`.
    pub fn standard() -> Self {
        let n = Space::new("N");
        let s = Space::new("S");
        let mut r = AtomRegistry::new();
        for a in ["n", "np", "pp"] {
            r.insert(Atom::new(a), WireType(alloc::vec![Wire::plain(n.clone())]));
        }
        for a in ["s", "wh"] {
            r.insert(Atom::new(a), WireType(alloc::vec![Wire::plain(s.clone())]));
        }
        for a in ["gp", "ap", "to_inf"] {
            r.insert(
                Atom::new(a),
                WireType(alloc::vec![Wire::plain(n.clone()).dual(), Wire::plain(s.clone())]),
            );
        }
        r
    }

    /// Every atom interpreted as a single wire of its own space. Under this
    /// reading a proof's diagram shows its axiom links directly.
    pub fn atomic(atoms: impl IntoIterator<Item = Atom>) -> Self {
        let mut r = AtomRegistry::new();
        for a in atoms {
            let w = Wire::plain(Space::new(a.name()));
            r.insert(a, WireType(alloc::vec![w]));
        }
        r
    }

    pub fn insert(&mut self, a: Atom, t: WireType) {
        self.map.insert(a, t);
    }

    pub fn get(&self, a: &Atom) -> Option<&WireType> {
        self.map.get(a)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Atom, &WireType)> {
        self.map.iter()
    }
}

pub fn interpret_type(f: &Formula, reg: &AtomRegistry) -> Result<WireType, TranslateError> {
    Ok(match f {
        Formula::Atom(a) => reg
            .get(a)
            .cloned()
            .ok_or_else(|| TranslateError::UnregisteredAtom(String::from(a.name())))?,
        Formula::Tensor(a, b) => interpret_type(a, reg)?.concat(&interpret_type(b, reg)?),
        Formula::Over(a, b) => interpret_type(a, reg)?.concat(&interpret_type(b, reg)?.dual()),
        Formula::Under(a, b) => interpret_type(a, reg)?.dual().concat(&interpret_type(b, reg)?),
        Formula::Dia(_, a) | Formula::Box(_, a) => interpret_type(a, reg)?,
    })
}

/// The diagram of a proof, from `⟦source⟧` to `⟦target⟧`.
pub fn interpret_proof(p: &ProofTerm, reg: &AtomRegistry) -> Result<Diagram, TranslateError> {
    p.validate()?;
    build(p, reg)
}

fn ty(f: &Formula, reg: &AtomRegistry) -> Result<WireType, TranslateError> {
    interpret_type(f, reg)
}

/// `prefix ⊗ X ⊗ X* ⊗ suffix → prefix ⊗ suffix` with nested cups, where `X`
/// starts at input `at`.
fn with_cups(inputs: WireType, outputs: WireType, cups: &[(usize, usize)], passthrough: &[(usize, usize)]) -> Diagram {
    let mut d = Diagram {
        inputs,
        outputs,
        nodes: Vec::new(),
        wires: Vec::new(),
    };
    for &(a, b) in cups {
        let node = d.nodes.len();
        d.nodes.push(NodeKind::Cup(d.inputs.0[a].space.clone()));
        d.wires.push((End::Input(a), End::Leg { node, leg: 0 }));
        d.wires.push((End::Input(b), End::Leg { node, leg: 1 }));
    }
    for &(i, o) in passthrough {
        d.wires.push((End::Input(i), End::Output(o)));
    }
    d
}

fn with_caps(inputs: WireType, outputs: WireType, caps: &[(usize, usize)], passthrough: &[(usize, usize)]) -> Diagram {
    let mut d = Diagram {
        inputs,
        outputs,
        nodes: Vec::new(),
        wires: Vec::new(),
    };
    for &(a, b) in caps {
        let node = d.nodes.len();
        d.nodes.push(NodeKind::Cap(d.outputs.0[a].space.clone()));
        d.wires.push((End::Leg { node, leg: 0 }, End::Output(a)));
        d.wires.push((End::Leg { node, leg: 1 }, End::Output(b)));
    }
    for &(i, o) in passthrough {
        d.wires.push((End::Input(i), End::Output(o)));
    }
    d
}

/// Pairs `(start + k - 1 - t, start + k + t)` for `t < k`.
fn nested(start: usize, k: usize) -> Vec<(usize, usize)> {
    (0..k).map(|t| (start + k - 1 - t, start + k + t)).collect()
}

fn shifted(from: usize, to: usize, k: usize) -> Vec<(usize, usize)> {
    (0..k).map(|t| (from + t, to + t)).collect()
}

fn build(p: &ProofTerm, reg: &AtomRegistry) -> Result<Diagram, TranslateError> {
    Ok(match p {
        ProofTerm::Id(a) => Diagram::identity(&ty(a, reg)?),
        ProofTerm::Compose(g, f) => build(f, reg)?.compose(&build(g, reg)?)?,
        ProofTerm::MonTensor(f, g) => build(f, reg)?.tensor(&build(g, reg)?),
        ProofTerm::MonOver(f, g) => build(f, reg)?.tensor(&build(g, reg)?.transpose()),
        ProofTerm::MonUnder(f, g) => build(f, reg)?.transpose().tensor(&build(g, reg)?),
        ProofTerm::MonDia(_, f) | ProofTerm::MonBox(_, f) => build(f, reg)?,
        ProofTerm::EvUnder(a, b) => {
            // A ⊗ A* ⊗ B → B
            let (ta, tb) = (ty(a, reg)?, ty(b, reg)?);
            let k = ta.len();
            let inputs = ta.concat(&ta.dual()).concat(&tb);
            with_cups(inputs, tb.clone(), &nested(0, k), &shifted(2 * k, 0, tb.len()))
        }
        ProofTerm::CoevUnder(a, b) => {
            // B → A* ⊗ A ⊗ B
            let (ta, tb) = (ty(a, reg)?, ty(b, reg)?);
            let k = ta.len();
            let outputs = ta.dual().concat(&ta).concat(&tb);
            with_caps(tb.clone(), outputs, &nested(0, k), &shifted(0, 2 * k, tb.len()))
        }
        ProofTerm::EvOver(a, b) => {
            // B ⊗ A* ⊗ A → B
            let (ta, tb) = (ty(a, reg)?, ty(b, reg)?);
            let (k, m) = (ta.len(), tb.len());
            let inputs = tb.concat(&ta.dual()).concat(&ta);
            with_cups(inputs, tb.clone(), &nested(m, k), &shifted(0, 0, m))
        }
        ProofTerm::CoevOver(a, b) => {
            // B → B ⊗ A ⊗ A*
            let (ta, tb) = (ty(a, reg)?, ty(b, reg)?);
            let (k, m) = (ta.len(), tb.len());
            let outputs = tb.concat(&ta).concat(&ta.dual());
            with_caps(tb.clone(), outputs, &nested(m, k), &shifted(0, 0, m))
        }
        ProofTerm::EvBox(_, a) | ProofTerm::CoevBox(_, a) => Diagram::identity(&ty(a, reg)?),
        ProofTerm::AlphaDia(a, b, c) => {
            Diagram::identity(&ty(a, reg)?.concat(&ty(b, reg)?).concat(&ty(c, reg)?))
        }
        ProofTerm::SigmaDia(a, b, c) => {
            let (ta, tb, tc) = (ty(a, reg)?, ty(b, reg)?, ty(c, reg)?);
            let (la, lb, lc) = (ta.len(), tb.len(), tc.len());
            let inputs = ta.concat(&tb).concat(&tc);
            let outputs = ta.concat(&tc).concat(&tb);
            let mut pass = shifted(0, 0, la);
            pass.extend(shifted(la, la + lc, lb));
            pass.extend(shifted(la + lb, la, lc));
            with_cups(inputs, outputs, &[], &pass)
        }
    })
}

/// One indexed atom occurrence of a sequent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Occurrence {
    pub index: usize,
    pub atom: Atom,
    /// Polarity in the sequent: antecedent occurrences are flipped.
    pub polarity: Polarity,
}

/// The matching of atom occurrences at the axiom leaves of a proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomLinking {
    pub occurrences: Vec<Occurrence>,
    /// `(negative, positive)` index pairs, sorted.
    pub links: Vec<(usize, usize)>,
}

/// Occurrence indices (textual order) listed in wire order under the
/// one-wire-per-atom reading.
fn wire_order(f: &Formula, next: &mut usize) -> Vec<usize> {
    match f {
        Formula::Atom(_) => {
            *next += 1;
            alloc::vec![*next - 1]
        }
        Formula::Tensor(a, b) => {
            let mut v = wire_order(a, next);
            v.extend(wire_order(b, next));
            v
        }
        Formula::Over(a, b) => {
            let mut v = wire_order(a, next);
            let mut w = wire_order(b, next);
            w.reverse();
            v.extend(w);
            v
        }
        Formula::Under(a, b) => {
            let mut v = wire_order(a, next);
            v.reverse();
            v.extend(wire_order(b, next));
            v
        }
        Formula::Dia(_, a) | Formula::Box(_, a) => wire_order(a, next),
    }
}

/// Occurrences of `source → target`, numbered left to right across source
/// then target.
pub fn sequent_occurrences(goal: &Arrow) -> Vec<Occurrence> {
    let mut out = Vec::new();
    for (a, p) in goal.lhs.atom_occurrences(Polarity::Positive) {
        out.push(Occurrence {
            index: out.len(),
            atom: a,
            polarity: p.flip(),
        });
    }
    for (a, p) in goal.rhs.atom_occurrences(Polarity::Positive) {
        out.push(Occurrence {
            index: out.len(),
            atom: a,
            polarity: p,
        });
    }
    out
}

/// Reads off the axiom linking of a proof.
pub fn extract_axiom_links(p: &ProofTerm) -> Result<AxiomLinking, TranslateError> {
    let goal = p.validate()?;
    let mut atoms = goal.lhs.atom_set();
    atoms.extend(goal.rhs.atom_set());
    let reg = AtomRegistry::atomic(atoms);
    let d = normalize(&build(p, &reg)?);
    let mut next = 0;
    let src = wire_order(&goal.lhs, &mut next);
    let tgt = wire_order(&goal.rhs, &mut next);
    let occurrences = sequent_occurrences(&goal);
    let index = |e: End| match e {
        End::Input(i) => Ok(src[i]),
        End::Output(j) => Ok(tgt[j]),
        leg => Err(TranslateError::Unmatched(alloc::format!("{leg}"))),
    };
    let mut links = Vec::new();
    for &(a, b) in &d.wires {
        let (x, y) = (index(a)?, index(b)?);
        if occurrences[x].polarity == Polarity::Negative {
            links.push((x, y));
        } else {
            links.push((y, x));
        }
    }
    links.sort();
    Ok(AxiomLinking { occurrences, links })
}

/// Boundary positions of each occurrence's wires, in the order of the
/// atom's own wire type.
fn occurrence_wires(f: &Formula, reg: &AtomRegistry, next: &mut usize) -> Result<Vec<(usize, usize, Wire)>, TranslateError> {
    // (occurrence, component, wire)
    Ok(match f {
        Formula::Atom(a) => {
            let t = interpret_type(f, reg).map_err(|_| TranslateError::UnregisteredAtom(String::from(a.name())))?;
            *next += 1;
            t.0.into_iter().enumerate().map(|(k, w)| (*next - 1, k, w)).collect()
        }
        Formula::Tensor(a, b) => {
            let mut v = occurrence_wires(a, reg, next)?;
            v.extend(occurrence_wires(b, reg, next)?);
            v
        }
        Formula::Over(a, b) => {
            let mut v = occurrence_wires(a, reg, next)?;
            v.extend(dual_block(occurrence_wires(b, reg, next)?));
            v
        }
        Formula::Under(a, b) => {
            let mut v = dual_block(occurrence_wires(a, reg, next)?);
            v.extend(occurrence_wires(b, reg, next)?);
            v
        }
        Formula::Dia(_, a) | Formula::Box(_, a) => occurrence_wires(a, reg, next)?,
    })
}

fn dual_block(mut v: Vec<(usize, usize, Wire)>) -> Vec<(usize, usize, Wire)> {
    v.reverse();
    for e in v.iter_mut() {
        e.2 = e.2.dual();
    }
    v
}

/// The diagram that realises a linking directly: every link joins the
/// corresponding wires of its two occurrences.
pub fn linking_diagram(linking: &AxiomLinking, goal: &Arrow, reg: &AtomRegistry) -> Result<Diagram, TranslateError> {
    let mut next = 0;
    let src = occurrence_wires(&goal.lhs, reg, &mut next)?;
    let tgt = occurrence_wires(&goal.rhs, reg, &mut next)?;
    let mut pos: BTreeMap<(usize, usize), End> = BTreeMap::new();
    for (i, (occ, k, _)) in src.iter().enumerate() {
        pos.insert((*occ, *k), End::Input(i));
    }
    for (j, (occ, k, _)) in tgt.iter().enumerate() {
        pos.insert((*occ, *k), End::Output(j));
    }
    let mut d = Diagram {
        inputs: WireType(src.iter().map(|e| e.2.clone()).collect()),
        outputs: WireType(tgt.iter().map(|e| e.2.clone()).collect()),
        nodes: Vec::new(),
        wires: Vec::new(),
    };
    for &(u, v) in &linking.links {
        let width = reg
            .get(&linking.occurrences[u].atom)
            .map(|t| t.len())
            .ok_or_else(|| TranslateError::UnregisteredAtom(String::from(linking.occurrences[u].atom.name())))?;
        for k in 0..width {
            let a = pos[&(u, k)];
            let b = pos[&(v, k)];
            let space = d.space_of(a).expect("boundary end");
            match (a, b) {
                (End::Input(_), End::Input(_)) => {
                    let node = d.nodes.len();
                    d.nodes.push(NodeKind::Cup(space));
                    d.wires.push((a, End::Leg { node, leg: 0 }));
                    d.wires.push((b, End::Leg { node, leg: 1 }));
                }
                (End::Output(_), End::Output(_)) => {
                    let node = d.nodes.len();
                    d.nodes.push(NodeKind::Cap(space));
                    d.wires.push((End::Leg { node, leg: 0 }, a));
                    d.wires.push((End::Leg { node, leg: 1 }, b));
                }
                _ => d.wires.push((a, b)),
            }
        }
    }
    d.check()?;
    Ok(d)
}

/// Plugs lexical states (diagrams with no inputs) into a proof diagram.
/// `states[i]` must produce `⟦type of word i⟧`.
pub fn compile_with(states: &[Diagram], proof_diagram: &Diagram) -> Result<Diagram, TranslateError> {
    let lexical = tensor_all(states);
    let mut at = 0;
    for (i, s) in states.iter().enumerate() {
        let want = WireType(proof_diagram.inputs.0[at..(at + s.outputs.len()).min(proof_diagram.inputs.len())].to_vec());
        if !s.inputs.is_empty() || want != s.outputs {
            return Err(TranslateError::LexicalBoundary {
                word: i,
                found: alloc::format!("{}", s.outputs),
                expected: alloc::format!("{want}"),
            });
        }
        at += s.outputs.len();
    }
    Ok(lexical.compose(proof_diagram)?)
}

/// The diagram of a derived sentence: the lexical semantics of each chosen
/// entry plugged into the proof's diagram.
pub fn compile_sentence(lexicon: &Lexicon, entries: &[String], proof: &ProofTerm) -> Result<Diagram, TranslateError> {
    let mut states = Vec::new();
    for key in entries {
        let e = lexicon
            .get(key)
            .ok_or_else(|| TranslateError::UnknownEntry(key.clone()))?;
        states.push(lexicon.semantics(e)?);
    }
    let d = interpret_proof(proof, lexicon.registry())?;
    compile_with(&states, &d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{parse_formula_with, Mode};

    fn f(s: &str) -> Formula {
        let atoms = ["n", "np", "s", "gp"].iter().map(|a| String::from(*a)).collect();
        let mut macros = BTreeMap::new();
        macros.insert(String::from("iv"), Formula::under(Formula::atom("np"), Formula::atom("s")));
        parse_formula_with(s, &atoms, &macros).unwrap()
    }

    fn show(t: &WireType) -> String {
        alloc::format!("{t}")
    }

    #[test]
    fn lexical_types() {
        let reg = AtomRegistry::standard();
        assert_eq!(show(&interpret_type(&f("np"), &reg).unwrap()), "(N)");
        assert_eq!(show(&interpret_type(&f("(n\\n)/(s/<x>[x]np)"), &reg).unwrap()), "(N*, N, N, S*)");
        assert_eq!(show(&interpret_type(&f("(np\\s)/np"), &reg).unwrap()), "(N*, S, N*)");
        assert_eq!(
            show(&interpret_type(&f("[i]((iv/<x>[x]np)\\(iv/<x>[x]np))/(gp/<x>[x]np)"), &reg).unwrap()),
            "(N, S*, N, N*, S, N*, N, S*, N)"
        );
    }

    #[test]
    fn modalities_are_transparent() {
        let reg = AtomRegistry::standard();
        let a = f("gp/np");
        let d = Formula::dia(Mode::X, a.clone());
        let b = Formula::boxed(Mode::I, a.clone());
        let t = interpret_type(&a, &reg).unwrap();
        assert_eq!(interpret_type(&d, &reg).unwrap(), t);
        assert_eq!(interpret_type(&b, &reg).unwrap(), t);
    }

    #[test]
    fn ev_under_is_one_cup() {
        let reg = AtomRegistry::standard();
        let d = interpret_proof(&ProofTerm::EvUnder(f("np"), f("s")), &reg).unwrap();
        assert_eq!(show(&d.inputs), "(N, N*, S)");
        assert_eq!(show(&d.outputs), "(S)");
        assert_eq!(d.count_kind("cup"), 1);
        assert!(d.check().is_ok());
    }

    #[test]
    fn ev_under_links() {
        let l = extract_axiom_links(&ProofTerm::EvUnder(f("np"), f("s"))).unwrap();
        assert_eq!(l.links, alloc::vec![(0, 1), (2, 3)]);
    }

    #[test]
    fn unregistered_atom() {
        let reg = AtomRegistry::standard();
        assert!(matches!(
            interpret_type(&Formula::atom("zz"), &reg),
            Err(TranslateError::UnregisteredAtom(_))
        ));
    }
}
