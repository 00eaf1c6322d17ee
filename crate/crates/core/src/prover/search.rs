//! Backward-chaining search over antecedent structures.
//!
//! A goal `A → C` is read as the sequent `Γ ⇒ C` where `Γ` is `A` with every
//! `⊗` and `◇` unfolded into structure. Rules with an invertible reading
//! (`/R`, `\R`, `□R`) are applied eagerly; everything else branches in the
//! fixed order axiom, monotonicity (`⊗R`, `◇R`, `/L`, `\L`), `□L`, `α`, `σ`,
//! leftmost position first. Each found sequent derivation is compiled into a
//! [`ProofTerm`].

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::{Formula, Mode, Polarity};

use super::term::ProofTerm;

/// Antecedent structure: formula leaves, binary `∘` and mode brackets.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Structure {
    Leaf(Formula),
    Pair(Arc<Structure>, Arc<Structure>),
    Bracket(Mode, Arc<Structure>),
}

impl Structure {
    pub fn pair(a: Structure, b: Structure) -> Structure {
        Structure::Pair(Arc::new(a), Arc::new(b))
    }

    pub fn bracket(m: Mode, a: Structure) -> Structure {
        Structure::Bracket(m, Arc::new(a))
    }

    /// Unfolds `⊗` and `◇` leaves into structure. The formula reading is
    /// unchanged.
    pub fn unfold(f: &Formula) -> Structure {
        match f {
            Formula::Tensor(a, b) => Structure::pair(Structure::unfold(a), Structure::unfold(b)),
            Formula::Dia(m, a) => Structure::bracket(*m, Structure::unfold(a)),
            _ => Structure::Leaf(f.clone()),
        }
    }

    fn normalized(&self) -> Structure {
        match self {
            Structure::Leaf(f) => Structure::unfold(f),
            Structure::Pair(a, b) => Structure::pair(a.normalized(), b.normalized()),
            Structure::Bracket(m, a) => Structure::bracket(*m, a.normalized()),
        }
    }

    pub fn formula(&self) -> Formula {
        match self {
            Structure::Leaf(f) => f.clone(),
            Structure::Pair(a, b) => Formula::tensor(a.formula(), b.formula()),
            Structure::Bracket(m, a) => Formula::dia(*m, a.formula()),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Structure::Leaf(_) => 0,
            Structure::Pair(a, b) => 1 + a.depth().max(b.depth()),
            Structure::Bracket(_, a) => 1 + a.depth(),
        }
    }

    fn at(&self, path: &[Side]) -> &Structure {
        let mut cur = self;
        for side in path {
            cur = match (cur, side) {
                (Structure::Pair(a, _), Side::L) => a,
                (Structure::Pair(_, b), Side::R) => b,
                (Structure::Bracket(_, a), Side::In) => a,
                _ => unreachable!("structure path out of range"),
            };
        }
        cur
    }

    fn replace(&self, path: &[Side], new: Structure) -> Structure {
        let Some((side, rest)) = path.split_first() else {
            return new;
        };
        match (self, side) {
            (Structure::Pair(a, b), Side::L) => {
                Structure::Pair(Arc::new(a.replace(rest, new)), b.clone())
            }
            (Structure::Pair(a, b), Side::R) => {
                Structure::Pair(a.clone(), Arc::new(b.replace(rest, new)))
            }
            (Structure::Bracket(m, a), Side::In) => {
                Structure::Bracket(*m, Arc::new(a.replace(rest, new)))
            }
            _ => unreachable!("structure path out of range"),
        }
    }

    fn count_into(&self, pol: Polarity, counts: &mut BTreeMap<crate::formula::Atom, i64>) {
        match self {
            Structure::Leaf(f) => {
                for (a, p) in f.atom_occurrences(pol) {
                    *counts.entry(a).or_insert(0) += p.sign();
                }
            }
            Structure::Pair(a, b) => {
                a.count_into(pol, counts);
                b.count_into(pol, counts);
            }
            Structure::Bracket(_, a) => a.count_into(pol, counts),
        }
    }

    fn x_brackets(&self) -> usize {
        match self {
            Structure::Leaf(f) => dia_count(f, Mode::X),
            Structure::Pair(a, b) => a.x_brackets() + b.x_brackets(),
            Structure::Bracket(m, a) => usize::from(*m == Mode::X) + a.x_brackets(),
        }
    }
}

fn dia_count(f: &Formula, mode: Mode) -> usize {
    match f {
        Formula::Atom(_) => 0,
        Formula::Tensor(a, b) | Formula::Over(a, b) | Formula::Under(a, b) => {
            dia_count(a, mode) + dia_count(b, mode)
        }
        Formula::Dia(m, a) => usize::from(*m == mode) + dia_count(a, mode),
        Formula::Box(_, a) => dia_count(a, mode),
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Structure::Leaf(a) => match a {
                Formula::Over(..) | Formula::Under(..) => write!(f, "({a})"),
                _ => write!(f, "{a}"),
            },
            Structure::Pair(a, b) => write!(f, "({a} , {b})"),
            Structure::Bracket(m, a) => write!(f, "<{}>{{{a}}}", m.tag()),
        }
    }
}

/// A position inside a [`Structure`].
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Side {
    L,
    R,
    In,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sequent {
    pub ant: Structure,
    pub suc: Formula,
}

impl Sequent {
    pub fn new(ant: Structure, suc: Formula) -> Sequent {
        Sequent {
            ant: ant.normalized(),
            suc,
        }
    }

    /// True when every atom occurs as often positively as negatively across
    /// the sequent. Necessary for derivability.
    pub fn balanced(&self) -> bool {
        let mut counts = BTreeMap::new();
        self.ant.count_into(Polarity::Positive, &mut counts);
        for (a, p) in self.suc.atom_occurrences(Polarity::Negative) {
            *counts.entry(a).or_insert(0) += p.sign();
        }
        counts.values().all(|&c| c == 0)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} => {}", self.ant, self.suc)
    }
}

impl fmt::Debug for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Rules of the sequent presentation, in tie-breaking order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Rule {
    Axiom,
    OverR,
    UnderR,
    BoxR(Mode),
    TensorR,
    DiaR(Mode),
    OverL(Vec<Side>),
    UnderL(Vec<Side>),
    BoxL(Vec<Side>),
    Alpha(Vec<Side>),
    Sigma(Vec<Side>),
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Axiom => "ax",
            Rule::OverR => "/R",
            Rule::UnderR => "\\R",
            Rule::BoxR(_) => "[]R",
            Rule::TensorR => "*R",
            Rule::DiaR(_) => "<>R",
            Rule::OverL(_) => "/L",
            Rule::UnderL(_) => "\\L",
            Rule::BoxL(_) => "[]L",
            Rule::Alpha(_) => "alpha",
            Rule::Sigma(_) => "sigma",
        }
    }

    fn cost(&self) -> usize {
        match self {
            Rule::Axiom => 0,
            _ => 1,
        }
    }

    fn is_structural(&self) -> bool {
        matches!(self, Rule::Alpha(_) | Rule::Sigma(_))
    }
}

/// A sequent derivation. `size` counts non-axiom rule applications.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Derivation {
    pub sequent: Sequent,
    pub rule: Rule,
    pub premises: Vec<Arc<Derivation>>,
    pub size: usize,
}

impl Derivation {
    /// Rule names and positions in preorder; the tie-breaking key for
    /// enumerating several proofs.
    pub fn trace(&self) -> Vec<Rule> {
        let mut out = Vec::new();
        self.trace_into(&mut out);
        out
    }

    fn trace_into(&self, out: &mut Vec<Rule>) {
        out.push(self.rule.clone());
        for p in &self.premises {
            p.trace_into(out);
        }
    }

    /// Compiles the derivation into an arrow of the axiomatisation whose
    /// source is the antecedent read as a formula.
    pub fn to_term(&self) -> ProofTerm {
        let seq = &self.sequent;
        let ant_f = seq.ant.formula();
        let prem = |i: usize| self.premises[i].to_term();
        match &self.rule {
            Rule::Axiom => ProofTerm::Id(seq.suc.clone()),
            Rule::OverR => {
                let Formula::Over(_, b) = &seq.suc else { unreachable!() };
                let b = (**b).clone();
                let body = ProofTerm::mon_over(prem(0), ProofTerm::Id(b.clone()));
                ProofTerm::then(ProofTerm::CoevOver(b, ant_f), body)
            }
            Rule::UnderR => {
                let Formula::Under(b, _) = &seq.suc else { unreachable!() };
                let b = (**b).clone();
                let body = ProofTerm::mon_under(ProofTerm::Id(b.clone()), prem(0));
                ProofTerm::then(ProofTerm::CoevUnder(b, ant_f), body)
            }
            Rule::BoxR(m) => {
                ProofTerm::then(ProofTerm::CoevBox(*m, ant_f), ProofTerm::mon_box(*m, prem(0)))
            }
            Rule::TensorR => ProofTerm::mon_tensor(prem(0), prem(1)),
            Rule::DiaR(m) => ProofTerm::mon_dia(*m, prem(0)),
            Rule::OverL(path) => {
                let Structure::Pair(functor, _) = seq.ant.at(path) else { unreachable!() };
                let Structure::Leaf(Formula::Over(a, b)) = &**functor else { unreachable!() };
                let local = ProofTerm::then(
                    ProofTerm::mon_tensor(ProofTerm::Id(functor.formula()), prem(0)),
                    ProofTerm::EvOver((**b).clone(), (**a).clone()),
                );
                ProofTerm::then(lift(&seq.ant, path, local), prem(1))
            }
            Rule::UnderL(path) => {
                let Structure::Pair(_, functor) = seq.ant.at(path) else { unreachable!() };
                let Structure::Leaf(Formula::Under(b, a)) = &**functor else { unreachable!() };
                let local = ProofTerm::then(
                    ProofTerm::mon_tensor(prem(0), ProofTerm::Id(functor.formula())),
                    ProofTerm::EvUnder((**b).clone(), (**a).clone()),
                );
                ProofTerm::then(lift(&seq.ant, path, local), prem(1))
            }
            Rule::BoxL(path) => {
                let Structure::Bracket(m, inner) = seq.ant.at(path) else { unreachable!() };
                let Structure::Leaf(Formula::Box(_, a)) = &**inner else { unreachable!() };
                let local = ProofTerm::EvBox(*m, (**a).clone());
                ProofTerm::then(lift(&seq.ant, path, local), prem(0))
            }
            Rule::Alpha(path) | Rule::Sigma(path) => {
                let Structure::Pair(ab, c) = seq.ant.at(path) else { unreachable!() };
                let Structure::Pair(a, b) = &**ab else { unreachable!() };
                let Structure::Bracket(_, c) = &**c else { unreachable!() };
                let (a, b, c) = (a.formula(), b.formula(), c.formula());
                let local = if matches!(self.rule, Rule::Alpha(_)) {
                    ProofTerm::AlphaDia(a, b, c)
                } else {
                    ProofTerm::SigmaDia(a, b, c)
                };
                ProofTerm::then(lift(&seq.ant, path, local), prem(0))
            }
        }
    }
}

/// Lifts `local: X → Y` acting at `path` to the whole antecedent.
fn lift(s: &Structure, path: &[Side], local: ProofTerm) -> ProofTerm {
    let Some((side, rest)) = path.split_first() else {
        return local;
    };
    match (s, side) {
        (Structure::Pair(a, b), Side::L) => {
            ProofTerm::mon_tensor(lift(a, rest, local), ProofTerm::Id(b.formula()))
        }
        (Structure::Pair(a, b), Side::R) => {
            ProofTerm::mon_tensor(ProofTerm::Id(a.formula()), lift(b, rest, local))
        }
        (Structure::Bracket(m, a), Side::In) => ProofTerm::mon_dia(*m, lift(a, rest, local)),
        _ => unreachable!("structure path out of range"),
    }
}

/// One way of reducing a sequent to premises.
struct Expansion {
    rule: Rule,
    premises: Vec<Sequent>,
}

fn expansions(seq: &Sequent) -> Vec<Expansion> {
    let mut out = Vec::new();
    // invertible right rules: exclusive
    match &seq.suc {
        Formula::Over(a, b) => {
            out.push(Expansion {
                rule: Rule::OverR,
                premises: alloc::vec![Sequent::new(
                    Structure::pair(seq.ant.clone(), Structure::Leaf((**b).clone())),
                    (**a).clone(),
                )],
            });
            return out;
        }
        Formula::Under(b, a) => {
            out.push(Expansion {
                rule: Rule::UnderR,
                premises: alloc::vec![Sequent::new(
                    Structure::pair(Structure::Leaf((**b).clone()), seq.ant.clone()),
                    (**a).clone(),
                )],
            });
            return out;
        }
        Formula::Box(m, a) => {
            out.push(Expansion {
                rule: Rule::BoxR(*m),
                premises: alloc::vec![Sequent::new(
                    Structure::bracket(*m, seq.ant.clone()),
                    (**a).clone(),
                )],
            });
            return out;
        }
        _ => {}
    }

    if let (Structure::Leaf(Formula::Atom(p)), Formula::Atom(q)) = (&seq.ant, &seq.suc) {
        if p == q {
            out.push(Expansion {
                rule: Rule::Axiom,
                premises: Vec::new(),
            });
        }
        return out;
    }

    match (&seq.ant, &seq.suc) {
        (Structure::Pair(g1, g2), Formula::Tensor(a, b)) => out.push(Expansion {
            rule: Rule::TensorR,
            premises: alloc::vec![
                Sequent::new((**g1).clone(), (**a).clone()),
                Sequent::new((**g2).clone(), (**b).clone()),
            ],
        }),
        (Structure::Bracket(m, g), Formula::Dia(n, a)) if m == n => out.push(Expansion {
            rule: Rule::DiaR(*m),
            premises: alloc::vec![Sequent::new((**g).clone(), (**a).clone())],
        }),
        _ => {}
    }

    let mut positions = Vec::new();
    collect_positions(&seq.ant, &mut Vec::new(), &mut positions);

    for path in &positions {
        if let Structure::Pair(l, r) = seq.ant.at(path) {
            if let Structure::Leaf(Formula::Over(a, b)) = &**l {
                out.push(Expansion {
                    rule: Rule::OverL(path.clone()),
                    premises: alloc::vec![
                        Sequent::new((**r).clone(), (**b).clone()),
                        Sequent::new(
                            seq.ant.replace(path, Structure::Leaf((**a).clone())),
                            seq.suc.clone(),
                        ),
                    ],
                });
            }
            if let Structure::Leaf(Formula::Under(b, a)) = &**r {
                out.push(Expansion {
                    rule: Rule::UnderL(path.clone()),
                    premises: alloc::vec![
                        Sequent::new((**l).clone(), (**b).clone()),
                        Sequent::new(
                            seq.ant.replace(path, Structure::Leaf((**a).clone())),
                            seq.suc.clone(),
                        ),
                    ],
                });
            }
        }
    }
    for path in &positions {
        if let Structure::Bracket(m, inner) = seq.ant.at(path) {
            if let Structure::Leaf(Formula::Box(n, a)) = &**inner {
                if m == n {
                    out.push(Expansion {
                        rule: Rule::BoxL(path.clone()),
                        premises: alloc::vec![Sequent::new(
                            seq.ant.replace(path, Structure::Leaf((**a).clone())),
                            seq.suc.clone(),
                        )],
                    });
                }
            }
        }
    }
    let mut sigma = Vec::new();
    for path in &positions {
        if let Structure::Pair(ab, c) = seq.ant.at(path) {
            if let (Structure::Pair(a, b), Structure::Bracket(Mode::X, _)) = (&**ab, &**c) {
                let alpha = Structure::Pair(a.clone(), Arc::new(Structure::Pair(b.clone(), c.clone())));
                out.push(Expansion {
                    rule: Rule::Alpha(path.clone()),
                    premises: alloc::vec![Sequent {
                        ant: seq.ant.replace(path, alpha),
                        suc: seq.suc.clone(),
                    }],
                });
                let swapped = Structure::Pair(Arc::new(Structure::Pair(a.clone(), c.clone())), b.clone());
                sigma.push(Expansion {
                    rule: Rule::Sigma(path.clone()),
                    premises: alloc::vec![Sequent {
                        ant: seq.ant.replace(path, swapped),
                        suc: seq.suc.clone(),
                    }],
                });
            }
        }
    }
    out.extend(sigma);
    out
}

fn collect_positions(s: &Structure, path: &mut Vec<Side>, out: &mut Vec<Vec<Side>>) {
    out.push(path.clone());
    match s {
        Structure::Leaf(_) => {}
        Structure::Pair(a, b) => {
            path.push(Side::L);
            collect_positions(a, path, out);
            path.pop();
            path.push(Side::R);
            collect_positions(b, path, out);
            path.pop();
        }
        Structure::Bracket(_, a) => {
            path.push(Side::In);
            collect_positions(a, path, out);
            path.pop();
        }
    }
}

/// Search bounds and switches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of non-axiom rule applications in a derivation.
    pub max_proof_size: usize,
    /// Structural moves allowed per mode-x bracket along a branch; `None`
    /// means twice the depth of the goal's antecedent.
    pub max_structural_per_dia: Option<usize>,
    pub find_all: bool,
    pub memoize: bool,
    /// Prune subgoals whose atom counts do not balance.
    pub count_pruning: bool,
    /// Upper limit on derivations returned when `find_all` is set.
    pub max_results: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_proof_size: 40,
            max_structural_per_dia: None,
            find_all: false,
            memoize: true,
            count_pruning: true,
            max_results: 64,
        }
    }
}

#[derive(Clone, Copy)]
enum Memo {
    /// The minimal derivation has exactly this size.
    Found(usize),
    /// No derivation smaller than this.
    Below(usize),
}

/// Result of one sequent search.
pub struct SearchOutcome {
    pub derivations: Vec<Arc<Derivation>>,
    /// Some branch was cut by a size or structural bound, so an empty result
    /// is not a proof of underivability.
    pub bounded: bool,
    /// The failed subgoal that sat deepest in the search tree.
    pub deepest_failure: Option<(usize, Sequent)>,
    /// Number of sequent expansions performed.
    pub steps: usize,
}

type MemoTable = BTreeMap<(Sequent, usize), (Memo, Option<Arc<Derivation>>)>;
type AllMemoTable = BTreeMap<(Sequent, usize, usize), Arc<Vec<Arc<Derivation>>>>;

pub(crate) struct Searcher<'a> {
    cfg: &'a SearchConfig,
    memo: MemoTable,
    all_memo: AllMemoTable,
    bounded: bool,
    deepest: Option<(usize, Sequent)>,
    steps: usize,
}

impl<'a> Searcher<'a> {
    pub(crate) fn new(cfg: &'a SearchConfig) -> Self {
        Searcher {
            cfg,
            memo: BTreeMap::new(),
            all_memo: BTreeMap::new(),
            bounded: false,
            deepest: None,
            steps: 0,
        }
    }

    pub(crate) fn run(mut self, root: Sequent) -> SearchOutcome {
        let per_dia = self
            .cfg
            .max_structural_per_dia
            .unwrap_or_else(|| 2 * root.ant.depth().max(1));
        let hyps = root.ant.x_brackets() + dia_count(&root.suc, Mode::X);
        let struct_limit = per_dia * hyps;
        if self.cfg.count_pruning && !root.balanced() {
            self.note_failure(&root, 0);
        }
        let derivations = if self.cfg.find_all {
            let all = self.all(&root, self.cfg.max_proof_size, struct_limit);
            let mut v: Vec<_> = all.iter().cloned().collect();
            v.sort_by_key(|a| a.trace());
            v.truncate(self.cfg.max_results);
            v
        } else {
            self.min(&root, self.cfg.max_proof_size, struct_limit, 0)
                .into_iter()
                .collect()
        };
        SearchOutcome {
            derivations,
            bounded: self.bounded,
            deepest_failure: self.deepest,
            steps: self.steps,
        }
    }

    fn note_failure(&mut self, seq: &Sequent, depth: usize) {
        if self.deepest.as_ref().is_none_or(|(d, _)| depth > *d) {
            self.deepest = Some((depth, seq.clone()));
        }
    }

    /// Minimal derivation of `seq` with size at most `budget`.
    fn min(
        &mut self,
        seq: &Sequent,
        budget: usize,
        struct_left: usize,
        depth: usize,
    ) -> Option<Arc<Derivation>> {
        if self.cfg.count_pruning && !seq.balanced() {
            return None;
        }
        let key = (seq.clone(), struct_left);
        if self.cfg.memoize {
            if let Some((memo, found)) = self.memo.get(&key) {
                match *memo {
                    Memo::Found(size) if size <= budget => return found.clone(),
                    Memo::Found(_) => {
                        self.bounded = true;
                        return None;
                    }
                    Memo::Below(k) if budget < k => {
                        self.bounded = true;
                        return None;
                    }
                    Memo::Below(_) => {}
                }
            }
        }
        self.steps += 1;
        let mut best: Option<Arc<Derivation>> = None;
        for exp in expansions(seq) {
            let cost = exp.rule.cost();
            if cost > budget {
                self.bounded = true;
                continue;
            }
            let structural = exp.rule.is_structural();
            if structural && struct_left == 0 {
                self.bounded = true;
                continue;
            }
            let child_struct = struct_left - usize::from(structural);
            // a candidate must beat the best so far
            let cap = match &best {
                Some(b) => b.size.saturating_sub(1).min(budget),
                None => budget,
            };
            if cost > cap {
                continue;
            }
            let mut remaining = cap - cost;
            let mut premises = Vec::with_capacity(exp.premises.len());
            let mut ok = true;
            for p in &exp.premises {
                match self.min(p, remaining, child_struct, depth + 1) {
                    Some(d) => {
                        remaining -= d.size;
                        premises.push(d);
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if !ok {
                continue;
            }
            let size = cost + premises.iter().map(|d| d.size).sum::<usize>();
            best = Some(Arc::new(Derivation {
                sequent: seq.clone(),
                rule: exp.rule,
                premises,
                size,
            }));
        }
        if self.cfg.memoize {
            let entry = match &best {
                Some(d) => (Memo::Found(d.size), Some(d.clone())),
                None => (Memo::Below(budget + 1), None),
            };
            self.memo.insert(key, entry);
        }
        if best.is_none() {
            self.note_failure(seq, depth);
        }
        best
    }

    /// Every derivation of `seq` with size at most `budget`.
    fn all(&mut self, seq: &Sequent, budget: usize, struct_left: usize) -> Arc<Vec<Arc<Derivation>>> {
        if self.cfg.count_pruning && !seq.balanced() {
            return Arc::new(Vec::new());
        }
        let key = (seq.clone(), budget, struct_left);
        if self.cfg.memoize {
            if let Some(found) = self.all_memo.get(&key) {
                return found.clone();
            }
        }
        self.steps += 1;
        let mut out: Vec<Arc<Derivation>> = Vec::new();
        for exp in expansions(seq) {
            let cost = exp.rule.cost();
            let structural = exp.rule.is_structural();
            if cost > budget || (structural && struct_left == 0) {
                self.bounded = true;
                continue;
            }
            let child_struct = struct_left - usize::from(structural);
            // partial products: (premises so far, remaining budget)
            let mut partial: Vec<(Vec<Arc<Derivation>>, usize)> = alloc::vec![(Vec::new(), budget - cost)];
            for p in &exp.premises {
                let mut next = Vec::new();
                for (prefix, remaining) in &partial {
                    let options = self.all(p, *remaining, child_struct);
                    for d in options.iter() {
                        if d.size <= *remaining {
                            let mut v = prefix.clone();
                            v.push(d.clone());
                            next.push((v, remaining - d.size));
                        }
                    }
                    if next.len() > self.cfg.max_results * 4 {
                        self.bounded = true;
                        break;
                    }
                }
                partial = next;
            }
            for (premises, _) in partial {
                let size = cost + premises.iter().map(|d| d.size).sum::<usize>();
                out.push(Arc::new(Derivation {
                    sequent: seq.clone(),
                    rule: exp.rule.clone(),
                    premises,
                    size,
                }));
            }
        }
        let out = Arc::new(out);
        if self.cfg.memoize {
            self.all_memo.insert(key, out.clone());
        }
        out
    }
}
