//! Residuation moves on goals and proofs, and the two structural postulates
//! applied directly to formula trees.

use alloc::string::String;
use alloc::vec::Vec;

use thiserror::Error;

use crate::formula::{path_to_string, Formula, Mode, Step};

use super::term::{Arrow, ProofTerm};

/// The six residuation shapes. Each has an inverse.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum Residuation {
    /// `A⊗B → C` to `A → C/B`
    TensorToOver,
    /// `A → C/B` to `A⊗B → C`
    OverToTensor,
    /// `A⊗B → C` to `B → A\C`
    TensorToUnder,
    /// `B → A\C` to `A⊗B → C`
    UnderToTensor,
    /// `◇A → B` to `A → □B`
    DiaToBox,
    /// `A → □B` to `◇A → B`
    BoxToDia,
}

impl Residuation {
    pub const ALL: [Residuation; 6] = [
        Residuation::TensorToOver,
        Residuation::OverToTensor,
        Residuation::TensorToUnder,
        Residuation::UnderToTensor,
        Residuation::DiaToBox,
        Residuation::BoxToDia,
    ];

    pub fn inverse(self) -> Residuation {
        match self {
            Residuation::TensorToOver => Residuation::OverToTensor,
            Residuation::OverToTensor => Residuation::TensorToOver,
            Residuation::TensorToUnder => Residuation::UnderToTensor,
            Residuation::UnderToTensor => Residuation::TensorToUnder,
            Residuation::DiaToBox => Residuation::BoxToDia,
            Residuation::BoxToDia => Residuation::DiaToBox,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResiduationError {
    #[error("expected {expected} on the {side} of `{goal}`")]
    Shape {
        expected: &'static str,
        side: &'static str,
        goal: String,
    },
}

fn shape(expected: &'static str, side: &'static str, goal: &Arrow) -> ResiduationError {
    ResiduationError::Shape {
        expected,
        side,
        goal: alloc::format!("{goal}"),
    }
}

/// Moves a constituent across the arrow. The result is derivable iff the
/// input is.
pub fn residuate(goal: &Arrow, r: Residuation) -> Result<Arrow, ResiduationError> {
    use Formula as F;
    match r {
        Residuation::TensorToOver => match &goal.lhs {
            F::Tensor(a, b) => Ok(Arrow::new((**a).clone(), F::over(goal.rhs.clone(), (**b).clone()))),
            _ => Err(shape("`*`", "left", goal)),
        },
        Residuation::OverToTensor => match &goal.rhs {
            F::Over(c, b) => Ok(Arrow::new(F::tensor(goal.lhs.clone(), (**b).clone()), (**c).clone())),
            _ => Err(shape("`/`", "right", goal)),
        },
        Residuation::TensorToUnder => match &goal.lhs {
            F::Tensor(a, b) => Ok(Arrow::new((**b).clone(), F::under((**a).clone(), goal.rhs.clone()))),
            _ => Err(shape("`*`", "left", goal)),
        },
        Residuation::UnderToTensor => match &goal.rhs {
            F::Under(a, c) => Ok(Arrow::new(F::tensor((**a).clone(), goal.lhs.clone()), (**c).clone())),
            _ => Err(shape("`\\`", "right", goal)),
        },
        Residuation::DiaToBox => match &goal.lhs {
            F::Dia(m, a) => Ok(Arrow::new((**a).clone(), F::boxed(*m, goal.rhs.clone()))),
            _ => Err(shape("`<m>`", "left", goal)),
        },
        Residuation::BoxToDia => match &goal.rhs {
            F::Box(m, b) => Ok(Arrow::new(F::dia(*m, goal.lhs.clone()), (**b).clone())),
            _ => Err(shape("`[m]`", "right", goal)),
        },
    }
}

/// Carries a proof of `goal` over to a proof of `residuate(goal, r)`.
pub fn residuate_proof(proof: &ProofTerm, goal: &Arrow, r: Residuation) -> Result<ProofTerm, ResiduationError> {
    use Formula as F;
    let target = residuate(goal, r)?;
    let p = proof.clone();
    let term = match (r, &goal.lhs, &goal.rhs) {
        (Residuation::TensorToOver, F::Tensor(a, b), _) => ProofTerm::then(
            ProofTerm::CoevOver((**b).clone(), (**a).clone()),
            ProofTerm::mon_over(p, ProofTerm::Id((**b).clone())),
        ),
        (Residuation::OverToTensor, _, F::Over(c, b)) => ProofTerm::then(
            ProofTerm::mon_tensor(p, ProofTerm::Id((**b).clone())),
            ProofTerm::EvOver((**b).clone(), (**c).clone()),
        ),
        (Residuation::TensorToUnder, F::Tensor(a, b), _) => ProofTerm::then(
            ProofTerm::CoevUnder((**a).clone(), (**b).clone()),
            ProofTerm::mon_under(ProofTerm::Id((**a).clone()), p),
        ),
        (Residuation::UnderToTensor, _, F::Under(a, c)) => ProofTerm::then(
            ProofTerm::mon_tensor(ProofTerm::Id((**a).clone()), p),
            ProofTerm::EvUnder((**a).clone(), (**c).clone()),
        ),
        (Residuation::DiaToBox, F::Dia(m, a), _) => ProofTerm::then(
            ProofTerm::CoevBox(*m, (**a).clone()),
            ProofTerm::mon_box(*m, p),
        ),
        (Residuation::BoxToDia, _, F::Box(m, b)) => ProofTerm::then(
            ProofTerm::mon_dia(*m, p),
            ProofTerm::EvBox(*m, (**b).clone()),
        ),
        _ => unreachable!("residuate checked the shape"),
    };
    debug_assert_eq!(term.validate().ok(), Some(target));
    Ok(term)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub enum StructuralRule {
    Alpha,
    Sigma,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructuralError {
    #[error("no subformula at path {0}")]
    NoSuchPath(String),
    #[error("subformula at {path} is `{found}`, expected (A*B)*<x>C")]
    Pattern { path: String, found: String },
    #[error("mode i has no associated structural rules (at {0})")]
    IslandMode(String),
}

/// Rewrites `(A⊗B)⊗◇C` at `path` by one of the two postulates.
pub fn apply_structural(
    tree: &Formula,
    rule: StructuralRule,
    path: &[Step],
) -> Result<Formula, StructuralError> {
    let p = path_to_string(path);
    let rewritten = tree.rewrite_at(path, |sub| {
        let Formula::Tensor(ab, dc) = sub else {
            return Err(StructuralError::Pattern { path: p.clone(), found: alloc::format!("{sub}") });
        };
        let (Formula::Tensor(a, b), Formula::Dia(m, _)) = (&**ab, &**dc) else {
            return Err(StructuralError::Pattern { path: p.clone(), found: alloc::format!("{sub}") });
        };
        if *m == Mode::I {
            return Err(StructuralError::IslandMode(p.clone()));
        }
        let (a, b, dc) = ((**a).clone(), (**b).clone(), (**dc).clone());
        Ok(match rule {
            StructuralRule::Alpha => Formula::tensor(a, Formula::tensor(b, dc)),
            StructuralRule::Sigma => Formula::tensor(Formula::tensor(a, dc), b),
        })
    })?;
    rewritten.ok_or(StructuralError::NoSuchPath(p))
}

/// Every position in `tree` where a structural rule matches.
pub fn structural_sites(tree: &Formula) -> Vec<Vec<Step>> {
    let mut out = Vec::new();
    walk(tree, &mut Vec::new(), &mut out);
    out
}

fn walk(f: &Formula, path: &mut Vec<Step>, out: &mut Vec<Vec<Step>>) {
    if let Formula::Tensor(ab, dc) = f {
        if matches!((&**ab, &**dc), (Formula::Tensor(..), Formula::Dia(Mode::X, _))) {
            out.push(path.clone());
        }
    }
    let children: &[(Step, &Formula)] = &match f {
        Formula::Atom(_) => Vec::new(),
        Formula::Tensor(a, b) | Formula::Over(a, b) | Formula::Under(a, b) => {
            alloc::vec![(Step::L, &**a), (Step::R, &**b)]
        }
        Formula::Dia(_, a) | Formula::Box(_, a) => alloc::vec![(Step::Body, &**a)],
    };
    for (step, child) in children {
        path.push(*step);
        walk(child, path, out);
        path.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(s: &str) -> Formula {
        Formula::atom(s)
    }

    fn abc(m: Mode) -> Formula {
        Formula::tensor(Formula::tensor(at("a"), at("b")), Formula::dia(m, at("c")))
    }

    #[test]
    fn alpha_and_sigma_at_root() {
        let t = abc(Mode::X);
        assert_eq!(alloc::format!("{}", apply_structural(&t, StructuralRule::Alpha, &[]).unwrap()), "a*(b*<x>c)");
        assert_eq!(alloc::format!("{}", apply_structural(&t, StructuralRule::Sigma, &[]).unwrap()), "(a*<x>c)*b");
    }

    #[test]
    fn island_mode_rejected() {
        let err = apply_structural(&abc(Mode::I), StructuralRule::Sigma, &[]).unwrap_err();
        assert!(matches!(err, StructuralError::IslandMode(_)));
    }

    #[test]
    fn pattern_mismatch() {
        let err = apply_structural(&at("a"), StructuralRule::Alpha, &[]).unwrap_err();
        assert!(matches!(err, StructuralError::Pattern { .. }));
        let err = apply_structural(&at("a"), StructuralRule::Alpha, &[Step::L]).unwrap_err();
        assert!(matches!(err, StructuralError::NoSuchPath(_)));
    }

    #[test]
    fn residuation_shapes() {
        let g = Arrow::new(Formula::tensor(at("a"), at("b")), at("c"));
        let r = residuate(&g, Residuation::TensorToOver).unwrap();
        assert_eq!(alloc::format!("{r}"), "a -> c/b");
        let u = residuate(&g, Residuation::TensorToUnder).unwrap();
        assert_eq!(alloc::format!("{u}"), "b -> a\\c");
        let d = Arrow::new(Formula::dia(Mode::X, at("a")), at("b"));
        assert_eq!(alloc::format!("{}", residuate(&d, Residuation::DiaToBox).unwrap()), "a -> [x]b");
        assert!(residuate(&g, Residuation::OverToTensor).is_err());
    }

    #[test]
    fn round_trip_on_application() {
        let g = Arrow::new(Formula::tensor(at("np"), Formula::under(at("np"), at("s"))), at("s"));
        for r in [Residuation::TensorToOver, Residuation::TensorToUnder] {
            let there = residuate(&g, r).unwrap();
            assert_eq!(residuate(&there, r.inverse()).unwrap(), g);
        }
    }

    #[test]
    fn proofs_follow_residuation() {
        let g = Arrow::new(Formula::tensor(at("np"), Formula::under(at("np"), at("s"))), at("s"));
        let p = ProofTerm::EvUnder(at("np"), at("s"));
        for r in [Residuation::TensorToOver, Residuation::TensorToUnder] {
            let q = residuate_proof(&p, &g, r).unwrap();
            let target = residuate(&g, r).unwrap();
            assert_eq!(q.validate().unwrap(), target);
            let back = residuate_proof(&q, &target, r.inverse()).unwrap();
            assert_eq!(back.validate().unwrap(), g);
        }
    }
}
