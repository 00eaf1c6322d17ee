use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::formula::{Formula, Mode};

/// A goal `lhs → rhs`. Not a proof by itself.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Arrow {
    pub lhs: Formula,
    pub rhs: Formula,
}

impl Arrow {
    pub fn new(lhs: Formula, rhs: Formula) -> Self {
        Arrow { lhs, rhs }
    }
}

impl fmt::Display for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.lhs, self.rhs)
    }
}

impl fmt::Debug for Arrow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An arrow of the Došen-style axiomatisation: identities, composition,
/// monotonicity, (co)evaluations and the two controlled postulates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ProofTerm {
    Id(Formula),
    /// `Compose(g, f)` is `g ∘ f`: first `f`, then `g`.
    Compose(Arc<ProofTerm>, Arc<ProofTerm>),
    /// `f ⊗ g : A⊗C → B⊗D`
    MonTensor(Arc<ProofTerm>, Arc<ProofTerm>),
    /// `f / g : A/D → B/C` for `f: A → B`, `g: C → D`
    MonOver(Arc<ProofTerm>, Arc<ProofTerm>),
    /// `f \ g : B\C → A\D` for `f: A → B`, `g: C → D`
    MonUnder(Arc<ProofTerm>, Arc<ProofTerm>),
    MonDia(Mode, Arc<ProofTerm>),
    MonBox(Mode, Arc<ProofTerm>),
    /// `A ⊗ A\B → B`
    EvUnder(Formula, Formula),
    /// `B → A\(A⊗B)`
    CoevUnder(Formula, Formula),
    /// `B/A ⊗ A → B`
    EvOver(Formula, Formula),
    /// `B → (B⊗A)/A`
    CoevOver(Formula, Formula),
    /// `◇□A → A`
    EvBox(Mode, Formula),
    /// `A → □◇A`
    CoevBox(Mode, Formula),
    /// `(A⊗B)⊗◇C → A⊗(B⊗◇C)`, mode x only
    AlphaDia(Formula, Formula, Formula),
    /// `(A⊗B)⊗◇C → (A⊗◇C)⊗B`, mode x only
    SigmaDia(Formula, Formula, Formula),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("composition mismatch: `{inner}` does not match `{outer}`")]
    ComposeMismatch { inner: String, outer: String },
}

impl ProofTerm {
    pub fn compose(g: ProofTerm, f: ProofTerm) -> ProofTerm {
        ProofTerm::Compose(Arc::new(g), Arc::new(f))
    }

    pub fn mon_tensor(f: ProofTerm, g: ProofTerm) -> ProofTerm {
        ProofTerm::MonTensor(Arc::new(f), Arc::new(g))
    }

    pub fn mon_over(f: ProofTerm, g: ProofTerm) -> ProofTerm {
        ProofTerm::MonOver(Arc::new(f), Arc::new(g))
    }

    pub fn mon_under(f: ProofTerm, g: ProofTerm) -> ProofTerm {
        ProofTerm::MonUnder(Arc::new(f), Arc::new(g))
    }

    pub fn mon_dia(m: Mode, f: ProofTerm) -> ProofTerm {
        ProofTerm::MonDia(m, Arc::new(f))
    }

    pub fn mon_box(m: Mode, f: ProofTerm) -> ProofTerm {
        ProofTerm::MonBox(m, Arc::new(f))
    }

    /// `g ∘ f`, dropping identities on either side.
    pub fn then(f: ProofTerm, g: ProofTerm) -> ProofTerm {
        match (&f, &g) {
            (ProofTerm::Id(_), _) => g,
            (_, ProofTerm::Id(_)) => f,
            _ => ProofTerm::compose(g, f),
        }
    }

    /// Recomputes the endpoints of the term, checking every composition.
    pub fn validate(&self) -> Result<Arrow, TermError> {
        use Formula as F;
        let arrow = match self {
            ProofTerm::Id(a) => Arrow::new(a.clone(), a.clone()),
            ProofTerm::Compose(g, f) => {
                let f = f.validate()?;
                let g = g.validate()?;
                if f.rhs != g.lhs {
                    return Err(TermError::ComposeMismatch {
                        inner: alloc::format!("{f}"),
                        outer: alloc::format!("{g}"),
                    });
                }
                Arrow::new(f.lhs, g.rhs)
            }
            ProofTerm::MonTensor(f, g) => {
                let f = f.validate()?;
                let g = g.validate()?;
                Arrow::new(F::tensor(f.lhs, g.lhs), F::tensor(f.rhs, g.rhs))
            }
            ProofTerm::MonOver(f, g) => {
                let f = f.validate()?;
                let g = g.validate()?;
                Arrow::new(F::over(f.lhs, g.rhs), F::over(f.rhs, g.lhs))
            }
            ProofTerm::MonUnder(f, g) => {
                let f = f.validate()?;
                let g = g.validate()?;
                Arrow::new(F::under(f.rhs, g.lhs), F::under(f.lhs, g.rhs))
            }
            ProofTerm::MonDia(m, f) => {
                let f = f.validate()?;
                Arrow::new(F::dia(*m, f.lhs), F::dia(*m, f.rhs))
            }
            ProofTerm::MonBox(m, f) => {
                let f = f.validate()?;
                Arrow::new(F::boxed(*m, f.lhs), F::boxed(*m, f.rhs))
            }
            ProofTerm::EvUnder(a, b) => Arrow::new(
                F::tensor(a.clone(), F::under(a.clone(), b.clone())),
                b.clone(),
            ),
            ProofTerm::CoevUnder(a, b) => Arrow::new(
                b.clone(),
                F::under(a.clone(), F::tensor(a.clone(), b.clone())),
            ),
            ProofTerm::EvOver(a, b) => Arrow::new(
                F::tensor(F::over(b.clone(), a.clone()), a.clone()),
                b.clone(),
            ),
            ProofTerm::CoevOver(a, b) => Arrow::new(
                b.clone(),
                F::over(F::tensor(b.clone(), a.clone()), a.clone()),
            ),
            ProofTerm::EvBox(m, a) => Arrow::new(F::dia(*m, F::boxed(*m, a.clone())), a.clone()),
            ProofTerm::CoevBox(m, a) => Arrow::new(a.clone(), F::boxed(*m, F::dia(*m, a.clone()))),
            ProofTerm::AlphaDia(a, b, c) => {
                let dc = F::dia(Mode::X, c.clone());
                Arrow::new(
                    F::tensor(F::tensor(a.clone(), b.clone()), dc.clone()),
                    F::tensor(a.clone(), F::tensor(b.clone(), dc)),
                )
            }
            ProofTerm::SigmaDia(a, b, c) => {
                let dc = F::dia(Mode::X, c.clone());
                Arrow::new(
                    F::tensor(F::tensor(a.clone(), b.clone()), dc.clone()),
                    F::tensor(F::tensor(a.clone(), dc), b.clone()),
                )
            }
        };
        Ok(arrow)
    }

    /// Short rule name, as used in serialised proofs.
    pub fn rule(&self) -> &'static str {
        match self {
            ProofTerm::Id(_) => "id",
            ProofTerm::Compose(..) => "compose",
            ProofTerm::MonTensor(..) => "mon_tensor",
            ProofTerm::MonOver(..) => "mon_over",
            ProofTerm::MonUnder(..) => "mon_under",
            ProofTerm::MonDia(..) => "mon_dia",
            ProofTerm::MonBox(..) => "mon_box",
            ProofTerm::EvUnder(..) => "ev_under",
            ProofTerm::CoevUnder(..) => "coev_under",
            ProofTerm::EvOver(..) => "ev_over",
            ProofTerm::CoevOver(..) => "coev_over",
            ProofTerm::EvBox(..) => "ev_box",
            ProofTerm::CoevBox(..) => "coev_box",
            ProofTerm::AlphaDia(..) => "alpha_dia",
            ProofTerm::SigmaDia(..) => "sigma_dia",
        }
    }

    pub fn mode(&self) -> Option<Mode> {
        match self {
            ProofTerm::MonDia(m, _)
            | ProofTerm::MonBox(m, _)
            | ProofTerm::EvBox(m, _)
            | ProofTerm::CoevBox(m, _) => Some(*m),
            ProofTerm::AlphaDia(..) | ProofTerm::SigmaDia(..) => Some(Mode::X),
            _ => None,
        }
    }

    pub fn children(&self) -> Vec<&ProofTerm> {
        match self {
            ProofTerm::Compose(g, f) => alloc::vec![&**f, &**g],
            ProofTerm::MonTensor(f, g) | ProofTerm::MonOver(f, g) | ProofTerm::MonUnder(f, g) => {
                alloc::vec![&**f, &**g]
            }
            ProofTerm::MonDia(_, f) | ProofTerm::MonBox(_, f) => alloc::vec![&**f],
            _ => Vec::new(),
        }
    }

    /// Number of non-identity nodes.
    pub fn size(&self) -> usize {
        match self {
            ProofTerm::Id(_) => 0,
            _ => 1 + self.children().iter().map(|c| c.size()).sum::<usize>(),
        }
    }

    /// Counts occurrences of the two structural postulates.
    pub fn structural_steps(&self) -> (usize, usize) {
        match self {
            ProofTerm::AlphaDia(..) => (1, 0),
            ProofTerm::SigmaDia(..) => (0, 1),
            _ => self.children().iter().fold((0, 0), |(a, s), c| {
                let (ca, cs) = c.structural_steps();
                (a + ca, s + cs)
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn at(s: &str) -> Formula {
        Formula::atom(s)
    }

    #[test]
    fn ev_under_validates() {
        let t = ProofTerm::EvUnder(at("np"), at("s"));
        let arrow = t.validate().unwrap();
        assert_eq!(alloc::format!("{arrow}"), "np*np\\s -> s");
    }

    #[test]
    fn mismatched_compose_is_rejected() {
        let bad = ProofTerm::compose(ProofTerm::Id(at("np")), ProofTerm::Id(at("s")));
        assert!(matches!(bad.validate(), Err(TermError::ComposeMismatch { .. })));
    }

    #[test]
    fn monotonicity_variance() {
        // f: np -> np, g: ◇□np -> np  gives  np/np -> np/◇□np
        let g = ProofTerm::EvBox(Mode::X, at("np"));
        let t = ProofTerm::mon_over(ProofTerm::Id(at("np")), g);
        let arrow = t.validate().unwrap();
        assert_eq!(alloc::format!("{arrow}"), "np/np -> np/<x>[x]np");
        let u = ProofTerm::mon_under(ProofTerm::EvBox(Mode::X, at("np")), ProofTerm::Id(at("s")));
        assert_eq!(alloc::format!("{}", u.validate().unwrap()), "np\\s -> <x>[x]np\\s");
    }

    #[test]
    fn size_skips_identities() {
        let t = ProofTerm::mon_tensor(ProofTerm::Id(at("a")), ProofTerm::EvBox(Mode::X, at("b")));
        assert_eq!(t.size(), 2);
        assert_eq!(ProofTerm::Id(at("a")).size(), 0);
    }
}
