//! Seeded random formulas and proof terms for property tests.

use rand::Rng;

use super::ProofTerm;
use crate::formula::{Formula, Mode};

/// Atoms used by [`random_formula`].
pub const ATOMS: [&str; 3] = ["n", "np", "s"];

fn mode(rng: &mut impl Rng) -> Mode {
    if rng.gen_bool(0.5) {
        Mode::X
    } else {
        Mode::I
    }
}

/// A formula of at most `depth` connectives over [`ATOMS`].
pub fn random_formula(rng: &mut impl Rng, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.4) {
        return Formula::atom(ATOMS[rng.gen_range(0..ATOMS.len())]);
    }
    let d = depth - 1;
    match rng.gen_range(0..5) {
        0 => Formula::tensor(random_formula(rng, d), random_formula(rng, d)),
        1 => Formula::over(random_formula(rng, d), random_formula(rng, d)),
        2 => Formula::under(random_formula(rng, d), random_formula(rng, d)),
        3 => Formula::dia(mode(rng), random_formula(rng, d)),
        _ => Formula::boxed(mode(rng), random_formula(rng, d)),
    }
}

/// A random proof term whose source is `src`.
pub fn proof_from(src: &Formula, rng: &mut impl Rng, depth: usize) -> ProofTerm {
    use Formula as F;
    if depth == 0 {
        return ProofTerm::Id(src.clone());
    }
    let d = depth - 1;
    match rng.gen_range(0..6) {
        0 => ProofTerm::CoevUnder(random_formula(rng, 1), src.clone()),
        1 => ProofTerm::CoevOver(random_formula(rng, 1), src.clone()),
        2 => ProofTerm::CoevBox(mode(rng), src.clone()),
        _ => match src {
            F::Tensor(a, b) => match (&**a, &**b) {
                (x, F::Under(y, c)) if x == &**y && rng.gen_bool(0.5) => ProofTerm::EvUnder(x.clone(), (**c).clone()),
                (F::Over(c, y), x) if x == &**y && rng.gen_bool(0.5) => ProofTerm::EvOver(x.clone(), (**c).clone()),
                (F::Tensor(x, y), F::Dia(Mode::X, c)) if rng.gen_bool(0.5) => {
                    if rng.gen_bool(0.5) {
                        ProofTerm::AlphaDia((**x).clone(), (**y).clone(), (**c).clone())
                    } else {
                        ProofTerm::SigmaDia((**x).clone(), (**y).clone(), (**c).clone())
                    }
                }
                _ => ProofTerm::mon_tensor(proof_from(a, rng, d), proof_from(b, rng, d)),
            },
            F::Over(a, b) => ProofTerm::mon_over(proof_from(a, rng, d), proof_to(b, rng, d)),
            F::Under(a, b) => ProofTerm::mon_under(proof_to(a, rng, d), proof_from(b, rng, d)),
            F::Dia(m, a) => match &**a {
                F::Box(m2, x) if m == m2 && rng.gen_bool(0.5) => ProofTerm::EvBox(*m, (**x).clone()),
                _ => ProofTerm::mon_dia(*m, proof_from(a, rng, d)),
            },
            F::Box(m, a) => ProofTerm::mon_box(*m, proof_from(a, rng, d)),
            F::Atom(_) => ProofTerm::Id(src.clone()),
        },
    }
}

/// A random proof term whose target is `tgt`.
pub fn proof_to(tgt: &Formula, rng: &mut impl Rng, depth: usize) -> ProofTerm {
    use Formula as F;
    if depth == 0 {
        return ProofTerm::Id(tgt.clone());
    }
    let d = depth - 1;
    match rng.gen_range(0..6) {
        0 => ProofTerm::EvUnder(random_formula(rng, 1), tgt.clone()),
        1 => ProofTerm::EvOver(random_formula(rng, 1), tgt.clone()),
        2 => ProofTerm::EvBox(mode(rng), tgt.clone()),
        _ => match tgt {
            F::Tensor(a, b) => ProofTerm::mon_tensor(proof_to(a, rng, d), proof_to(b, rng, d)),
            F::Over(a, b) => ProofTerm::mon_over(proof_to(a, rng, d), proof_from(b, rng, d)),
            F::Under(a, b) => ProofTerm::mon_under(proof_from(a, rng, d), proof_to(b, rng, d)),
            F::Dia(m, a) => ProofTerm::mon_dia(*m, proof_to(a, rng, d)),
            F::Box(m, a) => match &**a {
                F::Dia(m2, x) if m == m2 && rng.gen_bool(0.5) => ProofTerm::CoevBox(*m, (**x).clone()),
                _ => ProofTerm::mon_box(*m, proof_to(a, rng, d)),
            },
            F::Atom(_) => ProofTerm::Id(tgt.clone()),
        },
    }
}

/// A random valid proof term from a random source formula.
pub fn random_proof(rng: &mut impl Rng, depth: usize) -> ProofTerm {
    let src = random_formula(rng, 2);
    let p = proof_from(&src, rng, depth);
    if rng.gen_bool(0.5) {
        let tgt = p.validate().expect("generated terms are valid").rhs;
        ProofTerm::compose(proof_from(&tgt, rng, depth), p)
    } else {
        p
    }
}
