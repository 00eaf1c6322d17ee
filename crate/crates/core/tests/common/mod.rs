#![allow(dead_code)]

use frobgap_core::formula::{Formula, Mode};
use frobgap_core::prover::random::ATOMS;
use proptest::prelude::*;

pub fn atom_names() -> std::collections::BTreeSet<String> {
    ATOMS.iter().map(|s| s.to_string()).collect()
}

pub fn formula_strategy() -> impl Strategy<Value = Formula> {
    let leaf = prop::sample::select(ATOMS.to_vec()).prop_map(Formula::atom);
    leaf.prop_recursive(4, 16, 2, |inner| {
        let mode = prop_oneof![Just(Mode::X), Just(Mode::I)];
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::tensor(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::over(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::under(a, b)),
            (mode.clone(), inner.clone()).prop_map(|(m, a)| Formula::dia(m, a)),
            (mode, inner).prop_map(|(m, a)| Formula::boxed(m, a)),
        ]
    })
}
