//! Conjoinable types: `s`, and anything whose result ends in one.

use crate::formula::Formula;

pub fn is_ctype(f: &Formula) -> bool {
    match f {
        Formula::Atom(a) => a.name() == "s",
        Formula::Under(_, res) | Formula::Over(res, _) => is_ctype(res),
        _ => false,
    }
}
