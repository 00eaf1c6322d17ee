//! Type-derivation steps: expand, distribute, calibrate.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::formula::{
    parse_formula_with, parse_path, path_to_string, Formula, Mode, Polarity, Step,
};
use crate::prover::{prove, Arrow, SearchConfig};

/// What a calibration does at its position.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Calibration {
    /// `◇□A ↦ A`, or strips a single ◇ or □.
    DropModal,
    /// `A ↦ ◇□A` in the given mode.
    AddModal(Mode),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum StepKind {
    GeachExpand,
    ProductExpand,
    SDistribute,
    ProdDistribute,
    Calibrate,
}

impl StepKind {
    pub fn keyword(self) -> &'static str {
        match self {
            StepKind::GeachExpand => "geach",
            StepKind::ProductExpand => "pexpand",
            StepKind::SDistribute => "sdist",
            StepKind::ProdDistribute => "pdist",
            StepKind::Calibrate => "calibrate",
        }
    }

    fn from_keyword(s: &str) -> Option<StepKind> {
        Some(match s {
            "geach" => StepKind::GeachExpand,
            "pexpand" => StepKind::ProductExpand,
            "sdist" => StepKind::SDistribute,
            "pdist" => StepKind::ProdDistribute,
            "calibrate" => StepKind::Calibrate,
            _ => return None,
        })
    }
}

/// One authored rewrite of a lexical type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeStep {
    pub kind: StepKind,
    pub position: Vec<Step>,
    /// The `C` of a Geach step, or the replacement of a product expansion.
    pub formula: Option<Formula>,
    pub calibration: Option<Calibration>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("no subformula at path {0}")]
    NoSuchPath(String),
    #[error("at {path}: expected {expected}, found {found}")]
    Shape {
        path: String,
        expected: &'static str,
        found: String,
    },
    #[error("at {path}: position has positive polarity; only antitone positions may be replaced")]
    Polarity { path: String },
    #[error("witness {0} is not provable")]
    Unprovable(String),
    #[error("malformed step `{0}`")]
    Syntax(String),
}

fn shape(path: &[Step], expected: &'static str, found: &Formula) -> StepError {
    StepError::Shape {
        path: path_to_string(path),
        expected,
        found: found.to_string(),
    }
}

fn rewrite(
    t: &Formula,
    pos: &[Step],
    f: impl FnOnce(&Formula) -> Result<Formula, StepError>,
) -> Result<Formula, StepError> {
    t.rewrite_at(pos, f)?
        .ok_or_else(|| StepError::NoSuchPath(path_to_string(pos)))
}

fn antitone(t: &Formula, pos: &[Step]) -> Result<(), StepError> {
    match t.polarity_at(pos, Polarity::Positive) {
        None => Err(StepError::NoSuchPath(path_to_string(pos))),
        Some(Polarity::Positive) => Err(StepError::Polarity {
            path: path_to_string(pos),
        }),
        Some(Polarity::Negative) => Ok(()),
    }
}

fn provable(arrow: &Arrow) -> Result<(), StepError> {
    let cfg = SearchConfig {
        max_proof_size: 12,
        ..SearchConfig::default()
    };
    match prove(arrow, &cfg) {
        Ok(out) if out.is_derivable() => Ok(()),
        _ => Err(StepError::Unprovable(arrow.to_string())),
    }
}

/// `A/B ↦ (A/C)/(B/C)`.
pub fn geach_expand(t: &Formula, pos: &[Step], c: &Formula) -> Result<Formula, StepError> {
    rewrite(t, pos, |sub| match sub {
        Formula::Over(a, b) => Ok(Formula::over(
            Formula::over((**a).clone(), c.clone()),
            Formula::over((**b).clone(), c.clone()),
        )),
        other => Err(shape(pos, "A/B", other)),
    })
}

/// `(A\B)/C ↦ (A/C)\(B/C)`, looking through boxes on the numerator.
pub fn s_distribute(t: &Formula, pos: &[Step]) -> Result<Formula, StepError> {
    fn go(num: &Formula, c: &Formula) -> Option<Formula> {
        match num {
            Formula::Under(a, b) => Some(Formula::under(
                Formula::over((**a).clone(), c.clone()),
                Formula::over((**b).clone(), c.clone()),
            )),
            Formula::Box(m, inner) => go(inner, c).map(|f| Formula::boxed(*m, f)),
            _ => None,
        }
    }
    rewrite(t, pos, |sub| match sub {
        Formula::Over(num, c) => go(num, c).ok_or_else(|| shape(pos, "(A\\B)/C", sub)),
        other => Err(shape(pos, "(A\\B)/C", other)),
    })
}

/// Replaces an antitone occurrence by `replacement`, which must derive it.
pub fn product_expand(t: &Formula, pos: &[Step], replacement: &Formula) -> Result<Formula, StepError> {
    antitone(t, pos)?;
    let original = t
        .subformula(pos)
        .ok_or_else(|| StepError::NoSuchPath(path_to_string(pos)))?;
    provable(&Arrow::new(replacement.clone(), original.clone()))?;
    rewrite(t, pos, |_| Ok(replacement.clone()))
}

/// The arrow checked for a product distribution of `(A⊗B)/C`:
/// `(A/C ⊗ C) ⊗ (B/C ⊗ C) → A ⊗ B`.
pub fn prod_distribute_premise(a: &Formula, b: &Formula, c: &Formula) -> Arrow {
    let ac = Formula::tensor(Formula::over(a.clone(), c.clone()), c.clone());
    let bc = Formula::tensor(Formula::over(b.clone(), c.clone()), c.clone());
    Arrow::new(Formula::tensor(ac, bc), Formula::tensor(a.clone(), b.clone()))
}

/// `(A⊗B)/C ↦ (A/C)⊗(B/C)` at an antitone position.
pub fn prod_distribute(t: &Formula, pos: &[Step]) -> Result<Formula, StepError> {
    antitone(t, pos)?;
    rewrite(t, pos, |sub| match sub {
        Formula::Over(num, c) => match &**num {
            Formula::Tensor(a, b) => {
                provable(&prod_distribute_premise(a, b, c))?;
                Ok(Formula::tensor(
                    Formula::over((**a).clone(), (**c).clone()),
                    Formula::over((**b).clone(), (**c).clone()),
                ))
            }
            _ => Err(shape(pos, "(A*B)/C", sub)),
        },
        other => Err(shape(pos, "(A*B)/C", other)),
    })
}

pub fn calibrate(t: &Formula, pos: &[Step], edit: Calibration) -> Result<Formula, StepError> {
    rewrite(t, pos, |sub| match edit {
        Calibration::AddModal(m) => Ok(Formula::dia_box(m, sub.clone())),
        Calibration::DropModal => match sub {
            Formula::Dia(m, inner) => match &**inner {
                Formula::Box(n, body) if n == m => Ok((**body).clone()),
                _ => Ok((**inner).clone()),
            },
            Formula::Box(_, inner) => Ok((**inner).clone()),
            other => Err(shape(pos, "a modal formula", other)),
        },
    })
}

impl TypeStep {
    pub fn apply(&self, t: &Formula) -> Result<Formula, StepError> {
        let missing = || StepError::Syntax(self.to_string());
        match self.kind {
            StepKind::GeachExpand => geach_expand(t, &self.position, self.formula.as_ref().ok_or_else(missing)?),
            StepKind::ProductExpand => {
                product_expand(t, &self.position, self.formula.as_ref().ok_or_else(missing)?)
            }
            StepKind::SDistribute => s_distribute(t, &self.position),
            StepKind::ProdDistribute => prod_distribute(t, &self.position),
            StepKind::Calibrate => calibrate(t, &self.position, self.calibration.ok_or_else(missing)?),
        }
    }

    /// Parses `kind@path` optionally followed by `(param)`.
    pub fn parse(
        text: &str,
        atoms: &alloc::collections::BTreeSet<String>,
        macros: &alloc::collections::BTreeMap<String, Formula>,
    ) -> Result<TypeStep, StepError> {
        let bad = || StepError::Syntax(text.to_string());
        let text = text.trim();
        let (kw, rest) = text.split_once('@').ok_or_else(bad)?;
        let kind = StepKind::from_keyword(kw).ok_or_else(bad)?;
        let (path_text, param) = match rest.find('(') {
            Some(i) => {
                let inner = rest[i + 1..].strip_suffix(')').ok_or_else(bad)?;
                (&rest[..i], Some(inner))
            }
            None => (rest, None),
        };
        let position = parse_path(path_text).ok_or_else(bad)?;
        let mut step = TypeStep {
            kind,
            position,
            formula: None,
            calibration: None,
        };
        match (kind, param) {
            (StepKind::GeachExpand | StepKind::ProductExpand, Some(p)) => {
                step.formula = Some(parse_formula_with(p, atoms, macros).map_err(|_| bad())?);
            }
            (StepKind::Calibrate, Some("drop")) => step.calibration = Some(Calibration::DropModal),
            (StepKind::Calibrate, Some(p)) => {
                let tag = p.strip_prefix("add:").ok_or_else(bad)?;
                let mut chars = tag.chars();
                let m = match (chars.next().and_then(Mode::from_tag), chars.next()) {
                    (Some(m), None) => m,
                    _ => return Err(bad()),
                };
                step.calibration = Some(Calibration::AddModal(m));
            }
            (StepKind::SDistribute | StepKind::ProdDistribute, None) => {}
            _ => return Err(bad()),
        }
        Ok(step)
    }
}

impl fmt::Display for TypeStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}@{}", self.kind.keyword(), path_to_string(&self.position))?;
        if let Some(c) = &self.formula {
            write!(f, "({c})")?;
        }
        match self.calibration {
            Some(Calibration::DropModal) => f.write_str("(drop)"),
            Some(Calibration::AddModal(m)) => write!(f, "(add:{})", m.tag()),
            None => Ok(()),
        }
    }
}

/// Splits a `;`-separated step list, ignoring separators inside parentheses.
pub fn split_steps(text: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ';' if depth == 0 => {
                out.push(text[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    let last = text[start..].trim();
    if !last.is_empty() {
        out.push(last);
    }
    out
}

pub fn parse_steps(
    text: &str,
    atoms: &alloc::collections::BTreeSet<String>,
    macros: &alloc::collections::BTreeMap<String, Formula>,
) -> Result<Vec<TypeStep>, StepError> {
    split_steps(text)
        .into_iter()
        .map(|s| TypeStep::parse(s, atoms, macros))
        .collect()
}

pub fn print_steps(steps: &[TypeStep]) -> String {
    let parts: Vec<String> = steps.iter().map(|s| s.to_string()).collect();
    parts.join(";")
}

/// Every intermediate type, starting with `base`. On failure returns the
/// index of the failing step.
pub fn replay(base: &Formula, steps: &[TypeStep]) -> Result<Vec<Formula>, (usize, StepError)> {
    let mut rows = alloc::vec![base.clone()];
    for (i, step) in steps.iter().enumerate() {
        let next = step.apply(rows.last().expect("nonempty")).map_err(|e| (i, e))?;
        rows.push(next);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::collections::{BTreeMap, BTreeSet};

    fn env() -> (BTreeSet<String>, BTreeMap<String, Formula>) {
        let atoms: BTreeSet<String> = ["n", "np", "s", "gp", "to_inf", "a", "b", "c"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        let mut macros = BTreeMap::new();
        macros.insert("iv".to_string(), Formula::under(Formula::atom("np"), Formula::atom("s")));
        (atoms, macros)
    }

    fn f(s: &str) -> Formula {
        let (atoms, macros) = env();
        parse_formula_with(s, &atoms, &macros).unwrap()
    }

    fn show(t: &Formula) -> String {
        t.abbreviate(&env().1)
    }

    #[test]
    fn geach_schema() {
        assert_eq!(geach_expand(&f("a/b"), &[], &f("c")).unwrap(), f("(a/c)/(b/c)"));
        assert_eq!(geach_expand(&f("a/b"), &[], &f("b")).unwrap(), f("(a/b)/(b/b)"));
        assert!(matches!(geach_expand(&f("a\\b"), &[], &f("c")), Err(StepError::Shape { .. })));
    }

    #[test]
    fn s_distribute_schema() {
        assert_eq!(s_distribute(&f("(a\\b)/c"), &[]).unwrap(), f("(a/c)\\(b/c)"));
        assert!(s_distribute(&f("(a/b)/c"), &[]).is_err());
    }

    #[test]
    fn without_rows() {
        let (atoms, macros) = env();
        let steps = parse_steps("geach@.(<x>[x]np);sdist@L;calibrate@L.B.R.R(drop)", &atoms, &macros).unwrap();
        let rows: Vec<String> = replay(&f("[i](iv\\iv)/gp"), &steps).unwrap().iter().map(show).collect();
        assert_eq!(
            rows,
            [
                "[i](iv\\iv)/gp",
                "([i](iv\\iv)/<x>[x]np)/(gp/<x>[x]np)",
                "[i]((iv/<x>[x]np)\\(iv/<x>[x]np))/(gp/<x>[x]np)",
                "[i]((iv/<x>[x]np)\\(iv/np))/(gp/<x>[x]np)",
            ]
        );
        assert_eq!(print_steps(&steps), "geach@.(<x>[x]np);sdist@L;calibrate@L.B.R.R(drop)");
    }

    #[test]
    fn product_expand_guards_polarity() {
        let t = f("(n\\n)/(s/<x>[x]np)");
        let out = product_expand(&t, &[Step::R, Step::L], &f("np*np\\s")).unwrap();
        assert_eq!(print_formula_str(&out), "(n\\n)/((np*np\\s)/<x>[x]np)");
        assert!(matches!(
            product_expand(&t, &[Step::L, Step::R], &f("np*np\\n")),
            Err(StepError::Polarity { .. })
        ));
        assert!(matches!(
            product_expand(&t, &[Step::R, Step::L], &f("np*s")),
            Err(StepError::Unprovable(_))
        ));
    }

    fn print_formula_str(t: &Formula) -> String {
        crate::formula::print_formula(t)
    }

    #[test]
    fn prod_distribute_standalone() {
        let t = f("(n\\n)/((a*b)/c)");
        let out = prod_distribute(&t, &[Step::R]).unwrap();
        assert_eq!(out, f("(n\\n)/((a/c)*(b/c))"));
    }

    #[test]
    fn calibration() {
        assert_eq!(calibrate(&f("a/<x>[x]b"), &[Step::R], Calibration::DropModal).unwrap(), f("a/b"));
        assert!(calibrate(&f("a/b"), &[Step::R], Calibration::DropModal).is_err());
        assert_eq!(
            calibrate(&f("a/b"), &[Step::R], Calibration::AddModal(Mode::X)).unwrap(),
            f("a/<x>[x]b")
        );
    }

    #[test]
    fn bad_step_text() {
        let (atoms, macros) = env();
        for s in ["frob@.", "geach@Q(a)", "sdist@.(a)", "calibrate@.(add:q)", "geach@."] {
            assert!(TypeStep::parse(s, &atoms, &macros).is_err(), "{s}");
        }
    }
}
