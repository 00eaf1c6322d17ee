//! Types of the modal Lambek calculus: atoms, the binary family `* / \` and
//! the mode-indexed unary pair `<m>` / `[m]`.
//!
//! Concrete syntax:
//!
//! ```text
//! F ::= atom | (F) | F/F | F\F | F*F | <m>F | [m]F        m ∈ {x, i}
//! ```
//!
//! Unary operators bind tightest, then the slashes, then `*`. No binary
//! operator associates: `a/b/c`, `a\b/c` and `a*b*c` are rejected and must be
//! parenthesised. The printer emits the fewest parentheses this grammar
//! allows, so `print` and `parse` round-trip.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

/// An atomic type name such as `np` or `to_inf`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(Arc<str>);

impl Atom {
    pub fn new(name: &str) -> Self {
        assert!(!name.is_empty(), "atom names are nonempty");
        Atom(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Control mode of a unary pair. Only [`Mode::X`] has structural postulates;
/// [`Mode::I`] marks islands.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Mode {
    X,
    I,
}

impl Mode {
    pub fn tag(self) -> char {
        match self {
            Mode::X => 'x',
            Mode::I => 'i',
        }
    }

    pub fn from_tag(c: char) -> Option<Mode> {
        match c {
            'x' => Some(Mode::X),
            'i' => Some(Mode::I),
            _ => None,
        }
    }

    pub fn has_postulates(self) -> bool {
        matches!(self, Mode::X)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Polarity {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }

    pub fn sign(self) -> i64 {
        match self {
            Polarity::Positive => 1,
            Polarity::Negative => -1,
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(Atom),
    Tensor(Arc<Formula>, Arc<Formula>),
    /// `result / arg`
    Over(Arc<Formula>, Arc<Formula>),
    /// `arg \ result`
    Under(Arc<Formula>, Arc<Formula>),
    Dia(Mode, Arc<Formula>),
    Box(Mode, Arc<Formula>),
}

impl Formula {
    pub fn atom(name: &str) -> Formula {
        Formula::Atom(Atom::new(name))
    }

    pub fn tensor(a: Formula, b: Formula) -> Formula {
        Formula::Tensor(Arc::new(a), Arc::new(b))
    }

    pub fn over(result: Formula, arg: Formula) -> Formula {
        Formula::Over(Arc::new(result), Arc::new(arg))
    }

    pub fn under(arg: Formula, result: Formula) -> Formula {
        Formula::Under(Arc::new(arg), Arc::new(result))
    }

    pub fn dia(mode: Mode, body: Formula) -> Formula {
        Formula::Dia(mode, Arc::new(body))
    }

    pub fn boxed(mode: Mode, body: Formula) -> Formula {
        Formula::Box(mode, Arc::new(body))
    }

    /// `<m>[m]A`, the shape of a gap hypothesis.
    pub fn dia_box(mode: Mode, body: Formula) -> Formula {
        Formula::dia(mode, Formula::boxed(mode, body))
    }

    pub fn as_atom(&self) -> Option<&Atom> {
        match self {
            Formula::Atom(a) => Some(a),
            _ => None,
        }
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, Formula::Atom(_))
    }

    /// Number of connectives plus atoms.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) => 1,
            Formula::Tensor(a, b) | Formula::Over(a, b) | Formula::Under(a, b) => {
                1 + a.size() + b.size()
            }
            Formula::Dia(_, a) | Formula::Box(_, a) => 1 + a.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) => 0,
            Formula::Tensor(a, b) | Formula::Over(a, b) | Formula::Under(a, b) => {
                1 + a.depth().max(b.depth())
            }
            Formula::Dia(_, a) | Formula::Box(_, a) => 1 + a.depth(),
        }
    }

    /// Atom occurrences left to right, each with its polarity relative to
    /// `outer`.
    pub fn atom_occurrences(&self, outer: Polarity) -> Vec<(Atom, Polarity)> {
        let mut out = Vec::new();
        self.collect_atoms(outer, &mut out);
        out
    }

    fn collect_atoms(&self, pol: Polarity, out: &mut Vec<(Atom, Polarity)>) {
        match self {
            Formula::Atom(a) => out.push((a.clone(), pol)),
            Formula::Tensor(a, b) => {
                a.collect_atoms(pol, out);
                b.collect_atoms(pol, out);
            }
            Formula::Over(res, arg) => {
                res.collect_atoms(pol, out);
                arg.collect_atoms(pol.flip(), out);
            }
            Formula::Under(arg, res) => {
                arg.collect_atoms(pol.flip(), out);
                res.collect_atoms(pol, out);
            }
            Formula::Dia(_, a) | Formula::Box(_, a) => a.collect_atoms(pol, out),
        }
    }

    pub fn atom_set(&self) -> BTreeSet<Atom> {
        self.atom_occurrences(Polarity::Positive)
            .into_iter()
            .map(|(a, _)| a)
            .collect()
    }

    /// Signed counts of every atom at the given outer polarity.
    pub fn atom_counts(&self, outer: Polarity) -> BTreeMap<Atom, i64> {
        let mut counts = BTreeMap::new();
        for (a, p) in self.atom_occurrences(outer) {
            *counts.entry(a).or_insert(0) += p.sign();
        }
        counts
    }

    pub fn subformula(&self, path: &[Step]) -> Option<&Formula> {
        let mut cur = self;
        for step in path {
            cur = cur.child(*step)?;
        }
        Some(cur)
    }

    fn child(&self, step: Step) -> Option<&Formula> {
        match (self, step) {
            (Formula::Tensor(a, _), Step::L)
            | (Formula::Over(a, _), Step::L)
            | (Formula::Under(a, _), Step::L) => Some(a),
            (Formula::Tensor(_, b), Step::R)
            | (Formula::Over(_, b), Step::R)
            | (Formula::Under(_, b), Step::R) => Some(b),
            (Formula::Dia(_, a), Step::Body) | (Formula::Box(_, a), Step::Body) => Some(a),
            _ => None,
        }
    }

    /// Polarity of the subformula at `path`, given the polarity of `self`.
    pub fn polarity_at(&self, path: &[Step], outer: Polarity) -> Option<Polarity> {
        let mut cur = self;
        let mut pol = outer;
        for step in path {
            match (cur, step) {
                (Formula::Over(_, _), Step::R) | (Formula::Under(_, _), Step::L) => {
                    pol = pol.flip()
                }
                _ => {}
            }
            cur = cur.child(*step)?;
        }
        Some(pol)
    }

    /// Rebuilds `self` with the subformula at `path` passed through `f`.
    pub fn rewrite_at<E>(
        &self,
        path: &[Step],
        f: impl FnOnce(&Formula) -> Result<Formula, E>,
    ) -> Result<Option<Formula>, E> {
        let Some((step, rest)) = path.split_first() else {
            return f(self).map(Some);
        };
        let rebuilt = match (self, step) {
            (Formula::Tensor(a, b), Step::L) => a
                .rewrite_at(rest, f)?
                .map(|a| Formula::Tensor(Arc::new(a), b.clone())),
            (Formula::Tensor(a, b), Step::R) => b
                .rewrite_at(rest, f)?
                .map(|b| Formula::Tensor(a.clone(), Arc::new(b))),
            (Formula::Over(a, b), Step::L) => a
                .rewrite_at(rest, f)?
                .map(|a| Formula::Over(Arc::new(a), b.clone())),
            (Formula::Over(a, b), Step::R) => b
                .rewrite_at(rest, f)?
                .map(|b| Formula::Over(a.clone(), Arc::new(b))),
            (Formula::Under(a, b), Step::L) => a
                .rewrite_at(rest, f)?
                .map(|a| Formula::Under(Arc::new(a), b.clone())),
            (Formula::Under(a, b), Step::R) => b
                .rewrite_at(rest, f)?
                .map(|b| Formula::Under(a.clone(), Arc::new(b))),
            (Formula::Dia(m, a), Step::Body) => {
                a.rewrite_at(rest, f)?.map(|a| Formula::Dia(*m, Arc::new(a)))
            }
            (Formula::Box(m, a), Step::Body) => {
                a.rewrite_at(rest, f)?.map(|a| Formula::Box(*m, Arc::new(a)))
            }
            _ => None,
        };
        Ok(rebuilt)
    }

    /// Replaces every subformula equal to a macro body with that macro's
    /// name, for display only. The result is not guaranteed to reparse
    /// without the macro table.
    pub fn abbreviate(&self, macros: &BTreeMap<String, Formula>) -> String {
        let mut s = String::new();
        write_formula(&mut s, self, Ctx::Top, Some(macros));
        s
    }
}

/// Signed occurrence count of `a` in `f` at polarity `outer`.
pub fn atom_count(f: &Formula, a: &Atom, outer: Polarity) -> i64 {
    f.atom_occurrences(outer)
        .iter()
        .filter(|(b, _)| b == a)
        .map(|(_, p)| p.sign())
        .sum()
}

/// One step of a path into a formula tree.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Step {
    L,
    R,
    Body,
}

impl Step {
    pub fn letter(self) -> char {
        match self {
            Step::L => 'L',
            Step::R => 'R',
            Step::Body => 'B',
        }
    }
}

/// Renders a path as dot-separated `L`/`R`/`B` letters; the root is `.`.
pub fn path_to_string(path: &[Step]) -> String {
    if path.is_empty() {
        return ".".to_string();
    }
    let mut s = String::new();
    for (i, step) in path.iter().enumerate() {
        if i > 0 {
            s.push('.');
        }
        s.push(step.letter());
    }
    s
}

pub fn parse_path(text: &str) -> Option<Vec<Step>> {
    let text = text.trim();
    if text == "." {
        return Some(Vec::new());
    }
    text.split('.')
        .map(|part| match part {
            "L" => Some(Step::L),
            "R" => Some(Step::R),
            "B" => Some(Step::Body),
            _ => None,
        })
        .collect()
}

// ---------------------------------------------------------------------------
// printing

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    Top,
    TensorArg,
    SlashArg,
    Unary,
}

fn needs_parens(f: &Formula, ctx: Ctx) -> bool {
    match f {
        Formula::Atom(_) | Formula::Dia(..) | Formula::Box(..) => false,
        Formula::Tensor(..) => ctx != Ctx::Top,
        Formula::Over(..) | Formula::Under(..) => matches!(ctx, Ctx::SlashArg | Ctx::Unary),
    }
}

fn write_formula(
    out: &mut String,
    f: &Formula,
    ctx: Ctx,
    macros: Option<&BTreeMap<String, Formula>>,
) {
    if let Some(table) = macros {
        if let Some((name, _)) = table.iter().find(|(_, body)| *body == f) {
            out.push_str(name);
            return;
        }
    }
    let paren = needs_parens(f, ctx);
    if paren {
        out.push('(');
    }
    match f {
        Formula::Atom(a) => out.push_str(a.name()),
        Formula::Tensor(a, b) => {
            write_formula(out, a, Ctx::TensorArg, macros);
            out.push('*');
            write_formula(out, b, Ctx::TensorArg, macros);
        }
        Formula::Over(a, b) => {
            write_formula(out, a, Ctx::SlashArg, macros);
            out.push('/');
            write_formula(out, b, Ctx::SlashArg, macros);
        }
        Formula::Under(a, b) => {
            write_formula(out, a, Ctx::SlashArg, macros);
            out.push('\\');
            write_formula(out, b, Ctx::SlashArg, macros);
        }
        Formula::Dia(m, a) => {
            out.push('<');
            out.push(m.tag());
            out.push('>');
            write_formula(out, a, Ctx::Unary, macros);
        }
        Formula::Box(m, a) => {
            out.push('[');
            out.push(m.tag());
            out.push(']');
            write_formula(out, a, Ctx::Unary, macros);
        }
    }
    if paren {
        out.push(')');
    }
}

pub fn print_formula(f: &Formula) -> String {
    let mut s = String::new();
    write_formula(&mut s, f, Ctx::Top, None);
    s
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_formula(self))
    }
}

// ---------------------------------------------------------------------------
// parsing

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unbalanced parentheses")]
    Unbalanced,
    #[error("ambiguous chain of `{0}`; add parentheses")]
    AmbiguousChain(char),
    #[error("bad mode tag; expected `x` or `i`")]
    BadMode,
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("trailing input")]
    Trailing,
}

/// A parse failure with the byte span it concerns.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at {start}..{end}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub start: usize,
    pub end: usize,
}

/// Parses `text`, accepting only atoms in `atoms`.
pub fn parse_formula(text: &str, atoms: &BTreeSet<String>) -> Result<Formula, ParseError> {
    parse_formula_with(text, atoms, &BTreeMap::new())
}

/// Like [`parse_formula`], with identifiers in `macros` expanded in place.
pub fn parse_formula_with(
    text: &str,
    atoms: &BTreeSet<String>,
    macros: &BTreeMap<String, Formula>,
) -> Result<Formula, ParseError> {
    let mut p = Parser {
        src: text,
        pos: 0,
        atoms,
        macros,
    };
    p.skip_ws();
    let f = p.tensor_expr()?;
    p.skip_ws();
    if p.pos < text.len() {
        let c = p.peek().unwrap_or(' ');
        let kind = if c == ')' {
            ParseErrorKind::Unbalanced
        } else {
            ParseErrorKind::Trailing
        };
        return Err(p.err(kind, p.pos, text.len()));
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
    atoms: &'a BTreeSet<String>,
    macros: &'a BTreeMap<String, Formula>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        Some(c)
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.bump();
        }
    }

    fn err(&self, kind: ParseErrorKind, start: usize, end: usize) -> ParseError {
        ParseError { kind, start, end }
    }

    fn tensor_expr(&mut self) -> Result<Formula, ParseError> {
        let start = self.pos;
        let left = self.slash_expr()?;
        self.skip_ws();
        if self.peek() != Some('*') {
            return Ok(left);
        }
        self.bump();
        self.skip_ws();
        let right = self.slash_expr()?;
        self.skip_ws();
        if self.peek() == Some('*') {
            return Err(self.err(ParseErrorKind::AmbiguousChain('*'), start, self.pos + 1));
        }
        Ok(Formula::tensor(left, right))
    }

    fn slash_expr(&mut self) -> Result<Formula, ParseError> {
        let start = self.pos;
        let left = self.unary()?;
        self.skip_ws();
        let op = match self.peek() {
            Some(c @ ('/' | '\\')) => c,
            _ => return Ok(left),
        };
        self.bump();
        self.skip_ws();
        let right = self.unary()?;
        self.skip_ws();
        if let Some(c @ ('/' | '\\')) = self.peek() {
            return Err(self.err(ParseErrorKind::AmbiguousChain(c), start, self.pos + 1));
        }
        Ok(if op == '/' {
            Formula::over(left, right)
        } else {
            Formula::under(left, right)
        })
    }

    fn mode(&mut self, close: char) -> Result<Mode, ParseError> {
        let start = self.pos;
        let tag = self.bump().ok_or_else(|| self.err(ParseErrorKind::UnexpectedEnd, start, start))?;
        let mode = Mode::from_tag(tag).ok_or_else(|| self.err(ParseErrorKind::BadMode, start, self.pos))?;
        match self.bump() {
            Some(c) if c == close => Ok(mode),
            Some(_) => Err(self.err(ParseErrorKind::BadMode, start, self.pos)),
            None => Err(self.err(ParseErrorKind::UnexpectedEnd, start, self.pos)),
        }
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        self.skip_ws();
        let start = self.pos;
        match self.peek() {
            None => Err(self.err(ParseErrorKind::UnexpectedEnd, start, start)),
            Some('<') => {
                self.bump();
                let m = self.mode('>')?;
                Ok(Formula::dia(m, self.unary()?))
            }
            Some('[') => {
                self.bump();
                let m = self.mode(']')?;
                Ok(Formula::boxed(m, self.unary()?))
            }
            Some('(') => {
                self.bump();
                self.skip_ws();
                let inner = self.tensor_expr()?;
                self.skip_ws();
                match self.bump() {
                    Some(')') => Ok(inner),
                    _ => Err(self.err(ParseErrorKind::Unbalanced, start, self.pos)),
                }
            }
            Some(')') => Err(self.err(ParseErrorKind::Unbalanced, start, start + 1)),
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                    self.bump();
                }
                let name = &self.src[start..self.pos];
                if let Some(body) = self.macros.get(name) {
                    return Ok(body.clone());
                }
                if !self.atoms.contains(name) {
                    return Err(self.err(
                        ParseErrorKind::UnknownAtom(name.to_string()),
                        start,
                        self.pos,
                    ));
                }
                Ok(Formula::atom(name))
            }
            Some(c) => Err(self.err(ParseErrorKind::UnexpectedChar(c), start, start + c.len_utf8())),
        }
    }
}
