//! Lexicon storage, the text format, and type-derivation replay.
//!
//! ```text
//! # comment
//! %atom gp = N* S
//! %macro iv = np\s
//! %schema without = [i](X\Y)/Z :: ctype=X,Y
//! %network that_base
//! out h:N* o:N g:N s:S*
//! spider N h o g
//! spider S s
//! %end
//! papers :: n
//! without^bc :: [i](iv\iv)/gp :: schema=without X=iv Y=iv Z=gp :: sem=without_bc
//! without^d :: ... :: sem=without_d :: derived-from=without^bc steps=geach@.(<x>[x]np);sdist@L
//! ```

mod ctype;
mod steps;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use thiserror::Error;

use crate::diagram::{frobenius_network, Diagram, NetworkError, Space, Wire, WireType};
use crate::formula::{parse_formula_with, Atom, Formula, ParseError};
use crate::translate::{interpret_type, AtomRegistry, TranslateError};

pub use ctype::is_ctype;
pub use steps::{
    calibrate, geach_expand, parse_steps, print_steps, prod_distribute, prod_distribute_premise,
    product_expand, replay, s_distribute, split_steps, Calibration, StepError, StepKind, TypeStep,
};

/// Where an entry's type comes from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Provenance {
    Base,
    /// A base entry obtained by instantiating a schema.
    Instance {
        schema: String,
        bindings: Vec<(String, Formula)>,
    },
    /// Replayed from another entry by authored steps.
    Derived { from: String, steps: Vec<TypeStep> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexEntry {
    /// The full key, e.g. `without^d`.
    pub word: String,
    pub syn: Formula,
    pub syn_text: String,
    /// Name of a network in the same lexicon.
    pub sem: Option<String>,
    pub provenance: Provenance,
    pub line: usize,
}

impl LexEntry {
    /// The word without its `^tag`.
    pub fn base_word(&self) -> &str {
        base_word(&self.word)
    }
}

pub fn base_word(key: &str) -> &str {
    key.split('^').next().unwrap_or(key)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Schema {
    pub name: String,
    pub body: Formula,
    pub vars: Vec<String>,
    pub ctype_vars: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexErrorKind {
    #[error("{0}")]
    Syntax(String),
    #[error("formula: {0}")]
    Formula(ParseError),
    #[error("duplicate entry `{0}`")]
    Duplicate(String),
    #[error("unknown network `{0}`")]
    UnknownNetwork(String),
    #[error("network: {0}")]
    Network(NetworkError),
    #[error("semantic boundary {found} does not match type interpretation {expected}")]
    Boundary { expected: String, found: String },
    #[error("{0}")]
    Translate(TranslateError),
    #[error("unknown base entry `{0}`")]
    UnknownBase(String),
    #[error("step {index} `{step}` failed: {error}")]
    Replay {
        index: usize,
        step: String,
        error: StepError,
    },
    #[error("replay diverges at step {index} `{step}`: produced {produced}, entry states {stated}")]
    Mismatch {
        index: usize,
        step: String,
        produced: String,
        stated: String,
    },
    #[error("unknown schema `{0}`")]
    UnknownSchema(String),
    #[error("schema instance gives {produced}, entry states {stated}")]
    SchemaMismatch { produced: String, stated: String },
    #[error("schema variable {var} bound to {formula}, which is not a conjoinable type")]
    NotConjoinable { var: String, formula: String },
}

/// A diagnostic tied to a line of the lexicon source.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct LexiconError {
    pub line: usize,
    pub kind: LexErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{} error(s) loading lexicon; first: {}", .0.len(), .0[0])]
pub struct LoadErrors(pub Vec<LexiconError>);

#[derive(Clone, Debug)]
pub struct Lexicon {
    registry: AtomRegistry,
    atom_names: BTreeSet<String>,
    macros: BTreeMap<String, Formula>,
    schemas: BTreeMap<String, Schema>,
    networks: BTreeMap<String, Diagram>,
    entries: Vec<LexEntry>,
    text: String,
}

impl Default for Lexicon {
    fn default() -> Self {
        let registry = AtomRegistry::standard();
        let atom_names = registry.iter().map(|(a, _)| a.name().to_string()).collect();
        Lexicon {
            registry,
            atom_names,
            macros: BTreeMap::new(),
            schemas: BTreeMap::new(),
            networks: BTreeMap::new(),
            entries: Vec::new(),
            text: String::new(),
        }
    }
}

fn err(line: usize, kind: LexErrorKind) -> LexiconError {
    LexiconError { line, kind }
}

fn syntax(line: usize, msg: impl Into<String>) -> LexiconError {
    err(line, LexErrorKind::Syntax(msg.into()))
}

fn substitute(f: &Formula, bind: &BTreeMap<&str, &Formula>) -> Formula {
    match f {
        Formula::Atom(a) => bind.get(a.name()).map(|g| (*g).clone()).unwrap_or_else(|| f.clone()),
        Formula::Tensor(a, b) => Formula::tensor(substitute(a, bind), substitute(b, bind)),
        Formula::Over(a, b) => Formula::over(substitute(a, bind), substitute(b, bind)),
        Formula::Under(a, b) => Formula::under(substitute(a, bind), substitute(b, bind)),
        Formula::Dia(m, a) => Formula::dia(*m, substitute(a, bind)),
        Formula::Box(m, a) => Formula::boxed(*m, substitute(a, bind)),
    }
}

fn parse_wires(text: &str) -> Option<WireType> {
    let mut out = WireType::empty();
    for tok in text.split_whitespace() {
        let (name, dual) = match tok.strip_suffix('*') {
            Some(n) => (n, true),
            None => (tok, false),
        };
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return None;
        }
        out.0.push(Wire {
            space: Space::new(name),
            dual,
        });
    }
    Some(out)
}

fn is_ident(s: &str) -> bool {
    !s.is_empty()
        && s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl Lexicon {
    pub fn new() -> Self {
        Lexicon::default()
    }

    pub fn registry(&self) -> &AtomRegistry {
        &self.registry
    }

    pub fn atoms(&self) -> &BTreeSet<String> {
        &self.atom_names
    }

    pub fn macros(&self) -> &BTreeMap<String, Formula> {
        &self.macros
    }

    pub fn schemas(&self) -> &BTreeMap<String, Schema> {
        &self.schemas
    }

    pub fn networks(&self) -> &BTreeMap<String, Diagram> {
        &self.networks
    }

    pub fn entries(&self) -> &[LexEntry] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn parse(&self, text: &str) -> Result<Formula, ParseError> {
        parse_formula_with(text, &self.atom_names, &self.macros)
    }

    /// Renders with macro abbreviations.
    pub fn show(&self, f: &Formula) -> String {
        f.abbreviate(&self.macros)
    }

    pub fn get(&self, key: &str) -> Option<&LexEntry> {
        self.entries.iter().find(|e| e.word == key)
    }

    /// `word^tag` matches exactly; a bare word matches every entry with
    /// that base word.
    pub fn lookup(&self, token: &str) -> Vec<&LexEntry> {
        if token.contains('^') {
            self.get(token).into_iter().collect()
        } else {
            self.entries.iter().filter(|e| e.base_word() == token).collect()
        }
    }

    /// The state diagram of an entry: its network, or a generator named by
    /// the full key whose outputs are the interpreted type.
    pub fn semantics(&self, entry: &LexEntry) -> Result<Diagram, TranslateError> {
        if let Some(name) = &entry.sem {
            if let Some(d) = self.networks.get(name) {
                return Ok(d.clone());
            }
        }
        let outputs = interpret_type(&entry.syn, &self.registry)?;
        Ok(Diagram::generator(&entry.word, WireType::empty(), outputs))
    }

    /// Intermediate rows of a derived entry, base first.
    pub fn derivation_rows(&self, entry: &LexEntry) -> Option<Result<Vec<Formula>, (usize, StepError)>> {
        match &entry.provenance {
            Provenance::Derived { from, steps } => {
                let base = self.get(from)?;
                Some(replay(&base.syn, steps))
            }
            _ => None,
        }
    }

    /// The lexicon source. Loading and saving reproduces the input byte for
    /// byte.
    pub fn save(&self) -> String {
        self.text.clone()
    }

    /// Appends a base entry, validating it like a loaded one.
    pub fn add_entry(&mut self, word: &str, syn: &str, sem: Option<&str>) -> Result<(), LoadErrors> {
        let mut line = String::new();
        line.push_str(word);
        line.push_str(" :: ");
        line.push_str(syn);
        if let Some(s) = sem {
            line.push_str(" :: sem=");
            line.push_str(s);
        }
        let mut text = self.text.clone();
        if !text.is_empty() && !text.ends_with('\n') {
            text.push('\n');
        }
        text.push_str(&line);
        text.push('\n');
        *self = load_lexicon_str(&text)?;
        Ok(())
    }
}

/// Parses and validates a lexicon, collecting every diagnostic.
pub fn load_lexicon_str(text: &str) -> Result<Lexicon, LoadErrors> {
    let mut lex = Lexicon {
        text: text.to_string(),
        ..Lexicon::default()
    };
    let mut errors = Vec::new();
    let lines: Vec<&str> = text.lines().collect();
    let mut i = 0;
    // Raw derived/instance data, resolved after all entries are read.
    let mut pending: Vec<(usize, Vec<String>)> = Vec::new();
    while i < lines.len() {
        let line = i + 1;
        let raw = lines[i];
        i += 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        if let Some(rest) = body.strip_prefix("%network") {
            let name = rest.trim();
            let start = i;
            while i < lines.len() && lines[i].trim() != "%end" {
                i += 1;
            }
            if i == lines.len() {
                errors.push(syntax(line, "unterminated %network block"));
                break;
            }
            let block: Vec<&str> = lines[start..i].to_vec();
            i += 1;
            if !is_ident(name) {
                errors.push(syntax(line, alloc::format!("bad network name `{name}`")));
                continue;
            }
            match frobenius_network(&block.join("\n")) {
                Ok(d) => {
                    lex.networks.insert(name.to_string(), d);
                }
                Err(e) => errors.push(err(line + network_line(&e), LexErrorKind::Network(e))),
            }
            continue;
        }
        if let Some(rest) = body.strip_prefix("%atom") {
            match rest.split_once('=') {
                Some((name, wires)) if is_ident(name.trim()) => match parse_wires(wires) {
                    Some(t) => {
                        let name = name.trim();
                        lex.registry.insert(Atom::new(name), t);
                        lex.atom_names.insert(name.to_string());
                    }
                    None => errors.push(syntax(line, alloc::format!("bad wire list `{}`", wires.trim()))),
                },
                _ => errors.push(syntax(line, "expected `%atom name = Space ...`")),
            }
            continue;
        }
        if let Some(rest) = body.strip_prefix("%macro") {
            match rest.split_once('=') {
                Some((name, f)) if is_ident(name.trim()) => match lex.parse(f.trim()) {
                    Ok(f) => {
                        lex.macros.insert(name.trim().to_string(), f);
                    }
                    Err(e) => errors.push(err(line, LexErrorKind::Formula(e))),
                },
                _ => errors.push(syntax(line, "expected `%macro name = formula`")),
            }
            continue;
        }
        if let Some(rest) = body.strip_prefix("%schema") {
            match parse_schema(&lex, rest) {
                Ok(s) => {
                    lex.schemas.insert(s.name.clone(), s);
                }
                Err(msg) => errors.push(match msg {
                    Ok(e) => err(line, LexErrorKind::Formula(e)),
                    Err(m) => syntax(line, m),
                }),
            }
            continue;
        }
        if body.starts_with('%') {
            errors.push(syntax(line, alloc::format!("unknown directive `{body}`")));
            continue;
        }
        let fields: Vec<&str> = body.split(" :: ").map(str::trim).collect();
        if fields.len() < 2 {
            errors.push(syntax(line, "expected `word :: formula`"));
            continue;
        }
        let word = fields[0];
        if word.is_empty() || word.contains(char::is_whitespace) {
            errors.push(syntax(line, alloc::format!("bad word `{word}`")));
            continue;
        }
        if lex.get(word).is_some() {
            errors.push(err(line, LexErrorKind::Duplicate(word.to_string())));
            continue;
        }
        let syn = match lex.parse(fields[1]) {
            Ok(f) => f,
            Err(e) => {
                errors.push(err(line, LexErrorKind::Formula(e)));
                continue;
            }
        };
        let mut sem = None;
        let mut extra = Vec::new();
        let mut ok = true;
        for field in &fields[2..] {
            if let Some(name) = field.strip_prefix("sem=") {
                sem = Some(name.to_string());
            } else if field.starts_with("derived-from=") || field.starts_with("schema=") {
                extra.push(field.to_string());
            } else {
                errors.push(syntax(line, alloc::format!("unknown field `{field}`")));
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        if !extra.is_empty() {
            pending.push((lex.entries.len(), extra));
        }
        lex.entries.push(LexEntry {
            word: word.to_string(),
            syn,
            syn_text: fields[1].to_string(),
            sem,
            provenance: Provenance::Base,
            line,
        });
    }
    for (idx, fields) in pending {
        let line = lex.entries[idx].line;
        for field in fields {
            match resolve_provenance(&lex, &lex.entries[idx], &field) {
                Ok(p) => lex.entries[idx].provenance = p,
                Err(kind) => errors.push(err(line, kind)),
            }
        }
    }
    for e in &lex.entries {
        if let Err(kind) = check_semantics(&lex, e) {
            errors.push(err(e.line, kind));
        }
    }
    if errors.is_empty() {
        Ok(lex)
    } else {
        errors.sort_by_key(|e| e.line);
        Err(LoadErrors(errors))
    }
}

fn network_line(e: &NetworkError) -> usize {
    match e {
        NetworkError::Syntax { line, .. }
        | NetworkError::Occurrences { line, .. }
        | NetworkError::SpaceMismatch { line, .. } => *line,
    }
}

fn parse_schema(lex: &Lexicon, rest: &str) -> Result<Schema, Result<ParseError, String>> {
    let mut parts = rest.split(" :: ");
    let head = parts.next().unwrap_or("");
    let (name, body) = head
        .split_once('=')
        .ok_or_else(|| Err(String::from("expected `%schema name = formula`")))?;
    let name = name.trim();
    if !is_ident(name) {
        return Err(Err(alloc::format!("bad schema name `{name}`")));
    }
    let vars: Vec<String> = body
        .split(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
        .filter(|t| t.len() == 1 && t.chars().all(|c| c.is_ascii_uppercase()))
        .map(|t| t.to_string())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut atoms = lex.atom_names.clone();
    atoms.extend(vars.iter().cloned());
    let body = parse_formula_with(body.trim(), &atoms, &lex.macros).map_err(Ok)?;
    let mut ctype_vars = Vec::new();
    for p in parts {
        let list = p
            .trim()
            .strip_prefix("ctype=")
            .ok_or_else(|| Err(alloc::format!("unknown schema field `{}`", p.trim())))?;
        for v in list.split(',') {
            let v = v.trim();
            if !vars.iter().any(|x| x == v) {
                return Err(Err(alloc::format!("`{v}` is not a variable of the schema")));
            }
            ctype_vars.push(v.to_string());
        }
    }
    Ok(Schema {
        name: name.to_string(),
        body,
        vars,
        ctype_vars,
    })
}

fn resolve_provenance(lex: &Lexicon, e: &LexEntry, field: &str) -> Result<Provenance, LexErrorKind> {
    let bad = |m: &str| LexErrorKind::Syntax(m.to_string());
    if let Some(rest) = field.strip_prefix("derived-from=") {
        let (from, steps_text) = rest
            .split_once(" steps=")
            .ok_or_else(|| bad("expected `derived-from=<word> steps=<list>`"))?;
        let from = from.trim();
        let base = lex.get(from).ok_or_else(|| LexErrorKind::UnknownBase(from.to_string()))?;
        let steps = parse_steps(steps_text.trim(), &lex.atom_names, &lex.macros).map_err(|e| match e {
            StepError::Syntax(s) => LexErrorKind::Syntax(alloc::format!("bad step `{s}`")),
            other => LexErrorKind::Syntax(alloc::format!("{other}")),
        })?;
        let rows = replay(&base.syn, &steps).map_err(|(index, error)| LexErrorKind::Replay {
            index,
            step: steps[index].to_string(),
            error,
        })?;
        let produced = rows.last().expect("nonempty");
        if *produced != e.syn {
            let index = steps.len().saturating_sub(1);
            return Err(LexErrorKind::Mismatch {
                index,
                step: steps.get(index).map(|s| s.to_string()).unwrap_or_default(),
                produced: lex.show(produced),
                stated: lex.show(&e.syn),
            });
        }
        return Ok(Provenance::Derived {
            from: from.to_string(),
            steps,
        });
    }
    let rest = field.strip_prefix("schema=").ok_or_else(|| bad("unknown field"))?;
    let mut toks = rest.split_whitespace();
    let name = toks.next().ok_or_else(|| bad("missing schema name"))?;
    let schema = lex
        .schemas
        .get(name)
        .ok_or_else(|| LexErrorKind::UnknownSchema(name.to_string()))?;
    let mut bindings = Vec::new();
    for t in toks {
        let (v, f) = t.split_once('=').ok_or_else(|| bad("expected `VAR=formula`"))?;
        if !schema.vars.iter().any(|x| x == v) {
            return Err(bad(&alloc::format!("`{v}` is not a variable of schema {name}")));
        }
        let f = lex.parse(f).map_err(LexErrorKind::Formula)?;
        bindings.push((v.to_string(), f));
    }
    for v in &schema.ctype_vars {
        let f = bindings
            .iter()
            .find(|(x, _)| x == v)
            .map(|(_, f)| f)
            .ok_or_else(|| bad(&alloc::format!("schema variable {v} is unbound")))?;
        if !is_ctype(f) {
            return Err(LexErrorKind::NotConjoinable {
                var: v.clone(),
                formula: lex.show(f),
            });
        }
    }
    let map: BTreeMap<&str, &Formula> = bindings.iter().map(|(v, f)| (v.as_str(), f)).collect();
    let produced = substitute(&schema.body, &map);
    if produced != e.syn {
        return Err(LexErrorKind::SchemaMismatch {
            produced: lex.show(&produced),
            stated: lex.show(&e.syn),
        });
    }
    Ok(Provenance::Instance {
        schema: name.to_string(),
        bindings,
    })
}

fn check_semantics(lex: &Lexicon, e: &LexEntry) -> Result<(), LexErrorKind> {
    let expected = interpret_type(&e.syn, &lex.registry).map_err(LexErrorKind::Translate)?;
    let Some(name) = &e.sem else {
        return Ok(());
    };
    let d = lex
        .networks
        .get(name)
        .ok_or_else(|| LexErrorKind::UnknownNetwork(name.clone()))?;
    if !d.inputs.is_empty() || d.outputs != expected {
        let mut found = alloc::format!("{}", d.outputs);
        if !d.inputs.is_empty() {
            found = alloc::format!("{} -> {}", d.inputs, d.outputs);
        }
        return Err(LexErrorKind::Boundary {
            expected: alloc::format!("{expected}"),
            found,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const SMALL: &str = "\
# a small lexicon
%macro iv = np\\s
%schema adv = X\\X :: ctype=X
%network that_base
out h:N* o:N g:N s:S*
spider N h o g
spider S s
%end
papers :: n
Bob :: np
rejected :: (np\\s)/np
immediately :: iv\\iv :: schema=adv X=iv
that :: (n\\n)/(s/<x>[x]np) :: sem=that_base
that^e :: (n\\n)/((np/<x>[x]np)*((np\\s)/<x>[x]np)) :: sem=that_e :: derived-from=that steps=pexpand@R.L(np*np\\s);pdist@R
%network that_e
out h:N* o:N g:N s:S* a:N b:N c:N*
spider N h o g b
spider S s
cap N a c
%end
";

    #[test]
    fn empty_file() {
        let lex = load_lexicon_str("").unwrap();
        assert!(lex.is_empty());
    }

    #[test]
    fn loads_and_round_trips() {
        let lex = load_lexicon_str(SMALL).unwrap_or_else(|e| panic!("{:?}", e.0));
        assert_eq!(lex.entries().len(), 6);
        assert_eq!(lex.save(), SMALL);
        assert_eq!(lex.lookup("that").len(), 2);
        assert_eq!(lex.lookup("that^e").len(), 1);
        let e = lex.get("that^e").unwrap();
        let rows = lex.derivation_rows(e).unwrap().unwrap();
        assert_eq!(lex.show(&rows[1]), "(n\\n)/((np*iv)/<x>[x]np)");
    }

    #[test]
    fn diagnostics_carry_lines() {
        let text = "papers :: n\nBob :: qq\nthat :: n/n :: sem=nowhere\n";
        let errs = load_lexicon_str(text).unwrap_err().0;
        assert_eq!(errs.len(), 2);
        assert_eq!(errs[0].line, 2);
        assert!(matches!(errs[0].kind, LexErrorKind::Formula(_)));
        assert_eq!(errs[1].line, 3);
        assert!(matches!(errs[1].kind, LexErrorKind::UnknownNetwork(_)));
    }

    #[test]
    fn replay_mismatch_names_step() {
        let text = "a :: n/np\nb :: (n/s)/(np/s) :: derived-from=a steps=geach@.(np)\n";
        let errs = load_lexicon_str(text).unwrap_err().0;
        assert!(matches!(&errs[0].kind, LexErrorKind::Mismatch { index: 0, step, .. } if step == "geach@.(np)"));
    }

    #[test]
    fn ctype_gate() {
        let text = "%schema adv = X\\X :: ctype=X\nbad :: np\\np :: schema=adv X=np\n";
        let errs = load_lexicon_str(text).unwrap_err().0;
        assert!(matches!(errs[0].kind, LexErrorKind::NotConjoinable { .. }));
    }

    #[test]
    fn boundary_is_checked() {
        let text = "%network one\nout a:S\nspider S a\n%end\nBob :: np :: sem=one\n";
        let errs = load_lexicon_str(text).unwrap_err().0;
        assert!(matches!(errs[0].kind, LexErrorKind::Boundary { .. }));
        assert_eq!(errs[0].line, 5);
    }

    #[test]
    fn add_entry_appends() {
        let mut lex = load_lexicon_str("papers :: n\n").unwrap();
        lex.add_entry("Bob", "np", None).unwrap();
        assert_eq!(lex.save(), "papers :: n\nBob :: np\n");
        assert!(lex.add_entry("Ann", "zz", None).is_err());
    }
}
