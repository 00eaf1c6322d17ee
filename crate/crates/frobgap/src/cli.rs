//! The `frobgap` command line.
//!
//! Exit codes: 0 derivable (or success), 1 not derivable or a failed check,
//! 2 usage errors, unknown words and missing tensors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use frobgap_core::diagram::{normalize, Diagram};
use frobgap_core::lexicon::{parse_steps, replay, Lexicon, Provenance};
use frobgap_core::prover::{derive_sentence, Bracketing, BracketingSpec, SentenceError, SentenceOutcome, SentenceProof};
use frobgap_core::tensor::{
    closed_form_parasitic_adjunct, eval_diagram, oracle_cost, oracle_eval, rel_error, Tensor, TensorError, TensorStore, ORACLE_LIMIT,
};
use frobgap_core::translate::{compile_sentence, extract_axiom_links, TranslateError};
use frobgap_core::{Formula, SearchConfig};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::dot::diagram_to_dot;
use crate::json::{diagram_to_json, linking_to_json, proof_to_json, store_from_json, tensor_to_json, versioned, JsonError};
use crate::lexfile::{bundled_lexicon, load_lexicon, LexFileError};
use crate::suite::SUITE;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_DERIVABLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Agreement required of `--check` cross-evaluations.
pub const CHECK_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "frobgap", version, about = "Parse, compile and evaluate sentences with a modal Lambek grammar")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Search for derivations of a sentence.
    Parse(SentenceArgs),
    /// Write the initial and normalized diagrams of a derivable sentence.
    Compile {
        #[command(flatten)]
        sentence: SentenceArgs,
        /// Directory for the diagram files.
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// File name stem.
        #[arg(long, default_value = "diagram")]
        name: String,
    },
    /// Evaluate a sentence's normalized diagram on a tensor store.
    Eval {
        #[command(flatten)]
        sentence: SentenceArgs,
        /// Tensor store JSON; without it tensors are drawn from `--seed`.
        #[arg(long)]
        store: Option<PathBuf>,
    },
    /// Replay the type derivation of a lexical entry.
    DeriveType {
        /// Entry key, e.g. `without^d`, or the base entry when `--steps` is given.
        word: String,
        /// `;`-separated steps applied to `word`'s type instead of its recorded ones.
        #[arg(long)]
        steps: Option<String>,
        #[arg(long)]
        lexicon: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SentenceArgs {
    /// Words of the sentence; bracketings are searched.
    pub words: Vec<String>,
    /// Explicit bracketing, e.g. `papers (that (Bob rejected))`.
    #[arg(long)]
    pub bracketing: Option<String>,
    /// Run every built-in suite sentence (parse only).
    #[arg(long)]
    pub suite: bool,
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Goal type.
    #[arg(long, default_value = "s")]
    pub goal: String,
    #[arg(long, default_value_t = 40)]
    pub max_size: usize,
    /// Return every derivation up to the result cap.
    #[arg(long)]
    pub all: bool,
    /// Space dimensions, e.g. `N=4,S=3`.
    #[arg(long, default_value = "N=4,S=3", value_parser = parse_dims)]
    pub dims: BTreeMap<String, usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
    #[arg(long)]
    pub dot: bool,
    /// Cross-check evaluation against exhaustive summation and any closed form.
    #[arg(long)]
    pub check: bool,
    /// Worker threads for `--suite`.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

pub fn parse_dims(s: &str) -> Result<BTreeMap<String, usize>, String> {
    let mut out = BTreeMap::new();
    for part in s.split(',').filter(|p| !p.trim().is_empty()) {
        let (k, v) = part.split_once('=').ok_or_else(|| format!("expected NAME=DIM, found `{part}`"))?;
        let d: usize = v.trim().parse().map_err(|_| format!("bad dimension `{v}`"))?;
        if d == 0 {
            return Err(format!("dimension of {k} must be positive"));
        }
        out.insert(k.trim().to_string(), d);
    }
    Ok(out)
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lexicon(#[from] LexFileError),
    #[error(transparent)]
    Sentence(#[from] SentenceError),
    #[error(transparent)]
    Translate(#[from] TranslateError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
    #[error(transparent)]
    Json(#[from] JsonError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// A sentence to derive.
#[derive(Clone, Debug)]
pub struct Request {
    pub words: Vec<String>,
    pub spec: BracketingSpec,
    pub goal: Formula,
}

/// Runs `cli`, writing reports to `out` and diagnostics to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let res = match &cli.command {
        Command::Parse(a) if a.suite => cmd_suite(a, out),
        Command::Parse(a) => cmd_parse(a, out),
        Command::Compile { sentence, out_dir, name } => cmd_compile(sentence, out_dir, name, out),
        Command::Eval { sentence, store } => cmd_eval(sentence, store.as_deref(), out),
        Command::DeriveType {
            word,
            steps,
            lexicon,
            json,
        } => cmd_derive_type(word, steps.as_deref(), lexicon.as_deref(), *json, out),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn lexicon_from(path: Option<&Path>) -> Result<Lexicon, CliError> {
    Ok(match path {
        Some(p) => load_lexicon(p)?,
        None => bundled_lexicon(),
    })
}

fn search_config(a: &SentenceArgs) -> Result<SearchConfig, CliError> {
    if a.max_size == 0 {
        return Err(CliError::Usage("--max-size must be positive".into()));
    }
    Ok(SearchConfig {
        max_proof_size: a.max_size,
        find_all: a.all,
        ..SearchConfig::default()
    })
}

fn request(a: &SentenceArgs, lex: &Lexicon) -> Result<Request, CliError> {
    let goal = lex
        .parse(&a.goal)
        .map_err(|e| CliError::Usage(format!("goal `{}`: {e}", a.goal)))?;
    match (&a.bracketing, a.words.is_empty()) {
        (Some(b), true) => {
            let (tree, words) = Bracketing::parse(b)?;
            Ok(Request {
                words,
                spec: BracketingSpec::Explicit(tree),
                goal,
            })
        }
        (None, false) => Ok(Request {
            words: a.words.clone(),
            spec: BracketingSpec::Search,
            goal,
        }),
        (Some(_), false) => Err(CliError::Usage("give either words or --bracketing, not both".into())),
        (None, true) => Err(CliError::Usage("no sentence given".into())),
    }
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|source| CliError::Io {
        path: PathBuf::from("<stdout>"),
        source,
    })
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn proof_json(lex: &Lexicon, words: &[String], p: &SentenceProof) -> Value {
    json!({
        "bracketing": p.bracketing.render(words),
        "entries": p.entries,
        "sequent": format!("{} -> {}", lex.show(&p.goal.lhs), lex.show(&p.goal.rhs)),
        "size": p.term.size(),
        "proof": proof_to_json(&p.term),
    })
}

/// The JSON report of a parse.
pub fn parse_report(lex: &Lexicon, req: &Request, outcome: &SentenceOutcome) -> Value {
    versioned(json!({
        "command": "parse",
        "words": req.words,
        "goal": lex.show(&req.goal),
        "derivable": outcome.is_derivable(),
        "attempts": outcome.attempts,
        "bounded": outcome.bounded,
        "proofs": outcome.proofs.iter().map(|p| proof_json(lex, &req.words, p)).collect::<Vec<_>>(),
        "deepest_failure": outcome.deepest_failure,
    }))
}

fn parse_text(lex: &Lexicon, req: &Request, outcome: &SentenceOutcome) -> String {
    let mut s = String::new();
    if outcome.is_derivable() {
        for p in &outcome.proofs {
            s.push_str(&format!(
                "derivable: {}  [{}]  proof size {}\n",
                p.bracketing.render(&req.words),
                p.entries.join(" "),
                p.term.size()
            ));
        }
    } else {
        s.push_str(&format!(
            "not derivable: {} => {} ({} attempt(s){})\n",
            req.words.join(" "),
            lex.show(&req.goal),
            outcome.attempts,
            if outcome.bounded { ", search bounded" } else { "" }
        ));
        if let Some(f) = &outcome.deepest_failure {
            s.push_str(&format!("deepest failed subgoal: {f}\n"));
        }
    }
    s
}

fn derive(a: &SentenceArgs, lex: &Lexicon) -> Result<(Request, SentenceOutcome), CliError> {
    let req = request(a, lex)?;
    let cfg = search_config(a)?;
    let outcome = derive_sentence(lex, &req.words, &req.spec, &req.goal, &cfg)?;
    Ok((req, outcome))
}

pub fn cmd_parse(a: &SentenceArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let lex = lexicon_from(a.lexicon.as_deref())?;
    let (req, outcome) = derive(a, &lex)?;
    let text = if a.json {
        pretty(&parse_report(&lex, &req, &outcome))
    } else {
        parse_text(&lex, &req, &outcome)
    };
    write_out(out, &text)?;
    Ok(if outcome.is_derivable() { EXIT_OK } else { EXIT_NOT_DERIVABLE })
}

/// Parses every suite sentence, in parallel over `--jobs` threads. Exits 0
/// when every outcome matches its expectation.
pub fn cmd_suite(a: &SentenceArgs, out: &mut dyn Write) -> Result<i32, CliError> {
    let lex = lexicon_from(a.lexicon.as_deref())?;
    let cfg = search_config(a)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs.max(1))
        .build()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let results: Vec<Result<(bool, SentenceOutcome), CliError>> = pool.install(|| {
        SUITE
            .par_iter()
            .map(|c| {
                let (tree, words) = Bracketing::parse(c.bracketing)?;
                let goal = lex
                    .parse(c.goal)
                    .map_err(|e| CliError::Usage(format!("goal `{}`: {e}", c.goal)))?;
                let o = derive_sentence(&lex, &words, &BracketingSpec::Explicit(tree), &goal, &cfg)?;
                Ok((o.is_derivable() == c.derivable, o))
            })
            .collect()
    });
    let mut all_ok = true;
    let mut rows = Vec::new();
    let mut text = String::new();
    for (c, r) in SUITE.iter().zip(results) {
        let (ok, o) = r?;
        all_ok &= ok;
        text.push_str(&format!(
            "{:<4} {:<26} derivable={:<5} expected={:<5} {}\n",
            if ok { "ok" } else { "FAIL" },
            c.id,
            o.is_derivable(),
            c.derivable,
            c.bracketing
        ));
        rows.push(json!({
            "id": c.id,
            "bracketing": c.bracketing,
            "goal": c.goal,
            "derivable": o.is_derivable(),
            "expected": c.derivable,
        }));
    }
    if a.json {
        text = pretty(&versioned(json!({"command": "suite", "results": rows})));
    }
    write_out(out, &text)?;
    Ok(if all_ok { EXIT_OK } else { EXIT_NOT_DERIVABLE })
}

/// The first derivation of a sentence and its compiled diagram.
pub fn compile_first(a: &SentenceArgs, lex: &Lexicon) -> Result<Option<(SentenceProof, Diagram, Request)>, CliError> {
    let (req, outcome) = derive(a, lex)?;
    match outcome.proofs.into_iter().next() {
        Some(p) => {
            let d = compile_sentence(lex, &p.entries, &p.term)?;
            Ok(Some((p, d, req)))
        }
        None => Ok(None),
    }
}

fn not_derivable(a: &SentenceArgs, lex: &Lexicon, out: &mut dyn Write) -> Result<i32, CliError> {
    let (req, outcome) = derive(a, lex)?;
    let text = if a.json {
        pretty(&parse_report(lex, &req, &outcome))
    } else {
        parse_text(lex, &req, &outcome)
    };
    write_out(out, &text)?;
    Ok(EXIT_NOT_DERIVABLE)
}

pub fn cmd_compile(a: &SentenceArgs, dir: &Path, name: &str, out: &mut dyn Write) -> Result<i32, CliError> {
    let lex = lexicon_from(a.lexicon.as_deref())?;
    let Some((p, initial, req)) = compile_first(a, &lex)? else {
        return not_derivable(a, &lex, out);
    };
    let normal = normalize(&initial);
    std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
        path: dir.to_path_buf(),
        source,
    })?;
    let mut written = Vec::new();
    for (tag, d) in [("initial", &initial), ("normal", &normal)] {
        let path = dir.join(format!("{name}.{tag}.json"));
        write_file(&path, &pretty(&diagram_to_json(d)))?;
        written.push(path);
        if a.dot {
            let path = dir.join(format!("{name}.{tag}.dot"));
            write_file(&path, &diagram_to_dot(d, &format!("{name} {tag}")))?;
            written.push(path);
        }
    }
    let links = extract_axiom_links(&p.term)?;
    let text = if a.json {
        pretty(&versioned(json!({
            "command": "compile",
            "bracketing": p.bracketing.render(&req.words),
            "entries": p.entries,
            "initial_size": initial.size(),
            "normal_size": normal.size(),
            "files": written.iter().map(|w| w.display().to_string()).collect::<Vec<_>>(),
            "linking": linking_to_json(&links),
        })))
    } else {
        let mut s = format!(
            "compiled {}: {} nodes, normalized to {}\n",
            p.bracketing.render(&req.words),
            initial.nodes.len(),
            normal.nodes.len()
        );
        for w in &written {
            s.push_str(&format!("wrote {}\n", w.display()));
        }
        s
    };
    write_out(out, &text)?;
    Ok(EXIT_OK)
}

pub type ClosedForm = fn(&TensorStore) -> Result<Tensor, TensorError>;

/// Entry sequences with a registered closed form.
pub fn closed_form_for(entries: &[String]) -> Option<ClosedForm> {
    const PAPERS_REJECTED_WITHOUT_READING: [&str; 6] = ["papers", "that", "Bob", "rejected", "without^d", "reading"];
    if entries.iter().map(String::as_str).eq(PAPERS_REJECTED_WITHOUT_READING) {
        Some(closed_form_parasitic_adjunct)
    } else {
        None
    }
}

fn load_store(a: &SentenceArgs, path: Option<&Path>) -> Result<TensorStore, CliError> {
    match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|source| CliError::Io {
                path: p.to_path_buf(),
                source,
            })?;
            let v: Value = serde_json::from_str(&text).map_err(JsonError::from)?;
            Ok(store_from_json(&v)?)
        }
        None => {
            let dims: Vec<(&str, usize)> = a.dims.iter().map(|(k, v)| (k.as_str(), *v)).collect();
            Ok(TensorStore::seeded(&dims, a.seed))
        }
    }
}

pub fn cmd_eval(a: &SentenceArgs, store: Option<&Path>, out: &mut dyn Write) -> Result<i32, CliError> {
    let lex = lexicon_from(a.lexicon.as_deref())?;
    let store = load_store(a, store)?;
    let Some((p, initial, req)) = compile_first(a, &lex)? else {
        return not_derivable(a, &lex, out);
    };
    let normal = normalize(&initial);
    let value = eval_diagram(&normal, &store)?;
    let mut checks = Vec::new();
    let mut passed = true;
    if a.check {
        let init = eval_diagram(&initial, &store)?;
        let e = rel_error(&init, &value);
        passed &= e <= CHECK_TOLERANCE;
        checks.push(json!({"against": "initial diagram", "rel_error": e}));
        let cost = oracle_cost(&normal, &store)?;
        if cost <= ORACLE_LIMIT {
            let e = rel_error(&value, &oracle_eval(&normal, &store)?);
            passed &= e <= CHECK_TOLERANCE;
            checks.push(json!({"against": "exhaustive summation", "rel_error": e}));
        } else {
            checks.push(json!({"against": "exhaustive summation", "skipped": format!("{cost} terms")}));
        }
        if let Some(cf) = closed_form_for(&p.entries) {
            let e = rel_error(&value, &cf(&store)?);
            passed &= e <= CHECK_TOLERANCE;
            checks.push(json!({"against": "closed form", "rel_error": e}));
        }
    }
    let text = if a.json {
        pretty(&versioned(json!({
            "command": "eval",
            "bracketing": p.bracketing.render(&req.words),
            "entries": p.entries,
            "result": tensor_to_json(&value),
            "checks": checks,
            "passed": passed,
        })))
    } else {
        let mut s = format!("{}\n{value}\n", p.bracketing.render(&req.words));
        for c in &checks {
            let what = c["against"].as_str().unwrap_or_default();
            match c.get("rel_error") {
                Some(e) => s.push_str(&format!("check {what}: rel error {e}\n")),
                None => s.push_str(&format!("check {what}: skipped ({})\n", c["skipped"].as_str().unwrap_or_default())),
            }
        }
        s
    };
    write_out(out, &text)?;
    Ok(if passed { EXIT_OK } else { EXIT_NOT_DERIVABLE })
}

pub fn cmd_derive_type(
    word: &str,
    steps: Option<&str>,
    lexicon: Option<&Path>,
    as_json: bool,
    out: &mut dyn Write,
) -> Result<i32, CliError> {
    let lex = lexicon_from(lexicon)?;
    let entry = lex
        .get(word)
        .ok_or_else(|| CliError::Usage(format!("no lexicon entry `{word}`")))?;
    let (base, steps) = match (steps, &entry.provenance) {
        (Some(text), _) => {
            let parsed = parse_steps(text, lex.atoms(), lex.macros()).map_err(|e| CliError::Usage(e.to_string()))?;
            (entry.clone(), parsed)
        }
        (None, Provenance::Derived { from, steps }) => {
            let base = lex
                .get(from)
                .ok_or_else(|| CliError::Usage(format!("no lexicon entry `{from}`")))?;
            (base.clone(), steps.clone())
        }
        (None, _) => return Err(CliError::Usage(format!("`{word}` has no recorded derivation; pass --steps"))),
    };
    let rows = replay(&base.syn, &steps).map_err(|(i, e)| CliError::Usage(format!("step {} `{}`: {e}", i + 1, steps[i])))?;
    let text = if as_json {
        pretty(&versioned(json!({
            "command": "derive-type",
            "base": base.word,
            "steps": steps.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "rows": rows.iter().map(|r| lex.show(r)).collect::<Vec<_>>(),
        })))
    } else {
        let mut s = format!("{:<24} {}\n", base.word, lex.show(&rows[0]));
        for (st, r) in steps.iter().zip(&rows[1..]) {
            s.push_str(&format!("{:<24} {}\n", st.to_string(), lex.show(r)));
        }
        s
    };
    write_out(out, &text)?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_flag() {
        let d = parse_dims("N=4,S=3").unwrap();
        assert_eq!(d["N"], 4);
        assert_eq!(d["S"], 3);
        assert!(parse_dims("N=0").is_err());
        assert!(parse_dims("N").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
