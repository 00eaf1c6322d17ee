//! Sentence derivation: lexical lookup, bracketings, and islands.
//!
//! Bracketings are written as nested pairs, `(papers (that (Bob rejected)))`;
//! `<i>(...)` marks an island and `word^tag` selects one lexical entry.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use super::search::{Derivation, SearchConfig, Structure};
use super::term::{Arrow, ProofTerm};
use super::{prove_sequent, ProveError};
use crate::formula::{Formula, Mode};
use crate::lexicon::{LexEntry, Lexicon};

/// Longest word string the bracketing search accepts.
pub const SEARCH_CUTOFF: usize = 10;

/// Upper limit on lexical-choice combinations tried per bracketing.
const MAX_COMBINATIONS: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Bracketing {
    Word(usize),
    Pair(Box<Bracketing>, Box<Bracketing>),
    Island(Mode, Box<Bracketing>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SentenceError {
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("bracketing: {0}")]
    Bracketing(String),
    #[error("{words} words exceed the bracketing search cutoff of {limit}")]
    TooLong { words: usize, limit: usize },
    #[error("bracketing has {found} leaves for {expected} words")]
    LeafCount { expected: usize, found: usize },
    #[error(transparent)]
    Prove(#[from] ProveError),
}

impl Bracketing {
    pub fn pair(a: Bracketing, b: Bracketing) -> Bracketing {
        Bracketing::Pair(Box::new(a), Box::new(b))
    }

    pub fn island(m: Mode, a: Bracketing) -> Bracketing {
        Bracketing::Island(m, Box::new(a))
    }

    pub fn leaves(&self) -> usize {
        match self {
            Bracketing::Word(_) => 1,
            Bracketing::Pair(a, b) => a.leaves() + b.leaves(),
            Bracketing::Island(_, a) => a.leaves(),
        }
    }

    fn leftmost(&self) -> usize {
        match self {
            Bracketing::Word(i) => *i,
            Bracketing::Pair(a, _) | Bracketing::Island(_, a) => a.leftmost(),
        }
    }

    /// Parses a bracketing, returning it with the word tokens in order.
    pub fn parse(text: &str) -> Result<(Bracketing, Vec<String>), SentenceError> {
        let mut p = BParser {
            toks: tokenize(text)?,
            pos: 0,
            words: Vec::new(),
        };
        let mut items = Vec::new();
        while p.pos < p.toks.len() {
            items.push(p.item()?);
        }
        let tree = match items.len() {
            1 => items.pop().expect("one item"),
            2 => {
                let b = items.pop().expect("two items");
                Bracketing::pair(items.pop().expect("two items"), b)
            }
            0 => return Err(SentenceError::Bracketing("empty bracketing".to_string())),
            n => {
                return Err(SentenceError::Bracketing(alloc::format!(
                    "{n} constituents at top level; group them into pairs"
                )))
            }
        };
        Ok((tree, p.words))
    }

    /// Renders with the given word tokens.
    pub fn render(&self, words: &[String]) -> String {
        let mut s = String::new();
        self.write(words, &mut s);
        s
    }

    fn write(&self, words: &[String], s: &mut String) {
        match self {
            Bracketing::Word(i) => s.push_str(&words[*i]),
            Bracketing::Pair(a, b) => {
                s.push('(');
                a.write(words, s);
                s.push(' ');
                b.write(words, s);
                s.push(')');
            }
            Bracketing::Island(m, a) => {
                s.push('<');
                s.push(m.tag());
                s.push('>');
                if let Bracketing::Word(_) = **a {
                    s.push('(');
                    a.write(words, s);
                    s.push(')');
                } else {
                    a.write(words, s);
                }
            }
        }
    }

    /// All binary trees over `lo..hi`, right-branching first.
    pub fn all_over(lo: usize, hi: usize) -> Vec<Bracketing> {
        if hi - lo == 1 {
            return alloc::vec![Bracketing::Word(lo)];
        }
        let mut out = Vec::new();
        for split in lo + 1..hi {
            let lefts = Bracketing::all_over(lo, split);
            let rights = Bracketing::all_over(split, hi);
            for l in &lefts {
                for r in &rights {
                    out.push(Bracketing::pair(l.clone(), r.clone()));
                }
            }
        }
        out
    }

    fn structure(&self, entries: &[&LexEntry]) -> Structure {
        match self {
            Bracketing::Word(i) => Structure::unfold(&entries[*i].syn),
            Bracketing::Pair(a, b) => Structure::pair(a.structure(entries), b.structure(entries)),
            Bracketing::Island(m, a) => Structure::bracket(*m, a.structure(entries)),
        }
    }

    /// Wraps each constituent headed by an island word in a mode-i bracket:
    /// for a word whose type has `k` rightward arguments before a mode-i box,
    /// the ancestor reached by `k` right-argument pairings.
    fn with_auto_islands(&self, entries: &[&LexEntry]) -> Bracketing {
        fn go(b: &Bracketing, entries: &[&LexEntry]) -> Bracketing {
            let inner = match b {
                Bracketing::Word(_) => b.clone(),
                Bracketing::Pair(l, r) => Bracketing::pair(go(l, entries), go(r, entries)),
                Bracketing::Island(m, a) => return Bracketing::island(*m, go(a, entries)),
            };
            let head = b.leftmost();
            match island_depth(&entries[head].syn) {
                Some(k) if k > 0 && left_depth(b, head) == Some(k) => Bracketing::island(Mode::I, inner),
                _ => inner,
            }
        }
        go(self, entries)
    }
}

/// Number of `/` arguments above a mode-i box on the result spine.
fn island_depth(f: &Formula) -> Option<usize> {
    match f {
        Formula::Box(Mode::I, _) => Some(0),
        Formula::Over(res, _) => island_depth(res).map(|k| k + 1),
        _ => None,
    }
}

/// How many left steps lead from `b` down to word `w` along the left spine.
fn left_depth(b: &Bracketing, w: usize) -> Option<usize> {
    match b {
        Bracketing::Word(i) if *i == w => Some(0),
        Bracketing::Pair(l, _) => left_depth(l, w).map(|k| k + 1),
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Open,
    Close,
    Mark(Mode),
    Word(String),
}

fn tokenize(text: &str) -> Result<Vec<Tok>, SentenceError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some((i, c)) = chars.next() {
        match c {
            c if c.is_whitespace() => {}
            '(' => out.push(Tok::Open),
            ')' => out.push(Tok::Close),
            '<' => {
                let tag = chars.next().map(|(_, c)| c);
                let close = chars.next().map(|(_, c)| c);
                match (tag.and_then(Mode::from_tag), close) {
                    (Some(m), Some('>')) => out.push(Tok::Mark(m)),
                    _ => return Err(SentenceError::Bracketing(alloc::format!("bad mode marker at {i}"))),
                }
            }
            _ => {
                let mut w = String::new();
                w.push(c);
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_whitespace() || matches!(d, '(' | ')' | '<') {
                        break;
                    }
                    w.push(d);
                    chars.next();
                }
                out.push(Tok::Word(w));
            }
        }
    }
    Ok(out)
}

struct BParser {
    toks: Vec<Tok>,
    pos: usize,
    words: Vec<String>,
}

impl BParser {
    fn item(&mut self) -> Result<Bracketing, SentenceError> {
        let bad = |m: &str| SentenceError::Bracketing(m.to_string());
        match self.toks.get(self.pos).cloned() {
            Some(Tok::Word(w)) => {
                self.pos += 1;
                self.words.push(w);
                Ok(Bracketing::Word(self.words.len() - 1))
            }
            Some(Tok::Mark(m)) => {
                self.pos += 1;
                Ok(Bracketing::island(m, self.item()?))
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let mut items = Vec::new();
                while self.toks.get(self.pos) != Some(&Tok::Close) {
                    if self.pos >= self.toks.len() {
                        return Err(bad("unbalanced parentheses"));
                    }
                    items.push(self.item()?);
                }
                self.pos += 1;
                match items.len() {
                    1 => Ok(items.pop().expect("one item")),
                    2 => {
                        let b = items.pop().expect("two");
                        Ok(Bracketing::pair(items.pop().expect("two"), b))
                    }
                    _ => Err(bad("each group must hold one or two constituents")),
                }
            }
            Some(Tok::Close) => Err(bad("unbalanced parentheses")),
            None => Err(bad("unexpected end")),
        }
    }
}

/// Which bracketings to try.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BracketingSpec {
    Explicit(Bracketing),
    /// Every binary bracketing, right-branching first, with islands placed
    /// around constituents headed by island words.
    Search,
}

#[derive(Clone, Debug)]
pub struct SentenceProof {
    pub bracketing: Bracketing,
    /// Lexicon keys chosen for each word.
    pub entries: Vec<String>,
    /// `⊗`-tree of the lexical types (with islands as diamonds) → goal.
    pub goal: Arrow,
    pub term: ProofTerm,
    pub derivation: Derivation,
}

#[derive(Clone, Debug, Default)]
pub struct SentenceOutcome {
    pub proofs: Vec<SentenceProof>,
    pub attempts: usize,
    pub bounded: bool,
    /// Deepest failed subgoal over all attempts.
    pub deepest_failure: Option<String>,
}

impl SentenceOutcome {
    pub fn is_derivable(&self) -> bool {
        !self.proofs.is_empty()
    }
}

impl fmt::Display for Bracketing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = (0..=self.max_index()).map(|i| alloc::format!("w{i}")).collect();
        f.write_str(&self.render(&words))
    }
}

impl Bracketing {
    fn max_index(&self) -> usize {
        match self {
            Bracketing::Word(i) => *i,
            Bracketing::Pair(a, b) => a.max_index().max(b.max_index()),
            Bracketing::Island(_, a) => a.max_index(),
        }
    }
}

fn combinations<'a>(cands: &[Vec<&'a LexEntry>]) -> Vec<Vec<&'a LexEntry>> {
    let mut out: Vec<Vec<&LexEntry>> = alloc::vec![Vec::new()];
    for c in cands {
        let mut next = Vec::new();
        for prefix in &out {
            for e in c {
                if next.len() >= MAX_COMBINATIONS {
                    break;
                }
                let mut p = prefix.clone();
                p.push(*e);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Derives `words → goal`. Every returned term validates against its
/// `goal` arrow.
pub fn derive_sentence(
    lexicon: &Lexicon,
    words: &[String],
    spec: &BracketingSpec,
    goal: &Formula,
    cfg: &SearchConfig,
) -> Result<SentenceOutcome, SentenceError> {
    let mut cands = Vec::new();
    for w in words {
        let found = lexicon.lookup(w);
        if found.is_empty() {
            return Err(SentenceError::UnknownWord(w.clone()));
        }
        cands.push(found);
    }
    let trees = match spec {
        BracketingSpec::Explicit(b) => {
            if b.leaves() != words.len() {
                return Err(SentenceError::LeafCount {
                    expected: words.len(),
                    found: b.leaves(),
                });
            }
            alloc::vec![(b.clone(), false)]
        }
        BracketingSpec::Search => {
            if words.len() > SEARCH_CUTOFF {
                return Err(SentenceError::TooLong {
                    words: words.len(),
                    limit: SEARCH_CUTOFF,
                });
            }
            if words.is_empty() {
                return Err(SentenceError::Bracketing("no words".to_string()));
            }
            Bracketing::all_over(0, words.len()).into_iter().map(|b| (b, true)).collect()
        }
    };
    let mut out = SentenceOutcome::default();
    let mut deepest: Option<(usize, String)> = None;
    for (tree, auto) in trees {
        for choice in combinations(&cands) {
            let b = if auto { tree.with_auto_islands(&choice) } else { tree.clone() };
            let ant = b.structure(&choice);
            let arrow = Arrow::new(ant.formula(), goal.clone());
            let res = prove_sequent(ant, &arrow, cfg)?;
            out.attempts += 1;
            out.bounded |= res.bounded;
            if let Some(f) = res.deepest_failure {
                let depth = f.len();
                if deepest.as_ref().is_none_or(|d| depth > d.0) {
                    deepest = Some((depth, f));
                }
            }
            for (term, derivation) in res.proofs.into_iter().zip(res.derivations) {
                out.proofs.push(SentenceProof {
                    bracketing: b.clone(),
                    entries: choice.iter().map(|e| e.word.clone()).collect(),
                    goal: arrow.clone(),
                    term,
                    derivation,
                });
            }
        }
    }
    if out.proofs.is_empty() {
        out.deepest_failure = deepest.map(|d| d.1);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::load_lexicon_str;

    const LEX: &str = "\
%macro iv = np\\s
papers :: n
Bob :: np
rejected :: (np\\s)/np
immediately :: iv\\iv
that :: (n\\n)/(s/<x>[x]np)
the :: np/n
proposal :: n
left :: (np\\s)/np
room :: n
without :: [i](iv\\iv)/gp
closing :: gp/np
";

    fn words(s: &str) -> Vec<String> {
        s.split_whitespace().map(|w| w.to_string()).collect()
    }

    #[test]
    fn parse_and_render() {
        let (b, w) = Bracketing::parse("papers (that (Bob (rejected immediately)))").unwrap();
        assert_eq!(w.len(), 5);
        assert_eq!(b.render(&w), "(papers (that (Bob (rejected immediately))))");
        let (b, w) = Bracketing::parse("(Bob ((left (the room)) <i>(without closing)))").unwrap();
        assert_eq!(b.render(&w), "(Bob ((left (the room)) <i>(without closing)))");
        assert!(Bracketing::parse("(a b c)").is_err());
        assert!(Bracketing::parse("(a b").is_err());
    }

    #[test]
    fn catalan_counts() {
        let counts: Vec<usize> = (1..=6).map(|n| Bracketing::all_over(0, n).len()).collect();
        assert_eq!(counts, [1, 1, 2, 5, 14, 42]);
        let first = &Bracketing::all_over(0, 3)[0];
        assert_eq!(first.render(&words("a b c")), "(a (b c))");
    }

    #[test]
    fn relative_clause_with_gap() {
        let lex = load_lexicon_str(LEX).unwrap();
        let (b, w) = Bracketing::parse("papers (that (Bob (rejected immediately)))").unwrap();
        let n = Formula::atom("n");
        let out = derive_sentence(&lex, &w, &BracketingSpec::Explicit(b), &n, &SearchConfig::default()).unwrap();
        assert!(out.is_derivable());
        for p in &out.proofs {
            assert_eq!(p.term.validate().unwrap(), p.goal);
        }
    }

    #[test]
    fn overt_object_blocks_gap() {
        let lex = load_lexicon_str(LEX).unwrap();
        let (b, w) = Bracketing::parse("papers (that (Bob (rejected (the proposal))))").unwrap();
        let out = derive_sentence(&lex, &w, &BracketingSpec::Explicit(b), &Formula::atom("n"), &SearchConfig::default())
            .unwrap();
        assert!(!out.is_derivable());
        assert!(out.deepest_failure.is_some());
    }

    #[test]
    fn search_places_islands() {
        let lex = load_lexicon_str(LEX).unwrap();
        let w = words("Bob left the room without closing the room");
        let out = derive_sentence(&lex, &w, &BracketingSpec::Search, &Formula::atom("s"), &SearchConfig::default())
            .unwrap();
        assert!(out.is_derivable());
        assert!(out.proofs.iter().all(|p| p.bracketing.render(&w).contains("<i>(without")));
    }

    #[test]
    fn unknown_word() {
        let lex = load_lexicon_str(LEX).unwrap();
        let err = derive_sentence(
            &lex,
            &words("papers zzz"),
            &BracketingSpec::Search,
            &Formula::atom("n"),
            &SearchConfig::default(),
        )
        .unwrap_err();
        assert_eq!(err, SentenceError::UnknownWord("zzz".to_string()));
    }
}
