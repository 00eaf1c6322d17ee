#![allow(dead_code)]

use frobgap::suite::{find, SuiteCase};
use frobgap_core::diagram::Diagram;
use frobgap_core::lexicon::Lexicon;
use frobgap_core::prover::{derive_sentence, Bracketing, BracketingSpec, SentenceOutcome, SentenceProof};
use frobgap_core::translate::compile_sentence;
use frobgap_core::SearchConfig;

pub fn derive_case(lex: &Lexicon, c: &SuiteCase, cfg: &SearchConfig) -> SentenceOutcome {
    derive_bracketed(lex, c.bracketing, c.goal, cfg)
}

pub fn derive_bracketed(lex: &Lexicon, bracketing: &str, goal: &str, cfg: &SearchConfig) -> SentenceOutcome {
    let (tree, words) = Bracketing::parse(bracketing).unwrap();
    let goal = lex.parse(goal).unwrap();
    derive_sentence(lex, &words, &BracketingSpec::Explicit(tree), &goal, cfg).unwrap()
}

/// First proof of a suite sentence and its initial diagram.
pub fn compile_case(lex: &Lexicon, id: &str) -> (SentenceProof, Diagram) {
    let c = find(id).unwrap();
    let out = derive_case(lex, c, &SearchConfig::default());
    let p = out.proofs.into_iter().next().unwrap_or_else(|| panic!("{id} is not derivable"));
    let d = compile_sentence(lex, &p.entries, &p.term).unwrap();
    (p, d)
}
