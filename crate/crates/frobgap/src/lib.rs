//! File formats, JSON and DOT export, and the command-line driver for
//! `frobgap-core`.

pub mod cli;
pub mod dot;
pub mod json;
pub mod lexfile;
pub mod suite;

pub use lexfile::{bundled_lexicon, load_lexicon, BUNDLED_LEXICON};
