//! Core of the frobgap grammar engine.
//!
//! Proof search in the non-associative Lambek calculus with control
//! modalities, a lexicon with derived polymorphic types, string diagrams for
//! compact closed categories with Frobenius algebras, and dense tensor
//! evaluation of those diagrams. Everything here needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod diagram;
pub mod formula;
pub mod lexicon;
pub mod prover;
pub mod tensor;
pub mod translate;

pub use formula::{parse_formula, print_formula, Atom, Formula, Mode, Polarity};
pub use prover::{prove, Arrow, ProofTerm, SearchConfig};
