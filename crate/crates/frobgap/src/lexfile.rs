//! Reading lexicon files from disk.

use std::path::{Path, PathBuf};

use frobgap_core::lexicon::{load_lexicon_str, Lexicon, LoadErrors};
use thiserror::Error;

/// The lexicon covering every suite sentence.
pub const BUNDLED_LEXICON: &str = include_str!("../data/gaps.lex");

#[derive(Debug, Error)]
pub enum LexFileError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {errors}")]
    Invalid { path: PathBuf, errors: LoadErrors },
}

pub fn load_lexicon(path: &Path) -> Result<Lexicon, LexFileError> {
    let text = std::fs::read_to_string(path).map_err(|source| LexFileError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    load_lexicon_str(&text).map_err(|errors| LexFileError::Invalid {
        path: path.to_path_buf(),
        errors,
    })
}

pub fn bundled_lexicon() -> Lexicon {
    load_lexicon_str(BUNDLED_LEXICON).expect("bundled lexicon is valid")
}
