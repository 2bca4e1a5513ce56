//! Front ends for the sequence catalog: the `seqdb` command line, the
//! mail command grammar and the HTTP service.
//!
//! Every surface answers a lookup through [`snapshot::Snapshot::lookup`],
//! so identical terms against the same catalog give identical rankings.

pub mod cli;
pub mod config;
pub mod http;
pub mod mail;
pub mod rate;
pub mod render;
pub mod snapshot;

use num_bigint::BigInt;
use thiserror::Error;

use seqdb_core::Term;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TermsError {
    #[error("no terms given")]
    Empty,
    #[error("term {token:?} is not an integer")]
    NotInteger { token: String },
}

/// Splits on whitespace and commas; empty pieces are skipped.
pub fn parse_terms(text: &str) -> Result<Vec<Term>, TermsError> {
    let terms = text
        .split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            let digits = t.strip_prefix('+').unwrap_or(t);
            digits
                .parse::<BigInt>()
                .map_err(|_| TermsError::NotInteger { token: t.to_string() })
        })
        .collect::<Result<Vec<_>, _>>()?;
    if terms.is_empty() {
        return Err(TermsError::Empty);
    }
    Ok(terms)
}
