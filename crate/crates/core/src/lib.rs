//! Integer sequence catalog and identification engine.
//!
//! The crate is organized bottom-up:
//!
//! - [`numcore`]: exact arithmetic, primes, factorization and array encodings
//! - [`catalog`]: entry model and the line-tagged entry file format
//! - [`index`]: positional term index, ranked lookup, text and keyword search
//! - [`transforms`]: registry of invertible sequence transforms
//! - [`guess`]: exact fitting of recurrences, polynomials and rational functions
//! - [`seeker`]: staged identification (direct, fuzzy, transforms, guessing)
//! - [`generators`]: algorithmic sequences and the seed catalog
//!
//! Data-parallel loops go through [`exec`], which uses rayon when the
//! `parallel` feature is enabled and plain iterators otherwise.

pub mod catalog;
pub mod exec;
pub mod generators;
pub mod guess;
pub mod index;
pub mod numcore;
pub mod seeker;
pub mod transforms;

pub use catalog::{ANumber, Catalog, Entry};
pub use index::{LexIndex, MatchResult, Query};
pub use numcore::{RationalPair, Term, TermList};
pub use seeker::{SeekerConfig, SeekerReport};
