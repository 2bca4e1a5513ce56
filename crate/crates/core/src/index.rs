//! Positional term index over a catalog snapshot.
//!
//! Every window of [`GRAM`] consecutive terms is posted under the canonical
//! text of its absolute values, so one posting list serves both exact and
//! sign-insensitive queries. Candidates are confirmed by extending the
//! comparison over the whole query.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::Path;

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::catalog::{is_known_keyword, ANumber, Catalog, KEYWORDS};
use crate::exec::{self, Mode};
use crate::numcore::{canonical_match_text, Term, TermList};

/// Shortest accepted sequence query.
pub const MIN_QUERY_TERMS: usize = 3;

/// Window length of the postings.
pub const GRAM: usize = 3;

/// Bumped whenever the serialized layout changes.
pub const INDEX_FORMAT_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum QueryError {
    #[error("query has {len} terms; at least {min} are needed (shorter runs match almost everything, add more terms)")]
    TooShort { len: usize, min: usize },
    #[error("min_overlap {min_overlap} must lie in {min}..={len}")]
    BadOverlap {
        min_overlap: usize,
        min: usize,
        len: usize,
    },
    #[error("empty search text")]
    EmptyNeedle,
    #[error("unknown keyword {tag:?}; known keywords: {}", vocabulary.join(", "))]
    UnknownKeyword {
        tag: String,
        vocabulary: Vec<&'static str>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Query {
    pub terms: TermList,
    pub sign_insensitive: bool,
    /// Minimum number of aligned terms; `None` means the whole query.
    pub min_overlap: Option<usize>,
}

impl Query {
    pub fn new(terms: Vec<Term>) -> Query {
        Query {
            terms: TermList::new(1, terms),
            sign_insensitive: false,
            min_overlap: None,
        }
    }

    pub fn sign_insensitive(mut self) -> Query {
        self.sign_insensitive = true;
        self
    }

    pub fn with_min_overlap(mut self, n: usize) -> Query {
        self.min_overlap = Some(n);
        self
    }

    fn required_overlap(&self) -> Result<usize, QueryError> {
        let len = self.terms.len();
        if len < MIN_QUERY_TERMS {
            return Err(QueryError::TooShort {
                len,
                min: MIN_QUERY_TERMS,
            });
        }
        let m = self.min_overlap.unwrap_or(len);
        if !(MIN_QUERY_TERMS..=len).contains(&m) {
            return Err(QueryError::BadOverlap {
                min_overlap: m,
                min: MIN_QUERY_TERMS,
                len,
            });
        }
        Ok(m)
    }
}

/// Ranking key. Orders by fewer edits, then more matched terms, then
/// alignment at the start of the entry, then smaller A-number.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatchScore {
    pub edit_count: u8,
    pub matched_count: usize,
    pub at_start: bool,
    pub id: ANumber,
}

impl Ord for MatchScore {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.edit_count
            .cmp(&other.edit_count)
            .then(other.matched_count.cmp(&self.matched_count))
            .then(other.at_start.cmp(&self.at_start))
            .then(self.id.cmp(&other.id))
    }
}

impl PartialOrd for MatchScore {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MatchResult {
    pub id: ANumber,
    /// Index into the entry's stored terms where the query aligns.
    pub start_position: usize,
    pub matched_count: usize,
    pub edit_count: u8,
    pub score: MatchScore,
}

impl MatchResult {
    pub fn new(id: ANumber, start_position: usize, matched_count: usize, edit_count: u8) -> Self {
        MatchResult {
            id,
            start_position,
            matched_count,
            edit_count,
            score: MatchScore {
                edit_count,
                matched_count,
                at_start: start_position == 0,
                id,
            },
        }
    }
}

/// Sorts by [`MatchScore`]; ties on the whole score fall back to position.
pub fn rank_matches(mut ms: Vec<MatchResult>) -> Vec<MatchResult> {
    ms.sort_by(|a, b| {
        a.score
            .cmp(&b.score)
            .then(a.start_position.cmp(&b.start_position))
    });
    ms
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct IndexedEntry {
    id: ANumber,
    terms: Vec<Term>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
struct Posting {
    entry: u32,
    position: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexIndex {
    version: u32,
    catalog_digest: String,
    entries: Vec<IndexedEntry>,
    /// Canonical term text of every entry, sorted lexicographically.
    sorted: Vec<(String, u32)>,
    postings: BTreeMap<String, Vec<Posting>>,
}

fn gram_key(terms: &[Term]) -> String {
    let abs: Vec<Term> = terms.iter().map(|t| t.abs()).collect();
    canonical_match_text(&abs)
}

pub fn build_index(c: &Catalog) -> LexIndex {
    build_index_with(c, Mode::default())
}

/// Builds the index; the result does not depend on `mode`.
pub fn build_index_with(c: &Catalog, mode: Mode) -> LexIndex {
    let entries: Vec<IndexedEntry> = c
        .iter()
        .map(|e| IndexedEntry {
            id: e.id,
            terms: e.terms.terms.clone(),
        })
        .collect();
    let grams: Vec<Vec<String>> = exec::map(mode, &entries, |e| {
        e.terms.windows(GRAM).map(gram_key).collect()
    });
    let mut postings: BTreeMap<String, Vec<Posting>> = BTreeMap::new();
    for (ei, keys) in grams.into_iter().enumerate() {
        for (pos, key) in keys.into_iter().enumerate() {
            postings.entry(key).or_default().push(Posting {
                entry: ei as u32,
                position: pos as u32,
            });
        }
    }
    let mut sorted: Vec<(String, u32)> = exec::map(mode, &entries, |e| canonical_match_text(&e.terms))
        .into_iter()
        .enumerate()
        .map(|(i, t)| (t, i as u32))
        .collect();
    sorted.sort();
    LexIndex {
        version: INDEX_FORMAT_VERSION,
        catalog_digest: c.digest(),
        entries,
        sorted,
        postings,
    }
}

impl LexIndex {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn catalog_digest(&self) -> &str {
        &self.catalog_digest
    }

    /// Indexed entries in A-number order.
    pub fn entries(&self) -> impl Iterator<Item = (ANumber, &[Term])> + '_ {
        self.entries.iter().map(|e| (e.id, e.terms.as_slice()))
    }

    pub fn terms_of(&self, id: ANumber) -> Option<&[Term]> {
        self.entries
            .binary_search_by_key(&id, |e| e.id)
            .ok()
            .map(|i| self.entries[i].terms.as_slice())
    }

    /// The lexicographic table of `(canonical text, A-number)`.
    pub fn lexicographic(&self) -> impl Iterator<Item = (&str, ANumber)> + '_ {
        self.sorted
            .iter()
            .map(|(t, i)| (t.as_str(), self.entries[*i as usize].id))
    }

    /// Entries whose stored terms begin with `prefix`, by binary search on
    /// the lexicographic table.
    pub fn entries_with_prefix(&self, prefix: &[Term]) -> Vec<ANumber> {
        let p = canonical_match_text(prefix);
        let start = self.sorted.partition_point(|(t, _)| t.as_str() < p.as_str());
        let mut out: Vec<ANumber> = self.sorted[start..]
            .iter()
            .take_while(|(t, _)| t.starts_with(&p))
            .filter(|(t, _)| t.len() == p.len() || t.as_bytes()[p.len()] == b',')
            .map(|(_, i)| self.entries[*i as usize].id)
            .collect();
        out.sort();
        out
    }

    /// Deterministic serialized form; equal catalogs give equal bytes.
    pub fn to_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("index serializes")
    }

    pub fn save_cache(&self, path: &Path) -> io::Result<()> {
        fs::write(path, self.to_bytes())
    }

    /// Reads a cache file, returning `None` when it is unreadable, from
    /// another format version, or built from a different catalog.
    pub fn load_cache(path: &Path, c: &Catalog) -> Option<LexIndex> {
        let bytes = fs::read(path).ok()?;
        let ix: LexIndex = serde_json::from_slice(&bytes).ok()?;
        (ix.version == INDEX_FORMAT_VERSION && ix.catalog_digest == c.digest()).then_some(ix)
    }

    /// Cached index when valid, otherwise a fresh build written back.
    pub fn load_or_build(path: &Path, c: &Catalog) -> LexIndex {
        if let Some(ix) = LexIndex::load_cache(path, c) {
            return ix;
        }
        let ix = build_index(c);
        // a cache that cannot be written only costs a rebuild next time
        let _ = ix.save_cache(path);
        ix
    }
}

fn terms_agree(a: &Term, b: &Term, sign_insensitive: bool) -> bool {
    if sign_insensitive {
        a.abs() == b.abs()
    } else {
        a == b
    }
}

/// All entries containing the query as a contiguous run, best alignment
/// per entry, ranked.
pub fn find_matches(ix: &LexIndex, q: &Query) -> Result<Vec<MatchResult>, QueryError> {
    let need = q.required_overlap()?;
    let qt = &q.terms.terms;
    let Some(postings) = ix.postings.get(&gram_key(&qt[..GRAM])) else {
        return Ok(Vec::new());
    };
    let mut best: BTreeMap<ANumber, MatchResult> = BTreeMap::new();
    for p in postings {
        let e = &ix.entries[p.entry as usize];
        let pos = p.position as usize;
        let avail = (e.terms.len() - pos).min(qt.len());
        if avail < need {
            continue;
        }
        let ok = qt[..avail]
            .iter()
            .zip(&e.terms[pos..pos + avail])
            .all(|(a, b)| terms_agree(a, b, q.sign_insensitive));
        if !ok {
            continue;
        }
        let m = MatchResult::new(e.id, pos, avail, 0);
        match best.get(&e.id) {
            Some(prev) if (prev.score, prev.start_position) <= (m.score, m.start_position) => {}
            _ => {
                best.insert(e.id, m);
            }
        }
    }
    Ok(rank_matches(best.into_values().collect()))
}

/// Lowercases and strips diacritics so "Schroder" finds "Schröder".
pub fn fold_text(s: &str) -> String {
    s.nfd()
        .filter(|c| !is_combining_mark(*c))
        .flat_map(char::to_lowercase)
        .collect()
}

/// Entries whose name, comments, formulas or references mention `needle`.
pub fn search_text(c: &Catalog, needle: &str) -> Result<Vec<ANumber>, QueryError> {
    let needle = fold_text(needle.trim());
    if needle.is_empty() {
        return Err(QueryError::EmptyNeedle);
    }
    Ok(c.iter()
        .filter(|e| e.text_fields().any(|f| fold_text(f).contains(&needle)))
        .map(|e| e.id)
        .collect())
}

pub fn search_keyword(c: &Catalog, tag: &str) -> Result<Vec<ANumber>, QueryError> {
    if !is_known_keyword(tag) {
        return Err(QueryError::UnknownKeyword {
            tag: tag.to_string(),
            vocabulary: KEYWORDS.to_vec(),
        });
    }
    Ok(c.iter().filter(|e| e.has_keyword(tag)).map(|e| e.id).collect())
}
