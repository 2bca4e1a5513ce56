//! Catalog entries, the line-tagged entry file format and ingestion.

mod anumber;
mod format;

pub use anumber::{ANumber, ANumberError};
pub use format::{parse_entry, parse_entry_at, serialize_entry, ParseError, SEQUENCE_LINE_WIDTH};

use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, BufRead};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::numcore::TermList;

/// Recognized keyword tags. `uned` marks entries not yet edited and `obsc`
/// entries whose definition is unclear.
pub const KEYWORDS: &[&str] = &[
    "base", "cofr", "cons", "core", "dead", "dumb", "easy", "eigen", "fini", "frac", "full",
    "hard", "less", "look", "more", "mult", "new", "nice", "nonn", "obsc", "sign", "tabf",
    "tabl", "uned", "walk", "word",
];

pub fn is_known_keyword(tag: &str) -> bool {
    KEYWORDS.contains(&tag)
}

/// Entries with fewer stored terms than this draw a validation warning.
pub const MIN_RECOMMENDED_TERMS: usize = 4;

/// Default cap on stored terms per entry applied at load time.
pub const DEFAULT_TERM_CAP: usize = 1000;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Entry {
    pub id: ANumber,
    pub name: String,
    pub terms: TermList,
    pub keywords: BTreeSet<String>,
    pub formulas: Vec<String>,
    pub references: Vec<String>,
    pub crossrefs: Vec<ANumber>,
    pub comments: Vec<String>,
    pub programs: Vec<String>,
}

impl Entry {
    /// An entry with only the required fields set.
    pub fn new(id: ANumber, name: impl Into<String>, terms: TermList) -> Entry {
        Entry {
            id,
            name: name.into(),
            terms,
            keywords: BTreeSet::new(),
            formulas: Vec::new(),
            references: Vec::new(),
            crossrefs: Vec::new(),
            comments: Vec::new(),
            programs: Vec::new(),
        }
    }

    pub fn has_keyword(&self, tag: &str) -> bool {
        self.keywords.contains(tag)
    }

    /// Name, comments, formulas and references, in that order.
    pub fn text_fields(&self) -> impl Iterator<Item = &str> {
        std::iter::once(self.name.as_str())
            .chain(self.comments.iter().map(String::as_str))
            .chain(self.formulas.iter().map(String::as_str))
            .chain(self.references.iter().map(String::as_str))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Issue {
    ShortTerms { count: usize },
    UnknownKeyword(String),
    DanglingCrossref(ANumber),
    TermsTruncated { stored: usize, cap: usize },
}

impl std::fmt::Display for Issue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Issue::ShortTerms { count } => write!(
                f,
                "only {count} terms (at least {MIN_RECOMMENDED_TERMS} recommended)"
            ),
            Issue::UnknownKeyword(k) => write!(f, "unknown keyword {k:?}"),
            Issue::DanglingCrossref(a) => write!(f, "crossref {a} not in catalog"),
            Issue::TermsTruncated { stored, cap } => {
                write!(f, "{stored} terms truncated to the cap of {cap}")
            }
        }
    }
}

/// Warnings for one entry. Crossrefs are checked only when a catalog is given.
pub fn validate_entry(e: &Entry, catalog: Option<&Catalog>) -> Vec<Issue> {
    let mut issues = Vec::new();
    if e.terms.len() < MIN_RECOMMENDED_TERMS {
        issues.push(Issue::ShortTerms {
            count: e.terms.len(),
        });
    }
    for k in &e.keywords {
        if !is_known_keyword(k) {
            issues.push(Issue::UnknownKeyword(k.clone()));
        }
    }
    if let Some(c) = catalog {
        for x in &e.crossrefs {
            if c.get(*x).is_none() {
                issues.push(Issue::DanglingCrossref(*x));
            }
        }
    }
    issues
}

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("duplicate entry {0}")]
    Duplicate(ANumber),
    #[error("entry has no terms")]
    NoTerms,
}

/// Entries keyed by A-number plus the order in which they were inserted.
///
/// Equality compares entries only; two catalogs loaded from permutations of
/// the same records are equal.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Catalog {
    entries: BTreeMap<ANumber, Entry>,
    journal: Vec<ANumber>,
}

impl PartialEq for Catalog {
    fn eq(&self, other: &Self) -> bool {
        self.entries == other.entries
    }
}

impl Eq for Catalog {}

impl Catalog {
    pub fn new() -> Catalog {
        Catalog::default()
    }

    pub fn insert(&mut self, e: Entry) -> Result<(), CatalogError> {
        if e.terms.is_empty() {
            return Err(CatalogError::NoTerms);
        }
        if self.entries.contains_key(&e.id) {
            return Err(CatalogError::Duplicate(e.id));
        }
        self.journal.push(e.id);
        self.entries.insert(e.id, e);
        Ok(())
    }

    pub fn get(&self, id: ANumber) -> Option<&Entry> {
        self.entries.get(&id)
    }

    pub fn remove(&mut self, id: ANumber) -> Option<Entry> {
        let e = self.entries.remove(&id)?;
        self.journal.retain(|x| *x != id);
        Some(e)
    }

    /// Entries in A-number order.
    pub fn iter(&self) -> impl Iterator<Item = &Entry> {
        self.entries.values()
    }

    pub fn ids(&self) -> impl Iterator<Item = ANumber> + '_ {
        self.entries.keys().copied()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Insertion order.
    pub fn journal(&self) -> &[ANumber] {
        &self.journal
    }

    /// `(entry, target)` pairs whose target is absent.
    pub fn dangling_crossrefs(&self) -> Vec<(ANumber, ANumber)> {
        self.iter()
            .flat_map(|e| {
                e.crossrefs
                    .iter()
                    .filter(|x| !self.entries.contains_key(x))
                    .map(move |x| (e.id, *x))
            })
            .collect()
    }

    /// All records in A-number order, blank-line separated.
    pub fn to_text(&self) -> String {
        let records: Vec<String> = self.iter().map(serialize_entry).collect();
        records.join("\n")
    }

    /// SHA-256 of [`Catalog::to_text`], lowercase hex.
    pub fn digest(&self) -> String {
        let hash = Sha256::digest(self.to_text().as_bytes());
        hash.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// A rejected record and the line where it starts.
#[derive(Debug)]
pub struct RecordError {
    pub first_line: usize,
    pub error: LoadError,
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("duplicate entry {0}; later record rejected")]
    Duplicate(ANumber),
}

#[derive(Debug)]
pub struct LoadReport {
    pub catalog: Catalog,
    pub errors: Vec<RecordError>,
    /// Entries whose terms were cut to the cap.
    pub truncated: Vec<ANumber>,
}

#[derive(Clone, Debug)]
pub struct LoadOptions {
    pub term_cap: usize,
}

impl Default for LoadOptions {
    fn default() -> Self {
        LoadOptions {
            term_cap: DEFAULT_TERM_CAP,
        }
    }
}

pub fn load_catalog<R: BufRead>(source: R) -> io::Result<LoadReport> {
    load_catalog_with(source, &LoadOptions::default())
}

/// Reads blank-line separated records. Bad records are collected in the
/// report; only I/O failures abort the load.
pub fn load_catalog_with<R: BufRead>(source: R, opts: &LoadOptions) -> io::Result<LoadReport> {
    let mut report = LoadReport {
        catalog: Catalog::new(),
        errors: Vec::new(),
        truncated: Vec::new(),
    };
    let mut block = String::new();
    let mut block_start = 0;
    let mut lines = source.lines().enumerate().peekable();
    loop {
        let next = lines.next();
        let at_break = match &next {
            None => true,
            Some((_, Ok(l))) => l.trim().is_empty(),
            Some((_, Err(_))) => false,
        };
        if at_break {
            if !block.is_empty() {
                ingest_block(&mut report, &block, block_start, opts);
                block.clear();
            }
            if next.is_none() {
                break;
            }
            continue;
        }
        let (i, line) = next.unwrap();
        let line = line?;
        if block.is_empty() {
            block_start = i + 1;
        }
        block.push_str(&line);
        block.push('\n');
    }
    Ok(report)
}

fn ingest_block(report: &mut LoadReport, block: &str, first_line: usize, opts: &LoadOptions) {
    let mut e = match parse_entry_at(block, first_line) {
        Ok(e) => e,
        Err(err) => {
            report.errors.push(RecordError {
                first_line,
                error: err.into(),
            });
            return;
        }
    };
    if e.terms.len() > opts.term_cap {
        e.terms.terms.truncate(opts.term_cap);
        report.truncated.push(e.id);
    }
    let id = e.id;
    if report.catalog.insert(e).is_err() {
        report.errors.push(RecordError {
            first_line,
            error: LoadError::Duplicate(id),
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(n: u32) -> ANumber {
        ANumber::new(n).unwrap()
    }

    fn entry(n: u32, terms: &[i64]) -> Entry {
        Entry::new(a(n), format!("seq {n}"), TermList::from_i64s(1, terms))
    }

    #[test]
    fn validation_warnings() {
        let mut e = entry(1003, &[1, 1, 3, 11, 45]);
        e.keywords.insert("nonn".into());
        assert!(validate_entry(&e, None).is_empty());

        let short = entry(5, &[1, 2]);
        assert_eq!(validate_entry(&short, None), vec![Issue::ShortTerms { count: 2 }]);

        let mut odd = entry(6, &[1, 2, 3, 4]);
        odd.keywords.insert("sparkly".into());
        odd.crossrefs.push(a(999_999));
        let mut c = Catalog::new();
        c.insert(entry(7, &[1, 2, 3, 4])).unwrap();
        assert_eq!(
            validate_entry(&odd, Some(&c)),
            vec![
                Issue::UnknownKeyword("sparkly".into()),
                Issue::DanglingCrossref(a(999_999))
            ]
        );
    }

    #[test]
    fn vocabulary_has_editorial_tags() {
        assert!(is_known_keyword("uned"));
        assert!(is_known_keyword("obsc"));
        assert!(!is_known_keyword("bogus"));
    }

    #[test]
    fn duplicates_rejected() {
        let mut c = Catalog::new();
        c.insert(entry(1, &[1, 2, 3])).unwrap();
        assert!(matches!(c.insert(entry(1, &[4, 5, 6])), Err(CatalogError::Duplicate(_))));
        assert!(matches!(
            c.insert(Entry::new(a(2), "empty", TermList::default())),
            Err(CatalogError::NoTerms)
        ));
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn load_collects_errors() {
        let text = "\
%S A000001 1,2,3,4
%N A000001 first

%S A000002 1,x
%N A000002 broken

%S A000001 9,9,9,9
%N A000001 again

%N A000003 no terms
";
        let r = load_catalog(text.as_bytes()).unwrap();
        assert_eq!(r.catalog.len(), 1);
        assert_eq!(r.errors.len(), 3);
        assert_eq!(r.errors[0].first_line, 4);
        assert!(matches!(r.errors[0].error, LoadError::Parse(ParseError::BadTerm { line: 4, .. })));
        assert!(matches!(r.errors[1].error, LoadError::Duplicate(x) if x == a(1)));
        assert!(matches!(
            r.errors[2].error,
            LoadError::Parse(ParseError::MissingTag { tag: 'S', .. })
        ));
    }

    #[test]
    fn load_applies_term_cap() {
        let terms: Vec<String> = (0..20).map(|i| i.to_string()).collect();
        let text = format!("%S A000010 {}\n%N A000010 naturals\n", terms.join(","));
        let r = load_catalog_with(text.as_bytes(), &LoadOptions { term_cap: 5 }).unwrap();
        assert_eq!(r.catalog.get(a(10)).unwrap().terms.len(), 5);
        assert_eq!(r.truncated, vec![a(10)]);
    }

    #[test]
    fn dangling_crossrefs_listed() {
        let mut c = Catalog::new();
        let mut e = entry(1, &[1, 2, 3, 4]);
        e.crossrefs = vec![a(2), a(3)];
        c.insert(e).unwrap();
        c.insert(entry(2, &[1, 2, 3, 4])).unwrap();
        assert_eq!(c.dangling_crossrefs(), vec![(a(1), a(3))]);
    }

    #[test]
    fn text_round_trip_and_digest() {
        let mut c = Catalog::new();
        c.insert(entry(2, &[5, 6, 7, 8])).unwrap();
        c.insert(entry(1, &[1, 2, 3, 4])).unwrap();
        let r = load_catalog(c.to_text().as_bytes()).unwrap();
        assert!(r.errors.is_empty());
        assert_eq!(r.catalog, c);
        assert_eq!(r.catalog.digest(), c.digest());
        assert_eq!(c.journal(), &[a(2), a(1)]);
        assert_eq!(c.digest().len(), 64);
    }
}
