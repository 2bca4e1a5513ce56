//! Staged identification of an unknown sequence.
//!
//! Stages run in a fixed order: direct lookup, fuzzy character edits,
//! lookups of transformed sequences, model guessing. Only a direct match
//! that covers the whole query at the start of an entry stops the pipeline
//! early.

use std::time::{Duration, Instant};

use serde::Serialize;
use thiserror::Error;

use crate::exec::{self, Mode};
use crate::guess::{guess_all, GuessBounds, GuessReport};
use crate::index::{find_matches, rank_matches, LexIndex, MatchResult, Query, MIN_QUERY_TERMS};
use crate::numcore::{Term, TermList};
use crate::transforms::Registry;

/// Fewest terms accepted by [`identify`].
pub const MIN_SEEK_TERMS: usize = 5;
pub const DEFAULT_MAX_EDITS: u8 = 2;
pub const DEFAULT_STAGE_BUDGET: Duration = Duration::from_secs(10);

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SeekError {
    #[error("seek needs at least {min} terms, got {len}; use lookup for shorter queries")]
    TooShort { len: usize, min: usize },
    #[error("max_edits must be at most 2, got {0}")]
    BadEdits(u8),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Direct,
    Fuzzy,
    Transforms,
    Guesses,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct StageToggles {
    pub direct: bool,
    pub fuzzy: bool,
    pub transforms: bool,
    pub guesses: bool,
}

impl Default for StageToggles {
    fn default() -> Self {
        StageToggles { direct: true, fuzzy: true, transforms: true, guesses: true }
    }
}

#[derive(Clone, Debug)]
pub struct SeekerConfig {
    pub stages: StageToggles,
    /// Character edits allowed in the fuzzy stage, `0..=2`; zero disables it.
    pub max_edits: u8,
    pub registry: Registry,
    pub bounds: GuessBounds,
    /// Checked between units of work; a stage that runs out stops early
    /// and is listed in [`SeekerReport::incomplete`].
    pub stage_budget: Duration,
    pub mode: Mode,
}

impl Default for SeekerConfig {
    fn default() -> Self {
        SeekerConfig {
            stages: StageToggles::default(),
            max_edits: DEFAULT_MAX_EDITS,
            registry: Registry::standard(),
            bounds: GuessBounds::default(),
            stage_budget: DEFAULT_STAGE_BUDGET,
            mode: Mode::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// Found directly in the catalog.
    Identified,
    /// Not found directly, but some later stage produced a finding.
    Explained,
    Unexplained,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransformMatches {
    pub transform: String,
    pub matches: Vec<MatchResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeekerReport {
    pub direct: Vec<MatchResult>,
    pub fuzzy: Vec<MatchResult>,
    pub via_transforms: Vec<TransformMatches>,
    pub guesses: GuessReport,
    pub verdict: Verdict,
    /// Later stages were skipped after a full-coverage direct match.
    pub early_exit: bool,
    pub incomplete: Vec<Stage>,
}

struct Budget {
    deadline: Instant,
}

impl Budget {
    fn start(d: Duration) -> Budget {
        Budget { deadline: Instant::now() + d }
    }

    fn expired(&self) -> bool {
        Instant::now() >= self.deadline
    }
}

pub fn identify(ix: &LexIndex, terms: &TermList, cfg: &SeekerConfig) -> Result<SeekerReport, SeekError> {
    if terms.len() < MIN_SEEK_TERMS {
        return Err(SeekError::TooShort { len: terms.len(), min: MIN_SEEK_TERMS });
    }
    if cfg.max_edits > 2 {
        return Err(SeekError::BadEdits(cfg.max_edits));
    }
    let mut report = SeekerReport {
        direct: Vec::new(),
        fuzzy: Vec::new(),
        via_transforms: Vec::new(),
        guesses: GuessReport::default(),
        verdict: Verdict::Unexplained,
        early_exit: false,
        incomplete: Vec::new(),
    };

    if cfg.stages.direct {
        report.direct = find_matches(ix, &Query::new(terms.terms.clone())).unwrap_or_default();
        report.early_exit = report
            .direct
            .iter()
            .any(|m| m.start_position == 0 && m.matched_count == terms.len());
    }
    if !report.early_exit {
        if cfg.stages.fuzzy && cfg.max_edits > 0 {
            let budget = Budget::start(cfg.stage_budget);
            let (found, complete) = fuzzy_scan(ix, &terms.terms, cfg.max_edits, cfg.mode, &budget);
            report.fuzzy = found;
            if !complete {
                report.incomplete.push(Stage::Fuzzy);
            }
        }
        if cfg.stages.transforms {
            let budget = Budget::start(cfg.stage_budget);
            let (found, complete) = transform_scan(ix, &terms.terms, &cfg.registry, cfg.mode, &budget);
            report.via_transforms = found;
            if !complete {
                report.incomplete.push(Stage::Transforms);
            }
        }
        if cfg.stages.guesses {
            let started = Instant::now();
            report.guesses = guess_all(terms, &cfg.bounds, cfg.mode);
            if started.elapsed() > cfg.stage_budget {
                report.incomplete.push(Stage::Guesses);
            }
        }
    }

    report.verdict = if !report.direct.is_empty() {
        Verdict::Identified
    } else if !report.fuzzy.is_empty() || !report.via_transforms.is_empty() || !report.guesses.is_empty() {
        Verdict::Explained
    } else {
        Verdict::Unexplained
    };
    Ok(report)
}

/// Character edit distance between the canonical texts of two equally long
/// term runs, commas never edited. `None` when the runs differ in length.
pub fn comma_protected_distance(a: &[Term], b: &[Term]) -> Option<usize> {
    (a.len() == b.len()).then(|| {
        a.iter()
            .zip(b)
            .map(|(x, y)| strsim::levenshtein(&x.to_string(), &y.to_string()))
            .sum()
    })
}

/// Windows of stored entries whose text is within `max_edits` character
/// edits of the query text, commas fixed. Exact matches are excluded.
pub fn fuzzy_matches(ix: &LexIndex, terms: &TermList, max_edits: u8) -> Result<Vec<MatchResult>, SeekError> {
    fuzzy_matches_with(ix, terms, max_edits, Mode::default())
}

pub fn fuzzy_matches_with(
    ix: &LexIndex,
    terms: &TermList,
    max_edits: u8,
    mode: Mode,
) -> Result<Vec<MatchResult>, SeekError> {
    if !(1..=2).contains(&max_edits) {
        return Err(SeekError::BadEdits(max_edits));
    }
    let budget = Budget::start(Duration::MAX / 4);
    Ok(fuzzy_scan(ix, &terms.terms, max_edits, mode, &budget).0)
}

fn fuzzy_scan(
    ix: &LexIndex,
    query: &[Term],
    max_edits: u8,
    mode: Mode,
    budget: &Budget,
) -> (Vec<MatchResult>, bool) {
    if query.is_empty() {
        return (Vec::new(), true);
    }
    let q: Vec<String> = query.iter().map(ToString::to_string).collect();
    let entries: Vec<_> = ix.entries().collect();
    let per_entry = exec::map(mode, &entries, |(id, stored)| {
        if budget.expired() {
            return Err(());
        }
        Ok(best_window(&q, stored, max_edits as usize).map(|(pos, d)| MatchResult::new(*id, pos, q.len(), d as u8)))
    });
    let complete = per_entry.iter().all(Result::is_ok);
    (rank_matches(per_entry.into_iter().flatten().flatten().collect()), complete)
}

/// Lowest-distance window with distance in `1..=max`, earliest first.
fn best_window(q: &[String], stored: &[Term], max: usize) -> Option<(usize, usize)> {
    if stored.len() < q.len() {
        return None;
    }
    let text: Vec<String> = stored.iter().map(ToString::to_string).collect();
    let mut best: Option<(usize, usize)> = None;
    for start in 0..=text.len() - q.len() {
        let mut d = 0;
        for (x, y) in q.iter().zip(&text[start..]) {
            if x == y {
                continue;
            }
            if x.len().abs_diff(y.len()) + d > max {
                d = max + 1;
                break;
            }
            d += strsim::levenshtein(x, y);
            if d > max {
                break;
            }
        }
        if (1..=max).contains(&d) && best.is_none_or(|(_, bd)| d < bd) {
            best = Some((start, d));
        }
    }
    best
}

/// Direct lookups of every integral transform of `terms`, in registry
/// order, omitting transforms with no match.
pub fn transform_lookups(ix: &LexIndex, terms: &TermList, registry: &Registry) -> Vec<TransformMatches> {
    transform_lookups_with(ix, terms, registry, Mode::default())
}

pub fn transform_lookups_with(
    ix: &LexIndex,
    terms: &TermList,
    registry: &Registry,
    mode: Mode,
) -> Vec<TransformMatches> {
    let budget = Budget::start(Duration::MAX / 4);
    transform_scan(ix, &terms.terms, registry, mode, &budget).0
}

fn transform_scan(
    ix: &LexIndex,
    terms: &[Term],
    registry: &Registry,
    mode: Mode,
    budget: &Budget,
) -> (Vec<TransformMatches>, bool) {
    let Ok(outputs) = registry.apply_integral(terms, mode) else {
        return (Vec::new(), true);
    };
    let mut found = Vec::new();
    for (name, out) in outputs {
        if budget.expired() {
            return (found, false);
        }
        if out.len() < MIN_QUERY_TERMS {
            continue;
        }
        let matches = find_matches(ix, &Query::new(out.terms)).unwrap_or_default();
        if !matches.is_empty() {
            found.push(TransformMatches { transform: name, matches });
        }
    }
    (found, true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{ANumber, Catalog, Entry};
    use crate::index::build_index;

    fn tl(v: &[i64]) -> TermList {
        TermList::from_i64s(1, v)
    }

    fn catalog(entries: &[(u32, &[i64])]) -> Catalog {
        let mut c = Catalog::new();
        for (i, t) in entries {
            c.insert(Entry::new(ANumber::new(*i).unwrap(), format!("entry {i}"), TermList::from_i64s(0, t)))
                .unwrap();
        }
        c
    }

    #[test]
    fn direct_full_match_exits_early() {
        let ix = build_index(&catalog(&[(1003, &[1, 1, 3, 11, 45, 197, 903]), (12, &[1; 10])]));
        let r = identify(&ix, &tl(&[1, 1, 3, 11, 45]), &SeekerConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Identified);
        assert!(r.early_exit);
        assert_eq!(r.direct[0].id, ANumber::new(1003).unwrap());
        assert!(r.fuzzy.is_empty() && r.guesses.is_empty());
    }

    #[test]
    fn geometric_explained_by_guess() {
        let ix = build_index(&catalog(&[(1003, &[1, 1, 3, 11, 45, 197, 903])]));
        let r = identify(&ix, &tl(&[2, 4, 8, 16, 32, 64]), &SeekerConfig::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Explained);
        let lin = r.guesses.find("linear_recurrence").unwrap();
        match &lin.model {
            crate::guess::Model::LinearRecurrence(m) => assert_eq!(m.order(), 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fuzzy_one_digit() {
        let ix = build_index(&catalog(&[(1003, &[1, 1, 3, 11, 45, 197, 903])]));
        let m = fuzzy_matches(&ix, &tl(&[1, 1, 3, 11, 46]), 1).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!((m[0].edit_count, m[0].start_position), (1, 0));
        assert!(fuzzy_matches(&ix, &tl(&[1, 1, 3, 11, 45]), 2).unwrap().is_empty());
        assert!(fuzzy_matches(&ix, &tl(&[9, 9, 9, 9, 9]), 1).unwrap().is_empty());
        assert_eq!(fuzzy_matches(&ix, &tl(&[1, 2, 3]), 3), Err(SeekError::BadEdits(3)));
    }

    #[test]
    fn transforms_find_all_ones() {
        let ix = build_index(&catalog(&[(12, &[1; 12])]));
        let found = transform_lookups(&ix, &tl(&[1, 2, 4, 8, 16, 32]), &Registry::standard());
        assert!(found.iter().any(|t| t.transform == "inverse_binomial"));
        assert!(transform_lookups(&ix, &tl(&[1, 2, 4, 8, 16, 32]), &Registry::empty()).is_empty());
    }

    #[test]
    fn short_queries_rejected() {
        let ix = build_index(&Catalog::new());
        let e = identify(&ix, &tl(&[1, 2, 3, 4]), &SeekerConfig::default()).unwrap_err();
        assert!(e.to_string().contains("lookup"));
    }
}
