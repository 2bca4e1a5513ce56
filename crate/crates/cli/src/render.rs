//! Text, porcelain and JSON renderings of query results.
//!
//! Porcelain output is tab separated, one record per line, with the record
//! kind in the first field.

use std::fmt::Write;

use serde::Serialize;

use seqdb_core::catalog::Entry;
use seqdb_core::guess::FittedModel;
use seqdb_core::seeker::{Stage, Verdict};
use seqdb_core::{ANumber, MatchResult, SeekerReport, Term};

use crate::snapshot::Snapshot;

const LINE_WIDTH: usize = 72;

pub fn join_terms(terms: &[Term]) -> String {
    terms.iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
}

fn strings(terms: &[Term]) -> Vec<String> {
    terms.iter().map(ToString::to_string).collect()
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Identified => "identified",
        Verdict::Explained => "explained",
        Verdict::Unexplained => "unexplained",
    }
}

pub fn stage_name(s: Stage) -> &'static str {
    match s {
        Stage::Direct => "direct",
        Stage::Fuzzy => "fuzzy",
        Stage::Transforms => "transforms",
        Stage::Guesses => "guesses",
    }
}

/// Stored terms with the matched window in brackets, clipped to the line
/// width around the window.
pub fn aligned_terms(stored: &[Term], start: usize, len: usize) -> String {
    let pieces = strings(stored);
    let end = (start + len).min(pieces.len());
    let through_window: usize = pieces[..end].iter().map(|p| p.len() + 1).sum::<usize>() + 2;
    let first = if through_window > LINE_WIDTH { start.saturating_sub(2) } else { 0 };
    let mut out = String::new();
    if first > 0 {
        out.push_str("...,");
    }
    for (i, p) in pieces.iter().enumerate().skip(first) {
        if i >= end && out.len() + p.len() > LINE_WIDTH {
            out.push_str(",...");
            return out;
        }
        if i > first {
            out.push(',');
        }
        if i == start {
            out.push('[');
        }
        out.push_str(p);
        if i + 1 == end {
            out.push(']');
        }
    }
    out
}

fn entry_name(snap: &Snapshot, id: ANumber) -> &str {
    snap.catalog.get(id).map_or("", |e| e.name.as_str())
}

fn porcelain_match(out: &mut String, kind: &str, snap: &Snapshot, m: &MatchResult) {
    let n = snap.catalog.get(m.id).map_or(0, |e| e.terms.index_of(m.start_position));
    let _ = writeln!(
        out,
        "{kind}\t{}\t{}\t{n}\t{}\t{}\t{}",
        m.id,
        m.start_position,
        m.matched_count,
        m.edit_count,
        entry_name(snap, m.id)
    );
}

fn human_match(out: &mut String, snap: &Snapshot, m: &MatchResult, reference_limit: usize) {
    let Some(e) = snap.catalog.get(m.id) else {
        return;
    };
    let _ = writeln!(out, "{} {}", e.id, e.name);
    let _ = writeln!(out, "  S {}", aligned_terms(&e.terms.terms, m.start_position, m.matched_count));
    let first_n = e.terms.index_of(m.start_position);
    let last_n = first_n + m.matched_count as i64 - 1;
    let edits = match m.edit_count {
        0 => String::new(),
        1 => ", 1 edit".to_string(),
        k => format!(", {k} edits"),
    };
    let _ = writeln!(
        out,
        "    match n={first_n}..{last_n} (position {}, {} terms{edits})",
        m.start_position, m.matched_count
    );
    if let Some(f) = e.formulas.first() {
        let _ = writeln!(out, "  F {f}");
    }
    for r in e.references.iter().take(reference_limit) {
        let _ = writeln!(out, "  R {r}");
    }
}

pub fn render_lookup(snap: &Snapshot, query: &[Term], ms: &[MatchResult], porcelain: bool) -> String {
    render_lookup_with(snap, query, ms, porcelain, crate::config::DEFAULT_REFERENCE_LIMIT)
}

pub fn render_lookup_with(
    snap: &Snapshot,
    query: &[Term],
    ms: &[MatchResult],
    porcelain: bool,
    reference_limit: usize,
) -> String {
    let mut out = String::new();
    if porcelain {
        let _ = writeln!(out, "query\t{}", join_terms(query));
        for m in ms {
            porcelain_match(&mut out, "match", snap, m);
        }
        return out;
    }
    let _ = writeln!(out, "Search: {}", join_terms(query));
    if ms.is_empty() {
        let _ = writeln!(out, "No matches. Consider submitting the sequence.");
        return out;
    }
    let plural = if ms.len() == 1 { "" } else { "es" };
    let _ = writeln!(
        out,
        "{} match{plural} (abridged: links, programs and most references omitted)",
        ms.len()
    );
    for m in ms {
        out.push('\n');
        human_match(&mut out, snap, m, reference_limit);
    }
    out
}

pub fn render_search(snap: &Snapshot, ids: &[ANumber], porcelain: bool) -> String {
    let mut out = String::new();
    for id in ids {
        let sep = if porcelain { "\t" } else { " " };
        let _ = writeln!(out, "{id}{sep}{}", entry_name(snap, *id));
    }
    if ids.is_empty() && !porcelain {
        out.push_str("No entries found.\n");
    }
    out
}

fn model_line(m: &FittedModel) -> String {
    format!(
        "{}\t{}\t{}\t{}\t{}\t{}",
        m.model.kind(),
        m.verified,
        m.split.fit_terms,
        m.split.held_out,
        join_terms(&m.next_terms),
        m.model
    )
}

pub fn render_seek(snap: &Snapshot, query: &[Term], r: &SeekerReport, porcelain: bool) -> String {
    let mut out = String::new();
    if porcelain {
        let _ = writeln!(out, "query\t{}", join_terms(query));
        let _ = writeln!(out, "verdict\t{}\t{}", verdict_name(r.verdict), r.early_exit);
        for m in &r.direct {
            porcelain_match(&mut out, "direct", snap, m);
        }
        for m in &r.fuzzy {
            porcelain_match(&mut out, "fuzzy", snap, m);
        }
        for t in &r.via_transforms {
            for m in &t.matches {
                porcelain_match(&mut out, &format!("transform\t{}", t.transform), snap, m);
            }
        }
        for m in &r.guesses.models {
            let _ = writeln!(out, "model\t{}", model_line(m));
        }
        for s in &r.incomplete {
            let _ = writeln!(out, "incomplete\t{}", stage_name(*s));
        }
        return out;
    }
    let _ = writeln!(out, "Seek: {}", join_terms(query));
    let skipped = if r.early_exit { " (later stages skipped)" } else { "" };
    let _ = writeln!(out, "Verdict: {}{skipped}", verdict_name(r.verdict));
    let list = |out: &mut String, title: &str, ms: &[MatchResult]| {
        if ms.is_empty() {
            return;
        }
        let _ = writeln!(out, "\n{title}");
        for m in ms {
            let stored = snap.catalog.get(m.id).map_or(&[][..], |e| &e.terms.terms[..]);
            let _ = writeln!(out, "  {} {}", m.id, entry_name(snap, m.id));
            if !stored.is_empty() {
                let _ = writeln!(out, "    {}", aligned_terms(stored, m.start_position, m.matched_count));
            }
            if m.edit_count > 0 {
                let _ = writeln!(out, "    {} character edit(s)", m.edit_count);
            }
        }
    };
    list(&mut out, "Direct matches", &r.direct);
    list(&mut out, "Matches after changing characters", &r.fuzzy);
    if !r.via_transforms.is_empty() {
        let _ = writeln!(out, "\nMatches after transforming");
        for t in &r.via_transforms {
            let ids: Vec<String> = t.matches.iter().map(|m| m.id.to_string()).collect();
            let _ = writeln!(out, "  {}: {}", t.transform, ids.join(" "));
        }
    }
    if !r.guesses.models.is_empty() {
        let _ = writeln!(out, "\nModels");
        for m in &r.guesses.models {
            let status = if m.verified { "verified" } else { "unverified" };
            let _ = writeln!(
                out,
                "  {} ({status}; fitted on {} terms, {} held out)",
                m.model.kind(),
                m.split.fit_terms,
                m.split.held_out
            );
            let _ = writeln!(out, "    {}", m.model);
            if !m.next_terms.is_empty() {
                let _ = writeln!(out, "    next: {}", join_terms(&m.next_terms));
            }
            if let Some(e) = &m.extrapolation_error {
                let _ = writeln!(out, "    extrapolation stopped: {e}");
            }
        }
    }
    if !r.incomplete.is_empty() {
        let names: Vec<&str> = r.incomplete.iter().map(|s| stage_name(*s)).collect();
        let _ = writeln!(out, "\nOut of time in: {}", names.join(", "));
    }
    out
}

// ---------------------------------------------------------------------------
// JSON views; terms travel as decimal strings.

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MatchView {
    pub id: ANumber,
    pub name: String,
    pub start_position: usize,
    /// Sequence index of the first matched term.
    pub n: i64,
    pub matched_count: usize,
    pub edit_count: u8,
    pub window: Vec<String>,
}

impl MatchView {
    pub fn new(snap: &Snapshot, m: &MatchResult) -> MatchView {
        let e: Option<&Entry> = snap.catalog.get(m.id);
        let window = e.map_or(Vec::new(), |e| {
            let end = (m.start_position + m.matched_count).min(e.terms.len());
            strings(&e.terms.terms[m.start_position.min(end)..end])
        });
        MatchView {
            id: m.id,
            name: e.map_or(String::new(), |e| e.name.clone()),
            start_position: m.start_position,
            n: e.map_or(0, |e| e.terms.index_of(m.start_position)),
            matched_count: m.matched_count,
            edit_count: m.edit_count,
            window,
        }
    }
}

fn views(snap: &Snapshot, ms: &[MatchResult]) -> Vec<MatchView> {
    ms.iter().map(|m| MatchView::new(snap, m)).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LookupView {
    pub query: Vec<String>,
    pub matches: Vec<MatchView>,
}

impl LookupView {
    pub fn new(snap: &Snapshot, query: &[Term], ms: &[MatchResult]) -> LookupView {
        LookupView { query: strings(query), matches: views(snap, ms) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TransformView {
    pub transform: String,
    pub matches: Vec<MatchView>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ModelView {
    pub kind: &'static str,
    pub model: String,
    pub verified: bool,
    pub fit_terms: usize,
    pub held_out: usize,
    pub next_terms: Vec<String>,
    pub extrapolation_error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeekView {
    pub query: Vec<String>,
    pub verdict: Verdict,
    pub early_exit: bool,
    pub incomplete: Vec<Stage>,
    pub direct: Vec<MatchView>,
    pub fuzzy: Vec<MatchView>,
    pub via_transforms: Vec<TransformView>,
    pub models: Vec<ModelView>,
}

impl SeekView {
    pub fn new(snap: &Snapshot, query: &[Term], r: &SeekerReport) -> SeekView {
        SeekView {
            query: strings(query),
            verdict: r.verdict,
            early_exit: r.early_exit,
            incomplete: r.incomplete.clone(),
            direct: views(snap, &r.direct),
            fuzzy: views(snap, &r.fuzzy),
            via_transforms: r
                .via_transforms
                .iter()
                .map(|t| TransformView { transform: t.transform.clone(), matches: views(snap, &t.matches) })
                .collect(),
            models: r
                .guesses
                .models
                .iter()
                .map(|m| ModelView {
                    kind: m.model.kind(),
                    model: m.model.to_string(),
                    verified: m.verified,
                    fit_terms: m.split.fit_terms,
                    held_out: m.split.held_out,
                    next_terms: strings(&m.next_terms),
                    extrapolation_error: m.extrapolation_error.clone(),
                })
                .collect(),
        }
    }
}
