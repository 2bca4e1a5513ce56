//! Line-tagged entry records.
//!
//! Each line is `%<tag> <A-number> <payload>`:
//!
//! | tag | payload |
//! |-----|---------|
//! | `I` | offset of the first term (default 1) |
//! | `S` | comma-separated terms; several `%S` lines concatenate |
//! | `N` | name |
//! | `C` | comment |
//! | `D` | reference |
//! | `F` | formula |
//! | `P` | program text |
//! | `Y` | crossrefs, A-numbers separated by commas or spaces |
//! | `K` | keywords, comma-separated |
//!
//! `%S` and `%N` are required; `%I` and `%N` may appear at most once.

use std::collections::BTreeSet;

use thiserror::Error;

use super::{ANumber, Entry};
use crate::numcore::{canonical_match_text, parse_match_text, TermList};

/// Maximum width of a serialized `%S` line, unless a single term is wider.
pub const SEQUENCE_LINE_WIDTH: usize = 72;

const DEFAULT_OFFSET: i64 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("empty record")]
    Empty,
    #[error("line {line}: expected `%<tag> <A-number> <payload>`")]
    Malformed { line: usize },
    #[error("line {line}: unknown tag %{tag}")]
    UnknownTag { line: usize, tag: char },
    #[error("line {line}: invalid A-number {text:?}")]
    BadANumber { line: usize, text: String },
    #[error("line {line}: A-number {found} does not match record {expected}")]
    MismatchedId {
        line: usize,
        expected: ANumber,
        found: ANumber,
    },
    #[error("line {line}: malformed term {token:?}")]
    BadTerm { line: usize, token: String },
    #[error("line {line}: invalid offset {text:?}")]
    BadOffset { line: usize, text: String },
    #[error("line {line}: duplicate %{tag} line")]
    DuplicateTag { line: usize, tag: char },
    #[error("line {line}: record has no %{tag} line")]
    MissingTag { line: usize, tag: char },
}

pub fn parse_entry(record: &str) -> Result<Entry, ParseError> {
    parse_entry_at(record, 1)
}

/// Parses a record whose first line is line `first_line` of its source.
pub fn parse_entry_at(record: &str, first_line: usize) -> Result<Entry, ParseError> {
    let mut id: Option<ANumber> = None;
    let mut offset: Option<i64> = None;
    let mut name: Option<String> = None;
    let mut terms = Vec::new();
    let mut saw_terms = false;
    let mut keywords = BTreeSet::new();
    let (mut formulas, mut references, mut comments, mut programs) =
        (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    let mut crossrefs = Vec::new();
    let mut last_line = first_line;

    for (i, raw) in record.lines().enumerate() {
        let line = first_line + i;
        if raw.trim().is_empty() {
            continue;
        }
        last_line = line;
        let rest = raw.strip_prefix('%').ok_or(ParseError::Malformed { line })?;
        let mut chars = rest.chars();
        let tag = chars.next().ok_or(ParseError::Malformed { line })?;
        let rest = chars.as_str();
        let rest = rest.strip_prefix(' ').ok_or(ParseError::Malformed { line })?;
        let (anum_text, payload) = match rest.split_once(' ') {
            Some((a, p)) => (a, p.trim()),
            None => (rest.trim_end(), ""),
        };
        let found: ANumber = anum_text.parse().map_err(|_| ParseError::BadANumber {
            line,
            text: anum_text.to_string(),
        })?;
        match id {
            None => id = Some(found),
            Some(expected) if expected != found => {
                return Err(ParseError::MismatchedId {
                    line,
                    expected,
                    found,
                })
            }
            Some(_) => {}
        }
        match tag {
            'I' => {
                if offset.is_some() {
                    return Err(ParseError::DuplicateTag { line, tag });
                }
                let v = payload.parse().map_err(|_| ParseError::BadOffset {
                    line,
                    text: payload.to_string(),
                })?;
                offset = Some(v);
            }
            'S' => {
                saw_terms = true;
                let mut parsed = parse_match_text(payload).map_err(|e| match e {
                    crate::numcore::EncodeError::MalformedTerm { token, .. } => {
                        ParseError::BadTerm { line, token }
                    }
                    _ => ParseError::Malformed { line },
                })?;
                terms.append(&mut parsed);
            }
            'N' => {
                if name.is_some() {
                    return Err(ParseError::DuplicateTag { line, tag });
                }
                name = Some(payload.to_string());
            }
            'K' => keywords.extend(
                payload
                    .split(',')
                    .map(str::trim)
                    .filter(|k| !k.is_empty())
                    .map(String::from),
            ),
            'F' => formulas.push(payload.to_string()),
            'D' => references.push(payload.to_string()),
            'C' => comments.push(payload.to_string()),
            'P' => programs.push(payload.to_string()),
            'Y' => {
                for tok in payload.split([',', ' ']).filter(|t| !t.is_empty()) {
                    let x = tok.parse().map_err(|_| ParseError::BadANumber {
                        line,
                        text: tok.to_string(),
                    })?;
                    crossrefs.push(x);
                }
            }
            other => return Err(ParseError::UnknownTag { line, tag: other }),
        }
    }

    let id = id.ok_or(ParseError::Empty)?;
    if !saw_terms || terms.is_empty() {
        return Err(ParseError::MissingTag {
            line: last_line,
            tag: 'S',
        });
    }
    let name = name.ok_or(ParseError::MissingTag {
        line: last_line,
        tag: 'N',
    })?;
    Ok(Entry {
        id,
        name,
        terms: TermList::new(offset.unwrap_or(DEFAULT_OFFSET), terms),
        keywords,
        formulas,
        references,
        crossrefs,
        comments,
        programs,
    })
}

fn push_line(out: &mut String, tag: char, id: ANumber, payload: &str) {
    out.push('%');
    out.push(tag);
    out.push(' ');
    out.push_str(&id.to_string());
    if !payload.is_empty() {
        out.push(' ');
        out.push_str(payload);
    }
    out.push('\n');
}

/// Renders a record. Text fields are expected to be single lines without
/// surrounding whitespace; `%S` lines wrap at [`SEQUENCE_LINE_WIDTH`].
pub fn serialize_entry(e: &Entry) -> String {
    let mut out = String::new();
    push_line(&mut out, 'I', e.id, &e.terms.offset.to_string());

    let prefix_len = "%S A000000 ".len();
    let mut line = String::new();
    let n = e.terms.len();
    for (i, t) in e.terms.terms.iter().enumerate() {
        let mut tok = canonical_match_text(std::slice::from_ref(t));
        if i + 1 < n {
            tok.push(',');
        }
        if !line.is_empty() && prefix_len + line.len() + tok.len() > SEQUENCE_LINE_WIDTH {
            push_line(&mut out, 'S', e.id, &line);
            line.clear();
        }
        line.push_str(&tok);
    }
    if !line.is_empty() {
        push_line(&mut out, 'S', e.id, &line);
    }

    push_line(&mut out, 'N', e.id, &e.name);
    for c in &e.comments {
        push_line(&mut out, 'C', e.id, c);
    }
    for d in &e.references {
        push_line(&mut out, 'D', e.id, d);
    }
    for f in &e.formulas {
        push_line(&mut out, 'F', e.id, f);
    }
    for p in &e.programs {
        push_line(&mut out, 'P', e.id, p);
    }
    if !e.crossrefs.is_empty() {
        let refs: Vec<String> = e.crossrefs.iter().map(ToString::to_string).collect();
        push_line(&mut out, 'Y', e.id, &refs.join(", "));
    }
    if !e.keywords.is_empty() {
        let kw: Vec<&str> = e.keywords.iter().map(String::as_str).collect();
        push_line(&mut out, 'K', e.id, &kw.join(","));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    const SCHROEDER: &str = "%S A001003 1,1,3,11,45\n%N A001003 Schroeder's second problem\n";

    #[test]
    fn minimal_record() {
        let e = parse_entry(SCHROEDER).unwrap();
        assert_eq!(e.id.to_string(), "A001003");
        assert_eq!(e.terms.len(), 5);
        assert_eq!(e.terms.offset, 1);
        assert_eq!(e.name, "Schroeder's second problem");
    }

    #[test]
    fn split_sequence_lines_concatenate() {
        let split = "%S A001003 1,1,3,\n%S A001003 11,45\n%N A001003 Schroeder's second problem\n";
        assert_eq!(parse_entry(split).unwrap(), parse_entry(SCHROEDER).unwrap());
        let no_trailing_comma =
            "%S A001003 1,1,3\n%S A001003 11,45\n%N A001003 Schroeder's second problem\n";
        assert_eq!(parse_entry(no_trailing_comma).unwrap(), parse_entry(SCHROEDER).unwrap());
    }

    #[test]
    fn keywords_and_short_ids() {
        let rec = "%I A1003 0\n%S A1003 1,2,3\n%N A1003 x\n%K A1003 uned, nonn\n%Y A1003 A000108, A1006\n";
        let e = parse_entry(rec).unwrap();
        assert!(e.has_keyword("uned"));
        assert!(e.has_keyword("nonn"));
        assert_eq!(e.terms.offset, 0);
        assert_eq!(e.crossrefs.len(), 2);
        assert!(serialize_entry(&e).contains("%Y A001003 A000108, A001006\n"));
    }

    #[test]
    fn rejections() {
        let cases: &[(&str, ParseError)] = &[
            ("%N A000001 x\n", ParseError::MissingTag { line: 1, tag: 'S' }),
            ("%S A000001 1,2\n%C A000001 c\n", ParseError::MissingTag { line: 2, tag: 'N' }),
            ("%S A000001 1,2,z\n%N A000001 x\n", ParseError::BadTerm { line: 1, token: "z".into() }),
            ("%S A000001 1\n%Q A000001 x\n", ParseError::UnknownTag { line: 2, tag: 'Q' }),
            ("%S A000001 1\n%N A000002 x\n", ParseError::MismatchedId {
                line: 2,
                expected: ANumber::new(1).unwrap(),
                found: ANumber::new(2).unwrap(),
            }),
            ("S A000001 1\n", ParseError::Malformed { line: 1 }),
            ("%S B000001 1\n", ParseError::BadANumber { line: 1, text: "B000001".into() }),
            ("%I A000001 x\n", ParseError::BadOffset { line: 1, text: "x".into() }),
            ("%S A000001 1\n%N A000001 a\n%N A000001 b\n", ParseError::DuplicateTag { line: 3, tag: 'N' }),
            ("", ParseError::Empty),
        ];
        for (rec, want) in cases {
            assert_eq!(&parse_entry(rec).unwrap_err(), want, "{rec:?}");
        }
    }

    #[test]
    fn empty_lists_emit_no_lines() {
        let e = parse_entry(SCHROEDER).unwrap();
        let text = serialize_entry(&e);
        assert!(!text.contains("%F"));
        assert!(!text.contains("%K"));
        assert_eq!(text, format!("%I A001003 1\n{SCHROEDER}"));
    }

    #[test]
    fn long_entries_wrap() {
        let terms: Vec<BigInt> = (0..100u64).map(|i| BigInt::from(i * i * 1_000_003)).collect();
        let e = Entry::new(ANumber::new(42).unwrap(), "squares-ish", TermList::new(0, terms));
        let text = serialize_entry(&e);
        let s_lines: Vec<&str> = text.lines().filter(|l| l.starts_with("%S")).collect();
        assert!(s_lines.len() > 1);
        assert!(s_lines.iter().all(|l| l.len() <= SEQUENCE_LINE_WIDTH));
        assert_eq!(parse_entry(&text).unwrap(), e);
    }

    fn text_field() -> impl Strategy<Value = String> {
        "[A-Za-z0-9][A-Za-z0-9 ,.()=+*/'^-]{0,40}[A-Za-z0-9.)]"
    }

    prop_compose! {
        fn arb_entry()(
            id in 1u32..=999_999,
            offset in -5i64..5,
            terms in prop::collection::vec(any::<i64>(), 1..60),
            big in prop::collection::vec("-?[1-9][0-9]{20,90}", 0..3),
            name in text_field(),
            keywords in prop::collection::btree_set("[a-z]{3,6}", 0..4),
            formulas in prop::collection::vec(text_field(), 0..3),
            references in prop::collection::vec(text_field(), 0..3),
            comments in prop::collection::vec(text_field(), 0..3),
            programs in prop::collection::vec(text_field(), 0..2),
            crossrefs in prop::collection::vec(1u32..=999_999, 0..4),
        ) -> Entry {
            let mut terms: Vec<BigInt> = terms.into_iter().map(BigInt::from).collect();
            terms.extend(big.iter().map(|s| s.parse::<BigInt>().unwrap()));
            Entry {
                id: ANumber::new(id).unwrap(),
                name,
                terms: TermList::new(offset, terms),
                keywords,
                formulas,
                references,
                crossrefs: crossrefs.into_iter().map(|x| ANumber::new(x).unwrap()).collect(),
                comments,
                programs,
            }
        }
    }

    proptest! {
        #[test]
        fn parse_inverts_serialize(e in arb_entry()) {
            let text = serialize_entry(&e);
            prop_assert_eq!(parse_entry(&text).unwrap(), e.clone());
            // canonical text is a fixed point
            prop_assert_eq!(serialize_entry(&parse_entry(&text).unwrap()), text);
        }
    }
}
