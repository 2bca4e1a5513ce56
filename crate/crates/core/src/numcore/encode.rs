//! Flattening conventions for tables and rational sequences, and the
//! canonical comma-separated text used for matching.

use num_bigint::BigInt;
use thiserror::Error;

use super::{RationalPair, Term, TermList};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum EncodeError {
    #[error("triangle row {row} has {found} entries, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        found: usize,
    },
    #[error("flattening depth must be at least 1")]
    ZeroDepth,
    #[error("malformed term {token:?} at position {position}")]
    MalformedTerm { position: usize, token: String },
}

/// Concatenates the rows of a triangle, row `r` holding `r + 1` entries.
pub fn flatten_triangle_by_rows(rows: &[Vec<Term>]) -> Result<TermList, EncodeError> {
    let mut out = Vec::with_capacity(rows.iter().map(Vec::len).sum());
    for (r, row) in rows.iter().enumerate() {
        if row.len() != r + 1 {
            return Err(EncodeError::RaggedRow {
                row: r,
                expected: r + 1,
                found: row.len(),
            });
        }
        out.extend(row.iter().cloned());
    }
    Ok(TermList::new(0, out))
}

/// Reads a square array by antidiagonals: for `d` in `0..depth` emits
/// `cell(0, d), cell(1, d - 1), ..., cell(d, 0)`.
pub fn flatten_square_by_antidiagonals<F>(cell: F, depth: u64) -> Result<TermList, EncodeError>
where
    F: Fn(u64, u64) -> Term,
{
    if depth == 0 {
        return Err(EncodeError::ZeroDepth);
    }
    let mut out = Vec::new();
    for d in 0..depth {
        for row in 0..=d {
            out.push(cell(row, d - row));
        }
    }
    Ok(TermList::new(0, out))
}

/// Splits rationals into parallel numerator and denominator lists.
pub fn link_rationals(values: &[RationalPair]) -> (TermList, TermList) {
    let (nums, dens) = values
        .iter()
        .map(|q| (q.numer().clone(), q.denom().clone()))
        .unzip();
    (TermList::new(0, nums), TermList::new(0, dens))
}

/// Base-10 terms joined by commas, no spaces.
pub fn canonical_match_text(terms: &[Term]) -> String {
    let mut s = String::new();
    for (i, t) in terms.iter().enumerate() {
        if i > 0 {
            s.push(',');
        }
        s.push_str(&t.to_string());
    }
    s
}

/// Inverse of [`canonical_match_text`]. Accepts optional whitespace around
/// terms and ignores one trailing comma; the empty string is the empty list.
pub fn parse_match_text(text: &str) -> Result<Vec<Term>, EncodeError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Ok(Vec::new());
    }
    let body = trimmed.strip_suffix(',').unwrap_or(trimmed);
    body.split(',')
        .enumerate()
        .map(|(i, tok)| parse_term(tok.trim()).ok_or_else(|| EncodeError::MalformedTerm {
            position: i,
            token: tok.to_string(),
        }))
        .collect()
}

/// Parses one decimal integer with an optional leading minus sign.
pub(crate) fn parse_term(tok: &str) -> Option<Term> {
    let digits = tok.strip_prefix('-').unwrap_or(tok);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    tok.parse::<BigInt>().ok()
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::{binomial_coefficient, nim_sum};

    fn ints(v: &[i64]) -> Vec<Term> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn pascal_rows() {
        let rows: Vec<Vec<Term>> = (0..5)
            .map(|n| (0..=n).map(|k| binomial_coefficient(n, k)).collect())
            .collect();
        let flat = flatten_triangle_by_rows(&rows).unwrap();
        assert_eq!(flat.match_text(), "1,1,1,1,2,1,1,3,3,1,1,4,6,4,1");
        let one = flatten_triangle_by_rows(&[ints(&[9])]).unwrap();
        assert_eq!(one.terms, ints(&[9]));
        let zeros: Vec<Vec<Term>> = (0..4).map(|r| ints(&vec![0; r + 1])).collect();
        assert_eq!(flatten_triangle_by_rows(&zeros).unwrap().terms, ints(&[0; 10]));
    }

    #[test]
    fn ragged_triangle_rejected() {
        let err = flatten_triangle_by_rows(&[ints(&[1]), ints(&[1, 2, 3])]).unwrap_err();
        assert_eq!(
            err,
            EncodeError::RaggedRow {
                row: 1,
                expected: 2,
                found: 3
            }
        );
    }

    #[test]
    fn antidiagonals() {
        let nim = |r: u64, c: u64| nim_sum(&BigInt::from(r), &BigInt::from(c));
        let flat = flatten_square_by_antidiagonals(nim, 5).unwrap();
        assert_eq!(flat.match_text(), "0,1,1,2,0,2,3,3,3,3,4,2,0,2,4");
        let deeper = flatten_square_by_antidiagonals(nim, 6).unwrap();
        assert_eq!(deeper.terms[..15], flat.terms[..]);
        assert_eq!(deeper.len(), 21);
        let first = flatten_square_by_antidiagonals(|_, _| BigInt::from(7), 1).unwrap();
        assert_eq!(first.terms, ints(&[7]));
        let sums =
            flatten_square_by_antidiagonals(|r, c| BigInt::from(r + c), 3).unwrap();
        assert_eq!(sums.terms, ints(&[0, 1, 1, 2, 2, 2]));
        assert_eq!(
            flatten_square_by_antidiagonals(nim, 0),
            Err(EncodeError::ZeroDepth)
        );
    }

    #[test]
    fn linked_rationals() {
        let q = |n: i64, d: i64| RationalPair::new(n.into(), d.into());
        let (n, d) = link_rationals(&[q(1, 1), q(-1, 2), q(1, 6)]);
        assert_eq!(n.terms, ints(&[1, -1, 1]));
        assert_eq!(d.terms, ints(&[1, 2, 6]));
        let (n, d) = link_rationals(&[]);
        assert!(n.is_empty() && d.is_empty());
        let (n, d) = link_rationals(&[q(10, 2)]);
        assert_eq!((n.terms, d.terms), (ints(&[5]), ints(&[1])));
        // stored reduced with positive denominator
        let (n, d) = link_rationals(&[q(3, -6)]);
        assert_eq!((n.terms, d.terms), (ints(&[-1]), ints(&[2])));
    }

    #[test]
    fn match_text() {
        assert_eq!(canonical_match_text(&ints(&[1, 1, 3, 11, 45])), "1,1,3,11,45");
        assert_eq!(canonical_match_text(&ints(&[-1, 0])), "-1,0");
        assert_eq!(canonical_match_text(&[]), "");
        assert_eq!(parse_match_text("1, 1,3 ,11,45").unwrap(), ints(&[1, 1, 3, 11, 45]));
        assert_eq!(parse_match_text("-1,0,").unwrap(), ints(&[-1, 0]));
        assert_eq!(parse_match_text("").unwrap(), Vec::<Term>::new());
        assert!(parse_match_text("1,+2").is_err());
        assert!(parse_match_text("1,,2").is_err());
        assert!(parse_match_text("1,x").is_err());
        assert!(parse_match_text("-").is_err());
    }
}
