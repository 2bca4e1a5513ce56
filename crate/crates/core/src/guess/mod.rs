//! Exact guessing of closed forms and recurrences.
//!
//! Four model families are fitted with rational linear algebra: constant
//! coefficient recurrences, polynomials in `n`, rational functions of `n` and
//! recurrences with polynomial coefficients. Every guesser fits on a prefix
//! and keeps `max(3, len / 5)` trailing terms back for verification.
//!
//! Indices follow the term list offset: position `k` holds `a(offset + k)`.

mod linalg;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exec::{self, Mode};
use crate::numcore::{RationalPair, Term, TermList};

type Q = RationalPair;

pub const DEFAULT_MAX_ORDER: usize = 8;
pub const DEFAULT_MAX_DEGREE: usize = 4;
pub const DEFAULT_MAX_TOTAL_DEGREE: usize = 4;
pub const DEFAULT_EXTRAPOLATE: usize = 5;
pub const MIN_HELD_OUT: usize = 3;

/// Number of trailing terms reserved for verification.
pub fn held_out_count(len: usize) -> usize {
    MIN_HELD_OUT.max(len / 5)
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GuessError {
    #[error("need at least {needed} terms, got {got}")]
    TooShort { needed: usize, got: usize },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExtrapolateError {
    /// The leading coefficient of the recurrence vanishes at `n`.
    #[error("singular step: leading coefficient vanishes at n = {n}")]
    SingularStep { n: i64 },
    #[error("model gives a non-integer value at n = {n}")]
    NonIntegral { n: i64 },
}

/// How many terms were used to fit a model and how many only checked it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FitSplit {
    pub fit_terms: usize,
    pub held_out: usize,
}

/// `a(n) = sum_{i=1}^{order} c_i a(n - i)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RecurrenceModel {
    pub coefficients: Vec<Q>,
    pub initial_terms: TermList,
    pub split: FitSplit,
}

impl RecurrenceModel {
    pub fn order(&self) -> usize {
        self.coefficients.len()
    }
}

/// `a(n) = sum_j c_j n^j`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PolynomialModel {
    pub coefficients: Vec<Q>,
    pub split: FitSplit,
}

impl PolynomialModel {
    pub fn degree(&self) -> usize {
        self.coefficients.len().saturating_sub(1)
    }
}

/// `a(n) = P(n) / Q(n)` with monic `Q`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalFunctionModel {
    pub numerator: Vec<Q>,
    pub denominator: Vec<Q>,
    pub split: FitSplit,
}

/// `sum_{i=0}^{order} p_i(n) a(n + i) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PRecursiveModel {
    /// `coefficients[i][j]` is the coefficient of `n^j` in `p_i`.
    pub coefficients: Vec<Vec<BigInt>>,
    pub degree_bound: usize,
    /// The solution space had more than one dimension.
    pub ambiguous: bool,
    pub split: FitSplit,
}

impl PRecursiveModel {
    pub fn order(&self) -> usize {
        self.coefficients.len() - 1
    }

    /// Largest actual degree among the coefficient polynomials.
    pub fn degree(&self) -> usize {
        self.coefficients
            .iter()
            .filter_map(|p| poly_degree(p))
            .max()
            .unwrap_or(0)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Model {
    LinearRecurrence(RecurrenceModel),
    Polynomial(PolynomialModel),
    RationalFunction(RationalFunctionModel),
    PRecursive(PRecursiveModel),
}

impl Model {
    pub fn kind(&self) -> &'static str {
        match self {
            Model::LinearRecurrence(_) => "linear_recurrence",
            Model::Polynomial(_) => "polynomial",
            Model::RationalFunction(_) => "rational_function",
            Model::PRecursive(_) => "p_recursive",
        }
    }

    pub fn split(&self) -> FitSplit {
        match self {
            Model::LinearRecurrence(m) => m.split,
            Model::Polynomial(m) => m.split,
            Model::RationalFunction(m) => m.split,
            Model::PRecursive(m) => m.split,
        }
    }
}

/// Search bounds shared by all guessers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct GuessBounds {
    pub max_order: usize,
    pub max_degree: usize,
    pub max_total_degree: usize,
    pub extrapolate: usize,
}

impl Default for GuessBounds {
    fn default() -> Self {
        GuessBounds {
            max_order: DEFAULT_MAX_ORDER,
            max_degree: DEFAULT_MAX_DEGREE,
            max_total_degree: DEFAULT_MAX_TOTAL_DEGREE,
            extrapolate: DEFAULT_EXTRAPOLATE,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FittedModel {
    pub model: Model,
    pub split: FitSplit,
    pub verified: bool,
    pub next_terms: Vec<Term>,
    pub extrapolation_error: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct GuessReport {
    pub models: Vec<FittedModel>,
}

impl GuessReport {
    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn find(&self, kind: &str) -> Option<&FittedModel> {
        self.models.iter().find(|m| m.model.kind() == kind)
    }
}

// ---------------------------------------------------------------------------
// polynomial helpers

fn poly_degree(p: &[BigInt]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn eval_z(p: &[BigInt], n: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * n + c)
}

fn eval_q(p: &[Q], n: &BigInt) -> Q {
    let nq = Q::from_integer(n.clone());
    p.iter().rev().fold(Q::zero(), |acc, c| acc * &nq + c)
}

fn trim_q(mut p: Vec<Q>) -> Vec<Q> {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn powers(n: &BigInt, d: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(d + 1);
    let mut x = BigInt::one();
    for _ in 0..=d {
        out.push(x.clone());
        x *= n;
    }
    out
}

fn index(a: &TermList, k: usize) -> BigInt {
    BigInt::from(a.offset) + BigInt::from(k)
}

fn to_integer(q: Q, n: i64) -> Result<Term, ExtrapolateError> {
    if q.is_integer() {
        Ok(q.to_integer())
    } else {
        Err(ExtrapolateError::NonIntegral { n })
    }
}

fn require(len: usize, needed: usize) -> Result<(), GuessError> {
    if len < needed {
        Err(GuessError::TooShort { needed, got: len })
    } else {
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// constant-coefficient recurrences

fn hankel(a: &[Term], order: usize, upto: usize) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
    (order..upto)
        .map(|n| ((1..=order).map(|i| a[n - i].clone()).collect(), a[n].clone()))
        .unzip()
}

/// Minimal-order constant-coefficient recurrence reproducing every term.
///
/// Orders above `(len - 2) / 2` are not tried. Each order is first solved
/// on the training prefix. When that system does not pin the coefficients
/// down, the full system decides; it is overdetermined by at least two
/// equations at every order tried.
pub fn guess_linear_recurrence(
    a: &TermList,
    max_order: usize,
) -> Result<Option<RecurrenceModel>, GuessError> {
    require(a.len(), 4)?;
    let terms = a.as_slice();
    let len = terms.len();
    let train = len - held_out_count(len);
    for order in 1..=max_order.min((len - 2) / 2) {
        let (m, b) = hankel(terms, order, train.max(order));
        let Some((x, basis)) = linalg::solve(&m, &b) else {
            continue;
        };
        let (coefficients, split) = if basis.is_empty() && !m.is_empty() {
            (x, FitSplit { fit_terms: train, held_out: len - train })
        } else {
            let (m, b) = hankel(terms, order, len);
            let Some((x, _)) = linalg::solve(&m, &b) else {
                continue;
            };
            (x, FitSplit { fit_terms: len, held_out: 0 })
        };
        let model = RecurrenceModel {
            coefficients,
            initial_terms: TermList::new(a.offset, terms[..order].to_vec()),
            split,
        };
        if verify_linear(&model, terms) {
            return Ok(Some(model));
        }
    }
    Ok(None)
}

fn verify_linear(m: &RecurrenceModel, terms: &[Term]) -> bool {
    let r = m.order();
    terms.len() >= r
        && terms[..r] == m.initial_terms.terms[..]
        && (r..terms.len()).all(|n| {
            let v: Q = (1..=r)
                .map(|i| &m.coefficients[i - 1] * Q::from_integer(terms[n - i].clone()))
                .sum();
            v == Q::from_integer(terms[n].clone())
        })
}

// ---------------------------------------------------------------------------
// polynomials

/// Exact interpolating polynomial found by finite differences.
///
/// Degree `d` is accepted when the `d`-th difference row is constant with
/// at least three entries and at least `max(3, len / 5)` terms remain
/// beyond the `d + 1` that determine the interpolant.
pub fn guess_polynomial(a: &TermList) -> Result<Option<PolynomialModel>, GuessError> {
    require(a.len(), 4)?;
    let len = a.len();
    let held = held_out_count(len);
    let mut row: Vec<BigInt> = a.terms.clone();
    let mut leading = Vec::new();
    for d in 0..len {
        leading.push(row[0].clone());
        if row.len() < 3 || len < d + 1 + held {
            return Ok(None);
        }
        if row.iter().all(|x| *x == row[0]) {
            let model = PolynomialModel {
                coefficients: newton_to_monomial(&leading, a.offset),
                split: FitSplit { fit_terms: d + 1, held_out: len - d - 1 },
            };
            return Ok(verify_polynomial(&model, a).then_some(model));
        }
        row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    Ok(None)
}

/// `sum_k delta_k * C(n - start, k)` expanded in powers of `n`.
fn newton_to_monomial(deltas: &[BigInt], start: i64) -> Vec<Q> {
    let mut out = vec![Q::zero(); deltas.len()];
    // basis = prod_{j<k} (n - start - j), built incrementally
    let mut basis = vec![Q::one()];
    let mut fact = BigInt::one();
    for (k, delta) in deltas.iter().enumerate() {
        if k > 0 {
            fact *= k;
            let shift = Q::from_integer(BigInt::from(start) + (k - 1));
            let mut next = vec![Q::zero(); basis.len() + 1];
            for (i, c) in basis.iter().enumerate() {
                next[i + 1] += c;
                next[i] -= c * &shift;
            }
            basis = next;
        }
        let scale = Q::new(delta.clone(), fact.clone());
        for (i, c) in basis.iter().enumerate() {
            out[i] += c * &scale;
        }
    }
    trim_q(out)
}

fn verify_polynomial(m: &PolynomialModel, a: &TermList) -> bool {
    (0..a.len()).all(|k| eval_q(&m.coefficients, &index(a, k)) == Q::from_integer(a.terms[k].clone()))
}

// ---------------------------------------------------------------------------
// rational functions

/// Smallest total degree `P/Q` fitted on the training prefix and exact on
/// every held-out term. Among equal total degrees, lower denominator
/// degree wins. Total degrees above `len - 4` are not tried.
pub fn guess_rational_function(
    a: &TermList,
    max_total_degree: usize,
) -> Result<Option<RationalFunctionModel>, GuessError> {
    require(a.len(), 4)?;
    let len = a.len();
    let train = len - held_out_count(len);
    for total in 0..=max_total_degree.min(len - 4) {
        for qdeg in 0..=total {
            let pdeg = total - qdeg;
            let rows: Vec<Vec<BigInt>> = (0..train)
                .map(|k| {
                    let pw = powers(&index(a, k), total);
                    let mut row: Vec<BigInt> = pw[..=pdeg].iter().map(|x| -x).collect();
                    row.extend(pw[..=qdeg].iter().map(|x| x * &a.terms[k]));
                    row
                })
                .collect();
            for v in linalg::nullspace(rows, pdeg + qdeg + 2) {
                let (p, q) = v.split_at(pdeg + 1);
                let Some(lead) = poly_degree(q) else { continue };
                let lc = Q::from_integer(q[lead].clone());
                let model = RationalFunctionModel {
                    numerator: trim_q(p.iter().map(|c| Q::from_integer(c.clone()) / &lc).collect()),
                    denominator: q[..=lead].iter().map(|c| Q::from_integer(c.clone()) / &lc).collect(),
                    split: FitSplit { fit_terms: train, held_out: len - train },
                };
                if verify_rational(&model, a) {
                    return Ok(Some(model));
                }
            }
        }
    }
    Ok(None)
}

fn verify_rational(m: &RationalFunctionModel, a: &TermList) -> bool {
    (0..a.len()).all(|k| {
        let n = index(a, k);
        let den = eval_q(&m.denominator, &n);
        !den.is_zero() && eval_q(&m.numerator, &n) / den == Q::from_integer(a.terms[k].clone())
    })
}

// ---------------------------------------------------------------------------
// recurrences with polynomial coefficients

fn p_recursive_rows(a: &TermList, order: usize, degree: usize, upto: usize) -> Vec<Vec<BigInt>> {
    (0..upto.saturating_sub(order))
        .map(|k| {
            let pw = powers(&index(a, k), degree);
            (0..=order)
                .flat_map(|i| pw.iter().map(move |x| x * &a.terms[k + i]))
                .collect()
        })
        .collect()
}

fn degree_vector(p: &[Vec<BigInt>]) -> Vec<i64> {
    p.iter()
        .map(|c| poly_degree(c).map_or(-1, |d| d as i64))
        .collect()
}

/// Minimal (order, then degree) recurrence `sum_i p_i(n) a(n + i) = 0`.
///
/// Coefficients are integers with gcd 1 and `p_order` has a positive
/// leading coefficient. When several independent solutions verify, the one
/// with the lexicographically smallest degree vector is returned and the
/// model is flagged ambiguous. A pair is tried only when
/// `(order + 1)(degree + 1) + order + 3 <= len`.
pub fn guess_p_recursive(
    a: &TermList,
    max_order: usize,
    max_degree: usize,
) -> Result<Option<PRecursiveModel>, GuessError> {
    require(a.len(), p_recursive_len(1, 0))?;
    let len = a.len();
    let train = len - held_out_count(len);
    for order in 1..=max_order {
        for degree in 0..=max_degree {
            let unknowns = (order + 1) * (degree + 1);
            if p_recursive_len(order, degree) > len || train < order + unknowns {
                continue;
            }
            let basis = linalg::nullspace(p_recursive_rows(a, order, degree, train), unknowns);
            let dimension = basis.len();
            let mut candidates: Vec<PRecursiveModel> = basis
                .into_iter()
                .filter_map(|v| {
                    let mut coefficients: Vec<Vec<BigInt>> =
                        v.chunks(degree + 1).map(<[BigInt]>::to_vec).collect();
                    let lead = poly_degree(&coefficients[order])?;
                    if coefficients[order][lead].is_negative() {
                        for c in coefficients.iter_mut().flatten() {
                            *c = -&*c;
                        }
                    }
                    let model = PRecursiveModel {
                        coefficients,
                        degree_bound: degree,
                        ambiguous: dimension > 1,
                        split: FitSplit { fit_terms: train, held_out: len - train },
                    };
                    verify_p_recursive(&model, a).then_some(model)
                })
                .collect();
            candidates.sort_by(|x, y| {
                degree_vector(&x.coefficients)
                    .cmp(&degree_vector(&y.coefficients))
                    .then_with(|| x.coefficients.cmp(&y.coefficients))
            });
            if let Some(model) = candidates.into_iter().next() {
                return Ok(Some(model));
            }
        }
    }
    Ok(None)
}

fn p_recursive_len(order: usize, degree: usize) -> usize {
    (order + 1) * (degree + 1) + order + 3
}

fn verify_p_recursive(m: &PRecursiveModel, a: &TermList) -> bool {
    let r = m.order();
    (0..a.len().saturating_sub(r)).all(|k| {
        let n = index(a, k);
        let s: BigInt = (0..=r).map(|i| eval_z(&m.coefficients[i], &n) * &a.terms[k + i]).sum();
        s.is_zero()
    })
}

// ---------------------------------------------------------------------------
// verification and extension

/// Exact reproduction of every term of `a`.
pub fn verify_model(model: &Model, a: &TermList) -> bool {
    match model {
        Model::LinearRecurrence(m) => a.offset == m.initial_terms.offset && verify_linear(m, &a.terms),
        Model::Polynomial(m) => verify_polynomial(m, a),
        Model::RationalFunction(m) => verify_rational(m, a),
        Model::PRecursive(m) => verify_p_recursive(m, a),
    }
}

/// The `count` terms following `a` under `model`.
pub fn extrapolate(model: &Model, a: &TermList, count: usize) -> Result<TermList, ExtrapolateError> {
    let next_index = a.offset + a.len() as i64;
    let mut terms = a.terms.clone();
    for step in 0..count {
        let n = next_index + step as i64;
        let nb = BigInt::from(n);
        let value = match model {
            Model::LinearRecurrence(m) => {
                let r = m.order();
                let v: Q = (1..=r)
                    .map(|i| &m.coefficients[i - 1] * Q::from_integer(terms[terms.len() - i].clone()))
                    .sum();
                to_integer(v, n)?
            }
            Model::Polynomial(m) => to_integer(eval_q(&m.coefficients, &nb), n)?,
            Model::RationalFunction(m) => {
                let den = eval_q(&m.denominator, &nb);
                if den.is_zero() {
                    return Err(ExtrapolateError::SingularStep { n });
                }
                to_integer(eval_q(&m.numerator, &nb) / den, n)?
            }
            Model::PRecursive(m) => {
                let r = m.order();
                let base = n - r as i64;
                let bb = BigInt::from(base);
                let lead = eval_z(&m.coefficients[r], &bb);
                if lead.is_zero() {
                    return Err(ExtrapolateError::SingularStep { n: base });
                }
                let first = terms.len() - r;
                let rest: BigInt = (0..r)
                    .map(|i| eval_z(&m.coefficients[i], &bb) * &terms[first + i])
                    .sum();
                to_integer(Q::new(-rest, lead), n)?
            }
        };
        terms.push(value);
    }
    Ok(TermList::new(next_index, terms.split_off(a.len())))
}

/// Runs every guesser; each tries only the sizes the data length supports.
pub fn guess_all(a: &TermList, bounds: &GuessBounds, mode: Mode) -> GuessReport {
    let jobs = [0u8, 1, 2, 3];
    let found = exec::map(mode, &jobs, |&job| -> Option<Model> {
        match job {
            0 => guess_linear_recurrence(a, bounds.max_order).ok()?.map(Model::LinearRecurrence),
            1 => guess_polynomial(a).ok()?.map(Model::Polynomial),
            2 => guess_rational_function(a, bounds.max_total_degree).ok()?.map(Model::RationalFunction),
            _ => guess_p_recursive(a, bounds.max_order, bounds.max_degree).ok()?.map(Model::PRecursive),
        }
    });
    let models = found
        .into_iter()
        .flatten()
        .map(|model| {
            let (next_terms, extrapolation_error) = match extrapolate(&model, a, bounds.extrapolate) {
                Ok(t) => (t.terms, None),
                Err(e) => (Vec::new(), Some(e.to_string())),
            };
            FittedModel {
                split: model.split(),
                verified: verify_model(&model, a),
                model,
                next_terms,
                extrapolation_error,
            }
        })
        .collect();
    GuessReport { models }
}

// ---------------------------------------------------------------------------
// display

struct PolyFmt<'a, T>(&'a [T]);

impl<T: fmt::Display + Signed> fmt::Display for PolyFmt<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            match (first, c.is_negative()) {
                (true, true) => f.write_str("-")?,
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
                (true, false) => {}
            }
            first = false;
            let unit = mag.is_one() && j > 0;
            if !unit {
                write!(f, "{mag}")?;
            }
            match j {
                0 => {}
                1 if unit => f.write_str("n")?,
                1 => f.write_str("*n")?,
                _ if unit => write!(f, "n^{j}")?,
                _ => write!(f, "*n^{j}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::LinearRecurrence(m) => {
                f.write_str("a(n) = ")?;
                let parts: Vec<String> = m
                    .coefficients
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(i, c)| format!("({c})*a(n-{})", i + 1))
                    .collect();
                if parts.is_empty() {
                    f.write_str("0")
                } else {
                    f.write_str(&parts.join(" + "))
                }
            }
            Model::Polynomial(m) => write!(f, "a(n) = {}", PolyFmt(&m.coefficients)),
            Model::RationalFunction(m) => {
                write!(f, "a(n) = ({}) / ({})", PolyFmt(&m.numerator), PolyFmt(&m.denominator))
            }
            Model::PRecursive(m) => {
                let parts: Vec<String> = m
                    .coefficients
                    .iter()
                    .enumerate()
                    .rev()
                    .filter(|(_, p)| poly_degree(p).is_some())
                    .map(|(i, p)| match i {
                        0 => format!("({})*a(n)", PolyFmt(p)),
                        _ => format!("({})*a(n+{i})", PolyFmt(p)),
                    })
                    .collect();
                write!(f, "{} = 0", parts.join(" + "))
            }
        }
    }
}
