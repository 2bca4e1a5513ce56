//! Invertible sequence transforms and the registry applied during
//! identification.
//!
//! Arithmetic is exact over rationals. Indexing differs per transform and is
//! part of each registry entry:
//!
//! - binomial pair, partial sums, differences, self-convolution and
//!   alternating signs read position `i` as `n = i` (0-indexed);
//! - divisor (Möbius) pair, Euler pair and division by index read position
//!   `i` as `n = i + 1` (1-indexed).

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exec::{self, Mode};
use crate::numcore::{binomial_coefficient, divisors, moebius_mu, RationalPair, Term, TermList};

type Q = RationalPair;

fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn binom_q(n: usize, k: usize) -> Q {
    Q::from_integer(binomial_coefficient(n as i64, k as i64))
}

/// `b_n = sum_{k=0}^{n} C(n, k) a_k`
pub fn binomial_transform(a: &[Q]) -> Vec<Q> {
    (0..a.len())
        .map(|n| (0..=n).map(|k| binom_q(n, k) * &a[k]).sum())
        .collect()
}

/// `a_n = sum_{k=0}^{n} (-1)^(n-k) C(n, k) b_k`
pub fn inverse_binomial_transform(b: &[Q]) -> Vec<Q> {
    (0..b.len())
        .map(|n| {
            (0..=n)
                .map(|k| {
                    let t = binom_q(n, k) * &b[k];
                    if (n - k) % 2 == 0 {
                        t
                    } else {
                        -t
                    }
                })
                .sum()
        })
        .collect()
}

/// `b_n = sum_{d | n} a_d`, 1-indexed.
pub fn moebius_divisor_transform(a: &[Q]) -> Vec<Q> {
    (1..=a.len() as u64)
        .map(|n| divisors(n).iter().map(|&d| a[d as usize - 1].clone()).sum())
        .collect()
}

/// `a_n = sum_{d | n} mu(n / d) b_d`, 1-indexed.
pub fn inverse_moebius_divisor_transform(b: &[Q]) -> Vec<Q> {
    (1..=b.len() as u64)
        .map(|n| {
            divisors(n)
                .iter()
                .map(|&d| &b[d as usize - 1] * q_int(moebius_mu(n / d) as i64))
                .sum()
        })
        .collect()
}

/// `1 + sum b_n x^n = prod_{n >= 1} (1 - x^n)^(-a_n)`, 1-indexed.
pub fn euler_transform(a: &[Q]) -> Vec<Q> {
    let len = a.len();
    let c: Vec<Q> = (1..=len as u64)
        .map(|n| {
            divisors(n)
                .iter()
                .map(|&d| q_int(d as i64) * &a[d as usize - 1])
                .sum()
        })
        .collect();
    let mut b: Vec<Q> = Vec::with_capacity(len);
    for n in 1..=len {
        let mut s = c[n - 1].clone();
        for k in 1..n {
            s += &c[k - 1] * &b[n - k - 1];
        }
        b.push(s / q_int(n as i64));
    }
    b
}

/// Inverse of [`euler_transform`]; non-integral outputs are possible.
pub fn inverse_euler_transform(b: &[Q]) -> Vec<Q> {
    let len = b.len();
    let mut c: Vec<Q> = Vec::with_capacity(len);
    for n in 1..=len {
        let mut s = q_int(n as i64) * &b[n - 1];
        for k in 1..n {
            s -= &c[k - 1] * &b[n - k - 1];
        }
        c.push(s);
    }
    (1..=len as u64)
        .map(|n| {
            let s: Q = divisors(n)
                .iter()
                .map(|&d| &c[d as usize - 1] * q_int(moebius_mu(n / d) as i64))
                .sum();
            s / q_int(n as i64)
        })
        .collect()
}

pub fn partial_sums(a: &[Q]) -> Vec<Q> {
    let mut acc = Q::zero();
    a.iter()
        .map(|x| {
            acc += x;
            acc.clone()
        })
        .collect()
}

/// `b_n = a_{n+1} - a_n`; one term shorter than the input.
pub fn first_differences(a: &[Q]) -> Vec<Q> {
    a.windows(2).map(|w| &w[1] - &w[0]).collect()
}

/// Drops the first term.
pub fn left_shift(a: &[Q]) -> Vec<Q> {
    a.iter().skip(1).cloned().collect()
}

/// `b_n = sum_{k=0}^{n} a_k a_{n-k}`
pub fn self_convolution(a: &[Q]) -> Vec<Q> {
    (0..a.len())
        .map(|n| (0..=n).map(|k| &a[k] * &a[n - k]).sum())
        .collect()
}

/// `b_n = (-1)^n a_n`
pub fn alternating_signs(a: &[Q]) -> Vec<Q> {
    a.iter()
        .enumerate()
        .map(|(n, x)| if n % 2 == 0 { x.clone() } else { -x })
        .collect()
}

/// `b_n = a_n / n`, 1-indexed.
pub fn divide_by_index(a: &[Q]) -> Vec<Q> {
    a.iter()
        .enumerate()
        .map(|(i, x)| x / q_int(i as i64 + 1))
        .collect()
}

/// How a transform numbers the input positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Indexing {
    FromZero,
    FromOne,
}

#[derive(Clone, Debug)]
pub struct Transform {
    pub name: &'static str,
    pub indexing: Indexing,
    pub apply: fn(&[Q]) -> Vec<Q>,
    /// Registry name of the inverse, if any.
    pub inverse: Option<&'static str>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransformResult {
    pub name: String,
    pub output: Vec<Q>,
    pub integral: bool,
}

impl TransformResult {
    /// The output as terms, when every value is an integer.
    pub fn integer_terms(&self) -> Option<Vec<Term>> {
        self.integral
            .then(|| self.output.iter().map(|q| q.numer().clone()).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("registry input needs at least {min} terms, got {len}")]
    TooShort { len: usize, min: usize },
    #[error("no transform named {0:?}")]
    Unknown(String),
}

/// Minimum input length for [`Registry::apply_all`].
pub const REGISTRY_MIN_TERMS: usize = 4;

#[derive(Clone, Debug, Default)]
pub struct Registry {
    transforms: Vec<Transform>,
}

impl Registry {
    pub fn empty() -> Registry {
        Registry::default()
    }

    /// The built-in transforms, in application order.
    pub fn standard() -> Registry {
        use Indexing::*;
        let t = |name, indexing, apply, inverse| Transform {
            name,
            indexing,
            apply,
            inverse,
        };
        Registry {
            transforms: vec![
                t("binomial", FromZero, binomial_transform as fn(&[Q]) -> Vec<Q>, Some("inverse_binomial")),
                t("inverse_binomial", FromZero, inverse_binomial_transform, Some("binomial")),
                t("moebius", FromOne, moebius_divisor_transform, Some("inverse_moebius")),
                t("inverse_moebius", FromOne, inverse_moebius_divisor_transform, Some("moebius")),
                t("euler", FromOne, euler_transform, Some("inverse_euler")),
                t("inverse_euler", FromOne, inverse_euler_transform, Some("euler")),
                t("partial_sums", FromZero, partial_sums, Some("first_differences")),
                t("first_differences", FromZero, first_differences, None),
                t("left_shift", FromZero, left_shift, None),
                t("self_convolution", FromZero, self_convolution, None),
                t("alternating_signs", FromZero, alternating_signs, Some("alternating_signs")),
                t("divide_by_index", FromOne, divide_by_index, None),
            ],
        }
    }

    pub fn push(&mut self, t: Transform) {
        self.transforms.push(t);
    }

    pub fn len(&self) -> usize {
        self.transforms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transforms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Transform> {
        self.transforms.iter()
    }

    pub fn get(&self, name: &str) -> Option<&Transform> {
        self.transforms.iter().find(|t| t.name == name)
    }

    pub fn apply_one(&self, name: &str, a: &[Term]) -> Result<TransformResult, TransformError> {
        let t = self
            .get(name)
            .ok_or_else(|| TransformError::Unknown(name.to_string()))?;
        Ok(run(t, &to_rationals(a)))
    }

    /// Every transform applied in registry order, non-integral results
    /// included.
    pub fn apply_all(&self, a: &[Term], mode: Mode) -> Result<Vec<TransformResult>, TransformError> {
        if a.len() < REGISTRY_MIN_TERMS {
            return Err(TransformError::TooShort {
                len: a.len(),
                min: REGISTRY_MIN_TERMS,
            });
        }
        let qs = to_rationals(a);
        Ok(exec::map(mode, &self.transforms, |t| run(t, &qs)))
    }

    /// Integral, non-empty results only, as term lists.
    pub fn apply_integral(&self, a: &[Term], mode: Mode) -> Result<Vec<(String, TermList)>, TransformError> {
        Ok(self
            .apply_all(a, mode)?
            .into_iter()
            .filter_map(|r| {
                let terms = r.integer_terms()?;
                (!terms.is_empty()).then(|| (r.name, TermList::new(0, terms)))
            })
            .collect())
    }
}

fn to_rationals(a: &[Term]) -> Vec<Q> {
    a.iter().map(|t| Q::from_integer(t.clone())).collect()
}

fn run(t: &Transform, input: &[Q]) -> TransformResult {
    let output = (t.apply)(input);
    let integral = output.iter().all(|q| q.denom().is_one());
    TransformResult {
        name: t.name.to_string(),
        output,
        integral,
    }
}

/// The standard registry applied to `a`, integral results only.
pub fn apply_registry(a: &[Term]) -> Result<Vec<(String, TermList)>, TransformError> {
    Registry::standard().apply_integral(a, Mode::default())
}
