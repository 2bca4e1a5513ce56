//! Sequences defined by a procedure rather than a formula.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::Serialize;

use crate::exec::{self, Mode};
use crate::numcore::{factorize_with, is_prime, FactorEffort, FactorError, Term, TermList};

/// `a(1) = 1`, `a(2) = 2`, then the least unused `m` sharing a factor with
/// the previous term.
pub fn ekg(count: usize) -> TermList {
    let mut out: Vec<u64> = Vec::with_capacity(count);
    let mut used = vec![false; 4 * count + 8];
    for n in 0..count {
        let v = match n {
            0 => 1,
            1 => 2,
            _ => {
                let prev = out[n - 1];
                (3u64..)
                    .find(|&m| {
                        if m as usize >= used.len() {
                            used.resize(2 * m as usize, false);
                        }
                        !used[m as usize] && prev.gcd(&m) >= 2
                    })
                    .expect("unbounded search")
            }
        };
        if v as usize >= used.len() {
            used.resize(2 * v as usize, false);
        }
        used[v as usize] = true;
        out.push(v);
    }
    TermList::new(1, out.into_iter().map(BigInt::from).collect())
}

pub const DEFAULT_HOME_PRIME_STEPS: u32 = 100;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    StepBound,
    FactoringEffort,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum HomePrime {
    Prime { value: Term, steps: u32 },
    Unresolved { last: Term, steps: u32, reason: StopReason },
}

/// Every value visited, starting at `n`, with the outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomePrimeChain {
    pub values: Vec<Term>,
    /// Factorization of every value except the last.
    pub factors: Vec<Vec<Term>>,
    pub outcome: HomePrime,
}

/// Concatenated decimal digits of nondecreasing prime factors.
pub fn concatenate_factors(factors: &[Term]) -> Term {
    let digits: String = factors.iter().map(ToString::to_string).collect();
    digits.parse().expect("decimal digits")
}

/// Repeatedly replaces a composite by the concatenation of its prime
/// factors. `1` is its own home prime.
///
/// # Panics
/// If `n == 0`.
pub fn home_prime_chain(n: u64, step_bound: u32, effort: &FactorEffort) -> HomePrimeChain {
    assert!(n >= 1, "defined for n >= 1");
    let mut cur = BigInt::from(n);
    let mut values = vec![cur.clone()];
    let mut factors = Vec::new();
    let mut steps = 0;
    let outcome = loop {
        if cur.is_one() || is_prime(&cur) {
            break HomePrime::Prime { value: cur, steps };
        }
        if steps == step_bound {
            break HomePrime::Unresolved { last: cur, steps, reason: StopReason::StepBound };
        }
        let f = match factorize_with(&cur, effort) {
            Ok(f) => f.factors,
            Err(FactorError::Unresolved { .. }) | Err(FactorError::InvalidInput(_)) => {
                break HomePrime::Unresolved { last: cur, steps, reason: StopReason::FactoringEffort };
            }
        };
        cur = concatenate_factors(&f);
        factors.push(f);
        values.push(cur.clone());
        steps += 1;
    };
    HomePrimeChain { values, factors, outcome }
}

pub fn home_prime(n: u64, step_bound: u32, effort: &FactorEffort) -> HomePrime {
    home_prime_chain(n, step_bound, effort).outcome
}

/// The least increasing sequence with "n is a term iff a(n) is odd".
///
/// Choosing `a(n) = v` settles membership of every value up to `v`: values
/// skipped over are non-members, so their own terms must be even, and `v`
/// is a member, so `a(v)` must be odd. Those parity demands are recorded
/// and honoured when the later terms are chosen.
pub fn bootstrap_a079000(count: usize) -> TermList {
    // parity[i] = Some(true) when a(i) must be odd
    let mut parity: Vec<Option<bool>> = vec![None; 4 * count + 8];
    let mut a: Vec<u64> = vec![0];
    for n in 1..=count as u64 {
        let prev = a[n as usize - 1];
        let mut v = prev + 1;
        loop {
            if ok_choice(n, v, prev, &a, &parity) {
                break;
            }
            v += 1;
        }
        if v as usize + 1 >= parity.len() {
            parity.resize(2 * v as usize + 2, None);
        }
        for s in prev + 1..v {
            if s > n {
                parity[s as usize] = Some(false);
            }
        }
        if v > n {
            parity[v as usize] = Some(true);
        }
        a.push(v);
    }
    TermList::new(1, a[1..].iter().map(|&x| BigInt::from(x)).collect())
}

fn ok_choice(n: u64, v: u64, prev: u64, a: &[u64], parity: &[Option<bool>]) -> bool {
    let odd = v % 2 == 1;
    if let Some(Some(want)) = parity.get(n as usize) {
        if *want != odd {
            return false;
        }
    }
    // membership of n is still open only when n lies beyond a(n - 1)
    if n > prev && odd != (v == n) {
        return false;
    }
    for s in prev + 1..v {
        if s < n && a[s as usize] % 2 == 1 {
            return false;
        }
    }
    if v < n && a[v as usize].is_multiple_of(2) {
        return false;
    }
    true
}

/// Largest number of eyelet pairs accepted by the registry.
pub const LACING_MAX_PAIRS: usize = 6;

/// Laces of a shoe with `n` eyelets per side.
///
/// A lace visits all `2n` eyelets once and closes back on itself, each
/// eyelet having at least one lace neighbour on the opposite side. Laces
/// that differ only by starting point or direction are the same lace. A
/// single pair is one straight lace.
///
/// # Panics
/// If `n == 0` or `n > 15`.
pub fn lacing_count(n: usize) -> Term {
    lacing_count_with(n, Mode::default())
}

pub fn lacing_count_with(n: usize, mode: Mode) -> Term {
    assert!((1..=15).contains(&n), "eyelet pairs must be in 1..=15");
    if n == 1 {
        return BigInt::one();
    }
    let total = 2 * n;
    let directed: u64 = exec::map_range(mode, 1, total as u64, |second| {
        let second = second as usize;
        let mut path = vec![0usize; total];
        path[1] = second;
        extend_lace(&mut path, 2, (1u32 << second) | 1, n)
    })
    .into_iter()
    .sum();
    BigInt::from(directed / 2)
}

fn extend_lace(path: &mut [usize], len: usize, used: u32, n: usize) -> u64 {
    let side = |v: usize| v < n;
    let total = path.len();
    let (prev, cur) = (path[len - 2], path[len - 1]);
    if len == total {
        let first_ok = !(side(path[1]) == side(0) && side(cur) == side(0));
        let last_ok = !(side(prev) == side(cur) && side(0) == side(cur));
        return u64::from(first_ok && last_ok);
    }
    let mut count = 0;
    for v in 1..total {
        if used & (1 << v) != 0 {
            continue;
        }
        if side(prev) == side(cur) && side(v) == side(cur) {
            continue;
        }
        path[len] = v;
        count += extend_lace(path, len + 1, used | (1 << v), n);
    }
    count
}
