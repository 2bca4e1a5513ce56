//! Sequence generators, their cross-checks, and the seed catalog.
//!
//! Every generated entry can be reproduced from its registry record: the
//! stored terms are exactly `generate(seed_count)`, optionally followed by
//! literal terms that are too expensive to regenerate on demand.

mod formulas;
mod recreational;

pub use formulas::{
    a000203, a006093, a006588, a006588_sum, a006588_terms, a055682, a055682_value, a057641,
    a057641_with, all_ones, bernoulli_numbers, bernoulli_pair, harmonic_bound_floor,
    harmonic_numbers, motzkin, nim_flat, pascal_flat, super_catalan_formula,
    super_catalan_recurrence, HARMONIC_CAP_BITS, HARMONIC_START_BITS,
};
pub use recreational::{
    bootstrap_a079000, concatenate_factors, ekg, home_prime, home_prime_chain, lacing_count,
    lacing_count_with, HomePrime, HomePrimeChain, StopReason, DEFAULT_HOME_PRIME_STEPS,
    LACING_MAX_PAIRS,
};

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;
use thiserror::Error;

use crate::catalog::{ANumber, Catalog, Entry};
use crate::exec::{self, Mode};
use crate::numcore::{
    binomial_coefficient, divisors, is_prime, parse_match_text, FactorEffort, PrecisionError, Term,
    TermList,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error(transparent)]
    Precision(#[from] PrecisionError),
    #[error("home prime of {n} unresolved after {steps} steps")]
    Unresolved { n: u64, steps: u32 },
    #[error("{id} supports at most {max} terms, {count} requested")]
    CountTooLarge { id: ANumber, count: usize, max: usize },
    #[error("{id}: cross-check failed at position {position}: {detail}")]
    CheckFailed { id: ANumber, position: usize, detail: String },
    #[error("no generator for {0}")]
    NoGenerator(ANumber),
}

/// A registered generator with its independent cross-check.
pub struct Generator {
    index: u32,
    pub seed_count: usize,
    pub max_count: usize,
    generate: fn(usize) -> Result<TermList, GenError>,
    check: fn(&TermList) -> Result<(), (usize, String)>,
}

impl Generator {
    pub fn id(&self) -> ANumber {
        ANumber::new(self.index).expect("registry ids are valid")
    }

    pub fn generate(&self, count: usize) -> Result<TermList, GenError> {
        if count > self.max_count {
            return Err(GenError::CountTooLarge { id: self.id(), count, max: self.max_count });
        }
        (self.generate)(count)
    }

    /// Generates `count` terms and compares them against a second,
    /// independently computed oracle.
    pub fn check(&self, count: usize) -> Result<TermList, GenError> {
        let terms = self.generate(count)?;
        (self.check)(&terms).map_err(|(position, detail)| GenError::CheckFailed {
            id: self.id(),
            position,
            detail,
        })?;
        Ok(terms)
    }
}

type CheckResult = Result<(), (usize, String)>;

fn compare(got: &TermList, expected: impl IntoIterator<Item = Term>) -> CheckResult {
    for (i, (g, e)) in got.terms.iter().zip(expected).enumerate() {
        if *g != e {
            return Err((i, format!("generated {g}, oracle {e}")));
        }
    }
    Ok(())
}

fn home_primes(count: usize) -> Result<TermList, GenError> {
    let effort = FactorEffort::default();
    let mut out = Vec::with_capacity(count);
    for n in 1..=count as u64 {
        match home_prime(n, DEFAULT_HOME_PRIME_STEPS, &effort) {
            HomePrime::Prime { value, .. } => out.push(value),
            HomePrime::Unresolved { steps, .. } => return Err(GenError::Unresolved { n, steps }),
        }
    }
    Ok(TermList::new(1, out))
}

fn check_home_primes(t: &TermList) -> CheckResult {
    let effort = FactorEffort::default();
    for (i, hp) in t.terms.iter().enumerate() {
        let chain = home_prime_chain(i as u64 + 1, DEFAULT_HOME_PRIME_STEPS, &effort);
        for (k, f) in chain.factors.iter().enumerate() {
            let product: BigInt = f.iter().product();
            if product != chain.values[k] || is_prime(&chain.values[k]) {
                return Err((i, format!("bad factorization of {}", chain.values[k])));
            }
            if !f.iter().all(is_prime) || concatenate_factors(f) != chain.values[k + 1] {
                return Err((i, format!("bad concatenation after {}", chain.values[k])));
            }
        }
        let last = chain.values.last().expect("chain starts at n");
        if last != hp || !(last.is_one() || is_prime(last)) {
            return Err((i, format!("chain ends at {last}, stored {hp}")));
        }
    }
    Ok(())
}

fn check_ekg(t: &TermList) -> CheckResult {
    let mut seen = BTreeSet::new();
    for (i, v) in t.terms.iter().enumerate() {
        if !seen.insert(v.clone()) {
            return Err((i, format!("{v} repeated")));
        }
        if i >= 2 && t.terms[i - 1].gcd(v) < BigInt::from(2) {
            return Err((i, format!("{v} coprime to its predecessor")));
        }
    }
    Ok(())
}

fn check_bootstrap(t: &TermList) -> CheckResult {
    let members: BTreeSet<&Term> = t.terms.iter().collect();
    // a(n) >= n, so membership of n is settled by terms up to a(n)
    let settled = t.terms.last().cloned().unwrap_or_default();
    for (i, v) in t.terms.iter().enumerate() {
        let n = BigInt::from(i + 1);
        if n > settled {
            break;
        }
        if members.contains(&n) != v.is_odd() {
            return Err((i, format!("membership of {n} disagrees with parity of {v}")));
        }
        if i > 0 && v <= &t.terms[i - 1] {
            return Err((i, "not increasing".into()));
        }
    }
    Ok(())
}

/// Counts two-letter side patterns of a closed lace and multiplies by the
/// eyelet labellings.
fn lacing_by_patterns(n: usize) -> Term {
    if n == 1 {
        return BigInt::one();
    }
    let total = 2 * n;
    let mut patterns = 0u64;
    for mask in 0u32..(1 << total) {
        // bit set = left side; eyelet 0 is on the left
        if mask & 1 == 0 || mask.count_ones() as usize != n {
            continue;
        }
        let side = |i: usize| mask >> (i % total) & 1;
        let ok = (0..total).all(|i| {
            let (p, c, x) = (side(i + total - 1), side(i), side(i + 1));
            !(p == c && x == c)
        });
        patterns += u64::from(ok);
    }
    let fact = |k: usize| (1..=k).fold(BigInt::one(), |a, b| a * b);
    // directed laces from the fixed left eyelet, halved for direction
    BigInt::from(patterns) * fact(n - 1) * fact(n) / 2
}

/// Akiyama-Tanigawa algorithm; yields `B_1 = +1/2`.
fn bernoulli_akiyama_tanigawa(count: usize) -> Vec<BigRational> {
    let mut row: Vec<BigRational> = Vec::new();
    let mut out = Vec::with_capacity(count);
    for m in 0..count {
        row.push(BigRational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            row[j - 1] = BigRational::from_integer(BigInt::from(j)) * (&row[j - 1] - &row[j]);
        }
        out.push(row[0].clone());
    }
    out
}

fn check_bernoulli(t: &TermList, numerators: bool) -> CheckResult {
    let oracle = bernoulli_akiyama_tanigawa(t.len()).into_iter().enumerate().map(|(n, b)| {
        let b = if n == 1 { -b } else { b };
        if numerators {
            b.numer().clone()
        } else {
            b.denom().clone()
        }
    });
    compare(t, oracle)
}

fn catalan(k: usize) -> Term {
    binomial_coefficient(2 * k as i64, k as i64) / BigInt::from(k + 1)
}

fn registry() -> Vec<Generator> {
    vec![
        Generator {
            index: 1003,
            seed_count: 20,
            max_count: 5000,
            generate: |c| Ok(super_catalan_recurrence(c)),
            check: |t| compare(t, (1..=t.len() as u64).map(super_catalan_formula)),
        },
        Generator {
            index: 6093,
            seed_count: 40,
            max_count: 1_000_000,
            generate: |c| Ok(a006093(c)),
            check: |t| {
                let mut p = BigInt::one();
                compare(
                    t,
                    (0..t.len()).map(|_| {
                        p += 1;
                        while !is_prime(&p) {
                            p += 1;
                        }
                        &p - 1
                    }),
                )
            },
        },
        Generator {
            index: 203,
            seed_count: 40,
            max_count: 1_000_000,
            generate: |c| Ok(a000203(c)),
            check: |t| {
                compare(t, (1..=t.len() as u64).map(|n| BigInt::from(divisors(n).iter().sum::<u64>())))
            },
        },
        Generator {
            index: 55682,
            seed_count: 40,
            max_count: 1_000_000,
            generate: |c| Ok(a055682(c)),
            check: |t| {
                for (i, v) in t.terms.iter().enumerate() {
                    let n = BigInt::from(i + 1);
                    let sigma: BigInt = divisors(i as u64 + 1).iter().sum::<u64>().into();
                    let r: BigInt = v + sigma;
                    let cube = n.pow(3);
                    if r.pow(2) > cube || (&r + 1u32).pow(2) <= cube {
                        return Err((i, format!("{r} is not the integer square root of {cube}")));
                    }
                }
                Ok(())
            },
        },
        Generator {
            index: 57641,
            seed_count: 40,
            max_count: 100_000,
            generate: |c| Ok(a057641(c)?),
            check: |t| {
                let h = harmonic_numbers(t.len());
                for (i, v) in t.terms.iter().enumerate() {
                    // restart the bracketing at a much higher precision
                    let f = crate::numcore::HighPrecisionValue::certified_floor(
                        |bits| {
                            let x = crate::numcore::HighPrecisionValue::from_rational(&h[i], bits);
                            x.add(&x.exp().mul(&x.ln()))
                        },
                        512,
                        1 << 15,
                    )
                    .map_err(|e| (i, e.to_string()))?;
                    let sigma: BigInt = divisors(i as u64 + 1).iter().sum::<u64>().into();
                    if f - sigma != *v {
                        return Err((i, "floor disagrees at higher precision".into()));
                    }
                }
                Ok(())
            },
        },
        Generator {
            index: 6588,
            seed_count: 20,
            max_count: 10_000,
            generate: |c| Ok(a006588_terms(c)),
            check: |t| compare(t, (0..t.len() as u64).map(a006588_sum)),
        },
        Generator {
            index: 7318,
            seed_count: 66,
            max_count: 1_000_000,
            generate: |c| {
                let rows = (0..).find(|r| r * (r + 1) / 2 >= c).unwrap_or(0);
                let mut t = pascal_flat(rows);
                t.terms.truncate(c);
                Ok(t)
            },
            check: |t| {
                let mut row = vec![BigInt::one()];
                let mut flat = Vec::new();
                while flat.len() < t.len() {
                    flat.extend(row.iter().cloned());
                    let mut next = vec![BigInt::one(); row.len() + 1];
                    for k in 1..row.len() {
                        next[k] = &row[k - 1] + &row[k];
                    }
                    row = next;
                }
                compare(t, flat)
            },
        },
        Generator {
            index: 3987,
            seed_count: 66,
            max_count: 1_000_000,
            generate: |c| {
                let depth = (1..).find(|d| d * (d + 1) / 2 >= c).unwrap_or(1);
                let mut t = nim_flat(depth as u64);
                t.terms.truncate(c);
                Ok(t)
            },
            check: |t| {
                let flat = (0u64..).flat_map(|d| (0..=d).map(move |i| BigInt::from(i ^ (d - i))));
                compare(t, flat)
            },
        },
        Generator {
            index: 1006,
            seed_count: 30,
            max_count: 100_000,
            generate: |c| Ok(motzkin(c)),
            check: |t| {
                compare(
                    t,
                    (0..t.len()).map(|n| {
                        (0..=n / 2)
                            .map(|k| binomial_coefficient(n as i64, 2 * k as i64) * catalan(k))
                            .sum::<BigInt>()
                    }),
                )
            },
        },
        Generator {
            index: 27641,
            seed_count: 30,
            max_count: 2000,
            generate: |c| Ok(bernoulli_pair(c).0),
            check: |t| check_bernoulli(t, true),
        },
        Generator {
            index: 27642,
            seed_count: 30,
            max_count: 2000,
            generate: |c| Ok(bernoulli_pair(c).1),
            check: |t| check_bernoulli(t, false),
        },
        Generator {
            index: 64413,
            seed_count: 60,
            max_count: 1_000_000,
            generate: |c| Ok(ekg(c)),
            check: check_ekg,
        },
        Generator {
            index: 37274,
            seed_count: 13,
            max_count: 48,
            generate: home_primes,
            check: check_home_primes,
        },
        Generator {
            index: 79000,
            seed_count: 60,
            max_count: 1_000_000,
            generate: |c| Ok(bootstrap_a079000(c)),
            check: check_bootstrap,
        },
        Generator {
            index: 78601,
            seed_count: 5,
            max_count: LACING_MAX_PAIRS,
            generate: |c| Ok(TermList::new(1, (1..=c).map(lacing_count).collect())),
            check: |t| compare(t, (1..=t.len()).map(lacing_by_patterns)),
        },
        Generator {
            index: 12,
            seed_count: 40,
            max_count: 1_000_000,
            generate: |c| Ok(all_ones(c)),
            check: |t| compare(t, std::iter::repeat(BigInt::one())),
        },
    ]
}

/// All registered generators, ordered by ANumber.
pub fn generators() -> &'static [Generator] {
    static REGISTRY: std::sync::OnceLock<Vec<Generator>> = std::sync::OnceLock::new();
    REGISTRY.get_or_init(|| {
        let mut r = registry();
        r.sort_by_key(|g| g.index);
        r
    })
}

pub fn generator(id: ANumber) -> Option<&'static Generator> {
    generators().iter().find(|g| g.id() == id)
}

struct Seed {
    index: u32,
    name: &'static str,
    offset: i64,
    literal: &'static str,
    keywords: &'static str,
    formulas: &'static [&'static str],
    comments: &'static [&'static str],
    crossrefs: &'static [u32],
}

const SEEDS: &[Seed] = &[
    Seed {
        index: 12,
        name: "The simplest sequence of positive numbers: the all 1's sequence.",
        offset: 0,
        literal: "",
        keywords: "core,easy,nonn",
        formulas: &["a(n) = 1."],
        comments: &[],
        crossrefs: &[],
    },
    Seed {
        index: 43,
        name: "Mersenne exponents: primes p such that 2^p - 1 is prime.",
        offset: 1,
        literal: "2,3,5,7,13,17,19,31,61,89,107,127,521,607,1279,2203,2281,3217,4253,4423,9689,9941,11213,19937,21701,23209",
        keywords: "core,hard,nonn",
        formulas: &[],
        comments: &["Found by distributed searches; no generator is provided."],
        crossrefs: &[],
    },
    Seed {
        index: 203,
        name: "a(n) = sigma(n), the sum of the divisors of n.",
        offset: 1,
        literal: "",
        keywords: "core,easy,mult,nonn",
        formulas: &["Multiplicative with a(p^e) = (p^(e+1) - 1)/(p - 1)."],
        comments: &[],
        crossrefs: &[55682, 57641],
    },
    Seed {
        index: 315,
        name: "Number of reduced Latin squares of order n.",
        offset: 1,
        literal: "1,1,1,4,56,9408,16942080,535281401856,377597570964258816",
        keywords: "hard,nonn,nice",
        formulas: &[],
        comments: &[],
        crossrefs: &[],
    },
    Seed {
        index: 796,
        name: "Decimal expansion of Pi.",
        offset: 1,
        literal: "3,1,4,1,5,9,2,6,5,3,5,8,9,7,9,3,2,3,8,4,6,2,6,4,3,3,8,3,2,7,9,5,0,2,8,8,4,1,9,7",
        keywords: "base,cons,core,easy,nonn",
        formulas: &[],
        comments: &[],
        crossrefs: &[1203],
    },
    Seed {
        index: 1003,
        name: "Schröder's second problem (generalized parentheses); also called super-Catalan numbers or little Schröder numbers.",
        offset: 1,
        literal: "",
        keywords: "core,easy,nonn,nice",
        formulas: &[
            "a(n) = (1/n) * Sum_{k=0..n-2} binomial(2n-k-2, n-1) * binomial(n-2, k) for n > 1.",
            "(n+1) a(n+1) = 3(2n-1) a(n) - (n-2) a(n-1), a(1) = a(2) = 1.",
        ],
        comments: &[
            "Number of ways to insert parentheses into a string of n symbols, with any number of pairs allowed.",
        ],
        crossrefs: &[],
    },
    Seed {
        index: 1006,
        name: "Motzkin numbers: number of ways of drawing any number of nonintersecting chords joining n (labeled) points on a circle.",
        offset: 0,
        literal: "",
        keywords: "core,easy,nonn,nice",
        formulas: &["a(n) = a(n-1) + Sum_{k=0..n-2} a(k) a(n-2-k)."],
        comments: &[],
        crossrefs: &[1003],
    },
    Seed {
        index: 1203,
        name: "Continued fraction for Pi.",
        offset: 0,
        literal: "3,7,15,1,292,1,1,1,2,1,3,1,14,2,1,1,2,2,2,2,1,84,2,1,1,15,3,13",
        keywords: "cofr,core,nonn",
        formulas: &[],
        comments: &[],
        crossrefs: &[796],
    },
    Seed {
        index: 3987,
        name: "Table of n XOR m (or Nim-sum of n and m) read by antidiagonals.",
        offset: 0,
        literal: "",
        keywords: "easy,nonn,tabl,nice",
        formulas: &["T(n, m) = n XOR m."],
        comments: &[],
        crossrefs: &[],
    },
    Seed {
        index: 5228,
        name: "Sequence and first differences together list all positive numbers exactly once.",
        offset: 1,
        literal: "1,3,7,12,18,26,35,45,56,69,83",
        keywords: "easy,nonn,nice",
        formulas: &[],
        comments: &["Stored as data; no generator is provided."],
        crossrefs: &[],
    },
    Seed {
        index: 6093,
        name: "a(n) = prime(n) - 1.",
        offset: 1,
        literal: "",
        keywords: "easy,nonn",
        formulas: &[],
        comments: &[],
        crossrefs: &[],
    },
    Seed {
        index: 6588,
        name: "a(n) = 4^n * (3n)! / ((2n)! * n!).",
        offset: 0,
        literal: "",
        keywords: "easy,nonn",
        formulas: &["a(n) = Sum_{k=0..n} binomial(4n+1, 2n-2k) * binomial(n+k, k)."],
        comments: &[],
        crossrefs: &[],
    },
    Seed {
        index: 7318,
        name: "Pascal's triangle read by rows: C(n,k) = binomial(n,k) = n!/(k!*(n-k)!), 0 <= k <= n.",
        offset: 0,
        literal: "",
        keywords: "core,easy,nonn,tabl,nice",
        formulas: &[],
        comments: &[],
        crossrefs: &[],
    },
    Seed {
        index: 27641,
        name: "Numerator of Bernoulli number B_n.",
        offset: 0,
        literal: "",
        keywords: "core,frac,sign,nice",
        formulas: &["Sum_{k=0..n} binomial(n+1, k) B_k = 0 for n > 0, B_0 = 1."],
        comments: &[],
        crossrefs: &[27642],
    },
    Seed {
        index: 27642,
        name: "Denominator of Bernoulli number B_n.",
        offset: 0,
        literal: "",
        keywords: "core,frac,nonn,nice",
        formulas: &[],
        comments: &[],
        crossrefs: &[27641],
    },
    Seed {
        index: 37274,
        name: "Home primes: for n >= 2, a(n) = the prime that is finally reached when you start with n, concatenate its prime factors and repeat until a prime is reached.",
        offset: 1,
        literal: "",
        keywords: "base,nonn,nice",
        formulas: &[],
        comments: &[
            "a(8) = 3331113965338635107 is reached after 13 steps: 8 -> 222 -> 2337 -> 31941 -> ...",
            "It is conjectured that a prime is always reached.",
        ],
        crossrefs: &[],
    },
    Seed {
        index: 55682,
        name: "a(n) = floor(n*sqrt(n)) - sigma(n).",
        offset: 1,
        literal: "",
        keywords: "sign",
        formulas: &[],
        comments: &["sigma(n) < n*sqrt(n) for n > 2."],
        crossrefs: &[203],
    },
    Seed {
        index: 57641,
        name: "a(n) = floor(H(n) + exp(H(n))*log(H(n))) - sigma(n), where H(n) = Sum_{i=1..n} 1/i.",
        offset: 1,
        literal: "",
        keywords: "nonn",
        formulas: &[],
        comments: &[
            "Lagarias showed that the Riemann hypothesis is equivalent to the statement that a(n) >= 0 for all n.",
        ],
        crossrefs: &[203],
    },
    Seed {
        index: 64413,
        name: "EKG sequence: a(1) = 1, a(2) = 2; for n > 2, a(n) = smallest number not already used which shares a factor with a(n-1).",
        offset: 1,
        literal: "",
        keywords: "nonn,nice,look",
        formulas: &[],
        comments: &[],
        crossrefs: &[],
    },
    Seed {
        index: 78601,
        name: "Number of ways to lace a shoe that has n pairs of eyelets.",
        offset: 1,
        literal: "3758400,382838400,52733721600",
        keywords: "nonn,nice",
        formulas: &[],
        comments: &[
            "The lace must follow a Hamiltonian path through the 2n eyelets, and at least one of the neighbors of every eyelet must be on the other side of the shoe.",
        ],
        crossrefs: &[],
    },
    Seed {
        index: 79000,
        name: "a(n) is taken to be the smallest positive integer greater than a(n-1) which is consistent with the condition \"n is a member of the sequence if and only if a(n) is odd\".",
        offset: 1,
        literal: "",
        keywords: "nonn,nice",
        formulas: &[],
        comments: &[],
        crossrefs: &[],
    },
];

fn seed_entry(seed: &Seed) -> Result<Entry, GenError> {
    let id = ANumber::new(seed.index).expect("seed ids are valid");
    let mut terms = match generator(id) {
        Some(g) => g.generate(g.seed_count)?,
        None => TermList::new(seed.offset, Vec::new()),
    };
    if !seed.literal.is_empty() {
        terms.terms.extend(parse_match_text(seed.literal).expect("literal seed terms"));
    }
    let mut e = Entry::new(id, seed.name, terms);
    e.keywords = seed.keywords.split(',').filter(|k| !k.is_empty()).map(String::from).collect();
    e.formulas = seed.formulas.iter().map(|s| s.to_string()).collect();
    e.comments = seed.comments.iter().map(|s| s.to_string()).collect();
    e.crossrefs = seed.crossrefs.iter().filter_map(|&i| ANumber::new(i)).collect();
    Ok(e)
}

/// The built-in catalog: every generated sequence plus literal entries.
///
/// Byte-identical across runs and across execution modes.
pub fn seed_catalog() -> Catalog {
    seed_catalog_with(Mode::default())
}

pub fn seed_catalog_with(mode: Mode) -> Catalog {
    let entries = exec::map(mode, SEEDS, seed_entry);
    let mut c = Catalog::new();
    for e in entries {
        c.insert(e.expect("seed generators are within their limits"))
            .expect("seed ids are distinct");
    }
    c
}

/// Stored prefix length that `generate` must reproduce, per seeded entry.
pub fn seeded_prefix(id: ANumber) -> Option<usize> {
    generator(id).map(|g| g.seed_count)
}

impl std::fmt::Debug for Generator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Generator")
            .field("id", &self.id())
            .field("seed_count", &self.seed_count)
            .field("max_count", &self.max_count)
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_generator_passes_its_check() {
        for g in generators() {
            let count = g.seed_count.min(g.max_count);
            g.check(count).unwrap_or_else(|e| panic!("{e}"));
        }
    }

    #[test]
    fn check_catches_corruption() {
        let g = generator("A001003".parse().unwrap()).unwrap();
        let mut t = g.generate(10).unwrap();
        t.terms[4] += 1;
        assert!((g.check)(&t).is_err());
    }

    #[test]
    fn count_limit() {
        let g = generator("A078601".parse().unwrap()).unwrap();
        assert!(matches!(g.generate(7), Err(GenError::CountTooLarge { max: 6, .. })));
    }

    #[test]
    fn lacing_pattern_oracle() {
        let v: Vec<Term> = (1..=5).map(lacing_by_patterns).collect();
        let expect: Vec<Term> = [1u64, 3, 42, 1080, 51840].iter().map(|&x| x.into()).collect();
        assert_eq!(v, expect);
    }

    #[test]
    fn seed_catalog_is_deterministic() {
        let a = seed_catalog_with(Mode::Sequential);
        let b = seed_catalog();
        assert_eq!(a.to_text(), b.to_text());
        assert!(a.dangling_crossrefs().is_empty());
        for e in a.iter() {
            if let Some(n) = seeded_prefix(e.id) {
                let regen = generator(e.id).unwrap().generate(n).unwrap();
                assert_eq!(e.terms.terms[..n], regen.terms[..]);
            }
        }
        assert!(a.get("A001003".parse().unwrap()).unwrap().name.contains("Schröder"));
    }
}
