//! Sieving, Miller-Rabin primality and Pollard-rho factorization.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::Term;

/// Below this value the first thirteen prime bases make Miller-Rabin exact
/// (Sorenson and Webster, 2015).
pub const DETERMINISTIC_PRIMALITY_BOUND: u128 = 3_317_044_064_679_887_385_961_981;

const BASES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const BASES_BOUNDED: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const PROBABILISTIC_ROUNDS: u32 = 64;

/// How a primality verdict was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Certainty {
    /// Exact: trial division or a deterministic witness set.
    Deterministic,
    /// Miller-Rabin with `rounds` pseudo-random bases; a composite survives
    /// with probability at most 4^-rounds.
    Probabilistic { rounds: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Primality {
    pub prime: bool,
    pub certainty: Certainty,
}

/// All primes `<= limit`, in increasing order.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let limit = limit as usize;
    let mut composite = vec![false; limit + 1];
    let mut out = Vec::new();
    for i in 2..=limit {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= limit {
            composite[j] = true;
            j += i;
        }
    }
    out
}

/// The `n`-th prime, 1-indexed: `nth_prime(1) == 2`.
pub fn nth_prime(n: u64) -> u64 {
    assert!(n >= 1, "nth_prime is 1-indexed");
    // p_n < n (ln n + ln ln n) for n >= 6 (Rosser)
    let bound = if n < 6 {
        13
    } else {
        let x = n as f64;
        (x * (x.ln() + x.ln().ln())).ceil() as u64 + 1
    };
    primes_up_to(bound)[(n - 1) as usize]
}

/// Primality test with the certainty level recorded.
///
/// # Panics
/// If `t` is negative.
pub fn primality(t: &Term) -> Primality {
    assert!(t.sign() != Sign::Minus, "primality of a negative value");
    let det = |prime| Primality {
        prime,
        certainty: Certainty::Deterministic,
    };
    if let Some(n) = t.to_u64() {
        return det(is_prime_u64(n));
    }
    let n = t.magnitude();
    if n.is_even() {
        return det(false);
    }
    if n.to_u128().is_some_and(|v| v < DETERMINISTIC_PRIMALITY_BOUND) {
        let bases = BASES_BOUNDED.iter().map(|&b| BigUint::from(b));
        return det(miller_rabin_big(n, bases));
    }
    let prime = miller_rabin_big(n, pseudo_random_bases(n, PROBABILISTIC_ROUNDS));
    Primality {
        prime,
        certainty: Certainty::Probabilistic {
            rounds: PROBABILISTIC_ROUNDS,
        },
    }
}

pub fn is_prime(t: &Term) -> bool {
    primality(t).prime
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &BASES_U64 {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &BASES_U64 {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn miller_rabin_big(n: &BigUint, bases: impl Iterator<Item = BigUint>) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in bases {
        let a = a % n;
        if a.is_zero() {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

// Bases in [2, n-2], seeded from n so verdicts are reproducible.
fn pseudo_random_bases(n: &BigUint, rounds: u32) -> impl Iterator<Item = BigUint> {
    let mut state = n.iter_u64_digits().fold(0u64, |acc, d| acc.rotate_left(7) ^ d);
    let span = n - 3u32;
    (0..rounds).map(move |_| {
        let mut words = [0u32; 8];
        for w in words.iter_mut() {
            *w = splitmix64(&mut state) as u32;
        }
        BigUint::new(words.to_vec()) % &span + 2u32
    })
}

/// Limits on factoring work. Exhausting them yields
/// [`FactorError::Unresolved`], never a guess.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorEffort {
    /// Largest trial divisor.
    pub trial_limit: u64,
    /// Rho iterations per polynomial x^2 + c.
    pub rho_iterations: u64,
    /// Number of polynomials tried (c = 1, 2, ...).
    pub rho_attempts: u64,
}

impl Default for FactorEffort {
    fn default() -> Self {
        FactorEffort {
            trial_limit: 10_000,
            rho_iterations: 1 << 24,
            rho_attempts: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("factorization requires a value >= 2, got {0}")]
    InvalidInput(BigInt),
    #[error("no factor of composite {composite} found within the configured effort")]
    Unresolved { composite: BigInt },
}

/// Prime factors in nondecreasing order, with multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub factors: Vec<Term>,
    /// Weakest certainty among the primality checks of the factors.
    pub certainty: Certainty,
}

pub fn factorize(t: &Term) -> Result<Factorization, FactorError> {
    factorize_with(t, &FactorEffort::default())
}

pub fn factorize_with(t: &Term, effort: &FactorEffort) -> Result<Factorization, FactorError> {
    if t < &BigInt::from(2) {
        return Err(FactorError::InvalidInput(t.clone()));
    }
    let mut n = t.magnitude().clone();
    let mut factors: Vec<BigUint> = Vec::new();
    let mut certainty = Certainty::Deterministic;

    let mut p = 2u64;
    while p <= effort.trial_limit {
        let pb = BigUint::from(p);
        if &pb * &pb > n {
            break;
        }
        while (&n % &pb).is_zero() {
            n /= &pb;
            factors.push(pb.clone());
        }
        p += if p == 2 { 1 } else { 2 };
    }

    let mut pending = Vec::new();
    if n > BigUint::one() {
        pending.push(n);
    }
    while let Some(m) = pending.pop() {
        let pm = primality(&BigInt::from(m.clone()));
        if pm.prime {
            certainty = certainty.max(pm.certainty);
            factors.push(m);
            continue;
        }
        let d = split_composite(&m, effort)
            .ok_or_else(|| FactorError::Unresolved {
                composite: BigInt::from(m.clone()),
            })?;
        let other = &m / &d;
        pending.push(d);
        pending.push(other);
    }
    factors.sort();
    Ok(Factorization {
        factors: factors.into_iter().map(BigInt::from).collect(),
        certainty,
    })
}

// A nontrivial divisor of a composite `m`.
fn split_composite(m: &BigUint, effort: &FactorEffort) -> Option<BigUint> {
    let r = m.sqrt();
    if &r * &r == *m {
        return Some(r);
    }
    if let Some(small) = m.to_u64() {
        return (1..=effort.rho_attempts)
            .find_map(|c| rho_u64(small, c, effort.rho_iterations))
            .map(BigUint::from);
    }
    (1..=effort.rho_attempts).find_map(|c| rho_big(m, c, effort.rho_iterations))
}

const RHO_BATCH: u64 = 128;

// Brent's cycle finding with batched gcds.
fn rho_u64(n: u64, c: u64, max_iters: u64) -> Option<u64> {
    let f = |x: u64| ((x as u128 * x as u128 + c as u128) % n as u128) as u64;
    let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
    let mut q = 1u64;
    let mut g = 1u64;
    let mut r = 1u64;
    let mut iters = 0u64;
    while g == 1 {
        x = y;
        for _ in 0..r {
            y = f(y);
        }
        let mut k = 0;
        while k < r && g == 1 {
            ys = y;
            for _ in 0..RHO_BATCH.min(r - k) {
                y = f(y);
                q = mul_mod(q, x.abs_diff(y), n);
            }
            g = q.gcd(&n);
            k += RHO_BATCH;
            iters += RHO_BATCH;
        }
        r *= 2;
        if iters > max_iters {
            return None;
        }
    }
    if g == n {
        // batch overshot; step one at a time from the saved point
        loop {
            ys = f(ys);
            g = x.abs_diff(ys).gcd(&n);
            if g > 1 {
                break;
            }
        }
    }
    (g != n).then_some(g)
}

fn rho_big(n: &BigUint, c: u64, max_iters: u64) -> Option<BigUint> {
    let c = BigUint::from(c);
    let one = BigUint::one();
    let f = |x: &BigUint| (x * x + &c) % n;
    let diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };
    let mut y = BigUint::from(2u32);
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut q = one.clone();
    let mut g = one.clone();
    let mut r = 1u64;
    let mut iters = 0u64;
    while g == one {
        x = y.clone();
        for _ in 0..r {
            y = f(&y);
        }
        let mut k = 0;
        while k < r && g == one {
            ys = y.clone();
            for _ in 0..RHO_BATCH.min(r - k) {
                y = f(&y);
                q = (q * diff(&x, &y)) % n;
            }
            g = q.gcd(n);
            k += RHO_BATCH;
            iters += RHO_BATCH;
        }
        r *= 2;
        if iters > max_iters {
            return None;
        }
    }
    if g == *n {
        loop {
            ys = f(&ys);
            g = diff(&x, &ys).gcd(n);
            if g > one {
                break;
            }
        }
    }
    (g != *n).then_some(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn big(s: &str) -> BigInt {
        s.parse().unwrap()
    }

    #[test]
    fn sieve_and_nth_prime() {
        assert_eq!(primes_up_to(12), vec![2, 3, 5, 7, 11]);
        assert_eq!(primes_up_to(1), Vec::<u64>::new());
        assert_eq!(nth_prime(1), 2);
        let oracle = primes_up_to(200);
        assert_eq!(nth_prime(11), oracle[10]);
        assert_eq!(nth_prime(11), 31);
        for n in 1..=40 {
            assert_eq!(nth_prime(n), oracle[(n - 1) as usize]);
        }
        assert_eq!(nth_prime(10_000), 104_729);
    }

    #[test]
    fn primality_examples() {
        assert!(!is_prime(&BigInt::from(1)));
        assert!(!is_prime(&BigInt::from(0)));
        assert!(is_prime(&BigInt::from(2)));
        assert!(!is_prime(&BigInt::from(2337)));
        let hp8 = primality(&big("3331113965338635107"));
        assert!(hp8.prime);
        assert_eq!(hp8.certainty, Certainty::Deterministic);
    }

    #[test]
    fn primality_agrees_with_sieve() {
        let ps = primes_up_to(50_000);
        let mut it = ps.iter().peekable();
        for n in 0..=50_000u64 {
            let expect = it.peek().is_some_and(|&&p| p == n);
            if expect {
                it.next();
            }
            assert_eq!(is_prime(&BigInt::from(n)), expect, "n = {n}");
        }
    }

    #[test]
    fn large_primality_levels() {
        // 2^64 + 13 is the least prime above 2^64, below the deterministic bound
        let p = primality(&((BigInt::one() << 64) + 13));
        assert!(p.prime);
        assert_eq!(p.certainty, Certainty::Deterministic);
        assert!(!is_prime(&((BigInt::one() << 64) + 11)));
        // 2^127 - 1 is above it
        let m127 = (BigInt::one() << 127) - 1;
        let p = primality(&m127);
        assert!(p.prime);
        assert_eq!(p.certainty, Certainty::Probabilistic { rounds: 64 });
        assert!(!is_prime(&(&m127 * BigInt::from(3))));
        // Carmichael numbers and strong pseudoprimes to small bases
        for c in ["561", "3215031751", "3825123056546413051", "318665857834031151167461"] {
            assert!(!is_prime(&big(c)), "{c}");
        }
    }

    #[test]
    fn factorize_examples() {
        let f = |n: u64| factorize(&BigInt::from(n)).unwrap().factors;
        let ints = |v: &[u64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(f(8), ints(&[2, 2, 2]));
        assert_eq!(f(222), ints(&[2, 3, 37]));
        assert_eq!(f(2), ints(&[2]));
        assert_eq!(f(2337), ints(&[3, 19, 41]));
        assert!(matches!(
            factorize(&BigInt::from(1)),
            Err(FactorError::InvalidInput(_))
        ));
    }

    #[test]
    fn factorize_semiprimes_and_powers() {
        let p = big("1000000007");
        let q = big("998244353");
        let f = factorize(&(&p * &q)).unwrap().factors;
        assert_eq!(f, vec![q.clone(), p.clone()]);
        let f = factorize(&(&p * &p * &p)).unwrap().factors;
        assert_eq!(f, vec![p.clone(), p.clone(), p.clone()]);
        // above 2^64
        let r = big("18446744073709551557");
        let f = factorize(&(&p * &r)).unwrap().factors;
        assert_eq!(f, vec![p, r]);
    }

    #[test]
    fn effort_exhaustion_is_reported() {
        let effort = FactorEffort {
            trial_limit: 10,
            rho_iterations: 1,
            rho_attempts: 1,
        };
        let n = big("1000000016000000063"); // 1000000007 * 1000000009
        assert!(matches!(
            factorize_with(&n, &effort),
            Err(FactorError::Unresolved { .. })
        ));
    }

    fn check(n: &BigInt) {
        let fz = factorize(n).unwrap();
        let prod: BigInt = fz.factors.iter().product();
        assert_eq!(&prod, n);
        assert!(fz.factors.windows(2).all(|w| w[0] <= w[1]));
        assert!(fz.factors.iter().all(is_prime), "{n}");
    }

    #[test]
    fn factorize_exhaustive_small() {
        for n in 2..=100_000u64 {
            check(&BigInt::from(n));
        }
    }

    #[test]
    fn factorize_random_large() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..500 {
            let digits = rng.random_range(10..=20u32);
            let lo = 10u128.pow(digits - 1);
            let n = rng.random_range(lo..lo * 10);
            check(&BigInt::from(n));
        }
    }
}
