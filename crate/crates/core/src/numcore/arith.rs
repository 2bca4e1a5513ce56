use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Term;

/// Exact binomial coefficient C(n, k) for any integers.
///
/// Zero when `k < 0`, or when `k > n >= 0`. Negative `n` uses the upper
/// negation identity C(n, k) = (-1)^k C(k - n - 1, k).
pub fn binomial_coefficient(n: i64, k: i64) -> Term {
    if k < 0 {
        return BigInt::zero();
    }
    if n < 0 {
        let c = binomial_coefficient(k - n - 1, k);
        return if k % 2 == 0 { c } else { -c };
    }
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

pub fn gcd(a: &Term, b: &Term) -> Term {
    a.gcd(b)
}

/// Floor of the square root of a nonnegative integer.
pub fn isqrt(n: &Term) -> Term {
    assert!(!n.is_negative(), "isqrt of a negative value");
    n.sqrt()
}

/// Divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1, "divisors requires n >= 1");
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Sum of the divisors of `n`.
pub fn divisor_sigma(n: u64) -> Term {
    let mut total = BigInt::one();
    for (p, e) in small_factor_powers(n) {
        // (p^(e+1) - 1) / (p - 1)
        let p = BigInt::from(p);
        let num = num_traits::pow(p.clone(), e as usize + 1) - 1u32;
        total *= num / (p - 1u32);
    }
    total
}

/// Möbius function: 0 if `n` has a square factor, else (-1)^(number of primes).
pub fn moebius_mu(n: u64) -> i8 {
    let mut mu = 1i8;
    for (_, e) in small_factor_powers(n) {
        if e > 1 {
            return 0;
        }
        mu = -mu;
    }
    mu
}

/// Nim addition: bitwise exclusive-or.
///
/// # Panics
/// If either operand is negative.
pub fn nim_sum(a: &Term, b: &Term) -> Term {
    assert!(
        !a.is_negative() && !b.is_negative(),
        "nim_sum is defined on nonnegative values"
    );
    let x: BigUint = a.magnitude() ^ b.magnitude();
    BigInt::from_biguint(Sign::Plus, x)
}

/// Prime-power decomposition of a machine-sized `n` by trial division.
pub(crate) fn small_factor_powers(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorization requires n >= 1");
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}
