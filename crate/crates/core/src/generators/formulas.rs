//! Generators defined by explicit formulas or standard recurrences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::exec::{self, Mode};
use crate::numcore::{
    binomial_coefficient, divisor_sigma, flatten_square_by_antidiagonals, flatten_triangle_by_rows,
    isqrt, link_rationals, nim_sum, nth_prime, primes_up_to, HighPrecisionValue, PrecisionError,
    Term, TermList,
};

fn exact_div(num: BigInt, den: &BigInt) -> Term {
    let (q, r) = num.div_rem(den);
    assert!(r.is_zero(), "inexact division by {den}");
    q
}

/// Little Schröder numbers by the binomial sum, `a(1) = 1`.
///
/// # Panics
/// If `n == 0`.
pub fn super_catalan_formula(n: u64) -> Term {
    assert!(n >= 1, "defined for n >= 1");
    if n == 1 {
        return BigInt::one();
    }
    let n = n as i64;
    let sum: BigInt = (0..=n - 2)
        .map(|k| binomial_coefficient(2 * n - k - 2, n - 1) * binomial_coefficient(n - 2, k))
        .sum();
    exact_div(sum, &BigInt::from(n))
}

/// `a(1) = a(2) = 1`, `(n+1) a(n+1) = 3(2n-1) a(n) - (n-2) a(n-1)`.
pub fn super_catalan_recurrence(count: usize) -> TermList {
    let mut t: Vec<Term> = Vec::with_capacity(count);
    for i in 0..count {
        let next = if i < 2 {
            BigInt::one()
        } else {
            // computing a(n+1) with n = i
            let n = BigInt::from(i);
            let v = BigInt::from(3) * (BigInt::from(2) * &n - 1) * &t[i - 1] - (&n - 2) * &t[i - 2];
            exact_div(v, &(n + 1))
        };
        t.push(next);
    }
    TermList::new(1, t)
}

/// `prime(n) - 1`.
pub fn a006093(count: usize) -> TermList {
    if count == 0 {
        return TermList::new(1, Vec::new());
    }
    let bound = nth_prime(count as u64);
    let t = primes_up_to(bound)
        .into_iter()
        .take(count)
        .map(|p| BigInt::from(p - 1))
        .collect();
    TermList::new(1, t)
}

/// Sum of divisors.
pub fn a000203(count: usize) -> TermList {
    TermList::new(1, (1..=count as u64).map(divisor_sigma).collect())
}

/// `floor(n^{3/2}) - sigma(n)`, the floor taken as the integer square root of `n^3`.
pub fn a055682_value(n: u64) -> Term {
    let cube = BigInt::from(n).pow(3);
    isqrt(&cube) - divisor_sigma(n)
}

pub fn a055682(count: usize) -> TermList {
    TermList::new(1, (1..=count as u64).map(a055682_value).collect())
}

pub const HARMONIC_START_BITS: u32 = 64;
pub const HARMONIC_CAP_BITS: u32 = 1 << 14;

/// `H_1, ..., H_count` as exact rationals.
pub fn harmonic_numbers(count: usize) -> Vec<BigRational> {
    let mut h = BigRational::zero();
    (1..=count)
        .map(|i| {
            h += BigRational::new(BigInt::one(), BigInt::from(i));
            h.clone()
        })
        .collect()
}

/// `floor(h + exp(h) ln h)` for rational `h >= 1`, certified.
pub fn harmonic_bound_floor(h: &BigRational, cap_bits: u32) -> Result<Term, PrecisionError> {
    HighPrecisionValue::certified_floor(
        |bits| {
            let x = HighPrecisionValue::from_rational(h, bits);
            x.add(&x.exp().mul(&x.ln()))
        },
        HARMONIC_START_BITS,
        cap_bits,
    )
}

/// `floor(H_n + exp(H_n) ln H_n) - sigma(n)` with every floor certified.
pub fn a057641(count: usize) -> Result<TermList, PrecisionError> {
    a057641_with(count, Mode::default(), HARMONIC_CAP_BITS)
}

pub fn a057641_with(count: usize, mode: Mode, cap_bits: u32) -> Result<TermList, PrecisionError> {
    let h = harmonic_numbers(count);
    let values = exec::map_range(mode, 0, count as u64, |i| {
        harmonic_bound_floor(&h[i as usize], cap_bits).map(|f| f - divisor_sigma(i + 1))
    });
    Ok(TermList::new(1, values.into_iter().collect::<Result<_, _>>()?))
}

/// `4^n C(3n, n)`.
pub fn a006588(n: u64) -> Term {
    (BigInt::one() << (2 * n)) * binomial_coefficient(3 * n as i64, n as i64)
}

/// `sum_{k=0}^{n} C(4n+1, 2n-2k) C(n+k, k)`.
pub fn a006588_sum(n: u64) -> Term {
    let n = n as i64;
    (0..=n)
        .map(|k| binomial_coefficient(4 * n + 1, 2 * n - 2 * k) * binomial_coefficient(n + k, k))
        .sum()
}

pub fn a006588_terms(count: usize) -> TermList {
    TermList::new(0, (0..count as u64).map(a006588).collect())
}

/// Rows `0..rows` of Pascal's triangle, concatenated.
pub fn pascal_flat(rows: usize) -> TermList {
    let triangle: Vec<Vec<Term>> = (0..rows as i64)
        .map(|r| (0..=r).map(|k| binomial_coefficient(r, k)).collect())
        .collect();
    flatten_triangle_by_rows(&triangle).expect("rows have the triangle shape")
}

/// The Nim-addition table read by antidiagonals, `depth` antidiagonals deep.
///
/// # Panics
/// If `depth == 0`.
pub fn nim_flat(depth: u64) -> TermList {
    flatten_square_by_antidiagonals(|i, j| nim_sum(&BigInt::from(i), &BigInt::from(j)), depth)
        .expect("depth must be positive")
}

/// `M_n = M_{n-1} + sum_{k=0}^{n-2} M_k M_{n-2-k}`, `M_0 = 1`.
pub fn motzkin(count: usize) -> TermList {
    let mut m: Vec<Term> = Vec::with_capacity(count);
    for n in 0..count {
        let v = if n == 0 {
            BigInt::one()
        } else {
            let conv: BigInt = (0..n.saturating_sub(1)).map(|k| &m[k] * &m[n - 2 - k]).sum();
            &m[n - 1] + conv
        };
        m.push(v);
    }
    TermList::new(0, m)
}

/// `B_0, ..., B_{count-1}` with `B_1 = -1/2`.
pub fn bernoulli_numbers(count: usize) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(count);
    for n in 0..count {
        let v = if n == 0 {
            BigRational::one()
        } else {
            let s: BigRational = (0..n)
                .map(|k| BigRational::from_integer(binomial_coefficient(n as i64 + 1, k as i64)) * &b[k])
                .sum();
            -s / BigRational::from_integer(BigInt::from(n + 1))
        };
        b.push(v);
    }
    b
}

/// Bernoulli numbers as reduced numerator and denominator lists.
pub fn bernoulli_pair(count: usize) -> (TermList, TermList) {
    link_rationals(&bernoulli_numbers(count))
}

pub fn all_ones(count: usize) -> TermList {
    TermList::new(0, vec![BigInt::one(); count])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numcore::is_prime;

    fn ints(v: &[i64]) -> Vec<Term> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn schroeder_both_ways() {
        assert_eq!(super_catalan_recurrence(5).terms, ints(&[1, 1, 3, 11, 45]));
        assert_eq!(super_catalan_recurrence(1).terms, ints(&[1]));
        let rec = super_catalan_recurrence(60);
        for n in 1..=60u64 {
            assert_eq!(super_catalan_formula(n), rec.terms[n as usize - 1]);
        }
        assert_eq!(super_catalan_formula(4), BigInt::from(11));
    }

    #[test]
    fn primes_minus_one() {
        let t = a006093(11);
        assert_eq!(t.terms, ints(&[1, 2, 4, 6, 10, 12, 16, 18, 22, 28, 30]));
        assert_eq!(a006093(1).terms, ints(&[1]));
        let mut p = BigInt::from(1);
        for v in &a006093(25).terms {
            p += 1;
            while !is_prime(&p) {
                p += 1;
            }
            assert_eq!(&p - 1, *v);
        }
    }

    #[test]
    fn sigma_and_gap() {
        let s = a000203(100);
        assert_eq!(s.terms[0], BigInt::from(1));
        assert_eq!(s.terms[5], BigInt::from(12));
        for n in 1..=100u64 {
            let brute: u64 = (1..=n).filter(|d| n % d == 0).sum();
            assert_eq!(s.terms[n as usize - 1], BigInt::from(brute));
        }
        let g = a055682(4);
        assert_eq!(g.terms, ints(&[0, -1, 1, 1]));
    }

    #[test]
    fn harmonic_floor_values() {
        // n=1: 1 + e^1 * 0 = 1, minus sigma(1) = 1
        let t = a057641_with(3, Mode::Sequential, HARMONIC_CAP_BITS).unwrap();
        // n=2: H = 3/2, 1.5 + 4.4817 * 0.405465 = 3.3171 -> 3 - 3
        // n=3: H = 11/6, 1.8333 + 6.2547 * 0.606136 = 5.6246 -> 5 - 4
        assert_eq!(t.terms, ints(&[0, 0, 1]));
        let capped = harmonic_bound_floor(&BigRational::new(3.into(), 2.into()), 8);
        assert_eq!(capped, Err(PrecisionError::PrecisionCapExceeded { cap_bits: 8 }));
    }

    #[test]
    fn central_identity() {
        let first: Vec<Term> = (0..4).map(a006588).collect();
        assert_eq!(first, ints(&[1, 12, 240, 5376]));
        for n in 0..=40 {
            assert_eq!(a006588(n), a006588_sum(n));
        }
    }

    #[test]
    fn flattened_tables() {
        assert_eq!(pascal_flat(5).match_text(), "1,1,1,1,2,1,1,3,3,1,1,4,6,4,1");
        assert_eq!(nim_flat(5).match_text(), "0,1,1,2,0,2,3,3,3,3,4,2,0,2,4");
    }

    #[test]
    fn motzkin_prefix() {
        assert_eq!(motzkin(6).terms, ints(&[1, 1, 2, 4, 9, 21]));
        assert_eq!(motzkin(1).terms, ints(&[1]));
    }

    #[test]
    fn bernoulli_linked() {
        let (num, den) = bernoulli_pair(3);
        assert_eq!(num.terms, ints(&[1, -1, 1]));
        assert_eq!(den.terms, ints(&[1, 2, 6]));
        let (num, _) = bernoulli_pair(30);
        for n in (3..30).step_by(2) {
            assert!(num.terms[n].is_zero());
        }
    }
}
