//! Certified real enclosures for transcendental expressions.
//!
//! A [`HighPrecisionValue`] is a closed interval `[lo, hi] / 2^bits` that is
//! guaranteed to contain the true value. Every operation rounds its lower
//! endpoint down and its upper endpoint up, so enclosures stay valid no
//! matter how coarse the working precision is.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum PrecisionError {
    #[error("floor still ambiguous at the precision cap of {cap_bits} bits")]
    PrecisionCapExceeded { cap_bits: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HighPrecisionValue {
    lo: BigInt,
    hi: BigInt,
    bits: u32,
}

fn floor_shift(x: &BigInt, s: u32) -> BigInt {
    // arithmetic shift on BigInt floors toward -inf
    x >> s
}

fn ceil_shift(x: &BigInt, s: u32) -> BigInt {
    -((-x) >> s)
}

fn floor_div(a: &BigInt, b: &BigInt) -> BigInt {
    a.div_floor(b)
}

fn ceil_div(a: &BigInt, b: &BigInt) -> BigInt {
    -((-a).div_floor(b))
}

impl HighPrecisionValue {
    /// Tightest enclosure of `q` on the `2^-bits` grid.
    pub fn from_rational(q: &BigRational, bits: u32) -> Self {
        let scaled = q.numer() << bits;
        HighPrecisionValue {
            lo: floor_div(&scaled, q.denom()),
            hi: ceil_div(&scaled, q.denom()),
            bits,
        }
    }

    pub fn from_integer(n: &BigInt, bits: u32) -> Self {
        let v = n << bits;
        HighPrecisionValue {
            lo: v.clone(),
            hi: v,
            bits,
        }
    }

    pub fn precision(&self) -> u32 {
        self.bits
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(self.lo.clone(), BigInt::one() << self.bits)
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(self.hi.clone(), BigInt::one() << self.bits)
    }

    pub fn width(&self) -> BigRational {
        self.upper() - self.lower()
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lower() <= q && q <= &self.upper()
    }

    /// The common floor of both endpoints, if they agree.
    pub fn floor(&self) -> Option<BigInt> {
        let a = floor_shift(&self.lo, self.bits);
        let b = floor_shift(&self.hi, self.bits);
        (a == b).then_some(a)
    }

    fn rescale(&self, bits: u32) -> Self {
        debug_assert!(bits >= self.bits);
        let s = bits - self.bits;
        HighPrecisionValue {
            lo: &self.lo << s,
            hi: &self.hi << s,
            bits,
        }
    }

    /// Intersection with a second enclosure of the same quantity, at the
    /// finer of the two precisions. Bounds never move outward.
    ///
    /// # Panics
    /// If the enclosures are disjoint, which means one of them is wrong.
    pub fn refine(&self, finer: &HighPrecisionValue) -> HighPrecisionValue {
        let bits = self.bits.max(finer.bits);
        let a = self.rescale(bits);
        let b = finer.rescale(bits);
        let lo = a.lo.max(b.lo);
        let hi = a.hi.min(b.hi);
        assert!(lo <= hi, "disjoint enclosures of one value");
        HighPrecisionValue { lo, hi, bits }
    }

    pub fn add(&self, other: &HighPrecisionValue) -> HighPrecisionValue {
        assert_eq!(self.bits, other.bits, "precision mismatch");
        HighPrecisionValue {
            lo: &self.lo + &other.lo,
            hi: &self.hi + &other.hi,
            bits: self.bits,
        }
    }

    pub fn mul(&self, other: &HighPrecisionValue) -> HighPrecisionValue {
        assert_eq!(self.bits, other.bits, "precision mismatch");
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let min = products.iter().min().unwrap();
        let max = products.iter().max().unwrap();
        HighPrecisionValue {
            lo: floor_shift(min, self.bits),
            hi: ceil_shift(max, self.bits),
            bits: self.bits,
        }
    }

    /// Enclosure of `exp` over the interval.
    ///
    /// # Panics
    /// If the interval reaches below zero.
    pub fn exp(&self) -> HighPrecisionValue {
        assert!(!self.lo.is_negative(), "exp is implemented for x >= 0");
        let (lo, hi_at_lo) = exp_point(&self.lo, self.bits);
        let hi = if self.lo == self.hi {
            hi_at_lo
        } else {
            exp_point(&self.hi, self.bits).1
        };
        HighPrecisionValue {
            lo,
            hi,
            bits: self.bits,
        }
    }

    /// Enclosure of the natural logarithm over the interval.
    ///
    /// # Panics
    /// If the interval reaches below one.
    pub fn ln(&self) -> HighPrecisionValue {
        let one = BigInt::one() << self.bits;
        assert!(self.lo >= one, "ln is implemented for x >= 1");
        let (lo, mut hi) = ln_point(&self.lo, self.bits);
        if self.hi != self.lo {
            hi = ln_point(&self.hi, self.bits).1;
        }
        HighPrecisionValue {
            lo,
            hi,
            bits: self.bits,
        }
    }

    /// Evaluates `eval(bits)` at doubling precisions, intersecting each new
    /// enclosure with the previous one, until the floor is unambiguous.
    pub fn certified_floor<F>(eval: F, start_bits: u32, cap_bits: u32) -> Result<BigInt, PrecisionError>
    where
        F: Fn(u32) -> HighPrecisionValue,
    {
        let mut bits = start_bits.max(8);
        let mut acc: Option<HighPrecisionValue> = None;
        while bits <= cap_bits {
            let v = eval(bits);
            let v = match &acc {
                Some(prev) => prev.refine(&v),
                None => v,
            };
            if let Some(f) = v.floor() {
                return Ok(f);
            }
            acc = Some(v);
            bits *= 2;
        }
        Err(PrecisionError::PrecisionCapExceeded { cap_bits })
    }
}

// Fixed-point interval at `w` fractional bits, nonnegative values only.
#[derive(Clone)]
struct Fixed {
    lo: BigInt,
    hi: BigInt,
}

impl Fixed {
    fn mul(&self, other: &Fixed, w: u32) -> Fixed {
        Fixed {
            lo: floor_shift(&(&self.lo * &other.lo), w),
            hi: ceil_shift(&(&self.hi * &other.hi), w),
        }
    }

    fn div_int(&self, k: u64) -> Fixed {
        let k = BigInt::from(k);
        Fixed {
            lo: floor_div(&self.lo, &k),
            hi: ceil_div(&self.hi, &k),
        }
    }

    fn to_bits(&self, w: u32, bits: u32) -> (BigInt, BigInt) {
        let s = w - bits;
        (floor_shift(&self.lo, s), ceil_shift(&self.hi, s))
    }
}

// Enclosure of exp(a / 2^bits) for a >= 0, returned on the same grid.
fn exp_point(a: &BigInt, bits: u32) -> (BigInt, BigInt) {
    if a.is_zero() {
        let one = BigInt::one() << bits;
        return (one.clone(), one);
    }
    // halve until the argument is at most 1/2
    let int_bits = (a.bits() as i64 - bits as i64).max(0) as u32;
    let halvings = int_bits + 1;
    let w = bits + 2 * halvings + 2 * int_bits + 48;
    let y = a << (w - bits - halvings);

    let one = BigInt::one() << w;
    let mut term = Fixed {
        lo: one.clone(),
        hi: one.clone(),
    };
    let mut sum = term.clone();
    let yy = Fixed {
        lo: y.clone(),
        hi: y,
    };
    let mut k = 1u64;
    loop {
        term = term.mul(&yy, w).div_int(k);
        sum.lo += &term.lo;
        sum.hi += &term.hi;
        if term.hi <= BigInt::one() {
            break;
        }
        k += 1;
    }
    // tail after the last term is below one ulp since y <= 1/2
    sum.hi += 2u32;
    for _ in 0..halvings {
        sum = sum.mul(&sum.clone(), w);
    }
    sum.to_bits(w, bits)
}

// Enclosure of atanh(num / den) for 0 <= num / den <= 1/3, at `w` bits.
fn atanh_small(num: &BigInt, den: &BigInt, w: u32) -> Fixed {
    if num.is_zero() {
        return Fixed {
            lo: BigInt::zero(),
            hi: BigInt::zero(),
        };
    }
    let scaled = num << w;
    let t = Fixed {
        lo: floor_div(&scaled, den),
        hi: ceil_div(&scaled, den),
    };
    let t2 = t.mul(&t, w);
    let mut power = t.clone();
    let mut sum = t;
    let mut j = 1u64;
    loop {
        power = power.mul(&t2, w);
        let term = power.div_int(2 * j + 1);
        sum.lo += &term.lo;
        sum.hi += &term.hi;
        if power.hi <= BigInt::one() {
            break;
        }
        j += 1;
    }
    // geometric tail bounded by 9/8 of the next power, under two ulps
    sum.hi += 2u32;
    sum
}

// Enclosure of ln(a / 2^bits) for a >= 2^bits.
fn ln_point(a: &BigInt, bits: u32) -> (BigInt, BigInt) {
    let k = a.bits() - 1 - bits as u64;
    let w = bits + 48 + 64u64.saturating_sub(k.leading_zeros() as u64) as u32;
    // ln(a / 2^bits) = k ln 2 + 2 atanh((m - 1) / (m + 1)), m = a / 2^(bits + k)
    let unit = BigInt::one() << (bits as u64 + k);
    let mut r = atanh_small(&(a - &unit), &(a + &unit), w);
    r.lo <<= 1;
    r.hi <<= 1;
    if k > 0 {
        let ln2 = atanh_small(&BigInt::one(), &BigInt::from(3), w);
        r.lo += (ln2.lo << 1) * k;
        r.hi += (ln2.hi << 1) * k;
    }
    r.to_bits(w, bits)
}
