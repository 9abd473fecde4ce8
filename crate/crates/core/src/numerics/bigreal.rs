use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::RwLock;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_GUARD: u32 = 10;

/// Requested decimal digits plus guard digits carried internally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Precision {
    pub digits: u32,
    pub guard: u32,
}

impl Precision {
    pub fn new(digits: u32) -> Self {
        Precision { digits, guard: DEFAULT_GUARD }
    }

    pub fn with_guard(digits: u32, guard: u32) -> Self {
        Precision { digits, guard }
    }

    pub fn working_digits(&self) -> u32 {
        self.digits + self.guard
    }

    /// Binary digits after the point for the working precision.
    pub fn bits(&self) -> u32 {
        (self.working_digits() as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 8
    }

    /// Same requested digits with `extra` more guard digits.
    pub fn widened(&self, extra: u32) -> Self {
        Precision { digits: self.digits, guard: self.guard + extra }
    }

    fn max(self, other: Precision) -> Precision {
        if self.working_digits() >= other.working_digits() {
            self
        } else {
            other
        }
    }
}

/// Fixed-point binary real `mant · 2^(−frac)`.
///
/// Every value records the precision it was computed for; binary operations
/// keep the finer of the two operands. Rounding is toward −∞.
#[derive(Clone, Debug)]
pub struct BigReal {
    mant: BigInt,
    frac: u32,
    prec: Precision,
}

fn shift(mant: &BigInt, from: u32, to: u32) -> BigInt {
    match to.cmp(&from) {
        Ordering::Equal => mant.clone(),
        Ordering::Greater => mant << (to - from),
        // Arithmetic shift on BigInt floors negative values.
        Ordering::Less => mant >> (from - to),
    }
}

impl BigReal {
    pub fn zero(prec: Precision) -> Self {
        BigReal { mant: BigInt::zero(), frac: prec.bits(), prec }
    }

    pub fn one(prec: Precision) -> Self {
        Self::from_integer(BigInt::one(), prec)
    }

    pub fn from_integer(n: impl Into<BigInt>, prec: Precision) -> Self {
        let frac = prec.bits();
        BigReal { mant: n.into() << frac, frac, prec }
    }

    pub fn from_rational(q: &BigRational, prec: Precision) -> Self {
        let frac = prec.bits();
        let mant = (q.numer() << frac).div_floor(q.denom());
        BigReal { mant, frac, prec }
    }

    pub fn from_ratio(n: i64, d: i64, prec: Precision) -> Self {
        Self::from_rational(&BigRational::new(n.into(), d.into()), prec)
    }

    /// Parses a plain decimal literal such as `-1.6449`.
    pub fn parse_decimal(s: &str, prec: Precision) -> Result<Self> {
        let s = s.trim();
        let (neg, body) = match s.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        if int.is_empty() && frac.is_empty()
            || !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
        {
            return Err(Error::Parse(format!("not a decimal number: {s:?}")));
        }
        let digits: BigInt = format!("0{int}{frac}").parse().expect("digits only");
        let den = BigInt::from(10u32).pow(frac.len() as u32);
        let q = BigRational::new(if neg { -digits } else { digits }, den);
        Ok(Self::from_rational(&q, prec))
    }

    /// `mant · 2^(−frac)` recorded at `prec`, rounded to its working bits.
    pub(crate) fn from_fixed(mant: BigInt, frac: u32, prec: Precision) -> Self {
        let bits = prec.bits();
        BigReal { mant: shift(&mant, frac, bits), frac: bits, prec }
    }

    /// Mantissa scaled to `2^frac`.
    pub(crate) fn fixed(&self, frac: u32) -> BigInt {
        shift(&self.mant, self.frac, frac)
    }

    /// Exact value as a fraction with a power-of-two denominator.
    pub fn to_rational(&self) -> BigRational {
        BigRational::new(self.mant.clone(), BigInt::one() << self.frac)
    }

    pub fn precision(&self) -> Precision {
        self.prec
    }

    /// Same value recorded at another precision (rounded down if coarser).
    pub fn with_precision(&self, prec: Precision) -> Self {
        let frac = prec.bits();
        BigReal { mant: shift(&self.mant, self.frac, frac), frac, prec }
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Self {
        BigReal { mant: self.mant.abs(), ..self.clone() }
    }

    /// `|self| < 10^e`, decided exactly on the stored value.
    pub fn abs_below_pow10(&self, e: i32) -> bool {
        let m = self.mant.abs();
        let scale = BigInt::one() << self.frac;
        let ten = BigInt::from(10u32);
        if e >= 0 {
            m < scale * ten.pow(e as u32)
        } else {
            m * ten.pow((-e) as u32) < scale
        }
    }

    /// Approximate `log10 |self|`; `-inf` for zero.
    pub fn log10_abs(&self) -> f64 {
        if self.mant.is_zero() {
            return f64::NEG_INFINITY;
        }
        let bits = self.mant.bits() as i64;
        let keep = 60.min(bits);
        let top = (self.mant.abs() >> (bits - keep) as u64).to_f64().expect("fits f64");
        (top.log2() + (bits - keep) as f64 - self.frac as f64) * std::f64::consts::LOG10_2
    }

    pub fn to_f64(&self) -> f64 {
        let bits = self.mant.bits() as i64;
        let drop = (bits - 64).max(0);
        let top = (&self.mant >> drop as u64).to_f64().expect("fits f64");
        top * 2f64.powi((drop - self.frac as i64) as i32)
    }

    /// Integer multiple.
    pub fn mul_int(&self, k: impl Into<BigInt>) -> Self {
        BigReal { mant: &self.mant * k.into(), ..self.clone() }
    }

    /// Division by a nonzero integer, rounding down.
    pub fn div_int(&self, k: impl Into<BigInt>) -> Self {
        BigReal { mant: self.mant.div_floor(&k.into()), ..self.clone() }
    }

    pub fn mul_rational(&self, q: &BigRational) -> Self {
        self.mul_int(q.numer().clone()).div_int(q.denom().clone())
    }

    pub fn powu(&self, mut e: u32) -> Self {
        let mut acc = BigReal::one(self.prec).with_frac(self.frac);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    fn with_frac(mut self, frac: u32) -> Self {
        self.mant = shift(&self.mant, self.frac, frac);
        self.frac = frac;
        self
    }

    /// Decimal expansion with `decimals` digits after the point, rounded to
    /// nearest.
    pub fn to_decimal(&self, decimals: u32) -> String {
        let scaled = &self.mant * BigInt::from(10u32).pow(decimals);
        let half = if self.frac == 0 { BigInt::zero() } else { BigInt::one() << (self.frac - 1) };
        let q: BigInt = (scaled + half) >> self.frac;
        let neg = q.is_negative();
        let digits = q.abs().to_string();
        let d = decimals as usize;
        let padded = if digits.len() <= d { format!("{}{}", "0".repeat(d + 1 - digits.len()), digits) } else { digits };
        let (int, frac) = padded.split_at(padded.len() - d);
        let sign = if neg { "-" } else { "" };
        if d == 0 {
            format!("{sign}{int}")
        } else {
            format!("{sign}{int}.{frac}")
        }
    }

    /// Decimal expansion with the requested number of significant digits.
    pub fn to_significant(&self, digits: u32) -> String {
        if self.is_zero() {
            return self.to_decimal(digits.saturating_sub(1));
        }
        let mag = self.log10_abs().floor() as i64;
        let decimals = (digits as i64 - 1 - mag).max(0) as u32;
        self.to_decimal(decimals)
    }

    pub fn sqrt(&self) -> Result<Self> {
        if self.is_negative() {
            return Err(Error::Domain("square root of a negative number".into()));
        }
        // sqrt(m · 2^-f) = sqrt(m · 2^f) · 2^-f
        let m = (&self.mant << self.frac).to_biguint().expect("nonnegative");
        Ok(BigReal { mant: BigInt::from_biguint(Sign::Plus, m.sqrt()), ..self.clone() })
    }

    pub fn pi(prec: Precision) -> Self {
        let frac = prec.bits();
        BigReal { mant: pi_fixed(frac), frac, prec }
    }
}

/// `atan(1/x) · 2^bits` for integer `x ≥ 2`.
fn atan_inv(x: u64, bits: u32) -> BigInt {
    let one = BigInt::one() << bits;
    let x2 = BigInt::from(x) * BigInt::from(x);
    let mut power = one / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    sum
}

static PI_CACHE: RwLock<Option<(u32, BigInt)>> = RwLock::new(None);

/// π · 2^frac (rounded down), cached at the finest precision seen so far.
fn pi_fixed(frac: u32) -> BigInt {
    if let Some((bits, v)) = PI_CACHE.read().expect("pi cache poisoned").as_ref() {
        if *bits >= frac {
            return v >> (bits - frac);
        }
    }
    let bits = frac + 32;
    let v = (atan_inv(5, bits) * 16u32 - atan_inv(239, bits) * 4u32) >> 32u32;
    let mut slot = PI_CACHE.write().expect("pi cache poisoned");
    if slot.as_ref().map_or(true, |(b, _)| *b < frac) {
        *slot = Some((frac, v.clone()));
    }
    v
}

impl PartialEq for BigReal {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for BigReal {}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BigReal {
    fn cmp(&self, other: &Self) -> Ordering {
        let f = self.frac.max(other.frac);
        shift(&self.mant, self.frac, f).cmp(&shift(&other.mant, other.frac, f))
    }
}

impl<'a> Add<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    fn add(self, rhs: &BigReal) -> BigReal {
        let frac = self.frac.max(rhs.frac);
        BigReal {
            mant: shift(&self.mant, self.frac, frac) + shift(&rhs.mant, rhs.frac, frac),
            frac,
            prec: self.prec.max(rhs.prec),
        }
    }
}

impl<'a> Sub<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    fn sub(self, rhs: &BigReal) -> BigReal {
        let frac = self.frac.max(rhs.frac);
        BigReal {
            mant: shift(&self.mant, self.frac, frac) - shift(&rhs.mant, rhs.frac, frac),
            frac,
            prec: self.prec.max(rhs.prec),
        }
    }
}

impl<'a> Mul<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    fn mul(self, rhs: &BigReal) -> BigReal {
        let frac = self.frac.max(rhs.frac);
        BigReal {
            mant: (&self.mant * &rhs.mant) >> (self.frac + rhs.frac - frac),
            frac,
            prec: self.prec.max(rhs.prec),
        }
    }
}

impl<'a> Div<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    /// Panics on division by zero.
    fn div(self, rhs: &BigReal) -> BigReal {
        assert!(!rhs.is_zero(), "division by zero");
        let frac = self.frac.max(rhs.frac);
        let num = shift(&self.mant, self.frac, frac + rhs.frac);
        BigReal { mant: num.div_floor(&rhs.mant), frac, prec: self.prec.max(rhs.prec) }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for BigReal {
            type Output = BigReal;
            fn $f(self, rhs: BigReal) -> BigReal {
                (&self).$f(&rhs)
            }
        }
        impl<'a> $tr<&'a BigReal> for BigReal {
            type Output = BigReal;
            fn $f(self, rhs: &BigReal) -> BigReal {
                (&self).$f(rhs)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal { mant: -self.mant, ..self }
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        -self.clone()
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_significant(self.prec.digits.max(1)))
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    const PI_50: &str = "3.14159265358979323846264338327950288419716939937511";

    #[test]
    fn pi_digits() {
        let p = Precision::new(50);
        assert_eq!(BigReal::pi(p).to_decimal(50), PI_50);
        // Lower precision after a higher one comes from the cache.
        assert_eq!(BigReal::pi(Precision::new(20)).to_decimal(20), "3.14159265358979323846");
        let big = BigReal::pi(Precision::new(200)).to_decimal(50);
        assert_eq!(big, PI_50);
    }

    #[test]
    fn arithmetic() {
        let p = Precision::new(30);
        let third = BigReal::from_ratio(1, 3, p);
        assert_eq!((&third * &BigReal::from_integer(3, p)).to_decimal(25), "1.0000000000000000000000000");
        let x = BigReal::parse_decimal("-2.5", p).unwrap();
        assert_eq!(x.to_decimal(3), "-2.500");
        assert_eq!((&x / &BigReal::from_integer(2, p)).to_decimal(2), "-1.25");
        assert_eq!(BigReal::from_integer(2, p).sqrt().unwrap().to_decimal(20), "1.41421356237309504880");
        assert_eq!(BigReal::from_ratio(3, 2, p).powu(3).to_decimal(3), "3.375");
        assert!((x.to_f64() + 2.5).abs() < 1e-15);
        assert!((BigReal::from_ratio(1, 1000, p).log10_abs() + 3.0).abs() < 1e-9);
    }

    #[test]
    fn comparisons() {
        let p = Precision::new(40);
        let small = BigReal::parse_decimal("0.00000000000000000000000000000002", p).unwrap();
        assert!(small.abs_below_pow10(-31));
        assert!(!small.abs_below_pow10(-32));
        assert!(BigReal::from_integer(-5, p).abs_below_pow10(1));
        assert!(BigReal::from_integer(1, p) > BigReal::from_ratio(99, 100, p));
        assert!(BigReal::parse_decimal("1.2.3", p).is_err());
        assert!(BigReal::parse_decimal("abc", p).is_err());
    }

    #[test]
    fn rounding_display() {
        let p = Precision::new(10);
        assert_eq!(BigReal::from_ratio(2, 3, p).to_decimal(4), "0.6667");
        assert_eq!(BigReal::from_ratio(-1, 8, p).to_decimal(2), "-0.12");
        assert_eq!(BigReal::from_ratio(12345, 100, p).to_significant(3), "123");
        assert_eq!(BigReal::from_ratio(1, 800, p).to_significant(3), "0.00125");
    }
}
