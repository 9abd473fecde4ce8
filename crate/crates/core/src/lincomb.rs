//! Finite linear combinations with exact rational coefficients.

use std::collections::btree_map::{self, BTreeMap};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// `Σ q_k · k` over basis elements `k`, stored without zero coefficients and
/// iterated in the basis order of `K`.
///
/// The basis kind is the type parameter, so mixing compositions with binary
/// words is a compile error rather than a runtime one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LinComb<K: Ord> {
    terms: BTreeMap<K, BigRational>,
}

impl<K: Ord> Default for LinComb<K> {
    fn default() -> Self {
        LinComb { terms: BTreeMap::new() }
    }
}

impl<K: Ord + Clone> LinComb<K> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// The single term `1 · key`.
    pub fn basis(key: K) -> Self {
        Self::term(key, BigRational::one())
    }

    pub fn term(key: K, coeff: BigRational) -> Self {
        let mut lc = Self::zero();
        lc.add_term(key, coeff);
        lc
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Coefficient of `key` (zero when absent).
    pub fn coeff(&self, key: &K) -> BigRational {
        self.terms.get(key).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> btree_map::Iter<'_, K, BigRational> {
        self.terms.iter()
    }

    pub fn keys(&self) -> btree_map::Keys<'_, K, BigRational> {
        self.terms.keys()
    }

    /// Adds `coeff · key` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, key: K, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Adds `factor · other` in place.
    pub fn add_scaled(&mut self, other: &LinComb<K>, factor: &BigRational) {
        if factor.is_zero() {
            return;
        }
        for (k, q) in &other.terms {
            self.add_term(k.clone(), q * factor);
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        LinComb {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), c * q)).collect(),
        }
    }

    /// Re-indexes every term through `f`, merging terms that collide.
    pub fn map_keys<J: Ord + Clone>(&self, mut f: impl FnMut(&K) -> J) -> LinComb<J> {
        let mut out = LinComb::zero();
        for (k, q) in &self.terms {
            out.add_term(f(k), q.clone());
        }
        out
    }

    /// Keeps only the terms whose key satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&K) -> bool) -> Self {
        LinComb {
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, q)| (k.clone(), q.clone()))
                .collect(),
        }
    }

    /// Bilinear extension of a product defined on basis elements.
    pub fn bilinear<J: Ord + Clone>(
        &self,
        other: &LinComb<J>,
        mut product: impl FnMut(&K, &J) -> LinComb<K>,
    ) -> LinComb<K> {
        let mut out = LinComb::zero();
        for (a, qa) in &self.terms {
            for (b, qb) in &other.terms {
                out.add_scaled(&product(a, b), &(qa * qb));
            }
        }
        out
    }

    /// Linear extension of a map defined on basis elements.
    pub fn linear<J: Ord + Clone>(&self, mut map: impl FnMut(&K) -> LinComb<J>) -> LinComb<J> {
        let mut out = LinComb::zero();
        for (k, q) in &self.terms {
            out.add_scaled(&map(k), q);
        }
        out
    }

    /// Multiplies through by the least common denominator and divides by the
    /// gcd of the numerators, making the leading coefficient positive.
    pub fn primitive_integer_form(&self) -> Vec<(K, BigInt)> {
        use num_integer::Integer;
        let lcm = self
            .terms
            .values()
            .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        let mut ints: Vec<(K, BigInt)> = self
            .terms
            .iter()
            .map(|(k, q)| (k.clone(), (q * BigRational::from(lcm.clone())).to_integer()))
            .collect();
        let g = ints.iter().fold(BigInt::zero(), |acc, (_, v)| acc.gcd(v));
        if !g.is_zero() {
            let sign = if ints[0].1.is_negative() { -BigInt::one() } else { BigInt::one() };
            for (_, v) in &mut ints {
                *v = &*v / &g * &sign;
            }
        }
        ints
    }
}

impl<K: Ord + Clone> FromIterator<(K, BigRational)> for LinComb<K> {
    fn from_iter<I: IntoIterator<Item = (K, BigRational)>>(iter: I) -> Self {
        let mut lc = LinComb::zero();
        for (k, q) in iter {
            lc.add_term(k, q);
        }
        lc
    }
}

impl<'a, K: Ord> IntoIterator for &'a LinComb<K> {
    type Item = (&'a K, &'a BigRational);
    type IntoIter = btree_map::Iter<'a, K, BigRational>;

    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}

impl<K: Ord + Clone> AddAssign<&LinComb<K>> for LinComb<K> {
    fn add_assign(&mut self, rhs: &LinComb<K>) {
        for (k, q) in &rhs.terms {
            self.add_term(k.clone(), q.clone());
        }
    }
}

impl<K: Ord + Clone> Add for LinComb<K> {
    type Output = LinComb<K>;

    fn add(mut self, rhs: LinComb<K>) -> LinComb<K> {
        for (k, q) in rhs.terms {
            self.add_term(k, q);
        }
        self
    }
}

impl<K: Ord + Clone> Add for &LinComb<K> {
    type Output = LinComb<K>;

    fn add(self, rhs: &LinComb<K>) -> LinComb<K> {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<K: Ord + Clone> Neg for LinComb<K> {
    type Output = LinComb<K>;

    fn neg(mut self) -> LinComb<K> {
        for q in self.terms.values_mut() {
            *q = -q.clone();
        }
        self
    }
}

impl<K: Ord + Clone> Sub for LinComb<K> {
    type Output = LinComb<K>;

    fn sub(self, rhs: LinComb<K>) -> LinComb<K> {
        self + (-rhs)
    }
}

impl<K: Ord + Clone> Sub for &LinComb<K> {
    type Output = LinComb<K>;

    fn sub(self, rhs: &LinComb<K>) -> LinComb<K> {
        let mut out = self.clone();
        out.add_scaled(rhs, &-BigRational::one());
        out
    }
}

/// Free function form of `a + b`.
pub fn add<K: Ord + Clone>(a: &LinComb<K>, b: &LinComb<K>) -> LinComb<K> {
    a + b
}

/// Free function form of [`LinComb::scale`].
pub fn scale<K: Ord + Clone>(a: &LinComb<K>, q: &BigRational) -> LinComb<K> {
    a.scale(q)
}

impl<K: Ord + fmt::Display> fmt::Display for LinComb<K> {
    /// `2*(2,2) + (4) - 1/3*(1,3)`; the zero combination prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, q)) in self.terms.iter().enumerate() {
            let mag = q.abs();
            match (i, q.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag}*")?;
            }
            let key = k.to_string();
            if key.is_empty() {
                f.write_str("1")?;
            } else {
                f.write_str(&key)?;
            }
        }
        Ok(())
    }
}

impl<K: Ord + fmt::Debug> fmt::Debug for LinComb<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(self.terms.iter().map(|(k, q)| (k, q.to_string())))
            .finish()
    }
}

/// One serialized term: numerator and denominator are decimal strings so
/// that arbitrarily large integers survive every JSON reader.
#[derive(Serialize, Deserialize)]
struct TermRecord {
    word: String,
    numerator: String,
    denominator: String,
}

impl<K: Ord + fmt::Display> Serialize for LinComb<K> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.terms.iter().map(|(k, q)| TermRecord {
            word: k.to_string(),
            numerator: q.numer().to_string(),
            denominator: q.denom().to_string(),
        }))
    }
}

impl<'de, K> Deserialize<'de> for LinComb<K>
where
    K: Ord + Clone + FromStr,
    K::Err: fmt::Display,
{
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let records = Vec::<TermRecord>::deserialize(d)?;
        let mut lc = LinComb::zero();
        for r in records {
            let key = r.word.parse::<K>().map_err(D::Error::custom)?;
            let num: BigInt = r.numerator.parse().map_err(D::Error::custom)?;
            let den: BigInt = r.denominator.parse().map_err(D::Error::custom)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            lc.add_term(key, BigRational::new(num, den));
        }
        Ok(lc)
    }
}

/// Shorthand for an integer rational.
pub fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Shorthand for `n/d`.
pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
