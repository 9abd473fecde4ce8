//! Compositions (multi-indices) and words over letter alphabets.
//!
//! A [`Composition`] `(n₁,…,n_r)` indexes the nested sum `ζ(n₁,…,n_r)`; a
//! [`BinaryWord`] over `{x₀, x₁}` indexes the iterated integral. The two are
//! linked by `(n₁,…,n_r) ↔ x₁x₀^{n₁−1}⋯x₁x₀^{n_r−1}`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An ordered sequence of positive integers.
///
/// Ordered graded-lexicographically: by weight first, then lexicographically
/// on the parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Composition(Vec<u32>);

impl Composition {
    /// Builds a composition, rejecting zero parts.
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        if parts.contains(&0) {
            return Err(Error::Parse(format!("composition parts must be >= 1: {parts:?}")));
        }
        Ok(Composition(parts))
    }

    pub fn empty() -> Self {
        Composition(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn into_parts(self) -> Vec<u32> {
        self.0
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Depth zero or last part at least 2.
    pub fn is_convergent(&self) -> bool {
        self.0.last().map_or(true, |&n| n >= 2)
    }

    /// All parts in `{2, 3}`.
    pub fn is_hoffman(&self) -> bool {
        self.0.iter().all(|&n| n == 2 || n == 3)
    }

    pub fn to_binary(&self) -> BinaryWord {
        let mut letters = Vec::with_capacity(self.weight() as usize);
        for &n in &self.0 {
            letters.push(Letter::X1);
            letters.extend(std::iter::repeat(Letter::X0).take(n as usize - 1));
        }
        Word(letters)
    }

    /// Inverse of [`Composition::to_binary`]. Fails on words starting with `x₀`.
    pub fn from_binary(word: &BinaryWord) -> Result<Self> {
        let mut parts: Vec<u32> = Vec::new();
        for &letter in word.letters() {
            match letter {
                Letter::X1 => parts.push(1),
                Letter::X0 => match parts.last_mut() {
                    Some(last) => *last += 1,
                    None => {
                        return Err(Error::Domain(format!(
                            "binary word {word} starts with x0 and encodes no composition"
                        )))
                    }
                },
            }
        }
        Ok(Composition(parts))
    }

    /// Appends one part.
    pub fn pushed(&self, part: u32) -> Self {
        let mut parts = self.0.clone();
        parts.push(part);
        Composition(parts)
    }
}

/// Free function form of [`Composition::weight`].
pub fn weight(c: &Composition) -> u32 {
    c.weight()
}

/// Free function form of [`Composition::is_convergent`].
pub fn is_convergent(c: &Composition) -> bool {
    c.is_convergent()
}

pub fn to_binary(c: &Composition) -> BinaryWord {
    c.to_binary()
}

pub fn from_binary(w: &BinaryWord) -> Result<Composition> {
    Composition::from_binary(w)
}

impl Ord for Composition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight().cmp(&other.weight()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Composition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Composition {
    type Err = Error;

    /// Parses `"(1,2)"`, `"( 3 )"` or `"()"`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let inner = t
            .strip_prefix('(')
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(|| Error::Parse(format!("expected a parenthesised composition, got {s:?}")))?;
        if inner.trim().is_empty() {
            return Ok(Composition::empty());
        }
        let parts = inner
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad composition part {p:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Composition::new(parts)
    }
}

/// Enumerates the compositions of `weight` in canonical order.
///
/// With `convergent_only` the result has `2^(weight−2)` entries for
/// `weight >= 2`, one (the empty composition) for weight 0 and none for 1.
pub fn enumerate_compositions(weight: u32, convergent_only: bool) -> Vec<Composition> {
    fn rec(rest: u32, prefix: &mut Vec<u32>, convergent_only: bool, out: &mut Vec<Composition>) {
        if rest == 0 {
            if !convergent_only || prefix.last().map_or(true, |&n| n >= 2) {
                out.push(Composition(prefix.clone()));
            }
            return;
        }
        for first in 1..=rest {
            prefix.push(first);
            rec(rest - first, prefix, convergent_only, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(weight, &mut Vec::new(), convergent_only, &mut out);
    out
}

/// Letter of a word; the alphabets used by the shuffle product.
pub trait Alphabet: Clone + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync {}

impl<T: Clone + Ord + Hash + fmt::Debug + fmt::Display + Send + Sync> Alphabet for T {}

/// The two-letter alphabet of iterated integrals: `x₀ = dt/t`, `x₁ = dt/(1−t)`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub enum Letter {
    X0,
    X1,
}

impl Letter {
    /// Exchanges `x₀` and `x₁` (the substitution `t ↦ 1−t`).
    pub fn swapped(self) -> Letter {
        match self {
            Letter::X0 => Letter::X1,
            Letter::X1 => Letter::X0,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Letter::X0 => "0",
            Letter::X1 => "1",
        })
    }
}

/// Letter `f_n` of the f-alphabet (`f₂`, `f₃`, `f₅`, …).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct FLetter(pub u32);

impl fmt::Display for FLetter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}", self.0)
    }
}

/// A word over an alphabet `A`, ordered by length then lexicographically.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word<A>(Vec<A>);

/// Word over `{x₀, x₁}`.
pub type BinaryWord = Word<Letter>;

/// Word over the f-alphabet (or any other finite alphabet of tagged letters).
pub type GenericWord = Word<FLetter>;

impl<A: Alphabet> Word<A> {
    pub fn new(letters: Vec<A>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[A] {
        &self.0
    }

    pub fn into_letters(self) -> Vec<A> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word<A>) -> Word<A> {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }
}

impl BinaryWord {
    /// Empty, or first letter `x₁` and last letter `x₀`.
    pub fn is_convergent(&self) -> bool {
        match (self.0.first(), self.0.last()) {
            (None, _) => true,
            (Some(&first), Some(&last)) => first == Letter::X1 && last == Letter::X0,
            _ => unreachable!(),
        }
    }

    /// The word read backwards with `x₀ ↔ x₁`.
    pub fn dual(&self) -> BinaryWord {
        Word(self.0.iter().rev().map(|l| l.swapped()).collect())
    }
}

impl<A: Alphabet> Ord for Word<A> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl<A: Alphabet> PartialOrd for Word<A> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<A: Alphabet> fmt::Display for Word<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.0 {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl<A: Alphabet> fmt::Debug for Word<A> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            f.write_str("ε")
        } else {
            fmt::Display::fmt(self, f)
        }
    }
}

impl FromStr for BinaryWord {
    type Err = Error;

    /// Parses a string over `{0,1}` such as `"110"`; the empty string is the empty word.
    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| match c {
                '0' => Ok(Letter::X0),
                '1' => Ok(Letter::X1),
                _ => Err(Error::Parse(format!("binary words use only 0 and 1, got {s:?}"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

impl FromStr for GenericWord {
    type Err = Error;

    /// Parses `"f3f5f7"` (whitespace between letters is allowed).
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Ok(Word::empty());
        }
        let body = compact
            .strip_prefix('f')
            .ok_or_else(|| Error::Parse(format!("f-words look like f3f5, got {s:?}")))?;
        body.split('f')
            .map(|n| {
                n.parse::<u32>()
                    .map(FLetter)
                    .map_err(|_| Error::Parse(format!("bad f-letter index {n:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }
}

macro_rules! word_serde {
    ($t:ty) => {
        impl Serialize for $t {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                s.collect_str(self)
            }
        }

        impl<'de> Deserialize<'de> for $t {
            fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
                let s = String::deserialize(d)?;
                s.parse().map_err(serde::de::Error::custom)
            }
        }
    };
}

word_serde!(Composition);
word_serde!(BinaryWord);
word_serde!(GenericWord);
