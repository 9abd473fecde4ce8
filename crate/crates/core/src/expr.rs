//! Polynomial expressions in MZVs such as `"28*(3,9)"`,
//! `"(2,3) - 3*(2)*(3)"` or `"5197/691*(12)"`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::algebra::stuffle_lc;
use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::numerics::{mzv_eval, BigReal, Precision};
use crate::words::Composition;

/// `Σ q_i · Π_j ζ(c_ij)`; an empty product is the constant 1.
#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub terms: Vec<(BigRational, Vec<Composition>)>,
}

impl Expr {
    pub fn zeta(c: Composition) -> Self {
        Expr { terms: vec![(BigRational::one(), vec![c])] }
    }

    pub fn compositions(&self) -> impl Iterator<Item = &Composition> {
        self.terms.iter().flat_map(|(_, f)| f.iter())
    }

    /// Weight of every term, if they all agree.
    pub fn weight(&self) -> Option<u32> {
        let mut ws = self.terms.iter().map(|(_, f)| f.iter().map(|c| c.weight()).sum::<u32>());
        let w = ws.next()?;
        ws.all(|x| x == w).then_some(w)
    }

    /// Expands products with the stuffle product into a linear combination.
    pub fn linearize(&self) -> LinComb<Composition> {
        let mut out = LinComb::zero();
        for (q, factors) in &self.terms {
            let product = factors
                .iter()
                .fold(LinComb::basis(Composition::empty()), |acc, c| stuffle_lc(&acc, &LinComb::basis(c.clone())));
            out.add_scaled(&product, q);
        }
        out
    }

    pub fn eval(&self, prec: Precision) -> Result<BigReal> {
        let inner = prec.widened(3);
        let mut cache: HashMap<&Composition, BigReal> = HashMap::new();
        for c in self.compositions() {
            if !cache.contains_key(c) {
                cache.insert(c, mzv_eval(c, inner)?);
            }
        }
        let mut acc = BigReal::zero(inner);
        for (q, factors) in &self.terms {
            let product = factors.iter().fold(BigReal::one(inner), |a, c| &a * &cache[c]);
            acc = &acc + &product.mul_rational(q);
        }
        Ok(acc.with_precision(prec))
    }
}

impl From<LinComb<Composition>> for Expr {
    fn from(x: LinComb<Composition>) -> Self {
        Expr {
            terms: x
                .iter()
                .map(|(c, q)| (q.clone(), if c.is_empty() { vec![] } else { vec![c.clone()] }))
                .collect(),
        }
    }
}

struct Lexer<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip_ws(&mut self) {
        while self.s[self.pos..].starts_with(char::is_whitespace) {
            self.pos += self.s[self.pos..].chars().next().map_or(1, char::len_utf8);
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.s[self.pos..].chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at position {} in {:?}", self.pos, self.s))
    }

    fn integer(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.s[self.pos..].starts_with(|c: char| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        Ok(self.s[start..self.pos].parse().expect("digits only"))
    }

    fn composition(&mut self) -> Result<Composition> {
        self.skip_ws();
        let start = self.pos;
        let Some(len) = self.s[self.pos..].find(')') else {
            return Err(self.err("unclosed composition"));
        };
        self.pos += len + 1;
        self.s[start..self.pos].parse()
    }

    /// factor := composition | integer ['/' integer]
    fn factor(&mut self, coeff: &mut BigRational, comps: &mut Vec<Composition>) -> Result<()> {
        match self.peek() {
            Some('(') => comps.push(self.composition()?),
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?;
                let den = if self.eat('/') { self.integer()? } else { BigInt::one() };
                if den.is_zero() {
                    return Err(self.err("zero denominator"));
                }
                *coeff *= BigRational::new(num, den);
            }
            _ => return Err(self.err("expected a composition or a number")),
        }
        Ok(())
    }
}

impl FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut lx = Lexer { s, pos: 0 };
        let mut terms = Vec::new();
        let mut first = true;
        loop {
            let negative = if lx.eat('-') {
                true
            } else {
                if !lx.eat('+') && !first {
                    break;
                }
                false
            };
            first = false;
            let mut coeff = BigRational::one();
            let mut comps = Vec::new();
            lx.factor(&mut coeff, &mut comps)?;
            while lx.eat('*') {
                lx.factor(&mut coeff, &mut comps)?;
            }
            if negative {
                coeff = -coeff;
            }
            terms.push((coeff, comps));
        }
        if lx.peek().is_some() {
            return Err(lx.err("unexpected character"));
        }
        Ok(Expr { terms })
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (q, factors)) in self.terms.iter().enumerate() {
            let sign = if q.is_negative() { "-" } else { "+" };
            if i == 0 {
                if q.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let a = q.abs();
            let mut parts: Vec<String> = Vec::new();
            if !a.is_one() || factors.is_empty() {
                parts.push(a.to_string());
            }
            parts.extend(factors.iter().map(|c| c.to_string()));
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}
