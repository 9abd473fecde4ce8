use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::numerics::Precision;
use crate::words::Composition;

/// Largest weight accepted by [`match_period`].
pub const MATCH_WEIGHT_CAP: u32 = 16;

/// Largest denominator ever tried for a coefficient.
const MAX_DENOMINATOR: i128 = 1000;

/// A constant expected among graph periods.
#[derive(Clone, Debug)]
pub struct KnownPeriod {
    pub expression: Expr,
    pub weight: u32,
}

/// Tabulated periods of small primitive graphs, in the convention
/// `ζ(n₁,…,n_r) = Σ_{k₁<…<k_r}`.
pub fn known_periods() -> Vec<KnownPeriod> {
    ["6*(3)", "20*(5)", "36*(3)*(3)", "27/5*(5,3) + 45/4*(5)*(3) - 261/20*(8)"]
        .iter()
        .map(|s| {
            let expression: Expr = s.parse().expect("table entries parse");
            let weight = expression.weight().expect("table entries are homogeneous");
            KnownPeriod { expression, weight }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PeriodCandidate {
    /// `coefficient·basis` as an expression string.
    pub expression: String,
    pub coefficient: String,
    pub basis: String,
    pub value: f64,
    /// `|estimate − value| / error`.
    pub deviation: f64,
    pub known: bool,
}

/// Products `ζ(2)^a·ζ(o₁)⋯ζ(o_k)` of weight `w` with odd `oᵢ ≥ 3`
/// non-decreasing.
fn zeta_monomials(w: u32) -> Vec<Vec<u32>> {
    fn rec(rest: u32, min_odd: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest % 2 == 0 {
            let mut m = acc.clone();
            m.extend(std::iter::repeat_n(2, (rest / 2) as usize));
            out.push(m);
        }
        let mut o = min_odd;
        while o <= rest {
            acc.push(o);
            rec(rest - o, o, acc, out);
            acc.pop();
            o += 2;
        }
    }
    let mut out = Vec::new();
    rec(w, 3, &mut Vec::new(), &mut out);
    out
}

/// Rational with the smallest denominator in `[lo, hi]`, if that denominator
/// is at most `max_den`.
pub(crate) fn simplest_rational(lo: f64, hi: f64, max_den: i128) -> Option<(i128, i128)> {
    if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return None;
    }
    if hi < 0.0 {
        return simplest_rational(-hi, -lo, max_den).map(|(p, q)| (-p, q));
    }
    if lo <= 0.0 {
        return Some((0, 1));
    }
    let (p, q) = simplest_positive(lo, hi, 64)?;
    (q <= max_den).then_some((p, q))
}

/// `0 < lo ≤ hi`: an integer in the window if any, otherwise
/// `⌊lo⌋ + 1/r` with `r` the simplest rational in the reciprocal window.
fn simplest_positive(lo: f64, hi: f64, depth: u32) -> Option<(i128, i128)> {
    if depth == 0 || !hi.is_finite() {
        return None;
    }
    let fl = lo.floor();
    if fl == lo {
        return Some((fl.to_i128()?, 1));
    }
    if fl + 1.0 <= hi {
        return Some(((fl + 1.0).to_i128()?, 1));
    }
    let (p, q) = simplest_positive(1.0 / (hi - fl), 1.0 / (lo - fl), depth - 1)?;
    Some((fl.to_i128()?.checked_mul(p)?.checked_add(q)?, p))
}

/// Candidate closed forms for a period estimate of the given weight.
///
/// Each basis element `b` (products of single zetas, and tabulated periods of
/// that weight) is paired with the simplest rational `q` such that `q·b` lies
/// within three errors of the estimate. The denominator cap shrinks as the
/// window widens, so that a match is unlikely by chance. Candidates are
/// ranked by `|estimate − q·b|/error`.
pub fn match_period(estimate: f64, error: f64, weight: u32) -> Result<Vec<PeriodCandidate>> {
    if weight < 2 || weight > MATCH_WEIGHT_CAP {
        return Err(Error::Domain(format!("weight must lie in 2..={MATCH_WEIGHT_CAP}")));
    }
    if !estimate.is_finite() || !(error > 0.0) || !error.is_finite() {
        return Err(Error::Domain("estimate must be finite and the error positive".into()));
    }
    let prec = Precision::new(20);
    let mut bases: Vec<(Expr, bool)> = zeta_monomials(weight)
        .into_iter()
        .map(|parts| {
            let comps = parts.into_iter().map(|n| Composition::new(vec![n]).expect("positive part")).collect();
            (Expr { terms: vec![(BigRational::one(), comps)] }, false)
        })
        .collect();
    bases.extend(known_periods().into_iter().filter(|k| k.weight == weight).map(|k| (k.expression, true)));

    let mut out = Vec::new();
    for (basis, known) in bases {
        let b = basis.eval(prec)?.to_f64();
        let (lo, hi) = ((estimate - 3.0 * error) / b, (estimate + 3.0 * error) / b);
        let window = (hi - lo).abs();
        let cap = ((1.0 / window.sqrt()).floor() as i128).clamp(1, MAX_DENOMINATOR);
        let Some((p, q)) = simplest_rational(lo.min(hi), lo.max(hi), cap) else {
            continue;
        };
        if p == 0 {
            continue;
        }
        let coefficient = BigRational::new(BigInt::from(p), BigInt::from(q));
        let value = coefficient.to_f64().unwrap_or(f64::NAN) * b;
        let scaled = Expr {
            terms: basis.terms.iter().map(|(c, f)| (c * &coefficient, f.clone())).collect(),
        };
        let basis_text = basis.to_string();
        let expression = if known || coefficient.is_one() {
            if coefficient.is_one() {
                basis_text.clone()
            } else {
                format!("{}*({basis_text})", coefficient)
            }
        } else {
            scaled.to_string()
        };
        out.push(PeriodCandidate {
            expression,
            coefficient: if coefficient.is_negative() { format!("({coefficient})") } else { coefficient.to_string() },
            basis: basis_text,
            value,
            deviation: (estimate - value).abs() / error,
            known,
        });
    }
    // A tabulated period that is a multiple of a basis element shows up twice.
    let mut seen = std::collections::HashMap::new();
    let mut unique: Vec<PeriodCandidate> = Vec::new();
    for c in out {
        match seen.get(&c.expression) {
            Some(&i) => {
                let kept: &mut PeriodCandidate = &mut unique[i];
                kept.known |= c.known;
            }
            None => {
                seen.insert(c.expression.clone(), unique.len());
                unique.push(c);
            }
        }
    }
    let mut out = unique;
    out.sort_by(|x, y| x.deviation.total_cmp(&y.deviation).then(x.coefficient.len().cmp(&y.coefficient.len())));
    Ok(out)
}
