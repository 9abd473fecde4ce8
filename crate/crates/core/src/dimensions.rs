//! Dimension counts: the `d_n` recurrence, Hoffman `{2,3}`-words and
//! monomials in the f-alphabet, all as exact integers.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

/// `d_0 = 1, d_1 = 0, d_2 = 1, d_n = d_{n−2} + d_{n−3}`.
pub fn d(n: usize) -> BigUint {
    dimension_table(n).pop().expect("table is nonempty")
}

/// `d_0..=d_n`.
pub fn dimension_table(n: usize) -> Vec<BigUint> {
    let mut t: Vec<BigUint> = vec![BigUint::one(), BigUint::zero(), BigUint::one()];
    while t.len() <= n {
        let k = t.len();
        let next = &t[k - 2] + &t[k - 3];
        t.push(next);
    }
    t.truncate(n + 1);
    t
}

/// Number of compositions of `n` with all parts in `{2,3}`.
pub fn count_hoffman_words(n: usize) -> BigUint {
    let mut ways = vec![BigUint::zero(); n + 1];
    ways[0] = BigUint::one();
    for k in 1..=n {
        let mut w = BigUint::zero();
        for part in [2, 3] {
            if k >= part {
                w += &ways[k - part];
            }
        }
        ways[k] = w;
    }
    ways.swap_remove(n)
}

/// Truncated formal power series with exact coefficients.
fn series_mul(a: &[BigUint], b: &[BigUint], order: usize) -> Vec<BigUint> {
    let mut out = vec![BigUint::zero(); order + 1];
    for (i, x) in a.iter().enumerate().take(order + 1) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(order + 1 - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// `1/(1 − g)` for a series `g` without constant term.
fn geometric(g: &[BigUint], order: usize) -> Vec<BigUint> {
    // h = 1 + g·h, solved coefficient by coefficient.
    let mut h = vec![BigUint::zero(); order + 1];
    h[0] = BigUint::one();
    for n in 1..=order {
        let mut acc = BigUint::zero();
        for k in 1..=n {
            if let Some(gk) = g.get(k) {
                if !gk.is_zero() {
                    acc += gk * &h[n - k];
                }
            }
        }
        h[n] = acc;
    }
    h
}

/// Number of monomials `f₂^k·f_{i₁}⋯f_{i_r}` (odd `i_j ≥ 3`) of degree `n`:
/// the coefficient of `tⁿ` in `1/(1−t²) · 1/(1−(t³+t⁵+⋯))`.
pub fn count_f_monomials(n: usize) -> BigUint {
    let mut even = vec![BigUint::zero(); n + 1];
    if n >= 2 {
        even[2] = BigUint::one();
    }
    let mut odd = vec![BigUint::zero(); n + 1];
    for k in (3..=n).step_by(2) {
        odd[k] = BigUint::one();
    }
    let product = series_mul(&geometric(&even, n), &geometric(&odd, n), n);
    product[n].clone()
}

/// One row of the `dims --table` output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub n: usize,
    #[serde(serialize_with = "as_string")]
    pub d: BigUint,
    /// `2^(n−2)` convergent compositions (1 for `n = 0`, 0 for `n = 1`).
    #[serde(serialize_with = "as_string")]
    pub compositions: BigUint,
    #[serde(serialize_with = "as_string")]
    pub hoffman_words: BigUint,
    #[serde(serialize_with = "as_string")]
    pub f_monomials: BigUint,
}

fn as_string<S: serde::Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub fn convergent_count(n: usize) -> BigUint {
    match n {
        0 => BigUint::one(),
        1 => BigUint::zero(),
        _ => BigUint::one() << (n - 2),
    }
}

pub fn count_table(max: usize) -> Vec<CountRow> {
    let ds = dimension_table(max);
    ds.into_iter()
        .enumerate()
        .map(|(n, d)| CountRow {
            n,
            d,
            compositions: convergent_count(n),
            hoffman_words: count_hoffman_words(n),
            f_monomials: count_f_monomials(n),
        })
        .collect()
}
