use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use super::bigreal::{BigReal, Precision};
use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::words::{BinaryWord, Composition};

/// Argument of the fixed-point series: exactly ½ (a shift) or a general
/// value in (0,1) scaled by `2^bits`.
#[derive(Clone)]
enum Arg {
    Half,
    Fixed(BigInt),
}

/// Number of terms so that `z^N (1 + ln 2N)^{r} / (1 − z) < 2^{−bits}`.
fn terms_needed(depth: usize, log2_inv_z: f64, log2_inv_one_minus_z: f64, bits: u32) -> u64 {
    let mut n = (bits as f64 / log2_inv_z).ceil().max(1.0);
    loop {
        let slack = depth as f64 * (1.0 + (2.0 * n).ln()).log2() + log2_inv_one_minus_z + 2.0;
        let need = ((bits as f64 + slack) / log2_inv_z).ceil();
        if need <= n {
            return n as u64;
        }
        n = need;
    }
}

/// `Σ_{k₁<⋯<k_r ≤ N} z^{k_r} / (k₁^{n₁}⋯k_r^{n_r})` in fixed point with
/// `bits` fractional bits, by nested prefix sums.
fn polylog_fixed(parts: &[u32], z: &Arg, n_terms: u64, bits: u32) -> BigInt {
    let one = BigInt::one() << bits;
    if parts.is_empty() {
        return one;
    }
    let pow_k = |k: u64, e: u32| BigInt::from(k).pow(e);
    let mut a: Vec<BigInt> = (1..=n_terms).map(|k| one.div_floor(&pow_k(k, parts[0]))).collect();
    for &e in &parts[1..] {
        let mut prefix = BigInt::zero();
        for (i, slot) in a.iter_mut().enumerate() {
            let k = i as u64 + 1;
            let next = &prefix + &*slot;
            *slot = prefix.div_floor(&pow_k(k, e));
            prefix = next;
        }
    }
    let mut total = BigInt::zero();
    match z {
        Arg::Half => {
            for (i, v) in a.iter().enumerate() {
                total += v >> (i + 1);
            }
        }
        Arg::Fixed(zf) => {
            let mut zk = zf.clone();
            for v in &a {
                total += (v * &zk) >> bits;
                zk = (&zk * zf) >> bits;
            }
        }
    }
    total
}

fn extra_bits(depth: usize, n_terms: u64) -> u32 {
    // Each floor loses at most one unit per level and term.
    ((depth as f64 + 1.0) * (n_terms as f64 + 1.0)).log2().ceil() as u32 + 4
}

/// `Li_{n₁,…,n_r}(z) = Σ_{k₁<⋯<k_r} z^{k_r}/(k₁^{n₁}⋯k_r^{n_r})` for
/// `0 < z ≤ 1`; `z = 1` is evaluated as the MZV.
pub fn multiple_polylog(c: &Composition, z: &BigReal, prec: Precision) -> Result<BigReal> {
    let one = BigReal::one(prec);
    if z.is_negative() || z.is_zero() || *z > one {
        return Err(Error::Domain(format!("multiple polylog argument must lie in (0,1], got {z}")));
    }
    if *z == one {
        return mzv_eval(c, prec);
    }
    let zf = z.to_f64();
    let base_bits = prec.bits();
    let log2_inv_z = -zf.log2();
    let log2_inv_omz = -(1.0 - zf).log2();
    let n0 = terms_needed(c.depth(), log2_inv_z, log2_inv_omz, base_bits);
    let bits = base_bits + extra_bits(c.depth(), n0);
    let n_terms = terms_needed(c.depth(), log2_inv_z, log2_inv_omz, bits);
    let zb = z.fixed(bits);
    let arg = if zb == BigInt::one() << (bits - 1) && z.to_rational() == num_rational::BigRational::new(1.into(), 2.into()) {
        Arg::Half
    } else {
        Arg::Fixed(zb)
    };
    Ok(BigReal::from_fixed(polylog_fixed(c.parts(), &arg, n_terms, bits), bits, prec))
}

/// Convergent MZV by splitting the iterated integral at ½:
/// `I(w; 0,1) = Σ_k I(w₁⋯w_k; 0,½) · I(dual(w_{k+1}⋯w_n); 0,½)`,
/// where `dual` reverses the word and swaps the letters. Every piece starts
/// with `x₁` and is a multiple polylog at ½.
pub fn mzv_eval(c: &Composition, prec: Precision) -> Result<BigReal> {
    if !c.is_convergent() {
        return Err(Error::Divergent(c.clone()));
    }
    if c.is_empty() {
        return Ok(BigReal::one(prec));
    }
    let w = c.to_binary();
    let letters = w.letters();
    let len = letters.len();
    let base_bits = prec.bits() + (len as f64 + 1.0).log2().ceil() as u32 + 2;
    let n0 = terms_needed(len, 1.0, 1.0, base_bits);
    let bits = base_bits + extra_bits(len, n0);
    let n_terms = terms_needed(len, 1.0, 1.0, bits);
    let mut cache: HashMap<Composition, BigInt> = HashMap::new();
    let mut piece = |word: BinaryWord| -> Result<BigInt> {
        let comp = Composition::from_binary(&word)?;
        if let Some(v) = cache.get(&comp) {
            return Ok(v.clone());
        }
        let v = polylog_fixed(comp.parts(), &Arg::Half, n_terms, bits);
        cache.insert(comp, v.clone());
        Ok(v)
    };
    let mut total = BigInt::zero();
    for k in 0..=len {
        let left = piece(BinaryWord::new(letters[..k].to_vec()))?;
        let right = piece(BinaryWord::new(letters[k..].to_vec()).dual())?;
        total += (left * right) >> bits;
    }
    Ok(BigReal::from_fixed(total, bits, prec))
}

/// `Σ q·ζ(c)` over a combination of convergent compositions.
pub fn mzv_eval_lc(x: &LinComb<Composition>, prec: Precision) -> Result<BigReal> {
    let inner = prec.widened(3);
    let mut acc = BigReal::zero(inner);
    for (c, q) in x {
        acc = &acc + &mzv_eval(c, inner)?.mul_rational(q);
    }
    Ok(acc.with_precision(prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::zeta::{zeta_euler_maclaurin, zeta_even_closed_form};
    use num_rational::BigRational;

    fn c(s: &str) -> Composition {
        s.parse().unwrap()
    }

    /// ln 2 = 2·atanh(1/3) = 2·Σ 3^{−(2k+1)}/(2k+1), summed in rationals.
    fn ln2(prec: Precision) -> BigReal {
        let mut acc = BigRational::zero();
        let mut k = 0u32;
        loop {
            let term = BigRational::new(BigInt::from(2), BigInt::from(2 * k + 1) * BigInt::from(3).pow(2 * k + 1));
            acc += &term;
            if BigReal::from_rational(&term, prec).abs_below_pow10(-(prec.working_digits() as i32) - 5) {
                break;
            }
            k += 1;
        }
        BigReal::from_rational(&acc, prec)
    }

    /// Plain nested summation of the defining series, for small cases.
    fn brute_polylog(parts: &[u32], z: f64, n: u64) -> f64 {
        fn rec(parts: &[u32], lo: u64, n: u64, z: f64) -> f64 {
            let Some((&e, rest)) = parts.split_first() else { return 1.0 };
            (lo..=n)
                .map(|k| {
                    let w = if rest.is_empty() { z.powi(k as i32) } else { 1.0 };
                    w / (k as f64).powi(e as i32) * rec(rest, k + 1, n, z)
                })
                .sum()
        }
        rec(parts, 1, n, z)
    }

    #[test]
    fn log_two() {
        let p = Precision::new(40);
        let half = BigReal::from_ratio(1, 2, p);
        let v = multiple_polylog(&c("(1)"), &half, p).unwrap();
        assert!((&v - &ln2(p)).abs_below_pow10(-40));
    }

    #[test]
    fn dilog_half() {
        let p = Precision::new(40);
        let half = BigReal::from_ratio(1, 2, p);
        let v = multiple_polylog(&c("(2)"), &half, p).unwrap();
        let l = ln2(p);
        let oracle = &BigReal::pi(p).powu(2).div_int(12) - &(&l * &l).div_int(2);
        assert!((&v - &oracle).abs_below_pow10(-40));
        // The oracle identity itself against brute-force summation.
        assert!((oracle.to_f64() - brute_polylog(&[2], 0.5, 200)).abs() < 1e-14);
    }

    #[test]
    fn general_argument_matches_brute_force() {
        let p = Precision::new(20);
        for (parts, z) in [(vec![1u32, 2], 0.3), (vec![2, 1, 3], 0.7), (vec![3], 0.25)] {
            let zr = BigReal::parse_decimal(&z.to_string(), p).unwrap();
            let v = multiple_polylog(&Composition::new(parts.clone()).unwrap(), &zr, p).unwrap();
            let b = brute_polylog(&parts, z, 400);
            assert!((v.to_f64() - b).abs() < 1e-12, "{parts:?} at {z}: {} vs {b}", v.to_f64());
        }
    }

    #[test]
    fn argument_domain() {
        let p = Precision::new(20);
        assert!(multiple_polylog(&c("(2)"), &BigReal::zero(p), p).is_err());
        assert!(multiple_polylog(&c("(2)"), &BigReal::from_ratio(3, 2, p), p).is_err());
        assert!(multiple_polylog(&c("(2,1)"), &BigReal::one(p), p).is_err());
        let at_one = multiple_polylog(&c("(2)"), &BigReal::one(p), p).unwrap();
        assert!((&at_one - &zeta_even_closed_form(1, p).unwrap()).abs_below_pow10(-20));
    }

    #[test]
    fn single_zetas() {
        let p = Precision::new(40);
        for k in 1..=6 {
            let a = mzv_eval(&Composition::new(vec![2 * k]).unwrap(), p).unwrap();
            let b = zeta_even_closed_form(k, p).unwrap();
            assert!((&a - &b).abs_below_pow10(-39), "ζ({})", 2 * k);
        }
        let z3 = mzv_eval(&c("(3)"), p).unwrap();
        assert!((&z3 - &zeta_euler_maclaurin(3, p).unwrap()).abs_below_pow10(-39));
    }

    #[test]
    fn euler_relations() {
        let p = Precision::new(30);
        let z = |s: &str| mzv_eval(&c(s), p).unwrap();
        let lhs = &(&z("(2,3)") + &z("(3,2)")) + &z("(5)");
        assert!((&lhs - &(&z("(2)") * &z("(3)"))).abs_below_pow10(-25));
        assert!((&z("(1,2)") - &z("(3)")).abs_below_pow10(-25));
        assert!(mzv_eval(&c("(2,1)"), p).is_err());
        assert_eq!(mzv_eval(&c("()"), p).unwrap(), BigReal::one(p));
    }

    #[test]
    fn precision_is_stable() {
        let v40 = mzv_eval(&c("(2,3)"), Precision::new(40)).unwrap();
        let v80 = mzv_eval(&c("(2,3)"), Precision::new(80)).unwrap();
        assert!((&v40 - &v80).abs_below_pow10(-40));
    }
}
