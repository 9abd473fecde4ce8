use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed};

use super::bernoulli::bernoulli;
use super::bigreal::{BigReal, Precision};
use crate::error::{Error, Result};

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

/// `ζ(2n) = |B_{2n}|·(2π)^{2n} / (2·(2n)!)`.
pub fn zeta_even_closed_form(n: u32, prec: Precision) -> Result<BigReal> {
    if n == 0 {
        return Err(Error::Domain("ζ(2n) needs n ≥ 1".into()));
    }
    let inner = prec.widened(3);
    let b = bernoulli(2 * n as usize).abs();
    let two_pi = BigReal::pi(inner).mul_int(2);
    let q = b / BigRational::from_integer(factorial(2 * n) * 2);
    Ok(two_pi.powu(2 * n).mul_rational(&q).with_precision(prec))
}

/// Coefficient `B_{2j}/(2j)! · s(s+1)⋯(s+2j−2)` of `n^{−s−2j+1}`.
fn correction_coefficient(s: u32, j: u32) -> BigRational {
    let rising = (0..2 * j - 1).fold(BigInt::one(), |a, i| a * BigInt::from(s + i));
    bernoulli(2 * j as usize) * BigRational::new(rising, factorial(2 * j))
}

fn partial_sum(s: u32, n: u64, prec: Precision) -> BigReal {
    (1..=n).fold(BigReal::zero(prec), |acc, k| {
        &acc + &BigReal::one(prec).div_int(BigInt::from(k).pow(s))
    })
}

/// Euler–Maclaurin with an explicit cut: `Σ_{k≤n} k^{−s} + n^{1−s}/(s−1)
/// − n^{−s}/2 + Σ_{j=1}^{terms} B_{2j}/(2j)!·(s)_{2j−1}·n^{−s−2j+1}`.
pub fn euler_maclaurin(s: u32, n: u64, terms: u32, prec: Precision) -> Result<BigReal> {
    if s < 2 || n == 0 {
        return Err(Error::Domain(format!("Euler–Maclaurin needs s ≥ 2 and n ≥ 1, got s={s}, n={n}")));
    }
    let inner = prec.widened(3);
    let mut acc = partial_sum(s, n, inner);
    let nn = BigInt::from(n);
    let inv_ns = BigReal::one(inner).div_int((&nn).pow(s));
    acc = &acc + &inv_ns.mul_int(nn.clone()).div_int(s - 1);
    acc = &acc - &inv_ns.div_int(2);
    let mut power = inv_ns.div_int(nn.clone()); // n^{−s−1}
    for j in 1..=terms {
        acc = &acc + &power.mul_rational(&correction_coefficient(s, j));
        power = power.div_int(&nn * &nn);
    }
    Ok(acc.with_precision(prec))
}

/// ζ(s) for integer `s ≥ 2` by Euler–Maclaurin, with the cut `n` and the
/// number of correction terms chosen so the truncation error stays below
/// the working precision.
pub fn zeta_euler_maclaurin(s: u32, prec: Precision) -> Result<BigReal> {
    if s < 2 {
        return Err(Error::Domain(format!("ζ(s) needs s ≥ 2, got {s}")));
    }
    let inner = prec.widened(3);
    let n = (2 * inner.working_digits()).max(10) as u64;
    let target = -(inner.working_digits() as i32) - 2;
    let nn = BigInt::from(n);
    let mut acc = partial_sum(s, n, inner);
    let inv_ns = BigReal::one(inner).div_int((&nn).pow(s));
    acc = &acc + &inv_ns.mul_int(nn.clone()).div_int(s - 1);
    acc = &acc - &inv_ns.div_int(2);
    let mut power = inv_ns.div_int(nn.clone());
    let mut j = 1;
    loop {
        let term = power.mul_rational(&correction_coefficient(s, j));
        acc = &acc + &term;
        if term.abs_below_pow10(target) {
            break;
        }
        // With n ≥ 2·digits the terms shrink geometrically long before the
        // asymptotic series turns around; this is only a safeguard.
        if j > 4 * n as u32 {
            return Err(Error::Internal("Euler–Maclaurin tail did not converge".into()));
        }
        power = power.div_int(&nn * &nn);
        j += 1;
    }
    Ok(acc.with_precision(prec))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeta_two() {
        let p = Precision::new(30);
        let z = zeta_even_closed_form(1, p).unwrap();
        assert_eq!(z.to_decimal(25), "1.6449340668482264364724152");
        let em = zeta_euler_maclaurin(2, p).unwrap();
        assert!((&em - &z).abs_below_pow10(-29));
    }

    #[test]
    fn printed_truncation() {
        let p = Precision::new(40);
        let v = euler_maclaurin(2, 100, 4, p).unwrap();
        assert_eq!(v.to_decimal(25), "1.6449340668482264364724076");
        let exact = zeta_even_closed_form(1, p).unwrap();
        let err = (&v - &exact).abs();
        // Stated bound (10 n^11)^{-1} with n = 100.
        assert!(err < BigReal::from_rational(&BigRational::new(1.into(), BigInt::from(10) * BigInt::from(100).pow(11u32)), p));
        assert!(err.abs_below_pow10(-23));
    }

    #[test]
    fn pi_fourth() {
        let p = Precision::new(40);
        let z4 = zeta_even_closed_form(2, p).unwrap();
        let pi = BigReal::pi(p);
        let direct = pi.powu(4).div_int(90);
        assert!((&z4 - &direct).abs_below_pow10(-40));
    }

    #[test]
    fn closed_form_matches_summation() {
        let p = Precision::new(40);
        for n in 1..=6 {
            let a = zeta_even_closed_form(n, p).unwrap();
            let b = zeta_euler_maclaurin(2 * n, p).unwrap();
            assert!((&a - &b).abs_below_pow10(-35), "ζ({})", 2 * n);
        }
        assert!(zeta_euler_maclaurin(1, p).is_err());
        assert!(zeta_even_closed_form(0, p).is_err());
    }
}
