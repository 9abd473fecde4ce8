//! Integer relation detection by lattice reduction.
//!
//! For reals `x₁..x_n` known to `P` digits the lattice spanned by the rows
//! `(e_i, ⌊10^{P−g}·x_i⌉)` contains, for every integer relation `c`, a short
//! vector `(c, ≈0)`. After LLL reduction the short rows are candidate
//! relations; a candidate is accepted only if it cancels to
//! `10^{−(P−g−s)}` on the full-precision inputs and its height is within the
//! bound.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::numerics::BigReal;

/// Tunables of [`detect_with`].
#[derive(Clone, Debug, PartialEq)]
pub struct DetectParams {
    /// Digits `P` the inputs are trusted to.
    pub digits: u32,
    /// Largest admissible `max |c_i|`.
    pub height_bound: u64,
    /// Digits withheld from the lattice scale.
    pub guard: u32,
    /// Extra digits of slack in the acceptance threshold.
    pub slack: u32,
    /// Lovász constant as `num/den`.
    pub delta: (u32, u32),
}

impl DetectParams {
    pub fn new(digits: u32, height_bound: u64) -> Self {
        DetectParams { digits, height_bound, guard: 10, slack: 5, delta: (99, 100) }
    }

    /// Smallest `P` the heuristic guard accepts for `n` inputs.
    pub fn required_digits(n: usize, height_bound: u64) -> u32 {
        (20.0 + (height_bound.max(1) as f64).log10() * n as f64).ceil() as u32
    }

    /// Largest height the guard allows at `digits` for `n` inputs.
    pub fn max_height(n: usize, digits: u32) -> u64 {
        let e = (digits as f64 - 20.0) / n as f64;
        if e <= 0.0 {
            return 1;
        }
        // Step down past rounding so the guard holds exactly.
        let mut h = 10f64.powf(e).floor().min(u64::MAX as f64) as u64;
        while h > 1 && Self::required_digits(n, h) > digits {
            h -= 1;
        }
        h.max(1)
    }
}

/// Outcome of a detection run.
#[derive(Clone, Debug, Serialize)]
pub struct DetectionResult {
    /// Relation with gcd 1 and positive leading nonzero entry, if found.
    #[serde(serialize_with = "ser_coeffs")]
    pub coefficients: Option<Vec<BigInt>>,
    /// `|Σ c_i x_i|` for the reported relation, else for the best candidate.
    #[serde(serialize_with = "ser_real")]
    pub residual: BigReal,
    /// Digits of cancellation, `−log10(residual / max |c_i x_i|)`.
    pub confidence: f64,
    /// When nothing is found: every relation has height above this.
    pub height_lower_bound: Option<f64>,
}

fn ser_coeffs<S: Serializer>(v: &Option<Vec<BigInt>>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        None => s.serialize_none(),
        Some(cs) => s.collect_seq(cs.iter().map(|c| c.to_string())),
    }
}

fn ser_real<S: Serializer>(v: &BigReal, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(&format!("{:e}", v.to_f64()))
}

/// Integer relation search with the default guard, slack and δ.
pub fn detect(xs: &[BigReal], digits: u32, height_bound: u64) -> Result<DetectionResult> {
    detect_with(xs, &DetectParams::new(digits, height_bound))
}

pub fn detect_with(xs: &[BigReal], params: &DetectParams) -> Result<DetectionResult> {
    let n = xs.len();
    if !(2..=50).contains(&n) {
        return Err(Error::Domain(format!("detection needs 2 to 50 numbers, got {n}")));
    }
    if let Some(x) = xs.iter().find(|x| x.precision().digits < params.digits) {
        return Err(Error::Domain(format!(
            "input known to {} digits, {} requested",
            x.precision().digits,
            params.digits
        )));
    }
    let required = DetectParams::required_digits(n, params.height_bound);
    if params.digits < required {
        return Err(Error::PrecisionTooLow { digits: params.digits, required });
    }
    let scale_digits = params.digits.saturating_sub(params.guard);
    let scale = BigInt::from(10u32).pow(scale_digits);
    let mut basis: Vec<Vec<BigInt>> = xs
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let mut row = vec![BigInt::zero(); n + 1];
            row[i] = BigInt::from(1);
            row[n] = round_scaled(x, &scale);
            row
        })
        .collect();
    lll(&mut basis, params.delta);

    let threshold_exp = -(params.digits as i32 - params.guard as i32 - params.slack as i32);
    let height = BigInt::from(params.height_bound);
    let mut best: Option<(BigInt, Vec<BigInt>, BigReal)> = None;
    let mut fallback: Option<BigReal> = None;
    for row in &basis {
        let c = &row[..n];
        if c.iter().all(|v| v.is_zero()) {
            continue;
        }
        let residual = combine(xs, c).abs();
        if fallback.as_ref().map_or(true, |f| residual < *f) {
            fallback = Some(residual.clone());
        }
        let max = c.iter().map(|v| v.abs()).max().expect("nonempty");
        if max > height || !residual.abs_below_pow10(threshold_exp) {
            continue;
        }
        let norm: BigInt = c.iter().map(|v| v * v).sum();
        if best.as_ref().map_or(true, |(b, _, _)| norm < *b) {
            best = Some((norm, c.to_vec(), residual));
        }
    }
    match best {
        Some((_, c, residual)) => {
            let c = normalize(c);
            let confidence = confidence(xs, &c, &residual);
            Ok(DetectionResult { coefficients: Some(c), residual, confidence, height_lower_bound: None })
        }
        None => {
            let b1: f64 = basis[0].iter().map(|v| v.to_f64().unwrap_or(f64::INFINITY).powi(2)).sum::<f64>().sqrt();
            let (num, den) = params.delta;
            let alpha = 1.0 / (num as f64 / den as f64 - 0.25);
            let nf = n as f64;
            let bound = b1 / (alpha.powf((nf - 1.0) / 2.0) * (nf + nf * nf / 4.0).sqrt());
            Ok(DetectionResult {
                coefficients: None,
                residual: fallback.expect("basis has nonzero rows"),
                confidence: 0.0,
                height_lower_bound: Some(bound),
            })
        }
    }
}

/// `⌊x·scale⌉`.
fn round_scaled(x: &BigReal, scale: &BigInt) -> BigInt {
    let q = x.to_rational() * num_rational::BigRational::from_integer(scale.clone());
    q.round().to_integer()
}

fn combine(xs: &[BigReal], c: &[BigInt]) -> BigReal {
    let mut acc = BigReal::zero(xs[0].precision());
    for (x, ci) in xs.iter().zip(c) {
        acc = &acc + &x.mul_int(ci.clone());
    }
    acc
}

fn confidence(xs: &[BigReal], c: &[BigInt], residual: &BigReal) -> f64 {
    let size = xs
        .iter()
        .zip(c)
        .map(|(x, ci)| x.mul_int(ci.clone()).log10_abs())
        .fold(f64::NEG_INFINITY, f64::max);
    if residual.is_zero() {
        f64::INFINITY
    } else {
        size - residual.log10_abs()
    }
}

fn normalize(mut c: Vec<BigInt>) -> Vec<BigInt> {
    let g = c.iter().fold(BigInt::zero(), |g, v| g.gcd(v));
    if !g.is_zero() {
        for v in c.iter_mut() {
            *v = &*v / &g;
        }
    }
    if c.iter().find(|v| !v.is_zero()).is_some_and(|v| v.is_negative()) {
        for v in c.iter_mut() {
            *v = -&*v;
        }
    }
    c
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `⌊a/b⌉` for `b > 0`.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (a * &two + b).div_floor(&(b * &two))
}

/// In-place LLL reduction of linearly independent integer rows, exact
/// integer Gram–Schmidt (Cohen, Algorithm 2.6.7).
pub fn lll(b: &mut [Vec<BigInt>], delta: (u32, u32)) {
    let n = b.len();
    if n < 2 {
        return;
    }
    let (dn, dd) = (BigInt::from(delta.0), BigInt::from(delta.1));
    // d[i] is the Gram determinant of the first i rows; lambda is 0-based.
    let mut d = vec![BigInt::zero(); n + 1];
    let mut lam = vec![vec![BigInt::zero(); n]; n];
    d[0] = BigInt::from(1);
    d[1] = dot(&b[0], &b[0]);
    let mut k = 1usize;
    let mut kmax = 0usize;

    let red = |b: &mut [Vec<BigInt>], lam: &mut [Vec<BigInt>], d: &[BigInt], k: usize, l: usize| {
        if &lam[k][l].abs() * 2 > d[l + 1] {
            let q = round_div(&lam[k][l], &d[l + 1]);
            let bl = b[l].clone();
            for (x, y) in b[k].iter_mut().zip(&bl) {
                *x -= &q * y;
            }
            lam[k][l] -= &q * &d[l + 1];
            for i in 0..l {
                let t = &q * &lam[l][i];
                lam[k][i] -= t;
            }
        }
    };

    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    u = (&d[i + 1] * &u - &lam[k][i] * &lam[j][i]) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    d[k + 1] = u;
                }
            }
        }
        loop {
            red(b, &mut lam, &d, k, k - 1);
            let lhs = &dd * &d[k + 1] * &d[k - 1];
            let rhs = &dn * &d[k] * &d[k] - &dd * &lam[k][k - 1] * &lam[k][k - 1];
            if lhs < rhs {
                // Swap rows k−1 and k.
                b.swap(k, k - 1);
                for j in 0..k - 1 {
                    let t = std::mem::take(&mut lam[k][j]);
                    lam[k][j] = std::mem::replace(&mut lam[k - 1][j], t);
                }
                let l = lam[k][k - 1].clone();
                let bb = (&d[k - 1] * &d[k + 1] + &l * &l) / &d[k];
                for i in k + 1..=kmax {
                    let t = lam[i][k].clone();
                    lam[i][k] = (&d[k + 1] * &lam[i][k - 1] - &l * &t) / &d[k];
                    lam[i][k - 1] = (&bb * &t + &l * &lam[i][k]) / &d[k + 1];
                }
                d[k] = bb;
                if k > 1 {
                    k -= 1;
                }
            } else {
                for l in (0..k - 1).rev() {
                    red(b, &mut lam, &d, k, l);
                }
                k += 1;
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{mzv_eval, Precision};
    use crate::words::Composition;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn z(s: &str, p: Precision) -> BigReal {
        mzv_eval(&s.parse::<Composition>().unwrap(), p).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|x| BigInt::from(*x)).collect()
    }

    /// Gram–Schmidt in f64 for checking the reduced basis.
    fn gso(b: &[Vec<BigInt>]) -> (Vec<Vec<f64>>, Vec<f64>) {
        let bf: Vec<Vec<f64>> = b.iter().map(|r| r.iter().map(|x| x.to_f64().unwrap()).collect()).collect();
        let n = bf.len();
        let mut star: Vec<Vec<f64>> = Vec::new();
        let mut mu = vec![vec![0.0; n]; n];
        let mut norms = Vec::new();
        for i in 0..n {
            let mut v = bf[i].clone();
            for j in 0..i {
                mu[i][j] = bf[i].iter().zip(&star[j]).map(|(a, b)| a * b).sum::<f64>() / norms[j];
                for (x, y) in v.iter_mut().zip(&star[j]) {
                    *x -= mu[i][j] * y;
                }
            }
            norms.push(v.iter().map(|x| x * x).sum());
            star.push(v);
        }
        (mu, norms)
    }

    #[test]
    fn lll_reduces_small_basis() {
        let mut b = vec![ints(&[1, 1, 1]), ints(&[-1, 0, 2]), ints(&[3, 5, 6])];
        lll(&mut b, (99, 100));
        let (mu, norms) = gso(&b);
        for i in 1..3 {
            for j in 0..i {
                assert!(mu[i][j].abs() <= 0.5 + 1e-9);
            }
            assert!(norms[i] >= (0.99 - mu[i][i - 1].powi(2)) * norms[i - 1] - 1e-9);
        }
        // Determinant (volume) is preserved: |det| = 3 for this basis.
        let vol: f64 = norms.iter().product::<f64>().sqrt();
        assert!((vol - 3.0).abs() < 1e-9);
    }

    #[test]
    fn euler_relation() {
        let p = Precision::new(40);
        let r = detect(&[z("(1,2)", p), z("(3)", p)], 40, 1000).unwrap();
        assert_eq!(r.coefficients, Some(ints(&[1, -1])));
        assert!(r.confidence > 25.0);
    }

    #[test]
    fn guard_rejects_low_precision() {
        let p = Precision::new(40);
        let err = detect(&[z("(2)", p), z("(3)", p)], 25, 1000).unwrap_err();
        assert!(matches!(err, Error::PrecisionTooLow { .. }));
        assert!(detect(&[z("(2)", p)], 40, 10).is_err());
        assert_eq!(DetectParams::max_height(2, 40), 10_000_000_000);
        assert!(DetectParams::required_digits(4, DetectParams::max_height(4, 60)) <= 60);
    }

    #[test]
    fn no_relation_among_random_reals() {
        let p = Precision::new(40);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let xs: Vec<BigReal> = (0..4)
                .map(|_| {
                    let digits: String = (0..45).map(|_| char::from(b'0' + rng.random_range(0..10u8))).collect();
                    BigReal::parse_decimal(&format!("0.{digits}"), p).unwrap()
                })
                .collect();
            let r = detect(&xs, 40, 1000).unwrap();
            assert!(r.coefficients.is_none());
            assert!(r.height_lower_bound.unwrap() > 1.0);
        }
    }

    #[test]
    fn scale_invariance() {
        let p = Precision::new(50);
        let xs = [z("(2,2)", p), z("(4)", p)];
        let base = detect(&xs, 50, 1000).unwrap().coefficients;
        assert_eq!(base, Some(ints(&[4, -3])));
        let alpha = BigReal::from_ratio(-7, 3, p);
        let scaled: Vec<BigReal> = xs.iter().map(|x| x * &alpha).collect();
        assert_eq!(detect(&scaled, 45, 1000).unwrap().coefficients, base);
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize(ints(&[0, -4, 6])), ints(&[0, 2, -3]));
        assert_eq!(normalize(ints(&[3, 9])), ints(&[1, 3]));
    }
}
