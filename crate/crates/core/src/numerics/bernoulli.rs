use std::sync::RwLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

static CACHE: RwLock<Vec<BigRational>> = RwLock::new(Vec::new());

/// Exact Bernoulli number `B_n` with `B_1 = −1/2`, from
/// `Σ_{k=0}^{n} C(n+1, k) B_k = 0` for `n ≥ 1`.
pub fn bernoulli(n: usize) -> BigRational {
    if let Some(b) = CACHE.read().expect("bernoulli cache poisoned").get(n) {
        return b.clone();
    }
    let mut table = CACHE.read().expect("bernoulli cache poisoned").clone();
    if table.is_empty() {
        table.push(BigRational::one());
    }
    while table.len() <= n {
        let m = table.len();
        if m > 1 && m % 2 == 1 {
            table.push(BigRational::zero());
            continue;
        }
        // B_m = −1/(m+1) Σ_{k<m} C(m+1, k) B_k
        let mut binom = BigInt::one();
        let mut acc = BigRational::zero();
        for (k, b) in table.iter().enumerate() {
            if !b.is_zero() {
                acc += b * BigRational::from_integer(binom.clone());
            }
            binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
        }
        table.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
    }
    let b = table[n].clone();
    let mut slot = CACHE.write().expect("bernoulli cache poisoned");
    if slot.len() < table.len() {
        *slot = table;
    }
    b
}
