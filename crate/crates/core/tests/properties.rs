use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use mzv_core::algebra::{coefficient_mass, shuffle, shuffle_lc, stuffle, stuffle_lc};
use mzv_core::double_shuffle::HoffmanReducer;
use mzv_core::numerics::{mzv_eval, mzv_eval_lc};
use mzv_core::words::enumerate_compositions;
use mzv_core::{BinaryWord, Composition, LinComb, Precision};

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * (n - i) / (i + 1))
}

fn binary_word() -> impl Strategy<Value = BinaryWord> {
    proptest::collection::vec(prop::bool::ANY, 0..6)
        .prop_map(|bits| bits.iter().map(|&b| if b { '1' } else { '0' }).collect::<String>().parse().unwrap())
}

fn composition(max_parts: usize) -> impl Strategy<Value = Composition> {
    proptest::collection::vec(1u32..4, 0..max_parts).prop_map(|p| Composition::new(p).unwrap())
}

fn convergent(max_parts: usize) -> impl Strategy<Value = Composition> {
    (proptest::collection::vec(1u32..4, 0..max_parts), 2u32..4).prop_map(|(mut p, last)| {
        p.push(last);
        Composition::new(p).unwrap()
    })
}

proptest! {
    #[test]
    fn shuffle_is_commutative_and_associative(u in binary_word(), v in binary_word(), w in binary_word()) {
        prop_assert_eq!(shuffle(&u, &v), shuffle(&v, &u));
        let left = shuffle_lc(&shuffle(&u, &v), &LinComb::basis(w.clone()));
        let right = shuffle_lc(&LinComb::basis(u.clone()), &shuffle(&v, &w));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn shuffle_mass_is_binomial(u in binary_word(), v in binary_word()) {
        let n = (u.len() + v.len()) as u64;
        let expected = BigRational::from_integer(binomial(n, u.len() as u64));
        prop_assert_eq!(coefficient_mass(&shuffle(&u, &v)), expected);
    }

    #[test]
    fn stuffle_is_commutative_and_associative(a in composition(4), b in composition(4), c in composition(3)) {
        prop_assert_eq!(stuffle(&a, &b), stuffle(&b, &a));
        let left = stuffle_lc(&stuffle(&a, &b), &LinComb::basis(c.clone()));
        let right = stuffle_lc(&LinComb::basis(a.clone()), &stuffle(&b, &c));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn stuffle_preserves_weight(a in composition(4), b in composition(4)) {
        let w = a.weight() + b.weight();
        for (k, _) in stuffle(&a, &b).iter() {
            prop_assert_eq!(k.weight(), w);
            prop_assert!(k.depth() <= a.depth() + b.depth());
            prop_assert!(k.depth() >= a.depth().max(b.depth()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn products_agree_numerically(a in convergent(2), b in convergent(2)) {
        let p = Precision::new(30);
        let product = &mzv_eval(&a, p).unwrap() * &mzv_eval(&b, p).unwrap();
        let st = mzv_eval_lc(&stuffle(&a, &b), p).unwrap();
        prop_assert!((&product - &st).abs_below_pow10(-25));
        let sh = shuffle(&a.to_binary(), &b.to_binary())
            .map_keys(|w| Composition::from_binary(w).unwrap());
        let sh = mzv_eval_lc(&sh, p).unwrap();
        prop_assert!((&product - &sh).abs_below_pow10(-25));
    }
}

#[test]
fn hoffman_reductions_agree_numerically() {
    let p = Precision::new(30);
    for w in 2..=7 {
        let r = HoffmanReducer::new(w).unwrap();
        for c in enumerate_compositions(w, true) {
            let lc = r.decompose(&c).unwrap();
            assert!(lc.keys().all(|k| k.is_hoffman()), "{c} = {lc}");
            let gap = &mzv_eval(&c, p).unwrap() - &mzv_eval_lc(&lc, p).unwrap();
            assert!(gap.abs_below_pow10(-25), "{c} = {lc}: {:e}", gap.to_f64());
        }
    }
}

#[test]
fn convergent_words_by_weight() {
    // 2^{n−2} convergent compositions of weight n.
    for w in 2..=12u32 {
        assert_eq!(enumerate_compositions(w, true).len(), 1usize << (w - 2));
        assert_eq!(enumerate_compositions(w, false).len(), 1usize << (w - 1));
    }
    let total: usize = (2..=12u32).map(|w| enumerate_compositions(w, true).len()).sum();
    assert_eq!(total, (1 << 11) - 1);
}
