//! Shuffle product on words, quasi-shuffle (stuffle) product on compositions,
//! and the two regularization maps that send the divergent generators to 0.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::lincomb::LinComb;
use crate::words::{Alphabet, BinaryWord, Composition, Letter, Word};

type Counts<T> = HashMap<Vec<T>, u128>;

fn append_all<T: Clone + Eq + std::hash::Hash>(into: &mut Counts<T>, from: &Counts<T>, letter: &T) {
    for (word, &n) in from {
        let mut longer = Vec::with_capacity(word.len() + 1);
        longer.extend_from_slice(word);
        longer.push(letter.clone());
        let slot = into.entry(longer).or_insert(0);
        *slot = slot.checked_add(n).expect("product coefficient overflows u128");
    }
}

fn counts_to_lincomb<K: Ord + Clone, T>(counts: Counts<T>, wrap: impl Fn(Vec<T>) -> K) -> LinComb<K> {
    counts
        .into_iter()
        .map(|(w, n)| (wrap(w), BigRational::from_integer(BigInt::from(n))))
        .collect()
}

/// Shuffle product of two words.
///
/// Uses `(u·a) ⧢ (v·b) = ((u·a) ⧢ v)·b + (u ⧢ (v·b))·a` tabulated over all
/// prefix pairs; every coefficient is a positive integer and they sum to
/// `C(|u|+|v|, |u|)`.
pub fn shuffle<A: Alphabet>(u: &Word<A>, v: &Word<A>) -> LinComb<Word<A>> {
    let (a, b) = (u.letters(), v.letters());
    // table[i][j] = a[..i] ⧢ b[..j]
    let mut prev_row: Vec<Counts<A>> = (0..=b.len())
        .map(|j| Counts::from([(b[..j].to_vec(), 1)]))
        .collect();
    for i in 1..=a.len() {
        let mut row: Vec<Counts<A>> = Vec::with_capacity(b.len() + 1);
        row.push(Counts::from([(a[..i].to_vec(), 1)]));
        for j in 1..=b.len() {
            let mut cell = Counts::new();
            append_all(&mut cell, &row[j - 1], &b[j - 1]);
            append_all(&mut cell, &prev_row[j], &a[i - 1]);
            row.push(cell);
        }
        prev_row = row;
    }
    let last = prev_row.pop().expect("table has at least one column");
    counts_to_lincomb(last, Word::new)
}

/// Bilinear extension of [`shuffle`].
pub fn shuffle_lc<A: Alphabet>(x: &LinComb<Word<A>>, y: &LinComb<Word<A>>) -> LinComb<Word<A>> {
    x.bilinear(y, shuffle)
}

/// Quasi-shuffle product of two compositions:
/// `(α·m) * (β·n) = ((α·m) * β)·n + (α * (β·n))·m + (α * β)·(m+n)`.
pub fn stuffle(x: &Composition, y: &Composition) -> LinComb<Composition> {
    let (a, b) = (x.parts(), y.parts());
    let mut prev_row: Vec<Counts<u32>> = (0..=b.len())
        .map(|j| Counts::from([(b[..j].to_vec(), 1)]))
        .collect();
    for i in 1..=a.len() {
        let mut row: Vec<Counts<u32>> = Vec::with_capacity(b.len() + 1);
        row.push(Counts::from([(a[..i].to_vec(), 1)]));
        for j in 1..=b.len() {
            let mut cell = Counts::new();
            append_all(&mut cell, &row[j - 1], &b[j - 1]);
            append_all(&mut cell, &prev_row[j], &a[i - 1]);
            append_all(&mut cell, &prev_row[j - 1], &(a[i - 1] + b[j - 1]));
            row.push(cell);
        }
        prev_row = row;
    }
    let last = prev_row.pop().expect("table has at least one column");
    counts_to_lincomb(last, |parts| Composition::new(parts).expect("parts stay positive"))
}

/// Bilinear extension of [`stuffle`].
pub fn stuffle_lc(x: &LinComb<Composition>, y: &LinComb<Composition>) -> LinComb<Composition> {
    x.bilinear(y, stuffle)
}

fn trailing_run<T: PartialEq>(xs: &[T], t: &T) -> usize {
    xs.iter().rev().take_while(|x| *x == t).count()
}

fn leading_run<T: PartialEq>(xs: &[T], t: &T) -> usize {
    xs.iter().take_while(|x| *x == t).count()
}

/// Shuffle regularization: the unique shuffle-algebra morphism that is the
/// identity on convergent words and sends `x₀` and `x₁` to zero.
///
/// A trailing run `u·x₁^b` is peeled with
/// `(u·x₁^{b−1}) ⧢ x₁ = b·u·x₁^b + (terms with shorter trailing run)`,
/// and a leading run `x₀^a·u` symmetrically with `x₀ ⧢ (x₀^{a−1}·u)`.
pub fn shuffle_regularize(w: &BinaryWord) -> LinComb<BinaryWord> {
    let mut memo = HashMap::new();
    shuffle_reg_memo(w, &mut memo)
}

fn shuffle_reg_memo(
    w: &BinaryWord,
    memo: &mut HashMap<BinaryWord, LinComb<BinaryWord>>,
) -> LinComb<BinaryWord> {
    if w.is_convergent() {
        return LinComb::basis(w.clone());
    }
    if let Some(hit) = memo.get(w) {
        return hit.clone();
    }
    let letters = w.letters();
    let b = trailing_run(letters, &Letter::X1);
    let (peeled, run) = if b > 0 {
        let shorter = Word::new(letters[..letters.len() - 1].to_vec());
        (shuffle(&shorter, &Word::new(vec![Letter::X1])), b)
    } else {
        let a = leading_run(letters, &Letter::X0);
        debug_assert!(a > 0, "non-convergent word must have a leading x0 or trailing x1");
        let shorter = Word::new(letters[1..].to_vec());
        (shuffle(&Word::new(vec![Letter::X0]), &shorter), a)
    };
    // peeled = run·w + rest, and reg(peeled) = 0.
    let mut out = LinComb::zero();
    let factor = -BigRational::new(BigInt::from(1), BigInt::from(run as u64));
    for (word, q) in &peeled {
        if word == w {
            debug_assert_eq!(*q, BigRational::from_integer(BigInt::from(run as u64)));
            continue;
        }
        out.add_scaled(&shuffle_reg_memo(word, memo), &(q * &factor));
    }
    memo.insert(w.clone(), out.clone());
    out
}

/// Linear extension of [`shuffle_regularize`].
pub fn shuffle_regularize_lc(x: &LinComb<BinaryWord>) -> LinComb<BinaryWord> {
    let mut memo = HashMap::new();
    x.linear(|w| shuffle_reg_memo(w, &mut memo))
}

/// Stuffle regularization: the unique quasi-shuffle morphism that is the
/// identity on convergent compositions and sends `(1)` to zero.
///
/// A trailing run of ones `u·1^k` is peeled with
/// `(u·1^{k−1}) * (1) = k·u·1^k + (terms with shorter trailing run)`.
pub fn stuffle_regularize(c: &Composition) -> LinComb<Composition> {
    let mut memo = HashMap::new();
    stuffle_reg_memo(c, &mut memo)
}

fn stuffle_reg_memo(
    c: &Composition,
    memo: &mut HashMap<Composition, LinComb<Composition>>,
) -> LinComb<Composition> {
    if c.is_convergent() {
        return LinComb::basis(c.clone());
    }
    if let Some(hit) = memo.get(c) {
        return hit.clone();
    }
    let parts = c.parts();
    let k = trailing_run(parts, &1);
    let shorter = Composition::new(parts[..parts.len() - 1].to_vec()).expect("parts stay positive");
    let one = Composition::new(vec![1]).expect("valid");
    let peeled = stuffle(&shorter, &one);
    let factor = -BigRational::new(BigInt::from(1), BigInt::from(k as u64));
    let mut out = LinComb::zero();
    for (comp, q) in &peeled {
        if comp == c {
            continue;
        }
        out.add_scaled(&stuffle_reg_memo(comp, memo), &(q * &factor));
    }
    memo.insert(c.clone(), out.clone());
    out
}

/// Linear extension of [`stuffle_regularize`].
pub fn stuffle_regularize_lc(x: &LinComb<Composition>) -> LinComb<Composition> {
    let mut memo = HashMap::new();
    x.linear(|c| stuffle_reg_memo(c, &mut memo))
}

/// Pulls a combination of binary words back to compositions; words that start
/// with `x₀` have no preimage and are reported as `Err`.
pub fn binary_to_compositions(x: &LinComb<BinaryWord>) -> crate::Result<LinComb<Composition>> {
    let mut out = LinComb::zero();
    for (w, q) in x {
        out.add_term(Composition::from_binary(w)?, q.clone());
    }
    Ok(out)
}

/// Sum of all coefficients (the "mass" of a product).
pub fn coefficient_mass<K: Ord + Clone>(x: &LinComb<K>) -> BigRational {
    x.iter().fold(BigRational::zero(), |acc, (_, q)| acc + q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lincomb::int;
    use crate::words::{FLetter, GenericWord};
    use proptest::prelude::*;

    fn w(s: &str) -> BinaryWord {
        s.parse().unwrap()
    }

    fn c(s: &str) -> Composition {
        s.parse().unwrap()
    }

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    /// Sum over order-preserving injections of both words into a common
    /// output, covering every output slot. `merge` allows a slot to hold one
    /// letter of each word, combined by addition.
    fn brute_force<T: Clone + Ord>(
        a: &[T],
        b: &[T],
        merge: Option<fn(&T, &T) -> T>,
    ) -> std::collections::BTreeMap<Vec<T>, u64> {
        let mut out = std::collections::BTreeMap::new();
        let (r, s) = (a.len(), b.len());
        let min_len = if merge.is_some() { r.max(s) } else { r + s };
        for len in min_len..=r + s {
            for pos_a in subsets(len, r) {
                for pos_b in subsets(len, s) {
                    let mut covered = vec![0u8; len];
                    pos_a.iter().for_each(|&p| covered[p] += 1);
                    pos_b.iter().for_each(|&p| covered[p] += 1);
                    if covered.iter().any(|&x| x == 0) {
                        continue;
                    }
                    if merge.is_none() && covered.iter().any(|&x| x > 1) {
                        continue;
                    }
                    let mut word: Vec<Option<T>> = vec![None; len];
                    for (i, &p) in pos_a.iter().enumerate() {
                        word[p] = Some(a[i].clone());
                    }
                    for (i, &p) in pos_b.iter().enumerate() {
                        word[p] = Some(match &word[p] {
                            Some(x) => merge.unwrap()(x, &b[i]),
                            None => b[i].clone(),
                        });
                    }
                    *out.entry(word.into_iter().map(Option::unwrap).collect()).or_insert(0) += 1;
                }
            }
        }
        out
    }

    fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = subsets(n - 1, k);
        for mut s in subsets(n - 1, k - 1) {
            s.push(n - 1);
            out.push(s);
        }
        out
    }

    #[test]
    fn shuffle_x1x0_squared() {
        let p = shuffle(&w("10"), &w("10"));
        let expected: LinComb<BinaryWord> = [(w("1010"), int(2)), (w("1100"), int(4))].into_iter().collect();
        assert_eq!(p, expected);
    }

    #[test]
    fn shuffle_f_alphabet() {
        let f3: GenericWord = "f3".parse().unwrap();
        let f5f7: GenericWord = "f5f7".parse().unwrap();
        let p = shuffle(&f3, &f5f7);
        let expected: LinComb<GenericWord> = ["f3f5f7", "f5f3f7", "f5f7f3"]
            .iter()
            .map(|s| (s.parse().unwrap(), int(1)))
            .collect();
        assert_eq!(p, expected);
        let p = shuffle(&Word::<FLetter>::empty(), &f5f7);
        assert_eq!(p, LinComb::basis(f5f7));
    }

    #[test]
    fn stuffle_examples() {
        for m in 1..6 {
            for n in 1..6 {
                let p = stuffle(&Composition::new(vec![m]).unwrap(), &Composition::new(vec![n]).unwrap());
                let mut expected = LinComb::zero();
                expected.add_term(Composition::new(vec![m, n]).unwrap(), int(1));
                expected.add_term(Composition::new(vec![n, m]).unwrap(), int(1));
                expected.add_term(Composition::new(vec![m + n]).unwrap(), int(1));
                assert_eq!(p, expected);
            }
        }
        let sq = stuffle(&c("(2)"), &c("(2)"));
        assert_eq!(sq, [(c("(2,2)"), int(2)), (c("(4)"), int(1))].into_iter().collect());
        assert_eq!(stuffle(&c("()"), &c("(5)")), LinComb::basis(c("(5)")));
    }

    #[test]
    fn regularization_examples() {
        assert!(stuffle_regularize(&c("(1)")).is_zero());
        let expected: LinComb<Composition> = [(c("(1,2)"), int(-1)), (c("(3)"), int(-1))].into_iter().collect();
        assert_eq!(stuffle_regularize(&c("(2,1)")), expected);
        assert_eq!(stuffle_regularize(&c("(1,3)")), LinComb::basis(c("(1,3)")));
        assert!(shuffle_regularize(&w("1")).is_zero());
        assert!(shuffle_regularize(&w("0")).is_zero());
        assert_eq!(shuffle_regularize(&w("110")), LinComb::basis(w("110")));
        // x1 ⧢ x1x0 = 2·x1x1x0 + x1x0x1 and reg(x1) = 0.
        assert_eq!(shuffle_regularize(&w("101")), LinComb::term(w("110"), int(-2)));
    }

    /// Oracle for the shuffle regularization: treat reg(w) of every
    /// non-convergent word of length <= 5 as an unknown, impose
    /// reg(x ⧢ u) = 0 for x in {x0, x1} and |u| <= 4, and solve the linear
    /// system by Gauss-Jordan elimination. The solution must be unique and
    /// agree with the peeling algorithm.
    #[test]
    fn shuffle_regularization_matches_linear_system() {
        let mut words = Vec::new();
        for len in 0..=5usize {
            for bits in 0..(1u32 << len) {
                let letters = (0..len)
                    .map(|i| if bits >> (len - 1 - i) & 1 == 1 { Letter::X1 } else { Letter::X0 })
                    .collect();
                words.push(Word::new(letters));
            }
        }
        let mut rows: Vec<LinComb<BinaryWord>> = Vec::new();
        for u in words.iter().filter(|u| u.len() <= 4) {
            for x in [Letter::X0, Letter::X1] {
                rows.push(shuffle(&Word::new(vec![x]), u));
            }
        }
        // Each row: Σ (unknown terms) + Σ (convergent terms) = 0.
        let unknowns: Vec<BinaryWord> = words.iter().filter(|u| !u.is_convergent()).cloned().collect();
        let mut pivots: Vec<(BinaryWord, LinComb<BinaryWord>)> = Vec::new();
        for mut row in rows {
            for (var, prow) in &pivots {
                let q = row.coeff(var);
                if !q.is_zero() {
                    row.add_scaled(prow, &-q);
                }
            }
            let Some(var) = row.keys().find(|k| !k.is_convergent()).cloned() else {
                assert!(row.is_zero(), "inconsistent system: {row:?}");
                continue;
            };
            let inv = BigRational::from_integer(1.into()) / row.coeff(&var);
            let row = row.scale(&inv);
            for (_, prow) in pivots.iter_mut() {
                let q = prow.coeff(&var);
                if !q.is_zero() {
                    prow.add_scaled(&row, &-q);
                }
            }
            pivots.push((var, row));
        }
        assert_eq!(pivots.len(), unknowns.len(), "system must determine every unknown");
        for (var, row) in &pivots {
            // var + Σ c_j w_j = 0 with every w_j convergent
            let value = row.filter(|k| k != var).scale(&int(-1));
            assert!(value.keys().all(|k| k.is_convergent()));
            assert_eq!(&shuffle_regularize(var), &value, "word {var:?}");
        }
    }

    fn arb_word(max: usize) -> impl Strategy<Value = BinaryWord> {
        proptest::collection::vec(prop_oneof![Just(Letter::X0), Just(Letter::X1)], 0..=max).prop_map(Word::new)
    }

    fn arb_comp(max_weight: u32) -> impl Strategy<Value = Composition> {
        proptest::collection::vec(1u32..=4, 0..=4).prop_filter_map("weight cap", move |parts| {
            let c = Composition::new(parts).unwrap();
            (c.weight() <= max_weight).then_some(c)
        })
    }

    proptest! {
        #[test]
        fn shuffle_matches_permutation_sum(u in arb_word(4), v in arb_word(4)) {
            let p = shuffle(&u, &v);
            let oracle = brute_force(u.letters(), v.letters(), None);
            let oracle: LinComb<BinaryWord> = oracle.into_iter().map(|(k, n)| (Word::new(k), int(n as i64))).collect();
            prop_assert_eq!(&p, &oracle);
            prop_assert_eq!(coefficient_mass(&p), int(binom((u.len() + v.len()) as u64, u.len() as u64) as i64));
            prop_assert!(p.keys().all(|x| x.len() == u.len() + v.len()));
        }

        #[test]
        fn stuffle_matches_merge_enumeration(a in arb_comp(8), b in arb_comp(8)) {
            prop_assume!(a.depth() <= 3 && b.depth() <= 3);
            let p = stuffle(&a, &b);
            let oracle = brute_force(a.parts(), b.parts(), Some(|x: &u32, y: &u32| x + y));
            let oracle: LinComb<Composition> = oracle
                .into_iter()
                .map(|(k, n)| (Composition::new(k).unwrap(), int(n as i64)))
                .collect();
            prop_assert_eq!(&p, &oracle);
            prop_assert!(p.keys().all(|x| x.weight() == a.weight() + b.weight()));
        }

        #[test]
        fn products_commute_and_associate(a in arb_comp(4), b in arb_comp(4), c in arb_comp(4),
                                         u in arb_word(3), v in arb_word(3), x in arb_word(2)) {
            prop_assert_eq!(stuffle(&a, &b), stuffle(&b, &a));
            let ab_c = stuffle_lc(&stuffle(&a, &b), &LinComb::basis(c.clone()));
            let a_bc = stuffle_lc(&LinComb::basis(a.clone()), &stuffle(&b, &c));
            prop_assert_eq!(ab_c, a_bc);
            prop_assert_eq!(shuffle(&u, &v), shuffle(&v, &u));
            let uv_x = shuffle_lc(&shuffle(&u, &v), &LinComb::basis(x.clone()));
            let u_vx = shuffle_lc(&LinComb::basis(u.clone()), &shuffle(&v, &x));
            prop_assert_eq!(uv_x, u_vx);
        }

        #[test]
        fn regularizations_are_morphisms(u in arb_word(3), v in arb_word(3), a in arb_comp(3), b in arb_comp(3)) {
            let lhs = shuffle_regularize_lc(&shuffle(&u, &v));
            let rhs = shuffle_lc(&shuffle_regularize(&u), &shuffle_regularize(&v));
            prop_assert_eq!(lhs, rhs);
            let lhs = stuffle_regularize_lc(&stuffle(&a, &b));
            let rhs = stuffle_lc(&stuffle_regularize(&a), &stuffle_regularize(&b));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn regularization_lands_in_convergent_span(u in arb_word(6), a in arb_comp(6)) {
            let r = shuffle_regularize(&u);
            prop_assert!(r.keys().all(|x| x.is_convergent() && x.len() == u.len()));
            prop_assert_eq!(shuffle_regularize_lc(&r), r);
            let r = stuffle_regularize(&a);
            prop_assert!(r.keys().all(|x| x.is_convergent() && x.weight() == a.weight()));
            prop_assert_eq!(stuffle_regularize_lc(&r), r);
        }
    }
}
