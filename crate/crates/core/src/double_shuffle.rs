//! Double shuffle relations, relation matrices and their exact ranks.
//!
//! A relation is the difference between the shuffle product (computed on
//! binary words and pulled back to compositions) and the stuffle product of
//! the same two MZVs. The `m = (1)` family, whose divergent terms `(n,1)`
//! cancel, is added as "Hoffman" relations.

use std::collections::HashMap;

use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{binary_to_compositions, shuffle, stuffle};
use crate::error::{Error, Result};
use crate::lincomb::LinComb;
use crate::linalg::{
    integer_row, modular_rank, multimodular_kernel, Echelon, KernelBasis, ModularEchelon, SparseRow, RANK_PRIMES,
};
use crate::words::{enumerate_compositions, Composition, Letter, Word};

/// Default weight cap for [`decompose_in_hoffman_basis`].
pub const DEFAULT_WEIGHT_CAP: u32 = 12;

/// Where a relation came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// `ζ(m)·ζ(n)` computed both ways.
    Pair(Composition, Composition),
    /// `ζ(1)·ζ(n)` computed both ways; the divergent `(n,1)` terms cancel.
    Hoffman(Composition),
}

/// A linear relation `Σ c_p ζ(p) = 0` among convergent MZVs of one weight.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Relation {
    pub weight: u32,
    pub coefficients: LinComb<Composition>,
    pub provenance: Provenance,
}

impl Relation {
    pub fn is_trivial(&self) -> bool {
        self.coefficients.is_zero()
    }
}

fn shuffle_minus_stuffle(m: &Composition, n: &Composition) -> Result<LinComb<Composition>> {
    let sh = binary_to_compositions(&shuffle(&m.to_binary(), &n.to_binary()))?;
    Ok(sh - stuffle(m, n))
}

/// Shuffle minus stuffle for two convergent, nonempty compositions.
pub fn double_shuffle_relation(m: &Composition, n: &Composition) -> Result<Relation> {
    for c in [m, n] {
        if c.is_empty() {
            return Err(Error::Domain("double shuffle needs nonempty compositions".into()));
        }
        if !c.is_convergent() {
            return Err(Error::Divergent(c.clone()));
        }
    }
    Ok(Relation {
        weight: m.weight() + n.weight(),
        coefficients: shuffle_minus_stuffle(m, n)?,
        provenance: Provenance::Pair(m.clone(), n.clone()),
    })
}

/// `x₁ ⧢ X_n − (1) * n`; the divergent terms must cancel.
pub fn hoffman_relation(n: &Composition) -> Result<Relation> {
    if n.is_empty() {
        return Err(Error::Domain("hoffman relation needs a nonempty composition".into()));
    }
    if !n.is_convergent() {
        return Err(Error::Divergent(n.clone()));
    }
    let x1 = Word::new(vec![Letter::X1]);
    let sh = binary_to_compositions(&shuffle(&x1, &n.to_binary()))?;
    let one = Composition::new(vec![1])?;
    let diff = sh - stuffle(&one, n);
    if let Some(bad) = diff.keys().find(|c| !c.is_convergent()) {
        return Err(Error::Internal(format!(
            "divergent term {bad} survives in the relation for {n}"
        )));
    }
    Ok(Relation {
        weight: n.weight() + 1,
        coefficients: diff,
        provenance: Provenance::Hoffman(n.clone()),
    })
}

/// All relations of a weight, in a fixed order, with trivial rows dropped.
#[derive(Clone, Debug)]
pub struct RelationMatrix {
    pub weight: u32,
    /// Convergent compositions of the weight in canonical order.
    pub basis: Vec<Composition>,
    pub rows: Vec<Relation>,
}

/// Unordered pairs `{m, n}` of convergent nonempty compositions with
/// `weight(m) + weight(n) = weight`, listed with `m ≤ n` canonically.
fn pairs(weight: u32) -> Vec<(Composition, Composition)> {
    let mut out = Vec::new();
    for wm in 2..=weight.saturating_sub(2) {
        let wn = weight - wm;
        if wm > wn {
            break;
        }
        let ms = enumerate_compositions(wm, true);
        let ns = enumerate_compositions(wn, true);
        for m in &ms {
            for n in &ns {
                if m <= n {
                    out.push((m.clone(), n.clone()));
                }
            }
        }
    }
    out
}

pub fn build_relation_matrix(weight: u32, include_hoffman: bool) -> Result<RelationMatrix> {
    if weight < 2 {
        return Err(Error::Domain(format!("relation matrices need weight ≥ 2, got {weight}")));
    }
    let mut rows: Vec<Relation> = pairs(weight)
        .par_iter()
        .map(|(m, n)| double_shuffle_relation(m, n))
        .collect::<Result<_>>()?;
    if include_hoffman {
        let hoffman: Vec<Relation> = enumerate_compositions(weight - 1, true)
            .par_iter()
            .filter(|n| !n.is_empty())
            .map(hoffman_relation)
            .collect::<Result<_>>()?;
        rows.extend(hoffman);
    }
    rows.retain(|r| !r.is_trivial());
    Ok(RelationMatrix {
        weight,
        basis: enumerate_compositions(weight, true),
        rows,
    })
}

impl RelationMatrix {
    /// Dense rational rows over [`basis`](Self::basis).
    pub fn dense_rows(&self) -> Vec<Vec<BigRational>> {
        let index = self.basis_index();
        self.rows
            .iter()
            .map(|r| {
                let mut v = vec![BigRational::from_integer(0.into()); self.basis.len()];
                for (c, q) in &r.coefficients {
                    v[index[c]] = q.clone();
                }
                v
            })
            .collect()
    }

    fn basis_index(&self) -> HashMap<&Composition, usize> {
        self.basis.iter().enumerate().map(|(i, c)| (c, i)).collect()
    }

    /// Elimination order: non-Hoffman compositions first, then Hoffman
    /// words, each group in canonical order. Returns the basis permuted into
    /// that order.
    pub fn elimination_order(&self) -> Vec<Composition> {
        let (mut hoff, mut rest): (Vec<_>, Vec<_>) = self.basis.iter().cloned().partition(|c| c.is_hoffman());
        rest.append(&mut hoff);
        rest
    }

    /// Primitive integer rows with columns numbered by `order`.
    pub fn integer_rows(&self, order: &[Composition]) -> Vec<SparseRow> {
        let index: HashMap<&Composition, usize> = order.iter().enumerate().map(|(i, c)| (c, i)).collect();
        self.rows
            .iter()
            .map(|r| integer_row(r.coefficients.iter().map(|(c, q)| (index[c], q.clone()))))
            .collect()
    }

    /// Fully reduced echelon form in [`elimination_order`](Self::elimination_order).
    pub fn echelon(&self) -> (Vec<Composition>, Echelon) {
        let order = self.elimination_order();
        let rows = self.integer_rows(&order);
        // Rows independent modulo a prime are independent over Q; inserting
        // them first keeps intermediate rows short.
        let mut e = Echelon::new(order.len());
        let mut later = Vec::new();
        let mut probe = ModularEchelon::new(order.len(), RANK_PRIMES[0]);
        for r in &rows {
            if probe.insert(r) {
                e.insert(r);
            } else {
                later.push(r);
            }
        }
        for r in later {
            e.insert(r);
        }
        (order, e)
    }

    /// Exact kernel basis in [`elimination_order`](Self::elimination_order):
    /// multimodular with exact verification, falling back to
    /// [`echelon`](Self::echelon) if the primes run out.
    pub fn kernel(&self) -> (Vec<Composition>, KernelBasis) {
        let order = self.elimination_order();
        let rows = self.integer_rows(&order);
        match multimodular_kernel(&rows, order.len()) {
            Some(k) => (order, k),
            None => {
                let (order, e) = self.echelon();
                (order, e.kernel())
            }
        }
    }

    /// Exact rank over Q.
    pub fn rank(&self) -> usize {
        self.kernel().1.rank
    }

    /// Rank modulo a prime; a lower bound for [`rank`](Self::rank).
    pub fn modular_rank(&self, p: u64) -> usize {
        let order = self.elimination_order();
        modular_rank(&self.integer_rows(&order), order.len(), p)
    }
}

/// Rank and bound for one weight.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionReport {
    pub weight: u32,
    pub compositions: usize,
    pub relations: usize,
    pub rank: usize,
    pub bound: usize,
}

/// `2^(weight−2) − rank` of the full relation matrix (with the `m = (1)`
/// family), by exact elimination.
pub fn dimension_upper_bound(weight: u32) -> Result<usize> {
    Ok(dimension_report(weight)?.bound)
}

pub fn dimension_report(weight: u32) -> Result<DimensionReport> {
    let m = build_relation_matrix(weight, true)?;
    let rank = m.rank();
    Ok(DimensionReport {
        weight,
        compositions: m.basis.len(),
        relations: m.rows.len(),
        rank,
        bound: m.basis.len() - rank,
    })
}

/// Reduced relation space of one weight, reusable across many queries.
pub struct HoffmanReducer {
    weight: u32,
    order: Vec<Composition>,
    column: HashMap<Composition, usize>,
    kernel: KernelBasis,
}

impl HoffmanReducer {
    pub fn new(weight: u32) -> Result<Self> {
        let m = build_relation_matrix(weight, true)?;
        let (order, kernel) = m.kernel();
        let column = order.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect();
        Ok(HoffmanReducer { weight, order, column, kernel })
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    /// Compositions whose coordinate is not pinned by the relations.
    pub fn free(&self) -> Vec<Composition> {
        self.kernel.free.iter().map(|&i| self.order[i].clone()).collect()
    }

    pub fn decompose(&self, c: &Composition) -> Result<LinComb<Composition>> {
        if c.weight() != self.weight {
            return Err(Error::Domain(format!("{c} does not have weight {}", self.weight)));
        }
        if !c.is_convergent() {
            return Err(Error::Divergent(c.clone()));
        }
        let col = self.column[c];
        if self.kernel.is_free(col) {
            return if c.is_hoffman() {
                Ok(LinComb::basis(c.clone()))
            } else {
                Err(Error::InsufficientRelations { target: c.clone(), free: vec![c.clone()] })
            };
        }
        let out: LinComb<Composition> = self.kernel.express(col).into_iter().map(|(j, q)| (self.order[j].clone(), q)).collect();
        let stuck: Vec<Composition> = out.keys().filter(|k| !k.is_hoffman()).cloned().collect();
        if stuck.is_empty() {
            Ok(out)
        } else {
            Err(Error::InsufficientRelations { target: c.clone(), free: stuck })
        }
    }
}

/// Rewrites a convergent MZV as a combination of Hoffman `{2,3}`-words of
/// the same weight using the double shuffle relations. Weights above
/// [`DEFAULT_WEIGHT_CAP`] are rejected.
pub fn decompose_in_hoffman_basis(c: &Composition) -> Result<LinComb<Composition>> {
    decompose_with_cap(c, DEFAULT_WEIGHT_CAP)
}

pub fn decompose_with_cap(c: &Composition, cap: u32) -> Result<LinComb<Composition>> {
    if !c.is_convergent() {
        return Err(Error::Divergent(c.clone()));
    }
    if c.weight() > cap {
        return Err(Error::Domain(format!("weight {} exceeds the cap {cap}", c.weight())));
    }
    if c.weight() == 0 {
        return Ok(LinComb::basis(c.clone()));
    }
    HoffmanReducer::new(c.weight())?.decompose(c)
}
