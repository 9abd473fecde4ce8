//! Exact linear algebra over the integers.
//!
//! [`Echelon`] maintains a fully reduced, fraction-free row echelon form of
//! sparse integer rows: every stored row is primitive (content 1) with a
//! positive pivot, and no stored row has a nonzero entry in another row's
//! pivot column. Rational rows are brought in by clearing denominators.
//! Columns are eliminated left to right, so callers control pivot preference
//! through the column numbering.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

/// Sparse integer row: `(column, value)` pairs sorted by column, no zeros.
pub type SparseRow = Vec<(usize, BigInt)>;

/// Clears denominators of a sparse rational row and makes it primitive.
pub fn integer_row(entries: impl IntoIterator<Item = (usize, BigRational)>) -> SparseRow {
    let mut entries: Vec<(usize, BigRational)> = entries.into_iter().filter(|(_, q)| !q.is_zero()).collect();
    entries.sort_by_key(|(c, _)| *c);
    let lcm = entries.iter().fold(BigInt::one(), |acc, (_, q)| acc.lcm(q.denom()));
    let mut row: SparseRow = entries
        .into_iter()
        .map(|(c, q)| (c, (q * BigRational::from(lcm.clone())).to_integer()))
        .collect();
    make_primitive(&mut row);
    row
}

/// Divides by the content and makes the leading entry positive.
fn make_primitive(row: &mut SparseRow) {
    let Some((_, lead)) = row.first() else { return };
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            break;
        }
    }
    if lead.is_negative() {
        g = -g;
    }
    if !g.is_one() {
        for (_, v) in row.iter_mut() {
            *v = &*v / &g;
        }
    }
}

/// `fa·a − fb·b`.
fn combine(a: &SparseRow, fa: &BigInt, b: &SparseRow, fb: &BigInt) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|e| e.0);
        let cb = b.get(j).map(|e| e.0);
        match (ca, cb) {
            (Some(x), Some(y)) if x == y => {
                let v = fa * &a[i].1 - fb * &b[j].1;
                if !v.is_zero() {
                    out.push((x, v));
                }
                i += 1;
                j += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push((x, fa * &a[i].1));
                i += 1;
            }
            (Some(x), None) => {
                out.push((x, fa * &a[i].1));
                i += 1;
            }
            (_, Some(y)) => {
                out.push((y, -(fb * &b[j].1)));
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

fn entry(row: &SparseRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |e| e.0).ok().map(|i| &row[i].1)
}

/// Eliminates `col` from `row` using `pivot_row` whose pivot sits at `col`.
fn eliminate(row: &SparseRow, pivot_row: &SparseRow, col: usize) -> SparseRow {
    let a = entry(row, col).expect("column present");
    let p = entry(pivot_row, col).expect("pivot present");
    let g = a.gcd(p);
    let mut out = combine(row, &(p / &g), pivot_row, &(a / &g));
    make_primitive(&mut out);
    out
}

/// Incrementally maintained reduced echelon form over the integers.
#[derive(Clone, Debug)]
pub struct Echelon {
    ncols: usize,
    rows: Vec<SparseRow>,
    pivot_row_of_col: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(ncols: usize) -> Self {
        Echelon {
            ncols,
            rows: Vec::new(),
            pivot_row_of_col: vec![None; ncols],
        }
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.pivot_row_of_col[col].is_some()
    }

    /// Stored row whose pivot is `col`.
    pub fn pivot_row(&self, col: usize) -> Option<&SparseRow> {
        self.pivot_row_of_col[col].map(|i| &self.rows[i])
    }

    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&c| !self.is_pivot(c)).collect()
    }

    /// Reduces `row` modulo the stored row space; the result has no entry in
    /// any pivot column and is primitive.
    pub fn reduce(&self, row: &SparseRow) -> SparseRow {
        let targets: Vec<usize> = row
            .iter()
            .filter(|(c, _)| self.is_pivot(*c))
            .map(|(c, _)| *c)
            .collect();
        let mut r = row.clone();
        make_primitive(&mut r);
        for col in targets {
            let pr = &self.rows[self.pivot_row_of_col[col].unwrap()];
            r = eliminate(&r, pr, col);
        }
        r
    }

    /// Adds a row; returns whether it increased the rank.
    pub fn insert(&mut self, row: &SparseRow) -> bool {
        if let Some(&(c, _)) = row.last() {
            assert!(c < self.ncols, "column {c} out of range");
        }
        let r = self.reduce(row);
        let Some(&(pivot, _)) = r.first() else {
            return false;
        };
        for existing in self.rows.iter_mut() {
            if entry(existing, pivot).is_some() {
                *existing = eliminate(existing, &r, pivot);
            }
        }
        self.pivot_row_of_col[pivot] = Some(self.rows.len());
        self.rows.push(r);
        true
    }

    /// Expresses pivot column `col` through free columns:
    /// `x_col = Σ q_j x_j` over the returned `(j, q_j)`.
    pub fn solve_pivot(&self, col: usize) -> Option<Vec<(usize, BigRational)>> {
        let row = self.pivot_row(col)?;
        let lead = BigRational::from_integer(row[0].1.clone());
        Some(
            row[1..]
                .iter()
                .map(|(c, v)| (*c, -BigRational::from_integer(v.clone()) / &lead))
                .collect(),
        )
    }
}

/// Rank of integer rows over the rationals.
pub fn exact_rank(rows: &[SparseRow], ncols: usize) -> usize {
    let mut e = Echelon::new(ncols);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

/// The largest primes below 2^62, in decreasing order.
pub const RANK_PRIMES: [u64; 32] = [
    4_611_686_018_427_387_847,
    4_611_686_018_427_387_817,
    4_611_686_018_427_387_787,
    4_611_686_018_427_387_761,
    4_611_686_018_427_387_751,
    4_611_686_018_427_387_737,
    4_611_686_018_427_387_733,
    4_611_686_018_427_387_709,
    4_611_686_018_427_387_701,
    4_611_686_018_427_387_631,
    4_611_686_018_427_387_617,
    4_611_686_018_427_387_587,
    4_611_686_018_427_387_461,
    4_611_686_018_427_387_421,
    4_611_686_018_427_387_409,
    4_611_686_018_427_387_329,
    4_611_686_018_427_387_323,
    4_611_686_018_427_387_301,
    4_611_686_018_427_387_271,
    4_611_686_018_427_387_241,
    4_611_686_018_427_387_139,
    4_611_686_018_427_387_131,
    4_611_686_018_427_387_127,
    4_611_686_018_427_387_113,
    4_611_686_018_427_387_091,
    4_611_686_018_427_387_073,
    4_611_686_018_427_386_981,
    4_611_686_018_427_386_923,
    4_611_686_018_427_386_911,
    4_611_686_018_427_386_903,
    4_611_686_018_427_386_897,
    4_611_686_018_427_386_887,
];

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    acc
}

fn to_mod(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.try_into().expect("reduced value fits u64")
}

/// Incremental echelon form modulo a prime, rows normalized to pivot 1.
#[derive(Clone, Debug)]
pub struct ModularEchelon {
    p: u64,
    pivots: Vec<Option<Vec<(usize, u64)>>>,
    rank: usize,
}

impl ModularEchelon {
    pub fn new(ncols: usize, p: u64) -> Self {
        ModularEchelon { p, pivots: vec![None; ncols], rank: 0 }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Adds a row; returns whether it is independent modulo `p`.
    pub fn insert(&mut self, row: &SparseRow) -> bool {
        let p = self.p;
        let mut r: Vec<(usize, u64)> = row
            .iter()
            .map(|(c, v)| (*c, to_mod(v, p)))
            .filter(|(_, v)| *v != 0)
            .collect();
        let mut k = 0;
        while k < r.len() {
            let (c, a) = r[k];
            match &self.pivots[c] {
                // Entries before k are untouched and r[k] cancels.
                Some(pr) => r = sub_scaled_mod(&r, pr, a, p),
                None => k += 1,
            }
        }
        let Some(&(pivot, lead)) = r.first() else { return false };
        let inv = powmod(lead, p - 2, p);
        for e in r.iter_mut() {
            e.1 = mulmod(e.1, inv, p);
        }
        self.pivots[pivot] = Some(r);
        self.rank += 1;
        true
    }
}

impl ModularEchelon {
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.pivots.len()).filter(|&c| self.pivots[c].is_none()).collect()
    }

    /// One kernel vector per free column `f`: 1 at `f`, 0 at the other free
    /// columns, pivots filled in by back substitution.
    pub fn kernel(&self) -> Vec<Vec<u64>> {
        let p = self.p;
        let ncols = self.pivots.len();
        self.free_columns()
            .into_iter()
            .map(|f| {
                let mut x = vec![0u64; ncols];
                x[f] = 1;
                // A stored row starts at its pivot and only has later columns.
                for c in (0..ncols).rev() {
                    if let Some(row) = &self.pivots[c] {
                        let s = row[1..].iter().fold(0u64, |acc, &(j, v)| (acc + mulmod(v, x[j], p)) % p);
                        x[c] = (p - s) % p;
                    }
                }
                x
            })
            .collect()
    }
}

/// Rank modulo the prime `p`. Never exceeds the rational rank; equal to it
/// for all but finitely many primes.
pub fn modular_rank(rows: &[SparseRow], ncols: usize, p: u64) -> usize {
    let mut e = ModularEchelon::new(ncols, p);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

fn sub_scaled_mod(a: &[(usize, u64)], b: &[(usize, u64)], f: u64, p: u64) -> Vec<(usize, u64)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ca = a.get(i).map(|e| e.0).unwrap_or(usize::MAX);
        let cb = b.get(j).map(|e| e.0).unwrap_or(usize::MAX);
        if ca == cb {
            let v = (a[i].1 + p - mulmod(f, b[j].1, p)) % p;
            if v != 0 {
                out.push((ca, v));
            }
            i += 1;
            j += 1;
        } else if ca < cb {
            out.push(a[i]);
            i += 1;
        } else {
            let v = (p - mulmod(f, b[j].1, p)) % p;
            if v != 0 {
                out.push((cb, v));
            }
            j += 1;
        }
    }
    out
}

/// Basis of the right kernel `{x : R·x = 0}`: vector `j` is 1 at column
/// `free[j]` and 0 at every other free column.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelBasis {
    pub ncols: usize,
    pub rank: usize,
    pub free: Vec<usize>,
    pub vectors: Vec<Vec<BigRational>>,
}

impl KernelBasis {
    pub fn is_free(&self, col: usize) -> bool {
        self.free.binary_search(&col).is_ok()
    }

    /// `x_col = Σ_j q_j x_{free[j]}` for every kernel element `x`, as
    /// nonzero `(free column, q)` pairs.
    pub fn express(&self, col: usize) -> Vec<(usize, BigRational)> {
        self.free
            .iter()
            .zip(&self.vectors)
            .filter(|(_, v)| !v[col].is_zero())
            .map(|(&f, v)| (f, v[col].clone()))
            .collect()
    }

    /// Whether every vector is annihilated by every row, exactly.
    pub fn annihilated_by(&self, rows: &[SparseRow]) -> bool {
        self.vectors.iter().all(|v| {
            let den = v.iter().fold(BigInt::one(), |l, q| l.lcm(q.denom()));
            let z: Vec<BigInt> = v.iter().map(|q| q.numer() * (&den / q.denom())).collect();
            rows.iter().all(|r| r.iter().fold(BigInt::zero(), |acc, (c, a)| acc + a * &z[*c]).is_zero())
        })
    }
}

impl Echelon {
    pub fn kernel(&self) -> KernelBasis {
        let free = self.free_columns();
        let position: Vec<Option<usize>> = {
            let mut p = vec![None; self.ncols];
            for (j, &f) in free.iter().enumerate() {
                p[f] = Some(j);
            }
            p
        };
        let mut vectors = vec![vec![BigRational::zero(); self.ncols]; free.len()];
        for (j, &f) in free.iter().enumerate() {
            vectors[j][f] = BigRational::one();
        }
        for c in (0..self.ncols).filter(|&c| self.is_pivot(c)) {
            for (f, q) in self.solve_pivot(c).expect("pivot column") {
                let j = position[f].expect("fully reduced rows only meet free columns");
                vectors[j][c] = q;
            }
        }
        KernelBasis { ncols: self.ncols, rank: self.rank(), free, vectors }
    }
}

/// `a/b ≡ x (mod m)` with `|a|, b ≤ √(m/2)`, if it exists.
pub fn rational_reconstruction(x: &BigInt, m: &BigInt) -> Option<BigRational> {
    let bound = (m / 2u32).sqrt();
    let (mut r0, mut r1) = (m.clone(), x.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        (r0, r1, t0, t1) = (r1, r2, t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound || !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

/// Kernel of integer rows over Q by computing modulo several primes,
/// lifting with the Chinese remainder theorem and rational reconstruction,
/// and checking the lift exactly.
///
/// A successful result is exact: the rows found independent modulo a prime
/// are independent over Q, and the verified vectors span a kernel of the
/// complementary dimension. Returns `None` when the primes run out first.
pub fn multimodular_kernel(rows: &[SparseRow], ncols: usize) -> Option<KernelBasis> {
    let mut reference: Option<(usize, Vec<usize>)> = None;
    let mut acc: Vec<Vec<BigInt>> = Vec::new();
    let mut modulus = BigInt::one();
    for batch in RANK_PRIMES.chunks(4) {
        let images: Vec<(u64, usize, Vec<usize>, Vec<Vec<u64>>)> = batch
            .par_iter()
            .map(|&p| {
                let mut e = ModularEchelon::new(ncols, p);
                for r in rows {
                    e.insert(r);
                }
                (p, e.rank(), e.free_columns(), e.kernel())
            })
            .collect();
        for (p, rank, free, kernel) in images {
            match &reference {
                Some((r, f)) if rank == *r && free == *f => {}
                // The rank modulo p never exceeds the rational rank.
                Some((r, _)) if rank <= *r => continue,
                _ => {
                    reference = Some((rank, free));
                    acc = vec![vec![BigInt::zero(); ncols]; kernel.len()];
                    modulus = BigInt::one();
                }
            }
            let m_inv = BigInt::from(powmod(to_mod(&modulus, p), p - 2, p));
            for (a, k) in acc.iter_mut().zip(&kernel) {
                for (x, &r) in a.iter_mut().zip(k) {
                    let diff = (BigInt::from(r) - &*x).mod_floor(&BigInt::from(p));
                    let t = (diff * &m_inv).mod_floor(&BigInt::from(p));
                    *x += &modulus * t;
                }
            }
            modulus *= p;
        }
        let (rank, free) = reference.clone()?;
        let lifted: Option<Vec<Vec<BigRational>>> = acc
            .iter()
            .map(|a| a.iter().map(|x| rational_reconstruction(x, &modulus)).collect())
            .collect();
        if let Some(vectors) = lifted {
            let k = KernelBasis { ncols, rank, free, vectors };
            if k.annihilated_by(rows) {
                return Some(k);
            }
        }
    }
    None
}

/// Determinant of a square integer matrix by Bareiss' fraction-free
/// elimination.
pub fn bareiss_determinant(matrix: &[Vec<BigInt>]) -> BigInt {
    let n = matrix.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut m: Vec<Vec<BigInt>> = matrix.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}
