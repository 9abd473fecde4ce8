use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use serde::{Serialize, Serializer};

use super::graph::Graph;
use crate::error::{Error, Result};
use crate::linalg::bareiss_determinant;

/// Squarefree polynomial with unit coefficients; each monomial is a bitmask
/// over edge labels (`x₁` is bit 0).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct GraphPolynomial {
    pub monomials: BTreeSet<u64>,
}

impl GraphPolynomial {
    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    /// Common degree of all monomials, if homogeneous.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.monomials.iter().map(|m| m.count_ones());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    /// Value at a point; `x[i]` is the value of the edge labelled `i`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.monomials
            .iter()
            .map(|&m| {
                let mut p = 1.0;
                let mut bits = m;
                while bits != 0 {
                    let i = bits.trailing_zeros() as usize;
                    p *= x[i];
                    bits &= bits - 1;
                }
                p
            })
            .sum()
    }

    /// `self · x_label`.
    pub fn times_variable(&self, label: usize) -> GraphPolynomial {
        GraphPolynomial { monomials: self.monomials.iter().map(|m| m | 1 << label).collect() }
    }

    /// Sum of polynomials whose monomial sets are disjoint.
    pub fn disjoint_sum(&self, other: &GraphPolynomial) -> GraphPolynomial {
        GraphPolynomial { monomials: self.monomials.union(&other.monomials).copied().collect() }
    }

    /// Monomials as 1-based label lists, by degree then lexicographically.
    pub fn sorted_monomials(&self) -> Vec<Vec<u32>> {
        let mut ms: Vec<Vec<u32>> = self
            .monomials
            .iter()
            .map(|&m| {
                let mut labels = Vec::new();
                let mut bits = m;
                while bits != 0 {
                    labels.push(bits.trailing_zeros() + 1);
                    bits &= bits - 1;
                }
                labels
            })
            .collect();
        ms.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        ms
    }
}

impl fmt::Display for GraphPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        let terms: Vec<String> = self
            .sorted_monomials()
            .into_iter()
            .map(|m| if m.is_empty() { "1".into() } else { m.iter().map(|i| format!("x{i}")).collect::<Vec<_>>().join("*") })
            .collect();
        f.write_str(&terms.join(" + "))
    }
}

impl Serialize for GraphPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.sorted_monomials().serialize(s)
    }
}

/// Edge-label masks of all spanning trees, by deletion–contraction with
/// shortcuts: loops are never in a tree, bridges always are.
pub fn spanning_trees(g: &Graph) -> Vec<u64> {
    if g.components_without(None) != 1 {
        return Vec::new();
    }
    let mut out = Vec::new();
    trees_rec(g, 0, &mut out);
    out
}

fn trees_rec(g: &Graph, chosen: u64, out: &mut Vec<u64>) {
    let Some(e) = g.edges().first().copied() else {
        if g.vertex_count() == 1 {
            out.push(chosen);
        }
        return;
    };
    if e.is_loop() {
        trees_rec(&g.deleted(0), chosen, out);
    } else if g.is_bridge(0) {
        trees_rec(&g.contracted(0), chosen | 1 << e.label, out);
    } else {
        trees_rec(&g.deleted(0), chosen, out);
        trees_rec(&g.contracted(0), chosen | 1 << e.label, out);
    }
}

/// `Ψ_G = Σ_T Π_{e∉T} x_e` over spanning trees `T`.
pub fn kirchhoff_polynomial(g: &Graph) -> Result<GraphPolynomial> {
    let trees = spanning_trees(g);
    if trees.is_empty() {
        return Err(Error::Graph("graph is not connected".into()));
    }
    let all = g.label_mask();
    Ok(GraphPolynomial { monomials: trees.into_iter().map(|t| all & !t).collect() })
}

/// Spanning-tree count as the determinant of a reduced Laplacian.
pub fn matrix_tree_count(g: &Graph) -> BigInt {
    let n = g.vertex_count();
    let mut lap = vec![vec![BigInt::from(0); n]; n];
    for e in g.edges().iter().filter(|e| !e.is_loop()) {
        lap[e.u][e.u] += 1;
        lap[e.v][e.v] += 1;
        lap[e.u][e.v] -= 1;
        lap[e.v][e.u] -= 1;
    }
    let reduced: Vec<Vec<BigInt>> = lap[1..].iter().map(|r| r[1..].to_vec()).collect();
    bareiss_determinant(&reduced)
}

/// Largest edge count for the exhaustive subgraph check.
pub const MAX_PRIMITIVITY_EDGES: usize = 24;

/// `N = 2h` and every proper subgraph with `h ≥ 1` has `N > 2h`.
///
/// Subgraphs are enumerated as edge subsets; a disconnected subgraph passes
/// exactly when its components do, so checking all subsets is equivalent to
/// checking the connected ones.
pub fn is_primitive_log_divergent(g: &Graph) -> Result<bool> {
    let n = g.edge_count();
    if n > MAX_PRIMITIVITY_EDGES {
        return Err(Error::Graph(format!("primitivity check supports at most {MAX_PRIMITIVITY_EDGES} edges")));
    }
    if n != 2 * g.loop_number() {
        return Ok(false);
    }
    let full = (1u64 << n) - 1;
    for subset in 1..full {
        let h = subgraph_loops(g, subset);
        if h >= 1 && (subset.count_ones() as usize) <= 2 * h {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Loop number `|S| − V_S + C_S` of the subgraph formed by edge subset `S`
/// (bit `i` = edge index `i`).
fn subgraph_loops(g: &Graph, subset: u64) -> usize {
    let mut parent: Vec<usize> = (0..g.vertex_count()).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut cycles = 0;
    for (i, e) in g.edges().iter().enumerate() {
        if subset >> i & 1 == 0 {
            continue;
        }
        let (a, b) = (find(&mut parent, e.u), find(&mut parent, e.v));
        if a == b {
            cycles += 1;
        } else {
            parent[a] = b;
        }
    }
    cycles
}
