use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest edge count supported (edge sets are `u64` bitmasks).
pub const MAX_EDGES: usize = 64;

/// An edge between vertices `u` and `v` (0-based) carrying a label; labels
/// survive deletion and contraction so polynomials of minors can be compared.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: usize,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

/// Connected multigraph. Input graphs may not contain self-loops; they only
/// arise internally from contractions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: usize,
    edges: Vec<Edge>,
}

/// JSON form: 1-based vertex pairs.
#[derive(Serialize, Deserialize)]
struct GraphJson {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Builds a graph from 0-based vertex pairs; edge `i` gets label `i`.
    pub fn new(vertices: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        if vertices == 0 {
            return Err(Error::Graph("a graph needs at least one vertex".into()));
        }
        if pairs.len() > MAX_EDGES {
            return Err(Error::Graph(format!("at most {MAX_EDGES} edges are supported")));
        }
        let mut edges = Vec::with_capacity(pairs.len());
        for (label, &(u, v)) in pairs.iter().enumerate() {
            if u >= vertices || v >= vertices {
                return Err(Error::Graph(format!("edge {}-{} uses a vertex outside 1..={vertices}", u + 1, v + 1)));
            }
            if u == v {
                return Err(Error::Graph(format!("self-loop at vertex {}", u + 1)));
            }
            edges.push(Edge { u, v, label });
        }
        let g = Graph { vertices, edges };
        if !g.is_connected() {
            return Err(Error::Graph("graph is not connected".into()));
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let pairs: Vec<_> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        Graph::new(n, &pairs).expect("complete graphs are valid")
    }

    /// Wheel with `spokes` spokes: a hub joined to every vertex of a cycle.
    /// `wheel(3)` is K₄.
    pub fn wheel(spokes: usize) -> Self {
        assert!(spokes >= 3, "a wheel needs at least three spokes");
        let mut pairs: Vec<_> = (1..=spokes).map(|i| (0, i)).collect();
        pairs.extend((1..=spokes).map(|i| (i, i % spokes + 1)));
        Graph::new(spokes + 1, &pairs).expect("wheels are valid")
    }

    pub fn cycle(n: usize) -> Self {
        let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::new(n, &pairs).expect("cycles are valid")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// First Betti number `N − V + 1`.
    pub fn loop_number(&self) -> usize {
        self.edges.len() + 1 - self.vertices
    }

    /// Union of all edge labels as a bitmask.
    pub fn label_mask(&self) -> u64 {
        self.edges.iter().fold(0, |m, e| m | 1 << e.label)
    }

    pub fn is_connected(&self) -> bool {
        self.components_without(None) == 1
    }

    /// Number of connected components, optionally ignoring edge index `skip`.
    pub(crate) fn components_without(&self, skip: Option<usize>) -> usize {
        let mut adj = vec![Vec::new(); self.vertices];
        for (i, e) in self.edges.iter().enumerate() {
            if Some(i) != skip {
                adj[e.u].push(e.v);
                adj[e.v].push(e.u);
            }
        }
        let mut seen = vec![false; self.vertices];
        let mut count = 0;
        for start in 0..self.vertices {
            if seen[start] {
                continue;
            }
            count += 1;
            seen[start] = true;
            let mut queue = VecDeque::from([start]);
            while let Some(x) = queue.pop_front() {
                for &y in &adj[x] {
                    if !seen[y] {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
        }
        count
    }

    /// Whether removing edge index `i` disconnects the graph.
    pub fn is_bridge(&self, i: usize) -> bool {
        !self.edges[i].is_loop() && self.components_without(Some(i)) > self.components_without(None)
    }

    /// `G ∖ e` for edge index `i`. The result may be disconnected.
    pub fn deleted(&self, i: usize) -> Graph {
        let mut edges = self.edges.clone();
        edges.remove(i);
        Graph { vertices: self.vertices, edges }
    }

    /// `G / e` for edge index `i` (not a loop): its endpoints are merged,
    /// parallel edges become loops.
    pub fn contracted(&self, i: usize) -> Graph {
        let e = self.edges[i];
        assert!(!e.is_loop(), "cannot contract a loop");
        let (keep, gone) = (e.u.min(e.v), e.u.max(e.v));
        let relabel = |x: usize| {
            let x = if x == gone { keep } else { x };
            if x > gone {
                x - 1
            } else {
                x
            }
        };
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, f)| Edge { u: relabel(f.u), v: relabel(f.v), label: f.label })
            .collect();
        Graph { vertices: self.vertices - 1, edges }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(GraphJson {
            vertices: self.vertices,
            edges: self.edges.iter().map(|e| (e.u + 1, e.v + 1)).collect(),
        })
        .expect("plain data serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let g: GraphJson = serde_json::from_str(s).map_err(|e| Error::Parse(format!("graph JSON: {e}")))?;
        let pairs = g
            .edges
            .iter()
            .map(|&(u, v)| {
                if u == 0 || v == 0 {
                    Err(Error::Graph("vertices are numbered from 1".into()))
                } else {
                    Ok((u - 1, v - 1))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Graph::new(g.vertices, &pairs)
    }

    /// Accepts either the edge-list text format or JSON.
    pub fn parse_any(s: &str) -> Result<Self> {
        if s.trim_start().starts_with('{') {
            Graph::from_json(s)
        } else {
            s.parse()
        }
    }
}

/// Edge-list text: `V=4; 1-2,1-3,1-4,2-3,2-4,3-4` with 1-based vertices.
impl FromStr for Graph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |what: &str| Error::Parse(format!("graph {what}: {s:?}"));
        let (head, body) = s.split_once(';').ok_or_else(|| bad("needs `V=n; edges`"))?;
        let v: usize = head
            .trim()
            .strip_prefix("V=")
            .or_else(|| head.trim().strip_prefix("V ="))
            .ok_or_else(|| bad("must start with V="))?
            .trim()
            .parse()
            .map_err(|_| bad("has a bad vertex count"))?;
        let mut pairs = Vec::new();
        for item in body.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let (a, b) = item.split_once('-').ok_or_else(|| bad("has an edge without `-`"))?;
            let a: usize = a.trim().parse().map_err(|_| bad("has a bad vertex"))?;
            let b: usize = b.trim().parse().map_err(|_| bad("has a bad vertex"))?;
            if a == 0 || b == 0 {
                return Err(Error::Graph("vertices are numbered from 1".into()));
            }
            pairs.push((a - 1, b - 1));
        }
        Graph::new(v, &pairs)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "V={}; ", self.vertices)?;
        let edges: Vec<String> = self.edges.iter().map(|e| format!("{}-{}", e.u + 1, e.v + 1)).collect();
        f.write_str(&edges.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_text_and_json() {
        let g: Graph = "V=4; 1-2,1-3,1-4,2-3,2-4,3-4".parse().unwrap();
        assert_eq!(g, Graph::complete(4));
        assert_eq!((g.edge_count(), g.loop_number()), (6, 3));
        assert_eq!(g.to_string(), "V=4; 1-2,1-3,1-4,2-3,2-4,3-4");
        let json = g.to_json().to_string();
        assert_eq!(Graph::from_json(&json).unwrap(), g);
        assert_eq!(Graph::parse_any(&json).unwrap(), g);
    }

    #[test]
    fn rejects_invalid() {
        assert!(matches!("V=3; 1-2".parse::<Graph>(), Err(Error::Graph(_))));
        assert!(matches!("V=2; 1-1,1-2".parse::<Graph>(), Err(Error::Graph(_))));
        assert!(matches!("V=2; 1-3".parse::<Graph>(), Err(Error::Graph(_))));
        assert!(matches!("4; 1-2".parse::<Graph>(), Err(Error::Parse(_))));
        assert!(matches!("V=2; 1+2".parse::<Graph>(), Err(Error::Parse(_))));
        assert!(Graph::from_json("{\"vertices\":2,\"edges\":[[0,1]]}").is_err());
    }

    #[test]
    fn minors() {
        let g = Graph::cycle(3);
        assert!(!g.is_bridge(0));
        let d = g.deleted(0);
        assert!(d.is_connected());
        assert!(d.is_bridge(0));
        let c = g.contracted(0);
        assert_eq!(c.vertex_count(), 2);
        assert_eq!(c.edge_count(), 2);
        // Contracting one of two parallel edges leaves a loop.
        let two = Graph::new(2, &[(0, 1), (0, 1)]).unwrap();
        assert!(two.contracted(0).edges()[0].is_loop());
        assert_eq!(Graph::wheel(3).loop_number(), 3);
        assert_eq!(Graph::wheel(4).edge_count(), 8);
    }
}
