//! Simple undirected graphs, exact independence numbers and orthogonal
//! representations.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{CVec, C64};

/// Vertex cap for the exact independence-number search (one `u64` mask).
pub const ALPHA_CAP: usize = 64;
/// Largest `d` for which `hadamard_graph(d)` is materialized (4096 vertices).
pub const HADAMARD_CAP: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    label: String,
    n: usize,
    words: usize,
    /// Row-major adjacency bitsets, `words` u64 per row.
    adjacency: Vec<u64>,
    neighbors: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from 0-based edges. Self-loops and out-of-range
    /// endpoints are rejected; duplicate edges are merged.
    pub fn from_edges(label: impl Into<String>, n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let words = n.div_ceil(64).max(1);
        let mut g = Graph {
            label: label.into(),
            n,
            words,
            adjacency: vec![0; n * words],
            neighbors: vec![Vec::new(); n],
        };
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::InvalidArgument(format!("edge ({u},{v}) out of range for n={n}")));
            }
            if u == v {
                return Err(Error::InvalidArgument(format!("self-loop at vertex {u}")));
            }
            g.set(u, v);
            g.set(v, u);
        }
        g.rebuild_neighbors();
        Ok(g)
    }

    fn set(&mut self, u: usize, v: usize) {
        self.adjacency[u * self.words + v / 64] |= 1 << (v % 64);
    }

    fn rebuild_neighbors(&mut self) {
        for u in 0..self.n {
            self.neighbors[u] = (0..self.n).filter(|&v| self.adjacent(u, v)).collect();
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn n_vertices(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.neighbors[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Edges `(u, v)` with `u < v`, lexicographic.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|u| self.neighbors[u].iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect()
    }

    pub fn n_edges(&self) -> usize {
        self.neighbors.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &v in &self.neighbors[u] {
                if !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// True if `set` (sorted or not) is pairwise non-adjacent.
    pub fn is_independent(&self, set: &[usize]) -> bool {
        set.iter().enumerate().all(|(i, &u)| set[i + 1..].iter().all(|&v| !self.adjacent(u, v)))
    }

    pub fn to_json(&self) -> Result<String> {
        let doc = GraphDocument {
            n: self.n,
            edges: self.edges().into_iter().map(|(u, v)| [u + 1, v + 1]).collect(),
        };
        Ok(serde_json::to_string(&doc)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: GraphDocument = serde_json::from_str(s)?;
        let mut edges = Vec::with_capacity(doc.edges.len());
        for [u, v] in doc.edges {
            if u == 0 || v == 0 {
                return Err(Error::Parse("graph vertices are 1-based".into()));
            }
            edges.push((u - 1, v - 1));
        }
        Graph::from_edges("json", doc.n, &edges)
    }
}

#[derive(Serialize, Deserialize)]
struct GraphDocument {
    n: usize,
    edges: Vec<[usize; 2]>,
}

pub fn cycle_graph(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("cycle needs N >= 3 (got {n})")));
    }
    let edges: Vec<_> = (0..n).map(|x| (x, (x + 1) % n)).collect();
    Graph::from_edges(format!("cycle-{n}"), n, &edges)
}

pub fn complete_graph(n: usize) -> Graph {
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Graph::from_edges(format!("K{n}"), n, &edges).expect("complete graph edges are valid")
}

pub fn path_graph(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
    Graph::from_edges(format!("path-{n}"), n, &edges).expect("path edges are valid")
}

/// Vertices are `d`-bit strings ordered by integer value; edges join strings
/// at Hamming distance exactly `d/2`.
pub fn hadamard_graph(d: usize) -> Result<Graph> {
    if d % 2 == 1 {
        return Err(Error::OddDimension(d));
    }
    if d == 0 || d > HADAMARD_CAP {
        return Err(Error::InvalidArgument(format!("hadamard_graph supports 2 <= d <= {HADAMARD_CAP} (got {d})")));
    }
    let n = 1usize << d;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if (u ^ v).count_ones() as usize == d / 2 {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(format!("hadamard-{d}"), n, &edges)
}

/// The eight connected graphs on three and four vertices, up to isomorphism.
pub fn small_graph_catalog() -> Vec<Graph> {
    let make = |label: &str, n, edges: &[(usize, usize)]| {
        Graph::from_edges(label, n, edges).expect("catalog edges are valid")
    };
    vec![
        make("path-3", 3, &[(0, 1), (1, 2)]),
        make("triangle", 3, &[(0, 1), (1, 2), (0, 2)]),
        make("path-4", 4, &[(0, 1), (1, 2), (2, 3)]),
        make("star-4", 4, &[(0, 1), (0, 2), (0, 3)]),
        make("cycle-4", 4, &[(0, 1), (1, 2), (2, 3), (0, 3)]),
        make("paw", 4, &[(0, 1), (1, 2), (0, 2), (2, 3)]),
        make("diamond", 4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]),
        make("K4", 4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]),
    ]
}

/// Exact independence number.
pub fn independence_number(g: &Graph) -> Result<usize> {
    Ok(maximum_independent_set(g)?.len())
}

/// Lexicographically smallest maximum independent set (sorted vertex list),
/// found by include-first branch and bound with greedy clique-cover bounds.
pub fn maximum_independent_set(g: &Graph) -> Result<Vec<usize>> {
    let n = g.n_vertices();
    if n > ALPHA_CAP {
        return Err(Error::TooLarge { n, cap: ALPHA_CAP });
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    // closed neighbourhood masks
    let closed: Vec<u64> = (0..n)
        .map(|u| g.neighbors(u).iter().fold(1u64 << u, |m, &v| m | 1 << v))
        .collect();
    let adj: Vec<u64> = (0..n).map(|u| closed[u] & !(1u64 << u)).collect();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut search = MisSearch { closed: &closed, adj: &adj, best: 0, best_size: 0, found: false };
    search.branch(all, 0, 0);
    Ok((0..n).filter(|&v| search.best >> v & 1 == 1).collect())
}

struct MisSearch<'a> {
    closed: &'a [u64],
    adj: &'a [u64],
    best: u64,
    best_size: u32,
    found: bool,
}

impl MisSearch<'_> {
    /// Number of cliques in a greedy clique cover of `candidates`; bounds the
    /// independent vertices still obtainable.
    fn clique_cover_bound(&self, mut candidates: u64) -> u32 {
        let mut cliques = 0;
        while candidates != 0 {
            let v = candidates.trailing_zeros() as usize;
            candidates &= !(1 << v);
            // grow a clique containing v among remaining candidates
            let mut pool = candidates & self.adj[v];
            while pool != 0 {
                let u = pool.trailing_zeros() as usize;
                candidates &= !(1 << u);
                pool &= self.adj[u] & !(1 << u);
            }
            cliques += 1;
        }
        cliques
    }

    fn branch(&mut self, candidates: u64, current: u64, size: u32) {
        if candidates == 0 {
            if !self.found || size > self.best_size {
                self.best = current;
                self.best_size = size;
                self.found = true;
            }
            return;
        }
        if self.found && size + self.clique_cover_bound(candidates) <= self.best_size {
            return;
        }
        let v = candidates.trailing_zeros() as usize;
        self.branch(candidates & !self.closed[v], current | 1 << v, size + 1);
        self.branch(candidates & !(1 << v), current, size);
    }
}

/// Unit vectors, one per vertex.
#[derive(Debug, Clone)]
pub struct OrthRepresentation {
    dim: usize,
    vectors: Vec<CVec>,
}

impl OrthRepresentation {
    pub fn new(vectors: Vec<CVec>) -> Result<Self> {
        let dim = vectors.first().map_or(0, |v| v.len());
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::DimensionMismatch(format!("vector {i} has length {}", v.len())));
            }
            if (v.norm() - 1.0).abs() > 1e-10 {
                return Err(Error::InvalidArgument(format!("vector {i} has norm {}", v.norm())));
            }
        }
        Ok(Self { dim, vectors })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vectors(&self) -> &[CVec] {
        &self.vectors
    }
}

/// Adjacent pairs whose vectors fail to be orthogonal.
#[derive(Debug, Clone, PartialEq)]
pub struct OrthReport {
    pub violations: Vec<(usize, usize, f64)>,
}

impl OrthReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn verify_orth_representation(g: &Graph, rep: &OrthRepresentation) -> Result<OrthReport> {
    if rep.vectors.len() != g.n_vertices() {
        return Err(Error::SizeMismatch { expected: g.n_vertices(), got: rep.vectors.len() });
    }
    let violations = g
        .edges()
        .into_iter()
        .filter_map(|(u, v)| {
            let overlap: C64 = rep.vectors[u].dotc(&rep.vectors[v]);
            (overlap.norm() > 1e-9).then_some((u, v, overlap.norm()))
        })
        .collect();
    Ok(OrthReport { violations })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdvantageRatio {
    pub ratio: f64,
    pub alpha: usize,
    pub beta: usize,
    /// Ratio strictly above one.
    pub advantage: bool,
}

/// `N / (alpha(G) * beta)`: guaranteed classical/quantum distinguishability
/// ratio at perfect success, given an orthogonal representation in dimension `beta`.
pub fn advantage_ratio(g: &Graph, beta: usize) -> Result<AdvantageRatio> {
    if beta == 0 {
        return Err(Error::InvalidArgument("beta must be at least 1".into()));
    }
    let alpha = independence_number(g)?;
    let ratio = g.n_vertices() as f64 / (alpha * beta) as f64;
    Ok(AdvantageRatio { ratio, alpha, beta, advantage: ratio > 1.0 + 1e-12 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;

    fn brute_alpha(g: &Graph) -> usize {
        let n = g.n_vertices();
        (0u32..1 << n)
            .filter(|mask| {
                let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
                g.is_independent(&set)
            })
            .map(|m| m.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn cycles() {
        assert_eq!(cycle_graph(3).unwrap().n_edges(), 3);
        let c5 = cycle_graph(5).unwrap();
        assert_eq!(c5.n_edges(), 5);
        assert_eq!(independence_number(&c5).unwrap(), 2);
        let c7 = cycle_graph(7).unwrap();
        assert_eq!(independence_number(&c7).unwrap(), 3);
        assert_eq!(brute_alpha(&c7), 3);
        assert!(cycle_graph(2).is_err());
    }

    #[test]
    fn hadamard_small() {
        let h2 = hadamard_graph(2).unwrap();
        assert_eq!(h2.n_vertices(), 4);
        assert!((0..4).all(|v| h2.degree(v) == 2));
        let h4 = hadamard_graph(4).unwrap();
        assert_eq!(h4.n_vertices(), 16);
        assert!((0..16).all(|v| h4.degree(v) == 6));
        // parity classes never touch
        for (u, v) in h4.edges() {
            assert_eq!(u.count_ones() % 2, v.count_ones() % 2);
        }
        assert_eq!(independence_number(&h4).unwrap(), 4);
        assert!(h4.is_independent(&[0b0000, 0b1111, 0b1000, 0b0111]));
        assert_eq!(hadamard_graph(3).unwrap_err(), Error::OddDimension(3));
    }

    #[test]
    fn catalog_is_eight_connected_distinct_graphs() {
        let cat = small_graph_catalog();
        assert_eq!(cat.len(), 8);
        assert!(cat.iter().all(Graph::is_connected));
        for i in 0..cat.len() {
            for j in i + 1..cat.len() {
                assert!(!isomorphic(&cat[i], &cat[j]), "{} ~ {}", cat[i].label(), cat[j].label());
            }
        }
        for g in &cat {
            let a = independence_number(g).unwrap();
            assert_eq!(a, brute_alpha(g));
            assert!(a <= 3);
        }
        let star = cat.iter().find(|g| g.label() == "star-4").unwrap();
        assert_eq!(independence_number(star).unwrap(), 3);
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn isomorphic(a: &Graph, b: &Graph) -> bool {
        a.n_vertices() == b.n_vertices()
            && permutations(a.n_vertices()).iter().any(|p| {
                a.edges().iter().all(|&(u, v)| b.adjacent(p[u], p[v])) && a.n_edges() == b.n_edges()
            })
    }

    #[test]
    fn k4_alpha_and_witness() {
        assert_eq!(independence_number(&complete_graph(4)).unwrap(), 1);
        assert_eq!(maximum_independent_set(&complete_graph(4)).unwrap(), vec![0]);
        assert_eq!(maximum_independent_set(&cycle_graph(5).unwrap()).unwrap(), vec![0, 2]);
    }

    #[test]
    fn alpha_cap_enforced() {
        let g = path_graph(65);
        assert_eq!(independence_number(&g).unwrap_err(), Error::TooLarge { n: 65, cap: 64 });
    }

    #[test]
    fn pentagon_states_are_not_an_orthogonal_representation() {
        let n = 5;
        let beta = (n as f64 - 1.0) * std::f64::consts::PI / n as f64;
        let vecs = (0..n)
            .map(|x| {
                let a = x as f64 * beta / 2.0;
                CVec::from_vec(vec![c(a.cos(), 0.0), c(a.sin(), 0.0)])
            })
            .collect();
        let rep = OrthRepresentation::new(vecs).unwrap();
        let report = verify_orth_representation(&cycle_graph(5).unwrap(), &rep).unwrap();
        assert_eq!(report.violations.len(), 5);
        let s = (std::f64::consts::PI / 10.0).sin();
        assert!(report.violations.iter().all(|v| (v.2 - s).abs() < 1e-12));
    }

    #[test]
    fn k2_basis_is_valid_and_size_checked() {
        let rep = OrthRepresentation::new(vec![
            CVec::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]),
            CVec::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)]),
        ])
        .unwrap();
        assert!(verify_orth_representation(&complete_graph(2), &rep).unwrap().is_valid());
        assert!(matches!(
            verify_orth_representation(&complete_graph(3), &rep),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn advantage_ratios() {
        let h4 = advantage_ratio(&hadamard_graph(4).unwrap(), 4).unwrap();
        assert_eq!(h4.ratio, 1.0);
        assert!(!h4.advantage);
        let c5 = advantage_ratio(&cycle_graph(5).unwrap(), 3).unwrap();
        assert!((c5.ratio - 5.0 / 6.0).abs() < 1e-15);
        assert_eq!(advantage_ratio(&complete_graph(2), 2).unwrap().ratio, 1.0);
    }

    #[test]
    fn json_edge_list_is_one_based_sorted() {
        let g = cycle_graph(4).unwrap();
        assert_eq!(g.to_json().unwrap(), r#"{"n":4,"edges":[[1,2],[1,4],[2,3],[3,4]]}"#);
        let back = Graph::from_json(&g.to_json().unwrap()).unwrap();
        assert_eq!(back.edges(), g.edges());
    }
}
