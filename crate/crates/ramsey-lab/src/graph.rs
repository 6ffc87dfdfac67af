//! Simple undirected labelled graphs on at most 64 vertices, backed by
//! adjacency bitsets, together with isomorphism testing and copy enumeration.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Hard cap on the vertex count; everything fits in one `u64` mask.
pub const MAX_VERTICES: usize = 64;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum GraphError {
    #[error("vertex count {0} exceeds the maximum of {MAX_VERTICES}")]
    TooManyVertices(usize),
    #[error("edge ({0},{1}) out of range for {2} vertices")]
    EdgeOutOfRange(usize, usize, usize),
    #[error("loop at vertex {0}")]
    SelfLoop(usize),
    #[error("graph has no edges")]
    Empty,
}

/// Index of an edge in the canonical ordering of a graph's edge set,
/// lexicographic by (min endpoint, max endpoint).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    adj: Vec<u64>,
    /// Canonical edge list, lexicographic by (min, max) endpoint.
    edges: Vec<(usize, usize)>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}

impl Graph {
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices(n));
        }
        Ok(Graph { n, adj: vec![0; n], edges: Vec::new() })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.insert_edge(u, v)?;
        }
        g.rebuild_edge_list();
        Ok(g)
    }

    fn insert_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if u >= self.n || v >= self.n {
            return Err(GraphError::EdgeOutOfRange(u, v, self.n));
        }
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(())
    }

    fn rebuild_edge_list(&mut self) {
        self.edges.clear();
        for u in 0..self.n {
            let mut m = self.adj[u] & !low_mask(u + 1);
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                self.edges.push((u, v));
                m &= m - 1;
            }
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::new();
        for u in 0..n {
            for v in u + 1..n {
                edges.push((u, v));
            }
        }
        Graph::from_edges(n, &edges).expect("complete graph within vertex cap")
    }

    /// Cycle C_n on n >= 3 vertices.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).expect("cycle within vertex cap")
    }

    /// Path with `k` edges (k + 1 vertices).
    pub fn path(k: usize) -> Self {
        let edges: Vec<_> = (0..k).map(|i| (i, i + 1)).collect();
        Graph::from_edges(k + 1, &edges).expect("path within vertex cap")
    }

    /// Star K_{1,k}: centre 0 joined to k leaves.
    pub fn star(k: usize) -> Self {
        let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
        Graph::from_edges(k + 1, &edges).expect("star within vertex cap")
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] & (1 << v) != 0
    }

    /// Neighbourhood of `v` as a bitmask.
    pub fn neighbors(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Edges in canonical order; `EdgeId(i)` refers to `edges()[i]`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<EdgeId> {
        let key = (u.min(v), u.max(v));
        self.edges.binary_search(&key).ok().map(EdgeId)
    }

    pub fn endpoints(&self, e: EdgeId) -> (usize, usize) {
        self.edges[e.0]
    }

    /// Mask of vertices with degree >= 1.
    pub fn support(&self) -> u64 {
        let mut m = 0u64;
        for v in 0..self.n {
            if self.adj[v] != 0 {
                m |= 1 << v;
            }
        }
        m
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// Adds the edge, rebuilding the canonical edge list.
    pub fn with_edge(&self, u: usize, v: usize) -> Result<Self, GraphError> {
        let mut g = self.clone();
        g.insert_edge(u, v)?;
        g.rebuild_edge_list();
        Ok(g)
    }

    /// Induced subgraph on the vertices of `mask`, relabelled to `0..k` in
    /// increasing order. Returns the subgraph and the map new -> old.
    pub fn induced(&self, mask: u64) -> (Graph, Vec<usize>) {
        let verts: Vec<usize> = (0..self.n).filter(|&v| mask & (1 << v) != 0).collect();
        let mut pos = [usize::MAX; MAX_VERTICES];
        for (i, &v) in verts.iter().enumerate() {
            pos[v] = i;
        }
        let mut edges = Vec::new();
        for &(u, v) in &self.edges {
            if mask & (1 << u) != 0 && mask & (1 << v) != 0 {
                edges.push((pos[u], pos[v]));
            }
        }
        let g = Graph::from_edges(verts.len(), &edges).expect("induced subgraph is valid");
        (g, verts)
    }

    /// Graph spanned by an edge subset (bitmask over `EdgeId`s), restricted to
    /// the incident vertices. Returns the graph and the map new -> old.
    pub fn edge_subgraph(&self, edge_mask: &[u64]) -> (Graph, Vec<usize>) {
        let mut vmask = 0u64;
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if edge_mask[i / 64] & (1 << (i % 64)) != 0 {
                vmask |= (1 << u) | (1 << v);
            }
        }
        let verts: Vec<usize> = (0..self.n).filter(|&v| vmask & (1 << v) != 0).collect();
        let mut pos = [usize::MAX; MAX_VERTICES];
        for (i, &v) in verts.iter().enumerate() {
            pos[v] = i;
        }
        let mut edges = Vec::new();
        for (i, &(u, v)) in self.edges.iter().enumerate() {
            if edge_mask[i / 64] & (1 << (i % 64)) != 0 {
                edges.push((pos[u], pos[v]));
            }
        }
        let g = Graph::from_edges(verts.len(), &edges).expect("edge subgraph is valid");
        (g, verts)
    }

    /// Relabels vertices by `perm` (old -> new), which must be a permutation
    /// of `0..n`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        let edges: Vec<_> = self.edges.iter().map(|&(u, v)| (perm[u], perm[v])).collect();
        Graph::from_edges(self.n, &edges).expect("relabelling preserves validity")
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0u64;
            let mut m = frontier;
            while m != 0 {
                let v = m.trailing_zeros() as usize;
                next |= self.adj[v];
                m &= m - 1;
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen.count_ones() as usize == self.n
    }

    pub fn contains_cycle(&self) -> bool {
        // A forest has e = v - c where c counts connected components.
        let mut seen = 0u64;
        let mut components = 0usize;
        for start in 0..self.n {
            if seen & (1 << start) != 0 {
                continue;
            }
            components += 1;
            let mut comp = 1u64 << start;
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0u64;
                let mut m = frontier;
                while m != 0 {
                    let v = m.trailing_zeros() as usize;
                    next |= self.adj[v];
                    m &= m - 1;
                }
                frontier = next & !comp;
                comp |= next;
            }
            seen |= comp;
        }
        self.edges.len() > self.n - components
    }
}

/// Injective vertex mapping from a pattern into a host graph, taking edges to
/// edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    /// `map[i]` is the host vertex hosting pattern vertex `i`.
    pub map: Vec<usize>,
}

impl Embedding {
    /// Host edge ids covered by the pattern's edges.
    pub fn edge_image(&self, pattern: &Graph, host: &Graph) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = pattern
            .edges()
            .iter()
            .map(|&(u, v)| {
                host.edge_id(self.map[u], self.map[v])
                    .expect("embedding maps edges to edges")
            })
            .collect();
        out.sort_unstable();
        out
    }
}

/// Mask with the lowest `n` bits set (n <= 64).
pub fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Visit order for backtracking: vertices of positive degree first, each
/// adjacent to an earlier one when possible, then isolated vertices.
fn search_order(g: &Graph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut order = Vec::with_capacity(n);
    let mut placed = 0u64;
    let by_degree = |placed: u64, g: &Graph| -> Option<usize> {
        (0..n)
            .filter(|&v| placed & (1 << v) == 0 && g.degree(v) > 0)
            .max_by_key(|&v| (g.neighbors(v) & placed).count_ones())
    };
    while let Some(v) = by_degree(placed, g) {
        order.push(v);
        placed |= 1 << v;
    }
    for v in 0..n {
        if placed & (1 << v) == 0 {
            order.push(v);
        }
    }
    order
}

fn extend_embeddings<F: FnMut(&[usize]) -> bool>(
    pattern: &Graph,
    host: &Graph,
    order: &[usize],
    map: &mut [usize],
    used: u64,
    depth: usize,
    emit: &mut F,
) -> bool {
    if depth == order.len() {
        return emit(map);
    }
    let pv = order[depth];
    // Candidates must be adjacent to the images of all earlier neighbours.
    let mut cand = !used & low_mask(host.vertex_count());
    for &pu in &order[..depth] {
        if pattern.has_edge(pv, pu) {
            cand &= host.neighbors(map[pu]);
        }
    }
    while cand != 0 {
        let hv = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        map[pv] = hv;
        if !extend_embeddings(pattern, host, order, map, used | (1 << hv), depth + 1, emit) {
            return false;
        }
    }
    true
}

/// Runs `emit` for every injective homomorphism from `pattern` into `host`.
/// `emit` returns false to stop the search early.
pub fn for_each_injective_hom<F: FnMut(&[usize]) -> bool>(pattern: &Graph, host: &Graph, mut emit: F) {
    if pattern.vertex_count() > host.vertex_count() {
        return;
    }
    let order = search_order(pattern);
    let mut map = vec![usize::MAX; pattern.vertex_count()];
    extend_embeddings(pattern, host, &order, &mut map, 0, 0, &mut emit);
}

/// One representative embedding per distinct edge-subset copy of `pattern`
/// in `host`. The count equals (#injective homomorphisms) / |Aut(pattern)|
/// when `pattern` has no isolated vertices.
pub fn enumerate_copies(pattern: &Graph, host: &Graph) -> Vec<Embedding> {
    let mut seen: HashMap<Vec<EdgeId>, Embedding> = HashMap::new();
    for_each_injective_hom(pattern, host, |map| {
        let emb = Embedding { map: map.to_vec() };
        let key = emb.edge_image(pattern, host);
        seen.entry(key).or_insert(emb);
        true
    });
    let mut out: Vec<(Vec<EdgeId>, Embedding)> = seen.into_iter().collect();
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out.into_iter().map(|(_, e)| e).collect()
}

/// Whether an isomorphism `a -> b` exists.
pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut da: Vec<_> = (0..a.vertex_count()).map(|v| a.degree(v)).collect();
    let mut db: Vec<_> = (0..b.vertex_count()).map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    let mut found = false;
    for_each_injective_hom(a, b, |map| {
        // An edge-count-preserving injective hom on equal-sized graphs is an
        // isomorphism exactly when non-edges also map to non-edges.
        for u in 0..a.vertex_count() {
            for v in u + 1..a.vertex_count() {
                if !a.has_edge(u, v) && b.has_edge(map[u], map[v]) {
                    return true;
                }
            }
        }
        found = true;
        false
    });
    found
}

/// All automorphisms of `g`, as vertex permutations.
pub fn automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_injective_hom(g, g, |map| {
        let ok = (0..g.vertex_count()).all(|u| {
            (u + 1..g.vertex_count()).all(|v| g.has_edge(u, v) == g.has_edge(map[u], map[v]))
        });
        if ok {
            out.push(map.to_vec());
        }
        true
    });
    out
}

/// Automorphisms fixing every edge setwise (the group Aut_e).
pub fn edge_fixing_automorphisms(g: &Graph) -> Vec<Vec<usize>> {
    automorphisms(g)
        .into_iter()
        .filter(|perm| {
            g.edges().iter().all(|&(u, v)| {
                let (a, b) = (perm[u].min(perm[v]), perm[u].max(perm[v]));
                (a, b) == (u, v)
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_edge_order() {
        let g = Graph::from_edges(4, &[(2, 3), (0, 3), (0, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 3), (2, 3)]);
        assert_eq!(g.edge_id(3, 0), Some(EdgeId(1)));
        assert_eq!(g.edge_id(1, 2), None);
    }

    #[test]
    fn rejects_loops_and_range() {
        assert_eq!(Graph::from_edges(3, &[(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(
            Graph::from_edges(3, &[(0, 3)]),
            Err(GraphError::EdgeOutOfRange(0, 3, 3))
        );
        assert!(Graph::empty(65).is_err());
    }

    #[test]
    fn triangle_copies_in_k4() {
        let copies = enumerate_copies(&Graph::complete(3), &Graph::complete(4));
        assert_eq!(copies.len(), 4);
    }

    #[test]
    fn edge_copies_in_k3() {
        let copies = enumerate_copies(&Graph::complete(2), &Graph::complete(3));
        assert_eq!(copies.len(), 3);
    }

    #[test]
    fn p3_copies_in_c5() {
        let copies = enumerate_copies(&Graph::path(3), &Graph::cycle(5));
        assert_eq!(copies.len(), 5);
    }

    #[test]
    fn no_copies_gives_empty_list() {
        let copies = enumerate_copies(&Graph::complete(3), &Graph::path(3));
        assert!(copies.is_empty());
    }

    #[test]
    fn copy_count_is_isomorphism_invariant() {
        let host = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]).unwrap();
        let perm = vec![3, 5, 0, 1, 4, 2];
        let relabelled = host.relabel(&perm);
        for pattern in [Graph::complete(3), Graph::path(2), Graph::path(3)] {
            assert_eq!(
                enumerate_copies(&pattern, &host).len(),
                enumerate_copies(&pattern, &relabelled).len()
            );
        }
    }

    #[test]
    fn iso_and_automorphisms() {
        let c4 = Graph::cycle(4);
        let c4b = Graph::from_edges(4, &[(0, 2), (2, 1), (1, 3), (3, 0)]).unwrap();
        assert!(is_isomorphic(&c4, &c4b));
        assert!(!is_isomorphic(&c4, &Graph::path(3)));
        assert_eq!(automorphisms(&c4).len(), 8);
        assert_eq!(automorphisms(&Graph::complete(3)).len(), 6);
        assert_eq!(edge_fixing_automorphisms(&Graph::complete(3)).len(), 1);
        assert_eq!(edge_fixing_automorphisms(&Graph::complete(2)).len(), 2);
    }

    #[test]
    fn cycle_detection() {
        assert!(!Graph::path(4).contains_cycle());
        assert!(Graph::cycle(5).contains_cycle());
        let forest = Graph::from_edges(6, &[(0, 1), (1, 2), (3, 4)]).unwrap();
        assert!(!forest.contains_cycle());
    }
}
