//! Graphs whose edges carry types drawn from the edge set of a fixed pattern
//! graph H, typomorphism testing, and typed copy counting.

use std::collections::HashSet;

use thiserror::Error;

use crate::graph::{for_each_injective_hom, EdgeId, Graph};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum TypedError {
    #[error("type map has {found} entries for {expected} edges")]
    TypeMapLength { expected: usize, found: usize },
    #[error("edge type {0} out of range for a pattern with {1} edges")]
    TypeOutOfRange(usize, usize),
    #[error("operands have different patterns")]
    PatternMismatch,
    #[error("subgraph is not contained in the pattern")]
    NotASubgraph,
    #[error("subgraph has no edges")]
    EmptySubgraph,
}

/// A graph together with a total map from its edges to the edges of a fixed
/// pattern graph. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedGraph {
    graph: Graph,
    pattern: Graph,
    /// `typemap[i]` is the pattern edge typing `graph.edges()[i]`.
    typemap: Vec<EdgeId>,
}

impl TypedGraph {
    pub fn new(graph: Graph, pattern: Graph, typemap: Vec<EdgeId>) -> Result<Self, TypedError> {
        if typemap.len() != graph.edge_count() {
            return Err(TypedError::TypeMapLength {
                expected: graph.edge_count(),
                found: typemap.len(),
            });
        }
        for &t in &typemap {
            if t.0 >= pattern.edge_count() {
                return Err(TypedError::TypeOutOfRange(t.0, pattern.edge_count()));
            }
        }
        Ok(TypedGraph { graph, pattern, typemap })
    }

    /// The pattern viewed as a typed graph over itself, each edge carrying its
    /// own id as its type.
    pub fn pattern_as_typed(pattern: &Graph) -> Self {
        let typemap = (0..pattern.edge_count()).map(EdgeId).collect();
        TypedGraph {
            graph: pattern.clone(),
            pattern: pattern.clone(),
            typemap,
        }
    }

    /// The subgraph of the pattern spanned by `edge_ids`, restricted to its
    /// incident vertices and carrying inclusion types.
    pub fn pattern_subgraph(pattern: &Graph, edge_ids: &[EdgeId]) -> Result<Self, TypedError> {
        if edge_ids.is_empty() {
            return Err(TypedError::EmptySubgraph);
        }
        let mut ids: Vec<EdgeId> = edge_ids.to_vec();
        ids.sort_unstable();
        ids.dedup();
        for &e in &ids {
            if e.0 >= pattern.edge_count() {
                return Err(TypedError::NotASubgraph);
            }
        }
        let words = (pattern.edge_count() + 63) / 64;
        let mut mask = vec![0u64; words.max(1)];
        for &e in &ids {
            mask[e.0 / 64] |= 1 << (e.0 % 64);
        }
        let (graph, vmap) = pattern.edge_subgraph(&mask);
        // Recover each relabelled edge's original id.
        let typemap = graph
            .edges()
            .iter()
            .map(|&(u, v)| pattern.edge_id(vmap[u], vmap[v]).expect("edge exists in pattern"))
            .collect();
        Ok(TypedGraph { graph, pattern: pattern.clone(), typemap })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn pattern(&self) -> &Graph {
        &self.pattern
    }

    pub fn typemap(&self) -> &[EdgeId] {
        &self.typemap
    }

    pub fn edge_type(&self, e: EdgeId) -> EdgeId {
        self.typemap[e.0]
    }

    /// Type of the edge (u, v), if present.
    pub fn type_of(&self, u: usize, v: usize) -> Option<EdgeId> {
        self.graph.edge_id(u, v).map(|e| self.typemap[e.0])
    }

    pub fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }
}

/// Whether a type-preserving isomorphism between `a` and `b` exists.
/// The operands must share the same pattern.
pub fn is_typomorphic(a: &TypedGraph, b: &TypedGraph) -> Result<bool, TypedError> {
    if a.pattern != b.pattern {
        return Err(TypedError::PatternMismatch);
    }
    if a.graph.vertex_count() != b.graph.vertex_count() || a.graph.edge_count() != b.graph.edge_count() {
        return Ok(false);
    }
    // Cheap reject: the multiset of edge types must agree.
    let mut ta = a.typemap.clone();
    let mut tb = b.typemap.clone();
    ta.sort_unstable();
    tb.sort_unstable();
    if ta != tb {
        return Ok(false);
    }
    let mut found = false;
    for_each_injective_hom(&a.graph, &b.graph, |map| {
        for (i, &(u, v)) in a.graph.edges().iter().enumerate() {
            match b.type_of(map[u], map[v]) {
                Some(t) if t == a.typemap[i] => {}
                _ => return true,
            }
        }
        // Edge counts agree and all edges map to edges, so this is an
        // isomorphism; types were checked edge by edge.
        found = true;
        false
    });
    Ok(found)
}

/// Counts sub-typed-graphs of `g` typomorphic to `i`, where `i` carries
/// inclusion types from the shared pattern (the statistic X_I).
pub fn count_typed_copies(i: &TypedGraph, g: &TypedGraph) -> Result<usize, TypedError> {
    if i.pattern != g.pattern {
        return Err(TypedError::PatternMismatch);
    }
    if i.graph.edge_count() == 0 {
        return Err(TypedError::EmptySubgraph);
    }
    let mut seen: HashSet<Vec<EdgeId>> = HashSet::new();
    for_each_injective_hom(&i.graph, &g.graph, |map| {
        let mut image = Vec::with_capacity(i.graph.edge_count());
        for (k, &(u, v)) in i.graph.edges().iter().enumerate() {
            match g.graph.edge_id(map[u], map[v]) {
                Some(e) if g.typemap[e.0] == i.typemap[k] => image.push(e),
                _ => return true,
            }
        }
        image.sort_unstable();
        seen.insert(image);
        true
    });
    Ok(seen.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Graph {
        Graph::complete(3)
    }

    #[test]
    fn typed_construction_validates() {
        let g = k3();
        assert!(TypedGraph::new(g.clone(), g.clone(), vec![EdgeId(0), EdgeId(1), EdgeId(2)]).is_ok());
        assert!(matches!(
            TypedGraph::new(g.clone(), g.clone(), vec![EdgeId(0)]),
            Err(TypedError::TypeMapLength { .. })
        ));
        assert!(matches!(
            TypedGraph::new(g.clone(), g.clone(), vec![EdgeId(0), EdgeId(1), EdgeId(7)]),
            Err(TypedError::TypeOutOfRange(7, 3))
        ));
    }

    #[test]
    fn typomorphism_identity_and_type_multiset() {
        let h = k3();
        let a = TypedGraph::pattern_as_typed(&h);
        assert_eq!(is_typomorphic(&a, &a), Ok(true));

        let b = TypedGraph::new(h.clone(), h.clone(), vec![EdgeId(0), EdgeId(0), EdgeId(1)]).unwrap();
        assert_eq!(is_typomorphic(&a, &b), Ok(false));
    }

    #[test]
    fn typomorphism_up_to_pattern_automorphism() {
        let h = k3();
        // Relabelled triangle typed via the automorphism of K3 swapping 0 and 1:
        // edges (0,1)->(0,1), (0,2)->(1,2), (1,2)->(0,2).
        let a = TypedGraph::pattern_as_typed(&h);
        let b = TypedGraph::new(h.clone(), h.clone(), vec![EdgeId(0), EdgeId(2), EdgeId(1)]).unwrap();
        assert_eq!(is_typomorphic(&a, &b), Ok(true));
    }

    #[test]
    fn typomorphism_pattern_mismatch_errors() {
        let a = TypedGraph::pattern_as_typed(&k3());
        let b = TypedGraph::pattern_as_typed(&Graph::complete(4));
        assert_eq!(is_typomorphic(&a, &b), Err(TypedError::PatternMismatch));
    }

    #[test]
    fn typed_copy_counts() {
        let h = k3();
        // G = one triangle with three distinct types.
        let g = TypedGraph::pattern_as_typed(&h);
        let i = TypedGraph::pattern_subgraph(&h, &[EdgeId(0), EdgeId(1), EdgeId(2)]).unwrap();
        assert_eq!(count_typed_copies(&i, &g), Ok(1));

        // Single edge of type e0: G has exactly one edge of that type.
        let ie = TypedGraph::pattern_subgraph(&h, &[EdgeId(0)]).unwrap();
        assert_eq!(count_typed_copies(&ie, &g), Ok(1));

        // K4 all edges typed e0 contains no typed K3 (distinct types needed)
        // but six typed single edges of type e0.
        let k4 = Graph::complete(4);
        let g2 = TypedGraph::new(k4, h.clone(), vec![EdgeId(0); 6]).unwrap();
        assert_eq!(count_typed_copies(&i, &g2), Ok(0));
        assert_eq!(count_typed_copies(&ie, &g2), Ok(6));
    }

    #[test]
    fn typed_copies_bounded_by_untyped() {
        let h = k3();
        let k5 = Graph::complete(5);
        let types: Vec<EdgeId> = (0..10).map(|k| EdgeId(k % 3)).collect();
        let g = TypedGraph::new(k5.clone(), h.clone(), types).unwrap();
        let i = TypedGraph::pattern_subgraph(&h, &[EdgeId(0), EdgeId(1), EdgeId(2)]).unwrap();
        let typed = count_typed_copies(&i, &g).unwrap();
        let untyped = crate::graph::enumerate_copies(&h, &k5).len();
        assert!(typed <= untyped);
    }
}
