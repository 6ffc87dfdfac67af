//! Exhaustive enumeration of graphs up to isomorphism on few vertices, via
//! one-vertex augmentation with a minimum-permutation canonical form.

use std::collections::HashSet;

use thiserror::Error;

use crate::graph::Graph;

/// Enumeration is meant for exhaustive oracle sweeps; beyond 8 vertices the
/// counts (and the 8!-permutation canonicalization) are out of scope.
pub const MAX_ENUM_VERTICES: usize = 8;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum EnumError {
    #[error("enumeration supports at most {MAX_ENUM_VERTICES} vertices, got {0}")]
    TooManyVertices(usize),
    #[error("cannot enumerate graphs on zero vertices")]
    ZeroVertices,
}

fn for_each_permutation<F: FnMut(&[usize])>(n: usize, mut visit: F) {
    // Heap's algorithm.
    let mut perm: Vec<usize> = (0..n).collect();
    let mut c = vec![0usize; n];
    visit(&perm);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            visit(&perm);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// Minimum over all vertex relabellings of the upper-triangle adjacency
/// bitstring (lex pair order, bit 0 = pair (0,1)). Equal codes characterize
/// isomorphic graphs at a fixed vertex count.
pub fn canonical_code(g: &Graph) -> u64 {
    let n = g.vertex_count();
    assert!(n <= MAX_ENUM_VERTICES, "canonical_code limited to {MAX_ENUM_VERTICES} vertices");
    let mut best = u64::MAX;
    for_each_permutation(n, |perm| {
        let mut code = 0u64;
        let mut bit = 0u32;
        for i in 0..n {
            for j in i + 1..n {
                if g.has_edge(perm[i], perm[j]) {
                    code |= 1u64 << bit;
                }
                bit += 1;
            }
        }
        if code < best {
            best = code;
        }
    });
    best
}

fn graph_from_code(n: usize, code: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0u32;
    for i in 0..n {
        for j in i + 1..n {
            if code & (1u64 << bit) != 0 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, &edges).expect("code within range")
}

/// All graphs on exactly `n` vertices up to isomorphism, in canonical-code
/// order (so the output is deterministic).
pub fn all_graphs(n: usize) -> Result<Vec<Graph>, EnumError> {
    if n == 0 {
        return Err(EnumError::ZeroVertices);
    }
    if n > MAX_ENUM_VERTICES {
        return Err(EnumError::TooManyVertices(n));
    }
    let mut codes: Vec<u64> = vec![0]; // the 1-vertex graph
    for k in 2..=n {
        let mut next: HashSet<u64> = HashSet::new();
        for &code in &codes {
            let parent = graph_from_code(k - 1, code);
            // Attach vertex k-1 to every subset of the existing vertices.
            for subset in 0u64..(1u64 << (k - 1)) {
                let mut edges: Vec<(usize, usize)> = parent.edges().to_vec();
                for v in 0..k - 1 {
                    if subset & (1u64 << v) != 0 {
                        edges.push((v, k - 1));
                    }
                }
                let child = Graph::from_edges(k, &edges).expect("edges within range");
                next.insert(canonical_code(&child));
            }
        }
        codes = next.into_iter().collect();
        codes.sort_unstable();
    }
    Ok(codes.into_iter().map(|c| graph_from_code(n, c)).collect())
}

/// All graphs on 1..=n vertices up to isomorphism.
pub fn all_graphs_up_to(n: usize) -> Result<Vec<Graph>, EnumError> {
    let mut out = Vec::new();
    for k in 1..=n {
        out.extend(all_graphs(k)?);
    }
    Ok(out)
}
