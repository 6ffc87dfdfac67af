//! The family statistic |H(G)| for a fixed set of pattern copies in K_n,
//! and the exponential bound on Pr(|H(G)| = 0) via the overlap quantities
//! mu, Delta, and delta.

use std::collections::HashMap;

use thiserror::Error;

use crate::balance::WeightFunction;
use crate::graph::{automorphisms, EdgeId, Embedding, Graph};
use crate::ratio::to_f64;
use crate::typed::TypedGraph;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum SuenError {
    #[error("family of copies is empty")]
    EmptyFamily,
    #[error("copy uses vertex {0}, outside the host's range {1}")]
    VertexRange(usize, usize),
    #[error("weight function has {found} entries for a pattern with {expected} edges")]
    WeightMismatch { expected: usize, found: usize },
}

/// Overlap statistics of a copy family and the resulting bound
/// exp(-min(mu^2/8Delta, mu/6delta, mu/2)) on the probability that no family
/// member survives. With no overlapping pairs the Delta term is vacuous and
/// drops out of the minimum.
#[derive(Debug, Clone, PartialEq)]
pub struct SuenReport {
    /// Expected number of surviving family members.
    pub mu: f64,
    /// Sum of joint survival probabilities over unordered overlapping pairs.
    pub big_delta: f64,
    /// Max over members of the summed survival expectations of its
    /// edge-overlapping neighbours (itself included).
    pub small_delta: f64,
    pub bound: f64,
}

/// Distinct type assignments E(H) -> E(H) induced by automorphisms of H.
/// These are exactly the type functions making a copy of H typomorphic to H.
pub fn valid_type_maps(pattern: &Graph) -> Vec<Vec<EdgeId>> {
    let mut maps: Vec<Vec<EdgeId>> = automorphisms(pattern)
        .into_iter()
        .map(|perm| {
            pattern
                .edges()
                .iter()
                .map(|&(u, v)| pattern.edge_id(perm[u], perm[v]).expect("automorphism maps edges to edges"))
                .collect()
        })
        .collect();
    maps.sort();
    maps.dedup();
    maps
}

fn copy_slots(pattern: &Graph, emb: &Embedding) -> Vec<(usize, usize)> {
    pattern
        .edges()
        .iter()
        .map(|&(u, v)| {
            let (a, b) = (emb.map[u], emb.map[v]);
            (a.min(b), a.max(b))
        })
        .collect()
}

/// The set H(G): members of `h_copies` whose edges all lie in `g` and whose
/// inherited types make them typomorphic to the pattern.
pub fn restrict_family(
    pattern: &Graph,
    h_copies: &[Embedding],
    g: &TypedGraph,
) -> Result<Vec<Embedding>, SuenError> {
    let n = g.graph().vertex_count();
    let type_maps = valid_type_maps(pattern);
    let mut out = Vec::new();
    for emb in h_copies {
        for &v in &emb.map {
            if v >= n {
                return Err(SuenError::VertexRange(v, n));
            }
        }
        let slots = copy_slots(pattern, emb);
        let types: Option<Vec<EdgeId>> = slots.iter().map(|&(a, b)| g.type_of(a, b)).collect();
        if let Some(types) = types {
            if type_maps.iter().any(|tm| tm == &types) {
                out.push(emb.clone());
            }
        }
    }
    Ok(out)
}

/// Convenience for Monte Carlo loops: whether H(G) is empty.
pub fn family_survives(pattern: &Graph, h_copies: &[Embedding], g: &TypedGraph) -> bool {
    let n = g.graph().vertex_count();
    let type_maps = valid_type_maps(pattern);
    h_copies.iter().any(|emb| {
        let slots = copy_slots(pattern, emb);
        if emb.map.iter().any(|&v| v >= n) {
            return false;
        }
        let types: Option<Vec<EdgeId>> = slots.iter().map(|&(a, b)| g.type_of(a, b)).collect();
        match types {
            Some(types) => type_maps.iter().any(|tm| tm == &types),
            None => false,
        }
    })
}

/// Computes mu, Delta, delta, and the exponential bound for the family.
pub fn suen_bound(
    pattern: &Graph,
    h_copies: &[Embedding],
    p: f64,
    w: &WeightFunction,
) -> Result<SuenReport, SuenError> {
    if h_copies.is_empty() {
        return Err(SuenError::EmptyFamily);
    }
    if w.len() != pattern.edge_count() {
        return Err(SuenError::WeightMismatch { expected: pattern.edge_count(), found: w.len() });
    }
    let e_h = pattern.edge_count();
    let w_h: f64 = w.weights().iter().map(to_f64).sum();
    let type_maps = valid_type_maps(pattern);
    // All copies are isomorphic to H, so E[1_C] is uniform across the family.
    let e1 = type_maps.len() as f64 * p.powf(w_h) / (e_h as f64).powi(e_h as i32);

    let slots: Vec<Vec<(usize, usize)>> = h_copies.iter().map(|e| copy_slots(pattern, e)).collect();
    let slot_index: Vec<HashMap<(usize, usize), usize>> = slots
        .iter()
        .map(|s| s.iter().enumerate().map(|(i, &xy)| (xy, i)).collect())
        .collect();

    let mu = h_copies.len() as f64 * e1;
    let mut big_delta = 0.0f64;
    let mut max_neighbours = 0usize;
    for a in 0..h_copies.len() {
        let mut neighbours = 0usize;
        for b in 0..h_copies.len() {
            let shared: Vec<(usize, usize)> = slots[a]
                .iter()
                .enumerate()
                .filter_map(|(ia, xy)| slot_index[b].get(xy).map(|&ib| (ia, ib)))
                .collect();
            if shared.is_empty() {
                continue;
            }
            neighbours += 1;
            if b <= a {
                continue; // Delta counts unordered distinct pairs once
            }
            let mut joint = 0.0f64;
            for ta in &type_maps {
                for tb in &type_maps {
                    let mut ok = true;
                    let mut shared_w = 0.0f64;
                    for &(ia, ib) in &shared {
                        if ta[ia] != tb[ib] {
                            ok = false;
                            break;
                        }
                        shared_w += to_f64(w.weight(ta[ia]));
                    }
                    if ok {
                        joint += p.powf(2.0 * w_h - shared_w)
                            / (e_h as f64).powi((2 * e_h - shared.len()) as i32);
                    }
                }
            }
            big_delta += joint;
        }
        max_neighbours = max_neighbours.max(neighbours);
    }
    let small_delta = max_neighbours as f64 * e1;

    let mut exponent = (mu / 2.0).min(mu / (6.0 * small_delta));
    if big_delta > 0.0 {
        exponent = exponent.min(mu * mu / (8.0 * big_delta));
    }
    Ok(SuenReport { mu, big_delta, small_delta, bound: (-exponent).exp() })
}
