//! Exact first and second moments of typed copy counts X_I in the typed
//! random model, and the finite-n upper-tail quantities built from them.
//!
//! Exact rational values are available whenever the relevant weight sums are
//! integers (so that p^w stays rational); floating-point companions cover the
//! general case.

use std::collections::{BTreeMap, BTreeSet};

use num::Zero;
use thiserror::Error;

use crate::balance::WeightFunction;
use crate::graph::{edge_fixing_automorphisms, EdgeId};
use crate::ratio::{falling, int, pow_i64, pow_rational, to_f64, Rational};
use crate::typed::TypedGraph;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum MomentsError {
    #[error("subgraph has no edges")]
    EmptySubgraph,
    #[error("weight sum {0} is not an integer; exact rational moments unavailable")]
    NonIntegralExponent(String),
    #[error("variance enumeration infeasible for {0} vertices (limit 6)")]
    InfeasibleSize(usize),
    #[error("weight function has {found} entries for a pattern with {expected} edges")]
    WeightMismatch { expected: usize, found: usize },
    #[error("expectation is zero; tail ratio undefined")]
    ZeroExpectation,
}

fn check(i: &TypedGraph, w: &WeightFunction) -> Result<(), MomentsError> {
    if i.graph().edge_count() == 0 {
        return Err(MomentsError::EmptySubgraph);
    }
    if w.len() != i.pattern().edge_count() {
        return Err(MomentsError::WeightMismatch {
            expected: i.pattern().edge_count(),
            found: w.len(),
        });
    }
    Ok(())
}

fn rational_power(p: &Rational, exp: &Rational) -> Result<Rational, MomentsError> {
    pow_rational(p, exp).ok_or_else(|| MomentsError::NonIntegralExponent(crate::ratio::format_ratio(exp)))
}

/// E[X_I] = n(n-1)...(n-v_I+1) p^{w_I} / (|Aut_e(I)| e_H^{e_I}), where
/// Aut_e(I) fixes every edge of I setwise.
pub fn expected_typed_copies(
    i: &TypedGraph,
    n: u64,
    p: &Rational,
    w: &WeightFunction,
) -> Result<Rational, MomentsError> {
    check(i, w)?;
    let v_i = i.graph().vertex_count() as u64;
    let e_i = i.graph().edge_count() as i64;
    let e_h = int(i.pattern().edge_count() as i64);
    let w_i: Rational = i.typemap().iter().map(|t| w.weight(*t).clone()).sum();
    let aut_e = edge_fixing_automorphisms(i.graph()).len() as i64;
    Ok(falling(n, v_i) * rational_power(p, &w_i)? / (int(aut_e) * pow_i64(&e_h, e_i)))
}

pub fn expected_typed_copies_f64(i: &TypedGraph, n: u64, p: f64, w: &WeightFunction) -> Result<f64, MomentsError> {
    check(i, w)?;
    let v_i = i.graph().vertex_count() as u64;
    let e_i = i.graph().edge_count() as i32;
    let e_h = i.pattern().edge_count() as f64;
    let w_i: f64 = i.typemap().iter().map(|t| to_f64(w.weight(*t))).sum();
    let aut_e = edge_fixing_automorphisms(i.graph()).len() as f64;
    Ok(to_f64(&falling(n, v_i)) * p.powf(w_i) / (aut_e * e_h.powi(e_i)))
}

/// A second placement of I overlapping the canonical one, recorded as typed
/// edges over vertices `0..v_I` (shared) and `v_I..` (fresh, canonically
/// relabelled in order of first use).
type PlacementKey = BTreeSet<((usize, usize), EdgeId)>;

fn overlap_placements(i: &TypedGraph) -> Vec<(PlacementKey, usize)> {
    let v = i.graph().vertex_count();
    let mut out: BTreeMap<PlacementKey, usize> = BTreeMap::new();
    // Assign images for I's vertices one at a time; candidate images are the
    // canonical placement's vertices or the next unused fresh slot.
    let mut map = vec![usize::MAX; v];
    fn rec(
        i: &TypedGraph,
        map: &mut Vec<usize>,
        depth: usize,
        used: u64,
        fresh_used: usize,
        out: &mut BTreeMap<PlacementKey, usize>,
    ) {
        let v = i.graph().vertex_count();
        if depth == v {
            let mut key = PlacementKey::new();
            for (k, &(a, b)) in i.graph().edges().iter().enumerate() {
                let (x, y) = (map[a].min(map[b]), map[a].max(map[b]));
                key.insert(((x, y), i.typemap()[k]));
            }
            // Keep only placements sharing at least one edge slot with the
            // canonical placement (both endpoints below v).
            let overlaps = key.iter().any(|&((x, y), _)| {
                y < v && i.graph().has_edge(x, y)
            });
            if overlaps {
                out.entry(key).or_insert(fresh_used);
            }
            return;
        }
        for cand in 0..v + fresh_used + 1 {
            if used & (1 << cand) != 0 {
                continue;
            }
            if cand > v + fresh_used {
                break;
            }
            let is_fresh = cand >= v;
            if is_fresh && cand != v + fresh_used {
                continue; // fresh slots used in canonical order
            }
            map[depth] = cand;
            rec(i, map, depth + 1, used | (1 << cand), fresh_used + is_fresh as usize, out);
        }
        map[depth] = usize::MAX;
    }
    rec(i, &mut map, 0, 0, 0, &mut out);
    out.into_iter().collect()
}

/// Var[X_I], computed by exact enumeration of overlapping placement pairs.
/// Feasible for v_I <= 6.
pub fn exact_variance_typed_copies(
    i: &TypedGraph,
    n: u64,
    p: &Rational,
    w: &WeightFunction,
) -> Result<Rational, MomentsError> {
    check(i, w)?;
    let v = i.graph().vertex_count();
    if v > 6 {
        return Err(MomentsError::InfeasibleSize(v));
    }
    let e_i = i.graph().edge_count() as i64;
    let e_h = int(i.pattern().edge_count() as i64);
    let w_i: Rational = i.typemap().iter().map(|t| w.weight(*t).clone()).sum();
    let aut_e = edge_fixing_automorphisms(i.graph()).len() as i64;

    // Canonical placement: I on vertices 0..v with its own types.
    let canonical: BTreeMap<(usize, usize), EdgeId> = i
        .graph()
        .edges()
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| ((a, b), i.typemap()[k]))
        .collect();

    // Per-pattern-edge weights for shared-slot accounting.
    let mut cov_sum = Rational::zero();
    for (key, fresh) in overlap_placements(i) {
        let mut shared_w = Rational::zero();
        let mut shared_e = 0i64;
        let mut compatible = true;
        for &((x, y), t) in &key {
            if let Some(&t0) = canonical.get(&(x, y)) {
                if t0 == t {
                    shared_w += w.weight(t).clone();
                    shared_e += 1;
                } else {
                    compatible = false;
                }
            }
        }
        let multiplier = falling(n.saturating_sub(v as u64), fresh as u64);
        let product = rational_power(p, &(w_i.clone() + w_i.clone()))?
            / pow_i64(&e_h, 2 * e_i);
        let joint = if compatible {
            rational_power(p, &(int(2) * w_i.clone() - shared_w))?
                / pow_i64(&e_h, 2 * e_i - shared_e)
        } else {
            Rational::zero()
        };
        cov_sum += multiplier * (joint - product);
    }
    let placements = falling(n, v as u64) / int(aut_e);
    Ok(placements * cov_sum)
}

/// Finite-n upper-tail data for X_I: the exact Chebyshev ratio Var/E^2 and
/// the minimized product n^{v_I'} p^{w_I'} with its minimizing subgraph.
#[derive(Debug, Clone, PartialEq)]
pub struct UpperTailReport {
    pub expectation: Rational,
    pub variance: Rational,
    /// Var/E^2, an upper bound on Pr(X_I >= 2 E[X_I]).
    pub chebyshev: Rational,
    /// Pattern edge ids of the minimizing nonempty I' subseteq I.
    pub min_subgraph: Vec<EdgeId>,
    /// min over nonempty I' of n^{v_I'} p^{w_I'}.
    pub min_value: f64,
}

pub fn upper_tail_bound(
    i: &TypedGraph,
    n: u64,
    p: &Rational,
    w: &WeightFunction,
) -> Result<UpperTailReport, MomentsError> {
    check(i, w)?;
    let expectation = expected_typed_copies(i, n, p, w)?;
    if expectation.is_zero() {
        return Err(MomentsError::ZeroExpectation);
    }
    let variance = exact_variance_typed_copies(i, n, p, w)?;
    let chebyshev = variance.clone() / (expectation.clone() * expectation.clone());

    // Minimize n^{v} p^{w} over nonempty induced subgraphs of I (adding edges
    // at a fixed vertex set only lowers the product, so induced ones attain
    // the minimum).
    let g = i.graph();
    let p_f = to_f64(p);
    let mut best: Option<(f64, Vec<EdgeId>)> = None;
    for mask in 1u64..(1 << g.vertex_count()) {
        let mut edge_ids = Vec::new();
        let mut active = 0u64;
        let mut w_sum = 0.0;
        for (k, &(a, b)) in g.edges().iter().enumerate() {
            if mask & (1 << a) != 0 && mask & (1 << b) != 0 {
                edge_ids.push(i.typemap()[k]);
                active |= (1 << a) | (1 << b);
                w_sum += to_f64(w.weight(i.typemap()[k]));
            }
        }
        if edge_ids.is_empty() {
            continue;
        }
        let value = (n as f64).powi(active.count_ones() as i32) * p_f.powf(w_sum);
        if best.as_ref().map_or(true, |(b, _)| value < *b) {
            best = Some((value, edge_ids));
        }
    }
    let (min_value, mut min_subgraph) = best.expect("I has at least one edge");
    min_subgraph.sort_unstable();
    min_subgraph.dedup();
    Ok(UpperTailReport { expectation, variance, chebyshev, min_subgraph, min_value })
}
