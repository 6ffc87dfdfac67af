//! Weight functions on the edges of a pattern graph H that equalize the
//! weighted density defect of every edge, plus the per-edge tight subgraphs
//! they certify.
//!
//! For a weight function w and a subgraph I of H, the defect of I is
//! v_I - w_I / m2(H, F). H is (w, F)-balanced when for every edge e the
//! minimum defect over subgraphs containing e equals exactly 2 - 1/m2(F).

use std::collections::BTreeMap;

use num::Zero;
use thiserror::Error;

use crate::density::{m2, m2_asym, DensityError};
use crate::graph::{EdgeId, Graph};
use crate::ratio::{int, Rational};

#[derive(Debug, Error, PartialEq, Clone)]
pub enum BalanceError {
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error("weight {0} for edge {1} is below 1")]
    WeightBelowOne(String, usize),
    #[error("weight function has {found} entries for {expected} edges")]
    WeightCount { expected: usize, found: usize },
    #[error("edge id {0} out of range for {1} edges")]
    EdgeOutOfRange(usize, usize),
    #[error("solver failed to zero residual of edge {0}; this is a bug")]
    SolveFailed(usize),
}

/// Mapping E(H) -> [1, oo), indexed by canonical edge id.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFunction {
    weights: Vec<Rational>,
}

impl WeightFunction {
    pub fn new(weights: Vec<Rational>) -> Result<Self, BalanceError> {
        for (i, w) in weights.iter().enumerate() {
            if *w < int(1) {
                return Err(BalanceError::WeightBelowOne(crate::ratio::format_ratio(w), i));
            }
        }
        Ok(WeightFunction { weights })
    }

    pub fn uniform(edge_count: usize) -> Self {
        WeightFunction { weights: vec![int(1); edge_count] }
    }

    pub fn weight(&self, e: EdgeId) -> &Rational {
        &self.weights[e.0]
    }

    pub fn weights(&self) -> &[Rational] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Aggregate w_I over a set of pattern edges.
    pub fn total(&self, edges: &[EdgeId]) -> Rational {
        edges.iter().map(|e| self.weights[e.0].clone()).sum()
    }

    /// True when every weight is an integer, in which case p^{w_I} stays
    /// rational for rational p.
    pub fn is_integral(&self) -> bool {
        self.weights.iter().all(|w| w.denom() == &num::BigInt::from(1))
    }
}

/// A solved weight function with its evidence: zero residuals and one tight
/// subgraph per edge attaining the defect 2 - 1/m2(F).
#[derive(Debug, Clone, PartialEq)]
pub struct BalanceCertificate {
    pub weightfn: WeightFunction,
    pub residuals: BTreeMap<EdgeId, Rational>,
    pub tight_subgraphs: BTreeMap<EdgeId, Vec<EdgeId>>,
    pub m2_hf: Rational,
    pub m2_f: Rational,
}

fn check_inputs(h: &Graph, f: &Graph, w: &WeightFunction) -> Result<(Rational, Rational), BalanceError> {
    if w.len() != h.edge_count() {
        return Err(BalanceError::WeightCount { expected: h.edge_count(), found: w.len() });
    }
    let m2_h = m2(h)?.value;
    let m2_f = m2(f)?.value;
    if m2_h < m2_f {
        return Err(DensityError::OrderingViolation {
            m2_f1: crate::ratio::format_ratio(&m2_h),
            m2_f2: crate::ratio::format_ratio(&m2_f),
        }
        .into());
    }
    let m2_hf = m2_asym(h, f)?.value;
    Ok((m2_hf, m2_f))
}

/// Minimum defect v_I - w_I/m2hf over induced subgraphs I containing `e`,
/// with the minimizing edge set (ties broken by fewest edges, then
/// lexicographically smallest edge id list).
fn min_defect(h: &Graph, w: &WeightFunction, m2_hf: &Rational, e: EdgeId) -> (Rational, Vec<EdgeId>) {
    let (eu, ev) = h.endpoints(e);
    let others: Vec<usize> = (0..h.vertex_count())
        .filter(|&v| v != eu && v != ev && h.neighbors(v) != 0)
        .collect();
    let mut best: Option<(Rational, Vec<EdgeId>)> = None;
    for bits in 0u64..(1 << others.len()) {
        let mut mask = (1u64 << eu) | (1u64 << ev);
        let mut b = bits;
        while b != 0 {
            mask |= 1 << others[b.trailing_zeros() as usize];
            b &= b - 1;
        }
        let mut edge_ids = Vec::new();
        let mut active = 0u64;
        for (i, &(u, v)) in h.edges().iter().enumerate() {
            if mask & (1 << u) != 0 && mask & (1 << v) != 0 {
                edge_ids.push(EdgeId(i));
                active |= (1 << u) | (1 << v);
            }
        }
        let v_i = int(active.count_ones() as i64);
        let w_i = w.total(&edge_ids);
        let value = v_i - w_i / m2_hf.clone();
        let replace = match &best {
            None => true,
            Some((bv, bset)) => {
                value < *bv
                    || (value == *bv
                        && (edge_ids.len(), &edge_ids) < (bset.len(), &bset.clone()))
            }
        };
        if replace {
            best = Some((value, edge_ids));
        }
    }
    best.expect("subgraph {e} always exists")
}

/// r_e(w): the minimum defect over subgraphs containing e, shifted so that a
/// balanced edge reads exactly zero.
pub fn residual(h: &Graph, f: &Graph, w: &WeightFunction, e: EdgeId) -> Result<Rational, BalanceError> {
    if e.0 >= h.edge_count() {
        return Err(BalanceError::EdgeOutOfRange(e.0, h.edge_count()));
    }
    let (m2_hf, m2_f) = check_inputs(h, f, w)?;
    let (min, _) = min_defect(h, w, &m2_hf, e);
    Ok(min - int(2) + m2_f.recip())
}

/// True iff r_e(w) = 0 for every edge of H.
pub fn verify_balanced(h: &Graph, f: &Graph, w: &WeightFunction) -> Result<bool, BalanceError> {
    let (m2_hf, m2_f) = check_inputs(h, f, w)?;
    let target = int(2) - m2_f.recip();
    for i in 0..h.edge_count() {
        let (min, _) = min_defect(h, w, &m2_hf, EdgeId(i));
        if min != target {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Computes a weight function making H (w, F)-balanced, by a single greedy
/// sweep: each edge whose residual is positive has its weight raised by
/// m2(H,F) * r_e(w), the largest increase keeping every constraint through it
/// satisfied, which makes some subgraph through it tight. Tightness is
/// permanent, so one pass in edge id order suffices.
pub fn solve_balanced_weights(h: &Graph, f: &Graph) -> Result<BalanceCertificate, BalanceError> {
    let w0 = WeightFunction::uniform(h.edge_count());
    let (m2_hf, m2_f) = check_inputs(h, f, &w0)?;
    let target = int(2) - m2_f.recip();
    let mut weights = w0.weights().to_vec();
    for i in 0..h.edge_count() {
        let w = WeightFunction { weights: weights.clone() };
        let (min, _) = min_defect(h, &w, &m2_hf, EdgeId(i));
        let r = min - target.clone();
        if r > int(0) {
            weights[i] += m2_hf.clone() * r;
        }
    }
    let weightfn = WeightFunction::new(weights)?;
    let mut residuals = BTreeMap::new();
    let mut tight_subgraphs = BTreeMap::new();
    for i in 0..h.edge_count() {
        let (min, set) = min_defect(h, &weightfn, &m2_hf, EdgeId(i));
        let r = min - target.clone();
        if !r.is_zero() {
            return Err(BalanceError::SolveFailed(i));
        }
        residuals.insert(EdgeId(i), r);
        tight_subgraphs.insert(EdgeId(i), set);
    }
    Ok(BalanceCertificate { weightfn, residuals, tight_subgraphs, m2_hf, m2_f })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratio::ratio;

    fn pendant_k4() -> Graph {
        Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)]).unwrap()
    }

    #[test]
    fn residuals_at_uniform_weights() {
        let k3 = Graph::complete(3);
        let k4 = Graph::complete(4);
        for e in 0..3 {
            assert_eq!(residual(&k3, &k3, &WeightFunction::uniform(3), EdgeId(e)), Ok(int(0)));
        }
        for e in 0..6 {
            assert_eq!(residual(&k4, &k3, &WeightFunction::uniform(6), EdgeId(e)), Ok(int(0)));
        }
        // Pendant edge of K4+e against K3: minimum over I is the edge alone.
        let h = pendant_k4();
        assert_eq!(residual(&h, &k3, &WeightFunction::uniform(7), EdgeId(6)), Ok(ratio(1, 12)));
    }

    #[test]
    fn verify_balanced_examples() {
        let k3 = Graph::complete(3);
        assert_eq!(verify_balanced(&k3, &k3, &WeightFunction::uniform(3)), Ok(true));
        let w2 = WeightFunction::new(vec![int(2), int(2), int(2)]).unwrap();
        assert_eq!(verify_balanced(&k3, &k3, &w2), Ok(false));
        assert_eq!(
            verify_balanced(&pendant_k4(), &k3, &WeightFunction::uniform(7)),
            Ok(false)
        );
    }

    #[test]
    fn solves_fixture_pairs() {
        let k3 = Graph::complete(3);
        let cert = solve_balanced_weights(&k3, &k3).unwrap();
        assert_eq!(cert.weightfn.weights(), &[int(1), int(1), int(1)]);
        // Both the single edge and K3 itself are tight here; the tie-break
        // (fewest edges first) picks the edge.
        for e in 0..3 {
            assert_eq!(cert.tight_subgraphs[&EdgeId(e)], vec![EdgeId(e)]);
        }

        let cert = solve_balanced_weights(&Graph::complete(4), &k3).unwrap();
        assert!(cert.weightfn.weights().iter().all(|w| *w == int(1)));

        let cert = solve_balanced_weights(&pendant_k4(), &k3).unwrap();
        for e in 0..6 {
            assert_eq!(cert.weightfn.weights()[e], int(1));
            assert_eq!(cert.tight_subgraphs[&EdgeId(e)].len(), 6, "K4 edges tight at K4");
        }
        assert_eq!(cert.weightfn.weights()[6], ratio(6, 5));
        assert_eq!(cert.tight_subgraphs[&EdgeId(6)], vec![EdgeId(6)]);
    }

    #[test]
    fn solved_weights_within_bounds() {
        let k3 = Graph::complete(3);
        let h = pendant_k4();
        let cert = solve_balanced_weights(&h, &k3).unwrap();
        let upper = cert.m2_hf.clone() / cert.m2_f.clone();
        for w in cert.weightfn.weights() {
            assert!(*w >= int(1));
            assert!(*w <= upper);
        }
        assert!(verify_balanced(&h, &k3, &cert.weightfn).unwrap());
    }

    #[test]
    fn tight_subgraphs_attain_target() {
        let k3 = Graph::complete(3);
        let h = pendant_k4();
        let cert = solve_balanced_weights(&h, &k3).unwrap();
        let target = int(2) - cert.m2_f.recip();
        for (_, set) in &cert.tight_subgraphs {
            let mut verts = std::collections::HashSet::new();
            for e in set {
                let (u, v) = h.endpoints(*e);
                verts.insert(u);
                verts.insert(v);
            }
            let v_i = int(verts.len() as i64);
            let w_i = cert.weightfn.total(set);
            assert_eq!(v_i - w_i / cert.m2_hf.clone(), target);
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        let k3 = Graph::complete(3);
        assert!(matches!(
            WeightFunction::new(vec![ratio(1, 2)]),
            Err(BalanceError::WeightBelowOne(..))
        ));
        // m2(P3) = 1 < m2(K3) = 2.
        assert!(matches!(
            solve_balanced_weights(&Graph::path(3), &k3),
            Err(BalanceError::Density(DensityError::OrderingViolation { .. }))
        ));
        assert!(matches!(
            residual(&k3, &k3, &WeightFunction::uniform(3), EdgeId(9)),
            Err(BalanceError::EdgeOutOfRange(9, 3))
        ));
    }

    // Oracle: brute-force minimum over *all* edge subsets containing e, not
    // just induced ones.
    fn min_defect_all_subsets(h: &Graph, w: &WeightFunction, m2_hf: &Rational, e: EdgeId) -> Rational {
        let ne = h.edge_count();
        let mut best: Option<Rational> = None;
        for mask in 0u64..(1 << ne) {
            if mask & (1 << e.0) == 0 {
                continue;
            }
            let mut verts = 0u64;
            let mut w_i = int(0);
            for i in 0..ne {
                if mask & (1 << i) != 0 {
                    let (u, v) = h.endpoints(EdgeId(i));
                    verts |= (1 << u) | (1 << v);
                    w_i += w.weights()[i].clone();
                }
            }
            let val = int(verts.count_ones() as i64) - w_i / m2_hf.clone();
            if best.as_ref().map_or(true, |b| val < *b) {
                best = Some(val);
            }
        }
        best.unwrap()
    }

    #[test]
    fn induced_minimum_matches_all_subsets_oracle() {
        let k3 = Graph::complete(3);
        for h in [Graph::complete(4), pendant_k4(), Graph::cycle(5)] {
            if m2(&h).unwrap().value < m2(&k3).unwrap().value {
                continue;
            }
            let m2_hf = m2_asym(&h, &k3).unwrap().value;
            let w = WeightFunction::uniform(h.edge_count());
            for i in 0..h.edge_count() {
                let (min, _) = min_defect(&h, &w, &m2_hf, EdgeId(i));
                assert_eq!(min, min_defect_all_subsets(&h, &w, &m2_hf, EdgeId(i)), "{h:?} edge {i}");
            }
        }
    }
}
