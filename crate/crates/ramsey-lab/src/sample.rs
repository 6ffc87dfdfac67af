//! The random typed-graph model: a uniform type per potential edge, then
//! independent retention with probability p^{w(type)}. Includes the natural
//! coupling with the plain binomial random graph and seed-mixing utilities
//! for reproducible parallel batches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::balance::WeightFunction;
use crate::graph::{Graph, MAX_VERTICES};
use crate::ratio::to_f64;
use crate::typed::TypedGraph;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum SampleError {
    #[error("edge probability {0} outside (0, 1)")]
    ProbabilityOutOfRange(f64),
    #[error("pattern has no edges")]
    EmptyPattern,
    #[error("weight function has {found} entries for a pattern with {expected} edges")]
    WeightMismatch { expected: usize, found: usize },
    #[error("vertex count {0} exceeds {MAX_VERTICES}")]
    TooManyVertices(usize),
}

/// Parameters of the typed model on `n` vertices.
#[derive(Debug, Clone)]
pub struct TypedModelParams {
    pub n: usize,
    pub p: f64,
    pub pattern: Graph,
    pub weights: WeightFunction,
    pub seed: u64,
}

impl TypedModelParams {
    pub fn validate(&self) -> Result<(), SampleError> {
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(SampleError::ProbabilityOutOfRange(self.p));
        }
        if self.pattern.edge_count() == 0 {
            return Err(SampleError::EmptyPattern);
        }
        if self.weights.len() != self.pattern.edge_count() {
            return Err(SampleError::WeightMismatch {
                expected: self.pattern.edge_count(),
                found: self.weights.len(),
            });
        }
        if self.n > MAX_VERTICES {
            return Err(SampleError::TooManyVertices(self.n));
        }
        Ok(())
    }
}

/// splitmix64 finalizer.
fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e3779b97f4a7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d049bb133111eb);
    x ^ (x >> 31)
}

/// Deterministic seed derivation: folds each part through splitmix64 so that
/// per-trial seeds are independent of scheduling.
pub fn mix_seed(parts: &[u64]) -> u64 {
    let mut acc = 0x243f6a8885a308d3u64; // pi fractional bits
    for &part in parts {
        acc = splitmix64(acc ^ part);
    }
    acc
}

/// Draws one sample of the typed model together with its coupled binomial
/// graph: the same uniform variate decides both, so the typed sample's edge
/// set is always a subset of the coupled one's (w >= 1 gives p^w <= p).
///
/// Randomness is consumed in canonical edge order of K_n, one (type, uniform)
/// pair per potential edge, so the output is a pure function of the params.
pub fn sample_coupled(params: &TypedModelParams) -> Result<(TypedGraph, Graph), SampleError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let e_h = params.pattern.edge_count();
    let thresholds: Vec<f64> = params
        .weights
        .weights()
        .iter()
        .map(|w| params.p.powf(to_f64(w)))
        .collect();
    let mut typed_edges = Vec::new();
    let mut types = Vec::new();
    let mut plain_edges = Vec::new();
    for u in 0..params.n {
        for v in u + 1..params.n {
            let t = rng.gen_range(0..e_h);
            let x: f64 = rng.gen();
            if x < thresholds[t] {
                typed_edges.push((u, v));
                types.push(crate::graph::EdgeId(t));
            }
            if x < params.p {
                plain_edges.push((u, v));
            }
        }
    }
    let graph = Graph::from_edges(params.n, &typed_edges).expect("edges within range");
    // Canonical edge order coincides with generation order, so `types` lines
    // up with the edge list.
    let typed = TypedGraph::new(graph, params.pattern.clone(), types).expect("valid type map");
    let plain = Graph::from_edges(params.n, &plain_edges).expect("edges within range");
    Ok((typed, plain))
}

/// Draws one sample of the typed model.
pub fn sample(params: &TypedModelParams) -> Result<TypedGraph, SampleError> {
    sample_coupled(params).map(|(typed, _)| typed)
}

/// Draws one binomial random graph G(n, p) from the same stream layout as
/// [`sample_coupled`].
pub fn sample_gnp(n: usize, p: f64, seed: u64) -> Result<Graph, SampleError> {
    if !(p > 0.0 && p < 1.0) {
        if p == 1.0 {
            return Ok(Graph::complete(n));
        }
        if p == 0.0 {
            return Graph::empty(n).map_err(|_| SampleError::TooManyVertices(n));
        }
        return Err(SampleError::ProbabilityOutOfRange(p));
    }
    if n > MAX_VERTICES {
        return Err(SampleError::TooManyVertices(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let x: f64 = rng.gen();
            if x < p {
                edges.push((u, v));
            }
        }
    }
    Ok(Graph::from_edges(n, &edges).expect("edges within range"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeId;

    fn params(n: usize, p: f64, seed: u64) -> TypedModelParams {
        let k3 = Graph::complete(3);
        TypedModelParams { n, p, pattern: k3, weights: WeightFunction::uniform(3), seed }
    }

    #[test]
    fn validates_params() {
        assert!(params(10, 0.3, 1).validate().is_ok());
        assert_eq!(
            params(10, 0.0, 1).validate(),
            Err(SampleError::ProbabilityOutOfRange(0.0))
        );
        assert_eq!(
            params(10, 1.0, 1).validate(),
            Err(SampleError::ProbabilityOutOfRange(1.0))
        );
        let mut bad = params(10, 0.3, 1);
        bad.weights = WeightFunction::uniform(2);
        assert!(matches!(bad.validate(), Err(SampleError::WeightMismatch { .. })));
    }

    #[test]
    fn deterministic_given_seed() {
        let p = params(20, 0.4, 12345);
        let a = sample(&p).unwrap();
        let b = sample(&p).unwrap();
        assert_eq!(a, b);
        let c = sample(&params(20, 0.4, 12346)).unwrap();
        assert_ne!(a, c, "different seeds should differ at this size");
    }

    #[test]
    fn coupled_sample_is_edge_subset() {
        for seed in 0..50 {
            let (typed, plain) = sample_coupled(&params(15, 0.35, seed)).unwrap();
            for &(u, v) in typed.graph().edges() {
                assert!(plain.has_edge(u, v));
            }
        }
    }

    #[test]
    fn near_one_probability_keeps_almost_everything() {
        let (typed, _) = sample_coupled(&params(12, 1.0 - 1e-9, 7)).unwrap();
        assert_eq!(typed.graph().edge_count(), 12 * 11 / 2);
    }

    #[test]
    fn single_potential_edge_present_with_probability_p() {
        let trials = 20_000;
        let p = 0.3;
        let mut present = 0u32;
        let mut type_counts = [0u32; 3];
        for t in 0..trials {
            let g = sample(&params(2, p, mix_seed(&[99, t as u64]))).unwrap();
            if g.graph().edge_count() == 1 {
                present += 1;
                type_counts[g.edge_type(EdgeId(0)).0] += 1;
            }
        }
        let freq = present as f64 / trials as f64;
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((freq - p).abs() < 4.0 * sigma, "freq {freq}");
        // Types uniform among the present edges.
        let total: u32 = type_counts.iter().sum();
        for &c in &type_counts {
            let f = c as f64 / total as f64;
            let s = (2.0 / 9.0 / total as f64).sqrt();
            assert!((f - 1.0 / 3.0).abs() < 4.0 * s, "type freq {f}");
        }
    }

    #[test]
    fn mix_seed_is_order_sensitive() {
        assert_ne!(mix_seed(&[1, 2]), mix_seed(&[2, 1]));
        assert_ne!(mix_seed(&[0]), mix_seed(&[0, 0]));
        assert_eq!(mix_seed(&[5, 6, 7]), mix_seed(&[5, 6, 7]));
    }
}
