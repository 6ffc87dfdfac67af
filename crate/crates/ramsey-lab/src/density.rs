//! Exact rational density functionals: d2, the 2-density m2, the asymmetric
//! 2-density m2(F1, F2), balancedness predicates, and maximum subgraph
//! density, all with witness reporting.
//!
//! Maximization runs over induced subgraphs without isolated vertices; the
//! `oracle` submodule keeps an independent all-edge-subsets scan used by the
//! test suite to guard that restriction.

use thiserror::Error;

use crate::graph::{EdgeId, Graph};
use crate::ratio::{int, ratio, Rational};

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum DensityError {
    #[error("graph has no edges")]
    Empty,
    #[error("ordering violation: m2(F1) = {m2_f1} < m2(F2) = {m2_f2}; swap the arguments")]
    OrderingViolation { m2_f1: String, m2_f2: String },
    #[error("graph too large for exhaustive subgraph enumeration ({0} active vertices)")]
    TooLarge(usize),
}

/// Vertex subsets are enumerated exhaustively; beyond this support size the
/// operation refuses rather than running for years.
const MAX_SUPPORT: usize = 26;

/// Value of a density maximization together with every maximizing subgraph,
/// each given as a sorted list of edge ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub value: Rational,
    pub maximizers: Vec<Vec<EdgeId>>,
    pub unique: bool,
}

/// d2(F): 1/2 for a single edge, (e-1)/(v-2) otherwise, with v counting the
/// non-isolated vertices.
pub fn d2(f: &Graph) -> Result<Rational, DensityError> {
    let e = f.edge_count();
    if e == 0 {
        return Err(DensityError::Empty);
    }
    let v = f.support().count_ones() as i64;
    if e == 1 {
        Ok(ratio(1, 2))
    } else {
        Ok(ratio(e as i64 - 1, v - 2))
    }
}

/// Runs `visit(vertex_mask, v, e)` for every induced subgraph of `g` with at
/// least one edge, where `v` counts non-isolated vertices of the subgraph.
fn for_each_induced<F: FnMut(u64, i64, i64)>(g: &Graph, mut visit: F) -> Result<(), DensityError> {
    if g.is_empty() {
        return Err(DensityError::Empty);
    }
    let support: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| g.neighbors(v) != 0)
        .collect();
    let k = support.len();
    if k > MAX_SUPPORT {
        return Err(DensityError::TooLarge(k));
    }
    for bits in 1u64..(1 << k) {
        let mut mask = 0u64;
        let mut b = bits;
        while b != 0 {
            mask |= 1 << support[b.trailing_zeros() as usize];
            b &= b - 1;
        }
        let mut e = 0i64;
        let mut active = 0u64;
        let mut m = mask;
        while m != 0 {
            let v = m.trailing_zeros() as usize;
            let inc = g.neighbors(v) & mask;
            e += inc.count_ones() as i64;
            if inc != 0 {
                active |= 1 << v;
            }
            m &= m - 1;
        }
        e /= 2;
        if e >= 1 {
            visit(active, active.count_ones() as i64, e);
        }
    }
    Ok(())
}

/// Edge ids of the subgraph induced on `mask`.
fn induced_edge_ids(g: &Graph, mask: u64) -> Vec<EdgeId> {
    g.edges()
        .iter()
        .enumerate()
        .filter(|(_, &(u, v))| mask & (1 << u) != 0 && mask & (1 << v) != 0)
        .map(|(i, _)| EdgeId(i))
        .collect()
}

fn maximize<R: Fn(i64, i64) -> Rational>(g: &Graph, ratio_of: R) -> Result<DensityReport, DensityError> {
    let mut best: Option<Rational> = None;
    let mut masks: Vec<u64> = Vec::new();
    for_each_induced(g, |mask, v, e| {
        let val = ratio_of(v, e);
        match &best {
            Some(b) if val < *b => {}
            Some(b) if val == *b => masks.push(mask),
            _ => {
                best = Some(val);
                masks = vec![mask];
            }
        }
    })?;
    let value = best.expect("nonempty graph has at least one induced subgraph with an edge");
    let mut maximizers: Vec<Vec<EdgeId>> = masks.iter().map(|&m| induced_edge_ids(g, m)).collect();
    maximizers.sort();
    maximizers.dedup();
    let unique = maximizers.len() == 1;
    Ok(DensityReport { value, maximizers, unique })
}

/// m2(F): the maximum of d2 over nonempty subgraphs, with witnesses.
pub fn m2(f: &Graph) -> Result<DensityReport, DensityError> {
    maximize(f, |v, e| {
        if e == 1 {
            ratio(1, 2)
        } else {
            ratio(e - 1, v - 2)
        }
    })
}

/// m2(F1, F2): the maximum over nonempty F1' of e / (v - 2 + 1/m2(F2)).
/// Requires m2(F1) >= m2(F2).
pub fn m2_asym(f1: &Graph, f2: &Graph) -> Result<DensityReport, DensityError> {
    let m2_f1 = m2(f1)?.value;
    let m2_f2 = m2(f2)?.value;
    if m2_f1 < m2_f2 {
        return Err(DensityError::OrderingViolation {
            m2_f1: crate::ratio::format_ratio(&m2_f1),
            m2_f2: crate::ratio::format_ratio(&m2_f2),
        });
    }
    let inv = m2_f2.recip();
    maximize(f1, move |v, e| int(e) / (int(v - 2) + inv.clone()))
}

/// 2-balanced: d2(F) equals m2(F).
pub fn is_2_balanced(f: &Graph) -> Result<bool, DensityError> {
    Ok(d2(f)? == m2(f)?.value)
}

/// Strictly 2-balanced: F itself is the unique maximizer of d2 among its
/// nonempty subgraphs.
pub fn is_strictly_2_balanced(f: &Graph) -> Result<bool, DensityError> {
    let report = m2(f)?;
    let all: Vec<EdgeId> = (0..f.edge_count()).map(EdgeId).collect();
    Ok(report.unique && report.maximizers[0] == all)
}

/// Strictly balanced w.r.t. m2(., F2): F1 is the unique maximizer of the
/// asymmetric ratio. A proper subgraph tying the maximum makes this false.
pub fn is_strictly_balanced_wrt(f1: &Graph, f2: &Graph) -> Result<bool, DensityError> {
    let report = m2_asym(f1, f2)?;
    let all: Vec<EdgeId> = (0..f1.edge_count()).map(EdgeId).collect();
    Ok(report.unique && report.maximizers[0] == all)
}

/// max e(G')/v(G') over nonempty subgraphs of G.
pub fn max_density(g: &Graph) -> Result<DensityReport, DensityError> {
    maximize(g, |v, e| ratio(e, v))
}

/// Independent brute-force scans over *all* nonempty edge subsets, with no
/// induced-subgraph shortcut. Reference implementations for the test suite;
/// feasible up to roughly 24 edges.
pub mod oracle {
    use super::*;

    /// Max over nonempty edge subsets of `score(v, e)` where scores are
    /// exact fractions (num, den), den > 0. Subsets are walked by a DFS that
    /// maintains per-vertex degrees incrementally.
    fn scan<S: Fn(i64, i64) -> (i64, i64)>(g: &Graph, score: S) -> Rational {
        let edges = g.edges();
        struct St<'a> {
            edges: &'a [(usize, usize)],
            deg: [i32; 64],
            v: i64,
            e: i64,
            best: (i64, i64),
        }
        fn better(a: (i64, i64), b: (i64, i64)) -> bool {
            (a.0 as i128) * (b.1 as i128) > (b.0 as i128) * (a.1 as i128)
        }
        fn go<S: Fn(i64, i64) -> (i64, i64)>(st: &mut St, score: &S, i: usize) {
            if i == st.edges.len() {
                if st.e >= 1 {
                    let s = score(st.v, st.e);
                    if better(s, st.best) {
                        st.best = s;
                    }
                }
                return;
            }
            // Exclude edge i.
            go(st, score, i + 1);
            // Include edge i.
            let (a, b) = st.edges[i];
            for x in [a, b] {
                if st.deg[x] == 0 {
                    st.v += 1;
                }
                st.deg[x] += 1;
            }
            st.e += 1;
            go(st, score, i + 1);
            st.e -= 1;
            for x in [a, b] {
                st.deg[x] -= 1;
                if st.deg[x] == 0 {
                    st.v -= 1;
                }
            }
        }
        let mut st = St { edges, deg: [0; 64], v: 0, e: 0, best: (i64::MIN / 4, 1) };
        go(&mut st, &score, 0);
        ratio(st.best.0, st.best.1)
    }

    /// Brute-force m2 over all nonempty edge subsets.
    pub fn m2_all_subsets(g: &Graph) -> Rational {
        scan(g, |v, e| if e == 1 { (1, 2) } else { (e - 1, v - 2) })
    }

    /// Brute-force m2(F1, F2) given m2(F2) = p/q.
    pub fn m2_asym_all_subsets(f1: &Graph, m2_f2: &Rational) -> Rational {
        let p = i64::try_from(m2_f2.numer().clone()).expect("small m2 numerator");
        let q = i64::try_from(m2_f2.denom().clone()).expect("small m2 denominator");
        // e / (v - 2 + q/p) = e*p / (p*(v-2) + q)
        scan(f1, move |v, e| (e * p, p * (v - 2) + q))
    }

    /// Brute-force max e/v over all nonempty edge subsets.
    pub fn max_density_all_subsets(g: &Graph) -> Rational {
        scan(g, |v, e| (e, v))
    }
}
