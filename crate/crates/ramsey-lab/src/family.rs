//! The attachment family F(F1, F2): a core copy of F2 with a copy of F1 glued
//! onto every non-attachment core edge, the asymmetric-balancedness checks
//! over its members, and the deterministic density/arrow condition on hosts.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::arrow::{arrow_decide, ArrowError, Decision};
use crate::density::{m2, m2_asym, max_density, DensityError};
use crate::graph::{is_isomorphic, EdgeId, Graph, MAX_VERTICES};
use crate::ratio::{int, Rational};

pub const MAX_VCAP: usize = 16;

/// Raw gluing structures examined before isomorphism deduplication.
const ENUM_GUARD: usize = 200_000;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum FamilyError {
    #[error("target graph has no edges")]
    EmptyTarget,
    #[error("vertex cap {0} exceeds the supported maximum {MAX_VCAP}")]
    VcapTooLarge(usize),
    #[error("generic members need {0} vertices, above the {MAX_VERTICES}-vertex host cap")]
    VertexCapExceeded(usize),
    #[error("gluing enumeration exceeded {ENUM_GUARD} raw structures")]
    Explosion,
    #[error("hypothesis m2(F1) >= m2(F2) > 1 fails: m2(F1) = {m2_f1}, m2(F2) = {m2_f2}")]
    HypothesisViolation { m2_f1: String, m2_f2: String },
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error(transparent)]
    Arrow(#[from] ArrowError),
}

/// One member of F(F1, F2): a core copy of F2, a designated attachment edge
/// e0 on the core, and a copy of F1 glued onto every other core edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyMember {
    pub graph: Graph,
    /// Embedding of F2: `core[i]` is the member vertex hosting core vertex i.
    pub core: Vec<usize>,
    /// The attachment edge e0, as an edge of `graph`.
    pub attachment: EdgeId,
    /// Per non-attachment core edge (as an edge of `graph`), the embedding of
    /// the F1 copy glued onto it.
    pub attachments: BTreeMap<EdgeId, Vec<usize>>,
}

impl FamilyMember {
    /// A member is generic when every glued copy brings all its non-shared
    /// vertices fresh; equivalently the vertex count is maximal.
    pub fn is_generic(&self, f1: &Graph, f2: &Graph) -> bool {
        let full = f2.vertex_count()
            + f2.edge_count().saturating_sub(1) * f1.vertex_count().saturating_sub(2);
        self.graph.vertex_count() == full
    }

    /// Re-checks the defining edge decomposition: E(member) is exactly the
    /// core edges plus the glued copies' edges, and e0 lies on the core.
    pub fn verify(&self, f1: &Graph, f2: &Graph) -> bool {
        let g = &self.graph;
        let mut covered: BTreeSet<EdgeId> = BTreeSet::new();
        let mut core_edges: BTreeSet<EdgeId> = BTreeSet::new();
        for &(u, v) in f2.edges() {
            match g.edge_id(self.core[u], self.core[v]) {
                Some(e) => {
                    core_edges.insert(e);
                    covered.insert(e);
                }
                None => return false,
            }
        }
        if !core_edges.contains(&self.attachment) {
            return false;
        }
        if self.attachments.contains_key(&self.attachment) {
            return false;
        }
        for (&e, emb) in &self.attachments {
            if !core_edges.contains(&e) {
                return false;
            }
            let (x, y) = g.endpoints(e);
            let mut covers_e = false;
            for &(u, v) in f1.edges() {
                match g.edge_id(emb[u], emb[v]) {
                    Some(id) => {
                        covered.insert(id);
                        let (a, b) = g.endpoints(id);
                        covers_e |= (a, b) == (x, y);
                    }
                    None => return false,
                }
            }
            if !covers_e {
                return false;
            }
        }
        if self.attachments.len() + 1 != f2.edge_count() {
            return false;
        }
        covered.len() == g.edge_count()
    }
}

fn norm(u: usize, v: usize) -> (usize, usize) {
    (u.min(v), u.max(v))
}

/// Partially built member during gluing.
struct Partial {
    nv: usize,
    edges: BTreeSet<(usize, usize)>,
    /// (core edge as vertex pair, F1 embedding) per processed core edge.
    glued: Vec<((usize, usize), Vec<usize>)>,
}

/// Enumerates injective placements of F1 with edge `f` pinned onto the core
/// edge `(cu, cv)` (both orientations), remaining vertices mapped to any
/// existing vertex or brought in fresh (fresh labels in assignment order, so
/// each placement is produced once).
fn placements(
    f1: &Graph,
    f: (usize, usize),
    target: (usize, usize),
    nv: usize,
    vcap: usize,
) -> Vec<(Vec<usize>, usize)> {
    let v1 = f1.vertex_count();
    let rest: Vec<usize> = (0..v1).filter(|&x| x != f.0 && x != f.1).collect();
    let mut out = Vec::new();
    for &(a, b) in &[(target.0, target.1), (target.1, target.0)] {
        let mut map = vec![usize::MAX; v1];
        map[f.0] = a;
        map[f.1] = b;
        extend_placement(&rest, 0, &mut map, nv, nv, vcap, &mut out);
    }
    out
}

fn extend_placement(
    rest: &[usize],
    i: usize,
    map: &mut Vec<usize>,
    nv0: usize,
    nv: usize,
    vcap: usize,
    out: &mut Vec<(Vec<usize>, usize)>,
) {
    if i == rest.len() {
        out.push((map.clone(), nv));
        return;
    }
    let x = rest[i];
    for cand in 0..nv0 {
        if !map.contains(&cand) {
            map[x] = cand;
            extend_placement(rest, i + 1, map, nv0, nv, vcap, out);
            map[x] = usize::MAX;
        }
    }
    if nv < vcap {
        map[x] = nv;
        extend_placement(rest, i + 1, map, nv0, nv + 1, vcap, out);
        map[x] = usize::MAX;
    }
}

fn finish_member(f2: &Graph, e0_idx: usize, partial: &Partial) -> FamilyMember {
    let edge_vec: Vec<(usize, usize)> = partial.edges.iter().copied().collect();
    let graph = Graph::from_edges(partial.nv, &edge_vec).expect("member within vertex cap");
    let core: Vec<usize> = (0..f2.vertex_count()).collect();
    let (u0, v0) = f2.edges()[e0_idx];
    let attachment = graph.edge_id(u0, v0).expect("core edge present");
    let attachments = partial
        .glued
        .iter()
        .map(|&((u, v), ref emb)| (graph.edge_id(u, v).expect("core edge present"), emb.clone()))
        .collect();
    FamilyMember { graph, core, attachment, attachments }
}

fn validate_targets(f1: &Graph, f2: &Graph) -> Result<(), FamilyError> {
    if f1.edge_count() == 0 || f2.edge_count() == 0 {
        return Err(FamilyError::EmptyTarget);
    }
    Ok(())
}

/// All members with at most `vcap` vertices, up to isomorphism of the
/// underlying graph. Copies may overlap each other and the core arbitrarily.
pub fn enumerate_members(f1: &Graph, f2: &Graph, vcap: usize) -> Result<Vec<FamilyMember>, FamilyError> {
    validate_targets(f1, f2)?;
    if vcap > MAX_VCAP {
        return Err(FamilyError::VcapTooLarge(vcap));
    }
    let v2 = f2.vertex_count();
    if v2 > vcap {
        return Ok(Vec::new());
    }
    let mut raw: Vec<FamilyMember> = Vec::new();
    let mut count = 0usize;
    for e0_idx in 0..f2.edge_count() {
        let others: Vec<(usize, usize)> = f2
            .edges()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != e0_idx)
            .map(|(_, &e)| e)
            .collect();
        let mut stack = vec![Partial {
            nv: v2,
            edges: f2.edges().iter().map(|&(u, v)| norm(u, v)).collect(),
            glued: Vec::new(),
        }];
        let grow = |partial: Partial,
                        raw: &mut Vec<FamilyMember>,
                        count: &mut usize|
         -> Result<Vec<Partial>, FamilyError> {
            let depth = partial.glued.len();
            if depth == others.len() {
                *count += 1;
                if *count > ENUM_GUARD {
                    return Err(FamilyError::Explosion);
                }
                raw.push(finish_member(f2, e0_idx, &partial));
                return Ok(Vec::new());
            }
            let target = others[depth];
            let mut next = Vec::new();
            for &f in f1.edges() {
                for (map, nv) in placements(f1, f, target, partial.nv, vcap) {
                    let mut edges = partial.edges.clone();
                    for &(a, b) in f1.edges() {
                        edges.insert(norm(map[a], map[b]));
                    }
                    let mut glued = partial.glued.clone();
                    glued.push((target, map));
                    next.push(Partial { nv, edges, glued });
                }
            }
            Ok(next)
        };
        while let Some(partial) = stack.pop() {
            stack.extend(grow(partial, &mut raw, &mut count)?);
        }
    }
    dedupe_members(raw)
}

fn dedupe_members(raw: Vec<FamilyMember>) -> Result<Vec<FamilyMember>, FamilyError> {
    let mut kept: Vec<FamilyMember> = Vec::new();
    for member in raw {
        if !kept.iter().any(|k| is_isomorphic(&k.graph, &member.graph)) {
            kept.push(member);
        }
    }
    kept.sort_by_key(|m| (m.graph.vertex_count(), m.graph.edge_count()));
    Ok(kept)
}

/// The generic members: every glued copy meets the rest only in its core
/// edge. Up to e(F2) * e(F1)^(e(F2)-1) graphs before deduplication.
pub fn generic_members(f1: &Graph, f2: &Graph) -> Result<Vec<FamilyMember>, FamilyError> {
    validate_targets(f1, f2)?;
    let v2 = f2.vertex_count();
    let full = v2 + (f2.edge_count() - 1) * f1.vertex_count().saturating_sub(2);
    if full > MAX_VERTICES {
        return Err(FamilyError::VertexCapExceeded(full));
    }
    let mut raw: Vec<FamilyMember> = Vec::new();
    for e0_idx in 0..f2.edge_count() {
        let others: Vec<(usize, usize)> = f2
            .edges()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != e0_idx)
            .map(|(_, &e)| e)
            .collect();
        // Odometer over (F1-edge, orientation) choices per non-attachment
        // core edge; non-shared copy vertices are always fresh.
        let choices = 2 * f1.edge_count();
        let mut pick = vec![0usize; others.len()];
        loop {
            let mut partial = Partial {
                nv: v2,
                edges: f2.edges().iter().map(|&(u, v)| norm(u, v)).collect(),
                glued: Vec::new(),
            };
            for (depth, &target) in others.iter().enumerate() {
                let f = f1.edges()[pick[depth] / 2];
                let (a, b) = if pick[depth] % 2 == 0 {
                    (target.0, target.1)
                } else {
                    (target.1, target.0)
                };
                let v1 = f1.vertex_count();
                let mut map = vec![usize::MAX; v1];
                map[f.0] = a;
                map[f.1] = b;
                for x in 0..v1 {
                    if map[x] == usize::MAX {
                        map[x] = partial.nv;
                        partial.nv += 1;
                    }
                }
                for &(p, q) in f1.edges() {
                    partial.edges.insert(norm(map[p], map[q]));
                }
                partial.glued.push((target, map));
            }
            raw.push(finish_member(f2, e0_idx, &partial));
            let mut pos = 0;
            while pos < pick.len() {
                pick[pos] += 1;
                if pick[pos] < choices {
                    break;
                }
                pick[pos] = 0;
                pos += 1;
            }
            if pos == pick.len() {
                break;
            }
            if others.is_empty() {
                break;
            }
        }
        if others.is_empty() {
            // Degenerate core (single edge): exactly one member, F2 itself.
            continue;
        }
    }
    dedupe_members(raw)
}

/// One offending (member, subgraph) pair for condition (1) or the equality
/// clause (2).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceViolation {
    pub member: usize,
    pub vertices: Vec<usize>,
    pub edges: Vec<EdgeId>,
    pub ratio: Rational,
    /// True when the ratio equals m2(F1, F2) but clause (2)'s
    /// "generic member, single-edge H" shape fails; false for a strict
    /// condition-(1) violation.
    pub equality_shape: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BalanceVerdict {
    pub balanced: bool,
    pub violations: Vec<BalanceViolation>,
    /// (member index, H edge list) pairs where equality holds with the
    /// expected generic/single-edge shape.
    pub equality_cases: Vec<(usize, Vec<EdgeId>)>,
    /// Always true: the verdict covers only members within the vertex cap.
    pub partial: bool,
    pub m2_asym: Rational,
}

/// Checks conditions (1)-(2) over all enumerated members F and all induced
/// H ( V(H) a strict vertex subset containing the attachment edge ):
/// (e(F) - e(H)) / (v(F) - v(H)) >= m2(F1, F2), with equality only for a
/// generic member and a single-edge H. Equality cases of any other shape are
/// reported as violations for inspection.
pub fn check_asymmetric_balanced(
    f1: &Graph,
    f2: &Graph,
    vcap: usize,
) -> Result<BalanceVerdict, FamilyError> {
    validate_targets(f1, f2)?;
    let m2_f1 = m2(f1)?.value;
    let m2_f2 = m2(f2)?.value;
    if m2_f1 < m2_f2 || m2_f2 <= int(1) {
        return Err(FamilyError::HypothesisViolation {
            m2_f1: crate::ratio::format_ratio(&m2_f1),
            m2_f2: crate::ratio::format_ratio(&m2_f2),
        });
    }
    let m2a = m2_asym(f1, f2)?.value;
    let members = enumerate_members(f1, f2, vcap)?;
    let mut violations = Vec::new();
    let mut equality_cases = Vec::new();
    for (idx, member) in members.iter().enumerate() {
        let g = &member.graph;
        let v_f = g.vertex_count();
        let e_f = g.edge_count();
        let (a0, b0) = g.endpoints(member.attachment);
        let others: Vec<usize> = (0..v_f).filter(|&x| x != a0 && x != b0).collect();
        let generic = member.is_generic(f1, f2);
        // Strict vertex subsets containing the attachment endpoints.
        for subset in 0u64..(1u64 << others.len()) {
            if subset == (1u64 << others.len()) - 1 {
                continue; // V(H) must be a strict subset of V(F)
            }
            let mut verts = vec![a0, b0];
            for (i, &x) in others.iter().enumerate() {
                if subset & (1u64 << i) != 0 {
                    verts.push(x);
                }
            }
            verts.sort_unstable();
            let h_edges: Vec<EdgeId> = g
                .edges()
                .iter()
                .enumerate()
                .filter(|&(_, &(u, v))| verts.binary_search(&u).is_ok() && verts.binary_search(&v).is_ok())
                .map(|(i, _)| EdgeId(i))
                .collect();
            let ratio = Rational::new(
                (e_f as i64 - h_edges.len() as i64).into(),
                (v_f as i64 - verts.len() as i64).into(),
            );
            if ratio < m2a {
                violations.push(BalanceViolation {
                    member: idx,
                    vertices: verts,
                    edges: h_edges,
                    ratio,
                    equality_shape: false,
                });
            } else if ratio == m2a {
                if generic && h_edges.len() == 1 {
                    equality_cases.push((idx, h_edges));
                } else {
                    violations.push(BalanceViolation {
                        member: idx,
                        vertices: verts,
                        edges: h_edges,
                        ratio,
                        equality_shape: true,
                    });
                }
            }
        }
    }
    Ok(BalanceVerdict {
        balanced: violations.is_empty(),
        violations,
        equality_cases,
        partial: true,
        m2_asym: m2a,
    })
}

/// Theorem-style deterministic check on a host: if every subgraph of G has
/// density at most m2(F1, F2), then G must not arrow (F1, F2). Returns
/// `Some(true)` when the condition holds (vacuously when the density
/// hypothesis fails), `Some(false)` when it is refuted, `None` when the
/// arrow search hit its budget.
pub fn check_condition_iv(
    g: &Graph,
    f1: &Graph,
    f2: &Graph,
    budget: u64,
) -> Result<Option<bool>, FamilyError> {
    let m2a = m2_asym(f1, f2)?.value;
    if g.edge_count() == 0 {
        return Ok(Some(true));
    }
    if max_density(g)?.value > m2a {
        return Ok(Some(true));
    }
    let res = arrow_decide(g, &[f1.clone(), f2.clone()], budget)?;
    Ok(match res.decision {
        Decision::Arrows => Some(false),
        Decision::DoesNotArrow(_) => Some(true),
        Decision::Indeterminate { .. } => None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generic_k3_k3_is_the_five_vertex_member() {
        let k3 = Graph::complete(3);
        let members = generic_members(&k3, &k3).unwrap();
        assert_eq!(members.len(), 1);
        let m = &members[0];
        assert_eq!(m.graph.vertex_count(), 5);
        assert_eq!(m.graph.edge_count(), 7);
        assert!(m.verify(&k3, &k3));
        assert!(m.is_generic(&k3, &k3));
        // Paper bound on the raw generic count.
        assert!(members.len() <= 3 * 3usize.pow(2));
    }

    #[test]
    fn degenerate_core_single_edge() {
        let k3 = Graph::complete(3);
        let k2 = Graph::complete(2);
        let members = generic_members(&k3, &k2).unwrap();
        assert_eq!(members.len(), 1);
        assert!(is_isomorphic(&members[0].graph, &k2));
        assert!(members[0].attachments.is_empty());
        assert!(members[0].verify(&k3, &k2));
    }

    #[test]
    fn enumerate_k3_k3_vcap5() {
        let k3 = Graph::complete(3);
        let members = enumerate_members(&k3, &k3, 5).unwrap();
        // Pairwise non-isomorphic.
        for (i, a) in members.iter().enumerate() {
            for b in &members[i + 1..] {
                assert!(!is_isomorphic(&a.graph, &b.graph));
            }
        }
        for m in &members {
            assert!(m.verify(&k3, &k3), "member failed decomposition check");
        }
        // Contains the generic member, the K4 (shared apex) member, and the
        // fully collapsed K3 member.
        let generic = &generic_members(&k3, &k3).unwrap()[0];
        assert!(members.iter().any(|m| is_isomorphic(&m.graph, &generic.graph)));
        assert!(members.iter().any(|m| is_isomorphic(&m.graph, &Graph::complete(4))));
        assert!(members.iter().any(|m| is_isomorphic(&m.graph, &k3)));
    }

    #[test]
    fn balance_verdict_k3_k3() {
        let k3 = Graph::complete(3);
        let verdict = check_asymmetric_balanced(&k3, &k3, 5).unwrap();
        assert_eq!(verdict.m2_asym, int(2));
        assert!(verdict.partial);
        // The generic member's single-attachment-edge H achieves equality
        // (7 - 1) / (5 - 2) = 2 with the expected shape.
        let generic_idx = enumerate_members(&k3, &k3, 5)
            .unwrap()
            .iter()
            .position(|m| m.graph.vertex_count() == 5 && m.graph.edge_count() == 7)
            .unwrap();
        assert!(verdict
            .equality_cases
            .iter()
            .any(|(idx, edges)| *idx == generic_idx && edges.len() == 1));
        // The core-triangle H also achieves equality (7 - 3) / (5 - 3) = 2
        // but is not a single edge: reported as a shape violation.
        assert!(verdict
            .violations
            .iter()
            .any(|v| v.member == generic_idx && v.equality_shape && v.edges.len() == 3));
        // No strict condition-(1) violations.
        assert!(verdict.violations.iter().all(|v| v.equality_shape));
    }

    #[test]
    fn hypothesis_violation_rejected() {
        // m2(P3) = 2/3 < 1: hypothesis fails.
        let p3 = Graph::path(3);
        let k3 = Graph::complete(3);
        assert!(matches!(
            check_asymmetric_balanced(&p3, &k3, 5),
            Err(FamilyError::HypothesisViolation { .. })
        ));
    }

    #[test]
    fn condition_iv_fixtures() {
        let k3 = Graph::complete(3);
        // K5: max density 2 = m2(K3,K3), pentagon certificate exists.
        assert_eq!(check_condition_iv(&Graph::complete(5), &k3, &k3, 1 << 22).unwrap(), Some(true));
        // K6: max density 5/2 > 2, vacuously true.
        assert_eq!(check_condition_iv(&Graph::complete(6), &k3, &k3, 1 << 22).unwrap(), Some(true));
        // A tree contains no triangle at all.
        assert_eq!(check_condition_iv(&Graph::path(4), &k3, &k3, 1 << 22).unwrap(), Some(true));
    }
}
