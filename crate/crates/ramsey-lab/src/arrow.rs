//! Exact decision of arrow properties: untyped G -> (F1, ..., Fr), the typed
//! variant with colour-1 constraints ranging over typed pattern copies, the
//! recolouring normalization, and exhaustive monochromatic-copy minima on
//! complete hosts.
//!
//! The decision problem is a positive not-all-equal CSP: one clause per
//! (copy, colour) pair forbidding that copy from being monochromatic in its
//! colour. A colouring satisfying all clauses is exactly a NO-certificate.

use thiserror::Error;

use crate::graph::{enumerate_copies, Embedding, Graph};
use crate::suen::valid_type_maps;
use crate::typed::TypedGraph;

pub const MAX_COLOURS: usize = 6;

const UNASSIGNED: u8 = u8::MAX;

#[derive(Debug, Error, PartialEq, Clone)]
pub enum ArrowError {
    #[error("no target graphs given")]
    NoTargets,
    #[error("target {0} has no edges")]
    EmptyTarget(usize),
    #[error("{0} colours requested, at most {MAX_COLOURS} supported")]
    TooManyColours(usize),
    #[error("colouring has {found} entries for a host with {expected} edges")]
    ColouringLength { expected: usize, found: usize },
    #[error("edge {edge} coloured {colour}, outside 1..={r}")]
    ColourOutOfRange { edge: usize, colour: u8, r: usize },
    #[error("{0} colourings exceed the exhaustive cap {1}")]
    CapExceeded(u128, u64),
    #[error("complete host on {0} vertices has more than 63 edges")]
    HostTooLarge(usize),
    #[error("solver produced a colouring that failed independent re-verification")]
    CertificateInvalid,
}

/// An explicit edge colouring of the host, colours 1..=r.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouringCertificate {
    /// `colouring[e]` is the colour of host edge `EdgeId(e)`.
    pub colouring: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchStats {
    /// Decision nodes explored.
    pub nodes: u64,
    /// Number of copy clauses per colour.
    pub copies_per_colour: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    /// Every colouring yields a forbidden monochromatic copy.
    Arrows,
    /// The certificate colouring avoids all forbidden copies.
    DoesNotArrow(ColouringCertificate),
    /// Node budget exhausted before the search closed.
    Indeterminate { budget: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrowResult {
    pub decision: Decision,
    pub stats: SearchStats,
}

impl ArrowResult {
    /// `Some(true)` / `Some(false)` for a decided instance, `None` when
    /// indeterminate.
    pub fn arrows(&self) -> Option<bool> {
        match self.decision {
            Decision::Arrows => Some(true),
            Decision::DoesNotArrow(_) => Some(false),
            Decision::Indeterminate { .. } => None,
        }
    }
}

/// One forbidden monochromatic copy: `edges` may not all take `colour`.
#[derive(Debug, Clone)]
struct Clause {
    colour: u8,
    edges: Vec<usize>,
}

fn copy_edge_ids(pattern: &Graph, host: &Graph, emb: &Embedding) -> Vec<usize> {
    let mut ids: Vec<usize> = pattern
        .edges()
        .iter()
        .map(|&(u, v)| host.edge_id(emb.map[u], emb.map[v]).expect("copy edge present").0)
        .collect();
    ids.sort_unstable();
    ids
}

/// Copies of each target in the host, as sorted host-edge-id lists.
fn untyped_copy_lists(host: &Graph, targets: &[Graph]) -> Result<Vec<Vec<Vec<usize>>>, ArrowError> {
    if targets.is_empty() {
        return Err(ArrowError::NoTargets);
    }
    if targets.len() > MAX_COLOURS {
        return Err(ArrowError::TooManyColours(targets.len()));
    }
    for (i, t) in targets.iter().enumerate() {
        if t.edge_count() == 0 {
            return Err(ArrowError::EmptyTarget(i));
        }
    }
    Ok(targets
        .iter()
        .map(|t| {
            enumerate_copies(t, host)
                .iter()
                .map(|emb| copy_edge_ids(t, host, emb))
                .collect()
        })
        .collect())
}

/// Typed copies of the pattern in `g`, as sorted edge-id lists: copies whose
/// inherited types make them typomorphic to the pattern.
fn typed_pattern_copies(g: &TypedGraph) -> Vec<Vec<usize>> {
    let h = g.pattern();
    let maps = valid_type_maps(h);
    enumerate_copies(h, g.graph())
        .iter()
        .filter(|emb| {
            let types: Vec<_> = h
                .edges()
                .iter()
                .map(|&(u, v)| {
                    g.type_of(emb.map[u], emb.map[v]).expect("copy edge present")
                })
                .collect();
            maps.iter().any(|tm| tm == &types)
        })
        .map(|emb| copy_edge_ids(h, g.graph(), emb))
        .collect()
}

enum Undo {
    Assign(usize),
    Same(usize),
    Sat(usize),
    Forbid(usize, u8),
}

struct Searcher<'a> {
    clauses: &'a [Clause],
    edge_clauses: &'a [Vec<usize>],
    value_order: &'a [u8],
    full_mask: u8,
    assign: Vec<u8>,
    forbidden: Vec<u8>,
    same: Vec<u32>,
    sat: Vec<bool>,
    trail: Vec<Undo>,
    nodes: u64,
    budget: u64,
}

struct BudgetExhausted;

impl<'a> Searcher<'a> {
    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            match self.trail.pop().unwrap() {
                Undo::Assign(e) => self.assign[e] = UNASSIGNED,
                Undo::Same(c) => self.same[c] -= 1,
                Undo::Sat(c) => self.sat[c] = false,
                Undo::Forbid(e, prev) => self.forbidden[e] = prev,
            }
        }
    }

    /// Assigns `e := c` and runs unit propagation to a fixed point.
    /// Returns false on conflict (caller must undo to its mark).
    fn assign_prop(&mut self, e: usize, c: u8) -> bool {
        let mut pending = vec![(e, c)];
        while let Some((e, c)) = pending.pop() {
            if self.assign[e] != UNASSIGNED {
                if self.assign[e] == c {
                    continue;
                }
                return false;
            }
            if self.forbidden[e] & (1 << c) != 0 {
                return false;
            }
            self.assign[e] = c;
            self.trail.push(Undo::Assign(e));
            for &ci in &self.edge_clauses[e] {
                if self.sat[ci] {
                    continue;
                }
                let clause = &self.clauses[ci];
                if clause.colour != c {
                    self.sat[ci] = true;
                    self.trail.push(Undo::Sat(ci));
                    continue;
                }
                self.same[ci] += 1;
                self.trail.push(Undo::Same(ci));
                let len = clause.edges.len() as u32;
                if self.same[ci] == len {
                    return false;
                }
                if self.same[ci] + 1 == len {
                    // Alive clause: every assigned edge already has the
                    // clause colour, so the leftover edge is unassigned and
                    // must avoid it.
                    let f = clause
                        .edges
                        .iter()
                        .copied()
                        .find(|&f| self.assign[f] == UNASSIGNED)
                        .expect("alive near-unit clause has an unassigned edge");
                    if self.forbidden[f] & (1 << clause.colour) != 0 {
                        continue;
                    }
                    self.trail.push(Undo::Forbid(f, self.forbidden[f]));
                    self.forbidden[f] |= 1 << clause.colour;
                    let allowed = self.full_mask & !self.forbidden[f];
                    if allowed == 0 {
                        return false;
                    }
                    if allowed.count_ones() == 1 {
                        pending.push((f, allowed.trailing_zeros() as u8));
                    }
                }
            }
        }
        true
    }

    /// Depth-first search over `order`; `fix_first` restricts the first
    /// decision to the first allowed colour (symmetry breaking).
    fn dfs(&mut self, order: &[usize], fix_first: bool) -> Result<bool, BudgetExhausted> {
        let Some(e) = order.iter().copied().find(|&e| self.assign[e] == UNASSIGNED) else {
            return Ok(true);
        };
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(BudgetExhausted);
        }
        for &c in self.value_order {
            if self.forbidden[e] & (1 << c) != 0 {
                continue;
            }
            let mark = self.trail.len();
            if self.assign_prop(e, c) && self.dfs(order, false)? {
                return Ok(true);
            }
            self.undo_to(mark);
            if fix_first {
                break;
            }
        }
        Ok(false)
    }
}

/// Shared core: decide whether every r-colouring of the host's edges leaves
/// some clause monochromatic.
fn decide(
    edge_count: usize,
    copy_lists: Vec<Vec<Vec<usize>>>,
    colour_one_last: bool,
    budget: u64,
) -> Result<ArrowResult, ArrowError> {
    let r = copy_lists.len();
    let copies_per_colour: Vec<usize> = copy_lists.iter().map(|l| l.len()).collect();

    let mut clauses = Vec::new();
    for (colour, list) in copy_lists.iter().enumerate() {
        for edges in list {
            clauses.push(Clause { colour: colour as u8, edges: edges.clone() });
        }
    }
    let mut edge_clauses = vec![Vec::new(); edge_count];
    for (ci, clause) in clauses.iter().enumerate() {
        for &e in &clause.edges {
            edge_clauses[e].push(ci);
        }
    }

    // Static fail-first order: constrained edges by descending clause count.
    let mut order: Vec<usize> =
        (0..edge_count).filter(|&e| !edge_clauses[e].is_empty()).collect();
    order.sort_by_key(|&e| (usize::MAX - edge_clauses[e].len(), e));

    // Colour-permutation symmetry: with identical copy lists in every colour,
    // the first decision may be pinned to one colour.
    let symmetric = r > 1 && copy_lists.windows(2).all(|w| w[0] == w[1]);

    let value_order: Vec<u8> = if colour_one_last && r > 1 {
        (1..r as u8).chain(std::iter::once(0)).collect()
    } else {
        (0..r as u8).collect()
    };

    let mut searcher = Searcher {
        clauses: &clauses,
        edge_clauses: &edge_clauses,
        value_order: &value_order,
        full_mask: ((1u16 << r) - 1) as u8,
        assign: vec![UNASSIGNED; edge_count],
        forbidden: vec![0; edge_count],
        same: vec![0; clauses.len()],
        sat: vec![false; clauses.len()],
        trail: Vec::new(),
        nodes: 0,
        budget,
    };

    // Root-level units: a single-edge copy forbids its colour outright.
    let mut root_ok = true;
    for ci in 0..clauses.len() {
        if clauses[ci].edges.len() == 1 {
            let e = clauses[ci].edges[0];
            searcher.forbidden[e] |= 1 << clauses[ci].colour;
            let allowed = searcher.full_mask & !searcher.forbidden[e];
            if allowed == 0 {
                root_ok = false;
                break;
            }
            if allowed.count_ones() == 1 && !searcher.assign_prop(e, allowed.trailing_zeros() as u8)
            {
                root_ok = false;
                break;
            }
        }
    }

    // Independent components of the clause graph are satisfiable separately.
    let mut satisfiable = root_ok;
    if root_ok {
        let components = clause_components(edge_count, &edge_clauses, &clauses);
        let mut first = true;
        for component in &components {
            let comp_order: Vec<usize> =
                order.iter().copied().filter(|e| component.contains(e)).collect();
            match searcher.dfs(&comp_order, symmetric && first) {
                Ok(true) => {}
                Ok(false) => {
                    satisfiable = false;
                    break;
                }
                Err(BudgetExhausted) => {
                    return Ok(ArrowResult {
                        decision: Decision::Indeterminate { budget },
                        stats: SearchStats { nodes: searcher.nodes, copies_per_colour },
                    });
                }
            }
            first = false;
        }
    }

    let stats = SearchStats { nodes: searcher.nodes, copies_per_colour };
    if !satisfiable {
        return Ok(ArrowResult { decision: Decision::Arrows, stats });
    }
    // Edges outside every clause (and any edge left unassigned) can take
    // colour 1: they belong to no forbidden copy.
    let colouring: Vec<u8> = searcher
        .assign
        .iter()
        .map(|&a| if a == UNASSIGNED { 1 } else { a + 1 })
        .collect();
    for clause in &clauses {
        if clause.edges.iter().all(|&e| colouring[e] == clause.colour + 1) {
            return Err(ArrowError::CertificateInvalid);
        }
    }
    Ok(ArrowResult {
        decision: Decision::DoesNotArrow(ColouringCertificate { colouring }),
        stats,
    })
}

/// Connected components of constrained edges under "shares a clause".
fn clause_components(
    edge_count: usize,
    edge_clauses: &[Vec<usize>],
    clauses: &[Clause],
) -> Vec<std::collections::BTreeSet<usize>> {
    let mut parent: Vec<usize> = (0..edge_count).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    for clause in clauses {
        for w in clause.edges.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            parent[a] = b;
        }
    }
    let mut comps: std::collections::BTreeMap<usize, std::collections::BTreeSet<usize>> =
        Default::default();
    for e in 0..edge_count {
        if !edge_clauses[e].is_empty() {
            let root = find(&mut parent, e);
            comps.entry(root).or_default().insert(e);
        }
    }
    comps.into_values().collect()
}

/// Decides G -> (F1, ..., Fr): does every r-colouring of E(G) contain a
/// monochromatic copy of F_i in some colour i?
pub fn arrow_decide(host: &Graph, targets: &[Graph], budget: u64) -> Result<ArrowResult, ArrowError> {
    let copy_lists = untyped_copy_lists(host, targets)?;
    decide(host.edge_count(), copy_lists, false, budget)
}

/// Typed variant: colour-1 constraints range over typed copies of the
/// pattern of `g`; targets occupy colours 2..=r.
pub fn typed_arrow_decide(
    g: &TypedGraph,
    targets: &[Graph],
    budget: u64,
) -> Result<ArrowResult, ArrowError> {
    let r = 1 + targets.len();
    if r > MAX_COLOURS {
        return Err(ArrowError::TooManyColours(r));
    }
    for (i, t) in targets.iter().enumerate() {
        if t.edge_count() == 0 {
            return Err(ArrowError::EmptyTarget(i + 1));
        }
    }
    let mut copy_lists = vec![typed_pattern_copies(g)];
    copy_lists.extend(
        targets
            .iter()
            .map(|t| {
                enumerate_copies(t, g.graph())
                    .iter()
                    .map(|emb| copy_edge_ids(t, g.graph(), emb))
                    .collect::<Vec<_>>()
            }),
    );
    decide(g.graph().edge_count(), copy_lists, true, budget)
}

fn validate_colouring(
    edge_count: usize,
    r: usize,
    cert: &ColouringCertificate,
) -> Result<(), ArrowError> {
    if cert.colouring.len() != edge_count {
        return Err(ArrowError::ColouringLength { expected: edge_count, found: cert.colouring.len() });
    }
    for (edge, &colour) in cert.colouring.iter().enumerate() {
        if colour == 0 || colour as usize > r {
            return Err(ArrowError::ColourOutOfRange { edge, colour, r });
        }
    }
    Ok(())
}

/// Independent re-check of a NO certificate: true iff no copy of F_i is
/// monochromatic in colour i.
pub fn verify_no_certificate(
    host: &Graph,
    targets: &[Graph],
    cert: &ColouringCertificate,
) -> Result<bool, ArrowError> {
    validate_colouring(host.edge_count(), targets.len(), cert)?;
    let copy_lists = untyped_copy_lists(host, targets)?;
    Ok(copy_lists.iter().enumerate().all(|(i, list)| {
        list.iter().all(|edges| !edges.iter().all(|&e| cert.colouring[e] == i as u8 + 1))
    }))
}

/// Typed analogue of [`verify_no_certificate`].
pub fn verify_typed_no_certificate(
    g: &TypedGraph,
    targets: &[Graph],
    cert: &ColouringCertificate,
) -> Result<bool, ArrowError> {
    let r = 1 + targets.len();
    validate_colouring(g.graph().edge_count(), r, cert)?;
    if typed_pattern_copies(g)
        .iter()
        .any(|edges| edges.iter().all(|&e| cert.colouring[e] == 1))
    {
        return Ok(false);
    }
    for (i, t) in targets.iter().enumerate() {
        if t.edge_count() == 0 {
            return Err(ArrowError::EmptyTarget(i + 1));
        }
        let colour = i as u8 + 2;
        for emb in enumerate_copies(t, g.graph()) {
            let edges = copy_edge_ids(t, g.graph(), &emb);
            if edges.iter().all(|&e| cert.colouring[e] == colour) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Recolours every edge outside all copies of `f1` to colour 1; preserves
/// the no-monochromatic-copy property and is idempotent.
pub fn normalize_colouring(
    host: &Graph,
    f1: &Graph,
    cert: &ColouringCertificate,
    r: usize,
) -> Result<ColouringCertificate, ArrowError> {
    validate_colouring(host.edge_count(), r, cert)?;
    if f1.edge_count() == 0 {
        return Err(ArrowError::EmptyTarget(0));
    }
    let mut covered = vec![false; host.edge_count()];
    for emb in enumerate_copies(f1, host) {
        for e in copy_edge_ids(f1, host, &emb) {
            covered[e] = true;
        }
    }
    let colouring = cert
        .colouring
        .iter()
        .enumerate()
        .map(|(e, &c)| if covered[e] { c } else { 1 })
        .collect();
    Ok(ColouringCertificate { colouring })
}

/// Typed analogue: edges outside every typed copy of the pattern go to
/// colour 1.
pub fn normalize_typed_colouring(
    g: &TypedGraph,
    cert: &ColouringCertificate,
    r: usize,
) -> Result<ColouringCertificate, ArrowError> {
    validate_colouring(g.graph().edge_count(), r, cert)?;
    let mut covered = vec![false; g.graph().edge_count()];
    for edges in typed_pattern_copies(g) {
        for e in edges {
            covered[e] = true;
        }
    }
    let colouring = cert
        .colouring
        .iter()
        .enumerate()
        .map(|(e, &c)| if covered[e] { c } else { 1 })
        .collect();
    Ok(ColouringCertificate { colouring })
}

/// Exhaustive minimum of the TOTAL monochromatic copy count over all
/// r-colourings of K_n, with the per-colour breakdown at a minimizer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinMonoReport {
    pub min_total: u64,
    /// Mono-F_i-in-colour-i counts at the minimizing colouring.
    pub per_colour: Vec<u64>,
    pub colouring: ColouringCertificate,
}

/// Minimum over all colourings of the total monochromatic copy count
/// (sum over colours i of mono-F_i copies in colour i) on the complete host.
pub fn min_mono_copies(n: usize, targets: &[Graph], cap: u64) -> Result<MinMonoReport, ArrowError> {
    let host = Graph::complete(n);
    let m = host.edge_count();
    if m > 63 {
        return Err(ArrowError::HostTooLarge(n));
    }
    let copy_lists = untyped_copy_lists(&host, targets)?;
    let r = targets.len();
    let total_colourings = (r as u128).checked_pow(m as u32).ok_or(ArrowError::CapExceeded(u128::MAX, cap))?;
    if total_colourings > cap as u128 {
        return Err(ArrowError::CapExceeded(total_colourings, cap));
    }

    let masks: Vec<Vec<u64>> = copy_lists
        .iter()
        .map(|list| {
            list.iter()
                .map(|edges| edges.iter().fold(0u64, |acc, &e| acc | (1u64 << e)))
                .collect()
        })
        .collect();

    let mut digits = vec![0u8; m];
    let mut best: Option<MinMonoReport> = None;
    loop {
        // Per-colour edge bitmasks of the current colouring.
        let mut colour_mask = vec![0u64; r];
        for (e, &d) in digits.iter().enumerate() {
            colour_mask[d as usize] |= 1u64 << e;
        }
        let per_colour: Vec<u64> = masks
            .iter()
            .enumerate()
            .map(|(i, list)| {
                list.iter().filter(|&&mask| mask & colour_mask[i] == mask).count() as u64
            })
            .collect();
        let total: u64 = per_colour.iter().sum();
        if best.as_ref().map_or(true, |b| total < b.min_total) {
            best = Some(MinMonoReport {
                min_total: total,
                per_colour,
                colouring: ColouringCertificate {
                    colouring: digits.iter().map(|&d| d + 1).collect(),
                },
            });
            if total == 0 {
                break;
            }
        }
        // Next colouring in odometer order.
        let mut pos = 0;
        while pos < m {
            digits[pos] += 1;
            if (digits[pos] as usize) < r {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
        if pos == m {
            break;
        }
    }
    Ok(best.expect("at least one colouring scanned"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeId;

    const BUDGET: u64 = 10_000_000;

    #[test]
    fn k6_arrows_two_triangles() {
        let res = arrow_decide(&Graph::complete(6), &[Graph::complete(3), Graph::complete(3)], BUDGET)
            .unwrap();
        assert_eq!(res.arrows(), Some(true));
        assert_eq!(res.stats.copies_per_colour, vec![20, 20]);
    }

    #[test]
    fn k5_does_not_arrow_two_triangles() {
        let host = Graph::complete(5);
        let targets = [Graph::complete(3), Graph::complete(3)];
        let res = arrow_decide(&host, &targets, BUDGET).unwrap();
        let Decision::DoesNotArrow(cert) = &res.decision else {
            panic!("expected a NO certificate");
        };
        assert!(verify_no_certificate(&host, &targets, cert).unwrap());
        // Pentagon/pentagram structure: both colour classes have 5 edges.
        let fives = cert.colouring.iter().filter(|&&c| c == 1).count();
        assert_eq!(fives, 5);
    }

    #[test]
    fn pendant_c5_arrows_p3_p3() {
        // C5 with one pendant edge at every vertex.
        let mut edges: Vec<(usize, usize)> = (0..5).map(|i| (i, (i + 1) % 5)).collect();
        edges.extend((0..5).map(|i| (i, i + 5)));
        let host = Graph::from_edges(10, &edges).unwrap();
        let p3 = Graph::path(3);
        let res = arrow_decide(&host, &[p3.clone(), p3], BUDGET).unwrap();
        assert_eq!(res.arrows(), Some(true));
    }

    #[test]
    fn k4_arrows_two_stars() {
        let star = Graph::star(2);
        let res = arrow_decide(&Graph::complete(4), &[star.clone(), star], BUDGET).unwrap();
        assert_eq!(res.arrows(), Some(true));
    }

    #[test]
    fn budget_exhaustion_is_indeterminate() {
        let res = arrow_decide(&Graph::complete(6), &[Graph::complete(3), Graph::complete(3)], 3)
            .unwrap();
        assert_eq!(res.decision, Decision::Indeterminate { budget: 3 });
        assert_eq!(res.arrows(), None);
    }

    #[test]
    fn free_edges_get_colour_one() {
        // Triangle plus a disjoint edge, target K3 twice: the disjoint edge
        // sits in no copy and lands in colour 1.
        let host = Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (3, 4)]).unwrap();
        let res = arrow_decide(&host, &[Graph::complete(3), Graph::complete(3)], BUDGET).unwrap();
        let Decision::DoesNotArrow(cert) = &res.decision else { panic!() };
        let disjoint = host.edge_id(3, 4).unwrap().0;
        assert_eq!(cert.colouring[disjoint], 1);
    }

    #[test]
    fn single_colour_decides_presence() {
        // r = 1: G arrows (F) iff G contains a copy of F.
        let host = Graph::complete(4);
        assert_eq!(arrow_decide(&host, &[Graph::complete(3)], BUDGET).unwrap().arrows(), Some(true));
        assert_eq!(
            arrow_decide(&host, &[Graph::complete(5)], BUDGET).unwrap().arrows(),
            Some(false)
        );
    }

    #[test]
    fn rejects_bad_inputs() {
        let host = Graph::complete(3);
        assert_eq!(arrow_decide(&host, &[], BUDGET), Err(ArrowError::NoTargets));
        assert_eq!(
            arrow_decide(&host, &[Graph::empty(2).unwrap()], BUDGET),
            Err(ArrowError::EmptyTarget(0))
        );
        let seven = vec![Graph::complete(3); 7];
        assert_eq!(arrow_decide(&host, &seven, BUDGET), Err(ArrowError::TooManyColours(7)));
    }

    fn typed_host(host: Graph, pattern: Graph, types: Vec<usize>) -> TypedGraph {
        let types = types.into_iter().map(EdgeId).collect();
        TypedGraph::new(host, pattern, types).unwrap()
    }

    #[test]
    fn typed_single_copy_forces_colour_one() {
        // G = one typed triangle, r = 1: every edge must take colour 1, which
        // leaves the typed copy monochromatic, so the typed arrow holds.
        let g = typed_host(Graph::complete(3), Graph::complete(3), vec![0, 1, 2]);
        let res = typed_arrow_decide(&g, &[], BUDGET).unwrap();
        assert_eq!(res.arrows(), Some(true));
    }

    #[test]
    fn typed_no_copies_all_colour_one() {
        // All-same-type K4 has no typed triangle; no K5 exists either.
        let g = typed_host(Graph::complete(4), Graph::complete(3), vec![0; 6]);
        let res = typed_arrow_decide(&g, &[Graph::complete(5)], BUDGET).unwrap();
        let Decision::DoesNotArrow(cert) = &res.decision else { panic!() };
        assert!(cert.colouring.iter().all(|&c| c == 1));
        assert!(verify_typed_no_certificate(&g, &[Graph::complete(5)], cert).unwrap());
    }

    #[test]
    fn normalize_recolours_uncovered_edges() {
        let host = Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (3, 4)]).unwrap();
        let cert = ColouringCertificate { colouring: vec![2; 4] };
        let normalized = normalize_colouring(&host, &Graph::complete(3), &cert, 2).unwrap();
        let disjoint = host.edge_id(3, 4).unwrap().0;
        assert_eq!(normalized.colouring[disjoint], 1);
        let tri_edge = host.edge_id(0, 1).unwrap().0;
        assert_eq!(normalized.colouring[tri_edge], 2);
        // Idempotent.
        let again = normalize_colouring(&host, &Graph::complete(3), &normalized, 2).unwrap();
        assert_eq!(again, normalized);
    }

    #[test]
    fn min_mono_k6_triangles_is_two() {
        let report =
            min_mono_copies(6, &[Graph::complete(3), Graph::complete(3)], 1 << 20).unwrap();
        assert_eq!(report.min_total, 2);
        assert_eq!(report.per_colour.iter().sum::<u64>(), 2);
    }

    #[test]
    fn min_mono_k5_triangles_is_zero() {
        let report =
            min_mono_copies(5, &[Graph::complete(3), Graph::complete(3)], 1 << 12).unwrap();
        assert_eq!(report.min_total, 0);
    }

    #[test]
    fn min_mono_single_edge() {
        let report = min_mono_copies(2, &[Graph::complete(2)], 16).unwrap();
        assert_eq!(report.min_total, 1);
        assert_eq!(report.per_colour, vec![1]);
    }

    #[test]
    fn min_mono_cap_respected() {
        assert!(matches!(
            min_mono_copies(6, &[Graph::complete(3), Graph::complete(3)], 100),
            Err(ArrowError::CapExceeded(32768, 100))
        ));
    }
}
