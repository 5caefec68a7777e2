//! Min-cost covers of explicit set families by candidate edges.

mod exact;
mod primal_dual;

use std::sync::Arc;

use serde::Serialize;

pub use exact::{exact_min_cover, exact_min_cover_with_budget, DEFAULT_NODE_BUDGET};
pub use primal_dual::primal_dual_uncrossable_cover;

use crate::cut_structure::SetFamily;
use crate::multigraph::{Multigraph, NodeSet};
use crate::{Error, Rational, Result, Weight};

/// A candidate edge; `id` is whatever the caller uses to name it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Candidate {
    pub id: usize,
    pub u: usize,
    pub v: usize,
    pub cost: Weight,
}

impl Candidate {
    pub fn crosses(&self, s: NodeSet) -> bool {
        s.contains(self.u) != s.contains(self.v)
    }
}

#[derive(Clone, Debug)]
pub struct CoverInstance {
    pub n: usize,
    pub candidates: Vec<Candidate>,
    pub family: SetFamily,
}

impl CoverInstance {
    pub fn new(n: usize, candidates: Vec<Candidate>, family: SetFamily) -> Result<Self> {
        if family.ground_size() != n {
            return Err(Error::precondition("family and candidates use different ground sets"));
        }
        if let Some(c) = candidates.iter().find(|c| c.u >= n || c.v >= n || c.u == c.v) {
            return Err(Error::InvalidGraph(format!("bad candidate {}-{}", c.u, c.v)));
        }
        Ok(CoverInstance { n, candidates, family })
    }

    /// Candidates are the edges of `g` listed in `ids`; solutions report those ids.
    pub fn from_graph(g: &Multigraph, ids: &[usize], family: SetFamily) -> Result<Self> {
        let candidates = ids
            .iter()
            .map(|&id| {
                let e = g.edge(id);
                Candidate { id, u: e.u, v: e.v, cost: e.cost }
            })
            .collect();
        Self::new(g.node_count(), candidates, family)
    }

    /// The candidates named by `ids`, in instance order.
    pub fn candidates_by_id(&self, ids: &[usize]) -> Vec<Candidate> {
        self.candidates.iter().filter(|c| ids.contains(&c.id)).copied().collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverSolution {
    /// Chosen candidate ids, ascending.
    pub chosen: Vec<usize>,
    pub cost: Weight,
    pub method: String,
    /// Sum of dual variables, a lower bound on the optimum (primal-dual only).
    pub dual_total: Option<Rational>,
    /// Search nodes visited (exact solver only).
    pub nodes_explored: u64,
}

impl CoverSolution {
    pub(crate) fn from_candidates(chosen: &[Candidate], method: &str) -> Self {
        let mut ids: Vec<usize> = chosen.iter().map(|c| c.id).collect();
        ids.sort_unstable();
        CoverSolution {
            chosen: ids,
            cost: chosen.iter().map(|c| c.cost).sum(),
            method: method.to_string(),
            dual_total: None,
            nodes_explored: 0,
        }
    }
}

/// First member not crossed by any of `edges`.
pub fn first_uncovered(edges: &[Candidate], fam: &SetFamily) -> Option<NodeSet> {
    fam.iter().find(|&s| !edges.iter().any(|c| c.crosses(s)))
}

pub fn covers(edges: &[Candidate], fam: &SetFamily) -> bool {
    first_uncovered(edges, fam).is_none()
}

/// Drops edges of `j` in order while the rest still covers `fam`; the result
/// is inclusion-minimal and checked to be a forest.
pub fn minimal_cover(j: &[Candidate], fam: &SetFamily) -> Result<Vec<Candidate>> {
    if let Some(s) = first_uncovered(j, fam) {
        return Err(Error::precondition_at("edge set does not cover the family", s));
    }
    let n = fam.ground_size();
    // crossing counts per member, so each removal test is a scan of one edge's members
    let members: Vec<NodeSet> = fam.iter().collect();
    let mut hits: Vec<u32> = members
        .iter()
        .map(|&s| j.iter().filter(|c| c.crosses(s)).count() as u32)
        .collect();
    let mut keep = vec![true; j.len()];
    for (i, c) in j.iter().enumerate() {
        let needed = members.iter().zip(&hits).any(|(&s, &h)| h == 1 && c.crosses(s));
        if !needed {
            keep[i] = false;
            for (s, h) in members.iter().zip(hits.iter_mut()) {
                if c.crosses(*s) {
                    *h -= 1;
                }
            }
        }
    }
    let out: Vec<Candidate> = j.iter().zip(keep).filter(|(_, k)| *k).map(|(c, _)| *c).collect();
    if let Some(c) = first_cycle_edge(n, &out) {
        return Err(Error::Internal(format!("minimal cover contains a cycle through {}-{}", c.u, c.v)));
    }
    Ok(out)
}

/// An edge closing a cycle, if the edges are not a forest.
pub fn first_cycle_edge(n: usize, edges: &[Candidate]) -> Option<Candidate> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for c in edges {
        let (a, b) = (root(&mut parent, c.u), root(&mut parent, c.v));
        if a == b {
            return Some(*c);
        }
        parent[a] = b;
    }
    None
}

/// Covers a symmetric proper crossing family: members are normalized to the
/// side avoiding node 0, and if the result is uncrossable it goes to the
/// primal-dual solver; otherwise the exact solver is used.
pub fn cover_symmetric_crossing(inst: &CoverInstance) -> Result<CoverSolution> {
    if let Some(v) = inst.family.symmetric_proper_crossing_violation() {
        let (a, b) = v.sets();
        return Err(Error::Precondition {
            what: format!("family is not symmetric proper crossing: {v}"),
            witness: Some((a, b)),
        });
    }
    let rooted = CoverInstance {
        n: inst.n,
        candidates: inst.candidates.clone(),
        family: inst.family.canonical(),
    };
    if rooted.family.is_uncrossable() {
        let mut sol = primal_dual_uncrossable_cover(&rooted)?;
        sol.method = "symmetric-crossing/primal-dual".into();
        Ok(sol)
    } else {
        log::warn!("rooted family is not uncrossable, falling back to the exact cover");
        let mut sol = exact_min_cover(&rooted)?;
        sol.method = "symmetric-crossing/exact".into();
        Ok(sol)
    }
}

/// A pluggable cover algorithm with a proven approximation guarantee.
pub trait CoverSolver: Send + Sync {
    fn name(&self) -> &'static str;
    fn guarantee(&self) -> Rational;
    fn solve(&self, inst: &CoverInstance) -> Result<CoverSolution>;
}

#[derive(Clone, Copy, Debug)]
pub struct ExactCover {
    pub budget: u64,
}

impl Default for ExactCover {
    fn default() -> Self {
        ExactCover { budget: DEFAULT_NODE_BUDGET }
    }
}

impl CoverSolver for ExactCover {
    fn name(&self) -> &'static str {
        "exact"
    }
    fn guarantee(&self) -> Rational {
        Rational::from_integer(1)
    }
    fn solve(&self, inst: &CoverInstance) -> Result<CoverSolution> {
        exact_min_cover_with_budget(inst, self.budget)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PrimalDual;

impl CoverSolver for PrimalDual {
    fn name(&self) -> &'static str {
        "pd2"
    }
    fn guarantee(&self) -> Rational {
        Rational::from_integer(2)
    }
    fn solve(&self, inst: &CoverInstance) -> Result<CoverSolution> {
        primal_dual_uncrossable_cover(inst)
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SymmetricCrossing;

impl CoverSolver for SymmetricCrossing {
    fn name(&self) -> &'static str {
        "symmetric-crossing"
    }
    fn guarantee(&self) -> Rational {
        Rational::from_integer(2)
    }
    fn solve(&self, inst: &CoverInstance) -> Result<CoverSolution> {
        cover_symmetric_crossing(inst)
    }
}

/// The solvers the staged algorithms call; ratio accounting reads their guarantees.
#[derive(Clone)]
pub struct SolverSlots {
    /// Uncrossable families.
    pub uncrossable: Arc<dyn CoverSolver>,
    /// Single-level families: laminar odd min-cut families and boundary stages.
    pub ring_cover_solver: Arc<dyn CoverSolver>,
    /// Symmetric proper crossing families.
    pub symmetric: Arc<dyn CoverSolver>,
}

impl Default for SolverSlots {
    fn default() -> Self {
        SolverSlots {
            uncrossable: Arc::new(PrimalDual),
            ring_cover_solver: Arc::new(PrimalDual),
            symmetric: Arc::new(SymmetricCrossing),
        }
    }
}

impl SolverSlots {
    /// Parses a single-level solver name: `exact` or `pd2`.
    pub fn with_single_level(mut self, name: &str) -> Result<Self> {
        self.ring_cover_solver = match name {
            "exact" => Arc::new(ExactCover::default()),
            "pd2" => Arc::new(PrimalDual),
            other => return Err(Error::precondition(format!("unknown solver {other:?}"))),
        };
        Ok(self)
    }
}

impl std::fmt::Debug for SolverSlots {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SolverSlots")
            .field("uncrossable", &self.uncrossable.name())
            .field("ring_cover_solver", &self.ring_cover_solver.name())
            .field("symmetric", &self.symmetric.name())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::EdgeFilter;

    pub(crate) fn s(v: &[usize]) -> NodeSet {
        NodeSet::from_nodes(v.iter().copied())
    }

    pub(crate) fn cand(id: usize, u: usize, v: usize, cost: Weight) -> Candidate {
        Candidate { id, u, v, cost }
    }

    pub(crate) fn c4_cuts(max: Weight) -> SetFamily {
        let g = Multigraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let cuts = g.enumerate_cuts_at_most(max, EdgeFilter::All, true).unwrap();
        SetFamily::new(4, cuts.iter().map(|c| c.set)).unwrap()
    }

    #[test]
    fn covers_examples() {
        let fam = c4_cuts(2);
        let chords = [cand(0, 0, 2, 1), cand(1, 1, 3, 1)];
        assert!(covers(&chords, &fam));
        // 0-2 crosses neither {1} nor {3}; the scan reports the smaller one
        assert!(!covers(&chords[..1], &fam));
        assert_eq!(first_uncovered(&chords[..1], &fam), Some(s(&[1])));
        assert!(!covers(&chords[..1], &SetFamily::new(4, [s(&[3])]).unwrap()));
        assert!(covers(&[], &SetFamily::empty(4)));
    }

    #[test]
    fn minimal_cover_drops_redundant_edges() {
        let fam = c4_cuts(2);
        let j = [cand(0, 0, 1, 1), cand(1, 0, 2, 1), cand(2, 1, 3, 1)];
        let m = minimal_cover(&j, &fam).unwrap();
        assert_eq!(m.iter().map(|c| c.id).collect::<Vec<_>>(), vec![1, 2]);
        assert_eq!(minimal_cover(&m, &fam).unwrap(), m);
        assert!(first_cycle_edge(4, &m).is_none());
        assert!(minimal_cover(&j[..1], &fam).is_err());
    }

    #[test]
    fn symmetric_crossing_examples() {
        let fam = c4_cuts(2).symmetric_closure();
        let inst = CoverInstance::new(4, vec![cand(0, 0, 2, 1), cand(1, 1, 3, 1)], fam).unwrap();
        let sol = cover_symmetric_crossing(&inst).unwrap();
        assert_eq!(sol.cost, 2);

        let empty = CoverInstance::new(4, vec![cand(0, 0, 2, 1)], SetFamily::empty(4)).unwrap();
        assert_eq!(cover_symmetric_crossing(&empty).unwrap().cost, 0);

        let bad = SetFamily::oriented(4, (1..15u64).map(NodeSet)).unwrap();
        let inst = CoverInstance::new(4, vec![cand(0, 0, 2, 1)], bad).unwrap();
        assert!(matches!(
            cover_symmetric_crossing(&inst),
            Err(Error::Precondition { witness: Some(_), .. })
        ));
    }

    #[test]
    fn slots_report_guarantees() {
        let slots = SolverSlots::default();
        assert_eq!(slots.uncrossable.guarantee(), Rational::from_integer(2));
        let exact = slots.clone().with_single_level("exact").unwrap();
        assert_eq!(exact.ring_cover_solver.guarantee(), Rational::from_integer(1));
        assert!(SolverSlots::default().with_single_level("tz").is_err());
    }
}
