//! Augmenting a base graph to capacitated k-edge-connectivity by covering
//! near-minimum cuts level by level.

use serde::Serialize;

use crate::cut_structure::SetFamily;
use crate::family_cover::{exact_min_cover, CoverInstance, CoverSolver, SolverSlots};
use crate::multigraph::{Edge, EdgeFilter, Multigraph};
use crate::{Error, Rational, Result, Weight};

/// Base edges (flagged `is_base`, capacity 1, free) plus priced candidate edges.
#[derive(Clone, Debug)]
pub struct AugmentInstance {
    pub graph: Multigraph,
    pub k: Weight,
    pub lambda0: Weight,
    /// Ids of the non-base edges.
    pub candidates: Vec<usize>,
}

impl AugmentInstance {
    pub fn new(graph: Multigraph, k: Weight) -> Result<Self> {
        if graph.node_count() < 2 {
            return Err(Error::InvalidGraph("augmentation needs at least two nodes".into()));
        }
        if let Some(e) = graph.edges().iter().find(|e| e.is_base && e.capacity != 1) {
            return Err(Error::precondition(format!(
                "base edge {}-{} has capacity {}; base edges must have capacity 1",
                e.u, e.v, e.capacity
            )));
        }
        let lambda0 = graph.min_cut_value(EdgeFilter::Base, true)?;
        if let Some(e) = graph
            .edges()
            .iter()
            .find(|e| !e.is_base && lambda0 < k && e.capacity < k - lambda0)
        {
            return Err(Error::precondition(format!(
                "candidate {}-{} has capacity {} below k-λ0 = {}",
                e.u,
                e.v,
                e.capacity,
                k - lambda0
            )));
        }
        let candidates = (0..graph.edge_count()).filter(|&i| !graph.edge(i).is_base).collect();
        Ok(AugmentInstance { graph, k, lambda0, candidates })
    }

    /// Capacity every added candidate counts with.
    pub fn added_capacity(&self) -> Weight {
        self.k.saturating_sub(self.lambda0)
    }

    /// Base edges plus the chosen candidates at capacity k-λ0.
    pub fn current_graph(&self, chosen: &[usize]) -> Multigraph {
        let cap = self.added_capacity().max(1);
        let mut g = Multigraph::new(self.graph.node_count()).expect("node count already checked");
        for e in self.graph.edges().iter().filter(|e| e.is_base) {
            g.add_edge(e.clone()).expect("edge already valid");
        }
        for &id in chosen {
            let e = self.graph.edge(id);
            g.add_edge(Edge::new(e.u, e.v).with_cost(e.cost).with_capacity(cap))
                .expect("edge already valid");
        }
        g
    }

    pub fn cost(&self, chosen: &[usize]) -> Weight {
        self.graph.total_cost(chosen)
    }

    pub fn is_feasible(&self, chosen: &[usize]) -> Result<bool> {
        self.current_graph(chosen).is_k_edge_connected(self.k, EdgeFilter::All, true)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StageLog {
    pub lambda: Weight,
    /// Cut values covered in this stage.
    pub levels: Vec<Weight>,
    pub family_size: usize,
    pub solver: String,
    pub cost: Weight,
    pub guarantee: Rational,
    pub connectivity_after: Weight,
}

#[derive(Clone, Debug, Serialize)]
pub struct AugmentSolution {
    /// Chosen candidate edge ids, ascending.
    pub chosen: Vec<usize>,
    pub cost: Weight,
    pub lambda0: Weight,
    pub k: Weight,
    pub stages: Vec<StageLog>,
    pub ratio_bound: Rational,
    pub final_connectivity: Weight,
}

/// Cuts whose capacitated value is below `k`.
pub fn deficient_family(g: &Multigraph, k: Weight) -> Result<SetFamily> {
    if k == 0 {
        return Ok(SetFamily::empty(g.node_count()));
    }
    let cuts = g.enumerate_cuts_at_most(k - 1, EdgeFilter::All, true)?;
    SetFamily::new(g.node_count(), cuts.iter().map(|c| c.set))
}

/// Cuts whose capacitated value is `lambda` or `lambda + 1`.
pub fn level_family(g: &Multigraph, lambda: Weight) -> Result<SetFamily> {
    levels_family(g, &[lambda, lambda + 1])
}

fn levels_family(g: &Multigraph, levels: &[Weight]) -> Result<SetFamily> {
    let top = *levels.iter().max().expect("at least one level");
    let cuts = g.enumerate_cuts_at_most(top, EdgeFilter::All, true)?;
    SetFamily::new(
        g.node_count(),
        cuts.iter().filter(|c| levels.contains(&c.value(true))).map(|c| c.set),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Stage {
    Single(Weight),
    Pair(Weight),
}

fn schedule(lambda0: Weight, k: Weight) -> Vec<Stage> {
    let mut out = Vec::new();
    if lambda0 >= k {
        return out;
    }
    let mut lambda = lambda0;
    if lambda % 2 == 1 {
        out.push(Stage::Single(lambda));
        lambda += 1;
    }
    while lambda + 2 <= k {
        out.push(Stage::Pair(lambda));
        lambda += 2;
    }
    if lambda + 1 == k {
        out.push(Stage::Single(lambda));
    }
    out
}

/// Provable ratio of [`near_min_cuts_cover`] given the guarantees of the
/// pair-stage and single-level solvers.
pub fn implemented_ratio_bound(lambda0: Weight, k: Weight, g_pair: Rational, g_single: Rational) -> Rational {
    schedule(lambda0, k).iter().fold(Rational::from_integer(0), |acc, st| match st {
        Stage::Pair(_) => acc + g_pair,
        Stage::Single(_) => acc + g_single,
    })
}

/// Covers levels of near-minimum cuts until the graph is k-connected.
///
/// An odd λ0 first gets a single-level stage. Then each stage covers the
/// cuts of value λ and λ+1 and raises λ by two. If one level remains it is
/// covered alone. Added candidates count with capacity k-λ0.
pub fn near_min_cuts_cover(inst: &AugmentInstance, slots: &SolverSlots) -> Result<AugmentSolution> {
    let (k, n) = (inst.k, inst.graph.node_count());
    let mut chosen: Vec<usize> = Vec::new();
    let mut stages = Vec::new();
    let mut connectivity = inst.lambda0;
    for stage in schedule(inst.lambda0, k) {
        let g = inst.current_graph(&chosen);
        let (lambda, levels, solver): (Weight, Vec<Weight>, &dyn CoverSolver) = match stage {
            Stage::Single(l) => (l, vec![l], slots.ring_cover_solver.as_ref()),
            Stage::Pair(l) => (l, vec![l, l + 1], slots.uncrossable.as_ref()),
        };
        let family = levels_family(&g, &levels)?;
        if matches!(stage, Stage::Single(l) if l % 2 == 1 && l == connectivity) {
            if let Some((a, b)) = family.laminar_violation() {
                return Err(Error::Internal(format!("odd min-cut family crosses at {a}, {b}")));
            }
        }
        let remaining: Vec<usize> = inst.candidates.iter().copied().filter(|id| !chosen.contains(id)).collect();
        let cover = CoverInstance::from_graph(&inst.graph, &remaining, family.clone())?;
        let sol = solver.solve(&cover)?;
        chosen.extend(&sol.chosen);
        chosen.sort_unstable();
        let after = inst.current_graph(&chosen).min_cut_value(EdgeFilter::All, true)?;
        let want = match stage {
            Stage::Single(_) => lambda + 1,
            Stage::Pair(_) => lambda + 2,
        };
        if after < want.min(k) {
            return Err(Error::Internal(format!(
                "connectivity {after} after covering level {lambda}, expected at least {}",
                want.min(k)
            )));
        }
        log::debug!("stage λ={lambda} levels {levels:?}: {} cuts, cost {}", family.len(), sol.cost);
        stages.push(StageLog {
            lambda,
            levels,
            family_size: family.len(),
            solver: solver.name().to_string(),
            cost: sol.cost,
            guarantee: solver.guarantee(),
            connectivity_after: after,
        });
        connectivity = after;
    }
    if n >= 2 && !inst.is_feasible(&chosen)? {
        return Err(Error::Internal("output is not k-edge-connected".into()));
    }
    Ok(AugmentSolution {
        cost: inst.cost(&chosen),
        chosen,
        lambda0: inst.lambda0,
        k,
        ratio_bound: implemented_ratio_bound(
            inst.lambda0,
            k,
            slots.uncrossable.guarantee(),
            slots.ring_cover_solver.guarantee(),
        ),
        final_connectivity: connectivity,
        stages,
    })
}

/// Minimum-cost candidate set making the base graph k-connected. Since every
/// added candidate counts with capacity at least k-λ0, this is exactly a
/// cover of the deficient cuts of the base graph.
pub fn exact_augment(inst: &AugmentInstance) -> Result<crate::family_cover::CoverSolution> {
    let base = inst.current_graph(&[]);
    let family = deficient_family(&base, inst.k)?;
    exact_min_cover(&CoverInstance::from_graph(&inst.graph, &inst.candidates, family)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::NodeSet;

    fn r(x: i64) -> Rational {
        Rational::from_integer(x)
    }

    fn c4_base() -> Vec<Edge> {
        [(0, 1), (1, 2), (2, 3), (3, 0)].iter().map(|&(u, v)| Edge::new(u, v).base()).collect()
    }

    fn c4_with_chords(k: Weight) -> AugmentInstance {
        let mut edges = c4_base();
        edges.push(Edge::new(0, 2).with_cost(1).with_capacity(2));
        edges.push(Edge::new(1, 3).with_cost(1).with_capacity(2));
        AugmentInstance::new(Multigraph::with_edges(4, edges).unwrap(), k).unwrap()
    }

    #[test]
    fn deficient_family_examples() {
        let c4 = Multigraph::with_edges(4, c4_base()).unwrap();
        assert_eq!(deficient_family(&c4, 4).unwrap().len(), 6);
        assert!(deficient_family(&c4, 2).unwrap().is_empty());

        let mut chord = c4_base();
        chord.push(Edge::new(0, 2).with_capacity(2));
        let g = Multigraph::with_edges(4, chord).unwrap();
        let fam = deficient_family(&g, 4).unwrap();
        // only {1} and {3} stay below 4
        assert_eq!(fam.members(), &[NodeSet::singleton(1), NodeSet::singleton(3)]);
    }

    #[test]
    fn level_family_examples() {
        let c4 = Multigraph::with_edges(4, c4_base()).unwrap();
        assert_eq!(level_family(&c4, 2).unwrap().len(), 6);
        assert!(levels_family(&c4, &[3]).unwrap().is_empty());
    }

    #[test]
    fn c4_with_chords_needs_both() {
        let inst = c4_with_chords(4);
        assert_eq!(inst.lambda0, 2);
        let sol = near_min_cuts_cover(&inst, &SolverSlots::default()).unwrap();
        assert_eq!(sol.cost, 2);
        assert_eq!(sol.chosen, vec![4, 5]);
        assert!(sol.final_connectivity >= 4);
        assert_eq!(exact_augment(&inst).unwrap().cost, 2);
        assert_eq!(sol.ratio_bound, r(2));
    }

    #[test]
    fn already_connected_needs_nothing() {
        let inst = c4_with_chords(2);
        let sol = near_min_cuts_cover(&inst, &SolverSlots::default()).unwrap();
        assert!(sol.chosen.is_empty() && sol.stages.is_empty());
        assert_eq!(exact_augment(&inst).unwrap().cost, 0);
    }

    #[test]
    fn single_candidate_instance() {
        let mut edges: Vec<Edge> = [(0, 1), (1, 2)].iter().map(|&(u, v)| Edge::new(u, v).base()).collect();
        edges.push(Edge::new(0, 2).with_cost(7));
        let inst = AugmentInstance::new(Multigraph::with_edges(3, edges).unwrap(), 2).unwrap();
        let opt = exact_augment(&inst).unwrap();
        assert_eq!((opt.cost, opt.chosen.clone()), (7, vec![2]));
        assert_eq!(near_min_cuts_cover(&inst, &SolverSlots::default()).unwrap().cost, 7);
    }

    #[test]
    fn rejects_bad_capacities() {
        let mut edges = c4_base();
        edges[0].capacity = 2;
        assert!(AugmentInstance::new(Multigraph::with_edges(4, edges).unwrap(), 4).is_err());
        let mut edges = c4_base();
        edges.push(Edge::new(0, 2).with_cost(1));
        assert!(AugmentInstance::new(Multigraph::with_edges(4, edges).unwrap(), 4).is_err());
    }

    #[test]
    fn ratio_bounds() {
        let two = r(2);
        assert_eq!(implemented_ratio_bound(2, 4, two, two), r(2));
        assert_eq!(implemented_ratio_bound(3, 4, two, two), r(2));
        assert_eq!(implemented_ratio_bound(3, 4, two, Rational::new(3, 2)), Rational::new(3, 2));
        assert_eq!(implemented_ratio_bound(3, 5, two, two), r(4));
        assert_eq!(implemented_ratio_bound(2, 5, two, two), r(4));
        assert_eq!(implemented_ratio_bound(1, 5, two, two), r(6));
        assert_eq!(implemented_ratio_bound(4, 4, two, two), r(0));
    }

    #[test]
    fn schedules() {
        assert_eq!(schedule(2, 4), vec![Stage::Pair(2)]);
        assert_eq!(schedule(3, 5), vec![Stage::Single(3), Stage::Single(4)]);
        assert_eq!(schedule(1, 6), vec![Stage::Single(1), Stage::Pair(2), Stage::Pair(4)]);
    }
}
