//! (k,q)-flexible connectivity: every cut needs at least k safe edges or at
//! least k+q edges in total. Feasibility checks, the F_q families, and the
//! phase-by-phase cover algorithms.

mod search;

use std::str::FromStr;

use serde::Serialize;

pub use search::DEFAULT_FLEX_BUDGET;

use crate::cut_structure::{decompose_f2_odd, SetFamily};
use crate::family_cover::{covers, minimal_cover, Candidate, CoverInstance, CoverSolver, ExactCover, SolverSlots};
use crate::multigraph::{EdgeFilter, Multigraph, NodeSet};
use crate::{Error, Rational, Result, Weight};

#[derive(Clone, Debug)]
pub struct FlexInstance {
    /// Unsafe edges are flagged; capacities are ignored.
    pub graph: Multigraph,
    pub k: u32,
    pub q: u32,
}

impl FlexInstance {
    pub fn new(graph: Multigraph, k: u32, q: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::precondition("k must be at least 1"));
        }
        Ok(FlexInstance { graph, k, q })
    }

    pub fn is_unit_cost(&self) -> bool {
        self.graph.edges().iter().all(|e| e.cost == 1)
    }

    pub fn subgraph(&self, ids: &[usize]) -> Multigraph {
        self.graph.subgraph(ids).with_unit_capacities()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PhaseLog {
    pub name: String,
    pub family_size: usize,
    pub solver: String,
    pub cost: Weight,
    pub guarantee: Rational,
    /// Edge ids added in this phase.
    pub added: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FlexSolution {
    /// Edge ids of H, ascending.
    pub chosen: Vec<usize>,
    pub cost: Weight,
    pub phases: Vec<PhaseLog>,
    /// Sum of the phase guarantees.
    pub guarantee: Rational,
    pub kecss_guarantee: Rational,
    pub nodes_explored: u64,
}

impl FlexSolution {
    fn from_phases(g: &Multigraph, phases: Vec<PhaseLog>, kecss_guarantee: Rational, nodes: u64) -> Self {
        let mut chosen: Vec<usize> = phases.iter().flat_map(|p| p.added.iter().copied()).collect();
        chosen.sort_unstable();
        chosen.dedup();
        FlexSolution {
            cost: g.total_cost(&chosen),
            guarantee: phases.iter().map(|p| p.guarantee).sum(),
            chosen,
            phases,
            kecss_guarantee,
            nodes_explored: nodes,
        }
    }
}

/// First cut (by set encoding) with fewer than `k + min(d_U, q)` edges.
pub fn flex_violation(h: &Multigraph, k: u32, q: u32) -> Result<Option<NodeSet>> {
    if h.node_count() < 2 {
        return Ok(None);
    }
    let all = h.cut_table(EdgeFilter::All, false)?;
    let unsafe_ = h.cut_table(EdgeFilter::Unsafe, false)?;
    let (k, q) = (Weight::from(k), Weight::from(q));
    let found = all.iter().find(|&(s, d)| d < k + unsafe_.value(s).min(q)).map(|(s, _)| s);
    Ok(found)
}

pub fn is_flex_connected(h: &Multigraph, k: u32, q: u32) -> Result<bool> {
    Ok(flex_violation(h, k, q)?.is_none())
}

/// Unsafe edges of `h` whose removal leaves fewer than `k` edge-disjoint
/// paths between some pair, over all removals of at most `q` unsafe edges.
pub fn removal_violation(h: &Multigraph, k: u32, q: u32) -> Result<Option<Vec<usize>>> {
    if h.node_count() < 2 {
        return Ok(None);
    }
    let unsafe_ids: Vec<usize> = (0..h.edge_count()).filter(|&i| h.edge(i).is_unsafe).collect();
    let mut pick: Vec<usize> = Vec::new();
    fn rec(
        h: &Multigraph,
        k: Weight,
        ids: &[usize],
        start: usize,
        left: u32,
        pick: &mut Vec<usize>,
    ) -> Result<Option<Vec<usize>>> {
        let keep: Vec<usize> = (0..h.edge_count()).filter(|i| !pick.contains(i)).collect();
        if !h.subgraph(&keep).is_k_edge_connected(k, EdgeFilter::All, false)? {
            return Ok(Some(pick.clone()));
        }
        if left == 0 {
            return Ok(None);
        }
        for i in start..ids.len() {
            pick.push(ids[i]);
            let found = rec(h, k, ids, i + 1, left - 1, pick)?;
            pick.pop();
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
    rec(h, Weight::from(k), &unsafe_ids, 0, q, &mut pick)
}

/// Same predicate as [`is_flex_connected`], checked by deleting every set of
/// at most `q` unsafe edges.
pub fn is_flex_connected_by_removal(h: &Multigraph, k: u32, q: u32) -> Result<bool> {
    Ok(removal_violation(h, k, q)?.is_none())
}

/// Cuts with exactly `k + q - 1` edges of which at least `q` are unsafe.
/// `h` must be (k, q-1)-flex-connected.
pub fn enumerate_fq(h: &Multigraph, k: u32, q: u32) -> Result<SetFamily> {
    if q == 0 {
        return Err(Error::precondition("F_q is defined for q ≥ 1"));
    }
    if let Some(w) = flex_violation(h, k, q - 1)? {
        return Err(Error::precondition_at(format!("H is not ({k},{})-flex-connected", q - 1), w));
    }
    let n = h.node_count();
    if n < 2 {
        return Ok(SetFamily::empty(n));
    }
    let all = h.cut_table(EdgeFilter::All, false)?;
    let unsafe_ = h.cut_table(EdgeFilter::Unsafe, false)?;
    let target = Weight::from(k + q - 1);
    let fam = SetFamily::new(
        n,
        all.iter()
            .filter(|&(s, d)| d == target && unsafe_.value(s) >= Weight::from(q))
            .map(|(s, _)| s),
    )?;
    log::debug!("|F_{q}| = {} (n^4 = {})", fam.len(), n.pow(4));
    Ok(fam)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize)]
pub enum KecssMode {
    Exact,
    /// Exact search, accounted with guarantee 2.
    #[default]
    Approx2,
}

impl KecssMode {
    pub fn guarantee(self) -> Rational {
        match self {
            KecssMode::Exact => Rational::from_integer(1),
            KecssMode::Approx2 => Rational::from_integer(2),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            KecssMode::Exact => "exact",
            KecssMode::Approx2 => "approx2",
        }
    }
}

impl FromStr for KecssMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(KecssMode::Exact),
            "approx2" => Ok(KecssMode::Approx2),
            other => Err(Error::precondition(format!("unknown kecss mode {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct KecssResult {
    pub edges: Vec<usize>,
    pub cost: Weight,
    pub guarantee: Rational,
    pub nodes_explored: u64,
}

/// Min-cost k-edge-connected spanning subgraph (edge multiplicities, no capacities).
pub fn kecss(g: &Multigraph, k: u32, mode: KecssMode) -> Result<KecssResult> {
    let (edges, nodes) = search::min_flex_subgraph(g, k, 0, DEFAULT_FLEX_BUDGET)?;
    Ok(KecssResult {
        cost: g.total_cost(&edges),
        edges,
        guarantee: mode.guarantee(),
        nodes_explored: nodes,
    })
}

/// Optimal (k,q)-flex-connected subgraph by branch and bound.
pub fn exact_fgc(inst: &FlexInstance) -> Result<FlexSolution> {
    exact_fgc_with_budget(inst, DEFAULT_FLEX_BUDGET)
}

pub fn exact_fgc_with_budget(inst: &FlexInstance, budget: u64) -> Result<FlexSolution> {
    let (edges, nodes) = search::min_flex_subgraph(&inst.graph, inst.k, inst.q, budget)?;
    let phase = PhaseLog {
        name: "exact".into(),
        family_size: 0,
        solver: "exact".into(),
        cost: inst.graph.total_cost(&edges),
        guarantee: Rational::from_integer(1),
        added: edges,
    };
    Ok(FlexSolution::from_phases(&inst.graph, vec![phase], Rational::from_integer(1), nodes))
}

fn cover_phase(
    inst: &FlexInstance,
    h: &[usize],
    name: String,
    family: SetFamily,
    solver: &dyn CoverSolver,
) -> Result<PhaseLog> {
    let outside: Vec<usize> = (0..inst.graph.edge_count()).filter(|i| !h.contains(i)).collect();
    let sol = solver.solve(&CoverInstance::from_graph(&inst.graph, &outside, family.clone())?)?;
    Ok(PhaseLog {
        name,
        family_size: family.len(),
        solver: solver.name().to_string(),
        cost: sol.cost,
        guarantee: solver.guarantee(),
        added: sol.chosen,
    })
}

fn start(inst: &FlexInstance, mode: KecssMode) -> Result<(PhaseLog, u64)> {
    let g = inst.graph.with_unit_capacities();
    if let Some(w) = flex_violation(&g, inst.k, inst.q)? {
        return Err(Error::Infeasible { witness: w });
    }
    let base = kecss(&inst.graph, inst.k, mode)?;
    let phase = PhaseLog {
        name: "kecss".into(),
        family_size: 0,
        solver: format!("kecss-{}", mode.name()),
        cost: base.cost,
        guarantee: base.guarantee,
        added: base.edges,
    };
    Ok((phase, base.nodes_explored))
}

fn finish(inst: &FlexInstance, phases: Vec<PhaseLog>, mode: KecssMode, nodes: u64) -> Result<FlexSolution> {
    let sol = FlexSolution::from_phases(&inst.graph, phases, mode.guarantee(), nodes);
    if let Some(w) = flex_violation(&inst.subgraph(&sol.chosen), inst.k, inst.q)? {
        return Err(Error::Internal(format!("output violates flex-connectivity at {w}")));
    }
    Ok(sol)
}

fn check_phase_done(inst: &FlexInstance, h: &[usize], level: u32) -> Result<()> {
    match flex_violation(&inst.subgraph(h), inst.k, level)? {
        Some(w) => Err(Error::Internal(format!("F_{level} still contains {w} after its phase"))),
        None => Ok(()),
    }
}

/// k-ECSS followed by one cover phase per level ℓ = 1..q, each covering
/// F_ℓ(H) with the solver its structure allows.
pub fn iterative_cover(inst: &FlexInstance, slots: &SolverSlots, mode: KecssMode) -> Result<FlexSolution> {
    let (k, q) = (inst.k, inst.q);
    let (first, nodes) = start(inst, mode)?;
    let mut h = first.added.clone();
    let mut phases = vec![first];
    for level in 1..=q {
        let hg = inst.subgraph(&h);
        let family = enumerate_fq(&hg, k, level)?;
        let mut new_phases = Vec::new();
        match (level, k % 2 == 0) {
            (1, false) => {
                if let Some((a, b)) = family.laminar_violation() {
                    return Err(Error::Internal(format!("F_1 is not laminar: {a}, {b}")));
                }
                new_phases.push(cover_phase(inst, &h, "F1".into(), family, slots.ring_cover_solver.as_ref())?);
            }
            (1 | 2, true) => {
                if let Some((a, b)) = family.uncrossable_violation() {
                    return Err(Error::Internal(format!("F_{level} is not uncrossable: {a}, {b}")));
                }
                new_phases.push(cover_phase(inst, &h, format!("F{level}"), family, slots.uncrossable.as_ref())?);
            }
            (2, false) => {
                let d = decompose_f2_odd(&inst.graph, &h, k)?;
                let p = cover_phase(inst, &h, "F2'".into(), d.f_prime, slots.uncrossable.as_ref())?;
                let mut pp = cover_phase(inst, &h, "F2''".into(), d.f_dprime, slots.symmetric.as_ref())?;
                pp.added.retain(|id| !p.added.contains(id));
                pp.cost = inst.graph.total_cost(&pp.added);
                new_phases.push(p);
                new_phases.push(pp);
            }
            _ => {
                let exact = ExactCover::default();
                new_phases.push(cover_phase(inst, &h, format!("F{level}"), family, &exact)?);
            }
        }
        for p in &new_phases {
            h.extend(&p.added);
        }
        h.sort_unstable();
        phases.extend(new_phases);
        check_phase_done(inst, &h, level)?;
    }
    finish(inst, phases, mode, nodes)
}

/// (k,1)-flex-connectivity.
pub fn solve_k1(inst: &FlexInstance, slots: &SolverSlots, mode: KecssMode) -> Result<FlexSolution> {
    if inst.q != 1 {
        return Err(Error::precondition(format!("solve_k1 needs q = 1, got {}", inst.q)));
    }
    iterative_cover(inst, slots, mode)
}

/// (k,2)-flex-connectivity.
pub fn solve_k2(inst: &FlexInstance, slots: &SolverSlots, mode: KecssMode) -> Result<FlexSolution> {
    if inst.q != 2 {
        return Err(Error::precondition(format!("solve_k2 needs q = 2, got {}", inst.q)));
    }
    iterative_cover(inst, slots, mode)
}

/// Unit costs: k-ECSS, then for each level an inclusion-minimal subset of the
/// edges crossing F_ℓ(H). Each such subset is a forest.
pub fn solve_unit_cost(inst: &FlexInstance, mode: KecssMode) -> Result<FlexSolution> {
    if !inst.is_unit_cost() {
        return Err(Error::precondition("solve_unit_cost needs all costs equal to 1"));
    }
    let (k, n) = (inst.k, inst.graph.node_count());
    let (first, nodes) = start(inst, mode)?;
    let mut h = first.added.clone();
    let mut phases = vec![first];
    for level in 1..=inst.q {
        let family = enumerate_fq(&inst.subgraph(&h), k, level)?;
        let pool: Vec<Candidate> = (0..inst.graph.edge_count())
            .filter(|i| !h.contains(i))
            .map(|id| {
                let e = inst.graph.edge(id);
                Candidate { id, u: e.u, v: e.v, cost: e.cost }
            })
            .filter(|c| family.iter().any(|s| c.crosses(s)))
            .collect();
        if !covers(&pool, &family) {
            return Err(Error::Internal(format!("phase {level}: remaining edges do not cover F_{level}")));
        }
        let j = minimal_cover(&pool, &family)?;
        if j.len() + 1 > n.max(1) {
            return Err(Error::Internal(format!("phase {level} added {} edges on {n} nodes", j.len())));
        }
        let added: Vec<usize> = j.iter().map(|c| c.id).collect();
        h.extend(&added);
        h.sort_unstable();
        phases.push(PhaseLog {
            name: format!("F{level}"),
            family_size: family.len(),
            solver: "minimal-cover".into(),
            cost: added.len() as Weight,
            guarantee: Rational::new(2, i64::from(k)),
            added,
        });
        check_phase_done(inst, &h, level)?;
    }
    finish(inst, phases, mode, nodes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::Edge;

    fn s(v: &[usize]) -> NodeSet {
        NodeSet::from_nodes(v.iter().copied())
    }

    fn triangle_one_unsafe() -> Multigraph {
        Multigraph::with_edges(
            3,
            [Edge::new(0, 1).unsafe_edge().with_cost(1), Edge::new(1, 2).with_cost(1), Edge::new(2, 0).with_cost(1)],
        )
        .unwrap()
    }

    #[test]
    fn flex_examples() {
        let t = triangle_one_unsafe();
        assert!(is_flex_connected(&t, 1, 1).unwrap());
        let tree = Multigraph::with_edges(3, [Edge::new(0, 1).unsafe_edge(), Edge::new(1, 2)]).unwrap();
        assert_eq!(flex_violation(&tree, 1, 1).unwrap(), Some(s(&[1, 2])));
        assert!(!is_flex_connected_by_removal(&tree, 1, 1).unwrap());
        let c4 = Multigraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        for k in 1..4 {
            assert_eq!(
                is_flex_connected(&c4, k, 0).unwrap(),
                c4.is_k_edge_connected(Weight::from(k), EdgeFilter::All, false).unwrap()
            );
        }
    }

    #[test]
    fn fq_examples() {
        let path = Multigraph::with_edges(3, [Edge::new(0, 1).unsafe_edge(), Edge::new(1, 2)]).unwrap();
        // {0} is stored as its complement {1,2}
        assert_eq!(enumerate_fq(&path, 1, 1).unwrap().members(), &[s(&[1, 2])]);
        let safe = Multigraph::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(enumerate_fq(&safe, 1, 1).unwrap().is_empty());
        assert!(enumerate_fq(&triangle_one_unsafe(), 1, 1).unwrap().is_empty());
        assert!(matches!(enumerate_fq(&path, 1, 2), Err(Error::Precondition { .. })));
    }

    #[test]
    fn kecss_examples() {
        let k4 = Multigraph::with_edges(
            4,
            [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)].map(|(u, v)| Edge::new(u, v).with_cost(1)),
        )
        .unwrap();
        let r = kecss(&k4, 2, KecssMode::Exact).unwrap();
        assert_eq!(r.edges.len(), 4);
        let t = kecss(&k4, 1, KecssMode::Exact).unwrap();
        assert_eq!(t.edges.len(), 3);
        let split = Multigraph::from_pairs(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(matches!(kecss(&split, 1, KecssMode::Exact), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn exact_fgc_triangle() {
        // the two safe edges already give every cut a safe edge
        let inst = FlexInstance::new(triangle_one_unsafe(), 1, 1).unwrap();
        let sol = exact_fgc(&inst).unwrap();
        assert_eq!((sol.cost, sol.chosen.clone()), (2, vec![1, 2]));
        // with two unsafe edges every edge is needed
        let mut g = triangle_one_unsafe();
        let two = Multigraph::with_edges(3, g.edges().iter().enumerate().map(|(i, e)| {
            let mut e = e.clone();
            e.is_unsafe = i < 2;
            e
        }))
        .unwrap();
        g = two;
        let sol = exact_fgc(&FlexInstance::new(g, 1, 1).unwrap()).unwrap();
        assert_eq!(sol.cost, 3);
        let inst = FlexInstance::new(triangle_one_unsafe(), 3, 1).unwrap();
        assert!(matches!(exact_fgc(&inst), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn iterative_cover_c4_with_chord() {
        let g = Multigraph::with_edges(
            4,
            [
                Edge::new(0, 1).unsafe_edge().with_cost(1),
                Edge::new(1, 2).with_cost(1),
                Edge::new(2, 3).with_cost(1),
                Edge::new(3, 0).with_cost(1),
                Edge::new(0, 2).with_cost(1),
            ],
        )
        .unwrap();
        let inst = FlexInstance::new(g, 1, 1).unwrap();
        let sol = solve_k1(&inst, &SolverSlots::default(), KecssMode::Approx2).unwrap();
        assert!(is_flex_connected(&inst.subgraph(&sol.chosen), 1, 1).unwrap());
        assert_eq!(sol.guarantee, Rational::from_integer(4));
        let opt = exact_fgc(&inst).unwrap();
        assert!(sol.cost <= 4 * opt.cost);

        let q0 = FlexInstance::new(inst.graph.clone(), 1, 0).unwrap();
        let sol = iterative_cover(&q0, &SolverSlots::default(), KecssMode::Exact).unwrap();
        assert_eq!(sol.phases.len(), 1);
        assert_eq!(sol.cost, 3);

        let unit = solve_unit_cost(&inst, KecssMode::Exact).unwrap();
        assert!(is_flex_connected(&inst.subgraph(&unit.chosen), 1, 1).unwrap());
        assert_eq!(unit.guarantee, Rational::from_integer(3));
    }

    #[test]
    fn k2_on_c4_with_opposite_unsafe_edges() {
        let mut edges = vec![
            Edge::new(0, 1).unsafe_edge().with_cost(1),
            Edge::new(1, 2).with_cost(1),
            Edge::new(2, 3).unsafe_edge().with_cost(1),
            Edge::new(3, 0).with_cost(1),
        ];
        edges.push(Edge::new(0, 2).with_cost(2));
        edges.push(Edge::new(1, 3).with_cost(2));
        edges.push(Edge::new(0, 1).with_cost(3));
        edges.push(Edge::new(2, 3).with_cost(3));
        let inst = FlexInstance::new(Multigraph::with_edges(4, edges).unwrap(), 1, 2).unwrap();
        let sol = solve_k2(&inst, &SolverSlots::default(), KecssMode::Approx2).unwrap();
        assert!(is_flex_connected(&inst.subgraph(&sol.chosen), 1, 2).unwrap());
        assert_eq!(sol.guarantee, Rational::from_integer(8));
        assert!(sol.cost <= 8 * exact_fgc(&inst).unwrap().cost);
    }

    #[test]
    fn phase_solvers_need_matching_q() {
        let inst = FlexInstance::new(triangle_one_unsafe(), 1, 2).unwrap();
        assert!(solve_k1(&inst, &SolverSlots::default(), KecssMode::Exact).is_err());
        let inst = FlexInstance::new(triangle_one_unsafe(), 1, 1).unwrap();
        assert!(solve_k2(&inst, &SolverSlots::default(), KecssMode::Exact).is_err());
    }
}
