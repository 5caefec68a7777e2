use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::augment::{exact_augment, near_min_cuts_cover, AugmentInstance};
use crate::family_cover::{covers, exact_min_cover, primal_dual_uncrossable_cover, CoverInstance, SolverSlots};
use crate::fgc::{exact_fgc, is_flex_connected, iterative_cover, solve_unit_cost, FlexInstance, KecssMode};
use crate::multigraph::io::Instance;
use crate::{Error, Rational, Result, Weight};

/// One algorithm run compared against the exact optimum.
#[derive(Clone, Debug, Serialize)]
pub struct RatioReport {
    pub id: String,
    pub kind: String,
    pub n: usize,
    pub m: usize,
    pub k: u64,
    pub q: u32,
    pub lambda0: Option<Weight>,
    pub cost: Weight,
    pub opt: Weight,
    /// cost / opt; absent when opt = 0 < cost.
    pub ratio: Option<Rational>,
    pub bound: Rational,
    pub kecss_ratio: Option<Rational>,
    pub feasible: bool,
    pub within_bound: bool,
    pub stage_costs: Vec<Weight>,
    pub oracle_nodes: u64,
    /// Violated side conditions, empty on success.
    pub problems: Vec<String>,
    pub wall_ms: u64,
}

impl RatioReport {
    pub fn passed(&self) -> bool {
        self.feasible && self.within_bound && self.problems.is_empty()
    }
}

/// cost ≤ bound · opt, compared exactly.
pub fn within(cost: Weight, opt: Weight, bound: Rational) -> bool {
    let lhs = i128::from(cost) * i128::from(*bound.denom());
    let rhs = i128::from(*bound.numer()) * i128::from(opt);
    lhs <= rhs
}

pub fn ratio(cost: Weight, opt: Weight) -> Option<Rational> {
    match (cost, opt) {
        (0, 0) => Some(Rational::from_integer(1)),
        (_, 0) => None,
        _ => Some(Rational::new(cost as i64, opt as i64)),
    }
}

#[allow(clippy::too_many_arguments)]
fn report(
    id: &str,
    kind: &str,
    (n, m, k, q): (usize, usize, u64, u32),
    cost: Weight,
    opt: Weight,
    bound: Rational,
    feasible: bool,
    started: Instant,
) -> RatioReport {
    RatioReport {
        id: id.to_string(),
        kind: kind.to_string(),
        n,
        m,
        k,
        q,
        lambda0: None,
        cost,
        opt,
        ratio: ratio(cost, opt),
        bound,
        kecss_ratio: None,
        feasible,
        within_bound: within(cost, opt, bound),
        stage_costs: Vec::new(),
        oracle_nodes: 0,
        problems: Vec::new(),
        wall_ms: started.elapsed().as_millis() as u64,
    }
}

pub fn augment_report(id: &str, inst: &AugmentInstance, slots: &SolverSlots) -> Result<RatioReport> {
    let t = Instant::now();
    let sol = near_min_cuts_cover(inst, slots)?;
    let opt = exact_augment(inst)?;
    let g = &inst.graph;
    let parity = |x: Weight| if x % 2 == 0 { "even" } else { "odd" };
    let kind = format!("augment/{}-{}", parity(inst.lambda0), parity(inst.k));
    let mut r = report(
        id,
        &kind,
        (g.node_count(), g.edge_count(), inst.k, 0),
        sol.cost,
        opt.cost,
        sol.ratio_bound,
        inst.is_feasible(&sol.chosen)?,
        t,
    );
    r.lambda0 = Some(inst.lambda0);
    r.stage_costs = sol.stages.iter().map(|s| s.cost).collect();
    r.oracle_nodes = opt.nodes_explored;
    if sol.stages.iter().map(|s| s.cost).sum::<Weight>() != sol.cost {
        r.problems.push("stage costs do not add up".into());
    }
    Ok(r)
}

/// Runs the general algorithm, or the unit-cost one when `unit` is set, and
/// the exact oracle.
pub fn flex_report(
    id: &str,
    inst: &FlexInstance,
    slots: &SolverSlots,
    mode: KecssMode,
    unit: bool,
) -> Result<RatioReport> {
    let t = Instant::now();
    let sol = if unit { solve_unit_cost(inst, mode)? } else { iterative_cover(inst, slots, mode)? };
    let opt = exact_fgc(inst)?;
    let g = &inst.graph;
    let (n, k) = (g.node_count(), inst.k);
    let kind = format!("{}/k{}q{}", if unit { "unit" } else { "fgc" }, k, inst.q);
    let feasible = is_flex_connected(&inst.subgraph(&sol.chosen), k, inst.q)?;
    let mut r = report(
        id,
        &kind,
        (n, g.edge_count(), u64::from(k), inst.q),
        sol.cost,
        opt.cost,
        sol.guarantee,
        feasible,
        t,
    );
    r.kecss_ratio = Some(sol.kecss_guarantee);
    r.stage_costs = sol.phases.iter().map(|p| p.cost).collect();
    r.oracle_nodes = opt.nodes_explored;
    if unit {
        for p in &sol.phases[1..] {
            if p.added.len() + 1 > n {
                r.problems.push(format!("{} added {} edges on {n} nodes", p.name, p.added.len()));
            }
        }
        if 2 * opt.cost < u64::from(k) * n as u64 {
            r.problems.push(format!("opt {} below kn/2", opt.cost));
        }
    }
    Ok(r)
}

pub fn uncrossable_report(id: &str, inst: &CoverInstance) -> Result<RatioReport> {
    let t = Instant::now();
    let sol = primal_dual_uncrossable_cover(inst)?;
    let opt = exact_min_cover(inst)?;
    let chosen = inst.candidates_by_id(&sol.chosen);
    let mut r = report(
        id,
        "primal-dual",
        (inst.n, inst.candidates.len(), 0, 0),
        sol.cost,
        opt.cost,
        Rational::from_integer(2),
        covers(&chosen, &inst.family),
        t,
    );
    r.oracle_nodes = opt.nodes_explored;
    Ok(r)
}

/// Solves every instance file in `dir` (sorted by file name) with the
/// algorithm matching its content: instances with base edges are
/// augmentation instances, the rest flex instances.
pub fn bench_corpus(dir: &Path, slots: &SolverSlots, mode: KecssMode) -> Result<Vec<RatioReport>> {
    let mut files: Vec<_> = std::fs::read_dir(dir)?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    files.retain(|p| p.is_file());
    files.sort();
    files
        .par_iter()
        .map(|p| {
            let id = p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let inst = Instance::read(p)?;
            if inst.graph.edges().iter().any(|e| e.is_base) {
                let a = AugmentInstance::new(inst.graph, u64::from(inst.k))?;
                augment_report(&id, &a, slots)
            } else {
                let f = FlexInstance::new(inst.graph, inst.k, inst.q)?;
                let unit = f.is_unit_cost() && f.q > 0;
                flex_report(&id, &f, slots, mode, unit)
            }
            .map_err(|e| match e {
                Error::Io(_) | Error::Parse { .. } => e,
                other => Error::Internal(format!("{id}: {other}")),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_bound_comparison() {
        assert!(within(4, 2, Rational::from_integer(2)));
        assert!(!within(5, 2, Rational::from_integer(2)));
        assert!(within(3, 2, Rational::new(3, 2)));
        assert!(!within(1, 0, Rational::from_integer(8)));
        assert!(within(0, 0, Rational::from_integer(0)));
        assert_eq!(ratio(3, 2), Some(Rational::new(3, 2)));
        assert_eq!(ratio(1, 0), None);
    }
}
