use num_rational::Ratio;

use super::{first_uncovered, Candidate, CoverInstance, CoverSolution};
use crate::multigraph::NodeSet;
use crate::{Error, Rational, Result};

type Q = Ratio<i128>;

/// Primal-dual cover of an uncrossable family.
///
/// Works on the symmetric closure. Each round raises the duals of all
/// inclusion-minimal uncovered members uniformly until some candidate becomes
/// tight, and adds the tight candidate with the smallest input position.
/// Afterwards candidates are dropped in reverse order of addition whenever
/// the rest still covers.
pub fn primal_dual_uncrossable_cover(inst: &CoverInstance) -> Result<CoverSolution> {
    if let Some((a, b)) = inst.family.uncrossable_violation() {
        return Err(Error::precondition_pair("family is not uncrossable", a, b));
    }
    let family = inst.family.symmetric_closure();
    let members: Vec<NodeSet> = family.iter().collect();
    let cands = &inst.candidates;
    let mut slack: Vec<Q> = cands.iter().map(|c| Q::from_integer(c.cost as i128)).collect();
    let mut added: Vec<usize> = Vec::new();
    let mut in_j = vec![false; cands.len()];
    let mut dual = Q::from_integer(0);

    loop {
        let uncovered: Vec<NodeSet> = members
            .iter()
            .copied()
            .filter(|&s| !added.iter().any(|&i| cands[i].crosses(s)))
            .collect();
        if uncovered.is_empty() {
            break;
        }
        let minimal: Vec<NodeSet> = uncovered
            .iter()
            .copied()
            .filter(|&s| !uncovered.iter().any(|&t| t != s && t.is_subset(s)))
            .collect();
        let mut step: Option<Q> = None;
        let mut load = vec![0i128; cands.len()];
        for (i, c) in cands.iter().enumerate() {
            if in_j[i] {
                continue;
            }
            load[i] = minimal.iter().filter(|&&s| c.crosses(s)).count() as i128;
            if load[i] > 0 {
                let t = slack[i] / load[i];
                if step.is_none_or(|b| t < b) {
                    step = Some(t);
                }
            }
        }
        let Some(eps) = step else {
            let witness = minimal[0];
            return Err(Error::Infeasible { witness });
        };
        dual += eps * minimal.len() as i128;
        for i in 0..cands.len() {
            if load[i] > 0 {
                slack[i] -= eps * load[i];
            }
        }
        let tight = (0..cands.len())
            .find(|&i| load[i] > 0 && slack[i] == Q::from_integer(0))
            .ok_or_else(|| Error::Internal("no tight candidate after a dual step".into()))?;
        in_j[tight] = true;
        added.push(tight);
    }

    let mut keep = added.clone();
    for &i in added.iter().rev() {
        let rest: Vec<Candidate> = keep.iter().filter(|&&j| j != i).map(|&j| cands[j]).collect();
        if first_uncovered(&rest, &family).is_none() {
            keep.retain(|&j| j != i);
        }
    }
    let chosen: Vec<Candidate> = keep.iter().map(|&i| cands[i]).collect();
    let mut sol = CoverSolution::from_candidates(&chosen, "primal-dual");
    let to_i64 = |x: i128| i64::try_from(x).map_err(|_| Error::Internal("dual total overflows".into()));
    sol.dual_total = Some(Rational::new(to_i64(*dual.numer())?, to_i64(*dual.denom())?));
    Ok(sol)
}
