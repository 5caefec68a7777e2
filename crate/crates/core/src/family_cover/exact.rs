use super::{CoverInstance, CoverSolution};
use crate::{Error, Result, Weight};

pub const DEFAULT_NODE_BUDGET: u64 = 20_000_000;

struct Search<'a> {
    costs: &'a [Weight],
    /// Candidate mask per member, dominated members removed.
    rows: Vec<u64>,
    best_cost: Weight,
    best: u64,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn cheapest(&self, mask: u64) -> Weight {
        bits(mask).map(|i| self.costs[i]).min().unwrap_or(Weight::MAX)
    }

    /// Disjoint-packing lower bound over uncovered rows; `None` if a row has no
    /// available candidate left.
    fn lower_bound(&self, chosen: u64, banned: u64) -> Option<(Weight, Option<u64>)> {
        let mut used = 0u64;
        let mut lb = 0;
        let mut branch: Option<u64> = None;
        for &row in &self.rows {
            if row & chosen != 0 {
                continue;
            }
            let avail = row & !banned;
            if avail == 0 {
                return None;
            }
            if branch.is_none_or(|b| avail.count_ones() < b.count_ones()) {
                branch = Some(avail);
            }
            if avail & used == 0 {
                used |= avail;
                lb += self.cheapest(avail);
            }
        }
        Some((lb, branch))
    }

    fn run(&mut self, chosen: u64, banned: u64, cost: Weight) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExhausted { budget: self.budget });
        }
        let Some((lb, branch)) = self.lower_bound(chosen, banned) else {
            return Ok(());
        };
        if cost + lb >= self.best_cost {
            return Ok(());
        }
        let Some(avail) = branch else {
            self.best_cost = cost;
            self.best = chosen;
            return Ok(());
        };
        // include each available candidate in turn, banning the ones tried before
        let mut banned = banned;
        for i in bits(avail) {
            self.run(chosen | 1 << i, banned, cost + self.costs[i])?;
            banned |= 1 << i;
        }
        Ok(())
    }
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

/// Optimal cover by branch and bound with the default node budget.
pub fn exact_min_cover(inst: &CoverInstance) -> Result<CoverSolution> {
    exact_min_cover_with_budget(inst, DEFAULT_NODE_BUDGET)
}

/// Optimal cover by branch and bound.
///
/// Branches on the uncovered member with the fewest available candidates,
/// trying candidates in input order. Among equal-cost optima the first one
/// found in that order is returned.
pub fn exact_min_cover_with_budget(inst: &CoverInstance, budget: u64) -> Result<CoverSolution> {
    let cands = &inst.candidates;
    if cands.len() > 64 {
        return Err(Error::precondition(format!(
            "{} candidates, the exact cover handles at most 64",
            cands.len()
        )));
    }
    let mut rows = Vec::with_capacity(inst.family.len());
    for s in inst.family.iter() {
        let row = cands
            .iter()
            .enumerate()
            .filter(|(_, c)| c.crosses(s))
            .fold(0u64, |m, (i, _)| m | 1 << i);
        if row == 0 {
            return Err(Error::Infeasible { witness: s });
        }
        rows.push(row);
    }
    rows.sort_unstable_by_key(|r| (r.count_ones(), *r));
    rows.dedup();
    // a row containing another row is implied by it
    let mut kept: Vec<u64> = Vec::with_capacity(rows.len());
    for r in rows {
        if !kept.iter().any(|&k| k & r == k) {
            kept.push(r);
        }
    }

    let costs: Vec<Weight> = cands.iter().map(|c| c.cost).collect();
    let all = if cands.is_empty() { 0 } else { u64::MAX >> (64 - cands.len()) };
    let mut search = Search {
        costs: &costs,
        rows: kept,
        best_cost: costs.iter().sum::<Weight>() + 1,
        best: all,
        nodes: 0,
        budget,
    };
    search.run(0, 0, 0)?;
    let chosen: Vec<_> = bits(search.best).map(|i| cands[i]).collect();
    let mut sol = CoverSolution::from_candidates(&chosen, "exact");
    sol.nodes_explored = search.nodes;
    Ok(sol)
}
