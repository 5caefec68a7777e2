use crate::multigraph::{EdgeFilter, Multigraph, NodeSet};
use crate::{Error, Result, Weight};

pub const DEFAULT_FLEX_BUDGET: u64 = 50_000_000;

/// One cut: edges crossing it and the safe ones among them, as masks over
/// the cost-sorted edge order.
#[derive(Clone, Copy)]
struct Row {
    all: u64,
    safe: u64,
    set: NodeSet,
    singleton: bool,
}

struct Search {
    costs: Vec<Weight>,
    rows: Vec<Row>,
    k: u32,
    kq: u32,
    best_cost: Weight,
    best: u64,
    nodes: u64,
    budget: u64,
}

/// Cost of the `r` cheapest edges in `mask` (edges are sorted by cost).
fn cheapest(costs: &[Weight], mut mask: u64, r: u32) -> Weight {
    let mut total = 0;
    for _ in 0..r {
        let i = mask.trailing_zeros() as usize;
        total += costs[i];
        mask &= mask - 1;
    }
    total
}

impl Search {
    fn satisfied(&self, row: &Row, inc: u64) -> bool {
        (inc & row.safe).count_ones() >= self.k || (inc & row.all).count_ones() >= self.kq
    }

    fn feasible(&self, inc: u64) -> bool {
        self.rows.iter().all(|r| self.satisfied(r, inc))
    }

    /// Lower bound on the extra cost and the edge to branch on; `None` when
    /// some cut can no longer be fixed.
    fn bound(&self, inc: u64, open: u64) -> Option<(Weight, Option<usize>)> {
        let avail = inc | open;
        let mut lb = 0;
        let mut singles = 0;
        let mut pick: Option<(u32, usize)> = None;
        for row in &self.rows {
            if self.satisfied(row, inc) {
                continue;
            }
            let mut fix = Weight::MAX;
            let mut slack = u32::MAX;
            let s_in = (inc & row.safe).count_ones();
            let s_open = open & row.safe;
            if s_in + s_open.count_ones() >= self.k {
                fix = fix.min(cheapest(&self.costs, s_open, self.k - s_in));
                slack = slack.min(s_open.count_ones() - (self.k - s_in));
            }
            let a_in = (inc & row.all).count_ones();
            let a_open = open & row.all;
            if (avail & row.all).count_ones() >= self.kq {
                fix = fix.min(cheapest(&self.costs, a_open, self.kq - a_in));
                slack = slack.min(a_open.count_ones() - (self.kq - a_in));
            }
            if fix == Weight::MAX {
                return None;
            }
            lb = lb.max(fix);
            if row.singleton {
                singles += fix;
            }
            if pick.is_none_or(|(s, _)| slack < s) {
                pick = Some((slack, (open & row.all).trailing_zeros() as usize));
            }
        }
        Some((lb.max(singles.div_ceil(2)), pick.map(|(_, e)| e)))
    }

    fn run(&mut self, inc: u64, open: u64, cost: Weight) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExhausted { budget: self.budget });
        }
        let Some((lb, pick)) = self.bound(inc, open) else {
            return Ok(());
        };
        if cost + lb >= self.best_cost {
            return Ok(());
        }
        let Some(e) = pick else {
            self.best_cost = cost;
            self.best = inc;
            return Ok(());
        };
        let bit = 1u64 << e;
        self.run(inc | bit, open & !bit, cost + self.costs[e])?;
        self.run(inc, open & !bit, cost)
    }
}

/// Minimum-cost edge set in which every cut has at least `k` safe edges or
/// at least `k + q` edges. Capacities are ignored. Returns edge ids
/// (ascending) and the number of search nodes.
pub(crate) fn min_flex_subgraph(g: &Multigraph, k: u32, q: u32, budget: u64) -> Result<(Vec<usize>, u64)> {
    let m = g.edge_count();
    if m > 64 {
        return Err(Error::precondition(format!("{m} edges, the exact search handles at most 64")));
    }
    let n = g.node_count();
    if n < 2 || k == 0 {
        return Ok((Vec::new(), 0));
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by_key(|&i| (g.edge(i).cost, i));
    let costs: Vec<Weight> = order.iter().map(|&i| g.edge(i).cost).collect();

    let table = g.cut_table(EdgeFilter::All, false)?;
    let mut rows: Vec<Row> = table
        .iter()
        .map(|(s, _)| {
            let mut row = Row { all: 0, safe: 0, set: s, singleton: s.len() == 1 || s.len() + 1 == n };
            for (bit, &id) in order.iter().enumerate() {
                let e = g.edge(id);
                if e.crosses(s) {
                    row.all |= 1 << bit;
                    if !e.is_unsafe {
                        row.safe |= 1 << bit;
                    }
                }
            }
            row
        })
        .collect();
    rows.sort_by_key(|r| (r.all.count_ones(), r.all, r.safe));
    rows.dedup_by_key(|r| (r.all, r.safe));

    let all = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
    let mut search = Search {
        costs,
        rows,
        k,
        kq: k + q,
        best_cost: 0,
        best: all,
        nodes: 0,
        budget,
    };
    if let Some(r) = search.rows.iter().find(|r| !search.satisfied(r, all)) {
        return Err(Error::Infeasible { witness: r.set });
    }
    // start from a reverse-delete solution
    let mut start = all;
    for bit in (0..m).rev() {
        if search.feasible(start & !(1 << bit)) {
            start &= !(1 << bit);
        }
    }
    search.best = start;
    search.best_cost = (0..m).filter(|b| start >> b & 1 == 1).map(|b| search.costs[b]).sum();
    search.run(0, all, 0)?;
    let mut ids: Vec<usize> = (0..m).filter(|b| search.best >> b & 1 == 1).map(|b| order[b]).collect();
    ids.sort_unstable();
    Ok((ids, search.nodes))
}
