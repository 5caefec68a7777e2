use super::{Edge, Multigraph, NodeSet};
use crate::{Error, Result, Weight};

pub const EXHAUSTIVE_LIMIT_ENV: &str = "FLEXCUT_EXHAUSTIVE_LIMIT";
const DEFAULT_EXHAUSTIVE_LIMIT: usize = 24;
const HARD_EXHAUSTIVE_LIMIT: usize = 30;

/// Largest node count for which cuts are enumerated exhaustively.
pub fn exhaustive_limit() -> usize {
    std::env::var(EXHAUSTIVE_LIMIT_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .map(|v| v.min(HARD_EXHAUSTIVE_LIMIT))
        .unwrap_or(DEFAULT_EXHAUSTIVE_LIMIT)
}

/// Value of every canonical cut (sets avoiding node 0), filled in Gray-code
/// order so each step costs the degree of one node.
#[derive(Clone, Debug)]
pub struct CutTable {
    n: usize,
    values: Vec<Weight>,
}

impl CutTable {
    pub fn build(g: &Multigraph, weights: &[Weight]) -> Result<Self> {
        let n = g.node_count();
        let limit = exhaustive_limit();
        if n > limit {
            return Err(Error::ExhaustiveLimit { n, limit });
        }
        let mut adj: Vec<Vec<(usize, i64)>> = vec![Vec::new(); n];
        for (e, &w) in g.edges().iter().zip(weights) {
            if w > 0 {
                adj[e.u].push((e.v, w as i64));
                adj[e.v].push((e.u, w as i64));
            }
        }
        let slots = 1usize << (n - 1);
        let mut values = vec![0; slots];
        let mut cur = 0u64;
        let mut val: i64 = 0;
        for i in 1..slots {
            let v = i.trailing_zeros() as usize + 1;
            let adding = cur >> v & 1 == 0;
            let mut delta = 0i64;
            for &(o, w) in &adj[v] {
                let inside = cur >> o & 1 == 1;
                // crossing iff exactly one endpoint inside
                delta += if inside == adding { -w } else { w };
            }
            cur ^= 1 << v;
            val += delta;
            values[(cur >> 1) as usize] = val as Weight;
        }
        Ok(CutTable { n, values })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Value of the cut defined by `s` (either side).
    #[inline]
    pub fn value(&self, s: NodeSet) -> Weight {
        self.values[(s.canonical(self.n).bits() >> 1) as usize]
    }

    /// Canonical proper sets with their values, in encoding order.
    pub fn iter(&self) -> impl Iterator<Item = (NodeSet, Weight)> + '_ {
        self.values
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &v)| (NodeSet((i as u64) << 1), v))
    }

    pub fn min_value(&self) -> Weight {
        self.iter().map(|(_, v)| v).min().unwrap_or(0)
    }
}

pub(super) fn stoer_wagner(n: usize, edges: &[Edge], weight: impl Fn(&Edge) -> Weight) -> Weight {
    let mut w = vec![vec![0 as Weight; n]; n];
    for e in edges {
        let c = weight(e);
        w[e.u][e.v] += c;
        w[e.v][e.u] += c;
    }
    let mut active: Vec<usize> = (0..n).collect();
    let mut best = Weight::MAX;
    while active.len() > 1 {
        let mut key = vec![0 as Weight; n];
        let mut added = vec![false; n];
        let mut prev = active[0];
        let mut last = active[0];
        for step in 0..active.len() {
            let next = *active
                .iter()
                .filter(|&&v| !added[v])
                .max_by(|&&a, &&b| key[a].cmp(&key[b]).then(b.cmp(&a)))
                .expect("active node remains");
            if step == active.len() - 1 {
                best = best.min(key[next]);
                prev = last;
                last = next;
                break;
            }
            added[next] = true;
            for &v in &active {
                if !added[v] {
                    key[v] += w[next][v];
                }
            }
            prev = last;
            last = next;
        }
        // merge `last` into `prev`
        for &v in &active {
            let add = w[last][v];
            w[prev][v] += add;
            w[v][prev] = w[prev][v];
        }
        w[prev][prev] = 0;
        active.retain(|&v| v != last);
    }
    best
}
