//! Capacitated, cost-weighted multigraph with unsafe and base edge flags,
//! cut evaluation and exhaustive near-minimum-cut enumeration.

mod cuts;
pub mod io;
mod nodeset;

pub use cuts::{exhaustive_limit, CutTable, EXHAUSTIVE_LIMIT_ENV};
pub use nodeset::{NodeSet, MAX_NODES};

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Weight};

/// One edge of a [`Multigraph`]. Its identifier is its index in the edge list.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub cost: Weight,
    pub capacity: Weight,
    /// Member of the unsafe set U.
    pub is_unsafe: bool,
    /// Member of the zero-cost base subgraph E0.
    pub is_base: bool,
}

impl Edge {
    /// Safe, non-base edge with capacity 1 and cost 0.
    pub fn new(u: usize, v: usize) -> Self {
        Edge {
            u,
            v,
            cost: 0,
            capacity: 1,
            is_unsafe: false,
            is_base: false,
        }
    }

    pub fn with_cost(mut self, cost: Weight) -> Self {
        self.cost = cost;
        self
    }

    pub fn with_capacity(mut self, capacity: Weight) -> Self {
        self.capacity = capacity;
        self
    }

    pub fn unsafe_edge(mut self) -> Self {
        self.is_unsafe = true;
        self
    }

    pub fn base(mut self) -> Self {
        self.is_base = true;
        self
    }

    #[inline]
    pub fn crosses(&self, s: NodeSet) -> bool {
        s.separates(self.u, self.v)
    }
}

/// Which edges a cut statistic counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EdgeFilter {
    All,
    Unsafe,
    Safe,
    Base,
    NonBase,
}

impl EdgeFilter {
    #[inline]
    pub fn matches(self, e: &Edge) -> bool {
        match self {
            EdgeFilter::All => true,
            EdgeFilter::Unsafe => e.is_unsafe,
            EdgeFilter::Safe => !e.is_unsafe,
            EdgeFilter::Base => e.is_base,
            EdgeFilter::NonBase => !e.is_base,
        }
    }
}

/// Cut statistics of one canonical node set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutRecord {
    pub set: NodeSet,
    /// d(S): number of edges crossing.
    pub size: Weight,
    /// u(δ(S)): total capacity crossing.
    pub cap_weight: Weight,
    /// d_U(S): number of unsafe edges crossing.
    pub unsafe_count: Weight,
}

impl CutRecord {
    pub fn of(g: &Multigraph, s: NodeSet) -> Result<Self> {
        g.check_proper(s)?;
        Ok(CutRecord {
            set: s.canonical(g.node_count()),
            size: g.cut_degree(s, EdgeFilter::All, false)?,
            cap_weight: g.cut_degree(s, EdgeFilter::All, true)?,
            unsafe_count: g.cut_degree(s, EdgeFilter::Unsafe, false)?,
        })
    }

    /// The statistic selected by `weighted`.
    pub fn value(&self, weighted: bool) -> Weight {
        if weighted {
            self.cap_weight
        } else {
            self.size
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Multigraph {
    n: usize,
    edges: Vec<Edge>,
}

/// Result of shrinking the classes of a partition.
#[derive(Clone, Debug)]
pub struct Quotient {
    /// One node per class; one edge per adjacent class pair with the summed capacity.
    pub graph: Multigraph,
    pub classes: Vec<NodeSet>,
    pub class_of: Vec<usize>,
    /// Number of unsafe original edges represented by each quotient edge.
    pub unsafe_tally: Vec<u64>,
    /// Original edge ids represented by each quotient edge.
    pub represented: Vec<Vec<usize>>,
}

impl Multigraph {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_NODES {
            return Err(Error::InvalidGraph(format!(
                "node count must be in 1..={MAX_NODES}, got {n}"
            )));
        }
        Ok(Multigraph {
            n,
            edges: Vec::new(),
        })
    }

    pub fn with_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut g = Multigraph::new(n)?;
        for e in edges {
            g.add_edge(e)?;
        }
        Ok(g)
    }

    /// Unit-capacity, zero-cost safe edges from endpoint pairs.
    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        Multigraph::with_edges(n, pairs.iter().map(|&(u, v)| Edge::new(u, v)))
    }

    pub fn add_edge(&mut self, e: Edge) -> Result<usize> {
        if e.u >= self.n || e.v >= self.n {
            return Err(Error::InvalidGraph(format!(
                "edge {}-{} has an endpoint outside 0..{}",
                e.u, e.v, self.n
            )));
        }
        if e.u == e.v {
            return Err(Error::InvalidGraph(format!("self-loop at node {}", e.u)));
        }
        if e.capacity == 0 {
            return Err(Error::InvalidGraph(format!(
                "edge {}-{} has zero capacity",
                e.u, e.v
            )));
        }
        self.edges.push(e);
        Ok(self.edges.len() - 1)
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    pub fn all_nodes(&self) -> NodeSet {
        NodeSet::full(self.n)
    }

    pub fn total_cost(&self, ids: &[usize]) -> Weight {
        ids.iter().map(|&i| self.edges[i].cost).sum()
    }

    /// Edge-induced spanning subgraph on the given ids, in the given order.
    pub fn subgraph(&self, ids: &[usize]) -> Multigraph {
        Multigraph {
            n: self.n,
            edges: ids.iter().map(|&i| self.edges[i].clone()).collect(),
        }
    }

    /// Same graph with every capacity replaced by 1.
    pub fn with_unit_capacities(&self) -> Multigraph {
        Multigraph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    capacity: 1,
                    ..e.clone()
                })
                .collect(),
        }
    }

    pub(crate) fn check_proper(&self, s: NodeSet) -> Result<()> {
        if s.is_proper(self.n) {
            Ok(())
        } else {
            Err(Error::NotProper { set: s, n: self.n })
        }
    }

    /// Contribution of one edge to a cut statistic.
    #[inline]
    pub fn edge_weight(&self, e: &Edge, filter: EdgeFilter, weighted: bool) -> Weight {
        if !filter.matches(e) {
            0
        } else if weighted {
            e.capacity
        } else {
            1
        }
    }

    pub fn edge_weights(&self, filter: EdgeFilter, weighted: bool) -> Vec<Weight> {
        self.edges
            .iter()
            .map(|e| self.edge_weight(e, filter, weighted))
            .collect()
    }

    /// |δ_J(S)|, or u(δ_J(S)) when `weighted`, for J the edges passing `filter`.
    pub fn cut_degree(&self, s: NodeSet, filter: EdgeFilter, weighted: bool) -> Result<Weight> {
        self.check_proper(s)?;
        Ok(self
            .edges
            .iter()
            .filter(|e| e.crosses(s))
            .map(|e| self.edge_weight(e, filter, weighted))
            .sum())
    }

    /// Global minimum cut value (Stoer–Wagner). Zero for a disconnected graph.
    pub fn min_cut_value(&self, filter: EdgeFilter, weighted: bool) -> Result<Weight> {
        if self.n < 2 {
            return Err(Error::InvalidGraph(
                "minimum cut needs at least 2 nodes".into(),
            ));
        }
        Ok(cuts::stoer_wagner(self.n, &self.edges, |e| {
            self.edge_weight(e, filter, weighted)
        }))
    }

    pub fn is_k_edge_connected(&self, k: Weight, filter: EdgeFilter, weighted: bool) -> Result<bool> {
        Ok(self.min_cut_value(filter, weighted)? >= k)
    }

    /// Cut values of every canonical node set (exhaustive).
    pub fn cut_table(&self, filter: EdgeFilter, weighted: bool) -> Result<CutTable> {
        CutTable::build(self, &self.edge_weights(filter, weighted))
    }

    /// Every canonical cut with value at most `threshold`, one per complement
    /// pair, sorted by (value, set encoding).
    pub fn enumerate_cuts_at_most(
        &self,
        threshold: Weight,
        filter: EdgeFilter,
        weighted: bool,
    ) -> Result<Vec<CutRecord>> {
        let table = self.cut_table(filter, weighted)?;
        let mut hits: Vec<(Weight, NodeSet)> = table
            .iter()
            .filter(|&(_, v)| v <= threshold)
            .map(|(s, v)| (v, s))
            .collect();
        hits.sort_unstable();
        hits.into_iter().map(|(_, s)| CutRecord::of(self, s)).collect()
    }

    /// Shrinks every class of `partition` to a single node.
    pub fn quotient(&self, partition: &[NodeSet]) -> Result<Quotient> {
        let mut class_of = vec![usize::MAX; self.n];
        for (ci, class) in partition.iter().enumerate() {
            if class.is_empty() {
                return Err(Error::InvalidPartition(format!("class {ci} is empty")));
            }
            for v in class.iter() {
                if v >= self.n {
                    return Err(Error::InvalidPartition(format!(
                        "class {ci} contains node {v} outside the graph"
                    )));
                }
                if class_of[v] != usize::MAX {
                    return Err(Error::InvalidPartition(format!(
                        "node {v} lies in classes {} and {ci}",
                        class_of[v]
                    )));
                }
                class_of[v] = ci;
            }
        }
        if let Some(v) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(Error::InvalidPartition(format!("node {v} is in no class")));
        }

        let mut bundles: std::collections::BTreeMap<(usize, usize), (Weight, u64, Vec<usize>)> =
            Default::default();
        for (id, e) in self.edges.iter().enumerate() {
            let (a, b) = (class_of[e.u], class_of[e.v]);
            if a == b {
                continue;
            }
            let entry = bundles.entry((a.min(b), a.max(b))).or_default();
            entry.0 += e.capacity;
            entry.1 += e.is_unsafe as u64;
            entry.2.push(id);
        }
        let mut graph = Multigraph::new(partition.len())?;
        let mut unsafe_tally = Vec::with_capacity(bundles.len());
        let mut represented = Vec::with_capacity(bundles.len());
        for ((a, b), (cap, tally, ids)) in bundles {
            let mut e = Edge::new(a, b).with_capacity(cap);
            e.is_unsafe = tally > 0;
            graph.add_edge(e)?;
            unsafe_tally.push(tally);
            represented.push(ids);
        }
        Ok(Quotient {
            graph,
            classes: partition.to_vec(),
            class_of,
            unsafe_tally,
            represented,
        })
    }
}
