//! Seeded instance generation, corpora, verification suites and ratio
//! benchmarking.

mod bench;
mod suites;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use crate::augment::exact_augment;
pub use crate::fgc::exact_fgc;
pub use bench::{augment_report, bench_corpus, flex_report, uncrossable_report, RatioReport};
pub use suites::{
    check_c1_pairs, run_suite, uncrossable_instances, C1Outcome, SuiteConfig, SuiteReport, SUITES,
};

use crate::augment::AugmentInstance;
use crate::fgc::{flex_violation, FlexInstance};
use crate::multigraph::{Edge, EdgeFilter, Multigraph};
use crate::{Error, Result, Weight};

/// Parameters for [`generate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub min_nodes: usize,
    pub max_nodes: usize,
    /// Probability of each parallel copy of each node pair.
    pub density: f64,
    pub max_multiplicity: u32,
    pub unsafe_prob: f64,
    pub min_cost: Weight,
    pub max_cost: Weight,
    /// Capacity given to every edge.
    pub capacity: Weight,
    pub seed: u64,
    pub max_retries: u32,
}

impl Default for GenSpec {
    fn default() -> Self {
        GenSpec {
            min_nodes: 6,
            max_nodes: 10,
            density: 0.4,
            max_multiplicity: 1,
            unsafe_prob: 0.3,
            min_cost: 1,
            max_cost: 10,
            capacity: 1,
            seed: 1,
            max_retries: 1000,
        }
    }
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub(crate) fn is_connected(g: &Multigraph) -> bool {
    g.node_count() < 2 || g.min_cut_value(EdgeFilter::All, false).is_ok_and(|c| c > 0)
}

/// Random connected multigraph; retries (up to `max_retries`) until connected.
pub fn generate(spec: &GenSpec) -> Result<Multigraph> {
    if spec.min_nodes == 0 || spec.min_nodes > spec.max_nodes || spec.min_cost > spec.max_cost {
        return Err(Error::precondition("empty node or cost range"));
    }
    if !(0.0..=1.0).contains(&spec.density) || !(0.0..=1.0).contains(&spec.unsafe_prob) {
        return Err(Error::precondition("probabilities must lie in [0, 1]"));
    }
    let mut r = rng(spec.seed);
    for _ in 0..spec.max_retries.max(1) {
        let n = r.gen_range(spec.min_nodes..=spec.max_nodes);
        let mut g = Multigraph::new(n)?;
        for u in 0..n {
            for v in u + 1..n {
                for _ in 0..spec.max_multiplicity {
                    if r.gen_bool(spec.density) {
                        let mut e = Edge::new(u, v)
                            .with_cost(r.gen_range(spec.min_cost..=spec.max_cost))
                            .with_capacity(spec.capacity);
                        e.is_unsafe = r.gen_bool(spec.unsafe_prob);
                        g.add_edge(e)?;
                    }
                }
            }
        }
        if is_connected(&g) {
            return Ok(g);
        }
    }
    Err(Error::InvalidGraph(format!(
        "no connected graph after {} attempts",
        spec.max_retries
    )))
}

fn random_pair(r: &mut ChaCha8Rng, n: usize) -> (usize, usize) {
    let u = r.gen_range(0..n);
    let mut v = r.gen_range(0..n - 1);
    if v >= u {
        v += 1;
    }
    (u.min(v), u.max(v))
}

/// Connected multigraph with `n` nodes and `m` uniformly random edges.
pub fn random_multigraph(r: &mut ChaCha8Rng, n: usize, m: usize) -> Multigraph {
    loop {
        let pairs: Vec<_> = (0..m).map(|_| random_pair(r, n)).collect();
        let g = Multigraph::from_pairs(n, &pairs).expect("valid pairs");
        if is_connected(&g) {
            return g;
        }
    }
}

/// `count` connected multigraphs with n in [6, 12] and n ≤ m ≤ 3n.
pub fn lambda_corpus(seed: u64, count: usize) -> Vec<Multigraph> {
    let mut r = rng(seed);
    (0..count)
        .map(|_| {
            let n = r.gen_range(6..=12);
            let m = r.gen_range(n..=3 * n);
            random_multigraph(&mut r, n, m)
        })
        .collect()
}

fn random_spanning(r: &mut ChaCha8Rng, n: usize, cycle: bool) -> Vec<(usize, usize)> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(r);
    if cycle {
        (0..n).map(|i| (order[i], order[(i + 1) % n])).collect()
    } else {
        (1..n).map(|i| (order[r.gen_range(0..i)], order[i])).collect()
    }
}

/// Base graph with connectivity exactly `lambda0` plus up to `max_candidates`
/// priced candidates at capacity k-λ0, with all candidates together feasible.
pub fn random_augment(r: &mut ChaCha8Rng, lambda0: Weight, k: Weight, max_candidates: usize) -> AugmentInstance {
    assert!(lambda0 >= 1 && k > lambda0);
    loop {
        let n = r.gen_range(4..=8);
        let mut base = random_spanning(r, n, lambda0 >= 2);
        let mut g = Multigraph::from_pairs(n, &base).expect("valid pairs");
        while g.min_cut_value(EdgeFilter::All, false).expect("n ≥ 2") < lambda0 {
            base.push(random_pair(r, n));
            g = Multigraph::from_pairs(n, &base).expect("valid pairs");
        }
        let cap = k - lambda0;
        let mut edges: Vec<Edge> = base.iter().map(|&(u, v)| Edge::new(u, v).base()).collect();
        let count = r.gen_range(4..=max_candidates.max(4));
        for _ in 0..count {
            let (u, v) = random_pair(r, n);
            edges.push(Edge::new(u, v).with_cost(r.gen_range(1..=10)).with_capacity(cap));
        }
        let graph = Multigraph::with_edges(n, edges).expect("valid edges");
        let inst = AugmentInstance::new(graph, k).expect("capacities follow the convention");
        let all = inst.candidates.clone();
        if inst.lambda0 == lambda0 && inst.is_feasible(&all).unwrap_or(false) {
            return inst;
        }
    }
}

/// Augmentation instances cycling through λ0 in 1..=4 and k in λ0+1..=λ0+4.
pub fn augment_corpus(seed: u64, count: usize) -> Vec<AugmentInstance> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let lambda0 = (i % 4) as Weight + 1;
            let k = lambda0 + ((i / 4) % 4) as Weight + 1;
            random_augment(&mut r, lambda0, k, 20)
        })
        .collect()
}

/// Largest node count used for flex instances with these parameters.
fn flex_max_nodes(k: u32, q: u32) -> usize {
    (32 / (k + q) as usize).clamp(3, 8)
}

/// A (k,q)-flex-connected multigraph with at most `max_edges` edges, grown
/// by random edges, then padded with a few spare ones.
pub fn random_flex(r: &mut ChaCha8Rng, k: u32, q: u32, unit_cost: bool, max_edges: usize) -> FlexInstance {
    loop {
        let n = r.gen_range(3..=flex_max_nodes(k, q));
        let mut g = Multigraph::new(n).expect("n ≥ 3");
        let add = |g: &mut Multigraph, r: &mut ChaCha8Rng| {
            let (u, v) = random_pair(r, n);
            let mut e = Edge::new(u, v).with_cost(if unit_cost { 1 } else { r.gen_range(1..=9) });
            e.is_unsafe = r.gen_bool(0.35);
            g.add_edge(e).expect("valid edge");
        };
        while g.edge_count() < max_edges && flex_violation(&g, k, q).expect("small graph").is_some() {
            add(&mut g, r);
        }
        if flex_violation(&g, k, q).expect("small graph").is_some() {
            continue;
        }
        let spare = r.gen_range(0..=6).min(max_edges - g.edge_count());
        for _ in 0..spare {
            add(&mut g, r);
        }
        return FlexInstance::new(g, k, q).expect("k ≥ 1");
    }
}

/// Flex instances cycling through k in 1..=4 and q in 0..=2.
pub fn flex_corpus(seed: u64, count: usize, unit_cost: bool) -> Vec<FlexInstance> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let k = (i % 4) as u32 + 1;
            let q = ((i / 4) % 3) as u32;
            random_flex(&mut r, k, q, unit_cost, 22)
        })
        .collect()
}

/// Graphs grown by random edges (half of them unsafe) just until they are
/// (k,1)-flex-connected, with k cycling through 1..=3 and n ≤ 10.
pub fn flex_h_corpus(seed: u64, count: usize) -> Vec<(Multigraph, u32)> {
    let mut r = rng(seed);
    (0..count)
        .map(|i| {
            let k = (i / 2 % 3) as u32 + 1;
            let n = r.gen_range(3..=10);
            let mut g = Multigraph::new(n).expect("n ≥ 3");
            // Half start from a ring of small bundles so that many cuts sit at k+1.
            if i % 2 == 1 {
                for u in 0..n {
                    for _ in 0..(k + 2) / 2 {
                        let mut e = Edge::new(u, (u + 1) % n).with_cost(1);
                        e.is_unsafe = r.gen_bool(0.5);
                        g.add_edge(e).expect("valid edge");
                    }
                }
            }
            while flex_violation(&g, k, 1).expect("small graph").is_some() {
                let (u, v) = random_pair(&mut r, n);
                let mut e = Edge::new(u, v).with_cost(1);
                e.is_unsafe = r.gen_bool(0.5);
                g.add_edge(e).expect("valid edge");
            }
            (g, k)
        })
        .collect()
}
