use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bench::{augment_report, flex_report, uncrossable_report, RatioReport};
use super::{augment_corpus, flex_corpus, flex_h_corpus, lambda_corpus, random_multigraph, rng};
use crate::cut_structure::{
    build_square_with, classify_square, corners, decompose_f2_odd, decompose_plus_cuts, SetFamily, Square,
    SquareCase,
};
use crate::family_cover::{covers, first_cycle_edge, minimal_cover, Candidate, CoverInstance, SolverSlots};
use crate::fgc::{enumerate_fq, flex_violation, removal_violation, KecssMode};
use crate::multigraph::{CutTable, Edge, EdgeFilter, Multigraph, NodeSet};
use crate::{Error, Result, Weight};

pub const SUITES: [&str; 8] =
    ["squares", "classify", "uncrossable", "c1", "decompose", "forest", "ratios", "equivalence"];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Corpus size; its meaning depends on the suite.
    pub count: usize,
}

impl SuiteConfig {
    pub fn default_for(suite: &str) -> Self {
        let count = match suite {
            "forest" => 10_000,
            "c1" => 300,
            "ratios" => 200,
            "equivalence" => 300,
            _ => 1000,
        };
        SuiteConfig { seed: 1, count }
    }
}

const MAX_DIAGNOSTICS: usize = 20;

#[derive(Clone, Debug, Default, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub instances: usize,
    pub checked: u64,
    pub failures: u64,
    pub histogram: BTreeMap<String, u64>,
    pub first_counterexample: Option<String>,
    pub diagnostic_count: u64,
    pub diagnostics: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub ratios: Vec<RatioReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    fn absorb(&mut self, t: Tally) {
        self.instances += 1;
        self.checked += t.checked;
        self.failures += t.failures.len() as u64;
        for (k, v) in t.hist {
            *self.histogram.entry(k).or_default() += v;
        }
        if self.first_counterexample.is_none() {
            self.first_counterexample = t.failures.into_iter().next();
        }
        self.diagnostic_count += t.diagnostics.len() as u64;
        let room = MAX_DIAGNOSTICS.saturating_sub(self.diagnostics.len());
        self.diagnostics.extend(t.diagnostics.into_iter().take(room));
        self.ratios.extend(t.ratios);
    }
}

/// Per-instance results, merged in instance order.
#[derive(Default)]
struct Tally {
    checked: u64,
    failures: Vec<String>,
    hist: BTreeMap<String, u64>,
    diagnostics: Vec<String>,
    ratios: Vec<RatioReport>,
}

impl Tally {
    fn count(&mut self, key: impl Into<String>) {
        *self.hist.entry(key.into()).or_default() += 1;
    }

    fn fail(&mut self, what: String) {
        self.failures.push(what);
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.fail(what());
        }
    }

    fn error(id: &str, e: Error) -> Tally {
        let mut t = Tally::default();
        t.fail(format!("{id}: {e}"));
        t
    }
}

fn collect(suite: &str, seed: u64, tallies: Vec<Tally>) -> SuiteReport {
    let mut r = SuiteReport { suite: suite.into(), seed, ..Default::default() };
    for t in tallies {
        r.absorb(t);
    }
    r
}

/// Runs a named suite. Invariant failures are counted in the report;
/// `Err` is only returned for an unknown suite name.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    let (seed, count) = (cfg.seed, cfg.count);
    let tallies: Vec<Tally> = match name {
        "squares" | "classify" | "uncrossable" | "decompose" => {
            let corpus = lambda_corpus(seed, count);
            corpus
                .par_iter()
                .enumerate()
                .map(|(i, g)| {
                    let id = format!("graph {i}");
                    let res = match name {
                        "squares" => squares(g),
                        "classify" => classify(g),
                        "uncrossable" => uncrossable(g),
                        _ => decompose(g),
                    };
                    res.unwrap_or_else(|e| Tally::error(&id, e))
                })
                .collect()
        }
        "c1" => flex_h_corpus(seed, count)
            .par_iter()
            .enumerate()
            .map(|(i, (h, k))| c1(h, *k).unwrap_or_else(|e| Tally::error(&format!("H {i}"), e)))
            .collect(),
        "forest" => (0..count as u64)
            .into_par_iter()
            .map(|i| forest(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(i)))
            .collect(),
        "ratios" => ratios(seed, count),
        "equivalence" => equivalence(seed, count),
        other => {
            return Err(Error::precondition(format!(
                "unknown suite {other:?}; expected one of {}",
                SUITES.join(", ")
            )))
        }
    };
    Ok(collect(name, seed, tallies))
}

/// Strongly crossing pairs among cuts of value λ or λ+1, with their values.
fn near_min_pairs(g: &Multigraph) -> Result<(Weight, Vec<(NodeSet, NodeSet, Weight, Weight)>)> {
    let lambda = g.min_cut_value(EdgeFilter::All, true)?;
    let cuts = g.enumerate_cuts_at_most(lambda + 1, EdgeFilter::All, true)?;
    let n = g.node_count();
    let mut pairs = Vec::new();
    for (i, a) in cuts.iter().enumerate() {
        for b in &cuts[i + 1..] {
            if crate::cut_structure::crosses_strongly(a.set, b.set, n)? {
                pairs.push((a.set, b.set, a.value(true), b.value(true)));
            }
        }
    }
    Ok((lambda, pairs))
}

fn pair_kind(lambda: Weight, da: Weight, db: Weight) -> &'static str {
    match (da - lambda) + (db - lambda) {
        0 => "min-min",
        1 => "min-plus",
        _ => "plus-plus",
    }
}

/// Capacity between two disjoint node sets, counted edge by edge.
fn between(g: &Multigraph, x: NodeSet, y: NodeSet) -> Weight {
    g.edges()
        .iter()
        .filter(|e| (x.contains(e.u) && y.contains(e.v)) || (x.contains(e.v) && y.contains(e.u)))
        .map(|e| e.capacity)
        .sum()
}

fn recount(g: &Multigraph, sq: &Square) -> Vec<String> {
    let [c1, c2, c3, c4] = sq.corners;
    let want = [
        ("x", sq.x, between(g, c4, c1)),
        ("y", sq.y, between(g, c2, c3)),
        ("z", sq.z, between(g, c1, c2)),
        ("w", sq.w, between(g, c3, c4)),
        ("a", sq.a, between(g, c2, c4)),
        ("b", sq.b, between(g, c1, c3)),
    ];
    let mut bad: Vec<String> = want
        .iter()
        .filter(|(_, got, direct)| got != direct)
        .map(|(name, got, direct)| format!("{name} = {got}, direct count {direct}"))
        .collect();
    let n = g.node_count();
    let [k1, k2, k3, k4] = corners(sq.set_a(), sq.set_b(), n);
    if [k1, k2, k3, k4] != sq.corners {
        bad.push("corners are not A∩B, A∖B, V∖(A∪B), B∖A".into());
    }
    bad
}

fn squares(g: &Multigraph) -> Result<Tally> {
    let (lambda, pairs) = near_min_pairs(g)?;
    let mut t = Tally::default();
    for (a, b, da, db) in pairs {
        let sq = build_square_with(g, a, b, lambda)?;
        let mut bad = sq.identity_violations();
        bad.extend(recount(g, &sq));
        t.count(pair_kind(lambda, da, db));
        t.check(bad.is_empty(), || format!("A={a} B={b} λ={lambda}: {}", bad.join("; ")));
    }
    Ok(t)
}

fn classify(g: &Multigraph) -> Result<Tally> {
    let (lambda, pairs) = near_min_pairs(g)?;
    let mut t = Tally::default();
    for (a, b, da, db) in pairs {
        let sq = build_square_with(g, a, b, lambda)?;
        let case = classify_square(&sq)?;
        t.count(case.label());
        t.check(case != SquareCase::Other, || format!("A={a} B={b} λ={lambda}: no case matches {sq:?}"));
        if da == lambda && db == lambda {
            let ok = lambda % 2 == 0 && sq.a == 0 && sq.b == 0 && sq.sides().iter().all(|&s| 2 * s == lambda);
            t.check(ok, || format!("A={a} B={b}: min-min square {sq:?}"));
        }
    }
    Ok(t)
}

fn uncrossable(g: &Multigraph) -> Result<Tally> {
    let lambda = g.min_cut_value(EdgeFilter::All, true)?;
    let mut t = Tally::default();
    if lambda % 2 == 1 {
        t.count("odd λ (skipped)");
        return Ok(t);
    }
    t.count(format!("λ = {lambda}"));
    let cuts = g.enumerate_cuts_at_most(lambda + 1, EdgeFilter::All, true)?;
    let fam = SetFamily::new(g.node_count(), cuts.iter().map(|c| c.set))?;
    let v = fam.uncrossable_violation();
    t.check(v.is_none(), || format!("λ = {lambda}: {v:?} violates uncrossability"));
    Ok(t)
}

fn decompose(g: &Multigraph) -> Result<Tally> {
    let lambda = g.min_cut_value(EdgeFilter::All, true)?;
    let mut t = Tally::default();
    if lambda % 2 == 0 {
        t.count("even λ (skipped)");
        return Ok(t);
    }
    let d = decompose_plus_cuts(g, lambda)?;
    for p in &d.parts {
        t.count(format!("{:?}", p.shape));
    }
    let cuts = g.enumerate_cuts_at_most(lambda + 1, EdgeFilter::All, true)?;
    for c in cuts.iter().filter(|c| c.value(true) == lambda + 1) {
        let m = d.multiplicity(c.set);
        t.check((1..=2).contains(&m), || format!("(λ+1)-cut {} lies in {m} parts", c.set));
    }
    t.diagnostics.extend(d.diagnostics);
    Ok(t)
}

/// Outcome of checking the crossing disjunction for F_q members.
#[derive(Clone, Debug, Default, Serialize)]
pub struct C1Outcome {
    /// Oriented pairs examined (both sides of both cuts, both orders).
    pub pairs: u64,
    pub with_unsafe_c1: u64,
    pub without_unsafe_c1: u64,
    pub violations: Vec<String>,
}

/// For every strongly crossing pair of F_q members and every choice of
/// sides A, B: if C1 = A∩B has an unsafe edge then d(C1) + d(A∖B) ≥ 2k+q,
/// otherwise A∖B and B∖A are both in F_q.
pub fn check_c1_pairs(h: &Multigraph, k: u32, q: u32, fq: &SetFamily) -> Result<C1Outcome> {
    let n = h.node_count();
    let mut out = C1Outcome::default();
    if n < 2 {
        return Ok(out);
    }
    let all: CutTable = h.cut_table(EdgeFilter::All, false)?;
    let uns: CutTable = h.cut_table(EdgeFilter::Unsafe, false)?;
    let target = Weight::from(2 * k + q);
    let members: Vec<NodeSet> = fq.iter().collect();
    for (i, &a0) in members.iter().enumerate() {
        for &b0 in &members[i + 1..] {
            if !crate::cut_structure::crosses_strongly(a0, b0, n)? {
                continue;
            }
            for a in [a0, a0.complement(n)] {
                for b in [b0, b0.complement(n)] {
                    for (x, y) in [(a, b), (b, a)] {
                        out.pairs += 1;
                        let [c1, c2, _, c4] = corners(x, y, n);
                        if uns.value(c1) >= 1 {
                            out.with_unsafe_c1 += 1;
                            let sum = all.value(c1) + all.value(c2);
                            if sum < target {
                                out.violations.push(format!(
                                    "A={x} B={y}: d_U(C1) ≥ 1 but d(C1)+d(C2) = {sum} < {target}"
                                ));
                            }
                        } else {
                            out.without_unsafe_c1 += 1;
                            if !fq.contains_cut(c2) || !fq.contains_cut(c4) {
                                out.violations.push(format!("A={x} B={y}: d_U(C1) = 0 but C2 or C4 not in F_q"));
                            }
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

fn c1(h: &Multigraph, k: u32) -> Result<Tally> {
    let mut t = Tally::default();
    let f2 = enumerate_fq(h, k, 2)?;
    let o = check_c1_pairs(h, k, 2, &f2)?;
    t.checked += o.pairs;
    t.failures.extend(o.violations);
    *t.hist.entry("pairs, unsafe C1".into()).or_default() += o.with_unsafe_c1;
    *t.hist.entry("pairs, safe C1".into()).or_default() += o.without_unsafe_c1;
    if k % 2 == 0 {
        let v = f2.uncrossable_violation();
        t.count("k even");
        t.check(v.is_none(), || format!("k = {k}: F2 not uncrossable at {v:?}"));
    } else {
        t.count("k odd");
        let all: Vec<usize> = (0..h.edge_count()).collect();
        match decompose_f2_odd(h, &all, k) {
            Ok(d) => {
                if !d.f_dprime.is_empty() {
                    t.count("F'' non-empty");
                }
                if !d.f_prime.is_empty() {
                    t.count("F' non-empty");
                }
                let ok = d.f_prime.is_uncrossable()
                    && d.f_dprime.is_symmetric_proper_crossing()
                    && f2.iter().all(|s| d.f_prime.contains_cut(s) || d.f_dprime.contains_cut(s));
                t.check(ok, || format!("k = {k}: decomposition of F2 fails its checks"));
            }
            Err(e) => t.check(false, || format!("k = {k}: {e}")),
        }
    }
    Ok(t)
}

fn forest(seed: u64) -> Tally {
    let mut r = rng(seed);
    let mut t = Tally::default();
    let n = r.gen_range(3..=10);
    let full = (1u64 << n) - 1;
    let members: Vec<NodeSet> = (0..r.gen_range(1..=8))
        .map(|_| NodeSet(r.gen_range(1..full)))
        .collect();
    let fam = SetFamily::new(n, members).expect("proper sets");
    let mut j: Vec<Candidate> = Vec::new();
    let add = |j: &mut Vec<Candidate>, r: &mut rand_chacha::ChaCha8Rng| {
        let (u, v) = super::random_pair(r, n);
        j.push(Candidate { id: j.len(), u, v, cost: 1 });
    };
    while !covers(&j, &fam) {
        add(&mut j, &mut r);
    }
    for _ in 0..r.gen_range(0..=n) {
        add(&mut j, &mut r);
    }
    match minimal_cover(&j, &fam) {
        Ok(m) => {
            t.check(covers(&m, &fam), || format!("seed {seed}: minimal cover does not cover"));
            t.check(first_cycle_edge(n, &m).is_none(), || format!("seed {seed}: minimal cover has a cycle"));
            let minimal = (0..m.len()).all(|i| {
                let rest: Vec<Candidate> = m.iter().enumerate().filter(|&(x, _)| x != i).map(|(_, c)| *c).collect();
                !covers(&rest, &fam)
            });
            t.check(minimal, || format!("seed {seed}: cover is not inclusion-minimal"));
        }
        Err(e) => t.fail(format!("seed {seed}: {e}")),
    }
    t
}

/// Cover instances over the {λ, λ+1}-cuts of random even-λ graphs.
pub fn uncrossable_instances(seed: u64, count: usize) -> Vec<CoverInstance> {
    let mut r = rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = r.gen_range(4..=9);
        let m = r.gen_range(n..=3 * n);
        let g = random_multigraph(&mut r, n, m);
        let lambda = g.min_cut_value(EdgeFilter::All, true).expect("n ≥ 4");
        if lambda % 2 == 1 {
            continue;
        }
        let cuts = g.enumerate_cuts_at_most(lambda + 1, EdgeFilter::All, true).expect("small graph");
        let fam = SetFamily::new(n, cuts.iter().map(|c| c.set)).expect("proper cuts");
        let cands: Vec<Candidate> = (0..r.gen_range(3..=20))
            .map(|id| {
                let (u, v) = super::random_pair(&mut r, n);
                Candidate { id, u, v, cost: r.gen_range(0..=10) }
            })
            .collect();
        if covers(&cands, &fam) {
            out.push(CoverInstance::new(n, cands, fam).expect("valid candidates"));
        }
    }
    out
}

fn ratio_tally(rep: Result<RatioReport>, id: &str) -> Tally {
    match rep {
        Ok(rep) => {
            let mut t = Tally::default();
            t.count(rep.kind.clone());
            t.check(rep.passed(), || {
                format!(
                    "{id} ({}): cost {} opt {} bound {} feasible {} {:?}",
                    rep.kind, rep.cost, rep.opt, rep.bound, rep.feasible, rep.problems
                )
            });
            t.ratios.push(rep);
            t
        }
        Err(e) => Tally::error(id, e),
    }
}

/// Augmentation, general-cost flex, unit-cost flex and primal-dual ratio
/// checks, `count` instances each.
fn ratios(seed: u64, count: usize) -> Vec<Tally> {
    let slots = SolverSlots::default();
    let mut out: Vec<Tally> = augment_corpus(seed, count)
        .par_iter()
        .enumerate()
        .map(|(i, inst)| {
            let id = format!("augment-{i:04}");
            ratio_tally(augment_report(&id, inst, &slots), &id)
        })
        .collect();
    out.extend(flex_corpus(seed, count, false).par_iter().enumerate().map(|(i, inst)| {
        let id = format!("fgc-{i:04}");
        ratio_tally(flex_report(&id, inst, &slots, KecssMode::Approx2, false), &id)
    }).collect::<Vec<_>>());
    let unit: Vec<_> = flex_corpus(seed ^ 0x5555, count, true).into_iter().filter(|f| f.q > 0).collect();
    out.extend(unit.par_iter().enumerate().map(|(i, inst)| {
        let id = format!("unit-{i:04}");
        ratio_tally(flex_report(&id, inst, &slots, KecssMode::Exact, true), &id)
    }).collect::<Vec<_>>());
    out.extend(uncrossable_instances(seed, count).par_iter().enumerate().map(|(i, inst)| {
        let id = format!("pd-{i:04}");
        ratio_tally(uncrossable_report(&id, inst), &id)
    }).collect::<Vec<_>>());
    out
}

fn agree(h: &Multigraph, k: u32, q: u32, id: &str) -> Result<Tally> {
    let mut t = Tally::default();
    let per_cut = flex_violation(h, k, q)?;
    let removal = removal_violation(h, k, q)?;
    t.check(per_cut.is_none() == removal.is_none(), || {
        format!("{id} k={k} q={q}: per-cut {per_cut:?} vs removal {removal:?}")
    });
    t.count(if per_cut.is_none() { "flex" } else { "not flex" });
    Ok(t)
}

/// Every multigraph on at most `max_n` nodes with at most two parallel edges
/// per pair and every subset of unsafe edges.
pub(crate) fn small_labelled_graphs(max_n: usize) -> Vec<Multigraph> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        // per pair: 0 edges, 1 safe, 1 unsafe, 2 safe, 1+1, 2 unsafe
        let options = 6usize;
        let total = options.pow(pairs.len() as u32);
        for mut code in 0..total {
            let mut edges = Vec::new();
            for &(u, v) in &pairs {
                let (safe, uns) = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)][code % options];
                code /= options;
                edges.extend((0..safe).map(|_| Edge::new(u, v)));
                edges.extend((0..uns).map(|_| Edge::new(u, v).unsafe_edge()));
            }
            out.push(Multigraph::with_edges(n, edges).expect("valid edges"));
        }
    }
    out
}

fn equivalence(seed: u64, count: usize) -> Vec<Tally> {
    let params: Vec<(u32, u32)> = (1..=3).flat_map(|k| (0..=2).map(move |q| (k, q))).collect();
    let mut out: Vec<Tally> = small_labelled_graphs(4)
        .par_iter()
        .enumerate()
        .map(|(i, g)| {
            let mut t = Tally::default();
            for &(k, q) in &params {
                match agree(g, k, q, &format!("small {i}")) {
                    Ok(x) => {
                        t.checked += x.checked;
                        t.failures.extend(x.failures);
                        for (key, v) in x.hist {
                            *t.hist.entry(key).or_default() += v;
                        }
                    }
                    Err(e) => t.fail(e.to_string()),
                }
            }
            t
        })
        .collect();
    let mut r = rng(seed);
    let random: Vec<(Multigraph, u32, u32)> = (0..count)
        .map(|_| {
            let n = r.gen_range(2..=12);
            let m = r.gen_range(n - 1..=3 * n);
            let mut g = Multigraph::new(n).expect("n ≥ 2");
            let mut unsafe_left = r.gen_range(0..=8);
            for _ in 0..m {
                let (u, v) = super::random_pair(&mut r, n);
                let mut e = Edge::new(u, v);
                if unsafe_left > 0 && r.gen_bool(0.4) {
                    e.is_unsafe = true;
                    unsafe_left -= 1;
                }
                g.add_edge(e).expect("valid edge");
            }
            (g, r.gen_range(1..=3), r.gen_range(0..=2))
        })
        .collect();
    out.extend(
        random
            .par_iter()
            .enumerate()
            .map(|(i, (g, k, q))| agree(g, *k, *q, &format!("random {i}")).unwrap_or_else(|e| Tally::error("random", e)))
            .collect::<Vec<_>>(),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fgc::is_flex_connected;

    #[test]
    fn small_suites_pass() {
        for name in ["squares", "classify", "uncrossable", "decompose", "c1", "forest", "equivalence"] {
            let cfg = SuiteConfig { seed: 3, count: 12 };
            let r = run_suite(name, &cfg).unwrap();
            assert!(r.passed(), "{name}: {:?}", r.first_counterexample);
        }
        assert!(run_suite("nope", &SuiteConfig::default_for("nope")).is_err());
    }

    #[test]
    fn small_ratio_suite_passes() {
        let r = run_suite("ratios", &SuiteConfig { seed: 5, count: 8 }).unwrap();
        assert!(r.passed(), "{:?}", r.first_counterexample);
        assert!(!r.ratios.is_empty());
    }

    #[test]
    fn c1_on_c4() {
        let g = Multigraph::with_edges(
            4,
            [Edge::new(0, 1).unsafe_edge(), Edge::new(1, 2), Edge::new(2, 3).unsafe_edge(), Edge::new(3, 0)],
        )
        .unwrap();
        let f2 = enumerate_fq(&g, 1, 2).unwrap();
        let o = check_c1_pairs(&g, 1, 2, &f2).unwrap();
        assert!(o.violations.is_empty());
    }

    #[test]
    fn is_flex_agrees_on_small_graphs() {
        for g in small_labelled_graphs(3) {
            for k in 1..=2 {
                assert_eq!(
                    is_flex_connected(&g, k, 1).unwrap(),
                    removal_violation(&g, k, 1).unwrap().is_none()
                );
            }
        }
    }
}
