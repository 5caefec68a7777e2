use serde::Serialize;

use super::SetFamily;
use crate::multigraph::{Multigraph, NodeSet, Quotient};
use crate::{Error, Result, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EdgeColor {
    /// At least two unsafe edges.
    Red,
    /// Exactly one unsafe edge.
    Blue,
    Black,
}

impl EdgeColor {
    pub fn from_tally(unsafe_edges: u64) -> Self {
        match unsafe_edges {
            0 => EdgeColor::Black,
            1 => EdgeColor::Blue,
            _ => EdgeColor::Red,
        }
    }
}

/// Quotient of a family: nodes not separated by any member are merged.
#[derive(Clone, Debug)]
pub struct QuotientGraph {
    pub quotient: Quotient,
    pub colors: Vec<EdgeColor>,
}

impl QuotientGraph {
    pub fn graph(&self) -> &Multigraph {
        &self.quotient.graph
    }

    pub fn classes(&self) -> &[NodeSet] {
        &self.quotient.classes
    }

    /// Original node set for a set of quotient nodes.
    pub fn expand(&self, classes: NodeSet) -> NodeSet {
        classes
            .iter()
            .fold(NodeSet::EMPTY, |acc, c| acc.union(self.quotient.classes[c]))
    }

    /// Quotient nodes whose class lies inside `s`, if `s` is a union of classes.
    pub fn contract(&self, s: NodeSet) -> Option<NodeSet> {
        let mut out = NodeSet::EMPTY;
        for (i, &c) in self.quotient.classes.iter().enumerate() {
            if c.is_subset(s) {
                out = out.union(NodeSet::singleton(i));
            } else if !c.intersection(s).is_empty() {
                return None;
            }
        }
        Some(out)
    }

    /// Quotient edges crossing the original set `s` (a union of classes).
    pub fn crossing_edges(&self, s: NodeSet) -> impl Iterator<Item = usize> + '_ {
        let q = &self.quotient;
        q.graph
            .edges()
            .iter()
            .enumerate()
            .filter(move |(_, e)| {
                q.classes[e.u].is_subset(s) != q.classes[e.v].is_subset(s)
            })
            .map(|(i, _)| i)
    }
}

/// Shrinks the classes of the relation "no member of `fam` separates u and v".
pub fn family_quotient(g: &Multigraph, fam: &SetFamily) -> Result<QuotientGraph> {
    if fam.is_empty() {
        return Err(Error::precondition("quotient of an empty family"));
    }
    if fam.ground_size() != g.node_count() {
        return Err(Error::precondition("family and graph have different ground sets"));
    }
    let n = g.node_count();
    let mut classes: Vec<NodeSet> = Vec::new();
    let mut reps: Vec<usize> = Vec::new();
    for v in 0..n {
        let same = reps
            .iter()
            .position(|&r| fam.iter().all(|s| s.contains(r) == s.contains(v)));
        match same {
            Some(c) => classes[c] = classes[c].union(NodeSet::singleton(v)),
            None => {
                reps.push(v);
                classes.push(NodeSet::singleton(v));
            }
        }
    }
    let quotient = g.quotient(&classes)?;
    let colors = quotient
        .unsafe_tally
        .iter()
        .map(|&t| EdgeColor::from_tally(t))
        .collect();
    Ok(QuotientGraph { quotient, colors })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum PartShape {
    /// Cycle with every capacity (λ+1)/2; a two-node quotient carrying λ+1 counts as a 2-cycle.
    CycleUniform,
    /// Cycle with one capacity (λ-1)/2 and the rest (λ+3)/2.
    CycleOneLight,
    /// Unit-capacity 3-cube, only for λ = 3.
    Cube,
    Other,
}

/// Node order along a cycle or a path using every node once, if the graph is one.
fn cycle_or_path(g: &Multigraph) -> Option<(Vec<usize>, bool)> {
    let n = g.node_count();
    let mut adj = vec![Vec::new(); n];
    for e in g.edges() {
        adj[e.u].push(e.v);
        adj[e.v].push(e.u);
    }
    let ends: Vec<usize> = (0..n).filter(|&v| adj[v].len() == 1).collect();
    let is_cycle = ends.is_empty();
    if adj.iter().any(|a| a.len() > 2 || a.is_empty()) || !(is_cycle || ends.len() == 2) {
        return None;
    }
    let start = if is_cycle { 0 } else { ends[0] };
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    loop {
        let next = adj[cur].iter().copied().find(|&x| x != prev && !order.contains(&x));
        match next {
            Some(x) => {
                order.push(x);
                prev = cur;
                cur = x;
            }
            None => break,
        }
    }
    (order.len() == n).then_some((order, is_cycle))
}

fn is_cube(g: &Multigraph) -> bool {
    if g.node_count() != 8 || g.edge_count() != 12 || g.edges().iter().any(|e| e.capacity != 1) {
        return false;
    }
    let mut adj = [[false; 8]; 8];
    for e in g.edges() {
        adj[e.u][e.v] = true;
        adj[e.v][e.u] = true;
    }
    // try every bijection onto the bit-labelled cube
    let mut perm: Vec<usize> = (0..8).collect();
    loop {
        let ok = (0..8).all(|i| {
            (0..8).all(|j| adj[perm[i]][perm[j]] == ((i ^ j) as u32).is_power_of_two())
        });
        if ok {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("pivot exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Matches a quotient against the part shapes for odd λ.
pub fn verify_part_shape(qg: &QuotientGraph, lambda: Weight) -> PartShape {
    let g = qg.graph();
    if lambda % 2 == 0 {
        return PartShape::Other;
    }
    let (light, mid, heavy) = ((lambda - 1) / 2, (lambda + 1) / 2, (lambda + 3) / 2);
    if g.node_count() == 2 {
        return if g.edge_count() == 1 && g.edge(0).capacity == lambda + 1 {
            PartShape::CycleUniform
        } else {
            PartShape::Other
        };
    }
    if let Some((_, is_cycle)) = cycle_or_path(g) {
        let caps: Vec<Weight> = g.edges().iter().map(|e| e.capacity).collect();
        if is_cycle {
            if caps.iter().all(|&c| c == mid) {
                return PartShape::CycleUniform;
            }
            let lights = caps.iter().filter(|&&c| c == light).count();
            if lights == 1 && caps.iter().filter(|&&c| c == heavy).count() == caps.len() - 1 {
                return PartShape::CycleOneLight;
            }
        } else if light == 0 && caps.iter().all(|&c| c == heavy) {
            // the light edge has capacity 0 when λ = 1
            return PartShape::CycleOneLight;
        }
    }
    if lambda == 3 && is_cube(g) {
        return PartShape::Cube;
    }
    PartShape::Other
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::{Edge, EdgeFilter};

    fn s(v: &[usize]) -> NodeSet {
        NodeSet::from_nodes(v.iter().copied())
    }

    fn cycle(caps: &[Weight]) -> Multigraph {
        let n = caps.len();
        Multigraph::with_edges(
            n,
            caps.iter().enumerate().map(|(i, &c)| Edge::new(i, (i + 1) % n).with_capacity(c)),
        )
        .unwrap()
    }

    fn identity_quotient(g: &Multigraph) -> QuotientGraph {
        let classes: Vec<NodeSet> = (0..g.node_count()).map(NodeSet::singleton).collect();
        let quotient = g.quotient(&classes).unwrap();
        let colors = quotient.unsafe_tally.iter().map(|&t| EdgeColor::from_tally(t)).collect();
        QuotientGraph { quotient, colors }
    }

    #[test]
    fn quotient_of_c4_families() {
        let g = cycle(&[1, 1, 1, 1]);
        let fam = SetFamily::new(
            4,
            g.enumerate_cuts_at_most(2, EdgeFilter::All, true).unwrap().iter().map(|c| c.set),
        )
        .unwrap();
        let q = family_quotient(&g, &fam).unwrap();
        assert_eq!(q.graph().node_count(), 4);
        assert_eq!(q.graph().edge_count(), 4);

        let q = family_quotient(&g, &SetFamily::new(4, [s(&[3])]).unwrap()).unwrap();
        assert_eq!(q.classes(), &[s(&[0, 1, 2]), s(&[3])]);
        assert_eq!(q.graph().edge_count(), 1);
        assert_eq!(q.graph().edge(0).capacity, 2);

        assert!(family_quotient(&g, &SetFamily::empty(4)).is_err());
    }

    #[test]
    fn colors_follow_unsafe_tally() {
        let g = Multigraph::with_edges(
            3,
            [
                Edge::new(0, 1).unsafe_edge(),
                Edge::new(0, 1).unsafe_edge(),
                Edge::new(1, 2).unsafe_edge(),
                Edge::new(2, 0),
            ],
        )
        .unwrap();
        let q = family_quotient(&g, &SetFamily::new(3, [s(&[1]), s(&[2])]).unwrap()).unwrap();
        assert_eq!(q.colors, vec![EdgeColor::Red, EdgeColor::Black, EdgeColor::Blue]);
    }

    #[test]
    fn part_shapes() {
        assert_eq!(verify_part_shape(&identity_quotient(&cycle(&[2; 5])), 3), PartShape::CycleUniform);
        assert_eq!(
            verify_part_shape(&identity_quotient(&cycle(&[1, 3, 3, 3])), 3),
            PartShape::CycleOneLight
        );
        assert_eq!(verify_part_shape(&identity_quotient(&cycle(&[1, 1, 1])), 3), PartShape::Other);
        assert_eq!(verify_part_shape(&identity_quotient(&cycle(&[2, 2, 2])), 5), PartShape::Other);

        let path = Multigraph::with_edges(3, [Edge::new(0, 1).with_capacity(2), Edge::new(1, 2).with_capacity(2)]).unwrap();
        assert_eq!(verify_part_shape(&identity_quotient(&path), 1), PartShape::CycleOneLight);

        let mut cube = Vec::new();
        for i in 0..8usize {
            for b in 0..3 {
                let j = i ^ (1 << b);
                if i < j {
                    cube.push((i, j));
                }
            }
        }
        let q3 = Multigraph::from_pairs(8, &cube).unwrap();
        assert_eq!(verify_part_shape(&identity_quotient(&q3), 3), PartShape::Cube);
        assert_eq!(verify_part_shape(&identity_quotient(&q3), 5), PartShape::Other);
    }
}
