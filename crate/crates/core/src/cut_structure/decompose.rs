use serde::Serialize;

use super::{family_quotient, strongly_cross, verify_part_shape, PartShape, QuotientGraph, SetFamily};
use crate::fgc::{enumerate_fq, flex_violation};
use crate::multigraph::{EdgeFilter, Multigraph, NodeSet};
use crate::{Error, Result, Weight};

/// A group of (λ+1)-cuts with the quotient it induces.
#[derive(Clone, Debug)]
pub struct Part {
    /// (λ+1)-cuts of the part plus any λ-cuts added to refine the quotient.
    pub family: SetFamily,
    pub quotient: QuotientGraph,
    pub shape: PartShape,
    /// The part's (λ+1)-cuts are exactly the (λ+1)-cuts of its quotient.
    pub exact: bool,
    pub added_min_cuts: Vec<NodeSet>,
}

#[derive(Clone, Debug, Default)]
pub struct PlusCutDecomposition {
    pub parts: Vec<Part>,
    pub diagnostics: Vec<String>,
}

impl PlusCutDecomposition {
    /// Number of parts whose family contains the cut `s`.
    pub fn multiplicity(&self, s: NodeSet) -> usize {
        self.parts.iter().filter(|p| p.family.contains_cut(s)).count()
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

fn make_part(g: &Multigraph, lambda: Weight, family: SetFamily, added: Vec<NodeSet>) -> Result<Part> {
    let quotient = family_quotient(g, &family)?;
    let shape = verify_part_shape(&quotient, lambda);
    Ok(Part {
        family,
        quotient,
        shape,
        exact: false,
        added_min_cuts: added,
    })
}

/// Splits the (λ+1)-cuts of a λ-edge-connected graph into parts.
///
/// Cuts are grouped by the transitive closure of crossing. A cut crossing no
/// other (λ+1)-cut joins the first part whose classes it respects, or forms a
/// two-node part of its own. Parts that match no shape are refined with the
/// λ-cuts crossing them. Shape mismatches end up in `diagnostics`.
pub fn decompose_plus_cuts(g: &Multigraph, lambda: Weight) -> Result<PlusCutDecomposition> {
    if lambda % 2 == 0 {
        return Err(Error::precondition(format!("λ = {lambda} must be odd")));
    }
    let n = g.node_count();
    if g.min_cut_value(EdgeFilter::All, true)? < lambda {
        return Err(Error::precondition(format!("graph is not {lambda}-edge-connected")));
    }
    let cuts = g.enumerate_cuts_at_most(lambda + 1, EdgeFilter::All, true)?;
    let plus: Vec<NodeSet> = cuts.iter().filter(|c| c.value(true) == lambda + 1).map(|c| c.set).collect();
    let mins: Vec<NodeSet> = cuts.iter().filter(|c| c.value(true) == lambda).map(|c| c.set).collect();

    let mut parent: Vec<usize> = (0..plus.len()).collect();
    for i in 0..plus.len() {
        for j in i + 1..plus.len() {
            if strongly_cross(plus[i], plus[j], n) {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<NodeSet>> = Vec::new();
    let mut slot = vec![usize::MAX; plus.len()];
    for i in 0..plus.len() {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(plus[i]);
    }

    let mut out = PlusCutDecomposition::default();
    let (crossing, isolated): (Vec<_>, Vec<_>) = groups.into_iter().partition(|grp| grp.len() > 1);
    for grp in crossing {
        let mut part = make_part(g, lambda, SetFamily::new(n, grp.iter().copied())?, Vec::new())?;
        if part.shape == PartShape::Other {
            let added: Vec<NodeSet> = mins
                .iter()
                .copied()
                .filter(|&m| grp.iter().any(|&s| strongly_cross(s, m, n)))
                .collect();
            if !added.is_empty() {
                let fam = SetFamily::new(n, grp.iter().copied().chain(added.iter().copied()))?;
                part = make_part(g, lambda, fam, added)?;
            }
        }
        out.parts.push(part);
    }
    let shaped = out.parts.len();
    for grp in isolated {
        let s = grp[0];
        let host = out.parts[..shaped].iter().position(|p| p.quotient.contract(s).is_some());
        match host {
            Some(i) => {
                let p = &mut out.parts[i];
                p.family = p.family.union(&SetFamily::new(n, [s])?)?;
            }
            None => out.parts.push(make_part(g, lambda, SetFamily::new(n, [s])?, Vec::new())?),
        }
    }

    for (i, part) in out.parts.iter_mut().enumerate() {
        let q = part.quotient.graph();
        let from_quotient: Vec<NodeSet> = if q.node_count() < 2 {
            Vec::new()
        } else {
            q.enumerate_cuts_at_most(lambda + 1, EdgeFilter::All, true)?
                .iter()
                .filter(|c| c.value(true) == lambda + 1)
                .map(|c| part.quotient.expand(c.set).canonical(n))
                .collect()
        };
        let mut mine: Vec<NodeSet> = part
            .family
            .iter()
            .filter(|&s| !part.added_min_cuts.contains(&s))
            .collect();
        let mut theirs = from_quotient;
        mine.sort_unstable();
        theirs.sort_unstable();
        part.exact = mine == theirs;
        if part.shape == PartShape::Other {
            out.diagnostics
                .push(format!("part {i} with {} members matches no shape", part.family.len()));
        }
        if !part.exact {
            out.diagnostics.push(format!(
                "part {i}: {} members, quotient has {} (λ+1)-cuts",
                mine.len(),
                theirs.len()
            ));
        }
    }
    Ok(out)
}

/// F₂(H) split into an uncrossable part and a symmetric proper crossing part.
#[derive(Clone, Debug, Serialize)]
pub struct F2Decomposition {
    pub f2: SetFamily,
    pub f_prime: SetFamily,
    /// Stored as a symmetric closure.
    pub f_dprime: SetFamily,
}

/// Splits F₂(H) for odd k, where H is the subgraph on `h_edges` with unit
/// capacities. A member whose cut meets a quotient edge carrying two or more
/// unsafe edges goes to F′; every other member (and its complement) to F″.
/// Both structures are checked before returning.
pub fn decompose_f2_odd(g: &Multigraph, h_edges: &[usize], k: u32) -> Result<F2Decomposition> {
    if k % 2 == 0 {
        return Err(Error::precondition(format!("k = {k} must be odd")));
    }
    let h = g.subgraph(h_edges).with_unit_capacities();
    let n = h.node_count();
    if let Some(w) = flex_violation(&h, k, 1)? {
        return Err(Error::precondition_at("H is not (k,1)-flex-connected", w));
    }
    let f2 = enumerate_fq(&h, k, 2)?;
    if f2.is_empty() {
        return Ok(F2Decomposition {
            f2,
            f_prime: SetFamily::empty(n),
            f_dprime: SetFamily::empty(n),
        });
    }
    let parts = decompose_plus_cuts(&h, Weight::from(k))?.parts;
    let mut prime = Vec::new();
    let mut dprime = Vec::new();
    for s in f2.iter() {
        let mut hosts = parts.iter().filter(|p| p.family.contains_cut(s)).peekable();
        if hosts.peek().is_none() {
            return Err(Error::Internal(format!("F₂ member {s} lies in no part")));
        }
        let red = hosts.any(|p| {
            let side = p.quotient.contract(s).map(|c| p.quotient.expand(c));
            side.is_some_and(|side| {
                p.quotient
                    .crossing_edges(side)
                    .any(|e| p.quotient.colors[e] == super::EdgeColor::Red)
            })
        });
        if red {
            prime.push(s);
        } else {
            dprime.push(s);
        }
    }
    let f_prime = SetFamily::new(n, prime)?;
    let f_dprime = SetFamily::new(n, dprime)?.symmetric_closure();
    if let Some((a, b)) = f_prime.uncrossable_violation() {
        return Err(Error::Internal(format!("F′ is not uncrossable: {a}, {b}")));
    }
    if let Some(v) = f_dprime.symmetric_proper_crossing_violation() {
        return Err(Error::Internal(format!("F″ is not symmetric proper crossing: {v}")));
    }
    Ok(F2Decomposition { f2, f_prime, f_dprime })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::Edge;

    fn s(v: &[usize]) -> NodeSet {
        NodeSet::from_nodes(v.iter().copied())
    }

    #[test]
    fn five_cycle_plus_cuts_form_one_part() {
        // doubled 5-cycle with one parallel edge removed: λ = 3
        let mut pairs = Vec::new();
        for i in 0..5 {
            pairs.push((i, (i + 1) % 5));
            if i != 0 {
                pairs.push((i, (i + 1) % 5));
            }
        }
        let g = Multigraph::from_pairs(5, &pairs).unwrap();
        assert_eq!(g.min_cut_value(EdgeFilter::All, true).unwrap(), 3);
        let d = decompose_plus_cuts(&g, 3).unwrap();
        assert_eq!(d.parts.len(), 1);
        let p = &d.parts[0];
        assert!(matches!(p.shape, PartShape::CycleUniform | PartShape::CycleOneLight));
        let plus = g.enumerate_cuts_at_most(4, EdgeFilter::All, true).unwrap();
        for c in plus.iter().filter(|c| c.value(true) == 4) {
            assert!((1..=2).contains(&d.multiplicity(c.set)));
        }
    }

    #[test]
    fn no_plus_cuts_means_no_parts() {
        // doubled K4 has cut values 6 and 8, so it has no 4-cuts
        let k4 = Multigraph::from_pairs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let doubled = Multigraph::with_edges(4, k4.edges().iter().map(|e| e.clone().with_capacity(2))).unwrap();
        let d = decompose_plus_cuts(&doubled, 3).unwrap();
        assert!(d.parts.is_empty());
        assert!(decompose_plus_cuts(&k4, 2).is_err());
        assert!(decompose_plus_cuts(&k4, 5).is_err());
    }

    #[test]
    fn f2_without_unsafe_edges_is_empty() {
        let g = Multigraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let d = decompose_f2_odd(&g, &[0, 1, 2, 3], 1).unwrap();
        assert!(d.f2.is_empty() && d.f_prime.is_empty() && d.f_dprime.is_empty());
    }

    #[test]
    fn c4_with_opposite_unsafe_edges_goes_to_f_dprime() {
        let g = Multigraph::with_edges(
            4,
            [
                Edge::new(0, 1).unsafe_edge(),
                Edge::new(1, 2),
                Edge::new(2, 3).unsafe_edge(),
                Edge::new(3, 0),
            ],
        )
        .unwrap();
        let d = decompose_f2_odd(&g, &[0, 1, 2, 3], 1).unwrap();
        assert_eq!(d.f2.members(), &[s(&[1, 2])]);
        assert!(d.f_prime.is_empty());
        assert_eq!(d.f_dprime.members(), &[s(&[1, 2]), s(&[0, 3])]);
    }

    #[test]
    fn doubled_unsafe_pendant_goes_to_f_prime() {
        let g = Multigraph::with_edges(
            4,
            [
                Edge::new(0, 1),
                Edge::new(1, 2),
                Edge::new(2, 0),
                Edge::new(0, 3).unsafe_edge(),
                Edge::new(0, 3).unsafe_edge(),
            ],
        )
        .unwrap();
        let d = decompose_f2_odd(&g, &[0, 1, 2, 3, 4], 1).unwrap();
        assert_eq!(d.f2.members(), &[s(&[3])]);
        assert_eq!(d.f_prime.members(), &[s(&[3])]);
        assert!(d.f_dprime.is_empty());
    }

    #[test]
    fn f2_odd_rejects_unflexible_h() {
        let g = Multigraph::with_edges(3, [Edge::new(0, 1).unsafe_edge(), Edge::new(1, 2)]).unwrap();
        assert!(matches!(
            decompose_f2_odd(&g, &[0, 1], 1),
            Err(Error::Precondition { .. })
        ));
    }
}
