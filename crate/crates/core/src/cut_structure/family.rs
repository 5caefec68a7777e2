use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use super::{corners, strongly_cross, weakly_cross};
use crate::multigraph::NodeSet;
use crate::{Error, Result};

/// Explicit family of proper node subsets over a ground set `0..n`.
///
/// [`SetFamily::new`] stores one canonical representative per cut (the side
/// avoiding node 0). [`SetFamily::oriented`] and
/// [`SetFamily::symmetric_closure`] keep sets exactly as given.
#[derive(Clone, Serialize)]
pub struct SetFamily {
    n: usize,
    members: Vec<NodeSet>,
    symmetric: bool,
    #[serde(skip)]
    index: HashSet<NodeSet>,
}

/// Why a family is not a symmetric proper crossing family.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CrossingViolation {
    /// The complement of this member is missing.
    NotSymmetric(NodeSet),
    /// These members cross but their intersection or union is missing.
    NotClosed(NodeSet, NodeSet),
    /// These members cross and their symmetric difference is a member.
    NotProper(NodeSet, NodeSet),
}

impl CrossingViolation {
    pub fn sets(&self) -> (NodeSet, Option<NodeSet>) {
        match *self {
            CrossingViolation::NotSymmetric(a) => (a, None),
            CrossingViolation::NotClosed(a, b) | CrossingViolation::NotProper(a, b) => (a, Some(b)),
        }
    }
}

impl fmt::Display for CrossingViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CrossingViolation::NotSymmetric(a) => write!(f, "complement of {a} missing"),
            CrossingViolation::NotClosed(a, b) => write!(f, "{a} and {b} cross but A∩B or A∪B is missing"),
            CrossingViolation::NotProper(a, b) => write!(f, "{a} and {b} cross and their symmetric difference is a member"),
        }
    }
}

impl PartialEq for SetFamily {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.members == other.members && self.symmetric == other.symmetric
    }
}
impl Eq for SetFamily {}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SetFamily")
            .field("n", &self.n)
            .field("symmetric", &self.symmetric)
            .field("members", &self.members)
            .finish()
    }
}

impl SetFamily {
    fn build(n: usize, mut members: Vec<NodeSet>, symmetric: bool) -> Result<Self> {
        if let Some(&bad) = members.iter().find(|s| !s.is_proper(n)) {
            return Err(Error::NotProper { set: bad, n });
        }
        members.sort_unstable();
        members.dedup();
        let index = members.iter().copied().collect();
        Ok(SetFamily {
            n,
            members,
            symmetric,
            index,
        })
    }

    pub fn empty(n: usize) -> Self {
        SetFamily {
            n,
            members: Vec::new(),
            symmetric: false,
            index: HashSet::new(),
        }
    }

    /// Canonical family: one representative per cut.
    pub fn new(n: usize, members: impl IntoIterator<Item = NodeSet>) -> Result<Self> {
        let members: Vec<NodeSet> = members.into_iter().collect();
        if let Some(&bad) = members.iter().find(|s| !s.is_proper(n)) {
            return Err(Error::NotProper { set: bad, n });
        }
        Self::build(n, members.into_iter().map(|s| s.canonical(n)).collect(), false)
    }

    /// Sets kept as given (deduplicated, not canonicalized).
    pub fn oriented(n: usize, members: impl IntoIterator<Item = NodeSet>) -> Result<Self> {
        Self::build(n, members.into_iter().collect(), false)
    }

    /// Every member together with its complement.
    pub fn symmetric_closure(&self) -> Self {
        let n = self.n;
        let all = self
            .members
            .iter()
            .flat_map(|&s| [s, s.complement(n)])
            .collect();
        Self::build(n, all, true).expect("members are proper")
    }

    /// One canonical representative per member cut.
    pub fn canonical(&self) -> Self {
        Self::new(self.n, self.members.iter().copied()).expect("members are proper")
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn is_symmetric_closure(&self) -> bool {
        self.symmetric
    }

    pub fn members(&self) -> &[NodeSet] {
        &self.members
    }

    pub fn iter(&self) -> impl Iterator<Item = NodeSet> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Literal membership.
    pub fn contains(&self, s: NodeSet) -> bool {
        self.index.contains(&s)
    }

    /// Membership of the cut defined by `s` (either side).
    pub fn contains_cut(&self, s: NodeSet) -> bool {
        s.is_proper(self.n) && (self.contains(s) || self.contains(s.complement(self.n)))
    }

    pub fn union(&self, other: &SetFamily) -> Result<SetFamily> {
        if self.n != other.n {
            return Err(Error::precondition("families over different ground sets"));
        }
        let all = self.iter().chain(other.iter()).collect();
        Self::build(self.n, all, self.symmetric && other.symmetric)
    }

    fn canonical_members(&self) -> Vec<NodeSet> {
        let mut v: Vec<NodeSet> = self.members.iter().map(|s| s.canonical(self.n)).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// First pair of member cuts with all four corners non-empty.
    pub fn laminar_violation(&self) -> Option<(NodeSet, NodeSet)> {
        let m = self.canonical_members();
        for (i, &a) in m.iter().enumerate() {
            for &b in &m[i + 1..] {
                if strongly_cross(a, b, self.n) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_laminar(&self) -> bool {
        self.laminar_violation().is_none()
    }

    /// First crossing pair for which neither {A∩B, A∪B} nor {A∖B, B∖A} lies
    /// in the family, membership taken up to complement.
    pub fn uncrossable_violation(&self) -> Option<(NodeSet, NodeSet)> {
        let n = self.n;
        let m = self.canonical_members();
        let has: HashSet<NodeSet> = m.iter().copied().collect();
        let member = |s: NodeSet| has.contains(&s.canonical(n));
        for (i, &a) in m.iter().enumerate() {
            for &b in &m[i + 1..] {
                if !strongly_cross(a, b, n) {
                    continue;
                }
                let [c1, c2, c3, c4] = corners(a, b, n);
                let ok = (member(c1) && member(c3)) || (member(c2) && member(c4));
                if !ok {
                    return Some((a, b));
                }
            }
        }
        None
    }

    pub fn is_uncrossable(&self) -> bool {
        self.uncrossable_violation().is_none()
    }

    /// Checks the members literally: closed under complement, A∩B and A∪B
    /// present for every crossing pair, and (A∖B)∪(B∖A) absent whenever all
    /// four corners are non-empty.
    pub fn symmetric_proper_crossing_violation(&self) -> Option<CrossingViolation> {
        let n = self.n;
        if let Some(&s) = self.members.iter().find(|s| !self.contains(s.complement(n))) {
            return Some(CrossingViolation::NotSymmetric(s));
        }
        for (i, &a) in self.members.iter().enumerate() {
            for &b in &self.members[i + 1..] {
                if !weakly_cross(a, b, n) {
                    continue;
                }
                if !self.contains(a.intersection(b)) || !self.contains(a.union(b)) {
                    return Some(CrossingViolation::NotClosed(a, b));
                }
                if strongly_cross(a, b, n) && self.contains(a.symmetric_difference(b)) {
                    return Some(CrossingViolation::NotProper(a, b));
                }
            }
        }
        None
    }

    pub fn is_symmetric_proper_crossing(&self) -> bool {
        self.symmetric_proper_crossing_violation().is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::{EdgeFilter, Multigraph};

    fn s(v: &[usize]) -> NodeSet {
        NodeSet::from_nodes(v.iter().copied())
    }

    fn c4_two_cuts() -> SetFamily {
        let g = Multigraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let cuts = g.enumerate_cuts_at_most(3, EdgeFilter::All, true).unwrap();
        SetFamily::new(4, cuts.iter().map(|c| c.set)).unwrap()
    }

    #[test]
    fn canonical_dedup() {
        let f = SetFamily::new(4, [s(&[0, 1]), s(&[2, 3]), s(&[1])]).unwrap();
        assert_eq!(f.members(), &[s(&[1]), s(&[2, 3])]);
        assert!(f.contains_cut(s(&[0, 1])));
        assert!(!f.contains(s(&[0, 1])));
        assert!(SetFamily::new(4, [NodeSet::EMPTY]).is_err());
    }

    #[test]
    fn laminar_examples() {
        assert!(SetFamily::new(4, [s(&[1]), s(&[1, 2])]).unwrap().is_laminar());
        let f = SetFamily::oriented(4, [s(&[0, 1]), s(&[1, 2])]).unwrap();
        let (a, b) = f.laminar_violation().unwrap();
        // reported on canonical representatives
        assert_eq!((a, b), (s(&[1, 2]), s(&[2, 3])));
        assert!(SetFamily::empty(4).is_laminar());
    }

    #[test]
    fn uncrossable_examples() {
        let f = c4_two_cuts();
        assert_eq!(f.len(), 6);
        assert!(f.is_uncrossable());
        assert!(!SetFamily::new(4, [s(&[0, 1]), s(&[1, 2])]).unwrap().is_uncrossable());
        let lam = SetFamily::new(6, [s(&[1]), s(&[1, 2]), s(&[3, 4]), s(&[1, 2, 3, 4])]).unwrap();
        assert!(lam.is_laminar() && lam.is_uncrossable());
    }

    #[test]
    fn symmetric_proper_crossing_examples() {
        let closure = c4_two_cuts().symmetric_closure();
        assert_eq!(closure.len(), 12);
        assert!(closure.is_symmetric_proper_crossing());

        let lam = SetFamily::oriented(4, [s(&[1]), s(&[1, 2])]).unwrap();
        assert_eq!(
            lam.symmetric_proper_crossing_violation(),
            Some(CrossingViolation::NotSymmetric(s(&[1])))
        );
        assert!(SetFamily::empty(4).is_symmetric_proper_crossing());

        // every proper subset: closed, but symmetric differences are members
        let all = SetFamily::oriented(4, (1..15u64).map(NodeSet)).unwrap();
        assert!(matches!(
            all.symmetric_proper_crossing_violation(),
            Some(CrossingViolation::NotProper(..))
        ));

        let open = SetFamily::oriented(4, [s(&[0, 1]), s(&[2, 3]), s(&[1, 2]), s(&[0, 3])]).unwrap();
        assert!(matches!(
            open.symmetric_proper_crossing_violation(),
            Some(CrossingViolation::NotClosed(..))
        ));
    }
}
