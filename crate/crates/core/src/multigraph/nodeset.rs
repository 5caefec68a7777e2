use std::fmt;

use serde::{Deserialize, Serialize};

/// Subset of the nodes `0..n` of a graph with at most 64 nodes.
///
/// As a cut, a set and its complement describe the same cut. The canonical
/// representative is the side that does not contain node 0.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeSet(pub u64);

pub const MAX_NODES: usize = 64;

#[inline]
fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl NodeSet {
    pub const EMPTY: NodeSet = NodeSet(0);

    pub fn from_nodes<I: IntoIterator<Item = usize>>(nodes: I) -> Self {
        NodeSet(nodes.into_iter().fold(0u64, |m, v| m | (1u64 << v)))
    }

    pub fn singleton(v: usize) -> Self {
        NodeSet(1u64 << v)
    }

    pub fn full(n: usize) -> Self {
        NodeSet(full_mask(n))
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub fn contains(self, v: usize) -> bool {
        self.0 >> v & 1 == 1
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Non-empty and not the whole ground set.
    #[inline]
    pub fn is_proper(self, n: usize) -> bool {
        self.0 != 0 && self.0 & !full_mask(n) == 0 && self.0 != full_mask(n)
    }

    #[inline]
    pub fn complement(self, n: usize) -> Self {
        NodeSet(!self.0 & full_mask(n))
    }

    /// The side of the cut not containing node 0.
    #[inline]
    pub fn canonical(self, n: usize) -> Self {
        if self.contains(0) {
            self.complement(n)
        } else {
            self
        }
    }

    #[inline]
    pub fn is_canonical(self) -> bool {
        !self.contains(0)
    }

    #[inline]
    pub fn union(self, o: Self) -> Self {
        NodeSet(self.0 | o.0)
    }

    #[inline]
    pub fn intersection(self, o: Self) -> Self {
        NodeSet(self.0 & o.0)
    }

    #[inline]
    pub fn difference(self, o: Self) -> Self {
        NodeSet(self.0 & !o.0)
    }

    #[inline]
    pub fn symmetric_difference(self, o: Self) -> Self {
        NodeSet(self.0 ^ o.0)
    }

    #[inline]
    pub fn is_subset(self, o: Self) -> bool {
        self.0 & !o.0 == 0
    }

    /// True when the edge `u`-`v` has exactly one endpoint in the set.
    #[inline]
    pub fn separates(self, u: usize, v: usize) -> bool {
        self.contains(u) != self.contains(v)
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }
}

impl fmt::Debug for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for NodeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_side_avoids_node_zero() {
        let s = NodeSet::from_nodes([0, 1]);
        assert_eq!(s.canonical(4), NodeSet::from_nodes([2, 3]));
        assert_eq!(NodeSet::from_nodes([2]).canonical(4), NodeSet::from_nodes([2]));
    }

    #[test]
    fn proper_subsets() {
        assert!(!NodeSet::EMPTY.is_proper(3));
        assert!(!NodeSet::full(3).is_proper(3));
        assert!(NodeSet::from_nodes([1]).is_proper(3));
        assert!(!NodeSet::from_nodes([3]).is_proper(3));
        assert!(NodeSet::full(63).is_proper(64));
    }

    #[test]
    fn display_lists_members() {
        assert_eq!(NodeSet::from_nodes([3, 1]).to_string(), "{1,3}");
        assert_eq!(NodeSet::EMPTY.to_string(), "{}");
    }
}
