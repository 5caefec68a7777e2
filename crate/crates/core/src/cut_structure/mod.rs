//! Uncrossing structure of near-minimum cuts: squares of crossing cuts and
//! their case analysis, structural predicates on set families, quotient
//! graphs and decompositions of (λ+1)-cut families.

mod decompose;
mod family;
mod quotient;
mod square;

pub use decompose::{
    decompose_f2_odd, decompose_plus_cuts, F2Decomposition, Part, PlusCutDecomposition,
};
pub use family::{CrossingViolation, SetFamily};
pub use quotient::{family_quotient, verify_part_shape, EdgeColor, PartShape, QuotientGraph};
pub use square::{build_square, build_square_with, classify_square, Square, SquareCase};

use crate::multigraph::NodeSet;
use crate::{Error, Result};

/// A∩B and V∖(A∪B) are both non-empty.
#[inline]
pub(crate) fn weakly_cross(a: NodeSet, b: NodeSet, n: usize) -> bool {
    !a.intersection(b).is_empty() && a.union(b) != NodeSet::full(n)
}

/// All four corners A∩B, A∖B, V∖(A∪B), B∖A are non-empty.
#[inline]
pub(crate) fn strongly_cross(a: NodeSet, b: NodeSet, n: usize) -> bool {
    weakly_cross(a, b, n) && !a.difference(b).is_empty() && !b.difference(a).is_empty()
}

fn check_pair(a: NodeSet, b: NodeSet, n: usize) -> Result<()> {
    for s in [a, b] {
        if !s.is_proper(n) {
            return Err(Error::NotProper { set: s, n });
        }
    }
    Ok(())
}

/// A and B cross: A∩B and V∖(A∪B) are non-empty.
pub fn crosses(a: NodeSet, b: NodeSet, n: usize) -> Result<bool> {
    check_pair(a, b, n)?;
    Ok(weakly_cross(a, b, n))
}

/// A and B cross with all four corner sets non-empty.
pub fn crosses_strongly(a: NodeSet, b: NodeSet, n: usize) -> Result<bool> {
    check_pair(a, b, n)?;
    Ok(strongly_cross(a, b, n))
}

/// Corner sets C1=A∩B, C2=A∖B, C3=V∖(A∪B), C4=B∖A.
pub fn corners(a: NodeSet, b: NodeSet, n: usize) -> [NodeSet; 4] {
    [
        a.intersection(b),
        a.difference(b),
        a.union(b).complement(n),
        b.difference(a),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[usize]) -> NodeSet {
        NodeSet::from_nodes(v.iter().copied())
    }

    #[test]
    fn crossing_examples() {
        assert!(crosses_strongly(s(&[0, 1]), s(&[1, 2]), 4).unwrap());
        assert_eq!(
            corners(s(&[0, 1]), s(&[1, 2]), 4),
            [s(&[1]), s(&[0]), s(&[3]), s(&[2])]
        );
        assert!(!crosses_strongly(s(&[0]), s(&[0, 1]), 4).unwrap());
        // nested sets still cross in the weak sense
        assert!(crosses(s(&[0]), s(&[0, 1]), 4).unwrap());
        assert!(!crosses(s(&[0, 1]), s(&[2, 3]), 4).unwrap());
        assert!(!crosses_strongly(s(&[0, 1]), s(&[2, 3]), 4).unwrap());
    }

    #[test]
    fn crossing_rejects_foreign_sets() {
        assert!(crosses(s(&[0, 5]), s(&[1]), 4).is_err());
        assert!(crosses_strongly(NodeSet::EMPTY, s(&[1]), 4).is_err());
    }
}
