use serde::Serialize;

use super::{corners, strongly_cross};
use crate::multigraph::{EdgeFilter, Multigraph, NodeSet};
use crate::{Error, Result, Weight};

/// Four-corner contraction of two strongly crossing cuts A, B.
///
/// Corners are C1=A∩B, C2=A∖B, C3=V∖(A∪B), C4=B∖A after normalization:
/// d1 is the smallest corner degree, d2 ≤ d4, and a ≥ b when d1 = d2.
/// Side capacities are x (C4C1), y (C2C3), z (C1C2), w (C3C4); diagonals
/// are a (C2C4) and b (C1C3).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Square {
    pub corners: [NodeSet; 4],
    pub corner_degrees: [Weight; 4],
    pub x: Weight,
    pub y: Weight,
    pub z: Weight,
    pub w: Weight,
    pub a: Weight,
    pub b: Weight,
    pub d_a: Weight,
    pub d_b: Weight,
    pub alpha: Weight,
    pub lambda: Weight,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum SquareCase {
    MinMin,
    MinPlusOdd,
    MinPlusEven,
    #[serde(rename = "PP_a")]
    PpA,
    #[serde(rename = "PP_b")]
    PpB,
    #[serde(rename = "PP_c")]
    PpC,
    #[serde(rename = "PP_d")]
    PpD,
    #[serde(rename = "PP_e")]
    PpE,
    #[serde(rename = "PP_f")]
    PpF,
    Other,
}

impl SquareCase {
    pub fn label(self) -> &'static str {
        match self {
            SquareCase::MinMin => "MinMin",
            SquareCase::MinPlusOdd => "MinPlusOdd",
            SquareCase::MinPlusEven => "MinPlusEven",
            SquareCase::PpA => "PP_a",
            SquareCase::PpB => "PP_b",
            SquareCase::PpC => "PP_c",
            SquareCase::PpD => "PP_d",
            SquareCase::PpE => "PP_e",
            SquareCase::PpF => "PP_f",
            SquareCase::Other => "Other",
        }
    }
}

// Dihedral relabelings of the corner cycle C1-C2-C3-C4: new corner i is old corner PERMS[p][i].
const PERMS: [[usize; 4]; 8] = [
    [0, 1, 2, 3],
    [1, 2, 3, 0],
    [2, 3, 0, 1],
    [3, 0, 1, 2],
    [0, 3, 2, 1],
    [1, 0, 3, 2],
    [2, 1, 0, 3],
    [3, 2, 1, 0],
];

/// Square of A and B with λ taken as the capacitated connectivity of `g`.
pub fn build_square(g: &Multigraph, a: NodeSet, b: NodeSet) -> Result<Square> {
    let lambda = g.min_cut_value(EdgeFilter::All, true)?;
    build_square_with(g, a, b, lambda)
}

/// Square of A and B, recording the given λ for classification.
pub fn build_square_with(g: &Multigraph, a: NodeSet, b: NodeSet, lambda: Weight) -> Result<Square> {
    let n = g.node_count();
    for s in [a, b] {
        if !s.is_proper(n) {
            return Err(Error::NotProper { set: s, n });
        }
    }
    if !strongly_cross(a, b, n) {
        return Err(Error::precondition_pair("sets do not cross strongly", a, b));
    }
    let old = corners(a, b, n);
    let corner_of = |v: usize| old.iter().position(|c| c.contains(v)).expect("corners partition V");

    let mut cap = [[0 as Weight; 4]; 4];
    for e in g.edges() {
        let (i, j) = (corner_of(e.u), corner_of(e.v));
        if i != j {
            cap[i][j] += e.capacity;
            cap[j][i] += e.capacity;
        }
    }
    // corner degrees by direct cut evaluation, independent of `cap`
    let mut deg = [0 as Weight; 4];
    for (d, &c) in deg.iter_mut().zip(&old) {
        *d = g.cut_degree(c, EdgeFilter::All, true)?;
    }

    let mut best: Option<[usize; 4]> = None;
    for p in PERMS {
        let d = |i: usize| deg[p[i]];
        let diag_a = cap[p[1]][p[3]];
        let diag_b = cap[p[0]][p[2]];
        let valid = d(0) <= d(1)
            && d(0) <= d(2)
            && d(0) <= d(3)
            && d(1) <= d(3)
            && (d(0) != d(1) || diag_a >= diag_b);
        if !valid {
            continue;
        }
        let key = p.map(|i| old[i]);
        if best.map_or(true, |bp| key < bp.map(|i| old[i])) {
            best = Some(p);
        }
    }
    let p = best.ok_or_else(|| Error::Internal("no normalized corner labeling".into()))?;

    let cs = p.map(|i| old[i]);
    let d_a = g.cut_degree(cs[0].union(cs[1]), EdgeFilter::All, true)?;
    let d_b = g.cut_degree(cs[0].union(cs[3]), EdgeFilter::All, true)?;
    let ds = p.map(|i| deg[i]);
    let c = |i: usize, j: usize| cap[p[i]][p[j]];
    Ok(Square {
        corners: cs,
        corner_degrees: ds,
        x: c(3, 0),
        y: c(1, 2),
        z: c(0, 1),
        w: c(2, 3),
        a: c(1, 3),
        b: c(0, 2),
        d_a,
        d_b,
        // d_A + d_1 ≥ d_2 always holds for capacitated cuts
        alpha: (d_a + ds[0]).saturating_sub(ds[1]),
        lambda,
    })
}

impl Square {
    /// A = C1 ∪ C2 after normalization.
    pub fn set_a(&self) -> NodeSet {
        self.corners[0].union(self.corners[1])
    }

    /// B = C1 ∪ C4 after normalization.
    pub fn set_b(&self) -> NodeSet {
        self.corners[0].union(self.corners[3])
    }

    /// Sides in cyclic order: C1C2, C2C3, C3C4, C4C1.
    pub fn sides(&self) -> [Weight; 4] {
        [self.z, self.y, self.w, self.x]
    }

    /// Every failed identity among the closed-form side solution, parity of
    /// α, the two corner-degree sum identities and the normalization.
    pub fn identity_violations(&self) -> Vec<String> {
        let [d1, d2, d3, d4] = self.corner_degrees.map(|d| d as i64);
        let (a, b) = (self.a as i64, self.b as i64);
        let (da, db) = (self.d_a as i64, self.d_b as i64);
        let alpha = da + d1 - d2;
        let mut bad = Vec::new();
        let mut check = |ok: bool, what: &str| {
            if !ok {
                bad.push(what.to_string());
            }
        };
        check(self.alpha as i64 == alpha, "alpha = dA + d1 - d2");
        check(alpha.rem_euclid(2) == 0, "alpha even");
        let h = alpha.div_euclid(2);
        check(self.x as i64 == h - b, "x = alpha/2 - b");
        check(self.y as i64 == d2 - d1 - a + h, "y = d2 - d1 - a + alpha/2");
        check(self.z as i64 == d1 - h, "z = d1 - alpha/2");
        check(self.w as i64 == db - d1 - a - b + h, "w = dB - d1 - a - b + alpha/2");
        check(d1 + d3 == da + db - 2 * a, "d1 + d3 = dA + dB - 2a");
        check(d2 + d4 == da + db - 2 * b, "d2 + d4 = dA + dB - 2b");
        check(d1 <= d2 && d1 <= d3 && d1 <= d4, "d1 minimal");
        check(d2 <= d4, "d2 <= d4");
        check(d1 != d2 || a >= b, "d1 = d2 implies a >= b");
        bad
    }
}

fn cyclic_adjacent_pair(s: &[Weight; 4], v: Weight) -> bool {
    (0..4).any(|i| s[i] == v && s[(i + 1) % 4] == v)
}

/// Case of a square whose two cut values lie in {λ, λ+1}.
pub fn classify_square(sq: &Square) -> Result<SquareCase> {
    let l = sq.lambda;
    let level = |d: Weight| {
        if d == l {
            Ok(0)
        } else if d == l + 1 {
            Ok(1)
        } else {
            Err(Error::precondition(format!(
                "cut value {d} outside {{λ, λ+1}} for λ = {l}"
            )))
        }
    };
    let levels = (level(sq.d_a)?, level(sq.d_b)?);
    let s = sq.sides();
    let mut sorted = s;
    sorted.sort_unstable();
    let no_diag = sq.a == 0 && sq.b == 0;
    let all = |v: Weight| s.iter().all(|&x| x == v);
    let even = l % 2 == 0;

    let case = match levels {
        (0, 0) => {
            if even && no_diag && all(l / 2) {
                SquareCase::MinMin
            } else {
                SquareCase::Other
            }
        }
        (0, 1) | (1, 0) => {
            if !no_diag {
                SquareCase::Other
            } else if !even && l >= 1 && sorted == [(l - 1) / 2, (l + 1) / 2, (l + 1) / 2, (l + 1) / 2] {
                SquareCase::MinPlusOdd
            } else if even && sorted == [l / 2, l / 2, l / 2, l / 2 + 1] {
                SquareCase::MinPlusEven
            } else {
                SquareCase::Other
            }
        }
        _ if even => {
            let half = l / 2;
            if no_diag && sorted == [half, half, half + 1, half + 1] && cyclic_adjacent_pair(&s, half) {
                SquareCase::PpA
            } else if sq.a + sq.b == 1 && all(half) {
                SquareCase::PpB
            } else {
                SquareCase::Other
            }
        }
        _ => {
            let (lo, mid, hi) = ((l - 1) / 2, (l + 1) / 2, (l + 3) / 2);
            let opposite_c = (0..4).any(|i| {
                s[i] == hi && s[(i + 2) % 4] == lo && s[(i + 1) % 4] == mid && s[(i + 3) % 4] == mid
            });
            // side i joins corners i and i+1
            let one_end_light = |end: usize| {
                let (s_in, s_out) = (s[end], s[(end + 3) % 4]);
                let others = [s[(end + 1) % 4], s[(end + 2) % 4]];
                s_in == lo && s_out == lo && others == [mid, mid]
            };
            if no_diag && opposite_c {
                SquareCase::PpC
            } else if (sq.a == 1 && sq.b == 0 && (one_end_light(1) || one_end_light(3)))
                || (sq.a == 0 && sq.b == 1 && (one_end_light(0) || one_end_light(2)))
            {
                SquareCase::PpD
            } else if sq.a == 1 && sq.b == 1 && all(lo) {
                SquareCase::PpE
            } else if no_diag && all(mid) {
                SquareCase::PpF
            } else {
                SquareCase::Other
            }
        }
    };
    Ok(case)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::Edge;

    fn s(v: &[usize]) -> NodeSet {
        NodeSet::from_nodes(v.iter().copied())
    }

    fn five_edge() -> Multigraph {
        // p1..p4 = 0..3
        Multigraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (1, 3)]).unwrap()
    }

    #[test]
    fn square_of_five_edge_graph() {
        let g = five_edge();
        let sq = build_square(&g, s(&[0, 1]), s(&[0, 3])).unwrap();
        assert_eq!((sq.x, sq.y, sq.z, sq.w), (1, 1, 1, 1));
        assert_eq!((sq.a, sq.b), (1, 0));
        assert_eq!(sq.alpha, 2);
        assert_eq!((sq.d_a, sq.d_b), (3, 3));
        assert_eq!(sq.corner_degrees, [2, 3, 2, 3]);
        assert_eq!(sq.corners, [s(&[0]), s(&[1]), s(&[2]), s(&[3])]);
        assert!(sq.identity_violations().is_empty());
        assert_eq!(sq.lambda, 2);
        assert_eq!(classify_square(&sq).unwrap(), SquareCase::PpB);
    }

    #[test]
    fn square_with_double_side() {
        // C1..C4 = 0..3, z = y = x = 1, w = 2
        let g = Multigraph::from_pairs(4, &[(0, 1), (1, 2), (3, 0), (2, 3), (2, 3)]).unwrap();
        let sq = build_square(&g, s(&[0, 1]), s(&[0, 3])).unwrap();
        assert_eq!((sq.d_a, sq.d_b), (2, 3));
        assert_eq!((sq.x, sq.y, sq.z, sq.w), (1, 1, 1, 2));
        assert!(sq.identity_violations().is_empty());
        assert_eq!(sq.lambda, 2);
        assert_eq!(classify_square(&sq).unwrap(), SquareCase::MinPlusEven);
    }

    #[test]
    fn uniform_square_with_lambda_three() {
        // cycle of capacity-2 sides; every corner has degree 4 = λ+1 for λ = 3
        let mut edges = Vec::new();
        for (u, v) in [(0, 1), (1, 2), (2, 3), (3, 0)] {
            edges.push(Edge::new(u, v).with_capacity(2));
        }
        let g = Multigraph::with_edges(4, edges).unwrap();
        let sq = build_square_with(&g, s(&[0, 1]), s(&[0, 3]), 3).unwrap();
        assert_eq!(sq.corner_degrees, [4, 4, 4, 4]);
        assert_eq!(classify_square(&sq).unwrap(), SquareCase::PpF);
    }

    #[test]
    fn rejects_non_crossing_and_out_of_range() {
        let g = five_edge();
        assert!(build_square(&g, s(&[0]), s(&[0, 1])).is_err());
        let mut sq = build_square(&g, s(&[0, 1]), s(&[0, 3])).unwrap();
        sq.lambda = 0;
        assert!(classify_square(&sq).is_err());
    }

    fn synthetic(l: Weight, sides: [Weight; 4], a: Weight, b: Weight, da: Weight, db: Weight) -> Square {
        let [z, y, w, x] = sides;
        Square {
            corners: [s(&[1]), s(&[2]), s(&[3]), s(&[4])],
            corner_degrees: [0; 4],
            x,
            y,
            z,
            w,
            a,
            b,
            d_a: da,
            d_b: db,
            alpha: 0,
            lambda: l,
        }
    }

    #[test]
    fn case_patterns() {
        use SquareCase::*;
        let cases = [
            (synthetic(4, [2, 2, 2, 2], 0, 0, 4, 4), MinMin),
            (synthetic(3, [2, 2, 2, 2], 0, 0, 3, 3), Other),
            (synthetic(3, [1, 2, 2, 2], 0, 0, 3, 4), MinPlusOdd),
            (synthetic(2, [1, 1, 1, 2], 0, 0, 2, 3), MinPlusEven),
            (synthetic(2, [1, 1, 2, 2], 0, 0, 3, 3), PpA),
            (synthetic(2, [1, 2, 1, 2], 0, 0, 3, 3), Other),
            (synthetic(2, [1, 1, 1, 1], 0, 1, 3, 3), PpB),
            (synthetic(3, [1, 2, 3, 2], 0, 0, 4, 4), PpC),
            (synthetic(3, [1, 1, 2, 2], 1, 0, 4, 4), PpD),
            (synthetic(3, [1, 1, 1, 1], 1, 1, 4, 4), PpE),
            (synthetic(3, [2, 2, 2, 2], 0, 0, 4, 4), PpF),
            (synthetic(1, [0, 1, 2, 1], 0, 0, 2, 2), PpC),
        ];
        for (sq, want) in cases {
            assert_eq!(classify_square(&sq).unwrap(), want, "{:?}", sq.sides());
        }
    }
}
