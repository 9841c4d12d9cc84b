//! Lattice points, primitive directions and convex lattice polygons.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Sub};

use num_integer::Integer;

use crate::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }
}

impl Add for LatticePoint {
    type Output = LatticePoint;
    fn add(self, o: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for LatticePoint {
    type Output = LatticePoint;
    fn sub(self, o: LatticePoint) -> LatticePoint {
        LatticePoint::new(self.x - o.x, self.y - o.y)
    }
}

/// Cross product of `b - a` and `c - a`; positive for a left turn.
pub fn orient(a: LatticePoint, b: LatticePoint, c: LatticePoint) -> i64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// A projective lattice direction: primitive, with `u1 > 0` or `u1 = 0, u2 > 0`.
///
/// Ordering is lexicographic on `(u1, u2)` and is the tie-break order for
/// width minimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction {
    u1: i64,
    u2: i64,
}

impl Direction {
    pub const HORIZONTAL: Direction = Direction { u1: 1, u2: 0 };
    pub const VERTICAL: Direction = Direction { u1: 0, u2: 1 };

    /// Reduces `(a, b)` to its canonical primitive representative.
    pub fn new(a: i64, b: i64) -> Option<Direction> {
        if a == 0 && b == 0 {
            return None;
        }
        let g = a.gcd(&b);
        let (mut u1, mut u2) = (a / g, b / g);
        if u1 < 0 || (u1 == 0 && u2 < 0) {
            u1 = -u1;
            u2 = -u2;
        }
        Some(Direction { u1, u2 })
    }

    pub fn u1(self) -> i64 {
        self.u1
    }

    pub fn u2(self) -> i64 {
        self.u2
    }

    pub fn dot(self, p: LatticePoint) -> i64 {
        self.u1 * p.x + self.u2 * p.y
    }

    /// The direction orthogonal to this one.
    pub fn perpendicular(self) -> Direction {
        Direction::new(-self.u2, self.u1).expect("nonzero")
    }
}

/// Primitive vector of `v` keeping its sign (not canonicalized).
pub fn primitive_vector(v: LatticePoint) -> Option<LatticePoint> {
    if v.x == 0 && v.y == 0 {
        return None;
    }
    let g = v.x.gcd(&v.y);
    Some(LatticePoint::new(v.x / g, v.y / g))
}

/// Lattice length of the segment `a b`.
pub fn lattice_length(a: LatticePoint, b: LatticePoint) -> i64 {
    let d = b - a;
    d.x.gcd(&d.y)
}

/// Convex lattice polygon stored as its counterclockwise vertex cycle.
///
/// Degenerate hulls are kept: one vertex for a point, two for a segment.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatticePolygon {
    vertices: Vec<LatticePoint>,
}

/// Convex hull by the monotone chain; collinear boundary points are dropped.
/// Returns `None` for an empty input.
pub fn convex_hull(points: &[LatticePoint]) -> Option<LatticePolygon> {
    let mut pts: Vec<LatticePoint> = points.to_vec();
    pts.sort();
    pts.dedup();
    if pts.is_empty() {
        return None;
    }
    if pts.len() <= 2 {
        return Some(LatticePolygon { vertices: pts });
    }
    let mut hull: Vec<LatticePoint> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower && orient(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    Some(LatticePolygon { vertices: hull })
}

impl LatticePolygon {
    pub fn from_points(points: &[LatticePoint]) -> Option<LatticePolygon> {
        convex_hull(points)
    }

    /// `[0, w] x [0, h]`.
    pub fn rectangle(w: i64, h: i64) -> LatticePolygon {
        convex_hull(&[
            LatticePoint::new(0, 0),
            LatticePoint::new(w, 0),
            LatticePoint::new(w, h),
            LatticePoint::new(0, h),
        ])
        .expect("non-empty")
    }

    /// The degree-`d` triangle `conv{(0,0), (d,0), (0,d)}`.
    pub fn triangle(d: i64) -> LatticePolygon {
        convex_hull(&[LatticePoint::new(0, 0), LatticePoint::new(d, 0), LatticePoint::new(0, d)])
            .expect("non-empty")
    }

    pub fn vertices(&self) -> &[LatticePoint] {
        &self.vertices
    }

    /// 0 for a point, 1 for a segment, 2 otherwise.
    pub fn dimension(&self) -> usize {
        match self.vertices.len() {
            1 => 0,
            2 => 1,
            _ => 2,
        }
    }

    pub fn is_degenerate(&self) -> bool {
        self.dimension() < 2
    }

    /// Directed boundary edges in counterclockwise order.
    pub fn edges(&self) -> impl Iterator<Item = (LatticePoint, LatticePoint)> + '_ {
        let n = self.vertices.len();
        let count = if n >= 3 { n } else { 0 };
        (0..count).map(move |i| (self.vertices[i], self.vertices[(i + 1) % n]))
    }

    pub fn twice_area(&self) -> i64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0;
        }
        let mut s = 0;
        for i in 0..n {
            let a = self.vertices[i];
            let b = self.vertices[(i + 1) % n];
            s += a.x * b.y - a.y * b.x;
        }
        s
    }

    /// Euclidean area by the shoelace formula.
    pub fn area(&self) -> Rational {
        Rational::new(self.twice_area() as i128, 2)
    }

    pub fn width_in_direction(&self, u: Direction) -> i64 {
        let mut lo = i64::MAX;
        let mut hi = i64::MIN;
        for &v in &self.vertices {
            let d = u.dot(v);
            lo = lo.min(d);
            hi = hi.max(d);
        }
        hi - lo
    }

    /// `(min x, min y)` and `(max x, max y)`.
    pub fn bounding_box(&self) -> (LatticePoint, LatticePoint) {
        let mut lo = LatticePoint::new(i64::MAX, i64::MAX);
        let mut hi = LatticePoint::new(i64::MIN, i64::MIN);
        for v in &self.vertices {
            lo.x = lo.x.min(v.x);
            lo.y = lo.y.min(v.y);
            hi.x = hi.x.max(v.x);
            hi.y = hi.y.max(v.y);
        }
        (lo, hi)
    }

    /// Minimal lattice width and the lexicographically first direction achieving it.
    ///
    /// Candidates are the canonical primitive directions with both coordinates
    /// bounded by twice the larger bounding-box extent.
    pub fn minimal_lattice_width(&self) -> (i64, Direction) {
        let (lo, hi) = self.bounding_box();
        let bound = (2 * (hi.x - lo.x).max(hi.y - lo.y)).max(1);
        minimal_width_within(self, bound)
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        match self.vertices.len() {
            1 => self.vertices[0] == p,
            2 => {
                let (a, b) = (self.vertices[0], self.vertices[1]);
                orient(a, b, p) == 0
                    && p.x >= a.x.min(b.x)
                    && p.x <= a.x.max(b.x)
                    && p.y >= a.y.min(b.y)
                    && p.y <= a.y.max(b.y)
            }
            _ => self.edges().all(|(a, b)| orient(a, b, p) >= 0),
        }
    }

    pub fn on_boundary(&self, p: LatticePoint) -> bool {
        if self.is_degenerate() {
            return self.contains(p);
        }
        self.contains(p) && self.edges().any(|(a, b)| orient(a, b, p) == 0)
    }

    /// All lattice points of the polygon, sorted.
    pub fn lattice_points(&self) -> Vec<LatticePoint> {
        let (lo, hi) = self.bounding_box();
        let mut out = Vec::new();
        for x in lo.x..=hi.x {
            for y in lo.y..=hi.y {
                let p = LatticePoint::new(x, y);
                if self.contains(p) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Primitive directions of all differences of lattice points.
    pub fn direction_set(&self) -> BTreeSet<Direction> {
        let pts = self.lattice_points();
        let mut out = BTreeSet::new();
        for (i, &a) in pts.iter().enumerate() {
            for &b in &pts[i + 1..] {
                if let Some(d) = Direction::new(b.x - a.x, b.y - a.y) {
                    out.insert(d);
                }
            }
        }
        out
    }

    pub fn transform(&self, map: &UnimodularMap) -> LatticePolygon {
        let pts: Vec<LatticePoint> = self.vertices.iter().map(|&v| map.apply(v)).collect();
        convex_hull(&pts).expect("non-empty")
    }

    pub fn translate(&self, v: LatticePoint) -> LatticePolygon {
        LatticePolygon { vertices: self.vertices.iter().map(|&p| p + v).collect() }
    }
}

pub(crate) fn minimal_width_within(poly: &LatticePolygon, bound: i64) -> (i64, Direction) {
    let mut best: Option<(i64, Direction)> = None;
    for u1 in 0..=bound {
        for u2 in -bound..=bound {
            if u1 == 0 && u2 <= 0 {
                continue;
            }
            if u1.gcd(&u2) != 1 {
                continue;
            }
            let u = Direction { u1, u2 };
            let w = poly.width_in_direction(u);
            if best.map_or(true, |(bw, _)| w < bw) {
                best = Some((w, u));
            }
        }
    }
    best.expect("at least one candidate direction")
}

/// Affine map `v -> M v + t` with `det M = ±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnimodularMap {
    pub matrix: [[i64; 2]; 2],
    pub shift: LatticePoint,
}

impl UnimodularMap {
    pub const IDENTITY: UnimodularMap =
        UnimodularMap { matrix: [[1, 0], [0, 1]], shift: LatticePoint { x: 0, y: 0 } };

    pub fn determinant(&self) -> i64 {
        let m = self.matrix;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn apply(&self, v: LatticePoint) -> LatticePoint {
        let m = self.matrix;
        LatticePoint::new(
            m[0][0] * v.x + m[0][1] * v.y + self.shift.x,
            m[1][0] * v.x + m[1][1] * v.y + self.shift.y,
        )
    }

    pub fn inverse(&self) -> UnimodularMap {
        let m = self.matrix;
        let det = self.determinant();
        let inv = [[m[1][1] * det, -m[0][1] * det], [-m[1][0] * det, m[0][0] * det]];
        let partial = UnimodularMap { matrix: inv, shift: LatticePoint::default() };
        let s = partial.apply(self.shift);
        UnimodularMap { matrix: inv, shift: LatticePoint::new(-s.x, -s.y) }
    }
}

/// Moves `poly` so that its minimal width is the horizontal width
/// `width_in_direction((1,0))` and its bounding box starts at the origin.
pub fn normalize_width_horizontal(poly: &LatticePolygon) -> (LatticePolygon, UnimodularMap) {
    let (_, u) = poly.minimal_lattice_width();
    let (a, b) = (u.u1(), u.u2());
    let eg = a.extended_gcd(&b);
    // eg.x * a + eg.y * b = ±1 up to sign of gcd
    let (mut s, mut r) = (eg.x, eg.y);
    if eg.gcd < 0 {
        s = -s;
        r = -r;
    }
    let matrix = [[a, b], [-r, s]];
    let linear = UnimodularMap { matrix, shift: LatticePoint::default() };
    debug_assert_eq!(linear.determinant(), 1);
    let moved = poly.transform(&linear);
    let (lo, _) = moved.bounding_box();
    let shift = LatticePoint::new(-lo.x, -lo.y);
    let map = UnimodularMap { matrix, shift };
    (moved.translate(shift), map)
}

/// Interior and boundary lattice-point counts.
pub fn pick_counts(poly: &LatticePolygon) -> (usize, usize) {
    let pts = poly.lattice_points();
    let boundary = pts.iter().filter(|&&p| poly.on_boundary(p)).count();
    (pts.len() - boundary, boundary)
}

/// Lattice polygons used by tests and generators: vertices drawn from a box.
pub fn random_polygon(rng: &mut dyn rand::RngCore, size: i64, count: usize) -> LatticePolygon {
    let mut pts = vec![];
    for _ in 0..count.max(1) {
        let x = (rng.next_u32() % (size as u32 + 1)) as i64;
        let y = (rng.next_u32() % (size as u32 + 1)) as i64;
        pts.push(LatticePoint::new(x, y));
    }
    convex_hull(&pts).expect("non-empty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lp(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    fn brute_force_hull(points: &[LatticePoint]) -> BTreeSet<LatticePoint> {
        // a point is a hull vertex iff it is not in the closed hull of the others
        // (checked by halfplane tests of every pair)
        let mut pts = points.to_vec();
        pts.sort();
        pts.dedup();
        let mut out = BTreeSet::new();
        for &p in &pts {
            let others: Vec<_> = pts.iter().copied().filter(|&q| q != p).collect();
            let mut inside_some_triangle = false;
            'outer: for i in 0..others.len() {
                for j in 0..others.len() {
                    for k in 0..others.len() {
                        let (a, b, c) = (others[i], others[j], others[k]);
                        if orient(a, b, c) <= 0 {
                            continue;
                        }
                        if orient(a, b, p) >= 0 && orient(b, c, p) >= 0 && orient(c, a, p) >= 0 {
                            inside_some_triangle = true;
                            break 'outer;
                        }
                    }
                }
            }
            // segment interior points are not vertices either
            let on_segment = others.iter().any(|&a| {
                others.iter().any(|&b| {
                    a != b
                        && orient(a, b, p) == 0
                        && (p.x - a.x) * (p.x - b.x) <= 0
                        && (p.y - a.y) * (p.y - b.y) <= 0
                })
            });
            if !inside_some_triangle && !on_segment {
                out.insert(p);
            }
        }
        out
    }

    #[test]
    fn hull_examples() {
        let sq = convex_hull(&[lp(0, 0), lp(1, 0), lp(0, 1), lp(1, 1)]).unwrap();
        assert_eq!(sq.vertices(), &[lp(0, 0), lp(1, 0), lp(1, 1), lp(0, 1)]);
        let tri = convex_hull(&[lp(0, 0), lp(2, 0), lp(1, 0), lp(0, 2)]).unwrap();
        assert_eq!(tri.vertices(), &[lp(0, 0), lp(2, 0), lp(0, 2)]);
        let seg = convex_hull(&[lp(0, 0), lp(3, 0), lp(1, 0)]).unwrap();
        assert_eq!(seg.vertices(), &[lp(0, 0), lp(3, 0)]);
        assert!(seg.is_degenerate());
        assert!(convex_hull(&[]).is_none());
    }

    #[test]
    fn hull_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let pts: Vec<_> = (0..50)
                .map(|_| {
                    lp((rand::RngCore::next_u32(&mut rng) % 11) as i64, (rand::RngCore::next_u32(&mut rng) % 11) as i64)
                })
                .collect();
            let hull = convex_hull(&pts).unwrap();
            let got: BTreeSet<_> = hull.vertices().iter().copied().collect();
            assert_eq!(got, brute_force_hull(&pts));
            assert!(hull.twice_area() > 0);
        }
    }

    #[test]
    fn areas() {
        assert_eq!(LatticePolygon::rectangle(1, 1).area(), Rational::from_integer(1));
        assert_eq!(LatticePolygon::triangle(5).area(), Rational::new(25, 2));
        let seg = convex_hull(&[lp(0, 0), lp(3, 0)]).unwrap();
        assert_eq!(seg.area(), Rational::from_integer(0));
    }

    #[test]
    fn area_agrees_with_pick() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let poly = random_polygon(&mut rng, 10, 7);
            if poly.is_degenerate() {
                continue;
            }
            let (i, b) = pick_counts(&poly);
            let pick = Rational::from_integer(i as i128) + Rational::new(b as i128, 2) - 1;
            assert_eq!(poly.area(), pick);
        }
    }

    #[test]
    fn widths() {
        let sq = LatticePolygon::rectangle(4, 4);
        assert_eq!(sq.width_in_direction(Direction::HORIZONTAL), 4);
        let tri = LatticePolygon::triangle(3);
        assert_eq!(tri.width_in_direction(Direction::new(1, 1).unwrap()), 3);
        let seg = convex_hull(&[lp(0, 0), lp(3, 0)]).unwrap();
        assert_eq!(seg.width_in_direction(Direction::VERTICAL), 0);
    }

    #[test]
    fn minimal_widths() {
        let (w, u) = LatticePolygon::triangle(4).minimal_lattice_width();
        assert_eq!(w, 4);
        assert_eq!(u, Direction::VERTICAL);
        let (w, u) = LatticePolygon::rectangle(5, 2).minimal_lattice_width();
        assert_eq!((w, u), (2, Direction::VERTICAL));
        let pt = convex_hull(&[lp(3, 3)]).unwrap();
        assert_eq!(pt.minimal_lattice_width(), (0, Direction::VERTICAL));
    }

    #[test]
    fn direction_sets() {
        let sq = LatticePolygon::rectangle(1, 1).direction_set();
        let want: BTreeSet<_> =
            [(1, 0), (0, 1), (1, 1), (1, -1)].iter().map(|&(a, b)| Direction::new(a, b).unwrap()).collect();
        assert_eq!(sq, want);
        let seg = convex_hull(&[lp(0, 0), lp(2, 0)]).unwrap().direction_set();
        assert_eq!(seg.into_iter().collect::<Vec<_>>(), vec![Direction::HORIZONTAL]);
        let tri = LatticePolygon::triangle(2).direction_set();
        let want: BTreeSet<_> = [(1, 0), (0, 1), (1, 1), (1, -1), (1, -2), (2, -1)]
            .iter()
            .map(|&(a, b)| Direction::new(a, b).unwrap())
            .collect();
        assert_eq!(tri, want);
    }

    #[test]
    fn canonical_directions() {
        assert_eq!(Direction::new(-2, -4), Direction::new(1, 2));
        assert_eq!(Direction::new(0, -3), Some(Direction::VERTICAL));
        assert_eq!(Direction::new(0, 0), None);
        assert_eq!(Direction::HORIZONTAL.perpendicular(), Direction::VERTICAL);
    }

    #[test]
    fn normalization_makes_horizontal_width_minimal() {
        let poly = convex_hull(&[lp(0, 0), lp(6, 2), lp(7, 3), lp(1, 1)]).unwrap();
        let (w, _) = poly.minimal_lattice_width();
        let (moved, map) = normalize_width_horizontal(&poly);
        assert_eq!(moved.width_in_direction(Direction::HORIZONTAL), w);
        assert_eq!(moved.area(), poly.area());
        let (lo, _) = moved.bounding_box();
        assert_eq!(lo, lp(0, 0));
        let back = moved.transform(&map.inverse());
        assert_eq!(back, poly);
    }

    proptest::proptest! {
        #[test]
        fn width_translation_and_sign_invariant(
            pts in proptest::collection::vec((0i64..9, 0i64..9), 1..8),
            a in -5i64..6, b in -5i64..6, dx in -20i64..20, dy in -20i64..20,
        ) {
            let pts: Vec<_> = pts.into_iter().map(|(x, y)| lp(x, y)).collect();
            let poly = convex_hull(&pts).unwrap();
            if let Some(u) = Direction::new(a, b) {
                let moved = poly.translate(lp(dx, dy));
                proptest::prop_assert_eq!(poly.width_in_direction(u), moved.width_in_direction(u));
                let neg = Direction::new(-a, -b).unwrap();
                proptest::prop_assert_eq!(poly.width_in_direction(u), poly.width_in_direction(neg));
            }
        }

        #[test]
        fn minimal_width_matches_wide_window(
            pts in proptest::collection::vec((0i64..7, 0i64..7), 1..7),
        ) {
            let pts: Vec<_> = pts.into_iter().map(|(x, y)| lp(x, y)).collect();
            let poly = convex_hull(&pts).unwrap();
            let (lo, hi) = poly.bounding_box();
            let ext = (hi.x - lo.x).max(hi.y - lo.y).max(1);
            let (w, _) = poly.minimal_lattice_width();
            let (w_wide, _) = minimal_width_within(&poly, 4 * ext);
            proptest::prop_assert_eq!(w, w_wide);
        }

        #[test]
        fn edges_are_in_direction_set(
            pts in proptest::collection::vec((0i64..6, 0i64..6), 3..7),
        ) {
            let pts: Vec<_> = pts.into_iter().map(|(x, y)| lp(x, y)).collect();
            let poly = convex_hull(&pts).unwrap();
            let dirs = poly.direction_set();
            for (a, b) in poly.edges() {
                proptest::prop_assert!(dirs.contains(&Direction::new(b.x - a.x, b.y - a.y).unwrap()));
            }
        }
    }
}
