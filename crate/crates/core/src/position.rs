//! Point configurations: tropical general position, translation perturbation,
//! and the floor configuration on an almost horizontal line.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::lattice::{normalize_width_horizontal, Direction, LatticePoint, LatticePolygon, UnimodularMap};
use crate::tropical::{Location, RatPoint, TropicalCurve};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PositionError {
    #[error("duplicate point label {0:?}")]
    DuplicateLabel(String),
    #[error("multiplicity of {0:?} must be positive")]
    ZeroMultiplicity(String),
    #[error("Newton polygon is a point or a segment")]
    DegeneratePolygon,
    #[error("minimal width {width} is smaller than the largest multiplicity {max_multiplicity}")]
    WidthTooSmall { width: i64, max_multiplicity: u32 },
    #[error("line contains an edge of the curve")]
    NonTransversalLine,
    #[error("point {0:?} is not on the tropical curve")]
    PointNotOnCurve(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigPoint {
    pub label: String,
    pub point: LatticePoint,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointConfiguration {
    points: Vec<ConfigPoint>,
}

impl PointConfiguration {
    pub fn new(points: Vec<ConfigPoint>) -> Result<Self, PositionError> {
        let mut labels = BTreeSet::new();
        for p in &points {
            if p.multiplicity == 0 {
                return Err(PositionError::ZeroMultiplicity(p.label.clone()));
            }
            if !labels.insert(p.label.as_str()) {
                return Err(PositionError::DuplicateLabel(p.label.clone()));
            }
        }
        Ok(PointConfiguration { points })
    }

    /// Labels `P1, P2, ...`.
    pub fn from_points(points: &[LatticePoint], multiplicities: &[u32]) -> Result<Self, PositionError> {
        assert_eq!(points.len(), multiplicities.len(), "one multiplicity per point");
        Self::new(
            points
                .iter()
                .zip(multiplicities)
                .enumerate()
                .map(|(i, (&point, &multiplicity))| ConfigPoint { label: format!("P{}", i + 1), point, multiplicity })
                .collect(),
        )
    }

    pub fn points(&self) -> &[ConfigPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn multiplicities(&self) -> Vec<u32> {
        self.points.iter().map(|p| p.multiplicity).collect()
    }

    pub fn positions(&self) -> Vec<LatticePoint> {
        self.points.iter().map(|p| p.point).collect()
    }
}

/// Three points whose tangent cones share `point`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripleWitness {
    pub indices: [usize; 3],
    pub point: RatPoint,
}

fn level(u: Direction, p: &RatPoint) -> Rational {
    p.dot(LatticePoint::new(u.u1(), u.u2()))
}

/// Intersection of `{u . z = a}` and `{v . z = b}` for independent normals.
fn meet(u: Direction, a: Rational, v: Direction, b: Rational) -> RatPoint {
    let det = Rational::from_integer((u.u1() * v.u2() - u.u2() * v.u1()) as i128);
    let (u1, u2) = (Rational::from_integer(u.u1() as i128), Rational::from_integer(u.u2() as i128));
    let (v1, v2) = (Rational::from_integer(v.u1() as i128), Rational::from_integer(v.u2() as i128));
    RatPoint::new((a * v2 - b * u2) / det, (u1 * b - v1 * a) / det)
}

fn on_cone(dirs: &[Direction], apex: &RatPoint, z: &RatPoint) -> bool {
    dirs.iter().any(|&w| level(w, z) == level(w, apex))
}

/// A common point of the three cones, if any.
fn triple_meet(dirs: &[Direction], a: &RatPoint, b: &RatPoint, c: &RatPoint) -> Option<RatPoint> {
    for &u in dirs {
        let la = level(u, a);
        for &v in dirs {
            let lb = level(v, b);
            if u == v {
                if la != lb {
                    continue;
                }
                // shared line: any other line of the third cone crosses it
                let w = dirs.iter().copied().find(|&w| w != u)?;
                return Some(meet(u, la, w, level(w, c)));
            }
            let z = meet(u, la, v, lb);
            if on_cone(dirs, c, &z) {
                return Some(z);
            }
        }
    }
    None
}

/// No three tangent cones `TC(P_i)` share a point.
pub fn is_general_position(cfg: &PointConfiguration, delta: &LatticePolygon) -> Result<(), TripleWitness> {
    general_position_with(&delta.direction_set().into_iter().collect::<Vec<_>>(), &cfg.positions())
}

fn general_position_with(dirs: &[Direction], pts: &[LatticePoint]) -> Result<(), TripleWitness> {
    let pts: Vec<RatPoint> = pts.iter().map(|&p| RatPoint::from_lattice(p)).collect();
    let n = pts.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                if let Some(point) = triple_meet(dirs, &pts[i], &pts[j], &pts[k]) {
                    return Err(TripleWitness { indices: [i, j, k], point });
                }
            }
        }
    }
    Ok(())
}

/// No point lies on another point's tangent cone (equivalently no two cones
/// share a line).
pub fn is_apex_separated(cfg: &PointConfiguration, delta: &LatticePolygon) -> Result<(), [usize; 2]> {
    apex_separated_with(&delta.direction_set().into_iter().collect::<Vec<_>>(), &cfg.positions())
}

fn apex_separated_with(dirs: &[Direction], pts: &[LatticePoint]) -> Result<(), [usize; 2]> {
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            if dirs.iter().any(|&u| u.dot(pts[i]) == u.dot(pts[j])) {
                return Err([i, j]);
            }
        }
    }
    Ok(())
}

/// Lattice vectors of sup-norm exactly `r`, in a fixed order.
fn ring_of(r: i64) -> Vec<LatticePoint> {
    if r == 0 {
        return alloc::vec![LatticePoint::new(0, 0)];
    }
    let mut out = Vec::new();
    for x in -r..=r {
        for y in -r..=r {
            if x.abs().max(y.abs()) == r {
                out.push(LatticePoint::new(x, y));
            }
        }
    }
    out
}

/// Translates points one at a time by the shortest vectors that keep the
/// prefix in general position and apex-separated. Returns the new
/// configuration and the largest sup-norm used.
pub fn perturb_to_general_position(cfg: &PointConfiguration, delta: &LatticePolygon) -> (PointConfiguration, i64) {
    let dirs: Vec<Direction> = delta.direction_set().into_iter().collect();
    // forbidden[k] holds the integer levels w_k . q that a new point q must
    // avoid: apexes already placed (separation) and every pairwise meeting
    // point of placed cones (no triple meets). Once the prefix is separated,
    // two cones meet in finitely many points, so this is exact.
    let mut forbidden: Vec<BTreeSet<i64>> = alloc::vec![BTreeSet::new(); dirs.len()];
    let mut placed: Vec<LatticePoint> = Vec::new();
    let mut out = cfg.points.clone();
    let mut bound = 0;
    for (idx, p) in cfg.points.iter().enumerate() {
        let mut r = 0;
        let chosen = 'search: loop {
            for v in ring_of(r) {
                let q = p.point + v;
                if dirs.iter().zip(&forbidden).all(|(w, bad)| !bad.contains(&w.dot(q))) {
                    break 'search q;
                }
            }
            r += 1;
        };
        bound = bound.max(r);
        let c = RatPoint::from_lattice(chosen);
        for prev in &placed {
            let a = RatPoint::from_lattice(*prev);
            for &u in &dirs {
                for &v in dirs.iter().filter(|&&v| v != u) {
                    let z = meet(u, level(u, &a), v, level(v, &c));
                    for (w, bad) in dirs.iter().zip(forbidden.iter_mut()) {
                        let l = level(*w, &z);
                        if l.is_integer() {
                            bad.insert(l.to_integer() as i64);
                        }
                    }
                }
            }
        }
        for (w, bad) in dirs.iter().zip(forbidden.iter_mut()) {
            bad.insert(w.dot(chosen));
        }
        placed.push(chosen);
        out[idx].point = chosen;
    }
    (PointConfiguration { points: out }, bound)
}

/// Points on the line `y = x / (N + 1)` in normalized coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FloorConfiguration {
    pub config: PointConfiguration,
    /// Δ after normalization: horizontal width minimal, bounding box at the origin.
    pub polygon: LatticePolygon,
    /// Map from the input coordinates to the normalized ones.
    pub map: UnimodularMap,
    /// Height of the normalized polygon.
    pub height: i64,
}

impl FloorConfiguration {
    /// Direction `(N + 1, 1)` of the line.
    pub fn line_direction(&self) -> LatticePoint {
        LatticePoint::new(self.height + 1, 1)
    }

    /// All points on the line, strictly increasing in both coordinates.
    pub fn is_valid_floor(&self) -> bool {
        let d = self.line_direction();
        let pts = self.config.positions();
        pts.iter().all(|p| p.x * d.y == p.y * d.x) && pts.windows(2).all(|w| w[0].x < w[1].x && w[0].y < w[1].y)
    }
}

pub fn floor_points(multiplicities: &[u32], delta: &LatticePolygon) -> Result<FloorConfiguration, PositionError> {
    if delta.is_degenerate() {
        return Err(PositionError::DegeneratePolygon);
    }
    let (width, _) = delta.minimal_lattice_width();
    let max_m = multiplicities.iter().copied().max().unwrap_or(0);
    if (width as u64) < max_m as u64 {
        return Err(PositionError::WidthTooSmall { width, max_multiplicity: max_m });
    }
    let (polygon, map) = normalize_width_horizontal(delta);
    let height = polygon.width_in_direction(Direction::VERTICAL);
    let n = multiplicities.len() as i64;
    let first = -((n - 1) / 2);
    let pts: Vec<LatticePoint> = (0..n).map(|i| LatticePoint::new((first + i) * (height + 1), first + i)).collect();
    let config = PointConfiguration::from_points(&pts, multiplicities)?;
    Ok(FloorConfiguration { config, polygon, map, height })
}

/// Argmax monomials of the tropical polynomial along `base + s * dir`,
/// in order of increasing `s`.
pub fn lattice_path(curve: &TropicalCurve, base: &RatPoint, dir: LatticePoint) -> Result<Vec<LatticePoint>, PositionError> {
    let normal = LatticePoint::new(-dir.y, dir.x);
    for e in curve.edges() {
        let d = e.direction;
        let parallel = d.x * dir.y == d.y * dir.x;
        if parallel && curve.vertices()[e.origin()].position.dot(normal) == base.dot(normal) {
            return Err(PositionError::NonTransversalLine);
        }
    }
    // lines s -> intercept + slope * s, one per monomial
    let mut lines: Vec<(i64, Rational, LatticePoint)> = curve
        .polynomial()
        .coefficients()
        .iter()
        .map(|(&p, &v)| (p.x * dir.x + p.y * dir.y, v + base.dot(p), p))
        .collect();
    lines.sort_by(|a, b| (a.0, b.1).cmp(&(b.0, a.1)));
    lines.dedup_by(|later, earlier| later.0 == earlier.0);
    // upper envelope, slopes increasing
    let mut hull: Vec<(i64, Rational, LatticePoint)> = Vec::new();
    let cross = |a: &(i64, Rational, LatticePoint), b: &(i64, Rational, LatticePoint)| {
        (a.1 - b.1) / Rational::from_integer((b.0 - a.0) as i128)
    };
    for l in lines {
        while let Some(last) = hull.last() {
            if last.0 == l.0 {
                hull.pop();
                continue;
            }
            if hull.len() >= 2 && cross(&hull[hull.len() - 2], &l) <= cross(&hull[hull.len() - 2], last) {
                hull.pop();
                continue;
            }
            break;
        }
        hull.push(l);
    }
    Ok(hull.into_iter().map(|(_, _, p)| p).collect())
}

/// The split `m_i = s_i + r_i` read off the curve at each floor point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SValues {
    pub s: Vec<i64>,
    pub locations: Vec<Location>,
    /// Horizontal advance of the lattice path along the line.
    pub path_advance: i64,
    /// `width_in_direction(Δ, (1,0))`.
    pub horizontal_width: i64,
}

impl SValues {
    pub fn total(&self) -> i64 {
        self.s.iter().sum()
    }

    /// `sum s_i <= path advance <= horizontal width`.
    pub fn holds(&self) -> bool {
        self.total() <= self.path_advance && self.path_advance <= self.horizontal_width
    }
}

pub fn s_values(floor: &FloorConfiguration, curve: &TropicalCurve) -> Result<SValues, PositionError> {
    let mut s = Vec::new();
    let mut locations = Vec::new();
    for p in floor.config.points() {
        let loc = curve.locate(&RatPoint::from_lattice(p.point));
        let value = match loc {
            Location::Complement(_) => return Err(PositionError::PointNotOnCurve(p.label.clone())),
            Location::Vertex(v) => curve.dual_cell(v).polygon().width_in_direction(Direction::HORIZONTAL),
            Location::Edge(e) => {
                let ends = curve.subdivision().edges[curve.edges()[e].dual_edge].ends;
                (ends[1].x - ends[0].x).abs()
            }
        };
        s.push(value);
        locations.push(loc);
    }
    let path = lattice_path(curve, &RatPoint::from_ints(0, 0), floor.line_direction())?;
    let path_advance = path.last().expect("non-empty support").x - path[0].x;
    Ok(SValues { s, locations, path_advance, horizontal_width: curve.newton_polygon().width_in_direction(Direction::HORIZONTAL) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tropical::{curve_complex, TropicalPolynomial};
    use alloc::collections::BTreeSet;
    use proptest::prelude::*;

    fn lp(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    /// Independent check: every pairwise intersection point of two cones'
    /// lines, tested for membership in a third cone.
    fn brute_force_general(dirs: &[Direction], pts: &[LatticePoint]) -> bool {
        let rp: Vec<RatPoint> = pts.iter().map(|&p| RatPoint::from_lattice(p)).collect();
        let n = pts.len();
        let mut candidates: Vec<(usize, usize, RatPoint)> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for &u in dirs {
                    for &v in dirs {
                        if i != j && u != v {
                            candidates.push((i, j, meet(u, level(u, &rp[i]), v, level(v, &rp[j]))));
                        }
                    }
                }
            }
        }
        !candidates.iter().any(|(i, j, z)| {
            on_cone(dirs, &rp[*i], z)
                && on_cone(dirs, &rp[*j], z)
                && (0..n).any(|k| k != *i && k != *j && on_cone(dirs, &rp[k], z))
        })
    }

    #[test]
    fn collinear_points_on_a_cone_line_fail() {
        let delta = LatticePolygon::rectangle(1, 1);
        let cfg = PointConfiguration::from_points(&[lp(0, 0), lp(5, 0), lp(11, 0)], &[1, 1, 1]).unwrap();
        let w = is_general_position(&cfg, &delta).unwrap_err();
        assert_eq!(w.indices, [0, 1, 2]);
        let few = PointConfiguration::from_points(&[lp(0, 0), lp(0, 0)], &[2, 2]).unwrap();
        assert!(is_general_position(&few, &delta).is_ok());
        assert!(is_apex_separated(&few, &delta).is_err());
    }

    #[test]
    fn perturbation_repairs_coincident_points() {
        let delta = LatticePolygon::triangle(2);
        let cfg = PointConfiguration::from_points(&[lp(0, 0); 4], &[1, 2, 1, 2]).unwrap();
        let (moved, bound) = perturb_to_general_position(&cfg, &delta);
        assert!(is_general_position(&moved, &delta).is_ok());
        assert!(is_apex_separated(&moved, &delta).is_ok());
        assert!(bound > 0);
        let distinct: BTreeSet<_> = moved.positions().into_iter().collect();
        assert_eq!(distinct.len(), 4);
        let (same, zero) = perturb_to_general_position(&moved, &delta);
        assert_eq!(same, moved);
        assert_eq!(zero, 0);
    }

    #[test]
    fn config_validation() {
        let p = |l: &str, m| ConfigPoint { label: l.into(), point: lp(0, 0), multiplicity: m };
        assert_eq!(PointConfiguration::new(alloc::vec![p("a", 1), p("a", 2)]), Err(PositionError::DuplicateLabel("a".into())));
        assert_eq!(PointConfiguration::new(alloc::vec![p("a", 0)]), Err(PositionError::ZeroMultiplicity("a".into())));
    }

    #[test]
    fn floor_on_triangle() {
        let f = floor_points(&[1, 1, 1], &LatticePolygon::triangle(3)).unwrap();
        assert_eq!(f.height, 3);
        assert!(f.is_valid_floor());
        assert_eq!(f.line_direction(), lp(4, 1));
        // slope 1/4 is below every non-horizontal edge slope realizable in Δ
        for u in f.polygon.direction_set() {
            // curve edges are orthogonal to u: direction (-u2, u1)
            if u.u1() != 0 {
                assert!(Rational::new(1, 4) < Rational::new(u.u1().abs() as i128, u.u2().abs().max(1) as i128));
            }
        }
        assert_eq!(floor_points(&[1], &LatticePolygon::triangle(3)).unwrap().config.len(), 1);
        let seg = LatticePolygon::from_points(&[lp(0, 0), lp(3, 0)]).unwrap();
        assert_eq!(floor_points(&[1], &seg), Err(PositionError::DegeneratePolygon));
        assert!(matches!(floor_points(&[3], &LatticePolygon::rectangle(5, 2)), Err(PositionError::WidthTooSmall { .. })));
    }

    #[test]
    fn floor_normalizes_width() {
        let f = floor_points(&[2, 2], &LatticePolygon::rectangle(3, 2)).unwrap();
        assert_eq!(f.polygon.width_in_direction(Direction::HORIZONTAL), 2);
        assert_eq!(f.height, 3);
        assert_eq!(f.map.determinant().abs(), 1);
    }

    #[test]
    fn path_below_the_tropical_line() {
        let t = TropicalPolynomial::constant_coefficients(&[lp(0, 0), lp(1, 0), lp(0, 1)]).unwrap();
        let c = curve_complex(&t).unwrap();
        let path = lattice_path(&c, &RatPoint::from_ints(0, -1), lp(1, 0)).unwrap();
        assert_eq!(path, alloc::vec![lp(0, 0), lp(1, 0)]);
        // the ray along (1,1) sits on this line
        assert_eq!(lattice_path(&c, &RatPoint::from_ints(0, 0), lp(1, 1)), Err(PositionError::NonTransversalLine));
        // a line of slope 1/2 above the vertex crosses two complement regions
        let up = lattice_path(&c, &RatPoint::from_ints(0, 5), lp(2, 1)).unwrap();
        assert_eq!(up, alloc::vec![lp(0, 0), lp(0, 1), lp(1, 0)]);
    }

    #[test]
    fn s_values_on_unit_square_vertex() {
        // max(0, x, y, x + y): one vertex at the origin dual to the unit square
        let t = TropicalPolynomial::constant_coefficients(&[lp(0, 0), lp(1, 0), lp(0, 1), lp(1, 1)]).unwrap();
        let c = curve_complex(&t).unwrap();
        let f = floor_points(&[1], &LatticePolygon::rectangle(1, 1)).unwrap();
        assert_eq!(f.config.positions(), alloc::vec![lp(0, 0)]);
        let s = s_values(&f, &c).unwrap();
        assert_eq!(s.s, alloc::vec![1]);
        assert!(s.holds());
    }

    proptest! {
        #[test]
        fn general_position_matches_brute_force(coords in proptest::collection::vec((-4i64..5, -4i64..5), 3..5)) {
            let delta = LatticePolygon::triangle(1);
            let dirs: Vec<Direction> = delta.direction_set().into_iter().collect();
            let pts: Vec<LatticePoint> = coords.iter().map(|&(x, y)| lp(x, y)).collect();
            prop_assert_eq!(general_position_with(&dirs, &pts).is_ok(), brute_force_general(&dirs, &pts));
        }

        #[test]
        fn perturbation_always_succeeds(coords in proptest::collection::vec((-2i64..3, -2i64..3), 1..5)) {
            let delta = LatticePolygon::rectangle(2, 1);
            let pts: Vec<LatticePoint> = coords.iter().map(|&(x, y)| lp(x, y)).collect();
            let cfg = PointConfiguration::from_points(&pts, &alloc::vec![1; pts.len()]).unwrap();
            let (moved, _) = perturb_to_general_position(&cfg, &delta);
            prop_assert!(is_general_position(&moved, &delta).is_ok());
            prop_assert!(is_apex_separated(&moved, &delta).is_ok());
        }
    }
}
