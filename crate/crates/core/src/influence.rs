//! Tangent cones `TC(P)` and influence regions of a point on a tropical curve.
//!
//! Every edge of a tropical curve with Newton polygon `Δ` has its normal in
//! the direction set `P(Δ)`, so an edge meets `TC(P)` either in a single
//! point or is contained in one of its lines. Only contained edges carry
//! connectivity; the component of `P` is found by a search along them.

use alloc::collections::{BTreeMap, BTreeSet, VecDeque};

use num_traits::Zero;

use crate::lattice::{Direction, LatticePolygon};
use crate::tropical::{EdgeKind, Location, RatPoint, TropicalCurve, TropicalError};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InfluenceError {
    #[error("point is not on the tropical curve")]
    PointNotOnCurve,
}

/// Union of the lines through `apex` whose normals run over `P(Δ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TangentCone {
    pub apex: RatPoint,
    /// Normals of the lines, one per direction of `Δ`.
    pub normals: BTreeSet<Direction>,
}

pub fn tangent_cone(apex: &RatPoint, delta: &LatticePolygon) -> Result<TangentCone, TropicalError> {
    if delta.is_degenerate() {
        return Err(TropicalError::DegenerateNewtonPolygon);
    }
    Ok(TangentCone { apex: apex.clone(), normals: delta.direction_set() })
}

fn normal_of(d: crate::lattice::LatticePoint) -> Option<Direction> {
    Direction::new(-d.y, d.x)
}

impl TangentCone {
    /// Whether `z` lies on the line with normal `u`.
    pub fn on_line(&self, u: Direction, z: &RatPoint) -> bool {
        let n = crate::lattice::LatticePoint::new(u.u1(), u.u2());
        z.dot(n) == self.apex.dot(n)
    }

    pub fn contains(&self, z: &RatPoint) -> bool {
        self.normals.iter().any(|&u| self.on_line(u, z))
    }

    /// Whether curve edge `e` lies inside one of the cone lines.
    pub fn contains_edge(&self, curve: &TropicalCurve, e: usize) -> bool {
        let edge = &curve.edges()[e];
        let Some(u) = normal_of(edge.direction) else { return false };
        self.normals.contains(&u) && self.on_line(u, &curve.vertices()[edge.origin()].position)
    }
}

/// Curve vertices in the component of the apex, with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfluenceSet {
    pub apex: RatPoint,
    pub location: Location,
    /// Vertex id to multiplicity (2 for the apex itself, otherwise 1).
    pub members: BTreeMap<usize, u8>,
}

impl InfluenceSet {
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn area(&self, curve: &TropicalCurve) -> Rational {
        self.members.iter().map(|(&v, &m)| curve.dual_area(v) * Rational::from_integer(m as i128)).sum()
    }
}

/// Search from the apex along edges accepted by `follow`.
fn reach(curve: &TropicalCurve, location: Location, follow: impl Fn(usize) -> bool) -> BTreeSet<usize> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::new();
    let visit = |v: usize, seen: &mut BTreeSet<usize>, queue: &mut VecDeque<usize>| {
        if seen.insert(v) {
            queue.push_back(v);
        }
    };
    match location {
        Location::Complement(_) => return seen,
        Location::Vertex(v) => visit(v, &mut seen, &mut queue),
        Location::Edge(e) => {
            if !follow(e) {
                return seen;
            }
            match curve.edges()[e].kind {
                EdgeKind::Bounded { from, to } => {
                    visit(from, &mut seen, &mut queue);
                    visit(to, &mut seen, &mut queue);
                }
                EdgeKind::Ray { from } => visit(from, &mut seen, &mut queue),
            }
        }
    }
    while let Some(v) = queue.pop_front() {
        for &e in curve.incident_edges(v) {
            if !follow(e) {
                continue;
            }
            if let EdgeKind::Bounded { from, to } = curve.edges()[e].kind {
                visit(if from == v { to } else { from }, &mut seen, &mut queue);
            }
        }
    }
    seen
}

pub fn influence_in_cone(cone: &TangentCone, curve: &TropicalCurve) -> InfluenceSet {
    let location = curve.locate(&cone.apex);
    let reached = reach(curve, location, |e| cone.contains_edge(curve, e));
    let members = reached
        .into_iter()
        .map(|v| (v, if location == Location::Vertex(v) { 2 } else { 1 }))
        .collect();
    InfluenceSet { apex: cone.apex.clone(), location, members }
}

pub fn influence_set(p: &RatPoint, curve: &TropicalCurve, delta: &LatticePolygon) -> Result<InfluenceSet, TropicalError> {
    Ok(influence_in_cone(&tangent_cone(p, delta)?, curve))
}

pub fn influence_area(p: &RatPoint, curve: &TropicalCurve, delta: &LatticePolygon) -> Result<Rational, TropicalError> {
    Ok(influence_set(p, curve, delta)?.area(curve))
}

/// Vertices reached from `p` along the single line through `p` with normal
/// `u`, excluding `p` itself.
pub fn directional_influence(p: &RatPoint, curve: &TropicalCurve, u: Direction) -> Result<BTreeSet<usize>, InfluenceError> {
    let location = curve.locate(p);
    if let Location::Complement(_) = location {
        return Err(InfluenceError::PointNotOnCurve);
    }
    let n = crate::lattice::LatticePoint::new(u.u1(), u.u2());
    let level = p.dot(n);
    let mut reached = reach(curve, location, |e| {
        let edge = &curve.edges()[e];
        normal_of(edge.direction) == Some(u) && curve.vertices()[edge.origin()].position.dot(n) == level
    });
    if let Location::Vertex(v) = location {
        reached.remove(&v);
    }
    Ok(reached)
}

/// Sum of `area(d(V))` over the directional influence set.
pub fn directional_influence_area(p: &RatPoint, curve: &TropicalCurve, u: Direction) -> Result<Rational, InfluenceError> {
    Ok(directional_influence(p, curve, u)?.into_iter().fold(Rational::zero(), |acc, v| acc + curve.dual_area(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LatticePoint;
    use alloc::vec::Vec;
    use crate::tropical::{curve_complex, TropicalPolynomial};

    fn lp(x: i64, y: i64) -> LatticePoint {
        LatticePoint::new(x, y)
    }

    fn r(n: i128) -> Rational {
        Rational::from_integer(n)
    }

    /// `(max(0, x, 2x-1, 3x-3)) * (max(0, y))`: vertices (0,0), (1,0), (2,0)
    /// joined by horizontal edges, each dual to a unit square.
    fn chain() -> TropicalCurve {
        let vals = [(0, 0), (1, 0), (2, -1), (3, -3)];
        let mut coeffs = Vec::new();
        for (x, v) in vals {
            coeffs.push((lp(x, 0), r(v)));
            coeffs.push((lp(x, 1), r(v)));
        }
        curve_complex(&TropicalPolynomial::from_pairs(coeffs).unwrap()).unwrap()
    }

    #[test]
    fn cone_lines() {
        let c = tangent_cone(&RatPoint::from_ints(0, 0), &LatticePolygon::rectangle(1, 1)).unwrap();
        assert_eq!(c.normals.len(), 4);
        let t = tangent_cone(&RatPoint::from_ints(5, 7), &LatticePolygon::triangle(1)).unwrap();
        assert_eq!(t.normals.len(), 3);
        let seg = LatticePolygon::from_points(&[lp(0, 0), lp(2, 0)]).unwrap();
        assert_eq!(tangent_cone(&RatPoint::from_ints(0, 0), &seg), Err(TropicalError::DegenerateNewtonPolygon));
    }

    #[test]
    fn off_curve_is_empty() {
        let t = TropicalPolynomial::constant_coefficients(&[lp(0, 0), lp(1, 0), lp(0, 1)]).unwrap();
        let c = curve_complex(&t).unwrap();
        let p = RatPoint::from_ints(3, 1);
        let s = influence_set(&p, &c, c.newton_polygon()).unwrap();
        assert!(s.is_empty());
        assert_eq!(s.area(&c), r(0));
        assert_eq!(directional_influence_area(&p, &c, Direction::VERTICAL), Err(InfluenceError::PointNotOnCurve));
    }

    #[test]
    fn chain_along_horizontal_line() {
        let c = chain();
        assert_eq!(c.vertices().len(), 3);
        let mut xs: Vec<_> = c.vertices().iter().map(|v| v.position.clone()).collect();
        xs.sort();
        assert!(xs.iter().all(|p| p.y == r(0)));
        let left = c.vertices().iter().position(|v| v.position == xs[0]).unwrap();
        let s = influence_set(&xs[0], &c, c.newton_polygon()).unwrap();
        assert_eq!(s.members.len(), 3);
        assert_eq!(s.members[&left], 2);
        assert_eq!(s.area(&c), r(4));
        assert_eq!(directional_influence_area(&xs[0], &c, Direction::VERTICAL).unwrap(), r(2));
        // a vertical line through the apex contains no bounded edge
        assert_eq!(directional_influence_area(&xs[0], &c, Direction::HORIZONTAL).unwrap(), r(0));
        // a point on a horizontal edge sees both of its ends and beyond
        let mid = RatPoint::new((xs[0].x + xs[1].x) / 2, r(0));
        let m = influence_set(&mid, &c, c.newton_polygon()).unwrap();
        assert!(m.members.values().all(|&k| k == 1));
        assert_eq!(m.area(&c), r(3));
        assert_eq!(directional_influence_area(&mid, &c, Direction::VERTICAL).unwrap(), r(3));
    }
}
