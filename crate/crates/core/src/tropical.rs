//! Tropical polynomials, their regular dual subdivisions and tropical curves.
//!
//! Convention: `Trop(F)(w) = max_I (val(c_I) + I . w)`. The subdivision of the
//! Newton polygon is read off the upper hull of the lifted support
//! `I -> val(c_I)`; a 2-cell lying on the plane `val = a . I + c` is dual to
//! the curve vertex `w = -a`.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::field::Field;
use crate::lattice::{convex_hull, lattice_length, orient, primitive_vector, LatticePoint, LatticePolygon};
use crate::poly::Polynomial;
use crate::puiseux::{Laurent, LaurentRing};
use crate::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TropicalError {
    #[error("polynomial has empty support")]
    EmptySupport,
    #[error("Newton polygon is a point or a segment")]
    DegenerateNewtonPolygon,
}

/// A point of `Q^2`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatPoint {
    pub x: Rational,
    pub y: Rational,
}

impl RatPoint {
    pub fn new(x: Rational, y: Rational) -> Self {
        RatPoint { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        RatPoint { x: Rational::from_integer(x as i128), y: Rational::from_integer(y as i128) }
    }

    pub fn from_lattice(p: LatticePoint) -> Self {
        Self::from_ints(p.x, p.y)
    }

    /// `u . self` for an integer vector `u`.
    pub fn dot(&self, u: LatticePoint) -> Rational {
        self.x * Rational::from_integer(u.x as i128) + self.y * Rational::from_integer(u.y as i128)
    }

    pub fn add_scaled(&self, d: LatticePoint, s: Rational) -> RatPoint {
        RatPoint {
            x: self.x + s * Rational::from_integer(d.x as i128),
            y: self.y + s * Rational::from_integer(d.y as i128),
        }
    }
}

/// Primitive integer vector pointing along the rational vector `(dx, dy)`.
pub fn primitive_of_rational(dx: Rational, dy: Rational) -> Option<LatticePoint> {
    let l = num_integer::lcm(*dx.denom(), *dy.denom());
    let ix = (dx * Rational::from_integer(l)).to_integer();
    let iy = (dy * Rational::from_integer(l)).to_integer();
    let g = num_integer::gcd(ix, iy);
    if g == 0 {
        return None;
    }
    Some(LatticePoint::new((ix / g) as i64, (iy / g) as i64))
}

fn lift_dot(w: &RatPoint, p: LatticePoint) -> Rational {
    w.dot(p)
}

/// `max_I (v_I + I . w)` over a finite support with rational values `v_I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalPolynomial {
    coeffs: BTreeMap<LatticePoint, Rational>,
}

impl TropicalPolynomial {
    pub fn new(coeffs: BTreeMap<LatticePoint, Rational>) -> Result<Self, TropicalError> {
        if coeffs.is_empty() {
            return Err(TropicalError::EmptySupport);
        }
        Ok(TropicalPolynomial { coeffs })
    }

    pub fn from_pairs<I: IntoIterator<Item = (LatticePoint, Rational)>>(pairs: I) -> Result<Self, TropicalError> {
        Self::new(pairs.into_iter().collect())
    }

    /// Every coefficient has valuation 0 (a curve defined over the residue field).
    pub fn constant_coefficients(support: &[LatticePoint]) -> Result<Self, TropicalError> {
        Self::from_pairs(support.iter().map(|&p| (p, Rational::zero())))
    }

    pub fn coefficients(&self) -> &BTreeMap<LatticePoint, Rational> {
        &self.coeffs
    }

    pub fn support(&self) -> Vec<LatticePoint> {
        self.coeffs.keys().copied().collect()
    }

    pub fn newton_polygon(&self) -> LatticePolygon {
        convex_hull(&self.support()).expect("non-empty support")
    }

    pub fn evaluate(&self, w: &RatPoint) -> Rational {
        self.coeffs.iter().map(|(&p, v)| *v + lift_dot(w, p)).max().expect("non-empty support")
    }

    /// The monomials attaining the maximum at `w`.
    pub fn initial_support(&self, w: &RatPoint) -> Vec<LatticePoint> {
        let best = self.evaluate(w);
        self.coeffs.iter().filter(|(&p, v)| **v + lift_dot(w, p) == best).map(|(&p, _)| p).collect()
    }

    /// Adds `c` to every value and moves the support by `shift`
    /// (multiplication by the monomial `t^(-c) x^a y^b`).
    pub fn shifted(&self, shift: LatticePoint, c: Rational) -> TropicalPolynomial {
        TropicalPolynomial { coeffs: self.coeffs.iter().map(|(&p, v)| (p + shift, *v + c)).collect() }
    }
}

/// Coefficientwise valuation of a polynomial over the Laurent ring.
pub fn tropicalize<F: Field>(
    _ring: &LaurentRing<F>,
    f: &Polynomial<Laurent<F::Elem>>,
) -> Result<TropicalPolynomial, TropicalError> {
    TropicalPolynomial::from_pairs(
        f.terms().filter_map(|(&p, c)| c.valuation().map(|v| (p, Rational::from_integer(v as i128)))),
    )
}

/// A maximal cell of the subdivision: an upper face of the lifted support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cell {
    /// Counterclockwise corners.
    pub vertices: Vec<LatticePoint>,
    /// Every support point whose lift lies on the face.
    pub marked: Vec<LatticePoint>,
    /// The weight `w` at which exactly this cell is the initial support.
    pub dual_vertex: RatPoint,
}

impl Cell {
    pub fn polygon(&self) -> LatticePolygon {
        convex_hull(&self.vertices).expect("non-empty")
    }

    pub fn area(&self) -> Rational {
        self.polygon().area()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubdivisionEdge {
    /// Endpoints in increasing order.
    pub ends: [LatticePoint; 2],
    /// One adjacent cell on the boundary of the polygon, two inside.
    pub cells: Vec<usize>,
}

impl SubdivisionEdge {
    pub fn is_boundary(&self) -> bool {
        self.cells.len() == 1
    }

    pub fn lattice_length(&self) -> i64 {
        lattice_length(self.ends[0], self.ends[1])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualSubdivision {
    pub polygon: LatticePolygon,
    pub cells: Vec<Cell>,
    pub edges: Vec<SubdivisionEdge>,
    /// 0-cells: corners of the 2-cells.
    pub points: Vec<LatticePoint>,
}

impl DualSubdivision {
    /// All cells as `(dimension, corner set)`.
    pub fn cells_by_dimension(&self) -> Vec<(usize, Vec<LatticePoint>)> {
        let mut out: Vec<(usize, Vec<LatticePoint>)> = self.points.iter().map(|&p| (0, vec![p])).collect();
        out.extend(self.edges.iter().map(|e| (1, e.ends.to_vec())));
        out.extend(self.cells.iter().map(|c| (2, c.vertices.clone())));
        out
    }

    pub fn edge_between(&self, a: LatticePoint, b: LatticePoint) -> Option<usize> {
        let ends = if a <= b { [a, b] } else { [b, a] };
        self.edges.iter().position(|e| e.ends == ends)
    }
}

pub fn dual_subdivision(t: &TropicalPolynomial) -> Result<DualSubdivision, TropicalError> {
    let polygon = t.newton_polygon();
    if polygon.is_degenerate() {
        return Err(TropicalError::DegenerateNewtonPolygon);
    }
    let pts: Vec<(LatticePoint, Rational)> = t.coeffs.iter().map(|(&p, &v)| (p, v)).collect();
    let n = pts.len();
    let mut faces: BTreeMap<(Rational, Rational, Rational), Vec<LatticePoint>> = BTreeMap::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let (p1, v1) = pts[i];
                let (p2, v2) = pts[j];
                let (p3, v3) = pts[k];
                let det = orient(p1, p2, p3);
                if det == 0 {
                    continue;
                }
                let d = Rational::from_integer(det as i128);
                let (x21, y21) = (Rational::from_integer((p2.x - p1.x) as i128), Rational::from_integer((p2.y - p1.y) as i128));
                let (x31, y31) = (Rational::from_integer((p3.x - p1.x) as i128), Rational::from_integer((p3.y - p1.y) as i128));
                let a = ((v2 - v1) * y31 - (v3 - v1) * y21) / d;
                let b = (x21 * (v3 - v1) - x31 * (v2 - v1)) / d;
                let c = v1 - a * Rational::from_integer(p1.x as i128) - b * Rational::from_integer(p1.y as i128);
                let key = (a, b, c);
                if faces.contains_key(&key) {
                    continue;
                }
                let plane = |p: LatticePoint| {
                    a * Rational::from_integer(p.x as i128) + b * Rational::from_integer(p.y as i128) + c
                };
                if pts.iter().any(|&(p, v)| v > plane(p)) {
                    continue;
                }
                let on: Vec<LatticePoint> = pts.iter().filter(|&&(p, v)| v == plane(p)).map(|&(p, _)| p).collect();
                faces.insert(key, on);
            }
        }
    }
    let mut cells: Vec<Cell> = faces
        .into_iter()
        .map(|((a, b, _), marked)| {
            let vertices = convex_hull(&marked).expect("non-empty").vertices().to_vec();
            Cell { vertices, marked, dual_vertex: RatPoint::new(-a, -b) }
        })
        .collect();
    cells.sort_by(|x, y| x.vertices.cmp(&y.vertices));

    let mut edge_map: BTreeMap<[LatticePoint; 2], Vec<usize>> = BTreeMap::new();
    let mut points: Vec<LatticePoint> = Vec::new();
    for (ci, cell) in cells.iter().enumerate() {
        let m = cell.vertices.len();
        for s in 0..m {
            let (a, b) = (cell.vertices[s], cell.vertices[(s + 1) % m]);
            let ends = if a <= b { [a, b] } else { [b, a] };
            edge_map.entry(ends).or_default().push(ci);
            points.push(a);
        }
    }
    points.sort();
    points.dedup();
    let edges = edge_map.into_iter().map(|(ends, cells)| SubdivisionEdge { ends, cells }).collect();
    Ok(DualSubdivision { polygon, cells, edges, points })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveVertex {
    pub position: RatPoint,
    /// Index of the dual 2-cell.
    pub cell: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    Bounded { from: usize, to: usize },
    Ray { from: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveEdge {
    pub kind: EdgeKind,
    /// Index of the dual subdivision edge; curve edges share its numbering.
    pub dual_edge: usize,
    /// Primitive direction, from `from` towards `to` (or along the ray).
    pub direction: LatticePoint,
    /// Lattice length of the dual edge.
    pub weight: i64,
}

impl CurveEdge {
    pub fn origin(&self) -> usize {
        match self.kind {
            EdgeKind::Bounded { from, .. } | EdgeKind::Ray { from } => from,
        }
    }
}

/// Where a point of the plane sits relative to the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Vertex(usize),
    /// Relative interior of an edge or ray.
    Edge(usize),
    /// Complement component where the given monomial is the unique maximum.
    Complement(LatticePoint),
}

/// The tropical curve as a 1-complex together with its dual subdivision.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropicalCurve {
    poly: TropicalPolynomial,
    subdivision: DualSubdivision,
    vertices: Vec<CurveVertex>,
    edges: Vec<CurveEdge>,
    incidence: Vec<Vec<usize>>,
}

fn outward_normal(a: LatticePoint, b: LatticePoint) -> LatticePoint {
    // a -> b runs counterclockwise around the cell
    primitive_vector(LatticePoint::new(b.y - a.y, a.x - b.x)).expect("distinct corners")
}

pub fn curve_complex(t: &TropicalPolynomial) -> Result<TropicalCurve, TropicalError> {
    let subdivision = dual_subdivision(t)?;
    let vertices: Vec<CurveVertex> = subdivision
        .cells
        .iter()
        .enumerate()
        .map(|(i, c)| CurveVertex { position: c.dual_vertex.clone(), cell: i })
        .collect();
    let mut edges = Vec::with_capacity(subdivision.edges.len());
    let mut incidence = vec![Vec::new(); vertices.len()];
    for (ei, e) in subdivision.edges.iter().enumerate() {
        let weight = e.lattice_length();
        let from = e.cells[0];
        let (kind, direction) = if e.cells.len() == 2 {
            let to = e.cells[1];
            let (p, q) = (&vertices[from].position, &vertices[to].position);
            let dir = primitive_of_rational(q.x - p.x, q.y - p.y).expect("adjacent cells have distinct dual vertices");
            (EdgeKind::Bounded { from, to }, dir)
        } else {
            // orient the edge counterclockwise in its only cell
            let cell = &subdivision.cells[from];
            let m = cell.vertices.len();
            let s = (0..m)
                .find(|&s| {
                    let (a, b) = (cell.vertices[s], cell.vertices[(s + 1) % m]);
                    (a == e.ends[0] && b == e.ends[1]) || (a == e.ends[1] && b == e.ends[0])
                })
                .expect("edge belongs to its cell");
            (EdgeKind::Ray { from }, outward_normal(cell.vertices[s], cell.vertices[(s + 1) % m]))
        };
        incidence[from].push(ei);
        if let EdgeKind::Bounded { to, .. } = kind {
            incidence[to].push(ei);
        }
        edges.push(CurveEdge { kind, dual_edge: ei, direction, weight });
    }
    Ok(TropicalCurve { poly: t.clone(), subdivision, vertices, edges, incidence })
}

impl TropicalCurve {
    pub fn polynomial(&self) -> &TropicalPolynomial {
        &self.poly
    }

    pub fn subdivision(&self) -> &DualSubdivision {
        &self.subdivision
    }

    pub fn newton_polygon(&self) -> &LatticePolygon {
        &self.subdivision.polygon
    }

    pub fn vertices(&self) -> &[CurveVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[CurveEdge] {
        &self.edges
    }

    /// Edges incident to vertex `v`.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incidence[v]
    }

    pub fn dual_cell(&self, v: usize) -> &Cell {
        &self.subdivision.cells[self.vertices[v].cell]
    }

    pub fn dual_area(&self, v: usize) -> Rational {
        self.dual_cell(v).area()
    }

    /// Primitive direction of edge `e` leaving vertex `v`.
    pub fn outgoing_direction(&self, e: usize, v: usize) -> LatticePoint {
        let edge = &self.edges[e];
        match edge.kind {
            EdgeKind::Bounded { to, .. } if to == v => LatticePoint::new(-edge.direction.x, -edge.direction.y),
            _ => edge.direction,
        }
    }

    /// `sum weight * outgoing direction` at `v`; zero when balanced.
    pub fn balancing_defect(&self, v: usize) -> LatticePoint {
        let mut s = LatticePoint::default();
        for &e in &self.incidence[v] {
            let d = self.outgoing_direction(e, v);
            let w = self.edges[e].weight;
            s = s + LatticePoint::new(w * d.x, w * d.y);
        }
        s
    }

    pub fn is_balanced(&self) -> bool {
        (0..self.vertices.len()).all(|v| self.balancing_defect(v) == LatticePoint::default())
    }

    pub fn initial_support(&self, w: &RatPoint) -> Vec<LatticePoint> {
        self.poly.initial_support(w)
    }

    /// Classifies `p` by the affine dimension of its initial support.
    pub fn locate(&self, p: &RatPoint) -> Location {
        let s = self.initial_support(p);
        if s.len() == 1 {
            return Location::Complement(s[0]);
        }
        let collinear = s.iter().all(|&q| orient(s[0], s[1], q) == 0);
        if collinear {
            // support is sorted, so its ends are the extreme points
            let ends = [s[0], *s.last().expect("non-empty")];
            let e = self.subdivision.edges.iter().position(|e| e.ends == ends).expect("initial edge is a subdivision edge");
            Location::Edge(e)
        } else {
            let hull = convex_hull(&s).expect("non-empty");
            let c = self
                .subdivision
                .cells
                .iter()
                .position(|c| c.vertices == hull.vertices())
                .expect("initial cell is a subdivision cell");
            let v = self.vertices.iter().position(|v| v.cell == c).expect("every cell has a dual vertex");
            Location::Vertex(v)
        }
    }

    pub fn contains(&self, p: &RatPoint) -> bool {
        !matches!(self.locate(p), Location::Complement(_))
    }

    /// Whether `p` lies on the closed edge `e`.
    pub fn edge_contains(&self, e: usize, p: &RatPoint) -> bool {
        let edge = &self.edges[e];
        let a = &self.vertices[edge.origin()].position;
        let d = edge.direction;
        let normal = LatticePoint::new(-d.y, d.x);
        if p.dot(normal) != a.dot(normal) {
            return false;
        }
        let s = p.dot(d) - a.dot(d);
        if s.is_negative() {
            return false;
        }
        match edge.kind {
            EdgeKind::Ray { .. } => true,
            EdgeKind::Bounded { to, .. } => s <= self.vertices[to].position.dot(d) - a.dot(d),
        }
    }
}
