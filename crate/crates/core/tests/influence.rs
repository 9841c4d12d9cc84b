use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tropinfl_core::field::{Domain, Rationals};
use tropinfl_core::influence::{influence_area, influence_set, tangent_cone};
use tropinfl_core::lattice::{random_polygon, LatticePoint, LatticePolygon};
use tropinfl_core::poly::Polynomial;
use tropinfl_core::puiseux::LaurentRing;
use tropinfl_core::tropical::{curve_complex, tropicalize, EdgeKind, Location, RatPoint, TropicalCurve, TropicalPolynomial};
use tropinfl_core::Rational;

fn lp(x: i64, y: i64) -> LatticePoint {
    LatticePoint::new(x, y)
}

#[test]
fn product_of_lines_has_influence_two_k_times_m_minus_k() {
    let ring = LaurentRing::new(Rationals);
    let one = ring.one();
    let minus_one = ring.neg(&one);
    let x_minus_1 = Polynomial::from_terms(&ring, [(lp(1, 0), one.clone()), (lp(0, 0), minus_one.clone())]);
    let y_minus_1 = Polynomial::from_terms(&ring, [(lp(0, 1), one.clone()), (lp(0, 0), minus_one)]);
    for m in 2..=5u32 {
        for k in 1..m {
            let f = x_minus_1.pow(&ring, k).mul(&ring, &y_minus_1.pow(&ring, m - k));
            let curve = curve_complex(&tropicalize(&ring, &f).unwrap()).unwrap();
            assert_eq!(curve.vertices().len(), 1);
            let delta = curve.newton_polygon().clone();
            let area = influence_area(&RatPoint::from_ints(0, 0), &curve, &delta).unwrap();
            assert_eq!(area, Rational::from_integer(2 * (k * (m - k)) as i128), "k={k} m={m}");
        }
    }
}

type Key = (Rational, Rational);

fn key(p: &RatPoint) -> Key {
    (p.x, p.y)
}

struct Dsu(Vec<usize>);

impl Dsu {
    fn find(&mut self, a: usize) -> usize {
        let mut r = a;
        while self.0[r] != r {
            r = self.0[r];
        }
        self.0[a] = r;
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

/// Influence membership from scratch: cut every curve edge at each crossing
/// with a cone line, join the pieces that lie on the cone, and read off the
/// component of the apex.
fn refined_members(p: &RatPoint, curve: &TropicalCurve, delta: &LatticePolygon) -> BTreeMap<usize, u8> {
    let cone = tangent_cone(p, delta).unwrap();
    let mut nodes: BTreeMap<Key, usize> = BTreeMap::new();
    let id = |z: &RatPoint, nodes: &mut BTreeMap<Key, usize>| {
        let n = nodes.len();
        *nodes.entry(key(z)).or_insert(n)
    };
    let mut joins = Vec::new();
    for (e, edge) in curve.edges().iter().enumerate() {
        let a = curve.vertices()[edge.origin()].position.clone();
        let step = match edge.kind {
            EdgeKind::Bounded { to, .. } => {
                let b = &curve.vertices()[to].position;
                (b.x - a.x, b.y - a.y)
            }
            EdgeKind::Ray { .. } => (Rational::from_integer(edge.direction.x as i128), Rational::from_integer(edge.direction.y as i128)),
        };
        let at = |s: Rational| RatPoint::new(a.x + s * step.0, a.y + s * step.1);
        let bounded = matches!(edge.kind, EdgeKind::Bounded { .. });
        let mut cuts: BTreeSet<Rational> = BTreeSet::new();
        cuts.insert(Rational::from_integer(0));
        if bounded {
            cuts.insert(Rational::from_integer(1));
        }
        for u in &cone.normals {
            let (u1, u2) = (Rational::from_integer(u.u1() as i128), Rational::from_integer(u.u2() as i128));
            let slope = u1 * step.0 + u2 * step.1;
            if slope == Rational::from_integer(0) {
                continue;
            }
            let s = (u1 * (p.x - a.x) + u2 * (p.y - a.y)) / slope;
            if s >= Rational::from_integer(0) && (!bounded || s <= Rational::from_integer(1)) {
                cuts.insert(s);
            }
        }
        if curve.edge_contains(e, p) {
            assert!(cuts.iter().any(|&s| at(s) == *p));
        }
        let cuts: Vec<Rational> = cuts.into_iter().collect();
        for w in cuts.windows(2) {
            let mid = at((w[0] + w[1]) / 2);
            if cone.contains(&mid) {
                joins.push((id(&at(w[0]), &mut nodes), id(&at(w[1]), &mut nodes)));
            }
        }
    }
    let apex = id(p, &mut nodes);
    let vertex_ids: Vec<usize> = curve.vertices().iter().map(|v| id(&v.position, &mut nodes)).collect();
    let mut dsu = Dsu((0..nodes.len()).collect());
    for (x, y) in joins {
        dsu.union(x, y);
    }
    if !curve.contains(p) {
        return BTreeMap::new();
    }
    let root = dsu.find(apex);
    vertex_ids
        .iter()
        .enumerate()
        .filter(|&(_, &n)| dsu.find(n) == root)
        .map(|(v, _)| (v, if curve.vertices()[v].position == *p { 2 } else { 1 }))
        .collect()
}

fn random_curve(rng: &mut ChaCha8Rng) -> TropicalCurve {
    loop {
        let size = rng.gen_range(2..=4);
        let count = rng.gen_range(3..=6);
        let poly = random_polygon(rng, size, count);
        if poly.is_degenerate() {
            continue;
        }
        // few distinct heights so edges line up with cone lines often
        let lift = poly.lattice_points().into_iter().map(|q| (q, Rational::from_integer(rng.gen_range(-2..=2))));
        let trop = TropicalPolynomial::from_pairs(lift).unwrap();
        return curve_complex(&trop).unwrap();
    }
}

fn probe_points(curve: &TropicalCurve, rng: &mut ChaCha8Rng) -> Vec<RatPoint> {
    let mut out: Vec<RatPoint> = curve.vertices().iter().map(|v| v.position.clone()).collect();
    for edge in curve.edges() {
        let a = &curve.vertices()[edge.origin()].position;
        let b = match edge.kind {
            EdgeKind::Bounded { to, .. } => curve.vertices()[to].position.clone(),
            EdgeKind::Ray { .. } => a.add_scaled(edge.direction, Rational::from_integer(2)),
        };
        out.push(RatPoint::new((a.x + b.x) / 2, (a.y + b.y) / 2));
    }
    for _ in 0..3 {
        out.push(RatPoint::from_ints(rng.gen_range(-3..=3), rng.gen_range(-3..=3)));
    }
    out
}

#[test]
fn membership_is_stable_under_refinement() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut nonempty = 0;
    for _ in 0..60 {
        let curve = random_curve(&mut rng);
        let delta = curve.newton_polygon().clone();
        for p in probe_points(&curve, &mut rng) {
            let set = influence_set(&p, &curve, &delta).unwrap();
            let oracle = refined_members(&p, &curve, &delta);
            assert_eq!(set.members, oracle, "apex {p:?}");
            if set.members.len() > 1 {
                nonempty += 1;
            }
        }
    }
    assert!(nonempty > 20, "fixtures too easy: {nonempty}");
}

#[test]
fn apex_vertex_counts_its_own_cell_twice() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..60 {
        let curve = random_curve(&mut rng);
        let delta = curve.newton_polygon().clone();
        for (v, vertex) in curve.vertices().iter().enumerate() {
            let set = influence_set(&vertex.position, &curve, &delta).unwrap();
            assert_eq!(set.location, Location::Vertex(v));
            assert_eq!(set.members.get(&v), Some(&2));
            assert!(set.area(&curve) >= curve.dual_area(v) * 2);
            assert!(set.area(&curve) <= delta.area() * 2);
        }
    }
}
