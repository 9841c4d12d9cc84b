//! Closed-form area and degree bounds, and certificates checked against
//! influence data computed on actual curves.

use alloc::string::String;
use alloc::vec::Vec;
use alloc::{format, vec};

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{ToPrimitive, Zero};

use crate::influence::{directional_influence_area, influence_area, InfluenceError};
use crate::lattice::{Direction, LatticePolygon};
use crate::position::{
    is_apex_separated, is_general_position, s_values, FloorConfiguration, PointConfiguration, PositionError, SValues,
    TripleWitness,
};
use crate::tropical::{Location, RatPoint, TropicalCurve};
use crate::Rational;

fn rat(n: i128) -> Rational {
    Rational::from_integer(n)
}

fn sum_squares(m: &[u32]) -> i128 {
    m.iter().map(|&x| (x as i128) * (x as i128)).sum()
}

/// `max(-1, d(d+3)/2 - sum m(m+1)/2)`.
pub fn expected_dimension(d: u64, m: &[u32]) -> i64 {
    let free = (d * (d + 3) / 2) as i64;
    let frozen: i64 = m.iter().map(|&x| (x as i64) * (x as i64 + 1) / 2).sum();
    (free - frozen).max(-1)
}

/// `sum m_i^2 / 4`.
pub fn quarter_bound(m: &[u32]) -> Rational {
    Rational::new(sum_squares(m), 4)
}

/// Maximizes `sum s_i^2` subject to `s_i <= m_i` and `sum s_i <= w`: fill the
/// largest multiplicities first. Returns `s` in the input order.
pub fn smax(m: &[u32], w: u64) -> (Vec<u32>, u64) {
    let mut order: Vec<usize> = (0..m.len()).collect();
    order.sort_by(|&a, &b| m[b].cmp(&m[a]));
    let mut budget = w;
    let mut s = vec![0u32; m.len()];
    for i in order {
        let take = (m[i] as u64).min(budget);
        s[i] = take as u32;
        budget -= take;
    }
    let value = s.iter().map(|&x| (x as u64) * (x as u64)).sum();
    (s, value)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypothesis {
    pub description: String,
    pub holds: bool,
}

/// A lower bound value together with how it was rounded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundValue {
    pub value: Rational,
    /// False when `value` is a downward rational approximation.
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundReport {
    pub name: String,
    pub hypotheses: Vec<Hypothesis>,
    /// Withheld when a hypothesis fails.
    pub value: Option<BoundValue>,
}

impl BoundReport {
    fn new(name: &str, hypotheses: Vec<Hypothesis>, value: impl FnOnce() -> BoundValue) -> Self {
        let ok = hypotheses.iter().all(|h| h.holds);
        BoundReport { name: name.into(), hypotheses, value: ok.then(value) }
    }

    pub fn hypotheses_hold(&self) -> bool {
        self.hypotheses.iter().all(|h| h.holds)
    }

    pub fn exact_value(&self) -> Option<Rational> {
        self.value.as_ref().map(|v| v.value)
    }
}

fn exact(value: Rational) -> BoundValue {
    BoundValue { value, exact: true }
}

/// `(sum m^2 - max sum s^2) / 2` for width budget `w`.
pub fn theorem1_value(m: &[u32], w: u64) -> Rational {
    let (_, best) = smax(m, w);
    Rational::new(sum_squares(m) - best as i128, 2)
}

pub fn theorem1_bound(m: &[u32], delta: &LatticePolygon) -> BoundReport {
    let (w, _) = delta.minimal_lattice_width();
    theorem1_bound_for_width(m, w as u64)
}

pub fn theorem1_bound_for_width(m: &[u32], w: u64) -> BoundReport {
    let max_m = m.iter().copied().max().unwrap_or(0);
    let h = Hypothesis { description: format!("width {} >= max multiplicity {}", w, max_m), holds: w >= max_m as u64 };
    BoundReport::new("theorem1", vec![h], || exact(theorem1_value(m, w)))
}

/// `(n - w/m - 1) m^2 / 2`; negative values are reported as they are.
pub fn uniform_bound(n: u64, m: u32, w: u64) -> BoundReport {
    let h = Hypothesis { description: format!("multiplicity {} <= width {}", m, w), holds: m >= 1 && m as u64 <= w };
    BoundReport::new("uniform", vec![h], || {
        let m = m as i128;
        exact((rat(n as i128) - Rational::new(w as i128, m) - rat(1)) * rat(m * m) / rat(2))
    })
}

/// `sqrt(n)` written as `floor^2 + remainder = n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SqrtParts {
    pub n: u64,
    pub floor: u64,
    pub remainder: u64,
}

pub fn sqrt_parts(n: u64) -> SqrtParts {
    let floor = n.sqrt();
    SqrtParts { n, floor, remainder: n - floor * floor }
}

/// Smallest power of ten `K` with `scale / K <= precision`.
fn grid(scale: &BigInt, precision: Rational) -> BigInt {
    assert!(precision > Rational::zero(), "precision must be positive");
    let mut k = BigInt::from(1);
    // scale / K <= p/q  <=>  scale * q <= p * K
    let (p, q) = (BigInt::from(*precision.numer()), BigInt::from(*precision.denom()));
    while scale * &q > &p * &k {
        k *= 10;
    }
    k
}

fn to_rational(num: BigInt, den: BigInt) -> Rational {
    let g = num_integer::Integer::gcd(&num, &den);
    let (num, den) = (num / &g, den / &g);
    Rational::new(num.to_i128().expect("bound fits in i128"), den.to_i128().expect("bound fits in i128"))
}

/// `(sqrt(n) - 1/2 - 1/sqrt(n)) m`, exact for square `n`, else rounded down
/// to within `precision`.
pub fn degree_bound(n: u64, m: u32, precision: Rational) -> BoundReport {
    let h = Hypothesis { description: format!("n = {} >= 4", n), holds: n >= 4 };
    BoundReport::new("degree", vec![h], || {
        let parts = sqrt_parts(n);
        let mm = BigInt::from(m);
        if parts.remainder == 0 {
            let s = BigInt::from(parts.floor);
            // (s - 1/2 - 1/s) m = (2s^2 - s - 2) m / (2s)
            let num = (BigInt::from(2) * &s * &s - &s - 2) * &mm;
            return exact(to_rational(num, BigInt::from(2) * s));
        }
        // the map s -> s - 1/s has slope at most 2 for s >= 1, so an error of
        // precision / (2m) in sqrt(n) moves the bound by at most precision
        let k = grid(&(BigInt::from(2) * &mm), precision);
        let a = (BigInt::from(n) * &k * &k).sqrt();
        // s = a / K <= sqrt(n); value (2a^2 - aK - 2K^2) m / (2aK)
        let num = (BigInt::from(2) * &a * &a - &a * &k - BigInt::from(2) * &k * &k) * &mm;
        BoundValue { value: to_rational(num, BigInt::from(2) * &a * &k), exact: false }
    })
}

/// `sum m_i / sqrt(n)`, rounded down.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NagataRhs {
    pub value: BoundValue,
    pub sqrt: SqrtParts,
    /// `n <= 9`: outside the range where the conjectured inequality is claimed.
    pub flagged: bool,
}

pub fn nagata_rhs(m: &[u32], precision: Rational) -> NagataRhs {
    let n = m.len() as u64;
    let parts = sqrt_parts(n);
    let total: i128 = m.iter().map(|&x| x as i128).sum();
    let value = if n == 0 {
        exact(Rational::zero())
    } else if parts.remainder == 0 {
        exact(Rational::new(total, parts.floor as i128))
    } else {
        // total / s with s >= sqrt(n) within total / (n K)
        let k = grid(&BigInt::from(total), precision * rat(n as i128));
        let nk2 = BigInt::from(n) * &k * &k;
        let mut a = nk2.sqrt();
        if &a * &a < nk2 {
            a += 1;
        }
        BoundValue { value: to_rational(BigInt::from(total) * k, a), exact: false }
    };
    NagataRhs { value, sqrt: parts, flagged: n <= 9 }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CertificateError {
    #[error("points {:?} have tangent cones meeting at a common point", .0.indices)]
    NotGeneralPosition(TripleWitness),
    #[error("point {} lies on the tangent cone of point {}", .0[1], .0[0])]
    NotApexSeparated([usize; 2]),
    #[error(transparent)]
    Position(#[from] PositionError),
    #[error(transparent)]
    Influence(#[from] InfluenceError),
}

/// `m_i^2 / 2 <= area(Infl(P_i))` per point and `sum area(Infl(P_i)) <= 2 area(Δ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetCertificate {
    pub terms: Vec<Rational>,
    pub total: Rational,
    pub budget: Rational,
    /// Per point: `area(Infl(P_i)) >= m_i^2 / 2`.
    pub lower_bounds: Vec<bool>,
}

impl BudgetCertificate {
    pub fn budget_holds(&self) -> bool {
        self.total <= self.budget
    }

    pub fn lower_bounds_hold(&self) -> bool {
        self.lower_bounds.iter().all(|&b| b)
    }
}

pub fn verify_influence_budget(
    cfg: &PointConfiguration,
    curve: &TropicalCurve,
    delta: &LatticePolygon,
) -> Result<BudgetCertificate, CertificateError> {
    is_general_position(cfg, delta).map_err(CertificateError::NotGeneralPosition)?;
    is_apex_separated(cfg, delta).map_err(CertificateError::NotApexSeparated)?;
    let mut terms = Vec::new();
    let mut lower_bounds = Vec::new();
    for p in cfg.points() {
        let a = influence_area(&RatPoint::from_lattice(p.point), curve, delta).expect("checked non-degenerate");
        lower_bounds.push(a >= Rational::new((p.multiplicity as i128).pow(2), 2));
        terms.push(a);
    }
    let total = terms.iter().copied().sum();
    Ok(BudgetCertificate { terms, total, budget: delta.area() * rat(2), lower_bounds })
}

/// `(sum m_i^2 - s_i^2) / 2 <= sum terms <= area(Δ)`, where each term is the
/// area swept along the horizontal line through `P_i`, including `d(P_i)`
/// itself when `P_i` is a vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FloorCertificate {
    pub s: SValues,
    pub terms: Vec<Rational>,
    pub lower: Rational,
    pub middle: Rational,
    pub upper: Rational,
}

impl FloorCertificate {
    pub fn lower_holds(&self) -> bool {
        self.lower <= self.middle
    }

    pub fn upper_holds(&self) -> bool {
        self.middle <= self.upper
    }

    pub fn widths_hold(&self) -> bool {
        self.s.holds()
    }

    pub fn holds(&self) -> bool {
        self.lower_holds() && self.upper_holds() && self.widths_hold()
    }
}

pub fn verify_floor_certificate(floor: &FloorConfiguration, curve: &TropicalCurve) -> Result<FloorCertificate, CertificateError> {
    let s = s_values(floor, curve)?;
    let mut terms = Vec::new();
    for (p, loc) in floor.config.points().iter().zip(&s.locations) {
        let mut a = directional_influence_area(&RatPoint::from_lattice(p.point), curve, Direction::VERTICAL)?;
        if let Location::Vertex(v) = loc {
            a += curve.dual_area(*v);
        }
        terms.push(a);
    }
    let lower = Rational::new(
        floor
            .config
            .points()
            .iter()
            .zip(&s.s)
            .map(|(p, &si)| (p.multiplicity as i128).pow(2) - (si as i128).pow(2))
            .sum(),
        2,
    );
    let middle = terms.iter().copied().sum();
    Ok(FloorCertificate { s, terms, lower, middle, upper: curve.newton_polygon().area() })
}
