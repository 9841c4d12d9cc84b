//! Linear conditions for prescribed multiplicities, their exact solution, and
//! the search for a specialization `t = a` that keeps the rank.
//!
//! The point `p` has multiplicity at least `m` on `F` when every coefficient
//! of `F(x + p1, y + p2)` of total degree below `m` vanishes. Coefficient
//! `(α, β)` of the translate is `sum C(i,α) C(j,β) p1^(i-α) p2^(j-β) a_ij`,
//! which stays valid in every characteristic.

use alloc::vec;
use alloc::vec::Vec;

use rand::RngCore;

use crate::field::{binomial, Domain, Field, PrimeField};
use crate::lattice::{convex_hull, LatticePoint, LatticePolygon};
use crate::linalg::{kernel_basis, row_reduce, Matrix};
use crate::poly::Polynomial;
use crate::puiseux::{Laurent, LaurentRing};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SolverError {
    #[error("point {0} needs a non-unit coordinate inverted for this support")]
    InvalidPoint(usize),
    #[error("points {0} and {1} coincide")]
    DuplicatePoint(usize, usize),
}

/// Where a row of the system comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RowOrigin {
    pub point: usize,
    pub multiplicity: u32,
    /// Local monomial `(α, β)` with `α + β < multiplicity`.
    pub local: (u32, u32),
}

#[derive(Debug, Clone)]
pub struct MultiplicitySystem<E> {
    /// Unknown coefficients, one column each.
    pub support: Vec<LatticePoint>,
    pub matrix: Matrix<E>,
    pub origins: Vec<RowOrigin>,
}

/// A point with a required multiplicity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Condition<E> {
    pub point: (E, E),
    pub multiplicity: u32,
}

impl<E> Condition<E> {
    pub fn new(x: E, y: E, multiplicity: u32) -> Self {
        Condition { point: (x, y), multiplicity }
    }
}

/// `c^(i - α) * C(i, α)` with `None` when the power needs a missing inverse
/// and the binomial does not kill the term.
fn shifted_power<D: Domain>(ring: &D, c: &D::Elem, i: i64, alpha: u32) -> Option<Option<D::Elem>> {
    let b = binomial(i, alpha);
    let b = ring.from_bigint(&b);
    if ring.is_zero(&b) {
        return Some(None);
    }
    let pw = ring.pow_signed(c, i - alpha as i64)?;
    Some(Some(ring.mul(&b, &pw)))
}

pub fn multiplicity_system<D: Domain>(
    ring: &D,
    support: &[LatticePoint],
    conditions: &[Condition<D::Elem>],
) -> Result<MultiplicitySystem<D::Elem>, SolverError> {
    let mut rows = Vec::new();
    let mut origins = Vec::new();
    for (k, cond) in conditions.iter().enumerate() {
        let (p1, p2) = &cond.point;
        for total in 0..cond.multiplicity {
            for alpha in (0..=total).rev() {
                let beta = total - alpha;
                let mut row = Vec::with_capacity(support.len());
                for &s in support {
                    let entry = match shifted_power(ring, p1, s.x, alpha).ok_or(SolverError::InvalidPoint(k))? {
                        None => ring.zero(),
                        Some(a) => match shifted_power(ring, p2, s.y, beta).ok_or(SolverError::InvalidPoint(k))? {
                            None => ring.zero(),
                            Some(b) => ring.mul(&a, &b),
                        },
                    };
                    row.push(entry);
                }
                rows.push(row);
                origins.push(RowOrigin { point: k, multiplicity: cond.multiplicity, local: (alpha, beta) });
            }
        }
    }
    Ok(MultiplicitySystem { support: support.to_vec(), matrix: Matrix::from_rows(rows, support.len()), origins })
}

#[derive(Debug, Clone)]
pub struct SolveReport<E> {
    pub rank: usize,
    pub kernel_dim: usize,
    /// Kernel basis over the fraction field, entries kept in the ring.
    pub kernel: Vec<Vec<E>>,
    /// Nonzero minor of the pivot rows and columns.
    pub pivot_minor: E,
    pub pivot_rows: Vec<usize>,
    pub pivot_cols: Vec<usize>,
}

pub fn solve<D: Domain>(ring: &D, sys: &MultiplicitySystem<D::Elem>) -> SolveReport<D::Elem> {
    solve_matrix(ring, &sys.matrix)
}

pub fn solve_matrix<D: Domain>(ring: &D, m: &Matrix<D::Elem>) -> SolveReport<D::Elem> {
    let ech = row_reduce(ring, m);
    let kernel = kernel_basis(ring, m, &ech);
    SolveReport {
        rank: ech.rank(),
        kernel_dim: kernel.len(),
        kernel,
        pivot_minor: ech.pivot_minor,
        pivot_rows: ech.pivot_rows,
        pivot_cols: ech.pivot_cols,
    }
}

/// A curve found in the kernel.
#[derive(Debug, Clone)]
pub struct CurveFound<E> {
    pub polynomial: Polynomial<E>,
    /// Newton polygon equals the convex hull of the support.
    pub exact: bool,
    pub attempts: usize,
}

pub const DEFAULT_RETRIES: usize = 20;

/// A random combination of the kernel basis whose Newton polygon is the
/// hull of `sys.support`, retried up to `retries` times; `None` when the
/// kernel is trivial.
pub fn curve_through<D: Domain>(
    ring: &D,
    sys: &MultiplicitySystem<D::Elem>,
    report: &SolveReport<D::Elem>,
    rng: &mut dyn RngCore,
    retries: usize,
) -> Option<CurveFound<D::Elem>> {
    if report.kernel.is_empty() {
        return None;
    }
    let hull = convex_hull(&sys.support).expect("non-empty support");
    let mut last = None;
    for attempt in 1..=retries.max(1) {
        let mut coeffs = vec![ring.zero(); sys.support.len()];
        for v in &report.kernel {
            let c = ring.sample(rng);
            for (acc, x) in coeffs.iter_mut().zip(v) {
                *acc = ring.add(acc, &ring.mul(&c, x));
            }
        }
        let f = Polynomial::from_coefficients(ring, &sys.support, &coeffs);
        if f.is_zero() {
            continue;
        }
        let exact = hull.vertices().iter().all(|&v| f.coefficient(v).is_some());
        let found = CurveFound { polynomial: f, exact, attempts: attempt };
        if exact {
            return Some(found);
        }
        last = Some(found);
    }
    last
}

/// Multiplicity of `f` at `p`, computed by expanding `f(x + p1, y + p2)`.
/// `None` for the zero polynomial or when a negative exponent meets a
/// non-unit coordinate.
pub fn multiplicity_of<D: Domain>(ring: &D, f: &Polynomial<D::Elem>, p: &(D::Elem, D::Elem)) -> Option<u32> {
    if f.is_zero() {
        return None;
    }
    let support = f.support();
    let min_x = support.iter().map(|q| q.x).min().expect("non-empty");
    let min_y = support.iter().map(|q| q.y).min().expect("non-empty");
    // multiplying by a monomial that is a unit near p leaves the multiplicity alone
    if (min_x < 0 && ring.unit_inverse(&p.0).is_none()) || (min_y < 0 && ring.unit_inverse(&p.1).is_none()) {
        return None;
    }
    let g = f.shift(LatticePoint::new(-min_x.min(0), -min_y.min(0)));
    let x_shift = Polynomial::from_terms(ring, [(LatticePoint::new(1, 0), ring.one()), (LatticePoint::new(0, 0), p.0.clone())]);
    let y_shift = Polynomial::from_terms(ring, [(LatticePoint::new(0, 1), ring.one()), (LatticePoint::new(0, 0), p.1.clone())]);
    let max_x = g.support().iter().map(|q| q.x).max().expect("non-empty");
    let max_y = g.support().iter().map(|q| q.y).max().expect("non-empty");
    let xs: Vec<Polynomial<D::Elem>> = (0..=max_x).map(|e| x_shift.pow(ring, e as u32)).collect();
    let ys: Vec<Polynomial<D::Elem>> = (0..=max_y).map(|e| y_shift.pow(ring, e as u32)).collect();
    let mut moved = Polynomial::zero();
    for (q, c) in g.terms() {
        let term = xs[q.x as usize].mul(ring, &ys[q.y as usize]).scale(ring, c);
        moved = moved.add(ring, &term);
    }
    moved.terms().map(|(q, _)| (q.x + q.y) as u32).min()
}

/// Outcome of the search over `t = a`.
#[derive(Debug, Clone)]
pub enum Detropicalization {
    Found {
        a: u64,
        /// Candidates tried, including the accepted one.
        tried: u64,
        rank: usize,
        report: SolveReport<u64>,
        /// Exponent span of the pivot minor over `F(t)`: at most this many
        /// nonzero `a` can lose the rank.
        minor_span: usize,
    },
    Exhausted {
        tried: u64,
        rank: usize,
        minor_span: usize,
    },
}

impl Detropicalization {
    pub fn is_found(&self) -> bool {
        matches!(self, Detropicalization::Found { .. })
    }
}

/// Tries `a = 1, 2, ..., p - 1` and accepts the first specialization whose
/// rank over `F_p` equals the rank over `F_p(t)`.
pub fn detropicalize(ring: &LaurentRing<PrimeField>, m: &Matrix<Laurent<u64>>) -> Detropicalization {
    let over_t = row_reduce(ring, m);
    let rank = over_t.rank();
    let minor_span = over_t.pivot_minor.span().saturating_sub(1);
    let field = *ring.base();
    let p = field.modulus();
    for a in 1..p {
        let special = m.map(|x| ring.specialize(x, &a).expect("a is nonzero"));
        let report = solve_matrix(&field, &special);
        if report.rank == rank {
            return Detropicalization::Found { a, tried: a, rank, report, minor_span };
        }
    }
    Detropicalization::Exhausted { tried: p - 1, rank, minor_span }
}

/// Kernel dimension minus one against the expected dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionReport {
    pub actual: i64,
    pub expected: i64,
}

impl DimensionReport {
    pub fn excess(&self) -> i64 {
        self.actual - self.expected
    }
}

/// Curves of degree `d` through `conditions`.
pub fn dimension_report<F: Field>(
    field: &F,
    d: u64,
    conditions: &[Condition<F::Elem>],
) -> Result<DimensionReport, SolverError> {
    let support = LatticePolygon::triangle(d as i64).lattice_points();
    let sys = multiplicity_system(field, &support, conditions)?;
    let report = solve(field, &sys);
    let m: Vec<u32> = conditions.iter().map(|c| c.multiplicity).collect();
    Ok(DimensionReport { actual: report.kernel_dim as i64 - 1, expected: crate::bounds::expected_dimension(d, &m) })
}

/// Rejects repeated points.
pub fn check_distinct<E: PartialEq>(points: &[(E, E)]) -> Result<(), SolverError> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            if points[i] == points[j] {
                return Err(SolverError::DuplicatePoint(i, j));
            }
        }
    }
    Ok(())
}
