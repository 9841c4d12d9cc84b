//! Jet-evaluation codes: a polynomial with support in `Δ` is sent to its
//! Taylor coefficients of order below `m` at `n` points of `F_p^2`.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::bounds::uniform_bound;
use crate::field::{Domain, PrimeField};
use crate::lattice::{LatticePoint, LatticePolygon, UnimodularMap};
use crate::linalg::{rank, Matrix};
use crate::position::{floor_points, PositionError};
use crate::puiseux::LaurentRing;
use crate::solver::{check_distinct, detropicalize, multiplicity_system, solve_matrix, Condition, Detropicalization, SolverError};
use crate::Rational;

struct OptBound<'a>(&'a Option<Rational>);

impl core::fmt::Display for OptBound<'_> {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self.0 {
            Some(b) => write!(f, "{b}"),
            None => f.write_str("(withheld)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodeError {
    #[error("area {area} is not below the bound {}", OptBound(bound))]
    Infeasible { area: Rational, bound: Option<Rational> },
    #[error("no a in F_{prime} keeps the rank")]
    Exhausted { prime: u64 },
    #[error("evaluation map has a kernel of dimension {kernel_dim}")]
    CertificationFailed { kernel_dim: usize, witness: Vec<u64> },
    #[error("code has dimension 0")]
    EmptyCode,
    #[error("{count} codewords exceed the cap {cap}")]
    TooLarge { count: u128, cap: u128 },
    #[error("generator matrix does not have full row rank")]
    NotFullRank,
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Position(#[from] PositionError),
}

/// Rows indexed by (point, local monomial of degree below `m`), columns by
/// the lattice points of `Δ`.
pub fn jet_matrix(field: &PrimeField, delta: &LatticePolygon, points: &[(u64, u64)], m: u32) -> Result<Matrix<u64>, CodeError> {
    check_distinct(points)?;
    let conds: Vec<Condition<u64>> = points.iter().map(|&(x, y)| Condition::new(x, y, m)).collect();
    Ok(multiplicity_system(field, &delta.lattice_points(), &conds)?.matrix)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CodeProvenance {
    /// Polygon in the coordinates used for the coefficients.
    pub polygon: LatticePolygon,
    /// Map from the requested polygon to `polygon`.
    pub map: UnimodularMap,
    /// Tropical positions `(x_i, y_i)` of the points `(t^-x_i, t^-y_i)`.
    pub tropical_points: Vec<LatticePoint>,
    /// The substitution `t = a`.
    pub a: u64,
    pub points: Vec<(u64, u64)>,
    pub multiplicity: u32,
}

/// Linear code over `F_p` given by a full-row-rank generator matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearCode {
    pub prime: u64,
    pub generator: Matrix<u64>,
    pub provenance: Option<CodeProvenance>,
}

impl LinearCode {
    pub fn new(field: &PrimeField, generator: Matrix<u64>) -> Result<Self, CodeError> {
        if rank(field, &generator) != generator.nrows() {
            return Err(CodeError::NotFullRank);
        }
        Ok(LinearCode { prime: field.modulus(), generator, provenance: None })
    }

    pub fn length(&self) -> usize {
        self.generator.ncols()
    }

    pub fn dimension(&self) -> usize {
        self.generator.nrows()
    }
}

/// `dN < (n - d/m - 1) m^2 / 2` for `Δ = [0,d] x [0,N]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Feasibility {
    /// `m <= min(N, d)`.
    pub hypothesis: bool,
    pub holds: bool,
}

pub fn feasibility(d: u64, big_n: u64, n: u64, m: u32) -> Feasibility {
    let lhs = Rational::from_integer((d * big_n) as i128);
    let mm = m as i128;
    let rhs = if m == 0 {
        None
    } else {
        Some((Rational::from_integer(n as i128) - Rational::new(d as i128, mm) - Rational::from_integer(1)) * Rational::from_integer(mm * mm) / 2)
    };
    Feasibility { hypothesis: m >= 1 && m as u64 <= big_n.min(d), holds: rhs.is_some_and(|r| lhs < r) }
}

/// `area(Δ) < (n - ω(Δ)/m - 1) m^2 / 2`, the general form of [`feasibility`].
pub fn polygon_feasibility(delta: &LatticePolygon, n: u64, m: u32) -> (Rational, Option<Rational>) {
    let (w, _) = delta.minimal_lattice_width();
    (delta.area(), uniform_bound(n, m, w as u64).exact_value())
}

/// Points on the floor line, lifted to `(t^-x, t^-y)`, specialized at the
/// first `a` that keeps the rank, and certified injective.
pub fn build_code(delta: &LatticePolygon, n: usize, m: u32, field: &PrimeField) -> Result<LinearCode, CodeError> {
    let (area, bound) = polygon_feasibility(delta, n as u64, m);
    if !bound.is_some_and(|b| area < b) {
        return Err(CodeError::Infeasible { area, bound });
    }
    let floor = floor_points(&vec![m; n], delta)?;
    let support = floor.polygon.lattice_points();
    let ring = LaurentRing::new(*field);
    let tropical_points = floor.config.positions();
    let conds: Vec<_> = tropical_points.iter().map(|p| Condition::new(ring.t_pow(-p.x), ring.t_pow(-p.y), m)).collect();
    let sys = multiplicity_system(&ring, &support, &conds)?;
    let a = match detropicalize(&ring, &sys.matrix) {
        Detropicalization::Found { a, .. } => a,
        Detropicalization::Exhausted { .. } => return Err(CodeError::Exhausted { prime: field.modulus() }),
    };
    let points: Vec<(u64, u64)> = tropical_points
        .iter()
        .map(|p| (field.pow_signed(&a, -p.x).expect("a is a unit"), field.pow_signed(&a, -p.y).expect("a is a unit")))
        .collect();
    let jets = jet_matrix(field, &floor.polygon, &points, m)?;
    let report = solve_matrix(field, &jets);
    if report.kernel_dim > 0 {
        return Err(CodeError::CertificationFailed { kernel_dim: report.kernel_dim, witness: report.kernel[0].clone() });
    }
    Ok(LinearCode {
        prime: field.modulus(),
        generator: jets.transpose(),
        provenance: Some(CodeProvenance { polygon: floor.polygon.clone(), map: floor.map, tropical_points, a, points, multiplicity: m }),
    })
}

pub const DEFAULT_CODEWORD_CAP: u128 = 1 << 22;

/// Minimum Hamming weight over all nonzero codewords, by enumeration.
pub fn min_distance_bruteforce(code: &LinearCode, cap: u128) -> Result<usize, CodeError> {
    let k = code.dimension();
    if k == 0 {
        return Err(CodeError::EmptyCode);
    }
    let p = code.prime;
    let count = (p as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if count > cap {
        return Err(CodeError::TooLarge { count, cap });
    }
    let field = PrimeField::new(p).expect("validated prime");
    let n = code.length();
    let mut digits = vec![0u64; k];
    let mut word = vec![0u64; n];
    let mut best = usize::MAX;
    // odometer over messages: every digit change adds one generator row,
    // including the wrap from p - 1 to 0
    loop {
        let mut i = 0;
        loop {
            if i == k {
                return Ok(best);
            }
            for (w, g) in word.iter_mut().zip(code.generator.row(i)) {
                *w = field.add(w, g);
            }
            digits[i] = (digits[i] + 1) % p;
            if !digits[i].is_zero() {
                break;
            }
            i += 1;
        }
        best = best.min(word.iter().filter(|w| !w.is_zero()).count());
    }
}
