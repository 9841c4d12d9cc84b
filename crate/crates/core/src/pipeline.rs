//! End-to-end runs: lift lattice points to `(t^-x, t^-y)`, solve for a curve
//! over `F_p(t)`, tropicalize it, and evaluate the certificates.

use alloc::vec::Vec;

use rand::RngCore;

use crate::bounds::{theorem1_bound, verify_floor_certificate, BoundReport, CertificateError, FloorCertificate};
use crate::field::PrimeField;
use crate::lattice::{random_polygon, LatticePoint, LatticePolygon};
use crate::position::{floor_points, perturb_to_general_position, FloorConfiguration, PointConfiguration, PositionError};
use crate::poly::Polynomial;
use crate::puiseux::{Laurent, LaurentRing};
use crate::solver::{
    curve_through, detropicalize, multiplicity_system, solve, Condition, Detropicalization, MultiplicitySystem, SolveReport,
    SolverError, DEFAULT_RETRIES,
};
use crate::tropical::{curve_complex, tropicalize, TropicalCurve, TropicalError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Solver(#[from] SolverError),
    #[error(transparent)]
    Tropical(#[from] TropicalError),
    #[error(transparent)]
    Position(#[from] PositionError),
    #[error(transparent)]
    Certificate(#[from] CertificateError),
}

/// `(t^-x, t^-y)` with the configured multiplicity, one per point.
pub fn lift_points(ring: &LaurentRing<PrimeField>, cfg: &PointConfiguration) -> Vec<Condition<Laurent<u64>>> {
    cfg.points().iter().map(|p| Condition::new(ring.t_pow(-p.point.x), ring.t_pow(-p.point.y), p.multiplicity)).collect()
}

#[derive(Debug, Clone)]
pub struct FoundCurve {
    pub polynomial: Polynomial<Laurent<u64>>,
    /// Newton polygon is all of `Δ`.
    pub exact: bool,
    pub tropical: TropicalCurve,
}

#[derive(Debug, Clone)]
pub struct CurveRun {
    pub polygon: LatticePolygon,
    pub config: PointConfiguration,
    pub system: MultiplicitySystem<Laurent<u64>>,
    pub report: SolveReport<Laurent<u64>>,
    /// `None` when the kernel is trivial.
    pub curve: Option<FoundCurve>,
}

/// Solves the lifted system with support `Δ` and tropicalizes a random
/// kernel element.
pub fn curve_through_config(
    ring: &LaurentRing<PrimeField>,
    polygon: &LatticePolygon,
    cfg: &PointConfiguration,
    rng: &mut dyn RngCore,
) -> Result<CurveRun, PipelineError> {
    let support = polygon.lattice_points();
    let system = multiplicity_system(ring, &support, &lift_points(ring, cfg))?;
    let report = solve(ring, &system);
    let curve = match curve_through(ring, &system, &report, rng, DEFAULT_RETRIES) {
        None => None,
        Some(found) => {
            let trop = tropicalize(ring, &found.polynomial)?;
            let tropical = curve_complex(&trop)?;
            Some(FoundCurve { polynomial: found.polynomial, exact: found.exact, tropical })
        }
    };
    Ok(CurveRun { polygon: polygon.clone(), config: cfg.clone(), system, report, curve })
}

/// A polygon and points for the influence experiments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub polygon: LatticePolygon,
    pub config: PointConfiguration,
}

fn below(rng: &mut dyn RngCore, n: u32) -> u32 {
    rng.next_u32() % n
}

fn conditions_count(m: &[u32]) -> usize {
    m.iter().map(|&k| (k * (k + 1) / 2) as usize).sum()
}

/// A polygon with `ω(Δ) >= max m` and more lattice points than conditions.
fn polygon_for(rng: &mut dyn RngCore, m: &[u32], max_points: usize) -> LatticePolygon {
    let top = m.iter().copied().max().unwrap_or(1) as i64;
    loop {
        let size = top + 1 + below(rng, 3) as i64;
        let count = 4 + below(rng, 4) as usize;
        let poly = random_polygon(rng, size, count);
        if poly.is_degenerate() || poly.minimal_lattice_width().0 < top {
            continue;
        }
        let count = poly.lattice_points().len();
        if count > conditions_count(m) && count <= max_points {
            return poly;
        }
    }
}

/// One point `(x, y)` with multiplicity `m` in `1..=4`.
pub fn single_point_instance(rng: &mut dyn RngCore) -> Instance {
    let m = 1 + below(rng, 4);
    let polygon = polygon_for(rng, &[m], 30);
    let p = LatticePoint::new(below(rng, 7) as i64 - 3, below(rng, 7) as i64 - 3);
    Instance { polygon, config: PointConfiguration::from_points(&[p], &[m]).expect("positive multiplicity") }
}

/// Two to `max_points` points in general position and apex-separated.
pub fn multi_point_instance(rng: &mut dyn RngCore, max_points: usize) -> Instance {
    let n = 2 + below(rng, (max_points.max(2) - 1) as u32) as usize;
    let m: Vec<u32> = (0..n).map(|_| 1 + below(rng, 2)).collect();
    let polygon = polygon_for(rng, &m, 24);
    let pts: Vec<LatticePoint> = (0..n).map(|_| LatticePoint::new(below(rng, 5) as i64 - 2, below(rng, 5) as i64 - 2)).collect();
    let cfg = PointConfiguration::from_points(&pts, &m).expect("positive multiplicities");
    let (config, _) = perturb_to_general_position(&cfg, &polygon);
    Instance { polygon, config }
}

/// Multiplicities and a polygon for a floor run that admits a curve.
pub fn floor_instance(rng: &mut dyn RngCore) -> (LatticePolygon, Vec<u32>) {
    loop {
        let n = 1 + below(rng, 3) as usize;
        let m: Vec<u32> = (0..n).map(|_| 1 + below(rng, 3)).collect();
        let polygon = polygon_for(rng, &m, 20);
        if polygon.lattice_points().len() > conditions_count(&m) {
            return (polygon, m);
        }
    }
}

#[derive(Debug, Clone)]
pub struct FloorRun {
    pub floor: FloorConfiguration,
    pub run: CurveRun,
    pub detropicalization: Detropicalization,
    /// Present when a curve exists.
    pub certificate: Option<FloorCertificate>,
    pub theorem1: BoundReport,
}

/// Floor points for `m` on `Δ`, the lifted system, its specialization, and
/// the floor certificate on the resulting curve.
pub fn run_floor(delta: &LatticePolygon, m: &[u32], field: &PrimeField, rng: &mut dyn RngCore) -> Result<FloorRun, PipelineError> {
    let floor = floor_points(m, delta)?;
    let ring = LaurentRing::new(*field);
    let run = curve_through_config(&ring, &floor.polygon, &floor.config, rng)?;
    let detropicalization = detropicalize(&ring, &run.system.matrix);
    let certificate = match &run.curve {
        Some(c) => Some(verify_floor_certificate(&floor, &c.tropical)?),
        None => None,
    };
    let theorem1 = theorem1_bound(m, delta);
    Ok(FloorRun { floor, run, detropicalization, certificate, theorem1 })
}
