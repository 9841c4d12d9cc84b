use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tropinfl_core::bounds::{theorem1_value, verify_influence_budget};
use tropinfl_core::field::PrimeField;
use tropinfl_core::influence::influence_area;
use tropinfl_core::lattice::LatticePolygon;
use tropinfl_core::pipeline::{curve_through_config, floor_instance, lift_points, multi_point_instance, run_floor, single_point_instance};
use tropinfl_core::position::{is_apex_separated, is_general_position};
use tropinfl_core::puiseux::LaurentRing;
use tropinfl_core::solver::{detropicalize, multiplicity_of, Detropicalization};
use tropinfl_core::tropical::RatPoint;
use tropinfl_core::Rational;

fn field() -> PrimeField {
    PrimeField::new(32003).unwrap()
}

#[test]
fn single_point_influence_is_at_least_half_m_squared() {
    let ring = LaurentRing::new(field());
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut seen = [0usize; 5];
    for _ in 0..30 {
        let inst = single_point_instance(&mut rng);
        let run = curve_through_config(&ring, &inst.polygon, &inst.config, &mut rng).unwrap();
        let curve = run.curve.as_ref().expect("more monomials than conditions");
        let p = &inst.config.points()[0];
        let lifted = &lift_points(&ring, &inst.config)[0];
        assert!(multiplicity_of(&ring, &curve.polynomial, &lifted.point).unwrap() >= p.multiplicity);
        let area = influence_area(&RatPoint::from_lattice(p.point), &curve.tropical, &inst.polygon).unwrap();
        let m = p.multiplicity as i128;
        assert!(area >= Rational::new(m * m, 2), "m={m} area={area}");
        assert!(detropicalize(&ring, &run.system.matrix).is_found());
        seen[p.multiplicity as usize] += 1;
    }
    assert!(seen[1..].iter().all(|&c| c > 0), "every multiplicity drawn: {seen:?}");
}

#[test]
fn influence_budget_on_general_position_instances() {
    let ring = LaurentRing::new(field());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10 {
        let inst = multi_point_instance(&mut rng, 4);
        assert!(is_general_position(&inst.config, &inst.polygon).is_ok());
        assert!(is_apex_separated(&inst.config, &inst.polygon).is_ok());
        let run = curve_through_config(&ring, &inst.polygon, &inst.config, &mut rng).unwrap();
        let curve = run.curve.as_ref().expect("more monomials than conditions");
        let cert = verify_influence_budget(&inst.config, &curve.tropical, &inst.polygon).unwrap();
        assert!(cert.budget_holds(), "{:?} > {}", cert.total, cert.budget);
        assert!(cert.lower_bounds_hold(), "{:?}", cert.terms);
        assert!(detropicalize(&ring, &run.system.matrix).is_found());
    }
}

#[test]
fn floor_certificates_hold() {
    let f = field();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..10 {
        let (polygon, m) = floor_instance(&mut rng);
        let run = run_floor(&polygon, &m, &f, &mut rng).unwrap();
        assert!(run.floor.is_valid_floor());
        let cert = run.certificate.expect("more monomials than conditions");
        assert!(cert.lower_holds(), "{} > {}", cert.lower, cert.middle);
        assert!(cert.upper_holds(), "{} > {}", cert.middle, cert.upper);
        assert!(cert.widths_hold(), "{:?}", cert.s);
        match run.detropicalization {
            Detropicalization::Found { rank, .. } => assert_eq!(rank, run.run.report.rank),
            Detropicalization::Exhausted { .. } => panic!("no a keeps the rank"),
        }
    }
}

#[test]
fn floor_systems_below_the_bound_have_no_curve() {
    let f = field();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let polygons = [LatticePolygon::triangle(3), LatticePolygon::triangle(4), LatticePolygon::rectangle(3, 3), LatticePolygon::rectangle(2, 4)];
    let mut checked = 0;
    for delta in &polygons {
        let (w, _) = delta.minimal_lattice_width();
        for m in [vec![2u32; 4], vec![2; 5], vec![3, 2, 2], vec![3, 3], vec![3, 3, 2], vec![2; 6]] {
            if m.iter().any(|&k| k as i64 > w) || delta.area() >= theorem1_value(&m, w as u64) {
                continue;
            }
            let run = run_floor(delta, &m, &f, &mut rng).unwrap();
            assert!(run.run.curve.is_none(), "{m:?} on area {}", delta.area());
            assert_eq!(run.run.report.kernel_dim, 0);
            checked += 1;
        }
    }
    assert!(checked >= 5, "only {checked} instances below the bound");
}
