mod common;

use std::f64::consts::PI;

use salpeter::nboson::{self, BosonSystem};
use salpeter::spectral::{self, OracleGrid};

use common::{exponential, two_term};

const PRINTED_TWO_TERM: [(f64, f64); 3] = [(0.0, -1.14462), (0.5, -0.814543), (1.0, -0.36131)];

#[test]
fn critical_scaled_coupling() {
    let uc = nboson::critical_u().unwrap();
    assert!((uc - 0.527485).abs() < 5e-5, "{uc}");
    let at_uc = nboson::lower_bound_for(uc, 1.0, 1.0).unwrap();
    assert!(at_uc.bound && at_uc.energy_pp.abs() < 5e-5, "{at_uc:?}");
}

#[test]
fn two_boson_bounds_at_unit_coupling() {
    let sys = BosonSystem::canonical(2, 1.0);
    let lower = nboson::lower_bound_per_particle(&sys).unwrap();
    let upper = nboson::upper_bound_per_particle(&sys).unwrap();
    assert!((lower.energy_pp + 1.28422).abs() < 2e-4, "{lower:?}");
    assert!((upper.energy_pp + 1.28255).abs() < 2e-4, "{upper:?}");
    assert!((upper.s_star - 0.775).abs() < 5e-3, "{upper:?}");
    assert!(upper.energy_pp >= lower.energy_pp);
    assert!((upper.energy_pp - lower.energy_pp) / lower.energy_pp.abs() <= 0.005);
    // The quoted pair reads as two-particle totals.
    assert!((2.0 * lower.energy_pp + 2.56844).abs() < 2e-4);
    assert!((2.0 * upper.energy_pp + 2.5651).abs() < 2e-4);
}

#[test]
fn lower_bound_reduces_to_one_body_gauss_problem() {
    // Independent route: the relation 1/u = 2π∫e^(−k²)k²dk/(√(1+k²) − E).
    let e = nboson::lower_bound_for(1.0, 1.0, 1.0).unwrap().energy_pp;
    let rhs = salpeter::quadrature::integrate_semi_infinite(
        |k| 2.0 * PI * (-k * k).exp() * k * k / ((1.0 + k * k).sqrt() - e),
        salpeter::Tolerance::default(),
    )
    .unwrap()
    .value;
    assert!((rhs - 1.0).abs() < 1e-8, "{rhs}");
}

fn halved(problem: &salpeter::Problem) -> salpeter::Problem {
    problem.with_couplings_scaled(0.5)
}

#[test]
fn two_term_printed_energies_match_halved_couplings_only() {
    let mut as_printed = true;
    let mut halved_ok = true;
    for (m, printed) in PRINTED_TWO_TERM {
        let p = two_term(m);
        let e_printed = spectral::solve_ground_energy(&p, None).unwrap().energy;
        let e_halved = spectral::solve_ground_energy(&halved(&p), None).unwrap().energy;
        as_printed &= (e_printed - printed).abs() <= 1e-3;
        halved_ok &= (e_halved - printed).abs() <= 1e-3;
    }
    assert!(!as_printed && halved_ok);
}

#[test]
fn oracle_agrees_with_equations_as_printed() {
    for (m, _) in PRINTED_TWO_TERM {
        let p = two_term(m);
        let solved = spectral::solve_ground_energy(&p, None).unwrap().energy;
        let oracle = spectral::oracle_extrapolated(&p, &OracleGrid::default()).unwrap().extrapolated;
        assert!((solved - oracle).abs() <= 1e-4 * solved.abs().max(1.0), "m={m}: {solved} vs {oracle}");
    }
}

#[test]
fn ultrarelativistic_closed_form_matches_quadrature() {
    let p = exponential(1.0, 1.0, 0.0);
    for e in [-0.1, -0.5, -1.0, -2.0, -3.0] {
        let closed = spectral::ultrarel_exponential_reciprocal_coupling(1.0, e).unwrap();
        let quad = spectral::reciprocal_coupling(&p, e).unwrap();
        assert!(((closed - quad) / quad).abs() < 1e-6, "e={e}: {closed} vs {quad}");
    }
    let at_unit = spectral::ultrarel_exponential_reciprocal_coupling(1.0, -1.0).unwrap();
    assert!((at_unit - (1.0 - 1.0 / PI)).abs() < 1e-14);
}

#[test]
fn exponential_reciprocal_coupling_sample() {
    let r = spectral::reciprocal_coupling(&exponential(1.0, 1.0, 1.0), -1.0).unwrap();
    assert!((r - 0.453520910530).abs() < 1e-10, "{r}");
}

#[test]
fn g_function_dual_evaluation() {
    let tol = salpeter::Tolerance::new(1e-15, 1e-12).unwrap();
    for i in 0..50 {
        let x = 0.01 * 2000f64.powf(i as f64 / 49.0);
        let closed = nboson::g_function(x).unwrap();
        let quad = nboson::g_function_quadrature(x, tol).unwrap();
        assert!(((closed - quad) / closed).abs() <= 1e-8, "x={x}: {closed} vs {quad}");
    }
    assert_eq!(nboson::g_function(0.0).unwrap(), 1.0);
}

#[test]
fn k1_matches_integral_representation() {
    // K₁(x) = ∫₀^∞ e^(−x cosh t) cosh t dt.
    let tol = salpeter::Tolerance::new(1e-300, 1e-13).unwrap();
    for x in [0.05, 0.7, 2.0, 3.3, 12.0] {
        let quad = salpeter::quadrature::integrate_semi_infinite(|t| (-x * t.cosh()).exp() * t.cosh(), tol)
            .unwrap()
            .value;
        let k1 = salpeter::bessel::bessel_k1(x).unwrap();
        assert!(((quad - k1) / k1).abs() < 1e-10, "x={x}: {quad} vs {k1}");
    }
}
