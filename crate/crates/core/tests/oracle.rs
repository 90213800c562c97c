mod common;

use salpeter::spectral::{self, GridMap, OracleGrid};
use salpeter::Solver;

use common::{gauss, regression_set, yamaguchi};

// Solver energies at m = 1, frozen from converged runs.
const REGRESSION: [(&str, f64); 6] = [
    ("exponential v=1", 0.17038052508963597),
    ("exponential v=3", -1.7836456311092623),
    ("two-term", -1.811171821469791),
    ("yamaguchi v=1", -3.213509619318472),
    ("gauss v=0.1", 0.8235681624433067),
    ("gauss v=1", -4.048929791429765),
];

#[test]
fn solver_matches_extrapolated_oracle() {
    let grid = OracleGrid::default();
    for (name, problem) in regression_set() {
        let solved = spectral::solve_ground_energy(&problem, None).unwrap().energy;
        let study = spectral::oracle_extrapolated(&problem, &grid).unwrap();
        let bound = 1e-4 * solved.abs().max(1.0);
        assert!(
            (solved - study.extrapolated).abs() <= bound,
            "{name}: solver {solved}, oracle {}",
            study.extrapolated
        );
        assert!(study.coarse.hermitian && study.fine.n_points == 2 * grid.n_points);
    }
}

#[test]
fn regression_energies_are_stable() {
    for ((name, problem), (label, expected)) in regression_set().into_iter().zip(REGRESSION) {
        assert_eq!(name, label);
        let e = spectral::solve_ground_energy(&problem, None).unwrap().energy;
        assert!((e - expected).abs() < 1e-9, "{name}: {e} vs {expected}");
    }
}

#[test]
fn free_problem_sits_at_threshold() {
    for grid in [OracleGrid::default(), OracleGrid::truncated(20.0, 400)] {
        let free = gauss(1.0, 1.0, 1.0).with_couplings_scaled(0.0);
        let e = spectral::oracle_discretized_energy(&free, &grid).unwrap().energy;
        assert!(e >= 1.0 && e - 1.0 <= grid.spacing_near_origin(), "{grid:?}: {e}");
    }
}

#[test]
fn yamaguchi_refinement_converges_monotonically() {
    let problem = yamaguchi(1.0, 1.0, 1.0);
    let exact = spectral::solve_ground_energy(&problem, None).unwrap().energy;
    let errors: Vec<f64> = [400, 800, 1600]
        .iter()
        .map(|&n| {
            let e = spectral::oracle_discretized_energy(&problem, &OracleGrid::tangent(2.0, n))
                .unwrap()
                .energy;
            (e - exact).abs()
        })
        .collect();
    assert!(errors[1] < errors[0] && errors[2] < errors[1], "{errors:?}");
}

#[test]
fn truncated_grid_resolves_gauss() {
    let problem = gauss(1.0, 1.0, 1.0);
    let exact = Solver::default().solve_ground_energy(&problem, None).unwrap().energy;
    let grid = OracleGrid::truncated(12.0, 800);
    assert!(matches!(grid.map, GridMap::Truncated { .. }));
    let e = spectral::oracle_discretized_energy(&problem, &grid).unwrap().energy;
    assert!((e - exact).abs() <= 1e-4 * exact.abs().max(1.0), "{e} vs {exact}");
}

#[test]
fn asymmetric_problem_uses_secular_fallback() {
    use salpeter::{Dimension, KineticForm, MomentumProfile, Problem, SeparableTerm};
    let problem = Problem::new(
        Dimension::OneD,
        KineticForm::salpeter(1.0),
        vec![SeparableTerm::new(
            2.0,
            MomentumProfile::Exponential1D { a: 1.0 },
            MomentumProfile::Exponential1D { a: 1.5 },
        )],
    )
    .unwrap();
    let solved = spectral::solve_ground_energy(&problem, None).unwrap().energy;
    let study = spectral::oracle_extrapolated(&problem, &OracleGrid::default()).unwrap();
    assert!(!study.fine.hermitian);
    assert!((solved - study.extrapolated).abs() <= 1e-4 * solved.abs().max(1.0));
}

#[test]
fn grid_validation() {
    let p = gauss(1.0, 1.0, 1.0);
    assert!(spectral::oracle_discretized_energy(&p, &OracleGrid::tangent(2.0, 10)).is_err());
    assert!(spectral::oracle_discretized_energy(&p, &OracleGrid::truncated(-1.0, 400)).is_err());
}
