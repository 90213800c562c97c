use rayon::prelude::*;
use salpeter::nboson;
use salpeter::spectral::{self, GridMap, OracleGrid, ThresholdLimit};
use salpeter::{Problem, Solver, Tolerance};

use crate::config::ProblemConfig;
use crate::discrepancy::Finding;
use crate::error::{core_exit_code, CliError};
use crate::report::{fmt_num, Convention, OracleLevel, OracleReport, SolveReport, Table};

/// Inclusive, evenly spaced sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Range {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

impl Range {
    pub fn new(name: &str, min: f64, max: f64, steps: usize) -> Result<Self, CliError> {
        if !(min.is_finite() && max.is_finite() && min < max) {
            return Err(CliError::Config(format!("{name} range needs min < max, got [{min}, {max}]")));
        }
        if steps < 2 {
            return Err(CliError::Config(format!("{name} sweep needs at least 2 steps")));
        }
        Ok(Range { min, max, steps })
    }

    pub fn points(&self) -> Vec<f64> {
        let n = (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.max
                } else {
                    self.min + (self.max - self.min) * i as f64 / n
                }
            })
            .collect()
    }
}

/// A command's output together with anything that went wrong along the way.
#[derive(Debug)]
pub struct Outcome<T> {
    pub value: T,
    /// Set when some sweep points failed; `value` is still complete.
    pub failure: Option<CliError>,
    pub findings: Vec<Finding>,
}

impl<T> Outcome<T> {
    fn clean(value: T) -> Self {
        Outcome {
            value,
            failure: None,
            findings: Vec::new(),
        }
    }
}

fn halved(problem: &Problem) -> Problem {
    problem.with_couplings_scaled(0.5)
}

fn energy_or_none(solver: &Solver, problem: &Problem) -> Result<Option<f64>, CliError> {
    match solver.solve_ground_energy(problem, None) {
        Ok(s) => Ok(Some(s.energy)),
        Err(salpeter::Error::NoBoundState { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn convention_finding(what: &str, conv: &Convention) -> Finding {
    let show = |e: Option<f64>| e.map(fmt_num).unwrap_or_else(|| "unbound".into());
    Finding {
        title: format!("{what}: reference energy {}", fmt_num(conv.reference_energy)),
        body: format!(
            "- couplings as given: E = {}\n- couplings halved: E = {}\n- matching convention (within {}): {}",
            show(conv.as_given_energy),
            show(conv.halved_energy),
            Convention::TOLERANCE,
            conv.matches
        ),
    }
}

fn summarize(failures: &[salpeter::Error], total: usize) -> Option<CliError> {
    let first = failures.first()?;
    let code = if failures.iter().all(|e| core_exit_code(e) == 2) {
        2
    } else {
        core_exit_code(first).max(2)
    };
    Some(CliError::PartialSweep {
        failed: failures.len(),
        total,
        code,
    })
}

pub fn solve(config: &ProblemConfig, tol: Tolerance) -> Result<Outcome<SolveReport>, CliError> {
    let problem = config.to_problem()?;
    let solver = Solver::with_tolerance(tol);
    let state = solver.solve_ground_energy(&problem, None)?;
    let residual = solver.consistency_residual(&state, &problem)?;
    let mut findings = Vec::new();
    let convention = match config.reference_energy {
        Some(reference) => {
            let conv = Convention::judge(
                reference,
                Some(state.energy),
                energy_or_none(&solver, &halved(&problem))?,
            );
            findings.push(convention_finding("solve", &conv));
            Some(conv)
        }
        None => None,
    };
    let report = SolveReport {
        energy: state.energy,
        binding: state.binding,
        coefficients: state.coefficients.clone(),
        det_residual: state.det_residual,
        consistency_residual: residual,
        quad_error: state.quad_error,
        iterations: state.iterations,
        convention,
    }
    .rounded();
    Ok(Outcome {
        value: report,
        failure: None,
        findings,
    })
}

pub fn sweep_mass(config: &ProblemConfig, tol: Tolerance, range: Range) -> Result<Outcome<Table>, CliError> {
    if range.min < 0.0 {
        return Err(CliError::Config("mass sweep needs m_min >= 0".into()));
    }
    let problem = config.to_problem()?;
    let solver = Solver::with_tolerance(tol);
    let points = range.points();
    let results: Vec<Result<(f64, f64), salpeter::Error>> = points
        .par_iter()
        .map(|&m| {
            let p = problem.with_mass(m);
            p.validate()?;
            let s = solver.solve_ground_energy(&p, None)?;
            Ok((s.energy, s.binding))
        })
        .collect();
    let mut table = Table::new(&["m", "E", "E_minus_m"]);
    let mut failures = Vec::new();
    for (m, r) in points.iter().zip(results) {
        match r {
            Ok((e, b)) => table.rows.push(vec![Some(*m), Some(e), Some(b)]),
            Err(err) => {
                table.rows.push(vec![Some(*m), None, None]);
                failures.push(err);
            }
        }
    }
    Ok(Outcome {
        value: table.rounded(),
        failure: summarize(&failures, points.len()),
        findings: Vec::new(),
    })
}

/// `1/v(E)` for single-term problems, `det(I − J(E))` otherwise.
pub fn coupling_curve(
    config: &ProblemConfig,
    tol: Tolerance,
    e_min: Option<f64>,
    e_max: Option<f64>,
    steps: usize,
) -> Result<Outcome<Table>, CliError> {
    let problem = config.to_problem()?;
    let m = problem.mass();
    let scale = m.abs().max(1.0);
    let range = Range::new(
        "energy",
        e_min.unwrap_or(m - 5.0 * scale),
        e_max.unwrap_or(m - 1e-3 * scale),
        steps,
    )?;
    if range.max >= m {
        return Err(CliError::Config(format!("energies must stay below m = {m}")));
    }
    let solver = Solver::with_tolerance(tol);
    let single = problem.rank() == 1;
    let points = range.points();
    let values: Vec<Result<f64, salpeter::Error>> = points
        .par_iter()
        .map(|&e| {
            if single {
                solver.reciprocal_coupling(&problem, e)
            } else {
                solver.secular_determinant(&problem, e)
            }
        })
        .collect();
    let mut table = if single {
        Table::new(&["E", "E_minus_m", "reciprocal_coupling", "coupling"])
    } else {
        Table::new(&["E", "E_minus_m", "det"])
    };
    let mut failures = Vec::new();
    for (e, v) in points.iter().zip(values) {
        let mut row = vec![Some(*e), Some(*e - m)];
        match v {
            Ok(v) if single => row.extend([Some(v), Some(1.0 / v)]),
            Ok(v) => row.push(Some(v)),
            Err(err) => {
                row.resize(table.columns.len(), None);
                failures.push(err);
            }
        }
        table.rows.push(row);
    }
    Ok(Outcome {
        value: table.rounded(),
        failure: summarize(&failures, points.len()),
        findings: Vec::new(),
    })
}

pub fn nboson(range: Range, extra_lambda: Option<f64>) -> Result<Outcome<Table>, CliError> {
    if range.min <= 0.0 {
        return Err(CliError::Config("scaled coupling sweep needs u_min > 0".into()));
    }
    if let Some(l) = extra_lambda {
        if !(0.5..=1.0).contains(&l) {
            return Err(CliError::Config(format!("lambda must lie in [1/2, 1], got {l}")));
        }
    }
    let mut lambdas = vec![0.5, 1.0];
    let mut columns = vec!["u", "lower_pp", "lower_bound", "upper_pp_half", "s_star_half", "upper_pp_one", "s_star_one"];
    if let Some(l) = extra_lambda {
        lambdas.push(l);
        columns.extend(["upper_pp_lambda", "s_star_lambda"]);
    }
    let points = range.points();
    let rows: Vec<(Vec<Option<f64>>, Vec<salpeter::Error>)> = points
        .par_iter()
        .map(|&u| {
            let mut errors = Vec::new();
            let mut row = vec![Some(u)];
            match nboson::lower_bound_for(u, 1.0, 1.0) {
                Ok(lb) => row.extend([Some(lb.energy_pp), Some(if lb.bound { 1.0 } else { 0.0 })]),
                Err(e) => {
                    row.extend([None, None]);
                    errors.push(e);
                }
            }
            for &l in &lambdas {
                match nboson::upper_bound_for(u, l) {
                    Ok(ub) => row.extend([Some(ub.energy_pp), Some(ub.s_star)]),
                    Err(e) => {
                        row.extend([None, None]);
                        errors.push(e);
                    }
                }
            }
            (row, errors)
        })
        .collect();
    let mut table = Table::new(&columns);
    let mut failures = Vec::new();
    for (row, errors) in rows {
        table.rows.push(row);
        failures.extend(errors.into_iter().take(1));
    }

    let mut findings = Vec::new();
    if let Ok(p) = nboson::bounds_point(1.0, 0.5) {
        findings.push(Finding {
            title: "N = 2 bounds at u = 1".into(),
            body: format!(
                "- per particle: lower {}, upper {} (s* = {})\n- two-particle totals: lower {}, upper {}\n- quoted pair -2.56844 / -2.5651 reads as two-particle totals",
                fmt_num(p.lower_pp),
                fmt_num(p.upper_pp),
                fmt_num(p.s_star),
                fmt_num(2.0 * p.lower_pp),
                fmt_num(2.0 * p.upper_pp),
            ),
        });
    }
    Ok(Outcome {
        value: table.rounded(),
        failure: summarize(&failures, points.len()),
        findings,
    })
}

/// Threshold data of a single-term config, or the N-boson `u_c` without one.
pub fn critical(config: Option<&ProblemConfig>, tol: Tolerance) -> Result<Outcome<Table>, CliError> {
    let Some(config) = config else {
        let uc = nboson::critical_u()?;
        let mut table = Table::new(&["u_c", "reciprocal_u_c"]);
        table.rows.push(vec![Some(uc), Some(1.0 / uc)]);
        let mut out = Outcome::clean(table.rounded());
        out.findings.push(Finding {
            title: "critical scaled coupling".into(),
            body: format!(
                "- computed u_c = {}\n- quoted u_c = 0.527485, difference {}",
                fmt_num(uc),
                fmt_num(uc - 0.527485)
            ),
        });
        return Ok(out);
    };
    let problem = config.to_problem()?;
    let mut table = Table::new(&["reciprocal_coupling", "critical_coupling", "diverges"]);
    match Solver::with_tolerance(tol).critical_threshold(&problem)? {
        ThresholdLimit::Finite {
            reciprocal_coupling,
            critical_coupling,
        } => table.rows.push(vec![Some(reciprocal_coupling), Some(critical_coupling), Some(0.0)]),
        ThresholdLimit::DivergesAtThreshold => table.rows.push(vec![None, Some(0.0), Some(1.0)]),
    }
    Ok(Outcome::clean(table.rounded()))
}

pub fn oracle(config: &ProblemConfig, tol: Tolerance, grid: OracleGrid) -> Result<Outcome<OracleReport>, CliError> {
    let problem = config.to_problem_allowing_free()?;
    let study = spectral::oracle_extrapolated(&problem, &grid)?;
    let solver = Solver::with_tolerance(tol);
    let free = problem.terms.iter().any(|t| t.v == 0.0);
    let solver_energy = if free { None } else { energy_or_none(&solver, &problem)? };
    let mut findings = Vec::new();
    let convention = match config.reference_energy {
        Some(reference) if !free => {
            let half = spectral::oracle_extrapolated(&halved(&problem), &grid)?;
            let conv = Convention::judge(reference, Some(study.extrapolated), Some(half.extrapolated));
            findings.push(convention_finding("oracle", &conv));
            Some(conv)
        }
        _ => None,
    };
    let grid_label = match grid.map {
        GridMap::Truncated { k_max } => format!("truncated(k_max={k_max})"),
        GridMap::Tangent { scale } => format!("tangent(scale={scale})"),
    };
    let r = crate::report::round12;
    let report = OracleReport {
        grid: grid_label,
        hermitian: study.fine.hermitian,
        coarse: OracleLevel {
            n_points: study.coarse.n_points,
            energy: r(study.coarse.energy),
        },
        fine: OracleLevel {
            n_points: study.fine.n_points,
            energy: r(study.fine.energy),
        },
        extrapolated: r(study.extrapolated),
        solver_energy: solver_energy.map(r),
        deviation: solver_energy.map(|e| r(study.extrapolated - e)),
        convention,
    };
    Ok(Outcome {
        value: report,
        failure: None,
        findings,
    })
}
