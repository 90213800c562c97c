use nalgebra::DMatrix;
use rayon::prelude::*;

use super::{gap_of, plain_overlap, Solver};
use crate::error::{Error, Result};
use crate::kernels::Problem;
use crate::quadrature;
use crate::roots::{bisect_secant, Root};
use crate::spectral::ThresholdLimit;

/// A solved bound state.
///
/// The coefficients are scaled so that the momentum wavefunction is unit
/// normalised, with the phase fixed by `c₁ > 0`.
#[derive(Debug, Clone)]
pub struct BoundState {
    pub energy: f64,
    /// `E − m`, computed directly from the gap.
    pub binding: f64,
    pub coefficients: Vec<f64>,
    /// Factor applied to the unit null vector of `I − J` to normalise `ψ̃`.
    pub norm_constant: f64,
    pub det_residual: f64,
    pub quad_error: f64,
    pub iterations: usize,
    problem: Problem,
    gap: f64,
}

impl BoundState {
    /// `ψ̃(k) = Σᵢ vᵢ f̃ᵢ(k) cᵢ / (K(k) − E)`.
    pub fn psi_momentum(&self, k: f64) -> Result<f64> {
        let mut numerator = 0.0;
        for (term, c) in self.problem.terms.iter().zip(&self.coefficients) {
            numerator += term.v * term.f.eval(k)? * c;
        }
        Ok(numerator / (self.problem.kinetic.excess(k) + self.gap))
    }

    /// `∫ |ψ̃|² dμ`.
    pub fn norm_squared(&self, tol: quadrature::Tolerance) -> Result<f64> {
        let dim = self.problem.dimension;
        Ok(quadrature::try_integrate_semi_infinite(
            |k| {
                let psi = self.psi_momentum(k)?;
                Ok(dim.measure(k) * psi * psi)
            },
            tol,
        )?
        .value)
    }

    /// Same coefficients evaluated against a different energy. Used to probe
    /// how sharply the self-consistency check discriminates.
    pub fn with_energy(&self, energy: f64) -> Result<BoundState> {
        let gap = gap_of(&self.problem, energy)?;
        Ok(BoundState {
            energy,
            binding: -gap,
            gap,
            ..self.clone()
        })
    }

    pub fn problem(&self) -> &Problem {
        &self.problem
    }
}

impl Solver {
    fn width_tolerance(mass: f64) -> impl Fn(f64) -> f64 {
        move |gap: f64| 1e-12 * (mass - gap).abs().max(1.0)
    }

    /// Smallest gap probed near threshold.
    fn threshold_offset(mass: f64) -> f64 {
        1e-9 * mass.max(1.0)
    }

    /// Largest gap at which a root can exist: beyond it every eigenvalue of
    /// `J` is below one in magnitude.
    fn gap_ceiling(&self, problem: &Problem) -> Result<f64> {
        let n = problem.rank();
        let mut frobenius = 0.0;
        for j in 0..n {
            for i in 0..n {
                let q = plain_overlap(
                    problem.dimension,
                    &problem.terms[j].g,
                    &problem.terms[i].f,
                    self.options.tol,
                )?;
                let entry = problem.terms[i].v * q.value;
                frobenius += entry * entry;
            }
        }
        Ok(1.001 * frobenius.sqrt())
    }

    /// All real roots `E < m` of `det(I − J(E))`, lowest first.
    pub fn bound_state_energies(&self, problem: &Problem) -> Result<Vec<f64>> {
        problem.validate()?;
        let m = problem.mass();
        Ok(self
            .determinant_roots(problem)?
            .into_iter()
            .map(|r| m - r.x)
            .collect())
    }

    /// Roots in the gap variable, largest gap (lowest energy) first.
    fn determinant_roots(&self, problem: &Problem) -> Result<Vec<Root>> {
        let m = problem.mass();
        let lo = Self::threshold_offset(m);
        let hi = self.gap_ceiling(problem)?.max(2.0 * lo);
        let n = self.options.scan_points.max(2);
        let ratio = (hi / lo).ln() / (n - 1) as f64;
        let gaps: Vec<f64> = (0..n).map(|i| lo * (ratio * i as f64).exp()).collect();
        let values: Vec<f64> = gaps
            .par_iter()
            .map(|&gap| self.determinant_at_gap(problem, gap))
            .collect::<Result<_>>()?;

        let mut roots = Vec::new();
        for i in (0..n - 1).rev() {
            let (a, b) = (gaps[i], gaps[i + 1]);
            let (fa, fb) = (values[i], values[i + 1]);
            if fb == 0.0 {
                roots.push(Root { x: b, fx: 0.0, iterations: 0 });
                continue;
            }
            if fa.signum() != fb.signum() && fa != 0.0 {
                let root = bisect_secant(
                    |gap| self.determinant_at_gap(problem, gap),
                    a,
                    b,
                    fa,
                    fb,
                    Self::width_tolerance(m),
                    self.options.secant_steps,
                )?;
                roots.push(root);
            }
        }
        Ok(roots)
    }

    /// Inverts the monotone coupling relation of a single-term problem.
    fn invert_single_term(&self, problem: &Problem) -> Result<Root> {
        let m = problem.mass();
        let target = 1.0 / problem.terms[0].v;
        if let ThresholdLimit::Finite {
            reciprocal_coupling,
            critical_coupling,
        } = self.critical_threshold(problem)?
        {
            if target >= reciprocal_coupling {
                return Err(Error::NoBoundState {
                    reason: format!(
                        "coupling {} is below the critical coupling v_c = {critical_coupling}",
                        problem.terms[0].v
                    ),
                    critical_coupling: Some(critical_coupling),
                });
            }
        }
        let h = |gap: f64| -> Result<f64> { Ok(self.reciprocal_coupling_at_gap(problem, gap)?.value - target) };
        let lo = Self::threshold_offset(m);
        let f_lo = h(lo)?;
        if f_lo <= 0.0 {
            return Err(Error::NoBoundState {
                reason: format!("binding energy below the threshold resolution {lo:e}"),
                critical_coupling: None,
            });
        }
        let mut hi = self.gap_ceiling(problem)?.max(2.0 * lo);
        let mut f_hi = h(hi)?;
        let mut expansions = 0;
        while f_hi > 0.0 {
            expansions += 1;
            if expansions > 200 {
                return Err(Error::ConvergenceFailure {
                    context: "energy bracket expansion",
                    best: m - hi,
                    error: f64::INFINITY,
                });
            }
            hi *= 2.0;
            f_hi = h(hi)?;
        }
        let mut root = bisect_secant(h, lo, hi, f_lo, f_hi, Self::width_tolerance(m), self.options.secant_steps)?;
        root.iterations += expansions + 2;
        Ok(root)
    }

    /// Ground state: the lowest real root of the secular equation.
    ///
    /// Reality of the roots is only guaranteed for symmetric terms (`f = g`);
    /// asymmetric problems report whatever real roots exist below `m`.
    pub fn solve_ground_energy(&self, problem: &Problem, coupling_scale: Option<f64>) -> Result<BoundState> {
        let scaled;
        let problem = match coupling_scale {
            Some(s) => {
                scaled = problem.with_couplings_scaled(s);
                &scaled
            }
            None => problem,
        };
        problem.validate()?;
        let root = if problem.rank() == 1 {
            self.invert_single_term(problem)?
        } else {
            let roots = self.determinant_roots(problem)?;
            match roots.into_iter().next() {
                Some(r) => r,
                None => {
                    return Err(Error::NoBoundState {
                        reason: "secular determinant has no sign change below threshold".into(),
                        critical_coupling: None,
                    })
                }
            }
        };
        self.bound_state_at_gap(problem, root.x, root.iterations)
    }

    fn bound_state_at_gap(&self, problem: &Problem, gap: f64, iterations: usize) -> Result<BoundState> {
        let m = problem.mass();
        let n = problem.rank();
        let (j, quad_error) = self.j_matrix_at_gap(problem, gap)?;
        let a = DMatrix::identity(n, n) - &j;
        let det_residual = a.determinant();

        let mut c = null_direction(&a);
        let pivot = c.iter().copied().find(|x| x.abs() > 1e-12).unwrap_or(1.0);
        if pivot < 0.0 {
            c.iter_mut().for_each(|x| *x = -*x);
        }
        let mut state = BoundState {
            energy: m - gap,
            binding: -gap,
            coefficients: c,
            norm_constant: 1.0,
            det_residual,
            quad_error,
            iterations,
            problem: problem.clone(),
            gap,
        };
        let norm2 = state.norm_squared(self.options.tol)?;
        let scale = 1.0 / norm2.sqrt();
        state.coefficients.iter_mut().for_each(|x| *x *= scale);
        state.norm_constant = scale;
        Ok(state)
    }

    /// Recomputes `cᵢ = ∫ g̃ᵢ ψ̃ dμ` and returns the largest deviation from the
    /// stored coefficients, relative to the largest coefficient.
    pub fn consistency_residual(&self, state: &BoundState, problem: &Problem) -> Result<f64> {
        if state.coefficients.len() != problem.rank() {
            return Err(Error::invalid("state", "coefficient count does not match problem rank"));
        }
        let dim = problem.dimension;
        let scale = state
            .coefficients
            .iter()
            .fold(0.0f64, |acc, c| acc.max(c.abs()));
        let mut worst = 0.0f64;
        for (term, c) in problem.terms.iter().zip(&state.coefficients) {
            let recomputed = quadrature::try_integrate_semi_infinite(
                |k| Ok(dim.measure(k) * term.g.eval(k)? * state.psi_momentum(k)?),
                self.options.tol,
            )?
            .value;
            worst = worst.max((recomputed - c).abs() / scale);
        }
        Ok(worst)
    }
}

/// Unit right-singular vector of the smallest singular value.
fn null_direction(a: &DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    if n == 1 {
        return vec![1.0];
    }
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V^T");
    let (idx, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|x, y| x.1.total_cmp(y.1))
        .expect("non-empty");
    v_t.row(idx).iter().copied().collect()
}
