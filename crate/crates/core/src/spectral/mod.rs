//! One-body solver for `H = K(p) + V̂` with a rank-n separable kernel.
//!
//! In momentum space the eigen equation is algebraic,
//!
//! ```text
//! ψ̃(k) = Σᵢ vᵢ cᵢ f̃ᵢ(k) / (K(k) − E),   cⱼ = ∫ g̃ⱼ ψ̃ dμ,
//! ```
//!
//! so bound states are the energies below `m` at which `det(I − J(E)) = 0`
//! with `J_ji = vᵢ ∫ g̃ⱼ f̃ᵢ dμ / (K − E)`. For a single term this reduces to
//! `1/v = ∫ f̃ g̃ dμ / (K − E)`, which is monotone in `E`.
//!
//! Energies are handled internally through the gap `m − E > 0`, so the
//! denominator `(K − m) + (m − E)` never cancels.

mod limits;
mod oracle;
mod solve;

pub use limits::{ultrarel_exponential_reciprocal_coupling, ThresholdLimit};
pub use oracle::{GridMap, OracleEnergy, OracleGrid, OracleStudy};
pub use solve::BoundState;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::kernels::{Dimension, KineticForm, MomentumProfile, Problem};
use crate::quadrature::{self, QuadratureResult, Tolerance};

/// Tunables shared by every solver entry point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub tol: Tolerance,
    /// Points of the logarithmic gap grid scanned for determinant sign changes.
    pub scan_points: usize,
    pub secant_steps: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: Tolerance::default(),
            scan_points: 400,
            secant_steps: 5,
        }
    }
}

/// `J(E)` together with the summed quadrature error of its entries.
#[derive(Debug, Clone, PartialEq)]
pub struct SecularMatrix {
    pub energy: f64,
    /// `entries[(j, i)] = vᵢ ∫ g̃ⱼ f̃ᵢ dμ / (K − E)`.
    pub entries: DMatrix<f64>,
    pub quad_error: f64,
}

impl SecularMatrix {
    pub fn rank(&self) -> usize {
        self.entries.nrows()
    }

    pub fn determinant(&self) -> f64 {
        let n = self.rank();
        (DMatrix::identity(n, n) - &self.entries).determinant()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Solver {
    pub options: SolverOptions,
}

pub(crate) fn gap_of(problem: &Problem, energy: f64) -> Result<f64> {
    let m = problem.mass();
    if !energy.is_finite() {
        return Err(Error::invalid("energy", "must be finite"));
    }
    if energy >= m {
        return Err(Error::ThresholdViolation { energy, mass: m });
    }
    Ok(m - energy)
}

/// `∫₀^∞ measure(k) f̃(k) g̃(k) / (K(k) − m + gap) dk`.
///
/// With `gap = 0` in three dimensions the `k²` of the measure is cancelled
/// analytically against `K − m`.
pub(crate) fn overlap(
    dimension: Dimension,
    kinetic: &KineticForm,
    f: &MomentumProfile,
    g: &MomentumProfile,
    gap: f64,
    tol: Tolerance,
) -> Result<QuadratureResult> {
    let same = f.same_as(g);
    let weight = move |k: f64| -> f64 {
        if gap == 0.0 && dimension == Dimension::ThreeD {
            4.0 * std::f64::consts::PI * kinetic.k2_over_excess(k)
        } else {
            dimension.measure(k) / (kinetic.excess(k) + gap)
        }
    };
    quadrature::try_integrate_semi_infinite(
        |k| {
            let fk = f.eval(k)?;
            let gk = if same { fk } else { g.eval(k)? };
            Ok(weight(k) * fk * gk)
        },
        tol,
    )
}

/// `∫ |f̃ g̃| dμ`, the overlap with the kinetic denominator removed.
pub(crate) fn plain_overlap(
    dimension: Dimension,
    f: &MomentumProfile,
    g: &MomentumProfile,
    tol: Tolerance,
) -> Result<QuadratureResult> {
    quadrature::try_integrate_semi_infinite(
        |k| Ok(dimension.measure(k) * (f.eval(k)? * g.eval(k)?).abs()),
        tol,
    )
}

fn require_single_term(problem: &Problem) -> Result<()> {
    if problem.rank() != 1 {
        return Err(Error::invalid(
            "terms",
            format!("single-term problem required, got {} terms", problem.rank()),
        ));
    }
    Ok(())
}

impl Solver {
    pub fn new(options: SolverOptions) -> Self {
        Solver { options }
    }

    pub fn with_tolerance(tol: Tolerance) -> Self {
        Solver {
            options: SolverOptions {
                tol,
                ..SolverOptions::default()
            },
        }
    }

    pub(crate) fn reciprocal_coupling_at_gap(&self, problem: &Problem, gap: f64) -> Result<QuadratureResult> {
        let term = &problem.terms[0];
        overlap(
            problem.dimension,
            &problem.kinetic,
            &term.f,
            &term.g,
            gap,
            self.options.tol,
        )
    }

    /// The value of `1/v` at which a single-term problem has eigenvalue `energy`.
    pub fn reciprocal_coupling(&self, problem: &Problem, energy: f64) -> Result<f64> {
        require_single_term(problem)?;
        let gap = gap_of(problem, energy)?;
        Ok(self.reciprocal_coupling_at_gap(problem, gap)?.value)
    }

    pub(crate) fn j_matrix_at_gap(&self, problem: &Problem, gap: f64) -> Result<(DMatrix<f64>, f64)> {
        let n = problem.rank();
        let mut entries = DMatrix::zeros(n, n);
        let mut error = 0.0;
        for j in 0..n {
            for i in 0..n {
                let q = overlap(
                    problem.dimension,
                    &problem.kinetic,
                    &problem.terms[j].g,
                    &problem.terms[i].f,
                    gap,
                    self.options.tol,
                )?;
                let v = problem.terms[i].v;
                entries[(j, i)] = v * q.value;
                error += v * q.error_estimate;
            }
        }
        Ok((entries, error))
    }

    pub fn j_matrix(&self, problem: &Problem, energy: f64) -> Result<SecularMatrix> {
        let gap = gap_of(problem, energy)?;
        let (entries, quad_error) = self.j_matrix_at_gap(problem, gap)?;
        Ok(SecularMatrix {
            energy,
            entries,
            quad_error,
        })
    }

    pub(crate) fn determinant_at_gap(&self, problem: &Problem, gap: f64) -> Result<f64> {
        let (j, _) = self.j_matrix_at_gap(problem, gap)?;
        let n = problem.rank();
        Ok((DMatrix::identity(n, n) - j).determinant())
    }

    /// `det(I − J(E))`.
    pub fn secular_determinant(&self, problem: &Problem, energy: f64) -> Result<f64> {
        let gap = gap_of(problem, energy)?;
        self.determinant_at_gap(problem, gap)
    }
}

pub fn reciprocal_coupling(problem: &Problem, energy: f64) -> Result<f64> {
    Solver::default().reciprocal_coupling(problem, energy)
}

pub fn j_matrix(problem: &Problem, energy: f64) -> Result<SecularMatrix> {
    Solver::default().j_matrix(problem, energy)
}

pub fn secular_determinant(problem: &Problem, energy: f64) -> Result<f64> {
    Solver::default().secular_determinant(problem, energy)
}

pub fn solve_ground_energy(problem: &Problem, coupling_scale: Option<f64>) -> Result<BoundState> {
    Solver::default().solve_ground_energy(problem, coupling_scale)
}

pub fn bound_state_energies(problem: &Problem) -> Result<Vec<f64>> {
    Solver::default().bound_state_energies(problem)
}

pub fn consistency_residual(state: &BoundState, problem: &Problem) -> Result<f64> {
    Solver::default().consistency_residual(state, problem)
}

pub fn critical_threshold(problem: &Problem) -> Result<ThresholdLimit> {
    Solver::default().critical_threshold(problem)
}

pub fn infinite_mass_energy(problem: &Problem) -> Result<f64> {
    Solver::default().infinite_mass_energy(problem)
}

pub fn oracle_discretized_energy(problem: &Problem, grid: &OracleGrid) -> Result<OracleEnergy> {
    oracle::discretized_energy(problem, grid)
}

pub fn oracle_extrapolated(problem: &Problem, grid: &OracleGrid) -> Result<OracleStudy> {
    oracle::extrapolated(problem, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{KineticForm, SeparableTerm};
    use std::f64::consts::PI;

    fn exp_problem(v: f64, a: f64, m: f64) -> Problem {
        Problem::new(
            Dimension::OneD,
            KineticForm::salpeter(m),
            vec![SeparableTerm::symmetric(v, MomentumProfile::Exponential1D { a })],
        )
        .unwrap()
    }

    pub(crate) fn two_term(m: f64) -> Problem {
        Problem::new(
            Dimension::OneD,
            KineticForm::salpeter(m),
            vec![
                SeparableTerm::symmetric(1.0, MomentumProfile::Exponential1D { a: 1.0 }),
                SeparableTerm::symmetric(1.0, MomentumProfile::Exponential1D { a: 2.0 }),
            ],
        )
        .unwrap()
    }

    // Composite Simpson on a mapped grid k = t/(1−t); independent of the
    // adaptive Gauss–Kronrod path.
    fn simpson_half_line(f: impl Fn(f64) -> f64, n: usize) -> f64 {
        let h = 1.0 / n as f64;
        let mut s = 0.0;
        for i in 0..=n {
            let t = i as f64 * h;
            let val = if i == n {
                0.0
            } else {
                let k = t / (1.0 - t);
                f(k) / (1.0 - t).powi(2)
            };
            let w = if i == 0 || i == n {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            s += w * val;
        }
        s * h / 3.0
    }

    #[test]
    fn simpson_oracle_reciprocal_coupling_exponential() {
        // (4/π) ∫₀^∞ dk / ((1+k²)² (√(1+k²)+1)) at m=1, E=−1.
        let oracle = 4.0 / PI
            * simpson_half_line(|k| 1.0 / ((1.0 + k * k).powi(2) * ((1.0 + k * k).sqrt() + 1.0)), 20000);
        assert!((oracle - 0.453520910530).abs() < 1e-9, "oracle {oracle}");
        let got = reciprocal_coupling(&exp_problem(1.0, 1.0, 1.0), -1.0).unwrap();
        assert!((got - oracle).abs() < 1e-9, "{got} vs {oracle}");
    }

    #[test]
    fn closed_specialisations() {
        // 1D exponential: (4a²/π) ∫₀^∞ dk/((1+a²k²)²(K−E)); check a=2 via Simpson.
        let a: f64 = 2.0;
        let (m, e) = (0.7, -0.4);
        let oracle = 4.0 * a * a / PI
            * simpson_half_line(|k| 1.0 / ((1.0 + a * a * k * k).powi(2) * ((m * m + k * k).sqrt() - e)), 20000);
        let got = reciprocal_coupling(&exp_problem(1.0, a, m), e).unwrap();
        assert!((got - oracle).abs() < 1e-8 * oracle);

        // Yamaguchi: 8 ∫₀^∞ k² dk / ((k²+β²)²(K−E)).
        let beta: f64 = 1.3;
        let yam = Problem::new(
            Dimension::ThreeD,
            KineticForm::salpeter(m),
            vec![SeparableTerm::symmetric(1.0, MomentumProfile::Yamaguchi3D { beta })],
        )
        .unwrap();
        let oracle = 8.0
            * simpson_half_line(|k| k * k / ((k * k + beta * beta).powi(2) * ((m * m + k * k).sqrt() - e)), 20000);
        let got = reciprocal_coupling(&yam, e).unwrap();
        assert!((got - oracle).abs() < 1e-8 * oracle, "{got} vs {oracle}");

        // Gauss: (4π/β³) ∫₀^∞ e^(−k²/β) k² dk / (K−E).
        let gauss = Problem::new(
            Dimension::ThreeD,
            KineticForm::salpeter(m),
            vec![SeparableTerm::symmetric(1.0, MomentumProfile::Gauss3D { beta })],
        )
        .unwrap();
        let oracle = 4.0 * PI / beta.powi(3)
            * simpson_half_line(|k| (-k * k / beta).exp() * k * k / ((m * m + k * k).sqrt() - e), 20000);
        let got = reciprocal_coupling(&gauss, e).unwrap();
        assert!((got - oracle).abs() < 1e-8 * oracle);
    }

    #[test]
    fn two_term_j_matrix_entries() {
        let d = |k: f64| (1.0 + k * k).sqrt() + 1.0;
        let j11 = 4.0 / PI * simpson_half_line(|k| 1.0 / ((1.0 + k * k).powi(2) * d(k)), 20000);
        let j22 = 16.0 / PI * simpson_half_line(|k| 1.0 / ((1.0 + 4.0 * k * k).powi(2) * d(k)), 20000);
        let j12 = 8.0 / PI
            * simpson_half_line(|k| 1.0 / ((1.0 + k * k) * (1.0 + 4.0 * k * k) * d(k)), 20000);
        assert!((j11 - 0.453520910530).abs() < 1e-9);
        assert!((j22 - 0.964555553199).abs() < 1e-9);
        assert!((j12 - 0.628451372507).abs() < 1e-9);

        let m = j_matrix(&two_term(1.0), -1.0).unwrap();
        assert!((m.entries[(0, 0)] - j11).abs() < 1e-9);
        assert!((m.entries[(1, 1)] - j22).abs() < 1e-9);
        assert!((m.entries[(0, 1)] - j12).abs() < 1e-9);
        assert!((m.entries[(1, 0)] - j12).abs() < 1e-9);
        assert!(m.quad_error >= 0.0);
        let det = m.determinant();
        assert!((det - ((1.0 - j11) * (1.0 - j22) - j12 * j12)).abs() < 1e-9);
    }

    #[test]
    fn j_columns_scale_with_couplings() {
        let p = two_term(1.0);
        let mut q = p.clone();
        q.terms[0].v = 2.5;
        q.terms[1].v = 0.3;
        let a = j_matrix(&p, -0.5).unwrap().entries;
        let b = j_matrix(&q, -0.5).unwrap().entries;
        for j in 0..2 {
            assert!((b[(j, 0)] - 2.5 * a[(j, 0)]).abs() < 1e-14);
            assert!((b[(j, 1)] - 0.3 * a[(j, 1)]).abs() < 1e-14);
        }
    }

    #[test]
    fn single_term_j_is_coupling_times_integral() {
        let p = exp_problem(1.7, 1.0, 1.0);
        let j = j_matrix(&p, -0.3).unwrap();
        let r = reciprocal_coupling(&p, -0.3).unwrap();
        assert!((j.entries[(0, 0)] - 1.7 * r).abs() < 1e-14);
        let det = secular_determinant(&p, -0.3).unwrap();
        assert!((det - (1.0 - 1.7 * r)).abs() < 1e-14);
    }

    #[test]
    fn determinant_tends_to_one_far_below() {
        let det = secular_determinant(&two_term(1.0), -1e8).unwrap();
        assert!((det - 1.0).abs() < 1e-7);
    }

    #[test]
    fn very_deep_energy_bounds_the_integral() {
        let p = exp_problem(1.0, 1.0, 1.0);
        let plain = plain_overlap(Dimension::OneD, &p.terms[0].f, &p.terms[0].g, Tolerance::default())
            .unwrap()
            .value;
        let r = reciprocal_coupling(&p, 1.0 - 1e6).unwrap();
        assert!(r <= plain / 1e6);
    }

    #[test]
    fn threshold_and_rank_errors() {
        let p = exp_problem(1.0, 1.0, 1.0);
        assert!(matches!(
            reciprocal_coupling(&p, 1.0),
            Err(Error::ThresholdViolation { .. })
        ));
        assert!(matches!(
            reciprocal_coupling(&two_term(1.0), 0.0),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(matches!(
            j_matrix(&p, 2.0),
            Err(Error::ThresholdViolation { .. })
        ));
    }

    #[test]
    fn entries_increase_with_energy() {
        let p = two_term(0.5);
        let lo = j_matrix(&p, -2.0).unwrap().entries;
        let hi = j_matrix(&p, -0.5).unwrap().entries;
        for (a, b) in lo.iter().zip(hi.iter()) {
            assert!(b > a);
        }
    }
}
