//! Energy bounds for N identical bosons with the pairwise Gauss kernel
//! `−v e^(−β(r² + r′²)/2)`.
//!
//! * Lower bound: boson symmetry reduces `⟨H⟩` to `N` times a one-body
//!   Salpeter problem with coupling `(N−1)v/2`, so `E_L/N` solves
//!   `1/((N−1)v) = (2π/β³) ∫₀^∞ e^(−k²/β) k² dk / (√(m²+k²) − E_L/N)`.
//!   It depends on `N` and `v` only through `u = (N−1)v`.
//! * Upper bound: a product Gaussian in Jacobi relative coordinates with scale
//!   `s`, giving (for `m = β = 1`)
//!   `E_U/N = √(2/π) min_s [g(s²)/s − 8uπ² (2λs²)^{3/2}/(1 + 4λs²)³]`,
//!   `g(x) = x eˣ K₁(x)`, `λ = (N−1)/N`.
//!
//! Energies are per particle throughout.

use std::f64::consts::{FRAC_2_PI, PI};

use nalgebra::DMatrix;

use crate::bessel::bessel_k1_scaled;
use crate::error::{Error, Result};
use crate::kernels::{Dimension, KineticForm, MomentumProfile, Problem, SeparableTerm};
use crate::quadrature::{self, Tolerance};
use crate::spectral::{Solver, ThresholdLimit};

const GOLDEN: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BosonSystem {
    pub particles: u32,
    pub coupling: f64,
    pub mass: f64,
    pub beta: f64,
}

impl BosonSystem {
    /// `m = β = 1`.
    pub fn canonical(particles: u32, coupling: f64) -> Self {
        BosonSystem {
            particles,
            coupling,
            mass: 1.0,
            beta: 1.0,
        }
    }

    pub fn lambda(&self) -> f64 {
        let n = self.particles as f64;
        (n - 1.0) / n
    }

    pub fn scaled_coupling(&self) -> f64 {
        (self.particles as f64 - 1.0) * self.coupling
    }

    pub fn validate(&self) -> Result<()> {
        if self.particles < 2 {
            return Err(Error::invalid("N", "at least two particles are required"));
        }
        if !(self.coupling.is_finite() && self.coupling > 0.0) {
            return Err(Error::invalid("v", "coupling must be finite and > 0"));
        }
        if !(self.mass.is_finite() && self.mass >= 0.0) {
            return Err(Error::invalid("mass", "must be finite and >= 0"));
        }
        if !(self.beta.is_finite() && self.beta > 0.0) {
            return Err(Error::invalid("beta", "must be finite and > 0"));
        }
        Ok(())
    }

    fn is_canonical(&self) -> bool {
        self.mass == 1.0 && self.beta == 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LowerBound {
    pub energy_pp: f64,
    /// `false` when the reduced one-body problem has no bound state; the
    /// bound is then the free threshold `m`.
    pub bound: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UpperBound {
    pub energy_pp: f64,
    pub s_star: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundsPoint {
    pub u: f64,
    pub lambda: f64,
    pub lower_pp: f64,
    pub lower_bound_state: bool,
    pub upper_pp: f64,
    pub s_star: f64,
}

/// One-body Gauss problem whose ground state is `E_L/N`.
fn reduced_problem(mass: f64, beta: f64, u: f64) -> Result<Problem> {
    Problem::new(
        Dimension::ThreeD,
        KineticForm::salpeter(mass),
        vec![SeparableTerm::symmetric(0.5 * u, MomentumProfile::Gauss3D { beta })],
    )
}

/// Per-particle lower bound for scaled coupling `u = (N−1)v` at general `m`, `β`.
pub fn lower_bound_for(u: f64, mass: f64, beta: f64) -> Result<LowerBound> {
    if !(u.is_finite() && u > 0.0) {
        return Err(Error::invalid("u", "scaled coupling must be finite and > 0"));
    }
    let problem = reduced_problem(mass, beta, u)?;
    let solver = Solver::default();
    if let ThresholdLimit::Finite {
        critical_coupling, ..
    } = solver.critical_threshold(&problem)?
    {
        if 0.5 * u <= critical_coupling {
            return Ok(LowerBound {
                energy_pp: mass,
                bound: false,
            });
        }
    }
    match solver.solve_ground_energy(&problem, None) {
        Ok(state) => Ok(LowerBound {
            energy_pp: state.energy,
            bound: true,
        }),
        Err(Error::NoBoundState { .. }) => Ok(LowerBound {
            energy_pp: mass,
            bound: false,
        }),
        Err(e) => Err(e),
    }
}

pub fn lower_bound_per_particle(sys: &BosonSystem) -> Result<LowerBound> {
    sys.validate()?;
    lower_bound_for(sys.scaled_coupling(), sys.mass, sys.beta)
}

/// Scaled coupling at which the lower-bound curve crosses zero, for
/// `m = β = 1`: `1/u_c = 2π ∫₀^∞ e^(−k²) k² / √(1+k²) dk`.
pub fn critical_u() -> Result<f64> {
    let integral = quadrature::integrate_semi_infinite(
        |k| (-k * k).exp() * k * k / (1.0 + k * k).sqrt(),
        Tolerance::new(1e-14, 1e-12)?,
    )?;
    Ok(1.0 / (2.0 * PI * integral.value))
}

/// `g(x) = x eˣ K₁(x)`, with `g(0) = 1`.
pub fn g_function(x: f64) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::invalid("x", "must be finite and >= 0"));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    Ok(x * bessel_k1_scaled(x)?)
}

/// `g(x)` from its defining integral `∫_{−∞}^{∞} e^(−t²) √(2x + t²) t² dt`.
pub fn g_function_quadrature(x: f64, tol: Tolerance) -> Result<f64> {
    if !(x.is_finite() && x >= 0.0) {
        return Err(Error::invalid("x", "must be finite and >= 0"));
    }
    let half = quadrature::integrate_semi_infinite(|t| (-t * t).exp() * (2.0 * x + t * t).sqrt() * t * t, tol)?;
    Ok(2.0 * half.value)
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.5..=1.0).contains(&lambda) {
        return Err(Error::invalid("lambda", format!("must lie in [1/2, 1], got {lambda}")));
    }
    Ok(())
}

/// Variational energy per particle at scale `s`, coupling `u = (N−1)v`.
pub fn upper_bound_objective(s: f64, u: f64, lambda: f64) -> Result<f64> {
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::invalid("s", "scale must be finite and > 0"));
    }
    if !(u.is_finite() && u >= 0.0) {
        return Err(Error::invalid("u", "coupling must be finite and >= 0"));
    }
    check_lambda(lambda)?;
    let x = s * s;
    let kinetic = g_function(x)? / s;
    let y = 2.0 * lambda * x;
    let attraction = 8.0 * u * PI * PI * y.powf(1.5) / (1.0 + 2.0 * y).powi(3);
    Ok(FRAC_2_PI.sqrt() * (kinetic - attraction))
}

/// Minimises the variational objective over `s > 0`.
///
/// The objective is sampled on a geometric ladder `s = 2^(j/2)` around
/// `s = 1`; the lowest rung must be interior, and its neighbours bracket a
/// golden-section search finished with one parabolic step.
pub fn upper_bound_for(u: f64, lambda: f64) -> Result<UpperBound> {
    if !(u.is_finite() && u > 0.0) {
        return Err(Error::invalid("u", "scaled coupling must be finite and > 0"));
    }
    check_lambda(lambda)?;
    let f = |s: f64| upper_bound_objective(s, u, lambda);

    let ladder: Vec<f64> = (-40..=40).map(|j| 2f64.powf(j as f64 / 2.0)).collect();
    let values: Vec<f64> = ladder.iter().map(|&s| f(s)).collect::<Result<_>>()?;
    let (best, _) = values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("non-empty ladder");
    if best == 0 || best == ladder.len() - 1 {
        return Err(Error::MinimizationFailure {
            reason: format!(
                "no interior minimum for u = {u}, lambda = {lambda}; the infimum is approached as s -> {}",
                if best == 0 { "0" } else { "infinity" }
            ),
        });
    }

    let (mut a, mut b) = (ladder[best - 1], ladder[best + 1]);
    let mut x1 = b - GOLDEN * (b - a);
    let mut x2 = a + GOLDEN * (b - a);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while b - a > 1e-10 {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - GOLDEN * (b - a);
            f1 = f(x1)?;
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + GOLDEN * (b - a);
            f2 = f(x2)?;
        }
    }
    let (mut s_star, mut value) = if f1 < f2 { (x1, f1) } else { (x2, f2) };

    // Parabola through (a, s*, b).
    let (fa, fb) = (f(a)?, f(b)?);
    let num = (s_star - a).powi(2) * (value - fb) - (s_star - b).powi(2) * (value - fa);
    let den = (s_star - a) * (value - fb) - (s_star - b) * (value - fa);
    if den != 0.0 {
        let candidate = s_star - 0.5 * num / den;
        if candidate > a && candidate < b {
            let fc = f(candidate)?;
            if fc < value {
                s_star = candidate;
                value = fc;
            }
        }
    }
    Ok(UpperBound {
        energy_pp: value,
        s_star,
    })
}

/// Variational upper bound per particle. Restricted to `m = β = 1`.
pub fn upper_bound_per_particle(sys: &BosonSystem) -> Result<UpperBound> {
    sys.validate()?;
    if !sys.is_canonical() {
        return Err(Error::invalid(
            "mass",
            "the Gaussian upper bound is only available for m = beta = 1",
        ));
    }
    upper_bound_for(sys.scaled_coupling(), sys.lambda())
}

pub fn bounds_point(u: f64, lambda: f64) -> Result<BoundsPoint> {
    let lower = lower_bound_for(u, 1.0, 1.0)?;
    let upper = upper_bound_for(u, lambda)?;
    Ok(BoundsPoint {
        u,
        lambda,
        lower_pp: lower.energy_pp,
        lower_bound_state: lower.bound,
        upper_pp: upper.energy_pp,
        s_star: upper.s_star,
    })
}

/// Orthogonal matrix taking particle coordinates to Jacobi coordinates:
/// centre of mass in the first row, then `ρ_k` built from the first `k`
/// particles.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiMatrix {
    pub b: DMatrix<f64>,
}

impl JacobiMatrix {
    pub fn orthogonality_defect(&self) -> f64 {
        let n = self.b.nrows();
        (&self.b * self.b.transpose() - DMatrix::<f64>::identity(n, n)).amax()
    }
}

pub fn jacobi_matrix(n: usize) -> Result<JacobiMatrix> {
    if n < 2 {
        return Err(Error::invalid("N", "at least two particles are required"));
    }
    let b = DMatrix::from_fn(n, n, |row, col| {
        if row == 0 {
            return 1.0 / (n as f64).sqrt();
        }
        // 1-based row index k ≥ 2.
        let k = (row + 1) as f64;
        match col.cmp(&row) {
            std::cmp::Ordering::Less => 1.0 / (k * (k - 1.0)).sqrt(),
            std::cmp::Ordering::Equal => -((k - 1.0) / k).sqrt(),
            std::cmp::Ordering::Greater => 0.0,
        }
    });
    Ok(JacobiMatrix { b })
}
