//! Separable kernel factors and problem definitions.
//!
//! A separable potential acts as `(V̂ψ)(x) = −Σᵢ vᵢ fᵢ(x) ∫ gᵢ(x′) ψ(x′) dx′`.
//! Everything the solver needs lives in momentum space, so the catalog stores
//! the transformed factors `f̃(k)` directly. Position-space forms are kept for
//! the numeric variants and for checks.

use std::f64::consts::{FRAC_2_PI, PI};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::{self, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Dimension {
    OneD,
    ThreeD,
}

impl Dimension {
    /// Weight of `dk` when a momentum integral over all of k-space is written
    /// as `∫₀^∞ (…) measure(k) dk`. One dimension folds the even integrand
    /// onto the half line; three dimensions use `4πk²`.
    pub fn measure(self, k: f64) -> f64 {
        match self {
            Dimension::OneD => 2.0,
            Dimension::ThreeD => 4.0 * PI * k * k,
        }
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dimension::OneD => write!(f, "1D"),
            Dimension::ThreeD => write!(f, "3D"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KineticKind {
    /// `√(m² + k²)`
    Salpeter,
    /// `m + k²/(2m)`
    NonRelativistic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KineticForm {
    pub kind: KineticKind,
    pub mass: f64,
}

impl KineticForm {
    pub fn salpeter(mass: f64) -> Self {
        KineticForm {
            kind: KineticKind::Salpeter,
            mass,
        }
    }

    pub fn non_relativistic(mass: f64) -> Self {
        KineticForm {
            kind: KineticKind::NonRelativistic,
            mass,
        }
    }

    pub fn symbol(&self, k: f64) -> f64 {
        self.mass + self.excess(k)
    }

    /// `K(k) − m`, evaluated without cancellation.
    pub fn excess(&self, k: f64) -> f64 {
        let m = self.mass;
        match self.kind {
            KineticKind::Salpeter => {
                let k2 = k * k;
                k2 / ((m * m + k2).sqrt() + m)
            }
            KineticKind::NonRelativistic => k * k / (2.0 * m),
        }
    }

    /// `k² / (K(k) − m)`, finite as `k → 0` whenever `m > 0`.
    pub fn k2_over_excess(&self, k: f64) -> f64 {
        let m = self.mass;
        match self.kind {
            KineticKind::Salpeter => (m * m + k * k).sqrt() + m,
            KineticKind::NonRelativistic => 2.0 * m,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.mass.is_finite() || self.mass < 0.0 {
            return Err(Error::invalid("mass", "must be finite and >= 0"));
        }
        if self.kind == KineticKind::NonRelativistic && self.mass == 0.0 {
            return Err(Error::invalid(
                "mass",
                "non-relativistic kinetic energy k²/(2m) needs m > 0",
            ));
        }
        Ok(())
    }
}

/// A position-space function backing a numeric momentum profile.
#[derive(Clone)]
pub struct PositionFunction {
    label: String,
    func: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    pub tol: Tolerance,
}

impl PositionFunction {
    pub fn new<F>(label: impl Into<String>, func: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        PositionFunction {
            label: label.into(),
            func: Arc::new(func),
            tol: Tolerance {
                absolute: 1e-14,
                relative: 1e-11,
            },
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.func)(x)
    }

    fn same_as(&self, other: &PositionFunction) -> bool {
        Arc::ptr_eq(&self.func, &other.func)
    }
}

impl fmt::Debug for PositionFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PositionFunction")
            .field("label", &self.label)
            .finish()
    }
}

/// Momentum-space form `f̃(k)` of one kernel factor.
#[derive(Debug, Clone)]
pub enum MomentumProfile {
    /// `f(x) = e^(−|x|/a)`, `f̃(k) = √(2/π)·a/(1 + a²k²)`.
    Exponential1D { a: f64 },
    /// `f(r) = e^(−βr)/r`, `f̃(k) = √(2/π)/(k² + β²)`.
    Yamaguchi3D { beta: f64 },
    /// `f(r) = e^(−βr²/2)`, `f̃(k) = β^(−3/2)·e^(−k²/(2β))`.
    Gauss3D { beta: f64 },
    /// Even function of `x`, transformed numerically.
    NumericEven1D(PositionFunction),
    /// Radial function of `r`, transformed numerically.
    NumericRadial3D(PositionFunction),
}

impl MomentumProfile {
    pub fn dimension(&self) -> Dimension {
        match self {
            MomentumProfile::Exponential1D { .. } | MomentumProfile::NumericEven1D(_) => {
                Dimension::OneD
            }
            MomentumProfile::Yamaguchi3D { .. }
            | MomentumProfile::Gauss3D { .. }
            | MomentumProfile::NumericRadial3D(_) => Dimension::ThreeD,
        }
    }

    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            MomentumProfile::NumericEven1D(_) | MomentumProfile::NumericRadial3D(_)
        )
    }

    /// `f̃(k)` under the transform conventions of [`crate::quadrature`].
    pub fn eval(&self, k: f64) -> Result<f64> {
        if !(k.is_finite() && k >= 0.0) {
            return Err(Error::invalid("k", "wavenumber must be finite and >= 0"));
        }
        Ok(match self {
            MomentumProfile::Exponential1D { a } => FRAC_2_PI.sqrt() * a / (1.0 + a * a * k * k),
            MomentumProfile::Yamaguchi3D { beta } => FRAC_2_PI.sqrt() / (k * k + beta * beta),
            MomentumProfile::Gauss3D { beta } => beta.powf(-1.5) * (-k * k / (2.0 * beta)).exp(),
            MomentumProfile::NumericEven1D(f) => {
                quadrature::cosine_transform_even(|x| f.eval(x), k, f.tol)?
            }
            MomentumProfile::NumericRadial3D(f) => {
                quadrature::radial_sine_transform(|r| f.eval(r), k, f.tol)?
            }
        })
    }

    /// Position-space value `f(x)` (1D) or `f(r)` (3D).
    pub fn position_value(&self, x: f64) -> f64 {
        match self {
            MomentumProfile::Exponential1D { a } => (-x.abs() / a).exp(),
            MomentumProfile::Yamaguchi3D { beta } => (-beta * x).exp() / x,
            MomentumProfile::Gauss3D { beta } => (-0.5 * beta * x * x).exp(),
            MomentumProfile::NumericEven1D(f) | MomentumProfile::NumericRadial3D(f) => f.eval(x),
        }
    }

    /// Identity of profiles: equal parameters for catalog entries, the same
    /// underlying function for numeric ones.
    pub fn same_as(&self, other: &MomentumProfile) -> bool {
        use MomentumProfile::*;
        match (self, other) {
            (Exponential1D { a }, Exponential1D { a: b }) => a == b,
            (Yamaguchi3D { beta }, Yamaguchi3D { beta: b }) => beta == b,
            (Gauss3D { beta }, Gauss3D { beta: b }) => beta == b,
            (NumericEven1D(f), NumericEven1D(g)) | (NumericRadial3D(f), NumericRadial3D(g)) => {
                f.same_as(g)
            }
            _ => false,
        }
    }

    fn validate(&self, field: &str) -> Result<()> {
        let (name, value) = match self {
            MomentumProfile::Exponential1D { a } => ("a", *a),
            MomentumProfile::Yamaguchi3D { beta } | MomentumProfile::Gauss3D { beta } => {
                ("beta", *beta)
            }
            MomentumProfile::NumericEven1D(_) | MomentumProfile::NumericRadial3D(_) => {
                return Ok(())
            }
        };
        if !(value.is_finite() && value > 0.0) {
            return Err(Error::invalid(
                format!("{field}.{name}"),
                format!("must be finite and > 0, got {value}"),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct SeparableTerm {
    pub v: f64,
    pub f: MomentumProfile,
    pub g: MomentumProfile,
}

impl SeparableTerm {
    pub fn new(v: f64, f: MomentumProfile, g: MomentumProfile) -> Self {
        SeparableTerm { v, f, g }
    }

    pub fn symmetric(v: f64, profile: MomentumProfile) -> Self {
        SeparableTerm {
            v,
            g: profile.clone(),
            f: profile,
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.f.same_as(&self.g)
    }

    /// Position-space kernel value `−v f(x) g(x′)`.
    pub fn kernel_value(&self, x: f64, x_prime: f64) -> f64 {
        -self.v * self.f.position_value(x) * self.g.position_value(x_prime)
    }
}

/// Dimension, kinetic energy and an ordered, non-empty list of separable terms.
#[derive(Debug, Clone)]
pub struct Problem {
    pub dimension: Dimension,
    pub kinetic: KineticForm,
    pub terms: Vec<SeparableTerm>,
}

impl Problem {
    /// Builds and validates a problem.
    pub fn new(dimension: Dimension, kinetic: KineticForm, terms: Vec<SeparableTerm>) -> Result<Self> {
        let p = Problem {
            dimension,
            kinetic,
            terms,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn rank(&self) -> usize {
        self.terms.len()
    }

    pub fn mass(&self) -> f64 {
        self.kinetic.mass
    }

    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(SeparableTerm::is_symmetric)
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_with(false)
    }

    /// As [`Problem::validate`], optionally admitting `v = 0` terms (the free
    /// problem, useful for checking discretisations).
    pub fn validate_with(&self, allow_zero_coupling: bool) -> Result<()> {
        self.kinetic.validate()?;
        if self.terms.is_empty() {
            return Err(Error::invalid("terms", "at least one separable term is required"));
        }
        for (i, term) in self.terms.iter().enumerate() {
            let positive = term.v > 0.0 || (allow_zero_coupling && term.v == 0.0);
            if !(term.v.is_finite() && positive) {
                return Err(Error::invalid(
                    "v",
                    format!("coupling of term {i} must be finite and > 0, got {}", term.v),
                ));
            }
            term.f.validate(&format!("terms[{i}].f"))?;
            term.g.validate(&format!("terms[{i}].g"))?;
            for (side, profile) in [("f", &term.f), ("g", &term.g)] {
                if profile.dimension() != self.dimension {
                    return Err(Error::invalid(
                        format!("terms[{i}].{side}"),
                        format!(
                            "{} profile in a {} problem",
                            profile.dimension(),
                            self.dimension
                        ),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Same problem with every coupling multiplied by `factor`.
    pub fn with_couplings_scaled(&self, factor: f64) -> Problem {
        let mut p = self.clone();
        for t in &mut p.terms {
            t.v *= factor;
        }
        p
    }

    pub fn with_mass(&self, mass: f64) -> Problem {
        let mut p = self.clone();
        p.kinetic.mass = mass;
        p
    }

    pub fn with_kinetic(&self, kind: KineticKind) -> Problem {
        let mut p = self.clone();
        p.kinetic.kind = kind;
        p
    }

    /// Full position-space kernel `V(x, x′)`.
    pub fn kernel_value(&self, x: f64, x_prime: f64) -> f64 {
        self.terms.iter().map(|t| t.kernel_value(x, x_prime)).sum()
    }
}

/// Checks a problem and hands it back unchanged.
pub fn validate_problem(p: Problem) -> Result<Problem> {
    p.validate()?;
    Ok(p)
}
