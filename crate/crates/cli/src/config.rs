//! JSON problem description.
//!
//! ```json
//! {
//!   "dimension": "1d",
//!   "kinetic": { "form": "salpeter", "mass": 1.0 },
//!   "terms": [
//!     { "coupling": 1.0, "f": { "kind": "exponential", "a": 1.0 } }
//!   ],
//!   "reference_energy": -0.36131
//! }
//! ```
//!
//! `g` defaults to `f`. `result` is filled in by `solve --format json`, so an
//! emitted report is itself a valid config.

use std::path::Path;

use salpeter::{Dimension, KineticForm, MomentumProfile, PositionFunction, Problem, SeparableTerm};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::report::SolveReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DimensionSpec {
    #[serde(rename = "1d")]
    OneD,
    #[serde(rename = "3d")]
    ThreeD,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KineticFormSpec {
    Salpeter,
    #[serde(alias = "nonrelativistic")]
    NonRelativistic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KineticSpec {
    pub form: KineticFormSpec,
    pub mass: f64,
}

/// Shapes available to the numerically transformed profiles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shape {
    /// `e^(−|x|/s)`
    Exponential,
    /// `e^(−x²/(2s²))`
    Gaussian,
    /// `1/(1 + (x/s)²)`
    Lorentzian,
    /// `e^(−r/s)/r`, radial only
    Yukawa,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSpec {
    Exponential { a: f64 },
    Yamaguchi { beta: f64 },
    Gauss { beta: f64 },
    NumericEven { shape: Shape, scale: f64 },
    NumericRadial { shape: Shape, scale: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermSpec {
    pub coupling: f64,
    pub f: ProfileSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<ProfileSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub dimension: DimensionSpec,
    pub kinetic: KineticSpec,
    pub terms: Vec<TermSpec>,
    /// Expected ground energy; `solve` and `oracle` report which coupling
    /// convention reproduces it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_energy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub result: Option<SolveReport>,
}

fn shape_fn(shape: Shape, scale: f64, radial: bool) -> Result<PositionFunction, CliError> {
    if !(scale.is_finite() && scale > 0.0) {
        return Err(CliError::Config(format!("numeric profile scale must be > 0, got {scale}")));
    }
    let label = format!("{shape:?}(scale={scale})");
    Ok(match (shape, radial) {
        (Shape::Exponential, _) => PositionFunction::new(label, move |x: f64| (-x.abs() / scale).exp()),
        (Shape::Gaussian, _) => {
            PositionFunction::new(label, move |x: f64| (-0.5 * (x / scale).powi(2)).exp())
        }
        (Shape::Lorentzian, _) => {
            PositionFunction::new(label, move |x: f64| 1.0 / (1.0 + (x / scale).powi(2)))
        }
        (Shape::Yukawa, true) => PositionFunction::new(label, move |r: f64| (-r / scale).exp() / r),
        (Shape::Yukawa, false) => {
            return Err(CliError::Config("the yukawa shape is radial only".into()))
        }
    })
}

impl ProfileSpec {
    fn to_profile(&self) -> Result<MomentumProfile, CliError> {
        Ok(match *self {
            ProfileSpec::Exponential { a } => MomentumProfile::Exponential1D { a },
            ProfileSpec::Yamaguchi { beta } => MomentumProfile::Yamaguchi3D { beta },
            ProfileSpec::Gauss { beta } => MomentumProfile::Gauss3D { beta },
            ProfileSpec::NumericEven { shape, scale } => {
                MomentumProfile::NumericEven1D(shape_fn(shape, scale, false)?)
            }
            ProfileSpec::NumericRadial { shape, scale } => {
                MomentumProfile::NumericRadial3D(shape_fn(shape, scale, true)?)
            }
        })
    }
}

impl ProblemConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("malformed config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_problem(&self) -> Result<Problem, CliError> {
        self.build(false)
    }

    /// Like [`ProblemConfig::to_problem`] but admits `coupling = 0`.
    pub fn to_problem_allowing_free(&self) -> Result<Problem, CliError> {
        self.build(true)
    }

    fn build(&self, allow_free: bool) -> Result<Problem, CliError> {
        let dimension = match self.dimension {
            DimensionSpec::OneD => Dimension::OneD,
            DimensionSpec::ThreeD => Dimension::ThreeD,
        };
        let kinetic = match self.kinetic.form {
            KineticFormSpec::Salpeter => KineticForm::salpeter(self.kinetic.mass),
            KineticFormSpec::NonRelativistic => KineticForm::non_relativistic(self.kinetic.mass),
        };
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let f = t.f.to_profile()?;
                let g = match &t.g {
                    Some(g) if g != &t.f => g.to_profile()?,
                    _ => f.clone(),
                };
                Ok(SeparableTerm::new(t.coupling, f, g))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let problem = Problem {
            dimension,
            kinetic,
            terms,
        };
        problem.validate_with(allow_free)?;
        Ok(problem)
    }
}
