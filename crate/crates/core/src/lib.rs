//! Bound states of the spinless Salpeter equation with separable nonlocal
//! potentials, plus variational energy bounds for N-boson systems.

pub mod bessel;
pub mod error;
pub mod kernels;
pub mod nboson;
pub mod quadrature;
pub mod roots;
pub mod spectral;

pub use error::{Error, Result};
pub use kernels::{Dimension, KineticForm, KineticKind, MomentumProfile, PositionFunction, Problem, SeparableTerm};
pub use quadrature::{QuadratureResult, Tolerance};
pub use spectral::{BoundState, Solver, SolverOptions};
