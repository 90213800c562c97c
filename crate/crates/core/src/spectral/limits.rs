use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::{overlap, plain_overlap, require_single_term, Solver};
use crate::error::{Error, Result};
use crate::kernels::{Dimension, Problem};

/// Behaviour of `1/v(E)` as `E → m⁻`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdLimit {
    /// The integral stays finite; couplings below `critical_coupling` do not bind.
    Finite {
        reciprocal_coupling: f64,
        critical_coupling: f64,
    },
    /// The integral diverges, so every positive coupling binds.
    DivergesAtThreshold,
}

impl Solver {
    /// Classifies the threshold from the small-`k` behaviour of the integrand.
    ///
    /// In one dimension the denominator vanishes like `k²/(2m)` (or `|k|` at
    /// `m = 0`) against the flat line measure, which is not integrable unless
    /// `f̃(0) g̃(0) = 0`. In three dimensions the `k²` of the measure keeps the
    /// integrand bounded for every kinetic form.
    pub fn critical_threshold(&self, problem: &Problem) -> Result<ThresholdLimit> {
        require_single_term(problem)?;
        let term = &problem.terms[0];
        if problem.dimension == Dimension::OneD && term.f.eval(0.0)? * term.g.eval(0.0)? != 0.0 {
            return Ok(ThresholdLimit::DivergesAtThreshold);
        }
        let limit = overlap(
            problem.dimension,
            &problem.kinetic,
            &term.f,
            &term.g,
            0.0,
            self.options.tol,
        )?
        .value;
        if limit <= 0.0 {
            return Err(Error::NoBoundState {
                reason: "threshold integral is not positive".into(),
                critical_coupling: None,
            });
        }
        Ok(ThresholdLimit::Finite {
            reciprocal_coupling: limit,
            critical_coupling: 1.0 / limit,
        })
    }

    /// `lim_{m→∞} (E − m)`: the lowest eigenvalue of the bare separable
    /// operator `−Σ vᵢ |fᵢ⟩⟨gᵢ|`, i.e. minus the largest real eigenvalue of
    /// `G_ji = vᵢ ⟨gⱼ, fᵢ⟩`, clamped at zero.
    pub fn infinite_mass_energy(&self, problem: &Problem) -> Result<f64> {
        problem.validate()?;
        let n = problem.rank();
        let mut overlaps = DMatrix::zeros(n, n);
        for j in 0..n {
            for i in 0..n {
                let q = plain_overlap_signed(problem, j, i, self)?;
                overlaps[(j, i)] = q;
            }
        }
        let largest = if problem.is_symmetric() {
            // √v S √v is symmetric and similar to S·diag(v).
            let sqrt_v: Vec<f64> = problem.terms.iter().map(|t| t.v.sqrt()).collect();
            let sym = DMatrix::from_fn(n, n, |j, i| sqrt_v[j] * overlaps[(j, i)] * sqrt_v[i]);
            sym.symmetric_eigenvalues().iter().copied().fold(f64::NEG_INFINITY, f64::max)
        } else {
            let g = DMatrix::from_fn(n, n, |j, i| problem.terms[i].v * overlaps[(j, i)]);
            let scale = g.amax().max(f64::MIN_POSITIVE);
            g.complex_eigenvalues()
                .iter()
                .filter(|z| z.im.abs() <= 1e-10 * scale)
                .map(|z| z.re)
                .fold(f64::NEG_INFINITY, f64::max)
        };
        Ok((-largest).min(0.0))
    }
}

fn plain_overlap_signed(problem: &Problem, j: usize, i: usize, solver: &Solver) -> Result<f64> {
    let g = &problem.terms[j].g;
    let f = &problem.terms[i].f;
    let dim = problem.dimension;
    if f.same_as(g) {
        return Ok(plain_overlap(dim, f, g, solver.options.tol)?.value);
    }
    Ok(crate::quadrature::try_integrate_semi_infinite(
        |k| Ok(dim.measure(k) * f.eval(k)? * g.eval(k)?),
        solver.options.tol,
    )?
    .value)
}

/// Closed form of `1/v` for the one-dimensional exponential kernel at `m = 0`:
///
/// `1/v = −a²(2 + 2a²e² + 3aeπ + a³e³π + 4 ln(−ae)) / ((1 + a²e²)² π)`, `e < 0`.
pub fn ultrarel_exponential_reciprocal_coupling(a: f64, e: f64) -> Result<f64> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::invalid("a", "must be finite and > 0"));
    }
    if !(e.is_finite() && e < 0.0) {
        return Err(Error::invalid("e", "energy must be finite and < 0"));
    }
    let ae = a * e;
    let numerator = 2.0 + 2.0 * ae * ae + 3.0 * ae * PI + ae.powi(3) * PI + 4.0 * (-ae).ln();
    Ok(-a * a * numerator / ((1.0 + ae * ae).powi(2) * PI))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernels::{KineticForm, MomentumProfile, SeparableTerm};
    use crate::spectral::reciprocal_coupling;

    fn single(dim: Dimension, profile: MomentumProfile, v: f64, m: f64) -> Problem {
        Problem::new(dim, KineticForm::salpeter(m), vec![SeparableTerm::symmetric(v, profile)]).unwrap()
    }

    #[test]
    fn gauss_threshold_matches_identity() {
        // k²/(√(1+k²) − 1) = √(1+k²) + 1, so 1/v_c = 4π(∫e^(−k²)√(1+k²)dk + √π/2).
        let p = single(Dimension::ThreeD, MomentumProfile::Gauss3D { beta: 1.0 }, 1.0, 1.0);
        match Solver::default().critical_threshold(&p).unwrap() {
            ThresholdLimit::Finite {
                reciprocal_coupling,
                critical_coupling,
            } => {
                assert!((reciprocal_coupling - 24.5045068795).abs() < 1e-8);
                assert!((critical_coupling - 0.0408088196).abs() < 1e-9);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn yamaguchi_threshold_is_finite() {
        let p = single(Dimension::ThreeD, MomentumProfile::Yamaguchi3D { beta: 1.0 }, 1.0, 1.0);
        match Solver::default().critical_threshold(&p).unwrap() {
            // 8∫(√(1+k²)+1)/(k²+1)² dk = 8(1 + π/4) = 8 + 2π.
            ThresholdLimit::Finite {
                reciprocal_coupling, ..
            } => assert!((reciprocal_coupling - (8.0 + 2.0 * PI)).abs() < 1e-8),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn one_dimension_diverges() {
        for m in [0.0, 1.0] {
            let p = single(Dimension::OneD, MomentumProfile::Exponential1D { a: 1.0 }, 1.0, m);
            assert_eq!(
                Solver::default().critical_threshold(&p).unwrap(),
                ThresholdLimit::DivergesAtThreshold
            );
        }
    }

    #[test]
    fn ultrarelativistic_closed_form() {
        let v = ultrarel_exponential_reciprocal_coupling(1.0, -1.0).unwrap();
        assert!((v - (1.0 - 1.0 / PI)).abs() < 1e-15);
        let p = single(Dimension::OneD, MomentumProfile::Exponential1D { a: 1.0 }, 1.0, 0.0);
        let closed = ultrarel_exponential_reciprocal_coupling(1.0, -0.5).unwrap();
        let quad = reciprocal_coupling(&p, -0.5).unwrap();
        assert!(((closed - quad) / quad).abs() < 1e-6);
        // Logarithmic growth towards threshold.
        let near = ultrarel_exponential_reciprocal_coupling(1.0, -1e-8).unwrap();
        assert!(near > 20.0);
        assert!(ultrarel_exponential_reciprocal_coupling(0.0, -1.0).is_err());
        assert!(ultrarel_exponential_reciprocal_coupling(1.0, 0.0).is_err());
    }

    #[test]
    fn infinite_mass_rank_one() {
        let s = Solver::default();
        let p = single(Dimension::OneD, MomentumProfile::Exponential1D { a: 1.0 }, 1.0, 1.0);
        assert!((s.infinite_mass_energy(&p).unwrap() + 1.0).abs() < 1e-10);
        // ‖f‖² = ∫e^(−2|x|/a) dx = a.
        let p2 = single(Dimension::OneD, MomentumProfile::Exponential1D { a: 2.0 }, 1.0, 1.0);
        assert!((s.infinite_mass_energy(&p2).unwrap() + 2.0).abs() < 1e-10);
        let weak = p2.with_couplings_scaled(1e-3);
        assert!((s.infinite_mass_energy(&weak).unwrap() + 2e-3).abs() < 1e-12);
    }

    #[test]
    fn infinite_mass_asymmetric_rank_one() {
        let s = Solver::default();
        let f = MomentumProfile::Exponential1D { a: 1.0 };
        let p = Problem::new(
            Dimension::OneD,
            KineticForm::salpeter(1.0),
            vec![SeparableTerm::new(1.0, f, MomentumProfile::Exponential1D { a: 2.0 })],
        )
        .unwrap();
        // Rank one: eigenvalue v⟨g, f⟩ = v ∫ e^(−|x|) e^(−|x|/2) dx = 4/3.
        assert!((s.infinite_mass_energy(&p).unwrap() + 4.0 / 3.0).abs() < 1e-10);
    }
}
