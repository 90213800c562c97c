//! Brute-force check on the secular-equation solver: discretise the momentum
//! axis with a midpoint rule, build the dense Hamiltonian
//! `H_ab = K(k_a) δ_ab − Σₜ vₜ √w_a f̃ₜ(k_a) g̃ₜ(k_b) √w_b`
//! and take its lowest eigenvalue.
//!
//! The midpoint rule is second order, so two grids `n` and `2n` combine into
//! the Richardson estimate `(4E₂ₙ − Eₙ)/3`.

use std::f64::consts::FRAC_PI_2;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::kernels::Problem;
use crate::roots::bisect_secant;

/// How midpoint nodes `t ∈ (0, 1)` are mapped onto momenta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GridMap {
    /// `k = k_max·t`; the range beyond `k_max` is dropped.
    Truncated { k_max: f64 },
    /// `k = scale·tan(πt/2)`, covering the whole half line.
    Tangent { scale: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleGrid {
    pub map: GridMap,
    pub n_points: usize,
}

impl Default for OracleGrid {
    fn default() -> Self {
        OracleGrid {
            map: GridMap::Tangent { scale: 2.0 },
            n_points: 400,
        }
    }
}

impl OracleGrid {
    pub fn truncated(k_max: f64, n_points: usize) -> Self {
        OracleGrid {
            map: GridMap::Truncated { k_max },
            n_points,
        }
    }

    pub fn tangent(scale: f64, n_points: usize) -> Self {
        OracleGrid {
            map: GridMap::Tangent { scale },
            n_points,
        }
    }

    pub fn refined(&self) -> Self {
        OracleGrid {
            n_points: 2 * self.n_points,
            ..*self
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_points < 64 {
            return Err(Error::invalid("grid", "at least 64 points are required"));
        }
        let extent = match self.map {
            GridMap::Truncated { k_max } => k_max,
            GridMap::Tangent { scale } => scale,
        };
        if !(extent.is_finite() && extent > 0.0) {
            return Err(Error::invalid("kmax", "grid extent must be finite and > 0"));
        }
        Ok(())
    }

    /// Nodes and plain `dk` weights.
    pub fn nodes(&self) -> (Vec<f64>, Vec<f64>) {
        let n = self.n_points;
        let h = 1.0 / n as f64;
        (0..n)
            .map(|j| {
                let t = (j as f64 + 0.5) * h;
                match self.map {
                    GridMap::Truncated { k_max } => (k_max * t, k_max * h),
                    GridMap::Tangent { scale } => {
                        let c = (FRAC_PI_2 * t).cos();
                        (scale * (FRAC_PI_2 * t).tan(), scale * FRAC_PI_2 * h / (c * c))
                    }
                }
            })
            .unzip()
    }

    /// Largest node spacing below `k = 1`, a yardstick for free-spectrum checks.
    pub fn spacing_near_origin(&self) -> f64 {
        let (k, _) = self.nodes();
        k.windows(2)
            .take_while(|w| w[0] < 1.0)
            .map(|w| w[1] - w[0])
            .fold(k[0], f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleEnergy {
    pub energy: f64,
    /// `false` when some term has `f ≠ g`; the discrete secular equation is
    /// then solved instead of a symmetric eigenproblem.
    pub hermitian: bool,
    pub n_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleStudy {
    pub coarse: OracleEnergy,
    pub fine: OracleEnergy,
    pub extrapolated: f64,
}

struct Discretised {
    excess: Vec<f64>,
    /// `√w·f̃ₜ(k)` and `√w·g̃ₜ(k)` per term.
    f_cols: Vec<Vec<f64>>,
    g_cols: Vec<Vec<f64>>,
    couplings: Vec<f64>,
}

fn discretise(problem: &Problem, grid: &OracleGrid) -> Result<Discretised> {
    let (k, w) = grid.nodes();
    let dim = problem.dimension;
    let sqrt_w: Vec<f64> = k.iter().zip(&w).map(|(&k, &w)| (dim.measure(k) * w).sqrt()).collect();
    let mut f_cols = Vec::with_capacity(problem.rank());
    let mut g_cols = Vec::with_capacity(problem.rank());
    for term in &problem.terms {
        let f: Vec<f64> = k
            .iter()
            .zip(&sqrt_w)
            .map(|(&k, &s)| Ok(s * term.f.eval(k)?))
            .collect::<Result<_>>()?;
        let g = if term.is_symmetric() {
            f.clone()
        } else {
            k.iter()
                .zip(&sqrt_w)
                .map(|(&k, &s)| Ok(s * term.g.eval(k)?))
                .collect::<Result<_>>()?
        };
        f_cols.push(f);
        g_cols.push(g);
    }
    Ok(Discretised {
        excess: k.iter().map(|&k| problem.kinetic.excess(k)).collect(),
        f_cols,
        g_cols,
        couplings: problem.terms.iter().map(|t| t.v).collect(),
    })
}

pub(super) fn discretized_energy(problem: &Problem, grid: &OracleGrid) -> Result<OracleEnergy> {
    problem.validate_with(true)?;
    grid.validate()?;
    let d = discretise(problem, grid)?;
    let m = problem.mass();
    let hermitian = problem.is_symmetric();
    let shift = if hermitian {
        lowest_symmetric(&d)
    } else {
        lowest_secular(&d, m)?
    };
    Ok(OracleEnergy {
        energy: m + shift,
        hermitian,
        n_points: grid.n_points,
    })
}

/// Lowest eigenvalue of `H − m`.
fn lowest_symmetric(d: &Discretised) -> f64 {
    let n = d.excess.len();
    let mut h = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(d.excess.clone()));
    for (t, v) in d.couplings.iter().enumerate() {
        let f = &d.f_cols[t];
        for b in 0..n {
            for a in 0..n {
                h[(a, b)] -= v * f[a] * f[b];
            }
        }
    }
    h.symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min)
}

/// Lowest root of the discretised secular determinant, as an offset from `m`.
fn lowest_secular(d: &Discretised, m: f64) -> Result<f64> {
    let r = d.couplings.len();
    let det = |gap: f64| -> Result<f64> {
        let j = DMatrix::from_fn(r, r, |row, col| {
            let s: f64 = d.g_cols[row]
                .iter()
                .zip(&d.f_cols[col])
                .zip(&d.excess)
                .map(|((g, f), e)| g * f / (e + gap))
                .sum();
            d.couplings[col] * s
        });
        Ok((DMatrix::identity(r, r) - j).determinant())
    };
    let mut bound = 0.0;
    for row in 0..r {
        for col in 0..r {
            let s: f64 = d.g_cols[row].iter().zip(&d.f_cols[col]).map(|(g, f)| (g * f).abs()).sum();
            bound += (d.couplings[col] * s).powi(2);
        }
    }
    let hi = 1.001 * bound.sqrt();
    // Discrete spectrum starts at the smallest kinetic node, not at m.
    let lo = -d.excess.iter().copied().fold(f64::INFINITY, f64::min) + 1e-12;
    if hi <= lo {
        return Ok(-lo);
    }
    let n = 400;
    let gaps: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * (i as f64 / (n - 1) as f64).powi(3)).collect();
    let values: Vec<f64> = gaps.iter().map(|&g| det(g)).collect::<Result<_>>()?;
    for i in (0..n - 1).rev() {
        if values[i].signum() != values[i + 1].signum() {
            let root = bisect_secant(
                det,
                gaps[i],
                gaps[i + 1],
                values[i],
                values[i + 1],
                |g| 1e-13 * (m - g).abs().max(1.0),
                5,
            )?;
            return Ok(-root.x);
        }
    }
    // No discrete bound state: the bottom of the discretised free spectrum.
    Ok(-lo)
}

pub(super) fn extrapolated(problem: &Problem, grid: &OracleGrid) -> Result<OracleStudy> {
    let coarse = discretized_energy(problem, grid)?;
    let fine = discretized_energy(problem, &grid.refined())?;
    Ok(OracleStudy {
        coarse,
        fine,
        extrapolated: (4.0 * fine.energy - coarse.energy) / 3.0,
    })
}
