//! Adaptive Gauss–Kronrod integration on finite and semi-infinite intervals,
//! plus the two momentum-space transforms used by the numeric kernel
//! profiles.
//!
//! Transform conventions (ℏ = 1):
//!
//! * 1D, even `f`: `f̃(k) = √(2/π) ∫₀^∞ cos(kx) f(x) dx`
//! * 3D, radial `f`: `f̃(k) = √(2/π) (1/k) ∫₀^∞ sin(kr) r f(r) dr`
//!
//! The three-dimensional bound-state integrals are written over `k ∈ [0, ∞)`
//! with the measure `4πk² dk`. This is the reading under which the closed-form
//! Yamaguchi and Gauss coefficients (`8` and `4π/β³`) come out right; the
//! alternative `(−∞, ∞)` range would double them.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{FRAC_2_PI, PI};

use crate::error::{Error, Result};

/// Maximum number of panels kept by one adaptive integration.
const PANEL_BUDGET: usize = 4000;
/// Maximum number of interval doublings on a semi-infinite range.
const DOUBLING_BUDGET: usize = 200;
/// Maximum number of half-period segments for an oscillatory integral.
const SEGMENT_BUDGET: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub absolute: f64,
    pub relative: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            absolute: 1e-12,
            relative: 1e-10,
        }
    }
}

impl Tolerance {
    pub fn new(absolute: f64, relative: f64) -> Result<Self> {
        if !(absolute.is_finite() && absolute > 0.0) {
            return Err(Error::invalid("tol.absolute", "must be finite and > 0"));
        }
        if !(relative.is_finite() && relative > 0.0) {
            return Err(Error::invalid("tol.relative", "must be finite and > 0"));
        }
        Ok(Tolerance { absolute, relative })
    }

    /// Acceptable absolute error for an integral of magnitude `value`.
    pub fn target(&self, value: f64) -> f64 {
        self.absolute.max(self.relative * value.abs())
    }

    fn scaled(&self, abs_factor: f64) -> Tolerance {
        Tolerance {
            absolute: self.absolute * abs_factor,
            relative: self.relative,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Absolute, non-negative.
    pub error_estimate: f64,
    pub evaluations: usize,
}

impl QuadratureResult {
    fn zero() -> Self {
        QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
        }
    }

    fn add(&mut self, other: &QuadratureResult) {
        self.value += other.value;
        self.error_estimate += other.error_estimate;
        self.evaluations += other.evaluations;
    }

    /// Multiplies value and error estimate by a constant factor.
    pub fn scale(mut self, factor: f64) -> Self {
        self.value *= factor;
        self.error_estimate *= factor.abs();
        self
    }
}

// 15-point Kronrod extension of the 7-point Gauss rule; positive half with
// the centre first. The Gauss nodes are the odd-indexed Kronrod nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970,
];
// Weights of the Gauss nodes XGK[0], XGK[2], XGK[4], XGK[6].
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn checked<F>(f: &mut F, x: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    let y = f(x)?;
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::InvalidIntegrand { at: x, value: y })
    }
}

fn kronrod_panel<F>(f: &mut F, a: f64, b: f64) -> Result<Panel>
where
    F: FnMut(f64) -> Result<f64>,
{
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = checked(f, centre)?;
    let mut kronrod = WGK[0] * fc;
    let mut gauss = WG[0] * fc;
    for j in 1..8 {
        let dx = half * XGK[j];
        let pair = checked(f, centre - dx)? + checked(f, centre + dx)?;
        kronrod += WGK[j] * pair;
        if j % 2 == 0 {
            gauss += WG[j / 2] * pair;
        }
    }
    Ok(Panel {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    })
}

/// Adaptive integration over a finite interval with a fallible integrand.
///
/// The worst panel is bisected until the summed `|K15 − G7|` differences meet
/// the tolerance.
pub fn try_integrate<F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::invalid("interval", "endpoints must be finite"));
    }
    if a == b {
        return Ok(QuadratureResult::zero());
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };

    let first = kronrod_panel(&mut f, lo, hi)?;
    let mut evaluations = 15;
    let mut value = first.value;
    let mut error = first.error;
    let mut heap = BinaryHeap::new();
    heap.push(first);

    while error > tol.target(value) {
        if heap.len() >= PANEL_BUDGET {
            return Err(Error::ConvergenceFailure {
                context: "adaptive quadrature",
                best: sign * value,
                error,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // Panel cannot be split in floating point; keep what we have.
            heap.push(Panel {
                error: 0.0,
                ..worst
            });
            error -= worst.error;
            continue;
        }
        let left = kronrod_panel(&mut f, worst.a, mid)?;
        let right = kronrod_panel(&mut f, mid, worst.b)?;
        evaluations += 30;
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
    }

    // Re-sum from the panels to shed accumulated update roundoff.
    let (mut v, mut e) = (0.0, 0.0);
    for p in heap.iter() {
        v += p.value;
        e += p.error;
    }
    Ok(QuadratureResult {
        value: sign * v,
        error_estimate: e,
        evaluations,
    })
}

pub fn integrate<F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
{
    try_integrate(|x| Ok(f(x)), a, b, tol)
}

/// ∫₀^∞ of a fallible integrand.
///
/// Integrates `[0, 1]` and then successive doublings `[K, 2K]` until a panel
/// contributes less than a tenth of the tolerance. The remaining tail is
/// estimated geometrically from the last two panels, which is exact for pure
/// power-law tails and negligible for exponential ones.
pub fn try_integrate_semi_infinite<F>(mut f: F, tol: Tolerance) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut total = try_integrate(&mut f, 0.0, 1.0, tol.scaled(0.25))?;
    let mut previous: Option<f64> = None;
    let mut previous_small = false;
    let mut lower = 1.0;
    for _ in 0..DOUBLING_BUDGET {
        let panel_tol = Tolerance {
            absolute: tol.target(total.value) / 8.0,
            relative: tol.relative,
        };
        let panel = try_integrate(&mut f, lower, 2.0 * lower, panel_tol)?;
        total.add(&panel);
        let small = panel.value.abs() < tol.target(total.value) / 10.0;
        if small {
            if let Some(prev) = previous {
                let ratio = panel.value / prev;
                if (0.0..0.95).contains(&ratio) {
                    let tail = panel.value * ratio / (1.0 - ratio);
                    total.value += tail;
                    total.error_estimate += tail.abs();
                    return Ok(total);
                }
            }
            if panel.value == 0.0 || previous_small {
                return Ok(total);
            }
        }
        previous_small = small;
        previous = Some(panel.value);
        lower *= 2.0;
    }
    Err(Error::ConvergenceFailure {
        context: "semi-infinite quadrature",
        best: total.value,
        error: total.error_estimate,
    })
}

pub fn integrate_semi_infinite<F>(mut f: F, tol: Tolerance) -> Result<QuadratureResult>
where
    F: FnMut(f64) -> f64,
{
    try_integrate_semi_infinite(|x| Ok(f(x)), tol)
}

/// Wynn's epsilon algorithm on a sequence of partial sums; returns the
/// highest-order even column entry available.
fn wynn_epsilon(partial_sums: &[f64]) -> f64 {
    let n = partial_sums.len();
    if n < 3 {
        return *partial_sums.last().unwrap_or(&0.0);
    }
    let mut prev = vec![0.0; n + 1];
    let mut cur: Vec<f64> = partial_sums.to_vec();
    let mut best = cur[cur.len() - 1];
    let mut column = 0;
    while cur.len() > 1 {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for i in 0..cur.len() - 1 {
            let diff = cur[i + 1] - cur[i];
            if diff == 0.0 {
                // Converged exactly; the sequence is constant from here.
                return cur[i + 1];
            }
            next.push(prev[i + 1] + 1.0 / diff);
        }
        column += 1;
        prev = cur;
        cur = next;
        if column % 2 == 0 {
            best = cur[cur.len() - 1];
        }
    }
    best
}

/// ∫₀^∞ w(kx) f(x) dx for an oscillatory weight with known zeros
/// `x_j = (j + offset)·π/k`. Segments between zeros are integrated
/// separately and their partial sums accelerated with Wynn's epsilon.
fn oscillatory<F, W>(mut f: F, weight: W, k: f64, offset: f64, tol: Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
    W: Fn(f64) -> f64,
{
    let half_period = PI / k;
    let mut integrand = |x: f64| -> Result<f64> { Ok(weight(k * x) * f(x)?) };
    let mut partial = Vec::new();
    let mut sum = 0.0;
    let mut a = 0.0;
    let mut last_extrapolated: Option<f64> = None;
    for j in 0..SEGMENT_BUDGET {
        let b = (j as f64 + offset) * half_period;
        if b <= a {
            continue;
        }
        let segment = try_integrate(
            &mut integrand,
            a,
            b,
            Tolerance {
                absolute: tol.target(sum) / 16.0,
                relative: tol.relative,
            },
        )?;
        sum += segment.value;
        partial.push(sum);
        a = b;
        if segment.value.abs() < tol.target(sum) / 10.0 && j > 2 {
            return Ok(sum);
        }
        if partial.len() >= 8 {
            let window = &partial[partial.len().saturating_sub(24)..];
            let extrapolated = wynn_epsilon(window);
            if let Some(prev) = last_extrapolated {
                if (extrapolated - prev).abs() < tol.target(extrapolated) {
                    return Ok(extrapolated);
                }
            }
            last_extrapolated = Some(extrapolated);
        }
    }
    Err(Error::ConvergenceFailure {
        context: "oscillatory quadrature",
        best: last_extrapolated.unwrap_or(sum),
        error: f64::NAN,
    })
}

/// One-dimensional Fourier transform of an even function.
pub fn try_cosine_transform_even<F>(f: F, k: f64, tol: Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(k.is_finite() && k >= 0.0) {
        return Err(Error::invalid("k", "wavenumber must be finite and >= 0"));
    }
    let norm = FRAC_2_PI.sqrt();
    let k_abs = k.abs();
    if k_abs == 0.0 {
        return Ok(norm * try_integrate_semi_infinite(f, tol)?.value);
    }
    // Zeros of cos(kx) sit at (j + 1/2)π/k.
    Ok(norm * oscillatory(f, f64::cos, k_abs, 0.5, tol)?)
}

pub fn cosine_transform_even<F>(mut f: F, k: f64, tol: Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_cosine_transform_even(|x| Ok(f(x)), k, tol)
}

/// Three-dimensional Fourier transform of a radial function.
///
/// At `k = 0` the removable singularity is replaced by its limit
/// `√(2/π) ∫₀^∞ r² f(r) dr`.
pub fn try_radial_sine_transform<F>(mut f: F, k: f64, tol: Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(k.is_finite() && k >= 0.0) {
        return Err(Error::invalid("k", "wavenumber must be finite and >= 0"));
    }
    let norm = FRAC_2_PI.sqrt();
    if k == 0.0 {
        let moment = try_integrate_semi_infinite(|r| Ok(r * r * f(r)?), tol)?;
        return Ok(norm * moment.value);
    }
    let weighted = |r: f64| -> Result<f64> { Ok(r * f(r)?) };
    let inner_tol = Tolerance {
        absolute: tol.absolute * k,
        relative: tol.relative,
    };
    Ok(norm * oscillatory(weighted, f64::sin, k, 1.0, inner_tol)? / k)
}

pub fn radial_sine_transform<F>(mut f: F, k: f64, tol: Tolerance) -> Result<f64>
where
    F: FnMut(f64) -> f64,
{
    try_radial_sine_transform(|r| Ok(f(r)), k, tol)
}
