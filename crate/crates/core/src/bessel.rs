//! Modified Bessel function of the second kind, order one.
//!
//! * `x ≤ 2`: the ascending series
//!   `K₁(x) = 1/x + ln(x/2) I₁(x) − (x/4) Σ [ψ(k+1) + ψ(k+2)] (x²/4)^k / (k!(k+1)!)`.
//! * `x > 2`: Steed's continued fraction for the exponentially scaled pair
//!   `eˣK₀`, `eˣK₁` (Temme's formulation with order offset μ = 0).

use std::f64::consts::PI;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_SWITCH: f64 = 2.0;

fn check(x: f64) -> Result<()> {
    if x.is_nan() || x <= 0.0 {
        return Err(Error::invalid("x", format!("K1 needs x > 0, got {x}")));
    }
    Ok(())
}

/// `K₁(x)` for `x > 0`.
pub fn bessel_k1(x: f64) -> Result<f64> {
    check(x)?;
    if x <= SERIES_SWITCH {
        Ok(k1_series(x))
    } else {
        Ok(k1_scaled_fraction(x) * (-x).exp())
    }
}

/// `eˣ K₁(x)` for `x > 0`; finite for arguments where `K₁` itself underflows.
pub fn bessel_k1_scaled(x: f64) -> Result<f64> {
    check(x)?;
    if x <= SERIES_SWITCH {
        Ok(k1_series(x) * x.exp())
    } else {
        Ok(k1_scaled_fraction(x))
    }
}

fn k1_series(x: f64) -> f64 {
    let y = 0.25 * x * x;
    let log_half = (0.5 * x).ln();
    // term_k = (x²/4)^k / (k!(k+1)!)
    let mut term = 1.0;
    // ψ(k+1) + ψ(k+2) with ψ(n) = −γ + H_{n−1}
    let mut harmonic = 0.0; // H_k
    let mut i1_sum = 0.0;
    let mut psi_sum = 0.0;
    for k in 0..60 {
        let kf = k as f64;
        let psi = 2.0 * (-EULER_GAMMA + harmonic) + 1.0 / (kf + 1.0);
        i1_sum += term;
        psi_sum += psi * term;
        if term < 1e-18 * i1_sum {
            break;
        }
        harmonic += 1.0 / (kf + 1.0);
        term *= y / ((kf + 1.0) * (kf + 2.0));
    }
    let i1 = 0.5 * x * i1_sum;
    1.0 / x + log_half * i1 - 0.25 * x * psi_sum
}

fn k1_scaled_fraction(x: f64) -> f64 {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut h = d;
    let mut delh = d;
    let mut q1 = 0.0;
    let mut q2 = 1.0;
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    h *= a1;
    let k0 = (PI / (2.0 * x)).sqrt() / s;
    k0 * (x + 0.5 - h) / x
}
