//! Bracketed root refinement: bisection down to a width tolerance, then a few
//! secant (regula falsi) steps that are only accepted inside the bracket.

use crate::error::{Error, Result};

const MAX_BISECTIONS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
}

/// Refines a sign change of `f` on `[lo, hi]`.
///
/// `width` gives the acceptable bracket width as a function of the current
/// midpoint.
pub fn bisect_secant<F, W>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    mut f_lo: f64,
    mut f_hi: f64,
    width: W,
    secant_steps: usize,
) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
    W: Fn(f64) -> f64,
{
    if f_lo == 0.0 {
        return Ok(Root { x: lo, fx: 0.0, iterations: 0 });
    }
    if f_hi == 0.0 {
        return Ok(Root { x: hi, fx: 0.0, iterations: 0 });
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::invalid("bracket", "function has no sign change on the bracket"));
    }
    let mut iterations = 0;
    while (hi - lo).abs() > width(0.5 * (lo + hi)) {
        if iterations >= MAX_BISECTIONS {
            return Err(Error::ConvergenceFailure {
                context: "bisection",
                best: 0.5 * (lo + hi),
                error: (hi - lo).abs(),
            });
        }
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let f_mid = f(mid)?;
        iterations += 1;
        if f_mid == 0.0 {
            return Ok(Root { x: mid, fx: 0.0, iterations });
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }

    let (mut best, mut f_best) = if f_lo.abs() < f_hi.abs() {
        (lo, f_lo)
    } else {
        (hi, f_hi)
    };
    for _ in 0..secant_steps {
        let denom = f_hi - f_lo;
        if denom == 0.0 {
            break;
        }
        let x = hi - f_hi * (hi - lo) / denom;
        if !(x > lo.min(hi) && x < lo.max(hi)) {
            break;
        }
        let fx = f(x)?;
        iterations += 1;
        if fx.abs() < f_best.abs() {
            best = x;
            f_best = fx;
        }
        if fx == 0.0 {
            break;
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
    }
    Ok(Root {
        x: best,
        fx: f_best,
        iterations,
    })
}
