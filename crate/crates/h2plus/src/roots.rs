//! Scalar root bracketing and refinement (bisection with secant polishing).

use crate::error::{Error, Result};

/// Refines a root of f inside a sign-changing bracket to |hi - lo| <= xtol.
///
/// Tries a secant step first and falls back to bisection whenever the
/// secant iterate leaves the bracket or fails to shrink it. Returns
/// (root, f(root), iterations).
pub fn refine<F>(
    mut f: F,
    bracket: ((f64, f64), (f64, f64)),
    xtol: f64,
    max_iter: usize,
) -> Result<(f64, f64, usize)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let ((mut lo, mut flo), (mut hi, mut fhi)) = bracket;
    assert!(lo < hi && flo * fhi <= 0.0, "refine needs a sign change");
    if flo == 0.0 {
        return Ok((lo, 0.0, 0));
    }
    if fhi == 0.0 {
        return Ok((hi, 0.0, 0));
    }
    let mut best = (lo, flo);
    for it in 1..=max_iter {
        if hi - lo <= xtol {
            return Ok((best.0, best.1, it));
        }
        let mid = 0.5 * (lo + hi);
        let secant = if fhi != flo {
            hi - fhi * (hi - lo) / (fhi - flo)
        } else {
            mid
        };
        let margin = 0.01 * (hi - lo);
        let x = if secant > lo + margin && secant < hi - margin {
            secant
        } else {
            mid
        };
        let fx = f(x)?;
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx == 0.0 {
            return Ok((x, 0.0, it));
        }
        if flo * fx < 0.0 {
            hi = x;
            fhi = fx;
        } else {
            lo = x;
            flo = fx;
        }
    }
    Err(Error::ConvergenceFailed { max_iter })
}

/// Scans candidate abscissas in order and returns every adjacent pair with a
/// sign change of f, together with the sampled values.
pub fn sign_change_brackets<F>(
    mut f: F,
    xs: &[f64],
) -> Result<(Vec<((f64, f64), (f64, f64))>, Vec<(f64, f64)>)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let mut samples = Vec::with_capacity(xs.len());
    for &x in xs {
        let v = f(x)?;
        samples.push((x, v));
    }
    let mut brackets = Vec::new();
    for w in samples.windows(2) {
        let (x0, f0) = w[0];
        let (x1, f1) = w[1];
        if f0.is_finite() && f1.is_finite() && f0 * f1 < 0.0 {
            brackets.push(((x0, f0), (x1, f1)));
        }
    }
    Ok((brackets, samples))
}
