//! The radial (xi) equation, solved by a Jaffe-type series.
//!
//! Equation, with q = E R^2 / 2 and b the convention-dependent linear
//! coefficient (+2R attractive, -2R as printed):
//!
//! ```text
//! (xi^2 - 1) X'' + 2 xi X' + (q xi^2 + b xi + A) X = 0
//! ```
//!
//! Substituting X = e^{-p xi} (xi+1)^sigma sum_n g_n t^n with
//! t = (xi-1)/(xi+1), p = sqrt(-q), sigma = b/(2p) - 1 turns the equation
//! into the three-term recurrence
//!
//! ```text
//! (n+1)^2 g_{n+1} - [2n^2 + (4p - 2 sigma) n + p^2 - 2 p sigma - sigma - A] g_n
//!                 + (n - sigma - 1)^2 g_{n-1} = 0
//! ```
//!
//! A bounded, exponentially decaying X exists exactly when the ratio
//! g_1/g_0 forced by the n = 0 row coincides with the minimal-solution
//! ratio of the recurrence, which is what [`radial_residual`] measures.

use crate::error::{Error, Result};
use crate::geometry::SystemConfig;

const MAX_CF_DEPTH: usize = 1 << 20;

/// Jaffe-series representation of the bound radial factor X(xi).
#[derive(Debug, Clone)]
pub struct RadialSolution {
    /// Exponential decay rate p = sqrt(-E R^2 / 2).
    pub p: f64,
    /// Power exponent sigma = b/(2p) - 1.
    pub sigma: f64,
    /// Series coefficients g_n over t = (xi-1)/(xi+1); g_0 = 1.
    pub jaffe_coeffs: Vec<f64>,
    /// Series length used.
    pub truncation_n: usize,
    /// |g_N| t_ref^N at the reference evaluation radius.
    pub tail_estimate: f64,
    pub e: f64,
    pub a: f64,
    pub r: f64,
    /// Linear-term coefficient b actually used.
    pub linear_coeff: f64,
}

struct Recurrence {
    p: f64,
    sigma: f64,
    a: f64,
}

impl Recurrence {
    fn new(e: f64, a: f64, cfg: &SystemConfig) -> Result<Self> {
        if !(e.is_finite() && a.is_finite()) {
            return Err(Error::NonFiniteInput { what: "(E, A)" });
        }
        if e >= 0.0 {
            return Err(Error::NonBoundEnergy { e });
        }
        let p = (-0.5 * e).sqrt() * cfg.r;
        let b = cfg.sign_convention.linear_coeff(cfg.r);
        let sigma = b / (2.0 * p) - 1.0;
        Ok(Recurrence { p, sigma, a })
    }

    fn alpha(&self, n: f64) -> f64 {
        (n + 1.0) * (n + 1.0)
    }

    fn beta(&self, n: f64) -> f64 {
        -(2.0 * n * n
            + (4.0 * self.p - 2.0 * self.sigma) * n
            + self.p * self.p
            - 2.0 * self.p * self.sigma
            - self.sigma
            - self.a)
    }

    fn gamma(&self, n: f64) -> f64 {
        let d = n - self.sigma - 1.0;
        d * d
    }

    /// Minimal-solution ratio g_1/g_0 by backward continued-fraction
    /// evaluation from depth n_max, with a Lentz-style guard against zero
    /// denominators.
    fn cf_ratio(&self, n_max: usize) -> f64 {
        let mut r = 0.0;
        for n in (1..=n_max).rev() {
            let nf = n as f64;
            let mut den = self.beta(nf) + self.alpha(nf) * r;
            if den == 0.0 {
                den = 1e-300;
            }
            r = -self.gamma(nf) / den;
        }
        r
    }

    /// Ratio required by the n = 0 row: alpha_0 g_1 + beta_0 g_0 = 0.
    fn required_ratio(&self) -> f64 {
        -self.beta(0.0) / self.alpha(0.0)
    }

    /// Doubles the evaluation depth until the continued fraction stabilizes.
    fn converged_depth(&self) -> usize {
        let mut n = 128usize;
        let mut prev = self.cf_ratio(n);
        while n < MAX_CF_DEPTH {
            n *= 2;
            let cur = self.cf_ratio(n);
            if (cur - prev).abs() <= 1e-13 * prev.abs().max(1.0) {
                return n;
            }
            prev = cur;
        }
        MAX_CF_DEPTH
    }
}

/// Minimal-solution defect of the three-term recurrence: the difference
/// between the ratio demanded by the first row and the continued-fraction
/// (minimal-solution) ratio. Crosses zero exactly at the quantized (E, A).
pub fn radial_residual(e: f64, a: f64, cfg: &SystemConfig) -> Result<f64> {
    let rec = Recurrence::new(e, a, cfg)?;
    let depth = rec.converged_depth();
    Ok(rec.required_ratio() - rec.cf_ratio(depth))
}

/// Same defect at a fixed evaluation depth (for scans and tests).
pub fn radial_residual_at_depth(e: f64, a: f64, cfg: &SystemConfig, depth: usize) -> Result<f64> {
    assert!(depth >= 16);
    let rec = Recurrence::new(e, a, cfg)?;
    Ok(rec.required_ratio() - rec.cf_ratio(depth))
}

/// Fills the Jaffe series for a quantized (E, A) pair.
///
/// Coefficients come from the stable backward-ratio pass (the forward
/// recurrence is dominated by the growing solution), normalized to g_0 = 1.
pub fn jaffe_coeffs(e: f64, a: f64, cfg: &SystemConfig, n_min: usize) -> Result<RadialSolution> {
    assert!(n_min >= 16, "N must be >= 16");
    let rec = Recurrence::new(e, a, cfg)?;
    let n = rec.converged_depth().max(n_min);

    // backward ratios r_k = g_{k+1} / g_k of the minimal solution
    let mut ratios = vec![0.0; n];
    let mut r = 0.0;
    for k in (1..=n).rev() {
        let kf = k as f64;
        let mut den = rec.beta(kf) + rec.alpha(kf) * r;
        if den == 0.0 {
            den = 1e-300;
        }
        r = -rec.gamma(kf) / den;
        if k - 1 < n {
            ratios[k - 1] = r;
        }
    }

    let mut g = vec![0.0; n + 1];
    g[0] = 1.0;
    for k in 0..n {
        g[k + 1] = ratios[k] * g[k];
        if g[k + 1].abs() < 1e-280 {
            // the remaining minimal-solution coefficients are negligible
            g.truncate(k + 2);
            break;
        }
    }
    let n_kept = g.len() - 1;

    let xi_ref = (1.0 + 40.0 / rec.p).max(20.0);
    let t_ref = (xi_ref - 1.0) / (xi_ref + 1.0);
    let tail = g[n_kept].abs() * t_ref.powi(n_kept as i32);

    Ok(RadialSolution {
        p: rec.p,
        sigma: rec.sigma,
        jaffe_coeffs: g,
        truncation_n: n_kept,
        tail_estimate: tail,
        e,
        a,
        r: cfg.r,
        linear_coeff: cfg.sign_convention.linear_coeff(cfg.r),
    })
}

impl RadialSolution {
    pub fn q(&self) -> f64 {
        0.5 * self.e * self.r * self.r
    }

    /// Evaluates X(xi) = e^{-p xi} (xi+1)^sigma sum g_n t^n.
    pub fn eval(&self, xi: f64) -> f64 {
        debug_assert!(xi >= 1.0 - 1e-12);
        let xi = xi.max(1.0);
        let t = (xi - 1.0) / (xi + 1.0);
        let u: f64 = self.jaffe_coeffs.iter().rev().fold(0.0, |acc, &g| acc * t + g);
        (-self.p * xi).exp() * (xi + 1.0).powf(self.sigma) * u
    }

    /// X(xi) with the exponential stripped: e^{+p xi} X(xi), finite as
    /// xi -> infinity within the series domain.
    pub fn eval_scaled(&self, xi: f64) -> f64 {
        let t = (xi - 1.0) / (xi + 1.0);
        let u: f64 = self.jaffe_coeffs.iter().rev().fold(0.0, |acc, &g| acc * t + g);
        (xi + 1.0).powf(self.sigma) * u
    }

    /// Normalized residual of the xi equation at one point, from analytic
    /// derivatives of the series representation.
    pub fn residual(&self, xi: f64) -> f64 {
        let t = (xi - 1.0) / (xi + 1.0);
        let (u, up, upp) = horner_with_derivatives(&self.jaffe_coeffs, t);
        let h = -self.p + self.sigma / (xi + 1.0);
        let hp = -self.sigma / ((xi + 1.0) * (xi + 1.0));
        let tp = 2.0 / ((xi + 1.0) * (xi + 1.0));
        let tpp = -4.0 / ((xi + 1.0) * (xi + 1.0) * (xi + 1.0));
        let e_fac = (-self.p * xi).exp() * (xi + 1.0).powf(self.sigma);
        let x = e_fac * u;
        let xp = e_fac * (h * u + up * tp);
        let xpp = e_fac * ((h * h + hp) * u + 2.0 * h * up * tp + upp * tp * tp + up * tpp);
        let pot = self.q() * xi * xi + self.linear_coeff * xi + self.a;
        let term1 = (xi * xi - 1.0) * xpp;
        let term2 = 2.0 * xi * xp;
        let term3 = pot * x;
        let scale = term1.abs().max(term2.abs()).max(term3.abs()).max(1e-300);
        (term1 + term2 + term3) / scale
    }
}

fn horner_with_derivatives(c: &[f64], x: f64) -> (f64, f64, f64) {
    let mut u = 0.0;
    let mut up = 0.0;
    let mut upp = 0.0;
    for &ck in c.iter().rev() {
        upp = upp * x + 2.0 * up;
        up = up * x + u;
        u = u * x + ck;
    }
    (u, up, upp)
}
