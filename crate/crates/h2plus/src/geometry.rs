//! Prolate spheroidal coordinates for two nuclei fixed on the z-axis.
//!
//! Nucleus 1 sits at z = -R/2 and nucleus 2 at z = +R/2, so that
//! `eta = (r1 - r2) / R` and `xi = (r1 + r2) / R` with r1, r2 the distances
//! to nuclei 1 and 2. The surface eta = +1 is the half-axis on the nucleus-2
//! side. Both nuclear charges are fixed at 1.

use crate::error::{Error, Result};

/// Linear-term sign convention of the radial equation.
///
/// The physically attractive electron-nucleus interaction produces `+2R xi`;
/// `AsPrinted` selects `-2R xi` so the two can be compared by
/// [`crate::quantize::convention_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignConvention {
    Attractive,
    AsPrinted,
}

impl SignConvention {
    /// Coefficient b of the linear `b*xi` term in the radial equation.
    pub fn linear_coeff(self, r: f64) -> f64 {
        match self {
            SignConvention::Attractive => 2.0 * r,
            SignConvention::AsPrinted => -2.0 * r,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SignConvention::Attractive => "attractive",
            SignConvention::AsPrinted => "as_printed",
        }
    }
}

/// Electronic state selector (extension point; only the ground gerade
/// sigma state is implemented).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElectronicState {
    GroundGerade,
}

/// Fixed-nuclei system: internuclear distance plus solver conventions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    /// Internuclear distance in bohr, > 0.
    pub r: f64,
    pub sign_convention: SignConvention,
    pub state: ElectronicState,
}

impl SystemConfig {
    pub fn new(r: f64) -> Result<Self> {
        if !r.is_finite() || r <= 0.0 {
            return Err(Error::NonFiniteInput {
                what: "internuclear distance R must be finite and > 0",
            });
        }
        Ok(SystemConfig {
            r,
            sign_convention: SignConvention::Attractive,
            state: ElectronicState::GroundGerade,
        })
    }

    pub fn with_convention(mut self, conv: SignConvention) -> Self {
        self.sign_convention = conv;
        self
    }

    /// Position of nucleus 1 (z-coordinate, bohr).
    pub fn nucleus1_z(&self) -> f64 {
        -0.5 * self.r
    }

    /// Position of nucleus 2 (z-coordinate, bohr).
    pub fn nucleus2_z(&self) -> f64 {
        0.5 * self.r
    }
}

/// A point (xi, eta, phi) in prolate spheroidal coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProlatePoint {
    /// Radial-like coordinate, >= 1.
    pub xi: f64,
    /// Angular-like coordinate in [-1, 1].
    pub eta: f64,
    /// Azimuthal angle in [0, 2*pi).
    pub phi: f64,
}

impl ProlatePoint {
    /// Clamps xi and eta onto their domains; values more than 1e-12 outside
    /// are rejected.
    pub fn new(xi: f64, eta: f64, phi: f64) -> Result<Self> {
        if !(xi.is_finite() && eta.is_finite() && phi.is_finite()) {
            return Err(Error::NonFiniteInput {
                what: "prolate coordinates",
            });
        }
        if xi < 1.0 - 1e-12 || eta.abs() > 1.0 + 1e-12 {
            return Err(Error::NonFiniteInput {
                what: "xi < 1 or |eta| > 1 beyond clamping tolerance",
            });
        }
        Ok(ProlatePoint {
            xi: xi.max(1.0),
            eta: eta.clamp(-1.0, 1.0),
            phi: phi.rem_euclid(2.0 * std::f64::consts::PI),
        })
    }

    /// Focal point at nucleus 1 (eta = -1) or nucleus 2 (eta = +1).
    pub fn focus(nucleus: u8) -> Self {
        let eta = if nucleus == 1 { -1.0 } else { 1.0 };
        ProlatePoint { xi: 1.0, eta, phi: 0.0 }
    }
}

/// Converts a Cartesian point to prolate coordinates.
///
/// Also returns the distances r1, r2 to the two nuclei. Errors with
/// [`Error::NucleusCoincidence`] within 1e-14 bohr of a nucleus; callers
/// evaluating there must use [`ProlatePoint::focus`] explicitly.
pub fn to_prolate(x: f64, y: f64, z: f64, cfg: &SystemConfig) -> Result<(ProlatePoint, f64, f64)> {
    let half = 0.5 * cfg.r;
    let r1 = (x * x + y * y + (z + half) * (z + half)).sqrt();
    let r2 = (x * x + y * y + (z - half) * (z - half)).sqrt();
    if r1 < 1e-14 {
        return Err(Error::NucleusCoincidence { nucleus: 1 });
    }
    if r2 < 1e-14 {
        return Err(Error::NucleusCoincidence { nucleus: 2 });
    }
    let xi = (r1 + r2) / cfg.r;
    let eta = (r1 - r2) / cfg.r;
    let phi = y.atan2(x).rem_euclid(2.0 * std::f64::consts::PI);
    Ok((ProlatePoint::new(xi, eta, phi)?, r1, r2))
}

/// Inverse map; consistent with [`to_prolate`] labeling (eta = +1 is the
/// nucleus-2 side).
pub fn to_cartesian(p: &ProlatePoint, cfg: &SystemConfig) -> (f64, f64, f64) {
    let half = 0.5 * cfg.r;
    let z = half * p.xi * p.eta;
    let rho2 = (p.xi * p.xi - 1.0).max(0.0) * (1.0 - p.eta * p.eta).max(0.0);
    let rho = half * rho2.sqrt();
    (rho * p.phi.cos(), rho * p.phi.sin(), z)
}

/// Jacobian factor of the volume element: dV = weight * dxi * deta * dphi.
pub fn volume_weight(p: &ProlatePoint, cfg: &SystemConfig) -> f64 {
    let half = 0.5 * cfg.r;
    half * half * half * (p.xi * p.xi - p.eta * p.eta)
}
