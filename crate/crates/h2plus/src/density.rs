//! Normalized wavefunction assembly and electron-density diagnostics:
//! Cartesian density grids, axis profiles, second-moment anisotropy, the
//! nuclear cusp, and the two-term amplitude table.

use crate::angular::{fit_two_term, solve_angular, AngularSolution};
use crate::error::{Error, Result};
use crate::geometry::{to_prolate, ProlatePoint, SystemConfig};
use crate::quadrature::gauss_legendre;
use crate::quantize::{solve_ground, SeparationPair, SolveOptions};
use crate::radial::{jaffe_coeffs, RadialSolution};

/// A normalized bound-state wavefunction Psi = norm * X(xi) Y(eta).
#[derive(Debug, Clone)]
pub struct WaveFunction {
    pub radial: RadialSolution,
    pub angular: AngularSolution,
    pub pair: SeparationPair,
    pub cfg: SystemConfig,
    /// Overall scale making the density integrate to one.
    pub norm: f64,
}

// Radial moments I_k = integral of X^2 xi^k over [1, xi_max], k = 0, 2, 4,
// via the substitution u = p (xi - 1) and panelled Gauss-Legendre in u.
// Returns ([I_0, I_2, I_4], tail_bound).
fn radial_moments(x: &RadialSolution, points: usize) -> ([f64; 3], f64) {
    const PANELS: [f64; 9] = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0];
    let (nodes, weights) = gauss_legendre(points);
    let p = x.p;
    let mut acc = [0.0_f64; 3];
    for w in PANELS.windows(2) {
        let (a, b) = (w[0], w[1]);
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        for (t, wq) in nodes.iter().zip(&weights) {
            let u = mid + half * t;
            let xi = 1.0 + u / p;
            let xx = x.eval(xi);
            let base = xx * xx * wq * half / p;
            acc[0] += base;
            acc[1] += base * xi * xi;
            acc[2] += base * xi * xi * xi * xi;
        }
    }
    let xi_end = 1.0 + PANELS[8] / p;
    let x_end = x.eval(xi_end);
    // crude but safe bound on the discarded exponential tail
    let tail = x_end * x_end * xi_end.powi(4) * (1.0 + 1.0 / (2.0 * p)) * 64.0;
    (acc, tail)
}

// Angular moments J_m = integral of Y^2 eta^m over [-1, 1], m = 0, 2, 4.
fn angular_moments(y: &AngularSolution, order: usize) -> [f64; 3] {
    let (nodes, weights) = gauss_legendre(order);
    let mut acc = [0.0_f64; 3];
    for (t, w) in nodes.iter().zip(&weights) {
        let yy = y.eval(*t);
        let base = yy * yy * w;
        acc[0] += base;
        acc[1] += base * t * t;
        acc[2] += base * t * t * t * t;
    }
    acc
}

/// The density normalization integral (before scaling) and its tail bound.
pub fn norm_integral(
    radial: &RadialSolution,
    angular: &AngularSolution,
    cfg: &SystemConfig,
    eta_order: usize,
    xi_points: usize,
) -> Result<(f64, f64)> {
    let (ix, tail) = radial_moments(radial, xi_points);
    let jy = angular_moments(angular, eta_order);
    let half = 0.5 * cfg.r;
    let total = 2.0 * std::f64::consts::PI * half.powi(3) * (ix[1] * jy[0] - ix[0] * jy[1]);
    let tail_scaled = 2.0 * std::f64::consts::PI * half.powi(3) * tail * jy[0];
    if tail_scaled > 1e-12 * total {
        return Err(Error::QuadratureNotConverged { tail: tail_scaled / total });
    }
    Ok((total, tail_scaled))
}

/// Normalizes Psi = X * Y over all space (Gauss-Legendre in eta, panelled
/// mapped Gauss in xi with an exponential tail bound below 1e-12).
pub fn normalize(
    radial: RadialSolution,
    angular: AngularSolution,
    cfg: &SystemConfig,
) -> Result<WaveFunction> {
    debug_assert!((radial.e - angular.e).abs() <= 1e-9 * radial.e.abs());
    let (total, _) = norm_integral(&radial, &angular, cfg, 96, 40)?;
    let pair = SeparationPair {
        e_elec: radial.e,
        a: radial.a,
        r: cfg.r,
        e_total: radial.e + 1.0 / cfg.r,
        iterations: 0,
        defect: crate::radial::radial_residual(radial.e, radial.a, cfg)?.abs(),
    };
    Ok(WaveFunction {
        norm: 1.0 / total.sqrt(),
        radial,
        angular,
        pair,
        cfg: *cfg,
    })
}

impl WaveFunction {
    /// Solves the ground state at cfg and assembles the normalized
    /// wavefunction.
    pub fn solve(cfg: &SystemConfig, opts: &SolveOptions) -> Result<WaveFunction> {
        let pair = solve_ground(cfg, opts)?;
        Self::from_pair(cfg, &pair)
    }

    /// Assembles the normalized wavefunction for an already-quantized pair.
    pub fn from_pair(cfg: &SystemConfig, pair: &SeparationPair) -> Result<WaveFunction> {
        let radial = jaffe_coeffs(pair.e_elec, pair.a, cfg, 16)?;
        let angular = solve_angular(pair.e_elec, cfg)?;
        let mut wf = normalize(radial, angular, cfg)?;
        wf.pair = *pair;
        Ok(wf)
    }

    /// Psi at a prolate point.
    pub fn eval_prolate(&self, p: &ProlatePoint) -> f64 {
        self.norm * self.radial.eval(p.xi) * self.angular.eval(p.eta)
    }

    /// Electron density at a Cartesian point; exactly at a nucleus the
    /// focal limit point is used.
    pub fn density_at(&self, x: f64, y: f64, z: f64) -> f64 {
        let point = match to_prolate(x, y, z, &self.cfg) {
            Ok((p, _, _)) => p,
            Err(Error::NucleusCoincidence { nucleus }) => ProlatePoint::focus(nucleus),
            Err(_) => unreachable!("to_prolate only fails with NucleusCoincidence"),
        };
        let psi = self.eval_prolate(&point);
        psi * psi
    }
}

/// Which plane a density grid samples.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Plane {
    /// Contains the internuclear axis; axes (x, z).
    Xz,
    /// Perpendicular bisector plane; axes (x, y).
    Xy,
    /// Internuclear axis profile (1-D export).
    Axis,
}

impl Plane {
    pub fn axis_labels(self) -> (&'static str, &'static str) {
        match self {
            Plane::Xz => ("x", "z"),
            Plane::Xy => ("x", "y"),
            Plane::Axis => ("z", "rho"),
        }
    }
}

/// Provenance carried by every exported grid. The timestamp is `None` so
/// identical inputs produce byte-identical outputs.
#[derive(Debug, Clone)]
pub struct GridMeta {
    pub r: f64,
    pub e_elec: f64,
    pub e_total: f64,
    pub a: f64,
    pub convention: &'static str,
    pub timestamp: Option<String>,
}

/// A rectilinear density grid over one plane, row-major over (first axis,
/// second axis).
#[derive(Debug, Clone)]
pub struct DensityGrid {
    pub plane: Plane,
    /// Coordinate of the lower-left corner along both axes.
    pub origin: f64,
    pub spacing: f64,
    /// Points per axis.
    pub dims: usize,
    pub values: Vec<f64>,
    pub meta: GridMeta,
}

impl DensityGrid {
    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.dims + j]
    }

    pub fn coord(&self, index: usize) -> f64 {
        self.origin + self.spacing * index as f64
    }
}

/// Samples the density on an n x n grid centered on the bond midpoint.
pub fn density_slice(wf: &WaveFunction, plane: Plane, half_width: f64, n: usize) -> DensityGrid {
    assert!(n >= 64, "grid needs at least 64 points per axis");
    assert!(plane != Plane::Axis, "axis profiles come from axis_report");
    let spacing = 2.0 * half_width / (n - 1) as f64;
    let origin = -half_width;
    let mut values = Vec::with_capacity(n * n);
    for i in 0..n {
        let first = origin + spacing * i as f64;
        for j in 0..n {
            let second = origin + spacing * j as f64;
            let rho = match plane {
                Plane::Xz => wf.density_at(first, 0.0, second),
                Plane::Xy => wf.density_at(first, second, 0.0),
                Plane::Axis => unreachable!(),
            };
            debug_assert!(rho.is_finite() && rho >= 0.0);
            values.push(rho);
        }
    }
    DensityGrid {
        plane,
        origin,
        spacing,
        dims: n,
        values,
        meta: GridMeta {
            r: wf.cfg.r,
            e_elec: wf.pair.e_elec,
            e_total: wf.pair.e_total,
            a: wf.pair.a,
            convention: wf.cfg.sign_convention.name(),
            timestamp: None,
        },
    }
}

/// One strict local maximum of the axis profile.
#[derive(Debug, Clone, Copy)]
pub struct AxisMaximum {
    pub z: f64,
    pub rho: f64,
}

/// The density profile along the internuclear axis plus shape diagnostics.
#[derive(Debug, Clone)]
pub struct AxisReport {
    pub z: Vec<f64>,
    pub rho: Vec<f64>,
    pub maxima: Vec<AxisMaximum>,
    /// (<z^2> - <x^2>) / (<z^2> + <x^2>) from quadrature moments.
    pub anisotropy: f64,
}

/// Samples rho along the z-axis over [-2R-2, 2R+2] and reports strict local
/// maxima (3-point test with plateau merging) and the moment anisotropy.
pub fn axis_report(wf: &WaveFunction, n: usize) -> AxisReport {
    assert!(n >= 1001, "axis profile needs at least 1001 samples");
    let span = 2.0 * wf.cfg.r + 2.0;
    let z: Vec<f64> = (0..n)
        .map(|i| -span + 2.0 * span * i as f64 / (n - 1) as f64)
        .collect();
    let rho: Vec<f64> = z.iter().map(|&zi| wf.density_at(0.0, 0.0, zi)).collect();

    let mut maxima = Vec::new();
    let mut i = 1;
    while i + 1 < n {
        if rho[i] > rho[i - 1] {
            // plateau of equal values starting at i
            let mut j = i;
            while j + 1 < n && rho[j + 1] == rho[i] {
                j += 1;
            }
            if j + 1 < n && rho[j + 1] < rho[i] {
                let mid = (i + j) / 2;
                maxima.push(AxisMaximum { z: z[mid], rho: rho[mid] });
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }

    AxisReport {
        anisotropy: moment_anisotropy(wf),
        z,
        rho,
        maxima,
    }
}

/// Second-moment anisotropy of the density, quadrature-exact.
pub fn moment_anisotropy(wf: &WaveFunction) -> f64 {
    let (ix, _) = radial_moments(&wf.radial, 40);
    let jy = angular_moments(&wf.angular, 96);
    // z^2 = (R/2)^2 xi^2 eta^2; integrating cos^2(phi) halves the x^2 weight
    let nz = 2.0 * (ix[2] * jy[1] - ix[1] * jy[2]);
    let nx = ix[2] * (jy[0] - jy[1]) + ix[1] * (jy[2] - jy[0]) + ix[0] * (jy[1] - jy[2]);
    (nz - nx) / (nz + nx)
}

// Lebedev 26-point spherical design: octahedron vertices (weight 1/21),
// edge midpoints (4/105) and cube vertices (9/280).
fn lebedev26() -> Vec<([f64; 3], f64)> {
    let mut pts = Vec::with_capacity(26);
    let w1 = 1.0 / 21.0;
    let w2 = 4.0 / 105.0;
    let w3 = 9.0 / 280.0;
    for s in [-1.0, 1.0] {
        pts.push(([s, 0.0, 0.0], w1));
        pts.push(([0.0, s, 0.0], w1));
        pts.push(([0.0, 0.0, s], w1));
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    for s in [-1.0, 1.0] {
        for t in [-1.0, 1.0] {
            pts.push(([s * h, t * h, 0.0], w2));
            pts.push(([s * h, 0.0, t * h], w2));
            pts.push(([0.0, s * h, t * h], w2));
        }
    }
    let g = 1.0 / 3.0_f64.sqrt();
    for s in [-1.0, 1.0] {
        for t in [-1.0, 1.0] {
            for u in [-1.0, 1.0] {
                pts.push(([s * g, t * g, u * g], w3));
            }
        }
    }
    pts
}

/// Measured nuclear cusp.
#[derive(Debug, Clone)]
pub struct CuspReport {
    /// Slope estimate rho_bar'(0) / (2 rho_bar(0)); -1 for the exact
    /// solution at unit nuclear charge.
    pub kappa: f64,
    /// Extrapolated spherical average at r = 0.
    pub rho_bar0: f64,
    pub radii: Vec<f64>,
    pub rho_bar: Vec<f64>,
}

/// Spherically averages the density on small spheres around one nucleus and
/// fits the logarithmic slope at r -> 0.
pub fn cusp_diagnostic(wf: &WaveFunction, nucleus: u8, radii: &[f64]) -> Result<CuspReport> {
    if radii.len() < 4 || radii.iter().any(|&r| !(1e-4..=1e-2).contains(&r)) {
        return Err(Error::RadiiOutOfRange);
    }
    let zc = match nucleus {
        1 => wf.cfg.nucleus1_z(),
        _ => wf.cfg.nucleus2_z(),
    };
    let directions = lebedev26();
    let rho_bar: Vec<f64> = radii
        .iter()
        .map(|&r| {
            directions
                .iter()
                .map(|(d, w)| w * wf.density_at(r * d[0], r * d[1], zc + r * d[2]))
                .sum()
        })
        .collect();

    // quadratic fit of ln rho_bar against r
    let mut m = [[0.0_f64; 3]; 3];
    let mut b = [0.0_f64; 3];
    for (&r, &v) in radii.iter().zip(&rho_bar) {
        let basis = [1.0, r, r * r];
        let y = v.ln();
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] += basis[i] * basis[j];
            }
            b[i] += basis[i] * y;
        }
    }
    let c = solve3(m, b);
    Ok(CuspReport {
        kappa: 0.5 * c[1],
        rho_bar0: c[0].exp(),
        radii: radii.to_vec(),
        rho_bar,
    })
}

fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> [f64; 3] {
    // Gaussian elimination with partial pivoting
    for col in 0..3 {
        let piv = (col..3)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        m.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut s = b[row];
        for k in row + 1..3 {
            s -= m[row][k] * x[k];
        }
        x[row] = s / m[row][row];
    }
    x
}

/// Two-term amplitudes for one internuclear distance.
#[derive(Debug, Clone)]
pub struct AmplitudeData {
    pub d1: f64,
    pub d2: f64,
    pub ratio_abs: f64,
    pub assembly_residual: f64,
    pub fit_residual: f64,
    pub eta0_defect: f64,
}

/// One row of the amplitude table; flagged rows keep the reason string.
#[derive(Debug, Clone)]
pub struct AmplitudeRow {
    pub r: f64,
    pub outcome: std::result::Result<AmplitudeData, String>,
}

/// Runs the full solve plus the two-term fit for every R; rows with an
/// imaginary sqrt(A) (or any solver failure) are flagged, not dropped.
pub fn term_amplitudes(r_values: &[f64], opts: &SolveOptions) -> Vec<AmplitudeRow> {
    r_values
        .iter()
        .map(|&r| {
            let outcome = (|| -> Result<AmplitudeData> {
                let cfg = SystemConfig::new(r)?;
                let pair = solve_ground(&cfg, opts)?;
                let angular = solve_angular(pair.e_elec, &cfg)?;
                let fit = fit_two_term(&angular, &cfg)?;
                Ok(AmplitudeData {
                    d1: fit.d1,
                    d2: fit.d2,
                    ratio_abs: (fit.d2 / fit.d1).abs(),
                    assembly_residual: fit.assembly_residual,
                    fit_residual: fit.fit_residual,
                    eta0_defect: fit.eta0_defect,
                })
            })()
            .map_err(|e| e.to_string());
            AmplitudeRow { r, outcome }
        })
        .collect()
}

/// Whether |D2/D1| is non-increasing across the (R-ascending) rows.
/// `None` when fewer than two rows are usable.
pub fn ratio_nonincreasing(rows: &[AmplitudeRow]) -> Option<bool> {
    let ratios: Vec<f64> = rows
        .iter()
        .filter_map(|r| r.outcome.as_ref().ok().map(|d| d.ratio_abs))
        .collect();
    if ratios.len() < 2 {
        return None;
    }
    Some(ratios.windows(2).all(|w| w[1] <= w[0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};

    fn ground(r: f64) -> WaveFunction {
        let cfg = SystemConfig::new(r).unwrap();
        WaveFunction::solve(&cfg, &SolveOptions::default()).unwrap()
    }

    #[test]
    fn renormalization_closes() {
        let wf = ground(2.0);
        let (total, _) = norm_integral(&wf.radial, &wf.angular, &wf.cfg, 96, 40).unwrap();
        assert_relative_eq!(total * wf.norm * wf.norm, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn doubling_quadrature_orders_is_stable() {
        let wf = ground(2.0);
        let (a, _) = norm_integral(&wf.radial, &wf.angular, &wf.cfg, 96, 40).unwrap();
        let (b, _) = norm_integral(&wf.radial, &wf.angular, &wf.cfg, 192, 80).unwrap();
        assert_relative_eq!(a, b, epsilon = 1e-9, max_relative = 1e-9);
    }

    #[test]
    fn mirror_symmetry_of_density() {
        let wf = ground(2.0);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let x = rng.gen_range(-3.0..3.0);
            let y = rng.gen_range(-3.0..3.0);
            let z = rng.gen_range(-3.0..3.0);
            let up = wf.density_at(x, y, z);
            let dn = wf.density_at(x, y, -z);
            assert_relative_eq!(up, dn, max_relative = 1e-10);
        }
    }

    #[test]
    fn cylindrical_symmetry_of_density() {
        let wf = ground(2.0);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let rad = rng.gen_range(0.1..3.0);
            let z = rng.gen_range(-3.0..3.0);
            let t1 = rng.gen_range(0.0..std::f64::consts::TAU);
            let t2 = rng.gen_range(0.0..std::f64::consts::TAU);
            let a = wf.density_at(rad * t1.cos(), rad * t1.sin(), z);
            let b = wf.density_at(rad * t2.cos(), rad * t2.sin(), z);
            assert_relative_eq!(a, b, max_relative = 1e-12);
        }
    }

    #[test]
    fn density_positive_at_midpoint() {
        for &r in &[0.008, 0.025, 2.0, 4.0] {
            let wf = ground(r);
            assert!(wf.density_at(0.0, 0.0, 0.0) > 0.0);
        }
    }

    #[test]
    fn nucleus_evaluation_uses_focal_point() {
        let wf = ground(2.0);
        let at_nucleus = wf.density_at(0.0, 0.0, 1.0);
        let nearby = wf.density_at(0.0, 0.0, 1.0 + 1e-9);
        assert!(at_nucleus > 0.0);
        assert_relative_eq!(at_nucleus, nearby, max_relative = 1e-6);
    }

    #[test]
    fn slice_peaks_at_nuclei_for_r2() {
        let wf = ground(2.0);
        let grid = density_slice(&wf, Plane::Xz, 4.0, 201);
        let mut indexed: Vec<(usize, f64)> = grid.values.iter().copied().enumerate().collect();
        indexed.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
        for (flat, _) in indexed.iter().take(2) {
            let i = flat / grid.dims;
            let j = flat % grid.dims;
            let x = grid.coord(i);
            let z = grid.coord(j);
            assert!(x.abs() <= grid.spacing + 1e-12, "peak off axis at x = {x}");
            assert!(
                (z.abs() - 1.0).abs() <= grid.spacing + 1e-12,
                "peak away from nucleus at z = {z}"
            );
        }
    }

    #[test]
    fn small_r_density_is_near_spherical() {
        let wf = ground(0.008);
        // sample the sphere |r| = 0.05
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for i in 0..26 {
            let (d, _) = lebedev26()[i];
            let v = wf.density_at(0.05 * d[0], 0.05 * d[1], 0.05 * d[2]);
            min = min.min(v);
            max = max.max(v);
        }
        assert!(
            (max - min) / min < 0.05,
            "sphere variation {}",
            (max - min) / min
        );
    }

    #[test]
    fn grid_charge_is_bounded_by_one() {
        // integrate the xz slice as a cylindrically symmetric density:
        // 2 pi int rho(x, z) |x| dx dz over the half plane
        let wf = ground(2.0);
        let grid = density_slice(&wf, Plane::Xz, 6.0, 201);
        let mut total = 0.0;
        for i in 0..grid.dims {
            let x = grid.coord(i);
            if x < 0.0 {
                continue;
            }
            for j in 0..grid.dims {
                let border = if i == 0 || i == grid.dims - 1 { 0.5 } else { 1.0 }
                    * if j == 0 || j == grid.dims - 1 { 0.5 } else { 1.0 };
                total += grid.value(i, j) * x * border;
            }
        }
        total *= 2.0 * std::f64::consts::PI * grid.spacing * grid.spacing;
        assert!(total <= 1.0 + 1e-2, "enclosed charge {total}");
        assert!(total > 0.8, "grid missed most of the charge: {total}");
    }

    #[test]
    fn axis_profile_has_two_maxima_at_nuclei_for_r2() {
        let wf = ground(2.0);
        let report = axis_report(&wf, 2001);
        assert_eq!(report.maxima.len(), 2, "maxima: {:?}", report.maxima);
        let step = report.z[1] - report.z[0];
        assert!((report.maxima[0].z + 1.0).abs() <= step);
        assert!((report.maxima[1].z - 1.0).abs() <= step);
    }

    #[test]
    fn united_atom_axis_is_isotropic() {
        let wf = ground(0.008);
        let report = axis_report(&wf, 1001);
        assert!(
            report.anisotropy.abs() <= 0.01,
            "anisotropy {}",
            report.anisotropy
        );
    }

    #[test]
    fn intermediate_r_axis_structure_is_recorded() {
        for &r in &[0.012, 0.025] {
            let wf = ground(r);
            let report = axis_report(&wf, 4001);
            // findings are data: the profile and maxima exist and are finite
            assert!(!report.maxima.is_empty());
            assert!(report.maxima.iter().all(|m| m.rho.is_finite()));
        }
    }

    #[test]
    fn cusp_at_both_nuclei() {
        let radii: Vec<f64> = (0..6).map(|i| 1e-4 * 10f64.powf(i as f64 / 2.5)).collect();
        let wf = ground(2.0);
        let k1 = cusp_diagnostic(&wf, 1, &radii).unwrap();
        let k2 = cusp_diagnostic(&wf, 2, &radii).unwrap();
        assert_abs_diff_eq!(k1.kappa, -1.0, epsilon = 1e-2);
        assert_abs_diff_eq!(k2.kappa, -1.0, epsilon = 1e-2);
        assert_abs_diff_eq!(k1.kappa, k2.kappa, epsilon = 1e-6);
    }

    #[test]
    fn cusp_at_small_r_with_capped_radii() {
        let wf = ground(0.008);
        // radii capped below R/4 so the sphere never crosses the far nucleus
        let radii = [1.0e-4, 1.5e-4, 3.0e-4, 6.0e-4, 1.2e-3, 1.9e-3];
        let rep = cusp_diagnostic(&wf, 2, &radii).unwrap();
        assert_abs_diff_eq!(rep.kappa, -1.0, epsilon = 5e-2);
    }

    #[test]
    fn cusp_rejects_bad_radii() {
        let wf = ground(2.0);
        assert!(matches!(
            cusp_diagnostic(&wf, 1, &[1e-3, 2e-3, 3e-3]),
            Err(Error::RadiiOutOfRange)
        ));
        assert!(matches!(
            cusp_diagnostic(&wf, 1, &[1e-5, 1e-3, 2e-3, 3e-3]),
            Err(Error::RadiiOutOfRange)
        ));
    }

    #[test]
    fn amplitude_table_has_all_rows_populated() {
        let rows = term_amplitudes(&[0.008, 0.012, 0.025, 2.0], &SolveOptions::default());
        assert_eq!(rows.len(), 4);
        for row in &rows {
            let data = row
                .outcome
                .as_ref()
                .unwrap_or_else(|e| panic!("row R = {} flagged: {e}", row.r));
            assert!(data.d1.is_finite() && data.d2.is_finite());
            assert!(data.assembly_residual.is_finite());
            assert!(data.eta0_defect.is_finite());
        }
        assert!(ratio_nonincreasing(&rows).is_some());
    }
}
