//! Cross-checks between the series solvers and the shooting oracle.

use approx::assert_abs_diff_eq;
use h2plus::angular::solve_angular;
use h2plus::oracle::{self, OdeKind};
use h2plus::quantize::{solve_ground, SolveOptions};
use h2plus::radial::jaffe_coeffs;
use h2plus::SystemConfig;
use once_cell::sync::Lazy;

static R2_SERIES: Lazy<h2plus::SeparationPair> = Lazy::new(|| {
    let cfg = SystemConfig::new(2.0).unwrap();
    solve_ground(&cfg, &SolveOptions::default()).unwrap()
});

static R2_ORACLE: Lazy<h2plus::SeparationPair> = Lazy::new(|| {
    let cfg = SystemConfig::new(2.0).unwrap();
    oracle::oracle_solve(&cfg).unwrap()
});

#[test]
fn oracle_equivalence_across_r() {
    for &r in &[0.1, 0.5, 1.0, 2.0, 4.0] {
        let cfg = SystemConfig::new(r).unwrap();
        let series = solve_ground(&cfg, &SolveOptions::default()).unwrap();
        let shoot = oracle::oracle_solve(&cfg).unwrap();
        assert_abs_diff_eq!(series.e_elec, shoot.e_elec, epsilon = 1e-8);
        assert_abs_diff_eq!(series.a, shoot.a, epsilon = 1e-8);
    }
}

#[test]
fn oracle_united_atom_limit() {
    let cfg = SystemConfig::new(1e-4).unwrap();
    let pair = oracle::oracle_solve(&cfg).unwrap();
    assert_abs_diff_eq!(pair.e_elec, -2.0, epsilon = 1e-4);
}

#[test]
fn oracle_separated_atom_limit() {
    // E_elec keeps its -1/R tail at finite R; E_total approaches the
    // hydrogen-atom value
    let cfg = SystemConfig::new(100.0).unwrap();
    let pair = oracle::oracle_solve(&cfg).unwrap();
    assert_abs_diff_eq!(pair.e_total, -0.5, epsilon = 1e-4);
    assert_abs_diff_eq!(pair.e_elec, -0.51, epsilon = 1e-4);
}

#[test]
fn angular_eigenvalue_agreement_at_r2() {
    let cfg = SystemConfig::new(2.0).unwrap();
    let e = R2_SERIES.e_elec;
    let (a_series, _) = h2plus::angular::legendre_a(e, &cfg, 64).unwrap();
    let a_shoot = oracle::oracle_a(e, &cfg).unwrap();
    assert_abs_diff_eq!(a_series, a_shoot.a, epsilon = 1e-9);
}

#[test]
fn angular_solution_matches_oracle_pointwise() {
    let cfg = SystemConfig::new(2.0).unwrap();
    let pair = *R2_SERIES;
    let series = solve_angular(pair.e_elec, &cfg).unwrap();
    let (_, ang) = oracle::oracle_wavefunctions(&cfg, pair.e_elec, pair.a).unwrap();

    let interp = |x: f64| lagrange4(&ang.samples, x);
    let norm_series = series.eval(0.0);
    let norm_oracle = interp(0.0);
    for &eta in &[0.5, -0.5, 0.25, 0.75] {
        let a = series.eval(eta) / norm_series;
        let b = interp(eta) / norm_oracle;
        assert_abs_diff_eq!(a, b, epsilon = 1e-8);
    }
}

#[test]
fn radial_solution_matches_oracle_on_interval() {
    let cfg = SystemConfig::new(2.0).unwrap();
    let pair = *R2_SERIES;
    let series = jaffe_coeffs(pair.e_elec, pair.a, &cfg, 16).unwrap();
    let (rad, _) = oracle::oracle_wavefunctions(&cfg, pair.e_elec, pair.a).unwrap();

    let x0 = rad.samples[0];
    let scale = series.eval(x0.0) / x0.1;
    for &(xi, v) in rad.samples.iter() {
        if xi > 8.0 {
            break;
        }
        let s = series.eval(xi);
        let o = v * scale;
        assert!(
            (s - o).abs() <= 1e-7 * s.abs().max(o.abs()).max(series.eval(1.0)),
            "mismatch at xi = {xi}: {s} vs {o}"
        );
    }
}

#[test]
fn ode_residual_suite_series_and_oracle() {
    let cfg = SystemConfig::new(2.0).unwrap();
    let pair = *R2_SERIES;

    // series-evaluated residuals
    let ang = solve_angular(pair.e_elec, &cfg).unwrap();
    let max_y = (0..=100)
        .map(|i| ang.eval(-1.0 + 0.02 * i as f64).abs())
        .fold(0.0_f64, f64::max);
    for k in 0..33 {
        let eta = (std::f64::consts::PI * (k as f64 + 0.5) / 33.0).cos();
        assert!(ang.residual(eta).abs() <= 1e-8 * max_y);
    }
    let rad = jaffe_coeffs(pair.e_elec, pair.a, &cfg, 16).unwrap();
    for &xi in &[1.01, 1.5, 2.0, 3.0, 5.0, 8.0] {
        assert!(rad.residual(xi).abs() <= 1e-8);
    }

    // finite-difference residuals on the shooting samples
    let (rad_s, ang_s) = oracle::oracle_wavefunctions(&cfg, pair.e_elec, pair.a).unwrap();
    let ra = oracle::ode_residual(OdeKind::Angular, &ang_s.samples, pair.e_elec, pair.a, &cfg)
        .unwrap();
    let rr =
        oracle::ode_residual(OdeKind::Radial, &rad_s.samples, pair.e_elec, pair.a, &cfg).unwrap();
    assert!(ra <= 1e-6, "angular finite-difference residual {ra}");
    assert!(rr <= 1e-6, "radial finite-difference residual {rr}");
}

#[test]
fn oracle_reference_energy_at_r2() {
    // the recorded reference for the CLI contract, plus the external
    // literature sanity value (informational in the acceptance suite)
    let pair = *R2_ORACLE;
    assert_abs_diff_eq!(pair.e_total, -0.602634214494946, epsilon = 1e-9);
    assert_abs_diff_eq!(pair.e_total, -0.6026, epsilon = 1e-3);
}

fn lagrange4(samples: &[(f64, f64)], x: f64) -> f64 {
    let n = samples.len();
    let h = samples[1].0 - samples[0].0;
    let idx = ((x - samples[0].0) / h).floor() as isize;
    let i0 = idx.clamp(1, n as isize - 3) as usize - 1;
    let pts = &samples[i0..i0 + 4];
    let mut acc = 0.0;
    for (j, &(xj, yj)) in pts.iter().enumerate() {
        let mut term = yj;
        for (k, &(xk, _)) in pts.iter().enumerate() {
            if k != j {
                term *= (x - xk) / (xj - xk);
            }
        }
        acc += term;
    }
    acc
}
