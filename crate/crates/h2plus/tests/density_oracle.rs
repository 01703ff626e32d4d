//! Density checks against fully independent pipelines: a density built from
//! the shooting samples alone, and a Monte-Carlo normalization integral.

use approx::assert_abs_diff_eq;
use h2plus::density::{density_slice, Plane, WaveFunction};
use h2plus::geometry::to_prolate;
use h2plus::oracle;
use h2plus::quantize::{solve_ground, SolveOptions};
use h2plus::SystemConfig;
use once_cell::sync::Lazy;
use rand::{Rng, SeedableRng};

static WF2: Lazy<WaveFunction> = Lazy::new(|| {
    let cfg = SystemConfig::new(2.0).unwrap();
    WaveFunction::solve(&cfg, &SolveOptions::default()).unwrap()
});

/// Density assembled purely from shooting samples: Simpson quadrature for
/// the normalization, cubic interpolation for point values.
struct OracleDensity {
    x_samples: Vec<(f64, f64)>,
    y_samples: Vec<(f64, f64)>,
    norm2: f64,
    r: f64,
}

impl OracleDensity {
    fn build(cfg: &SystemConfig, e: f64, a: f64) -> Self {
        let (rad, ang) =
            oracle::oracle_wavefunctions_n(cfg, e, a, 2001).expect("oracle sampling failed");
        // moments over the sampled grids; the tiny end strips at the
        // singular points are added as rectangles
        let ix0 = simpson(&rad.samples, |xi, x| x * x * f(xi, 0));
        let ix2 = simpson(&rad.samples, |xi, x| x * x * f(xi, 2));
        let jy0 = simpson(&ang.samples, |_, y| y * y);
        let jy2 = simpson(&ang.samples, |eta, y| y * y * eta * eta);
        fn f(xi: f64, k: i32) -> f64 {
            xi.powi(k)
        }
        let delta = 1e-6;
        let y_end = ang.samples.last().unwrap().1;
        let jy0 = jy0 + 2.0 * delta * y_end * y_end;
        let jy2 = jy2 + 2.0 * delta * y_end * y_end;
        let x_first = rad.samples[0].1;
        let ix0 = ix0 + delta * x_first * x_first;
        let ix2 = ix2 + delta * x_first * x_first;

        let half = 0.5 * cfg.r;
        let total = 2.0 * std::f64::consts::PI * half.powi(3) * (ix2 * jy0 - ix0 * jy2);
        OracleDensity {
            x_samples: rad.samples,
            y_samples: ang.samples,
            norm2: 1.0 / total,
            r: cfg.r,
        }
    }

    fn density(&self, x: f64, y: f64, z: f64) -> f64 {
        let cfg = SystemConfig::new(self.r).unwrap();
        let (xi, eta) = match to_prolate(x, y, z, &cfg) {
            Ok((p, _, _)) => (p.xi, p.eta),
            // focal point; the cubic extrapolates the last 1e-6 cleanly
            Err(_) => (1.0, if z < 0.0 { -1.0 } else { 1.0 }),
        };
        let xv = lagrange4(&self.x_samples, xi);
        let yv = lagrange4(&self.y_samples, eta);
        self.norm2 * xv * xv * yv * yv
    }
}

#[test]
fn density_at_nucleus_matches_oracle_pipeline() {
    let wf = &*WF2;
    let oracle_rho = OracleDensity::build(&wf.cfg, wf.pair.e_elec, wf.pair.a);
    let ours = wf.density_at(0.0, 0.0, 1.0);
    let theirs = oracle_rho.density(0.0, 0.0, 1.0);
    assert!(
        (ours - theirs).abs() <= 1e-6 * ours,
        "nucleus density {ours} vs oracle {theirs}"
    );
}

#[test]
fn density_grid_matches_oracle_pipeline() {
    let wf = &*WF2;
    let oracle_rho = OracleDensity::build(&wf.cfg, wf.pair.e_elec, wf.pair.a);
    let mut worst = 0.0_f64;
    let peak = wf.density_at(0.0, 0.0, 1.0);
    for i in 0..21 {
        for j in 0..21 {
            let x = -3.0 + 6.0 * i as f64 / 20.0;
            let z = -3.0 + 6.0 * j as f64 / 20.0;
            let ours = wf.density_at(x, 0.0, z);
            let theirs = oracle_rho.density(x, 0.0, z);
            worst = worst.max((ours - theirs).abs() / peak);
        }
    }
    assert!(worst <= 1e-6, "max deviation {worst}");
}

#[test]
fn monte_carlo_normalization() {
    let wf = &*WF2;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xd1ce);
    let l = 10.0;
    let volume = (2.0 * l) * (2.0 * l) * (2.0 * l);
    let n = 10_000_000usize;
    let mut sum = 0.0;
    let mut sumsq = 0.0;
    for _ in 0..n {
        let x = rng.gen_range(-l..l);
        let y = rng.gen_range(-l..l);
        let z = rng.gen_range(-l..l);
        let rho = wf.density_at(x, y, z);
        sum += rho;
        sumsq += rho * rho;
    }
    let mean = sum / n as f64;
    let var = (sumsq / n as f64 - mean * mean).max(0.0);
    let integral = volume * mean;
    let stderr = volume * (var / n as f64).sqrt();
    assert!(
        (integral - 1.0).abs() <= 3.0 * stderr,
        "MC integral {integral} +- {stderr}"
    );
    assert!(stderr < 0.05, "MC error bar unexpectedly wide: {stderr}");
}

fn simpson<F: Fn(f64, f64) -> f64>(samples: &[(f64, f64)], f: F) -> f64 {
    let n = samples.len();
    assert!(n % 2 == 1, "simpson needs an odd sample count");
    let h = samples[1].0 - samples[0].0;
    let mut acc = 0.0;
    for (i, &(x, y)) in samples.iter().enumerate() {
        let w = if i == 0 || i == n - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += w * f(x, y);
    }
    acc * h / 3.0
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

#[test]
fn normalization_and_symmetry_at_figure_r_values() {
    for &r in &[0.008, 0.012, 0.025, 2.0] {
        let cfg = SystemConfig::new(r).unwrap();
        let pair = solve_ground(&cfg, &SolveOptions::default()).unwrap();
        let wf = WaveFunction::from_pair(&cfg, &pair).unwrap();
        let (total, _) =
            h2plus::density::norm_integral(&wf.radial, &wf.angular, &cfg, 96, 40).unwrap();
        assert_abs_diff_eq!(total * wf.norm * wf.norm, 1.0, epsilon = 1e-8);

        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7 + (r * 1000.0) as u64);
        for _ in 0..25 {
            let scale = 2.0 * r + 1.0;
            let x = rng.gen_range(-scale..scale);
            let y = rng.gen_range(-scale..scale);
            let z = rng.gen_range(-scale..scale);
            let up = wf.density_at(x, y, z);
            let dn = wf.density_at(x, y, -z);
            assert!((up - dn).abs() <= 1e-10 * up.abs().max(dn.abs()).max(1e-300));
            let t = rng.gen_range(0.0..std::f64::consts::TAU);
            let rad = x.hypot(y);
            let rot = wf.density_at(rad * t.cos(), rad * t.sin(), z);
            assert!((up - rot).abs() <= 1e-12 * up.abs().max(rot.abs()).max(1e-300));
        }
    }
}
