use h2plus::ode;
use h2plus::SystemConfig;

fn main() {
    let r = 1e-4_f64;
    let e = -2.0_f64;
    let a = 3.333344e-9_f64;
    let cfg = SystemConfig::new(r).unwrap();
    let q = 0.5 * e * r * r;
    let bc = cfg.sign_convention.linear_coeff(r);
    let p = (-0.5 * e).sqrt() * r;
    let sigma = bc / (2.0 * p) - 1.0;
    println!("q={q:e} bc={bc:e} p={p:e} sigma={sigma:e}");

    let rhs = move |xi: f64, y: &[f64; 2]| {
        let xpp = -(2.0 * xi * y[1] + (q * xi * xi + bc * xi + a) * y[0]) / (xi * xi - 1.0);
        [y[1], xpp]
    };

    let xi_match = 1.0 + (1.0 / p).clamp(0.2, 2.0);
    println!("xi_match={xi_match}");

    // Frobenius outward
    let delta = 1e-6;
    let mut d = [0.0_f64; 8];
    d[0] = 1.0;
    for j in 0..7 {
        let jf = j as f64;
        let dm1 = if j >= 1 { d[j - 1] } else { 0.0 };
        let dm2 = if j >= 2 { d[j - 2] } else { 0.0 };
        d[j + 1] = (-(jf * (jf + 1.0) + q + bc + a) * d[j] - (2.0 * q + bc) * dm1 - q * dm2)
            / (2.0 * (jf + 1.0) * (jf + 1.0));
    }
    let mut v = 0.0;
    let mut dv = 0.0;
    for &ck in d.iter().rev() {
        dv = dv * delta + v;
        v = v * delta + ck;
    }
    println!("start X={v} X'={dv}");
    let out = ode::integrate_adaptive(&rhs, 1.0 + delta, [v, dv], xi_match, 1e-12, None);
    println!(
        "outward: y={:?} logscale={} steps={} L_out={:e}",
        out.y,
        out.log_scale,
        out.steps_taken,
        out.y[1] / out.y[0]
    );

    let xi_max = (1.0 + 40.0 / p).max(20.0);
    let slope = -p + sigma / (xi_max + 1.0);
    println!("xi_max={xi_max} slope={slope:e}");
    let inn = ode::integrate_adaptive(&rhs, xi_max, [1.0, slope], xi_match, 1e-12, None);
    println!(
        "inward: y={:?} logscale={} steps={} L_in={:e}",
        inn.y,
        inn.log_scale,
        inn.steps_taken,
        inn.y[1] / inn.y[0]
    );
}
