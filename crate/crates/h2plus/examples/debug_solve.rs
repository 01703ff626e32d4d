use h2plus::ode;
use h2plus::oracle;
use h2plus::SystemConfig;

fn radial_match(e: f64, a: f64, cfg: &SystemConfig) -> (f64, f64, f64) {
    let r = cfg.r;
    let q = 0.5 * e * r * r;
    let bc = cfg.sign_convention.linear_coeff(r);
    let p = (-0.5 * e).sqrt() * r;
    let sigma = bc / (2.0 * p) - 1.0;
    let rhs = move |xi: f64, y: &[f64; 2]| {
        let xpp = -(2.0 * xi * y[1] + (q * xi * xi + bc * xi + a) * y[0]) / (xi * xi - 1.0);
        [y[1], xpp]
    };
    let xi_match = 1.0 + (1.0 / p).clamp(0.2, 2.0);
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
    let out = ode::integrate_adaptive(&rhs, 1.0 + delta, [v, dv], xi_match, 1e-12, None);
    let l_out = out.y[1] / out.y[0];
    let xi_max = (1.0 + 40.0 / p).max(20.0);
    let slope = -p + sigma / (xi_max + 1.0);
    let inn = ode::integrate_adaptive(&rhs, xi_max, [1.0, slope], xi_match, 1e-12, None);
    let l_in = inn.y[1] / inn.y[0];
    ((l_out - l_in) / (1.0 + l_out.abs() + l_in.abs()), l_out, l_in)
}

fn main() {
    let cfg = SystemConfig::new(1e-4).unwrap();
    for e in [-2.2, -2.1, -2.05, -2.0, -1.99, -1.9, -1.5, -0.5] {
        let a = oracle::oracle_a(e, &cfg).unwrap().a;
        let (defect, lo, li) = radial_match(e, a, &cfg);
        println!("E={e:>7.3}: A={a:+.6e}  defect={defect:+.6e} L_out={lo:+.6e} L_in={li:+.6e}");
    }
}
