use h2plus::ode;
use h2plus::oracle;
use h2plus::SystemConfig;

fn main() {
    let cfg = SystemConfig::new(100.0).unwrap();
    let r = cfg.r;
    // series path values for comparison
    let series = h2plus::quantize::solve_ground(&cfg, &h2plus::SolveOptions::default()).unwrap();
    println!("series: E={:.12} A={:.9}", series.e_elec, series.a);

    for de in [-3e-2, -1e-2, -3e-3, -1e-3, -1e-5, 0.0, 1e-5, 1e-3, 3e-3, 1e-2, 3e-2] {
        let e = series.e_elec + de;
        let a_orc = oracle::oracle_a(e, &cfg).unwrap().a;
        let (a_ser, _) = h2plus::angular::legendre_a(e, &cfg, 256).unwrap();

        let q = 0.5 * e * r * r;
        let bc = cfg.sign_convention.linear_coeff(r);
        let p = (-0.5 * e).sqrt() * r;
        let sigma = bc / (2.0 * p) - 1.0;
        let a = a_orc;
        let rhs = move |xi: f64, y: &[f64; 2]| {
            let xpp = -(2.0 * xi * y[1] + (q * xi * xi + bc * xi + a) * y[0]) / (xi * xi - 1.0);
            [y[1], xpp]
        };
        let xi_match = 1.0 + 1.0 / p;
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
        let xi_max = (1.0 + 40.0 / p).max(20.0);
        let slope = -p + sigma / (xi_max + 1.0);
        let inn = ode::integrate_adaptive(&rhs, xi_max, [1.0, slope], xi_match, 1e-12, None);
        let w = out.y[0] * inn.y[1] - out.y[1] * inn.y[0];
        let no = out.y[0].abs() + out.y[1].abs() / p;
        let ni = inn.y[0].abs() + inn.y[1].abs() / p;
        println!(
            "dE={de:+.0e}: A_orc={a_orc:.6} A_ser={a_ser:.6} W={:+.3e} Lout={:+.4} Lin={:+.4}",
            w / (p * no * ni),
            out.y[1] / out.y[0],
            inn.y[1] / inn.y[0]
        );
    }
}
