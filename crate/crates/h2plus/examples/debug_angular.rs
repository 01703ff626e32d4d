use h2plus::ode;
use h2plus::SystemConfig;

fn angular_match(q: f64, a: f64) -> f64 {
    let delta = 1e-6;
    let mut b = [0.0_f64; 8];
    b[0] = 1.0;
    for j in 0..7 {
        let jf = j as f64;
        let bm1 = if j >= 1 { b[j - 1] } else { 0.0 };
        let bm2 = if j >= 2 { b[j - 2] } else { 0.0 };
        b[j + 1] = ((jf * (jf + 1.0) + q + a) * b[j] - 2.0 * q * bm1 + q * bm2)
            / (2.0 * (jf + 1.0) * (jf + 1.0));
    }
    let mut v = 0.0;
    let mut dvds = 0.0;
    for &ck in b.iter().rev() {
        dvds = dvds * delta + v;
        v = v * delta + ck;
    }
    let rhs = move |eta: f64, y: &[f64; 2]| {
        let ypp = (2.0 * eta * y[1] + (q * eta * eta + a) * y[0]) / (1.0 - eta * eta);
        [y[1], ypp]
    };
    let run = ode::integrate_adaptive(&rhs, 1.0 - delta, [v, -dvds], 0.0, 1e-12, None);
    run.y[1] / run.y[0].hypot(run.y[1])
}

fn main() {
    let r = 1e-4_f64;
    let e = -2.0_f64;
    let _cfg = SystemConfig::new(r).unwrap();
    let q = 0.5 * e * r * r;
    println!("q = {q:e}");
    for a in [
        6.0, 3.0, 1.0, 0.5, 0.2, 0.1, 0.05, 0.01, 1e-3, 1e-5, 1e-7, 4e-9, 3.3e-9, 2e-9, 0.0,
        -1e-7, -0.01, -0.1, -1.0, -3.0, -5.9,
    ] {
        println!("m({a:>9.3e}) = {:+.6e}", angular_match(q, a));
    }
    let res = h2plus::oracle::oracle_a(e, &_cfg).unwrap();
    println!("oracle_a -> {:?}", res);
}
