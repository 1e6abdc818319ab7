//! Writes the ordinates of the first N zeros of zeta on the critical line.
//!
//! Scans Hardy's Z function on a fixed grid, refines every sign change, and
//! rescans with a finer step wherever |Z| dips towards zero without changing
//! sign (close pairs).
//!
//! Usage: cargo run --release -p adelic-core --example generate_zeros -- N OUT

use std::io::Write;

use adelic_core::explicit::special::hardy_z;

fn refine(mut a: f64, mut fa: f64, mut b: f64, mut fb: f64) -> f64 {
    // Illinois variant of regula falsi
    let mut side = 0;
    for _ in 0..200 {
        let c = (a * fb - b * fa) / (fb - fa);
        let fc = hardy_z(c);
        if fc == 0.0 || (b - a).abs() < 1e-13 * c.abs() {
            return c;
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa /= 2.0;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb /= 2.0;
            }
            side = 1;
        }
    }
    0.5 * (a + b)
}

fn scan(lo: f64, hi: f64, steps: usize, out: &mut Vec<f64>) {
    let h = (hi - lo) / steps as f64;
    let mut t0 = lo;
    let mut z0 = hardy_z(t0);
    for i in 1..=steps {
        let t1 = lo + h * i as f64;
        let z1 = hardy_z(t1);
        if z0.signum() != z1.signum() {
            out.push(refine(t0, z0, t1, z1));
        }
        t0 = t1;
        z0 = z1;
    }
}

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let count: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(10_000);
    let path = args.get(2).cloned().unwrap_or_else(|| "zeros.txt".into());

    let step = 0.02;
    let mut zeros = Vec::with_capacity(count + 8);
    let (mut ta, mut za) = (10.0 - step, hardy_z(10.0 - step));
    let (mut tb, mut zb) = (10.0, hardy_z(10.0));
    while zeros.len() < count {
        let tc = tb + step;
        let zc = hardy_z(tc);
        if zb.signum() != zc.signum() {
            zeros.push(refine(tb, zb, tc, zc));
        } else if za.signum() == zb.signum() && zb.abs() < za.abs() && zb.abs() < zc.abs() {
            // local dip of |Z|: look for a hidden pair
            let mut pair = Vec::new();
            scan(ta, tc, 400, &mut pair);
            zeros.extend(pair);
        }
        (ta, za) = (tb, zb);
        (tb, zb) = (tc, zc);
    }
    zeros.sort_by(|a, b| a.partial_cmp(b).unwrap());
    zeros.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    zeros.truncate(count);

    let mut file = std::io::BufWriter::new(std::fs::File::create(&path).expect("create output"));
    writeln!(file, "# Ordinates of the first {} nontrivial zeros of the Riemann zeta function", zeros.len()).unwrap();
    writeln!(file, "# computed from sign changes of Hardy's Z (Euler-Maclaurin), ascending").unwrap();
    for g in &zeros {
        writeln!(file, "{g:.12}").unwrap();
    }
    eprintln!("wrote {} zeros, last = {}", zeros.len(), zeros.last().unwrap());
}
