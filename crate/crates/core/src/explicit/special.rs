//! Gamma and zeta functions in double precision.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// log Gamma(z) by the Lanczos approximation (g = 7, nine terms), with
/// reflection to the right half plane. The imaginary part is only defined
/// modulo 2*pi.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        // Gamma(z) Gamma(1-z) = pi / sin(pi z)
        let s = (z * PI).sin();
        return Complex64::new(PI.ln(), 0.0) - s.ln() - ln_gamma(Complex64::new(1.0, 0.0) - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        x += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + x.ln()
}

pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

/// A zeta value together with a flag telling whether the requested accuracy
/// (1e-10) is not guaranteed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaValue {
    pub value: Complex64,
    pub reduced_precision: bool,
}

/// Imaginary parts beyond this lose the 1e-10 guarantee of [`zeta`].
pub const ZETA_PRECISION_LIMIT: f64 = 100.0;

/// Riemann zeta through the alternating series for eta(s), accelerated with
/// Borwein's Chebyshev weights: zeta(s) = eta(s) / (1 - 2^{1-s}).
/// Arguments with Re s < 1/2 go through the functional equation.
pub fn zeta(s: Complex64) -> Result<ZetaValue> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole("s = 1".into()));
    }
    if s.re < 0.5 {
        // zeta(s) = zeta*(1-s) / (pi^{-s/2} Gamma(s/2)), poles of Gamma(s/2) are trivial zeros
        if s.im == 0.0 && s.re <= 0.0 && (s.re / 2.0).fract() == 0.0 {
            let value = if s.re == 0.0 { -0.5 } else { 0.0 };
            return Ok(ZetaValue { value: Complex64::new(value, 0.0), reduced_precision: false });
        }
        let one_minus = Complex64::new(1.0, 0.0) - s;
        let reflected = zeta(one_minus)?;
        let log_factor = (-one_minus / 2.0) * PI.ln() + ln_gamma(one_minus / 2.0)
            - ((-s / 2.0) * PI.ln() + ln_gamma(s / 2.0));
        return Ok(ZetaValue {
            value: reflected.value * log_factor.exp(),
            reduced_precision: reflected.reduced_precision,
        });
    }
    let t = s.im.abs();
    // terms needed for ~17 digits: (3 + sqrt 8)^n must beat 10^17 e^{pi |t|}
    let n = (1.31 * 17.0 + 1.79 * t).ceil() as usize + 5;
    let n = n.min(400);
    let reduced_precision = t > ZETA_PRECISION_LIMIT;
    // d_k = n sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!), accumulated via term ratios
    let mut d = Vec::with_capacity(n + 1);
    let mut term = 1.0f64;
    let mut acc = 1.0f64;
    d.push(acc);
    for i in 1..=n {
        let fi = i as f64;
        let fnn = n as f64;
        term *= 4.0 * (fnn + fi - 1.0) * (fnn - fi + 1.0) / ((2.0 * fi) * (2.0 * fi - 1.0));
        acc += term;
        d.push(acc);
    }
    let dn = d[n];
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 0..n {
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let weight = sign * (d[k] - dn) / dn;
        sum += weight * (-s * ((k + 1) as f64).ln()).exp();
    }
    let eta = -sum;
    let denom = Complex64::new(1.0, 0.0) - (Complex64::new(1.0, 0.0) - s).scale(2f64.ln()).exp();
    Ok(ZetaValue { value: eta / denom, reduced_precision })
}

/// Completed zeta pi^{-s/2} Gamma(s/2) zeta(s), symmetric under s -> 1 - s.
pub fn complete_zeta(s: Complex64) -> Result<ZetaValue> {
    if s == Complex64::new(0.0, 0.0) {
        return Err(Error::Pole("s = 0".into()));
    }
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole("s = 1".into()));
    }
    let s = if s.re < 0.5 { Complex64::new(1.0, 0.0) - s } else { s };
    let z = zeta(s)?;
    let factor = ((-s / 2.0) * PI.ln() + ln_gamma(s / 2.0)).exp();
    Ok(ZetaValue { value: factor * z.value, reduced_precision: z.reduced_precision })
}

/// B_{2k} / (2k)! for k = 1..=count, from (-1)^{k+1} 2 zeta(2k) / (2 pi)^{2k}.
fn bernoulli_ratios(count: usize) -> Vec<f64> {
    (1..=count)
        .map(|k| {
            let two_k = 2 * k as i32;
            let zeta_2k = if k == 1 {
                PI * PI / 6.0
            } else {
                (1..2000).map(|n| (n as f64).powi(-two_k)).sum::<f64>()
            };
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sign * 2.0 * zeta_2k / (2.0 * PI).powi(two_k)
        })
        .collect()
}

/// Riemann zeta by Euler-Maclaurin summation. Cost grows linearly in |Im s|
/// but accuracy stays near 1e-12 for |Im s| up to ~1e5.
pub fn zeta_euler_maclaurin(s: Complex64) -> Result<Complex64> {
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::Pole("s = 1".into()));
    }
    const CORRECTIONS: usize = 20;
    static RATIOS: OnceLock<Vec<f64>> = OnceLock::new();
    let ratios = RATIOS.get_or_init(|| bernoulli_ratios(CORRECTIONS));
    let n_terms = ((s.norm() + 2.0 * CORRECTIONS as f64) / PI).ceil() as usize + 10;
    let mut head = Complex64::new(0.0, 0.0);
    for n in 1..n_terms {
        head += (-s * (n as f64).ln()).exp();
    }
    let big_n = n_terms as f64;
    let ln_n = big_n.ln();
    let n_pow = (-s * ln_n).exp();
    let mut total = head + n_pow * big_n / (s - 1.0) + 0.5 * n_pow;
    // rising factorial s (s+1) ... (s+2k-2) times N^{-s-2k+1}
    let mut rising = s;
    let mut power = n_pow / big_n;
    for (k, ratio) in ratios.iter().enumerate() {
        if k > 0 {
            let j = (2 * k - 1) as f64;
            rising = rising * (s + j) * (s + j + 1.0);
            power /= big_n * big_n;
        }
        total += *ratio * rising * power;
    }
    Ok(total)
}

/// Riemann-Siegel theta: arg Gamma(1/4 + it/2) - (t/2) log pi, continuous in t.
pub fn riemann_siegel_theta(t: f64) -> f64 {
    if t.abs() >= 10.0 {
        let sign = t.signum();
        let t = t.abs();
        let series = t / 2.0 * (t / (2.0 * PI)).ln() - t / 2.0 - PI / 8.0
            + 1.0 / (48.0 * t)
            + 7.0 / (5760.0 * t.powi(3))
            + 31.0 / (80640.0 * t.powi(5))
            + 127.0 / (430_080.0 * t.powi(7))
            + 511.0 / (1_216_512.0 * t.powi(9));
        return sign * series;
    }
    // below 10 the principal branch of Im ln Gamma is continuous
    ln_gamma(Complex64::new(0.25, t / 2.0)).im - t / 2.0 * PI.ln()
}

/// Hardy's Z function, real on the real line with zeros at the ordinates of
/// critical-line zeros.
pub fn hardy_z(t: f64) -> f64 {
    let s = Complex64::new(0.5, t);
    let z = zeta_euler_maclaurin(s).expect("critical line avoids the pole");
    (Complex64::from_polar(1.0, riemann_siegel_theta(t)) * z).re
}
