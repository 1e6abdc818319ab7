//! Mellin transforms ĥ(s) = ∫ h(u) u^s d*u = ∫ F(x) e^{sx} dx.

use num_complex::Complex64;
use rayon::prelude::*;

use super::quadrature::{integrate, smooth_trapezoid};
use super::test_function::TestFunction;
use crate::error::{Error, Result};

/// Absolute accuracy aimed for by the quadrature paths.
pub const MELLIN_TOL: f64 = 1e-13;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

pub fn mellin(h: &TestFunction, s: Complex64) -> Result<Complex64> {
    match h {
        TestFunction::Indicator { a, b } => Ok(indicator_mellin(*a, *b, s)),
        TestFunction::Combination(terms) => {
            let mut acc = ZERO;
            for (c, f) in terms {
                acc += c * mellin(f, s)?;
            }
            Ok(acc)
        }
        TestFunction::Grid(g) => {
            // trapezoid sum; matches the discrete convolution exactly
            let n = g.values.len();
            let sum: Complex64 = g
                .values
                .iter()
                .enumerate()
                .map(|(j, v)| {
                    let w = if j == 0 || j == n - 1 { 0.5 } else { 1.0 };
                    v * w * (s * (g.x0 + g.dx * j as f64)).exp()
                })
                .sum();
            Ok(sum * g.dx)
        }
        _ => mellin_quadrature(h, s),
    }
}

/// (b^s − a^s)/s, or log(b/a) at s = 0.
pub fn indicator_mellin(a: f64, b: f64, s: Complex64) -> Complex64 {
    if s.norm() < 1e-8 {
        // series of (e^{s lb} − e^{s la})/s around s = 0
        let (la, lb) = (a.ln(), b.ln());
        return Complex64::new(lb - la, 0.0) + s * (lb * lb - la * la) / 2.0 + s * s * (lb.powi(3) - la.powi(3)) / 6.0;
    }
    ((s * b.ln()).exp() - (s * a.ln()).exp()) / s
}

/// Quadrature of ∫ F(x) e^{sx} dx regardless of any closed form.
pub fn mellin_quadrature(h: &TestFunction, s: Complex64) -> Result<Complex64> {
    let (lo, hi) = h.log_support();
    if !(lo < hi) {
        return Ok(ZERO);
    }
    let integrand = |x: f64| h.eval_log(x) * (s * x).exp();
    if h.is_smooth() {
        let width = hi - lo;
        let min_intervals = 64 + (2.0 * width * s.im.abs() / std::f64::consts::PI) as usize;
        let coarse = smooth_trapezoid(|x| Complex64::new(integrand(x).norm(), 0.0), lo, hi, 64, f64::INFINITY)?;
        let tol = MELLIN_TOL * coarse.value.re.max(1.0) * 0.1;
        smooth_trapezoid(integrand, lo, hi, min_intervals, tol).map(|q| q.value)
    } else {
        let q = integrate(integrand, lo, hi, &h.kinks(), MELLIN_TOL, 1e-14)?;
        if !q.value.re.is_finite() || !q.value.im.is_finite() {
            return Err(Error::NumericalFailure(format!("Mellin transform at {s} is not finite")));
        }
        Ok(q.value)
    }
}

/// Precomputed samples of F(x) e^{x/2} for repeated evaluation of
/// ĥ(1/2 + iγ) over many γ.
#[derive(Debug, Clone)]
pub enum MellinPlan {
    Sampled { x0: f64, dx: f64, weights: Vec<Complex64> },
    Direct(TestFunction),
}

impl MellinPlan {
    /// Builds a plan accurate for |γ| ≤ `gamma_max`.
    pub fn new(h: &TestFunction, gamma_max: f64) -> Result<Self> {
        if !h.is_smooth() {
            return Ok(MellinPlan::Direct(h.clone()));
        }
        let (lo, hi) = h.log_support();
        if !(lo < hi) {
            return Ok(MellinPlan::Sampled { x0: 0.0, dx: 1.0, weights: vec![] });
        }
        let width = hi - lo;
        // sampling rate 2π/dx starts at 2γ_max; aliases of e^{iγx} then sit
        // beyond γ_max, and the doubling test below decides whether the
        // decay of the samples' spectrum makes them negligible
        let mut n = (64 + (width * gamma_max / std::f64::consts::PI) as usize).next_power_of_two();
        let probes = [0.0, 0.5 * gamma_max, gamma_max];
        let mut plan = Self::sample(h, lo, hi, n);
        loop {
            let finer = Self::sample(h, lo, hi, 2 * n);
            let scale = finer.l1();
            let diff = probes
                .iter()
                .map(|&g| (plan.critical(g) - finer.critical(g)).norm())
                .fold(0.0, f64::max);
            if diff <= 1e-14 * scale.max(1.0) {
                return Ok(plan);
            }
            plan = finer;
            n *= 2;
            if n > 1 << 22 {
                return Err(Error::NumericalFailure("Mellin plan sampling did not settle".into()));
            }
        }
    }

    fn sample(h: &TestFunction, lo: f64, hi: f64, n: usize) -> Self {
        let dx = (hi - lo) / n as f64;
        let weights: Vec<Complex64> = (1..n)
            .into_par_iter()
            .map(|j| {
                let x = lo + dx * j as f64;
                h.eval_log(x) * (0.5 * x).exp() * dx
            })
            .collect();
        MellinPlan::Sampled { x0: lo + dx, dx, weights }
    }

    fn l1(&self) -> f64 {
        match self {
            MellinPlan::Sampled { weights, .. } => weights.iter().map(|w| w.norm()).sum(),
            MellinPlan::Direct(_) => 1.0,
        }
    }

    /// (ĥ(1/2 + iγ), ĥ(1/2 − iγ)) in one pass over the samples.
    pub fn critical_pair(&self, gamma: f64) -> (Complex64, Complex64) {
        match self {
            MellinPlan::Sampled { x0, dx, weights } => {
                const BLOCK: usize = 64;
                let step = Complex64::from_polar(1.0, gamma * dx);
                let (mut plus, mut minus) = (ZERO, ZERO);
                for (b, chunk) in weights.chunks(BLOCK).enumerate() {
                    let mut phase = Complex64::from_polar(1.0, gamma * (x0 + dx * (b * BLOCK) as f64));
                    for w in chunk {
                        plus += w * phase;
                        minus += w * phase.conj();
                        phase *= step;
                    }
                }
                (plus, minus)
            }
            MellinPlan::Direct(_) => (self.critical(gamma), self.critical(-gamma)),
        }
    }

    /// ĥ(1/2 + iγ).
    pub fn critical(&self, gamma: f64) -> Complex64 {
        match self {
            MellinPlan::Sampled { x0, dx, weights } => {
                // phases by recurrence, re-anchored every block to bound drift
                const BLOCK: usize = 64;
                let step = Complex64::from_polar(1.0, gamma * dx);
                let mut acc = ZERO;
                for (b, chunk) in weights.chunks(BLOCK).enumerate() {
                    let mut phase = Complex64::from_polar(1.0, gamma * (x0 + dx * (b * BLOCK) as f64));
                    for w in chunk {
                        acc += w * phase;
                        phase *= step;
                    }
                }
                acc
            }
            MellinPlan::Direct(h) => mellin(h, Complex64::new(0.5, gamma)).unwrap_or(Complex64::new(f64::NAN, f64::NAN)),
        }
    }
}
