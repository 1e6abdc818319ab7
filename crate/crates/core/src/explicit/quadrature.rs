//! Quadrature rules used by the analytic side: adaptive Gauss-Kronrod for
//! general integrands and a self-refining trapezoid rule for integrands that
//! vanish to all orders at both ends of the interval (compactly supported
//! smooth functions), where it converges faster than any power.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Result of a quadrature together with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quad {
    pub value: Complex64,
    pub error: f64,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
// Gauss weights for XGK[1], XGK[3], XGK[5] and the centre
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn kronrod15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> Quad {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(centre - dx) + f(centre + dx);
        kronrod += pair * WGK[j];
        if j % 2 == 1 {
            gauss += pair * WG[j / 2];
        }
    }
    Quad { value: kronrod * half, error: ((kronrod - gauss) * half).norm() }
}

struct Segment {
    a: f64,
    b: f64,
    quad: Quad,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.quad.error == other.quad.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.quad.error.total_cmp(&other.quad.error)
    }
}

/// Globally adaptive G7/K15 quadrature over `[a, b]` split first at
/// `breakpoints`. Stops when the summed error estimate is below
/// `max(abs_tol, rel_tol * |I|)`.
pub fn integrate<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Quad> {
    const MAX_SEGMENTS: usize = 20_000;
    if a == b {
        return Ok(Quad { value: Complex64::new(0.0, 0.0), error: 0.0 });
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > lo && x < hi).collect();
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();

    let mut heap = BinaryHeap::new();
    let mut total = Complex64::new(0.0, 0.0);
    let mut total_err = 0.0;
    for w in cuts.windows(2) {
        let quad = kronrod15(&f, w[0], w[1]);
        total += quad.value;
        total_err += quad.error;
        heap.push(Segment { a: w[0], b: w[1], quad });
    }
    while total_err > abs_tol.max(rel_tol * total.norm()) {
        if heap.len() >= MAX_SEGMENTS {
            return Err(Error::NumericalFailure(format!(
                "quadrature on [{lo}, {hi}] did not converge: error {total_err:e}"
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval cannot be split further in floating point
            heap.push(worst);
            break;
        }
        let left = kronrod15(&f, worst.a, mid);
        let right = kronrod15(&f, mid, worst.b);
        total += left.value + right.value - worst.quad.value;
        total_err += left.error + right.error - worst.quad.error;
        heap.push(Segment { a: worst.a, b: mid, quad: left });
        heap.push(Segment { a: mid, b: worst.b, quad: right });
    }
    // re-add from scratch to shed cancellation accumulated in the running sums
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    for seg in heap.iter() {
        value += seg.quad.value;
        error += seg.quad.error;
    }
    Ok(Quad { value: value * sign, error })
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    integrate(|x| Complex64::new(f(x), 0.0), a, b, breakpoints, abs_tol, rel_tol).map(|q| q.value.re)
}

/// Trapezoid rule on `[a, b]` for an integrand vanishing with all its
/// derivatives at both ends, halving the step until two successive levels
/// agree to `tol` (absolute). `min_intervals` should resolve the fastest
/// oscillation of the integrand.
pub fn smooth_trapezoid<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    min_intervals: usize,
    tol: f64,
) -> Result<Quad> {
    const MAX_INTERVALS: usize = 1 << 22;
    if a >= b {
        return Ok(Quad { value: Complex64::new(0.0, 0.0), error: 0.0 });
    }
    let mut n = min_intervals.max(16).next_power_of_two();
    let mut h = (b - a) / n as f64;
    // interior nodes only; the integrand vanishes at a and b
    let mut sum: Complex64 = (1..n).map(|j| f(a + h * j as f64)).sum();
    let mut estimate = sum * h;
    loop {
        if n >= MAX_INTERVALS {
            return Err(Error::NumericalFailure(format!(
                "trapezoid refinement on [{a}, {b}] did not settle"
            )));
        }
        let mids: Complex64 = (0..n).map(|j| f(a + h * (j as f64 + 0.5))).sum();
        sum += mids;
        n *= 2;
        h *= 0.5;
        let refined = sum * h;
        let change = (refined - estimate).norm();
        estimate = refined;
        if change <= tol {
            return Ok(Quad { value: estimate, error: change });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn kronrod_integrates_polynomials_exactly() {
        let q = integrate_real(|x| x.powi(7) - 3.0 * x * x, -1.0, 2.0, &[], 1e-14, 0.0).unwrap();
        let exact = (2f64.powi(8) - 1.0) / 8.0 - (8.0 + 1.0);
        assert!((q - exact).abs() < 1e-12);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        // integral of 1/sqrt(x) over (0,1] is 2
        let q = integrate_real(|x| 1.0 / x.sqrt(), 0.0, 1.0, &[], 1e-10, 0.0).unwrap();
        assert!((q - 2.0).abs() < 1e-8);
    }

    #[test]
    fn breakpoints_split_discontinuities() {
        let q = integrate_real(|x| if x < 0.3 { 1.0 } else { 2.0 }, 0.0, 1.0, &[0.3], 1e-14, 0.0).unwrap();
        assert!((q - 1.7).abs() < 1e-13);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let q = integrate_real(f64::sin, PI, 0.0, &[], 1e-14, 0.0).unwrap();
        assert!((q + 2.0).abs() < 1e-13);
    }

    #[test]
    fn trapezoid_converges_on_bump() {
        let bump = |x: f64| {
            if x.abs() < 1.0 {
                Complex64::new((-1.0 / (1.0 - x * x)).exp(), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        };
        let t = smooth_trapezoid(bump, -1.0, 1.0, 16, 1e-15).unwrap();
        let g = integrate(bump, -1.0, 1.0, &[], 1e-15, 0.0).unwrap();
        assert!((t.value - g.value).norm() < 1e-13, "{} vs {}", t.value, g.value);
        // known value of the integral of exp(-1/(1-x^2)) over (-1, 1)
        assert!((t.value.re - 0.443_993_816_168_079_4).abs() < 1e-13);
    }
}
