//! Even polynomial-times-Gaussian profiles η(x) = Σ c_j x^{2j} e^{-a x²}.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::quadrature::integrate_real;
use super::special::gamma;
use crate::error::{Error, Result};

/// Tolerance for the moment conditions η(0) = 0 and ∫η = 0.
pub const MOMENT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchwartzProfile {
    /// Gaussian rate `a` in e^{-a x²}.
    pub rate: f64,
    /// `coeffs[j]` multiplies x^{2j}.
    pub coeffs: Vec<f64>,
}

impl SchwartzProfile {
    pub fn new(rate: f64, coeffs: Vec<f64>) -> Result<Self> {
        if !(rate > 0.0 && rate.is_finite()) {
            return Err(Error::InvalidArgument(format!("gaussian rate must be positive, got {rate}")));
        }
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("profile needs finite coefficients".into()));
        }
        Ok(SchwartzProfile { rate, coeffs })
    }

    /// η₀(x) = πx²(πx² − 3/2)e^{−πx²}.
    pub fn eta0() -> Self {
        SchwartzProfile { rate: PI, coeffs: vec![0.0, -1.5 * PI, PI * PI] }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let x2 = x * x;
        let poly = self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x2 + c);
        poly * (-self.rate * x2).exp()
    }

    /// Profile of x ↦ η(x / scale).
    pub fn rescaled(&self, scale: f64) -> Self {
        let s2 = scale * scale;
        let mut factor = 1.0;
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let v = c / factor;
                factor *= s2;
                v
            })
            .collect();
        SchwartzProfile { rate: self.rate / s2, coeffs }
    }

    /// Point beyond which |η| stays below `tol` times its sup.
    pub fn decay_radius(&self, tol: f64) -> f64 {
        let peak = self.sup_norm();
        let mut x = (1.0 / self.rate).sqrt();
        while self.envelope(x) > tol * peak {
            x *= 1.05;
        }
        x
    }

    fn envelope(&self, x: f64) -> f64 {
        let x2 = x * x;
        let poly: f64 = self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * x2 + c.abs());
        poly * (-self.rate * x2).exp()
    }

    fn sup_norm(&self) -> f64 {
        let r = 10.0 / self.rate.sqrt();
        (0..=2000).map(|i| self.eval(r * i as f64 / 2000.0).abs()).fold(0.0, f64::max)
    }

    /// Smallest x > 0 where |η| first exceeds `tol` times its sup.
    pub fn onset(&self, tol: f64) -> f64 {
        let peak = self.sup_norm();
        let mut x = (1.0 / self.rate).sqrt();
        while x > 1e-300 && self.envelope(x) > tol * peak {
            x *= 0.95;
        }
        x
    }

    /// ∫_ℝ η by quadrature.
    pub fn integral(&self) -> Result<f64> {
        let r = self.decay_radius(1e-18);
        Ok(2.0 * integrate_real(|x| self.eval(x), 0.0, r, &[], 1e-15, 1e-14)?)
    }

    /// Checks η(0) = 0 and ∫η = 0.
    pub fn validate(&self) -> Result<()> {
        let at_zero = self.eval(0.0);
        if at_zero.abs() > MOMENT_TOL {
            return Err(Error::PreconditionViolation(format!("profile has η(0) = {at_zero:e}")));
        }
        let mass = self.integral()?;
        if mass.abs() > MOMENT_TOL {
            return Err(Error::PreconditionViolation(format!("profile has ∫η = {mass:e}")));
        }
        Ok(())
    }

    /// ∫_0^∞ η(x) x^s dx/x in closed form, valid where every term with a
    /// nonzero coefficient converges (Re s + 2j > 0).
    pub fn mellin(&self, s: Complex64) -> Result<Complex64> {
        let mut total = Complex64::new(0.0, 0.0);
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let z = (s + 2.0 * j as f64) * 0.5;
            if z.re <= 0.0 && z.im == 0.0 && z.re.fract() == 0.0 {
                return Err(Error::Pole(format!("s = {s} of the profile Mellin transform")));
            }
            total += c * 0.5 * Complex64::new(self.rate, 0.0).powc(-z) * gamma(z);
        }
        Ok(total)
    }

    /// Fourier transform ∫ η(x) e^{-2πixξ} dx, in closed form: completing
    /// the square turns each term into a Gaussian moment.
    pub fn fourier(&self, xi: f64) -> f64 {
        let a = self.rate;
        let mu2 = -(PI * xi / a).powi(2);
        let mut total = 0.0;
        for (j, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            // E[(μ+Z)^{2j}] with μ² = mu2 and Var Z = 1/(2a)
            let mut moment = 0.0;
            let mut binom = 1.0;
            let mut dfact = 1.0;
            for m in 0..=j {
                if m > 0 {
                    let n = 2 * j;
                    binom *= ((n - 2 * m + 2) * (n - 2 * m + 1)) as f64 / ((2 * m) * (2 * m - 1)) as f64;
                    dfact *= (2 * m - 1) as f64;
                }
                moment += binom * dfact * (2.0 * a).powi(-(m as i32)) * mu2.powi((j - m) as i32);
            }
            total += c * moment;
        }
        (PI / a).sqrt() * (-PI * PI * xi * xi / a).exp() * total
    }

    /// Fourier transform by quadrature (used as an oracle for [`Self::fourier`]).
    pub fn fourier_quadrature(&self, xi: f64) -> Result<f64> {
        let r = self.decay_radius(1e-18);
        let v = integrate_real(|x| self.eval(x) * (2.0 * PI * x * xi).cos(), 0.0, r, &[], 1e-15, 1e-13)?;
        Ok(2.0 * v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta0_has_vanishing_moments() {
        let eta = SchwartzProfile::eta0();
        assert_eq!(eta.eval(0.0), 0.0);
        assert!(eta.integral().unwrap().abs() < 1e-13);
        eta.validate().unwrap();
    }

    #[test]
    fn plain_gaussian_is_rejected() {
        let g = SchwartzProfile::new(PI, vec![1.0]).unwrap();
        assert!(matches!(g.validate(), Err(Error::PreconditionViolation(_))));
        // x² e^{-πx²} has η(0)=0 but positive mass
        let g = SchwartzProfile::new(PI, vec![0.0, 1.0]).unwrap();
        assert!(matches!(g.validate(), Err(Error::PreconditionViolation(_))));
    }

    #[test]
    fn closed_mellin_matches_quadrature() {
        let eta = SchwartzProfile::eta0();
        for s in [Complex64::new(0.5, 0.0), Complex64::new(0.5, 14.0), Complex64::new(2.0, -3.0)] {
            let r = eta.decay_radius(1e-18);
            let q = super::super::quadrature::integrate(
                |x| Complex64::new(eta.eval(x), 0.0) * Complex64::new(x, 0.0).powc(s - 1.0),
                0.0,
                r,
                &[],
                1e-14,
                1e-13,
            )
            .unwrap();
            let c = eta.mellin(s).unwrap();
            assert!((q.value - c).norm() < 1e-11, "{s}: {} vs {}", q.value, c);
        }
    }

    #[test]
    fn eta0_mellin_is_quarter_poly_times_gamma() {
        // η̃₀(s) = s(s-1)/8 · π^{-s/2} Γ(s/2)
        let eta = SchwartzProfile::eta0();
        let s = Complex64::new(0.7, 4.0);
        let expected = s * (s - 1.0) / 8.0 * Complex64::new(PI, 0.0).powc(-s / 2.0) * gamma(s / 2.0);
        assert!((eta.mellin(s).unwrap() - expected).norm() < 1e-12);
    }

    #[test]
    fn rescaling_is_argument_dilation() {
        let eta = SchwartzProfile::eta0();
        let wide = eta.rescaled(2.5);
        for x in [0.1, 0.7, 1.9, 3.3] {
            assert!((wide.eval(x) - eta.eval(x / 2.5)).abs() < 1e-14);
        }
    }

    #[test]
    fn gaussian_fourier_is_self_dual() {
        let g = SchwartzProfile::new(PI, vec![1.0]).unwrap();
        for xi in [0.0, 0.4, 1.1] {
            assert!((g.fourier(xi) - g.eval(xi)).abs() < 1e-14);
        }
    }

    #[test]
    fn closed_fourier_matches_quadrature() {
        let eta = SchwartzProfile::new(2.0, vec![0.3, -1.0, 0.25, 0.1]).unwrap();
        for xi in [0.0, 0.3, 0.8, 1.5] {
            let q = eta.fourier_quadrature(xi).unwrap();
            assert!((eta.fourier(xi) - q).abs() < 1e-12, "{xi}: {} vs {q}", eta.fourier(xi));
        }
    }
}
