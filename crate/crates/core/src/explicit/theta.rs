//! Theta series θ(λ) = Σ_{n≥1} η(nλ), degrees of correspondences, and the
//! degree adjustment by elements of the range of the summation map.

use num_complex::Complex64;
use serde::Serialize;

use super::mellin::mellin;
use super::profile::SchwartzProfile;
use super::quadrature::{integrate, integrate_real};
use super::special::zeta;
use super::test_function::TestFunction;
use crate::error::Result;

/// Radius of the circle used to average the closed form across the
/// removable singularity at s = 1.
const POLE_RADIUS: f64 = 0.05;
const POLE_NODES: usize = 64;

pub fn theta_series(profile: &SchwartzProfile) -> Result<TestFunction> {
    TestFunction::theta(profile.clone())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ThetaMellinMethod {
    /// ∫ θ(λ) λ^s d*λ by quadrature
    Quadrature,
    /// ζ(s)·η̃(s)
    ClosedForm,
}

pub fn theta_mellin(profile: &SchwartzProfile, s: Complex64, method: ThetaMellinMethod) -> Result<Complex64> {
    profile.validate()?;
    match method {
        ThetaMellinMethod::Quadrature => mellin(&theta_series(profile)?, s),
        ThetaMellinMethod::ClosedForm => {
            if (s - 1.0).norm() < 1e-3 {
                // ζ has a pole where η̃ vanishes; the product is analytic, so
                // its value is the mean over a small circle
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..POLE_NODES {
                    let z = s + Complex64::from_polar(POLE_RADIUS, std::f64::consts::TAU * k as f64 / POLE_NODES as f64);
                    acc += closed_form(profile, z)?;
                }
                Ok(acc / POLE_NODES as f64)
            } else {
                closed_form(profile, s)
            }
        }
    }
}

fn closed_form(profile: &SchwartzProfile, s: Complex64) -> Result<Complex64> {
    Ok(zeta(s)?.value * profile.mellin(s)?)
}

/// ∫ |θ(λ)| λ^{1/2} d*λ, the natural size of θ̂ on the critical line.
pub fn theta_scale(profile: &SchwartzProfile) -> Result<f64> {
    let theta = theta_series(profile)?;
    let (lo, hi) = theta.log_support();
    integrate_real(|x| theta.eval_log(x).re.abs() * (0.5 * x).exp(), lo, hi, &[], 1e-15, 1e-12)
}

/// ∫_0^∞ η(nλ) dλ for n = 1..=n_max: each vanishes although the summed
/// integral ∫ θ(λ) dλ does not.
pub fn fubini_terms(profile: &SchwartzProfile, n_max: usize) -> Result<Vec<f64>> {
    let r = profile.decay_radius(1e-18);
    (1..=n_max)
        .map(|n| {
            let n = n as f64;
            integrate(|l| Complex64::new(profile.eval(n * l), 0.0), 0.0, r / n, &[], 1e-15, 1e-14).map(|q| q.value.re)
        })
        .collect()
}

/// d(Z(f)) = f̂(1).
pub fn degree(f: &TestFunction) -> Result<f64> {
    Ok(mellin(f, Complex64::new(1.0, 0.0))?.re)
}

/// d'(Z(f)) = f̂(0).
pub fn codegree(f: &TestFunction) -> Result<f64> {
    Ok(mellin(f, Complex64::new(0.0, 0.0))?.re)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DegreeAdjustment {
    pub function: TestFunction,
    pub coefficient: f64,
    pub theta_degree: f64,
    pub theta_codegree: f64,
}

/// f + c·θ(η₀) with c chosen so the degree becomes `target`.
pub fn adjust_degree(f: &TestFunction, target: f64) -> Result<DegreeAdjustment> {
    let theta = theta_series(&SchwartzProfile::eta0())?;
    let theta_degree = degree(&theta)?;
    let theta_codegree = codegree(&theta)?;
    let coefficient = (target - degree(f)?) / theta_degree;
    let function = f.plus(&theta.scaled(Complex64::new(coefficient, 0.0)));
    Ok(DegreeAdjustment { function, coefficient, theta_degree, theta_codegree })
}
