//! The trace pairing ⟨f, g⟩ = Tr(ϑ(f⋆g)) evaluated from either side of the
//! explicit formula, Weil positivity, and the RH estimate split.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::formula::{compensated_sum, FormulaContext, REALITY_TOL};
use super::mellin::{mellin, MellinPlan};
use super::test_function::{convolve_mult, sharp, TestFunction};
use crate::error::{Error, Result};

/// Slack allowed below zero when asserting positivity.
pub const POSITIVITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum PairingMode {
    Spectral,
    Geometric,
}

/// Σ_j [f̂(ρ_j)ĝ(ρ_j) + f̂(ρ̄_j)ĝ(ρ̄_j)] over ρ_j = 1/2 + iγ_j.
fn spectral_pairing(f: &TestFunction, g: &TestFunction, gammas: &[f64]) -> Result<Complex64> {
    let Some(&gmax) = gammas.last() else {
        return Ok(Complex64::new(0.0, 0.0));
    };
    let pf = MellinPlan::new(f, gmax + 1.0)?;
    let pg = MellinPlan::new(g, gmax + 1.0)?;
    let terms: Vec<Complex64> =
        gammas
            .par_iter()
            .map(|&t| {
                let ((f1, f2), (g1, g2)) = (pf.critical_pair(t), pg.critical_pair(t));
                f1 * g1 + f2 * g2
            })
            .collect();
    Ok(Complex64::new(compensated_sum(terms.iter().map(|z| z.re)), compensated_sum(terms.iter().map(|z| z.im))))
}

/// Σ_j [|f̂(1/2+iγ_j)|² + |f̂(1/2−iγ_j)|²], the spectral value of ⟨f, f^♯⟩.
fn spectral_norm(f: &TestFunction, gammas: &[f64]) -> Result<f64> {
    let Some(&gmax) = gammas.last() else {
        return Ok(0.0);
    };
    let plan = MellinPlan::new(f, gmax + 1.0)?;
    // ĥ(1/2 − iγ) is the conjugate of ĥ(1/2 + iγ) for real h
    let real = f.is_real();
    let terms: Vec<f64> = gammas
        .par_iter()
        .map(|&t| {
            if real {
                2.0 * plan.critical(t).norm_sqr()
            } else {
                let (a, b) = plan.critical_pair(t);
                a.norm_sqr() + b.norm_sqr()
            }
        })
        .collect();
    Ok(compensated_sum(terms))
}

fn is_sharp_of(f: &TestFunction, g: &TestFunction) -> bool {
    matches!(g, TestFunction::Sharp(inner) if inner.as_ref() == f)
}

pub fn weil_pairing(f: &TestFunction, g: &TestFunction, mode: PairingMode, ctx: &FormulaContext) -> Result<f64> {
    let value = match mode {
        PairingMode::Spectral if is_sharp_of(f, g) => return spectral_norm(f, ctx.gammas()),
        PairingMode::Spectral => spectral_pairing(f, g, ctx.gammas())?,
        PairingMode::Geometric => ctx.geometric(&convolve_mult(f, g)?)?.value(),
    };
    if value.im.abs() > REALITY_TOL * (1.0 + value.re.abs()) {
        return Err(Error::NumericalFailure(format!("pairing has imaginary part {:e}", value.im)));
    }
    Ok(value.re)
}

/// ⟨f, f^♯⟩ on the spectral side and whether it is ≥ −tol.
pub fn positivity_check(f: &TestFunction, ctx: &FormulaContext) -> Result<(f64, bool)> {
    let v = weil_pairing(f, &sharp(f), PairingMode::Spectral, ctx)?;
    Ok((v, v >= -POSITIVITY_TOL))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhEstimate {
    /// Σ_v local terms of the geometric side on f⋆f^♯
    pub lhs: f64,
    /// 2·Re(f̂(0)·conj f̂(1)) − discLog·(f⋆f^♯)(1)
    pub rhs: f64,
    pub holds: bool,
}

pub fn rh_estimate_check(f: &TestFunction, ctx: &FormulaContext, tol: f64) -> Result<RhEstimate> {
    let h = convolve_mult(f, &sharp(f))?;
    let geo = ctx.geometric(&h)?;
    let lhs = geo.local_total().re;
    let f0 = mellin(f, Complex64::new(0.0, 0.0))?;
    let f1 = mellin(f, Complex64::new(1.0, 0.0))?;
    let rhs = 2.0 * (f0 * f1.conj()).re - ctx.disc_log * geo.h_at_one.re;
    Ok(RhEstimate { lhs, rhs, holds: lhs <= rhs + tol })
}
