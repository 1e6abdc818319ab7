//! Gibbs states of the valuation dynamics on a finite model of the orbit
//! {r·y : r ∈ ℚ*} truncated at level K, and the time evolution
//! σ_t(f)(k, x) = |k|_p^{it} f(k, x).

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};

use super::digits::check_prime_lambda;
use crate::error::{Error, Result};
use crate::groupoid::FiniteGroupoidFunction;
use crate::number::{vp, Component, Place, Rational, SemilocalAdele};

/// Orbit points ±m p^{-k}, 0 < m < λp^k, p ∤ m, 0 ≤ k ≤ K, each seen as
/// the principal adele at the place p.
#[derive(Debug, Clone)]
pub struct KmsModel {
    pub p: u64,
    pub lambda: Rational,
    pub level: usize,
    points: Vec<SemilocalAdele>,
}

impl KmsModel {
    pub fn new(lambda: &Rational, p: u64, level: usize) -> Result<Self> {
        check_prime_lambda(lambda, p)?;
        let mut points = Vec::new();
        for k in 0..=level {
            let pk = BigInt::from(p).pow(k as u32);
            let top = (lambda * Rational::from_integer(pk.clone())).ceil().to_integer();
            let top = top.to_u64().ok_or_else(|| Error::InvalidArgument("model too large".into()))?;
            for m in (1..top).filter(|m| m % p != 0) {
                for sign in [1i64, -1] {
                    let r = Rational::new(BigInt::from(m as i64 * sign), pk.clone());
                    points.push(SemilocalAdele::principal(&r, &[p], false)?);
                }
            }
        }
        Ok(KmsModel { p, lambda: lambda.clone(), level, points })
    }

    pub fn points(&self) -> &[SemilocalAdele] {
        &self.points
    }

    /// Level k of a point r·y, i.e. −v_p(r), after checking it is in the model.
    pub fn level_of(&self, x: &SemilocalAdele) -> Result<usize> {
        let r = match x.component(&Place::Finite(self.p)) {
            Some(Component::Finite(r)) if x.support().count() == 1 => r.clone(),
            _ => return Err(Error::ModelIncomplete(format!("{x} is not an orbit point of the model"))),
        };
        let v = vp(&r, self.p)?
            .finite()
            .ok_or_else(|| Error::ModelIncomplete("the origin is not in the orbit".into()))?;
        if v > 0 || (-v) as usize > self.level {
            return Err(Error::ModelIncomplete(format!("{r} lies outside levels 0..={}", self.level)));
        }
        let k = (-v) as usize;
        let m = (&r * Rational::from_integer(BigInt::from(self.p).pow(k as u32))).abs();
        if m >= &self.lambda * Rational::from_integer(BigInt::from(self.p).pow(k as u32)) {
            return Err(Error::ModelIncomplete(format!("{r} is above the energy cutoff")));
        }
        Ok(k)
    }

    fn weight_exact(&self, k: usize, beta: u32) -> Rational {
        Rational::new(BigInt::one(), BigInt::from(self.p).pow((k * beta as usize) as u32))
    }

    /// Σ_x p^{-kβ} over the model: the level-K truncation of Z_p.
    pub fn partition_exact(&self, beta: u32) -> Result<Rational> {
        let mut z = Rational::zero();
        for x in &self.points {
            z += self.weight_exact(self.level_of(x)?, beta);
        }
        Ok(z)
    }

    pub fn partition(&self, beta: f64) -> Result<f64> {
        let mut z = 0.0;
        for x in &self.points {
            z += (self.p as f64).powf(-(self.level_of(x)? as f64) * beta);
        }
        Ok(z)
    }
}

/// ψ_β(f) = Z⁻¹ Σ_x p^{-k(x)β} f(1, x), exact for integer β.
pub fn kms_functional_exact(f: &FiniteGroupoidFunction<Rational>, model: &KmsModel, beta: u32) -> Result<Rational> {
    let one = Rational::one();
    let mut acc = Rational::zero();
    for (k, x, v) in f.entries() {
        let level = model.level_of(x)?;
        if *k == one {
            acc += model.weight_exact(level, beta) * v;
        }
    }
    Ok(acc / model.partition_exact(beta)?)
}

pub fn kms_functional(f: &FiniteGroupoidFunction<Complex64>, model: &KmsModel, beta: f64) -> Result<Complex64> {
    let one = Rational::one();
    let mut acc = Complex64::zero();
    for (k, x, v) in f.entries() {
        let level = model.level_of(x)?;
        if *k == one {
            acc += (model.p as f64).powf(-(level as f64) * beta) * v;
        }
    }
    Ok(acc / model.partition(beta)?)
}

fn vp_finite(k: &Rational, p: u64) -> Result<i64> {
    vp(k, p)?.finite().ok_or_else(|| Error::InvalidArgument("k must be nonzero".into()))
}

/// σ_{iβ}(f)(k, x) = |k|_p^{-β} f(k, x) for integer β.
pub fn sigma_imaginary_exact(f: &FiniteGroupoidFunction<Rational>, p: u64, beta: u32) -> Result<FiniteGroupoidFunction<Rational>> {
    for (k, _, _) in f.entries() {
        vp_finite(k, p)?;
    }
    Ok(f.map_entries(|k, _, v| {
        let e = vp(k, p).ok().and_then(|v| v.finite()).unwrap_or(0) * beta as i64;
        let pb = Rational::from_integer(BigInt::from(p));
        v * pb.pow(e as i32)
    }))
}

/// σ_t(f)(k, x) = |k|_p^{it} f(k, x) = e^{−i t v_p(k) log p} f(k, x).
pub fn time_evolution(f: &FiniteGroupoidFunction<Complex64>, p: u64, t: f64) -> Result<FiniteGroupoidFunction<Complex64>> {
    for (k, _, _) in f.entries() {
        vp_finite(k, p)?;
    }
    let lp = (p as f64).ln();
    Ok(f.map_entries(|k, _, v| {
        let e = vp(k, p).ok().and_then(|v| v.finite()).unwrap_or(0) as f64;
        v * Complex64::from_polar(1.0, -t * e * lp)
    }))
}

/// The cocycle v_p(kx) − v_p(x) equals v_p(k).
pub fn coboundary_holds(k: &Rational, x: &Rational, p: u64) -> Result<bool> {
    let a = vp_finite(&(k * x), p)?;
    let b = vp_finite(x, p)?;
    Ok(a - b == vp_finite(k, p)?)
}
