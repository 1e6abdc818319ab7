//! The functions φ_a(ρ, λ) = Σ_{y ∈ Λ+φ(a)} y⁻¹ on 1-dimensional ℚ-lattices
//! Λ = λ⁻¹ℤ, their derivative ψ_a, and the checks of the grading, the
//! monodromy N and the Galois intertwining.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::group_ring::residue;
use crate::error::{Error, Result};
use crate::number::{rational_to_f64, snap_to_rational, Rational};

/// A lattice λ⁻¹ℤ with the point λ⁻¹ρ; ρ ∈ Ẑ is given by an integer
/// representative, which is all a residue a ∈ ℚ/ℤ can see.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QLatticePoint {
    #[serde(serialize_with = "ser_big")]
    pub rho: BigInt,
    pub lambda: f64,
}

fn ser_big<S: serde::Serializer>(b: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&b.to_string())
}

impl QLatticePoint {
    pub fn new(rho: i64, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidArgument(format!("λ = {lambda} must be positive")));
        }
        Ok(QLatticePoint { rho: BigInt::from(rho), lambda })
    }

    /// x = ⟨ρa⟩ ∈ [0, 1).
    pub fn residue_of(&self, a: &Rational) -> Rational {
        residue(&(a * Rational::from_integer(self.rho.clone())))
    }

    fn with_lambda(&self, lambda: f64) -> QLatticePoint {
        QLatticePoint { rho: self.rho.clone(), lambda }
    }
}

fn cot_pi(x: &Rational) -> f64 {
    let t = rational_to_f64(x);
    // cot(πx) = tan(π(1/2 − x)), better conditioned near x = 1/2
    (PI * (0.5 - t)).tan()
}

/// φ_a = λπ cot(πx), zero when x = 0.
pub fn eisenstein_phi(a: &Rational, pt: &QLatticePoint) -> Complex64 {
    let x = pt.residue_of(a);
    if x.is_zero() {
        return Complex64::zero();
    }
    Complex64::new(pt.lambda * PI * cot_pi(&x), 0.0)
}

/// ψ_a = (1/2πi) dφ_a/dλ = cot(πx)/(2i), independent of λ.
pub fn eisenstein_psi(a: &Rational, pt: &QLatticePoint) -> Complex64 {
    let x = pt.residue_of(a);
    if x.is_zero() {
        return Complex64::zero();
    }
    Complex64::new(0.0, -0.5 * cot_pi(&x))
}

/// λ Σ_{n=−N}^{N} 1/(n + x), the symmetric partial sum.
pub fn symmetric_partial_sum(x: f64, lambda: f64, n: u64) -> f64 {
    // pair n and −n: 1/(x+n) + 1/(x−n) = 2x/(x² − n²); add small terms first
    let mut s = 0.0;
    for k in (1..=n).rev() {
        let k = k as f64;
        s += 2.0 * x / (x * x - k * k);
    }
    lambda * (s + 1.0 / x)
}

/// Symmetric partial sums at N₀·2^j, j ≤ levels, with Richardson
/// extrapolation in powers of 1/N.
pub fn eisenstein_phi_oracle(a: &Rational, pt: &QLatticePoint) -> f64 {
    let x = pt.residue_of(a);
    if x.is_zero() {
        return 0.0;
    }
    let xf = rational_to_f64(&x);
    let levels = 6;
    let n0 = 100_000u64 >> (levels - 1);
    let mut table: Vec<f64> = (0..levels).map(|j| symmetric_partial_sum(xf, pt.lambda, n0 << j)).collect();
    for order in 1..levels {
        let f = 2f64.powi(order as i32);
        table = table.windows(2).map(|w| (f * w[1] - w[0]) / (f - 1.0)).collect();
    }
    table[0]
}

#[derive(Debug, Clone, Serialize)]
pub struct DerivationReport {
    /// |N(φ_a) − ψ_a| with N = (1/2πi) d/dλ by central differences.
    pub n_phi_minus_psi: f64,
    pub n_psi: f64,
    /// |Y(φ_a) − φ_a| and |Y(ψ_a)| with Y = λ d/dλ.
    pub y_phi_minus_phi: f64,
    pub y_psi: f64,
    /// max over {φ_a, ψ_a} of |F(μ)N(f) − μ N(F(μ)f)| with F(μ)f(λ) = f(λ/μ).
    pub scaling_relation: f64,
    pub holds: bool,
}

pub const DERIVATION_TOL: f64 = 1e-7;

fn d_dlambda(f: &dyn Fn(f64) -> Complex64, lambda: f64) -> Complex64 {
    let h = 1e-5 * lambda;
    (f(lambda + h) - f(lambda - h)) / (2.0 * h)
}

pub fn derivation_checks(a: &Rational, pt: &QLatticePoint, mu: f64) -> Result<DerivationReport> {
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::InvalidArgument(format!("μ = {mu} must be positive")));
    }
    let two_pi_i = Complex64::new(0.0, 2.0 * PI);
    let lam = pt.lambda;
    let phi = |l: f64| eisenstein_phi(a, &pt.with_lambda(l));
    let psi = |l: f64| eisenstein_psi(a, &pt.with_lambda(l));
    let n_of = |f: &dyn Fn(f64) -> Complex64, l: f64| d_dlambda(f, l) / two_pi_i;

    let n_phi_minus_psi = (n_of(&phi, lam) - psi(lam)).norm();
    let n_psi = n_of(&psi, lam).norm();
    let y_phi_minus_phi = (lam * d_dlambda(&phi, lam) - phi(lam)).norm();
    let y_psi = (lam * d_dlambda(&psi, lam)).norm();

    let mut scaling_relation = 0.0f64;
    for f in [&phi as &dyn Fn(f64) -> Complex64, &psi] {
        let lhs = n_of(f, lam / mu);
        let scaled = |l: f64| f(l / mu);
        let rhs = mu * n_of(&scaled, lam);
        scaling_relation = scaling_relation.max((lhs - rhs).norm());
    }
    let scale = 1.0 + phi(lam).norm();
    let holds = n_phi_minus_psi <= DERIVATION_TOL * scale
        && n_psi <= DERIVATION_TOL * scale
        && y_phi_minus_phi <= DERIVATION_TOL * scale
        && y_psi <= DERIVATION_TOL * scale
        && scaling_relation <= DERIVATION_TOL * scale;
    Ok(DerivationReport { n_phi_minus_psi, n_psi, y_phi_minus_phi, y_psi, scaling_relation, holds })
}

/// (ζ + 1)/(2(ζ − 1)) at ζ = e^{2πi x}, zero at ζ = 1.
pub fn psi_from_root_of_unity(zeta: Complex64) -> Complex64 {
    if (zeta - 1.0).norm() < 1e-300 {
        return Complex64::zero();
    }
    (zeta + 1.0) / (2.0 * (zeta - 1.0))
}

fn root_of_unity(x: &Rational) -> Complex64 {
    // 2πi·(n/d) with n reduced mod d first
    let d = x.denom().to_f64().unwrap_or(1.0);
    let n = (x.numer() % x.denom()).to_f64().unwrap_or(0.0);
    Complex64::from_polar(1.0, 2.0 * PI * n / d)
}

/// σ_u(ψ_a(ρ)) through ζ ↦ ζ^u against ψ_a(uρ); the gap is returned too.
pub fn galois_intertwine_check(a: &Rational, u: i64, pt: &QLatticePoint) -> Result<(bool, f64)> {
    let x = pt.residue_of(a);
    let d = x.denom().clone();
    if !BigInt::from(u).gcd(&d).is_one() {
        return Err(Error::InvalidArgument(format!("{u} is not a unit mod {d}")));
    }
    let zeta_u = root_of_unity(&residue(&(&x * Rational::from_integer(BigInt::from(u)))));
    let lhs = psi_from_root_of_unity(zeta_u);
    let moved = QLatticePoint { rho: &pt.rho * BigInt::from(u), lambda: pt.lambda };
    let rhs = eisenstein_psi(a, &moved);
    let gap = (lhs - rhs).norm();
    Ok((gap <= 1e-10 * (1.0 + rhs.norm()), gap))
}

#[derive(Debug, Clone, Serialize)]
pub struct GaloisOrbit {
    pub units: Vec<i64>,
    pub values: Vec<(f64, f64)>,
    /// e_1..e_k of the orbit values, as (re, im).
    pub symmetric_functions: Vec<(f64, f64)>,
    /// The symmetric functions snapped to rationals when their imaginary
    /// parts vanish.
    pub rational_forms: Vec<Option<String>>,
    pub rational: bool,
}

/// The values ψ_a(uρ) over u ∈ (ℤ/dℤ)*, d the order of ⟨ρa⟩.
pub fn galois_orbit(a: &Rational, pt: &QLatticePoint) -> GaloisOrbit {
    let x = pt.residue_of(a);
    let d = x.denom().to_i64().unwrap_or(1);
    let units: Vec<i64> = (1..=d.max(1)).filter(|u| u.gcd(&d) == 1).collect();
    let values: Vec<Complex64> = units
        .iter()
        .map(|&u| eisenstein_psi(a, &QLatticePoint { rho: &pt.rho * BigInt::from(u), lambda: pt.lambda }))
        .collect();
    // elementary symmetric functions by expanding Π(1 + v T)
    let mut e = vec![Complex64::new(1.0, 0.0)];
    for v in &values {
        let mut next = e.clone();
        next.push(Complex64::zero());
        for j in 1..next.len() {
            next[j] += e[j - 1] * v;
        }
        e = next;
    }
    let sym: Vec<Complex64> = e[1..].to_vec();
    let rational_forms: Vec<Option<String>> = sym
        .iter()
        .map(|c| {
            if c.im.abs() > 1e-9 * (1.0 + c.re.abs()) {
                return None;
            }
            snap_to_rational(c.re, 1e-12)
                .filter(|r| r.denom() <= &BigInt::from(1_000_000) && (rational_to_f64(r) - c.re).abs() <= 1e-9 * (1.0 + c.re.abs()))
                .map(|r| r.to_string())
        })
        .collect();
    let rational = rational_forms.iter().all(Option::is_some);
    GaloisOrbit {
        units,
        values: values.iter().map(|v| (v.re, v.im)).collect(),
        symmetric_functions: sym.iter().map(|v| (v.re, v.im)).collect(),
        rational_forms,
        rational,
    }
}
