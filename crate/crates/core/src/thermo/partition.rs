//! Partition function Z_p(λ, β) of the truncated valuation Hamiltonian, its
//! digit series f_p, multiplicities, jumps and the scale-periodic extension.

use num_bigint::BigInt;
use num_traits::{One, Pow, ToPrimitive, Zero};
use serde::Serialize;

use super::digits::{ceiling_counts, check_prime_lambda, digits_from_counts, floor_counts, periodic_digits};
use crate::error::{Error, Result};
use crate::number::{is_prime, rational_to_f64, snap_to_rational, Rational};

pub const DEFAULT_TRUNCATION: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartitionEvaluation {
    pub value: f64,
    pub truncation: usize,
    pub tail_bound: f64,
}

fn check_beta(beta: f64, allow_one: bool) -> Result<()> {
    if beta == 1.0 && !allow_one {
        return Err(Error::Pole("β = 1, where 2(1−p^{-β})/(1−p^{1−β}) diverges".into()));
    }
    if !beta.is_finite() || beta < 1.0 {
        let need = if allow_one { "β ≥ 1" } else { "β > 1" };
        return Err(Error::OutOfDomain(format!("{need} required, got β = {beta}")));
    }
    Ok(())
}

fn int_rat(n: u64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// p^{-β·k} as an exact rational.
fn weight_exact(p: u64, beta: u32, k: usize) -> Rational {
    Rational::new(BigInt::one(), BigInt::from(p).pow((beta as usize * k) as u32))
}

/// Σ_{k≤K} c_k p^{-kβ} with the bound (p−1)p^{-(K+1)β}/(1−p^{-β}) on the rest.
pub fn f_p(lambda: &Rational, p: u64, beta: f64, k: usize) -> Result<PartitionEvaluation> {
    check_prime_lambda(lambda, p)?;
    check_beta(beta, true)?;
    let c = digits_from_counts(&ceiling_counts(lambda, p, k), p);
    let x = (p as f64).powf(-beta);
    // Horner from the top keeps the small terms together
    let value = c.iter().rev().fold(0.0, |acc, &d| acc * x + d as f64);
    let tail_bound = if beta == 1.0 {
        (p as f64).powf(-(k as f64))
    } else {
        (p as f64 - 1.0) * x.powi(k as i32 + 1) / (1.0 - x)
    };
    Ok(PartitionEvaluation { value, truncation: k, tail_bound })
}

/// Exact partial sum Σ_{k≤K} c_k p^{-kβ} for integer β ≥ 1.
pub fn f_p_truncated_exact(lambda: &Rational, p: u64, beta: u32, k: usize) -> Result<Rational> {
    check_prime_lambda(lambda, p)?;
    if beta == 0 {
        return Err(Error::OutOfDomain("β ≥ 1 required".into()));
    }
    let c = digits_from_counts(&ceiling_counts(lambda, p, k), p);
    let x = weight_exact(p, beta, 1);
    Ok(c.iter().rev().fold(Rational::zero(), |acc, &d| acc * &x + int_rat(d)))
}

/// The full series f_p(λ, β) as an exact rational for integer β ≥ 1, summed
/// through the eventually periodic digit expansion.
pub fn f_p_exact(lambda: &Rational, p: u64, beta: u32) -> Result<Rational> {
    if beta == 0 {
        return Err(Error::OutOfDomain("β ≥ 1 required".into()));
    }
    let pd = periodic_digits(lambda, p)?;
    let x = weight_exact(p, beta, 1);
    let poly = |ds: &[u64]| ds.iter().rev().fold(Rational::zero(), |acc, &d| acc * &x + int_rat(d));
    let pre = poly(&pd.preperiod);
    let per = poly(&pd.period);
    let shift = weight_exact(p, beta, pd.preperiod.len());
    let cycle = Rational::one() - weight_exact(p, beta, pd.period.len());
    Ok(pre + shift * per / cycle)
}

/// 2(1−p^{-β})/(1−p^{1−β}).
fn prefactor(p: u64, beta: f64) -> f64 {
    let pf = p as f64;
    2.0 * (1.0 - pf.powf(-beta)) / (1.0 - pf.powf(1.0 - beta))
}

fn prefactor_exact(p: u64, beta: u32) -> Rational {
    let x = weight_exact(p, beta, 1);
    let two = int_rat(2);
    two * (Rational::one() - &x) / (Rational::one() - int_rat(p) * x)
}

/// Z_p(λ, β) = 2(1−p^{-β})/(1−p^{1−β}) · f_p(λ, β), β > 1.
pub fn zp(lambda: &Rational, p: u64, beta: f64, k: usize) -> Result<PartitionEvaluation> {
    check_beta(beta, false)?;
    let f = f_p(lambda, p, beta, k)?;
    let a = prefactor(p, beta);
    Ok(PartitionEvaluation { value: a * f.value, truncation: k, tail_bound: a * f.tail_bound })
}

pub fn zp_exact(lambda: &Rational, p: u64, beta: u32) -> Result<Rational> {
    if beta < 2 {
        return Err(Error::OutOfDomain(format!("β > 1 required, got β = {beta}")));
    }
    Ok(prefactor_exact(p, beta) * f_p_exact(lambda, p, beta)?)
}

/// Number of orbit points at level k: 2(⌈λp^k−1⌉ − ⌈λp^{k−1}−1⌉).
pub fn multiplicity(k: usize, lambda: &Rational, p: u64) -> Result<BigInt> {
    check_prime_lambda(lambda, p)?;
    let c = ceiling_counts(lambda, p, k);
    let prev = if k == 0 { BigInt::zero() } else { c[k - 1].clone() };
    Ok(BigInt::from(2) * (&c[k] - prev))
}

/// Enumeration of the level-k points ±m p^{-k}, 0 < m < λp^k, p ∤ m.
pub fn brute_force_multiplicity(k: usize, lambda: &Rational, p: u64) -> Result<u64> {
    check_prime_lambda(lambda, p)?;
    let bound = lambda * int_rat(p).pow(k as i32);
    let top = bound
        .ceil()
        .to_integer()
        .to_u64()
        .ok_or_else(|| Error::InvalidArgument("level too deep to enumerate".into()))?;
    let count = (1..top).filter(|m| m % p != 0).count() as u64;
    Ok(2 * count)
}

/// Limit of Z_p(λ', β) as λ' decreases to λ; uses ⌊λp^k⌋ in place of
/// ⌈λp^k − 1⌉. Needs λ < p so that the level −1 stays empty.
pub fn zp_right_limit(lambda: &Rational, p: u64, beta: f64, k: usize) -> Result<PartitionEvaluation> {
    check_prime_lambda(lambda, p)?;
    check_beta(beta, false)?;
    if *lambda >= int_rat(p) {
        return Err(Error::InvalidArgument("right limit needs λ < p".into()));
    }
    let c = digits_from_counts(&floor_counts(lambda, p, k), p);
    let x = (p as f64).powf(-beta);
    let f = c.iter().rev().fold(0.0, |acc, &d| acc * x + d as f64);
    let a = prefactor(p, beta);
    let tail = a * (p as f64 - 1.0) * x.powi(k as i32 + 1) / (1.0 - x);
    Ok(PartitionEvaluation { value: a * f, truncation: k, tail_bound: tail })
}

/// If λ = m p^{-k} with p ∤ m, returns k: Z_p jumps there by 2p^{-kβ}.
pub fn jump_level(lambda: &Rational, p: u64) -> Option<usize> {
    let den = lambda.denom();
    let pb = BigInt::from(p);
    let mut d = den.clone();
    let mut k = 0usize;
    while (&d % &pb).is_zero() {
        d /= &pb;
        k += 1;
    }
    if !d.is_one() || (lambda.numer() % &pb).is_zero() {
        return None;
    }
    Some(k)
}

/// Bi-infinite sum Σ_{k∈ℤ} 2(⌈λp^k−1⌉ − ⌈λp^{k−1}−1⌉) p^{-kβ} for any λ > 0.
/// Real λ is first snapped to a nearby simple rational.
pub fn zp_extended(lambda: f64, p: u64, beta: f64) -> Result<PartitionEvaluation> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    check_beta(beta, false)?;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("λ = {lambda} must be positive")));
    }
    let l = snap_to_rational(lambda, 1e-15)
        .ok_or_else(|| Error::InvalidArgument(format!("cannot represent λ = {lambda}")))?;
    zp_extended_rational(&l, p, beta)
}

pub fn zp_extended_rational(lambda: &Rational, p: u64, beta: f64) -> Result<PartitionEvaluation> {
    check_beta(beta, false)?;
    let pf = p as f64;
    let one = Rational::one();
    let pr = int_rat(p);
    // first level with λp^k > 1 (earlier levels are empty)
    let mut k0: i64 = 0;
    let mut scaled = lambda.clone();
    while scaled > one {
        scaled /= &pr;
        k0 -= 1;
    }
    while scaled <= one {
        scaled *= &pr;
        k0 += 1;
    }
    // scaled = λp^{k0} ∈ (1, p]
    let ratio = pf.powf(1.0 - beta);
    let lam = rational_to_f64(lambda);
    let mut prev_count = BigInt::zero();
    let mut total = 0.0;
    let mut k = k0;
    let mut power = Rational::one(); // p^{k−k0}
    let mut n = 0usize;
    loop {
        let count = (&scaled * &power - &one).ceil().to_integer();
        // (C_k − C_{k−1})/p^k, bounded by λ
        let density = rational_to_f64(&(Rational::from_integer(&count - &prev_count) / &power)) * pf.powi(-(k0 as i32));
        let term = 2.0 * density * pf.powf(k as f64 * (1.0 - beta));
        total += term;
        prev_count = count;
        // remaining levels: each below 2λ p^{j(1−β)}
        let tail = 2.0 * lam * pf.powf((k + 1) as f64 * (1.0 - beta)) / (1.0 - ratio);
        if tail <= 1e-17 * total || n > 20_000 {
            return Ok(PartitionEvaluation { value: total, truncation: n, tail_bound: tail });
        }
        power *= &pr;
        k += 1;
        n += 1;
    }
}

/// ζ_p(λ, β) = λ^{-β} Z_p(λ, β), invariant under λ ↦ pλ.
pub fn zeta_p(lambda: f64, p: u64, beta: f64) -> Result<f64> {
    Ok(lambda.powf(-beta) * zp_extended(lambda, p, beta)?.value)
}

/// Degeneracy of the ground level: 2⌈λ − 1⌉, the β → ∞ limit of Z_p.
pub fn vacuum_degeneracy(lambda: &Rational, p: u64) -> Result<BigInt> {
    check_prime_lambda(lambda, p)?;
    Ok(BigInt::from(2) * (lambda - Rational::one()).ceil().to_integer())
}

/// Independent evaluation of Z_p: explicit enumeration of the orbit points at
/// every level with λp^k ≤ `enumerate_up_to`, then counting by
/// "integers below λp^k minus multiples of p" until the remainder is negligible.
pub fn zp_brute_force(lambda: &Rational, p: u64, beta: f64, enumerate_up_to: u64) -> Result<f64> {
    check_prime_lambda(lambda, p)?;
    check_beta(beta, false)?;
    let pf = p as f64;
    let lam = rational_to_f64(lambda);
    let ratio = pf.powf(1.0 - beta);
    let mut total = 0.0;
    let mut scaled = lambda.clone(); // λp^k
    let pr = int_rat(p);
    let mut k = 0usize;
    loop {
        let bound = scaled.ceil().to_integer();
        let level = match bound.to_u64() {
            Some(top) if top <= enumerate_up_to => {
                let m = (1..top).filter(|m| m % p != 0).count() as f64;
                2.0 * m * pf.powf(-(k as f64) * beta)
            }
            _ => {
                let below = |x: &Rational| x.ceil().to_integer() - BigInt::one();
                let count = below(&scaled) - below(&(&scaled / &pr));
                // count / p^k stays O(λ)
                let dens = rational_to_f64(&(Rational::from_integer(count) / &scaled)) * lam;
                2.0 * dens * pf.powf(k as f64 * (1.0 - beta))
            }
        };
        total += level;
        let tail = 2.0 * lam * pf.powf((k + 1) as f64 * (1.0 - beta)) / (1.0 - ratio);
        if tail <= 1e-17 * total || k > 20_000 {
            return Ok(total);
        }
        scaled *= &pr;
        k += 1;
    }
}
