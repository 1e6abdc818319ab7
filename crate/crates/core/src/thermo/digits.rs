//! Base-p digits of λ ∈ (1, p] via c_k = ⌈λp^k − 1⌉ − p⌈λp^{k−1} − 1⌉.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::number::{ceil_rational, is_prime, Rational};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DigitExpansion {
    pub p: u64,
    #[serde(serialize_with = "crate::thermo::ser_rational")]
    pub lambda: Rational,
    pub coeffs: Vec<u64>,
    pub truncation: usize,
}

pub(crate) fn check_prime_lambda(lambda: &Rational, p: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::InvalidArgument(format!("{p} is not prime")));
    }
    let one = Rational::one();
    let pr = Rational::from_integer(BigInt::from(p));
    if !(lambda > &one && lambda <= &pr) {
        return Err(Error::InvalidArgument(format!("λ = {lambda} must lie in (1, {p}]")));
    }
    Ok(())
}

/// C_k = ⌈λp^k − 1⌉ for k = 0..=K (the count of positive integers below λp^k).
pub fn ceiling_counts(lambda: &Rational, p: u64, k_max: usize) -> Vec<BigInt> {
    let one = Rational::one();
    let pb = BigInt::from(p);
    let mut scaled = lambda.clone();
    let mut out = Vec::with_capacity(k_max + 1);
    for _ in 0..=k_max {
        out.push(ceil_rational(&(&scaled - &one)));
        scaled *= Rational::from_integer(pb.clone());
    }
    out
}

/// ⌊λp^k⌋: the counts of the limit from the right.
pub fn floor_counts(lambda: &Rational, p: u64, k_max: usize) -> Vec<BigInt> {
    let pb = BigInt::from(p);
    let mut scaled = lambda.clone();
    let mut out = Vec::with_capacity(k_max + 1);
    for _ in 0..=k_max {
        out.push(scaled.floor().to_integer());
        scaled *= Rational::from_integer(pb.clone());
    }
    out
}

pub(crate) fn digits_from_counts(counts: &[BigInt], p: u64) -> Vec<u64> {
    let pb = BigInt::from(p);
    let mut prev = BigInt::zero();
    counts
        .iter()
        .map(|c| {
            let d = c - &pb * &prev;
            prev = c.clone();
            d.to_u64().expect("digit lies in 0..p")
        })
        .collect()
}

pub fn digits(lambda: &Rational, p: u64, k: usize) -> Result<DigitExpansion> {
    check_prime_lambda(lambda, p)?;
    let coeffs = digits_from_counts(&ceiling_counts(lambda, p, k), p);
    Ok(DigitExpansion { p, lambda: lambda.clone(), coeffs, truncation: k })
}

/// Digits c_0.. split into a preperiod and a period. The remainder
/// ρ_k = λp^k − C_k ∈ (0, 1] evolves by ρ ↦ pρ − ⌈pρ − 1⌉ on a finite set,
/// so the expansion is eventually periodic.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicDigits {
    pub preperiod: Vec<u64>,
    pub period: Vec<u64>,
}

pub fn periodic_digits(lambda: &Rational, p: u64) -> Result<PeriodicDigits> {
    check_prime_lambda(lambda, p)?;
    let one = Rational::one();
    let pr = Rational::from_integer(BigInt::from(p));
    let c0 = ceil_rational(&(lambda - &one));
    let mut rho = lambda - Rational::from_integer(c0.clone());
    let mut seen: Vec<Rational> = Vec::new();
    let mut out = vec![c0.to_u64().expect("digit")];
    loop {
        if let Some(start) = seen.iter().position(|r| *r == rho) {
            // digits out[start+1..] repeat from state seen[start]
            let period = out[start + 1..].to_vec();
            out.truncate(start + 1);
            return Ok(PeriodicDigits { preperiod: out, period });
        }
        seen.push(rho.clone());
        let scaled = &rho * &pr;
        let c = ceil_rational(&(&scaled - &one));
        out.push(c.to_u64().expect("digit"));
        rho = scaled - Rational::from_integer(c);
    }
}
