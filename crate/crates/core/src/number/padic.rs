use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::primes::is_prime;
use super::rational::Rational;
use crate::error::{Error, Result};

/// A p-adic valuation: an integer, or `+inf` for zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl std::ops::Add for Valuation {
    type Output = Valuation;
    fn add(self, rhs: Valuation) -> Valuation {
        match (self, rhs) {
            (Valuation::Finite(a), Valuation::Finite(b)) => Valuation::Finite(a + b),
            _ => Valuation::Infinity,
        }
    }
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{p} is not prime")))
    }
}

fn int_valuation(n: &BigInt, p: &BigInt) -> i64 {
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        n = q;
        v += 1;
    }
}

/// Exponent of `p` in `x`.
pub fn vp(x: &Rational, p: u64) -> Result<Valuation> {
    check_prime(p)?;
    if x.is_zero() {
        return Ok(Valuation::Infinity);
    }
    let pb = BigInt::from(p);
    Ok(Valuation::Finite(int_valuation(x.numer(), &pb) - int_valuation(x.denom(), &pb)))
}

/// `|x|_p = p^{-vp(x)}`, exact.
pub fn padic_norm(x: &Rational, p: u64) -> Result<Rational> {
    match vp(x, p)? {
        Valuation::Infinity => Ok(Rational::zero()),
        Valuation::Finite(v) => {
            let pk = Rational::from_integer(num_traits::pow(BigInt::from(p), v.unsigned_abs() as usize));
            Ok(if v >= 0 { Rational::one() / pk } else { pk })
        }
    }
}
