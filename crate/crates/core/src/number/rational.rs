use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational number, always kept in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Shorthand constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Smallest integer `n` with `n >= x`.
pub fn ceil_rational(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Simplest rational within relative distance `tol` of `x`, found by walking the
/// continued fraction of the exact binary value of `x`.
pub fn snap_to_rational(x: f64, tol: f64) -> Option<Rational> {
    let exact = Rational::from_float(x)?;
    if exact.is_zero() {
        return Some(exact);
    }
    let bound = exact.abs() * Rational::from_float(tol.max(0.0))?;
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let mut rest = exact.clone();
    loop {
        let a = rest.floor().to_integer();
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);
        let approx = Rational::new(h.clone(), k.clone());
        let frac = &rest - Rational::from_integer(a);
        if (&approx - &exact).abs() <= bound || frac.is_zero() {
            return Some(approx);
        }
        rest = frac.recip();
    }
}
