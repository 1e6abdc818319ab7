//! The two semilocal quotient geometries: ℝ² modulo the unit group of
//! ℚ(√2), and ℚ_p × ℝ modulo ±p^ℤ.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::number::{is_prime, Rational, Valuation};

const SQRT2: f64 = std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadPoint {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Plus,
    #[serde(rename = "-")]
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant")]
pub enum FiberLabel {
    Generic { value: f64 },
    StratumA,
    StratumB,
    Origin,
}

/// a + b√2 with integer a, b.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadInteger {
    pub a: BigInt,
    pub b: BigInt,
}

impl QuadInteger {
    fn mul(&self, other: &QuadInteger) -> QuadInteger {
        QuadInteger {
            a: &self.a * &other.a + BigInt::from(2) * &self.b * &other.b,
            b: &self.a * &other.b + &self.b * &other.a,
        }
    }

    /// u^n for the unit u = 3 − 2√2.
    pub fn unit_power(n: i64) -> QuadInteger {
        let base = if n >= 0 {
            QuadInteger { a: 3.into(), b: (-2).into() }
        } else {
            QuadInteger { a: 3.into(), b: 2.into() }
        };
        let mut acc = QuadInteger { a: BigInt::one(), b: BigInt::zero() };
        let mut sq = base;
        let mut e = n.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&sq);
            }
            sq = sq.mul(&sq);
            e >>= 1;
        }
        acc
    }

    /// Double-precision value. When a and b have opposite signs the direct
    /// sum cancels, so it is evaluated as (a² − 2b²)/(a − b√2).
    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        if self.a.is_negative() == self.b.is_negative() || self.b.is_zero() || self.a.is_zero() {
            return a + b * SQRT2;
        }
        let norm = (&self.a * &self.a - BigInt::from(2) * &self.b * &self.b).to_f64().unwrap_or(f64::NAN);
        norm / (a - b * SQRT2)
    }
}

/// (x, y) ↦ (s·u^n x, s·u^{−n} y).
pub fn quad_act(n: i64, s: Sign, p: QuadPoint) -> QuadPoint {
    let un = QuadInteger::unit_power(n).to_f64();
    let uinv = QuadInteger::unit_power(-n).to_f64();
    QuadPoint { x: s.value() * un * p.x, y: s.value() * uinv * p.y }
}

/// Representative with x ∈ [1, 3+2√2) together with (n, s) such that
/// quad_act(n, s, P) is that representative.
pub fn quad_reduce(p: QuadPoint) -> Result<(QuadPoint, i64, Sign)> {
    if p.x == 0.0 || !p.x.is_finite() {
        return Err(Error::UndefinedOnStratum(format!("x = {} has no reduced representative", p.x)));
    }
    let s = Sign::of(p.x);
    let log_inv_u = (3.0 + 2.0 * SQRT2).ln();
    let mut n = (p.x.abs().ln() / log_inv_u).floor() as i64;
    let mut r = quad_act(n, s, p);
    while r.x < 1.0 {
        n -= 1;
        r = quad_act(n, s, p);
    }
    while r.x >= 3.0 + 2.0 * SQRT2 {
        n += 1;
        r = quad_act(n, s, p);
    }
    Ok((r, n, s))
}

pub fn quad_fiber(p: QuadPoint) -> FiberLabel {
    match (p.x == 0.0, p.y == 0.0) {
        (false, false) => FiberLabel::Generic { value: p.x * p.y },
        (true, false) => FiberLabel::StratumA,
        (false, true) => FiberLabel::StratumB,
        (true, true) => FiberLabel::Origin,
    }
}

/// Point of ℚ_p × ℝ; x = p^{xval}·xunit with xunit a p-adic unit.
#[derive(Debug, Clone, PartialEq)]
pub struct PadicRealPoint {
    pub xval: Valuation,
    pub xunit: Option<Rational>,
    pub y: f64,
}

impl PadicRealPoint {
    pub fn new(xval: Valuation, xunit: Option<Rational>, y: f64, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidArgument(format!("{p} is not prime")));
        }
        match (&xval, &xunit) {
            (Valuation::Infinity, None) => {}
            (Valuation::Finite(_), Some(u)) => {
                if u.is_zero() || crate::number::vp(u, p)? != Valuation::Finite(0) {
                    return Err(Error::InvalidArgument(format!("{u} is not a {p}-adic unit")));
                }
            }
            _ => return Err(Error::InvalidArgument("xunit must be present exactly when xval is finite".into())),
        }
        Ok(PadicRealPoint { xval, xunit, y })
    }

    /// f(x, y) = |x|_p·|y|.
    pub fn invariant(&self, p: u64) -> f64 {
        match self.xval {
            Valuation::Infinity => 0.0,
            Valuation::Finite(v) => (p as f64).powi(-(v as i32)) * self.y.abs(),
        }
    }
}

/// (x, y) ↦ (s·p^n x, s·p^n y).
pub fn padic_real_act(n: i64, s: Sign, pt: &PadicRealPoint, p: u64) -> PadicRealPoint {
    let xval = match pt.xval {
        Valuation::Finite(v) => Valuation::Finite(v + n),
        Valuation::Infinity => Valuation::Infinity,
    };
    let sign = if s == Sign::Minus { -Rational::one() } else { Rational::one() };
    let xunit = pt.xunit.as_ref().map(|u| u * sign);
    PadicRealPoint { xval, xunit, y: s.value() * pow_f64(p, n) * pt.y }
}

fn pow_f64(p: u64, n: i64) -> f64 {
    (p as f64).powi(n as i32)
}

/// Representative in ℤ_p* × ℝ_{>0}: xval = 0, y > 0.
pub fn padic_real_reduce(pt: &PadicRealPoint, p: u64) -> Result<PadicRealPoint> {
    let Valuation::Finite(v) = pt.xval else {
        return Err(Error::UndefinedOnStratum("x = 0 is a stratum point".into()));
    };
    if pt.y == 0.0 {
        return Err(Error::UndefinedOnStratum("y = 0 is a stratum point".into()));
    }
    Ok(padic_real_act(-v, Sign::of(pt.y), pt, p))
}

pub fn padic_real_fiber(pt: &PadicRealPoint, p: u64) -> FiberLabel {
    let x_zero = pt.xval == Valuation::Infinity;
    match (x_zero, pt.y == 0.0) {
        (false, false) => FiberLabel::Generic { value: pt.invariant(p) },
        (true, false) => FiberLabel::StratumA,
        (false, true) => FiberLabel::StratumB,
        (true, true) => FiberLabel::Origin,
    }
}

/// r ∈ [1, p) and e with v = r·p^e.
fn split_mod_p(v: f64, p: u64) -> (f64, i64) {
    let pf = p as f64;
    let mut e = (v.ln() / pf.ln()).floor() as i64;
    let mut r = v / pow_f64(p, e);
    while r < 1.0 {
        e -= 1;
        r = v / pow_f64(p, e);
    }
    while r >= pf {
        e += 1;
        r = v / pow_f64(p, e);
    }
    (r, e)
}

/// Class of |y| in ℝ*₊/p^ℤ, represented in [1, p).
pub fn holonomy_class(pt: &PadicRealPoint, p: u64) -> Result<f64> {
    if pt.y == 0.0 {
        return Err(Error::UndefinedOnStratum("holonomy is undefined at y = 0".into()));
    }
    Ok(split_mod_p(pt.y.abs(), p).0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HolonomyCheck {
    pub g_rep: f64,
    pub f_rep: f64,
    pub holds: bool,
}

/// Compares the class of |y| with the class of f(x, y) = |x|_p|y|. The two
/// differ by the exact power p^{−xval}, so the mantissas must coincide.
pub fn holonomy_identity(pt: &PadicRealPoint, p: u64) -> Result<HolonomyCheck> {
    let g_rep = holonomy_class(pt, p)?;
    let Valuation::Finite(_) = pt.xval else {
        return Err(Error::UndefinedOnStratum("holonomy identity needs x ≠ 0".into()));
    };
    let f_rep = split_mod_p(pt.invariant(p), p).0;
    let rel = (g_rep - f_rep).abs() / g_rep;
    // classes near 1 and p are the same point of the circle
    let wrap = ((g_rep - f_rep).abs() - (p as f64 - 1.0)).abs() / g_rep;
    Ok(HolonomyCheck { g_rep, f_rep, holds: rel < 1e-12 || wrap < 1e-12 * p as f64 })
}

// JSON: xval is an integer or the string "+inf"; xunit is "n/d" or null.
impl Serialize for PadicRealPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("PadicRealPoint", 3)?;
        match self.xval {
            Valuation::Finite(v) => st.serialize_field("xval", &v)?,
            Valuation::Infinity => st.serialize_field("xval", "+inf")?,
        }
        st.serialize_field("xunit", &self.xunit.as_ref().map(|u| u.to_string()))?;
        st.serialize_field("y", &self.y)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for PadicRealPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Val {
            Int(i64),
            Text(String),
        }
        #[derive(Deserialize)]
        struct Raw {
            xval: Val,
            xunit: Option<String>,
            y: f64,
        }
        let raw = Raw::deserialize(deserializer)?;
        let xval = match raw.xval {
            Val::Int(v) => Valuation::Finite(v),
            Val::Text(t) if t == "+inf" || t == "inf" => Valuation::Infinity,
            Val::Text(t) => return Err(D::Error::custom(format!("bad xval {t:?}"))),
        };
        let xunit = match raw.xunit {
            Some(s) => Some(s.parse::<Rational>().map_err(|_| D::Error::custom(format!("bad rational {s:?}")))?),
            None => None,
        };
        Ok(PadicRealPoint { xval, xunit, y: raw.y })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rat;
    use proptest::prelude::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn unit_powers_are_exact() {
        let u1 = QuadInteger::unit_power(1);
        assert_eq!((u1.a.clone(), u1.b.clone()), (BigInt::from(3), BigInt::from(-2)));
        let u = QuadInteger::unit_power(5).mul(&QuadInteger::unit_power(-5));
        assert_eq!(u, QuadInteger { a: BigInt::one(), b: BigInt::zero() });
        // u^40 is about 1e-30.6; the cancellation-free rendering keeps full precision
        let v = QuadInteger::unit_power(40).to_f64();
        let expected = (3.0 - 2.0 * SQRT2_LONG).powi(40);
        assert!(((v - expected) / expected).abs() < 1e-10, "{v} vs {expected}");
    }

    // 3 − 2√2 from a high-precision literal, independent of the rendering
    const SQRT2_LONG: f64 = 1.414_213_562_373_095_1;

    #[test]
    fn quad_act_examples() {
        let p = quad_act(1, Sign::Plus, QuadPoint { x: 1.0, y: 1.0 });
        assert!(close(p.x, 3.0 - 2.0 * SQRT2) && close(p.y, 3.0 + 2.0 * SQRT2));
        let q = QuadPoint { x: 2.5, y: -0.7 };
        let back = quad_act(-1, Sign::Plus, quad_act(1, Sign::Plus, q));
        assert!(close(back.x, q.x) && close(back.y, q.y));
    }

    #[test]
    fn quad_reduce_examples() {
        let u3 = QuadInteger::unit_power(3).to_f64();
        let (r, n, s) = quad_reduce(QuadPoint { x: u3 * 1.2, y: 5.0 }).unwrap();
        assert!(close(r.x, 1.2));
        assert_eq!((n, s), (-3, Sign::Plus));
        let (r, n, s) = quad_reduce(QuadPoint { x: 1.0, y: 1.0 }).unwrap();
        assert_eq!((r, n, s), (QuadPoint { x: 1.0, y: 1.0 }, 0, Sign::Plus));
        assert!(matches!(quad_reduce(QuadPoint { x: 0.0, y: 1.0 }), Err(Error::UndefinedOnStratum(_))));
    }

    #[test]
    fn fiber_labels() {
        assert_eq!(quad_fiber(QuadPoint { x: 0.0, y: 2.0 }), FiberLabel::StratumA);
        assert_eq!(quad_fiber(QuadPoint { x: 2.0, y: 0.0 }), FiberLabel::StratumB);
        assert_eq!(quad_fiber(QuadPoint { x: 3.0, y: 4.0 }), FiberLabel::Generic { value: 12.0 });
        assert_eq!(quad_fiber(QuadPoint { x: 0.0, y: 0.0 }), FiberLabel::Origin);
        let json = serde_json::to_string(&FiberLabel::Generic { value: 1.5 }).unwrap();
        assert_eq!(json, r#"{"variant":"Generic","value":1.5}"#);
    }

    #[test]
    fn padic_reduce_example() {
        let pt = PadicRealPoint::new(Valuation::Finite(2), Some(rat(1, 1)), -9.0, 3).unwrap();
        let r = padic_real_reduce(&pt, 3).unwrap();
        assert_eq!(r.xval, Valuation::Finite(0));
        // the sign flip acts on both coordinates, so the unit becomes −1
        assert_eq!(r.xunit, Some(rat(-1, 1)));
        assert!(close(r.y, 1.0));
        assert!(close(r.invariant(3), pt.invariant(3)));
        assert_eq!(padic_real_reduce(&r, 3).unwrap(), r);
    }

    #[test]
    fn padic_point_validation_and_strata() {
        assert!(PadicRealPoint::new(Valuation::Finite(0), Some(rat(3, 1)), 1.0, 3).is_err());
        assert!(PadicRealPoint::new(Valuation::Infinity, Some(rat(1, 1)), 1.0, 3).is_err());
        let z = PadicRealPoint::new(Valuation::Infinity, None, 2.0, 3).unwrap();
        assert!(matches!(padic_real_reduce(&z, 3), Err(Error::UndefinedOnStratum(_))));
        assert_eq!(padic_real_fiber(&z, 3), FiberLabel::StratumA);
    }

    #[test]
    fn holonomy_examples() {
        let pt = PadicRealPoint::new(Valuation::Finite(1), Some(rat(1, 1)), 2.0, 3).unwrap();
        assert!(close(holonomy_class(&pt, 3).unwrap(), 2.0));
        let chk = holonomy_identity(&pt, 3).unwrap();
        assert!(chk.holds && close(chk.f_rep, 2.0));
        let pw = PadicRealPoint::new(Valuation::Finite(0), Some(rat(1, 1)), 27.0, 3).unwrap();
        assert!(close(holonomy_class(&pw, 3).unwrap(), 1.0));
        let y0 = PadicRealPoint::new(Valuation::Finite(0), Some(rat(1, 1)), 0.0, 3).unwrap();
        assert!(matches!(holonomy_class(&y0, 3), Err(Error::UndefinedOnStratum(_))));
    }

    #[test]
    fn padic_point_json_round_trip() {
        let pt = PadicRealPoint::new(Valuation::Finite(-2), Some(rat(2, 5)), 1.25, 3).unwrap();
        let s = serde_json::to_string(&pt).unwrap();
        assert_eq!(s, r#"{"xval":-2,"xunit":"2/5","y":1.25}"#);
        assert_eq!(serde_json::from_str::<PadicRealPoint>(&s).unwrap(), pt);
        let z = PadicRealPoint::new(Valuation::Infinity, None, 1.0, 3).unwrap();
        assert_eq!(serde_json::from_str::<PadicRealPoint>(&serde_json::to_string(&z).unwrap()).unwrap(), z);
    }

    fn sign(b: bool) -> Sign {
        if b {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    proptest! {
        #[test]
        fn reduction_is_orbit_invariant(n in -30i64..30, s in any::<bool>(), x in 1e-3f64..1e3, neg in any::<bool>(), y in -50.0f64..50.0) {
            let p = QuadPoint { x: if neg { -x } else { x }, y };
            let (r1, _, _) = quad_reduce(p).unwrap();
            let (r2, _, _) = quad_reduce(quad_act(n, sign(s), p)).unwrap();
            prop_assert!((r1.x - r2.x).abs() < 1e-9 * r1.x.abs(), "{:?} {:?}", r1, r2);
            prop_assert!((r1.y - r2.y).abs() < 1e-9 * r1.y.abs().max(1e-300));
            let (r3, n3, s3) = quad_reduce(r1).unwrap();
            prop_assert_eq!((r3, n3, s3), (r1, 0, Sign::Plus));
            prop_assert!(r1.x >= 1.0 && r1.x < 3.0 + 2.0 * SQRT2);
        }

        #[test]
        fn fiber_is_orbit_invariant(n in -20i64..20, s in any::<bool>(), x in -10.0f64..10.0, y in -10.0f64..10.0, zx in any::<bool>(), zy in any::<bool>()) {
            let p = QuadPoint { x: if zx { 0.0 } else { x }, y: if zy { 0.0 } else { y } };
            let a = quad_fiber(p);
            let b = quad_fiber(quad_act(n, sign(s), p));
            match (a, b) {
                (FiberLabel::Generic { value: va }, FiberLabel::Generic { value: vb }) => prop_assert!(close(va, vb)),
                _ => prop_assert_eq!(a, b),
            }
        }

        #[test]
        fn padic_reduction_preserves_invariant(v in -8i64..8, num in 1i64..50, s in any::<bool>(), y in -100.0f64..100.0, n in -6i64..6) {
            prop_assume!(num % 3 != 0 && y != 0.0);
            let pt = PadicRealPoint::new(Valuation::Finite(v), Some(rat(num, 1)), y, 3).unwrap();
            let r = padic_real_reduce(&pt, 3).unwrap();
            prop_assert_eq!(r.xval.clone(), Valuation::Finite(0));
            prop_assert!(r.y > 0.0);
            prop_assert!(close(r.invariant(3), pt.invariant(3)));
            let moved = padic_real_act(n, sign(s), &pt, 3);
            let (a, b) = (holonomy_class(&moved, 3).unwrap(), holonomy_class(&pt, 3).unwrap());
            // representatives straddling 1 ~ 3 name the same class
            prop_assert!(close(a, b) || ((a - b).abs() - 2.0).abs() < 1e-11, "{} vs {}", a, b);
            prop_assert!(holonomy_identity(&pt, 3).unwrap().holds);
        }
    }
}
