//! Z_C(T) = exp(Σ N_n T^n / n) = P(T)/((1−T)(1−qT)) from point counts, the
//! Frobenius eigenvalues and the Weil bound.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::number::Rational;

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct CurveCountData {
    pub q: u64,
    pub g: usize,
    pub counts: Vec<i64>,
}

fn is_prime_power(q: u64) -> bool {
    if q < 2 {
        return false;
    }
    let p = (2..=q).find(|d| q % d == 0).unwrap_or(q);
    let mut r = q;
    while r % p == 0 {
        r /= p;
    }
    r == 1
}

impl CurveCountData {
    pub fn new(q: u64, g: usize, counts: Vec<i64>) -> Result<Self> {
        if !is_prime_power(q) {
            return Err(Error::InvalidArgument(format!("q = {q} is not a prime power")));
        }
        if counts.iter().any(|&n| n < 0) {
            return Err(Error::InvalidArgument("point counts must be nonnegative".into()));
        }
        Ok(CurveCountData { q, g, counts })
    }
}

/// Coefficients z_0..z_order of exp(Σ N_n T^n / n), from n z_n = Σ_k N_k z_{n−k}.
pub fn zeta_series(data: &CurveCountData, order: usize) -> Result<Vec<Rational>> {
    if order > data.counts.len() {
        return Err(Error::InsufficientCounts { needed: order, available: data.counts.len() });
    }
    let mut z = vec![Rational::one()];
    for n in 1..=order {
        let mut acc = Rational::zero();
        for k in 1..=n {
            acc += Rational::from_integer(BigInt::from(data.counts[k - 1])) * &z[n - k];
        }
        z.push(acc / Rational::from_integer(BigInt::from(n)));
    }
    Ok(z)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZetaPolynomial {
    pub q: u64,
    pub g: usize,
    /// a_0..a_{2g}
    pub coeffs: Vec<i64>,
}

impl ZetaPolynomial {
    /// Checks a_0 = 1 and a_{2g−j} = q^{g−j} a_j.
    pub fn new(q: u64, g: usize, coeffs: Vec<i64>) -> Result<Self> {
        if coeffs.len() != 2 * g + 1 || coeffs[0] != 1 {
            return Err(Error::InvalidArgument("need 2g + 1 coefficients with a_0 = 1".into()));
        }
        let p = ZetaPolynomial { q, g, coeffs };
        if !p.functional_equation_holds() {
            return Err(Error::InvalidArgument("coefficients violate a_{2g−j} = q^{g−j} a_j".into()));
        }
        Ok(p)
    }

    pub fn functional_equation_holds(&self) -> bool {
        let g = self.g;
        (0..=g).all(|j| {
            let scale = BigInt::from(self.q).pow((g - j) as u32);
            BigInt::from(self.coeffs[2 * g - j]) == scale * BigInt::from(self.coeffs[j])
        })
    }
}

/// Reads a_0..a_g from (1−T)(1−qT)Z_C(T), completes by the functional
/// equation, checks the remaining coefficients through order m and the
/// Weil bound |λ_j| = √q.
pub fn numerator_polynomial(data: &CurveCountData) -> Result<ZetaPolynomial> {
    let (g, q) = (data.g, data.q);
    let m = data.counts.len();
    if m < g {
        return Err(Error::InsufficientCounts { needed: g, available: m });
    }
    let z = zeta_series(data, m)?;
    let qr = Rational::from_integer(BigInt::from(q));
    // (1 − (1+q)T + qT²) Z(T)
    let b: Vec<Rational> = (0..=m)
        .map(|n| {
            let mut v = z[n].clone();
            if n >= 1 {
                v -= (Rational::one() + &qr) * &z[n - 1];
            }
            if n >= 2 {
                v += &qr * &z[n - 2];
            }
            v
        })
        .collect();
    let mut coeffs = vec![0i64; 2 * g + 1];
    for j in 0..=g {
        if !b[j].is_integer() {
            return Err(Error::InconsistentCounts(format!("coefficient a_{j} = {} is not an integer", b[j])));
        }
        coeffs[j] = b[j]
            .to_integer()
            .to_i64()
            .ok_or_else(|| Error::InconsistentCounts(format!("coefficient a_{j} overflows")))?;
    }
    for j in 0..g {
        let v = BigInt::from(q).pow((g - j) as u32) * BigInt::from(coeffs[j]);
        coeffs[2 * g - j] = v.to_i64().ok_or_else(|| Error::InconsistentCounts("coefficient overflows".into()))?;
    }
    for (n, bn) in b.iter().enumerate() {
        let expect = coeffs.get(n).copied().unwrap_or(0);
        if *bn != Rational::from_integer(BigInt::from(expect)) {
            return Err(Error::InconsistentCounts(format!(
                "count N_{n} disagrees with the numerator from N_1..N_{g}"
            )));
        }
    }
    let poly = ZetaPolynomial { q, g, coeffs };
    if g == 1 {
        // |N_1 − q − 1| ≤ 2√q, exactly
        let a1 = BigInt::from(poly.coeffs[1]);
        if &a1 * &a1 > BigInt::from(4 * q) {
            return Err(Error::InconsistentCounts(format!("a_1 = {a1} breaks the Weil bound")));
        }
    } else if g > 1 {
        let (ok, dev) = rh_check(&poly, 1e-6)?;
        if !ok {
            return Err(Error::InconsistentCounts(format!("eigenvalues miss |λ| = √q by {dev:e}")));
        }
    }
    Ok(poly)
}

fn horner(c: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    // value and derivative, c highest degree first
    let mut v = Complex64::zero();
    let mut d = Complex64::zero();
    for &a in c {
        d = d * z + v;
        v = v * z + a;
    }
    (v, d)
}

/// Roots of the monic polynomial with coefficients c (highest first) by
/// simultaneous Aberth iteration.
fn aberth(c: &[Complex64], radius: f64) -> Result<Vec<Complex64>> {
    let n = c.len() - 1;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (v, d) = horner(c, z[i]);
            if v == Complex64::zero() {
                continue;
            }
            let ratio = v / d;
            let s: Complex64 = (0..n).filter(|&j| j != i).map(|j| (z[i] - z[j]).inv()).sum();
            let step = ratio / (Complex64::one() - ratio * s);
            z[i] -= step;
            moved = moved.max(step.norm() / radius.max(1.0));
        }
        if moved < 1e-15 {
            return Ok(z);
        }
    }
    // accept if every residual is at rounding level
    let scale: f64 = c.iter().map(|a| a.norm()).sum::<f64>() * radius.max(1.0).powi(n as i32);
    if z.iter().all(|&r| horner(c, r).0.norm() <= 1e-10 * scale) {
        return Ok(z);
    }
    Err(Error::NumericalFailure("root finding did not converge".into()))
}

/// Inverse roots λ_j of P(T) = Π(1 − λ_j T), i.e. the roots of Σ a_j x^{2g−j}.
pub fn frobenius_eigenvalues(p: &ZetaPolynomial) -> Result<Vec<Complex64>> {
    let c: Vec<Complex64> = p.coeffs.iter().map(|&a| Complex64::new(a as f64, 0.0)).collect();
    match p.g {
        0 => Ok(Vec::new()),
        1 => {
            let (b, cc) = (c[1], c[2]);
            let disc = (b * b - 4.0 * cc).sqrt();
            // the larger root first, the other from the product, for accuracy
            let r1 = if b.re >= 0.0 { (-b - disc) / 2.0 } else { (-b + disc) / 2.0 };
            let r2 = if r1.norm() == 0.0 { (-b + disc) / 2.0 } else { cc / r1 };
            Ok(vec![r1, r2])
        }
        _ => {
            let mut roots = aberth(&c, (p.q as f64).sqrt())?;
            // one Newton polish step each
            for r in roots.iter_mut() {
                let (v, d) = horner(&c, *r);
                if d.norm() > 0.0 {
                    *r -= v / d;
                }
            }
            Ok(roots)
        }
    }
}

/// max_j | |λ_j| − √q |, and whether it is within tol.
pub fn rh_check(p: &ZetaPolynomial, tol: f64) -> Result<(bool, f64)> {
    let s = (p.q as f64).sqrt();
    let dev = frobenius_eigenvalues(p)?.iter().map(|l| (l.norm() - s).abs()).fold(0.0, f64::max);
    Ok((dev <= tol, dev))
}

/// #C(F_{q^n}) = q^n + 1 − Σ λ_j^n.
pub fn recover_counts(p: &ZetaPolynomial, n: u32) -> Result<i64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n ≥ 1 required".into()));
    }
    let s: Complex64 = frobenius_eigenvalues(p)?.iter().map(|l| l.powu(n)).sum();
    let v = (p.q as f64).powi(n as i32) + 1.0 - s.re;
    let r = v.round();
    if (v - r).abs() > 1e-6 || s.im.abs() > 1e-6 {
        return Err(Error::NumericalFailure(format!("count {v} is not close to an integer")));
    }
    if r < 0.0 {
        return Err(Error::InconsistentCounts(format!("negative count {r}")));
    }
    Ok(r as i64)
}

/// Tr(Z_{n,m} ⋆ Z'_{n,m}) = 2g m² + 2(1+q−N) m n + 2g q n².
pub fn correspondence_trace(g: u64, q: u64, n_points: u64, n: i64, m: i64) -> BigInt {
    let (g, q, nn) = (BigInt::from(g), BigInt::from(q), BigInt::from(n_points));
    let (n, m) = (BigInt::from(n), BigInt::from(m));
    let two = BigInt::from(2);
    let t = BigInt::one() + &q - nn;
    &two * &g * &m * &m + &two * t * &m * &n + two * g * q * &n * &n
}

/// The trace form is positive semidefinite iff (1+q−N)² ≤ 4g²q.
pub fn psd_check(g: u64, q: u64, n_points: u64) -> bool {
    let t = BigInt::one() + BigInt::from(q) - BigInt::from(n_points);
    let g = BigInt::from(g);
    (&t * &t) <= BigInt::from(4) * &g * &g * BigInt::from(q)
}

/// Σλ_j^n exactly from the coefficients by Newton's identities.
pub fn power_sum_exact(p: &ZetaPolynomial, n: usize) -> BigInt {
    let d = 2 * p.g;
    // e_j = (−1)^j a_j
    let e: Vec<BigInt> = (0..=d).map(|j| if j % 2 == 0 { BigInt::from(p.coeffs[j]) } else { -BigInt::from(p.coeffs[j]) }).collect();
    let mut s: Vec<BigInt> = vec![BigInt::from(d)];
    for k in 1..=n {
        let mut acc = BigInt::zero();
        for j in 1..k.min(d + 1) {
            let term = &e[j] * &s[k - j];
            if j % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        if k <= d {
            let term = BigInt::from(k) * &e[k];
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        s.push(acc);
    }
    s[n].clone()
}

/// Hasse interval scan: all N_1 with |N_1 − q − 1| ≤ 2g√q.
pub fn hasse_interval(q: u64, g: u64) -> Vec<u64> {
    (0..=(q + 1 + 2 * g * (q as f64).sqrt().ceil() as u64))
        .filter(|&n| {
            let t = BigInt::from(n) - BigInt::from(q + 1);
            &t * &t <= BigInt::from(4 * g * g * q)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rat;
    use proptest::prelude::*;

    fn data(q: u64, g: usize, c: &[i64]) -> CurveCountData {
        CurveCountData::new(q, g, c.to_vec()).unwrap()
    }

    #[test]
    fn genus_zero_series_is_geometric() {
        let d = data(2, 0, &[3, 5, 9, 17, 33]);
        let z = zeta_series(&d, 5).unwrap();
        for (n, zn) in z.iter().enumerate() {
            assert_eq!(*zn, rat((1 << (n + 1)) - 1, 1));
        }
        assert_eq!(numerator_polynomial(&data(3, 0, &[4])).unwrap().coeffs, vec![1]);
    }

    #[test]
    fn elliptic_series() {
        // (1+2T²)/((1−T)(1−2T)) = 1 + 3T + 9T² + ...
        let z = zeta_series(&data(2, 1, &[3, 9]), 2).unwrap();
        assert_eq!(z, vec![rat(1, 1), rat(3, 1), rat(9, 1)]);
        assert!(matches!(zeta_series(&data(2, 1, &[3]), 2), Err(Error::InsufficientCounts { .. })));
    }

    #[test]
    fn numerator_examples() {
        assert_eq!(numerator_polynomial(&data(2, 1, &[3])).unwrap().coeffs, vec![1, 0, 2]);
        assert!(matches!(numerator_polynomial(&data(2, 1, &[6])), Err(Error::InconsistentCounts(_))));
        assert!(matches!(numerator_polynomial(&data(2, 1, &[3, 8])), Err(Error::InconsistentCounts(_))));
        assert!(matches!(numerator_polynomial(&data(2, 2, &[3])), Err(Error::InsufficientCounts { .. })));
    }

    #[test]
    fn hasse_scan_matches_numerator_acceptance() {
        for q in [2u64, 3, 4, 5, 7, 8, 9] {
            let allowed = hasse_interval(q, 1);
            for n1 in 0..=(q + 1 + 2 * q) {
                let ok = numerator_polynomial(&data(q, 1, &[n1 as i64])).is_ok();
                assert_eq!(ok, allowed.contains(&n1), "q={q} N1={n1}");
                assert_eq!(ok, psd_check(1, q, n1));
            }
        }
    }

    #[test]
    fn eigenvalue_examples() {
        let p = ZetaPolynomial::new(2, 1, vec![1, 0, 2]).unwrap();
        let mut l = frobenius_eigenvalues(&p).unwrap();
        l.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((l[0] - Complex64::new(0.0, -2f64.sqrt())).norm() < 1e-15);
        assert!((l[1] - Complex64::new(0.0, 2f64.sqrt())).norm() < 1e-15);
        assert!(rh_check(&p, 1e-12).unwrap().1 <= 1e-15);
        let p = ZetaPolynomial::new(2, 1, vec![1, -2, 2]).unwrap();
        let mut l = frobenius_eigenvalues(&p).unwrap();
        l.sort_by(|a, b| a.im.partial_cmp(&b.im).unwrap());
        assert!((l[0] - Complex64::new(1.0, -1.0)).norm() < 1e-15);
        assert!((l[1] - Complex64::new(1.0, 1.0)).norm() < 1e-15);
        let p0 = ZetaPolynomial::new(5, 0, vec![1]).unwrap();
        assert!(frobenius_eigenvalues(&p0).unwrap().is_empty());
        assert!(rh_check(&p0, 0.0).unwrap().0);
    }

    #[test]
    fn higher_genus_roots() {
        // product of two elliptic factors over F_3: (1+3T²)(1−2T+3T²)
        let p = ZetaPolynomial::new(3, 2, vec![1, -2, 6, -6, 9]).unwrap();
        let (ok, dev) = rh_check(&p, 1e-12).unwrap();
        assert!(ok, "{dev}");
        for n in 1..=6 {
            let exact = BigInt::from(3u64.pow(n as u32) + 1) - power_sum_exact(&p, n);
            assert_eq!(BigInt::from(recover_counts(&p, n as u32).unwrap()), exact);
        }
    }

    #[test]
    fn recovered_counts() {
        let p = ZetaPolynomial::new(2, 1, vec![1, 0, 2]).unwrap();
        assert_eq!(recover_counts(&p, 1).unwrap(), 3);
        assert_eq!(recover_counts(&p, 2).unwrap(), 9);
        let p0 = ZetaPolynomial::new(7, 0, vec![1]).unwrap();
        assert_eq!(recover_counts(&p0, 3).unwrap(), 344);
    }

    #[test]
    fn trace_form() {
        assert_eq!(correspondence_trace(1, 2, 3, 1, 1), BigInt::from(6));
        assert_eq!(correspondence_trace(1, 2, 3, 0, 1), BigInt::from(2));
        assert!(!psd_check(1, 2, 6));
        assert!(psd_check(1, 2, 3));
    }

    proptest! {
        #[test]
        fn counts_from_valid_numerators_round_trip(q in prop::sample::select(vec![2u64, 3, 4, 5, 7, 9]), pick in 0usize..100) {
            let allowed = hasse_interval(q, 1);
            let n1 = allowed[pick % allowed.len()];
            let a1 = n1 as i64 - q as i64 - 1;
            let p = ZetaPolynomial::new(q, 1, vec![1, a1, q as i64]).unwrap();
            let counts: Vec<i64> = (1..=4)
                .map(|n| (BigInt::from(q.pow(n as u32) + 1) - power_sum_exact(&p, n)).to_i64().unwrap())
                .collect();
            let d = data(q, 1, &counts);
            let back = numerator_polynomial(&d).unwrap();
            prop_assert_eq!(&back, &p);
            prop_assert!(back.functional_equation_holds());
            for z in zeta_series(&d, 4).unwrap() {
                prop_assert!(z.is_integer() && z >= Rational::zero());
            }
            for n in 1..=4u32 {
                prop_assert_eq!(recover_counts(&p, n).unwrap(), counts[n as usize - 1]);
            }
        }
    }
}
