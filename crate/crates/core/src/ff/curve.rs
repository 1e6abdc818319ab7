//! Plane projective curves F(x, y, z) = 0 over F_{p^k} and their point
//! counts over extensions.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::field::{first_irreducible, FiniteField};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Monomial {
    /// Coefficient in F_{p^k} as base-field digits, lowest power of the
    /// generator first.
    pub coeff: Vec<u64>,
    pub ex: u32,
    pub ey: u32,
    pub ez: u32,
}

impl Monomial {
    pub fn new(c: u64, ex: u32, ey: u32, ez: u32) -> Self {
        Monomial { coeff: vec![c], ex, ey, ez }
    }

    fn degree(&self) -> u32 {
        self.ex + self.ey + self.ez
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PlaneCurve {
    pub p: u64,
    #[serde(rename = "k")]
    pub ext_degree: usize,
    /// Monic irreducible polynomial of degree k over F_p, lowest first.
    pub modulus: Vec<u64>,
    pub monomials: Vec<Monomial>,
}

impl PlaneCurve {
    pub fn new(p: u64, modulus: Vec<u64>, monomials: Vec<Monomial>) -> Result<Self> {
        let c = PlaneCurve { p, ext_degree: modulus.len().saturating_sub(1), modulus, monomials };
        c.validate()?;
        Ok(c)
    }

    /// Curve over the prime field F_p.
    pub fn over_prime(p: u64, monomials: Vec<Monomial>) -> Result<Self> {
        PlaneCurve::new(p, vec![0, 1], monomials)
    }

    pub fn validate(&self) -> Result<FiniteField> {
        if self.modulus.len() != self.ext_degree + 1 {
            return Err(Error::InvalidField(format!(
                "modulus of degree {} does not match k = {}",
                self.modulus.len().saturating_sub(1),
                self.ext_degree
            )));
        }
        let field = FiniteField::new(self.p, &self.modulus)?;
        let d = self.monomials.first().map(Monomial::degree).unwrap_or(0);
        if self.monomials.iter().any(|m| m.degree() != d) {
            return Err(Error::InvalidArgument("curve polynomial is not homogeneous".into()));
        }
        if self.monomials.iter().any(|m| m.coeff.len() > self.ext_degree) {
            return Err(Error::InvalidArgument("coefficient has too many digits".into()));
        }
        Ok(field)
    }

    pub fn degree(&self) -> u32 {
        self.monomials.first().map(Monomial::degree).unwrap_or(0)
    }
}

/// The curve's polynomial with coefficients moved into an extension field.
struct Lifted<'a> {
    field: &'a FiniteField,
    terms: Vec<(u32, u32, u32, u32)>,
}

impl Lifted<'_> {
    fn eval(&self, x: u32, y: u32, z: u32) -> u32 {
        let f = self.field;
        self.terms.iter().fold(0, |acc, &(c, ex, ey, ez)| {
            let t = f.mul(c, f.mul(f.pow(x, ex as u64), f.mul(f.pow(y, ey as u64), f.pow(z, ez as u64))));
            f.add(acc, t)
        })
    }

    /// F(x, y, 1) as a polynomial in y.
    fn in_y(&self, x: u32) -> Vec<u32> {
        let f = self.field;
        let deg = self.terms.iter().map(|t| t.2).max().unwrap_or(0) as usize;
        let mut poly = vec![0u32; deg + 1];
        for &(c, ex, ey, _) in &self.terms {
            poly[ey as usize] = f.add(poly[ey as usize], f.mul(c, f.pow(x, ex as u64)));
        }
        poly
    }
}

fn lift<'a>(curve: &PlaneCurve, base: &FiniteField, big: &'a FiniteField) -> Result<Lifted<'a>> {
    let emb = big.embedding_of(base)?;
    let terms = curve
        .monomials
        .iter()
        .map(|m| {
            let digits: Vec<u32> = m.coeff.iter().map(|&c| (c % curve.p) as u32).collect();
            let c = base.from_digits(&digits);
            (emb[c as usize], m.ex, m.ey, m.ez)
        })
        .collect();
    Ok(Lifted { field: big, terms })
}

/// The field F_{(p^k)^n}: built from `ext_modulus` when given (degree n·k),
/// otherwise from the first irreducible polynomial of that degree.
pub fn extension_field(curve: &PlaneCurve, n: usize, ext_modulus: Option<&[u64]>) -> Result<FiniteField> {
    if n == 0 {
        return Err(Error::InvalidArgument("extension degree must be ≥ 1".into()));
    }
    let d = n * curve.ext_degree;
    if d > 16 {
        return Err(Error::InvalidField(format!("extension degree {d} too large")));
    }
    let m: Vec<u64> = match ext_modulus {
        Some(m) => m.to_vec(),
        None if n == 1 => curve.modulus.clone(),
        None => first_irreducible(curve.p as u32, d)?.iter().map(|&c| c as u64).collect(),
    };
    if m.len() != d + 1 {
        return Err(Error::InvalidField(format!("extension modulus must have degree {d}")));
    }
    FiniteField::new(curve.p, &m)
}

// polynomial helpers over a finite field, lowest degree first
fn trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_rem(f: &FiniteField, a: &[u32], b: &[u32]) -> Result<Vec<u32>> {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let li = f.inv(*b.last().expect("nonzero divisor"))?;
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = f.mul(*r.last().unwrap(), li);
        for (i, &bi) in b.iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, bi));
        }
        r = trim(r);
    }
    Ok(r)
}

fn poly_mulmod(f: &FiniteField, a: &[u32], b: &[u32], m: &[u32]) -> Result<Vec<u32>> {
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    poly_rem(f, &out, m)
}

fn poly_gcd(f: &FiniteField, a: Vec<u32>, b: Vec<u32>) -> Result<Vec<u32>> {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let r = poly_rem(f, &a, &b)?;
        a = b;
        b = r;
    }
    Ok(a)
}

/// Number of distinct roots in F_q: deg gcd(g, y^q − y), or q when g ≡ 0.
fn count_roots(f: &FiniteField, g: Vec<u32>) -> Result<u64> {
    let g = trim(g);
    if g.is_empty() {
        return Ok(f.size() as u64);
    }
    if g.len() == 1 {
        return Ok(0);
    }
    let mut result = vec![1u32];
    let mut base = poly_rem(f, &[0, 1], &g)?;
    let mut e = f.size() as u64;
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(f, &result, &base, &g)?;
        }
        base = poly_mulmod(f, &base, &base, &g)?;
        e >>= 1;
    }
    // y^q − y mod g
    let mut h = result;
    if h.len() < 2 {
        h.resize(2, 0);
    }
    h[1] = f.sub(h[1], 1);
    let d = poly_gcd(f, g, h)?;
    Ok((d.len() - 1) as u64)
}

/// Number of projective points of the curve over F_{(p^k)^n}.
pub fn count_points(curve: &PlaneCurve, n: usize, ext_modulus: Option<&[u64]>) -> Result<u64> {
    let base = curve.validate()?;
    let big = extension_field(curve, n, ext_modulus)?;
    let lifted = lift(curve, &base, &big)?;
    let q = big.size();
    let affine: Result<Vec<u64>> = (0..q).into_par_iter().map(|x| count_roots(&big, lifted.in_y(x))).collect();
    let affine: u64 = affine?.into_iter().sum();
    // z = 0: [x : 1 : 0] and [1 : 0 : 0]
    let at_infinity = (0..q).filter(|&x| lifted.eval(x, 1, 0) == 0).count() as u64 + u64::from(lifted.eval(1, 0, 0) == 0);
    Ok(affine + at_infinity)
}

/// Exhaustive count over all normalised projective coordinates.
pub fn count_points_exhaustive(curve: &PlaneCurve, n: usize, ext_modulus: Option<&[u64]>) -> Result<u64> {
    let base = curve.validate()?;
    let big = extension_field(curve, n, ext_modulus)?;
    let lifted = lift(curve, &base, &big)?;
    let q = big.size();
    let mut count = 0u64;
    for x in 0..q {
        for y in 0..q {
            count += u64::from(lifted.eval(x, y, 1) == 0);
        }
        count += u64::from(lifted.eval(x, 1, 0) == 0);
    }
    count += u64::from(lifted.eval(1, 0, 0) == 0);
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn supersingular() -> PlaneCurve {
        // y²z + yz² = x³
        PlaneCurve::over_prime(
            2,
            vec![Monomial::new(1, 0, 2, 1), Monomial::new(1, 0, 1, 2), Monomial::new(1, 3, 0, 0)],
        )
        .unwrap()
    }

    #[test]
    fn supersingular_counts() {
        let c = supersingular();
        assert_eq!(count_points(&c, 1, None).unwrap(), 3);
        assert_eq!(count_points(&c, 2, None).unwrap(), 9);
        assert_eq!(count_points(&c, 2, Some(&[1, 1, 1])).unwrap(), 9);
    }

    #[test]
    fn line_has_q_plus_one_points() {
        for p in [2u64, 3, 5] {
            let line = PlaneCurve::over_prime(p, vec![Monomial::new(1, 1, 0, 0)]).unwrap();
            for n in 1..=3 {
                let q = p.pow(n as u32);
                assert_eq!(count_points(&line, n, None).unwrap(), q + 1);
            }
        }
    }

    #[test]
    fn root_counting_matches_exhaustive_search() {
        let curves = vec![
            supersingular(),
            // y²z + xyz = x³ + z³ over F_2
            PlaneCurve::over_prime(
                2,
                vec![Monomial::new(1, 0, 2, 1), Monomial::new(1, 1, 1, 1), Monomial::new(1, 3, 0, 0), Monomial::new(1, 0, 0, 3)],
            )
            .unwrap(),
            // y²z = x³ + 2xz² + z³ over F_3
            PlaneCurve::over_prime(
                3,
                vec![Monomial::new(1, 0, 2, 1), Monomial::new(2, 3, 0, 0), Monomial::new(1, 1, 0, 2), Monomial::new(2, 0, 0, 3)],
            )
            .unwrap(),
            // x² + y² + z² over F_4 coefficients
            PlaneCurve::new(2, vec![1, 1, 1], vec![Monomial { coeff: vec![0, 1], ex: 2, ey: 0, ez: 0 }, Monomial::new(1, 0, 2, 0), Monomial::new(1, 0, 0, 2)]).unwrap(),
        ];
        for c in &curves {
            for n in 1..=3 {
                assert_eq!(count_points(c, n, None).unwrap(), count_points_exhaustive(c, n, None).unwrap());
            }
        }
    }

    #[test]
    fn bad_inputs() {
        let m = vec![Monomial::new(1, 1, 0, 0)];
        assert!(matches!(PlaneCurve::new(2, vec![1, 0, 1], m.clone()), Err(Error::InvalidField(_))));
        let c = PlaneCurve::over_prime(2, m).unwrap();
        assert!(matches!(count_points(&c, 2, Some(&[1, 0, 1])), Err(Error::InvalidField(_))));
        assert!(PlaneCurve::over_prime(2, vec![Monomial::new(1, 1, 0, 0), Monomial::new(1, 2, 0, 0)]).is_err());
    }
}
