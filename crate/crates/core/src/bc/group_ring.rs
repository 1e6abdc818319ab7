//! Finite-level pieces of ℚ[ℚ/ℤ] with the endomorphisms ρ_n and the
//! cyclotomic Galois action e_r ↦ e_{ur}.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::number::Rational;

/// Reduction of a rational into [0, 1).
pub fn residue(r: &Rational) -> Rational {
    r - r.floor()
}

/// Σ c_r e_r with r ∈ (1/M)ℤ/ℤ, stored by the numerators j of r = j/M.
#[derive(Debug, Clone)]
pub struct GroupRingElement {
    level: u64,
    coeffs: BTreeMap<u64, Rational>,
}

impl PartialEq for GroupRingElement {
    fn eq(&self, other: &Self) -> bool {
        let l = self.level.lcm(&other.level);
        self.lifted(l).coeffs == other.lifted(l).coeffs
    }
}

fn level_of(r: &Rational) -> Result<u64> {
    r.denom().to_u64().ok_or_else(|| Error::InvalidArgument(format!("level of {r} is too large")))
}

impl GroupRingElement {
    pub fn zero(level: u64) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidArgument("level must be positive".into()));
        }
        Ok(GroupRingElement { level, coeffs: BTreeMap::new() })
    }

    pub fn one() -> Self {
        GroupRingElement { level: 1, coeffs: BTreeMap::from([(0, Rational::one())]) }
    }

    /// e_r at the level of r's denominator.
    pub fn basis(r: &Rational) -> Self {
        let r = residue(r);
        let level = level_of(&r).expect("basis element of moderate level");
        let j = r.numer().to_u64().expect("residue numerator");
        GroupRingElement { level, coeffs: BTreeMap::from([(j, Rational::one())]) }
    }

    pub fn from_terms(level: u64, terms: impl IntoIterator<Item = (Rational, Rational)>) -> Result<Self> {
        let mut x = GroupRingElement::zero(level)?;
        for (r, c) in terms {
            let j = residue(&r) * Rational::from_integer(BigInt::from(level));
            if !j.is_integer() {
                return Err(Error::InvalidArgument(format!("{r} is not of level {level}")));
            }
            x.add_term(j.to_integer().to_u64().expect("index below level"), c);
        }
        Ok(x)
    }

    fn add_term(&mut self, j: u64, c: Rational) {
        let e = self.coeffs.entry(j).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&j);
        }
    }

    /// The same element written at a multiple of its level.
    fn lifted(&self, level: u64) -> GroupRingElement {
        let f = level / self.level;
        GroupRingElement { level, coeffs: self.coeffs.iter().map(|(j, c)| (j * f, c.clone())).collect() }
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// (r, c_r) with r ∈ [0, 1).
    pub fn coeffs(&self) -> Vec<(Rational, Rational)> {
        let m = BigInt::from(self.level);
        self.coeffs.iter().map(|(j, c)| (Rational::new(BigInt::from(*j), m.clone()), c.clone())).collect()
    }

    pub fn coeff(&self, r: &Rational) -> Rational {
        let j = residue(r) * Rational::from_integer(BigInt::from(self.level));
        if !j.is_integer() {
            return Rational::zero();
        }
        j.to_integer().to_u64().and_then(|j| self.coeffs.get(&j).cloned()).unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let l = self.level.lcm(&other.level);
        let mut out = self.lifted(l);
        for (j, c) in other.lifted(l).coeffs {
            out.add_term(j, c);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = GroupRingElement { level: self.level, coeffs: BTreeMap::new() };
        for (j, v) in &self.coeffs {
            out.add_term(*j, v * c);
        }
        out
    }

    /// Rows (residue, coefficient) as strings, for reports.
    pub fn terms(&self) -> Vec<(String, String)> {
        self.coeffs().into_iter().map(|(r, c)| (r.to_string(), c.to_string())).collect()
    }
}

impl Serialize for GroupRingElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("GroupRingElement", 2)?;
        st.serialize_field("level", &self.level)?;
        let terms: BTreeMap<String, String> = self.terms().into_iter().collect();
        st.serialize_field("coeffs", &terms)?;
        st.end()
    }
}

/// e_r e_s = e_{r+s}; levels lift to their lcm.
pub fn gr_mul(x: &GroupRingElement, y: &GroupRingElement) -> GroupRingElement {
    let l = x.level.lcm(&y.level);
    let (x, y) = (x.lifted(l), y.lifted(l));
    let mut acc: Vec<Rational> = vec![Rational::zero(); l as usize];
    for (i, a) in &x.coeffs {
        for (j, b) in &y.coeffs {
            acc[((i + j) % l) as usize] += a * b;
        }
    }
    let coeffs = acc.into_iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(j, c)| (j as u64, c)).collect();
    GroupRingElement { level: l, coeffs }
}

/// ρ_n(e_r) = (1/n) Σ_{ns = r} e_s.
pub fn rho_n(x: &GroupRingElement, n: u64) -> Result<GroupRingElement> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    let w = Rational::new(BigInt::one(), BigInt::from(n));
    let level = x.level * n;
    // r = j/M, s = (r + t)/n = (j + tM)/(Mn)
    let mut out = GroupRingElement { level, coeffs: BTreeMap::new() };
    for (j, c) in &x.coeffs {
        let cw = c * &w;
        for t in 0..n {
            out.add_term(j + t * x.level, cw.clone());
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GaloisElement {
    pub modulus: u64,
    pub u: i64,
}

impl GaloisElement {
    pub fn new(modulus: u64, u: i64) -> Result<Self> {
        if modulus == 0 || (u.rem_euclid(modulus as i64) as u64).gcd(&modulus) != 1 {
            return Err(Error::InvalidArgument(format!("{u} is not a unit mod {modulus}")));
        }
        Ok(GaloisElement { modulus, u })
    }
}

/// e_r ↦ e_{ur}; u must be a unit modulo the level of x.
pub fn galois_act(sigma: &GaloisElement, x: &GroupRingElement) -> Result<GroupRingElement> {
    let m = x.level;
    let u = sigma.u.rem_euclid(m as i64) as u64;
    if u.gcd(&m) != 1 {
        return Err(Error::InvalidArgument(format!("{} is not a unit mod {m}", sigma.u)));
    }
    let coeffs = x.coeffs.iter().map(|(j, c)| ((j * u) % m, c.clone())).collect();
    Ok(GroupRingElement { level: m, coeffs })
}
