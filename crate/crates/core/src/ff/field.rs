//! Finite fields F_{p^d} with p^d ≤ 2^16, elements stored as base-p digit
//! indices and multiplied through discrete log tables.

use crate::error::{Error, Result};
use crate::number::is_prime;

pub const MAX_FIELD_SIZE: u64 = 1 << 16;

/// Polynomial over F_p, lowest degree first, no trailing zeros.
pub type PrimePoly = Vec<u32>;

fn trim(mut a: PrimePoly) -> PrimePoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn inv_mod(a: u32, p: u32) -> u32 {
    // Fermat
    let mut r = 1u64;
    let mut b = a as u64 % p as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p as u64;
        }
        b = b * b % p as u64;
        e >>= 1;
    }
    r as u32
}

/// Remainder of a by b over F_p (b nonzero).
pub fn poly_rem(a: &[u32], b: &[u32], p: u32) -> PrimePoly {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let lead_inv = inv_mod(*b.last().expect("nonzero divisor"), p) as u64;
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = *r.last().unwrap() as u64 * lead_inv % p as u64;
        for (i, &bi) in b.iter().enumerate() {
            let t = (r[shift + i] as u64 + (p as u64 - c * bi as u64 % p as u64)) % p as u64;
            r[shift + i] = t as u32;
        }
        r = trim(r);
    }
    r
}

/// Irreducibility by trial division with every monic polynomial of degree
/// at most d/2.
pub fn is_irreducible(f: &[u32], p: u32) -> bool {
    let f = trim(f.to_vec());
    if f.len() < 2 {
        return false;
    }
    let d = f.len() - 1;
    for deg in 1..=d / 2 {
        let count = (p as u64).pow(deg as u32);
        for idx in 0..count {
            let mut g = Vec::with_capacity(deg + 1);
            let mut v = idx;
            for _ in 0..deg {
                g.push((v % p as u64) as u32);
                v /= p as u64;
            }
            g.push(1);
            if poly_rem(&f, &g, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Lexicographically first monic irreducible polynomial of degree d.
pub fn first_irreducible(p: u32, d: usize) -> Result<PrimePoly> {
    let count = (p as u64).pow(d as u32);
    for idx in 0..count {
        let mut g = Vec::with_capacity(d + 1);
        let mut v = idx;
        for _ in 0..d {
            g.push((v % p as u64) as u32);
            v /= p as u64;
        }
        g.push(1);
        if is_irreducible(&g, p) {
            return Ok(g);
        }
    }
    Err(Error::InvalidField(format!("no irreducible polynomial of degree {d} over F_{p}")))
}

#[derive(Debug, Clone)]
pub struct FiniteField {
    p: u32,
    degree: usize,
    modulus: PrimePoly,
    q: u32,
    pow_p: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl FiniteField {
    /// F_p[X]/(modulus); the modulus is made monic and must be irreducible.
    pub fn new(p: u64, modulus: &[u64]) -> Result<Self> {
        if !is_prime(p) || p >= MAX_FIELD_SIZE {
            return Err(Error::InvalidField(format!("characteristic {p} is not a small prime")));
        }
        let p32 = p as u32;
        let m = trim(modulus.iter().map(|&c| (c % p) as u32).collect());
        if m.len() < 2 {
            return Err(Error::InvalidField("modulus must have degree ≥ 1".into()));
        }
        let degree = m.len() - 1;
        let q = p.checked_pow(degree as u32).filter(|&q| q <= MAX_FIELD_SIZE).ok_or_else(|| {
            Error::InvalidField(format!("field of size {p}^{degree} exceeds {MAX_FIELD_SIZE}"))
        })?;
        let li = inv_mod(*m.last().unwrap(), p32) as u64;
        let m: PrimePoly = m.iter().map(|&c| (c as u64 * li % p) as u32).collect();
        if !is_irreducible(&m, p32) {
            return Err(Error::InvalidField(format!("modulus {m:?} is reducible over F_{p}")));
        }
        let pow_p = (0..=degree).map(|i| p32.pow(i as u32)).collect();
        let mut f = FiniteField { p: p32, degree, modulus: m, q: q as u32, pow_p, exp: Vec::new(), log: Vec::new() };
        f.build_tables()?;
        Ok(f)
    }

    pub fn prime(p: u64) -> Result<Self> {
        FiniteField::new(p, &[0, 1])
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn size(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn digits(&self, a: u32) -> Vec<u32> {
        let mut v = a;
        (0..self.degree)
            .map(|_| {
                let d = v % self.p;
                v /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, d: &[u32]) -> u32 {
        d.iter().enumerate().map(|(i, &c)| (c % self.p) * self.pow_p[i]).sum()
    }

    /// Multiplication by polynomial arithmetic, used to build the tables.
    pub fn mul_slow(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u64; 2 * self.degree];
        for (i, &x) in da.iter().enumerate() {
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x as u64 * y as u64) % self.p as u64;
            }
        }
        let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
        self.from_digits(&poly_rem(&prod, &self.modulus, self.p))
    }

    fn build_tables(&mut self) -> Result<()> {
        let n = self.q - 1;
        for g in 2..self.q.max(3) {
            let g = if self.q == 2 { 1 } else { g };
            let mut exp = Vec::with_capacity(n as usize);
            let mut x = 1u32;
            for _ in 0..n {
                exp.push(x);
                x = self.mul_slow(x, g);
            }
            // primitive iff the powers exhaust the multiplicative group
            let mut log = vec![u32::MAX; self.q as usize];
            let mut ok = x == 1;
            for (i, &e) in exp.iter().enumerate() {
                if log[e as usize] != u32::MAX {
                    ok = false;
                    break;
                }
                log[e as usize] = i as u32;
            }
            if ok {
                self.exp = exp;
                self.log = log;
                return Ok(());
            }
        }
        Err(Error::InvalidField("no primitive element found".into()))
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.degree == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut out, mut place) = (a, b, 0, 1);
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    pub fn neg(&self, a: u32) -> u32 {
        let d: Vec<u32> = self.digits(a).iter().map(|&c| (self.p - c) % self.p).collect();
        self.from_digits(&d)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.q - 1;
        let s = (self.log[a as usize] + self.log[b as usize]) % n;
        self.exp[s as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            return Err(Error::InvalidArgument("zero has no inverse".into()));
        }
        let n = self.q - 1;
        Ok(self.exp[((n - self.log[a as usize]) % n) as usize])
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.q - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// Embedding of F_p[X]/(small) into this field, given by a root of `small`.
    pub fn embedding_of(&self, small: &FiniteField) -> Result<Vec<u32>> {
        if small.p != self.p || self.degree % small.degree != 0 {
            return Err(Error::InvalidField(format!(
                "F_{}^{} does not embed in F_{}^{}",
                small.p, small.degree, self.p, self.degree
            )));
        }
        let root = (0..self.q)
            .find(|&x| {
                let mut acc = 0;
                for &c in small.modulus.iter().rev() {
                    acc = self.add(self.mul(acc, x), c);
                }
                acc == 0
            })
            .ok_or_else(|| Error::InvalidField("modulus has no root in the extension".into()))?;
        let powers: Vec<u32> = (0..small.degree).map(|i| self.pow(root, i as u64)).collect();
        Ok((0..small.q)
            .map(|a| {
                small
                    .digits(a)
                    .iter()
                    .zip(&powers)
                    .fold(0, |acc, (&c, &r)| self.add(acc, self.mul(c, r)))
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn irreducibility() {
        assert!(is_irreducible(&[1, 1, 1], 2));
        assert!(!is_irreducible(&[1, 0, 1], 2));
        assert!(is_irreducible(&[1, 1, 0, 1], 2));
        assert!(!is_irreducible(&[2, 0, 1], 3));
        assert!(is_irreducible(&[1, 0, 1], 3));
        assert!(matches!(FiniteField::new(2, &[1, 0, 1]), Err(Error::InvalidField(_))));
        assert!(matches!(FiniteField::new(2, &[1; 20]), Err(Error::InvalidField(_))));
    }

    #[test]
    fn tables_agree_with_polynomial_product() {
        for (p, m) in [(2u64, vec![1u64, 1, 1]), (2, vec![1, 1, 0, 1]), (3, vec![1, 0, 1]), (5, vec![2, 0, 1]), (7, vec![0, 1])] {
            let f = FiniteField::new(p, &m).unwrap();
            for a in 0..f.size() {
                for b in 0..f.size() {
                    assert_eq!(f.mul(a, b), f.mul_slow(a, b));
                }
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
                }
                assert_eq!(f.add(a, f.neg(a)), 0);
                assert_eq!(f.pow(a, f.size() as u64), a);
            }
        }
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let small = FiniteField::new(2, &[1, 1, 1]).unwrap();
        let big = FiniteField::new(2, &first_irreducible(2, 4).unwrap().iter().map(|&c| c as u64).collect::<Vec<_>>()).unwrap();
        let e = big.embedding_of(&small).unwrap();
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(e[small.mul(a, b) as usize], big.mul(e[a as usize], e[b as usize]));
                assert_eq!(e[small.add(a, b) as usize], big.add(e[a as usize], e[b as usize]));
            }
        }
        let f8 = FiniteField::new(2, &[1, 1, 0, 1]).unwrap();
        assert!(big.embedding_of(&f8).is_err());
    }
}
