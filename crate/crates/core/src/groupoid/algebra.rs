//! Finite models of the groupoid algebra of ℚ* ⋉ A: functions on pairs
//! (k, x) with source x and range kx, over an explicit finite base set.

use std::collections::BTreeMap;
use std::ops::{Add, Mul};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::number::{Rational, SemilocalAdele};

#[derive(Debug, Clone, PartialEq)]
pub struct GroupoidElement {
    pub k: Rational,
    pub x: SemilocalAdele,
}

impl GroupoidElement {
    pub fn new(k: Rational, x: SemilocalAdele) -> Result<Self> {
        if k.is_zero() {
            return Err(Error::InvalidArgument("groupoid element needs k ≠ 0".into()));
        }
        Ok(GroupoidElement { k, x })
    }

    pub fn source(&self) -> &SemilocalAdele {
        &self.x
    }

    pub fn range(&self) -> SemilocalAdele {
        self.x.scale(&self.k)
    }
}

/// (k, x)∘(k', y) = (kk', y), defined when x = k'y.
pub fn groupoid_compose(a: &GroupoidElement, b: &GroupoidElement) -> Result<GroupoidElement> {
    let r = b.range();
    if !a.x.approx_eq(&r) {
        return Err(Error::CompositionUndefined { source_point: a.x.to_string(), range_point: r.to_string() });
    }
    Ok(GroupoidElement { k: &a.k * &b.k, x: b.x.clone() })
}

/// Coefficient rings for finite groupoid functions (exact rationals or
/// complex doubles).
pub trait Coefficient: Clone + PartialEq + Zero + One + Add<Output = Self> + Mul<Output = Self> {}
impl<T: Clone + PartialEq + Zero + One + Add<Output = T> + Mul<Output = T>> Coefficient for T {}

/// Finitely supported function on the pairs (k, x) with x and kx in a
/// fixed finite base set.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteGroupoidFunction<T> {
    base: Vec<SemilocalAdele>,
    entries: BTreeMap<(Rational, usize), T>,
}

impl<T: Coefficient> FiniteGroupoidFunction<T> {
    pub fn new(base: Vec<SemilocalAdele>) -> Result<Self> {
        for (i, a) in base.iter().enumerate() {
            if base[..i].iter().any(|b| b.approx_eq(a)) {
                return Err(Error::InvalidArgument(format!("base point {a} listed twice")));
            }
        }
        Ok(FiniteGroupoidFunction { base, entries: BTreeMap::new() })
    }

    pub fn base(&self) -> &[SemilocalAdele] {
        &self.base
    }

    pub fn index_of(&self, x: &SemilocalAdele) -> Option<usize> {
        self.base.iter().position(|b| b.approx_eq(x))
    }

    fn require_index(&self, x: &SemilocalAdele) -> Result<usize> {
        self.index_of(x).ok_or_else(|| Error::ModelIncomplete(format!("{x} is not in the base set")))
    }

    /// Sets f(k, x) = v; both x and kx must lie in the base set.
    pub fn set(&mut self, k: &Rational, x: &SemilocalAdele, v: T) -> Result<()> {
        if k.is_zero() {
            return Err(Error::InvalidArgument("k must be nonzero".into()));
        }
        let i = self.require_index(x)?;
        self.require_index(&x.scale(k))?;
        if v.is_zero() {
            self.entries.remove(&(k.clone(), i));
        } else {
            self.entries.insert((k.clone(), i), v);
        }
        Ok(())
    }

    pub fn get(&self, k: &Rational, x: &SemilocalAdele) -> T {
        match self.index_of(x) {
            Some(i) => self.entries.get(&(k.clone(), i)).cloned().unwrap_or_else(T::zero),
            None => T::zero(),
        }
    }

    /// The point mass at (k, x).
    pub fn delta(base: Vec<SemilocalAdele>, k: &Rational, x: &SemilocalAdele) -> Result<Self> {
        let mut f = Self::new(base)?;
        f.set(k, x, T::one())?;
        Ok(f)
    }

    /// U_k: value 1 at (k, x) for every base point x with kx in the base.
    pub fn translation(base: Vec<SemilocalAdele>, k: &Rational) -> Result<Self> {
        let mut f = Self::new(base)?;
        let points = f.base.clone();
        for x in &points {
            if f.index_of(&x.scale(k)).is_some() {
                f.set(k, x, T::one())?;
            }
        }
        Ok(f)
    }

    /// Entries as ((k, x), value), ordered by (k, base index).
    pub fn entries(&self) -> impl Iterator<Item = (&Rational, &SemilocalAdele, &T)> {
        self.entries.iter().map(|((k, i), v)| (k, &self.base[*i], v))
    }

    pub fn map_entries(&self, mut f: impl FnMut(&Rational, &SemilocalAdele, &T) -> T) -> Self {
        let mut out = FiniteGroupoidFunction { base: self.base.clone(), entries: BTreeMap::new() };
        for ((k, i), v) in &self.entries {
            let w = f(k, &self.base[*i], v);
            if !w.is_zero() {
                out.entries.insert((k.clone(), *i), w);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_base(other)?;
        let mut out = self.clone();
        for (key, v) in &other.entries {
            let sum = out.entries.get(key).cloned().unwrap_or_else(T::zero) + v.clone();
            if sum.is_zero() {
                out.entries.remove(key);
            } else {
                out.entries.insert(key.clone(), sum);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map_entries(|_, _, v| c.clone() * v.clone())
    }

    fn check_same_base(&self, other: &Self) -> Result<()> {
        if self.base.len() != other.base.len() || self.base.iter().zip(&other.base).any(|(a, b)| !a.approx_eq(b)) {
            return Err(Error::ModelIncomplete("functions live on different base sets".into()));
        }
        Ok(())
    }

    /// (f * g)(k, x) = Σ_s f(k s⁻¹, s x) g(s, x).
    pub fn convolve(&self, other: &Self) -> Result<Self> {
        self.check_same_base(other)?;
        let mut by_point: BTreeMap<usize, Vec<(&Rational, &T)>> = BTreeMap::new();
        for ((k, j), v) in &self.entries {
            by_point.entry(*j).or_default().push((k, v));
        }
        let mut out: BTreeMap<(Rational, usize), T> = BTreeMap::new();
        for ((s, i), gv) in &other.entries {
            let sx = self.base[*i].scale(s);
            let j = self.index_of(&sx).ok_or_else(|| Error::ModelIncomplete(format!("{sx} missing from base")))?;
            for (kk, fv) in by_point.get(&j).map(Vec::as_slice).unwrap_or(&[]) {
                let key = (*kk * s, *i);
                let acc = out.remove(&key).unwrap_or_else(T::zero) + (*fv).clone() * gv.clone();
                if !acc.is_zero() {
                    out.insert(key, acc);
                }
            }
        }
        Ok(FiniteGroupoidFunction { base: self.base.clone(), entries: out })
    }
}

/// ε₀(f) = f(1, 0).
pub fn epsilon0<T: Coefficient>(f: &FiniteGroupoidFunction<T>) -> Result<T> {
    let zero = f
        .base()
        .iter()
        .find(|x| x.is_zero())
        .ok_or_else(|| Error::ModelIncomplete("the zero adele is not in the base set".into()))?;
    Ok(f.get(&Rational::one(), zero))
}

/// ε₁(f) = Σ_x w(x) f(1, x) for a discrete measure given on the base.
pub fn epsilon1<T: Coefficient>(f: &FiniteGroupoidFunction<T>, weights: &[(SemilocalAdele, T)]) -> Result<T> {
    let one = Rational::one();
    let mut acc = T::zero();
    for (k, x, v) in f.entries() {
        if *k != one {
            continue;
        }
        let w = weights
            .iter()
            .find(|(p, _)| p.approx_eq(x))
            .map(|(_, w)| w.clone())
            .ok_or_else(|| Error::InvalidMeasure(format!("no weight for {x}")))?;
        acc = acc + w * v.clone();
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::rat;
    use proptest::prelude::*;

    fn pt(n: i64, d: i64) -> SemilocalAdele {
        SemilocalAdele::principal(&rat(n, d), &[2, 3], true).unwrap()
    }

    #[test]
    fn compose_examples() {
        let a = GroupoidElement::new(rat(2, 1), pt(6, 1)).unwrap();
        let b = GroupoidElement::new(rat(3, 1), pt(2, 1)).unwrap();
        let c = groupoid_compose(&a, &b).unwrap();
        assert_eq!(c.k, rat(6, 1));
        assert!(c.x.approx_eq(&pt(2, 1)));

        let u = GroupoidElement::new(rat(1, 1), pt(5, 7)).unwrap();
        assert_eq!(groupoid_compose(&u, &u).unwrap(), u);

        let a = GroupoidElement::new(rat(1, 2), pt(3, 1)).unwrap();
        let b = GroupoidElement::new(rat(3, 1), pt(1, 1)).unwrap();
        let c = groupoid_compose(&a, &b).unwrap();
        assert_eq!(c.k, rat(3, 2));
        assert!(c.x.approx_eq(&pt(1, 1)));
    }

    #[test]
    fn compose_mismatch_is_reported() {
        let a = GroupoidElement::new(rat(2, 1), pt(5, 1)).unwrap();
        let b = GroupoidElement::new(rat(3, 1), pt(2, 1)).unwrap();
        assert!(matches!(groupoid_compose(&a, &b), Err(Error::CompositionUndefined { .. })));
        assert!(GroupoidElement::new(rat(0, 1), pt(1, 1)).is_err());
    }

    fn dyadic_base() -> Vec<SemilocalAdele> {
        (-3..=3).map(|j| if j >= 0 { pt(1 << j, 1) } else { pt(1, 1 << -j) }).collect()
    }

    #[test]
    fn conjugation_by_translation_shifts_the_argument() {
        let base = dyadic_base();
        let mut f = FiniteGroupoidFunction::<Rational>::new(base.clone()).unwrap();
        for (i, x) in base.iter().enumerate() {
            f.set(&rat(1, 1), x, rat(i as i64 * i as i64 + 1, 3)).unwrap();
        }
        let u = FiniteGroupoidFunction::translation(base.clone(), &rat(2, 1)).unwrap();
        let uinv = FiniteGroupoidFunction::translation(base.clone(), &rat(1, 2)).unwrap();
        let conj = u.convolve(&f).unwrap().convolve(&uinv).unwrap();
        for x in &base {
            let shifted = x.scale(&rat(1, 2));
            if f.index_of(&shifted).is_some() {
                assert_eq!(conj.get(&rat(1, 1), x), f.get(&rat(1, 1), &shifted));
            }
        }
    }

    #[test]
    fn unit_fiber_delta_is_idempotent() {
        let base = dyadic_base();
        let d = FiniteGroupoidFunction::<Rational>::delta(base, &rat(1, 1), &pt(2, 1)).unwrap();
        assert_eq!(d.convolve(&d).unwrap(), d);
    }

    #[test]
    fn set_outside_model_is_incomplete() {
        let mut f = FiniteGroupoidFunction::<Rational>::new(dyadic_base()).unwrap();
        assert!(matches!(f.set(&rat(16, 1), &pt(1, 1), rat(1, 1)), Err(Error::ModelIncomplete(_))));
        assert!(matches!(f.set(&rat(1, 1), &pt(5, 1), rat(1, 1)), Err(Error::ModelIncomplete(_))));
    }

    #[test]
    fn epsilon_functionals() {
        let mut base = dyadic_base();
        base.push(pt(0, 1));
        let zero = pt(0, 1);
        let d = FiniteGroupoidFunction::<Rational>::delta(base.clone(), &rat(1, 1), &zero).unwrap();
        assert_eq!(epsilon0(&d).unwrap(), rat(1, 1));
        let off = FiniteGroupoidFunction::<Rational>::delta(base.clone(), &rat(2, 1), &pt(1, 1)).unwrap();
        let weights: Vec<(SemilocalAdele, Rational)> = base.iter().map(|x| (x.clone(), rat(1, 1))).collect();
        assert_eq!(epsilon0(&off).unwrap(), rat(0, 1));
        assert_eq!(epsilon1(&off, &weights).unwrap(), rat(0, 1));
        let on = FiniteGroupoidFunction::<Rational>::delta(base.clone(), &rat(1, 1), &pt(1, 1)).unwrap();
        assert!(matches!(epsilon1(&on, &weights[..1]), Err(Error::InvalidMeasure(_))));
        let no_zero = FiniteGroupoidFunction::<Rational>::new(dyadic_base()).unwrap();
        assert!(matches!(epsilon0(&no_zero), Err(Error::ModelIncomplete(_))));
    }

    #[test]
    fn trace_property_on_two_point_model() {
        // orbit {1, -1} under k = -1, invariant counting measure
        let base = vec![pt(1, 1), pt(-1, 1)];
        let mut f = FiniteGroupoidFunction::<Rational>::new(base.clone()).unwrap();
        let mut g = f.clone();
        f.set(&rat(-1, 1), &base[0], rat(2, 1)).unwrap();
        f.set(&rat(1, 1), &base[1], rat(5, 3)).unwrap();
        g.set(&rat(-1, 1), &base[1], rat(-7, 2)).unwrap();
        g.set(&rat(1, 1), &base[0], rat(1, 4)).unwrap();
        g.set(&rat(-1, 1), &base[0], rat(3, 1)).unwrap();
        let w = vec![(base[0].clone(), rat(1, 1)), (base[1].clone(), rat(1, 1))];
        let fg = epsilon1(&f.convolve(&g).unwrap(), &w).unwrap();
        let gf = epsilon1(&g.convolve(&f).unwrap(), &w).unwrap();
        assert_eq!(fg, gf);
        assert_ne!(fg, rat(0, 1));
    }

    fn orbit_model() -> (Vec<SemilocalAdele>, Vec<Rational>) {
        // ±2^a 3^b with a in [-1,1], b in [0,1]; multipliers keep us inside
        let mut base = Vec::new();
        for sign in [1i64, -1] {
            for a in -1..=1i32 {
                for b in 0..=1u32 {
                    let num = sign * if a >= 0 { (1i64 << a) * 3i64.pow(b) } else { 3i64.pow(b) };
                    let den = if a < 0 { 2 } else { 1 };
                    base.push(pt(num, den));
                }
            }
        }
        let ks = vec![rat(1, 1), rat(-1, 1), rat(2, 1), rat(1, 2), rat(3, 1), rat(1, 3), rat(-2, 3)];
        (base, ks)
    }

    fn random_function(seed: &[i64], base: &[SemilocalAdele], ks: &[Rational]) -> FiniteGroupoidFunction<Rational> {
        let mut f = FiniteGroupoidFunction::new(base.to_vec()).unwrap();
        let mut it = seed.iter().cycle();
        for x in base {
            for k in ks {
                let v = *it.next().unwrap();
                if v % 3 != 0 {
                    let _ = f.set(k, x, rat(v, 1 + (v.abs() % 4)));
                }
            }
        }
        f
    }

    proptest! {
        #[test]
        fn convolution_is_associative(
            a in proptest::collection::vec(-9i64..9, 5..30),
            b in proptest::collection::vec(-9i64..9, 5..30),
            c in proptest::collection::vec(-9i64..9, 5..30),
        ) {
            let (base, ks) = orbit_model();
            let f = random_function(&a, &base, &ks);
            let g = random_function(&b, &base, &ks);
            let h = random_function(&c, &base, &ks);
            let left = f.convolve(&g).unwrap().convolve(&h).unwrap();
            let right = f.convolve(&g.convolve(&h).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn epsilon1_is_a_trace_for_orbit_constant_weights(
            a in proptest::collection::vec(-9i64..9, 5..30),
            b in proptest::collection::vec(-9i64..9, 5..30),
        ) {
            let (base, ks) = orbit_model();
            let f = random_function(&a, &base, &ks);
            let g = random_function(&b, &base, &ks);
            let w: Vec<(SemilocalAdele, Rational)> = base.iter().map(|x| (x.clone(), rat(3, 2))).collect();
            let fg = epsilon1(&f.convolve(&g).unwrap(), &w).unwrap();
            let gf = epsilon1(&g.convolve(&f).unwrap(), &w).unwrap();
            prop_assert_eq!(fg, gf);
        }
    }
}
