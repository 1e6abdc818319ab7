use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::padic::padic_norm;
use super::primes::is_prime;
use super::rational::{rational_to_f64, Rational};
use crate::error::{Error, Result};

/// A place of Q. Finite places sort before the archimedean one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Place {
    Finite(u64),
    Archimedean,
}

impl Place {
    pub fn finite(p: u64) -> Result<Place> {
        if is_prime(p) {
            Ok(Place::Finite(p))
        } else {
            Err(Error::InvalidArgument(format!("{p} is not prime")))
        }
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "{p}"),
            Place::Archimedean => write!(f, "inf"),
        }
    }
}

/// Local component: exact at finite places, double precision at infinity.
#[derive(Debug, Clone, PartialEq)]
pub enum Component {
    Finite(Rational),
    Real(f64),
}

impl Component {
    fn is_zero(&self) -> bool {
        match self {
            Component::Finite(r) => r.is_zero(),
            Component::Real(x) => *x == 0.0,
        }
    }
}

/// Element of the product of Q_v over a finite sorted set of places.
#[derive(Debug, Clone, PartialEq)]
pub struct SemilocalAdele {
    components: BTreeMap<Place, Component>,
}

const ARCH_TOL: f64 = 1e-12;

impl SemilocalAdele {
    pub fn new(components: impl IntoIterator<Item = (Place, Component)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (place, comp) in components {
            match (&place, &comp) {
                (Place::Finite(p), Component::Finite(_)) => {
                    if !is_prime(*p) {
                        return Err(Error::InvalidArgument(format!("{p} is not prime")));
                    }
                }
                (Place::Archimedean, Component::Real(_)) => {}
                _ => {
                    return Err(Error::InvalidArgument(format!(
                        "component type does not match place {place}"
                    )))
                }
            }
            if map.insert(place, comp).is_some() {
                return Err(Error::InvalidArgument(format!("place {place} given twice")));
            }
        }
        Ok(SemilocalAdele { components: map })
    }

    /// Diagonal image of a rational at the given finite places and, if
    /// `with_infinity`, the real place.
    pub fn principal(x: &Rational, primes: &[u64], with_infinity: bool) -> Result<Self> {
        let mut comps: Vec<(Place, Component)> = primes
            .iter()
            .map(|&p| (Place::Finite(p), Component::Finite(x.clone())))
            .collect();
        if with_infinity {
            comps.push((Place::Archimedean, Component::Real(rational_to_f64(x))));
        }
        SemilocalAdele::new(comps)
    }

    pub fn support(&self) -> impl Iterator<Item = &Place> {
        self.components.keys()
    }

    pub fn component(&self, place: &Place) -> Option<&Component> {
        self.components.get(place)
    }

    pub fn components(&self) -> impl Iterator<Item = (&Place, &Component)> {
        self.components.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.components.values().all(Component::is_zero)
    }

    /// Multiplication by a rational acting diagonally.
    pub fn scale(&self, k: &Rational) -> SemilocalAdele {
        let kf = rational_to_f64(k);
        let components = self
            .components
            .iter()
            .map(|(place, comp)| {
                let c = match comp {
                    Component::Finite(r) => Component::Finite(r * k),
                    Component::Real(x) => Component::Real(x * kf),
                };
                (*place, c)
            })
            .collect();
        SemilocalAdele { components }
    }

    /// Equality that is exact at finite places and relative `1e-12` at infinity.
    pub fn approx_eq(&self, other: &SemilocalAdele) -> bool {
        if self.components.len() != other.components.len() {
            return false;
        }
        self.components.iter().zip(other.components.iter()).all(|((pa, ca), (pb, cb))| {
            pa == pb
                && match (ca, cb) {
                    (Component::Finite(a), Component::Finite(b)) => a == b,
                    (Component::Real(a), Component::Real(b)) => {
                        (a - b).abs() <= ARCH_TOL * a.abs().max(b.abs()).max(1.0)
                    }
                    _ => false,
                }
        })
    }
}

impl fmt::Display for SemilocalAdele {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (place, comp)) in self.components.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match comp {
                Component::Finite(r) => write!(f, "{place}: {r}")?,
                Component::Real(x) => write!(f, "{place}: {x}")?,
            }
        }
        write!(f, ")")
    }
}

/// Module of a semilocal idele: product of the local absolute values.
pub fn idele_norm(a: &SemilocalAdele) -> Result<f64> {
    let mut norm = 1.0;
    for (place, comp) in a.components() {
        match (place, comp) {
            (Place::Finite(p), Component::Finite(r)) => {
                if r.is_zero() {
                    return Err(Error::NotAnIdele(place.to_string()));
                }
                norm *= rational_to_f64(&padic_norm(r, *p)?);
            }
            (_, Component::Real(x)) => {
                if *x == 0.0 {
                    return Err(Error::NotAnIdele(place.to_string()));
                }
                norm *= x.abs();
            }
            _ => unreachable!("component types are validated on construction"),
        }
    }
    Ok(norm)
}

impl Component {
    pub fn abs_f64(&self) -> f64 {
        match self {
            Component::Finite(r) => rational_to_f64(&r.abs()),
            Component::Real(x) => x.abs(),
        }
    }
}
