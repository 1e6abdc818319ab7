//! Exact rational and p-adic primitives, places and idele norms, prime tables.

mod adele;
mod padic;
mod primes;
mod rational;

pub use adele::{idele_norm, Component, Place, SemilocalAdele};
pub use padic::{padic_norm, vp, Valuation};
pub use primes::{is_prime, mangoldt, PrimeTable, DEFAULT_SIEVE_BOUND};
pub use rational::{ceil_rational, rat, rational_to_f64, snap_to_rational, Rational};
