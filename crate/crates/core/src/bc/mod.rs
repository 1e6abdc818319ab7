//! Finite-level model of the ℚ/ℤ group ring system: the group ring of ℚ/ℤ,
//! its endomorphisms and Galois action, and the arithmetic functions on
//! 1-dimensional ℚ-lattices.

mod eisenstein;
mod group_ring;

pub use eisenstein::{
    derivation_checks, eisenstein_phi, eisenstein_phi_oracle, eisenstein_psi, galois_intertwine_check, galois_orbit,
    psi_from_root_of_unity, symmetric_partial_sum, DerivationReport, GaloisOrbit, QLatticePoint, DERIVATION_TOL,
};
pub use group_ring::{galois_act, gr_mul, residue, rho_n, GaloisElement, GroupRingElement};
