//! Zeta functions of curves over finite fields and a point-counting oracle.

mod curve;
mod field;
mod zeta;

pub use curve::{count_points, count_points_exhaustive, extension_field, Monomial, PlaneCurve};
pub use field::{first_irreducible, is_irreducible, FiniteField, MAX_FIELD_SIZE};
pub use zeta::{
    correspondence_trace, frobenius_eigenvalues, hasse_interval, numerator_polynomial, power_sum_exact, psd_check,
    recover_counts, rh_check, zeta_series, CurveCountData, ZetaPolynomial,
};
