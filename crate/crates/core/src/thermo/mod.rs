//! Thermodynamics of the p-adic valuation Hamiltonian on an orbit cut off at
//! energy λ: digit expansions, the partition function and KMS states.

mod digits;
mod kms;
mod partition;

pub use digits::{ceiling_counts, digits, floor_counts, periodic_digits, DigitExpansion, PeriodicDigits};
pub use kms::{
    coboundary_holds, kms_functional, kms_functional_exact, sigma_imaginary_exact, time_evolution, KmsModel,
};
pub use partition::{
    brute_force_multiplicity, f_p, f_p_exact, f_p_truncated_exact, jump_level, multiplicity, vacuum_degeneracy,
    zeta_p, zp, zp_brute_force, zp_exact, zp_extended, zp_extended_rational, zp_right_limit, PartitionEvaluation,
    DEFAULT_TRUNCATION,
};

use serde::Serialize;

use crate::number::Rational;

pub(crate) fn ser_rational<S: serde::Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// One output row: λ as a reduced fraction, β, Z_p and its tail bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThermoRow {
    pub lambda_num: String,
    pub lambda_den: String,
    pub beta: f64,
    #[serde(rename = "Zp")]
    pub zp: f64,
    pub tail_bound: f64,
}

impl ThermoRow {
    pub fn new(lambda: &Rational, beta: f64, eval: &PartitionEvaluation) -> Self {
        ThermoRow {
            lambda_num: lambda.numer().to_string(),
            lambda_den: lambda.denom().to_string(),
            beta,
            zp: eval.value,
            tail_bound: eval.tail_bound,
        }
    }
}
