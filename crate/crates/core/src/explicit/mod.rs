//! Analytic side: test functions on the positive reals, Mellin transforms,
//! the two sides of the explicit formula, the trace pairing, and theta
//! series with their degrees.

pub mod formula;
pub mod mellin;
pub mod pairing;
pub mod profile;
pub mod quadrature;
pub mod special;
pub mod test_function;
pub mod theta;
pub mod zeros;

pub use formula::{
    convergence_table, default_calibration_reference, doubling_ns, explicit_formula_report, geometric_side,
    spectral_side, Calibration, FormulaContext, FormulaReport, GeometricSide, SpectralSide,
};
pub use mellin::{mellin, MellinPlan};
pub use pairing::{positivity_check, rh_estimate_check, weil_pairing, PairingMode, RhEstimate};
pub use profile::SchwartzProfile;
pub use special::{complete_zeta, zeta, ZetaValue};
pub use test_function::{convolve_mult, delta_power, sharp, star, Bump, GridFunction, TestFunction, ThetaSeries};
pub use theta::{
    adjust_degree, codegree, degree, fubini_terms, theta_mellin, theta_scale, theta_series, DegreeAdjustment,
    ThetaMellinMethod,
};
pub use zeros::{load_zeros, ZeroTable};
