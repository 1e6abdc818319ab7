//! The summation map E on product functions 1_Ẑ ⊗ η:
//! E(η)(λ) = λ^{1/2} Σ_{n≥1} η(nλ).

use crate::error::{Error, Result};
use crate::explicit::SchwartzProfile;

pub fn summation_map(eta: &SchwartzProfile, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("λ must be positive, got {lambda}")));
    }
    eta.validate()?;
    let peak_at = eta.decay_radius(1e-3);
    let mut sum = 0.0;
    let mut running_max: f64 = 0.0;
    let mut n = 1.0;
    loop {
        let term = eta.eval(n * lambda);
        sum += term;
        running_max = running_max.max(term.abs());
        if n * lambda > peak_at && term.abs() < 1e-16 * running_max {
            break;
        }
        if term == 0.0 && n * lambda > peak_at {
            break;
        }
        n += 1.0;
    }
    Ok(lambda.sqrt() * sum)
}
