pub mod bc;
pub mod error;
pub mod explicit;
pub mod ff;
pub mod groupoid;
pub mod number;
pub mod thermo;

pub use error::{Error, Result};
