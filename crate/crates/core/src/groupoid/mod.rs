//! Finite groupoid models, the summation map, and semilocal quotient
//! geometries.

pub mod algebra;
pub mod semilocal;
pub mod summation;

pub use algebra::{epsilon0, epsilon1, groupoid_compose, Coefficient, FiniteGroupoidFunction, GroupoidElement};
pub use semilocal::{
    holonomy_class, holonomy_identity, padic_real_act, padic_real_fiber, padic_real_reduce, quad_act, quad_fiber,
    quad_reduce, FiberLabel, HolonomyCheck, PadicRealPoint, QuadInteger, QuadPoint, Sign,
};
pub use summation::summation_map;
