//! Riemann–Liouville operators based at 0, specialised to the exp-power family
//! `κ·e^{cr}·r^p`. Closed forms go through Kummer's `1F1`; an independent
//! Gauss–Jacobi quadrature serves as the oracle.

mod expr;
mod ops;
mod quadrature;

pub use expr::{ExpPowerTerm, HyperSum, HyperTerm, KummerFactor, StructuredFunction};
pub(crate) use ops::snap_integer;
pub use ops::{
    integer_derivative, rl_apply, rl_exp_power_closed_form, rl_integral_quadrature,
    QUADRATURE_REL_TOL,
};
pub use quadrature::{rl_integral_of, GaussJacobi};
