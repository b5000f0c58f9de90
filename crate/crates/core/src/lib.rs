//! Nabla discrete fractional calculus, Riemann–Liouville operators on
//! exp-power functions, and closed-form particular solutions of the radial
//! Schrödinger equation `r²R″ − (α²r² − βr + γr^{ρ+2} + δ)R = 0` for
//! `ρ ∈ {0, −1, −2}`.
//!
//! * [`special`]: gamma, log-gamma, generalized binomials, Kummer `1F1`.
//! * [`dfc`]: grid functions and the nabla fractional sum/difference kernel.
//! * [`rl`]: Riemann–Liouville integrals/derivatives of `κe^{cr}r^p`.
//! * [`solver`]: parameter mapping, branch derivation, solution construction.
//! * [`verify`]: ODE residuals, representation equivalence, identity suite.

pub mod dfc;
pub mod document;
pub mod error;
pub mod rl;
pub mod solver;
pub mod special;
pub mod verify;

pub use dfc::{FractionalOrder, GridFunction};
pub use error::{Error, Result};
pub use rl::{ExpPowerTerm, KummerFactor, StructuredFunction};
pub use solver::{
    Branch, BranchDerivation, EquationParams, FractionalForm, PhysicalParams, SolutionRecord,
};
