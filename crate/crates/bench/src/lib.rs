//! Inputs shared by the criterion benches.

use nabla_dfc::solver::{derive_branches_with_rate, BranchDerivation};
use nabla_dfc::{EquationParams, GridFunction};

/// Deterministic grid function on `N_0` of length `len`.
pub fn sample_grid(len: usize) -> GridFunction {
    let values = (0..len).map(|k| ((k as f64) * 0.7).sin() + 1.5).collect();
    GridFunction::new(0, values).expect("non-empty finite grid")
}

/// Derivation of the `1F1` worked example (rate 5, `r²` coefficient 25).
pub fn kummer_example() -> BranchDerivation {
    let printed = EquationParams::new(5.0, 2.0, 0.0, 2.0, 0).expect("valid equation");
    derive_branches_with_rate(&printed, 5.0).expect("valid rate")
}
