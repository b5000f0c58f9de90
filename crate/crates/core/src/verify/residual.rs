use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rl::HyperSum;
use crate::solver::{EquationParams, SolutionRecord};

/// Residual of `r²R″ − (α²r² − βr + γr^{ρ+2} + δ)R` on a grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub grid: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Largest magnitude of either side of the equation over the grid.
    pub scale: f64,
    pub relative_max: f64,
}

pub(crate) fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Grid("empty grid".into()));
    }
    if let Some(r) = grid.iter().find(|r| !(**r > 0.0) || !r.is_finite()) {
        return Err(Error::Grid(format!(
            "grid point {r} is not a positive real"
        )));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Grid("grid must be strictly increasing".into()));
    }
    Ok(())
}

/// Residual of an arbitrary structured function; the second derivative is
/// exact (symbolic), only the final evaluation is numeric.
pub fn ode_residual_of(ep: &EquationParams, f: &HyperSum, grid: &[f64]) -> Result<ResidualReport> {
    check_grid(grid)?;
    let second = f.derivative().derivative();
    let mut residuals = Vec::with_capacity(grid.len());
    let mut scale = 0.0_f64;
    for &r in grid {
        let lhs = r * r * second.eval(r)?;
        let rhs = ep.coefficient_at(r) * f.eval(r)?;
        scale = scale.max(lhs.abs()).max(rhs.abs());
        residuals.push(lhs - rhs);
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::Validation(format!(
            "solution vanishes or is not finite on the grid (scale {scale})"
        )));
    }
    let relative_max = residuals.iter().fold(0.0_f64, |m, r| m.max(r.abs())) / scale;
    Ok(ResidualReport {
        grid: grid.to_vec(),
        residuals,
        scale,
        relative_max,
    })
}

/// Residual of a constructed solution's closed form.
pub fn ode_residual(
    ep: &EquationParams,
    sr: &SolutionRecord,
    grid: &[f64],
) -> Result<ResidualReport> {
    ode_residual_of(ep, &HyperSum::from(&sr.closed_form), grid)
}
