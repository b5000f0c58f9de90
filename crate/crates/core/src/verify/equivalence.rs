use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rl::{integer_derivative, rl_integral_quadrature, snap_integer, StructuredFunction};
use crate::solver::{FractionalForm, SolutionRecord};
use crate::verify::residual::check_grid;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Equivalence {
    pub agree: bool,
    /// Largest pointwise relative deviation.
    pub max_deviation: f64,
    pub grid: Vec<f64>,
    /// Fractional form evaluated independently of the closed form.
    pub fractional_values: Vec<f64>,
    pub closed_values: Vec<f64>,
}

/// Evaluates `prefactor × [operand]_{order}` at `r` without the `1F1` closed
/// form: quadrature for negative orders, exact differentiation for
/// non-negative integer orders.
pub fn evaluate_fractional_form(form: &FractionalForm, r: f64) -> Result<f64> {
    let pre = form.prefactor.eval(r);
    match snap_integer(form.order) {
        Some(n) if n >= 0 => {
            let d = integer_derivative(&StructuredFunction::sum([form.operand]), n as u32)?;
            Ok(pre * d.eval(r)?)
        }
        _ if form.order < 0.0 => Ok(pre * rl_integral_quadrature(&form.operand, -form.order, r)?),
        _ => Err(Error::Parameter(format!(
            "no independent route for positive non-integer order {}",
            form.order
        ))),
    }
}

/// Pointwise agreement of a fractional form with a closed form.
///
/// Deviations are relative to `|closed(r)|`, floored at `1e-12` of the
/// largest closed-form magnitude on the grid so isolated zeros do not blow up.
pub fn form_equivalence(
    form: &FractionalForm,
    closed: &StructuredFunction,
    grid: &[f64],
    tol: f64,
) -> Result<Equivalence> {
    check_grid(grid)?;
    let fractional_values = grid
        .iter()
        .map(|&r| evaluate_fractional_form(form, r))
        .collect::<Result<Vec<_>>>()?;
    let closed_values = grid
        .iter()
        .map(|&r| closed.eval(r))
        .collect::<Result<Vec<_>>>()?;
    let peak = closed_values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let floor = 1e-12 * peak;
    let max_deviation = fractional_values
        .iter()
        .zip(&closed_values)
        .map(|(f, c)| {
            let diff = (f - c).abs();
            if diff == 0.0 {
                0.0
            } else {
                diff / c.abs().max(floor)
            }
        })
        .fold(0.0_f64, f64::max);
    Ok(Equivalence {
        agree: max_deviation <= tol,
        max_deviation,
        grid: grid.to_vec(),
        fractional_values,
        closed_values,
    })
}

/// Agreement between a solution's fractional form and its closed form.
pub fn representation_equivalence(
    sr: &SolutionRecord,
    grid: &[f64],
    tol: f64,
) -> Result<Equivalence> {
    form_equivalence(&sr.fractional_form, &sr.closed_form, grid, tol)
}
