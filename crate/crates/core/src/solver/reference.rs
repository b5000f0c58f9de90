//! The three published worked examples, transcribed as printed: equation,
//! derived constants, fractional representations and closed forms.

use crate::error::{Error, Result};
use crate::rl::{ExpPowerTerm, HyperSum, HyperTerm, KummerFactor};
use crate::solver::{Branch, EquationParams, FractionalForm};

/// Constants as listed alongside each example.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrintedConstants {
    pub tau: f64,
    pub rate: f64,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// One printed particular solution.
#[derive(Debug, Clone)]
pub struct PrintedSolution {
    /// Branch inferred from the printed operand/order pair.
    pub branch: Branch,
    /// Representation before the power/order exchange, when printed.
    pub pre_rewrite: Option<FractionalForm>,
    /// Representation after the exchange.
    pub post_rewrite: FractionalForm,
    /// Printed closed form with its arbitrary constant set to 1.
    pub closed_form: HyperSum,
    /// Printed decimal ratio between the closed-form constant and the
    /// fractional-form constant (`C/A`, `D/B`).
    pub printed_constant: Option<f64>,
    /// Kummer parameters `(a, b, scale)` of the printed closed form.
    pub printed_kummer: Option<(f64, f64, f64)>,
}

#[derive(Debug, Clone)]
pub struct ReferenceExample {
    pub id: u8,
    /// The equation as printed.
    pub equation: EquationParams,
    /// Rate the example uses in place of `√K`, when it differs.
    pub forced_rate: Option<f64>,
    pub constants: PrintedConstants,
    pub solutions: Vec<PrintedSolution>,
}

fn form(prefactor: (f64, f64), operand: (f64, f64), order: f64) -> FractionalForm {
    FractionalForm {
        prefactor: ExpPowerTerm::unit(prefactor.0, prefactor.1),
        operand: ExpPowerTerm::unit(operand.0, operand.1),
        order,
        notation: "printed".into(),
    }
}

fn plain(c: f64, powers: &[(f64, f64)]) -> HyperSum {
    HyperSum::new(powers.iter().map(|&(k, p)| HyperTerm {
        base: ExpPowerTerm::new(k, c, p),
        f1f1: None,
    }))
}

fn kummer(kappa: f64, c: f64, p: f64, f: (f64, f64, f64)) -> HyperSum {
    HyperSum::new([HyperTerm {
        base: ExpPowerTerm::new(kappa, c, p),
        f1f1: Some(KummerFactor {
            a: f.0,
            b: f.1,
            scale: f.2,
        }),
    }])
}

/// Worked example `id ∈ {1, 2, 3}`.
///
/// Equation coefficients not pinned down by the printed equation are chosen
/// as: example 1 puts the whole `r²` coefficient in `α²` (`γ = 0`); example 3
/// splits `γ + δ = 6` as `γ = 4`, `δ = 2`.
pub fn reference_example(id: u8) -> Result<ReferenceExample> {
    match id {
        1 => {
            let f1 = (11.0 / 5.0, 4.0, -10.0);
            let f2 = (9.0 / 5.0, 4.0, 10.0);
            Ok(ReferenceExample {
                id,
                // r²R″ − (5r² − 2r + 2)R = 0
                equation: EquationParams::new(5.0, 2.0, 0.0, 2.0, 0)?,
                forced_rate: Some(5.0),
                constants: PrintedConstants {
                    tau: 3.0,
                    rate: 5.0,
                    a: -11.0 / 5.0,
                    b: -9.0 / 5.0,
                    c: 4.0 / 5.0,
                    d: 6.0 / 5.0,
                },
                solutions: vec![
                    PrintedSolution {
                        branch: Branch::I,
                        pre_rewrite: None,
                        post_rewrite: form((5.0, -1.0), (-10.0, 6.0 / 5.0), -9.0 / 5.0),
                        closed_form: kummer(0.183_634, 5.0, 2.0, f1),
                        printed_constant: Some(0.183_634),
                        printed_kummer: Some(f1),
                    },
                    PrintedSolution {
                        branch: Branch::II,
                        pre_rewrite: None,
                        post_rewrite: form((-5.0, -1.0), (10.0, 4.0 / 5.0), -11.0 / 5.0),
                        closed_form: kummer(0.155_231, -5.0, 2.0, f2),
                        printed_constant: Some(0.155_231),
                        printed_kummer: Some(f2),
                    },
                ],
            })
        }
        2 => Ok(ReferenceExample {
            id,
            // r²R″ − (r² + 2r + 2)R = 0
            equation: EquationParams::new(1.0, 0.0, 2.0, 2.0, -1)?,
            forced_rate: None,
            constants: PrintedConstants {
                tau: 3.0,
                rate: 1.0,
                a: -1.0,
                b: -3.0,
                c: 2.0,
                d: 0.0,
            },
            solutions: vec![
                PrintedSolution {
                    branch: Branch::I,
                    pre_rewrite: Some(form((1.0, 2.0), (-2.0, -3.0), 0.0)),
                    post_rewrite: form((1.0, -1.0), (-2.0, 0.0), -3.0),
                    // e^{-r}/r
                    closed_form: plain(-1.0, &[(1.0, -1.0)]),
                    printed_constant: None,
                    printed_kummer: None,
                },
                PrintedSolution {
                    branch: Branch::II,
                    pre_rewrite: Some(form((-1.0, 2.0), (2.0, -1.0), 2.0)),
                    post_rewrite: form((-1.0, -1.0), (2.0, 2.0), -1.0),
                    // e^r (1 - 2r + 2r²)/r
                    closed_form: plain(1.0, &[(1.0, -1.0), (-2.0, 0.0), (2.0, 1.0)]),
                    printed_constant: None,
                    printed_kummer: None,
                },
            ],
        }),
        3 => Ok(ReferenceExample {
            id,
            // r²R″ − (r² − 2r + 6)R = 0
            equation: EquationParams::new(1.0, 2.0, 4.0, 2.0, -2)?,
            forced_rate: None,
            constants: PrintedConstants {
                tau: 5.0,
                rate: 1.0,
                a: -4.0,
                b: -2.0,
                c: 1.0,
                d: 3.0,
            },
            solutions: vec![
                PrintedSolution {
                    branch: Branch::I,
                    pre_rewrite: Some(form((1.0, 3.0), (-2.0, -2.0), 3.0)),
                    post_rewrite: form((1.0, -2.0), (-2.0, 3.0), -2.0),
                    // e^{-r}(6 + 9r + 6r² + 2r³)/r²
                    closed_form: plain(-1.0, &[(6.0, -2.0), (9.0, -1.0), (6.0, 0.0), (2.0, 1.0)]),
                    printed_constant: None,
                    printed_kummer: None,
                },
                PrintedSolution {
                    branch: Branch::II,
                    pre_rewrite: Some(form((-1.0, 3.0), (2.0, -4.0), 1.0)),
                    post_rewrite: form((-1.0, -2.0), (2.0, 1.0), -4.0),
                    // e^r (r - 2)/r²
                    closed_form: plain(1.0, &[(1.0, -1.0), (-2.0, -2.0)]),
                    printed_constant: None,
                    printed_kummer: None,
                },
            ],
        }),
        other => Err(Error::Parameter(format!(
            "no worked example {other}; choose 1, 2 or 3"
        ))),
    }
}
