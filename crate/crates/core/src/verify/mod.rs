//! Verification harness: ODE residuals, agreement between fractional and
//! closed representations, the identity suite for the nabla kernel and the
//! worked-example reproductions.

mod equivalence;
mod examples;
mod residual;
mod suite;

use serde::{Deserialize, Serialize};

pub use equivalence::{
    evaluate_fractional_form, form_equivalence, representation_equivalence, Equivalence,
};
pub use examples::{proportionality, verify_example, verify_solution, DEFAULT_GRID};
pub use residual::{ode_residual, ode_residual_of, ResidualReport};
pub use suite::{identity_suite, identity_suite_with, LeibnizFn, SuiteConfig};

/// Environment variable that overrides every default tolerance.
pub const TOLERANCE_ENV: &str = "NABLA_DFC_TOL";

/// One pass/fail line of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// `None` serializes as `null` and marks a check that could not run.
    pub max_error: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    /// Passes when `max_error ≤ tolerance`; NaN fails.
    pub fn at_most(name: impl Into<String>, max_error: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            max_error: Some(max_error),
            tolerance,
            pass: max_error <= tolerance,
            detail: None,
        }
    }

    pub fn failed(name: impl Into<String>, tolerance: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            max_error: None,
            tolerance,
            pass: false,
            detail: Some(detail.into()),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
    pub seed: Option<u64>,
    pub trials: Option<u32>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl Report {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
        self.notes.extend(other.notes);
        self.seed = self.seed.or(other.seed);
        self.trials = self.trials.or(other.trials);
    }
}

/// Tolerances used by the harness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Relative ODE residual.
    pub residual: f64,
    /// Fractional form against closed form, and proportionality.
    pub equivalence: f64,
    /// Printed six-digit decimal constants.
    pub constant: f64,
    /// Nabla sum/difference identities.
    pub identity: f64,
    /// Monomial derivative rule.
    pub monomial: f64,
    /// Results that should agree to rounding.
    pub exact: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual: 1e-8,
            equivalence: 1e-6,
            constant: 5e-6,
            identity: 1e-9,
            monomial: 1e-10,
            exact: 1e-12,
        }
    }
}

impl Tolerances {
    pub fn uniform(tol: f64) -> Self {
        Self {
            residual: tol,
            equivalence: tol,
            constant: tol,
            identity: tol,
            monomial: tol,
            exact: tol,
        }
    }

    /// Defaults, or a uniform tolerance from `NABLA_DFC_TOL` when it holds a
    /// positive number.
    pub fn from_env() -> crate::Result<Self> {
        match std::env::var(TOLERANCE_ENV) {
            Ok(s) => {
                let tol: f64 = s.trim().parse().map_err(|_| {
                    crate::Error::Parameter(format!("{TOLERANCE_ENV}={s:?} is not a number"))
                })?;
                if !(tol > 0.0) || !tol.is_finite() {
                    return Err(crate::Error::Parameter(format!(
                        "{TOLERANCE_ENV}={s:?} must be a positive number"
                    )));
                }
                Ok(Self::uniform(tol))
            }
            Err(_) => Ok(Self::default()),
        }
    }
}

/// `|x − y| / max(1, |x|, |y|)`: absolute near zero, relative elsewhere.
pub fn mixed_error(x: f64, y: f64) -> f64 {
    if x == y {
        return 0.0;
    }
    (x - y).abs() / 1f64.max(x.abs()).max(y.abs())
}

/// `|x − y| / max(|x|, |y|)`, zero when both vanish.
pub fn relative_error(x: f64, y: f64) -> f64 {
    if x == y {
        return 0.0;
    }
    (x - y).abs() / x.abs().max(y.abs())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_json_shape() {
        let report = Report {
            checks: vec![Check::at_most("x", 1e-3, 1e-2)],
            seed: Some(42),
            trials: Some(3),
            notes: vec![],
        };
        let v: serde_json::Value = serde_json::to_value(&report).unwrap();
        assert_eq!(v["checks"][0]["name"], "x");
        assert_eq!(v["checks"][0]["pass"], true);
        assert_eq!(v["seed"], 42);
        assert_eq!(v["trials"], 3);
        assert!(v.get("notes").is_none());
        let back: Report = serde_json::from_value(v).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn nan_fails() {
        assert!(!Check::at_most("n", f64::NAN, 1.0).pass);
        assert!(!Report::default().passed());
    }

    #[test]
    fn error_metrics() {
        assert_eq!(mixed_error(1e-20, 0.0), 1e-20);
        assert_eq!(relative_error(1e-20, 0.0), 1.0);
        assert_eq!(relative_error(0.0, 0.0), 0.0);
        assert!((mixed_error(200.0, 202.0) - 2.0 / 202.0).abs() < 1e-16);
    }
}
