//! The JSON solution document written by `solve` and read back by `verify`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rl::StructuredFunction;
use crate::solver::{
    construct_solution, derive_branches, derive_branches_with_rate, Branch, BranchDerivation,
    EquationParams, FractionalForm, SolutionRecord,
};

/// A closed-form value on the sample grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub r: f64,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionDocument {
    /// The equation as requested.
    pub equation: EquationParams,
    /// Rate supplied in place of `√K`; the derivation then carries the
    /// equation with `r²` coefficient `forced_rate²`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forced_rate: Option<f64>,
    pub branch: Branch,
    pub arbitrary_constant: String,
    pub derivation: BranchDerivation,
    pub literal_form: FractionalForm,
    pub fractional_form: FractionalForm,
    pub rewritten: bool,
    pub closed_form: StructuredFunction,
    pub normalization: Option<f64>,
    #[serde(default)]
    pub samples: Vec<Sample>,
}

/// Default derivation, or the forced-rate one when `forced_rate` is given.
pub fn derivation_for(ep: &EquationParams, forced_rate: Option<f64>) -> Result<BranchDerivation> {
    match forced_rate {
        Some(eta) => derive_branches_with_rate(ep, eta),
        None => derive_branches(ep),
    }
}

impl SolutionDocument {
    /// Derives and constructs `branch`, sampling the closed form on `grid`.
    pub fn solve(
        equation: EquationParams,
        forced_rate: Option<f64>,
        branch: Branch,
        grid: &[f64],
    ) -> Result<Self> {
        let derivation = derivation_for(&equation, forced_rate)?;
        let sr = construct_solution(&derivation, branch)?;
        let samples = grid
            .iter()
            .map(|&r| {
                Ok(Sample {
                    r,
                    value: sr.closed_form.eval(r)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            equation,
            forced_rate,
            branch,
            arbitrary_constant: sr.arbitrary_constant,
            derivation,
            literal_form: sr.literal_form,
            fractional_form: sr.fractional_form,
            rewritten: sr.rewritten,
            closed_form: sr.closed_form,
            normalization: sr.normalization,
            samples,
        })
    }

    pub fn record(&self) -> SolutionRecord {
        SolutionRecord {
            branch: self.branch,
            arbitrary_constant: self.arbitrary_constant.clone(),
            literal_form: self.literal_form.clone(),
            fractional_form: self.fractional_form.clone(),
            rewritten: self.rewritten,
            closed_form: self.closed_form.clone(),
            normalization: self.normalization,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Validation(e.to_string()))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Validation(format!("solution document: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let ep = EquationParams::new(1.0, 0.0, 2.0, 2.0, -1).unwrap();
        let doc = SolutionDocument::solve(ep, None, Branch::II, &[0.5, 1.0]).unwrap();
        let text = doc.to_json().unwrap();
        let back = SolutionDocument::from_json(&text).unwrap();
        assert_eq!(back, doc);

        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["branch"], "II");
        assert_eq!(v["equation"]["rho"], -1);
        assert_eq!(v["derivation"]["tau"], 3.0);
        assert_eq!(v["derivation"]["constants"]["b"], -3.0);
        assert!(v["closed_form"]["f1f1"].is_null());
        assert!(v.get("forced_rate").is_none());
    }

    #[test]
    fn forced_rate_document() {
        let ep = EquationParams::new(5.0, 2.0, 0.0, 2.0, 0).unwrap();
        let doc = SolutionDocument::solve(ep, Some(5.0), Branch::I, &[]).unwrap();
        assert_eq!(doc.derivation.equation.alpha_sq, 25.0);
        assert_eq!(doc.equation.alpha_sq, 5.0);
        let back = SolutionDocument::from_json(&doc.to_json().unwrap()).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn invalid_documents_are_rejected() {
        assert!(SolutionDocument::from_json("{}").is_err());
        let ep = EquationParams::new(1.0, 0.0, 2.0, 2.0, -1).unwrap();
        let doc = SolutionDocument::solve(ep, None, Branch::I, &[]).unwrap();
        let mut v: serde_json::Value = serde_json::to_value(&doc).unwrap();
        v["equation"]["rho"] = serde_json::json!(3);
        assert!(SolutionDocument::from_json(&v.to_string()).is_err());
    }
}
