//! Particular solutions of the radial equation
//!
//! ```text
//! r²R″ − (α²r² − βr + γr^{ρ+2} + δ)R = 0,    ρ ∈ {0, −1, −2}
//! ```
//!
//! Substituting `R = r^λ e^{σr} Y` with `λ(λ−1) = δ_eff` and `σ² = K` (the
//! `r²` coefficient) reduces the equation to a Kummer equation for `Y`, whose
//! solution is written as a Riemann–Liouville integral of `e^{−2σr}r^q`. The
//! four sign choices for `λ` and `σ` give branches I–IV.

mod reference;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rl::{rl_apply, ExpPowerTerm, StructuredFunction};

pub use reference::{reference_example, PrintedConstants, PrintedSolution, ReferenceExample};

/// Physical constants of `V(r) = a/r² − b/r + c·r^ρ` and the state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams {
    pub m: f64,
    pub hbar: f64,
    pub epsilon: f64,
    pub a_pot: f64,
    pub b_pot: f64,
    pub c_pot: f64,
    pub ell: u32,
    pub rho: i32,
}

fn check_rho(rho: i32) -> Result<()> {
    if matches!(rho, 0 | -1 | -2) {
        Ok(())
    } else {
        Err(Error::Validation(format!(
            "ρ must be 0, -1 or -2, got {rho}"
        )))
    }
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.m > 0.0) || !(self.hbar > 0.0) {
            return Err(Error::Validation(format!(
                "mass and ħ must be positive (m = {}, ħ = {})",
                self.m, self.hbar
            )));
        }
        for (name, v) in [("a", self.a_pot), ("b", self.b_pot), ("c", self.c_pot)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::Validation(format!(
                    "potential strength {name} = {v} must be ≥ 0"
                )));
            }
        }
        if !self.epsilon.is_finite() {
            return Err(Error::Validation(format!(
                "energy {} is not finite",
                self.epsilon
            )));
        }
        check_rho(self.rho)
    }
}

#[derive(Deserialize)]
struct RawEquation {
    alpha_sq: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
    rho: i32,
}

impl TryFrom<RawEquation> for EquationParams {
    type Error = Error;

    fn try_from(r: RawEquation) -> Result<Self> {
        Self::new(r.alpha_sq, r.beta, r.gamma, r.delta, r.rho)
    }
}

/// Coefficients `(α², β, γ, δ, ρ)` of the radial equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEquation")]
pub struct EquationParams {
    pub alpha_sq: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub rho: i32,
}

impl EquationParams {
    pub fn new(alpha_sq: f64, beta: f64, gamma: f64, delta: f64, rho: i32) -> Result<Self> {
        let ep = Self {
            alpha_sq,
            beta,
            gamma,
            delta,
            rho,
        };
        ep.validate()?;
        Ok(ep)
    }

    pub fn validate(&self) -> Result<()> {
        check_rho(self.rho)?;
        let all = [self.alpha_sq, self.beta, self.gamma, self.delta];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation(format!(
                "non-finite coefficient in {all:?}"
            )));
        }
        if 1.0 + 4.0 * self.effective_delta() < 0.0 {
            return Err(Error::Validation(format!(
                "1 + 4·δ_eff = {} < 0 gives a complex τ",
                1.0 + 4.0 * self.effective_delta()
            )));
        }
        if !(self.r2_coefficient() > 0.0) {
            return Err(Error::Validation(format!(
                "the r² coefficient {} must be positive for a real exponential rate",
                self.r2_coefficient()
            )));
        }
        Ok(())
    }

    /// The constant under the square root of `τ`: `δ`, or `γ + δ` for `ρ = −2`.
    pub fn effective_delta(&self) -> f64 {
        if self.rho == -2 {
            self.gamma + self.delta
        } else {
            self.delta
        }
    }

    /// Coefficient `K` of `r²R` inside the bracket: `α² + γ` for `ρ = 0`, else `α²`.
    pub fn r2_coefficient(&self) -> f64 {
        if self.rho == 0 {
            self.alpha_sq + self.gamma
        } else {
            self.alpha_sq
        }
    }

    /// Term entering the branch constants: `β − γ` for `ρ = −1`, else `β`.
    pub fn branch_numerator(&self) -> f64 {
        if self.rho == -1 {
            self.beta - self.gamma
        } else {
            self.beta
        }
    }

    /// `α²r² − βr + γr^{ρ+2} + δ`.
    pub fn coefficient_at(&self, r: f64) -> f64 {
        self.alpha_sq * r * r - self.beta * r + self.gamma * r.powi(self.rho + 2) + self.delta
    }
}

impl fmt::Display for EquationParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = self.r2_coefficient();
        let l = match self.rho {
            -1 => self.gamma - self.beta,
            _ => -self.beta,
        };
        let m = self.effective_delta();
        write!(f, "r²R″ − ({k}r²")?;
        for (coeff, unit) in [(l, "r"), (m, "")] {
            if coeff != 0.0 {
                let sign = if coeff < 0.0 { '−' } else { '+' };
                write!(f, " {sign} {}{unit}", coeff.abs())?;
            }
        }
        write!(f, ")R = 0")
    }
}

/// `−α² = 2mε/ħ²`, `β = 2mb/ħ²`, `γ = 2mc/ħ²`, `δ = 2ma/ħ² + ℓ(ℓ+1)`.
pub fn map_physical(pp: &PhysicalParams) -> Result<EquationParams> {
    pp.validate()?;
    let k = 2.0 * pp.m / (pp.hbar * pp.hbar);
    let ell = f64::from(pp.ell);
    EquationParams::new(
        -k * pp.epsilon,
        k * pp.b_pot,
        k * pp.c_pot,
        k * pp.a_pot + ell * (ell + 1.0),
        pp.rho,
    )
}

/// One of the four particular solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    I,
    II,
    III,
    IV,
}

impl Branch {
    pub const ALL: [Branch; 4] = [Branch::I, Branch::II, Branch::III, Branch::IV];

    /// Label of the arbitrary constant multiplying this branch.
    pub fn constant_symbol(self) -> &'static str {
        match self {
            Branch::I => "A",
            Branch::II => "B",
            Branch::III => "C",
            Branch::IV => "D",
        }
    }

    fn parameter_symbol(self) -> &'static str {
        match self {
            Branch::I => "a",
            Branch::II => "b",
            Branch::III => "c",
            Branch::IV => "d",
        }
    }

    /// Branch whose literal form is this branch's rewritten form.
    pub fn sibling(self) -> Branch {
        match self {
            Branch::I => Branch::III,
            Branch::II => Branch::IV,
            Branch::III => Branch::I,
            Branch::IV => Branch::II,
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Branch::I => "I",
            Branch::II => "II",
            Branch::III => "III",
            Branch::IV => "IV",
        };
        f.write_str(s)
    }
}

impl FromStr for Branch {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "I" | "1" => Ok(Branch::I),
            "II" | "2" => Ok(Branch::II),
            "III" | "3" => Ok(Branch::III),
            "IV" | "4" => Ok(Branch::IV),
            other => Err(Error::Parameter(format!("unknown branch {other:?}"))),
        }
    }
}

/// The four branch constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchConstants {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// Everything the reduction derives for one equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BranchDerivation {
    /// The equation these constants solve exactly. Under a forced rate this
    /// differs from the input equation in its `r²` coefficient.
    pub equation: EquationParams,
    pub tau: f64,
    /// `|σ|`: `√K` by default, or the forced value.
    pub rate: f64,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    pub constants: BranchConstants,
    /// True when `rate` was supplied instead of derived from the equation.
    pub forced_rate: bool,
}

/// Derives `τ`, the rate `√K`, `λ±` and the branch constants.
pub fn derive_branches(ep: &EquationParams) -> Result<BranchDerivation> {
    ep.validate()?;
    let k = ep.r2_coefficient();
    if !(k > 0.0) {
        return Err(Error::Domain {
            function: "derive_branches (rate²)",
            at: k,
        });
    }
    derive_with_rate(ep, k.sqrt(), false)
}

/// Derivation with the exponential rate supplied directly.
///
/// The returned [`BranchDerivation::equation`] is the input with its `r²`
/// coefficient replaced by `rate²`, which is the equation the constructed
/// solutions actually satisfy.
pub fn derive_branches_with_rate(ep: &EquationParams, rate: f64) -> Result<BranchDerivation> {
    if !(rate > 0.0) || !rate.is_finite() {
        return Err(Error::Domain {
            function: "derive_branches (rate)",
            at: rate,
        });
    }
    let alpha_sq = if ep.rho == 0 {
        rate * rate - ep.gamma
    } else {
        rate * rate
    };
    let corrected = EquationParams::new(alpha_sq, ep.beta, ep.gamma, ep.delta, ep.rho)?;
    derive_with_rate(&corrected, rate, true)
}

fn derive_with_rate(ep: &EquationParams, rate: f64, forced_rate: bool) -> Result<BranchDerivation> {
    let disc = 1.0 + 4.0 * ep.effective_delta();
    if disc < 0.0 {
        return Err(Error::Domain {
            function: "derive_branches (1 + 4δ)",
            at: disc,
        });
    }
    let tau = disc.sqrt();
    let num = ep.branch_numerator();
    let two_rate = 2.0 * rate;
    let constants = BranchConstants {
        a: -((num + rate * (1.0 + tau)) / two_rate),
        b: (num - rate * (1.0 + tau)) / two_rate,
        c: -((num + rate * (1.0 - tau)) / two_rate),
        d: (num - rate * (1.0 - tau)) / two_rate,
    };
    Ok(BranchDerivation {
        equation: *ep,
        tau,
        rate,
        lambda_plus: 0.5 * (1.0 + tau),
        lambda_minus: 0.5 * (1.0 - tau),
        constants,
        forced_rate,
    })
}

impl BranchDerivation {
    pub fn constant(&self, branch: Branch) -> f64 {
        match branch {
            Branch::I => self.constants.a,
            Branch::II => self.constants.b,
            Branch::III => self.constants.c,
            Branch::IV => self.constants.d,
        }
    }

    /// Operator order `−(1 + const)` with the shift evaluated as the identity.
    pub fn order(&self, branch: Branch) -> f64 {
        -(1.0 + self.constant(branch))
    }

    /// `(σ, λ, ±τ)` for a branch.
    fn signs(&self, branch: Branch) -> (f64, f64, f64) {
        match branch {
            Branch::I => (self.rate, self.lambda_plus, self.tau),
            Branch::II => (-self.rate, self.lambda_plus, self.tau),
            Branch::III => (self.rate, self.lambda_minus, -self.tau),
            Branch::IV => (-self.rate, self.lambda_minus, -self.tau),
        }
    }

    /// `e^{σr} r^λ [e^{−2σr} r^{−(1±τ+k)}]_{−(1+k)}` exactly as derived.
    pub fn literal_form(&self, branch: Branch) -> FractionalForm {
        let (sigma, lambda, tau) = self.signs(branch);
        let k = self.constant(branch);
        FractionalForm {
            prefactor: ExpPowerTerm::unit(sigma, lambda),
            operand: ExpPowerTerm::unit(-2.0 * sigma, -(1.0 + tau + k)),
            order: -(1.0 + k),
            notation: format!("-(1+{}E^-1)", branch.parameter_symbol()),
        }
    }

    /// The literal form with operand power and order exchanged and the
    /// prefactor power moved to the other root `λ ∓ τ`.
    pub fn rewritten_form(&self, branch: Branch) -> FractionalForm {
        let (sigma, _, tau) = self.signs(branch);
        let (_, other_lambda, _) = self.signs(branch.sibling());
        let k = self.constant(branch);
        FractionalForm {
            prefactor: ExpPowerTerm::unit(sigma, other_lambda),
            operand: ExpPowerTerm::unit(-2.0 * sigma, -(1.0 + k)),
            order: -(1.0 + tau + k),
            notation: format!(
                "-(1+{}E^-1) exchanged with operand power",
                branch.parameter_symbol()
            ),
        }
    }
}

/// `prefactor × [operand]_{order}` in the Riemann–Liouville sense.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FractionalForm {
    pub prefactor: ExpPowerTerm,
    pub operand: ExpPowerTerm,
    pub order: f64,
    /// Display form of the operator-valued order this scalar stands for.
    pub notation: String,
}

impl FractionalForm {
    /// `prefactor × rl_apply(operand, order)`.
    pub fn assemble(&self) -> Result<StructuredFunction> {
        Ok(rl_apply(&self.operand, self.order)?.times_term(&self.prefactor))
    }
}

/// A constructed branch solution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionRecord {
    pub branch: Branch,
    pub arbitrary_constant: String,
    /// The derived shape, kept even when it cannot be evaluated.
    pub literal_form: FractionalForm,
    /// The representation `closed_form` was assembled from.
    pub fractional_form: FractionalForm,
    pub rewritten: bool,
    pub closed_form: StructuredFunction,
    /// `Γ(p+1)/Γ(p+μ+1)` of a `1F1` normal form; `None` for finite sums.
    pub normalization: Option<f64>,
}

/// Builds branch `branch`, trying the literal form first and the rewritten
/// one when the literal form has no closed form.
pub fn construct_solution(bd: &BranchDerivation, branch: Branch) -> Result<SolutionRecord> {
    let literal = bd.literal_form(branch);
    let (fractional_form, closed_form, rewritten) = match literal.assemble() {
        Ok(closed) => (literal.clone(), closed, false),
        Err(literal_err) => {
            let rewritten = bd.rewritten_form(branch);
            match rewritten.assemble() {
                Ok(closed) => (rewritten, closed, true),
                Err(rewritten_err) => {
                    return Err(Error::BranchUnavailable {
                        branch: branch.to_string(),
                        reason: format!(
                            "literal form (order {:.6}, operand power {:.6}): {literal_err}; \
                             rewritten form (order {:.6}, operand power {:.6}): {rewritten_err}",
                            literal.order, literal.operand.p, rewritten.order, rewritten.operand.p
                        ),
                    })
                }
            }
        }
    };
    let normalization = closed_form.f1f1().map(|_| closed_form.terms()[0].kappa);
    Ok(SolutionRecord {
        branch,
        arbitrary_constant: branch.constant_symbol().to_string(),
        literal_form: literal,
        fractional_form,
        rewritten,
        closed_form,
        normalization,
    })
}

/// Value of the closed form at `r > 0` with the arbitrary constant set to 1.
pub fn evaluate_solution(sr: &SolutionRecord, r: f64) -> Result<f64> {
    sr.closed_form.eval(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex2() -> EquationParams {
        EquationParams::new(1.0, 0.0, 2.0, 2.0, -1).unwrap()
    }

    fn ex3() -> EquationParams {
        EquationParams::new(1.0, 2.0, 4.0, 2.0, -2).unwrap()
    }

    #[test]
    fn map_physical_examples() {
        let pp = PhysicalParams {
            m: 0.5,
            hbar: 1.0,
            epsilon: -1.0,
            a_pot: 0.0,
            b_pot: 0.0,
            c_pot: 2.0,
            ell: 1,
            rho: -1,
        };
        assert_eq!(map_physical(&pp).unwrap(), ex2());

        let pp = PhysicalParams {
            b_pot: 2.0,
            c_pot: 0.0,
            rho: 0,
            ..pp
        };
        assert_eq!(
            map_physical(&pp).unwrap(),
            EquationParams::new(1.0, 2.0, 0.0, 2.0, 0).unwrap()
        );

        let free = PhysicalParams {
            b_pot: 0.0,
            c_pot: 0.0,
            ell: 0,
            ..pp
        };
        let ep = map_physical(&free).unwrap();
        assert_eq!((ep.beta, ep.gamma, ep.delta), (0.0, 0.0, 0.0));
    }

    #[test]
    fn map_physical_rejects_unbound_energy() {
        let pp = PhysicalParams {
            m: 1.0,
            hbar: 1.0,
            epsilon: 0.5,
            a_pot: 0.0,
            b_pot: 1.0,
            c_pot: 1.0,
            ell: 0,
            rho: -1,
        };
        assert!(matches!(map_physical(&pp), Err(Error::Validation(_))));
        assert!(map_physical(&PhysicalParams {
            rho: 1,
            epsilon: -1.0,
            ..pp
        })
        .is_err());
        assert!(map_physical(&PhysicalParams {
            m: 0.0,
            epsilon: -1.0,
            ..pp
        })
        .is_err());
    }

    #[test]
    fn derive_example_two_and_three() {
        let d = derive_branches(&ex2()).unwrap();
        assert_eq!((d.tau, d.rate), (3.0, 1.0));
        assert_eq!(
            d.constants,
            BranchConstants {
                a: -1.0,
                b: -3.0,
                c: 2.0,
                d: 0.0
            }
        );

        let d = derive_branches(&ex3()).unwrap();
        assert_eq!((d.tau, d.rate), (5.0, 1.0));
        assert_eq!(
            d.constants,
            BranchConstants {
                a: -4.0,
                b: -2.0,
                c: 1.0,
                d: 3.0
            }
        );
    }

    #[test]
    fn derive_with_forced_rate() {
        let printed = EquationParams::new(5.0, 2.0, 0.0, 2.0, 0).unwrap();
        let d = derive_branches_with_rate(&printed, 5.0).unwrap();
        assert_eq!(d.tau, 3.0);
        assert_eq!(d.rate, 5.0);
        assert_eq!(d.equation.r2_coefficient(), 25.0);
        let expected = [-11.0 / 5.0, -9.0 / 5.0, 4.0 / 5.0, 6.0 / 5.0];
        for (got, want) in Branch::ALL.iter().map(|&b| d.constant(b)).zip(expected) {
            assert!((got - want).abs() < 1e-15);
        }
        // default reading uses √5
        let d = derive_branches(&printed).unwrap();
        assert!((d.rate - 5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn complex_tau_is_rejected() {
        assert!(EquationParams::new(1.0, 0.0, 0.0, -0.3, 0).is_err());
        assert!(EquationParams::new(1.0, 0.0, -1.0, 0.5, -2).is_err());
        assert!(EquationParams::new(0.0, 1.0, 0.0, 1.0, -1).is_err());
    }

    #[test]
    fn literal_forms_of_example_two() {
        let d = derive_branches(&ex2()).unwrap();
        let f = d.literal_form(Branch::I);
        assert_eq!(f.prefactor, ExpPowerTerm::unit(1.0, 2.0));
        assert_eq!(f.operand, ExpPowerTerm::unit(-2.0, -3.0));
        assert_eq!(f.order, 0.0);
        let f = d.rewritten_form(Branch::I);
        assert_eq!(f.prefactor, ExpPowerTerm::unit(1.0, -1.0));
        assert_eq!(f.operand, ExpPowerTerm::unit(-2.0, 0.0));
        assert_eq!(f.order, -3.0);
        let (rw, sib) = (d.rewritten_form(Branch::I), d.literal_form(Branch::III));
        assert_eq!(
            (rw.prefactor, rw.operand, rw.order),
            (sib.prefactor, sib.operand, sib.order)
        );
    }

    #[test]
    fn construct_example_two_branch_one() {
        let d = derive_branches(&ex2()).unwrap();
        let s = construct_solution(&d, Branch::I).unwrap();
        assert!(!s.rewritten);
        assert_eq!(
            s.closed_form,
            StructuredFunction::sum([ExpPowerTerm::unit(-1.0, -1.0)])
        );
        assert!((evaluate_solution(&s, 1.0).unwrap() - (-1f64).exp()).abs() < 1e-16);
        assert!(s.normalization.is_none());
    }

    #[test]
    fn construct_example_three_branch_two() {
        let d = derive_branches(&ex3()).unwrap();
        let s = construct_solution(&d, Branch::II).unwrap();
        assert_eq!(s.fractional_form.order, 1.0);
        assert!(evaluate_solution(&s, 2.0).unwrap().abs() < 1e-15);
        // 2 e^r (r-2)/r²
        let r = 0.7_f64;
        let want = 2.0 * r.exp() * (r - 2.0) / (r * r);
        assert!((evaluate_solution(&s, r).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn construct_example_one_uses_rewritten_form() {
        let printed = EquationParams::new(5.0, 2.0, 0.0, 2.0, 0).unwrap();
        let d = derive_branches_with_rate(&printed, 5.0).unwrap();
        let s = construct_solution(&d, Branch::I).unwrap();
        assert!(s.rewritten);
        assert!((s.fractional_form.operand.p - 1.2).abs() < 1e-14);
        assert!((s.fractional_form.order + 1.8).abs() < 1e-14);
        let f = s.closed_form.f1f1().unwrap();
        assert!((f.a - 2.2).abs() < 1e-14 && (f.b - 4.0).abs() < 1e-14 && f.scale == -10.0);
        assert!((s.normalization.unwrap() - 0.183_633_748_479_952_122).abs() < 1e-13);
        assert_eq!(s.closed_form.terms()[0].c, 5.0);
        assert!((s.closed_form.terms()[0].p - 2.0).abs() < 1e-14);
    }

    #[test]
    fn unavailable_branch_reports_both_routes() {
        // τ = 3, rate 1, β = 5 gives b = 1/2: both operand powers are ≤ -1
        let ep = EquationParams::new(1.0, 5.0, 0.0, 2.0, 0).unwrap();
        let d = derive_branches(&ep).unwrap();
        let err = construct_solution(&d, Branch::II).unwrap_err();
        match err {
            Error::BranchUnavailable { branch, reason } => {
                assert_eq!(branch, "II");
                assert!(reason.contains("literal") && reason.contains("rewritten"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn branch_parsing() {
        for b in Branch::ALL {
            assert_eq!(b.to_string().parse::<Branch>().unwrap(), b);
        }
        assert!("V".parse::<Branch>().is_err());
    }
}
