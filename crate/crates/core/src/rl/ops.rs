use crate::error::{Error, Result};
use crate::rl::expr::{ExpPowerTerm, KummerFactor, StructuredFunction};
use crate::rl::quadrature::rl_integral_of;
use crate::special::ln_gamma_signed;

/// Relative tolerance the quadrature oracle is driven to.
pub const QUADRATURE_REL_TOL: f64 = 1e-12;

/// Orders this close to an integer (relative) are treated as that integer.
const INTEGER_SNAP: f64 = 1e-12;

pub(crate) fn snap_integer(x: f64) -> Option<i64> {
    let n = x.round();
    ((x - n).abs() <= INTEGER_SNAP * x.abs().max(1.0)).then_some(n as i64)
}

fn gamma_ratio(num: f64, den: f64) -> Result<f64> {
    let (ln_n, s_n) = ln_gamma_signed(num)?;
    let (ln_d, s_d) = ln_gamma_signed(den)?;
    Ok(s_n * s_d * (ln_n - ln_d).exp())
}

/// Order-`μ` Riemann–Liouville integral of `e^{cr}r^p` based at 0, in normal form
///
/// ```text
/// Γ(p+1)/Γ(p+μ+1) · r^{p+μ} · 1F1(p+1; p+μ+1; c r)
/// ```
pub fn rl_exp_power_closed_form(c: f64, p: f64, mu: f64) -> Result<StructuredFunction> {
    if !(p > -1.0) {
        return Err(Error::Integrability { p });
    }
    if !(mu > 0.0) || !mu.is_finite() || !c.is_finite() {
        return Err(Error::Parameter(format!(
            "closed form needs μ > 0, got μ = {mu}, c = {c}"
        )));
    }
    let lower = p + mu + 1.0;
    let kappa = gamma_ratio(p + 1.0, lower)?;
    StructuredFunction::normal_form(
        ExpPowerTerm::new(kappa, 0.0, p + mu),
        KummerFactor::new(p + 1.0, lower, c)?,
    )
}

/// Exact `n`-th derivative of a finite exp-power sum.
pub fn integer_derivative(f: &StructuredFunction, n: u32) -> Result<StructuredFunction> {
    if f.f1f1().is_some() {
        return Err(Error::Parameter(
            "integer_derivative takes a plain exp-power sum; 1F1 normal forms use rl_apply".into(),
        ));
    }
    let mut current = f.clone();
    for _ in 0..n {
        current = StructuredFunction::sum(current.terms().iter().flat_map(|t| t.derivative()));
    }
    Ok(current)
}

/// `n`-fold derivative of a normal form `κ·r^{b-1}·1F1(a; b; s r)` via
/// `d/dr[r^{b-1} 1F1(a;b;sr)] = (b-1)·r^{b-2}·1F1(a; b-1; sr)`, which follows
/// from the contiguous relations of `1F1`.
fn differentiate_normal_form(f: &StructuredFunction, n: u32) -> Result<StructuredFunction> {
    let Some(factor) = f.f1f1().copied() else {
        return integer_derivative(f, n);
    };
    let [term] = f.terms() else {
        return Err(Error::Parameter("malformed 1F1 normal form".into()));
    };
    if term.c != 0.0 || (term.p - (factor.b - 1.0)).abs() > 1e-12 * term.p.abs().max(1.0) {
        return Err(Error::Parameter(format!(
            "normal form r^{} 1F1(·; {}; ·) is not of the shape r^(b-1) 1F1(a; b; sr)",
            term.p, factor.b
        )));
    }
    let (mut kappa, mut b) = (term.kappa, factor.b);
    for _ in 0..n {
        kappa *= b - 1.0;
        b -= 1.0;
        if kappa == 0.0 {
            return Ok(StructuredFunction::zero());
        }
    }
    StructuredFunction::normal_form(
        ExpPowerTerm::new(kappa, 0.0, b - 1.0),
        KummerFactor::new(factor.a, b, factor.scale)?,
    )
}

/// Riemann–Liouville operator of arbitrary real order applied to `κe^{cr}r^p`.
///
/// * negative order `-μ`: the order-`μ` integral in `1F1` normal form,
/// * non-negative integer `n`: the exact `n`-th derivative,
/// * positive non-integer `ν`: `n = ⌈ν⌉` exact derivatives of the
///   `(n-ν)`-order integral.
pub fn rl_apply(f: &ExpPowerTerm, order: f64) -> Result<StructuredFunction> {
    if !order.is_finite() {
        return Err(Error::Order(order));
    }
    if let Some(n) = snap_integer(order) {
        if n >= 0 {
            return integer_derivative(&StructuredFunction::sum([*f]), n as u32);
        }
        return Ok(rl_exp_power_closed_form(f.c, f.p, -(n as f64))?.scaled(f.kappa));
    }
    if order < 0.0 {
        return Ok(rl_exp_power_closed_form(f.c, f.p, -order)?.scaled(f.kappa));
    }
    let n = order.ceil();
    let integral = rl_exp_power_closed_form(f.c, f.p, n - order)?;
    Ok(differentiate_normal_form(&integral, n as u32)?.scaled(f.kappa))
}

/// Order-`μ` Riemann–Liouville integral of `κe^{cs}s^p` at `r` by quadrature.
pub fn rl_integral_quadrature(f: &ExpPowerTerm, mu: f64, r: f64) -> Result<f64> {
    let ExpPowerTerm { kappa, c, p } = *f;
    rl_integral_of(|s| kappa * (c * s).exp(), p, mu, r, QUADRATURE_REL_TOL)
}
