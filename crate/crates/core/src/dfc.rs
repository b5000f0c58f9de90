//! Nabla (backward) discrete fractional calculus on `N_a = {a, a+1, …}`.
//!
//! Fractional sums follow the Riemann–Liouville nabla convention
//!
//! ```text
//! ∇_a^{-ν} U(t) = Σ_{s=a}^{t} (t - s + 1)^{(ν-1) rising} / Γ(ν) · U(s)
//! ```
//!
//! and fractional differences apply `∇^n` to the `(n-ν)`-order sum, with
//! `n = ⌈ν⌉`. Every operator needs the full history `[a, t]`; asking for a
//! point outside the stored grid is a [`Error::Range`], never a silent zero.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{binomial_general, gamma, ln_gamma_signed};

/// A real function sampled on the integer ray `base, base+1, …, horizon`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawGrid")]
pub struct GridFunction {
    base: i64,
    values: Vec<f64>,
}

#[derive(Deserialize)]
struct RawGrid {
    base: i64,
    values: Vec<f64>,
}

impl TryFrom<RawGrid> for GridFunction {
    type Error = Error;

    fn try_from(raw: RawGrid) -> Result<Self> {
        Self::new(raw.base, raw.values)
    }
}

impl GridFunction {
    /// `values[k]` is the value at `base + k`.
    pub fn new(base: i64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Parameter(
                "grid function needs at least one value".into(),
            ));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::Parameter(format!(
                "grid function value {v} is not finite"
            )));
        }
        Ok(Self { base, values })
    }

    pub fn from_fn(base: i64, horizon: i64, f: impl Fn(i64) -> f64) -> Result<Self> {
        if horizon < base {
            return Err(Error::Parameter(format!(
                "horizon {horizon} precedes base {base}"
            )));
        }
        Self::new(base, (base..=horizon).map(f).collect())
    }

    pub fn constant(base: i64, horizon: i64, value: f64) -> Result<Self> {
        Self::from_fn(base, horizon, |_| value)
    }

    pub fn base(&self) -> i64 {
        self.base
    }

    pub fn horizon(&self) -> i64 {
        self.base + self.values.len() as i64 - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn contains(&self, t: i64) -> bool {
        t >= self.base && t <= self.horizon()
    }

    pub fn get(&self, t: i64) -> Result<f64> {
        if !self.contains(t) {
            return Err(self.range_error(t));
        }
        Ok(self.values[(t - self.base) as usize])
    }

    /// Iterates `(t, U(t))` pairs in ascending `t`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.values
            .iter()
            .enumerate()
            .map(move |(k, &v)| (self.base + k as i64, v))
    }

    /// Pointwise combination of two functions on the same grid.
    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        if self.base != other.base || self.values.len() != other.values.len() {
            return Err(Error::Parameter(format!(
                "grid mismatch: [{}, {}] vs [{}, {}]",
                self.base,
                self.horizon(),
                other.base,
                other.horizon()
            )));
        }
        Self::new(
            self.base,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    /// Restriction to `[base, horizon]`.
    pub fn truncate(&self, horizon: i64) -> Result<Self> {
        if !self.contains(horizon) {
            return Err(self.range_error(horizon));
        }
        Self::new(
            self.base,
            self.values[..=(horizon - self.base) as usize].to_vec(),
        )
    }

    fn range_error(&self, t: i64) -> Error {
        Error::Range {
            t,
            base: self.base,
            horizon: self.horizon(),
        }
    }
}

/// A strictly positive order `ν` of a fractional sum or difference.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct FractionalOrder(f64);

impl FractionalOrder {
    pub fn new(nu: f64) -> Result<Self> {
        if nu.is_finite() && nu > 0.0 {
            Ok(Self(nu))
        } else {
            Err(Error::Order(nu))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `n = ⌈ν⌉`, so that `n - 1 < ν <= n`.
    pub fn ceiling(self) -> u32 {
        self.0.ceil() as u32
    }

    pub fn is_integer(self) -> bool {
        self.0 == self.0.floor()
    }
}

impl TryFrom<f64> for FractionalOrder {
    type Error = Error;

    fn try_from(nu: f64) -> Result<Self> {
        Self::new(nu)
    }
}

impl From<FractionalOrder> for f64 {
    fn from(o: FractionalOrder) -> f64 {
        o.0
    }
}

/// Rising factorial power `t^(ν rising) = Γ(t+ν)/Γ(t)`, with `0^(ν) = 0`
/// and `t^(0) = 1`.
///
/// Small non-negative integer orders use the finite product; everything else
/// goes through signed log-gamma differences so that `t + ν > 171` does not
/// overflow an intermediate.
pub fn rising_factorial(t: f64, nu: f64) -> Result<f64> {
    if !t.is_finite() || !nu.is_finite() {
        return Err(Error::Parameter(format!("rising factorial of {t} to {nu}")));
    }
    if nu == 0.0 {
        return Ok(1.0);
    }
    if t == 0.0 {
        return Ok(0.0);
    }
    if t < 0.0 && t == t.floor() {
        return Err(Error::Pole {
            function: "rising_factorial",
            at: t,
        });
    }
    if nu > 0.0 && nu == nu.floor() && nu <= 64.0 {
        return Ok((0..nu as u32).fold(1.0, |acc, k| acc * (t + f64::from(k))));
    }
    let top = t + nu;
    if top <= 0.0 && top == top.floor() {
        return Err(Error::Pole {
            function: "rising_factorial",
            at: top,
        });
    }
    let (ln_top, sign_top) = ln_gamma_signed(top)?;
    let (ln_bottom, sign_bottom) = ln_gamma_signed(t)?;
    let value = sign_top * sign_bottom * (ln_top - ln_bottom).exp();
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow {
            function: "rising_factorial",
            at: t,
        })
    }
}

/// Applies `n` backward differences to `window`, which holds a function at
/// `t-n, …, t` in ascending order, and returns the value at `t`.
fn backward_difference(mut window: Vec<f64>) -> f64 {
    let n = window.len() - 1;
    for level in 0..n {
        for k in (level + 1..=n).rev() {
            window[k] -= window[k - 1];
        }
    }
    window[n]
}

/// `∇ⁿU(t)` with `∇U(t) = U(t) - U(t-1)`; `n = 0` is the identity.
pub fn nabla(u: &GridFunction, t: i64, n: u32) -> Result<f64> {
    let first = t - i64::from(n);
    if !u.contains(first) || !u.contains(t) {
        return Err(Error::Range {
            t: first.min(t),
            base: u.base(),
            horizon: u.horizon(),
        });
    }
    let window = (first..=t).map(|s| u.get(s)).collect::<Result<Vec<_>>>()?;
    Ok(backward_difference(window))
}

/// The first backward difference as a function on `N_{a+1}`.
pub fn nabla_grid(u: &GridFunction) -> Result<GridFunction> {
    if u.horizon() == u.base() {
        return Err(Error::Range {
            t: u.base() - 1,
            base: u.base(),
            horizon: u.horizon(),
        });
    }
    GridFunction::new(
        u.base() + 1,
        u.values().windows(2).map(|w| w[1] - w[0]).collect(),
    )
}

/// Shift operator `EⁿU(t) = U(t+n)`; negative `n` shifts backwards.
pub fn shift(u: &GridFunction, t: i64, n: i64) -> Result<f64> {
    u.get(t + n)
}

/// Kernel `(m)^((ν-1) rising) / Γ(ν)` for `m = 1..=len`.
fn sum_kernel(nu: f64, len: usize) -> Result<Vec<f64>> {
    let g = gamma(nu)?;
    (1..=len)
        .map(|m| Ok(rising_factorial(m as f64, nu - 1.0)? / g))
        .collect()
}

/// `∇_a^{-ν}U(t)`, the `ν`-th order nabla fractional sum based at `U.base()`.
pub fn fractional_sum(u: &GridFunction, nu: FractionalOrder, t: i64) -> Result<f64> {
    if !u.contains(t) {
        return Err(Error::Range {
            t,
            base: u.base(),
            horizon: u.horizon(),
        });
    }
    let len = (t - u.base() + 1) as usize;
    let kernel = sum_kernel(nu.value(), len)?;
    // s runs from a to t, so t - s + 1 runs from len down to 1
    Ok(u.values()[..len]
        .iter()
        .zip(kernel.iter().rev())
        .map(|(v, k)| v * k)
        .sum())
}

/// The fractional sum evaluated on the whole grid of `u`.
pub fn fractional_sum_grid(u: &GridFunction, nu: FractionalOrder) -> Result<GridFunction> {
    let kernel = sum_kernel(nu.value(), u.values().len())?;
    let values = (0..u.values().len())
        .map(|j| {
            u.values()[..=j]
                .iter()
                .zip(kernel[..=j].iter().rev())
                .map(|(v, k)| v * k)
                .sum()
        })
        .collect();
    GridFunction::new(u.base(), values)
}

/// `∇_a^{ν}U(t) = ∇ⁿ ∇_a^{-(n-ν)} U(t)` with `n = ⌈ν⌉`.
///
/// Integer orders reduce to [`nabla`] exactly.
pub fn fractional_difference(u: &GridFunction, nu: FractionalOrder, t: i64) -> Result<f64> {
    let n = nu.ceiling();
    if nu.is_integer() {
        return nabla(u, t, n);
    }
    let first = t - i64::from(n);
    if first < u.base() || t > u.horizon() {
        return Err(Error::Range {
            t: first.min(t),
            base: u.base(),
            horizon: u.horizon(),
        });
    }
    let complement = FractionalOrder::new(f64::from(n) - nu.value())?;
    let window = (first..=t)
        .map(|s| fractional_sum(u, complement, s))
        .collect::<Result<Vec<_>>>()?;
    Ok(backward_difference(window))
}

/// `∇_a^{order}U(t)` for any real order: a difference for positive orders,
/// a sum of order `-order` for negative ones and the identity at zero.
pub fn fractional_operator(u: &GridFunction, order: f64, t: i64) -> Result<f64> {
    if !order.is_finite() {
        return Err(Error::Order(order));
    }
    if order == 0.0 {
        u.get(t)
    } else if order > 0.0 {
        fractional_difference(u, FractionalOrder::new(order)?, t)
    } else {
        fractional_sum(u, FractionalOrder::new(-order)?, t)
    }
}

/// Closed form of `∇_a^{-ν}(t-a+1)^(υ rising)`:
/// `Γ(υ+1)/Γ(ν+υ+1) · (t-a+1)^((ν+υ) rising)`.
pub fn power_rule(nu: f64, upsilon: f64, a: i64, t: i64) -> Result<f64> {
    if !(nu > 0.0) {
        return Err(Error::Order(nu));
    }
    if t < a {
        return Err(Error::Range {
            t,
            base: a,
            horizon: i64::MAX,
        });
    }
    let (ln_num, s_num) = ln_gamma_signed(upsilon + 1.0)?;
    let (ln_den, s_den) = ln_gamma_signed(nu + upsilon + 1.0)?;
    let ratio = s_num * s_den * (ln_num - ln_den).exp();
    Ok(ratio * rising_factorial((t - a + 1) as f64, nu + upsilon)?)
}

/// Fractional difference of a product through the nabla Leibniz rule
///
/// ```text
/// ∇_0^ν(UY)(t) = Σ_{n=0}^{t} C(ν, n) · [∇_0^{ν-n}U(t-n)] · [∇ⁿY(t)]
/// ```
///
/// Terms with `ν - n < 0` are fractional sums of order `n - ν`, and order zero
/// is the identity. Both factors must be based at 0.
pub fn leibniz_difference(u: &GridFunction, y: &GridFunction, nu: f64, t: i64) -> Result<f64> {
    if !(nu > 0.0) || !nu.is_finite() {
        return Err(Error::Order(nu));
    }
    for f in [u, y] {
        if f.base() != 0 {
            return Err(Error::Parameter(format!(
                "Leibniz rule needs functions on N_0, got base {}",
                f.base()
            )));
        }
    }
    if t < 1 {
        return Err(Error::Range {
            t,
            base: 1,
            horizon: u.horizon().min(y.horizon()),
        });
    }
    let mut total = 0.0;
    for n in 0..=t as u32 {
        let coeff = binomial_general(nu, n)?;
        if coeff == 0.0 {
            continue;
        }
        let shifted = fractional_operator(u, nu - f64::from(n), t - i64::from(n))?;
        total += coeff * shifted * nabla(y, t, n)?;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn squares() -> GridFunction {
        GridFunction::new(0, vec![1.0, 4.0, 9.0]).unwrap()
    }

    fn order(nu: f64) -> FractionalOrder {
        FractionalOrder::new(nu).unwrap()
    }

    #[test]
    fn grid_function_invariants() {
        let u = squares();
        assert_eq!(u.horizon(), 2);
        assert_eq!(u.get(1).unwrap(), 4.0);
        assert!(matches!(
            u.get(3),
            Err(Error::Range {
                t: 3,
                base: 0,
                horizon: 2
            })
        ));
        assert!(matches!(u.get(-1), Err(Error::Range { .. })));
        assert!(GridFunction::new(0, vec![]).is_err());
        assert!(GridFunction::new(0, vec![f64::NAN]).is_err());
    }

    #[test]
    fn rising_factorial_cases() {
        assert_eq!(rising_factorial(3.0, 0.0).unwrap(), 1.0);
        assert_eq!(rising_factorial(1.0, 4.0).unwrap(), 24.0);
        assert_eq!(rising_factorial(0.0, 2.5).unwrap(), 0.0);
        let v = rising_factorial(2.0, 0.5).unwrap();
        assert!((v - 1.329_340_388_179_137_020_5).abs() < 1e-14);
        assert!(matches!(
            rising_factorial(-2.0, 0.5),
            Err(Error::Pole { .. })
        ));
        assert!(matches!(
            rising_factorial(0.5, -1.5),
            Err(Error::Pole { .. })
        ));
        // no overflow for large arguments: Γ(300.5)/Γ(300) ~ sqrt(300)
        let big = rising_factorial(300.0, 0.5).unwrap();
        assert!((big / 300f64.sqrt() - 1.0).abs() < 1e-3);
    }

    #[test]
    fn nabla_cases() {
        let u = squares();
        assert_eq!(nabla(&u, 2, 1).unwrap(), 5.0);
        assert_eq!(nabla(&u, 2, 0).unwrap(), 9.0);
        assert_eq!(nabla(&u, 2, 2).unwrap(), 2.0);
        assert!(matches!(nabla(&u, 1, 2), Err(Error::Range { .. })));
    }

    #[test]
    fn shift_cases() {
        let u = squares();
        assert_eq!(shift(&u, 0, 2).unwrap(), 9.0);
        assert_eq!(shift(&u, 1, 0).unwrap(), 4.0);
        assert_eq!(shift(&u, 2, -1).unwrap(), 4.0);
        assert!(shift(&u, 2, 1).is_err());
    }

    #[test]
    fn fractional_sum_cases() {
        let ones = GridFunction::constant(0, 5, 1.0).unwrap();
        assert!((fractional_sum(&ones, order(1.0), 3).unwrap() - 4.0).abs() < 1e-14);
        assert!((fractional_sum(&ones, order(0.5), 2).unwrap() - 1.875).abs() < 1e-13);
        let rising = GridFunction::from_fn(0, 4, |t| (t + 1) as f64).unwrap();
        assert!((fractional_sum(&rising, order(1.0), 2).unwrap() - 6.0).abs() < 1e-13);
        assert!(fractional_sum(&ones, order(0.5), 6).is_err());
        assert!(FractionalOrder::new(0.0).is_err());
        assert!(FractionalOrder::new(-0.3).is_err());
    }

    #[test]
    fn fractional_sum_grid_matches_pointwise() {
        let u = GridFunction::new(2, vec![0.3, -1.2, 2.5, 0.7, -0.4]).unwrap();
        let g = fractional_sum_grid(&u, order(1.3)).unwrap();
        for (t, v) in g.iter() {
            assert!((v - fractional_sum(&u, order(1.3), t).unwrap()).abs() < 1e-14);
        }
    }

    #[test]
    fn fractional_difference_cases() {
        let ones = GridFunction::constant(0, 5, 1.0).unwrap();
        assert!(fractional_difference(&ones, order(1.0), 2).unwrap().abs() < 1e-15);
        assert!((fractional_difference(&ones, order(0.5), 2).unwrap() - 0.375).abs() < 1e-13);
        assert_eq!(
            fractional_difference(&squares(), order(2.0), 2).unwrap(),
            2.0
        );
        assert!(matches!(
            fractional_difference(&ones, order(1.5), 1),
            Err(Error::Range { .. })
        ));
    }

    #[test]
    fn fractional_operator_dispatch() {
        let u = squares();
        assert_eq!(fractional_operator(&u, 0.0, 1).unwrap(), 4.0);
        assert_eq!(
            fractional_operator(&u, -0.5, 2).unwrap(),
            fractional_sum(&u, order(0.5), 2).unwrap()
        );
        assert_eq!(
            fractional_operator(&u, 0.5, 2).unwrap(),
            fractional_difference(&u, order(0.5), 2).unwrap()
        );
    }

    #[test]
    fn power_rule_cases() {
        assert!((power_rule(0.5, 0.0, 0, 2).unwrap() - 1.875).abs() < 1e-13);
        assert!((power_rule(1.0, 1.0, 0, 2).unwrap() - 6.0).abs() < 1e-13);
        assert!((power_rule(1.0, 0.0, 0, 0).unwrap() - 1.0).abs() < 1e-14);
        assert!(power_rule(0.0, 1.0, 0, 2).is_err());
        assert!(power_rule(0.5, 1.0, 3, 2).is_err());
    }

    #[test]
    fn leibniz_cases() {
        let u = GridFunction::new(0, vec![0.2, -1.0, 0.7, 1.4]).unwrap();
        let ones = GridFunction::constant(0, 3, 1.0).unwrap();
        let l = leibniz_difference(&u, &ones, 0.5, 2).unwrap();
        assert!((l - fractional_difference(&u, order(0.5), 2).unwrap()).abs() < 1e-14);

        let id = GridFunction::from_fn(0, 3, |t| t as f64).unwrap();
        assert!((leibniz_difference(&id, &id, 1.0, 2).unwrap() - 3.0).abs() < 1e-14);

        let shifted = GridFunction::new(1, vec![1.0, 2.0]).unwrap();
        assert!(leibniz_difference(&shifted, &shifted, 0.5, 1).is_err());
        assert!(leibniz_difference(&u, &ones, 0.0, 2).is_err());
    }
}
