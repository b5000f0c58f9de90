//! Randomized identity suite for the nabla fractional sum and difference.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dfc::{
    fractional_difference, fractional_sum, fractional_sum_grid, leibniz_difference, nabla,
    nabla_grid, power_rule, rising_factorial, FractionalOrder, GridFunction,
};
use crate::error::Result;
use crate::special::{binomial_general, gamma};
use crate::verify::{mixed_error, relative_error, Check, Report, Tolerances};

/// Signature of a Leibniz-rule implementation under test.
pub type LeibnizFn = fn(&GridFunction, &GridFunction, f64, i64) -> Result<f64>;

#[derive(Debug, Clone, Copy)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: u32,
    pub tolerances: Tolerances,
    pub leibniz: LeibnizFn,
}

impl SuiteConfig {
    pub fn new(seed: u64, trials: u32) -> Self {
        Self {
            seed,
            trials,
            tolerances: Tolerances::default(),
            leibniz: leibniz_difference,
        }
    }
}

/// Runs every identity `trials` times from `seed` with default tolerances.
pub fn identity_suite(seed: u64, trials: u32) -> Report {
    identity_suite_with(&SuiteConfig::new(seed, trials))
}

struct Identity {
    name: &'static str,
    tolerance: fn(&Tolerances) -> f64,
    /// One randomized trial, returning its error.
    trial: fn(&mut ChaCha8Rng, &SuiteConfig) -> Result<f64>,
}

const IDENTITIES: [Identity; 9] = [
    Identity {
        name: "monomial_derivative",
        tolerance: |t| t.monomial,
        trial: monomial_derivative,
    },
    Identity {
        name: "composition",
        tolerance: |t| t.identity,
        trial: composition,
    },
    Identity {
        name: "linearity",
        tolerance: |t| t.exact,
        trial: linearity,
    },
    Identity {
        name: "sum_then_difference",
        tolerance: |t| t.identity,
        trial: sum_then_difference,
    },
    Identity {
        name: "interchange_initial_term",
        tolerance: |t| t.identity,
        trial: interchange,
    },
    Identity {
        name: "power_rule",
        tolerance: |t| t.identity,
        trial: power_rule_trial,
    },
    Identity {
        name: "shifted_base",
        tolerance: |t| t.identity,
        trial: shifted_base,
    },
    Identity {
        name: "leibniz",
        tolerance: |t| t.identity,
        trial: leibniz,
    },
    Identity {
        name: "integer_collapse",
        tolerance: |t| t.exact,
        trial: integer_collapse,
    },
];

/// Runs the suite under an explicit configuration.
///
/// Every identity draws from its own stream seeded from `seed` and its
/// position, so adding trials to one identity never shifts another.
pub fn identity_suite_with(config: &SuiteConfig) -> Report {
    let mut checks = Vec::with_capacity(IDENTITIES.len());
    for (index, identity) in IDENTITIES.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(index as u64);
        let tol = (identity.tolerance)(&config.tolerances);
        let mut worst = 0.0_f64;
        let mut failure = None;
        for trial in 0..config.trials {
            match (identity.trial)(&mut rng, config) {
                Ok(err) if err.is_nan() => {
                    failure = Some(format!("trial {trial}: NaN error"));
                    break;
                }
                Ok(err) => worst = worst.max(err),
                Err(e) => {
                    failure = Some(format!("trial {trial}: {e}"));
                    break;
                }
            }
        }
        checks.push(match failure {
            Some(detail) => Check::failed(identity.name, tol, detail),
            None => Check::at_most(identity.name, worst, tol),
        });
    }
    Report {
        checks,
        seed: Some(config.seed),
        trials: Some(config.trials),
        notes: Vec::new(),
    }
}

fn random_grid(rng: &mut ChaCha8Rng, base: i64, horizon: i64) -> Result<GridFunction> {
    let values = (base..=horizon).map(|_| rng.gen_range(-5.0..5.0)).collect();
    GridFunction::new(base, values)
}

fn order(nu: f64) -> Result<FractionalOrder> {
    FractionalOrder::new(nu)
}

/// Non-integer order drawn from `(lo, hi)`.
fn non_integer(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    loop {
        let nu: f64 = rng.gen_range(lo..hi);
        if nu > lo && (nu - nu.round()).abs() > 1e-6 {
            return nu;
        }
    }
}

/// `∇ t^(ν) = ν t^(ν−1)` at integer `t`.
fn monomial_derivative(rng: &mut ChaCha8Rng, _: &SuiteConfig) -> Result<f64> {
    let nu = rng.gen_range(0.1..4.0);
    let t = rng.gen_range(2..=10) as f64;
    let lhs = rising_factorial(t, nu)? - rising_factorial(t - 1.0, nu)?;
    let rhs = nu * rising_factorial(t, nu - 1.0)?;
    Ok(relative_error(lhs, rhs))
}

/// `∇^{−ν}∇^{−υ}U = ∇^{−(ν+υ)}U = ∇^{−υ}∇^{−ν}U`, all based at 0.
fn composition(rng: &mut ChaCha8Rng, _: &SuiteConfig) -> Result<f64> {
    let horizon = rng.gen_range(1..=11);
    let u = random_grid(rng, 0, horizon)?;
    let nu = rng.gen_range(0.01..3.0);
    let up = rng.gen_range(0.01..3.0);
    let t = rng.gen_range(0..=horizon);
    let inner_up = fractional_sum_grid(&u, order(up)?)?;
    let inner_nu = fractional_sum_grid(&u, order(nu)?)?;
    let a = fractional_sum(&inner_up, order(nu)?, t)?;
    let b = fractional_sum(&u, order(nu + up)?, t)?;
    let c = fractional_sum(&inner_nu, order(up)?, t)?;
    Ok(mixed_error(a, b).max(mixed_error(c, b)))
}

/// `∇^ν(bU + cY) = b∇^νU + c∇^νY`.
fn linearity(rng: &mut ChaCha8Rng, _: &SuiteConfig) -> Result<f64> {
    let nu = non_integer(rng, 0.0, 3.0);
    let n = nu.ceil() as i64;
    let horizon = rng.gen_range(n..=11);
    let u = random_grid(rng, 0, horizon)?;
    let y = random_grid(rng, 0, horizon)?;
    let b = rng.gen_range(-5.0..5.0);
    let c = rng.gen_range(-5.0..5.0);
    let t = rng.gen_range(n..=horizon);
    let combined = u.zip_with(&y, |x, z| b * x + c * z)?;
    let lhs = fractional_difference(&combined, order(nu)?, t)?;
    let rhs = b * fractional_difference(&u, order(nu)?, t)?
        + c * fractional_difference(&y, order(nu)?, t)?;
    Ok(mixed_error(lhs, rhs))
}

/// `∇∇^{−ν}U(t) = ∇^{−(ν−1)}U(t)` for `ν ∈ (1, 3)`.
fn sum_then_difference(rng: &mut ChaCha8Rng, _: &SuiteConfig) -> Result<f64> {
    let nu = non_integer(rng, 1.0, 3.0);
    let horizon = rng.gen_range(1..=11);
    let u = random_grid(rng, 0, horizon)?;
    let t = rng.gen_range(1..=horizon);
    let lhs = nabla(&fractional_sum_grid(&u, order(nu)?)?, t, 1)?;
    let rhs = fractional_sum(&u, order(nu - 1.0)?, t)?;
    Ok(mixed_error(lhs, rhs))
}

/// `∇_1^{−ν}∇U(t) = ∇_1^{1−ν}U(t) − C(t+ν−2, t−1)·U(0)` for `ν ∈ (0, 1)`.
///
/// `∇U` lives on `N_1`, so both operators are based at 1; the initial value
/// `U(0)` enters only through the correction term.
fn interchange(rng: &mut ChaCha8Rng, _: &SuiteConfig) -> Result<f64> {
    let nu = non_integer(rng, 0.0, 1.0);
    let horizon = rng.gen_range(2..=10);
    let u = random_grid(rng, 0, horizon)?;
    let t = rng.gen_range(2..=horizon);
    let du = nabla_grid(&u)?;
    let lhs = fractional_sum(&du, order(nu)?, t)?;
    let tail = GridFunction::new(1, u.values()[1..].to_vec())?;
    let coeff = binomial_general(t as f64 + nu - 2.0, (t - 1) as u32)?;
    let rhs = fractional_difference(&tail, order(1.0 - nu)?, t)? - coeff * u.get(0)?;
    Ok(mixed_error(lhs, rhs))
}

/// Closed-form power rule against the brute-force sum of `(s−a+1)^(υ)`.
fn power_rule_trial(rng: &mut ChaCha8Rng, _: &SuiteConfig) -> Result<f64> {
    let nu = rng.gen_range(0.01..3.0);
    let up = rng.gen_range(0.0..3.0);
    let a = rng.gen_range(-3..=3);
    let t = a + rng.gen_range(0..=10);
    let u = GridFunction::from_fn(a, t, |s| {
        rising_factorial((s - a + 1) as f64, up).unwrap_or(f64::NAN)
    })?;
    let brute = fractional_sum(&u, order(nu)?, t)?;
    Ok(relative_error(power_rule(nu, up, a, t)?, brute))
}

/// `∇_{a+1}^{−ν}∇U(t) = ∇∇_a^{−ν}U(t) − (t−a+1)^(ν−1)/Γ(ν)·U(a)`.
fn shifted_base(rng: &mut ChaCha8Rng, _: &SuiteConfig) -> Result<f64> {
    let nu = rng.gen_range(0.01..3.0);
    let a = rng.gen_range(-3..=3);
    let horizon = a + rng.gen_range(1..=11);
    let u = random_grid(rng, a, horizon)?;
    let t = rng.gen_range(a + 1..=horizon);
    let lhs = fractional_sum(&nabla_grid(&u)?, order(nu)?, t)?;
    let summed = fractional_sum_grid(&u, order(nu)?)?;
    let correction = rising_factorial((t - a + 1) as f64, nu - 1.0)? / gamma(nu)? * u.get(a)?;
    let rhs = nabla(&summed, t, 1)? - correction;
    Ok(mixed_error(lhs, rhs))
}

/// Leibniz rule against the fractional difference of the pointwise product.
fn leibniz(rng: &mut ChaCha8Rng, config: &SuiteConfig) -> Result<f64> {
    let nu = non_integer(rng, 0.0, 3.0);
    let n = nu.ceil() as i64;
    let horizon = rng.gen_range(n.max(5)..=11);
    let u = random_grid(rng, 0, horizon)?;
    let y = random_grid(rng, 0, horizon)?;
    let t = rng.gen_range(n.max(1)..=horizon);
    let product = u.zip_with(&y, |a, b| a * b)?;
    let direct = fractional_difference(&product, order(nu)?, t)?;
    Ok(mixed_error((config.leibniz)(&u, &y, nu, t)?, direct))
}

/// Integer orders against `∇^{n+1}` of the running sum `∇^{−1}U`.
fn integer_collapse(rng: &mut ChaCha8Rng, _: &SuiteConfig) -> Result<f64> {
    let n = rng.gen_range(1..=3_u32);
    let horizon = rng.gen_range(i64::from(n)..=11);
    let u = random_grid(rng, 0, horizon)?;
    let t = rng.gen_range(i64::from(n)..=horizon);
    let running = fractional_sum_grid(&u, order(1.0)?)?;
    // ∇^{n+1} needs one more point below the base; the running sum is 0 there
    let mut padded = vec![0.0];
    padded.extend_from_slice(running.values());
    let running = GridFunction::new(-1, padded)?;
    let oracle = nabla(&running, t, n + 1)?;
    let value = fractional_difference(&u, order(f64::from(n))?, t)?;
    Ok(mixed_error(value, oracle).max(mixed_error(nabla(&u, t, n)?, oracle)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_and_is_deterministic() {
        let a = identity_suite(7, 20);
        assert!(a.passed(), "{a:#?}");
        assert_eq!(a.checks.len(), 9);
        let b = identity_suite(7, 20);
        assert_eq!(a, b);
    }

    #[test]
    fn single_trial_linearity() {
        let report = identity_suite(1, 1);
        assert!(report.check("linearity").unwrap().pass);
    }

    fn broken_leibniz(u: &GridFunction, y: &GridFunction, nu: f64, t: i64) -> Result<f64> {
        // drops every n ≥ 1 term
        Ok(fractional_difference(u, FractionalOrder::new(nu)?, t)? * y.get(t)?)
    }

    #[test]
    fn broken_leibniz_is_caught() {
        let config = SuiteConfig {
            leibniz: broken_leibniz,
            ..SuiteConfig::new(42, 10)
        };
        let report = identity_suite_with(&config);
        assert!(!report.check("leibniz").unwrap().pass);
        assert!(report.check("composition").unwrap().pass);
    }
}
