//! Riemann–Liouville integrals by Gauss–Jacobi quadrature.
//!
//! With `s = r·u` the order-`μ` integral of `s^p·g(s)` becomes
//!
//! ```text
//! r^{p+μ}/Γ(μ) ∫_0^1 (1-u)^{μ-1} u^p g(r u) du
//! ```
//!
//! The end panels carry the algebraic singularities as Jacobi weights
//! (`u^p` at 0, `(1-u)^{μ-1}` at 1); interior panels are Gauss–Legendre.
//! Panels whose 24- and 48-point estimates disagree are bisected.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::special::{gamma, log_gamma};

const COARSE_NODES: usize = 24;
const FINE_NODES: usize = 48;
const MAX_PANELS: usize = 4000;
const MIN_PANEL_WIDTH: f64 = 1e-10;

/// Nodes and weights for `∫_{-1}^{1} (1-x)^α (1+x)^β f(x) dx`.
#[derive(Debug, Clone)]
pub struct GaussJacobi {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussJacobi {
    /// Golub–Welsch: eigen-decomposition of the Jacobi matrix of the
    /// three-term recurrence.
    pub fn new(n: usize, alpha: f64, beta: f64) -> Result<Self> {
        if n == 0 || !(alpha > -1.0) || !(beta > -1.0) {
            return Err(Error::Parameter(format!(
                "Gauss-Jacobi rule needs n > 0, α, β > -1 (got n={n}, α={alpha}, β={beta})"
            )));
        }
        let ab = alpha + beta;
        let mut jacobi = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            let kf = k as f64;
            jacobi[(k, k)] = if k == 0 {
                (beta - alpha) / (ab + 2.0)
            } else {
                (beta * beta - alpha * alpha) / ((2.0 * kf + ab) * (2.0 * kf + ab + 2.0))
            };
            if k + 1 < n {
                let j = kf + 1.0;
                let off_sq = if k == 0 {
                    4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
                } else {
                    4.0 * j * (j + alpha) * (j + beta) * (j + ab)
                        / ((2.0 * j + ab).powi(2) * (2.0 * j + ab + 1.0) * (2.0 * j + ab - 1.0))
                };
                let off = off_sq.sqrt();
                jacobi[(k, k + 1)] = off;
                jacobi[(k + 1, k)] = off;
            }
        }
        let ln_mu0 =
            (ab + 1.0) * std::f64::consts::LN_2 + log_gamma(alpha + 1.0)? + log_gamma(beta + 1.0)?
                - log_gamma(ab + 2.0)?;
        let mu0 = ln_mu0.exp();
        let eig = SymmetricEigen::new(jacobi);
        let mut pairs: Vec<(f64, f64)> = (0..n)
            .map(|i| (eig.eigenvalues[i], mu0 * eig.eigenvectors[(0, i)].powi(2)))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (nodes, weights) = pairs.into_iter().unzip();
        Ok(Self { nodes, weights })
    }
}

#[derive(Debug, Clone, Copy)]
enum PanelKind {
    /// `[0, h]`, weight `u^p`.
    Left,
    /// `[1-h, 1]`, weight `(1-u)^{μ-1}`.
    Right,
    Interior,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    kind: PanelKind,
}

struct Rules {
    left: [GaussJacobi; 2],
    right: [GaussJacobi; 2],
    interior: [GaussJacobi; 2],
}

impl Rules {
    fn new(p: f64, mu: f64) -> Result<Self> {
        let pair = |a, b| -> Result<[GaussJacobi; 2]> {
            Ok([
                GaussJacobi::new(COARSE_NODES, a, b)?,
                GaussJacobi::new(FINE_NODES, a, b)?,
            ])
        };
        Ok(Self {
            left: pair(0.0, p)?,
            right: pair(mu - 1.0, 0.0)?,
            interior: pair(0.0, 0.0)?,
        })
    }
}

/// `(estimate, Σ|w f|)` for one rule on one panel.
fn apply_rule(
    panel: &Panel,
    rule: &GaussJacobi,
    p: f64,
    mu: f64,
    integrand: &dyn Fn(f64) -> f64,
) -> (f64, f64) {
    let half = 0.5 * (panel.hi - panel.lo);
    let mid = 0.5 * (panel.hi + panel.lo);
    let mut sum = 0.0;
    let mut abs = 0.0;
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let u = mid + half * x;
        let f = match panel.kind {
            PanelKind::Left => (1.0 - u).powf(mu - 1.0) * integrand(u),
            PanelKind::Right => u.powf(p) * integrand(u),
            PanelKind::Interior => u.powf(p) * (1.0 - u).powf(mu - 1.0) * integrand(u),
        };
        sum += w * f;
        abs += w * f.abs();
    }
    let jac = match panel.kind {
        PanelKind::Left => half.powf(p + 1.0),
        PanelKind::Right => half.powf(mu),
        PanelKind::Interior => half,
    };
    (sum * jac, abs * jac)
}

fn split(panel: Panel) -> [Panel; 2] {
    let mid = 0.5 * (panel.lo + panel.hi);
    match panel.kind {
        PanelKind::Left => [
            Panel {
                lo: panel.lo,
                hi: mid,
                kind: PanelKind::Left,
            },
            Panel {
                lo: mid,
                hi: panel.hi,
                kind: PanelKind::Interior,
            },
        ],
        PanelKind::Right => [
            Panel {
                lo: panel.lo,
                hi: mid,
                kind: PanelKind::Interior,
            },
            Panel {
                lo: mid,
                hi: panel.hi,
                kind: PanelKind::Right,
            },
        ],
        PanelKind::Interior => [
            Panel {
                lo: panel.lo,
                hi: mid,
                kind: PanelKind::Interior,
            },
            Panel {
                lo: mid,
                hi: panel.hi,
                kind: PanelKind::Interior,
            },
        ],
    }
}

/// `(1/Γ(μ)) ∫_0^r (r-s)^{μ-1} s^p g(s) ds` for smooth `g`, `p > -1`, `μ > 0`.
///
/// `rel_tol` bounds the per-panel disagreement between the two rules relative
/// to the panel's `∫|integrand|`.
pub fn rl_integral_of(
    g: impl Fn(f64) -> f64,
    p: f64,
    mu: f64,
    r: f64,
    rel_tol: f64,
) -> Result<f64> {
    if !(p > -1.0) {
        return Err(Error::Integrability { p });
    }
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::Order(-mu));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain {
            function: "rl_integral",
            at: r,
        });
    }
    let rules = Rules::new(p, mu)?;
    let integrand = |u: f64| g(r * u);
    let mut stack = vec![
        Panel {
            lo: 0.0,
            hi: 0.5,
            kind: PanelKind::Left,
        },
        Panel {
            lo: 0.5,
            hi: 1.0,
            kind: PanelKind::Right,
        },
    ];
    let mut total = 0.0;
    let mut processed = 0usize;
    while let Some(panel) = stack.pop() {
        processed += 1;
        if processed > MAX_PANELS {
            return Err(Error::Convergence {
                what: "Riemann-Liouville quadrature",
                detail: format!("more than {MAX_PANELS} panels (p={p}, μ={mu}, r={r})"),
            });
        }
        let rule_pair = match panel.kind {
            PanelKind::Left => &rules.left,
            PanelKind::Right => &rules.right,
            PanelKind::Interior => &rules.interior,
        };
        let (coarse, _) = apply_rule(&panel, &rule_pair[0], p, mu, &integrand);
        let (fine, fine_abs) = apply_rule(&panel, &rule_pair[1], p, mu, &integrand);
        if !fine.is_finite() {
            return Err(Error::Convergence {
                what: "Riemann-Liouville quadrature",
                detail: format!("non-finite integrand on [{}, {}]", panel.lo, panel.hi),
            });
        }
        if (fine - coarse).abs() <= rel_tol * fine_abs || fine_abs == 0.0 {
            total += fine;
        } else if panel.hi - panel.lo < MIN_PANEL_WIDTH {
            return Err(Error::Convergence {
                what: "Riemann-Liouville quadrature",
                detail: format!("panel [{}, {}] failed to converge", panel.lo, panel.hi),
            });
        } else {
            stack.extend(split(panel));
        }
    }
    Ok(r.powf(p + mu) / gamma(mu)? * total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_integrates_polynomials() {
        let rule = GaussJacobi::new(5, 0.0, 0.0).unwrap();
        let i: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(x, w)| w * x.powi(8))
            .sum();
        assert!((i - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_weights_sum_to_moment() {
        // ∫(1-x)^α(1+x)^β dx = 2^{α+β+1} B(α+1, β+1)
        let (a, b) = (0.8, -0.6);
        let rule = GaussJacobi::new(12, a, b).unwrap();
        let m: f64 = rule.weights.iter().sum();
        let expected = 2f64.powf(a + b + 1.0) * gamma(a + 1.0).unwrap() * gamma(b + 1.0).unwrap()
            / gamma(a + b + 2.0).unwrap();
        assert!((m - expected).abs() < 1e-13);
    }

    #[test]
    fn power_function_integral() {
        // I^μ s^p = Γ(p+1)/Γ(p+μ+1) r^{p+μ}
        for (p, mu, r) in [(1.0, 0.5, 1.0), (-0.5, 1.7, 2.0), (2.3, 0.2, 0.7)] {
            let q = rl_integral_of(|_| 1.0, p, mu, r, 1e-12).unwrap();
            let exact = gamma(p + 1.0).unwrap() / gamma(p + mu + 1.0).unwrap() * r.powf(p + mu);
            assert!((q - exact).abs() < 1e-13 * exact, "p={p} μ={mu}");
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(
            rl_integral_of(|_| 1.0, -1.0, 1.0, 1.0, 1e-12),
            Err(Error::Integrability { .. })
        ));
        assert!(rl_integral_of(|_| 1.0, 0.0, 0.0, 1.0, 1e-12).is_err());
        assert!(rl_integral_of(|_| 1.0, 0.0, 1.0, 0.0, 1e-12).is_err());
    }
}
