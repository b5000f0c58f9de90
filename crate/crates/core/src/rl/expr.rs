//! The exp-power function algebra `κ·e^{cr}·r^p`, optionally multiplied by a
//! Kummer factor `1F1(a; b; s·r)`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::kummer_1f1;

/// `κ·e^{c r}·r^p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpPowerTerm {
    pub kappa: f64,
    pub c: f64,
    pub p: f64,
}

impl ExpPowerTerm {
    pub fn new(kappa: f64, c: f64, p: f64) -> Self {
        Self { kappa, c, p }
    }

    /// `e^{c r}·r^p` with unit coefficient.
    pub fn unit(c: f64, p: f64) -> Self {
        Self { kappa: 1.0, c, p }
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.kappa * (self.c * r).exp() * r.powf(self.p)
    }

    /// Product of two terms: coefficients multiply, rates and powers add.
    pub fn times(&self, other: &Self) -> Self {
        Self {
            kappa: self.kappa * other.kappa,
            c: self.c + other.c,
            p: self.p + other.p,
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self {
            kappa: self.kappa * k,
            ..*self
        }
    }

    /// `d/dr[κe^{cr}r^p] = κc·e^{cr}r^p + κp·e^{cr}r^{p-1}`.
    pub fn derivative(&self) -> [Self; 2] {
        [
            Self {
                kappa: self.kappa * self.c,
                ..*self
            },
            Self {
                kappa: self.kappa * self.p,
                c: self.c,
                p: self.p - 1.0,
            },
        ]
    }

    fn key_cmp(&self, other: &Self) -> Ordering {
        self.c.total_cmp(&other.c).then(other.p.total_cmp(&self.p))
    }
}

/// A trailing factor `1F1(a; b; scale·r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KummerFactor {
    pub a: f64,
    pub b: f64,
    pub scale: f64,
}

impl KummerFactor {
    pub fn new(a: f64, b: f64, scale: f64) -> Result<Self> {
        if b <= 0.0 && b == b.floor() {
            return Err(Error::Parameter(format!(
                "1F1 lower parameter b = {b} is a non-positive integer"
            )));
        }
        Ok(Self { a, b, scale })
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        kummer_1f1(self.a, self.b, self.scale * r)
    }

    /// The factor appearing in `d/dr 1F1(a;b;sr) = (a s / b)·1F1(a+1; b+1; sr)`.
    fn raised(&self) -> Self {
        Self {
            a: self.a + 1.0,
            b: self.b + 1.0,
            scale: self.scale,
        }
    }
}

#[derive(Deserialize)]
struct RawStructured {
    terms: Vec<ExpPowerTerm>,
    f1f1: Option<KummerFactor>,
}

impl TryFrom<RawStructured> for StructuredFunction {
    type Error = Error;

    fn try_from(raw: RawStructured) -> Result<Self> {
        match raw.f1f1 {
            None => Ok(Self::sum(raw.terms)),
            Some(f) => {
                let [term]: [ExpPowerTerm; 1] = raw.terms.try_into().map_err(|_| {
                    Error::Parameter("a 1F1 normal form carries exactly one term".into())
                })?;
                Self::normal_form(term, KummerFactor::new(f.a, f.b, f.scale)?)
            }
        }
    }
}

/// A finite sum of exp-power terms, or a single term times a `1F1` factor.
///
/// Terms with equal `(c, p)` are merged and zero terms dropped, so equal
/// functions built along different routes compare structurally equal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStructured")]
pub struct StructuredFunction {
    terms: Vec<ExpPowerTerm>,
    f1f1: Option<KummerFactor>,
}

impl StructuredFunction {
    pub fn zero() -> Self {
        Self {
            terms: Vec::new(),
            f1f1: None,
        }
    }

    pub fn sum(terms: impl IntoIterator<Item = ExpPowerTerm>) -> Self {
        let mut merged: Vec<ExpPowerTerm> = Vec::new();
        for t in terms {
            match merged.iter_mut().find(|m| m.c == t.c && m.p == t.p) {
                Some(m) => m.kappa += t.kappa,
                None => merged.push(t),
            }
        }
        merged.retain(|t| t.kappa != 0.0);
        merged.sort_by(|a, b| a.key_cmp(b));
        Self {
            terms: merged,
            f1f1: None,
        }
    }

    /// `κe^{cr}r^p·1F1(a; b; s·r)`; a factor with `s = 0` is dropped since it is 1.
    pub fn normal_form(term: ExpPowerTerm, factor: KummerFactor) -> Result<Self> {
        let factor = KummerFactor::new(factor.a, factor.b, factor.scale)?;
        if factor.scale == 0.0 || term.kappa == 0.0 {
            return Ok(Self::sum([term]));
        }
        Ok(Self {
            terms: vec![term],
            f1f1: Some(factor),
        })
    }

    pub fn terms(&self) -> &[ExpPowerTerm] {
        &self.terms
    }

    pub fn f1f1(&self) -> Option<&KummerFactor> {
        self.f1f1.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Multiplies every term by `e^{cr}r^p` style prefactor.
    pub fn times_term(&self, prefactor: &ExpPowerTerm) -> Self {
        let terms = self.terms.iter().map(|t| t.times(prefactor));
        match self.f1f1 {
            None => Self::sum(terms),
            Some(f) => {
                let terms: Vec<_> = terms.filter(|t| t.kappa != 0.0).collect();
                if terms.is_empty() {
                    Self::zero()
                } else {
                    Self {
                        terms,
                        f1f1: Some(f),
                    }
                }
            }
        }
    }

    pub fn scaled(&self, k: f64) -> Self {
        self.times_term(&ExpPowerTerm::new(k, 0.0, 0.0))
    }

    /// Value at `r > 0`.
    pub fn eval(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Domain {
                function: "structured function",
                at: r,
            });
        }
        let poly: f64 = self.terms.iter().map(|t| t.eval(r)).sum();
        match &self.f1f1 {
            None => Ok(poly),
            Some(f) => Ok(poly * f.eval(r)?),
        }
    }
}

/// One term of a [`HyperSum`]: `κe^{cr}r^p`, optionally times its own `1F1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperTerm {
    pub base: ExpPowerTerm,
    pub f1f1: Option<KummerFactor>,
}

impl HyperTerm {
    fn same_shape(&self, other: &Self) -> bool {
        self.base.c == other.base.c && self.base.p == other.base.p && self.f1f1 == other.f1f1
    }
}

/// Sum of exp-power terms, each with an independent optional `1F1` factor.
///
/// This is the closure of [`StructuredFunction`] under differentiation and is
/// what residual checks differentiate symbolically.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HyperSum {
    terms: Vec<HyperTerm>,
}

impl HyperSum {
    pub fn new(terms: impl IntoIterator<Item = HyperTerm>) -> Self {
        let mut merged: Vec<HyperTerm> = Vec::new();
        for t in terms {
            match merged.iter_mut().find(|m| m.same_shape(&t)) {
                Some(m) => m.base.kappa += t.base.kappa,
                None => merged.push(t),
            }
        }
        merged.retain(|t| t.base.kappa != 0.0);
        Self { terms: merged }
    }

    pub fn terms(&self) -> &[HyperTerm] {
        &self.terms
    }

    /// Exact derivative: product rule on `e^{cr}r^p` together with
    /// `d/dr 1F1(a;b;sr) = (a s/b)·1F1(a+1;b+1;sr)`.
    pub fn derivative(&self) -> Self {
        let mut out = Vec::with_capacity(3 * self.terms.len());
        for t in &self.terms {
            for d in t.base.derivative() {
                out.push(HyperTerm {
                    base: d,
                    f1f1: t.f1f1,
                });
            }
            if let Some(f) = t.f1f1 {
                out.push(HyperTerm {
                    base: t.base.scaled(f.a * f.scale / f.b),
                    f1f1: Some(f.raised()),
                });
            }
        }
        Self::new(out)
    }

    pub fn plus(&self, other: &Self) -> Self {
        Self::new(self.terms.iter().chain(&other.terms).copied())
    }

    pub fn times_term(&self, factor: &ExpPowerTerm) -> Self {
        Self::new(self.terms.iter().map(|t| HyperTerm {
            base: t.base.times(factor),
            f1f1: t.f1f1,
        }))
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::Domain {
                function: "structured function",
                at: r,
            });
        }
        self.terms.iter().try_fold(0.0, |acc, t| {
            let k = match &t.f1f1 {
                Some(f) => f.eval(r)?,
                None => 1.0,
            };
            Ok(acc + t.base.eval(r) * k)
        })
    }
}

impl From<&StructuredFunction> for HyperSum {
    fn from(f: &StructuredFunction) -> Self {
        Self::new(f.terms.iter().map(|&base| HyperTerm { base, f1f1: f.f1f1 }))
    }
}

impl From<ExpPowerTerm> for HyperSum {
    fn from(base: ExpPowerTerm) -> Self {
        Self::new([HyperTerm { base, f1f1: None }])
    }
}
