use std::fmt::Write as _;

use nabla_dfc::document::SolutionDocument;
use nabla_dfc::solver::FractionalForm;
use nabla_dfc::verify::Report;
use nabla_dfc::{ExpPowerTerm, StructuredFunction};
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// One result in all three output formats.
pub struct Rendered {
    pub json: Value,
    pub csv: String,
    pub text: String,
}

impl Rendered {
    pub fn select(self, format: Format) -> anyhow::Result<String> {
        Ok(match format {
            Format::Json => serde_json::to_string_pretty(&self.json)? + "\n",
            Format::Csv => self.csv,
            Format::Text => self.text,
        })
    }
}

/// A single number with the inputs that produced it.
pub fn scalar(fields: impl Serialize, value: f64) -> anyhow::Result<Rendered> {
    let mut json = serde_json::to_value(fields)?;
    json["value"] = serde_json::json!(value);
    Ok(Rendered {
        json,
        csv: format!("value\n{value:?}\n"),
        text: format!("{value:?}\n"),
    })
}

/// Twelve decimals with trailing zeros and negative zero removed; display only.
fn num(x: f64) -> String {
    let s = format!("{:.12}", x + 0.0);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

pub fn term(t: &ExpPowerTerm) -> String {
    let mut s = num(t.kappa);
    if t.c != 0.0 {
        write!(s, "·e^({}r)", num(t.c)).unwrap();
    }
    if t.p != 0.0 {
        write!(s, "·r^({})", num(t.p)).unwrap();
    }
    s
}

pub fn structured(f: &StructuredFunction) -> String {
    if f.is_zero() {
        return "0".into();
    }
    let sum = f.terms().iter().map(term).collect::<Vec<_>>().join(" + ");
    match f.f1f1() {
        Some(k) => format!("{sum}·1F1({}; {}; {}r)", num(k.a), num(k.b), num(k.scale)),
        None => sum,
    }
}

pub fn fractional_form(f: &FractionalForm) -> String {
    format!(
        "{} · [{}]_({})",
        term(&f.prefactor),
        term(&f.operand),
        num(f.order)
    )
}

pub fn solution(doc: &SolutionDocument) -> anyhow::Result<Rendered> {
    let d = &doc.derivation;
    let k = &d.constants;
    let mut text = String::new();
    writeln!(text, "equation:        {}", doc.equation)?;
    if let Some(rate) = doc.forced_rate {
        writeln!(
            text,
            "forced rate:     {rate} (solved equation {})",
            d.equation
        )?;
    }
    writeln!(
        text,
        "branch:          {} (constant {})",
        doc.branch, doc.arbitrary_constant
    )?;
    writeln!(text, "tau, rate:       {}, {}", d.tau, d.rate)?;
    writeln!(text, "a, b, c, d:      {}, {}, {}, {}", k.a, k.b, k.c, k.d)?;
    writeln!(
        text,
        "literal form:    {}",
        fractional_form(&doc.literal_form)
    )?;
    if doc.rewritten {
        writeln!(
            text,
            "rewritten form:  {}",
            fractional_form(&doc.fractional_form)
        )?;
    }
    writeln!(text, "closed form:     {}", structured(&doc.closed_form))?;
    if let Some(n) = doc.normalization {
        writeln!(text, "normalization:   {n}")?;
    }
    let mut csv = String::from("r,value\n");
    for s in &doc.samples {
        writeln!(csv, "{:?},{:?}", s.r, s.value)?;
    }
    Ok(Rendered {
        json: serde_json::to_value(doc)?,
        csv,
        text,
    })
}

fn error_cell(e: Option<f64>) -> String {
    e.map_or_else(|| "n/a".into(), |v| format!("{v:.3e}"))
}

pub fn report(report: &Report) -> anyhow::Result<Rendered> {
    let mut csv = String::from("name,max_error,tolerance,pass\n");
    let mut text = String::new();
    for c in &report.checks {
        writeln!(
            csv,
            "{},{},{:?},{}",
            c.name,
            c.max_error.map_or(String::new(), |v| format!("{v:?}")),
            c.tolerance,
            c.pass
        )?;
        write!(
            text,
            "{} {:<48} error {:>10}  tol {:.1e}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            error_cell(c.max_error),
            c.tolerance
        )?;
        match &c.detail {
            Some(d) => writeln!(text, "  ({d})")?,
            None => writeln!(text)?,
        }
    }
    for n in &report.notes {
        writeln!(text, "note: {n}")?;
    }
    writeln!(
        text,
        "{}: {} of {} checks passed",
        if report.passed() { "ok" } else { "FAILED" },
        report.checks.iter().filter(|c| c.pass).count(),
        report.checks.len()
    )?;
    Ok(Rendered {
        json: serde_json::to_value(report)?,
        csv,
        text,
    })
}
