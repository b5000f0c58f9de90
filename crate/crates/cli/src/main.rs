//! Command-line front end for the nabla-dfc library.

mod input;
mod output;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use nabla_dfc::dfc::{fractional_difference, fractional_sum, leibniz_difference};
use nabla_dfc::document::SolutionDocument;
use nabla_dfc::rl::{rl_exp_power_closed_form, rl_integral_quadrature};
use nabla_dfc::solver::map_physical;
use nabla_dfc::special::{binomial_general, gamma, kummer_1f1, log_gamma};
use nabla_dfc::verify::{
    identity_suite_with, verify_example, verify_solution, Report, SuiteConfig, Tolerances,
    DEFAULT_GRID,
};
use nabla_dfc::{
    Branch, EquationParams, ExpPowerTerm, FractionalOrder, GridFunction, PhysicalParams,
};
use serde_json::json;

use crate::output::{Format, Rendered};

#[derive(Parser)]
#[command(
    name = "nabla-dfc",
    version,
    about = "Nabla fractional calculus and radial Schrödinger solutions"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,

    /// Write the result here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gamma, log-gamma, generalized binomial and Kummer 1F1.
    #[command(subcommand)]
    Special(Special),
    /// Nabla fractional sums and differences of a grid function.
    #[command(subcommand)]
    Dfc(Dfc),
    /// Riemann–Liouville integral of e^{cr} r^p.
    #[command(subcommand)]
    Rl(Rl),
    /// Derive and construct a particular solution of the radial equation.
    Solve(SolveArgs),
    /// Verify a worked example, a solution document or the identity suite.
    Verify(VerifyArgs),
}

#[derive(Subcommand)]
enum Special {
    #[command(allow_negative_numbers = true)]
    Gamma { x: f64 },
    #[command(allow_negative_numbers = true)]
    Lgamma { x: f64 },
    /// Generalized binomial coefficient C(nu, n).
    #[command(allow_negative_numbers = true)]
    Binom { nu: f64, n: u32 },
    /// Kummer's confluent hypergeometric function 1F1(a; b; z).
    #[command(name = "1f1", allow_negative_numbers = true)]
    Kummer { a: f64, b: f64, z: f64 },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Grid function file: CSV with header `t,value`, or JSON `{"base", "values"}`.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Constant function on [base, t].
    #[arg(long = "const")]
    constant: Option<f64>,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SecondSource {
    /// Second factor for the Leibniz rule, as for --input.
    #[arg(long)]
    input_y: Option<PathBuf>,
    /// Second factor as a constant.
    #[arg(long = "const-y")]
    constant_y: Option<f64>,
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct DfcArgs {
    #[arg(long)]
    nu: f64,
    /// Base point a; defaults to the input's first t, or 0 with --const.
    #[arg(long)]
    base: Option<i64>,
    #[arg(long)]
    t: i64,
    #[command(flatten)]
    source: Source,
}

#[derive(Subcommand)]
enum Dfc {
    /// Fractional sum of order nu.
    Sum(DfcArgs),
    /// Fractional difference of order nu.
    Diff(DfcArgs),
    /// Fractional difference of a product by the Leibniz rule.
    Leibniz {
        #[command(flatten)]
        common: DfcArgs,
        #[command(flatten)]
        second: SecondSource,
    },
}

#[derive(Subcommand)]
enum Rl {
    /// Integral of order mu at r, via the 1F1 closed form or quadrature.
    #[command(allow_negative_numbers = true)]
    Integrate {
        #[arg(long)]
        c: f64,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        mu: f64,
        #[arg(long)]
        r: f64,
        /// Use adaptive Gauss–Jacobi quadrature instead of the closed form.
        #[arg(long)]
        quadrature: bool,
    },
}

#[derive(Args)]
#[command(allow_negative_numbers = true)]
struct SolveArgs {
    #[arg(long, value_parser = parse_branch)]
    branch: Branch,
    #[arg(long, value_parser = parse_rho)]
    rho: i32,
    #[arg(long, required_unless_present = "physical")]
    alpha_sq: Option<f64>,
    #[arg(long, required_unless_present = "physical")]
    beta: Option<f64>,
    #[arg(long, required_unless_present = "physical")]
    gamma: Option<f64>,
    #[arg(long, required_unless_present = "physical")]
    delta: Option<f64>,
    /// Use this exponential rate instead of the square root of the r² coefficient.
    #[arg(long = "rate")]
    forced_rate: Option<f64>,
    /// Sample grid `start:stop:n` for the closed-form values.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<GridSpec>,
    /// Take the coefficients from physical constants instead.
    #[arg(long, conflicts_with_all = ["alpha_sq", "beta", "gamma", "delta"],
          requires_all = ["m", "hbar", "epsilon", "a", "b", "c", "ell"])]
    physical: bool,
    #[arg(long, requires = "physical")]
    m: Option<f64>,
    #[arg(long, requires = "physical")]
    hbar: Option<f64>,
    #[arg(long, requires = "physical")]
    epsilon: Option<f64>,
    #[arg(long, requires = "physical")]
    a: Option<f64>,
    #[arg(long, requires = "physical")]
    b: Option<f64>,
    #[arg(long, requires = "physical")]
    c: Option<f64>,
    #[arg(long, requires = "physical")]
    ell: Option<u32>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Worked example to reproduce.
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3), conflicts_with = "solution")]
    example: Option<u8>,
    /// Solution document written by `solve`.
    #[arg(long)]
    solution: Option<PathBuf>,
    /// Residual grid `start:stop:n`.
    #[arg(long, value_parser = parse_grid)]
    grid: Option<GridSpec>,
    /// Seed of the identity suite (default 42).
    #[arg(long)]
    seed: Option<u64>,
    /// Trials per identity (default 200).
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    trials: Option<u32>,
}

fn parse_branch(s: &str) -> Result<Branch, String> {
    s.parse().map_err(|e: nabla_dfc::Error| e.to_string())
}

fn parse_rho(s: &str) -> Result<i32, String> {
    match s.parse::<i32>() {
        Ok(rho @ (0 | -1 | -2)) => Ok(rho),
        _ => Err(format!("rho must be 0, -1 or -2, got {s:?}")),
    }
}

/// Points parsed from `start:stop:n`.
#[derive(Clone)]
struct GridSpec(Vec<f64>);

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    input::parse_grid_spec(s).map(GridSpec)
}

/// A bad invocation that clap could not catch; exits with status 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

enum Outcome {
    Done(Rendered),
    VerificationFailed(Rendered),
}

fn special(cmd: Special) -> Result<Rendered> {
    match cmd {
        Special::Gamma { x } => output::scalar(json!({ "function": "gamma", "x": x }), gamma(x)?),
        Special::Lgamma { x } => {
            output::scalar(json!({ "function": "lgamma", "x": x }), log_gamma(x)?)
        }
        Special::Binom { nu, n } => output::scalar(
            json!({ "function": "binom", "nu": nu, "n": n }),
            binomial_general(nu, n)?,
        ),
        Special::Kummer { a, b, z } => output::scalar(
            json!({ "function": "1f1", "a": a, "b": b, "z": z }),
            kummer_1f1(a, b, z)?,
        ),
    }
}

fn grid_function(
    input: &Option<PathBuf>,
    constant: Option<f64>,
    base: Option<i64>,
    t: i64,
) -> Result<GridFunction> {
    if let Some(path) = input {
        let u = input::read_grid_function(path)?;
        if let Some(b) = base {
            if b != u.base() {
                return Err(UsageError(format!(
                    "--base {b} does not match the input, which starts at t = {}",
                    u.base()
                ))
                .into());
            }
        }
        return Ok(u);
    }
    let value = constant.expect("clap enforces one source");
    let base = base.unwrap_or(0);
    if t < base {
        return Err(UsageError(format!("--t {t} precedes --base {base}")).into());
    }
    Ok(GridFunction::constant(base, t, value)?)
}

fn dfc(cmd: Dfc) -> Result<Rendered> {
    let (name, args) = match &cmd {
        Dfc::Sum(a) => ("sum", a),
        Dfc::Diff(a) => ("diff", a),
        Dfc::Leibniz { common, .. } => ("leibniz", common),
    };
    let u = grid_function(&args.source.input, args.source.constant, args.base, args.t)?;
    let fields = json!({ "operation": name, "nu": args.nu, "base": u.base(), "t": args.t });
    let value = match &cmd {
        Dfc::Sum(_) => fractional_sum(&u, FractionalOrder::new(args.nu)?, args.t)?,
        Dfc::Diff(_) => fractional_difference(&u, FractionalOrder::new(args.nu)?, args.t)?,
        Dfc::Leibniz { second, .. } => {
            let y = grid_function(&second.input_y, second.constant_y, args.base, args.t)?;
            leibniz_difference(&u, &y, args.nu, args.t)?
        }
    };
    output::scalar(fields, value)
}

fn rl(cmd: Rl) -> Result<Rendered> {
    let Rl::Integrate {
        c,
        p,
        mu,
        r,
        quadrature,
    } = cmd;
    if quadrature {
        let value = rl_integral_quadrature(&ExpPowerTerm::unit(c, p), mu, r)?;
        return output::scalar(
            json!({ "c": c, "p": p, "mu": mu, "r": r, "method": "quadrature" }),
            value,
        );
    }
    let closed = rl_exp_power_closed_form(c, p, mu)?;
    let value = closed.eval(r)?;
    let mut rendered = output::scalar(
        json!({ "c": c, "p": p, "mu": mu, "r": r, "method": "closed_form", "closed_form": closed }),
        value,
    )?;
    rendered.text = format!("{value:?}\n{}\n", output::structured(&closed));
    Ok(rendered)
}

fn solve(args: SolveArgs) -> Result<Rendered> {
    let equation = if args.physical {
        let pp = PhysicalParams {
            m: args.m.unwrap_or_default(),
            hbar: args.hbar.unwrap_or_default(),
            epsilon: args.epsilon.unwrap_or_default(),
            a_pot: args.a.unwrap_or_default(),
            b_pot: args.b.unwrap_or_default(),
            c_pot: args.c.unwrap_or_default(),
            ell: args.ell.unwrap_or_default(),
            rho: args.rho,
        };
        map_physical(&pp)?
    } else {
        EquationParams::new(
            args.alpha_sq.unwrap_or_default(),
            args.beta.unwrap_or_default(),
            args.gamma.unwrap_or_default(),
            args.delta.unwrap_or_default(),
            args.rho,
        )?
    };
    let grid = args.grid.map_or_else(|| DEFAULT_GRID.to_vec(), |g| g.0);
    let doc = SolutionDocument::solve(equation, args.forced_rate, args.branch, &grid)?;
    output::solution(&doc)
}

fn verify(args: VerifyArgs) -> Result<Outcome> {
    let tol = Tolerances::from_env().map_err(|e| UsageError(e.to_string()))?;
    let grid = args.grid.as_ref().map(|g| g.0.as_slice());
    let mut report = Report::default();
    if let Some(id) = args.example {
        report.extend(verify_example(id, grid, &tol)?);
    }
    if let Some(path) = &args.solution {
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let doc = SolutionDocument::from_json(&text)?;
        report.extend(verify_solution(&doc, grid, &tol)?);
    }
    let targeted = args.example.is_some() || args.solution.is_some();
    if !targeted || args.seed.is_some() || args.trials.is_some() {
        let config = SuiteConfig {
            tolerances: tol,
            ..SuiteConfig::new(args.seed.unwrap_or(42), args.trials.unwrap_or(200))
        };
        report.extend(identity_suite_with(&config));
    }
    let passed = report.passed();
    let rendered = output::report(&report)?;
    Ok(if passed {
        Outcome::Done(rendered)
    } else {
        Outcome::VerificationFailed(rendered)
    })
}

fn run(cli: Cli) -> Result<u8> {
    let outcome = match cli.command {
        Command::Special(c) => Outcome::Done(special(c)?),
        Command::Dfc(c) => Outcome::Done(dfc(c)?),
        Command::Rl(c) => Outcome::Done(rl(c)?),
        Command::Solve(a) => Outcome::Done(solve(a)?),
        Command::Verify(a) => verify(a)?,
    };
    let (rendered, status) = match outcome {
        Outcome::Done(r) => (r, 0),
        Outcome::VerificationFailed(r) => (r, 3),
    };
    let text = rendered.select(cli.format)?;
    match &cli.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(status)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if e.is::<UsageError>() { 2 } else { 1 })
        }
    }
}
