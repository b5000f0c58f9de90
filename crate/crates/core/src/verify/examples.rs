//! Reproduction checks for the worked examples and for solution documents.

use crate::document::{derivation_for, SolutionDocument};
use crate::error::{Error, Result};
use crate::rl::HyperSum;
use crate::solver::{
    construct_solution, derive_branches, derive_branches_with_rate, reference_example,
    BranchDerivation, FractionalForm, PrintedSolution,
};
use crate::special::gamma;
use crate::verify::equivalence::form_equivalence;
use crate::verify::residual::{check_grid, ode_residual_of};
use crate::verify::{relative_error, Check, Report, Tolerances};

/// Residual grid avoiding the singular point `r = 0`.
pub const DEFAULT_GRID: [f64; 4] = [0.5, 1.0, 2.0, 5.0];

/// Quadrature grid for the `1F1` example.
const KUMMER_EQUIVALENCE_GRID: [f64; 3] = [0.25, 0.5, 1.0];

/// Least-squares ratio `q` of `f ≈ q·g` and the worst pointwise misfit.
///
/// Each point is scaled by `max(|f|, |g|)` (floored at `1e-12` of the grid
/// maximum) so exponential growth does not let one end of the grid dominate.
pub fn proportionality(f: &HyperSum, g: &HyperSum, grid: &[f64]) -> Result<(f64, f64)> {
    check_grid(grid)?;
    let fv = grid
        .iter()
        .map(|&r| f.eval(r))
        .collect::<Result<Vec<_>>>()?;
    let gv = grid
        .iter()
        .map(|&r| g.eval(r))
        .collect::<Result<Vec<_>>>()?;
    let peak = fv.iter().chain(&gv).fold(0.0_f64, |m, v| m.max(v.abs()));
    if !(peak > 0.0) || !peak.is_finite() {
        return Err(Error::Validation(
            "functions vanish or overflow on the grid".into(),
        ));
    }
    let scaled: Vec<(f64, f64)> = fv
        .iter()
        .zip(&gv)
        .map(|(a, b)| {
            let s = a.abs().max(b.abs()).max(1e-12 * peak);
            (a / s, b / s)
        })
        .collect();
    let gg: f64 = scaled.iter().map(|(_, b)| b * b).sum();
    if gg == 0.0 {
        return Err(Error::Validation(
            "reference function vanishes on the grid".into(),
        ));
    }
    let q = scaled.iter().map(|(a, b)| a * b).sum::<f64>() / gg;
    let misfit = scaled
        .iter()
        .fold(0.0_f64, |m, (a, b)| m.max((a - q * b).abs()));
    Ok((q, misfit))
}

fn form_shape_error(a: &FractionalForm, b: &FractionalForm) -> f64 {
    [
        (a.prefactor.c, b.prefactor.c),
        (a.prefactor.p, b.prefactor.p),
        (a.operand.c, b.operand.c),
        (a.operand.p, b.operand.p),
        (a.order, b.order),
    ]
    .iter()
    .map(|&(x, y)| (x - y).abs())
    .fold(0.0, f64::max)
}

/// Runs `f`, turning an error into a failed check.
fn guarded(name: String, tol: f64, f: impl FnOnce() -> Result<Check>) -> Check {
    f().unwrap_or_else(|e| Check::failed(name, tol, e.to_string()))
}

/// Checks one printed representation against its own closed form.
fn representation_checks(
    prefix: &str,
    label: &str,
    printed: &FractionalForm,
    derived: &FractionalForm,
    bd: &BranchDerivation,
    residual_grid: &[f64],
    equivalence_grid: &[f64],
    tol: &Tolerances,
) -> Vec<Check> {
    let mut checks = vec![Check::at_most(
        format!("{prefix}.{label}_form_matches_derivation"),
        form_shape_error(printed, derived),
        tol.exact,
    )];
    let name = format!("{prefix}.{label}_form_equivalence");
    checks.push(guarded(name.clone(), tol.equivalence, || {
        let closed = printed.assemble()?;
        let eq = form_equivalence(printed, &closed, equivalence_grid, tol.equivalence)?;
        Ok(Check::at_most(
            name.clone(),
            eq.max_deviation,
            tol.equivalence,
        ))
    }));
    let name = format!("{prefix}.{label}_form_residual");
    checks.push(guarded(name.clone(), tol.residual, || {
        let closed = HyperSum::from(&printed.assemble()?);
        let rep = ode_residual_of(&bd.equation, &closed, residual_grid)?;
        Ok(Check::at_most(name.clone(), rep.relative_max, tol.residual))
    }));
    checks
}

fn solution_checks(
    printed: &PrintedSolution,
    bd: &BranchDerivation,
    residual_grid: &[f64],
    equivalence_grid: &[f64],
    tol: &Tolerances,
) -> Vec<Check> {
    let prefix = format!("branch_{}", printed.branch);
    let mut checks = Vec::new();
    let sr = match construct_solution(bd, printed.branch) {
        Ok(sr) => sr,
        Err(e) => {
            checks.push(Check::failed(
                format!("{prefix}.construct"),
                0.0,
                e.to_string(),
            ));
            return checks;
        }
    };
    let closed = HyperSum::from(&sr.closed_form);

    let name = format!("{prefix}.residual");
    checks.push(guarded(name.clone(), tol.residual, || {
        let rep = ode_residual_of(&bd.equation, &closed, residual_grid)?;
        Ok(Check::at_most(name.clone(), rep.relative_max, tol.residual))
    }));

    let name = format!("{prefix}.proportional_to_printed_closed_form");
    checks.push(guarded(name.clone(), tol.equivalence, || {
        let (q, misfit) = proportionality(&closed, &printed.closed_form, residual_grid)?;
        Ok(Check::at_most(name.clone(), misfit, tol.equivalence)
            .with_detail(format!("constructed = {q:.12} × printed")))
    }));

    let name = format!("{prefix}.printed_closed_form_residual");
    checks.push(guarded(name.clone(), tol.residual, || {
        let rep = ode_residual_of(&bd.equation, &printed.closed_form, residual_grid)?;
        Ok(Check::at_most(name.clone(), rep.relative_max, tol.residual))
    }));

    let name = format!("{prefix}.constructed_form_equivalence");
    checks.push(guarded(name.clone(), tol.equivalence, || {
        let eq = form_equivalence(
            &sr.fractional_form,
            &sr.closed_form,
            equivalence_grid,
            tol.equivalence,
        )?;
        Ok(Check::at_most(
            name.clone(),
            eq.max_deviation,
            tol.equivalence,
        ))
    }));

    if let Some((a, b, scale)) = printed.printed_kummer {
        let name = format!("{prefix}.kummer_parameters");
        checks.push(match sr.closed_form.f1f1() {
            Some(f) => Check::at_most(
                name,
                [(f.a, a), (f.b, b), (f.scale, scale)]
                    .iter()
                    .map(|&(x, y)| (x - y).abs())
                    .fold(0.0, f64::max),
                tol.exact,
            )
            .with_detail(format!("1F1({}; {}; {}r)", f.a, f.b, f.scale)),
            None => Check::failed(name, tol.exact, "closed form has no 1F1 factor"),
        });
    }

    if let Some(constant) = printed.printed_constant {
        let norm = sr.normalization;
        let name = format!("{prefix}.normalization_vs_printed");
        checks.push(match norm {
            Some(n) => Check::at_most(name, (n - constant).abs(), tol.constant)
                .with_detail(format!("{n:.12} against printed {constant}")),
            None => Check::failed(name, tol.constant, "no normalization constant"),
        });
        let name = format!("{prefix}.normalization_vs_gamma_ratio");
        checks.push(guarded(name.clone(), tol.exact, || {
            let p = sr.fractional_form.operand.p;
            let mu = -sr.fractional_form.order;
            let oracle = gamma(p + 1.0)? / gamma(p + mu + 1.0)?;
            let n = norm.ok_or_else(|| Error::Validation("no normalization constant".into()))?;
            Ok(
                Check::at_most(name.clone(), relative_error(n, oracle), tol.exact)
                    .with_detail(format!("Γ({})/Γ({}) = {oracle:.15}", p + 1.0, p + mu + 1.0)),
            )
        }));
    }

    if let Some(pre) = &printed.pre_rewrite {
        checks.extend(representation_checks(
            &prefix,
            "pre_rewrite",
            pre,
            &bd.literal_form(printed.branch),
            bd,
            residual_grid,
            equivalence_grid,
            tol,
        ));
    }
    checks.extend(representation_checks(
        &prefix,
        "post_rewrite",
        &printed.post_rewrite,
        &bd.rewritten_form(printed.branch),
        bd,
        residual_grid,
        equivalence_grid,
        tol,
    ));
    checks
}

/// Reproduces worked example `id`: derived constants, closed forms,
/// normalization constants, residuals and both printed representations.
///
/// `grid` replaces the default residual grid, and also the equivalence grid
/// (which is otherwise `{0.25, 0.5, 1}` for the `1F1` example).
pub fn verify_example(id: u8, grid: Option<&[f64]>, tol: &Tolerances) -> Result<Report> {
    let ex = reference_example(id)?;
    let residual_grid = grid.unwrap_or(&DEFAULT_GRID);
    check_grid(residual_grid)?;
    let equivalence_grid = match (grid, ex.forced_rate) {
        (Some(g), _) => g,
        (None, Some(_)) => &KUMMER_EQUIVALENCE_GRID[..],
        (None, None) => &DEFAULT_GRID[..],
    };
    let bd = match ex.forced_rate {
        Some(rate) => derive_branches_with_rate(&ex.equation, rate)?,
        None => derive_branches(&ex.equation)?,
    };

    let mut report = Report::default();
    let printed = &ex.constants;
    for (name, got, want) in [
        ("tau", bd.tau, printed.tau),
        ("rate", bd.rate, printed.rate),
        ("a", bd.constants.a, printed.a),
        ("b", bd.constants.b, printed.b),
        ("c", bd.constants.c, printed.c),
        ("d", bd.constants.d, printed.d),
    ] {
        report.checks.push(
            Check::at_most(format!("derivation.{name}"), (got - want).abs(), tol.exact)
                .with_detail(format!("{got} against printed {want}")),
        );
    }
    for printed in &ex.solutions {
        report.checks.extend(solution_checks(
            printed,
            &bd,
            residual_grid,
            equivalence_grid,
            tol,
        ));
    }

    if ex.forced_rate.is_some() {
        report.notes.push(format!(
            "the printed equation {} is not solved by the printed solutions; they solve {}",
            ex.equation, bd.equation
        ));
        for printed in &ex.solutions {
            let rep = ode_residual_of(&ex.equation, &printed.closed_form, residual_grid)?;
            report.notes.push(format!(
                "branch {} against the printed equation: relative residual {:.6e}",
                printed.branch, rep.relative_max
            ));
        }
        let default = derive_branches(&ex.equation)?;
        report.notes.push(format!(
            "reading the printed equation with rate √K gives rate {:.12}, a = {:.12}, b = {:.12}",
            default.rate, default.constants.a, default.constants.b
        ));
    }
    Ok(report)
}

/// Re-derives and re-checks a solution document.
pub fn verify_solution(
    doc: &SolutionDocument,
    grid: Option<&[f64]>,
    tol: &Tolerances,
) -> Result<Report> {
    let residual_grid = grid.unwrap_or(&DEFAULT_GRID);
    check_grid(residual_grid)?;
    let mut report = Report::default();

    let bd = derivation_for(&doc.equation, doc.forced_rate)?;
    let stored = &doc.derivation;
    let derivation_error = [
        (bd.tau, stored.tau),
        (bd.rate, stored.rate),
        (bd.constants.a, stored.constants.a),
        (bd.constants.b, stored.constants.b),
        (bd.constants.c, stored.constants.c),
        (bd.constants.d, stored.constants.d),
        (bd.equation.alpha_sq, stored.equation.alpha_sq),
    ]
    .iter()
    .map(|&(x, y)| relative_error(x, y))
    .fold(0.0, f64::max);
    report
        .checks
        .push(Check::at_most("derivation", derivation_error, tol.exact));

    let closed = HyperSum::from(&doc.closed_form);
    report
        .checks
        .push(guarded("closed_form_reproduced".into(), tol.exact, || {
            let sr = construct_solution(&bd, doc.branch)?;
            let fresh = HyperSum::from(&sr.closed_form);
            let worst = residual_grid
                .iter()
                .map(|&r| Ok(relative_error(fresh.eval(r)?, closed.eval(r)?)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            Ok(Check::at_most("closed_form_reproduced", worst, tol.exact))
        }));

    if !doc.samples.is_empty() {
        report.checks.push(guarded("samples".into(), tol.exact, || {
            let worst = doc
                .samples
                .iter()
                .map(|s| Ok(relative_error(doc.closed_form.eval(s.r)?, s.value)))
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .fold(0.0, f64::max);
            Ok(Check::at_most("samples", worst, tol.exact))
        }));
    }

    report
        .checks
        .push(guarded("residual".into(), tol.residual, || {
            let rep = ode_residual_of(&stored.equation, &closed, residual_grid)?;
            Ok(Check::at_most("residual", rep.relative_max, tol.residual))
        }));

    match form_equivalence(
        &doc.fractional_form,
        &doc.closed_form,
        residual_grid,
        tol.equivalence,
    ) {
        Ok(eq) => report.checks.push(Check::at_most(
            "form_equivalence",
            eq.max_deviation,
            tol.equivalence,
        )),
        Err(Error::Parameter(msg)) => report
            .notes
            .push(format!("form equivalence skipped: {msg}")),
        Err(e) => report.checks.push(Check::failed(
            "form_equivalence",
            tol.equivalence,
            e.to_string(),
        )),
    }
    Ok(report)
}
