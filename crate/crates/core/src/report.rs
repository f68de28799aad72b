//! Text renderings of metric reports and regression fits.
//!
//! The table layout follows the usual statistics-package output: coefficient
//! table, then model summary, then ANOVA. Numbers are rounded for display
//! only; the structures keep full precision.

use std::fmt::Write as _;

use crate::mood::{MetricValue, MoodReport};
use crate::regression::FitResult;

/// Fixed-point with `decimals` digits.
pub fn fixed(x: f64, decimals: usize) -> String {
    format!("{x:.decimals$}")
}

/// A p-value at three decimals; anything below 0.0005 shows as `0.000`.
pub fn p_value(p: f64) -> String {
    fixed(p, 3)
}

/// Statistics-package style fraction: `.996` rather than `0.996`.
pub fn leading_dot(x: f64, decimals: usize) -> String {
    let s = fixed(x, decimals);
    if let Some(rest) = s.strip_prefix("0.") {
        format!(".{rest}")
    } else if let Some(rest) = s.strip_prefix("-0.") {
        format!("-.{rest}")
    } else {
        s
    }
}

/// Scientific notation with `significant` digits, e.g. `1.12E+13`.
pub fn scientific(x: f64, significant: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let decimals = significant.saturating_sub(1);
    let s = format!("{x:.decimals$e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}E{sign}{:02}", exp.abs())
}

/// Large magnitudes in scientific notation, others with about ten
/// significant digits (at most three decimals).
pub fn magnitude(x: f64, significant: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    if x.abs() >= 1e10 {
        return scientific(x, significant);
    }
    let int_digits = if x.abs() < 1.0 {
        1
    } else {
        x.abs().log10().floor() as usize + 1
    };
    fixed(x, 10usize.saturating_sub(int_digits).min(3))
}

fn metric_cell(m: &MetricValue) -> String {
    match m.value {
        Some(v) => format!("{v:.4}"),
        None => "undefined".to_owned(),
    }
}

pub fn mood_table(report: &MoodReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<8}{:>10}{:>14}  Note", "Metric", "Value", "Ratio");
    for (key, m) in report.metrics() {
        let ratio = format!("{}/{}", m.numerator, m.denominator);
        let note = m.undefined_reason.as_deref().unwrap_or("");
        let _ = writeln!(
            out,
            "{:<8}{:>10}{:>14}  {}",
            key.to_uppercase(),
            metric_cell(m),
            ratio,
            note
        );
    }
    let _ = writeln!(out, "TC = {}", report.tc);
    out
}

pub fn mood_csv(report: &MoodReport) -> String {
    let mut out = String::from("metric,value,numerator,denominator,undefined_reason\n");
    for (key, m) in report.metrics() {
        let value = m.value.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{key},{value},{},{},{}",
            m.numerator,
            m.denominator,
            m.undefined_reason.as_deref().unwrap_or("")
        );
    }
    out
}

/// Coefficients, model summary and ANOVA blocks for one fit.
pub fn fit_table(fit: &FitResult) -> String {
    let mut out = String::new();
    let rhs: Vec<String> = fit
        .spec
        .predictors
        .iter()
        .enumerate()
        .map(|(i, p)| format!("b{} {p}", i + 1))
        .collect();
    let _ = writeln!(
        out,
        "Model: {} = b0 + {}    (n = {})",
        fit.spec.response,
        rhs.join(" + "),
        fit.n
    );
    out.push('\n');

    let _ = writeln!(out, "Coefficients");
    let _ = writeln!(
        out,
        "{:<12}{:>16}{:>14}{:>12}{:>8}",
        "", "B", "Std. Error", "t", "Sig."
    );
    for c in &fit.coefficients {
        let _ = writeln!(
            out,
            "{:<12}{:>16}{:>14}{:>12}{:>8}",
            c.name,
            fixed(c.beta, 3),
            fixed(c.std_error, 3),
            fixed(c.t_stat, 3),
            p_value(c.p_value)
        );
    }
    out.push('\n');

    let _ = writeln!(out, "Model Summary");
    let _ = writeln!(
        out,
        "{:>8}{:>12}{:>20}{:>30}",
        "R", "R Square", "Adjusted R Square", "Std. Error of the Estimate"
    );
    let _ = writeln!(
        out,
        "{:>8}{:>12}{:>20}{:>30}",
        leading_dot(fit.multiple_r(), 3),
        leading_dot(fit.r_squared, 3),
        leading_dot(fit.adj_r_squared, 3),
        fixed(fit.std_error_estimate, 2)
    );
    out.push('\n');

    let a = &fit.anova;
    let _ = writeln!(out, "ANOVA");
    let _ = writeln!(
        out,
        "{:<12}{:>16}{:>6}{:>16}{:>12}{:>8}",
        "", "Sum of Squares", "df", "Mean Square", "F", "Sig."
    );
    let _ = writeln!(
        out,
        "{:<12}{:>16}{:>6}{:>16}{:>12}{:>8}",
        "Regression",
        magnitude(a.ss_regression, 3),
        a.df_regression,
        magnitude(a.ms_regression, 4),
        fixed(a.f_stat, 3),
        leading_dot(a.p_value, 3)
    );
    let _ = writeln!(
        out,
        "{:<12}{:>16}{:>6}{:>16}",
        "Residual",
        magnitude(a.ss_residual, 3),
        a.df_residual,
        magnitude(a.ms_residual, 4)
    );
    let _ = writeln!(
        out,
        "{:<12}{:>16}{:>6}",
        "Total",
        magnitude(a.ss_total, 3),
        a.df_total
    );
    out
}

/// One line per coefficient with the fit-level statistics repeated. Numbers
/// use the shortest round-trip form, switching to exponent notation for
/// very small or large magnitudes.
pub fn fits_csv(fits: &[FitResult]) -> String {
    let mut out = String::from(
        "response,term,beta,std_error,t,p,r_squared,adj_r_squared,std_error_estimate,f,f_p\n",
    );
    for f in fits {
        for c in &f.coefficients {
            let _ = writeln!(
                out,
                "{},{},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?},{:?}",
                f.spec.response,
                c.name,
                c.beta,
                c.std_error,
                c.t_stat,
                c.p_value,
                f.r_squared,
                f.adj_r_squared,
                f.std_error_estimate,
                f.anova.f_stat,
                f.anova.p_value
            );
        }
    }
    out
}
