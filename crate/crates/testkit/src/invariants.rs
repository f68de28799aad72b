//! Consistency checks every least-squares fit must satisfy, independent of
//! how it was computed.

use moodkit::FitResult;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

/// Returns one message per violated invariant; empty when the fit is sound.
pub fn fit_violations(fit: &FitResult) -> Vec<String> {
    let mut out = Vec::new();
    let a = &fit.anova;
    let mut check = |ok: bool, what: String| {
        if !ok {
            out.push(what);
        }
    };

    let sum = a.ss_regression + a.ss_residual;
    check(
        rel(sum, a.ss_total) <= 1e-9,
        format!("ss_reg + ss_res = {sum} but ss_total = {}", a.ss_total),
    );
    check(
        a.df_regression + a.df_residual == a.df_total,
        format!(
            "df {} + {} != {}",
            a.df_regression, a.df_residual, a.df_total
        ),
    );
    check(
        a.df_residual == fit.n - fit.spec.n_params(),
        "df_residual".into(),
    );

    let (k, dfr) = (a.df_regression as f64, a.df_residual as f64);
    let r2 = fit.r_squared;
    let f_from_r2 = (r2 / k) / ((1.0 - r2) / dfr);
    check(
        rel(a.f_stat, f_from_r2) <= 1e-6,
        format!("F {} vs R²-derived {f_from_r2}", a.f_stat),
    );
    check(
        rel(r2, a.ss_regression / a.ss_total) <= 1e-9,
        format!("R² {r2} vs ss ratio"),
    );
    let adj = 1.0 - (1.0 - r2) * (fit.n as f64 - 1.0) / dfr;
    check(rel(fit.adj_r_squared, adj) <= 1e-9, "adjusted R²".into());
    check(
        rel(fit.std_error_estimate, a.ms_residual.sqrt()) <= 1e-12,
        "standard error of estimate".into(),
    );
    check(
        (0.0..=1.0).contains(&a.p_value),
        format!("F p-value {}", a.p_value),
    );
    for c in &fit.coefficients {
        check(
            (0.0..=1.0).contains(&c.p_value),
            format!("{} p-value {}", c.name, c.p_value),
        );
        check(
            rel(c.t_stat, c.beta / c.std_error) <= 1e-12,
            format!("{} t statistic", c.name),
        );
    }
    out
}
