//! Ordinary least squares with t and F inference.
//!
//! [`fit`] regresses one dataset column on others; [`fit_all_interchange`]
//! runs the four size models in which each of NOL (LOC), NOC, NOM and NOA is
//! explained by the remaining three.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::dataset::{Dataset, DatasetError, TABLE1_COLUMNS};
use crate::lstsq;
use crate::special::{f_upper_p, t_two_sided_p};

/// Name given to the intercept coefficient.
pub const INTERCEPT: &str = "(Constant)";

#[derive(Debug, Error)]
pub enum RegressionError {
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error("invalid model: {0}")]
    InvalidSpec(String),
    #[error("INSUFFICIENT_DATA: {n} observations for {p} parameters (need n > p)")]
    InsufficientData { n: usize, p: usize },
    #[error("RANK_DEFICIENT: column `{column}` is linearly dependent on the preceding columns")]
    RankDeficient { column: String },
    #[error("DEGENERATE_MODEL: response `{response}` has zero total variation")]
    DegenerateResponse { response: String },
    #[error("MISSING_PREDICTOR: no value supplied for `{0}`")]
    MissingPredictor(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModelSpec {
    pub response: String,
    pub predictors: Vec<String>,
    pub intercept: bool,
}

impl ModelSpec {
    /// `response = β0 + Σ βk · predictor_k`
    pub fn new<S: Into<String>>(
        response: impl Into<String>,
        predictors: impl IntoIterator<Item = S>,
    ) -> Self {
        ModelSpec {
            response: response.into(),
            predictors: predictors.into_iter().map(Into::into).collect(),
            intercept: true,
        }
    }

    /// The size model with `response` explained by the other three size
    /// columns, in their canonical order.
    pub fn interchange(response: &str) -> Self {
        let canonical = if response == "LOC" { "NOL" } else { response };
        ModelSpec::new(
            canonical,
            TABLE1_COLUMNS.iter().copied().filter(|c| *c != canonical),
        )
    }

    /// Number of estimated parameters.
    pub fn n_params(&self) -> usize {
        self.predictors.len() + usize::from(self.intercept)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientEstimate {
    pub name: String,
    pub beta: f64,
    pub std_error: f64,
    #[serde(rename = "t")]
    pub t_stat: f64,
    #[serde(rename = "p")]
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnovaTable {
    pub ss_regression: f64,
    pub ss_residual: f64,
    pub ss_total: f64,
    pub df_regression: usize,
    pub df_residual: usize,
    pub df_total: usize,
    pub ms_regression: f64,
    pub ms_residual: f64,
    pub f_stat: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub spec: ModelSpec,
    pub n: usize,
    /// Intercept first, then predictors in spec order.
    pub coefficients: Vec<CoefficientEstimate>,
    pub r_squared: f64,
    pub adj_r_squared: f64,
    pub std_error_estimate: f64,
    pub anova: AnovaTable,
    #[serde(skip)]
    pub response: Vec<f64>,
    #[serde(skip)]
    pub fitted: Vec<f64>,
}

impl FitResult {
    /// Multiple correlation coefficient `R = √R²`.
    pub fn multiple_r(&self) -> f64 {
        self.r_squared.sqrt()
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.response
            .iter()
            .zip(&self.fitted)
            .map(|(y, f)| y - f)
            .collect()
    }

    pub fn coefficient(&self, name: &str) -> Option<&CoefficientEstimate> {
        self.coefficients.iter().find(|c| c.name == name)
    }
}

/// Fits `spec` to `data` by least squares.
pub fn fit(data: &Dataset, spec: &ModelSpec) -> Result<FitResult, RegressionError> {
    let response_idx = data.column_index(&spec.response)?;
    let mut predictor_idx = Vec::with_capacity(spec.predictors.len());
    for p in &spec.predictors {
        let idx = data.column_index(p)?;
        if idx == response_idx {
            return Err(RegressionError::InvalidSpec(format!(
                "response `{}` is also a predictor",
                spec.response
            )));
        }
        if predictor_idx.contains(&idx) {
            return Err(RegressionError::InvalidSpec(format!(
                "predictor `{p}` listed twice"
            )));
        }
        predictor_idx.push(idx);
    }
    let resolved = ModelSpec {
        response: data.columns()[response_idx].clone(),
        predictors: predictor_idx
            .iter()
            .map(|&i| data.columns()[i].clone())
            .collect(),
        intercept: spec.intercept,
    };

    let n = data.n_rows();
    let p = resolved.n_params();
    if n <= p {
        return Err(RegressionError::InsufficientData { n, p });
    }

    let y: Vec<f64> = data.rows().iter().map(|r| r[response_idx]).collect();
    let mut names = Vec::with_capacity(p);
    let mut design = Vec::with_capacity(p);
    if resolved.intercept {
        names.push(INTERCEPT.to_owned());
        design.push(vec![1.0; n]);
    }
    for (&i, name) in predictor_idx.iter().zip(&resolved.predictors) {
        names.push(name.clone());
        design.push(data.rows().iter().map(|r| r[i]).collect());
    }

    let degenerate = if resolved.intercept {
        y.iter().all(|&v| v == y[0])
    } else {
        y.iter().all(|&v| v == 0.0)
    };
    if degenerate {
        return Err(RegressionError::DegenerateResponse {
            response: resolved.response,
        });
    }

    let ls = lstsq::solve(&design, &y).map_err(|e| RegressionError::RankDeficient {
        column: names[e.column].clone(),
    })?;

    let fitted: Vec<f64> = (0..n)
        .map(|i| {
            design
                .iter()
                .zip(&ls.coefficients)
                .map(|(col, b)| col[i] * b)
                .sum()
        })
        .collect();

    let mut result = FitResult {
        spec: resolved,
        n,
        coefficients: Vec::new(),
        r_squared: 0.0,
        adj_r_squared: 0.0,
        std_error_estimate: 0.0,
        anova: AnovaTable {
            ss_regression: 0.0,
            ss_residual: 0.0,
            ss_total: 0.0,
            df_regression: 0,
            df_residual: 0,
            df_total: 0,
            ms_regression: 0.0,
            ms_residual: 0.0,
            f_stat: 0.0,
            p_value: 1.0,
        },
        response: y,
        fitted,
    };
    let table = anova(&result);

    let df_resid = table.df_residual;
    result.coefficients = names
        .into_iter()
        .zip(ls.coefficients.iter().zip(&ls.inverse_gram_diagonal))
        .map(|(name, (&beta, &inv))| {
            let std_error = (table.ms_residual * inv).sqrt();
            let t_stat = beta / std_error;
            let p_value = if t_stat.is_nan() {
                1.0
            } else {
                t_two_sided_p(t_stat, df_resid).map_or(f64::NAN, |p| p.value())
            };
            CoefficientEstimate {
                name,
                beta,
                std_error,
                t_stat,
                p_value,
            }
        })
        .collect();

    result.r_squared = (1.0 - table.ss_residual / table.ss_total).clamp(0.0, 1.0);
    result.adj_r_squared = 1.0 - (1.0 - result.r_squared) * table.df_total as f64 / df_resid as f64;
    result.std_error_estimate = table.ms_residual.sqrt();
    result.anova = table;
    Ok(result)
}

/// Sum-of-squares decomposition about the response mean (about zero for
/// models without intercept) with the overall F test.
pub fn anova(fit: &FitResult) -> AnovaTable {
    let n = fit.response.len();
    let centre = if fit.spec.intercept {
        fit.response.iter().sum::<f64>() / n as f64
    } else {
        0.0
    };
    let ss_total: f64 = fit.response.iter().map(|y| (y - centre).powi(2)).sum();
    let ss_residual: f64 = fit
        .response
        .iter()
        .zip(&fit.fitted)
        .map(|(y, f)| (y - f).powi(2))
        .sum();
    let ss_regression: f64 = fit.fitted.iter().map(|f| (f - centre).powi(2)).sum();

    let df_regression = fit.spec.predictors.len();
    let df_total = if fit.spec.intercept { n - 1 } else { n };
    let df_residual = df_total - df_regression;
    let ms_regression = ss_regression / df_regression as f64;
    let ms_residual = ss_residual / df_residual as f64;
    let f_stat = ms_regression / ms_residual;
    let p_value = if df_regression == 0 || f_stat.is_nan() {
        1.0
    } else {
        f_upper_p(f_stat, df_regression, df_residual).map_or(f64::NAN, |p| p.value())
    };
    AnovaTable {
        ss_regression,
        ss_residual,
        ss_total,
        df_regression,
        df_residual,
        df_total,
        ms_regression,
        ms_residual,
        f_stat,
        p_value,
    }
}

/// Evaluates the fitted equation. Inputs are keyed by column name; `LOC`
/// and `NOL` are interchangeable.
pub fn predict(fit: &FitResult, inputs: &BTreeMap<String, f64>) -> Result<f64, RegressionError> {
    let mut value = 0.0;
    let mut coefficients = fit.coefficients.iter();
    if fit.spec.intercept {
        value += coefficients.next().map_or(0.0, |c| c.beta);
    }
    for (name, c) in fit.spec.predictors.iter().zip(coefficients) {
        let alias = match name.as_str() {
            "NOL" => Some("LOC"),
            "LOC" => Some("NOL"),
            _ => None,
        };
        let x = inputs
            .get(name)
            .or_else(|| alias.and_then(|a| inputs.get(a)))
            .ok_or_else(|| RegressionError::MissingPredictor(name.clone()))?;
        value += c.beta * x;
    }
    Ok(value)
}

/// The four size models, responses in the order NOL, NOC, NOM, NOA.
pub fn fit_all_interchange(data: &Dataset) -> Result<Vec<FitResult>, RegressionError> {
    TABLE1_COLUMNS
        .iter()
        .map(|r| fit(data, &ModelSpec::interchange(r)))
        .collect()
}

/// Element-wise logarithm of every value: base 10 (columns suffixed
/// `_log10`) or natural (suffixed `_ln`).
pub fn log_transform(data: &Dataset, base10: bool) -> Result<Dataset, RegressionError> {
    let out = if base10 {
        data.map_log(f64::log10, "_log10")?
    } else {
        data.map_log(f64::ln, "_ln")?
    };
    Ok(out)
}
