//! MOOD object-oriented design metrics and size-measure regression.
//!
//! - [`model`]: class models, validation and per-class feature tallies
//! - [`omdl`]: parser and renderer for the OMDL class-model language
//! - [`mood`]: the six MOOD metrics (MHF, AHF, MIF, AIF, PF, CF)
//! - [`special`]: log-gamma, incomplete beta, t and F tail probabilities
//! - [`lstsq`]: Householder QR least squares
//! - [`regression`]: OLS fits with coefficient tests and ANOVA
//! - [`dataset`]: numeric tables, CSV I/O, the built-in 33-system table
//! - [`plot`], [`report`]: CSV/SVG scatter output and text tables
//!
//! ```
//! use moodkit::{builtin_table1, fit, ModelSpec};
//!
//! let loc = fit(&builtin_table1(), &ModelSpec::interchange("LOC")).unwrap();
//! assert_eq!(format!("{:.3}", loc.coefficients[1].beta), "421.994");
//! ```

pub mod dataset;
pub mod lstsq;
pub mod model;
pub mod mood;
pub mod omdl;
pub mod plot;
pub mod regression;
pub mod report;
pub mod special;

pub use dataset::{
    builtin_table1, read_csv, scatter, write_csv, Dataset, DatasetError, ScatterSeries,
    TABLE1_COLUMNS,
};
pub use model::{
    descendants, tallies, validate, AttributeDecl, ClassDecl, ClassModel, ClassTallies, Diagnostic,
    DiagnosticCode, MethodDecl, MethodKind, ModelError, OverrideTarget, Visibility,
};
pub use mood::{compute_all, MetricValue, MoodReport};
pub use omdl::{parse, render, OmdlDocument, ParseError, Span};
pub use regression::{
    anova, fit, fit_all_interchange, log_transform, predict, AnovaTable, CoefficientEstimate,
    FitResult, ModelSpec, RegressionError,
};
pub use special::{
    f_upper_p, ln_gamma, reg_inc_beta, t_two_sided_p, SpecialError, TailProbability,
};
