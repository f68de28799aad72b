//! Command-line front end for moodkit.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use moodkit::omdl::DeclRef;
use moodkit::plot::{series_csv, series_stem, series_svg};
use moodkit::report;
use moodkit::{
    builtin_table1, compute_all, fit, fit_all_interchange, parse, predict, read_csv, scatter,
    validate, write_csv, Dataset, DatasetError, ModelSpec, RegressionError, TABLE1_COLUMNS,
};
use serde::Serialize;

pub const BUILTIN_TABLE1: &str = "builtin:table1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "moodkit",
    version,
    about = "MOOD design metrics and size regression"
)]
struct Cli {
    /// Output format
    #[arg(
        long,
        global = true,
        value_enum,
        env = "MOODKIT_FORMAT",
        default_value = "table"
    )]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute the six MOOD metrics of an OMDL model
    Metrics { model: PathBuf },
    /// Fit a size model (or all four with `--response all`)
    Fit(FitArgs),
    /// Fit, then predict the response for the given predictor values
    Predict(PredictArgs),
    /// Print a dataset
    Dataset { source: String },
    /// Write scatter series as CSV (or SVG) files
    Plot(PlotArgs),
}

#[derive(Debug, Args)]
struct FitArgs {
    source: String,
    #[arg(long)]
    response: String,
}

#[derive(Debug, Args)]
struct PredictArgs {
    source: String,
    #[arg(long)]
    response: String,
    /// Predictor values as `--COL value` pairs
    #[arg(
        trailing_var_arg = true,
        allow_hyphen_values = true,
        value_name = "--COL VALUE"
    )]
    values: Vec<String>,
}

#[derive(Debug, Args)]
struct PlotArgs {
    source: String,
    #[arg(long)]
    x: String,
    #[arg(long, value_delimiter = ',', required = true)]
    y: Vec<String>,
    #[arg(long)]
    log10: bool,
    #[arg(long)]
    svg: bool,
    #[arg(long)]
    out: PathBuf,
}

/// A failed command: its message and process exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub const IO: u8 = 1;
    pub const PARSE: u8 = 2;
    pub const VALIDATION: u8 = 3;
    pub const COMPUTATION: u8 = 4;

    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<DatasetError> for Failure {
    fn from(e: DatasetError) -> Self {
        let code = match e {
            DatasetError::Io(_) => Failure::IO,
            DatasetError::UnknownColumn(_) | DatasetError::NonpositiveValue { .. } => {
                Failure::COMPUTATION
            }
            _ => Failure::PARSE,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<RegressionError> for Failure {
    fn from(e: RegressionError) -> Self {
        match e {
            RegressionError::Dataset(d) => d.into(),
            other => Failure::new(Failure::COMPUTATION, other.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::new(Failure::IO, format!("{}: {e}", path.display()))
}

fn load(source: &str) -> Result<Dataset, Failure> {
    if source == BUILTIN_TABLE1 {
        return Ok(builtin_table1());
    }
    let path = Path::new(source);
    let file = fs::File::open(path).map_err(|e| io_failure(path, e))?;
    Ok(read_csv(io::BufReader::new(file))?)
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

fn cmd_metrics(path: &Path, format: Format) -> Result<String, Failure> {
    let text = fs::read_to_string(path).map_err(|e| io_failure(path, e))?;
    let doc = parse(&text)
        .map_err(|e| Failure::new(Failure::PARSE, format!("{}:{e}", path.display())))?;
    let diagnostics = validate(&doc.model);
    if !diagnostics.is_empty() {
        let mut msg = String::new();
        for (i, d) in diagnostics.iter().enumerate() {
            if i > 0 {
                msg.push('\n');
            }
            let at = d
                .class
                .as_ref()
                .and_then(|c| doc.span_of(&DeclRef::Class(c.clone())))
                .map(|s| format!("{}:{s}: ", path.display()))
                .unwrap_or_else(|| format!("{}: ", path.display()));
            let _ = write!(msg, "{at}{}: {}", d.code, d.message);
        }
        return Err(Failure::new(Failure::VALIDATION, msg));
    }
    let r =
        compute_all(&doc.model).map_err(|e| Failure::new(Failure::VALIDATION, e.to_string()))?;
    Ok(match format {
        Format::Table => report::mood_table(&r),
        Format::Json => json(&r),
        Format::Csv => report::mood_csv(&r),
    })
}

fn cmd_fit(args: &FitArgs, format: Format) -> Result<String, Failure> {
    let data = load(&args.source)?;
    let fits = if args.response.eq_ignore_ascii_case("all") {
        fit_all_interchange(&data)?
    } else {
        let name = data.column_name(&args.response)?.to_owned();
        let spec = if TABLE1_COLUMNS.contains(&name.as_str()) {
            ModelSpec::interchange(&name)
        } else {
            let predictors = data.columns().iter().filter(|c| **c != name).cloned();
            ModelSpec::new(name.clone(), predictors.collect::<Vec<_>>())
        };
        vec![fit(&data, &spec)?]
    };
    Ok(match format {
        Format::Table => fits
            .iter()
            .map(report::fit_table)
            .collect::<Vec<_>>()
            .join("\n"),
        Format::Json if fits.len() == 1 => json(&fits[0]),
        Format::Json => json(&fits),
        Format::Csv => report::fits_csv(&fits),
    })
}

struct PredictorValues {
    values: BTreeMap<String, f64>,
    format: Option<Format>,
}

fn predictor_values(raw: &[String]) -> Result<PredictorValues, Failure> {
    let usage = |m: String| Failure::new(Failure::PARSE, m);
    let mut out = BTreeMap::new();
    let mut format = None;
    let mut it = raw.iter();
    while let Some(flag) = it.next() {
        let name = flag
            .strip_prefix("--")
            .ok_or_else(|| usage(format!("expected `--COLUMN value`, found `{flag}`")))?;
        let (name, text) = match name.split_once('=') {
            Some((n, v)) => (n.to_owned(), v.to_owned()),
            None => {
                let v = it
                    .next()
                    .ok_or_else(|| usage(format!("missing value for `--{name}`")))?;
                (name.to_owned(), v.clone())
            }
        };
        if name == "format" {
            let f = Format::from_str(&text, true)
                .map_err(|_| usage(format!("unknown format `{text}`")))?;
            format = Some(f);
            continue;
        }
        let value: f64 = text
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| usage(format!("`--{name}`: `{text}` is not a finite number")))?;
        out.insert(name, value);
    }
    Ok(PredictorValues {
        values: out,
        format,
    })
}

fn cmd_predict(args: &PredictArgs, format: Format) -> Result<String, Failure> {
    // `--format` after the predictor pairs lands in the trailing values
    let PredictorValues {
        values: inputs,
        format: trailing_format,
    } = predictor_values(&args.values)?;
    let format = trailing_format.unwrap_or(format);
    let data = load(&args.source)?;
    let name = data.column_name(&args.response)?.to_owned();
    let spec = if TABLE1_COLUMNS.contains(&name.as_str()) {
        ModelSpec::interchange(&name)
    } else {
        let predictors: Vec<String> = data
            .columns()
            .iter()
            .filter(|c| **c != name)
            .cloned()
            .collect();
        ModelSpec::new(name.clone(), predictors)
    };
    for given in inputs.keys() {
        let known = spec
            .predictors
            .iter()
            .any(|p| p == given || (p == "NOL" && given == "LOC"));
        if !known {
            return Err(Failure::new(
                Failure::COMPUTATION,
                format!("UNKNOWN_COLUMN: `{given}` is not a predictor of {name}"),
            ));
        }
    }
    let f = fit(&data, &spec)?;
    let value = predict(&f, &inputs)?;
    Ok(match format {
        Format::Table => format!("{value}\n"),
        Format::Json => {
            #[derive(Serialize)]
            struct Prediction<'a> {
                response: &'a str,
                inputs: &'a BTreeMap<String, f64>,
                prediction: f64,
            }
            json(&Prediction {
                response: &name,
                inputs: &inputs,
                prediction: value,
            })
        }
        Format::Csv => format!("response,prediction\n{name},{value}\n"),
    })
}

fn cmd_dataset(source: &str, format: Format) -> Result<String, Failure> {
    let data = load(source)?;
    Ok(match format {
        Format::Csv => {
            let mut buf = Vec::new();
            write_csv(&data, &mut buf).map_err(|e| Failure::new(Failure::IO, e.to_string()))?;
            String::from_utf8(buf).expect("csv output is UTF-8")
        }
        Format::Json => json(&data),
        Format::Table => {
            let mut out = String::new();
            for c in data.columns() {
                let _ = write!(out, "{c:>12}");
            }
            out.push('\n');
            for row in data.rows() {
                for v in row {
                    let _ = write!(out, "{v:>12}");
                }
                out.push('\n');
            }
            let _ = writeln!(out, "N = {}  ({})", data.n_rows(), data.provenance());
            out
        }
    })
}

fn cmd_plot(args: &PlotArgs) -> Result<String, Failure> {
    let data = load(&args.source)?;
    let ys: Vec<&str> = args.y.iter().map(String::as_str).collect();
    let series = scatter(&data, &args.x, &ys, args.log10)?;
    fs::create_dir_all(&args.out).map_err(|e| io_failure(&args.out, e))?;
    let mut written = String::new();
    for s in &series {
        let (ext, body) = if args.svg {
            ("svg", series_svg(s))
        } else {
            ("csv", series_csv(s))
        };
        let path = args.out.join(format!("{}.{ext}", series_stem(s)));
        fs::write(&path, body).map_err(|e| io_failure(&path, e))?;
        let _ = writeln!(written, "{}", path.display());
    }
    Ok(written)
}

/// Runs one invocation, writing results to `out` and errors to `err`, and
/// returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { Failure::PARSE } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(rendered.as_bytes());
            } else {
                let _ = err.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    let result = match &cli.command {
        Command::Metrics { model } => cmd_metrics(model, cli.format),
        Command::Fit(a) => cmd_fit(a, cli.format),
        Command::Predict(a) => cmd_predict(a, cli.format),
        Command::Dataset { source } => cmd_dataset(source, cli.format),
        Command::Plot(a) => cmd_plot(a),
    };
    match result {
        Ok(text) => match out.write_all(text.as_bytes()) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                Failure::IO
            }
        },
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
