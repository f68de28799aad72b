//! Rectangular numeric datasets: the built-in 33-system size table, CSV
//! ingestion and emission, and scatter series for plotting.

use std::io::{self, Read, Write};

use serde::Serialize;
use thiserror::Error;

/// Provenance tag of [`builtin_table1`].
pub const TABLE1_PROVENANCE: &str = "paper-table-1";

/// Columns of the built-in table. `NOL` (lines of code) is also reachable
/// under the alias `LOC`.
pub const TABLE1_COLUMNS: [&str; 4] = ["NOL", "NOC", "NOM", "NOA"];

#[rustfmt::skip]
const TABLE1: [[u32; 4]; 33] = [
    [15837, 65, 1446, 537],
    [23570, 57, 1535, 876],
    [47106, 91, 2141, 1178],
    [23154, 51, 1420, 538],
    [20747, 154, 2814, 1113],
    [44930, 92, 2224, 1132],
    [28582, 71, 1978, 839],
    [19254, 69, 1815, 675],
    [20085, 74, 1876, 700],
    [57086, 140, 322, 81],
    [92231, 201, 481, 124],
    [167541, 355, 735, 204],
    [261260, 562, 1193, 297],
    [838128, 1966, 3227, 611],
    [2062982, 5107, 6735, 2297],
    [2129555, 5035, 7292, 2294],
    [1948354, 4566, 5975, 2095],
    [64492, 222, 210, 81],
    [70514, 243, 229, 88],
    [113919, 349, 325, 132],
    [177356, 565, 516, 185],
    [6593, 324, 1310, 60],
    [1023, 25, 103, 220],
    [1729, 20, 134, 185],
    [50000, 46, 2025, 510],
    [300000, 1000, 11000, 10960],
    [500000, 1617, 37191, 17141],
    [9189, 339, 1993, 4022],
    [7102, 45, 711, 482],
    [830, 10, 175, 89],
    [1602, 26, 180, 247],
    [3451, 18, 170, 145],
    [549, 15, 33, 172],
];

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("MALFORMED_ROW: line {line} has {actual} fields, expected {expected}")]
    MalformedRow {
        line: u64,
        expected: usize,
        actual: usize,
    },
    #[error("NON_NUMERIC: line {line}, column `{column}`: `{text}` is not a finite number")]
    NonNumeric {
        line: u64,
        column: String,
        text: String,
    },
    #[error("MISSING_HEADER: input has no header line")]
    MissingHeader,
    #[error("row {row} has {actual} values, expected {expected}")]
    RaggedRow {
        row: usize,
        expected: usize,
        actual: usize,
    },
    #[error("row {row}, column `{column}` is not finite")]
    NonFinite { row: usize, column: String },
    #[error("UNKNOWN_COLUMN: `{0}`")]
    UnknownColumn(String),
    #[error("NONPOSITIVE_VALUE: row {row}, column `{column}` is {value}; logarithm needs positive values")]
    NonpositiveValue {
        row: usize,
        column: String,
        value: f64,
    },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Per-system measures, one row per system.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Dataset {
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
    provenance: String,
}

impl Dataset {
    /// Builds a dataset, checking that rows are rectangular and finite.
    pub fn new(
        columns: Vec<String>,
        rows: Vec<Vec<f64>>,
        provenance: impl Into<String>,
    ) -> Result<Self, DatasetError> {
        for (r, row) in rows.iter().enumerate() {
            if row.len() != columns.len() {
                return Err(DatasetError::RaggedRow {
                    row: r + 1,
                    expected: columns.len(),
                    actual: row.len(),
                });
            }
            if let Some(c) = row.iter().position(|v| !v.is_finite()) {
                return Err(DatasetError::NonFinite {
                    row: r + 1,
                    column: columns[c].clone(),
                });
            }
        }
        Ok(Dataset {
            columns,
            rows,
            provenance: provenance.into(),
        })
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// Resolves a column name; `LOC` and `NOL` stand in for each other.
    pub fn column_index(&self, name: &str) -> Result<usize, DatasetError> {
        if let Some(i) = self.columns.iter().position(|c| c == name) {
            return Ok(i);
        }
        let alias = match name {
            "LOC" => "NOL",
            "NOL" => "LOC",
            _ => return Err(DatasetError::UnknownColumn(name.to_owned())),
        };
        self.columns
            .iter()
            .position(|c| c == alias)
            .ok_or_else(|| DatasetError::UnknownColumn(name.to_owned()))
    }

    /// The canonical (stored) name of a possibly aliased column.
    pub fn column_name(&self, name: &str) -> Result<&str, DatasetError> {
        Ok(&self.columns[self.column_index(name)?])
    }

    pub fn column(&self, name: &str) -> Result<Vec<f64>, DatasetError> {
        let i = self.column_index(name)?;
        Ok(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Element-wise logarithm; names gain `suffix`.
    pub(crate) fn map_log(
        &self,
        log: impl Fn(f64) -> f64,
        suffix: &str,
    ) -> Result<Dataset, DatasetError> {
        let mut rows = Vec::with_capacity(self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            let mut out = Vec::with_capacity(row.len());
            for (c, &v) in row.iter().enumerate() {
                if v <= 0.0 {
                    return Err(DatasetError::NonpositiveValue {
                        row: r + 1,
                        column: self.columns[c].clone(),
                        value: v,
                    });
                }
                out.push(log(v));
            }
            rows.push(out);
        }
        Ok(Dataset {
            columns: self
                .columns
                .iter()
                .map(|c| format!("{c}{suffix}"))
                .collect(),
            rows,
            provenance: self.provenance.clone(),
        })
    }

    /// Column sums, in column order.
    pub fn column_sums(&self) -> Vec<f64> {
        let mut sums = vec![0.0; self.columns.len()];
        for row in &self.rows {
            for (s, v) in sums.iter_mut().zip(row) {
                *s += v;
            }
        }
        sums
    }
}

/// The built-in size table of 33 commercial systems.
pub fn builtin_table1() -> Dataset {
    Dataset {
        columns: TABLE1_COLUMNS.iter().map(|&c| c.to_owned()).collect(),
        rows: TABLE1
            .iter()
            .map(|r| r.iter().map(|&v| f64::from(v)).collect())
            .collect(),
        provenance: TABLE1_PROVENANCE.to_owned(),
    }
}

/// Reads comma-separated numeric data whose first line names the columns.
pub fn read_csv<R: Read>(source: R) -> Result<Dataset, DatasetError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(source);
    let header = reader.headers().map_err(csv_error)?.clone();
    if header.is_empty() {
        return Err(DatasetError::MissingHeader);
    }
    let columns: Vec<String> = header.iter().map(str::to_owned).collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(csv_error)?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != columns.len() {
            return Err(DatasetError::MalformedRow {
                line,
                expected: columns.len(),
                actual: record.len(),
            });
        }
        let mut row = Vec::with_capacity(columns.len());
        for (field, column) in record.iter().zip(&columns) {
            match field.parse::<f64>() {
                Ok(v) if v.is_finite() => row.push(v),
                _ => {
                    return Err(DatasetError::NonNumeric {
                        line,
                        column: column.clone(),
                        text: field.to_owned(),
                    })
                }
            }
        }
        rows.push(row);
    }
    Ok(Dataset {
        columns,
        rows,
        provenance: "csv".to_owned(),
    })
}

fn csv_error(e: csv::Error) -> DatasetError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => DatasetError::Io(io),
        csv::ErrorKind::Utf8 { pos, .. } => DatasetError::NonNumeric {
            line: pos.map_or(0, |p| p.line()),
            column: String::new(),
            text: "invalid UTF-8".to_owned(),
        },
        other => DatasetError::Io(io::Error::new(
            io::ErrorKind::InvalidData,
            format!("{other:?}"),
        )),
    }
}

/// Writes the header line then one line per row. Values use the shortest
/// decimal form that reads back exactly, so integers have no decimal point.
pub fn write_csv<W: Write>(data: &Dataset, mut sink: W) -> io::Result<()> {
    writeln!(sink, "{}", data.columns.join(","))?;
    let mut line = String::new();
    for row in &data.rows {
        line.clear();
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                line.push(',');
            }
            line.push_str(&v.to_string());
        }
        line.push('\n');
        sink.write_all(line.as_bytes())?;
    }
    sink.flush()
}

/// One plotted relation: `y_name` against `x_name`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterSeries {
    pub x_name: String,
    pub y_name: String,
    pub points: Vec<(f64, f64)>,
    pub log10: bool,
}

/// One series per `ys` column, with both axes base-10 logged when `log10`.
pub fn scatter(
    data: &Dataset,
    x: &str,
    ys: &[&str],
    log10: bool,
) -> Result<Vec<ScatterSeries>, DatasetError> {
    let xi = data.column_index(x)?;
    let yis = ys
        .iter()
        .map(|y| data.column_index(y))
        .collect::<Result<Vec<_>, _>>()?;
    let coord = |row: usize, col: usize| -> Result<f64, DatasetError> {
        let v = data.rows[row][col];
        if !log10 {
            Ok(v)
        } else if v > 0.0 {
            Ok(v.log10())
        } else {
            Err(DatasetError::NonpositiveValue {
                row: row + 1,
                column: data.columns[col].clone(),
                value: v,
            })
        }
    };
    yis.into_iter()
        .map(|yi| {
            let points = (0..data.n_rows())
                .map(|r| Ok((coord(r, xi)?, coord(r, yi)?)))
                .collect::<Result<Vec<_>, DatasetError>>()?;
            Ok(ScatterSeries {
                x_name: data.columns[xi].clone(),
                y_name: data.columns[yi].clone(),
                points,
                log10,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table1_shape() {
        let t = builtin_table1();
        assert_eq!(t.n_rows(), 33);
        assert_eq!(t.columns(), ["NOL", "NOC", "NOM", "NOA"]);
        assert_eq!(t.rows()[0], vec![15837.0, 65.0, 1446.0, 537.0]);
        assert_eq!(t.rows()[15], vec![2129555.0, 5035.0, 7292.0, 2294.0]);
        assert_eq!(t.provenance(), "paper-table-1");
    }

    #[test]
    fn table1_column_sums() {
        // summed once over the printed table, independently of this code
        assert_eq!(
            builtin_table1().column_sums(),
            vec![9_108_751.0, 23_520.0, 99_514.0, 50_310.0]
        );
    }

    #[test]
    fn loc_alias() {
        let t = builtin_table1();
        assert_eq!(t.column_index("LOC").unwrap(), 0);
        assert_eq!(t.column_name("LOC").unwrap(), "NOL");
        assert!(matches!(
            t.column_index("XYZ"),
            Err(DatasetError::UnknownColumn(_))
        ));
    }

    #[test]
    fn read_small_csv() {
        let d = read_csv("NOL,NOC\n10,2\n".as_bytes()).unwrap();
        assert_eq!(d.n_rows(), 1);
        assert_eq!(d.columns().len(), 2);
        assert_eq!(d.rows()[0], vec![10.0, 2.0]);
    }

    #[test]
    fn header_only_is_empty_dataset() {
        let d = read_csv("NOL,NOC\n".as_bytes()).unwrap();
        assert_eq!(d.n_rows(), 0);
    }

    #[test]
    fn csv_errors() {
        match read_csv("NOL\nabc\n".as_bytes()) {
            Err(DatasetError::NonNumeric { line, column, .. }) => {
                assert_eq!(line, 2);
                assert_eq!(column, "NOL");
            }
            other => panic!("{other:?}"),
        }
        match read_csv("A,B\n1,2\n3\n".as_bytes()) {
            Err(DatasetError::MalformedRow {
                line,
                expected,
                actual,
            }) => assert_eq!((line, expected, actual), (3, 2, 1)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            read_csv("A\ninf\n".as_bytes()),
            Err(DatasetError::NonNumeric { .. })
        ));
        assert!(matches!(
            read_csv("".as_bytes()),
            Err(DatasetError::MissingHeader)
        ));
    }

    #[test]
    fn write_table1_round_trips() {
        let t = builtin_table1();
        let mut buf = Vec::new();
        write_csv(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("NOL,NOC,NOM,NOA\n15837,65,1446,537\n"));
        let back = read_csv(buf.as_slice()).unwrap();
        assert_eq!(back.rows(), t.rows());
        let mut again = Vec::new();
        write_csv(&t, &mut again).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn empty_dataset_writes_header_only() {
        let d = Dataset::new(vec!["A".into(), "B".into()], vec![], "t").unwrap();
        let mut buf = Vec::new();
        write_csv(&d, &mut buf).unwrap();
        assert_eq!(buf, b"A,B\n");
    }

    #[test]
    fn dataset_invariants() {
        assert!(matches!(
            Dataset::new(vec!["A".into()], vec![vec![1.0, 2.0]], "t"),
            Err(DatasetError::RaggedRow { .. })
        ));
        assert!(matches!(
            Dataset::new(vec!["A".into()], vec![vec![f64::NAN]], "t"),
            Err(DatasetError::NonFinite { .. })
        ));
    }

    #[test]
    fn scatter_series() {
        let t = builtin_table1();
        let lin = scatter(&t, "NOL", &["NOC", "NOM", "NOA"], false).unwrap();
        assert_eq!(lin.len(), 3);
        assert!(lin.iter().all(|s| s.points.len() == 33));
        assert_eq!(lin[0].points[0], (15837.0, 65.0));

        let log = scatter(&t, "LOC", &["NOC"], true).unwrap();
        let (x, y) = log[0].points[0];
        assert!((x - 4.199_672_916_720_621).abs() < 1e-12);
        assert!((y - 1.812_913_356_642_855_5).abs() < 1e-12);
        assert_eq!(log[0].x_name, "NOL");

        assert!(matches!(
            scatter(&t, "NOL", &["BAD"], false),
            Err(DatasetError::UnknownColumn(_))
        ));
        let one = Dataset::new(vec!["A".into(), "B".into()], vec![vec![0.0, 1.0]], "t").unwrap();
        assert_eq!(
            scatter(&one, "A", &["B"], false).unwrap()[0].points.len(),
            1
        );
        assert!(matches!(
            scatter(&one, "A", &["B"], true),
            Err(DatasetError::NonpositiveValue { .. })
        ));
    }
}
