use moodkit::{builtin_table1, log_transform, read_csv, scatter, write_csv, Dataset, DatasetError};
use proptest::prelude::*;

fn to_csv(d: &Dataset) -> String {
    let mut buf = Vec::new();
    write_csv(d, &mut buf).unwrap();
    String::from_utf8(buf).unwrap()
}

#[test]
fn builtin_round_trips_exactly() {
    let d = builtin_table1();
    let text = to_csv(&d);
    assert!(text.starts_with("NOL,NOC,NOM,NOA\n15837,65,1446,537\n"));
    assert!(!text.contains('.'));
    let back = read_csv(text.as_bytes()).unwrap();
    assert_eq!(back.columns(), d.columns());
    assert_eq!(back.rows(), d.rows());
    assert_eq!(to_csv(&back), text);
}

#[test]
fn empty_dataset_writes_only_a_header() {
    let d = Dataset::new(vec!["a".into(), "b".into()], vec![], "t").unwrap();
    assert_eq!(to_csv(&d), "a,b\n");
    assert_eq!(read_csv("a,b\n".as_bytes()).unwrap().n_rows(), 0);
}

#[test]
fn scatter_series_follow_row_order() {
    let d = builtin_table1();
    let series = scatter(&d, "LOC", &["NOC", "NOM", "NOA"], false).unwrap();
    assert_eq!(series.len(), 3);
    for (s, col) in series.iter().zip(["NOC", "NOM", "NOA"]) {
        let ys = d.column(col).unwrap();
        let xs = d.column("NOL").unwrap();
        let expected: Vec<(f64, f64)> = xs.into_iter().zip(ys).collect();
        assert_eq!(s.points, expected);
    }
}

#[test]
fn log_scatter_rejects_nonpositive_values() {
    let d = Dataset::new(
        vec!["x".into(), "y".into(), "z".into()],
        vec![vec![1.0, 2.0, -1.0], vec![10.0, 0.0, 5.0]],
        "t",
    )
    .unwrap();
    assert!(matches!(
        scatter(&d, "x", &["y"], true),
        Err(DatasetError::NonpositiveValue { .. })
    ));
    // z is negative but unused by this plot
    assert!(scatter(&d, "x", &["y"], false).is_ok());
    assert!(matches!(
        scatter(&d, "x", &["w"], false),
        Err(DatasetError::UnknownColumn(c)) if c == "w"
    ));
}

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        (-1_000_000i64..1_000_000).prop_map(|v| v as f64),
        -1e12f64..1e12,
        proptest::num::f64::NORMAL,
    ]
}

fn dataset() -> impl Strategy<Value = Dataset> {
    (1usize..5, 0usize..20).prop_flat_map(|(cols, rows)| {
        proptest::collection::vec(proptest::collection::vec(finite(), cols), rows).prop_map(
            move |rows| {
                let names = (0..cols).map(|i| format!("c{i}")).collect();
                Dataset::new(names, rows, "t").unwrap()
            },
        )
    })
}

fn positive_dataset() -> impl Strategy<Value = Dataset> {
    proptest::collection::vec(proptest::collection::vec(1e-3f64..1e9, 3), 1..20)
        .prop_map(|rows| Dataset::new(vec!["a".into(), "b".into(), "c".into()], rows, "t").unwrap())
}

proptest! {
    #[test]
    fn csv_round_trip(d in dataset()) {
        let text = to_csv(&d);
        let back = read_csv(text.as_bytes()).unwrap();
        prop_assert_eq!(back.columns(), d.columns());
        prop_assert_eq!(back.rows(), d.rows());
        prop_assert_eq!(to_csv(&back), text);
    }

    #[test]
    fn log_scatter_is_scatter_of_logged_data(d in positive_dataset()) {
        let direct = scatter(&d, "a", &["b", "c"], true).unwrap();
        let logged = log_transform(&d, true).unwrap();
        let via = scatter(&logged, "a_log10", &["b_log10", "c_log10"], false).unwrap();
        for (s, t) in direct.iter().zip(&via) {
            prop_assert_eq!(&s.points, &t.points);
            prop_assert_eq!(s.points.len(), d.n_rows());
        }
        for (s, col) in direct.iter().zip(["b", "c"]) {
            for ((x, y), row) in s.points.iter().zip(d.rows()) {
                let j = if col == "b" { 1 } else { 2 };
                prop_assert!((x - row[0].log10()).abs() <= 1e-12);
                prop_assert!((y - row[j].log10()).abs() <= 1e-12);
            }
        }
    }
}
