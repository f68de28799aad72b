use std::fs;
use std::process::{Command, Output};

use moodkit::{builtin_table1, fit, ModelSpec};

fn moodkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_moodkit"))
        .args(args)
        .env_remove("MOODKIT_FORMAT")
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const THREE_CLASSES: &str = "\
class Account {
    method deposit;
    hidden method audit;
    hidden attribute balance;
    uses Ledger;
}
class Savings extends Account {
    method deposit overrides Account.deposit;
    attribute rate;
}
class Ledger { method post; }
";

#[test]
fn metrics_json_has_six_metric_objects() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bank.omdl");
    fs::write(&path, THREE_CLASSES).unwrap();
    let o = moodkit(&["metrics", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for key in ["mhf", "ahf", "mif", "aif", "pf", "cf"] {
        let m = &v[key];
        assert!(
            m["numerator"].is_u64() && m["denominator"].is_u64(),
            "{key}"
        );
        assert!(m["value"].is_f64(), "{key}");
    }
    assert_eq!(v["tc"], 3);
    assert_eq!(v["mhf"]["numerator"], 1);
    assert_eq!(v["mhf"]["denominator"], 4);
    assert_eq!(v["cf"]["numerator"], 1);
    assert_eq!(v["cf"]["denominator"], 6);
}

#[test]
fn metrics_formats_and_env_default() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bank.omdl");
    fs::write(&path, THREE_CLASSES).unwrap();
    let p = path.to_str().unwrap();

    let table = stdout(&moodkit(&["metrics", p]));
    assert!(table.starts_with("Metric"));
    assert!(table.contains("TC = 3"));

    let csv = moodkit(&["metrics", p, "--format", "csv"]);
    let via_env = Command::new(env!("CARGO_BIN_EXE_moodkit"))
        .args(["metrics", p])
        .env("MOODKIT_FORMAT", "csv")
        .output()
        .unwrap();
    assert_eq!(csv.stdout, via_env.stdout);
    assert!(stdout(&csv).starts_with("metric,value,numerator,denominator,undefined_reason\n"));
    assert_eq!(stdout(&csv).lines().count(), 7);

    // an explicit flag beats the environment
    let flag_wins = Command::new(env!("CARGO_BIN_EXE_moodkit"))
        .args(["metrics", p, "--format", "json"])
        .env("MOODKIT_FORMAT", "csv")
        .output()
        .unwrap();
    assert!(stdout(&flag_wins).starts_with('{'));
}

#[test]
fn metrics_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("absent.omdl");
    let o = moodkit(&["metrics", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("absent.omdl"));

    let bad = dir.path().join("bad.omdl");
    fs::write(&bad, "class A {\n  method ;\n}\n").unwrap();
    let o = moodkit(&["metrics", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("2:10: expected identifier, found `;`"),
        "{}",
        stderr(&o)
    );

    let cyclic = dir.path().join("cycle.omdl");
    fs::write(&cyclic, "class A extends B { }\nclass B extends A { }\n").unwrap();
    let o = moodkit(&["metrics", cyclic.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("CYCLE"));
    assert!(o.stdout.is_empty());
}

#[test]
fn fit_table_follows_coefficients_summary_anova_order() {
    let o = moodkit(&["fit", "builtin:table1", "--response", "LOC"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let c = text.find("Coefficients").unwrap();
    let s = text.find("Model Summary").unwrap();
    let a = text.find("ANOVA").unwrap();
    assert!(c < s && s < a);
    for needle in [
        "-9458.918",
        "421.994",
        "3.025",
        "-16.009",
        "37024.69",
        "2734.947",
        "1370827508",
    ] {
        assert!(text.contains(needle), "missing {needle}");
    }

    let noc = stdout(&moodkit(&["fit", "builtin:table1", "--response", "NOC"]));
    for needle in ["24.439", "87.55", "2788.435", "64340960.55"] {
        assert!(noc.contains(needle), "missing {needle}\n{noc}");
    }
}

#[test]
fn json_and_csv_outputs_are_deterministic() {
    for format in ["json", "csv"] {
        let args = [
            "fit",
            "builtin:table1",
            "--response",
            "all",
            "--format",
            format,
        ];
        let first = moodkit(&args);
        let second = moodkit(&args);
        assert_eq!(first.status.code(), Some(0));
        assert_eq!(first.stdout, second.stdout);
    }
    let csv = stdout(&moodkit(&[
        "fit",
        "builtin:table1",
        "--response",
        "all",
        "--format",
        "csv",
    ]));
    assert_eq!(csv.lines().count(), 1 + 16);
}

#[test]
fn fit_on_csv_file_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("d.csv");
    fs::write(&data, "y,a,b\n1,0,1\n3,1,0\n4,2,2\n8,3,1\n9,4,3\n13,5,1\n").unwrap();
    let o = moodkit(&[
        "fit",
        data.to_str().unwrap(),
        "--response",
        "y",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["coefficients"].as_array().unwrap().len(), 3);

    let ragged = dir.path().join("r.csv");
    fs::write(&ragged, "y,a\n1,2\n3\n").unwrap();
    let o = moodkit(&["fit", ragged.to_str().unwrap(), "--response", "y"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("MALFORMED_ROW"));

    let text = dir.path().join("t.csv");
    fs::write(&text, "y\nabc\n").unwrap();
    let o = moodkit(&["fit", text.to_str().unwrap(), "--response", "y"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("NON_NUMERIC: line 2"));

    let header_only = dir.path().join("h.csv");
    fs::write(&header_only, "y,a\n").unwrap();
    let o = moodkit(&["fit", header_only.to_str().unwrap(), "--response", "y"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("INSUFFICIENT_DATA"));

    let o = moodkit(&["fit", "builtin:table1", "--response", "XYZ"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("UNKNOWN_COLUMN"));
}

#[test]
fn predict_uses_full_precision_coefficients() {
    let o = moodkit(&[
        "predict",
        "builtin:table1",
        "--response",
        "NOL",
        "--NOC",
        "65",
        "--NOM",
        "1446",
        "--NOA",
        "537",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let value: f64 = stdout(&o).trim().parse().unwrap();
    assert!((value - 13748.0).abs() < 1.0);
    assert!((value - 13747.811484478427).abs() < 1e-6);

    let zeros = moodkit(&[
        "predict",
        "builtin:table1",
        "--response",
        "LOC",
        "--NOC=0",
        "--NOM",
        "0",
        "--NOA",
        "0",
    ]);
    let value: f64 = stdout(&zeros).trim().parse().unwrap();
    let intercept = fit(&builtin_table1(), &ModelSpec::interchange("NOL"))
        .unwrap()
        .coefficients[0]
        .beta;
    assert_eq!(value, intercept);

    let o = moodkit(&[
        "predict",
        "builtin:table1",
        "--response",
        "NOC",
        "--LOC",
        "15837",
        "--NOM",
        "1446",
        "--NOA",
        "537",
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["prediction"].as_f64().unwrap() - 72.4639108084413).abs() < 1e-8);
}

#[test]
fn predict_errors() {
    let o = moodkit(&[
        "predict",
        "builtin:table1",
        "--response",
        "NOL",
        "--NOC",
        "65",
        "--NOM",
        "1446",
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("MISSING_PREDICTOR") && stderr(&o).contains("NOA"));

    let o = moodkit(&[
        "predict",
        "builtin:table1",
        "--response",
        "NOL",
        "--NOC",
        "x",
    ]);
    assert_eq!(o.status.code(), Some(2));

    let o = moodkit(&[
        "predict",
        "builtin:table1",
        "--response",
        "NOL",
        "--NOC",
        "1",
        "--NOM",
        "1",
        "--NOA",
        "1",
        "--BOGUS",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("BOGUS"));
}

#[test]
fn dataset_csv_round_trips() {
    let o = moodkit(&["dataset", "builtin:table1", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 34);
    let back = moodkit::read_csv(text.as_bytes()).unwrap();
    assert_eq!(back.rows(), builtin_table1().rows());

    let table = stdout(&moodkit(&["dataset", "builtin:table1"]));
    assert!(table.contains("N = 33"));
}

#[test]
fn plot_writes_one_file_per_series() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = moodkit(&[
        "plot",
        "builtin:table1",
        "--x",
        "NOL",
        "--y",
        "NOC,NOM,NOA",
        "--out",
        out,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let noc = fs::read_to_string(dir.path().join("NOC_vs_NOL.csv")).unwrap();
    assert!(noc.starts_with("x,y\n15837,65\n"));
    assert_eq!(noc.lines().count(), 34);

    let o = moodkit(&[
        "plot",
        "builtin:table1",
        "--x",
        "LOC",
        "--y",
        "NOM",
        "--log10",
        "--svg",
        "--out",
        out,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let svg = fs::read_to_string(dir.path().join("NOM_vs_NOL_log10.svg")).unwrap();
    assert!(svg.contains("viewBox=\"0 0 640 480\""));
    assert_eq!(svg.matches("<circle").count(), 33);
    assert!(svg.contains("log10(NOM)"));
}

#[test]
fn plot_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = moodkit(&[
        "plot",
        "builtin:table1",
        "--x",
        "NOL",
        "--y",
        "NOPE",
        "--out",
        out,
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("UNKNOWN_COLUMN"));

    let data = dir.path().join("z.csv");
    fs::write(&data, "a,b\n1,0\n2,3\n").unwrap();
    let o = moodkit(&[
        "plot",
        data.to_str().unwrap(),
        "--x",
        "a",
        "--y",
        "b",
        "--log10",
        "--out",
        out,
    ]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("NONPOSITIVE_VALUE"));
}

#[test]
fn in_process_runner_matches_binary() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = moodkit_cli::run(
        ["moodkit", "dataset", "builtin:table1", "--format", "csv"],
        &mut out,
        &mut err,
    );
    assert_eq!(code, 0);
    assert_eq!(
        out,
        moodkit(&["dataset", "builtin:table1", "--format", "csv"]).stdout
    );

    let code = moodkit_cli::run(["moodkit", "frobnicate"], &mut out, &mut err);
    assert_eq!(code, 2);
}
