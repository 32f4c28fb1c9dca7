use std::process::{Command, Output};

fn cmeis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cmeis")).args(args).env_remove("CMEIS_PRECISION_BITS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn coefficients_of_first_slice() {
    let o = cmeis(&["coeffs", "--d1", "-3", "--d2", "-7", "--trace-max", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let lines: Vec<serde_json::Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 4);
    let maps: Vec<_> = lines.iter().map(|v| v["a_alpha"].clone()).collect();
    assert_eq!(
        maps,
        [
            serde_json::json!({"3": "4"}),
            serde_json::json!({"5": "4"}),
            serde_json::json!({"5": "4"}),
            serde_json::json!({"3": "4"})
        ]
    );
    for v in &lines {
        assert_eq!(v["kind"], "holomorphic");
        assert_eq!(v["deg_X"].as_object().unwrap().len(), 1);
    }
}

#[test]
fn json_output_round_trips() {
    let o = cmeis(&["coeffs", "--d1", "-4", "--d2", "-7", "--trace-max", "4", "--v1", "0.5", "--v2", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let records = cmeis::record::read_json_lines(&text).unwrap();
    let mut again = Vec::new();
    cmeis::record::write_json_lines(&mut again, &records).unwrap();
    assert_eq!(String::from_utf8(again).unwrap(), text);
    assert!(text.contains(r#""kind":"constant""#));
    assert!(text.contains(r#""kind":"mixed""#));
}

#[test]
fn csv_has_one_row_per_record() {
    let json = cmeis(&["coeffs", "--d1", "-3", "--d2", "-4", "--trace-max", "3"]);
    let csv = cmeis(&["coeffs", "--d1", "-3", "--d2", "-4", "--trace-max", "3", "--format", "csv"]);
    assert_eq!(csv.status.code(), Some(0));
    let mut rd = csv::Reader::from_reader(csv.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = rd.records().map(|r| r.unwrap()).collect();
    let records: Vec<serde_json::Value> = stdout(&json).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), records.len());
    for (row, rec) in rows.iter().zip(&records) {
        assert_eq!(&row[0], rec["kind"].as_str().unwrap());
        assert_eq!(row[1].parse::<i64>().unwrap(), rec["m"].as_i64().unwrap());
        assert_eq!(serde_json::from_str::<serde_json::Value>(&row[5]).unwrap(), rec["a_alpha"]);
        assert_eq!(&row[10], rec["a_alpha_float"].as_str().unwrap());
    }
}

#[test]
fn degrees() {
    let o = cmeis(&["degree", "--d1", "-3", "--d2", "-7", "--m", "1"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["deg_T"], serde_json::json!({"3": "2", "5": "2"}));
    assert!(v["value"].as_str().unwrap().starts_with("5.4161004"));
    let o = cmeis(&["degree", "--d1", "-3", "--d2", "-4", "--m", "1", "--digits", "8"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["deg_T"], serde_json::json!({"2": "2", "3": "1"}));
    assert_eq!(v["value"], "2.4849066");
}

#[test]
fn singular_moduli_reports() {
    for (d1, d2, res) in [("-3", "-7", "3375"), ("-3", "-4", "1728"), ("-3", "-8", "8000")] {
        let o = cmeis(&["singular-moduli", "--d1", d1, "--d2", d2]);
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
        assert_eq!(v["resultant"], res);
        assert_eq!(v["passed"], true);
        assert_eq!(v["lhs"], v["rhs"]);
    }
}

#[test]
fn precision_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_cmeis"))
        .args(["singular-moduli", "--d1", "-7", "--d2", "-23"])
        .env("CMEIS_PRECISION_BITS", "96")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["precision"][0], 96);
    let bad = Command::new(env!("CARGO_BIN_EXE_cmeis"))
        .args(["singular-moduli", "--d1", "-3", "--d2", "-7"])
        .env("CMEIS_PRECISION_BITS", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(cmeis(&["coeffs", "--d1", "-3", "--d2", "-7", "--trace-max", "0"]).status.code(), Some(2));
    assert_eq!(cmeis(&["coeffs", "--d1", "-3", "--d2", "-12", "--trace-max", "1"]).status.code(), Some(2));
    assert_eq!(cmeis(&["degree", "--d1", "-3", "--d2", "-3", "--m", "1"]).status.code(), Some(2));
    assert_eq!(cmeis(&["degree", "--d1", "-3", "--d2", "-7", "--m", "0"]).status.code(), Some(2));
    assert_eq!(cmeis(&["coeffs", "--d1", "-3", "--d2", "-7", "--trace-max", "1", "--v1", "1"]).status.code(), Some(2));
    assert_eq!(
        cmeis(&["coeffs", "--d1", "-3", "--d2", "-7", "--trace-max", "1", "--v1", "x", "--v2", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(cmeis(&["verify", "--suite", "nope"]).status.code(), Some(2));
    let help = cmeis(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    assert!(stdout(&help).contains("3  precision failure"));
}

#[test]
fn verify_all_passes() {
    let o = cmeis(&["verify", "--suite", "all", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stderr.is_empty());
}

#[test]
fn injected_fault_names_the_invariant() {
    let o = cmeis(&["verify", "--suite", "genus", "--seed", "1", "--inject-fault", "chi_multiplicative"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    let first: serde_json::Value = serde_json::from_str(err.lines().next().unwrap()).unwrap();
    assert_eq!(first["invariant"], "chi_multiplicative");
    assert_eq!(first["suite"], "genus");
    assert_eq!(cmeis(&["verify", "--inject-fault", "no_such_check"]).status.code(), Some(2));
}
