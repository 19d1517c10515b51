use std::process::{Command, Output};

fn eds(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eds"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn sequence_reports_identities() {
    let o = eds(&[
        "sequence",
        "--D",
        "125",
        "--point",
        "121/4,1419/8",
        "--max-index",
        "6",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout(&o);
    assert_eq!(v["divisibility"], true);
    assert_eq!(v["identities"], true);
}

#[test]
fn run_case_row_i_passes() {
    let o = eds(&["run-case", "--case", "table3-i"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert_eq!(stdout(&o)["status"], "PASS");
}

#[test]
fn row_iii_needs_data() {
    let o = eds(&["run-case", "--case", "table3-iii", "--lmax", "100"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn point_off_curve_is_an_error() {
    let o = eds(&["frey", "--D", "125", "--point", "1,1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());
}

#[test]
fn corrupted_fixture_is_rejected() {
    let path = std::env::temp_dir().join(format!("eds-corrupt-{}.json", std::process::id()));
    std::fs::write(&path, "{\"newforms\": [ {\"level\": 17").unwrap();
    let o = eds(&[
        "eliminate",
        "--case",
        "dm17",
        "--newforms",
        path.to_str().unwrap(),
    ]);
    std::fs::remove_file(&path).ok();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn descent_local_solubility() {
    let o = eds(&["descent", "local", "--l", "2", "--i", "2", "--p", "2"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stdout).contains("Insoluble"));
}
