//! End-to-end checks of the command-line surface and its exit codes:
//! 0 success, 1 verification/simulation failure, 2 parameter error,
//! 3 I/O or parse error.

use std::path::Path;
use std::process::{Command, Output};

fn pdacache(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pdacache"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn construct_verify_and_simulate_a_stacked_array() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("stacked.pda");
    let built = pdacache(
        &[
            "construct",
            "theorem1",
            "--q",
            "5",
            "--z",
            "3",
            "--m",
            "2",
            "--t",
            "1",
            "--out",
            out.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(built.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("pda 1\n10 10 6 10\n"), "{text}");
    let sidecar = std::fs::read_to_string(dir.path().join("stacked.pda.json")).unwrap();
    assert!(sidecar.contains("\"rate\": \"1\""), "{sidecar}");
    assert!(sidecar.contains("row_labels"));

    let verified = pdacache(&["verify", out.to_str().unwrap()], dir.path());
    assert_eq!(verified.status.code(), Some(0));
    assert!(stdout_of(&verified).contains("\"pass\": true"));

    let simulated = pdacache(
        &[
            "simulate",
            "--file",
            out.to_str().unwrap(),
            "--files",
            "10",
            "--demand",
            "0,1,2,3,4,5,6,7,8,9",
        ],
        dir.path(),
    );
    assert_eq!(simulated.status.code(), Some(0));
    let report = stdout_of(&simulated);
    assert!(report.contains("\"measured_rate\": \"1\""), "{report}");

    let wide = dir.path().join("transformed.pda");
    let built = pdacache(
        &[
            "construct",
            "theorem2",
            "--q",
            "5",
            "--z",
            "3",
            "--m",
            "2",
            "--t",
            "1",
            "--out",
            wide.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(built.status.code(), Some(0));
    let text = std::fs::read_to_string(&wide).unwrap();
    assert!(text.starts_with("pda 1\n15 5 3 10\n"), "{text}");
}

#[test]
fn verify_reports_useless_stars_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("widened.pda");
    let built = pdacache(
        &[
            "construct",
            "theorem1",
            "--q",
            "5",
            "--z",
            "2",
            "--m",
            "2",
            "--t",
            "1",
            "--out",
            out.to_str().unwrap(),
        ],
        dir.path(),
    );
    assert_eq!(built.status.code(), Some(0));
    let verified = pdacache(&["verify", out.to_str().unwrap(), "--useless"], dir.path());
    assert_eq!(verified.status.code(), Some(0));
    let report = stdout_of(&verified);
    assert!(report.contains("\"useless_stars\""), "{report}");
    let doc: serde_json::Value = serde_json::from_str(&report).unwrap();
    let positions = doc["useless_stars"]["positions"].as_array().unwrap();
    assert_eq!(positions.len(), 10);
    assert!(doc["useless_stars"]["per_column"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c.as_u64() == Some(1)));
}

#[test]
fn simulation_failure_exits_with_one() {
    // The grid parses but violates the cross-star condition, so a user
    // cannot peel its broadcast.
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("broken.pda");
    std::fs::write(&bad, "pda 1\n4 4 2 4\n1 * 2 *\n* 0 * 2\n* 1 * 3\n1 * 3 *\n").unwrap();
    let simulated = pdacache(
        &[
            "simulate",
            "--file",
            bad.to_str().unwrap(),
            "--files",
            "4",
            "--demand",
            "0,1,2,3",
        ],
        dir.path(),
    );
    assert_eq!(simulated.status.code(), Some(1));
    assert!(stdout_of(&simulated).contains("false"));
}

#[test]
fn verify_failure_and_parse_error_codes() {
    let dir = tempfile::tempdir().unwrap();
    // Symbol 1 repeated in column 0 without the star witnesses.
    let bad = dir.path().join("bad.pda");
    std::fs::write(&bad, "pda 1\n4 4 2 4\n1 * 2 *\n* 0 * 2\n* 1 * 3\n1 * 3 *\n").unwrap();
    let verified = pdacache(&["verify", bad.to_str().unwrap()], dir.path());
    assert_eq!(verified.status.code(), Some(1));
    assert!(stdout_of(&verified).contains("\"pass\": false"));

    let malformed = dir.path().join("malformed.pda");
    std::fs::write(&malformed, "pda 1\n2 2 1 2\n0 x\n* 1\n").unwrap();
    let parsed = pdacache(&["verify", malformed.to_str().unwrap()], dir.path());
    assert_eq!(parsed.status.code(), Some(3));

    let missing = pdacache(&["verify", "no-such-file.pda"], dir.path());
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn parameter_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = pdacache(
        &[
            "construct",
            "theorem1",
            "--q",
            "2",
            "--z",
            "2",
            "--m",
            "2",
            "--t",
            "1",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn coded_simulation_reports_the_expected_rate() {
    let dir = tempfile::tempdir().unwrap();
    let simulated = pdacache(
        &[
            "simulate",
            "--scheme",
            "theorem3",
            "--q",
            "5",
            "--z",
            "2",
            "--m",
            "2",
            "--t",
            "1",
            "--files",
            "10",
            "--demand",
            "0,1,2,3,4,5,6,7,8,9",
        ],
        dir.path(),
    );
    assert_eq!(simulated.status.code(), Some(0));
    let report = stdout_of(&simulated);
    assert!(report.contains("\"measured_rate\": \"15/4\""), "{report}");
    assert!(report.contains("\"expected_rate\": \"15/4\""));
    assert!(report.contains("\"mds\""));
    assert!(report.contains("\"broadcasts\": 15"));
}

#[test]
fn compare_presets_emit_deterministic_csv() {
    let dir = tempfile::tempdir().unwrap();
    let first = pdacache(&["compare", "fig3"], dir.path());
    let second = pdacache(&["compare", "fig3"], dir.path());
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(stdout_of(&first), stdout_of(&second));
    let csv = stdout_of(&first);
    assert!(csv.starts_with("scheme,params,K,ratio_exact,ratio,rate_exact,rate,F,flag\n"));
    // At z=5 the stacked scheme needs 324 rows, the flexible baseline
    // nine times as many, both at rate 4.
    assert!(
        csv.contains("theorem1,q=9 z=5 m=3 t=2,243,65/81,0.8025,4,4.000,324,"),
        "{csv}"
    );
    assert!(
        csv.contains("scheme15,q=9 z=5 m=3 t=2,243,65/81,0.8025,4,4.000,2916,"),
        "{csv}"
    );

    let table5 = stdout_of(&pdacache(&["compare", "table5"], dir.path()));
    assert!(table5.contains("printed 680"), "{table5}");

    let table3 = stdout_of(&pdacache(&["compare", "table3"], dir.path()));
    assert!(
        table3.contains("theorem2,q=7 z=5 m=4 t=1,70,5/7,0.7143,2,2.000,343,"),
        "{table3}"
    );
}

#[test]
fn custom_sweep_and_tables() {
    let dir = tempfile::tempdir().unwrap();
    let sweep = stdout_of(&pdacache(
        &[
            "compare", "custom", "--scheme", "theorem1", "--q", "9", "--m", "3", "--t", "2", "--z",
            "1:8",
        ],
        dir.path(),
    ));
    assert_eq!(sweep.lines().count(), 9);

    let mn = stdout_of(&pdacache(
        &[
            "compare", "custom", "--scheme", "mn", "--k", "8", "--t", "2",
        ],
        dir.path(),
    ));
    assert!(mn.contains("mn,k=8 t=2,8,1/4,0.2500,2,2.000,28,"), "{mn}");

    let tables = stdout_of(&pdacache(
        &["tables", "--q", "5", "--z", "2", "--m", "2", "--t", "1"],
        dir.path(),
    ));
    assert_eq!(tables.lines().count(), 5);
    assert!(
        tables.contains("theorem3,q=5 z=2 m=2 t=1,10,1/4,0.2500,15/4,3.750,4,"),
        "{tables}"
    );

    let tables = stdout_of(&pdacache(
        &["tables", "--q", "5", "--z", "3", "--m", "2", "--t", "1"],
        dir.path(),
    ));
    assert!(
        tables.contains("theorem1,q=5 z=3 m=2 t=1,10,3/5,0.6000,1,1.000,10,"),
        "{tables}"
    );
    assert!(
        tables.contains("theorem2,q=5 z=3 m=2 t=1,15,3/5,0.6000,2,2.000,5,"),
        "{tables}"
    );
}

#[test]
fn verify_reads_orthogonal_array_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("poa.oa");
    std::fs::write(&good, "oa 1\n4 3 2 2\n0 0 0\n0 1 1\n1 0 1\n1 1 0\n").unwrap();
    let verified = pdacache(&["verify", good.to_str().unwrap()], dir.path());
    assert_eq!(verified.status.code(), Some(0));
    let report = stdout_of(&verified);
    assert!(report.contains("\"kind\": \"oa\""));
    assert!(report.contains("\"proper_row_sum\": 0"));

    let bad = dir.path().join("bad.oa");
    std::fs::write(&bad, "oa 1\n4 2 2 1\n0 0\n0 0\n1 1\n1 0\n").unwrap();
    let failed = pdacache(&["verify", bad.to_str().unwrap()], dir.path());
    assert_eq!(failed.status.code(), Some(1));
}
