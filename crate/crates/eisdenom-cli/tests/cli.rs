use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    run_env(args, &[])
}

fn run_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_eisdenom"));
    cmd.args(args).env_remove("EISDENOM_THREADS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn denominator_weight_ten_gives_691() {
    let out = run(&["denominator", "--n", "10", "--prime-bound", "1000"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json_of(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["N"], "691");
    assert_eq!(v["uncovered_cofactor"], "1");
    assert_eq!(v["all_match"], true);
    let rows = v["per_prime"].as_array().unwrap();
    assert_eq!(rows.len(), 168);
    assert!(rows.iter().all(|r| r["match"] == true));
    let p691 = rows.iter().find(|r| r["p"] == 691).unwrap();
    assert_eq!(p691["delta_p"], 1);
}

#[test]
fn rademacher_of_t_is_one() {
    let out = run(&["rademacher", "--k", "2", "--gamma", "1,1,0,1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json_of(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["value"], "1");
    assert_eq!(v["integral"], true);
}

#[test]
fn rademacher_accepts_negative_entries() {
    let out = run(&["rademacher", "--k", "3", "--gamma", "2,-1,-3,2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(json_of(&out)["integral"], true);
}

#[test]
fn partial_zeta_disc_five() {
    let out = run(&["partial-zeta", "--disc", "5", "--k", "2"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json_of(&out);
    assert_eq!(v["schema"], 1);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["zeta"], "1/30");
    assert_eq!(rows[0]["j_times_zeta"], "4");
}

#[test]
fn zeta_prints_rationals_as_strings() {
    let v = json_of(&run(&["zeta", "--m", "12"]));
    assert_eq!(v["value"], "691/32760");
    assert_eq!(v["N"], "691");
    assert_eq!(v["J"], "32760");
    let v = json_of(&run(&["zeta", "--m", "3"]));
    assert_eq!(v["value"], "0");
}

#[test]
fn dp_reports_defect() {
    let v = json_of(&run(&["dp", "--n", "10", "--nu", "1", "--p", "691"]));
    assert_eq!(v["ord_p"], -1);
    assert_eq!(v["delta_p"], 1);
}

#[test]
fn pair_lift_reports_limit() {
    let v = json_of(&run(&[
        "pair-lift",
        "--n",
        "2",
        "--p",
        "5",
        "--nu",
        "1",
        "--m",
        "24",
    ]));
    assert_eq!(v["limit"], "6");
    assert_eq!(v["ord_p_defect"], 3);
}

#[test]
fn lift_verify_passes_small_case() {
    let out = run(&["lift-verify", "--n", "4", "--p", "3", "--m", "4"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v = json_of(&out);
    assert_eq!(v["all_ok"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
}

#[test]
fn irregular_lists_first_irregular_primes() {
    let v = json_of(&run(&["irregular", "--max-p", "100"]));
    let irregular: Vec<u64> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["index"].as_u64().unwrap() > 0)
        .map(|r| r["p"].as_u64().unwrap())
        .collect();
    assert_eq!(irregular, vec![37, 59, 67]);
}

#[test]
fn sharpness_finds_witness() {
    let v = json_of(&run(&["sharpness", "--k", "2", "--p", "2"]));
    assert_eq!(v["witness"]["D"], 32);
    assert_eq!(v["witness"]["j_times_zeta"], "35");
    assert_eq!(v["exhausted"], false);
}

#[test]
fn usage_errors_exit_two_and_name_precondition() {
    let cases: [(&[&str], &str); 8] = [
        (&["dp", "--n", "3", "--nu", "1", "--p", "5"], "even"),
        (&["dp", "--n", "4", "--nu", "4", "--p", "5"], "nu"),
        (&["dp", "--n", "4", "--nu", "1", "--p", "6"], "prime"),
        (&["zeta", "--m", "721"], "720"),
        (
            &["rademacher", "--k", "2", "--gamma", "1,1,1,1"],
            "determinant",
        ),
        (&["rademacher", "--k", "2", "--gamma", "0,-1,1,0"], "trace"),
        (&["partial-zeta", "--disc", "9", "--k", "2"], "disc"),
        (&[], "subcommand"),
    ];
    for (args, needle) in cases {
        let out = run(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(stderr(&out).contains(needle), "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn clap_errors_exit_two() {
    assert_eq!(run(&["zeta"]).status.code(), Some(2));
    assert_eq!(
        run(&["zeta", "--m", "4", "--format", "xml"]).status.code(),
        Some(2)
    );
}

#[test]
fn bad_thread_count_is_usage_error() {
    let out = run_env(&["zeta", "--m", "4"], &[("EISDENOM_THREADS", "0")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("EISDENOM_THREADS"));
}

#[test]
fn output_is_deterministic_across_runs_and_threads() {
    for args in [
        &["sharpness", "--k", "2", "--p", "2", "--format", "csv"][..],
        &["irregular", "--max-p", "300"][..],
        &[
            "partial-zeta",
            "--disc",
            "229",
            "--k",
            "3",
            "--format",
            "text",
        ][..],
    ] {
        let a = run_env(args, &[("EISDENOM_THREADS", "1")]);
        let b = run_env(args, &[("EISDENOM_THREADS", "4")]);
        let c = run(args);
        assert_eq!(a.status.code(), Some(0));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stdout, c.stdout, "{args:?}");
    }
}

#[test]
fn csv_mirrors_json_field_order() {
    let json = json_of(&run(&["dp", "--n", "4", "--nu", "1", "--p", "7"]));
    let keys: Vec<&String> = json.as_object().unwrap().keys().collect();
    let out = run(&["dp", "--n", "4", "--nu", "1", "--p", "7", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    assert_eq!(header, keys.iter().map(|k| k.as_str()).collect::<Vec<_>>());
}

#[test]
fn csv_rows_prefix_summary_fields() {
    let out = run(&[
        "partial-zeta",
        "--disc",
        "229",
        "--k",
        "2",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("schema,command,J,classes,D,"));
    assert!(lines[1..]
        .iter()
        .all(|l| l.starts_with("1,partial-zeta,120,3,229,")));
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join(format!("eisdenom-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("zeta.json");
    let out = run(&["zeta", "--m", "4", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["value"], "1/120");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn text_format_lists_summary() {
    let out = run(&["zeta", "--m", "12", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(
        text,
        "command: zeta\nm: 12\nvalue: 691/32760\nN: 691\nJ: 32760\n"
    );
}
