//! End-to-end checks of the command-line interface: exit codes, output
//! formats, config-file overlay, and reproducibility from embedded configs.

use std::fs;

use pinc_cli::run;
use serde_json::Value;
use tempfile::tempdir;

fn run_args(args: &[&str]) -> i32 {
    let argv: Vec<String> = std::iter::once("pinc".to_string())
        .chain(args.iter().map(|s| s.to_string()))
        .collect();
    run(argv)
}

#[test]
fn region_example_matches_documented_values() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("region.json");
    let code = run_args(&[
        "region",
        "--topology",
        "mac",
        "--g1",
        "1",
        "--g2",
        "1",
        "--p1",
        "1",
        "--p2",
        "1",
        "--noise",
        "1",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let value: Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(value["h_u_given_v"].as_f64().unwrap(), 1.0);
    assert_eq!(value["h_v_given_u"].as_f64().unwrap(), 1.0);
    assert!((value["h_uv"].as_f64().unwrap() - 3f64.log2()).abs() < 1e-9);
    assert_eq!(value["config"]["command"], "region");
    assert_eq!(value["config"]["channel"]["gains"]["g1"], 1.0);
}

#[test]
fn check_reports_link_rate_condition_with_entropy() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("check.json");
    let code = run_args(&[
        "check",
        "--topology",
        "ucc_marc",
        "--g1",
        "1",
        "--g2",
        "1",
        "--gr",
        "1",
        "--g1r",
        "2",
        "--g2r",
        "2",
        "--g21",
        "4",
        "--p1",
        "1",
        "--p2",
        "1",
        "--pr",
        "1",
        "--noise",
        "1",
        "--source",
        "dsbs:0.11",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let value: Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    let names: Vec<&str> = value["conditions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"cooperative_link_rate"));
    let h_u_given_v = value["entropy"]["h_u_given_v"].as_f64().unwrap();
    assert!((h_u_given_v - 0.49993).abs() < 1e-4);
    assert!(value["feasibility"]["feasible"].is_boolean());
}

#[test]
fn check_without_source_on_mac_gives_header_only_csv() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("check.csv");
    let code = run_args(&[
        "check",
        "--topology",
        "mac",
        "--g1",
        "1",
        "--g2",
        "1",
        "--p1",
        "1",
        "--p2",
        "1",
        "--noise",
        "1",
        "--format",
        "csv",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text, "kind,name,lhs,rhs,satisfied,slack,config\n");
}

#[test]
fn schedule_prints_table_text_by_default() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("schedule.txt");
    let code = run_args(&[
        "schedule",
        "--topology",
        "irc",
        "--blocks",
        "2",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("block"));
    assert!(text.contains("W11"));
    assert!(text.contains("W22"));
    assert!(text.lines().last().unwrap().starts_with("# config "));
}

#[test]
fn lemma_reports_independent_optimum() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("lemma.json");
    let code = run_args(&[
        "lemma",
        "--gains",
        "1,1",
        "--powers",
        "1,1",
        "--noise",
        "1",
        "--samples",
        "8",
        "--seed",
        "3",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let value: Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert!((value["minimax"]["value"].as_f64().unwrap() - 3f64.log2()).abs() < 1e-12);
    assert_eq!(value["independence"]["max_at_independent"], true);
    assert_eq!(value["config"]["lemma"]["seed"], 3_u64);
}

#[test]
fn simulate_requires_explicit_seed() {
    let code = run_args(&[
        "simulate",
        "--topology",
        "mac",
        "--g1",
        "1",
        "--g2",
        "1",
        "--p1",
        "1",
        "--p2",
        "1",
        "--noise",
        "1",
        "--source",
        "dsbs:0.11",
        "--rate1",
        "1",
        "--rate2",
        "1",
        "--n",
        "8",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn simulate_budget_overrun_exits_3() {
    let code = run_args(&[
        "simulate",
        "--topology",
        "mac",
        "--g1",
        "1",
        "--g2",
        "1",
        "--p1",
        "1",
        "--p2",
        "1",
        "--noise",
        "1",
        "--source",
        "dsbs:0.11",
        "--rate1",
        "40",
        "--rate2",
        "0",
        "--n",
        "1",
        "--seed",
        "5",
    ]);
    assert_eq!(code, 3);
}

#[test]
fn simulate_rejects_topologies_without_a_simulator() {
    let code = run_args(&[
        "simulate",
        "--topology",
        "ic",
        "--g11",
        "1",
        "--g12",
        "1",
        "--g21",
        "1",
        "--g22",
        "1",
        "--p1",
        "1",
        "--p2",
        "1",
        "--noise",
        "1",
        "--source",
        "dsbs:0.11",
        "--rate1",
        "1",
        "--rate2",
        "1",
        "--n",
        "8",
        "--seed",
        "5",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn unwritable_destination_exits_2() {
    let code = run_args(&[
        "region",
        "--topology",
        "mac",
        "--g1",
        "1",
        "--g2",
        "1",
        "--p1",
        "1",
        "--p2",
        "1",
        "--noise",
        "1",
        "--output",
        "/nonexistent-dir-for-sure/out.json",
    ]);
    assert_eq!(code, 2);
}

#[test]
fn simulate_csv_rows_and_worst_grid_sup() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("sim.csv");
    let code = run_args(&[
        "simulate",
        "--topology",
        "mac",
        "--g1",
        "1",
        "--g2",
        "1",
        "--p1",
        "1",
        "--p2",
        "1",
        "--noise",
        "1",
        "--source",
        "dsbs:0.11",
        "--rate1",
        "1",
        "--rate2",
        "1",
        "--n",
        "8",
        "--trials",
        "4",
        "--seed",
        "9",
        "--noise-scale",
        "0",
        "--phase-mode",
        "worst_grid:3",
        "--format",
        "csv",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "trial_count,errors,error_rate,stage,n,B,rate1,rate2,seed,theta_mode,config"
    );
    let stages: Vec<&str> = lines.map(|l| l.split(',').nth(3).unwrap()).collect();
    assert_eq!(
        stages,
        ["final", "relay", "destination", "source", "sup_estimate"]
    );
}

#[test]
fn identical_runs_produce_identical_files() {
    let dir = tempdir().unwrap();
    let first = dir.path().join("a.json");
    let second = dir.path().join("b.json");
    for (out, workers) in [(&first, "1"), (&second, "2")] {
        let code = run_args(&[
            "simulate",
            "--topology",
            "uncc_marc",
            "--g1",
            "1",
            "--g2",
            "1",
            "--gr",
            "1",
            "--g1r",
            "2",
            "--g2r",
            "2",
            "--p1",
            "1",
            "--p2",
            "1",
            "--pr",
            "1",
            "--noise",
            "1",
            "--source",
            "dsbs:0.11",
            "--rate1",
            "0.8",
            "--rate2",
            "0.8",
            "--n",
            "8",
            "--blocks",
            "2",
            "--trials",
            "6",
            "--seed",
            "11",
            "--workers",
            workers,
            "--output",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, 0);
    }
    let a = fs::read(&first).unwrap();
    let b = fs::read(&second).unwrap();
    // The worker-count flag is echoed in the config, so compare results and
    // the rest of the config per field instead of raw bytes.
    let va: Value = serde_json::from_slice(&a).unwrap();
    let vb: Value = serde_json::from_slice(&b).unwrap();
    assert_eq!(va["rows"], vb["rows"]);
    assert_eq!(va["config"]["sim"], vb["config"]["sim"]);
}

#[test]
fn embedded_config_reproduces_the_run() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("sim.json");
    let args = [
        "simulate",
        "--topology",
        "mac",
        "--g1",
        "1",
        "--g2",
        "1",
        "--p1",
        "1",
        "--p2",
        "1",
        "--noise",
        "1",
        "--source",
        "dsbs:0.11",
        "--rate1",
        "0.9",
        "--rate2",
        "0.9",
        "--n",
        "8",
        "--trials",
        "5",
        "--seed",
        "21",
        "--output",
        out.to_str().unwrap(),
    ];
    assert_eq!(run_args(&args), 0);
    let first = fs::read(&out).unwrap();
    let value: Value = serde_json::from_slice(&first).unwrap();
    let config_path = dir.path().join("config.json");
    fs::write(&config_path, serde_json::to_vec(&value["config"]).unwrap()).unwrap();
    fs::remove_file(&out).unwrap();
    assert_eq!(
        run_args(&["simulate", "--config", config_path.to_str().unwrap()]),
        0
    );
    let second = fs::read(&out).unwrap();
    assert_eq!(first, second);
}

#[test]
fn config_file_overrides_flags_end_to_end() {
    let dir = tempdir().unwrap();
    let out = dir.path().join("region.json");
    let config_path = dir.path().join("override.json");
    fs::write(&config_path, "{\"channel\":{\"gains\":{\"g1\":2.0}}}").unwrap();
    let code = run_args(&[
        "region",
        "--topology",
        "mac",
        "--g1",
        "1",
        "--g2",
        "1",
        "--p1",
        "1",
        "--p2",
        "1",
        "--noise",
        "1",
        "--config",
        config_path.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let value: Value = serde_json::from_slice(&fs::read(&out).unwrap()).unwrap();
    assert_eq!(value["config"]["channel"]["gains"]["g1"], 2.0);
    // H(U|V) bound becomes log2(1 + 4) for g1 = 2.
    assert!((value["h_u_given_v"].as_f64().unwrap() - 5f64.log2()).abs() < 1e-12);
}

#[test]
fn config_file_cannot_switch_commands() {
    let dir = tempdir().unwrap();
    let config_path = dir.path().join("other.json");
    fs::write(&config_path, "{\"command\":\"simulate\"}").unwrap();
    let code = run_args(&[
        "region",
        "--topology",
        "mac",
        "--g1",
        "1",
        "--g2",
        "1",
        "--p1",
        "1",
        "--p2",
        "1",
        "--noise",
        "1",
        "--config",
        config_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 2);
}
