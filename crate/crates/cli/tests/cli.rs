use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hurwitz-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json report")
}

#[test]
fn unknown_type_is_a_usage_error() {
    assert_eq!(code(&run(&["rootsys", "build", "--type", "Q7"])), 64);
    assert_eq!(code(&run(&["rootsys", "build"])), 64);
    assert_eq!(
        code(&run(&["poset", "gen", "--type", "D4.1.1", "--window", "0"])),
        64
    );
    assert_eq!(
        code(&run(&[
            "weyl", "length", "--type", "A2", "--word", "1", "--emit", "dot"
        ])),
        64
    );
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn report_carries_schema_and_command() {
    let o = run(&["rootsys", "build", "--type", "A3"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["schema"], "hurwitz-lab/1");
    assert_eq!(r["command"][0], "rootsys");
    assert_eq!(r["payload"]["root_count"], 12);
    assert!(r["elapsed_ms"].is_number());
}

#[test]
fn elliptic_build_reports_signature() {
    let r = report(&run(&["rootsys", "build", "--type", "E6.1.1"]));
    assert_eq!(r["payload"]["signature"]["positive"], 6);
    assert_eq!(r["payload"]["signature"]["zero"], 2);
    assert_eq!(r["payload"]["mark_obstruction"], true);
}

#[test]
fn reports_are_reproducible() {
    let args = [
        "poset",
        "gen",
        "--type",
        "D4",
        "--window",
        "1",
        "--no-timing",
        "--threads",
        "1",
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let mut multi = args.to_vec();
    multi[8] = "2";
    let c = run(&multi);
    assert_eq!(report(&a)["payload"], report(&c)["payload"]);
}

#[test]
fn transitivity_sweep_passes_on_a2() {
    let o = run(&["verify", "transitivity", "--type", "A2"]);
    assert_eq!(code(&o), 0);
    let r = report(&o);
    assert_eq!(r["payload"]["holds"], true);
    for e in r["payload"]["entries"].as_array().unwrap() {
        assert_eq!(e["orbits"], 1);
    }
}

#[test]
fn d4_tables_report_per_row() {
    // the second D4 row is printed as the full twist, whose matrix is -I; the
    // command reports it as not reproduced and exits with the mismatch code
    let o = run(&["verify", "tables", "--type", "D4"]);
    assert_eq!(code(&o), 1);
    let r = report(&o);
    let rows = r["payload"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|row| row["membership"] == true));
    assert_eq!(r["payload"]["certificate"]["generates"], true);
}

#[test]
fn documented_spellings_are_accepted() {
    assert_eq!(code(&run(&["verify", "theorem15", "--type", "A2"])), 0);
    assert_eq!(
        code(&run(&[
            "elliptic",
            "verify-appendix",
            "--type",
            "E6",
            "--emit",
            "text"
        ])),
        1
    );
}

#[test]
fn single_letter_braid_matrix() {
    let o = run(&[
        "elliptic",
        "braid",
        "--type",
        "D4",
        "--word",
        "[5]",
        "--table-letters",
    ]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        report(&o)["payload"]["matrix"],
        serde_json::json!([[1, 0], [-2, 1]])
    );
    let o = run(&["elliptic", "braid", "--type", "D4", "--word", "[1]"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn finite_interval_and_dot_export() {
    let r = report(&run(&["poset", "interval", "--type", "A3"]));
    assert_eq!(r["payload"]["size"], 14);
    assert_eq!(r["payload"]["covers"], 28);
    let o = run(&["poset", "interval", "--type", "A2", "--emit", "dot"]);
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("digraph"));
}

#[test]
fn cap_hit_exits_with_truncation_code() {
    let o = run(&[
        "poset", "gen", "--type", "D4", "--window", "1", "--cap", "10",
    ]);
    assert_eq!(code(&o), 2);
    assert_eq!(report(&o)["truncated"], true);
    let o = run(&[
        "weyl", "fac", "--type", "A3", "--target", "1,2,3", "--m", "5", "--cap", "3",
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn orbit_from_file() {
    let dir = std::env::temp_dir().join(format!("hurwitz-lab-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let seed = dir.join("tuple.json");
    std::fs::write(&seed, "[[1,0,0],[0,1,0],[0,0,1]]").unwrap();
    let out = dir.join("report.json");
    let o = run(&[
        "hurwitz",
        "orbit",
        "--type",
        "A3",
        "--seed",
        seed.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_slice(&std::fs::read(&out).unwrap()).unwrap();
    assert_eq!(r["payload"]["orbit_size"], 16);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn data_file_override() {
    let o = Command::new(env!("CARGO_BIN_EXE_hurwitz-lab"))
        .args(["verify", "appendix", "--type", "D4"])
        .env("HURWITZ_LAB_DATA", "/nonexistent/tables.json")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("data file"));
}
