use std::path::Path;
use std::process::Command;

use revbcd::designs::build_bcd_adder_digit;
use revbcd::gate::CostTable;
use revbcd::metrics::{analyze, MetricsReport};

fn revbcd(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_revbcd"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const HALF_ADDER: &str = "\
INPUT a b
CONST z = 0
GATE PG a b z -> p s c
OUTPUT s c
GARBAGE p
";

#[test]
fn gates_lists_the_catalog() {
    let (code, out, _) = revbcd(&["gates"]);
    assert_eq!(code, 0);
    for name in ["FG", "FRG", "TG", "NG", "PG", "HNG", "SCL"] {
        assert!(
            out.lines().any(|l| l.starts_with(name)),
            "{name} missing:\n{out}"
        );
    }
}

#[test]
fn check_sim_truth_and_metrics_on_a_half_adder() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ha.net", HALF_ADDER);

    let (code, out, _) = revbcd(&["check", &f]);
    assert_eq!(code, 0);
    assert!(
        out.contains("2 inputs, 1 constants, 1 gates, 2 outputs, 1 garbage"),
        "{out}"
    );

    let (code, out, _) = revbcd(&["sim", &f, "--in", "11"]);
    assert_eq!(code, 0);
    assert!(out.contains("s=0 c=1"), "{out}");

    let (code, out, _) = revbcd(&["truth", &f]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(
        rows,
        ["00 | 00 | 0", "01 | 10 | 0", "10 | 10 | 1", "11 | 01 | 1"]
    );

    let (code, out, _) = revbcd(&["metrics", &f, "--format", "kv"]);
    assert_eq!(code, 0);
    let r = MetricsReport::from_kv(&out).expect("kv parses");
    assert_eq!((r.gate_count, r.garbage_count, r.constant_count), (1, 1, 1));
    assert_eq!((r.quantum_cost, r.delay_levels), (4, 1));
}

#[test]
fn custom_cost_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ha.net", HALF_ADDER);
    let costs = write(dir.path(), "c.txt", "# unit\nPG 9\n");
    let (code, out, _) = revbcd(&["metrics", &f, "--costs", &costs, "--format", "kv"]);
    assert_eq!(code, 0);
    assert_eq!(MetricsReport::from_kv(&out).unwrap().quantum_cost, 9);
}

#[test]
fn emitted_adder_round_trips_through_metrics_and_sim() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bcd.net");
    let f = f.to_str().unwrap();
    let (code, _, _) = revbcd(&["bcd", "build", "-o", f]);
    assert_eq!(code, 0);

    let (code, out, _) = revbcd(&["metrics", f, "--format", "kv"]);
    assert_eq!(code, 0);
    let direct = analyze(
        &build_bcd_adder_digit().unwrap(),
        &CostTable::builtin_default(),
    )
    .unwrap();
    assert_eq!(MetricsReport::from_kv(&out), Some(direct));

    // 9 + 9 + 1 = 19
    let (code, out, _) = revbcd(&["sim", f, "--in", "100110011"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("outputs 11001\n"), "{out}");
}

#[test]
fn bcd_verify_and_table() {
    let (code, out, _) = revbcd(&["bcd", "verify"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "200/200 cases pass");

    let (code, out, _) = revbcd(&["bcd", "table"]);
    assert_eq!(code, 0, "{out}");
    assert!(
        out.contains("delay: adder1 4 + correction 1 + adder2 3 = 8"),
        "{out}"
    );
    assert!(
        out.contains("Proposed BCD adder: matches recomputation"),
        "{out}"
    );
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "bad.net", "INPUT a b\nGATE XX a b -> c d\n");
    let (code, _, err) = revbcd(&["check", &f]);
    assert_eq!(code, 2);
    assert!(err.contains(":2:"), "{err}");
}

#[test]
fn validation_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        dir.path(),
        "dangle.net",
        "INPUT a b\nGATE FG a b -> p q\nOUTPUT q\n",
    );
    let (code, _, err) = revbcd(&["check", &f]);
    assert_eq!(code, 1);
    assert!(err.contains("dangling"), "{err}");

    let f = write(
        dir.path(),
        "fanout.net",
        "INPUT a b\nGATE FG a b -> p q\nGATE FG a q -> r s\nOUTPUT p r s\n",
    );
    let (code, _, err) = revbcd(&["check", &f]);
    assert_eq!(code, 1);
    assert!(err.contains("fan-out"), "{err}");
}

#[test]
fn usage_errors_exit_3() {
    assert_eq!(revbcd(&["frobnicate"]).0, 3);
    assert_eq!(revbcd(&["check", "/nonexistent/file.net"]).0, 3);
    assert_eq!(revbcd(&["bcd", "verify", "--digits", "0"]).0, 3);

    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "ha.net", HALF_ADDER);
    assert_eq!(revbcd(&["sim", &f, "--in", "101"]).0, 3);
    assert_eq!(revbcd(&["sim", &f, "--in", "1x"]).0, 3);
}

#[test]
fn in_process_runner_matches_binary() {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = revbcd::cli::run(["revbcd", "gates"], &mut out, &mut err);
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(out).unwrap(), revbcd(&["gates"]).1);
    assert_eq!(
        revbcd::cli::run(["revbcd", "--help"], &mut Vec::new(), &mut err),
        0
    );
}
