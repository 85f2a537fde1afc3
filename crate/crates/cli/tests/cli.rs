use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_plectic-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn verify_passes_on_zeta8() {
    let o = run(&["verify", "--instance", "zeta8"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 failed"));
}

#[test]
fn json_report_parses() {
    let o = run(&["lattice", "--instance", "zeta15", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["suite"], "lattice");
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["status"] == "pass"));
    // wall times only appear with --verbose
    assert!(v["checks"][0].get("wall_ms").is_none());
}

#[test]
fn half_transfer_spot_value() {
    // σ3 is multiplication by 3 on the units mod 8
    let o = run(&[
        "halftransfer",
        "--instance",
        "zeta8",
        "--cmtype",
        "1",
        "--element",
        "(1 2)(3 4)",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "(1 3)(2 4)");
    let o = run(&[
        "halftransfer",
        "--instance",
        "zeta15",
        "--element",
        "pi: (1 2); h: 1 -> ()",
        "--verbose",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(
        stdout(&o).lines().filter(|l| l.starts_with("h[")).count(),
        2
    );
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["lattice"]).status.code(), Some(2));
    assert_eq!(
        run(&["lattice", "--instance", "/nonexistent.inst"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["verify", "--instance", "zeta8", "--sample", "3"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["halftransfer", "--instance", "zeta8", "--element", "(1 5)"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn oversized_extension_table_is_a_check_failure() {
    let dir = std::env::temp_dir().join("plectic-lab-cli-test-big.txt");
    let o = run(&[
        "extension",
        "--instance",
        "zeta5-in-zeta15",
        "--emit-table",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn extension_table_format() {
    let path = std::env::temp_dir().join("plectic-lab-cli-test-table.txt");
    let o = run(&[
        "extension",
        "--instance",
        "zeta8",
        "--m0",
        "constants",
        "--emit-table",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert!(lines
        .next()
        .unwrap()
        .starts_with("# twisted extension: order 16"));
    assert_eq!(lines.count(), 256);
}

#[test]
fn taniyama_with_nested_file() {
    let path = std::env::temp_dir().join("plectic-lab-cli-test-nested.inst");
    std::fs::write(&path, "[nested]\nH.generators = ()\n").unwrap();
    let o = run(&[
        "taniyama",
        "--instance",
        "zeta15",
        "--suite",
        "norm",
        "--nested",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS taniyama.norm-push"));
}

#[test]
fn gen_instance_round_trip() {
    let o = run(&["gen-instance", "zeta8"]);
    assert_eq!(o.status.code(), Some(0));
    let path = std::env::temp_dir().join("plectic-lab-cli-test-zeta8.inst");
    std::fs::write(&path, stdout(&o)).unwrap();
    let o = run(&["halftransfer", "--instance", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));

    let o = run(&[
        "gen-instance",
        "--modulus",
        "15",
        "--h-residues",
        "4,7",
        "--c-residue",
        "14",
        "--nested",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[nested]"));
    let o = run(&["gen-instance", "--modulus", "15", "--h-residues", "14"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn small_cap_skips_instead_of_failing() {
    let o = Command::new(env!("CARGO_BIN_EXE_plectic-lab"))
        .args(["verify", "--instance", "zeta15", "--suite", "extension"])
        .env("PLECTIC_LAB_CAP", "10")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("SKIP extension.module"));
}

#[test]
fn sampling_is_reproducible() {
    let args = [
        "verify",
        "--instance",
        "zeta15",
        "--suite",
        "plectic",
        "--sample",
        "4",
        "--seed",
        "11",
        "--json",
    ];
    let a = stdout(&run(&args));
    assert_eq!(a, stdout(&run(&args)));
    assert!(a.contains("sampled 4 of 32"));
}
