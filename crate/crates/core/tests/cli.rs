use std::process::{Command, Output};

fn gca(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gca")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn mutate_prints_both_matrices() {
    let o = gca(&["mutate", "--seed", "FIX-A", "--sequence", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("# B\n2 2\n0 -8 3 -5;\n12 0 -38 7\n# B-hat\n2 2\n0 -4 3 -5;\n4 0 -38 7\n"), "{out}");
    assert!(out.contains("cluster-variables\n"));
}

#[test]
fn out_of_range_index_is_an_input_error() {
    let o = gca(&["mutate", "--seed", "FIX-A", "--sequence", "9"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("out of range"));
}

#[test]
fn unknown_arguments_and_missing_files_exit_one() {
    assert_eq!(gca(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(gca(&["mutate", "--seed", "/nonexistent/seed.txt"]).status.code(), Some(1));
    assert_eq!(gca(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_passes_and_is_deterministic() {
    let args = ["verify", "hadamard", "--seed", "random", "--sequences", "random:20", "--depth", "4", "--rng-seed", "3", "--text"];
    let a = gca(&args);
    let b = gca(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).ends_with("hadamard: 20 cases, 0 mismatches\n"));
}

#[test]
fn integer_overflow_is_reported_not_wrapped() {
    let seq = vec!["1,2"; 30].join(",");
    let o = gca(&["unfold", "--seed", "FIX-A", "--sequence", &seq]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("overflows"));
}

#[test]
fn seed_files_are_accepted() {
    let dir = std::env::temp_dir().join(format!("gca-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("c.seed");
    std::fs::write(&path, gca_core::fixtures::FIX_C).unwrap();
    let o = gca(&["verify", "laurent", "--seed-file", path.to_str().unwrap(), "--depth", "6"]);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(o.status.code(), Some(0));
    let last = stdout(&o).lines().last().unwrap().to_string();
    let v: serde_json::Value = serde_json::from_str(&last).unwrap();
    assert_eq!(v["mismatches"], 0);
}

#[test]
fn json_output_parses() {
    let o = gca(&["unfold", "--seed", "FIX-C", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["matrix"], serde_json::json!([[0, 0, 2, 1, 0, -1, 0], [0, 0, 2, 0, 1, 0, -1]]));
}

#[test]
fn trace_digests_are_stable() {
    let a = stdout(&gca(&["trace", "--seed", "FIX-B", "--sequence", "1,2,1", "--unfold"]));
    let b = stdout(&gca(&["trace", "--seed", "FIX-B", "--sequence", "1,2,1", "--unfold"]));
    assert_eq!(a, b);
    assert_eq!(a.lines().count(), 8);
}

#[test]
fn laurent_suite_on_fix_c_passes() {
    let o = gca(&["verify", "laurent", "--seed", "FIX-C", "--depth", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2);
}
