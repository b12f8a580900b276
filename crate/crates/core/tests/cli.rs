//! The `iterroot` binary and in-process `cli::run`.

use std::path::PathBuf;
use std::process::Command;

use iterroot::cli;
use iterroot::instances::{self, fig67};
use iterroot::io;
use serde_json::Value;

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn tmp(name: &str, text: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> cli::Output {
    cli::run(std::iter::once("iterroot").chain(args.iter().copied()))
}

#[test]
fn fig67_g_golden_snapshot() {
    let expected = std::fs::read_to_string(golden("fig67-g.mfn")).unwrap();
    assert_eq!(io::serialize_map(&fig67().1) + "\n", expected);
    assert_eq!(run(&["instance", "fig67-g"]).stdout, expected);
    let parsed = io::parse(&expected).unwrap();
    assert_eq!(io::serialize(&parsed) + "\n", expected);
}

#[test]
fn binary_matches_library() {
    let args = ["instance", "random-mf", "--size", "6", "--seed", "3"];
    let out = Command::new(env!("CARGO_BIN_EXE_iterroot")).args(args).output().unwrap();
    let lib = run(&args);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), lib.stdout);
    assert_eq!(out.status.code(), Some(lib.code));
}

#[test]
fn check_exit_codes_and_json() {
    let f1 = tmp("f1.mfn", &io::serialize_multifunction(&instances::f1(3).unwrap()));
    let fired = run(&["check", &f1, "--json"]);
    assert_eq!(fired.code, 0);
    let v: Value = serde_json::from_str(&fired.stdout).unwrap();
    let first = &v["certificates"][0];
    assert_eq!(first["rule"], "forward-paths");
    assert_eq!(first["x0"], "x0");
    assert_eq!(first["Q"], "4");
    assert_eq!(first["MN3"], "2");
    assert_eq!(first["root_class"]["max_out_degree"], "2");

    let single = run(&["check", &f1, "--x0", "x0", "--rule", "forward-points", "--M", "2", "--N", "1"]);
    assert_eq!(single.code, 1);
    assert!(single.stdout.contains("not applicable (fails Q_exceeds_MN3)"));

    let id = tmp("id.mfn", "points a b\na -> a\nb -> b");
    assert_eq!(run(&["check", &id]).code, 1);
    assert_eq!(run(&["check", &id, "--rule", "sideways"]).code, 2);
    assert_eq!(run(&["check", &id, "--x0", "zz"]).code, 2);
    let bad = tmp("bad.mfn", "points a\na -> b");
    let out = run(&["check", &bad]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("undeclared label b at line 2"));
}

#[test]
fn search_exit_codes() {
    let four_cycle = tmp("c4.mfn", "points a b c d\nkind single\na -> b\nb -> c\nc -> d\nd -> a");
    assert_eq!(run(&["search", &four_cycle, "--order", "2"]).code, 1);
    let ok = run(&["search", &four_cycle, "--order", "3"]);
    assert_eq!(ok.code, 0);
    let root = io::parse(&ok.stdout).unwrap();
    let iterroot::instances::Instance::Map(g) = root else { panic!("expected a map") };
    assert_eq!(io::serialize_map(&g.iterate(3)), io::serialize(&io::parse(&std::fs::read_to_string(&four_cycle).unwrap()).unwrap()));

    let f = tmp("dense.mfn", &io::serialize_multifunction(&instances::random_multifunction(5, 5, 0.5, 9).unwrap()));
    assert_eq!(run(&["search", &f, "--order", "2", "--budget", "1"]).code, 3);
    let json: Value = serde_json::from_str(&run(&["search", &f, "--order", "2", "--budget", "1", "--json"]).stdout).unwrap();
    assert_eq!(json["outcome"], "budget_exceeded");
    assert_eq!(run(&["search", &f, "--order", "2", "--budget", "0"]).code, 2);
    let big = tmp("big.mfn", &io::serialize_multifunction(&instances::f1(3).unwrap()));
    assert_eq!(run(&["search", &big, "--order", "2"]).code, 2);
    assert_eq!(run(&["search", &big, "--order", "2", "--max-out", "2", "--cap", "12"]).code, 1);
}

#[test]
fn sequential_and_parallel_outputs_agree() {
    for seed in 0..20 {
        let f = tmp(&format!("r{seed}.mfn"), &io::serialize_multifunction(&instances::random_multifunction(5, 5, 0.3, seed).unwrap()));
        for args in [vec!["search", &f, "--order", "2", "--json"], vec!["check", &f, "--json", "--M", "3"]] {
            let par = run(&args);
            let mut seq_args = vec!["--sequential"];
            seq_args.extend(args.iter().copied());
            assert_eq!(par, run(&seq_args));
        }
    }
}

#[test]
fn map_commands() {
    let (f, _) = fig67();
    let ff = tmp("fig67-f.mfn", &io::serialize_map(&f));
    let g = golden("fig67-g.mfn");
    let g = g.to_str().unwrap();
    assert_eq!(run(&["iterate", g, "--order", "4"]).stdout, io::serialize_map(&f) + "\n");
    let fp = run(&["fixedpoints", &ff]);
    assert!(fp.stdout.contains("union of tails: L = 8"));
    assert!(fp.stdout.contains("non-isolated: excludes n > 2 with no divisor in 2..=4; up to 30: [5, 7, 11, 13, 17, 19, 23, 25, 29]"));

    let perm = tmp("perm.mfn", "points a b c\nkind single\na -> b\nb -> c\nc -> a");
    let pb = run(&["pullback", &perm]);
    assert_eq!(pb.stdout, "points a b c\na -> c\nb -> a\nc -> b\n");
    let back = tmp("pb.mfn", &pb.stdout);
    assert_eq!(run(&["pullback", &back]).stdout, "points a b c\nkind single\na -> b\nb -> c\nc -> a\n");
    let not_pb = tmp("npb.mfn", "points a b\na -> a b");
    let out = run(&["pullback", &not_pb]);
    assert_eq!((out.code, out.stdout.as_str()), (1, "not a pullback: fails totality\n"));

    assert_eq!(run(&["invert", &perm]).stdout, pb.stdout);
    assert_eq!(run(&["paths", &perm, "--from", "a", "--to", "a", "--length", "3"]).stdout, "1\n");
    assert_eq!(run(&["paths", &perm, "--length", "10"]).stdout, "3\n");
    assert_eq!(run(&["paths", &perm, "--from", "q", "--length", "1"]).code, 2);
}

#[test]
fn poly_json_schema() {
    let out = run(&["poly", "--coeffs", "0,0,0,0,0,1", "--order", "5", "--json"]);
    let v: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["fired"], serde_json::json!(["ShiftedMonomialPrime"]));
    assert_eq!(v["findings"].as_array().unwrap().len(), 6);
    assert_eq!(v["degree"], "5");
    let cubic = run(&["poly", "--coeffs", "0,1,-1,1", "--order", "2"]);
    assert!(cubic.stdout.contains("conjugate to z^3-z^2+z"));
    assert_eq!(cubic.code, 1);
}
