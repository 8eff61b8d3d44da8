use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use ualg_cli::{run, Output};

fn data(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(rel).to_string_lossy().into_owned()
}

fn ualg(args: &[&str]) -> Output {
    let mut argv = vec!["ualg"];
    argv.extend_from_slice(args);
    run(argv)
}

fn expect(args: &[&str], code: i32) -> Output {
    let out = ualg(args);
    assert_eq!(out.code, code, "{args:?}\nstdout: {}\nstderr: {}", out.stdout, out.stderr);
    let mut json_args = vec!["--json"];
    json_args.extend_from_slice(args);
    let j = ualg(&json_args);
    assert_eq!(j.code, code, "{json_args:?}");
    if code != 2 {
        serde_json::from_str::<Value>(&j.stdout).unwrap_or_else(|e| panic!("{json_args:?}: {e}\n{}", j.stdout));
    }
    out
}

/// Scratch file under the target directory, unique per test.
fn scratch(name: &str, text: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const EXTRA: &str = "\
algebra C2
elements a b
op f/1 = b a
end

algebra C3u
elements p q r
op f/1 = q r p
end

algebra Z4
elements g0 g1 g2 g3
op one/0 = g0
op inv/1 = g0 g3 g2 g1
op mul/2 = g0 g1 g2 g3 g1 g2 g3 g0 g2 g3 g0 g1 g3 g0 g1 g2
end
";

#[test]
fn product_tables_match_golden_bytes() {
    let out = expect(
        &["product", &data("examples/paper_BO.alg"), "--algebras", "B,O", "--elements", "s,t,u,v,w,x,y,z"],
        0,
    );
    let ops: String = out
        .stdout
        .lines()
        .filter(|l| l.starts_with("op and/2") || l.starts_with("op or/2"))
        .map(|l| format!("{l}\n"))
        .collect();
    assert_eq!(ops, std::fs::read_to_string(data("golden/P_lattice_ops.txt")).unwrap());
    assert!(out.stdout.contains("# t = (b1, o2)"));
}

#[test]
fn check_and_eval() {
    let bo = data("examples/paper_BO.alg");
    assert!(expect(&["check", &bo], 0).stdout.contains("ok: 2 algebra(s) valid"));
    expect(&["check", &bo, "--algebra", "Q"], 2);
    let bad = scratch("bad.alg", "algebra A\nelements b1 b2\nop and/2 = b1 b1 b1\nend\n");
    let out = expect(&["check", &bad], 2);
    assert!(out.stderr.contains(":3:") && out.stderr.contains("expected 4 values, found 3"), "{}", out.stderr);
    let out = expect(&["eval", &bo, "--algebra", "O", "not(and(x, y))", "--vars", "x,y", "--at", "o2,o3"], 0);
    assert!(out.stdout.starts_with("not(and(x, y)) = o4"), "{}", out.stdout);
    expect(&["eval", &bo, "--algebra", "O", "not(z)", "--vars", "x", "--at", "o2"], 2);
    expect(&["eval", &bo, "--algebra", "O", "not(x)", "--vars", "x", "--at", "o9"], 2);
}

#[test]
fn satisfaction_verdicts() {
    let bo = data("examples/paper_BO.alg");
    let small = data("examples/small.alg");
    expect(&["satisfies", &bo, &data("presets/boolean.eq"), "--algebra", "O"], 0);
    expect(&["satisfies", &small, "preset:group", "--algebra", "Z3"], 0);
    let absorbing = scratch("left.eq", "vars x y\neq and(x, y) = x\n");
    let out = expect(&["satisfies", &small, &absorbing, "--algebra", "L2"], 1);
    assert!(out.stdout.contains("FAIL  and(x, y) = x  at x=l1, y=l0"), "{}", out.stdout);
    let out = expect(&["satisfies", &small, "preset:group", "--algebra", "SL2"], 2);
    assert!(out.stderr.contains("inv/1"));
    expect(&["satisfies", &small, "preset:monoid", "--algebra", "SL2"], 2);
    expect(&["satisfies", &small, "missing.eq", "--algebra", "SL2"], 2);
}

#[test]
fn generation_and_clones() {
    let bo = data("examples/paper_BO.alg");
    let small = data("examples/small.alg");
    let out = expect(&["gen", &bo, "--algebra", "O", "--gens", "o2", "--directed", "--report"], 0);
    assert!(out.stdout.contains("stage 0: {o1, o2, o4}"));
    assert!(out.stdout.contains("minimum generating set: {o2}"));
    let out = expect(&["gen", &small, "--algebra", "SL2"], 0);
    assert!(out.stdout.contains("empty"));
    expect(&["gen", &bo, "--algebra", "O", "--gens", "o7"], 2);
    assert!(expect(&["clone", &small, "--algebra", "L2", "--arity", "2"], 0).stdout.starts_with("4 term operations"));
    expect(&["--budget", "2", "clone", &small, "--algebra", "L2", "--arity", "2"], 1);
}

#[test]
fn morphism_commands() {
    let bo = data("examples/paper_BO.alg");
    let extra = scratch("extra.alg", EXTRA);
    assert!(expect(&["homs", &bo, "--from", "B", "--to", "O"], 0).stdout.contains("b1->o1 b2->o4"));
    let out = ualg(&["--json", "homs", &bo, "--from", "O", "--to", "O", "--count"]);
    let j: Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(j["count"], 4);
    expect(&["homs", &extra, "--from", "C2", "--to", "C3u"], 1);
    expect(&["homs", &extra, "--from", "C2", "--to", "Z4"], 2);
    expect(&["iso", &bo, "--algebras", "B,O"], 1);
    expect(&["iso", &bo, "--algebras", "O,O"], 0);
    expect(&["iso", &bo, "--algebras", "O"], 2);
    expect(&["retracts", &bo, "--algebra", "O", "--onto", "o1,o4"], 0);
    expect(&["retracts", &bo, "--algebra", "O", "--onto", "o1,o2"], 2);
    expect(&["retracts", &extra, "--algebra", "Z4", "--onto", "g0,g2"], 1);
    let out = expect(&["reduct", &bo, "--algebra", "O", "--keep", "and,or", "--name", "OL"], 0);
    let reparsed = ualg_core::parse_algebra_file(&out.stdout).unwrap();
    assert_eq!(reparsed[0].name(), "OL");
    assert_eq!(reparsed[0].signature().len(), 2);
    expect(&["reduct", &bo, "--algebra", "O", "--keep", "xor"], 2);
}

#[test]
fn product_commands() {
    let bo = data("examples/paper_BO.alg");
    let out = expect(&["product", &bo, "--algebras", "B,B", "--prefix", "q", "--verify"], 0);
    assert!(out.stdout.contains("# universal property: holds"));
    expect(&["product", &bo, "--algebras", "B,X"], 2);
    expect(&["product", &bo, "--algebras", "B,O", "--elements", "s,t"], 2);
    expect(&["product", &bo, "--algebras", "B,O", "--elements", "a", "--prefix", "p"], 2);
}

#[test]
fn free_and_reduced_power_commands() {
    let small = data("examples/small.alg");
    let out = expect(&["free-retract", "--gens", "1", "--bound", "8", "--image-bound", "3"], 1);
    assert!(out.stdout.contains("first contradiction at word length 4"));
    expect(&["free-retract", "--gens", "2", "--bound", "3", "--image-bound", "3"], 0);
    expect(&["free-retract", "--gens", "1", "--bound", "3", "--image-bound", "0"], 2);
    let out = expect(&["rp", "adjoin", &small, "--algebra", "Z2", "--gen", "per z0 z1"], 0);
    assert!(out.stdout.starts_with("4 members"));
    expect(&["rp", "retract", &small, "--algebra", "Z2", "--gen", "per z0 z1", "--index", "3"], 0);
    expect(&["rp", "preserve", &small, "preset:group", "--algebra", "Z2", "--gen", "pre z1 | per z0 z1"], 0);
    expect(&["rp", "preserve", &small, "preset:boolean-algebra", "--algebra", "R2", "--gen", "per r0 r1"], 2);
    expect(&["rp", "adjoin", &small, "--algebra", "Z2", "--gen", "per"], 2);
    expect(&["--budget", "3", "rp", "adjoin", &small, "--algebra", "Z3", "--gen", "per z0 z1"], 2);
}

#[test]
fn usage_errors() {
    assert_eq!(ualg(&["frobnicate"]).code, 2);
    assert_eq!(ualg(&["check"]).code, 2);
    assert_eq!(ualg(&["--bogus", "check", "x"]).code, 2);
    assert_eq!(ualg(&["--workers", "0", "check", &data("examples/small.alg")]).code, 2);
    let help = ualg(&["--help"]);
    assert_eq!(help.code, 0);
    assert!(help.stdout.contains("free-retract"));
}

#[test]
fn binary_reports_missing_files_and_reads_budget_env() {
    let bin = env!("CARGO_BIN_EXE_ualg");
    let out = Command::new(bin).args(["check", "nonexistent.alg"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("file not found"));
    let small = data("examples/small.alg");
    let args = ["clone", small.as_str(), "--algebra", "L2", "--arity", "2"];
    let limited = Command::new(bin).args(args).env("UALG_BUDGET", "2").output().unwrap();
    assert_eq!(limited.status.code(), Some(1));
    let free = Command::new(bin).args(args).env_remove("UALG_BUDGET").output().unwrap();
    assert_eq!(free.status.code(), Some(0));
}
