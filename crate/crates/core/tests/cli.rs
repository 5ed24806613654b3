use std::process::Command;

use gencx::cli::run;
use serde_json::Value;

fn gencx(args: &[&str]) -> gencx::cli::Outcome {
    let root = env!("CARGO_MANIFEST_DIR");
    let args: Vec<String> = args
        .iter()
        .map(|a| if a.ends_with(".model") { format!("{root}/fixtures/{a}") } else { a.to_string() })
        .collect();
    run(args)
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.push("--json");
    serde_json::from_str(&gencx(&a).stdout).expect("valid json")
}

#[test]
fn help_and_version_exit_zero() {
    let out = gencx(&["--help"]);
    assert_eq!(out.code, 0);
    for cmd in ["check", "cohomology", "bundle-verify", "kunneth", "spectral", "btransform"] {
        assert!(out.stdout.contains(cmd), "{cmd} missing from help");
        assert_eq!(gencx(&[cmd, "--help"]).code, 0);
    }
    assert_eq!(gencx(&["--version"]).code, 0);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(gencx(&[]).code, 2);
    assert_eq!(gencx(&["frobnicate", "t2c.model"]).code, 2);
    assert_eq!(gencx(&["check"]).code, 2);
    assert_eq!(gencx(&["check", "t2c.model", "--seed", "x"]).code, 2);
    assert_eq!(gencx(&["check", "t2c.model", "--point", "z=1"]).code, 2);
}

#[test]
fn text_report_for_cohomology() {
    let out = gencx(&["cohomology", "t2c.model"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("GH^-1=1 GH^0=2 GH^1=1"), "{}", out.stdout);
    assert!(out.stdout.ends_with("verdict: verified\n"));
}

#[test]
fn json_report_shape() {
    let v = json(&["cohomology", "kt_real.model"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "cohomology");
    assert_eq!(v["verdict"], true);
    assert_eq!(v["results"][0]["details"]["total"], 12);
    assert_eq!(v["inputs"][0]["sha256"].as_str().unwrap().len(), 64);
    assert!(v.get("error").is_none());
}

#[test]
fn parse_errors_are_located() {
    let dir = std::env::temp_dir().join(format!("gencx-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.model");
    std::fs::write(&path, "[generator.a]\ngrade = \"R\"\n\n[form.w]\nexpr = \"a ^ q\"\n").unwrap();
    let p = path.to_str().unwrap();
    let out = run(["check", p]);
    assert_eq!(out.code, 2);
    assert!(out.stdout.contains("bad.model:5:13"), "{}", out.stdout);
    let v: Value = serde_json::from_str(&run(["check", p, "--json"]).stdout).unwrap();
    assert_eq!(v["verdict"], Value::Null);
    assert_eq!((v["error"]["line"].as_u64(), v["error"]["column"].as_u64()), (Some(5), Some(13)));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn bundle_verify_verdicts() {
    let v = json(&["bundle-verify", "flat_chart.model"]);
    assert_eq!(v["verdict"], true);
    let v = json(&["bundle-verify", "nonflat.model"]);
    assert_eq!(v["verdict"], false);
    assert!(v["results"][0]["predicate"].as_str().unwrap().contains("dbar(beta_j^01)"));
    assert_eq!(gencx(&["bundle-verify", "twisted.model"]).code, 1);
    assert_eq!(gencx(&["bundle-verify", "mixed.model"]).code, 1);
}

#[test]
fn kunneth_respects_l() {
    let v = json(&["kunneth", "t2c.model", "--l", "2"]);
    assert_eq!(v["verdict"], true);
    let lhs = v["results"][0]["details"]["lhs"].as_object().unwrap();
    assert_eq!(lhs.values().map(|d| d.as_u64().unwrap()).sum::<u64>(), 64);
    assert_eq!(lhs["0"], 20);
}

#[test]
fn extra_points_are_recorded() {
    let v = json(&["check", "flat_chart.model", "--point", "z=1+i"]);
    assert_eq!(v["verdict"], true);
    assert_eq!(v["flags"]["point"][0], "z=1+i");
}

#[test]
fn several_files_combine_verdicts() {
    assert_eq!(gencx(&["check", "t2c.model", "kt.model"]).code, 0);
    assert_eq!(gencx(&["check", "t2c.model", "mixed.model"]).code, 1);
}

#[test]
fn binary_matches_library() {
    let root = env!("CARGO_MANIFEST_DIR");
    let out = Command::new(env!("CARGO_BIN_EXE_gencx"))
        .args(["spectral", "fixtures/trivial.model", "--json"])
        .current_dir(root)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let lib = run(["spectral", "fixtures/trivial.model", "--json"]);
    // relative paths resolve against the test's working directory, which is the manifest dir
    assert_eq!(String::from_utf8(out.stdout).unwrap(), lib.stdout);
}
