use std::process::{Command, Output};

use serde_json::Value;

fn iskk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_iskk")).args(args).output().expect("iskk runs")
}

fn json(args: &[&str]) -> (Option<i32>, Value) {
    let mut all = args.to_vec();
    all.push("--json");
    let out = iskk(&all);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code(), v)
}

#[test]
fn remark_on_two_chain() {
    let (code, v) = json(&["verify", "remark", "--builder", "chain:2"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["pass"], true);
    assert_eq!(v["dims"]["m"], 2);
}

#[test]
fn k0_of_three_chain_crossed_product() {
    let (code, v) = json(&["k0", "--crossed", "universal", "--coeff", "trivial", "--builder", "chain:3"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["rank"], 3);
    assert_eq!(v["method"], "exact");
}

#[test]
fn theta_res_ind_on_i2() {
    let (code, v) =
        json(&["verify", "theta-res-ind", "--builder", "symmetric_inverse:2", "--subsemigroup", "idempotents"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["pass"], true);
}

#[test]
fn group_algebra_blocks() {
    let (code, v) = json(&["crossed", "--builder", "cyclic:3"]);
    assert_eq!(code, Some(0));
    assert_eq!(v["decomposition"]["blocks"], 3);
    assert_eq!(v["decomposition"]["method"], "numeric");
    let (_, v) = json(&["k0", "--builder", "symmetric_group:3", "--crossed", "universal"]);
    assert_eq!(v["block_dims"], serde_json::json!([2, 1, 1]));
}

#[test]
fn every_suite_passes_on_an_example() {
    let cases: &[&[&str]] = &[
        &["verify", "theta-tensor", "--builder", "chain:2", "--subsemigroup", "idempotents"],
        &["verify", "technical-split", "--builder", "symmetric_inverse:2", "--subsemigroup", "whole", "--l", "whole"],
        &["verify", "res-ind-split", "--builder", "symmetric_group:3", "--subsemigroup", "unit", "--l", "123,213"],
        &["verify", "ci0", "--builder", "symmetric_inverse:2", "--chain", "unit;idempotents"],
        &["verify", "bprime", "--builder", "chain:3", "--subsemigroup", "1,e1", "--projections", "e2"],
        &["verify", "imprimitivity", "--builder", "symmetric_group:3", "--subsemigroup", "123,213"],
        &["verify", "green-julg", "--builder", "chain:3", "--subsemigroup", "idempotents", "--coeff", "c0x+trivial"],
        &["psd", "--builder", "diamond"],
        &["validate", "--builder", "brandt_unital:2", "--coeff", "c0x"],
    ];
    for args in cases {
        let (code, v) = json(args);
        assert_eq!(code, Some(0), "{args:?}: {v}");
    }
}

#[test]
fn listings() {
    let (_, v) = json(&["idempotents", "--builder", "chain:3"]);
    assert_eq!(v["idempotents"], serde_json::json!(["1", "e1", "e2"]));
    let (_, v) = json(&["order", "--builder", "chain:2"]);
    assert_eq!(v["order"], serde_json::json!([["e1", "1"]]));
    let (_, v) = json(&["characters", "--builder", "diamond"]);
    assert_eq!(v["characters"].as_array().unwrap().len(), 4);
    let (_, v) = json(&["econt", "--builder", "symmetric_inverse:2"]);
    assert_eq!(v["econt"].as_array().unwrap().len(), 7);
    let (_, v) = json(&["gram", "--builder", "chain:2"]);
    assert_eq!(v["basis"], serde_json::json!(["1", "e1"]));
}

#[test]
fn malformed_input_names_the_field() {
    for (args, field) in [
        (&["validate", "--builder", "nope:3"][..], "--builder"),
        (&["validate"][..], "--builder"),
        (&["verify", "theta-res-ind", "--builder", "chain:2", "--subsemigroup", "zz"][..], "--subsemigroup"),
        (&["verify", "theta-res-ind", "--builder", "chain:2"][..], "--subsemigroup"),
        (&["k0", "--builder", "chain:2", "--crossed", "weird"][..], "--crossed"),
        (&["k0", "--builder", "chain:2", "--coeff", "matrix:x"][..], "--coeff"),
        (&["k0", "--builder", "brandt_unital:2", "--coeff", "trivial"][..], "--coeff"),
        (&["validate", "--semigroup", "/nonexistent.json"][..], "--semigroup"),
        (&["verify", "ci0", "--builder", "chain:2", "--chain", "E;E;E;E"][..], "--chain"),
    ] {
        let out = iskk(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains(field), "{args:?}: {err}");
    }
    assert_eq!(iskk(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn failed_verification_exits_one() {
    let dir = std::env::temp_dir().join(format!("iskk-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let algebra = dir.join("algebra.json");
    // ℂ² with e1 swapping the points: α_e1 is not idempotent
    let swap = serde_json::json!({
        "label": "swap",
        "basis": ["a", "b"],
        "products": [[0, 0, 0, "1"], [1, 1, 1, "1"]],
        "star": [["1", "0"], ["0", "1"]],
        "action": { "1": [["1", "0"], ["0", "1"]], "e1": [["0", "1"], ["1", "0"]] },
        "semigroup": { "elements": ["1", "e1"], "table": [[0, 1], [1, 1]], "unit": "1", "zero": null },
    });
    std::fs::write(&algebra, swap.to_string()).unwrap();
    let path = algebra.to_str().unwrap();
    let validate = iskk(&["validate", "--builder", "chain:2", "--coeff", path, "--json"]);
    let induce = iskk(&["induce", "--builder", "chain:2", "--subsemigroup", "unit", "--coeff", path]);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(validate.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&validate.stdout).unwrap();
    assert_eq!(v["coeff"]["pass"], false);
    assert_eq!(induce.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&induce.stderr).contains("--coeff"));
}

#[test]
fn semigroup_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("iskk-sgp-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("z2.json");
    let table = serde_json::json!({
        "elements": ["1", "t"],
        "table": [[0, 1], [1, 0]],
        "unit": "1",
        "zero": null,
    });
    std::fs::write(&path, table.to_string()).unwrap();
    let (code, v) = json(&["k0", "--semigroup", path.to_str().unwrap(), "--crossed", "universal"]);
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(code, Some(0));
    assert_eq!(v["rank"], 2);
}

#[test]
fn json_is_byte_identical_across_runs() {
    for args in [
        &[
            "verify",
            "res-ind-split",
            "--builder",
            "symmetric_inverse:2",
            "--subsemigroup",
            "whole",
            "--l",
            "idempotents",
            "--json",
        ][..],
        &["crossed", "--builder", "symmetric_group:3", "--crossed", "sieben", "--coeff", "c0x", "--json"][..],
        &["gram", "--builder", "symmetric_inverse:2", "--json"][..],
    ] {
        let a = iskk(args).stdout;
        let b = iskk(args).stdout;
        assert!(!a.is_empty());
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn out_writes_the_file() {
    let dir = std::env::temp_dir().join(format!("iskk-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("remark.json");
    let out = iskk(&["verify", "remark", "--builder", "chain:3", "--json", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    std::fs::remove_dir_all(&dir).ok();
    assert_eq!(v["dims"]["m"], 3);
}

#[test]
fn corpus_mirrors_its_criteria() {
    let out = iskk(&["corpus"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.lines().filter(|l| l.starts_with("[PASS]")).count(), 8, "{text}");
}
