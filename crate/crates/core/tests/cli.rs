//! End-to-end tests of the `bohr` binary: exit codes, JSON shapes,
//! determinism, cap handling, and the table mode.

use std::path::Path;
use std::process::Command;

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .display()
        .to_string()
}

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn bohr(args: &[&str]) -> Out {
    bohr_env(args, &[])
}

fn bohr_env(args: &[&str], envs: &[(&str, &str)]) -> Out {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_bohr"));
    cmd.args(args).env_remove("BOHR_CAP");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    Out {
        code: out.status.code().expect("no signal"),
        stdout: String::from_utf8(out.stdout).expect("utf8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf8 stderr"),
    }
}

fn parse(s: &str) -> serde_json::Value {
    serde_json::from_str(s).unwrap_or_else(|e| panic!("bad JSON ({e}): {s}"))
}

#[test]
fn enum_young_lists_partitions() {
    let out = bohr(&["enum-young", "--n", "2", "--k", "2"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(parse(&out.stdout), serde_json::json!([[1, 1]]));

    let out = bohr(&["enum-young", "--n", "7", "--k", "3"]);
    let v = parse(&out.stdout);
    // partitions of 7 into exactly 3 parts: 5+1+1, 4+2+1, 3+3+1, 3+2+2
    assert_eq!(v.as_array().unwrap().len(), 4);

    let out = bohr(&["enum-young", "--n", "2", "--k", "5"]);
    assert_eq!(parse(&out.stdout), serde_json::json!([]));
}

#[test]
fn ks_check_decides_fixtures() {
    let out = bohr(&["ks", "check", &fixture("cabello18.json")]);
    assert_eq!(out.code, 0);
    let v = parse(&out.stdout);
    assert_eq!(v["status"], "UNSAT");
    assert!(v["explored"].as_u64().unwrap() > 0);

    for file in ["dim2_rays.json", "cube25_dim3.json"] {
        let out = bohr(&["ks", "check", &fixture(file)]);
        assert_eq!(out.code, 0);
        let v = parse(&out.stdout);
        assert_eq!(v["status"], "SAT", "{file}");
        let assignment = v["assignment"].as_array().unwrap();
        assert!(assignment.iter().all(|b| b == 0 || b == 1));
    }
}

#[test]
fn heyting_notnot_reports_full_mask_at_the_bottom() {
    let out = bohr(&[
        "heyting",
        "--op",
        "notnot",
        "--sigma",
        &fixture("m3_excluded_middle_sigma.json"),
        "--poset",
        &fixture("m3_poset.json"),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = parse(&out.stdout);
    assert_eq!(v["valid"], true);
    // the bottom context has one atom (the identity); ¬¬S selects it
    assert_eq!(v["result"]["assignment"]["0"], serde_json::json!([0]));

    // while ¬S is everywhere empty: no assignment keys at all
    let out = bohr(&[
        "heyting",
        "--op",
        "neg",
        "--sigma",
        &fixture("m3_excluded_middle_sigma.json"),
        "--poset",
        &fixture("m3_poset.json"),
    ]);
    let v = parse(&out.stdout);
    assert_eq!(v["result"]["assignment"], serde_json::json!({}));
}

#[test]
fn heyting_binary_ops_take_two_elements() {
    let sigma = fixture("m3_excluded_middle_sigma.json");
    let poset = fixture("m3_poset.json");
    // S → S = ⊤
    let out = bohr(&[
        "heyting", "--op", "implies", "--sigma", &sigma, "--sigma2", &sigma, "--poset", &poset,
    ]);
    assert_eq!(out.code, 0);
    let v = parse(&out.stdout);
    let assignment = v["result"]["assignment"].as_object().unwrap();
    assert_eq!(assignment.len(), 7, "top selects every atom of every context");

    // S ∧ S = S = S ∨ S
    let meet = bohr(&[
        "heyting", "--op", "meet", "--sigma", &sigma, "--sigma2", &sigma, "--poset", &poset,
    ]);
    let join = bohr(&[
        "heyting", "--op", "join", "--sigma", &sigma, "--sigma2", &sigma, "--poset", &poset,
    ]);
    assert_eq!(parse(&meet.stdout)["result"], parse(&join.stdout)["result"]);

    // missing --sigma2 is a domain error (exit 1), not a usage crash
    let out = bohr(&["heyting", "--op", "meet", "--sigma", &sigma, "--poset", &poset]);
    assert_eq!(out.code, 1);
    assert_eq!(parse(&out.stderr)["error"]["code"], "invalid-argument");
    assert!(out.stdout.is_empty());
}

#[test]
fn gelfand_reports_spectral_data() {
    let out = bohr(&[
        "gelfand",
        "--observable",
        &fixture("observable_diag122.json"),
        "--context",
        "2",
        "--open",
        &fixture("open_unit.json"),
        "--poset",
        &fixture("m3_chain_poset.json"),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = parse(&out.stdout);
    assert_eq!(v["eigenvalues"], serde_json::json!(["2", "2", "1"]));
    assert_eq!(v["support"], serde_json::json!([2]));
    assert_eq!(v["transform"]["assignment"], serde_json::json!({"2": [2]}));

    // the same observable does not belong to the two-block context

    let out = bohr(&[
        "gelfand",
        "--observable",
        &fixture("observable_diag122.json"),
        "--context",
        "1",
        "--open",
        &fixture("open_unit.json"),
        "--poset",
        &fixture("m3_chain_poset.json"),
    ]);
    assert_eq!(out.code, 1);
    assert_eq!(parse(&out.stderr)["error"]["code"], "not-in-context");

    let out = bohr(&[
        "gelfand",
        "--observable",
        &fixture("observable_diag122.json"),
        "--context",
        "9",
        "--open",
        &fixture("open_unit.json"),
        "--poset",
        &fixture("m3_chain_poset.json"),
    ]);
    assert_eq!(out.code, 1);
    assert_eq!(parse(&out.stderr)["error"]["code"], "not-in-poset");
}

#[test]
fn pair_emits_upper_set_and_measure() {
    let out = bohr(&[
        "pair",
        "--state",
        &fixture("state_e3.json"),
        "--sigma",
        &fixture("m3_excluded_middle_sigma.json"),
        "--poset",
        &fixture("m3_poset.json"),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = parse(&out.stdout);
    assert_eq!(v["upper_set"], serde_json::json!([4, 5, 6]));
    assert_eq!(v["mu"]["0"], "0");
    assert_eq!(v["mu"]["4"], "1");
}

#[test]
fn poset_build_reproduces_the_shipped_poset() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("rebuilt.json");
    let out = bohr(&[
        "poset",
        "build",
        "--seeds",
        &fixture("m3_seeds.json"),
        "-o",
        &out_path.display().to_string(),
    ]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v = parse(&out.stdout);
    assert_eq!(v["contexts"], 7);
    assert_eq!(v["maximal"], 3);
    let rebuilt = std::fs::read_to_string(&out_path).unwrap();
    let shipped = std::fs::read_to_string(fixture("m3_poset.json")).unwrap();
    assert_eq!(rebuilt, shipped, "closure of the seeds reproduces the fixture byte for byte");
}

#[test]
fn points_respects_cap_precedence() {
    let poset = fixture("m2_chain_poset.json");
    let out = bohr(&["points", "--poset", &poset]);
    assert_eq!(out.code, 0);
    let v = parse(&out.stdout);
    assert_eq!(v["frame_size"], 5);
    assert_eq!(v["points"].as_array().unwrap().len(), 3);

    // a small environment cap kills the enumeration…
    let out = bohr_env(&["points", "--poset", &poset], &[("BOHR_CAP", "2")]);
    assert_eq!(out.code, 1);
    assert_eq!(parse(&out.stderr)["error"]["code"], "cap-exceeded");

    // …unless the flag overrides it
    let out = bohr_env(&["points", "--poset", &poset, "--cap", "100"], &[("BOHR_CAP", "2")]);
    assert_eq!(out.code, 0);

    // a malformed environment cap is malformed input
    let out = bohr_env(&["points", "--poset", &poset], &[("BOHR_CAP", "lots")]);
    assert_eq!(out.code, 2);
    assert_eq!(parse(&out.stderr)["error"]["code"], "malformed-input");
}

#[test]
fn exit_codes_separate_malformed_from_domain_errors() {
    // unreadable file: malformed, exit 2
    let out = bohr(&["ks", "check", "no-such-file.json"]);
    assert_eq!(out.code, 2);
    assert_eq!(parse(&out.stderr)["error"]["code"], "malformed-input");
    assert!(out.stdout.is_empty());

    // file exists but is not JSON: exit 2
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "not json").unwrap();
    let out = bohr(&["ks", "check", &bad.display().to_string()]);
    assert_eq!(out.code, 2);

    // well-formed JSON violating a domain invariant: exit 1
    let nonorth = dir.path().join("nonorth.json");
    std::fs::write(&nonorth, r#"{"dim":2,"rays":[[1,0],[1,1]],"bases":[[0,1]]}"#).unwrap();
    let out = bohr(&["ks", "check", &nonorth.display().to_string()]);
    assert_eq!(out.code, 1);
    assert_eq!(parse(&out.stderr)["error"]["code"], "invalid-ray-set");

    // unknown subcommand: usage error, exit 2
    let out = bohr(&["frobnicate"]);
    assert_eq!(out.code, 2);
}

#[test]
fn table_mode_renders_aligned_text() {
    let out = bohr(&[
        "--format",
        "table",
        "pair",
        "--state",
        &fixture("state_e3.json"),
        "--sigma",
        &fixture("m3_excluded_middle_sigma.json"),
        "--poset",
        &fixture("m3_poset.json"),
    ]);
    assert_eq!(out.code, 0);
    assert!(serde_json::from_str::<serde_json::Value>(&out.stdout).is_err());
    assert!(out.stdout.contains("[paired]"));
    assert!(out.stdout.lines().count() >= 7);

    let out = bohr(&["--format", "table", "ks", "check", &fixture("cabello18.json")]);
    assert!(out.stdout.contains("UNSAT"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let invocations: Vec<Vec<String>> = vec![
        vec![
            "heyting".into(),
            "--op".into(),
            "notnot".into(),
            "--sigma".into(),
            fixture("m3_excluded_middle_sigma.json"),
            "--poset".into(),
            fixture("m3_poset.json"),
        ],
        vec!["ks".into(), "check".into(), fixture("cabello18.json")],
        vec!["points".into(), "--poset".into(), fixture("m2_star_poset.json")],
        vec!["enum-young".into(), "--n".into(), "9".into(), "--k".into(), "4".into()],
        vec![
            "pair".into(),
            "--state".into(),
            fixture("state_e3.json"),
            "--sigma".into(),
            fixture("m3_excluded_middle_sigma.json"),
            "--poset".into(),
            fixture("m3_poset.json"),
        ],
    ];
    for args in &invocations {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let first = bohr(&refs);
        let second = bohr(&refs);
        assert_eq!(first.code, second.code);
        assert_eq!(first.stdout, second.stdout, "args {args:?}");
        assert_eq!(first.stderr, second.stderr);
    }
}

#[test]
fn help_and_version_exit_zero() {
    let out = bohr(&["--help"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("enum-young"));
    let out = bohr(&["--version"]);
    assert_eq!(out.code, 0);
}
