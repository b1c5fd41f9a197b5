use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn sepmon(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sepmon")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn sepmon_stdin(args: &[&str], input: &str) -> (i32, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_sepmon"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn atoms_of_family() {
    let f = fixture("family_s2_t3.json");
    let (code, out) = sepmon(&["atoms", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(
        out.trim_end(),
        r#"{"atoms":[[0,3,0,0,1],[3,0,0,1,0],[0,0,3,1,1],[1,1,2,1,1],[2,2,1,1,1]],"beta":7}"#
    );
}

#[test]
fn z2_by_characteristic() {
    let f = fixture("z2.json");
    let (code, out) = sepmon(&["check-sep", "--char", "2", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["separating"], Value::Bool(true));

    let (code, out) = sepmon(&["check-sep", "--char", "0", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    let v = json(&out);
    assert_eq!(v["separating"], Value::Bool(false));
    let w = &v["witnesses"][0];
    assert_eq!(w["J"], json("[0,1]"));
    assert_eq!(w["certificate"], json(r#"{"k":2,"u":[1,0]}"#));
}

#[test]
fn family_verdicts() {
    let full = fixture("family_s2_t3.json");
    let short = fixture("family_s2_t3_short.json");
    for p in ["0", "2", "3", "5"] {
        assert_eq!(sepmon(&["check-sep", "--char", p, full.to_str().unwrap()]).0, 0);
    }
    let (code, out) = sepmon(&["check-sep", short.to_str().unwrap()]);
    assert_eq!(code, 1);
    let v = json(&out);
    assert_eq!(v["witnesses"][0]["J"], json("[0,1,2,3,4]"));
    assert_eq!(v["witnesses"][0]["atom"], json("[1,1,2,1,1]"));
}

#[test]
fn numeric_commands() {
    let f = fixture("k_star_2_1_m3.json");
    let f = f.to_str().unwrap();
    assert_eq!(json(&sepmon(&["beta", f]).1)["beta"], json("5"));
    assert_eq!(sepmon(&["beta-sep", f]).1.trim_end(), r#"{"beta_sep":5,"char":0}"#);
    let tau = json(&sepmon(&["tau", f]).1);
    assert_eq!(tau["tau_upper"], json("3"));
    let stats = json(&sepmon(&["stats", f]).1);
    assert_eq!(stats["dim_g"], json("1"));
    let (code, out) = sepmon(&["minimize", "--char", "0", f]);
    assert_eq!(code, 0);
    assert!(json(&out)["size"].as_u64().unwrap() >= 2);
}

#[test]
fn characteristic_from_input_and_warnings() {
    let f = fixture("mixed.json");
    let (code, out) = sepmon(&["tau", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["char"], json("2"));
    assert!(v.get("warnings").is_none());
    let (_, out) = sepmon(&["tau", "--char", "3", f.to_str().unwrap()]);
    assert!(json(&out)["warnings"].is_array());
}

#[test]
fn general_family() {
    let f = fixture("general.json");
    assert_eq!(sepmon(&["general-sep", "--char", "0", f.to_str().unwrap()]).0, 1);
    assert_eq!(sepmon(&["general-sep", "--char", "2", f.to_str().unwrap()]).0, 0);
}

#[test]
fn realize_output_is_valid_input() {
    let f = fixture("z2.json");
    let (code, out) = sepmon(&["realize", f.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, again) = sepmon_stdin(&["atoms"], &out);
    assert_eq!(code, 0);
    let (_, direct) = sepmon(&["atoms", f.to_str().unwrap()]);
    assert_eq!(again, direct);
}

#[test]
fn oracle_subcommand() {
    let f = fixture("family_s2_t3_short.json");
    let (code, out) = sepmon(&["oracle", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    let v = json(&out);
    assert_eq!(v["atoms_agree"], Value::Bool(true));
    assert_eq!(v["tau"], json("5"));
    let (code, out) = sepmon(&["check-sep", "--oracle-crosscheck", f.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(json(&out)["oracle_agrees"], Value::Bool(true));
}

#[test]
fn error_exit_codes() {
    let (code, out) = sepmon_stdin(&["atoms"], "{not json");
    assert_eq!(code, 2);
    assert_eq!(json(&out)["error"]["kind"], json(r#""json""#));

    let (code, out) = sepmon_stdin(&["atoms"], r#"{"n":2,"torus_rank":0,"torsion":[0],"weights":[[1,1]]}"#);
    assert_eq!(code, 2);
    assert!(json(&out)["error"].is_object());

    let (code, _) = sepmon(&["check-sep", "--char", "4", fixture("z2.json").to_str().unwrap()]);
    assert_eq!(code, 2);

    let (code, out) = sepmon(&[
        "atoms",
        "--max-degree",
        "3",
        fixture("family_s2_t3.json").to_str().unwrap(),
    ]);
    assert_eq!(code, 3);
    assert_eq!(json(&out)["error"]["kind"], json(r#""cap_exceeded""#));

    let (code, out) = sepmon(&["atoms", "/nonexistent/input.json"]);
    assert_eq!(code, 2);
    assert_eq!(json(&out)["error"]["kind"], json(r#""io""#));

    // argument errors come from the parser and also exit 2
    assert_eq!(sepmon(&["frobnicate"]).0, 2);
    assert_eq!(sepmon(&["atoms", "--max-degree", "0"]).0, 2);
}

#[test]
fn thread_count_does_not_change_output() {
    for name in ["family_s2_t3.json", "family_s2_t3_short.json", "z2.json", "mixed.json"] {
        let f = fixture(name);
        let f = f.to_str().unwrap();
        for cmd in ["atoms", "check-sep", "beta-sep", "tau", "minimize", "stats"] {
            let one = sepmon(&[cmd, "--threads", "1", f]);
            let many = sepmon(&[cmd, "--threads", "8", f]);
            let default = sepmon(&[cmd, "--parallel", f]);
            assert_eq!(one, many, "{cmd} {name}");
            assert_eq!(one, default, "{cmd} {name}");
        }
    }
}
