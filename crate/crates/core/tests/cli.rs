//! End-to-end checks of the command-line interface: file formats, the
//! documented subcommands, and the exit-code contract (2 usage, 3 cap
//! violations, 4 invariant failures).

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gapcsp"))
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

const LIN1: &str =
    r#"{"field":{"t":1},"d":1,"k":2,"constraints":[{"kind":"linear","u":0,"v":1,"M":[[1]]}]}"#;

#[test]
fn reduce_split_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let cnf = dir.path().join("sat1.cnf");
    write(&cnf, "p cnf 3 1\n1 2 3 0\n");
    let out = dir.path().join("red");
    let status = bin()
        .args(["reduce", "sat2vec"])
        .arg(&cnf)
        .args(["--ell", "2", "--out"])
        .arg(&out)
        .output()
        .unwrap();
    assert!(status.status.success());
    let stdout = String::from_utf8(status.stdout).unwrap();
    assert!(stdout.contains("|V|=192"), "{stdout}");
    assert!(out.join("instance.json").exists());
    assert!(out.join("plan.json").exists());

    let split = bin().arg("split").arg(out.join("instance.json")).output().unwrap();
    assert!(split.status.success());
    let stdout = String::from_utf8(split.stdout).unwrap();
    assert!(stdout.contains("|E_L|=192"), "{stdout}");
    assert!(stdout.contains("|E_P|=96"), "{stdout}");
}

#[test]
fn attack_then_verify_exhaustive() {
    let dir = tempfile::tempdir().unwrap();
    let instance = dir.path().join("lin1.json");
    write(&instance, LIN1);
    let spec = dir.path().join("attack.json");
    write(
        &spec,
        &format!(
            r#"{{"instance":{LIN1},"verifier":"linear","assignment":[[1],[1]],"family":"wrong-assignment-honest"}}"#
        ),
    );
    let proof = dir.path().join("proof.json");
    let out = bin()
        .args(["attack", "--spec"])
        .arg(&spec)
        .arg("--out")
        .arg(&proof)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let log = dir.path().join("descriptors.jsonl");
    let verify = bin()
        .args(["verify", "--instance"])
        .arg(&instance)
        .arg("--proof")
        .arg(&proof)
        .args(["--mode", "exhaustive", "--verifier", "linear", "--log"])
        .arg(&log)
        .output()
        .unwrap();
    assert!(verify.status.success());
    let stdout = String::from_utf8(verify.stdout).unwrap();
    assert!(stdout.starts_with("acceptance 1/1"), "{stdout}");

    // one descriptor log line per randomness choice, all accepting
    let lines: Vec<serde_json::Value> = std::fs::read_to_string(&log)
        .unwrap()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), 192);
    assert!(lines.iter().all(|l| l["verdict"] == "accept"));
    assert!(lines.iter().any(|l| l["test"] == "L3"));

    // a wrong-assignment attack must fall below the soundness threshold
    let bad_spec = dir.path().join("bad.json");
    write(
        &bad_spec,
        &format!(
            r#"{{"instance":{LIN1},"verifier":"linear","assignment":[[1],[0]],"family":"wrong-assignment-honest"}}"#
        ),
    );
    let bad_proof = dir.path().join("bad_proof.json");
    assert!(bin()
        .args(["attack", "--spec"])
        .arg(&bad_spec)
        .arg("--out")
        .arg(&bad_proof)
        .status()
        .unwrap()
        .success());
    let verify = bin()
        .args(["verify", "--instance"])
        .arg(&instance)
        .arg("--proof")
        .arg(&bad_proof)
        .args(["--mode", "exhaustive", "--verifier", "linear"])
        .output()
        .unwrap();
    let stdout = String::from_utf8(verify.stdout).unwrap();
    assert!(!stdout.starts_with("acceptance 1/1"), "{stdout}");
}

#[test]
fn gapify_explicit_and_virtual() {
    let dir = tempfile::tempdir().unwrap();
    let instance = dir.path().join("lin1.json");
    write(&instance, LIN1);
    let gap = dir.path().join("gap.json");
    let out = bin()
        .args(["gapify", "--instance"])
        .arg(&instance)
        .arg("--explicit")
        .arg("--out")
        .arg(&gap)
        .output()
        .unwrap();
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&gap).unwrap()).unwrap();
    assert_eq!(json["layout"]["n_pi1"], 4);
    assert_eq!(json["layout"]["g_recorded"], 192);

    let virt = bin()
        .args(["gapify", "--instance"])
        .arg(&instance)
        .arg("--virtual")
        .output()
        .unwrap();
    assert!(virt.status.success());
    let stdout = String::from_utf8(virt.stdout).unwrap();
    assert!(stdout.contains("1/9600"), "{stdout}");
}

#[test]
fn exit_codes() {
    // usage -> 2
    let usage = bin().args(["verify", "--bogus"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));

    // cap violation -> 3
    let dir = tempfile::tempdir().unwrap();
    let instance = dir.path().join("big.json");
    write(
        &instance,
        r#"{"field":{"t":3},"d":1,"k":12,"constraints":[{"kind":"linear","u":0,"v":1,"M":[[1]]}]}"#,
    );
    let spec = dir.path().join("attack.json");
    let assignment: Vec<Vec<u8>> = vec![vec![0]; 12];
    write(
        &spec,
        &serde_json::json!({
            "instance": serde_json::from_str::<serde_json::Value>(&std::fs::read_to_string(&instance).unwrap()).unwrap(),
            "verifier": "linear",
            "assignment": assignment,
            "family": "wrong-assignment-honest",
        })
        .to_string(),
    );
    let proof = dir.path().join("proof.json");
    assert!(bin()
        .args(["attack", "--spec"])
        .arg(&spec)
        .arg("--out")
        .arg(&proof)
        .status()
        .unwrap()
        .success());
    let capped = bin()
        .args(["verify", "--instance"])
        .arg(&instance)
        .arg("--proof")
        .arg(&proof)
        .args(["--mode", "exhaustive", "--verifier", "linear"])
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(3), "{}", String::from_utf8_lossy(&capped.stderr));

    // invariant failure -> 4 (variable in two parallel constraints)
    let broken = dir.path().join("broken.json");
    write(
        &broken,
        r#"{"field":{"t":1},"d":1,"k":2,"constraints":[
            {"kind":"parallel","u":0,"v":1,"Q":[0],"sub":[[1,1],[1,1]]},
            {"kind":"parallel","u":0,"v":1,"Q":[0],"sub":[[1,1],[1,1]]}]}"#,
    );
    let split = bin().arg("split").arg(&broken).output().unwrap();
    assert_eq!(split.status.code(), Some(4));
}

#[test]
fn verify_sampled_mode_reports_seed() {
    let dir = tempfile::tempdir().unwrap();
    let instance = dir.path().join("lin1.json");
    write(&instance, LIN1);
    let spec = dir.path().join("attack.json");
    write(
        &spec,
        &format!(
            r#"{{"instance":{LIN1},"verifier":"combined","assignment":[[1],[1]],"family":"wrong-assignment-honest"}}"#
        ),
    );
    let proof = dir.path().join("proof.json");
    assert!(bin()
        .args(["attack", "--spec"])
        .arg(&spec)
        .arg("--out")
        .arg(&proof)
        .status()
        .unwrap()
        .success());
    let verify = bin()
        .args(["verify", "--instance"])
        .arg(&instance)
        .arg("--proof")
        .arg(&proof)
        .args(["--mode", "sample", "--trials", "2000", "--seed", "9"])
        .output()
        .unwrap();
    assert!(verify.status.success(), "{}", String::from_utf8_lossy(&verify.stderr));
    let stdout = String::from_utf8(verify.stdout).unwrap();
    assert!(stdout.contains("seed=9"), "{stdout}");
    assert!(stdout.starts_with("acceptance 1.000000"), "{stdout}");
}
