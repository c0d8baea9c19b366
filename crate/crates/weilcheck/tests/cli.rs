//! The command-line front end: exit codes and JSON output.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_weilcheck"))
}

fn tmp(name: &str, body: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("weilcheck-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn verify_writes_a_report() {
    let inst = tmp("a1.json", r#"{"field":"Qp:5","type":"A1","frame":{"quadratic":"5"},"w":[[1]]}"#);
    let out = inst.with_file_name("a1_out.json");
    let st = bin()
        .args(["verify", inst.to_str().unwrap(), "--intermediates", "--psi-level", "-1", "--json", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(st.status.code(), Some(0), "{}", String::from_utf8_lossy(&st.stderr));
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["schema"], "weilcheck-report/1");
    assert_eq!(v["verdict"], "PASS");
    assert_eq!(v["psi_level"], -1);
    assert_eq!(v["lhs"], v["rhs"]);
}

#[test]
fn obstructed_and_bad_input_exit_two() {
    let obs = tmp(
        "obs.json",
        r#"{"field":"Qp:3","type":"B2","frame":{"biquadratic":["2","3"]},"w":[[1],[2,1,2,1]]}"#,
    );
    let bad = tmp("bad.json", r#"{"field":"Qp:4","type":"A1"}"#);
    for p in [obs, bad] {
        let st = bin().args(["verify", p.to_str().unwrap()]).output().unwrap();
        assert_eq!(st.status.code(), Some(2), "{}", String::from_utf8_lossy(&st.stdout));
    }
}

#[test]
fn suite_exit_codes() {
    let ok = tmp("ok.json", r#"{"suites":["lattice","torus-binary"]}"#);
    let st = bin().args(["suite", ok.to_str().unwrap()]).output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    let broken = tmp("broken.json", r#"{"suites":["clifford-oracle"],"controls":{"hilbert_flip":[1,2]}}"#);
    let st = bin().args(["suite", broken.to_str().unwrap()]).output().unwrap();
    assert_eq!(st.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&st.stdout).starts_with("FAIL clifford-oracle"));
}
