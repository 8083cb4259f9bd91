use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn handlecalc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_handlecalc"))
        .args(args)
        .output()
        .unwrap()
}

fn script(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("scripts")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn shipped_scripts_pass() {
    for name in ["three_crosscaps.hc", "s2xs2_blowup.hc"] {
        let out = handlecalc(&["run", &script(name)]);
        assert!(out.status.success(), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stdout).ends_with("traces)\n"));
    }
}

#[test]
fn trace_round_trip_with_endpoints() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.trace");
    let out = handlecalc(&[
        "run",
        &script("s2xs2_blowup.hc"),
        "--trace-out",
        trace.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let ok = handlecalc(&[
        "check",
        trace.to_str().unwrap(),
        "--initial",
        "[[0,1,0],[1,0,0],[0,0,-1]]",
        "--final",
        "[[1,0,0],[0,-1,0],[0,0,-1]]",
    ]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    let wrong = handlecalc(&[
        "check",
        trace.to_str().unwrap(),
        "--final",
        "[[1,0,0],[0,1,0],[0,0,-1]]",
    ]);
    assert_eq!(wrong.status.code(), Some(1));
}

#[test]
fn errors_go_to_stderr_with_positions() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.hc");
    fs::write(&path, "surface w = \"a+ a+\"\nnormalize q\n").unwrap();
    let out = handlecalc(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2, column 11"));

    fs::write(&path, "surface w = \"a+ a+\" extra\n").unwrap();
    let out = handlecalc(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn normalize_command() {
    let out = handlecalc(&["normalize", "1+ 2+ 1- 2- 3+ 3+"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[1], "non-orientable crosscaps 3");
    assert!(lines[0].split(' ').all(|t| t.ends_with('+')), "{}", lines[0]);
    assert!(text.contains("TRACE surface"));
    assert_eq!(handlecalc(&["normalize", "a+ a-"]).status.code(), Some(2));
}

#[test]
fn version_flag() {
    let out = handlecalc(&["--version"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("handlecalc "));
}
