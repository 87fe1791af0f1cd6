use std::process::{Command, Output};

fn laxgray(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_laxgray"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = laxgray(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn decompose_prints_the_globular_sum() {
    assert_eq!(stdout(&["decompose", "[2]([1],[0])"]), "2 ⊕₀ 1\n");
}

#[test]
fn counts_table_for_an_arrow() {
    assert_eq!(
        stdout(&["counts", "[1]", "--max-dim", "2"]),
        "dim 0: ν=4, PR=4\ndim 1: ν=10, PR=10\ndim 2: ν=11, PR=11\n"
    );
}

#[test]
fn verify_gray_passes_on_a_three_simplex() {
    let out = laxgray(&["verify", "gray", "[3]"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn parse_errors_exit_with_two() {
    for bad in ["[1", "[a]", "[2]([1])", "[1]x"] {
        let out = laxgray(&["nu", bad]);
        assert_eq!(out.status.code(), Some(2), "{bad}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn every_subcommand_accepts_a_point() {
    for args in [
        vec!["decompose", "[0]"],
        vec!["lambda", "[0]"],
        vec!["tensor", "[0]"],
        vec!["nu", "[0]"],
        vec!["gray", "[0]"],
        vec!["gray", "[0]", "--format", "dot"],
        vec!["counts", "[0]"],
        vec!["verify", "all", "[0]"],
        vec!["span", "[0]"],
        vec!["span", "[0]", "--format", "dot"],
        vec!["emit", "[0]"],
        vec!["emit", "[0]", "--what", "shuffle"],
    ] {
        stdout(&args);
    }
}

#[test]
fn json_outputs_parse() {
    for args in [
        vec!["lambda", "[2]([1],[0])"],
        vec!["tensor", "[1]"],
        vec!["nu", "[1]([1])"],
        vec!["gray", "[2]"],
        vec!["verify", "all", "[2]", "--format", "json"],
        vec!["counts", "[1]", "--format", "json"],
    ] {
        let v: serde_json::Value = serde_json::from_str(&stdout(&args)).unwrap();
        assert!(v.is_object(), "{args:?}");
    }
    let v: serde_json::Value = serde_json::from_str(&stdout(&["nu", "[1]([1])"])).unwrap();
    assert_eq!(v["nondegenerate"], serde_json::json!([2, 2, 1, 0]));
}

#[test]
fn out_flag_writes_a_file() {
    let path = std::env::temp_dir().join(format!("laxgray-{}.dot", std::process::id()));
    let p = path.to_str().unwrap();
    assert_eq!(stdout(&["emit", "[1]", "--out", p]), "");
    let written = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert!(written.starts_with("digraph"));
    assert_eq!(written, stdout(&["emit", "[1]"]));
}
