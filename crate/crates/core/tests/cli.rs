use std::process::{Command, Output};

use serde_json::Value;

fn isoposet(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isoposet"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = isoposet(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_str(&stdout(&out)).unwrap()
}

#[test]
fn ethene_report_has_aut0_order() {
    let v = json(&["report", "--molecule", "ethene", "--format", "json"]);
    assert_eq!(v["aut0"]["order"], 4320);
    assert_eq!(v["hidden_order"], 6);
    assert_eq!(v["stratum_sizes"], serde_json::json!([1, 1, 3, 3, 6]));
}

#[test]
fn output_is_deterministic_and_round_trips() {
    for args in [
        ["report", "--molecule", "cyclopropane", "--format", "json"],
        ["aut", "--molecule", "ethene", "--format", "json"],
        ["hidden", "--molecule", "ethene", "--format", "json"],
        ["chiral", "--molecule", "cyclopropane", "--format", "json"],
    ] {
        let a = stdout(&isoposet(&args));
        let b = stdout(&isoposet(&args));
        assert_eq!(a, b);
        let v: Value = serde_json::from_str(&a).unwrap();
        assert_eq!(serde_json::to_string_pretty(&v).unwrap() + "\n", a);
    }
    let a = stdout(&isoposet(&["report", "--molecule", "benzene"]));
    assert_eq!(a, stdout(&isoposet(&["report", "--molecule", "benzene"])));
}

#[test]
fn ethene_dot_has_fourteen_nodes_in_five_ranks() {
    let out = isoposet(&["poset", "--molecule", "ethene", "--format", "dot"]);
    assert_eq!(out.status.code(), Some(0));
    let dot = stdout(&out);
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.matches("rank=same").count(), 5);
    assert_eq!(dot.lines().filter(|l| l.contains("[tooltip=")).count(), 14);
    assert_eq!(dot.lines().filter(|l| l.contains(" -> ")).count(), 25);
}

#[test]
fn cyclopropane_disubstituted_classes() {
    let v = json(&[
        "distinguish",
        "--molecule",
        "cyclopropane",
        "--stratum",
        "4,2",
        "--format",
        "json",
    ]);
    let classes = v["substitution_classes"].as_array().unwrap();
    let mut sizes: Vec<usize> = classes
        .iter()
        .map(|c| c.as_array().unwrap().len())
        .collect();
    sizes.sort_unstable();
    assert_eq!(sizes, vec![1, 1, 2]);
    let chiral = json(&["chiral", "--molecule", "cyclopropane", "--format", "json"]);
    let pair = classes
        .iter()
        .find(|c| c.as_array().unwrap().len() == 2)
        .unwrap();
    assert!(chiral["chiral_pairs"].as_array().unwrap().contains(pair));
    let text = stdout(&isoposet(&[
        "distinguish",
        "--molecule",
        "cyclopropane",
        "--stratum",
        "4,2",
    ]));
    assert!(text.starts_with("stratum (4,2) substitution classes:"));
}

#[test]
fn explicit_pair() {
    let v = json(&[
        "distinguish",
        "--molecule",
        "cyclopropane",
        "(4,1,1)#1",
        "(4,1,1)#2",
        "--format",
        "json",
    ]);
    assert_eq!(v["substitution"]["indistinguishable"], true);
    assert_eq!(v["pairs_of_characters"]["indistinguishable"], true);
    assert_eq!(v["characters"]["indistinguishable"], true);
    let out = isoposet(&[
        "distinguish",
        "--molecule",
        "cyclopropane",
        "(4,1,1)#1",
        "(4,2)#1",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn characters_table() {
    let text = stdout(&isoposet(&[
        "characters",
        "--molecule",
        "ethene",
        "--stratum",
        "2,2",
    ]));
    let rows: Vec<&str> = text.lines().filter(|l| l.starts_with("(2,2)#")).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows.iter().all(|r| r
        .split_whitespace()
        .skip(1)
        .all(|c| c == "in" || c == "out")));
    assert_eq!(rows[0].split_whitespace().count(), 1 + 16);
}

#[test]
fn spec_file_matches_builtin() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cp.txt");
    std::fs::write(
        &path,
        "# cyclopropane\nname=cyclopropane\ndegree=6\nG=(123)(456);(14)(26)(35)\nGp=(14)(25)(36)\nGpp=(14)\nD=6;5,1;4,2;4,1,1;3,3\n",
    )
    .unwrap();
    let from_file = json(&[
        "report",
        "--spec",
        path.to_str().unwrap(),
        "--format",
        "json",
    ]);
    let builtin = json(&["report", "--molecule", "cyclopropane", "--format", "json"]);
    assert_eq!(from_file, builtin);
}

#[test]
fn output_flag_and_legend() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("poset.json");
    let out = isoposet(&[
        "poset",
        "--molecule",
        "ethene",
        "--format",
        "json",
        "--legend",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["legend"]["(2,2)#1"], "1,2|3,4");
    let text = stdout(&isoposet(&["poset", "--molecule", "ethene", "--legend"]));
    assert!(text.contains("legend:"));
}

#[test]
fn domain_override() {
    let v = json(&[
        "poset",
        "--molecule",
        "ethene",
        "--D",
        "2,2;2,1,1",
        "--format",
        "json",
    ]);
    assert_eq!(v["strata"].as_array().unwrap().len(), 2);
}

#[test]
fn exit_codes() {
    assert_eq!(isoposet(&["--help"]).status.code(), Some(0));
    assert_eq!(
        isoposet(&["report", "--molecule", "methane"]).status.code(),
        Some(1)
    );
    assert_eq!(isoposet(&["report"]).status.code(), Some(1));
    assert_eq!(isoposet(&["nonsense"]).status.code(), Some(1));
    assert_eq!(
        isoposet(&["aut", "--molecule", "ethene", "--format", "dot"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        isoposet(&["report", "--molecule", "ethene", "--spec", "x.txt"])
            .status
            .code(),
        Some(1)
    );
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "name=x\ndegree=4\nG=(15)\n").unwrap();
    let out = isoposet(&["poset", "--spec", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad.txt"));
    // too many orbits for the automorphism search
    let big = dir.path().join("big.txt");
    std::fs::write(&big, "name=big\ndegree=5\nG=(12)\n").unwrap();
    let out = isoposet(&["aut", "--spec", big.to_str().unwrap()]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("limit"));
}
