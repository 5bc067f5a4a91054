use std::process::{Command, Output};

use serde_json::Value;

const TREFOIL: &str = "X[1,4,2,5] X[3,6,4,1] X[5,2,6,3]";
const HOPF: &str = "X[4,1,3,2] X[2,3,1,4]";

fn qalt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qalt")).args(args).output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = qalt(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn text(args: &[&str]) -> String {
    let out = qalt(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn trefoil_jones() {
    let v = json(&["jones", "--pd", TREFOIL, "--json"]);
    assert_eq!(v["det"], 3);
    assert_eq!(v["breadth"], 3);
    assert_eq!(v["gaps"].as_array().unwrap().len(), 1);
    let poly: qalt::HalfLaurent = serde_json::from_value(v["V"].clone()).unwrap();
    assert_eq!(poly, qalt::bracket::jones(&qalt::parse_pd(TREFOIL).unwrap()));
}

#[test]
fn text_and_json_agree() {
    let t = text(&["jones", "--pd", TREFOIL]);
    assert!(t.contains("det: 3\n") && t.contains("breadth: 3\n") && t.contains("gaps: 1 "));
    let t = text(&["det", "--pd", TREFOIL]);
    let j = json(&["det", "--pd", TREFOIL, "--json"]);
    assert!(t.contains(&format!("goeritz: {}\n", j["goeritz"])));
    assert_eq!(j["agree"], true);
}

#[test]
fn kanenobu_zero() {
    let v = json(&["kanenobu", "0", "0", "--analyze", "--json"]);
    assert_eq!((v["breadth"].clone(), v["det"].clone()), (8.into(), 25.into()));
    assert!(v["gaps"].as_array().unwrap().is_empty());
    let v = json(&["kanenobu", "3", "-9", "--analyze", "--json"]);
    assert_eq!(v["gap_clause_disagrees"], true);
}

#[test]
fn hopf_certificate_roundtrips() {
    let v = json(&["certify", "--pd", HOPF, "--json"]);
    assert_eq!(v["result"], "certified");
    assert_eq!(v["certificate"]["tree"]["det"], 2);
    let cert: qalt::qa::Certificate = serde_json::from_value(v["certificate"].clone()).unwrap();
    qalt::qa::replay(&cert, 50).unwrap();
}

#[test]
fn exit_codes() {
    let out = qalt(&["certify", "--pd", TREFOIL, "--max-nodes", "1"]);
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_qalt"))
        .args(["certify", "--pd", TREFOIL])
        .env("QALT_BUDGET_NODES", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    for bad in [
        vec!["jones", "--pd", "X[1,2"],
        vec!["jones", "--pd", TREFOIL, "--format", "edgelist"],
        vec!["jones", "--pd", TREFOIL, "--input", "x.pd"],
        vec!["jones"],
        vec!["goeritz", "--pd", "0 1 q", "--format", "edgelist"],
        vec!["certify", "--pd", "X[1,1,2,2] Loop[3]"],
        vec!["batch", "/definitely/not/here"],
    ] {
        let out = qalt(&bad);
        assert_eq!(out.status.code(), Some(1), "{bad:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn edge_lists() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.txt");
    std::fs::write(&path, "# triangle\n0 1 +\n1 2 +\n2 0 +\n").unwrap();
    let p = path.to_str().unwrap();
    let g = json(&["goeritz", "--input", p, "--format", "edgelist", "--json"]);
    assert_eq!(g["det"], 3);
    let g = json(&["gamma", "--input", p, "--format", "edgelist", "--json"]);
    assert_eq!(g["spanning_trees"], 3);
    let b = json(&["bracket", "--pd", TREFOIL, "--json"]);
    let pd = json(&["gamma", "--pd", TREFOIL, "--json"]);
    assert_eq!(pd["Gamma"], b["bracket"]);
}

#[test]
fn obstruct_cites_rules() {
    let v = json(&["obstruct", "--pd", HOPF, "--prime", "--json"]);
    assert_eq!(v["verdict"]["status"], "NotQA");
    let reasons = v["verdict"]["reasons"].as_array().unwrap();
    assert!(reasons.iter().all(|r| r["citation"].as_str().is_some_and(|c| !c.is_empty())));
    let v = json(&["obstruct", "--pd", HOPF, "--prime", "--torus2n", "--json"]);
    assert_eq!(v["verdict"]["status"], "Inconclusive");
}

#[test]
fn batch_isolates_errors_and_keeps_order() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("links.pd");
    std::fs::write(
        &path,
        format!("# comment\ntrefoil: {TREFOIL}\nbroken: X[1,2\n\nhopf: {HOPF}  # trailing\nfig8: X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]\n"),
    )
    .unwrap();
    let r = json(&["batch", path.to_str().unwrap(), "--certify", "--json"]);
    let names: Vec<&str> = r["entries"].as_array().unwrap().iter().map(|e| e["name"].as_str().unwrap()).collect();
    assert_eq!(names, ["trefoil", "broken", "hopf", "fig8"]);
    assert_eq!(r["entries"][1]["outcome"], "error");
    assert_eq!(r["summary"]["entries"], 4);
    assert_eq!(r["summary"]["errors"], 1);
    assert_eq!(r["summary"]["certified"], 3);
    assert_eq!(r["entries"][3]["det"], 5);
}

#[test]
fn batch_over_bundled_corpus() {
    let corpus = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/corpus.pd");
    let r = json(&["batch", corpus, "--json"]);
    assert_eq!(r["summary"]["errors"], 0);
    assert_eq!(r["summary"]["failed_checks"], 0);
    assert_eq!(r["summary"]["entries"], qalt::corpus::corpus().len());
}

#[test]
fn empty_batch() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.pd");
    std::fs::write(&path, "").unwrap();
    let r = json(&["batch", path.to_str().unwrap(), "--json"]);
    assert_eq!(r["summary"]["entries"], 0);
    assert!(r["entries"].as_array().unwrap().is_empty());
}
