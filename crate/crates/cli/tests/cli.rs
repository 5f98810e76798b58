use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(name)
}

fn hisfan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hisfan"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn check_reports_the_three_models() {
    let d = data("small3.csv");
    let cases = [
        ("model_quadratic.txt", "rank: 3", "identifiable: yes", "hierarchical: yes"),
        ("model_ii.txt", "rank: 5", "identifiable: no", "hierarchical: yes"),
        ("model_iii.txt", "rank: 4", "identifiable: yes", "hierarchical: no"),
    ];
    for (model, rank, ident, hier) in cases {
        let o = hisfan(&["check", "--design", path_str(&d), "--header", "--model", path_str(&data(model))]);
        assert_eq!(o.status.code(), Some(0), "{model}");
        let text = stdout(&o);
        for needle in [rank, ident, hier] {
            assert!(text.contains(needle), "{model}: {text}");
        }
    }
}

#[test]
fn leaves_round_trip_through_check() {
    let dir = tempfile::tempdir().unwrap();
    let d = data("small3.csv");
    let o = hisfan(&[
        "fan",
        "--design",
        path_str(&d),
        "--header",
        "--mode",
        "exhaustive",
        "--write-models",
        path_str(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let files: Vec<_> = std::fs::read_dir(dir.path()).unwrap().collect();
    assert_eq!(files.len(), 7);
    for f in files {
        let path = f.unwrap().path();
        let c = hisfan(&[
            "check",
            "--design",
            path_str(&d),
            "--header",
            "--model",
            path_str(&path),
            "--format",
            "json-lines",
        ]);
        let v: serde_json::Value = serde_json::from_str(stdout(&c).trim()).unwrap();
        assert_eq!(v["identifiable"], true);
        assert_eq!(v["saturated"], true);
        assert_eq!(v["hierarchical"], true);
    }
}

#[test]
fn text_and_json_list_the_same_leaves() {
    let d = data("dsd4.csv");
    let text = hisfan(&["fan", "--design", path_str(&d), "--header", "--mode", "all"]);
    let json = hisfan(&[
        "fan", "--design", path_str(&d), "--header", "--mode", "all", "--format", "json-lines",
    ]);
    assert_eq!(text.status.code(), Some(0));
    assert_eq!(json.status.code(), Some(0));
    let from_text: BTreeSet<String> = stdout(&text)
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split('\t').next().unwrap().to_string())
        .collect();
    let mut from_json = BTreeSet::new();
    let mut summary = None;
    for line in stdout(&json).lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        match v["record"].as_str() {
            Some("leaf") => {
                from_json.insert(v["leaf"]["pretty"].as_str().unwrap().to_string());
            }
            Some("summary") => summary = Some(v),
            other => panic!("unexpected record {other:?}"),
        }
    }
    assert_eq!(from_text.len(), 251);
    assert_eq!(from_text, from_json);
    let summary = summary.unwrap();
    assert_eq!(summary["counts"]["greedy"], 125);
    assert_eq!(summary["counts"]["subset"], 126);
}

#[test]
fn output_does_not_depend_on_worker_count() {
    let d = data("dsd4.csv");
    let one = hisfan(&["fan", "--design", path_str(&d), "--header", "--jobs", "1"]);
    let four = hisfan(&["fan", "--design", path_str(&d), "--header", "--jobs", "4"]);
    assert_eq!(stdout(&one), stdout(&four));
}

#[test]
fn conditions_subset_witness() {
    let o = hisfan(&[
        "conditions",
        "--design",
        path_str(&data("small3.csv")),
        "--header",
        "--monomial",
        "(1,1,0)",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("subset condition: FAIL (witness {x1,x2})"));
}

#[test]
fn conditions_table_and_guaranteed_set() {
    let o = hisfan(&["conditions", "--levels", "2,2,3,3"]);
    assert_eq!(stdout(&o).lines().count(), 36);
    let o = hisfan(&["conditions", "--levels", "4,3", "--n", "8", "--format", "json-lines"]);
    let last: serde_json::Value =
        serde_json::from_str(stdout(&o).lines().last().unwrap()).unwrap();
    assert_eq!(last["record"], "guaranteed");
    assert_eq!(last["terms"].as_array().unwrap().len(), 5);
}

#[test]
fn out_of_box_monomial_fails_box_condition() {
    let o = hisfan(&["conditions", "--levels", "2,2", "--monomial", "(2,0)"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("box condition: FAIL"));
}

#[test]
fn groebner_lex_on_two_level_design() {
    let o = hisfan(&[
        "groebner",
        "--design",
        path_str(&data("twolevel7.csv")),
        "--header",
        "--order",
        "lex",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("generators (5):"));
    assert!(text.contains("x1 - 1/2*x2*x3 + 1/2*x2 + 1/2*x3 - x4 - 1/2"));
    assert!(text.contains("standard monomials (7): {1, x4, x3, x2, x3*x4, x2*x4, x2*x3}"));
}

#[test]
fn groebner_structured_record() {
    let o = hisfan(&[
        "groebner",
        "--design",
        path_str(&data("twolevel7.csv")),
        "--header",
        "--format",
        "json-lines",
    ]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["order"], "grlex");
    assert_eq!(v["generators"].as_array().unwrap().len(), 8);
    assert_eq!(v["standard_monomials"].as_array().unwrap().len(), 7);
}

#[test]
fn search_example_counts() {
    let o = hisfan(&[
        "search",
        "--levels",
        "4,3",
        "--n",
        "8",
        "--required",
        path_str(&data("staircases_4x3_n8.txt")),
        "--format",
        "json-lines",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["evaluated"], 495);
    assert_eq!(v["supporting_all"], 36);
}

#[test]
fn search_edge_cases() {
    let o = hisfan(&["search", "--levels", "2,2", "--n", "4", "--format", "json-lines"]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["evaluated"], 1);
    assert_eq!(v["supporting_all"], 1);
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("none.txt");
    std::fs::write(&empty, "").unwrap();
    let o = hisfan(&[
        "search", "--levels", "4,3", "--n", "8", "--required", path_str(&empty), "--format", "json-lines",
    ]);
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!(v["supporting_all"], 495);
}

#[test]
fn exit_codes() {
    let missing = hisfan(&["check", "--design", "/nonexistent.csv", "--model", "/nonexistent.txt"]);
    assert_eq!(missing.status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "1,2\n3,x\n").unwrap();
    let parse = hisfan(&["fan", "--design", path_str(&bad)]);
    assert_eq!(parse.status.code(), Some(2));
    let capped = hisfan(&[
        "fan",
        "--design",
        path_str(&data("dsd4.csv")),
        "--header",
        "--mode",
        "greedy",
        "--cap",
        "10",
    ]);
    assert_eq!(capped.status.code(), Some(3));
    let search_cap = hisfan(&["search", "--levels", "4,3", "--n", "8", "--cap", "10"]);
    assert_eq!(search_cap.status.code(), Some(3));
    let usage = hisfan(&["fan"]);
    assert_eq!(usage.status.code(), Some(2));
}
