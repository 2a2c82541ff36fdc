//! Every command driven through the built binary: outputs, formats and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_ordinal-peer");

fn fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../ordinal-peer/data/regions_fixture.csv")
}

fn blobs() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../ordinal-peer/data/blobs8.csv")
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn classify_reports_location_indices() {
    let f = fixture();
    let o = run(&["classify", "--input", f.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 9);
    let li = |id: &str| rows.iter().find(|r| r["id"] == id).unwrap()["li"].as_u64().unwrap();
    let got: Vec<u64> = ["West Arnhem", "South Canberra", "East Arnhem", "Weston Creek", "Lake Macquarie - East", "West Torrens"]
        .iter()
        .map(|id| li(id))
        .collect();
    assert_eq!(got, vec![1, 10, 1, 8, 6, 4]);
    // The single excluded subunit is reported on stderr.
    assert_eq!(stderr(&o).lines().count(), 1);
}

#[test]
fn classify_formats() {
    let f = fixture();
    let table = run(&["classify", "--input", f.to_str().unwrap()]);
    assert_eq!(table.status.code(), Some(0));
    let t = stdout(&table);
    assert_eq!(t.lines().count(), 10);
    assert!(t.lines().next().unwrap().starts_with("region"));
    let auburn = t.lines().find(|l| l.starts_with("Auburn")).unwrap();
    assert!(auburn.split_whitespace().any(|c| c == "2.31"), "{auburn}");

    let csv = run(&["classify", "--input", f.to_str().unwrap(), "--format", "csv"]);
    let mut rdr = csv::Reader::from_reader(csv.stdout.as_slice());
    let headers = rdr.headers().unwrap().clone();
    let hi_col = headers.iter().position(|h| h == "hi_pct").unwrap();
    let rows: Vec<csv::StringRecord> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 9);
    let kg = rows.iter().find(|r| &r[0] == "Ku-ring-gai").unwrap();
    let hi: f64 = kg[hi_col].parse().unwrap();
    assert!((hi - 91.8).abs() < 1.0);
    assert_eq!(kg[hi_col].split('.').nth(1).unwrap().len(), 2);
}

#[test]
fn classify_input_errors_exit_two() {
    let dir = std::env::temp_dir().join(format!("ordinal-peer-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let empty = dir.join("empty.csv");
    std::fs::write(&empty, "").unwrap();
    let o = run(&["classify", "--input", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("missing column"), "{}", stderr(&o));

    let o = run(&["classify", "--input", dir.join("absent.csv").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let bad = dir.join("bad.csv");
    std::fs::write(&bad, "subunit_id,region_id,population,category\na,R,-5,1\nb,R,10,11\n").unwrap();
    let o = run(&["classify", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).lines().count() >= 2, "{}", stderr(&o));
}

#[test]
fn argument_errors_exit_two() {
    let f = fixture();
    assert_eq!(run(&["classify", "--input", f.to_str().unwrap(), "--alpha", "0"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--input", f.to_str().unwrap(), "--weights", "0.5,0.5,0.5"]).status.code(), Some(2));
    assert_eq!(run(&["classify", "--input", f.to_str().unwrap(), "--n", "1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn compare_command() {
    let f = fixture();
    let f = f.to_str().unwrap();
    let o = run(&["compare", "--input", f, "Auburn", "Auburn", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["total_distance"], 0.0);

    let o = run(&["compare", "--input", f, "Ku-ring-gai", "Auburn", "--format", "json"]);
    let v = json(&o);
    assert!((100.0 * v["profiles"][0]["hi"].as_f64().unwrap() - 91.8).abs() < 1.0);
    assert!((100.0 * v["profiles"][1]["hi"].as_f64().unwrap() - 57.9).abs() < 1.0);

    let o = run(&["compare", "--input", f, "Ku-ring-gai", "Auburn"]);
    let t = stdout(&o);
    let hi_line = t.lines().find(|l| l.starts_with("hi_pct")).unwrap();
    assert_eq!(hi_line.split_whitespace().collect::<Vec<_>>(), vec!["hi_pct", "91.84", "57.94"]);
    assert!(t.lines().any(|l| l.starts_with("total")));

    let o = run(&["compare", "--input", f, "Auburn", "Atlantis"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("Atlantis"));
}

#[test]
fn tables_command() {
    let o = run(&["tables", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o).as_array().unwrap().len(), 45);
    let o = run(&["tables", "2", "--format", "csv"]);
    assert_eq!(stdout(&o).lines().count(), 46);
    let o = run(&["tables", "2", "--n", "6", "--format", "json"]);
    assert_eq!(json(&o).as_array().unwrap().len(), 15);

    let o = run(&["tables", "3", "--format", "json"]);
    assert_eq!(json(&o)["cells"].as_array().unwrap().len(), 81);
    let o = run(&["tables", "4"]);
    assert_eq!(o.status.code(), Some(0));

    let o = run(&["tables", "5"]);
    let t = stdout(&o);
    let labels: Vec<&str> = t.lines().skip(1).map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(labels, vec!["A", "B", "C", "D"]);
    assert!(t.contains("68.54") && t.contains("57.69") && t.contains("46.62"));

    let o = run(&["tables", "3", "--n", "7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("n = 10"));
    assert_eq!(run(&["tables", "9"]).status.code(), Some(2));
}

#[test]
fn validate_command() {
    let o = run(&["validate", "gjsd", "10", "3.75"]);
    assert_eq!(o.status.code(), Some(0));
    let t = stdout(&o);
    let row: Vec<&str> = t.lines().nth(1).unwrap().split_whitespace().collect();
    assert_eq!(&row[row.len() - 2..], &["YES", "YES"]);
    let o = run(&["validate", "glov", "10", "3.75", "--format", "json"]);
    let v = json(&o);
    assert_eq!(v["value_validity_pass"], false);
    assert_eq!(run(&["validate", "entropy", "10", "3.75"]).status.code(), Some(2));
    assert_eq!(run(&["validate", "gjsd", "3", "2"]).status.code(), Some(2));
}

#[test]
fn cluster_splits_the_blob_fixture() {
    let b = blobs();
    let o = run(&["cluster", "--input", b.to_str().unwrap(), "--k", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    let mut groups: Vec<Vec<String>> = v["members"]
        .as_array()
        .unwrap()
        .iter()
        .map(|m| m.as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect())
        .collect();
    groups.sort();
    assert_eq!(groups, vec![vec!["High 1", "High 2", "High 3", "High 4"], vec!["Low 1", "Low 2", "Low 3", "Low 4"]]);
    assert!(v["clustering"]["silhouette"].as_f64().unwrap() > 0.5);

    let o = run(&["cluster", "--input", b.to_str().unwrap(), "--k", "2,3,4", "--format", "json"]);
    assert_eq!(json(&o)["best_k"], 2);
    let o = run(&["cluster", "--input", b.to_str().unwrap(), "--k", "9"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["cluster", "--input", b.to_str().unwrap(), "--k", "2", "--weights", "1,0,0", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 9);
}

#[test]
fn serve_on_busy_port_exits_one() {
    let busy = std::net::TcpListener::bind("127.0.0.1:0").unwrap();
    let port = busy.local_addr().unwrap().port().to_string();
    let o = run(&["serve", "--port", &port]);
    assert_eq!(o.status.code(), Some(1), "{}", stderr(&o));
    assert!(stderr(&o).contains("already in use"));
    let o = run(&["serve", "--port", &port, "--cors-origin", "bad\norigin"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn outputs_are_deterministic() {
    let f = fixture();
    for args in [
        vec!["classify", "--input", f.to_str().unwrap()],
        vec!["classify", "--input", f.to_str().unwrap(), "--format", "json"],
        vec!["cluster", "--input", f.to_str().unwrap(), "--k", "2,3", "--format", "json"],
    ] {
        assert_eq!(run(&args).stdout, run(&args).stdout);
    }
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let f = fixture();
    let args = ["cluster", "--input", f.to_str().unwrap(), "--k", "2,3,4", "--format", "json"];
    let with = |threads: &str| Command::new(BIN).args(args).env("RAYON_NUM_THREADS", threads).output().unwrap().stdout;
    assert_eq!(with("1"), with("8"));
}
