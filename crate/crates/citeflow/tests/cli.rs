//! End-to-end tests of the command-line interface: exit codes, error
//! context and the on-disk outputs.

use std::path::Path;
use std::process::{Command, Output};

use citeflow::formats;
use citeflow_core::fixtures::{multi_category_example, ExampleCorpus};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_citeflow"))
}

fn write_corpus(dir: &Path, corpus: &ExampleCorpus) {
    std::fs::create_dir_all(dir).unwrap();
    formats::write_registry(&dir.join("registry.csv"), &corpus.registry).unwrap();
    formats::write_venues(&dir.join("venues.csv"), &corpus.venues).unwrap();
    formats::write_publications(&dir.join("publications.csv"), &corpus.publications).unwrap();
    formats::write_citations(&dir.join("citations.csv"), &corpus.citations).unwrap();
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn path_str(p: &Path) -> String {
    p.to_str().unwrap().to_owned()
}

#[test]
fn clean_ingest_exits_zero_with_counts() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    write_corpus(&input, &multi_category_example());
    let out = run(&[
        "ingest",
        "--input",
        &path_str(&input),
        "--out",
        &path_str(&dir.path().join("out")),
        "--cohort-year",
        "2015",
        "--horizon-year",
        "2022",
    ]);
    assert!(out.status.success(), "{out:?}");
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["publications"], 52);
    assert_eq!(summary["venues"], 22);
    assert_eq!(summary["edges"], 51);
}

#[test]
fn malformed_csv_exits_two_and_names_file_and_line() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    write_corpus(&input, &multi_category_example());
    // break the year of the record on line 3
    let path = input.join("publications.csv");
    let text = std::fs::read_to_string(&path).unwrap();
    let broken: Vec<String> = text
        .lines()
        .enumerate()
        .map(|(i, l)| {
            if i == 2 {
                l.replace("2016", "not-a-year")
            } else {
                l.to_owned()
            }
        })
        .collect();
    std::fs::write(&path, broken.join("\n")).unwrap();

    let out = run(&[
        "ingest",
        "--input",
        &path_str(&input),
        "--out",
        &path_str(&dir.path().join("out")),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("publications.csv:3"), "stderr: {stderr}");
}

#[test]
fn duplicate_edge_exits_one_and_names_pair() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    let mut corpus = multi_category_example();
    corpus.citations.push(corpus.citations[0].clone());
    write_corpus(&input, &corpus);
    let out = run(&[
        "ingest",
        "--input",
        &path_str(&input),
        "--out",
        &path_str(&dir.path().join("out")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains(&corpus.citations[0].citing_id) && stderr.contains("p0"),
        "stderr: {stderr}"
    );
}

#[test]
fn missing_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "ingest",
        "--input",
        &path_str(&dir.path().join("nope")),
        "--out",
        &path_str(&dir.path().join("out")),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn invalid_window_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    write_corpus(&input, &multi_category_example());
    let out_dir = path_str(&dir.path().join("out"));
    let out = run(&[
        "pipeline",
        "--input",
        &path_str(&input),
        "--out",
        &out_dir,
        "--window",
        "99",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn worked_example_pipeline_writes_headline_share() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    write_corpus(&input, &multi_category_example());
    let out_dir = dir.path().join("out");
    let out = run(&[
        "pipeline",
        "--input",
        &path_str(&input),
        "--out",
        &path_str(&out_dir),
        "--cohort-year",
        "2015",
        "--horizon-year",
        "2022",
        "--seed",
        "1",
        "--window",
        "full",
    ]);
    assert!(out.status.success(), "{out:?}");

    let table1 = std::fs::read_to_string(out_dir.join("table1.csv")).unwrap();
    let total = table1.lines().last().unwrap();
    // single profiled publication with share 24/51: predominantly-intra 0%,
    // average intra share 47.1%
    assert_eq!(total, "Total,1,0.0,0.0,0.0,47.1");

    let assignments = std::fs::read_to_string(out_dir.join("assignments.csv")).unwrap();
    assert!(assignments.contains("p0,ISLS,PredominantAmongCiting,false"));
}

#[test]
fn config_file_with_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    write_corpus(&input, &multi_category_example());
    let config_path = dir.path().join("run.toml");
    let out_a = dir.path().join("a");
    std::fs::write(
        &config_path,
        format!(
            "input = {:?}\nout = {:?}\ncohort_year = 2015\nhorizon_year = 2022\nseed = 3\nwindows = [\"full\"]\n",
            input, out_a
        ),
    )
    .unwrap();

    // config alone
    let out = run(&["pipeline", "--config", &path_str(&config_path)]);
    assert!(out.status.success(), "{out:?}");
    assert!(out_a.join("report.json").is_file());

    // --out overrides the config file's value
    let out_b = dir.path().join("b");
    let out = run(&[
        "pipeline",
        "--config",
        &path_str(&config_path),
        "--out",
        &path_str(&out_b),
    ]);
    assert!(out.status.success(), "{out:?}");
    assert!(out_b.join("report.json").is_file());
    assert_eq!(
        std::fs::read(out_a.join("assignments.csv")).unwrap(),
        std::fs::read(out_b.join("assignments.csv")).unwrap()
    );
}

#[test]
fn jsonl_inputs_match_csv_inputs() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = multi_category_example();
    let csv_in = dir.path().join("csv");
    write_corpus(&csv_in, &corpus);

    // same corpus as JSONL
    let jsonl_in = dir.path().join("jsonl");
    std::fs::create_dir_all(&jsonl_in).unwrap();
    let dump = |name: &str, lines: Vec<String>| {
        std::fs::write(jsonl_in.join(name), lines.join("\n")).unwrap();
    };
    dump(
        "registry.jsonl",
        corpus
            .registry
            .iter()
            .map(|r| serde_json::to_string(r).unwrap())
            .collect(),
    );
    dump(
        "venues.jsonl",
        corpus
            .venues
            .iter()
            .map(|v| serde_json::to_string(v).unwrap())
            .collect(),
    );
    dump(
        "publications.jsonl",
        corpus
            .publications
            .iter()
            .map(|p| serde_json::to_string(p).unwrap())
            .collect(),
    );
    dump(
        "citations.jsonl",
        corpus
            .citations
            .iter()
            .map(|c| serde_json::to_string(c).unwrap())
            .collect(),
    );

    for (input, out) in [(&csv_in, "out_csv"), (&jsonl_in, "out_jsonl")] {
        let result = run(&[
            "pipeline",
            "--input",
            &path_str(input),
            "--out",
            &path_str(&dir.path().join(out)),
            "--seed",
            "1",
        ]);
        assert!(result.status.success(), "{result:?}");
    }
    assert_eq!(
        std::fs::read(dir.path().join("out_csv/assignments.csv")).unwrap(),
        std::fs::read(dir.path().join("out_jsonl/assignments.csv")).unwrap()
    );
    assert_eq!(
        std::fs::read(dir.path().join("out_csv/report.json")).unwrap(),
        std::fs::read(dir.path().join("out_jsonl/report.json")).unwrap()
    );
}

#[test]
fn synth_emits_ingestable_corpus_with_truth() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("synth.toml");
    std::fs::write(&config_path, "n_cohort_pubs = 30\nseed = 9\n").unwrap();
    let input = dir.path().join("in");
    let out = run(&[
        "synth",
        "--config",
        &path_str(&config_path),
        "--out",
        &path_str(&input),
    ]);
    assert!(out.status.success(), "{out:?}");
    let truth = std::fs::read_to_string(input.join("truth.csv")).unwrap();
    assert!(truth.starts_with("pub_id,true_sc"));

    let result = run(&[
        "pipeline",
        "--input",
        &path_str(&input),
        "--out",
        &path_str(&dir.path().join("out")),
        "--seed",
        "9",
    ]);
    assert!(result.status.success(), "{result:?}");
}
