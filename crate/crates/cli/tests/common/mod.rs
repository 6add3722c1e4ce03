#![allow(dead_code)]

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use isa_core::simlab::{generate_corpus, SyntheticCorpus, SyntheticSpec};

pub fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

pub fn isa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isa")).args(args).output().expect("running isa")
}

/// Parses the one-line JSON error record the binary prints on failure.
pub fn error_record(out: &Output) -> serde_json::Value {
    let stderr = String::from_utf8_lossy(&out.stderr);
    let line = stderr.lines().last().unwrap_or_default();
    serde_json::from_str(line).unwrap_or_else(|e| panic!("not a JSON record ({e}): {stderr}"))
}

/// Writes a simlab corpus as JSONL text (stem `l` becomes the word `w<l>`)
/// plus a codes file for its coded documents, both dated `date`.
pub fn write_synthetic(dir: &Path, spec: &SyntheticSpec, date: &str) -> SyntheticCorpus {
    let syn = generate_corpus(spec).unwrap();
    let table = syn.corpus.table();
    let labels = spec.labels();
    let mut corpus = std::io::BufWriter::new(std::fs::File::create(dir.join("corpus.jsonl")).unwrap());
    let mut codes = std::io::BufWriter::new(std::fs::File::create(dir.join("codes.csv")).unwrap());
    writeln!(codes, "doc_id,label").unwrap();
    for (d, id) in table.doc_ids().iter().enumerate() {
        let words: Vec<String> = table.patterns()[table.doc_patterns()[d]].ones().map(|l| format!("w{l}")).collect();
        let rec = serde_json::json!({"id": id, "ts": format!("{date}T12:00:00Z"), "text": words.join(" ")});
        writeln!(corpus, "{rec}").unwrap();
        if let Some(c) = syn.corpus.codes()[d] {
            writeln!(codes, "{id},{}", labels[c]).unwrap();
        }
    }
    syn
}

/// A run config pointing at `corpus.jsonl` / `codes.csv` in `dir`.
pub fn write_config(dir: &Path, categories: &[String], extra: &str) -> PathBuf {
    let cats: Vec<String> = categories.iter().map(|c| format!("\"{c}\"")).collect();
    let text = format!(
        "corpus = \"corpus.jsonl\"\ncodes = \"codes.csv\"\ncategories = [{}]\noutput_dir = \"out\"\n{extra}",
        cats.join(", ")
    );
    let path = dir.join("run.toml");
    std::fs::write(&path, text).unwrap();
    path
}

/// Category shares among the uncoded documents.
pub fn test_truth(syn: &SyntheticCorpus, categories: usize) -> Vec<f64> {
    let mut counts = vec![0usize; categories];
    for (d, code) in syn.corpus.codes().iter().enumerate() {
        if code.is_none() {
            counts[syn.truth[d]] += 1;
        }
    }
    let n: usize = counts.iter().sum();
    counts.iter().map(|&c| c as f64 / n as f64).collect()
}

/// `category -> estimate` from an estimate report.
pub fn read_estimates(path: &Path) -> Vec<(String, f64, Option<f64>)> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.starts_with("category,"))
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].to_string(), f[1].parse().unwrap(), f[2].parse().ok())
        })
        .collect()
}
