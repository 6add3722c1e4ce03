//! Per-replication results file: `#` header lines, a CSV block of
//! replications, then a `[summary]` block of `estimator,statistic,coordinate,value`
//! rows. Floats are written in shortest round-trip form, so reading a file back
//! reproduces the summary exactly.

use std::io::Write;

use super::monte_carlo::{
    summarize, EstimatorSummary, MonteCarloReport, MonteCarloSummary, ReplicationOutcome,
    ReplicationResult,
};
use crate::error::{Error, Result};

const SUMMARY_MARKER: &str = "[summary]";

pub fn write_results<W: Write>(
    mut out: W,
    header: &[String],
    labels: &[String],
    report: &MonteCarloReport,
) -> std::io::Result<()> {
    for h in header {
        writeln!(out, "# {h}")?;
    }
    let cols: Vec<String> = ["replication", "seed", "status", "isa_mae", "cc_mae"]
        .iter()
        .map(|s| s.to_string())
        .chain(labels.iter().map(|l| format!("isa_{l}")))
        .chain(labels.iter().map(|l| format!("cc_{l}")))
        .collect();
    writeln!(out, "{}", cols.join(","))?;
    for o in &report.outcomes {
        match o {
            ReplicationOutcome::Ok(r) => {
                let nums: Vec<String> = r
                    .isa_estimate
                    .iter()
                    .chain(&r.cc_estimate)
                    .map(|v| v.to_string())
                    .collect();
                writeln!(out, "{},{},ok,{},{},{}", r.index, r.seed, r.isa_mae, r.cc_mae, nums.join(","))?;
            }
            ReplicationOutcome::Failed { index, seed, .. } => {
                writeln!(out, "{index},{seed},failed{}", ",".repeat(2 + 2 * labels.len()))?;
            }
        }
    }
    writeln!(out)?;
    writeln!(out, "{SUMMARY_MARKER}")?;
    write_summary(&mut out, labels, &report.summary)
}

/// The `[summary]` rows alone.
pub fn write_summary<W: Write>(mut out: W, labels: &[String], s: &MonteCarloSummary) -> std::io::Result<()> {
    writeln!(out, "estimator,statistic,coordinate,value")?;
    writeln!(out, "all,succeeded,,{}", s.succeeded)?;
    writeln!(out, "all,failed,,{}", s.failed)?;
    for (name, e) in [("isa", &s.isa), ("cc", &s.cc)] {
        writeln!(out, "{name},mae_mean,,{}", e.mae_mean)?;
        writeln!(out, "{name},mae_sd,,{}", e.mae_sd)?;
        for (i, l) in labels.iter().enumerate() {
            writeln!(out, "{name},mean,{l},{}", e.coord_mean[i])?;
            writeln!(out, "{name},sd,{l},{}", e.coord_sd[i])?;
            writeln!(out, "{name},sd_pp,{l},{}", 100.0 * e.coord_sd[i])?;
        }
    }
    Ok(())
}

/// A parsed results file.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultsFile {
    pub header: Vec<String>,
    pub labels: Vec<String>,
    pub outcomes: Vec<ReplicationOutcome>,
    /// Summary recomputed from the replication rows.
    pub summary: MonteCarloSummary,
    /// Whether the stored `[summary]` block equals the recomputed one.
    pub stored_summary_matches: bool,
}

pub fn parse_results(text: &str, source: &str) -> Result<ResultsFile> {
    let err = |line: usize, message: String| Error::Parse {
        path: source.into(),
        line,
        message,
    };
    let mut header = Vec::new();
    let mut lines = text.lines().enumerate().peekable();
    while let Some((_, l)) = lines.peek() {
        match l.strip_prefix('#') {
            Some(h) => {
                header.push(h.trim().to_string());
                lines.next();
            }
            None => break,
        }
    }
    let (hline, cols) = lines.next().ok_or_else(|| err(0, "missing column header".into()))?;
    let cols: Vec<&str> = cols.split(',').collect();
    if cols.len() < 5 || cols[..5] != ["replication", "seed", "status", "isa_mae", "cc_mae"] {
        return Err(err(hline + 1, "unexpected column header".into()));
    }
    let labels: Vec<String> = cols[5..]
        .iter()
        .filter_map(|c| c.strip_prefix("isa_"))
        .map(str::to_string)
        .collect();
    let m = labels.len();
    if cols.len() != 5 + 2 * m {
        return Err(err(hline + 1, "isa_/cc_ columns do not pair up".into()));
    }

    let mut outcomes = Vec::new();
    let mut stored = Vec::new();
    let mut in_summary = false;
    for (n, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line == SUMMARY_MARKER {
            in_summary = true;
            continue;
        }
        if in_summary {
            stored.push(line.to_string());
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != cols.len() {
            return Err(err(n + 1, format!("expected {} fields, found {}", cols.len(), f.len())));
        }
        let int = |s: &str| s.parse::<u64>().map_err(|e| err(n + 1, format!("`{s}`: {e}")));
        let num = |s: &str| s.parse::<f64>().map_err(|e| err(n + 1, format!("`{s}`: {e}")));
        let index = int(f[0])? as usize;
        let seed = int(f[1])?;
        match f[2] {
            "ok" => {
                let vals: Vec<f64> = f[5..].iter().map(|s| num(s)).collect::<Result<_>>()?;
                outcomes.push(ReplicationOutcome::Ok(ReplicationResult {
                    index,
                    seed,
                    isa_mae: num(f[3])?,
                    cc_mae: num(f[4])?,
                    isa_estimate: vals[..m].to_vec(),
                    cc_estimate: vals[m..].to_vec(),
                }));
            }
            "failed" => outcomes.push(ReplicationOutcome::Failed {
                index,
                seed,
                error: String::new(),
            }),
            s => return Err(err(n + 1, format!("unknown status `{s}`"))),
        }
    }
    let results: Vec<&ReplicationResult> = outcomes.iter().filter_map(ReplicationOutcome::result).collect();
    let summary = summarize(&results, outcomes.len() - results.len(), m);

    let mut recomputed = Vec::new();
    write_summary(&mut recomputed, &labels, &summary).expect("writing to memory");
    let recomputed = String::from_utf8(recomputed).expect("utf-8");
    let stored_summary_matches = !stored.is_empty() && recomputed.lines().eq(stored.iter().map(String::as_str));

    Ok(ResultsFile {
        header,
        labels,
        outcomes,
        summary,
        stored_summary_matches,
    })
}

impl EstimatorSummary {
    /// Whether every coordinate's standard deviation is below `other`'s by a
    /// relative margin: `self_sd <= (1 - margin) · other_sd`.
    pub fn sd_below(&self, other: &EstimatorSummary, margin: f64) -> bool {
        self.coord_sd
            .iter()
            .zip(&other.coord_sd)
            .all(|(a, b)| *a <= (1.0 - margin) * b)
    }
}
