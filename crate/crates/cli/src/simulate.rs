use std::path::{Path, PathBuf};

use isa_core::simlab::{
    parse_results, run_monte_carlo, write_results, EstimatorSummary, MonteCarloReport, MonteCarloSummary,
    ResultsFile, SimulationFile, SyntheticSpec,
};

use crate::error::{CliError, CliResult};
use crate::manifest::{render, write_file, Provenance};

/// Relative margin of the `--assert-ordering` check.
pub const ORDERING_MARGIN: f64 = 0.10;
/// Absolute slack (0.5 percentage points): below it both estimators count as exact.
pub const ORDERING_SLACK: f64 = 0.005;

#[derive(Debug, Clone)]
pub struct SimulateRun {
    pub spec: SyntheticSpec,
    pub replications: usize,
    pub alpha: f64,
    pub report: MonteCarloReport,
    pub provenance: Provenance,
    /// The full results file (header, replication rows, summary).
    pub text: String,
}

/// Runs the Monte Carlo comparison described by a simulation spec file.
/// `replications` and `seed` override the file.
pub fn cmd_simulate(spec_path: &Path, replications: Option<usize>, seed: Option<u64>) -> CliResult<SimulateRun> {
    if !spec_path.is_file() {
        return Err(CliError::Config(format!("spec file not found: {}", spec_path.display())));
    }
    let mut file = SimulationFile::from_file(spec_path)?;
    if let Some(s) = seed {
        file.seed = s;
    }
    let r = replications
        .or(file.replications)
        .ok_or_else(|| CliError::Config("number of replications not given (--replications or `replications`)".into()))?;
    if r < 2 {
        return Err(CliError::Config(format!("Monte Carlo needs R >= 2, got {r}")));
    }
    file.replications = Some(r);
    let spec = file.spec()?;
    let report = run_monte_carlo(&spec, r, file.alpha)?;

    let canonical = serde_json::to_string(&file).expect("spec serializes");
    let provenance = Provenance::new("simulate", &canonical, spec.seed);
    let header = provenance.header_with([
        format!(
            "M={} L={} n_total={} train_fraction={} alpha={} R={}",
            spec.m(),
            spec.stems(),
            spec.n_total,
            spec.train_fraction,
            file.alpha,
            r
        ),
        format!("true_p {:?}", spec.true_p),
    ]);
    let bytes = render(|b| write_results(b, &header, &spec.labels(), &report));
    Ok(SimulateRun {
        spec,
        replications: r,
        alpha: file.alpha,
        report,
        provenance,
        text: String::from_utf8(bytes).expect("utf-8"),
    })
}

impl SimulateRun {
    pub fn write(&self, path: &Path) -> CliResult<()> {
        write_file(path, self.text.as_bytes())
    }
}

/// Coordinates where the aggregate estimator's spread is not below
/// classify-and-count's by the required margin, as `(coordinate, isa_sd, cc_sd)`.
pub fn ordering_violations(isa: &EstimatorSummary, cc: &EstimatorSummary) -> Vec<(usize, f64, f64)> {
    isa.coord_sd
        .iter()
        .zip(&cc.coord_sd)
        .enumerate()
        .filter(|(_, (a, b))| !(**a <= (1.0 - ORDERING_MARGIN) * **b + ORDERING_SLACK))
        .map(|(i, (a, b))| (i, *a, *b))
        .collect()
}

pub fn check_ordering(summary: &MonteCarloSummary, labels: &[String]) -> CliResult<()> {
    if summary.succeeded < 2 {
        return Err(CliError::Assertion(format!(
            "only {} successful replications",
            summary.succeeded
        )));
    }
    let v = ordering_violations(&summary.isa, &summary.cc);
    if v.is_empty() {
        return Ok(());
    }
    let detail: Vec<String> = v
        .iter()
        .map(|(i, a, b)| format!("{}: isa sd {a:.5} vs cc sd {b:.5}", labels.get(*i).map_or("?", String::as_str)))
        .collect();
    Err(CliError::Assertion(format!("std-dev ordering violated ({})", detail.join("; "))))
}

#[derive(Debug, Clone)]
pub struct ReportRun {
    pub path: PathBuf,
    pub results: ResultsFile,
    pub text: String,
}

/// Re-reads a results file, recomputes its summary from the replication rows
/// and renders it. A stored summary that disagrees is a data error.
pub fn cmd_report(path: &Path) -> CliResult<ReportRun> {
    if !path.is_file() {
        return Err(CliError::Config(format!("results file not found: {}", path.display())));
    }
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
    let results = parse_results(&text, &path.display().to_string())?;
    if !results.stored_summary_matches {
        return Err(isa_core::Error::InvalidInput(format!(
            "{}: stored summary does not match the replication rows",
            path.display()
        ))
        .into());
    }
    let out = render_report(&results);
    Ok(ReportRun {
        path: path.to_path_buf(),
        results,
        text: out,
    })
}

/// Human-readable summary table.
pub fn render_report(r: &ResultsFile) -> String {
    let s = &r.summary;
    let mut out = String::new();
    for h in &r.header {
        out.push_str(&format!("# {h}\n"));
    }
    out.push_str(&format!("replications: {} ok, {} failed\n", s.succeeded, s.failed));
    out.push_str(&format!(
        "mae: isa {:.5} (sd {:.5}), cc {:.5} (sd {:.5})\n",
        s.isa.mae_mean, s.isa.mae_sd, s.cc.mae_mean, s.cc.mae_sd
    ));
    out.push_str("category,isa_mean,isa_sd_pp,cc_mean,cc_sd_pp\n");
    for (i, l) in r.labels.iter().enumerate() {
        out.push_str(&format!(
            "{l},{:.5},{:.3},{:.5},{:.3}\n",
            s.isa.coord_mean[i],
            100.0 * s.isa.coord_sd[i],
            s.cc.coord_mean[i],
            100.0 * s.cc.coord_sd[i]
        ));
    }
    out
}
