use std::path::PathBuf;

use isa_core::estimator::{
    bootstrap_se, estimate_classify_and_count, estimate_isa, fit_conditional, read_codes,
    write_estimate_report, BootstrapConfig, CategoryDistribution, CategorySet, CodedCorpus,
};
use isa_core::textpipe::{read_corpus, run_pipeline};

use crate::config::RunConfig;
use crate::error::CliResult;
use crate::manifest::{render, write_file, Counts, InputFile, Manifest, Provenance};

pub const ESTIMATE_FILE: &str = "estimate.csv";
pub const CC_FILE: &str = "classify_and_count.csv";

#[derive(Debug, Clone)]
pub struct EstimateRun {
    pub estimate: CategoryDistribution<f64>,
    pub classify_and_count: Option<CategoryDistribution<f64>>,
    pub counts: Counts,
    pub provenance: Provenance,
    pub output_dir: PathBuf,
}

/// Corpus → pattern table → `P(S|D)` → aggregate estimate, with optional
/// bootstrap standard errors and classify-and-count baseline. Writes the
/// report(s) and `manifest.json` into the output directory.
pub fn cmd_estimate(config: &RunConfig) -> CliResult<EstimateRun> {
    config.validate("estimate")?;
    let codes_path = config.codes.clone().expect("validated");
    let labels = config.categories.clone().expect("validated");
    let est = &config.estimator;

    let posts = read_corpus(&config.corpus)?;
    let pipeline = run_pipeline(&posts, &config.pipeline)?;
    let codes = read_codes(&codes_path)?;
    let categories = CategorySet::new(labels)?;
    let corpus = CodedCorpus::from_labels(
        categories,
        pipeline.table,
        codes.iter().map(|(id, label)| (id.as_str(), label.as_str())),
    )?;

    let cond = fit_conditional(&corpus, est.alpha)?;
    let ps: Vec<f64> = corpus.test_distribution()?;
    let estimate = if est.bootstrap >= 2 {
        bootstrap_se(
            &corpus,
            &ps,
            &BootstrapConfig {
                replications: est.bootstrap,
                seed: est.seed,
                alpha: est.alpha,
            },
        )?
    } else {
        estimate_isa(&cond, &ps)?
    };
    let classify_and_count = if est.compare_classify_and_count {
        let prior = corpus.training_prior()?;
        Some(estimate_classify_and_count(&cond, &prior, &corpus.test_counts())?)
    } else {
        None
    };

    let counts = Counts {
        n: corpus.table().doc_count(),
        coded: corpus.training_len(),
        uncoded: corpus.test_len(),
        k: corpus.table().len(),
        l: pipeline.vocabulary.len(),
        m: corpus.categories().len() - 1,
    };
    let canonical = config.canonical_json();
    let provenance = Provenance::new("estimate", &canonical, est.seed);
    let header = provenance.header_with([
        format!(
            "N={} coded={} uncoded={} K={} L={} M={}",
            counts.n, counts.coded, counts.uncoded, counts.k, counts.l, counts.m
        ),
        format!("alpha {} bootstrap {}", est.alpha, est.bootstrap),
    ]);

    let dir = &config.output_dir;
    let mut outputs = vec![ESTIMATE_FILE.to_string()];
    write_file(&dir.join(ESTIMATE_FILE), &render(|b| write_estimate_report(b, &header, &estimate)))?;
    if let Some(cc) = &classify_and_count {
        let mut h = header.clone();
        h.push("estimator classify-and-count".into());
        write_file(&dir.join(CC_FILE), &render(|b| write_estimate_report(b, &h, cc)))?;
        outputs.push(CC_FILE.into());
    }
    Manifest {
        provenance: provenance.clone(),
        config: serde_json::from_str(&canonical).expect("canonical json"),
        inputs: vec![
            InputFile::hashed("corpus", &config.corpus)?,
            InputFile::hashed("codes", &codes_path)?,
        ],
        counts: counts.clone(),
        outputs,
    }
    .write(dir)?;

    Ok(EstimateRun {
        estimate,
        classify_and_count,
        counts,
        provenance,
        output_dir: dir.clone(),
    })
}
