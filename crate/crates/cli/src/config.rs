//! The run configuration: one TOML file drives `estimate` and `swbi`.
//!
//! ```toml
//! corpus = "posts.jsonl"
//! codes = "codes.csv"
//! categories = ["off", "neg", "neu", "pos"]
//! output_dir = "out"
//!
//! [pipeline]
//! stemmer = "snowball-it"
//!
//! [estimator]
//! alpha = 0.5
//! bootstrap = 200
//! seed = 7
//!
//! [swbi]
//! baseline = 50.0
//! [swbi.components]
//! emo = "codes/emo.csv"
//! # ... one entry per component
//! ```
//!
//! Relative paths are resolved against the directory of the config file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use isa_core::estimator::DEFAULT_ALPHA;
use isa_core::swbi::{ComponentId, ScoreMap};
use isa_core::textpipe::PipelineConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub codes: Option<PathBuf>,
    /// Category labels, `D0` first. Required by `estimate`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub categories: Option<Vec<String>>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub pipeline: PipelineConfig,
    #[serde(default)]
    pub estimator: EstimatorSection,
    #[serde(default)]
    pub swbi: SwbiSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimatorSection {
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    /// Bootstrap replicates; 0 disables standard errors.
    #[serde(default)]
    pub bootstrap: usize,
    #[serde(default)]
    pub seed: u64,
    /// Also write the classify-and-count estimate.
    #[serde(default)]
    pub compare_classify_and_count: bool,
}

impl Default for EstimatorSection {
    fn default() -> Self {
        Self {
            alpha: DEFAULT_ALPHA,
            bootstrap: 0,
            seed: 0,
            compare_classify_and_count: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SwbiSection {
    #[serde(default = "default_score_map")]
    pub score_map: String,
    #[serde(default = "default_baseline")]
    pub baseline: f64,
    /// Polarity labels in the order off-topic, negative, neutral, positive.
    #[serde(default = "default_polarity")]
    pub categories: Vec<String>,
    /// Codes file per component name.
    #[serde(default)]
    pub components: BTreeMap<String, PathBuf>,
    /// Also build one series per geo code.
    #[serde(default)]
    pub geo: bool,
}

impl Default for SwbiSection {
    fn default() -> Self {
        Self {
            score_map: default_score_map(),
            baseline: default_baseline(),
            categories: default_polarity(),
            components: BTreeMap::new(),
            geo: false,
        }
    }
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_alpha() -> f64 {
    DEFAULT_ALPHA
}

fn default_score_map() -> String {
    ScoreMap::default().to_string()
}

fn default_baseline() -> f64 {
    50.0
}

fn default_polarity() -> Vec<String> {
    ["off", "neg", "neu", "pos"].map(String::from).to_vec()
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub bootstrap: Option<usize>,
    pub baseline: Option<f64>,
    pub score_map: Option<String>,
    pub geo: bool,
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_toml_str(s: &str) -> CliResult<Self> {
        toml::from_str(s).map_err(|e| CliError::Config(format!("run config: {}", e.message())))
    }

    /// Reads the file and makes every relative path absolute against its directory.
    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml_str(&text)?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        cfg.resolve(&base);
        Ok(cfg)
    }

    pub fn resolve(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.corpus);
        if let Some(c) = &mut self.codes {
            fix(c);
        }
        fix(&mut self.output_dir);
        self.swbi.components.values_mut().for_each(fix);
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(s) = o.seed {
            self.estimator.seed = s;
        }
        if let Some(b) = o.bootstrap {
            self.estimator.bootstrap = b;
        }
        if let Some(b) = o.baseline {
            self.swbi.baseline = b;
        }
        if let Some(m) = &o.score_map {
            self.swbi.score_map = m.clone();
        }
        if o.geo {
            self.swbi.geo = true;
        }
        if let Some(d) = &o.output_dir {
            self.output_dir = d.clone();
        }
    }

    pub fn score_map(&self) -> CliResult<ScoreMap> {
        Ok(self.swbi.score_map.parse()?)
    }

    /// Checks value ranges and that every input needed by `command` exists.
    pub fn validate(&self, command: &str) -> CliResult<()> {
        self.pipeline.validate()?;
        if !(self.estimator.alpha >= 0.0) {
            return Err(CliError::Config(format!("alpha must be >= 0, got {}", self.estimator.alpha)));
        }
        if self.estimator.bootstrap == 1 {
            return Err(CliError::Config("bootstrap needs at least 2 replicates (or 0 to disable)".into()));
        }
        exists("corpus", &self.corpus)?;
        match command {
            "estimate" => {
                let codes = self
                    .codes
                    .as_ref()
                    .ok_or_else(|| CliError::Config("`codes` is required".into()))?;
                exists("codes", codes)?;
                if self.categories.is_none() {
                    return Err(CliError::Config("`categories` is required".into()));
                }
            }
            "swbi" => {
                self.score_map()?;
                if !(0.0..=100.0).contains(&self.swbi.baseline) {
                    return Err(CliError::Config(format!(
                        "baseline must lie in [0, 100], got {}",
                        self.swbi.baseline
                    )));
                }
                if self.swbi.categories.len() != 4 {
                    return Err(CliError::Config(
                        "swbi categories must list off-topic, negative, neutral, positive".into(),
                    ));
                }
                for name in self.swbi.components.keys() {
                    name.parse::<ComponentId>()?;
                }
                for c in ComponentId::ALL {
                    let p = self
                        .swbi
                        .components
                        .get(c.as_str())
                        .ok_or_else(|| CliError::Config(format!("no codes declared for component `{c}`")))?;
                    exists(&format!("codes for `{c}`"), p)?;
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Effective configuration as canonical JSON, without the output directory.
    pub fn canonical_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(m) = v.as_object_mut() {
            m.remove("output_dir");
        }
        v.to_string()
    }
}

fn exists(what: &str, p: &Path) -> CliResult<()> {
    if p.is_file() {
        Ok(())
    } else {
        Err(CliError::Config(format!("{what} file not found: {}", p.display())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let mut c = RunConfig::from_toml_str("corpus = \"a.jsonl\"\n").unwrap();
        assert_eq!(c.estimator.alpha, 0.5);
        assert_eq!(c.swbi.categories, ["off", "neg", "neu", "pos"]);
        c.resolve(Path::new("/data"));
        assert_eq!(c.corpus, Path::new("/data/a.jsonl"));
        assert_eq!(c.output_dir, Path::new("/data/out"));
        c.apply(&Overrides {
            seed: Some(9),
            score_map: Some("signed-balance".into()),
            ..Default::default()
        });
        assert_eq!(c.estimator.seed, 9);
        assert_eq!(c.score_map().unwrap(), ScoreMap::SignedBalance);
    }

    #[test]
    fn hash_input_ignores_output_dir() {
        let a = RunConfig::from_toml_str("corpus = \"a\"\noutput_dir = \"x\"\n").unwrap();
        let b = RunConfig::from_toml_str("corpus = \"a\"\noutput_dir = \"y\"\n").unwrap();
        assert_eq!(a.canonical_json(), b.canonical_json());
        let c = RunConfig::from_toml_str("corpus = \"a\"\n[estimator]\nseed = 1\n").unwrap();
        assert_ne!(a.canonical_json(), c.canonical_json());
    }

    #[test]
    fn unknown_keys_are_config_errors() {
        assert!(matches!(
            RunConfig::from_toml_str("corpus = \"a\"\ncorpse = 1\n"),
            Err(CliError::Config(_))
        ));
    }
}
