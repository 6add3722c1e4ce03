use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Parameters of a synthetic corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    /// Ground-truth `P(D)`, `D0` first.
    pub true_p: Vec<f64>,
    /// `emission[i][l]`: probability that stem `l` is present in a document of category `i`.
    pub emission: Vec<Vec<f64>>,
    pub n_total: usize,
    /// Share of documents that carry their label; the rest form the test set.
    pub train_fraction: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    /// `M`, categories besides `D0`.
    pub fn m(&self) -> usize {
        self.true_p.len().saturating_sub(1)
    }

    /// `L`
    pub fn stems(&self) -> usize {
        self.emission.first().map_or(0, Vec::len)
    }

    pub fn n_coded(&self) -> usize {
        (self.n_total as f64 * self.train_fraction).ceil() as usize
    }

    pub fn labels(&self) -> Vec<String> {
        (0..self.true_p.len()).map(|i| format!("D{i}")).collect()
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if self.true_p.len() < 2 {
            return bad("true_p needs D0 and at least one category".into());
        }
        if self.true_p.iter().any(|p| !(*p >= 0.0)) || (self.true_p.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return bad(format!("true_p is not a distribution: {:?}", self.true_p));
        }
        if self.emission.len() != self.true_p.len() {
            return bad(format!(
                "emission has {} rows, expected one per category ({})",
                self.emission.len(),
                self.true_p.len()
            ));
        }
        let l = self.stems();
        if l == 0 || self.emission.iter().any(|r| r.len() != l) {
            return bad("emission rows must all have the same, positive length".into());
        }
        if self.emission.iter().flatten().any(|e| !(0.0..=1.0).contains(e)) {
            return bad("emission probabilities must lie in [0, 1]".into());
        }
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return bad(format!("train_fraction must lie in (0, 1), got {}", self.train_fraction));
        }
        if self.n_total < 2 || self.n_coded() >= self.n_total {
            return bad(format!(
                "n_total = {} leaves no test documents at train_fraction {}",
                self.n_total, self.train_fraction
            ));
        }
        Ok(())
    }
}

/// On-disk simulation config: the spec fields plus estimator settings.
///
/// `emission` is inline (one array per category) or read from `emission_file`,
/// a comma-separated file with one row per category, resolved relative to the
/// config file. `m` and `l`, when present, are checked against the data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub l: Option<usize>,
    pub true_p: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emission: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub emission_file: Option<String>,
    #[serde(default = "default_n_total")]
    pub n_total: usize,
    #[serde(default = "default_train_fraction")]
    pub train_fraction: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replications: Option<usize>,
}

fn default_n_total() -> usize {
    10_000
}

fn default_train_fraction() -> f64 {
    0.1
}

fn default_alpha() -> f64 {
    crate::estimator::DEFAULT_ALPHA
}

impl SimulationFile {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        toml::from_str(s).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        let mut f = Self::from_toml_str(&text)?;
        if let Some(rel) = &f.emission_file {
            let p = path.parent().unwrap_or(Path::new(".")).join(rel);
            let data = std::fs::read(&p).map_err(|e| Error::io(format!("reading {}", p.display()), e))?;
            f.emission = Some(parse_matrix(&data, &p.display().to_string())?);
        }
        Ok(f)
    }

    /// Resolved and validated spec.
    pub fn spec(&self) -> Result<SyntheticSpec> {
        let emission = self
            .emission
            .clone()
            .ok_or_else(|| Error::Config("neither `emission` nor `emission_file` given".into()))?;
        let spec = SyntheticSpec {
            true_p: self.true_p.clone(),
            emission,
            n_total: self.n_total,
            train_fraction: self.train_fraction,
            seed: self.seed,
        };
        spec.validate()?;
        if self.m.is_some_and(|m| m != spec.m()) {
            return Err(Error::Config(format!("m = {:?} but true_p implies {}", self.m, spec.m())));
        }
        if self.l.is_some_and(|l| l != spec.stems()) {
            return Err(Error::Config(format!("l = {:?} but emission implies {}", self.l, spec.stems())));
        }
        if !(self.alpha >= 0.0) {
            return Err(Error::Config("alpha must be >= 0".into()));
        }
        Ok(spec)
    }
}

fn parse_matrix(data: &[u8], source: &str) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(data);
    rdr.records()
        .enumerate()
        .map(|(i, rec)| {
            let rec = rec.map_err(|e| Error::Parse {
                path: source.into(),
                line: i + 1,
                message: e.to_string(),
            })?;
            rec.iter()
                .map(|v| {
                    v.parse::<f64>().map_err(|e| Error::Parse {
                        path: source.into(),
                        line: i + 1,
                        message: format!("`{v}`: {e}"),
                    })
                })
                .collect()
        })
        .collect()
}
