use std::path::Path;

use serde::{Deserialize, Serialize};

use super::stem::Stemmer;
use super::vocab::VocabularyConfig;
use crate::error::{Error, Result};

/// Flat pipeline configuration: `stemmer`, `ngrams`, `min_df`, `max_df_ratio`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    pub stemmer: String,
    pub ngrams: Vec<usize>,
    pub min_df: usize,
    pub max_df_ratio: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            stemmer: "identity".into(),
            ngrams: vec![1],
            min_df: 1,
            max_df_ratio: 1.0,
        }
    }
}

impl PipelineConfig {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        self.stemmer()?;
        self.vocabulary().validate()
    }

    pub fn stemmer(&self) -> Result<Stemmer> {
        self.stemmer.parse()
    }

    pub fn vocabulary(&self) -> VocabularyConfig {
        VocabularyConfig {
            ngrams: self.ngrams.clone(),
            min_df: self.min_df,
            max_df_ratio: self.max_df_ratio,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_flat_file() {
        let cfg = PipelineConfig::from_toml_str(
            "stemmer = \"snowball-it\"\nngrams = [1, 2]\nmin_df = 2\nmax_df_ratio = 0.5\n",
        )
        .unwrap();
        assert_eq!(cfg.ngrams, vec![1, 2]);
        assert_eq!(cfg.min_df, 2);
    }

    #[test]
    fn defaults_and_rejections() {
        assert_eq!(PipelineConfig::from_toml_str("").unwrap(), PipelineConfig::default());
        assert!(PipelineConfig::from_toml_str("stemmer = \"nope\"").is_err());
        assert!(PipelineConfig::from_toml_str("min_df = 0").is_err());
        assert!(PipelineConfig::from_toml_str("max_df_ratio = 1.5").is_err());
        assert!(PipelineConfig::from_toml_str("colour = 1").is_err());
    }
}
