//! Raw posts to binary stem-presence vectors and the table of unique patterns.

mod config;
mod io;
mod pattern;
mod stem;
mod tokenize;
mod vocab;

pub use config::PipelineConfig;
pub use io::{parse_corpus, parse_timestamp, read_corpus, RawPost};
pub use pattern::{build_pattern_table, PatternTable, StemVector};
pub(crate) use pattern::normalize_counts;
pub use stem::{stem, Stemmer};
pub use tokenize::{tokenize, tokenize_bytes};
pub use vocab::{build_vocabulary, document_ngrams, vectorize, Vocabulary, VocabularyConfig};

use rayon::prelude::*;

use crate::error::Result;

/// Output of running the whole pipeline over a corpus.
#[derive(Debug, Clone)]
pub struct PipelineOutput {
    pub vocabulary: Vocabulary,
    pub table: PatternTable,
}

/// Tokenizes, stems, builds the vocabulary and the pattern table.
///
/// Documents are processed in parallel; the result does not depend on input
/// order or thread count.
pub fn run_pipeline(posts: &[RawPost], config: &PipelineConfig) -> Result<PipelineOutput> {
    let stemmer = config.stemmer()?;
    let mut docs: Vec<(&str, Vec<String>)> = posts
        .par_iter()
        .map(|p| Ok((p.id.as_str(), stem(&tokenize(&p.text), &stemmer))))
        .collect::<Result<_>>()?;
    docs.sort_by(|a, b| a.0.cmp(b.0));

    let stemmed: Vec<Vec<String>> = docs.iter().map(|(_, d)| d.clone()).collect();
    let vocabulary = build_vocabulary(&stemmed, &config.vocabulary())?;
    let vectors: Vec<(String, StemVector)> = docs
        .par_iter()
        .map(|(id, d)| (id.to_string(), vectorize(d, &vocabulary)))
        .collect();
    let table = build_pattern_table(vectors)?;
    Ok(PipelineOutput { vocabulary, table })
}
