use std::fmt;
use std::str::FromStr;

use rust_stemmers::Algorithm;

use crate::error::Error;

/// Which stemmer turns tokens into stems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stemmer {
    Identity,
    /// Snowball suffix stripper for one language.
    Snowball(Algorithm),
}

const LANGUAGES: &[(&str, Algorithm)] = &[
    ("ar", Algorithm::Arabic),
    ("da", Algorithm::Danish),
    ("de", Algorithm::German),
    ("el", Algorithm::Greek),
    ("en", Algorithm::English),
    ("es", Algorithm::Spanish),
    ("fr", Algorithm::French),
    ("hu", Algorithm::Hungarian),
    ("it", Algorithm::Italian),
    ("nl", Algorithm::Dutch),
    ("no", Algorithm::Norwegian),
    ("pt", Algorithm::Portuguese),
    ("ro", Algorithm::Romanian),
    ("ru", Algorithm::Russian),
    ("sv", Algorithm::Swedish),
    ("ta", Algorithm::Tamil),
    ("tr", Algorithm::Turkish),
];

impl FromStr for Stemmer {
    type Err = Error;

    /// Accepts `identity` or `snowball-<lang>` with a two-letter language code.
    fn from_str(s: &str) -> Result<Self, Error> {
        if s == "identity" {
            return Ok(Stemmer::Identity);
        }
        s.strip_prefix("snowball-")
            .and_then(|code| LANGUAGES.iter().find(|(c, _)| *c == code))
            .map(|&(_, alg)| Stemmer::Snowball(alg))
            .ok_or_else(|| Error::Config(format!("unknown stemmer `{s}`")))
    }
}

impl fmt::Display for Stemmer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Stemmer::Identity => f.write_str("identity"),
            Stemmer::Snowball(alg) => {
                let code = LANGUAGES
                    .iter()
                    .find(|(_, a)| a == alg)
                    .map_or("?", |(c, _)| c);
                write!(f, "snowball-{code}")
            }
        }
    }
}

/// Stems every token; output has the same length as the input.
pub fn stem(tokens: &[String], stemmer: &Stemmer) -> Vec<String> {
    match stemmer {
        Stemmer::Identity => tokens.to_vec(),
        Stemmer::Snowball(alg) => {
            let s = rust_stemmers::Stemmer::create(*alg);
            tokens.iter().map(|t| s.stem(t).into_owned()).collect()
        }
    }
}
