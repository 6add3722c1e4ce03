use std::collections::HashSet;
use std::path::Path;

use chrono::{DateTime, NaiveDate, NaiveDateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One post of the input corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RawPost {
    pub id: String,
    #[serde(rename = "ts")]
    pub timestamp: DateTime<Utc>,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub geo: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lang: Option<String>,
}

#[derive(Deserialize)]
struct WireRecord {
    id: serde_json::Value,
    ts: String,
    #[serde(default)]
    text: Option<String>,
    #[serde(default)]
    geo: Option<String>,
    #[serde(default)]
    lang: Option<String>,
}

/// ISO-8601 timestamp: RFC 3339, a naive date-time (taken as UTC) or a bare
/// date (midnight UTC).
pub fn parse_timestamp(s: &str) -> Option<DateTime<Utc>> {
    let s = s.trim();
    if let Ok(t) = DateTime::parse_from_rfc3339(s) {
        return Some(t.with_timezone(&Utc));
    }
    for fmt in ["%Y-%m-%dT%H:%M:%S%.f", "%Y-%m-%d %H:%M:%S%.f"] {
        if let Ok(t) = NaiveDateTime::parse_from_str(s, fmt) {
            return Some(t.and_utc());
        }
    }
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .ok()
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .map(|t| t.and_utc())
}

/// Parses line-delimited JSON records (`id`, `ts`, `text`, optional `geo`
/// and `lang`). Blank lines are skipped; invalid UTF-8 is replaced.
pub fn parse_corpus(bytes: &[u8], source: &str) -> Result<Vec<RawPost>> {
    let mut seen = HashSet::new();
    let mut posts = Vec::new();
    for (n, raw) in bytes.split(|&b| b == b'\n').enumerate() {
        let line = String::from_utf8_lossy(raw);
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: String| Error::Parse {
            path: source.to_string(),
            line: n + 1,
            message,
        };
        let rec: WireRecord = serde_json::from_str(line).map_err(|e| err(e.to_string()))?;
        let id = match rec.id {
            serde_json::Value::String(s) => s,
            serde_json::Value::Number(x) => x.to_string(),
            other => return Err(err(format!("id must be a string, got {other}"))),
        };
        if id.is_empty() {
            return Err(err("empty id".into()));
        }
        let timestamp =
            parse_timestamp(&rec.ts).ok_or_else(|| err(format!("unparseable ts `{}`", rec.ts)))?;
        if !seen.insert(id.clone()) {
            return Err(err(format!("duplicate id `{id}`")));
        }
        posts.push(RawPost {
            id,
            timestamp,
            text: rec.text.unwrap_or_default(),
            geo: rec.geo.filter(|g| !g.is_empty()),
            lang: rec.lang,
        });
    }
    Ok(posts)
}

pub fn read_corpus(path: &Path) -> Result<Vec<RawPost>> {
    let bytes =
        std::fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    parse_corpus(&bytes, &path.display().to_string())
}
