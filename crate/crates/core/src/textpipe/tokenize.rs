use std::borrow::Cow;

/// Lowercased tokens of a social-media text.
///
/// URLs and `@mentions` are dropped, hashtags keep their word without `#`,
/// surrounding punctuation is trimmed (inner apostrophes survive, so `let's`
/// stays one token) and pure-punctuation chunks disappear.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split_whitespace().filter_map(token).collect()
}

/// Same as [`tokenize`] on raw bytes; invalid UTF-8 is replaced, never fatal.
pub fn tokenize_bytes(bytes: &[u8]) -> Vec<String> {
    let text: Cow<'_, str> = String::from_utf8_lossy(bytes);
    tokenize(&text)
}

fn token(chunk: &str) -> Option<String> {
    let lower = chunk.to_lowercase();
    if is_url(&lower) || (lower.starts_with('@') && lower.len() > 1) {
        return None;
    }
    let word = trim_punct(&lower);
    let word = trim_punct(word.trim_start_matches('#'));
    if word.is_empty() {
        None
    } else {
        Some(word.to_string())
    }
}

fn trim_punct(s: &str) -> &str {
    s.trim_matches(|c: char| !c.is_alphanumeric() && c != '#')
}

fn is_url(s: &str) -> bool {
    s.starts_with("http://") || s.starts_with("https://") || s.starts_with("www.")
}
