use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::types::CategoryDistribution;

/// Parses a `doc_id,label` file. A first row equal to `doc_id,label` is
/// treated as a header; lines starting with `#` are comments.
pub fn parse_codes(data: &[u8], source: &str) -> Result<Vec<(String, String)>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(data);
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| Error::Parse {
            path: source.into(),
            line: e.position().map_or(i + 1, |p| p.line() as usize),
            message: e.to_string(),
        })?;
        let line = rec.position().map_or(i + 1, |p| p.line() as usize);
        if rec.len() != 2 {
            return Err(Error::Parse {
                path: source.into(),
                line,
                message: format!("expected 2 columns `doc_id,label`, found {}", rec.len()),
            });
        }
        if i == 0 && &rec[0] == "doc_id" && &rec[1] == "label" {
            continue;
        }
        out.push((rec[0].to_string(), rec[1].to_string()));
    }
    Ok(out)
}

pub fn read_codes(path: &Path) -> Result<Vec<(String, String)>> {
    let bytes =
        std::fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    parse_codes(&bytes, &path.display().to_string())
}

/// Writes `category,estimate,se`, preceded by `# `-prefixed header lines.
/// Missing standard errors are left empty.
pub fn write_estimate_report<T: Scalar, W: Write>(
    mut out: W,
    header: &[String],
    dist: &CategoryDistribution<T>,
) -> std::io::Result<()> {
    for h in header {
        writeln!(out, "# {h}")?;
    }
    writeln!(out, "category,estimate,se")?;
    for (i, (label, p)) in dist.labels().iter().zip(dist.probs()).enumerate() {
        match dist.se() {
            Some(se) => writeln!(out, "{label},{:.6},{:.6}", p, se[i])?,
            None => writeln!(out, "{label},{p:.6},")?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_with_header_and_comments() {
        let data = b"# coded by hand\ndoc_id,label\nt1, pos\nt2,off\n";
        let codes = parse_codes(data, "codes.csv").unwrap();
        assert_eq!(codes, vec![("t1".into(), "pos".into()), ("t2".into(), "off".into())]);
    }

    #[test]
    fn wrong_arity_reports_line() {
        let err = parse_codes(b"t1,pos\nt2\n", "codes.csv").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
    }

    #[test]
    fn report_format() {
        let d = CategoryDistribution::new(vec!["off".into(), "on".into()], vec![0.25, 0.75])
            .unwrap()
            .with_se(vec![0.01, 0.02])
            .unwrap();
        let mut buf = Vec::new();
        write_estimate_report(&mut buf, &["seed=7".to_string()], &d).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# seed=7\ncategory,estimate,se\noff,0.250000,0.010000\non,0.750000,0.020000\n"
        );
    }
}
