use std::fmt::Write as _;
use std::io::Write;

use super::series::{Gap, MonthlyValue, SwbiRecord, YearlyRow};
use super::ComponentId;
use crate::error::{Error, Result};

fn comment_header<W: Write>(out: &mut W, header: &[String]) -> std::io::Result<()> {
    for h in header {
        writeln!(out, "# {h}")?;
    }
    Ok(())
}

fn component_header() -> String {
    ComponentId::ALL.map(|c| c.as_str()).join(",")
}

/// `date,emo,fun,rel,res,sat,tru,vit,wor,swbi`, two decimals.
pub fn write_series<W: Write>(mut out: W, header: &[String], records: &[SwbiRecord]) -> std::io::Result<()> {
    comment_header(&mut out, header)?;
    writeln!(out, "date,{},swbi", component_header())?;
    for r in records {
        write!(out, "{}", r.date)?;
        for v in r.components {
            write!(out, ",{v:.2}")?;
        }
        writeln!(out, ",{:.2}", r.swbi)?;
    }
    Ok(())
}

/// `year-month,integrated`
pub fn write_monthly<W: Write>(mut out: W, header: &[String], months: &[MonthlyValue]) -> std::io::Result<()> {
    comment_header(&mut out, header)?;
    writeln!(out, "year-month,integrated")?;
    for m in months {
        writeln!(out, "{:04}-{:02},{:.2}", m.year, m.month, m.integrated)?;
    }
    Ok(())
}

/// `year,emo,…,wor,swbi,days`; also the data behind the yearly radar view.
pub fn write_yearly<W: Write>(mut out: W, header: &[String], rows: &[YearlyRow]) -> std::io::Result<()> {
    comment_header(&mut out, header)?;
    writeln!(out, "year,{},swbi,days", component_header())?;
    for r in rows {
        write!(out, "{}", r.year)?;
        for v in r.components {
            write!(out, ",{v:.2}")?;
        }
        writeln!(out, ",{:.2},{}", r.swbi, r.days)?;
    }
    Ok(())
}

/// `date,component,reason`
pub fn write_gap_report<W: Write>(mut out: W, header: &[String], gaps: &[Gap]) -> std::io::Result<()> {
    comment_header(&mut out, header)?;
    writeln!(out, "date,component,reason")?;
    for g in gaps {
        writeln!(out, "{},{},{}", g.date, g.component, g.reason.as_str())?;
    }
    Ok(())
}

/// A row of externally supplied component values, e.g. published yearly means.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentRow {
    pub period: String,
    /// In [`ComponentId::ALL`] order.
    pub values: [f64; 8],
    /// An `swbi` column, when the file carries one.
    pub reported_swbi: Option<f64>,
}

/// Reads a delimiter-separated table whose first column is a period label and
/// whose other columns are named by component (any order), optionally with an
/// `swbi` column. `#` lines are comments.
pub fn parse_component_table(data: &[u8], source: &str) -> Result<Vec<ComponentRow>> {
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(data);
    let parse_err = |line: usize, message: String| Error::Parse {
        path: source.into(),
        line,
        message,
    };
    let headers = rdr.headers().map_err(|e| parse_err(1, e.to_string()))?.clone();
    let mut columns = [None; 8];
    let mut swbi_col = None;
    for (i, h) in headers.iter().enumerate().skip(1) {
        if h.eq_ignore_ascii_case("swbi") {
            swbi_col = Some(i);
        } else if let Ok(c) = h.to_ascii_lowercase().parse::<ComponentId>() {
            columns[c.index()] = Some(i);
        }
    }
    let columns: Vec<usize> = columns
        .iter()
        .enumerate()
        .map(|(i, c)| c.ok_or_else(|| Error::MissingComponent(ComponentId::ALL[i].to_string())))
        .collect::<Result<_>>()?;

    let mut rows = Vec::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| parse_err(e.position().map_or(0, |p| p.line() as usize), e.to_string()))?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let num = |i: usize| -> Result<f64> {
            rec.get(i)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| parse_err(line, format!("column {} is not a number", i + 1)))
        };
        let mut values = [0.0; 8];
        for (v, &col) in values.iter_mut().zip(&columns) {
            *v = num(col)?;
        }
        rows.push(ComponentRow {
            period: rec.get(0).unwrap_or_default().to_string(),
            values,
            reported_swbi: swbi_col.map(num).transpose()?,
        });
    }
    Ok(rows)
}

/// Two-panel SVG: monthly integrated balance as bars on top, daily index as a
/// line below.
pub fn render_chart_svg(records: &[SwbiRecord], months: &[MonthlyValue], title: &str) -> String {
    const W: f64 = 960.0;
    const H: f64 = 560.0;
    const LEFT: f64 = 60.0;
    const RIGHT: f64 = 20.0;
    let plot_w = W - LEFT - RIGHT;
    let (top_y, top_h) = (40.0, 200.0);
    let (bot_y, bot_h) = (300.0, 220.0);

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{LEFT}" y="22" font-size="14">{}</text>"#, escape(title));

    // upper panel: monthly bars around zero
    let _ = writeln!(s, r#"<g id="monthly">"#);
    let _ = writeln!(s, r#"<text x="{LEFT}" y="{}">monthly integrated</text>"#, top_y - 4.0);
    let max_abs = months
        .iter()
        .map(|m| m.integrated.abs())
        .fold(0.0f64, f64::max)
        .max(1e-9);
    let zero = top_y + top_h / 2.0;
    let bar_w = plot_w / months.len().max(1) as f64;
    for (i, m) in months.iter().enumerate() {
        let h = m.integrated / max_abs * (top_h / 2.0);
        let (y, hh) = if h >= 0.0 { (zero - h, h) } else { (zero, -h) };
        let fill = if m.integrated >= 0.0 { "#3a7d44" } else { "#b23a48" };
        let _ = writeln!(
            s,
            r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{fill}"><title>{:04}-{:02}: {:.2}</title></rect>"#,
            LEFT + i as f64 * bar_w + bar_w * 0.1,
            y,
            bar_w * 0.8,
            hh,
            m.year,
            m.month,
            m.integrated
        );
    }
    let _ = writeln!(
        s,
        r##"<line x1="{LEFT}" y1="{zero}" x2="{}" y2="{zero}" stroke="#444"/>"##,
        LEFT + plot_w
    );
    let _ = writeln!(s, r#"<text x="4" y="{:.2}">{:.0}</text>"#, top_y + 4.0, max_abs);
    let _ = writeln!(s, r#"<text x="4" y="{:.2}">-{:.0}</text>"#, top_y + top_h, max_abs);
    let _ = writeln!(s, "</g>");

    // lower panel: daily line on a fixed 0..100 scale
    let _ = writeln!(s, r#"<g id="daily">"#);
    let _ = writeln!(s, r#"<text x="{LEFT}" y="{}">daily index</text>"#, bot_y - 4.0);
    let _ = writeln!(
        s,
        r##"<rect x="{LEFT}" y="{bot_y}" width="{plot_w}" height="{bot_h}" fill="none" stroke="#999"/>"##
    );
    for tick in [0.0, 25.0, 50.0, 75.0, 100.0] {
        let y = bot_y + bot_h * (1.0 - tick / 100.0);
        let _ = writeln!(s, r#"<text x="30" y="{:.2}">{tick:.0}</text>"#, y + 4.0);
    }
    if let (Some(first), Some(last)) = (records.first(), records.last()) {
        let span = (last.date - first.date).num_days().max(1) as f64;
        let points: Vec<String> = records
            .iter()
            .map(|r| {
                let x = LEFT + (r.date - first.date).num_days() as f64 / span * plot_w;
                let y = bot_y + bot_h * (1.0 - r.swbi / 100.0);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        let _ = writeln!(
            s,
            r##"<polyline fill="none" stroke="#1f4e79" stroke-width="1" points="{}"/>"##,
            points.join(" ")
        );
        let _ = writeln!(s, r#"<text x="{LEFT}" y="{}">{}</text>"#, bot_y + bot_h + 16.0, first.date);
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#,
            LEFT + plot_w,
            bot_y + bot_h + 16.0,
            last.date
        );
    }
    let _ = writeln!(s, "</g>");
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_csv_has_two_decimals() {
        let r = SwbiRecord::new("2014-02-01".parse().unwrap(), [50.0, 60.0, 70.0, 40.0, 30.0, 20.0, 10.0, 0.0]);
        let mut buf = Vec::new();
        write_series(&mut buf, &["seed=1".into()], &[r]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "# seed=1\ndate,emo,fun,rel,res,sat,tru,vit,wor,swbi\n2014-02-01,50.00,60.00,70.00,40.00,30.00,20.00,10.00,0.00,35.00\n"
        );
    }

    #[test]
    fn monthly_csv() {
        let m = MonthlyValue {
            year: 2013,
            month: 4,
            integrated: -12.345,
            days: 3,
        };
        let mut buf = Vec::new();
        write_monthly(&mut buf, &[], &[m]).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "year-month,integrated\n2013-04,-12.35\n");
    }

    #[test]
    fn component_table_any_column_order() {
        let data = b"# published\nyear,SWBI,wor,vit,tru,sat,res,rel,fun,emo\n2012,48.87,16.44,53.91,59.22,43.88,55.10,34.10,67.76,60.55\n";
        let rows = parse_component_table(data, "t.csv").unwrap();
        assert_eq!(rows[0].period, "2012");
        assert_eq!(rows[0].values[0], 60.55);
        assert_eq!(rows[0].values[7], 16.44);
        assert_eq!(rows[0].reported_swbi, Some(48.87));
        assert!(matches!(
            parse_component_table(b"year,emo\n2012,1\n", "t.csv"),
            Err(Error::MissingComponent(_))
        ));
    }

    #[test]
    fn chart_is_wellformed_svg() {
        let recs: Vec<_> = (1..=3)
            .map(|d| SwbiRecord::new(format!("2014-01-0{d}").parse().unwrap(), [40.0 + d as f64; 8]))
            .collect();
        let months = crate::swbi::integrate_monthly(&recs, 50.0).unwrap();
        let svg = render_chart_svg(&recs, &months, "a < b");
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(svg.contains("polyline") && svg.contains("a &lt; b"));
        assert_eq!(svg.matches("<g ").count(), 2);
    }
}
