use std::collections::{BTreeMap, HashMap};
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use isa_core::estimator::{estimate_isa, fit_conditional, read_codes, CategorySet, CodedCorpus};
use isa_core::swbi::{
    daily_series, group_by_geo, integrate_monthly, parse_component_table, render_chart_svg, swbi,
    write_gap_report, write_monthly, write_series, write_yearly, yearly_table, ComponentId, ComponentRow,
    DailySeries, DayEstimate, MonthlyValue, PolarityDistribution, YearlyRow,
};
use isa_core::textpipe::{read_corpus, run_pipeline};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::manifest::{render, sha256_file, write_file, Counts, InputFile, Manifest, Provenance};

pub const SERIES_FILE: &str = "series.csv";
pub const MONTHLY_FILE: &str = "monthly.csv";
pub const YEARLY_FILE: &str = "yearly.csv";
pub const GAPS_FILE: &str = "gaps.csv";
pub const CHART_FILE: &str = "chart.svg";
pub const COMPONENTS_FILE: &str = "components.csv";
pub const GEO_DIR: &str = "geo";

/// Everything derived from one daily series.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesOutputs {
    pub series: DailySeries,
    pub monthly: Vec<MonthlyValue>,
    pub yearly: Vec<YearlyRow>,
}

impl SeriesOutputs {
    fn build(series: DailySeries, baseline: f64) -> CliResult<Self> {
        let monthly = integrate_monthly(&series.records, baseline)?;
        let yearly = yearly_table(&series.records);
        Ok(Self {
            series,
            monthly,
            yearly,
        })
    }

    /// Writes series, monthly, yearly, gaps and chart into `dir`.
    fn write(&self, dir: &Path, header: &[String], title: &str) -> CliResult<Vec<String>> {
        let s = &self.series;
        write_file(&dir.join(SERIES_FILE), &render(|b| write_series(b, header, &s.records)))?;
        write_file(&dir.join(MONTHLY_FILE), &render(|b| write_monthly(b, header, &self.monthly)))?;
        write_file(&dir.join(YEARLY_FILE), &render(|b| write_yearly(b, header, &self.yearly)))?;
        write_file(&dir.join(GAPS_FILE), &render(|b| write_gap_report(b, header, &s.gaps)))?;
        let mut svg = String::new();
        for h in header {
            svg.push_str(&format!("<!-- {} -->\n", h.replace("--", "- -")));
        }
        svg.push_str(&render_chart_svg(&s.records, &self.monthly, title));
        write_file(&dir.join(CHART_FILE), svg.as_bytes())?;
        Ok([SERIES_FILE, MONTHLY_FILE, YEARLY_FILE, GAPS_FILE, CHART_FILE]
            .map(String::from)
            .to_vec())
    }
}

#[derive(Debug, Clone)]
pub struct SwbiRun {
    pub national: SeriesOutputs,
    pub geo: BTreeMap<String, SeriesOutputs>,
    pub provenance: Provenance,
    pub output_dir: PathBuf,
}

/// Builds the daily index from a corpus and one codes file per component.
///
/// For each component, `P(S|D)` is fitted once from all of its coded
/// documents; `P(D)` is then estimated separately for every day (and geo code,
/// when enabled) from that day's uncoded documents. Component-days without
/// uncoded documents, or without on-topic mass, end up in the gap report.
pub fn cmd_swbi(config: &RunConfig) -> CliResult<SwbiRun> {
    config.validate("swbi")?;
    let map = config.score_map()?;
    let sw = &config.swbi;

    let posts = read_corpus(&config.corpus)?;
    let pipeline = run_pipeline(&posts, &config.pipeline)?;
    let table = pipeline.table;
    let by_id: HashMap<&str, usize> = posts.iter().enumerate().map(|(i, p)| (p.id.as_str(), i)).collect();
    // per document in table order: (date, geo)
    let doc_meta: Vec<(NaiveDate, Option<&str>)> = table
        .doc_ids()
        .iter()
        .map(|id| {
            let p = &posts[by_id[id.as_str()]];
            (p.timestamp.date_naive(), p.geo.as_deref())
        })
        .collect();

    let mut inputs = vec![InputFile::hashed("corpus", &config.corpus)?];
    let mut fitted = Vec::with_capacity(8);
    for c in ComponentId::ALL {
        let path = &sw.components[c.as_str()];
        let codes = read_codes(path)?;
        let corpus = CodedCorpus::from_labels(
            CategorySet::new(sw.categories.clone())?,
            table.clone(),
            codes.iter().map(|(id, l)| (id.as_str(), l.as_str())),
        )?;
        let cond = fit_conditional(&corpus, config.estimator.alpha)?;
        inputs.push(InputFile::hashed(&format!("codes:{c}"), path)?);
        fitted.push((c, corpus, cond));
    }

    // canonical job order: component, geo, date
    let mut jobs: Vec<(usize, Option<Option<&str>>, NaiveDate, Vec<usize>)> = Vec::new();
    for (ci, (_, corpus, _)) in fitted.iter().enumerate() {
        let mut cells: BTreeMap<(Option<Option<&str>>, NaiveDate), Vec<usize>> = BTreeMap::new();
        for d in corpus.test_docs() {
            let (date, geo) = doc_meta[d];
            cells.entry((None, date)).or_default().push(d);
            if sw.geo {
                cells.entry((Some(geo), date)).or_default().push(d);
            }
        }
        jobs.extend(cells.into_iter().map(|((g, date), docs)| (ci, g, date, docs)));
    }

    let estimates: Vec<(Option<Option<String>>, DayEstimate)> = jobs
        .par_iter()
        .map(|(ci, geo, date, docs)| {
            let (component, corpus, cond) = &fitted[*ci];
            let counts = corpus.table().subset_counts(docs.iter().copied());
            let total = docs.len() as f64;
            let ps: Vec<f64> = counts.iter().map(|&c| c as f64 / total).collect();
            let est = estimate_isa(cond, &ps)?;
            Ok((
                geo.map(|g| g.map(str::to_string)),
                DayEstimate {
                    date: *date,
                    component: *component,
                    dist: PolarityDistribution::from_slice(est.probs())?,
                },
            ))
        })
        .collect::<CliResult<_>>()?;

    let national: Vec<DayEstimate> = estimates.iter().filter(|(g, _)| g.is_none()).map(|(_, e)| *e).collect();
    let national = SeriesOutputs::build(daily_series(&national, map)?, sw.baseline)?;
    let geo_estimates: Vec<(Option<String>, DayEstimate)> = estimates
        .into_iter()
        .filter_map(|(g, e)| g.map(|g| (g, e)))
        .collect();
    let geo = group_by_geo(&geo_estimates, map)?
        .into_iter()
        .map(|(g, s)| Ok((g, SeriesOutputs::build(s, sw.baseline)?)))
        .collect::<CliResult<BTreeMap<_, _>>>()?;

    let canonical = config.canonical_json();
    let provenance = Provenance::new("swbi", &canonical, config.estimator.seed);
    let header = provenance.header_with([format!("score_map {map} baseline {}", sw.baseline)]);
    let dir = &config.output_dir;
    let mut outputs = national.write(dir, &header, "SWBI")?;
    for (g, out) in &geo {
        let sub = Path::new(GEO_DIR).join(sanitize(g));
        let h = provenance.header_with([format!("score_map {map} baseline {}", sw.baseline), format!("geo {g}")]);
        for f in out.write(&dir.join(&sub), &h, &format!("SWBI {g}"))? {
            outputs.push(sub.join(f).to_string_lossy().into_owned());
        }
    }
    Manifest {
        provenance: provenance.clone(),
        config: serde_json::from_str(&canonical).expect("canonical json"),
        inputs,
        counts: Counts {
            n: table.doc_count(),
            k: table.len(),
            l: pipeline.vocabulary.len(),
            m: sw.categories.len() - 1,
            ..Default::default()
        },
        outputs,
    }
    .write(dir)?;

    Ok(SwbiRun {
        national,
        geo,
        provenance,
        output_dir: dir.clone(),
    })
}

/// File-system-safe directory name for a geo code.
fn sanitize(geo: &str) -> String {
    geo.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
        .collect()
}

#[derive(Debug, Clone)]
pub struct InjectRun {
    /// Each input row with its recomputed index.
    pub rows: Vec<(ComponentRow, f64)>,
    /// Present when every period label is a date.
    pub series: Option<SeriesOutputs>,
    pub provenance: Provenance,
}

/// Bypasses estimation: composes the index from externally supplied
/// component values, e.g. published yearly means.
pub fn cmd_swbi_inject(
    table: &Path,
    output_dir: &Path,
    baseline: f64,
    seed: u64,
) -> CliResult<InjectRun> {
    if !table.is_file() {
        return Err(CliError::Config(format!("component table not found: {}", table.display())));
    }
    if !(0.0..=100.0).contains(&baseline) {
        return Err(CliError::Config(format!("baseline must lie in [0, 100], got {baseline}")));
    }
    let bytes = std::fs::read(table).map_err(|e| CliError::io(format!("reading {}", table.display()), e))?;
    let parsed = parse_component_table(&bytes, &table.display().to_string())?;
    let rows: Vec<(ComponentRow, f64)> = parsed
        .into_iter()
        .map(|r| {
            let scores: Vec<(ComponentId, f64)> = ComponentId::ALL.into_iter().zip(r.values).collect();
            let v = swbi(&scores)?;
            Ok((r, v))
        })
        .collect::<CliResult<_>>()?;

    let canonical = serde_json::json!({
        "inject_component_means": sha256_file(table)?,
        "baseline": baseline,
    })
    .to_string();
    let provenance = Provenance::new("swbi", &canonical, seed);
    let header = provenance.header_with([format!("injected component means {}", table.display())]);

    let mut text = String::new();
    for h in &header {
        text.push_str(&format!("# {h}\n"));
    }
    text.push_str(&format!("period,{},swbi,reported_swbi,difference\n", components_header()));
    for (r, v) in &rows {
        text.push_str(&r.period);
        for x in r.values {
            text.push_str(&format!(",{x:.4}"));
        }
        match r.reported_swbi {
            Some(rep) => text.push_str(&format!(",{v:.4},{rep:.4},{:.4}\n", v - rep)),
            None => text.push_str(&format!(",{v:.4},,\n")),
        }
    }
    write_file(&output_dir.join(COMPONENTS_FILE), text.as_bytes())?;
    let mut outputs = vec![COMPONENTS_FILE.to_string()];

    let dates: Option<Vec<NaiveDate>> = rows.iter().map(|(r, _)| r.period.parse().ok()).collect();
    let series = match dates {
        Some(dates) if !rows.is_empty() => {
            let scores: Vec<(NaiveDate, ComponentId, f64)> = dates
                .iter()
                .zip(&rows)
                .flat_map(|(&d, (r, _))| ComponentId::ALL.into_iter().zip(r.values).map(move |(c, v)| (d, c, v)))
                .collect();
            let out = SeriesOutputs::build(isa_core::swbi::assemble_days(&scores)?, baseline)?;
            outputs.extend(out.write(output_dir, &header, "SWBI")?);
            Some(out)
        }
        _ => None,
    };
    Manifest {
        provenance: provenance.clone(),
        config: serde_json::from_str(&canonical).expect("canonical json"),
        inputs: vec![InputFile::hashed("component_means", table)?],
        counts: Counts::default(),
        outputs,
    }
    .write(output_dir)?;
    Ok(InjectRun {
        rows,
        series,
        provenance,
    })
}

fn components_header() -> String {
    ComponentId::ALL.map(|c| c.as_str()).join(",")
}
