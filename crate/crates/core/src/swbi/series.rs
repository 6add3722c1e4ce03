use std::collections::BTreeMap;

use chrono::{Datelike, NaiveDate};
use rayon::prelude::*;

use super::{component_score, mean8, ComponentId, PolarityDistribution, ScoreMap};
use crate::error::{Error, Result};

/// Partition name for records without a geo code.
pub const UNLOCATED: &str = "unlocated";

/// One estimated component-day.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DayEstimate {
    pub date: NaiveDate,
    pub component: ComponentId,
    pub dist: PolarityDistribution,
}

/// A complete day: all eight scores and their mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwbiRecord {
    pub date: NaiveDate,
    /// In [`ComponentId::ALL`] order.
    pub components: [f64; 8],
    pub swbi: f64,
}

impl SwbiRecord {
    pub fn new(date: NaiveDate, components: [f64; 8]) -> Self {
        Self {
            date,
            components,
            swbi: mean8(&components),
        }
    }

    pub fn get(&self, c: ComponentId) -> f64 {
        self.components[c.index()]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum GapReason {
    /// no estimate supplied for the component-day
    Missing,
    /// estimate supplied but with zero on-topic mass
    NoSignal,
}

impl GapReason {
    pub fn as_str(self) -> &'static str {
        match self {
            GapReason::Missing => "missing",
            GapReason::NoSignal => "no-signal",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Gap {
    pub date: NaiveDate,
    pub component: ComponentId,
    pub reason: GapReason,
}

/// Complete days in chronological order plus every component-day that kept a
/// day from being complete.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DailySeries {
    pub records: Vec<SwbiRecord>,
    pub gaps: Vec<Gap>,
}

/// Scores every component-day and assembles complete days. Incomplete days
/// are reported in `gaps`, never dropped silently or interpolated.
pub fn daily_series(estimates: &[DayEstimate], map: ScoreMap) -> Result<DailySeries> {
    let mut cells: BTreeMap<NaiveDate, [Option<Option<f64>>; 8]> = BTreeMap::new();
    for e in estimates {
        let score = match component_score(&e.dist, map) {
            Ok(s) => Some(s),
            Err(Error::NoSignal) => None,
            Err(err) => return Err(err),
        };
        put(&mut cells, e.date, e.component, score)?;
    }
    Ok(assemble(cells))
}

/// Builds the series from already computed `(date, component, score)` cells.
pub fn assemble_days(scores: &[(NaiveDate, ComponentId, f64)]) -> Result<DailySeries> {
    let mut cells = BTreeMap::new();
    for &(date, c, v) in scores {
        if !v.is_finite() || !(0.0..=100.0).contains(&v) {
            return Err(Error::InvalidInput(format!("score {v} of `{c}` on {date} outside [0, 100]")));
        }
        put(&mut cells, date, c, Some(v))?;
    }
    Ok(assemble(cells))
}

fn put(
    cells: &mut BTreeMap<NaiveDate, [Option<Option<f64>>; 8]>,
    date: NaiveDate,
    c: ComponentId,
    score: Option<f64>,
) -> Result<()> {
    let day = cells.entry(date).or_insert([None; 8]);
    if day[c.index()].replace(score).is_some() {
        return Err(Error::Duplicate(format!("({date}, {c})")));
    }
    Ok(())
}

fn assemble(cells: BTreeMap<NaiveDate, [Option<Option<f64>>; 8]>) -> DailySeries {
    let mut out = DailySeries::default();
    for (date, day) in cells {
        let mut values = [0.0; 8];
        let mut complete = true;
        for (i, cell) in day.iter().enumerate() {
            let reason = match cell {
                Some(Some(v)) => {
                    values[i] = *v;
                    continue;
                }
                Some(None) => GapReason::NoSignal,
                None => GapReason::Missing,
            };
            complete = false;
            out.gaps.push(Gap {
                date,
                component: ComponentId::ALL[i],
                reason,
            });
        }
        if complete {
            out.records.push(SwbiRecord::new(date, values));
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonthlyValue {
    pub year: i32,
    pub month: u32,
    /// `Σ (swbi_day − baseline)` over the month's complete days
    pub integrated: f64,
    pub days: usize,
}

/// Signed monthly balance against `baseline`. Months without complete days
/// do not appear.
pub fn integrate_monthly(series: &[SwbiRecord], baseline: f64) -> Result<Vec<MonthlyValue>> {
    if !(0.0..=100.0).contains(&baseline) {
        return Err(Error::Config(format!("baseline {baseline} outside [0, 100]")));
    }
    let mut months: BTreeMap<(i32, u32), (f64, usize)> = BTreeMap::new();
    for r in series {
        let e = months.entry((r.date.year(), r.date.month())).or_default();
        e.0 += r.swbi - baseline;
        e.1 += 1;
    }
    Ok(months
        .into_iter()
        .map(|((year, month), (integrated, days))| MonthlyValue {
            year,
            month,
            integrated,
            days,
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YearlyRow {
    pub year: i32,
    /// Per-component means over the year's complete days.
    pub components: [f64; 8],
    /// Mean of the yearly component means.
    pub swbi: f64,
    pub days: usize,
}

/// Per-year means, each day weighted equally.
pub fn yearly_table(series: &[SwbiRecord]) -> Vec<YearlyRow> {
    let mut years: BTreeMap<i32, ([f64; 8], usize)> = BTreeMap::new();
    for r in series {
        let e = years.entry(r.date.year()).or_insert(([0.0; 8], 0));
        for (acc, v) in e.0.iter_mut().zip(r.components) {
            *acc += v;
        }
        e.1 += 1;
    }
    years
        .into_iter()
        .map(|(year, (sums, days))| {
            let components = sums.map(|s| s / days as f64);
            YearlyRow {
                year,
                components,
                swbi: mean8(&components),
                days,
            }
        })
        .collect()
}

/// Runs [`daily_series`] independently per geo partition; `None` goes to
/// [`UNLOCATED`].
pub fn group_by_geo(
    estimates: &[(Option<String>, DayEstimate)],
    map: ScoreMap,
) -> Result<BTreeMap<String, DailySeries>> {
    let mut parts: BTreeMap<String, Vec<DayEstimate>> = BTreeMap::new();
    for (geo, e) in estimates {
        let key = geo.clone().unwrap_or_else(|| UNLOCATED.to_string());
        parts.entry(key).or_default().push(*e);
    }
    let series: Vec<(String, DailySeries)> = parts
        .into_par_iter()
        .map(|(g, es)| daily_series(&es, map).map(|s| (g, s)))
        .collect::<Result<_>>()?;
    Ok(series.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn day(s: &str) -> NaiveDate {
        s.parse().unwrap()
    }

    fn full_day(date: &str, pos: f64) -> Vec<DayEstimate> {
        ComponentId::ALL
            .into_iter()
            .map(|c| DayEstimate {
                date: day(date),
                component: c,
                dist: PolarityDistribution::new(0.5, 0.5 - pos, 0.0, pos).unwrap(),
            })
            .collect()
    }

    #[test]
    fn one_complete_day() {
        let s = daily_series(&full_day("2014-01-01", 0.25), ScoreMap::PositiveShare).unwrap();
        assert_eq!(s.records.len(), 1);
        assert!(s.gaps.is_empty());
        assert_abs_diff_eq!(s.records[0].swbi, 50.0, epsilon = 1e-12);
    }

    #[test]
    fn missing_component_goes_to_gaps() {
        let mut es = full_day("2014-01-01", 0.25);
        es.retain(|e| e.component != ComponentId::Wor);
        let s = daily_series(&es, ScoreMap::PositiveShare).unwrap();
        assert!(s.records.is_empty());
        assert_eq!(
            s.gaps,
            vec![Gap {
                date: day("2014-01-01"),
                component: ComponentId::Wor,
                reason: GapReason::Missing
            }]
        );
    }

    #[test]
    fn no_signal_goes_to_gaps() {
        let mut es = full_day("2014-01-01", 0.25);
        es[2].dist = PolarityDistribution::new(1.0, 0.0, 0.0, 0.0).unwrap();
        let s = daily_series(&es, ScoreMap::PositiveShare).unwrap();
        assert!(s.records.is_empty());
        assert_eq!(s.gaps[0].reason, GapReason::NoSignal);
    }

    #[test]
    fn sorted_output_and_duplicates() {
        let mut es = full_day("2014-01-03", 0.1);
        es.extend(full_day("2014-01-01", 0.2));
        es.extend(full_day("2014-01-02", 0.3));
        let s = daily_series(&es, ScoreMap::PositiveShare).unwrap();
        let dates: Vec<_> = s.records.iter().map(|r| r.date.to_string()).collect();
        assert_eq!(dates, ["2014-01-01", "2014-01-02", "2014-01-03"]);

        es.push(es[0]);
        assert!(matches!(daily_series(&es, ScoreMap::PositiveShare), Err(Error::Duplicate(_))));
    }

    fn constant(date: &str, v: f64) -> SwbiRecord {
        SwbiRecord::new(day(date), [v; 8])
    }

    #[test]
    fn monthly_integration() {
        let june: Vec<_> = (1..=30).map(|d| constant(&format!("2013-06-{d:02}"), 50.0)).collect();
        let m = integrate_monthly(&june, 50.0).unwrap();
        assert_eq!(m.len(), 1);
        assert_eq!(m[0].integrated, 0.0);
        assert_eq!(m[0].days, 30);

        let two = [constant("2013-07-01", 60.0), constant("2013-07-02", 60.0)];
        assert_abs_diff_eq!(integrate_monthly(&two, 50.0).unwrap()[0].integrated, 20.0, epsilon = 1e-12);

        let gap = [constant("2013-01-05", 55.0), constant("2013-03-05", 45.0)];
        let m = integrate_monthly(&gap, 50.0).unwrap();
        assert_eq!(m.iter().map(|v| v.month).collect::<Vec<_>>(), vec![1, 3]);
        assert!(integrate_monthly(&gap, 101.0).is_err());
    }

    #[test]
    fn yearly_means() {
        let single = [constant("2012-05-05", 33.0)];
        assert_eq!(yearly_table(&single)[0].components, [33.0; 8]);

        let two = [constant("2012-05-05", 40.0), constant("2012-05-06", 60.0)];
        let y = yearly_table(&two);
        assert_eq!(y[0].components, [50.0; 8]);
        assert_eq!(y[0].swbi, 50.0);

        let consts = [10.0, 20.0, 30.0, 40.0, 50.0, 60.0, 70.0, 80.0];
        let start = day("2013-01-01");
        let year: Vec<_> = (0..365)
            .map(|i| SwbiRecord::new(start + chrono::Days::new(i), consts))
            .collect();
        let y = yearly_table(&year);
        assert_eq!(y.len(), 1);
        assert_eq!(y[0].days, 365);
        for (a, b) in y[0].components.iter().zip(consts) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn geo_partitions() {
        let a: Vec<_> = full_day("2014-01-01", 0.2).into_iter().map(|e| (Some("MI".to_string()), e)).collect();
        let b: Vec<_> = full_day("2014-01-01", 0.4).into_iter().map(|e| (Some("RM".to_string()), e)).collect();
        let both: Vec<_> = a.iter().chain(&b).cloned().collect();
        let g = group_by_geo(&both, ScoreMap::PositiveShare).unwrap();
        assert_eq!(g.keys().collect::<Vec<_>>(), ["MI", "RM"]);
        let only_mi: Vec<DayEstimate> = a.iter().map(|(_, e)| *e).collect();
        assert_eq!(g["MI"], daily_series(&only_mi, ScoreMap::PositiveShare).unwrap());

        let none: Vec<_> = full_day("2014-01-01", 0.2).into_iter().map(|e| (None, e)).collect();
        let g = group_by_geo(&none, ScoreMap::PositiveShare).unwrap();
        assert_eq!(g.keys().collect::<Vec<_>>(), [UNLOCATED]);
    }
}
