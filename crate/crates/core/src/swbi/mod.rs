//! Social well-being index: per-dimension scores on `[0, 100]` from
//! estimated `{off-topic, -1, 0, +1}` distributions, their arithmetic mean,
//! and the daily / monthly-integrated / yearly series built from them.

mod export;
mod series;

pub use export::{
    parse_component_table, render_chart_svg, write_gap_report, write_monthly, write_series,
    write_yearly, ComponentRow,
};
pub use series::{
    assemble_days, daily_series, group_by_geo, integrate_monthly, yearly_table, DailySeries,
    DayEstimate, Gap, GapReason, MonthlyValue, SwbiRecord, YearlyRow, UNLOCATED,
};

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// The eight dimensions, in the column order of the published yearly table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComponentId {
    /// emotional well-being
    Emo,
    /// positive functioning
    Fun,
    /// relationships
    Rel,
    /// resilience and self-esteem
    Res,
    /// satisfying life
    Sat,
    /// trust and belonging
    Tru,
    /// vitality
    Vit,
    /// quality of job
    Wor,
}

impl ComponentId {
    pub const ALL: [ComponentId; 8] = [
        ComponentId::Emo,
        ComponentId::Fun,
        ComponentId::Rel,
        ComponentId::Res,
        ComponentId::Sat,
        ComponentId::Tru,
        ComponentId::Vit,
        ComponentId::Wor,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ComponentId::Emo => "emo",
            ComponentId::Fun => "fun",
            ComponentId::Rel => "rel",
            ComponentId::Res => "res",
            ComponentId::Sat => "sat",
            ComponentId::Tru => "tru",
            ComponentId::Vit => "vit",
            ComponentId::Wor => "wor",
        }
    }

    /// Position in [`ComponentId::ALL`].
    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ComponentId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        ComponentId::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown component `{s}`")))
    }
}

/// Estimated shares of off-topic, negative, neutral and positive texts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarityDistribution {
    pub p_off: f64,
    pub p_neg: f64,
    pub p_neu: f64,
    pub p_pos: f64,
}

impl PolarityDistribution {
    pub fn new(p_off: f64, p_neg: f64, p_neu: f64, p_pos: f64) -> Result<Self> {
        let d = Self {
            p_off,
            p_neg,
            p_neu,
            p_pos,
        };
        let v = [p_off, p_neg, p_neu, p_pos];
        if v.iter().any(|p| !p.is_finite() || *p < 0.0) || (v.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidInput(format!("not a distribution: {v:?}")));
        }
        Ok(d)
    }

    /// From a 4-entry estimate ordered `D0, -1, 0, +1`.
    pub fn from_slice(p: &[f64]) -> Result<Self> {
        match p {
            &[off, neg, neu, pos] => Self::new(off, neg, neu, pos),
            _ => Err(Error::Structural(format!(
                "polarity distribution needs 4 entries, got {}",
                p.len()
            ))),
        }
    }

    pub fn on_topic(&self) -> f64 {
        self.p_neg + self.p_neu + self.p_pos
    }
}

/// How a polarity distribution becomes a `[0, 100]` score.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScoreMap {
    /// `100 · p_pos / (p_neg + p_neu + p_pos)`
    #[default]
    PositiveShare,
    /// `100 · (pos − neg + 1) / 2` on the on-topic shares.
    SignedBalance,
}

impl FromStr for ScoreMap {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "positive-share" => Ok(ScoreMap::PositiveShare),
            "signed-balance" => Ok(ScoreMap::SignedBalance),
            _ => Err(Error::Config(format!("unknown score map `{s}`"))),
        }
    }
}

impl fmt::Display for ScoreMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScoreMap::PositiveShare => "positive-share",
            ScoreMap::SignedBalance => "signed-balance",
        })
    }
}

/// Component score of one distribution. Off-topic mass never enters the
/// score; zero on-topic mass is [`Error::NoSignal`].
pub fn component_score(dist: &PolarityDistribution, map: ScoreMap) -> Result<f64> {
    let on = dist.on_topic();
    if !(on > 0.0) {
        return Err(Error::NoSignal);
    }
    let score = match map {
        ScoreMap::PositiveShare => 100.0 * dist.p_pos / on,
        ScoreMap::SignedBalance => 100.0 * ((dist.p_pos - dist.p_neg) / on + 1.0) / 2.0,
    };
    Ok(score.clamp(0.0, 100.0))
}

/// Unweighted mean of the eight component scores. `scores` may come in any
/// order but must hold each component exactly once.
pub fn swbi(scores: &[(ComponentId, f64)]) -> Result<f64> {
    swbi_weighted(scores, &[0.125; 8])
}

/// Weighted mean; `weights` are in [`ComponentId::ALL`] order and must form a
/// distribution.
pub fn swbi_weighted(scores: &[(ComponentId, f64)], weights: &[f64; 8]) -> Result<f64> {
    if weights.iter().any(|w| !(*w >= 0.0)) || (weights.iter().sum::<f64>() - 1.0).abs() > 1e-9 {
        return Err(Error::Config(format!("weights are not on the simplex: {weights:?}")));
    }
    let values = ordered_scores(scores)?;
    Ok(values.iter().zip(weights).map(|(v, w)| v * w).sum())
}

/// Scores reordered into [`ComponentId::ALL`] order.
pub fn ordered_scores(scores: &[(ComponentId, f64)]) -> Result<[f64; 8]> {
    let mut values = [None; 8];
    for &(c, v) in scores {
        if !v.is_finite() || !(0.0..=100.0).contains(&v) {
            return Err(Error::InvalidInput(format!("score {v} of `{c}` outside [0, 100]")));
        }
        if values[c.index()].replace(v).is_some() {
            return Err(Error::Duplicate(format!("component `{c}`")));
        }
    }
    let mut out = [0.0; 8];
    for (i, v) in values.iter().enumerate() {
        out[i] = v.ok_or_else(|| Error::MissingComponent(ComponentId::ALL[i].to_string()))?;
    }
    Ok(out)
}

/// Plain mean of eight already-ordered values.
pub(crate) fn mean8(v: &[f64; 8]) -> f64 {
    v.iter().sum::<f64>() / 8.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn pd(off: f64, neg: f64, neu: f64, pos: f64) -> PolarityDistribution {
        PolarityDistribution::new(off, neg, neu, pos).unwrap()
    }

    #[test]
    fn score_examples() {
        let ps = ScoreMap::PositiveShare;
        assert_eq!(component_score(&pd(0.0, 0.0, 0.0, 1.0), ps).unwrap(), 100.0);
        assert_abs_diff_eq!(component_score(&pd(0.5, 0.25, 0.0, 0.25), ps).unwrap(), 50.0, epsilon = 1e-12);
        assert_abs_diff_eq!(component_score(&pd(0.0, 0.2, 0.3, 0.5), ps).unwrap(), 50.0, epsilon = 1e-12);
        assert!(matches!(component_score(&pd(1.0, 0.0, 0.0, 0.0), ps), Err(Error::NoSignal)));
    }

    #[test]
    fn signed_balance_map() {
        let sb = ScoreMap::SignedBalance;
        assert_abs_diff_eq!(component_score(&pd(0.0, 0.0, 0.0, 1.0), sb).unwrap(), 100.0, epsilon = 1e-12);
        assert_abs_diff_eq!(component_score(&pd(0.0, 1.0, 0.0, 0.0), sb).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(component_score(&pd(0.6, 0.1, 0.2, 0.1), sb).unwrap(), 50.0, epsilon = 1e-12);
    }

    #[test]
    fn table_rows() {
        let rows: [([f64; 8], f64); 2] = [
            ([60.55, 67.76, 34.10, 55.10, 43.88, 59.22, 53.91, 16.44], 48.87),
            ([57.32, 73.31, 37.35, 57.19, 55.03, 64.04, 58.04, 15.50], 52.22),
        ];
        for (vals, expected) in rows {
            let scores: Vec<_> = ComponentId::ALL.into_iter().zip(vals).collect();
            assert!((swbi(&scores).unwrap() - expected).abs() <= 0.005);
        }
    }

    #[test]
    fn constant_mean_and_missing_component() {
        let scores: Vec<_> = ComponentId::ALL.into_iter().map(|c| (c, 42.0)).collect();
        assert_abs_diff_eq!(swbi(&scores).unwrap(), 42.0, epsilon = 1e-12);
        let missing: Vec<_> = scores.iter().copied().filter(|(c, _)| *c != ComponentId::Wor).collect();
        match swbi(&missing) {
            Err(Error::MissingComponent(c)) => assert_eq!(c, "wor"),
            r => panic!("unexpected {r:?}"),
        }
    }

    #[test]
    fn weighted_variant() {
        let scores: Vec<_> = ComponentId::ALL
            .into_iter()
            .enumerate()
            .map(|(i, c)| (c, i as f64 * 10.0))
            .collect();
        let mut w = [0.0; 8];
        w[7] = 1.0;
        assert_abs_diff_eq!(swbi_weighted(&scores, &w).unwrap(), 70.0, epsilon = 1e-12);
        assert!(swbi_weighted(&scores, &[0.5; 8]).is_err());
    }

    #[test]
    fn component_names_round_trip() {
        for c in ComponentId::ALL {
            assert_eq!(c.as_str().parse::<ComponentId>().unwrap(), c);
        }
        assert!("joy".parse::<ComponentId>().is_err());
    }
}
