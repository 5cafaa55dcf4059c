//! Mapping of decomposition levels to period and frequency bands, per-level
//! summaries, low-rainfall episodes, climatology and the period calendar.

mod climate;
mod episodes;
mod synth;

pub use climate::{
    classify_pattern, climatology, peak_months, period_calendar, Aggregation, CalendarRow, ClimatologyProfile,
    PeriodCalendar, RainfallPattern,
};
pub use episodes::{detect_episodes, repeat_interval, Episode, EpisodeKind, DEFAULT_DEPTH_FACTOR};
pub use synth::{generate_synthetic, DipTrain, GroundTruth, PeriodicComponent, SyntheticSeries, SyntheticSpec};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dwt::Decomposition;
use crate::error::{Error, Result};
use crate::series::RainfallSeries;
use crate::shrinkage::ShrinkageReport;

/// Level-to-period convention (sampling interval one month).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BandConvention {
    /// Level j covers periods 2^(j-1) ..= 2^j months.
    #[default]
    Paper,
    /// Level j covers periods 2^j ..= 2^(j+1) months.
    Dyadic,
}

impl std::str::FromStr for BandConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "paper" => Ok(BandConvention::Paper),
            "dyadic" => Ok(BandConvention::Dyadic),
            _ => Err(Error::InvalidParameter(format!("unknown band convention {s:?}"))),
        }
    }
}

/// An exact non-negative fraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn reciprocal_of(period: u64) -> Self {
        Self { num: 1, den: period }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Decimal truncated (not rounded) to three places, trailing zeros
    /// dropped: 1/6 -> "0.166", 1/2 -> "0.5", 1/1 -> "1".
    pub fn truncated_3(self) -> String {
        let milli = self.num * 1000 / self.den;
        let (whole, frac) = (milli / 1000, milli % 1000);
        if frac == 0 {
            return whole.to_string();
        }
        let digits = format!("{frac:03}");
        format!("{whole}.{}", digits.trim_end_matches('0'))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Period range (months) and relative frequency range (cycles/month) of one
/// decomposition level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodBand {
    pub level: usize,
    pub period_lo: u64,
    pub period_hi: u64,
    pub freq_lo: Ratio,
    pub freq_hi: Ratio,
    pub median_period: u64,
}

impl PeriodBand {
    pub fn median_frequency(&self) -> Ratio {
        Ratio::reciprocal_of(self.median_period)
    }

    /// Whether `period` falls in `(period_lo, period_hi]`.
    pub fn contains(&self, period: f64) -> bool {
        period > self.period_lo as f64 && period <= self.period_hi as f64
    }
}

/// Band of 1-based `level` under `convention`.
pub fn band_for_level(level: usize, convention: BandConvention) -> Result<PeriodBand> {
    if level == 0 || level > 62 {
        return Err(Error::OutOfRange {
            what: "level",
            value: level as i64,
            min: 1,
            max: 62,
        });
    }
    let shift = match convention {
        BandConvention::Paper => level - 1,
        BandConvention::Dyadic => level,
    };
    let lo = 1u64 << shift;
    let hi = lo * 2;
    Ok(PeriodBand {
        level,
        period_lo: lo,
        period_hi: hi,
        freq_lo: Ratio::reciprocal_of(hi),
        freq_hi: Ratio::reciprocal_of(lo),
        median_period: (lo + hi).div_ceil(2),
    })
}

/// The level whose band holds `period` (lower edge exclusive), if any.
pub fn level_for_period(period: f64, convention: BandConvention) -> Option<usize> {
    (1..=62).find(|&level| {
        band_for_level(level, convention)
            .map(|b| b.contains(period))
            .unwrap_or(false)
    })
}

/// Level with the largest detail energy (first wins on ties).
pub fn dominant_energy_level(d: &Decomposition) -> usize {
    let mut best = (1, f64::NEG_INFINITY);
    for level in 1..=d.depth() {
        let e = d.detail_energy(level).unwrap_or(0.0);
        if e > best.1 {
            best = (level, e);
        }
    }
    best.0
}

const BAND_TABLE_HEADER: &str =
    "level,period_range_months,relative_frequency_range,median_period_months,median_relative_frequency";

fn band_cells(b: &PeriodBand) -> String {
    format!(
        "{},{}-{},{}-{},{},{}",
        b.level,
        b.period_lo,
        b.period_hi,
        b.freq_lo.truncated_3(),
        b.freq_hi.truncated_3(),
        b.median_period,
        b.median_frequency().truncated_3()
    )
}

/// Period/frequency columns of the level table as CSV.
pub fn band_table_csv(bands: &[PeriodBand]) -> String {
    let mut out = format!("{BAND_TABLE_HEADER}\n");
    for b in bands {
        out.push_str(&band_cells(b));
        out.push('\n');
    }
    out
}

/// One row of the level table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSummary {
    pub band: PeriodBand,
    pub surviving_coeffs: usize,
    /// Range of the level's reconstructed component shifted by the series mean.
    pub component_min: f64,
    pub component_max: f64,
    pub median_relative_frequency: f64,
    pub median_relative_frequency_exact: Ratio,
}

/// Summaries for the significant levels of a thresholded decomposition.
pub fn summarize_levels(
    d: &Decomposition,
    report: &ShrinkageReport,
    series: &RainfallSeries,
    convention: BandConvention,
) -> Result<Vec<LevelSummary>> {
    if report.levels.len() != d.depth() {
        return Err(Error::LengthMismatch(format!(
            "report has {} levels, decomposition has {}",
            report.levels.len(),
            d.depth()
        )));
    }
    if series.len() != d.original_length() {
        return Err(Error::LengthMismatch(format!(
            "series has {} months, decomposition covers {}",
            series.len(),
            d.original_length()
        )));
    }
    let values = series.dense()?;
    let baseline = values.iter().sum::<f64>() / values.len() as f64;

    let mut rows = Vec::new();
    for row in report.significant() {
        let band = band_for_level(row.level, convention)?;
        let component = crate::dwt::reconstruct_component(d, crate::dwt::Component::Detail(row.level))?;
        let (lo, hi) = component
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &c| {
                (lo.min(c), hi.max(c))
            });
        let exact = band.median_frequency();
        rows.push(LevelSummary {
            band,
            surviving_coeffs: row.surviving,
            component_min: baseline + lo,
            component_max: baseline + hi,
            median_relative_frequency: exact.to_f64(),
            median_relative_frequency_exact: exact,
        });
    }
    rows.sort_by_key(|r| r.band.level);
    Ok(rows)
}

/// Full level table: band columns plus value range and survivor count.
pub fn level_table_csv(rows: &[LevelSummary]) -> String {
    let mut out = format!("{BAND_TABLE_HEADER},median_relative_frequency_exact,rainfall_range_mm,surviving_coeffs\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.1}-{:.1},{}\n",
            band_cells(&r.band),
            r.median_relative_frequency_exact,
            r.component_min,
            r.component_max,
            r.surviving_coeffs
        ));
    }
    out
}
