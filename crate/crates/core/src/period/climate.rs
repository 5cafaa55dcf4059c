use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{RainfallSeries, MONTH_NAMES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregation {
    #[default]
    Median,
    Mean,
}

/// Per-calendar-month aggregate rainfall.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClimatologyProfile {
    /// January first, mm/month.
    pub monthly: [f64; 12],
    pub aggregation: Aggregation,
    /// Calendar months (1..=12) that are strict local maxima of the circular
    /// profile.
    pub peak_months: Vec<u8>,
}

fn circular_peaks(profile: &[f64; 12]) -> Vec<u8> {
    (0..12)
        .filter(|&m| {
            let prev = profile[(m + 11) % 12];
            let next = profile[(m + 1) % 12];
            profile[m] > prev && profile[m] > next
        })
        .map(|m| m as u8 + 1)
        .collect()
}

pub fn climatology(series: &RainfallSeries, aggregation: Aggregation) -> Result<ClimatologyProfile> {
    if series.len() < 12 {
        return Err(Error::OutOfRange {
            what: "series length for climatology",
            value: series.len() as i64,
            min: 12,
            max: i64::MAX,
        });
    }
    let values = series.dense()?;
    let mut buckets: Vec<Vec<f64>> = vec![Vec::new(); 12];
    for (pos, v) in values.into_iter().enumerate() {
        buckets[usize::from(series.calendar_month_at(pos) - 1)].push(v);
    }
    let mut monthly = [0.0; 12];
    for (slot, mut bucket) in monthly.iter_mut().zip(buckets) {
        *slot = match aggregation {
            Aggregation::Mean => bucket.iter().sum::<f64>() / bucket.len() as f64,
            Aggregation::Median => {
                bucket.sort_by(f64::total_cmp);
                let k = bucket.len();
                if k % 2 == 1 {
                    bucket[k / 2]
                } else {
                    0.5 * (bucket[k / 2 - 1] + bucket[k / 2])
                }
            }
        };
    }
    Ok(ClimatologyProfile {
        peak_months: circular_peaks(&monthly),
        monthly,
        aggregation,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CalendarRow {
    pub period: u64,
    /// Calendar months m (1..=12) with m mod period == 0.
    pub months: Vec<u8>,
    /// True when the period divides 12, so the months repeat every year.
    pub phase_locked: bool,
}

impl CalendarRow {
    pub fn month_names(&self) -> Vec<&'static str> {
        self.months.iter().map(|&m| MONTH_NAMES[usize::from(m - 1)]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodCalendar {
    pub rows: Vec<CalendarRow>,
}

impl PeriodCalendar {
    /// `period,months` CSV with month names joined by ", ".
    pub fn to_csv(&self) -> String {
        let mut out = String::from("period,months\n");
        for row in &self.rows {
            out.push_str(&format!("{},\"{}\"\n", row.period, row.month_names().join(", ")));
        }
        out
    }
}

pub fn period_calendar(periods: &[u64]) -> Result<PeriodCalendar> {
    let rows = periods
        .iter()
        .map(|&p| {
            if p == 0 {
                return Err(Error::InvalidParameter("period must be at least 1 month".into()));
            }
            Ok(CalendarRow {
                period: p,
                months: (1..=12u8).filter(|&m| u64::from(m) % p == 0).collect(),
                phase_locked: 12 % p == 0,
            })
        })
        .collect::<Result<_>>()?;
    Ok(PeriodCalendar { rows })
}

/// Months shared by every row of the calendar.
pub fn peak_months(calendar: &PeriodCalendar) -> Vec<u8> {
    let Some(first) = calendar.rows.first() else {
        return Vec::new();
    };
    first
        .months
        .iter()
        .copied()
        .filter(|m| calendar.rows.iter().all(|r| r.months.contains(m)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RainfallPattern {
    EquatorialBimodal,
    MonsoonalUnimodal,
    Indeterminate,
}

impl RainfallPattern {
    pub fn name(self) -> &'static str {
        match self {
            RainfallPattern::EquatorialBimodal => "equatorial-bimodal",
            RainfallPattern::MonsoonalUnimodal => "monsoonal-unimodal",
            RainfallPattern::Indeterminate => "indeterminate",
        }
    }
}

/// Two peaks 5 to 7 months apart on the circular year: bimodal. One peak:
/// unimodal. Anything else: indeterminate.
pub fn classify_pattern(profile: &ClimatologyProfile) -> RainfallPattern {
    match profile.peak_months.as_slice() {
        [_] => RainfallPattern::MonsoonalUnimodal,
        [a, b] => {
            let gap = a.abs_diff(*b);
            let circular = gap.min(12 - gap);
            if (5..=7).contains(&circular) {
                RainfallPattern::EquatorialBimodal
            } else {
                RainfallPattern::Indeterminate
            }
        }
        _ => RainfallPattern::Indeterminate,
    }
}
