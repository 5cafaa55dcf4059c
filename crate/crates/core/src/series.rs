//! Calendar-anchored monthly rainfall series: CSV ingestion, gap filling and
//! month indexing.
//!
//! Month indices in every public function are 1-based, so index 13 of a
//! series starting January 1991 is January 1992.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MONTH_NAMES: [&str; 12] = [
    "January",
    "February",
    "March",
    "April",
    "May",
    "June",
    "July",
    "August",
    "September",
    "October",
    "November",
    "December",
];

/// A Gregorian (year, month) pair. Ordering is chronological.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MonthStamp {
    year: i32,
    month: u8,
}

impl MonthStamp {
    pub fn new(year: i32, month: u8) -> Result<Self> {
        if !(1..=12).contains(&month) {
            return Err(Error::InvalidMonth(month));
        }
        Ok(Self { year, month })
    }

    pub fn year(self) -> i32 {
        self.year
    }

    pub fn month(self) -> u8 {
        self.month
    }

    /// Months elapsed since January of year 0.
    fn ordinal(self) -> i64 {
        i64::from(self.year) * 12 + i64::from(self.month) - 1
    }

    fn from_ordinal(ordinal: i64) -> Self {
        let year = ordinal.div_euclid(12);
        let month = ordinal.rem_euclid(12) + 1;
        Self {
            year: year as i32,
            month: month as u8,
        }
    }

    /// Shift by a signed number of months.
    pub fn advance(self, months: i64) -> Self {
        Self::from_ordinal(self.ordinal() + months)
    }

    /// Signed number of months from `self` to `later`.
    pub fn months_until(self, later: MonthStamp) -> i64 {
        later.ordinal() - self.ordinal()
    }

    pub fn month_name(self) -> &'static str {
        MONTH_NAMES[usize::from(self.month - 1)]
    }
}

impl Ord for MonthStamp {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.year, self.month).cmp(&(other.year, other.month))
    }
}

impl PartialOrd for MonthStamp {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MonthStamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}", self.year, self.month)
    }
}

/// Parses `YYYY-MM`.
impl std::str::FromStr for MonthStamp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("expected YYYY-MM, got {s:?}"));
        let (y, m) = s.trim().split_once('-').ok_or_else(bad)?;
        let year = y.parse().map_err(|_| bad())?;
        let month = m.parse().map_err(|_| bad())?;
        MonthStamp::new(year, month)
    }
}

/// Monthly rainfall depths in mm/month; `None` marks a missing month.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RainfallSeries {
    start: MonthStamp,
    values: Vec<Option<f64>>,
}

impl RainfallSeries {
    /// Builds a series, rejecting negative or non-finite values.
    pub fn new(start: MonthStamp, values: Vec<Option<f64>>) -> Result<Self> {
        for (i, v) in values.iter().enumerate() {
            if let Some(v) = *v {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::InvalidValue {
                        line: i as u64 + 1,
                        value: v,
                    });
                }
            }
        }
        Ok(Self { start, values })
    }

    pub fn from_values(start: MonthStamp, values: &[f64]) -> Result<Self> {
        Self::new(start, values.iter().map(|&v| Some(v)).collect())
    }

    pub fn start(&self) -> MonthStamp {
        self.start
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn has_missing(&self) -> bool {
        self.values.iter().any(Option::is_none)
    }

    /// The values as a dense vector; fails on the first missing entry.
    pub fn dense(&self) -> Result<Vec<f64>> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                v.ok_or(Error::MissingValue {
                    index: i + 1,
                    policy: "fail",
                })
            })
            .collect()
    }

    /// Calendar stamp of the 1-based sample `index`.
    pub fn month_index_to_stamp(&self, index: usize) -> Result<MonthStamp> {
        if index == 0 || index > self.len() {
            return Err(Error::OutOfRange {
                what: "month index",
                value: index as i64,
                min: 1,
                max: self.len() as i64,
            });
        }
        Ok(self.start.advance(index as i64 - 1))
    }

    /// Inverse of [`Self::month_index_to_stamp`].
    pub fn stamp_to_month_index(&self, stamp: MonthStamp) -> Result<usize> {
        let offset = self.start.months_until(stamp);
        if offset < 0 || offset >= self.len() as i64 {
            return Err(Error::OutOfRange {
                what: "month offset",
                value: offset + 1,
                min: 1,
                max: self.len() as i64,
            });
        }
        Ok(offset as usize + 1)
    }

    /// Calendar month (1..=12) of the 0-based position `pos`.
    pub fn calendar_month_at(&self, pos: usize) -> u8 {
        self.start.advance(pos as i64).month()
    }

    /// Writes `year,month,rainfall_mm` CSV with a header; missing values
    /// become empty fields.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("year,month,rainfall_mm\n");
        for (i, v) in self.values.iter().enumerate() {
            let stamp = self.start.advance(i as i64);
            match v {
                Some(v) => out.push_str(&format!("{},{},{}\n", stamp.year, stamp.month, v)),
                None => out.push_str(&format!("{},{},\n", stamp.year, stamp.month)),
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum HeaderMode {
    /// Treat the first row as a header when its year field is not an integer.
    #[default]
    Auto,
    Present,
    Absent,
}

/// Column layout and missing-value conventions for [`parse_csv`].
#[derive(Debug, Clone)]
pub struct CsvSchema {
    pub year_column: String,
    pub month_column: String,
    pub value_column: String,
    pub header: HeaderMode,
    /// Tokens (compared case-insensitively) that mark a missing value. The
    /// empty field is always treated as missing.
    pub missing_tokens: Vec<String>,
}

impl Default for CsvSchema {
    fn default() -> Self {
        Self {
            year_column: "year".into(),
            month_column: "month".into(),
            value_column: "rainfall_mm".into(),
            header: HeaderMode::Auto,
            missing_tokens: vec!["NA".into()],
        }
    }
}

impl CsvSchema {
    fn is_missing(&self, field: &str) -> bool {
        field.is_empty() || self.missing_tokens.iter().any(|t| t.eq_ignore_ascii_case(field))
    }
}

/// Parses monthly rainfall CSV into a contiguous series. Rows may arrive in
/// any order; calendar gaps become missing entries.
pub fn parse_csv(text: &str, schema: &CsvSchema) -> Result<RainfallSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let mut columns = (0usize, 1usize, 2usize);
    let mut rows: BTreeMap<MonthStamp, (u64, Option<f64>)> = BTreeMap::new();
    let mut first = true;

    for record in reader.records() {
        let record = record.map_err(|e| Error::MalformedRow {
            line: e.position().map_or(0, |p| p.line()),
            reason: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.iter().all(str::is_empty) {
            continue;
        }
        if first {
            first = false;
            let looks_like_header = record.get(0).is_some_and(|f| f.parse::<i32>().is_err());
            let is_header = match schema.header {
                HeaderMode::Present => true,
                HeaderMode::Absent => false,
                HeaderMode::Auto => looks_like_header,
            };
            if is_header {
                columns = header_columns(&record, schema, line)?;
                continue;
            }
        }

        let field = |idx: usize, name: &str| -> Result<&str> {
            record.get(idx).ok_or_else(|| Error::MalformedRow {
                line,
                reason: format!("missing {name} column"),
            })
        };
        let year_field = field(columns.0, "year")?;
        let month_field = field(columns.1, "month")?;
        let value_field = field(columns.2, "rainfall")?;

        let year: i32 = year_field.parse().map_err(|_| Error::MalformedRow {
            line,
            reason: format!("year {year_field:?} is not an integer"),
        })?;
        let month: u8 = month_field.parse().map_err(|_| Error::MalformedRow {
            line,
            reason: format!("month {month_field:?} is not an integer"),
        })?;
        let stamp = MonthStamp::new(year, month).map_err(|_| Error::MalformedRow {
            line,
            reason: format!("month {month} outside 1..=12"),
        })?;

        let value = if schema.is_missing(value_field) {
            None
        } else {
            let v: f64 = value_field.parse().map_err(|_| Error::NonNumericValue {
                line,
                value: value_field.to_string(),
            })?;
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidValue { line, value: v });
            }
            Some(v)
        };

        if rows.insert(stamp, (line, value)).is_some() {
            return Err(Error::DuplicateMonth { line, year, month });
        }
    }

    let (&start, _) = rows.first_key_value().ok_or(Error::EmptyInput)?;
    let (&end, _) = rows.last_key_value().ok_or(Error::EmptyInput)?;
    let len = start.months_until(end) as usize + 1;
    let mut values = vec![None; len];
    for (stamp, (_, value)) in rows {
        values[start.months_until(stamp) as usize] = value;
    }
    Ok(RainfallSeries { start, values })
}

fn header_columns(record: &csv::StringRecord, schema: &CsvSchema, line: u64) -> Result<(usize, usize, usize)> {
    let find = |name: &str| {
        record
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| Error::MalformedRow {
                line,
                reason: format!("header has no {name:?} column"),
            })
    };
    Ok((
        find(&schema.year_column)?,
        find(&schema.month_column)?,
        find(&schema.value_column)?,
    ))
}

/// How [`impute_missing`] repairs missing months.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ImputePolicy {
    Linear,
    ClimatologyMean,
    #[default]
    Fail,
}

impl ImputePolicy {
    fn label(self) -> &'static str {
        match self {
            ImputePolicy::Linear => "linear",
            ImputePolicy::ClimatologyMean => "climatology-mean",
            ImputePolicy::Fail => "fail",
        }
    }
}

impl std::str::FromStr for ImputePolicy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(ImputePolicy::Linear),
            "climatology-mean" | "climatology" => Ok(ImputePolicy::ClimatologyMean),
            "fail" => Ok(ImputePolicy::Fail),
            _ => Err(Error::InvalidParameter(format!("unknown imputation policy {s:?}"))),
        }
    }
}

/// Fills missing entries according to `policy`. Present values are never
/// modified.
pub fn impute_missing(series: &RainfallSeries, policy: ImputePolicy) -> Result<RainfallSeries> {
    if !series.has_missing() {
        return Ok(series.clone());
    }
    let values = &series.values;
    let filled = match policy {
        ImputePolicy::Fail => {
            let index = values.iter().position(Option::is_none).unwrap_or(0) + 1;
            return Err(Error::MissingValue {
                index,
                policy: policy.label(),
            });
        }
        ImputePolicy::Linear => {
            let n = values.len();
            if values[0].is_none() || values[n - 1].is_none() {
                let index = if values[0].is_none() { 1 } else { n };
                return Err(Error::MissingValue {
                    index,
                    policy: policy.label(),
                });
            }
            let mut out = values.clone();
            let mut prev = 0usize;
            for i in 1..n {
                if let Some(hi) = values[i] {
                    let lo = values[prev].expect("previous anchor is present");
                    let span = (i - prev) as f64;
                    for (step, slot) in out[prev + 1..i].iter_mut().enumerate() {
                        let t = (step + 1) as f64 / span;
                        *slot = Some(lo + (hi - lo) * t);
                    }
                    prev = i;
                }
            }
            out
        }
        ImputePolicy::ClimatologyMean => {
            let mut sums = [0.0f64; 12];
            let mut counts = [0usize; 12];
            for (i, v) in values.iter().enumerate() {
                if let Some(v) = v {
                    let m = usize::from(series.calendar_month_at(i) - 1);
                    sums[m] += v;
                    counts[m] += 1;
                }
            }
            values
                .iter()
                .enumerate()
                .map(|(i, v)| match v {
                    Some(v) => Ok(Some(*v)),
                    None => {
                        let month = series.calendar_month_at(i);
                        let m = usize::from(month - 1);
                        if counts[m] == 0 {
                            Err(Error::EmptyCalendarMonth(month))
                        } else {
                            Ok(Some(sums[m] / counts[m] as f64))
                        }
                    }
                })
                .collect::<Result<Vec<_>>>()?
        }
    };
    Ok(RainfallSeries {
        start: series.start,
        values: filled,
    })
}
