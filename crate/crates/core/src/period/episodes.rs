use serde::{Deserialize, Serialize};

use super::PeriodBand;
use crate::error::{Error, Result};
use crate::series::{MonthStamp, RainfallSeries};

/// Default depth, in standard deviations of the component, that a window
/// mean must fall below the component mean.
pub const DEFAULT_DEPTH_FACTOR: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EpisodeKind {
    Minimum,
}

/// A window of anomalously low reconstructed rainfall at one level.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Episode {
    pub level: usize,
    /// 1-based, inclusive.
    pub start_index: usize,
    pub end_index: usize,
    pub start_stamp: MonthStamp,
    pub end_stamp: MonthStamp,
    pub kind: EpisodeKind,
    pub window_mean: f64,
}

/// Slides a window of `band.median_period` months over `component` and keeps
/// windows whose mean is a strict minimum among all overlapping windows and
/// lies below `mean - depth_factor * std` of the component.
pub fn detect_episodes(
    component: &[f64],
    band: &PeriodBand,
    series: &RainfallSeries,
    depth_factor: f64,
) -> Result<Vec<Episode>> {
    let n = component.len();
    if n != series.len() {
        return Err(Error::LengthMismatch(format!(
            "component has {n} samples, series has {}",
            series.len()
        )));
    }
    let width = band.median_period as usize;
    if width == 0 || width > n {
        return Err(Error::OutOfRange {
            what: "episode window",
            value: width as i64,
            min: 1,
            max: n as i64,
        });
    }

    let mean = component.iter().sum::<f64>() / n as f64;
    let var = component.iter().map(|c| (c - mean).powi(2)).sum::<f64>() / n as f64;
    let cutoff = mean - depth_factor * var.sqrt();

    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for c in component {
        prefix.push(prefix.last().unwrap() + c);
    }
    let windows: Vec<f64> = (0..=n - width)
        .map(|i| (prefix[i + width] - prefix[i]) / width as f64)
        .collect();

    let mut spans: Vec<(usize, usize, f64)> = Vec::new();
    for (i, &m) in windows.iter().enumerate() {
        if m >= cutoff {
            continue;
        }
        let lo = i.saturating_sub(width - 1);
        let hi = (i + width - 1).min(windows.len() - 1);
        let strict_min = (lo..=hi).filter(|&j| j != i).all(|j| m < windows[j]);
        if !strict_min {
            continue;
        }
        let (start, end) = (i, i + width - 1);
        match spans.last_mut() {
            Some(last) if start <= last.1 => {
                last.1 = last.1.max(end);
                last.2 = last.2.min(m);
            }
            _ => spans.push((start, end, m)),
        }
    }

    spans
        .into_iter()
        .map(|(start, end, m)| {
            Ok(Episode {
                level: band.level,
                start_index: start + 1,
                end_index: end + 1,
                start_stamp: series.month_index_to_stamp(start + 1)?,
                end_stamp: series.month_index_to_stamp(end + 1)?,
                kind: EpisodeKind::Minimum,
                window_mean: m,
            })
        })
        .collect()
}

/// Median gap between consecutive episode starts, `None` for fewer than two
/// episodes.
pub fn repeat_interval(starts: &[usize]) -> Option<f64> {
    if starts.len() < 2 {
        return None;
    }
    let mut gaps: Vec<usize> = starts.windows(2).map(|w| w[1].abs_diff(w[0])).collect();
    gaps.sort_unstable();
    let k = gaps.len();
    Some(if k % 2 == 1 {
        gaps[k / 2] as f64
    } else {
        (gaps[k / 2 - 1] + gaps[k / 2]) as f64 / 2.0
    })
}
