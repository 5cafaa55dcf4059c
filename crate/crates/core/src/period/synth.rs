//! Seeded synthetic rainfall: baseline + cosines + planted dips + Gaussian
//! noise, clipped at zero.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::{MonthStamp, RainfallSeries};

/// `amplitude * cos(2 pi t / period + phase)` with `t` the 1-based month
/// index, so a zero phase peaks at months `period, 2 period, ...`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicComponent {
    pub period: f64,
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
}

/// Rectangular dips of `depth` mm lasting `width` months, the first starting
/// at 1-based month `first` and repeating every `every` months.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DipTrain {
    pub first: usize,
    pub every: usize,
    pub width: usize,
    pub depth: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub start: MonthStamp,
    pub length: usize,
    pub baseline: f64,
    #[serde(default)]
    pub components: Vec<PeriodicComponent>,
    #[serde(default)]
    pub dips: Vec<DipTrain>,
    #[serde(default)]
    pub noise_sigma: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub periods: Vec<f64>,
    /// Per component, the 1-based trough times inside the series.
    pub troughs: Vec<Vec<f64>>,
    /// Planted dip windows, 1-based inclusive `[start, end]`.
    pub dip_windows: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSeries {
    pub series: RainfallSeries,
    pub truth: GroundTruth,
}

fn check_spec(spec: &SyntheticSpec) -> Result<()> {
    let bad = |msg: String| Err(Error::InvalidParameter(msg));
    if spec.length < 24 {
        return bad(format!(
            "synthetic length must be at least 24 months, got {}",
            spec.length
        ));
    }
    if !spec.baseline.is_finite() {
        return bad("baseline must be finite".into());
    }
    if !(spec.noise_sigma >= 0.0 && spec.noise_sigma.is_finite()) {
        return bad(format!("noise sigma must be non-negative, got {}", spec.noise_sigma));
    }
    for c in &spec.components {
        if !(c.period > 0.0 && c.period.is_finite()) {
            return bad(format!("period must be positive, got {}", c.period));
        }
        if !(c.amplitude >= 0.0 && c.amplitude.is_finite()) {
            return bad(format!("amplitude must be non-negative, got {}", c.amplitude));
        }
        if !c.phase.is_finite() {
            return bad("phase must be finite".into());
        }
    }
    for d in &spec.dips {
        if d.first == 0 || d.every == 0 || d.width == 0 {
            return bad("dip first, every and width must be at least 1".into());
        }
        if !(d.depth >= 0.0 && d.depth.is_finite()) {
            return bad(format!("dip depth must be non-negative, got {}", d.depth));
        }
    }
    Ok(())
}

pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<SyntheticSeries> {
    check_spec(spec)?;
    let n = spec.length;
    let mut values: Vec<f64> = (1..=n)
        .map(|t| {
            let t = t as f64;
            spec.baseline
                + spec
                    .components
                    .iter()
                    .map(|c| c.amplitude * (2.0 * PI * t / c.period + c.phase).cos())
                    .sum::<f64>()
        })
        .collect();

    let mut dip_windows = Vec::new();
    for dip in &spec.dips {
        let mut start = dip.first;
        while start <= n {
            let end = (start + dip.width - 1).min(n);
            for v in &mut values[start - 1..end] {
                *v -= dip.depth;
            }
            dip_windows.push([start, end]);
            start += dip.every;
        }
    }
    dip_windows.sort_unstable();

    if spec.noise_sigma > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
        let normal = Normal::new(0.0, spec.noise_sigma).map_err(|e| Error::InvalidParameter(e.to_string()))?;
        for v in &mut values {
            *v += normal.sample(&mut rng);
        }
    }
    for v in &mut values {
        *v = v.max(0.0);
    }
    if values.iter().all(|&v| v == 0.0) {
        return Err(Error::InvalidParameter(
            "synthetic parameters produce an all-zero series".into(),
        ));
    }

    let troughs = spec
        .components
        .iter()
        .map(|c| {
            // 2 pi t / p + phase = pi (mod 2 pi)
            let first = (PI - c.phase) * c.period / (2.0 * PI);
            let shift = ((1.0 - first) / c.period).ceil();
            let mut t = first + shift * c.period;
            let mut out = Vec::new();
            while t <= n as f64 {
                out.push(t);
                t += c.period;
            }
            out
        })
        .collect();

    Ok(SyntheticSeries {
        series: RainfallSeries::from_values(spec.start, &values)?,
        truth: GroundTruth {
            periods: spec.components.iter().map(|c| c.period).collect(),
            troughs,
            dip_windows,
        },
    })
}
