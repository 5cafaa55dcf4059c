//! Fixed-form (universal) threshold denoising of detail coefficients and
//! selection of the levels that carry signal above the noise floor.

use serde::{Deserialize, Serialize};

use crate::dwt::{wavedec, waverec, BoundaryMode, Decomposition, WaveletFilter};
use crate::error::{Error, Result};

/// Normal-consistency factor: median(|z|) for z ~ N(0, 1).
pub const MAD_NORMAL_FACTOR: f64 = 0.6745;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdRule {
    /// `sigma * sqrt(2 ln n)`.
    #[default]
    FixedForm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdMethod {
    #[default]
    Hard,
    Soft,
}

impl std::str::FromStr for ThresholdMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hard" => Ok(ThresholdMethod::Hard),
            "soft" => Ok(ThresholdMethod::Soft),
            _ => Err(Error::InvalidParameter(format!("unknown threshold method {s:?}"))),
        }
    }
}

/// Where the noise scale comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NoiseModel {
    /// One sigma from the level-1 details, applied to every level.
    Single,
    /// Sigma estimated separately at each level (non-white noise).
    #[default]
    PerLevel,
}

impl std::str::FromStr for NoiseModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "single" | "white" => Ok(NoiseModel::Single),
            "per-level" | "non-white" | "perlevel" => Ok(NoiseModel::PerLevel),
            _ => Err(Error::InvalidParameter(format!("unknown noise model {s:?}"))),
        }
    }
}

/// The `n` inside the fixed-form threshold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReferenceCount {
    /// The original signal length, shared by all levels.
    #[default]
    Global,
    /// The coefficient count of each level.
    PerLevel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShrinkagePlan {
    pub rule: ThresholdRule,
    pub method: ThresholdMethod,
    pub noise_model: NoiseModel,
    pub reference: ReferenceCount,
    /// Approximation coefficients pass through untouched when set.
    pub keep_approx: bool,
    pub min_survivors: usize,
}

impl Default for ShrinkagePlan {
    fn default() -> Self {
        Self {
            rule: ThresholdRule::FixedForm,
            method: ThresholdMethod::Hard,
            noise_model: NoiseModel::PerLevel,
            reference: ReferenceCount::Global,
            keep_approx: true,
            min_survivors: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelReport {
    pub level: usize,
    pub sigma: f64,
    pub lambda: f64,
    pub total: usize,
    pub surviving: usize,
    #[serde(skip_serializing, default)]
    pub max_abs: f64,
    pub significant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShrinkageReport {
    pub levels: Vec<LevelReport>,
    pub highest_significant_level: usize,
}

impl ShrinkageReport {
    pub fn level(&self, level: usize) -> Option<&LevelReport> {
        self.levels.iter().find(|r| r.level == level)
    }

    pub fn significant(&self) -> impl Iterator<Item = &LevelReport> {
        self.levels.iter().filter(|r| r.significant)
    }
}

fn median_in_place(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Robust noise scale `median(|d|) / 0.6745`.
pub fn estimate_sigma_mad(detail: &[f64]) -> Result<f64> {
    if detail.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut abs: Vec<f64> = detail.iter().map(|d| d.abs()).collect();
    Ok(median_in_place(&mut abs) / MAD_NORMAL_FACTOR)
}

/// Universal threshold `sigma * sqrt(2 ln n)`.
pub fn fixed_form_lambda(n: usize, sigma: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("reference count n must be at least 1".into()));
    }
    if sigma.is_nan() || sigma < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "sigma must be non-negative, got {sigma}"
        )));
    }
    Ok(sigma * (2.0 * (n as f64).ln()).sqrt())
}

fn shrink(c: f64, lambda: f64, method: ThresholdMethod) -> f64 {
    match method {
        ThresholdMethod::Hard => {
            if c.abs() > lambda {
                c
            } else {
                0.0
            }
        }
        ThresholdMethod::Soft => c.signum() * (c.abs() - lambda).max(0.0),
    }
}

/// Hard: keep `c` when `|c| > lambda`. Soft: shrink magnitudes by `lambda`.
pub fn apply_threshold(coeffs: &[f64], lambda: f64, method: ThresholdMethod) -> Result<Vec<f64>> {
    if lambda.is_nan() || lambda < 0.0 {
        return Err(Error::InvalidParameter(format!(
            "threshold must be non-negative, got {lambda}"
        )));
    }
    Ok(coeffs.iter().map(|&c| shrink(c, lambda, method)).collect())
}

/// Marks levels with at least `min_survivors` surviving coefficients.
pub fn significant_levels(mut report: ShrinkageReport, min_survivors: usize) -> ShrinkageReport {
    for row in &mut report.levels {
        row.significant = row.surviving >= min_survivors;
    }
    report.highest_significant_level = report.significant().map(|r| r.level).max().unwrap_or(0);
    report
}

#[derive(Debug, Clone)]
pub struct Denoised {
    pub signal: Vec<f64>,
    pub report: ShrinkageReport,
    /// Coefficients after thresholding.
    pub thresholded: Decomposition,
    /// Coefficients before thresholding.
    pub original: Decomposition,
}

/// Thresholds an existing decomposition according to `plan`.
pub fn shrink_decomposition(
    original: &Decomposition,
    plan: &ShrinkagePlan,
) -> Result<(Decomposition, ShrinkageReport)> {
    let depth = original.depth();
    let sigmas: Vec<f64> = match plan.noise_model {
        NoiseModel::Single => vec![estimate_sigma_mad(original.detail(1)?)?; depth],
        NoiseModel::PerLevel => original
            .details()
            .iter()
            .map(|d| estimate_sigma_mad(d))
            .collect::<Result<_>>()?,
    };

    let mut thresholded = original.clone();
    let mut rows = Vec::with_capacity(depth);
    for level in 1..=depth {
        let sigma = sigmas[level - 1];
        let coeffs = original.detail(level)?;
        let n = match plan.reference {
            ReferenceCount::Global => original.original_length(),
            ReferenceCount::PerLevel => coeffs.len(),
        };
        let lambda = fixed_form_lambda(n, sigma)?;
        let surviving = coeffs.iter().filter(|c| c.abs() > lambda).count();
        let max_abs = coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        let shrunk = apply_threshold(coeffs, lambda, plan.method)?;
        thresholded.detail_mut(level)?.copy_from_slice(&shrunk);
        rows.push(LevelReport {
            level,
            sigma,
            lambda,
            total: coeffs.len(),
            surviving,
            max_abs,
            significant: false,
        });
    }
    if !plan.keep_approx {
        let lambda = rows.last().map_or(0.0, |r| r.lambda);
        let shrunk = apply_threshold(original.approx(), lambda, plan.method)?;
        thresholded.approx_mut().copy_from_slice(&shrunk);
    }

    let report = significant_levels(
        ShrinkageReport {
            levels: rows,
            highest_significant_level: 0,
        },
        plan.min_survivors,
    );
    Ok((thresholded, report))
}

/// Decompose, threshold the details level by level, and reconstruct.
pub fn denoise(
    x: &[f64],
    filter: &WaveletFilter,
    boundary: BoundaryMode,
    levels: usize,
    plan: &ShrinkagePlan,
) -> Result<Denoised> {
    let original = wavedec(x, filter, boundary, levels)?;
    let (thresholded, report) = shrink_decomposition(&original, plan)?;
    let signal = waverec(&thresholded)?;
    Ok(Denoised {
        signal,
        report,
        thresholded,
        original,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dwt::{make_filter, WaveletKind};

    #[test]
    fn mad_examples() {
        assert!((estimate_sigma_mad(&[0.6745, -0.6745, 0.6745]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(estimate_sigma_mad(&[0.0, 0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(estimate_sigma_mad(&[]), Err(Error::EmptyInput));
        // even count averages the two middle magnitudes
        assert!((estimate_sigma_mad(&[1.0, -3.0, 2.0, 10.0]).unwrap() - 2.5 / 0.6745).abs() < 1e-12);
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(fixed_form_lambda(1, 1.0).unwrap(), 0.0);
        assert_eq!(fixed_form_lambda(500, 0.0).unwrap(), 0.0);
        let direct = (2.0 * 312f64.ln()).sqrt();
        let lambda = fixed_form_lambda(312, 1.0).unwrap();
        assert_eq!(lambda, direct);
        assert!((lambda - 3.3891).abs() < 1e-4);
        assert!(fixed_form_lambda(0, 1.0).is_err());
        assert!(fixed_form_lambda(3, -1.0).is_err());
    }

    #[test]
    fn threshold_examples() {
        let c = [3.0, -1.0, 0.5];
        assert_eq!(
            apply_threshold(&c, 2.0, ThresholdMethod::Hard).unwrap(),
            vec![3.0, 0.0, 0.0]
        );
        assert_eq!(
            apply_threshold(&c, 2.0, ThresholdMethod::Soft).unwrap(),
            vec![1.0, 0.0, 0.0]
        );
        let c = [0.0, 1e-300, -4.0, 0.0];
        assert_eq!(apply_threshold(&c, 0.0, ThresholdMethod::Hard).unwrap(), c.to_vec());
        assert!(apply_threshold(&c, -0.1, ThresholdMethod::Hard).is_err());
    }

    fn report_with(survivors: &[usize]) -> ShrinkageReport {
        ShrinkageReport {
            levels: survivors
                .iter()
                .enumerate()
                .map(|(i, &s)| LevelReport {
                    level: i + 1,
                    sigma: 1.0,
                    lambda: 1.0,
                    total: 160,
                    surviving: s,
                    max_abs: 0.0,
                    significant: false,
                })
                .collect(),
            highest_significant_level: 0,
        }
    }

    #[test]
    fn significance_examples() {
        let r = significant_levels(report_with(&[59, 44, 18, 0]), 1);
        let flags: Vec<bool> = r.levels.iter().map(|l| l.significant).collect();
        assert_eq!(flags, vec![true, true, true, false]);
        assert_eq!(r.highest_significant_level, 3);

        assert_eq!(significant_levels(report_with(&[0, 0]), 1).highest_significant_level, 0);
        assert_eq!(significant_levels(report_with(&[5, 5]), 6).highest_significant_level, 0);
    }

    #[test]
    fn constant_signal_is_untouched() {
        let f = make_filter(WaveletKind::Haar).unwrap();
        let x = vec![321.0; 64];
        let out = denoise(&x, &f, BoundaryMode::Periodic, 4, &ShrinkagePlan::default()).unwrap();
        let err = out
            .signal
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-9);
        assert_eq!(out.thresholded, out.original);
        for row in &out.report.levels {
            assert_eq!(row.sigma, 0.0);
            assert_eq!(row.lambda, 0.0);
            assert_eq!(row.surviving, 0);
            assert!(!row.significant);
        }
        assert_eq!(out.report.highest_significant_level, 0);
    }

    #[test]
    fn degenerate_sigma_keeps_any_nonzero_coefficient() {
        // one impulse: at most one nonzero coefficient per level, MAD is 0
        let f = make_filter(WaveletKind::Haar).unwrap();
        let mut x = vec![0.0; 32];
        x[5] = 8.0;
        let out = denoise(&x, &f, BoundaryMode::Periodic, 3, &ShrinkagePlan::default()).unwrap();
        for row in &out.report.levels {
            assert_eq!(row.lambda, 0.0);
            assert_eq!(row.surviving, 1);
            assert!(row.significant);
        }
        let err: f64 = out
            .signal
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-9);
    }

    #[test]
    fn single_noise_model_uses_level_one_sigma() {
        let f = make_filter(WaveletKind::Db2).unwrap();
        let x: Vec<f64> = (0..128)
            .map(|i| ((i * 37) % 19) as f64 + (i as f64 / 9.0).sin() * 40.0)
            .collect();
        let plan = ShrinkagePlan {
            noise_model: NoiseModel::Single,
            ..ShrinkagePlan::default()
        };
        let out = denoise(&x, &f, BoundaryMode::Periodic, 3, &plan).unwrap();
        let sigma1 = estimate_sigma_mad(out.original.detail(1).unwrap()).unwrap();
        assert!(out.report.levels.iter().all(|r| r.sigma == sigma1));
        let lambda = fixed_form_lambda(128, sigma1).unwrap();
        assert!(out.report.levels.iter().all(|r| r.lambda == lambda));
    }

    #[test]
    fn per_level_reference_count() {
        let f = make_filter(WaveletKind::Haar).unwrap();
        let x: Vec<f64> = (0..64).map(|i| ((i * 13) % 7) as f64).collect();
        let plan = ShrinkagePlan {
            reference: ReferenceCount::PerLevel,
            ..ShrinkagePlan::default()
        };
        let out = denoise(&x, &f, BoundaryMode::Periodic, 3, &plan).unwrap();
        for row in &out.report.levels {
            assert_eq!(row.lambda, fixed_form_lambda(row.total, row.sigma).unwrap());
        }
    }

    #[test]
    fn dropping_approx_thresholds_it() {
        let f = make_filter(WaveletKind::Haar).unwrap();
        let x: Vec<f64> = (0..16).map(|i| if i == 3 { 100.0 } else { 1.0 }).collect();
        let plan = ShrinkagePlan {
            keep_approx: false,
            ..ShrinkagePlan::default()
        };
        let out = denoise(&x, &f, BoundaryMode::Periodic, 2, &plan).unwrap();
        let lambda = out.report.levels[1].lambda;
        for (a, b) in out.thresholded.approx().iter().zip(out.original.approx()) {
            assert_eq!(*a, if b.abs() > lambda { *b } else { 0.0 });
        }
    }

    #[test]
    fn report_json_rows() {
        let r = significant_levels(report_with(&[3]), 1);
        let json = serde_json::to_string(&r.levels[0]).unwrap();
        assert_eq!(
            json,
            r#"{"level":1,"sigma":1.0,"lambda":1.0,"total":160,"surviving":3,"significant":true}"#
        );
    }
}
