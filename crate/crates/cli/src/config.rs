use std::path::PathBuf;

use serde::Serialize;
use sha2::{Digest, Sha256};
use wpd_core::dwt::{BoundaryMode, WaveletKind};
use wpd_core::period::{BandConvention, DEFAULT_DEPTH_FACTOR};
use wpd_core::series::ImputePolicy;
use wpd_core::shrinkage::{NoiseModel, ShrinkagePlan, ThresholdMethod};

/// Everything a run depends on. The defaults decompose monthly rainfall to
/// four Haar levels and keep the levels that survive a hard fixed-form
/// threshold with per-level noise.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    #[serde(skip)]
    pub input: PathBuf,
    #[serde(skip)]
    pub out: PathBuf,
    pub wavelet: WaveletKind,
    pub levels: usize,
    pub boundary: BoundaryMode,
    pub threshold: ThresholdMethod,
    pub noise: NoiseModel,
    pub min_survivors: usize,
    pub impute: ImputePolicy,
    /// Tokens that mark a missing month besides the empty field.
    pub missing_tokens: Vec<String>,
    pub convention: BandConvention,
    pub depth_factor: f64,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            input: PathBuf::new(),
            out: PathBuf::from("out"),
            wavelet: WaveletKind::Haar,
            levels: 4,
            boundary: BoundaryMode::Periodic,
            threshold: ThresholdMethod::Hard,
            noise: NoiseModel::PerLevel,
            min_survivors: 1,
            impute: ImputePolicy::Fail,
            missing_tokens: vec!["NA".into()],
            convention: BandConvention::Paper,
            depth_factor: DEFAULT_DEPTH_FACTOR,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn plan(&self) -> ShrinkagePlan {
        ShrinkagePlan {
            method: self.threshold,
            noise_model: self.noise,
            min_survivors: self.min_survivors,
            ..ShrinkagePlan::default()
        }
    }

    /// sha256 over the JSON form of every setting except the paths, so the
    /// same analysis written to two directories hashes the same.
    pub fn hash(&self) -> String {
        let json = serde_json::to_vec(self).expect("config serializes");
        hex_digest(&json)
    }
}

pub fn hex_digest(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
