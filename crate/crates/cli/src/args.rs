use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use wpd_core::dwt::{BoundaryMode, WaveletKind};
use wpd_core::period::{BandConvention, DipTrain, PeriodicComponent, SyntheticSpec};
use wpd_core::series::{ImputePolicy, MonthStamp};
use wpd_core::shrinkage::{NoiseModel, ThresholdMethod};

use crate::config::RunConfig;
use crate::error::{io_err, CliError, CliResult};
use crate::pipeline::{cmd_analyze, cmd_decompose, cmd_scalogram, cmd_synth};

/// Wavelet periodicity analysis of monthly rainfall.
#[derive(Debug, Parser)]
#[command(name = "wpd", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full pipeline: level tables, episodes, climatology and figures.
    Analyze(RunArgs),
    /// Decomposition JSON plus one CSV per reconstructed component.
    Decompose(RunArgs),
    /// Seeded synthetic series with its ground truth.
    Synth(SynthArgs),
    /// Haar scalogram of a series as CSV and SVG.
    Scalogram(ScalogramArgs),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, env = "WPD_INPUT")]
    pub input: PathBuf,
    #[arg(long, env = "WPD_OUT", default_value = "out")]
    pub out: PathBuf,
    #[arg(long, env = "WPD_WAVELET", default_value = "haar")]
    pub wavelet: WaveletKind,
    #[arg(long, env = "WPD_LEVELS", default_value_t = 4)]
    pub levels: usize,
    #[arg(long, env = "WPD_BOUNDARY", default_value = "periodic")]
    pub boundary: BoundaryMode,
    #[arg(long, env = "WPD_THRESHOLD", default_value = "hard")]
    pub threshold: ThresholdMethod,
    /// per-level or single
    #[arg(long, env = "WPD_NOISE", default_value = "per-level")]
    pub noise: NoiseModel,
    #[arg(long, env = "WPD_MIN_SURVIVORS", default_value_t = 1)]
    pub min_survivors: usize,
    /// fail, linear or climatology-mean
    #[arg(long, env = "WPD_IMPUTE", default_value = "fail")]
    pub impute: ImputePolicy,
    /// Token marking a missing month, repeatable; the empty field always counts
    #[arg(
        long = "missing-token",
        env = "WPD_MISSING_TOKEN",
        value_delimiter = ',',
        default_value = "NA",
        allow_hyphen_values = true
    )]
    pub missing_tokens: Vec<String>,
    /// paper: level j covers periods 2^(j-1)..2^j; dyadic: 2^j..2^(j+1)
    #[arg(long, env = "WPD_CONVENTION", default_value = "paper")]
    pub convention: BandConvention,
    #[arg(long, env = "WPD_DEPTH_FACTOR", default_value_t = wpd_core::period::DEFAULT_DEPTH_FACTOR)]
    pub depth_factor: f64,
}

impl RunArgs {
    pub fn to_config(&self) -> RunConfig {
        RunConfig {
            input: self.input.clone(),
            out: self.out.clone(),
            wavelet: self.wavelet,
            levels: self.levels,
            boundary: self.boundary,
            threshold: self.threshold,
            noise: self.noise,
            min_survivors: self.min_survivors,
            impute: self.impute,
            missing_tokens: self.missing_tokens.clone(),
            convention: self.convention,
            depth_factor: self.depth_factor,
            ..RunConfig::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct SynthArgs {
    #[arg(long, env = "WPD_OUT", default_value = "out")]
    pub out: PathBuf,
    #[arg(long, env = "WPD_SEED")]
    pub seed: u64,
    /// JSON spec file; replaces the shape flags below.
    #[arg(long, env = "WPD_SPEC")]
    pub spec: Option<PathBuf>,
    #[arg(long, default_value = "1991-01")]
    pub start: MonthStamp,
    #[arg(long, default_value_t = 312)]
    pub length: usize,
    #[arg(long, default_value_t = 300.0)]
    pub baseline: f64,
    /// PERIOD:AMPLITUDE[:PHASE], repeatable
    #[arg(long = "component", value_parser = parse_component)]
    pub components: Vec<PeriodicComponent>,
    /// FIRST:EVERY:WIDTH:DEPTH, repeatable
    #[arg(long = "dip", value_parser = parse_dip)]
    pub dips: Vec<DipTrain>,
    #[arg(long, env = "WPD_NOISE_SIGMA", default_value_t = 0.0)]
    pub noise_sigma: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ScalogramArgs {
    #[arg(long, env = "WPD_INPUT")]
    pub input: PathBuf,
    #[arg(long, env = "WPD_OUT", default_value = "out")]
    pub out: PathBuf,
    /// Comma-separated scales in months, default 1,2,4,8,16
    #[arg(long, value_delimiter = ',')]
    pub scales: Option<Vec<f64>>,
    #[arg(long, env = "WPD_IMPUTE", default_value = "fail")]
    pub impute: ImputePolicy,
    /// Token marking a missing month, repeatable; the empty field always counts
    #[arg(
        long = "missing-token",
        env = "WPD_MISSING_TOKEN",
        value_delimiter = ',',
        default_value = "NA",
        allow_hyphen_values = true
    )]
    pub missing_tokens: Vec<String>,
}

fn numbers(s: &str, min: usize, max: usize) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() < min || parts.len() > max {
        return Err(format!("expected {min} to {max} colon-separated numbers, got {s:?}"));
    }
    parts
        .iter()
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("{p:?} is not a number")))
        .collect()
}

fn parse_component(s: &str) -> Result<PeriodicComponent, String> {
    let v = numbers(s, 2, 3)?;
    Ok(PeriodicComponent {
        period: v[0],
        amplitude: v[1],
        phase: v.get(2).copied().unwrap_or(0.0),
    })
}

fn parse_dip(s: &str) -> Result<DipTrain, String> {
    let v = numbers(s, 4, 4)?;
    let whole = |x: f64| -> Result<usize, String> {
        if x >= 0.0 && x.fract() == 0.0 {
            Ok(x as usize)
        } else {
            Err(format!("{x} is not a whole number of months"))
        }
    };
    Ok(DipTrain {
        first: whole(v[0])?,
        every: whole(v[1])?,
        width: whole(v[2])?,
        depth: v[3],
    })
}

impl SynthArgs {
    pub fn to_spec(&self) -> CliResult<SyntheticSpec> {
        let mut spec = match &self.spec {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(io_err(path))?;
                serde_json::from_str(&text).map_err(|source| CliError::Json {
                    path: path.clone(),
                    source,
                })?
            }
            None => SyntheticSpec {
                start: self.start,
                length: self.length,
                baseline: self.baseline,
                components: self.components.clone(),
                dips: self.dips.clone(),
                noise_sigma: self.noise_sigma,
                seed: self.seed,
            },
        };
        spec.seed = self.seed;
        Ok(spec)
    }
}

pub fn run(cli: Cli) -> CliResult<Vec<PathBuf>> {
    match cli.command {
        Command::Analyze(a) => cmd_analyze(&a.to_config()),
        Command::Decompose(a) => cmd_decompose(&a.to_config()),
        Command::Synth(a) => cmd_synth(&a.to_spec()?, &a.out),
        Command::Scalogram(a) => {
            let cfg = RunConfig {
                input: a.input.clone(),
                out: a.out.clone(),
                impute: a.impute,
                missing_tokens: a.missing_tokens.clone(),
                ..RunConfig::default()
            };
            cmd_scalogram(&cfg, a.scales)
        }
    }
}
