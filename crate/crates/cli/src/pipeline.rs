use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use wpd_core::dwt::{make_filter, reconstruct_component, wavedec, Component, Decomposition};
use wpd_core::period::summarize_levels;
use wpd_core::period::{
    band_for_level, classify_pattern, climatology, detect_episodes, generate_synthetic, level_table_csv, peak_months,
    period_calendar, Aggregation, ClimatologyProfile, Episode, GroundTruth, LevelSummary, PeriodCalendar,
    RainfallPattern, SyntheticSpec,
};
use wpd_core::scalogram::{cwt_quadrature, render_heatmap_svg, ScaleGrid, ScalogramMatrix};
use wpd_core::series::{impute_missing, parse_csv, CsvSchema, RainfallSeries};
use wpd_core::shrinkage::{shrink_decomposition, ShrinkageReport};

use crate::config::{hex_digest, RunConfig};
use crate::error::{io_err, CliError, CliResult};
use crate::figures::climatology_svg;

pub const TOOL_NAME: &str = "wpd";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_hash: String,
    /// sha256 of the raw input bytes.
    pub input_digest: String,
    pub input_months: usize,
    pub start: String,
}

/// Everything one `analyze` run produces, all derived from one input.
#[derive(Debug, Clone, Serialize)]
pub struct AnalysisBundle {
    pub provenance: Provenance,
    pub config: RunConfig,
    pub decomposition: Decomposition,
    pub shrinkage: ShrinkageReport,
    pub levels: Vec<LevelSummary>,
    pub episodes: Vec<Episode>,
    pub climatology: ClimatologyProfile,
    pub calendar: PeriodCalendar,
    pub peak_months: Vec<u8>,
    pub pattern: RainfallPattern,
    #[serde(skip)]
    pub scalogram: ScalogramMatrix,
}

pub struct LoadedInput {
    pub series: RainfallSeries,
    pub digest: String,
}

pub fn load_input(cfg: &RunConfig) -> CliResult<LoadedInput> {
    let bytes = fs::read(&cfg.input).map_err(io_err(&cfg.input))?;
    let text = String::from_utf8_lossy(&bytes);
    let schema = CsvSchema {
        missing_tokens: cfg.missing_tokens.clone(),
        ..CsvSchema::default()
    };
    let series = parse_csv(&text, &schema)?;
    let series = impute_missing(&series, cfg.impute)?;
    Ok(LoadedInput {
        series,
        digest: hex_digest(&bytes),
    })
}

pub fn analyze(cfg: &RunConfig, input: LoadedInput) -> CliResult<AnalysisBundle> {
    let LoadedInput { series, digest } = input;
    let values = series.dense()?;
    let filter = make_filter(cfg.wavelet)?;
    let original = wavedec(&values, &filter, cfg.boundary, cfg.levels)?;
    let (thresholded, report) = shrink_decomposition(&original, &cfg.plan())?;
    let levels = summarize_levels(&thresholded, &report, &series, cfg.convention)?;

    let mut episodes = Vec::new();
    for row in report.significant() {
        let band = band_for_level(row.level, cfg.convention)?;
        let component = reconstruct_component(&original, Component::Detail(row.level))?;
        episodes.extend(detect_episodes(&component, &band, &series, cfg.depth_factor)?);
    }

    let profile = climatology(&series, Aggregation::Median)?;
    let periods: Vec<u64> = levels.iter().map(|l| l.band.median_period).collect();
    let calendar = period_calendar(&periods)?;
    let scalogram = cwt_quadrature(&series, &ScaleGrid::default_for(series.len()))?;

    Ok(AnalysisBundle {
        provenance: Provenance {
            tool: TOOL_NAME,
            version: TOOL_VERSION,
            config_hash: cfg.hash(),
            input_digest: digest,
            input_months: series.len(),
            start: series.start().to_string(),
        },
        config: cfg.clone(),
        decomposition: original,
        shrinkage: report,
        levels,
        episodes,
        pattern: classify_pattern(&profile),
        climatology: profile,
        peak_months: peak_months(&calendar),
        calendar,
        scalogram,
    })
}

fn write_file(dir: &Path, name: &str, contents: &[u8]) -> CliResult<PathBuf> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(io_err(&path))?;
    Ok(path)
}

fn to_json<T: Serialize>(value: &T, name: &Path) -> CliResult<Vec<u8>> {
    let mut out = serde_json::to_vec_pretty(value).map_err(|source| CliError::Json {
        path: name.to_path_buf(),
        source,
    })?;
    out.push(b'\n');
    Ok(out)
}

fn prepare_out(dir: &Path) -> CliResult<()> {
    fs::create_dir_all(dir).map_err(io_err(dir))
}

pub fn write_bundle(bundle: &AnalysisBundle, dir: &Path) -> CliResult<Vec<PathBuf>> {
    prepare_out(dir)?;
    let scalogram = render_heatmap_svg(&bundle.scalogram)?;
    Ok(vec![
        write_file(dir, "table1.csv", level_table_csv(&bundle.levels).as_bytes())?,
        write_file(dir, "table2.csv", bundle.calendar.to_csv().as_bytes())?,
        write_file(
            dir,
            "episodes.json",
            &to_json(&bundle.episodes, &dir.join("episodes.json"))?,
        )?,
        write_file(dir, "climatology.svg", climatology_svg(&bundle.climatology).as_bytes())?,
        write_file(dir, "scalogram.svg", scalogram.as_bytes())?,
        write_file(dir, "report.json", &to_json(bundle, &dir.join("report.json"))?)?,
    ])
}

pub fn cmd_analyze(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let input = load_input(cfg)?;
    let bundle = analyze(cfg, input)?;
    write_bundle(&bundle, &cfg.out)
}

fn component_csv(series: &RainfallSeries, values: &[f64]) -> String {
    let mut out = String::from("year,month,value\n");
    for (i, v) in values.iter().enumerate() {
        let stamp = series.start().advance(i as i64);
        let _ = writeln!(out, "{},{},{v}", stamp.year(), stamp.month());
    }
    out
}

/// Writes `decomposition.json`, one `detail_<j>.csv` per level and
/// `approx_<J>.csv`.
pub fn cmd_decompose(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let LoadedInput { series, .. } = load_input(cfg)?;
    let filter = make_filter(cfg.wavelet)?;
    let d = wavedec(&series.dense()?, &filter, cfg.boundary, cfg.levels)?;
    prepare_out(&cfg.out)?;
    let mut written = vec![write_file(
        &cfg.out,
        "decomposition.json",
        &to_json(&d, &cfg.out.join("decomposition.json"))?,
    )?];
    for level in 1..=d.depth() {
        let c = reconstruct_component(&d, Component::Detail(level))?;
        written.push(write_file(
            &cfg.out,
            &format!("detail_{level}.csv"),
            component_csv(&series, &c).as_bytes(),
        )?);
    }
    let a = reconstruct_component(&d, Component::Approx)?;
    written.push(write_file(
        &cfg.out,
        &format!("approx_{}.csv", d.depth()),
        component_csv(&series, &a).as_bytes(),
    )?);
    Ok(written)
}

#[derive(Serialize)]
struct SynthTruthFile<'a> {
    spec: &'a SyntheticSpec,
    truth: &'a GroundTruth,
}

/// Writes `synthetic.csv` and `truth.json`.
pub fn cmd_synth(spec: &SyntheticSpec, out: &Path) -> CliResult<Vec<PathBuf>> {
    let s = generate_synthetic(spec)?;
    prepare_out(out)?;
    let truth = SynthTruthFile { spec, truth: &s.truth };
    Ok(vec![
        write_file(out, "synthetic.csv", s.series.to_csv().as_bytes())?,
        write_file(out, "truth.json", &to_json(&truth, &out.join("truth.json"))?)?,
    ])
}

/// Writes `scalogram.csv` and `scalogram.svg`.
pub fn cmd_scalogram(cfg: &RunConfig, scales: Option<Vec<f64>>) -> CliResult<Vec<PathBuf>> {
    let LoadedInput { series, .. } = load_input(cfg)?;
    let grid = match scales {
        Some(s) => ScaleGrid::new(s, (1..=series.len()).collect())?,
        None => ScaleGrid::default_for(series.len()),
    };
    let m = cwt_quadrature(&series, &grid)?;
    prepare_out(&cfg.out)?;
    Ok(vec![
        write_file(&cfg.out, "scalogram.csv", m.to_csv().as_bytes())?,
        write_file(&cfg.out, "scalogram.svg", render_heatmap_svg(&m)?.as_bytes())?,
    ])
}
