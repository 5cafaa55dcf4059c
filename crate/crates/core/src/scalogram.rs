//! Continuous Haar wavelet transform over a scale x translation grid and its
//! heatmap rendering.
//!
//! Each monthly sample is treated as constant over its month, `f(t) = v_i`
//! for `t` in `[i, i + 1)`, and integrated exactly against the analytic Haar
//! wavelet (+1 on `[0, 1/2)`, -1 on `[1/2, 1)`):
//!
//! `W(a, b) = a^{-1/2} * (int_b^{b+a/2} f - int_{b+a/2}^{b+a} f)`.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::RainfallSeries;

pub const DEFAULT_SCALES: [f64; 5] = [1.0, 2.0, 4.0, 8.0, 16.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleGrid {
    /// Scales in months, ascending.
    pub scales: Vec<f64>,
    /// 1-based month indices.
    pub translations: Vec<usize>,
}

impl ScaleGrid {
    pub fn new(scales: Vec<f64>, translations: Vec<usize>) -> Result<Self> {
        if scales.is_empty() || translations.is_empty() {
            return Err(Error::InvalidParameter("scale grid must be nonempty".into()));
        }
        if scales.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
            return Err(Error::InvalidParameter("scales must be positive".into()));
        }
        if scales.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidParameter("scales must be strictly ascending".into()));
        }
        if translations.contains(&0) {
            return Err(Error::InvalidParameter("translations are 1-based".into()));
        }
        Ok(Self { scales, translations })
    }

    /// Dyadic scales 1..16 months at every month of a length-`n` series.
    pub fn default_for(n: usize) -> Self {
        Self {
            scales: DEFAULT_SCALES.to_vec(),
            translations: (1..=n).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalogramMatrix {
    /// `values[scale][translation]`.
    pub values: Vec<Vec<f64>>,
    /// Cells whose wavelet support runs past the end of the series and were
    /// integrated over the truncated support.
    pub edge: Vec<Vec<bool>>,
    pub grid: ScaleGrid,
    pub wavelet: String,
}

impl ScalogramMatrix {
    /// Mean |W| per scale over cells whose support lies inside the series.
    pub fn interior_mean_abs(&self) -> Vec<Option<f64>> {
        self.values
            .iter()
            .zip(&self.edge)
            .map(|(row, edge)| {
                let inside: Vec<f64> = row
                    .iter()
                    .zip(edge)
                    .filter(|(_, e)| !**e)
                    .map(|(v, _)| v.abs())
                    .collect();
                if inside.is_empty() {
                    None
                } else {
                    Some(inside.iter().sum::<f64>() / inside.len() as f64)
                }
            })
            .collect()
    }

    /// Rows are scales, columns translations.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("scale");
        for b in &self.grid.translations {
            let _ = write!(out, ",{b}");
        }
        out.push('\n');
        for (a, row) in self.grid.scales.iter().zip(&self.values) {
            let _ = write!(out, "{a}");
            for v in row {
                let _ = write!(out, ",{v}");
            }
            out.push('\n');
        }
        out
    }
}

/// Running integral of the month-wise constant signal from t = 1.
struct StepIntegral {
    prefix: Vec<f64>,
    values: Vec<f64>,
}

impl StepIntegral {
    fn new(values: &[f64]) -> Self {
        let mut prefix = Vec::with_capacity(values.len() + 1);
        prefix.push(0.0);
        for v in values {
            prefix.push(prefix.last().unwrap() + v);
        }
        Self {
            prefix,
            values: values.to_vec(),
        }
    }

    fn at(&self, t: f64) -> f64 {
        let n = self.values.len();
        if t <= 1.0 {
            return 0.0;
        }
        if t >= (n + 1) as f64 {
            return self.prefix[n];
        }
        let cell = t.floor();
        let k = cell as usize;
        self.prefix[k - 1] + self.values[k - 1] * (t - cell)
    }
}

pub fn cwt_quadrature(series: &RainfallSeries, grid: &ScaleGrid) -> Result<ScalogramMatrix> {
    let values = series.dense()?;
    cwt_values(&values, grid)
}

/// As [`cwt_quadrature`] on a bare sample vector.
pub fn cwt_values(values: &[f64], grid: &ScaleGrid) -> Result<ScalogramMatrix> {
    let n = values.len();
    if n == 0 {
        return Err(Error::EmptyInput);
    }
    if let Some(a) = grid.scales.iter().find(|a| **a < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "scale {a} is below the one-month sampling interval"
        )));
    }
    if let Some(b) = grid.translations.iter().find(|b| **b == 0 || **b > n) {
        return Err(Error::OutOfRange {
            what: "translation",
            value: *b as i64,
            min: 1,
            max: n as i64,
        });
    }
    let integral = StepIntegral::new(values);
    let end = (n + 1) as f64;
    let mut rows = Vec::with_capacity(grid.scales.len());
    let mut edges = Vec::with_capacity(grid.scales.len());
    for &a in &grid.scales {
        let norm = a.sqrt().recip();
        let mut row = Vec::with_capacity(grid.translations.len());
        let mut edge = Vec::with_capacity(grid.translations.len());
        for &b in &grid.translations {
            let b = b as f64;
            let mid = integral.at(b + 0.5 * a);
            let w = norm * (2.0 * mid - integral.at(b) - integral.at(b + a));
            row.push(w);
            edge.push(b + a > end);
        }
        rows.push(row);
        edges.push(edge);
    }
    Ok(ScalogramMatrix {
        values: rows,
        edge: edges,
        grid: grid.clone(),
        wavelet: "haar-analytic".into(),
    })
}

const PLOT_WIDTH: f64 = 800.0;
const ROW_HEIGHT: f64 = 24.0;
const MARGIN_LEFT: f64 = 90.0;
const MARGIN_TOP: f64 = 30.0;
const MARGIN_BOTTOM: f64 = 40.0;

/// Grayscale heatmap, black = smallest |W|, white = largest. Translations run
/// along x, scales (smallest on top) along y.
pub fn render_heatmap_svg(m: &ScalogramMatrix) -> Result<String> {
    let rows = m.values.len();
    let cols = m.values.first().map_or(0, Vec::len);
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParameter("scalogram matrix is empty".into()));
    }
    for (i, row) in m.values.iter().enumerate() {
        if row.len() != cols {
            return Err(Error::LengthMismatch(format!(
                "row {i} has {} cells, expected {cols}",
                row.len()
            )));
        }
        if let Some(j) = row.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("scalogram cell ({i}, {j})")));
        }
    }
    let peak = m.values.iter().flatten().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let cell_w = PLOT_WIDTH / cols as f64;
    let plot_h = ROW_HEIGHT * rows as f64;
    let width = MARGIN_LEFT + PLOT_WIDTH + 20.0;
    let height = MARGIN_TOP + plot_h + MARGIN_BOTTOM;

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}">"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="18" font-family="sans-serif" font-size="13" text-anchor="middle">|W(a,b)| ({})</text>"#,
        MARGIN_LEFT + PLOT_WIDTH / 2.0,
        m.wavelet
    );
    for (i, row) in m.values.iter().enumerate() {
        let y = MARGIN_TOP + ROW_HEIGHT * i as f64;
        for (j, v) in row.iter().enumerate() {
            let level = if peak > 0.0 {
                (v.abs() / peak * 255.0).round() as u8
            } else {
                0
            };
            let _ = writeln!(
                svg,
                r##"<rect class="cell" data-row="{i}" data-col="{j}" x="{:.3}" y="{y:.1}" width="{:.3}" height="{ROW_HEIGHT:.1}" fill="#{level:02x}{level:02x}{level:02x}"/>"##,
                MARGIN_LEFT + cell_w * j as f64,
                cell_w
            );
        }
        let a = m.grid.scales[i];
        let _ = writeln!(
            svg,
            r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="end">a={a} (log2 {:.2})</text>"#,
            MARGIN_LEFT - 6.0,
            y + ROW_HEIGHT * 0.65,
            a.log2()
        );
    }
    let axis_y = MARGIN_TOP + plot_h;
    let _ = writeln!(
        svg,
        r#"<line x1="{MARGIN_LEFT:.1}" y1="{axis_y:.1}" x2="{:.1}" y2="{axis_y:.1}" stroke="black"/>"#,
        MARGIN_LEFT + PLOT_WIDTH
    );
    let step = (cols / 12).max(1);
    for j in (0..cols).step_by(step) {
        let x = MARGIN_LEFT + cell_w * (j as f64 + 0.5);
        let _ = writeln!(
            svg,
            r#"<text x="{x:.1}" y="{:.1}" font-family="sans-serif" font-size="10" text-anchor="middle">{}</text>"#,
            axis_y + 14.0,
            m.grid.translations[j]
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{:.1}" y="{:.1}" font-family="sans-serif" font-size="11" text-anchor="middle">translation b (month)</text>"#,
        MARGIN_LEFT + PLOT_WIDTH / 2.0,
        axis_y + 32.0
    );
    svg.push_str("</svg>\n");
    Ok(svg)
}
