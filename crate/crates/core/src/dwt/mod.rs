//! Multilevel discrete wavelet decomposition and reconstruction.
//!
//! Conventions:
//! - Analysis output `k` takes samples `x[2k], x[2k+1], ...` (causal phase),
//!   so Haar gives `a = (x0 + x1)/sqrt2`, `d = (x0 - x1)/sqrt2`.
//! - An odd-length input to any analysis step is right-padded by repeating
//!   its last sample; the pre-pad length is kept so reconstruction truncates
//!   exactly.
//! - `Periodic` wraps indices and is orthogonal (Parseval holds on the padded
//!   input). `Symmetric` reflects about the half-sample points and emits
//!   `len/2 + taps/2 - 1` coefficients per branch, enough to invert exactly.

mod filter;

pub use filter::{check_admissibility, filter_by_name, make_filter, WaveletFilter, WaveletKind};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryMode {
    #[default]
    Periodic,
    #[serde(alias = "symmetric")]
    SymmetricReflect,
}

impl BoundaryMode {
    pub fn name(self) -> &'static str {
        match self {
            BoundaryMode::Periodic => "periodic",
            BoundaryMode::SymmetricReflect => "symmetric-reflect",
        }
    }
}

impl std::str::FromStr for BoundaryMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "periodic" | "per" => Ok(BoundaryMode::Periodic),
            "symmetric" | "symmetric-reflect" | "sym" => Ok(BoundaryMode::SymmetricReflect),
            _ => Err(Error::InvalidParameter(format!("unknown boundary mode {s:?}"))),
        }
    }
}

/// Number of coefficients per branch produced from an input of length `len`.
pub fn coefficient_len(len: usize, filter_len: usize, boundary: BoundaryMode) -> usize {
    let half = len.div_ceil(2);
    match boundary {
        BoundaryMode::Periodic => half,
        BoundaryMode::SymmetricReflect => half + filter_len / 2 - 1,
    }
}

/// Index into a half-sample symmetric extension of a length-`n` signal.
fn reflect(idx: isize, n: usize) -> usize {
    let period = 2 * n as isize;
    let m = idx.rem_euclid(period) as usize;
    if m >= n {
        2 * n - 1 - m
    } else {
        m
    }
}

fn pad_even(x: &[f64]) -> Vec<f64> {
    let mut v = x.to_vec();
    if v.len() % 2 == 1 {
        v.push(*x.last().expect("non-empty input"));
    }
    v
}

/// One analysis stage: filter with `dec_lo`/`dec_hi` and keep every second
/// output.
pub fn dwt_step(x: &[f64], filter: &WaveletFilter, boundary: BoundaryMode) -> Result<(Vec<f64>, Vec<f64>)> {
    let taps = filter.len();
    if x.len() < taps || x.is_empty() {
        return Err(Error::SignalTooShort {
            len: x.len(),
            filter_len: taps,
        });
    }
    let x = pad_even(x);
    let n = x.len();
    let count = coefficient_len(n, taps, boundary);
    let mut approx = Vec::with_capacity(count);
    let mut detail = Vec::with_capacity(count);
    let offset = match boundary {
        BoundaryMode::Periodic => 0,
        BoundaryMode::SymmetricReflect => (taps / 2 - 1) as isize,
    };
    for slot in 0..count {
        let base = 2 * (slot as isize - offset);
        let (mut a, mut d) = (0.0, 0.0);
        for i in 0..taps {
            let pos = base + i as isize;
            let sample = match boundary {
                BoundaryMode::Periodic => x[pos.rem_euclid(n as isize) as usize],
                BoundaryMode::SymmetricReflect => x[reflect(pos, n)],
            };
            a += filter.dec_lo[i] * sample;
            d += filter.dec_hi[i] * sample;
        }
        approx.push(a);
        detail.push(d);
    }
    Ok((approx, detail))
}

/// One synthesis stage, inverse of [`dwt_step`]; the result is cut to
/// `out_len`, the pre-padding length of the analysed input.
pub fn idwt_step(
    approx: &[f64],
    detail: &[f64],
    filter: &WaveletFilter,
    boundary: BoundaryMode,
    out_len: usize,
) -> Result<Vec<f64>> {
    if approx.len() != detail.len() {
        return Err(Error::LengthMismatch(format!(
            "approximation has {} coefficients, detail has {}",
            approx.len(),
            detail.len()
        )));
    }
    let taps = filter.len();
    let offset = match boundary {
        BoundaryMode::Periodic => 0,
        BoundaryMode::SymmetricReflect => taps / 2 - 1,
    };
    if approx.len() <= offset {
        return Err(Error::LengthMismatch(format!(
            "{} coefficients cannot carry a {}-tap symmetric stage",
            approx.len(),
            taps
        )));
    }
    let n = 2 * (approx.len() - offset);
    if out_len != n && out_len + 1 != n {
        return Err(Error::LengthMismatch(format!(
            "output length {out_len} incompatible with {} coefficients",
            approx.len()
        )));
    }
    let mut out = vec![0.0; n];
    for (slot, (&a, &d)) in approx.iter().zip(detail).enumerate() {
        let base = 2 * (slot as isize - offset as isize);
        for i in 0..taps {
            let pos = base + i as isize;
            let idx = match boundary {
                BoundaryMode::Periodic => pos.rem_euclid(n as isize) as usize,
                BoundaryMode::SymmetricReflect => {
                    if pos < 0 || pos >= n as isize {
                        continue;
                    }
                    pos as usize
                }
            };
            out[idx] += filter.rec_lo[i] * a + filter.rec_hi[i] * d;
        }
    }
    out.truncate(out_len);
    Ok(out)
}

/// Deepest decomposition level for a signal of length `n`:
/// the largest `J` with `n >= (taps - 1) * 2^J`, and at least 1.
pub fn max_level(n: usize, filter: &WaveletFilter) -> Result<usize> {
    let taps = filter.len();
    if n < taps {
        return Err(Error::SignalTooShort {
            len: n,
            filter_len: taps,
        });
    }
    let base = taps - 1;
    let mut level = 0;
    while base << (level + 1) <= n {
        level += 1;
    }
    Ok(level.max(1))
}

/// Approximation at depth J plus detail vectors for levels 1 (finest) ..= J.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DecompositionFile", into = "DecompositionFile")]
pub struct Decomposition {
    filter: WaveletFilter,
    boundary: BoundaryMode,
    approx: Vec<f64>,
    details: Vec<Vec<f64>>,
    lengths: Vec<usize>,
}

impl Decomposition {
    /// Assembles a decomposition from parts, checking the length bookkeeping.
    pub fn from_parts(
        filter: WaveletFilter,
        boundary: BoundaryMode,
        approx: Vec<f64>,
        details: Vec<Vec<f64>>,
        lengths: Vec<usize>,
    ) -> Result<Self> {
        let d = Self {
            filter,
            boundary,
            approx,
            details,
            lengths,
        };
        d.check()?;
        Ok(d)
    }

    fn check(&self) -> Result<()> {
        let corrupt = |msg: String| Err(Error::CorruptDecomposition(msg));
        let depth = self.details.len();
        if depth == 0 {
            return corrupt("depth must be at least 1".into());
        }
        if self.lengths.len() != depth {
            return corrupt(format!("{} recorded lengths for depth {depth}", self.lengths.len()));
        }
        for level in 0..depth {
            let want = coefficient_len(self.lengths[level], self.filter.len(), self.boundary);
            if self.details[level].len() != want {
                return corrupt(format!(
                    "level {} has {} detail coefficients, expected {want}",
                    level + 1,
                    self.details[level].len()
                ));
            }
            let next = if level + 1 < depth {
                self.lengths[level + 1]
            } else {
                self.approx.len()
            };
            if next != want {
                return corrupt(format!(
                    "level {} approximation length {next}, expected {want}",
                    level + 1
                ));
            }
        }
        Ok(())
    }

    pub fn filter(&self) -> &WaveletFilter {
        &self.filter
    }

    pub fn boundary(&self) -> BoundaryMode {
        self.boundary
    }

    pub fn depth(&self) -> usize {
        self.details.len()
    }

    pub fn original_length(&self) -> usize {
        self.lengths[0]
    }

    /// Pre-padding input length of each analysis stage, level 1 first.
    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn approx(&self) -> &[f64] {
        &self.approx
    }

    pub fn approx_mut(&mut self) -> &mut [f64] {
        &mut self.approx
    }

    pub fn details(&self) -> &[Vec<f64>] {
        &self.details
    }

    /// Detail coefficients of 1-based `level`.
    pub fn detail(&self, level: usize) -> Result<&[f64]> {
        self.check_level(level)?;
        Ok(&self.details[level - 1])
    }

    pub fn detail_mut(&mut self, level: usize) -> Result<&mut [f64]> {
        self.check_level(level)?;
        Ok(&mut self.details[level - 1])
    }

    fn check_level(&self, level: usize) -> Result<()> {
        if level == 0 || level > self.depth() {
            return Err(Error::OutOfRange {
                what: "level",
                value: level as i64,
                min: 1,
                max: self.depth() as i64,
            });
        }
        Ok(())
    }

    /// Sum of squared detail coefficients at 1-based `level`.
    pub fn detail_energy(&self, level: usize) -> Result<f64> {
        Ok(self.detail(level)?.iter().map(|c| c * c).sum())
    }

    /// Total coefficient energy (approximation plus all details).
    pub fn energy(&self) -> f64 {
        self.approx
            .iter()
            .chain(self.details.iter().flatten())
            .map(|c| c * c)
            .sum()
    }

    /// A copy with every coefficient set to zero.
    fn zeroed(&self) -> Self {
        let mut d = self.clone();
        d.approx.iter_mut().for_each(|c| *c = 0.0);
        d.details.iter_mut().flatten().for_each(|c| *c = 0.0);
        d
    }
}

/// Wire form of [`Decomposition`].
#[derive(Serialize, Deserialize)]
struct DecompositionFile {
    filter: WaveletKind,
    boundary: BoundaryMode,
    depth: usize,
    original_length: usize,
    lengths: Vec<usize>,
    approx: Vec<f64>,
    details: Vec<Vec<f64>>,
}

impl From<Decomposition> for DecompositionFile {
    fn from(d: Decomposition) -> Self {
        Self {
            filter: d.filter.kind(),
            boundary: d.boundary,
            depth: d.details.len(),
            original_length: d.lengths[0],
            lengths: d.lengths,
            approx: d.approx,
            details: d.details,
        }
    }
}

impl TryFrom<DecompositionFile> for Decomposition {
    type Error = Error;

    fn try_from(f: DecompositionFile) -> Result<Self> {
        if f.depth != f.details.len() {
            return Err(Error::CorruptDecomposition(format!(
                "depth {} but {} detail levels",
                f.depth,
                f.details.len()
            )));
        }
        if f.lengths.first() != Some(&f.original_length) {
            return Err(Error::CorruptDecomposition(
                "original_length disagrees with lengths".into(),
            ));
        }
        Decomposition::from_parts(make_filter(f.filter)?, f.boundary, f.approx, f.details, f.lengths)
    }
}

/// J-level cascade of [`dwt_step`] on successive approximations.
pub fn wavedec(x: &[f64], filter: &WaveletFilter, boundary: BoundaryMode, levels: usize) -> Result<Decomposition> {
    let max = max_level(x.len(), filter)?;
    if levels == 0 || levels > max {
        return Err(Error::OutOfRange {
            what: "decomposition depth",
            value: levels as i64,
            min: 1,
            max: max as i64,
        });
    }
    let mut approx = x.to_vec();
    let mut details = Vec::with_capacity(levels);
    let mut lengths = Vec::with_capacity(levels);
    for _ in 0..levels {
        lengths.push(approx.len());
        let (a, d) = dwt_step(&approx, filter, boundary)?;
        details.push(d);
        approx = a;
    }
    Ok(Decomposition {
        filter: filter.clone(),
        boundary,
        approx,
        details,
        lengths,
    })
}

/// Inverse of [`wavedec`]; returns a signal of the original length.
pub fn waverec(d: &Decomposition) -> Result<Vec<f64>> {
    d.check()?;
    let mut approx = d.approx.clone();
    for level in (0..d.depth()).rev() {
        approx = idwt_step(&approx, &d.details[level], &d.filter, d.boundary, d.lengths[level])?;
    }
    Ok(approx)
}

/// Which coefficient vector [`reconstruct_component`] keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    /// 1-based detail level.
    Detail(usize),
    Approx,
}

/// Inverse transform with every coefficient vector but `which` zeroed. The
/// components of a decomposition sum to its full reconstruction.
pub fn reconstruct_component(d: &Decomposition, which: Component) -> Result<Vec<f64>> {
    let mut only = d.zeroed();
    match which {
        Component::Approx => only.approx.copy_from_slice(&d.approx),
        Component::Detail(level) => {
            d.check_level(level)?;
            only.details[level - 1].copy_from_slice(&d.details[level - 1]);
        }
    }
    waverec(&only)
}
