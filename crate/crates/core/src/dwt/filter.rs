//! Orthonormal Daubechies filter pairs (Haar = order 1).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const INVARIANT_TOL: f64 = 1e-12;

const HAAR: [f64; 2] = [std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2];

#[allow(clippy::excessive_precision)]
const DB2: [f64; 4] = [
    0.482_962_913_144_534_14,
    0.836_516_303_737_807_9,
    0.224_143_868_042_013_38,
    -0.129_409_522_551_260_38,
];

#[allow(clippy::excessive_precision)]
const DB3: [f64; 6] = [
    0.332_670_552_950_082_6,
    0.806_891_509_311_092_6,
    0.459_877_502_118_491_57,
    -0.135_011_020_010_254_59,
    -0.085_441_273_882_026_66,
    0.035_226_291_885_709_537,
];

#[allow(clippy::excessive_precision)]
const DB4: [f64; 8] = [
    0.230_377_813_308_896_5,
    0.714_846_570_552_915_6,
    0.630_880_767_929_858_9,
    -0.027_983_769_416_859_854,
    -0.187_034_811_719_093_08,
    0.030_841_381_835_560_764,
    0.032_883_011_666_885_2,
    -0.010_597_401_785_069_032,
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WaveletKind {
    Haar,
    Db2,
    Db3,
    Db4,
}

impl WaveletKind {
    pub const ALL: [WaveletKind; 4] = [WaveletKind::Haar, WaveletKind::Db2, WaveletKind::Db3, WaveletKind::Db4];

    pub fn name(self) -> &'static str {
        match self {
            WaveletKind::Haar => "haar",
            WaveletKind::Db2 => "db2",
            WaveletKind::Db3 => "db3",
            WaveletKind::Db4 => "db4",
        }
    }

    fn scaling_taps(self) -> &'static [f64] {
        match self {
            WaveletKind::Haar => &HAAR,
            WaveletKind::Db2 => &DB2,
            WaveletKind::Db3 => &DB3,
            WaveletKind::Db4 => &DB4,
        }
    }
}

impl fmt::Display for WaveletKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for WaveletKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "haar" | "db1" => Ok(WaveletKind::Haar),
            "db2" => Ok(WaveletKind::Db2),
            "db3" => Ok(WaveletKind::Db3),
            "db4" => Ok(WaveletKind::Db4),
            _ => Err(Error::UnknownWavelet(s.to_string())),
        }
    }
}

/// Analysis and synthesis taps of an orthonormal two-channel filter bank.
///
/// Analysis is a correlation: output `k` combines `x[2k], x[2k+1], ...` with
/// `dec_lo`/`dec_hi`. Synthesis is the adjoint of that operator, so for an
/// orthonormal bank the synthesis taps equal the analysis taps.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletFilter {
    kind: WaveletKind,
    pub dec_lo: Vec<f64>,
    pub dec_hi: Vec<f64>,
    pub rec_lo: Vec<f64>,
    pub rec_hi: Vec<f64>,
}

impl WaveletFilter {
    pub fn kind(&self) -> WaveletKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    pub fn len(&self) -> usize {
        self.dec_lo.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dec_lo.is_empty()
    }

    /// Checks sum, norm, double-shift orthogonality and the quadrature
    /// mirror relation at 1e-12.
    pub fn validate(&self) -> Result<()> {
        let name = self.name();
        let fail = |reason: String| Err(Error::FilterInvariant { name, reason });
        let l = self.len();
        if l == 0 || !l.is_multiple_of(2) {
            return fail(format!("length {l} is not a positive even number"));
        }
        let sum_lo: f64 = self.dec_lo.iter().sum();
        if (sum_lo - std::f64::consts::SQRT_2).abs() > INVARIANT_TOL {
            return fail(format!("sum(dec_lo) = {sum_lo}, expected sqrt(2)"));
        }
        let sum_hi: f64 = self.dec_hi.iter().sum();
        if sum_hi.abs() > INVARIANT_TOL {
            return fail(format!("sum(dec_hi) = {sum_hi}, expected 0"));
        }
        for shift in (0..l).step_by(2) {
            let dot: f64 = (0..l - shift).map(|k| self.dec_lo[k] * self.dec_lo[k + shift]).sum();
            let want = if shift == 0 { 1.0 } else { 0.0 };
            if (dot - want).abs() > INVARIANT_TOL {
                return fail(format!("lag-{shift} autocorrelation {dot}, expected {want}"));
            }
        }
        for k in 0..l {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            if self.dec_hi[k] != sign * self.dec_lo[l - 1 - k] {
                return fail(format!("dec_hi[{k}] breaks the quadrature mirror relation"));
            }
        }
        Ok(())
    }
}

/// Builds the filter bank for `kind` and validates it.
pub fn make_filter(kind: WaveletKind) -> Result<WaveletFilter> {
    let dec_lo = kind.scaling_taps().to_vec();
    let l = dec_lo.len();
    let dec_hi: Vec<f64> = (0..l)
        .map(|k| {
            if k % 2 == 0 {
                dec_lo[l - 1 - k]
            } else {
                -dec_lo[l - 1 - k]
            }
        })
        .collect();
    let filter = WaveletFilter {
        kind,
        rec_lo: dec_lo.clone(),
        rec_hi: dec_hi.clone(),
        dec_lo,
        dec_hi,
    };
    filter.validate()?;
    Ok(filter)
}

/// Builds a filter by name (`haar`, `db1`..`db4`).
pub fn filter_by_name(name: &str) -> Result<WaveletFilter> {
    make_filter(name.parse()?)
}

/// Zero-mean residual `|sum(samples) * dx|` of a sampled wavelet.
pub fn check_admissibility(samples: &[f64], dx: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::EmptyInput);
    }
    if !(dx > 0.0 && dx.is_finite()) {
        return Err(Error::InvalidParameter(format!("step dx must be positive, got {dx}")));
    }
    if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite(format!("sample {i}")));
    }
    Ok((samples.iter().sum::<f64>() * dx).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn haar_taps() {
        let f = make_filter(WaveletKind::Haar).unwrap();
        assert_eq!(f.dec_lo, vec![FRAC_1_SQRT_2, FRAC_1_SQRT_2]);
        assert_eq!(f.dec_hi, vec![FRAC_1_SQRT_2, -FRAC_1_SQRT_2]);
        assert_eq!(f.dec_hi.iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn every_filter_passes_invariants() {
        for kind in WaveletKind::ALL {
            let f = make_filter(kind).unwrap();
            f.validate().unwrap();
            assert_eq!(f.len() % 2, 0);
        }
    }

    #[test]
    fn db2_matches_closed_form() {
        // (1 + sqrt3, 3 + sqrt3, 3 - sqrt3, 1 - sqrt3) / (4 sqrt2)
        let s3 = 3f64.sqrt();
        let d = 4.0 * 2f64.sqrt();
        let want = [(1.0 + s3) / d, (3.0 + s3) / d, (3.0 - s3) / d, (1.0 - s3) / d];
        let f = make_filter(WaveletKind::Db2).unwrap();
        for (a, b) in f.dec_lo.iter().zip(want) {
            assert!((a - b).abs() < 1e-15, "{a} vs {b}");
        }
    }

    #[test]
    fn corrupted_filter_is_rejected() {
        let mut f = make_filter(WaveletKind::Db3).unwrap();
        f.dec_lo[2] += 1e-9;
        assert!(matches!(f.validate(), Err(Error::FilterInvariant { .. })));
    }

    #[test]
    fn names_parse() {
        assert_eq!("HAAR".parse::<WaveletKind>().unwrap(), WaveletKind::Haar);
        assert_eq!("db4".parse::<WaveletKind>().unwrap(), WaveletKind::Db4);
        assert!(matches!("sym4".parse::<WaveletKind>(), Err(Error::UnknownWavelet(_))));
    }

    #[test]
    fn admissibility_residuals() {
        let n = 1024;
        let dx = 1.0 / n as f64;
        let haar: Vec<f64> = (0..n).map(|i| if i < n / 2 { 1.0 } else { -1.0 }).collect();
        assert!(check_admissibility(&haar, dx).unwrap() < 1e-12);

        let ones = vec![1.0; n];
        assert_eq!(check_admissibility(&ones, dx).unwrap(), 1.0);

        let sine: Vec<f64> = (0..n)
            .map(|i| (2.0 * std::f64::consts::PI * i as f64 * dx).sin())
            .collect();
        assert!(check_admissibility(&sine, dx).unwrap() < 1e-3);

        assert_eq!(check_admissibility(&[], dx), Err(Error::EmptyInput));
        assert!(check_admissibility(&[1.0], 0.0).is_err());
    }
}
