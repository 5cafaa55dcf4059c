use std::f64::consts::PI;

use proptest::prelude::*;
use wpd_core::dwt::{make_filter, reconstruct_component, wavedec, BoundaryMode, Component, WaveletKind};
use wpd_core::period::{
    band_for_level, classify_pattern, climatology, detect_episodes, dominant_energy_level, generate_synthetic,
    repeat_interval, Aggregation, BandConvention, DipTrain, PeriodicComponent, RainfallPattern, SyntheticSpec,
    DEFAULT_DEPTH_FACTOR,
};
use wpd_core::scalogram::{cwt_values, ScaleGrid};
use wpd_core::series::{parse_csv, CsvSchema, MonthStamp, RainfallSeries};

fn start() -> MonthStamp {
    MonthStamp::new(1991, 1).unwrap()
}

fn spec(components: Vec<PeriodicComponent>, dips: Vec<DipTrain>, noise: f64, seed: u64) -> SyntheticSpec {
    SyntheticSpec {
        start: start(),
        length: 312,
        baseline: 300.0,
        components,
        dips,
        noise_sigma: noise,
        seed,
    }
}

fn cosine(period: f64, amplitude: f64) -> PeriodicComponent {
    PeriodicComponent {
        period,
        amplitude,
        phase: 0.0,
    }
}

/// Fraction of a unit cosine's energy that the Haar cascade sends to detail
/// level `j`, from the squared gains 2cos^2(pi f) and 2sin^2(pi f).
fn haar_energy_share(period: f64, j: u32) -> f64 {
    let f = 1.0 / period;
    let lo = |f: f64| 2.0 * (PI * f).cos().powi(2);
    let hi = |f: f64| 2.0 * (PI * f).sin().powi(2);
    let mut g = hi(2f64.powi(j as i32 - 1) * f);
    for i in 0..j - 1 {
        g *= lo(2f64.powi(i as i32) * f);
    }
    g / 2f64.powi(j as i32)
}

#[test]
fn dominant_level_follows_the_haar_gain() {
    let f = make_filter(WaveletKind::Haar).unwrap();
    for (p, want) in [(2.0, 1), (3.0, 1), (6.0, 2), (12.0, 3)] {
        let oracle = (1..=4u32)
            .max_by(|a, b| haar_energy_share(p, *a).total_cmp(&haar_energy_share(p, *b)))
            .unwrap() as usize;
        assert_eq!(oracle, want, "period {p}");
        let s = generate_synthetic(&spec(vec![cosine(p, 100.0)], vec![], 0.0, 0)).unwrap();
        let d = wavedec(&s.series.dense().unwrap(), &f, BoundaryMode::Periodic, 4).unwrap();
        assert_eq!(dominant_energy_level(&d), want, "period {p}");
    }
}

#[test]
fn level_energy_shares_match_the_gain_for_period_three() {
    // 312 is a multiple of 3 * 8, so the cosine is exactly periodic through level 3
    let f = make_filter(WaveletKind::Haar).unwrap();
    let s = generate_synthetic(&spec(vec![cosine(3.0, 100.0)], vec![], 0.0, 0)).unwrap();
    let x: Vec<f64> = s.series.dense().unwrap().iter().map(|v| v - 300.0).collect();
    let total: f64 = x.iter().map(|v| v * v).sum();
    let d = wavedec(&x, &f, BoundaryMode::Periodic, 3).unwrap();
    for j in 1..=3u32 {
        let share = d.detail_energy(j as usize).unwrap() / total;
        assert!((share - haar_energy_share(3.0, j)).abs() < 1e-9, "level {j}: {share}");
    }
}

#[test]
fn planted_dips_repeat_every_sixteen_months() {
    let f = make_filter(WaveletKind::Haar).unwrap();
    let band = band_for_level(2, BandConvention::Paper).unwrap();
    let dips = vec![DipTrain {
        first: 5,
        every: 16,
        width: 3,
        depth: 150.0,
    }];
    let s = generate_synthetic(&spec(vec![], dips, 10.0, 11)).unwrap();
    let d = wavedec(&s.series.dense().unwrap(), &f, BoundaryMode::Periodic, 4).unwrap();
    let c = reconstruct_component(&d, Component::Detail(2)).unwrap();
    let eps = detect_episodes(&c, &band, &s.series, DEFAULT_DEPTH_FACTOR).unwrap();
    let starts: Vec<usize> = eps.iter().map(|e| e.start_index).collect();
    assert_eq!(repeat_interval(&starts), Some(16.0));
    let hit = s
        .truth
        .dip_windows
        .iter()
        .filter(|w| starts.iter().any(|s| s.abs_diff(w[0]) <= 1))
        .count();
    assert!(
        hit * 10 >= s.truth.dip_windows.len() * 9,
        "{hit} of {}",
        s.truth.dip_windows.len()
    );
}

#[test]
fn bimodal_and_unimodal_profiles() {
    let two = generate_synthetic(&spec(vec![cosine(6.0, 80.0)], vec![], 10.0, 3)).unwrap();
    let p = climatology(&two.series, Aggregation::Median).unwrap();
    assert_eq!(p.peak_months, vec![6, 12]);
    assert_eq!(classify_pattern(&p), RainfallPattern::EquatorialBimodal);

    let one = generate_synthetic(&spec(vec![cosine(12.0, 80.0)], vec![], 10.0, 3)).unwrap();
    let p = climatology(&one.series, Aggregation::Median).unwrap();
    assert_eq!(p.peak_months, vec![12]);
    assert_eq!(classify_pattern(&p), RainfallPattern::MonsoonalUnimodal);
}

#[test]
fn scalogram_peak_scale_grows_with_period() {
    let grid = ScaleGrid::default_for(312);
    let mut last = 0usize;
    for p in [2.0, 3.0, 6.0, 12.0] {
        let s = generate_synthetic(&spec(vec![cosine(p, 100.0)], vec![], 0.0, 0)).unwrap();
        let m = cwt_values(&s.series.dense().unwrap(), &grid).unwrap();
        let means = m.interior_mean_abs();
        let best = (0..means.len())
            .max_by(|a, b| means[*a].unwrap().total_cmp(&means[*b].unwrap()))
            .unwrap();
        assert!(best >= last, "period {p}: scale index {best} after {last}");
        last = best;
    }
}

#[test]
fn scalogram_ignores_constants() {
    let grid = ScaleGrid::default_for(120);
    let m = cwt_values(&[250.0; 120], &grid).unwrap();
    for (row, edge) in m.values.iter().zip(&m.edge) {
        for (v, e) in row.iter().zip(edge) {
            if !e {
                assert!(v.abs() < 1e-9);
            }
        }
    }
}

proptest! {
    #[test]
    fn scalogram_is_linear(
        pair in (16usize..120).prop_flat_map(|n| (
            prop::collection::vec(-50.0f64..50.0, n),
            prop::collection::vec(-50.0f64..50.0, n),
        )),
        alpha in -2.0f64..2.0,
    ) {
        let (x, y) = pair;
        let grid = ScaleGrid::default_for(x.len());
        let z: Vec<f64> = x.iter().zip(&y).map(|(a, b)| alpha * a + b).collect();
        let mx = cwt_values(&x, &grid).unwrap();
        let my = cwt_values(&y, &grid).unwrap();
        let mz = cwt_values(&z, &grid).unwrap();
        for i in 0..mz.values.len() {
            for j in 0..mz.values[i].len() {
                let want = alpha * mx.values[i][j] + my.values[i][j];
                prop_assert!((mz.values[i][j] - want).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn csv_round_trip(
        values in prop::collection::vec(prop::option::weighted(0.9, 0.0f64..2000.0), 1..200),
        year in 1900i32..2100,
        month in 1u8..=12,
    ) {
        prop_assume!(values.first().is_some_and(|v| v.is_some()) && values.last().is_some_and(|v| v.is_some()));
        let s = RainfallSeries::new(MonthStamp::new(year, month).unwrap(), values).unwrap();
        let back = parse_csv(&s.to_csv(), &CsvSchema::default()).unwrap();
        prop_assert_eq!(back, s);
    }
}
