use std::f64::consts::TAU;

use memad_core::Frame;
use memad_signal::{bandpass, peak_bpm, periodogram, pulse_pipeline, Band, TimeSeries};
use memad_video::{synth, SceneKind, SceneSpec, SplitMix64};
use proptest::prelude::*;

/// Textbook O(N^2) DFT, independent of the FFT path.
fn naive_dft(xs: &[f64]) -> Vec<(f64, f64)> {
    let n = xs.len();
    (0..n)
        .map(|k| {
            xs.iter().enumerate().fold((0.0, 0.0), |(re, im), (t, &x)| {
                let ph = -TAU * ((k * t) % n) as f64 / n as f64;
                (re + x * ph.cos(), im + x * ph.sin())
            })
        })
        .collect()
}

fn close(a: &[f64], b: &[f64], rel: f64) -> bool {
    let scale = a.iter().chain(b).fold(1e-300f64, |m, x| m.max(x.abs()));
    a.iter().zip(b).all(|(x, y)| (x - y).abs() <= rel * scale)
}

fn series_strategy() -> impl Strategy<Value = TimeSeries> {
    (prop::collection::vec(-100.0f64..100.0, 8..400), prop::sample::select(vec![10.0, 25.0, 30.0, 60.0]))
        .prop_map(|(xs, fs)| TimeSeries::new(xs, fs).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bandpass_is_idempotent(s in series_strategy()) {
        let once = bandpass(&s, 0.2, 3.0).unwrap();
        let twice = bandpass(&once, 0.2, 3.0).unwrap();
        prop_assert!(close(once.samples(), twice.samples(), 1e-9));
    }

    #[test]
    fn bandpass_is_linear(s in series_strategy(), seed in any::<u64>(), a in -5.0f64..5.0, b in -5.0f64..5.0) {
        let mut rng = SplitMix64::new(seed);
        let y: Vec<f64> = (0..s.len()).map(|_| 100.0 * rng.next_gaussian()).collect();
        let y = TimeSeries::new(y, s.fs()).unwrap();
        let mix: Vec<f64> = s.samples().iter().zip(y.samples()).map(|(p, q)| a * p + b * q).collect();
        let lhs = bandpass(&TimeSeries::new(mix, s.fs()).unwrap(), 0.2, 3.0).unwrap();
        let fx = bandpass(&s, 0.2, 3.0).unwrap();
        let fy = bandpass(&y, 0.2, 3.0).unwrap();
        let rhs: Vec<f64> = fx.samples().iter().zip(fy.samples()).map(|(p, q)| a * p + b * q).collect();
        prop_assert!(close(lhs.samples(), &rhs, 1e-9));
    }

    #[test]
    fn parseval(s in series_strategy()) {
        let n = s.len() as f64;
        let mean = s.samples().iter().sum::<f64>() / n;
        let energy: f64 = s.samples().iter().map(|x| (x - mean).powi(2)).sum();
        let p = periodogram(&s).unwrap();
        // Two-sided power sum / N against mean-removed energy / N (the variance).
        let total = p.total_power() / n;
        prop_assert!((total - energy / n).abs() <= 1e-6 * (energy / n).max(1e-12));
    }

    #[test]
    fn periodogram_matches_naive_dft(s in series_strategy()) {
        let n = s.len();
        let mean = s.samples().iter().sum::<f64>() / n as f64;
        let centred: Vec<f64> = s.samples().iter().map(|x| x - mean).collect();
        let expected: Vec<f64> = naive_dft(&centred)[..n / 2 + 1]
            .iter()
            .map(|(re, im)| (re * re + im * im) / n as f64)
            .collect();
        prop_assert!(close(periodogram(&s).unwrap().power(), &expected, 1e-9));
    }

    #[test]
    fn bandpass_matches_naive_mask(s in series_strategy()) {
        // Rebuild the masked signal from the naive DFT by direct synthesis.
        let n = s.len();
        let df = s.fs() / n as f64;
        let x = naive_dft(s.samples());
        let keep = |k: usize| {
            let f = k.min(n - k) as f64 * df;
            k != 0 && (0.2 - 1e-12..=3.0 + 1e-12).contains(&f)
        };
        let expected: Vec<f64> = (0..n)
            .map(|t| {
                (0..n).filter(|&k| keep(k)).map(|k| {
                    let ph = TAU * ((k * t) % n) as f64 / n as f64;
                    x[k].0 * ph.cos() - x[k].1 * ph.sin()
                }).sum::<f64>() / n as f64
            })
            .collect();
        prop_assert!(close(bandpass(&s, 0.2, 3.0).unwrap().samples(), &expected, 1e-9));
    }

    #[test]
    fn peak_is_scale_invariant(s in series_strategy(), scale in 1e-6f64..1e6) {
        let p = periodogram(&s).unwrap();
        let scaled = p.clone().with_power(p.power().iter().map(|v| v * scale).collect());
        let hi = s.fs() / 2.0;
        prop_assert_eq!(
            peak_bpm(&p, 0.0, hi).unwrap().peak_hz,
            peak_bpm(&scaled, 0.0, hi).unwrap().peak_hz
        );
    }

    #[test]
    fn on_bin_frequency_is_recovered_exactly(k in 12usize..=180, phase in 0.0f64..TAU, amp in 0.5f64..20.0) {
        // 60 s at 30 fps; bins 12..=180 span 0.2..=3 Hz.
        let n = 1800;
        let f = k as f64 / 60.0;
        let xs = (0..n).map(|t| amp * (TAU * f * t as f64 / 30.0 + phase).sin() + 5.0).collect();
        let s = TimeSeries::new(xs, 30.0).unwrap();
        let r = peak_bpm(&periodogram(&bandpass(&s, 0.2, 3.0).unwrap()).unwrap(), 0.2, 3.0).unwrap();
        prop_assert_eq!(r.peak_hz, k as f64 * 30.0 / n as f64);
    }
}

#[test]
fn white_noise_power_equals_variance() {
    let mut rng = SplitMix64::new(2024);
    let xs: Vec<f64> = (0..4096).map(|_| 3.0 * rng.next_gaussian() + 1.0).collect();
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let variance = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let p = periodogram(&TimeSeries::new(xs, 30.0).unwrap()).unwrap();
    assert!((p.total_power() / n - variance).abs() <= 1e-6 * variance);
}

fn pulse_frames(freq_hz: f64) -> Vec<Frame> {
    let spec = SceneSpec {
        kind: SceneKind::Pulse {
            base: 128.0,
            amplitude: 2.0,
            freq_hz,
            noise_sigma: 1.0,
        },
        width: 32,
        height: 24,
        fps: 30,
        duration_s: 60.0,
        seed: 42,
    };
    synth(spec).unwrap().map(Result::unwrap).collect()
}

#[test]
fn pipeline_recovers_72_bpm() {
    let r = pulse_pipeline(&pulse_frames(1.2), 30.0, Band::default()).unwrap();
    assert!((r.bpm - 72.0).abs() <= 1.0, "{r:?}");
    assert!(!r.low_confidence);
}

#[test]
fn pipeline_recovers_60_bpm() {
    let r = pulse_pipeline(&pulse_frames(1.0), 30.0, Band::default()).unwrap();
    assert!((r.bpm - 60.0).abs() <= 1.0, "{r:?}");
}

#[test]
fn pipeline_on_constant_scene_is_low_confidence() {
    let spec = SceneSpec {
        kind: SceneKind::Constant { value: 128 },
        width: 8,
        height: 8,
        fps: 30,
        duration_s: 10.0,
        seed: 0,
    };
    let frames: Vec<Frame> = synth(spec).unwrap().map(Result::unwrap).collect();
    let r = pulse_pipeline(&frames, 30.0, Band::default()).unwrap();
    assert!(r.low_confidence);
    assert_eq!(r.peak_power, 0.0);
}
