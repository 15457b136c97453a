use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::{Result, SignalError, TimeSeries};

/// One-sided power spectrum: bin `k` sits at `k * fs / n` for
/// `k = 0..=n/2`, with power `|X[k]|^2 / n`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    freqs: Vec<f64>,
    power: Vec<f64>,
    fs: f64,
    n: usize,
}

impl Spectrum {
    pub fn freqs(&self) -> &[f64] {
        &self.freqs
    }

    pub fn power(&self) -> &[f64] {
        &self.power
    }

    pub fn fs(&self) -> f64 {
        self.fs
    }

    /// Length of the series the spectrum was computed from.
    pub fn series_len(&self) -> usize {
        self.n
    }

    pub fn resolution_hz(&self) -> f64 {
        self.fs / self.n as f64
    }

    /// Sum over all `n` two-sided bins, recovered from the one-sided half.
    /// Equals the mean-removed signal energy (Parseval).
    pub fn total_power(&self) -> f64 {
        let last = self.power.len() - 1;
        self.power
            .iter()
            .enumerate()
            .map(|(k, &p)| {
                let mirrored = k != 0 && !(self.n.is_multiple_of(2) && k == last);
                if mirrored {
                    2.0 * p
                } else {
                    p
                }
            })
            .sum()
    }

    /// Replaces the power values, keeping the frequency axis.
    pub fn with_power(mut self, power: Vec<f64>) -> Self {
        assert_eq!(power.len(), self.power.len(), "power length must match bins");
        self.power = power;
        self
    }
}

fn forward(samples: &[f64]) -> Vec<Complex<f64>> {
    let mut buf: Vec<Complex<f64>> = samples.iter().map(|&x| Complex::new(x, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    buf
}

/// Ideal band-pass: every DFT bin whose centre frequency lies outside
/// `[lo, hi]` (and always DC) is zeroed, symmetrically for the conjugate
/// half, then the series is transformed back. Zero-phase.
pub fn bandpass(series: &TimeSeries, lo: f64, hi: f64) -> Result<TimeSeries> {
    let fs = series.fs();
    let nyquist = fs / 2.0;
    if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo < hi && hi <= nyquist) {
        return Err(SignalError::BandOutOfRange { lo, hi, nyquist });
    }
    let n = series.len();
    let df = fs / n as f64;
    let tol = 1e-9 * df;
    let mut spec = forward(series.samples());
    for (k, bin) in spec.iter_mut().enumerate() {
        let f = k.min(n - k) as f64 * df;
        if k == 0 || f < lo - tol || f > hi + tol {
            *bin = Complex::new(0.0, 0.0);
        }
    }
    FftPlanner::new().plan_fft_inverse(n).process(&mut spec);
    let scale = 1.0 / n as f64;
    TimeSeries::new(spec.iter().map(|c| c.re * scale).collect(), fs)
}

/// Rectangular-window periodogram of the mean-removed series.
pub fn periodogram(series: &TimeSeries) -> Result<Spectrum> {
    let n = series.len();
    if n < 2 {
        return Err(SignalError::TooShort { len: n });
    }
    let mean = series.samples().iter().sum::<f64>() / n as f64;
    let centred: Vec<f64> = series.samples().iter().map(|x| x - mean).collect();
    let spec = forward(&centred);
    let fs = series.fs();
    let bins = n / 2 + 1;
    Ok(Spectrum {
        freqs: (0..bins).map(|k| k as f64 * fs / n as f64).collect(),
        power: spec[..bins].iter().map(|c| c.norm_sqr() / n as f64).collect(),
        fs,
        n,
    })
}
