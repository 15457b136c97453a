use memad_core::Frame;

use crate::{bandpass, periodogram, rg_mean_series, Result, SignalError, Spectrum, TimeSeries};

/// Peak power at or below this is treated as "no signal" and flagged.
pub const ZERO_POWER_FLOOR: f64 = 1e-18;

/// Inclusive frequency band in Hz.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl Default for Band {
    fn default() -> Self {
        Self { lo: 0.2, hi: 3.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PulseReport {
    pub peak_hz: f64,
    pub bpm: f64,
    pub peak_power: f64,
    pub resolution_hz: f64,
    /// Set when the peak carries no power (e.g. a static scene).
    pub low_confidence: bool,
}

/// Arg-max of the power over bins inside `[lo, hi]`; ties go to the lower
/// frequency.
pub fn peak_bpm(spectrum: &Spectrum, lo: f64, hi: f64) -> Result<PulseReport> {
    let tol = 1e-9 * spectrum.resolution_hz();
    let mut best: Option<(usize, f64)> = None;
    for (k, (&f, &p)) in spectrum.freqs().iter().zip(spectrum.power()).enumerate() {
        if f < lo - tol || f > hi + tol {
            continue;
        }
        if best.is_none_or(|(_, bp)| p > bp) {
            best = Some((k, p));
        }
    }
    let (k, peak_power) = best.ok_or(SignalError::EmptyBand { lo, hi })?;
    let peak_hz = spectrum.freqs()[k];
    Ok(PulseReport {
        peak_hz,
        bpm: 60.0 * peak_hz,
        peak_power,
        resolution_hz: spectrum.resolution_hz(),
        low_confidence: peak_power <= ZERO_POWER_FLOOR,
    })
}

/// Band-pass, periodogram and peak search on an already extracted series.
pub fn pulse_from_series(series: &TimeSeries, band: Band) -> Result<(PulseReport, Spectrum)> {
    let filtered = bandpass(series, band.lo, band.hi)?;
    let spectrum = periodogram(&filtered)?;
    let report = peak_bpm(&spectrum, band.lo, band.hi)?;
    Ok((report, spectrum))
}

/// `rg_mean_series -> bandpass -> periodogram -> peak_bpm`.
pub fn pulse_pipeline<'a>(
    frames: impl IntoIterator<Item = &'a Frame>,
    fs: f64,
    band: Band,
) -> Result<PulseReport> {
    let series = rg_mean_series(frames, fs)?;
    Ok(pulse_from_series(&series, band)?.0)
}
