//! Pulse-rate estimation from a frame sequence.
//!
//! The chain is: per-frame spatial mean of `R - G`, an ideal zero-phase
//! band-pass in the frequency domain, a rectangular-window periodogram and
//! an arg-max over the pass band, reported in beats per minute.

mod csv;
mod error;
mod pulse;
mod series;
mod spectral;

pub use csv::{write_series_csv, write_spectrum_csv};
pub use error::SignalError;
pub use pulse::{peak_bpm, pulse_from_series, pulse_pipeline, Band, PulseReport, ZERO_POWER_FLOOR};
pub use series::{rg_mean, rg_mean_series, RgMeanAccumulator, TimeSeries};
pub use spectral::{bandpass, periodogram, Spectrum};

pub type Result<T, E = SignalError> = std::result::Result<T, E>;
