use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SignalError {
    #[error("no frames to analyse")]
    EmptyInput,

    #[error("series of length {len} is too short, need at least 2 samples")]
    TooShort { len: usize },

    #[error("sampling rate {0} Hz must be positive and finite")]
    InvalidSampleRate(f64),

    #[error("frame {index} is {width}x{height}, expected {expected_width}x{expected_height}")]
    DimMismatch {
        index: usize,
        width: usize,
        height: usize,
        expected_width: usize,
        expected_height: usize,
    },

    #[error("band [{lo}, {hi}] Hz is not within [0, {nyquist}] Hz with lo < hi")]
    BandOutOfRange { lo: f64, hi: f64, nyquist: f64 },

    #[error("no spectral bin lies in [{lo}, {hi}] Hz")]
    EmptyBand { lo: f64, hi: f64 },
}
