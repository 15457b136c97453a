use memad_core::{Channel, Frame};

use crate::{Result, SignalError};

/// Uniformly sampled real signal.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSeries {
    samples: Vec<f64>,
    fs: f64,
}

impl TimeSeries {
    pub fn new(samples: Vec<f64>, fs: f64) -> Result<Self> {
        if !(fs.is_finite() && fs > 0.0) {
            return Err(SignalError::InvalidSampleRate(fs));
        }
        if samples.len() < 2 {
            return Err(SignalError::TooShort { len: samples.len() });
        }
        Ok(Self { samples, fs })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn fs(&self) -> f64 {
        self.fs
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Spatial mean of `R - G` over one frame.
pub fn rg_mean(frame: &Frame) -> f64 {
    let diff: i64 = frame
        .plane(Channel::Red)
        .iter()
        .zip(frame.plane(Channel::Green))
        .map(|(&r, &g)| r as i64 - g as i64)
        .sum();
    diff as f64 / frame.pixel_count() as f64
}

/// Builds the `R - G` series one frame at a time, so a caller never has to
/// keep the video in memory.
#[derive(Debug, Clone, Default)]
pub struct RgMeanAccumulator {
    dims: Option<(usize, usize)>,
    samples: Vec<f64>,
}

impl RgMeanAccumulator {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, frame: &Frame) -> Result<()> {
        let dims = (frame.width(), frame.height());
        match self.dims {
            None => self.dims = Some(dims),
            Some(expected) if expected != dims => {
                return Err(SignalError::DimMismatch {
                    index: self.samples.len(),
                    width: dims.0,
                    height: dims.1,
                    expected_width: expected.0,
                    expected_height: expected.1,
                })
            }
            Some(_) => {}
        }
        self.samples.push(rg_mean(frame));
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn finish(self, fs: f64) -> Result<TimeSeries> {
        if self.samples.is_empty() {
            return Err(SignalError::EmptyInput);
        }
        TimeSeries::new(self.samples, fs)
    }
}

pub fn rg_mean_series<'a>(frames: impl IntoIterator<Item = &'a Frame>, fs: f64) -> Result<TimeSeries> {
    let mut acc = RgMeanAccumulator::new();
    for f in frames {
        acc.push(f)?;
    }
    acc.finish(fs)
}
