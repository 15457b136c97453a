use crate::{MemadError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Channel {
    Red,
    Green,
    Blue,
}

impl Channel {
    pub const ALL: [Channel; 3] = [Channel::Red, Channel::Green, Channel::Blue];

    fn offset(self) -> usize {
        match self {
            Channel::Red => 0,
            Channel::Green => 1,
            Channel::Blue => 2,
        }
    }
}

/// One RGB image at a sample time.
///
/// Stored planar: the red plane, then green, then blue, each row-major
/// with `width * height` samples. Frames are immutable once built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame {
    width: usize,
    height: usize,
    data: Vec<u8>,
    index: u64,
    timestamp_us: u64,
}

fn check_dims(width: usize, height: usize) -> Result<usize> {
    if width == 0 || height == 0 {
        return Err(MemadError::InvalidFrame(format!(
            "dimensions must be at least 1x1, got {width}x{height}"
        )));
    }
    width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(3).map(|_| n))
        .ok_or_else(|| MemadError::InvalidFrame(format!("dimensions {width}x{height} overflow")))
}

impl Frame {
    /// Builds a frame from planar data (`R` plane, `G` plane, `B` plane).
    pub fn from_planes(
        width: usize,
        height: usize,
        data: Vec<u8>,
        index: u64,
        timestamp_us: u64,
    ) -> Result<Self> {
        let n = check_dims(width, height)?;
        if data.len() != 3 * n {
            return Err(MemadError::InvalidFrame(format!(
                "expected {} planar samples for {width}x{height}, got {}",
                3 * n,
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
            index,
            timestamp_us,
        })
    }

    /// Builds a frame from interleaved RGB24 (row-major, R G B per pixel).
    pub fn from_rgb24(
        width: usize,
        height: usize,
        rgb: &[u8],
        index: u64,
        timestamp_us: u64,
    ) -> Result<Self> {
        let n = check_dims(width, height)?;
        if rgb.len() != 3 * n {
            return Err(MemadError::InvalidFrame(format!(
                "expected {} interleaved bytes for {width}x{height}, got {}",
                3 * n,
                rgb.len()
            )));
        }
        let mut data = vec![0u8; 3 * n];
        let (r, rest) = data.split_at_mut(n);
        let (g, b) = rest.split_at_mut(n);
        for (i, px) in rgb.chunks_exact(3).enumerate() {
            r[i] = px[0];
            g[i] = px[1];
            b[i] = px[2];
        }
        Ok(Self {
            width,
            height,
            data,
            index,
            timestamp_us,
        })
    }

    /// A frame with every pixel set to `rgb`.
    pub fn filled(
        width: usize,
        height: usize,
        rgb: [u8; 3],
        index: u64,
        timestamp_us: u64,
    ) -> Result<Self> {
        let n = check_dims(width, height)?;
        let mut data = Vec::with_capacity(3 * n);
        for v in rgb {
            data.resize(data.len() + n, v);
        }
        Self::from_planes(width, height, data, index, timestamp_us)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixel_count(&self) -> usize {
        self.width * self.height
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn timestamp_us(&self) -> u64 {
        self.timestamp_us
    }

    pub fn plane(&self, channel: Channel) -> &[u8] {
        let n = self.pixel_count();
        let start = channel.offset() * n;
        &self.data[start..start + n]
    }

    /// All three planes back to back.
    pub fn planes(&self) -> &[u8] {
        &self.data
    }

    pub(crate) fn planes_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }

    pub fn into_planes(self) -> Vec<u8> {
        self.data
    }

    /// Same pixels, new position in the stream.
    pub fn with_timing(mut self, index: u64, timestamp_us: u64) -> Self {
        self.index = index;
        self.timestamp_us = timestamp_us;
        self
    }

    pub(crate) fn set_timing(&mut self, index: u64, timestamp_us: u64) {
        self.index = index;
        self.timestamp_us = timestamp_us;
    }

    /// Writes interleaved RGB24 into `out`, which must hold `3 * width * height` bytes.
    pub fn write_rgb24(&self, out: &mut [u8]) {
        let n = self.pixel_count();
        assert_eq!(out.len(), 3 * n, "rgb24 buffer has wrong length");
        let (r, rest) = self.data.split_at(n);
        let (g, b) = rest.split_at(n);
        for (i, px) in out.chunks_exact_mut(3).enumerate() {
            px[0] = r[i];
            px[1] = g[i];
            px[2] = b[i];
        }
    }

    pub fn to_rgb24(&self) -> Vec<u8> {
        let mut out = vec![0u8; 3 * self.pixel_count()];
        self.write_rgb24(&mut out);
        out
    }
}
