//! Video sources and sinks for the amplification pipeline.
//!
//! * [`raw`]: the uncompressed `MEMADRAW` container (read and write).
//! * [`y4m`]: YUV4MPEG2 ingest, 4:4:4 only.
//! * [`synth`]: deterministic synthetic scenes.
//!
//! Every source implements [`VideoStream`], an iterator yielding one frame
//! at a time so only a constant number of frames is ever resident.

mod error;
pub mod raw;
pub mod synth;
pub mod y4m;

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use memad_core::Frame;

pub use error::VideoError;
pub use raw::{create_raw, open_raw, read_raw, write_raw, RawReader, RawVideoHeader, RawWriter};
pub use synth::{synth, SceneKind, SceneSpec, SceneStream, SplitMix64};
pub use y4m::{read_y4m, Y4mReader};

pub type Result<T, E = VideoError> = std::result::Result<T, E>;

/// Geometry and timing of a stream. `frame_count` is `None` when the
/// container does not declare it up front (Y4M).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StreamInfo {
    pub width: u32,
    pub height: u32,
    pub fps_num: u32,
    pub fps_den: u32,
    pub frame_count: Option<u32>,
}

impl StreamInfo {
    pub fn fps(&self) -> f64 {
        self.fps_num as f64 / self.fps_den as f64
    }

    pub fn frame_bytes(&self) -> u64 {
        self.width as u64 * self.height as u64 * 3
    }
}

pub trait VideoStream: Iterator<Item = Result<Frame>> {
    fn info(&self) -> StreamInfo;
}

impl<S: VideoStream + ?Sized> VideoStream for Box<S> {
    fn info(&self) -> StreamInfo {
        (**self).info()
    }
}

/// `round(index * 1e6 * fps_den / fps_num)` in exact integer arithmetic.
pub fn frame_timestamp_us(index: u64, fps_num: u32, fps_den: u32) -> u64 {
    let num = index as u128 * 1_000_000 * fps_den as u128;
    let den = fps_num as u128;
    ((2 * num + den) / (2 * den)) as u64
}

/// Opens a file as a frame stream: `.y4m` as YUV4MPEG2, anything else as MEMADRAW.
pub fn open_video(path: impl AsRef<Path>) -> Result<Box<dyn VideoStream + Send>> {
    let path = path.as_ref();
    let is_y4m = path
        .extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| e.eq_ignore_ascii_case("y4m"));
    if is_y4m {
        let file = File::open(path)?;
        Ok(Box::new(read_y4m(BufReader::new(file))?))
    } else {
        Ok(Box::new(open_raw(path)?))
    }
}
