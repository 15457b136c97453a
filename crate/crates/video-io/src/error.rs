use memad_core::MemadError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VideoError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("bad magic {found:?} at byte offset 0, expected \"MEMADRAW\"")]
    BadMagic { found: Vec<u8> },

    #[error("unsupported container version {found} at byte offset 8")]
    BadVersion { found: u16 },

    #[error("invalid header: {0}")]
    InvalidHeader(String),

    #[error("truncated payload: input ends at byte offset {offset}, expected {expected} bytes")]
    Truncated { offset: u64, expected: u64 },

    #[error("unexpected trailing data at byte offset {offset}")]
    TrailingData { offset: u64 },

    #[error("frame count mismatch: header declares {declared}, got {actual}")]
    FrameCount { declared: u32, actual: u64 },

    #[error("unsupported colorspace {0:?}, only C444 is accepted")]
    UnsupportedColorspace(String),

    #[error("malformed y4m at byte offset {offset}: {reason}")]
    MalformedY4m { offset: u64, reason: String },

    #[error("invalid scene: {0}")]
    InvalidSpec(String),

    #[error(transparent)]
    Frame(#[from] MemadError),
}
