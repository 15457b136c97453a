use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MemadError {
    #[error("invalid filter parameters: {0}")]
    InvalidParams(String),

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("dimension mismatch: filter is {expected_width}x{expected_height}, frame is {width}x{height}")]
    DimensionMismatch {
        expected_width: usize,
        expected_height: usize,
        width: usize,
        height: usize,
    },

    #[error("order mismatch: filter ring holds {capacity} frames, params request order {order}")]
    OrderMismatch { capacity: usize, order: usize },
}
