//! Moving-average-differencing motion amplification.
//!
//! Every pixel intensity of every colour plane is mapped through
//!
//! ```text
//! out = beta * I(t) + alpha * (I(t) - (I(t-1) + ... + I(t-m)) / m)
//! ```
//!
//! and saturated to the 8-bit range. The delayed samples live in a
//! zero-initialised ring of `m` frames owned by a [`FilterState`], so the
//! first `m` outputs of a stream carry the warm-up transient.
//!
//! ```
//! use memad_core::{Frame, FilterParams, FilterState};
//!
//! let params = FilterParams::default();
//! let mut state = FilterState::new(params, 4, 4).unwrap();
//! let frame = Frame::filled(4, 4, [10, 10, 10], 0, 0).unwrap();
//! let out = state.apply(&frame, &params).unwrap();
//! // 10 + 16 * (10 - 0) against the zeroed history.
//! assert!(out.plane(memad_core::Channel::Red).iter().all(|&v| v == 170));
//! ```

mod error;
mod filter;
mod frame;
mod params;

pub use error::MemadError;
pub use filter::{map_pixel, quantize, response, FilterState};
pub use frame::{Channel, Frame};
pub use params::FilterParams;

pub type Result<T, E = MemadError> = std::result::Result<T, E>;
