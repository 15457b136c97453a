//! Live amplification over WebSocket.
//!
//! A client connects to `/stream`, pushes binary frame messages and receives
//! the amplified frames back with the same seq. Text control messages retune
//! `alpha`, `beta` and the order between frames. See [`message`] for the
//! wire formats.

mod inbox;
pub mod message;
mod server;
mod session;

pub use inbox::{Inbound, Inbox};
pub use message::{
    decode_frame_msg, encode_frame_into, encode_frame_msg, AppliedParams, ControlMessage, MessageError,
    ServerText, SessionSummary,
};
pub use server::{handle_session, router, serve, ServiceConfig, DEFAULT_MAX_IN_FLIGHT};
pub use session::{Reply, Session, Step};
