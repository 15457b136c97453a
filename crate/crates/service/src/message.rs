//! Wire formats.
//!
//! Binary frame message, little-endian:
//!
//! ```text
//! offset  size  field
//!      0     1  type (0x01)
//!      1     4  seq, u32
//!      5     8  timestamp_us, u64
//!     13     2  width, u16
//!     15     2  height, u16
//!     17     .  width*height*3 bytes of interleaved RGB24
//! ```
//!
//! Control messages are JSON text objects with optional `alpha`, `beta`,
//! `order`, `skip_warmup` and `end` keys. Replies are JSON text: acks
//! `{"applied": {...}}`, errors `{"error": "..."}` and the closing
//! `{"summary": {...}}`.

use memad_core::{FilterParams, Frame};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const FRAME_MSG_TYPE: u8 = 0x01;
pub const FRAME_MSG_HEADER: usize = 17;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MessageError {
    #[error("frame message is {actual} bytes, expected {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("unknown message type byte 0x{0:02x}")]
    UnknownType(u8),

    #[error("frame cannot be encoded: {0}")]
    Unencodable(String),

    #[error("invalid frame: {0}")]
    InvalidFrame(String),

    #[error("malformed control message: {0}")]
    MalformedControl(String),
}

/// Appends the encoding of `frame` to `out`; `frame.index()` is the seq.
pub fn encode_frame_into(frame: &Frame, out: &mut Vec<u8>) -> Result<(), MessageError> {
    let seq = u32::try_from(frame.index())
        .map_err(|_| MessageError::Unencodable(format!("seq {} exceeds u32", frame.index())))?;
    let width = u16::try_from(frame.width())
        .map_err(|_| MessageError::Unencodable(format!("width {} exceeds u16", frame.width())))?;
    let height = u16::try_from(frame.height())
        .map_err(|_| MessageError::Unencodable(format!("height {} exceeds u16", frame.height())))?;
    out.reserve(FRAME_MSG_HEADER + 3 * frame.pixel_count());
    out.push(FRAME_MSG_TYPE);
    out.extend_from_slice(&seq.to_le_bytes());
    out.extend_from_slice(&frame.timestamp_us().to_le_bytes());
    out.extend_from_slice(&width.to_le_bytes());
    out.extend_from_slice(&height.to_le_bytes());
    let start = out.len();
    out.resize(start + 3 * frame.pixel_count(), 0);
    frame.write_rgb24(&mut out[start..]);
    Ok(())
}

pub fn encode_frame_msg(frame: &Frame) -> Result<Vec<u8>, MessageError> {
    let mut out = Vec::new();
    encode_frame_into(frame, &mut out)?;
    Ok(out)
}

/// Decodes a frame message; the frame's index is the message seq.
pub fn decode_frame_msg(bytes: &[u8]) -> Result<Frame, MessageError> {
    let Some(&kind) = bytes.first() else {
        return Err(MessageError::LengthMismatch {
            expected: FRAME_MSG_HEADER,
            actual: 0,
        });
    };
    if kind != FRAME_MSG_TYPE {
        return Err(MessageError::UnknownType(kind));
    }
    if bytes.len() < FRAME_MSG_HEADER {
        return Err(MessageError::LengthMismatch {
            expected: FRAME_MSG_HEADER,
            actual: bytes.len(),
        });
    }
    let seq = u32::from_le_bytes(bytes[1..5].try_into().unwrap());
    let timestamp_us = u64::from_le_bytes(bytes[5..13].try_into().unwrap());
    let width = u16::from_le_bytes([bytes[13], bytes[14]]) as usize;
    let height = u16::from_le_bytes([bytes[15], bytes[16]]) as usize;
    let expected = FRAME_MSG_HEADER + width * height * 3;
    if bytes.len() != expected {
        return Err(MessageError::LengthMismatch {
            expected,
            actual: bytes.len(),
        });
    }
    Frame::from_rgb24(width, height, &bytes[FRAME_MSG_HEADER..], seq as u64, timestamp_us)
        .map_err(|e| MessageError::InvalidFrame(e.to_string()))
}

/// Parameter update sent by the client. Absent keys leave values unchanged.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ControlMessage {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skip_warmup: Option<bool>,
    /// Ask the server to finish: drain pending frames, send the summary, close.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<bool>,
}

impl ControlMessage {
    pub fn parse(text: &str) -> Result<Self, MessageError> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| MessageError::MalformedControl(e.to_string()))?;
        // serde would otherwise accept a positional array for a struct.
        if !value.is_object() {
            return Err(MessageError::MalformedControl("expected a JSON object".into()));
        }
        serde_json::from_value(value).map_err(|e| MessageError::MalformedControl(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("control message serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AppliedParams {
    pub alpha: f64,
    pub beta: f64,
    pub order: usize,
    pub skip_warmup: bool,
}

impl AppliedParams {
    pub fn new(params: &FilterParams, skip_warmup: bool) -> Self {
        Self {
            alpha: params.alpha,
            beta: params.beta,
            order: params.order,
            skip_warmup,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SessionSummary {
    pub frames_in: u64,
    pub frames_out: u64,
    pub dropped: u64,
    pub warmup_suppressed: u64,
}

/// Every text message the server sends.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ServerText {
    Ack {
        applied: AppliedParams,
        #[serde(default, skip_serializing_if = "std::ops::Not::not")]
        reset: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        warning: Option<String>,
    },
    Error {
        error: String,
    },
    Summary {
        summary: SessionSummary,
    },
}

impl ServerText {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("server message serializes")
    }

    pub fn parse(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
