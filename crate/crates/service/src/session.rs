use memad_core::{FilterParams, FilterState, Frame};
use tracing::debug;

use crate::message::{
    decode_frame_msg, encode_frame_into, AppliedParams, ControlMessage, ServerText, SessionSummary,
};

#[derive(Debug, Clone, PartialEq)]
pub enum Reply {
    Frame(Vec<u8>),
    Text(String),
}

/// What the transport should send in response to one inbound message, and
/// whether to end the session afterwards.
#[derive(Debug, Default, PartialEq)]
pub struct Step {
    pub replies: Vec<Reply>,
    pub close: bool,
}

impl Step {
    fn text(msg: ServerText) -> Self {
        Self {
            replies: vec![Reply::Text(msg.to_json())],
            close: false,
        }
    }

    fn fatal(error: impl Into<String>) -> Self {
        Self {
            replies: vec![Reply::Text(ServerText::Error { error: error.into() }.to_json())],
            close: true,
        }
    }
}

/// Per-connection protocol state, independent of the transport.
///
/// Messages must be fed in arrival order; parameter changes therefore take
/// effect at the next frame boundary.
#[derive(Debug)]
pub struct Session {
    params: FilterParams,
    skip_warmup: bool,
    filter: Option<FilterState>,
    out: Option<Frame>,
    last_seq: Option<u32>,
    summary: SessionSummary,
}

impl Session {
    pub fn new(params: FilterParams, skip_warmup: bool) -> Result<Self, memad_core::MemadError> {
        params.validate()?;
        Ok(Self {
            params,
            skip_warmup,
            filter: None,
            out: None,
            last_seq: None,
            summary: SessionSummary::default(),
        })
    }

    pub fn params(&self) -> &FilterParams {
        &self.params
    }

    pub fn skip_warmup(&self) -> bool {
        self.skip_warmup
    }

    pub fn summary(&self) -> SessionSummary {
        self.summary
    }

    /// Accounts for frames discarded by the transport before reaching the filter.
    pub fn note_dropped(&mut self, count: u64) {
        self.summary.frames_in += count;
        self.summary.dropped += count;
    }

    fn applied(&self) -> AppliedParams {
        AppliedParams::new(&self.params, self.skip_warmup)
    }

    pub fn handle_binary(&mut self, bytes: &[u8]) -> Step {
        self.summary.frames_in += 1;
        let frame = match decode_frame_msg(bytes) {
            Ok(f) => f,
            Err(e) => return Step::fatal(e.to_string()),
        };
        let seq = frame.index() as u32;
        if let Some(last) = self.last_seq {
            if seq <= last {
                return Step::fatal(format!("seq {seq} does not follow {last}"));
            }
        }
        self.last_seq = Some(seq);

        let mut step = Step::default();
        let dims = (frame.width(), frame.height());
        let same_dims = self
            .filter
            .as_ref()
            .is_some_and(|f| (f.width(), f.height()) == dims);
        if !same_dims {
            let had_filter = self.filter.is_some();
            self.filter = Some(FilterState::new(self.params, dims.0, dims.1).expect("params validated"));
            self.out = None;
            if had_filter {
                debug!(width = dims.0, height = dims.1, "frame size changed, filter reset");
                step.replies.push(Reply::Text(
                    ServerText::Ack {
                        applied: self.applied(),
                        reset: true,
                        warning: Some(format!(
                            "frame size changed to {}x{}; filter reset",
                            dims.0, dims.1
                        )),
                    }
                    .to_json(),
                ));
            }
        }
        let filter = self.filter.as_mut().expect("filter present");
        let out = self.out.get_or_insert_with(|| {
            Frame::filled(dims.0, dims.1, [0; 3], 0, 0).expect("dims checked by decode")
        });
        let warming = filter.is_warming_up();
        if let Err(e) = filter.apply_into(&frame, &self.params, out) {
            return Step::fatal(e.to_string());
        }
        if self.skip_warmup && warming {
            self.summary.warmup_suppressed += 1;
            return step;
        }
        let mut buf = Vec::new();
        encode_frame_into(out, &mut buf).expect("decoded frames re-encode");
        step.replies.push(Reply::Frame(buf));
        self.summary.frames_out += 1;
        step
    }

    pub fn handle_text(&mut self, text: &str) -> Step {
        let msg = match ControlMessage::parse(text) {
            Ok(m) => m,
            Err(e) => return Step::fatal(e.to_string()),
        };
        let candidate = FilterParams {
            alpha: msg.alpha.unwrap_or(self.params.alpha),
            beta: msg.beta.unwrap_or(self.params.beta),
            order: msg.order.unwrap_or(self.params.order),
        };
        if let Err(e) = candidate.validate() {
            let mut step = Step::text(ServerText::Error { error: e.to_string() });
            step.close = msg.end == Some(true);
            return step;
        }
        let reset = candidate.order != self.params.order;
        self.params = candidate;
        if let Some(skip) = msg.skip_warmup {
            self.skip_warmup = skip;
        }
        if reset {
            if let Some(f) = &self.filter {
                self.filter = Some(FilterState::new(self.params, f.width(), f.height()).expect("validated"));
            }
        }
        let mut step = Step::text(ServerText::Ack {
            applied: self.applied(),
            reset,
            warning: None,
        });
        step.close = msg.end == Some(true);
        step
    }
}
