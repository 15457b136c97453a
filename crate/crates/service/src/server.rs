use std::future::Future;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::Response;
use axum::routing::get;
use axum::Router;
use futures_util::{SinkExt, StreamExt};
use memad_core::FilterParams;
use tokio::net::TcpListener;
use tower_http::services::ServeDir;
use tracing::{info, warn};

use crate::inbox::{Inbound, Inbox};
use crate::message::{ServerText, SessionSummary};
use crate::session::{Reply, Session};

pub const DEFAULT_MAX_IN_FLIGHT: usize = 4;

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub params: FilterParams,
    pub skip_warmup: bool,
    /// Frames allowed to wait per session before newest-wins dropping starts.
    pub max_in_flight: usize,
    /// Optional directory served at `/` (the browser client).
    pub static_dir: Option<PathBuf>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        Self {
            params: FilterParams::default(),
            skip_warmup: false,
            max_in_flight: DEFAULT_MAX_IN_FLIGHT,
            static_dir: None,
        }
    }
}

struct AppState {
    config: ServiceConfig,
    next_id: AtomicU64,
}

pub fn router(config: ServiceConfig) -> Router {
    let static_dir = config.static_dir.clone();
    let state = Arc::new(AppState {
        config,
        next_id: AtomicU64::new(1),
    });
    let router = Router::new().route("/stream", get(upgrade)).with_state(state);
    match static_dir {
        Some(dir) => router.fallback_service(ServeDir::new(dir)),
        None => router,
    }
}

/// Serves `/stream` on `listener` until `shutdown` resolves.
pub async fn serve(
    listener: TcpListener,
    config: ServiceConfig,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    config
        .params
        .validate()
        .map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidInput, e))?;
    if let Ok(addr) = listener.local_addr() {
        info!(%addr, "stream service listening");
    }
    axum::serve(listener, router(config))
        .with_graceful_shutdown(shutdown)
        .await
}

async fn upgrade(ws: WebSocketUpgrade, State(state): State<Arc<AppState>>) -> Response {
    let id = state.next_id.fetch_add(1, Ordering::Relaxed);
    let config = state.config.clone();
    ws.on_upgrade(move |socket| async move {
        handle_session(socket, config, id).await;
    })
}

/// Runs one client session to completion and returns its counters.
pub async fn handle_session(socket: WebSocket, config: ServiceConfig, id: u64) -> SessionSummary {
    info!(session = id, "session opened");
    let mut session = match Session::new(config.params, config.skip_warmup) {
        Ok(s) => s,
        Err(e) => {
            warn!(session = id, error = %e, "invalid initial parameters");
            return SessionSummary::default();
        }
    };
    let (mut sink, mut stream) = socket.split();
    let inbox = Arc::new(Inbox::new(config.max_in_flight.max(1)));

    let reader = {
        let inbox = inbox.clone();
        tokio::spawn(async move {
            while let Some(msg) = stream.next().await {
                match msg {
                    Ok(Message::Binary(b)) => inbox.push(Inbound::Frame(b.to_vec())),
                    Ok(Message::Text(t)) => inbox.push(Inbound::Control(t.to_string())),
                    Ok(Message::Close(_)) | Err(_) => break,
                    Ok(_) => {}
                }
            }
            inbox.close();
        })
    };

    let mut peer_gone = false;
    while let Some(item) = inbox.pop().await {
        session.note_dropped(inbox.take_dropped());
        let step = match item {
            Inbound::Frame(bytes) => session.handle_binary(&bytes),
            Inbound::Control(text) => session.handle_text(&text),
        };
        for reply in step.replies {
            let msg = match reply {
                Reply::Frame(b) => Message::Binary(b.into()),
                Reply::Text(t) => Message::Text(t.into()),
            };
            if sink.send(msg).await.is_err() {
                peer_gone = true;
                break;
            }
        }
        if step.close || peer_gone {
            break;
        }
    }
    reader.abort();
    session.note_dropped(inbox.take_dropped());
    let summary = session.summary();
    if !peer_gone {
        let text = ServerText::Summary { summary }.to_json();
        let _ = sink.send(Message::Text(text.into())).await;
        let _ = sink.send(Message::Close(None)).await;
    }
    info!(
        session = id,
        frames_in = summary.frames_in,
        frames_out = summary.frames_out,
        dropped = summary.dropped,
        warmup_suppressed = summary.warmup_suppressed,
        "session closed"
    );
    summary
}
