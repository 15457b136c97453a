use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use memad_core::FilterParams;
use memad_signal::Band;
use memad_video::{SceneKind, SceneSpec};

use crate::CliError;

#[derive(Debug, Parser)]
#[command(name = "memad", version, about = "Motion enhancement by moving-average differencing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Amplify a MEMADRAW or .y4m file into a MEMADRAW file.
    Amplify {
        input: PathBuf,
        output: PathBuf,
        #[command(flatten)]
        filter: FilterArgs,
        /// Drop the first m output frames (the zero-initialized transient).
        #[arg(long)]
        skip_warmup: bool,
    },
    /// Estimate the pulse rate from the R-G mean of a video.
    Pulse {
        input: PathBuf,
        #[arg(long, default_value_t = 0.2)]
        low: f64,
        #[arg(long, default_value_t = 3.0)]
        high: f64,
        /// Write the periodogram as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Analyze the input directly instead of the amplified stream.
        #[arg(long)]
        no_memad: bool,
        #[command(flatten)]
        filter: FilterArgs,
    },
    /// Write a deterministic synthetic scene as MEMADRAW.
    Synth {
        output: PathBuf,
        #[command(flatten)]
        scene: SceneArgs,
    },
    /// Time the filter on pre-generated frames.
    Bench {
        #[arg(long, default_value_t = 240)]
        width: u32,
        #[arg(long, default_value_t = 320)]
        height: u32,
        #[arg(long, default_value_t = 900)]
        frames: u64,
        #[command(flatten)]
        filter: FilterArgs,
    },
    /// Run the WebSocket amplification service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        #[command(flatten)]
        filter: FilterArgs,
        #[arg(long)]
        skip_warmup: bool,
        /// Frames allowed to queue per session before the oldest are dropped.
        #[arg(long, default_value_t = memad_service::DEFAULT_MAX_IN_FLIGHT)]
        max_in_flight: usize,
        /// Directory served at `/` (e.g. the built tuner UI).
        #[arg(long)]
        static_dir: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct FilterArgs {
    #[arg(long, default_value_t = 16.0)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    /// Moving-average length m.
    #[arg(long, default_value_t = 5)]
    pub order: usize,
}

impl FilterArgs {
    pub fn params(&self) -> Result<FilterParams, CliError> {
        FilterParams::new(self.alpha, self.beta, self.order).map_err(|e| CliError::Usage(e.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Pulse,
    Specks,
    VibratingEdge,
    Constant,
}

#[derive(Debug, Clone, Args)]
pub struct SceneArgs {
    #[arg(long, value_enum, default_value_t = Kind::Pulse)]
    pub kind: Kind,
    #[arg(long, default_value_t = 240)]
    pub width: u32,
    #[arg(long, default_value_t = 320)]
    pub height: u32,
    #[arg(long, default_value_t = 30)]
    pub fps: u32,
    /// Seconds.
    #[arg(long, default_value_t = 10.0)]
    pub duration: f64,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Pulse: mean red level.
    #[arg(long, default_value_t = 128.0)]
    pub base: f64,
    /// Pulse: red swing in intensity units (default 2). Edge: swing in pixels (default 0.5).
    #[arg(long)]
    pub amplitude: Option<f64>,
    /// Pulse and edge frequency in Hz.
    #[arg(long, default_value_t = 1.2)]
    pub freq: f64,
    /// Pulse: Gaussian noise sigma on the red plane.
    #[arg(long, default_value_t = 1.0)]
    pub noise: f64,
    /// Specks: number of specks.
    #[arg(long, default_value_t = 20)]
    pub count: u32,
    /// Specks: intensity offset from the background.
    #[arg(long, default_value_t = 8, allow_negative_numbers = true)]
    pub delta: i32,
    /// Specks: pixels per frame, downward.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub velocity: f64,
    /// Edge: rest position in pixels (default mid-width).
    #[arg(long)]
    pub edge: Option<f64>,
    /// Constant: intensity.
    #[arg(long, default_value_t = 128)]
    pub value: u8,
}

impl SceneArgs {
    pub fn spec(&self) -> SceneSpec {
        let kind = match self.kind {
            Kind::Pulse => SceneKind::Pulse {
                base: self.base,
                amplitude: self.amplitude.unwrap_or(2.0),
                freq_hz: self.freq,
                noise_sigma: self.noise,
            },
            Kind::Specks => SceneKind::Specks {
                count: self.count,
                delta: self.delta,
                velocity: self.velocity,
            },
            Kind::VibratingEdge => SceneKind::VibratingEdge {
                edge_x: self.edge.unwrap_or(self.width as f64 / 2.0),
                amplitude_px: self.amplitude.unwrap_or(0.5),
                freq_hz: self.freq,
            },
            Kind::Constant => SceneKind::Constant { value: self.value },
        };
        SceneSpec {
            kind,
            width: self.width,
            height: self.height,
            fps: self.fps,
            duration_s: self.duration,
            seed: self.seed,
        }
    }
}

/// Validates an analysis band before any input is read.
pub fn band(low: f64, high: f64) -> Result<Band, CliError> {
    if !(low.is_finite() && high.is_finite() && low >= 0.0 && low < high) {
        return Err(CliError::Usage(format!(
            "band {low}..{high} Hz must satisfy 0 <= low < high"
        )));
    }
    Ok(Band { lo: low, hi: high })
}
