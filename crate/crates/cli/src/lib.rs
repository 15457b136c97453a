//! The `memad` command-line tool.
//!
//! Every command prints its results as `key=value` lines on stdout and
//! diagnostics on stderr. Exit codes: 0 on success, 1 for usage errors
//! (bad flags or values), 2 for runtime failures (I/O, malformed input,
//! a busy port).

pub mod args;
mod commands;

use std::ffi::OsString;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use memad_service::ServiceConfig;
use thiserror::Error;

pub use args::{Cli, Command};
pub use commands::{
    amplify, bench, pulse, pulse_stream, serve, synth_to_file, AmplifyReport, BenchReport, SynthReport, REALTIME_FPS,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

/// Parses `argv` and runs the command, returning the process exit code.
pub fn run<I, T>(argv: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let _ = write!(err, "{e}");
            return EXIT_USAGE;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, out: &mut impl Write) -> Result<(), CliError> {
    let emit = |out: &mut dyn Write, line: String| {
        let _ = writeln!(out, "{line}");
        let _ = out.flush();
    };
    match command {
        Command::Amplify {
            input,
            output,
            filter,
            skip_warmup,
        } => {
            let r = amplify(&input, &output, filter.params()?, skip_warmup)?;
            emit(
                out,
                format!("frames_in={} frames_out={} bytes={}", r.frames_in, r.frames_out, r.bytes),
            );
        }
        Command::Pulse {
            input,
            low,
            high,
            csv,
            no_memad,
            filter,
        } => {
            let band = args::band(low, high)?;
            let r = pulse(&input, band, csv.as_deref(), no_memad, filter.params()?)?;
            emit(
                out,
                format!(
                    "bpm={} peak_hz={} resolution_hz={} peak_power={:e} low_confidence={}",
                    num(r.bpm),
                    num(r.peak_hz),
                    num(r.resolution_hz),
                    r.peak_power,
                    r.low_confidence
                ),
            );
        }
        Command::Synth { output, scene } => {
            let spec = scene.spec();
            let r = synth_to_file(&spec, &output)?;
            emit(
                out,
                format!("kind={} frames={} bytes={}", spec.kind.name(), r.frames, r.bytes),
            );
        }
        Command::Bench {
            width,
            height,
            frames,
            filter,
        } => {
            let r = bench(width, height, frames, filter.params()?)?;
            emit(
                out,
                format!(
                    "width={} height={} frames={} fps={:.1} us_per_frame={:.3} floor_fps={} result={}",
                    r.width,
                    r.height,
                    r.frames,
                    r.fps(),
                    r.us_per_frame(),
                    REALTIME_FPS,
                    if r.passed() { "PASS" } else { "FAIL" }
                ),
            );
        }
        Command::Serve {
            port,
            host,
            filter,
            skip_warmup,
            max_in_flight,
            static_dir,
        } => {
            let config = ServiceConfig {
                params: filter.params()?,
                skip_warmup,
                max_in_flight,
                static_dir,
            };
            init_logging();
            serve(&host, port, config, |addr| emit(out, format!("listening=ws://{addr}/stream")))?;
            emit(out, "shutdown=clean".into());
        }
    }
    Ok(())
}

/// Shortest decimal for `x` after rounding to 9 places, so bin arithmetic
/// such as `72.00000000000001` prints as `72`.
fn num(x: f64) -> String {
    let r = (x * 1e9).round() / 1e9;
    format!("{r}")
}

fn init_logging() {
    let filter = tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into());
    let _ = tracing_subscriber::fmt()
        .with_env_filter(filter)
        .with_writer(std::io::stderr)
        .try_init();
}
