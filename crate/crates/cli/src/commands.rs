use std::fs::{self, File};
use std::hint::black_box;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::{Duration, Instant};

use memad_core::{FilterParams, FilterState, Frame};
use memad_service::ServiceConfig;
use memad_signal::{
    pulse_from_series, write_spectrum_csv, Band, PulseReport, RgMeanAccumulator, SignalError, Spectrum,
};
use memad_video::{
    create_raw, open_video, synth, RawVideoHeader, SceneKind, SceneSpec, VideoError, VideoStream,
};

use crate::CliError;

/// Frame rate the bench result is judged against.
pub const REALTIME_FPS: f64 = 30.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AmplifyReport {
    pub frames_in: u64,
    pub frames_out: u64,
    pub bytes: u64,
}

/// Streams `input` through the filter into a MEMADRAW file at `output`.
/// A partially written output is removed on failure.
pub fn amplify(input: &Path, output: &Path, params: FilterParams, skip_warmup: bool) -> Result<AmplifyReport, CliError> {
    params.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let source = open_video(input).map_err(|e| video_error(input, e))?;
    let info = source.info();
    let skip = if skip_warmup { params.order as u64 } else { 0 };
    let declared = info.frame_count.map_or(0, |n| n.saturating_sub(skip as u32));
    let header = RawVideoHeader::from_info(&info, declared);

    let result = (|| {
        let mut writer = create_raw(output, header).map_err(|e| video_error(output, e))?;
        let (w, h) = (info.width as usize, info.height as usize);
        let mut state = FilterState::new(params, w, h).map_err(runtime)?;
        let mut out = Frame::filled(w, h, [0; 3], 0, 0).map_err(runtime)?;
        let mut frames_in = 0;
        for frame in source {
            let frame = frame.map_err(|e| video_error(input, e))?;
            state.apply_into(&frame, &params, &mut out).map_err(|e| video_error(input, e.into()))?;
            frames_in += 1;
            if frames_in > skip {
                writer.write_frame(&out).map_err(|e| video_error(output, e))?;
            }
        }
        let frames_out = writer.frames_written();
        let (_, bytes) = writer.finish_with_count().map_err(|e| video_error(output, e))?;
        Ok(AmplifyReport {
            frames_in,
            frames_out,
            bytes,
        })
    })();
    if result.is_err() {
        let _ = fs::remove_file(output);
    }
    result
}

/// Runs the pulse estimator over `input`, amplified first unless `no_memad`.
pub fn pulse(
    input: &Path,
    band: Band,
    csv: Option<&Path>,
    no_memad: bool,
    params: FilterParams,
) -> Result<PulseReport, CliError> {
    params.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let source = open_video(input).map_err(|e| video_error(input, e))?;
    let fs = source.info().fps();
    if band.hi > fs / 2.0 {
        return Err(CliError::Usage(format!(
            "band upper edge {} Hz exceeds the Nyquist limit {} Hz of {}",
            band.hi,
            fs / 2.0,
            input.display()
        )));
    }
    let (report, spectrum) = pulse_stream(source, band, no_memad, params).map_err(|e| match e {
        CliError::Runtime(m) => CliError::Runtime(format!("{}: {m}", input.display())),
        usage => usage,
    })?;
    if let Some(path) = csv {
        let write = |path: &Path| -> std::io::Result<()> {
            let mut out = BufWriter::new(File::create(path)?);
            write_spectrum_csv(&spectrum, &mut out)?;
            out.flush()
        };
        write(path).map_err(|e| CliError::Runtime(format!("{}: {e}", path.display())))?;
    }
    Ok(report)
}

/// The body of [`pulse`] for any frame source.
pub fn pulse_stream(
    source: impl VideoStream,
    band: Band,
    no_memad: bool,
    params: FilterParams,
) -> Result<(PulseReport, Spectrum), CliError> {
    let info = source.info();
    let (w, h) = (info.width as usize, info.height as usize);
    let mut filter = if no_memad {
        None
    } else {
        let state = FilterState::new(params, w, h).map_err(|e| CliError::Usage(e.to_string()))?;
        Some((state, Frame::filled(w, h, [0; 3], 0, 0).map_err(runtime)?))
    };
    let mut acc = RgMeanAccumulator::new();
    for frame in source {
        let frame = frame.map_err(runtime)?;
        match &mut filter {
            Some((state, out)) => {
                state.apply_into(&frame, &params, out).map_err(runtime)?;
                acc.push(out).map_err(runtime)?;
            }
            None => acc.push(&frame).map_err(runtime)?,
        }
    }
    let series = acc.finish(info.fps()).map_err(runtime)?;
    pulse_from_series(&series, band).map_err(|e| match e {
        SignalError::BandOutOfRange { .. } | SignalError::EmptyBand { .. } => CliError::Usage(e.to_string()),
        e => CliError::Runtime(e.to_string()),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynthReport {
    pub frames: u64,
    pub bytes: u64,
}

pub fn synth_to_file(spec: &SceneSpec, output: &Path) -> Result<SynthReport, CliError> {
    let scene = synth(spec.clone()).map_err(|e| CliError::Usage(e.to_string()))?;
    let header = RawVideoHeader::from_info(&spec.info(), spec.frame_count());
    let result = (|| {
        let mut writer = create_raw(output, header).map_err(|e| video_error(output, e))?;
        for frame in scene {
            writer.write_frame(&frame.map_err(runtime)?).map_err(|e| video_error(output, e))?;
        }
        let frames = writer.frames_written();
        let (_, bytes) = writer.finish().map_err(|e| video_error(output, e))?;
        Ok(SynthReport { frames, bytes })
    })();
    if result.is_err() {
        let _ = fs::remove_file(output);
    }
    result
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchReport {
    pub width: u32,
    pub height: u32,
    pub frames: u64,
    pub elapsed: Duration,
}

impl BenchReport {
    pub fn fps(&self) -> f64 {
        self.frames as f64 / self.elapsed.as_secs_f64().max(f64::MIN_POSITIVE)
    }

    pub fn us_per_frame(&self) -> f64 {
        self.elapsed.as_secs_f64() * 1e6 / self.frames as f64
    }

    pub fn passed(&self) -> bool {
        self.fps() >= REALTIME_FPS
    }
}

/// Times `frames` filter applications over a pool of pre-generated noisy
/// frames. Generation happens before the clock starts.
pub fn bench(width: u32, height: u32, frames: u64, params: FilterParams) -> Result<BenchReport, CliError> {
    params.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    if frames == 0 {
        return Err(CliError::Usage("--frames must be at least 1".into()));
    }
    if width == 0 || height == 0 {
        return Err(CliError::Usage(format!("dimensions {width}x{height} must be at least 1x1")));
    }
    let pool_len = frames.min(32) as u32;
    let spec = SceneSpec {
        kind: SceneKind::Pulse {
            base: 128.0,
            amplitude: 2.0,
            freq_hz: 1.2,
            noise_sigma: 8.0,
        },
        width,
        height,
        fps: 30,
        duration_s: pool_len as f64 / 30.0,
        seed: 7,
    };
    let pool = synth(spec)
        .map_err(runtime)?
        .collect::<Result<Vec<Frame>, _>>()
        .map_err(runtime)?;
    let (w, h) = (width as usize, height as usize);
    let mut state = FilterState::new(params, w, h).map_err(runtime)?;
    let mut out = Frame::filled(w, h, [0; 3], 0, 0).map_err(runtime)?;

    let start = Instant::now();
    for i in 0..frames {
        let frame = &pool[(i % pool.len() as u64) as usize];
        state.apply_into(frame, &params, &mut out).map_err(runtime)?;
        black_box(&out);
    }
    let elapsed = start.elapsed();
    Ok(BenchReport {
        width,
        height,
        frames,
        elapsed,
    })
}

/// Serves until interrupted (Ctrl-C / SIGINT). `on_listen` receives the bound address.
pub fn serve(
    host: &str,
    port: u16,
    config: ServiceConfig,
    on_listen: impl FnOnce(std::net::SocketAddr),
) -> Result<(), CliError> {
    config.params.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    if config.max_in_flight == 0 {
        return Err(CliError::Usage("--max-in-flight must be at least 1".into()));
    }
    if let Some(dir) = &config.static_dir {
        if !dir.is_dir() {
            return Err(CliError::Usage(format!("static dir {} is not a directory", dir.display())));
        }
    }
    let rt = tokio::runtime::Runtime::new().map_err(runtime)?;
    rt.block_on(async {
        let listener = tokio::net::TcpListener::bind((host, port))
            .await
            .map_err(|e| CliError::Runtime(format!("cannot listen on {host}:{port}: {e}")))?;
        on_listen(listener.local_addr().map_err(runtime)?);
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        memad_service::serve(listener, config, shutdown).await.map_err(runtime)
    })
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

fn video_error(path: &Path, e: VideoError) -> CliError {
    CliError::Runtime(format!("{}: {e}", path.display()))
}
