//! Deterministic synthetic scenes.
//!
//! All randomness comes from [`SplitMix64`] seeded with `SceneSpec::seed`,
//! drawn in a fixed order (frame-major, then row-major pixel order), so a
//! scene is a pure function of its spec.
//!
//! | kind            | content                                                        |
//! |-----------------|----------------------------------------------------------------|
//! | `pulse`         | R = base + amp·sin(2πft) + N(0, σ²) per pixel; G = B = base     |
//! | `specks`        | single-pixel points of `base + delta` falling over gray 128     |
//! | `vibrating-edge`| vertical dark/bright step whose position oscillates sub-pixel |
//! | `constant`      | uniform gray                                                   |

use std::f64::consts::TAU;

use memad_core::{quantize, Frame};

use crate::{frame_timestamp_us, Result, StreamInfo, VideoError, VideoStream};

pub const SPECK_BACKGROUND: u8 = 128;
pub const EDGE_DARK: f64 = 64.0;
pub const EDGE_BRIGHT: f64 = 192.0;

/// SplitMix64 (Steele, Lea & Flood): `state += 0x9E3779B97F4A7C15`, then
/// the 64-bit finalizer with multipliers `0xBF58476D1CE4E5B9` and
/// `0x94D049BB133111EB`.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
    spare: Option<f64>,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self {
            state: seed,
            spare: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal via Box-Muller; the second value of each pair is cached.
    pub fn next_gaussian(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = 1.0 - self.next_f64();
        let u2 = self.next_f64();
        let r = (-2.0 * u1.ln()).sqrt();
        let (s, c) = (TAU * u2).sin_cos();
        self.spare = Some(r * s);
        r * c
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SceneKind {
    Pulse {
        base: f64,
        amplitude: f64,
        freq_hz: f64,
        noise_sigma: f64,
    },
    Specks {
        count: u32,
        delta: i32,
        /// Downward speed in pixels per frame.
        velocity: f64,
    },
    VibratingEdge {
        edge_x: f64,
        amplitude_px: f64,
        freq_hz: f64,
    },
    Constant {
        value: u8,
    },
}

impl SceneKind {
    pub fn name(&self) -> &'static str {
        match self {
            SceneKind::Pulse { .. } => "pulse",
            SceneKind::Specks { .. } => "specks",
            SceneKind::VibratingEdge { .. } => "vibrating-edge",
            SceneKind::Constant { .. } => "constant",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneSpec {
    pub kind: SceneKind,
    pub width: u32,
    pub height: u32,
    pub fps: u32,
    pub duration_s: f64,
    pub seed: u64,
}

impl SceneSpec {
    pub fn frame_count(&self) -> u32 {
        (self.fps as f64 * self.duration_s).round() as u32
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(VideoError::InvalidSpec(msg));
        if self.width == 0 || self.height == 0 {
            return bad(format!("dimensions {}x{} must be positive", self.width, self.height));
        }
        if self.fps == 0 {
            return bad("fps must be positive".into());
        }
        if !(self.duration_s.is_finite() && self.duration_s > 0.0) {
            return bad(format!("duration {} s must be positive", self.duration_s));
        }
        let frames = self.fps as f64 * self.duration_s;
        if frames.round() < 1.0 || frames.round() > u32::MAX as f64 {
            return bad(format!("duration {} s yields {frames} frames", self.duration_s));
        }
        let nyquist = self.fps as f64 / 2.0;
        let check_freq = |f: f64| {
            if !(f.is_finite() && f >= 0.0) {
                return bad(format!("frequency {f} Hz must be finite and non-negative"));
            }
            if f >= nyquist {
                return bad(format!("frequency {f} Hz is not below the Nyquist limit {nyquist} Hz"));
            }
            Ok(())
        };
        match self.kind {
            SceneKind::Pulse {
                base,
                amplitude,
                freq_hz,
                noise_sigma,
            } => {
                check_freq(freq_hz)?;
                if !(base.is_finite() && amplitude.is_finite()) {
                    return bad("pulse base and amplitude must be finite".into());
                }
                if !(noise_sigma.is_finite() && noise_sigma >= 0.0) {
                    return bad(format!("noise sigma {noise_sigma} must be non-negative"));
                }
            }
            SceneKind::Specks { velocity, .. } => {
                if !velocity.is_finite() {
                    return bad("speck velocity must be finite".into());
                }
            }
            SceneKind::VibratingEdge {
                edge_x,
                amplitude_px,
                freq_hz,
            } => {
                check_freq(freq_hz)?;
                if !(edge_x.is_finite() && amplitude_px.is_finite() && amplitude_px >= 0.0) {
                    return bad("edge position and amplitude must be finite, amplitude non-negative".into());
                }
            }
            SceneKind::Constant { .. } => {}
        }
        Ok(())
    }

    pub fn info(&self) -> StreamInfo {
        StreamInfo {
            width: self.width,
            height: self.height,
            fps_num: self.fps,
            fps_den: 1,
            frame_count: Some(self.frame_count()),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Speck {
    x: usize,
    y0: f64,
}

/// Lazily generated scene; one frame is built per `next()`.
pub struct SceneStream {
    spec: SceneSpec,
    rng: SplitMix64,
    specks: Vec<Speck>,
    next: u32,
    total: u32,
}

pub fn synth(spec: SceneSpec) -> Result<SceneStream> {
    spec.validate()?;
    let mut rng = SplitMix64::new(spec.seed);
    let specks = match spec.kind {
        SceneKind::Specks { count, .. } => (0..count)
            .map(|_| Speck {
                x: (rng.next_u64() % spec.width as u64) as usize,
                y0: rng.next_f64() * spec.height as f64,
            })
            .collect(),
        _ => Vec::new(),
    };
    let total = spec.frame_count();
    Ok(SceneStream {
        spec,
        rng,
        specks,
        next: 0,
        total,
    })
}

impl SceneStream {
    pub fn spec(&self) -> &SceneSpec {
        &self.spec
    }

    /// Pixel positions `(x, y)` covered by specks at frame `t`.
    pub fn speck_positions(&self, t: u64) -> Vec<(usize, usize)> {
        let SceneKind::Specks { velocity, .. } = self.spec.kind else {
            return Vec::new();
        };
        let h = self.spec.height as f64;
        self.specks
            .iter()
            .map(|s| {
                let y = (s.y0 + velocity * t as f64).rem_euclid(h);
                (s.x, (y.floor() as usize).min(self.spec.height as usize - 1))
            })
            .collect()
    }

    fn render(&mut self, t: u64) -> Vec<u8> {
        let w = self.spec.width as usize;
        let h = self.spec.height as usize;
        let n = w * h;
        let seconds = t as f64 / self.spec.fps as f64;
        match self.spec.kind.clone() {
            SceneKind::Pulse {
                base,
                amplitude,
                freq_hz,
                noise_sigma,
            } => {
                let level = base + amplitude * (TAU * freq_hz * seconds).sin();
                let mut data = Vec::with_capacity(3 * n);
                if noise_sigma > 0.0 {
                    data.extend((0..n).map(|_| quantize(level + noise_sigma * self.rng.next_gaussian())));
                } else {
                    data.resize(n, quantize(level));
                }
                data.resize(3 * n, quantize(base));
                data
            }
            SceneKind::Specks { delta, .. } => {
                let mut data = vec![SPECK_BACKGROUND; 3 * n];
                let value = (SPECK_BACKGROUND as i32 + delta).clamp(0, 255) as u8;
                for (x, y) in self.speck_positions(t) {
                    let i = y * w + x;
                    data[i] = value;
                    data[n + i] = value;
                    data[2 * n + i] = value;
                }
                data
            }
            SceneKind::VibratingEdge {
                edge_x,
                amplitude_px,
                freq_hz,
            } => {
                let edge = edge_x + amplitude_px * (TAU * freq_hz * seconds).sin();
                let row: Vec<u8> = (0..w)
                    .map(|x| {
                        // Fraction of pixel [x, x+1) lying right of the edge.
                        let bright = (x as f64 + 1.0 - edge).clamp(0.0, 1.0);
                        quantize(EDGE_DARK + (EDGE_BRIGHT - EDGE_DARK) * bright)
                    })
                    .collect();
                let mut data = Vec::with_capacity(3 * n);
                for _ in 0..3 * h {
                    data.extend_from_slice(&row);
                }
                data
            }
            SceneKind::Constant { value } => vec![value; 3 * n],
        }
    }
}

impl Iterator for SceneStream {
    type Item = Result<Frame>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next >= self.total {
            return None;
        }
        let t = self.next as u64;
        self.next += 1;
        let data = self.render(t);
        Some(
            Frame::from_planes(
                self.spec.width as usize,
                self.spec.height as usize,
                data,
                t,
                frame_timestamp_us(t, self.spec.fps, 1),
            )
            .map_err(VideoError::from),
        )
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

impl VideoStream for SceneStream {
    fn info(&self) -> StreamInfo {
        self.spec.info()
    }
}
