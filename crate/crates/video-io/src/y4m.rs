//! YUV4MPEG2 ingest.
//!
//! Only 4:4:4 chroma (`C444`) is accepted. Samples are converted to RGB
//! with full-range BT.601, since the container carries no matrix metadata:
//!
//! ```text
//! R = Y + 1.402    (Cr - 128)
//! G = Y - 0.344136 (Cb - 128) - 0.714136 (Cr - 128)
//! B = Y + 1.772    (Cb - 128)
//! ```

use std::io::{BufRead, ErrorKind};

use memad_core::{quantize, Frame};

use crate::{frame_timestamp_us, Result, StreamInfo, VideoError, VideoStream};

const MAX_LINE: usize = 4096;
const SIGNATURE: &str = "YUV4MPEG2";

/// Full-range BT.601 YCbCr to RGB for one sample.
pub fn ycbcr_to_rgb(y: u8, cb: u8, cr: u8) -> [u8; 3] {
    let y = y as f64;
    let cb = cb as f64 - 128.0;
    let cr = cr as f64 - 128.0;
    [
        quantize(y + 1.402 * cr),
        quantize(y - 0.344136 * cb - 0.714136 * cr),
        quantize(y + 1.772 * cb),
    ]
}

pub struct Y4mReader<R> {
    source: R,
    info: StreamInfo,
    offset: u64,
    next: u64,
    planes: Vec<u8>,
    done: bool,
}

/// Reads one `\n`-terminated line. `Ok(None)` on clean EOF before any byte.
fn read_line(source: &mut impl BufRead, offset: u64) -> Result<Option<Vec<u8>>> {
    let mut line = Vec::new();
    loop {
        let buf = match source.fill_buf() {
            Ok(b) => b,
            Err(e) if e.kind() == ErrorKind::Interrupted => continue,
            Err(e) => return Err(e.into()),
        };
        if buf.is_empty() {
            if line.is_empty() {
                return Ok(None);
            }
            return Err(VideoError::Truncated {
                offset: offset + line.len() as u64,
                expected: offset + line.len() as u64 + 1,
            });
        }
        if let Some(pos) = buf.iter().position(|&b| b == b'\n') {
            line.extend_from_slice(&buf[..pos]);
            source.consume(pos + 1);
            return Ok(Some(line));
        }
        let n = buf.len();
        line.extend_from_slice(buf);
        source.consume(n);
        if line.len() > MAX_LINE {
            return Err(VideoError::MalformedY4m {
                offset,
                reason: format!("header line longer than {MAX_LINE} bytes"),
            });
        }
    }
}

fn malformed(offset: u64, reason: impl Into<String>) -> VideoError {
    VideoError::MalformedY4m {
        offset,
        reason: reason.into(),
    }
}

fn parse_dim(tok: &str, offset: u64) -> Result<u32> {
    match tok.parse::<u32>() {
        Ok(v) if v > 0 => Ok(v),
        _ => Err(malformed(offset, format!("bad dimension {tok:?}"))),
    }
}

impl<R: BufRead> Y4mReader<R> {
    pub fn new(mut source: R) -> Result<Self> {
        let line = read_line(&mut source, 0)?.ok_or_else(|| malformed(0, "empty input"))?;
        let line = String::from_utf8(line).map_err(|_| malformed(0, "header is not ASCII"))?;
        let mut tokens = line.split(' ').filter(|t| !t.is_empty());
        if tokens.next() != Some(SIGNATURE) {
            return Err(malformed(0, "missing YUV4MPEG2 signature"));
        }

        let (mut width, mut height, mut fps) = (None, None, None);
        // Absent C means 4:2:0 per the format's convention.
        let mut colorspace = String::from("420jpeg");
        for tok in tokens {
            let (tag, value) = tok.split_at(1);
            match tag {
                "W" => width = Some(parse_dim(value, 0)?),
                "H" => height = Some(parse_dim(value, 0)?),
                "F" => {
                    let (n, d) = value
                        .split_once(':')
                        .ok_or_else(|| malformed(0, format!("bad frame rate {value:?}")))?;
                    match (n.parse::<u32>(), d.parse::<u32>()) {
                        (Ok(n), Ok(d)) if n > 0 && d > 0 => fps = Some((n, d)),
                        _ => return Err(malformed(0, format!("bad frame rate {value:?}"))),
                    }
                }
                "C" => colorspace = value.to_string(),
                "I" | "A" | "X" => {}
                _ => return Err(malformed(0, format!("unknown header field {tok:?}"))),
            }
        }
        let width = width.ok_or_else(|| malformed(0, "missing W"))?;
        let height = height.ok_or_else(|| malformed(0, "missing H"))?;
        let (fps_num, fps_den) = fps.ok_or_else(|| malformed(0, "missing F"))?;
        if colorspace != "444" {
            return Err(VideoError::UnsupportedColorspace(format!("C{colorspace}")));
        }
        let samples = width as usize * height as usize * 3;
        Ok(Self {
            source,
            info: StreamInfo {
                width,
                height,
                fps_num,
                fps_den,
                frame_count: None,
            },
            offset: line.len() as u64 + 1,
            next: 0,
            planes: vec![0; samples],
            done: false,
        })
    }

    fn read_frame(&mut self) -> Result<Option<Frame>> {
        let start = self.offset;
        let Some(line) = read_line(&mut self.source, start)? else {
            return Ok(None);
        };
        if !line.starts_with(b"FRAME") || !matches!(line.get(5), None | Some(b' ')) {
            return Err(malformed(start, "expected FRAME marker"));
        }
        self.offset += line.len() as u64 + 1;

        let mut filled = 0;
        while filled < self.planes.len() {
            match self.source.read(&mut self.planes[filled..]) {
                Ok(0) => break,
                Ok(n) => filled += n,
                Err(e) if e.kind() == ErrorKind::Interrupted => {}
                Err(e) => return Err(e.into()),
            }
        }
        if filled < self.planes.len() {
            return Err(VideoError::Truncated {
                offset: self.offset + filled as u64,
                expected: self.offset + self.planes.len() as u64,
            });
        }
        self.offset += filled as u64;

        let n = self.planes.len() / 3;
        let (ys, rest) = self.planes.split_at(n);
        let (cbs, crs) = rest.split_at(n);
        let mut rgb = vec![0u8; 3 * n];
        for (i, px) in rgb.chunks_exact_mut(3).enumerate() {
            px.copy_from_slice(&ycbcr_to_rgb(ys[i], cbs[i], crs[i]));
        }
        let index = self.next;
        self.next += 1;
        let frame = Frame::from_rgb24(
            self.info.width as usize,
            self.info.height as usize,
            &rgb,
            index,
            frame_timestamp_us(index, self.info.fps_num, self.info.fps_den),
        )?;
        Ok(Some(frame))
    }
}

impl<R: BufRead> Iterator for Y4mReader<R> {
    type Item = Result<Frame>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let r = self.read_frame();
        if !matches!(r, Ok(Some(_))) {
            self.done = true;
        }
        r.transpose()
    }
}

impl<R: BufRead> VideoStream for Y4mReader<R> {
    fn info(&self) -> StreamInfo {
        self.info
    }
}

pub fn read_y4m<R: BufRead>(source: R) -> Result<Y4mReader<R>> {
    Y4mReader::new(source)
}
