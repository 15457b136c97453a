//! The `MEMADRAW` container.
//!
//! ```text
//! offset  size  field
//!      0     8  magic "MEMADRAW"
//!      8     2  version, u16 LE (= 1)
//!     10     4  width, u32 LE
//!     14     4  height, u32 LE
//!     18     4  fps numerator, u32 LE
//!     22     4  fps denominator, u32 LE
//!     26     4  frame count, u32 LE
//!     30     .  frames, each width*height interleaved RGB24, row-major
//! ```

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::Path;

use memad_core::Frame;

use crate::{frame_timestamp_us, Result, StreamInfo, VideoError, VideoStream};

pub const MAGIC: [u8; 8] = *b"MEMADRAW";
pub const VERSION: u16 = 1;
pub const HEADER_LEN: usize = 30;
const FRAME_COUNT_OFFSET: u64 = 26;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RawVideoHeader {
    pub width: u32,
    pub height: u32,
    pub fps_num: u32,
    pub fps_den: u32,
    pub frame_count: u32,
}

impl RawVideoHeader {
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(VideoError::InvalidHeader(format!(
                "dimensions {}x{} must be at least 1x1",
                self.width, self.height
            )));
        }
        if self.fps_num == 0 || self.fps_den == 0 {
            return Err(VideoError::InvalidHeader(format!(
                "frame rate {}/{} must have nonzero terms",
                self.fps_num, self.fps_den
            )));
        }
        Ok(())
    }

    pub fn frame_bytes(&self) -> u64 {
        self.width as u64 * self.height as u64 * 3
    }

    /// Total file length implied by the header.
    pub fn file_len(&self) -> u64 {
        HEADER_LEN as u64 + self.frame_count as u64 * self.frame_bytes()
    }

    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut b = [0u8; HEADER_LEN];
        b[0..8].copy_from_slice(&MAGIC);
        b[8..10].copy_from_slice(&VERSION.to_le_bytes());
        b[10..14].copy_from_slice(&self.width.to_le_bytes());
        b[14..18].copy_from_slice(&self.height.to_le_bytes());
        b[18..22].copy_from_slice(&self.fps_num.to_le_bytes());
        b[22..26].copy_from_slice(&self.fps_den.to_le_bytes());
        b[26..30].copy_from_slice(&self.frame_count.to_le_bytes());
        b
    }

    pub fn from_bytes(b: &[u8; HEADER_LEN]) -> Result<Self> {
        if b[0..8] != MAGIC {
            return Err(VideoError::BadMagic {
                found: b[0..8].to_vec(),
            });
        }
        let u32_at = |o: usize| u32::from_le_bytes(b[o..o + 4].try_into().unwrap());
        let version = u16::from_le_bytes([b[8], b[9]]);
        if version != VERSION {
            return Err(VideoError::BadVersion { found: version });
        }
        let header = Self {
            width: u32_at(10),
            height: u32_at(14),
            fps_num: u32_at(18),
            fps_den: u32_at(22),
            frame_count: u32_at(26),
        };
        header.validate()?;
        Ok(header)
    }

    pub fn info(&self) -> StreamInfo {
        StreamInfo {
            width: self.width,
            height: self.height,
            fps_num: self.fps_num,
            fps_den: self.fps_den,
            frame_count: Some(self.frame_count),
        }
    }

    pub fn from_info(info: &StreamInfo, frame_count: u32) -> Self {
        Self {
            width: info.width,
            height: info.height,
            fps_num: info.fps_num,
            fps_den: info.fps_den,
            frame_count,
        }
    }
}

/// Reads as many bytes as are available up to `buf.len()`.
fn read_full(src: &mut impl Read, buf: &mut [u8]) -> io::Result<usize> {
    let mut filled = 0;
    while filled < buf.len() {
        match src.read(&mut buf[filled..]) {
            Ok(0) => break,
            Ok(n) => filled += n,
            Err(e) if e.kind() == io::ErrorKind::Interrupted => {}
            Err(e) => return Err(e),
        }
    }
    Ok(filled)
}

/// Streaming `MEMADRAW` reader; holds one frame buffer.
pub struct RawReader<R> {
    source: R,
    header: RawVideoHeader,
    next: u32,
    offset: u64,
    buf: Vec<u8>,
    done: bool,
}

impl<R: Read> RawReader<R> {
    pub fn new(mut source: R) -> Result<Self> {
        let mut hdr = [0u8; HEADER_LEN];
        let got = read_full(&mut source, &mut hdr)?;
        if got >= 8 && hdr[0..8] != MAGIC {
            return Err(VideoError::BadMagic {
                found: hdr[0..8].to_vec(),
            });
        }
        if got < HEADER_LEN {
            return Err(VideoError::Truncated {
                offset: got as u64,
                expected: HEADER_LEN as u64,
            });
        }
        let header = RawVideoHeader::from_bytes(&hdr)?;
        let frame_bytes = usize::try_from(header.frame_bytes())
            .map_err(|_| VideoError::InvalidHeader("frame size exceeds address space".into()))?;
        Ok(Self {
            source,
            header,
            next: 0,
            offset: HEADER_LEN as u64,
            buf: vec![0; frame_bytes],
            done: false,
        })
    }

    pub fn header(&self) -> &RawVideoHeader {
        &self.header
    }

    fn read_frame(&mut self) -> Result<Option<Frame>> {
        if self.next == self.header.frame_count {
            // Anything after the declared payload makes the length wrong.
            let mut probe = [0u8; 1];
            if read_full(&mut self.source, &mut probe)? != 0 {
                return Err(VideoError::TrailingData {
                    offset: self.offset,
                });
            }
            return Ok(None);
        }
        let got = read_full(&mut self.source, &mut self.buf)?;
        if got < self.buf.len() {
            return Err(VideoError::Truncated {
                offset: self.offset + got as u64,
                expected: self.header.file_len(),
            });
        }
        self.offset += got as u64;
        let index = self.next as u64;
        self.next += 1;
        let frame = Frame::from_rgb24(
            self.header.width as usize,
            self.header.height as usize,
            &self.buf,
            index,
            frame_timestamp_us(index, self.header.fps_num, self.header.fps_den),
        )?;
        Ok(Some(frame))
    }
}

impl<R: Read> Iterator for RawReader<R> {
    type Item = Result<Frame>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        match self.read_frame() {
            Ok(Some(f)) => Some(Ok(f)),
            Ok(None) => {
                self.done = true;
                None
            }
            Err(e) => {
                self.done = true;
                Some(Err(e))
            }
        }
    }
}

impl<R: Read> VideoStream for RawReader<R> {
    fn info(&self) -> StreamInfo {
        self.header.info()
    }
}

pub fn read_raw<R: Read>(source: R) -> Result<RawReader<R>> {
    RawReader::new(source)
}

/// Opens a `MEMADRAW` file, checking its length against the header before
/// any frame is produced.
pub fn open_raw(path: impl AsRef<Path>) -> Result<RawReader<BufReader<File>>> {
    let file = File::open(path)?;
    let len = file.metadata()?.len();
    let reader = RawReader::new(BufReader::new(file))?;
    let expected = reader.header.file_len();
    if len < expected {
        return Err(VideoError::Truncated {
            offset: len,
            expected,
        });
    }
    if len > expected {
        return Err(VideoError::TrailingData { offset: expected });
    }
    Ok(reader)
}

/// Streaming `MEMADRAW` writer.
pub struct RawWriter<W: Write> {
    sink: W,
    header: RawVideoHeader,
    written: u64,
    bytes: u64,
    buf: Vec<u8>,
}

impl<W: Write> RawWriter<W> {
    pub fn new(mut sink: W, header: RawVideoHeader) -> Result<Self> {
        header.validate()?;
        sink.write_all(&header.to_bytes())?;
        let frame_bytes = usize::try_from(header.frame_bytes())
            .map_err(|_| VideoError::InvalidHeader("frame size exceeds address space".into()))?;
        Ok(Self {
            sink,
            header,
            written: 0,
            bytes: HEADER_LEN as u64,
            buf: vec![0; frame_bytes],
        })
    }

    pub fn write_frame(&mut self, frame: &Frame) -> Result<()> {
        if frame.width() != self.header.width as usize || frame.height() != self.header.height as usize {
            return Err(VideoError::InvalidHeader(format!(
                "frame {} is {}x{}, container is {}x{}",
                frame.index(),
                frame.width(),
                frame.height(),
                self.header.width,
                self.header.height
            )));
        }
        frame.write_rgb24(&mut self.buf);
        self.sink.write_all(&self.buf)?;
        self.written += 1;
        self.bytes += self.buf.len() as u64;
        Ok(())
    }

    pub fn frames_written(&self) -> u64 {
        self.written
    }

    /// Flushes and checks the declared frame count. Returns the sink and the
    /// total number of bytes written.
    pub fn finish(mut self) -> Result<(W, u64)> {
        if self.written != self.header.frame_count as u64 {
            return Err(VideoError::FrameCount {
                declared: self.header.frame_count,
                actual: self.written,
            });
        }
        self.sink.flush()?;
        Ok((self.sink, self.bytes))
    }
}

impl<W: Write + Seek> RawWriter<W> {
    /// Rewrites the header's frame count to the number of frames actually
    /// written, for sources whose length is not known up front.
    pub fn finish_with_count(mut self) -> Result<(W, u64)> {
        let count = u32::try_from(self.written)
            .map_err(|_| VideoError::InvalidHeader("more than u32::MAX frames".into()))?;
        self.sink.flush()?;
        let end = self.sink.stream_position()?;
        self.sink.seek(SeekFrom::Start(FRAME_COUNT_OFFSET))?;
        self.sink.write_all(&count.to_le_bytes())?;
        self.sink.seek(SeekFrom::Start(end))?;
        self.header.frame_count = count;
        self.finish()
    }
}

/// Writes a whole stream; returns the byte count (`30 + frames * w * h * 3`).
pub fn write_raw<'a, W: Write>(
    header: &RawVideoHeader,
    frames: impl IntoIterator<Item = &'a Frame>,
    sink: W,
) -> Result<u64> {
    let mut writer = RawWriter::new(sink, *header)?;
    for f in frames {
        writer.write_frame(f)?;
    }
    Ok(writer.finish()?.1)
}

/// Creates `path` and returns a buffered writer for it.
pub fn create_raw(path: impl AsRef<Path>, header: RawVideoHeader) -> Result<RawWriter<BufWriter<File>>> {
    RawWriter::new(BufWriter::new(File::create(path)?), header)
}
