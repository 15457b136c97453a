use std::io::{self, Write};

use crate::{Spectrum, TimeSeries};

/// `freq_hz,power`, one row per bin. Values use the shortest decimal form
/// that round-trips to the same `f64`.
pub fn write_spectrum_csv(spectrum: &Spectrum, mut out: impl Write) -> io::Result<()> {
    writeln!(out, "freq_hz,power")?;
    for (f, p) in spectrum.freqs().iter().zip(spectrum.power()) {
        writeln!(out, "{f},{p}")?;
    }
    out.flush()
}

/// `t_s,value`, with `t_s = i / fs`.
pub fn write_series_csv(series: &TimeSeries, mut out: impl Write) -> io::Result<()> {
    writeln!(out, "t_s,value")?;
    for (i, v) in series.samples().iter().enumerate() {
        writeln!(out, "{},{v}", i as f64 / series.fs())?;
    }
    out.flush()
}
