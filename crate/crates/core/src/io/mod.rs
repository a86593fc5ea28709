//! Signal ingestion, block segmentation and the compressed container.

mod container;
pub mod wav;

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use container::{
    decode_container, encode_container, read_container, write_container, CompressedContainer, Segment,
    CONTAINER_MAGIC, CONTAINER_VERSION,
};

/// Default block length.
pub const DEFAULT_BLOCK_LEN: usize = 1024;

#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub samples: Vec<f64>,
    pub sample_rate_hz: f64,
    pub source: String,
}

impl Signal {
    pub fn new(samples: Vec<f64>, sample_rate_hz: f64, source: impl Into<String>) -> Result<Self> {
        if !(sample_rate_hz > 0.0 && sample_rate_hz.is_finite()) {
            return Err(Error::param(format!("sample rate must be positive, got {sample_rate_hz}")));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::param(format!("sample {i} is not finite")));
        }
        Ok(Self {
            samples,
            sample_rate_hz,
            source: source.into(),
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalFormat {
    Csv,
    Wav,
    RawF32,
    RawF64,
}

impl FromStr for SignalFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "csv" => Ok(SignalFormat::Csv),
            "wav" => Ok(SignalFormat::Wav),
            "raw-f32" | "f32" => Ok(SignalFormat::RawF32),
            "raw-f64" | "f64" => Ok(SignalFormat::RawF64),
            other => Err(Error::param(format!("unknown signal format '{other}'"))),
        }
    }
}

impl SignalFormat {
    /// Guess from the file extension, falling back to CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()).map(str::to_ascii_lowercase).as_deref() {
            Some("wav") => SignalFormat::Wav,
            Some("f32") => SignalFormat::RawF32,
            Some("f64") | Some("bin") | Some("raw") => SignalFormat::RawF64,
            _ => SignalFormat::Csv,
        }
    }
}

/// Sample rate assumed for CSV input without an override.
pub const CSV_DEFAULT_SAMPLE_RATE: f64 = 1.0;

pub fn read_signal(path: &Path, format: SignalFormat, sample_rate_override: Option<f64>) -> Result<Signal> {
    read_signal_channel(path, format, sample_rate_override, 0)
}

/// Read one channel: the `channel`-th comma-separated column for CSV, the
/// `channel`-th interleaved channel for WAV. Raw files are single-channel.
pub fn read_signal_channel(
    path: &Path,
    format: SignalFormat,
    sample_rate_override: Option<f64>,
    channel: usize,
) -> Result<Signal> {
    let source = path.display().to_string();
    match format {
        SignalFormat::Csv => {
            let text = fs::read_to_string(path)?;
            let samples = parse_csv(&text, channel)?;
            Signal::new(samples, sample_rate_override.unwrap_or(CSV_DEFAULT_SAMPLE_RATE), source)
        }
        SignalFormat::Wav => {
            let wav = wav::parse(&fs::read(path)?)?;
            let samples = wav.channel(channel)?;
            Signal::new(samples, sample_rate_override.unwrap_or(wav.sample_rate as f64), source)
        }
        SignalFormat::RawF32 | SignalFormat::RawF64 => {
            if channel != 0 {
                return Err(Error::param("raw files carry a single channel"));
            }
            let rate = sample_rate_override
                .ok_or_else(|| Error::param("raw input needs an explicit sample rate"))?;
            let bytes = fs::read(path)?;
            let samples = decode_raw(&bytes, format)?;
            Signal::new(samples, rate, source)
        }
    }
}

fn parse_csv(text: &str, channel: usize) -> Result<Vec<f64>> {
    let mut samples = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let field = line.split(',').nth(channel).ok_or_else(|| Error::Parse {
            line: i + 1,
            message: format!("no column {channel}"),
        })?;
        let value: f64 = field.trim().parse().map_err(|_| Error::Parse {
            line: i + 1,
            message: format!("'{}' is not a number", field.trim()),
        })?;
        if !value.is_finite() {
            return Err(Error::Parse {
                line: i + 1,
                message: "non-finite sample".into(),
            });
        }
        samples.push(value);
    }
    Ok(samples)
}

fn decode_raw(bytes: &[u8], format: SignalFormat) -> Result<Vec<f64>> {
    let width = if format == SignalFormat::RawF32 { 4 } else { 8 };
    if !bytes.len().is_multiple_of(width) {
        return Err(Error::Format(format!(
            "raw file length {} is not a multiple of {width}",
            bytes.len()
        )));
    }
    Ok(bytes
        .chunks_exact(width)
        .map(|c| {
            if width == 4 {
                f32::from_le_bytes(c.try_into().expect("4-byte chunk")) as f64
            } else {
                f64::from_le_bytes(c.try_into().expect("8-byte chunk"))
            }
        })
        .collect())
}

/// Shortest exact text for a sample: 17 significant digits.
pub fn format_sample(v: f64) -> String {
    format!("{v:.16e}")
}

/// One sample per line with 17 significant digits; reads back bitwise.
pub fn write_signal_csv(path: &Path, x: &Signal) -> Result<()> {
    let mut out = String::with_capacity(x.len() * 24);
    for &v in &x.samples {
        let _ = writeln!(out, "{}", format_sample(v));
    }
    fs::write(path, out)?;
    Ok(())
}

pub fn write_signal_raw(path: &Path, x: &Signal, format: SignalFormat) -> Result<()> {
    let bytes: Vec<u8> = match format {
        SignalFormat::RawF64 => x.samples.iter().flat_map(|v| v.to_le_bytes()).collect(),
        SignalFormat::RawF32 => x.samples.iter().flat_map(|&v| (v as f32).to_le_bytes()).collect(),
        _ => return Err(Error::param("raw writer needs a raw format")),
    };
    fs::write(path, bytes)?;
    Ok(())
}

/// A length-`n` block; samples past `true_length` are zero padding.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub samples: Vec<f64>,
    pub true_length: usize,
}

/// Consecutive non-overlapping blocks of length `n`, tail zero-padded.
pub fn segment(x: &[f64], n: usize) -> Result<Vec<Block>> {
    if n < 2 {
        return Err(Error::param(format!("block length must be at least 2, got {n}")));
    }
    Ok(x.chunks(n)
        .map(|chunk| {
            let mut samples = chunk.to_vec();
            samples.resize(n, 0.0);
            Block {
                samples,
                true_length: chunk.len(),
            }
        })
        .collect())
}

/// Concatenate blocks with their padding stripped.
pub fn reassemble<'a>(blocks: impl IntoIterator<Item = (&'a [f64], usize)>) -> Vec<f64> {
    let mut out = Vec::new();
    for (samples, true_length) in blocks {
        out.extend_from_slice(&samples[..true_length.min(samples.len())]);
    }
    out
}
