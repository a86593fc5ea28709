//! Minimal RIFF/WAVE reader and writer: PCM16, PCM24 and IEEE float32,
//! including `WAVE_FORMAT_EXTENSIBLE` headers.

use crate::error::{Error, Result};

const FORMAT_PCM: u16 = 1;
const FORMAT_FLOAT: u16 = 3;
const FORMAT_EXTENSIBLE: u16 = 0xFFFE;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WavEncoding {
    Pcm16,
    Pcm24,
    Float32,
}

impl WavEncoding {
    fn bytes(self) -> usize {
        match self {
            WavEncoding::Pcm16 => 2,
            WavEncoding::Pcm24 => 3,
            WavEncoding::Float32 => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WavData {
    pub sample_rate: u32,
    pub channels: u16,
    pub encoding: WavEncoding,
    /// Interleaved samples, integer PCM normalized by `2^(bits-1)`.
    pub samples: Vec<f64>,
}

impl WavData {
    pub fn channel(&self, index: usize) -> Result<Vec<f64>> {
        let channels = self.channels as usize;
        if index >= channels {
            return Err(Error::param(format!(
                "channel {index} requested but the file has {channels}"
            )));
        }
        Ok(self.samples.iter().skip(index).step_by(channels).copied().collect())
    }
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

pub fn parse(bytes: &[u8]) -> Result<WavData> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(Error::Format("not a RIFF/WAVE file".into()));
    }
    let mut pos = 12;
    let mut fmt: Option<(u16, u16, u32, u16)> = None;
    let mut data: Option<&[u8]> = None;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32_at(bytes, pos + 4) as usize;
        let body_start = pos + 8;
        let body_end = body_start.saturating_add(size).min(bytes.len());
        let body = &bytes[body_start..body_end];
        match id {
            b"fmt " => {
                if body.len() < 16 {
                    return Err(Error::Format("truncated fmt chunk".into()));
                }
                let mut tag = u16_at(body, 0);
                let channels = u16_at(body, 2);
                let rate = u32_at(body, 4);
                let bits = u16_at(body, 14);
                if tag == FORMAT_EXTENSIBLE {
                    if body.len() < 26 {
                        return Err(Error::Format("truncated extensible fmt chunk".into()));
                    }
                    // First two bytes of the sub-format GUID carry the tag.
                    tag = u16_at(body, 24);
                }
                fmt = Some((tag, channels, rate, bits));
            }
            b"data" => data = Some(body),
            _ => {}
        }
        pos = body_start + size + (size & 1);
    }
    let (tag, channels, sample_rate, bits) =
        fmt.ok_or_else(|| Error::Format("missing fmt chunk".into()))?;
    let data = data.ok_or_else(|| Error::Format("missing data chunk".into()))?;
    if channels == 0 {
        return Err(Error::Format("zero channels".into()));
    }
    let encoding = match (tag, bits) {
        (FORMAT_PCM, 16) => WavEncoding::Pcm16,
        (FORMAT_PCM, 24) => WavEncoding::Pcm24,
        (FORMAT_FLOAT, 32) => WavEncoding::Float32,
        _ => {
            return Err(Error::Format(format!(
                "unsupported WAV encoding (format tag {tag}, {bits} bits)"
            )))
        }
    };
    let width = encoding.bytes();
    let frame = width * channels as usize;
    let usable = data.len() - data.len() % frame;
    let samples = data[..usable]
        .chunks_exact(width)
        .map(|c| match encoding {
            WavEncoding::Pcm16 => i16::from_le_bytes([c[0], c[1]]) as f64 / 32768.0,
            WavEncoding::Pcm24 => {
                let v = i32::from_le_bytes([0, c[0], c[1], c[2]]) >> 8;
                v as f64 / 8_388_608.0
            }
            WavEncoding::Float32 => f32::from_le_bytes([c[0], c[1], c[2], c[3]]) as f64,
        })
        .collect();
    Ok(WavData {
        sample_rate,
        channels,
        encoding,
        samples,
    })
}

/// Encode interleaved samples. Integer encodings take raw integer values
/// (already scaled), float32 takes the values as-is.
pub fn encode(sample_rate: u32, channels: u16, encoding: WavEncoding, samples: &[f64]) -> Vec<u8> {
    let width = encoding.bytes();
    let data_len = samples.len() * width;
    let (tag, bits) = match encoding {
        WavEncoding::Pcm16 => (FORMAT_PCM, 16u16),
        WavEncoding::Pcm24 => (FORMAT_PCM, 24),
        WavEncoding::Float32 => (FORMAT_FLOAT, 32),
    };
    let mut out = Vec::with_capacity(44 + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&((36 + data_len) as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&tag.to_le_bytes());
    out.extend_from_slice(&channels.to_le_bytes());
    out.extend_from_slice(&sample_rate.to_le_bytes());
    let block_align = channels as u32 * width as u32;
    out.extend_from_slice(&(sample_rate * block_align).to_le_bytes());
    out.extend_from_slice(&(block_align as u16).to_le_bytes());
    out.extend_from_slice(&bits.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for &s in samples {
        match encoding {
            WavEncoding::Pcm16 => out.extend_from_slice(&(s as i16).to_le_bytes()),
            WavEncoding::Pcm24 => out.extend_from_slice(&(s as i32).to_le_bytes()[..3]),
            WavEncoding::Float32 => out.extend_from_slice(&(s as f32).to_le_bytes()),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pcm16_full_scale_square_wave() {
        let raw: Vec<f64> = (0..8).map(|i| if i % 2 == 0 { 32767.0 } else { -32767.0 }).collect();
        let wav = parse(&encode(8000, 1, WavEncoding::Pcm16, &raw)).unwrap();
        assert_eq!(wav.sample_rate, 8000);
        for (i, v) in wav.samples.iter().enumerate() {
            let expected = if i % 2 == 0 { 32767.0 / 32768.0 } else { -32767.0 / 32768.0 };
            assert_eq!(*v, expected);
        }
    }

    #[test]
    fn pcm24_and_float_and_channels() {
        let raw = [8_388_607.0, -8_388_608.0, 0.0, 4_194_304.0];
        let wav = parse(&encode(44100, 2, WavEncoding::Pcm24, &raw)).unwrap();
        assert_eq!(wav.channel(0).unwrap(), vec![8_388_607.0 / 8_388_608.0, 0.0]);
        assert_eq!(wav.channel(1).unwrap(), vec![-1.0, 0.5]);
        assert!(wav.channel(2).is_err());

        let wav = parse(&encode(100, 1, WavEncoding::Float32, &[0.25, -0.5])).unwrap();
        assert_eq!(wav.samples, vec![0.25, -0.5]);
    }

    #[test]
    fn unsupported_encodings_are_format_errors() {
        let mut bytes = encode(100, 1, WavEncoding::Pcm16, &[1.0, 2.0]);
        bytes[34] = 8; // bits per sample
        assert!(matches!(parse(&bytes), Err(Error::Format(_))));
        assert!(matches!(parse(b"RIFF\0\0\0\0WAVX"), Err(Error::Format(_))));
    }
}
