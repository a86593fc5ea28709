//! `CSVB` compressed container.
//!
//! Layout, all fields little-endian:
//!
//! ```text
//! magic "CSVB"            4 bytes
//! version = 1             u16
//! basis code              u8   (0 DCT, 1 DFT, 2 DB2, 3 DB8)
//! matrix code             u8   (0 GAUSSIAN, 1 BERNOULLI, 2 WANG)
//! n                       u32
//! m                       u32
//! seed                    u64
//! sample_rate_hz          f64
//! segment_count           u32
//! [WANG only] m x u32     row indices in draw order
//! per segment:
//!   true_length           u32
//!   m x f64               measurements
//! ```
//!
//! The format has no checksum. The reader rejects anything structurally
//! inconsistent and verifies Wang indices against regeneration from the
//! seed, but a flipped mantissa bit in the sample rate or a flipped seed
//! bit for a Gaussian/Bernoulli matrix cannot be detected.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::measure::{build_matrix, MatrixKind, MatrixSpec};
use crate::transforms::{BasisKind, BasisSpec};

pub const CONTAINER_MAGIC: [u8; 4] = *b"CSVB";
pub const CONTAINER_VERSION: u16 = 1;
const HEADER_LEN: usize = 36;

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    /// Samples of this block that belong to the signal; the rest is padding.
    pub true_length: usize,
    pub measurements: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompressedContainer {
    pub basis: BasisSpec,
    pub matrix: MatrixSpec,
    pub sample_rate_hz: f64,
    pub segments: Vec<Segment>,
}

impl CompressedContainer {
    pub fn validate(&self) -> Result<()> {
        let (n, m) = (self.basis.n(), self.matrix.m());
        if self.matrix.n() != n {
            return Err(Error::dim(n, self.matrix.n()));
        }
        if !(self.sample_rate_hz > 0.0 && self.sample_rate_hz.is_finite()) {
            return Err(Error::param("container sample rate must be positive and finite"));
        }
        if u32::try_from(n).is_err() || u32::try_from(self.segments.len()).is_err() {
            return Err(Error::param("container dimensions exceed u32"));
        }
        let last = self.segments.len().saturating_sub(1);
        for (i, seg) in self.segments.iter().enumerate() {
            if seg.measurements.len() != m {
                return Err(Error::dim(m, seg.measurements.len()));
            }
            if seg.true_length == 0 || seg.true_length > n || (i != last && seg.true_length != n) {
                return Err(Error::param(format!(
                    "segment {i} has invalid true length {}",
                    seg.true_length
                )));
            }
        }
        Ok(())
    }

    /// Total number of original samples.
    pub fn signal_len(&self) -> usize {
        self.segments.iter().map(|s| s.true_length).sum()
    }
}

pub fn encode_container(c: &CompressedContainer) -> Result<Vec<u8>> {
    c.validate()?;
    let (n, m) = (c.basis.n(), c.matrix.m());
    let wang = c.matrix.wang_indices();
    let mut out = Vec::with_capacity(
        HEADER_LEN + wang.map_or(0, |w| 4 * w.len()) + c.segments.len() * (4 + 8 * m),
    );
    out.extend_from_slice(&CONTAINER_MAGIC);
    out.extend_from_slice(&CONTAINER_VERSION.to_le_bytes());
    out.push(c.basis.kind().code());
    out.push(c.matrix.kind().code());
    out.extend_from_slice(&(n as u32).to_le_bytes());
    out.extend_from_slice(&(m as u32).to_le_bytes());
    out.extend_from_slice(&c.matrix.seed().to_le_bytes());
    out.extend_from_slice(&c.sample_rate_hz.to_le_bytes());
    out.extend_from_slice(&(c.segments.len() as u32).to_le_bytes());
    if let Some(idx) = wang {
        for &i in idx {
            out.extend_from_slice(&(i as u32).to_le_bytes());
        }
    }
    for seg in &c.segments {
        out.extend_from_slice(&(seg.true_length as u32).to_le_bytes());
        for v in &seg.measurements {
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    Ok(out)
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(len).filter(|&e| e <= self.bytes.len());
        let end = end.ok_or_else(|| Error::Format("container is truncated".into()))?;
        let out = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u16(&mut self) -> Result<u16> {
        Ok(u16::from_le_bytes(self.take(2)?.try_into().expect("2 bytes")))
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().expect("4 bytes")))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }

    fn f64(&mut self) -> Result<f64> {
        Ok(f64::from_le_bytes(self.take(8)?.try_into().expect("8 bytes")))
    }
}

pub fn decode_container(bytes: &[u8]) -> Result<CompressedContainer> {
    let mut cur = Cursor { bytes, pos: 0 };
    if cur.take(4)? != CONTAINER_MAGIC {
        return Err(Error::Format("bad magic, not a CSVB container".into()));
    }
    let version = cur.u16()?;
    if version != CONTAINER_VERSION {
        return Err(Error::Format(format!("unsupported container version {version}")));
    }
    let basis_code = cur.u8()?;
    let matrix_code = cur.u8()?;
    let basis_kind = BasisKind::from_code(basis_code)
        .ok_or_else(|| Error::Format(format!("unknown basis code {basis_code}")))?;
    let matrix_kind = MatrixKind::from_code(matrix_code)
        .ok_or_else(|| Error::Format(format!("unknown matrix code {matrix_code}")))?;
    let n = cur.u32()? as usize;
    let m = cur.u32()? as usize;
    let seed = cur.u64()?;
    let sample_rate_hz = cur.f64()?;
    let segment_count = cur.u32()? as usize;

    let basis = BasisSpec::new(basis_kind, n).map_err(|e| Error::Format(e.to_string()))?;
    if m == 0 || m > n {
        return Err(Error::Format(format!("invalid measurement count m={m} for n={n}")));
    }
    if !(sample_rate_hz > 0.0 && sample_rate_hz.is_finite()) {
        return Err(Error::Format(format!("invalid sample rate {sample_rate_hz}")));
    }
    let index_bytes = if matrix_kind == MatrixKind::Wang { 4 * m } else { 0 };
    let expected = (segment_count as u128) * (4 + 8 * m as u128) + (HEADER_LEN + index_bytes) as u128;
    if expected != bytes.len() as u128 {
        return Err(Error::Format(format!(
            "container length {} does not match header (expected {expected})",
            bytes.len()
        )));
    }

    let matrix = if matrix_kind == MatrixKind::Wang {
        let stored = (0..m).map(|_| cur.u32().map(|v| v as usize)).collect::<Result<Vec<_>>>()?;
        let regenerated = build_matrix(MatrixKind::Wang, m, n, seed)?;
        if regenerated.wang_indices() != Some(stored.as_slice()) {
            return Err(Error::Integrity(
                "stored Wang indices do not match regeneration from the seed".into(),
            ));
        }
        regenerated
    } else {
        build_matrix(matrix_kind, m, n, seed)?
    };

    let mut segments = Vec::with_capacity(segment_count);
    for i in 0..segment_count {
        let true_length = cur.u32()? as usize;
        if true_length == 0 || true_length > n || (i + 1 != segment_count && true_length != n) {
            return Err(Error::Format(format!("segment {i} has invalid true length {true_length}")));
        }
        let measurements = (0..m).map(|_| cur.f64()).collect::<Result<Vec<_>>>()?;
        segments.push(Segment {
            true_length,
            measurements,
        });
    }
    Ok(CompressedContainer {
        basis,
        matrix,
        sample_rate_hz,
        segments,
    })
}

pub fn write_container(path: &Path, c: &CompressedContainer) -> Result<()> {
    fs::write(path, encode_container(c)?)?;
    Ok(())
}

pub fn read_container(path: &Path) -> Result<CompressedContainer> {
    decode_container(&fs::read(path)?)
}
