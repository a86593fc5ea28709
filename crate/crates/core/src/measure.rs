//! Measurement matrices `Φ`: Gaussian, Bernoulli and the Wang
//! row-subsampled identity.
//!
//! Gaussian entries are `N(0, 1/m)` and Bernoulli entries are `±1/√m`, both
//! drawn row-major from [`SplitMix64`] seeded with `seed`. Only the Wang
//! index list is stored; the dense kinds are regenerated on demand.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::rng::{SplitMix64, STREAM_MATRIX};
use crate::scalar::Scalar;
use crate::transforms::{Basis, Values};

/// Default cap on `m·n` for dense materialization.
pub const DEFAULT_MATERIALIZE_CAP: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MatrixKind {
    Gaussian,
    Bernoulli,
    Wang,
}

impl MatrixKind {
    pub const ALL: [MatrixKind; 3] = [MatrixKind::Gaussian, MatrixKind::Bernoulli, MatrixKind::Wang];

    pub fn code(self) -> u8 {
        match self {
            MatrixKind::Gaussian => 0,
            MatrixKind::Bernoulli => 1,
            MatrixKind::Wang => 2,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.code() == code)
    }

    pub fn name(self) -> &'static str {
        match self {
            MatrixKind::Gaussian => "gaussian",
            MatrixKind::Bernoulli => "bernoulli",
            MatrixKind::Wang => "wang",
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MatrixKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gaussian" => Ok(MatrixKind::Gaussian),
            "bernoulli" => Ok(MatrixKind::Bernoulli),
            "wang" => Ok(MatrixKind::Wang),
            other => Err(Error::param(format!("unknown matrix kind '{other}'"))),
        }
    }
}

/// Descriptor from which `Φ` can be regenerated bit-exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MatrixSpec {
    kind: MatrixKind,
    m: usize,
    n: usize,
    seed: u64,
    wang_indices: Option<Vec<usize>>,
}

/// Build a measurement matrix descriptor. For Wang, the row indices are the
/// first `m` positions of a seeded Fisher–Yates shuffle, kept in draw order.
pub fn build_matrix(kind: MatrixKind, m: usize, n: usize, seed: u64) -> Result<MatrixSpec> {
    check_dims(m, n)?;
    let wang_indices = match kind {
        MatrixKind::Wang => Some(SplitMix64::with_stream(seed, STREAM_MATRIX).partial_shuffle(n, m)),
        _ => None,
    };
    Ok(MatrixSpec {
        kind,
        m,
        n,
        seed,
        wang_indices,
    })
}

fn check_dims(m: usize, n: usize) -> Result<()> {
    if m == 0 || m > n {
        return Err(Error::param(format!(
            "measurement count must satisfy 1 <= m <= n, got m={m}, n={n}"
        )));
    }
    Ok(())
}

impl MatrixSpec {
    /// Assemble a spec from explicit parts. Wang indices are validated for
    /// range and distinctness but not checked against the seed; that check
    /// lives in the container reader.
    pub fn from_parts(
        kind: MatrixKind,
        m: usize,
        n: usize,
        seed: u64,
        wang_indices: Option<Vec<usize>>,
    ) -> Result<Self> {
        check_dims(m, n)?;
        match (kind, &wang_indices) {
            (MatrixKind::Wang, Some(idx)) => {
                if idx.len() != m {
                    return Err(Error::dim(m, idx.len()));
                }
                let mut seen = vec![false; n];
                for &i in idx {
                    if i >= n {
                        return Err(Error::Index { index: i, len: n });
                    }
                    if std::mem::replace(&mut seen[i], true) {
                        return Err(Error::param(format!("duplicate Wang index {i}")));
                    }
                }
            }
            (MatrixKind::Wang, None) => return Err(Error::param("Wang matrix requires row indices")),
            (_, Some(_)) => return Err(Error::param("row indices are only valid for Wang matrices")),
            (_, None) => {}
        }
        Ok(Self {
            kind,
            m,
            n,
            seed,
            wang_indices,
        })
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn wang_indices(&self) -> Option<&[usize]> {
        self.wang_indices.as_deref()
    }

    /// Rows of the dense kinds in generation order. Wang rows are handled
    /// separately and never go through the generator.
    fn for_each_row(&self, mut f: impl FnMut(usize, &[f64])) {
        let mut row = vec![0.0; self.n];
        match self.kind {
            MatrixKind::Wang => {
                for (i, &col) in self.wang_indices.as_deref().unwrap_or(&[]).iter().enumerate() {
                    row.fill(0.0);
                    row[col] = 1.0;
                    f(i, &row);
                }
            }
            MatrixKind::Gaussian => {
                let mut g = SplitMix64::with_stream(self.seed, STREAM_MATRIX);
                let sd = 1.0 / (self.m as f64).sqrt();
                for i in 0..self.m {
                    row.iter_mut().for_each(|v| *v = g.next_normal() * sd);
                    f(i, &row);
                }
            }
            MatrixKind::Bernoulli => {
                let mut g = SplitMix64::with_stream(self.seed, STREAM_MATRIX);
                let amp = 1.0 / (self.m as f64).sqrt();
                for i in 0..self.m {
                    row.iter_mut().for_each(|v| *v = g.next_sign() * amp);
                    f(i, &row);
                }
            }
        }
    }

    /// `y = Φx`. Wang measurements are copies of input samples.
    pub fn apply(&self, x: &[f64]) -> Result<MeasurementVector> {
        if x.len() != self.n {
            return Err(Error::dim(self.n, x.len()));
        }
        let values = match &self.wang_indices {
            Some(idx) => idx.iter().map(|&i| x[i]).collect(),
            None => {
                let mut y = vec![0.0; self.m];
                self.for_each_row(|i, row| {
                    y[i] = row.iter().zip(x).map(|(a, b)| a * b).sum();
                });
                y
            }
        };
        Ok(MeasurementVector {
            values,
            spec: self.clone(),
        })
    }

    /// Dense `m × n` matrix, row-major.
    pub fn materialize(&self) -> Result<Vec<Vec<f64>>> {
        self.materialize_with_cap(DEFAULT_MATERIALIZE_CAP)
    }

    pub fn materialize_with_cap(&self, cap: usize) -> Result<Vec<Vec<f64>>> {
        let entries = self.m.saturating_mul(self.n);
        if entries > cap {
            return Err(Error::Resource(format!(
                "{}x{} matrix has {entries} entries, cap is {cap}",
                self.m, self.n
            )));
        }
        let mut rows = Vec::with_capacity(self.m);
        self.for_each_row(|_, row| rows.push(row.to_vec()));
        Ok(rows)
    }

    /// Column `k` of the sensing product `ΦΨ`, i.e. `Φψ_k`. For Wang this
    /// is `ψ_k` read at the selected rows.
    pub fn sensing_column(&self, basis: &Basis, k: usize) -> Result<Values> {
        if basis.n() != self.n {
            return Err(Error::dim(self.n, basis.n()));
        }
        let col = basis.basis_column(k)?;
        if let Some(idx) = &self.wang_indices {
            return Ok(match col {
                Values::Real(c) => Values::Real(idx.iter().map(|&i| c[i]).collect()),
                Values::Complex(c) => Values::Complex(idx.iter().map(|&i| c[i]).collect()),
            });
        }
        Ok(match col {
            Values::Real(c) => Values::Real(self.apply(&c)?.values),
            Values::Complex(c) => {
                let re: Vec<f64> = c.iter().map(|z| z.re).collect();
                let im: Vec<f64> = c.iter().map(|z| z.im).collect();
                let yr = self.apply(&re)?.values;
                let yi = self.apply(&im)?.values;
                Values::Complex(yr.into_iter().zip(yi).map(|(a, b)| Complex64::new(a, b)).collect())
            }
        })
    }

    /// The full sensing matrix `A = ΦΨ`, built row by row as `Ψ^T φ_j`.
    pub fn sensing_matrix(&self, basis: &Basis) -> Result<SensingMatrix> {
        if basis.n() != self.n {
            return Err(Error::dim(self.n, basis.n()));
        }
        let (m, n) = (self.m, self.n);
        let mut rows: Vec<Values> = Vec::with_capacity(m);
        if let Some(idx) = &self.wang_indices {
            for &t in idx {
                rows.push(basis.basis_row(t)?);
            }
        } else {
            let mut err = None;
            self.for_each_row(|_, phi| match basis.project_row(phi) {
                Ok(r) => rows.push(r),
                Err(e) => err = Some(e),
            });
            if let Some(e) = err {
                return Err(e);
            }
        }
        // Transpose into column-major storage.
        Ok(if basis.kind().is_complex() {
            let mut a = DenseMatrix::zeros(m, n);
            for (j, row) in rows.iter().enumerate() {
                if let Values::Complex(r) = row {
                    for (k, &v) in r.iter().enumerate() {
                        a.set(j, k, v);
                    }
                }
            }
            SensingMatrix::Complex(a)
        } else {
            let mut a = DenseMatrix::zeros(m, n);
            for (j, row) in rows.iter().enumerate() {
                if let Values::Real(r) = row {
                    for (k, &v) in r.iter().enumerate() {
                        a.set(j, k, v);
                    }
                }
            }
            SensingMatrix::Real(a)
        })
    }
}

/// Compressed measurements `y` together with the matrix that produced them.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementVector {
    pub values: Vec<f64>,
    pub spec: MatrixSpec,
}

impl MeasurementVector {
    pub fn new(values: Vec<f64>, spec: MatrixSpec) -> Result<Self> {
        if values.len() != spec.m {
            return Err(Error::dim(spec.m, values.len()));
        }
        Ok(Self { values, spec })
    }
}

/// Column-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> DenseMatrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![S::default(); rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> S {
        self.data[c * self.rows + r]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[c * self.rows + r] = v;
    }

    pub fn column(&self, c: usize) -> &[S] {
        &self.data[c * self.rows..(c + 1) * self.rows]
    }

    /// `A s` for a dense coefficient vector.
    pub fn mul_vec(&self, s: &[S]) -> Vec<S> {
        let mut out = vec![S::default(); self.rows];
        for (c, &coef) in s.iter().enumerate() {
            if coef == S::default() {
                continue;
            }
            for (o, &a) in out.iter_mut().zip(self.column(c)) {
                *o += a * coef;
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SensingMatrix {
    Real(DenseMatrix<f64>),
    Complex(DenseMatrix<Complex64>),
}

impl SensingMatrix {
    pub fn rows(&self) -> usize {
        match self {
            SensingMatrix::Real(a) => a.rows(),
            SensingMatrix::Complex(a) => a.rows(),
        }
    }

    pub fn cols(&self) -> usize {
        match self {
            SensingMatrix::Real(a) => a.cols(),
            SensingMatrix::Complex(a) => a.cols(),
        }
    }

    pub fn entry(&self, r: usize, c: usize) -> Complex64 {
        match self {
            SensingMatrix::Real(a) => Complex64::new(a.get(r, c), 0.0),
            SensingMatrix::Complex(a) => a.get(r, c),
        }
    }
}
