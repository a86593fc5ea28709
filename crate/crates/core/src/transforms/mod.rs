//! Orthonormal sparse bases: DCT, DFT and periodized Daubechies wavelets.
//!
//! A [`Basis`] is the synthesis operator `Ψ` whose columns are the atoms a
//! block is expanded in. [`Basis::analyze`] applies `Ψ^H`, and
//! [`Basis::synthesize`] applies `Ψ`. All four kinds are exactly
//! orthonormal:
//!
//! * DCT: DCT-II analysis / DCT-III synthesis with `√(1/n)`, `√(2/n)` scaling;
//! * DFT: unitary, `1/√n` in both directions, coefficients kept complex;
//! * Db2/Db8: full dyadic decomposition with periodic extension, `n = 2^J`.

mod dct;
mod wavelet;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar;

pub use wavelet::{DB2, DB8};

use dct::DctPlan;
use wavelet::FilterBank;

/// Hermitian-symmetry tolerance for DFT coefficients handed to synthesis.
pub const SYMMETRY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisKind {
    Dct,
    Dft,
    Db2,
    Db8,
}

impl BasisKind {
    pub const ALL: [BasisKind; 4] = [BasisKind::Dct, BasisKind::Dft, BasisKind::Db2, BasisKind::Db8];

    /// Code used in the container header.
    pub fn code(self) -> u8 {
        match self {
            BasisKind::Dct => 0,
            BasisKind::Dft => 1,
            BasisKind::Db2 => 2,
            BasisKind::Db8 => 3,
        }
    }

    pub fn from_code(code: u8) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.code() == code)
    }

    pub fn name(self) -> &'static str {
        match self {
            BasisKind::Dct => "dct",
            BasisKind::Dft => "dft",
            BasisKind::Db2 => "db2",
            BasisKind::Db8 => "db8",
        }
    }

    pub fn is_wavelet(self) -> bool {
        matches!(self, BasisKind::Db2 | BasisKind::Db8)
    }

    pub fn is_complex(self) -> bool {
        self == BasisKind::Dft
    }
}

impl fmt::Display for BasisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BasisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dct" => Ok(BasisKind::Dct),
            "dft" => Ok(BasisKind::Dft),
            "db2" => Ok(BasisKind::Db2),
            "db8" => Ok(BasisKind::Db8),
            other => Err(Error::param(format!("unknown basis '{other}'"))),
        }
    }
}

/// Basis kind plus block length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct BasisSpec {
    kind: BasisKind,
    n: usize,
}

impl BasisSpec {
    pub fn new(kind: BasisKind, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::param(format!("block length must be at least 2, got {n}")));
        }
        if kind.is_wavelet() && !n.is_power_of_two() {
            return Err(Error::param(format!(
                "{kind} requires a power-of-two block length, got {n}"
            )));
        }
        Ok(Self { kind, n })
    }

    pub fn kind(&self) -> BasisKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// A length-`n` vector that is real or complex depending on the basis.
#[derive(Debug, Clone, PartialEq)]
pub enum Values {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl Values {
    pub fn len(&self) -> usize {
        match self {
            Values::Real(v) => v.len(),
            Values::Complex(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn magnitudes(&self) -> Vec<f64> {
        match self {
            Values::Real(v) => v.iter().map(|x| x.abs()).collect(),
            Values::Complex(v) => v.iter().map(|x| x.norm()).collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        match self {
            Values::Real(v) => scalar::norm(v),
            Values::Complex(v) => scalar::norm(v),
        }
    }

    /// Complex view (real values get a zero imaginary part).
    pub fn to_complex(&self) -> Vec<Complex64> {
        match self {
            Values::Real(v) => v.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            Values::Complex(v) => v.clone(),
        }
    }
}

/// Coefficients `s` of a block in a given basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    pub basis: BasisSpec,
    pub values: Values,
}

impl CoefficientVector {
    pub fn zeros(basis: BasisSpec) -> Self {
        let values = if basis.kind.is_complex() {
            Values::Complex(vec![Complex64::default(); basis.n])
        } else {
            Values::Real(vec![0.0; basis.n])
        };
        Self { basis, values }
    }

    /// Unit vector `e_k`.
    pub fn unit(basis: BasisSpec, k: usize) -> Result<Self> {
        if k >= basis.n {
            return Err(Error::Index { index: k, len: basis.n });
        }
        let mut c = Self::zeros(basis);
        match &mut c.values {
            Values::Real(v) => v[k] = 1.0,
            Values::Complex(v) => v[k] = Complex64::new(1.0, 0.0),
        }
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.values.norm()
    }
}

#[derive(Clone)]
enum Plan {
    Dct(DctPlan),
    Dft {
        forward: Arc<dyn Fft<f64>>,
        inverse: Arc<dyn Fft<f64>>,
    },
    Wavelet(FilterBank),
}

/// A constructed basis: spec plus precomputed transform plans. Cheap to
/// clone and safe to share between threads.
#[derive(Clone)]
pub struct Basis {
    spec: BasisSpec,
    plan: Plan,
}

impl fmt::Debug for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Basis").field("spec", &self.spec).finish()
    }
}

impl Basis {
    pub fn new(spec: BasisSpec) -> Self {
        let mut planner = FftPlanner::new();
        let plan = match spec.kind {
            BasisKind::Dct => Plan::Dct(DctPlan::new(spec.n, &mut planner)),
            BasisKind::Dft => Plan::Dft {
                forward: planner.plan_fft_forward(spec.n),
                inverse: planner.plan_fft_inverse(spec.n),
            },
            BasisKind::Db2 => Plan::Wavelet(FilterBank::new(&DB2)),
            BasisKind::Db8 => Plan::Wavelet(FilterBank::new(&DB8)),
        };
        Self { spec, plan }
    }

    pub fn from_kind(kind: BasisKind, n: usize) -> Result<Self> {
        Ok(Self::new(BasisSpec::new(kind, n)?))
    }

    pub fn spec(&self) -> BasisSpec {
        self.spec
    }

    pub fn kind(&self) -> BasisKind {
        self.spec.kind
    }

    pub fn n(&self) -> usize {
        self.spec.n
    }

    /// `s = Ψ^H x`.
    pub fn analyze(&self, x: &[f64]) -> Result<CoefficientVector> {
        if x.len() != self.spec.n {
            return Err(Error::dim(self.spec.n, x.len()));
        }
        let values = match &self.plan {
            Plan::Dct(p) => Values::Real(p.forward(x)),
            Plan::Wavelet(bank) => Values::Real(bank.forward(x)),
            Plan::Dft { forward, .. } => {
                let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                forward.process(&mut buf);
                let scale = 1.0 / (self.spec.n as f64).sqrt();
                buf.iter_mut().for_each(|c| *c *= scale);
                Values::Complex(buf)
            }
        };
        Ok(CoefficientVector {
            basis: self.spec,
            values,
        })
    }

    /// `x = Ψ s`, always real. DFT coefficients must be Hermitian-symmetric
    /// to within [`SYMMETRY_TOL`] (relative to the largest magnitude); the
    /// residual asymmetry is projected out before the inverse transform.
    pub fn synthesize(&self, s: &CoefficientVector) -> Result<Vec<f64>> {
        if s.basis != self.spec {
            return Err(Error::param(format!(
                "coefficients belong to {:?}, basis is {:?}",
                s.basis, self.spec
            )));
        }
        if s.len() != self.spec.n {
            return Err(Error::dim(self.spec.n, s.len()));
        }
        match (&self.plan, &s.values) {
            (Plan::Dct(p), Values::Real(c)) => Ok(p.inverse(c)),
            (Plan::Wavelet(bank), Values::Real(c)) => Ok(bank.inverse(c)),
            (Plan::Dft { inverse, .. }, Values::Complex(c)) => {
                let deviation = hermitian_deviation(c);
                let peak = c.iter().map(|v| v.norm()).fold(0.0, f64::max).max(1.0);
                if deviation > SYMMETRY_TOL * peak {
                    return Err(Error::Symmetry { deviation });
                }
                let mut buf = hermitian_part(c);
                inverse.process(&mut buf);
                let scale = 1.0 / (self.spec.n as f64).sqrt();
                Ok(buf.iter().map(|v| v.re * scale).collect())
            }
            _ => Err(Error::param("coefficient type does not match basis kind")),
        }
    }

    /// Column `ψ_k` of the synthesis operator. Complex for the DFT, where
    /// `ψ_k[t] = exp(2πi·kt/n)/√n`.
    pub fn basis_column(&self, k: usize) -> Result<Values> {
        let n = self.spec.n;
        if k >= n {
            return Err(Error::Index { index: k, len: n });
        }
        match self.spec.kind {
            BasisKind::Dft => {
                let scale = 1.0 / (n as f64).sqrt();
                let col = (0..n)
                    .map(|t| {
                        // Reduce k·t mod n first so the phase stays exact for large n.
                        let phase = 2.0 * PI * ((k * t) % n) as f64 / n as f64;
                        Complex64::from_polar(scale, phase)
                    })
                    .collect();
                Ok(Values::Complex(col))
            }
            _ => {
                let unit = CoefficientVector::unit(self.spec, k)?;
                Ok(Values::Real(self.synthesize(&unit)?))
            }
        }
    }

    /// Row `t` of `Ψ` (the values every atom takes at sample `t`), i.e.
    /// the conjugate of `analyze(e_t)`.
    pub fn basis_row(&self, t: usize) -> Result<Values> {
        let n = self.spec.n;
        if t >= n {
            return Err(Error::Index { index: t, len: n });
        }
        let mut e = vec![0.0; n];
        e[t] = 1.0;
        Ok(conjugate(self.analyze(&e)?.values))
    }

    /// `Ψ^T φ` for a real vector `φ`: entry `k` is `⟨φ, ψ_k⟩` without
    /// conjugation, so stacking these rows gives the product `ΦΨ`.
    pub fn project_row(&self, phi: &[f64]) -> Result<Values> {
        Ok(conjugate(self.analyze(phi)?.values))
    }
}

fn conjugate(v: Values) -> Values {
    match v {
        Values::Real(r) => Values::Real(r),
        Values::Complex(c) => Values::Complex(c.into_iter().map(|z| z.conj()).collect()),
    }
}

/// `max_k |c[k] - conj(c[-k mod n])|`.
pub fn hermitian_deviation(c: &[Complex64]) -> f64 {
    let n = c.len();
    (0..n)
        .map(|k| (c[k] - c[(n - k) % n].conj()).norm())
        .fold(0.0, f64::max)
}

/// Projection onto Hermitian-symmetric vectors, `(c[k] + conj(c[-k]))/2`.
pub fn hermitian_part(c: &[Complex64]) -> Vec<Complex64> {
    let n = c.len();
    (0..n)
        .map(|k| (c[k] + c[(n - k) % n].conj()) * 0.5)
        .collect()
}
