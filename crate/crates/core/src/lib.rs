//! Compressive sensing for machinery vibration signals.
//!
//! The pipeline follows `y = Φx = ΦΨs`: a block `x` of `n` samples is
//! measured by an `m × n` matrix `Φ` ([`measure`]), recovered as a sparse
//! coefficient vector `s` in an orthonormal basis `Ψ` ([`transforms`]) by
//! Orthogonal Matching Pursuit ([`recover`]), and judged with the
//! indicators in [`metrics`]. [`pipeline`] and [`cli`] wire these into
//! batch experiments; [`synth`] provides seeded test signals and [`io`]
//! handles signal files and the `CSVB` container.

pub mod cli;
pub mod error;
pub mod io;
pub mod measure;
pub mod metrics;
pub mod parallel;
pub mod pipeline;
pub mod recover;
pub mod rng;
pub mod scalar;
pub mod synth;
pub mod transforms;

pub use error::{Error, Result};
pub use io::{CompressedContainer, Signal};
pub use measure::{build_matrix, MatrixKind, MatrixSpec, MeasurementVector};
pub use parallel::Execution;
pub use recover::{omp_solve, OmpConfig, OmpSolver, RecoveryResult};
pub use transforms::{Basis, BasisKind, BasisSpec, CoefficientVector};
