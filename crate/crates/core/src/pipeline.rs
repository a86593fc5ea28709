//! End-to-end experiment pipelines behind the command-line front end:
//! compression, reconstruction, evaluation, CR sweeps, coherence and
//! sparsity studies, plus their CSV report rows.

use std::fmt::Write as _;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::io::{self, CompressedContainer, Segment, Signal};
use crate::measure::{build_matrix, MatrixKind};
use crate::metrics;
use crate::parallel::{map_ordered, Execution};
use crate::recover::{OmpConfig, OmpSolver};
use crate::transforms::{Basis, BasisKind, BasisSpec};

/// `round(cr · n / 100)`; rounding to zero is an error.
pub fn measurement_count(cr_percent: f64, n: usize) -> Result<usize> {
    if !(cr_percent > 0.0 && cr_percent <= 100.0) {
        return Err(Error::param(format!("CR must lie in (0, 100], got {cr_percent}")));
    }
    let m = (cr_percent * n as f64 / 100.0).round() as usize;
    if m == 0 {
        return Err(Error::param(format!(
            "CR {cr_percent}% of n={n} rounds to zero measurements"
        )));
    }
    Ok(m.min(n))
}

/// Text for a report value; infinities print as `inf` / `-inf`.
pub fn fmt_value(v: f64, decimals: usize) -> String {
    if v == f64::INFINITY {
        "inf".to_string()
    } else if v == f64::NEG_INFINITY {
        "-inf".to_string()
    } else {
        format!("{v:.decimals$}")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompressParams {
    pub basis: BasisKind,
    pub matrix: MatrixKind,
    pub cr_percent: f64,
    pub seed: u64,
    pub n: usize,
}

pub fn compress(signal: &Signal, params: &CompressParams) -> Result<CompressedContainer> {
    let basis = BasisSpec::new(params.basis, params.n)?;
    let m = measurement_count(params.cr_percent, params.n)?;
    let matrix = build_matrix(params.matrix, m, params.n, params.seed)?;
    let segments = io::segment(&signal.samples, params.n)?
        .into_iter()
        .map(|block| {
            Ok(Segment {
                true_length: block.true_length,
                measurements: matrix.apply(&block.samples)?.values,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CompressedContainer {
        basis,
        matrix,
        sample_rate_hz: signal.sample_rate_hz,
        segments,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SegmentReport {
    pub iterations: usize,
    pub support_size: usize,
    pub residual_norm: f64,
    pub degenerate: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    pub signal: Signal,
    pub segments: Vec<SegmentReport>,
}

pub fn reconstruct(c: &CompressedContainer, cfg: &OmpConfig, exec: Execution) -> Result<Reconstruction> {
    c.validate()?;
    cfg.validate()?;
    if let Some(r) = unpermute_full_rate(c)? {
        return Ok(r);
    }
    let solver = OmpSolver::new(Basis::new(c.basis), c.matrix.clone())?;
    let results = map_ordered(exec, c.segments.iter().collect(), |seg| {
        solver.solve_values(&seg.measurements, cfg).map(|r| (r, seg.true_length))
    });
    let mut samples = Vec::with_capacity(c.signal_len());
    let mut segments = Vec::with_capacity(results.len());
    for result in results {
        let (r, true_length) = result?;
        samples.extend_from_slice(&r.x_hat[..true_length]);
        segments.push(SegmentReport {
            iterations: r.iterations,
            support_size: r.support.len(),
            residual_norm: r.residual_norm,
            degenerate: r.degenerate,
        });
    }
    Ok(Reconstruction {
        signal: Signal::new(samples, c.sample_rate_hz, "reconstruction")?,
        segments,
    })
}

/// A full-rate Wang matrix is a permutation of the samples, so the block
/// is recovered by scattering the measurements back, bit-exactly.
fn unpermute_full_rate(c: &CompressedContainer) -> Result<Option<Reconstruction>> {
    let Some(idx) = c.matrix.wang_indices() else {
        return Ok(None);
    };
    let n = c.basis.n();
    if idx.len() != n {
        return Ok(None);
    }
    let mut samples = Vec::with_capacity(c.signal_len());
    let mut block = vec![0.0; n];
    for seg in &c.segments {
        for (&i, &v) in idx.iter().zip(&seg.measurements) {
            block[i] = v;
        }
        samples.extend_from_slice(&block[..seg.true_length]);
    }
    let segments = c
        .segments
        .iter()
        .map(|_| SegmentReport {
            iterations: 0,
            support_size: n,
            residual_norm: 0.0,
            degenerate: false,
        })
        .collect();
    Ok(Some(Reconstruction {
        signal: Signal::new(samples, c.sample_rate_hz, "reconstruction")?,
        segments,
    }))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationRow {
    /// `None` for the whole signal.
    pub segment: Option<usize>,
    pub snr_db: f64,
    pub rms_original: f64,
    pub rms_reconstructed: f64,
    pub kurtosis_original: f64,
    pub kurtosis_reconstructed: f64,
}

pub const EVALUATION_HEADER: &str =
    "segment,snr_db,rms_original,rms_reconstructed,kurtosis_original,kurtosis_reconstructed";

impl EvaluationRow {
    pub fn to_csv(&self) -> String {
        let segment = self.segment.map_or("all".to_string(), |s| s.to_string());
        format!(
            "{segment},{},{},{},{},{}",
            fmt_value(self.snr_db, 6),
            fmt_value(self.rms_original, 9),
            fmt_value(self.rms_reconstructed, 9),
            fmt_value(self.kurtosis_original, 6),
            fmt_value(self.kurtosis_reconstructed, 6),
        )
    }
}

fn evaluate_slice(segment: Option<usize>, x: &[f64], x_hat: &[f64]) -> Result<EvaluationRow> {
    Ok(EvaluationRow {
        segment,
        snr_db: metrics::snr_db(x, x_hat)?,
        rms_original: metrics::rms(x)?,
        rms_reconstructed: metrics::rms(x_hat)?,
        kurtosis_original: metrics::kurtosis(x)?,
        kurtosis_reconstructed: metrics::kurtosis(x_hat).unwrap_or(f64::NAN),
    })
}

/// Whole-signal indicators, followed by one row per block of `block_len`
/// samples when given.
pub fn evaluate(original: &[f64], reconstructed: &[f64], block_len: Option<usize>) -> Result<Vec<EvaluationRow>> {
    if original.len() != reconstructed.len() {
        return Err(Error::dim(original.len(), reconstructed.len()));
    }
    let mut rows = vec![evaluate_slice(None, original, reconstructed)?];
    if let Some(n) = block_len {
        if n < 4 {
            return Err(Error::param("evaluation blocks need at least 4 samples"));
        }
        for (i, (x, y)) in original.chunks(n).zip(reconstructed.chunks(n)).enumerate() {
            rows.push(evaluate_slice(Some(i), x, y)?);
        }
    }
    Ok(rows)
}

pub fn evaluation_csv(rows: &[EvaluationRow]) -> String {
    let mut out = String::from(EVALUATION_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    out
}

/// CR sweep over a fixed signal.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub bases: Vec<BasisKind>,
    pub matrices: Vec<MatrixKind>,
    pub cr_percents: Vec<f64>,
    pub seeds: Vec<u64>,
    pub n: usize,
    pub omp: OmpConfig,
    /// Fill the `wall_ms` column. Off by default so reports are
    /// byte-reproducible.
    pub timing: bool,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.bases.is_empty() || self.matrices.is_empty() || self.cr_percents.is_empty() || self.seeds.is_empty() {
            return Err(Error::param("sweep needs at least one basis, matrix, CR and seed"));
        }
        for &basis in &self.bases {
            BasisSpec::new(basis, self.n)?;
        }
        for &cr in &self.cr_percents {
            measurement_count(cr, self.n)?;
        }
        self.omp.validate()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub basis: BasisKind,
    pub matrix: MatrixKind,
    pub cr_percent: f64,
    pub m: usize,
    pub seed: u64,
    pub snr_db: f64,
    pub iterations_mean: f64,
    pub wall_ms: Option<f64>,
}

pub const SWEEP_HEADER: &str = "basis,matrix,cr_percent,m,seed,snr_db,iterations_mean,wall_ms";

impl SweepRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            self.basis,
            self.matrix,
            self.cr_percent,
            self.m,
            self.seed,
            fmt_value(self.snr_db, 6),
            fmt_value(self.iterations_mean, 3),
            self.wall_ms.map_or("NA".to_string(), |w| fmt_value(w, 3)),
        )
    }
}

/// One full compress → reconstruct → SNR pass.
pub fn sweep_cell(
    signal: &Signal,
    basis: BasisKind,
    matrix: MatrixKind,
    cr_percent: f64,
    seed: u64,
    n: usize,
    omp: &OmpConfig,
) -> Result<SweepRow> {
    let started = Instant::now();
    let params = CompressParams {
        basis,
        matrix,
        cr_percent,
        seed,
        n,
    };
    let container = compress(signal, &params)?;
    let recon = reconstruct(&container, omp, Execution::Sequential)?;
    let snr_db = metrics::snr_db(&signal.samples, &recon.signal.samples)?;
    let iterations_mean = if recon.segments.is_empty() {
        0.0
    } else {
        recon.segments.iter().map(|s| s.iterations as f64).sum::<f64>() / recon.segments.len() as f64
    };
    Ok(SweepRow {
        basis,
        matrix,
        cr_percent,
        m: container.matrix.m(),
        seed,
        snr_db,
        iterations_mean,
        wall_ms: Some(started.elapsed().as_secs_f64() * 1e3),
    })
}

/// Rows in `basis × matrix × CR × seed` order, independent of scheduling.
pub fn sweep(signal: &Signal, cfg: &SweepConfig, exec: Execution) -> Result<Vec<SweepRow>> {
    cfg.validate()?;
    let mut cells = Vec::new();
    for &basis in &cfg.bases {
        for &matrix in &cfg.matrices {
            for &cr in &cfg.cr_percents {
                for &seed in &cfg.seeds {
                    cells.push((basis, matrix, cr, seed));
                }
            }
        }
    }
    map_ordered(exec, cells, |(basis, matrix, cr, seed)| {
        sweep_cell(signal, basis, matrix, cr, seed, cfg.n, &cfg.omp).map(|mut row| {
            if !cfg.timing {
                row.wall_ms = None;
            }
            row
        })
    })
    .into_iter()
    .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(SWEEP_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_csv());
        out.push('\n');
    }
    out
}

/// Mean SNR per `(basis, matrix, CR)` over seeds, in first-seen order.
pub fn mean_snr_by_cell(rows: &[SweepRow]) -> Vec<(BasisKind, MatrixKind, f64, f64)> {
    let mut out: Vec<(BasisKind, MatrixKind, f64, f64, usize)> = Vec::new();
    for row in rows {
        match out
            .iter_mut()
            .find(|c| c.0 == row.basis && c.1 == row.matrix && c.2 == row.cr_percent)
        {
            Some(cell) => {
                cell.3 += row.snr_db;
                cell.4 += 1;
            }
            None => out.push((row.basis, row.matrix, row.cr_percent, row.snr_db, 1)),
        }
    }
    out.into_iter().map(|(b, m, cr, sum, k)| (b, m, cr, sum / k as f64)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoherenceRow {
    pub basis: BasisKind,
    pub matrix: MatrixKind,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub coherence: f64,
    /// Analytic value where one exists (Wang with DFT or DCT).
    pub expected: Option<f64>,
}

pub const COHERENCE_HEADER: &str = "basis,matrix,n,m,seed,coherence,expected";

/// Closed-form Wang coherence. DFT atoms have constant modulus `1/√n`; the
/// largest DCT-II entry is `√(2/n)·cos(π/2n)`, reached at every sample.
pub fn wang_coherence_expected(basis: BasisKind, n: usize) -> Option<f64> {
    match basis {
        BasisKind::Dft => Some(1.0),
        BasisKind::Dct if n >= 2 => {
            Some(std::f64::consts::SQRT_2 * (std::f64::consts::PI / (2 * n) as f64).cos())
        }
        _ => None,
    }
}

impl CoherenceRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.basis,
            self.matrix,
            self.n,
            self.m,
            self.seed,
            fmt_value(self.coherence, 10),
            self.expected.map_or(String::new(), |e| fmt_value(e, 10)),
        )
    }
}

pub fn coherence_study(
    bases: &[BasisKind],
    matrices: &[MatrixKind],
    n: usize,
    m: usize,
    seeds: &[u64],
    exec: Execution,
) -> Result<Vec<CoherenceRow>> {
    let mut cells = Vec::new();
    for &basis in bases {
        BasisSpec::new(basis, n)?;
        for &matrix in matrices {
            for &seed in seeds {
                cells.push((basis, matrix, seed));
            }
        }
    }
    map_ordered(exec, cells, |(basis, matrix, seed)| {
        let b = Basis::from_kind(basis, n)?;
        let spec = build_matrix(matrix, m, n, seed)?;
        Ok(CoherenceRow {
            basis,
            matrix,
            n,
            m,
            seed,
            coherence: metrics::coherence(&spec, &b)?,
            expected: (matrix == MatrixKind::Wang)
                .then(|| wang_coherence_expected(basis, n))
                .flatten(),
        })
    })
    .into_iter()
    .collect()
}

pub fn coherence_csv(rows: &[CoherenceRow]) -> String {
    let mut out = String::from(COHERENCE_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.to_csv());
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SparsityRow {
    pub basis: BasisKind,
    pub n: usize,
    pub segments: usize,
    pub threshold: f64,
    pub sparsity_mean: f64,
}

pub const SPARSITY_HEADER: &str = "basis,n,segments,threshold,sparsity_mean";

impl SparsityRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{}",
            self.basis,
            self.n,
            self.segments,
            self.threshold,
            fmt_value(self.sparsity_mean, 6)
        )
    }
}

/// Mean sparsity fraction over the blocks of `signal`, per basis.
pub fn sparsity_study(signal: &[f64], bases: &[BasisKind], n: usize, threshold: f64) -> Result<Vec<SparsityRow>> {
    let blocks = io::segment(signal, n)?;
    if blocks.is_empty() {
        return Err(Error::param("sparsity study needs a non-empty signal"));
    }
    bases
        .iter()
        .map(|&kind| {
            let basis = Basis::from_kind(kind, n)?;
            let mut total = 0.0;
            for block in &blocks {
                total += metrics::sparsity_fraction(&basis.analyze(&block.samples)?, threshold)?;
            }
            Ok(SparsityRow {
                basis: kind,
                n,
                segments: blocks.len(),
                threshold,
                sparsity_mean: total / blocks.len() as f64,
            })
        })
        .collect()
}

pub fn sparsity_csv(rows: &[SparsityRow]) -> String {
    let mut out = String::from(SPARSITY_HEADER);
    out.push('\n');
    for row in rows {
        let _ = writeln!(out, "{}", row.to_csv());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synth::SynthSpec;

    #[test]
    fn measurement_count_rounding() {
        assert_eq!(measurement_count(10.0, 1024).unwrap(), 102);
        assert_eq!(measurement_count(3.0, 1000).unwrap(), 30);
        assert_eq!(measurement_count(100.0, 64).unwrap(), 64);
        // 0.512 rounds up to one measurement; only below 0.5 is m zero.
        assert_eq!(measurement_count(0.05, 1024).unwrap(), 1);
        assert!(measurement_count(0.04, 1024).is_err());
        assert!(measurement_count(0.0, 1024).is_err());
        assert!(measurement_count(100.5, 1024).is_err());
    }

    #[test]
    fn full_rate_wang_reconstructs_exactly_for_every_basis() {
        let sig = crate::synth::generate(
            &SynthSpec::new(1000, 20_000.0).tone(330.0, 1.0, 0.2).noise_db(-20.0).seed(3),
        )
        .unwrap();
        for basis in BasisKind::ALL {
            let c = compress(
                &sig,
                &CompressParams {
                    basis,
                    matrix: MatrixKind::Wang,
                    cr_percent: 100.0,
                    seed: 1,
                    n: 256,
                },
            )
            .unwrap();
            assert_eq!(c.segments.len(), 4);
            let cfg = OmpConfig {
                max_atoms: crate::recover::MaxAtoms::Fixed(256),
                residual_tol_rel: 1e-12,
                min_improvement_rel: 0.0,
            };
            let r = reconstruct(&c, &cfg, Execution::default()).unwrap();
            assert_eq!(r.signal.samples, sig.samples);

            // The greedy solver reaches the same answer to rounding.
            let solver = OmpSolver::new(Basis::new(c.basis), c.matrix.clone()).unwrap();
            for (k, seg) in c.segments.iter().enumerate() {
                let res = solver.solve_values(&seg.measurements, &cfg).unwrap();
                let block = &sig.samples[k * 256..k * 256 + seg.true_length];
                let max_err = block
                    .iter()
                    .zip(&res.x_hat)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                assert!(max_err < 1e-10, "{basis}: {max_err}");
            }
        }
    }

    #[test]
    fn sweep_cardinality_and_order() {
        let sig = crate::synth::generate(&SynthSpec::new(512, 1000.0).tone(125.0, 1.0, 0.0)).unwrap();
        let cfg = SweepConfig {
            bases: vec![BasisKind::Dft],
            matrices: MatrixKind::ALL.to_vec(),
            cr_percents: vec![3.0, 5.0, 10.0, 20.0, 30.0],
            seeds: (0..10).collect(),
            n: 256,
            omp: OmpConfig::default(),
            timing: false,
        };
        let rows = sweep(&sig, &cfg, Execution::default()).unwrap();
        assert_eq!(rows.len(), 150);
        assert_eq!(rows[0].matrix, MatrixKind::Gaussian);
        assert_eq!(rows[149].matrix, MatrixKind::Wang);
        assert_eq!(rows[149].seed, 9);
        assert!(sweep_csv(&rows).lines().all(|l| !l.ends_with(",")));
    }

    #[test]
    fn evaluation_rows() {
        let x: Vec<f64> = (0..64).map(|t| (t as f64 * 0.3).sin()).collect();
        let rows = evaluate(&x, &x, Some(16)).unwrap();
        assert_eq!(rows.len(), 5);
        assert!(rows[0].to_csv().starts_with("all,inf,"));
        let zero = vec![0.0; 64];
        let rows = evaluate(&x, &zero, None).unwrap();
        assert_eq!(rows[0].snr_db, 0.0);
        assert!(rows[0].kurtosis_reconstructed.is_nan());
        assert!(evaluate(&x, &x[..10], None).is_err());
    }

    #[test]
    fn sparsity_of_pure_tone_and_noise() {
        let n = 256;
        let tone = crate::synth::generate(&SynthSpec::new(n * 4, n as f64).tone(20.0, 1.0, 0.0)).unwrap();
        let rows = sparsity_study(&tone.samples, &[BasisKind::Dft], n, 0.01).unwrap();
        assert!((rows[0].sparsity_mean - (n as f64 - 2.0) / n as f64).abs() < 1e-12);

        let noise = crate::synth::generate(&SynthSpec::new(n * 4, 1.0).noise_db(0.0).seed(5)).unwrap();
        let rows = sparsity_study(&noise.samples, &[BasisKind::Dft], n, 0.01).unwrap();
        assert!(rows[0].sparsity_mean < 0.5);
    }
}
