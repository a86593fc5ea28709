//! Scalar evaluations: sparsity, mutual coherence, compression ratio,
//! reconstruction SNR, RMS and kurtosis.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::measure::MatrixSpec;
use crate::transforms::{Basis, CoefficientVector};

#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub name: String,
    pub value: f64,
    pub context: BTreeMap<String, String>,
}

impl MetricReport {
    pub fn new(name: impl Into<String>, value: f64) -> Self {
        Self {
            name: name.into(),
            value,
            context: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: impl Into<String>, value: impl ToString) -> Self {
        self.context.insert(key.into(), value.to_string());
        self
    }
}

/// Fraction of magnitudes strictly below `threshold_rel · max`. An all-zero
/// input yields 0.
pub fn sparsity_of_magnitudes(magnitudes: &[f64], threshold_rel: f64) -> Result<f64> {
    if magnitudes.is_empty() {
        return Err(Error::param("sparsity of an empty coefficient vector"));
    }
    if !(threshold_rel > 0.0 && threshold_rel < 1.0) {
        return Err(Error::param(format!("threshold must lie in (0, 1), got {threshold_rel}")));
    }
    let peak = magnitudes.iter().cloned().fold(0.0, f64::max);
    if peak == 0.0 {
        return Ok(0.0);
    }
    let cut = threshold_rel * peak;
    let below = magnitudes.iter().filter(|&&m| m < cut).count();
    Ok(below as f64 / magnitudes.len() as f64)
}

pub fn sparsity_fraction(s: &CoefficientVector, threshold_rel: f64) -> Result<f64> {
    sparsity_of_magnitudes(&s.values.magnitudes(), threshold_rel)
}

/// Like [`sparsity_fraction`], flagging the all-zero convention in context.
pub fn sparsity_report(s: &CoefficientVector, threshold_rel: f64) -> Result<MetricReport> {
    let mags = s.values.magnitudes();
    let value = sparsity_of_magnitudes(&mags, threshold_rel)?;
    let mut report = MetricReport::new("sparsity", value)
        .with("basis", s.basis.kind())
        .with("threshold", threshold_rel);
    if mags.iter().all(|&m| m == 0.0) {
        report = report.with("all_zero", true);
    }
    Ok(report)
}

/// Mutual coherence `√n · max_{j,k} |⟨φ̂_j, ψ_k⟩|` with `φ̂_j` the
/// unit-normalized rows of `Φ` and `ψ_k` the unit-norm basis columns.
pub fn coherence(spec: &MatrixSpec, basis: &Basis) -> Result<f64> {
    if spec.n() != basis.n() {
        return Err(Error::dim(spec.n(), basis.n()));
    }
    // Wang rows are unit spikes: ⟨e_t, ψ_k⟩ is just row t of Ψ.
    if let Some(idx) = spec.wang_indices() {
        let mut peak: f64 = 0.0;
        for &t in idx {
            peak = basis.basis_row(t)?.magnitudes().into_iter().fold(peak, f64::max);
        }
        return Ok((spec.n() as f64).sqrt() * peak);
    }
    // Same cap as dense materialization.
    let entries = spec.m().saturating_mul(spec.n());
    if entries > crate::measure::DEFAULT_MATERIALIZE_CAP {
        return Err(Error::Resource(format!("coherence over {entries} entries exceeds the cap")));
    }
    let a = spec.sensing_matrix(basis)?;
    let row_norms = row_norms(spec)?;
    let mut peak: f64 = 0.0;
    for (j, &norm) in row_norms.iter().enumerate() {
        if norm == 0.0 {
            return Err(Error::param(format!("row {j} of the measurement matrix is zero")));
        }
        for k in 0..a.cols() {
            peak = peak.max(a.entry(j, k).norm() / norm);
        }
    }
    Ok((spec.n() as f64).sqrt() * peak)
}

fn row_norms(spec: &MatrixSpec) -> Result<Vec<f64>> {
    if spec.wang_indices().is_some() {
        return Ok(vec![1.0; spec.m()]);
    }
    Ok(spec
        .materialize()?
        .iter()
        .map(|r| r.iter().map(|v| v * v).sum::<f64>().sqrt())
        .collect())
}

/// Coherence between explicit dense rows and columns (real), for
/// arbitrary matrix pairs that are not one of the built-in kinds.
pub fn coherence_dense(rows: &[Vec<f64>], columns: &[Vec<f64>]) -> Result<f64> {
    let n = rows.first().map_or(0, Vec::len);
    let mut peak: f64 = 0.0;
    for (j, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::dim(n, row.len()));
        }
        let rn = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if rn == 0.0 {
            return Err(Error::param(format!("row {j} is zero")));
        }
        for col in columns {
            if col.len() != n {
                return Err(Error::dim(n, col.len()));
            }
            let cn = col.iter().map(|v| v * v).sum::<f64>().sqrt();
            let ip: f64 = row.iter().zip(col).map(|(a, b)| a * b).sum();
            peak = peak.max(ip.abs() / (rn * cn));
        }
    }
    Ok((n as f64).sqrt() * peak)
}

/// `100 · m / n`.
pub fn compression_ratio(m: usize, n: usize) -> Result<f64> {
    if m == 0 || m > n {
        return Err(Error::param(format!("need 1 <= m <= n, got m={m}, n={n}")));
    }
    Ok(100.0 * m as f64 / n as f64)
}

/// `10·log10(Σx² / Σ(x - x̂)²)`; `+inf` when the error energy is zero.
pub fn snr_db(x: &[f64], x_hat: &[f64]) -> Result<f64> {
    if x.len() != x_hat.len() {
        return Err(Error::dim(x.len(), x_hat.len()));
    }
    let signal: f64 = x.iter().map(|v| v * v).sum();
    if signal == 0.0 {
        return Err(Error::UndefinedMetric("SNR of an all-zero reference signal".into()));
    }
    let noise: f64 = x.iter().zip(x_hat).map(|(a, b)| (a - b) * (a - b)).sum();
    if noise == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (signal / noise).log10())
}

pub fn rms(x: &[f64]) -> Result<f64> {
    if x.is_empty() {
        return Err(Error::UndefinedMetric("RMS of an empty signal".into()));
    }
    Ok((x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt())
}

/// Biased, non-excess kurtosis `m4 / m2²` of the mean-removed signal.
pub fn kurtosis(x: &[f64]) -> Result<f64> {
    if x.len() < 4 {
        return Err(Error::param(format!("kurtosis needs at least 4 samples, got {}", x.len())));
    }
    let len = x.len() as f64;
    let mean = x.iter().sum::<f64>() / len;
    let (m2, m4) = x.iter().fold((0.0, 0.0), |(m2, m4), &v| {
        let d = (v - mean) * (v - mean);
        (m2 + d, m4 + d * d)
    });
    let (m2, m4) = (m2 / len, m4 / len);
    if m2 <= (f64::EPSILON * mean.abs()).powi(2) {
        return Err(Error::UndefinedMetric("kurtosis of a constant signal".into()));
    }
    Ok(m4 / (m2 * m2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{build_matrix, MatrixKind};
    use crate::rng::SplitMix64;
    use crate::transforms::{BasisKind, BasisSpec, Values};
    use std::f64::consts::{PI, SQRT_2};

    fn coeffs(v: Vec<f64>) -> CoefficientVector {
        CoefficientVector {
            basis: BasisSpec::new(BasisKind::Dct, v.len()).unwrap(),
            values: Values::Real(v),
        }
    }

    #[test]
    fn sparsity_counts() {
        assert_eq!(sparsity_fraction(&coeffs(vec![10.0, 0.05, 0.0, 0.0]), 0.1).unwrap(), 0.75);
        let mut v = vec![0.0; 100];
        v[17] = 3.0;
        assert_eq!(sparsity_fraction(&coeffs(v), 0.01).unwrap(), 0.99);
        let r = sparsity_report(&coeffs(vec![0.0; 8]), 0.01).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.context.get("all_zero").map(String::as_str), Some("true"));
        assert!(sparsity_of_magnitudes(&[], 0.01).is_err());
    }

    #[test]
    fn sparsity_is_scale_invariant() {
        let mut g = SplitMix64::new(4);
        let v: Vec<f64> = (0..64).map(|_| g.next_normal().powi(3)).collect();
        let a = sparsity_fraction(&coeffs(v.clone()), 0.01).unwrap();
        let b = sparsity_fraction(&coeffs(v.iter().map(|x| x * 1e6).collect()), 0.01).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn wang_dft_coherence_is_one() {
        for n in [64usize, 256, 1024] {
            let basis = Basis::from_kind(BasisKind::Dft, n).unwrap();
            for seed in 0..3 {
                let spec = build_matrix(MatrixKind::Wang, n / 8, n, seed).unwrap();
                assert!((coherence(&spec, &basis).unwrap() - 1.0).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn wang_dct_coherence_closed_form() {
        // The largest DCT-II atom entry is √(2/n)·cos(π/2n), attained at
        // every sample, so the value is independent of which rows are kept.
        for n in [4usize, 64, 256, 1024] {
            let basis = Basis::from_kind(BasisKind::Dct, n).unwrap();
            let expected = SQRT_2 * (PI / (2 * n) as f64).cos();
            for seed in 0..3 {
                let m = (n / 4).max(1);
                let spec = build_matrix(MatrixKind::Wang, m, n, seed).unwrap();
                let mu = coherence(&spec, &basis).unwrap();
                assert!((mu - expected).abs() < 1e-12, "n={n}: {mu}");
                assert!((mu * 100.0).round() / 100.0 == 1.41 || n < 64);
            }
        }
    }

    #[test]
    fn wang_shortcut_matches_dense_evaluation() {
        let n = 32;
        for kind in [BasisKind::Dct, BasisKind::Db2, BasisKind::Db8] {
            let basis = Basis::from_kind(kind, n).unwrap();
            let cols: Vec<Vec<f64>> = (0..n)
                .map(|k| match basis.basis_column(k).unwrap() {
                    crate::transforms::Values::Real(v) => v,
                    _ => unreachable!(),
                })
                .collect();
            let spec = build_matrix(MatrixKind::Wang, 9, n, 4).unwrap();
            let dense = coherence_dense(&spec.materialize().unwrap(), &cols).unwrap();
            assert!((coherence(&spec, &basis).unwrap() - dense).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_basis_with_wang_is_maximally_coherent() {
        let n = 16;
        let spec = build_matrix(MatrixKind::Wang, 5, n, 1).unwrap();
        let rows = spec.materialize().unwrap();
        let identity: Vec<Vec<f64>> = (0..n)
            .map(|k| (0..n).map(|t| if t == k { 1.0 } else { 0.0 }).collect())
            .collect();
        assert!((coherence_dense(&rows, &identity).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn coherence_ignores_row_scaling() {
        let n = 64;
        let basis = Basis::from_kind(BasisKind::Dct, n).unwrap();
        let spec = build_matrix(MatrixKind::Gaussian, 16, n, 3).unwrap();
        let rows = spec.materialize().unwrap();
        let scaled: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|v| v * 7.3).collect()).collect();
        let cols: Vec<Vec<f64>> = (0..n)
            .map(|k| match basis.basis_column(k).unwrap() {
                Values::Real(c) => c,
                Values::Complex(_) => unreachable!(),
            })
            .collect();
        let a = coherence_dense(&rows, &cols).unwrap();
        let b = coherence_dense(&scaled, &cols).unwrap();
        let c = coherence(&spec, &basis).unwrap();
        assert!((a - b).abs() < 1e-12);
        assert!((a - c).abs() < 1e-12);
        assert!(c <= (n as f64).sqrt() + 1e-12 && c >= 1.0);
    }

    #[test]
    fn compression_ratio_values() {
        assert_eq!(compression_ratio(30, 1000).unwrap(), 3.0);
        assert_eq!(compression_ratio(64, 64).unwrap(), 100.0);
        assert_eq!(compression_ratio(103, 1024).unwrap(), 10.05859375);
        assert!(compression_ratio(0, 10).is_err());
        assert!(compression_ratio(11, 10).is_err());
    }

    #[test]
    fn snr_values() {
        let x = [1.0, 1.0, 1.0, 1.0];
        assert_eq!(snr_db(&x, &x).unwrap(), f64::INFINITY);
        assert_eq!(snr_db(&x, &[0.0; 4]).unwrap(), 0.0);
        let v = snr_db(&x, &[1.0, 1.0, 1.0, 0.0]).unwrap();
        assert!((v - 10.0 * 4f64.log10()).abs() < 1e-12);
        assert!((v - 6.0206).abs() < 1e-4);
        assert!(matches!(snr_db(&[0.0; 4], &x), Err(Error::UndefinedMetric(_))));
        assert!(snr_db(&x, &[0.0; 3]).is_err());
    }

    #[test]
    fn snr_drops_with_added_noise() {
        let n = 512;
        let x: Vec<f64> = (0..n).map(|t| (t as f64 * 0.1).sin()).collect();
        for seed in 0..20 {
            let mut g = SplitMix64::new(seed);
            let first: Vec<f64> = x.iter().map(|v| v + 0.05 * g.next_normal()).collect();
            let second: Vec<f64> = first.iter().map(|v| v + 0.05 * g.next_normal()).collect();
            assert!(snr_db(&x, &second).unwrap() < snr_db(&x, &first).unwrap());
        }
    }

    #[test]
    fn rms_values() {
        assert!((rms(&[-2.5; 10]).unwrap() - 2.5).abs() < 1e-15);
        assert!((rms(&[3.0, -4.0]).unwrap() - (12.5f64).sqrt()).abs() < 1e-15);
        let sine: Vec<f64> = (0..100_000).map(|t| (2.0 * PI * t as f64 / 97.3).sin()).collect();
        assert!((rms(&sine).unwrap() - 1.0 / SQRT_2).abs() < 1e-3);
        assert!(rms(&[]).is_err());
    }

    #[test]
    fn kurtosis_values() {
        let square: Vec<f64> = (0..64).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        assert!((kurtosis(&square).unwrap() - 1.0).abs() < 1e-12);

        let mut g = SplitMix64::new(2718);
        let noise: Vec<f64> = (0..100_000).map(|_| g.next_normal()).collect();
        assert!((kurtosis(&noise).unwrap() - 3.0).abs() < 0.1);

        let sine: Vec<f64> = (0..4000).map(|t| (2.0 * PI * t as f64 / 40.0).sin()).collect();
        let k_sine = kurtosis(&sine).unwrap();
        assert!((k_sine - 1.5).abs() < 1e-9);
        let mut impulsive = sine.clone();
        for p in (200..4000).step_by(500) {
            impulsive[p] += 8.0;
        }
        assert!(kurtosis(&impulsive).unwrap() > k_sine);

        assert!(matches!(kurtosis(&[2.0; 10]), Err(Error::UndefinedMetric(_))));
        assert!(kurtosis(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn kurtosis_is_affine_invariant() {
        let mut g = SplitMix64::new(31);
        let x: Vec<f64> = (0..1000).map(|_| g.next_normal().powi(3)).collect();
        let base = kurtosis(&x).unwrap();
        for (a, b) in [(2.0, 5.0), (-0.3, 100.0), (1e3, -7.0)] {
            let y: Vec<f64> = x.iter().map(|v| a * v + b).collect();
            assert!((kurtosis(&y).unwrap() - base).abs() < 1e-9);
        }
    }
}
