//! Orthogonal Matching Pursuit over the sensing matrix `A = ΦΨ`.
//!
//! Each greedy step picks the atom whose L2-normalized sensing column is
//! most correlated with the current residual (lowest index on ties), then
//! refits all selected atoms by least squares against the unnormalized
//! columns. The least-squares state is an incremental QR factorization, so
//! each step costs `O(m·t)` on top of the `O(m·n)` correlation sweep.
//!
//! With the DFT basis the solver runs in complex arithmetic and admits
//! conjugate pairs `{k, n-k}` together, so the recovered signal is real.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::measure::{DenseMatrix, MatrixSpec, MeasurementVector, SensingMatrix};
use crate::scalar::{self, Scalar};
use crate::transforms::{Basis, BasisKind, CoefficientVector, Values};

/// Condition-number threshold above which a column set counts as
/// rank-deficient.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaxAtoms {
    /// `floor(m/2)`, resolved at solve time.
    Auto,
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmpConfig {
    pub max_atoms: MaxAtoms,
    /// Stop once `‖r‖ <= residual_tol_rel · ‖y‖`.
    pub residual_tol_rel: f64,
    /// Stop once a step reduces `‖r‖` by less than this fraction.
    pub min_improvement_rel: f64,
}

impl Default for OmpConfig {
    fn default() -> Self {
        Self {
            max_atoms: MaxAtoms::Auto,
            residual_tol_rel: 1e-6,
            min_improvement_rel: 1e-8,
        }
    }
}

impl OmpConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.residual_tol_rel > 0.0 && self.residual_tol_rel < 1.0) {
            return Err(Error::param(format!(
                "residual tolerance must lie in (0, 1), got {}",
                self.residual_tol_rel
            )));
        }
        if self.min_improvement_rel.is_nan() || self.min_improvement_rel < 0.0 {
            return Err(Error::param("minimum improvement must be non-negative"));
        }
        if self.max_atoms == MaxAtoms::Fixed(0) {
            return Err(Error::param("max_atoms must be positive"));
        }
        Ok(())
    }

    pub fn resolve_max_atoms(&self, m: usize, n: usize) -> usize {
        let budget = match self.max_atoms {
            MaxAtoms::Auto => m / 2,
            MaxAtoms::Fixed(k) => k,
        };
        budget.min(m).min(n)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult {
    pub x_hat: Vec<f64>,
    pub s_hat: CoefficientVector,
    /// Selected atoms in admission order.
    pub support: Vec<usize>,
    /// `‖y - A·s_hat‖₂`.
    pub residual_norm: f64,
    /// Greedy selection steps. Equals `support.len()` except for DFT pairs.
    pub iterations: usize,
    /// Residual norm after each step, starting with `‖y‖`.
    pub residual_history: Vec<f64>,
    /// Set when a selected atom had to be dropped for rank deficiency.
    pub degenerate: bool,
}

/// Raised by [`least_squares_on_support`] when the column set is
/// numerically rank-deficient.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RankDeficient {
    /// Position of the first column that could not be added.
    pub column: usize,
}

impl From<RankDeficient> for Error {
    fn from(e: RankDeficient) -> Self {
        Error::param(format!("column {} makes the least-squares system rank-deficient", e.column))
    }
}

/// Incremental thin QR by twice-iterated classical Gram–Schmidt.
#[derive(Debug, Clone)]
struct IncrementalQr<S> {
    q: Vec<Vec<S>>,
    /// Column `j` of `R` holds its first `j + 1` entries.
    r: Vec<Vec<S>>,
    /// `Q^H y`
    qty: Vec<S>,
    diag_min: f64,
    diag_max: f64,
}

impl<S: Scalar> IncrementalQr<S> {
    fn new() -> Self {
        Self {
            q: Vec::new(),
            r: Vec::new(),
            qty: Vec::new(),
            diag_min: f64::INFINITY,
            diag_max: 0.0,
        }
    }

    fn len(&self) -> usize {
        self.q.len()
    }

    /// Adds a column, or leaves the factorization untouched and returns
    /// `false` when the column is (numerically) in the span of the others.
    fn push(&mut self, col: &[S], y: &[S]) -> bool {
        let col_norm = scalar::norm(col);
        if col_norm == 0.0 || self.len() >= col.len() {
            return false;
        }
        let mut v = col.to_vec();
        let mut rcol = vec![S::default(); self.len() + 1];
        for _ in 0..2 {
            for (i, qi) in self.q.iter().enumerate() {
                let h = scalar::dot(qi, &v);
                rcol[i] += h;
                for (vj, &qj) in v.iter_mut().zip(qi) {
                    *vj -= qj * h;
                }
            }
        }
        let rest = scalar::norm(&v);
        let diag_min = self.diag_min.min(rest);
        let diag_max = self.diag_max.max(rest);
        if rest <= col_norm / MAX_CONDITION || diag_max > MAX_CONDITION * diag_min {
            return false;
        }
        let inv = 1.0 / rest;
        v.iter_mut().for_each(|x| *x = x.scale(inv));
        rcol[self.len()] = S::from_real(rest);
        self.qty.push(scalar::dot(&v, y));
        self.q.push(v);
        self.r.push(rcol);
        self.diag_min = diag_min;
        self.diag_max = diag_max;
        true
    }

    /// Back-substitution `R c = Q^H y`.
    fn solve(&self) -> Vec<S> {
        let t = self.len();
        let mut c = self.qty.clone();
        for i in (0..t).rev() {
            let mut acc = c[i];
            for (rj, &cj) in self.r[i + 1..t].iter().zip(&c[i + 1..t]) {
                acc -= rj[i] * cj;
            }
            c[i] = acc / self.r[i][i];
        }
        c
    }

    fn residual(&self, y: &[S]) -> Vec<S> {
        let mut r = y.to_vec();
        for (qi, &h) in self.q.iter().zip(&self.qty) {
            for (rj, &qj) in r.iter_mut().zip(qi) {
                *rj -= qj * h;
            }
        }
        r
    }
}

/// Least-squares coefficients of `y` over the given columns.
pub fn least_squares_on_support<S: Scalar>(
    columns: &[Vec<S>],
    y: &[S],
) -> std::result::Result<Vec<S>, RankDeficient> {
    let mut qr = IncrementalQr::new();
    for (i, col) in columns.iter().enumerate() {
        if col.len() != y.len() || !qr.push(col, y) {
            return Err(RankDeficient { column: i });
        }
    }
    Ok(qr.solve())
}

/// Generic OMP outcome before mapping back to a basis.
#[derive(Debug, Clone)]
struct GreedyFit<S> {
    coefficients: Vec<S>,
    support: Vec<usize>,
    iterations: usize,
    residual_history: Vec<f64>,
    degenerate: bool,
}

fn greedy_fit<S: Scalar>(
    a: &DenseMatrix<S>,
    y: &[S],
    cfg: &OmpConfig,
    partner: impl Fn(usize) -> Option<usize>,
) -> GreedyFit<S> {
    let (m, n) = (a.rows(), a.cols());
    let max_atoms = cfg.resolve_max_atoms(m, n);
    let y_norm = scalar::norm(y);
    let mut fit = GreedyFit {
        coefficients: vec![S::default(); n],
        support: Vec::new(),
        iterations: 0,
        residual_history: vec![y_norm],
        degenerate: false,
    };
    if y_norm == 0.0 {
        return fit;
    }

    let col_norms: Vec<f64> = (0..n).map(|k| scalar::norm(a.column(k))).collect();
    let peak_norm = col_norms.iter().cloned().fold(0.0, f64::max);
    // Atoms that never touch the measured samples cannot be selected.
    let mut available: Vec<bool> = col_norms.iter().map(|&c| c > peak_norm * 1e-12).collect();
    let mut qr = IncrementalQr::new();
    let mut residual = y.to_vec();
    let mut residual_norm = y_norm;

    while fit.support.len() < max_atoms && residual_norm > cfg.residual_tol_rel * y_norm {
        let mut best: Option<(usize, f64)> = None;
        for k in (0..n).filter(|&k| available[k]) {
            let corr = scalar::dot(a.column(k), &residual).abs() / col_norms[k];
            if best.is_none_or(|(_, c)| corr > c) {
                best = Some((k, corr));
            }
        }
        let Some((k, corr)) = best else { break };
        if corr <= residual_norm * 1e-13 {
            break;
        }
        let mate = partner(k).filter(|&p| p != k && available[p]);
        let wanted = 1 + usize::from(mate.is_some());
        if fit.support.len() + wanted > max_atoms {
            break;
        }

        available[k] = false;
        if !qr.push(a.column(k), y) {
            fit.degenerate = true;
            if let Some(p) = mate {
                available[p] = false;
            }
            continue;
        }
        fit.support.push(k);
        if let Some(p) = mate {
            available[p] = false;
            if qr.push(a.column(p), y) {
                fit.support.push(p);
            } else {
                fit.degenerate = true;
            }
        }
        fit.iterations += 1;

        residual = qr.residual(y);
        let new_norm = scalar::norm(&residual);
        let improvement = (residual_norm - new_norm) / residual_norm;
        residual_norm = new_norm;
        fit.residual_history.push(new_norm);
        if improvement < cfg.min_improvement_rel {
            break;
        }
    }

    for (&k, c) in fit.support.iter().zip(qr.solve()) {
        fit.coefficients[k] = c;
    }
    fit
}

/// Precomputed sensing matrix for one `(Φ, Ψ)` pair. Reuse it across
/// blocks measured with the same matrix.
#[derive(Debug, Clone)]
pub struct OmpSolver {
    basis: Basis,
    spec: MatrixSpec,
    sensing: SensingMatrix,
}

impl OmpSolver {
    pub fn new(basis: Basis, spec: MatrixSpec) -> Result<Self> {
        let sensing = spec.sensing_matrix(&basis)?;
        Ok(Self { basis, spec, sensing })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn spec(&self) -> &MatrixSpec {
        &self.spec
    }

    pub fn sensing(&self) -> &SensingMatrix {
        &self.sensing
    }

    pub fn solve(&self, y: &MeasurementVector, cfg: &OmpConfig) -> Result<RecoveryResult> {
        if y.spec != self.spec {
            return Err(Error::param("measurements were taken with a different matrix"));
        }
        self.solve_values(&y.values, cfg)
    }

    /// Solve from raw measurement values taken with this solver's matrix.
    pub fn solve_values(&self, y: &[f64], cfg: &OmpConfig) -> Result<RecoveryResult> {
        cfg.validate()?;
        let m = self.spec.m();
        if y.len() != m {
            return Err(Error::dim(m, y.len()));
        }
        let n = self.basis.n();
        let spec = self.basis.spec();
        match &self.sensing {
            SensingMatrix::Real(a) => {
                let fit = greedy_fit(a, y, cfg, |_| None);
                let s_hat = CoefficientVector {
                    basis: spec,
                    values: Values::Real(fit.coefficients.clone()),
                };
                let predicted = a.mul_vec(&fit.coefficients);
                let residual_norm = residual_between(y, &predicted);
                let x_hat = self.basis.synthesize(&s_hat)?;
                Ok(RecoveryResult {
                    x_hat,
                    s_hat,
                    support: fit.support,
                    residual_norm,
                    iterations: fit.iterations,
                    residual_history: fit.residual_history,
                    degenerate: fit.degenerate,
                })
            }
            SensingMatrix::Complex(a) => {
                let yc: Vec<Complex64> = y.iter().map(|&v| Complex64::new(v, 0.0)).collect();
                let partner = |k: usize| (spec.kind() == BasisKind::Dft).then_some((n - k) % n);
                let mut fit = greedy_fit(a, &yc, cfg, partner);
                // A dropped partner leaves an unpaired atom; projecting onto
                // Hermitian vectors keeps x_hat real and cannot increase the
                // residual for real y and real Φ.
                let coeffs = crate::transforms::hermitian_part(&fit.coefficients);
                let original = fit.support.clone();
                for k in original {
                    let p = (n - k) % n;
                    if !fit.support.contains(&p) && coeffs[p] != Complex64::default() {
                        fit.support.push(p);
                    }
                }
                let predicted = a.mul_vec(&coeffs);
                let residual_norm = residual_between(&yc, &predicted);
                let s_hat = CoefficientVector {
                    basis: spec,
                    values: Values::Complex(coeffs),
                };
                let x_hat = self.basis.synthesize(&s_hat)?;
                Ok(RecoveryResult {
                    x_hat,
                    s_hat,
                    support: fit.support,
                    residual_norm,
                    iterations: fit.iterations,
                    residual_history: fit.residual_history,
                    degenerate: fit.degenerate,
                })
            }
        }
    }
}

fn residual_between<S: Scalar>(y: &[S], predicted: &[S]) -> f64 {
    y.iter()
        .zip(predicted)
        .map(|(&a, &b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Recover a block from its measurements. Builds the sensing matrix on
/// every call; use [`OmpSolver`] to amortize it over many blocks.
pub fn omp_solve(
    y: &MeasurementVector,
    basis: &Basis,
    spec: &MatrixSpec,
    cfg: &OmpConfig,
) -> Result<RecoveryResult> {
    if &y.spec != spec {
        return Err(Error::param("measurements were taken with a different matrix"));
    }
    if spec.n() != basis.n() {
        return Err(Error::dim(spec.n(), basis.n()));
    }
    OmpSolver::new(basis.clone(), spec.clone())?.solve(y, cfg)
}
