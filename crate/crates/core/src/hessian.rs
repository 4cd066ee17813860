//! Hessians by finite differences or simultaneous perturbation, with their
//! spectra and the scans built from them.

use nalgebra::DMatrix;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometric::Direction;
use crate::linalg::{jacobi_eigen, symmetrize};
use crate::loss::{Loss, LossModel};
use crate::param::ParameterVector;
use crate::rng::{self, streams};
use crate::scans::{scan_1d_linear, scan_plane, GridSpec, Interval, PlaneKind, Scan1DResult, Scan2DResult};

pub const DEFAULT_HESSIAN_STEP: f64 = 1e-3;
pub const DEFAULT_SPSA_EPS: f64 = 1e-2;

/// Grid value written where the largest eigenvalue is exactly zero.
pub const RATIO_SENTINEL: f64 = -2.0;

#[derive(Debug, Clone, PartialEq)]
pub struct HessianResult {
    /// Symmetrized matrix of second derivatives.
    pub matrix: DMatrix<f64>,
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Unit eigenvectors, aligned with `eigenvalues`.
    pub eigenvectors: Vec<Direction>,
    pub point: ParameterVector,
    /// Largest `|H - Hᵀ|` entry before symmetrization.
    pub asymmetry: f64,
    /// Set when the estimate is statistical (SPSA, or a stochastic model);
    /// eigen-residual checks do not apply to such results.
    pub stochastic: bool,
}

impl HessianResult {
    fn from_matrix(raw: DMatrix<f64>, point: &ParameterVector, stochastic: bool) -> Result<Self> {
        let asymmetry = (&raw - raw.transpose()).amax();
        let matrix = symmetrize(&raw);
        let eig = jacobi_eigen(&matrix)?;
        let n = matrix.nrows();
        let eigenvectors = (0..n)
            .map(|k| Direction::from_vec(eig.vectors.column(k).iter().copied().collect()))
            .collect::<Result<_>>()?;
        Ok(Self {
            matrix,
            eigenvalues: eig.values.iter().copied().collect(),
            eigenvectors,
            point: point.clone(),
            asymmetry,
            stochastic,
        })
    }

    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    /// `λ_min / λ_max`, or [`RATIO_SENTINEL`] when `λ_max` is zero.
    pub fn eigenvalue_ratio(&self) -> f64 {
        let max = self.max_eigenvalue();
        if max == 0.0 {
            RATIO_SENTINEL
        } else {
            self.min_eigenvalue() / max
        }
    }

    /// Largest `|H v_k - λ_k v_k| / max(1, |λ_k|)` over all eigenpairs.
    pub fn eigen_residual(&self) -> f64 {
        self.eigenvalues
            .iter()
            .zip(&self.eigenvectors)
            .map(|(&lambda, v)| {
                let v = nalgebra::DVector::from_column_slice(v.as_slice());
                let r = &self.matrix * &v - &v * lambda;
                r.amax() / lambda.abs().max(1.0)
            })
            .fold(0.0, f64::max)
    }
}

fn check_point(model: &LossModel, point: &ParameterVector) -> Result<()> {
    if point.dimension() != model.dimension() {
        return Err(Error::usage(format!(
            "point has dimension {}, model expects {}",
            point.dimension(),
            model.dimension()
        )));
    }
    Ok(())
}

/// Number of loss evaluations [`exact_hessian`] spends at dimension `d`.
pub fn exact_hessian_evaluations(d: usize) -> u64 {
    let d = d as u64;
    1 + 2 * d + 2 * d * d.saturating_sub(1)
}

/// Central-difference Hessian.
///
/// Diagonal entries use the three-point stencil around one shared center
/// evaluation; each off-diagonal pair uses the four-point stencil once.
pub fn exact_hessian(model: &LossModel, point: &ParameterVector, step: f64) -> Result<HessianResult> {
    check_point(model, point)?;
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::usage(format!("Hessian step must be positive, got {step}")));
    }
    let d = point.dimension();
    let theta = point.as_slice();
    let h = step;
    let probe = |shifts: &[(usize, f64)]| {
        let mut p = theta.to_vec();
        for &(i, s) in shifts {
            p[i] += s;
        }
        p
    };
    let mut probes = Vec::with_capacity(exact_hessian_evaluations(d) as usize);
    probes.push(theta.to_vec());
    for i in 0..d {
        probes.push(probe(&[(i, h)]));
        probes.push(probe(&[(i, -h)]));
    }
    for i in 0..d {
        for j in (i + 1)..d {
            probes.push(probe(&[(i, h), (j, h)]));
            probes.push(probe(&[(i, h), (j, -h)]));
            probes.push(probe(&[(i, -h), (j, h)]));
            probes.push(probe(&[(i, -h), (j, -h)]));
        }
    }
    let f = model.evaluate_many(&probes)?;
    let center = f[0];
    let mut raw = DMatrix::zeros(d, d);
    for i in 0..d {
        raw[(i, i)] = (f[1 + 2 * i] - 2.0 * center + f[2 + 2 * i]) / (h * h);
    }
    let mut k = 1 + 2 * d;
    for i in 0..d {
        for j in (i + 1)..d {
            let v = (f[k] - f[k + 1] - f[k + 2] + f[k + 3]) / (4.0 * h * h);
            raw[(i, j)] = v;
            raw[(j, i)] = v;
            k += 4;
        }
    }
    HessianResult::from_matrix(raw, point, !model.deterministic())
}

fn rademacher(rng: &mut rng::Rng, d: usize) -> Vec<f64> {
    (0..d)
        .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
        .collect()
}

/// Stochastic Hessian estimate averaged over `repetitions` pairs of
/// Rademacher perturbations; costs exactly `4 * repetitions` evaluations.
///
/// Each pair contributes the mixed second difference along `(Δ1, Δ2)`
/// times the symmetrized outer product `(Δ1 Δ2ᵀ + Δ2 Δ1ᵀ) / 2`.
pub fn spsa_hessian(
    model: &LossModel,
    point: &ParameterVector,
    repetitions: usize,
    eps: f64,
    seed: u64,
) -> Result<HessianResult> {
    check_point(model, point)?;
    if repetitions == 0 {
        return Err(Error::usage("SPSA Hessian needs at least one repetition"));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::usage(format!("SPSA eps must be positive, got {eps}")));
    }
    let d = point.dimension();
    let theta = point.as_slice();
    let mut deltas = Vec::with_capacity(repetitions);
    let mut probes = Vec::with_capacity(4 * repetitions);
    for k in 0..repetitions {
        let mut r = rng::substream(seed, streams::SPSA_HESSIAN, k as u64);
        let d1 = rademacher(&mut r, d);
        let d2 = rademacher(&mut r, d);
        for (s1, s2) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
            probes.push(
                (0..d)
                    .map(|i| theta[i] + eps * (s1 * d1[i] + s2 * d2[i]))
                    .collect::<Vec<f64>>(),
            );
        }
        deltas.push((d1, d2));
    }
    let f = model.evaluate_many(&probes)?;
    let mut acc = DMatrix::zeros(d, d);
    for (k, (d1, d2)) in deltas.iter().enumerate() {
        let q = &f[4 * k..4 * k + 4];
        let mixed = (q[0] - q[1] - q[2] + q[3]) / (4.0 * eps * eps);
        for i in 0..d {
            for j in 0..d {
                acc[(i, j)] += mixed * 0.5 * (d1[i] * d2[j] + d2[i] * d1[j]);
            }
        }
    }
    acc /= repetitions as f64;
    HessianResult::from_matrix(acc, point, true)
}

/// Which Hessian estimator to run at each point of a scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum HessianConfig {
    Exact { step: f64 },
    Spsa { repetitions: usize, eps: f64, seed: u64 },
}

impl Default for HessianConfig {
    fn default() -> Self {
        HessianConfig::Exact {
            step: DEFAULT_HESSIAN_STEP,
        }
    }
}

impl HessianConfig {
    pub fn compute(&self, model: &LossModel, point: &ParameterVector) -> Result<HessianResult> {
        match *self {
            HessianConfig::Exact { step } => exact_hessian(model, point, step),
            HessianConfig::Spsa { repetitions, eps, seed } => {
                spsa_hessian(model, point, repetitions, eps, seed)
            }
        }
    }
}

/// A 1D scan along one Hessian eigenvector.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenScan {
    pub index: usize,
    pub eigenvalue: f64,
    pub scan: Scan1DResult,
}

/// Scans along the selected eigenvectors, starting from the Hessian's point.
pub fn eigenvector_scans(
    hessian: &HessianResult,
    model: &LossModel,
    which: &[usize],
    range: Interval,
    n_points: usize,
) -> Result<Vec<EigenScan>> {
    if let Some(&bad) = which.iter().find(|&&k| k >= hessian.dimension()) {
        return Err(Error::usage(format!(
            "eigenvector index {bad} out of range for dimension {}",
            hessian.dimension()
        )));
    }
    which
        .iter()
        .map(|&k| {
            Ok(EigenScan {
                index: k,
                eigenvalue: hessian.eigenvalues[k],
                scan: scan_1d_linear(model, &hessian.point, &hessian.eigenvectors[k], range, n_points)?,
            })
        })
        .collect()
}

/// Pointwise `λ_min / λ_max` of another model's Hessian, usable anywhere a
/// loss is expected.
pub struct EigenvalueRatio {
    inner: LossModel,
    config: HessianConfig,
}

impl EigenvalueRatio {
    pub fn new(inner: LossModel, config: HessianConfig) -> Self {
        Self { inner, config }
    }

    fn ratio_at(&self, theta: &[f64], call: u64) -> Result<f64> {
        let point = ParameterVector::new(theta.to_vec())?;
        let config = match self.config {
            HessianConfig::Spsa { repetitions, eps, seed } => HessianConfig::Spsa {
                repetitions,
                eps,
                seed: rng::splitmix64(seed ^ rng::splitmix64(call)),
            },
            exact => exact,
        };
        Ok(config.compute(&self.inner, &point)?.eigenvalue_ratio())
    }
}

impl Loss for EigenvalueRatio {
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn value(&self, theta: &[f64], call: u64) -> f64 {
        self.ratio_at(theta, call).unwrap_or(f64::NAN)
    }

    fn period(&self) -> Option<f64> {
        self.inner.period()
    }

    fn deterministic(&self) -> bool {
        self.inner.deterministic() && matches!(self.config, HessianConfig::Exact { .. })
    }

    fn concurrent(&self) -> bool {
        self.inner.concurrent()
    }

    fn label(&self) -> String {
        format!("eigenvalue-ratio({})", self.inner.label())
    }
}

/// 2D scan of `λ_min / λ_max`; cells where `λ_max = 0` hold
/// [`RATIO_SENTINEL`].
pub fn eigenvalue_ratio_scan(
    model: &LossModel,
    origin: &ParameterVector,
    dir_x: &Direction,
    dir_y: &Direction,
    grid: GridSpec,
    config: HessianConfig,
) -> Result<Scan2DResult> {
    let metric = LossModel::new(EigenvalueRatio::new(model.clone(), config));
    let metric = if model.concurrent() { metric } else { metric.sequential() };
    scan_plane(&metric, origin, dir_x, dir_y, grid, PlaneKind::Linear)
}

/// Mean and standard deviation of rank-sorted spectra (eigenvalue `k` of
/// every result is pooled with eigenvalue `k` of the others).
pub fn spectrum_statistics(results: &[HessianResult]) -> Result<(Vec<f64>, Vec<f64>)> {
    let Some(first) = results.first() else {
        return Err(Error::usage("no spectra to aggregate"));
    };
    let d = first.dimension();
    if results.iter().any(|r| r.dimension() != d) {
        return Err(Error::usage("spectra have mixed dimensions"));
    }
    let n = results.len() as f64;
    let mean: Vec<f64> = (0..d)
        .map(|k| results.iter().map(|r| r.eigenvalues[k]).sum::<f64>() / n)
        .collect();
    let std = (0..d)
        .map(|k| {
            (results
                .iter()
                .map(|r| (r.eigenvalues[k] - mean[k]).powi(2))
                .sum::<f64>()
                / n)
                .sqrt()
        })
        .collect();
    Ok((mean, std))
}
