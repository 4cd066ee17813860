use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loss::LossModel;
use crate::param::ParameterVector;

pub const DEFAULT_GRADIENT_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradientScheme {
    CentralDifference,
    ForwardDifference,
    /// Use the loss's own gradient callback.
    AnalyticCallback,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientEstimator {
    scheme: GradientScheme,
    step: f64,
}

impl Default for GradientEstimator {
    fn default() -> Self {
        Self {
            scheme: GradientScheme::CentralDifference,
            step: DEFAULT_GRADIENT_STEP,
        }
    }
}

impl GradientEstimator {
    pub fn new(scheme: GradientScheme, step: f64) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::usage(format!(
                "finite-difference step must be positive, got {step}"
            )));
        }
        Ok(Self { scheme, step })
    }

    pub fn central(step: f64) -> Result<Self> {
        Self::new(GradientScheme::CentralDifference, step)
    }

    pub fn forward(step: f64) -> Result<Self> {
        Self::new(GradientScheme::ForwardDifference, step)
    }

    pub fn analytic() -> Self {
        Self {
            scheme: GradientScheme::AnalyticCallback,
            step: DEFAULT_GRADIENT_STEP,
        }
    }

    pub fn scheme(&self) -> GradientScheme {
        self.scheme
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Loss evaluations consumed by one gradient at the given dimension.
    pub fn evaluations_per_gradient(&self, dimension: usize) -> u64 {
        match self.scheme {
            GradientScheme::CentralDifference => 2 * dimension as u64,
            GradientScheme::ForwardDifference => dimension as u64 + 1,
            GradientScheme::AnalyticCallback => 0,
        }
    }

    pub fn gradient(&self, model: &LossModel, point: &ParameterVector) -> Result<ParameterVector> {
        gradient(model, point, self)
    }
}

/// Estimates the gradient of `model` at `point`.
pub fn gradient(
    model: &LossModel,
    point: &ParameterVector,
    estimator: &GradientEstimator,
) -> Result<ParameterVector> {
    let dim = model.dimension();
    if point.dimension() != dim {
        return Err(Error::usage(format!(
            "model expects dimension {dim}, got {}",
            point.dimension()
        )));
    }
    let theta = point.as_slice();
    let h = estimator.step;
    let grad = match estimator.scheme {
        GradientScheme::CentralDifference => {
            let mut probes = Vec::with_capacity(2 * dim);
            for i in 0..dim {
                probes.push(shifted(theta, i, h));
                probes.push(shifted(theta, i, -h));
            }
            let values = model.evaluate_many(&probes)?;
            values
                .chunks_exact(2)
                .map(|pair| (pair[0] - pair[1]) / (2.0 * h))
                .collect::<Vec<_>>()
        }
        GradientScheme::ForwardDifference => {
            let mut probes = Vec::with_capacity(dim + 1);
            probes.push(theta.to_vec());
            for i in 0..dim {
                probes.push(shifted(theta, i, h));
            }
            let values = model.evaluate_many(&probes)?;
            values[1..].iter().map(|v| (v - values[0]) / h).collect()
        }
        GradientScheme::AnalyticCallback => model.analytic_gradient(theta).ok_or_else(|| {
            Error::usage(format!("model '{}' has no analytic gradient", model.label()))
        })?,
    };
    if grad.len() != dim {
        return Err(Error::numerical(format!(
            "gradient has dimension {}, expected {dim}",
            grad.len()
        )));
    }
    if grad.iter().any(|g| !g.is_finite()) {
        return Err(Error::numerical_at("non-finite gradient", theta));
    }
    ParameterVector::new(grad)
}

/// Gradients at several points, with every finite-difference probe sent
/// to the model as one batch. Result `k` belongs to `points[k]`.
pub fn gradients(
    model: &LossModel,
    points: &[ParameterVector],
    estimator: &GradientEstimator,
) -> Result<Vec<ParameterVector>> {
    let dim = model.dimension();
    if let Some(p) = points.iter().find(|p| p.dimension() != dim) {
        return Err(Error::usage(format!(
            "model expects dimension {dim}, got {}",
            p.dimension()
        )));
    }
    let h = estimator.step;
    let grads: Vec<Vec<f64>> = match estimator.scheme {
        GradientScheme::AnalyticCallback => {
            return points.iter().map(|p| gradient(model, p, estimator)).collect();
        }
        GradientScheme::CentralDifference => {
            let mut probes = Vec::with_capacity(2 * dim * points.len());
            for p in points {
                for i in 0..dim {
                    probes.push(shifted(p.as_slice(), i, h));
                    probes.push(shifted(p.as_slice(), i, -h));
                }
            }
            let values = model.evaluate_many(&probes)?;
            values
                .chunks_exact(2 * dim)
                .map(|block| {
                    block
                        .chunks_exact(2)
                        .map(|pair| (pair[0] - pair[1]) / (2.0 * h))
                        .collect()
                })
                .collect()
        }
        GradientScheme::ForwardDifference => {
            let mut probes = Vec::with_capacity((dim + 1) * points.len());
            for p in points {
                probes.push(p.to_vec());
                for i in 0..dim {
                    probes.push(shifted(p.as_slice(), i, h));
                }
            }
            let values = model.evaluate_many(&probes)?;
            values
                .chunks_exact(dim + 1)
                .map(|block| block[1..].iter().map(|v| (v - block[0]) / h).collect())
                .collect()
        }
    };
    grads
        .into_iter()
        .zip(points)
        .map(|(g, p)| {
            if g.iter().any(|x| !x.is_finite()) {
                Err(Error::numerical_at("non-finite gradient", p.as_slice()))
            } else {
                ParameterVector::new(g)
            }
        })
        .collect()
}

pub(crate) fn shifted(theta: &[f64], i: usize, h: f64) -> Vec<f64> {
    let mut p = theta.to_vec();
    p[i] += h;
    p
}
