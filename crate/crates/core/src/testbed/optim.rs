//! Gradient descent and SPSA, the optimizers that produce trajectories for
//! PCA and multi-start studies.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gradient::{gradient, GradientEstimator};
use crate::loss::LossModel;
use crate::param::ParameterVector;
use crate::parallel;
use crate::rng::{self, streams, Rng};

/// Learning rate for the sombrero experiments.
pub const DEFAULT_LEARNING_RATE: f64 = 0.05;
pub const DEFAULT_SPSA_LEARNING_RATE: f64 = 0.1;
pub const DEFAULT_SPSA_DIRECTIONS: usize = 3;
pub const DEFAULT_SPSA_GRADIENT_EPS: f64 = 0.1;

/// An optimization run.
///
/// `losses[k]` is the loss at `trajectory[k]`. If the run stopped early,
/// `error` says why and the trajectory holds every point reached so far.
#[derive(Debug, Clone)]
pub struct Descent {
    pub trajectory: Vec<ParameterVector>,
    pub losses: Vec<f64>,
    pub error: Option<Error>,
}

impl Descent {
    pub fn final_point(&self) -> &ParameterVector {
        self.trajectory.last().expect("trajectory holds the start")
    }

    pub fn final_loss(&self) -> Option<f64> {
        self.losses.last().copied()
    }

    pub fn completed(&self) -> bool {
        self.error.is_none()
    }
}

fn check_learning_rate(lr: f64) -> Result<()> {
    if lr > 0.0 && lr.is_finite() {
        Ok(())
    } else {
        Err(Error::usage(format!("learning rate must be positive, got {lr}")))
    }
}

/// `θ_{k+1} = θ_k - lr · ∇L(θ_k)` for `iterations` steps.
pub fn gradient_descent(
    model: &LossModel,
    estimator: &GradientEstimator,
    initial: &ParameterVector,
    learning_rate: f64,
    iterations: usize,
) -> Result<Descent> {
    check_learning_rate(learning_rate)?;
    initial.check_same_dimension(&ParameterVector::zeros(model.dimension())?)?;
    let mut run = Descent {
        trajectory: vec![initial.clone()],
        losses: vec![model.evaluate(initial)?],
        error: None,
    };
    let mut theta = initial.clone();
    for _ in 0..iterations {
        let step = gradient(model, &theta, estimator)
            .and_then(|g| theta.add_scaled(-learning_rate, &g))
            .and_then(|next| model.evaluate(&next).map(|l| (next, l)));
        match step {
            Ok((next, loss)) => {
                run.trajectory.push(next.clone());
                run.losses.push(loss);
                theta = next;
            }
            Err(e) => {
                run.error = Some(e);
                break;
            }
        }
    }
    Ok(run)
}

/// Independent gradient-descent runs from every start, in parallel when
/// the model permits. Stochastic models run one start after another so
/// that evaluation indices, and hence results, do not depend on
/// scheduling.
pub fn multi_start_descent(
    model: &LossModel,
    estimator: &GradientEstimator,
    starts: &[ParameterVector],
    learning_rate: f64,
    iterations: usize,
) -> Result<Vec<Descent>> {
    check_learning_rate(learning_rate)?;
    let par = model.concurrent() && model.deterministic();
    parallel::map_indexed(starts, par, |_, s| {
        gradient_descent(model, estimator, s, learning_rate, iterations)
    })
    .into_iter()
    .collect()
}

/// `count` points uniform in `[lo, hi]^dimension`.
pub fn uniform_starts(
    count: usize,
    dimension: usize,
    lo: f64,
    hi: f64,
    seed: u64,
) -> Result<Vec<ParameterVector>> {
    if !(lo < hi && lo.is_finite() && hi.is_finite()) || dimension == 0 {
        return Err(Error::usage(format!(
            "need lo < hi and dimension >= 1, got [{lo}, {hi}] in {dimension}D"
        )));
    }
    let mut rng = rng::stream(seed, streams::INIT);
    (0..count)
        .map(|_| {
            ParameterVector::new((0..dimension).map(|_| rng.random_range(lo..=hi)).collect())
        })
        .collect()
}

/// SPSA gradient estimate from `n_directions` Rademacher perturbations,
/// costing exactly `2 · n_directions` evaluations.
pub fn spsa_gradient(
    model: &LossModel,
    point: &ParameterVector,
    n_directions: usize,
    eps: f64,
    seed: u64,
) -> Result<ParameterVector> {
    let mut rng = rng::substream(seed, streams::SPSA_GRADIENT, 0);
    spsa_gradient_with(model, point, n_directions, eps, &mut rng)
}

fn spsa_gradient_with(
    model: &LossModel,
    point: &ParameterVector,
    n_directions: usize,
    eps: f64,
    rng: &mut Rng,
) -> Result<ParameterVector> {
    if n_directions == 0 {
        return Err(Error::usage("SPSA needs at least one direction"));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::usage(format!("SPSA eps must be positive, got {eps}")));
    }
    let dim = model.dimension();
    point.check_same_dimension(&ParameterVector::zeros(dim)?)?;
    let theta = point.as_slice();
    let deltas: Vec<Vec<f64>> = (0..n_directions)
        .map(|_| {
            (0..dim)
                .map(|_| if rng.random::<bool>() { 1.0 } else { -1.0 })
                .collect()
        })
        .collect();
    let mut probes = Vec::with_capacity(2 * n_directions);
    for d in &deltas {
        probes.push(theta.iter().zip(d).map(|(t, s)| t + eps * s).collect());
        probes.push(theta.iter().zip(d).map(|(t, s)| t - eps * s).collect());
    }
    let values = model.evaluate_many(&probes)?;
    let mut g = vec![0.0; dim];
    for (d, pair) in deltas.iter().zip(values.chunks_exact(2)) {
        let slope = (pair[0] - pair[1]) / (2.0 * eps);
        for (gi, s) in g.iter_mut().zip(d) {
            *gi += slope * s;
        }
    }
    for gi in &mut g {
        *gi /= n_directions as f64;
    }
    ParameterVector::new(g)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SpsaConfig {
    pub learning_rate: f64,
    pub iterations: usize,
    pub directions: usize,
    pub eps: f64,
    pub seed: u64,
    /// Evaluate the loss at every iterate. Costs one extra evaluation per
    /// step on top of the `2 · directions` the gradient needs.
    pub track_loss: bool,
}

impl Default for SpsaConfig {
    fn default() -> Self {
        Self {
            learning_rate: DEFAULT_SPSA_LEARNING_RATE,
            iterations: 100,
            directions: DEFAULT_SPSA_DIRECTIONS,
            eps: DEFAULT_SPSA_GRADIENT_EPS,
            seed: 0,
            track_loss: true,
        }
    }
}

/// Gradient descent driven by [`spsa_gradient`]. Step `k` draws its
/// perturbations from its own substream.
///
/// Without `track_loss`, `losses` holds only the values at the first and
/// last iterate.
pub fn spsa_optimize(
    model: &LossModel,
    initial: &ParameterVector,
    config: &SpsaConfig,
) -> Result<Descent> {
    check_learning_rate(config.learning_rate)?;
    let mut run = Descent {
        trajectory: vec![initial.clone()],
        losses: vec![model.evaluate(initial)?],
        error: None,
    };
    let mut theta = initial.clone();
    for k in 0..config.iterations {
        let mut rng = rng::substream(config.seed, streams::SPSA_GRADIENT, k as u64 + 1);
        let step = spsa_gradient_with(model, &theta, config.directions, config.eps, &mut rng)
            .and_then(|g| theta.add_scaled(-config.learning_rate, &g));
        match step {
            Ok(next) => {
                if config.track_loss {
                    match model.evaluate(&next) {
                        Ok(l) => run.losses.push(l),
                        Err(e) => {
                            run.error = Some(e);
                            break;
                        }
                    }
                }
                run.trajectory.push(next.clone());
                theta = next;
            }
            Err(e) => {
                run.error = Some(e);
                break;
            }
        }
    }
    if !config.track_loss && run.trajectory.len() > 1 {
        match model.evaluate(&theta) {
            Ok(l) => run.losses.push(l),
            Err(e) => run.error = run.error.take().or(Some(e)),
        }
    }
    Ok(run)
}
