//! Nudged elastic band and AutoNEB: relaxing a chain of pivots between two
//! fixed points toward a low-loss connecting path.
//!
//! The default update removes the gradient component along the chain
//! tangent and then re-spaces the pivots evenly by arc length, which stands
//! in for spring forces. A positive spring constant switches to plain
//! descent on the elastic-band energy
//! `Σ L(p_i) + Σ ½ k |p_{i+1} - p_i|²` without re-spacing.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometric::Direction;
use crate::gradient::{gradients, GradientEstimator};
use crate::loss::LossModel;
use crate::param::{dot, lerp, ParameterVector};
use crate::scans::{Scan1DResult, ScanKind};

pub const DEFAULT_PIVOTS: usize = 10;

/// Ordered pivots `p_0 .. p_{N+1}`; the two endpoints never move.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<ParameterVector>", into = "Vec<ParameterVector>")]
pub struct Chain {
    pivots: Vec<ParameterVector>,
}

impl Chain {
    pub fn new(pivots: Vec<ParameterVector>) -> Result<Self> {
        if pivots.len() < 3 {
            return Err(Error::usage(format!(
                "a chain needs at least 3 pivots, got {}",
                pivots.len()
            )));
        }
        let d = pivots[0].dimension();
        if pivots.iter().any(|p| p.dimension() != d) {
            return Err(Error::usage("chain pivots have mixed dimensions"));
        }
        Ok(Self { pivots })
    }

    pub fn pivots(&self) -> &[ParameterVector] {
        &self.pivots
    }

    pub fn len(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dimension(&self) -> usize {
        self.pivots[0].dimension()
    }

    pub fn start(&self) -> &ParameterVector {
        &self.pivots[0]
    }

    pub fn end(&self) -> &ParameterVector {
        self.pivots.last().expect("chain has >= 3 pivots")
    }

    pub fn segment_lengths(&self) -> Vec<f64> {
        self.pivots.windows(2).map(|w| w[0].distance(&w[1])).collect()
    }

    pub fn path_length(&self) -> f64 {
        self.segment_lengths().iter().sum()
    }

    fn with_interior(&self, interior: Vec<ParameterVector>) -> Chain {
        let mut pivots = Vec::with_capacity(interior.len() + 2);
        pivots.push(self.start().clone());
        pivots.extend(interior);
        pivots.push(self.end().clone());
        Chain { pivots }
    }
}

impl TryFrom<Vec<ParameterVector>> for Chain {
    type Error = Error;
    fn try_from(v: Vec<ParameterVector>) -> Result<Self> {
        Chain::new(v)
    }
}

impl From<Chain> for Vec<ParameterVector> {
    fn from(c: Chain) -> Self {
        c.pivots
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct NebConfig {
    pub learning_rate: f64,
    /// Gradient steps per NEB run (per AutoNEB cycle).
    pub iterations: usize,
    /// AutoNEB cycles.
    pub cycles: usize,
    /// 0 selects the projected-gradient update with re-spacing.
    pub spring_constant: f64,
    pub relative_insert_tolerance: f64,
    pub absolute_insert_tolerance: f64,
    pub max_new_pivots: usize,
}

impl Default for NebConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            iterations: 100,
            cycles: 4,
            spring_constant: 0.0,
            relative_insert_tolerance: 0.2,
            absolute_insert_tolerance: 0.0,
            max_new_pivots: 5,
        }
    }
}

impl NebConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::usage(format!(
                "learning_rate must be positive, got {}",
                self.learning_rate
            )));
        }
        if !(self.spring_constant >= 0.0 && self.spring_constant.is_finite()) {
            return Err(Error::usage("spring_constant must be >= 0"));
        }
        if !(self.relative_insert_tolerance.is_finite() && self.absolute_insert_tolerance.is_finite()) {
            return Err(Error::usage("insert tolerances must be finite"));
        }
        if self.iterations == 0 || self.cycles == 0 || self.max_new_pivots == 0 {
            return Err(Error::usage(
                "iterations, cycles and max_new_pivots must be positive",
            ));
        }
        Ok(())
    }
}

/// `n_pivots` evenly spaced points from `a` to `b`, endpoints included.
pub fn init_chain(point_a: &ParameterVector, point_b: &ParameterVector, n_pivots: usize) -> Result<Chain> {
    point_a.check_same_dimension(point_b)?;
    if n_pivots < 3 {
        return Err(Error::usage(format!("n_pivots must be >= 3, got {n_pivots}")));
    }
    let last = n_pivots - 1;
    let mut pivots = Vec::with_capacity(n_pivots);
    pivots.push(point_a.clone());
    for k in 1..last {
        pivots.push(point_a.lerp(point_b, k as f64 / last as f64)?);
    }
    pivots.push(point_b.clone());
    Chain::new(pivots)
}

/// Unit tangents at the interior pivots.
///
/// Pivot `i` takes the segment toward its higher-loss neighbor:
/// `p_{i+1} - p_i` when `L(p_{i+1}) > L(p_{i-1})`, otherwise `p_i - p_{i-1}`.
pub fn chain_tangents(chain: &Chain, losses: &[f64]) -> Result<Vec<Direction>> {
    if losses.len() != chain.len() {
        return Err(Error::usage(format!(
            "{} losses for {} pivots",
            losses.len(),
            chain.len()
        )));
    }
    let p = chain.pivots();
    (1..p.len() - 1)
        .map(|i| {
            let seg = if losses[i + 1] > losses[i - 1] {
                p[i + 1].sub(&p[i])?
            } else {
                p[i].sub(&p[i - 1])?
            };
            if seg.norm() == 0.0 {
                return Err(Error::numerical_at(
                    format!("zero-length segment at pivot {i}"),
                    p[i].as_slice(),
                ));
            }
            Ok(Direction::new(seg)?.normalized())
        })
        .collect()
}

/// One update of the interior pivots; endpoints are carried over untouched.
pub fn neb_step(
    chain: &Chain,
    model: &LossModel,
    estimator: &GradientEstimator,
    config: &NebConfig,
) -> Result<Chain> {
    config.validate()?;
    let p = chain.pivots();
    let interior = &p[1..p.len() - 1];
    let tangents = if config.spring_constant == 0.0 {
        let losses = model.evaluate_batch(p)?;
        Some(chain_tangents(chain, &losses)?)
    } else {
        None
    };
    let grads = gradients(model, interior, estimator).map_err(|e| match e {
        Error::Numerical { point, .. } => {
            let idx = point
                .as_ref()
                .and_then(|q| interior.iter().position(|x| x.as_slice() == q.as_slice()))
                .map_or(0, |k| k + 1);
            Error::Numerical {
                message: format!("non-finite gradient at pivot {idx}"),
                point,
            }
        }
        other => other,
    })?;
    let lr = config.learning_rate;
    let k = config.spring_constant;
    let moved = interior
        .iter()
        .enumerate()
        .map(|(j, pivot)| {
            let g = grads[j].as_slice();
            let force: Vec<f64> = match &tangents {
                Some(t) => {
                    let tau = t[j].as_slice();
                    let along = dot(g, tau);
                    g.iter().zip(tau).map(|(gi, ti)| gi - along * ti).collect()
                }
                None => {
                    let (prev, next) = (&p[j], &p[j + 2]);
                    (0..g.len())
                        .map(|c| g[c] + k * (2.0 * pivot[c] - prev[c] - next[c]))
                        .collect()
                }
            };
            ParameterVector::new(
                pivot.iter().zip(&force).map(|(x, f)| x - lr * f).collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(chain.with_interior(moved))
}

fn cumulative_lengths(chain: &Chain) -> Vec<f64> {
    let mut acc = vec![0.0];
    for len in chain.segment_lengths() {
        let last = *acc.last().unwrap();
        acc.push(last + len);
    }
    acc
}

/// Moves the interior pivots to equal arc-length spacing along the current
/// piecewise-linear path.
pub fn redistribute_chain(chain: &Chain) -> Result<Chain> {
    let cum = cumulative_lengths(chain);
    let total = *cum.last().unwrap();
    if !(total > 0.0) {
        return Err(Error::usage("cannot redistribute a zero-length chain"));
    }
    let p = chain.pivots();
    let segments = p.len() - 1;
    let mut seg = 0;
    let mut interior = Vec::with_capacity(p.len() - 2);
    for k in 1..segments {
        let target = total * k as f64 / segments as f64;
        while seg + 1 < segments && cum[seg + 1] < target {
            seg += 1;
        }
        let len = cum[seg + 1] - cum[seg];
        let frac = if len > 0.0 { ((target - cum[seg]) / len).clamp(0.0, 1.0) } else { 0.0 };
        interior.push(ParameterVector::new(lerp(
            p[seg].as_slice(),
            p[seg + 1].as_slice(),
            frac,
        ))?);
    }
    Ok(chain.with_interior(interior))
}

/// Runs `config.iterations` NEB updates. The history starts with the input
/// chain and holds one entry per iteration after it.
pub fn run_neb(
    chain: &Chain,
    model: &LossModel,
    estimator: &GradientEstimator,
    config: &NebConfig,
) -> Result<Vec<Chain>> {
    config.validate()?;
    let mut history = Vec::with_capacity(config.iterations + 1);
    history.push(chain.clone());
    let mut current = chain.clone();
    for _ in 0..config.iterations {
        current = neb_step(&current, model, estimator, config)?;
        if config.spring_constant == 0.0 {
            current = redistribute_chain(&current)?;
        }
        history.push(current.clone());
    }
    Ok(history)
}

/// Segments whose midpoint loss deviates from the linear interpolation of
/// the end losses by more than the insertion tolerance, worst first.
pub fn insertion_candidates(chain: &Chain, model: &LossModel, config: &NebConfig) -> Result<Vec<(usize, f64)>> {
    let p = chain.pivots();
    let mut probes: Vec<ParameterVector> = p.to_vec();
    for w in p.windows(2) {
        probes.push(w[0].lerp(&w[1], 0.5)?);
    }
    let values = model.evaluate_batch(&probes)?;
    let (pivot_losses, mid_losses) = values.split_at(p.len());
    let mut out: Vec<(usize, f64)> = mid_losses
        .iter()
        .enumerate()
        .filter_map(|(s, &mid)| {
            let interp = 0.5 * (pivot_losses[s] + pivot_losses[s + 1]);
            let deviation = (mid - interp).abs();
            let tolerance = config.absolute_insert_tolerance + config.relative_insert_tolerance * interp.abs();
            (deviation > tolerance).then_some((s, deviation))
        })
        .collect();
    out.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    Ok(out)
}

/// AutoNEB: NEB runs separated by pivot insertion at under-resolved
/// segment midpoints. Returns the relaxed chain of every cycle.
pub fn run_auto_neb(
    chain: &Chain,
    model: &LossModel,
    estimator: &GradientEstimator,
    config: &NebConfig,
) -> Result<Vec<Chain>> {
    config.validate()?;
    let mut cycles = Vec::with_capacity(config.cycles);
    let mut current = chain.clone();
    for cycle in 0..config.cycles {
        current = run_neb(&current, model, estimator, config)?
            .pop()
            .expect("history is nonempty");
        cycles.push(current.clone());
        if cycle + 1 == config.cycles {
            break;
        }
        let mut chosen: Vec<usize> = insertion_candidates(&current, model, config)?
            .into_iter()
            .take(config.max_new_pivots)
            .map(|(s, _)| s)
            .collect();
        if chosen.is_empty() {
            continue;
        }
        chosen.sort_unstable_by(|a, b| b.cmp(a));
        let mut pivots = current.pivots().to_vec();
        for s in chosen {
            let mid = pivots[s].lerp(&pivots[s + 1], 0.5)?;
            pivots.insert(s + 1, mid);
        }
        current = Chain::new(pivots)?;
    }
    Ok(cycles)
}

/// Loss sampled along the chain, parameterized by normalized arc length.
///
/// Each segment contributes `samples_per_segment` evenly spaced samples
/// (its start included), and the final endpoint closes the profile.
/// Zero-length segments are skipped.
pub fn chain_loss_profile(chain: &Chain, model: &LossModel, samples_per_segment: usize) -> Result<Scan1DResult> {
    if samples_per_segment == 0 {
        return Err(Error::usage("samples_per_segment must be >= 1"));
    }
    let cum = cumulative_lengths(chain);
    let total = *cum.last().unwrap();
    if !(total > 0.0) {
        return Err(Error::usage("chain has zero length"));
    }
    let p = chain.pivots();
    let mut ts = Vec::new();
    let mut points = Vec::new();
    for s in 0..p.len() - 1 {
        let len = cum[s + 1] - cum[s];
        if len == 0.0 {
            continue;
        }
        for k in 0..samples_per_segment {
            let f = k as f64 / samples_per_segment as f64;
            ts.push((cum[s] + f * len) / total);
            points.push(lerp(p[s].as_slice(), p[s + 1].as_slice(), f));
        }
    }
    ts.push(1.0);
    points.push(chain.end().to_vec());
    let values = model.evaluate_many(&points)?;
    let direction = Direction::new(chain.end().sub(chain.start())?)
        .map_err(|_| Error::usage("chain endpoints coincide"))?;
    Ok(Scan1DResult {
        ts,
        values,
        origin: chain.start().clone(),
        direction,
        kind: ScanKind::Piecewise,
    })
}
