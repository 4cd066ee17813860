use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::param::ParameterVector;
use crate::parallel;

/// A scalar function over parameter space.
///
/// `call` is a unique index assigned by [`LossModel`] to every evaluation.
/// Deterministic losses ignore it; stochastic ones (finite-shot estimators)
/// derive their per-call randomness from it so that runs replay exactly.
pub trait Loss: Send + Sync {
    fn dimension(&self) -> usize;

    fn value(&self, theta: &[f64], call: u64) -> f64;

    /// Per-coordinate period, if the loss is periodic in every parameter.
    fn period(&self) -> Option<f64> {
        None
    }

    fn deterministic(&self) -> bool {
        true
    }

    /// Whether `value` may be called from several threads at once.
    fn concurrent(&self) -> bool {
        true
    }

    fn analytic_gradient(&self, _theta: &[f64]) -> Option<Vec<f64>> {
        None
    }

    fn label(&self) -> String {
        "custom".to_string()
    }
}

/// Closure-backed loss.
pub struct FnLoss<F> {
    dimension: usize,
    f: F,
}

impl<F> Loss for FnLoss<F>
where
    F: Fn(&[f64]) -> f64 + Send + Sync,
{
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn value(&self, theta: &[f64], _call: u64) -> f64 {
        (self.f)(theta)
    }
}

/// An evaluatable loss plus its evaluation counter.
///
/// Clones share the counter, so a model handed to several operations keeps
/// one running total.
#[derive(Clone)]
pub struct LossModel {
    loss: Arc<dyn Loss>,
    counter: Arc<AtomicU64>,
    allow_parallel: bool,
}

impl fmt::Debug for LossModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LossModel")
            .field("label", &self.loss.label())
            .field("dimension", &self.loss.dimension())
            .field("eval_count", &self.eval_count())
            .finish()
    }
}

impl LossModel {
    pub fn new<L: Loss + 'static>(loss: L) -> Self {
        Self::from_arc(Arc::new(loss))
    }

    pub fn from_arc(loss: Arc<dyn Loss>) -> Self {
        Self {
            loss,
            counter: Arc::new(AtomicU64::new(0)),
            allow_parallel: true,
        }
    }

    pub fn from_fn<F>(dimension: usize, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self::new(FnLoss { dimension, f })
    }

    /// A handle sharing this model's counter that always evaluates
    /// sequentially.
    pub fn sequential(&self) -> Self {
        Self {
            allow_parallel: false,
            ..self.clone()
        }
    }

    pub fn dimension(&self) -> usize {
        self.loss.dimension()
    }

    pub fn period(&self) -> Option<f64> {
        self.loss.period()
    }

    pub fn deterministic(&self) -> bool {
        self.loss.deterministic()
    }

    pub fn concurrent(&self) -> bool {
        self.allow_parallel && self.loss.concurrent() && parallel::available()
    }

    pub fn label(&self) -> String {
        self.loss.label()
    }

    pub fn loss(&self) -> &Arc<dyn Loss> {
        &self.loss
    }

    pub fn eval_count(&self) -> u64 {
        self.counter.load(Ordering::SeqCst)
    }

    pub fn evaluate(&self, point: &ParameterVector) -> Result<f64> {
        self.evaluate_slice(point.as_slice())
    }

    pub fn evaluate_slice(&self, theta: &[f64]) -> Result<f64> {
        self.check_point(theta)?;
        let call = self.counter.fetch_add(1, Ordering::SeqCst);
        self.finish(theta, call)
    }

    /// Evaluates every point, in parallel when the model allows it.
    ///
    /// A contiguous block of call indices is reserved up front and assigned
    /// by position, so stochastic models give the same answer regardless
    /// of which thread finishes first.
    pub fn evaluate_batch(&self, points: &[ParameterVector]) -> Result<Vec<f64>> {
        let raw: Vec<&[f64]> = points.iter().map(|p| p.as_slice()).collect();
        self.evaluate_refs(&raw)
    }

    pub(crate) fn evaluate_many(&self, points: &[Vec<f64>]) -> Result<Vec<f64>> {
        let raw: Vec<&[f64]> = points.iter().map(|p| p.as_slice()).collect();
        self.evaluate_refs(&raw)
    }

    fn evaluate_refs(&self, points: &[&[f64]]) -> Result<Vec<f64>> {
        for p in points {
            self.check_point(p)?;
        }
        let base = self
            .counter
            .fetch_add(points.len() as u64, Ordering::SeqCst);
        parallel::map_indexed(points, self.concurrent(), |i, p| {
            self.finish(p, base + i as u64)
        })
        .into_iter()
        .collect()
    }

    pub fn analytic_gradient(&self, theta: &[f64]) -> Option<Vec<f64>> {
        self.loss.analytic_gradient(theta)
    }

    pub fn budget_report(&self) -> BudgetReport {
        BudgetReport::new(self.eval_count(), self.dimension())
    }

    fn check_point(&self, theta: &[f64]) -> Result<()> {
        if theta.len() != self.dimension() {
            return Err(Error::usage(format!(
                "model expects dimension {}, got {}",
                self.dimension(),
                theta.len()
            )));
        }
        if theta.iter().any(|c| !c.is_finite()) {
            return Err(Error::numerical_at("non-finite parameter vector", theta));
        }
        Ok(())
    }

    fn finish(&self, theta: &[f64], call: u64) -> Result<f64> {
        let v = self.loss.value(theta, call);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::numerical_at(
                format!("loss returned non-finite value {v}"),
                theta,
            ))
        }
    }
}

/// Evaluation cost expressed in gradient-descent steps.
///
/// One central-difference gradient costs `2 * dimension` evaluations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetReport {
    pub count: u64,
    pub dimension: usize,
    pub equivalent_gradient_steps: f64,
}

impl BudgetReport {
    pub fn new(count: u64, dimension: usize) -> Self {
        Self {
            count,
            dimension,
            equivalent_gradient_steps: count as f64 / (2.0 * dimension as f64),
        }
    }
}

impl fmt::Display for BudgetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} loss evaluations (= {} central-difference gradient steps at dimension {})",
            self.count, self.equivalent_gradient_steps, self.dimension
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_model_and_counter() {
        let m = LossModel::from_fn(3, |_| 3.5);
        assert_eq!(m.eval_count(), 0);
        let p = ParameterVector::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(m.evaluate(&p).unwrap(), 3.5);
        assert_eq!(m.eval_count(), 1);
        let batch = vec![p.clone(); 17];
        assert_eq!(m.evaluate_batch(&batch).unwrap(), vec![3.5; 17]);
        assert_eq!(m.eval_count(), 18);
    }

    #[test]
    fn rejects_wrong_dimension() {
        let m = LossModel::from_fn(2, |_| 0.0);
        let p = ParameterVector::new(vec![1.0]).unwrap();
        let err = m.evaluate(&p).unwrap_err();
        assert!(err.is_usage());
    }

    #[test]
    fn non_finite_value_is_numerical_error_with_point() {
        let m = LossModel::from_fn(1, |t| if t[0] > 0.0 { f64::NAN } else { 0.0 });
        let p = ParameterVector::new(vec![1.0]).unwrap();
        match m.evaluate(&p).unwrap_err() {
            Error::Numerical { point, .. } => assert_eq!(point, Some(vec![1.0])),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn budget_matches_appendix_accounting() {
        assert_eq!(BudgetReport::new(100, 25).equivalent_gradient_steps, 2.0);
        assert_eq!(BudgetReport::new(900, 25).equivalent_gradient_steps, 18.0);
        assert_eq!(BudgetReport::new(1600, 25).equivalent_gradient_steps, 32.0);
        let m = LossModel::from_fn(25, |_| 0.0);
        assert_eq!(m.budget_report().count, 0);
    }

    #[test]
    fn clones_share_the_counter() {
        let m = LossModel::from_fn(1, |t| t[0]);
        let s = m.sequential();
        s.evaluate_slice(&[1.0]).unwrap();
        m.evaluate_slice(&[1.0]).unwrap();
        assert_eq!(m.eval_count(), 2);
        assert!(!s.concurrent());
    }
}
