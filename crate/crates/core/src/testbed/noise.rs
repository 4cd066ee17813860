//! Finite-shot estimators wrapped around exact losses.
//!
//! Every evaluation draws from `substream(seed, SHOT_NOISE, call)`, where
//! `call` is the model's evaluation index, so a run replays exactly for a
//! fixed seed even when evaluations are spread over threads.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand_distr::Binomial;

use crate::error::{Error, Result};
use crate::loss::{Loss, LossModel};
use crate::rng::{self, streams, Rng};
use crate::testbed::pauli::PauliExpectation;
use crate::testbed::qcbm::QcbmKl;

/// The exact loss to be sampled.
#[derive(Debug, Clone)]
pub enum NoisySource {
    /// Each Pauli term is measured `shots` times in its own eigenbasis.
    Pauli(PauliExpectation),
    /// The model distribution is replaced by the frequencies of `shots`
    /// samples.
    Kl(QcbmKl),
}

#[derive(Debug, Clone)]
pub struct ShotNoise {
    source: NoisySource,
    shots: u64,
    seed: u64,
}

impl ShotNoise {
    pub fn new(source: NoisySource, shots: u64, seed: u64) -> Result<Self> {
        if shots == 0 {
            return Err(Error::usage("shots must be at least 1"));
        }
        Ok(Self { source, shots, seed })
    }

    pub fn shots(&self) -> u64 {
        self.shots
    }

    pub fn source(&self) -> &NoisySource {
        &self.source
    }

    /// The noiseless value at `theta`.
    pub fn exact(&self, theta: &[f64]) -> f64 {
        match &self.source {
            NoisySource::Pauli(p) => p.value(theta, 0),
            NoisySource::Kl(k) => k.value(theta, 0),
        }
    }

    /// Standard error of the Pauli estimator,
    /// `sqrt(Σ c_k² (1 - ⟨P_k⟩²) / shots)`. `None` for the KL estimator.
    pub fn standard_error(&self, theta: &[f64]) -> Result<Option<f64>> {
        let NoisySource::Pauli(p) = &self.source else {
            return Ok(None);
        };
        let state = p.ansatz().state(theta)?;
        let var: f64 = p
            .hamiltonian()
            .terms()
            .iter()
            .map(|(c, op)| {
                let e = op.expectation(&state);
                c * c * (1.0 - e * e).max(0.0)
            })
            .sum();
        Ok(Some((var / self.shots as f64).sqrt()))
    }

    fn sample(&self, theta: &[f64], rng: &mut Rng) -> Result<f64> {
        match &self.source {
            NoisySource::Pauli(p) => {
                let state = p.ansatz().state(theta)?;
                let mut total = 0.0;
                for (c, op) in p.hamiltonian().terms() {
                    let e = op.expectation(&state);
                    let p_plus = ((1.0 + e) / 2.0).clamp(0.0, 1.0);
                    let ups = Binomial::new(self.shots, p_plus)
                        .map_err(|e| Error::numerical(format!("shot sampling failed: {e}")))?
                        .sample(rng);
                    total += c * (2.0 * ups as f64 - self.shots as f64) / self.shots as f64;
                }
                Ok(total)
            }
            NoisySource::Kl(k) => {
                let q = k.ansatz().state(theta)?.probabilities();
                let index = WeightedIndex::new(&q)
                    .map_err(|e| Error::numerical(format!("shot sampling failed: {e}")))?;
                let mut counts = vec![0u64; q.len()];
                for _ in 0..self.shots {
                    counts[index.sample(rng)] += 1;
                }
                let freq: Vec<f64> = counts
                    .iter()
                    .map(|&c| c as f64 / self.shots as f64)
                    .collect();
                Ok(k.kl_against(&freq))
            }
        }
    }

    pub fn into_model(self) -> LossModel {
        LossModel::new(self)
    }
}

impl Loss for ShotNoise {
    fn dimension(&self) -> usize {
        match &self.source {
            NoisySource::Pauli(p) => p.dimension(),
            NoisySource::Kl(k) => k.dimension(),
        }
    }

    fn value(&self, theta: &[f64], call: u64) -> f64 {
        let mut rng = rng::substream(self.seed, streams::SHOT_NOISE, call);
        self.sample(theta, &mut rng).unwrap_or(f64::NAN)
    }

    fn period(&self) -> Option<f64> {
        match &self.source {
            NoisySource::Pauli(p) => p.period(),
            NoisySource::Kl(k) => k.period(),
        }
    }

    fn deterministic(&self) -> bool {
        false
    }

    fn label(&self) -> String {
        let inner = match &self.source {
            NoisySource::Pauli(p) => p.label(),
            NoisySource::Kl(k) => k.label(),
        };
        format!("{inner}+shots({})", self.shots)
    }
}

pub fn with_shot_noise(source: NoisySource, shots: u64, seed: u64) -> Result<LossModel> {
    Ok(ShotNoise::new(source, shots, seed)?.into_model())
}
