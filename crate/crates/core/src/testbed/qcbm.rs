//! Born-machine distributions and the clipped KL loss.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loss::{Loss, LossModel};
use crate::rng::{self, streams};
use crate::testbed::ansatz::{AnsatzSpec, PreparedAnsatz};
use crate::testbed::statevector::Statevector;

pub const DEFAULT_KL_EPSILON: f64 = 1e-6;

/// Probabilities over the `2^n` bitstrings of an `n`-qubit register,
/// indexed like statevector amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct DiscreteDistribution {
    probabilities: Vec<f64>,
}

impl TryFrom<Vec<f64>> for DiscreteDistribution {
    type Error = Error;

    fn try_from(p: Vec<f64>) -> Result<Self> {
        Self::new(p)
    }
}

impl From<DiscreteDistribution> for Vec<f64> {
    fn from(d: DiscreteDistribution) -> Self {
        d.probabilities
    }
}

impl DiscreteDistribution {
    pub fn new(probabilities: Vec<f64>) -> Result<Self> {
        let len = probabilities.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::usage(format!(
                "distribution length {len} is not a power of two >= 2"
            )));
        }
        if let Some(p) = probabilities.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
            return Err(Error::usage(format!("invalid probability {p}")));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::usage(format!("probabilities sum to {total}, expected 1")));
        }
        Ok(Self { probabilities })
    }

    pub fn uniform(n_qubits: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        Self::new(vec![1.0 / dim as f64; dim])
    }

    pub fn point_mass(n_qubits: usize, outcome: usize) -> Result<Self> {
        let mut p = vec![0.0; 1usize << n_qubits];
        *p.get_mut(outcome)
            .ok_or_else(|| Error::usage(format!("outcome {outcome} out of range")))? = 1.0;
        Self::new(p)
    }

    /// Uniform over the 2x2 bars-and-stripes images (qubit `q` is pixel
    /// `q` in row-major order): the blank and full images, two bars, two
    /// stripes.
    pub fn bars_and_stripes_2x2() -> Self {
        let patterns = [0b0000, 0b1111, 0b0011, 0b1100, 0b0101, 0b1010];
        let mut p = vec![0.0; 16];
        for x in patterns {
            p[x] = 1.0 / patterns.len() as f64;
        }
        Self::new(p).expect("valid pattern distribution")
    }

    /// Random distribution with Dirichlet(1)-like weights.
    pub fn random(n_qubits: usize, seed: u64) -> Result<Self> {
        let mut rng = rng::stream(seed, streams::TARGET);
        let w: Vec<f64> = (0..1usize << n_qubits)
            .map(|_| -(1.0 - rng.random::<f64>()).ln())
            .collect();
        let total: f64 = w.iter().sum();
        Self::new(w.into_iter().map(|x| x / total).collect())
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn n_qubits(&self) -> usize {
        self.probabilities.len().trailing_zeros() as usize
    }

    /// Parses `bitstring probability` lines. Character `k` of the bitstring
    /// is qubit `k`. Unlisted outcomes get probability 0.
    pub fn parse(text: &str) -> Result<Self> {
        let mut n_qubits = None;
        let mut entries = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = || {
                Error::usage(format!(
                    "distribution line {}: expected 'bitstring probability', got '{line}'",
                    i + 1
                ))
            };
            let mut parts = line.split_whitespace();
            let (Some(bits), Some(prob), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(bad());
            };
            if bits.is_empty() || !bits.chars().all(|c| c == '0' || c == '1') {
                return Err(bad());
            }
            match n_qubits {
                None => n_qubits = Some(bits.len()),
                Some(n) if n != bits.len() => {
                    return Err(Error::usage(format!(
                        "distribution line {}: bitstring length {} differs from {n}",
                        i + 1,
                        bits.len()
                    )))
                }
                _ => {}
            }
            let p: f64 = prob.parse().map_err(|_| bad())?;
            entries.push((bitstring_index(bits), p));
        }
        let n = n_qubits.ok_or_else(|| Error::usage("distribution file has no entries"))?;
        if n > 24 {
            return Err(Error::usage(format!("{n}-bit outcomes are too large")));
        }
        let mut probs = vec![0.0; 1usize << n];
        for (x, p) in entries {
            probs[x] += p;
        }
        Self::new(probs)
    }

    pub fn to_text(&self) -> String {
        let n = self.n_qubits();
        let mut s = String::new();
        for (x, p) in self.probabilities.iter().enumerate() {
            if *p > 0.0 {
                s.push_str(&format!("{} {p}\n", index_bitstring(x, n)));
            }
        }
        s
    }
}

fn bitstring_index(bits: &str) -> usize {
    bits.bytes()
        .enumerate()
        .filter(|(_, b)| *b == b'1')
        .map(|(k, _)| 1usize << k)
        .sum()
}

fn index_bitstring(x: usize, n: usize) -> String {
    (0..n).map(|k| if (x >> k) & 1 == 1 { '1' } else { '0' }).collect()
}

/// `q(x) = |⟨x|ψ⟩|²`.
pub fn born_distribution(state: &Statevector) -> DiscreteDistribution {
    let p = state.probabilities();
    DiscreteDistribution { probabilities: p }
}

/// `Σ_x p(x) log(p(x) / max(q(x), ε))`, skipping `p(x) = 0`.
pub fn clipped_kl(p: &[f64], q: &[f64], epsilon: f64) -> f64 {
    p.iter()
        .zip(q)
        .filter(|(px, _)| **px > 0.0)
        .map(|(px, qx)| px * (px / qx.max(epsilon)).ln())
        .sum()
}

/// KL divergence from a target distribution to an ansatz's Born
/// distribution.
#[derive(Debug, Clone)]
pub struct QcbmKl {
    ansatz: PreparedAnsatz,
    target: DiscreteDistribution,
    epsilon: f64,
}

impl QcbmKl {
    pub fn new(ansatz: &AnsatzSpec, target: DiscreteDistribution, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::usage(format!("epsilon must be positive, got {epsilon}")));
        }
        if target.n_qubits() != ansatz.n_qubits() {
            return Err(Error::usage(format!(
                "target has {} qubits, ansatz has {}",
                target.n_qubits(),
                ansatz.n_qubits()
            )));
        }
        Ok(Self {
            ansatz: ansatz.prepare()?,
            target,
            epsilon,
        })
    }

    pub fn ansatz(&self) -> &PreparedAnsatz {
        &self.ansatz
    }

    pub fn target(&self) -> &DiscreteDistribution {
        &self.target
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn model_distribution(&self, theta: &[f64]) -> Result<DiscreteDistribution> {
        Ok(born_distribution(&self.ansatz.state(theta)?))
    }

    pub fn kl_against(&self, q: &[f64]) -> f64 {
        clipped_kl(self.target.probabilities(), q, self.epsilon)
    }

    pub fn into_model(self) -> LossModel {
        LossModel::new(self)
    }
}

impl Loss for QcbmKl {
    fn dimension(&self) -> usize {
        self.ansatz.spec().parameter_count()
    }

    fn value(&self, theta: &[f64], _call: u64) -> f64 {
        match self.ansatz.state(theta) {
            Ok(s) => self.kl_against(&s.probabilities()),
            Err(_) => f64::NAN,
        }
    }

    fn period(&self) -> Option<f64> {
        self.ansatz.spec().period()
    }

    fn label(&self) -> String {
        format!("qcbm-kl/{}", self.ansatz.spec().label())
    }
}

pub fn qcbm_kl_loss(
    ansatz: &AnsatzSpec,
    target: DiscreteDistribution,
    epsilon: f64,
) -> Result<LossModel> {
    Ok(QcbmKl::new(ansatz, target, epsilon)?.into_model())
}
