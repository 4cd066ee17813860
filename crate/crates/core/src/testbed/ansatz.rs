//! Parameterized circuits: QAOA for MaxCut and a hardware-efficient ansatz.

use std::f64::consts::PI;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::loss::{Loss, LossModel};
use crate::testbed::graph::WeightedGraph;
use crate::testbed::statevector::{Statevector, DEFAULT_MAX_QUBITS};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum AnsatzSpec {
    /// Parameters ordered `[γ_1..γ_p, β_1..β_p]`.
    Qaoa { graph: WeightedGraph, layers: usize },
    /// Each layer is RX then RZ on every qubit followed by a CZ ring; one
    /// extra rotation layer closes the circuit.
    HardwareEfficient { n_qubits: usize, layers: usize },
}

impl AnsatzSpec {
    pub fn qaoa(graph: WeightedGraph, layers: usize) -> Result<Self> {
        let spec = AnsatzSpec::Qaoa { graph, layers };
        spec.validate()?;
        Ok(spec)
    }

    pub fn hardware_efficient(n_qubits: usize, layers: usize) -> Result<Self> {
        let spec = AnsatzSpec::HardwareEfficient { n_qubits, layers };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AnsatzSpec::Qaoa { layers, .. } if *layers == 0 => {
                Err(Error::usage("QAOA needs at least one layer"))
            }
            AnsatzSpec::HardwareEfficient { n_qubits, layers } if *n_qubits < 2 || *layers == 0 => {
                Err(Error::usage(format!(
                    "hardware-efficient ansatz needs n_qubits >= 2 and layers >= 1, got {n_qubits} and {layers}"
                )))
            }
            _ => Ok(()),
        }
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            AnsatzSpec::Qaoa { graph, .. } => graph.n_vertices(),
            AnsatzSpec::HardwareEfficient { n_qubits, .. } => *n_qubits,
        }
    }

    pub fn parameter_count(&self) -> usize {
        match self {
            AnsatzSpec::Qaoa { layers, .. } => 2 * layers,
            AnsatzSpec::HardwareEfficient { n_qubits, layers } => 2 * n_qubits * (layers + 1),
        }
    }

    /// Per-coordinate period, when one is known.
    pub fn period(&self) -> Option<f64> {
        match self {
            AnsatzSpec::Qaoa { graph, .. } if graph.has_integer_weights() => Some(2.0 * PI),
            AnsatzSpec::Qaoa { .. } => None,
            AnsatzSpec::HardwareEfficient { .. } => Some(4.0 * PI),
        }
    }

    pub fn label(&self) -> String {
        match self {
            AnsatzSpec::Qaoa { graph, layers } => {
                format!("qaoa(n={}, edges={}, p={layers})", graph.n_vertices(), graph.edges().len())
            }
            AnsatzSpec::HardwareEfficient { n_qubits, layers } => {
                format!("hea(n={n_qubits}, layers={layers})")
            }
        }
    }

    pub fn prepare(&self) -> Result<PreparedAnsatz> {
        PreparedAnsatz::new(self.clone(), DEFAULT_MAX_QUBITS)
    }
}

/// An ansatz with its cost diagonal cached, ready for repeated state
/// preparation.
#[derive(Debug, Clone)]
pub struct PreparedAnsatz {
    spec: AnsatzSpec,
    cost_diagonal: Option<Arc<Vec<f64>>>,
    max_qubits: usize,
}

impl PreparedAnsatz {
    /// `max_qubits` above [`DEFAULT_MAX_QUBITS`] opts into large, slow
    /// simulations.
    pub fn new(spec: AnsatzSpec, max_qubits: usize) -> Result<Self> {
        spec.validate()?;
        if spec.n_qubits() > max_qubits {
            return Err(Error::usage(format!(
                "{} qubits exceeds the simulator limit of {max_qubits}",
                spec.n_qubits()
            )));
        }
        let cost_diagonal = match &spec {
            AnsatzSpec::Qaoa { graph, .. } => Some(Arc::new(graph.cost_diagonal())),
            AnsatzSpec::HardwareEfficient { .. } => None,
        };
        Ok(Self {
            spec,
            cost_diagonal,
            max_qubits,
        })
    }

    pub fn spec(&self) -> &AnsatzSpec {
        &self.spec
    }

    pub fn cost_diagonal(&self) -> Option<&[f64]> {
        self.cost_diagonal.as_deref().map(|v| v.as_slice())
    }

    pub fn state(&self, theta: &[f64]) -> Result<Statevector> {
        let count = self.spec.parameter_count();
        if theta.len() != count {
            return Err(Error::usage(format!(
                "{} expects {count} parameters, got {}",
                self.spec.label(),
                theta.len()
            )));
        }
        let n = self.spec.n_qubits();
        match &self.spec {
            AnsatzSpec::Qaoa { layers, .. } => {
                let diag = self.cost_diagonal.as_deref().expect("qaoa diagonal");
                let mut s = Statevector::plus_with_limit(n, self.max_qubits)?;
                let (gammas, betas) = theta.split_at(*layers);
                for (g, b) in gammas.iter().zip(betas) {
                    s.diagonal_phase(diag, *g)?;
                    // exp(-iβ H_B) with H_B = -Σ X is RX(-2β) on every qubit
                    for q in 0..n {
                        s.rx(q, -2.0 * b)?;
                    }
                }
                Ok(s)
            }
            AnsatzSpec::HardwareEfficient { layers, .. } => {
                let mut s = Statevector::zero_with_limit(n, self.max_qubits)?;
                let mut params = theta.chunks(2);
                for layer in 0..=*layers {
                    for q in 0..n {
                        let p = params.next().expect("parameter count checked");
                        s.rx(q, p[0])?;
                        s.rz(q, p[1])?;
                    }
                    if layer < *layers {
                        cz_ring(&mut s, n)?;
                    }
                }
                Ok(s)
            }
        }
    }
}

fn cz_ring(s: &mut Statevector, n: usize) -> Result<()> {
    if n == 2 {
        return s.cz(0, 1);
    }
    for q in 0..n {
        s.cz(q, (q + 1) % n)?;
    }
    Ok(())
}

/// QAOA state `Π_k e^{-iβ_k H_B} e^{-iγ_k H_C} |+⟩^⊗n`.
pub fn qaoa_state(graph: &WeightedGraph, gammas: &[f64], betas: &[f64]) -> Result<Statevector> {
    if gammas.len() != betas.len() || gammas.is_empty() {
        return Err(Error::usage(format!(
            "QAOA needs equal, nonzero numbers of gammas and betas, got {} and {}",
            gammas.len(),
            betas.len()
        )));
    }
    let ansatz = AnsatzSpec::qaoa(graph.clone(), gammas.len())?.prepare()?;
    let theta: Vec<f64> = gammas.iter().chain(betas).copied().collect();
    ansatz.state(&theta)
}

pub fn hardware_efficient_state(n_qubits: usize, layers: usize, theta: &[f64]) -> Result<Statevector> {
    AnsatzSpec::hardware_efficient(n_qubits, layers)?
        .prepare()?
        .state(theta)
}

/// `⟨γ,β| Σ w_uv Z_u Z_v |γ,β⟩`.
#[derive(Debug, Clone)]
pub struct QaoaMaxCut {
    ansatz: PreparedAnsatz,
}

impl QaoaMaxCut {
    pub fn new(graph: WeightedGraph, layers: usize) -> Result<Self> {
        Ok(Self {
            ansatz: AnsatzSpec::qaoa(graph, layers)?.prepare()?,
        })
    }

    pub fn with_ansatz(ansatz: PreparedAnsatz) -> Result<Self> {
        match ansatz.spec() {
            AnsatzSpec::Qaoa { .. } => Ok(Self { ansatz }),
            _ => Err(Error::usage("MaxCut loss needs a QAOA ansatz")),
        }
    }

    pub fn ansatz(&self) -> &PreparedAnsatz {
        &self.ansatz
    }

    pub fn into_model(self) -> LossModel {
        LossModel::new(self)
    }
}

impl Loss for QaoaMaxCut {
    fn dimension(&self) -> usize {
        self.ansatz.spec().parameter_count()
    }

    fn value(&self, theta: &[f64], _call: u64) -> f64 {
        let AnsatzSpec::Qaoa { graph, .. } = self.ansatz.spec() else {
            unreachable!("constructed with a QAOA ansatz");
        };
        match self.ansatz.state(theta) {
            Ok(s) => edge_correlators(graph, &s.probabilities())
                .iter()
                .zip(graph.edges())
                .map(|(zz, e)| e.weight * zz)
                .sum(),
            Err(_) => f64::NAN,
        }
    }

    fn period(&self) -> Option<f64> {
        self.ansatz.spec().period()
    }

    fn label(&self) -> String {
        format!("maxcut/{}", self.ansatz.spec().label())
    }
}

/// `⟨Z_u Z_v⟩` for every edge, from basis-state probabilities.
///
/// Summed per edge rather than through the cost diagonal, so symmetric
/// states give correlators that cancel exactly.
pub fn edge_correlators(graph: &WeightedGraph, probabilities: &[f64]) -> Vec<f64> {
    graph
        .edges()
        .iter()
        .map(|e| {
            let mask = (1usize << e.u) | (1usize << e.v);
            probabilities
                .iter()
                .enumerate()
                .map(|(x, p)| {
                    if (x & mask).count_ones() == 1 {
                        -p
                    } else {
                        *p
                    }
                })
                .sum()
        })
        .collect()
}

pub fn qaoa_maxcut_loss(graph: WeightedGraph, layers: usize) -> Result<LossModel> {
    Ok(QaoaMaxCut::new(graph, layers)?.into_model())
}
