//! Loss functions and optimizers for landscape experiments: the sombrero
//! toy model, a dense statevector simulator with QAOA and hardware-efficient
//! ansätze, Born-machine and Pauli-sum losses, finite-shot noise, and
//! gradient descent / SPSA.

pub mod ansatz;
pub mod functions;
pub mod graph;
pub mod noise;
pub mod optim;
pub mod pauli;
pub mod qcbm;
pub mod sombrero;
pub mod statevector;

pub use ansatz::{
    hardware_efficient_state, qaoa_maxcut_loss, qaoa_state, AnsatzSpec, PreparedAnsatz, QaoaMaxCut,
};
pub use functions::{constant_loss, Constant, Linear, Quadratic};
pub use graph::{random_regular_graph, Edge, WeightMode, WeightedGraph};
pub use noise::{with_shot_noise, NoisySource, ShotNoise};
pub use optim::{
    gradient_descent, multi_start_descent, spsa_gradient, spsa_optimize, uniform_starts, Descent,
    SpsaConfig,
};
pub use pauli::{pauli_expectation_loss, Pauli, PauliExpectation, PauliString, PauliSum};
pub use qcbm::{born_distribution, clipped_kl, qcbm_kl_loss, DiscreteDistribution, QcbmKl};
pub use sombrero::{sombrero_loss, Sombrero};
pub use statevector::{apply_gate, Gate, Statevector};
