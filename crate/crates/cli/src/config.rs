//! Experiment configuration: what to load, what to run, where to write.
//!
//! The JSON form of [`ExperimentConfig`] is what `landscape run --config`
//! reads, and a resolved copy of it is embedded in every JSON artifact.

use std::fs;
use std::path::PathBuf;

use landscape_core::neb::DEFAULT_PIVOTS;
use landscape_core::testbed::qcbm::DEFAULT_KL_EPSILON;
use landscape_core::testbed::sombrero::DEFAULT_NU;
use landscape_core::testbed::{
    pauli_expectation_loss, qaoa_maxcut_loss, qcbm_kl_loss, random_regular_graph, with_shot_noise,
    constant_loss, AnsatzSpec, DiscreteDistribution, NoisySource, PauliExpectation, PauliSum, QcbmKl,
    Quadratic, Sombrero, WeightMode, WeightedGraph,
};
use landscape_core::{LossModel, NebConfig};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ModelSpec {
    Sombrero {
        dim: usize,
        #[serde(default = "default_nu")]
        nu: f64,
    },
    Quadratic {
        curvatures: Vec<f64>,
    },
    Constant {
        dim: usize,
        #[serde(default)]
        value: f64,
    },
    Qaoa {
        graph: GraphSpec,
        #[serde(default = "one")]
        layers: usize,
    },
    /// Born machine on a hardware-efficient ansatz, trained on KL.
    Qcbm {
        n_qubits: usize,
        #[serde(default = "one")]
        layers: usize,
        target: TargetSpec,
        #[serde(default = "default_epsilon")]
        epsilon: f64,
        /// Finite-shot estimation when set.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        shots: Option<u64>,
    },
    /// Energy of a Pauli-sum Hamiltonian on a hardware-efficient ansatz.
    Pauli {
        n_qubits: usize,
        #[serde(default = "one")]
        layers: usize,
        hamiltonian: String,
        /// Shots per Hamiltonian term when set.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        shots: Option<u64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GraphSpec {
    Random {
        n_vertices: usize,
        #[serde(default = "three")]
        degree: usize,
        #[serde(default = "unit_weights")]
        weights: WeightMode,
        #[serde(default)]
        seed: u64,
    },
    File {
        path: PathBuf,
    },
    Inline {
        graph: WeightedGraph,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "kebab-case", deny_unknown_fields)]
pub enum TargetSpec {
    Random {
        #[serde(default)]
        seed: u64,
    },
    BarsAndStripes,
    File {
        path: PathBuf,
    },
    Inline {
        probabilities: DiscreteDistribution,
    },
}

fn default_nu() -> f64 {
    DEFAULT_NU
}
fn default_epsilon() -> f64 {
    DEFAULT_KL_EPSILON
}
fn one() -> usize {
    1
}
fn three() -> usize {
    3
}
fn unit_weights() -> WeightMode {
    WeightMode::Unit
}

fn read_file(path: &PathBuf) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))
}

impl ModelSpec {
    /// Replaces file references with their contents so the descriptor is
    /// self-contained.
    pub fn resolve(&self) -> CliResult<ModelSpec> {
        Ok(match self {
            ModelSpec::Qaoa {
                graph: GraphSpec::File { path },
                layers,
            } => ModelSpec::Qaoa {
                graph: GraphSpec::Inline {
                    graph: WeightedGraph::parse(&read_file(path)?)
                        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?,
                },
                layers: *layers,
            },
            ModelSpec::Qcbm {
                n_qubits,
                layers,
                target: TargetSpec::File { path },
                epsilon,
                shots,
            } => ModelSpec::Qcbm {
                n_qubits: *n_qubits,
                layers: *layers,
                target: TargetSpec::Inline {
                    probabilities: DiscreteDistribution::parse(&read_file(path)?)
                        .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?,
                },
                epsilon: *epsilon,
                shots: *shots,
            },
            other => other.clone(),
        })
    }

    pub fn dimension(&self) -> usize {
        match self {
            ModelSpec::Sombrero { dim, .. } | ModelSpec::Constant { dim, .. } => *dim,
            ModelSpec::Quadratic { curvatures } => curvatures.len(),
            ModelSpec::Qaoa { layers, .. } => 2 * layers,
            ModelSpec::Qcbm { n_qubits, layers, .. } | ModelSpec::Pauli { n_qubits, layers, .. } => {
                2 * n_qubits * (layers + 1)
            }
        }
    }

    /// Builds the loss. `seed` drives shot noise.
    pub fn build(&self, seed: u64) -> CliResult<LossModel> {
        Ok(match self.resolve()? {
            ModelSpec::Sombrero { dim, nu } => Sombrero::new(dim, nu)?.into_model(),
            ModelSpec::Quadratic { curvatures } => LossModel::new(Quadratic::diagonal(&curvatures)?),
            ModelSpec::Constant { dim, value } => constant_loss(dim, value)?,
            ModelSpec::Qaoa { graph, layers } => qaoa_maxcut_loss(build_graph(&graph)?, layers)?,
            ModelSpec::Qcbm {
                n_qubits,
                layers,
                target,
                epsilon,
                shots,
            } => {
                let spec = AnsatzSpec::hardware_efficient(n_qubits, layers)?;
                let target = match target {
                    TargetSpec::Random { seed } => DiscreteDistribution::random(n_qubits, seed)?,
                    TargetSpec::BarsAndStripes => {
                        if n_qubits != 4 {
                            return Err(CliError::usage(
                                "bars-and-stripes target needs n_qubits = 4",
                            ));
                        }
                        DiscreteDistribution::bars_and_stripes_2x2()
                    }
                    TargetSpec::Inline { probabilities } => probabilities,
                    TargetSpec::File { .. } => unreachable!("resolved above"),
                };
                match shots {
                    None => qcbm_kl_loss(&spec, target, epsilon)?,
                    Some(s) => with_shot_noise(
                        NoisySource::Kl(QcbmKl::new(&spec, target, epsilon)?),
                        s,
                        seed,
                    )?,
                }
            }
            ModelSpec::Pauli {
                n_qubits,
                layers,
                hamiltonian,
                shots,
            } => {
                let spec = AnsatzSpec::hardware_efficient(n_qubits, layers)?;
                let h = PauliSum::parse(&hamiltonian)?;
                match shots {
                    None => pauli_expectation_loss(&spec, h)?,
                    Some(s) => with_shot_noise(
                        NoisySource::Pauli(PauliExpectation::new(&spec, h)?),
                        s,
                        seed,
                    )?,
                }
            }
        })
    }
}

fn build_graph(spec: &GraphSpec) -> CliResult<WeightedGraph> {
    Ok(match spec {
        GraphSpec::Random {
            n_vertices,
            degree,
            weights,
            seed,
        } => random_regular_graph(*n_vertices, *degree, *weights, *seed)?,
        GraphSpec::Inline { graph } => graph.clone(),
        GraphSpec::File { path } => WeightedGraph::parse(&read_file(path)?)?,
    })
}

/// `[lo, hi]` in units of the scan direction.
pub type Range = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scan1dParams {
    /// Defaults to the zero vector.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub origin: Option<Vec<f64>>,
    /// Explicit direction; otherwise a random one of length `norm`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub direction: Option<Vec<f64>>,
    /// Interpolate from `origin` to this point instead of scanning a
    /// direction.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub to: Option<Vec<f64>>,
    /// Wrap `to` into the period cell nearest `origin` before
    /// interpolating (periodic models only).
    pub wrap: bool,
    pub norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range: Option<Range>,
    pub points: usize,
}

impl Default for Scan1dParams {
    fn default() -> Self {
        Self {
            origin: None,
            direction: None,
            to: None,
            wrap: false,
            norm: 1.0,
            range: None,
            points: 101,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scan2dParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub origin: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir_x: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir_y: Option<Vec<f64>>,
    /// Interpolation plane from `origin` to this point.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub to: Option<Vec<f64>>,
    /// Length of randomly drawn directions.
    pub norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range: Option<Range>,
    /// Defaults to `range`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range_y: Option<Range>,
    pub res_x: usize,
    pub res_y: usize,
}

impl Default for Scan2dParams {
    fn default() -> Self {
        Self {
            origin: None,
            dir_x: None,
            dir_y: None,
            to: None,
            norm: 1.0,
            range: None,
            range_y: None,
            res_x: 50,
            res_y: 50,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OptimizerKind {
    GradientDescent,
    Spsa,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptimizeParams {
    pub optimizer: OptimizerKind,
    /// Explicit start; otherwise `starts` random points in `init_range`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start: Option<Vec<f64>>,
    pub starts: usize,
    pub init_range: Range,
    pub iterations: usize,
    pub learning_rate: f64,
    /// SPSA directions per step.
    pub directions: usize,
    /// SPSA perturbation size.
    pub eps: f64,
}

impl Default for OptimizeParams {
    fn default() -> Self {
        Self {
            optimizer: OptimizerKind::GradientDescent,
            start: None,
            starts: 1,
            init_range: [-5.0, 5.0],
            iterations: 150,
            learning_rate: 0.05,
            directions: 3,
            eps: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PcaParams {
    pub optimize: OptimizeParams,
    pub res_x: usize,
    pub res_y: usize,
    pub margin: f64,
}

impl Default for PcaParams {
    fn default() -> Self {
        Self {
            optimize: OptimizeParams {
                starts: 4,
                ..OptimizeParams::default()
            },
            res_x: 50,
            res_y: 50,
            margin: landscape_core::pca::DEFAULT_PCA_MARGIN,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HessianMethod {
    Exact,
    Spsa,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HessianParams {
    /// Defaults to the zero vector.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<f64>>,
    pub method: HessianMethod,
    /// Finite-difference step for the exact method.
    pub step: f64,
    /// SPSA repetitions.
    pub repetitions: usize,
    /// SPSA perturbation size.
    pub eps: f64,
    /// Samples per eigenvector scan.
    pub scan_points: usize,
    pub scan_range: Range,
}

impl Default for HessianParams {
    fn default() -> Self {
        Self {
            point: None,
            method: HessianMethod::Exact,
            step: landscape_core::hessian::DEFAULT_HESSIAN_STEP,
            repetitions: 1000,
            eps: landscape_core::hessian::DEFAULT_SPSA_EPS,
            scan_points: 101,
            scan_range: [-1.0, 1.0],
        }
    }
}

impl HessianParams {
    pub fn config(&self, seed: u64) -> landscape_core::HessianConfig {
        match self.method {
            HessianMethod::Exact => landscape_core::HessianConfig::Exact { step: self.step },
            HessianMethod::Spsa => landscape_core::HessianConfig::Spsa {
                repetitions: self.repetitions,
                eps: self.eps,
                seed,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EigenRatioParams {
    pub plane: Scan2dParams,
    pub hessian: HessianParams,
}

impl Default for EigenRatioParams {
    fn default() -> Self {
        Self {
            plane: Scan2dParams {
                res_x: 20,
                res_y: 20,
                ..Scan2dParams::default()
            },
            hessian: HessianParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NebParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub from: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub to: Option<Vec<f64>>,
    pub pivots: usize,
    pub neb: NebConfig,
    /// Loss samples per chain segment in the emitted profile.
    pub samples_per_segment: usize,
}

impl Default for NebParams {
    fn default() -> Self {
        Self {
            from: None,
            to: None,
            pivots: DEFAULT_PIVOTS,
            neb: NebConfig::default(),
            samples_per_segment: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case")]
pub enum Operation {
    Scan1d(Scan1dParams),
    Scan2d(Scan2dParams),
    PcaScan(PcaParams),
    Hessian(HessianParams),
    EigenRatioScan(EigenRatioParams),
    Neb(NebParams),
    Autoneb(NebParams),
    Optimize(OptimizeParams),
    Demo { name: String },
}

impl Operation {
    pub fn name(&self) -> &'static str {
        match self {
            Operation::Scan1d(_) => "scan1d",
            Operation::Scan2d(_) => "scan2d",
            Operation::PcaScan(_) => "pca-scan",
            Operation::Hessian(_) => "hessian",
            Operation::EigenRatioScan(_) => "eigen-ratio-scan",
            Operation::Neb(_) => "neb",
            Operation::Autoneb(_) => "autoneb",
            Operation::Optimize(_) => "optimize",
            Operation::Demo { .. } => "demo",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Svg,
}

impl std::str::FromStr for Format {
    type Err = CliError;

    fn from_str(s: &str) -> CliResult<Self> {
        match s.trim() {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "svg" => Ok(Format::Svg),
            other => Err(CliError::usage(format!(
                "unknown format '{other}' (expected json, csv or svg)"
            ))),
        }
    }
}

/// How heatmaps and line plots are drawn.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RenderSpec {
    pub colormap: String,
    pub contours: bool,
    pub overlays: bool,
    pub width: u32,
    pub height: u32,
}

impl Default for RenderSpec {
    fn default() -> Self {
        Self {
            colormap: "viridis".into(),
            contours: false,
            overlays: true,
            width: 640,
            height: 560,
        }
    }
}

impl RenderSpec {
    pub fn validate(&self) -> CliResult<()> {
        if self.width == 0 || self.height == 0 {
            return Err(CliError::usage("render.width and render.height must be positive"));
        }
        crate::svg::Colormap::by_name(&self.colormap)?;
        Ok(())
    }
}

fn default_formats() -> Vec<Format> {
    vec![Format::Json, Format::Svg]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub model: ModelSpec,
    pub operation: Operation,
    #[serde(default)]
    pub seed: u64,
    /// Not embedded in artifacts.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
    #[serde(default)]
    pub render: RenderSpec,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::usage(format!("invalid config: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn load(path: &PathBuf) -> CliResult<Self> {
        let text = read_file(path)?;
        Self::from_json(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
    }

    /// Copy with file references inlined and the output path dropped: the
    /// form embedded in artifacts.
    pub fn provenance(&self) -> CliResult<ExperimentConfig> {
        Ok(ExperimentConfig {
            model: self.model.resolve()?,
            out: None,
            ..self.clone()
        })
    }

    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}
