//! Command-line grammar and its translation into [`ExperimentConfig`].
//!
//! ```text
//! landscape <operation> [--model KIND | --graph-file F | --dist-file F] [flags] --seed S --out DIR
//! landscape run --config FILE [--out DIR]
//! landscape demo sombrero-pipeline --out DIR
//! ```
//!
//! `LANDSCAPE_OUT` supplies `--out` when the flag is absent.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use landscape_core::testbed::WeightMode;
use landscape_core::NebConfig;

use crate::config::{
    EigenRatioParams, ExperimentConfig, Format, GraphSpec, HessianMethod, HessianParams, ModelSpec,
    NebParams, Operation, OptimizeParams, OptimizerKind, PcaParams, Range, RenderSpec, Scan1dParams,
    Scan2dParams, TargetSpec,
};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "landscape", version, about = "Loss-landscape scans, Hessians and elastic-band paths")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Loss along a line, or between two points.
    Scan1d {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        scan: Scan1dArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Loss over a plane.
    Scan2d {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        plane: PlaneArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Optimize from several starts and scan the PCA plane of the trajectories.
    PcaScan {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        optimize: OptimizeArgs,
        #[arg(long, help = "Grid resolution per axis [default: 50]")]
        res: Option<usize>,
        #[arg(long, help = "Padding around the projected trajectories, as a fraction of their extent [default: 0.25]")]
        margin: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Hessian and its spectrum at one point.
    Hessian {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_parser = parse_vector, allow_hyphen_values = true, help = "Evaluation point [default: origin]")]
        point: Option<Coords>,
        #[command(flatten)]
        hessian: HessianArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// λ_min / λ_max of the local Hessian over a plane.
    EigenRatioScan {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        plane: PlaneArgs,
        #[command(flatten)]
        hessian: HessianArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Nudged elastic band between two points.
    Neb {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        neb: NebArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Elastic band with adaptive pivot insertion.
    Autoneb {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        neb: NebArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Gradient descent or SPSA from one or more starts.
    Optimize {
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        optimize: OptimizeArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// A canned experiment.
    Demo {
        #[arg(value_parser = ["sombrero-pipeline"])]
        name: String,
        #[arg(long, help = "Sombrero dimension [default: 4]")]
        dim: Option<usize>,
        #[arg(long, help = "Sombrero ν [default: 2]")]
        nu: Option<f64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run a JSON experiment configuration.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, env = "LANDSCAPE_OUT")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModelKind {
    Sombrero,
    Quadratic,
    Constant,
    Qaoa,
    Qcbm,
    Pauli,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum TargetKind {
    Random,
    BarsAndStripes,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum)]
    pub model: Option<ModelKind>,
    /// Parameter dimension (sombrero, constant).
    #[arg(long)]
    pub dim: Option<usize>,
    /// Sombrero ν [default: 2].
    #[arg(long)]
    pub nu: Option<f64>,
    /// Comma-separated curvatures of a diagonal quadratic.
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    pub curvatures: Option<Coords>,
    /// Value of the constant model [default: 0].
    #[arg(long, allow_hyphen_values = true)]
    pub value: Option<f64>,
    /// Graph file for QAOA (implies --model qaoa).
    #[arg(long)]
    pub graph_file: Option<PathBuf>,
    /// Vertices of a random regular QAOA graph.
    #[arg(long)]
    pub n_vertices: Option<usize>,
    /// Degree of the random regular graph [default: 3].
    #[arg(long)]
    pub degree: Option<usize>,
    /// Edge weights: unit, integer-set or uniform [default: unit].
    #[arg(long)]
    pub weights: Option<WeightMode>,
    /// Seed of the random graph [default: 0].
    #[arg(long)]
    pub graph_seed: Option<u64>,
    /// Ansatz layers [default: 1].
    #[arg(long)]
    pub layers: Option<usize>,
    /// Qubits of the hardware-efficient ansatz (qcbm, pauli).
    #[arg(long)]
    pub n_qubits: Option<usize>,
    /// Target distribution file for the QCBM (implies --model qcbm).
    #[arg(long)]
    pub dist_file: Option<PathBuf>,
    /// Built-in QCBM target [default: random].
    #[arg(long, value_enum)]
    pub target: Option<TargetKind>,
    /// Seed of the random QCBM target [default: 0].
    #[arg(long)]
    pub target_seed: Option<u64>,
    /// KL clipping ε [default: 1e-6].
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Pauli-sum Hamiltonian, e.g. "0.5*ZZII - 0.3*XIII".
    #[arg(long, allow_hyphen_values = true)]
    pub hamiltonian: Option<String>,
    /// Finite-shot estimation (qcbm: shots per evaluation, pauli: per term).
    #[arg(long)]
    pub shots: Option<u64>,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, env = "LANDSCAPE_OUT")]
    pub out: Option<PathBuf>,
    /// Comma-separated subset of json,csv,svg.
    #[arg(long, value_delimiter = ',', default_value = "json,svg")]
    pub formats: Vec<Format>,
    /// viridis, magma or gray.
    #[arg(long, default_value = "viridis")]
    pub colormap: String,
    #[arg(long)]
    pub contours: bool,
    #[arg(long)]
    pub no_overlays: bool,
    #[arg(long, default_value_t = 640)]
    pub width: u32,
    #[arg(long, default_value_t = 560)]
    pub height: u32,
}

#[derive(Debug, Args)]
pub struct Scan1dArgs {
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true, help = "Scan origin [default: zero vector]")]
    pub origin: Option<Coords>,
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true, help = "Scan direction [default: random, length --norm]")]
    pub direction: Option<Coords>,
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true, help = "Interpolate from the origin to this point")]
    pub to: Option<Coords>,
    /// Wrap --to into the period cell nearest the origin.
    #[arg(long)]
    pub wrap: bool,
    #[arg(long, help = "Length of the random direction [default: 1]")]
    pub norm: Option<f64>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, help = "lo:hi in direction units [default: -1:1, or -0.5:1.5 with --to]")]
    pub range: Option<Range>,
    #[arg(long, help = "Samples [default: 101]")]
    pub points: Option<usize>,
}

#[derive(Debug, Args)]
pub struct PlaneArgs {
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true, help = "Plane origin [default: zero vector]")]
    pub origin: Option<Coords>,
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    pub dir_x: Option<Coords>,
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    pub dir_y: Option<Coords>,
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true, help = "Interpolation plane from the origin to this point")]
    pub to: Option<Coords>,
    #[arg(long, help = "Length of random directions [default: 1]")]
    pub norm: Option<f64>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, help = "lo:hi of both axes [default: -1:1]")]
    pub range: Option<Range>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, help = "lo:hi of the second axis [default: --range]")]
    pub range_y: Option<Range>,
    #[arg(long, help = "Resolution of both axes [default: 50]")]
    pub res: Option<usize>,
    #[arg(long)]
    pub res_x: Option<usize>,
    #[arg(long)]
    pub res_y: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum OptimizerArg {
    Gd,
    Spsa,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long, value_enum, help = "[default: gd]")]
    pub optimizer: Option<OptimizerArg>,
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true, help = "Single explicit start")]
    pub start: Option<Coords>,
    #[arg(long, help = "Random starts")]
    pub starts: Option<usize>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, help = "lo:hi box for random starts [default: -5:5]")]
    pub init_range: Option<Range>,
    #[arg(long, help = "[default: 150]")]
    pub iterations: Option<usize>,
    #[arg(long, help = "[default: 0.05]")]
    pub learning_rate: Option<f64>,
    #[arg(long, help = "SPSA directions per step [default: 3]")]
    pub directions: Option<usize>,
    #[arg(long, help = "SPSA perturbation [default: 0.1]")]
    pub eps: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum HessianMethodArg {
    Exact,
    Spsa,
}

#[derive(Debug, Args)]
pub struct HessianArgs {
    #[arg(long, value_enum, help = "[default: exact]")]
    pub method: Option<HessianMethodArg>,
    #[arg(long, help = "Finite-difference step [default: 1e-3]")]
    pub step: Option<f64>,
    #[arg(long, help = "SPSA repetitions [default: 1000]")]
    pub repetitions: Option<usize>,
    #[arg(long = "hessian-eps", help = "SPSA perturbation [default: 1e-2]")]
    pub hessian_eps: Option<f64>,
    #[arg(long, help = "Samples per eigenvector scan [default: 101]")]
    pub scan_points: Option<usize>,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, help = "[default: -1:1]")]
    pub scan_range: Option<Range>,
}

#[derive(Debug, Args)]
pub struct NebArgs {
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    pub from: Option<Coords>,
    #[arg(long, value_parser = parse_vector, allow_hyphen_values = true)]
    pub to: Option<Coords>,
    #[arg(long, help = "Chain points including endpoints [default: 10]")]
    pub pivots: Option<usize>,
    #[arg(long, help = "[default: 0.1]")]
    pub learning_rate: Option<f64>,
    #[arg(long, help = "Steps per run or AutoNEB cycle [default: 100]")]
    pub iterations: Option<usize>,
    #[arg(long, help = "AutoNEB cycles [default: 4]")]
    pub cycles: Option<usize>,
    #[arg(long, help = "0 selects projected gradients with re-spacing [default: 0]")]
    pub spring: Option<f64>,
    #[arg(long, help = "Profile samples per segment [default: 10]")]
    pub samples: Option<usize>,
}

/// A comma-separated coordinate list. The alias keeps clap from reading
/// `Vec` as "flag may repeat".
pub type Coords = Vec<f64>;

/// `a,b,c` into floats.
pub fn parse_vector(s: &str) -> Result<Coords, String> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| format!("'{x}' is not a number"))
        })
        .collect()
}

/// `lo:hi` into a range.
pub fn parse_range(s: &str) -> Result<Range, String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got '{s}'"))?;
    let lo: f64 = lo.trim().parse().map_err(|_| format!("bad range start '{lo}'"))?;
    let hi: f64 = hi.trim().parse().map_err(|_| format!("bad range end '{hi}'"))?;
    if !(lo < hi) {
        return Err(format!("range needs lo < hi, got {lo}:{hi}"));
    }
    Ok([lo, hi])
}

fn need<T>(v: Option<T>, flag: &str) -> CliResult<T> {
    v.ok_or_else(|| CliError::usage(format!("missing required: {flag}")))
}

impl ModelArgs {
    pub fn to_spec(&self) -> CliResult<ModelSpec> {
        let kind = match (self.model, &self.graph_file, &self.dist_file) {
            (Some(k), _, _) => k,
            (None, Some(_), _) => ModelKind::Qaoa,
            (None, None, Some(_)) => ModelKind::Qcbm,
            (None, None, None) => return Err(CliError::usage("missing required: --model")),
        };
        let layers = self.layers.unwrap_or(1);
        Ok(match kind {
            ModelKind::Sombrero => ModelSpec::Sombrero {
                dim: need(self.dim, "--dim")?,
                nu: self.nu.unwrap_or(landscape_core::testbed::sombrero::DEFAULT_NU),
            },
            ModelKind::Quadratic => ModelSpec::Quadratic {
                curvatures: need(self.curvatures.clone(), "--curvatures")?,
            },
            ModelKind::Constant => ModelSpec::Constant {
                dim: need(self.dim, "--dim")?,
                value: self.value.unwrap_or(0.0),
            },
            ModelKind::Qaoa => ModelSpec::Qaoa {
                graph: match &self.graph_file {
                    Some(path) => GraphSpec::File { path: path.clone() },
                    None => GraphSpec::Random {
                        n_vertices: need(self.n_vertices, "--n-vertices or --graph-file")?,
                        degree: self.degree.unwrap_or(3),
                        weights: self.weights.unwrap_or(WeightMode::Unit),
                        seed: self.graph_seed.unwrap_or(0),
                    },
                },
                layers,
            },
            ModelKind::Qcbm => ModelSpec::Qcbm {
                n_qubits: need(self.n_qubits, "--n-qubits")?,
                layers,
                target: match (&self.dist_file, self.target) {
                    (Some(path), _) => TargetSpec::File { path: path.clone() },
                    (None, Some(TargetKind::BarsAndStripes)) => TargetSpec::BarsAndStripes,
                    (None, _) => TargetSpec::Random {
                        seed: self.target_seed.unwrap_or(0),
                    },
                },
                epsilon: self
                    .epsilon
                    .unwrap_or(landscape_core::testbed::qcbm::DEFAULT_KL_EPSILON),
                shots: self.shots,
            },
            ModelKind::Pauli => ModelSpec::Pauli {
                n_qubits: need(self.n_qubits, "--n-qubits")?,
                layers,
                hamiltonian: need(self.hamiltonian.clone(), "--hamiltonian")?,
                shots: self.shots,
            },
        })
    }
}

impl OutputArgs {
    fn render(&self) -> RenderSpec {
        RenderSpec {
            colormap: self.colormap.clone(),
            contours: self.contours,
            overlays: !self.no_overlays,
            width: self.width,
            height: self.height,
        }
    }

    fn config(&self, model: ModelSpec, operation: Operation) -> ExperimentConfig {
        let mut formats = self.formats.clone();
        formats.sort();
        formats.dedup();
        ExperimentConfig {
            model,
            operation,
            seed: self.seed,
            out: self.out.clone(),
            formats,
            render: self.render(),
        }
    }
}

impl PlaneArgs {
    fn params(&self) -> Scan2dParams {
        let d = Scan2dParams::default();
        Scan2dParams {
            origin: self.origin.clone(),
            dir_x: self.dir_x.clone(),
            dir_y: self.dir_y.clone(),
            to: self.to.clone(),
            norm: self.norm.unwrap_or(d.norm),
            range: self.range,
            range_y: self.range_y,
            res_x: self.res_x.or(self.res).unwrap_or(d.res_x),
            res_y: self.res_y.or(self.res).unwrap_or(d.res_y),
        }
    }
}

impl OptimizeArgs {
    fn params(&self, defaults: OptimizeParams) -> OptimizeParams {
        let optimizer = match self.optimizer {
            Some(OptimizerArg::Spsa) => OptimizerKind::Spsa,
            Some(OptimizerArg::Gd) => OptimizerKind::GradientDescent,
            None => defaults.optimizer,
        };
        OptimizeParams {
            optimizer,
            start: self.start.clone(),
            starts: self.starts.unwrap_or(defaults.starts),
            init_range: self.init_range.unwrap_or(defaults.init_range),
            iterations: self.iterations.unwrap_or(defaults.iterations),
            learning_rate: self.learning_rate.unwrap_or(defaults.learning_rate),
            directions: self.directions.unwrap_or(defaults.directions),
            eps: self.eps.unwrap_or(defaults.eps),
        }
    }
}

impl HessianArgs {
    fn params(&self, point: Option<Vec<f64>>) -> HessianParams {
        let d = HessianParams::default();
        HessianParams {
            point,
            method: match self.method {
                Some(HessianMethodArg::Spsa) => HessianMethod::Spsa,
                Some(HessianMethodArg::Exact) => HessianMethod::Exact,
                None => d.method,
            },
            step: self.step.unwrap_or(d.step),
            repetitions: self.repetitions.unwrap_or(d.repetitions),
            eps: self.hessian_eps.unwrap_or(d.eps),
            scan_points: self.scan_points.unwrap_or(d.scan_points),
            scan_range: self.scan_range.unwrap_or(d.scan_range),
        }
    }
}

impl NebArgs {
    fn params(&self) -> NebParams {
        let d = NebParams::default();
        let c = NebConfig::default();
        NebParams {
            from: self.from.clone(),
            to: self.to.clone(),
            pivots: self.pivots.unwrap_or(d.pivots),
            neb: NebConfig {
                learning_rate: self.learning_rate.unwrap_or(c.learning_rate),
                iterations: self.iterations.unwrap_or(c.iterations),
                cycles: self.cycles.unwrap_or(c.cycles),
                spring_constant: self.spring.unwrap_or(c.spring_constant),
                ..c
            },
            samples_per_segment: self.samples.unwrap_or(d.samples_per_segment),
        }
    }
}

/// Resolved configuration and output directory for a parsed command line.
pub fn to_config(command: &Command) -> CliResult<(ExperimentConfig, PathBuf)> {
    let (config, out) = match command {
        Command::Run { config, out } => {
            let cfg = ExperimentConfig::load(config)?;
            let out = out.clone().or_else(|| cfg.out.clone());
            (cfg, out)
        }
        Command::Demo { name, dim, nu, output } => {
            let model = ModelSpec::Sombrero {
                dim: dim.unwrap_or(4),
                nu: nu.unwrap_or(landscape_core::testbed::sombrero::DEFAULT_NU),
            };
            let cfg = output.config(model, Operation::Demo { name: name.clone() });
            (cfg, output.out.clone())
        }
        Command::Scan1d { model, scan, output } => {
            let d = Scan1dParams::default();
            let op = Operation::Scan1d(Scan1dParams {
                origin: scan.origin.clone(),
                direction: scan.direction.clone(),
                to: scan.to.clone(),
                wrap: scan.wrap,
                norm: scan.norm.unwrap_or(d.norm),
                range: scan.range,
                points: scan.points.unwrap_or(d.points),
            });
            (output.config(model.to_spec()?, op), output.out.clone())
        }
        Command::Scan2d { model, plane, output } => {
            let op = Operation::Scan2d(plane.params());
            (output.config(model.to_spec()?, op), output.out.clone())
        }
        Command::PcaScan {
            model,
            optimize,
            res,
            margin,
            output,
        } => {
            let d = PcaParams::default();
            let op = Operation::PcaScan(PcaParams {
                optimize: optimize.params(d.optimize.clone()),
                res_x: res.unwrap_or(d.res_x),
                res_y: res.unwrap_or(d.res_y),
                margin: margin.unwrap_or(d.margin),
            });
            (output.config(model.to_spec()?, op), output.out.clone())
        }
        Command::Hessian {
            model,
            point,
            hessian,
            output,
        } => {
            let op = Operation::Hessian(hessian.params(point.clone()));
            (output.config(model.to_spec()?, op), output.out.clone())
        }
        Command::EigenRatioScan {
            model,
            plane,
            hessian,
            output,
        } => {
            let d = EigenRatioParams::default();
            let mut p = plane.params();
            p.res_x = plane.res_x.or(plane.res).unwrap_or(d.plane.res_x);
            p.res_y = plane.res_y.or(plane.res).unwrap_or(d.plane.res_y);
            let op = Operation::EigenRatioScan(EigenRatioParams {
                plane: p,
                hessian: hessian.params(None),
            });
            (output.config(model.to_spec()?, op), output.out.clone())
        }
        Command::Neb { model, neb, output } => {
            let op = Operation::Neb(neb.params());
            (output.config(model.to_spec()?, op), output.out.clone())
        }
        Command::Autoneb { model, neb, output } => {
            let op = Operation::Autoneb(neb.params());
            (output.config(model.to_spec()?, op), output.out.clone())
        }
        Command::Optimize {
            model,
            optimize,
            output,
        } => {
            let op = Operation::Optimize(optimize.params(OptimizeParams::default()));
            (output.config(model.to_spec()?, op), output.out.clone())
        }
    };
    let out = out.ok_or_else(|| CliError::usage("missing required: --out (or LANDSCAPE_OUT)"))?;
    Ok((config, out))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vectors_and_ranges() {
        assert_eq!(parse_vector("1, -2.5,3e-1").unwrap(), vec![1.0, -2.5, 0.3]);
        assert!(parse_vector("1,x").is_err());
        assert_eq!(parse_range("-10:10").unwrap(), [-10.0, 10.0]);
        assert!(parse_range("3:1").is_err());
        assert!(parse_range("3").is_err());
    }

    #[test]
    fn command_line_becomes_config() {
        let cli = Cli::try_parse_from([
            "landscape", "scan2d", "--model", "sombrero", "--dim", "4", "--nu", "2", "--res", "50",
            "--range", "-10:10", "--seed", "1", "--out", "./run1", "--formats", "svg,json",
        ])
        .unwrap();
        let (cfg, out) = to_config(&cli.command).unwrap();
        assert_eq!(out, PathBuf::from("./run1"));
        assert_eq!(cfg.formats, vec![Format::Json, Format::Svg]);
        assert_eq!(cfg.model, ModelSpec::Sombrero { dim: 4, nu: 2.0 });
        match cfg.operation {
            Operation::Scan2d(p) => {
                assert_eq!((p.res_x, p.res_y), (50, 50));
                assert_eq!(p.range, Some([-10.0, 10.0]));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_model() {
        let cli = Cli::try_parse_from(["landscape", "scan2d", "--out", "x"]).unwrap();
        let err = to_config(&cli.command).unwrap_err();
        assert_eq!(err.to_string(), "missing required: --model");
        assert_eq!(err.exit_code(), 1);
    }
}
