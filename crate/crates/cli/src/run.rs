//! Executes an [`ExperimentConfig`] and writes its artifacts.

use std::path::{Path, PathBuf};

use landscape_core::gradient::DEFAULT_GRADIENT_STEP;
use landscape_core::scans::{DEFAULT_INTERPOLATION_RANGE, DEFAULT_PLANE_RANGE};
use landscape_core::testbed::{
    multi_start_descent, spsa_optimize, uniform_starts, Descent, Sombrero, SpsaConfig,
};
use landscape_core::{
    chain_loss_profile, eigenvalue_ratio_scan, eigenvector_scans, fit_principal_frame_trajectories,
    init_chain, orthonormal_complement, random_unit_direction, relative_periodic_wrap, run_auto_neb,
    run_neb, scan_1d_interpolation, scan_1d_linear, scan_2d, scan_2d_interpolation, scan_pca_plane,
    BudgetReport, Chain, Direction, GradientEstimator, GridSpec, HessianResult, Interval, LossModel,
    ParameterVector, Scan1DResult, Scan2DResult,
};
use serde::{Deserialize, Serialize};

use crate::config::{
    EigenRatioParams, ExperimentConfig, Format, HessianParams, ModelSpec, NebParams, Operation,
    OptimizeParams, OptimizerKind, PcaParams, Range, Scan1dParams, Scan2dParams,
};
use crate::emit::{scan1d_csv_string, scan_csv_string, to_json_string, write_text, Document, Provenance, ScanBody};
use crate::error::{CliError, CliResult};
use crate::svg::{heatmap_svg, histogram_svg, line_svg, Series};
use crate::SPEC_VERSION;

/// What a run produced.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub budget: BudgetReport,
}

/// Writes the requested formats into the output directory and records
/// provenance for each file.
struct Sink<'a> {
    dir: &'a Path,
    config: &'a ExperimentConfig,
    files: Vec<PathBuf>,
    metadata: String,
}

#[derive(Serialize)]
struct SvgMetadata<'a> {
    spec_version: &'a str,
    seed: u64,
    model: &'a ModelSpec,
}

impl<'a> Sink<'a> {
    fn new(dir: &'a Path, config: &'a ExperimentConfig) -> CliResult<Self> {
        let model = config.model.resolve()?;
        let metadata = serde_json::to_string(&SvgMetadata {
            spec_version: SPEC_VERSION,
            seed: config.seed,
            model: &model,
        })
        .expect("metadata serializes");
        Ok(Self {
            dir,
            config,
            files: Vec::new(),
            metadata,
        })
    }

    fn put(&mut self, format: Format, name: &str, text: impl FnOnce() -> CliResult<String>) -> CliResult<()> {
        if !self.config.wants(format) {
            return Ok(());
        }
        let path = self.dir.join(name);
        write_text(&path, &text()?)?;
        self.files.push(path);
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, kind: &str, model: &LossModel, body: T) -> CliResult<()> {
        let provenance = Provenance::new(self.config, model.eval_count())?;
        self.put(Format::Json, name, || {
            Ok(to_json_string(&Document::new(kind, &provenance, body)))
        })
    }

    fn meta(&self) -> Option<&str> {
        Some(&self.metadata)
    }
}

fn vector(v: &Option<Vec<f64>>, dim: usize, field: &str) -> CliResult<ParameterVector> {
    match v {
        None => Ok(ParameterVector::zeros(dim)?),
        Some(v) if v.len() != dim => Err(CliError::usage(format!(
            "{field}: expected {dim} coordinates, got {}",
            v.len()
        ))),
        Some(v) => Ok(ParameterVector::new(v.clone())?),
    }
}

fn required(v: &Option<Vec<f64>>, dim: usize, field: &str) -> CliResult<ParameterVector> {
    if v.is_none() {
        return Err(CliError::usage(format!("missing required: {field}")));
    }
    vector(v, dim, field)
}

fn interval(r: Option<Range>, default: Interval, field: &str) -> CliResult<Interval> {
    let [lo, hi] = r.unwrap_or([default.lo, default.hi]);
    Interval::new(lo, hi).map_err(|e| CliError::usage(format!("{field}: {e}")))
}

fn direction(explicit: &Option<Vec<f64>>, dim: usize, field: &str, fallback: impl FnOnce() -> CliResult<Direction>) -> CliResult<Direction> {
    match explicit {
        Some(_) => Direction::new(vector(explicit, dim, field)?)
            .map_err(|e| CliError::usage(format!("{field}: {e}"))),
        None => fallback(),
    }
}

fn positive_norm(norm: f64) -> CliResult<f64> {
    if norm > 0.0 && norm.is_finite() {
        Ok(norm)
    } else {
        Err(CliError::usage(format!("norm must be positive, got {norm}")))
    }
}

fn estimator() -> GradientEstimator {
    GradientEstimator::central(DEFAULT_GRADIENT_STEP).expect("default step is valid")
}

/// Runs `config`, writing artifacts under `out`.
pub fn execute(config: &ExperimentConfig, out: &Path) -> CliResult<RunReport> {
    config.render.validate()?;
    if config.formats.is_empty() {
        return Err(CliError::usage("formats: at least one of json, csv, svg is required"));
    }
    let mut sink = Sink::new(out, config)?;
    let model = match &config.operation {
        Operation::Demo { name } => {
            if name != "sombrero-pipeline" {
                return Err(CliError::usage(format!(
                    "unknown demo '{name}' (available: sombrero-pipeline)"
                )));
            }
            sombrero_pipeline(config, &mut sink)?
        }
        op => {
            let model = config.model.build(config.seed)?;
            match op {
                Operation::Scan1d(p) => run_scan1d(p, &model, config.seed, &mut sink)?,
                Operation::Scan2d(p) => run_scan2d(p, &model, config.seed, &mut sink)?,
                Operation::PcaScan(p) => run_pca(p, &model, config.seed, &mut sink)?,
                Operation::Hessian(p) => run_hessian(p, &model, config.seed, &mut sink)?,
                Operation::EigenRatioScan(p) => run_eigen_ratio(p, &model, config.seed, &mut sink)?,
                Operation::Neb(p) => run_neb_op(p, &model, false, &mut sink)?,
                Operation::Autoneb(p) => run_neb_op(p, &model, true, &mut sink)?,
                Operation::Optimize(p) => run_optimize(p, &model, config.seed, &mut sink)?,
                Operation::Demo { .. } => unreachable!(),
            }
            model
        }
    };
    Ok(RunReport {
        files: sink.files,
        budget: model.budget_report(),
    })
}

fn emit_scan1d(sink: &mut Sink, name: &str, title: &str, scan: &Scan1DResult, model: &LossModel) -> CliResult<()> {
    sink.json(&format!("{name}.json"), name, model, ScanBody::from_1d(scan))?;
    sink.put(Format::Csv, &format!("{name}.csv"), || Ok(scan1d_csv_string(scan)))?;
    let meta = sink.meta().map(str::to_owned);
    let spec = sink.config.render.clone();
    sink.put(Format::Svg, &format!("{name}.svg"), || {
        line_svg(&[Series::scan("loss", scan)], &spec, title, "t", "loss", meta.as_deref())
    })
}

fn emit_scan2d<T: Serialize>(
    sink: &mut Sink,
    name: &str,
    title: &str,
    scan: &Scan2DResult,
    overlays: &[Vec<[f64; 2]>],
    body: T,
    model: &LossModel,
) -> CliResult<()> {
    sink.json(&format!("{name}.json"), name, model, body)?;
    sink.put(Format::Csv, &format!("{name}.csv"), || Ok(scan_csv_string(scan)))?;
    let meta = sink.meta().map(str::to_owned);
    let spec = sink.config.render.clone();
    sink.put(Format::Svg, &format!("{name}.svg"), || {
        heatmap_svg(scan, &spec, overlays, title, meta.as_deref())
    })
}

fn run_scan1d(p: &Scan1dParams, model: &LossModel, seed: u64, sink: &mut Sink) -> CliResult<()> {
    let dim = model.dimension();
    let origin = vector(&p.origin, dim, "origin")?;
    let scan = if p.to.is_some() {
        let mut to = vector(&p.to, dim, "to")?;
        if p.wrap {
            let period = model
                .period()
                .ok_or_else(|| CliError::usage("wrap: model has no parameter period"))?;
            to = relative_periodic_wrap(&origin, &to, period)?;
        }
        let range = interval(p.range, DEFAULT_INTERPOLATION_RANGE, "range")?;
        scan_1d_interpolation(model, &origin, &to, range, p.points)?
    } else {
        let norm = positive_norm(p.norm)?;
        let d = direction(&p.direction, dim, "direction", || {
            Ok(random_unit_direction(dim, seed)?.scaled_to(norm))
        })?;
        let range = interval(p.range, DEFAULT_PLANE_RANGE, "range")?;
        scan_1d_linear(model, &origin, &d, range, p.points)?
    };
    emit_scan1d(sink, "scan1d", "1D scan", &scan, model)
}

fn plane(p: &Scan2dParams, model: &LossModel, seed: u64) -> CliResult<(ParameterVector, Direction, Direction, GridSpec)> {
    let dim = model.dimension();
    let origin = vector(&p.origin, dim, "origin")?;
    let norm = positive_norm(p.norm)?;
    let dx = direction(&p.dir_x, dim, "dir_x", || Ok(random_unit_direction(dim, seed)?.scaled_to(norm)))?;
    let dy = direction(&p.dir_y, dim, "dir_y", || {
        Ok(orthonormal_complement(&dx, seed)?.scaled_to(norm))
    })?;
    let rx = interval(p.range, DEFAULT_PLANE_RANGE, "range")?;
    let ry = interval(p.range_y.or(p.range), DEFAULT_PLANE_RANGE, "range_y")?;
    Ok((origin, dx, dy, GridSpec::new(rx, ry, p.res_x, p.res_y)))
}

fn run_scan2d(p: &Scan2dParams, model: &LossModel, seed: u64, sink: &mut Sink) -> CliResult<()> {
    let scan = if p.to.is_some() {
        let dim = model.dimension();
        let origin = vector(&p.origin, dim, "origin")?;
        let to = vector(&p.to, dim, "to")?;
        let rx = interval(p.range, DEFAULT_INTERPOLATION_RANGE, "range")?;
        let ry = interval(p.range_y, DEFAULT_PLANE_RANGE, "range_y")?;
        scan_2d_interpolation(model, &origin, &to, seed, GridSpec::new(rx, ry, p.res_x, p.res_y))?
    } else {
        let (origin, dx, dy, grid) = plane(p, model, seed)?;
        scan_2d(model, &origin, &dx, &dy, grid)?
    };
    emit_scan2d(sink, "scan2d", "2D scan", &scan, &[], ScanBody::from_2d(&scan, &[]), model)
}

fn optimize_runs(p: &OptimizeParams, model: &LossModel, seed: u64) -> CliResult<Vec<Descent>> {
    let dim = model.dimension();
    let starts = match &p.start {
        Some(_) => vec![vector(&p.start, dim, "start")?],
        None => {
            if p.starts == 0 {
                return Err(CliError::usage("starts must be >= 1"));
            }
            uniform_starts(p.starts, dim, p.init_range[0], p.init_range[1], seed)
                .map_err(|e| CliError::usage(format!("init_range: {e}")))?
        }
    };
    match p.optimizer {
        OptimizerKind::GradientDescent => Ok(multi_start_descent(
            model,
            &estimator(),
            &starts,
            p.learning_rate,
            p.iterations,
        )?),
        OptimizerKind::Spsa => starts
            .iter()
            .enumerate()
            .map(|(r, s)| {
                let config = SpsaConfig {
                    learning_rate: p.learning_rate,
                    iterations: p.iterations,
                    directions: p.directions,
                    eps: p.eps,
                    seed: seed.wrapping_add(r as u64),
                    track_loss: true,
                };
                Ok(spsa_optimize(model, s, &config)?)
            })
            .collect(),
    }
}

#[derive(Serialize, Deserialize)]
struct RunJson {
    initial_loss: f64,
    final_loss: Option<f64>,
    final_point: Vec<f64>,
    completed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
    losses: Vec<f64>,
}

impl From<&Descent> for RunJson {
    fn from(d: &Descent) -> Self {
        Self {
            initial_loss: d.losses[0],
            final_loss: d.final_loss(),
            final_point: d.final_point().to_vec(),
            completed: d.completed(),
            error: d.error.as_ref().map(|e| e.to_string()),
            losses: d.losses.clone(),
        }
    }
}

#[derive(Serialize)]
struct OptimizeBody {
    optimizer: OptimizerKind,
    runs: Vec<RunJson>,
}

fn run_optimize(p: &OptimizeParams, model: &LossModel, seed: u64, sink: &mut Sink) -> CliResult<()> {
    let runs = optimize_runs(p, model, seed)?;
    let body = OptimizeBody {
        optimizer: p.optimizer,
        runs: runs.iter().map(RunJson::from).collect(),
    };
    sink.json("optimize.json", "optimize", model, body)?;
    sink.put(Format::Csv, "optimize.csv", || {
        let mut s = String::from("run,iteration,loss\n");
        for (r, d) in runs.iter().enumerate() {
            for (k, l) in d.losses.iter().enumerate() {
                s.push_str(&format!("{r},{k},{l:.16e}\n"));
            }
        }
        Ok(s)
    })?;
    let labels: Vec<String> = (0..runs.len()).map(|r| format!("run {r}")).collect();
    let steps: Vec<Vec<f64>> = runs.iter().map(|d| (0..d.losses.len()).map(|k| k as f64).collect()).collect();
    let series: Vec<Series> = runs
        .iter()
        .enumerate()
        .map(|(r, d)| Series::new(&labels[r], &steps[r], &d.losses))
        .collect();
    let meta = sink.meta().map(str::to_owned);
    let spec = sink.config.render.clone();
    sink.put(Format::Svg, "optimize.svg", || {
        line_svg(&series, &spec, "Loss during optimization", "iteration", "loss", meta.as_deref())
    })
}

#[derive(Serialize)]
struct PcaBody {
    #[serde(flatten)]
    scan: ScanBody,
    mean: Vec<f64>,
    explained_variance: Vec<f64>,
    explained_ratio: Vec<f64>,
    final_losses: Vec<Option<f64>>,
}

fn run_pca(p: &PcaParams, model: &LossModel, seed: u64, sink: &mut Sink) -> CliResult<()> {
    let runs = optimize_runs(&p.optimize, model, seed)?;
    let trajectories: Vec<Vec<ParameterVector>> = runs.iter().map(|d| d.trajectory.clone()).collect();
    let frame = fit_principal_frame_trajectories(&trajectories, 2.min(model.dimension()))?;
    let pca = scan_pca_plane(&frame, model, p.margin, p.res_x, p.res_y)?;
    let body = PcaBody {
        scan: ScanBody::from_2d(&pca.scan, &pca.overlays),
        mean: frame.mean.to_vec(),
        explained_variance: frame.explained_variance.clone(),
        explained_ratio: frame.explained_ratio.clone(),
        final_losses: runs.iter().map(Descent::final_loss).collect(),
    };
    emit_scan2d(sink, "pca-scan", "PCA plane", &pca.scan, &pca.overlays, body, model)
}

#[derive(Serialize)]
struct HessianJson {
    point: Vec<f64>,
    matrix: Vec<Vec<f64>>,
    eigenvalues: Vec<f64>,
    eigenvectors: Vec<Vec<f64>>,
    eigenvalue_ratio: f64,
    asymmetry: f64,
    stochastic: bool,
}

impl From<&HessianResult> for HessianJson {
    fn from(h: &HessianResult) -> Self {
        let n = h.dimension();
        Self {
            point: h.point.to_vec(),
            matrix: (0..n).map(|i| (0..n).map(|j| h.matrix[(i, j)]).collect()).collect(),
            eigenvalues: h.eigenvalues.clone(),
            eigenvectors: h.eigenvectors.iter().map(|d| d.as_slice().to_vec()).collect(),
            eigenvalue_ratio: h.eigenvalue_ratio(),
            asymmetry: h.asymmetry,
            stochastic: h.stochastic,
        }
    }
}

#[derive(Serialize)]
struct EigenScanJson {
    index: usize,
    eigenvalue: f64,
    ts: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Serialize)]
struct HessianBody {
    method: crate::config::HessianMethod,
    #[serde(flatten)]
    hessian: HessianJson,
    eigenvector_scans: Vec<EigenScanJson>,
}

fn run_hessian(p: &HessianParams, model: &LossModel, seed: u64, sink: &mut Sink) -> CliResult<()> {
    let point = vector(&p.point, model.dimension(), "point")?;
    let h = p.config(seed).compute(model, &point)?;
    let n = h.dimension();
    let which: Vec<usize> = if n == 1 { vec![0] } else { vec![0, n - 1] };
    let range = interval(Some(p.scan_range), DEFAULT_PLANE_RANGE, "scan_range")?;
    let scans = eigenvector_scans(&h, model, &which, range, p.scan_points)?;
    let body = HessianBody {
        method: p.method,
        hessian: (&h).into(),
        eigenvector_scans: scans
            .iter()
            .map(|s| EigenScanJson {
                index: s.index,
                eigenvalue: s.eigenvalue,
                ts: s.scan.ts.clone(),
                values: s.scan.values.clone(),
            })
            .collect(),
    };
    sink.json("hessian.json", "hessian", model, body)?;
    sink.put(Format::Csv, "hessian.csv", || {
        let mut s = String::from("index,eigenvalue\n");
        for (k, l) in h.eigenvalues.iter().enumerate() {
            s.push_str(&format!("{k},{l:.16e}\n"));
        }
        Ok(s)
    })?;
    let labels: Vec<String> = scans
        .iter()
        .map(|s| format!("eigenvector {} (λ = {:.4e})", s.index, s.eigenvalue))
        .collect();
    let series: Vec<Series> = scans
        .iter()
        .zip(&labels)
        .map(|(s, l)| Series::scan(l, &s.scan))
        .collect();
    let meta = sink.meta().map(str::to_owned);
    let spec = sink.config.render.clone();
    sink.put(Format::Svg, "hessian.svg", || {
        line_svg(&series, &spec, "Scans along Hessian eigenvectors", "t", "loss", meta.as_deref())
    })
}

fn run_eigen_ratio(p: &EigenRatioParams, model: &LossModel, seed: u64, sink: &mut Sink) -> CliResult<()> {
    if p.plane.to.is_some() {
        return Err(CliError::usage(
            "plane.to: eigen-ratio scans use a linear plane (set dir_x/dir_y instead)",
        ));
    }
    let (origin, dx, dy, grid) = plane(&p.plane, model, seed)?;
    let scan = eigenvalue_ratio_scan(model, &origin, &dx, &dy, grid, p.hessian.config(seed))?;
    emit_scan2d(
        sink,
        "eigen-ratio-scan",
        "Hessian eigenvalue ratio",
        &scan,
        &[],
        ScanBody::from_2d(&scan, &[]),
        model,
    )
}

#[derive(Serialize)]
struct ProfileJson {
    ts: Vec<f64>,
    values: Vec<f64>,
    max: f64,
}

impl From<&Scan1DResult> for ProfileJson {
    fn from(s: &Scan1DResult) -> Self {
        Self {
            ts: s.ts.clone(),
            values: s.values.clone(),
            max: s.max(),
        }
    }
}

#[derive(Serialize)]
struct NebBody {
    method: &'static str,
    pivots: Vec<Vec<f64>>,
    path_length: f64,
    profile: ProfileJson,
    linear_profile: ProfileJson,
}

fn neb_chain(from: &ParameterVector, to: &ParameterVector, p: &NebParams, model: &LossModel, auto: bool) -> CliResult<Chain> {
    let chain = init_chain(from, to, p.pivots)?;
    let history = if auto {
        run_auto_neb(&chain, model, &estimator(), &p.neb)?
    } else {
        run_neb(&chain, model, &estimator(), &p.neb)?
    };
    Ok(history.last().cloned().unwrap_or(chain))
}

fn neb_body(from: &ParameterVector, to: &ParameterVector, p: &NebParams, model: &LossModel, auto: bool) -> CliResult<(NebBody, Scan1DResult, Scan1DResult)> {
    let chain = neb_chain(from, to, p, model, auto)?;
    let profile = chain_loss_profile(&chain, model, p.samples_per_segment)?;
    let unit = Interval::new(0.0, 1.0)?;
    let linear = scan_1d_interpolation(model, from, to, unit, p.samples_per_segment * (chain.len() - 1) + 1)?;
    let body = NebBody {
        method: if auto { "autoneb" } else { "neb" },
        pivots: chain.pivots().iter().map(ParameterVector::to_vec).collect(),
        path_length: chain.path_length(),
        profile: (&profile).into(),
        linear_profile: (&linear).into(),
    };
    Ok((body, profile, linear))
}

fn run_neb_op(p: &NebParams, model: &LossModel, auto: bool, sink: &mut Sink) -> CliResult<()> {
    let dim = model.dimension();
    let from = required(&p.from, dim, "from")?;
    let to = required(&p.to, dim, "to")?;
    let (body, profile, linear) = neb_body(&from, &to, p, model, auto)?;
    let name = if auto { "autoneb" } else { "neb" };
    sink.json(&format!("{name}.json"), name, model, body)?;
    sink.put(Format::Csv, &format!("{name}.csv"), || Ok(scan1d_csv_string(&profile)))?;
    let meta = sink.meta().map(str::to_owned);
    let spec = sink.config.render.clone();
    sink.put(Format::Svg, &format!("{name}.svg"), || {
        line_svg(
            &[Series::scan("linear path", &linear), Series::scan(name, &profile)],
            &spec,
            "Loss along the path",
            "normalized arc length",
            "loss",
            meta.as_deref(),
        )
    })
}

/// Bins in `[lo, hi)`, the last bin closed.
fn histogram(values: &[f64], lo: f64, hi: f64, bins: usize) -> (Vec<f64>, Vec<usize>) {
    let edges: Vec<f64> = (0..=bins).map(|k| lo + (hi - lo) * k as f64 / bins as f64).collect();
    let mut counts = vec![0; bins];
    for &v in values.iter().filter(|v| v.is_finite()) {
        let k = (((v - lo) / (hi - lo)) * bins as f64).floor();
        let k = (k.max(0.0) as usize).min(bins - 1);
        counts[k] += 1;
    }
    (edges, counts)
}

#[derive(Serialize)]
struct MultiStartBody {
    final_losses: Vec<Option<f64>>,
    ring_levels: Vec<f64>,
    histogram_edges: Vec<f64>,
    histogram_counts: Vec<usize>,
}

#[derive(Serialize)]
struct InterpolationJson {
    label: String,
    from: Vec<f64>,
    to: Vec<f64>,
    ts: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Serialize)]
struct InterpolationBody {
    scans: Vec<InterpolationJson>,
}

#[derive(Serialize)]
struct SpectraBody {
    points: Vec<HessianJson>,
}

#[derive(Serialize)]
struct PipelineNebBody {
    same_ring: NebBody,
    ring_to_origin: NebBody,
}

/// The sombrero study as one directory: multi-start statistics,
/// interpolations between the found minima, the PCA plane of all
/// trajectories, Hessian spectra at the origin and on the first ring, and
/// NEB/AutoNEB profiles.
fn sombrero_pipeline(config: &ExperimentConfig, sink: &mut Sink) -> CliResult<LossModel> {
    let (dim, nu) = match config.model {
        ModelSpec::Sombrero { dim, nu } => (dim, nu),
        _ => return Err(CliError::usage("model: the sombrero-pipeline demo needs kind = sombrero")),
    };
    if dim < 2 {
        return Err(CliError::usage("model.dim: the sombrero-pipeline demo needs dim >= 2"));
    }
    let sombrero = Sombrero::new(dim, nu)?;
    let ring_levels = vec![0.0, sombrero.radial(sombrero.ring_radius(1)), sombrero.radial(sombrero.ring_radius(2))];
    let r1 = sombrero.ring_radius(1);
    let model = sombrero.into_model();
    let seed = config.seed;
    let spec = config.render.clone();
    let meta = sink.meta().map(str::to_owned);

    // Multi-start gradient descent.
    let gd = OptimizeParams {
        starts: 100,
        ..OptimizeParams::default()
    };
    let runs = optimize_runs(&gd, &model, seed)?;
    let finals: Vec<Option<f64>> = runs.iter().map(Descent::final_loss).collect();
    let finite: Vec<f64> = finals.iter().flatten().copied().collect();
    let top = finite.iter().copied().fold(1.0, f64::max);
    let (edges, counts) = histogram(&finite, 0.0, top, 40);
    sink.json(
        "multistart.json",
        "multistart",
        &model,
        MultiStartBody {
            final_losses: finals.clone(),
            ring_levels: ring_levels.clone(),
            histogram_edges: edges.clone(),
            histogram_counts: counts.clone(),
        },
    )?;
    sink.put(Format::Csv, "multistart.csv", || {
        let mut s = String::from("run,final_loss\n");
        for (r, l) in finite.iter().enumerate() {
            s.push_str(&format!("{r},{l:.16e}\n"));
        }
        Ok(s)
    })?;
    sink.put(Format::Svg, "multistart.svg", || {
        histogram_svg(&edges, &counts, &spec, "Final losses of 100 descents", "final loss", meta.as_deref())
    })?;

    // Interpolations from the best run to a run at each other level.
    let mut order: Vec<usize> = (0..runs.len()).filter(|&r| finals[r].is_some()).collect();
    order.sort_by(|&a, &b| finals[a].unwrap().total_cmp(&finals[b].unwrap()).then(a.cmp(&b)));
    let best = order[0];
    let mut partners = Vec::new();
    for &r in &order[1..] {
        let l = finals[r].unwrap();
        if partners.iter().all(|&q: &usize| (finals[q].unwrap() - l).abs() > 0.02)
            && (l - finals[best].unwrap()).abs() > 0.02
        {
            partners.push(r);
        }
        if partners.len() == 2 {
            break;
        }
    }
    if partners.is_empty() {
        partners.push(order[order.len() - 1]);
    }
    let a = runs[best].final_point();
    let mut interps = Vec::new();
    for &r in &partners {
        let b = runs[r].final_point();
        if a.distance(b) == 0.0 {
            continue;
        }
        let scan = scan_1d_interpolation(&model, a, b, DEFAULT_INTERPOLATION_RANGE, 201)?;
        interps.push((format!("run {best} to run {r}"), b.to_vec(), scan));
    }
    let scans: Vec<InterpolationJson> = interps
        .iter()
        .map(|(label, to, s)| InterpolationJson {
            label: label.clone(),
            from: a.to_vec(),
            to: to.clone(),
            ts: s.ts.clone(),
            values: s.values.clone(),
        })
        .collect();
    sink.json("interpolation.json", "interpolation", &model, InterpolationBody { scans })?;
    sink.put(Format::Svg, "interpolation.svg", || {
        let series: Vec<Series> = interps.iter().map(|(l, _, s)| Series::scan(l, s)).collect();
        line_svg(&series, &spec, "Interpolation between minima", "t", "loss", meta.as_deref())
    })?;

    // PCA plane of every trajectory.
    let trajectories: Vec<Vec<ParameterVector>> = runs.iter().map(|d| d.trajectory.clone()).collect();
    let frame = fit_principal_frame_trajectories(&trajectories, 2)?;
    let pca = scan_pca_plane(&frame, &model, landscape_core::pca::DEFAULT_PCA_MARGIN, 60, 60)?;
    let pca_body = PcaBody {
        scan: ScanBody::from_2d(&pca.scan, &pca.overlays),
        mean: frame.mean.to_vec(),
        explained_variance: frame.explained_variance.clone(),
        explained_ratio: frame.explained_ratio.clone(),
        final_losses: finals,
    };
    emit_scan2d(sink, "pca-scan", "PCA plane of 100 descents", &pca.scan, &pca.overlays, pca_body, &model)?;

    // Hessian spectra.
    let origin = ParameterVector::zeros(dim)?;
    let mut ring = vec![0.0; dim];
    ring[0] = r1;
    let ring = ParameterVector::new(ring)?;
    let hs = [
        HessianParams::default().config(seed).compute(&model, &origin)?,
        HessianParams::default().config(seed).compute(&model, &ring)?,
    ];
    sink.json(
        "hessian.json",
        "hessian-spectra",
        &model,
        SpectraBody {
            points: hs.iter().map(HessianJson::from).collect(),
        },
    )?;
    let idx: Vec<f64> = (0..dim).map(|k| k as f64).collect();
    sink.put(Format::Svg, "hessian.svg", || {
        line_svg(
            &[
                Series::new("origin", &idx, &hs[0].eigenvalues),
                Series::new("first ring", &idx, &hs[1].eigenvalues),
            ],
            &spec,
            "Hessian spectra",
            "eigenvalue index",
            "eigenvalue",
            meta.as_deref(),
        )
    })?;

    // NEB between two first-ring minima, AutoNEB from the ring to the origin.
    let mut other = vec![0.0; dim];
    other[1] = r1;
    let other = ParameterVector::new(other)?;
    let neb = NebParams {
        neb: landscape_core::NebConfig {
            iterations: 500,
            ..Default::default()
        },
        ..NebParams::default()
    };
    let (same, same_profile, same_linear) = neb_body(&ring, &other, &neb, &model, false)?;
    let (center, center_profile, _) = neb_body(&ring, &origin, &neb, &model, true)?;
    sink.json(
        "neb.json",
        "neb-profiles",
        &model,
        PipelineNebBody {
            same_ring: same,
            ring_to_origin: center,
        },
    )?;
    sink.put(Format::Svg, "neb.svg", || {
        line_svg(
            &[
                Series::scan("ring to ring, linear", &same_linear),
                Series::scan("ring to ring, NEB", &same_profile),
                Series::scan("ring to origin, AutoNEB", &center_profile),
            ],
            &spec,
            "Minimum-loss paths",
            "normalized arc length",
            "loss",
            meta.as_deref(),
        )
    })?;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn histogram_bins() {
        let (e, c) = histogram(&[0.0, 0.1, 0.5, 1.0, f64::NAN], 0.0, 1.0, 2);
        assert_eq!(e, vec![0.0, 0.5, 1.0]);
        assert_eq!(c, vec![2, 2]);
    }
}
