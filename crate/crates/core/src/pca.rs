//! Principal component analysis of parameter-vector collections, used to
//! pick the plane most representative of an optimization trajectory.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometric::Direction;
use crate::linalg::jacobi_eigen;
use crate::loss::LossModel;
use crate::param::{dot, ParameterVector};
use crate::scans::{scan_plane, GridSpec, Interval, PlaneKind, Scan2DResult};

pub const DEFAULT_PCA_MARGIN: f64 = 0.25;

/// A fitted PCA basis.
///
/// Variances use the sample (`1 / (n - 1)`) convention. `explained_ratio`
/// divides by the total variance of the data, so ratios of a truncated
/// frame sum to less than one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrincipalFrame {
    pub mean: ParameterVector,
    pub components: Vec<Direction>,
    pub explained_variance: Vec<f64>,
    pub explained_ratio: Vec<f64>,
    pub total_variance: f64,
    /// Coordinates of the fit points on the retained components, in fit order.
    pub fit_coordinates: Vec<Vec<f64>>,
    /// Lengths of the trajectories concatenated for the fit.
    pub trajectory_lengths: Vec<usize>,
}

impl PrincipalFrame {
    pub fn dimension(&self) -> usize {
        self.mean.dimension()
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    /// Coordinates of `point - mean` on each retained component.
    pub fn project_point(&self, point: &ParameterVector) -> Result<Vec<f64>> {
        point.check_same_dimension(&self.mean)?;
        let centered: Vec<f64> = point
            .iter()
            .zip(self.mean.iter())
            .map(|(p, m)| p - m)
            .collect();
        Ok(self
            .components
            .iter()
            .map(|c| dot(&centered, c.as_slice()))
            .collect())
    }

    pub fn reconstruct(&self, coordinates: &[f64]) -> Result<ParameterVector> {
        if coordinates.len() > self.components.len() {
            return Err(Error::usage(format!(
                "{} coordinates for a frame with {} components",
                coordinates.len(),
                self.components.len()
            )));
        }
        let mut out = self.mean.to_vec();
        for (c, comp) in coordinates.iter().zip(&self.components) {
            out.iter_mut()
                .zip(comp.as_slice())
                .for_each(|(o, x)| *o += c * x);
        }
        ParameterVector::new(out)
    }

    /// Fit coordinates split back into the original trajectories.
    pub fn fit_trajectories(&self) -> Vec<Vec<Vec<f64>>> {
        let mut out = Vec::with_capacity(self.trajectory_lengths.len());
        let mut start = 0;
        for &len in &self.trajectory_lengths {
            out.push(self.fit_coordinates[start..start + len].to_vec());
            start += len;
        }
        out
    }
}

/// Fits a frame to one point collection.
pub fn fit_principal_frame(points: &[ParameterVector], n_components: usize) -> Result<PrincipalFrame> {
    fit_principal_frame_trajectories(&[points.to_vec()], n_components)
}

/// Fits a frame to the concatenation of several trajectories.
pub fn fit_principal_frame_trajectories(
    trajectories: &[Vec<ParameterVector>],
    n_components: usize,
) -> Result<PrincipalFrame> {
    let points: Vec<&ParameterVector> = trajectories.iter().flatten().collect();
    let n = points.len();
    if n < 2 {
        return Err(Error::usage(format!("PCA needs at least 2 points, got {n}")));
    }
    let d = points[0].dimension();
    if points.iter().any(|p| p.dimension() != d) {
        return Err(Error::usage("PCA points have mixed dimensions"));
    }
    let max_k = n.min(d);
    if n_components == 0 || n_components > max_k {
        return Err(Error::usage(format!(
            "n_components must be in 1..={max_k}, got {n_components}"
        )));
    }

    let mut mean = vec![0.0; d];
    for p in &points {
        mean.iter_mut().zip(p.iter()).for_each(|(m, x)| *m += x);
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let centered = DMatrix::from_fn(n, d, |i, j| points[i][j] - mean[j]);
    let denom = (n - 1) as f64;
    let total_variance = centered.iter().map(|x| x * x).sum::<f64>() / denom;
    let scale = points
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(1.0);
    if total_variance <= (1e-15 * scale).powi(2) {
        return Err(Error::Degenerate("all PCA points are identical".into()));
    }

    let (variances, mut components) = if d <= n {
        let cov = centered.transpose() * &centered / denom;
        let eig = jacobi_eigen(&cov)?;
        let mut vars = Vec::with_capacity(n_components);
        let mut comps = Vec::with_capacity(n_components);
        for k in 0..n_components {
            let col = d - 1 - k;
            vars.push(eig.values[col].max(0.0));
            comps.push(eig.vectors.column(col).iter().copied().collect::<Vec<f64>>());
        }
        (vars, comps)
    } else {
        // More dimensions than points: diagonalize the n x n Gram matrix and
        // map its eigenvectors back through the data.
        let gram = &centered * centered.transpose() / denom;
        let eig = jacobi_eigen(&gram)?;
        let mut vars = Vec::with_capacity(n_components);
        let mut comps: Vec<Vec<f64>> = Vec::with_capacity(n_components);
        for k in 0..n_components {
            let col = n - 1 - k;
            let lambda = eig.values[col].max(0.0);
            let u = eig.vectors.column(col);
            let w: Vec<f64> = (0..d).map(|j| centered.column(j).dot(&u)).collect();
            let wn = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if lambda > 1e-12 * total_variance && wn > 0.0 {
                vars.push(lambda);
                comps.push(w.iter().map(|x| x / wn).collect());
            } else {
                vars.push(0.0);
                comps.push(complete_basis(&comps, d));
            }
        }
        (vars, comps)
    };

    for c in components.iter_mut() {
        fix_sign(c);
    }
    let explained_ratio = variances.iter().map(|v| v / total_variance).collect();
    let components: Vec<Direction> = components
        .into_iter()
        .map(Direction::from_vec)
        .collect::<Result<_>>()?;
    let mut frame = PrincipalFrame {
        mean: ParameterVector::new(mean)?,
        components,
        explained_variance: variances,
        explained_ratio,
        total_variance,
        fit_coordinates: Vec::new(),
        trajectory_lengths: trajectories.iter().map(Vec::len).collect(),
    };
    frame.fit_coordinates = points
        .iter()
        .map(|p| frame.project_point(p))
        .collect::<Result<_>>()?;
    Ok(frame)
}

/// First standard basis vector that survives Gram-Schmidt against `basis`.
fn complete_basis(basis: &[Vec<f64>], d: usize) -> Vec<f64> {
    for axis in 0..d {
        let mut v = vec![0.0; d];
        v[axis] = 1.0;
        for _ in 0..2 {
            for b in basis {
                let p = dot(&v, b);
                v.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
            }
        }
        let n = dot(&v, &v).sqrt();
        if n > 1e-6 {
            return v.into_iter().map(|x| x / n).collect();
        }
    }
    unreachable!("fewer than d basis vectors always leave a free axis")
}

/// Largest-magnitude coordinate made positive (first one on ties).
fn fix_sign(v: &mut [f64]) {
    let mut lead = 0;
    for (i, x) in v.iter().enumerate() {
        if x.abs() > v[lead].abs() {
            lead = i;
        }
    }
    if v[lead] < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

pub fn project(frame: &PrincipalFrame, points: &[ParameterVector]) -> Result<Vec<Vec<f64>>> {
    points.iter().map(|p| frame.project_point(p)).collect()
}

/// A scan of the plane of the two leading components, with the fit points
/// projected into it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaScan {
    pub scan: Scan2DResult,
    /// Per trajectory, the `(t1, t2)` coordinates of its fit points.
    pub overlays: Vec<Vec<[f64; 2]>>,
}

fn padded(lo: f64, hi: f64, margin: f64, fallback: f64) -> Result<Interval> {
    let size = hi - lo;
    let size = if size > 1e-12 * fallback.max(1e-300) { size } else { fallback };
    Interval::new(lo - margin * size, hi + margin * size)
}

/// Scans the plane of the first two components around the frame mean.
///
/// Ranges are the bounding box of the projected fit points, grown on each
/// side by `margin` times the box size.
pub fn scan_pca_plane(
    frame: &PrincipalFrame,
    model: &LossModel,
    margin: f64,
    resolution_x: usize,
    resolution_y: usize,
) -> Result<PcaScan> {
    if frame.n_components() < 2 {
        return Err(Error::usage("PCA plane scan needs a frame with >= 2 components"));
    }
    if !(margin >= 0.0 && margin.is_finite()) {
        return Err(Error::usage(format!("margin must be >= 0, got {margin}")));
    }
    if model.dimension() != frame.dimension() {
        return Err(Error::usage(format!(
            "frame dimension {} does not match model dimension {}",
            frame.dimension(),
            model.dimension()
        )));
    }
    let bounds = |k: usize| {
        frame.fit_coordinates.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), c| {
            (lo.min(c[k]), hi.max(c[k]))
        })
    };
    let (x_lo, x_hi) = bounds(0);
    let (y_lo, y_hi) = bounds(1);
    let fallback = (x_hi - x_lo).max(y_hi - y_lo).max(1e-12);
    let fallback = if fallback > 1e-12 { fallback } else { 1.0 };
    let grid = GridSpec::new(
        padded(x_lo, x_hi, margin, fallback)?,
        padded(y_lo, y_hi, margin, fallback)?,
        resolution_x,
        resolution_y,
    );
    let scan = scan_plane(
        model,
        &frame.mean,
        &frame.components[0],
        &frame.components[1],
        grid,
        PlaneKind::Pca,
    )?;
    let overlays = frame
        .fit_trajectories()
        .into_iter()
        .map(|traj| traj.into_iter().map(|c| [c[0], c[1]]).collect())
        .collect();
    Ok(PcaScan { scan, overlays })
}
