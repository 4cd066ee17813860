//! One- and two-dimensional slices through a loss landscape.
//!
//! Ranges are measured in multiples of the direction vectors, which are
//! not normalized: a direction of norm 1.5 scanned over `[-1, 1]` covers a
//! physical distance of 1.5 either side of the origin.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometric::{orthonormal_complement, Direction};
use crate::loss::LossModel;
use crate::param::{lerp, ParameterVector};

pub const DEFAULT_INTERPOLATION_RANGE: Interval = Interval { lo: -0.5, hi: 1.5 };
pub const DEFAULT_PLANE_RANGE: Interval = Interval { lo: -1.0, hi: 1.0 };

/// A closed interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        let iv = Self { lo, hi };
        iv.validate()?;
        Ok(iv)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lo.is_finite() && self.hi.is_finite() && self.lo < self.hi) {
            return Err(Error::usage(format!(
                "empty or inverted range [{}, {}]",
                self.lo, self.hi
            )));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, t: f64) -> bool {
        self.lo <= t && t <= self.hi
    }

    /// `n` evenly spaced samples including both ends.
    pub fn linspace(&self, n: usize) -> Vec<f64> {
        let w = self.hi - self.lo;
        let mut ts: Vec<f64> = (0..n)
            .map(|k| self.lo + w * (k as f64 / (n - 1) as f64))
            .collect();
        if let Some(last) = ts.last_mut() {
            *last = self.hi;
        }
        ts
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScanKind {
    Linear,
    Interpolation,
    Piecewise,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scan1DResult {
    pub ts: Vec<f64>,
    pub values: Vec<f64>,
    pub origin: ParameterVector,
    pub direction: Direction,
    pub kind: ScanKind,
}

impl Scan1DResult {
    pub fn len(&self) -> usize {
        self.ts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ts.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Sample indices of strict local minima of the sampled profile.
    pub fn local_minima(&self) -> Vec<usize> {
        (1..self.values.len().saturating_sub(1))
            .filter(|&k| self.values[k] < self.values[k - 1] && self.values[k] < self.values[k + 1])
            .collect()
    }
}

/// How grid cells map back to parameter space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum PlaneKind {
    /// `origin + (t1 * dir_x + t2 * dir_y)`.
    Linear,
    /// `(1 - t1) * origin + t1 * end + t2 * dir_y`, with `dir_y` rescaled to
    /// the norm of `end - origin`.
    Interpolation { end: ParameterVector },
    /// Plane spanned by the two leading principal components around the
    /// data mean.
    Pca,
}

/// Ranges and resolutions of a 2D scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub range_x: Interval,
    pub range_y: Interval,
    pub resolution_x: usize,
    pub resolution_y: usize,
}

impl GridSpec {
    pub fn new(range_x: Interval, range_y: Interval, resolution_x: usize, resolution_y: usize) -> Self {
        Self {
            range_x,
            range_y,
            resolution_x,
            resolution_y,
        }
    }

    pub fn square(range: Interval, resolution: usize) -> Self {
        Self::new(range, range, resolution, resolution)
    }

    pub fn cells(&self) -> usize {
        self.resolution_x * self.resolution_y
    }

    pub fn transposed(&self) -> Self {
        Self::new(self.range_y, self.range_x, self.resolution_y, self.resolution_x)
    }

    fn validate(&self) -> Result<()> {
        self.range_x.validate()?;
        self.range_y.validate()?;
        if self.resolution_x < 2 || self.resolution_y < 2 {
            return Err(Error::usage(format!(
                "2D scan resolutions must be >= 2, got {}x{}",
                self.resolution_x, self.resolution_y
            )));
        }
        Ok(())
    }
}

/// Loss values over a plane.
///
/// `values` is row-major with the first index running over `ts_x`: cell
/// `(i, j)` sits at `values[i * resolution_y + j]` and holds the loss at
/// `(ts_x[i], ts_y[j])`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scan2DResult {
    pub values: Vec<f64>,
    pub ts_x: Vec<f64>,
    pub ts_y: Vec<f64>,
    pub origin: ParameterVector,
    pub dir_x: Direction,
    pub dir_y: Direction,
    pub grid: GridSpec,
    pub kind: PlaneKind,
}

impl Scan2DResult {
    pub fn resolution_x(&self) -> usize {
        self.grid.resolution_x
    }

    pub fn resolution_y(&self) -> usize {
        self.grid.resolution_y
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.grid.resolution_y + j]
    }

    pub fn point_at(&self, i: usize, j: usize) -> Vec<f64> {
        plane_point(
            &self.kind,
            self.origin.as_slice(),
            self.dir_x.as_slice(),
            self.dir_y.as_slice(),
            self.ts_x[i],
            self.ts_y[j],
        )
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Grid index `(i, j)` of the smallest value (first one on ties).
    pub fn argmin(&self) -> (usize, usize) {
        let k = self
            .values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (k, &v)| if v < acc.1 { (k, v) } else { acc })
            .0;
        (k / self.grid.resolution_y, k % self.grid.resolution_y)
    }

    /// The `j` column at fixed `ts_y[j]`, as a function of `ts_x`.
    pub fn column_y(&self, j: usize) -> Vec<f64> {
        (0..self.grid.resolution_x).map(|i| self.value(i, j)).collect()
    }

    /// The same grid with the roles of the two axes exchanged.
    pub fn transposed(&self) -> Scan2DResult {
        let (rx, ry) = (self.grid.resolution_x, self.grid.resolution_y);
        let mut values = Vec::with_capacity(self.values.len());
        for j in 0..ry {
            for i in 0..rx {
                values.push(self.value(i, j));
            }
        }
        Scan2DResult {
            values,
            ts_x: self.ts_y.clone(),
            ts_y: self.ts_x.clone(),
            origin: self.origin.clone(),
            dir_x: self.dir_y.clone(),
            dir_y: self.dir_x.clone(),
            grid: self.grid.transposed(),
            kind: self.kind.clone(),
        }
    }
}

fn plane_point(kind: &PlaneKind, origin: &[f64], dx: &[f64], dy: &[f64], t1: f64, t2: f64) -> Vec<f64> {
    match kind {
        PlaneKind::Interpolation { end } => lerp(origin, end.as_slice(), t1)
            .into_iter()
            .zip(dy)
            .map(|(p, y)| p + t2 * y)
            .collect(),
        PlaneKind::Linear | PlaneKind::Pca => origin
            .iter()
            .zip(dx.iter().zip(dy))
            .map(|(o, (x, y))| o + (t1 * x + t2 * y))
            .collect(),
    }
}

fn check_dims(model: &LossModel, v: &[f64], what: &str) -> Result<()> {
    if v.len() != model.dimension() {
        return Err(Error::usage(format!(
            "{what} has dimension {}, model expects {}",
            v.len(),
            model.dimension()
        )));
    }
    Ok(())
}

fn check_n_points(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::usage(format!("1D scan needs n_points >= 2, got {n}")));
    }
    Ok(())
}

/// `f(t) = L(origin + t * direction)` on `n_points` samples of `range`.
pub fn scan_1d_linear(
    model: &LossModel,
    origin: &ParameterVector,
    direction: &Direction,
    range: Interval,
    n_points: usize,
) -> Result<Scan1DResult> {
    range.validate()?;
    check_n_points(n_points)?;
    check_dims(model, origin.as_slice(), "origin")?;
    check_dims(model, direction.as_slice(), "direction")?;
    let ts = range.linspace(n_points);
    let points: Vec<Vec<f64>> = ts
        .iter()
        .map(|&t| {
            origin
                .iter()
                .zip(direction.as_slice())
                .map(|(o, d)| o + t * d)
                .collect()
        })
        .collect();
    let values = model.evaluate_many(&points)?;
    Ok(Scan1DResult {
        ts,
        values,
        origin: origin.clone(),
        direction: direction.clone(),
        kind: ScanKind::Linear,
    })
}

fn difference_direction(a: &ParameterVector, b: &ParameterVector) -> Result<Direction> {
    a.check_same_dimension(b)?;
    let d = b.sub(a)?;
    if d.norm() < 1e-12 {
        return Err(Error::usage("interpolation endpoints coincide"));
    }
    Direction::new(d)
}

/// `f(t) = L((1 - t) * a + t * b)`; exact at `t = 0` and `t = 1`.
pub fn scan_1d_interpolation(
    model: &LossModel,
    point_a: &ParameterVector,
    point_b: &ParameterVector,
    range: Interval,
    n_points: usize,
) -> Result<Scan1DResult> {
    range.validate()?;
    check_n_points(n_points)?;
    let direction = difference_direction(point_a, point_b)?;
    check_dims(model, point_a.as_slice(), "interpolation endpoint")?;
    let ts = range.linspace(n_points);
    let points: Vec<Vec<f64>> = ts
        .iter()
        .map(|&t| lerp(point_a.as_slice(), point_b.as_slice(), t))
        .collect();
    let values = model.evaluate_many(&points)?;
    Ok(Scan1DResult {
        ts,
        values,
        origin: point_a.clone(),
        direction,
        kind: ScanKind::Interpolation,
    })
}

pub(crate) fn scan_plane(
    model: &LossModel,
    origin: &ParameterVector,
    dir_x: &Direction,
    dir_y: &Direction,
    grid: GridSpec,
    kind: PlaneKind,
) -> Result<Scan2DResult> {
    grid.validate()?;
    check_dims(model, origin.as_slice(), "origin")?;
    check_dims(model, dir_x.as_slice(), "dir_x")?;
    check_dims(model, dir_y.as_slice(), "dir_y")?;
    if dir_x.cosine(dir_y).abs() >= 1.0 - 1e-9 {
        return Err(Error::usage("scan directions are parallel"));
    }
    let ts_x = grid.range_x.linspace(grid.resolution_x);
    let ts_y = grid.range_y.linspace(grid.resolution_y);
    let mut points = Vec::with_capacity(grid.cells());
    for &t1 in &ts_x {
        for &t2 in &ts_y {
            points.push(plane_point(
                &kind,
                origin.as_slice(),
                dir_x.as_slice(),
                dir_y.as_slice(),
                t1,
                t2,
            ));
        }
    }
    let values = model.evaluate_many(&points)?;
    Ok(Scan2DResult {
        values,
        ts_x,
        ts_y,
        origin: origin.clone(),
        dir_x: dir_x.clone(),
        dir_y: dir_y.clone(),
        grid,
        kind,
    })
}

/// `f(t1, t2) = L(origin + t1 * dir_x + t2 * dir_y)` on a regular grid.
pub fn scan_2d(
    model: &LossModel,
    origin: &ParameterVector,
    dir_x: &Direction,
    dir_y: &Direction,
    grid: GridSpec,
) -> Result<Scan2DResult> {
    scan_plane(model, origin, dir_x, dir_y, grid, PlaneKind::Linear)
}

/// Plane through `a` and `b`: the first axis interpolates (`t1 = 0` at `a`,
/// `t1 = 1` at `b`), the second is a random direction orthogonal to
/// `b - a` with the same norm.
pub fn scan_2d_interpolation(
    model: &LossModel,
    point_a: &ParameterVector,
    point_b: &ParameterVector,
    seed: u64,
    grid: GridSpec,
) -> Result<Scan2DResult> {
    let dir_x = difference_direction(point_a, point_b)?;
    let dir_y = orthonormal_complement(&dir_x, seed)?.scaled_to(dir_x.norm());
    scan_plane(
        model,
        point_a,
        &dir_x,
        &dir_y,
        grid,
        PlaneKind::Interpolation {
            end: point_b.clone(),
        },
    )
}
