//! Direction vectors and periodic wrapping in parameter space.

use rand::Rng as _;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::param::{dot, norm, ParameterVector};
use crate::rng::{self, streams};

/// A nonzero direction in parameter space with its cached 2-norm.
///
/// Directions are not forced to unit length: scan ranges are measured in
/// multiples of the direction vector, so the norm sets the physical scale.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Direction {
    vector: ParameterVector,
    norm: f64,
}

impl Direction {
    pub fn new(vector: ParameterVector) -> Result<Self> {
        let n = vector.norm();
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::usage("direction vector must be nonzero"));
        }
        Ok(Self { vector, norm: n })
    }

    pub fn from_vec(coords: Vec<f64>) -> Result<Self> {
        Self::new(ParameterVector::new(coords)?)
    }

    pub fn vector(&self) -> &ParameterVector {
        &self.vector
    }

    pub fn as_slice(&self) -> &[f64] {
        self.vector.as_slice()
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn dimension(&self) -> usize {
        self.vector.dimension()
    }

    pub fn normalized(&self) -> Direction {
        self.scaled_to(1.0)
    }

    /// Same orientation, rescaled to the given norm.
    pub fn scaled_to(&self, target_norm: f64) -> Direction {
        let f = target_norm / self.norm;
        let v: Vec<f64> = self.as_slice().iter().map(|x| x * f).collect();
        Direction::from_vec(v).expect("rescaled direction stays finite and nonzero")
    }

    pub fn cosine(&self, other: &Direction) -> f64 {
        dot(self.as_slice(), other.as_slice()) / (self.norm * other.norm)
    }
}

/// Standard-normal draw normalized to unit length; deterministic per seed.
pub fn random_unit_direction(dimension: usize, seed: u64) -> Result<Direction> {
    if dimension == 0 {
        return Err(Error::usage("direction dimension must be >= 1"));
    }
    let mut rng = rng::stream(seed, streams::DIRECTION);
    loop {
        let v: Vec<f64> = (0..dimension).map(|_| rng.sample(StandardNormal)).collect();
        if norm(&v) > 0.0 {
            return Ok(Direction::from_vec(v)?.normalized());
        }
    }
}

const MAX_COMPLEMENT_ATTEMPTS: u64 = 16;

/// Random unit vector orthogonal to `base` (Gram-Schmidt on a normal draw).
pub fn orthonormal_complement(base: &Direction, seed: u64) -> Result<Direction> {
    let dim = base.dimension();
    if dim < 2 {
        return Err(Error::usage(
            "orthogonal complement needs dimension >= 2",
        ));
    }
    let unit = base.normalized();
    let u = unit.as_slice();
    for attempt in 0..MAX_COMPLEMENT_ATTEMPTS {
        let mut rng = rng::substream(seed, streams::ORTHOGONAL, attempt);
        let mut v: Vec<f64> = (0..dim).map(|_| rng.sample(StandardNormal)).collect();
        let raw = norm(&v);
        // Two Gram-Schmidt passes keep the residual dot product at round-off.
        for _ in 0..2 {
            let d = dot(&v, u);
            v.iter_mut().zip(u).for_each(|(x, ui)| *x -= d * ui);
        }
        let rest = norm(&v);
        if rest > 1e-6 * raw {
            v.iter_mut().for_each(|x| *x /= rest);
            return Direction::from_vec(v);
        }
    }
    Err(Error::numerical(format!(
        "no orthogonal draw after {MAX_COMPLEMENT_ATTEMPTS} attempts"
    )))
}

fn check_period(period: f64) -> Result<()> {
    if !(period > 0.0 && period.is_finite()) {
        return Err(Error::usage(format!("period must be positive, got {period}")));
    }
    Ok(())
}

/// Whole periods to subtract from `target` so it lands in
/// `[reference - period/2, reference + period/2)`.
fn period_shift(reference: f64, target: f64, period: f64) -> f64 {
    ((target - reference) / period + 0.5).floor()
}

/// Closest period-shifted copy of `target` relative to `reference`.
///
/// Each coordinate of the result is congruent to the target coordinate
/// modulo `period` and lies in `[r - period/2, r + period/2)`, so an exact
/// half-period offset resolves to the negative side.
pub fn relative_periodic_wrap(
    reference: &ParameterVector,
    target: &ParameterVector,
    period: f64,
) -> Result<ParameterVector> {
    check_period(period)?;
    reference.check_same_dimension(target)?;
    let out = reference
        .iter()
        .zip(target.iter())
        .map(|(&r, &t)| {
            let k = period_shift(r, t, period);
            if k == 0.0 {
                t
            } else {
                t - k * period
            }
        })
        .collect();
    ParameterVector::new(out)
}

/// Wraps a whole path so it stays continuous across period boundaries.
///
/// Point 0 is wrapped relative to `reference`; every later point relative
/// to the wrapped image of its predecessor.
pub fn wrap_trajectory(
    reference: &ParameterVector,
    trajectory: &[ParameterVector],
    period: f64,
) -> Result<Vec<ParameterVector>> {
    check_period(period)?;
    let mut out: Vec<ParameterVector> = Vec::with_capacity(trajectory.len());
    for point in trajectory {
        let anchor = out.last().unwrap_or(reference);
        out.push(relative_periodic_wrap(anchor, point, period)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn pv(v: &[f64]) -> ParameterVector {
        ParameterVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn unit_direction_basics() {
        let d = random_unit_direction(1, 3).unwrap();
        assert_eq!(d.as_slice()[0].abs(), 1.0);
        assert_eq!(
            random_unit_direction(4, 7).unwrap(),
            random_unit_direction(4, 7).unwrap()
        );
        assert!(random_unit_direction(0, 1).is_err());
        let d = random_unit_direction(50, 11).unwrap();
        assert!((d.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn random_directions_nearly_orthogonal_in_high_dimension() {
        let dirs: Vec<Direction> = (0..1000)
            .map(|s| random_unit_direction(100, s).unwrap())
            .collect();
        // Average over consecutive pairs; E|cos| ~ sqrt(2/(pi*100)) ~ 0.08.
        let mean: f64 = dirs
            .windows(2)
            .map(|w| w[0].cosine(&w[1]).abs())
            .sum::<f64>()
            / 999.0;
        assert!(mean < 0.2, "mean |cos| = {mean}");
    }

    #[test]
    fn complement_in_two_dimensions() {
        let base = Direction::from_vec(vec![1.0, 0.0]).unwrap();
        for seed in 0..10 {
            let c = orthonormal_complement(&base, seed).unwrap();
            assert!(c.as_slice()[0].abs() < 1e-12);
            assert!((c.as_slice()[1].abs() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn complement_first_axis_4d() {
        let base = Direction::from_vec(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let c = orthonormal_complement(&base, 5).unwrap();
        assert!(c.as_slice()[0].abs() < 1e-10);
        assert!((c.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn complement_orthogonal_for_random_bases() {
        for s in 0..100 {
            let base = random_unit_direction(10, 1000 + s)
                .unwrap()
                .scaled_to(0.5 + s as f64);
            let c = orthonormal_complement(&base, s).unwrap();
            assert!(dot(base.as_slice(), c.as_slice()).abs() < 1e-10);
        }
    }

    #[test]
    fn complement_rejects_dimension_one() {
        let base = Direction::from_vec(vec![2.0]).unwrap();
        assert!(orthonormal_complement(&base, 0).unwrap_err().is_usage());
    }

    #[test]
    fn wrap_listing_example() {
        let r = pv(&[0.1, 1.2]);
        let t = pv(&[2.0 * PI - 0.1, 1.3]);
        let w = relative_periodic_wrap(&r, &t, 2.0 * PI).unwrap();
        assert!((w[0] + 0.1).abs() < 1e-12);
        assert_eq!(w[1], 1.3);
    }

    #[test]
    fn wrap_modular_arithmetic() {
        let w = relative_periodic_wrap(&pv(&[0.0]), &pv(&[7.0]), 2.0 * PI).unwrap();
        assert!((w[0] - (7.0 - 2.0 * PI)).abs() < 1e-15);
        assert!((w[0] - 0.7168).abs() < 1e-4);
        let same = relative_periodic_wrap(&pv(&[0.0, 1.0]), &pv(&[1.0, -1.0]), 2.0 * PI).unwrap();
        assert_eq!(same, pv(&[1.0, -1.0]));
    }

    #[test]
    fn wrap_ties_go_negative() {
        let w = relative_periodic_wrap(&pv(&[0.0]), &pv(&[2.0]), 4.0).unwrap();
        assert_eq!(w[0], -2.0);
        let w = relative_periodic_wrap(&pv(&[0.0]), &pv(&[-2.0]), 4.0).unwrap();
        assert_eq!(w[0], -2.0);
    }

    #[test]
    fn wrap_rejects_bad_period() {
        assert!(relative_periodic_wrap(&pv(&[0.0]), &pv(&[1.0]), 0.0).is_err());
        assert!(relative_periodic_wrap(&pv(&[0.0]), &pv(&[1.0]), -1.0).is_err());
    }

    #[test]
    fn trajectory_walk_has_no_jump() {
        let steps: Vec<ParameterVector> = (0..=12).map(|k| pv(&[k as f64 * PI / 4.0])).collect();
        // Feed the walk reduced mod 2pi, as a periodic optimizer might emit it.
        let reduced: Vec<ParameterVector> = steps
            .iter()
            .map(|p| pv(&[p[0].rem_euclid(2.0 * PI)]))
            .collect();
        let out = wrap_trajectory(&pv(&[0.0]), &reduced, 2.0 * PI).unwrap();
        for w in out.windows(2) {
            assert!((w[1][0] - w[0][0] - PI / 4.0).abs() < 1e-12);
        }
        assert!((out[12][0] - 3.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn trajectory_inside_cell_unchanged_and_single_point() {
        let traj = vec![pv(&[0.1, 0.2]), pv(&[0.3, -0.2]), pv(&[1.0, 0.5])];
        let out = wrap_trajectory(&pv(&[0.0, 0.0]), &traj, 2.0 * PI).unwrap();
        assert_eq!(out, traj);
        let single = vec![pv(&[7.0, -4.0])];
        let r = pv(&[0.0, 0.0]);
        assert_eq!(
            wrap_trajectory(&r, &single, 2.0 * PI).unwrap()[0],
            relative_periodic_wrap(&r, &single[0], 2.0 * PI).unwrap()
        );
    }

    fn max_step(path: &[ParameterVector]) -> f64 {
        path.windows(2)
            .map(|w| w[0].distance(&w[1]))
            .fold(0.0, f64::max)
    }

    proptest! {
        #[test]
        fn wrap_is_idempotent(
            r in proptest::collection::vec(-20.0f64..20.0, 3),
            t in proptest::collection::vec(-50.0f64..50.0, 3),
            period in 0.5f64..10.0,
        ) {
            let r = pv(&r);
            let once = relative_periodic_wrap(&r, &pv(&t), period).unwrap();
            let twice = relative_periodic_wrap(&r, &once, period).unwrap();
            prop_assert_eq!(&once, &twice);
            for i in 0..3 {
                let off = once[i] - r[i];
                prop_assert!(off >= -period / 2.0 - 1e-9 && off < period / 2.0 + 1e-9);
                let k = (t[i] - once[i]) / period;
                prop_assert!((k - k.round()).abs() < 1e-9);
            }
        }

        #[test]
        fn wrapped_trajectory_steps_do_not_grow(
            pts in proptest::collection::vec(proptest::collection::vec(-30.0f64..30.0, 2), 2..12),
        ) {
            let traj: Vec<ParameterVector> = pts.iter().map(|p| pv(p)).collect();
            let out = wrap_trajectory(&pv(&[0.0, 0.0]), &traj, 2.0 * PI).unwrap();
            prop_assert!(max_step(&out) <= max_step(&traj) + 1e-9);
        }
    }
}
