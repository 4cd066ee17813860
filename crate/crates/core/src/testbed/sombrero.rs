//! The radially symmetric "sombrero" toy loss `1 - sin(ν‖θ‖) / (ν‖θ‖)`.
//!
//! Its minima form concentric shells around a narrow global minimum at the
//! origin, separated by barrier shells.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::loss::{Loss, LossModel};

pub const DEFAULT_NU: f64 = 2.0;

#[derive(Debug, Clone, Copy)]
pub struct Sombrero {
    pub dimension: usize,
    pub nu: f64,
}

/// `1 - sin(x) / x`, accurate near zero.
pub fn radial_profile(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let x2 = x * x;
        x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0 * (1.0 - x2 / 110.0))))
    } else {
        1.0 - x.sin() / x
    }
}

/// Derivative of `sin(x) / x`.
fn sinc_derivative(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let x2 = x * x;
        -x / 3.0 * (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0 * (1.0 - x2 / 54.0)))
    } else {
        (x * x.cos() - x.sin()) / (x * x)
    }
}

/// Root of `x cos x - sin x` in `[lo, hi]`, where it changes sign.
fn stationary_point(lo: f64, hi: f64) -> f64 {
    let g = |x: f64| x * x.cos() - x.sin();
    let (mut a, mut b) = (lo, hi);
    let ga = g(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b {
            break;
        }
        if (g(m) > 0.0) == (ga > 0.0) {
            a = m;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

impl Sombrero {
    pub fn new(dimension: usize, nu: f64) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::usage("sombrero dimension must be >= 1"));
        }
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::usage(format!("nu must be positive, got {nu}")));
        }
        Ok(Self { dimension, nu })
    }

    pub fn radial(&self, r: f64) -> f64 {
        radial_profile(self.nu * r)
    }

    /// Radius of the `k`-th ring of local minima (`k >= 1`).
    pub fn ring_radius(&self, k: usize) -> f64 {
        let base = 2.0 * k as f64 * PI;
        stationary_point(base, base + PI / 2.0) / self.nu
    }

    /// Radius of the `k`-th barrier shell (`k >= 1`); the first one
    /// separates the global minimum from the first ring.
    pub fn barrier_radius(&self, k: usize) -> f64 {
        let base = (2 * k - 1) as f64 * PI;
        stationary_point(base, base + PI / 2.0) / self.nu
    }

    pub fn into_model(self) -> LossModel {
        LossModel::new(self)
    }
}

pub fn sombrero_loss(dimension: usize, nu: f64) -> Result<LossModel> {
    Ok(Sombrero::new(dimension, nu)?.into_model())
}

impl Loss for Sombrero {
    fn dimension(&self) -> usize {
        self.dimension
    }

    fn value(&self, theta: &[f64], _call: u64) -> f64 {
        let r = theta.iter().map(|x| x * x).sum::<f64>().sqrt();
        self.radial(r)
    }

    fn analytic_gradient(&self, theta: &[f64]) -> Option<Vec<f64>> {
        let r = theta.iter().map(|x| x * x).sum::<f64>().sqrt();
        let x = self.nu * r;
        // dL/dθ = -ν sinc'(x) θ / r; sinc'(x)/x is smooth at 0
        let factor = if x.abs() < 0.1 {
            let x2 = x * x;
            self.nu * self.nu / 3.0 * (1.0 - x2 / 10.0 * (1.0 - x2 / 28.0 * (1.0 - x2 / 54.0)))
        } else {
            -self.nu * self.nu * sinc_derivative(x) / x
        };
        Some(theta.iter().map(|t| factor * t).collect())
    }

    fn label(&self) -> String {
        "sombrero".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn origin_and_symmetry() {
        let s = Sombrero::new(4, 2.0).unwrap();
        assert_eq!(s.value(&[0.0; 4], 0), 0.0);
        assert_eq!(s.value(&[1.3, 0.0, 0.0, 0.0], 0), s.value(&[0.0, 0.0, 0.0, 1.3], 0));
        assert!((s.value(&[PI / 2.0, 0.0, 0.0, 0.0], 0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn series_and_closed_form_agree() {
        for x in [0.05, 0.099, 0.1, 0.11] {
            let closed = 1.0 - f64::sin(x) / x;
            assert!((radial_profile(x) - closed).abs() < 1e-15);
            let d = (x * x.cos() - x.sin()) / (x * x);
            assert!((sinc_derivative(x) - d).abs() < 1e-14);
        }
    }

    #[test]
    fn ring_levels() {
        let s = Sombrero::new(4, 2.0).unwrap();
        let r1 = s.ring_radius(1);
        let r2 = s.ring_radius(2);
        assert!((r1 - 3.863).abs() < 1e-3 && (r2 - 7.033).abs() < 1e-3);
        assert!((s.radial(r1) - 0.8717).abs() < 5e-4);
        assert!((s.radial(r2) - 0.9289).abs() < 5e-4);
        assert!((s.radial(s.barrier_radius(1)) - 1.2172).abs() < 1e-4);
    }

    #[test]
    fn analytic_gradient_matches_differences() {
        let s = Sombrero::new(3, 2.0).unwrap();
        for p in [[0.01, -0.02, 0.03], [1.0, 2.0, -0.5], [0.0, 0.0, 0.0]] {
            let g = s.analytic_gradient(&p).unwrap();
            for i in 0..3 {
                let mut a = p;
                let mut b = p;
                a[i] += 1e-6;
                b[i] -= 1e-6;
                let fd = (s.value(&a, 0) - s.value(&b, 0)) / 2e-6;
                assert!((fd - g[i]).abs() < 1e-6, "{fd} vs {}", g[i]);
            }
        }
    }

    #[test]
    fn rejects_bad_nu() {
        assert!(Sombrero::new(2, 0.0).is_err());
        assert!(Sombrero::new(0, 2.0).is_err());
    }
}
