//! Closed-form test losses.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::loss::{Loss, LossModel};

/// `L(θ) = c`.
#[derive(Debug, Clone)]
pub struct Constant {
    pub dimension: usize,
    pub value: f64,
}

impl Loss for Constant {
    fn dimension(&self) -> usize {
        self.dimension
    }
    fn value(&self, _theta: &[f64], _call: u64) -> f64 {
        self.value
    }
    fn analytic_gradient(&self, _theta: &[f64]) -> Option<Vec<f64>> {
        Some(vec![0.0; self.dimension])
    }
    fn label(&self) -> String {
        "constant".into()
    }
}

pub fn constant_loss(dimension: usize, value: f64) -> Result<LossModel> {
    if dimension == 0 {
        return Err(Error::usage("dimension must be >= 1"));
    }
    Ok(LossModel::new(Constant { dimension, value }))
}

/// `L(θ) = ½ (θ - c)ᵀ H (θ - c)`, so the Hessian is exactly `H`.
#[derive(Debug, Clone)]
pub struct Quadratic {
    hessian: DMatrix<f64>,
    center: DVector<f64>,
}

impl Quadratic {
    pub fn new(hessian: DMatrix<f64>, center: Vec<f64>) -> Result<Self> {
        let n = hessian.nrows();
        if n == 0 || hessian.ncols() != n || center.len() != n {
            return Err(Error::usage("quadratic needs a square Hessian matching the center"));
        }
        if (&hessian - hessian.transpose()).amax() > 0.0 {
            return Err(Error::usage("quadratic Hessian must be symmetric"));
        }
        Ok(Self {
            hessian,
            center: DVector::from_vec(center),
        })
    }

    /// Axis-aligned bowl with the given curvatures, centered at the origin.
    pub fn diagonal(curvatures: &[f64]) -> Result<Self> {
        let n = curvatures.len();
        Self::new(
            DMatrix::from_diagonal(&DVector::from_column_slice(curvatures)),
            vec![0.0; n],
        )
    }

    pub fn hessian(&self) -> &DMatrix<f64> {
        &self.hessian
    }
}

impl Loss for Quadratic {
    fn dimension(&self) -> usize {
        self.center.len()
    }

    fn value(&self, theta: &[f64], _call: u64) -> f64 {
        let x = DVector::from_column_slice(theta) - &self.center;
        0.5 * x.dot(&(&self.hessian * &x))
    }

    fn analytic_gradient(&self, theta: &[f64]) -> Option<Vec<f64>> {
        let x = DVector::from_column_slice(theta) - &self.center;
        Some((&self.hessian * x).iter().copied().collect())
    }

    fn label(&self) -> String {
        "quadratic".into()
    }
}

/// `L(θ) = c · θ + offset`.
#[derive(Debug, Clone)]
pub struct Linear {
    pub coefficients: Vec<f64>,
    pub offset: f64,
}

impl Loss for Linear {
    fn dimension(&self) -> usize {
        self.coefficients.len()
    }
    fn value(&self, theta: &[f64], _call: u64) -> f64 {
        self.coefficients.iter().zip(theta).map(|(c, t)| c * t).sum::<f64>() + self.offset
    }
    fn analytic_gradient(&self, _theta: &[f64]) -> Option<Vec<f64>> {
        Some(self.coefficients.clone())
    }
    fn label(&self) -> String {
        "linear".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_value_and_gradient() {
        let q = Quadratic::diagonal(&[2.0, 4.0]).unwrap();
        assert_eq!(q.value(&[1.0, 1.0], 0), 3.0);
        assert_eq!(q.analytic_gradient(&[1.0, 1.0]).unwrap(), vec![2.0, 4.0]);
        let mut h = DMatrix::identity(2, 2);
        h[(0, 1)] = 0.5;
        assert!(Quadratic::new(h, vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn constant_model() {
        let m = constant_loss(4, 3.5).unwrap();
        assert_eq!(m.evaluate_slice(&[9.0, 1.0, -2.0, 0.0]).unwrap(), 3.5);
        assert!(constant_loss(0, 1.0).is_err());
    }
}
