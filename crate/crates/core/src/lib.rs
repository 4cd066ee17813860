//! Loss-landscape analysis for variational models.
//!
//! The crate evaluates a scalar loss over slices of parameter space (1D and
//! 2D scans, PCA planes of optimizer trajectories), measures local
//! curvature through Hessian spectra, and searches for low-loss paths
//! between minima with the nudged elastic band method. [`testbed`] supplies
//! the loss functions used to exercise all of this, from a radially
//! symmetric toy model to statevector-simulated quantum circuits.
//!
//! Grid scans, multi-start optimization and finite-difference stencils are
//! evaluated on the rayon pool when the `parallel` feature is on (the
//! default). Every random draw is keyed by a seed and a logical stream, so
//! parallel and sequential runs produce identical numbers.
//!
//! ```
//! use landscape_core::{scan_2d, GridSpec, Interval, ParameterVector, Direction};
//! use landscape_core::testbed::sombrero_loss;
//!
//! let model = sombrero_loss(4, 2.0).unwrap();
//! let origin = ParameterVector::zeros(4).unwrap();
//! let dx = Direction::from_vec(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
//! let dy = Direction::from_vec(vec![0.0, 1.0, 0.0, 0.0]).unwrap();
//! let grid = GridSpec::square(Interval::new(-10.0, 10.0).unwrap(), 21);
//! let scan = scan_2d(&model, &origin, &dx, &dy, grid).unwrap();
//! assert_eq!(scan.values.len(), 21 * 21);
//! assert_eq!(model.eval_count(), 441);
//! ```

pub mod error;
pub mod geometric;
pub mod gradient;
pub mod hessian;
pub mod linalg;
pub mod loss;
pub mod neb;
pub mod parallel;
pub mod param;
pub mod pca;
pub mod rng;
pub mod scans;
pub mod testbed;

pub use error::{Error, Result};
pub use geometric::{
    orthonormal_complement, random_unit_direction, relative_periodic_wrap, wrap_trajectory,
    Direction,
};
pub use gradient::{gradient, gradients, GradientEstimator, GradientScheme};
pub use hessian::{
    eigenvalue_ratio_scan, eigenvector_scans, exact_hessian, spectrum_statistics, spsa_hessian,
    EigenScan, HessianConfig, HessianResult,
};
pub use linalg::{jacobi_eigen, SymmetricEigen};
pub use loss::{BudgetReport, FnLoss, Loss, LossModel};
pub use neb::{
    chain_loss_profile, chain_tangents, init_chain, insertion_candidates, neb_step,
    redistribute_chain, run_auto_neb, run_neb, Chain, NebConfig,
};
pub use param::ParameterVector;
pub use pca::{
    fit_principal_frame, fit_principal_frame_trajectories, project, scan_pca_plane, PcaScan,
    PrincipalFrame,
};
pub use scans::{
    scan_1d_interpolation, scan_1d_linear, scan_2d, scan_2d_interpolation, GridSpec, Interval,
    PlaneKind, Scan1DResult, Scan2DResult, ScanKind,
};
