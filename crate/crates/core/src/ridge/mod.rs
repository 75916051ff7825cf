//! Density ridges of bivariate densities.
//!
//! A point is on the ridge when the gradient is orthogonal to the second
//! Hessian eigenvector and the second eigenvalue is negative. Two solvers are
//! provided: a column scan of the implicit ridge equation ([`ridge_implicit`])
//! and the normalized projected-gradient flow ([`ridge_euler`]). The ridge
//! component through the location is extracted by [`connected_component`], or
//! written down directly for the limit cases by [`explicit_edge_ridge`].

mod component;
mod edge;
mod eig;
mod euler;
mod implicit;
mod oracle;

pub use component::{connected_component, ConnectedRidge};
pub use edge::{explicit_edge_ridge, EdgeCase, EDGE_RIDGE_POINTS};
pub use eig::{eigenvalue_condition, hessian_eig2, implicit_expr, projected_gradient, Eigen2};
pub use euler::{ridge_euler, EulerConfig};
pub use implicit::{ridge_implicit, ImplicitConfig};
pub use oracle::{DensityOracle, Domain, PlanarGaussian};

use serde::{Deserialize, Serialize};

use crate::geometry::{torus_dist, Coord, TorusPoint};
use crate::scalar::Real;

/// How a set of ridge points was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RidgeMethod {
    Implicit,
    Euler,
    ExplicitEdgeCase,
}

/// Unordered ridge points with the magnitude of the implicit expression at each.
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeSet<T> {
    pub points: Vec<TorusPoint<T>>,
    pub residuals: Vec<T>,
    pub method: RidgeMethod,
    /// Coordinate held fixed along each scan column (implicit method only).
    pub index_coord: Option<Coord>,
    /// Euler starts dropped for not converging or failing the eigenvalue condition.
    pub dropped_starts: usize,
}

impl<T: Real> RidgeSet<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Directed Hausdorff distance `sup_{a∈A} inf_{b∈B} d(a, b)` under the torus metric.
pub fn directed_hausdorff<T: Real>(a: &[TorusPoint<T>], b: &[TorusPoint<T>]) -> T {
    a.iter()
        .map(|p| b.iter().map(|q| torus_dist(p, q)).fold(T::infinity(), T::min))
        .fold(T::zero(), T::max)
}

/// Symmetric Hausdorff distance under the torus metric.
pub fn hausdorff<T: Real>(a: &[TorusPoint<T>], b: &[TorusPoint<T>]) -> T {
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}

/// Ridge scanning defaults.
pub mod defaults {
    pub const GRID_N: usize = 500;
    pub const TOL: f64 = 1e-10;
    pub const EULER_STEP: f64 = 0.2;
    pub const EULER_CONV_TOL: f64 = 1e-5;
    pub const EULER_MAX_ITER: usize = 10_000;
    /// Chaining radius in grid steps.
    pub const DELTA_STEPS: f64 = 3.0;

    pub fn delta(grid_n: usize) -> f64 {
        DELTA_STEPS * std::f64::consts::TAU / grid_n as f64
    }
}
