use rayon::prelude::*;

use super::defaults;
use super::eig::{eigenvalue_condition, hessian_eig2, implicit_expr};
use super::oracle::{DensityOracle, Domain};
use super::{RidgeMethod, RidgeSet};
use crate::error::{Result, TrpcaError};
use crate::geometry::TorusPoint;
use crate::scalar::{lit, Real};

/// Largest displacement of a single step.
const MAX_MOVE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerConfig<T> {
    pub h: T,
    pub conv_tol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for EulerConfig<T> {
    fn default() -> Self {
        EulerConfig {
            h: lit(defaults::EULER_STEP),
            conv_tol: lit(defaults::EULER_CONV_TOL),
            max_iter: defaults::EULER_MAX_ITER,
        }
    }
}

/// Ridge points as end points of the normalized projected-gradient flow
/// `x ← x + h u2 u2' ∇f / f`.
///
/// Steps are safeguarded: never longer than the inverse curvature along `u2`
/// (the one-dimensional Newton step) or than a fixed displacement, and the
/// step of a trajectory is halved whenever the flow direction reverses.
pub fn ridge_euler<T: Real, O: DensityOracle<T> + ?Sized>(
    oracle: &O,
    starts: &[TorusPoint<T>],
    config: &EulerConfig<T>,
) -> Result<RidgeSet<T>> {
    if starts.is_empty() {
        return Err(TrpcaError::InvalidArgument("no starting points".into()));
    }
    if !(config.h > T::zero()) || !(config.conv_tol > T::zero()) {
        return Err(TrpcaError::InvalidArgument("step and tolerance must be positive".into()));
    }
    let domain = oracle.domain();
    let ends: Vec<Option<TorusPoint<T>>> = starts.par_iter().map(|s| trajectory(oracle, *s, config, domain)).collect();
    let attempted = starts.len();
    let mut points = Vec::new();
    let mut residuals = Vec::new();
    let mut converged = 0;
    for p in ends.into_iter().flatten() {
        converged += 1;
        let d = oracle.evaluate(&p);
        // Small steps also occur next to critical points, where the gradient
        // vanishes in every direction; an end point must have its gradient
        // along the first eigenvector.
        if eigenvalue_condition(&d) && aligned(&d) {
            residuals.push(implicit_expr(&d).abs());
            points.push(p);
        }
    }
    if converged == 0 {
        return Err(TrpcaError::EulerNotConverged { attempted });
    }
    Ok(RidgeSet {
        dropped_starts: attempted - points.len(),
        points,
        residuals,
        method: RidgeMethod::Euler,
        index_coord: None,
    })
}

/// Largest `|∇f · u2| / |∇f|` at an accepted end point.
const END_ALIGNMENT: f64 = 1e-2;

fn aligned<T: Real>(d: &crate::models::DensityDerivatives<T>) -> bool {
    let e = hessian_eig2(d.u, d.v, d.w);
    !e.degenerate && (d.d1 * e.u2[0] + d.d2 * e.u2[1]).abs() <= lit::<T>(END_ALIGNMENT) * d.d1.hypot(d.d2)
}

/// Flow direction and the curvature `λ2 / f` along it.
fn flow<T: Real, O: DensityOracle<T> + ?Sized>(oracle: &O, x: &TorusPoint<T>) -> Option<([T; 2], T)> {
    let d = oracle.evaluate(x);
    let e = hessian_eig2(d.u, d.v, d.w);
    if e.degenerate || !(d.f > T::zero()) {
        return None;
    }
    let factor = d.scale / d.f;
    let dot = (d.d1 * e.u2[0] + d.d2 * e.u2[1]) * factor;
    Some(([dot * e.u2[0], dot * e.u2[1]], e.lambda2 * factor))
}

fn trajectory<T: Real, O: DensityOracle<T> + ?Sized>(
    oracle: &O,
    start: TorusPoint<T>,
    config: &EulerConfig<T>,
    domain: Domain<T>,
) -> Option<TorusPoint<T>> {
    let mut x = start;
    let mut h = config.h;
    let min_h = config.h * lit(1e-6);
    let max_move = lit::<T>(MAX_MOVE);
    let mut prev: Option<[T; 2]> = None;
    for _ in 0..config.max_iter {
        let (eta, curvature) = flow(oracle, &x)?;
        let norm = eta[0].hypot(eta[1]);
        if norm < config.conv_tol {
            return Some(x);
        }
        if let Some(p) = prev {
            if p[0] * eta[0] + p[1] * eta[1] < T::zero() && h > min_h {
                h = h / lit(2.0);
            }
        }
        prev = Some(eta);
        // Never step past the maximum of a concave profile along u2, and
        // never jump further than `MAX_MOVE`.
        let mut step = h;
        if curvature < T::zero() {
            step = step.min(-curvature.recip());
        }
        step = step.min(max_move / norm);
        x = match domain {
            Domain::Periodic => x.shifted(step * eta[0], step * eta[1]),
            Domain::Planar { lo, hi } => {
                let (a, b) = (x.theta1() + step * eta[0], x.theta2() + step * eta[1]);
                if a < lo[0] || a > hi[0] || b < lo[1] || b > hi[1] {
                    return None;
                }
                TorusPoint::new(a, b)
            }
        };
    }
    None
}
