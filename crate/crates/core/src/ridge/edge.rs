use serde::{Deserialize, Serialize};

use super::component::ConnectedRidge;
use super::eig::eigenvalue_condition;
use super::RidgeMethod;
use crate::error::{Result, TrpcaError};
use crate::geometry::{Coord, TorusPoint};
use crate::models::ModelParams;
use crate::scalar::{lit, Real};

/// Points on an explicit edge-case ridge.
pub const EDGE_RIDGE_POINTS: usize = 512;

/// Closed-form ridges of the independent and homogeneous models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeCase {
    /// `θ2 = μ2` (no dependence, first coordinate less concentrated).
    AxisHorizontal,
    /// `θ1 = μ1` (no dependence, second coordinate less concentrated).
    AxisVertical,
    /// `θ2 − μ2 = θ1 − μ1` (equal concentrations, positive dependence).
    DiagonalPos,
    /// `θ2 − μ2 = −(θ1 − μ1)` (equal concentrations, negative dependence).
    DiagonalNeg,
}

impl EdgeCase {
    pub fn index_coord(self) -> Coord {
        match self {
            EdgeCase::AxisVertical => Coord::Second,
            _ => Coord::First,
        }
    }

    fn sign(self) -> i8 {
        match self {
            EdgeCase::AxisHorizontal | EdgeCase::AxisVertical => 0,
            EdgeCase::DiagonalPos => 1,
            EdgeCase::DiagonalNeg => -1,
        }
    }
}

/// The exact line through the location, sampled on a uniform grid starting at
/// the location. Diagonal cases always return the whole diagonal; `extended`
/// records whether the eigenvalue condition fails on part of it.
pub fn explicit_edge_ridge<T: Real>(params: &ModelParams<T>, case: EdgeCase) -> Result<ConnectedRidge<T>> {
    let oracle = params.ridge_oracle()?;
    let (c1, c2) = params.concentrations();
    let dep = params.dependence();
    let tiny = lit::<T>(1e-12);
    let consistent = match case {
        EdgeCase::AxisHorizontal | EdgeCase::AxisVertical => dep.abs() <= tiny,
        EdgeCase::DiagonalPos => (c1 - c2).abs() <= tiny * (T::one() + c1.abs()) && dep >= T::zero(),
        EdgeCase::DiagonalNeg => (c1 - c2).abs() <= tiny * (T::one() + c1.abs()) && dep <= T::zero(),
    };
    if !consistent {
        return Err(TrpcaError::InvalidArgument(format!(
            "{case:?} ridge requested for a model with concentrations ({c1}, {c2}) and dependence {dep}"
        )));
    }
    let mu = params.location();
    let step = T::two_pi() / T::from_usize_lossy(EDGE_RIDGE_POINTS);
    let points: Vec<TorusPoint<T>> = (0..EDGE_RIDGE_POINTS)
        .map(|k| {
            let t = step * T::from_usize_lossy(k);
            match case {
                EdgeCase::AxisHorizontal => mu.shifted(t, T::zero()),
                EdgeCase::AxisVertical => mu.shifted(T::zero(), t),
                EdgeCase::DiagonalPos => mu.shifted(t, t),
                EdgeCase::DiagonalNeg => mu.shifted(t, -t),
            }
        })
        .collect();
    let extended = matches!(case, EdgeCase::DiagonalPos | EdgeCase::DiagonalNeg)
        && points.iter().any(|p| !eigenvalue_condition(&oracle.evaluate(p)));
    Ok(ConnectedRidge {
        ordered_points: points,
        mu,
        quadrant_sign: case.sign(),
        index_coord: case.index_coord(),
        extended,
        method: RidgeMethod::ExplicitEdgeCase,
    })
}
