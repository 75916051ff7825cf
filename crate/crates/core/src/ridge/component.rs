use serde::Serialize;

use super::{RidgeMethod, RidgeSet};
use crate::error::{Result, TrpcaError};
use crate::geometry::{torus_dist, Coord, TorusPoint};
use crate::scalar::{lit, Real};

/// Ridge component through the location, ordered along the index coordinate
/// starting at `mu`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnectedRidge<T> {
    pub ordered_points: Vec<TorusPoint<T>>,
    pub mu: TorusPoint<T>,
    /// Quadrant restriction used when chaining: −1, 0 (none) or +1.
    pub quadrant_sign: i8,
    pub index_coord: Coord,
    /// The full line was imposed where the solved ridge only covers part of it.
    pub extended: bool,
    pub method: RidgeMethod,
}

impl<T: Real> ConnectedRidge<T> {
    pub fn len(&self) -> usize {
        self.ordered_points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ordered_points.is_empty()
    }
}

fn on_axis<T: Real>(x: T) -> bool {
    let eps = lit::<T>(1e-9);
    x.abs() < eps || x.abs() > T::PI() - eps
}

pub(crate) fn in_quadrant<T: Real>(rel: &TorusPoint<T>, sign: i8) -> bool {
    if sign == 0 || on_axis(rel.theta1()) || on_axis(rel.theta2()) {
        return true;
    }
    let positive = (rel.theta1() > T::zero()) == (rel.theta2() > T::zero());
    positive == (sign > 0)
}

/// Greedy chaining of ridge points from `mu`: the nearest unused point within
/// `delta` of the current end is appended until none is left, once in each
/// direction; turns are penalized and reversals skipped. With
/// `dependence_sign ≠ 0` only points in the matching pair of quadrants around
/// `mu` (or on its axes) are eligible.
pub fn connected_component<T: Real>(
    ridge: &RidgeSet<T>,
    mu: TorusPoint<T>,
    dependence_sign: i8,
    delta: T,
) -> Result<ConnectedRidge<T>> {
    if !(delta > T::zero()) {
        return Err(TrpcaError::InvalidArgument("chaining radius must be positive".into()));
    }
    if !(-1..=1).contains(&dependence_sign) {
        return Err(TrpcaError::InvalidArgument(format!("dependence sign must be -1, 0 or 1, got {dependence_sign}")));
    }
    let index_coord = ridge.index_coord.unwrap_or(Coord::First);
    let pool: Vec<TorusPoint<T>> = ridge
        .points
        .iter()
        .filter(|p| in_quadrant(&p.relative_to(&mu), dependence_sign))
        .copied()
        .collect();
    let mut used = vec![false; pool.len()];

    // Displacement `b − a` taken the short way round.
    let step = |a: &TorusPoint<T>, b: &TorusPoint<T>| {
        let r = b.relative_to(a);
        [r.theta1(), r.theta2()]
    };
    // Nearest unused point within `delta`; once a heading is known, points
    // behind it are skipped and turns are penalized so the chain keeps to its
    // branch where ridge branches cross.
    let next = |from: &TorusPoint<T>, heading: Option<[T; 2]>, used: &[bool]| -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for (i, q) in pool.iter().enumerate() {
            if used[i] {
                continue;
            }
            let d = torus_dist(from, q);
            if d > delta {
                continue;
            }
            let score = match heading {
                Some(h) if d > T::zero() => {
                    let s = step(from, q);
                    let cos = (s[0] * h[0] + s[1] * h[1]) / d;
                    if cos < T::zero() {
                        continue;
                    }
                    d * (lit::<T>(2.0) - cos)
                }
                _ => d,
            };
            if best.map_or(true, |(_, b)| score < b) {
                best = Some((i, score));
            }
        }
        best.map(|b| b.0)
    };

    if !pool.iter().any(|q| torus_dist(&mu, q) <= delta) {
        return Err(TrpcaError::SeedNotFound { delta: delta.to_f64_lossy() });
    }
    // Points coinciding with the location are represented by `mu` itself.
    let tiny = lit::<T>(1e-12);
    for (i, q) in pool.iter().enumerate() {
        if torus_dist(&mu, q) < tiny {
            used[i] = true;
        }
    }
    let mut chain = Vec::new();
    let mut first_heading: Option<[T; 2]> = None;
    for direction in 0..2 {
        let mut end = mu;
        // The second pass leaves μ opposite to the first one.
        let mut heading = if direction == 0 { None } else { first_heading.map(|h| [-h[0], -h[1]]) };
        while let Some(i) = next(&end, heading, &used) {
            used[i] = true;
            let s = step(&end, &pool[i]);
            let n = s[0].hypot(s[1]);
            if n > T::zero() {
                heading = Some([s[0] / n, s[1] / n]);
                if direction == 0 && first_heading.is_none() {
                    first_heading = heading;
                }
            }
            end = pool[i];
            chain.push(end);
        }
    }

    let j = index_coord;
    let key = |p: &TorusPoint<T>| {
        let r = (p.get(j) - mu.get(j)) % T::two_pi();
        if r < T::zero() {
            r + T::two_pi()
        } else {
            r
        }
    };
    chain.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap_or(std::cmp::Ordering::Equal));
    let mut ordered_points = Vec::with_capacity(chain.len() + 1);
    ordered_points.push(mu);
    ordered_points.extend(chain);
    Ok(ConnectedRidge {
        ordered_points,
        mu,
        quadrant_sign: dependence_sign,
        index_coord,
        extended: false,
        method: ridge.method,
    })
}
