//! Angles, the flat torus metric and intrinsic (Fréchet) summaries.
//!
//! Every angle handled by the crate lives in `[-π, π)`, with `-π` and `π`
//! identified. [`wrap`] is the single place where that convention is enforced.

use serde::{Deserialize, Serialize};

use crate::error::{Result, TrpcaError};
use crate::scalar::{lit, Real};

/// Wraps `x` onto `[-π, π)`: `(x + π) mod 2π - π`.
///
/// Non-finite input propagates as NaN; use [`cmod`] for a checked version.
#[inline]
pub fn wrap<T: Real>(x: T) -> T {
    let pi = T::PI();
    let y = (x + pi).rem_euclid(&T::two_pi()) - pi;
    // rem_euclid may round up to exactly 2π for tiny negative arguments
    if y >= pi {
        -pi
    } else {
        y
    }
}

/// Checked angle wrapping onto `[-π, π)`.
pub fn cmod<T: Real>(x: T) -> Result<Angle<T>> {
    Angle::new(x)
}

/// An angle in `[-π, π)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Angle<T>(T);

impl<T: Real> Angle<T> {
    pub fn new(x: T) -> Result<Self> {
        if !x.is_finite() {
            return Err(TrpcaError::Domain(format!("non-finite angle {x}")));
        }
        Ok(Angle(wrap(x)))
    }

    #[inline]
    pub fn value(self) -> T {
        self.0
    }
}

/// Which coordinate of a torus point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Coord {
    First,
    Second,
}

impl Coord {
    pub fn other(self) -> Coord {
        match self {
            Coord::First => Coord::Second,
            Coord::Second => Coord::First,
        }
    }

    /// 1-based index, as printed in reports.
    pub fn index(self) -> usize {
        match self {
            Coord::First => 1,
            Coord::Second => 2,
        }
    }
}

/// A point of the torus `[-π, π)²`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TorusPoint<T> {
    theta1: T,
    theta2: T,
}

impl<T: Real> TorusPoint<T> {
    /// Builds a point, wrapping both coordinates.
    #[inline]
    pub fn new(theta1: T, theta2: T) -> Self {
        TorusPoint {
            theta1: wrap(theta1),
            theta2: wrap(theta2),
        }
    }

    /// Checked constructor rejecting non-finite coordinates.
    pub fn try_new(theta1: T, theta2: T) -> Result<Self> {
        Ok(TorusPoint {
            theta1: Angle::new(theta1)?.value(),
            theta2: Angle::new(theta2)?.value(),
        })
    }

    /// Builds a point from an index-coordinate value and the other coordinate.
    #[inline]
    pub fn from_coords(index: Coord, index_value: T, other_value: T) -> Self {
        match index {
            Coord::First => TorusPoint::new(index_value, other_value),
            Coord::Second => TorusPoint::new(other_value, index_value),
        }
    }

    #[inline]
    pub fn theta1(&self) -> T {
        self.theta1
    }

    #[inline]
    pub fn theta2(&self) -> T {
        self.theta2
    }

    #[inline]
    pub fn get(&self, coord: Coord) -> T {
        match coord {
            Coord::First => self.theta1,
            Coord::Second => self.theta2,
        }
    }

    /// Coordinatewise wrapped difference `self - origin`.
    #[inline]
    pub fn relative_to(&self, origin: &TorusPoint<T>) -> TorusPoint<T> {
        TorusPoint::new(self.theta1 - origin.theta1, self.theta2 - origin.theta2)
    }

    /// Coordinatewise wrapped sum `self + shift`.
    #[inline]
    pub fn shifted(&self, d1: T, d2: T) -> TorusPoint<T> {
        TorusPoint::new(self.theta1 + d1, self.theta2 + d2)
    }

    pub fn cast<U: Real>(&self) -> TorusPoint<U> {
        TorusPoint::new(
            U::lit(self.theta1.to_f64_lossy()),
            U::lit(self.theta2.to_f64_lossy()),
        )
    }
}

/// Circular distance `min(|a-b|, 2π-|a-b|)` on one coordinate.
#[inline]
pub fn circ_dist<T: Real>(a: T, b: T) -> T {
    let d = (a - b).abs().rem_euclid(&T::two_pi());
    d.min(T::two_pi() - d)
}

/// Toroidal distance: Euclidean combination of the per-coordinate circular distances.
#[inline]
pub fn torus_dist<T: Real>(a: &TorusPoint<T>, b: &TorusPoint<T>) -> T {
    let d1 = circ_dist(a.theta1, b.theta1);
    let d2 = circ_dist(a.theta2, b.theta2);
    (d1 * d1 + d2 * d2).sqrt()
}

/// Mean direction and mean resultant length of a sample of angles.
pub fn mean_resultant<T: Real>(sample: &[T]) -> Result<(T, T)> {
    if sample.is_empty() {
        return Err(TrpcaError::InvalidArgument("empty sample".into()));
    }
    let n = T::from_usize_lossy(sample.len());
    let (s, c) = sample
        .iter()
        .fold((T::zero(), T::zero()), |(s, c), &x| (s + x.sin(), c + x.cos()));
    let (s, c) = (s / n, c / n);
    Ok((wrap(s.atan2(c)), s.hypot(c)))
}

/// Extrinsic circular mean `atan2(mean sin, mean cos)`.
pub fn circular_mean<T: Real>(sample: &[T]) -> Result<T> {
    let (mean, rbar) = mean_resultant(sample)?;
    if rbar <= lit(1e-12) {
        return Err(TrpcaError::UndefinedMean(rbar.to_f64_lossy()));
    }
    Ok(mean)
}

const FRECHET_GRID: usize = 1000;

/// Marginal Fréchet mean of a circular sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircularFrechet<T> {
    pub mean: T,
    /// Unnormalized: the minimized sum of squared circular distances.
    pub variance: T,
    /// Another local minimizer reached the same objective value.
    pub tie: bool,
}

fn frechet_objective<T: Real>(sample: &[T], phi: T) -> T {
    sample
        .iter()
        .map(|&x| {
            let d = circ_dist(phi, x);
            d * d
        })
        .sum()
}

pub(crate) fn golden_min<T: Real, F: Fn(T) -> T>(f: F, mut a: T, mut b: T, tol: T) -> (T, T) {
    let invphi = lit::<T>(0.618_033_988_749_894_8);
    let mut x1 = b - invphi * (b - a);
    let mut x2 = a + invphi * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut iter = 0;
    while (b - a).abs() > tol && iter < 200 {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
        iter += 1;
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}


/// Fréchet mean and variance of a sample on the circle.
///
/// Candidates are the sample values plus a uniform grid; every local minimum of
/// the candidate scan that could hold the global minimum is refined by golden
/// section. Ties within `1e-12` (relative) go to the smallest angle.
pub fn circular_frechet<T: Real>(sample: &[T]) -> Result<CircularFrechet<T>> {
    if sample.is_empty() {
        return Err(TrpcaError::InvalidArgument("empty sample".into()));
    }
    let two_pi = T::two_pi();
    let step = two_pi / T::from_usize_lossy(FRECHET_GRID);
    let mut candidates: Vec<T> = (0..FRECHET_GRID)
        .map(|k| -T::PI() + step * T::from_usize_lossy(k))
        .chain(sample.iter().map(|&x| wrap(x)))
        .collect();
    candidates.sort_by(|a, b| a.partial_cmp(b).expect("finite angles"));
    candidates.dedup();
    let values: Vec<T> = candidates
        .iter()
        .map(|&c| frechet_objective(sample, c))
        .collect();
    let best = values.iter().cloned().fold(T::infinity(), T::min);

    // Objective is Lipschitz with constant 2πn; neighbouring candidates are at most one grid step apart.
    let n = T::from_usize_lossy(sample.len());
    let slack = two_pi * n * step;
    let m = candidates.len();
    let mut refined: Vec<(T, T)> = Vec::new();
    for i in 0..m {
        let prev = values[(i + m - 1) % m];
        let next = values[(i + 1) % m];
        if values[i] <= prev && values[i] <= next && values[i] <= best + slack {
            let lo = candidates[(i + m - 1) % m];
            let hi = candidates[(i + 1) % m];
            let c = candidates[i];
            let lo = c - circ_dist(c, lo);
            let hi = c + circ_dist(c, hi);
            let (x, fx) = golden_min(|p| frechet_objective(sample, p), lo, hi, lit(1e-13));
            let (x, fx) = if fx <= values[i] { (wrap(x), fx) } else { (c, values[i]) };
            // The objective is quadratic between antipodes of the data, so one
            // Newton step lands on the exact minimizer of the current piece.
            let shift = sample.iter().map(|&y| wrap(y - x)).sum::<T>() / n;
            let xn = wrap(x + shift);
            let fxn = frechet_objective(sample, xn);
            let (x, fx) = if fxn <= fx + lit::<T>(1e-12) * fx { (xn, fxn.min(fx)) } else { (x, fx) };
            refined.push((x, fx));
        }
    }
    if refined.is_empty() {
        return Err(TrpcaError::Internal("Fréchet scan found no minimum".into()));
    }
    let fmin = refined.iter().map(|r| r.1).fold(T::infinity(), T::min);
    let tol = lit::<T>(1e-12) * fmin.abs().max(T::one());
    let mut winners: Vec<(T, T)> = refined
        .into_iter()
        .filter(|r| r.1 <= fmin + tol)
        .collect();
    winners.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
    // Collapse repeated hits of the same minimizer.
    winners.dedup_by(|a, b| circ_dist(a.0, b.0) < lit(1e-9));
    if winners.len() > 1 && circ_dist(winners[0].0, winners[winners.len() - 1].0) < lit(1e-9) {
        winners.pop();
    }
    let tie = winners.len() > 1;
    let (mean, _) = winners[0];
    Ok(CircularFrechet {
        mean,
        variance: frechet_objective(sample, mean),
        tie,
    })
}

/// Fréchet mean and variance of a sample on the torus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrechetSummary<T> {
    pub mean: TorusPoint<T>,
    pub total_variance: T,
    pub marginal_variances: [T; 2],
    /// The mean is not unique in at least one coordinate.
    pub tie: bool,
}

/// Toroidal Fréchet summary, computed coordinate by coordinate.
pub fn frechet_summary<T: Real>(sample: &[TorusPoint<T>]) -> Result<FrechetSummary<T>> {
    if sample.is_empty() {
        return Err(TrpcaError::InvalidArgument("empty sample".into()));
    }
    let first: Vec<T> = sample.iter().map(|p| p.theta1).collect();
    let second: Vec<T> = sample.iter().map(|p| p.theta2).collect();
    let m1 = circular_frechet(&first)?;
    let m2 = circular_frechet(&second)?;
    Ok(FrechetSummary {
        mean: TorusPoint::new(m1.mean, m2.mean),
        total_variance: m1.variance + m2.variance,
        marginal_variances: [m1.variance, m2.variance],
        tie: m1.tie || m2.tie,
    })
}
