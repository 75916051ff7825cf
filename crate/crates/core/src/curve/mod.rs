//! Fourier parametrization of a connected ridge and its scaled-centred
//! arc-length curve.
//!
//! A ridge through `μ` that is single-valued in the index coordinate `j` is
//! written as `r(φ) = cmod(μ_l + ρ(φ − μ_j) − ρ(0))` with
//! `ρ(θ) = atan2(S(θ), C(θ))`, `C` a truncated cosine series and `S` a
//! truncated sine series. [`arclength_param`] reindexes it by arc length and
//! rescales the length to `2π`, which gives the curve `r̃(α)` used for
//! projections and scores.

mod pchip;
mod quad;
mod table;

use std::io::{self, Write};

use serde::Serialize;

use crate::error::{Result, TrpcaError};
use crate::geometry::{circ_dist, torus_dist, wrap, Coord, TorusPoint};
use crate::ridge::ConnectedRidge;
use crate::scalar::{lit, Real};
use pchip::Pchip;
use quad::{adaptive_simpson, GaussRule};

/// Default truncation order.
pub const DEFAULT_FOURIER_M: usize = 15;
/// Nodes of the arc-length table.
pub const ARCLEN_NODES: usize = 1024;
/// Points of the projection scan (and rows of the exported table).
pub const CURVE_GRID: usize = 1024;

/// Gauss–Legendre nodes per interpolation interval for the coefficients.
const PANEL_NODES: usize = 8;
/// Relative distance gap under which two projections count as tied.
const PROJECTION_TIE: f64 = 1e-9;
const PROJECTION_TOL: f64 = 1e-8;

/// Truncated Fourier representation of a zero-centred ridge.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FourierRidge<T> {
    a: Vec<T>,
    b: Vec<T>,
    pub index_coord: Coord,
    pub mu: TorusPoint<T>,
    #[serde(skip)]
    rho0: T,
}

/// `C, S, C', S'` at one angle.
struct Series<T> {
    c: T,
    s: T,
    dc: T,
    ds: T,
}

impl<T: Real> FourierRidge<T> {
    pub fn new(a: Vec<T>, b: Vec<T>, index_coord: Coord, mu: TorusPoint<T>) -> Result<Self> {
        if a.len() < 2 || a.len() != b.len() {
            return Err(TrpcaError::InvalidArgument(format!(
                "need m + 1 ≥ 2 cosine and sine coefficients, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        if a.iter().chain(&b).any(|c| !c.is_finite()) {
            return Err(TrpcaError::Domain("non-finite Fourier coefficient".into()));
        }
        let mut b = b;
        b[0] = T::zero();
        let mut fr = FourierRidge { a, b, index_coord, mu, rho0: T::zero() };
        fr.rho0 = fr.rho(T::zero());
        Ok(fr)
    }

    /// Cosine coefficients `a_0..a_m`.
    pub fn a(&self) -> &[T] {
        &self.a
    }

    /// Sine coefficients `b_0..b_m`, with `b_0 = 0`.
    pub fn b(&self) -> &[T] {
        &self.b
    }

    /// Truncation order `m`.
    pub fn m(&self) -> usize {
        self.a.len() - 1
    }

    fn series(&self, theta: T) -> Series<T> {
        let (s1, c1) = theta.sin_cos();
        let (mut sk, mut ck) = (T::zero(), T::one());
        let mut out = Series {
            c: self.a[0] / lit(2.0),
            s: T::zero(),
            dc: T::zero(),
            ds: T::zero(),
        };
        for k in 1..self.a.len() {
            // angle addition keeps this to one sin/cos per evaluation
            let next_s = sk * c1 + ck * s1;
            ck = ck * c1 - sk * s1;
            sk = next_s;
            let kf = T::from_usize_lossy(k);
            out.c = out.c + self.a[k] * ck;
            out.s = out.s + self.b[k] * sk;
            out.dc = out.dc - kf * self.a[k] * sk;
            out.ds = out.ds + kf * self.b[k] * ck;
        }
        out
    }

    /// `ρ(θ)`.
    pub fn rho(&self, theta: T) -> T {
        let s = self.series(theta);
        s.s.atan2(s.c)
    }

    /// `ρ'(θ)`.
    pub fn rho_prime(&self, theta: T) -> T {
        let s = self.series(theta);
        (s.ds * s.c - s.s * s.dc) / (s.c * s.c + s.s * s.s)
    }

    /// Other coordinate at offset `t = φ − μ_j`.
    fn other_at(&self, t: T) -> T {
        let l = self.index_coord.other();
        wrap(self.mu.get(l) + self.rho(t) - self.rho0)
    }

    /// The point at index offset `t` from the location.
    fn at_offset(&self, t: T) -> TorusPoint<T> {
        let j = self.index_coord;
        TorusPoint::from_coords(j, self.mu.get(j) + t, self.other_at(t))
    }

    /// Derivative of [`Self::at_offset`] in `t`, as `(dθ1/dt, dθ2/dt)`.
    fn velocity(&self, t: T) -> [T; 2] {
        let rp = self.rho_prime(t);
        match self.index_coord {
            Coord::First => [T::one(), rp],
            Coord::Second => [rp, T::one()],
        }
    }

    /// The point of the curve whose index coordinate is `phi`.
    pub fn eval(&self, phi: T) -> TorusPoint<T> {
        let j = self.index_coord;
        let t = wrap(phi - self.mu.get(j));
        TorusPoint::from_coords(j, phi, self.other_at(t))
    }

    fn speed(&self, t: T) -> T {
        self.rho_prime(t).hypot(T::one())
    }
}

/// Fits the Fourier representation to a connected ridge.
///
/// The ridge is lifted to a function of the index offset from `μ`, interpolated
/// by a periodic monotone cubic, and the coefficients
/// `a_k = (1/π)∫cos(R(θ))cos(kθ)dθ`, `b_k = (1/π)∫sin(R(θ))sin(kθ)dθ` are
/// integrated with Gauss–Legendre panels on the interpolation intervals.
pub fn fourier_fit<T: Real>(ridge: &ConnectedRidge<T>, m: usize) -> Result<FourierRidge<T>> {
    if m < 1 {
        return Err(TrpcaError::InvalidArgument("Fourier order must be at least 1".into()));
    }
    let needed = 2 * m + 2;
    if ridge.len() < needed {
        return Err(TrpcaError::InsufficientData { needed, got: ridge.len() });
    }
    let j = ridge.index_coord;
    let l = j.other();
    let mu = ridge.mu;
    let two_pi = T::two_pi();
    let mut rel: Vec<(T, T)> = ridge
        .ordered_points
        .iter()
        .map(|p| {
            let r = p.relative_to(&mu);
            (r.get(j).rem_euclid(&two_pi), r.get(l))
        })
        .map(|(x, y)| if x >= two_pi { (T::zero(), y) } else { (x, y) })
        .collect();
    rel.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite ridge points"));
    if rel[0].0 != T::zero() || rel[0].1 != T::zero() {
        // The location anchors the lift; put it first.
        rel.retain(|&(x, y)| !(x == T::zero() && y == T::zero()));
        rel.insert(0, (T::zero(), T::zero()));
    }

    // Lift the other coordinate along the index coordinate.
    let same = lit::<T>(1e-9);
    let mut xs = vec![T::zero()];
    let mut ys = vec![T::zero()];
    for &(x, y) in &rel[1..] {
        let (px, py) = (*xs.last().expect("nonempty"), *ys.last().expect("nonempty"));
        let dy = wrap(y - wrap(py));
        if x - px < same {
            if dy.abs() < same {
                continue;
            }
            return Err(TrpcaError::Parametrization(format!(
                "ridge takes two values ({} and {}) at index offset {}",
                wrap(py),
                y,
                x
            )));
        }
        xs.push(x);
        ys.push(py + dy);
    }
    if xs.len() < needed {
        return Err(TrpcaError::InsufficientData { needed, got: xs.len() });
    }
    let last = *ys.last().expect("nonempty");
    let closing = last + wrap(-wrap(last));
    let winding = (closing / two_pi).round();
    if winding.abs() > T::one() {
        return Err(TrpcaError::Parametrization(format!("ridge winds {winding} times around the other coordinate")));
    }
    let gap = xs.windows(2).map(|w| w[1] - w[0]).fold(two_pi - *xs.last().expect("nonempty"), T::max);
    if gap > T::PI() / lit(8.0) {
        log::warn!("ridge leaves a gap of {gap} in the index coordinate; the interpolant bridges it");
    }

    // Periodic extension: two knots on each side.
    let n = xs.len();
    let shift = winding * two_pi;
    let mut ex = Vec::with_capacity(n + 4);
    let mut ey = Vec::with_capacity(n + 4);
    for k in [n - 2, n - 1] {
        ex.push(xs[k] - two_pi);
        ey.push(ys[k] - shift);
    }
    ex.extend_from_slice(&xs);
    ey.extend_from_slice(&ys);
    for k in [0, 1] {
        ex.push(xs[k] + two_pi);
        ey.push(ys[k] + shift);
    }
    let interp = Pchip::new(ex, ey);

    let rule = GaussRule::<T>::new(PANEL_NODES);
    let mut a = vec![T::zero(); m + 1];
    let mut b = vec![T::zero(); m + 1];
    let knots = interp.knots();
    // Intervals covering [0, 2π): from the knot at 0 (index 2) to the one at 2π (index n + 2).
    for k in 2..n + 2 {
        for (t, w) in rule.on(knots[k], knots[k + 1]) {
            let g = interp.eval_on(k, t);
            let (sg, cg) = g.sin_cos();
            let (s1, c1) = t.sin_cos();
            let (mut sk, mut ck) = (T::zero(), T::one());
            a[0] = a[0] + w * cg;
            for i in 1..=m {
                let next_s = sk * c1 + ck * s1;
                ck = ck * c1 - sk * s1;
                sk = next_s;
                a[i] = a[i] + w * cg * ck;
                b[i] = b[i] + w * sg * sk;
            }
        }
    }
    let inv_pi = T::PI().recip();
    for i in 0..=m {
        a[i] = a[i] * inv_pi;
        b[i] = b[i] * inv_pi;
    }
    let fr = FourierRidge::new(a, b, j, mu)?;
    check_nondegenerate(&fr)?;
    Ok(fr)
}

/// `ρ` is undefined where `C` and `S` vanish together.
fn check_nondegenerate<T: Real>(fr: &FourierRidge<T>) -> Result<()> {
    let n = 4 * CURVE_GRID;
    let scale = fr.a.iter().chain(&fr.b).fold(T::zero(), |m, c| m.max(c.abs()));
    let floor = lit::<T>(1e-10) * scale * scale;
    for k in 0..n {
        let t = T::two_pi() * T::from_usize_lossy(k) / T::from_usize_lossy(n);
        let s = fr.series(t);
        if !(s.c * s.c + s.s * s.s > floor) {
            return Err(TrpcaError::Parametrization(format!("Fourier series vanishes near index offset {t}")));
        }
    }
    Ok(())
}

/// Arc-length reparametrized ridge curve `r̃`.
#[derive(Debug, Clone, PartialEq)]
pub struct RidgeCurve<T> {
    fourier: FourierRidge<T>,
    total_length: T,
    /// `L(t_k)` at `t_k = 2πk/ARCLEN_NODES`, `k = 0..=ARCLEN_NODES`.
    lengths: Vec<T>,
    /// `L'(t_k)`.
    speeds: Vec<T>,
    /// `r̃(α_k)` at `α_k = −π + 2πk/CURVE_GRID`.
    grid: Vec<TorusPoint<T>>,
    /// Index offsets of the grid points, in `[0, 2π)`.
    offsets: Vec<T>,
    rule: Vec<(T, T)>,
}

/// Closest curve point to a torus point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Projection<T> {
    pub alpha: T,
    pub foot: TorusPoint<T>,
    pub dist: T,
    /// Another local minimum was within the tie tolerance; the smallest `α` was kept.
    pub tie: bool,
}

/// Builds the arc-length table and the scaled-centred curve.
pub fn arclength_param<T: Real>(fr: FourierRidge<T>) -> Result<RidgeCurve<T>> {
    let n = ARCLEN_NODES;
    let h = T::two_pi() / T::from_usize_lossy(n);
    let speed = |t: T| fr.speed(t);
    let mut lengths = Vec::with_capacity(n + 1);
    let mut speeds = Vec::with_capacity(n + 1);
    let mut acc = T::zero();
    let tol = lit::<T>(1e-13);
    for k in 0..=n {
        let t = h * T::from_usize_lossy(k);
        if k > 0 {
            acc = acc + adaptive_simpson(&speed, t - h, t, tol);
        }
        lengths.push(acc);
        speeds.push(speed(t));
    }
    if lengths.windows(2).any(|w| !(w[1] > w[0])) || !acc.is_finite() {
        return Err(TrpcaError::Internal("arc-length table is not strictly increasing".into()));
    }
    let rule: Vec<(T, T)> = {
        let g = GaussRule::<T>::new(PANEL_NODES);
        g.on(-T::one(), T::one()).collect()
    };
    let mut curve = RidgeCurve {
        fourier: fr,
        total_length: acc,
        lengths,
        speeds,
        grid: Vec::new(),
        offsets: Vec::new(),
        rule,
    };
    curve.offsets = (0..CURVE_GRID).map(|k| curve.offset_at(curve.grid_alpha(k))).collect();
    curve.grid = curve.offsets.iter().map(|&t| curve.fourier.at_offset(t)).collect();
    Ok(curve)
}

impl<T: Real> RidgeCurve<T> {
    pub fn fourier(&self) -> &FourierRidge<T> {
        &self.fourier
    }

    pub fn mu(&self) -> TorusPoint<T> {
        self.fourier.mu
    }

    pub fn index_coord(&self) -> Coord {
        self.fourier.index_coord
    }

    /// Curve length `R`.
    pub fn total_length(&self) -> T {
        self.total_length
    }

    fn step(&self) -> T {
        T::two_pi() / T::from_usize_lossy(ARCLEN_NODES)
    }

    /// Arc length from `μ` to index offset `t ∈ [0, 2π]`.
    pub fn arclength(&self, t: T) -> T {
        let h = self.step();
        let k = ((t / h).floor().to_usize().unwrap_or(0)).min(ARCLEN_NODES - 1);
        let t0 = h * T::from_usize_lossy(k);
        self.lengths[k] + self.partial(t0, t)
    }

    fn partial(&self, a: T, b: T) -> T {
        if a == b {
            return T::zero();
        }
        let half = (b - a) / lit(2.0);
        let mid = (a + b) / lit(2.0);
        self.rule.iter().map(|&(x, w)| w * half * self.fourier.speed(mid + half * x)).sum()
    }

    /// Index offset `t` with `L(t) = s`: cubic Hermite inverse of the table and one Newton step.
    fn inverse_length(&self, s: T) -> T {
        let k = match self.lengths.binary_search_by(|l| l.partial_cmp(&s).expect("finite")) {
            Ok(k) => return self.step() * T::from_usize_lossy(k),
            Err(k) => k.clamp(1, ARCLEN_NODES) - 1,
        };
        let h = self.step();
        let (l0, l1) = (self.lengths[k], self.lengths[k + 1]);
        let dl = l1 - l0;
        let u = (s - l0) / dl;
        let (u2, u3) = (u * u, u * u * u);
        let two = lit::<T>(2.0);
        let three = lit::<T>(3.0);
        // dt/ds = 1/L' at the two nodes
        let (m0, m1) = (dl / self.speeds[k], dl / self.speeds[k + 1]);
        let t0 = h * T::from_usize_lossy(k);
        let mut t = t0 + (three * u2 - two * u3) * h + (u3 - two * u2 + u) * m0 + (u3 - u2) * m1;
        let t_hi = t0 + h;
        t = t.max(t0).min(t_hi);
        let next = t - (self.lengths[k] + self.partial(t0, t) - s) / self.fourier.speed(t);
        next.max(t0).min(t_hi)
    }

    /// Index offset reached at scaled parameter `alpha`.
    fn offset_at(&self, alpha: T) -> T {
        let r = self.total_length;
        let mut s = (r / T::two_pi() * wrap(alpha)).rem_euclid(&r);
        if s >= r {
            s = T::zero();
        }
        self.inverse_length(s)
    }

    /// `r̃(α)`.
    pub fn eval_scaled(&self, alpha: T) -> TorusPoint<T> {
        self.fourier.at_offset(self.offset_at(alpha))
    }

    /// `r̃'(α)` as `(dθ1/dα, dθ2/dα)`.
    pub fn tangent(&self, alpha: T) -> [T; 2] {
        let t = self.offset_at(alpha);
        let fr = &self.fourier;
        let rp = fr.rho_prime(t);
        let dt = self.total_length / T::two_pi() / rp.hypot(T::one());
        match fr.index_coord {
            Coord::First => [dt, dt * rp],
            Coord::Second => [dt * rp, dt],
        }
    }

    /// Scaled parameter of grid point `k`.
    pub fn grid_alpha(&self, k: usize) -> T {
        -T::PI() + T::two_pi() * T::from_usize_lossy(k) / T::from_usize_lossy(CURVE_GRID)
    }

    /// `r̃` on the scan grid `α_k = −π + 2πk/CURVE_GRID`.
    pub fn grid(&self) -> &[TorusPoint<T>] {
        &self.grid
    }

    /// Scaled parameter of the point at index offset `t`.
    fn alpha_at(&self, t: T) -> T {
        let t = t.rem_euclid(&T::two_pi());
        wrap(T::two_pi() * self.arclength(t) / self.total_length)
    }

    /// Projection onto the curve: grid scan, golden-section refinement of every
    /// competitive local minimum, then Newton polishing. Refinement runs in the
    /// index offset, which is cheaper to evaluate than `α`.
    pub fn project(&self, p: &TorusPoint<T>) -> Projection<T> {
        let n = CURVE_GRID;
        let two_pi = T::two_pi();
        let fr = &self.fourier;
        let d: Vec<T> = self.grid.iter().map(|q| torus_dist(p, q)).collect();
        let best = d.iter().copied().fold(T::infinity(), T::min);
        // Distance is 1-Lipschitz in arc length; grid points are R/n apart.
        let slack = self.total_length / T::from_usize_lossy(n);
        let mut found: Vec<(T, T)> = Vec::new();
        for k in 0..n {
            let (prev, next) = (d[(k + n - 1) % n], d[(k + 1) % n]);
            if d[k] > prev || d[k] > next || d[k] > best + slack {
                continue;
            }
            let c = self.offsets[k];
            let mut lo = self.offsets[(k + n - 1) % n];
            let mut hi = self.offsets[(k + 1) % n];
            if lo > c {
                lo = lo - two_pi;
            }
            if hi < c {
                hi = hi + two_pi;
            }
            let f = |t: T| torus_dist(p, &fr.at_offset(t));
            let (t, ft) = crate::geometry::golden_min(f, lo, hi, lit(PROJECTION_TOL));
            let (t, ft) = if ft <= d[k] { (t, ft) } else { (c, d[k]) };
            found.push(self.polish(p, t, ft, lo, hi));
        }
        let dmin = found.iter().map(|f| f.1).fold(T::infinity(), T::min);
        let tie_tol = lit::<T>(PROJECTION_TIE);
        let mut close: Vec<(T, T)> = found
            .into_iter()
            .filter(|f| f.1 <= dmin + tie_tol)
            .map(|(t, ft)| (self.alpha_at(t), ft))
            .collect();
        close.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"));
        close.dedup_by(|a, b| circ_dist(a.0, b.0) < lit(1e-6));
        if close.len() > 1 && circ_dist(close[0].0, close[close.len() - 1].0) < lit(1e-6) {
            close.pop();
        }
        let tie = close.len() > 1;
        let alpha = if tie {
            close[0].0
        } else {
            // without a tie, keep the exact minimizer
            close.iter().min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite")).expect("a minimum").0
        };
        let foot = self.eval_scaled(alpha);
        Projection {
            alpha,
            foot,
            dist: torus_dist(p, &foot),
            tie,
        }
    }

    /// Newton steps on `g(t) = d(p, r(t))²/2`, kept inside `[lo, hi]` and only while `|g'|` decreases.
    fn polish(&self, p: &TorusPoint<T>, mut t: T, mut ft: T, lo: T, hi: T) -> (T, T) {
        let fr = &self.fourier;
        let grad = |t: T| {
            let r = p.relative_to(&fr.at_offset(t));
            let v = fr.velocity(t);
            -(r.theta1() * v[0] + r.theta2() * v[1])
        };
        let e = lit::<T>(1e-6);
        for _ in 0..4 {
            let g = grad(t);
            let curv = (grad(t + e) - grad(t - e)) / (lit::<T>(2.0) * e);
            if !(curv > T::zero()) || g == T::zero() {
                break;
            }
            let next = t - g / curv;
            if !(next > lo && next < hi) {
                break;
            }
            // distances are flat at the minimum; judge the step by the derivative
            if grad(next).abs() >= g.abs() {
                break;
            }
            t = next;
            ft = torus_dist(p, &fr.at_offset(next));
        }
        (t, ft)
    }

    /// Writes the exported table `alpha,theta1,theta2` on the scan grid with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "alpha,theta1,theta2")?;
        for (k, q) in self.grid.iter().enumerate() {
            writeln!(
                out,
                "{},{},{}",
                fmt17(self.grid_alpha(k)),
                fmt17(q.theta1()),
                fmt17(q.theta2())
            )?;
        }
        Ok(())
    }
}

/// Number with 17 significant digits.
pub fn fmt17<T: Real>(x: T) -> String {
    format!("{:.16e}", x.to_f64_lossy())
}

pub use table::curve_from_table;

#[cfg(test)]
mod tests;
