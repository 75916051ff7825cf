use rayon::prelude::*;

use super::defaults;
use super::eig::{eigenvalue_condition, hessian_eig2, implicit_expr};
use super::oracle::{DensityOracle, Domain};
use super::{RidgeMethod, RidgeSet};
use crate::error::{Result, TrpcaError};
use crate::geometry::{Coord, TorusPoint};
use crate::models::DensityDerivatives;
use crate::scalar::{lit, Real};

const MAX_BISECTIONS: usize = 200;
/// Gradients below this norm make a point near-critical.
const CRITICAL_GRAD: f64 = 1e-12;
/// Admissible `|∇f · u2| / |∇f|` for a bracketed root. Sign changes of the
/// implicit expression also occur where its closed-form vector vanishes, and
/// those are not ridge points.
const ALIGNMENT_TOL: f64 = 1e-6;
/// Roots of one column closer than this are the same root.
const DUPLICATE_ROOT: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImplicitConfig<T> {
    /// Coordinate fixed along each scan column.
    pub index_coord: Coord,
    pub grid_n: usize,
    pub tol: T,
    /// Also scan along the other coordinate, which picks up branches running
    /// parallel to the scan columns. The index coordinate stays the primary one.
    pub cross_scan: bool,
}

impl<T: Real> ImplicitConfig<T> {
    pub fn new(index_coord: Coord) -> Self {
        ImplicitConfig {
            index_coord,
            grid_n: defaults::GRID_N,
            tol: lit(defaults::TOL),
            cross_scan: false,
        }
    }
}

/// Solves the implicit ridge equation column by column.
///
/// Along each of `grid_n` values of the index coordinate, `grid_n` values of
/// the other coordinate are scanned for sign changes (the seam bracket
/// included on the torus); brackets are bisected and roots kept when the
/// second eigenvalue is negative. Both grids contain the oracle anchor.
pub fn ridge_implicit<T: Real, O: DensityOracle<T> + ?Sized>(oracle: &O, config: &ImplicitConfig<T>) -> Result<RidgeSet<T>> {
    let n = config.grid_n;
    if n < 64 {
        return Err(TrpcaError::InvalidArgument(format!("grid_n must be at least 64, got {n}")));
    }
    if !(config.tol > T::zero()) {
        return Err(TrpcaError::InvalidArgument("tolerance must be positive".into()));
    }
    let mut points = Vec::new();
    let mut residuals = Vec::new();
    let passes: &[Coord] = if config.cross_scan {
        &[config.index_coord, config.index_coord.other()][..]
    } else {
        std::slice::from_ref(&config.index_coord)
    };
    for &j in passes {
        for (p, r) in scan_pass(oracle, j, n, config.tol) {
            points.push(p);
            residuals.push(r);
        }
    }
    if points.is_empty() {
        log::warn!("implicit ridge scan found no ridge points");
    }
    Ok(RidgeSet {
        points,
        residuals,
        method: RidgeMethod::Implicit,
        index_coord: Some(config.index_coord),
        dropped_starts: 0,
    })
}

fn scan_pass<T: Real, O: DensityOracle<T> + ?Sized>(oracle: &O, j: Coord, n: usize, tol: T) -> Vec<(TorusPoint<T>, T)> {
    let l = j.other();
    let anchor = oracle.anchor();
    // On the torus the scan runs over offsets from the anchor.
    let (index_vals, other_vals, periodic) = match oracle.domain() {
        Domain::Periodic => (periodic_grid(n), periodic_grid(n), true),
        Domain::Planar { lo, hi } => (
            box_grid(lo[j.index() - 1], hi[j.index() - 1], anchor.get(j), n),
            box_grid(lo[l.index() - 1], hi[l.index() - 1], anchor.get(l), n),
            false,
        ),
    };
    let scan = Scan { oracle, j, anchor, periodic, tol };
    let columns: Vec<Vec<(TorusPoint<T>, T)>> = index_vals.par_iter().map(|&x| scan.column(x, &other_vals)).collect();
    columns.into_iter().flatten().collect()
}

/// `n` values `2πk/n`; evaluation points are wrapped by `TorusPoint`.
fn periodic_grid<T: Real>(n: usize) -> Vec<T> {
    let step = T::two_pi() / T::from_usize_lossy(n);
    (0..n).map(|k| step * T::from_usize_lossy(k)).collect()
}

/// `n` evenly spaced values on `[lo, hi]`, shifted so `a` is a node when it lies inside.
fn box_grid<T: Real>(lo: T, hi: T, a: T, n: usize) -> Vec<T> {
    let step = (hi - lo) / T::from_usize_lossy(n - 1);
    let offset = if a >= lo && a <= hi {
        let k = ((a - lo) / step).round();
        a - (lo + k * step)
    } else {
        T::zero()
    };
    (0..n)
        .map(|k| lo + offset + step * T::from_usize_lossy(k))
        .filter(|&x| x >= lo && x <= hi)
        .collect()
}

struct Scan<'a, T, O: ?Sized> {
    oracle: &'a O,
    j: Coord,
    anchor: TorusPoint<T>,
    periodic: bool,
    tol: T,
}

impl<T: Real, O: DensityOracle<T> + ?Sized> Scan<'_, T, O> {
    fn eval(&self, x: T, y: T) -> DensityDerivatives<T> {
        let p = TorusPoint::from_coords(self.j, x, y);
        if self.periodic {
            self.oracle.evaluate_offset(&p)
        } else {
            self.oracle.evaluate(&p)
        }
    }

    fn point(&self, x: T, y: T) -> TorusPoint<T> {
        let p = TorusPoint::from_coords(self.j, x, y);
        if self.periodic {
            self.anchor.shifted(p.theta1(), p.theta2())
        } else {
            p
        }
    }

    fn column(&self, x: T, ys: &[T]) -> Vec<(TorusPoint<T>, T)> {
        let derivs: Vec<DensityDerivatives<T>> = ys.iter().map(|&y| self.eval(x, y)).collect();
        let g = |y: T| implicit_expr(&self.eval(x, y));
        let c = |y: T| gradient_cross(&self.eval(x, y));
        let gv: Vec<T> = derivs.iter().map(implicit_expr).collect();
        let cv: Vec<T> = derivs.iter().map(gradient_cross).collect();
        let mut roots: Vec<(T, T, TorusPoint<T>)> = Vec::new();
        let n = ys.len();
        let brackets = if self.periodic { n } else { n - 1 };
        for k in 0..n {
            if gv[k] == T::zero() {
                if let Some((p, r)) = self.accept(x, ys[k], true) {
                    roots.push((ys[k], r, p));
                }
            }
            if k >= brackets {
                continue;
            }
            let (ya, yb) = if k + 1 < n { (ys[k], ys[k + 1]) } else { (ys[k], ys[0] + T::two_pi()) };
            let kb = (k + 1) % n;
            if changes_sign(gv[k], gv[kb]) {
                let (y, collapsed) = bisect(&g, ya, gv[k], yb, self.tol);
                if let Some((p, r)) = self.accept(x, y, collapsed) {
                    roots.push((y, r, p));
                }
            }
            // The closed-form vector inside the implicit expression can vanish
            // next to a root, and two sign changes in one bracket cancel. The
            // gradient/Hessian cross product has no such factor.
            if changes_sign(cv[k], cv[kb]) {
                let (y, _) = bisect(&c, ya, cv[k], yb, self.tol * self.tol);
                if let Some((p, r)) = self.accept(x, y, true) {
                    roots.push((y, r, p));
                }
            }
        }
        roots.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite roots"));
        roots.dedup_by(|a, b| (a.0 - b.0).abs() < lit(DUPLICATE_ROOT));
        roots.into_iter().map(|(_, r, p)| (p, r)).collect()
    }

    fn accept(&self, x: T, y: T, relaxed: bool) -> Option<(TorusPoint<T>, T)> {
        let d = self.eval(x, y);
        let r = implicit_expr(&d).abs();
        if (!relaxed && r >= self.tol) || !is_ridge_point(&d) {
            return None;
        }
        Some((self.point(x, y), r))
    }
}

fn changes_sign<T: Real>(a: T, b: T) -> bool {
    a != T::zero() && b != T::zero() && (a > T::zero()) != (b > T::zero())
}

/// `∇f × H∇f`: zero exactly where the gradient is a Hessian eigenvector.
fn gradient_cross<T: Real>(d: &DensityDerivatives<T>) -> T {
    let h1 = d.u * d.d1 + d.v * d.d2;
    let h2 = d.v * d.d1 + d.w * d.d2;
    d.d1 * h2 - d.d2 * h1
}

/// Returns the root estimate and whether the bracket collapsed to machine
/// resolution before reaching `tol`.
fn bisect<T: Real>(g: &impl Fn(T) -> T, mut a: T, mut ga: T, mut b: T, tol: T) -> (T, bool) {
    let two = lit::<T>(2.0);
    for _ in 0..MAX_BISECTIONS {
        let m = (a + b) / two;
        if m <= a || m >= b {
            return (if ga.abs() <= g(b).abs() { a } else { b }, true);
        }
        let gm = g(m);
        if gm.abs() < tol {
            return (m, false);
        }
        if (gm > T::zero()) == (ga > T::zero()) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    ((a + b) / two, true)
}

/// Gradient orthogonal to `u2` (or vanishing), negative second eigenvalue and
/// a non-isotropic Hessian.
pub(crate) fn is_ridge_point<T: Real>(d: &DensityDerivatives<T>) -> bool {
    if !eigenvalue_condition(d) {
        return false;
    }
    let gn = d.d1.hypot(d.d2);
    if gn < lit(CRITICAL_GRAD) {
        return true;
    }
    let e = hessian_eig2(d.u, d.v, d.w);
    if e.degenerate {
        return false;
    }
    (d.d1 * e.u2[0] + d.d2 * e.u2[1]).abs() <= lit::<T>(ALIGNMENT_TOL) * gn
}
