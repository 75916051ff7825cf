use crate::models::DensityDerivatives;
use crate::scalar::{lit, Real};

/// Eigen-decomposition of the symmetric matrix `[[u, v], [v, w]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigen2<T> {
    pub lambda1: T,
    pub lambda2: T,
    pub u1: [T; 2],
    pub u2: [T; 2],
    /// Isotropic matrix: `u2` is not determined and the point cannot be on a ridge.
    pub degenerate: bool,
}

/// Closed-form eigensystem of a 2×2 symmetric matrix, `λ1 ≥ λ2`.
///
/// `u2` points along `(2u - 2w + 2v - 2√Δ, w - u + 4v - √Δ)` with
/// `Δ = (w - u)² + 4v²`. That vector is the sum of two parallel eigenvectors
/// and can cancel away from isotropy, so the direction is computed from the
/// better conditioned of the two and only the orientation is taken from the sum.
pub fn hessian_eig2<T: Real>(u: T, v: T, w: T) -> Eigen2<T> {
    let two = lit::<T>(2.0);
    let diff = w - u;
    let root = (diff * diff + lit::<T>(4.0) * v * v).sqrt();
    let lambda1 = (u + w + root) / two;
    let lambda2 = (u + w - root) / two;
    let iso = lit::<T>(1e-12);
    if diff.abs() < iso && v.abs() < iso {
        return Eigen2 {
            lambda1,
            lambda2,
            u1: [T::one(), T::zero()],
            u2: [T::zero(), T::one()],
            degenerate: true,
        };
    }
    // Two representations of the λ2 eigenvector.
    let e1 = [two * v, diff - root];
    let e2 = [-(diff + root), two * v];
    let n1 = e1[0].hypot(e1[1]);
    let n2 = e2[0].hypot(e2[1]);
    let (mut dir, norm) = if n1 >= n2 { (e1, n1) } else { (e2, n2) };
    dir = [dir[0] / norm, dir[1] / norm];
    let closed = [
        two * u - two * w + two * v - two * root,
        w - u + lit::<T>(4.0) * v - root,
    ];
    if closed[0] * dir[0] + closed[1] * dir[1] < T::zero() {
        dir = [-dir[0], -dir[1]];
    }
    Eigen2 {
        lambda1,
        lambda2,
        u1: [-dir[1], dir[0]],
        u2: dir,
        degenerate: false,
    }
}

/// Left-hand side of the implicit ridge equation,
/// `D1 (2u - 2w + 2v - 2√Δ) + D2 (w - u + 4v - √Δ)`.
pub fn implicit_expr<T: Real>(d: &DensityDerivatives<T>) -> T {
    let two = lit::<T>(2.0);
    let diff = d.w - d.u;
    let root = (diff * diff + lit::<T>(4.0) * d.v * d.v).sqrt();
    d.d1 * (two * d.u - two * d.w + two * d.v - two * root) + d.d2 * (diff + lit::<T>(4.0) * d.v - root)
}

/// Second Hessian eigenvalue is negative.
pub fn eigenvalue_condition<T: Real>(d: &DensityDerivatives<T>) -> bool {
    let diff = d.u - d.w;
    let root = (diff * diff + lit::<T>(4.0) * d.v * d.v).sqrt();
    (d.u + d.w - root) / lit(2.0) < T::zero()
}

/// Gradient projected on the second eigenvector, `u2 u2' Df`, in true units.
pub fn projected_gradient<T: Real>(d: &DensityDerivatives<T>) -> Option<[T; 2]> {
    let e = hessian_eig2(d.u, d.v, d.w);
    if e.degenerate {
        return None;
    }
    let g = d.gradient();
    let dot = g[0] * e.u2[0] + g[1] * e.u2[1];
    Some([dot * e.u2[0], dot * e.u2[1]])
}
