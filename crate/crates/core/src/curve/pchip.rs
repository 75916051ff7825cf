//! Monotone piecewise-cubic Hermite interpolation.

use crate::scalar::{lit, Real};

/// Shape-preserving cubic through `(x_k, y_k)` with strictly increasing `x`.
pub(crate) struct Pchip<T> {
    x: Vec<T>,
    y: Vec<T>,
    d: Vec<T>,
}

impl<T: Real> Pchip<T> {
    pub(crate) fn new(x: Vec<T>, y: Vec<T>) -> Self {
        let n = x.len();
        debug_assert!(n >= 2 && y.len() == n);
        let h: Vec<T> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<T> = (0..n - 1).map(|k| (y[k + 1] - y[k]) / h[k]).collect();
        let mut d = vec![T::zero(); n];
        let two = lit::<T>(2.0);
        for k in 1..n - 1 {
            let (a, b) = (delta[k - 1], delta[k]);
            if a * b > T::zero() {
                // Weighted harmonic mean of the neighbouring secants.
                let w1 = two * h[k] + h[k - 1];
                let w2 = h[k] + two * h[k - 1];
                d[k] = (w1 + w2) / (w1 / a + w2 / b);
            }
        }
        d[0] = end_slope(h[0], h.get(1).copied().unwrap_or(h[0]), delta[0], delta.get(1).copied().unwrap_or(delta[0]));
        d[n - 1] = end_slope(
            h[n - 2],
            if n > 2 { h[n - 3] } else { h[n - 2] },
            delta[n - 2],
            if n > 2 { delta[n - 3] } else { delta[n - 2] },
        );
        Pchip { x, y, d }
    }

    pub(crate) fn knots(&self) -> &[T] {
        &self.x
    }

    /// Value on interval `k` (between knots `k` and `k + 1`).
    pub(crate) fn eval_on(&self, k: usize, t: T) -> T {
        let h = self.x[k + 1] - self.x[k];
        let s = (t - self.x[k]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let two = lit::<T>(2.0);
        let three = lit::<T>(3.0);
        let h00 = two * s3 - three * s2 + T::one();
        let h10 = s3 - two * s2 + s;
        let h01 = three * s2 - two * s3;
        let h11 = s3 - s2;
        h00 * self.y[k] + h10 * h * self.d[k] + h01 * self.y[k + 1] + h11 * h * self.d[k + 1]
    }
}

/// Three-point end slope, limited to keep the end interval monotone.
fn end_slope<T: Real>(h0: T, h1: T, del0: T, del1: T) -> T {
    let two = lit::<T>(2.0);
    let d = ((two * h0 + h1) * del0 - h0 * del1) / (h0 + h1);
    if d.signum() != del0.signum() {
        T::zero()
    } else if del0.signum() != del1.signum() && d.abs() > lit::<T>(3.0) * del0.abs() {
        lit::<T>(3.0) * del0
    } else {
        d
    }
}
