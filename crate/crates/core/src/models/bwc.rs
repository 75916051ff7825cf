use crate::error::{Result, TrpcaError};
use crate::geometry::{wrap, TorusPoint};
use crate::models::DensityDerivatives;
use crate::scalar::{lit, Real};

/// Bivariate wrapped Cauchy parameters with the derived constants cached.
///
/// `c0..c3` depend on `|ρ|`; only `c4` carries the sign of `ρ`.
#[derive(Debug, Clone, PartialEq)]
pub struct BwcParams<T> {
    mu1: T,
    mu2: T,
    xi1: T,
    xi2: T,
    rho: T,
    c: T,
    c0: T,
    c1: T,
    c2: T,
    c3: T,
    c4: T,
}

impl<T: Real> BwcParams<T> {
    pub fn new(mu1: T, mu2: T, xi1: T, xi2: T, rho: T) -> Result<Self> {
        if !(mu1.is_finite() && mu2.is_finite()) {
            return Err(TrpcaError::InvalidArgument("locations must be finite".into()));
        }
        for (name, v) in [("xi1", xi1), ("xi2", xi2)] {
            if !(v >= T::zero() && v < T::one()) {
                return Err(TrpcaError::InvalidArgument(format!("{name} must lie in [0, 1), got {v}")));
            }
        }
        if !(rho > -T::one() && rho < T::one()) {
            return Err(TrpcaError::InvalidArgument(format!("rho must lie in (-1, 1), got {rho}")));
        }
        let one = T::one();
        let two = lit::<T>(2.0);
        let four = lit::<T>(4.0);
        let r2 = rho * rho;
        let a = rho.abs();
        let (x1s, x2s) = (xi1 * xi1, xi2 * xi2);
        let c = (one - r2) * (one - x1s) * (one - x2s) / (four * T::PI() * T::PI());
        let c0 = (one + r2) * (one + x1s) * (one + x2s) - lit::<T>(8.0) * a * xi1 * xi2;
        let c1 = two * (one + r2) * xi1 * (one + x2s) - four * a * (one + x1s) * xi2;
        let c2 = two * (one + r2) * (one + x1s) * xi2 - four * a * xi1 * (one + x2s);
        let c3 = -four * (one + r2) * xi1 * xi2 + two * a * (one + x1s) * (one + x2s);
        let c4 = two * rho * (one - x1s) * (one - x2s);
        if !(c > T::zero()) {
            return Err(TrpcaError::Numeric(format!("wrapped Cauchy constant c = {c} is not positive")));
        }
        Ok(BwcParams {
            mu1: wrap(mu1),
            mu2: wrap(mu2),
            xi1,
            xi2,
            rho,
            c,
            c0,
            c1,
            c2,
            c3,
            c4,
        })
    }

    pub fn mu(&self) -> TorusPoint<T> {
        TorusPoint::new(self.mu1, self.mu2)
    }
    pub fn xi1(&self) -> T {
        self.xi1
    }
    pub fn xi2(&self) -> T {
        self.xi2
    }
    pub fn rho(&self) -> T {
        self.rho
    }

    /// `(c, c0, c1, c2, c3, c4)`.
    pub fn constants(&self) -> [T; 6] {
        [self.c, self.c0, self.c1, self.c2, self.c3, self.c4]
    }

    pub fn with_location(&self, mu: TorusPoint<T>) -> Self {
        BwcParams {
            mu1: mu.theta1(),
            mu2: mu.theta2(),
            ..self.clone()
        }
    }

    /// Denominator of the density, `1 / f*`.
    #[inline]
    fn denominator(&self, s1: T, c1: T, s2: T, c2: T) -> T {
        self.c0 - self.c1 * c1 - self.c2 * c2 - self.c3 * c1 * c2 - self.c4 * s1 * s2
    }

    pub fn density(&self, p: &TorusPoint<T>) -> T {
        let (s1, c1) = (p.theta1() - self.mu1).sin_cos();
        let (s2, c2) = (p.theta2() - self.mu2).sin_cos();
        self.c / self.denominator(s1, c1, s2, c2)
    }

    pub fn log_density(&self, p: &TorusPoint<T>) -> T {
        self.density(p).ln()
    }
}

/// Derivative components of the wrapped Cauchy density with `f* = f / c`;
/// the common factor is `c f*²`.
pub fn bwc_derivatives<T: Real>(p: &TorusPoint<T>, params: &BwcParams<T>) -> DensityDerivatives<T> {
    derivatives_at(p.theta1() - params.mu1, p.theta2() - params.mu2, params)
}

/// Derivative components at `mu + offset`, without rounding the offset through the location.
pub(crate) fn bwc_derivatives_offset<T: Real>(offset: &TorusPoint<T>, params: &BwcParams<T>) -> DensityDerivatives<T> {
    derivatives_at(offset.theta1(), offset.theta2(), params)
}

fn derivatives_at<T: Real>(a1: T, a2: T, params: &BwcParams<T>) -> DensityDerivatives<T> {
    let (s1, k1) = a1.sin_cos();
    let (s2, k2) = a2.sin_cos();
    let BwcParams { c, c1, c2, c3, c4, .. } = *params;
    let fstar = params.denominator(s1, k1, s2, k2).recip();
    let two = lit::<T>(2.0);
    let d1 = -c1 * s1 - c3 * s1 * k2 + c4 * s2 * k1;
    let d2 = -c2 * s2 - c3 * s2 * k1 + c4 * s1 * k2;
    let u = two * d1 * d1 * fstar - c1 * k1 - c3 * k1 * k2 - c4 * s1 * s2;
    let v = two * d1 * d2 * fstar + c3 * s1 * s2 + c4 * k1 * k2;
    let w = two * d2 * d2 * fstar - c2 * k2 - c3 * k1 * k2 - c4 * s1 * s2;
    DensityDerivatives {
        f: c * fstar,
        d1,
        d2,
        u,
        v,
        w,
        scale: c * fstar * fstar,
    }
}
