use crate::error::{Result, TrpcaError};
use crate::geometry::{wrap, TorusPoint};
use crate::models::DensityDerivatives;
use crate::scalar::{lit, Real};
use crate::special::{bsvm_series_log_ratio, ln_bessel_i0};

/// Bivariate sine von Mises parameters, with the log normalizing constant cached.
#[derive(Debug, Clone, PartialEq)]
pub struct BsvmParams<T> {
    mu1: T,
    mu2: T,
    kappa1: T,
    kappa2: T,
    lambda: T,
    log_norm: T,
}

impl<T: Real> BsvmParams<T> {
    pub fn new(mu1: T, mu2: T, kappa1: T, kappa2: T, lambda: T) -> Result<Self> {
        for (name, v) in [("mu1", mu1), ("mu2", mu2), ("lambda", lambda)] {
            if !v.is_finite() {
                return Err(TrpcaError::InvalidArgument(format!("{name} must be finite, got {v}")));
            }
        }
        for (name, v) in [("kappa1", kappa1), ("kappa2", kappa2)] {
            if !(v.is_finite() && v >= T::zero()) {
                return Err(TrpcaError::InvalidArgument(format!(
                    "{name} must be finite and non-negative, got {v}"
                )));
            }
        }
        let log_norm = bsvm_log_norm_const(kappa1, kappa2, lambda)?;
        Ok(BsvmParams {
            mu1: wrap(mu1),
            mu2: wrap(mu2),
            kappa1,
            kappa2,
            lambda,
            log_norm,
        })
    }

    pub fn mu(&self) -> TorusPoint<T> {
        TorusPoint::new(self.mu1, self.mu2)
    }
    pub fn kappa1(&self) -> T {
        self.kappa1
    }
    pub fn kappa2(&self) -> T {
        self.kappa2
    }
    pub fn lambda(&self) -> T {
        self.lambda
    }

    /// Natural log of the density constant (the reciprocal of the kernel integral).
    pub fn log_norm_const(&self) -> T {
        self.log_norm
    }

    /// Sufficient condition for a single mode: `κ1 κ2 > λ²`.
    pub fn is_unimodal(&self) -> bool {
        self.kappa1 * self.kappa2 > self.lambda * self.lambda
    }

    pub fn with_location(&self, mu: TorusPoint<T>) -> Self {
        BsvmParams {
            mu1: mu.theta1(),
            mu2: mu.theta2(),
            ..self.clone()
        }
    }

    #[inline]
    fn exponent(&self, p: &TorusPoint<T>) -> T {
        let (s1, c1) = (p.theta1() - self.mu1).sin_cos();
        let (s2, c2) = (p.theta2() - self.mu2).sin_cos();
        self.kappa1 * c1 + self.kappa2 * c2 + self.lambda * s1 * s2
    }

    pub fn log_density(&self, p: &TorusPoint<T>) -> T {
        self.log_norm + self.exponent(p)
    }

    pub fn density(&self, p: &TorusPoint<T>) -> T {
        self.log_density(p).exp()
    }
}

/// Natural log of the density constant: minus the log of
/// `4π² Σ_m C(2m,m) (λ/2)^{2m} κ1^{-m} I_m(κ1) κ2^{-m} I_m(κ2)`.
pub fn bsvm_log_norm_const<T: Real>(kappa1: T, kappa2: T, lambda: T) -> Result<T> {
    if kappa1 < T::zero() || kappa2 < T::zero() {
        return Err(TrpcaError::InvalidArgument("concentrations must be non-negative".into()));
    }
    let log_integral = (lit::<T>(4.0) * T::PI() * T::PI()).ln()
        + ln_bessel_i0(kappa1)
        + ln_bessel_i0(kappa2)
        + bsvm_series_log_ratio(kappa1, kappa2, lambda)?;
    Ok(-log_integral)
}

/// Density constant, so that the density integrates to one over the torus.
pub fn bsvm_norm_const<T: Real>(kappa1: T, kappa2: T, lambda: T) -> Result<T> {
    Ok(bsvm_log_norm_const(kappa1, kappa2, lambda)?.exp())
}

/// Derivative components of the sine von Mises density; the common factor is the density itself.
pub fn bsvm_derivatives<T: Real>(p: &TorusPoint<T>, params: &BsvmParams<T>) -> DensityDerivatives<T> {
    derivatives_at(p.theta1() - params.mu1, p.theta2() - params.mu2, params)
}

/// Derivative components at `mu + offset`, without rounding the offset through the location.
pub(crate) fn bsvm_derivatives_offset<T: Real>(offset: &TorusPoint<T>, params: &BsvmParams<T>) -> DensityDerivatives<T> {
    derivatives_at(offset.theta1(), offset.theta2(), params)
}

fn derivatives_at<T: Real>(a1: T, a2: T, params: &BsvmParams<T>) -> DensityDerivatives<T> {
    let (s1, c1) = a1.sin_cos();
    let (s2, c2) = a2.sin_cos();
    let (k1, k2, l) = (params.kappa1, params.kappa2, params.lambda);
    let d1 = -k1 * s1 + l * s2 * c1;
    let d2 = -k2 * s2 + l * s1 * c2;
    let u = d1 * d1 - k1 * c1 - l * s1 * s2;
    let v = l * c1 * c2 + d1 * d2;
    let w = d2 * d2 - k2 * c2 - l * s1 * s2;
    let f = (params.log_norm + k1 * c1 + k2 * c2 + l * s1 * s2).exp();
    DensityDerivatives {
        f,
        d1,
        d2,
        u,
        v,
        w,
        scale: f,
    }
}
