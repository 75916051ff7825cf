use crate::error::{Result, TrpcaError};
use crate::geometry::TorusPoint;
use crate::scalar::{lit, Real};

/// Bivariate wrapped normal: a planar Gaussian wrapped coordinatewise.
#[derive(Debug, Clone, PartialEq)]
pub struct BwnParams<T> {
    mu: TorusPoint<T>,
    sigma1_sq: T,
    sigma2_sq: T,
    rho: T,
}

impl<T: Real> BwnParams<T> {
    pub fn new(mu: TorusPoint<T>, sigma1_sq: T, sigma2_sq: T, rho: T) -> Result<Self> {
        if !(sigma1_sq > T::zero() && sigma2_sq > T::zero() && sigma1_sq.is_finite() && sigma2_sq.is_finite()) {
            return Err(TrpcaError::InvalidArgument("variances must be positive and finite".into()));
        }
        if !(rho > -T::one() && rho < T::one()) {
            return Err(TrpcaError::InvalidArgument(format!("rho must lie in (-1, 1), got {rho}")));
        }
        Ok(BwnParams {
            mu,
            sigma1_sq,
            sigma2_sq,
            rho,
        })
    }

    pub fn mu(&self) -> TorusPoint<T> {
        self.mu
    }
    pub fn sigma1_sq(&self) -> T {
        self.sigma1_sq
    }
    pub fn sigma2_sq(&self) -> T {
        self.sigma2_sq
    }
    pub fn rho(&self) -> T {
        self.rho
    }

    pub fn with_location(&self, mu: TorusPoint<T>) -> Self {
        BwnParams { mu, ..self.clone() }
    }

    /// Lower Cholesky factor `[[l11, 0], [l21, l22]]` of the covariance.
    pub fn cholesky(&self) -> (T, T, T) {
        let s1 = self.sigma1_sq.sqrt();
        let s2 = self.sigma2_sq.sqrt();
        (s1, self.rho * s2, s2 * (T::one() - self.rho * self.rho).sqrt())
    }

    /// Wrapped density, summing the planar Gaussian over enough periods.
    pub fn density(&self, p: &TorusPoint<T>) -> T {
        let d = p.relative_to(&self.mu);
        let smax = self.sigma1_sq.max(self.sigma2_sq).sqrt();
        let periods = (lit::<T>(7.0) * smax / T::two_pi()).ceil().to_i64().unwrap_or(1).max(1) + 1;
        let (s1, s2) = (self.sigma1_sq.sqrt(), self.sigma2_sq.sqrt());
        let one_m = T::one() - self.rho * self.rho;
        let norm = T::one() / (T::two_pi() * s1 * s2 * one_m.sqrt());
        let mut total = T::zero();
        for k1 in -periods..=periods {
            let x = (d.theta1() + T::two_pi() * lit(k1 as f64)) / s1;
            for k2 in -periods..=periods {
                let y = (d.theta2() + T::two_pi() * lit(k2 as f64)) / s2;
                let q = (x * x - lit::<T>(2.0) * self.rho * x * y + y * y) / one_m;
                total = total + (-q / lit(2.0)).exp();
            }
        }
        norm * total
    }
}
