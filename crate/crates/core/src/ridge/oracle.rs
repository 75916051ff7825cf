use crate::error::{Result, TrpcaError};
use crate::geometry::TorusPoint;
use crate::models::{bsvm_derivatives, bsvm_derivatives_offset, bwc_derivatives, bwc_derivatives_offset, BsvmParams, BwcParams, DensityDerivatives, ModelParams};
use crate::scalar::{lit, Real};

/// Domain on which a ridge is sought.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain<T> {
    /// The torus `[-π, π)²`.
    Periodic,
    /// A box of the plane; it must lie inside `[-π, π)²` since points are stored as torus points.
    Planar { lo: [T; 2], hi: [T; 2] },
}

/// Source of density values and derivative components.
pub trait DensityOracle<T: Real>: Sync {
    fn evaluate(&self, p: &TorusPoint<T>) -> DensityDerivatives<T>;

    fn domain(&self) -> Domain<T> {
        Domain::Periodic
    }

    /// Point the scan grids are aligned to (the location for the parametric models).
    fn anchor(&self) -> TorusPoint<T> {
        TorusPoint::new(T::zero(), T::zero())
    }

    /// Evaluation at `anchor + offset`. Parametric models evaluate the offset
    /// directly, which makes scans of shifted models bit-identical.
    fn evaluate_offset(&self, offset: &TorusPoint<T>) -> DensityDerivatives<T> {
        let a = self.anchor();
        self.evaluate(&a.shifted(offset.theta1(), offset.theta2()))
    }
}

impl<T: Real> DensityOracle<T> for BsvmParams<T> {
    fn evaluate(&self, p: &TorusPoint<T>) -> DensityDerivatives<T> {
        bsvm_derivatives(p, self)
    }

    fn anchor(&self) -> TorusPoint<T> {
        self.mu()
    }

    fn evaluate_offset(&self, offset: &TorusPoint<T>) -> DensityDerivatives<T> {
        bsvm_derivatives_offset(offset, self)
    }
}

impl<T: Real> DensityOracle<T> for BwcParams<T> {
    fn evaluate(&self, p: &TorusPoint<T>) -> DensityDerivatives<T> {
        bwc_derivatives(p, self)
    }

    fn anchor(&self) -> TorusPoint<T> {
        self.mu()
    }

    fn evaluate_offset(&self, offset: &TorusPoint<T>) -> DensityDerivatives<T> {
        bwc_derivatives_offset(offset, self)
    }
}

impl<T: Real> ModelParams<T> {
    /// The model as a ridge oracle; only the sine von Mises and wrapped Cauchy qualify.
    pub fn ridge_oracle(&self) -> Result<&dyn DensityOracle<T>> {
        match self {
            ModelParams::Bsvm(p) => Ok(p),
            ModelParams::Bwc(p) => Ok(p),
            ModelParams::Bwn(_) => Err(TrpcaError::InvalidArgument(
                "wrapped normal ridges are not supported".into(),
            )),
        }
    }
}

/// Bivariate normal density on a planar box.
#[derive(Debug, Clone, PartialEq)]
pub struct PlanarGaussian<T> {
    mean: [T; 2],
    precision: [[T; 2]; 2],
    norm: T,
    lo: [T; 2],
    hi: [T; 2],
}

impl<T: Real> PlanarGaussian<T> {
    pub fn new(mean: [T; 2], cov: [[T; 2]; 2], lo: [T; 2], hi: [T; 2]) -> Result<Self> {
        let det = cov[0][0] * cov[1][1] - cov[0][1] * cov[1][0];
        if !(cov[0][0] > T::zero() && det > T::zero()) || cov[0][1] != cov[1][0] {
            return Err(TrpcaError::InvalidArgument("covariance must be symmetric positive definite".into()));
        }
        let pi = T::PI();
        if lo.iter().chain(hi.iter()).any(|&x| x < -pi || x >= pi) || lo[0] >= hi[0] || lo[1] >= hi[1] {
            return Err(TrpcaError::InvalidArgument("planar box must be a proper subset of [-π, π)²".into()));
        }
        let precision = [
            [cov[1][1] / det, -cov[0][1] / det],
            [-cov[1][0] / det, cov[0][0] / det],
        ];
        Ok(PlanarGaussian {
            mean,
            precision,
            norm: T::one() / (T::two_pi() * det.sqrt()),
            lo,
            hi,
        })
    }
}

impl<T: Real> DensityOracle<T> for PlanarGaussian<T> {
    fn evaluate(&self, p: &TorusPoint<T>) -> DensityDerivatives<T> {
        let x = [p.theta1() - self.mean[0], p.theta2() - self.mean[1]];
        let a = self.precision;
        // Σ⁻¹ x
        let y = [a[0][0] * x[0] + a[0][1] * x[1], a[1][0] * x[0] + a[1][1] * x[1]];
        let q = x[0] * y[0] + x[1] * y[1];
        let f = self.norm * (-q / lit(2.0)).exp();
        let (d1, d2) = (-y[0], -y[1]);
        DensityDerivatives {
            f,
            d1,
            d2,
            u: y[0] * y[0] - a[0][0],
            v: y[0] * y[1] - a[0][1],
            w: y[1] * y[1] - a[1][1],
            scale: f,
        }
    }

    fn domain(&self) -> Domain<T> {
        Domain::Planar { lo: self.lo, hi: self.hi }
    }

    fn anchor(&self) -> TorusPoint<T> {
        TorusPoint::new(self.mean[0], self.mean[1])
    }
}
