//! Bivariate toroidal distributions: sine von Mises (BSvM), wrapped Cauchy
//! (BWC) and wrapped normal (BWN).
//!
//! The two ridge-bearing models expose their density together with gradient
//! and Hessian components through [`DensityDerivatives`]. BWN only supports
//! evaluation and sampling.

mod bsvm;
mod bwc;
mod bwn;
mod sampling;

use std::collections::BTreeMap;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub(crate) use bsvm::bsvm_derivatives_offset;
pub(crate) use bwc::bwc_derivatives_offset;
pub use bsvm::{bsvm_derivatives, bsvm_log_norm_const, bsvm_norm_const, BsvmParams};
pub use bwc::{bwc_derivatives, BwcParams};
pub use bwn::BwnParams;
pub use sampling::{rng_stream, sample, sample_with_rng, SAMPLER_GRID};

use crate::error::{Result, TrpcaError};
use crate::geometry::TorusPoint;
use crate::scalar::Real;

/// Density value plus first and second derivative components at a point.
///
/// `d1, d2, u, v, w` are the gradient and Hessian entries divided by the common
/// positive factor `scale`: the true gradient is `scale * (d1, d2)` and the true
/// Hessian is `scale * [[u, v], [v, w]]`. The factor changes neither ridge
/// equation nor eigenvalue signs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityDerivatives<T> {
    pub f: T,
    pub d1: T,
    pub d2: T,
    pub u: T,
    pub v: T,
    pub w: T,
    pub scale: T,
}

impl<T: Real> DensityDerivatives<T> {
    pub fn gradient(&self) -> [T; 2] {
        [self.scale * self.d1, self.scale * self.d2]
    }

    pub fn hessian(&self) -> [[T; 2]; 2] {
        let s = self.scale;
        [[s * self.u, s * self.v], [s * self.v, s * self.w]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelKind {
    Bsvm,
    Bwc,
    Bwn,
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            ModelKind::Bsvm => "bsvm",
            ModelKind::Bwc => "bwc",
            ModelKind::Bwn => "bwn",
        })
    }
}

/// Parameters of one of the supported toroidal models.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelParams<T> {
    Bsvm(BsvmParams<T>),
    Bwc(BwcParams<T>),
    Bwn(BwnParams<T>),
}

impl<T: Real> ModelParams<T> {
    pub fn kind(&self) -> ModelKind {
        match self {
            ModelParams::Bsvm(_) => ModelKind::Bsvm,
            ModelParams::Bwc(_) => ModelKind::Bwc,
            ModelParams::Bwn(_) => ModelKind::Bwn,
        }
    }

    pub fn location(&self) -> TorusPoint<T> {
        match self {
            ModelParams::Bsvm(p) => p.mu(),
            ModelParams::Bwc(p) => p.mu(),
            ModelParams::Bwn(p) => p.mu(),
        }
    }

    /// Marginal concentrations (κ for BSvM, ξ for BWC, 1/σ² for BWN).
    pub fn concentrations(&self) -> (T, T) {
        match self {
            ModelParams::Bsvm(p) => (p.kappa1(), p.kappa2()),
            ModelParams::Bwc(p) => (p.xi1(), p.xi2()),
            ModelParams::Bwn(p) => (p.sigma1_sq().recip(), p.sigma2_sq().recip()),
        }
    }

    /// Dependence parameter (λ or ρ).
    pub fn dependence(&self) -> T {
        match self {
            ModelParams::Bsvm(p) => p.lambda(),
            ModelParams::Bwc(p) => p.rho(),
            ModelParams::Bwn(p) => p.rho(),
        }
    }

    /// Density value at `p`.
    pub fn density(&self, p: &TorusPoint<T>) -> T {
        match self {
            ModelParams::Bsvm(m) => m.density(p),
            ModelParams::Bwc(m) => m.density(p),
            ModelParams::Bwn(m) => m.density(p),
        }
    }

    pub fn log_density(&self, p: &TorusPoint<T>) -> T {
        match self {
            ModelParams::Bsvm(m) => m.log_density(p),
            ModelParams::Bwc(m) => m.log_density(p),
            ModelParams::Bwn(m) => m.density(p).ln(),
        }
    }

    /// Derivative components, for the ridge-bearing models.
    pub fn derivatives(&self, p: &TorusPoint<T>) -> Result<DensityDerivatives<T>> {
        match self {
            ModelParams::Bsvm(m) => Ok(bsvm_derivatives(p, m)),
            ModelParams::Bwc(m) => Ok(bwc_derivatives(p, m)),
            ModelParams::Bwn(_) => Err(TrpcaError::InvalidArgument(
                "wrapped normal ridges are not supported".into(),
            )),
        }
    }

    /// The same model recentred at `mu`.
    pub fn with_location(&self, mu: TorusPoint<T>) -> ModelParams<T> {
        match self {
            ModelParams::Bsvm(p) => ModelParams::Bsvm(p.with_location(mu)),
            ModelParams::Bwc(p) => ModelParams::Bwc(p.with_location(mu)),
            ModelParams::Bwn(p) => ModelParams::Bwn(p.with_location(mu)),
        }
    }

    /// Named parameter values, in reporting order.
    pub fn parameter_map(&self) -> BTreeMap<String, f64> {
        let mu = self.location();
        let mut map = BTreeMap::new();
        map.insert("mu1".to_string(), mu.theta1().to_f64_lossy());
        map.insert("mu2".to_string(), mu.theta2().to_f64_lossy());
        let names: [(&str, T); 3] = match self {
            ModelParams::Bsvm(p) => [("kappa1", p.kappa1()), ("kappa2", p.kappa2()), ("lambda", p.lambda())],
            ModelParams::Bwc(p) => [("xi1", p.xi1()), ("xi2", p.xi2()), ("rho", p.rho())],
            ModelParams::Bwn(p) => [("sigma1_sq", p.sigma1_sq()), ("sigma2_sq", p.sigma2_sq()), ("rho", p.rho())],
        };
        for (k, v) in names {
            map.insert(k.to_string(), v.to_f64_lossy());
        }
        map
    }

    /// Rebuilds parameters from a model tag and a parameter map.
    pub fn from_parameter_map(kind: ModelKind, map: &BTreeMap<String, f64>) -> Result<Self> {
        let get = |k: &str| -> Result<T> {
            map.get(k)
                .map(|&v| T::lit(v))
                .ok_or_else(|| TrpcaError::InvalidArgument(format!("missing parameter `{k}`")))
        };
        let (mu1, mu2) = (get("mu1")?, get("mu2")?);
        Ok(match kind {
            ModelKind::Bsvm => ModelParams::Bsvm(BsvmParams::new(
                mu1,
                mu2,
                get("kappa1")?,
                get("kappa2")?,
                get("lambda")?,
            )?),
            ModelKind::Bwc => ModelParams::Bwc(BwcParams::new(mu1, mu2, get("xi1")?, get("xi2")?, get("rho")?)?),
            ModelKind::Bwn => ModelParams::Bwn(BwnParams::new(
                TorusPoint::new(mu1, mu2),
                get("sigma1_sq")?,
                get("sigma2_sq")?,
                get("rho")?,
            )?),
        })
    }
}

#[derive(Serialize, Deserialize)]
struct ParamsDoc {
    model: ModelKind,
    parameters: BTreeMap<String, f64>,
}

impl<T: Real> Serialize for ModelParams<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        ParamsDoc {
            model: self.kind(),
            parameters: self.parameter_map(),
        }
        .serialize(serializer)
    }
}

impl<'de, T: Real> Deserialize<'de> for ModelParams<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let doc = ParamsDoc::deserialize(deserializer)?;
        ModelParams::from_parameter_map(doc.model, &doc.parameters).map_err(serde::de::Error::custom)
    }
}

/// Density of `params` at `p`.
pub fn density<T: Real>(p: &TorusPoint<T>, params: &ModelParams<T>) -> T {
    params.density(p)
}
