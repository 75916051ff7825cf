//! Toroidal ridge PCA.
//!
//! A bivariate circular sample is summarized by the density ridge of a fitted
//! sine von Mises or wrapped Cauchy model: the ridge through the location,
//! expanded as a Fourier curve and parametrized by arc length, plays the role
//! of the first principal component. Observations get a position along the
//! curve and a scaled signed distance from it.
//!
//! Geometry, densities, ridge solvers and curves are generic over [`Real`]
//! (`f32`/`f64`); estimation and the pipeline work in `f64`, and the aliases
//! below name the `f64` instances.

pub mod curve;
pub mod error;
pub mod fitting;
pub mod geometry;
pub mod models;
pub mod pipeline;
pub mod ridge;
pub mod scalar;
pub mod scenarios;
pub mod special;

pub use error::{Result, TrpcaError};
pub use scalar::Real;

pub type TorusPoint = geometry::TorusPoint<f64>;
pub type ModelParams = models::ModelParams<f64>;
pub type BsvmParams = models::BsvmParams<f64>;
pub type BwcParams = models::BwcParams<f64>;
pub type BwnParams = models::BwnParams<f64>;
pub type RidgeSet = ridge::RidgeSet<f64>;
pub type ConnectedRidge = ridge::ConnectedRidge<f64>;
pub type FourierRidge = curve::FourierRidge<f64>;
pub type RidgeCurve = curve::RidgeCurve<f64>;
