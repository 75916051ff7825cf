//! Seeded samplers. BSvM and BWC use envelope rejection against the uniform
//! density on the torus; BWN maps correlated normal deviates through `cmod`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Result, TrpcaError};
use crate::geometry::TorusPoint;
use crate::models::{BwnParams, ModelParams};

/// Side of the grid used to bound the density for rejection sampling.
pub const SAMPLER_GRID: usize = 256;
const ENVELOPE_MARGIN: f64 = 1.1;
const RATE_CHECK_PROPOSALS: u64 = 100_000;
const MIN_ACCEPTANCE: f64 = 1e-4;

/// Counter-based generator for `(seed, stream)`; distinct streams are independent.
pub fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Draws `n` points from `params`, deterministically for a given seed.
pub fn sample(params: &ModelParams<f64>, n: usize, seed: u64) -> Result<Vec<TorusPoint<f64>>> {
    let mut rng = rng_stream(seed, 0);
    sample_with_rng(params, n, &mut rng)
}

pub fn sample_with_rng<R: Rng + ?Sized>(
    params: &ModelParams<f64>,
    n: usize,
    rng: &mut R,
) -> Result<Vec<TorusPoint<f64>>> {
    if n == 0 {
        return Err(TrpcaError::InvalidArgument("sample size must be at least 1".into()));
    }
    match params {
        ModelParams::Bwn(p) => Ok(sample_bwn(p, n, rng)),
        _ => sample_rejection(params, n, rng),
    }
}

fn envelope(params: &ModelParams<f64>) -> f64 {
    use std::f64::consts::{PI, TAU};
    let mu = params.location();
    let step = TAU / SAMPLER_GRID as f64;
    let mut max = 0.0f64;
    for i in 0..SAMPLER_GRID {
        let a = -PI + step * i as f64;
        for j in 0..SAMPLER_GRID {
            let b = -PI + step * j as f64;
            max = max.max(params.density(&mu.shifted(a, b)));
        }
    }
    ENVELOPE_MARGIN * max
}

fn sample_rejection<R: Rng + ?Sized>(
    params: &ModelParams<f64>,
    n: usize,
    rng: &mut R,
) -> Result<Vec<TorusPoint<f64>>> {
    use std::f64::consts::{PI, TAU};
    let env = envelope(params);
    let mut out = Vec::with_capacity(n);
    let mut proposals: u64 = 0;
    while out.len() < n {
        let p = TorusPoint::new(rng.gen::<f64>() * TAU - PI, rng.gen::<f64>() * TAU - PI);
        proposals += 1;
        if rng.gen::<f64>() * env <= params.density(&p) {
            out.push(p);
        }
        if proposals == RATE_CHECK_PROPOSALS {
            let rate = out.len() as f64 / proposals as f64;
            if rate < MIN_ACCEPTANCE {
                return Err(TrpcaError::ConcentrationTooHigh { rate });
            }
        }
    }
    Ok(out)
}

fn sample_bwn<R: Rng + ?Sized>(p: &BwnParams<f64>, n: usize, rng: &mut R) -> Vec<TorusPoint<f64>> {
    let (l11, l21, l22) = p.cholesky();
    let mu = p.mu();
    (0..n)
        .map(|_| {
            let z1: f64 = rng.sample(StandardNormal);
            let z2: f64 = rng.sample(StandardNormal);
            mu.shifted(l11 * z1, l21 * z1 + l22 * z2)
        })
        .collect()
}
