//! Maximum-likelihood fitting of the sine von Mises and wrapped Cauchy models,
//! with restricted refits, BIC and likelihood-ratio tests.

use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Result, TrpcaError};
use crate::geometry::{mean_resultant, TorusPoint};
use crate::models::{BsvmParams, BwcParams, ModelKind, ModelParams};
use crate::special::bessel_ratio_a1;

/// Smallest sample accepted by the estimators.
pub const MIN_SAMPLE: usize = 10;
pub const KAPPA_CAP: f64 = 500.0;
pub const XI_CAP: f64 = 0.995;
/// Mean resultant lengths at or above this trigger the degenerate-concentration warning.
pub const DEGENERATE_RESULTANT: f64 = 0.999;

/// Tolerance on "restricted beats unrestricted" before it counts as an optimizer failure.
const DOMINANCE_TOL: f64 = 1e-6;
const INITIAL_STEP: f64 = 0.2;
const RESTART_SPREAD: f64 = 0.1;

/// Parameter restriction of a nested model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Restriction {
    /// Equal concentrations (`κ1 = κ2` or `ξ1 = ξ2`).
    Homogeneous,
    /// No dependence (`λ = 0` or `ρ = 0`).
    Independent,
}

impl std::fmt::Display for Restriction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Restriction::Homogeneous => "homogeneous",
            Restriction::Independent => "independent",
        })
    }
}

/// Simplex search settings.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitConfig {
    pub max_iter: usize,
    /// Convergence threshold on the simplex diameter (unconstrained coordinates).
    pub tol: f64,
    /// Restarts after the first search, each from a perturbed copy of the best point.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            max_iter: 2000,
            tol: 1e-8,
            restarts: 3,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FitResult {
    pub params: ModelParams<f64>,
    pub loglik: f64,
    pub bic: f64,
    pub n: usize,
    pub converged: bool,
    pub restrictions: BTreeSet<Restriction>,
}

impl FitResult {
    pub fn kind(&self) -> ModelKind {
        self.params.kind()
    }

    /// Number of free parameters.
    pub fn dof(&self) -> usize {
        5 - self.restrictions.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LrtResult {
    pub statistic: f64,
    pub critical: f64,
    pub rejected: bool,
    pub alpha: f64,
}

pub fn log_likelihood(params: &ModelParams<f64>, sample: &[TorusPoint<f64>]) -> f64 {
    sample.iter().map(|p| params.log_density(p)).sum()
}

pub fn bic(loglik: f64, dof: usize, n: usize) -> f64 {
    dof as f64 * (n as f64).ln() - 2.0 * loglik
}

fn check_family(kind: ModelKind) -> Result<()> {
    match kind {
        ModelKind::Bsvm | ModelKind::Bwc => Ok(()),
        ModelKind::Bwn => Err(TrpcaError::InvalidArgument(
            "only the sine von Mises and wrapped Cauchy models are fitted".into(),
        )),
    }
}

fn check_sample(sample: &[TorusPoint<f64>]) -> Result<()> {
    if sample.len() < MIN_SAMPLE {
        return Err(TrpcaError::InsufficientData { needed: MIN_SAMPLE, got: sample.len() });
    }
    if sample.iter().any(|p| !(p.theta1().is_finite() && p.theta2().is_finite())) {
        return Err(TrpcaError::InvalidArgument("sample contains non-finite angles".into()));
    }
    Ok(())
}

/// Inverse of `A(κ) = I1(κ)/I0(κ)` by bisection on `[0, KAPPA_CAP]`.
pub fn inverse_bessel_ratio(rbar: f64) -> f64 {
    if rbar <= 0.0 {
        return 0.0;
    }
    if rbar >= bessel_ratio_a1(KAPPA_CAP) {
        return KAPPA_CAP;
    }
    let (mut lo, mut hi) = (0.0, KAPPA_CAP);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if bessel_ratio_a1(mid) < rbar {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// Moment-based starting values: marginal circular means, concentrations from
/// the mean resultant lengths, and a dependence start of 0 (sine von Mises) or
/// the clipped circular correlation (wrapped Cauchy).
pub fn moment_start(sample: &[TorusPoint<f64>], kind: ModelKind) -> Result<ModelParams<f64>> {
    check_family(kind)?;
    check_sample(sample)?;
    let t1: Vec<f64> = sample.iter().map(|p| p.theta1()).collect();
    let t2: Vec<f64> = sample.iter().map(|p| p.theta2()).collect();
    let (m1, r1) = mean_resultant(&t1)?;
    let (m2, r2) = mean_resultant(&t2)?;
    for (j, r) in [(1, r1), (2, r2)] {
        if r >= DEGENERATE_RESULTANT {
            log::warn!("coordinate {j} is nearly degenerate (mean resultant length {r:.6}); concentration capped");
        }
    }
    Ok(match kind {
        ModelKind::Bsvm => ModelParams::Bsvm(BsvmParams::new(
            m1,
            m2,
            inverse_bessel_ratio(r1),
            inverse_bessel_ratio(r2),
            0.0,
        )?),
        _ => {
            let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
            for (a, b) in t1.iter().zip(&t2) {
                let (x, y) = ((a - m1).sin(), (b - m2).sin());
                sxy += x * y;
                sxx += x * x;
                syy += y * y;
            }
            let corr = sxy / (sxx * syy).sqrt();
            let rho = if corr.is_finite() { corr.signum() * corr.abs().min(0.5) } else { 0.0 };
            ModelParams::Bwc(BwcParams::new(m1, m2, r1.min(XI_CAP), r2.min(XI_CAP), rho)?)
        }
    })
}

/// Sample statistics the likelihoods are evaluated from.
struct Data {
    n: f64,
    s1: Vec<f64>,
    c1: Vec<f64>,
    s2: Vec<f64>,
    c2: Vec<f64>,
    /// Sums of s1, c1, s2, c2, s1s2, s1c2, c1s2, c1c2.
    sums: [f64; 8],
}

impl Data {
    fn new(sample: &[TorusPoint<f64>]) -> Self {
        let (s1, c1): (Vec<f64>, Vec<f64>) = sample.iter().map(|p| p.theta1().sin_cos()).unzip();
        let (s2, c2): (Vec<f64>, Vec<f64>) = sample.iter().map(|p| p.theta2().sin_cos()).unzip();
        let mut sums = [0.0; 8];
        for i in 0..sample.len() {
            let row = [s1[i], c1[i], s2[i], c2[i], s1[i] * s2[i], s1[i] * c2[i], c1[i] * s2[i], c1[i] * c2[i]];
            for (acc, v) in sums.iter_mut().zip(row) {
                *acc += v;
            }
        }
        Data { n: sample.len() as f64, s1, c1, s2, c2, sums }
    }

    fn loglik(&self, params: &ModelParams<f64>) -> f64 {
        let mu = params.location();
        let (sm1, cm1) = mu.theta1().sin_cos();
        let (sm2, cm2) = mu.theta2().sin_cos();
        match params {
            ModelParams::Bsvm(p) => {
                let [s1, c1, s2, c2, s1s2, s1c2, c1s2, c1c2] = self.sums;
                let cos1 = c1 * cm1 + s1 * sm1;
                let cos2 = c2 * cm2 + s2 * sm2;
                // Σ sin(θ1 − μ1) sin(θ2 − μ2)
                let sin12 = cm1 * cm2 * s1s2 - cm1 * sm2 * s1c2 - sm1 * cm2 * c1s2 + sm1 * sm2 * c1c2;
                self.n * p.log_norm_const() + p.kappa1() * cos1 + p.kappa2() * cos2 + p.lambda() * sin12
            }
            ModelParams::Bwc(p) => {
                let [c, k0, k1, k2, k3, k4] = p.constants();
                let mut acc = 0.0;
                for i in 0..self.s1.len() {
                    let d1s = self.s1[i] * cm1 - self.c1[i] * sm1;
                    let d1c = self.c1[i] * cm1 + self.s1[i] * sm1;
                    let d2s = self.s2[i] * cm2 - self.c2[i] * sm2;
                    let d2c = self.c2[i] * cm2 + self.s2[i] * sm2;
                    acc += (k0 - k1 * d1c - k2 * d2c - k3 * d1c * d2c - k4 * d1s * d2s).ln();
                }
                self.n * c.ln() - acc
            }
            ModelParams::Bwn(_) => f64::NAN,
        }
    }
}

/// Map between model parameters and the unconstrained search coordinates
/// `(μ1, μ2, t(c1)[, t(c2)][, t(d)])`.
struct Layout {
    kind: ModelKind,
    homogeneous: bool,
    independent: bool,
}

fn logit(x: f64) -> f64 {
    (x / (1.0 - x)).ln()
}

fn logistic(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

impl Layout {
    fn new(kind: ModelKind, restrictions: &BTreeSet<Restriction>) -> Self {
        Layout {
            kind,
            homogeneous: restrictions.contains(&Restriction::Homogeneous),
            independent: restrictions.contains(&Restriction::Independent),
        }
    }

    fn conc_to(&self, c: f64) -> f64 {
        match self.kind {
            ModelKind::Bsvm => c.max(1e-3).ln(),
            _ => logit(c.clamp(1e-3, XI_CAP)),
        }
    }

    fn conc_from(&self, z: f64) -> f64 {
        match self.kind {
            ModelKind::Bsvm => z.exp(),
            _ => logistic(z),
        }
    }

    fn dep_to(&self, d: f64) -> f64 {
        match self.kind {
            ModelKind::Bsvm => d,
            _ => d.clamp(-0.995, 0.995).atanh(),
        }
    }

    fn dep_from(&self, z: f64) -> f64 {
        match self.kind {
            ModelKind::Bsvm => z,
            _ => z.tanh(),
        }
    }

    fn encode(&self, p: &ModelParams<f64>) -> Vec<f64> {
        let mu = p.location();
        let (c1, c2) = p.concentrations();
        let mut z = vec![mu.theta1(), mu.theta2()];
        if self.homogeneous {
            z.push(0.5 * (self.conc_to(c1) + self.conc_to(c2)));
        } else {
            z.push(self.conc_to(c1));
            z.push(self.conc_to(c2));
        }
        if !self.independent {
            z.push(self.dep_to(p.dependence()));
        }
        z
    }

    fn decode(&self, z: &[f64]) -> Result<ModelParams<f64>> {
        let c1 = self.conc_from(z[2]);
        let c2 = if self.homogeneous { c1 } else { self.conc_from(z[3]) };
        let d = if self.independent { 0.0 } else { self.dep_from(z[z.len() - 1]) };
        Ok(match self.kind {
            ModelKind::Bsvm => ModelParams::Bsvm(BsvmParams::new(z[0], z[1], c1, c2, d)?),
            _ => ModelParams::Bwc(BwcParams::new(z[0], z[1], c1, c2, d)?),
        })
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub converged: bool,
}

/// Nelder–Mead simplex search. Stops when every vertex lies within `tol` of the
/// best one or after `max_iter` iterations. Non-finite objective values are
/// treated as `+∞`.
pub(crate) fn nelder_mead<F: Fn(&[f64]) -> f64>(f: F, x0: &[f64], step: f64, max_iter: usize, tol: f64) -> Minimum {
    let d = x0.len();
    let eval = |x: &[f64]| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(d + 1);
    simplex.push((x0.to_vec(), eval(x0)));
    for i in 0..d {
        let mut x = x0.to_vec();
        x[i] += step;
        let v = eval(&x);
        simplex.push((x, v));
    }
    let along = |c: &[f64], w: &[f64], t: f64| -> Vec<f64> { c.iter().zip(w).map(|(c, w)| c + t * (w - c)).collect() };
    let mut converged = false;
    for _ in 0..max_iter {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let best = &simplex[0].0;
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| x.iter().zip(best).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
            .fold(0.0, f64::max);
        if diameter < tol {
            converged = true;
            break;
        }
        let mut centroid = vec![0.0; d];
        for (x, _) in &simplex[..d] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / d as f64;
            }
        }
        let worst = simplex[d].clone();
        let reflected = along(&centroid, &worst.0, -1.0);
        let fr = eval(&reflected);
        if fr < simplex[0].1 {
            let expanded = along(&centroid, &worst.0, -2.0);
            let fe = eval(&expanded);
            simplex[d] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            continue;
        }
        if fr < simplex[d - 1].1 {
            simplex[d] = (reflected, fr);
            continue;
        }
        let (contracted, fc) = if fr < worst.1 {
            let x = along(&centroid, &reflected, 0.5);
            let v = eval(&x);
            (x, v)
        } else {
            let x = along(&centroid, &worst.0, 0.5);
            let v = eval(&x);
            (x, v)
        };
        if fc < worst.1.min(fr) {
            simplex[d] = (contracted, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for (x, v) in simplex[1..].iter_mut() {
            *x = along(&best, x, 0.5);
            *v = eval(x);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, value) = simplex.swap_remove(0);
    Minimum { x, value, converged }
}

/// Maximum-likelihood fit from the moment-based start.
pub fn fit_mle(
    sample: &[TorusPoint<f64>],
    kind: ModelKind,
    restrictions: &BTreeSet<Restriction>,
    config: &FitConfig,
) -> Result<FitResult> {
    let start = moment_start(sample, kind)?;
    fit_mle_from(sample, &start, restrictions, config)
}

/// Maximum-likelihood fit starting from `start` (restrictions are imposed on it).
pub fn fit_mle_from(
    sample: &[TorusPoint<f64>],
    start: &ModelParams<f64>,
    restrictions: &BTreeSet<Restriction>,
    config: &FitConfig,
) -> Result<FitResult> {
    let kind = start.kind();
    check_family(kind)?;
    check_sample(sample)?;
    if config.max_iter == 0 || !(config.tol > 0.0) {
        return Err(TrpcaError::InvalidArgument("fit needs max_iter > 0 and a positive tolerance".into()));
    }
    let data = Data::new(sample);
    let layout = Layout::new(kind, restrictions);
    let objective = |z: &[f64]| match layout.decode(z) {
        Ok(p) => -data.loglik(&p),
        Err(_) => f64::INFINITY,
    };

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut best = nelder_mead(objective, &layout.encode(start), INITIAL_STEP, config.max_iter, config.tol);
    let mut any_converged = best.converged;
    for _ in 0..config.restarts {
        let x0: Vec<f64> = best
            .x
            .iter()
            .map(|v| {
                let e: f64 = StandardNormal.sample(&mut rng);
                v + RESTART_SPREAD * e
            })
            .collect();
        let run = nelder_mead(objective, &x0, INITIAL_STEP, config.max_iter, config.tol);
        any_converged |= run.converged;
        if run.value < best.value {
            best = run;
        }
    }
    if !best.value.is_finite() {
        return Err(TrpcaError::Numeric("likelihood is not finite anywhere the search went".into()));
    }
    let params = layout.decode(&best.x)?;
    let loglik = log_likelihood(&params, sample);
    let dof = 5 - restrictions.len();
    let result = FitResult {
        params,
        loglik,
        bic: bic(loglik, dof, sample.len()),
        n: sample.len(),
        converged: any_converged,
        restrictions: restrictions.clone(),
    };
    if !any_converged {
        return Err(TrpcaError::Convergence {
            message: format!(
                "{kind} fit did not reach simplex diameter {:e} in {} iterations on any of {} starts",
                config.tol,
                config.max_iter,
                config.restarts + 1
            ),
            best: Some(Box::new(result)),
        });
    }
    Ok(result)
}

/// Fit under `restricted`, then make sure the less restricted `reference` is not
/// beaten: if it is, the reference is refitted from the restricted optimum.
/// Returns `(reference, restricted)`.
pub fn fit_nested(
    sample: &[TorusPoint<f64>],
    reference: FitResult,
    restricted: &BTreeSet<Restriction>,
    config: &FitConfig,
) -> Result<(FitResult, FitResult)> {
    let start = moment_start(sample, reference.kind())?;
    let inner = fit_mle_from(sample, &start, restricted, config)?;
    if inner.loglik <= reference.loglik {
        return Ok((reference, inner));
    }
    let again = fit_mle_from(sample, &inner.params, &reference.restrictions, config)?;
    let outer = if again.loglik >= reference.loglik { again } else { reference };
    Ok((outer, inner))
}

/// Likelihood-ratio test of one added restriction at level `alpha`.
pub fn lrt(unrestricted: &FitResult, restricted: &FitResult, alpha: f64) -> Result<LrtResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(TrpcaError::InvalidArgument(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    if unrestricted.kind() != restricted.kind() || unrestricted.n != restricted.n {
        return Err(TrpcaError::InvalidArgument("nested fits must share the family and the sample".into()));
    }
    if !restricted.restrictions.is_superset(&unrestricted.restrictions)
        || restricted.restrictions.len() != unrestricted.restrictions.len() + 1
    {
        return Err(TrpcaError::InvalidArgument(
            "the restricted fit must add exactly one restriction".into(),
        ));
    }
    let raw = 2.0 * (unrestricted.loglik - restricted.loglik);
    if raw < -DOMINANCE_TOL {
        return Err(TrpcaError::OptimizerInconsistency(-raw / 2.0));
    }
    let statistic = raw.max(0.0);
    // χ²₁ is the square of a standard normal; its quantile is exact this way
    let z = Normal::new(0.0, 1.0)
        .map_err(|e| TrpcaError::Internal(e.to_string()))?
        .inverse_cdf(1.0 - alpha / 2.0);
    let critical = z * z;
    Ok(LrtResult { statistic, critical, rejected: statistic > critical, alpha })
}
