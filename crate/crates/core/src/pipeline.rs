//! End-to-end TR-PCA: model selection, nested tests, ridge construction,
//! scores and proportion of variance explained; plus the angular-PCA baseline.

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::{Matrix2, SymmetricEigen};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::curve::{arclength_param, fourier_fit, RidgeCurve, DEFAULT_FOURIER_M};
use crate::error::{Result, TrpcaError};
use crate::fitting::{fit_mle, fit_mle_from, fit_nested, lrt, FitConfig, FitResult, LrtResult, Restriction, MIN_SAMPLE};
use crate::geometry::{circular_frechet, circular_mean, mean_resultant, wrap, Coord, TorusPoint};
use crate::models::{ModelKind, ModelParams};
use crate::ridge::{connected_component, defaults, explicit_edge_ridge, ridge_implicit, ConnectedRidge, EdgeCase, ImplicitConfig};

/// Resolution of the grid the score scale `m2` is maximized over.
pub const SCORE_GRID: usize = 128;
/// Projection distance below which a point counts as on the ridge.
pub const ON_RIDGE: f64 = 1e-9;

/// Which families to fit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelChoice {
    #[default]
    Auto,
    Bsvm,
    Bwc,
}

impl ModelChoice {
    fn families(self) -> Vec<ModelKind> {
        match self {
            ModelChoice::Auto => vec![ModelKind::Bsvm, ModelKind::Bwc],
            ModelChoice::Bsvm => vec![ModelKind::Bsvm],
            ModelChoice::Bwc => vec![ModelKind::Bwc],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub model: ModelChoice,
    /// Level of both likelihood-ratio tests.
    pub alpha: f64,
    pub fourier_m: usize,
    pub grid_n: usize,
    pub fit: FitConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            model: ModelChoice::Auto,
            alpha: 0.05,
            fourier_m: DEFAULT_FOURIER_M,
            grid_n: defaults::GRID_N,
            fit: FitConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 0.5) {
            return Err(TrpcaError::InvalidArgument(format!("alpha must lie in (0, 0.5), got {}", self.alpha)));
        }
        if self.fourier_m < 1 {
            return Err(TrpcaError::InvalidArgument("Fourier order must be at least 1".into()));
        }
        Ok(())
    }
}

/// First and second TR-PCA scores with the scale used for the second.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Scores {
    pub s1: Vec<f64>,
    pub s2: Vec<f64>,
    /// Largest distance from the torus to the curve (grid approximation).
    pub m2: f64,
    /// Observations whose projection was not unique.
    pub ties: usize,
}

/// Largest projection distance over `extra` and a `SCORE_GRID²` node grid
/// anchored at the curve's location (so the value follows shifts of the curve).
pub fn max_distance(curve: &RidgeCurve<f64>, extra: &[f64]) -> f64 {
    let n = SCORE_GRID;
    let step = std::f64::consts::TAU / n as f64;
    let mu = curve.mu();
    let grid = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let p = mu.shifted(step * (k / n) as f64, step * (k % n) as f64);
            curve.project(&p).dist
        })
        .reduce(|| 0.0, f64::max);
    extra.iter().copied().fold(grid, f64::max)
}

/// Scores of `sample` relative to `curve`. `s1` is the projection argument;
/// `|s2|` is the projection distance scaled by `π / m2`, signed by the side of
/// the tangent the point lies on (positive when the vector from the point to
/// its foot turns clockwise into the tangent).
pub fn compute_scores(curve: &RidgeCurve<f64>, sample: &[TorusPoint<f64>]) -> Result<Scores> {
    if sample.is_empty() {
        return Err(TrpcaError::InvalidArgument("cannot score an empty sample".into()));
    }
    let raw: Vec<(f64, f64, bool)> = sample
        .par_iter()
        .map(|p| {
            let pr = curve.project(p);
            if pr.dist < ON_RIDGE {
                return (pr.alpha, 0.0, pr.tie);
            }
            let t = curve.tangent(pr.alpha);
            let n = [wrap(pr.foot.theta1() - p.theta1()), wrap(pr.foot.theta2() - p.theta2())];
            // sign of the wrapped angle difference ∠t − ∠n
            let side = n[0] * t[1] - n[1] * t[0];
            let sign = if side < 0.0 { -1.0 } else { 1.0 };
            (pr.alpha, sign * pr.dist, pr.tie)
        })
        .collect();
    let sample_max = raw.iter().map(|r| r.1.abs()).fold(0.0, f64::max);
    let m2 = max_distance(curve, &[sample_max]);
    if m2 < 1e-9 {
        return Err(TrpcaError::Internal(format!("maximal distance to the curve is {m2:e}")));
    }
    let scale = std::f64::consts::PI / m2;
    Ok(Scores {
        s1: raw.iter().map(|r| r.0).collect(),
        s2: raw.iter().map(|r| (r.1 * scale).clamp(-std::f64::consts::PI, std::f64::consts::PI)).collect(),
        m2,
        ties: raw.iter().filter(|r| r.2).count(),
    })
}

/// Ratio of the marginal Fréchet variance of the first score list to the total.
pub fn pve_of(first: &[f64], second: &[f64]) -> Result<f64> {
    if first.len() < 2 || second.len() < 2 {
        return Err(TrpcaError::InsufficientData { needed: 2, got: first.len().min(second.len()) });
    }
    // rounding in the Fréchet mean leaves ~1e-32 on constant lists
    let floor = 1e-20 * first.len() as f64;
    let v1 = circular_frechet(first)?.variance;
    let v2 = circular_frechet(second)?.variance;
    let v1 = if v1 <= floor { 0.0 } else { v1 };
    let v2 = if v2 <= floor { 0.0 } else { v2 };
    if !(v1 + v2 > 0.0) {
        return Err(TrpcaError::UndefinedPve);
    }
    Ok(v1 / (v1 + v2))
}

pub fn pve(scores: &Scores) -> Result<f64> {
    pve_of(&scores.s1, &scores.s2)
}

/// Angular PCA: circular-mean centring followed by classical PCA.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ApcaResult {
    pub center: TorusPoint<f64>,
    /// Eigenvalues in decreasing order.
    pub eigenvalues: [f64; 2],
    /// Unit eigenvectors matching `eigenvalues`.
    pub eigenvectors: [[f64; 2]; 2],
    pub scores1: Vec<f64>,
    pub scores2: Vec<f64>,
    pub pve: f64,
}

pub fn apca(sample: &[TorusPoint<f64>]) -> Result<ApcaResult> {
    if sample.len() < 3 {
        return Err(TrpcaError::InsufficientData { needed: 3, got: sample.len() });
    }
    let t1: Vec<f64> = sample.iter().map(|p| p.theta1()).collect();
    let t2: Vec<f64> = sample.iter().map(|p| p.theta2()).collect();
    let center = TorusPoint::new(circular_mean(&t1)?, circular_mean(&t2)?);
    let x: Vec<[f64; 2]> = sample
        .iter()
        .map(|p| [wrap(p.theta1() - center.theta1()), wrap(p.theta2() - center.theta2())])
        .collect();
    let n = x.len() as f64;
    let mean = x.iter().fold([0.0f64, 0.0f64], |a, v: &[f64; 2]| [a[0] + v[0] / n, a[1] + v[1] / n]);
    let mut cov: Matrix2<f64> = Matrix2::zeros();
    for v in &x {
        let d = [v[0] - mean[0], v[1] - mean[1]];
        for i in 0..2 {
            for j in 0..2 {
                cov[(i, j)] += d[i] * d[j] / (n - 1.0);
            }
        }
    }
    if !cov.iter().all(|v| v.is_finite()) || !(cov.trace() > 0.0) {
        return Err(TrpcaError::DegenerateCovariance(format!("covariance trace {:e}", cov.trace())));
    }
    let eig = SymmetricEigen::new(cov);
    let (i, j) = if eig.eigenvalues[0] >= eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
    let vec = |k: usize| {
        let c = eig.eigenvectors.column(k);
        // deterministic orientation: first nonzero component positive
        let s = if c[0] < 0.0 || (c[0] == 0.0 && c[1] < 0.0) { -1.0 } else { 1.0 };
        [s * c[0], s * c[1]]
    };
    let (e1, e2) = (vec(i), vec(j));
    let scores1: Vec<f64> = x.iter().map(|v| v[0] * e1[0] + v[1] * e1[1]).collect();
    let scores2: Vec<f64> = x.iter().map(|v| v[0] * e2[0] + v[1] * e2[1]).collect();
    let w1: Vec<f64> = scores1.iter().map(|&s| wrap(s)).collect();
    let w2: Vec<f64> = scores2.iter().map(|&s| wrap(s)).collect();
    Ok(ApcaResult {
        center,
        eigenvalues: [eig.eigenvalues[i], eig.eigenvalues[j]],
        eigenvectors: [e1, e2],
        pve: pve_of(&w1, &w2)?,
        scores1,
        scores2,
    })
}

/// Special structure of the selected model that fixed the ridge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeFlag {
    /// Independence kept: the ridge is the axis line along the less concentrated coordinate.
    AxisRidge,
    /// Homogeneity kept: the ridge is a diagonal through the location.
    DiagonalRidge,
    /// Neither test rejected; the ridge direction is a default choice.
    RidgeAmbiguous,
    /// Part of the imposed line fails the eigenvalue condition.
    RidgeExtended,
}

/// Outcome of both nested tests on the selected family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tests {
    pub homogeneity: LrtResult,
    pub independence: LrtResult,
}

#[derive(Debug, Clone, Serialize)]
pub struct TrpcaFit {
    pub selected: FitResult,
    pub rejected_candidates: Vec<FitResult>,
    pub tests: Tests,
    pub edge_flags: BTreeSet<EdgeFlag>,
    #[serde(serialize_with = "curve_coefficients")]
    pub curve: RidgeCurve<f64>,
    #[serde(skip)]
    pub ridge: ConnectedRidge<f64>,
    pub scores: Scores,
    pub pve: f64,
    pub diagnostics: BTreeMap<String, String>,
}

fn curve_coefficients<S: Serializer>(curve: &RidgeCurve<f64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Doc<'a> {
        index_coord: usize,
        mu: [f64; 2],
        a: &'a [f64],
        b: &'a [f64],
        total_length: f64,
    }
    let fr = curve.fourier();
    Doc {
        index_coord: fr.index_coord.index(),
        mu: [fr.mu.theta1(), fr.mu.theta2()],
        a: fr.a(),
        b: fr.b(),
        total_length: curve.total_length(),
    }
    .serialize(s)
}

fn restricted(set: &[Restriction]) -> BTreeSet<Restriction> {
    set.iter().copied().collect()
}

/// Fits the candidate families (concurrently when there are two) and returns
/// the successful fits ordered by BIC.
fn fit_families(
    sample: &[TorusPoint<f64>],
    families: &[ModelKind],
    restrictions: &BTreeSet<Restriction>,
    config: &FitConfig,
    diagnostics: &mut BTreeMap<String, String>,
) -> Result<Vec<FitResult>> {
    let results: Vec<Result<FitResult>> = if families.len() == 2 {
        let (a, b) = rayon::join(
            || fit_mle(sample, families[0], restrictions, config),
            || fit_mle(sample, families[1], restrictions, config),
        );
        vec![a, b]
    } else {
        families.iter().map(|&k| fit_mle(sample, k, restrictions, config)).collect()
    };
    let tag = restriction_tag(restrictions);
    let mut fits = Vec::new();
    let mut first_err = None;
    for (kind, r) in families.iter().zip(results) {
        match r {
            Ok(f) => {
                diagnostics.insert(format!("bic.{kind}.{tag}"), format!("{:.6}", f.bic));
                fits.push(f);
            }
            Err(e) => {
                diagnostics.insert(format!("fit_failed.{kind}.{tag}"), e.to_string());
                first_err.get_or_insert(e);
            }
        }
    }
    if fits.is_empty() {
        return Err(first_err.expect("at least one family"));
    }
    fits.sort_by(|a, b| a.bic.total_cmp(&b.bic));
    Ok(fits)
}

fn restriction_tag(r: &BTreeSet<Restriction>) -> String {
    if r.is_empty() {
        "full".into()
    } else {
        r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("+")
    }
}

/// Route of the ridge computation.
#[derive(Debug, Clone, Copy, PartialEq)]
enum Route {
    General,
    Edge(EdgeCase),
}

/// Full TR-PCA of a sample.
pub fn ridge_pca(sample: &[TorusPoint<f64>], config: &PipelineConfig) -> Result<TrpcaFit> {
    config.validate()?;
    if sample.len() < MIN_SAMPLE {
        return Err(TrpcaError::InsufficientData { needed: MIN_SAMPLE, got: sample.len() });
    }
    let mut diagnostics = BTreeMap::new();
    let mut candidates = Vec::new();
    let families = config.model.families();

    // model selection
    let mut fits = fit_families(sample, &families, &BTreeSet::new(), &config.fit, &mut diagnostics)
        .map_err(|e| e.at_step("model fit"))?;
    let full = fits.remove(0);
    candidates.extend(fits);
    diagnostics.insert("selected_family".into(), full.kind().to_string());

    // nested tests on the selected family
    let hom = restricted(&[Restriction::Homogeneous]);
    let ind = restricted(&[Restriction::Independent]);
    let (full, hom_fit) = fit_nested(sample, full, &hom, &config.fit).map_err(|e| e.at_step("homogeneity test"))?;
    let (full, ind_fit) = fit_nested(sample, full, &ind, &config.fit).map_err(|e| e.at_step("independence test"))?;
    let tests = Tests {
        homogeneity: lrt(&full, &hom_fit, config.alpha).map_err(|e| e.at_step("homogeneity test"))?,
        independence: lrt(&full, &ind_fit, config.alpha).map_err(|e| e.at_step("independence test"))?,
    };
    for (name, t) in [("homogeneity", tests.homogeneity), ("independence", tests.independence)] {
        diagnostics.insert(
            format!("lrt.{name}"),
            format!("statistic {:.6}, critical {:.6}, {}", t.statistic, t.critical, if t.rejected { "rejected" } else { "kept" }),
        );
    }

    // restricted refit
    let keep_hom = !tests.homogeneity.rejected;
    let keep_ind = !tests.independence.rejected;
    let (selected, mut edge_flags) = match (keep_hom, keep_ind) {
        (false, false) => {
            candidates.push(hom_fit);
            candidates.push(ind_fit);
            (full, BTreeSet::new())
        }
        (hom_kept, ind_kept) => {
            let set = match (hom_kept, ind_kept) {
                (true, true) => restricted(&[Restriction::Homogeneous, Restriction::Independent]),
                (true, false) => hom.clone(),
                _ => ind.clone(),
            };
            let own = match (hom_kept, ind_kept) {
                (true, false) => hom_fit.clone(),
                (false, true) => ind_fit.clone(),
                _ => {
                    let start = if hom_fit.loglik >= ind_fit.loglik { &hom_fit.params } else { &ind_fit.params };
                    fit_mle_from(sample, start, &set, &config.fit).map_err(|e| e.at_step("restricted refit"))?
                }
            };
            diagnostics.insert(format!("bic.{}.{}", own.kind(), restriction_tag(&set)), format!("{:.6}", own.bic));
            let mut pool = vec![own];
            for kind in families.iter().filter(|&&k| k != full.kind()) {
                match fit_mle(sample, *kind, &set, &config.fit) {
                    Ok(f) => {
                        diagnostics.insert(format!("bic.{kind}.{}", restriction_tag(&set)), format!("{:.6}", f.bic));
                        pool.push(f);
                    }
                    Err(e) => {
                        diagnostics.insert(format!("fit_failed.{kind}.{}", restriction_tag(&set)), e.to_string());
                    }
                }
            }
            pool.sort_by(|a, b| a.bic.total_cmp(&b.bic));
            let chosen = pool.remove(0);
            if chosen.kind() != full.kind() {
                diagnostics.insert("restricted_refit_switched_family".into(), chosen.kind().to_string());
            }
            candidates.push(full);
            candidates.extend(pool);
            for f in [hom_fit, ind_fit] {
                if f.restrictions != chosen.restrictions || f.kind() != chosen.kind() {
                    candidates.push(f);
                }
            }
            let flags = match (hom_kept, ind_kept) {
                (true, true) => [EdgeFlag::AxisRidge, EdgeFlag::RidgeAmbiguous].into_iter().collect(),
                (true, false) => [EdgeFlag::DiagonalRidge].into_iter().collect(),
                _ => [EdgeFlag::AxisRidge].into_iter().collect(),
            };
            (chosen, flags)
        }
    };
    candidates.retain(|c| c != &selected);

    let params = selected.params.clone();
    let (c1, c2) = params.concentrations();
    let route = match (keep_hom, keep_ind) {
        (false, false) => Route::General,
        (false, true) => Route::Edge(if c1 <= c2 { EdgeCase::AxisHorizontal } else { EdgeCase::AxisVertical }),
        (true, false) => Route::Edge(if params.dependence() >= 0.0 { EdgeCase::DiagonalPos } else { EdgeCase::DiagonalNeg }),
        (true, true) => {
            let t1: Vec<f64> = sample.iter().map(|p| p.theta1()).collect();
            let t2: Vec<f64> = sample.iter().map(|p| p.theta2()).collect();
            let (_, r1) = mean_resultant(&t1)?;
            let (_, r2) = mean_resultant(&t2)?;
            // larger circular variance ⇔ smaller resultant length
            Route::Edge(if r1 <= r2 { EdgeCase::AxisHorizontal } else { EdgeCase::AxisVertical })
        }
    };
    diagnostics.insert("route".into(), format!("{route:?}"));

    // ridge
    let ridge = match route {
        Route::General => general_ridge(&params, config.grid_n)?,
        Route::Edge(case) => explicit_edge_ridge(&params, case).map_err(|e| e.at_step("ridge solve"))?,
    };
    if ridge.extended {
        edge_flags.insert(EdgeFlag::RidgeExtended);
    }
    diagnostics.insert("ridge_points".into(), ridge.len().to_string());
    diagnostics.insert("index_coord".into(), ridge.index_coord.index().to_string());

    let fourier = fourier_fit(&ridge, config.fourier_m).map_err(|e| e.at_step("Fourier fit"))?;
    let curve = arclength_param(fourier).map_err(|e| e.at_step("arc-length parametrization"))?;
    let residual = ridge.ordered_points.par_iter().map(|p| curve.project(p).dist).reduce(|| 0.0, f64::max);
    diagnostics.insert("fourier_residual".into(), format!("{residual:.3e}"));
    diagnostics.insert("curve_length".into(), format!("{:.12}", curve.total_length()));

    let scores = compute_scores(&curve, sample).map_err(|e| e.at_step("scores"))?;
    if scores.ties > 0 {
        diagnostics.insert("projection_ties".into(), scores.ties.to_string());
    }
    let pve = pve(&scores).map_err(|e| e.at_step("variance explained"))?;

    Ok(TrpcaFit {
        selected,
        rejected_candidates: candidates,
        tests,
        edge_flags,
        curve,
        ridge,
        scores,
        pve,
        diagnostics,
    })
}

/// Ridge of the zero-centred model, solved implicitly and translated to the location.
fn general_ridge(params: &ModelParams<f64>, grid_n: usize) -> Result<ConnectedRidge<f64>> {
    let mu = params.location();
    let centred = params.with_location(TorusPoint::new(0.0, 0.0));
    let (c1, c2) = params.concentrations();
    let index = if c1 <= c2 { Coord::First } else { Coord::Second };
    let cfg = ImplicitConfig {
        grid_n,
        cross_scan: true,
        ..ImplicitConfig::new(index)
    };
    let oracle = centred.ridge_oracle().map_err(|e| e.at_step("ridge solve"))?;
    let set = ridge_implicit(oracle, &cfg).map_err(|e| e.at_step("ridge solve"))?;
    let sign = if params.dependence() > 0.0 {
        1
    } else if params.dependence() < 0.0 {
        -1
    } else {
        0
    };
    let mut comp = connected_component(&set, centred.location(), sign, defaults::delta(grid_n))
        .map_err(|e| e.at_step("ridge component"))?;
    for p in comp.ordered_points.iter_mut() {
        *p = p.shifted(mu.theta1(), mu.theta2());
    }
    comp.mu = mu;
    Ok(comp)
}
