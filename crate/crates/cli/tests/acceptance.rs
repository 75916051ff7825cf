//! Acceptance suite: one PASS/FAIL line per criterion, every tolerance pinned
//! here. Runs without the test harness so the lines always reach the output.

use std::collections::BTreeSet;
use std::f64::consts::{PI, TAU};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use rand::Rng;
use trpca::curve::{arclength_param, fourier_fit, DEFAULT_FOURIER_M};
use trpca::fitting::{fit_mle, fit_nested, lrt, FitConfig, Restriction};
use trpca::geometry::{circ_dist, circular_frechet, circular_mean, torus_dist, wrap, Coord};
use trpca::models::{rng_stream, sample, ModelKind};
use trpca::pipeline::{apca, ridge_pca, PipelineConfig};
use trpca::ridge::{
    connected_component, defaults, directed_hausdorff, eigenvalue_condition, explicit_edge_ridge, hausdorff,
    hessian_eig2, implicit_expr, ridge_euler, ridge_implicit, DensityOracle, EdgeCase, EulerConfig,
    ImplicitConfig, PlanarGaussian,
};
use trpca::scenarios::{normalization_catalog, ridge_catalog, Scenario};
use trpca::{BsvmParams, BwcParams, ConnectedRidge, ModelParams, RidgeCurve, TorusPoint};

// Pinned tolerances.
const EXACT_RIDGE_TOL: f64 = 1e-6;
const METHOD_AGREEMENT_TOL: f64 = 0.05;
const EULER_GRID: usize = 128;
const FOURIER_TOL: f64 = 1e-2;
const SHIFT_TOL: f64 = 1e-6;
const PLANAR_TOL: f64 = 1e-8;
const LOCATION_TOL: f64 = 1e-8;
const SIGNED_DIST_TOL: f64 = 1e-4;
const POLYLINE_NODES: usize = 20_000;
const ORACLE_GRID: usize = 100_000;
const DERIVATIVE_TOL: f64 = 1e-5;
const NORMALIZATION_TOL: f64 = 1e-6;
const NORMALIZATION_GRID: usize = 600;
const SIM_N: usize = 500;
const SIM_SEEDS: u64 = 20;
const LRT_REPS: u64 = 500;
const LRT_BAND: (f64, f64) = (0.03, 0.08);
const MLE_N: usize = 2000;
const MLE_TOL: f64 = 0.15;
const RESCORE_TOL: f64 = 1e-10;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn bsvm(m1: f64, m2: f64, k1: f64, k2: f64, l: f64) -> ModelParams {
    ModelParams::Bsvm(BsvmParams::new(m1, m2, k1, k2, l).unwrap())
}

fn bwc(m1: f64, m2: f64, x1: f64, x2: f64, r: f64) -> ModelParams {
    ModelParams::Bwc(BwcParams::new(m1, m2, x1, x2, r).unwrap())
}

fn index_of(m: &ModelParams) -> Coord {
    let (c1, c2) = m.concentrations();
    if c1 <= c2 {
        Coord::First
    } else {
        Coord::Second
    }
}

/// The μ-connected ridge exactly as the pipeline builds it.
fn mu_ridge(m: &ModelParams) -> ConnectedRidge {
    let cfg = ImplicitConfig { cross_scan: true, ..ImplicitConfig::new(index_of(m)) };
    let set = ridge_implicit(m.ridge_oracle().unwrap(), &cfg).unwrap();
    connected_component(&set, m.location(), m.dependence().signum() as i8, defaults::delta(cfg.grid_n)).unwrap()
}

fn catalog_curve(m: &ModelParams) -> (ConnectedRidge, RidgeCurve) {
    let comp = mu_ridge(m);
    let curve = arclength_param(fourier_fit(&comp, DEFAULT_FOURIER_M).unwrap()).unwrap();
    (comp, curve)
}

fn c01_axis_ridges() -> Outcome {
    let worst = [bsvm(0.0, 0.0, 0.0, 1.0, 0.0), bwc(0.0, 0.0, 0.0, 0.5, 0.0)]
        .iter()
        .map(|m| mu_ridge(m).ordered_points.iter().map(|p| p.theta2().abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    outcome(worst < EXACT_RIDGE_TOL, format!("max |θ2| = {worst:.2e} (< {EXACT_RIDGE_TOL:.0e})"))
}

fn c02_diagonal_ridges() -> Outcome {
    let worst = [bsvm(0.0, 0.0, 1.0, 1.0, 2.0), bwc(0.0, 0.0, 0.4, 0.4, 0.6)]
        .iter()
        .map(|m| {
            mu_ridge(m)
                .ordered_points
                .iter()
                .map(|p| circ_dist(p.theta1(), p.theta2()))
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max);
    // κ > |λ| leaves part of the diagonal outside the guaranteed region
    let flags: Vec<bool> = [(1.0, 2.0), (2.0, 1.0), (0.5, -0.3)]
        .iter()
        .map(|&(k, l)| {
            let case = if l > 0.0 { EdgeCase::DiagonalPos } else { EdgeCase::DiagonalNeg };
            explicit_edge_ridge(&bsvm(0.0, 0.0, k, k, l), case).unwrap().extended
        })
        .collect();
    let flags_ok = flags == [false, true, true];
    outcome(
        worst < EXACT_RIDGE_TOL && flags_ok,
        format!("max |θ2 − θ1| = {worst:.2e} (< {EXACT_RIDGE_TOL:.0e}); extension flags {flags:?} (expected [false, true, true])"),
    )
}

fn c03_method_agreement() -> Outcome {
    let g = EULER_GRID;
    let starts: Vec<_> = (0..g * g)
        .map(|k| {
            TorusPoint::new(
                -PI + TAU * ((k / g) as f64 + 0.5) / g as f64,
                -PI + TAU * ((k % g) as f64 + 0.5) / g as f64,
            )
        })
        .collect();
    let (mut on_set, mut coverage, mut full) = (0.0f64, 0.0f64, 0.0f64);
    for m in ridge_catalog() {
        let o = m.ridge_oracle().unwrap();
        let cfg = ImplicitConfig { cross_scan: true, ..ImplicitConfig::new(index_of(&m)) };
        let all = ridge_implicit(o, &cfg).unwrap();
        let comp = connected_component(&all, m.location(), m.dependence().signum() as i8, defaults::delta(cfg.grid_n)).unwrap();
        let euler = ridge_euler(o, &starts, &EulerConfig::default()).unwrap();
        on_set = on_set.max(directed_hausdorff(&euler.points, &all.points));
        coverage = coverage.max(directed_hausdorff(&comp.ordered_points, &euler.points));
        full = full.max(hausdorff(&euler.points, &all.points));
    }
    let worst = on_set.max(coverage);
    outcome(
        worst < METHOD_AGREEMENT_TOL,
        format!(
            "Euler→implicit set {on_set:.4}, implicit μ-ridge→Euler {coverage:.4} (< {METHOD_AGREEMENT_TOL}); \
             symmetric over the full solution sets {full:.3}, reported only"
        ),
    )
}

fn c04_fourier_accuracy() -> Outcome {
    let (mut to_curve, mut from_curve) = (0.0f64, 0.0f64);
    for m in ridge_catalog() {
        let (comp, curve) = catalog_curve(&m);
        to_curve = to_curve.max(comp.ordered_points.iter().map(|p| curve.project(p).dist).fold(0.0, f64::max));
        let dense: Vec<_> = (0..4096).map(|k| curve.eval_scaled(-PI + TAU * k as f64 / 4096.0)).collect();
        from_curve = from_curve.max(directed_hausdorff(&dense, &comp.ordered_points));
    }
    outcome(
        to_curve < FOURIER_TOL,
        format!("solved points → curve {to_curve:.2e} (< {FOURIER_TOL:.0e}); curve → solved points {from_curve:.2e}, reported only"),
    )
}

fn c05_invariance() -> Outcome {
    let mut rng = rng_stream(505, 0);
    let mut shift = 0.0f64;
    for m in ridge_catalog() {
        let (d1, d2) = (rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
        let moved = m.with_location(TorusPoint::new(d1, d2));
        let cfg = ImplicitConfig { grid_n: 256, ..ImplicitConfig::new(index_of(&m)) };
        let base = ridge_implicit(m.ridge_oracle().unwrap(), &cfg).unwrap();
        let got = ridge_implicit(moved.ridge_oracle().unwrap(), &cfg).unwrap();
        let expected: Vec<_> = base.points.iter().map(|p| p.shifted(d1, d2)).collect();
        shift = shift.max(if got.len() == expected.len() { hausdorff(&got.points, &expected) } else { f64::INFINITY });
    }
    let mut planar = 0.0f64;
    let mut eig_ok = true;
    for cov in [[[2.0, 0.6], [0.6, 1.0]], [[1.0, -0.4], [-0.4, 0.5]], [[0.7, 0.0], [0.0, 0.3]]] {
        let g = PlanarGaussian::new([0.0, 0.0], cov, [-3.05, -3.05], [3.05, 3.05]).unwrap();
        let e = hessian_eig2(cov[0][0], cov[0][1], cov[1][1]);
        for i in 0..=600 {
            let c = -3.0 + 0.01 * i as f64;
            let p = TorusPoint::new(c * e.u1[0], c * e.u1[1]);
            let d = g.evaluate(&p);
            planar = planar.max(implicit_expr(&d).abs());
            eig_ok &= eigenvalue_condition(&d);
        }
    }
    outcome(
        shift < SHIFT_TOL && planar < PLANAR_TOL && eig_ok,
        format!(
            "shifted-ridge Hausdorff {shift:.2e} (< {SHIFT_TOL:.0e}); planar |implicit expr| on c·v1 {planar:.2e} (< {PLANAR_TOL:.0e}), eigenvalue condition {eig_ok}"
        ),
    )
}

fn polyline_signed(curve: &RidgeCurve, a1: f64, a2: f64) -> f64 {
    let fwd = (a1 - a2).rem_euclid(TAU);
    let n = POLYLINE_NODES;
    let pts: Vec<_> = (0..=n).map(|k| curve.eval_scaled(a2 + fwd * k as f64 / n as f64)).collect();
    let len: f64 = pts.windows(2).map(|w| torus_dist(&w[0], &w[1])).sum();
    if fwd > PI {
        len - curve.total_length()
    } else {
        len
    }
}

fn c06_curve_centring() -> Outcome {
    let mut rng = rng_stream(606, 0);
    let mut loc = 0.0f64;
    let mut signed = 0.0f64;
    let curves: Vec<RidgeCurve> = ridge_catalog()
        .iter()
        .map(|m| {
            let mu = TorusPoint::new(rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
            let comp = mu_ridge(m);
            let moved = ConnectedRidge {
                ordered_points: comp.ordered_points.iter().map(|p| p.shifted(mu.theta1(), mu.theta2())).collect(),
                mu,
                ..comp
            };
            arclength_param(fourier_fit(&moved, DEFAULT_FOURIER_M).unwrap()).unwrap()
        })
        .collect();
    for c in &curves {
        loc = loc.max(torus_dist(&c.eval_scaled(0.0), &c.mu()));
    }
    for k in 0..100 {
        let c = &curves[k % curves.len()];
        let (a1, a2) = (rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
        let formula = c.total_length() / TAU * wrap(a1 - a2);
        signed = signed.max((formula - polyline_signed(c, a1, a2)).abs());
    }
    outcome(
        loc < LOCATION_TOL && signed < SIGNED_DIST_TOL,
        format!("|r̃(0) − μ| {loc:.2e} (< {LOCATION_TOL:.0e}); signed distance vs polyline {signed:.2e} (< {SIGNED_DIST_TOL:.0e}, 100 pairs)"),
    )
}

fn c07_oracles() -> Outcome {
    let step = TAU / ORACLE_GRID as f64;
    let mut rng = rng_stream(707, 0);

    // projection: 25 random points on each of the 8 catalog curves
    let (mut proj_bad, mut proj_ties) = (0, 0);
    for m in ridge_catalog() {
        let (_, c) = catalog_curve(&m);
        let dense: Vec<_> = (0..ORACLE_GRID).map(|k| c.eval_scaled(-PI + step * k as f64)).collect();
        let arc_step = c.total_length() / ORACLE_GRID as f64;
        for _ in 0..25 {
            let p = TorusPoint::new(rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
            let (k, d) = dense
                .iter()
                .enumerate()
                .map(|(k, q)| (k, torus_dist(&p, q)))
                .min_by(|a, b| a.1.total_cmp(&b.1))
                .unwrap();
            let pr = c.project(&p);
            let same_argument = circ_dist(pr.alpha, -PI + step * k as f64) <= step;
            let tie = (pr.dist - d).abs() <= arc_step;
            if pr.dist > d + 1e-12 || !(same_argument || tie) {
                proj_bad += 1;
            } else if !same_argument {
                proj_ties += 1;
            }
        }
    }

    // Fréchet mean: 200 random samples of 3..40 angles
    let (mut mean_bad, mut mean_ties) = (0, 0);
    let grid: Vec<f64> = (0..ORACLE_GRID).map(|k| -PI + step * k as f64).collect();
    for _ in 0..200 {
        let n = rng.gen_range(3..=40);
        let centre = rng.gen_range(-PI..PI);
        let spread = rng.gen_range(0.1..PI);
        let xs: Vec<f64> = (0..n).map(|_| wrap(centre + rng.gen_range(-spread..spread))).collect();
        let obj = |m: f64| xs.iter().map(|&x| circ_dist(m, x).powi(2)).sum::<f64>();
        let (best, fbest) = grid.iter().map(|&m| (m, obj(m))).min_by(|a, b| a.1.total_cmp(&b.1)).unwrap();
        let fm = circular_frechet(&xs).unwrap();
        let same = circ_dist(fm.mean, best) <= step;
        // objective slope is at most 2πn, so one grid step bounds the oracle's own error
        let tie = fm.tie || (obj(fm.mean) - fbest).abs() <= TAU * n as f64 * step;
        if obj(fm.mean) > fbest + 1e-12 || !(same || tie) {
            mean_bad += 1;
        } else if !same {
            mean_ties += 1;
        }
    }
    outcome(
        proj_bad == 0 && mean_bad == 0,
        format!(
            "projection mismatches {proj_bad}/200 (ties {proj_ties}), Fréchet mismatches {mean_bad}/200 (ties {mean_ties}); oracle step 2π/{ORACLE_GRID}"
        ),
    )
}

fn c08_derivatives() -> Outcome {
    let h = 1e-3;
    // fourth-order central difference
    let diff = |f: &dyn Fn(f64) -> f64, x: f64| (8.0 * (f(x + h) - f(x - h)) - (f(x + 2.0 * h) - f(x - 2.0 * h))) / (12.0 * h);
    let mut worst = 0.0f64;
    for m in [bsvm(1.0, -0.5, 1.0, 0.5, 1.5), bwc(1.0, 2.0, 0.5, 0.1, -0.75)] {
        let mut rng = rng_stream(808, 0);
        let pts: Vec<(f64, f64)> = (0..100).map(|_| (rng.gen_range(-PI..PI), rng.gen_range(-PI..PI))).collect();
        // components carry a common factor; compare the assembled derivatives
        let grad = |a: f64, b: f64| m.derivatives(&TorusPoint::new(a, b)).unwrap().gradient();
        let mut rows = Vec::new();
        for &(a, b) in &pts {
            let d = m.derivatives(&TorusPoint::new(a, b)).unwrap();
            let (g, hs) = (d.gradient(), d.hessian());
            let fd = [
                diff(&|x| m.density(&TorusPoint::new(x, b)), a),
                diff(&|y| m.density(&TorusPoint::new(a, y)), b),
                diff(&|x| grad(x, b)[0], a),
                diff(&|y| grad(a, y)[0], b),
                diff(&|y| grad(a, y)[1], b),
            ];
            rows.push(([g[0], g[1], hs[0][0], hs[0][1], hs[1][1]], fd));
        }
        // relative to each quantity's size, floored at 1e-3 of its largest magnitude over the sample
        for q in 0..5 {
            let scale = rows.iter().map(|r| r.1[q].abs()).fold(0.0, f64::max);
            for (an, fd) in &rows {
                worst = worst.max((an[q] - fd[q]).abs() / fd[q].abs().max(1e-3 * scale));
            }
        }
    }
    outcome(worst < DERIVATIVE_TOL, format!("max relative error {worst:.2e} (< {DERIVATIVE_TOL:.0e}), 100 points × 2 models"))
}

fn c09_normalization() -> Outcome {
    let n = NORMALIZATION_GRID;
    let h = TAU / n as f64;
    let mut worst = 0.0f64;
    for m in normalization_catalog() {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += m.density(&TorusPoint::new(-PI + h * i as f64, -PI + h * j as f64));
            }
        }
        worst = worst.max((s * h * h - 1.0).abs());
    }
    outcome(worst < NORMALIZATION_TOL, format!("max |∫f − 1| {worst:.2e} (< {NORMALIZATION_TOL:.0e}), 10 + 10 models"))
}

fn c10_pve() -> Outcome {
    let mut lines = Vec::new();
    let mut pass = true;
    for sc in Scenario::ALL {
        let (mut tr, mut ap, mut sep, mut min_sep) = (0.0, 0.0, 0.0, f64::INFINITY);
        for seed in 0..SIM_SEEDS {
            let (pts, labels) = sc.sample(SIM_N, seed).unwrap();
            let fit = ridge_pca(&pts, &PipelineConfig::default()).unwrap();
            tr += fit.pve / SIM_SEEDS as f64;
            ap += apca(&pts).unwrap().pve / SIM_SEEDS as f64;
            if sc == Scenario::BwnMixture {
                let mean_of = |l| {
                    let v: Vec<f64> = fit.scores.s1.iter().zip(&labels).filter(|x| *x.1 == l).map(|x| *x.0).collect();
                    circular_mean(&v).unwrap()
                };
                let d = circ_dist(mean_of(0), mean_of(1));
                sep += d / SIM_SEEDS as f64;
                min_sep = min_sep.min(d);
            }
        }
        let (ok, text) = match sc {
            Scenario::ConcentratedBwn => (
                (tr - 0.81f64).abs() <= 0.05 && (ap - tr).abs() <= 0.03,
                format!("S1 TR-PCA {tr:.3} (0.81±0.05), aPCA {ap:.3} (within 0.03)"),
            ),
            Scenario::SpreadBwn => ((tr - 0.83f64).abs() <= 0.06, format!("S2 TR-PCA {tr:.3} (0.83±0.06)")),
            Scenario::Bwc => ((tr - 0.88f64).abs() <= 0.06, format!("S3 TR-PCA {tr:.3} (0.88±0.06)")),
            Scenario::BwnMixture => (
                (tr - 0.78f64).abs() <= 0.06 && (ap - 0.38f64).abs() <= 0.10 && sep > 1.0,
                format!("S4 TR-PCA {tr:.3} (0.78±0.06), aPCA {ap:.3} (0.38±0.10), s1 separation {sep:.2} (> 1; min {min_sep:.2})"),
            ),
        };
        pass &= ok;
        lines.push(text);
    }
    outcome(pass, lines.join("; "))
}

fn c11_lrt_size() -> Outcome {
    let cfg = FitConfig::default();
    let rate = |truth: ModelParams, restriction: Restriction, base_seed: u64| {
        let restricted: BTreeSet<_> = [restriction].into_iter().collect();
        let mut rejected = 0;
        for r in 0..LRT_REPS {
            let pts = sample(&truth, SIM_N, base_seed + r).unwrap();
            let full = fit_mle(&pts, ModelKind::Bsvm, &BTreeSet::new(), &cfg).unwrap();
            let (full, res) = fit_nested(&pts, full, &restricted, &cfg).unwrap();
            rejected += usize::from(lrt(&full, &res, 0.05).unwrap().rejected);
        }
        rejected as f64 / LRT_REPS as f64
    };
    let hom = rate(bsvm(0.0, 0.0, 1.0, 1.0, 0.5), Restriction::Homogeneous, 10_000);
    let ind = rate(bsvm(0.0, 0.0, 1.0, 2.0, 0.0), Restriction::Independent, 20_000);
    let within = |r: f64| (LRT_BAND.0..=LRT_BAND.1).contains(&r);
    outcome(
        within(hom) && within(ind),
        format!("rejection rate homogeneity {hom:.3}, independence {ind:.3} (in [{}, {}], {LRT_REPS} reps, n = {SIM_N})", LRT_BAND.0, LRT_BAND.1),
    )
}

fn c12_mle_recovery() -> Outcome {
    let truths = [
        bsvm(0.0, 0.0, 2.0, 1.0, 0.5),
        bsvm(1.0, -2.0, 1.5, 1.5, 0.3),
        bsvm(0.5, 0.5, 3.0, 2.0, -1.0),
        bsvm(-2.0, 1.0, 1.0, 2.5, 0.8),
        bwc(0.0, 0.0, 0.5, 0.1, -0.75),
        bwc(1.0, 2.0, 0.3, 0.6, 0.4),
        bwc(-1.0, 0.0, 0.7, 0.7, 0.2),
        bwc(2.0, -2.0, 0.4, 0.5, -0.3),
    ];
    let mut worst = 0.0f64;
    let mut worst_at = String::new();
    for (i, truth) in truths.iter().enumerate() {
        let pts = sample(truth, MLE_N, 1200 + i as u64).unwrap();
        let fit = fit_mle(&pts, truth.kind(), &BTreeSet::new(), &FitConfig::default()).unwrap();
        let (want, got) = (truth.parameter_map(), fit.params.parameter_map());
        for (k, v) in &want {
            let err = if k.starts_with("mu") { circ_dist(*v, got[k]) } else { (v - got[k]).abs() };
            if err > worst {
                worst = err;
                worst_at = format!("{} {k}", truth.kind());
            }
        }
    }
    outcome(worst < MLE_TOL, format!("max parameter error {worst:.3} at {worst_at} (< {MLE_TOL}), n = {MLE_N}, 4 + 4 models"))
}

fn trpca(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_trpca")).args(args).output().expect("run trpca")
}

fn round_trip(dir: &Path, name: &str, sample_args: &[&str]) -> Result<f64, String> {
    let s = |p: &Path| p.to_str().unwrap().to_string();
    let data = dir.join(format!("{name}.csv"));
    let out = dir.join(name);
    let svg = dir.join(format!("{name}.svg"));
    let mut args = vec!["sample"];
    args.extend_from_slice(sample_args);
    let data_s = s(&data);
    args.extend_from_slice(&["-n", "500", "--seed", "13", "-o", &data_s]);
    let steps: [(&str, Vec<String>); 3] = [
        ("sample", args.iter().map(|a| a.to_string()).collect()),
        ("fit", vec!["fit".into(), "-i".into(), s(&data), "-o".into(), s(&out)]),
        ("plot", vec!["plot".into(), "--fit-dir".into(), s(&out), "-o".into(), s(&svg)]),
    ];
    for (step, a) in &steps {
        let r = trpca(&a.iter().map(String::as_str).collect::<Vec<_>>());
        if !r.status.success() {
            return Err(format!("{name}: {step} failed: {}", String::from_utf8_lossy(&r.stderr).trim()));
        }
    }
    let text = std::fs::read_to_string(&svg).map_err(|e| e.to_string())?;
    roxmltree::Document::parse(&text).map_err(|e| format!("{name}: SVG not well-formed: {e}"))?;

    let rescored = dir.join(format!("{name}-rescored.csv"));
    let r = trpca(&["score", "--ridge", &s(&out.join("ridge.csv")), "-i", &s(&data), "-o", &s(&rescored)]);
    if !r.status.success() {
        return Err(format!("{name}: score failed: {}", String::from_utf8_lossy(&r.stderr).trim()));
    }
    let a = trpca_cli::artifacts::read_scores(&out.join("scores.csv")).map_err(|e| e.to_string())?;
    let b = trpca_cli::artifacts::read_scores(&rescored).map_err(|e| e.to_string())?;
    if a.len() != b.len() || a.len() != 500 {
        return Err(format!("{name}: {} vs {} score rows", a.len(), b.len()));
    }
    Ok(a.iter().zip(&b).map(|(x, y)| circ_dist(x.0, y.0).max((x.1 - y.1).abs())).fold(0.0, f64::max))
}

fn c13_cli_round_trip() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let runs = [
        round_trip(dir.path(), "bsvm", &["--model", "bsvm", "--mu1", "1", "--mu2", "-2", "--kappa1", "0.3", "--kappa2", "0.6", "--lambda", "0.5"]),
        round_trip(dir.path(), "bwc", &["--scenario", "3"]),
    ];
    let mut worst = 0.0f64;
    let mut errors = Vec::new();
    for r in runs {
        match r {
            Ok(d) => worst = worst.max(d),
            Err(e) => errors.push(e),
        }
    }
    if errors.is_empty() {
        outcome(
            worst < RESCORE_TOL,
            format!("sample → fit → plot ok for BSvM and BWC, SVG well-formed; rescoring from ridge.csv differs by {worst:.2e} (< {RESCORE_TOL:.0e})"),
        )
    } else {
        outcome(false, errors.join("; "))
    }
}

fn main() {
    // plain `cargo test -- <filter>` invocations should not rerun the whole suite
    let args: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    if !args.is_empty() && !args.iter().any(|a| "acceptance".contains(a.as_str())) {
        return;
    }
    let criteria: [(&str, fn() -> Outcome); 13] = [
        ("exact axis ridges", c01_axis_ridges),
        ("diagonal ridges and extension flag", c02_diagonal_ridges),
        ("Euler and implicit ridges agree", c03_method_agreement),
        ("Fourier curve accuracy", c04_fourier_accuracy),
        ("shift invariance and planar eigenvector inclusion", c05_invariance),
        ("curve centring and signed distance", c06_curve_centring),
        ("projection and Fréchet mean vs exhaustive oracles", c07_oracles),
        ("analytic derivatives vs finite differences", c08_derivatives),
        ("densities integrate to one", c09_normalization),
        ("simulated PVE", c10_pve),
        ("likelihood-ratio test size", c11_lrt_size),
        ("maximum likelihood recovery", c12_mle_recovery),
        ("CLI round trip", c13_cli_round_trip),
    ];
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = run();
        println!(
            "acceptance {:>2} {} {name}: {} [{:.1}s]",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail,
            t.elapsed().as_secs_f64()
        );
        if !o.pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all {} criteria passed", criteria.len());
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}
