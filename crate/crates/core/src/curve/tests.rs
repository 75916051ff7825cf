use std::f64::consts::{FRAC_PI_2, PI, SQRT_2, TAU};

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::quad::{adaptive_simpson, gauss_legendre};
use super::*;
use crate::models::{BsvmParams, BwcParams, ModelParams};
use crate::ridge::{connected_component, defaults, explicit_edge_ridge, ridge_implicit, EdgeCase, ImplicitConfig, RidgeMethod};

fn line(case: EdgeCase, mu: (f64, f64)) -> RidgeCurve<f64> {
    let (k1, k2, l) = match case {
        EdgeCase::AxisHorizontal => (0.0, 1.0, 0.0),
        EdgeCase::AxisVertical => (1.0, 0.0, 0.0),
        EdgeCase::DiagonalPos => (1.0, 1.0, 2.0),
        EdgeCase::DiagonalNeg => (1.0, 1.0, -2.0),
    };
    let params = ModelParams::Bsvm(BsvmParams::new(mu.0, mu.1, k1, k2, l).unwrap());
    let ridge = explicit_edge_ridge(&params, case).unwrap();
    arclength_param(fourier_fit(&ridge, DEFAULT_FOURIER_M).unwrap()).unwrap()
}

/// Component through μ from a cross-scanned implicit solve, as the pipeline builds it.
fn component(params: &ModelParams<f64>) -> ConnectedRidge<f64> {
    let (c1, c2) = params.concentrations();
    let index = if c1 <= c2 { Coord::First } else { Coord::Second };
    let cfg = ImplicitConfig { cross_scan: true, ..ImplicitConfig::new(index) };
    let ridge = ridge_implicit(params.ridge_oracle().unwrap(), &cfg).unwrap();
    let sign = params.dependence().signum() as i8;
    connected_component(&ridge, params.location(), sign, defaults::delta(cfg.grid_n)).unwrap()
}

fn bsvm(m1: f64, m2: f64, k1: f64, k2: f64, l: f64) -> ModelParams<f64> {
    ModelParams::Bsvm(BsvmParams::new(m1, m2, k1, k2, l).unwrap())
}

fn bwc(m1: f64, m2: f64, x1: f64, x2: f64, r: f64) -> ModelParams<f64> {
    ModelParams::Bwc(BwcParams::new(m1, m2, x1, x2, r).unwrap())
}

/// Length of the curve `φ ↦ fr.eval(φ)` from a fine polyline, seam-aware.
fn polyline_length(curve: &RidgeCurve<f64>, n: usize) -> f64 {
    let fr = curve.fourier();
    let j = fr.index_coord;
    let start = fr.mu.get(j);
    let pts: Vec<_> = (0..=n).map(|k| fr.eval(start + TAU * k as f64 / n as f64)).collect();
    pts.windows(2).map(|w| torus_dist(&w[0], &w[1])).sum()
}

/// Arc length travelled from `r̃(a2)` to `r̃(a1)` along increasing α, minus the
/// full length when the shorter way is backwards.
fn polyline_signed(curve: &RidgeCurve<f64>, a1: f64, a2: f64, n: usize) -> f64 {
    let fwd = (a1 - a2).rem_euclid(TAU);
    let pts: Vec<_> = (0..=n).map(|k| curve.eval_scaled(a2 + fwd * k as f64 / n as f64)).collect();
    let len: f64 = pts.windows(2).map(|w| torus_dist(&w[0], &w[1])).sum();
    if fwd > PI {
        len - curve.total_length()
    } else {
        len
    }
}

#[test]
fn gauss_legendre_rules() {
    let (x, w) = gauss_legendre(2);
    assert!((x[1] - 1.0 / 3f64.sqrt()).abs() < 1e-15 && (x[0] + x[1]).abs() < 1e-15);
    assert!((w[0] - 1.0).abs() < 1e-15 && (w[1] - 1.0).abs() < 1e-15);
    for n in [1, 3, 8, 64] {
        let (x, w) = gauss_legendre(n);
        // exact for degree 2n − 1
        let deg = 2 * n - 2;
        let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(deg as i32)).sum();
        assert!((got - 2.0 / (deg as f64 + 1.0)).abs() < 1e-13, "n = {n}");
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-13);
    }
}

#[test]
fn adaptive_simpson_integrates() {
    let v = adaptive_simpson(&|x: f64| x.cos(), 0.0, FRAC_PI_2, 1e-13);
    assert!((v - 1.0).abs() < 1e-12);
    let v = adaptive_simpson(&|x: f64| (1.0 + x * x).sqrt(), 0.0, 1.0, 1e-13);
    let exact = 0.5 * (SQRT_2 + (1.0 + SQRT_2).ln());
    assert!((v - exact).abs() < 1e-12);
}

#[test]
fn horizontal_ridge_coefficients() {
    let c = line(EdgeCase::AxisHorizontal, (0.0, 0.0));
    let fr = c.fourier();
    assert!((fr.a()[0] - 2.0).abs() < 1e-12);
    assert!(fr.a()[1..].iter().chain(fr.b()).all(|x| x.abs() < 1e-12));
    for phi in [-3.0, -1.0, 0.5, 2.9] {
        let p = fr.eval(phi);
        assert!((p.theta1() - phi).abs() < 1e-14 && p.theta2().abs() < 1e-12);
    }
}

#[test]
fn diagonal_ridge_coefficients() {
    let c = line(EdgeCase::DiagonalPos, (0.0, 0.0));
    let fr = c.fourier();
    assert!((fr.a()[1] - 1.0).abs() < 1e-12 && (fr.b()[1] - 1.0).abs() < 1e-12);
    for k in (0..=fr.m()).filter(|&k| k != 1) {
        assert!(fr.a()[k].abs() < 1e-12 && fr.b()[k].abs() < 1e-12, "k = {k}");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..256 {
        let phi = rng.gen_range(-PI..PI);
        let p = fr.eval(phi);
        assert!(circ_dist(p.theta2(), phi) < 1e-10);
    }
}

#[test]
fn anti_diagonal_reverses_the_sine_part() {
    let c = line(EdgeCase::DiagonalNeg, (0.0, 0.0));
    let fr = c.fourier();
    assert!((fr.a()[1] - 1.0).abs() < 1e-12 && (fr.b()[1] + 1.0).abs() < 1e-12);
}

#[test]
fn vertical_ridge_is_indexed_by_the_second_coordinate() {
    let c = line(EdgeCase::AxisVertical, (0.4, -1.0));
    assert_eq!(c.index_coord(), Coord::Second);
    let p = c.eval_scaled(FRAC_PI_2);
    assert!((p.theta1() - 0.4).abs() < 1e-12 && (p.theta2() - (-1.0 + FRAC_PI_2)).abs() < 1e-12);
}

#[test]
fn location_is_the_curve_at_zero() {
    let c = line(EdgeCase::AxisHorizontal, (1.3, -2.2));
    assert_eq!(c.fourier().eval(1.3), TorusPoint::new(1.3, -2.2));
    for m in crate::scenarios::ridge_catalog() {
        let c = arclength_param(fourier_fit(&component(&m), DEFAULT_FOURIER_M).unwrap()).unwrap();
        assert!(torus_dist(&c.eval_scaled(0.0), &m.location()) < 1e-8);
    }
}

#[test]
fn arc_length_of_lines() {
    let h = line(EdgeCase::AxisHorizontal, (0.0, 0.0));
    assert!((h.total_length() - TAU).abs() < 1e-10);
    for t in [0.3, 2.0, 5.5] {
        assert!((h.arclength(t) - t).abs() < 1e-10);
    }
    let d = line(EdgeCase::DiagonalPos, (0.0, 0.0));
    assert!((d.total_length() - 2.0 * SQRT_2 * PI).abs() < 1e-10);
    assert!((d.arclength(1.0) - SQRT_2).abs() < 1e-10);
}

#[test]
fn arc_length_matches_polyline() {
    let c = arclength_param(fourier_fit(&component(&bwc(0.0, 0.0, 0.3, 0.3, 0.6)), 15).unwrap()).unwrap();
    let poly = polyline_length(&c, 100_000);
    assert!((c.total_length() - poly).abs() < 1e-4, "{} vs {}", c.total_length(), poly);
    let c = arclength_param(fourier_fit(&component(&bsvm(0.0, 0.0, 0.3, 0.6, 0.5)), 15).unwrap()).unwrap();
    assert!((c.total_length() - polyline_length(&c, 100_000)).abs() < 1e-4);
}

#[test]
fn scaled_curve_examples() {
    let h = line(EdgeCase::AxisHorizontal, (0.0, 0.0));
    let p = h.eval_scaled(FRAC_PI_2);
    assert!((p.theta1() - FRAC_PI_2).abs() < 1e-10 && p.theta2().abs() < 1e-12);
    let h = line(EdgeCase::AxisHorizontal, (2.5, 1.0));
    let p = h.eval_scaled(FRAC_PI_2);
    assert!(circ_dist(p.theta1(), 2.5 + FRAC_PI_2) < 1e-10 && (p.theta2() - 1.0).abs() < 1e-12);
    let d = line(EdgeCase::DiagonalPos, (0.0, 0.0));
    let p = d.eval_scaled(-PI);
    assert!(torus_dist(&p, &TorusPoint::new(-PI, -PI)) < 1e-10);
}

#[test]
fn half_length_points() {
    // r̃(±π) lies at μ shifted by π in the index coordinate, and by 0 or π in the other.
    for m in crate::scenarios::ridge_catalog() {
        let c = arclength_param(fourier_fit(&component(&m), DEFAULT_FOURIER_M).unwrap()).unwrap();
        let p = c.eval_scaled(-PI);
        let mu = m.location();
        let j = c.index_coord();
        let l = j.other();
        assert!(circ_dist(p.get(j), mu.get(j) + PI) < 1e-8);
        let off = circ_dist(p.get(l), mu.get(l));
        assert!(off < 1e-2 || (PI - off) < 1e-2, "{:?}: {off}", m.parameter_map());
    }
}

#[test]
fn signed_distance_along_the_curve() {
    let c = arclength_param(fourier_fit(&component(&bsvm(0.0, 0.0, 0.3, 0.6, 0.5)), 15).unwrap()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let (a1, a2) = (rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
        let formula = c.total_length() / TAU * wrap(a1 - a2);
        let poly = polyline_signed(&c, a1, a2, 20_000);
        assert!((formula - poly).abs() < 1e-4, "{a1} {a2}: {formula} vs {poly}");
    }
}

#[test]
fn fourier_accuracy_on_catalog() {
    for m in crate::scenarios::ridge_catalog() {
        let comp = component(&m);
        let c = arclength_param(fourier_fit(&comp, 15).unwrap()).unwrap();
        let worst = comp.ordered_points.iter().map(|p| c.project(p).dist).fold(0.0, f64::max);
        assert!(worst < 1e-2, "{:?}: {worst}", m.parameter_map());
    }
}

#[test]
fn projection_examples() {
    let h = line(EdgeCase::AxisHorizontal, (0.0, 0.0));
    let pr = h.project(&TorusPoint::new(1.0, 0.3));
    assert!((pr.alpha - 1.0).abs() < 1e-9);
    assert!(torus_dist(&pr.foot, &TorusPoint::new(1.0, 0.0)) < 1e-9);
    assert!((pr.dist - 0.3).abs() < 1e-9);
    assert!(!pr.tie);

    let c = arclength_param(fourier_fit(&component(&bwc(0.0, 0.0, 0.2, 0.7, 0.2)), 15).unwrap()).unwrap();
    let on = c.eval_scaled(0.7);
    let pr = c.project(&on);
    assert!((pr.alpha - 0.7).abs() < 1e-9 && pr.dist < 1e-9);
}

#[test]
fn equidistant_points_are_flagged() {
    let d = line(EdgeCase::DiagonalPos, (0.0, 0.0));
    // (π/2, −π/2) is at distance π/√2 from both (0, 0) and (π, π) ≡ (−π, −π).
    let pr = d.project(&TorusPoint::new(FRAC_PI_2, -FRAC_PI_2));
    assert!(pr.tie);
    let expected = pr.alpha.min(wrap(pr.alpha + PI));
    assert!((pr.alpha - expected).abs() < 1e-9);
    assert!((pr.dist - PI / SQRT_2).abs() < 1e-9);
}

#[test]
fn projection_matches_exhaustive_scan() {
    let c = arclength_param(fourier_fit(&component(&bsvm(0.0, 0.0, 0.3, 0.6, 0.5)), 15).unwrap()).unwrap();
    let n = 100_000;
    let step = TAU / n as f64;
    let dense: Vec<_> = (0..n).map(|k| c.eval_scaled(-PI + step * k as f64)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let p = TorusPoint::new(rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
        let (k, dk) = dense
            .iter()
            .enumerate()
            .map(|(k, q)| (k, torus_dist(&p, q)))
            .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        let pr = c.project(&p);
        assert!(pr.dist <= dk + 1e-12);
        let oracle_alpha = -PI + step * k as f64;
        if !pr.tie {
            assert!(circ_dist(pr.alpha, oracle_alpha) <= step, "{p:?}: {} vs {}", pr.alpha, oracle_alpha);
        }
    }
}

#[test]
fn fit_errors() {
    let params = bsvm(0.0, 0.0, 0.0, 1.0, 0.0);
    let mut r = explicit_edge_ridge(&params, EdgeCase::AxisHorizontal).unwrap();
    let short = ConnectedRidge { ordered_points: r.ordered_points[..10].to_vec(), ..r.clone() };
    assert!(matches!(fourier_fit(&short, 15), Err(TrpcaError::InsufficientData { needed: 32, .. })));
    assert!(matches!(fourier_fit(&r, 0), Err(TrpcaError::InvalidArgument(_))));
    r.ordered_points.push(TorusPoint::new(r.ordered_points[5].theta1(), 1.0));
    assert!(matches!(fourier_fit(&r, 15), Err(TrpcaError::Parametrization(_))));
    assert_eq!(r.method, RidgeMethod::ExplicitEdgeCase);
}

#[test]
fn exported_table() {
    let c = line(EdgeCase::DiagonalNeg, (0.5, -0.5));
    let mut buf = Vec::new();
    c.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "alpha,theta1,theta2");
    assert_eq!(lines.len(), CURVE_GRID + 1);
    for (k, row) in lines[1..].iter().enumerate() {
        let v: Vec<f64> = row.split(',').map(|x| x.parse().unwrap()).collect();
        // 17 significant digits round-trip exactly
        assert_eq!(v[0], c.grid_alpha(k));
        assert_eq!(TorusPoint::new(v[1], v[2]), c.grid()[k]);
        let mantissa = row.split(',').next().unwrap().split('e').next().unwrap();
        assert_eq!(mantissa.chars().filter(|ch| ch.is_ascii_digit()).count(), 17);
    }
}

#[test]
fn curve_rebuilt_from_its_table() {
    let mut models = crate::scenarios::ridge_catalog();
    models.push(bsvm(1.0, -2.0, 0.0, 1.0, 0.0));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for m in models.iter() {
        let comp = if m.dependence() == 0.0 {
            explicit_edge_ridge(m, EdgeCase::AxisHorizontal).unwrap()
        } else {
            component(m)
        };
        let c = arclength_param(fourier_fit(&comp, 15).unwrap()).unwrap();
        let rows: Vec<_> = (0..CURVE_GRID).map(|k| (c.grid_alpha(k), c.grid()[k])).collect();
        let back = curve_from_table(&rows, 15).unwrap();
        assert!((back.total_length() - c.total_length()).abs() < 1e-12);
        for _ in 0..50 {
            let p = TorusPoint::new(rng.gen_range(-PI..PI), rng.gen_range(-PI..PI));
            let (a, b) = (c.project(&p), back.project(&p));
            assert!((a.dist - b.dist).abs() < 1e-12);
            if !a.tie {
                assert!(circ_dist(a.alpha, b.alpha) < 1e-10, "{:?} {p:?}", m.parameter_map());
            }
        }
    }
}

#[test]
fn table_needs_a_location_row() {
    let c = line(EdgeCase::AxisHorizontal, (0.0, 0.0));
    let rows: Vec<_> = (0..CURVE_GRID).map(|k| (c.grid_alpha(k) + 1e-3, c.grid()[k])).collect();
    assert!(curve_from_table(&rows, 15).is_err());
}

#[test]
fn generic_over_single_precision() {
    let params = ModelParams::Bsvm(BsvmParams::<f32>::new(0.0, 0.0, 1.0, 1.0, 2.0).unwrap());
    let ridge = explicit_edge_ridge(&params, EdgeCase::DiagonalPos).unwrap();
    let c = arclength_param(fourier_fit(&ridge, 15).unwrap()).unwrap();
    assert!((c.total_length() - 2.0 * std::f32::consts::SQRT_2 * std::f32::consts::PI).abs() < 1e-3);
    let pr = c.project(&TorusPoint::new(1.0f32, 0.8));
    assert!((pr.dist - 0.2 / std::f32::consts::SQRT_2).abs() < 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scaled_curve_is_periodic(alpha in -PI..PI) {
        let c = line(EdgeCase::DiagonalPos, (0.3, -0.2));
        let a = c.eval_scaled(alpha);
        let b = c.eval_scaled(wrap(alpha + TAU));
        prop_assert!(torus_dist(&a, &b) < 1e-12);
    }

    #[test]
    fn projection_is_optimal(t1 in -PI..PI, t2 in -PI..PI, seed in 0u64..1000) {
        let c = curve_for_props();
        let p = TorusPoint::new(t1, t2);
        let pr = c.project(&p);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..1000 {
            let a = rng.gen_range(-PI..PI);
            prop_assert!(pr.dist <= torus_dist(&p, &c.eval_scaled(a)) + 1e-12);
        }
    }
}

fn curve_for_props() -> &'static RidgeCurve<f64> {
    use std::sync::OnceLock;
    static CURVE: OnceLock<RidgeCurve<f64>> = OnceLock::new();
    CURVE.get_or_init(|| arclength_param(fourier_fit(&component(&bwc(0.0, 0.0, 0.3, 0.3, 0.6)), 15).unwrap()).unwrap())
}
