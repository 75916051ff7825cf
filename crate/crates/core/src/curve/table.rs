//! Rebuilding a curve from its exported table.

use nalgebra::{DMatrix, SymmetricEigen};

use super::{arclength_param, FourierRidge, RidgeCurve};
use crate::error::{Result, TrpcaError};
use crate::geometry::{wrap, Coord, TorusPoint};

/// Singular values below this fraction of the largest span the solution space.
const NULL_TOL: f64 = 1e-11;
/// Gauss–Newton polish of the null-vector solution.
const POLISH_ITERS: usize = 30;

/// Recovers the order-`m` curve from rows `(α, r̃(α))` of an exported table.
///
/// On the curve `sin ρ · C − cos ρ · S = 0`, which is linear and homogeneous
/// in the coefficients; `ρ` is only defined up to the scale of `(C, S)`, so
/// the null vector of the sampled system determines the curve. When the null
/// space has more than one dimension (lines), the smoothest member is taken.
/// The location is the row with `α = 0`; the index coordinate is the one that
/// advances monotonically once around the torus, with ties settled by the
/// smaller residual. The null vector is then polished by Gauss–Newton on the
/// wrapped residuals of the other coordinate, which the linearized system only
/// weights indirectly.
pub fn curve_from_table(rows: &[(f64, TorusPoint<f64>)], m: usize) -> Result<RidgeCurve<f64>> {
    let unknowns = 2 * m + 1;
    if m < 1 {
        return Err(TrpcaError::InvalidArgument("Fourier order must be at least 1".into()));
    }
    if rows.len() < 2 * unknowns {
        return Err(TrpcaError::InsufficientData { needed: 2 * unknowns, got: rows.len() });
    }
    let mut rows = rows.to_vec();
    rows.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite alpha"));
    let mu = rows
        .iter()
        .find(|r| r.0 == 0.0)
        .map(|r| r.1)
        .ok_or_else(|| TrpcaError::InvalidArgument("curve table has no row at alpha = 0".into()))?;

    let mut best: Option<(f64, FourierRidge<f64>)> = None;
    for j in [Coord::First, Coord::Second] {
        if !advances_once(&rows, j) {
            continue;
        }
        let (residual, fr) = solve(&rows, mu, j, m)?;
        if best.as_ref().map_or(true, |b| residual < b.0) {
            best = Some((residual, fr));
        }
    }
    let (_, fr) = best.ok_or_else(|| {
        TrpcaError::Parametrization("neither coordinate advances monotonically along the table".into())
    })?;
    arclength_param(fr)
}

fn advances_once(rows: &[(f64, TorusPoint<f64>)], j: Coord) -> bool {
    let n = rows.len();
    let mut total = 0.0;
    for k in 0..n {
        let step = wrap(rows[(k + 1) % n].1.get(j) - rows[k].1.get(j));
        if step <= 0.0 {
            return false;
        }
        total += step;
    }
    (total - std::f64::consts::TAU).abs() < 1e-6
}

fn solve(rows: &[(f64, TorusPoint<f64>)], mu: TorusPoint<f64>, j: Coord, m: usize) -> Result<(f64, FourierRidge<f64>)> {
    let l = j.other();
    let cols = 2 * m + 1;
    let a = DMatrix::from_fn(rows.len(), cols, |r, c| {
        let p = rows[r].1;
        let t = wrap(p.get(j) - mu.get(j));
        let rho = wrap(p.get(l) - mu.get(l));
        if c == 0 {
            0.5 * rho.sin()
        } else if c <= m {
            rho.sin() * (c as f64 * t).cos()
        } else {
            -rho.cos() * ((c - m) as f64 * t).sin()
        }
    });
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t.ok_or_else(|| TrpcaError::Numeric("singular value decomposition failed".into()))?;
    let sv = &svd.singular_values;
    let smax = sv.max();
    let smin = sv.min();
    if !(smax > 0.0) {
        return Err(TrpcaError::Numeric("curve table is degenerate".into()));
    }
    let null: Vec<usize> = (0..sv.len()).filter(|&i| sv[i] <= (NULL_TOL * smax).max(smin)).collect();
    let basis = DMatrix::from_fn(cols, null.len(), |r, c| v_t[(null[c], r)]);
    // smoothest member: minimize Σ k² (a_k² + b_k²) over the unit sphere of the null space
    let weights = DMatrix::from_fn(cols, cols, |r, c| {
        if r != c {
            0.0
        } else {
            let k = if r <= m { r } else { r - m };
            (k * k) as f64
        }
    });
    let small = basis.transpose() * &weights * &basis;
    let eig = SymmetricEigen::new(small);
    let imin = eig.eigenvalues.imin();
    let x = &basis * eig.eigenvectors.column(imin);
    let x = polish(rows, mu, j, m, x.as_slice().to_vec());
    let residual = rms(&residuals(rows, mu, j, m, &x));
    let mut ca = vec![0.0; m + 1];
    let mut cb = vec![0.0; m + 1];
    ca.copy_from_slice(&x[..=m]);
    cb[1..].copy_from_slice(&x[m + 1..]);
    Ok((residual, FourierRidge::new(ca, cb, j, mu)?))
}

/// `(C, S)` of the coefficient vector `[a_0..a_m, b_1..b_m]` at offset `t`,
/// with the basis functions they are linear in.
fn series(x: &[f64], m: usize, t: f64, basis: &mut [f64]) -> (f64, f64) {
    basis[0] = 0.5;
    for k in 1..=m {
        basis[k] = (k as f64 * t).cos();
        basis[m + k] = (k as f64 * t).sin();
    }
    let c = (0..=m).map(|k| x[k] * basis[k]).sum();
    let s = (1..=m).map(|k| x[m + k] * basis[m + k]).sum();
    (c, s)
}

/// `ρ(t)` and its gradient in the coefficients.
fn rho_and_grad(x: &[f64], m: usize, t: f64, grad: &mut [f64]) -> f64 {
    let mut basis = vec![0.0; 2 * m + 1];
    let (c, s) = series(x, m, t, &mut basis);
    let r2 = c * c + s * s;
    for k in 0..=m {
        grad[k] = -s * basis[k] / r2;
    }
    for k in 1..=m {
        grad[m + k] = c * basis[m + k] / r2;
    }
    s.atan2(c)
}

fn residuals(rows: &[(f64, TorusPoint<f64>)], mu: TorusPoint<f64>, j: Coord, m: usize, x: &[f64]) -> Vec<f64> {
    let l = j.other();
    let mut g = vec![0.0; 2 * m + 1];
    let rho0 = rho_and_grad(x, m, 0.0, &mut g);
    rows.iter()
        .map(|(_, p)| {
            let t = wrap(p.get(j) - mu.get(j));
            wrap(p.get(l) - mu.get(l) - (rho_and_grad(x, m, t, &mut g) - rho0))
        })
        .collect()
}

fn rms(r: &[f64]) -> f64 {
    (r.iter().map(|v| v * v).sum::<f64>() / r.len() as f64).sqrt()
}

fn polish(rows: &[(f64, TorusPoint<f64>)], mu: TorusPoint<f64>, j: Coord, m: usize, mut x: Vec<f64>) -> Vec<f64> {
    let cols = 2 * m + 1;
    let mut r = residuals(rows, mu, j, m, &x);
    let mut err = rms(&r);
    for _ in 0..POLISH_ITERS {
        if err == 0.0 {
            break;
        }
        let mut g0 = vec![0.0; cols];
        rho_and_grad(&x, m, 0.0, &mut g0);
        let mut g = vec![0.0; cols];
        let jac = DMatrix::from_fn(rows.len(), cols, |i, c| {
            if c == 0 {
                let t = wrap(rows[i].1.get(j) - mu.get(j));
                rho_and_grad(&x, m, t, &mut g);
            }
            g[c] - g0[c]
        });
        // the curve ignores the scale of x, so the step is the minimum-norm one
        let rhs = nalgebra::DVector::from_column_slice(&r);
        let Ok(step) = jac.svd(true, true).solve(&rhs, 1e-12) else { break };
        let trial: Vec<f64> = x.iter().zip(step.iter()).map(|(a, d)| a + d).collect();
        let tr = residuals(rows, mu, j, m, &trial);
        let terr = rms(&tr);
        if !(terr < err) {
            break;
        }
        let norm = trial.iter().map(|v| v * v).sum::<f64>().sqrt();
        x = trial.into_iter().map(|v| v / norm).collect();
        r = tr;
        err = terr;
    }
    x
}
