//! Modified Bessel functions of the first kind, as needed by the sine von Mises
//! normalizing constant and the von Mises moment equations.

use crate::error::{Result, TrpcaError};
use crate::scalar::{lit, Real};

/// Arguments below this use the ascending power series.
const SERIES_LIMIT: f64 = 15.0;

/// `ln I_0(x)` for `x >= 0`.
pub fn ln_bessel_i0<T: Real>(x: T) -> T {
    let x = x.abs();
    if x < lit(SERIES_LIMIT) {
        bessel_i_series(0, x).ln()
    } else {
        x + scaled_i0_asymptotic(x).ln()
    }
}

/// `I_m(x)` for `x >= 0`.
///
/// Ascending series below 15; above, `e^x`-scaled `I_0` from its asymptotic
/// expansion multiplied by order ratios from a backward continued fraction.
pub fn bessel_i<T: Real>(order: usize, x: T) -> T {
    let x = x.abs();
    if x < lit(SERIES_LIMIT) {
        return bessel_i_series(order, x);
    }
    let ratios = order_ratios(x, order);
    let log_i = x + scaled_i0_asymptotic(x).ln() + ratios.iter().map(|&q| (q * x).ln()).sum::<T>();
    log_i.exp()
}

/// `I_1(x) / I_0(x)`, the mean resultant length of a von Mises with concentration `x`.
pub fn bessel_ratio_a1<T: Real>(x: T) -> T {
    if x <= T::zero() {
        return T::zero();
    }
    // q_1 = I_1 / (x I_0)
    x * order_ratios(x, 1)[0]
}

fn bessel_i_series<T: Real>(order: usize, x: T) -> T {
    let half = x / lit(2.0);
    let mut lead = T::one();
    for k in 1..=order {
        lead = lead * half / T::from_usize_lossy(k);
    }
    if lead == T::zero() {
        return lead;
    }
    let q = half * half;
    let mut term = lead;
    let mut sum = lead;
    let m = T::from_usize_lossy(order);
    for k in 1..500 {
        let kf = T::from_usize_lossy(k);
        term = term * q / (kf * (m + kf));
        sum = sum + term;
        if term <= sum * T::epsilon() {
            break;
        }
    }
    sum
}

fn scaled_i0_asymptotic<T: Real>(x: T) -> T {
    // e^{-x} I_0(x) ~ (2πx)^{-1/2} Σ_k ((2k-1)!!)^2 / (k! (8x)^k)
    let mut term = T::one();
    let mut sum = T::one();
    let eight_x = lit::<T>(8.0) * x;
    for k in 1..60 {
        let odd = T::from_usize_lossy(2 * k - 1);
        let next = term * odd * odd / (T::from_usize_lossy(k) * eight_x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum = sum + term;
        if term.abs() <= sum * T::epsilon() {
            break;
        }
    }
    sum / (T::two_pi() * x).sqrt()
}

/// `q_m = I_m(x) / (x I_{m-1}(x))` for `m = 1..=max_order`.
///
/// Backward recurrence `q_m = 1 / (2m + x² q_{m+1})`, stable in this direction
/// and finite at `x = 0` where `q_m = 1/(2m)`.
pub(crate) fn order_ratios<T: Real>(x: T, max_order: usize) -> Vec<T> {
    let start = max_order + 60 + (x.to_f64_lossy().abs().ceil() as usize) * 2;
    let x2 = x * x;
    let mut q = T::zero();
    let mut out = vec![T::zero(); max_order];
    for m in (1..=start).rev() {
        q = T::one() / (lit::<T>(2.0) * T::from_usize_lossy(m) + x2 * q);
        if m <= max_order {
            out[m - 1] = q;
        }
    }
    out
}

pub(crate) const BSVM_SERIES_MAX_TERMS: usize = 200;

/// `ln` of `Σ_m C(2m,m) (λ/2)^{2m} κ1^{-m} I_m(κ1) κ2^{-m} I_m(κ2)`, with the
/// `I_0` factors pulled out: returns `ln Σ_m t_m` where `t_0 = 1`.
pub(crate) fn bsvm_series_log_ratio<T: Real>(kappa1: T, kappa2: T, lambda: T) -> Result<T> {
    if lambda == T::zero() {
        return Ok(T::zero());
    }
    let q1 = order_ratios(kappa1, BSVM_SERIES_MAX_TERMS);
    let q2 = order_ratios(kappa2, BSVM_SERIES_MAX_TERMS);
    let l2 = (lambda * lambda / lit(4.0)).ln();
    let mut log_term = T::zero();
    let mut log_sum = T::zero();
    let tol = lit::<T>(1e-14).max(T::epsilon());
    for m in 1..=BSVM_SERIES_MAX_TERMS {
        let mf = T::from_usize_lossy(m);
        let binom_ratio = lit::<T>(2.0) * (lit::<T>(2.0) * mf - T::one()) / mf;
        let step = binom_ratio.ln() + l2 + q1[m - 1].ln() + q2[m - 1].ln();
        log_term = log_term + step;
        // log-sum-exp update
        let (hi, lo) = if log_term > log_sum { (log_term, log_sum) } else { (log_sum, log_term) };
        log_sum = hi + (lo - hi).exp().ln_1p();
        if step < T::zero() && (log_term - log_sum).exp() < tol {
            return Ok(log_sum);
        }
    }
    Err(TrpcaError::Numeric(format!(
        "sine von Mises normalizing series did not converge in {BSVM_SERIES_MAX_TERMS} terms \
         (kappa1 = {kappa1}, kappa2 = {kappa2}, lambda = {lambda})"
    )))
}
