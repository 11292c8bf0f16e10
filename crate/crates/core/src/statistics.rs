//! Photon-number statistics and quadrature squeezing, both in closed form
//! (Laguerre ratios) and by brute-force summation over amplitudes.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{ladder_matrices, FockVector};
use crate::special::{log_assoc_laguerre_negarg, log_laguerre_negarg, LogValue};
use crate::states::IntermediateParams;

/// Photon-number moments.
///
/// `mandel_q` and `g2` are `None` when `mean_n == 0` (vacuum), where both are
/// 0/0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentReport {
    pub mean_n: f64,
    pub mean_n2: f64,
    pub mandel_q: Option<f64>,
    pub g2: Option<f64>,
}

impl MomentReport {
    pub fn variance(&self) -> f64 {
        self.mean_n2 - self.mean_n * self.mean_n
    }
}

/// Quadrature moments for `x = (a + a^dagger)/sqrt2`, `p = (a - a^dagger)/(i sqrt2)`,
/// with the signal-to-noise ratio `snr = <x>^2 / var_x`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureReport {
    pub mean_x: f64,
    pub mean_p: f64,
    pub var_x: f64,
    pub var_p: f64,
    pub snr: f64,
}

/// `L_m^(k)(-lambda^2)` in log form, zero for negative `m`.
fn lag(m: isize, k: usize, lambda_sq: f64) -> LogValue {
    if m < 0 {
        LogValue::ZERO
    } else {
        log_assoc_laguerre_negarg(m as usize, k, lambda_sq)
    }
}

pub fn moments_closed(params: &IntermediateParams) -> MomentReport {
    let m = params.m() as isize;
    let mf = m as f64;
    let lsq = params.lambda_sq();
    let l_m = log_laguerre_negarg(m as usize, lsq);
    let l_m1 = lag(m - 1, 0, lsq);
    let l_m2 = lag(m - 2, 0, lsq);

    let r1 = l_m1.ratio(l_m);
    let mean_n = mf * r1;
    // <N(N-1)> = M(M-1) L_{M-2} / L_M
    let factorial_moment = mf * (mf - 1.0) * l_m2.ratio(l_m);
    let mean_n2 = factorial_moment + mean_n;

    let (mandel_q, g2) = if m == 0 {
        (None, None)
    } else {
        let q = (mf - 1.0) * l_m2.ratio(l_m1) - mf * r1;
        (Some(q), Some(factorial_moment / (mean_n * mean_n)))
    };
    MomentReport { mean_n, mean_n2, mandel_q, g2 }
}

pub fn moments_direct(state: &FockVector) -> MomentReport {
    let probs = state.probabilities();
    let mean_n: f64 = probs.iter().enumerate().map(|(n, p)| n as f64 * p).sum();
    let variance: f64 = probs.iter().enumerate().map(|(n, p)| (n as f64 - mean_n).powi(2) * p).sum();
    let mean_n2 = variance + mean_n * mean_n;
    let (mandel_q, g2) = if mean_n > 0.0 {
        let factorial_moment: f64 = probs.iter().enumerate().map(|(n, p)| (n * n.saturating_sub(1)) as f64 * p).sum();
        (Some(variance / mean_n - 1.0), Some(factorial_moment / (mean_n * mean_n)))
    } else {
        (None, None)
    };
    MomentReport { mean_n, mean_n2, mandel_q, g2 }
}

/// Moments of the binomial state; its Mandel parameter is `-eta` for every `M`.
pub fn binomial_moments_closed(eta: f64, m: usize) -> MomentReport {
    let mf = m as f64;
    let mean_n = mf * eta;
    let variance = mf * eta * (1.0 - eta);
    let (mandel_q, g2) = if mean_n > 0.0 { (Some(-eta), Some((mf - 1.0) / mf)) } else { (None, None) };
    MomentReport { mean_n, mean_n2: variance + mean_n * mean_n, mandel_q, g2 }
}

pub fn quadratures_closed(params: &IntermediateParams) -> QuadratureReport {
    let m = params.m() as isize;
    let mf = m as f64;
    let lambda = params.lambda();
    let lsq = params.lambda_sq();
    let l_m = log_laguerre_negarg(m as usize, lsq);

    let mean_n = mf * lag(m - 1, 0, lsq).ratio(l_m);
    // <a> = lambda L^(1)_{M-1} / L_M,  <a^2> = lambda^2 L^(2)_{M-2} / L_M
    let mean_a = lambda * lag(m - 1, 1, lsq).ratio(l_m);
    let mean_a2 = lsq * lag(m - 2, 2, lsq).ratio(l_m);

    let mean_x = std::f64::consts::SQRT_2 * mean_a;
    let var_x = 0.5 + mean_n + mean_a2 - 2.0 * mean_a * mean_a;
    let var_p = 0.5 + mean_n - mean_a2;
    QuadratureReport { mean_x, mean_p: 0.0, var_x, var_p, snr: mean_x * mean_x / var_x }
}

/// Quadrature moments from matrix elements of the truncated ladder operators.
///
/// The state needs two empty levels at the top so that `a^dagger` and
/// `(a^dagger)^2` act without truncation.
pub fn quadratures_direct(state: &FockVector) -> Result<QuadratureReport> {
    let dim = state.dim();
    if dim < 3 || state.top_mass(2) > 1e-20 {
        return Err(Error::InsufficientHeadroom(format!(
            "need two empty top levels; top mass is {:.3e} in dimension {dim}",
            state.top_mass(2)
        )));
    }
    let l = ladder_matrices(dim);
    let s2 = std::f64::consts::SQRT_2;
    let x = l.a.add(&l.a_dagger).scale(C64::new(1.0 / s2, 0.0));
    let p = l.a.sub(&l.a_dagger).scale(C64::new(0.0, -1.0 / s2));

    let xpsi = x.apply(state);
    let ppsi = p.apply(state);
    let mean_x = state.inner(&xpsi).re;
    let mean_p = state.inner(&ppsi).re;
    let var_x = xpsi.norm_sqr() - mean_x * mean_x;
    let var_p = ppsi.norm_sqr() - mean_p * mean_p;
    Ok(QuadratureReport { mean_x, mean_p, var_x, var_p, snr: mean_x * mean_x / var_x })
}
