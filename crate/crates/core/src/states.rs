//! State families: the intermediate number-coherent states `||eta, M>`,
//! binomial states and photon-added coherent states.

use ndarray::Array1;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{FockVector, TAIL_LIMIT};
use crate::special::{log_factorial, log_laguerre_negarg, LogValue};

/// Largest photon number `M` accepted for intermediate states.
pub const MAX_PHOTONS: usize = 2000;

/// Parameters `(eta, M)` of an intermediate state, with the derived
/// `lambda = sqrt((1 - eta) / eta)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntermediateParams {
    eta: f64,
    m: usize,
    lambda: f64,
}

impl IntermediateParams {
    pub fn new(eta: f64, m: usize) -> Result<Self> {
        if !(eta > 0.0 && eta <= 1.0) {
            return Err(Error::InvalidParameter(format!("eta must lie in (0, 1], got {eta}")));
        }
        if m > MAX_PHOTONS {
            return Err(Error::InvalidParameter(format!("M must not exceed {MAX_PHOTONS}, got {m}")));
        }
        let lambda = if eta == 1.0 { 0.0 } else { ((1.0 - eta) / eta).sqrt() };
        if !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!("eta = {eta} gives a non-finite lambda")));
        }
        Ok(IntermediateParams { eta, m, lambda })
    }

    /// Parameters with a given `lambda >= 0`, i.e. `eta = 1 / (1 + lambda^2)`.
    pub fn from_lambda(lambda: f64, m: usize) -> Result<Self> {
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("lambda must be finite and >= 0, got {lambda}")));
        }
        let mut p = IntermediateParams::new(1.0 / (1.0 + lambda * lambda), m)?;
        p.lambda = lambda;
        Ok(p)
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn lambda_sq(&self) -> f64 {
        self.lambda * self.lambda
    }

    /// Eigenvalue `sqrt(eta) * M` of `sqrt(eta) N + sqrt(1 - eta) a`.
    pub fn eigenvalue(&self) -> f64 {
        self.eta.sqrt() * self.m as f64
    }

    /// Same `eta`, different `M`.
    pub fn with_m(&self, m: usize) -> Self {
        IntermediateParams { m, ..*self }
    }

    /// `ln sqrt(M! L_M(-lambda^2))`, the log of the normalization divisor.
    pub fn log_norm(&self) -> f64 {
        0.5 * (log_factorial(self.m) + log_laguerre_negarg(self.m, self.lambda_sq()).log_magnitude)
    }
}

/// `||eta, M>` expanded on `dim` Fock levels.
pub fn intermediate_state(params: &IntermediateParams, dim: usize) -> Result<FockVector> {
    let m = params.m();
    if dim < m + 1 {
        return Err(Error::DimensionTooSmall { dim, needed: m + 1 });
    }
    let ln_lambda = params.lambda().ln();
    let log_norm = params.log_norm();
    let mut amps = Array1::<C64>::zeros(dim);
    for n in 0..=m {
        let power = (m - n) as f64;
        // 0^0 = 1 at lambda = 0
        let lambda_term = if power == 0.0 { 0.0 } else { power * ln_lambda };
        let log_c = lambda_term + log_factorial(m) - log_factorial(m - n) - 0.5 * log_factorial(n) - log_norm;
        amps[n] = C64::new(log_c.exp(), 0.0);
    }
    Ok(FockVector::new(amps).normalized())
}

/// `|| (sqrt(eta) N + sqrt(1 - eta) a - sqrt(eta) M) |state> ||`.
pub fn eigen_residual(state: &FockVector, params: &IntermediateParams) -> f64 {
    let se = params.eta().sqrt();
    let sc = (1.0 - params.eta()).sqrt();
    let lhs = state.number_applied().scaled(C64::new(se, 0.0)).add(&state.lowered().scaled(C64::new(sc, 0.0)));
    lhs.sub(&state.scaled(C64::new(params.eigenvalue(), 0.0))).norm()
}

/// First `len` coefficients of the unnormalized eigen-solution for an
/// arbitrary complex eigenvalue `beta`, with `C_0 = 1`.
///
/// No convergence or normalizability is implied; for `beta = sqrt(eta) M` the
/// sequence terminates after `n = M`.
pub fn eigen_series_prefix(eta: f64, beta: C64, len: usize) -> Result<Vec<C64>> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidParameter(format!("eta must lie in (0, 1), got {eta}")));
    }
    let se = eta.sqrt();
    let sc = (1.0 - eta).sqrt();
    let mut out = Vec::with_capacity(len);
    let mut c = C64::new(1.0, 0.0);
    for n in 0..len {
        out.push(c);
        c *= (beta - se * n as f64) / (sc * ((n + 1) as f64).sqrt());
    }
    Ok(out)
}

/// Binomial state with binomial photon-number weights; `eta` may be 0 or 1.
pub fn binomial_state(eta: f64, m: usize, dim: usize) -> Result<FockVector> {
    if !(0.0..=1.0).contains(&eta) {
        return Err(Error::InvalidParameter(format!("eta must lie in [0, 1], got {eta}")));
    }
    if dim < m + 1 {
        return Err(Error::DimensionTooSmall { dim, needed: m + 1 });
    }
    if eta == 0.0 {
        return Ok(FockVector::vacuum(dim));
    }
    if eta == 1.0 {
        return Ok(FockVector::number_state(m, dim));
    }
    let (ln_p, ln_q) = (eta.ln(), (1.0 - eta).ln());
    let mut amps = Array1::<C64>::zeros(dim);
    for n in 0..=m {
        let log_w =
            log_factorial(m) - log_factorial(n) - log_factorial(m - n) + n as f64 * ln_p + (m - n) as f64 * ln_q;
        amps[n] = C64::new((0.5 * log_w).exp(), 0.0);
    }
    Ok(FockVector::new(amps))
}

/// Photon-added coherent state `a^dagger^M |lambda> / sqrt(M! L_M(-lambda^2))`.
pub fn photon_added_coherent(lambda: f64, m: usize, dim: usize) -> Result<FockVector> {
    if !(lambda >= 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidParameter(format!("lambda must be finite and >= 0, got {lambda}")));
    }
    if dim < m + 1 {
        return Err(Error::DimensionTooSmall { dim, needed: m + 1 });
    }
    let lsq = lambda * lambda;
    let log_norm = 0.5 * (log_factorial(m) + log_laguerre_negarg(m, lsq).log_magnitude);
    let ln_lambda = lambda.ln();
    let mut amps = Array1::<C64>::zeros(dim);
    for k in 0..dim - m {
        let lambda_term = if k == 0 { 0.0 } else { k as f64 * ln_lambda };
        let log_c = -0.5 * lsq + lambda_term + 0.5 * log_factorial(k + m) - log_factorial(k) - log_norm;
        amps[k + m] = C64::new(log_c.exp(), 0.0);
    }
    let v = FockVector::new(amps);
    let tail = 1.0 - v.norm_sqr();
    if tail >= TAIL_LIMIT {
        return Err(Error::TruncationTooSmall { tail, limit: TAIL_LIMIT });
    }
    Ok(v.normalized())
}

/// Result of lowering `||eta, M>` by `a^k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lowered {
    /// Nonnegative prefactor multiplying the lowered state.
    pub coefficient: f64,
    /// Parameters `(eta, M - k)` of the lowered state; `None` when `k > M`,
    /// in which case the result is the zero vector.
    pub params: Option<IntermediateParams>,
}

/// `a^k ||eta, M> = coefficient * ||eta, M - k>`.
pub fn lower_k(params: &IntermediateParams, k: usize) -> Lowered {
    let m = params.m();
    if k > m {
        return Lowered { coefficient: 0.0, params: None };
    }
    let lsq = params.lambda_sq();
    let falling = LogValue::positive(log_factorial(m) - log_factorial(m - k));
    let ratio = log_laguerre_negarg(m - k, lsq) / log_laguerre_negarg(m, lsq);
    Lowered { coefficient: (falling * ratio).sqrt().to_f64(), params: Some(params.with_m(m - k)) }
}
