//! Two-photon Jaynes-Cummings dynamics for an atom starting in `|e>` and an
//! arbitrary finite field state.
//!
//! Times passed to these functions are physical times `t`; the scaled time used
//! on plots is `tau = g t`.

use std::f64::consts::PI;

use ndarray::Array1;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{FockVector, OperatorMatrix};
use crate::quasiprob::coherent_overlap;
use crate::states::{intermediate_state, IntermediateParams};
use crate::statistics::moments_closed;

/// Coupling `g` and detuning `delta = omega_0 - 2 omega`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct JcmParams {
    g: f64,
    delta: f64,
}

impl JcmParams {
    pub fn new(g: f64, delta: f64) -> Result<Self> {
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::InvalidParameter(format!("coupling g must be finite and > 0, got {g}")));
        }
        if !delta.is_finite() {
            return Err(Error::InvalidParameter(format!("detuning must be finite, got {delta}")));
        }
        Ok(JcmParams { g, delta })
    }

    /// Resonant coupling.
    pub fn resonant(g: f64) -> Result<Self> {
        Self::new(g, 0.0)
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Two-photon Rabi frequency `g sqrt((n+1)(n+2))`.
    pub fn omega(&self, n: usize) -> f64 {
        let n = n as f64;
        self.g * ((n + 1.0) * (n + 2.0)).sqrt()
    }

    /// Detuned Rabi frequency `sqrt(delta^2/4 + omega_n^2)`.
    pub fn delta_n(&self, n: usize) -> f64 {
        (0.25 * self.delta * self.delta + self.omega(n).powi(2)).sqrt()
    }

    /// Physical time for scaled time `tau`.
    pub fn time(&self, tau: f64) -> f64 {
        tau / self.g
    }

    fn require_resonance(&self, what: &str) -> Result<()> {
        if self.delta != 0.0 {
            return Err(Error::InvalidParameter(format!("{what} requires zero detuning, got {}", self.delta)));
        }
        Ok(())
    }
}

/// Joint state `|e> (x) e_branch + |g> (x) g_branch` at `time`.
#[derive(Clone, Debug, PartialEq)]
pub struct JointAtomField {
    pub e_branch: FockVector,
    pub g_branch: FockVector,
    pub time: f64,
}

impl JointAtomField {
    pub fn norm_sqr(&self) -> f64 {
        self.e_branch.norm_sqr() + self.g_branch.norm_sqr()
    }

    /// Excited branch padded to the dimension of the ground branch.
    pub fn e_padded(&self) -> FockVector {
        self.e_branch.resized(self.g_branch.dim())
    }

    /// `P(e) - P(g)`.
    pub fn inversion(&self) -> f64 {
        self.e_branch.norm_sqr() - self.g_branch.norm_sqr()
    }

    /// Reduced atomic state in the basis ordering `(|g>, |e>)`.
    pub fn atomic_density(&self) -> AtomicDensity {
        let e = self.e_padded();
        AtomicDensity {
            rho11: self.g_branch.norm_sqr(),
            rho22: e.norm_sqr(),
            // <g| rho_a |e> = sum_n G_n conj(E_n)
            rho12: e.inner(&self.g_branch),
        }
    }

    /// Reduced field density matrix `|E><E| + |G><G|`.
    pub fn field_density_matrix(&self) -> OperatorMatrix {
        let e = self.e_padded().into_inner();
        let g = self.g_branch.amplitudes().to_owned();
        let d = g.len();
        let outer = |v: &Array1<C64>| {
            let col = v.view().into_shape_with_order((d, 1)).expect("column view");
            let row = v.mapv(|c| c.conj()).into_shape_with_order((1, d)).expect("row view");
            col.dot(&row)
        };
        OperatorMatrix::new(outer(&e) + outer(&g))
    }
}

/// Reduced atomic density matrix; index 1 is `|g>`, index 2 is `|e>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AtomicDensity {
    pub rho11: f64,
    pub rho22: f64,
    pub rho12: C64,
}

impl AtomicDensity {
    pub fn trace(&self) -> f64 {
        self.rho11 + self.rho22
    }

    /// Eigenvalues `(pi_plus, pi_minus)`.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let diff = self.rho22 - self.rho11;
        let r = (diff * diff + 4.0 * self.rho12.norm_sqr()).sqrt();
        let half = 0.5 * self.trace();
        (half + 0.5 * r, half - 0.5 * r)
    }
}

/// Exact evolution of `|e> (x) initial`.
pub fn evolve(params: &JcmParams, initial: &FockVector, t: f64) -> JointAtomField {
    let d = initial.dim();
    let delta = params.delta;
    let e_phase = C64::from_polar(1.0, 0.5 * delta * t);
    let g_phase = C64::from_polar(1.0, -0.5 * delta * t);
    let mut e = Array1::<C64>::zeros(d);
    let mut g = Array1::<C64>::zeros(d + 2);
    for (n, &c) in initial.amplitudes().iter().enumerate() {
        if c == C64::default() {
            continue;
        }
        let dn = params.delta_n(n);
        let (s, co) = (dn * t).sin_cos();
        e[n] = c * C64::new(co, -delta / (2.0 * dn) * s) * e_phase;
        g[n + 2] = c * C64::new(0.0, -params.omega(n) / dn * s) * g_phase;
    }
    JointAtomField { e_branch: FockVector::new(e), g_branch: FockVector::new(g), time: t }
}

/// Atomic inversion `P(e) - P(g)`; at resonance this is the sum of
/// `|C_n|^2 cos(2 omega_n t)`. Rounding excursions past `[-1, 1]` are clipped.
pub fn inversion(params: &JcmParams, initial: &FockVector, t: f64) -> f64 {
    let w: f64 = if params.delta != 0.0 {
        evolve(params, initial, t).inversion()
    } else {
        initial.probabilities().iter().enumerate().map(|(n, p)| p * (2.0 * params.omega(n) * t).cos()).sum()
    };
    w.clamp(-1.0, 1.0)
}

pub fn atomic_density(params: &JcmParams, initial: &FockVector, t: f64) -> AtomicDensity {
    evolve(params, initial, t).atomic_density()
}

/// Off-diagonal element as the resonant sum
/// `sum_n conj(C_{n+2}) C_n cos(omega_{n+2} t) sin(omega_n t)` without the
/// branch phases. For real amplitudes the reduced density matrix has
/// `rho12 = -i` times this value.
pub fn rho12_literal(params: &JcmParams, initial: &FockVector, t: f64) -> Result<C64> {
    params.require_resonance("rho12_literal")?;
    let c = initial.amplitudes();
    Ok((0..c.len().saturating_sub(2))
        .map(|n| c[n + 2].conj() * c[n] * (params.omega(n + 2) * t).cos() * (params.omega(n) * t).sin())
        .sum())
}

fn xlogx(p: f64) -> f64 {
    if p > 0.0 {
        p * p.ln()
    } else {
        0.0
    }
}

/// Von Neumann entropy of a 2x2 atomic state.
/// Entropy of a spectrum `{pp, pm}`, with rounding below zero reported as `+0`.
fn two_level_entropy(pp: f64, pm: f64) -> f64 {
    let s = -xlogx(pp) - xlogx(pm.max(0.0));
    if s > 0.0 {
        s
    } else {
        0.0
    }
}

pub fn entropy(rho: &AtomicDensity) -> f64 {
    let (pp, pm) = rho.eigenvalues();
    two_level_entropy(pp, pm)
}

/// Entropy of the field from `Tr rho_f` and `Tr rho_f^2`, using that the
/// reduced field state has rank at most two.
pub fn field_entropy(joint: &JointAtomField) -> f64 {
    let rho = joint.field_density_matrix();
    let m = rho.entries();
    let trace: f64 = m.diag().iter().map(|c| c.re).sum();
    let purity: f64 = m.iter().map(|c| c.norm_sqr()).sum::<f64>();
    let disc = (2.0 * purity - trace * trace).max(0.0).sqrt();
    let pp = 0.5 * (trace + disc);
    let pm = 0.5 * (trace - disc);
    two_level_entropy(pp, pm)
}

/// Field Q-function at resonance from the cosine and sine partial sums.
pub fn field_qfunction(params: &JcmParams, initial: &FockVector, t: f64, beta: C64) -> Result<f64> {
    params.require_resonance("field_qfunction")?;
    let d = initial.dim();
    let mut cos_part = Array1::<C64>::zeros(d);
    let mut sin_part = Array1::<C64>::zeros(d + 2);
    for (n, &c) in initial.amplitudes().iter().enumerate() {
        let (s, co) = (params.omega(n) * t).sin_cos();
        cos_part[n] = c * co;
        sin_part[n + 2] = c * s;
    }
    let q = coherent_overlap(&FockVector::new(cos_part), beta).norm_sqr()
        + coherent_overlap(&FockVector::new(sin_part), beta).norm_sqr();
    Ok(q / PI)
}

/// Photon-number distribution at resonance for `n = 0 .. dim + 1`.
pub fn photon_distribution(params: &JcmParams, initial: &FockVector, t: f64) -> Result<Vec<f64>> {
    params.require_resonance("photon_distribution")?;
    let probs = initial.probabilities();
    let d = probs.len();
    Ok((0..d + 2)
        .map(|n| {
            let stay = if n < d { probs[n] * (params.omega(n) * t).cos().powi(2) } else { 0.0 };
            let moved = if n >= 2 { probs[n - 2] * (params.omega(n - 2) * t).sin().powi(2) } else { 0.0 };
            stay + moved
        })
        .collect())
}

/// `|C_{n-2}|^2 / |C_n|^2` for `||eta, M>` from the closed ratio
/// `lambda^4 n (n-1) / ((M-n+2)^2 (M-n+1)^2)`, valid for `2 <= n <= M`.
pub fn amplitude_ratio(params: &IntermediateParams, n: usize) -> Option<f64> {
    let m = params.m();
    if n < 2 || n > m {
        return None;
    }
    let (nf, mf) = (n as f64, m as f64);
    let l4 = params.lambda_sq().powi(2);
    Some(l4 * nf * (nf - 1.0) / ((mf - nf + 2.0).powi(2) * (mf - nf + 1.0).powi(2)))
}

/// Large-photon-number approximation to the distribution at `tau = pi/4`,
/// for `n = 0 .. M + 2`.
pub fn approx_pn_quarter(params: &IntermediateParams) -> Result<Vec<f64>> {
    let m = params.m();
    let probs = intermediate_state(params, m + 1)?.probabilities();
    Ok((0..m + 3)
        .map(|n| {
            let s = ((n as f64 - 0.5) * PI / 4.0).sin().powi(2);
            if n <= m {
                (1.0 + amplitude_ratio(params, n).unwrap_or(0.0)) * probs[n] * s
            } else {
                probs[n - 2] * s
            }
        })
        .collect())
}

/// Smallest `xi > 0` with `(n - 1/2)(pi/4 - xi)` an integer multiple of `pi`.
pub fn perfect_oscillation_shift(n_band_center: usize) -> Result<f64> {
    if n_band_center == 0 {
        return Err(Error::InvalidParameter("band centre must be >= 1".into()));
    }
    let h = n_band_center as f64 - 0.5;
    let turns = (2.0 * n_band_center as f64 - 1.0) / 8.0;
    Ok(PI * turns.fract() / h)
}

/// Envelope statistics of an inversion trace.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Revival {
    /// First time the envelope drops below half its initial value.
    pub collapse_tau: f64,
    /// Time of the largest envelope value after the collapse.
    pub revival_tau: f64,
    /// Envelope value at the revival.
    pub revival_height: f64,
}

/// Running maximum of `|w|` over a centred window of `2 * half + 1` samples.
pub fn envelope(w: &[f64], half: usize) -> Vec<f64> {
    (0..w.len())
        .map(|k| {
            let lo = k.saturating_sub(half);
            let hi = (k + half + 1).min(w.len());
            w[lo..hi].iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
        })
        .collect()
}

/// Locates the collapse and first revival of an inversion trace sampled at
/// increasing `taus`. Returns `None` if the envelope never collapses.
pub fn find_revival(taus: &[f64], w: &[f64], half_window: usize) -> Option<Revival> {
    assert_eq!(taus.len(), w.len(), "time and value samples differ in length");
    let env = envelope(w, half_window);
    let start = *env.first()?;
    let collapse = env.iter().position(|&e| e < 0.5 * start)?;
    let (k, &height) =
        env[collapse..]
            .iter()
            .enumerate()
            .fold((0, &f64::NEG_INFINITY), |best, (k, e)| if *e > *best.1 { (k, e) } else { best });
    Some(Revival { collapse_tau: taus[collapse], revival_tau: taus[collapse + k], revival_height: height })
}

/// Local minima of `p` inside `band` (inclusive), each with the ratio of its
/// value to the smaller of the nearest local maxima on either side.
pub fn band_minima(p: &[f64], band: (usize, usize)) -> Vec<(usize, f64)> {
    let n = p.len();
    let is_min = |k: usize| k > 0 && k + 1 < n && p[k] < p[k - 1] && p[k] <= p[k + 1];
    let is_max = |k: usize| k > 0 && k + 1 < n && p[k] > p[k - 1] && p[k] >= p[k + 1];
    let hi = band.1.min(n.saturating_sub(1));
    (band.0..=hi)
        .filter(|&k| is_min(k))
        .filter_map(|k| {
            let left = (1..k).rev().find(|&j| is_max(j))?;
            let right = (k + 1..n - 1).find(|&j| is_max(j))?;
            Some((k, p[k] / p[left].min(p[right])))
        })
        .collect()
}

/// How the half-width of a photon-number band is measured.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BandWidth {
    /// `sqrt(<N>)`, the width of a Poisson distribution with the same mean.
    Poisson,
    /// The actual standard deviation of the photon number.
    StdDev,
}

/// `<N> +- 3 w` for `||eta, M>`, clipped to `0 ..= M + 2`.
pub fn central_band(params: &IntermediateParams, width: BandWidth) -> (usize, usize) {
    let r = moments_closed(params);
    let w = match width {
        BandWidth::Poisson => r.mean_n.sqrt(),
        BandWidth::StdDev => r.variance().max(0.0).sqrt(),
    };
    let lo = (r.mean_n - 3.0 * w).floor().max(0.0) as usize;
    let hi = ((r.mean_n + 3.0 * w).ceil() as usize).min(params.m() + 2);
    (lo, hi)
}

/// Largest minimum-to-neighbouring-maximum ratio in `band`, or `None` if the
/// band holds no bracketed minimum.
pub fn worst_band_minimum(p: &[f64], band: (usize, usize)) -> Option<f64> {
    band_minima(p, band).into_iter().map(|(_, r)| r).reduce(f64::max)
}

/// Total-variation distance `1/2 sum |p - q|`, padding the shorter input with zeros.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    let n = p.len().max(q.len());
    0.5 * (0..n).map(|k| (p.get(k).copied().unwrap_or(0.0) - q.get(k).copied().unwrap_or(0.0)).abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn res() -> JcmParams {
        JcmParams::resonant(1.0).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(JcmParams::new(0.0, 0.0).is_err());
        assert!(JcmParams::new(1.0, f64::NAN).is_err());
        let p = JcmParams::new(2.0, 0.0).unwrap();
        assert_relative_eq!(p.omega(0), 2.0 * 2f64.sqrt());
        assert_relative_eq!(p.time(1.0), 0.5);
    }

    #[test]
    fn evolve_at_zero_and_rabi_quarter() {
        let init = FockVector::from_real(&[0.6, 0.0, 0.8]);
        let j = evolve(&JcmParams::new(1.3, 0.7).unwrap(), &init, 0.0);
        assert_eq!(j.e_branch, init);
        assert_eq!(j.g_branch.norm_sqr(), 0.0);

        let m = 3;
        let p = res();
        let t = PI / 2.0 / p.omega(m);
        let j = evolve(&p, &FockVector::number_state(m, m + 1), t);
        assert!(j.e_branch.norm_sqr() < 1e-30);
        assert_relative_eq!(j.g_branch.get(m + 2).norm(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn entropy_cases() {
        let pure = AtomicDensity { rho11: 0.0, rho22: 1.0, rho12: C64::default() };
        assert_eq!(entropy(&pure), 0.0);
        let mixed = AtomicDensity { rho11: 0.5, rho22: 0.5, rho12: C64::default() };
        assert_relative_eq!(entropy(&mixed), 2f64.ln(), epsilon = 1e-15);

        let m = 5;
        let p = res();
        let t = PI / 4.0 / p.omega(m);
        let rho = atomic_density(&p, &FockVector::number_state(m, m + 1), t);
        assert!((entropy(&rho) - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn number_state_has_no_coherence() {
        let p = res();
        let init = FockVector::number_state(4, 5);
        for t in [0.1, 0.7, 2.3] {
            assert_eq!(atomic_density(&p, &init, t).rho12, C64::default());
            assert_eq!(rho12_literal(&p, &init, t).unwrap(), C64::default());
        }
    }

    #[test]
    fn shift_congruence() {
        for n in 1..300usize {
            let xi = perfect_oscillation_shift(n).unwrap();
            assert!(xi > 0.0 && xi <= PI / 4.0 + 1e-15);
            let turns = (n as f64 - 0.5) * (PI / 4.0 - xi) / PI;
            assert!((turns - turns.round()).abs() < 1e-12, "n={n}");
        }
        assert!(perfect_oscillation_shift(0).is_err());
    }

    #[test]
    fn band_minima_and_tv() {
        let p = [1.0, 0.5, 2.0, 0.1, 3.0, 0.0];
        // the minimum at index 1 has no maximum to its left
        assert_eq!(band_minima(&p, (0, 5)), vec![(3, 0.05)]);
        assert_relative_eq!(total_variation(&[0.5, 0.5], &[0.5, 0.25, 0.25]), 0.25);
    }

    #[test]
    fn revival_of_periodic_signal() {
        let taus: Vec<f64> = (0..=3000).map(|k| k as f64 * 1.5 * PI / 3000.0).collect();
        // beating of many equally spaced frequencies revives at tau = pi
        let w: Vec<f64> =
            taus.iter().map(|t| (0..20).map(|n| (2.0 * (n as f64 + 30.0) * t).cos()).sum::<f64>() / 20.0).collect();
        let r = find_revival(&taus, &w, 20).unwrap();
        assert!(r.collapse_tau < 0.5);
        assert!((r.revival_tau - PI).abs() < 0.05, "{r:?}");
    }
}
