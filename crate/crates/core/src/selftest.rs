//! Fast invariant checks over every module, run in a fixed order.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use crate::figures::{figure_datasets, FigureId, FigureOptions};
use crate::fock::{coherent_vector, displacement_matrix, FockVector};
use crate::generation::{detection_sweep, DriveParams};
use crate::jcm::{entropy, evolve, field_entropy, photon_distribution, JcmParams};
use crate::quasiprob::{husimi_closed, husimi_direct, wigner_closed, wigner_oracle};
use crate::special::{assoc_laguerre, log_assoc_laguerre_negarg};
use crate::states::{eigen_residual, intermediate_state, IntermediateParams};
use crate::statistics::{moments_closed, moments_direct, quadratures_closed, quadratures_direct};
use crate::C64;

/// Knobs for the self-test run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SelftestOptions {
    /// Builds the eigenstate check's vectors with `-lambda` instead of
    /// `lambda`, which must make that check fail.
    pub flip_lambda_sign: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SelftestReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl SelftestReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }

    /// One line per check: status, name, wall time in milliseconds, detail.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for o in &self.outcomes {
            let status = if o.passed { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{status} {:<24} {:>10.3} ms  {}", o.name, o.elapsed.as_secs_f64() * 1e3, o.detail);
        }
        let failed = self.failures().count();
        let _ = writeln!(out, "{} checks, {} failed", self.outcomes.len(), failed);
        out
    }
}

type Check = fn(&SelftestOptions) -> Result<String, String>;

const CHECKS: [(&str, Check); 10] = [
    ("special_laguerre", check_laguerre),
    ("fock_displacement", check_displacement),
    ("states_eigen_residual", check_eigen_residual),
    ("statistics_closed_direct", check_statistics),
    ("statistics_snr_bound", check_snr_bound),
    ("quasiprob_closed_oracle", check_quasiprob),
    ("jcm_norm_entropy", check_jcm_entropy),
    ("jcm_distribution", check_jcm_distribution),
    ("generation_fidelity", check_generation),
    ("figure_determinism", check_figures),
];

/// Runs every check sequentially and records its wall time.
pub fn run(opts: &SelftestOptions) -> SelftestReport {
    let outcomes = CHECKS
        .iter()
        .map(|&(name, check)| {
            let start = Instant::now();
            let result = check(opts);
            let elapsed = start.elapsed();
            let (passed, detail) = match result {
                Ok(d) => (true, d),
                Err(d) => (false, d),
            };
            CheckOutcome { name, passed, detail, elapsed }
        })
        .collect();
    SelftestReport { outcomes }
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: crate::Result<T>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

const ETAS: [f64; 4] = [0.05, 0.3, 0.6, 0.95];
const MS: [usize; 4] = [0, 1, 5, 20];

fn check_laguerre(_: &SelftestOptions) -> Result<String, String> {
    let mut worst = 0.0f64;
    for m in [0usize, 1, 4, 12, 30] {
        for k in [0usize, 1, 2] {
            for x in [0.01, 0.5, 3.0, 9.0] {
                let direct = assoc_laguerre(m, k, -x);
                let logged = log_assoc_laguerre_negarg(m, k, x).to_f64();
                worst = worst.max((direct / logged - 1.0).abs());
            }
        }
    }
    ensure(worst < 1e-12, || format!("relative mismatch {worst:.3e}"))?;
    Ok(format!("max relative mismatch {worst:.1e}"))
}

fn check_displacement(_: &SelftestOptions) -> Result<String, String> {
    let dim = 80;
    let alpha = C64::new(1.1, -0.4);
    let d = lib(displacement_matrix(alpha, dim))?;
    let moved = d.apply(&FockVector::vacuum(dim));
    let coherent = lib(coherent_vector(alpha, dim))?;
    let err = moved.sub(&coherent).norm();
    ensure(err < 1e-10, || format!("D|0> differs from |alpha> by {err:.3e}"))?;
    Ok(format!("|D|0> - |alpha>| = {err:.1e}"))
}

fn check_eigen_residual(opts: &SelftestOptions) -> Result<String, String> {
    let mut worst = 0.0f64;
    for eta in ETAS {
        for m in MS {
            let params = lib(IntermediateParams::new(eta, m))?;
            let mut state = lib(intermediate_state(&params, m + 1))?;
            if opts.flip_lambda_sign {
                let flipped: Vec<f64> =
                    (0..=m).map(|n| state.get(n).re * if (m - n) % 2 == 1 { -1.0 } else { 1.0 }).collect();
                state = FockVector::from_real(&flipped);
            }
            worst = worst.max(eigen_residual(&state, &params));
        }
    }
    ensure(worst < 1e-10, || format!("residual {worst:.3e}"))?;
    Ok(format!("max residual {worst:.1e}"))
}

fn check_statistics(_: &SelftestOptions) -> Result<String, String> {
    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(1e-300).max(1.0);
    let mut worst = 0.0f64;
    for eta in ETAS {
        for m in MS {
            let params = lib(IntermediateParams::new(eta, m))?;
            let state = lib(intermediate_state(&params, m + 3))?;
            let (c, d) = (moments_closed(&params), moments_direct(&state));
            let (qc, qd) = (quadratures_closed(&params), lib(quadratures_direct(&state))?);
            for (a, b) in [(c.mean_n, d.mean_n), (c.mean_n2, d.mean_n2), (qc.var_x, qd.var_x), (qc.var_p, qd.var_p)] {
                worst = worst.max(rel(a, b));
            }
        }
    }
    ensure(worst < 1e-9, || format!("relative mismatch {worst:.3e}"))?;
    Ok(format!("max relative mismatch {worst:.1e}"))
}

fn check_snr_bound(_: &SelftestOptions) -> Result<String, String> {
    for i in 1..=50 {
        let eta = i as f64 / 50.0;
        for m in [1usize, 2, 10, 50] {
            let params = lib(IntermediateParams::new(eta, m))?;
            let n = moments_closed(&params).mean_n;
            let snr = quadratures_closed(&params).snr;
            ensure(snr <= 4.0 * n * (n + 1.0) + 1e-9, || format!("eta={eta} M={m}: snr {snr} above bound"))?;
        }
    }
    Ok("bound holds on 200 points".into())
}

fn check_quasiprob(_: &SelftestOptions) -> Result<String, String> {
    let betas = [C64::new(0.0, 0.0), C64::new(0.7, -0.3), C64::new(-1.1, 0.8)];
    let (mut wq, mut ww) = (0.0f64, 0.0f64);
    for eta in ETAS {
        for m in [0usize, 1, 3, 8] {
            let params = lib(IntermediateParams::new(eta, m))?;
            let state = lib(intermediate_state(&params, m + 1))?;
            for b in betas {
                wq = wq.max((husimi_closed(&params, b) - husimi_direct(&state, b)).abs());
                ww = ww.max((wigner_closed(&params, b) - lib(wigner_oracle(&state, b))?).abs());
            }
        }
    }
    ensure(wq < 1e-12 && ww < 1e-8, || format!("Q mismatch {wq:.3e}, W mismatch {ww:.3e}"))?;
    Ok(format!("Q {wq:.1e}, W {ww:.1e}"))
}

fn check_jcm_entropy(_: &SelftestOptions) -> Result<String, String> {
    let p = lib(JcmParams::new(1.0, 0.4))?;
    let init = lib(intermediate_state(&lib(IntermediateParams::new(0.5, 12))?, 13))?;
    let (mut norm, mut gap) = (0.0f64, 0.0f64);
    for k in 0..=20 {
        let joint = evolve(&p, &init, PI * k as f64 / 20.0);
        norm = norm.max((joint.norm_sqr() - 1.0).abs());
        gap = gap.max((entropy(&joint.atomic_density()) - field_entropy(&joint)).abs());
    }
    ensure(norm < 1e-12 && gap < 1e-8, || format!("norm drift {norm:.3e}, entropy gap {gap:.3e}"))?;
    Ok(format!("norm drift {norm:.1e}, entropy gap {gap:.1e}"))
}

fn check_jcm_distribution(_: &SelftestOptions) -> Result<String, String> {
    let p = lib(JcmParams::resonant(1.0))?;
    let init = lib(intermediate_state(&lib(IntermediateParams::new(0.8, 30))?, 31))?;
    let mut worst = 0.0f64;
    for k in 0..=8 {
        let pn = lib(photon_distribution(&p, &init, PI * k as f64 / 8.0))?;
        ensure(pn.iter().all(|&v| v >= 0.0), || "negative probability".into())?;
        worst = worst.max((pn.iter().sum::<f64>() - 1.0).abs());
    }
    ensure(worst < 1e-12, || format!("normalization off by {worst:.3e}"))?;
    Ok(format!("normalization {worst:.1e}"))
}

fn check_generation(_: &SelftestOptions) -> Result<String, String> {
    let rows = lib(detection_sweep(&[0.0, 1.0, 3.0], 1.0, 1.0, 1e-3, 1))?;
    let worst = rows.iter().map(|r| 1.0 - r.fidelity).fold(0.0f64, f64::max);
    ensure(worst < 1e-4, || format!("infidelity {worst:.3e}"))?;
    let drive = lib(DriveParams::new(1.0, 1.0, 1.0, 1))?;
    ensure((drive.predicted_eta() - 0.5).abs() < 1e-15, || "predicted eta".into())?;
    Ok(format!("max infidelity {worst:.1e}"))
}

fn check_figures(_: &SelftestOptions) -> Result<String, String> {
    let opts = FigureOptions { eta_points: 21, tau_points: 41, grid_points: 15 };
    let mut files = 0;
    for id in FigureId::ALL {
        let a = lib(figure_datasets(id, &opts))?;
        let b = lib(figure_datasets(id, &opts))?;
        ensure(a == b, || format!("{id} differs between runs"))?;
        files += a.len();
    }
    Ok(format!("{files} datasets reproducible"))
}
