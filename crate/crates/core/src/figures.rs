//! CSV datasets for the nine figure sets.
//!
//! Every dataset is rendered to a string first so callers can compare runs
//! byte for byte; [`write_figure`] then stores each one atomically.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::csv::{write_atomic, Table};
use crate::error::{Error, Result};
use crate::jcm::{atomic_density, entropy, field_qfunction, inversion, photon_distribution, JcmParams};
use crate::quasiprob::{husimi_closed, rasterize, wigner_closed, PhaseGrid};
use crate::states::{intermediate_state, IntermediateParams};
use crate::statistics::{moments_closed, quadratures_closed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FigureId {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig9,
}

impl FigureId {
    pub const ALL: [FigureId; 9] = [
        FigureId::Fig1,
        FigureId::Fig2,
        FigureId::Fig3,
        FigureId::Fig4,
        FigureId::Fig5,
        FigureId::Fig6,
        FigureId::Fig7,
        FigureId::Fig8,
        FigureId::Fig9,
    ];

    pub fn number(self) -> usize {
        self as usize + 1
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fig{}", self.number())
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|id| id.to_string() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown figure '{s}', expected fig1 .. fig9")))
    }
}

/// Sampling densities shared by all figures.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FigureOptions {
    /// Number of `eta` samples, placed at `(i + 1) / eta_points`.
    pub eta_points: usize,
    /// Number of uniformly spaced `tau` samples over `[0, pi]`, endpoints included.
    pub tau_points: usize,
    /// Cells per axis of every phase-space raster.
    pub grid_points: usize,
}

impl Default for FigureOptions {
    fn default() -> Self {
        FigureOptions { eta_points: 401, tau_points: 2001, grid_points: 101 }
    }
}

impl FigureOptions {
    fn validate(&self) -> Result<()> {
        if self.eta_points < 1 || self.tau_points < 2 || self.grid_points < 1 {
            return Err(Error::InvalidParameter(format!(
                "figure sampling needs eta_points >= 1, tau_points >= 2, grid_points >= 1 (got {}, {}, {})",
                self.eta_points, self.tau_points, self.grid_points
            )));
        }
        Ok(())
    }

    pub fn etas(&self) -> Vec<f64> {
        (0..self.eta_points).map(|i| (i + 1) as f64 / self.eta_points as f64).collect()
    }

    pub fn taus(&self) -> Vec<f64> {
        let last = (self.tau_points - 1) as f64;
        (0..self.tau_points).map(|k| PI * k as f64 / last).collect()
    }
}

/// One CSV file of a figure set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dataset {
    pub file_name: String,
    pub contents: String,
}

impl Dataset {
    fn new(file_name: String, contents: String) -> Self {
        Dataset { file_name, contents }
    }
}

pub const FIG1_M: [usize; 3] = [2, 50, 100];
pub const FIG2_M: [usize; 4] = [2, 20, 50, 200];
pub const FIG3_M: [usize; 4] = [2, 10, 20, 50];
pub const FIG3_COMPARISON_M: usize = 10;
pub const FIG4_M: usize = 3;
pub const FIG4_ETA: [f64; 4] = [0.1, 0.4, 0.7, 1.0];
pub const FIG5_M: usize = 10;
pub const FIG5_ETA: [f64; 6] = [0.05, 0.2, 0.4, 0.6, 0.8, 0.95];
pub const FIG6_CASES: [(usize, f64); 4] = [(4, 0.999), (70, 0.8), (70, 0.1), (200, 0.001)];
pub const FIG7_CASES: [(usize, f64); 4] = [(4, 0.9999), (70, 0.8), (70, 0.1), (200, 0.005)];
pub const SNAPSHOT_M: usize = 70;
/// `(eta, xi)` pairs for the photon-distribution snapshots.
pub const SNAPSHOT_CASES: [(f64, f64); 2] = [(0.1, 1.0 / 140.0), (0.8, 1.0 / 180.0)];
pub const SNAPSHOT_TAUS: [(&str, f64); 5] =
    [("0", 0.0), ("pi4", PI / 4.0), ("pi2", PI / 2.0), ("3pi4", 3.0 * PI / 4.0), ("pi", PI)];

const FIG4_HALF_WIDTH: f64 = 4.0;
const FIG5_HALF_WIDTH: f64 = 6.0;
const FIG8_HALF_WIDTH: f64 = 12.0;

/// File-name fragment for a parameter value, e.g. `0.999` or `1`.
fn label(v: f64) -> String {
    format!("{v}")
}

fn state_for(m: usize, eta: f64) -> Result<crate::fock::FockVector> {
    intermediate_state(&IntermediateParams::new(eta, m)?, m + 1)
}

fn eta_table<F>(opts: &FigureOptions, columns: &[String], row: F) -> Result<String>
where
    F: Fn(f64) -> Result<Vec<f64>> + Sync,
{
    let rows: Vec<Vec<f64>> = opts
        .etas()
        .into_par_iter()
        .map(|eta| {
            let mut r = vec![eta];
            r.extend(row(eta)?);
            Ok(r)
        })
        .collect::<Result<_>>()?;
    let mut header = vec!["eta".to_string()];
    header.extend_from_slice(columns);
    let mut t = Table::new(&header);
    rows.iter().for_each(|r| t.push(r));
    Ok(t.render())
}

fn tau_table<F>(opts: &FigureOptions, column: &str, f: F) -> String
where
    F: Fn(f64) -> f64 + Sync,
{
    let values: Vec<f64> = opts.taus().into_par_iter().map(&f).collect();
    let mut t = Table::new(&["tau", column]);
    for (tau, v) in opts.taus().into_iter().zip(values) {
        t.push(&[tau, v]);
    }
    t.render()
}

fn fig1(opts: &FigureOptions) -> Result<Vec<Dataset>> {
    let mut cols: Vec<String> = FIG1_M.iter().map(|m| format!("q_m{m}")).collect();
    cols.push("q_binomial".into());
    let csv = eta_table(opts, &cols, |eta| {
        let mut r = FIG1_M
            .iter()
            .map(|&m| Ok(moments_closed(&IntermediateParams::new(eta, m)?).mandel_q.unwrap_or(f64::NAN)))
            .collect::<Result<Vec<_>>>()?;
        r.push(-eta);
        Ok(r)
    })?;
    Ok(vec![Dataset::new("fig1.csv".into(), csv)])
}

fn fig2(opts: &FigureOptions) -> Result<Vec<Dataset>> {
    let cols: Vec<String> = FIG2_M.iter().map(|m| format!("var_x_m{m}")).collect();
    let csv = eta_table(opts, &cols, |eta| {
        FIG2_M.iter().map(|&m| Ok(quadratures_closed(&IntermediateParams::new(eta, m)?).var_x)).collect()
    })?;
    Ok(vec![Dataset::new("fig2.csv".into(), csv)])
}

fn fig3(opts: &FigureOptions) -> Result<Vec<Dataset>> {
    let cols: Vec<String> = FIG3_M.iter().map(|m| format!("snr_m{m}")).collect();
    let a = eta_table(opts, &cols, |eta| {
        FIG3_M.iter().map(|&m| Ok(quadratures_closed(&IntermediateParams::new(eta, m)?).snr)).collect()
    })?;
    let cols: Vec<String> = ["snr", "four_n_n_plus_1", "four_n", "var_x"].map(String::from).to_vec();
    let b = eta_table(opts, &cols, |eta| {
        let p = IntermediateParams::new(eta, FIG3_COMPARISON_M)?;
        let (q, n) = (quadratures_closed(&p), moments_closed(&p).mean_n);
        Ok(vec![q.snr, 4.0 * n * (n + 1.0), 4.0 * n, q.var_x])
    })?;
    Ok(vec![Dataset::new("fig3a.csv".into(), a), Dataset::new("fig3b.csv".into(), b)])
}

fn fig4(opts: &FigureOptions) -> Result<Vec<Dataset>> {
    let grid = PhaseGrid::square(FIG4_HALF_WIDTH, opts.grid_points)?;
    let mut out = Vec::new();
    for eta in FIG4_ETA {
        let p = IntermediateParams::new(eta, FIG4_M)?;
        let w = rasterize(&grid, |b| Ok(wigner_closed(&p, b)))?;
        out.push(Dataset::new(format!("fig4_eta_{}.csv", label(eta)), w.to_csv("value")));
    }
    let vacuum = IntermediateParams::new(1.0, 0)?;
    let w = rasterize(&grid, |b| Ok(wigner_closed(&vacuum, b)))?;
    out.push(Dataset::new("fig4_vacuum.csv".into(), w.to_csv("value")));
    Ok(out)
}

fn fig5(opts: &FigureOptions) -> Result<Vec<Dataset>> {
    let grid = PhaseGrid::square(FIG5_HALF_WIDTH, opts.grid_points)?;
    FIG5_ETA
        .iter()
        .map(|&eta| {
            let p = IntermediateParams::new(eta, FIG5_M)?;
            let q = rasterize(&grid, |b| Ok(husimi_closed(&p, b)))?;
            Ok(Dataset::new(format!("fig5_eta_{}.csv", label(eta)), q.to_csv("value")))
        })
        .collect()
}

fn fig6(opts: &FigureOptions) -> Result<Vec<Dataset>> {
    let jp = JcmParams::resonant(1.0)?;
    FIG6_CASES
        .iter()
        .map(|&(m, eta)| {
            let init = state_for(m, eta)?;
            let csv = tau_table(opts, "inversion", |tau| inversion(&jp, &init, jp.time(tau)));
            Ok(Dataset::new(format!("fig6_m{m}_eta_{}.csv", label(eta)), csv))
        })
        .collect()
}

fn fig7(opts: &FigureOptions) -> Result<Vec<Dataset>> {
    let jp = JcmParams::resonant(1.0)?;
    FIG7_CASES
        .iter()
        .map(|&(m, eta)| {
            let init = state_for(m, eta)?;
            let csv = tau_table(opts, "entropy", |tau| entropy(&atomic_density(&jp, &init, jp.time(tau))));
            Ok(Dataset::new(format!("fig7_m{m}_eta_{}.csv", label(eta)), csv))
        })
        .collect()
}

fn fig8(opts: &FigureOptions) -> Result<Vec<Dataset>> {
    let jp = JcmParams::resonant(1.0)?;
    let grid = PhaseGrid::square(FIG8_HALF_WIDTH, opts.grid_points)?;
    let mut out = Vec::new();
    for (eta, _) in SNAPSHOT_CASES {
        let init = state_for(SNAPSHOT_M, eta)?;
        for (name, tau) in SNAPSHOT_TAUS {
            let t = jp.time(tau);
            let q = rasterize(&grid, |b| field_qfunction(&jp, &init, t, b))?;
            out.push(Dataset::new(format!("fig8_eta_{}_tau_{name}.csv", label(eta)), q.to_csv("q")));
        }
    }
    Ok(out)
}

fn distribution_csv(p: &[f64]) -> String {
    let mut t = Table::new(&["n", "p_n"]);
    for (n, v) in p.iter().enumerate() {
        t.push_cells(&[n.to_string(), crate::csv::fmt_f64(*v)]);
    }
    t.render()
}

fn fig9(_: &FigureOptions) -> Result<Vec<Dataset>> {
    let jp = JcmParams::resonant(1.0)?;
    let mut out = Vec::new();
    for (eta, xi) in SNAPSHOT_CASES {
        let init = state_for(SNAPSHOT_M, eta)?;
        let shifted = ("pi4_minus_xi", PI / 4.0 - xi);
        for (name, tau) in SNAPSHOT_TAUS.into_iter().chain([shifted]) {
            let p = photon_distribution(&jp, &init, jp.time(tau))?;
            out.push(Dataset::new(format!("fig9_eta_{}_tau_{name}.csv", label(eta)), distribution_csv(&p)));
        }
    }
    Ok(out)
}

/// Computes every dataset of one figure set in memory.
pub fn figure_datasets(id: FigureId, opts: &FigureOptions) -> Result<Vec<Dataset>> {
    opts.validate()?;
    match id {
        FigureId::Fig1 => fig1(opts),
        FigureId::Fig2 => fig2(opts),
        FigureId::Fig3 => fig3(opts),
        FigureId::Fig4 => fig4(opts),
        FigureId::Fig5 => fig5(opts),
        FigureId::Fig6 => fig6(opts),
        FigureId::Fig7 => fig7(opts),
        FigureId::Fig8 => fig8(opts),
        FigureId::Fig9 => fig9(opts),
    }
}

/// Computes a figure set and writes each dataset into `out_dir`.
pub fn write_figure(id: FigureId, opts: &FigureOptions, out_dir: &Path) -> Result<Vec<PathBuf>> {
    figure_datasets(id, opts)?
        .into_iter()
        .map(|d| {
            let path = out_dir.join(&d.file_name);
            write_atomic(&path, d.contents.as_bytes())?;
            Ok(path)
        })
        .collect()
}
