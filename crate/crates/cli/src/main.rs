mod args;

use std::f64::consts::PI;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use ncstate::csv::{fmt_f64, write_atomic, Table};
use ncstate::figures::{write_figure, FigureId, FigureOptions};
use ncstate::fock::FockVector;
use ncstate::generation::detection_sweep;
use ncstate::jcm::{atomic_density, entropy, field_qfunction, inversion, photon_distribution, JcmParams};
use ncstate::quasiprob::{husimi_closed, rasterize, wigner_closed, PhaseGrid};
use ncstate::selftest::{self, SelftestOptions};
use ncstate::states::{intermediate_state, IntermediateParams};
use ncstate::statistics::{moments_closed, moments_direct, quadratures_closed, quadratures_direct};
use ncstate::{Error, Result};

use args::{Cli, Command, GridSpec, JcmQuantity, Output, StateSpec};

const OUT_DIR_ENV: &str = "NCSTATE_OUT_DIR";

const EXIT_VALIDATION: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_VALIDATION) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { EXIT_VALIDATION } else { EXIT_NUMERICAL })
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::State(a) => {
            let params = params(&a.state)?;
            let v = intermediate_state(&params, a.dim.unwrap_or(params.m() + 1))?;
            emit(&a.output, &state_csv(&v))?;
        }
        Command::Stats(a) => {
            let params = params(&a.state)?;
            emit(&a.output, &stats_csv(&params, a.dim)?)?;
        }
        Command::Qfunc(a) => {
            let params = params(&a.state)?;
            let field = rasterize(&grid(&a.grid)?, |b| Ok(husimi_closed(&params, b)))?;
            emit(&a.output, &field.to_csv("q"))?;
        }
        Command::Wigner(a) => {
            let params = params(&a.state)?;
            let field = rasterize(&grid(&a.grid)?, |b| Ok(wigner_closed(&params, b)))?;
            emit(&a.output, &field.to_csv("w"))?;
        }
        Command::Jcm(a) => {
            let init = intermediate_state(&params(&a.state)?, a.state.m + 1)?;
            let jp = JcmParams::new(a.g, a.delta)?;
            let taus = tau_list(&a.tau, a.tau_points)?;
            let csv = match a.quantity {
                JcmQuantity::Atom => atom_csv(&jp, &init, &taus),
                JcmQuantity::Distribution => distribution_csv(&jp, &init, &taus)?,
                JcmQuantity::Qfunction => field_q_csv(&jp, &init, &taus, &grid(&a.grid)?)?,
            };
            emit(&a.output, &csv)?;
        }
        Command::Generate(a) => {
            let rows = detection_sweep(&a.a_over_omega, a.omega, a.g, a.tau / a.g, a.m)?;
            let mut t = Table::new(&["A_over_omega", "predicted_eta", "fidelity", "detection_probability"]);
            for r in rows {
                t.push(&[r.a_over_omega, r.predicted_eta, r.fidelity, r.detection_probability]);
            }
            emit(&a.output, &t.render())?;
        }
        Command::Figure(a) => {
            let ids = if a.id == "all" { FigureId::ALL.to_vec() } else { vec![a.id.parse()?] };
            let dir =
                a.out.or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from)).unwrap_or_else(|| "out".into());
            let opts = FigureOptions { eta_points: a.eta_points, tau_points: a.tau_points, grid_points: a.grid_points };
            for id in ids {
                for path in write_figure(id, &opts, &dir)? {
                    println!("{}", path.display());
                }
            }
        }
        Command::Selftest(a) => {
            let report = selftest::run(&SelftestOptions { flip_lambda_sign: a.inject_lambda_sign_fault });
            print!("{}", report.render());
            if !report.all_passed() {
                return Ok(ExitCode::from(EXIT_NUMERICAL));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn params(s: &StateSpec) -> Result<IntermediateParams> {
    IntermediateParams::new(s.eta, s.m)
}

fn grid(g: &GridSpec) -> Result<PhaseGrid> {
    PhaseGrid::new(g.x_min, g.x_max, g.y_min, g.y_max, g.nx, g.ny)
}

fn tau_list(explicit: &[f64], points: Option<usize>) -> Result<Vec<f64>> {
    match points {
        Some(n) if n >= 2 => Ok((0..n).map(|k| PI * k as f64 / (n - 1) as f64).collect()),
        Some(n) => Err(Error::InvalidParameter(format!("--tau-points must be at least 2, got {n}"))),
        None if explicit.is_empty() => Err(Error::InvalidParameter("give --tau or --tau-points".into())),
        None => {
            if let Some(bad) = explicit.iter().find(|t| !t.is_finite()) {
                return Err(Error::InvalidParameter(format!("tau must be finite, got {bad}")));
            }
            Ok(explicit.to_vec())
        }
    }
}

/// Writes to `--out` (atomically) or to stdout.
fn emit(output: &Output, contents: &str) -> Result<()> {
    match &output.out {
        Some(path) => write_atomic(&resolve(path), contents.as_bytes()),
        None => std::io::stdout()
            .lock()
            .write_all(contents.as_bytes())
            .map_err(|source| Error::Io { path: "<stdout>".into(), source }),
    }
}

fn resolve(path: &Path) -> PathBuf {
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    }
}

fn state_csv(v: &FockVector) -> String {
    let mut t = Table::new(&["n", "re", "im"]);
    for n in 0..v.dim() {
        let c = v.get(n);
        t.push_cells(&[n.to_string(), fmt_f64(c.re), fmt_f64(c.im)]);
    }
    t.render()
}

fn stats_csv(params: &IntermediateParams, dim: Option<usize>) -> Result<String> {
    let (moments, quad) = match dim {
        None => (moments_closed(params), quadratures_closed(params)),
        Some(d) => {
            let v = intermediate_state(params, d)?;
            (moments_direct(&v), quadratures_direct(&v)?)
        }
    };
    let opt = |v: Option<f64>| v.map(fmt_f64).unwrap_or_default();
    let mut t = Table::new(&[
        "eta", "m", "mean_n", "mean_n2", "variance", "mandel_q", "g2", "mean_x", "mean_p", "var_x", "var_p", "snr",
    ]);
    t.push_cells(&[
        fmt_f64(params.eta()),
        params.m().to_string(),
        fmt_f64(moments.mean_n),
        fmt_f64(moments.mean_n2),
        fmt_f64(moments.variance()),
        opt(moments.mandel_q),
        opt(moments.g2),
        fmt_f64(quad.mean_x),
        fmt_f64(quad.mean_p),
        fmt_f64(quad.var_x),
        fmt_f64(quad.var_p),
        fmt_f64(quad.snr),
    ]);
    Ok(t.render())
}

fn atom_csv(jp: &JcmParams, init: &FockVector, taus: &[f64]) -> String {
    let mut t = Table::new(&["tau", "inversion", "entropy", "rho11", "rho22", "rho12_re", "rho12_im"]);
    for &tau in taus {
        let time = jp.time(tau);
        let rho = atomic_density(jp, init, time);
        t.push(&[tau, inversion(jp, init, time), entropy(&rho), rho.rho11, rho.rho22, rho.rho12.re, rho.rho12.im]);
    }
    t.render()
}

fn distribution_csv(jp: &JcmParams, init: &FockVector, taus: &[f64]) -> Result<String> {
    let mut t = Table::new(&["tau", "n", "p_n"]);
    for &tau in taus {
        for (n, p) in photon_distribution(jp, init, jp.time(tau))?.into_iter().enumerate() {
            t.push_cells(&[fmt_f64(tau), n.to_string(), fmt_f64(p)]);
        }
    }
    Ok(t.render())
}

fn field_q_csv(jp: &JcmParams, init: &FockVector, taus: &[f64], grid: &PhaseGrid) -> Result<String> {
    let mut t = Table::new(&["tau", "x", "y", "q"]);
    for &tau in taus {
        let time = jp.time(tau);
        let field = rasterize(grid, |b| field_qfunction(jp, init, time, b))?;
        for i in 0..grid.nx() {
            for j in 0..grid.ny() {
                t.push(&[tau, grid.x(i), grid.y(j), field.get(i, j)]);
            }
        }
    }
    Ok(t.render())
}
