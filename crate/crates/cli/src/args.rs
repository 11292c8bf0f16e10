use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ncstate",
    version,
    about = "Intermediate number-coherent states: statistics, phase space, dynamics and figure datasets"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fock amplitudes of ||eta, M>.
    State(StateArgs),
    /// Photon statistics and quadrature moments.
    Stats(StatsArgs),
    /// Husimi Q function on a grid.
    Qfunc(PhaseArgs),
    /// Wigner function on a grid.
    Wigner(PhaseArgs),
    /// Two-photon Jaynes-Cummings evolution with the atom initially excited.
    Jcm(JcmArgs),
    /// Conditional preparation sweep over the drive ratio A/omega.
    Generate(GenerateArgs),
    /// Writes the CSV datasets of one figure set, or of all of them.
    Figure(FigureArgs),
    /// Runs the built-in invariant checks.
    Selftest(SelftestArgs),
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum Format {
    #[default]
    Csv,
}

#[derive(Debug, Args)]
pub struct Output {
    /// Output file; relative paths resolve against NCSTATE_OUT_DIR when set. Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct StateSpec {
    #[arg(long)]
    pub eta: f64,
    #[arg(long)]
    pub m: usize,
}

#[derive(Debug, Args)]
pub struct StateArgs {
    #[command(flatten)]
    pub state: StateSpec,
    /// Fock-space dimension (default M + 1).
    #[arg(long)]
    pub dim: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub state: StateSpec,
    /// Evaluate by direct sums over a truncated vector of this dimension instead of closed forms.
    #[arg(long)]
    pub dim: Option<usize>,
    #[command(flatten)]
    pub output: Output,
}

/// Rectangular grid given as "xmin,xmax,ymin,ymax,nx,ny".
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

pub fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(format!("expected xmin,xmax,ymin,ymax,nx,ny, got {} fields", parts.len()));
    }
    let f = |i: usize| parts[i].parse::<f64>().map_err(|e| format!("field {}: {e}", i + 1));
    let n = |i: usize| parts[i].parse::<usize>().map_err(|e| format!("field {}: {e}", i + 1));
    Ok(GridSpec { x_min: f(0)?, x_max: f(1)?, y_min: f(2)?, y_max: f(3)?, nx: n(4)?, ny: n(5)? })
}

const DEFAULT_GRID: &str = "-6,6,-6,6,101,101";

#[derive(Debug, Args)]
pub struct PhaseArgs {
    #[command(flatten)]
    pub state: StateSpec,
    #[arg(long, value_parser = parse_grid, default_value = DEFAULT_GRID, allow_hyphen_values = true)]
    pub grid: GridSpec,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum JcmQuantity {
    /// tau, inversion, entropy and the atomic density matrix.
    Atom,
    /// Photon-number distribution of the field.
    Distribution,
    /// Field Q function on --grid (resonance only).
    Qfunction,
}

#[derive(Debug, Args)]
pub struct JcmArgs {
    #[command(flatten)]
    pub state: StateSpec,
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub delta: f64,
    /// Scaled times g*t, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1.., allow_negative_numbers = true, conflicts_with = "tau_points")]
    pub tau: Vec<f64>,
    /// Uniform scaled-time grid over [0, pi] with this many points.
    #[arg(long)]
    pub tau_points: Option<usize>,
    #[arg(long, value_enum, default_value_t = JcmQuantity::Atom)]
    pub quantity: JcmQuantity,
    #[arg(long, value_parser = parse_grid, default_value = DEFAULT_GRID, allow_hyphen_values = true)]
    pub grid: GridSpec,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Drive ratios A/omega, comma separated.
    #[arg(long, value_delimiter = ',', num_args = 1.., default_value = "0,0.5,1,2,5")]
    pub a_over_omega: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub g: f64,
    #[arg(long, default_value_t = 1.0)]
    pub omega: f64,
    /// Interaction time in units of 1/g.
    #[arg(long, default_value_t = 1e-3)]
    pub tau: f64,
    /// Photons exchanged per transition.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// fig1 .. fig9, or "all".
    pub id: String,
    /// Output directory (default: NCSTATE_OUT_DIR, else ./out).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 401)]
    pub eta_points: usize,
    #[arg(long, default_value_t = 2001)]
    pub tau_points: usize,
    #[arg(long, default_value_t = 101)]
    pub grid_points: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    /// Builds the eigenstate check with the wrong sign of lambda so that it fails.
    #[arg(long, hide = true)]
    pub inject_lambda_sign_fault: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn grid_parsing() {
        let g = parse_grid("-1,2,-3,4,5,6").unwrap();
        assert_eq!((g.x_min, g.y_max, g.nx, g.ny), (-1.0, 4.0, 5, 6));
        assert!(parse_grid("1,2,3").is_err());
        assert!(parse_grid("a,2,3,4,5,6").is_err());
        assert!(parse_grid("1,2,3,4,5.5,6").is_err());
    }
}
