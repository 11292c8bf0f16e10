//! Husimi Q and Wigner functions on the complex plane `beta = x + i y`.
//!
//! Every Q-function carries the `1/pi` prefactor, so it integrates to one over
//! the plane. The Wigner oracle sums parity-weighted populations of the state
//! seen from displaced number states.

use std::f64::consts::PI;
use std::path::Path;

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::csv::{fmt_f64, write_atomic};
use crate::error::{Error, Result};
use crate::fock::{displacement_matrix, working_dim, FockVector, GUARD_BAND, TAIL_LIMIT};
use crate::special::{laguerre, log_factorial, log_laguerre_negarg};
use crate::states::IntermediateParams;

/// Uniform rectangular grid of `nx * ny` cell centres.
///
/// Point `(i, j)` sits at `x_i = x_min + (i + 1/2) dx`, `y_j = y_min + (j + 1/2) dy`,
/// so summing values times the cell area is the midpoint rule over the box.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseGrid {
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    nx: usize,
    ny: usize,
}

impl PhaseGrid {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64, nx: usize, ny: usize) -> Result<Self> {
        let finite = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite());
        if !finite || x_max <= x_min || y_max <= y_min {
            return Err(Error::InvalidParameter(format!(
                "grid bounds must be finite with max > min, got x [{x_min}, {x_max}], y [{y_min}, {y_max}]"
            )));
        }
        if nx == 0 || ny == 0 {
            return Err(Error::InvalidParameter(format!("grid needs nx, ny >= 1, got {nx} x {ny}")));
        }
        Ok(PhaseGrid { x_min, x_max, y_min, y_max, nx, ny })
    }

    /// Square grid `[-half_width, half_width]^2` with `n` points per side.
    pub fn square(half_width: f64, n: usize) -> Result<Self> {
        Self::new(-half_width, half_width, -half_width, half_width, n, n)
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn bounds(&self) -> (f64, f64, f64, f64) {
        (self.x_min, self.x_max, self.y_min, self.y_max)
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / self.ny as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        self.y_min + (j as f64 + 0.5) * self.dy()
    }

    pub fn beta(&self, i: usize, j: usize) -> C64 {
        C64::new(self.x(i), self.y(j))
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Real values sampled on a [`PhaseGrid`], indexed `[i, j]` (x index first).
#[derive(Clone, Debug, PartialEq)]
pub struct ScalarField {
    grid: PhaseGrid,
    values: Array2<f64>,
}

impl ScalarField {
    pub fn new(grid: PhaseGrid, values: Array2<f64>) -> Result<Self> {
        if values.dim() != (grid.nx, grid.ny) {
            return Err(Error::InvalidParameter(format!(
                "field shape {:?} does not match grid {} x {}",
                values.dim(),
                grid.nx,
                grid.ny
            )));
        }
        Ok(ScalarField { grid, values })
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[[i, j]]
    }

    /// Midpoint-rule integral over the grid box.
    pub fn integrate(&self) -> f64 {
        self.values.sum() * self.grid.dx() * self.grid.dy()
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Index of the largest value; ties resolve to the first in row-major order.
    pub fn argmax(&self) -> (usize, usize) {
        let mut best = (0, 0);
        for ((i, j), &v) in self.values.indexed_iter() {
            if v > self.values[best] {
                best = (i, j);
            }
        }
        best
    }

    /// CSV text with columns `x,y,<value_column>`, x index outer.
    pub fn to_csv(&self, value_column: &str) -> String {
        let mut out = String::with_capacity(self.grid.len() * 72 + 16);
        out.push_str("x,y,");
        out.push_str(value_column);
        out.push('\n');
        for i in 0..self.grid.nx {
            let x = fmt_f64(self.grid.x(i));
            for j in 0..self.grid.ny {
                out.push_str(&x);
                out.push(',');
                out.push_str(&fmt_f64(self.grid.y(j)));
                out.push(',');
                out.push_str(&fmt_f64(self.values[[i, j]]));
                out.push('\n');
            }
        }
        out
    }

    pub fn write_csv(&self, path: &Path, value_column: &str) -> Result<()> {
        write_atomic(path, self.to_csv(value_column).as_bytes())
    }
}

/// Evaluates `f` at every grid point in parallel.
///
/// The result does not depend on scheduling. If any point fails, the error
/// from the first failing point in row-major order is returned, tagged with
/// its coordinates.
pub fn rasterize<F>(grid: &PhaseGrid, f: F) -> Result<ScalarField>
where
    F: Fn(C64) -> Result<f64> + Sync,
{
    let ny = grid.ny;
    let values: Vec<Result<f64>> = (0..grid.len())
        .into_par_iter()
        .map(|k| {
            let beta = grid.beta(k / ny, k % ny);
            f(beta).map_err(|e| Error::AtGridPoint { x: beta.re, y: beta.im, source: Box::new(e) })
        })
        .collect();
    let values = values.into_iter().collect::<Result<Vec<f64>>>()?;
    let values = Array2::from_shape_vec((grid.nx, grid.ny), values).expect("grid length matches nx * ny");
    ScalarField::new(*grid, values)
}

/// Full widths of the `fraction * max` contour along x and y through the
/// maximum, with linear interpolation between neighbouring samples.
///
/// A contour that leaves the grid is clipped at the outermost sample.
pub fn contour_widths(field: &ScalarField, fraction: f64) -> (f64, f64) {
    let (i0, j0) = field.argmax();
    let level = fraction * field.values[[i0, j0]];
    let row: Vec<f64> = (0..field.grid.nx).map(|i| field.values[[i, j0]]).collect();
    let col: Vec<f64> = (0..field.grid.ny).map(|j| field.values[[i0, j]]).collect();
    let xs: Vec<f64> = (0..field.grid.nx).map(|i| field.grid.x(i)).collect();
    let ys: Vec<f64> = (0..field.grid.ny).map(|j| field.grid.y(j)).collect();
    (width_1d(&xs, &row, i0, level), width_1d(&ys, &col, j0, level))
}

fn width_1d(coords: &[f64], values: &[f64], peak: usize, level: f64) -> f64 {
    let crossing = |a: usize, b: usize| {
        let (va, vb) = (values[a], values[b]);
        let t = (va - level) / (va - vb);
        coords[a] + t * (coords[b] - coords[a])
    };
    let mut left = coords[0];
    for k in (1..=peak).rev() {
        if values[k - 1] < level {
            left = crossing(k, k - 1);
            break;
        }
    }
    let mut right = coords[coords.len() - 1];
    for k in peak..coords.len() - 1 {
        if values[k + 1] < level {
            right = crossing(k, k + 1);
            break;
        }
    }
    right - left
}

/// `<beta|psi>` for the coherent state `|beta>` and arbitrary amplitudes.
pub fn coherent_overlap(state: &FockVector, beta: C64) -> C64 {
    let r = beta.norm();
    let amps = state.amplitudes();
    if r == 0.0 {
        return amps[0];
    }
    let ln_r = r.ln();
    let phase = beta.conj() / r;
    let mut rot = C64::new(1.0, 0.0);
    let mut acc = C64::default();
    for (n, &c) in amps.iter().enumerate() {
        if c != C64::default() {
            let mag = (n as f64 * ln_r - 0.5 * log_factorial(n) - 0.5 * r * r).exp();
            acc += c * rot * mag;
        }
        rot *= phase;
    }
    acc
}

/// Q-function of `||eta, M>` from the product form of its coherent-state overlap.
pub fn husimi_closed(params: &IntermediateParams, beta: C64) -> f64 {
    let m = params.m();
    let shifted = (beta + params.lambda()).norm();
    if m > 0 && shifted == 0.0 {
        return 0.0;
    }
    let power = if m == 0 { 0.0 } else { 2.0 * m as f64 * shifted.ln() };
    let ln_q = -beta.norm_sqr() + power - 2.0 * params.log_norm();
    ln_q.exp() / PI
}

/// `(1/pi) |<beta|psi>|^2` from the amplitudes of `state`.
pub fn husimi_direct(state: &FockVector, beta: C64) -> f64 {
    coherent_overlap(state, beta).norm_sqr() / PI
}

/// Wigner function of `||eta, M>` in closed Laguerre form; may be negative.
pub fn wigner_closed(params: &IntermediateParams, beta: C64) -> f64 {
    let m = params.m();
    let arg = (2.0 * beta + params.lambda()).norm_sqr();
    let numer = laguerre(m, arg);
    if numer == 0.0 {
        return 0.0;
    }
    let parity = if m.is_multiple_of(2) { 1.0 } else { -1.0 };
    let denom = log_laguerre_negarg(m, params.lambda_sq()).log_magnitude;
    let ln_mag = numer.abs().ln() - denom - 2.0 * beta.norm_sqr();
    parity * numer.signum() * 2.0 / PI * ln_mag.exp()
}

/// Wigner function as `(2/pi) sum_k (-1)^k |<beta, k|psi>|^2` over displaced
/// number states `|beta, k> = D(beta)|k>`.
///
/// The state is zero-padded to the working dimension for a displacement by
/// `|beta|`. Summation stops once the remaining population is below `1e-12`.
pub fn wigner_oracle(state: &FockVector, beta: C64) -> Result<f64> {
    let support = state.max_support(0.0);
    let dim = state.dim().max(working_dim(support, beta.norm()));
    let psi = state.resized(dim);
    // <beta, k|psi> = (D(beta)^dagger psi)_k
    let seen = displacement_matrix(beta, dim)?.dagger().apply(&psi);
    let tail = seen.top_mass(GUARD_BAND);
    if tail >= TAIL_LIMIT {
        return Err(Error::TruncationTooSmall { tail, limit: TAIL_LIMIT });
    }
    let total = psi.norm_sqr();
    let mut acc = 0.0;
    let mut seen_mass = 0.0;
    for (k, c) in seen.amplitudes().iter().enumerate() {
        let p = c.norm_sqr();
        acc += if k % 2 == 0 { p } else { -p };
        seen_mass += p;
        if total - seen_mass < TAIL_LIMIT {
            break;
        }
    }
    Ok(2.0 / PI * acc)
}
