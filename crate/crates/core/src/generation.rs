//! Preparation of intermediate states: conditional detection after a driven
//! Jaynes-Cummings interaction, and a displaced Kerr state.

use ndarray::Array1;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{
    displacement_matrix, expm, ladder_matrices, reliable_block, working_dim, FockVector, GUARD_BAND, TAIL_LIMIT,
};
use crate::special::log_factorial;
use crate::states::{intermediate_state, IntermediateParams};

/// Classically driven cavity coupled to a two-level atom on resonance.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveParams {
    a: f64,
    omega: f64,
    g: f64,
    multiphoton_m: usize,
}

impl DriveParams {
    pub fn new(a: f64, omega: f64, g: f64, multiphoton_m: usize) -> Result<Self> {
        if !(a >= 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter(format!("drive amplitude must be finite and >= 0, got {a}")));
        }
        if !(omega > 0.0 && omega.is_finite()) {
            return Err(Error::InvalidParameter(format!("omega must be finite and > 0, got {omega}")));
        }
        if !(g > 0.0 && g.is_finite()) {
            return Err(Error::InvalidParameter(format!("coupling g must be finite and > 0, got {g}")));
        }
        if multiphoton_m == 0 {
            return Err(Error::InvalidParameter("multiphoton order must be >= 1".into()));
        }
        Ok(DriveParams { a, omega, g, multiphoton_m })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn g(&self) -> f64 {
        self.g
    }

    pub fn multiphoton_m(&self) -> usize {
        self.multiphoton_m
    }

    /// Displacement `A / omega`.
    pub fn lambda(&self) -> f64 {
        self.a / self.omega
    }

    /// `omega^2 / (A^2 + omega^2)`.
    pub fn predicted_eta(&self) -> f64 {
        let w2 = self.omega * self.omega;
        w2 / (self.a * self.a + w2)
    }

    /// Parameters of the state the scheme is expected to produce.
    pub fn target(&self) -> Result<IntermediateParams> {
        IntermediateParams::from_lambda(self.lambda(), self.multiphoton_m)
    }

    /// Default truncation for this drive.
    pub fn default_dim(&self) -> usize {
        working_dim(self.multiphoton_m, self.lambda())
    }
}

/// Outcome of projecting the atom onto `|g>`.
#[derive(Clone, Debug, PartialEq)]
pub struct Detection {
    /// Normalized field state; `None` when the detection probability is zero.
    pub field: Option<FockVector>,
    pub probability: f64,
    /// Probability left in `|e>`; sums with `probability` to one.
    pub excited_probability: f64,
}

/// Prepares `|0> (x) |e>`, evolves with
/// `D(-lambda) exp(-i g t (a^dagger^M sigma_- + a^M sigma_+)) D(lambda)` and
/// projects the atom onto `|g>`.
///
/// The interaction acts on the two-level blocks `{|n, e>, |n + M, g>}`, where
/// it is a rotation by angle `g t sqrt((n+1)...(n+M))`.
pub fn generate_by_detection(drive: &DriveParams, t: f64, dim: usize) -> Result<Detection> {
    let m = drive.multiphoton_m;
    if dim < m + 1 + GUARD_BAND {
        return Err(Error::DimensionTooSmall { dim, needed: m + 1 + GUARD_BAND });
    }
    let d = displacement_matrix(C64::new(drive.lambda(), 0.0), dim)?;
    let start = d.column(0);
    let tail = start.top_mass(GUARD_BAND + m);
    if tail >= TAIL_LIMIT {
        return Err(Error::TruncationTooSmall { tail, limit: TAIL_LIMIT });
    }

    let mut excited = Array1::<C64>::zeros(dim);
    let mut ground = Array1::<C64>::zeros(dim);
    for n in 0..dim - m {
        let c = start.get(n);
        if c == C64::default() {
            continue;
        }
        let log_kappa = 0.5 * (log_factorial(n + m) - log_factorial(n));
        let (s, co) = (drive.g * t * log_kappa.exp()).sin_cos();
        excited[n] = c * co;
        ground[n + m] = c * C64::new(0.0, -s);
    }
    let back = d.dagger();
    let excited_probability = back.apply(&FockVector::new(excited)).norm_sqr();
    let ground = back.apply(&FockVector::new(ground));
    let probability = ground.norm_sqr();
    if probability == 0.0 {
        return Ok(Detection { field: None, probability, excited_probability });
    }
    let rel_tail = ground.top_mass(GUARD_BAND) / probability;
    if rel_tail >= TAIL_LIMIT {
        return Err(Error::TruncationTooSmall { tail: rel_tail, limit: TAIL_LIMIT });
    }
    Ok(Detection { field: Some(ground.normalized()), probability, excited_probability })
}

/// Fidelity and distance of a prepared field from a reference state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Closeness {
    pub fidelity: f64,
    /// `sqrt(1 - F)`, evaluated as the norm of the component orthogonal to
    /// the reference so that it keeps full precision when `F` is near one.
    pub distance: f64,
}

pub fn closeness(field: &FockVector, reference: &FockVector) -> Closeness {
    let dim = field.dim().max(reference.dim());
    let (f, r) = (field.resized(dim), reference.resized(dim));
    let overlap = r.inner(&f);
    let distance = f.sub(&r.scaled(overlap)).norm();
    Closeness { fidelity: overlap.norm_sqr(), distance }
}

/// One row of a drive sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SweepRow {
    pub a_over_omega: f64,
    pub predicted_eta: f64,
    pub fidelity: f64,
    pub distance: f64,
    pub detection_probability: f64,
}

/// Runs [`generate_by_detection`] for each `A / omega` at fixed `omega`, `g`,
/// `t` and order `m`, comparing against the predicted intermediate state.
pub fn detection_sweep(ratios: &[f64], omega: f64, g: f64, t: f64, m: usize) -> Result<Vec<SweepRow>> {
    ratios
        .par_iter()
        .map(|&ratio| {
            let drive = DriveParams::new(ratio * omega, omega, g, m)?;
            let det = generate_by_detection(&drive, t, drive.default_dim())?;
            let target = intermediate_state(&drive.target()?, m + 1)?;
            let close =
                det.field.as_ref().map(|f| closeness(f, &target)).unwrap_or(Closeness { fidelity: 0.0, distance: 1.0 });
            Ok(SweepRow {
                a_over_omega: ratio,
                predicted_eta: drive.predicted_eta(),
                fidelity: close.fidelity,
                distance: close.distance,
                detection_probability: det.probability,
            })
        })
        .collect()
}

/// Kerr phase strength, input amplitude and nonlinearity order `S`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KerrParams {
    gamma: f64,
    lambda: f64,
    order_s: usize,
}

impl KerrParams {
    pub fn new(gamma: f64, lambda: f64, order_s: usize) -> Result<Self> {
        if !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("gamma must be finite, got {gamma}")));
        }
        if !(lambda >= 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter(format!("lambda must be finite and >= 0, got {lambda}")));
        }
        Ok(KerrParams { gamma, lambda, order_s })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn order_s(&self) -> usize {
        self.order_s
    }

    /// `false` once `|gamma| lambda^4 > 0.1`, where a first-order expansion
    /// in `gamma` stops being trustworthy.
    pub fn first_order_reliable(&self) -> bool {
        self.gamma.abs() * self.lambda.powi(4) <= 0.1
    }

    /// Phase picked up by `|n>`: `gamma / (S+1)! * n (n-1) ... (n-S)`.
    pub fn phase(&self, n: usize) -> f64 {
        let s = self.order_s;
        if n < s {
            return 0.0;
        }
        let falling: f64 = (0..=s).map(|k| (n - k) as f64).product();
        self.gamma * falling / (log_factorial(s + 1)).exp()
    }

    pub fn default_dim(&self) -> usize {
        working_dim(0, 2.0 * self.lambda) + 16
    }
}

/// `D(-lambda) exp(i phase(N)) |lambda>`.
pub fn kerr_output(kerr: &KerrParams, dim: usize) -> Result<FockVector> {
    let alpha = C64::new(kerr.lambda, 0.0);
    let d = displacement_matrix(alpha, dim)?;
    let input = d.column(0);
    let tail = input.top_mass(GUARD_BAND);
    if tail >= TAIL_LIMIT {
        return Err(Error::TruncationTooSmall { tail, limit: TAIL_LIMIT });
    }
    let phased = FockVector::new(Array1::from_shape_fn(dim, |n| input.get(n) * C64::from_polar(1.0, kerr.phase(n))));
    let out = d.dagger().apply(&phased);
    let tail = out.top_mass(GUARD_BAND);
    if tail >= TAIL_LIMIT {
        return Err(Error::TruncationTooSmall { tail, limit: TAIL_LIMIT });
    }
    Ok(out)
}

/// Right-hand side used when comparing the free drive-frame evolution of `a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityForm {
    /// `e^{-i w t} D(-A/w) a D(A/w)`.
    Displaced,
    /// `e^{-i w t} D(-A/w) a D(A/w) - A/w`, the exact Heisenberg solution.
    DisplacedWithOffset,
}

/// Spectral-norm distance, on the reliable upper-left block, between
/// `U0^dagger a U0` with `U0 = exp(-i t (w N + A (a + a^dagger)))` and the
/// chosen right-hand side.
pub fn free_evolution_defect(drive: &DriveParams, t: f64, dim: usize, form: IdentityForm) -> Result<f64> {
    let lambda = drive.lambda();
    let block = reliable_block(dim, 2.0 * lambda);
    if block == 0 {
        return Err(Error::DimensionTooSmall { dim, needed: working_dim(0, 2.0 * lambda) + GUARD_BAND });
    }
    let l = ladder_matrices(dim);
    let field_h = l.number.scale(C64::new(drive.omega, 0.0)).add(&l.a.add(&l.a_dagger).scale(C64::new(drive.a, 0.0)));
    let u0 = expm(&field_h.scale(C64::new(0.0, -t)));
    let lhs = u0.dagger().dot(&l.a).dot(&u0);

    let d = displacement_matrix(C64::new(lambda, 0.0), dim)?;
    let mut rhs = d.dagger().dot(&l.a).dot(&d).scale(C64::from_polar(1.0, -drive.omega * t));
    if form == IdentityForm::DisplacedWithOffset {
        rhs = rhs.sub(&crate::fock::OperatorMatrix::identity(dim).scale(C64::new(lambda, 0.0)));
    }
    Ok(lhs.sub(&rhs).block(block).spectral_norm())
}
