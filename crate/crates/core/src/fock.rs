//! Truncated single-mode Fock space: state vectors, ladder operators and
//! displacement operators.

use ndarray::{Array1, Array2, ArrayView1, Axis};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::special::log_factorial;

/// Levels at the top of a truncated space excluded from invariant checks.
pub const GUARD_BAND: usize = 8;

/// Largest tail mass a truncated state may drop.
pub const TAIL_LIMIT: f64 = 1e-12;

/// Pure single-mode field state; index `n` is the photon number.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector(Array1<C64>);

impl FockVector {
    pub fn new(amplitudes: Array1<C64>) -> Self {
        assert!(!amplitudes.is_empty(), "a Fock vector needs at least one level");
        FockVector(amplitudes)
    }

    pub fn from_real(amplitudes: &[f64]) -> Self {
        FockVector::new(amplitudes.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        FockVector::new(Array1::zeros(dim))
    }

    /// Number state `|n>` in a space of dimension `dim`.
    pub fn number_state(n: usize, dim: usize) -> Self {
        assert!(n < dim, "number state {n} does not fit in dimension {dim}");
        let mut v = Array1::zeros(dim);
        v[n] = C64::new(1.0, 0.0);
        FockVector(v)
    }

    pub fn vacuum(dim: usize) -> Self {
        FockVector::number_state(0, dim)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn amplitudes(&self) -> ArrayView1<'_, C64> {
        self.0.view()
    }

    pub fn into_inner(self) -> Array1<C64> {
        self.0
    }

    pub fn get(&self, n: usize) -> C64 {
        self.0.get(n).copied().unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() < 1e-10
    }

    /// Rescaled copy with unit norm. Panics on the zero vector.
    pub fn normalized(&self) -> FockVector {
        let n = self.norm();
        assert!(n > 0.0, "cannot normalize the zero vector");
        FockVector(self.0.mapv(|c| c / n))
    }

    /// `<self|other>`, treating missing levels as zero.
    pub fn inner(&self, other: &FockVector) -> C64 {
        self.0.iter().zip(other.0.iter()).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|<self|other>|^2`.
    pub fn fidelity(&self, other: &FockVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.0.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Copy resized to `dim`, zero-padding or dropping top levels.
    pub fn resized(&self, dim: usize) -> FockVector {
        let mut v = Array1::zeros(dim);
        let k = dim.min(self.dim());
        v.slice_mut(ndarray::s![..k]).assign(&self.0.slice(ndarray::s![..k]));
        FockVector::new(v)
    }

    /// Highest level whose probability exceeds `threshold`.
    pub fn max_support(&self, threshold: f64) -> usize {
        self.0.iter().rposition(|c| c.norm_sqr() > threshold).unwrap_or(0)
    }

    /// Probability carried by the top `levels` levels.
    pub fn top_mass(&self, levels: usize) -> f64 {
        let start = self.dim().saturating_sub(levels);
        self.0.iter().skip(start).map(|c| c.norm_sqr()).sum()
    }

    /// `a|psi>` on the same space.
    pub fn lowered(&self) -> FockVector {
        let d = self.dim();
        FockVector::new(Array1::from_shape_fn(d, |n| {
            if n + 1 < d {
                self.0[n + 1] * ((n + 1) as f64).sqrt()
            } else {
                C64::default()
            }
        }))
    }

    /// `N|psi>`.
    pub fn number_applied(&self) -> FockVector {
        FockVector::new(Array1::from_shape_fn(self.dim(), |n| self.0[n] * n as f64))
    }

    pub fn scaled(&self, factor: C64) -> FockVector {
        FockVector(self.0.mapv(|c| c * factor))
    }

    pub fn sub(&self, other: &FockVector) -> FockVector {
        assert_eq!(self.dim(), other.dim());
        FockVector(&self.0 - &other.0)
    }

    pub fn add(&self, other: &FockVector) -> FockVector {
        assert_eq!(self.dim(), other.dim());
        FockVector(&self.0 + &other.0)
    }
}

/// Square complex matrix acting on a truncated Fock space.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix(Array2<C64>);

impl OperatorMatrix {
    pub fn new(entries: Array2<C64>) -> Self {
        assert_eq!(entries.nrows(), entries.ncols(), "operator matrices are square");
        OperatorMatrix(entries)
    }

    pub fn identity(dim: usize) -> Self {
        OperatorMatrix(Array2::eye(dim))
    }

    pub fn zeros(dim: usize) -> Self {
        OperatorMatrix(Array2::zeros((dim, dim)))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn entries(&self) -> &Array2<C64> {
        &self.0
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.0[[row, col]]
    }

    pub fn dot(&self, other: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix(self.0.dot(&other.0))
    }

    pub fn apply(&self, v: &FockVector) -> FockVector {
        assert_eq!(self.dim(), v.dim(), "operator and vector dimensions differ");
        FockVector::new(self.0.dot(&v.0))
    }

    pub fn dagger(&self) -> OperatorMatrix {
        OperatorMatrix(self.0.t().mapv(|c| c.conj()))
    }

    pub fn scale(&self, factor: C64) -> OperatorMatrix {
        OperatorMatrix(self.0.mapv(|c| c * factor))
    }

    pub fn add(&self, other: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix(&self.0 - &other.0)
    }

    pub fn column(&self, k: usize) -> FockVector {
        FockVector::new(self.0.column(k).to_owned())
    }

    /// Upper-left `size x size` block.
    pub fn block(&self, size: usize) -> OperatorMatrix {
        OperatorMatrix(self.0.slice(ndarray::s![..size, ..size]).to_owned())
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.0.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Induced 1-norm (largest column sum).
    pub fn norm_one(&self) -> f64 {
        self.0.axis_iter(Axis(1)).map(|col| col.iter().map(|c| c.norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    /// Spectral norm, by power iteration on `A^dagger A`.
    pub fn spectral_norm(&self) -> f64 {
        let d = self.dim();
        let gram = self.dagger().dot(self);
        let mut v = Array1::from_shape_fn(d, |i| C64::new(1.0 + 0.01 * i as f64, 0.0));
        let mut estimate = 0.0;
        for _ in 0..500 {
            let w = gram.0.dot(&v);
            let n = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            if n == 0.0 {
                return 0.0;
            }
            v = w.mapv(|c| c / n);
            if (n - estimate).abs() <= 1e-14 * n {
                estimate = n;
                break;
            }
            estimate = n;
        }
        estimate.sqrt()
    }
}

/// Truncated annihilation, creation and number operators.
#[derive(Clone, Debug)]
pub struct Ladder {
    pub a: OperatorMatrix,
    pub a_dagger: OperatorMatrix,
    pub number: OperatorMatrix,
}

pub fn ladder_matrices(dim: usize) -> Ladder {
    assert!(dim >= 1);
    let a =
        Array2::from_shape_fn(
            (dim, dim),
            |(r, c)| {
                if c == r + 1 {
                    C64::new((c as f64).sqrt(), 0.0)
                } else {
                    C64::default()
                }
            },
        );
    let a_dagger = a.t().to_owned();
    let number =
        Array2::from_shape_fn((dim, dim), |(r, c)| if r == c { C64::new(r as f64, 0.0) } else { C64::default() });
    Ladder { a: OperatorMatrix(a), a_dagger: OperatorMatrix(a_dagger), number: OperatorMatrix(number) }
}

/// Working dimension for a state with photons up to `max_photon` displaced by
/// an amplitude of modulus `alpha_abs`.
pub fn working_dim(max_photon: usize, alpha_abs: f64) -> usize {
    let m = max_photon as f64;
    let spread = m + alpha_abs * alpha_abs + 3.0 * alpha_abs * (m + 1.0).sqrt();
    (4 * spread.ceil() as usize).max(max_photon + 32)
}

/// Size of the upper-left block of a `dim`-level space on which displacement
/// by `alpha_abs` is trustworthy under [`working_dim`].
pub fn reliable_block(dim: usize, alpha_abs: f64) -> usize {
    let cap = dim.saturating_sub(GUARD_BAND);
    (1..=cap).rev().find(|&b| working_dim(b - 1, alpha_abs) <= dim).unwrap_or(0)
}

/// Matrix exponential by scaling and squaring with a Taylor kernel.
pub fn expm(m: &OperatorMatrix) -> OperatorMatrix {
    let dim = m.dim();
    let norm = m.norm_one();
    let squarings = if norm > 0.5 { (norm / 0.5).log2().ceil() as i32 } else { 0 };
    let scaled = m.0.mapv(|c| c / 2f64.powi(squarings));

    let mut result: Array2<C64> = Array2::eye(dim);
    let mut term: Array2<C64> = Array2::eye(dim);
    for k in 1..=60 {
        term = term.dot(&scaled).mapv(|c| c / k as f64);
        result += &term;
        let tn = term.iter().map(|c| c.norm()).fold(0.0, f64::max);
        if tn < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.dot(&result);
    }
    OperatorMatrix(result)
}

/// Largest entry of `U^dagger U - I` on the upper-left `block` levels.
pub fn unitarity_defect(u: &OperatorMatrix, block: usize) -> f64 {
    let cols = u.0.slice(ndarray::s![.., ..block]);
    let gram = cols.t().mapv(|c| c.conj()).dot(&cols);
    gram.indexed_iter()
        .map(|((r, c), z)| {
            let target = if r == c { 1.0 } else { 0.0 };
            (z - target).norm()
        })
        .fold(0.0, f64::max)
}

/// `D(alpha) = exp(alpha a^dagger - alpha^* a)` on a `dim`-level space.
pub fn displacement_matrix(alpha: C64, dim: usize) -> Result<OperatorMatrix> {
    if dim == 0 {
        return Err(Error::DimensionTooSmall { dim, needed: 1 });
    }
    if alpha == C64::default() {
        return Ok(OperatorMatrix::identity(dim));
    }
    let l = ladder_matrices(dim);
    let generator = l.a_dagger.scale(alpha).sub(&l.a.scale(alpha.conj()));
    let d = expm(&generator);
    let block = if dim > GUARD_BAND { dim - GUARD_BAND } else { dim };
    let defect = unitarity_defect(&d, block);
    if defect.is_nan() || defect >= 1e-10 {
        return Err(Error::NonConvergence { defect });
    }
    Ok(d)
}

fn check_tail(tail: f64) -> Result<()> {
    if tail >= TAIL_LIMIT {
        Err(Error::TruncationTooSmall { tail, limit: TAIL_LIMIT })
    } else {
        Ok(())
    }
}

/// Coherent state `|alpha>` truncated to `dim` levels and renormalized.
///
/// Fails when the discarded tail carries probability of `1e-12` or more.
pub fn coherent_vector(alpha: C64, dim: usize) -> Result<FockVector> {
    if dim == 0 {
        return Err(Error::DimensionTooSmall { dim, needed: 1 });
    }
    if alpha == C64::default() {
        return Ok(FockVector::vacuum(dim));
    }
    let r = alpha.norm();
    let phase = alpha / r;
    let half_mean = -0.5 * r * r;
    let ln_r = r.ln();
    let mut rot = C64::new(1.0, 0.0);
    let mut amps = Array1::zeros(dim);
    for (n, slot) in amps.iter_mut().enumerate() {
        let mag = (half_mean + n as f64 * ln_r - 0.5 * log_factorial(n)).exp();
        *slot = rot * mag;
        rot *= phase;
    }
    let v = FockVector::new(amps);
    check_tail(1.0 - v.norm_sqr())?;
    Ok(v.normalized())
}

/// Displaced number state `D(beta)|k>`, i.e. column `k` of the displacement
/// matrix.
pub fn displaced_number_state(beta: C64, k: usize, dim: usize) -> Result<FockVector> {
    if k >= dim {
        return Err(Error::DimensionTooSmall { dim, needed: k + 1 });
    }
    if beta == C64::default() {
        return Ok(FockVector::number_state(k, dim));
    }
    if dim < k + 1 + GUARD_BAND {
        return Err(Error::DimensionTooSmall { dim, needed: k + 1 + GUARD_BAND });
    }
    let col = displacement_matrix(beta, dim)?.column(k);
    check_tail(col.top_mass(GUARD_BAND))?;
    Ok(col)
}
