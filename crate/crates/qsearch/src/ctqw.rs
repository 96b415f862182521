//! Search Hamiltonian construction, dense symmetric eigendecomposition and
//! exact spectral time evolution.
//!
//! `H = gamma (D - A) - gamma_w |w><w|` is real symmetric; one eigensolve
//! buys exact evolution at any horizon, which matters because the physically
//! interesting horizons reach 1e6 time units where step integrators drift.

use ndarray::{Array1, Array2};
use ndarray_linalg::{Eigh, UPLO};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::scalar::{cis, real, Real};

/// Relative threshold below which the two lowest levels count as degenerate.
pub fn degeneracy_threshold<T: Real>() -> T {
    real::<T>(1e-12)
}

/// Default eigendecomposition size cap.
pub const DEFAULT_EIGH_CAP: usize = 4096;

/// Dense search Hamiltonian `H = gamma L - gamma_w e_w e_w^T`.
#[derive(Debug, Clone)]
pub struct Hamiltonian<T> {
    n: usize,
    matrix: Array2<T>,
    gamma: T,
    gamma_w: T,
    target: usize,
}

impl<T: Real> Hamiltonian<T> {
    /// Builds the search Hamiltonian with oracle strength `gamma_w = 1`.
    pub fn new(g: &Graph<T>, gamma: T, target: usize) -> Result<Self> {
        Self::with_oracle(g, gamma, T::one(), target)
    }

    /// Builds `H = gamma (D - A) - gamma_w e_w e_w^T`. `gamma_w = 0` gives
    /// the bare Laplacian Hamiltonian.
    pub fn with_oracle(g: &Graph<T>, gamma: T, gamma_w: T, target: usize) -> Result<Self> {
        if !(gamma > T::zero()) {
            return Err(Error::invalid("gamma", format!("hopping parameter {gamma} must be positive")));
        }
        if gamma_w < T::zero() {
            return Err(Error::invalid("gamma_w", "oracle strength must be nonnegative"));
        }
        if target >= g.n() {
            return Err(Error::invalid("target", format!("node {target} out of range")));
        }
        if !g.is_connected() {
            return Err(Error::Disconnected {
                components: g.component_count(),
            });
        }
        let n = g.n();
        let mut matrix = Array2::<T>::zeros((n, n));
        for &(i, j, w) in g.edges() {
            let (i, j) = (i as usize, j as usize);
            matrix[[i, j]] = -gamma * w;
            matrix[[j, i]] = -gamma * w;
            matrix[[i, i]] = matrix[[i, i]] + gamma * w;
            matrix[[j, j]] = matrix[[j, j]] + gamma * w;
        }
        matrix[[target, target]] = matrix[[target, target]] - gamma_w;
        Ok(Hamiltonian {
            n,
            matrix,
            gamma,
            gamma_w,
            target,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Array2<T> {
        &self.matrix
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn gamma_w(&self) -> T {
        self.gamma_w
    }

    pub fn target(&self) -> usize {
        self.target
    }
}

/// Eigen-decomposed Hamiltonian: ascending eigenvalues, orthonormal
/// eigenvector columns, and the projections of the uniform state and the
/// target state cached for evolution.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition<T> {
    energies: Vec<T>,
    /// Column `k` is the eigenvector of `energies[k]`.
    vectors: Array2<T>,
    /// `<E_k|s>` for the uniform state `|s>`.
    s_proj: Vec<T>,
    /// `<w|E_k>`.
    w_proj: Vec<T>,
    target: usize,
    gamma: T,
}

/// Diagonalizes the Hamiltonian. Sizes above `cap` are rejected up front;
/// LAPACK failures surface as errors rather than truncated spectra.
pub fn eigendecompose<T: Real>(
    h: &Hamiltonian<T>,
    cap: usize,
) -> Result<SpectralDecomposition<T>> {
    let n = h.n;
    if n > cap {
        return Err(Error::SizeCap { n, cap });
    }
    let (vals, vecs) = h
        .matrix
        .eigh(UPLO::Lower)
        .map_err(|e| Error::Eigensolver(e.to_string()))?;
    // LAPACK returns ascending eigenvalues; trust but verify cheaply
    let energies: Vec<T> = vals.to_vec();
    if energies.windows(2).any(|w| w[0] > w[1]) {
        return Err(Error::Eigensolver("eigenvalues not ascending".into()));
    }
    let s_amp = real::<T>(1.0 / (n as f64).sqrt());
    let s_proj: Vec<T> = (0..n)
        .map(|k| (0..n).map(|i| vecs[[i, k]]).sum::<T>() * s_amp)
        .collect();
    let w_proj: Vec<T> = (0..n).map(|k| vecs[[h.target, k]]).collect();
    let sum: T = s_proj.iter().map(|&p| p * p).sum();
    if (sum - T::one()).abs() > real::<T>(1e-10) {
        return Err(Error::Eigensolver(format!(
            "uniform-state projections sum to {sum}, expected 1"
        )));
    }
    Ok(SpectralDecomposition {
        energies,
        vectors: vecs,
        s_proj,
        w_proj,
        target: h.target,
        gamma: h.gamma,
    })
}

impl<T: Real> SpectralDecomposition<T> {
    pub fn n(&self) -> usize {
        self.energies.len()
    }

    pub fn energies(&self) -> &[T] {
        &self.energies
    }

    pub fn vectors(&self) -> &Array2<T> {
        &self.vectors
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn gamma(&self) -> T {
        self.gamma
    }

    pub fn s_projections(&self) -> &[T] {
        &self.s_proj
    }

    pub fn w_projections(&self) -> &[T] {
        &self.w_proj
    }

    /// Largest |E_k|, the scale entering sampling rates and degeneracy tests.
    pub fn energy_scale(&self) -> T {
        let lo = self.energies.first().copied().unwrap_or_default();
        let hi = self.energies.last().copied().unwrap_or_default();
        lo.abs().max(hi.abs())
    }

    /// `E_1 - E_0`.
    pub fn energy_gap(&self) -> T {
        if self.energies.len() < 2 {
            return T::zero();
        }
        self.energies[1] - self.energies[0]
    }

    /// Squared overlaps of the uniform state with the two lowest
    /// eigenvectors, `(o0, o1, degenerate)`.
    ///
    /// When `E_1 - E_0` falls below `1e-12 * max|E|`, the eigenvector pair
    /// returned by the solver is an arbitrary rotation within the degenerate
    /// subspace; the overlaps are then reported against an orthonormal basis
    /// of that subspace ordered by descending overlap, which concentrates the
    /// whole projection in the first entry.
    pub fn overlaps(&self) -> (T, T, bool) {
        let n = self.n();
        if n < 2 {
            return (self.s_proj[0] * self.s_proj[0], T::zero(), false);
        }
        let tol = degeneracy_threshold::<T>() * self.energy_scale();
        if self.energy_gap() <= tol {
            // whole degenerate cluster attached to E_0
            let e0 = self.energies[0];
            let total: T = self
                .energies
                .iter()
                .zip(&self.s_proj)
                .take_while(|(e, _)| **e - e0 <= tol)
                .map(|(_, p)| *p * *p)
                .sum();
            return (total, T::zero(), true);
        }
        (
            self.s_proj[0] * self.s_proj[0],
            self.s_proj[1] * self.s_proj[1],
            false,
        )
    }

    /// `<w| e^{-iHt} |s> = sum_k e^{-i E_k t} <w|E_k><E_k|s>`.
    pub fn amplitude(&self, t: T) -> Complex<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for k in 0..self.n() {
            let c = self.w_proj[k] * self.s_proj[k];
            if c != T::zero() {
                acc = acc + cis(-self.energies[k] * t) * c;
            }
        }
        acc
    }

    /// `P(t) = |<w|e^{-iHt}|s>|^2` on an explicit grid.
    pub fn probability_series(&self, t_grid: &[T]) -> Result<Vec<T>> {
        for w in t_grid.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::invalid("t_grid", "grid must be strictly increasing"));
            }
        }
        if let Some(&t0) = t_grid.first() {
            if t0 < T::zero() {
                return Err(Error::invalid("t_grid", "times must be nonnegative"));
            }
        }
        Ok(t_grid.iter().map(|&t| self.amplitude(t).norm_sqr()).collect())
    }

    /// Full evolved state `e^{-iHt}|s>` in the node basis.
    pub fn evolve_uniform(&self, t: T) -> Array1<Complex<T>> {
        let n = self.n();
        // coefficients in the eigenbasis, rotated by the phases
        let coeff: Vec<Complex<T>> = (0..n)
            .map(|k| cis(-self.energies[k] * t) * self.s_proj[k])
            .collect();
        let mut out = Array1::from_elem(n, Complex::new(T::zero(), T::zero()));
        for k in 0..n {
            let c = coeff[k];
            if c.norm_sqr() == T::zero() {
                continue;
            }
            for i in 0..n {
                out[i] = out[i] + c * self.vectors[[i, k]];
            }
        }
        out
    }

    /// Pruned mode list for long series: keeps `(E_k, c_k)` whose combined
    /// weight loss stays below `budget` in amplitude.
    pub(crate) fn pruned_modes(&self, budget: T) -> Vec<(T, T)> {
        let mut modes: Vec<(T, T)> = self
            .energies
            .iter()
            .zip(self.w_proj.iter().zip(&self.s_proj))
            .map(|(&e, (&w, &s))| (e, w * s))
            .filter(|&(_, c)| c != T::zero())
            .collect();
        modes.sort_by(|a, b| {
            a.1.abs()
                .partial_cmp(&b.1.abs())
                .expect("finite coefficients")
        });
        let mut dropped = T::zero();
        let mut cut = 0;
        for (idx, &(_, c)) in modes.iter().enumerate() {
            if dropped + c.abs() > budget {
                break;
            }
            dropped = dropped + c.abs();
            cut = idx + 1;
        }
        modes.split_off(cut)
    }

    /// Samples `P(t)` on the uniform grid `t_m = m dt`, `m = 0..len`, using
    /// per-mode phase recurrences (no trig in the inner loop). Accuracy is
    /// limited by the recurrence drift `~ len * eps`, far below the percent
    /// tolerances this feeds.
    pub fn sample_probability(&self, dt: T, len: usize) -> Vec<T> {
        let modes = self.pruned_modes(real::<T>(1e-13));
        let mut phases: Vec<Complex<T>> = modes.iter().map(|_| Complex::new(T::one(), T::zero())).collect();
        let steps: Vec<Complex<T>> = modes.iter().map(|&(e, _)| cis(-e * dt)).collect();
        let mut out = Vec::with_capacity(len);
        for _ in 0..len {
            let mut acc = Complex::new(T::zero(), T::zero());
            for ((&(_, c), phase), _) in modes.iter().zip(&phases).zip(&steps) {
                acc = acc + *phase * c;
            }
            out.push(acc.norm_sqr());
            for (phase, step) in phases.iter_mut().zip(&steps) {
                *phase = *phase * *step;
            }
        }
        out
    }

    /// Full invariant check: orthonormality, spectral reconstruction and
    /// unit projection mass. Quadratic-to-cubic cost, used by tests and the
    /// verification command rather than per-decomposition.
    pub fn validate(&self, h: &Hamiltonian<T>) -> Result<()> {
        let n = self.n();
        let vt = self.vectors.t();
        let gram = vt.dot(&self.vectors);
        let mut ortho_err = T::zero();
        for i in 0..n {
            for j in 0..n {
                let expect = if i == j { T::one() } else { T::zero() };
                ortho_err = ortho_err.max((gram[[i, j]] - expect).abs());
            }
        }
        if ortho_err > real::<T>(1e-10) {
            return Err(Error::Eigensolver(format!(
                "orthonormality violated: {ortho_err:e}"
            )));
        }
        let lambda = Array2::from_diag(&Array1::from_vec(self.energies.clone()));
        let rebuilt = self.vectors.dot(&lambda).dot(&vt);
        let mut recon_err = T::zero();
        for i in 0..n {
            for j in 0..n {
                recon_err = recon_err.max((rebuilt[[i, j]] - h.matrix()[[i, j]]).abs());
            }
        }
        let bound = real::<T>(1e-8) * self.energy_scale().max(T::one());
        if recon_err > bound {
            return Err(Error::Eigensolver(format!(
                "reconstruction residual {recon_err:e} above {bound:e}"
            )));
        }
        Ok(())
    }
}
