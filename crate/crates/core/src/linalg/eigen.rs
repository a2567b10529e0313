//! Eigensystems of dense complex matrices.
//!
//! The complex Schur form `A = Q T Qᴴ` comes from nalgebra. Right
//! eigenvectors are obtained by back substitution on `T − λ_k I`, left ones
//! by forward substitution on the same triangle, so both families share one
//! factorization and pair up index by index.

use nalgebra::linalg::Schur;
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use super::matrix::{inner, norm2, operator_norm, DenseMatrix};
use crate::config::Config;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EigenFlags {
    /// Another eigenvalue lies within the cluster tolerance.
    pub clustered: bool,
    /// `1 / |⟨w, v⟩|` for unit left/right vectors; large values signal
    /// near-defectiveness.
    pub condition: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EigenSystem {
    /// Sorted by descending real part, then descending imaginary part.
    pub eigenvalues: Vec<Complex64>,
    pub right_vectors: Vec<Vec<Complex64>>,
    pub left_vectors: Vec<Vec<Complex64>>,
    pub condition_flags: Vec<EigenFlags>,
    /// Spectral norm of the decomposed matrix.
    pub matrix_norm: f64,
}

pub fn eigensystem(a: &DenseMatrix) -> Result<EigenSystem> {
    eigensystem_with(a, &Config::default())
}

pub fn eigensystem_with(a: &DenseMatrix, cfg: &Config) -> Result<EigenSystem> {
    let n = a.dim();
    let matrix_norm = operator_norm(a);
    // Deflation at exactly one ulp can stall on highly repeated spectra.
    let schur = [1.0, 4.0, 16.0]
        .into_iter()
        .find_map(|k| Schur::try_new(a.as_nalgebra().clone(), k * f64::EPSILON, 30 * n.max(10)))
        .ok_or(Error::ConvergenceFailure)?;
    let (q, t) = schur.unpack();
    if t.iter().chain(q.iter()).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::ConvergenceFailure);
    }

    let tnorm = t.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let smin = (f64::EPSILON * tnorm).max(1e-140);

    let mut pairs: Vec<(Complex64, Vec<Complex64>, Vec<Complex64>)> = (0..n)
        .map(|k| {
            let lambda = t[(k, k)];
            let right = normalize_phase(mat_vec(&q, &right_triangular(&t, k, smin)));
            let left_row = left_triangular(&t, k, smin);
            let conj: Vec<Complex64> = left_row.iter().map(|z| z.conj()).collect();
            let left = normalize_phase(mat_vec(&q, &conj));
            (lambda, right, left)
        })
        .collect();

    pairs.sort_by(|x, y| {
        y.0.re
            .partial_cmp(&x.0.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(y.0.im.partial_cmp(&x.0.im).unwrap_or(std::cmp::Ordering::Equal))
    });

    let cluster_radius = cfg.cluster_tol * matrix_norm.max(f64::MIN_POSITIVE);
    let eigenvalues: Vec<Complex64> = pairs.iter().map(|p| p.0).collect();
    let condition_flags = pairs
        .iter()
        .enumerate()
        .map(|(k, (lambda, v, w))| {
            let clustered = eigenvalues
                .iter()
                .enumerate()
                .any(|(j, mu)| j != k && (mu - lambda).norm() <= cluster_radius);
            let overlap = inner(w, v).norm();
            EigenFlags { clustered, condition: if overlap > 0.0 { 1.0 / overlap } else { f64::INFINITY } }
        })
        .collect();

    let (right_vectors, left_vectors) = pairs.into_iter().map(|(_, v, w)| (v, w)).unzip();
    Ok(EigenSystem { eigenvalues, right_vectors, left_vectors, condition_flags, matrix_norm })
}

fn mat_vec(q: &DMatrix<Complex64>, y: &[Complex64]) -> Vec<Complex64> {
    let n = q.nrows();
    (0..n).map(|i| (0..n).map(|j| q[(i, j)] * y[j]).sum()).collect()
}

fn guarded(d: Complex64, smin: f64) -> Complex64 {
    if d.norm() < smin {
        Complex64::new(smin, 0.0)
    } else {
        d
    }
}

/// Solves `(T − t_kk I) y = 0` with `y_k = 1`, `y_j = 0` for `j > k`.
fn right_triangular(t: &DMatrix<Complex64>, k: usize, smin: f64) -> Vec<Complex64> {
    let n = t.nrows();
    let lambda = t[(k, k)];
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    y[k] = Complex64::new(1.0, 0.0);
    for i in (0..k).rev() {
        let s: Complex64 = (i + 1..=k).map(|j| t[(i, j)] * y[j]).sum();
        y[i] = -s / guarded(t[(i, i)] - lambda, smin);
        rescale_if_large(&mut y);
    }
    y
}

/// Solves `y (T − t_kk I) = 0` with `y_k = 1`, `y_j = 0` for `j < k`.
fn left_triangular(t: &DMatrix<Complex64>, k: usize, smin: f64) -> Vec<Complex64> {
    let n = t.nrows();
    let lambda = t[(k, k)];
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    y[k] = Complex64::new(1.0, 0.0);
    for j in k + 1..n {
        let s: Complex64 = (k..j).map(|i| y[i] * t[(i, j)]).sum();
        y[j] = -s / guarded(t[(j, j)] - lambda, smin);
        rescale_if_large(&mut y);
    }
    y
}

fn rescale_if_large(y: &mut [Complex64]) {
    let m = y.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if m > 1e100 {
        y.iter_mut().for_each(|z| *z /= m);
    }
}

/// Unit 2-norm, largest-magnitude component real and positive.
pub(crate) fn normalize_phase(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let big = v.iter().copied().max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap()).unwrap_or_default();
    let nrm = norm2(&v);
    if nrm == 0.0 || big.norm() == 0.0 {
        return v;
    }
    let phase = big.conj() / big.norm();
    v.iter_mut().for_each(|z| *z = *z * phase / nrm);
    v
}

impl EigenSystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// `s(A)`: the largest real part.
    pub fn spectral_bound(&self) -> f64 {
        self.eigenvalues[0].re
    }

    /// Largest eigenvalue whose imaginary part is below `imag_tol`, if any.
    pub fn real_spectral_bound(&self, imag_tol: f64) -> Option<f64> {
        self.eigenvalues.iter().filter(|z| z.im.abs() <= imag_tol).map(|z| z.re).fold(None, |m, x| {
            Some(m.map_or(x, |m: f64| m.max(x)))
        })
    }

    /// Index of the eigenvalue closest to `lambda`.
    pub fn nearest(&self, lambda: Complex64) -> usize {
        (0..self.dim())
            .min_by(|&i, &j| {
                (self.eigenvalues[i] - lambda).norm().partial_cmp(&(self.eigenvalues[j] - lambda).norm()).unwrap()
            })
            .expect("non-empty spectrum")
    }

    /// Indices of eigenvalues strictly inside the disk `|λ − center| < radius`.
    pub fn in_disk(&self, center: Complex64, radius: f64) -> Vec<usize> {
        (0..self.dim()).filter(|&i| (self.eigenvalues[i] - center).norm() < radius).collect()
    }

    /// Smallest distance from an eigenvalue to the circle `|λ − center| = radius`.
    pub fn distance_to_circle(&self, center: Complex64, radius: f64) -> f64 {
        self.eigenvalues.iter().map(|z| ((z - center).norm() - radius).abs()).fold(f64::INFINITY, f64::min)
    }

    /// `Re λ_k − max_{j≠k} Re λ_j`, or `+∞` in dimension one.
    pub fn real_gap(&self, k: usize) -> f64 {
        let lk = self.eigenvalues[k].re;
        self.eigenvalues
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, z)| lk - z.re)
            .fold(f64::INFINITY, f64::min)
    }

    /// Distance from `λ_k` to the rest of the spectrum.
    pub fn separation(&self, k: usize) -> f64 {
        let lk = self.eigenvalues[k];
        self.eigenvalues
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, z)| (z - lk).norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_simple(&self, k: usize) -> bool {
        !self.condition_flags[k].clustered && self.condition_flags[k].condition < 1e12
    }

    /// Rank-one spectral projection `v wᴴ / (wᴴ v)` for a simple eigenvalue.
    pub fn projection(&self, k: usize) -> DenseMatrix {
        let v = &self.right_vectors[k];
        let w = &self.left_vectors[k];
        let denom = inner(w, v);
        let wbar: Vec<Complex64> = w.iter().map(|z| z.conj() / denom).collect();
        DenseMatrix::outer(v, &wbar)
    }

    /// Matrix whose columns are the right eigenvectors.
    pub fn right_matrix(&self) -> DenseMatrix {
        let n = self.dim();
        DenseMatrix::wrap(DMatrix::from_fn(n, n, |i, j| self.right_vectors[j][i]))
    }
}
