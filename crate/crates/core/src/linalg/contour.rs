use std::f64::consts::PI;

use num_complex::Complex64;

use super::eigen::eigensystem_with;
use super::matrix::DenseMatrix;
use super::resolvent::resolvent;
use crate::config::Config;
use crate::error::{Error, Result};

/// Nodes `center + r e^{iθ_k}`, `θ_k = 2πk/n`.
pub fn circle_nodes(center: Complex64, radius: f64, n: usize) -> impl Iterator<Item = Complex64> {
    (0..n).map(move |k| center + Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64))
}

/// Riesz projection `(1/2πi) ∮ R(λ, A) dλ` over `|λ − center| = radius`,
/// by the trapezoid rule on `n_nodes` equispaced nodes.
pub fn spectral_projection(a: &DenseMatrix, center: Complex64, radius: f64, n_nodes: usize) -> Result<DenseMatrix> {
    spectral_projection_with(a, center, radius, n_nodes, &Config::default())
}

pub fn spectral_projection_with(
    a: &DenseMatrix,
    center: Complex64,
    radius: f64,
    n_nodes: usize,
    cfg: &Config,
) -> Result<DenseMatrix> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::param("radius", "must be positive and finite"));
    }
    if n_nodes < 4 {
        return Err(Error::param("n_nodes", "need at least 4 nodes"));
    }
    let es = eigensystem_with(a, cfg)?;
    let distance = es.distance_to_circle(center, radius);
    if distance <= cfg.spectral_tol * es.matrix_norm.max(1.0) {
        return Err(Error::ContourTooClose { distance });
    }
    contour_sum(a, center, radius, n_nodes)
}

/// The quadrature itself, without the eigenvalue/contour separation check.
pub(crate) fn contour_sum(a: &DenseMatrix, center: Complex64, radius: f64, n_nodes: usize) -> Result<DenseMatrix> {
    let mut acc = DenseMatrix::zeros(a.dim());
    let weight = 1.0 / n_nodes as f64;
    for lambda in circle_nodes(center, radius, n_nodes) {
        let r = resolvent(a, lambda)?;
        // dλ / (2πi) = r e^{iθ} dθ / 2π
        acc = &acc + &r.scale_complex((lambda - center) * weight);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_projection() {
        let a = DenseMatrix::from_real_diagonal(&[1.0, 0.0]);
        let p = spectral_projection(&a, Complex64::new(1.0, 0.0), 0.5, 128).unwrap();
        let expected = DenseMatrix::from_real_diagonal(&[1.0, 0.0]);
        assert!((&p - &expected).max_abs() < 1e-12);
    }

    #[test]
    fn contour_through_eigenvalue_is_rejected() {
        let a = DenseMatrix::from_real_diagonal(&[1.0, 0.0]);
        let err = spectral_projection(&a, Complex64::new(1.0, 0.0), 1.0, 64).unwrap_err();
        assert!(matches!(err, Error::ContourTooClose { .. }));
    }

    #[test]
    fn empty_disk_gives_zero() {
        let a = DenseMatrix::from_real_diagonal(&[1.0, 0.0]);
        let p = spectral_projection(&a, Complex64::new(5.0, 0.0), 1.0, 64).unwrap();
        assert!(p.max_abs() < 1e-14);
    }
}
