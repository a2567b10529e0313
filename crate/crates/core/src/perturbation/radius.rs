use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{circle_nodes, eigensystem_with, resolvent, resolvent_real, spectral_projection_with, DenseMatrix};
use crate::positivity::{classify_resolvent_at_with, neumann_extension_check_with, Verdict};

/// `ε = min_{|λ−λ₀|=r} ‖R(λ, A)‖⁻¹`, sampled at `n_nodes` points.
///
/// Every real `B` with `‖B‖ < ε` leaves exactly one eigenvalue of `A + B`
/// in the disk, and that eigenvalue is real and simple.
pub fn eigenvalue_radius(a: &DenseMatrix, lambda0: f64, r: f64, n_nodes: usize) -> Result<f64> {
    eigenvalue_radius_with(a, lambda0, r, n_nodes, &Config::default())
}

pub fn eigenvalue_radius_with(a: &DenseMatrix, lambda0: f64, r: f64, n_nodes: usize, cfg: &Config) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::param("r", "must be positive and finite"));
    }
    if n_nodes < 4 {
        return Err(Error::param("n_nodes", "need at least 4 nodes"));
    }
    let center = Complex64::new(lambda0, 0.0);
    let es = eigensystem_with(a, cfg)?;
    let tol = cfg.spectral_tol * es.matrix_norm.max(1.0);
    let k = es.nearest(center);
    if (es.eigenvalues[k] - center).norm() > tol {
        return Err(Error::NotAnEigenvalue { lambda: center });
    }
    if !es.is_simple(k) {
        return Err(Error::NotSimple { lambda: es.eigenvalues[k] });
    }
    let distance = es.distance_to_circle(center, r);
    if distance <= tol {
        return Err(Error::ContourTooClose { distance });
    }
    let inside = es.in_disk(center, r);
    if inside.len() != 1 {
        return Err(Error::NotIsolated { center, radius: r, count: inside.len() });
    }
    let nodes: Vec<Complex64> = circle_nodes(center, r, n_nodes).collect();
    Ok(nodes
        .par_iter()
        .map(|&l| a.shift(-l).min_singular_value())
        .reduce(|| f64::INFINITY, f64::min))
}

#[derive(Debug, Clone, Serialize)]
pub struct NeumannResolvent {
    pub matrix: DenseMatrix,
    /// `‖R‖ q^{k+1} / (1 − q)`: bound on the spectral-norm distance to `R(λ, A + B)`.
    pub truncation_bound: f64,
    pub q: f64,
    pub terms: usize,
}

/// Partial sum `R Σ_{k≤k_max} (BR)^k` of `R(λ, A + B)`, `R = R(λ, A)`.
pub fn neumann_resolvent(a: &DenseMatrix, b: &DenseMatrix, lambda: Complex64, k_max: usize) -> Result<NeumannResolvent> {
    if b.dim() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    let r = resolvent(a, lambda)?;
    let br = b * &r;
    let q = br.operator_norm();
    if q >= 1.0 {
        return Err(Error::SeriesDiverges { q });
    }
    let mut term = DenseMatrix::identity(a.dim());
    let mut sum = term.clone();
    for _ in 0..k_max {
        term = &term * &br;
        sum = &sum + &term;
    }
    let truncation_bound = r.operator_norm() * q.powi(k_max as i32 + 1) / (1.0 - q);
    Ok(NeumannResolvent { matrix: &r * &sum, truncation_bound, q, terms: k_max + 1 })
}

#[derive(Debug, Clone, Serialize)]
pub struct PerturbationCertificate {
    pub lambda0: f64,
    pub radius_r: f64,
    pub epsilon: f64,
    pub perturbation_norm: f64,
    pub lambda_b: f64,
    pub simple: bool,
    pub projection_pb: DenseMatrix,
    /// `‖P_B − P₀‖`.
    pub projection_drift: f64,
    /// `min (R(λ₀+r, A+B) − R(λ₀+r, A))`, non-negative for `B ≥ 0`.
    pub monotonicity_margin: f64,
    /// Right end of the interval on which `R(·, A+B) ≫ 0` is certified.
    pub resolvent_positive_up_to: f64,
}

fn normalized_min(m: &DenseMatrix) -> f64 {
    let big = m.max_abs();
    if big == 0.0 {
        return 0.0;
    }
    m.min_real_entry() / big
}

/// Certifies eventual strong positivity of `R(·, A + B)` at the perturbed
/// eigenvalue `λ_B` for an entrywise non-negative `B` with `‖B‖ < ε`.
pub fn certify_resolvent_perturbation(
    a: &DenseMatrix,
    lambda0: f64,
    r: f64,
    b: &DenseMatrix,
) -> Result<PerturbationCertificate> {
    certify_resolvent_perturbation_with(a, lambda0, r, b, &Config::default())
}

pub fn certify_resolvent_perturbation_with(
    a: &DenseMatrix,
    lambda0: f64,
    r: f64,
    b: &DenseMatrix,
    cfg: &Config,
) -> Result<PerturbationCertificate> {
    let tol = cfg.positivity_tol;
    if b.dim() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    if b.max_imag() > tol || b.min_real_entry() < -tol {
        return Err(Error::PreconditionFailed("perturbation must be real and entrywise non-negative".into()));
    }
    let report = classify_resolvent_at_with(a, lambda0, cfg)?;
    if report.verdict != Verdict::EventuallyStronglyPositive {
        return Err(Error::PreconditionFailed(format!(
            "resolvent of A is not eventually strongly positive at {lambda0} (verdict {})",
            report.verdict
        )));
    }
    let lambda_r = lambda0 + r;
    let r_a = resolvent_real(a, lambda_r)?;
    if normalized_min(&r_a) <= tol {
        return Err(Error::PreconditionFailed(format!("R({lambda_r}, A) is not strongly positive")));
    }
    let epsilon = eigenvalue_radius_with(a, lambda0, r, cfg.contour_nodes, cfg)?;
    let norm = b.operator_norm();
    if norm >= epsilon {
        return Err(Error::NormTooLarge { norm, bound: epsilon });
    }

    let ab = a + b;
    let center = Complex64::new(lambda0, 0.0);
    let es = eigensystem_with(&ab, cfg)?;
    let inside = es.in_disk(center, r);
    if inside.len() != 1 {
        return Err(Error::NotIsolated { center, radius: r, count: inside.len() });
    }
    let k = inside[0];
    let lambda_b = es.eigenvalues[k];
    let spec_tol = cfg.spectral_tol * es.matrix_norm.max(1.0);
    if lambda_b.im.abs() > spec_tol {
        return Err(Error::NotReal { imag: lambda_b.im });
    }
    let simple = es.is_simple(k);

    let p0 = spectral_projection_with(a, center, r, cfg.contour_nodes, cfg)?;
    let pb = spectral_projection_with(&ab, center, r, cfg.contour_nodes, cfg)?;
    let projection_drift = (&pb - &p0).operator_norm();

    let r_ab = resolvent_real(&ab, lambda_r)?;
    let monotonicity_margin = (&r_ab - &r_a).min_real_entry();
    if monotonicity_margin < -tol * r_ab.max_abs().max(1.0) {
        return Err(Error::PreconditionFailed(format!(
            "R({lambda_r}, A+B) >= R({lambda_r}, A) fails by {monotonicity_margin:e}"
        )));
    }
    let u = vec![1.0; a.dim()];
    if !neumann_extension_check_with(&ab, lambda_b.re, lambda_r, &u, cfg)? {
        return Err(Error::PreconditionFailed(format!("extension check fails for A+B at {lambda_r}")));
    }
    Ok(PerturbationCertificate {
        lambda0,
        radius_r: r,
        epsilon,
        perturbation_norm: norm,
        lambda_b: lambda_b.re,
        simple,
        projection_pb: pb.real_part(),
        projection_drift,
        monotonicity_margin,
        resolvent_positive_up_to: lambda_r,
    })
}

/// As [`certify_resolvent_perturbation`] for a real diagonal `B` of either
/// sign, via the shift `B + ‖B‖I ≥ 0`.
pub fn certify_multiplication_perturbation(
    a: &DenseMatrix,
    lambda0: f64,
    r: f64,
    b: &DenseMatrix,
) -> Result<PerturbationCertificate> {
    certify_multiplication_perturbation_with(a, lambda0, r, b, &Config::default())
}

pub fn certify_multiplication_perturbation_with(
    a: &DenseMatrix,
    lambda0: f64,
    r: f64,
    b: &DenseMatrix,
    cfg: &Config,
) -> Result<PerturbationCertificate> {
    if b.dim() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    if !b.is_diagonal() {
        return Err(Error::NotDiagonal);
    }
    if b.max_imag() > cfg.positivity_tol {
        return Err(Error::NotReal { imag: b.max_imag() });
    }
    // for a diagonal matrix the operator norm is the largest |b_ii|
    let c = b.diagonal().iter().map(|z| z.re.abs()).fold(0.0, f64::max);
    let eps_tilde = eigenvalue_radius_with(a, lambda0, r, cfg.contour_nodes, cfg)?;
    let bound = (r / 3.0).min(eps_tilde / 2.0);
    if c >= bound {
        return Err(Error::NormTooLarge { norm: c, bound });
    }
    let shifted = b.real_part().shift_real(c);
    let mut cert = certify_resolvent_perturbation_with(a, lambda0, r, &shifted, cfg)?;
    cert.epsilon = bound;
    cert.perturbation_norm = c;
    cert.lambda_b -= c;
    cert.resolvent_positive_up_to -= c;
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3() -> DenseMatrix {
        DenseMatrix::from_real_rows(&[[-2.0, -1.0, 3.0], [-1.0, -2.0, 3.0], [3.0, 3.0, -6.0]]).unwrap()
    }

    #[test]
    fn radius_of_two_point_spectrum() {
        let a = DenseMatrix::from_real_diagonal(&[1.0, -1.0]);
        let eps = eigenvalue_radius(&a, 1.0, 1.0, 128).unwrap();
        assert!((eps - 1.0).abs() < 1e-12);
    }

    #[test]
    fn radius_preconditions() {
        let a = DenseMatrix::from_real_diagonal(&[1.0, -1.0]);
        assert!(matches!(eigenvalue_radius(&a, 1.0, 2.0, 64), Err(Error::ContourTooClose { .. })));
        assert!(matches!(eigenvalue_radius(&a, 1.0, 3.0, 64), Err(Error::NotIsolated { .. })));
        assert!(matches!(eigenvalue_radius(&a, 0.5, 0.1, 64), Err(Error::NotAnEigenvalue { .. })));
        let j = DenseMatrix::from_real_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap();
        assert!(matches!(eigenvalue_radius(&j, 1.0, 0.5, 64), Err(Error::NotSimple { .. })));
    }

    #[test]
    fn neumann_zero_and_divergent() {
        let a = a3();
        let z = neumann_resolvent(&a, &DenseMatrix::zeros(3), Complex64::new(1.0, 0.0), 5).unwrap();
        assert_eq!(z.truncation_bound, 0.0);
        assert!((&z.matrix - &resolvent_real(&a, 1.0).unwrap()).max_abs() < 1e-15);
        let big = DenseMatrix::identity(3).scale(3.0);
        assert!(matches!(
            neumann_resolvent(&a, &big, Complex64::new(1.0, 0.0), 5),
            Err(Error::SeriesDiverges { .. })
        ));
    }

    #[test]
    fn trivial_certificates() {
        let a = a3();
        let cert = certify_resolvent_perturbation(&a, 0.0, 0.5, &DenseMatrix::zeros(3)).unwrap();
        assert!(cert.lambda_b.abs() < 1e-10);
        assert!(cert.projection_drift < 1e-10);
        let cert = certify_multiplication_perturbation(&a, 0.0, 0.5, &DenseMatrix::identity(3).scale(0.05)).unwrap();
        assert!((cert.lambda_b - 0.05).abs() < 1e-10);
        let cert = certify_multiplication_perturbation(&a, 0.0, 0.5, &DenseMatrix::identity(3).scale(-0.05)).unwrap();
        assert!((cert.lambda_b + 0.05).abs() < 1e-10);
        assert!(matches!(
            certify_multiplication_perturbation(&a, 0.0, 0.5, &DenseMatrix::from_real_rows(&[[0.0, 0.1, 0.0], [0.0; 3], [0.0; 3]]).unwrap()),
            Err(Error::NotDiagonal)
        ));
    }
}
