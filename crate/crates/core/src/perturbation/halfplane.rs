use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{eigensystem_with, resolvent, resolvent_real, DenseMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HalfplaneStrategy {
    /// Closed form `1 / (λ₁ − s(A))`; requires a real symmetric `A`.
    Symmetric,
    /// Grid maximization on the line `Re λ = λ₁`; a lower estimate.
    Sampled,
    /// `Symmetric` when applicable, `Sampled` otherwise.
    Auto,
}

#[derive(Debug, Clone, Serialize)]
pub struct HalfplaneEstimate {
    /// `M = sup_{Re λ ≥ λ₁} ‖R(λ, A)‖` (or its estimate).
    pub m: f64,
    pub strategy: HalfplaneStrategy,
    pub lower_bound_only: bool,
    /// Sampled strategy: `|Im λ| · ‖R(λ₁ + i Im λ, A)‖` at the end of the grid.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decay_check: Option<f64>,
}

const LINE_SAMPLES: usize = 2001;

pub fn halfplane_sup_norm(a: &DenseMatrix, lambda1: f64, strategy: HalfplaneStrategy) -> Result<HalfplaneEstimate> {
    halfplane_sup_norm_with(a, lambda1, strategy, &Config::default())
}

pub fn halfplane_sup_norm_with(
    a: &DenseMatrix,
    lambda1: f64,
    strategy: HalfplaneStrategy,
    cfg: &Config,
) -> Result<HalfplaneEstimate> {
    let es = eigensystem_with(a, cfg)?;
    let s = es.spectral_bound();
    if !(lambda1 > s) {
        return Err(Error::SpectralBoundViolation { lambda1, bound: s });
    }
    let symmetric = a.max_imag() <= cfg.positivity_tol && a.is_symmetric(cfg.spectral_tol);
    match strategy {
        HalfplaneStrategy::Symmetric if !symmetric => Err(Error::NotSymmetric),
        HalfplaneStrategy::Symmetric | HalfplaneStrategy::Auto if symmetric => Ok(HalfplaneEstimate {
            m: 1.0 / (lambda1 - s),
            strategy: HalfplaneStrategy::Symmetric,
            lower_bound_only: false,
            decay_check: None,
        }),
        _ => sampled(a, lambda1, es.matrix_norm),
    }
}

/// The sup over the half-plane is attained on its boundary line, so only
/// `λ₁ + iy` is sampled: a uniform grid, then golden-section refinement.
fn sampled(a: &DenseMatrix, lambda1: f64, norm: f64) -> Result<HalfplaneEstimate> {
    let y_max = 4.0 * (norm + lambda1.abs()).max(1.0);
    let ys: Vec<f64> = (0..LINE_SAMPLES)
        .map(|k| -y_max + 2.0 * y_max * k as f64 / (LINE_SAMPLES - 1) as f64)
        .collect();
    let f = |y: f64| -> Result<f64> { Ok(resolvent(a, Complex64::new(lambda1, y))?.operator_norm()) };
    let values: Vec<f64> = ys.par_iter().map(|&y| f(y)).collect::<Result<_>>()?;
    let (best, &m0) = values.iter().enumerate().max_by(|x, y| x.1.total_cmp(y.1)).expect("non-empty grid");
    let h = ys[1] - ys[0];
    let (mut lo, mut hi) = (ys[best] - h, ys[best] + h);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut m = m0;
    for _ in 0..60 {
        let x1 = hi - g * (hi - lo);
        let x2 = lo + g * (hi - lo);
        let (f1, f2) = (f(x1)?, f(x2)?);
        m = m.max(f1).max(f2);
        if f1 > f2 {
            hi = x2;
        } else {
            lo = x1;
        }
    }
    let decay = y_max * values[LINE_SAMPLES - 1].max(values[0]);
    Ok(HalfplaneEstimate { m, strategy: HalfplaneStrategy::Sampled, lower_bound_only: true, decay_check: Some(decay) })
}

#[derive(Debug, Clone, Serialize)]
pub struct QuantitativeReport {
    pub m: f64,
    pub k_norm: f64,
    /// `1 / M`.
    pub norm_bound: f64,
    pub spectral_bound_a: f64,
    pub spectral_bound_ak: f64,
    pub real_spectral_bound_ak: f64,
    /// `s(A + K) < λ₁`.
    pub below_lambda1: bool,
    /// `R(λ, A + K) ≫ 0` on the sampled interval `(s_ℝ(A + K), λ₁)`.
    pub resolvent_strongly_positive: bool,
    /// `s_ℝ(A + K) ≥ s(A)`.
    pub bound_not_decreased: bool,
    /// `s_ℝ(A + K) > s(A)` (vacuously true for `K = 0`).
    pub strict_increase: bool,
    pub min_resolvent_margin: f64,
    pub all_hold: bool,
}

/// Number of interior points of `(s_ℝ(A+K), λ₁)` at which `R(λ, A+K)` is tested.
pub const QUANTITATIVE_MESH: usize = 32;

/// Checks the conclusions of the quantitative perturbation theorem for a
/// non-negative `K` with `‖K‖ < 1/M`.
pub fn check_quantitative_theorem(a: &DenseMatrix, k: &DenseMatrix, lambda1: f64, u: &[f64]) -> Result<QuantitativeReport> {
    check_quantitative_theorem_with(a, k, lambda1, u, &Config::default())
}

pub fn check_quantitative_theorem_with(
    a: &DenseMatrix,
    k: &DenseMatrix,
    lambda1: f64,
    u: &[f64],
    cfg: &Config,
) -> Result<QuantitativeReport> {
    let n = a.dim();
    let tol = cfg.positivity_tol;
    if k.dim() != n || u.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: if k.dim() != n { k.dim() } else { u.len() } });
    }
    if u.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::param("u", "must be entrywise positive"));
    }
    if k.max_imag() > tol || k.min_real_entry() < -tol {
        return Err(Error::PreconditionFailed("K must be real and entrywise non-negative".into()));
    }
    let est = halfplane_sup_norm_with(a, lambda1, HalfplaneStrategy::Auto, cfg)?;
    let norm_bound = 1.0 / est.m;
    let k_norm = k.operator_norm();
    if k_norm >= norm_bound {
        return Err(Error::NormTooLarge { norm: k_norm, bound: norm_bound });
    }
    let es_a = eigensystem_with(a, cfg)?;
    let s_a = es_a.spectral_bound();
    let pre = strong_margin_on(a, s_a, lambda1, u)?;
    if pre <= tol {
        return Err(Error::PreconditionFailed(format!(
            "R(lambda, A) is not strongly positive on ({s_a}, {lambda1}) (margin {pre:e})"
        )));
    }

    let ak = a + k;
    let es = eigensystem_with(&ak, cfg)?;
    let spec_tol = cfg.spectral_tol * es.matrix_norm.max(1.0);
    let s_ak = es.spectral_bound();
    let s_real = es.real_spectral_bound(spec_tol).unwrap_or(f64::NEG_INFINITY);
    let below_lambda1 = s_ak < lambda1;
    let margin = if below_lambda1 && s_real.is_finite() { strong_margin_on(&ak, s_real, lambda1, u)? } else { f64::NAN };
    let resolvent_strongly_positive = margin > tol;
    let bound_not_decreased = s_real >= s_a - spec_tol;
    let nonzero = k.max_abs() > 0.0;
    let strict_increase = !nonzero || s_real > s_a;
    Ok(QuantitativeReport {
        m: est.m,
        k_norm,
        norm_bound,
        spectral_bound_a: s_a,
        spectral_bound_ak: s_ak,
        real_spectral_bound_ak: s_real,
        below_lambda1,
        resolvent_strongly_positive,
        bound_not_decreased,
        strict_increase,
        min_resolvent_margin: margin,
        all_hold: below_lambda1 && resolvent_strongly_positive && bound_not_decreased && strict_increase,
    })
}

/// `min_λ min_ij R(λ)_ij / (u_i max|R(λ)|)` over interior points of `(lo, hi)`.
fn strong_margin_on(a: &DenseMatrix, lo: f64, hi: f64, u: &[f64]) -> Result<f64> {
    let n = a.dim();
    let mesh: Vec<f64> = (1..=QUANTITATIVE_MESH)
        .map(|j| lo + (hi - lo) * j as f64 / (QUANTITATIVE_MESH + 1) as f64)
        .collect();
    let margins: Vec<f64> = mesh
        .par_iter()
        .map(|&l| {
            let r = resolvent_real(a, l)?;
            let big = r.max_abs();
            Ok((0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .map(|(i, j)| r.get(i, j).re / (u[i] * big))
                .fold(f64::INFINITY, f64::min))
        })
        .collect::<Result<_>>()?;
    Ok(margins.into_iter().fold(f64::INFINITY, f64::min))
}
