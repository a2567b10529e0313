use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::{as_complex, uniform_trapezoid, DiscretizedModel, ModelKind};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{eigensystem, ones, resolvent_real, unit, DenseMatrix};
use crate::positivity::{positivity_time_with, ConeVector};
use crate::rank_one::{resolvent_rank1_eigen, semigroup_rank1_scaled, Rank1};

/// `n` equispaced nodes on `[−1, 1]` (odd `n`, so the reflection fixes the
/// midpoint) and the generator `A = (−2I − S)(I − Π)`, where `S` reverses the
/// grid and `Π = 𝟙⟨φ, ·⟩/2` with trapezoid weights `φ`.
pub fn reflection_interval(n: usize) -> Result<DiscretizedModel> {
    if n < 3 {
        return Err(Error::BadGridSize { n, reason: "need at least 3 nodes" });
    }
    if n % 2 == 0 {
        return Err(Error::BadGridSize { n, reason: "node count must be odd" });
    }
    let h = 2.0 / (n - 1) as f64;
    let last = (n - 1) as f64;
    let grid: Vec<f64> = (0..n).map(|i| (2.0 * i as f64 - last) / last).collect();
    let w = uniform_trapezoid(n, h);
    // SΠ = Π, so the product expands to −2I − S + 3Π.
    let a = DenseMatrix::from_real_fn(n, |i, j| {
        let id = if i == j { 2.0 } else { 0.0 };
        let s = if i + j == n - 1 { 1.0 } else { 0.0 };
        1.5 * w[j] - id - s
    })?;
    Ok(DiscretizedModel {
        kind: ModelKind::ReflectionInterval,
        n,
        grid,
        operator_a: a,
        cone_u: ConeVector::from_real(&vec![1.0; n]),
        quadrature_weights: w,
    })
}

/// `R(λ)f = Πf / λ + ((λ + 2)g − Sg) / ((λ + 2)² − 1)` with `g = f − Πf`.
pub(super) fn oracle(model: &DiscretizedModel, lambda: f64, f: &[f64]) -> Result<Vec<f64>> {
    let n = model.n;
    if f.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: f.len() });
    }
    let q = (lambda + 2.0) * (lambda + 2.0) - 1.0;
    if lambda == 0.0 || q == 0.0 {
        return Err(Error::SingularResolvent { lambda: Complex64::new(lambda, 0.0), condition: f64::INFINITY });
    }
    let mean = 0.5 * model.integrate(f);
    let g: Vec<f64> = f.iter().map(|x| x - mean).collect();
    Ok((0..n).map(|i| mean / lambda + ((lambda + 2.0) * g[i] - g[n - 1 - i]) / q).collect())
}

/// Continuum value of `(R(λ, A) f_ε)(−1)`.
pub fn reflection_boundary_value(lambda: f64, epsilon: f64) -> f64 {
    0.5 * epsilon * (1.0 / lambda - 1.0 / (lambda + 3.0)) - 1.0 / ((lambda + 2.0) * (lambda + 2.0) - 1.0)
}

#[derive(Debug, Clone, Serialize)]
pub struct FEpsilon {
    pub epsilon: f64,
    pub values: Vec<f64>,
    /// Trapezoid value of `∫ f_ε`; equals `ε` up to the quadrature error.
    pub pairing: f64,
    pub pairing_error: f64,
}

/// Ramp from 0 at `1 − 2ε` to 1 at `x = 1`, zero to the left.
pub fn build_f_epsilon(model: &DiscretizedModel, epsilon: f64) -> Result<FEpsilon> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::EpsilonOutOfRange { epsilon });
    }
    let start = 1.0 - 2.0 * epsilon;
    let width = 1.0 - start;
    let values = model.sample(|x| ((x - start) / width).clamp(0.0, 1.0));
    let pairing = model.integrate(&values);
    Ok(FEpsilon { epsilon, values, pairing, pairing_error: (pairing - epsilon).abs() })
}

#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryRow {
    pub t: f64,
    pub min_entry: f64,
    pub max_entry: f64,
    pub value_at_minus_one: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SmallPerturbationReport {
    pub n: usize,
    pub alpha: f64,
    pub epsilon: f64,
    pub pairing: f64,
    /// Discrete `(R(α, A) f_ε)(−1)`; `None` for `α = 0`.
    pub boundary_value: Option<f64>,
    pub boundary_value_continuum: Option<f64>,
    /// Limit coefficient `c` of `e^{−tα} e^{t(A + αK)} f_ε → c𝟙`.
    pub limit: f64,
    pub terminal_error: f64,
    pub terminal_negative: bool,
    pub spectral_bound_perturbed: f64,
    /// The rank-one resolvent formula has its pole at `λ = α`.
    pub pole_at_alpha: bool,
    /// First time after which `e^{t(A + αK)} f_ε ≥ 0` on the sampled horizon.
    pub positivity_time: Option<f64>,
    pub trajectory: Vec<TrajectoryRow>,
}

/// Evaluates `e^{−tα} e^{t(A + αK)} f_ε` with `K = 𝟙 ⊗ δ₋₁` through the
/// rank-one semigroup formula and compares it with its limit.
pub fn demo_small_perturbation(
    model: &DiscretizedModel,
    alpha: f64,
    epsilon: f64,
    t_grid: &[f64],
) -> Result<SmallPerturbationReport> {
    if model.kind != ModelKind::ReflectionInterval {
        return Err(Error::PreconditionFailed("model must be the reflection interval".into()));
    }
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(Error::PreconditionFailed(format!("alpha = {alpha} must be finite and non-negative")));
    }
    if t_grid.is_empty() {
        return Err(Error::Empty);
    }
    let n = model.n;
    let a = &model.operator_a;
    let f = build_f_epsilon(model, epsilon)?;
    let fc = as_complex(&f.values);
    let k = Rank1::with_alpha(unit(n, 0), ones(n), alpha)?;
    let zero = Complex64::new(0.0, 0.0);

    let (boundary_value, limit) = if alpha > 0.0 {
        let r = resolvent_real(a, alpha)?;
        let b = r.mul_vec(&fc)[0].re;
        if !(b < 0.0) {
            return Err(Error::PreconditionFailed(format!(
                "(R(alpha, A) f_eps)(-1) = {b} is not negative; decrease epsilon"
            )));
        }
        (Some(b), alpha * b)
    } else {
        (None, 0.5 * f.pairing)
    };

    let trajectory: Vec<(TrajectoryRow, f64)> = t_grid
        .par_iter()
        .map(|&t| {
            let e = semigroup_rank1_scaled(a, t, &k, zero, alpha)?;
            let y: Vec<f64> = e.mul_vec(&fc).iter().map(|z| z.re).collect();
            let err = y.iter().map(|x| (x - limit).abs()).fold(0.0, f64::max);
            let row = TrajectoryRow {
                t,
                min_entry: y.iter().copied().fold(f64::INFINITY, f64::min),
                max_entry: y.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                value_at_minus_one: y[0],
            };
            Ok((row, err))
        })
        .collect::<Result<_>>()?;
    let (last, terminal_error) = trajectory.last().map(|(r, e)| (r.clone(), *e)).expect("non-empty grid");

    let perturbed = a + &k.matrix();
    let spectral_bound_perturbed = eigensystem(&perturbed)?.spectral_bound();
    let pole_at_alpha = alpha > 0.0
        && matches!(
            resolvent_rank1_eigen(a, Complex64::new(alpha, 0.0), &k, zero),
            Err(Error::PerturbedSpectrum { .. })
        )
        && resolvent_rank1_eigen(a, Complex64::new(alpha + 1e-3, 0.0), &k, zero).is_ok();
    let t_max = t_grid.iter().copied().fold(0.0, f64::max);
    let cfg = Config::default();
    let positivity_time = positivity_time_with(&perturbed, &fc, t_max, cfg.time_mesh_points, false, &cfg)?;

    Ok(SmallPerturbationReport {
        n,
        alpha,
        epsilon,
        pairing: f.pairing,
        boundary_value,
        boundary_value_continuum: (alpha > 0.0).then(|| reflection_boundary_value(alpha, epsilon)),
        limit,
        terminal_error,
        terminal_negative: last.max_entry < 0.0,
        spectral_bound_perturbed,
        pole_at_alpha,
        positivity_time,
        trajectory: trajectory.into_iter().map(|(r, _)| r).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::resolvent;

    #[test]
    fn grid_checks() {
        assert!(matches!(reflection_interval(4), Err(Error::BadGridSize { .. })));
        assert!(matches!(reflection_interval(1), Err(Error::BadGridSize { .. })));
        let m = reflection_interval(9).unwrap();
        assert_eq!(m.quadrature_weights.iter().sum::<f64>(), 2.0);
        let a1 = m.operator_a.mul_vec(&ones(9));
        assert!(a1.iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn resolvent_matches_closed_form() {
        let m = reflection_interval(11).unwrap();
        let g = |x: f64| (3.0 * x).sin() + x * x;
        let f = as_complex(&m.sample(g));
        for lambda in [0.5, 2.0, -0.5] {
            let direct = resolvent(&m.operator_a, Complex64::new(lambda, 0.0)).unwrap().mul_vec(&f);
            let closed = m.oracle(lambda, &g).unwrap();
            for (x, y) in direct.iter().zip(&closed) {
                assert!((x.re - y).abs() < 1e-12);
            }
        }
        assert!(m.oracle(-3.0, &g).is_err());
    }

    #[test]
    fn ramp_constraints() {
        let m = reflection_interval(33).unwrap();
        let f = build_f_epsilon(&m, 0.25).unwrap();
        assert_eq!(f.values[0], 0.0);
        assert_eq!(f.values[32], 1.0);
        assert!(f.pairing_error < 1e-12);
        assert!(matches!(build_f_epsilon(&m, 1.0), Err(Error::EpsilonOutOfRange { .. })));
    }

    #[test]
    fn perturbation_turns_negative() {
        let m = reflection_interval(65).unwrap();
        let r = demo_small_perturbation(&m, 1.0, 0.05, &[1.0, 50.0, 200.0]).unwrap();
        assert!(r.terminal_negative);
        assert!(r.terminal_error < 1e-6);
        assert!(r.pole_at_alpha);
        assert!((r.spectral_bound_perturbed - 1.0).abs() < 1e-10);
        assert!(r.positivity_time.is_none());
    }
}
