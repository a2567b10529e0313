use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{circle_nodes, resolvent, DenseMatrix};
use crate::positivity::{classify_semigroup_with, dominant_eigendata, Dominant, Verdict};
use crate::random::{perturbation, trial_rng};

/// Samples per unit of `|Im λ|` range when bounding `‖R‖` on the vertical line.
const LINE_SAMPLES: usize = 1024;

/// Radius of a ball of real perturbations `B` that keep a simple, real,
/// strictly dominant eigenvalue with an entrywise positive projection.
///
/// With `r` half the dominance gap, `ρ = max_{|λ−s|=r} ‖R(λ)‖`, `C` the sup of
/// `‖R(λ)‖` over `{Re λ ≥ s − r} \ B(s, r)` and `p` the smallest entry of
/// `P₀`, any `‖B‖ < min{1/C, p / (ρ(rρ + p))}` works.
#[derive(Debug, Clone, Serialize)]
pub struct GeneratorRadius {
    pub epsilon: f64,
    pub r: f64,
    pub rho: f64,
    pub c: f64,
    pub projection_min_entry: f64,
}

pub fn generator_radius(a: &DenseMatrix) -> Result<GeneratorRadius> {
    generator_radius_with(a, &Config::default())
}

pub fn generator_radius_with(a: &DenseMatrix, cfg: &Config) -> Result<GeneratorRadius> {
    let dom = positive_dominant(a, cfg)?;
    let s = dom.eigenvalue;
    let r = if dom.gap.is_finite() { 0.5 * dom.gap } else { 1.0 };
    let center = Complex64::new(s, 0.0);
    let norm = |l: Complex64| -> Result<f64> { Ok(resolvent(a, l)?.operator_norm()) };
    let circle: Vec<Complex64> = circle_nodes(center, r, cfg.contour_nodes.max(64)).collect();
    let rho = circle.par_iter().map(|&l| norm(l)).collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);
    let y_max = 4.0 * (a.operator_norm() + s.abs()).max(1.0);
    let line: Vec<Complex64> = (0..=LINE_SAMPLES)
        .map(|k| Complex64::new(s - r, -y_max + 2.0 * y_max * k as f64 / LINE_SAMPLES as f64))
        .collect();
    let c_line = line.par_iter().map(|&l| norm(l)).collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);
    let c = rho.max(c_line);
    let p = dom.projection.min_real_entry();
    let epsilon = (1.0 / c).min(p / (rho * (r * rho + p)));
    Ok(GeneratorRadius { epsilon, r, rho, c, projection_min_entry: p })
}

fn positive_dominant(a: &DenseMatrix, cfg: &Config) -> Result<Dominant> {
    if a.max_imag() > cfg.positivity_tol {
        return Err(Error::NotReal { imag: a.max_imag() });
    }
    let dom = dominant_eigendata(a, cfg).map_err(|_| Error::NotEventuallyStronglyPositive)?;
    if dom.projection.min_real_entry() <= cfg.positivity_tol * dom.projection.max_abs().max(1.0) {
        return Err(Error::NotEventuallyStronglyPositive);
    }
    Ok(dom)
}

#[derive(Debug, Clone, Serialize)]
pub struct OpennessReport {
    pub trials: usize,
    pub preserved: usize,
    pub fraction: f64,
    pub epsilon_estimate: f64,
    pub perturbation_norm: f64,
    pub seed: u64,
}

/// Draws `n_trials` real perturbations of spectral norm `scale·ε` and counts
/// how many keep eventual strong positivity. A Metzler result counts when its
/// dominant projection is entrywise positive, since it is then strongly
/// positive as well.
pub fn openness_probe(a: &DenseMatrix, n_trials: usize, scale: f64, seed: u64) -> Result<OpennessReport> {
    openness_probe_with(a, n_trials, scale, seed, &Config::default())
}

pub fn openness_probe_with(
    a: &DenseMatrix,
    n_trials: usize,
    scale: f64,
    seed: u64,
    cfg: &Config,
) -> Result<OpennessReport> {
    if !(scale >= 0.0) || !scale.is_finite() {
        return Err(Error::param("scale", "must be finite and non-negative"));
    }
    let radius = generator_radius_with(a, cfg)?;
    let target = scale * radius.epsilon;
    let n = a.dim();
    let preserved = (0..n_trials as u64)
        .into_par_iter()
        .map(|k| {
            let b = perturbation(&mut trial_rng(seed, k), n, target);
            keeps_verdict(&(a + &b), cfg)
        })
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .filter(|&x| x)
        .count();
    Ok(OpennessReport {
        trials: n_trials,
        preserved,
        fraction: if n_trials == 0 { 1.0 } else { preserved as f64 / n_trials as f64 },
        epsilon_estimate: radius.epsilon,
        perturbation_norm: target,
        seed,
    })
}

fn keeps_verdict(m: &DenseMatrix, cfg: &Config) -> Result<bool> {
    Ok(match classify_semigroup_with(m, cfg)?.verdict {
        Verdict::EventuallyStronglyPositive => true,
        Verdict::Positive => positive_dominant(m, cfg).is_ok(),
        _ => false,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct ContinuityRow {
    pub scale: f64,
    pub norm: f64,
    pub eigenvalue_drift: f64,
    pub projection_drift: f64,
}

/// `(‖B‖, |λ_B − λ₀|, ‖P_B − P₀‖)` along `B = scale · direction`.
pub fn projection_continuity(a: &DenseMatrix, direction: &DenseMatrix, scales: &[f64]) -> Result<Vec<ContinuityRow>> {
    projection_continuity_with(a, direction, scales, &Config::default())
}

pub fn projection_continuity_with(
    a: &DenseMatrix,
    direction: &DenseMatrix,
    scales: &[f64],
    cfg: &Config,
) -> Result<Vec<ContinuityRow>> {
    if direction.dim() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: direction.dim() });
    }
    let base = dominant_eigendata(a, cfg)?;
    let dnorm = direction.operator_norm();
    scales
        .par_iter()
        .map(|&c| {
            let pert = dominant_eigendata(&(a + &direction.scale(c)), cfg)?;
            Ok(ContinuityRow {
                scale: c,
                norm: c.abs() * dnorm,
                eigenvalue_drift: (pert.eigenvalue - base.eigenvalue).abs(),
                projection_drift: (&pert.projection - &base.projection).operator_norm(),
            })
        })
        .collect()
}

/// `true` if `values` is non-increasing up to `allowed` inversions.
pub fn decreasing_trend(values: &[f64], allowed: usize) -> bool {
    values.windows(2).filter(|w| w[1] > w[0]).count() <= allowed
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a3() -> DenseMatrix {
        DenseMatrix::from_real_rows(&[[-2.0, -1.0, 3.0], [-1.0, -2.0, 3.0], [3.0, 3.0, -6.0]]).unwrap()
    }

    #[test]
    fn certified_radius_of_example() {
        let g = generator_radius(&a3()).unwrap();
        assert!((g.rho - 2.0).abs() < 1e-10);
        assert!((g.c - 2.0).abs() < 1e-10);
        assert!((g.epsilon - 0.125).abs() < 1e-10);
    }

    #[test]
    fn zero_scale_probe() {
        let r = openness_probe(&a3(), 10, 0.0, 1).unwrap();
        assert_eq!(r.fraction, 1.0);
        let rot = DenseMatrix::from_real_rows(&[[0.0, -1.0], [1.0, 0.0]]).unwrap();
        assert!(matches!(openness_probe(&rot, 1, 0.5, 1), Err(Error::NotEventuallyStronglyPositive)));
    }

    #[test]
    fn zero_direction_has_no_drift() {
        let rows = projection_continuity(&a3(), &DenseMatrix::zeros(3), &[1.0, 0.5]).unwrap();
        assert!(rows.iter().all(|r| r.eigenvalue_drift < 1e-12 && r.projection_drift < 1e-12));
    }

    #[test]
    fn trend_helper() {
        assert!(decreasing_trend(&[3.0, 2.0, 2.5, 1.0], 1));
        assert!(!decreasing_trend(&[3.0, 4.0, 2.5, 3.0], 1));
    }
}
