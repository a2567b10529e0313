use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{eigensystem_with, real_vec, solve, DenseMatrix};

/// Normalization of `u(s)` along the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gauge {
    /// `u_j(s) ≡ 1` (zero-based index).
    FixedComponent(usize),
    /// `u_j(s) ≡ 1` for the largest-magnitude component `j` at the first grid point.
    LargestComponent,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenCurvePoint {
    pub s: f64,
    pub lambda_s: f64,
    pub u_s: Vec<f64>,
    pub dlambda_ds: f64,
    pub du_ds: Vec<f64>,
}

/// Follows the dominant eigenvalue of `A + s₀B` along `s_grid`.
pub fn eigencurve(a: &DenseMatrix, b: &DenseMatrix, s_grid: &[f64], gauge: Gauge) -> Result<Vec<EigenCurvePoint>> {
    eigencurve_with(a, b, s_grid, gauge, 0, &Config::default())
}

/// Follows the eigenvalue with index `start` (descending real part) at the
/// first grid point; later points are matched by maximal eigenvector overlap.
pub fn eigencurve_with(
    a: &DenseMatrix,
    b: &DenseMatrix,
    s_grid: &[f64],
    gauge: Gauge,
    start: usize,
    cfg: &Config,
) -> Result<Vec<EigenCurvePoint>> {
    let n = a.dim();
    if b.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: b.dim() });
    }
    for m in [a, b] {
        if m.max_imag() > cfg.positivity_tol || !m.is_symmetric(cfg.spectral_tol) {
            return Err(Error::NotSymmetric);
        }
    }
    if s_grid.is_empty() {
        return Err(Error::Empty);
    }
    if start >= n {
        return Err(Error::param("start", format!("index {start} out of range for dimension {n}")));
    }
    if let Gauge::FixedComponent(j) = gauge {
        if j >= n {
            return Err(Error::param("gauge", format!("component {j} out of range for dimension {n}")));
        }
    }
    let b_real = b.real_part();
    let mut out = Vec::with_capacity(s_grid.len());
    let mut previous: Option<Vec<f64>> = None;
    let mut component = match gauge {
        Gauge::FixedComponent(j) => Some(j),
        Gauge::LargestComponent => None,
    };

    for &s in s_grid {
        let m = (a + &b_real.scale(s)).real_part();
        let es = eigensystem_with(&m, cfg)?;
        let k = match &previous {
            None => start,
            Some(prev) => (0..n)
                .max_by(|&i, &j| overlap(prev, &es.right_vectors[i]).total_cmp(&overlap(prev, &es.right_vectors[j])))
                .expect("non-empty spectrum"),
        };
        let gap = es.separation(k);
        if gap <= cfg.continuation_gap * es.matrix_norm.max(1.0) {
            return Err(Error::EigenvalueCollision { s, gap });
        }
        let lambda = es.eigenvalues[k].re;
        let raw: Vec<f64> = es.right_vectors[k].iter().map(|z| z.re).collect();
        let j = *component.get_or_insert_with(|| {
            (0..n).max_by(|&x, &y| raw[x].abs().total_cmp(&raw[y].abs())).expect("non-empty vector")
        });
        if raw[j].abs() <= cfg.spectral_tol {
            return Err(Error::PreconditionFailed(format!("gauge component {j} vanishes at s = {s}")));
        }
        let u: Vec<f64> = raw.iter().map(|x| x / raw[j]).collect();
        let (dlambda, du) = derivatives(&m, &b_real, lambda, &u, j)?;
        previous = Some(u.clone());
        out.push(EigenCurvePoint { s, lambda_s: lambda, u_s: u, dlambda_ds: dlambda, du_ds: du });
    }
    Ok(out)
}

fn overlap(prev: &[f64], v: &[Complex64]) -> f64 {
    let dot: Complex64 = prev.iter().zip(v).map(|(p, z)| z * *p).sum();
    let np = prev.iter().map(|x| x * x).sum::<f64>().sqrt();
    dot.norm() / np
}

/// `λ′ = ⟨Bu, u⟩ / ‖u‖²` and `u′` from `(M − λ)u′ = (λ′ − B)u`, `u′_j = 0`.
///
/// The singular system is bordered by the gauge row, which makes it
/// invertible whenever `λ` is simple and `u_j ≠ 0`.
fn derivatives(m: &DenseMatrix, b: &DenseMatrix, lambda: f64, u: &[f64], j: usize) -> Result<(f64, Vec<f64>)> {
    let n = u.len();
    let uc = real_vec(u);
    let bu = b.mul_vec(&uc);
    let uu: f64 = u.iter().map(|x| x * x).sum();
    let dlambda = bu.iter().zip(u).map(|(x, y)| x.re * y).sum::<f64>() / uu;
    let rhs: Vec<Complex64> = (0..n)
        .map(|i| Complex64::new(dlambda * u[i] - bu[i].re, 0.0))
        .chain(std::iter::once(Complex64::new(0.0, 0.0)))
        .collect();
    let bordered = DenseMatrix::from_real_fn(n + 1, |r, c| match (r < n, c < n) {
        (true, true) => m.get(r, c).re - if r == c { lambda } else { 0.0 },
        (true, false) => if r == j { 1.0 } else { 0.0 },
        (false, true) => if c == j { 1.0 } else { 0.0 },
        (false, false) => 0.0,
    })?;
    let w = solve(&bordered, &rhs)?;
    Ok((dlambda, w[..n].iter().map(|z| z.re).collect()))
}

/// Columns `s, lambda, dlambda, u_1..u_d`.
pub fn eigencurve_csv(points: &[EigenCurvePoint]) -> String {
    let d = points.first().map_or(0, |p| p.u_s.len());
    let mut out = String::from("s,lambda,dlambda");
    for i in 1..=d {
        let _ = write!(out, ",u_{i}");
    }
    out.push('\n');
    for p in points {
        let _ = write!(out, "{},{},{}", p.s, p.lambda_s, p.dlambda_ds);
        for x in &p.u_s {
            let _ = write!(out, ",{x}");
        }
        out.push('\n');
    }
    out
}
