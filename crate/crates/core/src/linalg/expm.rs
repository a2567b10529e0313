//! Matrix exponentials.
//!
//! Two independent routes are provided: scaling and squaring of a truncated
//! Taylor series (the default), and the eigendecomposition `V e^{tΛ} V⁻¹`
//! for diagonalizable input. Tests cross-check one against the other.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::eigen::eigensystem;
use super::matrix::DenseMatrix;
use crate::config::EXPM_NORM_CAP;
use crate::error::{Error, Result};

/// Target 1-norm of the scaled matrix before the Taylor series is summed.
const SCALED_NORM: f64 = 0.5;
const MAX_TERMS: usize = 40;
/// Eigenvector bases worse than this are not used by [`Propagator`].
const PROPAGATOR_MAX_COND: f64 = 1e4;

/// `e^{tA}` by scaling and squaring of a truncated Taylor series.
pub fn expm(a: &DenseMatrix, t: f64) -> Result<DenseMatrix> {
    expm_capped(a, t, EXPM_NORM_CAP)
}

pub fn expm_capped(a: &DenseMatrix, t: f64, cap: f64) -> Result<DenseMatrix> {
    check_time(t)?;
    let n = a.dim();
    let ta = a.scale(t);
    let norm = ta.norm_1();
    if norm > cap {
        return Err(Error::Overflow { norm, cap });
    }
    if norm == 0.0 {
        return Ok(DenseMatrix::identity(n));
    }
    let squarings = if norm > SCALED_NORM { (norm / SCALED_NORM).log2().ceil() as u32 } else { 0 };
    let x = ta.scale(0.5f64.powi(squarings as i32));
    let x = x.as_nalgebra();

    let mut sum = DMatrix::<Complex64>::identity(n, n);
    let mut term = DMatrix::<Complex64>::identity(n, n);
    for k in 1..=MAX_TERMS {
        term = (&term * x) / Complex64::new(k as f64, 0.0);
        sum += &term;
        if l1(&term) <= f64::EPSILON * 0.25 * l1(&sum) {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    if sum.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Overflow { norm, cap });
    }
    Ok(DenseMatrix::wrap(sum))
}

/// `e^{tA}` as `V diag(e^{tλ}) V⁻¹`. Refuses when the eigenvector basis is
/// numerically singular (defective or clustered input).
pub fn expm_eigen(a: &DenseMatrix, t: f64) -> Result<DenseMatrix> {
    check_time(t)?;
    let es = eigensystem(a)?;
    let v = es.right_matrix();
    let cond = condition_2(&v);
    if !(cond < 1e12) {
        return Err(Error::PreconditionFailed(format!(
            "eigenvector basis is ill-conditioned (cond {cond:e})"
        )));
    }
    let vinv = v.as_nalgebra().clone().lu().try_inverse().ok_or(Error::ConvergenceFailure)?;
    let n = a.dim();
    let d = DMatrix::from_fn(n, n, |i, j| if i == j { (es.eigenvalues[i] * t).exp() } else { Complex64::new(0.0, 0.0) });
    let out = v.as_nalgebra() * d * vinv;
    if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Overflow { norm: a.norm_1() * t, cap: f64::INFINITY });
    }
    Ok(DenseMatrix::wrap(out))
}

fn check_time(t: f64) -> Result<()> {
    if !t.is_finite() || t < 0.0 {
        return Err(Error::param("t", format!("must be finite and non-negative, got {t}")));
    }
    Ok(())
}

fn l1(m: &DMatrix<Complex64>) -> f64 {
    (0..m.ncols()).map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max)
}

fn condition_2(m: &DenseMatrix) -> f64 {
    let sv = m.as_nalgebra().clone().singular_values();
    let max = sv.iter().copied().fold(0.0, f64::max);
    let min = sv.iter().copied().fold(f64::INFINITY, f64::min);
    max / min
}

/// Evaluates `t ↦ e^{tA} f` at many times.
///
/// Uses a well-conditioned eigendecomposition when one exists (O(n²) per
/// time) and falls back to [`expm`] per time otherwise.
pub struct Propagator {
    a: DenseMatrix,
    modal: Option<Modal>,
}

struct Modal {
    eigenvalues: Vec<Complex64>,
    v: DenseMatrix,
    vinv: DenseMatrix,
}

impl Propagator {
    pub fn new(a: &DenseMatrix) -> Self {
        let modal = eigensystem(a).ok().and_then(|es| {
            let v = es.right_matrix();
            if condition_2(&v) > PROPAGATOR_MAX_COND {
                return None;
            }
            let vinv = DenseMatrix::wrap(v.as_nalgebra().clone().lu().try_inverse()?);
            Some(Modal { eigenvalues: es.eigenvalues, v, vinv })
        });
        Propagator { a: a.clone(), modal }
    }

    pub fn is_modal(&self) -> bool {
        self.modal.is_some()
    }

    pub fn apply(&self, t: f64, f: &[Complex64]) -> Result<Vec<Complex64>> {
        match &self.modal {
            Some(m) => {
                check_time(t)?;
                let c = m.vinv.mul_vec(f);
                let scaled: Vec<Complex64> = c.iter().zip(&m.eigenvalues).map(|(c, l)| c * (l * t).exp()).collect();
                let out = m.v.mul_vec(&scaled);
                if out.iter().any(|z| !z.re.is_finite()) {
                    return Err(Error::Overflow { norm: self.a.norm_1() * t, cap: f64::INFINITY });
                }
                Ok(out)
            }
            None => Ok(expm(&self.a, t)?.mul_vec(f)),
        }
    }

    pub fn matrix(&self, t: f64) -> Result<DenseMatrix> {
        match &self.modal {
            Some(m) => {
                check_time(t)?;
                let n = self.a.dim();
                let d = DMatrix::from_fn(n, n, |i, j| {
                    if i == j { (m.eigenvalues[i] * t).exp() } else { Complex64::new(0.0, 0.0) }
                });
                Ok(DenseMatrix::wrap(m.v.as_nalgebra() * d * m.vinv.as_nalgebra()))
            }
            None => expm(&self.a, t),
        }
    }
}
