use num_complex::Complex64;

use super::matrix::DenseMatrix;
use crate::config::SINGULAR_RCOND;
use crate::error::{Error, Result};

/// `R(λ, A) = (λI − A)⁻¹`.
///
/// Fails with [`Error::SingularResolvent`] when the 1-norm reciprocal
/// condition of `λI − A` drops below [`SINGULAR_RCOND`], which is how the
/// crate decides numerically that `λ ∈ σ(A)`.
pub fn resolvent(a: &DenseMatrix, lambda: Complex64) -> Result<DenseMatrix> {
    inverse_checked(&(-a).shift(lambda), lambda)
}

pub fn resolvent_real(a: &DenseMatrix, lambda: f64) -> Result<DenseMatrix> {
    resolvent(a, Complex64::new(lambda, 0.0))
}

pub(crate) fn inverse_checked(m: &DenseMatrix, lambda: Complex64) -> Result<DenseMatrix> {
    let norm = m.norm_1();
    let inv = m.as_nalgebra().clone().lu().try_inverse();
    let Some(inv) = inv else {
        return Err(Error::SingularResolvent { lambda, condition: f64::INFINITY });
    };
    if inv.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::SingularResolvent { lambda, condition: f64::INFINITY });
    }
    let inv = DenseMatrix::wrap(inv);
    let condition = norm * inv.norm_1();
    if !(condition.is_finite()) || condition * SINGULAR_RCOND > 1.0 {
        return Err(Error::SingularResolvent { lambda, condition });
    }
    Ok(inv)
}

/// Solves `M x = b` by LU.
pub fn solve(m: &DenseMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    let lu = m.as_nalgebra().clone().lu();
    let rhs = nalgebra::DVector::from_column_slice(b);
    let x = lu.solve(&rhs).ok_or(Error::SingularResolvent {
        lambda: Complex64::new(0.0, 0.0),
        condition: f64::INFINITY,
    })?;
    Ok(x.as_slice().to_vec())
}

/// Relative residual `|(λI − A)X − I|_1 / (|λI − A|_1 |X|_1)`.
pub fn resolvent_residual(a: &DenseMatrix, lambda: Complex64, x: &DenseMatrix) -> f64 {
    let m = (-a).shift(lambda);
    let defect = (&m * x).shift(Complex64::new(-1.0, 0.0));
    defect.norm_1() / (m.norm_1() * x.norm_1())
}
