use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;

/// Integer pattern `M` with ones in the last row and column and zeros
/// elsewhere; the generator is `M / √(d−1)`.
pub fn cyclic_border(d: usize) -> Result<DenseMatrix> {
    if d < 3 {
        return Err(Error::DimensionTooSmall { d, min: 3 });
    }
    DenseMatrix::from_real_fn(d, |i, j| if (i == d - 1) != (j == d - 1) { 1.0 } else { 0.0 })
}

/// `(A, B)` with `A = M / √(d−1)` and `B` the negative symmetric coupling of
/// the first two coordinates, scaled by the same factor.
pub fn cyclic(d: usize) -> Result<(DenseMatrix, DenseMatrix)> {
    let m = cyclic_border(d)?;
    let c = 1.0 / ((d - 1) as f64).sqrt();
    let b = DenseMatrix::from_real_fn(d, |i, j| if (i, j) == (0, 1) || (i, j) == (1, 0) { -c } else { 0.0 })?;
    Ok((m.scale(c), b))
}
