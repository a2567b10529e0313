use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::DenseMatrix;
use crate::positivity::{classify_semigroup, Verdict};

/// `s` used when probing the positive family against the counterexample.
pub const FAMILY_PROBE_S: f64 = 4.05;

/// The symmetric generator with spectrum `{0, −1, −9}` and the unit
/// perturbation in the centre entry.
pub fn counterexample_3d() -> (DenseMatrix, DenseMatrix) {
    let a = DenseMatrix::from_real_rows(&[[-2.0, -1.0, 3.0], [-1.0, -2.0, 3.0], [3.0, 3.0, -6.0]])
        .expect("finite entries");
    let b = DenseMatrix::from_real_rows(&[[0.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.0]])
        .expect("finite entries");
    (a, b)
}

/// `3×3` matrix with `s` in the centre and `a` elsewhere.
///
/// `a = 0` is accepted: that member is needed as the starting point of
/// [`negative_family_boundary`].
pub fn positive_family(a: f64, s: f64) -> Result<DenseMatrix> {
    if !(a >= 0.0) || !(s > 0.0) || !a.is_finite() || !s.is_finite() {
        return Err(Error::NonPositiveParameters(format!("a = {a}, s = {s}")));
    }
    DenseMatrix::from_real_fn(3, |i, j| if i == 1 && j == 1 { s } else { a })
}

#[derive(Debug, Clone, Serialize)]
pub struct FamilyBoundary {
    pub s: f64,
    /// Supremum of the `a ∈ [0, 1]` for which `A + C_{a,s}` is not eventually positive.
    pub a_boundary: f64,
    /// A member strictly inside the negative region.
    pub a_chosen: f64,
    pub verdict_at_zero: Verdict,
    pub verdict_at_chosen: Verdict,
    pub bisection_steps: usize,
}

/// Bisects `a` for the sign change of `classify(A + C_{a,s})`. At `a = 1`
/// the sum is Metzler, so the boundary lies in `[0, 1]`.
pub fn negative_family_boundary(s: f64) -> Result<FamilyBoundary> {
    let (base, _) = counterexample_3d();
    let verdict = |a: f64| -> Result<Verdict> { Ok(classify_semigroup(&(&base + &positive_family(a, s)?))?.verdict) };
    let at_zero = verdict(0.0)?;
    if at_zero != Verdict::NotEventuallyPositive {
        return Err(Error::PreconditionFailed(format!("A + C_(0,{s}) is {at_zero}, not NotEventuallyPositive")));
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut steps = 0;
    while hi - lo > 1e-12 && steps < 60 {
        let mid = 0.5 * (lo + hi);
        if verdict(mid)? == Verdict::NotEventuallyPositive {
            lo = mid;
        } else {
            hi = mid;
        }
        steps += 1;
    }
    let chosen = 0.5 * lo;
    Ok(FamilyBoundary {
        s,
        a_boundary: lo,
        a_chosen: chosen,
        verdict_at_zero: at_zero,
        verdict_at_chosen: verdict(chosen)?,
        bisection_steps: steps,
    })
}
