use rand::Rng;
use serde::Serialize;

use super::{uniform_trapezoid, DiscretizedModel, ModelKind};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{unit, DenseMatrix};
use crate::perturbation::{check_quantitative_theorem_with, QuantitativeReport};
use crate::positivity::{classify_semigroup_with, dominant_eigendata, is_metzler, positivity_time_with, ConeVector, Verdict};
use crate::random::symmetric_nonneg;

/// Cells of the fine grid used by the kernel formula.
const KERNEL_CELLS: usize = 1 << 17;

/// Central differences for `−u″` on `n` nodes of `[0, 1]` with
/// `u′(0) = −u′(1) = u(0) + u(1)`; the ghost values are eliminated through
/// the boundary relations. The stored operator is the generator `−A_n`.
pub fn nonlocal_laplacian(n: usize) -> Result<DiscretizedModel> {
    if n < 8 {
        return Err(Error::BadGridSize { n, reason: "need at least 8 nodes" });
    }
    let h = 1.0 / (n - 1) as f64;
    let h2 = h * h;
    let last = n - 1;
    let a = DenseMatrix::from_real_fn(n, |i, j| {
        let band = if i == j {
            2.0
        } else if i.abs_diff(j) == 1 {
            if i == 0 || i == last { -2.0 } else { -1.0 }
        } else {
            0.0
        };
        let coupling = if (i == 0 || i == last) && (j == 0 || j == last) { 2.0 * h } else { 0.0 };
        -(band + coupling) / h2
    })?;
    Ok(DiscretizedModel {
        kind: ModelKind::NonlocalLaplacian,
        n,
        grid: (0..n).map(|i| i as f64 * h).collect(),
        operator_a: a,
        cone_u: ConeVector::from_real(&vec![1.0; n]),
        quadrature_weights: uniform_trapezoid(n, h),
    })
}

/// `u(x) = ½∫₀ˣ∫_y¹ f dz dy + ½∫ₓ¹∫₀^y f dz dy` at the `n` grid nodes, with
/// every integral done by the trapezoid rule on a grid of about `2¹⁷` cells.
pub fn nonlocal_kernel(f: &dyn Fn(f64) -> f64, n: usize) -> Vec<f64> {
    let refine = KERNEL_CELLS.div_ceil(n - 1);
    let m = (n - 1) * refine;
    let step = 1.0 / m as f64;
    let fv: Vec<f64> = (0..=m).map(|k| f(k as f64 * step)).collect();
    let cumulative = |v: &[f64]| -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        for k in 1..v.len() {
            out[k] = out[k - 1] + 0.5 * step * (v[k - 1] + v[k]);
        }
        out
    };
    let big_f = cumulative(&fv);
    let total = big_f[m];
    let big_g: Vec<f64> = big_f.iter().map(|x| total - x).collect();
    let int_g = cumulative(&big_g);
    let int_f = cumulative(&big_f);
    (0..n)
        .map(|i| {
            let k = i * refine;
            0.5 * int_g[k] + 0.5 * (int_f[m] - int_f[k])
        })
        .collect()
}

fn half_weights(w: &[f64]) -> Vec<f64> {
    w.iter().map(|x| x.sqrt()).collect()
}

/// `D M D⁻¹` with `D = diag(√w)`.
fn conjugate(m: &DenseMatrix, d: &[f64]) -> DenseMatrix {
    DenseMatrix::from_real_fn(m.dim(), |i, j| d[i] * m.get(i, j).re / d[j]).expect("finite entries")
}

/// Operator norm induced by the weighted inner product `⟨x, y⟩_w = Σ w_i x_i y_i`.
pub fn weighted_norm(m: &DenseMatrix, weights: &[f64]) -> f64 {
    conjugate(m, &half_weights(weights)).operator_norm()
}

/// Maps a matrix `S` that is symmetric in the Euclidean sense to
/// `D⁻¹ S D`, which is self-adjoint for the weighted inner product and has
/// the same weighted norm as `‖S‖`.
pub fn from_weighted_symmetric(model: &DiscretizedModel, s: &DenseMatrix) -> Result<DenseMatrix> {
    if s.dim() != model.n {
        return Err(Error::DimensionMismatch { expected: model.n, got: s.dim() });
    }
    let d = half_weights(&model.quadrature_weights);
    let inv: Vec<f64> = d.iter().map(|x| 1.0 / x).collect();
    Ok(conjugate(s, &inv))
}

/// Non-negative, weighted self-adjoint perturbation of weighted norm `target`.
pub fn random_hilbert_perturbation<R: Rng>(model: &DiscretizedModel, rng: &mut R, target: f64) -> Result<DenseMatrix> {
    from_weighted_symmetric(model, &symmetric_nonneg(rng, model.n, target))
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeTime {
    pub index: usize,
    pub time: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct HilbertReport {
    pub n: usize,
    pub lambda1: f64,
    pub b_weighted_norm: f64,
    pub quantitative: QuantitativeReport,
    pub verdict: Verdict,
    pub metzler: bool,
    /// `min / max` of the dominant eigenvector of `−A_n + B`.
    pub eigenvector_margin: f64,
    pub probe_times: Vec<ProbeTime>,
}

/// Checks the Hilbert-space perturbation bound on the grid model: the
/// weighted inner product makes `−A_n` self-adjoint, so the problem is moved
/// to Euclidean coordinates by `D = diag(√w)` before the check.
pub fn demo_hilbert_quantitative(model: &DiscretizedModel, b: &DenseMatrix, lambda1: f64) -> Result<HilbertReport> {
    let cfg = Config::default();
    if model.kind != ModelKind::NonlocalLaplacian {
        return Err(Error::PreconditionFailed("model must be the non-local Laplacian".into()));
    }
    let n = model.n;
    if b.dim() != n {
        return Err(Error::DimensionMismatch { expected: n, got: b.dim() });
    }
    let d = half_weights(&model.quadrature_weights);
    let sym = |m: &DenseMatrix| {
        let c = conjugate(m, &d);
        (&c + &c.transpose()).scale(0.5)
    };
    let bc = conjugate(b, &d);
    if !bc.is_symmetric(cfg.spectral_tol) {
        return Err(Error::NotSymmetric);
    }
    let quantitative = check_quantitative_theorem_with(&sym(&model.operator_a), &sym(b), lambda1, &d, &cfg)?;

    let g = &model.operator_a + b;
    let report = classify_semigroup_with(&g, &cfg)?;
    let dom = dominant_eigendata(&g, &cfg)?;
    let big = dom.right.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let lo = dom.right.iter().copied().fold(f64::INFINITY, f64::min);
    let t_max = 50.0 / dom.gap.max(1e-3);
    let probe_times = [0, n / 2, n - 1]
        .into_iter()
        .map(|index| {
            let time = positivity_time_with(&g, &unit(n, index), t_max, cfg.time_mesh_points, true, &cfg)?;
            Ok(ProbeTime { index, time })
        })
        .collect::<Result<_>>()?;
    Ok(HilbertReport {
        n,
        lambda1,
        b_weighted_norm: bc.operator_norm(),
        quantitative,
        verdict: report.verdict,
        metzler: is_metzler(&g, cfg.positivity_tol)?,
        eigenvector_margin: lo / big,
        probe_times,
    })
}
