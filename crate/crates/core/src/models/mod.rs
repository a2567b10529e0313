//! Concrete generators: the 3×3 counterexample and its positive family,
//! the cyclic example, and grid discretizations of two operators on intervals.

mod counterexample;
mod cyclic;
mod nonlocal;
mod reflection;

use num_complex::Complex64;
use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::linalg::DenseMatrix;
use crate::positivity::ConeVector;

pub use counterexample::{
    counterexample_3d, negative_family_boundary, positive_family, FamilyBoundary, FAMILY_PROBE_S,
};
pub use cyclic::{cyclic, cyclic_border};
pub use nonlocal::{
    demo_hilbert_quantitative, from_weighted_symmetric, nonlocal_kernel, nonlocal_laplacian, random_hilbert_perturbation,
    weighted_norm, HilbertReport, ProbeTime,
};
pub use reflection::{
    build_f_epsilon, demo_small_perturbation, reflection_boundary_value, reflection_interval, FEpsilon,
    SmallPerturbationReport, TrajectoryRow,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    ReflectionInterval,
    NonlocalLaplacian,
}

/// A generator sampled on an interval grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscretizedModel {
    pub kind: ModelKind,
    pub n: usize,
    pub grid: Vec<f64>,
    /// The semigroup generator on the grid.
    #[serde(serialize_with = "matrix_json")]
    pub operator_a: DenseMatrix,
    pub cone_u: ConeVector,
    /// Trapezoid weights; they sum to the interval length.
    pub quadrature_weights: Vec<f64>,
}

fn matrix_json<S: Serializer>(m: &DenseMatrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    m.to_json().serialize(s)
}

impl DiscretizedModel {
    /// `⟨w, f⟩` with the trapezoid weights.
    pub fn integrate(&self, f: &[f64]) -> f64 {
        self.quadrature_weights.iter().zip(f).map(|(w, x)| w * x).sum()
    }

    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.grid.iter().map(|&x| f(x)).collect()
    }

    /// Closed-form resolvent applied to `f`, evaluated at the grid nodes.
    ///
    /// The reflection model accepts any `λ ∉ {0, −1, −3}` and uses only the
    /// samples of `f`. The non-local Laplacian supports `λ = 0` only and
    /// integrates `f` on a much finer grid.
    pub fn oracle(&self, lambda: f64, f: &dyn Fn(f64) -> f64) -> Result<Vec<f64>> {
        match self.kind {
            ModelKind::ReflectionInterval => reflection::oracle(self, lambda, &self.sample(f)),
            ModelKind::NonlocalLaplacian => {
                if lambda != 0.0 {
                    return Err(crate::Error::PreconditionFailed(
                        "the kernel formula is only available at lambda = 0".into(),
                    ));
                }
                Ok(nonlocal_kernel(f, self.n))
            }
        }
    }
}

/// `h·(½, 1, …, 1, ½)`, exactly symmetric under reversal.
pub(crate) fn uniform_trapezoid(n: usize, h: f64) -> Vec<f64> {
    (0..n).map(|i| if i == 0 || i == n - 1 { 0.5 * h } else { h }).collect()
}

pub(crate) fn as_complex(x: &[f64]) -> Vec<Complex64> {
    crate::linalg::real_vec(x)
}
