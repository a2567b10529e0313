mod common;

use common::runner;
use evpos::linalg::{eigensystem, DenseMatrix};
use evpos::models::{cyclic, nonlocal_laplacian, positive_family, reflection_interval};
use evpos::positivity::dominant_eigendata;
use evpos::Config;
use proptest::prelude::*;

fn odd_n() -> impl Strategy<Value = usize> {
    (1usize..=50).prop_map(|k| 2 * k + 1)
}

proptest! {
    #![proptest_config(runner(32))]

    #[test]
    fn builders_are_deterministic(n in odd_n(), m in 8usize..64) {
        let (r1, r2) = (reflection_interval(n).unwrap(), reflection_interval(n).unwrap());
        prop_assert_eq!(serde_json::to_string(&r1).unwrap(), serde_json::to_string(&r2).unwrap());
        prop_assert_eq!(r1, r2);
        prop_assert_eq!(nonlocal_laplacian(m).unwrap(), nonlocal_laplacian(m).unwrap());
        prop_assert_eq!(cyclic(m).unwrap(), cyclic(m).unwrap());
    }

    #[test]
    fn model_fields(n in odd_n(), m in 8usize..64) {
        for (model, length) in [(reflection_interval(n).unwrap(), 2.0), (nonlocal_laplacian(m).unwrap(), 1.0)] {
            prop_assert!(model.operator_a.max_imag() == 0.0);
            prop_assert!(model.quadrature_weights.iter().all(|&w| w > 0.0));
            let total: f64 = model.quadrature_weights.iter().sum();
            prop_assert!((total - length).abs() <= 1e-13);
            prop_assert!((model.integrate(&vec![1.0; model.n]) - length).abs() <= 1e-13);
        }
    }

    /// `[A, S](I − Π) = 0` in floating point.
    #[test]
    fn reflection_commutes_off_the_mean(n in odd_n()) {
        let m = reflection_interval(n).unwrap();
        let s = DenseMatrix::from_real_fn(n, |i, j| if i + j == n - 1 { 1.0 } else { 0.0 }).unwrap();
        let w = &m.quadrature_weights;
        let pi = DenseMatrix::from_real_fn(n, |_, j| 0.5 * w[j]).unwrap();
        let a = &m.operator_a;
        let commutator = &(&(a * &s) - &(&s * a)) * &(&DenseMatrix::identity(n) - &pi);
        prop_assert_eq!(commutator.max_abs(), 0.0);
    }

    #[test]
    fn nonlocal_self_adjoint_for_weights(n in 8usize..64) {
        let m = nonlocal_laplacian(n).unwrap();
        let (a, w) = (&m.operator_a, &m.quadrature_weights);
        let wa = DenseMatrix::from_real_fn(n, |i, j| w[i] * a.get(i, j).re).unwrap();
        prop_assert!((&wa - &wa.transpose()).max_abs() <= 1e-13 * wa.max_abs());
        let es = eigensystem(a).unwrap();
        let imag = es.eigenvalues.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
        prop_assert!(imag <= 1e-8 * es.matrix_norm, "imaginary part {imag:e}");
    }

    #[test]
    fn nonlocal_dominant_vector_positive(n in 8usize..=128) {
        let m = nonlocal_laplacian(n).unwrap();
        let dom = dominant_eigendata(&m.operator_a, &Config::default()).unwrap();
        prop_assert!(dom.right.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn family_members_are_positive_generators(a in 0.01..5.0f64, s in 0.01..5.0f64) {
        let c = positive_family(a, s).unwrap();
        prop_assert!(evpos::positivity::is_metzler(&c, 1e-10).unwrap());
    }
}

/// Dominant eigenpair of the non-local Laplacian on nested grids `n → 2n → 4n`.
#[test]
fn nonlocal_refinement_order() {
    let sizes = [17, 33, 65, 129];
    let data: Vec<_> = sizes
        .iter()
        .map(|&n| {
            let m = nonlocal_laplacian(n).unwrap();
            let dom = dominant_eigendata(&m.operator_a, &Config::default()).unwrap();
            // restricted to the coarsest grid, normalized at the left end
            let stride = (n - 1) / 16;
            let v: Vec<f64> = (0..17).map(|i| dom.right[i * stride] / dom.right[0]).collect();
            (dom.eigenvalue, v)
        })
        .collect();
    let value_diff: Vec<f64> = data.windows(2).map(|w| (w[1].0 - w[0].0).abs()).collect();
    let vector_diff: Vec<f64> = data
        .windows(2)
        .map(|w| w[1].1.iter().zip(&w[0].1).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max))
        .collect();
    for diffs in [&value_diff, &vector_diff] {
        for w in diffs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!(order >= 1.0, "differences {diffs:?}");
        }
    }
}
