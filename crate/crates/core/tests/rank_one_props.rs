mod common;

use common::{counterexample, real_matrix, rel_err, runner};
use evpos::linalg::{eigensystem, expm, real_vec, resolvent, spectral_projection, DenseMatrix};
use evpos::positivity::{classify_semigroup, positivity_time, Verdict};
use evpos::random::{rng, symmetric_nonneg};
use evpos::rank_one::{
    build_destroyer, destroyer_scan, resolvent_rank1, resolvent_rank1_eigen, semigroup_rank1, DEFAULT_MU_OFFSETS,
};
use evpos::{Error, Rank1};
use num_complex::Complex64;
use proptest::prelude::*;

fn instance() -> impl Strategy<Value = (DenseMatrix, Vec<f64>, Vec<f64>)> {
    (2usize..=8).prop_flat_map(|n| {
        (
            real_matrix(n, -1.0, 1.0),
            prop::collection::vec(-1.0..1.0f64, n),
            prop::collection::vec(-1.0..1.0f64, n),
        )
    })
}

/// `A` with the prescribed eigenpair `Av = λ₀v`.
fn with_eigenpair(b: &DenseMatrix, v: &[f64], lambda0: f64) -> DenseMatrix {
    let vc = real_vec(v);
    let bv = b.mul_vec(&vc);
    let nv: f64 = v.iter().map(|x| x * x).sum();
    let defect: Vec<Complex64> = bv.iter().zip(&vc).map(|(x, y)| (x - y * lambda0) / nv).collect();
    b - &DenseMatrix::outer(&defect, &vc)
}

proptest! {
    #![proptest_config(runner(500))]

    #[test]
    fn sherman_morrison((a, phi, v) in instance(), im in -2.0..2.0f64) {
        let p = Rank1::new(real_vec(&phi), real_vec(&v)).unwrap();
        let shift = a.operator_norm() + p.norm() + 1.0;
        let lambda = Complex64::new(shift, im);
        let direct = resolvent(&(&a + &p.matrix()), lambda).unwrap();
        let formula = resolvent_rank1(&a, lambda, &p).unwrap();
        let err = rel_err(&formula, &direct);
        prop_assert!(err <= 1e-9, "relative error {err:e}");
    }
}

proptest! {
    #![proptest_config(runner(100))]

    #[test]
    fn eigen_formula_matches_general(
        b in real_matrix(5, -1.0, 1.0),
        v in prop::collection::vec(0.1..1.0f64, 5),
        phi in prop::collection::vec(-1.0..1.0f64, 5),
        lambda0 in -1.0..1.0f64,
        im in -1.0..1.0f64,
    ) {
        let a = with_eigenpair(&b, &v, lambda0);
        let p = Rank1::new(real_vec(&phi), real_vec(&v)).unwrap();
        let lambda = Complex64::new(a.operator_norm() + p.norm() + 1.0, im);
        let general = resolvent_rank1(&a, lambda, &p).unwrap();
        let special = resolvent_rank1_eigen(&a, lambda, &p, Complex64::new(lambda0, 0.0)).unwrap();
        prop_assert!(rel_err(&special, &general) <= 1e-9);
    }

    #[test]
    fn rank_one_semigroup_law(
        b in real_matrix(4, -1.0, 1.0),
        v in prop::collection::vec(0.1..1.0f64, 4),
        phi in prop::collection::vec(-1.0..1.0f64, 4),
        lambda0 in -1.0..0.0f64,
        (s, t) in (0.0..2.0f64, 0.0..2.0f64),
    ) {
        let a = with_eigenpair(&b, &v, lambda0);
        let p = Rank1::new(real_vec(&phi), real_vec(&v)).unwrap();
        let mu = Complex64::new(lambda0 + phi.iter().zip(&v).map(|(x, y)| x * y).sum::<f64>(), 0.0);
        let es = eigensystem(&a).unwrap();
        prop_assume!(es.eigenvalues.iter().all(|z| (z - mu).norm() > 0.1));
        let l0 = Complex64::new(lambda0, 0.0);
        let f = |t: f64| semigroup_rank1(&a, t, &p, l0).unwrap();
        let product = &f(s) * &f(t);
        prop_assert!(rel_err(&product, &f(s + t)) <= 1e-8);
        let oracle = expm(&(&a + &p.matrix()), t).unwrap();
        prop_assert!(rel_err(&f(t), &oracle) <= 1e-8);
    }

    /// As `λ` approaches a point of `σ(A + vφ)`, the defect `1 − ⟨φ, R(λ)v⟩`
    /// and the smallest singular value of `λ − A − vφ` vanish together.
    #[test]
    fn defect_tracks_conditioning(
        a in real_matrix(4, -1.0, 1.0),
        v in prop::collection::vec(-1.0..1.0f64, 4),
        phi in prop::collection::vec(-1.0..1.0f64, 4),
    ) {
        let p = Rank1::new(real_vec(&phi), real_vec(&v)).unwrap();
        let perturbed = &a + &p.matrix();
        let sa = eigensystem(&a).unwrap();
        let sp = eigensystem(&perturbed).unwrap();
        let target = sp.eigenvalues.iter().copied().find(|z| {
            z.im.abs() < 1e-12 && sa.eigenvalues.iter().all(|w| (w - z).norm() > 0.2) && sp.separation(sp.nearest(*z)) > 0.2
        });
        prop_assume!(target.is_some());
        let mu = target.unwrap();
        let ratio = |d: f64| {
            let lambda = mu + d;
            let r = resolvent(&a, lambda).unwrap();
            let c = evpos::linalg::pair(&p.functional(), &r.mul_vec(&p.v));
            (Complex64::new(1.0, 0.0) - c).norm() / perturbed.shift(-lambda).min_singular_value()
        };
        let base = ratio(1e-2);
        for k in 3..=7 {
            let q = ratio(10f64.powi(-k)) / base;
            prop_assert!(q > 0.1 && q < 10.0, "ratio drift {q} at 1e-{k}");
        }
        let at_pole = matches!(resolvent_rank1(&a, mu, &p), Err(Error::PerturbedSpectrum { .. }));
        prop_assert!(at_pole);
    }
}

proptest! {
    #![proptest_config(runner(24))]

    /// Every mixed-sign destroyer found on a perturbed counterexample leaves
    /// some strictly positive orbit negative at the end of the horizon.
    #[test]
    fn destroyer_soundness(seed in any::<u64>(), size in 0.0..0.3f64) {
        let (a0, _) = counterexample();
        let a = &a0 + &symmetric_nonneg(&mut rng(seed), 3, size);
        let scan = destroyer_scan(&a, &DEFAULT_MU_OFFSETS, &[]).unwrap();
        let Some(d) = scan.destroyer else {
            return Err(TestCaseError::reject("no destroyer"));
        };
        let perturbed = &a + &d.perturbation.matrix();
        let es = eigensystem(&perturbed).unwrap();
        prop_assert!((es.eigenvalues[0].re - d.mu).abs() <= 1e-9 * d.mu.abs().max(1.0));
        let contour = spectral_projection(&perturbed, Complex64::new(d.mu, 0.0), 0.5 * es.separation(0), 128).unwrap();
        prop_assert!((&contour - &d.projection).operator_norm() <= 1e-8 * d.projection.operator_norm());
        prop_assert_eq!(classify_semigroup(&perturbed).unwrap().verdict, Verdict::NotEventuallyPositive);

        let q = &d.left_factor;
        let (k, qmin) = q.iter().copied().enumerate().min_by(|x, y| x.1.total_cmp(&y.1)).unwrap();
        let qabs: f64 = q.iter().map(|x| x.abs()).sum();
        let delta = 0.5 * qmin.abs() / qabs;
        let f: Vec<f64> = (0..3).map(|i| if i == k { 1.0 } else { 0.0 } + delta).collect();
        prop_assert!(q.iter().zip(&f).map(|(x, y)| x * y).sum::<f64>() < 0.0);
        let t_max = 60.0 / es.real_gap(0);
        prop_assert_eq!(positivity_time(&perturbed, &real_vec(&f), t_max, 256).unwrap(), None);
    }
}

#[test]
fn destroyer_on_counterexample() {
    let (a, _) = counterexample();
    let d = build_destroyer(&a, 1.0, &[0.0, 1.0, 0.0]).unwrap();
    assert!((d.perturbation.alpha - 1.0).abs() < 1e-12);
    let es = eigensystem(&(&a + &d.perturbation.matrix())).unwrap();
    assert!((es.eigenvalues[0].re - 1.0).abs() < 1e-12);
}
