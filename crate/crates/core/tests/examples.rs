//! Worked examples for each public operation.

mod common;

use common::{counterexample, rel_err};
use evpos::linalg::{
    eigensystem, expm, expm_eigen, ones, operator_norm, real_vec, resolvent, spectral_projection, unit, DenseMatrix,
};
use evpos::models::{
    build_f_epsilon, cyclic, demo_hilbert_quantitative, demo_small_perturbation, negative_family_boundary,
    nonlocal_laplacian, positive_family, reflection_interval, FAMILY_PROBE_S,
};
use evpos::perturbation::{
    certify_multiplication_perturbation, certify_resolvent_perturbation, check_quantitative_theorem, eigencurve,
    eigenvalue_radius, halfplane_sup_norm, neumann_resolvent, openness_probe, projection_continuity, Gauge,
    HalfplaneStrategy,
};
use evpos::positivity::{
    classify_resolvent_at, classify_semigroup, is_metzler, is_nonneg, is_strongly_positive, neumann_extension_check,
    positivity_time, Verdict,
};
use evpos::rank_one::{destroyer_scan, resolvent_rank1, resolvent_rank1_eigen, semigroup_rank1};
use evpos::{ConeVector, Error, Rank1};
use num_complex::Complex64;

const TAU: f64 = 1e-10;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn diag(d: &[f64]) -> DenseMatrix {
    DenseMatrix::from_real_diagonal(d)
}

#[test]
fn resolvent_cases() {
    assert_eq!(resolvent(&DenseMatrix::zeros(2), c(1.0)).unwrap(), DenseMatrix::identity(2));
    let (a, _) = counterexample();
    let r = resolvent(&a, c(1.0)).unwrap();
    let defect = &(&r * &DenseMatrix::identity(3).shift(c(0.0)).shift_real(0.0)) * &(&DenseMatrix::identity(3) - &a);
    assert!((&defect - &DenseMatrix::identity(3)).max_abs() <= 1e-12);
    let r = resolvent(&diag(&[0.0, -1.0, -9.0]), c(2.0)).unwrap();
    assert!((&r - &diag(&[0.5, 1.0 / 3.0, 1.0 / 11.0])).max_abs() <= 1e-15);
}

#[test]
fn expm_cases() {
    assert_eq!(expm(&DenseMatrix::from_real_rows(&[[1.0, 2.0], [3.0, 4.0]]).unwrap(), 0.0).unwrap(), DenseMatrix::identity(2));
    let n = DenseMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
    let e = expm(&n, 1.0).unwrap();
    assert!((&e - &DenseMatrix::from_real_rows(&[[1.0, 1.0], [0.0, 1.0]]).unwrap()).max_abs() <= 1e-15);
    let (a, _) = counterexample();
    assert!(rel_err(&expm_eigen(&a, 1.0).unwrap(), &expm(&a, 1.0).unwrap()) <= 1e-10);
}

#[test]
fn operator_norm_cases() {
    assert!((operator_norm(&DenseMatrix::identity(3)) - 1.0).abs() <= 1e-15);
    assert!((operator_norm(&diag(&[0.5, 1.0 / 3.0, 1.0 / 11.0])) - 0.5).abs() <= 1e-15);
    let v = real_vec(&[1.0, -2.0, 2.0]);
    let w = real_vec(&[3.0, 4.0, 0.0]);
    let m = DenseMatrix::outer(&v, &w);
    // power iteration on MᴴM
    let mhm = &m.adjoint() * &m;
    let mut x = real_vec(&[1.0, 1.0, 1.0]);
    let mut rho = 0.0;
    for _ in 0..50 {
        let y = mhm.mul_vec(&x);
        rho = y.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        x = y.iter().map(|z| z / rho).collect();
    }
    assert!((m.operator_norm() - 15.0).abs() <= 1e-12);
    assert!((m.operator_norm() - rho.sqrt()).abs() <= 1e-10 * 15.0);
}

#[test]
fn eigensystem_cases() {
    let (a, b) = counterexample();
    let sorted = |m: &DenseMatrix| {
        let mut v: Vec<f64> = eigensystem(m).unwrap().eigenvalues.iter().map(|z| z.re).collect();
        v.sort_by(|x, y| y.total_cmp(x));
        v
    };
    for (x, e) in sorted(&a).iter().zip([0.0, -1.0, -9.0]) {
        assert!((x - e).abs() <= 1e-10);
    }
    let r65 = 65f64.sqrt();
    for (x, e) in sorted(&(&a + &b.scale(4.0))).iter().zip([3.0, -(9.0 - r65) / 2.0, -(9.0 + r65) / 2.0]) {
        assert!((x - e).abs() <= 1e-10);
    }
    let es = eigensystem(&diag(&[5.0, 1.0])).unwrap();
    assert_eq!(es.eigenvalues, vec![c(5.0), c(1.0)]);
    for (k, v) in es.right_vectors.iter().enumerate() {
        assert!((v[k].norm() - 1.0).abs() <= 1e-15 && v[1 - k].norm() <= 1e-15);
    }
}

#[test]
fn spectral_projection_cases() {
    let p = spectral_projection(&diag(&[1.0, 0.0]), c(1.0), 0.5, 128).unwrap();
    assert!((&p - &diag(&[1.0, 0.0])).max_abs() <= 1e-12);
    let (a, _) = counterexample();
    let p = spectral_projection(&a, c(0.0), 0.5, 128).unwrap();
    assert!((&p - &DenseMatrix::from_real_fn(3, |_, _| 1.0 / 3.0).unwrap()).max_abs() <= 1e-12);
    assert!(matches!(spectral_projection(&a, c(0.0), 1.0, 128), Err(Error::ContourTooClose { .. })));
}

#[test]
fn cone_predicates() {
    assert!(is_nonneg(&real_vec(&[1.0, 0.0, 2.0]), TAU).unwrap());
    assert!(is_nonneg(&real_vec(&[1.0, -1e-12, 2.0]), TAU).unwrap());
    let v = ConeVector::from_real(&[0.0, 3.0, 1.0]);
    assert!(is_nonneg(&v.entries, TAU).unwrap());
    assert!(!is_strongly_positive(&v, TAU).unwrap());
    assert!(is_strongly_positive(&ConeVector::from_real(&[1.0; 3]), TAU).unwrap());
    let u1 = 1.0 / 3f64.sqrt();
    assert!(is_strongly_positive(&ConeVector::from_real(&[u1; 3]), TAU).unwrap());
    assert!(matches!(is_nonneg(&[Complex64::new(1.0, 1e-3)], TAU), Err(Error::NotReal { .. })));
}

#[test]
fn metzler_and_classification() {
    let (a, b) = counterexample();
    assert!(!is_metzler(&a, TAU).unwrap());
    assert!(is_metzler(&positive_family(0.3, 2.0).unwrap(), TAU).unwrap());
    assert!(is_metzler(&diag(&[-4.0, 7.0, 0.0]), TAU).unwrap());
    assert_eq!(classify_semigroup(&a).unwrap().verdict, Verdict::EventuallyStronglyPositive);
    assert_eq!(classify_semigroup(&(&a + &b.scale(4.05))).unwrap().verdict, Verdict::NotEventuallyPositive);
    assert_eq!(classify_semigroup(&positive_family(1.0, 1.0).unwrap()).unwrap().verdict, Verdict::Positive);
}

#[test]
fn resolvent_classification() {
    let (a, b) = counterexample();
    let r = classify_resolvent_at(&a, 0.0).unwrap();
    assert_eq!(r.verdict, Verdict::EventuallyStronglyPositive);
    assert!(r.certified_lambda1.is_some_and(|l| l > 0.0));
    assert_ne!(classify_resolvent_at(&diag(&[0.0, -1.0]), 0.0).unwrap().verdict, Verdict::EventuallyStronglyPositive);
    assert_ne!(classify_resolvent_at(&(&a + &b.scale(4.0)), 3.0).unwrap().verdict, Verdict::EventuallyStronglyPositive);
}

#[test]
fn neumann_extension_cases() {
    let (a, _) = counterexample();
    assert!(neumann_extension_check(&a, 0.0, 0.5, &[1.0; 3]).unwrap());
    for l in [0.1, 0.25, 0.4] {
        assert!(resolvent(&a, c(l)).unwrap().min_real_entry() > 0.0);
    }
    assert!(!neumann_extension_check(&diag(&[0.0, -1.0]), 0.0, 0.5, &[1.0; 2]).unwrap());
    // an irreducible non-negative resolvent: the cyclic generator
    let (cy, _) = cyclic(4).unwrap();
    assert!(neumann_extension_check(&cy, 1.0, 1.5, &[1.0; 4]).unwrap());
}

#[test]
fn positivity_time_cases() {
    let m = positive_family(0.5, 1.0).unwrap();
    assert_eq!(positivity_time(&m, &real_vec(&[1.0, 0.0, 2.0]), 10.0, 256).unwrap(), Some(0.0));
    let (a, b) = counterexample();
    let t0 = positivity_time(&a, &unit(3, 0), 50.0, 256).unwrap();
    assert!(t0.is_some_and(|t| t > 0.0 && t < 50.0));
    let neg = &a + &b.scale(4.05);
    assert_eq!(positivity_time(&neg, &real_vec(&[1.0, 0.1, 1.0]), 500.0, 256).unwrap(), None);
}

#[test]
fn rank_one_resolvent_cases() {
    let (a, _) = counterexample();
    let zero = Rank1::zero(3);
    assert_eq!(resolvent_rank1(&a, c(1.0), &zero).unwrap(), resolvent(&a, c(1.0)).unwrap());
    let scalar = Rank1::new(vec![c(1.0)], vec![c(1.0)]).unwrap();
    let r = resolvent_rank1(&DenseMatrix::zeros(1), c(2.0), &scalar).unwrap();
    assert!((r.get(0, 0) - c(1.0)).norm() <= 1e-15);
    let p = Rank1::new(real_vec(&[0.2, -0.4, 0.7]), ones(3)).unwrap();
    let direct = resolvent(&(&a + &p.matrix()), c(2.0)).unwrap();
    assert!(rel_err(&resolvent_rank1(&a, c(2.0), &p).unwrap(), &direct) <= 1e-10);
    let eig = resolvent_rank1_eigen(&a, c(2.0), &p, c(0.0)).unwrap();
    assert!(rel_err(&eig, &direct) <= 1e-10);
    assert!(matches!(
        resolvent_rank1_eigen(&a, c(2.0), &Rank1::new(ones(3), unit(3, 0)).unwrap(), c(0.0)),
        Err(Error::NotAnEigenvector { .. })
    ));
}

#[test]
fn rank_one_semigroup_cases() {
    let (a, _) = counterexample();
    let p = Rank1::new(real_vec(&[0.3, 0.1, 0.2]), ones(3)).unwrap();
    assert!((&semigroup_rank1(&a, 0.0, &p, c(0.0)).unwrap() - &DenseMatrix::identity(3)).max_abs() <= 1e-14);
    let no_phi = Rank1::new(vec![c(0.0); 3], ones(3)).unwrap();
    assert_eq!(semigroup_rank1(&a, 1.0, &no_phi, c(0.0)).unwrap(), expm(&a, 1.0).unwrap());
    for t in [0.1, 1.0, 5.0] {
        let f = semigroup_rank1(&a, t, &p, c(0.0)).unwrap();
        assert!(rel_err(&f, &expm(&(&a + &p.matrix()), t).unwrap()) <= 1e-9);
    }
}

#[test]
fn destroyer_scan_cases() {
    let (a, _) = counterexample();
    let scan = destroyer_scan(&a, &[1.0, 2.0, 4.0, 8.0], &[]).unwrap();
    let d = scan.destroyer.expect("destroyer for the counterexample");
    assert!(d.mixed_sign);
    assert_eq!(classify_semigroup(&(&a + &d.perturbation.matrix())).unwrap().verdict, Verdict::NotEventuallyPositive);
    let (cy, _) = cyclic(5).unwrap();
    assert!(destroyer_scan(&cy, &[0.5, 1.0, 2.0], &[]).unwrap().destroyer.is_none());
    let m = positive_family(0.5, 2.0).unwrap();
    let scan = destroyer_scan(&m, &[0.5, 1.0, 2.0], &[]).unwrap();
    assert!(scan.destroyer.is_none() && scan.entries.iter().all(|e| e.min_entry >= 0.0));
}

#[test]
fn radius_cases() {
    let d = diag(&[1.0, -1.0]);
    let eps = eigenvalue_radius(&d, 1.0, 1.0, 4096).unwrap();
    assert!((eps - 1.0).abs() <= 1e-6);
    let (a, _) = counterexample();
    let eps = eigenvalue_radius(&a, 0.0, 0.5, 128).unwrap();
    assert!(eps > 0.0);
    let scaled = eigenvalue_radius(&a.scale(3.0), 0.0, 1.5, 128).unwrap();
    assert!((scaled - 3.0 * eps).abs() <= 1e-12 * scaled);
}

#[test]
fn neumann_series_cases() {
    let (a, _) = counterexample();
    let n = neumann_resolvent(&a, &DenseMatrix::zeros(3), c(1.0), 5).unwrap();
    assert_eq!(n.truncation_bound, 0.0);
    assert!((&n.matrix - &resolvent(&a, c(1.0)).unwrap()).max_abs() <= 1e-15);
    let b = DenseMatrix::from_real_fn(3, |_, _| 0.1).unwrap();
    let n = neumann_resolvent(&a, &b, c(1.0), 12).unwrap();
    assert!((&n.matrix - &resolvent(&(&a + &b), c(1.0)).unwrap()).operator_norm() <= n.truncation_bound + 1e-14);
    assert!(matches!(neumann_resolvent(&a, &b.scale(20.0), c(1.0), 3), Err(Error::SeriesDiverges { .. })));
}

#[test]
fn certificate_cases() {
    let (a, _) = counterexample();
    let zero = certify_resolvent_perturbation(&a, 0.0, 0.5, &DenseMatrix::zeros(3)).unwrap();
    assert!(zero.lambda_b.abs() <= 1e-12 && zero.projection_drift <= 1e-10);
    let b = DenseMatrix::from_real_fn(3, |i, j| 0.01 * (1 + i + 2 * j) as f64).unwrap();
    let cert = certify_resolvent_perturbation(&a, 0.0, 0.5, &b.scale(0.5 * zero.epsilon / b.operator_norm())).unwrap();
    assert!(cert.simple && cert.lambda_b.abs() < 0.5 && cert.monotonicity_margin >= 0.0);
    let shift = certify_multiplication_perturbation(&a, 0.0, 0.5, &diag(&[0.05; 3])).unwrap();
    assert!((shift.lambda_b - 0.05).abs() <= 1e-12);
    let mixed = certify_multiplication_perturbation(&a, 0.0, 0.5, &diag(&[0.01, -0.01, 0.0])).unwrap();
    assert!(mixed.simple && mixed.lambda_b.is_finite());
}

#[test]
fn halfplane_and_quantitative_cases() {
    let d = diag(&[0.0, -1.0]);
    assert!((halfplane_sup_norm(&d, 1.0, HalfplaneStrategy::Symmetric).unwrap().m - 1.0).abs() <= 1e-12);
    let (a, _) = counterexample();
    let m = halfplane_sup_norm(&a, 0.5, HalfplaneStrategy::Symmetric).unwrap().m;
    assert!((m - 2.0).abs() <= 1e-12);
    let sampled = halfplane_sup_norm(&a, 0.5, HalfplaneStrategy::Sampled).unwrap();
    assert!(sampled.lower_bound_only && (sampled.m - m).abs() <= 0.01 * m);

    let zero = check_quantitative_theorem(&a, &DenseMatrix::zeros(3), 0.5, &[1.0; 3]).unwrap();
    assert!(zero.all_hold && (zero.spectral_bound_ak - zero.spectral_bound_a).abs() <= 1e-12);
    let k = DenseMatrix::from_real_fn(3, |_, _| 1.0).unwrap();
    let k = k.scale(0.9 / m / k.operator_norm());
    assert!(check_quantitative_theorem(&a, &k, 0.5, &[1.0; 3]).unwrap().all_hold);
}

#[test]
fn eigencurve_cases() {
    let (a, b) = counterexample();
    let p = &eigencurve(&a, &b, &[4.0], Gauge::FixedComponent(2)).unwrap()[0];
    assert!((p.dlambda_ds - 0.9).abs() <= 1e-10);
    for (x, e) in p.du_ds.iter().zip([-3.0 / 40.0, 3.0 / 8.0, 0.0]) {
        assert!((x - e).abs() <= 1e-10);
    }
    // continuation oracle with the same gauge
    let h = 1e-4;
    let pts = eigencurve(&a, &b, &[4.0 - h, 4.0 + h], Gauge::FixedComponent(2)).unwrap();
    for (i, e) in p.du_ds.iter().enumerate() {
        assert!(((pts[1].u_s[i] - pts[0].u_s[i]) / (2.0 * h) - e).abs() <= 1e-5);
    }
    for q in eigencurve(&a, &DenseMatrix::zeros(3), &[0.0, 1.0], Gauge::LargestComponent).unwrap() {
        assert_eq!(q.dlambda_ds, 0.0);
        assert!(q.du_ds.iter().all(|x| x.abs() <= 1e-14));
    }
}

#[test]
fn openness_and_continuity_cases() {
    let (a, _) = counterexample();
    assert_eq!(openness_probe(&a, 10, 0.0, 1).unwrap().fraction, 1.0);
    assert_eq!(openness_probe(&a, 200, 0.5, 7).unwrap().fraction, 1.0);
    let (cy, b) = cyclic(3).unwrap();
    let p = &cy + &b.scale(0.01);
    assert!(!is_metzler(&p, TAU).unwrap());
    assert_eq!(classify_semigroup(&p).unwrap().verdict, Verdict::EventuallyStronglyPositive);

    let rows = projection_continuity(&a, &DenseMatrix::zeros(3), &[1.0, 0.5]).unwrap();
    assert!(rows.iter().all(|r| r.norm == 0.0 && r.eigenvalue_drift <= 1e-12 && r.projection_drift <= 1e-12));
    let scales: Vec<f64> = (1..8).map(|k| 2f64.powi(-k)).collect();
    // the all-ones direction commutes with A: only the eigenvalue moves
    let rows = projection_continuity(&a, &DenseMatrix::from_real_fn(3, |_, _| 1.0).unwrap(), &scales).unwrap();
    assert!(rows.iter().all(|r| (r.eigenvalue_drift - 3.0 * r.scale).abs() <= 1e-12 && r.projection_drift <= 1e-12));
    let (_, b) = counterexample();
    let rows = projection_continuity(&a, &b, &scales).unwrap();
    assert!(rows.windows(2).all(|w| w[1].projection_drift < w[0].projection_drift));
    assert!(rows.iter().all(|r| r.projection_drift / r.norm < 10.0 && r.eigenvalue_drift / r.norm < 10.0));
}

#[test]
fn model_cases() {
    let boundary = negative_family_boundary(FAMILY_PROBE_S).unwrap();
    assert_eq!(boundary.verdict_at_zero, Verdict::NotEventuallyPositive);
    assert!(boundary.a_chosen > 0.0 && boundary.verdict_at_chosen == Verdict::NotEventuallyPositive);

    let m = reflection_interval(41).unwrap();
    let es = eigensystem(&m.operator_a).unwrap();
    assert!(es.eigenvalues.iter().all(|z| [0.0, -1.0, -3.0].iter().any(|e| (z - c(*e)).norm() <= 1e-10)));
    let f = build_f_epsilon(&m, 0.1).unwrap();
    assert_eq!((f.values[0], f.values[40]), (0.0, 1.0));

    let unperturbed = demo_small_perturbation(&m, 0.0, 0.1, &[1.0, 10.0, 50.0]).unwrap();
    assert!(unperturbed.positivity_time.is_some());
    let m = reflection_interval(101).unwrap();
    let r = demo_small_perturbation(&m, 0.1, 0.02, &[1.0, 50.0, 200.0]).unwrap();
    assert!(r.terminal_negative && r.terminal_error <= 1e-6);

    for n in [16, 32, 64] {
        let nl = nonlocal_laplacian(n).unwrap();
        assert!(eigensystem(&nl.operator_a).unwrap().spectral_bound() < 0.0);
        let r0 = resolvent(&nl.operator_a, c(0.0)).unwrap().scale(-1.0);
        assert!(r0.operator_norm() <= 1.0 + 10.0 / n as f64);
    }
    let nl = nonlocal_laplacian(24).unwrap();
    let zero = demo_hilbert_quantitative(&nl, &DenseMatrix::zeros(24), 0.0).unwrap();
    assert_eq!(zero.verdict, Verdict::EventuallyStronglyPositive);
    assert!(!zero.metzler);
    let shifted = demo_hilbert_quantitative(&nl, &DenseMatrix::identity(24).scale(0.5), 0.0).unwrap();
    assert_eq!(shifted.verdict, Verdict::EventuallyStronglyPositive);
    assert!((shifted.quantitative.spectral_bound_ak - zero.quantitative.spectral_bound_ak - 0.5).abs() <= 1e-9);
}
