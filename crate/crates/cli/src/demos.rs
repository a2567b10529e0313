use clap::ValueEnum;
use serde::Serialize;

use evpos::linalg::{eigensystem_with, expm, real_vec, resolvent_real, scalars_to_json, DenseMatrix, ScalarJson};
use evpos::models::{
    counterexample_3d, cyclic, demo_hilbert_quantitative, demo_small_perturbation, negative_family_boundary,
    nonlocal_kernel, nonlocal_laplacian, random_hilbert_perturbation, reflection_interval, weighted_norm,
    FamilyBoundary, HilbertReport, SmallPerturbationReport, FAMILY_PROBE_S,
};
use evpos::perturbation::{eigencurve_with, EigenCurvePoint, Gauge};
use evpos::positivity::{classify_semigroup_with, is_metzler, time_mesh, PositivityReport};
use evpos::random::rng;
use evpos::{Config, Verdict};

use crate::args::{DemoArgs, DemoId, SRange};
use crate::commands::{curve_table, range_points};
use crate::error::CliError;
use crate::output::{Report, Table};

/// Largest grid accepted by the grid demos.
const MAX_GRID: usize = 1025;

#[derive(Serialize)]
struct DemoEntry {
    id: String,
    description: &'static str,
}

pub fn list() -> Report {
    let entries: Vec<DemoEntry> = DemoId::value_variants()
        .iter()
        .map(|d| DemoEntry {
            id: d.to_possible_value().expect("named variant").get_name().to_string(),
            description: d.describe(),
        })
        .collect();
    let mut t = Table::new(&["id", "description"]);
    for e in &entries {
        t.rows.push(vec![e.id.clone(), e.description.to_string()]);
    }
    Report::new(&entries).with_table(t)
}

fn grid(args: &DemoArgs, default: usize) -> Result<usize, CliError> {
    let n = args.grid_n.unwrap_or(default);
    if n > MAX_GRID {
        return Err(CliError::precondition("BadGridSize", format!("--grid-n {n} exceeds {MAX_GRID}")));
    }
    Ok(n)
}

fn sorted_spectrum(m: &DenseMatrix, cfg: &Config) -> Result<Vec<ScalarJson>, CliError> {
    Ok(scalars_to_json(&eigensystem_with(m, cfg)?.eigenvalues))
}

#[derive(Serialize)]
struct Counterexample {
    s: f64,
    verdict: Verdict,
    spectrum_a: Vec<ScalarJson>,
    spectrum_perturbed: Vec<ScalarJson>,
    report: PositivityReport,
    eigencurve: Vec<EigenCurvePoint>,
}

fn counterexample(args: &DemoArgs, cfg: &Config) -> Result<Report, CliError> {
    let s = args.s.unwrap_or(FAMILY_PROBE_S);
    let (a, b) = counterexample_3d();
    let m = &a + &b.scale(s);
    let report = classify_semigroup_with(&m, cfg)?;
    let range = args.s_range.unwrap_or(SRange { start: 3.5, end: 4.5, step: 0.05 });
    let eigencurve = eigencurve_with(&a, &b, &range_points(range)?, Gauge::FixedComponent(2), 0, cfg)?;
    let table = curve_table(&eigencurve);
    let out = Counterexample {
        s,
        verdict: report.verdict,
        spectrum_a: sorted_spectrum(&a, cfg)?,
        spectrum_perturbed: sorted_spectrum(&m, cfg)?,
        report,
        eigencurve,
    };
    Ok(Report::new(&out).with_table(table))
}

#[derive(Serialize)]
struct PositiveFamily {
    verdict: Verdict,
    #[serde(flatten)]
    boundary: FamilyBoundary,
}

fn positive_family(args: &DemoArgs) -> Result<Report, CliError> {
    let boundary = negative_family_boundary(args.s.unwrap_or(FAMILY_PROBE_S))?;
    Ok(Report::new(&PositiveFamily { verdict: boundary.verdict_at_chosen, boundary }))
}

fn reflection(args: &DemoArgs) -> Result<Report, CliError> {
    let model = reflection_interval(grid(args, 41)?)?;
    let t_grid = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0, 200.0];
    let r: SmallPerturbationReport =
        demo_small_perturbation(&model, args.alpha.unwrap_or(0.1), args.epsilon.unwrap_or(0.05), &t_grid)?;
    let mut t = Table::new(&["t", "min_entry", "max_entry", "value_at_minus_one"]);
    for row in &r.trajectory {
        t.push_numbers(&[row.t, row.min_entry, row.max_entry, row.value_at_minus_one]);
    }
    Ok(Report::new(&r).with_table(t))
}

#[derive(Serialize)]
struct Cyclic {
    d: usize,
    epsilon: f64,
    spectrum: Vec<ScalarJson>,
    metzler: bool,
    verdict: Verdict,
    perturbed_metzler: bool,
    perturbed_verdict: Verdict,
    perturbed_report: PositivityReport,
}

fn min_ratio(m: &DenseMatrix) -> f64 {
    m.min_real_entry() / m.max_abs().max(f64::MIN_POSITIVE)
}

fn cyclic_demo(args: &DemoArgs, cfg: &Config) -> Result<Report, CliError> {
    let d = grid(args, 3)?;
    let epsilon = args.epsilon.unwrap_or(0.01);
    let (a, b) = cyclic(d)?;
    let p = &a + &b.scale(epsilon);
    let perturbed_report = classify_semigroup_with(&p, cfg)?;
    let mut t = Table::new(&["t", "min_ratio", "min_ratio_perturbed"]);
    for time in time_mesh(50.0, 64) {
        t.push_numbers(&[time, min_ratio(&expm(&a, time)?), min_ratio(&expm(&p, time)?)]);
    }
    let out = Cyclic {
        d,
        epsilon,
        spectrum: sorted_spectrum(&a, cfg)?,
        metzler: is_metzler(&a, cfg.positivity_tol)?,
        verdict: classify_semigroup_with(&a, cfg)?.verdict,
        perturbed_metzler: is_metzler(&p, cfg.positivity_tol)?,
        perturbed_verdict: perturbed_report.verdict,
        perturbed_report,
    };
    Ok(Report::new(&out).with_table(t))
}

#[derive(Serialize)]
struct Nonlocal {
    n: usize,
    spectral_bound: f64,
    verdict: Verdict,
    metzler: bool,
    /// Weighted norm of `R(0, −A_n)`.
    resolvent_norm: f64,
    /// Sup distance between the discrete solution and the kernel formula for `f = eˣ`.
    kernel_error: f64,
}

fn nonlocal(args: &DemoArgs, cfg: &Config) -> Result<Report, CliError> {
    let model = nonlocal_laplacian(grid(args, 64)?)?;
    let g = &model.operator_a;
    let r0 = resolvent_real(g, 0.0)?;
    let f = |x: f64| x.exp();
    let discrete = r0.mul_vec(&real_vec(&model.sample(f)));
    let kernel = nonlocal_kernel(&f, model.n);
    let mut t = Table::new(&["x", "discrete", "kernel"]);
    let mut kernel_error = 0.0_f64;
    for ((x, u), k) in model.grid.iter().zip(&discrete).zip(&kernel) {
        kernel_error = kernel_error.max((u.re - k).abs());
        t.push_numbers(&[*x, u.re, *k]);
    }
    let report = classify_semigroup_with(g, cfg)?;
    let out = Nonlocal {
        n: model.n,
        spectral_bound: report.dominant_eigenvalue,
        verdict: report.verdict,
        metzler: is_metzler(g, cfg.positivity_tol)?,
        resolvent_norm: weighted_norm(&r0, &model.quadrature_weights),
        kernel_error,
    };
    Ok(Report::new(&out).with_table(t))
}

#[derive(Serialize)]
struct Hilbert {
    seed: u64,
    #[serde(flatten)]
    report: HilbertReport,
}

fn hilbert(args: &DemoArgs) -> Result<Report, CliError> {
    let model = nonlocal_laplacian(grid(args, 32)?)?;
    let norm = args.norm.unwrap_or(0.5);
    let b = random_hilbert_perturbation(&model, &mut rng(args.seed), norm)?;
    let report = demo_hilbert_quantitative(&model, &b, 0.0)?;
    let mut t = Table::new(&["index", "time"]);
    for p in &report.probe_times {
        t.rows.push(vec![p.index.to_string(), p.time.map_or(String::new(), |x| x.to_string())]);
    }
    Ok(Report::new(&Hilbert { seed: args.seed, report }).with_table(t))
}

pub fn run(args: &DemoArgs, cfg: &Config) -> Result<Report, CliError> {
    match args.id {
        DemoId::Counterexample3d => counterexample(args, cfg),
        DemoId::PositiveFamily => positive_family(args),
        DemoId::ReflectionInterval => reflection(args),
        DemoId::CyclicD => cyclic_demo(args, cfg),
        DemoId::NonlocalLaplacian => nonlocal(args, cfg),
        DemoId::HilbertQuantitative => hilbert(args),
    }
}
