use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use evpos::linalg::{eigensystem_with, real_vec, resolvent, DenseMatrix};
use evpos::perturbation::{
    certify_multiplication_perturbation_with, certify_resolvent_perturbation_with, eigencurve_with,
    eigenvalue_radius_with, openness_probe_with, EigenCurvePoint, Gauge,
};
use evpos::positivity::{classify_resolvent_at_with, classify_semigroup_with, lambda_mesh};
use evpos::rank_one::{
    destroyer_scan_with, resolvent_rank1_eigen_with, resolvent_rank1_with, semigroup_rank1_with, DEFAULT_MU_OFFSETS,
};
use evpos::{Config, Rank1};

use crate::args::{CertifyKind, Command, Lambda, Rank1Args, SRange};
use crate::demos;
use crate::error::CliError;
use crate::output::{Report, Table};

/// Largest number of points accepted from `--s-range`.
const MAX_RANGE_POINTS: usize = 100_000;

pub fn load_matrix(path: &Path) -> Result<DenseMatrix, CliError> {
    let ctx = || json!({ "input": path.display().to_string() });
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(e.to_string(), ctx()))?;
    DenseMatrix::from_json_str(&text).map_err(|e| CliError::from(e).with_context("input", path.display().to_string()))
}

fn positive(name: &str, x: f64) -> Result<f64, CliError> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::precondition("InvalidParameter", format!("--{name} must be positive and finite, got {x}")))
    }
}

fn non_negative(name: &str, x: f64) -> Result<f64, CliError> {
    if x >= 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(CliError::precondition("InvalidParameter", format!("--{name} must be non-negative and finite, got {x}")))
    }
}

fn real_lambda(l: Lambda) -> Result<f64, CliError> {
    if l.im != 0.0 {
        return Err(CliError::precondition("InvalidParameter", "--lambda must be real for this command"));
    }
    Ok(l.re)
}

pub fn range_points(r: SRange) -> Result<Vec<f64>, CliError> {
    if !(r.step > 0.0) || r.end < r.start {
        return Err(CliError::precondition("InvalidParameter", "--s-range needs a <= b and step > 0"));
    }
    if (r.end - r.start) / r.step > MAX_RANGE_POINTS as f64 {
        return Err(CliError::precondition("InvalidParameter", format!("--s-range exceeds {MAX_RANGE_POINTS} points")));
    }
    Ok(r.points())
}

fn rank1(args: &Rank1Args) -> Result<Rank1, CliError> {
    Ok(Rank1::new(real_vec(&args.phi), real_vec(&args.v))?)
}

/// Matrix report; CSV lists `row,col,re,im`.
fn matrix_report(m: &DenseMatrix) -> Report {
    let mut t = Table::new(&["row", "col", "re", "im"]);
    for i in 0..m.dim() {
        for j in 0..m.dim() {
            let z = m.get(i, j);
            t.push_numbers(&[i as f64, j as f64, z.re, z.im]);
        }
    }
    Report::new(m).with_table(t)
}

pub fn curve_table(points: &[EigenCurvePoint]) -> Table {
    let d = points.first().map_or(0, |p| p.u_s.len());
    let mut header = vec!["s".to_string(), "lambda".to_string(), "dlambda".to_string()];
    header.extend((1..=d).map(|i| format!("u{i}")));
    header.extend((1..=d).map(|i| format!("du{i}")));
    let mut t = Table { header, rows: Vec::new() };
    for p in points {
        let mut row = vec![p.s, p.lambda_s, p.dlambda_ds];
        row.extend(&p.u_s);
        row.extend(&p.du_ds);
        t.push_numbers(&row);
    }
    t
}

#[derive(Serialize)]
struct ResolventScan {
    lambda0: f64,
    report: evpos::PositivityReport,
    samples: Vec<ScanSample>,
}

#[derive(Serialize)]
struct ScanSample {
    lambda: f64,
    min_entry: f64,
    max_entry: f64,
}

fn resolvent_scan(a: &DenseMatrix, lambda0: f64, cfg: &Config) -> Result<Report, CliError> {
    let report = classify_resolvent_at_with(a, lambda0, cfg)?;
    let es = eigensystem_with(a, cfg)?;
    let k = es.nearest(Complex64::new(lambda0, 0.0));
    let sep = es.separation(k);
    let delta = if sep.is_finite() { 0.5 * sep } else { 1.0 };
    let mut samples = Vec::new();
    for l in lambda_mesh(lambda0, delta, cfg.lambda_mesh_per_decade, cfg.lambda_mesh_decades) {
        let r = resolvent(a, Complex64::new(l, 0.0))?;
        let max_entry = r.entries().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
        samples.push(ScanSample { lambda: l, min_entry: r.min_real_entry(), max_entry });
    }
    let mut t = Table::new(&["lambda", "min_entry", "max_entry"]);
    for s in &samples {
        t.push_numbers(&[s.lambda, s.min_entry, s.max_entry]);
    }
    Ok(Report::new(&ResolventScan { lambda0, report, samples }).with_table(t))
}

#[derive(Serialize)]
struct RadiusReport {
    lambda0: f64,
    radius: f64,
    nodes: usize,
    epsilon: f64,
}

pub fn run(command: &Command, cfg: &Config) -> Result<Report, CliError> {
    match command {
        Command::Classify(input) => {
            let a = load_matrix(&input.input)?;
            Ok(Report::new(&classify_semigroup_with(&a, cfg)?))
        }
        Command::ResolventScan { input, lambda } => {
            let a = load_matrix(&input.input)?;
            resolvent_scan(&a, real_lambda(*lambda)?, cfg)
        }
        Command::Rank1Resolvent { input, rank1: r1, lambda, lambda0 } => {
            let a = load_matrix(&input.input)?;
            let p = rank1(r1)?;
            let l = Complex64::new(lambda.re, lambda.im);
            let m = match lambda0 {
                Some(l0) => resolvent_rank1_eigen_with(&a, l, &p, Complex64::new(*l0, 0.0), cfg)?,
                None => resolvent_rank1_with(&a, l, &p, cfg)?,
            };
            Ok(matrix_report(&m))
        }
        Command::Rank1Semigroup { input, rank1: r1, t, lambda0 } => {
            let a = load_matrix(&input.input)?;
            let p = rank1(r1)?;
            let m = semigroup_rank1_with(&a, non_negative("t", *t)?, &p, Complex64::new(*lambda0, 0.0), cfg)?;
            Ok(matrix_report(&m))
        }
        Command::Radius { input, lambda, radius, nodes } => {
            let a = load_matrix(&input.input)?;
            let lambda0 = real_lambda(*lambda)?;
            let radius = positive("radius", *radius)?;
            let epsilon = eigenvalue_radius_with(&a, lambda0, radius, *nodes, cfg)?;
            Ok(Report::new(&RadiusReport { lambda0, radius, nodes: *nodes, epsilon }))
        }
        Command::Certify { input, perturbation, lambda, radius, kind } => {
            let a = load_matrix(&input.input)?;
            let b = load_matrix(perturbation)?;
            let (lambda0, radius) = (real_lambda(*lambda)?, positive("radius", *radius)?);
            let cert = match kind {
                CertifyKind::Nonneg => certify_resolvent_perturbation_with(&a, lambda0, radius, &b, cfg)?,
                CertifyKind::Multiplication => certify_multiplication_perturbation_with(&a, lambda0, radius, &b, cfg)?,
            };
            Ok(Report::new(&cert))
        }
        Command::ScanEigencurve { input, perturbation, s_range, gauge } => {
            let a = load_matrix(&input.input)?;
            let b = load_matrix(perturbation)?;
            let grid = range_points(*s_range)?;
            let gauge = gauge.map_or(Gauge::LargestComponent, Gauge::FixedComponent);
            let points = eigencurve_with(&a, &b, &grid, gauge, 0, cfg)?;
            let table = curve_table(&points);
            Ok(Report::new(&points).with_table(table))
        }
        Command::Destroyer { input, mu_offsets } => {
            let a = load_matrix(&input.input)?;
            let offsets = mu_offsets.clone().unwrap_or_else(|| DEFAULT_MU_OFFSETS.to_vec());
            for &o in &offsets {
                positive("mu-offsets", o)?;
            }
            let scan = destroyer_scan_with(&a, &offsets, &[], cfg)?;
            let mut t = Table::new(&["mu", "phi_index", "min_entry", "max_entry", "mixed_sign"]);
            for e in &scan.entries {
                t.rows.push(vec![
                    e.mu.to_string(),
                    e.phi_index.to_string(),
                    e.min_entry.to_string(),
                    e.max_entry.to_string(),
                    e.mixed_sign.to_string(),
                ]);
            }
            Ok(Report::new(&scan).with_table(t))
        }
        Command::Demo(args) => demos::run(args, cfg),
        Command::ProbeOpenness { input, trials, scale, seed } => {
            let a = load_matrix(&input.input)?;
            Ok(Report::new(&openness_probe_with(&a, *trials, non_negative("scale", *scale)?, *seed, cfg)?))
        }
        Command::ListDemos => Ok(demos::list()),
    }
}
