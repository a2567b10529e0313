//! Cone predicates and eventual positivity classifiers.
//!
//! Vectors are compared with the standard cone of `ℝⁿ`; `f ≫_u 0` means
//! `f ≥ εu` for some `ε > 0`, which for an entrywise positive `u` is the same
//! as every entry of `f` being positive.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{eigensystem_with, resolvent_real, DenseMatrix, EigenSystem, Propagator};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Positive,
    EventuallyStronglyPositive,
    NotEventuallyPositive,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Positive => "Positive",
            Verdict::EventuallyStronglyPositive => "EventuallyStronglyPositive",
            Verdict::NotEventuallyPositive => "NotEventuallyPositive",
            Verdict::Inconclusive => "Inconclusive",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A vector together with the reference point `u` used for `≫_u`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConeVector {
    pub entries: Vec<Complex64>,
    pub reference_u: Vec<f64>,
}

impl ConeVector {
    /// Uses `u = 𝟙`.
    pub fn new(entries: Vec<Complex64>) -> Self {
        let n = entries.len();
        ConeVector { entries, reference_u: vec![1.0; n] }
    }

    pub fn from_real(entries: &[f64]) -> Self {
        ConeVector::new(entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn with_reference(entries: Vec<Complex64>, reference_u: Vec<f64>) -> Result<Self> {
        if reference_u.len() != entries.len() {
            return Err(Error::DimensionMismatch { expected: entries.len(), got: reference_u.len() });
        }
        if let Some(bad) = reference_u.iter().find(|&&x| !(x > 0.0) || !x.is_finite()) {
            return Err(Error::param("reference_u", format!("entries must be positive, found {bad}")));
        }
        Ok(ConeVector { entries, reference_u })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PositivityReport {
    pub verdict: Verdict,
    /// `s(A)` for semigroups, `λ₀` for resolvents.
    pub dominant_eigenvalue: f64,
    /// `s(A)` minus the largest real part of the remaining spectrum.
    pub dominance_gap: f64,
    pub projection_min_entry: f64,
    /// Minimum off-diagonal entry (0 in dimension one).
    pub metzler_margin: f64,
    /// Largest `λ₁` such that `R(λ, A) ≫ 0` on `(λ₀, λ₁]` was certified.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified_lambda1: Option<f64>,
    pub evidence_notes: Vec<String>,
}

fn real_parts(x: &[Complex64], tol: f64) -> Result<Vec<f64>> {
    let imag = x.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag > tol {
        return Err(Error::NotReal { imag });
    }
    Ok(x.iter().map(|z| z.re).collect())
}

fn check_real_matrix(a: &DenseMatrix, tol: f64) -> Result<()> {
    let imag = a.max_imag();
    if imag > tol {
        return Err(Error::NotReal { imag });
    }
    Ok(())
}

/// Every entry `≥ −τ`.
pub fn is_nonneg(x: &[Complex64], tol: f64) -> Result<bool> {
    Ok(real_parts(x, tol)?.iter().all(|&v| v >= -tol))
}

pub fn is_nonneg_matrix(m: &DenseMatrix, tol: f64) -> Result<bool> {
    check_real_matrix(m, tol)?;
    Ok(m.entries().all(|z| z.re >= -tol))
}

/// `min_i x_i / u_i > τ`.
pub fn is_strongly_positive(x: &ConeVector, tol: f64) -> Result<bool> {
    if x.reference_u.len() != x.entries.len() {
        return Err(Error::DimensionMismatch { expected: x.entries.len(), got: x.reference_u.len() });
    }
    let re = real_parts(&x.entries, tol)?;
    Ok(re.iter().zip(&x.reference_u).all(|(v, u)| v / u > tol))
}

/// Smallest off-diagonal real part, or 0 for a 1×1 matrix.
pub fn metzler_margin(a: &DenseMatrix) -> f64 {
    let n = a.dim();
    if n == 1 {
        return 0.0;
    }
    (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| a.get(i, j).re)
        .fold(f64::INFINITY, f64::min)
}

/// Off-diagonal entries `≥ −τ`; equivalent to positivity of `e^{tA}`.
pub fn is_metzler(a: &DenseMatrix, tol: f64) -> Result<bool> {
    check_real_matrix(a, tol)?;
    Ok(metzler_margin(a) >= -tol)
}

fn entry_range(m: &DenseMatrix) -> (f64, f64) {
    m.entries().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), z| (lo.min(z.re), hi.max(z.re)))
}

/// Log-spaced times on `[1e-3, t_max]`, preceded by 0.
pub fn time_mesh(t_max: f64, points: usize) -> Vec<f64> {
    let lo: f64 = 1e-3_f64.min(t_max);
    let points = points.max(2);
    let ratio = (t_max / lo).ln() / (points - 1) as f64;
    std::iter::once(0.0).chain((0..points).map(|k| lo * (ratio * k as f64).exp())).collect()
}

pub fn classify_semigroup(a: &DenseMatrix) -> Result<PositivityReport> {
    classify_semigroup_with(a, &Config::default())
}

pub fn classify_semigroup_with(a: &DenseMatrix, cfg: &Config) -> Result<PositivityReport> {
    let tol = cfg.positivity_tol;
    check_real_matrix(a, tol)?;
    let es = eigensystem_with(a, cfg)?;
    let scale = es.matrix_norm.max(1.0);
    let spec_tol = cfg.spectral_tol * scale;
    let margin = metzler_margin(a);
    let s = es.spectral_bound();
    let gap = es.real_gap(0);
    let mut notes = Vec::new();

    let dominant_real = es.eigenvalues[0].im.abs() <= spec_tol;
    let (pmin, pmax) = if dominant_real { entry_range(&es.projection(0)) } else { (f64::NAN, f64::NAN) };
    let mut report = PositivityReport {
        verdict: Verdict::Inconclusive,
        dominant_eigenvalue: s,
        dominance_gap: gap,
        projection_min_entry: pmin,
        metzler_margin: margin,
        certified_lambda1: None,
        evidence_notes: Vec::new(),
    };

    if margin >= -tol {
        notes.push("off-diagonal entries are non-negative".to_string());
        report.verdict = Verdict::Positive;
        report.evidence_notes = notes;
        return Ok(report);
    }

    if !dominant_real {
        let real_top = es.real_spectral_bound(spec_tol);
        if real_top.is_some_and(|r| r >= s - spec_tol) {
            notes.push("real eigenvalue ties with a non-real one at s(A)".to_string());
            report.verdict = Verdict::Inconclusive;
        } else {
            notes.push(format!("dominant eigenvalue {} is not real", es.eigenvalues[0]));
            report.verdict = Verdict::NotEventuallyPositive;
        }
        report.evidence_notes = notes;
        return Ok(report);
    }

    if !es.is_simple(0) || gap <= spec_tol {
        notes.push("dominant eigenvalue is clustered or not strictly dominant".to_string());
        notes.extend(time_evidence(a, s, gap, cfg));
        report.evidence_notes = notes;
        return Ok(report);
    }

    let ptol = tol * pmax.abs().max(1.0);
    if pmin > ptol {
        notes.push("dominant spectral projection is entrywise positive".to_string());
        report.verdict = Verdict::EventuallyStronglyPositive;
    } else if pmin < -ptol && pmax > ptol {
        notes.push("dominant spectral projection has entries of both signs".to_string());
        report.verdict = Verdict::NotEventuallyPositive;
    } else {
        notes.push("dominant spectral projection has zero entries".to_string());
        notes.extend(time_evidence(a, s, gap, cfg));
    }
    report.evidence_notes = notes;
    Ok(report)
}

/// Samples `e^{t(A − s I)}` on the default time mesh and records its sign.
fn time_evidence(a: &DenseMatrix, s: f64, gap: f64, cfg: &Config) -> Vec<String> {
    let t_max = if gap.is_finite() && gap > 1e-3 { 50.0 / gap } else { 5e4 };
    let shifted = a.shift_real(-s);
    let prop = Propagator::new(&shifted);
    let mesh = time_mesh(t_max, cfg.time_mesh_points);
    let mut last = None;
    for &t in mesh.iter().rev().take(8) {
        match prop.matrix(t) {
            Ok(m) => {
                let (lo, hi) = entry_range(&m);
                last = Some((t, lo / hi.abs().max(f64::MIN_POSITIVE)));
                break;
            }
            Err(e) => return vec![format!("time sampling failed: {e}")],
        }
    }
    match last {
        Some((t, ratio)) => vec![format!("at t = {t:.4e}, min/max entry of e^(t(A-s)) is {ratio:.4e}")],
        None => Vec::new(),
    }
}

/// Geometric mesh `λ₀ + δ·10^{-j/m}`, from `λ₀ + δ` downward.
pub fn lambda_mesh(lambda0: f64, delta: f64, per_decade: usize, decades: usize) -> Vec<f64> {
    let m = per_decade.max(1);
    (0..=m * decades).map(|j| lambda0 + delta * 10f64.powf(-(j as f64) / m as f64)).collect()
}

pub fn classify_resolvent_at(a: &DenseMatrix, lambda0: f64) -> Result<PositivityReport> {
    classify_resolvent_at_with(a, lambda0, &Config::default())
}

pub fn classify_resolvent_at_with(a: &DenseMatrix, lambda0: f64, cfg: &Config) -> Result<PositivityReport> {
    let tol = cfg.positivity_tol;
    check_real_matrix(a, tol)?;
    let es = eigensystem_with(a, cfg)?;
    let k = locate_real_eigenvalue(&es, lambda0, cfg)?;
    let sep = es.separation(k);
    let delta = if sep.is_finite() { 0.5 * sep } else { 1.0 };
    let mesh = lambda_mesh(lambda0, delta, cfg.lambda_mesh_per_decade, cfg.lambda_mesh_decades);

    let ratios: Vec<f64> = mesh
        .par_iter()
        .map(|&l| resolvent_real(a, l).map(|r| normalized_min(&r)))
        .collect::<Result<_>>()?;

    let all_strong = ratios.iter().all(|&r| r > tol);
    let all_nonneg = ratios.iter().all(|&r| r >= -tol);
    let tail = cfg.lambda_mesh_per_decade.min(ratios.len());
    let negative_near = ratios[ratios.len() - tail..].iter().all(|&r| r < -tol);
    let lambda1 = mesh[0];

    let gap = es.real_gap(k);
    let (pmin, _) = entry_range(&es.projection(k));
    let mut notes = vec![format!(
        "{} samples on ({lambda0}, {lambda1}], min normalized entry {:.4e}",
        mesh.len(),
        ratios.iter().copied().fold(f64::INFINITY, f64::min)
    )];

    let verdict = if all_strong {
        let u = vec![1.0; a.dim()];
        if neumann_extension_check_with(a, lambda0, lambda1, &u, cfg)? {
            notes.push(format!("extension check certifies lambda1 = {lambda1}"));
            Verdict::EventuallyStronglyPositive
        } else {
            notes.push("extension check failed at lambda1".to_string());
            Verdict::Inconclusive
        }
    } else if negative_near {
        notes.push("negative entries persist as lambda approaches lambda0".to_string());
        Verdict::NotEventuallyPositive
    } else if all_nonneg {
        notes.push("resolvent is positive but not strongly positive".to_string());
        Verdict::Positive
    } else {
        Verdict::Inconclusive
    };

    Ok(PositivityReport {
        verdict,
        dominant_eigenvalue: lambda0,
        dominance_gap: gap,
        projection_min_entry: pmin,
        metzler_margin: metzler_margin(a),
        certified_lambda1: (verdict == Verdict::EventuallyStronglyPositive).then_some(lambda1),
        evidence_notes: notes,
    })
}

fn locate_real_eigenvalue(es: &EigenSystem, lambda0: f64, cfg: &Config) -> Result<usize> {
    let target = Complex64::new(lambda0, 0.0);
    let k = es.nearest(target);
    let tol = cfg.spectral_tol * es.matrix_norm.max(1.0);
    if (es.eigenvalues[k] - target).norm() > tol {
        return Err(Error::NotAnEigenvalue { lambda: target });
    }
    Ok(k)
}

/// `min_ij m_ij / max_ij |m_ij|`.
fn normalized_min(m: &DenseMatrix) -> f64 {
    let big = m.max_abs();
    if big == 0.0 {
        return 0.0;
    }
    m.entries().map(|z| z.re).fold(f64::INFINITY, f64::min) / big
}

/// `R(λ₁, A) ≥ 0` and some power `R(λ₁, A)ⁿ ≫_u 0` with `n ≤ dim`.
///
/// Together these imply `R(λ, A) ≫_u 0` on all of `(λ₀, λ₁)`.
pub fn neumann_extension_check(a: &DenseMatrix, lambda0: f64, lambda1: f64, u: &[f64]) -> Result<bool> {
    neumann_extension_check_with(a, lambda0, lambda1, u, &Config::default())
}

pub fn neumann_extension_check_with(
    a: &DenseMatrix,
    lambda0: f64,
    lambda1: f64,
    u: &[f64],
    cfg: &Config,
) -> Result<bool> {
    let tol = cfg.positivity_tol;
    if !(lambda1 > lambda0) {
        return Err(Error::param("lambda1", "must exceed lambda0"));
    }
    if u.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: u.len() });
    }
    if u.iter().any(|&x| !(x > 0.0)) {
        return Err(Error::param("u", "must be entrywise positive"));
    }
    let es = eigensystem_with(a, cfg)?;
    let spec_tol = cfg.spectral_tol * es.matrix_norm.max(1.0);
    if let Some(z) = es
        .eigenvalues
        .iter()
        .find(|z| z.im.abs() <= spec_tol && z.re > lambda0 + spec_tol && z.re <= lambda1 + spec_tol)
    {
        return Err(Error::SingularResolvent { lambda: *z, condition: f64::INFINITY });
    }
    let r = resolvent_real(a, lambda1)?;
    check_real_matrix(&r, tol * r.max_abs().max(1.0))?;
    if normalized_min(&r) < -tol {
        return Ok(false);
    }
    let n = a.dim();
    let mut power = r.clone();
    for _ in 0..n {
        let big = power.max_abs();
        if big == 0.0 {
            return Ok(false);
        }
        let strong = (0..n).all(|i| (0..n).all(|j| power.get(i, j).re / (big * u[i]) > tol));
        if strong {
            return Ok(true);
        }
        power = (&power * &r).scale(1.0 / big);
    }
    Ok(false)
}

/// Smallest mesh time `t₀` with `e^{tA} f ≥ 0` on all later mesh points,
/// refined by bisection. `None` if the last sample is still negative.
pub fn positivity_time(a: &DenseMatrix, f: &[Complex64], t_max: f64, mesh_points: usize) -> Result<Option<f64>> {
    first_time(a, f, t_max, mesh_points, false, &Config::default())
}

/// As [`positivity_time`] with the strict test `e^{tA} f ≫ 0`.
pub fn strong_positivity_time(
    a: &DenseMatrix,
    f: &[Complex64],
    t_max: f64,
    mesh_points: usize,
) -> Result<Option<f64>> {
    first_time(a, f, t_max, mesh_points, true, &Config::default())
}

pub fn positivity_time_with(
    a: &DenseMatrix,
    f: &[Complex64],
    t_max: f64,
    mesh_points: usize,
    strong: bool,
    cfg: &Config,
) -> Result<Option<f64>> {
    first_time(a, f, t_max, mesh_points, strong, cfg)
}

fn first_time(
    a: &DenseMatrix,
    f: &[Complex64],
    t_max: f64,
    mesh_points: usize,
    strong: bool,
    cfg: &Config,
) -> Result<Option<f64>> {
    if f.len() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: f.len() });
    }
    if f.iter().all(|z| z.norm() == 0.0) {
        return Err(Error::param("f", "must be non-zero"));
    }
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::param("t_max", "must be positive and finite"));
    }
    let tol = cfg.positivity_tol;
    // The sign of e^{tA} f is unchanged by the factor e^{-ct}.
    let s = eigensystem_with(a, cfg)?.spectral_bound();
    let prop = Propagator::new(&a.shift_real(-s));
    let ok = |t: f64| -> Result<bool> {
        let y = prop.apply(t, f)?;
        let big = y.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if big == 0.0 {
            return Ok(!strong);
        }
        Ok(y.iter().all(|z| if strong { z.re / big > tol } else { z.re / big >= -tol }))
    };

    let mesh = time_mesh(t_max, mesh_points);
    let flags: Vec<bool> = mesh.par_iter().map(|&t| ok(t)).collect::<Result<_>>()?;
    let Some(last_bad) = flags.iter().rposition(|&g| !g) else {
        return Ok(Some(0.0));
    };
    if last_bad == flags.len() - 1 {
        return Ok(None);
    }
    let (mut lo, mut hi) = (mesh[last_bad], mesh[last_bad + 1]);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if ok(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-12 * hi {
            break;
        }
    }
    Ok(Some(hi))
}

/// Eigendata of a real, simple, strictly dominant eigenvalue `s(A)`.
#[derive(Debug, Clone, Serialize)]
pub struct Dominant {
    pub eigenvalue: f64,
    pub gap: f64,
    /// Right eigenvector, real, scaled so its largest-magnitude entry is 1.
    pub right: Vec<f64>,
    /// Left eigenvector (as a functional) with `⟨left, right⟩ = 1`.
    pub left: Vec<f64>,
    pub projection: DenseMatrix,
}

/// Fails with [`Error::NotSimple`] unless `s(A)` is a real, simple and
/// strictly dominant eigenvalue.
pub fn dominant_eigendata(a: &DenseMatrix, cfg: &Config) -> Result<Dominant> {
    let es = eigensystem_with(a, cfg)?;
    let spec_tol = cfg.spectral_tol * es.matrix_norm.max(1.0);
    let lambda = es.eigenvalues[0];
    let gap = es.real_gap(0);
    if lambda.im.abs() > spec_tol || !es.is_simple(0) || gap <= spec_tol {
        return Err(Error::NotSimple { lambda });
    }
    let v = &es.right_vectors[0];
    let big = v.iter().copied().max_by(|x, y| x.norm().total_cmp(&y.norm())).unwrap_or_default();
    let right: Vec<Complex64> = v.iter().map(|z| z / big).collect();
    let w: Vec<Complex64> = es.left_vectors[0].iter().map(|z| z.conj()).collect();
    let scale = crate::linalg::pair(&w, &right);
    let left: Vec<f64> = w.iter().map(|z| (z / scale).re).collect();
    let right: Vec<f64> = right.iter().map(|z| z.re).collect();
    let projection = es.projection(0).real_part();
    Ok(Dominant { eigenvalue: lambda.re, gap, right, left, projection })
}
