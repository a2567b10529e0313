//! Rank-one perturbations.
//!
//! A [`Rank1`] acts as `x ↦ α⟨φ, x⟩ v`, i.e. it is the matrix `α v φ`.
//! The bracket `⟨φ, x⟩ = Σ φ_i x_i` is bilinear, so `φ` is a functional and
//! not a vector to be conjugated.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::linalg::{
    eigensystem_with, expm, norm2, operator_norm, pair, resolvent, scalars_to_json, DenseMatrix, ScalarJson,
};
use crate::positivity::{dominant_eigendata, Dominant};

#[derive(Debug, Clone, PartialEq)]
pub struct Rank1 {
    pub phi: Vec<Complex64>,
    pub v: Vec<Complex64>,
    pub alpha: f64,
}

#[derive(Serialize, Deserialize)]
struct Rank1Json {
    phi: Vec<ScalarJson>,
    v: Vec<ScalarJson>,
    #[serde(default = "one")]
    alpha: f64,
}

fn one() -> f64 {
    1.0
}

impl Serialize for Rank1 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        Rank1Json { phi: scalars_to_json(&self.phi), v: scalars_to_json(&self.v), alpha: self.alpha }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Rank1 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = Rank1Json::deserialize(d)?;
        Rank1::with_alpha(
            j.phi.into_iter().map(Complex64::from).collect(),
            j.v.into_iter().map(Complex64::from).collect(),
            j.alpha,
        )
        .map_err(serde::de::Error::custom)
    }
}

impl Rank1 {
    pub fn new(phi: Vec<Complex64>, v: Vec<Complex64>) -> Result<Self> {
        Rank1::with_alpha(phi, v, 1.0)
    }

    pub fn with_alpha(phi: Vec<Complex64>, v: Vec<Complex64>, alpha: f64) -> Result<Self> {
        if phi.is_empty() {
            return Err(Error::Empty);
        }
        if phi.len() != v.len() {
            return Err(Error::DimensionMismatch { expected: phi.len(), got: v.len() });
        }
        if !alpha.is_finite() || phi.iter().chain(&v).any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::param("rank1", "entries must be finite"));
        }
        Ok(Rank1 { phi, v, alpha })
    }

    pub fn zero(n: usize) -> Self {
        Rank1 { phi: vec![Complex64::new(0.0, 0.0); n], v: vec![Complex64::new(0.0, 0.0); n], alpha: 1.0 }
    }

    pub fn dim(&self) -> usize {
        self.phi.len()
    }

    /// `αφ`, the functional with the scalar folded in.
    pub fn functional(&self) -> Vec<Complex64> {
        self.phi.iter().map(|z| z * self.alpha).collect()
    }

    pub fn matrix(&self) -> DenseMatrix {
        DenseMatrix::outer(&self.v, &self.functional())
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let c = pair(&self.functional(), x);
        self.v.iter().map(|z| z * c).collect()
    }

    /// `|α|·‖φ‖·‖v‖`.
    pub fn norm(&self) -> f64 {
        self.alpha.abs() * norm2(&self.phi) * norm2(&self.v)
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if self.dim() != n {
            return Err(Error::DimensionMismatch { expected: n, got: self.dim() });
        }
        Ok(())
    }
}

/// `R(λ, A + wφ) = R + (1 − ⟨φ, Rw⟩)⁻¹ (Rw)(φR)` with `R = R(λ, A)`.
pub fn resolvent_rank1(a: &DenseMatrix, lambda: Complex64, p: &Rank1) -> Result<DenseMatrix> {
    resolvent_rank1_with(a, lambda, p, &Config::default())
}

pub fn resolvent_rank1_with(a: &DenseMatrix, lambda: Complex64, p: &Rank1, cfg: &Config) -> Result<DenseMatrix> {
    p.check_dim(a.dim())?;
    let r = resolvent(a, lambda)?;
    let phi = p.functional();
    let rw = r.mul_vec(&p.v);
    let c = pair(&phi, &rw);
    let defect = (Complex64::new(1.0, 0.0) - c).norm();
    if defect < cfg.spectral_tol * (1.0 + c.norm()) {
        return Err(Error::PerturbedSpectrum { lambda, defect });
    }
    let phi_r = r.vec_mul(&phi);
    let correction = DenseMatrix::outer(&rw, &phi_r).scale_complex((Complex64::new(1.0, 0.0) - c).inv());
    Ok(&r + &correction)
}

fn check_eigenvector(a: &DenseMatrix, v: &[Complex64], lambda0: Complex64, cfg: &Config) -> Result<()> {
    let av = a.mul_vec(v);
    let residual = av.iter().zip(v).map(|(x, y)| (x - lambda0 * y).norm_sqr()).sum::<f64>().sqrt();
    let scale = operator_norm(a).max(lambda0.norm()).max(1.0) * norm2(v);
    if norm2(v) == 0.0 || residual > cfg.spectral_tol * scale {
        return Err(Error::NotAnEigenvector { lambda: lambda0, residual });
    }
    Ok(())
}

/// For `Av = λ₀v`: `R(λ, A + vφ) = R + ((λ − λ₀) − ⟨φ, v⟩)⁻¹ v(φR)`.
pub fn resolvent_rank1_eigen(a: &DenseMatrix, lambda: Complex64, p: &Rank1, lambda0: Complex64) -> Result<DenseMatrix> {
    resolvent_rank1_eigen_with(a, lambda, p, lambda0, &Config::default())
}

pub fn resolvent_rank1_eigen_with(
    a: &DenseMatrix,
    lambda: Complex64,
    p: &Rank1,
    lambda0: Complex64,
    cfg: &Config,
) -> Result<DenseMatrix> {
    p.check_dim(a.dim())?;
    check_eigenvector(a, &p.v, lambda0, cfg)?;
    let phi = p.functional();
    let pv = pair(&phi, &p.v);
    let d = (lambda - lambda0) - pv;
    if d.norm() < cfg.spectral_tol * (1.0 + pv.norm() + (lambda - lambda0).norm()) {
        return Err(Error::PerturbedSpectrum { lambda, defect: d.norm() });
    }
    let r = resolvent(a, lambda)?;
    let correction = DenseMatrix::outer(&p.v, &r.vec_mul(&phi)).scale_complex(d.inv());
    Ok(&r + &correction)
}

/// For `Av = λ₀v` and `μ = ⟨φ, v⟩ + λ₀ ∉ σ(A)`:
/// `e^{t(A + vφ)} = e^{tA} + v φ (e^{tμ} I − e^{tA}) R(μ, A)`.
pub fn semigroup_rank1(a: &DenseMatrix, t: f64, p: &Rank1, lambda0: Complex64) -> Result<DenseMatrix> {
    semigroup_rank1_with(a, t, p, lambda0, &Config::default())
}

/// `e^{−ct} e^{t(A + vφ)}`, evaluated without forming the unscaled exponential.
pub fn semigroup_rank1_scaled(a: &DenseMatrix, t: f64, p: &Rank1, lambda0: Complex64, c: f64) -> Result<DenseMatrix> {
    semigroup_rank1_with(&a.shift_real(-c), t, p, lambda0 - c, &Config::default())
}

pub fn semigroup_rank1_with(
    a: &DenseMatrix,
    t: f64,
    p: &Rank1,
    lambda0: Complex64,
    cfg: &Config,
) -> Result<DenseMatrix> {
    p.check_dim(a.dim())?;
    check_eigenvector(a, &p.v, lambda0, cfg)?;
    let phi = p.functional();
    if phi.iter().all(|z| z.norm() == 0.0) {
        // the correction term carries φ as a factor
        return expm(a, t);
    }
    let mu = pair(&phi, &p.v) + lambda0;
    let es = eigensystem_with(a, cfg)?;
    let tol = cfg.spectral_tol * es.matrix_norm.max(1.0);
    if es.eigenvalues.iter().any(|z| (z - mu).norm() <= tol) {
        return Err(Error::SpectralCollision { value: mu });
    }
    let r = resolvent(a, mu).map_err(|_| Error::SpectralCollision { value: mu })?;
    let e = expm(a, t)?;
    let middle = (-&e).shift((mu * t).exp());
    let left = (&middle * &r).vec_mul(&phi);
    Ok(&e + &DenseMatrix::outer(&p.v, &left))
}

/// A positive rank-one perturbation `B = α φ⊗v` that moves the dominant
/// eigenvalue to `μ`, together with the spectral projection of `A + B` at `μ`.
#[derive(Debug, Clone, Serialize)]
pub struct Destroyer {
    pub mu: f64,
    pub perturbation: Rank1,
    /// `R(μ, A)ᵀ φ`; the projection is `α v ⊗ left_factor`.
    pub left_factor: Vec<f64>,
    pub projection: DenseMatrix,
    /// The left factor has entries of both signs.
    pub mixed_sign: bool,
}

/// Builds `B = α φ⊗v` with `α⟨φ, v⟩ = μ − s(A)`, so that `s(A + B) = μ`.
pub fn build_destroyer(a: &DenseMatrix, mu: f64, phi: &[f64]) -> Result<Destroyer> {
    build_destroyer_with(a, mu, phi, &Config::default())
}

pub fn build_destroyer_with(a: &DenseMatrix, mu: f64, phi: &[f64], cfg: &Config) -> Result<Destroyer> {
    let dom = positive_dominant(a, cfg)?;
    destroyer_from(a, &dom, mu, phi, cfg)
}

fn positive_dominant(a: &DenseMatrix, cfg: &Config) -> Result<Dominant> {
    let dom = dominant_eigendata(a, cfg).map_err(|_| Error::NotEventuallyStronglyPositive)?;
    let pmax = dom.projection.max_abs();
    if dom.projection.min_real_entry() <= cfg.positivity_tol * pmax.max(1.0) {
        return Err(Error::NotEventuallyStronglyPositive);
    }
    Ok(dom)
}

fn destroyer_from(a: &DenseMatrix, dom: &Dominant, mu: f64, phi: &[f64], cfg: &Config) -> Result<Destroyer> {
    let n = a.dim();
    if phi.len() != n {
        return Err(Error::DimensionMismatch { expected: n, got: phi.len() });
    }
    if phi.iter().any(|&x| x < 0.0 || !x.is_finite()) || phi.iter().all(|&x| x == 0.0) {
        return Err(Error::param("phi", "must be non-negative and non-zero"));
    }
    let s = dom.eigenvalue;
    if !(mu > s) || !mu.is_finite() {
        return Err(Error::param("mu", format!("must exceed s(A) = {s}")));
    }
    let v = &dom.right;
    let pairing: f64 = phi.iter().zip(v).map(|(x, y)| x * y).sum();
    if pairing <= cfg.positivity_tol {
        return Err(Error::ZeroPairing { value: pairing });
    }
    let alpha = (mu - s) / pairing;
    let phic: Vec<Complex64> = phi.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let vc: Vec<Complex64> = v.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    let r = resolvent(a, Complex64::new(mu, 0.0))?;
    let left: Vec<f64> = r.vec_mul(&phic).iter().map(|z| z.re).collect();
    let projection = DenseMatrix::outer(&vc, &crate::linalg::real_vec(&left)).scale(alpha);
    let big = left.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let lo = left.iter().copied().fold(f64::INFINITY, f64::min);
    let mixed_sign = lo < -cfg.positivity_tol * big;
    Ok(Destroyer { mu, perturbation: Rank1 { phi: phic, v: vc, alpha }, left_factor: left, projection, mixed_sign })
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanEntry {
    pub mu: f64,
    pub phi_index: usize,
    pub min_entry: f64,
    pub max_entry: f64,
    pub mixed_sign: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DestroyerScan {
    pub spectral_bound: f64,
    pub entries: Vec<ScanEntry>,
    /// The first mixed-sign instance in scan order.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub destroyer: Option<Destroyer>,
}

/// Offsets `μ − s(A)` scanned by default.
pub const DEFAULT_MU_OFFSETS: [f64; 6] = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0];

/// Scans `μ = s(A) + offset` over `mu_offsets` and the functionals in
/// `phi_basis` (coordinate functionals if empty), reporting the sign pattern
/// of `R(μ, A)ᵀφ`.
pub fn destroyer_scan(a: &DenseMatrix, mu_offsets: &[f64], phi_basis: &[Vec<f64>]) -> Result<DestroyerScan> {
    destroyer_scan_with(a, mu_offsets, phi_basis, &Config::default())
}

pub fn destroyer_scan_with(
    a: &DenseMatrix,
    mu_offsets: &[f64],
    phi_basis: &[Vec<f64>],
    cfg: &Config,
) -> Result<DestroyerScan> {
    let n = a.dim();
    let dom = positive_dominant(a, cfg)?;
    let basis: Vec<Vec<f64>> = if phi_basis.is_empty() {
        (0..n).map(|k| (0..n).map(|i| if i == k { 1.0 } else { 0.0 }).collect()).collect()
    } else {
        phi_basis.to_vec()
    };
    let mut entries = Vec::new();
    let mut destroyer = None;
    for &offset in mu_offsets {
        if !(offset > 0.0) {
            return Err(Error::param("mu_offsets", "offsets must be positive"));
        }
        for (k, phi) in basis.iter().enumerate() {
            let d = destroyer_from(a, &dom, dom.eigenvalue + offset, phi, cfg)?;
            entries.push(ScanEntry {
                mu: d.mu,
                phi_index: k,
                min_entry: d.left_factor.iter().copied().fold(f64::INFINITY, f64::min),
                max_entry: d.left_factor.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                mixed_sign: d.mixed_sign,
            });
            if d.mixed_sign && destroyer.is_none() {
                destroyer = Some(d);
            }
        }
    }
    Ok(DestroyerScan { spectral_bound: dom.eigenvalue, entries, destroyer })
}
