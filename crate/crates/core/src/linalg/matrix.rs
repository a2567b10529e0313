use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square matrix of complex scalars with finite entries.
///
/// Every operator in the crate (generators, perturbations, resolvents,
/// exponentials, spectral projections) is one of these.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    inner: DMatrix<Complex64>,
}

impl DenseMatrix {
    pub fn from_nalgebra(inner: DMatrix<Complex64>) -> Result<Self> {
        if inner.nrows() != inner.ncols() {
            return Err(Error::NotSquare { rows: inner.nrows(), cols: inner.ncols() });
        }
        if inner.nrows() == 0 {
            return Err(Error::Empty);
        }
        for j in 0..inner.ncols() {
            for i in 0..inner.nrows() {
                let z = inner[(i, j)];
                if !z.re.is_finite() || !z.im.is_finite() {
                    return Err(Error::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(DenseMatrix { inner })
    }

    /// Results of arithmetic on validated matrices; finiteness is re-checked
    /// where it can actually fail (exponentials, inverses).
    pub(crate) fn wrap(inner: DMatrix<Complex64>) -> Self {
        debug_assert_eq!(inner.nrows(), inner.ncols());
        DenseMatrix { inner }
    }

    pub fn from_row_major(dim: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, got: entries.len() });
        }
        Self::from_nalgebra(DMatrix::from_row_slice(dim, dim, &entries))
    }

    pub fn from_real_row_major(dim: usize, entries: &[f64]) -> Result<Self> {
        Self::from_row_major(dim, entries.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Builds a real matrix from rows; panics on ragged input.
    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let dim = rows.len();
        let mut flat = Vec::with_capacity(dim * dim);
        for r in rows {
            let r = r.as_ref();
            if r.len() != dim {
                return Err(Error::NotSquare { rows: dim, cols: r.len() });
            }
            flat.extend_from_slice(r);
        }
        Self::from_real_row_major(dim, &flat)
    }

    pub fn from_real_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        Self::from_nalgebra(DMatrix::from_fn(dim, dim, |i, j| Complex64::new(f(i, j), 0.0)))
    }

    pub fn identity(dim: usize) -> Self {
        Self::wrap(DMatrix::identity(dim, dim))
    }

    pub fn zeros(dim: usize) -> Self {
        Self::wrap(DMatrix::zeros(dim, dim))
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = DMatrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        Self::wrap(m)
    }

    /// `x ↦ ⟨phi, x⟩ v`, i.e. the matrix `v · phi`.
    pub fn outer(v: &[Complex64], phi: &[Complex64]) -> Self {
        assert_eq!(v.len(), phi.len(), "outer product of mismatched vectors");
        let n = v.len();
        Self::wrap(DMatrix::from_fn(n, n, |i, j| v[i] * phi[j]))
    }

    pub fn dim(&self) -> usize {
        self.inner.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.inner[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Complex64) {
        self.inner[(i, j)] = value;
    }

    pub fn as_nalgebra(&self) -> &DMatrix<Complex64> {
        &self.inner
    }

    pub fn into_nalgebra(self) -> DMatrix<Complex64> {
        self.inner
    }

    pub fn row_major(&self) -> Vec<Complex64> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                out.push(self.inner[(i, j)]);
            }
        }
        out
    }

    pub fn entries(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.inner.iter().copied()
    }

    /// Real parts in row-major order.
    pub fn real_rows(&self) -> Vec<Vec<f64>> {
        (0..self.dim()).map(|i| (0..self.dim()).map(|j| self.inner[(i, j)].re).collect()).collect()
    }

    pub fn max_imag(&self) -> f64 {
        self.inner.iter().fold(0.0, |m, z| m.max(z.im.abs()))
    }

    pub fn max_abs(&self) -> f64 {
        self.inner.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn min_real_entry(&self) -> f64 {
        self.inner.iter().fold(f64::INFINITY, |m, z| m.min(z.re))
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.max_imag() <= tol
    }

    /// Drops imaginary parts.
    pub fn real_part(&self) -> Self {
        Self::wrap(self.inner.map(|z| Complex64::new(z.re, 0.0)))
    }

    pub fn is_diagonal(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| i == j || self.inner[(i, j)] == ZERO))
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.inner[(i, i)]).collect()
    }

    pub fn trace(&self) -> Complex64 {
        self.inner.trace()
    }

    pub fn transpose(&self) -> Self {
        Self::wrap(self.inner.transpose())
    }

    pub fn adjoint(&self) -> Self {
        Self::wrap(self.inner.adjoint())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self::wrap(self.inner.map(|z| z * c))
    }

    pub fn scale_complex(&self, c: Complex64) -> Self {
        Self::wrap(self.inner.map(|z| z * c))
    }

    /// `A + cI`.
    pub fn shift(&self, c: Complex64) -> Self {
        let mut m = self.inner.clone();
        for i in 0..self.dim() {
            m[(i, i)] += c;
        }
        Self::wrap(m)
    }

    pub fn shift_real(&self, c: f64) -> Self {
        self.shift(Complex64::new(c, 0.0))
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim());
        let v = &self.inner * DVector::from_column_slice(x);
        v.as_slice().to_vec()
    }

    /// Row vector times matrix: `phi · M`.
    pub fn vec_mul(&self, phi: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(phi.len(), self.dim());
        let n = self.dim();
        (0..n).map(|j| (0..n).map(|i| phi[i] * self.inner[(i, j)]).sum()).collect()
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut result = Self::identity(self.dim());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        result
    }

    pub fn norm_1(&self) -> f64 {
        let n = self.dim();
        (0..n).map(|j| (0..n).map(|i| self.inner[(i, j)].norm()).sum::<f64>()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.inner.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Spectral norm (largest singular value).
    pub fn operator_norm(&self) -> f64 {
        operator_norm(self)
    }

    /// Smallest singular value.
    pub fn min_singular_value(&self) -> f64 {
        let sv = self.inner.clone().singular_values();
        sv.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        let n = self.dim();
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        (0..n).all(|i| (0..i).all(|j| (self.inner[(i, j)] - self.inner[(j, i)]).norm() <= tol * scale))
    }

    pub fn to_json(&self) -> MatrixJson {
        MatrixJson::from(self)
    }
}

/// Largest singular value; relative accuracy at the level of the SVD.
pub fn operator_norm(m: &DenseMatrix) -> f64 {
    if m.inner.iter().all(|z| *z == ZERO) {
        return 0.0;
    }
    let sv = m.inner.clone().singular_values();
    sv.iter().copied().fold(0.0, f64::max)
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix({}x{})", self.dim(), self.dim())?;
        for i in 0..self.dim() {
            let row: Vec<String> = (0..self.dim())
                .map(|j| {
                    let z = self.inner[(i, j)];
                    if z.im == 0.0 {
                        format!("{:>12.6}", z.re)
                    } else {
                        format!("{:>12.6}{:+.6}i", z.re, z.im)
                    }
                })
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl<'a> Add<&'a DenseMatrix> for &'a DenseMatrix {
    type Output = DenseMatrix;
    fn add(self, rhs: &DenseMatrix) -> DenseMatrix {
        DenseMatrix::wrap(&self.inner + &rhs.inner)
    }
}

impl<'a> Sub<&'a DenseMatrix> for &'a DenseMatrix {
    type Output = DenseMatrix;
    fn sub(self, rhs: &DenseMatrix) -> DenseMatrix {
        DenseMatrix::wrap(&self.inner - &rhs.inner)
    }
}

impl<'a> Mul<&'a DenseMatrix> for &'a DenseMatrix {
    type Output = DenseMatrix;
    fn mul(self, rhs: &DenseMatrix) -> DenseMatrix {
        DenseMatrix::wrap(&self.inner * &rhs.inner)
    }
}

impl Neg for &DenseMatrix {
    type Output = DenseMatrix;
    fn neg(self) -> DenseMatrix {
        DenseMatrix::wrap(-&self.inner)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<DenseMatrix> for DenseMatrix {
            type Output = DenseMatrix;
            fn $m(self, rhs: DenseMatrix) -> DenseMatrix {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a DenseMatrix> for DenseMatrix {
            type Output = DenseMatrix;
            fn $m(self, rhs: &DenseMatrix) -> DenseMatrix {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

// ---------------------------------------------------------------------------
// vectors

/// Bilinear pairing `⟨phi, x⟩ = Σ phi_i x_i` (no conjugation: `phi` is a functional).
pub fn pair(phi: &[Complex64], x: &[Complex64]) -> Complex64 {
    assert_eq!(phi.len(), x.len());
    phi.iter().zip(x).map(|(a, b)| a * b).sum()
}

/// Hermitian inner product `Σ conj(a_i) b_i`.
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm2(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn real_vec(x: &[f64]) -> Vec<Complex64> {
    x.iter().map(|&v| Complex64::new(v, 0.0)).collect()
}

pub fn re_parts(x: &[Complex64]) -> Vec<f64> {
    x.iter().map(|z| z.re).collect()
}

pub fn ones(n: usize) -> Vec<Complex64> {
    vec![ONE; n]
}

pub fn unit(n: usize, k: usize) -> Vec<Complex64> {
    let mut e = vec![ZERO; n];
    e[k] = ONE;
    e
}

// ---------------------------------------------------------------------------
// JSON

/// A scalar that is either a plain real number or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarJson {
    Real(f64),
    Complex([f64; 2]),
}

impl From<ScalarJson> for Complex64 {
    fn from(s: ScalarJson) -> Self {
        match s {
            ScalarJson::Real(x) => Complex64::new(x, 0.0),
            ScalarJson::Complex([re, im]) => Complex64::new(re, im),
        }
    }
}

pub fn scalars_to_json(values: &[Complex64]) -> Vec<ScalarJson> {
    let real = values.iter().all(|z| z.im.to_bits() == 0);
    values
        .iter()
        .map(|z| if real { ScalarJson::Real(z.re) } else { ScalarJson::Complex([z.re, z.im]) })
        .collect()
}

/// Wire format: `{"dim": n, "entries": [[re, im], ...]}` in row-major order;
/// real matrices are written with plain numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<ScalarJson>,
}

impl From<&DenseMatrix> for MatrixJson {
    fn from(m: &DenseMatrix) -> Self {
        MatrixJson { dim: m.dim(), entries: scalars_to_json(&m.row_major()) }
    }
}

impl TryFrom<MatrixJson> for DenseMatrix {
    type Error = Error;
    fn try_from(j: MatrixJson) -> Result<Self> {
        if j.dim == 0 {
            return Err(Error::Empty);
        }
        DenseMatrix::from_row_major(j.dim, j.entries.into_iter().map(Complex64::from).collect())
    }
}

impl Serialize for DenseMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for DenseMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = MatrixJson::deserialize(d)?;
        DenseMatrix::try_from(j).map_err(serde::de::Error::custom)
    }
}

impl DenseMatrix {
    pub fn from_json_str(s: &str) -> Result<Self> {
        let j: MatrixJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        DenseMatrix::try_from(j)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&MatrixJson::from(self)).expect("matrix json serialization")
    }
}
