//! Dense complex matrices and vectors.
//!
//! Inner products are linear in the first slot and conjugate-linear in the
//! second: `<x, y> = sum x_i * conj(y_i)`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Complex = Complex64;

pub(crate) const ZERO: Complex = Complex::new(0.0, 0.0);
pub(crate) const ONE: Complex = Complex::new(1.0, 0.0);

fn check_finite(entries: &[Complex]) -> Result<()> {
    match entries
        .iter()
        .position(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        Some(index) => Err(Error::NonFinite { index }),
        None => Ok(()),
    }
}

/// Column vector of complex entries with fixed length.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "VectorJson", into = "VectorJson")]
pub struct Vector {
    data: Vec<Complex>,
}

impl Vector {
    pub fn new(data: Vec<Complex>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::InvalidArgument("vector length must be at least 1".into()));
        }
        check_finite(&data)?;
        Ok(Vector { data })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex::new(v, 0.0)).collect())
    }

    pub fn zeros(n: usize) -> Self {
        Vector {
            data: vec![ZERO; n],
        }
    }

    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.data[i] = ONE;
        v
    }

    pub(crate) fn from_vec_unchecked(data: Vec<Complex>) -> Self {
        Vector { data }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, c: Complex) -> Vector {
        Vector {
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    /// `<self, other>`, conjugating `other`.
    pub fn inner(&self, other: &Vector) -> Result<Complex> {
        if self.len() != other.len() {
            return Err(Error::dimension("inner product", self.len(), other.len()));
        }
        Ok(dot(&self.data, &other.data))
    }
}

pub(crate) fn dot(x: &[Complex], y: &[Complex]) -> Complex {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

/// `<x, y> = sum x_i conj(y_i)`.
pub fn inner_product(x: &Vector, y: &Vector) -> Result<Complex> {
    x.inner(y)
}

impl Index<usize> for Vector {
    type Output = Complex;
    fn index(&self, i: usize) -> &Complex {
        &self.data[i]
    }
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.data.iter()).finish()
    }
}

/// Square `n x n` complex matrix stored row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixJson", into = "MatrixJson")]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex>,
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Self {
        ComplexMatrix {
            dim: n,
            data: vec![ZERO; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from row-major entries, rejecting non-finite values.
    pub fn from_row_major(dim: usize, data: Vec<Complex>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("matrix dimension must be at least 1".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::dimension("matrix entries", dim * dim, data.len()));
        }
        check_finite(&data)?;
        Ok(ComplexMatrix { dim, data })
    }

    pub fn from_rows(rows: &[Vec<Complex>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::dimension("matrix row", n, row.len()));
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(n, data)
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Complex::new(v, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diag(values: &[Complex]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn diag_real(values: &[f64]) -> Self {
        let values: Vec<Complex> = values.iter().map(|&v| Complex::new(v, 0.0)).collect();
        Self::diag(&values)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Complex) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        ComplexMatrix { dim: n, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector::from_vec_unchecked((0..self.dim).map(|i| self[(i, j)]).collect())
    }

    pub fn diagonal(&self) -> Vec<Complex> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        let n = self.dim;
        ComplexMatrix::from_fn(n, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, c: Complex) -> ComplexMatrix {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> ComplexMatrix {
        self.scale(Complex::new(c, 0.0))
    }

    /// `self + c * I`.
    pub fn shift(&self, c: f64) -> ComplexMatrix {
        let mut m = self.clone();
        for i in 0..self.dim {
            m[(i, i)] += c;
        }
        m
    }

    /// Hermitian part `(M + M*) / 2`.
    pub fn hermitian_part(&self) -> ComplexMatrix {
        let n = self.dim;
        ComplexMatrix::from_fn(n, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn trace(&self) -> Complex {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.dim != other.dim {
            return Err(Error::dimension("matmul", self.dim, other.dim));
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let n = self.dim;
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            let out_row = &mut out[i * n..(i + 1) * n];
            for (k, &a) in self.row(i).iter().enumerate() {
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                for (o, &b) in out_row.iter_mut().zip(other.row(k)) {
                    *o += a * b;
                }
            }
        }
        ComplexMatrix { dim: n, data: out }
    }

    pub fn matvec(&self, x: &Vector) -> Result<Vector> {
        if self.dim != x.len() {
            return Err(Error::dimension("matvec", self.dim, x.len()));
        }
        Ok(self.apply(x))
    }

    pub(crate) fn apply(&self, x: &Vector) -> Vector {
        Vector::from_vec_unchecked(
            (0..self.dim)
                .map(|i| self.row(i).iter().zip(x.as_slice()).map(|(a, b)| a * b).sum())
                .collect(),
        )
    }

    /// `<M x, x>`.
    pub fn quadratic_form(&self, x: &Vector) -> Result<Complex> {
        let mx = self.matvec(x)?;
        Ok(dot(mx.as_slice(), x.as_slice()))
    }

    /// `M N - N M`.
    pub fn commutator(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        Ok(&self.matmul(other)? - &other.matmul(self)?)
    }

    pub(crate) fn assert_same_dim(&self, other: &ComplexMatrix, context: &'static str) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::dimension(context, self.dim, other.dim));
        }
        Ok(())
    }
}

pub fn adjoint(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint()
}

pub fn matmul(m: &ComplexMatrix, n: &ComplexMatrix) -> Result<ComplexMatrix> {
    m.matmul(n)
}

pub fn matvec(m: &ComplexMatrix, x: &Vector) -> Result<Vector> {
    m.matvec(x)
}

pub fn frobenius_norm(m: &ComplexMatrix) -> f64 {
    m.frobenius_norm()
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex;
    fn index(&self, (i, j): (usize, usize)) -> &Complex {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex {
        &mut self.data[i * self.dim + j]
    }
}

// Operator impls panic on dimension mismatch; use `matmul` for the fallible form.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Mul<&Vector> for &ComplexMatrix {
    type Output = Vector;
    fn mul(self, rhs: &Vector) -> Vector {
        assert_eq!(self.dim, rhs.len(), "matrix/vector dimension mismatch");
        self.apply(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.dim, rhs.dim, "matrix dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Wire form of a matrix: `{"dim": n, "data": [[[re, im], ...], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub data: Vec<Vec<[f64; 2]>>,
}

impl TryFrom<MatrixJson> for ComplexMatrix {
    type Error = Error;
    fn try_from(json: MatrixJson) -> Result<Self> {
        if json.data.len() != json.dim {
            return Err(Error::dimension("matrix rows", json.dim, json.data.len()));
        }
        let mut entries = Vec::with_capacity(json.dim * json.dim);
        for row in &json.data {
            if row.len() != json.dim {
                return Err(Error::dimension("matrix row", json.dim, row.len()));
            }
            entries.extend(row.iter().map(|&[re, im]| Complex::new(re, im)));
        }
        ComplexMatrix::from_row_major(json.dim, entries)
    }
}

impl From<ComplexMatrix> for MatrixJson {
    fn from(m: ComplexMatrix) -> Self {
        MatrixJson {
            dim: m.dim,
            data: (0..m.dim)
                .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        }
    }
}

/// Wire form of a vector: `{"dim": n, "data": [[re, im], ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorJson {
    pub dim: usize,
    pub data: Vec<[f64; 2]>,
}

impl TryFrom<VectorJson> for Vector {
    type Error = Error;
    fn try_from(json: VectorJson) -> Result<Self> {
        if json.data.len() != json.dim {
            return Err(Error::dimension("vector entries", json.dim, json.data.len()));
        }
        Vector::new(json.data.iter().map(|&[re, im]| Complex::new(re, im)).collect())
    }
}

impl From<Vector> for VectorJson {
    fn from(v: Vector) -> Self {
        VectorJson {
            dim: v.len(),
            data: v.data.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(ComplexMatrix::identity(3).adjoint(), ComplexMatrix::identity(3));
        let n = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let expected = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[1.0, 0.0]]).unwrap();
        assert_eq!(n.adjoint(), expected);
        let m = ComplexMatrix::diag(&[c(0.0, 1.0), ZERO]);
        assert_eq!(m.adjoint(), ComplexMatrix::diag(&[c(0.0, -1.0), ZERO]));
    }

    #[test]
    fn inner_product_examples() {
        let e1 = Vector::from_real(&[1.0, 0.0]).unwrap();
        let e2 = Vector::from_real(&[0.0, 1.0]).unwrap();
        assert_eq!(inner_product(&e1, &e2).unwrap(), ZERO);
        let x = Vector::from_real(&[2.0, 1.0, 0.0]).unwrap();
        assert_eq!(inner_product(&x, &x).unwrap(), c(5.0, 0.0));
        // <(1, i), (1, 1)> = 1*1 + i*conj(1) = 1 + i
        let x = Vector::new(vec![ONE, c(0.0, 1.0)]).unwrap();
        let y = Vector::from_real(&[1.0, 1.0]).unwrap();
        assert_eq!(inner_product(&x, &y).unwrap(), c(1.0, 1.0));
    }

    #[test]
    fn inner_product_length_mismatch() {
        let x = Vector::from_real(&[1.0]).unwrap();
        let y = Vector::from_real(&[1.0, 2.0]).unwrap();
        assert!(matches!(inner_product(&x, &y), Err(Error::Dimension { .. })));
    }

    #[test]
    fn products_and_norms() {
        let m = ComplexMatrix::from_rows(&[vec![c(1.0, 2.0), c(0.0, -1.0)], vec![c(3.0, 0.0), c(0.5, 0.5)]])
            .unwrap();
        assert_eq!(matmul(&ComplexMatrix::identity(2), &m).unwrap(), m);
        let shift_adj = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let x = Vector::from_real(&[2.0, 1.0]).unwrap();
        assert_eq!(matvec(&shift_adj, &x).unwrap(), Vector::from_real(&[1.0, 0.0]).unwrap());
        assert_eq!(frobenius_norm(&ComplexMatrix::diag_real(&[3.0, 4.0])), 5.0);
        assert!(matmul(&m, &ComplexMatrix::identity(3)).is_err());
        assert!(matvec(&m, &Vector::zeros(3)).is_err());
    }

    #[test]
    fn construction_rejects_non_finite() {
        let err = ComplexMatrix::from_row_major(1, vec![c(f64::NAN, 0.0)]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { index: 0 }));
        assert!(Vector::new(vec![c(0.0, f64::INFINITY)]).is_err());
        assert!(ComplexMatrix::from_row_major(2, vec![ONE; 3]).is_err());
        assert!(ComplexMatrix::from_row_major(0, vec![]).is_err());
    }

    #[test]
    fn json_shape() {
        let m = ComplexMatrix::from_rows(&[vec![c(1.0, -2.0), ZERO], vec![ONE, c(0.0, 3.0)]]).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(text, r#"{"dim":2,"data":[[[1.0,-2.0],[0.0,0.0]],[[1.0,0.0],[0.0,3.0]]]}"#);
        let back: ComplexMatrix = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        let bad = r#"{"dim":2,"data":[[[1.0,0.0]],[[1.0,0.0],[0.0,0.0]]]}"#;
        assert!(serde_json::from_str::<ComplexMatrix>(bad).is_err());
        let v: Vector = serde_json::from_str(r#"{"dim":2,"data":[[1,0],[0,1]]}"#).unwrap();
        assert_eq!(v[1], c(0.0, 1.0));
    }
}
