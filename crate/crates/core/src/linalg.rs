//! Exact dense linear algebra over the rationals.
//!
//! Everything cohomological in this crate bottoms out here: coboundary
//! operators become [`Matrix`] values, cocycle and coboundary spaces become
//! [`Subspace`] values, and cohomology classes are canonical coset
//! representatives obtained by reducing against an RREF basis.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact rational scalar, always kept in lowest terms with a positive
/// denominator.
pub type Scalar = BigRational;

pub fn scalar(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    Scalar::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"` (optional sign, surrounding whitespace allowed).
pub fn parse_scalar(text: &str) -> Option<Scalar> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Scalar::new(num, den))
}

pub fn zero_vector(n: usize) -> Vec<Scalar> {
    vec![Scalar::zero(); n]
}

pub fn is_zero_vector(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// Dense row-major matrix of exact rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Builds a matrix from rows. All rows must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: n,
            cols,
            data,
        })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| scalar(x)).collect())
            .collect();
        Matrix::from_rows(cols, rows).expect("ragged integer matrix")
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Result<Self> {
        let mut m = Matrix::zeros(rows, columns.len());
        for (c, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    found: col.len(),
                });
            }
            for (r, x) in col.iter().enumerate() {
                m.set(r, c, x.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Scalar) {
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let b = other.get(k, c);
                    if !b.is_zero() {
                        let idx = r * out.cols + c;
                        out.data[idx] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.cols,
            });
        }
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: other.rows,
            });
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend(self.row(r).iter().cloned());
            data.extend(other.row(r).iter().cloned());
        }
        Ok(Matrix {
            rows: self.rows,
            cols,
            data,
        })
    }

    /// Reduced row echelon form together with the pivot column of each
    /// nonzero row. Zero rows are kept at the bottom so the shape is unchanged.
    pub fn rref_with_pivots(&self) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(found) = (pivot_row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(found, pivot_row);
            let inv = m.get(pivot_row, col).recip();
            for c in col..m.cols {
                let idx = pivot_row * m.cols + c;
                if !m.data[idx].is_zero() {
                    m.data[idx] = &m.data[idx] * &inv;
                }
            }
            for r in 0..m.rows {
                if r == pivot_row {
                    continue;
                }
                let factor = m.get(r, col).clone();
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let p = m.get(pivot_row, c);
                    if p.is_zero() {
                        continue;
                    }
                    let delta = &factor * p;
                    let idx = r * m.cols + c;
                    m.data[idx] -= delta;
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        (m, pivots)
    }

    pub fn rref(&self) -> Matrix {
        self.rref_with_pivots().0
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Null space `{x : m x = 0}` as a subspace of the column coordinates.
    pub fn kernel(&self) -> Subspace {
        let (r, pivots) = self.rref_with_pivots();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut vectors = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = zero_vector(self.cols);
            v[free] = Scalar::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, free).clone();
            }
            vectors.push(v);
        }
        Subspace::span(self.cols, vectors).expect("kernel vectors have ambient length")
    }

    /// Column space as a subspace of the row coordinates.
    pub fn image(&self) -> Subspace {
        let columns = (0..self.cols).map(|c| self.column(c)).collect();
        Subspace::span(self.rows, columns).expect("columns have ambient length")
    }

    /// Solves `m x = b`. Returns `None` when `b` is not in the image, otherwise
    /// one particular solution together with the kernel of `m`.
    pub fn solve_affine(&self, b: &[Scalar]) -> Result<Option<(Vec<Scalar>, Subspace)>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let rhs = Matrix::from_columns(self.rows, &[b.to_vec()])?;
        let augmented = self.hstack(&rhs)?;
        let (r, pivots) = augmented.rref_with_pivots();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = zero_vector(self.cols);
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = r.get(row, self.cols).clone();
        }
        Ok(Some((x, self.kernel())))
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n)).ok()?;
        let (r, pivots) = aug.rref_with_pivots();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

/// A linear subspace of `Q^ambient_dim`, stored as the nonzero rows of its
/// RREF basis. Two subspaces are equal iff these matrices are identical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
    pivots: Vec<usize>,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {}) ", self.dim(), self.ambient_dim)?;
        fmt::Debug::fmt(&self.basis, f)
    }
}

impl Subspace {
    pub fn zero(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::zeros(0, ambient_dim),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
            pivots: (0..ambient_dim).collect(),
        }
    }

    pub fn span(ambient_dim: usize, vectors: Vec<Vec<Scalar>>) -> Result<Self> {
        let m = Matrix::from_rows(ambient_dim, vectors)?;
        let (r, pivots) = m.rref_with_pivots();
        let keep = pivots.len();
        let basis = Matrix {
            rows: keep,
            cols: ambient_dim,
            data: r.data[..keep * ambient_dim].to_vec(),
        };
        Ok(Subspace {
            ambient_dim,
            basis,
            pivots,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn is_zero(&self) -> bool {
        self.pivots.is_empty()
    }

    /// RREF basis matrix (rows are basis vectors).
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_vectors(&self) -> Vec<Vec<Scalar>> {
        (0..self.dim())
            .map(|r| self.basis.row(r).to_vec())
            .collect()
    }

    fn check_len(&self, v: &[Scalar]) -> Result<()> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: v.len(),
            });
        }
        Ok(())
    }

    /// Canonical coset representative of `v` modulo this subspace: the
    /// remainder after eliminating every pivot coordinate.
    pub fn reduce(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        self.check_len(v)?;
        let mut out = v.to_vec();
        for (row, &p) in self.pivots.iter().enumerate() {
            let factor = out[p].clone();
            if factor.is_zero() {
                continue;
            }
            for (c, b) in self.basis.row(row).iter().enumerate() {
                if !b.is_zero() {
                    out[c] -= &factor * b;
                }
            }
        }
        Ok(out)
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        Ok(is_zero_vector(&self.reduce(v)?))
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> Result<bool> {
        for v in self.basis_vectors() {
            if !other.contains(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        let mut vectors = self.basis_vectors();
        vectors.extend(other.basis_vectors());
        Subspace::span(self.ambient_dim, vectors)
    }

    /// Rows span the annihilator: `v` lies in the subspace iff `A v = 0`.
    pub fn annihilator(&self) -> Matrix {
        let comp = self.basis.kernel();
        comp.basis.clone()
    }

    pub fn intersection(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        // x = c^T B_self with A_other x = 0.
        let coeffs = other.annihilator().mul(&self.basis.transpose())?.kernel();
        let vectors = coeffs
            .basis_vectors()
            .into_iter()
            .map(|c| self.combine(&c))
            .collect();
        Subspace::span(self.ambient_dim, vectors)
    }

    /// Linear combination of the RREF basis rows.
    pub fn combine(&self, coeffs: &[Scalar]) -> Vec<Scalar> {
        let mut out = zero_vector(self.ambient_dim);
        for (row, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, b) in self.basis.row(row).iter().enumerate() {
                if !b.is_zero() {
                    out[i] += c * b;
                }
            }
        }
        out
    }

    /// Image of this subspace under `m` (which maps this ambient space into
    /// `m.rows()` coordinates).
    pub fn image_under(&self, m: &Matrix) -> Result<Subspace> {
        let vectors = self
            .basis_vectors()
            .iter()
            .map(|v| m.mul_vec(v))
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(m.rows(), vectors)
    }

    /// `{x : m x ∈ target}` as a subspace of the column coordinates of `m`.
    pub fn preimage(m: &Matrix, target: &Subspace) -> Result<Subspace> {
        if m.rows() != target.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: target.ambient_dim,
                found: m.rows(),
            });
        }
        let ann = target.annihilator();
        if ann.rows() == 0 {
            return Ok(Subspace::full(m.cols()));
        }
        Ok(ann.mul(m)?.kernel())
    }

    /// Basis of canonical representatives for `self / modulus`. Each returned
    /// vector is already reduced modulo `modulus`.
    pub fn quotient_basis(&self, modulus: &Subspace) -> Result<Vec<Vec<Scalar>>> {
        let reduced = self
            .basis_vectors()
            .iter()
            .map(|v| modulus.reduce(v))
            .collect::<Result<Vec<_>>>()?;
        Ok(Subspace::span(self.ambient_dim, reduced)?.basis_vectors())
    }
}

/// Canonical representative of the coset `rep + modulus`.
pub fn quotient_class(rep: &[Scalar], modulus: &Subspace) -> Result<Vec<Scalar>> {
    modulus.reduce(rep)
}

/// Orders scalars by "simplicity": 0, 1, -1, 2, -2, 1/2, ... Used to pick
/// human-friendly representatives.
pub fn simplicity_key(x: &Scalar) -> (BigInt, BigInt, bool) {
    (x.denom().clone(), x.numer().abs(), x.is_negative())
}
