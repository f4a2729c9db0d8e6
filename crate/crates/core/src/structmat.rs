//! Dense linear algebra with centrosymmetric structure support.

use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Tolerance used for structure classification, relative to the largest entry.
pub const STRUCTURE_TOL: f64 = 1e-10;

/// Row-major dense matrix.
#[derive(Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl fmt::Debug for DenseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "DenseMatrix {}x{}", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Contra-identity J (ones on the anti-diagonal).
    pub fn exchange(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, n - 1 - i)] = 1.0;
        }
        m
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(DenseMatrix {
            rows: rows.len(),
            cols,
            data,
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: x.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn add(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &DenseMatrix) -> Result<DenseMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &DenseMatrix, f: impl Fn(f64, f64) -> f64) -> Result<DenseMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(*a, *b)).collect(),
        })
    }

    pub fn scale(&self, s: f64) -> DenseMatrix {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Copy of the block starting at (r0, c0).
    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> DenseMatrix {
        Self::from_fn(rows, cols, |i, j| self[(r0 + i, c0 + j)])
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &DenseMatrix) {
        for i in 0..b.rows {
            for j in 0..b.cols {
                self[(r0 + i, c0 + j)] = b[(i, j)];
            }
        }
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(|a| a.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, a| m.max(a.abs()))
    }

    pub fn is_symmetric(&self, tol: f64) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| (self[(i, j)] - self[(j, i)]).abs() <= tol))
    }
}

impl Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for DenseMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

/// LU factorization with partial pivoting, PA = LU.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: DenseMatrix,
    perm: Vec<usize>,
    norm_1: f64,
}

impl Lu {
    pub fn factor(a: &DenseMatrix) -> Result<Lu> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch {
                expected: a.rows(),
                found: a.cols(),
            });
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -1.0), |best, c| if c.1 > best.1 { c } else { best });
            if !(pmax > 0.0) || !pmax.is_finite() {
                return Err(Error::Singular { pivot: k });
            }
            if p != k {
                for j in 0..n {
                    lu.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let pivot = lu[(k, k)];
            for i in (k + 1)..n {
                let m = lu[(i, k)] / pivot;
                lu[(i, k)] = m;
                if m != 0.0 {
                    for j in (k + 1)..n {
                        let v = lu[(k, j)];
                        lu[(i, j)] -= m * v;
                    }
                }
            }
        }
        Ok(Lu {
            n,
            lu,
            perm,
            norm_1: a.norm_1(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    fn check_len(&self, b: &[f64]) -> Result<()> {
        if b.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: b.len(),
            });
        }
        Ok(())
    }

    /// Solves A x = b.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.check_len(b)?;
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = ((i + 1)..n).map(|j| self.lu[(i, j)] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[(i, i)];
        }
        Ok(x)
    }

    /// Solves A^T x = b.
    pub fn solve_transpose(&self, b: &[f64]) -> Result<Vec<f64>> {
        self.check_len(b)?;
        let n = self.n;
        // A^T = U^T L^T P, so solve U^T z = b, L^T w = z, x = P^T w.
        let mut z = b.to_vec();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[(j, i)] * z[j]).sum();
            z[i] = (z[i] - s) / self.lu[(i, i)];
        }
        for i in (0..n).rev() {
            let s: f64 = ((i + 1)..n).map(|j| self.lu[(j, i)] * z[j]).sum();
            z[i] -= s;
        }
        let mut x = vec![0.0; n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = z[k];
        }
        Ok(x)
    }

    /// Solves A X = B column by column.
    pub fn solve_matrix(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        if b.rows() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: b.rows(),
            });
        }
        let mut out = DenseMatrix::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            let col: Vec<f64> = (0..b.rows()).map(|i| b[(i, j)]).collect();
            let x = self.solve(&col)?;
            for (i, v) in x.into_iter().enumerate() {
                out[(i, j)] = v;
            }
        }
        Ok(out)
    }

    /// Computes B A^{-1} through transposed solves.
    pub fn right_divide(&self, b: &DenseMatrix) -> Result<DenseMatrix> {
        if b.cols() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: b.cols(),
            });
        }
        let mut out = DenseMatrix::zeros(b.rows(), b.cols());
        for i in 0..b.rows() {
            let x = self.solve_transpose(b.row(i))?;
            out.data[i * self.n..(i + 1) * self.n].copy_from_slice(&x);
        }
        Ok(out)
    }

    /// Estimate of ||A^{-1}||_1 (Hager's method with Higham's extra test vector).
    pub fn inverse_norm_1_estimate(&self) -> Result<f64> {
        let n = self.n;
        if n == 0 {
            return Ok(0.0);
        }
        let mut x = vec![1.0 / n as f64; n];
        let mut est = 0.0;
        let mut last_j = usize::MAX;
        for _ in 0..5 {
            let y = self.solve(&x)?;
            est = y.iter().map(|v| v.abs()).sum::<f64>();
            let xi: Vec<f64> = y.iter().map(|v| if *v >= 0.0 { 1.0 } else { -1.0 }).collect();
            let z = self.solve_transpose(&xi)?;
            let (j, zmax) = z
                .iter()
                .enumerate()
                .map(|(i, v)| (i, v.abs()))
                .fold((0, -1.0), |b, c| if c.1 > b.1 { c } else { b });
            let ztx: f64 = z.iter().zip(&x).map(|(a, b)| a * b).sum();
            if zmax <= ztx || j == last_j {
                break;
            }
            last_j = j;
            x = vec![0.0; n];
            x[j] = 1.0;
        }
        let alt: Vec<f64> = (0..n)
            .map(|i| {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                s * (1.0 + i as f64 / (n.max(2) - 1) as f64)
            })
            .collect();
        let y = self.solve(&alt)?;
        let alt_est = 2.0 * y.iter().map(|v| v.abs()).sum::<f64>() / (3.0 * n as f64);
        Ok(est.max(alt_est))
    }

    /// 1-norm condition number estimate.
    pub fn condition_estimate(&self) -> Result<f64> {
        Ok(self.norm_1 * self.inverse_norm_1_estimate()?)
    }
}

/// Solves A x = b with partial pivoting.
pub fn lu_solve(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    Lu::factor(a)?.solve(b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Structure {
    Centrosymmetric,
    SkewCentrosymmetric,
    Neither,
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Structure::Centrosymmetric => "centrosymmetric",
            Structure::SkewCentrosymmetric => "skew-centrosymmetric",
            Structure::Neither => "neither",
        })
    }
}

/// Classifies a square matrix by its behaviour under 180-degree rotation.
/// A non-square matrix is `Neither`.
pub fn classify_structure(a: &DenseMatrix) -> Structure {
    if !a.is_square() {
        return Structure::Neither;
    }
    let n = a.rows();
    let tol = STRUCTURE_TOL * a.max_abs().max(1.0);
    let rot = |i: usize, j: usize| a[(n - 1 - i, n - 1 - j)];
    let all = |f: &dyn Fn(f64, f64) -> bool| {
        (0..n).all(|i| (0..n).all(|j| f(a[(i, j)], rot(i, j))))
    };
    if all(&|x, y| (x - y).abs() <= tol) {
        Structure::Centrosymmetric
    } else if all(&|x, y| (x + y).abs() <= tol) {
        Structure::SkewCentrosymmetric
    } else {
        Structure::Neither
    }
}

fn apply_exchange_cols(m: &DenseMatrix) -> DenseMatrix {
    let c = m.cols();
    DenseMatrix::from_fn(m.rows(), c, |i, j| m[(i, c - 1 - j)])
}

/// Splits a centrosymmetric matrix into two decoupled half-size blocks.
///
/// Even order 2n: M1 = A11 + A12 J and M2 = A11 - A12 J, both n x n.
/// Odd order 2n+1 with centre row (b^T, m, b^T J) and centre column (a, m, J a):
/// M1 = [[A11 + A12 J, sqrt2 a], [sqrt2 b^T, m]] of order n+1 and
/// M2 = A11 - A12 J of order n. The spectrum of A is the union of theirs.
pub fn centro_halve(a: &DenseMatrix) -> Result<(DenseMatrix, DenseMatrix)> {
    if classify_structure(a) != Structure::Centrosymmetric {
        return Err(Error::Structure("matrix is not centrosymmetric".into()));
    }
    let n2 = a.rows();
    let n = n2 / 2;
    let odd = n2 % 2 == 1;
    let off = if odd { n + 1 } else { n };
    let a11 = a.block(0, 0, n, n);
    let a12j = apply_exchange_cols(&a.block(0, off, n, n));
    let m2 = a11.sub(&a12j)?;
    let top = a11.add(&a12j)?;
    if !odd {
        return Ok((top, m2));
    }
    let s2 = std::f64::consts::SQRT_2;
    let mut m1 = DenseMatrix::zeros(n + 1, n + 1);
    m1.set_block(0, 0, &top);
    for i in 0..n {
        m1[(i, n)] = s2 * a[(i, n)];
        m1[(n, i)] = s2 * a[(n, i)];
    }
    m1[(n, n)] = a[(n, n)];
    Ok((m1, m2))
}

/// Solves A x = b for centrosymmetric A through the two half systems.
pub fn centro_solve(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    let (m1, m2) = centro_halve(a)?;
    let n2 = a.rows();
    let n = n2 / 2;
    let odd = n2 % 2 == 1;
    let off = if odd { n + 1 } else { n };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    // b rotated into the decoupled basis.
    let mut c1: Vec<f64> = (0..n).map(|i| h * (b[i] + b[n2 - 1 - i])).collect();
    let c2: Vec<f64> = (0..n).map(|i| h * (b[i] - b[n2 - 1 - i])).collect();
    if odd {
        c1.push(b[n]);
    }
    let y1 = lu_solve(&m1, &c1)?;
    let y2 = lu_solve(&m2, &c2)?;
    let mut x = vec![0.0; n2];
    for i in 0..n {
        x[i] = h * (y1[i] + y2[i]);
        x[n2 - 1 - i] = h * (y1[i] - y2[i]);
    }
    if odd {
        x[n] = y1[n];
    }
    debug_assert_eq!(off + n, n2);
    Ok(x)
}

/// Two-sided transform [[I, J], [0, I]] A [[I, 0], [-J, I]] on an even-order
/// matrix. For centrosymmetric A the top-left block of the result vanishes.
pub fn precondition_even(a: &DenseMatrix) -> Result<DenseMatrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: a.cols(),
        });
    }
    let n2 = a.rows();
    if n2 % 2 == 1 {
        return Err(Error::Unsupported(
            "the two-sided block transform is defined for even order only".into(),
        ));
    }
    let n = n2 / 2;
    let mut left = DenseMatrix::identity(n2);
    let mut right = DenseMatrix::identity(n2);
    let j = DenseMatrix::exchange(n);
    left.set_block(0, n, &j);
    right.set_block(n, 0, &j.scale(-1.0));
    left.matmul(a)?.matmul(&right)
}

/// Similarity transform [[I, J], [0, I]] A [[I, -J], [0, I]] on an even-order
/// matrix. For centrosymmetric A the result is block lower triangular with
/// diagonal blocks A11 + A12 J and J (A11 - A12 J) J. Identity maps to itself.
pub fn block_triangularize_even(a: &DenseMatrix) -> Result<DenseMatrix> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: a.cols(),
        });
    }
    let n2 = a.rows();
    if n2 % 2 == 1 {
        return Err(Error::Unsupported(
            "the two-sided block transform is defined for even order only".into(),
        ));
    }
    let n = n2 / 2;
    let mut left = DenseMatrix::identity(n2);
    let mut right = DenseMatrix::identity(n2);
    let j = DenseMatrix::exchange(n);
    left.set_block(0, n, &j);
    right.set_block(0, n, &j.scale(-1.0));
    left.matmul(a)?.matmul(&right)
}

/// Per-row and per-column location of the largest-magnitude entry.
#[derive(Debug, Clone, PartialEq)]
pub struct DominanceReport {
    /// (column, value) of the largest entry in each row.
    pub row_max: Vec<(usize, f64)>,
    /// (row, value) of the largest entry in each column.
    pub col_max: Vec<(usize, f64)>,
    /// Rows whose largest entry sits off the diagonal.
    pub off_diagonal_rows: Vec<usize>,
}

pub fn dominance_report(a: &DenseMatrix) -> DominanceReport {
    let argmax = |it: &mut dyn Iterator<Item = (usize, f64)>| {
        it.fold((0, 0.0f64), |b, c| if c.1.abs() > b.1.abs() { c } else { b })
    };
    let row_max: Vec<(usize, f64)> = (0..a.rows())
        .map(|i| argmax(&mut (0..a.cols()).map(|j| (j, a[(i, j)]))))
        .collect();
    let col_max = (0..a.cols())
        .map(|j| argmax(&mut (0..a.rows()).map(|i| (i, a[(i, j)]))))
        .collect();
    let off_diagonal_rows = row_max
        .iter()
        .enumerate()
        .filter(|(i, (j, v))| *i != *j && (a[(*i, *i)].abs() < v.abs()))
        .map(|(i, _)| i)
        .collect();
    DominanceReport {
        row_max,
        col_max,
        off_diagonal_rows,
    }
}
