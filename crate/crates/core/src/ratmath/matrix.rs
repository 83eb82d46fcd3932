use std::fmt;
use std::ops::Mul;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use super::rational::{common_denominator, rat, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is singular")]
    SingularMatrix,
}

/// Dense row-major matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self, MatrixError> {
        if rows == 0 || cols == 0 {
            return Err(MatrixError::ShapeMismatch(format!(
                "dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(MatrixError::ShapeMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from integer rows. Panics on ragged or empty input.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        let data = rows.iter().flatten().map(|&v| rat(v)).collect();
        Self::new(r, c, data).expect("non-empty integer matrix")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![Rational::zero(); rows * cols]).expect("positive dimensions")
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
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

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * k).collect(),
        }
    }

    pub fn checked_mul(&self, rhs: &Matrix) -> Result<Matrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let idx = i * rhs.cols + j;
                    out.data[idx] += a * rhs.get(k, j);
                }
            }
        }
        Ok(out)
    }

    /// `self · v` for a column vector.
    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>, MatrixError> {
        if v.len() != self.cols {
            return Err(MatrixError::ShapeMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// Exact inverse by Gauss-Jordan elimination on `[self | I]`.
    pub fn invert(&self) -> Result<Matrix, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::ShapeMismatch(format!(
                "inverse of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.row_vecs();
        let mut inv = Self::identity(n).row_vecs();
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(MatrixError::SingularMatrix)?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let p = a[col][col].clone();
            for v in a[col].iter_mut().chain(inv[col].iter_mut()) {
                *v /= &p;
            }
            for r in 0..n {
                if r == col || a[r][col].is_zero() {
                    continue;
                }
                let factor = a[r][col].clone();
                for c in 0..n {
                    let t = &factor * &a[col][c];
                    a[r][c] -= t;
                    let t = &factor * &inv[col][c];
                    inv[r][c] -= t;
                }
            }
        }
        Self::new(n, n, inv.into_iter().flatten().collect())
    }

    /// Exact determinant by fraction-field elimination.
    pub fn determinant(&self) -> Result<Rational, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::ShapeMismatch(format!(
                "determinant of non-square {}x{} matrix",
                self.rows, self.cols
            )));
        }
        let n = self.rows;
        let mut a = self.row_vecs();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
                return Ok(Rational::zero());
            };
            if pivot != col {
                a.swap(col, pivot);
                det = -det;
            }
            let p = a[col][col].clone();
            det *= &p;
            for r in col + 1..n {
                if a[r][col].is_zero() {
                    continue;
                }
                let factor = &a[r][col] / &p;
                for c in col..n {
                    let t = &factor * &a[col][c];
                    a[r][c] -= t;
                }
            }
        }
        Ok(det)
    }

    /// Determinants of the top-left k×k blocks, k = 1..=n.
    pub fn leading_principal_minors(&self) -> Result<Vec<Rational>, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::ShapeMismatch("minors of non-square matrix".into()));
        }
        (1..=self.rows)
            .map(|k| {
                let data = (0..k)
                    .flat_map(|r| self.row(r)[..k].iter().cloned())
                    .collect();
                Self::new(k, k, data)?.determinant()
            })
            .collect()
    }

    /// Sylvester's criterion: the k-th leading minor has sign (−1)^k.
    pub fn is_negative_definite(&self) -> bool {
        if self.transpose() != *self {
            return false;
        }
        match self.leading_principal_minors() {
            Ok(minors) => minors.iter().enumerate().all(|(i, m)| {
                if i % 2 == 0 {
                    m.is_negative()
                } else {
                    m.is_positive()
                }
            }),
            Err(_) => false,
        }
    }

    /// Splits the matrix as `factor · integer_matrix`, pulling out the lcm of
    /// the denominators (and the common sign when every entry is non-positive).
    pub fn factored(&self) -> (Rational, Vec<Vec<Rational>>) {
        let den = common_denominator(&self.data);
        let all_nonpos = self.data.iter().all(|v| !v.is_positive());
        let mut factor = Rational::new(1.into(), den.clone());
        if all_nonpos && self.data.iter().any(|v| !v.is_zero()) {
            factor = -factor;
        }
        let scaled = self.scale(&factor.recip());
        (factor, scaled.row_vecs())
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        self.checked_mul(rhs).expect("matrix shapes must agree")
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.data.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for r in 0..self.rows {
            let line: Vec<String> = cells[r * self.cols..(r + 1) * self.cols]
                .iter()
                .map(|c| format!("{c:>width$}"))
                .collect();
            writeln!(f, "[ {} ]", line.join("  "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratmath::ratio;
    use proptest::prelude::*;

    fn tridiagonal(p: i64) -> Matrix {
        let n = (p - 1) as usize;
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, rat(if i + 1 == n { -(p + 2) } else { -2 }));
            if i + 1 < n {
                m.set(i, i + 1, rat(1));
                m.set(i + 1, i, rat(1));
            }
        }
        m
    }

    #[test]
    fn one_by_one_inverse() {
        let m = Matrix::from_i64_rows(&[vec![-4]]);
        assert_eq!(m.invert().unwrap(), Matrix::new(1, 1, vec![ratio(-1, 4)]).unwrap());
    }

    #[test]
    fn identity_is_its_own_inverse() {
        assert_eq!(Matrix::identity(3).invert().unwrap(), Matrix::identity(3));
    }

    #[test]
    fn q7_matches_published_matrix() {
        let q = tridiagonal(7).invert().unwrap();
        let expected = Matrix::from_i64_rows(&[
            vec![41, 33, 25, 17, 9, 1],
            vec![33, 66, 50, 34, 18, 2],
            vec![25, 50, 75, 51, 27, 3],
            vec![17, 34, 51, 68, 36, 4],
            vec![9, 18, 27, 36, 45, 5],
            vec![1, 2, 3, 4, 5, 6],
        ])
        .scale(&ratio(-1, 49));
        assert_eq!(q, expected);
        let (factor, ints) = q.factored();
        assert_eq!(factor, ratio(-1, 49));
        assert_eq!(ints[0][0], rat(41));
    }

    #[test]
    fn singular_and_non_square() {
        let m = Matrix::from_i64_rows(&[vec![1, 2], vec![2, 4]]);
        assert_eq!(m.invert(), Err(MatrixError::SingularMatrix));
        assert_eq!(m.determinant().unwrap(), rat(0));
        let r = Matrix::from_i64_rows(&[vec![1, 2, 3]]);
        assert!(matches!(r.invert(), Err(MatrixError::ShapeMismatch(_))));
        assert!(Matrix::new(2, 2, vec![rat(1)]).is_err());
    }

    #[test]
    fn definiteness() {
        assert!(tridiagonal(5).is_negative_definite());
        assert!(!Matrix::identity(2).is_negative_definite());
        assert!(!Matrix::from_i64_rows(&[vec![-1, 0], vec![0, 1]]).is_negative_definite());
    }

    fn invertible_candidate() -> impl Strategy<Value = Matrix> {
        (1usize..=8).prop_flat_map(|n| {
            proptest::collection::vec(-5i64..=5, n * n)
                .prop_map(move |v| Matrix::new(n, n, v.into_iter().map(rat).collect()).unwrap())
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn inverse_is_exact(m in invertible_candidate()) {
            match m.invert() {
                Ok(inv) => {
                    prop_assert_eq!(&inv * &m, Matrix::identity(m.rows()));
                    prop_assert_eq!(&m * &inv, Matrix::identity(m.rows()));
                }
                Err(e) => {
                    prop_assert_eq!(e, MatrixError::SingularMatrix);
                    prop_assert_eq!(m.determinant().unwrap(), rat(0));
                }
            }
        }
    }
}
