use std::fmt;

use crate::error::MatrixError;
use crate::scalar::Scalar;

/// Square matrix in row-major order.
#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    dim: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![T::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, MatrixError> {
        let dim = rows.len();
        if dim == 0 {
            return Err(MatrixError::Empty);
        }
        let mut data = Vec::with_capacity(dim * dim);
        for (row, r) in rows.into_iter().enumerate() {
            if r.len() != dim {
                return Err(MatrixError::NotSquare {
                    rows: dim,
                    row,
                    len: r.len(),
                });
            }
            data.extend(r);
        }
        Ok(Self { dim, data })
    }

    /// Builds a matrix from `(numer, denom)` pairs.
    pub fn from_ratios(rows: &[&[(i64, i64)]]) -> Result<Self, MatrixError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(n, d)| T::from_ratio(n, d)).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.dim + j] = value;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[T]> {
        self.data.chunks(self.dim.max(1))
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn is_nonnegative(&self) -> bool {
        self.data.iter().all(|x| *x >= T::zero())
    }

    pub fn check_nonnegative(&self) -> Result<(), MatrixError> {
        match self.data.iter().position(|x| *x < T::zero()) {
            Some(k) => Err(MatrixError::Negative(k / self.dim, k % self.dim)),
            None => Ok(()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self, MatrixError> {
        if self.dim != rhs.dim {
            return Err(MatrixError::DimensionMismatch(self.dim, rhs.dim));
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * n + j;
                    out.data[idx] = out.data[idx].clone() + a.clone() * b.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>, MatrixError> {
        if v.len() != self.dim {
            return Err(MatrixError::DimensionMismatch(self.dim, v.len()));
        }
        Ok(self
            .rows()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect())
    }

    /// `self^k` by repeated squaring.
    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::identity(self.dim);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).expect("same dimension");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same dimension");
            }
        }
        acc
    }

    /// Induced max-norm: the largest absolute row sum.
    pub fn max_norm(&self) -> T {
        self.rows()
            .map(|row| row.iter().fold(T::zero(), |acc, x| acc + x.abs()))
            .fold(T::zero(), |best, s| if s > best { s } else { best })
    }

    /// Principal submatrix on `indices`, in the given order.
    pub fn principal_submatrix(&self, indices: &[usize]) -> Self {
        let n = indices.len();
        let mut data = Vec::with_capacity(n * n);
        for &i in indices {
            for &j in indices {
                data.push(self.get(i, j).clone());
            }
        }
        Self { dim: n, data }
    }

    /// `P M P^{-1}` where row `k` of the result is row `order[k]` of `self`.
    pub fn permuted(&self, order: &[usize]) -> Self {
        self.principal_submatrix(order)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn to_f64(&self) -> Matrix<f64> {
        self.map(|x| x.to_f64())
    }

    /// Directed support graph: `adj[j]` lists every `i` with `M[i][j] > 0`,
    /// i.e. the edge `j -> i` reads "curve j lifts to curve i".
    pub fn support_graph(&self) -> Vec<Vec<usize>> {
        let n = self.dim;
        (0..n)
            .map(|j| (0..n).filter(|&i| self.get(i, j).is_positive()).collect())
            .collect()
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<Vec<String>> = self
            .rows()
            .map(|r| r.iter().map(|x| x.to_string()).collect())
            .collect();
        write!(f, "Matrix{rows:?}")
    }
}

/// Largest absolute coordinate.
pub fn vector_max_norm<T: Scalar>(v: &[T]) -> Result<T, MatrixError> {
    if v.is_empty() {
        return Err(MatrixError::Empty);
    }
    Ok(v.iter()
        .map(|x| x.abs())
        .fold(T::zero(), |best, x| if x > best { x } else { best }))
}

/// Induced max-norm of a matrix; errors on an empty matrix.
pub fn matrix_max_norm<T: Scalar>(m: &Matrix<T>) -> Result<T, MatrixError> {
    if m.dim() == 0 {
        return Err(MatrixError::Empty);
    }
    Ok(m.max_norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{ratio, Rational};

    #[test]
    fn max_norm_examples() {
        assert_eq!(vector_max_norm(&[1.0, -3.0, 2.0]).unwrap(), 3.0);
        assert_eq!(Matrix::<Rational>::identity(3).max_norm(), ratio(1, 1));
        let swap = Matrix::<Rational>::from_ratios(&[&[(0, 1), (1, 1)], &[(1, 1), (0, 1)]]).unwrap();
        assert_eq!(swap.max_norm(), ratio(1, 1));
        assert_eq!(vector_max_norm::<f64>(&[]), Err(MatrixError::Empty));
    }

    #[test]
    fn rejects_ragged_rows() {
        let err = Matrix::<f64>::from_rows(vec![vec![1.0, 2.0], vec![3.0]]).unwrap_err();
        assert!(matches!(err, MatrixError::NotSquare { row: 1, .. }));
        assert_eq!(Matrix::<f64>::from_rows(vec![]).unwrap_err(), MatrixError::Empty);
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let m = Matrix::<Rational>::from_ratios(&[&[(1, 2), (1, 3)], &[(0, 1), (2, 1)]]).unwrap();
        let mut acc = Matrix::identity(2);
        for k in 0..6 {
            assert_eq!(m.pow(k), acc);
            acc = acc.mul(&m).unwrap();
        }
    }

    #[test]
    fn support_graph_edges_follow_columns() {
        let m = Matrix::<f64>::from_rows(vec![vec![1.0, 0.0], vec![1.0, 1.0]]).unwrap();
        // entry (1,0) > 0 gives edge 0 -> 1
        assert_eq!(m.support_graph(), vec![vec![0, 1], vec![1]]);
    }
}
