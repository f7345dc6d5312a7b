//! Dense exact linear algebra.
//!
//! Matrices are row-major. Elimination skips zero entries so the sparse
//! matrices that show up in syzygy computations stay cheap.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<S>]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            debug_assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.set(i, j, v.clone());
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<S> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                let v = self.get(r, c);
                if !v.is_zero() {
                    t.set(c, r, v.clone());
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix<S>) -> Result<Matrix<S>> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        let oc = other.cols;
        for i in 0..self.rows {
            let out_row = &mut out.data[i * oc..(i + 1) * oc];
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let brow = &other.data[k * oc..(k + 1) * oc];
                for (o, b) in out_row.iter_mut().zip(brow) {
                    if !b.is_zero() {
                        *o = o.clone() + a.clone() * b.clone();
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[S]) -> Result<Vec<S>> {
        if v.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let mut out = vec![S::zero(); self.rows];
        for (k, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = &self.data[i * self.cols + k];
                if !a.is_zero() {
                    *o = o.clone() + a.clone() * x.clone();
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Matrix<S>) -> Result<Matrix<S>> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Matrix<S>) -> Result<Matrix<S>> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.clone() - b.clone()).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, s: &S) -> Matrix<S> {
        let data = self.data.iter().map(|a| a.clone() * s.clone()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    /// `self += s * other`, skipping zeros.
    pub fn add_scaled(&mut self, s: &S, other: &Matrix<S>) {
        debug_assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a = a.clone() + s.clone() * b.clone();
            }
        }
    }

    fn check_same_shape(&self, other: &Matrix<S>) -> Result<()> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    pub fn hstack(&self, other: &Matrix<S>) -> Result<Matrix<S>> {
        if self.rows != other.rows {
            return Err(Error::Shape("hstack row mismatch".into()));
        }
        let mut m = Self::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            m.data[r * m.cols..r * m.cols + self.cols].clone_from_slice(self.row(r));
            m.data[r * m.cols + self.cols..(r + 1) * m.cols].clone_from_slice(other.row(r));
        }
        Ok(m)
    }

    pub fn vstack(&self, other: &Matrix<S>) -> Result<Matrix<S>> {
        if self.cols != other.cols {
            return Err(Error::Shape("vstack column mismatch".into()));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    pub fn block_diag(blocks: &[&Matrix<S>]) -> Matrix<S> {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Self::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            m.set_block(r0, c0, b);
            r0 += b.rows;
            c0 += b.cols;
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix<S>) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                let v = b.get(r, c);
                if !v.is_zero() {
                    self.set(r0 + r, c0 + c, v.clone());
                }
            }
        }
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix<S> {
        let mut m = Self::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                m.set(r, j, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix<S> {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Matrix { rows: rows.len(), cols: self.cols, data }
    }

    /// Reduced row-echelon form and its pivot columns.
    pub fn rref(&self) -> (Matrix<S>, Vec<usize>) {
        let mut m = self.clone();
        let pivots = m.rref_in_place();
        (m, pivots)
    }

    fn rref_in_place(&mut self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut pr = 0;
        let mut nz: Vec<usize> = Vec::with_capacity(cols);
        for c in 0..cols {
            if pr == rows {
                break;
            }
            let Some(p) = (pr..rows).find(|&r| !self.data[r * cols + c].is_zero()) else {
                continue;
            };
            if p != pr {
                for j in c..cols {
                    self.data.swap(p * cols + j, pr * cols + j);
                }
            }
            let inv = self.data[pr * cols + c].inverse().expect("nonzero pivot");
            nz.clear();
            for j in c..cols {
                let idx = pr * cols + j;
                if !self.data[idx].is_zero() {
                    self.data[idx] = self.data[idx].clone() * inv.clone();
                    nz.push(j);
                }
            }
            for r in 0..rows {
                if r == pr {
                    continue;
                }
                let f = self.data[r * cols + c].clone();
                if f.is_zero() {
                    continue;
                }
                for &j in &nz {
                    let pv = self.data[pr * cols + j].clone();
                    let idx = r * cols + j;
                    self.data[idx] = self.data[idx].clone() - f.clone() * pv;
                }
            }
            pivots.push(c);
            pr += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right null space, as the columns of the result.
    ///
    /// Each basis vector has a 1 in one free column and zeros in the other
    /// free columns, so coordinates of a kernel vector are its entries at
    /// [`free_columns`].
    pub fn kernel_basis(&self) -> Matrix<S> {
        let (r, pivots) = self.rref();
        kernel_from_rref(&r, &pivots)
    }

    /// Solve `self * x = b`; `None` when `b` is outside the column space.
    pub fn solve(&self, b: &[S]) -> Result<Option<Vec<S>>> {
        if b.len() != self.rows {
            return Err(Error::Shape(format!(
                "right-hand side of length {} for {} rows",
                b.len(),
                self.rows
            )));
        }
        let aug = self.hstack(&Matrix::from_columns(self.rows, &[b.to_vec()]))?;
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![S::zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = r.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Solve `self * X = B` column by column; `None` if any column fails.
    pub fn solve_matrix(&self, b: &Matrix<S>) -> Result<Option<Matrix<S>>> {
        if b.rows != self.rows {
            return Err(Error::Shape("solve_matrix row mismatch".into()));
        }
        let aug = self.hstack(b)?;
        let (r, pivots) = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.cols, b.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for j in 0..b.cols {
                x.set(p, j, r.get(i, self.cols + j).clone());
            }
        }
        Ok(Some(x))
    }

    /// Inverse of a square matrix, if it exists.
    pub fn inverse(&self) -> Option<Matrix<S>> {
        if self.rows != self.cols {
            return None;
        }
        self.solve_matrix(&Matrix::identity(self.rows)).ok().flatten().filter(|_| self.rank() == self.rows)
    }
}

use num_traits::Zero;

/// Columns not carrying a pivot.
pub fn free_columns(cols: usize, pivots: &[usize]) -> Vec<usize> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols).filter(|&c| !is_pivot[c]).collect()
}

pub(crate) fn kernel_from_rref<S: Scalar>(r: &Matrix<S>, pivots: &[usize]) -> Matrix<S> {
    let cols = r.cols();
    let free = free_columns(cols, pivots);
    let mut k = Matrix::zeros(cols, free.len());
    for (j, &f) in free.iter().enumerate() {
        k.set(f, j, S::one());
        for (i, &p) in pivots.iter().enumerate() {
            let v = r.get(i, f);
            if !v.is_zero() {
                k.set(p, j, -v.clone());
            }
        }
    }
    k
}

/// A subspace of `S^n` held as a reduced row-echelon basis.
#[derive(Clone)]
pub struct Subspace<S> {
    ambient: usize,
    basis: Matrix<S>,
    pivots: Vec<usize>,
}

impl<S: Scalar> fmt::Debug for Subspace<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace(dim {} in {})", self.dim(), self.ambient)
    }
}

impl<S: Scalar> Subspace<S> {
    /// Span of the given vectors.
    pub fn span(ambient: usize, vectors: &[Vec<S>]) -> Self {
        let m = Matrix::from_columns(ambient, vectors).transpose();
        Self::row_space(&m)
    }

    /// Span of the rows of `m`.
    pub fn row_space(m: &Matrix<S>) -> Self {
        let (r, pivots) = m.rref();
        let basis = r.select_rows(&(0..pivots.len()).collect::<Vec<_>>());
        Subspace { ambient: m.cols(), basis, pivots }
    }

    /// Span of the columns of `m`.
    pub fn column_space(m: &Matrix<S>) -> Self {
        Self::row_space(&m.transpose())
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Reduced basis vectors.
    pub fn basis_vectors(&self) -> Vec<Vec<S>> {
        (0..self.dim()).map(|i| self.basis.row(i).to_vec()).collect()
    }

    /// Coordinates with respect to the reduced basis, `None` if outside.
    pub fn coordinates(&self, v: &[S]) -> Option<Vec<S>> {
        let coords: Vec<S> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut residual = v.to_vec();
        for (i, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, b) in self.basis.row(i).iter().enumerate() {
                if !b.is_zero() {
                    residual[j] = residual[j].clone() - c.clone() * b.clone();
                }
            }
        }
        residual.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[S]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Standard basis vectors indexing a complement (the non-pivot positions).
    pub fn complement_positions(&self) -> Vec<usize> {
        free_columns(self.ambient, &self.pivots)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp;
    use num_rational::BigRational;
    use proptest::prelude::*;

    type F2 = Fp<2>;
    type F5 = Fp<5>;

    fn f2(rows: Vec<Vec<u64>>) -> Matrix<F2> {
        Matrix::from_rows(rows.into_iter().map(|r| r.into_iter().map(F2::new).collect()).collect())
            .unwrap()
    }

    #[test]
    fn rref_identity_and_zero() {
        let i = Matrix::<F2>::identity(2);
        assert_eq!(i.rref(), (i.clone(), vec![0, 1]));
        let z = Matrix::<F2>::zeros(3, 3);
        assert_eq!(z.rref(), (z.clone(), vec![]));
    }

    #[test]
    fn rref_over_f2_by_hand() {
        let (r, p) = f2(vec![vec![1, 1], vec![1, 1]]).rref();
        assert_eq!(r, f2(vec![vec![1, 1], vec![0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::<F2>::identity(3).kernel_basis().cols(), 0);
        assert_eq!(Matrix::<F2>::zeros(3, 3).kernel_basis().cols(), 3);
        // enumerate F_2^2: only (0,0) and (1,1) are killed by [1 1]
        let m = f2(vec![vec![1, 1]]);
        let brute: Vec<_> = (0..4u64)
            .map(|i| vec![F2::new(i & 1), F2::new(i >> 1)])
            .filter(|v| m.mul_vec(v).unwrap()[0].is_zero() && v.iter().any(|x| !x.is_zero()))
            .collect();
        assert_eq!(brute, vec![vec![F2::new(1), F2::new(1)]]);
        let k = m.kernel_basis();
        assert_eq!(k.column(0), brute[0]);
    }

    #[test]
    fn solve_examples() {
        let i = Matrix::<F2>::identity(2);
        let b = vec![F2::new(1), F2::new(0)];
        assert_eq!(i.solve(&b).unwrap(), Some(b.clone()));
        let z = Matrix::<F2>::zeros(2, 2);
        assert_eq!(z.solve(&b).unwrap(), None);
        let m = f2(vec![vec![1, 0], vec![0, 0]]);
        assert_eq!(m.solve(&[F2::new(0), F2::new(1)]).unwrap(), None);
        assert!(m.solve(&[F2::new(1)]).is_err());
    }

    #[test]
    fn rationals_are_exact() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let m = Matrix::from_rows(vec![vec![q(1, 3), q(1, 2)], vec![q(2, 3), q(1, 1)]]).unwrap();
        assert_eq!(m.rank(), 1);
        let k = m.kernel_basis();
        assert!(m.mul(&k).unwrap().is_zero());
        let x = m.solve(&[q(1, 6), q(1, 3)]).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), vec![q(1, 6), q(1, 3)]);
    }

    #[test]
    fn subspace_coordinates() {
        let s = Subspace::span(3, &[vec![F5::new(1), F5::new(2), F5::new(0)]]);
        assert_eq!(s.dim(), 1);
        assert_eq!(s.coordinates(&[F5::new(3), F5::new(1), F5::new(0)]), Some(vec![F5::new(3)]));
        assert!(!s.contains(&[F5::new(0), F5::new(0), F5::new(1)]));
        assert_eq!(s.complement_positions(), vec![1, 2]);
    }

    fn matrix_f5() -> impl Strategy<Value = Matrix<F5>> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            prop::collection::vec(0u64..5, r * c)
                .prop_map(move |v| Matrix::from_vec(r, c, v.into_iter().map(F5::new).collect()).unwrap())
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in matrix_f5()) {
            prop_assert_eq!(m.rank() + m.kernel_basis().cols(), m.cols());
        }

        #[test]
        fn rref_idempotent(m in matrix_f5()) {
            let (r, p) = m.rref();
            prop_assert_eq!(r.rref(), (r.clone(), p.clone()));
            prop_assert!(p.windows(2).all(|w| w[0] < w[1]));
        }

        #[test]
        fn kernel_vectors_are_killed(m in matrix_f5()) {
            prop_assert!(m.mul(&m.kernel_basis()).unwrap().is_zero());
        }

        #[test]
        fn solve_round_trip(m in matrix_f5(), seed in 0u64..1000) {
            let x: Vec<F5> = (0..m.cols()).map(|i| F5::new(seed / (i as u64 + 1))).collect();
            let b = m.mul_vec(&x).unwrap();
            let y = m.solve(&b).unwrap().expect("b is in the column space");
            prop_assert_eq!(m.mul_vec(&y).unwrap(), b);
        }
    }
}
