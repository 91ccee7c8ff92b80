//! Dense matrices over ℚ, ℚ[x], and ℚ(x).
//!
//! One generic container; exact field elimination (rref, rank, kernels,
//! solves) is available wherever the scalar type is a field, and the
//! fraction-free Bareiss determinant is provided for polynomial matrices.

use crate::algebra::poly::Poly;
use crate::algebra::rat::Rat;
use crate::algebra::ratfunc::RatFunc;
use crate::error::{Error, Result};
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Div, Neg, Sub};

/// Scalar bounds for exact field elimination.
pub trait FieldScalar:
    Clone
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
{
}
impl<T> FieldScalar for T where
    T: Clone
        + PartialEq
        + Zero
        + One
        + Neg<Output = T>
        + Sub<Output = T>
        + Div<Output = T>
{
}

#[derive(Clone, PartialEq, Eq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type RatMat = Mat<Rat>;
pub type FuncMat = Mat<RatFunc>;
pub type PolyMat = Mat<Poly>;

impl<T: Clone> Mat<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data length mismatch");
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged matrix rows".into()));
        }
        Ok(Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn fill(rows: usize, cols: usize, value: T) -> Self {
        Mat {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
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

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Mat<T> {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.at(i, j).clone());
            }
        }
        Mat {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn try_map<U: Clone, E>(
        &self,
        f: impl Fn(&T) -> std::result::Result<U, E>,
    ) -> std::result::Result<Mat<U>, E> {
        let mut data = Vec::with_capacity(self.data.len());
        for v in &self.data {
            data.push(f(v)?);
        }
        Ok(Mat {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn entries(&self) -> impl Iterator<Item = &T> {
        self.data.iter()
    }

    /// Horizontal concatenation of selected columns of `self`.
    pub fn select_columns(&self, idx: &[usize]) -> Mat<T> {
        let mut data = Vec::with_capacity(self.rows * idx.len());
        for i in 0..self.rows {
            for &j in idx {
                data.push(self.at(i, j).clone());
            }
        }
        Mat {
            rows: self.rows,
            cols: idx.len(),
            data,
        }
    }
}

impl<T: Clone + Zero + One> Mat<T> {
    pub fn identity(n: usize) -> Self {
        let mut m = Mat::fill(n, n, T::zero());
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Mat::fill(rows, cols, T::zero())
    }

    pub fn add(&self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn mul(&self, rhs: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut data = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc + self.at(i, k).clone() * rhs.at(k, j).clone();
                }
                data.push(acc);
            }
        }
        Mat {
            rows: self.rows,
            cols: rhs.cols,
            data,
        }
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc + self.at(i, k).clone() * v[k].clone();
                }
                acc
            })
            .collect()
    }
}

impl<T: FieldScalar> Mat<T> {
    /// Reduced row echelon form together with the pivot column indices.
    pub fn rref(&self) -> (Mat<T>, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for j in 0..m.cols {
            if r == m.rows {
                break;
            }
            let pivot_row = (r..m.rows).find(|&i| !m.at(i, j).is_zero());
            let Some(p) = pivot_row else { continue };
            m.swap_rows(r, p);
            let inv_pivot = T::one() / m.at(r, j).clone();
            for k in 0..m.cols {
                let v = m.at(r, k).clone() * inv_pivot.clone();
                m.set(r, k, v);
            }
            for i in 0..m.rows {
                if i != r && !m.at(i, j).is_zero() {
                    let factor = m.at(i, j).clone();
                    for k in 0..m.cols {
                        let v = m.at(i, k).clone() - factor.clone() * m.at(r, k).clone();
                        m.set(i, k, v);
                    }
                }
            }
            pivots.push(j);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel, one Vec per basis vector.
    pub fn kernel_basis(&self) -> Vec<Vec<T>> {
        let (r, pivots) = self.rref();
        let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
        let mut basis = Vec::new();
        for j in 0..self.cols {
            if pivot_set.contains(&j) {
                continue;
            }
            let mut v = vec![T::zero(); self.cols];
            v[j] = T::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -r.at(row, j).clone();
            }
            basis.push(v);
        }
        basis
    }

    /// One solution of self·x = rhs, or None when inconsistent.
    pub fn solve(&self, rhs: &[T]) -> Option<Vec<T>> {
        assert_eq!(self.rows, rhs.len());
        let mut aug = Mat::fill(self.rows, self.cols + 1, T::zero());
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.at(i, j).clone());
            }
            aug.set(i, self.cols, rhs[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![T::zero(); self.cols];
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.at(row, self.cols).clone();
        }
        Some(x)
    }

    /// Solves self·X = rhs column by column; None when any column is
    /// inconsistent.
    pub fn solve_columns(&self, rhs: &Mat<T>) -> Option<Mat<T>> {
        assert_eq!(self.rows, rhs.rows);
        let mut cols = Vec::with_capacity(rhs.cols);
        for j in 0..rhs.cols {
            cols.push(self.solve(&rhs.column(j))?);
        }
        let mut data = Vec::with_capacity(self.cols * rhs.cols);
        for i in 0..self.cols {
            for col in &cols {
                data.push(col[i].clone());
            }
        }
        Some(Mat {
            rows: self.cols,
            cols: rhs.cols,
            data,
        })
    }

    /// Indices of a maximal independent set of columns, in order.
    pub fn column_space_pivots(&self) -> Vec<usize> {
        self.rref().1
    }

    /// Determinant by field elimination.
    pub fn det_field(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut m = self.clone();
        let n = m.rows;
        let mut det = T::one();
        for k in 0..n {
            let pivot_row = (k..n).find(|&i| !m.at(i, k).is_zero());
            let Some(p) = pivot_row else {
                return Ok(T::zero());
            };
            if p != k {
                m.swap_rows(k, p);
                det = -det;
            }
            let pivot = m.at(k, k).clone();
            det = det * pivot.clone();
            for i in k + 1..n {
                if m.at(i, k).is_zero() {
                    continue;
                }
                let factor = m.at(i, k).clone() / pivot.clone();
                for j in k..n {
                    let v = m.at(i, j).clone() - factor.clone() * m.at(k, j).clone();
                    m.set(i, j, v);
                }
            }
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl PolyMat {
    /// Fraction-free (Bareiss) determinant over ℚ[x]; every division is
    /// exact.
    pub fn bareiss_det(&self) -> Result<Poly> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Poly::one());
        }
        let mut m = self.clone();
        let mut sign = false;
        let mut prev = Poly::one();
        for k in 0..n.saturating_sub(1) {
            if m.at(k, k).is_zero() {
                let swap = (k + 1..n).find(|&i| !m.at(i, k).is_zero());
                match swap {
                    Some(i) => {
                        m.swap_rows_poly(k, i);
                        sign = !sign;
                    }
                    None => return Ok(Poly::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = &(m.at(k, k) * m.at(i, j)) - &(m.at(i, k) * m.at(k, j));
                    let v = t.div_exact(&prev).expect("Bareiss division is exact");
                    m.set(i, j, v);
                }
                m.set(i, k, Poly::zero());
            }
            prev = m.at(k, k).clone();
        }
        let det = m.at(n - 1, n - 1).clone();
        Ok(if sign { -&det } else { det })
    }

    fn swap_rows_poly(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn to_func(&self) -> FuncMat {
        self.map(|p| RatFunc::from_poly(p.clone()))
    }
}

impl FuncMat {
    /// Exact determinant: denominators are cleared row by row and the
    /// polynomial determinant is computed fraction-free.
    pub fn det(&self) -> Result<RatFunc> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let mut cleared = Vec::with_capacity(self.rows * self.cols);
        let mut factor = Poly::one();
        for i in 0..self.rows {
            let mut l = Poly::one();
            for j in 0..self.cols {
                l = l.lcm(self.at(i, j).den());
            }
            for j in 0..self.cols {
                let e = self.at(i, j);
                let scale = l.div_exact(e.den()).expect("lcm divisible by den");
                cleared.push(e.num() * &scale);
            }
            factor = &factor * &l;
        }
        let pm = PolyMat::new(self.rows, self.cols, cleared);
        let det = pm.bareiss_det()?;
        RatFunc::new(det, factor)
    }

    /// Entry-wise composition with g, propagating degree overflows.
    pub fn compose(&self, g: &RatFunc, degree_cap: usize) -> Result<FuncMat> {
        self.try_map(|e| e.compose(g, degree_cap))
    }

    /// Affine evaluation; None if any entry has a pole at x.
    pub fn eval_affine(&self, x: &Rat) -> Option<RatMat> {
        let mut data = Vec::with_capacity(self.data.len());
        for e in &self.data {
            data.push(e.eval_affine(x)?);
        }
        Some(RatMat::new(self.rows, self.cols, data))
    }

    /// True when every entry is a polynomial.
    pub fn is_polynomial(&self) -> bool {
        self.data.iter().all(|e| e.is_polynomial())
    }

    pub fn to_poly(&self) -> Option<PolyMat> {
        if !self.is_polynomial() {
            return None;
        }
        Some(self.map(|e| e.num().clone()))
    }
}

impl<T: fmt::Display> fmt::Debug for Mat<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                write!(f, "{}{}", self.data[i * self.cols + j], if j + 1 < self.cols { ", " } else { "" })?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat::rat_i;

    fn fm(rows: Vec<Vec<RatFunc>>) -> FuncMat {
        FuncMat::from_rows(rows).unwrap()
    }

    fn x() -> RatFunc {
        RatFunc::x()
    }

    fn c(n: i64) -> RatFunc {
        RatFunc::constant(rat_i(n))
    }

    #[test]
    fn det_examples() {
        assert_eq!(FuncMat::identity(3).det().unwrap(), RatFunc::one());
        // [[x, x^2], [1, x]] -> 0
        let m = fm(vec![vec![x(), &x() * &x()], vec![c(1), x()]]);
        assert!(m.det().unwrap().is_zero());
        // companion [[0,1],[h0,h1]] -> -h0
        let h0 = RatFunc::new(Poly::from_i64(&[-4, 1]), Poly::from_i64(&[0, 1])).unwrap();
        let h1 = c(7);
        let comp = fm(vec![vec![c(0), c(1)], vec![h0.clone(), h1]]);
        assert_eq!(comp.det().unwrap(), -&h0);
    }

    #[test]
    fn det_multiplicative() {
        let a = fm(vec![vec![x(), c(2)], vec![c(1), &x() + &c(3)]]);
        let b = fm(vec![vec![c(5), x()], vec![x(), c(0)]]);
        let lhs = a.mul(&b).det().unwrap();
        let rhs = &a.det().unwrap() * &b.det().unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn rank_kernel_solve() {
        let m = fm(vec![vec![x(), &x() * &x()], vec![c(1), x()]]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 1);
        // kernel vector satisfies M v = 0
        let v = m.mul_vec(&k[0]);
        assert!(v.iter().all(|e| e.is_zero()));

        let a = fm(vec![vec![c(1), c(2)], vec![c(3), c(4)]]);
        let sol = a.solve(&[c(5), c(11)]).unwrap();
        assert_eq!(a.mul_vec(&sol), vec![c(5), c(11)]);
    }

    #[test]
    fn bareiss_matches_field_det() {
        let m = fm(vec![
            vec![x(), c(2), c(1)],
            vec![c(1), &x() + &c(3), c(0)],
            vec![c(4), x(), &x() * &x()],
        ]);
        assert_eq!(m.det().unwrap(), m.det_field().unwrap());
    }
}
