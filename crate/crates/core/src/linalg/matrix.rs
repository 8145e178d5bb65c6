use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows * cols != data.len() {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// Builds a matrix from real entries given row by row.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let data = rows
            .iter()
            .flat_map(|row| row.iter().map(|&x| Complex64::new(x, 0.0)))
            .collect();
        Self::new(r, c, data)
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

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn diagonal(&self) -> Vec<Complex64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self − other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `‖U†U − I‖_max`; infinite for non-square input.
    pub fn unitarity_error(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst = 0.0f64;
        for a in 0..n {
            for b in a..n {
                let mut s = ZERO;
                for k in 0..n {
                    s += self.data[k * n + a].conj() * self.data[k * n + b];
                }
                if a == b {
                    s -= ONE;
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_error() <= tol
    }

    /// Selects rows and columns (repetitions allowed) into a new matrix.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |a, b| self[(rows[a], cols[b])])
    }

    pub(crate) fn to_nalgebra(&self) -> nalgebra::DMatrix<Complex64> {
        nalgebra::DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &nalgebra::DMatrix<Complex64>) -> Self {
        Self::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

/// Matrix product `a · b`.
pub fn multiply(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.cols != b.rows {
        return Err(Error::Dimension(format!(
            "cannot multiply {}x{} by {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let (n, k, p) = (a.rows, a.cols, b.cols);
    let mut out = vec![ZERO; n * p];
    for i in 0..n {
        let out_row = &mut out[i * p..(i + 1) * p];
        for l in 0..k {
            let a_il = a.data[i * k + l];
            if a_il == ZERO {
                continue;
            }
            let b_row = &b.data[l * p..(l + 1) * p];
            for (o, &b_lj) in out_row.iter_mut().zip(b_row) {
                *o += a_il * b_lj;
            }
        }
    }
    Ok(ComplexMatrix {
        rows: n,
        cols: p,
        data: out,
    })
}

/// `u^m` by binary exponentiation; `m = 0` gives the identity.
pub fn matrix_power(u: &ComplexMatrix, m: u64) -> Result<ComplexMatrix> {
    if !u.is_square() {
        return Err(Error::Dimension(format!(
            "matrix power needs a square matrix, got {}x{}",
            u.rows, u.cols
        )));
    }
    let mut result: Option<ComplexMatrix> = None;
    let mut base = u.clone();
    let mut e = m;
    while e > 0 {
        if e & 1 == 1 {
            result = Some(match result {
                None => base.clone(),
                Some(r) => multiply(&r, &base)?,
            });
        }
        e >>= 1;
        if e > 0 {
            base = multiply(&base, &base)?;
        }
    }
    Ok(result.unwrap_or_else(|| ComplexMatrix::identity(u.rows)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::haar_unitary;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_is_left_neutral() {
        let a = ComplexMatrix::from_fn(3, 3, |i, j| c(i as f64 + 0.5, j as f64 - 1.0));
        let p = multiply(&ComplexMatrix::identity(3), &a).unwrap();
        assert_eq!(p, a);
    }

    #[test]
    fn integer_product_matches_triple_loop() {
        let a = ComplexMatrix::from_real_rows(&[&[1., 2., 3.], &[4., 5., 6.], &[7., 8., 10.]]).unwrap();
        let b = ComplexMatrix::from_real_rows(&[&[2., 0., 1.], &[-1., 3., 2.], &[0., 1., -2.]]).unwrap();
        let mut naive = ComplexMatrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                for k in 0..3 {
                    naive[(i, j)] += a[(i, k)] * b[(k, j)];
                }
            }
        }
        let p = multiply(&a, &b).unwrap();
        assert_eq!(p, naive);
        // first row by hand: (1*2 + 2*-1 + 3*0, 1*0 + 2*3 + 3*1, 1*1 + 2*2 + 3*-2)
        assert_eq!(p.row(0), &[c(0., 0.), c(9., 0.), c(-1., 0.)]);
    }

    #[test]
    fn unitary_times_adjoint_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let u = haar_unitary(6, &mut rng).unwrap();
        let p = multiply(&u, &u.adjoint()).unwrap();
        assert!(p.max_abs_diff(&ComplexMatrix::identity(6)) < 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(matches!(multiply(&a, &a), Err(Error::Dimension(_))));
        assert!(matches!(matrix_power(&a, 2), Err(Error::Dimension(_))));
        assert!(ComplexMatrix::new(2, 2, vec![ZERO; 3]).is_err());
    }

    #[test]
    fn power_edge_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = haar_unitary(5, &mut rng).unwrap();
        assert_eq!(matrix_power(&u, 0).unwrap(), ComplexMatrix::identity(5));
        assert_eq!(matrix_power(&u, 1).unwrap(), u);
    }

    #[test]
    fn diagonal_power() {
        let phis = [0.1, -0.7, 2.3, 3.0];
        let d: Vec<_> = phis.iter().map(|&p| Complex64::from_polar(1.0, -p)).collect();
        let u = ComplexMatrix::from_diagonal(&d);
        let p = matrix_power(&u, 5).unwrap();
        let want: Vec<_> = phis.iter().map(|&p| Complex64::from_polar(1.0, -5.0 * p)).collect();
        assert!(p.max_abs_diff(&ComplexMatrix::from_diagonal(&want)) < 1e-14);
    }

    #[test]
    fn squaring_matches_repeated_multiplication() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = haar_unitary(8, &mut rng).unwrap();
        let mut rep = ComplexMatrix::identity(8);
        for _ in 0..37 {
            rep = multiply(&rep, &u).unwrap();
        }
        assert!(matrix_power(&u, 37).unwrap().max_abs_diff(&rep) < 1e-10);
    }

    #[test]
    fn select_repeats_rows_and_columns() {
        let a = ComplexMatrix::from_fn(3, 3, |i, j| c((3 * i + j) as f64, 0.0));
        let s = a.select(&[0, 2], &[1, 1]);
        assert_eq!(s.as_slice(), &[c(1., 0.), c(1., 0.), c(7., 0.), c(7., 0.)]);
    }
}
