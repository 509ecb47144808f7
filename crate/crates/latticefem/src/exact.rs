//! Exact rational linear algebra: fraction-free (Bareiss) elimination for
//! determinants and solves, Gauss–Jordan inverses, ranks, and reduced
//! row-echelon null-space bases.

use crate::arith::Rational;
use num::{BigInt, Integer, One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is singular")]
    Singular,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

/// Dense rational matrix in row-major order.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatMat {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RatMat { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMat { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn mul(&self, other: &RatMat) -> RatMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = RatMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let term = a * &other[(l, j)];
                    out[(i, j)] += term;
                }
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for RatMat {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        &self.data[r * self.cols + c]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMat {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        &mut self.data[r * self.cols + c]
    }
}

/// Clears denominators row by row. Returns the integer matrix and the
/// product of the applied row scales (each positive), so that
/// `det(input) = det(integer) / scale`.
fn scale_rows_to_integers(m: &RatMat) -> (Vec<BigInt>, Rational) {
    let mut out = Vec::with_capacity(m.rows * m.cols);
    let mut scale = Rational::one();
    for i in 0..m.rows {
        let mut lcm = BigInt::one();
        for v in m.row(i) {
            lcm = lcm.lcm(v.denom());
        }
        for v in m.row(i) {
            out.push(v.numer() * (&lcm / v.denom()));
        }
        scale *= Rational::from_integer(lcm);
    }
    (out, scale)
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
/// Intermediate entries are exact minors; every division is exact.
pub fn bareiss_determinant_int(mut m: Vec<BigInt>, n: usize) -> BigInt {
    assert_eq!(m.len(), n * n);
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for i in 0..n - 1 {
        if m[i * n + i].is_zero() {
            match (i + 1..n).find(|&r| !m[r * n + i].is_zero()) {
                Some(r) => {
                    for c in 0..n {
                        m.swap(i * n + c, r * n + c);
                    }
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for r in i + 1..n {
            for c in i + 1..n {
                let t = &m[r * n + c] * &m[i * n + i] - &m[r * n + i] * &m[i * n + c];
                m[r * n + c] = t / &prev;
            }
            m[r * n + i] = BigInt::zero();
        }
        prev = m[i * n + i].clone();
    }
    let det = m[(n - 1) * n + (n - 1)].clone();
    if sign < 0 {
        -det
    } else {
        det
    }
}

/// Exact determinant of a square rational matrix via row scaling + Bareiss.
pub fn determinant(m: &RatMat) -> Result<Rational, LinalgError> {
    if m.rows != m.cols {
        return Err(LinalgError::Dimension(format!("{}x{} determinant", m.rows, m.cols)));
    }
    let (ints, scale) = scale_rows_to_integers(m);
    let det = bareiss_determinant_int(ints, m.rows);
    Ok(Rational::from_integer(det) / scale)
}

/// Solves `A X = B` exactly for possibly many right-hand sides.
///
/// Rows of the augmented system are scaled to integers, forward-eliminated
/// fraction-free, then back-substituted in rationals.
pub fn solve(a: &RatMat, b: &RatMat) -> Result<RatMat, LinalgError> {
    let n = a.rows;
    if a.cols != n {
        return Err(LinalgError::Dimension(format!("{}x{} solve", a.rows, a.cols)));
    }
    if b.rows != n {
        return Err(LinalgError::Dimension(format!("rhs has {} rows, expected {n}", b.rows)));
    }
    let m = b.cols;
    let w = n + m;
    // jointly scaled augmented rows keep the solution unchanged
    let mut aug: Vec<BigInt> = Vec::with_capacity(n * w);
    for i in 0..n {
        let mut lcm = BigInt::one();
        for v in a.row(i) {
            lcm = lcm.lcm(v.denom());
        }
        for v in b.row(i) {
            lcm = lcm.lcm(v.denom());
        }
        for v in a.row(i) {
            aug.push(v.numer() * (&lcm / v.denom()));
        }
        for v in b.row(i) {
            aug.push(v.numer() * (&lcm / v.denom()));
        }
    }
    // fraction-free forward elimination
    let mut prev = BigInt::one();
    for i in 0..n {
        if aug[i * w + i].is_zero() {
            let pivot = (i + 1..n).find(|&r| !aug[r * w + i].is_zero()).ok_or(LinalgError::Singular)?;
            for c in 0..w {
                aug.swap(i * w + c, pivot * w + c);
            }
        }
        if i + 1 == n {
            break;
        }
        for r in i + 1..n {
            for c in i + 1..w {
                let t = &aug[r * w + c] * &aug[i * w + i] - &aug[r * w + i] * &aug[i * w + c];
                aug[r * w + c] = t / &prev;
            }
            aug[r * w + i] = BigInt::zero();
        }
        prev = aug[i * w + i].clone();
    }
    if aug[(n - 1) * w + (n - 1)].is_zero() {
        return Err(LinalgError::Singular);
    }
    // rational back substitution on the upper-triangular integer system
    let mut x = RatMat::zeros(n, m);
    for col in 0..m {
        for i in (0..n).rev() {
            let mut acc = Rational::from_integer(aug[i * w + n + col].clone());
            for j in i + 1..n {
                acc -= Rational::from_integer(aug[i * w + j].clone()) * &x[(j, col)];
            }
            x[(i, col)] = acc / Rational::from_integer(aug[i * w + i].clone());
        }
    }
    Ok(x)
}

/// Exact inverse via [`solve`] against the identity.
pub fn inverse(a: &RatMat) -> Result<RatMat, LinalgError> {
    solve(a, &RatMat::identity(a.rows))
}

/// Rank by rational Gaussian elimination.
pub fn rank(m: &RatMat) -> usize {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let pivot = match (rank..rows).find(|&r| !a[(r, col)].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        if pivot != rank {
            for c in 0..cols {
                let tmp = a[(pivot, c)].clone();
                a[(pivot, c)] = a[(rank, c)].clone();
                a[(rank, c)] = tmp;
            }
        }
        let inv = a[(rank, col)].clone();
        for r in rank + 1..rows {
            if a[(r, col)].is_zero() {
                continue;
            }
            let factor = &a[(r, col)] / &inv;
            for c in col..cols {
                let delta = &factor * &a[(rank, c)];
                a[(r, c)] -= delta;
            }
        }
        rank += 1;
    }
    rank
}

/// Deterministic basis of the null space of `m`, read off the reduced row
/// echelon form: one basis vector per free column, ordered by column index.
pub fn rref_nullspace(m: &RatMat) -> Vec<Vec<Rational>> {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut pivots: Vec<usize> = Vec::new();
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let pivot = match (r..rows).find(|&rr| !a[(rr, col)].is_zero()) {
            Some(p) => p,
            None => continue,
        };
        if pivot != r {
            for c in 0..cols {
                let tmp = a[(pivot, c)].clone();
                a[(pivot, c)] = a[(r, c)].clone();
                a[(r, c)] = tmp;
            }
        }
        let inv = a[(r, col)].clone();
        for c in col..cols {
            a[(r, c)] = &a[(r, c)] / &inv;
        }
        for rr in 0..rows {
            if rr != r && !a[(rr, col)].is_zero() {
                let factor = a[(rr, col)].clone();
                for c in col..cols {
                    let delta = &factor * &a[(r, c)];
                    a[(rr, c)] -= delta;
                }
            }
        }
        pivots.push(col);
        r += 1;
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::with_capacity(free.len());
    for &fc in &free {
        let mut v = vec![Rational::zero(); cols];
        v[fc] = Rational::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = -a[(row, fc)].clone();
        }
        basis.push(v);
    }
    basis
}
