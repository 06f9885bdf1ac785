//! Smith normal form over the integers with unimodular transforms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

/// A dense integer matrix, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> IntMatrix {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows<T: Into<BigInt> + Clone>(rows: &[Vec<T>]) -> IntMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = IntMatrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, x) in row.iter().enumerate() {
                m[(i, j)] = x.clone().into();
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

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * &other[(k, j)];
                }
            }
        }
        out
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.rows).all(|i| (0..self.cols).all(|j| i == j || self[(i, j)].is_zero()))
    }

    /// Determinant by fraction-free elimination; square matrices only.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !a[(i, k)].is_zero()) else {
                return BigInt::zero();
            };
            if p != k {
                a.swap_rows(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[(k, k)] * &a[(i, j)] - &a[(i, k)] * &a[(k, j)];
                    a[(i, j)] = v / &prev;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = &self[(src, j)] * q;
            self[(dst, j)] += v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = &self[(i, src)] * q;
            self[(i, dst)] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self[(r, j)];
            self[(r, j)] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self[(i, j)].to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            (0..self.rows).map(|i| (0..self.cols).map(|j| self[(i, j)].to_string()).collect()).collect();
        rows.serialize(s)
    }
}

/// `u * m * v = d` with `d` diagonal, `d_i | d_{i+1}`, and `u`, `v` unimodular.
#[derive(Clone, Debug)]
pub struct Snf {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
    /// Nonzero diagonal entries, all positive.
    pub divisors: Vec<BigInt>,
}

impl Snf {
    /// Full row rank: the map `Z^rows -> Z^cols` given by the rows is injective.
    pub fn injective_on_rows(&self) -> bool {
        self.rank == self.d.rows()
    }

    /// Recompute `u * m * v` and check shape, diagonality and the divisor chain.
    pub fn verify(&self, m: &IntMatrix) -> bool {
        let prod = self.u.mul(m).mul(&self.v);
        prod == self.d
            && self.d.is_diagonal()
            && self.divisors.windows(2).all(|w| (&w[1] % &w[0]).is_zero())
            && self.u.det().abs().is_one()
            && self.v.det().abs().is_one()
    }
}

fn min_nonzero(d: &IntMatrix, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..d.rows {
        for j in t..d.cols {
            let x = &d[(i, j)];
            if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < d[(bi, bj)].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

pub fn smith_normal_form(m: &IntMatrix) -> Snf {
    let (r, c) = (m.rows, m.cols);
    let mut d = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut rank = 0;
    for t in 0..r.min(c) {
        while let Some((pi, pj)) = min_nonzero(&d, t) {
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let mut clean = true;
            for i in t + 1..r {
                let q = -(d[(i, t)].div_floor(&d[(t, t)]));
                if !q.is_zero() {
                    d.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                }
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..c {
                let q = -(d[(t, j)].div_floor(&d[(t, t)]));
                if !q.is_zero() {
                    d.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                }
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !(&d[(i, j)] % &d[(t, t)]).is_zero()));
            match bad {
                Some(i) => {
                    let one = BigInt::one();
                    d.add_row(t, i, &one);
                    u.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if d[(t, t)].is_zero() {
            break;
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
        rank = t + 1;
    }
    let divisors = (0..rank).map(|i| d[(i, i)].clone()).collect();
    let snf = Snf { u, d, v, rank, divisors };
    debug_assert!(snf.verify(m), "Smith normal form failed verification");
    snf
}

#[cfg(test)]
mod tests {
    use super::*;

    fn divs(rows: &[Vec<i64>]) -> Vec<i64> {
        let s = smith_normal_form(&IntMatrix::from_rows(rows));
        s.divisors.iter().map(|d| d.try_into().unwrap()).collect()
    }

    #[test]
    fn diagonal_two_three() {
        assert_eq!(divs(&[vec![2, 0], vec![0, 3]]), vec![1, 6]);
    }

    #[test]
    fn identity_and_scalar() {
        let s = smith_normal_form(&IntMatrix::identity(4));
        assert_eq!(s.d, IntMatrix::identity(4));
        assert_eq!(divs(&[vec![7]]), vec![7]);
    }

    #[test]
    fn rank_deficient_and_rectangular() {
        let s = smith_normal_form(&IntMatrix::from_rows(&[vec![0i64]]));
        assert_eq!(s.rank, 0);
        assert!(!s.injective_on_rows());
        assert_eq!(divs(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]), vec![2, 6, 12]);
        let m = IntMatrix::from_rows(&[vec![3i64, -1, 0, 0], vec![0, 3, -1, 0], vec![0, 0, 3, -1]]);
        let s = smith_normal_form(&m);
        assert_eq!(s.rank, 3);
        assert!(s.injective_on_rows() && s.verify(&m));
    }

    #[test]
    fn determinant() {
        let m = IntMatrix::from_rows(&[vec![2i64, 1], vec![7, 4]]);
        assert_eq!(m.det(), BigInt::from(1));
        let m = IntMatrix::from_rows(&[vec![0i64, 2, 1], vec![1, 0, 0], vec![3, 5, 2]]);
        assert_eq!(m.det(), BigInt::from(1));
    }
}
