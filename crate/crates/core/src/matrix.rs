//! Small dense matrices over any of the crate's coefficient rings.
//!
//! Everything here is division-free (subset-expansion determinants,
//! principal-minor characteristic polynomials, perfect-matching pfaffians),
//! so precision windows only shrink through multiplication and never hit a
//! division error. Sizes stay single-digit in this crate.

use crate::ring::Ring;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn fill(rows: usize, cols: usize, v: T) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![v; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.at(i, j).clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn submatrix(&self, keep_rows: &[usize], keep_cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(keep_rows.len() * keep_cols.len());
        for &i in keep_rows {
            for &j in keep_cols {
                data.push(self.at(i, j).clone());
            }
        }
        Matrix {
            rows: keep_rows.len(),
            cols: keep_cols.len(),
            data,
        }
    }
}

impl<T: Ring> Matrix<T> {
    pub fn zero_like(rows: usize, cols: usize, proto: &T) -> Self {
        Self::fill(rows, cols, proto.r_zero())
    }

    pub fn identity_like(n: usize, proto: &T) -> Self {
        let mut m = Self::zero_like(n, n, proto);
        for i in 0..n {
            m.set(i, i, proto.r_one());
        }
        m
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.r_add(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.r_sub(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|a| a.r_neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let proto = &self.data[0];
        let mut out = Self::zero_like(self.rows, rhs.cols, proto);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = proto.r_zero();
                for k in 0..self.cols {
                    acc = acc.r_add(&self.at(i, k).r_mul(rhs.at(k, j)));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|a| a.r_mul(c))
    }

    pub fn trace(&self) -> T {
        assert_eq!(self.rows, self.cols);
        let mut acc = self.data[0].r_zero();
        for i in 0..self.rows {
            acc = acc.r_add(self.at(i, i));
        }
        acc
    }

    /// Division-free determinant (expansion over column subsets, O(n 2^n)).
    pub fn det(&self) -> T {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let proto = &self.data[0];
        if n == 0 {
            return proto.r_one();
        }
        // dp[mask] = signed sum over ways the first popcount(mask) rows use
        // exactly the columns in mask
        let mut dp = vec![None::<T>; 1 << n];
        dp[0] = Some(proto.r_one());
        for mask in 1usize..(1 << n) {
            let row = mask.count_ones() as usize - 1;
            let mut acc = proto.r_zero();
            // cofactor sign along the last row: (-1)^{row + k}
            let mut sign_pos = row % 2 == 0;
            for j in 0..n {
                if mask & (1 << j) == 0 {
                    continue;
                }
                let prev = dp[mask ^ (1 << j)].as_ref().expect("filled in order");
                let term = prev.r_mul(self.at(row, j));
                acc = if sign_pos {
                    acc.r_add(&term)
                } else {
                    acc.r_sub(&term)
                };
                sign_pos = !sign_pos;
            }
            dp[mask] = Some(acc);
        }
        dp[(1 << n) - 1].take().expect("complete")
    }

    /// Characteristic polynomial det(lambda I - X), constant-first, via
    /// sums of principal minors.
    pub fn char_poly(&self) -> Vec<T> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let proto = &self.data[0];
        let mut coeffs = vec![proto.r_zero(); n + 1];
        coeffs[n] = proto.r_one();
        let idx: Vec<usize> = (0..n).collect();
        for k in 1..=n {
            let mut ek = proto.r_zero();
            for subset in subsets_of_size(&idx, k) {
                ek = ek.r_add(&self.submatrix(&subset, &subset).det());
            }
            // coefficient of lambda^{n-k} is (-1)^k e_k
            coeffs[n - k] = if k % 2 == 0 { ek } else { ek.r_neg() };
        }
        coeffs
    }

    /// Pfaffian by recursive perfect-matching expansion along the first row.
    /// The caller guarantees skew-symmetry; dimension must be even.
    pub fn pfaffian(&self) -> T {
        assert_eq!(self.rows, self.cols);
        assert!(self.rows % 2 == 0, "pfaffian needs even dimension");
        let proto = &self.data[0];
        if self.rows == 0 {
            return proto.r_one();
        }
        let idx: Vec<usize> = (0..self.rows).collect();
        self.pfaff_rec(&idx)
    }

    fn pfaff_rec(&self, live: &[usize]) -> T {
        let proto = &self.data[0];
        if live.is_empty() {
            return proto.r_one();
        }
        let i = live[0];
        let mut acc = proto.r_zero();
        let mut sign_pos = true;
        for (pos, &j) in live.iter().enumerate().skip(1) {
            let rest: Vec<usize> = live[1..]
                .iter()
                .enumerate()
                .filter(|(p, _)| *p != pos - 1)
                .map(|(_, &v)| v)
                .collect();
            let term = self.at(i, j).r_mul(&self.pfaff_rec(&rest));
            acc = if sign_pos {
                acc.r_add(&term)
            } else {
                acc.r_sub(&term)
            };
            sign_pos = !sign_pos;
        }
        acc
    }
}

fn subsets_of_size(idx: &[usize], k: usize) -> Vec<Vec<usize>> {
    let n = idx.len();
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut pick: Vec<usize> = (0..k).collect();
    loop {
        out.push(pick.iter().map(|&i| idx[i]).collect());
        let mut i = k as isize - 1;
        while i >= 0 && pick[i as usize] == i as usize + n - k {
            i -= 1;
        }
        if i < 0 {
            break;
        }
        let i = i as usize;
        pick[i] += 1;
        for j in i + 1..k {
            pick[j] = pick[j - 1] + 1;
        }
    }
    out
}

/// Determinant of a matrix presented as rows (used by the Sylvester
/// resultant), with an explicit zero prototype for empty corners.
pub fn det_rows<T: Ring>(rows: &[Vec<T>], proto: &T) -> T {
    if rows.is_empty() {
        return proto.r_one();
    }
    Matrix::from_rows(rows.to_vec()).det()
}

impl<T: std::fmt::Display> std::fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.data[i * self.cols + j])?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}
