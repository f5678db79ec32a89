//! Dense matrices over a [`Field`].

use crate::scalar::Field;

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_cols(cols: Vec<Vec<F>>) -> Self {
        Matrix::from_rows(cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vec<F> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Matrix<G> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "shape mismatch");
        let mut m: Matrix<F> = Matrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let v = m.get(i, j).clone() + a.clone() * o.get(k, j).clone();
                    m.set(i, j, v);
                }
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len(), "shape mismatch");
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(F::zero(), |acc, j| acc + self.get(i, j).clone() * v[j].clone())
            })
            .collect()
    }

    /// Columns `idx` in order.
    pub fn select_cols(&self, idx: &[usize]) -> Self {
        Matrix::from_cols(idx.iter().map(|&j| self.col(j)).collect())
    }

    pub fn hstack(&self, o: &Self) -> Self {
        assert_eq!(self.rows, o.rows);
        let mut cols: Vec<Vec<F>> = (0..self.cols).map(|j| self.col(j)).collect();
        cols.extend((0..o.cols).map(|j| o.col(j)));
        if cols.is_empty() {
            return Matrix::zeros(self.rows, 0);
        }
        Matrix::from_cols(cols)
    }

    /// Row echelon form in place; returns pivot columns and the sign of the row permutation.
    fn echelon(&mut self) -> (Vec<usize>, bool) {
        let mut pivots = Vec::new();
        let mut neg = false;
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(p) = (r..self.rows).find(|&i| !self.get(i, c).is_zero()) else {
                continue;
            };
            if p != r {
                for j in 0..self.cols {
                    self.data.swap(p * self.cols + j, r * self.cols + j);
                }
                neg = !neg;
            }
            let inv = self.get(r, c).inv().unwrap();
            for i in r + 1..self.rows {
                let f = self.get(i, c).clone() * inv.clone();
                if f.is_zero() {
                    continue;
                }
                for j in c..self.cols {
                    let v = self.get(i, j).clone() - f.clone() * self.get(r, j).clone();
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (pivots, neg)
    }

    pub fn rank(&self) -> usize {
        self.clone().echelon().0.len()
    }

    /// Fraction-free (Bareiss) elimination: every division is exact, so
    /// polynomial entries stay polynomial.
    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols, "det of non-square matrix");
        let n = self.rows;
        if n == 0 {
            return F::one();
        }
        let mut m = self.clone();
        let mut neg = false;
        let mut prev = F::one();
        for k in 0..n - 1 {
            if m.get(k, k).is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !m.get(i, k).is_zero()) else {
                    return F::zero();
                };
                for j in 0..n {
                    m.data.swap(p * n + j, k * n + j);
                }
                neg = !neg;
            }
            let pivot = m.get(k, k).clone();
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (m.get(i, j).clone() * pivot.clone() - m.get(i, k).clone() * m.get(k, j).clone()) / prev.clone();
                    m.set(i, j, v);
                }
            }
            prev = pivot;
        }
        let d = m.get(n - 1, n - 1).clone();
        if neg {
            -d
        } else {
            d
        }
    }

    /// Solves `self * x = b` for square invertible `self`.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = self.hstack(&Matrix::from_cols(vec![b.to_vec()]));
        let (piv, _) = aug.echelon();
        if piv.len() < n || piv.iter().any(|&c| c >= n) {
            return None;
        }
        let mut x = vec![F::zero(); n];
        for i in (0..n).rev() {
            let mut s = aug.get(i, n).clone();
            for j in i + 1..n {
                s = s - aug.get(i, j).clone() * x[j].clone();
            }
            x[i] = s * aug.get(i, i).inv()?;
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let mut aug = self.hstack(&Matrix::identity(n));
        let (piv, _) = aug.echelon();
        if piv.len() < n || piv[n - 1] >= n {
            return None;
        }
        for i in (0..n).rev() {
            let inv = aug.get(i, i).inv()?;
            for j in 0..2 * n {
                let v = aug.get(i, j).clone() * inv.clone();
                aug.set(i, j, v);
            }
            for k in 0..i {
                let f = aug.get(k, i).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..2 * n {
                    let v = aug.get(k, j).clone() - f.clone() * aug.get(i, j).clone();
                    aug.set(k, j, v);
                }
            }
        }
        Some(aug.select_cols(&(n..2 * n).collect::<Vec<_>>()))
    }

    pub fn kronecker(&self, o: &Self) -> Self {
        let mut m = Matrix::zeros(self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        m.set(
                            i * o.rows + k,
                            j * o.cols + l,
                            self.get(i, j).clone() * o.get(k, l).clone(),
                        );
                    }
                }
            }
        }
        m
    }

    /// k-th compound matrix: minors indexed by lexicographic k-subsets.
    pub fn compound(&self, k: usize) -> Self {
        let rs = subsets(self.rows, k);
        let cs = subsets(self.cols, k);
        let mut m = Matrix::zeros(rs.len(), cs.len());
        for (a, r) in rs.iter().enumerate() {
            for (b, c) in cs.iter().enumerate() {
                let sub = Matrix::from_rows(
                    r.iter().map(|&i| c.iter().map(|&j| self.get(i, j).clone()).collect()).collect(),
                );
                m.set(a, b, sub.det());
            }
        }
        m
    }
}

/// Lexicographically ordered k-subsets of `0..n`.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Rational};

    fn m(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect())
    }

    #[test]
    fn det_inverse_solve() {
        let a = m(&[&[2, 1], &[1, 1]]);
        assert_eq!(a.det(), int(1));
        let inv = a.inverse().unwrap();
        assert_eq!(a.mul(&inv), Matrix::identity(2));
        assert_eq!(a.solve(&[int(3), int(2)]).unwrap(), vec![int(1), int(1)]);
        assert_eq!(m(&[&[1, 2], &[2, 4]]).rank(), 1);
        assert!(m(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn compound_of_identity() {
        let c = Matrix::<Rational>::identity(3).compound(2);
        assert_eq!(c, Matrix::identity(3));
        let a = m(&[&[1, 2, 0], &[0, 1, 0], &[3, 0, 1]]);
        assert_eq!(a.compound(3).get(0, 0), &a.det());
    }

    #[test]
    fn det_with_pivoting() {
        let a = m(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.det(), int(-1));
    }
}
