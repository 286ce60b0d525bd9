//! Dense matrices over `F_{p^k}` and row-space utilities.
//!
//! Vectors are rows; a matrix acts on the right, `v -> v * A`.

use std::fmt;
use std::sync::Arc;

use crate::ffield::{Fe, Field};

#[derive(Clone)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Fe>,
    pub f: Arc<Field>,
}

impl PartialEq for Mat {
    fn eq(&self, o: &Self) -> bool {
        self.rows == o.rows && self.cols == o.cols && *self.f == *o.f && self.data == o.data
    }
}
impl Eq for Mat {}

impl fmt::Debug for Mat {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(fm, "[{}x{} over {:?}]", self.rows, self.cols, self.f)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|&x| self.f.format(x)).collect();
            writeln!(fm, "  {}", row.join(" "))?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zeros(f: &Arc<Field>, rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![0; rows * cols], f: f.clone() }
    }

    pub fn identity(f: &Arc<Field>, n: usize) -> Mat {
        let mut m = Mat::zeros(f, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn scalar(f: &Arc<Field>, n: usize, c: Fe) -> Mat {
        let mut m = Mat::zeros(f, n, n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_rows(f: &Arc<Field>, rows: &[Vec<Fe>], cols: usize) -> Mat {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols);
            data.extend_from_slice(r);
        }
        Mat { rows: rows.len(), cols, data, f: f.clone() }
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<Fe>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Mat::identity(&self.f, self.rows)
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let f = &self.f;
        let mut out = Mat::zeros(f, self.rows, o.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let a = self.get(i, t);
                if a == 0 {
                    continue;
                }
                let orow = &o.data[t * o.cols..(t + 1) * o.cols];
                let dst = &mut out.data[i * o.cols..(i + 1) * o.cols];
                for (d, &b) in dst.iter_mut().zip(orow) {
                    if b != 0 {
                        *d = f.add(*d, f.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert!(self.rows == o.rows && self.cols == o.cols);
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| self.f.add(a, b)).collect();
        Mat { data, ..self.clone() }
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        assert!(self.rows == o.rows && self.cols == o.cols);
        let data = self.data.iter().zip(&o.data).map(|(&a, &b)| self.f.sub(a, b)).collect();
        Mat { data, ..self.clone() }
    }

    pub fn scale(&self, c: Fe) -> Mat {
        let data = self.data.iter().map(|&a| self.f.mul(a, c)).collect();
        Mat { data, ..self.clone() }
    }

    /// `self + c * I`.
    pub fn add_scalar(&self, c: Fe) -> Mat {
        let mut m = self.clone();
        for i in 0..self.rows.min(self.cols) {
            let v = self.f.add(m.get(i, i), c);
            m.set(i, i, v);
        }
        m
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zeros(&self.f, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn kron(&self, o: &Mat) -> Mat {
        let mut out = Mat::zeros(&self.f, self.rows * o.rows, self.cols * o.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a == 0 {
                    continue;
                }
                for k in 0..o.rows {
                    for l in 0..o.cols {
                        out.set(i * o.rows + k, j * o.cols + l, self.f.mul(a, o.get(k, l)));
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, mut e: u64) -> Mat {
        let mut r = Mat::identity(&self.f, self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b);
            }
            b = b.mul(&b);
            e >>= 1;
        }
        r
    }

    pub fn map(&self, g: impl Fn(Fe) -> Fe, f: &Arc<Field>) -> Mat {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&x| g(x)).collect(), f: f.clone() }
    }

    /// Row echelon form in place; returns pivot columns.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let f = self.f.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| self.get(i, c) != 0) else { continue };
            if pr != r {
                for j in 0..self.cols {
                    self.data.swap(pr * self.cols + j, r * self.cols + j);
                }
            }
            let inv = f.inv(self.get(r, c));
            for j in 0..self.cols {
                let v = f.mul(self.get(r, j), inv);
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let factor = self.get(i, c);
                if factor == 0 {
                    continue;
                }
                for j in c..self.cols {
                    let v = f.sub(self.get(i, j), f.mul(factor, self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert!(self.is_square());
        let n = self.rows;
        let mut aug = Mat::zeros(&self.f, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, 1);
        }
        let piv = aug.rref_in_place();
        if piv.len() < n || piv[n - 1] >= n {
            return None;
        }
        let mut out = Mat::zeros(&self.f, n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j));
            }
        }
        Some(out)
    }

    /// Basis of `{v : v * self = 0}`.
    pub fn left_kernel(&self) -> Vec<Vec<Fe>> {
        self.transpose().right_kernel()
    }

    /// Basis of `{x : self * x^T = 0}` as row vectors.
    pub fn right_kernel(&self) -> Vec<Vec<Fe>> {
        let f = self.f.clone();
        let mut m = self.clone();
        let piv = m.rref_in_place();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![0; self.cols];
                v[fc] = 1;
                for (r, &pc) in piv.iter().enumerate() {
                    v[pc] = f.neg(m.get(r, fc));
                }
                v
            })
            .collect()
    }

    /// Solve `x * self = b` for a row vector `x`.
    pub fn solve_left(&self, b: &[Fe]) -> Option<Vec<Fe>> {
        // stack self over b and look for a kernel vector ending in -1
        let mut st = Mat::zeros(&self.f, self.rows + 1, self.cols);
        st.data[..self.data.len()].copy_from_slice(&self.data);
        st.data[self.data.len()..].copy_from_slice(b);
        let ker = st.left_kernel();
        let f = &self.f;
        let v = ker.iter().find(|v| v[self.rows] != 0)?;
        let s = f.neg(f.inv(v[self.rows]));
        Some(v[..self.rows].iter().map(|&x| f.mul(x, s)).collect())
    }
}

pub fn vec_mat(v: &[Fe], m: &Mat) -> Vec<Fe> {
    assert_eq!(v.len(), m.rows);
    let f = &m.f;
    let mut out = vec![0; m.cols];
    for (t, &a) in v.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (o, &b) in out.iter_mut().zip(m.row(t)) {
            if b != 0 {
                *o = f.add(*o, f.mul(a, b));
            }
        }
    }
    out
}

/// Incrementally maintained reduced row-echelon basis of a subspace.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub f: Arc<Field>,
    pub n: usize,
    /// reduced rows and their pivot columns
    pub rows: Vec<Vec<Fe>>,
    pub pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(f: &Arc<Field>, n: usize) -> Echelon {
        Echelon { f: f.clone(), n, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn reduce(&self, v: &[Fe]) -> Vec<Fe> {
        let f = &self.f;
        let mut v = v.to_vec();
        for (r, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(r) {
                    if y != 0 {
                        *x = f.sub(*x, f.mul(c, y));
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Fe]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds `v` if independent; returns whether it was new.
    pub fn insert(&mut self, v: &[Fe]) -> bool {
        let f = self.f.clone();
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|&x| x != 0) else { return false };
        let inv = f.inv(r[p]);
        for x in r.iter_mut() {
            *x = f.mul(*x, inv);
        }
        for row in self.rows.iter_mut() {
            let c = row[p];
            if c != 0 {
                for (x, &y) in row.iter_mut().zip(&r) {
                    *x = f.sub(*x, f.mul(c, y));
                }
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(pos, r);
        self.pivots.insert(pos, p);
        true
    }

    pub fn to_mat(&self) -> Mat {
        Mat::from_rows(&self.f, &self.rows, self.n)
    }

    /// Canonical key of the subspace.
    pub fn key(&self) -> Vec<Fe> {
        self.rows.concat()
    }

    pub fn from_rows(f: &Arc<Field>, n: usize, rows: &[Vec<Fe>]) -> Echelon {
        let mut e = Echelon::new(f, n);
        for r in rows {
            e.insert(r);
        }
        e
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the span.
    pub fn coords(&self, v: &[Fe]) -> Option<Vec<Fe>> {
        let c: Vec<Fe> = self.pivots.iter().map(|&p| v[p]).collect();
        let f = &self.f;
        let mut w = vec![0; self.n];
        for (ci, r) in c.iter().zip(&self.rows) {
            for (x, &y) in w.iter_mut().zip(r) {
                *x = f.add(*x, f.mul(*ci, y));
            }
        }
        (w == v).then_some(c)
    }

    pub fn intersect(&self, o: &Echelon) -> Echelon {
        // kernel of [A; -B] gives combinations landing in both spaces
        let f = &self.f;
        let (a, b) = (self.dim(), o.dim());
        let mut st = Mat::zeros(f, a + b, self.n);
        for (i, r) in self.rows.iter().enumerate() {
            st.data[i * self.n..(i + 1) * self.n].copy_from_slice(r);
        }
        for (i, r) in o.rows.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                st.set(a + i, j, f.neg(x));
            }
        }
        let mut out = Echelon::new(f, self.n);
        for k in st.left_kernel() {
            out.insert(&vec_mat(&k[..a], &self.to_mat()));
        }
        out
    }

    pub fn sum(&self, o: &Echelon) -> Echelon {
        let mut e = self.clone();
        for r in &o.rows {
            e.insert(r);
        }
        e
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::field;

    #[test]
    fn inverse_and_kernel() {
        let f = field(2, 2).unwrap();
        let a = Mat::from_rows(&f, &[vec![1, 2], vec![2, 1]], 2);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        let s = Mat::from_rows(&f, &[vec![1, 2], vec![2, f.mul(2, 2)]], 2);
        assert!(s.inverse().is_none());
        for v in s.left_kernel() {
            assert!(vec_mat(&v, &s).iter().all(|&x| x == 0));
        }
    }

    #[test]
    fn solve_left_works() {
        let f = field(3, 1).unwrap();
        let a = Mat::from_rows(&f, &[vec![1, 2, 0], vec![0, 1, 1]], 3);
        let b = vec_mat(&[2, 1], &a);
        assert_eq!(a.solve_left(&b).unwrap(), vec![2, 1]);
        assert!(a.solve_left(&[1, 0, 0]).is_none());
    }

    #[test]
    fn echelon_intersection() {
        let f = field(2, 1).unwrap();
        let a = Echelon::from_rows(&f, 3, &[vec![1, 0, 0], vec![0, 1, 0]]);
        let b = Echelon::from_rows(&f, 3, &[vec![0, 1, 0], vec![0, 0, 1]]);
        let i = a.intersect(&b);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&[0, 1, 0]));
        assert_eq!(a.sum(&b).dim(), 3);
    }
}
