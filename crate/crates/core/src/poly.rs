//! Univariate polynomials over `F_{p^k}`, lowest degree first.

use crate::ffield::{Fe, Field};
use crate::matrix::Mat;

pub type Poly = Vec<Fe>;

pub fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub fn degree(a: &Poly) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub fn monic(f: &Field, a: &Poly) -> Poly {
    let mut a = a.clone();
    trim(&mut a);
    if let Some(&lead) = a.last() {
        let inv = f.inv(lead);
        for c in a.iter_mut() {
            *c = f.mul(*c, inv);
        }
    }
    a
}

pub fn mul(f: &Field, a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(&mut out);
    out
}

pub fn sub(f: &Field, a: &Poly, b: &Poly) -> Poly {
    let n = a.len().max(b.len());
    let mut out: Poly = (0..n)
        .map(|i| f.sub(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0)))
        .collect();
    trim(&mut out);
    out
}

/// Quotient and remainder.
pub fn divrem(f: &Field, a: &Poly, b: &Poly) -> (Poly, Poly) {
    let mut r = a.clone();
    trim(&mut r);
    let mut b = b.clone();
    trim(&mut b);
    let db = b.len() - 1;
    let lead_inv = f.inv(b[db]);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![0; r.len() - db];
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = f.mul(*r.last().unwrap(), lead_inv);
        q[shift] = c;
        for (i, &bi) in b.iter().enumerate() {
            r[i + shift] = f.sub(r[i + shift], f.mul(c, bi));
        }
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn rem(f: &Field, a: &Poly, b: &Poly) -> Poly {
    divrem(f, a, b).1
}

pub fn gcd(f: &Field, a: &Poly, b: &Poly) -> Poly {
    let (mut a, mut b) = (a.clone(), b.clone());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    monic(f, &a)
}

/// `b^e mod m`.
pub fn pow_mod(f: &Field, b: &Poly, e: u64, m: &Poly) -> Poly {
    let mut result: Poly = rem(f, &vec![1], m);
    let mut base: Poly = rem(f, b, m);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = rem(f, &mul(f, &result, &base), m);
        }
        base = rem(f, &mul(f, &base, &base), m);
        e >>= 1;
    }
    result
}

/// Evaluates `a` at a square matrix.
pub fn eval_mat(a: &Poly, m: &Mat) -> Mat {
    let mut acc = Mat::zeros(&m.f, m.rows, m.cols);
    for &c in a.iter().rev() {
        acc = acc.mul(m).add_scalar(c);
    }
    acc
}

/// Product of the irreducible factors of least degree of a nonconstant `a`.
pub fn least_degree_part(f: &Field, a: &Poly) -> Poly {
    let a = monic(f, a);
    let n = degree(&a).expect("nonzero polynomial");
    let x: Poly = vec![0, 1];
    let mut h = rem(f, &x, &a);
    for _ in 1..=n {
        h = pow_mod(f, &h, f.order() as u64, &a);
        let g = gcd(f, &a, &sub(f, &h, &x));
        if degree(&g).unwrap_or(0) > 0 {
            return g;
        }
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::field;

    #[test]
    fn least_degree_part_finds_linear_factor() {
        let f = field(2, 1).unwrap();
        // (x+1)(x^2+x+1) = x^3 + 1
        let a = vec![1, 0, 0, 1];
        assert_eq!(least_degree_part(&f, &a), vec![1, 1]);
        // x^2+x+1 has no roots over F_2
        assert_eq!(least_degree_part(&f, &vec![1, 1, 1]), vec![1, 1, 1]);
    }
}
