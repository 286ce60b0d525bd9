//! Finite fields `F_{p^k}` with table arithmetic.
//!
//! Elements are encoded as integers whose base-`p` digits are the coefficients
//! of a polynomial in the generator `x` (lowest degree first). The defining
//! polynomial is the least monic irreducible of degree `k` when the lower
//! coefficients `(c_{k-1}, ..., c_0)` are read as a base-`p` number.
//!
//! Every field also carries a canonical primitive element chosen so that norms
//! down to subfields are again canonical. Embeddings `F_{p^d} -> F_{p^k}` send
//! canonical primitive to the norm of the canonical primitive, so they compose.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::{Error, Result};

/// Field element.
pub type Fe = u32;

/// Largest field order handled.
pub const MAX_ORDER: u64 = 1 << 20;

pub struct Field {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    prim: Fe,
    exp: Vec<Fe>,
    log: Vec<u32>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.k)
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k
    }
}
impl Eq for Field {}

fn is_prime(n: u32) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

// Polynomials over F_p as coefficient vectors, lowest degree first.
mod fp_poly {
    pub fn trim(a: &mut Vec<u32>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut r = a.to_vec();
        trim(&mut r);
        let db = b.len() - 1;
        let lead_inv = inv(b[db], p);
        while r.len() > db {
            let shift = r.len() - 1 - db;
            let coef = (r[r.len() - 1] as u64 * lead_inv as u64 % p as u64) as u32;
            for (i, &bi) in b.iter().enumerate() {
                let t = (coef as u64 * bi as u64 % p as u64) as u32;
                r[i + shift] = (r[i + shift] + p - t) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn inv(a: u32, p: u32) -> u32 {
        let mut r = 1u64;
        let mut b = a as u64;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p as u64;
            }
            b = b * b % p as u64;
            e >>= 1;
        }
        r as u32
    }
}

impl Field {
    fn build(p: u32, k: u32) -> Result<Field> {
        if !is_prime(p) {
            return Err(Error::Field(format!("{p} is not prime")));
        }
        if k == 0 || (p as u64).checked_pow(k).map_or(true, |q| q > MAX_ORDER) {
            return Err(Error::Field(format!("{p}^{k} exceeds the field size bound")));
        }
        let q = p.pow(k);
        let modulus = least_irreducible(p, k);
        let mut f = Field { p, k, q, modulus, prim: 0, exp: Vec::new(), log: Vec::new() };
        f.prim = f.find_canonical_primitive()?;
        f.build_tables();
        Ok(f)
    }

    fn digits(&self, a: Fe) -> Vec<u32> {
        let mut out = vec![0; self.k as usize];
        let mut a = a;
        for d in out.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        out
    }

    fn undigits(&self, d: &[u32]) -> Fe {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn mul_slow(&self, a: Fe, b: Fe) -> Fe {
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u32; 2 * self.k as usize];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = ((prod[i + j] as u64 + x as u64 * y as u64) % self.p as u64) as u32;
            }
        }
        let mut r = fp_poly::rem(&prod, &self.modulus, self.p);
        r.resize(self.k as usize, 0);
        self.undigits(&r)
    }

    fn pow_slow(&self, a: Fe, mut e: u64) -> Fe {
        let mut r = 1;
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_slow(r, b);
            }
            b = self.mul_slow(b, b);
            e >>= 1;
        }
        r
    }

    fn find_canonical_primitive(&self) -> Result<Fe> {
        let order = (self.q - 1) as u64;
        let factors = prime_factors(order);
        let k = self.k;
        // maximal proper divisors and the minimal polynomials of their canonical primitives
        let mut targets = Vec::new();
        for r in prime_factors(k as u64) {
            let d = k / r as u32;
            let sub = field(self.p, d)?;
            let mp = sub.min_poly_prime(sub.prim);
            let e = order / (sub.q as u64 - 1);
            targets.push((e, mp));
        }
        'cand: for x in 1..self.q {
            if self.k == 1 && x == 0 {
                continue;
            }
            for &r in &factors {
                if self.pow_slow(x, order / r) == 1 {
                    continue 'cand;
                }
            }
            for (e, mp) in &targets {
                let y = self.pow_slow(x, *e);
                // Horner evaluation of a polynomial with prime-field coefficients
                let mut acc = 0;
                for &c in mp.iter().rev() {
                    acc = self.add(self.mul_slow(acc, y), c);
                }
                if acc != 0 {
                    continue 'cand;
                }
            }
            return Ok(x);
        }
        Err(Error::Field(format!("no canonical primitive element in F_{}^{}", self.p, self.k)))
    }

    fn build_tables(&mut self) {
        let n = (self.q - 1) as usize;
        // multiplication by prim as an F_p-linear map on digit vectors
        let cols: Vec<Vec<u32>> = (0..self.k)
            .map(|j| self.digits(self.mul_slow(self.p.pow(j), self.prim)))
            .collect();
        let mut exp = vec![0; 2 * n.max(1)];
        let mut log = vec![0; self.q as usize];
        let mut cur: Fe = 1;
        for i in 0..n {
            exp[i] = cur;
            log[cur as usize] = i as u32;
            let d = self.digits(cur);
            let mut next = vec![0u32; self.k as usize];
            for (j, &c) in d.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for (t, &v) in cols[j].iter().enumerate() {
                    next[t] = ((next[t] as u64 + c as u64 * v as u64) % self.p as u64) as u32;
                }
            }
            cur = self.undigits(&next);
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        self.exp = exp;
        self.log = log;
    }

    /// Minimal polynomial over F_p of `x`, coefficients are prime-field elements.
    fn min_poly_prime(&self, x: Fe) -> Vec<u32> {
        let orbit = self.frobenius_orbit(x);
        let mut poly: Vec<Fe> = vec![1];
        for r in orbit {
            let mut next = vec![0; poly.len() + 1];
            for (i, &c) in poly.iter().enumerate() {
                next[i + 1] = self.add(next[i + 1], c);
                next[i] = self.sub(next[i], self.mul(c, r));
            }
            poly = next;
        }
        poly
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn order(&self) -> u32 {
        self.q
    }
    /// Coefficients `c_0..c_k` of the defining polynomial.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }
    /// The polynomial generator `x`.
    pub fn generator(&self) -> Fe {
        if self.k == 1 {
            self.prim
        } else {
            self.p
        }
    }
    pub fn primitive(&self) -> Fe {
        self.prim
    }

    #[inline]
    pub fn add(&self, a: Fe, b: Fe) -> Fe {
        if self.p == 2 {
            return a ^ b;
        }
        if self.k == 1 {
            let s = a + b;
            return if s >= self.p { s - self.p } else { s };
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: Fe) -> Fe {
        if self.p == 2 {
            return a;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: Fe, b: Fe) -> Fe {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Fe, b: Fe) -> Fe {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[(self.log[a as usize] + self.log[b as usize]) as usize]
    }

    pub fn inv(&self, a: Fe) -> Fe {
        assert!(a != 0, "inverse of zero");
        let n = self.q - 1;
        self.exp[((n - self.log[a as usize]) % n) as usize]
    }

    pub fn pow(&self, a: Fe, e: i64) -> Fe {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let n = (self.q - 1) as i64;
        let l = (self.log[a as usize] as i64 * e).rem_euclid(n);
        self.exp[l as usize]
    }

    /// Discrete logarithm to the canonical primitive element.
    pub fn log(&self, a: Fe) -> u32 {
        assert!(a != 0);
        self.log[a as usize]
    }

    pub fn exp(&self, e: u64) -> Fe {
        self.exp[(e % (self.q as u64 - 1)) as usize]
    }

    /// Image of an integer.
    pub fn from_int(&self, i: i64) -> Fe {
        i.rem_euclid(self.p as i64) as Fe
    }

    pub fn frobenius(&self, a: Fe) -> Fe {
        self.pow(a, self.p as i64)
    }

    /// `{x, x^p, x^{p^2}, ...}` without repetition.
    pub fn frobenius_orbit(&self, x: Fe) -> Vec<Fe> {
        let mut out = vec![x];
        let mut y = self.frobenius(x);
        while y != x {
            out.push(y);
            y = self.frobenius(y);
        }
        out
    }

    /// Smallest `d | k` with every element of `s` inside `F_{p^d}`.
    pub fn minimal_subfield(&self, s: &[Fe]) -> u32 {
        divisors(self.k)
            .into_iter()
            .find(|&d| s.iter().all(|&x| self.pow(x, (self.p as i64).pow(d)) == x))
            .unwrap_or(self.k)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fe> {
        0..self.q
    }

    pub fn coefficients(&self, a: Fe) -> Vec<u32> {
        self.digits(a)
    }

    pub fn from_coefficients(&self, c: &[u32]) -> Result<Fe> {
        if c.len() != self.k as usize || c.iter().any(|&x| x >= self.p) {
            return Err(Error::Parse(format!("bad coefficient vector {c:?} for {self:?}")));
        }
        Ok(self.undigits(c))
    }

    /// Text form: a digit for prime fields, `[c0,c1,..]` otherwise.
    pub fn format(&self, a: Fe) -> String {
        if self.k == 1 {
            a.to_string()
        } else {
            let c: Vec<String> = self.digits(a).iter().map(|d| d.to_string()).collect();
            format!("[{}]", c.join(","))
        }
    }

    pub fn parse(&self, s: &str) -> Result<Fe> {
        let s = s.trim();
        let bad = || Error::Parse(format!("bad field element '{s}'"));
        if let Some(inner) = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
            let c: std::result::Result<Vec<u32>, _> = inner.split(',').map(|t| t.trim().parse()).collect();
            self.from_coefficients(&c.map_err(|_| bad())?)
        } else if self.k == 1 {
            let v: u32 = s.parse().map_err(|_| bad())?;
            if v >= self.p {
                return Err(bad());
            }
            Ok(v)
        } else {
            Err(bad())
        }
    }
}

fn least_irreducible(p: u32, k: u32) -> Vec<u32> {
    let q = p.pow(k);
    'outer: for n in 0..q {
        let mut poly = Vec::with_capacity(k as usize + 1);
        let mut m = n;
        for _ in 0..k {
            poly.push(m % p);
            m /= p;
        }
        poly.push(1);
        if k == 1 {
            return poly;
        }
        if poly[0] == 0 {
            continue;
        }
        // trial division by monic polynomials of degree <= k/2
        for d in 1..=k / 2 {
            for m in 0..p.pow(d) {
                let mut div = Vec::with_capacity(d as usize + 1);
                let mut t = m;
                for _ in 0..d {
                    div.push(t % p);
                    t /= p;
                }
                div.push(1);
                if fp_poly::rem(&poly, &div, p).is_empty() {
                    continue 'outer;
                }
            }
        }
        return poly;
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn registry() -> &'static Mutex<HashMap<(u32, u32), Arc<Field>>> {
    static R: OnceLock<Mutex<HashMap<(u32, u32), Arc<Field>>>> = OnceLock::new();
    R.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Shared handle to `F_{p^k}`.
pub fn field(p: u32, k: u32) -> Result<Arc<Field>> {
    if let Some(f) = registry().lock().unwrap().get(&(p, k)) {
        return Ok(f.clone());
    }
    let f = Arc::new(Field::build(p, k)?);
    let mut reg = registry().lock().unwrap();
    Ok(reg.entry((p, k)).or_insert(f).clone())
}

/// Image of `x` under the canonical embedding `small -> big`.
pub fn embed(small: &Field, big: &Field, x: Fe) -> Fe {
    assert!(small.p == big.p && big.k % small.k == 0, "{small:?} does not embed in {big:?}");
    if x == 0 {
        return 0;
    }
    let ratio = (big.q as u64 - 1) / (small.q as u64 - 1);
    big.exp(small.log(x) as u64 * ratio)
}

/// Inverse of [`embed`] on its image.
pub fn retract(big: &Field, small: &Field, y: Fe) -> Option<Fe> {
    assert!(small.p == big.p && big.k % small.k == 0);
    if y == 0 {
        return Some(0);
    }
    let ratio = (big.q as u64 - 1) / (small.q as u64 - 1);
    let l = big.log(y) as u64;
    (l % ratio == 0).then(|| small.exp(l / ratio))
}

/// A family of fields `F_{p^k}` for several `k` with their embeddings.
#[derive(Debug, Clone)]
pub struct FieldTower {
    pub p: u32,
    pub fields: Vec<Arc<Field>>,
}

impl FieldTower {
    pub fn new(p: u32, degrees: &[u32]) -> Result<FieldTower> {
        let fields = degrees.iter().map(|&k| field(p, k)).collect::<Result<_>>()?;
        Ok(FieldTower { p, fields })
    }

    pub fn get(&self, k: u32) -> Option<&Arc<Field>> {
        self.fields.iter().find(|f| f.k == k)
    }

    pub fn embed(&self, from: u32, to: u32, x: Fe) -> Result<Fe> {
        let (a, b) = (self.get(from), self.get(to));
        match (a, b) {
            (Some(a), Some(b)) if to % from == 0 => Ok(embed(a, b, x)),
            _ => Err(Error::Field(format!("no embedding F_{}^{from} -> F_{}^{to}", self.p, self.p))),
        }
    }
}
