//! Finite-dimensional right modules over `H(M_J)`, given by one matrix per generator, and their
//! analysis: relations, homomorphisms, simplicity, composition series, lattices, commutants,
//! change of scalars.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::affweyl::AffElt;
use crate::ffield::{embed, field, retract, Fe, Field};
use crate::heckealg::{centrals_for, Basis, CentralElement, Coeffs, HeckeAlg, HeckeElt};
use crate::matrix::{vec_mat, Echelon, Mat};
use crate::poly::{self, Poly};
use crate::rootdata::{load_preset, RootDatum};
use crate::{Error, Result};

/// Right module: `v · T(γ) = v · gens[γ]` for row vectors `v`.
#[derive(Clone)]
pub struct HModule {
    pub alg: Arc<HeckeAlg>,
    pub dim: usize,
    /// images of the affine simple reflections
    pub gens: Vec<Mat>,
    /// images of the length-zero generators
    pub omega: Vec<Mat>,
    pub omega_inv: Vec<Mat>,
}

impl std::fmt::Debug for HModule {
    fn fmt(&self, fm: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(fm, "{}", self.to_text())
    }
}

impl HModule {
    pub fn new(alg: &Arc<HeckeAlg>, gens: Vec<Mat>, omega: Vec<Mat>) -> Result<HModule> {
        let lv = &alg.levi;
        if gens.len() != lv.n_gens() || omega.len() != lv.n_omega() {
            return Err(Error::Relations("wrong number of generator matrices".into()));
        }
        let dim = gens.first().or(omega.first()).map(|m| m.rows).unwrap_or(0);
        if dim == 0 {
            return Err(Error::Relations("zero module".into()));
        }
        if gens.iter().chain(&omega).any(|m| m.rows != dim || m.cols != dim || *m.f != *alg.f) {
            return Err(Error::Relations("generator matrices of inconsistent size or field".into()));
        }
        let mut omega_inv = Vec::new();
        for (m, name) in omega.iter().zip(&lv.omega_names) {
            omega_inv.push(m.inverse().ok_or_else(|| Error::Relations(format!("T({name}) not invertible")))?);
        }
        Ok(HModule { alg: alg.clone(), dim, gens, omega, omega_inv })
    }

    /// Constructor that also requires every defining relation to hold.
    pub fn checked(alg: &Arc<HeckeAlg>, gens: Vec<Mat>, omega: Vec<Mat>) -> Result<HModule> {
        let m = HModule::new(alg, gens, omega)?;
        let fails = m.check_relations();
        if fails.is_empty() {
            Ok(m)
        } else {
            Err(Error::Relations(fails.join("; ")))
        }
    }

    pub fn character(alg: &Arc<HeckeAlg>, gen_vals: &[Fe], omega_vals: &[Fe]) -> Result<HModule> {
        let f = &alg.f;
        HModule::checked(
            alg,
            gen_vals.iter().map(|&v| Mat::scalar(f, 1, v)).collect(),
            omega_vals.iter().map(|&v| Mat::scalar(f, 1, v)).collect(),
        )
    }

    /// `T(s) ↦ 0`, `T(u) ↦ 1`.
    pub fn trivial(alg: &Arc<HeckeAlg>) -> HModule {
        HModule::character(alg, &vec![0; alg.levi.n_gens()], &vec![1; alg.levi.n_omega()]).expect("valid character")
    }

    /// `T(s) ↦ c_s`, `T(u) ↦ 1`.
    pub fn sign(alg: &Arc<HeckeAlg>) -> HModule {
        HModule::character(alg, &vec![alg.c; alg.levi.n_gens()], &vec![1; alg.levi.n_omega()]).expect("valid character")
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.alg.f
    }

    pub fn rd(&self) -> &Arc<RootDatum> {
        self.alg.rd()
    }

    /// All generator matrices: reflections, then length-zero generators.
    pub fn action_mats(&self) -> Vec<Mat> {
        self.gens.iter().chain(&self.omega).cloned().collect()
    }

    /// Failed relations, named; empty when the module is valid.
    pub fn check_relations(&self) -> Vec<String> {
        let lv = &self.alg.levi;
        let f = self.field();
        let mut fails = Vec::new();
        for (s, m) in self.gens.iter().enumerate() {
            if m.mul(m) != m.scale(self.alg.c) {
                fails.push(format!("quadratic relation for {}", lv.gen_names[s]));
            }
        }
        for a in 0..lv.n_gens() {
            for b in a + 1..lv.n_gens() {
                let mst = lv.coxeter[a][b];
                if mst == 0 {
                    continue;
                }
                let mut x = Mat::identity(f, self.dim);
                let mut y = Mat::identity(f, self.dim);
                for i in 0..mst {
                    let (p, q) = if i % 2 == 0 { (a, b) } else { (b, a) };
                    x = x.mul(&self.gens[p]);
                    y = y.mul(&self.gens[q]);
                }
                if x != y {
                    fails.push(format!("braid relation for {},{}", lv.gen_names[a], lv.gen_names[b]));
                }
            }
        }
        for (i, u) in self.omega.iter().enumerate() {
            for (j, v) in self.omega.iter().enumerate().skip(i + 1) {
                if u.mul(v) != v.mul(u) {
                    fails.push(format!("{} and {} commute", lv.omega_names[i], lv.omega_names[j]));
                }
            }
            for s in 0..lv.n_gens() {
                let lhs = u.mul(&self.gens[s]).mul(&self.omega_inv[i]);
                if lhs != self.gens[lv.omega_perm[i][s]] {
                    fails.push(format!("conjugation of {} by {}", lv.gen_names[s], lv.omega_names[i]));
                }
            }
        }
        fails
    }

    pub fn is_valid(&self) -> bool {
        self.check_relations().is_empty()
    }

    fn omega_mat(&self, b: &[i64]) -> Mat {
        let mut x = Mat::identity(self.field(), self.dim);
        for (i, &e) in b.iter().enumerate() {
            let base = if e < 0 { &self.omega_inv[i] } else { &self.omega[i] };
            x = x.mul(&base.pow(e.unsigned_abs()));
        }
        x
    }

    /// `ρ(T(x))`.
    pub fn rho(&self, x: &AffElt) -> Mat {
        let rw = self.alg.levi.reduced_word(x);
        let mut m = Mat::identity(self.field(), self.dim);
        for &s in &rw.word {
            m = m.mul(&self.gens[s]);
        }
        m.mul(&self.omega_mat(&rw.omega))
    }

    /// `ρ(T*(x))`.
    pub fn rho_tstar(&self, x: &AffElt) -> Mat {
        let rw = self.alg.levi.reduced_word(x);
        let c = self.field().neg(self.alg.c);
        let mut m = Mat::identity(self.field(), self.dim);
        for &s in &rw.word {
            m = m.mul(&self.gens[s].add_scalar(c));
        }
        m.mul(&self.omega_mat(&rw.omega))
    }

    /// `Σ a_x ρ(X(x))` for coordinates in the basis `X`.
    pub fn evaluate_coords(&self, a: &Coeffs, b: Basis) -> Mat {
        let f = self.field();
        let mut out = Mat::zeros(f, self.dim, self.dim);
        for (x, &v) in a {
            let r = match b {
                Basis::T => self.rho(x),
                Basis::TStar => self.rho_tstar(x),
            };
            out = out.add(&r.scale(v));
        }
        out
    }

    pub fn evaluate(&self, h: &HeckeElt) -> Result<Mat> {
        if !self.alg.same(&h.alg) {
            return Err(Error::Context("element and module live over different algebras".into()));
        }
        Ok(self.evaluate_coords(&h.terms, Basis::T))
    }

    /// Smallest submodule containing the given vectors.
    pub fn spin(&self, vecs: &[Vec<Fe>]) -> Echelon {
        spin_with(self.field(), self.dim, &self.action_mats(), vecs)
    }

    pub fn submodule(&self, e: &Echelon) -> HModule {
        let f = self.field();
        let restrict = |m: &Mat| {
            let rows: Vec<Vec<Fe>> = e.rows.iter().map(|r| e.coords(&vec_mat(r, m)).expect("invariant subspace")).collect();
            Mat::from_rows(f, &rows, e.dim())
        };
        HModule {
            alg: self.alg.clone(),
            dim: e.dim(),
            gens: self.gens.iter().map(restrict).collect(),
            omega: self.omega.iter().map(restrict).collect(),
            omega_inv: self.omega_inv.iter().map(restrict).collect(),
        }
    }

    /// The quotient by an invariant subspace, and the projection matrix.
    pub fn quotient(&self, e: &Echelon) -> (HModule, Mat) {
        let f = self.field();
        let free: Vec<usize> = (0..self.dim).filter(|c| !e.pivots.contains(c)).collect();
        let k = free.len();
        let project = |v: &[Fe]| -> Vec<Fe> {
            let r = e.reduce(v);
            free.iter().map(|&c| r[c]).collect()
        };
        let act = |m: &Mat| {
            let rows: Vec<Vec<Fe>> = free
                .iter()
                .map(|&c| {
                    let mut v = vec![0; self.dim];
                    v[c] = 1;
                    project(&vec_mat(&v, m))
                })
                .collect();
            Mat::from_rows(f, &rows, k)
        };
        let proj_rows: Vec<Vec<Fe>> = (0..self.dim)
            .map(|i| {
                let mut v = vec![0; self.dim];
                v[i] = 1;
                project(&v)
            })
            .collect();
        let q = HModule {
            alg: self.alg.clone(),
            dim: k,
            gens: self.gens.iter().map(act).collect(),
            omega: self.omega.iter().map(act).collect(),
            omega_inv: self.omega_inv.iter().map(act).collect(),
        };
        (q, Mat::from_rows(f, &proj_rows, k))
    }

    pub fn direct_sum(&self, o: &HModule) -> Result<HModule> {
        if !self.alg.same(&o.alg) {
            return Err(Error::Context("direct sum over different algebras".into()));
        }
        let f = self.field();
        let n = self.dim + o.dim;
        let block = |a: &Mat, b: &Mat| {
            let mut m = Mat::zeros(f, n, n);
            for i in 0..a.rows {
                for j in 0..a.cols {
                    m.set(i, j, a.get(i, j));
                }
            }
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m.set(self.dim + i, self.dim + j, b.get(i, j));
                }
            }
            m
        };
        HModule::new(
            &self.alg,
            self.gens.iter().zip(&o.gens).map(|(a, b)| block(a, b)).collect(),
            self.omega.iter().zip(&o.omega).map(|(a, b)| block(a, b)).collect(),
        )
    }

    /// The module with matrices `P⁻¹ ρ P`, i.e. in the basis given by the rows of `P⁻¹`.
    pub fn conjugate_by(&self, p: &Mat) -> Result<HModule> {
        let pi = p.inverse().ok_or_else(|| Error::Relations("basis change not invertible".into()))?;
        HModule::new(
            &self.alg,
            self.gens.iter().map(|m| pi.mul(m).mul(p)).collect(),
            self.omega.iter().map(|m| pi.mul(m).mul(p)).collect(),
        )
    }

    /// The dual: `γ` acts by the transpose of `ρ(ζ(T(γ)))`.
    pub fn dual(&self) -> HModule {
        HModule {
            alg: self.alg.clone(),
            dim: self.dim,
            gens: self.gens.iter().map(|m| m.transpose()).collect(),
            omega: self.omega_inv.iter().map(|m| m.transpose()).collect(),
            omega_inv: self.omega.iter().map(|m| m.transpose()).collect(),
        }
    }

    /// Module over `target` with `ρ'(h) = ρ(φ(h))` on generators.
    pub fn pullback(&self, target: &Arc<HeckeAlg>, phi: impl Fn(&HeckeElt) -> Result<HeckeElt>) -> Result<HModule> {
        let mut mats = Vec::new();
        for g in target.generators() {
            mats.push(self.evaluate(&phi(&g)?)?);
        }
        let omega = mats.split_off(target.levi.n_gens());
        HModule::new(target, mats, omega)
    }

    fn over_field(&self, f2: &Arc<Field>, g: impl Fn(Fe) -> Fe) -> HModule {
        let alg = HeckeAlg::new(&self.alg.levi, f2);
        HModule {
            alg,
            dim: self.dim,
            gens: self.gens.iter().map(|m| m.map(&g, f2)).collect(),
            omega: self.omega.iter().map(|m| m.map(&g, f2)).collect(),
            omega_inv: self.omega_inv.iter().map(|m| m.map(&g, f2)).collect(),
        }
    }

    /// Reinterprets the matrices over `F_{p^{k2}}`, `k | k2`.
    pub fn scalar_extend(&self, k2: u32) -> Result<HModule> {
        let f = self.field().clone();
        if k2 % f.k() != 0 {
            return Err(Error::Field(format!("{} does not divide {k2}", f.k())));
        }
        let f2 = field(f.p(), k2)?;
        Ok(self.over_field(&f2, |x| embed(&f, &f2, x)))
    }

    /// Entrywise `x ↦ x^{p^r}`.
    pub fn frobenius_twist(&self, r: u32) -> HModule {
        let f = self.field().clone();
        self.over_field(&f.clone(), move |x| {
            let mut y = x;
            for _ in 0..r {
                y = f.frobenius(y);
            }
            y
        })
    }

    /// Views the module as one over the subfield `F_{p^{k_small}}`, using the basis
    /// `1, β, …, β^{e-1}` of the big field with `β` its canonical primitive element.
    pub fn restrict_scalars(&self, k_small: u32) -> Result<HModule> {
        let big = self.field().clone();
        if big.k() % k_small != 0 {
            return Err(Error::Field(format!("{k_small} does not divide {}", big.k())));
        }
        let small = field(big.p(), k_small)?;
        let e = (big.k() / k_small) as usize;
        let beta = big.primitive();
        let powers: Vec<Fe> = (0..e).map(|i| big.pow(beta, i as i64)).collect();
        // coordinates of every big-field element
        let mut table: HashMap<Fe, Vec<Fe>> = HashMap::new();
        let smalls: Vec<Fe> = small.elements().collect();
        let mut c = vec![0usize; e];
        loop {
            let coords: Vec<Fe> = c.iter().map(|&i| smalls[i]).collect();
            let mut y = 0;
            for (ci, &p) in coords.iter().zip(&powers) {
                y = big.add(y, big.mul(embed(&small, &big, *ci), p));
            }
            table.insert(y, coords);
            let mut t = 0;
            while t < e && c[t] + 1 == smalls.len() {
                c[t] = 0;
                t += 1;
            }
            if t == e {
                break;
            }
            c[t] += 1;
        }
        let n = self.dim * e;
        let conv = |m: &Mat| {
            let mut out = Mat::zeros(&small, n, n);
            for i in 0..self.dim {
                for j in 0..self.dim {
                    let a = m.get(i, j);
                    for (r, &p) in powers.iter().enumerate() {
                        let co = &table[&big.mul(p, a)];
                        for (s, &v) in co.iter().enumerate() {
                            out.set(i * e + r, j * e + s, v);
                        }
                    }
                }
            }
            out
        };
        let alg = HeckeAlg::new(&self.alg.levi, &small);
        HModule::new(&alg, self.gens.iter().map(&conv).collect(), self.omega.iter().map(&conv).collect())
    }

    pub fn to_text(&self) -> String {
        let rd = self.rd();
        let f = self.field();
        let mut s = String::new();
        let _ = writeln!(s, "preset {}", rd.name);
        let _ = writeln!(s, "levi {}", rd.format_subset(self.alg.j()));
        let _ = writeln!(s, "field {}^{}", f.p(), f.k());
        let _ = writeln!(s, "dim {}", self.dim);
        let names = self.alg.levi.generator_names();
        for (name, m) in names.iter().zip(self.gens.iter().chain(&self.omega)) {
            let _ = writeln!(s, "gen {name}");
            for r in 0..m.rows {
                let row: Vec<String> = m.row(r).iter().map(|&x| f.format(x)).collect();
                let _ = writeln!(s, "{}", row.join(" "));
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<HModule> {
        let bad = |m: &str| Error::Parse(m.to_string());
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
        fn header<'a>(lines: &mut impl Iterator<Item = &'a str>, key: &str) -> Result<String> {
            let l = lines.next().ok_or_else(|| Error::Parse(format!("missing '{key}' line")))?;
            let rest = l.strip_prefix(key).ok_or_else(|| Error::Parse(format!("expected '{key}', found '{l}'")))?;
            Ok(rest.trim().to_string())
        }
        let rd = load_preset(&header(&mut lines, "preset")?)?;
        let j = rd.parse_subset(&header(&mut lines, "levi")?)?;
        let fs = header(&mut lines, "field")?;
        let (p, k) = fs.split_once('^').ok_or_else(|| bad("field must read p^k"))?;
        let f = field(p.parse().map_err(|_| bad("bad prime"))?, k.parse().map_err(|_| bad("bad degree"))?)?;
        let dim: usize = header(&mut lines, "dim")?.parse().map_err(|_| bad("bad dim"))?;
        let alg = HeckeAlg::for_subset(&rd, j, &f)?;
        let mut mats = Vec::new();
        for name in alg.levi.generator_names() {
            let g = header(&mut lines, "gen")?;
            if g != name {
                return Err(bad(&format!("expected generator {name}, found {g}")));
            }
            let mut rows = Vec::new();
            for _ in 0..dim {
                let l = lines.next().ok_or_else(|| bad("truncated matrix"))?;
                let row: Vec<Fe> = l.split_whitespace().map(|t| f.parse(t)).collect::<Result<_>>()?;
                if row.len() != dim {
                    return Err(bad("row of wrong length"));
                }
                rows.push(row);
            }
            mats.push(Mat::from_rows(&f, &rows, dim));
        }
        if lines.next().is_some() {
            return Err(bad("trailing content"));
        }
        let omega = mats.split_off(alg.levi.n_gens());
        HModule::new(&alg, mats, omega)
    }
}

pub fn spin_with(f: &Arc<Field>, n: usize, mats: &[Mat], vecs: &[Vec<Fe>]) -> Echelon {
    let mut e = Echelon::new(f, n);
    let mut queue: VecDeque<Vec<Fe>> = VecDeque::new();
    for v in vecs {
        if e.insert(v) {
            queue.push_back(v.clone());
        }
    }
    while let Some(v) = queue.pop_front() {
        if e.dim() == n {
            break;
        }
        for m in mats {
            let w = vec_mat(&v, m);
            if e.insert(&w) {
                queue.push_back(w);
            }
        }
    }
    e
}

fn same_alg(a: &HModule, b: &HModule) -> Result<()> {
    if a.alg.same(&b.alg) {
        Ok(())
    } else {
        Err(Error::Context("modules over different algebras".into()))
    }
}

/// Basis of `Hom(a, b)`: matrices `X` with `ρ_a(γ) X = X ρ_b(γ)` (maps `v ↦ vX`).
pub fn hom_space(a: &HModule, b: &HModule) -> Result<Vec<Mat>> {
    same_alg(a, b)?;
    let f = a.field();
    let (da, db) = (a.dim, b.dim);
    let ma = a.action_mats();
    let mb = b.action_mats();
    // spanning set of a built from module generators, with the matching product in b
    let mut ech = Echelon::new(f, da);
    let mut basis: Vec<Vec<Fe>> = Vec::new();
    let mut prov: Vec<(usize, Mat)> = Vec::new();
    let mut tops = 0;
    for i in 0..da {
        let mut e = vec![0; da];
        e[i] = 1;
        if !ech.insert(&e) {
            continue;
        }
        let start = basis.len();
        basis.push(e);
        prov.push((tops, Mat::identity(f, db)));
        tops += 1;
        let mut idx = start;
        while idx < basis.len() {
            for (g, m) in ma.iter().enumerate() {
                let w = vec_mat(&basis[idx], m);
                if ech.insert(&w) {
                    basis.push(w);
                    let p = prov[idx].1.mul(&mb[g]);
                    prov.push((prov[idx].0, p));
                }
            }
            idx += 1;
        }
    }
    let bmat = Mat::from_rows(f, &basis, da);
    let binv = bmat.inverse().expect("spanning set is a basis");
    let nu = tops * db;
    let neq = da * ma.len();
    let mut big = Mat::zeros(f, nu, neq * db);
    let mut eq = 0;
    let add_block = |big: &mut Mat, eq: usize, top: usize, m: &Mat, c: Fe| {
        for r in 0..db {
            for col in 0..db {
                let v = m.get(r, col);
                if v != 0 {
                    let (rr, cc) = (top * db + r, eq * db + col);
                    big.set(rr, cc, f.add(big.get(rr, cc), f.mul(c, v)));
                }
            }
        }
    };
    for i in 0..da {
        for g in 0..ma.len() {
            let img = vec_mat(&basis[i], &ma[g]);
            let coords = vec_mat(&img, &binv);
            add_block(&mut big, eq, prov[i].0, &prov[i].1.mul(&mb[g]), 1);
            for (j, &c) in coords.iter().enumerate() {
                if c != 0 {
                    add_block(&mut big, eq, prov[j].0, &prov[j].1, f.neg(c));
                }
            }
            eq += 1;
        }
    }
    let sols = big.left_kernel();
    Ok(sols
        .iter()
        .map(|w| {
            let rows: Vec<Vec<Fe>> = prov
                .iter()
                .map(|(top, p)| vec_mat(&w[top * db..(top + 1) * db], p))
                .collect();
            binv.mul(&Mat::from_rows(f, &rows, db))
        })
        .collect())
}

fn combos(f: &Field, basis: &[Mat], coeffs: &[Fe]) -> Mat {
    let mut x = Mat::zeros(&basis[0].f, basis[0].rows, basis[0].cols);
    for (m, &c) in basis.iter().zip(coeffs) {
        if c != 0 {
            x = x.add(&m.scale(c));
        }
    }
    let _ = f;
    x
}

/// An invertible element of the span of `basis`, if any.
pub fn find_invertible(f: &Arc<Field>, basis: &[Mat], seed: u64) -> Option<Mat> {
    let d = basis.len();
    if d == 0 || !basis[0].is_square() {
        return None;
    }
    let q = f.order() as u64;
    if (q as f64).powi(d as i32) <= 4096.0 {
        let elems: Vec<Fe> = f.elements().collect();
        let mut c = vec![0usize; d];
        loop {
            let coeffs: Vec<Fe> = c.iter().map(|&i| elems[i]).collect();
            let x = combos(f, basis, &coeffs);
            if x.rank() == x.rows {
                return Some(x);
            }
            let mut t = 0;
            while t < d && c[t] + 1 == elems.len() {
                c[t] = 0;
                t += 1;
            }
            if t == d {
                return None;
            }
            c[t] += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..400 {
        let coeffs: Vec<Fe> = (0..d).map(|_| rng.gen_range(0..f.order())).collect();
        let x = combos(f, basis, &coeffs);
        if x.rank() == x.rows {
            return Some(x);
        }
    }
    None
}

pub fn find_isomorphism(a: &HModule, b: &HModule) -> Result<Option<Mat>> {
    if a.dim != b.dim {
        return Ok(None);
    }
    let h = hom_space(a, b)?;
    Ok(find_invertible(a.field(), &h, 0x5eed))
}

pub fn is_isomorphic(a: &HModule, b: &HModule) -> Result<bool> {
    Ok(find_isomorphism(a, b)?.is_some())
}

fn random_element(f: &Field, mats: &[Mat], rng: &mut ChaCha8Rng) -> Mat {
    let n = mats[0].rows;
    let fa = &mats[0].f;
    let mut acc = Mat::zeros(fa, n, n);
    for _ in 0..4 {
        let len = rng.gen_range(1..=3);
        let mut w = Mat::identity(fa, n);
        for _ in 0..len {
            w = w.mul(&mats[rng.gen_range(0..mats.len())]);
        }
        let c = rng.gen_range(0..f.order());
        acc = acc.add(&w.scale(c));
    }
    acc.add_scalar(rng.gen_range(0..f.order()))
}

/// Minimal polynomial of `m` relative to the vector `v`.
fn krylov_minpoly(f: &Arc<Field>, m: &Mat, v: &[Fe]) -> Poly {
    let mut vecs: Vec<Vec<Fe>> = vec![v.to_vec()];
    let mut e = Echelon::from_rows(f, m.rows, &vecs);
    loop {
        let w = vec_mat(vecs.last().unwrap(), m);
        if e.contains(&w) {
            let a = Mat::from_rows(f, &vecs, m.rows);
            let c = a.solve_left(&w).expect("dependent vector");
            let mut p: Poly = c.iter().map(|&x| f.neg(x)).collect();
            p.push(1);
            return p;
        }
        e.insert(&w);
        vecs.push(w);
    }
}

/// Nonzero vectors of the span of `basis`, one per line, up to `limit` of them.
fn projective_points(f: &Field, basis: &[Vec<Fe>], limit: usize) -> Option<Vec<Vec<Fe>>> {
    let d = basis.len();
    let q = f.order() as f64;
    if (q.powi(d as i32) - 1.0) / (q - 1.0) > limit as f64 {
        return None;
    }
    let elems: Vec<Fe> = f.elements().collect();
    let mut out = Vec::new();
    for lead in 0..d {
        // coefficient 1 at `lead`, 0 before, anything after
        let free = d - lead - 1;
        let mut c = vec![0usize; free];
        loop {
            let mut v = basis[lead].clone();
            for (t, &ci) in c.iter().enumerate() {
                let a = elems[ci];
                if a != 0 {
                    for (x, &y) in v.iter_mut().zip(&basis[lead + 1 + t]) {
                        *x = f.add(*x, f.mul(a, y));
                    }
                }
            }
            out.push(v);
            let mut t = 0;
            while t < free && c[t] + 1 == elems.len() {
                c[t] = 0;
                t += 1;
            }
            if t == free {
                break;
            }
            c[t] += 1;
        }
    }
    Some(out)
}

/// A proper nonzero submodule, or `None` when the module is simple (Norton's criterion).
pub fn find_proper_submodule(m: &HModule, seed: u64) -> Option<Echelon> {
    let n = m.dim;
    if n == 1 {
        return None;
    }
    let f = m.field().clone();
    let mats = m.action_mats();
    let mt: Vec<Mat> = mats.iter().map(|x| x.transpose()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..2000 {
        let th = random_element(&f, &mats, &mut rng);
        let v: Vec<Fe> = (0..n).map(|_| rng.gen_range(0..f.order())).collect();
        if v.iter().all(|&x| x == 0) {
            continue;
        }
        let mp = krylov_minpoly(&f, &th, &v);
        if poly::degree(&mp).unwrap_or(0) == 0 {
            continue;
        }
        let pd = poly::least_degree_part(&f, &mp);
        let nmat = poly::eval_mat(&pd, &th);
        let ker = nmat.left_kernel();
        // lazily test kernel vectors; a proper spin is a witness
        let Some(points) = projective_points(&f, &ker, 4096) else {
            for w in &ker {
                let s = m.spin(&[w.clone()]);
                if s.dim() < n {
                    return Some(s);
                }
            }
            continue;
        };
        for w in &points {
            let s = m.spin(&[w.clone()]);
            if s.dim() < n {
                return Some(s);
            }
        }
        let kt = nmat.transpose().left_kernel();
        let s = spin_with(&f, n, &mt, &[kt[0].clone()]);
        if s.dim() < n {
            // annihilator of a proper submodule of the dual
            let ann = s.to_mat().right_kernel();
            return Some(Echelon::from_rows(&f, n, &ann));
        }
        return None;
    }
    panic!("no usable algebra element found for the irreducibility test");
}

pub fn is_simple(m: &HModule) -> bool {
    find_proper_submodule(m, 0x11).is_none()
}

/// Composition factors, top quotients first.
pub fn composition_series(m: &HModule, seed: u64) -> Vec<HModule> {
    match find_proper_submodule(m, seed) {
        None => vec![m.clone()],
        Some(u) => {
            let (q, _) = m.quotient(&u);
            let mut out = composition_series(&q, seed.wrapping_add(1));
            out.extend(composition_series(&m.submodule(&u), seed.wrapping_add(2)));
            out
        }
    }
}

/// Groups modules into isomorphism classes; returns the class index of each.
pub fn iso_classes(mods: &[HModule]) -> Result<Vec<usize>> {
    let mut reps: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for (i, m) in mods.iter().enumerate() {
        let mut found = None;
        for (c, &r) in reps.iter().enumerate() {
            if is_isomorphic(&mods[r], m)? {
                found = Some(c);
                break;
            }
        }
        out.push(found.unwrap_or_else(|| {
            reps.push(i);
            reps.len() - 1
        }));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutantReport {
    pub commutant_dim: usize,
    pub center_degree: usize,
    pub is_field: bool,
}

fn flatten(m: &Mat) -> Vec<Fe> {
    m.data.clone()
}

pub fn commutant(m: &HModule) -> Result<CommutantReport> {
    let e = hom_space(m, m)?;
    let f = m.field();
    let d = e.len();
    // centre: x = Σ a_i E_i with x E_j = E_j x
    let n2 = m.dim * m.dim;
    let mut sys = Mat::zeros(f, d, (d * n2).max(1));
    for i in 0..d {
        for (j, ej) in e.iter().enumerate() {
            let c = e[i].mul(ej).sub(&ej.mul(&e[i]));
            for (t, &v) in c.data.iter().enumerate() {
                sys.set(i, j * n2 + t, v);
            }
        }
    }
    let center = sys.left_kernel().len();
    let commutative = center == d;
    let mut is_field = false;
    if commutative {
        let span = Echelon::from_rows(f, n2, &e.iter().map(flatten).collect::<Vec<_>>());
        // express in the echelon basis, then convert to the E basis
        let to_e = {
            let rows: Vec<Vec<Fe>> = e.iter().map(|x| span.coords(&flatten(x)).unwrap()).collect();
            Mat::from_rows(f, &rows, d).inverse().expect("basis")
        };
        let q = f.order() as u64;
        let frob_rows: Vec<Vec<Fe>> = e.iter().map(|x| vec_mat(&span.coords(&flatten(&x.pow(q))).unwrap(), &to_e)).collect();
        let frob = Mat::from_rows(f, &frob_rows, d);
        let fixed = frob.add_scalar(f.neg(1)).left_kernel().len();
        let nil = frob.pow(d as u64).left_kernel().len();
        is_field = fixed == 1 && nil == 0;
    }
    Ok(CommutantReport { commutant_dim: d, center_degree: center, is_field })
}

#[derive(Clone, Debug)]
pub struct ExtensionReport {
    pub degree: usize,
    pub factors: Vec<HModule>,
    pub absolutely_simple: bool,
    pub pairwise_distinct: bool,
    pub frobenius_transitive: bool,
}

impl ExtensionReport {
    pub fn ok(&self) -> bool {
        self.factors.len() == self.degree && self.absolutely_simple && self.pairwise_distinct && self.frobenius_transitive
    }
}

/// Decomposes the scalar extension of a simple module to `F_{p^{k2}}`.
pub fn decompose_extension(m: &HModule, k2: u32) -> Result<ExtensionReport> {
    if !is_simple(m) {
        return Err(Error::Verification("decomposition requires a simple module".into()));
    }
    let e = commutant(m)?.center_degree;
    let ext = m.scalar_extend(k2)?;
    let factors = composition_series(&ext, 7);
    if factors.len() < e {
        return Err(Error::ExtensionTooSmall(format!("{} factors over degree {k2}, commutant degree {e}", factors.len())));
    }
    let mut absolutely_simple = true;
    for x in &factors {
        absolutely_simple &= commutant(x)?.commutant_dim == 1;
    }
    let classes = iso_classes(&factors)?;
    let distinct: BTreeSet<usize> = classes.iter().copied().collect();
    let pairwise_distinct = distinct.len() == factors.len();
    let mut hit = BTreeSet::new();
    let k = m.field().k();
    let mut x = factors[0].clone();
    for _ in 0..factors.len() {
        for (i, y) in factors.iter().enumerate() {
            if is_isomorphic(&x, y)? {
                hit.insert(i);
            }
        }
        x = x.frobenius_twist(k);
    }
    let frobenius_transitive = hit.len() == factors.len();
    Ok(ExtensionReport { degree: e, factors, absolutely_simple, pairwise_distinct, frobenius_transitive })
}

/// Matrices in the basis obtained by spinning `v` in generator order.
fn spin_basis(m: &HModule, v: &[Fe]) -> Option<Mat> {
    let mats = m.action_mats();
    let mut e = Echelon::new(m.field(), m.dim);
    let mut basis = vec![v.to_vec()];
    e.insert(v);
    let mut idx = 0;
    while idx < basis.len() {
        for g in &mats {
            let w = vec_mat(&basis[idx], g);
            if e.insert(&w) {
                basis.push(w);
            }
        }
        idx += 1;
    }
    (basis.len() == m.dim).then(|| Mat::from_rows(m.field(), &basis, m.dim))
}

/// A model over the smallest possible subfield, and its degree over `F_p`.
pub fn descend(m: &HModule) -> Result<(HModule, u32)> {
    let f = m.field().clone();
    let mats = m.action_mats();
    let n = m.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(0xde5c);
    for _ in 0..500 {
        // algebra element with prime-field coefficients
        let mut h = Mat::zeros(&f, n, n);
        for _ in 0..5 {
            let len = rng.gen_range(0..=3);
            let mut w = Mat::identity(&f, n);
            for _ in 0..len {
                w = w.mul(&mats[rng.gen_range(0..mats.len())]);
            }
            h = h.add(&w.scale(rng.gen_range(0..f.p())));
        }
        let ker = h.left_kernel();
        if ker.len() != 1 {
            continue;
        }
        let Some(b) = spin_basis(m, &ker[0]) else { continue };
        let canon = m.conjugate_by(&b.inverse().expect("basis"))?;
        let entries: Vec<Fe> = canon.gens.iter().chain(&canon.omega).flat_map(|x| x.data.clone()).collect();
        let d = f.minimal_subfield(&entries);
        let small = field(f.p(), d)?;
        let conv = |x: &Mat| x.map(|y| retract(&f, &small, y).expect("entry in subfield"), &small);
        let alg = HeckeAlg::new(&m.alg.levi, &small);
        let model = HModule::new(&alg, canon.gens.iter().map(conv).collect(), canon.omega.iter().map(conv).collect())?;
        return Ok((model, d));
    }
    let entries: Vec<Fe> = mats.iter().flat_map(|x| x.data.clone()).collect();
    Ok((m.clone(), f.minimal_subfield(&entries).max(1)))
}

/// Lattice of submodules of a multiplicity-free module.
#[derive(Clone, Debug)]
pub struct SubmoduleLattice {
    pub nodes: Vec<Echelon>,
    /// composition factors of the module, by isomorphism class
    pub factors: Vec<HModule>,
    /// which factors occur in each node
    pub labels: Vec<BTreeSet<usize>>,
    pub leq: Vec<Vec<bool>>,
    pub join: Vec<Vec<usize>>,
    pub meet: Vec<Vec<usize>>,
}

impl SubmoduleLattice {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Whether the join/meet tables satisfy the lattice axioms and match inclusion.
    pub fn check_axioms(&self) -> bool {
        let n = self.len();
        for a in 0..n {
            if self.join[a][a] != a || self.meet[a][a] != a {
                return false;
            }
            for b in 0..n {
                if self.join[a][b] != self.join[b][a] || self.meet[a][b] != self.meet[b][a] {
                    return false;
                }
                if self.meet[a][self.join[a][b]] != a || self.join[a][self.meet[a][b]] != a {
                    return false;
                }
                if self.leq[a][b] != (self.join[a][b] == b) {
                    return false;
                }
                for c in 0..n {
                    if self.join[self.join[a][b]][c] != self.join[a][self.join[b][c]] {
                        return false;
                    }
                }
            }
        }
        true
    }
}

pub fn submodule_lattice(m: &HModule) -> Result<SubmoduleLattice> {
    if m.dim > 64 {
        return Err(Error::SizeLimit(format!("submodule lattice of dimension {}", m.dim)));
    }
    let f = m.field().clone();
    let series = composition_series(m, 3);
    let classes = iso_classes(&series)?;
    if classes.iter().collect::<BTreeSet<_>>().len() != series.len() {
        return Err(Error::NotMultiplicityFree(format!("{} factors, {} classes", series.len(), classes.iter().max().map_or(0, |x| x + 1))));
    }
    let factors = series;
    let zero = Echelon::new(&f, m.dim);
    let mut nodes = vec![zero];
    let mut labels = vec![BTreeSet::new()];
    let mut index: HashMap<Vec<Fe>, usize> = HashMap::from([(nodes[0].key(), 0)]);
    let mut head = 0;
    while head < nodes.len() {
        let nnode = nodes[head].clone();
        if nnode.dim() < m.dim {
            let (q, _) = m.quotient(&nnode);
            // lift: quotient coordinates are the non-pivot columns
            let free: Vec<usize> = (0..m.dim).filter(|c| !nnode.pivots.contains(c)).collect();
            for (si, s) in factors.iter().enumerate() {
                if labels[head].contains(&si) {
                    continue;
                }
                let h = hom_space(s, &q)?;
                let Some(x) = h.first() else { continue };
                let mut up = nnode.clone();
                for r in 0..x.rows {
                    let mut v = vec![0; m.dim];
                    for (t, &c) in free.iter().enumerate() {
                        v[c] = x.get(r, t);
                    }
                    up.insert(&v);
                }
                let key = up.key();
                if !index.contains_key(&key) {
                    index.insert(key, nodes.len());
                    let mut l = labels[head].clone();
                    l.insert(si);
                    nodes.push(up);
                    labels.push(l);
                }
            }
        }
        head += 1;
    }
    let n = nodes.len();
    let find = |e: &Echelon| -> Result<usize> {
        index.get(&e.key()).copied().ok_or_else(|| Error::Verification("lattice not closed under sum or intersection".into()))
    };
    let mut join = vec![vec![0; n]; n];
    let mut meet = vec![vec![0; n]; n];
    let mut leq = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            join[a][b] = find(&nodes[a].sum(&nodes[b]))?;
            meet[a][b] = find(&nodes[a].intersect(&nodes[b]))?;
            leq[a][b] = nodes[a].rows.iter().all(|r| nodes[b].contains(r));
        }
    }
    Ok(SubmoduleLattice { nodes, factors, labels, leq, join, meet })
}

/// Whether every central element of the list acts nilpotently.
pub fn is_supersingular(m: &HModule, centrals: &[CentralElement]) -> Result<bool> {
    let rd = m.rd();
    let k = m.alg.j();
    let mut out = true;
    for j in k.subsets() {
        if j == k {
            continue;
        }
        let ce = centrals
            .iter()
            .find(|c| c.k == k && c.j == j && Arc::ptr_eq(c.elt.alg.rd(), rd))
            .ok_or_else(|| Error::MissingLevi(rd.format_subset(j)))?;
        if !ce.verified {
            return Err(Error::Unverified(rd.format_subset(j)));
        }
        if ce.elt.terms.values().any(|&v| v >= m.field().p()) {
            return Err(Error::Context("central element coefficients outside the prime field".into()));
        }
        let z = m.evaluate_coords(&ce.elt.terms, Basis::T);
        out &= z.pow(m.dim as u64).is_zero();
    }
    Ok(out)
}

/// Supersingularity against the default verified central elements.
pub fn is_supersingular_default(m: &HModule) -> Result<bool> {
    let cs = centrals_for(&m.alg)?;
    is_supersingular(m, &cs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rootdata::Subset;

    fn alg(name: &str, j: Option<Subset>, k: u32) -> Arc<HeckeAlg> {
        let rd = load_preset(name).unwrap();
        let j = j.unwrap_or(rd.delta());
        HeckeAlg::for_subset(&rd, j, &field(2, k).unwrap()).unwrap()
    }

    #[test]
    fn characters_and_relations() {
        let h = alg("GL3_Q2", None, 1);
        assert!(HModule::trivial(&h).is_valid());
        assert!(HModule::sign(&h).is_valid());
        let f = h.f.clone();
        let bad = HModule::new(
            &h,
            vec![Mat::from_rows(&f, &[vec![1, 1], vec![0, 1]], 2); 3],
            vec![Mat::identity(&f, 2)],
        )
        .unwrap();
        assert!(!bad.check_relations().is_empty());
    }

    #[test]
    fn hom_and_iso() {
        let h = alg("SL2_Q2", None, 2);
        let t = HModule::trivial(&h);
        let s = HModule::sign(&h);
        assert_eq!(hom_space(&t, &s).unwrap().len(), 0);
        let ts = t.direct_sum(&s).unwrap();
        assert!(!is_simple(&ts));
        assert_eq!(composition_series(&ts, 1).len(), 2);
        let tt = t.direct_sum(&t).unwrap();
        assert_eq!(hom_space(&tt, &t).unwrap().len(), 2);
        assert_eq!(commutant(&tt).unwrap(), CommutantReport { commutant_dim: 4, center_degree: 1, is_field: false });
        let d = ts.dual();
        assert!(is_isomorphic(&d, &ts).unwrap());
    }

    #[test]
    fn restriction_of_scalars_commutant() {
        let h = alg("GL2_Q2", None, 2);
        let f = h.f.clone();
        let g = f.generator();
        let chi = HModule::character(&h, &[0, 0], &[g]).unwrap();
        let r = chi.restrict_scalars(1).unwrap();
        assert!(r.is_valid());
        assert!(is_simple(&r));
        assert_eq!(commutant(&r).unwrap(), CommutantReport { commutant_dim: 2, center_degree: 2, is_field: true });
        let rep = decompose_extension(&r, 2).unwrap();
        assert!(rep.ok());
        assert!(matches!(decompose_extension(&r, 3), Err(Error::ExtensionTooSmall(_))));
        assert!(is_simple(&r.scalar_extend(3).unwrap()));
    }

    #[test]
    fn descent_round_trip() {
        let h = alg("GL2_Q2", None, 2);
        let g = h.f.generator();
        let chi = HModule::character(&h, &[0, 0], &[g]).unwrap();
        let ext = chi.scalar_extend(4).unwrap();
        let (model, d) = descend(&ext).unwrap();
        assert_eq!(d, 2);
        assert!(is_isomorphic(&model.scalar_extend(4).unwrap(), &ext).unwrap());
        let (_, d2) = descend(&ext.frobenius_twist(1)).unwrap();
        assert_eq!(d2, 2);
    }

    #[test]
    fn text_round_trip() {
        let h = alg("GL2_Q2", None, 2);
        let g = h.f.generator();
        let chi = HModule::character(&h, &[1, 1], &[g]).unwrap();
        let back = HModule::from_text(&chi.to_text()).unwrap();
        assert_eq!(back.to_text(), chi.to_text());
        assert!(HModule::from_text("preset GL2_Q2\nlevi alpha\n").is_err());
    }
}
