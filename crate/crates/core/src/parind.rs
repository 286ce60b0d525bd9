//! Parabolic induction and its variants, adjoints, extensions `e(V)`, generalized Steinberg
//! modules and triples.

use std::collections::BTreeSet;
use std::sync::Arc;

use crate::affweyl::AffElt;
use crate::ffield::Fe;
use crate::heckealg::{twist_element, Basis, HeckeAlg, HeckeElt};
use crate::heckemod::{find_isomorphism, hom_space, is_isomorphic, HModule};
use crate::matrix::{vec_mat, Echelon, Mat};
use crate::rootdata::{RootDatum, Subset};
use crate::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum Side {
    Tensor,
    Hom,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

pub fn other_basis(b: Basis) -> Basis {
    match b {
        Basis::T => Basis::TStar,
        Basis::TStar => Basis::T,
    }
}

/// One of the eight inductions `(side, ε, η)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Variant {
    pub side: Side,
    pub eps: Sign,
    pub eta: Basis,
}

impl Variant {
    pub fn all() -> Vec<Variant> {
        let mut v = Vec::new();
        for side in [Side::Tensor, Side::Hom] {
            for eps in [Sign::Plus, Sign::Minus] {
                for eta in [Basis::T, Basis::TStar] {
                    v.push(Variant { side, eps, eta });
                }
            }
        }
        v
    }

    pub fn name(&self) -> String {
        format!(
            "({},{},{})",
            match self.side {
                Side::Tensor => "tensor",
                Side::Hom => "hom",
            },
            match self.eps {
                Sign::Plus => "+",
                Sign::Minus => "-",
            },
            match self.eta {
                Basis::T => "theta",
                Basis::TStar => "theta*",
            }
        )
    }
}

pub const INDUCE: Variant = Variant { side: Side::Tensor, eps: Sign::Plus, eta: Basis::T };
pub const COINDUCE: Variant = Variant { side: Side::Hom, eps: Sign::Plus, eta: Basis::TStar };

/// An induced module with its coset bookkeeping.
#[derive(Clone, Debug)]
pub struct InducedModule {
    pub base: HModule,
    pub levi: Subset,
    pub ambient: Subset,
    pub cosets: Vec<u8>,
    pub carrier: HModule,
    /// `(base coordinate, coset index)` of each carrier coordinate
    pub basis_map: Vec<(usize, usize)>,
}

/// A vector `b` with `<b, α> = 0` on `J` and `≥ 1` on the other simple roots of `K`.
pub fn central_direction(rd: &RootDatum, k: Subset, j: Subset) -> Result<Vec<i64>> {
    let r = rd.rank;
    let mut best: Option<(i64, Vec<i64>)> = None;
    let mut c = vec![-3i64; r];
    loop {
        let ok = k.iter().all(|i| {
            let p = rd.pair(&c, i);
            if j.contains(i) {
                p == 0
            } else {
                p >= 1
            }
        });
        let norm: i64 = c.iter().map(|x| x.abs()).sum();
        if ok && best.as_ref().map_or(true, |(b, _)| norm < *b) {
            best = Some((norm, c.clone()));
        }
        let mut t = 0;
        while t < r && c[t] == 3 {
            c[t] = -3;
            t += 1;
        }
        if t == r {
            break;
        }
        c[t] += 1;
    }
    best.map(|(_, b)| b).ok_or_else(|| Error::Reduction(format!("no central direction for {}", rd.format_subset(j))))
}

struct Engine<'a> {
    kalg: &'a Arc<HeckeAlg>,
    v: &'a HModule,
    rd: Arc<RootDatum>,
    j: Subset,
    reps: Vec<u8>,
    var: Variant,
    /// `z_d` (tensor) or `z'_d` (hom)
    z: Vec<AffElt>,
    a: AffElt,
}

const MAX_DEPTH: i64 = 10;

impl<'a> Engine<'a> {
    fn new(kalg: &'a Arc<HeckeAlg>, v: &'a HModule, var: Variant) -> Result<Engine<'a>> {
        let rd = kalg.rd().clone();
        let k = kalg.j();
        let j = v.alg.j();
        if !j.is_subset(k) || v.rd().name != rd.name || **v.field() != *kalg.f {
            return Err(Error::Context("module is not over a Levi subalgebra of the ambient algebra".into()));
        }
        let reps = rd.min_coset_reps_in(k, j);
        let b = central_direction(&rd, k, j)?;
        let tb = rd.translation(&b);
        let tmb = rd.inv(&tb);
        let plus_z = |d: u8| rd.mul(&tb, &rd.finite(d));
        let minus_z = |d: u8| rd.finite(d);
        let z: Vec<AffElt> = reps
            .iter()
            .map(|&d| match (var.side, var.eps) {
                (Side::Tensor, Sign::Plus) => plus_z(d),
                (Side::Tensor, Sign::Minus) => minus_z(d),
                (Side::Hom, Sign::Plus) => rd.inv(&minus_z(d)),
                (Side::Hom, Sign::Minus) => rd.inv(&plus_z(d)),
            })
            .collect();
        let a = match var.eps {
            Sign::Plus => tb,
            Sign::Minus => tmb,
        };
        Ok(Engine { kalg, v, rd, j, reps, var, z, a })
    }

    fn eta(&self, x: &AffElt) -> HeckeElt {
        match self.var.eta {
            Basis::T => self.kalg.t(x),
            Basis::TStar => self.kalg.tstar(x),
        }
    }

    fn rho_v(&self, m: &AffElt) -> Mat {
        match self.var.eta {
            Basis::T => self.v.rho(m),
            Basis::TStar => self.v.rho_tstar(m),
        }
    }

    fn in_monoid(&self, m: &AffElt) -> bool {
        let k = self.kalg.j();
        match self.var.eps {
            Sign::Plus => self.rd.is_positive_in(m, k, self.j).unwrap_or(false),
            Sign::Minus => self.rd.is_negative_in(m, k, self.j).unwrap_or(false),
        }
    }

    fn rep_index(&self, w: u8) -> usize {
        // coset W_{0,J} w
        self.reps
            .iter()
            .position(|&d| {
                let x = self.rd.weyl.mul[w as usize][self.rd.weyl.inv[d as usize] as usize];
                self.rd.in_levi(&self.rd.finite(x), self.j)
            })
            .expect("every element lies in some coset")
    }

    /// Splits `y` as `m · z_d` (tensor) or `z'_d · m` (hom) with lengths adding.
    fn split(&self, y: &AffElt) -> Option<(AffElt, usize)> {
        let rd = &self.rd;
        let lv = &self.kalg.levi;
        let (m, d) = match self.var.side {
            Side::Tensor => {
                let d = self.rep_index(y.w);
                (rd.mul(y, &rd.inv(&self.z[d])), d)
            }
            Side::Hom => {
                let d = self.rep_index(rd.weyl.inv[y.w as usize]);
                (rd.mul(&rd.inv(&self.z[d]), y), d)
            }
        };
        let ok = self.in_monoid(&m) && lv.length(y) == lv.length(&m) + lv.length(&self.z[d]);
        ok.then_some((m, d))
    }

    fn run(&self) -> Result<InducedModule> {
        let f = self.kalg.f.clone();
        let n = self.v.dim;
        let nd = self.reps.len();
        let ainv = self.v.rho(&self.a).inverse().ok_or_else(|| Error::Reduction("deep element not invertible".into()))?;
        let mut mats = Vec::new();
        for g in self.kalg.generators() {
            let mut big = Mat::zeros(&f, n * nd, n * nd);
            for d in 0..nd {
                let mut done = false;
                for k in 0..=MAX_DEPTH {
                    let ak = self.eta(&self.rd.pow(&self.a, k));
                    let prod = match self.var.side {
                        Side::Tensor => ak.mul(&self.eta(&self.z[d]).mul(&g)?)?,
                        Side::Hom => g.mul(&self.eta(&self.z[d]))?.mul(&ak)?,
                    };
                    let coords = prod.coords(self.var.eta);
                    let mut pieces = Vec::new();
                    for (y, &c) in &coords {
                        match self.split(y) {
                            Some((m, d2)) => pieces.push((m, d2, c)),
                            None => break,
                        }
                    }
                    if pieces.len() != coords.len() {
                        continue;
                    }
                    let apow = ainv.pow(k as u64);
                    for (m, d2, c) in pieces {
                        let blk = match self.var.side {
                            Side::Tensor => apow.mul(&self.rho_v(&m)).scale(c),
                            Side::Hom => self.rho_v(&m).mul(&apow).scale(c),
                        };
                        let (r0, c0) = match self.var.side {
                            Side::Tensor => (d * n, d2 * n),
                            Side::Hom => (d2 * n, d * n),
                        };
                        for i in 0..n {
                            for jj in 0..n {
                                let x = blk.get(i, jj);
                                if x != 0 {
                                    big.set(r0 + i, c0 + jj, f.add(big.get(r0 + i, c0 + jj), x));
                                }
                            }
                        }
                    }
                    done = true;
                    break;
                }
                if !done {
                    return Err(Error::Reduction(format!("no additive splitting for coset {d} in {}", self.var.name())));
                }
            }
            mats.push(big);
        }
        let omega = mats.split_off(self.kalg.levi.n_gens());
        let carrier = HModule::checked(self.kalg, mats, omega)?;
        Ok(InducedModule {
            base: self.v.clone(),
            levi: self.j,
            ambient: self.kalg.j(),
            cosets: self.reps.clone(),
            carrier,
            basis_map: (0..nd).flat_map(|d| (0..n).map(move |i| (i, d))).collect(),
        })
    }
}

/// Induction of `v` from its Levi to the Levi of `kalg`, in the given variant.
pub fn induce_variant(kalg: &Arc<HeckeAlg>, v: &HModule, var: Variant) -> Result<InducedModule> {
    Engine::new(kalg, v, var)?.run()
}

fn ambient_alg(v: &HModule, k: Subset) -> Result<Arc<HeckeAlg>> {
    HeckeAlg::for_subset(v.rd(), k, v.field())
}

/// `Ind_P^{H(G)}(V) = V ⊗_{H(M⁺),θ} H(G)`.
pub fn induce(v: &HModule) -> Result<InducedModule> {
    let k = v.rd().delta();
    induce_variant(&ambient_alg(v, k)?, v, INDUCE)
}

/// Induction into the Levi `K ⊇ J`.
pub fn induce_to(v: &HModule, k: Subset) -> Result<InducedModule> {
    induce_variant(&ambient_alg(v, k)?, v, INDUCE)
}

/// `Hom_{H(M⁺),θ*}(H(G), V)`.
pub fn coinduce(v: &HModule) -> Result<InducedModule> {
    let k = v.rd().delta();
    induce_variant(&ambient_alg(v, k)?, v, COINDUCE)
}

/// Fitting decomposition of an operator: basis of the invertible part.
fn invertible_part(p: &Mat) -> Echelon {
    let n = p.rows;
    let pn = p.pow(n as u64);
    Echelon::from_rows(&p.f, n, &pn.row_vecs())
}

fn restrict_op(e: &Echelon, m: &Mat) -> Result<Mat> {
    let rows: Result<Vec<Vec<Fe>>> = e
        .rows
        .iter()
        .map(|r| e.coords(&vec_mat(r, m)).ok_or_else(|| Error::Verification("operator does not preserve the subspace".into())))
        .collect();
    Ok(Mat::from_rows(&e.f, &rows?, e.dim()))
}

/// Smallest `k` such that `a^k g` is positive for every generator `g` of the Levi.
fn positivity_depth(rd: &RootDatum, kset: Subset, j: Subset, a: &AffElt, gens: &[AffElt]) -> Result<i64> {
    for k in 0..=MAX_DEPTH {
        let ak = rd.pow(a, k);
        if gens.iter().all(|g| rd.is_positive_in(&rd.mul(&ak, g), kset, j).unwrap_or(false)) {
            return Ok(k);
        }
    }
    Err(Error::Reduction("no positive depth".into()))
}

/// Right adjoint `R = Hom_{H(M⁺),θ}(H(M), −)`: the invertible part of `T(a)` with transported
/// action. `None` is the zero module.
pub fn adjoint_r(x: &HModule, j: Subset) -> Result<Option<HModule>> {
    let rd = x.rd().clone();
    let kset = x.alg.j();
    let jalg = HeckeAlg::for_subset(&rd, j, x.field())?;
    let a = rd.translation(&central_direction(&rd, kset, j)?);
    let gens: Vec<AffElt> = jalg.levi.gens.iter().chain(&jalg.levi.omega).copied().collect();
    let depth = positivity_depth(&rd, kset, j, &a, &gens)?;
    let e = invertible_part(&x.rho(&a));
    if e.dim() == 0 {
        return Ok(None);
    }
    let ainv = restrict_op(&e, &x.rho(&a))?.inverse().expect("invertible part");
    let mut mats = Vec::new();
    for g in &gens {
        let op = restrict_op(&e, &x.rho(&rd.mul(&rd.pow(&a, depth), g)))?;
        mats.push(ainv.pow(depth as u64).mul(&op));
    }
    let omega = mats.split_off(jalg.levi.n_gens());
    HModule::checked(&jalg, mats, omega).map(Some)
}

/// Left adjoint `L = − ⊗_{H(M⁺),θ*} H(M)`: localization at `T*(a)`. `None` is the zero module.
pub fn adjoint_l(x: &HModule, j: Subset) -> Result<Option<HModule>> {
    let rd = x.rd().clone();
    let kset = x.alg.j();
    let f = x.field().clone();
    let jalg = HeckeAlg::for_subset(&rd, j, &f)?;
    let a = rd.translation(&central_direction(&rd, kset, j)?);
    let gens: Vec<AffElt> = jalg.levi.gens.iter().chain(&jalg.levi.omega).copied().collect();
    let depth = positivity_depth(&rd, kset, j, &a, &gens)?;
    let bmat = x.rho_tstar(&a);
    let inv = invertible_part(&bmat);
    if inv.dim() == 0 {
        return Ok(None);
    }
    // projection onto the invertible part along the nilpotent part
    let nil = Echelon::from_rows(&f, x.dim, &bmat.pow(x.dim as u64).left_kernel());
    let proj = |v: &[Fe]| -> Vec<Fe> {
        let mut basis = inv.rows.clone();
        basis.extend(nil.rows.iter().cloned());
        let m = Mat::from_rows(&f, &basis, x.dim);
        let c = m.solve_left(v).expect("Fitting decomposition spans");
        let mut out = vec![0; inv.dim()];
        out.copy_from_slice(&c[..inv.dim()]);
        out
    };
    let binv = restrict_op(&inv, &bmat)?.inverse().expect("invertible part");
    let bk = binv.pow(depth as u64);
    let c = jalg.c;
    let mut mats = Vec::new();
    for (gi, g) in gens.iter().enumerate() {
        let op = x.rho_tstar(&rd.mul(&rd.pow(&a, depth), g));
        let rows: Vec<Vec<Fe>> = inv.rows.iter().map(|r| proj(&vec_mat(r, &op))).collect();
        let tstar = Mat::from_rows(&f, &rows, inv.dim()).mul(&bk);
        mats.push(if gi < jalg.levi.n_gens() { tstar.add_scalar(c) } else { tstar });
    }
    let omega = mats.split_off(jalg.levi.n_gens());
    HModule::checked(&jalg, mats, omega).map(Some)
}

/// Roots orthogonal to `J` whose coroot translation acts trivially through `T*`.
pub fn delta_v(v: &HModule) -> Subset {
    let rd = v.rd();
    let j = v.alg.j();
    let mut out = Subset::empty();
    for a in rd.orthogonal(j).iter() {
        let t = rd.translation(&rd.roots[a].covec);
        if v.rho_tstar(&t).is_identity() {
            out = out.union(Subset::single(a));
        }
    }
    out
}

pub fn p_of_v(v: &HModule) -> Subset {
    v.alg.j().union(delta_v(v))
}

/// `e_K(V)`: the extension of `V` to `H(M_K)` for `J ⊆ K ⊆ P(V)`.
pub fn extend_e(v: &HModule, k: Subset) -> Result<HModule> {
    let rd = v.rd().clone();
    let j = v.alg.j();
    if !j.is_subset(k) || !k.is_subset(p_of_v(v)) {
        return Err(Error::InvalidTriple(format!("{} is not between {} and P(V)", rd.format_subset(k), rd.format_subset(j))));
    }
    let f = v.field().clone();
    let kalg = HeckeAlg::for_subset(&rd, k, &f)?;
    let lv = &kalg.levi;
    let j2 = k.minus(j);
    let one_c = f.add(1, kalg.c);
    let mut gens = Vec::new();
    for (gi, g) in lv.gens.iter().enumerate() {
        let in_j2 = match lv.gen_root[gi] {
            Some(i) => j2.contains(i),
            None => lv.components[gi].is_subset(j2),
        };
        gens.push(if in_j2 { Mat::scalar(&f, v.dim, one_c) } else { v.rho(g) });
    }
    let mut omega = Vec::new();
    for u in &lv.omega {
        // split off the finite part lying in W_{0,J2}
        let word = &rd.weyl.words[u.w as usize];
        let w2: Vec<usize> = word.iter().copied().filter(|&i| j2.contains(i)).collect();
        let mut wj2 = AffElt::identity();
        for &i in &w2 {
            wj2 = rd.mul(&wj2, &rd.finite(rd.weyl.simple_refl[i]));
        }
        let m = rd.mul(u, &rd.inv(&wj2));
        if !rd.in_levi(&m, j) {
            return Err(Error::Relations("length-zero generator does not split".into()));
        }
        omega.push(v.rho_tstar(&m));
    }
    let e = HModule::checked(&kalg, gens, omega)?;
    // restriction back to H(M_J) through T* must give V
    let jalg = &v.alg;
    for g in jalg.levi.gens.iter().chain(&jalg.levi.omega) {
        if e.rho_tstar(g) != v.rho_tstar(g) {
            return Err(Error::Relations("extension does not restrict to V".into()));
        }
    }
    Ok(e)
}

/// Sum of the images of all homomorphisms `a → b`.
fn image_of_homs(a: &HModule, b: &HModule) -> Result<Echelon> {
    let mut e = Echelon::new(b.field(), b.dim);
    for x in hom_space(a, b)? {
        for r in x.row_vecs() {
            e.insert(&r);
        }
    }
    Ok(e)
}

fn cokernel_of_larger<F>(ext: F, q: Subset, k: Subset) -> Result<HModule>
where
    F: Fn(Subset) -> Result<HModule>,
{
    let ind_q = induce_to(&ext(q)?, k)?.carrier;
    let mut img = Echelon::new(ind_q.field(), ind_q.dim);
    for q1 in k.subsets() {
        if !q.is_subset(q1) || q1 == q {
            continue;
        }
        let ind_q1 = induce_to(&ext(q1)?, k)?.carrier;
        img = img.sum(&image_of_homs(&ind_q1, &ind_q)?);
    }
    if img.dim() == ind_q.dim {
        return Err(Error::CrossCheck("Steinberg cokernel vanishes".into()));
    }
    let (st, _) = ind_q.quotient(&img);
    Ok(st)
}

/// Generalized Steinberg module by the cokernel construction, inside `H(M_K)`.
pub fn steinberg_cokernel(v: &HModule, q: Subset, k: Subset) -> Result<HModule> {
    cokernel_of_larger(|q1| extend_e(v, q1), q, k)
}

/// `St_Q^{H(M_K)}` of the trivial characters.
pub fn steinberg_trivial(rd: &Arc<RootDatum>, f: &Arc<crate::ffield::Field>, q: Subset, k: Subset) -> Result<HModule> {
    cokernel_of_larger(|q1| Ok(HModule::trivial(&HeckeAlg::for_subset(rd, q1, f)?)), q, k)
}

/// `e(V) ⊗ St_Q(1)` with the diagonal `T*`-action.
pub fn steinberg_tensor(v: &HModule, q: Subset, k: Subset) -> Result<HModule> {
    let rd = v.rd().clone();
    let f = v.field().clone();
    let e = extend_e(v, k)?;
    let st1 = steinberg_trivial(&rd, &f, q, k)?;
    let c = e.alg.c;
    let nc = f.neg(c);
    let mut gens = Vec::new();
    for (a, b) in e.gens.iter().zip(&st1.gens) {
        gens.push(a.add_scalar(nc).kron(&b.add_scalar(nc)).add_scalar(c));
    }
    let omega = e.omega.iter().zip(&st1.omega).map(|(a, b)| a.kron(b)).collect();
    HModule::checked(&e.alg, gens, omega)
}

/// `St_Q^{H(M_K)}(V)`, built both ways and cross-checked.
pub fn steinberg(v: &HModule, q: Subset, k: Subset) -> Result<HModule> {
    let a = steinberg_cokernel(v, q, k)?;
    let b = steinberg_tensor(v, q, k)?;
    if !is_isomorphic(&a, &b)? {
        return Err(Error::CrossCheck(format!("Steinberg constructions disagree for Q = {}", v.rd().format_subset(q))));
    }
    Ok(a)
}

/// A triple `(P, V, Q)` with its derived modules.
#[derive(Clone, Debug)]
pub struct Triple {
    pub p: Subset,
    pub v: HModule,
    pub q: Subset,
    pub delta_v: Subset,
    pub p_v: Subset,
    pub e_v: HModule,
    pub st: HModule,
    pub i: HModule,
}

pub fn triple_module(p: Subset, v: &HModule, q: Subset) -> Result<Triple> {
    let rd = v.rd().clone();
    if v.alg.j() != p {
        return Err(Error::InvalidTriple(format!("V lives over {}", rd.format_subset(v.alg.j()))));
    }
    let dv = delta_v(v);
    let pv = p.union(dv);
    if !p.is_subset(q) || !q.is_subset(pv) {
        return Err(Error::InvalidTriple(format!(
            "need {} ⊆ {} ⊆ {}",
            rd.format_subset(p),
            rd.format_subset(q),
            rd.format_subset(pv)
        )));
    }
    let e_v = extend_e(v, pv)?;
    let st = steinberg(v, q, pv)?;
    let i = induce(&st)?.carrier;
    Ok(Triple { p, v: v.clone(), q, delta_v: dv, p_v: pv, e_v, st, i })
}

/// Recovers `e(V)` from `I(P, V, Q)` and `P(V)`.
pub fn recover_e(t: &Triple) -> Result<HModule> {
    let rd = t.v.rd().clone();
    let f = t.v.field().clone();
    let k = t.p_v;
    let li = adjoint_l(&t.i, k)?.ok_or_else(|| Error::Verification("L(I) vanishes".into()))?;
    let st1 = steinberg_trivial(&rd, &f, t.q, k)?;
    let lv = &li.alg.levi;
    let j2 = t.delta_v;
    let is_j2 = |gi: usize| match lv.gen_root[gi] {
        Some(i) => j2.contains(i),
        None => lv.components[gi].is_subset(j2),
    };
    // intertwiners for the reflections of the J2 part
    let (ds, dl) = (st1.dim, li.dim);
    let n2 = ds * dl;
    let j2gens: Vec<usize> = (0..lv.n_gens()).filter(|&g| is_j2(g)).collect();
    let mut sys = Mat::zeros(&f, n2, (n2 * j2gens.len()).max(1));
    for idx in 0..n2 {
        let mut x = Mat::zeros(&f, ds, dl);
        x.data[idx] = 1;
        for (t2, &g) in j2gens.iter().enumerate() {
            let c = st1.gens[g].mul(&x).sub(&x.mul(&li.gens[g]));
            for (s, &val) in c.data.iter().enumerate() {
                sys.set(idx, t2 * n2 + s, val);
            }
        }
    }
    let basis: Vec<Vec<Fe>> = sys.left_kernel();
    if basis.is_empty() {
        return Err(Error::Verification("no intertwiners from the Steinberg factor".into()));
    }
    let span = Echelon::from_rows(&f, n2, &basis);
    let to_b = Mat::from_rows(&f, &basis.iter().map(|b| span.coords(b).unwrap()).collect::<Vec<_>>(), basis.len())
        .inverse()
        .expect("basis");
    let nc = f.neg(li.alg.c);
    let act = |bg: &Mat, ag: &Mat| -> Result<Mat> {
        let binv = bg.inverse().ok_or_else(|| Error::Verification("Steinberg factor not invertible".into()))?;
        let rows: Result<Vec<Vec<Fe>>> = basis
            .iter()
            .map(|b| {
                let x = Mat { rows: ds, cols: dl, data: b.clone(), f: f.clone() };
                let y = binv.mul(&x).mul(ag);
                let c = span.coords(&y.data).ok_or_else(|| Error::Verification("action leaves the intertwiner space".into()))?;
                Ok(vec_mat(&c, &to_b))
            })
            .collect();
        Ok(Mat::from_rows(&f, &rows?, basis.len()))
    };
    let mut gens = Vec::new();
    for g in 0..lv.n_gens() {
        if is_j2(g) {
            gens.push(Mat::scalar(&f, basis.len(), f.add(1, li.alg.c)));
        } else {
            let ts = act(&st1.gens[g].add_scalar(nc), &li.gens[g].add_scalar(nc))?;
            gens.push(ts.add_scalar(li.alg.c));
        }
    }
    let mut omega = Vec::new();
    for (u, w) in st1.omega.iter().zip(&li.omega) {
        omega.push(act(u, w)?);
    }
    HModule::checked(&li.alg, gens, omega)
}

/// `V` viewed over the opposite Levi through conjugation by `w_K w_J`.
pub fn twist_module(v: &HModule, k: Subset) -> Result<HModule> {
    let rd = v.rd().clone();
    let j = v.alg.j();
    let jop = rd.opposition_in(k, j);
    let target = HeckeAlg::for_subset(&rd, jop, v.field())?;
    let c = twist_element(&rd, k, j);
    let cinv = rd.inv(&c);
    let src = v.alg.clone();
    let m = v.pullback(&target, |h| h.conjugate(&src, &cinv))?;
    let fails = m.check_relations();
    if fails.is_empty() {
        Ok(m)
    } else {
        Err(Error::Relations(fails.join("; ")))
    }
}

/// `V^{ι}` for `ι = ι^M_{ℓ−ℓ_M}` with lengths taken in the Levi `K`.
pub fn iota_module(v: &HModule, k: Subset) -> Result<HModule> {
    let rd = v.rd().clone();
    let amb = crate::affweyl::Levi::new(&rd, k)?;
    let m = v.pullback(&v.alg.clone(), |h| Ok(h.iota(&amb)))?;
    let fails = m.check_relations();
    if fails.is_empty() {
        Ok(m)
    } else {
        Err(Error::Relations(fails.join("; ")))
    }
}

/// One checked isomorphism among the eight inductions.
#[derive(Clone, Debug)]
pub struct EquationCheck {
    pub tag: &'static str,
    pub eps: Sign,
    pub eta: Basis,
    pub holds: bool,
    pub intertwiner: Option<Mat>,
}

#[derive(Clone, Debug)]
pub struct EightReport {
    pub variants: Vec<(Variant, HModule)>,
    /// isomorphism pattern among the eight variants
    pub pattern: Vec<Vec<bool>>,
    pub checks: Vec<EquationCheck>,
}

impl EightReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

pub fn eight_inductions(v: &HModule, k: Subset) -> Result<EightReport> {
    let rd = v.rd().clone();
    let f = v.field().clone();
    let kalg = HeckeAlg::for_subset(&rd, k, &f)?;
    let ind = |m: &HModule, var: Variant| -> Result<HModule> { Ok(induce_variant(&kalg, m, var)?.carrier) };
    let mut variants = Vec::new();
    for var in Variant::all() {
        variants.push((var, ind(v, var)?));
    }
    let get = |var: Variant| variants.iter().find(|(x, _)| *x == var).map(|(_, m)| m.clone()).unwrap();
    let n = variants.len();
    let mut pattern = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            pattern[a][b] = a == b || is_isomorphic(&variants[a].1, &variants[b].1)?;
        }
    }
    let tw = twist_module(v, k)?;
    let vi = iota_module(v, k)?;
    let vd = v.dual();
    let g_iota = |x: &HModule| iota_module(x, k);
    let mut checks = Vec::new();
    let mut check = |tag: &'static str, eps: Sign, eta: Basis, a: HModule, b: HModule| -> Result<()> {
        let iso = find_isomorphism(&a, &b)?;
        checks.push(EquationCheck { tag, eps, eta, holds: iso.is_some(), intertwiner: iso });
        Ok(())
    };
    for eps in [Sign::Plus, Sign::Minus] {
        for eta in [Basis::T, Basis::TStar] {
            let ts = |s: Sign, e: Basis| Variant { side: Side::Tensor, eps: s, eta: e };
            let hm = |s: Sign, e: Basis| Variant { side: Side::Hom, eps: s, eta: e };
            check("twist2'", eps, eta, get(ts(eps, eta)), ind(&tw, ts(eps.flip(), eta))?)?;
            check("twist3'", eps, eta, get(hm(eps, eta)), ind(&tw, hm(eps.flip(), eta))?)?;
            check("inv1", eps, eta, g_iota(&get(ts(eps, eta)))?, ind(&vi, ts(eps, other_basis(eta)))?)?;
            check("inv2e", eps, eta, g_iota(&get(hm(eps, eta)))?, ind(&vi, hm(eps, other_basis(eta)))?)?;
            check("inv3e", eps, eta, g_iota(&get(ts(eps, eta)))?, ind(&vi, hm(eps, eta))?)?;
            check("nothing", eps, eta, get(ts(eps, eta)), get(hm(eps, other_basis(eta))))?;
            check("dual1", eps, eta, get(ts(eps, eta)).dual(), ind(&vd, hm(eps.flip(), eta))?)?;
            check("dual2", eps, eta, ind(&vd, ts(eps, eta))?, get(hm(eps.flip(), eta)).dual())?;
        }
    }
    Ok(EightReport { variants, pattern, checks })
}

/// Labels of the composition factors of `Ind_P(V)` as subsets of `P(V) \ P`.
pub fn factor_label(t: &Triple) -> BTreeSet<usize> {
    t.q.minus(t.p).iter().collect()
}
