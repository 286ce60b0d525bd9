//! Pro-p Iwahori–Hecke algebras in characteristic `p` with trivial `Z_k`, as rewriting systems
//! on finitely supported functions on the extended affine Weyl group.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::affweyl::{AffElt, Levi};
use crate::ffield::{Fe, Field};
use crate::matrix::{Echelon, Mat};
use crate::rootdata::{RootDatum, Subset};
use crate::{Error, Result};

pub type Coeffs = BTreeMap<AffElt, Fe>;

/// The Hecke algebra `H(M_J)` over a finite field.
#[derive(Debug)]
pub struct HeckeAlg {
    pub levi: Arc<Levi>,
    pub f: Arc<Field>,
    /// the quadratic coefficient `c_s`
    pub c: Fe,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Basis {
    T,
    TStar,
}

impl HeckeAlg {
    pub fn new(levi: &Arc<Levi>, f: &Arc<Field>) -> Arc<HeckeAlg> {
        let c = f.from_int(levi.rd.c_s);
        Arc::new(HeckeAlg { levi: levi.clone(), f: f.clone(), c })
    }

    pub fn for_subset(rd: &Arc<RootDatum>, j: Subset, f: &Arc<Field>) -> Result<Arc<HeckeAlg>> {
        Ok(HeckeAlg::new(&Arc::new(Levi::new(rd, j)?), f))
    }

    pub fn rd(&self) -> &Arc<RootDatum> {
        &self.levi.rd
    }

    pub fn j(&self) -> Subset {
        self.levi.j
    }

    pub fn same(&self, o: &HeckeAlg) -> bool {
        self.levi.j == o.levi.j && Arc::ptr_eq(&self.levi.rd, &o.levi.rd) && *self.f == *o.f
    }

    /// The constant `d` with `X(s)² = d X(s)` in the basis `X`.
    fn quad(&self, b: Basis) -> Fe {
        match b {
            Basis::T => self.c,
            Basis::TStar => self.f.neg(self.c),
        }
    }

    /// Right multiplication by `X(s)` on coordinates in the basis `X`.
    fn mul_gen(&self, a: &Coeffs, s: usize, b: Basis) -> Coeffs {
        let d = self.quad(b);
        let f = &self.f;
        let g = &self.levi.gens[s];
        let mut out = Coeffs::new();
        for (x, &v) in a {
            let xs = self.rd().mul(x, g);
            let (key, val) = if self.levi.length(&xs) > self.levi.length(x) { (xs, v) } else { (*x, f.mul(v, d)) };
            add_to(f, &mut out, key, val);
        }
        out
    }

    fn mul_omega(&self, a: &Coeffs, u: &AffElt) -> Coeffs {
        a.iter().map(|(x, &v)| (self.rd().mul(x, u), v)).collect()
    }

    /// Right multiplication by `X(y)` on coordinates in the basis `X`.
    fn mul_basis_elt(&self, a: &Coeffs, y: &AffElt, b: Basis) -> Coeffs {
        let rw = self.levi.reduced_word(y);
        let mut acc = a.clone();
        for &s in &rw.word {
            acc = self.mul_gen(&acc, s, b);
        }
        self.mul_omega(&acc, &self.levi.omega_elt(&rw.omega))
    }

    pub fn mul_coords(&self, a: &Coeffs, c: &Coeffs, b: Basis) -> Coeffs {
        let f = &self.f;
        let mut out = Coeffs::new();
        for (y, &v) in c {
            for (k, w) in self.mul_basis_elt(a, y, b) {
                add_to(f, &mut out, k, f.mul(w, v));
            }
        }
        out
    }

    /// Expansion of `X(x)` in the other basis `Y`, where `X(s) = Y(s) + shift`.
    fn expand(&self, x: &AffElt, to: Basis) -> Coeffs {
        let shift = match to {
            Basis::T => self.f.neg(self.c),
            Basis::TStar => self.c,
        };
        let rw = self.levi.reduced_word(x);
        let mut acc = Coeffs::from([(AffElt::identity(), 1)]);
        for &s in &rw.word {
            let mut next = self.mul_gen(&acc, s, to);
            for (k, &v) in &acc {
                add_to(&self.f, &mut next, *k, self.f.mul(v, shift));
            }
            acc = next;
        }
        self.mul_omega(&acc, &self.levi.omega_elt(&rw.omega))
    }

    fn convert(&self, a: &Coeffs, to: Basis) -> Coeffs {
        let mut out = Coeffs::new();
        for (x, &v) in a {
            for (k, w) in self.expand(x, to) {
                add_to(&self.f, &mut out, k, self.f.mul(w, v));
            }
        }
        out
    }

    pub fn zero(self: &Arc<Self>) -> HeckeElt {
        HeckeElt { alg: self.clone(), terms: Coeffs::new() }
    }

    pub fn one(self: &Arc<Self>) -> HeckeElt {
        self.t(&AffElt::identity())
    }

    pub fn t(self: &Arc<Self>, x: &AffElt) -> HeckeElt {
        HeckeElt { alg: self.clone(), terms: Coeffs::from([(*x, 1)]) }
    }

    pub fn tstar(self: &Arc<Self>, x: &AffElt) -> HeckeElt {
        HeckeElt { alg: self.clone(), terms: self.expand(x, Basis::T) }
    }

    pub fn from_coords(self: &Arc<Self>, a: &Coeffs, b: Basis) -> HeckeElt {
        let terms = match b {
            Basis::T => a.iter().filter(|(_, &v)| v != 0).map(|(k, &v)| (*k, v)).collect(),
            Basis::TStar => self.convert(a, Basis::T),
        };
        HeckeElt { alg: self.clone(), terms }
    }

    /// `T(γ)` for each algebra generator: affine simple reflections, then length-zero generators.
    pub fn generators(self: &Arc<Self>) -> Vec<HeckeElt> {
        self.levi.gens.iter().chain(&self.levi.omega).map(|x| self.t(x)).collect()
    }

    /// Generators together with the inverses of the length-zero generators.
    pub fn generators_with_inverses(self: &Arc<Self>) -> Vec<HeckeElt> {
        let mut g = self.generators();
        for u in &self.levi.omega {
            g.push(self.t(&self.rd().inv(u)));
        }
        g
    }
}

fn add_to(f: &Field, m: &mut Coeffs, k: AffElt, v: Fe) {
    if v == 0 {
        return;
    }
    let e = m.entry(k).or_insert(0);
    *e = f.add(*e, v);
    if *e == 0 {
        m.remove(&k);
    }
}

/// A finitely supported element of `H(M_J)`, stored in the `T`-basis.
#[derive(Clone)]
pub struct HeckeElt {
    pub alg: Arc<HeckeAlg>,
    pub terms: Coeffs,
}

impl PartialEq for HeckeElt {
    fn eq(&self, o: &HeckeElt) -> bool {
        self.alg.same(&o.alg) && self.terms == o.terms
    }
}

impl fmt::Debug for HeckeElt {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(fm, "{}", self.format())
    }
}

impl HeckeElt {
    fn check(&self, o: &HeckeElt) -> Result<()> {
        if self.alg.same(&o.alg) {
            Ok(())
        } else {
            Err(Error::Context(format!(
                "H(M_{}) vs H(M_{})",
                self.alg.rd().format_subset(self.alg.j()),
                o.alg.rd().format_subset(o.alg.j())
            )))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, x: &AffElt) -> Fe {
        self.terms.get(x).copied().unwrap_or(0)
    }

    pub fn add(&self, o: &HeckeElt) -> Result<HeckeElt> {
        self.check(o)?;
        let mut terms = self.terms.clone();
        for (k, &v) in &o.terms {
            add_to(&self.alg.f, &mut terms, *k, v);
        }
        Ok(HeckeElt { alg: self.alg.clone(), terms })
    }

    pub fn sub(&self, o: &HeckeElt) -> Result<HeckeElt> {
        self.add(&o.scale(self.alg.f.neg(1)))
    }

    pub fn scale(&self, c: Fe) -> HeckeElt {
        let f = &self.alg.f;
        let terms = if c == 0 { Coeffs::new() } else { self.terms.iter().map(|(k, &v)| (*k, f.mul(v, c))).collect() };
        HeckeElt { alg: self.alg.clone(), terms }
    }

    pub fn mul(&self, o: &HeckeElt) -> Result<HeckeElt> {
        self.check(o)?;
        Ok(HeckeElt { alg: self.alg.clone(), terms: self.alg.mul_coords(&self.terms, &o.terms, Basis::T) })
    }

    /// Coordinates in the given basis.
    pub fn coords(&self, b: Basis) -> Coeffs {
        match b {
            Basis::T => self.terms.clone(),
            Basis::TStar => self.alg.convert(&self.terms, Basis::TStar),
        }
    }

    /// Terms in canonical order: by length, then reduced word.
    pub fn sorted_terms(&self) -> Vec<(AffElt, Fe)> {
        let lv = &self.alg.levi;
        let mut v: Vec<(AffElt, Fe)> = self.terms.iter().map(|(k, &c)| (*k, c)).collect();
        v.sort_by_key(|(x, _)| {
            let rw = lv.reduced_word(x);
            (rw.word.len(), rw.word, rw.omega)
        });
        v
    }

    pub fn format(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let lv = &self.alg.levi;
        let parts: Vec<String> = self
            .sorted_terms()
            .into_iter()
            .map(|(x, c)| {
                let rw = lv.reduced_word(&x);
                let mut w: Vec<String> = rw.word.iter().map(|&i| lv.gen_names[i].clone()).collect();
                for (i, &e) in rw.omega.iter().enumerate() {
                    if e != 0 {
                        w.push(format!("{}^{}", lv.omega_names[i], e));
                    }
                }
                format!("{}*T({})", self.alg.f.format(c), w.join(" "))
            })
            .collect();
        parts.join(" + ")
    }

    /// `ι^M`: `T(w) ↦ (−1)^{ℓ_M(w)} T*(w)`.
    pub fn iota_m(&self) -> HeckeElt {
        let f = &self.alg.f;
        let lv = &self.alg.levi;
        let a: Coeffs = self.terms.iter().map(|(x, &v)| (*x, if lv.length(x) % 2 == 1 { f.neg(v) } else { v })).collect();
        self.alg.from_coords(&a, Basis::TStar)
    }

    /// `ι_{ℓ−ℓ_M}`: `T(w) ↦ (−1)^{ℓ(w)−ℓ_M(w)} T(w)`, lengths `ℓ` taken in `ambient`.
    pub fn iota_sign(&self, ambient: &Levi) -> HeckeElt {
        let f = &self.alg.f;
        let lv = &self.alg.levi;
        let terms = self
            .terms
            .iter()
            .map(|(x, &v)| (*x, if (ambient.length(x) + lv.length(x)) % 2 == 1 { f.neg(v) } else { v }))
            .collect();
        HeckeElt { alg: self.alg.clone(), terms }
    }

    /// `ι^M_{ℓ−ℓ_M}`: `T(w) ↦ (−1)^{ℓ(w)} T*(w)`.
    pub fn iota(&self, ambient: &Levi) -> HeckeElt {
        self.iota_m().iota_sign(ambient)
    }

    /// `ζ`: `T(w) ↦ T(w⁻¹)`.
    pub fn zeta(&self) -> HeckeElt {
        let rd = self.alg.rd();
        HeckeElt { alg: self.alg.clone(), terms: self.terms.iter().map(|(x, &v)| (rd.inv(x), v)).collect() }
    }

    fn relabel(&self, target: &Arc<HeckeAlg>, g: impl Fn(&AffElt) -> AffElt, b: Basis) -> Result<HeckeElt> {
        if !Arc::ptr_eq(self.alg.rd(), target.rd()) || *self.alg.f != *target.f {
            return Err(Error::Context("different root datum or field".into()));
        }
        let src = self.coords(b);
        let mut out = Coeffs::new();
        for (x, &v) in &src {
            let y = g(x);
            if !target.levi.contains(&y) {
                return Err(Error::NotInLevi(target.rd().format_elt(&y)));
            }
            out.insert(y, v);
        }
        Ok(target.from_coords(&out, b))
    }

    /// `θ`: `T^M(m) ↦ T(m)` into a larger Levi.
    pub fn theta(&self, target: &Arc<HeckeAlg>) -> Result<HeckeElt> {
        self.relabel(target, |x| *x, Basis::T)
    }

    /// `θ*`: `T^{M,*}(m) ↦ T*(m)` into a larger Levi.
    pub fn theta_star(&self, target: &Arc<HeckeAlg>) -> Result<HeckeElt> {
        self.relabel(target, |x| *x, Basis::TStar)
    }

    /// `T(w) ↦ T(c w c⁻¹)` into the Levi of the conjugate subset.
    pub fn conjugate(&self, target: &Arc<HeckeAlg>, c: &AffElt) -> Result<HeckeElt> {
        let rd = self.alg.rd().clone();
        let ci = rd.inv(c);
        self.relabel(target, |x| rd.mul(&rd.mul(c, x), &ci), Basis::T)
    }

    /// Twist by `w_K w_J` from `H(M_J)` to `H(M_{J^op})`, where `K` is the Levi of `ambient`.
    pub fn twist(&self, ambient: Subset, target: &Arc<HeckeAlg>) -> Result<HeckeElt> {
        let rd = self.alg.rd();
        let c = twist_element(rd, ambient, self.alg.j());
        if rd.opposition_in(ambient, self.alg.j()) != target.j() {
            return Err(Error::Context("twist target is not the opposite Levi".into()));
        }
        self.conjugate(target, &c)
    }

    pub fn commutes_with(&self, o: &HeckeElt) -> Result<bool> {
        Ok(self.mul(o)? == o.mul(self)?)
    }
}

/// `w_K w_J`.
pub fn twist_element(rd: &RootDatum, k: Subset, j: Subset) -> AffElt {
    rd.mul(&rd.longest_element(k), &rd.longest_element(j))
}

/// The Bernstein-type element attached to a translation `t_μ` of `W_K`.
pub fn bernstein(alg: &Arc<HeckeAlg>, mu: &[i64]) -> HeckeElt {
    let lv = &alg.levi;
    let rd = alg.rd();
    let t = rd.translation(mu);
    let rw = lv.reduced_word(&t);
    let mut acc = alg.one();
    let mut prefix = AffElt::identity();
    for &g in &rw.word {
        let w = prefix.w as usize;
        let positive = match lv.gen_root[g] {
            Some(i) => !rd.roots[rd.weyl.root_perm[w][i]].positive,
            None => {
                let th = rd.highest_root(lv.components[g]);
                rd.roots[rd.weyl.root_perm[w][th]].positive
            }
        };
        let s = lv.gens[g];
        let gen = if positive { alg.t(&s) } else { alg.tstar(&s) };
        acc = acc.mul(&gen).expect("same algebra");
        prefix = rd.mul(&prefix, &s);
    }
    acc.mul(&alg.t(&lv.omega_elt(&rw.omega))).expect("same algebra")
}

/// A central element of `H(M_K)` attached to the proper Levi `J ⊊ K`.
#[derive(Clone, Debug)]
pub struct CentralElement {
    pub k: Subset,
    pub j: Subset,
    pub seed: Vec<i64>,
    pub elt: HeckeElt,
    pub verified: bool,
}

fn seed_ok(rd: &RootDatum, k: Subset, j: Subset, seed: &[i64]) -> bool {
    k.iter().all(|i| {
        let c = rd.pair(seed, i);
        if j.contains(i) {
            c == 0
        } else {
            c > 0
        }
    })
}

/// A seed in the coroot lattice of `K`, orthogonal to `J` and positive on the other simple roots of `K`.
pub fn default_seed(rd: &RootDatum, k: Subset, j: Subset) -> Result<Vec<i64>> {
    if k == rd.delta() {
        if let Some(s) = rd.central_seeds.get(&j) {
            if !seed_ok(rd, k, j, s) {
                return Err(Error::Preset(format!("central seed for {} is not dominant", rd.format_subset(j))));
            }
            return Ok(s.clone());
        }
    }
    let idx: Vec<usize> = k.iter().collect();
    let n = idx.len();
    let mut best: Option<(i64, Vec<i64>)> = None;
    let mut c = vec![-3i64; n];
    loop {
        let mut lam = vec![0; rd.rank];
        for (t, &i) in idx.iter().enumerate() {
            for (l, v) in lam.iter_mut().zip(&rd.roots[i].covec) {
                *l += c[t] * v;
            }
        }
        let norm: i64 = c.iter().map(|x| x.abs()).sum();
        if norm > 0 && seed_ok(rd, k, j, &lam) && best.as_ref().map_or(true, |(b, _)| norm < *b) {
            best = Some((norm, lam));
        }
        let mut t = 0;
        while t < n && c[t] == 3 {
            c[t] = -3;
            t += 1;
        }
        if t == n {
            break;
        }
        c[t] += 1;
    }
    best.map(|(_, l)| l).ok_or_else(|| Error::NoCentral(format!("no seed for {} in {}", rd.format_subset(j), rd.format_subset(k))))
}

/// Builds the orbit-sum central element for the seed, certifies commutation with every
/// generator, and checks it against the solution space of the commutation equations on the
/// window of elements of length at most `bound`.
pub fn find_central(alg: &Arc<HeckeAlg>, j: Subset, seed: &[i64], bound: Option<usize>) -> Result<CentralElement> {
    let rd = alg.rd().clone();
    let lv = &alg.levi;
    let k = lv.j;
    if !j.is_subset(k) || j == k {
        return Err(Error::NoCentral(format!("{} is not a proper Levi of {}", rd.format_subset(j), rd.format_subset(k))));
    }
    let zero_seed = seed.iter().all(|&x| x == 0);
    if !zero_seed && !seed_ok(&rd, k, j, seed) {
        return Err(Error::NoCentral(format!("seed {seed:?} is not strictly dominant for {}", rd.format_subset(j))));
    }
    let t = rd.translation(seed);
    let lt = lv.length(&t);
    let bound = bound.unwrap_or(lt);
    if bound < lt {
        return Err(Error::NoCentral(format!("support bound {bound} below length {lt}")));
    }
    let elt = if zero_seed {
        alg.one()
    } else {
        let mut orbit: Vec<Vec<i64>> = lv.finite.iter().map(|&w| rd.weyl.act(w, seed)).collect();
        orbit.sort();
        orbit.dedup();
        let mut z = alg.zero();
        for mu in &orbit {
            z = z.add(&bernstein(alg, mu))?;
        }
        z
    };
    for g in alg.generators() {
        if !elt.commutes_with(&g)? {
            return Err(Error::NoCentral(format!("orbit sum fails to commute with {}", g.format())));
        }
    }
    // linear solve on the window
    let omega_part = lv.omega_elt(&lv.omega_coords(&t));
    let window: Vec<AffElt> = lv.affine_ball(bound).iter().map(|x| rd.mul(x, &omega_part)).collect();
    if elt.terms.keys().any(|x| !window.contains(x)) {
        return Err(Error::NoCentral("support leaves the search window".into()));
    }
    let gens = alg.generators();
    let mut cols: HashMap<(usize, AffElt), usize> = HashMap::new();
    let mut rows: Vec<Vec<(usize, Fe)>> = Vec::new();
    for x in &window {
        let tx = alg.t(x);
        let mut row = Vec::new();
        for (gi, g) in gens.iter().enumerate() {
            let c = tx.mul(g)?.sub(&g.mul(&tx)?)?;
            for (y, v) in c.terms {
                let n = cols.len();
                let col = *cols.entry((gi, y)).or_insert(n);
                row.push((col, v));
            }
        }
        rows.push(row);
    }
    let mut m = Mat::zeros(&alg.f, window.len(), cols.len().max(1));
    for (r, row) in rows.iter().enumerate() {
        for &(c, v) in row {
            m.set(r, c, v);
        }
    }
    let sol = Echelon::from_rows(&alg.f, window.len(), &m.left_kernel());
    let zvec: Vec<Fe> = window.iter().map(|x| elt.coeff(x)).collect();
    if !sol.contains(&zvec) || elt.is_zero() {
        return Err(Error::NoCentral("orbit sum outside the commutation solution space".into()));
    }
    Ok(CentralElement { k, j, seed: seed.to_vec(), elt, verified: true })
}

type CentralKey = (String, u32, u32, Subset, Subset);

fn central_cache() -> &'static Mutex<HashMap<CentralKey, Vec<(AffElt, Fe)>>> {
    static C: OnceLock<Mutex<HashMap<CentralKey, Vec<(AffElt, Fe)>>>> = OnceLock::new();
    C.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Verified central elements of `H(M_K)` for every proper Levi of `K`, with default seeds.
pub fn centrals_for(alg: &Arc<HeckeAlg>) -> Result<Vec<CentralElement>> {
    let rd = alg.rd();
    let k = alg.j();
    let mut out = Vec::new();
    for j in k.subsets() {
        if j == k {
            continue;
        }
        let seed = default_seed(rd, k, j)?;
        let key = (rd.name.clone(), alg.f.p(), alg.f.k(), k, j);
        let cached = central_cache().lock().unwrap().get(&key).cloned();
        let ce = match cached {
            Some(terms) => CentralElement { k, j, seed, elt: HeckeElt { alg: alg.clone(), terms: terms.into_iter().collect() }, verified: true },
            None => {
                let ce = find_central(alg, j, &seed, None)?;
                central_cache().lock().unwrap().insert(key, ce.elt.terms.iter().map(|(a, &b)| (*a, b)).collect());
                ce
            }
        };
        out.push(ce);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ffield::field;
    use crate::rootdata::load_preset;

    fn alg(name: &str, j: Subset, k: u32) -> Arc<HeckeAlg> {
        let rd = load_preset(name).unwrap();
        HeckeAlg::for_subset(&rd, j, &field(2, k).unwrap()).unwrap()
    }

    #[test]
    fn quadratic_and_tstar() {
        let h = alg("SL2_Q2", Subset(1), 1);
        let s = h.levi.gens[1];
        let ts = h.t(&s);
        assert_eq!(ts.mul(&ts).unwrap(), ts.scale(h.f.neg(1)));
        assert_eq!(h.tstar(&s), ts.add(&h.one()).unwrap());
        assert!(h.tstar(&s).mul(&ts).unwrap().is_zero());
        let s0 = h.levi.gens[0];
        let x = h.rd().mul(&s0, &s);
        let expect = h.t(&x).add(&h.t(&s0)).unwrap().add(&ts).unwrap().add(&h.one()).unwrap();
        assert_eq!(h.tstar(&x), expect);
    }

    #[test]
    fn basis_round_trip() {
        let h = alg("GL3_Q2", Subset(3), 2);
        for x in h.levi.affine_ball(3) {
            let e = h.t(&x).scale(2);
            assert_eq!(h.from_coords(&e.coords(Basis::TStar), Basis::TStar), e);
        }
    }

    #[test]
    fn iota_of_reflection() {
        let h = alg("SL2_Q2", Subset(1), 1);
        let s = h.levi.gens[1];
        let lv = h.levi.clone();
        let got = h.t(&s).iota(&lv);
        assert_eq!(got, h.tstar(&s).scale(h.f.neg(1)));
        assert_eq!(h.one().iota(&lv), h.one());
    }

    #[test]
    fn sl2_central_element() {
        let h = alg("SL2_Q2", Subset(1), 1);
        let ce = find_central(&h, Subset::empty(), &[1], None).unwrap();
        assert!(ce.verified);
        let (s0, s) = (h.levi.gens[0], h.levi.gens[1]);
        let rd = h.rd();
        let expect = [rd.mul(&s0, &s), rd.mul(&s, &s0), s, s0, AffElt::identity()];
        assert_eq!(ce.elt.terms.len(), 5);
        for x in expect {
            assert_eq!(ce.elt.coeff(&x), 1);
        }
        assert!(find_central(&h, Subset::empty(), &[1], Some(0)).is_err());
        let unit = find_central(&h, Subset::empty(), &[0], None).unwrap();
        assert_eq!(unit.elt, h.one());
    }

    #[test]
    fn centrals_all_presets() {
        for name in ["SL2_Q2", "GL2_Q2", "GL3_Q2"] {
            let rd = load_preset(name).unwrap();
            let h = alg(name, rd.delta(), 1);
            let cs = centrals_for(&h).unwrap();
            assert_eq!(cs.len(), (1 << rd.n_simple()) - 1);
        }
    }

    #[test]
    fn twist_gl3() {
        let rd = load_preset("GL3_Q2").unwrap();
        let f = field(2, 1).unwrap();
        let ha = HeckeAlg::for_subset(&rd, Subset(1), &f).unwrap();
        let hb = HeckeAlg::for_subset(&rd, Subset(2), &f).unwrap();
        let sa = ha.t(&ha.levi.gens[1]);
        let img = sa.twist(rd.delta(), &hb).unwrap();
        assert_eq!(img, hb.t(&hb.levi.gens[1]));
        for x in ha.levi.cayley_ball(2, 1).keys() {
            let e = ha.t(x);
            assert_eq!(e.twist(rd.delta(), &hb).unwrap().twist(rd.delta(), &ha).unwrap(), e);
        }
    }
}
