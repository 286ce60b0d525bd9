//! Extended affine Weyl groups `Λ ⋊ W₀` of standard Levi subgroups.

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use crate::rootdata::{RootDatum, Subset};
use crate::{Error, Result};

/// Largest supported lattice rank.
pub const MAXR: usize = 4;

/// The element `t_lam · w` of `Λ ⋊ W₀`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct AffElt {
    pub lam: [i32; MAXR],
    pub w: u8,
}

impl AffElt {
    pub fn identity() -> AffElt {
        AffElt::default()
    }

    pub fn lam_vec(&self, rank: usize) -> Vec<i64> {
        self.lam[..rank].iter().map(|&x| x as i64).collect()
    }
}

impl RootDatum {
    pub fn translation(&self, lam: &[i64]) -> AffElt {
        let mut a = [0i32; MAXR];
        for (i, &x) in lam.iter().enumerate() {
            a[i] = x as i32;
        }
        AffElt { lam: a, w: 0 }
    }

    pub fn finite(&self, w: u8) -> AffElt {
        AffElt { lam: [0; MAXR], w }
    }

    pub fn act_lam(&self, w: u8, lam: &[i32; MAXR]) -> [i32; MAXR] {
        let r = self.rank;
        let m = &self.weyl.mats[w as usize];
        let mut out = [0i32; MAXR];
        for i in 0..r {
            out[i] = (0..r).map(|j| m[i * r + j] as i32 * lam[j]).sum();
        }
        out
    }

    pub fn mul(&self, a: &AffElt, b: &AffElt) -> AffElt {
        let wl = self.act_lam(a.w, &b.lam);
        let mut lam = [0i32; MAXR];
        for i in 0..MAXR {
            lam[i] = a.lam[i] + wl[i];
        }
        AffElt { lam, w: self.weyl.mul[a.w as usize][b.w as usize] }
    }

    pub fn inv(&self, a: &AffElt) -> AffElt {
        let wi = self.weyl.inv[a.w as usize];
        let l = self.act_lam(wi, &a.lam);
        let mut lam = [0i32; MAXR];
        for i in 0..MAXR {
            lam[i] = -l[i];
        }
        AffElt { lam, w: wi }
    }

    pub fn pow(&self, a: &AffElt, k: i64) -> AffElt {
        let base = if k < 0 { self.inv(a) } else { *a };
        let mut out = AffElt::identity();
        for _ in 0..k.unsigned_abs() {
            out = self.mul(&out, &base);
        }
        out
    }

    pub fn pair_aff(&self, lam: &[i32; MAXR], root: usize) -> i64 {
        self.roots[root].vec.iter().zip(lam).map(|(&a, &b)| a * b as i64).sum()
    }

    /// Length over the given positive roots.
    pub fn length_over(&self, x: &AffElt, pos: &[usize]) -> usize {
        let winv = self.weyl.inv[x.w as usize] as usize;
        let mut l = 0i64;
        for &r in pos {
            let c = self.pair_aff(&x.lam, r);
            if self.roots[self.weyl.root_perm[winv][r]].positive {
                l += c.abs();
            } else {
                l += (c - 1).abs();
            }
        }
        l as usize
    }

    /// Length in the extended affine Weyl group of `G`.
    pub fn length(&self, x: &AffElt) -> usize {
        self.length_over(x, &self.pos_roots(self.delta()))
    }

    fn find_finite(&self, mat: &[i64]) -> u8 {
        self.weyl.mats.iter().position(|m| m == mat).expect("reflection lies in W0") as u8
    }

    /// Reflection `λ ↦ λ − <λ, root> root^∨` as an element of `W₀`.
    pub fn reflection(&self, root: usize) -> u8 {
        let r = self.rank;
        let b = &self.roots[root];
        let mut m = vec![0; r * r];
        for col in 0..r {
            for row in 0..r {
                m[row * r + col] = if row == col { 1 } else { 0 } - b.vec[col] * b.covec[row];
            }
        }
        self.find_finite(&m)
    }

    /// Whether `x` lies in the extended affine Weyl group of the Levi `j`.
    pub fn in_levi(&self, x: &AffElt, j: Subset) -> bool {
        self.weyl.words[x.w as usize].iter().all(|&i| j.contains(i))
    }

    /// Minimal-length representatives of `W_{0,J} \ W_{0,K}`, ordered by length.
    pub fn min_coset_reps_in(&self, k: Subset, j: Subset) -> Vec<u8> {
        let mut reps: Vec<u8> = self
            .weyl_subgroup(k)
            .into_iter()
            .filter(|&d| {
                let dinv = self.weyl.inv[d as usize] as usize;
                j.iter().all(|s| self.roots[self.weyl.root_perm[dinv][s]].positive)
            })
            .collect();
        reps.sort_by_key(|&d| (self.finite_length(d, k), d));
        reps
    }

    pub fn min_coset_reps(&self, j: Subset) -> Vec<u8> {
        self.min_coset_reps_in(self.delta(), j)
    }

    pub fn longest_element(&self, j: Subset) -> AffElt {
        self.finite(self.longest(j))
    }

    /// Whether `<λ, α> ≥ 0` for every positive root of `K` outside `J`.
    pub fn is_positive_in(&self, x: &AffElt, k: Subset, j: Subset) -> Result<bool> {
        if !self.in_levi(x, j) {
            return Err(Error::NotInLevi(format!("{x:?} in {}", self.format_subset(j))));
        }
        Ok(self.pos_roots(k).into_iter().filter(|&r| !self.root_in(r, j)).all(|r| self.pair_aff(&x.lam, r) >= 0))
    }

    pub fn is_negative_in(&self, x: &AffElt, k: Subset, j: Subset) -> Result<bool> {
        if !self.in_levi(x, j) {
            return Err(Error::NotInLevi(format!("{x:?} in {}", self.format_subset(j))));
        }
        Ok(self.pos_roots(k).into_iter().filter(|&r| !self.root_in(r, j)).all(|r| self.pair_aff(&x.lam, r) <= 0))
    }

    pub fn is_m_positive(&self, x: &AffElt, j: Subset) -> Result<bool> {
        self.is_positive_in(x, self.delta(), j)
    }

    pub fn is_m_negative(&self, x: &AffElt, j: Subset) -> Result<bool> {
        self.is_negative_in(x, self.delta(), j)
    }

    pub fn format_elt(&self, x: &AffElt) -> String {
        let lam: Vec<String> = x.lam[..self.rank].iter().map(|v| v.to_string()).collect();
        let word: Vec<&str> = self.weyl.words[x.w as usize].iter().map(|&i| self.labels[i].as_str()).collect();
        format!("({};{})", lam.join(","), word.join(","))
    }
}

/// Reduced expression `x = s_{i1} ... s_{ik} · u` with `u` of length zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedWord {
    pub word: Vec<usize>,
    /// coordinates of `u` in the length-zero generators
    pub omega: Vec<i64>,
}

/// The extended affine Weyl group of a standard Levi subgroup, with its Coxeter data.
#[derive(Debug)]
pub struct Levi {
    pub rd: Arc<RootDatum>,
    pub j: Subset,
    pub pos: Vec<usize>,
    pub finite: Vec<u8>,
    pub components: Vec<Subset>,
    /// affine simple reflections: one affine reflection per component, then the simple reflections of `j`
    pub gens: Vec<AffElt>,
    pub gen_names: Vec<String>,
    /// simple root index, or `None` for an affine reflection
    pub gen_root: Vec<Option<usize>>,
    pub omega: Vec<AffElt>,
    pub omega_names: Vec<String>,
    /// `omega_perm[i][s]`: index of `u_i s u_i^{-1}`
    pub omega_perm: Vec<Vec<usize>>,
    /// rows: the coordinates of `e_k` in the basis (coroots of `j`, chosen standard vectors)
    basis_inv: Vec<Vec<i64>>,
    n_coroots: usize,
    /// `m_st`, with 0 for infinity
    pub coxeter: Vec<Vec<usize>>,
}

fn det(m: &[Vec<i64>]) -> i64 {
    let n = m.len();
    if n == 0 {
        return 1;
    }
    (0..n)
        .map(|c| {
            let minor: Vec<Vec<i64>> = m[1..].iter().map(|row| row.iter().enumerate().filter(|&(j, _)| j != c).map(|(_, &v)| v).collect()).collect();
            let s = if c % 2 == 0 { 1 } else { -1 };
            s * m[0][c] * det(&minor)
        })
        .sum()
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for first in 0..n {
        for rest in combinations(n, k - 1) {
            if rest.first().map_or(true, |&r| r > first) {
                let mut v = vec![first];
                v.extend(rest);
                out.push(v);
            }
        }
    }
    out
}

impl Levi {
    pub fn new(rd: &Arc<RootDatum>, j: Subset) -> Result<Levi> {
        let r = rd.rank;
        let pos = rd.pos_roots(j);
        let finite = rd.weyl_subgroup(j);
        let components = rd.components(j);
        let mut gens = Vec::new();
        let mut gen_names = Vec::new();
        let mut gen_root = Vec::new();
        for c in &components {
            let th = rd.highest_root(*c);
            let t = rd.translation(&rd.roots[th].covec);
            gens.push(rd.mul(&t, &rd.finite(rd.reflection(th))));
            gen_root.push(None);
            if components.len() == 1 {
                gen_names.push("s0".to_string());
            } else {
                gen_names.push(format!("s0_{}", rd.labels[c.iter().next().unwrap()]));
            }
        }
        for i in j.iter() {
            gens.push(rd.finite(rd.weyl.simple_refl[i]));
            gen_names.push(format!("s_{}", rd.labels[i]));
            gen_root.push(Some(i));
        }
        // lattice basis: coroots of j, then the lexicographically first standard vectors completing them
        let coroots: Vec<Vec<i64>> = j.iter().map(|i| rd.roots[i].covec.clone()).collect();
        let n_coroots = coroots.len();
        let mut chosen = None;
        for comb in combinations(r, r - n_coroots) {
            let mut cols = coroots.clone();
            for &e in &comb {
                let mut v = vec![0; r];
                v[e] = 1;
                cols.push(v);
            }
            let m: Vec<Vec<i64>> = (0..r).map(|row| cols.iter().map(|c| c[row]).collect()).collect();
            if det(&m).abs() == 1 {
                chosen = Some((comb, m));
                break;
            }
        }
        let (comb, bmat) = chosen.ok_or_else(|| Error::Preset(format!("coroot lattice of {} is not a direct summand", rd.format_subset(j))))?;
        let d = det(&bmat);
        let basis_inv: Vec<Vec<i64>> = (0..r)
            .map(|row| {
                (0..r)
                    .map(|col| {
                        // inverse entry (row, col) = cofactor(col, row) / det
                        let minor: Vec<Vec<i64>> = bmat
                            .iter()
                            .enumerate()
                            .filter(|&(i, _)| i != col)
                            .map(|(_, rr)| rr.iter().enumerate().filter(|&(jj, _)| jj != row).map(|(_, &v)| v).collect())
                            .collect();
                        let s = if (row + col) % 2 == 0 { 1 } else { -1 };
                        s * det(&minor) * d
                    })
                    .collect()
            })
            .collect();
        let mut lv = Levi {
            rd: rd.clone(),
            j,
            pos,
            finite,
            components,
            gens,
            gen_names,
            gen_root,
            omega: Vec::new(),
            omega_names: Vec::new(),
            omega_perm: Vec::new(),
            basis_inv,
            n_coroots,
            coxeter: Vec::new(),
        };
        for (i, &e) in comb.iter().enumerate() {
            let mut v = vec![0; r];
            v[e] = 1;
            let u = lv.reduce_right(rd.translation(&v));
            lv.omega.push(u);
            lv.omega_names.push(format!("u{}", i + 1));
        }
        for u in lv.omega.clone() {
            let uinv = rd.inv(&u);
            let mut perm = Vec::new();
            for s in &lv.gens {
                let c = rd.mul(&rd.mul(&u, s), &uinv);
                let idx = lv.gens.iter().position(|g| *g == c).ok_or_else(|| Error::Preset("length-zero element does not normalize the reflections".into()))?;
                perm.push(idx);
            }
            lv.omega_perm.push(perm);
        }
        if j == rd.delta() {
            if rd.omega_table.len() != lv.omega.len() {
                return Err(Error::Preset("length-zero action table has the wrong number of rows".into()));
            }
            for (row, perm) in rd.omega_table.iter().zip(&lv.omega_perm) {
                let expect: Vec<&str> = perm.iter().map(|&i| lv.gen_names[i].as_str()).collect();
                if row.iter().map(|s| s.as_str()).collect::<Vec<_>>() != expect {
                    return Err(Error::Preset(format!("length-zero action table row {row:?} should be {expect:?}")));
                }
            }
        }
        let n = lv.gens.len();
        lv.coxeter = (0..n)
            .map(|a| {
                (0..n)
                    .map(|b| {
                        if a == b {
                            return 1;
                        }
                        let st = rd.mul(&lv.gens[a], &lv.gens[b]);
                        let mut x = st;
                        for m in 1..=6 {
                            if x == AffElt::identity() {
                                return m;
                            }
                            x = rd.mul(&x, &st);
                        }
                        0
                    })
                    .collect()
            })
            .collect();
        Ok(lv)
    }

    pub fn full(rd: &Arc<RootDatum>) -> Result<Levi> {
        Levi::new(rd, rd.delta())
    }

    pub fn n_gens(&self) -> usize {
        self.gens.len()
    }

    pub fn n_omega(&self) -> usize {
        self.omega.len()
    }

    /// Names of all algebra generators: affine simple reflections, then length-zero generators.
    pub fn generator_names(&self) -> Vec<String> {
        self.gen_names.iter().chain(&self.omega_names).cloned().collect()
    }

    pub fn contains(&self, x: &AffElt) -> bool {
        self.rd.in_levi(x, self.j)
    }

    pub fn length(&self, x: &AffElt) -> usize {
        self.rd.length_over(x, &self.pos)
    }

    fn reduce_right(&self, mut x: AffElt) -> AffElt {
        loop {
            let l = self.length(&x);
            if l == 0 {
                return x;
            }
            let s = self.gens.iter().find(|s| self.length(&self.rd.mul(&x, s)) < l).expect("positive length has a descent");
            x = self.rd.mul(&x, s);
        }
    }

    /// Coordinates of the length-zero part of `x ∈ W_J`.
    pub fn omega_coords(&self, x: &AffElt) -> Vec<i64> {
        let r = self.rd.rank;
        (self.n_coroots..r).map(|row| (0..r).map(|c| self.basis_inv[row][c] * x.lam[c] as i64).sum()).collect()
    }

    pub fn omega_elt(&self, b: &[i64]) -> AffElt {
        let mut x = AffElt::identity();
        for (u, &e) in self.omega.iter().zip(b) {
            x = self.rd.mul(&x, &self.rd.pow(u, e));
        }
        x
    }

    /// Least-index generator `s` with `ℓ(s x) < ℓ(x)`.
    pub fn left_descent(&self, x: &AffElt) -> Option<usize> {
        let l = self.length(x);
        (0..self.gens.len()).find(|&i| self.length(&self.rd.mul(&self.gens[i], x)) < l)
    }

    pub fn reduced_word(&self, x: &AffElt) -> ReducedWord {
        let mut word = Vec::new();
        let mut y = *x;
        while let Some(i) = self.left_descent(&y) {
            word.push(i);
            y = self.rd.mul(&self.gens[i], &y);
        }
        ReducedWord { word, omega: self.omega_coords(&y) }
    }

    pub fn from_word(&self, rw: &ReducedWord) -> AffElt {
        let mut x = AffElt::identity();
        for &i in &rw.word {
            x = self.rd.mul(&x, &self.gens[i]);
        }
        self.rd.mul(&x, &self.omega_elt(&rw.omega))
    }

    /// Whether a length-zero generator commutes with the whole finite Weyl group of the Levi.
    pub fn omega_is_central(&self, i: usize) -> bool {
        let u = self.omega[i];
        self.finite.iter().all(|&w| {
            let f = self.rd.finite(w);
            self.rd.mul(&u, &f) == self.rd.mul(&f, &u)
        })
    }

    /// Orbits of the length-zero group on the affine simple reflections.
    pub fn omega_orbits(&self) -> Vec<Vec<usize>> {
        let n = self.gens.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut orbit = vec![s];
            seen[s] = true;
            let mut head = 0;
            while head < orbit.len() {
                let a = orbit[head];
                for p in &self.omega_perm {
                    let b = p[a];
                    if !seen[b] {
                        seen[b] = true;
                        orbit.push(b);
                    }
                }
                head += 1;
            }
            out.push(orbit);
        }
        out
    }

    /// Distances in the Cayley graph on the affine simple reflections, with free moves by the
    /// length-zero generators restricted to `|coordinate| ≤ omega_bound`.
    pub fn cayley_ball(&self, radius: usize, omega_bound: i64) -> HashMap<AffElt, usize> {
        let rd = &self.rd;
        let mut dist: HashMap<AffElt, usize> = HashMap::new();
        let mut dq: VecDeque<(AffElt, usize)> = VecDeque::new();
        dist.insert(AffElt::identity(), 0);
        dq.push_back((AffElt::identity(), 0));
        while let Some((x, d)) = dq.pop_front() {
            if dist.get(&x).is_some_and(|&e| e < d) {
                continue;
            }
            for u in &self.omega {
                for y in [rd.mul(&x, u), rd.mul(&x, &rd.inv(u))] {
                    if self.omega_coords(&y).iter().any(|c| c.abs() > omega_bound) {
                        continue;
                    }
                    if dist.get(&y).map_or(true, |&e| e > d) {
                        dist.insert(y, d);
                        dq.push_front((y, d));
                    }
                }
            }
            if d == radius {
                continue;
            }
            for s in &self.gens {
                let y = rd.mul(&x, s);
                if !dist.contains_key(&y) {
                    dist.insert(y, d + 1);
                    dq.push_back((y, d + 1));
                }
            }
        }
        dist
    }

    /// Elements of the affine Weyl group (no length-zero part) of length at most `n`.
    pub fn affine_ball(&self, n: usize) -> Vec<AffElt> {
        let mut seen = HashMap::from([(AffElt::identity(), 0usize)]);
        let mut frontier = vec![AffElt::identity()];
        for l in 1..=n {
            let mut next = Vec::new();
            for x in &frontier {
                for s in &self.gens {
                    let y = self.rd.mul(x, s);
                    if !seen.contains_key(&y) && self.length(&y) == l {
                        seen.insert(y, l);
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        let mut out: Vec<AffElt> = seen.into_keys().collect();
        out.sort_by_key(|x| (self.length(x), self.reduced_word(x).word));
        out
    }
}
