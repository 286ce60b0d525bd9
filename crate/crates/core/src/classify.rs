//! Characters, exhaustive low-dimensional simple modules, supersingularity and the
//! classification by triples.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::Write as _;
use std::sync::Arc;

use crate::ffield::{field, Fe, Field};
use crate::heckealg::HeckeAlg;
use crate::heckemod::{commutant, composition_series, decompose_extension, descend, is_isomorphic, is_simple, is_supersingular_default, submodule_lattice, HModule};
use crate::matrix::{vec_mat, Echelon, Mat};
use crate::parind::{delta_v, induce, steinberg_trivial, triple_module, Triple};
use crate::rootdata::{upper_sets, RootDatum, Subset};
use crate::{Error, Result};

/// All one-dimensional modules of `alg`: reflections to `0` or `c`, length-zero generators
/// to units, subject to the relations.
pub fn enumerate_characters(alg: &Arc<HeckeAlg>) -> Vec<HModule> {
    let f = &alg.f;
    let ng = alg.levi.n_gens();
    let no = alg.levi.n_omega();
    let units: Vec<Fe> = f.elements().filter(|&x| x != 0).collect();
    let mut out = Vec::new();
    for gv in 0..(1usize << ng) {
        let g: Vec<Fe> = (0..ng).map(|i| if gv >> i & 1 == 1 { alg.c } else { 0 }).collect();
        let mut idx = vec![0usize; no];
        loop {
            let o: Vec<Fe> = idx.iter().map(|&i| units[i]).collect();
            if let Ok(m) = HModule::character(alg, &g, &o) {
                out.push(m);
            }
            let mut t = 0;
            while t < no && idx[t] + 1 == units.len() {
                idx[t] = 0;
                t += 1;
            }
            if t == no {
                break;
            }
            idx[t] += 1;
        }
    }
    out
}

fn all_matrices(f: &Arc<Field>, m: usize) -> Result<Vec<Mat>> {
    let q = f.order() as u64;
    let total = q.checked_pow((m * m) as u32).filter(|&t| t <= 1 << 20).ok_or_else(|| Error::SizeLimit(format!("{m}x{m} matrices over F_{q}")))?;
    let mut out = Vec::with_capacity(total as usize);
    for code in 0..total {
        let mut c = code;
        let data: Vec<Fe> = (0..m * m)
            .map(|_| {
                let x = (c % q) as Fe;
                c /= q;
                x
            })
            .collect();
        out.push(Mat { rows: m, cols: m, data, f: f.clone() });
    }
    Ok(out)
}

/// Isomorphism-invariant normal form: matrices in the basis spun from the kernel line of
/// the first probe element with one-dimensional kernel.
pub fn canonical_key(m: &HModule) -> Option<Vec<Fe>> {
    if m.dim == 1 {
        return Some(m.action_mats().iter().map(|x| x.data[0]).collect());
    }
    let f = m.field();
    let nc = f.neg(m.alg.c);
    let mats = m.action_mats();
    let mut probes = Vec::new();
    for g in &m.gens {
        probes.push(g.clone());
        probes.push(g.add_scalar(nc));
    }
    for i in 0..m.gens.len() {
        for j in 0..m.gens.len() {
            if i != j {
                probes.push(m.gens[i].mul(&m.gens[j]).add_scalar(nc));
            }
        }
    }
    for (pi, h) in probes.iter().enumerate() {
        let ker = h.left_kernel();
        if ker.len() != 1 {
            continue;
        }
        let mut basis = vec![ker[0].clone()];
        let mut e = Echelon::new(f, m.dim);
        e.insert(&ker[0]);
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
        if basis.len() != m.dim {
            return None;
        }
        let b = Mat::from_rows(f, &basis, m.dim);
        let binv = b.inverse()?;
        let mut key = vec![pi as Fe];
        for g in &mats {
            key.extend(b.mul(g).mul(&binv).data);
        }
        return Some(key);
    }
    None
}

/// Iso classes of absolutely simple modules of dimension `m` over the field of `alg`.
pub fn absolutely_simple(alg: &Arc<HeckeAlg>, m: usize) -> Result<Vec<HModule>> {
    let f = alg.f.clone();
    let lv = &alg.levi;
    let ng = lv.n_gens();
    let no = lv.n_omega();
    // orbit representatives of reflections, and how to reach the others
    let mut source: Vec<Option<(usize, usize)>> = vec![None; ng];
    let mut reps = Vec::new();
    let mut reached = vec![false; ng];
    for s in 0..ng {
        if reached[s] {
            continue;
        }
        reps.push(s);
        reached[s] = true;
        let mut stack = vec![s];
        while let Some(x) = stack.pop() {
            for i in 0..no {
                let y = lv.omega_perm[i][x];
                if !reached[y] {
                    reached[y] = true;
                    source[y] = Some((x, i));
                    stack.push(y);
                }
            }
        }
    }
    let central: Vec<bool> = (0..no).map(|i| (0..ng).all(|s| lv.omega_perm[i][s] == s)).collect();
    let all = all_matrices(&f, m)?;
    let idem: Vec<Mat> = all.iter().filter(|e| e.mul(e) == **e).map(|e| e.scale(alg.c)).collect();
    let gl: Vec<Mat> = all.iter().filter(|e| e.rank() == m).cloned().collect();
    let scalars: Vec<Mat> = f.elements().filter(|&x| x != 0).map(|x| Mat::scalar(&f, m, x)).collect();
    let firsts: Vec<Mat> = (0..=m)
        .map(|a| {
            let mut d = Mat::zeros(&f, m, m);
            for i in 0..a {
                d.set(i, i, alg.c);
            }
            d
        })
        .collect();
    let mut choices: Vec<&Vec<Mat>> = Vec::new();
    for (r, _) in reps.iter().enumerate() {
        choices.push(if r == 0 { &firsts } else { &idem });
    }
    for &c in &central {
        choices.push(if c { &scalars } else { &gl });
    }
    let total: f64 = choices.iter().map(|c| c.len() as f64).product();
    if total > 4e6 {
        return Err(Error::SizeLimit(format!("{total} candidate assignments in dimension {m}")));
    }
    let mut seen: HashMap<Vec<Fe>, bool> = HashMap::new();
    let mut loose: Vec<HModule> = Vec::new();
    let mut out = Vec::new();
    let mut idx = vec![0usize; choices.len()];
    loop {
        let pick: Vec<&Mat> = idx.iter().zip(&choices).map(|(&i, c)| &c[i]).collect();
        let omega: Vec<Mat> = pick[reps.len()..].iter().map(|x| (*x).clone()).collect();
        let inv: Vec<Mat> = omega.iter().map(|x| x.inverse().expect("invertible")).collect();
        let mut gens: Vec<Option<Mat>> = vec![None; ng];
        for (r, &s) in reps.iter().enumerate() {
            gens[s] = Some(pick[r].clone());
        }
        while gens.iter().any(|g| g.is_none()) {
            for s in 0..ng {
                if gens[s].is_none() {
                    let (x, i) = source[s].expect("reachable");
                    if let Some(gx) = gens[x].clone() {
                        gens[s] = Some(omega[i].mul(&gx).mul(&inv[i]));
                    }
                }
            }
        }
        let gens: Vec<Mat> = gens.into_iter().map(|g| g.unwrap()).collect();
        if let Ok(md) = HModule::checked(alg, gens, omega) {
            match canonical_key(&md) {
                Some(key) => {
                    if !seen.contains_key(&key) {
                        let ok = is_simple(&md) && commutant(&md)?.commutant_dim == 1;
                        seen.insert(key, ok);
                        if ok {
                            out.push(md);
                        }
                    }
                }
                None => {
                    if is_simple(&md) && commutant(&md)?.commutant_dim == 1 {
                        let mut dup = false;
                        for x in &loose {
                            if is_isomorphic(x, &md)? {
                                dup = true;
                                break;
                            }
                        }
                        if !dup {
                            loose.push(md.clone());
                            out.push(md);
                        }
                    }
                }
            }
        }
        let mut t = 0;
        while t < idx.len() && idx[t] + 1 == choices[t].len() {
            idx[t] = 0;
            t += 1;
        }
        if t == idx.len() {
            break;
        }
        idx[t] += 1;
    }
    Ok(out)
}

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// A simple module over the base field with its absolutely simple model.
#[derive(Clone, Debug)]
pub struct SimpleModule {
    pub module: HModule,
    pub abs: HModule,
    /// degree of the field of definition over the base field
    pub e: u32,
}

/// All simple modules of `H(M_J)` over `f` of dimension at most `dim_bound`, one per class.
pub fn simple_modules(rd: &Arc<RootDatum>, j: Subset, f: &Arc<Field>, dim_bound: usize) -> Result<Vec<SimpleModule>> {
    let w0j = rd.weyl_subgroup(j).len();
    let k = f.k();
    let mut out = Vec::new();
    for m in 1..=w0j.min(dim_bound) {
        for e in 1..=(dim_bound / m) as u32 {
            let big = field(f.p(), k * e)?;
            let alg = HeckeAlg::for_subset(rd, j, &big)?;
            let abs = if m == 1 { enumerate_characters(&alg) } else { absolutely_simple(&alg, m)? };
            let mut reps: Vec<HModule> = Vec::new();
            let mut seen: HashSet<Vec<Fe>> = HashSet::new();
            let mut loose: Vec<HModule> = Vec::new();
            'cand: for x in abs {
                let twists: Vec<HModule> = (0..e).map(|i| x.frobenius_twist(k * i)).collect();
                match canonical_key(&x) {
                    Some(key) => {
                        if seen.contains(&key) {
                            continue;
                        }
                        let keys: Vec<Option<Vec<Fe>>> = twists.iter().map(canonical_key).collect();
                        // field of definition exactly F_{q^e}
                        for d in divisors(e) {
                            if d < e && keys[d as usize].as_ref() == Some(&key) {
                                continue 'cand;
                            }
                        }
                        seen.extend(keys.into_iter().flatten());
                    }
                    None => {
                        for d in divisors(e) {
                            if d < e && is_isomorphic(&twists[d as usize], &x)? {
                                continue 'cand;
                            }
                        }
                        for r in &loose {
                            for t in &twists {
                                if is_isomorphic(t, r)? {
                                    continue 'cand;
                                }
                            }
                        }
                        loose.push(x.clone());
                    }
                }
                reps.push(x);
            }
            for x in reps {
                out.push(SimpleModule { module: x.restrict_scalars(k)?, abs: x, e });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct TripleEntry {
    pub triple: Triple,
    pub simple: bool,
}

#[derive(Clone, Debug)]
pub struct SimpleEntry {
    pub module: HModule,
    pub e: u32,
    pub supersingular: bool,
    pub matches: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct CharacterEntry {
    pub module: HModule,
    pub supersingular: bool,
    pub simple_index: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct ClassificationReport {
    pub preset: String,
    pub p: u32,
    pub k: u32,
    pub dim_bound: usize,
    pub characters: Vec<CharacterEntry>,
    pub simples: Vec<SimpleEntry>,
    pub triples: Vec<TripleEntry>,
    pub failures: Vec<String>,
}

fn describe(m: &HModule) -> String {
    let f = m.field();
    let names = m.alg.levi.generator_names();
    if m.dim == 1 {
        names.iter().zip(m.action_mats()).map(|(n, x)| format!("{n}={}", f.format(x.data[0]))).collect::<Vec<_>>().join(",")
    } else {
        format!("dim {}", m.dim)
    }
}

impl ClassificationReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    /// Simple modules flagged non-supersingular versus those hit by a proper triple.
    pub fn supersingular_consistent(&self) -> bool {
        self.simples.iter().all(|s| {
            let proper = s.matches.iter().any(|&t| self.triples[t].triple.p != self.triples[t].triple.v.rd().delta());
            proper != s.supersingular
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let rd = crate::rootdata::load_preset(&self.preset).ok();
        let fs = |x: Subset| rd.as_ref().map_or(format!("{:b}", x.0), |r| r.format_subset(x));
        writeln!(s, "preset {}", self.preset).unwrap();
        writeln!(s, "field {}^{}", self.p, self.k).unwrap();
        writeln!(s, "dim-bound {}", self.dim_bound).unwrap();
        writeln!(s, "characters {}", self.characters.len()).unwrap();
        for c in &self.characters {
            writeln!(
                s,
                "  {} supersingular={} simple={}",
                describe(&c.module),
                c.supersingular,
                c.simple_index.map_or("-".into(), |i| i.to_string())
            )
            .unwrap();
        }
        writeln!(s, "simples {}", self.simples.len()).unwrap();
        for (i, x) in self.simples.iter().enumerate() {
            writeln!(
                s,
                "  [{i}] dim={} e={} supersingular={} triples={:?}",
                x.module.dim, x.e, x.supersingular, x.matches
            )
            .unwrap();
        }
        writeln!(s, "triples {}", self.triples.len()).unwrap();
        for (i, t) in self.triples.iter().enumerate() {
            writeln!(
                s,
                "  [{i}] P={} Q={} P(V)={} V=({}) dim={} simple={}",
                fs(t.triple.p),
                fs(t.triple.q),
                fs(t.triple.p_v),
                describe(&t.triple.v),
                t.triple.i.dim,
                t.simple
            )
            .unwrap();
        }
        writeln!(s, "failures {}", self.failures.len()).unwrap();
        for x in &self.failures {
            writeln!(s, "  {x}").unwrap();
        }
        s
    }
}

/// `dim St_Q^{H(M_K)}(1)`.
fn steinberg_dim(rd: &Arc<RootDatum>, f: &Arc<Field>, q: Subset, k: Subset, memo: &mut HashMap<(u32, u32), usize>) -> Result<usize> {
    if let Some(&d) = memo.get(&(q.0, k.0)) {
        return Ok(d);
    }
    let d = steinberg_trivial(rd, f, q, k)?.dim;
    memo.insert((q.0, k.0), d);
    Ok(d)
}

/// All triples `(P, V, Q)` with `V` simple supersingular over `F` and `dim I ≤ dim_bound`.
pub fn enumerate_triples(rd: &Arc<RootDatum>, f: &Arc<Field>, dim_bound: usize, top: &[SimpleModule]) -> Result<Vec<Triple>> {
    let w0 = rd.weyl.order();
    let mut memo = HashMap::new();
    let mut out = Vec::new();
    for p in rd.delta().subsets() {
        let cands = if p == rd.delta() { top.to_vec() } else { simple_modules(rd, p, f, dim_bound)? };
        for c in cands {
            if !is_supersingular_default(&c.module)? {
                continue;
            }
            let pv = p.union(delta_v(&c.module));
            let index = w0 / rd.weyl_subgroup(pv).len();
            for q in pv.subsets() {
                if !p.is_subset(q) {
                    continue;
                }
                let est = c.module.dim * index * steinberg_dim(rd, f, q, pv, &mut memo)?;
                if est > dim_bound {
                    continue;
                }
                out.push(triple_module(p, &c.module, q)?);
            }
        }
    }
    Ok(out)
}

pub fn classify(rd: &Arc<RootDatum>, f: &Arc<Field>, dim_bound: usize) -> Result<ClassificationReport> {
    if dim_bound > 8 {
        return Err(Error::SizeLimit(format!("dimension bound {dim_bound}")));
    }
    let g = HeckeAlg::for_subset(rd, rd.delta(), f)?;
    let top = simple_modules(rd, rd.delta(), f, dim_bound)?;
    let triples = enumerate_triples(rd, f, dim_bound, &top)?;
    let mut failures = Vec::new();
    let mut tentries = Vec::new();
    for (i, t) in triples.into_iter().enumerate() {
        let simple = is_simple(&t.i);
        if !simple {
            failures.push(format!("triple {i} is not simple"));
        }
        tentries.push(TripleEntry { triple: t, simple });
    }
    for a in 0..tentries.len() {
        for b in a + 1..tentries.len() {
            if is_isomorphic(&tentries[a].triple.i, &tentries[b].triple.i)? {
                failures.push(format!("triples {a} and {b} are isomorphic"));
            }
        }
    }
    let mut simples = Vec::new();
    for (i, s) in top.iter().enumerate() {
        let supersingular = is_supersingular_default(&s.module)?;
        let mut matches = Vec::new();
        for (t, te) in tentries.iter().enumerate() {
            if is_isomorphic(&s.module, &te.triple.i)? {
                matches.push(t);
            }
        }
        if matches.len() != 1 {
            failures.push(format!("simple {i} matches triples {matches:?}"));
        }
        simples.push(SimpleEntry { module: s.module.clone(), e: s.e, supersingular, matches });
    }
    for t in 0..tentries.len() {
        if !simples.iter().any(|s| s.matches.contains(&t)) {
            failures.push(format!("triple {t} matches no enumerated simple module"));
        }
    }
    let mut characters = Vec::new();
    for c in enumerate_characters(&g) {
        let supersingular = is_supersingular_default(&c)?;
        let mut simple_index = None;
        for (i, s) in simples.iter().enumerate() {
            if s.module.dim == 1 && is_isomorphic(&s.module, &c)? {
                simple_index = Some(i);
            }
        }
        if dim_bound >= 1 && simple_index.is_none() {
            failures.push(format!("character ({}) not among the simple modules", describe(&c)));
        }
        if dim_bound >= 1 {
            characters.push(CharacterEntry { module: c, supersingular, simple_index });
        }
    }
    let report = ClassificationReport { preset: rd.name.clone(), p: f.p(), k: f.k(), dim_bound, characters, simples, triples: tentries, failures };
    if !report.supersingular_consistent() {
        let mut r = report;
        r.failures.push("supersingular flags disagree with proper-triple membership".into());
        return Ok(r);
    }
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct LatticeEntry {
    pub p: Subset,
    pub v: HModule,
    pub dim: usize,
    pub factors: usize,
    pub submodules: usize,
    pub upper_sets: usize,
    pub order_isomorphic: bool,
}

#[derive(Clone, Debug, Default)]
pub struct LatticeReport {
    pub entries: Vec<LatticeEntry>,
    pub failures: Vec<String>,
}

/// Checks the lattice of `Ind_P(V)` against upper sets of subsets of `P(V) \ P`.
pub fn check_lattice(v: &HModule) -> Result<LatticeEntry> {
    let rd = v.rd().clone();
    let p = v.alg.j();
    let pv = p.union(delta_v(v));
    let x: Vec<usize> = pv.minus(p).iter().collect();
    let n = x.len();
    let ind = induce(v)?.carrier;
    let lat = submodule_lattice(&ind)?;
    // label each factor by Q' \ P
    let mut tri = Vec::new();
    for q in pv.subsets() {
        if p.is_subset(q) {
            tri.push((q, triple_module(p, v, q)?.i));
        }
    }
    let mut label = Vec::new();
    for fct in &lat.factors {
        let hits: Vec<Subset> = tri.iter().filter(|(_, i)| is_isomorphic(fct, i).unwrap_or(false)).map(|(q, _)| *q).collect();
        if hits.len() != 1 {
            return Err(Error::Verification(format!("factor of dim {} matches {} triples", fct.dim, hits.len())));
        }
        let q = hits[0];
        let mask = x.iter().enumerate().filter(|(_, &a)| q.contains(a)).fold(0u32, |acc, (i, _)| acc | 1 << i);
        label.push(mask);
    }
    let fams: Vec<u32> = lat.labels.iter().map(|ls| ls.iter().fold(0u32, |acc, &i| acc | 1 << label[i])).collect();
    let ups = upper_sets(n)?;
    let distinct: BTreeSet<u32> = fams.iter().copied().collect();
    let image: BTreeSet<u32> = ups.elements.iter().copied().collect();
    let mut ok = distinct.len() == fams.len() && distinct == image && lat.check_axioms();
    for a in 0..fams.len() {
        for b in 0..fams.len() {
            ok &= lat.leq[a][b] == (fams[a] & !fams[b] == 0);
        }
    }
    let _ = rd;
    Ok(LatticeEntry { p, v: v.clone(), dim: ind.dim, factors: lat.factors.len(), submodules: lat.len(), upper_sets: ups.len(), order_isomorphic: ok })
}

/// For every Levi and supersingular character `V` of it, checks the submodule lattice of
/// `Ind_P(V)`.
pub fn verify_lattice_theorem(rd: &Arc<RootDatum>, f: &Arc<Field>) -> Result<LatticeReport> {
    let mut rep = LatticeReport::default();
    for p in rd.delta().subsets() {
        let alg = HeckeAlg::for_subset(rd, p, f)?;
        for v in enumerate_characters(&alg) {
            if !is_supersingular_default(&v)? {
                continue;
            }
            match check_lattice(&v) {
                Ok(e) => {
                    if !e.order_isomorphic {
                        rep.failures.push(format!("P={} V=({}) lattice mismatch", rd.format_subset(p), describe(&v)));
                    }
                    rep.entries.push(e);
                }
                Err(err) => rep.failures.push(format!("P={} V=({}): {err}", rd.format_subset(p), describe(&v))),
            }
        }
    }
    Ok(rep)
}

#[derive(Clone, Debug)]
pub struct DecompositionEntry {
    pub label: String,
    pub degree: usize,
    pub factors: usize,
    pub extension_ok: bool,
    pub descent_ok: bool,
    pub length_bound_ok: bool,
}

#[derive(Clone, Debug, Default)]
pub struct DecompositionReport {
    pub entries: Vec<DecompositionEntry>,
    pub failures: Vec<String>,
}

/// Simple modules over `f` whose commutant has degree `e ∈ {1,2,3}`: restrictions of
/// scalars of characters over `F_{q^e}` sending a length-zero generator to a field generator.
pub fn decomposition_samples(rd: &Arc<RootDatum>, f: &Arc<Field>) -> Result<Vec<(String, HModule)>> {
    let mut out = Vec::new();
    for j in [Subset::empty(), rd.delta()] {
        for e in 1..=3u32 {
            let big = field(f.p(), f.k() * e)?;
            let alg = HeckeAlg::for_subset(rd, j, &big)?;
            if alg.levi.n_omega() == 0 {
                continue;
            }
            let mut omega = vec![1; alg.levi.n_omega()];
            omega[0] = if e == 1 { 1 } else { big.generator() };
            if let Ok(m) = HModule::character(&alg, &vec![0; alg.levi.n_gens()], &omega) {
                out.push((format!("{} J={} e={e}", rd.name, rd.format_subset(j)), m.restrict_scalars(f.k())?));
            }
        }
    }
    Ok(out)
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn verify_decomposition_theorem(samples: &[(String, HModule)]) -> Result<DecompositionReport> {
    let mut rep = DecompositionReport::default();
    for (label, m) in samples {
        let k = m.field().k();
        let e = commutant(m)?.center_degree as u32;
        let ext = decompose_extension(m, k * e)?;
        let mut descent_ok = true;
        for fct in &ext.factors {
            descent_ok &= is_isomorphic(&fct.restrict_scalars(k)?, m)?;
            let (_, d) = descend(fct)?;
            descent_ok &= k * d / gcd(k, d) == k * e;
        }
        let mut length_bound_ok = true;
        for d in 1..=2 * e {
            let len = composition_series(&m.scalar_extend(k * d)?, 5).len() as u32;
            length_bound_ok &= len <= e && len == gcd(d, e);
        }
        let entry = DecompositionEntry {
            label: label.clone(),
            degree: e as usize,
            factors: ext.factors.len(),
            extension_ok: ext.ok(),
            descent_ok,
            length_bound_ok,
        };
        if !(entry.extension_ok && entry.descent_ok && entry.length_bound_ok) {
            rep.failures.push(format!("{label}: {entry:?}"));
        }
        rep.entries.push(entry);
    }
    Ok(rep)
}
