//! End-to-end verification suites over a preset.

use std::collections::HashSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::affweyl::Levi;
use crate::classify::{check_lattice, classify, decomposition_samples, enumerate_characters, verify_decomposition_theorem, ClassificationReport};
use crate::ffield::{field, Field};
use crate::heckealg::HeckeAlg;
use crate::heckemod::{find_isomorphism, hom_space, is_simple, is_supersingular_default, HModule};
use crate::parind::{adjoint_l, adjoint_r, delta_v, eight_inductions, induce, iota_module, steinberg, steinberg_trivial, triple_module, twist_module};
use crate::rootdata::{RootDatum, Subset};
use crate::Result;

#[derive(Clone, Debug)]
pub struct SuiteResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl SuiteResult {
    fn new(name: &str, passed: bool, detail: String) -> SuiteResult {
        SuiteResult { name: name.to_string(), passed, detail }
    }
}

/// Records every constructed module and re-runs its relation check.
#[derive(Default)]
pub struct Tally {
    pub modules: usize,
    pub failures: Vec<String>,
    /// constructed modules, kept when `keep` is set
    pub kept: Vec<(String, HModule)>,
    pub keep: bool,
}

impl Tally {
    pub fn note(&mut self, what: &str, m: &HModule) {
        self.modules += 1;
        if self.keep {
            self.kept.push((what.to_string(), m.clone()));
        }
        let f = m.check_relations();
        if !f.is_empty() {
            self.failures.push(format!("{what}: {}", f.join("; ")));
        }
    }
}

/// Formula lengths against 0-1 breadth-first distances in the Cayley graph.
pub fn length_suite(rd: &Arc<RootDatum>, radius: usize) -> Result<SuiteResult> {
    let lv = Levi::full(rd)?;
    let ball = lv.cayley_ball(radius, 2);
    let bad = ball.iter().filter(|(x, &d)| lv.length(x) != d).count();
    Ok(SuiteResult::new("lengths", bad == 0, format!("{} elements, {bad} mismatches", ball.len())))
}

pub fn classification_fields(rd: &RootDatum) -> Vec<(u32, usize)> {
    if rd.rank <= 1 || rd.n_simple() <= 1 {
        vec![(1, 4), (2, 4)]
    } else {
        vec![(1, 2)]
    }
}

pub fn classification_suite(reports: &[ClassificationReport], tally: &mut Tally) -> SuiteResult {
    let mut ok = true;
    let mut parts = Vec::new();
    for r in reports {
        for t in &r.triples {
            tally.note("triple", &t.triple.i);
            tally.note("steinberg", &t.triple.st);
        }
        ok &= r.is_ok();
        parts.push(format!("F_{}^{}: {} simples, {} triples, {} failures", r.p, r.k, r.simples.len(), r.triples.len(), r.failures.len()));
    }
    SuiteResult::new("classification", ok, parts.join("; "))
}

pub fn supersingular_suite(reports: &[ClassificationReport]) -> Result<SuiteResult> {
    let mut ok = true;
    let mut checked = 0;
    for r in reports {
        ok &= r.supersingular_consistent();
        for s in &r.simples {
            let ext = s.module.scalar_extend(s.module.field().k() * 2)?;
            ok &= is_supersingular_default(&ext)? == s.supersingular;
            checked += 1;
        }
    }
    Ok(SuiteResult::new("supersingularity", ok, format!("{checked} simple modules cross-checked")))
}

pub fn lattice_suite(rd: &Arc<RootDatum>, f: &Arc<Field>, tally: &mut Tally) -> Result<SuiteResult> {
    let mut ok = true;
    let mut parts = Vec::new();
    for p in rd.delta().subsets() {
        let alg = HeckeAlg::for_subset(rd, p, f)?;
        for v in enumerate_characters(&alg) {
            tally.note("character", &v);
            if !is_supersingular_default(&v)? {
                continue;
            }
            let e = check_lattice(&v)?;
            ok &= e.order_isomorphic && e.submodules == e.upper_sets;
            parts.push(format!("P={} dim {}: {} factors, {} submodules", rd.format_subset(p), e.dim, e.factors, e.submodules));
        }
    }
    Ok(SuiteResult::new("lattice", ok, parts.join("; ")))
}

pub fn decomposition_suite(rd: &Arc<RootDatum>, tally: &mut Tally) -> Result<SuiteResult> {
    let samples = decomposition_samples(rd, &field(rd.p, 1)?)?;
    for (l, m) in &samples {
        tally.note(l, m);
    }
    let rep = verify_decomposition_theorem(&samples)?;
    let degs: Vec<usize> = rep.entries.iter().map(|e| e.degree).collect();
    Ok(SuiteResult::new("decomposition", rep.failures.is_empty() && !degs.is_empty(), format!("commutant degrees {degs:?}")))
}

/// `(J, V)` sample pairs, proper Levis first.
pub fn sample_pairs(rd: &Arc<RootDatum>, f: &Arc<Field>, n: usize) -> Result<Vec<HModule>> {
    let mut levis: Vec<Subset> = rd.delta().subsets().into_iter().filter(|&j| j != rd.delta()).collect();
    levis.push(rd.delta());
    let chars: Vec<Vec<HModule>> = levis.iter().map(|&j| Ok(enumerate_characters(&HeckeAlg::for_subset(rd, j, f)?))).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for r in 0.. {
        let mut any = false;
        for c in &chars {
            if let Some(v) = c.get(r) {
                any = true;
                if out.len() < n {
                    out.push(v.clone());
                }
            }
        }
        if !any || out.len() >= n {
            break;
        }
    }
    Ok(out)
}

pub fn eight_suite(rd: &Arc<RootDatum>, tally: &mut Tally) -> Result<SuiteResult> {
    let f = field(rd.p, 2)?;
    let mut ok = true;
    let mut n = 0;
    let mut checks = 0;
    for v in sample_pairs(rd, &f, 5)? {
        let rep = eight_inductions(&v, rd.delta())?;
        for (_, m) in &rep.variants {
            tally.note("variant", m);
        }
        tally.note("twist", &twist_module(&v, rd.delta())?);
        tally.note("iota", &iota_module(&v, rd.delta())?);
        tally.note("dual", &v.dual());
        ok &= rep.all_hold() && rep.checks.iter().all(|c| c.intertwiner.as_ref().is_some_and(|x| x.inverse().is_some()));
        checks += rep.checks.len();
        n += 1;
    }
    Ok(SuiteResult::new("eight inductions", ok && n >= 5, format!("{n} pairs, {checks} isomorphisms")))
}

fn hom_dim(a: Option<&HModule>, b: Option<&HModule>) -> Result<usize> {
    match (a, b) {
        (Some(a), Some(b)) => Ok(hom_space(a, b)?.len()),
        _ => Ok(0),
    }
}

/// Random `H(G)`-modules: characters, inductions of characters and sums of those.
fn random_top_module(rd: &Arc<RootDatum>, f: &Arc<Field>, rng: &mut ChaCha8Rng) -> Result<HModule> {
    let pick = |rng: &mut ChaCha8Rng| -> Result<HModule> {
        let subsets = rd.delta().subsets();
        let j = *subsets.choose(rng).unwrap();
        let cs = enumerate_characters(&HeckeAlg::for_subset(rd, j, f)?);
        let v = cs.choose(rng).unwrap().clone();
        Ok(induce(&v)?.carrier)
    };
    let a = pick(rng)?;
    if rng.gen_bool(0.3) {
        a.direct_sum(&pick(rng)?)
    } else {
        Ok(a)
    }
}

pub fn adjunction_suite(rd: &Arc<RootDatum>, seed: u64, tally: &mut Tally) -> Result<SuiteResult> {
    let f = field(rd.p, 2)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let proper: Vec<Subset> = rd.delta().subsets().into_iter().filter(|&j| j != rd.delta()).collect();
    let mut ok = true;
    let mut units = 0;
    let mut pairs = 0;
    while pairs < 10 {
        let j = *proper.choose(&mut rng).unwrap();
        let cs = enumerate_characters(&HeckeAlg::for_subset(rd, j, &f)?);
        let v = cs.choose(&mut rng).unwrap().clone();
        let x = random_top_module(rd, &f, &mut rng)?;
        let ind = induce(&v)?.carrier;
        let r = adjoint_r(&x, j)?;
        let l = adjoint_l(&x, j)?;
        tally.note("random module", &x);
        tally.note("induced", &ind);
        for m in r.iter().chain(l.iter()) {
            tally.note("adjoint", m);
        }
        let right = hom_space(&ind, &x)?.len() == hom_dim(Some(&v), r.as_ref())?;
        let left = hom_dim(l.as_ref(), Some(&v))? == hom_space(&x, &ind)?.len();
        ok &= right && left;
        let unit = adjoint_l(&ind, j)?;
        if let Some(u) = unit {
            if find_isomorphism(&u, &v)?.is_some() {
                units += 1;
            } else {
                ok = false;
            }
        } else {
            ok = false;
        }
        pairs += 1;
    }
    Ok(SuiteResult::new("adjunctions", ok, format!("{pairs} pairs, {units} units")))
}

pub fn steinberg_suite(rd: &Arc<RootDatum>, tally: &mut Tally) -> Result<SuiteResult> {
    let mut ok = true;
    let mut tested = 0;
    for k in [1u32, 2] {
        let f = field(rd.p, k)?;
        for p in rd.delta().subsets() {
            let alg = HeckeAlg::for_subset(rd, p, &f)?;
            for v in enumerate_characters(&alg).into_iter().take(4) {
                let pv = p.union(delta_v(&v));
                for q in pv.subsets() {
                    if p.is_subset(q) {
                        let st = steinberg(&v, q, pv)?;
                        tally.note("steinberg", &st);
                        tested += 1;
                    }
                }
            }
        }
    }
    let f2 = field(rd.p, 1)?;
    let mut simple = 0;
    for q in rd.delta().subsets() {
        let st = steinberg_trivial(rd, &f2, q, rd.delta())?;
        tally.note("steinberg", &st);
        let abs = is_simple(&st) && is_simple(&st.scalar_extend(2)?) && is_simple(&st.scalar_extend(3)?);
        ok &= abs;
        simple += abs as usize;
    }
    Ok(SuiteResult::new("steinberg", ok, format!("{tested} (V, Q) pairs agree; {simple} absolutely simple St_Q(1)")))
}

pub fn naturality_suite(rd: &Arc<RootDatum>, reports: &[ClassificationReport], tally: &mut Tally) -> Result<SuiteResult> {
    let mut ok = true;
    let mut n_ind = 0;
    let f2 = field(rd.p, 1)?;
    for v in sample_pairs(rd, &f2, 6)? {
        let a = induce(&v)?.carrier.scalar_extend(2)?;
        let b = induce(&v.scalar_extend(2)?)?.carrier;
        tally.note("extended induction", &b);
        ok &= find_isomorphism(&a, &b)?.is_some();
        n_ind += 1;
    }
    let mut n_tri = 0;
    for r in reports {
        for t in &r.triples {
            let t = &t.triple;
            let k2 = t.v.field().k() * 2;
            let a = t.i.scalar_extend(k2)?;
            let b = triple_module(t.p, &t.v.scalar_extend(k2)?, t.q)?.i;
            tally.note("extended triple", &b);
            ok &= find_isomorphism(&a, &b)?.is_some();
            n_tri += 1;
        }
    }
    Ok(SuiteResult::new("scalar extension", ok, format!("{n_ind} inductions, {n_tri} triples")))
}

/// Every suite on one preset; the relation gate is reported last.
pub fn verify_all(rd: &Arc<RootDatum>, seed: u64) -> Result<Vec<SuiteResult>> {
    verify_all_with(rd, seed, &mut Tally::default())
}

pub fn verify_all_with(rd: &Arc<RootDatum>, seed: u64, tally: &mut Tally) -> Result<Vec<SuiteResult>> {
    let mut out = vec![length_suite(rd, 6)?];
    let mut reports = Vec::new();
    for (k, bound) in classification_fields(rd) {
        reports.push(classify(rd, &field(rd.p, k)?, bound)?);
    }
    out.push(classification_suite(&reports, tally));
    out.push(supersingular_suite(&reports)?);
    out.push(lattice_suite(rd, &field(rd.p, 1)?, tally)?);
    out.push(decomposition_suite(rd, tally)?);
    out.push(eight_suite(rd, tally)?);
    out.push(adjunction_suite(rd, seed, tally)?);
    out.push(steinberg_suite(rd, tally)?);
    out.push(naturality_suite(rd, &reports, tally)?);
    let distinct: HashSet<String> = tally.failures.iter().cloned().collect();
    out.push(SuiteResult::new(
        "relations",
        tally.failures.is_empty(),
        format!("{} modules checked, {} failing", tally.modules, distinct.len()),
    ));
    Ok(out)
}
