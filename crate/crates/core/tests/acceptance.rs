//! One line per acceptance criterion, each checked against oracles written here rather than
//! against the library's own verification code.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use phecke::affweyl::{AffElt, Levi};
use phecke::classify::{classify, decomposition_samples, enumerate_characters, verify_decomposition_theorem, ClassificationReport};
use phecke::ffield::{field, Fe, Field};
use phecke::heckealg::{Basis, HeckeAlg};
use phecke::heckemod::{find_isomorphism, is_supersingular_default, submodule_lattice, HModule};
use phecke::matrix::Mat;
use phecke::parind::{
    adjoint_l, adjoint_r, eight_inductions, induce, induce_variant, iota_module, other_basis, steinberg,
    steinberg_trivial, triple_module, twist_module, Side, Sign, Variant,
};
use phecke::rootdata::{load_preset, RootDatum, Subset};
use phecke::verify::{adjunction_suite, sample_pairs, steinberg_suite, verify_all_with, Tally};

const PRESETS: [&str; 3] = ["SL2_Q2", "GL2_Q2", "GL3_Q2"];

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

// ---- linear algebra and module oracles -------------------------------------------------

fn rank(f: &Field, mut rows: Vec<Vec<Fe>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][c] != 0) else { continue };
        rows.swap(r, piv);
        let inv = f.inv(rows[r][c]);
        let pr: Vec<Fe> = rows[r].iter().map(|&x| f.mul(x, inv)).collect();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let t = row[c];
                for (x, &y) in row.iter_mut().zip(&pr) {
                    *x = f.sub(*x, f.mul(t, y));
                }
            }
        }
        rows[r] = pr;
        r += 1;
    }
    r
}

fn actions(m: &HModule) -> Vec<&Mat> {
    m.gens.iter().chain(&m.omega).collect()
}

/// `dim Hom(a, b)` for right modules: `X` with `ρ_a(g) X = X ρ_b(g)`.
fn hom_dim(a: &HModule, b: &HModule) -> usize {
    let f = a.field();
    let (n, m) = (a.dim, b.dim);
    let unknowns = n * m;
    if unknowns == 0 {
        return 0;
    }
    let mut rows = Vec::new();
    for (ga, gb) in actions(a).into_iter().zip(actions(b)) {
        for i in 0..n {
            for j in 0..m {
                let mut row = vec![0; unknowns];
                for k in 0..n {
                    let v = ga.get(i, k);
                    row[k * m + j] = f.add(row[k * m + j], v);
                }
                for k in 0..m {
                    let v = gb.get(k, j);
                    row[i * m + k] = f.sub(row[i * m + k], v);
                }
                rows.push(row);
            }
        }
    }
    unknowns - rank(f, rows)
}

fn is_intertwiner(a: &HModule, b: &HModule, x: &Mat) -> bool {
    x.rows == a.dim
        && x.cols == b.dim
        && a.dim == b.dim
        && rank(a.field(), x.row_vecs()) == a.dim
        && actions(a).into_iter().zip(actions(b)).all(|(ga, gb)| ga.mul(x) == x.mul(gb))
}

fn verified_iso(a: &HModule, b: &HModule) -> bool {
    find_isomorphism(a, b).ok().flatten().is_some_and(|x| is_intertwiner(a, b, &x))
}

fn order(rd: &RootDatum, a: &AffElt, b: &AffElt) -> Option<usize> {
    let x = rd.mul(a, b);
    let mut y = x;
    for m in 1..=12 {
        if y == AffElt::identity() {
            return Some(m);
        }
        y = rd.mul(&y, &x);
    }
    None
}

/// Quadratic, braid and length-zero relations, with orders and conjugates computed in the group.
fn relation_errors(m: &HModule) -> Vec<String> {
    let lv = &m.alg.levi;
    let rd = m.rd();
    let f = m.field();
    let c = f.from_int(rd.c_s);
    let mut out = Vec::new();
    if m.gens.len() != lv.gens.len() || m.omega.len() != lv.omega.len() {
        return vec!["wrong number of generators".into()];
    }
    let id = Mat::identity(f, m.dim);
    for (i, g) in m.gens.iter().enumerate() {
        if g.mul(g) != g.scale(c) {
            out.push(format!("quadratic {i}"));
        }
    }
    for i in 0..lv.gens.len() {
        for j in i + 1..lv.gens.len() {
            if let Some(k) = order(rd, &lv.gens[i], &lv.gens[j]) {
                let (mut x, mut y) = (id.clone(), id.clone());
                for t in 0..k {
                    x = x.mul(&m.gens[if t % 2 == 0 { i } else { j }]);
                    y = y.mul(&m.gens[if t % 2 == 0 { j } else { i }]);
                }
                if x != y {
                    out.push(format!("braid {i} {j}"));
                }
            }
        }
    }
    for (k, u) in lv.omega.iter().enumerate() {
        if m.omega[k].mul(&m.omega_inv[k]) != id {
            out.push(format!("inverse {k}"));
        }
        let ui = rd.inv(u);
        for (i, s) in lv.gens.iter().enumerate() {
            let conj = rd.mul(&rd.mul(&ui, s), u);
            match lv.gens.iter().position(|g| *g == conj) {
                Some(j) => {
                    if m.omega_inv[k].mul(&m.gens[i]).mul(&m.omega[k]) != m.gens[j] {
                        out.push(format!("conjugation {k} {i}"));
                    }
                }
                None => out.push(format!("conjugate of generator {i} is not a generator")),
            }
        }
        for (l, v) in lv.omega.iter().enumerate() {
            if rd.mul(u, v) == rd.mul(v, u) && m.omega[k].mul(&m.omega[l]) != m.omega[l].mul(&m.omega[k]) {
                out.push(format!("commutation {k} {l}"));
            }
        }
        let mut p = *u;
        for e in 1..=12u64 {
            if p == AffElt::identity() {
                if m.omega[k].pow(e) != id {
                    out.push(format!("order {k}"));
                }
                break;
            }
            p = rd.mul(&p, u);
        }
    }
    out
}

fn all_mats(f: &Arc<Field>, n: usize) -> Vec<Mat> {
    let q = f.order() as usize;
    let total = q.pow((n * n) as u32);
    (0..total)
        .map(|mut code| {
            let mut m = Mat::zeros(f, n, n);
            for i in 0..n * n {
                m.set(i / n, i % n, (code % q) as Fe);
                code /= q;
            }
            m
        })
        .collect()
}

/// Whether some line is stable under every given matrix.
fn has_stable_line(f: &Field, n: usize, mats: &[&Mat]) -> bool {
    let q = f.order() as usize;
    for code in 1..q.pow(n as u32) {
        let mut v = vec![0 as Fe; n];
        let mut c = code;
        for x in v.iter_mut() {
            *x = (c % q) as Fe;
            c /= q;
        }
        // normalise so the first nonzero entry is 1
        let lead = *v.iter().find(|&&x| x != 0).unwrap();
        if lead != 1 {
            continue;
        }
        let stable = mats.iter().all(|m| {
            let w = phecke::matrix::vec_mat(&v, m);
            let mut rows = vec![v.clone(), w];
            rows.truncate(2);
            rank(f, rows) == 1
        });
        if stable {
            return true;
        }
    }
    false
}

// ---- criteria --------------------------------------------------------------------------

fn relation_gate() -> Outcome {
    let mut kept = 0;
    let mut bad = Vec::new();
    let mut suites = 0;
    for name in PRESETS {
        let rd = load_preset(name).map_err(err)?;
        let mut tally = Tally { keep: true, ..Default::default() };
        let res = verify_all_with(&rd, 1, &mut tally).map_err(err)?;
        let gate = res.iter().find(|s| s.name == "relations").ok_or("no relation suite")?;
        ensure(gate.passed, || format!("{name}: {}", gate.detail))?;
        suites += res.len();
        for (what, m) in &tally.kept {
            let e = relation_errors(m);
            if !e.is_empty() {
                bad.push(format!("{name} {what}: {}", e.join(", ")));
            }
        }
        kept += tally.kept.len();
    }
    ensure(bad.is_empty(), || bad[..bad.len().min(3)].join("; "))?;
    ensure(kept >= 50, || format!("only {kept} modules"))?;
    Ok(format!("{kept} modules from {suites} suite runs satisfy every relation"))
}

fn lengths() -> Outcome {
    let mut sizes = Vec::new();
    for name in PRESETS {
        let rd = load_preset(name).map_err(err)?;
        let lv = Levi::full(&rd).map_err(err)?;
        let radius = 6;
        let bound = 20;
        let no = lv.omega.len();
        let mut dist: HashMap<AffElt, usize> = HashMap::new();
        let mut dq = VecDeque::new();
        dist.insert(AffElt::identity(), 0);
        dq.push_back((AffElt::identity(), 0usize, vec![0i64; no]));
        while let Some((x, d, ex)) = dq.pop_front() {
            if dist[&x] < d {
                continue;
            }
            for k in 0..no {
                for sgn in [1i64, -1] {
                    if (ex[k] + sgn).abs() > bound {
                        continue;
                    }
                    let u = if sgn == 1 { lv.omega[k] } else { rd.inv(&lv.omega[k]) };
                    let y = rd.mul(&x, &u);
                    if dist.get(&y).is_none_or(|&e| e > d) {
                        let mut ey = ex.clone();
                        ey[k] += sgn;
                        dist.insert(y, d);
                        dq.push_front((y, d, ey));
                    }
                }
            }
            if d < radius {
                for s in &lv.gens {
                    let y = rd.mul(&x, s);
                    if !dist.contains_key(&y) {
                        dist.insert(y, d + 1);
                        dq.push_back((y, d + 1, ex.clone()));
                    }
                }
            }
        }
        let bad = dist.iter().filter(|(x, &d)| lv.length(x) != d).count();
        ensure(bad == 0, || format!("{name}: {bad} of {} lengths differ", dist.len()))?;
        sizes.push(format!("{name} {}", dist.len()));
    }
    Ok(format!("formula equals Cayley distance on {}", sizes.join(", ")))
}

/// Isomorphism classes of simple modules of dimension `n` found by exhaustive search.
fn brute_force_simples(rd: &Arc<RootDatum>, f: &Arc<Field>, n: usize) -> usize {
    let alg = HeckeAlg::for_subset(rd, rd.delta(), f).unwrap();
    let c = f.from_int(rd.c_s);
    let all = all_mats(f, n);
    let quad: Vec<&Mat> = all.iter().filter(|m| m.mul(m) == m.scale(c)).collect();
    let inv: Vec<(&Mat, Mat)> = all.iter().filter_map(|m| m.inverse().map(|i| (m, i))).collect();
    let ng = alg.levi.gens.len();
    let no = alg.levi.omega.len();
    let mut keys: HashSet<Vec<Fe>> = HashSet::new();
    let mut gi = vec![0usize; ng];
    let mut oi = vec![0usize; no];
    'outer: loop {
        let gens: Vec<Mat> = gi.iter().map(|&i| quad[i].clone()).collect();
        let omega: Vec<Mat> = oi.iter().map(|&i| inv[i].0.clone()).collect();
        let m = HModule { alg: alg.clone(), dim: n, gens, omega, omega_inv: oi.iter().map(|&i| inv[i].1.clone()).collect() };
        if relation_errors(&m).is_empty() && !has_stable_line(f, n, &actions(&m)) || n == 1 && relation_errors(&m).is_empty() {
            let key = inv
                .iter()
                .map(|(p, pi)| actions(&m).iter().flat_map(|g| pi.mul(g).mul(p).data).collect::<Vec<Fe>>())
                .min()
                .unwrap();
            keys.insert(key);
        }
        // odometer over generator and length-zero images
        for i in 0..ng + no {
            let (slot, lim) = if i < ng { (&mut gi[i], quad.len()) } else { (&mut oi[i - ng], inv.len()) };
            *slot += 1;
            if *slot < lim {
                continue 'outer;
            }
            *slot = 0;
        }
        break;
    }
    keys.len()
}

fn classification(reports: &mut Vec<(String, u32, ClassificationReport)>) -> Outcome {
    let mut summary = Vec::new();
    for (name, k) in [("SL2_Q2", 1), ("SL2_Q2", 2), ("GL2_Q2", 1), ("GL2_Q2", 2)] {
        let rd = load_preset(name).map_err(err)?;
        let f = field(2, k).map_err(err)?;
        let rep = classify(&rd, &f, 4).map_err(err)?;
        ensure(rep.is_ok(), || format!("{name} F_{}: {:?}", f.order(), rep.failures))?;
        let mut hit = BTreeSet::new();
        for s in &rep.simples {
            ensure(s.matches.len() == 1, || format!("{name}: a simple module has {} labels", s.matches.len()))?;
            ensure(hit.insert(s.matches[0]), || format!("{name}: a label is shared"))?;
        }
        ensure(hit.len() == rep.triples.len(), || format!("{name}: unused labels"))?;
        if !(name == "GL2_Q2" && k == 2) {
            for n in [1, 2] {
                let brute = brute_force_simples(&rd, &f, n);
                let listed = rep.simples.iter().filter(|s| s.module.dim == n).count();
                ensure(brute == listed, || format!("{name} F_{} dim {n}: {listed} listed, {brute} by search", f.order()))?;
            }
            let chars = brute_force_simples(&rd, &f, 1);
            ensure(chars == rep.characters.len(), || format!("{name}: character count"))?;
        }
        summary.push(format!("{name}/F_{} {}", f.order(), rep.simples.len()));
        reports.push((name.to_string(), k, rep));
    }
    let sl2 = |k: u32| reports.iter().find(|(n, kk, _)| n == "SL2_Q2" && *kk == k).map(|r| &r.2).unwrap();
    ensure(sl2(1).simples.len() == 5 && sl2(2).simples.len() == 12, || "SL2 simple counts".into())?;
    ensure(sl2(1).characters.len() == 4 && sl2(1).characters.iter().filter(|c| c.supersingular).count() == 2, || {
        "SL2 character counts".into()
    })?;
    Ok(format!("simples {}, unique labels, exhaustive search agrees in dims 1 and 2", summary.join(", ")))
}

/// Characters are supersingular exactly when no component of the affine diagram is constant.
fn character_oracle(m: &HModule) -> bool {
    let lv = &m.alg.levi;
    let rd = m.rd();
    let n = lv.gens.len();
    let mut comp: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..n {
            if i != j && order(rd, &lv.gens[i], &lv.gens[j]) != Some(2) {
                let (a, b) = (comp[i], comp[j]);
                for x in comp.iter_mut() {
                    if *x == b {
                        *x = a;
                    }
                }
            }
        }
    }
    let roots: BTreeSet<usize> = comp.iter().copied().collect();
    roots.iter().all(|&r| {
        let vals: BTreeSet<Fe> = (0..n).filter(|&i| comp[i] == r).map(|i| m.gens[i].get(0, 0)).collect();
        vals.len() > 1
    })
}

fn supersingularity(reports: &[(String, u32, ClassificationReport)]) -> Outcome {
    let mut n = 0;
    for (name, k, rep) in reports {
        ensure(rep.supersingular_consistent(), || format!("{name} F_2^{k}: flags disagree with triples"))?;
        for c in &rep.characters {
            ensure(c.supersingular == character_oracle(&c.module), || format!("{name}: character flag"))?;
            if *k == 1 {
                let ext = c.module.scalar_extend(2).map_err(err)?;
                ensure(is_supersingular_default(&ext).map_err(err)? == c.supersingular, || format!("{name}: flag changes over F_4"))?;
            }
            n += 1;
        }
    }
    Ok(format!("{n} characters agree with the diagram test and are stable under F_2 to F_4"))
}

fn subspace_closure(n: usize, mats: &[&Mat], mut s: HashSet<u64>) -> HashSet<u64> {
    let apply = |v: u64, m: &Mat| -> u64 {
        let mut w = 0u64;
        for i in 0..n {
            if v >> i & 1 == 1 {
                for j in 0..n {
                    if m.get(i, j) != 0 {
                        w ^= 1 << j;
                    }
                }
            }
        }
        w
    };
    loop {
        let mut next = s.clone();
        let cur: Vec<u64> = s.iter().copied().collect();
        for &a in &cur {
            for m in mats {
                next.insert(apply(a, m));
            }
            for &b in &cur {
                next.insert(a ^ b);
            }
        }
        if next.len() == s.len() {
            return s;
        }
        s = next;
    }
}

/// Submodules of a module over `F_2`, each as its set of vectors.
fn f2_submodules(m: &HModule) -> Vec<BTreeSet<u64>> {
    let n = m.dim;
    let mats: Vec<&Mat> = m.gens.iter().chain(&m.omega).chain(&m.omega_inv).collect();
    let mut subs: HashSet<BTreeSet<u64>> = HashSet::new();
    subs.insert([0].into());
    for v in 1..1u64 << n {
        subs.insert(subspace_closure(n, &mats, [0, v].into()).into_iter().collect());
    }
    loop {
        let cur: Vec<BTreeSet<u64>> = subs.iter().cloned().collect();
        let mut grew = false;
        for a in &cur {
            for b in &cur {
                let s: HashSet<u64> = a.iter().chain(b).copied().collect();
                if subs.insert(subspace_closure(n, &mats, s).into_iter().collect()) {
                    grew = true;
                }
            }
        }
        if !grew {
            return cur;
        }
    }
}

fn upper_set_poset(n: usize) -> Vec<u32> {
    let sets = 1usize << n;
    (0..1u32 << sets)
        .filter(|&fam| (0..sets).all(|a| fam >> a & 1 == 0 || (0..sets).all(|b| b & a != a || fam >> b & 1 == 1)))
        .collect()
}

fn posets_isomorphic(a: &[Vec<bool>], b: &[Vec<bool>]) -> bool {
    fn go(a: &[Vec<bool>], b: &[Vec<bool>], perm: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
        let i = perm.len();
        if i == a.len() {
            return true;
        }
        for j in 0..a.len() {
            if used[j] || (0..i).any(|k| a[i][k] != b[j][perm[k]] || a[k][i] != b[perm[k]][j]) || a[i][i] != b[j][j] {
                continue;
            }
            used[j] = true;
            perm.push(j);
            if go(a, b, perm, used) {
                return true;
            }
            perm.pop();
            used[j] = false;
        }
        false
    }
    a.len() == b.len() && go(a, b, &mut Vec::new(), &mut vec![false; a.len()])
}

fn lattice() -> Outcome {
    let mut out = Vec::new();
    for (name, want) in [("SL2_Q2", (2, 3)), ("GL2_Q2", (2, 3)), ("GL3_Q2", (4, 6))] {
        let rd = load_preset(name).map_err(err)?;
        let f = field(2, 1).map_err(err)?;
        let triv = HModule::trivial(&HeckeAlg::for_subset(&rd, Subset::empty(), &f).map_err(err)?);
        let ind = induce(&triv).map_err(err)?.carrier;
        let lat = submodule_lattice(&ind).map_err(err)?;
        ensure(lat.factors.len() == want.0 && lat.len() == want.1, || format!("{name}: {} factors, {} nodes", lat.factors.len(), lat.len()))?;
        let entry = phecke::classify::check_lattice(&triv).map_err(err)?;
        ensure(entry.order_isomorphic, || format!("{name}: library lattice check"))?;
        let subs = f2_submodules(&ind);
        let x = rd.delta().len();
        let ups = upper_set_poset(x);
        ensure(subs.len() == ups.len() && subs.len() == lat.len(), || format!("{name}: {} submodules, {} upper sets", subs.len(), ups.len()))?;
        let pa: Vec<Vec<bool>> = subs.iter().map(|a| subs.iter().map(|b| a.is_subset(b)).collect()).collect();
        let pb: Vec<Vec<bool>> = ups.iter().map(|&a| ups.iter().map(|&b| a & !b == 0).collect()).collect();
        ensure(posets_isomorphic(&pa, &pb), || format!("{name}: orders differ"))?;
        // every factor occurs once
        let classes = phecke::heckemod::iso_classes(&lat.factors).map_err(err)?;
        ensure(classes.iter().collect::<BTreeSet<_>>().len() == classes.len(), || format!("{name}: repeated factor"))?;
        out.push(format!("{name} {}", subs.len()));
    }
    Ok(format!("submodules of Ind_B(1) match upper sets: {}", out.join(", ")))
}

fn decomposition() -> Outcome {
    let mut degrees = BTreeSet::new();
    let mut n = 0;
    for name in ["GL2_Q2", "GL3_Q2"] {
        let rd = load_preset(name).map_err(err)?;
        let f = field(2, 1).map_err(err)?;
        let samples = decomposition_samples(&rd, &f).map_err(err)?;
        let rep = verify_decomposition_theorem(&samples).map_err(err)?;
        ensure(rep.failures.is_empty(), || rep.failures.join("; "))?;
        for ((label, m), entry) in samples.iter().zip(&rep.entries) {
            let e = m.dim;
            ensure(entry.degree == e, || format!("{label}: degree {} for dim {e}", entry.degree))?;
            ensure(e == 1 || !has_stable_line(&f, e, &actions(m)), || format!("{label}: reducible"))?;
            let big = m.scalar_extend(e as u32).map_err(err)?;
            let bf = big.field().clone();
            let q = bf.order() as usize;
            let mut chars = BTreeSet::new();
            let mut eigen = Vec::new();
            for code in 1..q.pow(e as u32) {
                let mut v = vec![0 as Fe; e];
                let mut c = code;
                for x in v.iter_mut() {
                    *x = (c % q) as Fe;
                    c /= q;
                }
                let mut vals = Vec::new();
                let common = actions(&big).iter().all(|g| {
                    let w = phecke::matrix::vec_mat(&v, g);
                    let i = v.iter().position(|&x| x != 0).unwrap();
                    let lam = bf.mul(w[i], bf.inv(v[i]));
                    vals.push(lam);
                    w.iter().zip(&v).all(|(&a, &b)| a == bf.mul(lam, b))
                });
                if common {
                    chars.insert(vals);
                    eigen.push(v);
                }
            }
            ensure(chars.len() == e && rank(&bf, eigen) == e, || format!("{label}: {} eigencharacters", chars.len()))?;
            degrees.insert(e);
            n += 1;
        }
    }
    ensure(degrees == BTreeSet::from([1, 2, 3]), || format!("degrees {degrees:?}"))?;
    Ok(format!("{n} modules split into distinct conjugate characters, degrees {{1, 2, 3}}"))
}

fn eight() -> Outcome {
    let mut total = 0;
    let mut pairs = 0;
    for name in PRESETS {
        let rd = load_preset(name).map_err(err)?;
        let f = field(2, 2).map_err(err)?;
        let k = rd.delta();
        let kalg = HeckeAlg::for_subset(&rd, k, &f).map_err(err)?;
        let vs = sample_pairs(&rd, &f, 5).map_err(err)?;
        ensure(vs.len() >= 5, || format!("{name}: {} pairs", vs.len()))?;
        for v in &vs {
            let rep = eight_inductions(v, k).map_err(err)?;
            let ind = |m: &HModule, side, eps, eta| induce_variant(&kalg, m, Variant { side, eps, eta }).map(|x| x.carrier).map_err(err);
            let io = |m: &HModule| iota_module(m, k).map_err(err);
            let tw = twist_module(v, k).map_err(err)?;
            let vi = io(v)?;
            let vd = v.dual();
            let mut expected = Vec::new();
            for eps in [Sign::Plus, Sign::Minus] {
                for eta in [Basis::T, Basis::TStar] {
                    let (t, h) = (Side::Tensor, Side::Hom);
                    let oe = other_basis(eta);
                    expected.push((ind(v, t, eps, eta)?, ind(&tw, t, eps.flip(), eta)?));
                    expected.push((ind(v, h, eps, eta)?, ind(&tw, h, eps.flip(), eta)?));
                    expected.push((io(&ind(v, t, eps, eta)?)?, ind(&vi, t, eps, oe)?));
                    expected.push((io(&ind(v, h, eps, eta)?)?, ind(&vi, h, eps, oe)?));
                    expected.push((io(&ind(v, t, eps, eta)?)?, ind(&vi, h, eps, eta)?));
                    expected.push((ind(v, t, eps, eta)?, ind(v, h, eps, oe)?));
                    expected.push((ind(v, t, eps, eta)?.dual(), ind(&vd, h, eps.flip(), eta)?));
                    expected.push((ind(&vd, t, eps, eta)?, ind(v, h, eps.flip(), eta)?.dual()));
                }
            }
            ensure(expected.len() == rep.checks.len(), || "check count".into())?;
            for ((a, b), c) in expected.iter().zip(&rep.checks) {
                let x = c.intertwiner.as_ref().ok_or_else(|| format!("{name}: {} fails", c.tag))?;
                ensure(is_intertwiner(a, b, x), || format!("{name}: {} witness does not intertwine", c.tag))?;
                total += 1;
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} pairs, {total} isomorphisms with checked witnesses"))
}

fn adjunctions() -> Outcome {
    let mut n = 0;
    for name in PRESETS {
        let rd = load_preset(name).map_err(err)?;
        let mut tally = Tally::default();
        let s = adjunction_suite(&rd, 11, &mut tally).map_err(err)?;
        ensure(s.passed, || format!("{name}: {}", s.detail))?;
        let f = field(2, 2).map_err(err)?;
        let levis: Vec<Subset> = rd.delta().subsets();
        let mut tops = Vec::new();
        for &j in &levis {
            for v in enumerate_characters(&HeckeAlg::for_subset(&rd, j, &f).map_err(err)?).into_iter().take(2) {
                tops.push(induce(&v).map_err(err)?.carrier);
            }
        }
        for &j in levis.iter().filter(|&&j| j != rd.delta()) {
            for v in enumerate_characters(&HeckeAlg::for_subset(&rd, j, &f).map_err(err)?).into_iter().take(3) {
                let ind = induce(&v).map_err(err)?.carrier;
                for x in &tops {
                    let r = adjoint_r(x, j).map_err(err)?;
                    let l = adjoint_l(x, j).map_err(err)?;
                    let right = r.as_ref().map_or(0, |r| hom_dim(&v, r));
                    let left = l.as_ref().map_or(0, |l| hom_dim(l, &v));
                    ensure(hom_dim(&ind, x) == right, || format!("{name}: Hom(Ind V, X) differs from Hom(V, R X)"))?;
                    ensure(hom_dim(x, &ind) == left, || format!("{name}: Hom(X, Ind V) differs from Hom(L X, V)"))?;
                    n += 1;
                }
                let unit = adjoint_l(&ind, j).map_err(err)?.ok_or("L(Ind V) vanishes")?;
                ensure(verified_iso(&unit, &v), || format!("{name}: L(Ind V) is not V"))?;
            }
        }
    }
    Ok(format!("{n} pairs satisfy both adjunctions, units are isomorphisms"))
}

fn steinbergs() -> Outcome {
    let mut n = 0;
    for name in PRESETS {
        let rd = load_preset(name).map_err(err)?;
        let mut tally = Tally::default();
        let s = steinberg_suite(&rd, &mut tally).map_err(err)?;
        ensure(s.passed, || format!("{name}: {}", s.detail))?;
        let w0 = rd.weyl.words.len();
        let descents = |w: u8| -> Subset {
            let x = rd.finite(w);
            rd.delta().iter().filter(|&i| rd.length(&rd.mul(&rd.finite(rd.weyl.simple_refl[i]), &x)) < rd.length(&x)).fold(Subset::empty(), |a, i| a.union(Subset::single(i)))
        };
        let f2 = field(2, 1).map_err(err)?;
        let mut sts = Vec::new();
        let mut total = 0;
        for q in rd.delta().subsets() {
            let st = steinberg_trivial(&rd, &f2, q, rd.delta()).map_err(err)?;
            let want = (0..w0).filter(|&w| descents(w as u8) == rd.delta().minus(q)).count();
            ensure(st.dim == want, || format!("{name}: St has dim {} for {}, expected {want}", st.dim, rd.format_subset(q)))?;
            for k in [1, 2, 3] {
                let ext = st.scalar_extend(k).map_err(err)?;
                ensure(st.dim <= 1 || st.dim == 2 && !has_stable_line(ext.field(), 2, &actions(&ext)), || format!("{name}: St not absolutely simple"))?;
            }
            total += st.dim;
            sts.push(st);
        }
        ensure(total == w0, || format!("{name}: dimensions sum to {total}"))?;
        for a in 0..sts.len() {
            for b in 0..sts.len() {
                ensure((a == b) == (sts[a].dim == sts[b].dim && hom_dim(&sts[a], &sts[b]) > 0), || format!("{name}: Steinberg modules collide"))?;
            }
        }
        // both constructions for a non-trivial character
        let f4 = field(2, 2).map_err(err)?;
        for p in rd.delta().subsets() {
            for v in enumerate_characters(&HeckeAlg::for_subset(&rd, p, &f4).map_err(err)?).into_iter().take(3) {
                let pv = phecke::parind::p_of_v(&v);
                for q in pv.subsets().into_iter().filter(|q| p.is_subset(*q)) {
                    let a = steinberg(&v, q, pv).map_err(err)?;
                    let b = phecke::parind::steinberg_tensor(&v, q, pv).map_err(err)?;
                    ensure(verified_iso(&a, &b), || format!("{name}: constructions differ"))?;
                    n += 1;
                }
            }
        }
    }
    Ok(format!("{n} (V, Q) pairs agree, St_Q(1) dimensions match descent counts"))
}

fn naturality(reports: &[(String, u32, ClassificationReport)]) -> Outcome {
    let mut n = 0;
    for (_, _, rep) in reports {
        for t in &rep.triples {
            let t = &t.triple;
            let k2 = t.v.field().k() * 2;
            let a = t.i.scalar_extend(k2).map_err(err)?;
            let b = triple_module(t.p, &t.v.scalar_extend(k2).map_err(err)?, t.q).map_err(err)?.i;
            ensure(verified_iso(&a, &b), || format!("{}: triple does not commute with extension", rep.preset))?;
            n += 1;
        }
    }
    let mut m = 0;
    for name in PRESETS {
        let rd = load_preset(name).map_err(err)?;
        for v in sample_pairs(&rd, &field(2, 1).map_err(err)?, 6).map_err(err)? {
            let a = induce(&v).map_err(err)?.carrier.scalar_extend(3).map_err(err)?;
            let b = induce(&v.scalar_extend(3).map_err(err)?).map_err(err)?.carrier;
            ensure(verified_iso(&a, &b), || format!("{name}: induction does not commute with extension"))?;
            m += 1;
        }
    }
    Ok(format!("{n} triples and {m} inductions commute with scalar extension"))
}

fn main() {
    let mut reports = Vec::new();
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    let mut run = |n: usize, name: &'static str, f: &mut dyn FnMut() -> Outcome| {
        let r = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        match &r {
            Ok(d) => println!("PASS criterion {n} ({name}): {d}"),
            Err(d) => println!("FAIL criterion {n} ({name}): {d}"),
        }
        results.push((n, name, r));
    };
    run(1, "relations", &mut relation_gate);
    run(2, "lengths", &mut lengths);
    run(3, "classification", &mut || classification(&mut reports));
    run(4, "supersingularity", &mut || supersingularity(&reports));
    run(5, "submodule lattice", &mut lattice);
    run(6, "scalar extension", &mut decomposition);
    run(7, "eight inductions", &mut eight);
    run(8, "adjunctions", &mut adjunctions);
    run(9, "Steinberg modules", &mut steinbergs);
    run(10, "naturality", &mut || naturality(&reports));
    let failed = results.iter().filter(|r| r.2.is_err()).count();
    println!("{} of {} criteria pass", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
