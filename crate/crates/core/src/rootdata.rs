//! Based root data for the shipped presets, Levi subsets, and upper-set lattices.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::path::Path;
use std::sync::{Arc, Mutex, OnceLock};

use serde::Deserialize;

use crate::{Error, Result};

/// A subset of the simple roots, as a bitmask over their indices.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Subset(pub u32);

impl Subset {
    pub fn empty() -> Subset {
        Subset(0)
    }
    pub fn full(n: usize) -> Subset {
        Subset((1u32 << n) - 1)
    }
    pub fn single(i: usize) -> Subset {
        Subset(1 << i)
    }
    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }
    pub fn is_subset(self, o: Subset) -> bool {
        self.0 & !o.0 == 0
    }
    pub fn union(self, o: Subset) -> Subset {
        Subset(self.0 | o.0)
    }
    pub fn minus(self, o: Subset) -> Subset {
        Subset(self.0 & !o.0)
    }
    pub fn intersect(self, o: Subset) -> Subset {
        Subset(self.0 & o.0)
    }
    pub fn iter(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }
    /// All subsets of `self`, in increasing bitmask order.
    pub fn subsets(self) -> Vec<Subset> {
        (0..=self.0).filter(|&m| m & !self.0 == 0).map(Subset).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Root {
    /// in character coordinates
    pub vec: Vec<i64>,
    /// coroot, in cocharacter coordinates
    pub covec: Vec<i64>,
    /// coordinates in the simple roots
    pub coords: Vec<i64>,
    pub positive: bool,
}

impl Root {
    pub fn height(&self) -> i64 {
        self.coords.iter().sum()
    }
}

/// The finite Weyl group acting on the cocharacter lattice.
#[derive(Clone, Debug)]
pub struct FiniteWeyl {
    pub rank: usize,
    pub mats: Vec<Vec<i64>>,
    pub mul: Vec<Vec<u8>>,
    pub inv: Vec<u8>,
    /// reduced words in the simple reflections
    pub words: Vec<Vec<usize>>,
    /// `root_perm[w][r]` is the index of `w(root r)`
    pub root_perm: Vec<Vec<usize>>,
    pub simple_refl: Vec<u8>,
}

impl FiniteWeyl {
    pub fn order(&self) -> usize {
        self.mats.len()
    }

    pub fn act(&self, w: u8, lam: &[i64]) -> Vec<i64> {
        let m = &self.mats[w as usize];
        (0..self.rank).map(|i| (0..self.rank).map(|j| m[i * self.rank + j] * lam[j]).sum()).collect()
    }
}

#[derive(Deserialize)]
struct PresetFile {
    name: String,
    p: u32,
    k0: u32,
    lattice_rank: usize,
    c_s: i64,
    simple_roots: Vec<String>,
    root_vectors: Vec<Vec<i64>>,
    coroot_vectors: Vec<Vec<i64>>,
    pairing: Vec<Vec<i64>>,
    omega_action: Vec<Vec<String>>,
    #[serde(default)]
    central_seeds: BTreeMap<String, Vec<i64>>,
}

/// A based root datum with its cocharacter lattice and preset tables.
#[derive(Debug)]
pub struct RootDatum {
    pub name: String,
    pub p: u32,
    pub k0: u32,
    pub rank: usize,
    pub c_s: i64,
    pub labels: Vec<String>,
    /// positive roots first; the simple roots are `0..labels.len()`; `-roots[i] = roots[i + npos]`
    pub roots: Vec<Root>,
    pub npos: usize,
    pub pairing: Vec<Vec<i64>>,
    pub weyl: FiniteWeyl,
    /// declared images of the affine simple reflections under each length-zero generator
    pub omega_table: Vec<Vec<String>>,
    pub central_seeds: BTreeMap<Subset, Vec<i64>>,
}

const SHIPPED: &[(&str, &str)] = &[
    ("SL2_Q2", include_str!("../presets/SL2_Q2.toml")),
    ("GL2_Q2", include_str!("../presets/GL2_Q2.toml")),
    ("GL3_Q2", include_str!("../presets/GL3_Q2.toml")),
];

pub fn preset_names() -> Vec<&'static str> {
    SHIPPED.iter().map(|(n, _)| *n).collect()
}

/// Loads a shipped preset by name.
pub fn load_preset(name: &str) -> Result<Arc<RootDatum>> {
    static CACHE: OnceLock<Mutex<HashMap<String, Arc<RootDatum>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rd) = cache.lock().unwrap().get(name) {
        return Ok(rd.clone());
    }
    let (_, text) = SHIPPED
        .iter()
        .find(|(n, _)| *n == name)
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))?;
    let rd = Arc::new(parse_preset(text)?);
    cache.lock().unwrap().insert(name.to_string(), rd.clone());
    Ok(rd)
}

pub fn load_preset_file(path: &Path) -> Result<Arc<RootDatum>> {
    parse_preset(&std::fs::read_to_string(path)?).map(Arc::new)
}

pub fn parse_preset(text: &str) -> Result<RootDatum> {
    let pf: PresetFile = toml::from_str(text).map_err(|e| Error::Preset(e.to_string()))?;
    RootDatum::new(pf)
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

impl RootDatum {
    fn new(pf: PresetFile) -> Result<RootDatum> {
        let n = pf.simple_roots.len();
        let r = pf.lattice_rank;
        let bad = |m: String| Err(Error::Preset(format!("{}: {m}", pf.name)));
        if r == 0 || r > crate::affweyl::MAXR {
            return bad(format!("lattice rank {r} unsupported"));
        }
        if pf.root_vectors.len() != n || pf.coroot_vectors.len() != n {
            return bad("one root and coroot vector per simple root expected".into());
        }
        if pf.root_vectors.iter().chain(&pf.coroot_vectors).any(|v| v.len() != r) {
            return bad("vector length differs from the lattice rank".into());
        }
        for i in 0..n {
            for j in 0..n {
                let c = dot(&pf.coroot_vectors[i], &pf.root_vectors[j]);
                if pf.pairing.get(i).and_then(|row| row.get(j)) != Some(&c) {
                    return bad(format!("pairing entry ({i},{j}) should be {c}"));
                }
                if (i == j && c != 2) || (i != j && c > 0) {
                    return bad("pairing matrix is not a Cartan matrix".into());
                }
            }
        }
        // positive roots by closure under simple reflections
        let mut pos: Vec<Root> = (0..n)
            .map(|i| {
                let mut coords = vec![0; n];
                coords[i] = 1;
                Root { vec: pf.root_vectors[i].clone(), covec: pf.coroot_vectors[i].clone(), coords, positive: true }
            })
            .collect();
        let mut idx = 0;
        while idx < pos.len() {
            for i in 0..n {
                let b = pos[idx].clone();
                if b.coords.iter().enumerate().all(|(j, &c)| (j == i) == (c > 0) || c == 0) && b.coords[i] == 1 && b.height() == 1 {
                    continue; // s_i(alpha_i) is negative
                }
                let c = dot(&pf.coroot_vectors[i], &b.vec);
                let d = dot(&b.covec, &pf.root_vectors[i]);
                let vec: Vec<i64> = b.vec.iter().zip(&pf.root_vectors[i]).map(|(x, y)| x - c * y).collect();
                let covec: Vec<i64> = b.covec.iter().zip(&pf.coroot_vectors[i]).map(|(x, y)| x - d * y).collect();
                let mut coords = b.coords.clone();
                coords[i] -= c;
                if coords.iter().all(|&x| x >= 0) && !pos.iter().any(|q| q.coords == coords) {
                    pos.push(Root { vec, covec, coords, positive: true });
                }
            }
            idx += 1;
        }
        pos[n..].sort_by_key(|b| (b.height(), b.coords.iter().map(|&x| -x).collect::<Vec<_>>()));
        let npos = pos.len();
        let mut roots = pos.clone();
        for b in &pos {
            roots.push(Root {
                vec: b.vec.iter().map(|x| -x).collect(),
                covec: b.covec.iter().map(|x| -x).collect(),
                coords: b.coords.iter().map(|x| -x).collect(),
                positive: false,
            });
        }
        let weyl = build_weyl(r, &roots, n)?;
        let labels = pf.simple_roots.clone();
        let mut central_seeds = BTreeMap::new();
        for (key, v) in &pf.central_seeds {
            let mut s = Subset::empty();
            if key != "-" {
                for l in key.split(',') {
                    let i = labels.iter().position(|x| x == l.trim());
                    match i {
                        Some(i) => s = s.union(Subset::single(i)),
                        None => return bad(format!("unknown label '{l}' in central seeds")),
                    }
                }
            }
            if v.len() != r {
                return bad("central seed of wrong length".into());
            }
            central_seeds.insert(s, v.clone());
        }
        Ok(RootDatum {
            name: pf.name,
            p: pf.p,
            k0: pf.k0,
            rank: r,
            c_s: pf.c_s,
            labels,
            roots,
            npos,
            pairing: pf.pairing,
            weyl,
            omega_table: pf.omega_action,
            central_seeds,
        })
    }

    pub fn n_simple(&self) -> usize {
        self.labels.len()
    }

    pub fn delta(&self) -> Subset {
        Subset::full(self.n_simple())
    }

    /// `<lam, root>`.
    pub fn pair(&self, lam: &[i64], root: usize) -> i64 {
        dot(lam, &self.roots[root].vec)
    }

    pub fn neg_root(&self, r: usize) -> usize {
        if r < self.npos {
            r + self.npos
        } else {
            r - self.npos
        }
    }

    /// Whether a root lies in the span of `j`.
    pub fn root_in(&self, r: usize, j: Subset) -> bool {
        self.roots[r].coords.iter().enumerate().all(|(i, &c)| c == 0 || j.contains(i))
    }

    /// Positive roots of the Levi `j`.
    pub fn pos_roots(&self, j: Subset) -> Vec<usize> {
        (0..self.npos).filter(|&r| self.root_in(r, j)).collect()
    }

    /// Elements of the finite Weyl group of `j`.
    pub fn weyl_subgroup(&self, j: Subset) -> Vec<u8> {
        (0..self.weyl.order() as u8)
            .filter(|&w| self.weyl.words[w as usize].iter().all(|&i| j.contains(i)))
            .collect()
    }

    /// Length of a finite Weyl element relative to the positive roots of `j`.
    pub fn finite_length(&self, w: u8, j: Subset) -> usize {
        self.pos_roots(j).iter().filter(|&&r| !self.roots[self.weyl.root_perm[w as usize][r]].positive).count()
    }

    /// Longest element of the finite Weyl group of `j`.
    pub fn longest(&self, j: Subset) -> u8 {
        self.weyl_subgroup(j).into_iter().max_by_key(|&w| self.finite_length(w, j)).unwrap()
    }

    /// Image of `j` under the opposition involution of the ambient `k`.
    pub fn opposition_in(&self, k: Subset, j: Subset) -> Subset {
        let wk = self.longest(k);
        let mut out = Subset::empty();
        for i in j.iter() {
            let img = self.neg_root(self.weyl.root_perm[wk as usize][i]);
            assert!(img < self.n_simple(), "opposition must send simple roots to simple roots");
            out = out.union(Subset::single(img));
        }
        out
    }

    pub fn opposition(&self, j: Subset) -> Subset {
        self.opposition_in(self.delta(), j)
    }

    /// Irreducible components of `j`.
    pub fn components(&self, j: Subset) -> Vec<Subset> {
        let mut seen = Subset::empty();
        let mut out = Vec::new();
        for i in j.iter() {
            if seen.contains(i) {
                continue;
            }
            let mut comp = Subset::single(i);
            let mut queue = VecDeque::from([i]);
            while let Some(a) = queue.pop_front() {
                for b in j.iter() {
                    if !comp.contains(b) && self.pairing[a][b] != 0 {
                        comp = comp.union(Subset::single(b));
                        queue.push_back(b);
                    }
                }
            }
            seen = seen.union(comp);
            out.push(comp);
        }
        out
    }

    /// Highest root of an irreducible subset.
    pub fn highest_root(&self, comp: Subset) -> usize {
        self.pos_roots(comp).into_iter().max_by_key(|&r| self.roots[r].height()).unwrap()
    }

    /// Roots of `delta` orthogonal to every root of `j`.
    pub fn orthogonal(&self, j: Subset) -> Subset {
        let mut out = Subset::empty();
        for a in self.delta().minus(j).iter() {
            if j.iter().all(|b| self.pairing[a][b] == 0 && self.pairing[b][a] == 0) {
                out = out.union(Subset::single(a));
            }
        }
        out
    }

    pub fn subset_labels(&self, j: Subset) -> Vec<String> {
        j.iter().map(|i| self.labels[i].clone()).collect()
    }

    /// Sorted label list; `-` for the empty set.
    pub fn format_subset(&self, j: Subset) -> String {
        if j.is_empty() {
            "-".to_string()
        } else {
            self.subset_labels(j).join(",")
        }
    }

    pub fn parse_subset(&self, s: &str) -> Result<Subset> {
        let s = s.trim();
        let mut out = Subset::empty();
        if s == "-" || s.is_empty() {
            return Ok(out);
        }
        for l in s.split(',') {
            let i = self
                .labels
                .iter()
                .position(|x| x == l.trim())
                .ok_or_else(|| Error::Parse(format!("unknown simple root '{l}'")))?;
            out = out.union(Subset::single(i));
        }
        Ok(out)
    }
}

fn build_weyl(r: usize, roots: &[Root], n: usize) -> Result<FiniteWeyl> {
    // simple reflection on the lattice: lam -> lam - <lam, alpha_i> alpha_i^vee
    let refl: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut m = vec![0; r * r];
            for col in 0..r {
                let mut e = vec![0; r];
                e[col] = 1;
                let c = dot(&e, &roots[i].vec);
                for row in 0..r {
                    m[row * r + col] = e[row] - c * roots[i].covec[row];
                }
            }
            m
        })
        .collect();
    let matmul = |a: &[i64], b: &[i64]| -> Vec<i64> {
        let mut out = vec![0; r * r];
        for i in 0..r {
            for j in 0..r {
                out[i * r + j] = (0..r).map(|t| a[i * r + t] * b[t * r + j]).sum();
            }
        }
        out
    };
    let mut id = vec![0; r * r];
    for i in 0..r {
        id[i * r + i] = 1;
    }
    let mut mats = vec![id.clone()];
    let mut words: Vec<Vec<usize>> = vec![vec![]];
    let mut index: HashMap<Vec<i64>, usize> = HashMap::from([(id, 0)]);
    let mut head = 0;
    while head < mats.len() {
        for i in 0..n {
            let m = matmul(&mats[head], &refl[i]);
            if !index.contains_key(&m) {
                index.insert(m.clone(), mats.len());
                let mut w = words[head].clone();
                w.push(i);
                words.push(w);
                mats.push(m);
                if mats.len() > 255 {
                    return Err(Error::Preset("finite Weyl group too large".into()));
                }
            }
        }
        head += 1;
    }
    let ord = mats.len();
    let mut mul = vec![vec![0u8; ord]; ord];
    for a in 0..ord {
        for b in 0..ord {
            mul[a][b] = index[&matmul(&mats[a], &mats[b])] as u8;
        }
    }
    let inv: Vec<u8> = (0..ord).map(|a| (0..ord).find(|&b| mul[a][b] == 0).unwrap() as u8).collect();
    let root_perm = mats
        .iter()
        .map(|m| {
            roots
                .iter()
                .map(|b| {
                    let img: Vec<i64> = (0..r).map(|i| (0..r).map(|j| m[i * r + j] * b.covec[j]).sum()).collect();
                    roots.iter().position(|c| c.covec == img).expect("Weyl group permutes coroots")
                })
                .collect()
        })
        .collect();
    let simple_refl = (0..n).map(|i| index[&refl[i]] as u8).collect();
    Ok(FiniteWeyl { rank: r, mats, mul, inv, words, root_perm, simple_refl })
}

/// All upper sets of the power set of an `n`-element set.
#[derive(Clone, Debug)]
pub struct UpperSetLattice {
    pub n: usize,
    /// each element is a set of subsets of `0..n`, bit `m` standing for the subset with mask `m`
    pub elements: Vec<u32>,
}

pub fn upper_sets(n: usize) -> Result<UpperSetLattice> {
    if n > 4 {
        return Err(Error::SizeLimit(format!("upper sets of a {n}-element set")));
    }
    let m = 1usize << n;
    let mut elements = Vec::new();
    for fam in 0u64..(1u64 << m) {
        let ok = (0..m).all(|a| {
            fam >> a & 1 == 0 || (0..m).filter(|&b| b & a == a).all(|b| fam >> b & 1 == 1)
        });
        if ok {
            elements.push(fam as u32);
        }
    }
    Ok(UpperSetLattice { n, elements })
}

impl UpperSetLattice {
    pub fn len(&self) -> usize {
        self.elements.len()
    }
    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
    pub fn contains(&self, fam: u32) -> bool {
        self.elements.contains(&fam)
    }
}
