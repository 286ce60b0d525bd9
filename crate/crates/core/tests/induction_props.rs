use phecke::classify::enumerate_characters;
use phecke::ffield::field;
use phecke::heckealg::HeckeAlg;
use phecke::heckemod::{composition_series, find_proper_submodule, hom_space, is_isomorphic, iso_classes, submodule_lattice, HModule};
use phecke::matrix::Mat;
use phecke::parind::{delta_v, extend_e, induce, induce_to, p_of_v, recover_e, triple_module};
use phecke::rootdata::{load_preset, Subset};

const PRESETS: [&str; 3] = ["SL2_Q2", "GL2_Q2", "GL3_Q2"];

fn characters(preset: &str, k: u32) -> Vec<HModule> {
    let rd = load_preset(preset).unwrap();
    let f = field(2, k).unwrap();
    rd.delta().subsets().into_iter().flat_map(|j| enumerate_characters(&HeckeAlg::for_subset(&rd, j, &f).unwrap())).collect()
}

/// Largest rank reached by a few combinations of a basis of homomorphisms.
fn best_rank(maps: &[Mat]) -> usize {
    let mut best = maps.iter().map(Mat::rank).max().unwrap_or(0);
    for i in 0..maps.len() {
        for j in i + 1..maps.len() {
            best = best.max(maps[i].add(&maps[j]).rank());
        }
    }
    best
}

#[test]
fn induction_is_exact() {
    // short exact sequences inside a principal series of a proper Levi of GL3
    let rd = load_preset("GL3_Q2").unwrap();
    let f = field(2, 1).unwrap();
    let mut tested = 0;
    for k in rd.delta().subsets().into_iter().filter(|k| k.len() == 1) {
        let alg = HeckeAlg::for_subset(&rd, Subset::empty(), &f).unwrap();
        for v in enumerate_characters(&alg) {
            let x = induce_to(&v, k).unwrap().carrier;
            let Some(u) = find_proper_submodule(&x, 1) else { continue };
            let sub = x.submodule(&u);
            let (quo, _) = x.quotient(&u);
            let (ix, iu, iq) = (induce(&x).unwrap().carrier, induce(&sub).unwrap().carrier, induce(&quo).unwrap().carrier);
            assert_eq!(ix.dim, iu.dim + iq.dim);
            assert_eq!(best_rank(&hom_space(&iu, &ix).unwrap()), iu.dim);
            assert_eq!(best_rank(&hom_space(&ix, &iq).unwrap()), iq.dim);
            let mut fx = composition_series(&ix, 0);
            let mut parts = composition_series(&iu, 0);
            parts.extend(composition_series(&iq, 0));
            let n = fx.len();
            assert_eq!(n, parts.len());
            fx.extend(parts);
            let cl = iso_classes(&fx).unwrap();
            let (mut a, mut b) = (cl[..n].to_vec(), cl[n..].to_vec());
            a.sort();
            b.sort();
            assert_eq!(a, b);
            tested += 1;
        }
    }
    assert!(tested > 0);
}

#[test]
fn induction_is_transitive() {
    let rd = load_preset("GL3_Q2").unwrap();
    for k in [1, 2] {
        let f = field(2, k).unwrap();
        for j in rd.delta().subsets() {
            let alg = HeckeAlg::for_subset(&rd, j, &f).unwrap();
            for v in enumerate_characters(&alg).into_iter().take(6) {
                let direct = induce(&v).unwrap().carrier;
                for mid in rd.delta().subsets().into_iter().filter(|m| j.is_subset(*m)) {
                    let staged = induce(&induce_to(&v, mid).unwrap().carrier).unwrap().carrier;
                    assert!(is_isomorphic(&direct, &staged).unwrap());
                }
            }
        }
    }
}

#[test]
fn induction_commutes_with_scalar_extension() {
    for name in PRESETS {
        for v in characters(name, 1) {
            for k2 in [2, 3] {
                let a = induce(&v).unwrap().carrier.scalar_extend(k2).unwrap();
                let b = induce(&v.scalar_extend(k2).unwrap()).unwrap().carrier;
                assert!(is_isomorphic(&a, &b).unwrap());
            }
        }
    }
}

#[test]
fn induction_is_fully_faithful() {
    for name in PRESETS {
        let rd = load_preset(name).unwrap();
        let f = field(2, 2).unwrap();
        for j in rd.delta().subsets() {
            let cs = enumerate_characters(&HeckeAlg::for_subset(&rd, j, &f).unwrap());
            let cs: Vec<HModule> = cs.into_iter().take(6).collect();
            let ind: Vec<HModule> = cs.iter().map(|v| induce(v).unwrap().carrier).collect();
            for a in 0..cs.len() {
                for b in 0..cs.len() {
                    assert_eq!(hom_space(&cs[a], &cs[b]).unwrap().len(), hom_space(&ind[a], &ind[b]).unwrap().len());
                }
            }
        }
    }
}

/// `e(V) ⊗ Ind_P^{P(V)}(1)` with the diagonal `T*`-action.
fn tensor_with_trivial(v: &HModule) -> HModule {
    let rd = v.rd().clone();
    let pv = p_of_v(v);
    let e = extend_e(v, pv).unwrap();
    let one = HModule::trivial(&HeckeAlg::for_subset(&rd, v.alg.j(), v.field()).unwrap());
    let ind1 = induce_to(&one, pv).unwrap().carrier;
    let c = e.alg.c;
    let nc = e.field().neg(c);
    let gens = e.gens.iter().zip(&ind1.gens).map(|(a, b)| a.add_scalar(nc).kron(&b.add_scalar(nc)).add_scalar(c)).collect();
    let omega = e.omega.iter().zip(&ind1.omega).map(|(a, b)| a.kron(b)).collect();
    HModule::checked(&e.alg, gens, omega).unwrap()
}

#[test]
fn lattice_transports_from_the_trivial_character() {
    let mut nontrivial = 0;
    for name in PRESETS {
        for v in characters(name, 1) {
            if delta_v(&v).is_empty() {
                continue;
            }
            let t = tensor_with_trivial(&v);
            let ind = induce(&v).unwrap().carrier;
            let staged = induce(&t).unwrap().carrier;
            assert!(is_isomorphic(&ind, &staged).unwrap());
            let one = HModule::trivial(&HeckeAlg::for_subset(v.rd(), v.alg.j(), v.field()).unwrap());
            let ind1 = induce_to(&one, p_of_v(&v)).unwrap().carrier;
            if let (Ok(a), Ok(b)) = (submodule_lattice(&ind), submodule_lattice(&ind1)) {
                assert_eq!(a.len(), b.len());
                nontrivial += 1;
            }
        }
    }
    assert!(nontrivial > 0);
}

#[test]
fn extension_is_recovered_from_the_triple() {
    for name in PRESETS {
        for k in [1, 2] {
            for v in characters(name, k).into_iter().take(12) {
                let pv = p_of_v(&v);
                for q in pv.subsets().into_iter().filter(|q| v.alg.j().is_subset(*q)) {
                    let t = triple_module(v.alg.j(), &v, q).unwrap();
                    let e = recover_e(&t).unwrap();
                    assert!(is_isomorphic(&e, &t.e_v).unwrap());
                }
            }
        }
    }
}
