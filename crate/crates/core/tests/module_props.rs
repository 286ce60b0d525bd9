
use phecke::classify::enumerate_characters;
use phecke::ffield::field;
use phecke::heckealg::HeckeAlg;
use phecke::heckemod::{
    composition_series, decompose_extension, hom_space, is_isomorphic, is_simple, is_supersingular_default, iso_classes, submodule_lattice,
    HModule,
};
use phecke::parind::induce;
use phecke::rootdata::load_preset;
use proptest::prelude::*;

const PRESETS: [&str; 3] = ["SL2_Q2", "GL2_Q2", "GL3_Q2"];

/// Characters of every Levi, together with their inductions to the whole group.
fn pool(preset: &str, k: u32) -> (Vec<HModule>, Vec<HModule>) {
    let rd = load_preset(preset).unwrap();
    let f = field(2, k).unwrap();
    let mut chars = Vec::new();
    let mut ind = Vec::new();
    for j in rd.delta().subsets() {
        let alg = HeckeAlg::for_subset(&rd, j, &f).unwrap();
        for v in enumerate_characters(&alg) {
            ind.push(induce(&v).unwrap().carrier);
            chars.push(v);
        }
    }
    (chars, ind)
}

fn factor_classes(ms: &[HModule]) -> Vec<usize> {
    let mut c = iso_classes(ms).unwrap();
    c.sort();
    c
}

#[test]
fn composition_factors_do_not_depend_on_the_seed() {
    for name in PRESETS {
        let (_, ind) = pool(name, 1);
        for m in ind.iter().filter(|m| m.dim > 1).take(6) {
            let base = composition_series(m, 0);
            assert_eq!(base.iter().map(|x| x.dim).sum::<usize>(), m.dim);
            assert!(base.iter().all(is_simple));
            for seed in 1..20 {
                let other = composition_series(m, seed);
                assert_eq!(other.len(), base.len());
                let mut all = base.clone();
                all.extend(other.iter().cloned());
                let classes = iso_classes(&all).unwrap();
                let (a, b) = classes.split_at(base.len());
                let (mut a, mut b) = (a.to_vec(), b.to_vec());
                a.sort();
                b.sort();
                assert_eq!(a, b);
            }
        }
    }
}

#[test]
fn hom_dimensions_survive_duality() {
    for name in PRESETS {
        let (_, ind) = pool(name, 1);
        let ms: Vec<&HModule> = ind.iter().take(8).collect();
        for a in &ms {
            for b in &ms {
                let d1 = hom_space(a, b).unwrap().len();
                let d2 = hom_space(&b.dual(), &a.dual()).unwrap().len();
                assert_eq!(d1, d2);
                assert!(is_isomorphic(&a.dual().dual(), a).unwrap());
            }
        }
    }
}

#[test]
fn extensions_split_into_conjugate_pieces() {
    for name in ["SL2_Q2", "GL2_Q2"] {
        let (_, ind) = pool(name, 1);
        let mut seen = 0;
        for m in &ind {
            for s in composition_series(m, 3) {
                for k2 in [2, 4] {
                    let rep = decompose_extension(&s, k2).unwrap();
                    assert_eq!(rep.factors.iter().map(|x| x.dim).sum::<usize>(), s.dim);
                    if rep.ok() {
                        assert_eq!(rep.factors.len(), rep.degree);
                        let mut classes = factor_classes(&rep.factors);
                        classes.dedup();
                        assert_eq!(classes.len(), rep.degree);
                        seen += 1;
                    }
                }
            }
        }
        assert!(seen > 0);
    }
}

#[test]
fn lattices_satisfy_the_axioms() {
    for name in PRESETS {
        let (_, ind) = pool(name, 1);
        for m in ind.iter().take(10) {
            if let Ok(lat) = submodule_lattice(m) {
                assert!(lat.check_axioms());
                assert!(lat.len() >= 2);
                assert_eq!(lat.nodes.iter().map(|e| e.dim()).max(), Some(m.dim));
                assert_eq!(lat.nodes.iter().map(|e| e.dim()).min(), Some(0));
            }
        }
    }
}

fn idx() -> impl Strategy<Value = (usize, usize, u32)> {
    (0usize..3, 0usize..1000, 1u32..4)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn supersingularity_is_stable((p, i, r) in idx()) {
        let (chars, _) = pool(PRESETS[p], 1);
        let v = &chars[i % chars.len()];
        let s = is_supersingular_default(v).unwrap();
        let ext = v.scalar_extend(2 * r).unwrap();
        prop_assert_eq!(is_supersingular_default(&ext).unwrap(), s);
        prop_assert_eq!(is_supersingular_default(&ext.frobenius_twist(r)).unwrap(), s);
    }

    #[test]
    fn text_round_trip((p, i, _r) in idx()) {
        let (_, ind) = pool(PRESETS[p], 2);
        let m = &ind[i % ind.len()];
        let back = HModule::from_text(&m.to_text()).unwrap();
        prop_assert_eq!(back.to_text(), m.to_text());
        prop_assert!(back.is_valid());
    }
}

