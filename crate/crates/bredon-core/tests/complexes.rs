use bredon_core::arith::{divisors, gcd, is_divisor_string};
use bredon_core::complexes::{
    chain_map_from_data, hom_group, homology_action, homology_action_oracle, is_null_homotopic,
    is_null_homotopic_oracle, phi_image, ChainMapData, FreeComplex, HomGenerator,
};
use bredon_core::mackey::{AbelianGroup, BlockMorphism, FreeModule, NamedMackey};
use proptest::prelude::*;

fn spheres(n: u64, b: &[u64]) -> Vec<FreeComplex> {
    b.iter().map(|&d| FreeComplex::sphere(n, d).unwrap()).collect()
}

#[test]
fn linear_model_homology_is_named() {
    let l = FreeComplex::linear_model(45, &[3, 9, 45]).unwrap();
    let expect = [
        (0, NamedMackey::ZModI(3)),
        (2, NamedMackey::ZModI(9)),
        (4, NamedMackey::ZModI(45)),
        (6, NamedMackey::Z),
    ];
    for (p, name) in expect {
        assert_eq!(l.mackey_homology(p).unwrap().1, name, "degree {p}");
    }
    for p in [1, 3, 5] {
        assert!(l.mackey_homology(p).unwrap().1.is_zero());
    }
}

#[test]
fn zero_complex_has_no_homology() {
    let z = FreeComplex::zero(45);
    assert!(z.levelwise_homology().unwrap().is_empty());
    assert!(z.mackey_homology(0).unwrap().1.is_zero());
}

#[test]
fn box_of_spheres_matches_linear_model() {
    for n in [9u64, 15, 45] {
        let divs = divisors(n);
        let mut tuples: Vec<Vec<u64>> = Vec::new();
        for &a in &divs {
            tuples.push(vec![a]);
            for &b in &divs {
                if b >= a {
                    tuples.push(vec![a, b]);
                }
                for &c in &divs {
                    if b >= a && c >= b  {
                        tuples.push(vec![a, b, c]);
                    }
                }
            }
        }
        for t in tuples {
            let boxed = FreeComplex::box_levelwise_homology(&spheres(n, &t)).unwrap();
            let model = FreeComplex::linear_model(n, &t).unwrap().levelwise_homology().unwrap();
            for p in -1..=(2 * t.len() as i64 + 1) {
                for e in &divs {
                    let a = boxed.get(&p).map(|l| l.at(*e)).unwrap_or_default();
                    let b = model.get(&p).map(|l| l.at(*e)).unwrap_or_default();
                    assert_eq!(a, b, "n={n} t={t:?} p={p} e={e}");
                }
            }
        }
    }
}

#[test]
fn sphere_times_dual_sphere_is_the_unit() {
    for n in [9u64, 15, 45] {
        for b in divisors(n) {
            let pair = [FreeComplex::sphere(n, b).unwrap(), FreeComplex::sphere_dual(n, b).unwrap()];
            let h = FreeComplex::box_levelwise_homology(&pair).unwrap();
            for (p, l) in h {
                for e in divisors(n) {
                    let expect = if p == 0 { AbelianGroup::integers() } else { AbelianGroup::zero() };
                    assert_eq!(l.at(e), expect, "n={n} b={b} p={p} e={e}");
                }
            }
        }
    }
}

#[test]
fn sphere_boxed_with_free_module_is_a_suspension() {
    let n = 45;
    for c in divisors(n) {
        let free = FreeComplex::new(n, 0, vec![FreeModule::new(vec![c])], vec![]).unwrap();
        for b in divisors(c) {
            for b2 in divisors(c) {
                let factors = [
                    FreeComplex::sphere(n, b).unwrap(),
                    FreeComplex::sphere(n, b2).unwrap(),
                    free.clone(),
                ];
                let h = FreeComplex::box_levelwise_homology(&factors).unwrap();
                for (p, l) in h {
                    for e in divisors(n) {
                        let expect = if p == 4 {
                            AbelianGroup::from_cyclic_orders(gcd(c, e) as usize, &[])
                        } else {
                            AbelianGroup::zero()
                        };
                        assert_eq!(l.at(e), expect, "c={c} b={b} b2={b2} p={p} e={e}");
                    }
                }
            }
        }
    }
}

#[test]
fn extra_periodicity_of_two_spheres() {
    let n = 45;
    for b in divisors(n) {
        for c in divisors(n) {
            let lhs = FreeComplex::box_levelwise_homology(&[
                FreeComplex::sphere(n, b).unwrap(),
                FreeComplex::sphere(n, c).unwrap(),
            ])
            .unwrap();
            let g = gcd(b, c);
            let rhs = FreeComplex::box_levelwise_homology(&[
                FreeComplex::sphere(n, g).unwrap(),
                FreeComplex::sphere(n, b / g * c).unwrap(),
            ])
            .unwrap();
            assert_eq!(lhs, rhs, "b={b} c={c}");
        }
    }
}

#[test]
fn maps_between_two_fold_spheres() {
    let n = 45;
    let divs = divisors(n);
    for &c1 in &divs {
        for &c2 in divs.iter().filter(|&&x| x % c1 == 0) {
            for &d1 in &divs {
                for &d2 in divs.iter().filter(|&&x| x % d1 == 0) {
                    let k = FreeComplex::linear_model(n, &[c1, c2]).unwrap();
                    let l = FreeComplex::linear_model(n, &[d1, d2]).unwrap();
                    let order = gcd(c1, d1 * d2) / gcd(c1, d2);
                    let expect = AbelianGroup::from_cyclic_orders(1, &[order]);
                    let oracle = hom_group(&k, &l, 0).unwrap();
                    assert_eq!(oracle.group, expect, "c=({c1},{c2}) d=({d1},{d2})");
                    assert_eq!(phi_image(&[c1, c2], &[d1, d2]).unwrap().group, expect);
                    for g in &oracle.generators {
                        let HomGenerator::Map(f) = g else { unreachable!() };
                        assert!(f.commutes(&k, &l));
                    }
                }
            }
        }
    }
}

#[test]
fn oracle_is_independent_of_the_model() {
    let n = 45;
    for (c, d) in [(vec![3, 5], vec![9, 15]), (vec![9, 45], vec![3, 3]), (vec![5, 9], vec![15, 45])] {
        let spheres = |b: &[u64]| b.iter().map(|&x| FreeComplex::sphere(n, x).unwrap()).collect::<Vec<_>>();
        let kb = FreeComplex::restricted_box(&spheres(&c), 1).unwrap();
        let lb = FreeComplex::restricted_box(&spheres(&d), 1).unwrap();
        let km = FreeComplex::linear_model(n, &c).unwrap();
        let lm = FreeComplex::linear_model(n, &d).unwrap();
        for m in -4..=4 {
            let a = hom_group(&kb, &lb, m).unwrap().group;
            let b = hom_group(&km, &lm, m).unwrap().group;
            assert_eq!(a, b, "c={c:?} d={d:?} m={m}");
        }
    }
}

#[test]
fn phi_image_is_torsion_free_when_strings_interlace() {
    let all = strings(45, 3);
    let mut checked = 0;
    for c in &all {
        for d in &all {
            if d[1] % c[0] == 0 && d[2] % c[1] == 0 {
                assert!(phi_image(c, d).unwrap().group.torsion.is_empty(), "c={c:?} d={d:?}");
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

fn strings(n: u64, k: usize) -> Vec<Vec<u64>> {
    let mut out: Vec<Vec<u64>> = vec![vec![]];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|s| {
                divisors(n).into_iter().filter_map(move |d| {
                    let mut t = s.clone();
                    t.push(d);
                    is_divisor_string(&t).then_some(t)
                })
            })
            .collect();
    }
    out
}

#[test]
fn phi_image_matches_oracle_for_three_fold_strings() {
    let n = 45;
    let all = strings(n, 3);
    // a deterministic spread of pairs
    for (i, c) in all.iter().enumerate().step_by(3) {
        let d = &all[(i * 7 + 5) % all.len()];
        let k = FreeComplex::linear_model(n, c).unwrap();
        let l = FreeComplex::linear_model(n, d).unwrap();
        assert_eq!(
            phi_image(c, d).unwrap().group,
            hom_group(&k, &l, 0).unwrap().group,
            "c={c:?} d={d:?}"
        );
    }
}

fn data_strategy() -> impl Strategy<Value = ChainMapData> {
    let n = 45;
    (1usize..=3)
        .prop_flat_map(move |k| {
            let all = strings(n, k);
            let len = all.len();
            (0..len, 0..len, proptest::collection::vec(-6i64..=6, 2 * k + 1), Just(all))
        })
        .prop_map(|(i, j, coeffs, all)| {
            let (c, d) = (all[i].clone(), all[j].clone());
            let basis = phi_image(&c, &d).unwrap().generators;
            let k = c.len();
            let mut mp = vec![0i64; k];
            let mut w = vec![0i64; k];
            for (g, &a) in basis.iter().zip(&coeffs) {
                let HomGenerator::Data(g) = g else { unreachable!() };
                for i in 0..k {
                    mp[i] += a * g.normity(i).unwrap();
                    w[i] += a * g.w[i];
                }
            }
            ChainMapData::from_primed(c, d, &mp, w).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, ..ProptestConfig::default() })]

    #[test]
    fn null_homotopy_criterion_matches_oracle(data in data_strategy()) {
        prop_assert_eq!(is_null_homotopic(&data).unwrap(), is_null_homotopic_oracle(45, &data).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 100, ..ProptestConfig::default() })]

    #[test]
    fn data_gives_chain_maps_with_the_predicted_action(data in data_strategy()) {
        let (k, l, f) = chain_map_from_data(45, &data).unwrap();
        prop_assert!(f.commutes(&k, &l));
        for i in 0..=data.k() {
            prop_assert_eq!(homology_action(&data, i).unwrap(), homology_action_oracle(45, &data, i).unwrap());
        }
    }
}

#[test]
fn zero_data_is_the_zero_map() {
    let z = ChainMapData::zero(vec![3, 9, 45], vec![1, 9, 9]).unwrap();
    let (_, _, f) = chain_map_from_data(45, &z).unwrap();
    assert!(f.comps.values().all(BlockMorphism::is_zero));
}
