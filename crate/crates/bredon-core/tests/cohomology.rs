use bredon_core::arith::{associated_string, divisors, gcd, pad_front, y_path};
use bredon_core::cohomology::{
    classify, ell_assemble, group, integral_multiple, irregular_reduce, negative_group, oracle,
    oracle_at, parse_degree, positive_group, units_in_degree, GradingDegree, RegionClass, Step,
    UnitReport,
};
use bredon_core::complexes::FreeComplex;
use bredon_core::mackey::{AbelianGroup, NamedMackey};

/// Every degree over `C_n` with λ-weight at most `w` and `|m| <= mmax`.
fn degrees(n: u64, w: i64, mmax: i64) -> Vec<GradingDegree> {
    let idx: Vec<u64> = divisors(n).into_iter().filter(|&d| d > 1).collect();
    let mut vecs: Vec<Vec<i64>> = vec![vec![]];
    for _ in &idx {
        let mut next = Vec::new();
        for v in &vecs {
            let used: i64 = v.iter().map(|x| x.abs()).sum();
            for k in -(w - used)..=(w - used) {
                let mut v2 = v.clone();
                v2.push(k);
                next.push(v2);
            }
        }
        vecs = next;
    }
    let mut out = Vec::new();
    for v in vecs {
        let terms: Vec<(u64, i64)> = idx.iter().copied().zip(v).collect();
        for m in -mmax..=mmax {
            out.push(GradingDegree::new(m, &terms).unwrap());
        }
    }
    out
}

fn deg(m: i64, terms: &[(u64, i64)]) -> GradingDegree {
    GradingDegree::new(m, terms).unwrap()
}

/// `H^β` at every level as homology of a box product of spheres and dual
/// spheres, independent of the linear models.
fn box_oracle(n: u64, beta: &GradingDegree) -> Vec<(u64, AbelianGroup)> {
    let mut factors: Vec<FreeComplex> = beta
        .positive()
        .iter()
        .map(|&d| FreeComplex::sphere(n, d).unwrap())
        .collect();
    factors.extend(beta.negative().iter().map(|&d| FreeComplex::sphere_dual(n, d).unwrap()));
    divisors(n)
        .into_iter()
        .map(|e| {
            let g = if factors.is_empty() {
                if beta.m == 0 { AbelianGroup::integers() } else { AbelianGroup::zero() }
            } else {
                FreeComplex::restricted_box(&factors, e).unwrap().level_homology(-beta.m, 1)
            };
            (e, g)
        })
        .collect()
}

#[test]
fn engine_matches_oracle_on_small_weights() {
    for n in [9, 15, 25, 27] {
        for beta in degrees(n, 2, 6) {
            let g = group(n, &beta).unwrap();
            let o = oracle(n, &beta).unwrap();
            assert_eq!(g.levels, o.levels, "n={n}, degree {beta}");
        }
    }
}

#[test]
fn oracle_matches_box_products_of_spheres() {
    for n in [9, 15] {
        for beta in degrees(n, 2, 4) {
            let o = oracle(n, &beta).unwrap();
            for (e, g) in box_oracle(n, &beta) {
                assert_eq!(o.levels.at(e), g, "n={n}, degree {beta}, level {e}");
            }
        }
    }
}

#[test]
fn cone_formulas_match_the_oracle() {
    let n = 45;
    let divs = divisors(n);
    let mut tuples: Vec<Vec<u64>> = vec![vec![]];
    for &a in &divs {
        tuples.push(vec![a]);
        for &b in divs.iter().filter(|&&b| b >= a) {
            tuples.push(vec![a, b]);
        }
    }
    for b in &tuples {
        for k in -1..=(2 * b.len() as i64 + 1) {
            let p = positive_group(n, b, k).unwrap();
            assert_eq!(p.levels, oracle(n, &p.degree).unwrap().levels, "positive {b:?} {k}");
            let q = negative_group(n, b, k).unwrap();
            assert_eq!(q.levels, oracle(n, &q.degree).unwrap().levels, "negative {b:?} {k}");
        }
    }
}

#[test]
fn named_cone_functors_match_recognised_homology() {
    let l = FreeComplex::linear_model(45, &[15, 9]).unwrap();
    for k in 0..=4 {
        assert_eq!(positive_group(45, &[15, 9], k).unwrap().named, l.mackey_homology(k).unwrap().1);
    }
}

#[test]
fn weight_one_mixed_degrees_are_z_with_the_predicted_restrictions() {
    let n = 45;
    for b in divisors(n) {
        for c in divisors(n) {
            let beta = GradingDegree::from_tuples(0, &[c], &[b]).unwrap();
            let g = group(n, &beta).unwrap();
            assert_eq!(g.top(), AbelianGroup::integers());
            let pair = [FreeComplex::sphere(n, c).unwrap(), FreeComplex::sphere_dual(n, b).unwrap()];
            let boxed = pair[0].box_product(&pair[1]).unwrap().reduce();
            let (_, named) = boxed.mackey_homology(0).unwrap();
            assert_eq!(g.named, named, "b={b} c={c}");
        }
    }
}

#[test]
fn paper_cells() {
    let g = group(9, &deg(0, &[(3, 2), (9, -2)])).unwrap();
    assert_eq!(g.top(), AbelianGroup::from_cyclic_orders(1, &[3]));
    assert_eq!(group(9, &deg(3, &[(3, -1)]).plus(&deg(0, &[(3, -1)]))).unwrap().top(), AbelianGroup::cyclic(3));
    assert_eq!(group(45, &GradingDegree::integer(0)).unwrap().named, NamedMackey::Z);
    let hard = deg(1, &[(9, 1), (45, 1), (3, -1), (15, -1)]);
    assert_eq!(group(45, &hard).unwrap().levels, oracle(45, &hard).unwrap().levels);
    let neg = deg(-2, &[(9, 1), (45, 1), (3, -1), (15, -1)]);
    let r = group(45, &neg).unwrap();
    assert!(!r.reduction_log.is_empty());
    assert_eq!(r.levels, oracle(45, &neg).unwrap().levels);
}

#[test]
fn dimension_one_plane_for_c9() {
    // The plane is zero except on a wedge r <= -2, k >= 1, m >= 3 which
    // carries a_9-multiples of the classes gamma_3 / u_3^j.
    for r in -5i64..=5 {
        for k in -5i64..=5 {
            let m = 1 - 2 * (r + k);
            let beta = deg(m, &[(3, r), (9, k)]);
            let g = group(9, &beta).unwrap();
            if r <= -2 && k >= 1 && m >= 3 {
                assert_eq!(g.top(), AbelianGroup::cyclic(3), "{beta}");
            } else {
                assert!(g.levels.is_zero(), "{beta}");
            }
        }
    }
}

#[test]
fn a9_gamma3_survives() {
    // u_9 / u_3^2 is integral, so its restriction to the underlying level
    // is onto and the cofibre sequence of a_9 leaves gamma_3 alive.
    assert_eq!(integral_multiple(9, &[9], &[3, 3]).unwrap(), 1);
    assert_eq!(group(9, &deg(3, &[(3, -2)])).unwrap().top(), AbelianGroup::cyclic(3));
    assert_eq!(group(9, &deg(3, &[(3, -2), (9, 1)])).unwrap().top(), AbelianGroup::cyclic(3));
}

#[test]
fn rank_is_one_exactly_in_dimension_zero() {
    for beta in degrees(45, 2, 6) {
        let top = group(45, &beta).unwrap().top();
        assert_eq!(top.rank, usize::from(beta.dim() == 0), "{beta}");
    }
}

#[test]
fn zero_by_bounds_is_zero() {
    for beta in degrees(15, 2, 8) {
        if classify(&beta) == RegionClass::ZeroByBounds {
            assert!(oracle(15, &beta).unwrap().levels.is_zero(), "{beta}");
        }
    }
}

#[test]
fn prime_by_prime_assembly_agrees() {
    for beta in degrees(45, 2, 6) {
        assert_eq!(
            ell_assemble(45, &beta).unwrap().levels,
            group(45, &beta).unwrap().levels,
            "{beta}"
        );
    }
}

#[test]
fn every_logged_move_preserves_the_oracle_group() {
    let mut moves = 0;
    for beta in degrees(45, 3, 6) {
        let (_, log) = irregular_reduce(45, &beta).unwrap();
        for r in log {
            let a = oracle_at(45, &r.from, 1).unwrap();
            let b = oracle_at(45, &r.to, 1).unwrap();
            match r.step {
                Step::TorsionOfTruncation(_) => assert_eq!(a, b.torsion_subgroup()),
                _ => assert_eq!(a, b, "{r}"),
            }
            moves += 1;
        }
    }
    assert!(moves > 100);
}

#[test]
fn torsion_of_truncation_and_quotient_by_z() {
    let n = 45;
    let strings = |k: usize| -> Vec<Vec<u64>> {
        let divs: Vec<u64> = divisors(n).into_iter().filter(|&d| d > 1).collect();
        let mut out: Vec<Vec<u64>> = vec![vec![]];
        for _ in 0..k {
            let mut next = Vec::new();
            for s in &out {
                for &d in &divs {
                    if s.last().is_none_or(|&x| d % x == 0) {
                        let mut t = s.clone();
                        t.push(d);
                        next.push(t);
                    }
                }
            }
            out = next;
        }
        out
    };
    for c in strings(2) {
        for d in strings(1) {
            let long = GradingDegree::from_tuples(0, &d, &c).unwrap();
            let short = GradingDegree::from_tuples(0, &d, &c[..1]).unwrap();
            let a = oracle_at(n, &long, 1).unwrap();
            let b = oracle_at(n, &short, 1).unwrap();
            assert_eq!(a, b.torsion_subgroup(), "c={c:?} d={d:?}");
            // more positive λ's: a copy of Z is divided out
            let wide = GradingDegree::from_tuples(0, &c, &d).unwrap();
            let narrow = GradingDegree::from_tuples(0, &c[..1], &d).unwrap();
            let w = oracle_at(n, &wide, 1).unwrap();
            let x = oracle_at(n, &narrow, 1).unwrap();
            assert_eq!((w.rank, x.rank), (0, 1));
            assert!(x.torsion_order() <= w.torsion_order() * u128::from(n) || w.torsion_order() > 0);
        }
    }
}

#[test]
fn units_exactly_when_both_integrality_constants_are_one() {
    let n = 105;
    for beta in degrees(n, 2, 4) {
        if beta.dim() != 0 {
            assert!(matches!(units_in_degree(n, &beta).unwrap(), UnitReport::NoUnits(_)));
            continue;
        }
        let c = associated_string(&beta.negative()).unwrap();
        let d = associated_string(&beta.positive()).unwrap();
        let len = c.len().max(d.len());
        let (c, d) = (pad_front(&c, len), pad_front(&d, len));
        let both = y_path(&c, &d).unwrap() == 1 && y_path(&d, &c).unwrap() == 1;
        match units_in_degree(n, &beta).unwrap() {
            UnitReport::Units(word) => {
                assert!(both, "{beta}");
                let total = word.iter().fold(GradingDegree::integer(0), |acc, f| acc.plus(&f.degree()));
                assert_eq!(total, beta);
            }
            UnitReport::NoUnits(_) => assert!(!both, "{beta}"),
        }
    }
}

#[test]
fn integral_multiples() {
    assert_eq!(integral_multiple(45, &[9], &[3]).unwrap(), 1);
    assert_eq!(integral_multiple(45, &[3], &[9]).unwrap(), 3);
    assert_eq!(integral_multiple(45, &[15, 9], &[15, 9]).unwrap(), 1);
    for c in divisors(45) {
        for d in divisors(45) {
            assert_eq!(integral_multiple(45, &[d], &[c]).unwrap(), c / gcd(c, d));
        }
    }
    assert!(integral_multiple(45, &[7], &[3]).is_err());
}

#[test]
fn degrees_round_trip_through_the_printer() {
    for beta in degrees(45, 3, 4) {
        assert_eq!(parse_degree(45, &beta.to_string()).unwrap(), beta);
    }
    assert_eq!(parse_degree(45, " -2 + l9 + l45 - l3 - l15").unwrap().to_string(), "-2 - l3 + l9 - l15 + l45");
    assert!(parse_degree(45, "3 - 2*x9").unwrap_err().to_string().contains("x9"));
    assert!(parse_degree(8, "l2").unwrap_err().to_string().contains("n must be odd"));
}
