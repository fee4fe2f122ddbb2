//! Acceptance checks. Prints one PASS or FAIL line per criterion and exits
//! nonzero when a criterion fails that is not listed in `KNOWN_RED`.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use bredon::chart::{ell_squared_cells, symbol};
use bredon::verify::{oracle_sweep, ring_checks, sweep_degrees, SweepReport};
use bredon_core::arith::{
    associated_string, divisors, gcd, is_divisor_string, lcm, lcm_gcd_seq, pad_front, pairwise_distill, y_path,
    y_recursive,
};
use bredon_core::cohomology::{group, negative_group, oracle, positive_group, units_in_degree, GradingDegree, UnitReport};
use bredon_core::complexes::{
    homology_action, homology_action_oracle, hom_group, is_null_homotopic, is_null_homotopic_oracle, phi_image,
    ChainMapData, FreeComplex, HomGenerator,
};
use bredon_core::mackey::AbelianGroup;
use bredon_core::ring::{multiply, normalize, parse_element, SymbolicElement};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria expected to fail.
///
/// 11: over C_9 the chart's dim-1 plane is not zero. The class
/// u_9/u_3^2 is integral, so restriction from H^{2 - 2λ_3 + λ_9} to the
/// underlying level is onto. The cofibre sequence of a_9 then shows that
/// a_9 γ_3 is nonzero in H^{3 - 2λ_3 + λ_9} ≅ Z/3, and multiplying by
/// γ_3/u_3^j and a_9 spreads this over the wedge r <= -2, k >= 1, m >= 3.
const KNOWN_RED: [u32; 1] = [11];

const SEED: u64 = 0x5eed_b4ed;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn deg(m: i64, terms: &[(u64, i64)]) -> GradingDegree {
    GradingDegree::new(m, terms).expect("valid degree")
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

fn random_tuple(rng: &mut ChaCha8Rng, n: u64, len: usize) -> Vec<u64> {
    let ds = divisors(n);
    (0..len).map(|_| *ds.choose(rng).expect("n has divisors")).collect()
}

fn torsion_order(g: &AbelianGroup) -> u64 {
    g.torsion.iter().product()
}

fn sweep_summary(r: &SweepReport) -> String {
    format!(
        "n={}: {} degrees (closed-form {}, phi-image {}, oracle {})",
        r.n, r.cells, r.closed_form, r.phi_image, r.oracle
    )
}

fn criterion_1(sweeps: &[SweepReport]) -> Outcome {
    for r in sweeps {
        if let Some(m) = r.mismatches.first() {
            return Err(format!(
                "{} mismatches for n={}; first at {} level {}: engine {} ({}), oracle {}",
                r.mismatches.len(),
                r.n,
                m.degree,
                m.level,
                m.engine,
                m.method,
                m.oracle
            ));
        }
    }
    Ok(sweeps.iter().map(sweep_summary).collect::<Vec<_>>().join("; "))
}

/// `(b; j)` straight from the definition: the gcd over all `j`-element
/// subsets of their lcm.
fn lcm_gcd_by_subsets(b: &[u64]) -> Vec<u64> {
    let s = b.len();
    (1..=s)
        .map(|j| {
            (0u32..(1 << s))
                .filter(|mask| mask.count_ones() as usize == j)
                .map(|mask| (0..s).filter(|i| mask & (1 << i) != 0).fold(1, |acc, i| lcm(acc, b[i]).unwrap()))
                .fold(0, gcd)
        })
        .collect()
}

fn criterion_2(rng: &mut ChaCha8Rng) -> Outcome {
    let example = lcm_gcd_seq(&[15, 9, 18]).map_err(|e| e.to_string())?;
    ensure(example == [3, 9, 90], || format!("lcm_gcd_seq(15,9,18) = {example:?}"))?;
    for _ in 0..1000 {
        let len = rng.gen_range(1..=5);
        let b: Vec<u64> = (0..len).map(|_| rng.gen_range(1..=360)).collect();
        let want = lcm_gcd_by_subsets(&b);
        let seq = lcm_gcd_seq(&b).map_err(|e| e.to_string())?;
        let distilled = pairwise_distill(&b).map_err(|e| e.to_string())?;
        ensure(seq == want && distilled == want, || {
            format!("{b:?}: subsets {want:?}, lcm_gcd_seq {seq:?}, pairwise_distill {distilled:?}")
        })?;
    }
    Ok("(15,9,18) -> (3,9,90); 1000 random tuples agree with the subset definition".into())
}

fn criterion_3(rng: &mut ChaCha8Rng) -> Outcome {
    let y = (y_path(&[1, 4], &[2, 6]), y_recursive(&[1, 4], &[2, 6]));
    ensure(matches!(y, (Ok(2), Ok(2))), || format!("Y((1,4),(2,6)) = {y:?}"))?;
    let n = 105;
    for len in 1..=4 {
        let all = strings(n, len);
        for _ in 0..250 {
            let c = all.choose(rng).expect("strings exist");
            let d = all.choose(rng).expect("strings exist");
            let (p, r) = (y_path(c, d), y_recursive(c, d));
            ensure(p.is_ok() && p.as_ref().ok() == r.as_ref().ok(), || format!("{c:?} {d:?}: {p:?} vs {r:?}"))?;
        }
    }
    for _ in 0..1000 {
        let (lc, ld) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
        let (c, d) = (random_tuple(rng, n, lc), random_tuple(rng, n, ld));
        let (ac, ad) = (associated_string(&c).unwrap(), associated_string(&d).unwrap());
        let k = ac.len().max(ad.len());
        let (pc, pd) = (pad_front(&ac, k), pad_front(&ad, k));
        let (p, r) = (y_path(&pc, &pd), y_recursive(&pc, &pd));
        ensure(p.is_ok() && p.as_ref().ok() == r.as_ref().ok(), || format!("{c:?} {d:?}: {p:?} vs {r:?}"))?;
    }
    Ok("Y((1,4),(2,6)) = 2; 1000 strings of 105 and 1000 associated tuples agree".into())
}

fn criterion_4() -> Outcome {
    let n = 45;
    let all = strings(n, 2);
    let mut pairs = 0;
    for c in &all {
        for d in &all {
            let phi = phi_image(c, d).map_err(|e| e.to_string())?.group;
            let formula = gcd(c[0], d[0] * d[1]) / gcd(c[0], d[1]);
            ensure(torsion_order(&phi) == formula, || {
                format!("{c:?} -> {d:?}: torsion order {} but formula gives {formula}", torsion_order(&phi))
            })?;
            let k = FreeComplex::linear_model(n, c).map_err(|e| e.to_string())?;
            let l = FreeComplex::linear_model(n, d).map_err(|e| e.to_string())?;
            let hom = hom_group(&k, &l, 0).map_err(|e| e.to_string())?.group;
            ensure(phi == hom, || format!("{c:?} -> {d:?}: phi image {phi}, oracle {hom}"))?;
            pairs += 1;
        }
    }
    let cell = group(9, &deg(0, &[(3, 2), (9, -2)])).map_err(|e| e.to_string())?.top();
    ensure(cell == AbelianGroup::from_cyclic_orders(1, &[3]), || format!("H^(2l3 - 2l9) over C_9 is {cell}"))?;
    Ok(format!("{pairs} string pairs over 45 match formula and oracle; H^(2l3 - 2l9) = Z + Z/3"))
}

fn criterion_5() -> Outcome {
    let n = 45;
    let ds = divisors(n);
    let mut tuples: Vec<Vec<u64>> = Vec::new();
    for &a in &ds {
        tuples.push(vec![a]);
        for &b in ds.iter().filter(|&&b| b >= a) {
            tuples.push(vec![a, b]);
            for &c in ds.iter().filter(|&&c| c >= b) {
                tuples.push(vec![a, b, c]);
            }
        }
    }
    let mut cells = 0;
    for b in &tuples {
        for k in -1..=(2 * b.len() as i64 + 1) {
            for res in [positive_group(n, b, k), negative_group(n, b, k)] {
                let res = res.map_err(|e| e.to_string())?;
                let want = oracle(n, &res.degree).map_err(|e| e.to_string())?;
                ensure(res.levels == want.levels, || format!("{}: closed form {} vs oracle", res.degree, res.named))?;
                cells += 1;
            }
        }
    }
    for &b in &ds {
        for &c in &ds {
            let top = group(n, &deg(0, &[(c, 1), (b, -1)])).map_err(|e| e.to_string())?.top();
            ensure(top == AbelianGroup::integers(), || format!("H^(l{c} - l{b}) = {top}"))?;
        }
    }
    Ok(format!("{} tuples, {cells} cone degrees match the oracle; H^(lc - lb) = Z for all b, c", tuples.len()))
}

fn criterion_6(sweeps: &[SweepReport]) -> Outcome {
    for r in sweeps {
        if let Some(d) = r.rank_law_failures.first() {
            return Err(format!("n={}: rank law fails at {d}", r.n));
        }
    }
    Ok(format!("{} degrees", sweeps.iter().map(|r| r.cells).sum::<usize>()))
}

fn random_data(rng: &mut ChaCha8Rng, n: u64) -> ChainMapData {
    let k = rng.gen_range(1..=3);
    let all = strings(n, k);
    let c = all.choose(rng).expect("strings exist").clone();
    let d = all.choose(rng).expect("strings exist").clone();
    let basis = phi_image(&c, &d).expect("strings are valid").generators;
    let mut mp = vec![0i64; k];
    let mut w = vec![0i64; k];
    for g in &basis {
        let HomGenerator::Data(g) = g else { unreachable!("phi_image returns data") };
        let a = rng.gen_range(-6i64..=6);
        for i in 0..k {
            mp[i] += a * g.normity(i).expect("small values");
            w[i] += a * g.w[i];
        }
    }
    ChainMapData::from_primed(c, d, &mp, w).expect("combinations of valid data are valid")
}

fn criterion_7(rng: &mut ChaCha8Rng) -> Outcome {
    let n = 45;
    let mut null = 0;
    for _ in 0..500 {
        let data = random_data(rng, n);
        let fast = is_null_homotopic(&data).map_err(|e| e.to_string())?;
        let slow = is_null_homotopic_oracle(n, &data).map_err(|e| e.to_string())?;
        ensure(fast == slow, || format!("{data:?}: criterion {fast}, oracle {slow}"))?;
        null += usize::from(fast);
    }
    Ok(format!("500 random maps ({null} null-homotopic) agree with the oracle"))
}

fn element(n: u64, s: &str) -> SymbolicElement {
    parse_element(n, s).expect("element parses")
}

fn ring_pool(n: u64) -> Vec<String> {
    let ds = divisors(n);
    let nontrivial: Vec<u64> = ds.iter().copied().filter(|&d| d > 1).collect();
    let mut pool = vec!["1".to_string(), "2".to_string(), "-3".to_string()];
    for &d in &ds {
        pool.extend([format!("a{d}"), format!("u{d}"), format!("edge({d})")]);
        for &c in &ds {
            pool.push(format!("u[{c}:{d}]"));
            pool.push(format!("chi({d},{c})"));
            pool.push(format!("chi({d},{c})^-1"));
            pool.push(format!("edge({d},{c})"));
        }
    }
    for &d in &nontrivial {
        pool.push(format!("gamma{d}"));
        pool.push(format!("a{d}*u{d}"));
        for &c in nontrivial.iter().filter(|&&c| c % d == 0) {
            pool.push(format!("omega(u:{d}; a:{c})"));
            for &e in nontrivial.iter().filter(|&&e| e % c == 0) {
                pool.push(format!("omega(u:{d},{c}; a:{e})"));
            }
        }
    }
    pool
}

fn criterion_8(rng: &mut ChaCha8Rng) -> Outcome {
    for n in [9, 15, 45] {
        let failures = ring_checks(n);
        ensure(failures.is_empty(), || format!("n={n}: {}", failures[0]))?;
    }
    let n = 45;
    let inverse_gold = [
        ("u45", "omega(u:3,9; a:45,45)", "2*omega(u:3; a:9,45)"),
        ("a9", "omega(u:3,9; a:45,45)", "5*omega(u:3,45; a:45)"),
        ("u3", "omega(u:3,9; a:45)", "omega(u:9; a:45)"),
        ("a45", "omega(u:3,9; a:45,45)", "omega(u:3,9; a:45)"),
    ];
    for (x, y, want) in inverse_gold {
        let got = multiply(n, &element(n, x), &element(n, y)).to_string();
        ensure(got == want, || format!("{x} * {y} = {got}, expected {want}"))?;
    }
    let mut actions = 0;
    for b in divisors(n) {
        for c in divisors(n) {
            for m in -3i64..=3 {
                let data = ChainMapData::new(vec![b], vec![c], vec![m], vec![0]).map_err(|e| e.to_string())?;
                let w0 = homology_action(&data, 0).map_err(|e| e.to_string())?;
                let w1 = homology_action(&data, 1).map_err(|e| e.to_string())?;
                ensure(w0 == homology_action_oracle(n, &data, 0).map_err(|e| e.to_string())?, || {
                    format!("action of {m}*u[{c}:{b}] on bottom homology")
                })?;
                ensure(w1 == homology_action_oracle(n, &data, 1).map_err(|e| e.to_string())?, || {
                    format!("action of {m}*u[{c}:{b}] on top homology")
                })?;
                let x = element(n, &format!("{m}*u[{c}:{b}]"));
                let on_a = multiply(n, &x, &element(n, &format!("a{b}")));
                let on_u = multiply(n, &x, &element(n, &format!("u{b}")));
                let want_a = normalize(n, &element(n, &format!("{w0}*a{c}"))).map_err(|e| e.to_string())?;
                let want_u = normalize(n, &element(n, &format!("{w1}*u{c}"))).map_err(|e| e.to_string())?;
                ensure(on_a == want_a && on_u == want_u, || {
                    format!("{x}: symbolic {on_a}, {on_u}; chain level {want_a}, {want_u}")
                })?;
                actions += 1;
            }
        }
    }
    let pool: Vec<SymbolicElement> = ring_pool(n).iter().map(|s| element(n, s)).collect();
    for _ in 0..10_000 {
        let x = pool.choose(rng).expect("pool is nonempty");
        let y = pool.choose(rng).expect("pool is nonempty");
        let (xy, yx) = (multiply(n, x, y), multiply(n, y, x));
        ensure(xy == yx, || format!("{x} * {y} = {xy} but {y} * {x} = {yx}"))?;
    }
    Ok(format!(
        "relations hold over 9, 15, 45; {actions} bracket multiples match the chain-level action; 10000 pairs commute"
    ))
}

fn chi_degree(b: u64, c: u64) -> GradingDegree {
    deg(0, &[(gcd(b, c), 1), (lcm(b, c).unwrap(), 1), (b, -1), (c, -1)])
}

fn criterion_9(rng: &mut ChaCha8Rng) -> Outcome {
    let n = 105;
    let ds = divisors(n);
    let mut gens: Vec<GradingDegree> = Vec::new();
    for &b in &ds {
        for &c in &ds {
            let d = chi_degree(b, c);
            if d.weight() > 0 {
                gens.push(d.clone());
                gens.push(d.negated());
            }
        }
    }
    // Degrees of χ-monomials up to length 4, bounding intermediate weight.
    let mut seen: BTreeSet<GradingDegree> = BTreeSet::from([GradingDegree::integer(0)]);
    let mut frontier = seen.clone();
    for _ in 0..4 {
        let mut next = BTreeSet::new();
        for f in &frontier {
            for g in &gens {
                let h = f.plus(g);
                if h.weight() <= 8 && seen.insert(h.clone()) {
                    next.insert(h);
                }
            }
        }
        frontier = next;
    }
    // Weight 2 is the stated range; every χ degree has weight at least 3
    // once λ_1 is folded in, so weight 3 is included to exercise the check.
    let mut with_units = 0;
    for beta in sweep_degrees(n, 3, 6).into_iter().filter(|b| b.dim() == 0) {
        let report = units_in_degree(n, &beta).map_err(|e| e.to_string())?;
        let monomial = seen.contains(&beta);
        match report {
            UnitReport::Units(word) => {
                let total = word.iter().fold(GradingDegree::integer(0), |acc, f| acc.plus(&f.degree()));
                ensure(monomial && total == beta, || format!("{beta}: units reported, word has degree {total}"))?;
                with_units += 1;
            }
            UnitReport::NoUnits(_) => ensure(!monomial, || format!("{beta}: a chi-monomial degree without units"))?,
        }
    }
    for _ in 0..1000 {
        let len = rng.gen_range(1..=4);
        let all = strings(n, len);
        let c = all.choose(rng).expect("strings exist").clone();
        let d: Vec<u64> = if rng.gen_bool(0.5) {
            let e = all.choose(rng).expect("strings exist");
            c.iter().zip(e).map(|(&x, &y)| lcm(x, y).unwrap()).collect()
        } else {
            all.choose(rng).expect("strings exist").clone()
        };
        let forward = y_recursive(&c, &d).map_err(|e| e.to_string())?;
        let backward = y_recursive(&d, &c).map_err(|e| e.to_string())?;
        if forward == 1 {
            ensure(c.iter().zip(&d).all(|(x, y)| y % x == 0), || format!("Y({c:?},{d:?}) = 1 but c does not divide d"))?;
        }
        if forward == 1 && backward == 1 {
            ensure(c == d, || format!("Y both ways is 1 for {c:?} != {d:?}"))?;
        }
    }
    Ok(format!("{with_units} unit degrees over 105 up to weight 3, all chi-monomial degrees; 1000 string pairs satisfy M = M"))
}

fn criterion_10(sweeps: &[SweepReport]) -> Outcome {
    let r = sweeps.iter().find(|r| r.n == 45).expect("the sweep covers 45");
    ensure(r.assembly_failures.is_empty(), || format!("assembly differs at {}", r.assembly_failures[0]))?;
    Ok(format!("{} degrees over 45", r.cells))
}

fn criterion_11() -> Outcome {
    let n = 9;
    let cells = ell_squared_cells(n, -4..=4, -8..=8)?;
    let mut problems = Vec::new();
    let nonzero: Vec<String> = cells
        .iter()
        .filter(|c| c.dim() == 1 && !c.group.is_zero())
        .map(|c| format!("(r={}, k={}, m={}) {}", c.r, c.k, c.m, symbol(&c.group)))
        .collect();
    if !nonzero.is_empty() {
        problems.push(format!(
            "dim-1 plane has {} nonzero cells, e.g. {}",
            nonzero.len(),
            nonzero[..nonzero.len().min(3)].join(", ")
        ));
    }
    let mut cones = 0;
    for c in &cells {
        let closed = if c.r >= 0 && c.k >= 0 && c.r + c.k > 0 {
            let b: Vec<u64> = [vec![3; c.r as usize], vec![9; c.k as usize]].concat();
            positive_group(n, &b, -c.m)
        } else if c.r <= 0 && c.k <= 0 && c.r + c.k < 0 {
            let b: Vec<u64> = [vec![3; (-c.r) as usize], vec![9; (-c.k) as usize]].concat();
            negative_group(n, &b, c.m)
        } else {
            continue;
        };
        let closed = closed.map_err(|e| e.to_string())?.top();
        if closed != c.group {
            problems.push(format!("cone cell {} shows {}, closed form {closed}", c.degree, c.group));
        }
        cones += 1;
    }
    match cells.iter().find(|c| (c.r, c.k, c.m) == (2, -2, 0)) {
        Some(c) if symbol(&c.group) == "[Z+Z/3]" => {}
        Some(c) => problems.push(format!("cell (2,-2,0) shows {}", symbol(&c.group))),
        None => problems.push("cell (2,-2,0) missing".into()),
    }
    if problems.is_empty() {
        Ok(format!("{} cells, {cones} cone cells match; (2,-2,0) = [Z+Z/3]", cells.len()))
    } else {
        Err(format!("{}; {cones} cone cells checked", problems.join("; ")))
    }
}

fn main() -> ExitCode {
    if let Err(e) = bredon::configure_threads() {
        eprintln!("{e}");
        return ExitCode::FAILURE;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let start = Instant::now();
    let sweeps: Result<Vec<SweepReport>, String> = [9, 15, 45].iter().map(|&n| oracle_sweep(n, 3, 8)).collect();
    let sweep_time = start.elapsed();
    let sweeps = match sweeps {
        Ok(s) => s,
        Err(e) => {
            println!("criterion  1 FAIL  sweep aborted: {e}");
            return ExitCode::FAILURE;
        }
    };
    let results: Vec<(u32, Outcome)> = vec![
        (1, criterion_1(&sweeps).map(|s| format!("{s}; {:.1}s", sweep_time.as_secs_f64()))),
        (2, criterion_2(&mut rng)),
        (3, criterion_3(&mut rng)),
        (4, criterion_4()),
        (5, criterion_5()),
        (6, criterion_6(&sweeps)),
        (7, criterion_7(&mut rng)),
        (8, criterion_8(&mut rng)),
        (9, criterion_9(&mut rng)),
        (10, criterion_10(&sweeps)),
        (11, criterion_11()),
    ];
    let mut unexpected = 0;
    for (id, outcome) in &results {
        let known = KNOWN_RED.contains(id);
        match outcome {
            Ok(detail) => {
                println!("criterion {id:>2} PASS  {detail}");
                if known {
                    println!("             note: listed as known red but passed");
                }
            }
            Err(detail) => {
                let tag = if known { " (known red)" } else { "" };
                println!("criterion {id:>2} FAIL{tag}  {detail}");
                unexpected += usize::from(!known);
            }
        }
    }
    let passed = results.iter().filter(|(_, o)| o.is_ok()).count();
    println!("{passed}/{} criteria pass, {unexpected} unexpected failures", results.len());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
