//! Verification sweeps: closed forms and reductions against the oracle,
//! and the product rules against each other.

use bredon_core::arith::{divisors, gcd, lcm};
use bredon_core::cohomology::{ell_assemble, group, oracle_at, GradingDegree, GroupResult};
use bredon_core::complexes::Method;
use bredon_core::mackey::AbelianGroup;
use bredon_core::ring::{multiply, normalize, parse_element, SymbolicElement};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::report::group_json;

/// Every degree over `C_n` with λ-weight at most `max_weight` and
/// `|m| <= max_m`, in a fixed order.
///
/// ```
/// let all = bredon::verify::sweep_degrees(9, 1, 0);
/// assert_eq!(all.len(), 5);
/// ```
pub fn sweep_degrees(n: u64, max_weight: i64, max_m: i64) -> Vec<GradingDegree> {
    let idx: Vec<u64> = divisors(n).into_iter().filter(|&d| d > 1).collect();
    let mut vecs: Vec<Vec<i64>> = vec![vec![]];
    for _ in &idx {
        let mut next = Vec::new();
        for v in &vecs {
            let left = max_weight - v.iter().map(|x| x.abs()).sum::<i64>();
            for k in -left..=left {
                let mut v2 = v.clone();
                v2.push(k);
                next.push(v2);
            }
        }
        vecs = next;
    }
    let mut out = Vec::new();
    for v in &vecs {
        let terms: Vec<(u64, i64)> = idx.iter().copied().zip(v.iter().copied()).collect();
        for m in -max_m..=max_m {
            out.push(GradingDegree::new(m, &terms).expect("indices are positive"));
        }
    }
    out
}

/// A level at which the engine and the oracle disagree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    /// The degree.
    pub degree: GradingDegree,
    /// The level `e` of `Θ_e`.
    pub level: u64,
    /// The group reported by `group`.
    pub engine: AbelianGroup,
    /// The group computed by the oracle.
    pub oracle: AbelianGroup,
    /// How the engine obtained its answer.
    pub method: Method,
    /// The reductions the engine applied.
    pub reductions: Vec<String>,
}

/// Outcome of checking one degree.
#[derive(Debug, Clone)]
pub struct CellCheck {
    /// The engine's result.
    pub result: GroupResult,
    /// Levels where the oracle disagrees.
    pub mismatches: Vec<Mismatch>,
    /// Whether the top-level rank is one exactly when `dim β = 0`.
    pub rank_law: bool,
    /// Whether prime-by-prime assembly reproduces every level.
    pub assembly_agrees: bool,
}

/// Compares the engine with the oracle at every level of one degree.
pub fn check_cell(n: u64, beta: &GradingDegree) -> Result<CellCheck, String> {
    let result = group(n, beta).map_err(|e| format!("{beta}: {e}"))?;
    let mut mismatches = Vec::new();
    for e in divisors(n) {
        let expected = oracle_at(n, beta, e).map_err(|err| format!("{beta}: {err}"))?;
        let got = result.levels.at(e);
        if got != expected {
            mismatches.push(Mismatch {
                degree: beta.clone(),
                level: e,
                engine: got,
                oracle: expected,
                method: result.method,
                reductions: result.reduction_log.iter().map(|r| r.to_string()).collect(),
            });
        }
    }
    let rank_law = (result.top().rank == 1) == (beta.dim() == 0) && result.top().rank <= 1;
    let assembled = ell_assemble(n, beta).map_err(|e| format!("{beta}: {e}"))?;
    let assembly_agrees = assembled.levels == result.levels;
    Ok(CellCheck { result, mismatches, rank_law, assembly_agrees })
}

/// Summary of a sweep.
#[derive(Debug, Clone, Default)]
pub struct SweepReport {
    /// Order of the group.
    pub n: u64,
    /// Number of degrees checked.
    pub cells: usize,
    /// Degrees answered by closed forms.
    pub closed_form: usize,
    /// Degrees answered through the image of the null-homotopy map.
    pub phi_image: usize,
    /// Degrees where at least one level needed the oracle.
    pub oracle: usize,
    /// Disagreements with the oracle.
    pub mismatches: Vec<Mismatch>,
    /// Degrees violating the rank law.
    pub rank_law_failures: Vec<GradingDegree>,
    /// Degrees where prime-by-prime assembly disagrees.
    pub assembly_failures: Vec<GradingDegree>,
}

impl SweepReport {
    /// True when nothing failed.
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty() && self.rank_law_failures.is_empty() && self.assembly_failures.is_empty()
    }

    /// JSON form.
    pub fn to_json(&self) -> Value {
        let mismatches: Vec<Value> = self
            .mismatches
            .iter()
            .map(|m| {
                json!({
                    "degree": m.degree.to_string(),
                    "level": m.level,
                    "engine": group_json(&m.engine),
                    "oracle": group_json(&m.oracle),
                    "method": m.method.as_str(),
                    "reductions": m.reductions,
                })
            })
            .collect();
        let names = |v: &[GradingDegree]| v.iter().map(|d| d.to_string()).collect::<Vec<_>>();
        json!({
            "n": self.n,
            "cells": self.cells,
            "methods": {
                "closed-form": self.closed_form,
                "phi-image": self.phi_image,
                "oracle": self.oracle,
            },
            "mismatches": mismatches,
            "rank_law_failures": names(&self.rank_law_failures),
            "assembly_failures": names(&self.assembly_failures),
            "passed": self.passed(),
        })
    }
}

/// Runs [`check_cell`] over [`sweep_degrees`] in parallel.
pub fn oracle_sweep(n: u64, max_weight: i64, max_m: i64) -> Result<SweepReport, String> {
    let checks: Vec<CellCheck> = sweep_degrees(n, max_weight, max_m)
        .par_iter()
        .map(|beta| check_cell(n, beta))
        .collect::<Result<_, _>>()?;
    let mut report = SweepReport { n, cells: checks.len(), ..Default::default() };
    for c in checks {
        match c.result.method {
            Method::ClosedForm => report.closed_form += 1,
            Method::PhiImage => report.phi_image += 1,
            Method::Oracle => report.oracle += 1,
        }
        if !c.rank_law {
            report.rank_law_failures.push(c.result.degree.clone());
        }
        if !c.assembly_agrees {
            report.assembly_failures.push(c.result.degree.clone());
        }
        report.mismatches.extend(c.mismatches);
    }
    Ok(report)
}

fn element(n: u64, s: &str) -> SymbolicElement {
    parse_element(n, s).expect("generated elements parse")
}

fn expect(failures: &mut Vec<String>, what: String, got: &SymbolicElement, want: &SymbolicElement) {
    if got != want {
        failures.push(format!("{what}: got {got}, expected {want}"));
    }
}

/// Checks the product rules over the divisors of `n`: the gold and Euler
/// relations, the bracket identities, `χ` as a unit, `γγ = 0` and
/// commutativity on all pairs of basic classes. Returns the failures.
pub fn ring_checks(n: u64) -> Vec<String> {
    let ds = divisors(n);
    let mut failures = Vec::new();
    let zero = SymbolicElement::Zero;
    let one = element(n, "1");
    let norm = |s: String| normalize(n, &element(n, &s)).expect("valid element");
    for &b in &ds {
        expect(&mut failures, format!("{b}*a{b}"), &norm(format!("{b}*a{b}")), &zero);
        if b > 1 {
            let g = element(n, &format!("gamma{b}"));
            expect(&mut failures, format!("gamma{b}^2"), &multiply(n, &g, &g), &zero);
        }
        for &c in &ds {
            let g = gcd(b, c);
            let l = lcm(b, c).expect("divisors of n");
            let gold = format!("{}*a{b}*u{c} - {}*a{c}*u{b}", b / g, c / g);
            expect(&mut failures, gold.clone(), &norm(gold), &zero);
            let br = element(n, &format!("u[{c}:{b}]"));
            let on_a = multiply(n, &br, &element(n, &format!("a{b}")));
            expect(&mut failures, format!("u[{c}:{b}]*a{b}"), &on_a, &norm(format!("{}*a{c}", c / g)));
            let on_u = multiply(n, &br, &element(n, &format!("u{b}")));
            expect(&mut failures, format!("u[{c}:{b}]*u{b}"), &on_u, &norm(format!("{}*u{c}", b / g)));
            let back = multiply(n, &br, &element(n, &format!("u[{b}:{c}]")));
            expect(&mut failures, format!("u[{c}:{b}]*u[{b}:{c}]"), &back, &norm(format!("{}", l / g)));
            let chi = multiply(n, &element(n, &format!("chi({b},{c})")), &element(n, &format!("chi({b},{c})^-1")));
            expect(&mut failures, format!("chi({b},{c}) unit"), &chi, &one);
            for &d in &ds {
                let k = lcm(l, d).expect("divisors of n") / lcm(b, d).expect("divisors of n")
                    * (gcd(b, d) / gcd(g, d));
                let comp = multiply(n, &element(n, &format!("u[{d}:{c}]")), &br);
                expect(&mut failures, format!("u[{d}:{c}]*u[{c}:{b}]"), &comp, &norm(format!("{k}*u[{d}:{b}]")));
            }
        }
    }
    let mut basic = Vec::new();
    for &d in &ds {
        basic.push(format!("a{d}"));
        basic.push(format!("u{d}"));
        basic.push(format!("gamma{d}"));
        basic.push(format!("edge({d})"));
        for &c in &ds {
            basic.push(format!("u[{c}:{d}]"));
        }
    }
    let basic: Vec<SymbolicElement> = basic.iter().map(|s| element(n, s)).collect();
    for x in &basic {
        for y in &basic {
            let (xy, yx) = (multiply(n, x, y), multiply(n, y, x));
            if xy != yx {
                failures.push(format!("{x} * {y} = {xy} but {y} * {x} = {yx}"));
            }
        }
    }
    failures
}
