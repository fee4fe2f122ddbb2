//! Symbolic products of named classes.
//!
//! Elements are names, not chain maps. A class is a sum of terms, each an
//! integer times a product of [`Atom`]s: Euler classes `a_d`, orientation
//! classes `u_d`, bracket classes `u_{[c:b]}`, the units `χ_{b,c}^{±1}`,
//! integral edge classes `[b]/u_b` and Ω-fractions `Ω/(u_U a_A)` with
//! `γ_b = Ω/(u_b a_b)`.
//!
//! [`normalize`] rewrites a class with the known product rules until no
//! rule applies. Monomials in `a` and `u` alone are then brought to the
//! canonical generators of their degree one prime at a time, Ω-fractions
//! are reduced modulo their order, and whatever is left is kept as a
//! formal product. A product that the rules leave open (and that does not
//! vanish for degree reasons) yields [`SymbolicElement::Unknown`] naming
//! the open case. All products are reported up to a global sign.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use crate::arith::{associated_string, ell_parts, gcd, is_divisor_string, lcm, lcm_all, prime_divisors};
use crate::cohomology::{classify, negative_group, positive_group, GradingDegree, RegionClass};
use crate::error::{invalid, Error, Result};

/// A named factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    /// The Euler class `a_d` in degree `λ_d`.
    A(u64),
    /// The orientation class `u_d` in degree `λ_d - 2`.
    U(u64),
    /// The bracket class `u_{[c:b]}` in degree `λ_c - λ_b`, stored as
    /// `(c, b)`.
    Bracket(u64, u64),
    /// The unit `χ_{b,c}^{±1}` in degree `±(λ_{(b,c)} + λ_{[b,c]} - λ_b - λ_c)`,
    /// stored with `b < c`.
    Chi(u64, u64, i8),
    /// The integral edge class `[b]/u_b` in degree `2s - λ_b`.
    Edge(Vec<u64>),
    /// The fraction `Ω/(u_U a_A)` in degree `2|U| + 1 - λ_U - λ_A`, where
    /// `U` followed by `A` is a divisor string.
    Omega(Vec<u64>, Vec<u64>),
}

impl Atom {
    /// The degree of the factor.
    pub fn degree(&self) -> Result<GradingDegree> {
        match self {
            Atom::A(d) => GradingDegree::new(0, &[(*d, 1)]),
            Atom::U(d) => GradingDegree::new(-2, &[(*d, 1)]),
            Atom::Bracket(c, b) => GradingDegree::new(0, &[(*c, 1), (*b, -1)]),
            Atom::Chi(b, c, e) => {
                let k = i64::from(*e);
                let g = gcd(*b, *c);
                let l = lcm(*b, *c)?;
                GradingDegree::new(0, &[(g, k), (l, k), (*b, -k), (*c, -k)])
            }
            Atom::Edge(b) => GradingDegree::from_tuples(2 * b.len() as i64, &[], b),
            Atom::Omega(u, a) => {
                let mut deg = GradingDegree::from_tuples(1 + 2 * u.len() as i64, &[], u)?;
                for &d in a {
                    deg.add_lambda(d, -1)?;
                }
                Ok(deg)
            }
        }
    }

    fn indices(&self) -> Vec<u64> {
        match self {
            Atom::A(d) | Atom::U(d) => vec![*d],
            Atom::Bracket(c, b) => vec![*c, *b],
            Atom::Chi(b, c, _) => vec![*b, *c],
            Atom::Edge(b) => b.clone(),
            Atom::Omega(u, a) => u.iter().chain(a).copied().collect(),
        }
    }

    /// The additive order of a torsion factor, if it is one.
    fn torsion_order(&self) -> Option<u64> {
        match self {
            Atom::A(d) => Some(*d),
            Atom::Omega(u, _) => u.last().copied(),
            _ => None,
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::A(d) => write!(f, "a{d}"),
            Atom::U(d) => write!(f, "u{d}"),
            Atom::Bracket(c, b) => write!(f, "u[{c}:{b}]"),
            Atom::Chi(b, c, e) => {
                write!(f, "chi({b},{c})")?;
                if *e < 0 {
                    f.write_str("^-1")?;
                }
                Ok(())
            }
            Atom::Edge(b) => write!(f, "edge({})", join(b, ",")),
            Atom::Omega(u, a) => {
                if u.len() == 1 && a.len() == 1 && u[0] == a[0] {
                    write!(f, "gamma{}", u[0])
                } else {
                    write!(f, "omega(u:{}; a:{})", join(u, ","), join(a, ","))
                }
            }
        }
    }
}

fn join(xs: &[u64], sep: &str) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    parts.join(sep)
}

/// A monomial `coef · Π a_d^{i_d} Π u_d^{j_d}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct AUMonomial {
    /// The integer coefficient.
    pub coef: i64,
    /// Exponents of the Euler classes.
    pub a: BTreeMap<u64, u32>,
    /// Exponents of the orientation classes.
    pub u: BTreeMap<u64, u32>,
}

impl AUMonomial {
    /// The integer `k` as a monomial.
    pub fn integer(k: i64) -> Self {
        AUMonomial { coef: k, ..Default::default() }
    }

    /// `a_d`.
    pub fn a(d: u64) -> Self {
        let mut m = Self::integer(1);
        m.a.insert(d, 1);
        m
    }

    /// `u_d`.
    pub fn u(d: u64) -> Self {
        let mut m = Self::integer(1);
        m.u.insert(d, 1);
        m
    }

    fn atoms(&self) -> Vec<Atom> {
        let mut out = Vec::new();
        for (&d, &k) in &self.a {
            out.extend(core::iter::repeat(Atom::A(d)).take(k as usize));
        }
        for (&d, &k) in &self.u {
            out.extend(core::iter::repeat(Atom::U(d)).take(k as usize));
        }
        out
    }
}

/// A class in `H^★(pt)`, as a name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolicElement {
    /// A monomial in the `a`- and `u`-classes; an integer when both
    /// exponent maps are empty.
    AUMonomial(AUMonomial),
    /// The bracket class `u_{[c:b]}`.
    UBracket {
        /// Index of the numerator.
        c: u64,
        /// Index of the denominator.
        b: u64,
    },
    /// The unit `χ_{b,c}^{exponent}`.
    Chi {
        /// First index.
        b: u64,
        /// Second index.
        c: u64,
        /// `1` or `-1`.
        exponent: i8,
    },
    /// `coef · [b]/u_b` on the integral edge.
    EdgeFraction {
        /// The integer multiple.
        coef: i64,
        /// The tuple `b`.
        b: Vec<u64>,
    },
    /// `coef · Ω/(u_{u_part} a_{a_part})` in the torsion part of the
    /// negative cone.
    OmegaFraction {
        /// The integer multiple.
        coef: i64,
        /// Indices of the `u`-classes in the denominator.
        u_part: Vec<u64>,
        /// Indices of the `a`-classes in the denominator.
        a_part: Vec<u64>,
    },
    /// A formal product of factors with no applicable rule.
    Product {
        /// The integer multiple.
        coef: i64,
        /// The factors, sorted.
        factors: Vec<Atom>,
    },
    /// A homogeneous sum of terms.
    Sum(Vec<SymbolicElement>),
    /// Zero.
    Zero,
    /// A product left open, with the reason.
    Unknown(String),
}

/// The class `γ_b ∈ H^{3 - 2λ_b}`, the image of `1_b □ 1_b` under the
/// generalised Bockstein `Γ_b`; as an Ω-fraction it is `Ω/(u_b a_b)`.
pub fn gamma(b: u64) -> SymbolicElement {
    SymbolicElement::OmegaFraction { coef: 1, u_part: vec![b], a_part: vec![b] }
}

/// An additive order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    /// Exactly this finite order.
    Finite(u64),
    /// The order divides this number (formal products of torsion factors).
    Divides(u64),
    /// Infinite order.
    Infinite,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Divides(k) => write!(f, "divides {k}"),
            Order::Infinite => f.write_str("infinite"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Term {
    atoms: Vec<Atom>,
    coef: i64,
}

impl Term {
    fn new(coef: i64, mut atoms: Vec<Atom>) -> Self {
        atoms.sort();
        Term { atoms, coef }
    }

    fn is_au(&self) -> bool {
        self.atoms.iter().all(|x| matches!(x, Atom::A(_) | Atom::U(_)))
    }

    fn degree(&self) -> Result<GradingDegree> {
        let mut deg = GradingDegree::integer(0);
        for x in &self.atoms {
            deg = deg.plus(&x.degree()?);
        }
        Ok(deg)
    }
}

/// A sum of terms, or an open product.
enum Poly {
    Terms(Vec<Term>),
    Open(String),
}

fn overflow() -> Error {
    Error::Overflow("coefficient does not fit in i64".into())
}

fn mul(x: i64, y: i64) -> Result<i64> {
    x.checked_mul(y).ok_or_else(overflow)
}

fn to_poly(e: &SymbolicElement) -> Result<Poly> {
    use SymbolicElement as S;
    let term = |coef: i64, atoms: Vec<Atom>| Ok(Poly::Terms(vec![Term::new(coef, atoms)]));
    match e {
        S::AUMonomial(m) => term(m.coef, m.atoms()),
        S::UBracket { c, b } => term(1, vec![Atom::Bracket(*c, *b)]),
        S::Chi { b, c, exponent } => {
            if *exponent != 1 && *exponent != -1 {
                return Err(invalid(format!("chi exponent must be 1 or -1, got {exponent}")));
            }
            term(1, vec![Atom::Chi(*b.min(c), *b.max(c), *exponent)])
        }
        S::EdgeFraction { coef, b } => {
            let mut b = b.clone();
            b.sort_unstable();
            term(*coef, vec![Atom::Edge(b)])
        }
        S::OmegaFraction { coef, u_part, a_part } => term(*coef, vec![omega_atom(u_part, a_part)?]),
        S::Product { coef, factors } => term(*coef, factors.clone()),
        S::Sum(xs) => {
            let mut out = Vec::new();
            for x in xs {
                match to_poly(x)? {
                    Poly::Terms(ts) => out.extend(ts),
                    open => return Ok(open),
                }
            }
            Ok(Poly::Terms(out))
        }
        S::Zero => Ok(Poly::Terms(Vec::new())),
        S::Unknown(reason) => Ok(Poly::Open(reason.clone())),
    }
}

/// Validates an Ω-fraction denominator and returns it with both parts
/// sorted.
fn omega_atom(u_part: &[u64], a_part: &[u64]) -> Result<Atom> {
    let show = || format!("omega(u:{}; a:{})", join(u_part, ","), join(a_part, ","));
    if u_part.is_empty() {
        return Err(invalid(format!("{}: the denominator needs a u-class", show())));
    }
    if a_part.is_empty() {
        return Err(invalid(format!("{}: the denominator needs an a-class", show())));
    }
    let mut u = u_part.to_vec();
    let mut a = a_part.to_vec();
    u.sort_unstable();
    a.sort_unstable();
    let all: Vec<u64> = u.iter().chain(&a).copied().collect();
    if all.contains(&0) || !is_divisor_string(&all) {
        return Err(invalid(format!(
            "{}: the u-indices followed by the a-indices must form a divisor string",
            show()
        )));
    }
    Ok(Atom::Omega(u, a))
}

fn from_term(t: Term) -> SymbolicElement {
    use SymbolicElement as S;
    if t.coef == 0 {
        return S::Zero;
    }
    if t.is_au() {
        let mut m = AUMonomial::integer(t.coef);
        for x in &t.atoms {
            match x {
                Atom::A(d) => *m.a.entry(*d).or_insert(0) += 1,
                Atom::U(d) => *m.u.entry(*d).or_insert(0) += 1,
                _ => unreachable!("checked by is_au"),
            }
        }
        return S::AUMonomial(m);
    }
    if t.atoms.len() == 1 {
        match (&t.atoms[0], t.coef) {
            (Atom::Bracket(c, b), 1) => return S::UBracket { c: *c, b: *b },
            (Atom::Chi(b, c, e), 1) => return S::Chi { b: *b, c: *c, exponent: *e },
            (Atom::Edge(b), k) => return S::EdgeFraction { coef: k, b: b.clone() },
            (Atom::Omega(u, a), k) => {
                return S::OmegaFraction { coef: k, u_part: u.clone(), a_part: a.clone() }
            }
            _ => {}
        }
    }
    S::Product { coef: t.coef, factors: t.atoms }
}

fn from_poly(p: Poly) -> SymbolicElement {
    match p {
        Poly::Open(reason) => SymbolicElement::Unknown(reason),
        Poly::Terms(mut ts) => {
            ts.retain(|t| t.coef != 0);
            match ts.len() {
                0 => SymbolicElement::Zero,
                1 => from_term(ts.pop().expect("one term")),
                _ => SymbolicElement::Sum(ts.into_iter().map(from_term).collect()),
            }
        }
    }
}

/// Checks that every index divides `n` and that `n` is odd.
pub fn validate(n: u64, e: &SymbolicElement) -> Result<()> {
    if n == 0 || n % 2 == 0 {
        return Err(invalid(format!("n must be odd, got {n}")));
    }
    match to_poly(e)? {
        Poly::Open(_) => Ok(()),
        Poly::Terms(ts) => {
            for t in &ts {
                for x in &t.atoms {
                    if let Some(d) = x.indices().into_iter().find(|&d| d == 0 || n % d != 0) {
                        return Err(invalid(format!("{x}: {d} does not divide {n}")));
                    }
                }
            }
            Ok(())
        }
    }
}

/// The degree of a class.
///
/// ```
/// use bredon_core::ring::{degree_of, gamma};
/// assert_eq!(degree_of(&gamma(9)).unwrap().to_string(), "3 - 2*l9");
/// ```
pub fn degree_of(e: &SymbolicElement) -> Result<GradingDegree> {
    match to_poly(e)? {
        Poly::Open(reason) => Err(invalid(format!("the degree of an unknown product ({reason})"))),
        Poly::Terms(ts) => match ts.first() {
            Some(t) => t.degree(),
            None => Err(invalid("zero has no well-defined degree")),
        },
    }
}

/// The additive order of a class, after normalization.
///
/// ```
/// use bredon_core::ring::{gamma, order_of, Order, SymbolicElement, AUMonomial};
/// assert_eq!(order_of(9, &gamma(9)).unwrap(), Order::Finite(9));
/// let a9 = SymbolicElement::AUMonomial(AUMonomial::a(9));
/// assert_eq!(order_of(9, &a9).unwrap(), Order::Finite(9));
/// ```
pub fn order_of(n: u64, e: &SymbolicElement) -> Result<Order> {
    validate(n, e)?;
    let ts = match normalize_poly(to_poly(e)?, &mut Vec::new())? {
        Poly::Open(reason) => return Err(invalid(format!("the order of an unknown product ({reason})"))),
        Poly::Terms(ts) => ts,
    };
    if ts.is_empty() {
        return Ok(Order::Finite(1));
    }
    if ts.iter().all(Term::is_au) {
        return au_order(&ts);
    }
    let mut exact = 1u64;
    let mut bound = 1u64;
    for t in &ts {
        match term_order(t) {
            Order::Infinite => return Ok(Order::Infinite),
            Order::Finite(k) => exact = lcm(exact, k)?,
            Order::Divides(k) => bound = lcm(bound, k)?,
        }
    }
    Ok(if bound == 1 { Order::Finite(exact) } else { Order::Divides(lcm(exact, bound)?) })
}

fn term_order(t: &Term) -> Order {
    match torsion_bound(t) {
        None => Order::Infinite,
        Some(g) => {
            let k = g / gcd(g, t.coef.unsigned_abs());
            if t.atoms.len() == 1 {
                Order::Finite(k)
            } else {
                Order::Divides(k)
            }
        }
    }
}

fn torsion_bound(t: &Term) -> Option<u64> {
    t.atoms.iter().filter_map(Atom::torsion_order).reduce(gcd)
}

/// Brings a class to normal form.
///
/// ```
/// use bredon_core::ring::{normalize, parse_element};
/// let e = parse_element(45, "9*a9").unwrap();
/// assert_eq!(normalize(45, &e).unwrap().to_string(), "0");
/// let gold = parse_element(45, "5*a15*u9 - 3*a9*u15").unwrap();
/// assert_eq!(normalize(45, &gold).unwrap().to_string(), "0");
/// ```
pub fn normalize(n: u64, e: &SymbolicElement) -> Result<SymbolicElement> {
    validate(n, e)?;
    Ok(from_poly(normalize_poly(to_poly(e)?, &mut Vec::new())?))
}

/// The product of two classes, normalized. Open cases of the rule set
/// give [`SymbolicElement::Unknown`]; invalid input gives `Unknown` with
/// the error message.
///
/// ```
/// use bredon_core::ring::{gamma, multiply, parse_element, SymbolicElement};
/// assert_eq!(multiply(9, &gamma(9), &gamma(9)), SymbolicElement::Zero);
/// let x = parse_element(9, "u[9:3]").unwrap();
/// let y = parse_element(9, "u[3:9]").unwrap();
/// assert_eq!(multiply(9, &x, &y).to_string(), "3");
/// ```
pub fn multiply(n: u64, x: &SymbolicElement, y: &SymbolicElement) -> SymbolicElement {
    match try_multiply(n, x, y) {
        Ok(e) => e,
        Err(err) => SymbolicElement::Unknown(err.to_string()),
    }
}

/// The product of two classes, with invalid input reported as an error.
pub fn try_multiply(n: u64, x: &SymbolicElement, y: &SymbolicElement) -> Result<SymbolicElement> {
    Ok(multiply_explained(n, x, y)?.0)
}

/// The product of two classes together with the names of the rules that
/// were applied, in order of first use.
///
/// ```
/// use bredon_core::ring::{multiply_explained, parse_element};
/// let x = parse_element(9, "a3").unwrap();
/// let y = parse_element(9, "edge(3)").unwrap();
/// let (z, rules) = multiply_explained(9, &x, &y).unwrap();
/// assert_eq!(z.to_string(), "0");
/// assert_eq!(rules, ["a-class on an edge class"]);
/// ```
pub fn multiply_explained(
    n: u64,
    x: &SymbolicElement,
    y: &SymbolicElement,
) -> Result<(SymbolicElement, Vec<&'static str>)> {
    validate(n, x)?;
    validate(n, y)?;
    let (px, py) = match (to_poly(x)?, to_poly(y)?) {
        (Poly::Open(r), _) | (_, Poly::Open(r)) => return Ok((SymbolicElement::Unknown(r), Vec::new())),
        (Poly::Terms(a), Poly::Terms(b)) => (a, b),
    };
    let mut out = Vec::new();
    for s in &px {
        for t in &py {
            let mut atoms = s.atoms.clone();
            atoms.extend(t.atoms.iter().cloned());
            out.push(Term::new(mul(s.coef, t.coef)?, atoms));
        }
    }
    let mut trace = Vec::new();
    let z = from_poly(normalize_poly(Poly::Terms(out), &mut trace)?);
    Ok((z, trace))
}

type Trace = Vec<&'static str>;

fn note(trace: &mut Trace, rule: &'static str) {
    if !trace.contains(&rule) {
        trace.push(rule);
    }
}

fn normalize_poly(p: Poly, trace: &mut Trace) -> Result<Poly> {
    let ts = match p {
        Poly::Open(r) => return Ok(Poly::Open(r)),
        Poly::Terms(ts) => ts,
    };
    let mut au = Vec::new();
    let mut open: Option<String> = None;
    let mut other: BTreeMap<Vec<Atom>, i64> = BTreeMap::new();
    for t in ts {
        match normalize_term(t, trace)? {
            TermOutcome::Open(r) => {
                // Report the least open case so the result does not depend
                // on the order of the factors.
                if open.as_ref().map_or(true, |o| r < *o) {
                    open = Some(r);
                }
            }
            TermOutcome::Zero => {}
            TermOutcome::Term(t) if t.is_au() => au.push(t),
            TermOutcome::Term(t) => {
                let c = other.entry(t.atoms).or_insert(0);
                *c = c.checked_add(t.coef).ok_or_else(overflow)?;
            }
        }
    }
    if let Some(r) = open {
        return Ok(Poly::Open(r));
    }
    let mut out = Vec::new();
    for (atoms, coef) in other {
        let t = reduce_coefficient(Term::new(coef, atoms));
        if t.coef != coef {
            note(trace, "coefficient reduced modulo the order");
        }
        if t.coef != 0 {
            out.push(t);
        }
    }
    let mut by_degree: BTreeMap<GradingDegree, Vec<Term>> = BTreeMap::new();
    for t in au {
        by_degree.entry(t.degree()?).or_default().push(t);
    }
    for (_, ts) in by_degree {
        let normal = au_normal_form(&ts)?.0;
        if normal != ts {
            note(trace, "gold and Euler relations");
        }
        out.extend(normal);
    }
    out.sort();
    Ok(Poly::Terms(out))
}

fn reduce_coefficient(mut t: Term) -> Term {
    if let Some(g) = torsion_bound(&t) {
        t.coef = t.coef.rem_euclid(g as i64);
    }
    t
}

enum TermOutcome {
    Term(Term),
    Zero,
    Open(String),
}

enum Rewrite {
    Replace(i64, Vec<Atom>),
    Zero,
    Open(String),
}

/// Simplifies trivial factors: `u_1 = 1`, `a_1 = 0`, `u_{[c:c]} = 1`,
/// `u_{[c:1]} = u_c`, `u_{[1:b]} = [b]/u_b`, `χ_{b,c} = 1` when one index
/// divides the other, ones in edge tuples, and Ω-fractions of order one.
fn simplify_atom(x: Atom) -> Option<Vec<Atom>> {
    Some(match x {
        Atom::U(1) => vec![],
        Atom::A(1) => return None,
        Atom::Bracket(c, b) if c == b => vec![],
        Atom::Bracket(c, 1) => vec![Atom::U(c)],
        Atom::Bracket(1, b) => vec![Atom::Edge(vec![b])],
        Atom::Chi(b, c, _) if c % b == 0 || b % c == 0 => vec![],
        Atom::Edge(b) => {
            let b: Vec<u64> = b.into_iter().filter(|&d| d != 1).collect();
            if b.is_empty() {
                vec![]
            } else {
                vec![Atom::Edge(b)]
            }
        }
        Atom::Omega(u, a) => {
            if u.last() == Some(&1) {
                return None;
            }
            let u: Vec<u64> = u.into_iter().filter(|&d| d != 1).collect();
            vec![Atom::Omega(u, a)]
        }
        other => vec![other],
    })
}

fn simplify_all(atoms: Vec<Atom>) -> Option<Vec<Atom>> {
    let mut out = Vec::new();
    for x in atoms {
        out.extend(simplify_atom(x)?);
    }
    out.sort();
    Some(out)
}

fn normalize_term(t: Term, trace: &mut Trace) -> Result<TermOutcome> {
    if t.coef == 0 {
        return Ok(TermOutcome::Zero);
    }
    let mut coef = t.coef;
    let Some(mut atoms) = simplify_all(t.atoms) else {
        note(trace, "a_1 = 0");
        return Ok(TermOutcome::Zero);
    };
    'outer: loop {
        let mut open = None;
        for i in 0..atoms.len() {
            for j in i + 1..atoms.len() {
                let rw = match pair_rule(&atoms[i], &atoms[j])? {
                    Some(rw) => rw,
                    None => match pair_rule(&atoms[j], &atoms[i])? {
                        Some(rw) => rw,
                        None => continue,
                    },
                };
                let rule = rule_name(&atoms[i], &atoms[j]);
                match rw {
                    Rewrite::Zero => {
                        note(trace, rule);
                        return Ok(TermOutcome::Zero);
                    }
                    Rewrite::Open(reason) => {
                        let deg = atoms[i].degree()?.plus(&atoms[j].degree()?);
                        if vanishes(&deg)? {
                            note(trace, "the target group vanishes");
                            return Ok(TermOutcome::Zero);
                        }
                        if open.is_none() {
                            open = Some(format!("{} * {}: {reason}", atoms[i], atoms[j]));
                        }
                    }
                    Rewrite::Replace(k, new) => {
                        note(trace, rule);
                        coef = mul(coef, k)?;
                        let (x, y) = (atoms[i].clone(), atoms[j].clone());
                        atoms.remove_once(&x);
                        atoms.remove_once(&y);
                        for z in new {
                            match simplify_atom(z) {
                                None => return Ok(TermOutcome::Zero),
                                Some(zs) => atoms.extend(zs),
                            }
                        }
                        atoms.sort();
                        continue 'outer;
                    }
                }
            }
        }
        if let Some((k, rule)) = term_rule(&mut atoms)? {
            note(trace, rule);
            coef = mul(coef, k)?;
            match simplify_all(core::mem::take(&mut atoms)) {
                None => return Ok(TermOutcome::Zero),
                Some(xs) => atoms = xs,
            }
            continue;
        }
        if let Some(reason) = open {
            return Ok(TermOutcome::Open(reason));
        }
        break;
    }
    let t = reduce_coefficient(Term::new(coef, atoms));
    Ok(if t.coef == 0 { TermOutcome::Zero } else { TermOutcome::Term(t) })
}

trait RemoveOnce<T> {
    fn remove_once(&mut self, x: &T);
}

impl<T: PartialEq> RemoveOnce<T> for Vec<T> {
    fn remove_once(&mut self, x: &T) {
        if let Some(i) = self.iter().position(|y| y == x) {
            self.remove(i);
        }
    }
}

fn remove_one(xs: &[u64], x: u64) -> Vec<u64> {
    let mut out = xs.to_vec();
    if let Some(i) = out.iter().position(|&y| y == x) {
        out.remove(i);
    }
    out
}

fn insert_sorted(xs: &[u64], x: u64) -> Vec<u64> {
    let mut out = xs.to_vec();
    out.push(x);
    out.sort_unstable();
    out
}

fn quotient(x: u64, y: u64) -> i64 {
    (x / y) as i64
}

/// A name for the rule that rewrites a pair of factors.
fn rule_name(x: &Atom, y: &Atom) -> &'static str {
    use Atom::*;
    let (x, y) = if x <= y { (x, y) } else { (y, x) };
    match (x, y) {
        (Omega(..), Omega(..)) => "products of torsion-cone classes vanish",
        (U(_), Omega(..)) => "u-class on an omega fraction",
        (A(_), Omega(..)) => "a-class on an omega fraction",
        (Edge(_), Omega(..)) => "edge class on an omega fraction",
        (Bracket(..), Omega(..)) => "bracket on an omega fraction",
        (Edge(_), Edge(_)) => "product of edge classes",
        (U(_), Edge(_)) => "u-class on an edge class",
        (A(_), Edge(_)) => "a-class on an edge class",
        (Bracket(..), Edge(_)) => "bracket on an edge class",
        (Chi(..), Edge(_)) => "chi on an edge class",
        (A(_), Bracket(..)) => "bracket on an a-class",
        (U(_), Bracket(..)) => "bracket on a u-class",
        (Bracket(..), Bracket(..)) => "composition of brackets",
        (Chi(..), Chi(..)) => "chi is a unit",
        _ => "product rule",
    }
}

/// The product rule for an ordered pair of factors, if one is known.
fn pair_rule(x: &Atom, y: &Atom) -> Result<Option<Rewrite>> {
    use Atom::*;
    let open = |why: &str| Ok(Some(Rewrite::Open(why.into())));
    match (x, y) {
        // Products of two torsion-cone classes land where the negative
        // cone is torsion-free or zero.
        (Omega(..), Omega(..)) => Ok(Some(Rewrite::Zero)),
        (Omega(us, as_), U(x)) => {
            let top = *us.last().expect("u-part is nonempty");
            if as_.contains(x) {
                // u_d · Ω/(… u_c a_d …) = (d/c) Ω/(… a_c …)
                let nu = remove_one(us, top);
                if nu.is_empty() {
                    return Ok(Some(Rewrite::Zero));
                }
                let na = insert_sorted(&remove_one(as_, *x), top);
                return Ok(Some(Rewrite::Replace(quotient(*x, top), vec![Omega(nu, na)])));
            }
            let count = us.iter().filter(|&&d| d == *x).count();
            if count >= 2 || (count == 1 && *x != top) {
                return Ok(Some(Rewrite::Replace(1, vec![Omega(remove_one(us, *x), as_.clone())])));
            }
            open("u-multiplication on a torsion-cone class away from the rule set")
        }
        (Omega(us, as_), A(x)) => {
            if as_.contains(x) {
                let na = remove_one(as_, *x);
                if na.is_empty() {
                    return Ok(Some(Rewrite::Zero));
                }
                return Ok(Some(Rewrite::Replace(1, vec![Omega(us.clone(), na)])));
            }
            if us.contains(x) {
                // a_c · Ω/(… u_c a_d …) = (d/c) Ω/(… u_d …)
                let d = as_[0];
                let na = remove_one(as_, d);
                if na.is_empty() {
                    return Ok(Some(Rewrite::Zero));
                }
                let nu = insert_sorted(&remove_one(us, *x), d);
                return Ok(Some(Rewrite::Replace(quotient(d, *x), vec![Omega(nu, na)])));
            }
            open("a-multiplication on a torsion-cone class away from the rule set")
        }
        (Omega(us, as_), Edge(d)) => {
            let top = *us.last().expect("u-part is nonempty");
            let mut merged = us.clone();
            merged.extend(d.iter().copied());
            merged.sort_unstable();
            if d.iter().all(|&x| top % x == 0) && is_divisor_string(&merged) {
                let k = lcm_all(d)?;
                return Ok(Some(Rewrite::Replace(k as i64, vec![Omega(merged, as_.clone())])));
            }
            if lcm_all(d)? % top == 0 {
                return Ok(Some(Rewrite::Zero));
            }
            open("edge class times a torsion-cone class away from the rule set")
        }
        (Omega(us, as_), Bracket(c, b)) => Ok(bracket_on_omega(*c, *b, us, as_)),
        (Edge(b), Edge(c)) => {
            let mut all = b.clone();
            all.extend(c.iter().copied());
            all.sort_unstable();
            // [b][c]/[b,c] = ([b], [c])
            let k = gcd(lcm_all(b)?, lcm_all(c)?);
            Ok(Some(Rewrite::Replace(k as i64, vec![Edge(all)])))
        }
        (Edge(b), U(x)) if b.contains(x) => {
            let rest = remove_one(b, *x);
            let k = lcm_all(b)? / lcm_all(&rest)?;
            Ok(Some(Rewrite::Replace(k as i64, vec![Edge(rest)])))
        }
        (Edge(b), A(x)) if b.contains(x) || lcm_all(b)? % x == 0 => Ok(Some(Rewrite::Zero)),
        (Edge(d), Bracket(x, y)) if d.contains(x) => {
            let rest = insert_sorted(&remove_one(d, *x), *y);
            let num = (*y / gcd(*x, *y)).checked_mul(lcm_all(d)?).ok_or_else(overflow)?;
            let den = lcm_all(&rest)?;
            if num % den != 0 {
                return Ok(None);
            }
            Ok(Some(Rewrite::Replace((num / den) as i64, vec![Edge(rest)])))
        }
        (Edge(d), Chi(b, c, e)) => {
            let g = gcd(*b, *c);
            let l = lcm(*b, *c)?;
            let (from, to) = if *e > 0 { ([g, l], [*b, *c]) } else { ([*b, *c], [g, l]) };
            let mut rest = d.clone();
            for f in from {
                match rest.iter().position(|&z| z == f) {
                    Some(i) => {
                        rest.remove(i);
                    }
                    None => return Ok(None),
                }
            }
            rest.extend(to);
            rest.sort_unstable();
            Ok(Some(Rewrite::Replace(1, vec![Edge(rest)])))
        }
        (Bracket(c, b), A(x)) if b == x => Ok(Some(Rewrite::Replace(quotient(*c, gcd(*b, *c)), vec![A(*c)]))),
        // The bracket relations with a trivial index: u_{[1:c]} is the edge
        // class [c]/u_c and u_{[c:1]} is u_c.
        (Edge(d), Bracket(x, y)) if d.len() == 1 && coprime_pair(*y, d[0]) && *x == y * d[0] => {
            Ok(Some(Rewrite::Replace(d[0] as i64, vec![chi(*y, d[0], 1)])))
        }
        (U(c), Bracket(x, y)) if coprime_pair(*x, *c) && *y == x * c => {
            Ok(Some(Rewrite::Replace(*c as i64, vec![chi(*x, *c, -1)])))
        }
        (U(d), Edge(b)) if b.len() == 1 && b[0] != *d => {
            Ok(Some(Rewrite::Replace(gcd(*d, b[0]) as i64, vec![Bracket(*d, b[0])])))
        }
        (Bracket(c, b), U(x)) if b == x => Ok(Some(Rewrite::Replace(quotient(*b, gcd(*b, *c)), vec![U(*c)]))),
        (Bracket(x1, y1), Bracket(x2, y2)) => {
            if *x1 == lcm(*y1, *y2)? && *x2 == gcd(*y1, *y2) {
                let k = quotient(*y2, gcd(*y1, *y2));
                return Ok(Some(Rewrite::Replace(k, vec![chi(*y1, *y2, 1)])));
            }
            if *y1 == lcm(*x1, *x2)? && *y2 == gcd(*x1, *x2) {
                let k = quotient(*x2, gcd(*x1, *x2));
                return Ok(Some(Rewrite::Replace(k, vec![chi(*x1, *x2, -1)])));
            }
            if y1 == x2 {
                // u_{[d:c]} u_{[c:b]} = ([b,c,d]/[b,d]) ((b,d)/(b,c,d)) u_{[d:b]}
                let (d, c, b) = (*x1, *y1, *y2);
                let k = lcm(lcm(b, c)?, d)? / lcm(b, d)? * (gcd(b, d) / gcd(gcd(b, c), d));
                return Ok(Some(Rewrite::Replace(k as i64, vec![Bracket(d, b)])));
            }
            Ok(None)
        }
        (Chi(b1, c1, e1), Chi(b2, c2, e2)) if b1 == b2 && c1 == c2 && *e1 == -*e2 => {
            Ok(Some(Rewrite::Replace(1, vec![])))
        }
        _ => Ok(None),
    }
}

fn coprime_pair(b: u64, c: u64) -> bool {
    b > 1 && c > 1 && gcd(b, c) == 1
}

fn chi(b: u64, c: u64, e: i8) -> Atom {
    Atom::Chi(b.min(c), b.max(c), e)
}

/// Bracket classes acting on the subtips `γ_b`, `a_bγ_b/a_c` and on
/// `γ_d/u_b`.
fn bracket_on_omega(x: u64, y: u64, us: &[u64], as_: &[u64]) -> Option<Rewrite> {
    use Atom::Omega;
    let om = |u: &[u64], a: &[u64]| Omega(u.to_vec(), a.to_vec());
    match (us, as_) {
        ([u], [a]) if u == a && *u == x => {
            let b = *u;
            if y % b == 0 {
                // u_{[b:c]} γ_b = a_b γ_b / a_c
                Some(Rewrite::Replace(1, vec![om(&[b], &[y])]))
            } else if b % y == 0 {
                // u_{[c:b]} γ_c = a_b γ_b / a_c
                Some(Rewrite::Replace(1, vec![om(&[y], &[b])]))
            } else if x > y {
                // u_{[b:c]} γ_b = u_{[c:b]} γ_c: keep the smaller index on γ.
                Some(Rewrite::Replace(1, vec![Atom::Bracket(y, x), om(&[y], &[y])]))
            } else {
                None
            }
        }
        ([b], [c]) if b != c => {
            let (b, c) = (*b, *c);
            if x == b && y == c {
                // u_{[b:c]} (a_b γ_b / a_c) = (c/b) γ_c
                Some(Rewrite::Replace(quotient(c, b), vec![om(&[c], &[c])]))
            } else if x == c && y == b {
                // u_{[c:b]} (a_b γ_b / a_c) = (c/b) γ_b
                Some(Rewrite::Replace(quotient(c, b), vec![om(&[b], &[b])]))
            } else if x == c && b % y == 0 {
                // u_{[d:b]} (a_c γ_c / a_d) = (d/c) a_b γ_b / a_c, for b | c | d
                Some(Rewrite::Replace(quotient(c, b), vec![om(&[y], &[b])]))
            } else {
                None
            }
        }
        ([b, d], [d2]) if d == d2 && *b == x && y % x == 0 && d % y == 0 => {
            // u_{[b:c]} γ_d / u_b = (c/b) γ_d / u_c, for b | c | d
            Some(Rewrite::Replace(quotient(y, x), vec![om(&[y, *d], &[*d])]))
        }
        _ => None,
    }
}

/// Rules that involve more than two factors of a term. Returns the
/// coefficient multiplier when one fired.
fn term_rule(atoms: &mut Vec<Atom>) -> Result<Option<(i64, &'static str)>> {
    // χ_{b,c} against pairs of a- and u-classes.
    let chis: Vec<Atom> = atoms.iter().filter(|x| matches!(x, Atom::Chi(..))).cloned().collect();
    for ch in chis {
        let Atom::Chi(b, c, e) = ch else { continue };
        let g = gcd(b, c);
        let l = lcm(b, c)?;
        let rules: Vec<([Atom; 2], [Atom; 2], i64)> = if e > 0 {
            vec![
                ([Atom::U(b), Atom::U(c)], [Atom::U(g), Atom::U(l)], 1),
                ([Atom::A(b), Atom::A(c)], [Atom::A(g), Atom::A(l)], 1),
                ([Atom::A(b), Atom::U(c)], [Atom::A(l), Atom::U(g)], quotient(c, g)),
                ([Atom::A(c), Atom::U(b)], [Atom::A(l), Atom::U(g)], quotient(b, g)),
            ]
        } else {
            vec![
                ([Atom::U(g), Atom::U(l)], [Atom::U(b), Atom::U(c)], 1),
                ([Atom::A(g), Atom::A(l)], [Atom::A(b), Atom::A(c)], 1),
            ]
        };
        for (from, to, k) in rules {
            let mut rest = atoms.clone();
            let ok = from.iter().all(|f| match rest.iter().position(|z| z == f) {
                Some(i) => {
                    rest.remove(i);
                    true
                }
                None => false,
            });
            if ok {
                rest.remove_once(&ch);
                rest.extend(to);
                *atoms = rest;
                return Ok(Some((k, "chi on a- and u-classes")));
            }
        }
    }
    // u_{[b:c]}^2 γ_b = ([b,c]/(b,c)) γ_c.
    let brackets: Vec<(u64, u64)> = atoms
        .iter()
        .filter_map(|x| match x {
            Atom::Bracket(c, b) => Some((*c, *b)),
            _ => None,
        })
        .collect();
    for &(x, y) in &brackets {
        let twice = brackets.iter().filter(|&&p| p == (x, y)).count() >= 2;
        let g = Atom::Omega(vec![x], vec![x]);
        if twice && atoms.contains(&g) {
            atoms.remove_once(&Atom::Bracket(x, y));
            atoms.remove_once(&Atom::Bracket(x, y));
            atoms.remove_once(&g);
            atoms.push(Atom::Omega(vec![y], vec![y]));
            return Ok(Some((quotient(lcm(x, y)?, gcd(x, y)), "squared bracket on a gamma class")));
        }
    }
    Ok(None)
}

/// True when the closed forms show `H^β = 0`.
fn vanishes(beta: &GradingDegree) -> Result<bool> {
    if beta.mult.is_empty() {
        return Ok(beta.m != 0);
    }
    let n = lcm_all(&beta.mult.keys().copied().collect::<Vec<_>>())?;
    if n % 2 == 0 {
        return Ok(false);
    }
    Ok(match classify(beta) {
        RegionClass::ZeroByBounds => true,
        RegionClass::PositiveCone => positive_group(n, &beta.positive(), -beta.m)?.levels.is_zero(),
        RegionClass::NegativeConeTorsion | RegionClass::IntegralEdge => {
            negative_group(n, &beta.negative(), beta.m)?.levels.is_zero()
        }
        RegionClass::Irregular => false,
    })
}

fn split_au(t: &Term) -> (Vec<u64>, Vec<u64>) {
    let mut a = Vec::new();
    let mut u = Vec::new();
    for x in &t.atoms {
        match x {
            Atom::A(d) => a.push(*d),
            Atom::U(d) => u.push(*d),
            _ => {}
        }
    }
    (a, u)
}

fn modinv(x: u64, m: u64) -> u64 {
    let g = (x as i64).extended_gcd(&(m as i64));
    debug_assert_eq!(g.gcd, 1);
    g.x.rem_euclid(m as i64) as u64
}

/// `ℓ`-locally a monomial is a multiple of the canonical one, whose `u`'s
/// sit on the indices of smallest `ℓ`-adic valuation. Returns that
/// multiple modulo `m = e(ℓ)`, reached by repeated swaps
/// `a_i u_j = (b_j/(b_i,b_j)) (b_i/(b_i,b_j))^{-1} a_j u_i`.
fn local_factor(t: &Term, ell: u64, m: u64) -> u64 {
    let key = |d: u64| (ell_parts(d, ell).expect("prime").0, d);
    let (mut s, mut u) = split_au(t);
    let mut factor: u128 = 1;
    let m128 = u128::from(m);
    loop {
        let i = *s.iter().min_by_key(|&&d| key(d)).expect("torsion monomial");
        let j = match u.iter().max_by_key(|&&d| key(d)) {
            Some(&j) => j,
            None => break,
        };
        if key(i) >= key(j) {
            break;
        }
        let g = gcd(i, j);
        let alpha = (i / g) % m;
        let beta = u128::from((j / g) % m);
        factor = factor * beta % m128 * u128::from(modinv(alpha, m)) % m128;
        s = insert_sorted(&remove_one(&s, i), j);
        u = insert_sorted(&remove_one(&u, j), i);
    }
    factor as u64
}

/// Chinese remaindering over pairwise coprime moduli.
fn crt(parts: &[(u64, u64)]) -> (u64, u64) {
    let modulus: u64 = parts.iter().map(|p| p.1).product();
    let mut c: u128 = 0;
    for &(r, m) in parts {
        if m == 1 {
            continue;
        }
        let rest = modulus / m;
        let lift = u128::from(r) * u128::from(rest) % u128::from(modulus) * u128::from(modinv(rest % m, m));
        c = (c + lift) % u128::from(modulus);
    }
    (c as u64, modulus)
}

/// Normal form of a sum of monomials in one degree. The degree fixes the
/// multiset `B` of indices and the number `r` of `u`'s; the group is
/// `Z/e` with `e = (B; r + 1)`, or `Z` when there is no `a`. The result is
/// a sum of canonical monomials, one per class of primes sharing a
/// canonical monomial, each with its coefficient reduced modulo its order.
fn au_normal_form(ts: &[Term]) -> Result<(Vec<Term>, Order)> {
    let (a0, u0) = split_au(&ts[0]);
    if a0.is_empty() {
        let mut coef: i64 = 0;
        for t in ts {
            coef = coef.checked_add(t.coef).ok_or_else(overflow)?;
        }
        let t = Term::new(coef, ts[0].atoms.clone());
        return Ok(if coef == 0 { (vec![], Order::Finite(1)) } else { (vec![t], Order::Infinite) });
    }
    let r = u0.len();
    let mut all: Vec<u64> = a0.iter().chain(&u0).copied().collect();
    all.sort_unstable();
    let e = associated_string(&all)?[r];
    let primes: Vec<(u64, u64)> =
        prime_divisors(e).into_iter().map(|ell| (ell, ell_parts(e, ell).expect("prime").0)).collect();
    let mut order = 1u64;
    let mut groups: BTreeMap<Vec<Atom>, Vec<(u64, u64)>> = BTreeMap::new();
    for &(ell, m) in &primes {
        let mut total: i128 = 0;
        for t in ts {
            total += i128::from(t.coef) * i128::from(local_factor(t, ell, m));
        }
        let c = total.rem_euclid(i128::from(m)) as u64;
        order *= m / gcd(m, c);
        let mut canon = all.clone();
        canon.sort_by_key(|&d| (ell_parts(d, ell).expect("prime").0, d));
        let mut atoms: Vec<Atom> = canon[..r].iter().map(|&d| Atom::U(d)).collect();
        atoms.extend(canon[r..].iter().map(|&d| Atom::A(d)));
        atoms.sort();
        groups.entry(atoms).or_default().push((ell, c));
    }
    let mut out = Vec::new();
    for (atoms, coords) in groups {
        if coords.iter().all(|&(_, c)| c == 0) {
            continue;
        }
        let monomial = Term::new(1, atoms);
        let mut parts = Vec::new();
        for &(q, m) in &primes {
            match coords.iter().find(|&&(ell, _)| ell == q) {
                Some(&(_, c)) => parts.push((c, m)),
                None => {
                    // The monomial must vanish at primes it is not canonical for.
                    let f = local_factor(&monomial, q, m);
                    parts.push((0, m / gcd(m, f)));
                }
            }
        }
        let (c, _) = crt(&parts);
        out.push(Term::new(c as i64, monomial.atoms));
    }
    Ok((out, Order::Finite(order)))
}

fn au_order(ts: &[Term]) -> Result<Order> {
    let mut by_degree: BTreeMap<GradingDegree, Vec<Term>> = BTreeMap::new();
    for t in ts {
        by_degree.entry(t.degree()?).or_default().push(t.clone());
    }
    let mut out = 1u64;
    for (_, ts) in by_degree {
        match au_normal_form(&ts)?.1 {
            Order::Finite(k) => out = lcm(out, k)?,
            other => return Ok(other),
        }
    }
    Ok(Order::Finite(out))
}

impl fmt::Display for SymbolicElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SymbolicElement::Zero => f.write_str("0"),
            SymbolicElement::Unknown(reason) => write!(f, "UNKNOWN: {reason}"),
            SymbolicElement::Sum(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    let s = x.to_string();
                    match (i, s.strip_prefix('-')) {
                        (0, _) => f.write_str(&s)?,
                        (_, Some(rest)) => write!(f, " - {rest}")?,
                        (_, None) => write!(f, " + {s}")?,
                    }
                }
                Ok(())
            }
            other => {
                let t = match to_poly(other) {
                    Ok(Poly::Terms(mut ts)) if ts.len() == 1 => ts.pop().expect("one term"),
                    _ => return f.write_str("?"),
                };
                write_term(f, &t)
            }
        }
    }
}

fn write_term(f: &mut fmt::Formatter<'_>, t: &Term) -> fmt::Result {
    let mut groups: Vec<(&Atom, usize)> = Vec::new();
    for x in &t.atoms {
        match groups.last_mut() {
            Some((y, k)) if *y == x => *k += 1,
            _ => groups.push((x, 1)),
        }
    }
    if groups.is_empty() {
        return write!(f, "{}", t.coef);
    }
    match t.coef {
        1 => {}
        -1 => f.write_str("-")?,
        k => write!(f, "{k}*")?,
    }
    for (i, (x, k)) in groups.iter().enumerate() {
        if i > 0 {
            f.write_str("*")?;
        }
        write!(f, "{x}")?;
        if *k > 1 {
            write!(f, "^{k}")?;
        }
    }
    Ok(())
}

/// Parses an element: sums and differences of products of integers and
/// the factors `a9`, `u9`, `u[9:3]`, `chi(3,9)`, `chi(3,9)^-1`,
/// `edge(3,9)`, `omega(u:3,9; a:45)` and `gamma9`, with `^k` for powers.
///
/// ```
/// use bredon_core::ring::parse_element;
/// let e = parse_element(45, "2*a9*u15^2").unwrap();
/// assert_eq!(e.to_string(), "2*a9*u15^2");
/// assert!(parse_element(45, "a7").unwrap_err().to_string().contains("a7"));
/// ```
pub fn parse_element(n: u64, s: &str) -> Result<SymbolicElement> {
    let mut p = Parser { s: s.as_bytes(), pos: 0 };
    let terms = p.sum()?;
    p.skip_ws();
    if p.pos < p.s.len() {
        return Err(p.error("unexpected input"));
    }
    let e = from_poly(Poly::Terms(terms));
    validate(n, &e)?;
    Ok(e)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, what: &str) -> Error {
        let rest = core::str::from_utf8(&self.s[self.pos..]).unwrap_or("");
        let token: String = rest.chars().take_while(|c| !c.is_whitespace() && *c != '*').collect();
        if token.is_empty() {
            invalid(format!("{what} at end of input"))
        } else {
            invalid(format!("{what} at '{token}' (position {})", self.pos))
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, t: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(t.as_bytes()) {
            self.pos += t.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &str) -> Result<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{t}'")))
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a number"));
        }
        let text = core::str::from_utf8(&self.s[start..self.pos]).expect("digits");
        text.parse().map_err(|_| {
            self.pos = start;
            self.error("number out of range")
        })
    }

    fn list(&mut self) -> Result<Vec<u64>> {
        let mut out = vec![self.number()?];
        while self.eat(",") {
            out.push(self.number()?);
        }
        Ok(out)
    }

    fn sum(&mut self) -> Result<Vec<Term>> {
        let mut out = Vec::new();
        let mut sign = if self.eat("-") { -1 } else { 1 };
        loop {
            let mut t = self.product()?;
            t.coef = mul(t.coef, sign)?;
            out.push(t);
            if self.eat("+") {
                sign = 1;
            } else if self.eat("-") {
                sign = -1;
            } else {
                return Ok(out);
            }
        }
    }

    fn product(&mut self) -> Result<Term> {
        let mut coef: i64 = 1;
        let mut atoms = Vec::new();
        loop {
            self.skip_ws();
            if self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                let k = self.number()?;
                coef = mul(coef, i64::try_from(k).map_err(|_| overflow())?)?;
            } else {
                let start = self.pos;
                let x = self.atom()?;
                let mut power = 1u32;
                if self.eat("^") {
                    if self.eat("-") {
                        let k = self.number()?;
                        match (&x, k) {
                            (Atom::Chi(b, c, _), 1) => {
                                atoms.push(Atom::Chi(*b, *c, -1));
                                if !self.eat("*") {
                                    break;
                                }
                                continue;
                            }
                            _ => {
                                self.pos = start;
                                return Err(self.error("negative powers only apply to chi"));
                            }
                        }
                    }
                    power = u32::try_from(self.number()?).map_err(|_| overflow())?;
                }
                atoms.extend(core::iter::repeat(x).take(power as usize));
            }
            if !self.eat("*") {
                break;
            }
        }
        Ok(Term::new(coef, atoms))
    }

    fn atom(&mut self) -> Result<Atom> {
        self.skip_ws();
        if self.eat("gamma") {
            let b = self.number()?;
            return Ok(Atom::Omega(vec![b], vec![b]));
        }
        if self.eat("chi(") {
            let b = self.number()?;
            self.expect(",")?;
            let c = self.number()?;
            self.expect(")")?;
            return Ok(chi(b, c, 1));
        }
        if self.eat("edge(") {
            let mut b = self.list()?;
            self.expect(")")?;
            b.sort_unstable();
            return Ok(Atom::Edge(b));
        }
        if self.eat("omega(") {
            self.expect("u:")?;
            let u = self.list()?;
            self.expect(";")?;
            self.expect("a:")?;
            let a = self.list()?;
            self.expect(")")?;
            return omega_atom(&u, &a);
        }
        if self.eat("u[") {
            let c = self.number()?;
            self.expect(":")?;
            let b = self.number()?;
            self.expect("]")?;
            return Ok(Atom::Bracket(c, b));
        }
        if self.eat("u") {
            return Ok(Atom::U(self.number()?));
        }
        if self.eat("a") {
            return Ok(Atom::A(self.number()?));
        }
        Err(self.error("unknown factor"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(n: u64, s: &str) -> SymbolicElement {
        parse_element(n, s).unwrap()
    }

    fn nf(n: u64, s: &str) -> String {
        normalize(n, &p(n, s)).unwrap().to_string()
    }

    fn times(n: u64, x: &str, y: &str) -> String {
        multiply(n, &p(n, x), &p(n, y)).to_string()
    }

    #[test]
    fn degrees_of_basic_classes() {
        assert_eq!(degree_of(&p(45, "u[9:3]")).unwrap().to_string(), "-l3 + l9");
        assert_eq!(degree_of(&p(45, "edge(9)")).unwrap().to_string(), "2 - l9");
        assert_eq!(degree_of(&p(45, "omega(u:3; a:9,45)")).unwrap().to_string(), "3 - l3 - l9 - l45");
    }

    #[test]
    fn orders() {
        assert_eq!(order_of(45, &p(45, "u9")).unwrap(), Order::Infinite);
        assert_eq!(order_of(45, &p(45, "3*gamma9")).unwrap(), Order::Finite(3));
        assert_eq!(order_of(45, &p(45, "a3*u5")).unwrap(), Order::Finite(3));
        assert_eq!(order_of(45, &p(45, "a15")).unwrap(), Order::Finite(15));
    }

    #[test]
    fn euler_and_gold() {
        assert_eq!(nf(45, "45*a45"), "0");
        assert_eq!(nf(45, "5*a15*u9 - 3*a9*u15"), "0");
        assert_eq!(nf(45, "a3*u9"), "3*a9*u3");
        assert_eq!(nf(45, "a9*u3"), "a9*u3");
    }

    #[test]
    fn non_chain_monomials_split_by_prime() {
        // a_3 u_5 has order 3 and a_5 u_3 order 5; their sum generates Z/15.
        assert_eq!(nf(15, "a3*u5 + a5*u3"), "a3*u5 + a5*u3");
        assert_eq!(nf(15, "3*a3*u5"), "0");
        assert_eq!(order_of(15, &p(15, "a3*u5 + a5*u3")).unwrap(), Order::Finite(15));
    }

    #[test]
    fn bracket_rules() {
        assert_eq!(times(45, "u[9:3]", "a3"), "3*a9");
        assert_eq!(times(45, "u[9:3]", "u3"), "u9");
        assert_eq!(times(45, "u[3:9]", "u9"), "3*u3");
        assert_eq!(times(45, "u[45:15]", "u[15:9]"), "3*u[45:9]");
        assert_eq!(times(45, "u[9:15]", "u[15:9]"), "15");
    }

    #[test]
    fn chi_rules() {
        assert_eq!(times(45, "chi(9,5)", "chi(9,5)^-1"), "1");
        assert_eq!(times(45, "chi(9,5)", "u9*u5"), "u45");
        assert_eq!(times(45, "chi(9,5)", "a9*a5"), "0");
        assert_eq!(times(45, "chi(9,15)", "a9*a15"), "a3*a45");
        assert_eq!(times(45, "u[45:9]", "u[1:5]"), "5*chi(5,9)");
    }

    #[test]
    fn edge_rules() {
        assert_eq!(times(45, "u9", "edge(3,9)"), "3*edge(3)");
        assert_eq!(times(45, "u3", "edge(3,9)"), "edge(9)");
        assert_eq!(times(45, "u3", "edge(3,5)"), "3*edge(5)");
        assert_eq!(times(45, "a3", "edge(3,9)"), "0");
        assert_eq!(times(45, "edge(3)", "edge(5)"), "edge(3,5)");
        assert_eq!(times(45, "edge(3)", "edge(9)"), "3*edge(3,9)");
    }

    #[test]
    fn omega_rules() {
        assert_eq!(times(9, "gamma9", "gamma3"), "0");
        assert_eq!(times(45, "u45", "omega(u:3,9; a:45)"), "2*omega(u:3; a:9)");
        assert_eq!(times(45, "a3", "omega(u:3,9; a:45)"), "0");
        assert_eq!(times(45, "a45", "omega(u:3,9; a:9,45)"), "omega(u:3,9; a:9)");
    }

    #[test]
    fn invalid_omega_is_rejected() {
        assert!(parse_element(45, "omega(u:3; a:5)").is_err());
        assert!(parse_element(45, "omega(u:9; a:3)").is_err());
    }
}
