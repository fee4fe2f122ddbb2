//! The graded groups `H^β` of a point.
//!
//! A degree `β = m + Σ m_d λ_d` is a [`GradingDegree`]. [`group`] computes
//! the Mackey functor `H^β` level by level: the degree is restricted to each
//! subgroup, rewritten with associated divisor strings, reduced by the
//! isomorphisms of [`irregular_reduce`], and then read off a closed formula,
//! the image of the null-homotopy map ([`phi_image`]) or, when nothing else
//! applies, the chain-homotopy oracle ([`oracle`]).

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{associated_string, colon, divisors, ell_parts, gcd, lcm, prime_divisors};
use crate::complexes::{hom_group_at, phi_image, FreeComplex, Method};
use crate::error::{invalid, Result};
use crate::mackey::{
    recognize, AbelianGroup, FreeModule, LevelwiseGroup, NamedMackey, RecognitionHints,
};

/// A degree `m + Σ_d m_d λ_d` with every `d > 1`; `λ_1 = 2` is folded into
/// the integer part.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GradingDegree {
    /// The integer part (the fixed dimension).
    pub m: i64,
    /// Multiplicity of `λ_d` for `d > 1`; zero entries are never stored.
    pub mult: BTreeMap<u64, i64>,
}

impl GradingDegree {
    /// Builds `m + Σ k λ_d` over the given terms, folding `λ_1` into `m`.
    pub fn new(m: i64, terms: &[(u64, i64)]) -> Result<Self> {
        let mut out = GradingDegree { m, mult: BTreeMap::new() };
        for &(d, k) in terms {
            out.add_lambda(d, k)?;
        }
        Ok(out)
    }

    /// The integer degree `m`.
    pub fn integer(m: i64) -> Self {
        GradingDegree { m, mult: BTreeMap::new() }
    }

    /// `m + λ_{pos} - λ_{neg}` for tuples of divisors.
    pub fn from_tuples(m: i64, pos: &[u64], neg: &[u64]) -> Result<Self> {
        let mut out = Self::integer(m);
        for &d in pos {
            out.add_lambda(d, 1)?;
        }
        for &d in neg {
            out.add_lambda(d, -1)?;
        }
        Ok(out)
    }

    /// Adds `k λ_d`.
    pub fn add_lambda(&mut self, d: u64, k: i64) -> Result<()> {
        match d {
            0 => Err(invalid("λ_0 is not a degree")),
            1 => {
                self.m += 2 * k;
                Ok(())
            }
            _ => {
                let e = self.mult.entry(d).or_insert(0);
                *e += k;
                if *e == 0 {
                    self.mult.remove(&d);
                }
                Ok(())
            }
        }
    }

    /// Checks that `n` is odd and that every index divides it.
    pub fn validate(&self, n: u64) -> Result<()> {
        check_order(n)?;
        match self.mult.keys().find(|&&d| n % d != 0) {
            Some(d) => Err(invalid(format!("l{d}: {d} does not divide {n}"))),
            None => Ok(()),
        }
    }

    /// The geometric dimension `m + 2 Σ m_d`.
    pub fn dim(&self) -> i64 {
        self.m + 2 * self.mult.values().sum::<i64>()
    }

    /// The fixed dimension `m`.
    pub fn fixed_dim(&self) -> i64 {
        self.m
    }

    /// The dimension away from `ell`: `m` plus `2 m_d` over the `d` prime
    /// to `ell`.
    pub fn dim_away(&self, ell: u64) -> i64 {
        self.m
            + 2 * self
                .mult
                .iter()
                .filter(|(&d, _)| gcd(d, ell) == 1)
                .map(|(_, &k)| k)
                .sum::<i64>()
    }

    /// Total λ-weight `Σ |m_d|`.
    pub fn weight(&self) -> i64 {
        self.mult.values().map(|k| k.abs()).sum()
    }

    /// The indices with positive multiplicity, repeated, in increasing order.
    pub fn positive(&self) -> Vec<u64> {
        self.part(1)
    }

    /// The indices with negative multiplicity, repeated, in increasing order.
    pub fn negative(&self) -> Vec<u64> {
        self.part(-1)
    }

    fn part(&self, sign: i64) -> Vec<u64> {
        let mut out = Vec::new();
        for (&d, &k) in &self.mult {
            if k.signum() == sign {
                out.extend(core::iter::repeat(d).take(k.unsigned_abs() as usize));
            }
        }
        out
    }

    /// The restriction to `<t^e>`, a degree for `C_{n/e}`: `λ_d` becomes
    /// `λ_{d:e}`.
    pub fn restrict(&self, e: u64) -> GradingDegree {
        let mut out = Self::integer(self.m);
        for (&d, &k) in &self.mult {
            out.add_lambda(colon(d, e), k).expect("nonzero index");
        }
        out
    }

    /// The `ell`-adic degree: every `λ_d` becomes `λ_{d(ell)}`.
    pub fn ell_local(&self, ell: u64) -> Result<GradingDegree> {
        let mut out = Self::integer(self.m);
        for (&d, &k) in &self.mult {
            out.add_lambda(ell_parts(d, ell)?.0, k)?;
        }
        Ok(out)
    }

    /// The sum of two degrees.
    pub fn plus(&self, other: &GradingDegree) -> GradingDegree {
        let mut out = self.clone();
        out.m += other.m;
        for (&d, &k) in &other.mult {
            out.add_lambda(d, k).expect("nonzero index");
        }
        out
    }

    /// The negated degree.
    pub fn negated(&self) -> GradingDegree {
        GradingDegree {
            m: -self.m,
            mult: self.mult.iter().map(|(&d, &k)| (d, -k)).collect(),
        }
    }
}

impl fmt::Display for GradingDegree {
    /// Prints in the grammar `3 - 2*l9 + l45`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut term = |f: &mut fmt::Formatter<'_>, k: i64, body: String| -> fmt::Result {
            let sign = if k < 0 { "-" } else { "+" };
            let a = k.unsigned_abs();
            let coef = match (a, body.is_empty()) {
                (_, true) => format!("{a}"),
                (1, false) => body,
                (_, false) => format!("{a}*{body}"),
            };
            if first {
                first = false;
                if k < 0 {
                    write!(f, "-{coef}")
                } else {
                    write!(f, "{coef}")
                }
            } else {
                write!(f, " {sign} {coef}")
            }
        };
        if self.m != 0 || self.mult.is_empty() {
            term(f, self.m, String::new())?;
        }
        for (&d, &k) in &self.mult {
            term(f, k, format!("l{d}"))?;
        }
        Ok(())
    }
}

/// Parses a degree in the grammar printed by [`GradingDegree`]'s `Display`:
/// a signed sum of integers and terms `k*lD` (or `lD`), with every `D`
/// dividing `n`. `l1` is allowed and folds into the integer part.
///
/// ```
/// use bredon_core::cohomology::parse_degree;
/// let beta = parse_degree(45, "3 - 2*l9 + l45").unwrap();
/// assert_eq!(beta.to_string(), "3 - 2*l9 + l45");
/// assert_eq!(parse_degree(9, "l1 - l3").unwrap().to_string(), "2 - l3");
/// assert!(parse_degree(9, "l5").unwrap_err().to_string().contains("l5"));
/// ```
pub fn parse_degree(n: u64, s: &str) -> Result<GradingDegree> {
    check_order(n)?;
    let mut out = GradingDegree::integer(0);
    let mut rest = s.trim();
    if rest.is_empty() {
        return Err(invalid("empty degree"));
    }
    let mut sign = 1i64;
    if let Some(r) = rest.strip_prefix('-') {
        sign = -1;
        rest = r.trim_start();
    }
    loop {
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let token = rest[..end].trim();
        let bad = || invalid(format!("cannot parse degree term '{token}'"));
        let (coef, lam) = match token.split_once('l') {
            Some((k, d)) => {
                let k = k.trim().trim_end_matches('*').trim();
                let k: i64 = if k.is_empty() { 1 } else { k.parse().map_err(|_| bad())? };
                let d: u64 = d.trim().parse().map_err(|_| bad())?;
                (k, Some(d))
            }
            None => (token.parse::<i64>().map_err(|_| bad())?, None),
        };
        let k = coef.checked_mul(sign).ok_or_else(bad)?;
        match lam {
            Some(d) if d == 0 || n % d != 0 => {
                return Err(invalid(format!("degree term '{token}': {d} does not divide {n}")))
            }
            Some(d) => out.add_lambda(d, k)?,
            None => out.m += k,
        }
        if end == rest.len() {
            return Ok(out);
        }
        sign = if rest.as_bytes()[end] == b'-' { -1 } else { 1 };
        rest = rest[end + 1..].trim_start();
    }
}

fn check_order(n: u64) -> Result<()> {
    if n == 0 || n % 2 == 0 {
        return Err(invalid(format!("n must be odd, got {n}")));
    }
    Ok(())
}

fn check_tuple(n: u64, b: &[u64]) -> Result<()> {
    check_order(n)?;
    match b.iter().find(|&&d| d == 0 || n % d != 0) {
        Some(d) => Err(invalid(format!("{d} does not divide {n}"))),
        None => Ok(()),
    }
}

/// The region of the grading group a degree lies in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionClass {
    /// All multiplicities nonnegative.
    PositiveCone,
    /// All multiplicities nonpositive, some negative, `m != 2 Σ |m_d|`.
    NegativeConeTorsion,
    /// The top of the negative cone, `m = 2 Σ |m_d|`.
    IntegralEdge,
    /// Multiplicities of both signs.
    Irregular,
    /// The group vanishes because the sphere complexes are too short.
    ZeroByBounds,
}

impl RegionClass {
    /// Stable lowercase name.
    pub fn as_str(&self) -> &'static str {
        match self {
            RegionClass::PositiveCone => "positive-cone",
            RegionClass::NegativeConeTorsion => "negative-cone",
            RegionClass::IntegralEdge => "integral-edge",
            RegionClass::Irregular => "irregular",
            RegionClass::ZeroByBounds => "zero",
        }
    }
}

/// Classifies a degree. `H^β` is the homology in degree `-m` of a complex
/// living in degrees `-2q` through `2p`, where `p` and `q` count the
/// positive and negative λ's, so it vanishes unless `-2p <= m <= 2q`.
///
/// ```
/// use bredon_core::cohomology::{classify, GradingDegree, RegionClass};
/// let beta = GradingDegree::new(3, &[(9, -2)]).unwrap();
/// assert_eq!(classify(&beta), RegionClass::NegativeConeTorsion);
/// ```
pub fn classify(beta: &GradingDegree) -> RegionClass {
    let p: i64 = beta.mult.values().filter(|&&k| k > 0).sum();
    let q: i64 = -beta.mult.values().filter(|&&k| k < 0).sum::<i64>();
    if beta.m > 2 * q || beta.m < -2 * p {
        RegionClass::ZeroByBounds
    } else if q == 0 {
        RegionClass::PositiveCone
    } else if p == 0 {
        if beta.m == 2 * q {
            RegionClass::IntegralEdge
        } else {
            RegionClass::NegativeConeTorsion
        }
    } else {
        RegionClass::Irregular
    }
}

/// One isomorphism applied while reducing a degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    /// Both strings replaced by their associated divisor strings (and
    /// `λ_1` folded into the integer part).
    Associate,
    /// Multiplication by `u_c` removes `λ_c` from the negative string; used
    /// when the fixed dimension is at least 4.
    MultiplyU(u64),
    /// Division by `u_d` removes `λ_d` from the positive string; used when
    /// the fixed dimension is negative.
    DivideU(u64),
    /// Multiplication by `a_n`, valid when the dimension is outside `-2..=0`.
    MultiplyA(u64),
    /// Division by `a_n`, valid when the dimension is outside `0..=2`.
    DivideA(u64),
    /// Multiplication by `u_ell`, valid when the dimension away from `ell`
    /// is outside `2..=3`.
    MultiplyUPrime(u64),
    /// Division by `u_ell`, valid when the dimension away from `ell` is
    /// outside `0..=1`.
    DivideUPrime(u64),
    /// Multiplication by the Euler classes of the surplus negative string
    /// maps onto the torsion of the shorter degree.
    TorsionOfTruncation(Vec<u64>),
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Associate => write!(f, "associated divisor strings"),
            Step::MultiplyU(c) => write!(f, "multiply by u_{c} (fixed dimension >= 4)"),
            Step::DivideU(d) => write!(f, "divide by u_{d} (fixed dimension < 0)"),
            Step::MultiplyA(n) => write!(f, "multiply by a_{n} (dimension not in -2..0)"),
            Step::DivideA(n) => write!(f, "divide by a_{n} (dimension not in 0..2)"),
            Step::MultiplyUPrime(l) => {
                write!(f, "multiply by u_{l} (dimension away from {l} not in 2..3)")
            }
            Step::DivideUPrime(l) => {
                write!(f, "divide by u_{l} (dimension away from {l} not in 0..1)")
            }
            Step::TorsionOfTruncation(a) => {
                let names: Vec<String> = a.iter().map(|x| format!("a_{x}")).collect();
                write!(f, "multiply by {} onto the torsion subgroup", names.join(" "))
            }
        }
    }
}

/// A logged reduction `H^from ≅ H^to` (or onto the torsion of `H^to`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    /// The isomorphism used.
    pub step: Step,
    /// Source degree.
    pub from: GradingDegree,
    /// Target degree.
    pub to: GradingDegree,
}

impl fmt::Display for Reduction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}: {}", self.from, self.to, self.step)
    }
}

/// The Mackey functor `H^β` over `C_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupResult {
    /// Order of the group.
    pub n: u64,
    /// The degree as given.
    pub degree: GradingDegree,
    /// The group at every level.
    pub levels: LevelwiseGroup,
    /// The functor when it has a name, otherwise [`NamedMackey::Unrecognized`].
    pub named: NamedMackey,
    /// The least direct method used at any level.
    pub method: Method,
    /// The reductions applied at the top level.
    pub reduction_log: Vec<Reduction>,
}

impl GroupResult {
    /// The group at `Θ_1`.
    pub fn top(&self) -> AbelianGroup {
        self.levels.at(1)
    }

    fn from_named(n: u64, degree: GradingDegree, named: NamedMackey, log: Vec<Reduction>) -> Self {
        GroupResult {
            n,
            degree,
            levels: named.levels(n),
            named,
            method: Method::ClosedForm,
            reduction_log: log,
        }
    }
}

fn zmod_i(d: u64) -> NamedMackey {
    if d == 1 {
        NamedMackey::zero()
    } else {
        NamedMackey::ZModI(d)
    }
}

fn ideal(d: u64) -> NamedMackey {
    if d == 1 {
        NamedMackey::Z
    } else {
        NamedMackey::I(d)
    }
}

fn extension(e: u64, d: u64) -> NamedMackey {
    // Primes at which d and e agree contribute nothing to the restriction
    // indices, so they are dropped to reach the canonical name.
    let (mut e, mut d) = (e, d);
    for ell in prime_divisors(e) {
        let pe = ell_parts(e, ell).expect("prime").0;
        let pd = ell_parts(d, ell).expect("prime").0;
        if pe == pd {
            e /= pe;
            d /= pd;
        }
    }
    if d == e {
        NamedMackey::Z
    } else if d == 1 {
        NamedMackey::I(e)
    } else {
        NamedMackey::Zed(e, d)
    }
}

fn positive_named(b: &[u64], k: i64) -> Result<NamedMackey> {
    let s = b.len() as i64;
    if k < 0 || k > 2 * s || k % 2 != 0 {
        return Ok(NamedMackey::zero());
    }
    if k == 2 * s {
        return Ok(NamedMackey::Z);
    }
    let seq = associated_string(b)?;
    Ok(zmod_i(seq[(k / 2) as usize]))
}

fn negative_named(b: &[u64], k: i64) -> Result<NamedMackey> {
    let s = b.len() as i64;
    if k == 2 * s {
        let seq = associated_string(b)?;
        return Ok(ideal(seq.last().copied().unwrap_or(1)));
    }
    if k % 2 == 1 && (3..2 * s).contains(&k) {
        let seq = associated_string(b)?;
        return Ok(zmod_i(seq[((k - 1) / 2 - 1) as usize]));
    }
    Ok(NamedMackey::zero())
}

/// `H^{λ_b - k}`: `Z/I_{(b; k/2 + 1)}` for even `0 <= k < 2s`, `Z` for
/// `k = 2s`, zero otherwise.
///
/// ```
/// use bredon_core::cohomology::positive_group;
/// use bredon_core::mackey::NamedMackey;
/// let g = positive_group(45, &[15, 9], 0).unwrap();
/// assert_eq!(g.named, NamedMackey::ZModI(3));
/// ```
pub fn positive_group(n: u64, b: &[u64], k: i64) -> Result<GroupResult> {
    check_tuple(n, b)?;
    let degree = GradingDegree::from_tuples(-k, b, &[])?;
    Ok(GroupResult::from_named(n, degree, positive_named(b, k)?, Vec::new()))
}

/// `H^{k - λ_b}`: `Z/I_{(b; j)}` for `k = 2j + 1` with `1 <= j < s`,
/// `I_{lcm(b)}` for `k = 2s`, zero otherwise.
///
/// ```
/// use bredon_core::cohomology::negative_group;
/// use bredon_core::mackey::NamedMackey;
/// assert_eq!(negative_group(45, &[3, 9, 45], 5).unwrap().named, NamedMackey::ZModI(9));
/// assert_eq!(negative_group(45, &[3, 9, 45], 6).unwrap().named, NamedMackey::I(45));
/// ```
pub fn negative_group(n: u64, b: &[u64], k: i64) -> Result<GroupResult> {
    check_tuple(n, b)?;
    let degree = GradingDegree::from_tuples(k, &[], b)?;
    Ok(GroupResult::from_named(n, degree, negative_named(b, k)?, Vec::new()))
}

/// A degree `λ_d - λ_c + k` with `c` and `d` divisor strings free of ones.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Strings {
    c: Vec<u64>,
    d: Vec<u64>,
    k: i64,
}

impl Strings {
    fn of(beta: &GradingDegree) -> Result<Self> {
        let d = associated_string(&beta.positive())?;
        let c = associated_string(&beta.negative())?;
        let ones = |v: &[u64]| v.iter().filter(|&&x| x == 1).count() as i64;
        let k = beta.m + 2 * ones(&d) - 2 * ones(&c);
        Ok(Strings {
            c: c.into_iter().filter(|&x| x > 1).collect(),
            d: d.into_iter().filter(|&x| x > 1).collect(),
            k,
        })
    }

    fn degree(&self) -> GradingDegree {
        GradingDegree::from_tuples(self.k, &self.d, &self.c).expect("nonzero indices")
    }

    fn dim(&self) -> i64 {
        self.k + 2 * (self.d.len() as i64 - self.c.len() as i64)
    }

    fn dim_away(&self, ell: u64) -> i64 {
        let coprime = |v: &[u64]| v.iter().filter(|&&x| gcd(x, ell) == 1).count() as i64;
        self.k + 2 * (coprime(&self.d) - coprime(&self.c))
    }
}

/// Where a reduction ends.
enum Terminal {
    /// A degree in one of the two cones.
    Cone,
    /// Equal numbers of λ's after padding with ones, integer part zero.
    SameLength,
    /// More negative than positive λ's, integer part zero.
    Truncation,
    /// No closed form applies.
    Open,
}

fn terminal(s: &Strings) -> Terminal {
    if s.c.is_empty() || s.d.is_empty() {
        Terminal::Cone
    } else if s.dim() == 0 {
        Terminal::SameLength
    } else if s.k == 0 && s.c.len() > s.d.len() {
        Terminal::Truncation
    } else {
        Terminal::Open
    }
}

fn next_move(n: u64, s: &Strings) -> Option<(Step, Strings)> {
    let mut t = s.clone();
    if s.k >= 4 {
        let c1 = t.c.remove(0);
        t.k -= 2;
        return Some((Step::MultiplyU(c1), t));
    }
    if s.k < 0 {
        let d1 = t.d.remove(0);
        t.k += 2;
        return Some((Step::DivideU(d1), t));
    }
    let dim = s.dim();
    if s.c.last() == Some(&n) && !(-2..=0).contains(&dim) {
        t.c.pop();
        return Some((Step::MultiplyA(n), t));
    }
    if s.d.last() == Some(&n) && !(0..=2).contains(&dim) {
        t.d.pop();
        return Some((Step::DivideA(n), t));
    }
    for ell in prime_divisors(n) {
        let away = s.dim_away(ell);
        if let Some(i) = s.c.iter().position(|&x| x == ell) {
            if !(2..=3).contains(&away) {
                t.c.remove(i);
                t.k -= 2;
                return Some((Step::MultiplyUPrime(ell), t));
            }
        }
        if let Some(i) = s.d.iter().position(|&x| x == ell) {
            if !(0..=1).contains(&away) {
                t.d.remove(i);
                t.k += 2;
                return Some((Step::DivideUPrime(ell), t));
            }
        }
    }
    None
}

fn reduce_strings(n: u64, beta: &GradingDegree) -> Result<(Strings, Vec<Reduction>)> {
    let mut s = Strings::of(beta)?;
    let mut log = Vec::new();
    if s.degree() != *beta {
        log.push(Reduction { step: Step::Associate, from: beta.clone(), to: s.degree() });
    }
    loop {
        if !matches!(terminal(&s), Terminal::Open) && (0..=3).contains(&s.k) {
            break;
        }
        if matches!(terminal(&s), Terminal::Cone) {
            break;
        }
        let Some((step, t)) = next_move(n, &s) else {
            break;
        };
        log.push(Reduction { step, from: s.degree(), to: t.degree() });
        s = t;
    }
    Ok((s, log))
}

/// Applies the isomorphisms `H^β ≅ H^{β'}` that shorten a degree: the
/// associated-string rewrite, multiplication by `u_{c_1}` when `m >= 4`,
/// division by `u_{d_1}` when `m < 0`, and multiplication or division by
/// `a_n` and `u_ell` inside their ranges of bijectivity. Stops at a cone, at
/// a degree with a closed form, or when no move applies.
///
/// ```
/// use bredon_core::cohomology::{irregular_reduce, GradingDegree};
/// let beta = GradingDegree::new(4, &[(9, 1), (3, -1)]).unwrap();
/// let (reduced, log) = irregular_reduce(45, &beta).unwrap();
/// assert_eq!(reduced, GradingDegree::new(2, &[(9, 1)]).unwrap());
/// assert_eq!(log.len(), 1);
/// ```
pub fn irregular_reduce(n: u64, beta: &GradingDegree) -> Result<(GradingDegree, Vec<Reduction>)> {
    beta.validate(n)?;
    let (s, log) = reduce_strings(n, beta)?;
    Ok((s.degree(), log))
}

/// Top-level outcome of the dispatcher.
struct TopGroup {
    group: AbelianGroup,
    named: Option<NamedMackey>,
    method: Method,
    log: Vec<Reduction>,
}

fn two_fold_torsion(c: &[u64], d: &[u64]) -> u64 {
    gcd(c[0], d[0] * d[1]) / gcd(c[0], d[1])
}

fn same_length(c: &[u64], d: &[u64]) -> Result<(AbelianGroup, Option<NamedMackey>, Method)> {
    let len = c.len().max(d.len());
    let c = crate::arith::pad_front(c, len);
    let d = crate::arith::pad_front(d, len);
    Ok(match len {
        1 => {
            let named = extension(c[0], gcd(c[0], d[0]));
            (AbelianGroup::integers(), Some(named), Method::ClosedForm)
        }
        2 => {
            let t = two_fold_torsion(&c, &d);
            (AbelianGroup::from_cyclic_orders(1, &[t]), None, Method::ClosedForm)
        }
        _ => (phi_image(&c, &d)?.group, None, Method::PhiImage),
    })
}

fn top_group(n: u64, beta: &GradingDegree) -> Result<TopGroup> {
    let (s, mut log) = reduce_strings(n, beta)?;
    let (group, named, method) = match terminal(&s) {
        Terminal::Cone if s.c.is_empty() => {
            let named = positive_named(&s.d, -s.k)?;
            (named.level(1), Some(named), Method::ClosedForm)
        }
        Terminal::Cone => {
            let named = negative_named(&s.c, s.k)?;
            (named.level(1), Some(named), Method::ClosedForm)
        }
        Terminal::SameLength => same_length(&s.c, &s.d)?,
        Terminal::Truncation => {
            let short = Strings { c: s.c[..s.d.len()].to_vec(), d: s.d.clone(), k: 0 };
            log.push(Reduction {
                step: Step::TorsionOfTruncation(s.c[s.d.len()..].to_vec()),
                from: s.degree(),
                to: short.degree(),
            });
            let (g, _, method) = same_length(&short.c, &short.d)?;
            (g.torsion_subgroup(), None, method)
        }
        Terminal::Open => (oracle_at(n, &s.degree(), 1)?, None, Method::Oracle),
    };
    Ok(TopGroup { group, named, method, log })
}

/// The Mackey functor `H^β` over `C_n`.
///
/// Each level `Θ_e` is the top-level group of the restricted degree over
/// `C_{n/e}`. Closed forms are used where they exist; the result records
/// the least direct method needed at any level and the reductions applied
/// at the top.
///
/// ```
/// use bredon_core::cohomology::{group, GradingDegree};
/// use bredon_core::mackey::AbelianGroup;
/// let beta = GradingDegree::new(0, &[(3, 2), (9, -2)]).unwrap();
/// assert_eq!(group(9, &beta).unwrap().top(), AbelianGroup::from_cyclic_orders(1, &[3]));
/// ```
pub fn group(n: u64, beta: &GradingDegree) -> Result<GroupResult> {
    beta.validate(n)?;
    let top = top_group(n, beta)?;
    if let Some(named) = top.named {
        return Ok(GroupResult::from_named(n, beta.clone(), named, top.log));
    }
    let mut levels = LevelwiseGroup::default();
    levels.levels.insert(1, top.group);
    let mut method = top.method;
    for e in divisors(n).into_iter().skip(1) {
        let t = top_group(n / e, &beta.restrict(e))?;
        method = method.max(t.method);
        levels.levels.insert(e, t.group);
    }
    Ok(GroupResult {
        n,
        degree: beta.clone(),
        named: recognize(n, &levels, &RecognitionHints::default()),
        levels,
        method,
        reduction_log: top.log,
    })
}

/// The complex `L(b)` modelling `S^{λ_b}`, or the unit complex when `b` is
/// empty.
pub fn sphere_model(n: u64, b: &[u64]) -> Result<FreeComplex> {
    if b.is_empty() {
        FreeComplex::new(n, 0, vec![FreeModule::new(vec![1])], Vec::new())
    } else {
        FreeComplex::linear_model(n, b)
    }
}

/// `H^β(Θ_e)` computed as `[L(neg), Σ^m L(pos)]` restricted to `<t^e>`.
pub fn oracle_at(n: u64, beta: &GradingDegree, e: u64) -> Result<AbelianGroup> {
    beta.validate(n)?;
    if n % e != 0 {
        return Err(invalid(format!("{e} does not divide {n}")));
    }
    let k = sphere_model(n, &beta.negative())?;
    let l = sphere_model(n, &beta.positive())?;
    hom_group_at(&k, &l, beta.m, e)
}

/// `H^β` at every level, computed by the chain-homotopy oracle alone.
pub fn oracle(n: u64, beta: &GradingDegree) -> Result<GroupResult> {
    let mut levels = LevelwiseGroup::default();
    for e in divisors(n) {
        levels.levels.insert(e, oracle_at(n, beta, e)?);
    }
    Ok(GroupResult {
        n,
        degree: beta.clone(),
        named: recognize(n, &levels, &RecognitionHints::default()),
        levels,
        method: Method::Oracle,
        reduction_log: Vec::new(),
    })
}

/// `H^β` assembled prime by prime: at each level the `ell`-primary torsion
/// is read off the `ell`-adic degree over `C_{n(ell)}`, and a single `Z`
/// appears exactly when `dim β = 0`.
pub fn ell_assemble(n: u64, beta: &GradingDegree) -> Result<GroupResult> {
    beta.validate(n)?;
    let mut levels = LevelwiseGroup::default();
    let mut method = Method::ClosedForm;
    for e in divisors(n) {
        let ne = n / e;
        let b = beta.restrict(e);
        let mut g = AbelianGroup { rank: usize::from(b.dim() == 0), torsion: Vec::new() };
        for ell in prime_divisors(ne) {
            let local = b.ell_local(ell)?;
            let t = top_group(ell_parts(ne, ell)?.0, &local)?;
            method = method.max(t.method);
            g = g.direct_sum(&t.group.ell_primary(ell));
        }
        levels.levels.insert(e, g);
    }
    Ok(GroupResult {
        n,
        degree: beta.clone(),
        named: recognize(n, &levels, &RecognitionHints::default()),
        levels,
        method,
        reduction_log: Vec::new(),
    })
}

/// The least `r >= 1` such that `r u_num / u_den` is integral over `C_n`.
///
/// ```
/// use bredon_core::cohomology::integral_multiple;
/// assert_eq!(integral_multiple(45, &[45], &[9]).unwrap(), 1);
/// assert_eq!(integral_multiple(45, &[3], &[9]).unwrap(), 3);
/// ```
pub fn integral_multiple(n: u64, num: &[u64], den: &[u64]) -> Result<u64> {
    check_tuple(n, num)?;
    check_tuple(n, den)?;
    crate::arith::integral_multiple(num, den)
}

/// A factor `χ_{b,c}^{±1}`, the unit of degree
/// `λ_{(b,c)} + λ_{[b,c]} - λ_b - λ_c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChiFactor {
    /// First index.
    pub b: u64,
    /// Second index.
    pub c: u64,
    /// `1` or `-1`.
    pub exponent: i8,
}

impl ChiFactor {
    /// The degree of the factor.
    pub fn degree(&self) -> GradingDegree {
        let g = gcd(self.b, self.c);
        let l = lcm(self.b, self.c).expect("lcm of divisors of n");
        let x = GradingDegree::from_tuples(0, &[g, l], &[self.b, self.c]).expect("positive");
        if self.exponent < 0 {
            x.negated()
        } else {
            x
        }
    }
}

impl fmt::Display for ChiFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent < 0 {
            write!(f, "chi({},{})^-1", self.b, self.c)
        } else {
            write!(f, "chi({},{})", self.b, self.c)
        }
    }
}

/// The homogeneous units in a degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnitReport {
    /// The units are `±` the product of the listed factors (`±1` when the
    /// list is empty).
    Units(Vec<ChiFactor>),
    /// The degree carries no unit.
    NoUnits(String),
}

impl fmt::Display for UnitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnitReport::Units(w) if w.is_empty() => write!(f, "units: +-1"),
            UnitReport::Units(w) => {
                let parts: Vec<String> = w.iter().map(|x| format!("{x}")).collect();
                write!(f, "units: +-{}", parts.join(" * "))
            }
            UnitReport::NoUnits(why) => write!(f, "no homogeneous units ({why})"),
        }
    }
}

/// Rewrites a tuple into its associated divisor string by moves
/// `x, y -> (x, y), [x, y]`, returning the string and the moved pairs.
fn distill_with_moves(b: &[u64]) -> (Vec<u64>, Vec<(u64, u64)>) {
    let mut x = b.to_vec();
    let mut moves = Vec::new();
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            if x[j] % x[i] != 0 {
                moves.push((x[i], x[j]));
                let g = gcd(x[i], x[j]);
                x[j] = x[i] / g * x[j];
                x[i] = g;
            }
        }
    }
    (x, moves)
}

/// Decides whether `H^β` contains a unit, and if so names it as a word in
/// the `χ`-classes. A unit exists exactly when `dim β = 0` and the two
/// associated divisor strings agree once ones are dropped.
pub fn units_in_degree(n: u64, beta: &GradingDegree) -> Result<UnitReport> {
    beta.validate(n)?;
    if beta.dim() != 0 {
        return Ok(UnitReport::NoUnits("the group is torsion".into()));
    }
    let (d, d_moves) = distill_with_moves(&beta.positive());
    let (c, c_moves) = distill_with_moves(&beta.negative());
    let strip = |v: Vec<u64>| -> Vec<u64> { v.into_iter().filter(|&x| x > 1).collect() };
    if strip(d) != strip(c) {
        return Ok(UnitReport::NoUnits(
            "the associated divisor strings differ".into(),
        ));
    }
    let mut word: Vec<ChiFactor> = c_moves
        .into_iter()
        .map(|(b, c)| ChiFactor { b, c, exponent: 1 })
        .collect();
    word.extend(d_moves.into_iter().map(|(b, c)| ChiFactor { b, c, exponent: -1 }));
    Ok(UnitReport::Units(word))
}
