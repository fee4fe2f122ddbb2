//! Free modules over the constant Mackey ring and their morphisms.
//!
//! The free module `F_d` on an orbit `Θ_d = C_n/<t^d>` is modelled by the
//! permutation module `Z[Z/d]` with `t` acting by rotation. A morphism
//! `F_b -> F_c` is determined by the image of the generator `g_b`, a vector
//! of length `c` fixed by `t^b`; composition is multiplication in the group
//! ring. These are the canonical coordinates of [`SpanMorphism`]. The span
//! basis is exposed through [`SpanMorphism::span_coords`].
//!
//! The value of `F_d` at the orbit `Θ_e` is the lattice of `t^e`-fixed
//! vectors of `Z[Z/d]`, free of rank `(d, e)` on the orbit sums.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::arith::{colon, divisors, factorize, gcd};
use crate::error::{invalid, Result};

fn checked_mul_add(acc: i64, a: i64, b: i64) -> i64 {
    a.checked_mul(b)
        .and_then(|p| acc.checked_add(p))
        .expect("group-ring coefficient overflow")
}

/// A morphism `F_src -> F_dst`, stored as the image of the generator in
/// `Z[Z/dst]` (a vector of length `dst` fixed by rotation by `src`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SpanMorphism {
    src: u64,
    dst: u64,
    v: Vec<i64>,
}

impl fmt::Debug for SpanMorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}->F{} {:?}", self.src, self.dst, self.span_coords())
    }
}

/// The named morphisms of the category of free modules.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Special {
    /// Rotation `Rt` on `F_d` (source equals target).
    Rt,
    /// The augmentation `Rπ: F_d -> Z` (target `Θ_1`).
    RPi,
    /// The orbit sum `Iπ: Z -> F_d` (source `Θ_1`).
    IPi,
    /// The composite `IπRπ: F_b -> F_c`, the bracket `<(1, ..., 1)>`.
    IPiRPi,
    /// The bracket `<m>` with the given span coordinates.
    Bracket(Vec<i64>),
}

impl SpanMorphism {
    fn period(&self) -> usize {
        gcd(self.src, self.dst) as usize
    }

    /// Builds a morphism from its group-ring vector, checking the fixed-point
    /// condition.
    pub fn from_vector(src: u64, dst: u64, v: Vec<i64>) -> Result<Self> {
        if src == 0 || dst == 0 {
            return Err(invalid("orbit indices must be positive"));
        }
        if v.len() != dst as usize {
            return Err(invalid(format!(
                "vector of length {} for a map into F_{dst}",
                v.len()
            )));
        }
        let g = gcd(src, dst) as usize;
        if (0..v.len()).any(|i| v[i] != v[i % g]) {
            return Err(invalid(format!("vector not fixed by t^{src}")));
        }
        Ok(SpanMorphism { src, dst, v })
    }

    /// Builds a morphism from span coordinates `m_0, ..., m_{(b,c)-1}`.
    /// Coordinate `i` is the basis element `t^{(b,c)-i} A` where
    /// `A = sum_j t^{(b,c) j} g_c`.
    pub fn from_span(src: u64, dst: u64, coeffs: &[i64]) -> Result<Self> {
        let g = gcd(src, dst) as usize;
        if src == 0 || dst == 0 || coeffs.len() != g {
            return Err(invalid(format!(
                "Hom(F_{src}, F_{dst}) has rank {g}, got {} coordinates",
                coeffs.len()
            )));
        }
        let v = (0..dst as usize).map(|p| coeffs[(g - p % g) % g]).collect();
        Ok(SpanMorphism { src, dst, v })
    }

    /// The zero morphism.
    pub fn zero(src: u64, dst: u64) -> Self {
        SpanMorphism { src, dst, v: vec![0; dst as usize] }
    }

    /// The identity of `F_d`.
    pub fn identity(d: u64) -> Self {
        let mut v = vec![0; d as usize];
        v[0] = 1;
        SpanMorphism { src: d, dst: d, v }
    }

    /// `t^j` acting on `F_d`.
    pub fn rotation(d: u64, j: i64) -> Self {
        let mut v = vec![0; d as usize];
        v[j.rem_euclid(d as i64) as usize] = 1;
        SpanMorphism { src: d, dst: d, v }
    }

    /// A named morphism between the given orbits.
    pub fn special(kind: Special, src: u64, dst: u64) -> Result<Self> {
        match kind {
            Special::Rt => {
                if src != dst {
                    return Err(invalid("Rt needs equal source and target"));
                }
                Ok(Self::rotation(src, 1))
            }
            Special::RPi => {
                if dst != 1 || src == 0 {
                    return Err(invalid("Rπ maps into F_1"));
                }
                Ok(SpanMorphism { src, dst: 1, v: vec![1] })
            }
            Special::IPi => {
                if src != 1 || dst == 0 {
                    return Err(invalid("Iπ maps out of F_1"));
                }
                Ok(SpanMorphism { src: 1, dst, v: vec![1; dst as usize] })
            }
            Special::IPiRPi => {
                if src == 0 || dst == 0 {
                    return Err(invalid("orbit indices must be positive"));
                }
                Ok(SpanMorphism { src, dst, v: vec![1; dst as usize] })
            }
            Special::Bracket(m) => Self::from_span(src, dst, &m),
        }
    }

    /// Source orbit index.
    pub fn src(&self) -> u64 {
        self.src
    }

    /// Target orbit index.
    pub fn dst(&self) -> u64 {
        self.dst
    }

    /// The group-ring vector (image of the generator).
    pub fn vector(&self) -> &[i64] {
        &self.v
    }

    /// Span coordinates, inverse to [`SpanMorphism::from_span`].
    pub fn span_coords(&self) -> Vec<i64> {
        let g = self.period();
        (0..g).map(|i| self.v[(g - i) % g]).collect()
    }

    /// The normity: the sum of the span coordinates.
    pub fn normity(&self) -> i64 {
        self.v[..self.period()].iter().sum()
    }

    /// True for the zero morphism.
    pub fn is_zero(&self) -> bool {
        self.v.iter().all(|&x| x == 0)
    }

    /// Composite `self ∘ f` where `f: F_b -> F_c` and `self: F_c -> F_d`.
    pub fn compose(&self, f: &SpanMorphism) -> Result<SpanMorphism> {
        if f.dst != self.src {
            return Err(invalid(format!(
                "cannot compose F{}->F{} after F{}->F{}",
                self.src, self.dst, f.src, f.dst
            )));
        }
        Ok(self.compose_unchecked(f))
    }

    pub(crate) fn compose_unchecked(&self, f: &SpanMorphism) -> SpanMorphism {
        let d = self.dst as usize;
        let mut w = vec![0i64; d];
        for (j, &fj) in f.v.iter().enumerate() {
            if fj == 0 {
                continue;
            }
            for (k, &gk) in self.v.iter().enumerate() {
                if gk != 0 {
                    let idx = (j + k) % d;
                    w[idx] = checked_mul_add(w[idx], fj, gk);
                }
            }
        }
        SpanMorphism { src: f.src, dst: self.dst, v: w }
    }

    /// Sum of two parallel morphisms.
    pub fn add(&self, other: &SpanMorphism) -> SpanMorphism {
        assert_eq!((self.src, self.dst), (other.src, other.dst), "shape mismatch");
        let v = self
            .v
            .iter()
            .zip(&other.v)
            .map(|(a, b)| a.checked_add(*b).expect("group-ring coefficient overflow"))
            .collect();
        SpanMorphism { src: self.src, dst: self.dst, v }
    }

    /// Integer multiple.
    pub fn scale(&self, k: i64) -> SpanMorphism {
        let v = self
            .v
            .iter()
            .map(|a| a.checked_mul(k).expect("group-ring coefficient overflow"))
            .collect();
        SpanMorphism { src: self.src, dst: self.dst, v }
    }

    /// Negation.
    pub fn neg(&self) -> SpanMorphism {
        self.scale(-1)
    }

    /// For an endomorphism of the form `±t^j`, its inverse `±t^{-j}`.
    pub fn unit_inverse(&self) -> Option<SpanMorphism> {
        if self.src != self.dst {
            return None;
        }
        let mut found = None;
        for (j, &x) in self.v.iter().enumerate() {
            match x {
                0 => {}
                1 | -1 if found.is_none() => found = Some((j, x)),
                _ => return None,
            }
        }
        let (j, sign) = found?;
        Some(Self::rotation(self.src, -(j as i64)).scale(sign))
    }

    /// The dual morphism `F_dst -> F_src` (the transpose on permutation
    /// bases).
    pub fn transpose(&self) -> SpanMorphism {
        let y = self.dst as usize;
        let x = self.src as usize;
        let v = (0..x).map(|p| self.v[(y - p % y) % y]).collect();
        SpanMorphism { src: self.dst, dst: self.src, v }
    }

    /// Matrix of the map at level `Θ_e`, in the orbit-sum bases of the
    /// `t^e`-fixed lattices. Rows index the target basis.
    pub fn level_matrix(&self, e: u64) -> Vec<Vec<i64>> {
        let (x, y) = (self.src as usize, self.dst as usize);
        let gs = gcd(self.src, e) as usize;
        let gt = gcd(self.dst, e) as usize;
        let mut m = vec![vec![0i64; gs]; gt];
        for r in 0..gs {
            let mut w = vec![0i64; y];
            for p in (r..x).step_by(gs) {
                for (k, &vk) in self.v.iter().enumerate() {
                    if vk != 0 {
                        let idx = (p + k) % y;
                        w[idx] = checked_mul_add(w[idx], 1, vk);
                    }
                }
            }
            for (rt, row) in m.iter_mut().enumerate() {
                row[r] = w[rt];
            }
        }
        m
    }

    /// Restriction to the subgroup `<t^e>`: the source splits into
    /// `(src, e)` copies of `F_{src:e}` and the target into `(dst, e)`
    /// copies of `F_{dst:e}`. Returns blocks indexed `[target copy][source copy]`.
    pub fn restrict(&self, e: u64) -> Vec<Vec<SpanMorphism>> {
        let (x, y) = (self.src, self.dst);
        let gx = gcd(x, e) as usize;
        let gy = gcd(y, e) as usize;
        let (xs, ys) = (colon(x, e), colon(y, e));
        let table = restriction_table(y, e);
        let mut blocks = vec![vec![SpanMorphism::zero(xs, ys); gx]; gy];
        for r in 0..gx {
            for (k, &vk) in self.v.iter().enumerate() {
                if vk == 0 {
                    continue;
                }
                let q = (r + k) % y as usize;
                let (rc, i) = table[q];
                let entry = &mut blocks[rc][r].v[i];
                *entry = checked_mul_add(*entry, 1, vk);
            }
        }
        blocks
    }
}

/// For `F_x` restricted to `<t^e>`: position `p` of `Z/x` lies in copy
/// `p mod (x,e)` at index `i` with `p = r + e*i mod x`.
fn restriction_table(x: u64, e: u64) -> Vec<(usize, usize)> {
    let g = gcd(x, e) as usize;
    let len = colon(x, e) as usize;
    let mut table = vec![(0usize, 0usize); x as usize];
    for r in 0..g {
        for i in 0..len {
            let p = ((r as u128 + e as u128 * i as u128) % x as u128) as usize;
            table[p] = (r, i);
        }
    }
    table
}

/// The span basis of `Hom(F_b, F_c)`: `(b, c)` morphisms, the `i`-th being
/// `t^{(b,c)-i} A`. Basis element `0` is the identity when `b = c`.
pub fn span_basis(b: u64, c: u64) -> Result<Vec<SpanMorphism>> {
    if b == 0 || c == 0 {
        return Err(invalid("orbit indices must be positive"));
    }
    let g = gcd(b, c) as usize;
    (0..g)
        .map(|i| {
            let mut coeffs = vec![0; g];
            coeffs[i] = 1;
            SpanMorphism::from_span(b, c, &coeffs)
        })
        .collect()
}

/// Span basis of `Hom(F_b, F_c)` after checking that `b, c | n`.
pub fn span_basis_in(n: u64, b: u64, c: u64) -> Result<Vec<SpanMorphism>> {
    if n == 0 || b == 0 || c == 0 || n % b != 0 || n % c != 0 {
        return Err(invalid(format!("{b} and {c} must divide {n}")));
    }
    span_basis(b, c)
}

/// Composite `g ∘ f`.
pub fn compose(g: &SpanMorphism, f: &SpanMorphism) -> Result<SpanMorphism> {
    g.compose(f)
}

/// Normity of a morphism.
pub fn normity(f: &SpanMorphism) -> i64 {
    f.normity()
}

/// A finite direct sum of free modules, listed by orbit index.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FreeModule {
    /// Orbit index of each summand.
    pub summands: Vec<u64>,
}

impl FreeModule {
    /// A module with the given summands.
    pub fn new(summands: Vec<u64>) -> Self {
        FreeModule { summands }
    }

    /// Rank of the value at `Θ_e`.
    pub fn level_rank(&self, e: u64) -> usize {
        self.summands.iter().map(|&d| gcd(d, e) as usize).sum()
    }
}

/// A matrix of morphisms between free modules. `blocks[i][j]` maps source
/// summand `j` to target summand `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMorphism {
    /// Source module.
    pub src: FreeModule,
    /// Target module.
    pub dst: FreeModule,
    /// Blocks indexed by `[target][source]`.
    pub blocks: Vec<Vec<SpanMorphism>>,
}

impl BlockMorphism {
    /// The zero morphism.
    pub fn zero(src: &FreeModule, dst: &FreeModule) -> Self {
        let blocks = dst
            .summands
            .iter()
            .map(|&y| src.summands.iter().map(|&x| SpanMorphism::zero(x, y)).collect())
            .collect();
        BlockMorphism { src: src.clone(), dst: dst.clone(), blocks }
    }

    /// Checks that every block has the shape dictated by the summands.
    pub fn validate(&self) -> Result<()> {
        if self.blocks.len() != self.dst.summands.len() {
            return Err(invalid("block rows do not match target summands"));
        }
        for (row, &y) in self.blocks.iter().zip(&self.dst.summands) {
            if row.len() != self.src.summands.len() {
                return Err(invalid("block columns do not match source summands"));
            }
            for (b, &x) in row.iter().zip(&self.src.summands) {
                if b.src != x || b.dst != y {
                    return Err(invalid("block orbit mismatch"));
                }
            }
        }
        Ok(())
    }

    /// Composite `self ∘ f`.
    pub fn compose(&self, f: &BlockMorphism) -> Result<BlockMorphism> {
        if f.dst != self.src {
            return Err(invalid("block composition shape mismatch"));
        }
        let mut out = BlockMorphism::zero(&f.src, &self.dst);
        for (i, row) in out.blocks.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                for k in 0..self.src.summands.len() {
                    let (a, b) = (&self.blocks[i][k], &f.blocks[k][j]);
                    if !a.is_zero() && !b.is_zero() {
                        *entry = entry.add(&a.compose_unchecked(b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// True when every block is zero.
    pub fn is_zero(&self) -> bool {
        self.blocks.iter().flatten().all(SpanMorphism::is_zero)
    }

    /// Matrix of the map at level `Θ_e`.
    pub fn level_matrix(&self, e: u64) -> Vec<Vec<i64>> {
        let rows = self.dst.level_rank(e);
        let cols = self.src.level_rank(e);
        let mut m = vec![vec![0i64; cols]; rows];
        let mut r0 = 0;
        for (i, row) in self.blocks.iter().enumerate() {
            let h = gcd(self.dst.summands[i], e) as usize;
            let mut c0 = 0;
            for (j, b) in row.iter().enumerate() {
                let w = gcd(self.src.summands[j], e) as usize;
                if !b.is_zero() {
                    let sub = b.level_matrix(e);
                    for (a, subrow) in sub.iter().enumerate() {
                        m[r0 + a][c0..c0 + w].copy_from_slice(subrow);
                    }
                }
                c0 += w;
            }
            r0 += h;
        }
        m
    }
}

/// The value `F_d(Θ_e)` together with the matrix of any block morphism at
/// that level: returns the rank of each summand and the matrix.
pub fn evaluate(m: &FreeModule, e: u64) -> Vec<usize> {
    m.summands.iter().map(|&d| gcd(d, e) as usize).collect()
}

/// Matrix of restriction `F_d(Θ_f) -> F_d(Θ_e)` for `f | e` (inclusion of
/// fixed points), in orbit-sum bases.
pub fn restriction_matrix(d: u64, f: u64, e: u64) -> Vec<Vec<i64>> {
    let gf = gcd(d, f) as usize;
    let ge = gcd(d, e) as usize;
    let mut m = vec![vec![0i64; gf]; ge];
    for (r, row) in m.iter_mut().enumerate() {
        row[r % gf] = 1;
    }
    m
}

/// Matrix of transfer `F_d(Θ_e) -> F_d(Θ_f)` for `f | e` (relative trace).
pub fn transfer_matrix(d: u64, e: u64, f: u64) -> Vec<Vec<i64>> {
    let gf = gcd(d, f) as usize;
    let ge = gcd(d, e) as usize;
    let idx = (e / f) as usize;
    let mut m = vec![vec![0i64; ge]; gf];
    for r in 0..ge {
        // the orbit sum over positions ≡ r (mod ge), rotated by f*i
        let mut w = vec![0i64; d as usize];
        for i in 0..idx {
            for p in (r..d as usize).step_by(ge) {
                w[(p + f as usize * i) % d as usize] += 1;
            }
        }
        for (rf, row) in m.iter_mut().enumerate() {
            row[r] = w[rf];
        }
    }
    m
}

/// A finitely generated abelian group `Z^rank ⊕ Z/t_1 ⊕ ... ⊕ Z/t_k` with
/// `t_1 | t_2 | ... | t_k` and every `t_i >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct AbelianGroup {
    /// Free rank.
    pub rank: usize,
    /// Invariant factors of the torsion subgroup.
    pub torsion: Vec<u64>,
}

impl AbelianGroup {
    /// The zero group.
    pub fn zero() -> Self {
        Self::default()
    }

    /// The group `Z`.
    pub fn integers() -> Self {
        AbelianGroup { rank: 1, torsion: Vec::new() }
    }

    /// The cyclic group `Z/k` (zero when `k = 1`, `Z` when `k = 0`).
    pub fn cyclic(k: u64) -> Self {
        Self::from_cyclic_orders(0, &[k])
    }

    /// Normalises an arbitrary list of cyclic orders (`0` meaning `Z`) into
    /// invariant-factor form.
    pub fn from_cyclic_orders(rank: usize, orders: &[u64]) -> Self {
        let mut rank = rank;
        let mut by_prime: BTreeMap<u64, Vec<u64>> = BTreeMap::new();
        for &k in orders {
            if k == 0 {
                rank += 1;
                continue;
            }
            for (p, e) in factorize(k) {
                by_prime.entry(p).or_default().push(p.pow(e));
            }
        }
        let len = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut torsion = vec![1u64; len];
        for mut powers in by_prime.into_values() {
            powers.sort_unstable_by(|a, b| b.cmp(a));
            for (i, q) in powers.into_iter().enumerate() {
                torsion[len - 1 - i] *= q;
            }
        }
        AbelianGroup { rank, torsion }
    }

    /// Direct sum.
    pub fn direct_sum(&self, other: &AbelianGroup) -> AbelianGroup {
        let mut orders = self.torsion.clone();
        orders.extend_from_slice(&other.torsion);
        Self::from_cyclic_orders(self.rank + other.rank, &orders)
    }

    /// True for the zero group.
    pub fn is_zero(&self) -> bool {
        self.rank == 0 && self.torsion.is_empty()
    }

    /// Order of the torsion subgroup.
    pub fn torsion_order(&self) -> u128 {
        self.torsion.iter().map(|&t| u128::from(t)).product()
    }

    /// The torsion subgroup.
    pub fn torsion_subgroup(&self) -> AbelianGroup {
        AbelianGroup { rank: 0, torsion: self.torsion.clone() }
    }

    /// The `ell`-primary part of the torsion subgroup.
    pub fn ell_primary(&self, ell: u64) -> AbelianGroup {
        let orders: Vec<u64> = self
            .torsion
            .iter()
            .map(|&t| {
                let mut q = 1;
                let mut t = t;
                while t % ell == 0 {
                    t /= ell;
                    q *= ell;
                }
                q
            })
            .collect();
        Self::from_cyclic_orders(0, &orders)
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// A group for every orbit `Θ_e`, `e | n`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LevelwiseGroup {
    /// Group at each level, keyed by `e`.
    pub levels: BTreeMap<u64, AbelianGroup>,
}

impl LevelwiseGroup {
    /// The group at `Θ_e`, zero if absent.
    pub fn at(&self, e: u64) -> AbelianGroup {
        self.levels.get(&e).cloned().unwrap_or_default()
    }

    /// True when every level is zero.
    pub fn is_zero(&self) -> bool {
        self.levels.values().all(AbelianGroup::is_zero)
    }
}

/// Extra structural data used to tell apart Mackey functors with the same
/// levelwise groups.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RecognitionHints {
    /// Whether all restriction maps are surjective.
    pub restriction_surjective: Option<bool>,
    /// For functors that are `Z` at every level: the index of the image of
    /// restriction `Θ_1 -> Θ_e`, keyed by `e`.
    pub free_restriction_index: Option<BTreeMap<u64, u64>>,
}

/// The named Mackey functors that occur as cohomology of a point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NamedMackey {
    /// The constant functor.
    Z,
    /// The quotient `Z/I_d`, with value `Z/(d:e)` at `Θ_e`.
    ZModI(u64),
    /// The ideal `I_d`.
    I(u64),
    /// The extension `Z(e;d)` of `Z/I_d` by `I_e`, for `d | e`.
    Zed(u64, u64),
    /// A direct sum; the empty sum is zero.
    DirectSum(Vec<NamedMackey>),
    /// Levelwise data without a name.
    Unrecognized(LevelwiseGroup),
}

impl NamedMackey {
    /// The zero functor.
    pub fn zero() -> Self {
        NamedMackey::DirectSum(Vec::new())
    }

    /// The levelwise groups of a named functor over `C_n`.
    pub fn levels(&self, n: u64) -> LevelwiseGroup {
        let mut out = LevelwiseGroup::default();
        for e in divisors(n) {
            out.levels.insert(e, self.level(e));
        }
        out
    }

    /// The group at `Θ_e`.
    pub fn level(&self, e: u64) -> AbelianGroup {
        match self {
            NamedMackey::Z | NamedMackey::I(_) | NamedMackey::Zed(_, _) => {
                AbelianGroup::integers()
            }
            NamedMackey::ZModI(d) => AbelianGroup::cyclic(colon(*d, e)),
            NamedMackey::DirectSum(parts) => parts
                .iter()
                .fold(AbelianGroup::zero(), |acc, p| acc.direct_sum(&p.level(e))),
            NamedMackey::Unrecognized(l) => l.at(e),
        }
    }

    /// Index of restriction `Θ_1 -> Θ_e` on a functor that is `Z` at every
    /// level.
    pub fn free_restriction_index(&self, e: u64) -> Option<u64> {
        match self {
            NamedMackey::Z => Some(1),
            NamedMackey::I(d) => Some(gcd(*d, e)),
            NamedMackey::Zed(a, b) => Some(gcd(*a, e) / gcd(*b, e)),
            _ => None,
        }
    }

    /// True for the zero functor.
    pub fn is_zero(&self) -> bool {
        matches!(self, NamedMackey::DirectSum(p) if p.iter().all(NamedMackey::is_zero))
    }
}

impl fmt::Display for NamedMackey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NamedMackey::Z => write!(f, "Z"),
            NamedMackey::ZModI(d) => write!(f, "Z/I_{d}"),
            NamedMackey::I(d) => write!(f, "I_{d}"),
            NamedMackey::Zed(e, d) => write!(f, "Z({e};{d})"),
            NamedMackey::DirectSum(p) if p.is_empty() => write!(f, "0"),
            NamedMackey::DirectSum(p) => {
                let parts: Vec<String> = p.iter().map(|x| format!("{x}")).collect();
                write!(f, "{}", parts.join(" + "))
            }
            NamedMackey::Unrecognized(_) => write!(f, "unrecognized"),
        }
    }
}

/// Names a levelwise group when its data matches one of the basic functors
/// at every level; otherwise returns [`NamedMackey::Unrecognized`].
///
/// `Z/I_d` needs surjective restrictions; the functors that are `Z` at every
/// level are told apart by the restriction indices in `hints`. Without that
/// data the result is `Unrecognized`.
pub fn recognize(n: u64, l: &LevelwiseGroup, hints: &RecognitionHints) -> NamedMackey {
    let divs = divisors(n);
    let unrecognized = || NamedMackey::Unrecognized(l.clone());
    if divs.iter().all(|&e| l.at(e).is_zero()) {
        return NamedMackey::zero();
    }
    let top = l.at(1);
    if top.rank == 0 && top.torsion.len() == 1 {
        let d = top.torsion[0];
        let fits = n % d == 0 && divs.iter().all(|&e| l.at(e) == AbelianGroup::cyclic(colon(d, e)));
        if fits && hints.restriction_surjective == Some(true) {
            return NamedMackey::ZModI(d);
        }
        return unrecognized();
    }
    if divs.iter().all(|&e| l.at(e) == AbelianGroup::integers()) {
        let Some(idx) = &hints.free_restriction_index else {
            return unrecognized();
        };
        let candidates = core::iter::once(NamedMackey::Z)
            .chain(divs.iter().map(|&d| NamedMackey::I(d)))
            .chain(divs.iter().flat_map(|&a| {
                divs.iter()
                    .filter(move |&&b| a % b == 0)
                    .map(move |&b| NamedMackey::Zed(a, b))
            }));
        for cand in candidates {
            if divs
                .iter()
                .all(|&e| idx.get(&e).copied() == cand.free_restriction_index(e))
            {
                return cand;
            }
        }
    }
    unrecognized()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn span_roundtrip_and_ranks() {
        for b in divisors(45) {
            for c in divisors(45) {
                let basis = span_basis(b, c).unwrap();
                assert_eq!(basis.len() as u64, gcd(b, c));
                for (i, m) in basis.iter().enumerate() {
                    let coords = m.span_coords();
                    assert_eq!(coords.iter().sum::<i64>(), 1);
                    assert_eq!(coords[i], 1);
                    let back = SpanMorphism::from_vector(b, c, m.vector().to_vec()).unwrap();
                    assert_eq!(&back, m);
                }
            }
        }
        assert_eq!(span_basis(9, 15).unwrap().len(), 3);
        assert_eq!(span_basis(1, 9).unwrap().len(), 1);
        assert_eq!(span_basis(9, 9).unwrap()[0], SpanMorphism::identity(9));
    }

    #[test]
    fn special_maps() {
        let rp = SpanMorphism::special(Special::RPi, 9, 1).unwrap();
        let ip = SpanMorphism::special(Special::IPi, 1, 9).unwrap();
        assert_eq!(rp.compose(&ip).unwrap().vector(), &[9]);
        assert_eq!(
            ip.compose(&rp).unwrap(),
            SpanMorphism::special(Special::IPiRPi, 9, 9).unwrap()
        );
        let d = SpanMorphism::special(Special::IPiRPi, 9, 15).unwrap();
        assert_eq!(d.normity(), 3);
        assert_eq!(d.span_coords(), vec![1, 1, 1]);
        assert_eq!(SpanMorphism::identity(9).normity(), 1);
        let br = SpanMorphism::special(Special::Bracket(vec![2, -1, 0]), 3, 9).unwrap();
        assert_eq!(br.normity(), 1);
        assert!(SpanMorphism::special(Special::RPi, 9, 3).is_err());
        assert!(SpanMorphism::special(Special::Rt, 9, 3).is_err());
    }

    #[test]
    fn level_values() {
        let m = FreeModule::new(vec![9]);
        assert_eq!(m.level_rank(1), 1);
        assert_eq!(m.level_rank(9), 9);
        assert_eq!(m.level_rank(15), 3);
        assert_eq!(evaluate(&m, 15), vec![3]);
    }

    #[test]
    fn restriction_and_transfer_compose_to_index() {
        // transfer after restriction on F_d(Θ_f) is multiplication by e/f
        for d in divisors(45) {
            for f in divisors(45) {
                for e in divisors(45).into_iter().filter(|e| e % f == 0) {
                    let r = restriction_matrix(d, f, e);
                    let t = transfer_matrix(d, e, f);
                    let gf = gcd(d, f) as usize;
                    for i in 0..gf {
                        for j in 0..gf {
                            let v: i64 = (0..r.len()).map(|k| t[i][k] * r[k][j]).sum();
                            let expect = if i == j { (e / f) as i64 } else { 0 };
                            assert_eq!(v, expect, "d={d} f={f} e={e}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn abelian_group_normal_form() {
        let g = AbelianGroup::from_cyclic_orders(1, &[2, 3, 4, 1]);
        assert_eq!(g.torsion, vec![2, 12]);
        assert_eq!(g.to_string(), "Z + Z/2 + Z/12");
        assert_eq!(AbelianGroup::cyclic(1), AbelianGroup::zero());
        assert_eq!(g.ell_primary(2).torsion, vec![2, 4]);
    }

    #[test]
    fn recognize_named() {
        let n = 45;
        let hints = RecognitionHints {
            restriction_surjective: Some(true),
            free_restriction_index: None,
        };
        let l = NamedMackey::ZModI(9).levels(n);
        assert_eq!(recognize(n, &l, &hints), NamedMackey::ZModI(9));
        assert!(matches!(
            recognize(n, &l, &RecognitionHints::default()),
            NamedMackey::Unrecognized(_)
        ));
        for named in [NamedMackey::Z, NamedMackey::I(15), NamedMackey::Zed(9, 3)] {
            let idx = divisors(n)
                .into_iter()
                .map(|e| (e, named.free_restriction_index(e).unwrap()))
                .collect();
            let hints = RecognitionHints {
                restriction_surjective: None,
                free_restriction_index: Some(idx),
            };
            assert_eq!(recognize(n, &named.levels(n), &hints), named);
        }
        assert!(recognize(n, &NamedMackey::zero().levels(n), &hints).is_zero());
    }
}
