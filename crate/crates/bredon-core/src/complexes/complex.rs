use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use super::snf::{generates, invariant_factors, Matrix, Subquotient};
use crate::arith::{associated_string, colon, divisors, gcd, lcm};
use crate::error::{invalid, Result};
use crate::mackey::{
    recognize, AbelianGroup, BlockMorphism, FreeModule, LevelwiseGroup, NamedMackey,
    RecognitionHints, SpanMorphism, Special,
};

/// Above this many basis elements at some level, [`FreeComplex::mackey_homology`]
/// skips the explicit restriction maps used for recognition.
const RECOGNITION_RANK_LIMIT: usize = 600;

/// A bounded chain complex of free modules over `C_n`.
///
/// `terms[i]` sits in degree `bottom + i` and `diffs[i]` is the differential
/// `terms[i + 1] -> terms[i]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeComplex {
    /// Order of the group.
    pub n: u64,
    /// Degree of `terms[0]`.
    pub bottom: i64,
    /// The chain modules, from the bottom degree up.
    pub terms: Vec<FreeModule>,
    /// The differentials; `diffs[i]` leaves `terms[i + 1]`.
    pub diffs: Vec<BlockMorphism>,
}

fn span(kind: Special, src: u64, dst: u64) -> SpanMorphism {
    SpanMorphism::special(kind, src, dst).expect("well-formed special map")
}

fn single(src: u64, dst: u64, f: SpanMorphism) -> BlockMorphism {
    BlockMorphism {
        src: FreeModule::new(vec![src]),
        dst: FreeModule::new(vec![dst]),
        blocks: vec![vec![f]],
    }
}

fn check_order(n: u64) -> Result<()> {
    if n == 0 || n % 2 == 0 {
        return Err(invalid(format!("n must be odd, got {n}")));
    }
    Ok(())
}

fn check_divides(n: u64, d: u64) -> Result<()> {
    if d == 0 || n % d != 0 {
        return Err(invalid(format!("{d} does not divide {n}")));
    }
    Ok(())
}

/// `F_x □ F_y` splits into `(x, y)` copies of `F_[x,y]`; copy `j` is
/// generated by `g ⊗ t^j g`. The table sends the pair `(p, q)`, meaning
/// `t^p g ⊗ t^q g`, to `(copy, position)` at index `p * y + q`.
fn box_table(x: u64, y: u64) -> Vec<(usize, usize)> {
    let g = gcd(x, y) as usize;
    let l = (x / gcd(x, y) * y) as usize;
    let (xu, yu) = (x as usize, y as usize);
    let mut t = vec![(0, 0); xu * yu];
    for j in 0..g {
        for i in 0..l {
            t[(i % xu) * yu + (i + j) % yu] = (j, i);
        }
    }
    t
}

/// The blocks of `f □ g` for `f: F_x -> F_x'` and `g: F_y -> F_y'`,
/// indexed `[target copy][source copy]`.
fn box_blocks(
    f: &SpanMorphism,
    g: &SpanMorphism,
    table: &[(usize, usize)],
) -> Vec<Vec<SpanMorphism>> {
    let (x, y) = (f.src(), g.src());
    let (xt, yt) = (f.dst(), g.dst());
    let gs = gcd(x, y) as usize;
    let gt = gcd(xt, yt) as usize;
    let ls = x / gcd(x, y) * y;
    let lt = xt / gcd(xt, yt) * yt;
    let mut out = Vec::with_capacity(gt);
    let mut vecs = vec![vec![vec![0i64; lt as usize]; gs]; gt];
    for (a, &fa) in f.vector().iter().enumerate() {
        if fa == 0 {
            continue;
        }
        for (b, &gb) in g.vector().iter().enumerate() {
            if gb == 0 {
                continue;
            }
            let c = fa.checked_mul(gb).expect("group-ring coefficient overflow");
            for j in 0..gs {
                let q = (b + j) % yt as usize;
                let (copy, pos) = table[a * yt as usize + q];
                let e = &mut vecs[copy][j][pos];
                *e = e.checked_add(c).expect("group-ring coefficient overflow");
            }
        }
    }
    for row in vecs {
        out.push(
            row.into_iter()
                .map(|v| SpanMorphism::from_vector(ls, lt, v).expect("box product is equivariant"))
                .collect(),
        );
    }
    out
}

impl FreeComplex {
    /// Builds a complex after checking shapes, divisibility and `d ∘ d = 0`.
    pub fn new(
        n: u64,
        bottom: i64,
        terms: Vec<FreeModule>,
        diffs: Vec<BlockMorphism>,
    ) -> Result<Self> {
        check_order(n)?;
        for t in &terms {
            for &d in &t.summands {
                check_divides(n, d)?;
            }
        }
        if diffs.len() + 1 != terms.len().max(1) {
            return Err(invalid("need one differential between consecutive terms"));
        }
        for (i, d) in diffs.iter().enumerate() {
            d.validate()?;
            if d.src != terms[i + 1] || d.dst != terms[i] {
                return Err(invalid(format!("differential {i} has the wrong shape")));
            }
        }
        let c = FreeComplex { n, bottom, terms, diffs };
        if !c.is_complex() {
            return Err(invalid("the differential does not square to zero"));
        }
        Ok(c)
    }

    /// The zero complex.
    pub fn zero(n: u64) -> Self {
        FreeComplex { n, bottom: 0, terms: Vec::new(), diffs: Vec::new() }
    }

    /// Highest degree carrying a term (`bottom - 1` when empty).
    pub fn top(&self) -> i64 {
        self.bottom + self.terms.len() as i64 - 1
    }

    /// The chain module in degree `p`.
    pub fn term(&self, p: i64) -> FreeModule {
        let i = p - self.bottom;
        if i < 0 || i >= self.terms.len() as i64 {
            FreeModule::default()
        } else {
            self.terms[i as usize].clone()
        }
    }

    /// The differential leaving degree `p`, if both ends are nonzero terms.
    pub fn diff(&self, p: i64) -> Option<&BlockMorphism> {
        let i = p - self.bottom - 1;
        if i < 0 || i >= self.diffs.len() as i64 {
            None
        } else {
            Some(&self.diffs[i as usize])
        }
    }

    /// True when consecutive differentials compose to zero.
    pub fn is_complex(&self) -> bool {
        self.diffs
            .windows(2)
            .all(|w| w[0].compose(&w[1]).map(|c| c.is_zero()).unwrap_or(false))
    }

    /// The representation sphere `S^{λ_d}`:
    /// `F_d --(1 - Rt)--> F_d --Rπ--> Z` in degrees 2, 1, 0.
    pub fn sphere(n: u64, d: u64) -> Result<Self> {
        check_order(n)?;
        check_divides(n, d)?;
        let id = SpanMorphism::identity(d);
        let rt = span(Special::Rt, d, d);
        FreeComplex::new(
            n,
            0,
            vec![FreeModule::new(vec![1]), FreeModule::new(vec![d]), FreeModule::new(vec![d])],
            vec![single(d, 1, span(Special::RPi, d, 1)), single(d, d, id.add(&rt.neg()))],
        )
    }

    /// The dual sphere `S^{-λ_d}`:
    /// `Z --Iπ--> F_d --(1 - Rt)--> F_d` in degrees 0, -1, -2.
    pub fn sphere_dual(n: u64, d: u64) -> Result<Self> {
        check_order(n)?;
        check_divides(n, d)?;
        let id = SpanMorphism::identity(d);
        let rt = span(Special::Rt, d, d);
        FreeComplex::new(
            n,
            -2,
            vec![FreeModule::new(vec![d]), FreeModule::new(vec![d]), FreeModule::new(vec![1])],
            vec![single(d, d, id.add(&rt.neg())), single(1, d, span(Special::IPi, 1, d))],
        )
    }

    /// The cellular complex of the sphere of the rotation representation
    /// `t ↦ e^{2πik/n}` for `1 <= k < n`:
    /// `F_b --(1 - Rt^A)--> F_b --Rπ--> Z` with `b = n/(k, n)` and `A >= 0`
    /// such that `A k ≡ (k, n) (mod n)`.
    pub fn general_sphere(n: u64, k: u64) -> Result<Self> {
        check_order(n)?;
        if k == 0 || k >= n {
            return Err(invalid(format!("need 1 <= k < {n}, got {k}")));
        }
        let (b, a) = general_sphere_data(n, k);
        let id = SpanMorphism::identity(b);
        let rta = SpanMorphism::rotation(b, a as i64);
        FreeComplex::new(
            n,
            0,
            vec![FreeModule::new(vec![1]), FreeModule::new(vec![b]), FreeModule::new(vec![b])],
            vec![single(b, 1, span(Special::RPi, b, 1)), single(b, b, id.add(&rta.neg()))],
        )
    }

    /// The linear model `L(b)`: with `B = assoc(b)` of length `s`,
    /// `F_{B_s} -> F_{B_s} -> F_{B_{s-1}} -> ... -> F_{B_1} -> F_{B_1} -> Z`
    /// with differentials `Rπ`, `1 - Rt` and `IπRπ` in turn.
    pub fn linear_model(n: u64, b: &[u64]) -> Result<Self> {
        check_order(n)?;
        if b.is_empty() {
            return Err(invalid("linear model of an empty tuple"));
        }
        for &x in b {
            check_divides(n, x)?;
        }
        let bs = associated_string(b)?;
        let mut terms = vec![FreeModule::new(vec![1])];
        let mut diffs = Vec::new();
        let mut prev = 1;
        for (i, &d) in bs.iter().enumerate() {
            let down = if i == 0 {
                span(Special::RPi, d, 1)
            } else {
                span(Special::IPiRPi, d, prev)
            };
            diffs.push(single(d, prev, down));
            terms.push(FreeModule::new(vec![d]));
            let id = SpanMorphism::identity(d);
            diffs.push(single(d, d, id.add(&span(Special::Rt, d, d).neg())));
            terms.push(FreeModule::new(vec![d]));
            prev = d;
        }
        FreeComplex::new(n, 0, terms, diffs)
    }

    /// Box product `self □ other` with the Koszul sign
    /// `d(a ⊗ b) = da ⊗ b + (-1)^{|a|} a ⊗ db`.
    pub fn box_product(&self, other: &FreeComplex) -> Result<FreeComplex> {
        if self.n != other.n {
            return Err(invalid("box product of complexes over different groups"));
        }
        if self.terms.is_empty() || other.terms.is_empty() {
            return Ok(FreeComplex::zero(self.n));
        }
        let bottom = self.bottom + other.bottom;
        let top = self.top() + other.top();
        // per degree: offsets of each (i, a, j, b) block
        type Key = (i64, usize, usize);
        let mut offsets: Vec<BTreeMap<Key, usize>> = Vec::new();
        let mut terms = Vec::new();
        for p in bottom..=top {
            let mut off = BTreeMap::new();
            let mut summands = Vec::new();
            for i in self.bottom..=self.top() {
                let j = p - i;
                if j < other.bottom || j > other.top() {
                    continue;
                }
                let ta = self.term(i);
                let tb = other.term(j);
                for (a, &x) in ta.summands.iter().enumerate() {
                    for (b, &y) in tb.summands.iter().enumerate() {
                        off.insert((i, a, b), summands.len());
                        let l = lcm(x, y)?;
                        summands.extend(core::iter::repeat(l).take(gcd(x, y) as usize));
                    }
                }
            }
            offsets.push(off);
            terms.push(FreeModule::new(summands));
        }
        let mut tables: BTreeMap<(u64, u64), Vec<(usize, usize)>> = BTreeMap::new();
        let mut diffs = Vec::new();
        for p in (bottom + 1)..=top {
            let src = &terms[(p - bottom) as usize];
            let dst = &terms[(p - 1 - bottom) as usize];
            let mut m = BlockMorphism::zero(src, dst);
            let src_off = &offsets[(p - bottom) as usize];
            let dst_off = &offsets[(p - 1 - bottom) as usize];
            for (&(i, a, b), &s0) in src_off {
                let j = p - i;
                let x = self.term(i).summands[a];
                let y = other.term(j).summands[b];
                // da ⊗ b
                if let Some(da) = self.diff(i) {
                    for (a2, row) in da.blocks.iter().enumerate() {
                        let f = &row[a];
                        if f.is_zero() {
                            continue;
                        }
                        let t0 = dst_off[&(i - 1, a2, b)];
                        let key = (f.dst(), y);
                        let table = tables.entry(key).or_insert_with(|| box_table(key.0, key.1));
                        let bl = box_blocks(f, &SpanMorphism::identity(y), table);
                        place(&mut m, t0, s0, bl);
                    }
                }
                // (-1)^i a ⊗ db
                if let Some(db) = other.diff(j) {
                    for (b2, row) in db.blocks.iter().enumerate() {
                        let g = &row[b];
                        if g.is_zero() {
                            continue;
                        }
                        let t0 = dst_off[&(i, a, b2)];
                        let key = (x, g.dst());
                        let table = tables.entry(key).or_insert_with(|| box_table(key.0, key.1));
                        let g = if i.rem_euclid(2) == 1 { g.neg() } else { g.clone() };
                        let bl = box_blocks(&SpanMorphism::identity(x), &g, table);
                        place(&mut m, t0, s0, bl);
                    }
                }
            }
            diffs.push(m);
        }
        let mut c = FreeComplex { n: self.n, bottom, terms, diffs };
        c.trim();
        Ok(c)
    }

    /// The dual complex `Hom(-, Z)`: degrees are negated and each
    /// differential is transposed.
    pub fn dual(&self) -> FreeComplex {
        let len = self.terms.len();
        let terms: Vec<FreeModule> = self.terms.iter().rev().cloned().collect();
        let mut diffs = vec![BlockMorphism::zero(&FreeModule::default(), &FreeModule::default()); self.diffs.len()];
        for (m, d) in self.diffs.iter().enumerate() {
            let blocks = (0..d.src.summands.len())
                .map(|i| (0..d.dst.summands.len()).map(|j| d.blocks[j][i].transpose()).collect())
                .collect();
            diffs[len - 2 - m] = BlockMorphism { src: d.dst.clone(), dst: d.src.clone(), blocks };
        }
        FreeComplex { n: self.n, bottom: -self.top(), terms, diffs }
    }

    /// Shifts every term up by `k` degrees.
    pub fn shift(&self, k: i64) -> FreeComplex {
        let mut c = self.clone();
        c.bottom += k;
        c
    }

    /// Restriction to the subgroup `<t^e> ≅ C_{n/e}`: `F_x` becomes `(x, e)`
    /// copies of `F_{x:e}`.
    pub fn restrict(&self, e: u64) -> Result<FreeComplex> {
        check_divides(self.n, e)?;
        let restrict_module = |m: &FreeModule| {
            FreeModule::new(
                m.summands
                    .iter()
                    .flat_map(|&x| core::iter::repeat(colon(x, e)).take(gcd(x, e) as usize))
                    .collect(),
            )
        };
        let terms: Vec<FreeModule> = self.terms.iter().map(restrict_module).collect();
        let diffs = self
            .diffs
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let mut m = BlockMorphism::zero(&terms[i + 1], &terms[i]);
                let mut r0 = 0;
                for (a, row) in d.blocks.iter().enumerate() {
                    let h = gcd(d.dst.summands[a], e) as usize;
                    let mut c0 = 0;
                    for (b, f) in row.iter().enumerate() {
                        let w = gcd(d.src.summands[b], e) as usize;
                        if !f.is_zero() {
                            place(&mut m, r0, c0, f.restrict(e));
                        }
                        c0 += w;
                    }
                    r0 += h;
                }
                m
            })
            .collect();
        Ok(FreeComplex { n: self.n / e, bottom: self.bottom, terms, diffs })
    }

    /// Gaussian elimination: repeatedly cancels a pair of summands joined by
    /// an isomorphism `±t^j`. The result is chain homotopy equivalent.
    pub fn reduce(&self) -> FreeComplex {
        let mut c = self.clone();
        // an elimination only changes entries of the differential it acts
        // on, so one pass over the differentials suffices
        for i in 0..c.diffs.len() {
            while let Some((a, b, inv)) = c.find_unit(i) {
                c.eliminate(i, a, b, &inv);
            }
        }
        c.trim();
        c
    }

    fn find_unit(&self, i: usize) -> Option<(usize, usize, SpanMorphism)> {
        for (a, row) in self.diffs[i].blocks.iter().enumerate() {
            for (b, f) in row.iter().enumerate() {
                if let Some(inv) = f.unit_inverse() {
                    return Some((a, b, inv));
                }
            }
        }
        None
    }

    fn eliminate(&mut self, i: usize, a: usize, b: usize, phi_inv: &SpanMorphism) {
        let d = &mut self.diffs[i];
        let pivot_row = d.blocks[a].clone();
        for r in 0..d.blocks.len() {
            if r == a || d.blocks[r][b].is_zero() {
                continue;
            }
            let corr = d.blocks[r][b].compose_unchecked(phi_inv);
            for (c, beta) in pivot_row.iter().enumerate() {
                if c != b && !beta.is_zero() {
                    let e = &mut d.blocks[r][c];
                    *e = e.add(&corr.compose_unchecked(beta).neg());
                }
            }
        }
        d.blocks.remove(a);
        for row in d.blocks.iter_mut() {
            row.remove(b);
        }
        self.terms[i + 1].summands.remove(b);
        self.terms[i].summands.remove(a);
        self.diffs[i].src = self.terms[i + 1].clone();
        self.diffs[i].dst = self.terms[i].clone();
        if i + 1 < self.diffs.len() {
            let up = &mut self.diffs[i + 1];
            up.blocks.remove(b);
            up.dst = self.terms[i + 1].clone();
        }
        if i > 0 {
            let down = &mut self.diffs[i - 1];
            for row in down.blocks.iter_mut() {
                row.remove(a);
            }
            down.src = self.terms[i].clone();
        }
    }

    /// The restriction to `<t^e>` of a box product of complexes, reduced
    /// after each factor. This is homotopy equivalent to
    /// `(□ factors).restrict(e)` and far smaller.
    pub fn restricted_box(factors: &[FreeComplex], e: u64) -> Result<FreeComplex> {
        let Some(first) = factors.first() else {
            return Err(invalid("box product of no factors"));
        };
        let mut acc = first.restrict(e)?.reduce();
        for f in &factors[1..] {
            acc = acc.box_product(&f.restrict(e)?.reduce())?.reduce();
        }
        Ok(acc)
    }

    /// Levelwise homology of a box product of complexes, computed through
    /// [`FreeComplex::restricted_box`] at each level.
    pub fn box_levelwise_homology(factors: &[FreeComplex]) -> Result<BTreeMap<i64, LevelwiseGroup>> {
        let Some(first) = factors.first() else {
            return Err(invalid("box product of no factors"));
        };
        let mut out: BTreeMap<i64, LevelwiseGroup> = BTreeMap::new();
        let lo: i64 = factors.iter().map(|f| f.bottom).sum();
        let hi: i64 = factors.iter().map(FreeComplex::top).sum();
        for e in divisors(first.n) {
            let r = Self::restricted_box(factors, e)?;
            for p in lo..=hi {
                out.entry(p).or_default().levels.insert(e, r.level_homology(p, 1));
            }
        }
        Ok(out)
    }

    /// Drops zero terms at either end.
    fn trim(&mut self) {
        while self.terms.last().is_some_and(|t| t.summands.is_empty()) {
            self.terms.pop();
            self.diffs.pop();
        }
        while self.terms.first().is_some_and(|t| t.summands.is_empty()) {
            self.terms.remove(0);
            if !self.diffs.is_empty() {
                self.diffs.remove(0);
            }
            self.bottom += 1;
        }
        if self.terms.is_empty() {
            self.bottom = 0;
            self.diffs.clear();
        }
    }

    /// Matrix of the differential `C_p(Θ_e) -> C_{p-1}(Θ_e)`.
    pub fn level_differential(&self, p: i64, e: u64) -> Matrix {
        match self.diff(p) {
            Some(d) => d.level_matrix(e),
            None => vec![vec![0; self.term(p).level_rank(e)]; self.term(p - 1).level_rank(e)],
        }
    }

    /// `H_p(C)(Θ_e)` computed from invariant factors of the level matrices.
    pub fn level_homology(&self, p: i64, e: u64) -> AbelianGroup {
        let dim = self.term(p).level_rank(e);
        if dim == 0 {
            return AbelianGroup::zero();
        }
        let out = self.level_differential(p, e);
        let inc = self.level_differential(p + 1, e);
        group_from_matrices(dim, &out, &inc)
    }

    /// `H_p(C)(Θ_e)`, computed at the top level of the restricted and
    /// reduced complex (the same group, usually much faster).
    pub fn level_homology_reduced(&self, p: i64, e: u64) -> Result<AbelianGroup> {
        Ok(self.restrict(e)?.reduce().level_homology(p, 1))
    }

    /// Levelwise homology in every degree, via restriction and reduction.
    pub fn levelwise_homology(&self) -> Result<BTreeMap<i64, LevelwiseGroup>> {
        let mut out: BTreeMap<i64, LevelwiseGroup> = BTreeMap::new();
        for e in divisors(self.n) {
            let r = self.restrict(e)?.reduce();
            for p in self.bottom..=self.top() {
                out.entry(p).or_default().levels.insert(e, r.level_homology(p, 1));
            }
        }
        Ok(out)
    }

    /// `H_p(C)(Θ_e)` with explicit cycle generators over the orbit-sum
    /// bases.
    pub fn explicit_homology(&self, p: i64, e: u64) -> Subquotient {
        let dim = self.term(p).level_rank(e);
        Subquotient::compute(&self.level_differential(p, e), &self.level_differential(p + 1, e), dim)
    }

    /// Restriction of a cycle at `Θ_1` to `Θ_e`.
    fn restrict_cycle(&self, p: i64, cycle: &[BigInt], e: u64) -> Vec<BigInt> {
        let t = self.term(p);
        let mut out = Vec::with_capacity(t.level_rank(e));
        for (x, &d) in cycle.iter().zip(&t.summands) {
            out.extend(core::iter::repeat(x.clone()).take(gcd(d, e) as usize));
        }
        out
    }

    /// Recognition data for `H_p` from explicit restriction maps, or the
    /// default (no data) when the complex is too large.
    pub fn recognition_hints(&self, p: i64) -> RecognitionHints {
        let divs = divisors(self.n);
        if self.term(p).level_rank(self.n) > RECOGNITION_RANK_LIMIT
            || self.term(p + 1).level_rank(self.n) > RECOGNITION_RANK_LIMIT
            || self.term(p - 1).level_rank(self.n) > RECOGNITION_RANK_LIMIT
        {
            return RecognitionHints::default();
        }
        let top = self.explicit_homology(p, 1);
        let mut surjective = true;
        let mut index = BTreeMap::new();
        let mut all_free = top.orders.len() == 1 && top.orders[0].is_zero();
        for &e in &divs {
            let level = self.explicit_homology(p, e);
            let images: Vec<Vec<BigInt>> = top
                .generators
                .iter()
                .map(|g| level.class_of(&self.restrict_cycle(p, g, e)))
                .collect();
            surjective &= generates(&images, &level.orders);
            let free_here = level.orders.len() == 1 && level.orders[0].is_zero();
            if all_free && free_here {
                let r = images[0][0].abs().to_u64().unwrap_or(0);
                index.insert(e, r);
            } else {
                all_free = false;
            }
        }
        RecognitionHints {
            restriction_surjective: Some(surjective),
            free_restriction_index: all_free.then_some(index),
        }
    }

    /// `H_p` as a Mackey functor: levelwise groups and a name when one of
    /// the basic functors matches.
    pub fn mackey_homology(&self, p: i64) -> Result<(LevelwiseGroup, NamedMackey)> {
        let mut levels = LevelwiseGroup::default();
        for e in divisors(self.n) {
            levels.levels.insert(e, self.level_homology_reduced(p, e)?);
        }
        let hints = if levels.is_zero() {
            RecognitionHints::default()
        } else {
            self.recognition_hints(p)
        };
        let named = recognize(self.n, &levels, &hints);
        Ok((levels, named))
    }
}

/// `ker(out) / im(inc)` on `Z^dim` as an abelian group.
pub fn group_from_matrices(dim: usize, out: &[Vec<i64>], inc: &[Vec<i64>]) -> AbelianGroup {
    let r_out = invariant_factors(out).len();
    let f_in = invariant_factors(inc);
    let rank = dim - r_out - f_in.len();
    let tors: Vec<u64> = f_in
        .iter()
        .filter_map(|x| {
            let v = x.to_u64().expect("torsion order exceeds u64");
            (v > 1).then_some(v)
        })
        .collect();
    AbelianGroup::from_cyclic_orders(rank, &tors)
}

/// Writes a block matrix into `m` starting at summand offsets `(r0, c0)`,
/// adding to what is already there.
fn place(m: &mut BlockMorphism, r0: usize, c0: usize, blocks: Vec<Vec<SpanMorphism>>) {
    for (i, row) in blocks.into_iter().enumerate() {
        for (j, f) in row.into_iter().enumerate() {
            if !f.is_zero() {
                let e = &mut m.blocks[r0 + i][c0 + j];
                *e = e.add(&f);
            }
        }
    }
}

/// For the rotation sphere with parameter `k`: the orbit index
/// `b = n/(k, n)` and the exponent `A` in `[0, b)` with
/// `A k ≡ (k, n) (mod n)`.
pub fn general_sphere_data(n: u64, k: u64) -> (u64, u64) {
    let g = gcd(k, n);
    let b = n / g;
    let kk = (k / g) % b;
    let a = (0..b.max(1)).find(|&a| (a * kk) % b == 1 % b).unwrap_or(0);
    (b, a)
}
