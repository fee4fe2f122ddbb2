use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::complex::{group_from_matrices, FreeComplex};
use super::snf::{in_column_span, Matrix, Subquotient};
use super::{HomGenerator, HomotopyGroupResult, Method};
use crate::arith::{divisors, gcd};
use crate::error::{invalid, Result};
use crate::mackey::{AbelianGroup, BlockMorphism, FreeModule, LevelwiseGroup, SpanMorphism};

/// A map of graded modules `K_q -> L_{q + degree}`, stored by source degree.
/// Missing components are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainMap {
    /// The degree shift.
    pub degree: i64,
    /// Component leaving each source degree.
    pub comps: BTreeMap<i64, BlockMorphism>,
}

impl ChainMap {
    /// The component `K_q -> L_{q + degree}`, zero if absent.
    pub fn component(&self, k: &FreeComplex, l: &FreeComplex, q: i64) -> BlockMorphism {
        self.comps
            .get(&q)
            .cloned()
            .unwrap_or_else(|| BlockMorphism::zero(&k.term(q), &l.term(q + self.degree)))
    }

    /// The identity of a complex.
    pub fn identity(c: &FreeComplex) -> ChainMap {
        let comps = (c.bottom..=c.top())
            .map(|q| {
                let t = c.term(q);
                let mut m = BlockMorphism::zero(&t, &t);
                for (i, &d) in t.summands.iter().enumerate() {
                    m.blocks[i][i] = SpanMorphism::identity(d);
                }
                (q, m)
            })
            .collect();
        ChainMap { degree: 0, comps }
    }

    /// True when `d_L f = (-1)^degree f d_K` in every degree.
    pub fn commutes(&self, k: &FreeComplex, l: &FreeComplex) -> bool {
        let sign = if self.degree.rem_euclid(2) == 1 { -1 } else { 1 };
        let lo = k.bottom.min(l.bottom - self.degree) - 1;
        let hi = k.top().max(l.top() - self.degree) + 1;
        (lo..=hi).all(|q| {
            let f = self.component(k, l, q);
            let f_below = self.component(k, l, q - 1);
            let left = match l.diff(q + self.degree) {
                Some(d) => d.compose(&f).ok(),
                None => Some(BlockMorphism::zero(&k.term(q), &l.term(q + self.degree - 1))),
            };
            let right = match k.diff(q) {
                Some(d) => f_below.compose(d).ok(),
                None => Some(BlockMorphism::zero(&k.term(q), &l.term(q + self.degree - 1))),
            };
            match (left, right) {
                (Some(a), Some(b)) => a.blocks.iter().flatten().zip(b.blocks.iter().flatten()).all(
                    |(x, y)| *x == if sign == 1 { y.clone() } else { y.neg() },
                ),
                _ => false,
            }
        })
    }

    /// Matrix of the component leaving degree `q` at level `Θ_e`.
    pub fn level_matrix(&self, k: &FreeComplex, l: &FreeComplex, q: i64, e: u64) -> Matrix {
        self.component(k, l, q).level_matrix(e)
    }
}

/// Position of a `Hom(F_x, F_y)` block inside a degree of the hom complex.
#[derive(Debug, Clone, Copy)]
struct Slot {
    q: i64,
    a: usize,
    b: usize,
    x: u64,
    y: u64,
    offset: usize,
}

/// The complex of maps `Hom(K, L)` at the top level: degree `p` is
/// `⊕_q Hom(K_q, L_{q+p})` with basis the orbit-class indicators of each
/// block and differential `D f = d_L f - (-1)^p f d_K`.
#[derive(Debug, Clone)]
pub struct HomComplex {
    k: FreeComplex,
    l: FreeComplex,
}

impl HomComplex {
    /// The hom complex of two complexes over the same group.
    pub fn new(k: &FreeComplex, l: &FreeComplex) -> Result<Self> {
        if k.n != l.n {
            return Err(invalid("hom complex of complexes over different groups"));
        }
        Ok(HomComplex { k: k.clone(), l: l.clone() })
    }

    fn slots(&self, p: i64) -> (Vec<Slot>, usize) {
        let mut out = Vec::new();
        let mut off = 0;
        for q in self.k.bottom..=self.k.top() {
            let tk = self.k.term(q);
            let tl = self.l.term(q + p);
            for (a, &x) in tk.summands.iter().enumerate() {
                for (b, &y) in tl.summands.iter().enumerate() {
                    out.push(Slot { q, a, b, x, y, offset: off });
                    off += gcd(x, y) as usize;
                }
            }
        }
        (out, off)
    }

    fn lookup(slots: &[Slot], q: i64, a: usize, b: usize) -> usize {
        slots
            .iter()
            .find(|s| s.q == q && s.a == a && s.b == b)
            .map(|s| s.offset)
            .expect("slot present")
    }

    /// Rank of degree `p`.
    pub fn dim(&self, p: i64) -> usize {
        self.slots(p).1
    }

    /// The differential `D_p` as a matrix (rows index degree `p - 1`).
    pub fn matrix(&self, p: i64) -> Matrix {
        let (src, cols) = self.slots(p);
        let (dst, rows) = self.slots(p - 1);
        let mut m = vec![vec![0i64; cols]; rows];
        let sign_k: i64 = if p.rem_euclid(2) == 1 { 1 } else { -1 };
        for s in &src {
            let g = gcd(s.x, s.y) as usize;
            let dl = self.l.diff(s.q + p);
            let dk = self.k.diff(s.q + 1);
            for r in 0..g {
                let v = (0..s.y as usize).map(|i| i64::from(i % g == r)).collect();
                let f = SpanMorphism::from_vector(s.x, s.y, v).expect("indicator is fixed");
                let col = s.offset + r;
                if let Some(dl) = dl {
                    for (b2, row) in dl.blocks.iter().enumerate() {
                        let h = &row[s.b];
                        if h.is_zero() {
                            continue;
                        }
                        let c = h.compose(&f).expect("shapes agree");
                        let t0 = Self::lookup(&dst, s.q, s.a, b2);
                        let g2 = gcd(c.src(), c.dst()) as usize;
                        for (r2, &val) in c.vector()[..g2].iter().enumerate() {
                            m[t0 + r2][col] += val;
                        }
                    }
                }
                if let Some(dk) = dk {
                    for (a2, h) in dk.blocks[s.a].iter().enumerate() {
                        if h.is_zero() {
                            continue;
                        }
                        let c = f.compose(h).expect("shapes agree");
                        let t0 = Self::lookup(&dst, s.q + 1, a2, s.b);
                        let g2 = gcd(c.src(), c.dst()) as usize;
                        for (r2, &val) in c.vector()[..g2].iter().enumerate() {
                            m[t0 + r2][col] += sign_k * val;
                        }
                    }
                }
            }
        }
        m
    }

    /// Coordinates of a map of degree `p`.
    pub fn coordinates(&self, f: &ChainMap) -> Vec<i64> {
        let (slots, dim) = self.slots(f.degree);
        let mut v = vec![0i64; dim];
        for s in &slots {
            if let Some(c) = f.comps.get(&s.q) {
                let h = &c.blocks[s.b][s.a];
                let g = gcd(s.x, s.y) as usize;
                v[s.offset..s.offset + g].copy_from_slice(&h.vector()[..g]);
            }
        }
        v
    }

    /// The map of degree `p` with the given coordinates.
    pub fn to_map(&self, p: i64, coords: &[BigInt]) -> ChainMap {
        let (slots, _) = self.slots(p);
        let mut comps: BTreeMap<i64, BlockMorphism> = BTreeMap::new();
        for s in &slots {
            let g = gcd(s.x, s.y) as usize;
            let v: Vec<i64> = (0..s.y as usize)
                .map(|i| coords[s.offset + i % g].to_i64().expect("coefficient fits in i64"))
                .collect();
            let entry = comps
                .entry(s.q)
                .or_insert_with(|| BlockMorphism::zero(&self.k.term(s.q), &self.l.term(s.q + p)));
            entry.blocks[s.b][s.a] = SpanMorphism::from_vector(s.x, s.y, v).expect("fixed vector");
        }
        ChainMap { degree: p, comps }
    }

    /// `H_p` of the hom complex, with explicit representatives.
    pub fn homology(&self, p: i64) -> (AbelianGroup, Vec<ChainMap>) {
        let q = Subquotient::compute(&self.matrix(p), &self.matrix(p + 1), self.dim(p));
        let (rank, tors) = q.rank_and_torsion();
        let gens = q.generators.iter().map(|g| self.to_map(p, g)).collect();
        (AbelianGroup::from_cyclic_orders(rank, &tors), gens)
    }

    /// `H_p` of the hom complex as a group only.
    pub fn homology_group(&self, p: i64) -> AbelianGroup {
        let dim = self.dim(p);
        if dim == 0 {
            return AbelianGroup::zero();
        }
        group_from_matrices(dim, &self.matrix(p), &self.matrix(p + 1))
    }

    /// True when the chain map `f` is a boundary in the hom complex.
    pub fn is_null_homotopic(&self, f: &ChainMap) -> bool {
        let v = self.coordinates(f);
        if v.iter().all(|&x| x == 0) {
            return true;
        }
        in_column_span(&self.matrix(f.degree + 1), &v)
    }
}

/// `[K, Σ^m L]` at the top level, with representative chain maps
/// `K -> Σ^m L` (stored as maps `K_q -> L_{q - m}`).
pub fn hom_group(k: &FreeComplex, l: &FreeComplex, m: i64) -> Result<HomotopyGroupResult> {
    let h = HomComplex::new(k, l)?;
    let (group, gens) = h.homology(-m);
    Ok(HomotopyGroupResult {
        group,
        generators: gens.into_iter().map(HomGenerator::Map).collect(),
        method: Method::Oracle,
    })
}

/// `[K, Σ^m L]` evaluated at `Θ_e`: the top-level group of the complexes
/// restricted to `<t^e>` and reduced.
pub fn hom_group_at(k: &FreeComplex, l: &FreeComplex, m: i64, e: u64) -> Result<AbelianGroup> {
    let kr = k.restrict(e)?.reduce();
    let lr = l.restrict(e)?.reduce();
    Ok(HomComplex::new(&kr, &lr)?.homology_group(-m))
}

/// `[K, Σ^m L]` at every level.
pub fn hom_levelwise(k: &FreeComplex, l: &FreeComplex, m: i64) -> Result<LevelwiseGroup> {
    let mut out = LevelwiseGroup::default();
    for e in divisors(k.n) {
        out.levels.insert(e, hom_group_at(k, l, m, e)?);
    }
    Ok(out)
}

/// The mapping cone of a degree-zero chain map `f: K -> L`:
/// `C_p = K_{p-1} ⊕ L_p` with `d(x, y) = (-dx, f x + dy)`. The map is a
/// quasi-isomorphism exactly when the cone is acyclic at every level.
pub fn mapping_cone(k: &FreeComplex, l: &FreeComplex, f: &ChainMap) -> Result<FreeComplex> {
    if f.degree != 0 || k.n != l.n {
        return Err(invalid("mapping cone needs a degree-zero map over one group"));
    }
    let bottom = (k.bottom + 1).min(l.bottom);
    let top = (k.top() + 1).max(l.top());
    let module = |p: i64| {
        let mut s = k.term(p - 1).summands;
        s.extend(l.term(p).summands);
        FreeModule::new(s)
    };
    let terms: Vec<FreeModule> = (bottom..=top).map(module).collect();
    let mut diffs = Vec::new();
    for p in (bottom + 1)..=top {
        let src = module(p);
        let dst = module(p - 1);
        let mut m = BlockMorphism::zero(&src, &dst);
        let nk_src = k.term(p - 1).summands.len();
        let nk_dst = k.term(p - 2).summands.len();
        if let Some(dk) = k.diff(p - 1) {
            for (i, row) in dk.blocks.iter().enumerate() {
                for (j, h) in row.iter().enumerate() {
                    m.blocks[i][j] = h.neg();
                }
            }
        }
        let fp = f.component(k, l, p - 1);
        for (i, row) in fp.blocks.iter().enumerate() {
            for (j, h) in row.iter().enumerate() {
                m.blocks[nk_dst + i][j] = h.clone();
            }
        }
        if let Some(dl) = l.diff(p) {
            for (i, row) in dl.blocks.iter().enumerate() {
                for (j, h) in row.iter().enumerate() {
                    m.blocks[nk_dst + i][nk_src + j] = h.clone();
                }
            }
        }
        diffs.push(m);
    }
    FreeComplex::new(k.n, bottom, terms, diffs)
}

/// True when a degree-zero chain map induces isomorphisms on homology at
/// every level.
pub fn is_quasi_isomorphism(k: &FreeComplex, l: &FreeComplex, f: &ChainMap) -> Result<bool> {
    let cone = mapping_cone(k, l, f)?;
    let h = cone.levelwise_homology()?;
    Ok(h.values().all(LevelwiseGroup::is_zero))
}
