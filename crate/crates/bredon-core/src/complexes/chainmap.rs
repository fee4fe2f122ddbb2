use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::ToPrimitive;

use super::complex::FreeComplex;
use super::hom::{ChainMap, HomComplex};
use super::snf::{invariant_factors, Diagonalization, Matrix};
use super::{HomGenerator, HomotopyGroupResult, Method};
use crate::arith::{colon, gcd, is_divisor_string};
use crate::error::{invalid, Result};
use crate::mackey::{AbelianGroup, BlockMorphism, FreeModule, SpanMorphism, Special};

/// Normity data `(M_i, w_i)` for a chain map `L(c) -> L(d)` between linear
/// models on divisor strings of a common length `k`.
///
/// The degree `2i - 1` component is `<M_i>` and the degree `2i` component
/// is `<M_i> + w_i IπRπ`; the degree `0` component is the integer `w_0`,
/// determined by `M_1 (d_1 : c_1) = w_0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChainMapData {
    /// Source string.
    pub c: Vec<u64>,
    /// Target string.
    pub d: Vec<u64>,
    /// Normities `M_1, ..., M_k`.
    pub m: Vec<i64>,
    /// Integers `w_1, ..., w_k`.
    pub w: Vec<i64>,
}

fn mul(a: i64, b: i64) -> Result<i64> {
    a.checked_mul(b)
        .ok_or_else(|| crate::Error::Overflow(format!("{a} * {b}")))
}

fn add(a: i64, b: i64) -> Result<i64> {
    a.checked_add(b)
        .ok_or_else(|| crate::Error::Overflow(format!("{a} + {b}")))
}

fn check_strings(c: &[u64], d: &[u64]) -> Result<()> {
    if c.len() != d.len() {
        return Err(invalid(format!(
            "strings of different lengths {} and {}",
            c.len(),
            d.len()
        )));
    }
    if c.is_empty() {
        return Err(invalid("empty divisor strings"));
    }
    if !is_divisor_string(c) || !is_divisor_string(d) {
        return Err(invalid("entries must form divisor strings"));
    }
    Ok(())
}

impl ChainMapData {
    /// Checks the commutation relations and builds the data. Relation `i`
    /// (for `2 <= i <= k`) reads
    /// `M_i (d_i : c_i) = (M_{i-1} + w_{i-1} (c_{i-1}, d_{i-1})) (c_{i-1} : d_{i-1})`.
    pub fn new(c: Vec<u64>, d: Vec<u64>, m: Vec<i64>, w: Vec<i64>) -> Result<Self> {
        check_strings(&c, &d)?;
        if m.len() != c.len() || w.len() != c.len() {
            return Err(invalid("need one M and one w per position"));
        }
        let data = ChainMapData { c, d, m, w };
        for i in 1..data.k() {
            let lhs = mul(data.m[i], colon(data.d[i], data.c[i]) as i64)?;
            let rhs = mul(data.normity(i - 1)?, colon(data.c[i - 1], data.d[i - 1]) as i64)?;
            if lhs != rhs {
                return Err(invalid(format!("relation {} fails: {lhs} != {rhs}", i + 1)));
            }
        }
        Ok(data)
    }

    /// Builds data from the coordinates `M'_i = M_i + w_i (c_i, d_i)`.
    pub fn from_primed(c: Vec<u64>, d: Vec<u64>, mp: &[i64], w: Vec<i64>) -> Result<Self> {
        check_strings(&c, &d)?;
        let m = (0..c.len())
            .map(|i| add(mp[i], -mul(w[i], gcd(c[i], d[i]) as i64)?))
            .collect::<Result<Vec<i64>>>()?;
        Self::new(c, d, m, w)
    }

    /// The zero map.
    pub fn zero(c: Vec<u64>, d: Vec<u64>) -> Result<Self> {
        let k = c.len();
        Self::new(c, d, vec![0; k], vec![0; k])
    }

    /// Common length of the strings.
    pub fn k(&self) -> usize {
        self.c.len()
    }

    /// `w_0 = M_1 (d_1 : c_1)`.
    pub fn w0(&self) -> i64 {
        self.m[0] * colon(self.d[0], self.c[0]) as i64
    }

    /// Normity of the degree-`2i` component, `M_i + w_i (c_i, d_i)`, for
    /// the zero-based position `idx = i - 1`.
    pub fn normity(&self, idx: usize) -> Result<i64> {
        add(self.m[idx], mul(self.w[idx], gcd(self.c[idx], self.d[idx]) as i64)?)
    }
}

fn one_block(src: u64, dst: u64, f: SpanMorphism) -> BlockMorphism {
    let mut b = BlockMorphism::zero(&FreeModule::new(vec![src]), &FreeModule::new(vec![dst]));
    b.blocks[0][0] = f;
    b
}

/// The chain map `L(c) -> L(d)` described by the data, together with both
/// linear models.
pub fn chain_map_from_data(
    n: u64,
    data: &ChainMapData,
) -> Result<(FreeComplex, FreeComplex, ChainMap)> {
    let k = FreeComplex::linear_model(n, &data.c)?;
    let l = FreeComplex::linear_model(n, &data.d)?;
    let mut comps = BTreeMap::new();
    comps.insert(0, one_block(1, 1, SpanMorphism::identity(1).scale(data.w0())));
    for i in 0..data.k() {
        let (ci, di) = (data.c[i], data.d[i]);
        let g = gcd(ci, di) as usize;
        let mut coords = vec![0i64; g];
        coords[0] = data.m[i];
        let bracket = SpanMorphism::from_span(ci, di, &coords)?;
        let ipr = SpanMorphism::special(Special::IPiRPi, ci, di)?.scale(data.w[i]);
        let deg = 2 * i as i64;
        comps.insert(deg + 1, one_block(ci, di, bracket.clone()));
        comps.insert(deg + 2, one_block(ci, di, bracket.add(&ipr)));
    }
    let f = ChainMap { degree: 0, comps };
    if !f.commutes(&k, &l) {
        return Err(invalid("data does not define a chain map"));
    }
    Ok((k, l, f))
}

/// Null-homotopy criterion on normity data: `(c_1, d_1) | M_1`,
/// `(d_{i+1} : c_i)(c_i, d_i) | M_i + (c_i, d_i) w_i` for `i < k`, and
/// `M_k + (c_k, d_k) w_k = 0`.
pub fn is_null_homotopic(data: &ChainMapData) -> Result<bool> {
    let k = data.k();
    if data.m[0] % gcd(data.c[0], data.d[0]) as i64 != 0 {
        return Ok(false);
    }
    for i in 0..k - 1 {
        let modulus = colon(data.d[i + 1], data.c[i]) * gcd(data.c[i], data.d[i]);
        if data.normity(i)? % modulus as i64 != 0 {
            return Ok(false);
        }
    }
    Ok(data.normity(k - 1)? == 0)
}

/// Null-homotopy decided by the hom-complex oracle.
pub fn is_null_homotopic_oracle(n: u64, data: &ChainMapData) -> Result<bool> {
    let (k, l, f) = chain_map_from_data(n, data)?;
    Ok(HomComplex::new(&k, &l)?.is_null_homotopic(&f))
}

/// The integer by which the map acts on the canonical generator of
/// `H_{2i}`: `(c_i : d_i)(M_i + w_i (c_i, d_i))`, and `w_0` when `i = 0`.
pub fn homology_action(data: &ChainMapData, i: usize) -> Result<i64> {
    if i > data.k() {
        return Err(invalid(format!("degree index {i} exceeds {}", data.k())));
    }
    if i == 0 {
        return Ok(data.w0());
    }
    mul(colon(data.c[i - 1], data.d[i - 1]) as i64, data.normity(i - 1)?)
}

/// The same integer read off the top-level matrix of the degree-`2i`
/// component (both top-level values are free of rank one, spanned by the
/// orbit sum that generates homology).
pub fn homology_action_oracle(n: u64, data: &ChainMapData, i: usize) -> Result<i64> {
    if i > data.k() {
        return Err(invalid(format!("degree index {i} exceeds {}", data.k())));
    }
    let (k, l, f) = chain_map_from_data(n, data)?;
    Ok(f.level_matrix(&k, &l, 2 * i as i64, 1)[0][0])
}

fn kernel_basis(m: &Matrix, cols: usize) -> Vec<Vec<i64>> {
    let d = Diagonalization::compute_i64(m, m.len(), cols);
    (d.rank()..cols)
        .map(|j| {
            (0..cols)
                .map(|i| d.v[i][j].to_i64().expect("kernel entry fits in i64"))
                .collect()
        })
        .collect()
}

/// The orders of the cyclic factors targeted by the null-homotopy map:
/// `(c_1, d_1)`, then `(d_{i+1} : c_i)(c_i, d_i)` for `1 <= i < k`.
pub fn phi_moduli(c: &[u64], d: &[u64]) -> Vec<u64> {
    let k = c.len();
    let mut out = vec![gcd(c[0], d[0])];
    for i in 0..k - 1 {
        out.push(colon(d[i + 1], c[i]) * gcd(c[i], d[i]));
    }
    out
}

/// The homotopy classes `[L(c), L(d)]` as the image of the lattice of
/// valid data under the null-homotopy map. The generators are a basis of
/// the lattice of valid data.
pub fn phi_image(c: &[u64], d: &[u64]) -> Result<HomotopyGroupResult> {
    check_strings(c, d)?;
    let k = c.len();
    let vars = 2 * k;
    // variables: M'_1..M'_k, then w_1..w_k
    let mut rel: Matrix = Vec::new();
    for i in 1..k {
        let mut row = vec![0i64; vars];
        let col = colon(d[i], c[i]) as i64;
        row[i] = col;
        row[k + i] = -mul(col, gcd(c[i], d[i]) as i64)?;
        row[i - 1] = -(colon(c[i - 1], d[i - 1]) as i64);
        rel.push(row);
    }
    let basis = kernel_basis(&rel, vars);
    let z = basis.len();
    let moduli = phi_moduli(c, d);
    let t = k + 1;
    // columns: images of the basis, then the relations of the target
    let mut big: Matrix = vec![vec![0i64; z + k]; t];
    for (j, b) in basis.iter().enumerate() {
        big[0][j] = b[0];
        for i in 1..k {
            big[i][j] = b[i - 1];
        }
        big[k][j] = b[k - 1];
    }
    for (i, &o) in moduli.iter().enumerate() {
        big[i][z + i] = o as i64;
    }
    let ker = kernel_basis(&big, z + k);
    // classes of data mapping into the relations
    let rows: Matrix = (0..z).map(|i| ker.iter().map(|v| v[i]).collect()).collect();
    let factors = invariant_factors(&rows);
    let tors: Vec<u64> = factors
        .iter()
        .filter_map(|x| {
            let v = x.to_u64().expect("order fits in u64");
            (v > 1).then_some(v)
        })
        .collect();
    let group = AbelianGroup::from_cyclic_orders(z - factors.len(), &tors);
    let generators = basis
        .iter()
        .map(|b| {
            ChainMapData::from_primed(c.to_vec(), d.to_vec(), &b[..k], b[k..].to_vec())
                .map(HomGenerator::Data)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(HomotopyGroupResult { group, generators, method: Method::PhiImage })
}
