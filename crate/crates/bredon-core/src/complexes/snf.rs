//! Integer Smith normal form.
//!
//! Two entry points: [`invariant_factors`] for the elementary divisors of a
//! matrix (a checked `i64` elimination that restarts over [`BigInt`] on
//! overflow), and [`Diagonalization`], which also records unimodular
//! transforms and their inverses so that kernels, images and homology
//! classes can be written down explicitly.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A dense integer matrix stored row by row.
pub type Matrix = Vec<Vec<i64>>;

/// A dense big-integer matrix stored row by row.
pub type BigMatrix = Vec<Vec<BigInt>>;

/// Converts to big integers.
pub fn to_big(m: &[Vec<i64>]) -> BigMatrix {
    m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
}

/// The nonzero invariant factors of `m` (absolute values, in divisibility
/// order, including any `1`s). Their number is the rank of `m`.
pub fn invariant_factors(m: &[Vec<i64>]) -> Vec<BigInt> {
    let diag = match diagonal_i64(m) {
        Some(d) => d.into_iter().map(BigInt::from).collect(),
        None => diagonal_big(to_big(m)),
    };
    normalize_diagonal(diag)
}

/// Rank of an integer matrix.
pub fn rank(m: &[Vec<i64>]) -> usize {
    invariant_factors(m).len()
}

/// Turns any list of nonzero diagonal entries into invariant-factor form.
pub fn normalize_diagonal(diag: Vec<BigInt>) -> Vec<BigInt> {
    let mut d: Vec<BigInt> = diag.into_iter().map(|x| x.abs()).filter(|x| !x.is_zero()).collect();
    for i in 0..d.len() {
        for j in (i + 1)..d.len() {
            if !(&d[j] % &d[i]).is_zero() {
                let g = d[i].gcd(&d[j]);
                let l = &d[i] / &g * &d[j];
                d[i] = g;
                d[j] = l;
            }
        }
    }
    d
}

fn min_pivot<T: Ord>(
    rows: usize,
    cols: usize,
    k: usize,
    get: impl Fn(usize, usize) -> Option<T>,
) -> Option<(usize, usize)> {
    let mut best: Option<(T, usize, usize)> = None;
    for i in k..rows {
        for j in k..cols {
            if let Some(v) = get(i, j) {
                if best.as_ref().map_or(true, |(b, _, _)| v < *b) {
                    best = Some((v, i, j));
                }
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

/// Diagonalises over `i64`; `None` signals overflow.
fn diagonal_i64(m: &[Vec<i64>]) -> Option<Vec<i64>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<i64>> = m.to_vec();
    let mut diag = Vec::new();
    for k in 0..rows.min(cols) {
        let Some((pi, pj)) = min_pivot(rows, cols, k, |i, j| {
            let v = a[i][j];
            (v != 0).then(|| v.unsigned_abs())
        }) else {
            break;
        };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        loop {
            let p = a[k][k];
            let mut dirty = false;
            for i in (k + 1)..rows {
                let x = a[i][k];
                if x == 0 {
                    continue;
                }
                let q = x.div_euclid(p);
                if q != 0 {
                    let (top, rest) = a.split_at_mut(i);
                    let pivot_row = &top[k];
                    for (dst, &src) in rest[0][k..].iter_mut().zip(&pivot_row[k..]) {
                        *dst = dst.checked_sub(q.checked_mul(src)?)?;
                    }
                }
                dirty |= a[i][k] != 0;
            }
            for j in (k + 1)..cols {
                let x = a[k][j];
                if x == 0 {
                    continue;
                }
                let q = x.div_euclid(p);
                if q != 0 {
                    for row in a.iter_mut().skip(k) {
                        let s = row[k];
                        row[j] = row[j].checked_sub(q.checked_mul(s)?)?;
                    }
                }
                dirty |= a[k][j] != 0;
            }
            if !dirty {
                break;
            }
            // move the smallest remaining entry of row/column k to the pivot
            let mut best = (p.unsigned_abs(), k, k);
            for i in (k + 1)..rows {
                let v = a[i][k];
                if v != 0 && v.unsigned_abs() < best.0 {
                    best = (v.unsigned_abs(), i, k);
                }
            }
            for j in (k + 1)..cols {
                let v = a[k][j];
                if v != 0 && v.unsigned_abs() < best.0 {
                    best = (v.unsigned_abs(), k, j);
                }
            }
            let (_, bi, bj) = best;
            a.swap(k, bi);
            for row in a.iter_mut() {
                row.swap(k, bj);
            }
        }
        diag.push(a[k][k]);
    }
    Some(diag)
}

fn diagonal_big(m: BigMatrix) -> Vec<BigInt> {
    let mut d = Diagonalization::new(m, false);
    d.run();
    d.diagonal()
}

/// A diagonal form `U A V = D` with `U`, `V` unimodular. When transforms
/// are requested the inverses are tracked as well.
#[derive(Debug, Clone)]
pub struct Diagonalization {
    a: BigMatrix,
    track: bool,
    /// Left transform `U`.
    pub u: BigMatrix,
    /// Inverse of `U`.
    pub u_inv: BigMatrix,
    /// Right transform `V`.
    pub v: BigMatrix,
    /// Inverse of `V`.
    pub v_inv: BigMatrix,
    rank: usize,
}

fn identity(n: usize) -> BigMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

impl Diagonalization {
    fn new(a: BigMatrix, track: bool) -> Self {
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let (u, u_inv, v, v_inv) = if track {
            (identity(rows), identity(rows), identity(cols), identity(cols))
        } else {
            (Vec::new(), Vec::new(), Vec::new(), Vec::new())
        };
        Diagonalization { a, track, u, u_inv, v, v_inv, rank: 0 }
    }

    /// Diagonalises `m`, recording transforms.
    pub fn compute(m: BigMatrix) -> Self {
        let mut d = Self::new(m, true);
        d.run();
        d
    }

    /// Diagonalises an `i64` matrix with `rows x cols` shape (the shape is
    /// needed when the matrix has no rows).
    pub fn compute_i64(m: &[Vec<i64>], rows: usize, cols: usize) -> Self {
        let mut big = to_big(m);
        if big.is_empty() {
            big = vec![Vec::new(); rows];
        }
        let mut d = Self::new(big, true);
        if d.v.is_empty() {
            d.v = identity(cols);
            d.v_inv = identity(cols);
        }
        d.run();
        d
    }

    fn rows(&self) -> usize {
        self.a.len()
    }

    fn cols(&self) -> usize {
        self.v.len().max(self.a.first().map_or(0, Vec::len))
    }

    /// Rank of the matrix.
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// The diagonal entries `D_00, ..., D_{r-1,r-1}` (nonzero, possibly
    /// negative, not necessarily in divisibility order).
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.a[i][i].clone()).collect()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if self.track {
            self.u.swap(i, j);
            for row in self.u_inv.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        if self.track {
            for row in self.v.iter_mut() {
                row.swap(i, j);
            }
            self.v_inv.swap(i, j);
        }
    }

    /// row_i -= q * row_k
    fn row_op(&mut self, i: usize, k: usize, q: &BigInt) {
        let (src, dst) = if i > k {
            let (top, rest) = self.a.split_at_mut(i);
            (&top[k], &mut rest[0])
        } else {
            let (top, rest) = self.a.split_at_mut(k);
            (&rest[0], &mut top[i])
        };
        for (d, s) in dst.iter_mut().zip(src.iter()) {
            if !s.is_zero() {
                *d -= q * s;
            }
        }
        if self.track {
            let pr = self.u[k].clone();
            for (d, s) in self.u[i].iter_mut().zip(pr.iter()) {
                *d -= q * s;
            }
            // U^{-1} <- U^{-1} E^{-1}: col_k += q * col_i
            for row in self.u_inv.iter_mut() {
                let add = q * &row[i];
                row[k] += add;
            }
        }
    }

    /// col_j -= q * col_k
    fn col_op(&mut self, j: usize, k: usize, q: &BigInt) {
        for row in self.a.iter_mut() {
            if !row[k].is_zero() {
                let s = q * &row[k];
                row[j] -= s;
            }
        }
        if self.track {
            for row in self.v.iter_mut() {
                let s = q * &row[k];
                row[j] -= s;
            }
            // V^{-1} <- E^{-1} V^{-1}: row_k += q * row_j
            let rj = self.v_inv[j].clone();
            for (d, s) in self.v_inv[k].iter_mut().zip(rj.iter()) {
                *d += q * s;
            }
        }
    }

    fn run(&mut self) {
        let rows = self.rows();
        let cols = self.cols();
        for k in 0..rows.min(cols) {
            let Some((pi, pj)) = min_pivot(rows, cols, k, |i, j| {
                let v = &self.a[i][j];
                (!v.is_zero()).then(|| v.abs())
            }) else {
                break;
            };
            self.swap_rows(k, pi);
            self.swap_cols(k, pj);
            loop {
                let p = self.a[k][k].clone();
                let mut dirty = false;
                for i in (k + 1)..rows {
                    if self.a[i][k].is_zero() {
                        continue;
                    }
                    let q = self.a[i][k].div_floor(&p);
                    if !q.is_zero() {
                        self.row_op(i, k, &q);
                    }
                    dirty |= !self.a[i][k].is_zero();
                }
                for j in (k + 1)..cols {
                    if self.a[k][j].is_zero() {
                        continue;
                    }
                    let q = self.a[k][j].div_floor(&p);
                    if !q.is_zero() {
                        self.col_op(j, k, &q);
                    }
                    dirty |= !self.a[k][j].is_zero();
                }
                if !dirty {
                    break;
                }
                let mut best = (p.abs(), k, k);
                for i in (k + 1)..rows {
                    let v = self.a[i][k].abs();
                    if !v.is_zero() && v < best.0 {
                        best = (v, i, k);
                    }
                }
                for j in (k + 1)..cols {
                    let v = self.a[k][j].abs();
                    if !v.is_zero() && v < best.0 {
                        best = (v, k, j);
                    }
                }
                let (_, bi, bj) = best;
                self.swap_rows(k, bi);
                self.swap_cols(k, bj);
            }
            self.rank = k + 1;
        }
    }
}

/// Multiplies a big matrix by a big vector.
pub fn mat_vec(m: &BigMatrix, x: &[BigInt]) -> Vec<BigInt> {
    m.iter()
        .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
        .collect()
}

/// Multiplies two big matrices.
pub fn mat_mul(a: &BigMatrix, b: &BigMatrix, inner: usize, cols: usize) -> BigMatrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| &row[k] * &b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// A presentation of `ker(out) / im(inc)` for matrices with `out * inc = 0`,
/// with explicit generators and a map from cycles to class coordinates.
#[derive(Debug, Clone)]
pub struct Subquotient {
    /// Cyclic orders of the nontrivial components (`0` for `Z`).
    pub orders: Vec<BigInt>,
    /// A cycle representing each component.
    pub generators: Vec<Vec<BigInt>>,
    /// Row `i` maps a cycle to its coordinate in component `i` (reduce
    /// modulo `orders[i]` when nonzero).
    pub coords: BigMatrix,
}

impl Subquotient {
    /// Computes `ker(out) / im(inc)` where `out: Z^dim -> Z^?` and
    /// `inc: Z^? -> Z^dim`.
    pub fn compute(out: &[Vec<i64>], inc: &[Vec<i64>], dim: usize) -> Self {
        let out_rows = out.len();
        let d_out = Diagonalization::compute_i64(out, out_rows, dim);
        let r = d_out.rank();
        // kernel basis: columns r.. of V, left inverse: rows r.. of V^{-1}
        let kernel: Vec<Vec<BigInt>> = (r..dim)
            .map(|j| (0..dim).map(|i| d_out.v[i][j].clone()).collect())
            .collect();
        let left: BigMatrix = (r..dim).map(|j| d_out.v_inv[j].clone()).collect();
        let z = kernel.len();
        let inc_cols = inc.first().map_or(0, Vec::len);
        let inc_big = to_big(inc);
        // inc in kernel coordinates: z x inc_cols
        let x: BigMatrix = if dim == 0 {
            vec![Vec::new(); z]
        } else {
            mat_mul(&left, &inc_big, dim, inc_cols)
        };
        let x = if x.is_empty() { vec![Vec::new(); z] } else { x };
        let mut dx = Diagonalization::new(x, true);
        if dx.v.is_empty() {
            dx.v = identity(inc_cols);
            dx.v_inv = identity(inc_cols);
        }
        dx.run();
        let rx = dx.rank();
        let diag = dx.diagonal();
        let mut orders = Vec::new();
        let mut generators = Vec::new();
        let mut coords = Vec::new();
        // class coordinates: U * left ; generators: kernel * U^{-1}
        let class_map = if z == 0 { Vec::new() } else { mat_mul(&dx.u, &left, z, dim) };
        for i in 0..z {
            let order = if i < rx { diag[i].abs() } else { BigInt::zero() };
            if order.is_one() {
                continue;
            }
            let gen: Vec<BigInt> = (0..dim)
                .map(|row| (0..z).map(|k| &kernel[k][row] * &dx.u_inv[k][i]).sum())
                .collect();
            orders.push(order);
            generators.push(gen);
            coords.push(class_map[i].clone());
        }
        Subquotient { orders, generators, coords }
    }

    /// Class coordinates of a cycle, reduced modulo the component orders.
    pub fn class_of(&self, cycle: &[BigInt]) -> Vec<BigInt> {
        self.coords
            .iter()
            .zip(&self.orders)
            .map(|(row, ord)| {
                let c: BigInt = row.iter().zip(cycle).map(|(a, b)| a * b).sum();
                if ord.is_zero() {
                    c
                } else {
                    c.mod_floor(ord)
                }
            })
            .collect()
    }

    /// The abelian group as `(rank, torsion orders)`.
    pub fn rank_and_torsion(&self) -> (usize, Vec<u64>) {
        let rank = self.orders.iter().filter(|o| o.is_zero()).count();
        let tors = self
            .orders
            .iter()
            .filter(|o| !o.is_zero())
            .map(|o| o.to_u64().expect("torsion order exceeds u64"))
            .collect();
        (rank, tors)
    }
}

/// True when the subgroup generated by `images` (class coordinates in a
/// group with the given component orders) is everything.
pub fn generates(images: &[Vec<BigInt>], orders: &[BigInt]) -> bool {
    let comps = orders.len();
    if comps == 0 {
        return true;
    }
    // columns: images, then relations
    let mut m: BigMatrix = vec![Vec::new(); comps];
    for img in images {
        for (i, row) in m.iter_mut().enumerate() {
            row.push(img[i].clone());
        }
    }
    for (k, o) in orders.iter().enumerate() {
        for (i, row) in m.iter_mut().enumerate() {
            row.push(if i == k { o.clone() } else { BigInt::zero() });
        }
    }
    let mut d = Diagonalization::new(m, false);
    d.run();
    d.rank() == comps && d.diagonal().iter().all(|x| x.abs().is_one())
}

/// True when `b` lies in the lattice spanned by the columns of `a`.
pub fn in_column_span(a: &[Vec<i64>], b: &[i64]) -> bool {
    let base = invariant_factors(a);
    let mut ext: Vec<Vec<i64>> = a.to_vec();
    if ext.is_empty() {
        ext = b.iter().map(|&x| vec![x]).collect();
    } else {
        for (row, &x) in ext.iter_mut().zip(b) {
            row.push(x);
        }
    }
    let bigger = invariant_factors(&ext);
    if bigger.len() != base.len() {
        return false;
    }
    let p1: BigInt = base.iter().product();
    let p2: BigInt = bigger.iter().product();
    p1 == p2
}
