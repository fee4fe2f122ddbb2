//! Charts of `H^β` over a grid of degrees.
//!
//! For `n = ℓ²` the layout is one chart per coefficient `r` of `λ_ℓ`, with
//! the horizontal lines `dim β = 1, 0, -1, -2` and the integer part `m` on
//! the horizontal axis; the coefficient of `λ_{ℓ²}` is then determined by
//! the line and the column. For general `n`, a chart is a 2-D slice: a base
//! degree plus multiples of two chosen axes.

use std::ops::RangeInclusive;

use bredon_core::arith::is_prime;
use bredon_core::cohomology::{group, GradingDegree};
use bredon_core::mackey::AbelianGroup;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::report::group_json;

/// The lines drawn in an `ℓ²` chart, top to bottom.
pub const DIM_LINES: [i64; 4] = [1, 0, -1, -2];

/// The chart symbol of a group: `.` for zero, otherwise the group in
/// brackets, e.g. `[Z]`, `[Z/3]`, `[Z+Z/3]`.
///
/// ```
/// use bredon::chart::symbol;
/// use bredon_core::mackey::AbelianGroup;
/// assert_eq!(symbol(&AbelianGroup::from_cyclic_orders(1, &[3])), "[Z+Z/3]");
/// assert_eq!(symbol(&AbelianGroup::zero()), ".");
/// ```
pub fn symbol(g: &AbelianGroup) -> String {
    if g.is_zero() {
        ".".into()
    } else {
        format!("[{}]", g.to_string().replace(' ', ""))
    }
}

/// One cell of an `ℓ²` chart: `H^{rλ_ℓ + kλ_{ℓ²} + m}` at the top level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EllSquaredCell {
    /// Coefficient of `λ_ℓ`.
    pub r: i64,
    /// Coefficient of `λ_{ℓ²}`.
    pub k: i64,
    /// Integer part.
    pub m: i64,
    /// The degree.
    pub degree: GradingDegree,
    /// The group at `Θ_1`.
    pub group: AbelianGroup,
}

impl EllSquaredCell {
    /// `dim β = m + 2r + 2k`.
    pub fn dim(&self) -> i64 {
        self.m + 2 * self.r + 2 * self.k
    }
}

/// The prime `ℓ` with `n = ℓ²`, if there is one.
pub fn square_root_prime(n: u64) -> Option<u64> {
    let ell = (n as f64).sqrt().round() as u64;
    (ell * ell == n && is_prime(ell) && ell % 2 == 1).then_some(ell)
}

/// All cells of the `ℓ²` charts for the given ranges of `r` and `m`, on
/// the lines [`DIM_LINES`].
pub fn ell_squared_cells(
    n: u64,
    r_range: RangeInclusive<i64>,
    m_range: RangeInclusive<i64>,
) -> Result<Vec<EllSquaredCell>, String> {
    let ell = square_root_prime(n)
        .ok_or_else(|| format!("the dimension-line layout needs n = l^2 for an odd prime l, got {n}"))?;
    let mut spots = Vec::new();
    for r in r_range {
        for dim in DIM_LINES {
            for m in m_range.clone() {
                if (dim - m - 2 * r).rem_euclid(2) == 0 {
                    spots.push((r, (dim - m - 2 * r) / 2, m));
                }
            }
        }
    }
    spots
        .into_par_iter()
        .map(|(r, k, m)| {
            let degree = GradingDegree::new(m, &[(ell, r), (n, k)]).map_err(|e| e.to_string())?;
            let group = group(n, &degree).map_err(|e| e.to_string())?.top();
            Ok(EllSquaredCell { r, k, m, degree, group })
        })
        .collect()
}

const CELL_WIDTH: usize = 9;

/// Text rendering of `ℓ²` charts: one block per `r`, one row per line of
/// constant dimension, one column per `m`.
pub fn render_ell_squared_text(n: u64, cells: &[EllSquaredCell], m_range: RangeInclusive<i64>) -> String {
    let ell = square_root_prime(n).unwrap_or(0);
    let mut rs: Vec<i64> = cells.iter().map(|c| c.r).collect();
    rs.sort_unstable();
    rs.dedup();
    let mut out = format!("H^(r*l{ell} + k*l{n} + m) over C_{n}, top level\n");
    out.push_str("legend: [Z] = Z, [Z/k] = Z/k, [Z+Z/k] = Z + Z/k, . = 0\n");
    for r in rs {
        out.push_str(&format!("\nr = {r}\n"));
        out.push_str(&format!("{:>8} |", "m"));
        for m in m_range.clone() {
            out.push_str(&format!("{m:^CELL_WIDTH$}"));
        }
        out.push('\n');
        for dim in DIM_LINES {
            out.push_str(&format!("{:>8} |", format!("dim {dim}")));
            for m in m_range.clone() {
                let text = cells
                    .iter()
                    .find(|c| c.r == r && c.m == m && c.dim() == dim)
                    .map(|c| symbol(&c.group))
                    .unwrap_or_default();
                out.push_str(&format!("{text:^CELL_WIDTH$}"));
            }
            out.push('\n');
        }
    }
    out
}

/// JSON rendering of `ℓ²` charts.
pub fn render_ell_squared_json(n: u64, cells: &[EllSquaredCell]) -> Value {
    let cells: Vec<Value> = cells
        .iter()
        .map(|c| {
            json!({
                "r": c.r,
                "k": c.k,
                "m": c.m,
                "dim": c.dim(),
                "degree": c.degree.to_string(),
                "group": group_json(&c.group),
                "symbol": symbol(&c.group),
            })
        })
        .collect();
    json!({ "n": n, "layout": "dimension-lines", "lines": DIM_LINES, "cells": cells })
}

/// A chart axis: the integer part or one `λ_d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// The integer part `m`.
    Integer,
    /// The coefficient of `λ_d`.
    Lambda(u64),
}

impl Axis {
    /// Parses `m` or `lD` (with `D | n`).
    pub fn parse(n: u64, s: &str) -> Result<Axis, String> {
        let s = s.trim();
        if s == "m" {
            return Ok(Axis::Integer);
        }
        let d = s
            .strip_prefix('l')
            .and_then(|d| d.parse::<u64>().ok())
            .ok_or_else(|| format!("cannot parse axis '{s}' (expected m or lD)"))?;
        if d == 0 || n % d != 0 {
            return Err(format!("axis '{s}': {d} does not divide {n}"));
        }
        Ok(Axis::Lambda(d))
    }

    fn shift(&self, beta: &GradingDegree, k: i64) -> GradingDegree {
        let mut out = beta.clone();
        match self {
            Axis::Integer => out.m += k,
            Axis::Lambda(d) => out.add_lambda(*d, k).expect("positive index"),
        }
        out
    }
}

impl std::fmt::Display for Axis {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Axis::Integer => f.write_str("m"),
            Axis::Lambda(d) => write!(f, "l{d}"),
        }
    }
}

/// One cell of a slice: `H^{base + x·X + y·Y}` at the top level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceCell {
    /// Multiple of the horizontal axis.
    pub x: i64,
    /// Multiple of the vertical axis.
    pub y: i64,
    /// The degree.
    pub degree: GradingDegree,
    /// The group at `Θ_1`.
    pub group: AbelianGroup,
}

/// The cells of a 2-D slice through `base`.
pub fn slice_cells(
    n: u64,
    base: &GradingDegree,
    axes: (Axis, Axis),
    x_range: RangeInclusive<i64>,
    y_range: RangeInclusive<i64>,
) -> Result<Vec<SliceCell>, String> {
    if axes.0 == axes.1 {
        return Err(format!("the two axes must differ, both are {}", axes.0));
    }
    let spots: Vec<(i64, i64)> =
        y_range.flat_map(|y| x_range.clone().map(move |x| (x, y))).collect();
    spots
        .into_par_iter()
        .map(|(x, y)| {
            let degree = axes.1.shift(&axes.0.shift(base, x), y);
            let group = group(n, &degree).map_err(|e| e.to_string())?.top();
            Ok(SliceCell { x, y, degree, group })
        })
        .collect()
}

/// Text rendering of a slice, with the vertical axis increasing upwards.
pub fn render_slice_text(
    n: u64,
    base: &GradingDegree,
    axes: (Axis, Axis),
    cells: &[SliceCell],
) -> String {
    let mut xs: Vec<i64> = cells.iter().map(|c| c.x).collect();
    let mut ys: Vec<i64> = cells.iter().map(|c| c.y).collect();
    xs.sort_unstable();
    xs.dedup();
    ys.sort_unstable();
    ys.dedup();
    let mut out = format!(
        "H^({base} + x*{} + y*{}) over C_{n}, top level\n",
        axes.0, axes.1
    );
    out.push_str("legend: [Z] = Z, [Z/k] = Z/k, [Z+Z/k] = Z + Z/k, . = 0\n\n");
    for &y in ys.iter().rev() {
        out.push_str(&format!("{:>8} |", format!("y = {y}")));
        for &x in &xs {
            let text = cells
                .iter()
                .find(|c| c.x == x && c.y == y)
                .map(|c| symbol(&c.group))
                .unwrap_or_default();
            out.push_str(&format!("{text:^CELL_WIDTH$}"));
        }
        out.push('\n');
    }
    out.push_str(&format!("{:>8} |", "x"));
    for &x in &xs {
        out.push_str(&format!("{x:^CELL_WIDTH$}"));
    }
    out.push('\n');
    out
}

/// JSON rendering of a slice.
pub fn render_slice_json(n: u64, base: &GradingDegree, axes: (Axis, Axis), cells: &[SliceCell]) -> Value {
    let cells: Vec<Value> = cells
        .iter()
        .map(|c| {
            json!({
                "x": c.x,
                "y": c.y,
                "degree": c.degree.to_string(),
                "group": group_json(&c.group),
                "symbol": symbol(&c.group),
            })
        })
        .collect();
    json!({
        "n": n,
        "layout": "slice",
        "base": base.to_string(),
        "x_axis": axes.0.to_string(),
        "y_axis": axes.1.to_string(),
        "cells": cells,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_roots() {
        assert_eq!(square_root_prime(9), Some(3));
        assert_eq!(square_root_prime(25), Some(5));
        assert_eq!(square_root_prime(45), None);
        assert_eq!(square_root_prime(81), None);
    }

    #[test]
    fn cells_sit_on_their_lines() {
        let cells = ell_squared_cells(9, -1..=1, -2..=2).unwrap();
        assert!(cells.iter().all(|c| DIM_LINES.contains(&c.dim())));
        // Per chart: three even and two odd values of m, on two lines each.
        assert_eq!(cells.len(), 3 * (2 * 3 + 2 * 2));
    }

    #[test]
    fn axes_parse() {
        assert_eq!(Axis::parse(45, "l9").unwrap(), Axis::Lambda(9));
        assert_eq!(Axis::parse(45, "m").unwrap(), Axis::Integer);
        assert!(Axis::parse(45, "l7").unwrap_err().contains("l7"));
    }
}
