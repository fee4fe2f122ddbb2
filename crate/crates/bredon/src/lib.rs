//! Front end for the `bredon` command: text and JSON reports, charts of
//! cohomology groups, and verification sweeps against the oracle.

pub mod chart;
pub mod report;
pub mod verify;

use std::ops::RangeInclusive;

/// Caps the global thread pool at `BREDON_THREADS` when it is set.
pub fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("BREDON_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&k| k > 0)
        .ok_or_else(|| format!("BREDON_THREADS must be a positive integer, got '{value}'"))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}

/// Parses an inclusive range written `a..b` or `a..=b`, or a single value.
///
/// ```
/// assert_eq!(bredon::parse_range("-3..4").unwrap(), -3..=4);
/// assert_eq!(bredon::parse_range("2").unwrap(), 2..=2);
/// assert!(bredon::parse_range("4..1").is_err());
/// ```
pub fn parse_range(s: &str) -> Result<RangeInclusive<i64>, String> {
    let bad = || format!("cannot parse range '{s}' (expected a..b)");
    let (lo, hi) = match s.split_once("..") {
        Some((lo, hi)) => {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            (lo.trim().parse().map_err(|_| bad())?, hi.trim().parse().map_err(|_| bad())?)
        }
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo > hi {
        return Err(format!("empty range '{s}'"));
    }
    Ok(lo..=hi)
}

/// Parses a comma-separated list of positive integers.
///
/// ```
/// assert_eq!(bredon::parse_list("3, 9,45").unwrap(), vec![3, 9, 45]);
/// assert!(bredon::parse_list("3,x").unwrap_err().contains("'x'"));
/// ```
pub fn parse_list(s: &str) -> Result<Vec<u64>, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<u64>()
                .ok()
                .filter(|&d| d > 0)
                .ok_or_else(|| format!("cannot parse '{t}' as a positive integer"))
        })
        .collect()
}
