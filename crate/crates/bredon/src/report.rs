//! Reports for single queries.

use bredon_core::cohomology::GroupResult;
use bredon_core::mackey::AbelianGroup;
use serde_json::{json, Value};

/// `{rank, torsion}` for a group.
pub fn group_json(g: &AbelianGroup) -> Value {
    json!({ "rank": g.rank, "torsion": g.torsion })
}

/// The group of `H^β` at one level, with its name, method and reductions.
pub fn group_report_json(res: &GroupResult, level: u64) -> Value {
    json!({
        "n": res.n,
        "degree": res.degree.to_string(),
        "level": level,
        "group": group_json(&res.levels.at(level)),
        "mackey": res.named.to_string(),
        "method": res.method.as_str(),
        "reductions": res.reduction_log.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
    })
}

/// Plain-text form of [`group_report_json`].
pub fn group_report_text(res: &GroupResult, level: u64) -> String {
    let mut out = format!(
        "H^{{{}}} over C_{} at level {}: {}\nmackey: {}\nmethod: {}\n",
        res.degree,
        res.n,
        level,
        res.levels.at(level),
        res.named,
        res.method
    );
    if res.reduction_log.is_empty() {
        out.push_str("reductions: none\n");
    } else {
        out.push_str("reductions:\n");
        for r in &res.reduction_log {
            out.push_str(&format!("  {r}\n"));
        }
    }
    out
}
