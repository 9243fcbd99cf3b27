use std::fmt::Write;

use eqpart::conditions::ConditionReport;
use eqpart::linalg::MERGE_TOL;

pub fn number(x: f64) -> String {
    let r = x.round();
    if (x - r).abs() <= MERGE_TOL {
        format!("{}", r as i64)
    } else {
        format!("{x:.10}")
    }
}

pub fn set(v: &[usize]) -> String {
    format!("{{{}}}", v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", "))
}

pub fn matrix(m: &[Vec<usize>], indent: &str) -> String {
    m.iter()
        .map(|r| format!("{indent}[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn report(r: &ConditionReport) -> String {
    let mut out = String::new();
    walk(r, 0, &mut out);
    out
}

fn walk(r: &ConditionReport, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    let _ = writeln!(out, "{pad}[{}] {}: {}", r.verdict, r.condition_id, r.narrative);
    for w in &r.witnesses {
        let _ = writeln!(out, "{pad}    {} = {}", w.name, w.value);
    }
    for c in &r.children {
        walk(c, depth + 1, out);
    }
}
