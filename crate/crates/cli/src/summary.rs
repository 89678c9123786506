use serde_json::{json, Value};

use lensurf_core::construction::ConstructionReport;
use lensurf_core::theorem::TheoremReport;
use lensurf_core::EdgeClass;

pub fn theorem(r: &TheoremReport) -> Value {
    let s = &r.construction.surface;
    json!({
        "n": r.n,
        "p": r.p,
        "q": r.q,
        "euler": s.euler,
        "weight_E_v": s.weight(EdgeClass::Vertical),
        "weight_E_h": s.weight(EdgeClass::Horizontal),
        "orientable": s.orientable,
        "orientable_by_propagation": s.orientable_by_propagation,
        "connected": s.connected,
        "square_condition": s.square_condition,
        "fundamental_criterion": s.fundamental_criterion,
        "sheets": r.construction.sheets,
        "sheet_profile": r.construction.sheet_profile,
        "crosscap": r.crosscap,
        "placement_violations": r.placements.violation_count(),
        "checks": r.checks,
        "passed": r.passed,
    })
}

pub fn theorem_pretty(r: &TheoremReport) -> String {
    let mut out = format!("n = {}, L({},{}):\n", r.n, r.p, r.q);
    for c in &r.checks {
        let mark = if !c.pass {
            "FAIL"
        } else if c.skipped {
            "skip"
        } else {
            "ok  "
        };
        if c.detail.is_empty() {
            out.push_str(&format!("  {mark} {}\n", c.name));
        } else {
            out.push_str(&format!("  {mark} {} ({})\n", c.name, c.detail));
        }
    }
    out
}

pub fn construction(r: &ConstructionReport) -> String {
    let s = &r.surface;
    let mut out = format!("h_{} in L({},{})\n", r.n - 1, s.p, s.q);
    for step in &r.history {
        out.push_str(&format!(
            "  h_{}: euler {} (bookkeeping {})\n",
            step.k, step.euler, step.expected_euler
        ));
    }
    for sheet in &r.sheets {
        out.push_str(&format!("  x_({},1) = {}\n", sheet.m, sheet.count));
    }
    for c in r.checks.iter().filter(|c| !c.pass) {
        out.push_str(&format!("  FAIL {} {}\n", c.name, c.detail));
    }
    if s.p <= 64 {
        out.push_str(&format!("{}\n", s.qvector));
    }
    out
}
