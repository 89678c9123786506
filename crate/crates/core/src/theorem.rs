//! End-to-end check of the main theorem for one member of the family.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::arith::bredon_wood_crosscap;
use crate::construction::{
    construct_surface_with_limit, ConstructionReport, SurfaceCheck, DEFAULT_DISK_LIMIT,
};
use crate::error::{LensError, Result};
use crate::placement::{verify_placements, PlacementReport};

#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    pub construction: ConstructionReport,
    pub placements: PlacementReport,
    pub crosscap: u64,
    /// Construction checks followed by the placement and crosscap checks.
    pub checks: Vec<SurfaceCheck>,
    pub passed: bool,
}

impl TheoremReport {
    pub fn failures(&self) -> impl Iterator<Item = &SurfaceCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

pub fn verify_theorem(n: usize) -> Result<TheoremReport> {
    verify_theorem_with_limit(n, DEFAULT_DISK_LIMIT)
}

pub fn verify_theorem_with_limit(n: usize, disk_limit: usize) -> Result<TheoremReport> {
    let construction = construct_surface_with_limit(n, disk_limit)?;
    let placements = verify_placements(n)?;
    let (p, q) = (construction.surface.p, construction.surface.q);
    let crosscap = bredon_wood_crosscap(&BigInt::from(p), &BigInt::from(q))?;
    let crosscap = crosscap
        .crosscap
        .to_u64()
        .ok_or_else(|| LensError::Overflow(format!("crosscap of L({p},{q})")))?;

    let mut checks = construction.checks.clone();
    checks.push(SurfaceCheck {
        name: "placements".into(),
        pass: placements.all_pass(),
        skipped: false,
        detail: format!("{} violation(s)", placements.violation_count()),
    });
    let euler = construction.surface.euler;
    checks.push(SurfaceCheck {
        name: "crosscap_maximal".into(),
        pass: euler == 2 - crosscap as i64,
        skipped: false,
        detail: format!("chi = {euler}, 2 - crosscap = {}", 2 - crosscap as i64),
    });
    let passed = checks.iter().all(|c| c.pass);
    Ok(TheoremReport {
        n,
        p,
        q,
        construction,
        placements,
        crosscap,
        checks,
        passed,
    })
}
