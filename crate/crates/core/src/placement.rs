//! Where the compressing disks sit: one patch pair per visited tetrahedron
//! pair, and the bookkeeping checks on those placements.
//!
//! In L(p_n, q_n) the `i`-th compressing disk of step `k` has `q_k + 1`
//! pairs of patches. The leading patch of pair `j` sits in
//!
//! ```text
//! 2 (q_n + q_{n-1} + .. + q_{n-(k-2)}) + (j - 1) q_n + 2i - 1   (mod p_n)
//! ```
//!
//! and the following patch in the next tetrahedron. The first and last
//! pairs are trigonal, the others quadrilateral.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::construction::Family;
use crate::error::Result;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Leading,
    Following,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PatchKind {
    Trigonal,
    Quadrilateral,
}

/// `first` is `1..=q_n`, `second` is `q_n+1..=2q_n`, `last` is the
/// remaining `p_{n-1}` tetrahedra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    First,
    Second,
    Last,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Leading => "leading",
            Role::Following => "following",
        })
    }
}

impl fmt::Display for PatchKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PatchKind::Trigonal => "trigonal",
            PatchKind::Quadrilateral => "quadrilateral",
        })
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Region::First => "first",
            Region::Second => "second",
            Region::Last => "last",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PatchPlacement {
    pub step: usize,
    pub disk: usize,
    pub pair: usize,
    pub role: Role,
    pub tet: usize,
    pub kind: PatchKind,
    pub region: Region,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompressionSchedule {
    pub n: usize,
    pub p: usize,
    pub q: usize,
    /// Ordered by step, disk, pair, then role.
    pub placements: Vec<PatchPlacement>,
}

impl CompressionSchedule {
    pub fn step(&self, k: usize) -> impl Iterator<Item = &PatchPlacement> {
        self.placements.iter().filter(move |pl| pl.step == k)
    }

    pub fn disk_count(&self, k: usize) -> usize {
        self.step(k).map(|pl| pl.disk).max().unwrap_or(0)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,disk,pair,role,tet,kind,region\n");
        for pl in &self.placements {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                pl.step, pl.disk, pl.pair, pl.role, pl.tet, pl.kind, pl.region
            ));
        }
        out
    }
}

pub(crate) fn region_of(family: &Family, tet: usize) -> Region {
    let q = family.q_n() as usize;
    if tet <= q {
        Region::First
    } else if tet <= 2 * q {
        Region::Second
    } else {
        Region::Last
    }
}

pub fn compression_schedule(n: usize) -> Result<CompressionSchedule> {
    let family = Family::new(n)?;
    Ok(schedule_for(&family))
}

pub(crate) fn schedule_for(family: &Family) -> CompressionSchedule {
    let n = family.n();
    let (p, q) = (family.p_n() as i64, family.q_n() as i64);
    let wrap = |x: i64| ((x - 1).rem_euclid(p) + 1) as usize;
    let mut placements = Vec::new();
    for k in 1..n {
        let base: i64 = 2 * (0..k - 1).map(|r| family.q(n - r) as i64).sum::<i64>();
        let pairs = family.q(k) as usize + 1;
        for i in 1..=family.disks_in_step(k) {
            for j in 1..=pairs {
                let kind = if j == 1 || j == pairs {
                    PatchKind::Trigonal
                } else {
                    PatchKind::Quadrilateral
                };
                let leading = wrap(base + (j as i64 - 1) * q + 2 * i as i64 - 1);
                for (role, tet) in [
                    (Role::Leading, leading),
                    (Role::Following, wrap(leading as i64 + 1)),
                ] {
                    placements.push(PatchPlacement {
                        step: k,
                        disk: i,
                        pair: j,
                        role,
                        tet,
                        kind,
                        region: region_of(family, tet),
                    });
                }
            }
        }
    }
    CompressionSchedule {
        n,
        p: p as usize,
        q: q as usize,
        placements,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlacementCheck {
    pub label: char,
    pub description: String,
    pub violations: Vec<String>,
}

impl PlacementCheck {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlacementReport {
    pub n: usize,
    pub checks: Vec<PlacementCheck>,
}

impl PlacementReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(PlacementCheck::pass)
    }

    pub fn check(&self, label: char) -> Option<&PlacementCheck> {
        self.checks.iter().find(|c| c.label == label)
    }

    pub fn violation_count(&self) -> usize {
        self.checks.iter().map(|c| c.violations.len()).sum()
    }
}

pub fn verify_placements(n: usize) -> Result<PlacementReport> {
    let family = Family::new(n)?;
    let schedule = schedule_for(&family);
    let previous = if n >= 3 {
        Some(schedule_for(&Family::new(n - 1)?))
    } else {
        None
    };
    Ok(check_schedule(&family, &schedule, previous.as_ref()))
}

fn describe(pl: &PatchPlacement) -> String {
    format!(
        "step {} disk {} pair {} {} patch in tau_{}",
        pl.step, pl.disk, pl.pair, pl.role, pl.tet
    )
}

pub(crate) fn check_schedule(
    family: &Family,
    schedule: &CompressionSchedule,
    previous: Option<&CompressionSchedule>,
) -> PlacementReport {
    let n = family.n();
    let (p, q) = (schedule.p, schedule.q);
    let is_end_pair =
        |pl: &PatchPlacement| pl.pair == 1 || pl.pair == family.q(pl.step) as usize + 1;
    let mut checks = Vec::new();

    // (a) the last tetrahedron of each region is never used
    let forbidden = [q, 2 * q, p];
    checks.push(PlacementCheck {
        label: 'a',
        description: format!("no patch in tau_{q}, tau_{}, tau_{p}", 2 * q),
        violations: schedule
            .placements
            .iter()
            .filter(|pl| forbidden.contains(&pl.tet))
            .map(describe)
            .collect(),
    });

    // (b) from step 2 on, first and last pairs lie in the last region
    checks.push(PlacementCheck {
        label: 'b',
        description: "first and last pairs of steps k >= 2 lie in the last region".into(),
        violations: schedule
            .placements
            .iter()
            .filter(|pl| pl.step >= 2 && is_end_pair(pl) && pl.region != Region::Last)
            .map(describe)
            .collect(),
    });

    // (c) one patch per tetrahedron per step
    let mut c = Vec::new();
    for k in 1..n {
        let mut seen: BTreeMap<usize, &PatchPlacement> = BTreeMap::new();
        for pl in schedule.step(k) {
            if let Some(prev) = seen.insert(pl.tet, pl) {
                c.push(format!("{} and {}", describe(prev), describe(pl)));
            }
        }
    }
    checks.push(PlacementCheck {
        label: 'c',
        description: "within a step no tetrahedron hosts two patches".into(),
        violations: c,
    });

    // (d) end pairs in fresh tetrahedra, middle pairs in compressed ones
    let mut d = Vec::new();
    let mut touched: BTreeSet<usize> = BTreeSet::new();
    for k in 1..n {
        for pl in schedule.step(k) {
            let fresh = !touched.contains(&pl.tet);
            if is_end_pair(pl) != fresh {
                d.push(format!(
                    "{} ({})",
                    describe(pl),
                    if fresh {
                        "untouched"
                    } else {
                        "already compressed"
                    }
                ));
            }
        }
        touched.extend(schedule.step(k).map(|pl| pl.tet));
    }
    checks.push(PlacementCheck {
        label: 'd',
        description: "end pairs in untouched tetrahedra, middle pairs in compressed ones".into(),
        violations: d,
    });

    // (e) the last region replays the previous member of the family, shifted by 2 q_n
    let mut e = Vec::new();
    if let Some(prev) = previous {
        for k in 2..n {
            for i in 1..=family.disks_in_step(k) {
                for role in [Role::Leading, Role::Following] {
                    let here: Vec<usize> = schedule
                        .step(k)
                        .filter(|pl| pl.disk == i && pl.role == role && pl.region == Region::Last)
                        .map(|pl| pl.tet - 2 * q)
                        .collect();
                    let there: Vec<usize> = prev
                        .step(k - 1)
                        .filter(|pl| pl.disk == i && pl.role == role)
                        .map(|pl| pl.tet)
                        .collect();
                    if here != there {
                        e.push(format!(
                            "step {k} disk {i} {role}: last region {here:?} vs previous step {} {there:?}",
                            k - 1
                        ));
                    }
                }
            }
        }
    }
    checks.push(PlacementCheck {
        label: 'e',
        description: "last-region placements shifted by 2q_n replay the previous lens space".into(),
        violations: e,
    });

    // (f) the j-th pairs of all disks of a step share a region
    let mut f = Vec::new();
    let mut regions: BTreeMap<(usize, usize), BTreeSet<Region>> = BTreeMap::new();
    for pl in &schedule.placements {
        regions
            .entry((pl.step, pl.pair))
            .or_default()
            .insert(pl.region);
    }
    for ((k, j), set) in regions {
        if set.len() > 1 {
            f.push(format!("step {k} pair {j} spans regions {set:?}"));
        }
    }
    checks.push(PlacementCheck {
        label: 'f',
        description: "for each step and pair index all disks land in one region".into(),
        violations: f,
    });

    PlacementReport { n, checks }
}
