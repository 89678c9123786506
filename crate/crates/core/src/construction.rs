//! The compression construction in L(p_n, q_n) for the kappa = 2 family.
//!
//! `h_0 = (t_1 + t_3 + .. + t_{p-1}) / 2` has Euler characteristic
//! `2 - p/2`. Step `k` compresses along `(q_{n-k+1} - 1)/2` disks, each
//! raising the Euler characteristic by 2, and after `n - 1` steps the surface `h_{n-1}` has Euler characteristic
//! `2 - n`.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};

use crate::arith::lens_sequence;
use crate::error::{LensError, Result};
use crate::fundamental::haken_fund_criterion;
use crate::normal::layering::DiskComplex;
use crate::normal::{
    edge_weights, euler_characteristic, satisfies_matching, square_condition, HakenVector,
};
use crate::quad::{
    check_basis_hypotheses, reconstruct_tdisks, s_vector, sum_of_odd_t, t_vector, QVector,
};
use crate::triangulation::{EdgeClass, LensParams, Triangulation};

/// Above this many disks connectivity and orientation propagation are
/// skipped.
pub const DEFAULT_DISK_LIMIT: usize = 2_000_000;

/// `(p_k, q_k)` for `k = 0..=n` of the kappa = 2 sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    n: usize,
    terms: Vec<(u64, u64)>,
}

impl Family {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(LensError::OutOfRange(format!(
                "the construction needs n >= 2, got {n}"
            )));
        }
        let terms = lens_sequence(2, n)?.to_u64_terms()?;
        if terms[n].0 > i64::MAX as u64 / 8 {
            return Err(LensError::Overflow(format!("p_{n} = {}", terms[n].0)));
        }
        Ok(Family { n, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn p(&self, k: usize) -> u64 {
        self.terms[k].0
    }

    pub fn q(&self, k: usize) -> u64 {
        self.terms[k].1
    }

    pub fn p_n(&self) -> u64 {
        self.p(self.n)
    }

    pub fn q_n(&self) -> u64 {
        self.q(self.n)
    }

    pub fn params(&self) -> LensParams {
        LensParams::new(self.p_n() as i64, self.q_n() as i64).expect("sequence terms are coprime")
    }

    pub fn disks_in_step(&self, k: usize) -> usize {
        (self.q(self.n - k + 1) as usize - 1) / 2
    }

    /// `q_from + .. + q_to`.
    pub fn q_sum(&self, from: usize, to: usize) -> u64 {
        (from..=to).map(|k| self.q(k)).sum()
    }

    /// Euler characteristic after step `k` by bookkeeping alone.
    pub fn expected_euler(&self, k: usize) -> i64 {
        2 - self.p_n() as i64 / 2
            + (1..=k)
                .map(|r| self.q(self.n - r + 1) as i64 - 1)
                .sum::<i64>()
    }

    /// The four blocks at which `h_{n-1}` should have `n - 2` sheets of `Q1`.
    pub fn sheet_positions(&self) -> [usize; 4] {
        let a = self.q_sum(1, self.n - 1) as usize;
        let b = self.q_sum(1, self.n) as usize;
        [a, a + 1, b, b + 1]
    }
}

pub fn h0(params: LensParams) -> Result<QVector> {
    if params.p() % 2 != 0 {
        return Err(LensError::OddP(params.p().to_string()));
    }
    if params.q() < 3 {
        return Err(LensError::HypothesisViolated(format!(
            "h_0 needs q >= 3, got q = {}",
            params.q()
        )));
    }
    check_basis_hypotheses(params)?;
    let doubled = sum_of_odd_t(params);
    let mut halved = Vec::with_capacity(doubled.counts().len());
    for &c in doubled.counts() {
        if c % 2 != 0 {
            return Err(LensError::Inconsistent(
                "sum of odd t_i is not divisible by 2".into(),
            ));
        }
        halved.push(c / 2);
    }
    QVector::from_counts(params, halved)
}

/// Indices of the basis vectors subtracted for one compressing disk.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiskTerms {
    pub disk: usize,
    pub t: Vec<usize>,
    pub s: Vec<usize>,
}

/// The construction on one member of the family.
#[derive(Debug, Clone)]
pub struct Construction {
    family: Family,
    tri: Triangulation,
}

impl Construction {
    pub fn new(n: usize) -> Result<Self> {
        let family = Family::new(n)?;
        let tri = Triangulation::build(family.params())?;
        Ok(Construction { family, tri })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn triangulation(&self) -> &Triangulation {
        &self.tri
    }

    pub fn h0(&self) -> Result<QVector> {
        h0(self.family.params())
    }

    /// For each disk of step `k`, the `t` and `s` indices of
    /// `sum_j t_{L(j)} - sum_{j>=2} (s_{L(j)} + s_{L(j)+1})`.
    pub fn step_terms(&self, k: usize) -> Result<Vec<DiskTerms>> {
        let f = &self.family;
        let n = f.n();
        if k == 0 || k >= n {
            return Err(LensError::OutOfRange(format!(
                "step {k} outside 1..={}",
                n - 1
            )));
        }
        let params = f.params();
        let qn = f.q_n() as i64;
        let offset: i64 = (1..k.saturating_sub(1))
            .map(|r| 2 * f.q(n - r) as i64)
            .sum();
        let mut out = Vec::new();
        for i in 1..=f.disks_in_step(k) as i64 {
            let terms = if k == 1 {
                DiskTerms {
                    disk: i as usize,
                    t: vec![params.wrap(2 * i - 1)],
                    s: Vec::new(),
                }
            } else {
                let lead = |j: i64| (j + 1) * qn + offset + 2 * i - 1;
                let qk = f.q(k) as i64;
                DiskTerms {
                    disk: i as usize,
                    t: (1..=qk).map(|j| params.wrap(lead(j))).collect(),
                    s: (2..=qk)
                        .flat_map(|j| [params.wrap(lead(j)), params.wrap(lead(j) + 1)])
                        .collect(),
                }
            };
            out.push(terms);
        }
        Ok(out)
    }

    /// `h_k` from `h_{k-1}`.
    pub fn apply_step(&self, h_prev: &QVector, k: usize) -> Result<QVector> {
        let params = self.family.params();
        if h_prev.params() != params {
            return Err(LensError::DimensionMismatch {
                expected: 3 * params.p(),
                found: h_prev.counts().len(),
            });
        }
        let mut h = h_prev.clone();
        for disk in self.step_terms(k)? {
            for &t in &disk.t {
                h = h.checked_sub(&t_vector(params, t as i64))?;
            }
            for &s in &disk.s {
                h = h.checked_add(&s_vector(params, s as i64))?;
            }
        }
        if let Some(idx) = h.counts().iter().position(|&c| c < 0) {
            return Err(LensError::NegativeCoordinate {
                block: idx / 3 + 1,
                entry: idx % 3 + 1,
                value: h.counts()[idx],
            });
        }
        reconstruct_tdisks(&self.tri, &h)?;
        Ok(h)
    }

    /// `h_0, h_1, .., h_{n-1}`.
    pub fn run(&self) -> Result<Vec<QVector>> {
        let mut out = vec![self.h0()?];
        for k in 1..self.family.n() {
            let next = self.apply_step(out.last().unwrap(), k)?;
            out.push(next);
        }
        Ok(out)
    }
}

pub fn apply_step(h_prev: &QVector, n: usize, k: usize) -> Result<QVector> {
    Construction::new(n)?.apply_step(h_prev, k)
}

/// `x_{m1}`, the number of `Q1` disks in block `m`.
pub fn sheet_count(h: &QVector, m: usize) -> Result<i64> {
    let max = h.params().p();
    if m == 0 || m > max {
        return Err(LensError::IndexOutOfRange { index: m, max });
    }
    Ok(h.get(m, 1))
}

/// A yes/no answer that may have been skipped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Checked {
    Yes,
    No,
    Skipped,
}

impl Checked {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Checked::Yes
        } else {
            Checked::No
        }
    }

    pub fn as_bool(self) -> Option<bool> {
        match self {
            Checked::Yes => Some(true),
            Checked::No => Some(false),
            Checked::Skipped => None,
        }
    }
}

impl std::fmt::Display for Checked {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.as_bool() {
            Some(b) => write!(f, "{b}"),
            None => f.write_str("skipped"),
        }
    }
}

impl Serialize for Checked {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self.as_bool() {
            Some(b) => serializer.serialize_bool(b),
            None => serializer.serialize_str("skipped"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SheetCount {
    pub m: usize,
    pub count: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepSummary {
    pub k: usize,
    pub euler: i64,
    pub expected_euler: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurfaceCheck {
    pub name: String,
    pub pass: bool,
    pub skipped: bool,
    pub detail: String,
}

/// Analysis of one normal surface.
#[derive(Debug, Clone, Serialize)]
pub struct SurfaceReport {
    pub p: usize,
    pub q: usize,
    pub qvector: QVector,
    pub haken: HakenVector,
    pub euler: i64,
    pub disks: usize,
    /// `E_h` parity; `skipped` when the surface is not connected.
    pub orientable: Checked,
    pub orientable_by_propagation: Checked,
    pub connected: Checked,
    pub components: Option<usize>,
    pub matching: bool,
    pub square_condition: bool,
    pub weights: BTreeMap<String, i64>,
    pub fundamental_criterion: bool,
}

impl SurfaceReport {
    pub fn weight(&self, class: EdgeClass) -> i64 {
        self.weights[&class.to_string()]
    }
}

/// Full analysis of an admissible quad vector; disk materialization is
/// skipped above `disk_limit` disks.
pub fn analyze(tri: &Triangulation, qv: &QVector, disk_limit: usize) -> Result<SurfaceReport> {
    let haken = reconstruct_tdisks(tri, qv)?;
    analyze_haken(tri, &haken, disk_limit)
}

pub fn analyze_haken(
    tri: &Triangulation,
    haken: &HakenVector,
    disk_limit: usize,
) -> Result<SurfaceReport> {
    let euler = euler_characteristic(tri, haken)?;
    let weights: BTreeMap<String, i64> = edge_weights(tri, haken)?
        .into_iter()
        .map(|(c, w)| (c.to_string(), w))
        .collect();
    let disks = (haken.triangle_total() + haken.quad_total()) as usize;
    let (connected, components, by_propagation) = if disks <= disk_limit {
        let mut complex = DiskComplex::build(tri, haken)?;
        let components = complex.component_count();
        let per = complex.component_orientability();
        let propagated = if components == 1 {
            Checked::from_bool(per[0])
        } else {
            Checked::Skipped
        };
        (
            Checked::from_bool(components == 1),
            Some(components),
            propagated,
        )
    } else {
        (Checked::Skipped, None, Checked::Skipped)
    };
    let orientable = match connected {
        Checked::Yes => Checked::from_bool(weights[&EdgeClass::Horizontal.to_string()] % 2 == 0),
        _ => Checked::Skipped,
    };
    Ok(SurfaceReport {
        p: tri.params().p(),
        q: tri.params().q(),
        qvector: QVector::from_haken(haken),
        haken: haken.clone(),
        euler,
        disks,
        orientable,
        orientable_by_propagation: by_propagation,
        connected,
        components,
        matching: satisfies_matching(tri, haken)?,
        square_condition: square_condition(haken),
        weights,
        fundamental_criterion: haken_fund_criterion(tri, haken)?,
    })
}

/// `h_{n-1}` in L(p_n, q_n) together with the claims made about it.
#[derive(Debug, Clone, Serialize)]
pub struct ConstructionReport {
    pub n: usize,
    pub surface: SurfaceReport,
    pub history: Vec<StepSummary>,
    pub sheets: Vec<SheetCount>,
    /// Every distinct `x_{m1}` value with the number of blocks attaining it.
    pub sheet_profile: BTreeMap<i64, usize>,
    pub has_q2_or_q3: bool,
    pub checks: Vec<SurfaceCheck>,
}

impl ConstructionReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &SurfaceCheck> {
        self.checks.iter().filter(|c| !c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&SurfaceCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub fn construct_surface(n: usize) -> Result<ConstructionReport> {
    construct_surface_with_limit(n, DEFAULT_DISK_LIMIT)
}

pub fn construct_surface_with_limit(n: usize, disk_limit: usize) -> Result<ConstructionReport> {
    let c = Construction::new(n)?;
    let tri = c.triangulation();
    let family = c.family();
    let steps = c.run()?;
    let mut history = Vec::with_capacity(steps.len());
    for (k, h) in steps.iter().enumerate() {
        let haken = reconstruct_tdisks(tri, h)?;
        history.push(StepSummary {
            k,
            euler: euler_characteristic(tri, &haken)?,
            expected_euler: family.expected_euler(k),
        });
    }
    let last = steps.last().unwrap();
    let surface = analyze(tri, last, disk_limit)?;

    let sheets = family
        .sheet_positions()
        .iter()
        .map(|&m| sheet_count(last, m).map(|count| SheetCount { m, count }))
        .collect::<Result<Vec<_>>>()?;
    let mut sheet_profile = BTreeMap::new();
    for b in last.blocks() {
        *sheet_profile.entry(b[0]).or_insert(0) += 1;
    }
    let has_q2_or_q3 = last.blocks().any(|b| b[1] > 0 || b[2] > 0);

    let target = 2 - n as i64;
    let sheets_wanted = n as i64 - 2;
    let mut checks = Vec::new();
    let mut check = |name: &str, pass: bool, detail: String| {
        checks.push(SurfaceCheck {
            name: name.into(),
            pass,
            skipped: false,
            detail,
        })
    };
    check(
        "euler",
        surface.euler == target,
        format!("chi = {}, want {target}", surface.euler),
    );
    let bad_steps: Vec<usize> = history
        .iter()
        .filter(|s| s.euler != s.expected_euler)
        .map(|s| s.k)
        .collect();
    check(
        "euler_bookkeeping",
        bad_steps.is_empty(),
        format!("steps disagreeing with 2 - p_n/2 + sum (q - 1): {bad_steps:?}"),
    );
    for class in [EdgeClass::Vertical, EdgeClass::Horizontal] {
        let w = surface.weight(class);
        check(
            &format!("weight_{class}"),
            w == 1,
            format!("weight {w}, want 1"),
        );
    }
    check("matching", surface.matching, String::new());
    check("square_condition", surface.square_condition, String::new());
    check(
        "connected",
        surface.connected != Checked::No,
        match surface.components {
            Some(c) => format!("{c} component(s)"),
            None => format!("skipped: {} disks exceed limit {disk_limit}", surface.disks),
        },
    );
    check(
        "non_orientable",
        surface.orientable != Checked::Yes && surface.orientable_by_propagation != Checked::Yes,
        format!(
            "orientable by E_h parity: {}, by propagation: {}",
            surface.orientable, surface.orientable_by_propagation
        ),
    );
    check(
        "orientability_methods_agree",
        surface.orientable == surface.orientable_by_propagation,
        String::new(),
    );
    check(
        "fundamental_criterion",
        surface.fundamental_criterion,
        String::new(),
    );
    check("has_q2_or_q3", has_q2_or_q3, String::new());
    for (idx, s) in sheets.iter().enumerate() {
        check(
            &format!("sheets_{}", idx + 1),
            s.count == sheets_wanted,
            format!("x_({},1) = {}, want {sheets_wanted}", s.m, s.count),
        );
    }

    let skipped = surface.connected == Checked::Skipped;
    for c in checks.iter_mut() {
        if skipped
            && matches!(
                c.name.as_str(),
                "connected" | "non_orientable" | "orientability_methods_agree"
            )
        {
            c.skipped = true;
        }
    }

    Ok(ConstructionReport {
        n,
        surface,
        history,
        sheets,
        sheet_profile,
        has_q2_or_q3,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::placement::{compression_schedule, Role};

    fn blocks(v: &QVector) -> Vec<[i64; 3]> {
        v.blocks().collect()
    }

    #[test]
    fn h0_l83_alternates() {
        let h = h0(LensParams::new(8, 3).unwrap()).unwrap();
        let want: Vec<[i64; 3]> = (1..=8)
            .map(|i| if i % 2 == 1 { [0, 1, 0] } else { [0, 0, 1] })
            .collect();
        assert_eq!(blocks(&h), want);
        let tri = Triangulation::build(h.params()).unwrap();
        let haken = reconstruct_tdisks(&tri, &h).unwrap();
        assert_eq!(euler_characteristic(&tri, &haken).unwrap(), -2);
    }

    #[test]
    fn h0_errors() {
        assert!(matches!(
            h0(LensParams::new(7, 3).unwrap()),
            Err(LensError::OddP(_))
        ));
        assert!(matches!(
            h0(LensParams::new(8, 1).unwrap()),
            Err(LensError::HypothesisViolated(_))
        ));
        assert!(matches!(
            h0(LensParams::new(8, 5).unwrap()),
            Err(LensError::HypothesisViolated(_))
        ));
    }

    #[test]
    fn h1_l83() {
        let c = Construction::new(2).unwrap();
        let h1 = c.apply_step(&c.h0().unwrap(), 1).unwrap();
        let want = [
            [0, 0, 0],
            [0, 0, 0],
            [0, 1, 0],
            [0, 0, 0],
            [0, 0, 0],
            [0, 0, 1],
            [0, 1, 0],
            [0, 0, 1],
        ];
        assert_eq!(blocks(&h1), want);
    }

    #[test]
    fn euler_history_n3_n4() {
        let r = construct_surface(3).unwrap();
        let chis: Vec<i64> = r.history.iter().map(|s| s.euler).collect();
        assert_eq!(chis, vec![-13, -3, -1]);
        let r = construct_surface(4).unwrap();
        let chis: Vec<i64> = r.history.iter().map(|s| s.euler).collect();
        assert_eq!(chis, vec![-54, -14, -4, -2]);
    }

    #[test]
    fn klein_bottle() {
        let r = construct_surface(2).unwrap();
        assert!(r.all_pass(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.surface.euler, 0);
        assert_eq!(r.surface.connected, Checked::Yes);
        assert_eq!(r.surface.orientable, Checked::No);
        assert_eq!(r.sheets[0], SheetCount { m: 1, count: 0 });
    }

    #[test]
    fn sheet_counts() {
        let r = construct_surface(3).unwrap();
        assert_eq!(r.sheets[0], SheetCount { m: 4, count: 1 });
        let r = construct_surface(4).unwrap();
        assert_eq!(r.sheets[0], SheetCount { m: 15, count: 2 });
        assert!(r.all_pass());
    }

    #[test]
    fn sheet_count_range() {
        let h = h0(LensParams::new(8, 3).unwrap()).unwrap();
        assert!(matches!(
            sheet_count(&h, 0),
            Err(LensError::IndexOutOfRange { .. })
        ));
        assert!(matches!(
            sheet_count(&h, 9),
            Err(LensError::IndexOutOfRange { .. })
        ));
        assert_eq!(sheet_count(&h, 8).unwrap(), 0);
    }

    #[test]
    fn bookkeeping_identity() {
        for n in 2..=12 {
            let f = Family::new(n).unwrap();
            assert_eq!(f.expected_euler(n - 1), 2 - n as i64, "n = {n}");
        }
    }

    #[test]
    fn updater_matches_schedule() {
        for n in 2..=5 {
            let c = Construction::new(n).unwrap();
            let schedule = compression_schedule(n).unwrap();
            for k in 1..n {
                let qk = c.family().q(k) as usize;
                for disk in c.step_terms(k).unwrap() {
                    let lead = |j: usize, role: Role| {
                        schedule
                            .step(k)
                            .find(|pl| pl.disk == disk.disk && pl.pair == j && pl.role == role)
                            .unwrap()
                            .tet
                    };
                    let t: Vec<usize> = (1..=qk).map(|j| lead(j, Role::Leading)).collect();
                    let s: Vec<usize> = (2..=qk)
                        .flat_map(|j| [lead(j, Role::Leading), lead(j, Role::Following)])
                        .collect();
                    assert_eq!(disk.t, t, "n {n} k {k} disk {}", disk.disk);
                    assert_eq!(disk.s, s, "n {n} k {k} disk {}", disk.disk);
                }
            }
        }
    }

    #[test]
    fn rejects_small_n() {
        assert!(Family::new(1).is_err());
        assert!(Construction::new(2).unwrap().step_terms(2).is_err());
    }
}
