//! Haken coordinates on T(p,q): seven disk counts per tetrahedron.
//!
//! Disk types are derived from the fixed vertex-slot order of each
//! tetrahedron. A triangle is named by the slot it cuts off; a quad by the
//! partition of the four slots it induces:
//!
//! | kind  | separates          | slot partition   |
//! |-------|--------------------|------------------|
//! | `Q1`  | `E_h` and `E_v`    | {0,1} / {2,3}    |
//! | `Q2`  | `e_{i+1}`, `e_{i-q}` | {0,3} / {1,2}  |
//! | `Q3`  | `e_i`, `e_{i-q+1}` | {0,2} / {1,3}    |

pub mod layering;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{LensError, Result};
use crate::triangulation::{EdgeClass, FaceRef, LensParams, Triangulation, EDGE_SLOTS};

pub use layering::DiskComplex;

/// Column layout of a [`HakenVector`], as written in the JSON form.
pub const HAKEN_LAYOUT: &str = "per-tet[Tv+,Tv-,Tvlow,Tvhigh,Q1,Q2,Q3]";

pub const QUAD_PARTITIONS: [[[u8; 2]; 2]; 3] =
    [[[0, 1], [2, 3]], [[0, 3], [1, 2]], [[0, 2], [1, 3]]];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DiskKind {
    TriPlus,
    TriMinus,
    TriLow,
    TriHigh,
    Quad1,
    Quad2,
    Quad3,
}

impl DiskKind {
    pub const ALL: [DiskKind; 7] = [
        DiskKind::TriPlus,
        DiskKind::TriMinus,
        DiskKind::TriLow,
        DiskKind::TriHigh,
        DiskKind::Quad1,
        DiskKind::Quad2,
        DiskKind::Quad3,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    pub fn triangle(corner: u8) -> Self {
        Self::ALL[corner as usize]
    }

    pub fn quad(k: usize) -> Self {
        Self::ALL[4 + k]
    }

    /// The vertex slot a triangle cuts off.
    pub fn corner(self) -> Option<u8> {
        (self.index() < 4).then_some(self.index() as u8)
    }

    /// `0`, `1`, `2` for `Q1`, `Q2`, `Q3`.
    pub fn quad_index(self) -> Option<usize> {
        (self.index() >= 4).then(|| self.index() - 4)
    }

    pub fn is_quad(self) -> bool {
        self.index() >= 4
    }

    /// Whether this disk has a vertex on edge slot `edge` of its tetrahedron.
    pub fn meets_edge(self, edge: usize) -> bool {
        let (a, b) = EDGE_SLOTS[edge];
        match self.quad_index() {
            None => {
                let c = self.index() as u8;
                a == c || b == c
            }
            // a quad misses exactly the two edges inside its partition classes
            Some(k) => !QUAD_PARTITIONS[k].contains(&[a, b]),
        }
    }

    pub fn edges(self) -> Vec<usize> {
        (0..6).filter(|&e| self.meets_edge(e)).collect()
    }
}

impl fmt::Display for DiskKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DiskKind::TriPlus => "Tv+",
            DiskKind::TriMinus => "Tv-",
            DiskKind::TriLow => "Tvlow",
            DiskKind::TriHigh => "Tvhigh",
            DiskKind::Quad1 => "Q1",
            DiskKind::Quad2 => "Q2",
            DiskKind::Quad3 => "Q3",
        })
    }
}

/// The quad type whose slot partition puts `v` together with `f`.
pub fn quad_pairing(v: u8, f: u8) -> usize {
    QUAD_PARTITIONS
        .iter()
        .position(|parts| {
            parts
                .iter()
                .any(|part| part.contains(&v) && part.contains(&f))
        })
        .expect("distinct slots")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DiskTypeIndex {
    pub tet: usize,
    pub kind: DiskKind,
}

impl DiskTypeIndex {
    pub fn column(self) -> usize {
        (self.tet - 1) * 7 + self.kind.index()
    }
}

/// Normal disk counts, seven per tetrahedron.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HakenVector {
    params: LensParams,
    counts: Vec<i64>,
}

impl HakenVector {
    pub fn zeros(params: LensParams) -> Self {
        HakenVector {
            params,
            counts: vec![0; 7 * params.p()],
        }
    }

    pub fn from_counts(params: LensParams, counts: Vec<i64>) -> Result<Self> {
        if counts.len() != 7 * params.p() {
            return Err(LensError::DimensionMismatch {
                expected: 7 * params.p(),
                found: counts.len(),
            });
        }
        Ok(HakenVector { params, counts })
    }

    /// One triangle at every corner of vertex class `class`.
    pub fn vertex_link(tri: &Triangulation, class: usize) -> Self {
        let mut v = Self::zeros(tri.params());
        for &(tet, slot) in &tri.vertex_classes()[class] {
            v.counts[(tet - 1) * 7 + slot as usize] += 1;
        }
        v
    }

    pub fn params(&self) -> LensParams {
        self.params
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    pub fn into_counts(self) -> Vec<i64> {
        self.counts
    }

    pub fn get(&self, tet: usize, kind: DiskKind) -> i64 {
        self.counts[DiskTypeIndex { tet, kind }.column()]
    }

    pub fn set(&mut self, tet: usize, kind: DiskKind, value: i64) {
        self.counts[DiskTypeIndex { tet, kind }.column()] = value;
    }

    pub fn tet_counts(&self, tet: usize) -> &[i64] {
        &self.counts[(tet - 1) * 7..tet * 7]
    }

    pub fn is_nonnegative(&self) -> bool {
        self.counts.iter().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    pub fn triangle_total(&self) -> i64 {
        self.counts
            .chunks(7)
            .map(|c| c[..4].iter().sum::<i64>())
            .sum()
    }

    pub fn quad_total(&self) -> i64 {
        self.counts
            .chunks(7)
            .map(|c| c[4..].iter().sum::<i64>())
            .sum()
    }

    pub fn scaled(&self, factor: i64) -> Self {
        HakenVector {
            params: self.params,
            counts: self.counts.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn checked_add(&self, other: &HakenVector) -> Result<Self> {
        self.same_shape(other)?;
        Ok(HakenVector {
            params: self.params,
            counts: self
                .counts
                .iter()
                .zip(&other.counts)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    fn same_shape(&self, other: &HakenVector) -> Result<()> {
        if self.counts.len() != other.counts.len() {
            return Err(LensError::DimensionMismatch {
                expected: self.counts.len(),
                found: other.counts.len(),
            });
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("tet,Tv+,Tv-,Tvlow,Tvhigh,Q1,Q2,Q3\n");
        for tet in 1..=self.params.p() {
            let row: Vec<String> = self.tet_counts(tet).iter().map(i64::to_string).collect();
            out.push_str(&format!("{tet},{}\n", row.join(",")));
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct HakenJson {
    p: i64,
    q: i64,
    layout: String,
    counts: Vec<i64>,
}

impl Serialize for HakenVector {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        HakenJson {
            p: self.params.p() as i64,
            q: self.params.q() as i64,
            layout: HAKEN_LAYOUT.to_string(),
            counts: self.counts.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for HakenVector {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let raw = HakenJson::deserialize(deserializer)?;
        if raw.layout != HAKEN_LAYOUT {
            return Err(D::Error::custom(format!(
                "unsupported layout `{}`",
                raw.layout
            )));
        }
        let params = LensParams::new(raw.p, raw.q).map_err(D::Error::custom)?;
        HakenVector::from_counts(params, raw.counts).map_err(D::Error::custom)
    }
}

/// One matching equation: the arc type cutting off `cut_vertex` in `face`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingRow {
    pub face: FaceRef,
    pub cut_vertex: u8,
    /// Nonzero coefficients, sorted by column.
    pub entries: Vec<(usize, i64)>,
}

impl MatchingRow {
    pub fn evaluate(&self, counts: &[i64]) -> i64 {
        self.entries.iter().map(|&(c, a)| a * counts[c]).sum()
    }
}

/// The matching equations, stored sparsely.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingMatrix {
    rows: Vec<MatchingRow>,
    columns: usize,
}

impl MatchingMatrix {
    pub fn rows(&self) -> &[MatchingRow] {
        &self.rows
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows.len(), self.columns)
    }

    pub fn apply(&self, counts: &[i64]) -> Vec<i64> {
        self.rows.iter().map(|r| r.evaluate(counts)).collect()
    }

    pub fn is_solution(&self, counts: &[i64]) -> bool {
        counts.len() == self.columns && self.rows.iter().all(|r| r.evaluate(counts) == 0)
    }

    pub fn to_dense(&self) -> Vec<Vec<i64>> {
        self.rows
            .iter()
            .map(|r| {
                let mut row = vec![0; self.columns];
                for &(c, a) in &r.entries {
                    row[c] = a;
                }
                row
            })
            .collect()
    }
}

/// One row per (glued face, normal arc type): `6p` rows, `7p` columns.
pub fn matching_equations(tri: &Triangulation) -> MatchingMatrix {
    let mut rows = Vec::with_capacity(6 * tri.size());
    for g in tri.glued_faces() {
        for v in (0..4u8).filter(|&v| v != g.face.opposite) {
            let w = g.vertex_map[v as usize];
            let here = |kind: DiskKind| {
                DiskTypeIndex {
                    tet: g.face.tet,
                    kind,
                }
                .column()
            };
            let there = |kind: DiskKind| {
                DiskTypeIndex {
                    tet: g.partner.tet,
                    kind,
                }
                .column()
            };
            let mut entries: Vec<(usize, i64)> = Vec::with_capacity(4);
            let terms = [
                (here(DiskKind::triangle(v)), 1),
                (here(DiskKind::quad(quad_pairing(v, g.face.opposite))), 1),
                (there(DiskKind::triangle(w)), -1),
                (
                    there(DiskKind::quad(quad_pairing(w, g.partner.opposite))),
                    -1,
                ),
            ];
            for (col, a) in terms {
                match entries.iter_mut().find(|(c, _)| *c == col) {
                    Some(entry) => entry.1 += a,
                    None => entries.push((col, a)),
                }
            }
            entries.retain(|&(_, a)| a != 0);
            entries.sort_unstable();
            rows.push(MatchingRow {
                face: g.face,
                cut_vertex: v,
                entries,
            });
        }
    }
    MatchingMatrix {
        rows,
        columns: 7 * tri.size(),
    }
}

fn check_dimension(tri: &Triangulation, v: &HakenVector) -> Result<()> {
    if v.counts.len() != 7 * tri.size() {
        return Err(LensError::DimensionMismatch {
            expected: 7 * tri.size(),
            found: v.counts.len(),
        });
    }
    Ok(())
}

pub fn satisfies_matching(tri: &Triangulation, v: &HakenVector) -> Result<bool> {
    check_dimension(tri, v)?;
    Ok(matching_equations(tri).is_solution(&v.counts))
}

/// At most one nonzero quad count in every tetrahedron.
pub fn square_condition(v: &HakenVector) -> bool {
    v.counts
        .chunks(7)
        .all(|c| c[4..].iter().filter(|&&x| x != 0).count() <= 1)
}

/// Non-negative, matching and square condition.
pub fn check_normal(tri: &Triangulation, v: &HakenVector) -> Result<()> {
    check_dimension(tri, v)?;
    if !v.is_nonnegative() {
        return Err(LensError::NotNormal("negative disk count".into()));
    }
    if !square_condition(v) {
        return Err(LensError::NotNormal("square condition fails".into()));
    }
    let matrix = matching_equations(tri);
    if let Some(row) = matrix.rows.iter().find(|r| r.evaluate(&v.counts) != 0) {
        return Err(LensError::NotNormal(format!(
            "matching equation fails on {} for the arc cutting off slot {}",
            row.face, row.cut_vertex
        )));
    }
    Ok(())
}

pub fn is_normal(tri: &Triangulation, v: &HakenVector) -> bool {
    check_normal(tri, v).is_ok()
}

/// Number of points in which the surface meets an edge class.
///
/// Every intersection point is seen once from each incidence around the
/// edge, so the disk-corner total divides evenly by the degree.
pub fn edge_weight(tri: &Triangulation, v: &HakenVector, class: EdgeClass) -> Result<i64> {
    check_dimension(tri, v)?;
    let info = tri.edge_class(class)?;
    let total: i64 = info
        .incidences
        .iter()
        .map(|slot| {
            DiskKind::ALL
                .iter()
                .filter(|k| k.meets_edge(slot.edge as usize))
                .map(|&k| v.get(slot.tet, k))
                .sum::<i64>()
        })
        .sum();
    let degree = info.degree() as i64;
    if total % degree != 0 {
        return Err(LensError::NonIntegralWeight {
            edge: class.to_string(),
            total,
            degree: info.degree(),
        });
    }
    Ok(total / degree)
}

/// Weights on every edge class, in `E_v, E_h, e_1..e_p` order.
pub fn edge_weights(tri: &Triangulation, v: &HakenVector) -> Result<Vec<(EdgeClass, i64)>> {
    tri.edge_classes()
        .iter()
        .map(|c| edge_weight(tri, v, c.name).map(|w| (c.name, w)))
        .collect()
}

/// V - E + F of the cell decomposition of the surface into normal disks.
pub fn euler_characteristic(tri: &Triangulation, v: &HakenVector) -> Result<i64> {
    check_normal(tri, v)?;
    let vertices: i64 = edge_weights(tri, v)?.iter().map(|&(_, w)| w).sum();
    let (t, q) = (v.triangle_total(), v.quad_total());
    let sides = 3 * t + 4 * q;
    if sides % 2 != 0 {
        return Err(LensError::NotNormal("odd number of disk sides".into()));
    }
    Ok(vertices - sides / 2 + t + q)
}

pub fn component_count(tri: &Triangulation, v: &HakenVector) -> Result<usize> {
    check_normal(tri, v)?;
    Ok(DiskComplex::build(tri, v)?.component_count())
}

/// Orientability of a connected normal surface from the parity of its
/// weight on the core circle `E_h`.
pub fn is_orientable(tri: &Triangulation, v: &HakenVector) -> Result<bool> {
    check_normal(tri, v)?;
    let components = DiskComplex::build(tri, v)?.component_count();
    if components != 1 {
        return Err(LensError::NotConnected { components });
    }
    Ok(edge_weight(tri, v, EdgeClass::Horizontal)? % 2 == 0)
}

/// Orientability of each component, found by propagating a transverse
/// orientation across the disk gluings.
pub fn orientability_by_propagation(tri: &Triangulation, v: &HakenVector) -> Result<Vec<bool>> {
    check_normal(tri, v)?;
    Ok(DiskComplex::build(tri, v)?.component_orientability())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l83() -> Triangulation {
        Triangulation::build(LensParams::new(8, 3).unwrap()).unwrap()
    }

    fn torus(tri: &Triangulation) -> HakenVector {
        let mut v = HakenVector::zeros(tri.params());
        for tet in 1..=tri.size() {
            v.set(tet, DiskKind::Quad1, 1);
        }
        v
    }

    fn equator_link(tri: &Triangulation) -> HakenVector {
        HakenVector::vertex_link(tri, tri.vertex_class_at(1, crate::triangulation::LOW))
    }

    #[test]
    fn disk_incidences() {
        for k in DiskKind::ALL {
            assert_eq!(k.edges().len(), if k.is_quad() { 4 } else { 3 });
        }
        // Q1 misses the axis (0,1) and the horizontal edge (2,3)
        assert!(!DiskKind::Quad1.meets_edge(0));
        assert!(!DiskKind::Quad1.meets_edge(1));
        // Q2 misses v+ v_{i+1} and v- v_i
        assert_eq!(DiskKind::Quad2.edges(), vec![0, 1, 2, 5]);
        // Q3 misses v+ v_i and v- v_{i+1}
        assert_eq!(DiskKind::Quad3.edges(), vec![0, 1, 3, 4]);
    }

    #[test]
    fn quads_separate_the_named_edge_classes() {
        let tri = l83();
        let p = tri.params();
        for tet in 1..=8usize {
            let missed = |k: DiskKind| -> Vec<EdgeClass> {
                let mut v: Vec<EdgeClass> = (0..6)
                    .filter(|&e| !k.meets_edge(e))
                    .map(|e| tri.edge_class_at(tet, e))
                    .collect();
                v.sort();
                v
            };
            let i = tet as i64;
            assert_eq!(
                missed(DiskKind::Quad1),
                vec![EdgeClass::Vertical, EdgeClass::Horizontal]
            );
            let mut q2 = vec![
                EdgeClass::Spoke(p.wrap(i + 1)),
                EdgeClass::Spoke(p.wrap(i - 3)),
            ];
            q2.sort();
            assert_eq!(missed(DiskKind::Quad2), q2);
            let mut q3 = vec![EdgeClass::Spoke(p.wrap(i)), EdgeClass::Spoke(p.wrap(i - 2))];
            q3.sort();
            assert_eq!(missed(DiskKind::Quad3), q3);
        }
    }

    #[test]
    fn matching_matrix_shape() {
        let m = matching_equations(&l83());
        assert_eq!(m.shape(), (48, 56));
        assert!(m.rows().iter().all(|r| r.entries.len() <= 4));
        assert!(m
            .to_dense()
            .iter()
            .flatten()
            .all(|&a| (-1..=1).contains(&a)));
    }

    #[test]
    fn matching_on_basic_vectors() {
        let tri = l83();
        let zero = HakenVector::zeros(tri.params());
        assert!(satisfies_matching(&tri, &zero).unwrap());
        assert!(satisfies_matching(&tri, &torus(&tri)).unwrap());
        for class in 0..2 {
            assert!(satisfies_matching(&tri, &HakenVector::vertex_link(&tri, class)).unwrap());
        }
        let mut lone = zero.clone();
        lone.set(1, DiskKind::Quad2, 1);
        assert!(!satisfies_matching(&tri, &lone).unwrap());
        let short = HakenVector::zeros(LensParams::new(7, 3).unwrap());
        assert!(matches!(
            satisfies_matching(&tri, &short),
            Err(LensError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn square_condition_cases() {
        let tri = l83();
        let mut v = HakenVector::zeros(tri.params());
        assert!(square_condition(&v));
        v.set(1, DiskKind::Quad1, 1);
        assert!(square_condition(&v));
        v.set(1, DiskKind::Quad2, 1);
        assert!(!square_condition(&v));
    }

    #[test]
    fn weights_of_torus_and_links() {
        let tri = l83();
        let t = torus(&tri);
        assert_eq!(edge_weight(&tri, &t, EdgeClass::Horizontal).unwrap(), 0);
        assert_eq!(edge_weight(&tri, &t, EdgeClass::Vertical).unwrap(), 0);
        assert_eq!(edge_weight(&tri, &t, EdgeClass::Spoke(4)).unwrap(), 1);
        let zero = HakenVector::zeros(tri.params());
        for c in tri.edge_classes() {
            assert_eq!(edge_weight(&tri, &zero, c.name).unwrap(), 0);
        }
    }

    #[test]
    fn non_integral_weight_is_reported() {
        let tri = l83();
        let mut v = HakenVector::zeros(tri.params());
        v.set(1, DiskKind::TriPlus, 1);
        assert!(matches!(
            edge_weight(&tri, &v, EdgeClass::Vertical),
            Err(LensError::NonIntegralWeight { .. })
        ));
    }

    #[test]
    fn sphere_and_torus_euler() {
        let tri = l83();
        assert_eq!(euler_characteristic(&tri, &equator_link(&tri)).unwrap(), 2);
        assert_eq!(euler_characteristic(&tri, &torus(&tri)).unwrap(), 0);
        let mut bad = torus(&tri);
        bad.set(2, DiskKind::Quad3, 1);
        assert!(matches!(
            euler_characteristic(&tri, &bad),
            Err(LensError::NotNormal(_))
        ));
    }

    #[test]
    fn components_of_links() {
        let tri = l83();
        let a = HakenVector::vertex_link(&tri, 0);
        let b = HakenVector::vertex_link(&tri, 1);
        assert_eq!(component_count(&tri, &a).unwrap(), 1);
        assert_eq!(
            component_count(&tri, &a.checked_add(&b).unwrap()).unwrap(),
            2
        );
        assert_eq!(component_count(&tri, &a.scaled(3)).unwrap(), 3);
        assert_eq!(
            component_count(&tri, &HakenVector::zeros(tri.params())).unwrap(),
            0
        );
    }

    #[test]
    fn orientability_of_sphere_and_torus() {
        let tri = l83();
        let link = equator_link(&tri);
        assert!(is_orientable(&tri, &link).unwrap());
        assert_eq!(
            orientability_by_propagation(&tri, &link).unwrap(),
            vec![true]
        );
        let t = torus(&tri);
        assert!(is_orientable(&tri, &t).unwrap());
        assert_eq!(orientability_by_propagation(&tri, &t).unwrap(), vec![true]);
        let two = link.scaled(2);
        assert!(matches!(
            is_orientable(&tri, &two),
            Err(LensError::NotConnected { components: 2 })
        ));
        assert_eq!(
            orientability_by_propagation(&tri, &two).unwrap(),
            vec![true, true]
        );
    }

    #[test]
    fn haken_json_round_trip() {
        let tri = l83();
        let v = torus(&tri);
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.contains(HAKEN_LAYOUT));
        let back: HakenVector = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
        let bad = text.replace("per-tet", "per-quad");
        assert!(serde_json::from_str::<HakenVector>(&bad).is_err());
    }

    #[test]
    fn csv_has_one_row_per_tet() {
        let tri = l83();
        let csv = torus(&tri).to_csv();
        assert_eq!(csv.lines().count(), 9);
        assert_eq!(csv.lines().nth(1).unwrap(), "1,0,0,0,0,1,0,0");
    }
}
