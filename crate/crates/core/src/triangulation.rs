//! The p-tetrahedron triangulation T(p,q) of the lens space L(p,q).
//!
//! L(p,q) is built from the suspension of a p-gon with poles `v+`, `v-` and
//! equatorial vertices `v_1..v_p`. Cutting along the axis `v+ v-` gives p
//! tetrahedra; tetrahedron `i` has vertices `v+, v-, v_i, v_{i+1}`, always
//! stored in that slot order. Two kinds of gluings close it up:
//!
//! * the internal face `v+ v- v_{i+1}` is shared by tetrahedra `i` and `i+1`;
//! * the upper trigon `v+ v_i v_{i+1}` of tetrahedron `i` is glued to the
//!   lower trigon `v- v_{i+q} v_{i+q+1}` of tetrahedron `i+q`.
//!
//! Edge and vertex classes are computed from the gluing table by union-find;
//! the names `E_v`, `E_h`, `e_i` are attached afterwards and checked.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{LensError, Result};
use crate::union_find::UnionFind;

pub const PLUS: u8 = 0;
pub const MINUS: u8 = 1;
pub const LOW: u8 = 2;
pub const HIGH: u8 = 3;

/// Tetrahedron edges as vertex-slot pairs: the axis, the horizontal edge,
/// then `v+ v_i`, `v+ v_{i+1}`, `v- v_i`, `v- v_{i+1}`.
pub const EDGE_SLOTS: [(u8, u8); 6] = [(0, 1), (2, 3), (0, 2), (0, 3), (1, 2), (1, 3)];

/// Index into [`EDGE_SLOTS`] of the edge joining two distinct slots.
pub fn edge_index(a: u8, b: u8) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    EDGE_SLOTS
        .iter()
        .position(|&e| e == (a, b))
        .expect("distinct vertex slots")
}

/// The pair (p, q), coprime with `1 <= q < p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawParams")]
pub struct LensParams {
    p: usize,
    q: usize,
}

#[derive(Deserialize)]
struct RawParams {
    p: i64,
    q: i64,
}

impl TryFrom<RawParams> for LensParams {
    type Error = LensError;

    fn try_from(raw: RawParams) -> Result<Self> {
        LensParams::new(raw.p, raw.q)
    }
}

impl LensParams {
    /// Validates `(p, q)`, reducing `q` modulo `p` first.
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if p < 2 {
            return Err(LensError::OutOfRange(format!(
                "p = {p}; the triangulation needs at least two tetrahedra"
            )));
        }
        let reduced = q.rem_euclid(p);
        if reduced == 0 {
            return Err(LensError::OutOfRange(format!(
                "q = {q} is 0 modulo p = {p}"
            )));
        }
        if p.gcd(&reduced) != 1 {
            return Err(LensError::NonCoprime { p, q: reduced });
        }
        Ok(LensParams {
            p: p as usize,
            q: reduced as usize,
        })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    /// Reduces a 1-based index modulo p into `1..=p`.
    pub fn wrap(&self, index: i64) -> usize {
        (index - 1).rem_euclid(self.p as i64) as usize + 1
    }
}

impl fmt::Display for LensParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({},{})", self.p, self.q)
    }
}

/// A face of a tetrahedron, named by the vertex slot it omits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FaceRef {
    pub tet: usize,
    pub opposite: u8,
}

impl fmt::Display for FaceRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "tau_{} face opposite slot {}", self.tet, self.opposite)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FaceGluing {
    pub face: FaceRef,
    pub partner: FaceRef,
    /// `vertex_map[s]` is the partner slot that slot `s` is glued to; the
    /// omitted slot maps to the partner's omitted slot.
    pub vertex_map: [u8; 4],
}

/// Names of the `p + 2` edge classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeClass {
    /// The axis `v+ v-`.
    Vertical,
    /// All horizontal edges `v_i v_{i+1}`.
    Horizontal,
    /// `e_i`, joining `v+` to `v_i` and `v-` to `v_{i+q}`.
    Spoke(usize),
}

impl fmt::Display for EdgeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeClass::Vertical => f.write_str("E_v"),
            EdgeClass::Horizontal => f.write_str("E_h"),
            EdgeClass::Spoke(i) => write!(f, "e_{i}"),
        }
    }
}

impl FromStr for EdgeClass {
    type Err = LensError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "E_v" | "Ev" => Ok(EdgeClass::Vertical),
            "E_h" | "Eh" => Ok(EdgeClass::Horizontal),
            _ => s
                .strip_prefix("e_")
                .or_else(|| s.strip_prefix('e'))
                .and_then(|rest| rest.parse::<usize>().ok())
                .filter(|&i| i >= 1)
                .map(EdgeClass::Spoke)
                .ok_or_else(|| LensError::UnknownEdge(s.to_string())),
        }
    }
}

impl Serialize for EdgeClass {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A (tetrahedron, edge slot) incidence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSlot {
    pub tet: usize,
    pub edge: u8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClassInfo {
    pub name: EdgeClass,
    pub incidences: Vec<EdgeSlot>,
}

impl EdgeClassInfo {
    pub fn degree(&self) -> usize {
        self.incidences.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    params: LensParams,
    gluings: Vec<FaceGluing>,
    edge_classes: Vec<EdgeClassInfo>,
    edge_class_of: Vec<usize>,
    vertex_classes: Vec<Vec<(usize, u8)>>,
    vertex_class_of: Vec<usize>,
}

/// The expected name of an edge slot, straight from the suspension picture.
fn expected_edge_name(params: &LensParams, tet: usize, edge: usize) -> EdgeClass {
    let i = tet as i64;
    let q = params.q as i64;
    match EDGE_SLOTS[edge] {
        (0, 1) => EdgeClass::Vertical,
        (2, 3) => EdgeClass::Horizontal,
        (0, 2) => EdgeClass::Spoke(params.wrap(i)),
        (0, 3) => EdgeClass::Spoke(params.wrap(i + 1)),
        (1, 2) => EdgeClass::Spoke(params.wrap(i - q)),
        (1, 3) => EdgeClass::Spoke(params.wrap(i - q + 1)),
        _ => unreachable!(),
    }
}

fn face_slot(tet: usize, opposite: u8) -> usize {
    (tet - 1) * 4 + opposite as usize
}

impl Triangulation {
    pub fn build(params: LensParams) -> Result<Self> {
        let p = params.p;
        let mut slots: Vec<Option<FaceGluing>> = vec![None; 4 * p];
        let mut glue = |a: FaceRef, b: FaceRef, map: [u8; 4]| {
            let mut inverse = [0u8; 4];
            for (s, &t) in map.iter().enumerate() {
                inverse[t as usize] = s as u8;
            }
            slots[face_slot(a.tet, a.opposite)] = Some(FaceGluing {
                face: a,
                partner: b,
                vertex_map: map,
            });
            slots[face_slot(b.tet, b.opposite)] = Some(FaceGluing {
                face: b,
                partner: a,
                vertex_map: inverse,
            });
        };
        for i in 1..=p {
            let next = params.wrap(i as i64 + 1);
            // internal face v+ v- v_{i+1}: HIGH of tau_i is LOW of tau_{i+1}
            glue(
                FaceRef {
                    tet: i,
                    opposite: LOW,
                },
                FaceRef {
                    tet: next,
                    opposite: HIGH,
                },
                [PLUS, MINUS, HIGH, LOW],
            );
            // upper trigon of tau_i onto the lower trigon of tau_{i+q}
            let target = params.wrap((i + params.q) as i64);
            glue(
                FaceRef {
                    tet: i,
                    opposite: MINUS,
                },
                FaceRef {
                    tet: target,
                    opposite: PLUS,
                },
                [MINUS, PLUS, LOW, HIGH],
            );
        }
        let gluings: Vec<FaceGluing> = slots
            .into_iter()
            .enumerate()
            .map(|(k, g)| {
                g.ok_or_else(|| LensError::Inconsistent(format!("face {k} left unglued")))
            })
            .collect::<Result<_>>()?;
        for g in &gluings {
            if g.partner == g.face {
                return Err(LensError::Inconsistent(format!(
                    "{} glued to itself",
                    g.face
                )));
            }
            let back = &gluings[face_slot(g.partner.tet, g.partner.opposite)];
            if back.partner != g.face {
                return Err(LensError::Inconsistent(format!(
                    "gluing of {} is not an involution",
                    g.face
                )));
            }
        }

        let (edge_classes, edge_class_of) = Self::classify_edges(&params, &gluings)?;
        let (vertex_classes, vertex_class_of) = Self::classify_vertices(p, &gluings);

        Ok(Triangulation {
            params,
            gluings,
            edge_classes,
            edge_class_of,
            vertex_classes,
            vertex_class_of,
        })
    }

    fn classify_edges(
        params: &LensParams,
        gluings: &[FaceGluing],
    ) -> Result<(Vec<EdgeClassInfo>, Vec<usize>)> {
        let p = params.p;
        let mut uf = UnionFind::new(6 * p);
        for g in gluings {
            for &(a, b) in EDGE_SLOTS.iter() {
                if a == g.face.opposite || b == g.face.opposite {
                    continue;
                }
                let here = (g.face.tet - 1) * 6 + edge_index(a, b);
                let there = (g.partner.tet - 1) * 6
                    + edge_index(g.vertex_map[a as usize], g.vertex_map[b as usize]);
                uf.union(here, there);
            }
        }

        // generators: the axis and horizontal edge of tau_1, and v+ v_i of tau_i
        let mut generators = vec![(EdgeClass::Vertical, 0), (EdgeClass::Horizontal, 1)];
        generators.extend((1..=p).map(|i| (EdgeClass::Spoke(i), (i - 1) * 6 + 2)));

        let mut class_of_root = vec![usize::MAX; 6 * p];
        for (k, &(name, slot)) in generators.iter().enumerate() {
            let root = uf.root(slot);
            if class_of_root[root] != usize::MAX {
                return Err(LensError::Inconsistent(format!(
                    "{} and {} fall into the same edge class",
                    generators[class_of_root[root]].0, name
                )));
            }
            class_of_root[root] = k;
        }

        let mut classes: Vec<EdgeClassInfo> = generators
            .iter()
            .map(|&(name, _)| EdgeClassInfo {
                name,
                incidences: Vec::new(),
            })
            .collect();
        let mut class_of = vec![0; 6 * p];
        for tet in 1..=p {
            for edge in 0..6 {
                let slot = (tet - 1) * 6 + edge;
                let class = class_of_root[uf.root(slot)];
                if class == usize::MAX {
                    return Err(LensError::Inconsistent(format!(
                        "edge slot {edge} of tau_{tet} is in an unnamed class"
                    )));
                }
                let expected = expected_edge_name(params, tet, edge);
                if classes[class].name != expected {
                    return Err(LensError::Inconsistent(format!(
                        "edge slot {edge} of tau_{tet} computed as {} but expected {}",
                        classes[class].name, expected
                    )));
                }
                class_of[slot] = class;
                classes[class].incidences.push(EdgeSlot {
                    tet,
                    edge: edge as u8,
                });
            }
        }
        Ok((classes, class_of))
    }

    fn classify_vertices(p: usize, gluings: &[FaceGluing]) -> (Vec<Vec<(usize, u8)>>, Vec<usize>) {
        let mut uf = UnionFind::new(4 * p);
        for g in gluings {
            for s in 0..4u8 {
                if s == g.face.opposite {
                    continue;
                }
                uf.union(
                    face_slot(g.face.tet, s),
                    face_slot(g.partner.tet, g.vertex_map[s as usize]),
                );
            }
        }
        let mut index_of_root = vec![usize::MAX; 4 * p];
        let mut classes: Vec<Vec<(usize, u8)>> = Vec::new();
        let mut class_of = vec![0; 4 * p];
        for tet in 1..=p {
            for s in 0..4u8 {
                let slot = face_slot(tet, s);
                let root = uf.root(slot);
                if index_of_root[root] == usize::MAX {
                    index_of_root[root] = classes.len();
                    classes.push(Vec::new());
                }
                class_of[slot] = index_of_root[root];
                classes[index_of_root[root]].push((tet, s));
            }
        }
        (classes, class_of)
    }

    pub fn params(&self) -> LensParams {
        self.params
    }

    pub fn size(&self) -> usize {
        self.params.p
    }

    pub fn gluing(&self, face: FaceRef) -> &FaceGluing {
        &self.gluings[face_slot(face.tet, face.opposite)]
    }

    /// All 4p face gluings, indexed by `(tet - 1) * 4 + opposite`.
    pub fn gluings(&self) -> &[FaceGluing] {
        &self.gluings
    }

    /// Each glued face pair once, from its lexicographically smaller side.
    pub fn glued_faces(&self) -> impl Iterator<Item = &FaceGluing> {
        self.gluings.iter().filter(|g| g.face < g.partner)
    }

    /// Edge classes in the order `E_v, E_h, e_1, .., e_p`.
    pub fn edge_classes(&self) -> &[EdgeClassInfo] {
        &self.edge_classes
    }

    pub fn edge_class(&self, name: EdgeClass) -> Result<&EdgeClassInfo> {
        let index = match name {
            EdgeClass::Vertical => 0,
            EdgeClass::Horizontal => 1,
            EdgeClass::Spoke(i) if (1..=self.params.p).contains(&i) => 1 + i,
            EdgeClass::Spoke(_) => return Err(LensError::UnknownEdge(name.to_string())),
        };
        Ok(&self.edge_classes[index])
    }

    pub fn edge_class_at(&self, tet: usize, edge: usize) -> EdgeClass {
        self.edge_classes[self.edge_class_of[(tet - 1) * 6 + edge]].name
    }

    pub fn edge_degree(&self, name: EdgeClass) -> Result<usize> {
        self.edge_class(name).map(EdgeClassInfo::degree)
    }

    pub fn vertex_classes(&self) -> &[Vec<(usize, u8)>] {
        &self.vertex_classes
    }

    pub fn vertex_class_at(&self, tet: usize, slot: u8) -> usize {
        self.vertex_class_of[face_slot(tet, slot)]
    }

    /// Number of faces after gluing.
    pub fn face_count(&self) -> usize {
        self.gluings.len() / 2
    }

    /// V - E + F - T of the cell complex.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_classes.len() as i64 - self.edge_classes.len() as i64 + self.face_count() as i64
            - self.params.p as i64
    }

    pub fn to_json(&self) -> TriangulationJson {
        let p = self.params.p;
        let label = |tet: usize, slot: u8| -> usize {
            match slot {
                PLUS => 0,
                MINUS => p + 1,
                LOW => tet,
                _ => self.params.wrap(tet as i64 + 1),
            }
        };
        TriangulationJson {
            p,
            q: self.params.q,
            tetrahedra: (1..=p)
                .map(|t| [label(t, 0), label(t, 1), label(t, 2), label(t, 3)])
                .collect(),
            gluings: self
                .glued_faces()
                .map(|g| GluingJson {
                    tet: g.face.tet,
                    face: g.face.opposite,
                    to_tet: g.partner.tet,
                    to_face: g.partner.opposite,
                    vertex_map: g.vertex_map,
                })
                .collect(),
            edges: self
                .edge_classes
                .iter()
                .map(|c| EdgeJson {
                    name: c.name.to_string(),
                    degree: c.degree(),
                    incidences: c
                        .incidences
                        .iter()
                        .map(|s| [s.tet, s.edge as usize])
                        .collect(),
                })
                .collect(),
            vertices: self
                .vertex_classes
                .iter()
                .map(|c| c.iter().map(|&(t, s)| [t, s as usize]).collect())
                .collect(),
        }
    }
}

/// Serialized form of a triangulation; see `docs/formats.md`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriangulationJson {
    pub p: usize,
    pub q: usize,
    /// Suspension labels of the four slots: 0 is `v+`, `p + 1` is `v-`,
    /// `1..=p` are the equatorial vertices.
    pub tetrahedra: Vec<[usize; 4]>,
    pub gluings: Vec<GluingJson>,
    pub edges: Vec<EdgeJson>,
    /// Each vertex class as a list of `[tet, slot]`.
    pub vertices: Vec<Vec<[usize; 2]>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GluingJson {
    pub tet: usize,
    pub face: u8,
    pub to_tet: usize,
    pub to_face: u8,
    pub vertex_map: [u8; 4],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub name: String,
    pub degree: usize,
    /// `[tet, edge slot]` pairs; edge slots index `EDGE_SLOTS`.
    pub incidences: Vec<[usize; 2]>,
}
