//! Individual normal disks glued along their arcs.
//!
//! Parallel arcs of one type in a face are stacked outward from the vertex
//! they cut off: first the triangles at that vertex (copy 0 innermost), then
//! the quads. Quad copies are numbered from the side of their partition that
//! holds slot 0. Gluing matches the k-th arc from `v` with the k-th arc from
//! the image of `v`, so the order is preserved or reversed automatically.
//!
//! Each disk carries a transverse side bit: a triangle's positive side faces
//! its corner, a quad's faces the partition class holding slot 0. Matching
//! "towards the cut-off vertex" on both sides of a face yields a parity
//! constraint between neighbouring disks; an unsatisfiable constraint means
//! the component is one-sided, hence non-orientable in a lens space.

use crate::error::Result;
use crate::normal::{quad_pairing, DiskKind, DiskTypeIndex, HakenVector, QUAD_PARTITIONS};
use crate::triangulation::Triangulation;
use crate::union_find::UnionFind;

#[derive(Debug, Clone)]
pub struct DiskComplex {
    disks: UnionFind,
    one_sided: Vec<usize>,
    side_count: Vec<u8>,
    expected_sides: Vec<u8>,
}

struct Layout<'a> {
    v: &'a HakenVector,
    offset: Vec<usize>,
}

impl Layout<'_> {
    /// Disks with an arc in the face opposite `f` that cuts off `cut`, ordered
    /// outward from `cut`, each with whether its positive side faces `cut`.
    fn arcs(&self, tet: usize, f: u8, cut: u8) -> impl Iterator<Item = (usize, bool)> + '_ {
        let tri_col = DiskTypeIndex {
            tet,
            kind: DiskKind::triangle(cut),
        }
        .column();
        let k = quad_pairing(cut, f);
        let quad_col = DiskTypeIndex {
            tet,
            kind: DiskKind::quad(k),
        }
        .column();
        let positive = QUAD_PARTITIONS[k]
            .iter()
            .find(|part| part.contains(&0))
            .unwrap();
        let cut_positive = positive.contains(&cut);
        let tris = self.v.counts()[tri_col] as usize;
        let quads = self.v.counts()[quad_col] as usize;
        let tri_base = self.offset[tri_col];
        let quad_base = self.offset[quad_col];
        let triangles = (0..tris).map(move |c| (tri_base + c, true));
        let quads = (0..quads).map(move |c| {
            let copy = if cut_positive { c } else { quads - 1 - c };
            (quad_base + copy, cut_positive)
        });
        triangles.chain(quads)
    }
}

impl DiskComplex {
    /// Materializes every disk of `v`. `v` must be a normal surface.
    pub fn build(tri: &Triangulation, v: &HakenVector) -> Result<Self> {
        let mut offset = Vec::with_capacity(v.counts().len());
        let mut total = 0usize;
        let mut expected_sides = Vec::new();
        for (col, &c) in v.counts().iter().enumerate() {
            offset.push(total);
            total += c as usize;
            let sides = if col % 7 >= 4 { 4 } else { 3 };
            expected_sides.extend(std::iter::repeat(sides).take(c as usize));
        }
        let layout = Layout { v, offset };
        let mut disks = UnionFind::new(total);
        let mut one_sided = Vec::new();
        let mut side_count = vec![0u8; total];
        for g in tri.glued_faces() {
            for cut in (0..4u8).filter(|&s| s != g.face.opposite) {
                let image = g.vertex_map[cut as usize];
                let here = layout.arcs(g.face.tet, g.face.opposite, cut);
                let there = layout.arcs(g.partner.tet, g.partner.opposite, image);
                for ((a, pa), (b, pb)) in here.zip(there) {
                    side_count[a] += 1;
                    side_count[b] += 1;
                    if disks.union_with_parity(a, b, pa ^ pb).is_err() {
                        one_sided.push(a);
                    }
                }
            }
        }
        Ok(DiskComplex {
            disks,
            one_sided,
            side_count,
            expected_sides,
        })
    }

    pub fn disk_count(&self) -> usize {
        self.disks.len()
    }

    pub fn component_count(&mut self) -> usize {
        self.disks.count_sets()
    }

    /// Every side of every disk is glued to exactly one other side.
    pub fn sides_fully_glued(&self) -> bool {
        self.side_count == self.expected_sides
    }

    /// Orientability per component, components ordered by their first disk.
    pub fn component_orientability(&mut self) -> Vec<bool> {
        let mut order: Vec<usize> = Vec::new();
        let mut seen = std::collections::HashMap::new();
        for d in 0..self.disks.len() {
            let root = self.disks.root(d);
            seen.entry(root).or_insert_with(|| {
                order.push(root);
                order.len() - 1
            });
        }
        let mut orientable = vec![true; order.len()];
        for &d in &self.one_sided {
            let root = self.disks.root(d);
            orientable[seen[&root]] = false;
        }
        orientable
    }
}
