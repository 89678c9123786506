//! Quadrilateral (Q-) coordinates: three quad counts per tetrahedron.
//!
//! Block `i` holds `(x_i1, x_i2, x_i3)`, the counts of `Q1`, `Q2`, `Q3` in
//! tetrahedron `i`. For `p >= 5`, `2 <= q < p/2` the solution space of the
//! Q-matching equations on T(p,q) has the basis
//!
//! * `s_i`: block `i` is `(1,1,1)`;
//! * `t_i`: blocks `i`, `i+q+1` are `(0,1,0)` and blocks `i+1`, `i+q` are
//!   `(0,0,1)`.
//!
//! The Q-matching equations themselves are never written down here: a quad
//! vector is admissible when a non-negative triangle completion exists,
//! which [`complete_triangles`] decides by propagating the Haken matching
//! equations around each vertex link.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{LensError, Result};
use crate::linalg::{primitive_integer_vector, RationalMatrix};
use crate::normal::{quad_pairing, DiskKind, HakenVector};
use crate::triangulation::{FaceRef, LensParams, Triangulation};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QVector {
    params: LensParams,
    counts: Vec<i64>,
}

impl QVector {
    pub fn zeros(params: LensParams) -> Self {
        QVector {
            params,
            counts: vec![0; 3 * params.p()],
        }
    }

    pub fn from_counts(params: LensParams, counts: Vec<i64>) -> Result<Self> {
        if counts.len() != 3 * params.p() {
            return Err(LensError::DimensionMismatch {
                expected: 3 * params.p(),
                found: counts.len(),
            });
        }
        Ok(QVector { params, counts })
    }

    pub fn from_blocks(params: LensParams, blocks: &[[i64; 3]]) -> Result<Self> {
        Self::from_counts(params, blocks.iter().flatten().copied().collect())
    }

    /// The quad part of a Haken vector.
    pub fn from_haken(v: &HakenVector) -> Self {
        QVector {
            params: v.params(),
            counts: v.counts().chunks(7).flat_map(|c| c[4..].to_vec()).collect(),
        }
    }

    pub fn params(&self) -> LensParams {
        self.params
    }

    pub fn counts(&self) -> &[i64] {
        &self.counts
    }

    /// Block `i` (1-based, reduced modulo p).
    pub fn block(&self, i: i64) -> [i64; 3] {
        let b = self.params.wrap(i);
        let c = &self.counts[3 * (b - 1)..3 * b];
        [c[0], c[1], c[2]]
    }

    pub fn blocks(&self) -> impl Iterator<Item = [i64; 3]> + '_ {
        self.counts.chunks(3).map(|c| [c[0], c[1], c[2]])
    }

    /// `x_{ij}` with `j` in `1..=3`.
    pub fn get(&self, block: usize, entry: usize) -> i64 {
        self.counts[3 * (block - 1) + entry - 1]
    }

    pub(crate) fn add_to_block(&mut self, block: i64, delta: [i64; 3]) {
        let b = self.params.wrap(block);
        for (k, d) in delta.iter().enumerate() {
            self.counts[3 * (b - 1) + k] += d;
        }
    }

    pub fn is_nonnegative(&self) -> bool {
        self.counts.iter().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.counts.iter().all(|&c| c == 0)
    }

    /// At most one nonzero entry per block.
    pub fn square_condition(&self) -> bool {
        self.blocks()
            .all(|b| b.iter().filter(|&&x| x != 0).count() <= 1)
    }

    pub fn checked_add(&self, other: &QVector) -> Result<QVector> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn checked_sub(&self, other: &QVector) -> Result<QVector> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &QVector, f: impl Fn(i64, i64) -> i64) -> Result<QVector> {
        if self.counts.len() != other.counts.len() {
            return Err(LensError::DimensionMismatch {
                expected: self.counts.len(),
                found: other.counts.len(),
            });
        }
        Ok(QVector {
            params: self.params,
            counts: self
                .counts
                .iter()
                .zip(&other.counts)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    pub fn scaled(&self, factor: i64) -> QVector {
        QVector {
            params: self.params,
            counts: self.counts.iter().map(|c| c * factor).collect(),
        }
    }

    /// `self <= other` componentwise.
    pub fn le(&self, other: &QVector) -> bool {
        self.counts.len() == other.counts.len()
            && self.counts.iter().zip(&other.counts).all(|(a, b)| a <= b)
    }
}

/// Blocks separated by `|`, e.g. `0 1 0 | 0 0 1 | ...`.
impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            write!(f, "{} {} {}", b[0], b[1], b[2])?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct QJson {
    p: i64,
    q: i64,
    blocks: Vec<[i64; 3]>,
}

impl Serialize for QVector {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        QJson {
            p: self.params.p() as i64,
            q: self.params.q() as i64,
            blocks: self.blocks().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QVector {
    fn deserialize<D: serde::Deserializer<'de>>(
        deserializer: D,
    ) -> std::result::Result<Self, D::Error> {
        use serde::de::Error;
        let raw = QJson::deserialize(deserializer)?;
        let params = LensParams::new(raw.p, raw.q).map_err(D::Error::custom)?;
        QVector::from_blocks(params, &raw.blocks).map_err(D::Error::custom)
    }
}

/// `p >= 5`, `2 <= q < p/2`.
pub fn check_basis_hypotheses(params: LensParams) -> Result<()> {
    let (p, q) = (params.p(), params.q());
    if p < 5 || q < 2 || 2 * q >= p {
        return Err(LensError::HypothesisViolated(format!(
            "the s/t basis needs p >= 5 and 2 <= q < p/2, got p = {p}, q = {q}"
        )));
    }
    Ok(())
}

pub fn s_vector(params: LensParams, i: i64) -> QVector {
    let mut v = QVector::zeros(params);
    v.add_to_block(i, [1, 1, 1]);
    v
}

pub fn t_vector(params: LensParams, i: i64) -> QVector {
    let q = params.q() as i64;
    let mut v = QVector::zeros(params);
    v.add_to_block(i, [0, 1, 0]);
    v.add_to_block(i + q + 1, [0, 1, 0]);
    v.add_to_block(i + 1, [0, 0, 1]);
    v.add_to_block(i + q, [0, 0, 1]);
    v
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QBasis {
    pub s: Vec<QVector>,
    pub t: Vec<QVector>,
}

impl QBasis {
    /// `s_1..s_p` followed by `t_1..t_p`.
    pub fn vectors(&self) -> impl Iterator<Item = &QVector> {
        self.s.iter().chain(&self.t)
    }

    fn matrix(&self) -> RationalMatrix {
        let columns: Vec<Vec<i64>> = self.vectors().map(|v| v.counts.clone()).collect();
        RationalMatrix::from_columns(&columns)
    }

    pub fn rank(&self) -> usize {
        self.matrix().rank()
    }
}

pub fn q_basis(params: LensParams) -> Result<QBasis> {
    check_basis_hypotheses(params)?;
    let p = params.p() as i64;
    Ok(QBasis {
        s: (1..=p).map(|i| s_vector(params, i)).collect(),
        t: (1..=p).map(|i| t_vector(params, i)).collect(),
    })
}

/// Coordinates of a vector in the `{s_i, t_i}` basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisCoefficients {
    pub a: Vec<BigRational>,
    pub b: Vec<BigRational>,
}

impl BasisCoefficients {
    /// The blocks `(a_i, a_i + b_i + b_{p-q+i-1}, a_i + b_{i-1} + b_{p-q+i})`.
    pub fn closed_form_blocks(&self, params: LensParams) -> Vec<[BigRational; 3]> {
        let p = params.p() as i64;
        let q = params.q() as i64;
        let b = |k: i64| &self.b[params.wrap(k) - 1];
        (1..=p)
            .map(|i| {
                let a = &self.a[(i - 1) as usize];
                [
                    a.clone(),
                    a + b(i) + b(p - q + i - 1),
                    a + b(i - 1) + b(p - q + i),
                ]
            })
            .collect()
    }
}

/// Solves `qv = sum a_i s_i + sum b_i t_i` exactly; `None` when `qv` lies
/// outside the span.
pub fn in_solution_space(qv: &QVector) -> Result<Option<BasisCoefficients>> {
    let params = qv.params;
    let basis = q_basis(params)?;
    let rhs: Vec<BigRational> = qv
        .counts
        .iter()
        .map(|&x| BigRational::from_integer(BigInt::from(x)))
        .collect();
    Ok(basis.matrix().solve(&rhs).map(|x| {
        let p = params.p();
        let (a, b) = x.split_at(p);
        BasisCoefficients {
            a: a.to_vec(),
            b: b.to_vec(),
        }
    }))
}

/// Integer rows whose common kernel is exactly the span of `{s_i, t_i}`.
pub fn solution_space_constraints(params: LensParams) -> Result<Vec<Vec<i64>>> {
    let basis = q_basis(params)?;
    basis
        .matrix()
        .transpose()
        .nullspace()
        .iter()
        .map(|row| primitive_integer_vector(row))
        .collect()
}

/// Extends `qv` by triangle counts satisfying the matching equations,
/// normalized so every vertex class has a corner with no triangles.
///
/// Does not require the square condition or non-negative quads.
pub fn complete_triangles(tri: &Triangulation, qv: &QVector) -> Result<HakenVector> {
    let p = tri.size();
    if qv.counts.len() != 3 * p {
        return Err(LensError::DimensionMismatch {
            expected: 3 * p,
            found: qv.counts.len(),
        });
    }
    let corner = |tet: usize, slot: u8| (tet - 1) * 4 + slot as usize;
    let quad = |tet: usize, k: usize| qv.counts[3 * (tet - 1) + k];
    let mut offset: Vec<Option<i64>> = vec![None; 4 * p];
    let mut counts = vec![0i64; 7 * p];

    for start in 0..4 * p {
        if offset[start].is_some() {
            continue;
        }
        offset[start] = Some(0);
        let mut stack = vec![start];
        let mut component = vec![start];
        while let Some(c) = stack.pop() {
            let (tet, v) = (c / 4 + 1, (c % 4) as u8);
            let base = offset[c].unwrap();
            for f in (0..4u8).filter(|&f| f != v) {
                let g = tri.gluing(FaceRef { tet, opposite: f });
                let w = g.vertex_map[v as usize];
                // T(tet,v) + Q(tet,{v,f}) = T(tet',w) + Q(tet',{w,f'})
                let value = base + quad(tet, quad_pairing(v, f))
                    - quad(g.partner.tet, quad_pairing(w, g.partner.opposite));
                let target = corner(g.partner.tet, w);
                match offset[target] {
                    Some(existing) if existing != value => {
                        return Err(LensError::Inadmissible {
                            reason: format!(
                                "triangle counts around a vertex link disagree by {}",
                                value - existing
                            ),
                            face: Some(g.face),
                            cut_vertex: Some(v),
                        });
                    }
                    Some(_) => {}
                    None => {
                        offset[target] = Some(value);
                        stack.push(target);
                        component.push(target);
                    }
                }
            }
        }
        let min = component.iter().map(|&c| offset[c].unwrap()).min().unwrap();
        for &c in &component {
            counts[(c / 4) * 7 + c % 4] = offset[c].unwrap() - min;
        }
    }
    for tet in 1..=p {
        for k in 0..3 {
            counts[(tet - 1) * 7 + DiskKind::quad(k).index()] = quad(tet, k);
        }
    }
    HakenVector::from_counts(tri.params(), counts)
}

/// The normal surface with quad part `qv` and no vertex-linking component.
pub fn reconstruct_tdisks(tri: &Triangulation, qv: &QVector) -> Result<HakenVector> {
    if !qv.is_nonnegative() {
        return Err(LensError::inadmissible("negative quad count"));
    }
    if !qv.square_condition() {
        return Err(LensError::inadmissible(
            "two quad types share a tetrahedron",
        ));
    }
    complete_triangles(tri, qv)
}

pub fn is_admissible(tri: &Triangulation, qv: &QVector) -> bool {
    reconstruct_tdisks(tri, qv).is_ok()
}

/// Whether some triangle completion exists, ignoring sign and the square
/// condition; true exactly on the solution space of the Q-matching
/// equations.
pub fn satisfies_q_matching(tri: &Triangulation, qv: &QVector) -> bool {
    complete_triangles(tri, qv).is_ok()
}

/// `t_1 + t_3 + ... + t_{p-1}`, twice the starting surface of the
/// construction.
pub(crate) fn sum_of_odd_t(params: LensParams) -> QVector {
    let p = params.p() as i64;
    (1..=p / 2)
        .map(|m| t_vector(params, 2 * m - 1))
        .fold(QVector::zeros(params), |acc, t| {
            acc.checked_add(&t).unwrap()
        })
}
