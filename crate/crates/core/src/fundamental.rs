//! Fundamentality: a sufficient criterion read off edge weights, and
//! exhaustive searches below a vector for a proper summand.

use serde::Serialize;

use crate::error::{LensError, Result};
use crate::normal::{check_normal, edge_weight, matching_equations, DiskKind, HakenVector};
use crate::quad::{in_solution_space, is_admissible, solution_space_constraints, QVector};
use crate::search::{find_proper_solution_with, sparse_rows, SearchOutcome, SparseRow};
use crate::triangulation::{EdgeClass, Triangulation};

pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Fundamental,
    Decomposable,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalityVerdict {
    pub status: Status,
    /// A proper summand when decomposable, in the coordinates searched.
    pub witness: Option<Vec<i64>>,
    pub nodes_explored: u64,
}

impl MinimalityVerdict {
    fn from_search(outcome: SearchOutcome, nodes: u64) -> Self {
        let (status, witness) = match outcome {
            SearchOutcome::Found(w) => (Status::Decomposable, Some(w)),
            SearchOutcome::Exhausted => (Status::Fundamental, None),
            SearchOutcome::BudgetExceeded => (Status::Inconclusive, None),
        };
        MinimalityVerdict {
            status,
            witness,
            nodes_explored: nodes,
        }
    }
}

/// Weight one on both cores and some quad other than `Q1`: then the surface
/// is connected, non-orientable and fundamental. `false` only means the
/// criterion does not apply.
pub fn haken_fund_criterion(tri: &Triangulation, v: &HakenVector) -> Result<bool> {
    check_normal(tri, v)?;
    let cores = edge_weight(tri, v, EdgeClass::Vertical)? == 1
        && edge_weight(tri, v, EdgeClass::Horizontal)? == 1;
    let other_quad = (1..=tri.size())
        .any(|tet| v.get(tet, DiskKind::Quad2) > 0 || v.get(tet, DiskKind::Quad3) > 0);
    Ok(cores && other_quad)
}

fn is_proper_below(w: &[i64], v: &[i64]) -> bool {
    w.len() == v.len()
        && w.iter().zip(v).all(|(a, b)| 0 <= *a && a <= b)
        && w.iter().any(|&a| a != 0)
        && w != v
}

/// Quads before triangles, tetrahedron by tetrahedron.
fn haken_order(p: usize) -> Vec<usize> {
    (0..p)
        .flat_map(|t| [4, 5, 6, 0, 1, 2, 3].into_iter().map(move |k| 7 * t + k))
        .collect()
}

/// Is there an integral solution of the matching equations strictly
/// between 0 and `v`? The square condition is not imposed on the summand.
pub fn minimality_oracle(
    tri: &Triangulation,
    v: &HakenVector,
    budget: u64,
) -> Result<MinimalityVerdict> {
    check_normal(tri, v)?;
    if v.is_zero() {
        return Err(LensError::NotNormal(
            "the zero vector has no summands to search".into(),
        ));
    }
    let matrix = matching_equations(tri);
    let rows: Vec<SparseRow> = matrix.rows().iter().map(|r| r.entries.clone()).collect();
    let result =
        find_proper_solution_with(&rows, v.counts(), &haken_order(tri.size()), budget, &|_| {
            true
        });
    let verdict = MinimalityVerdict::from_search(result.outcome, result.nodes);
    if let Some(w) = &verdict.witness {
        let dense = matrix.to_dense();
        let vanishes = dense
            .iter()
            .all(|row| row.iter().zip(w).map(|(a, x)| a * x).sum::<i64>() == 0);
        if !vanishes || !is_proper_below(w, v.counts()) {
            return Err(LensError::Inconsistent(
                "search returned an invalid witness".into(),
            ));
        }
    }
    Ok(verdict)
}

/// Is there an admissible vector of the Q-solution space strictly between 0
/// and `qv`?
pub fn q_minimality_oracle(qv: &QVector, budget: u64) -> Result<MinimalityVerdict> {
    let params = qv.params();
    let tri = Triangulation::build(params)?;
    if !is_admissible(&tri, qv) {
        return Err(LensError::inadmissible(
            "q_minimality_oracle needs an admissible vector",
        ));
    }
    if qv.is_zero() {
        return Err(LensError::inadmissible(
            "the zero vector has no summands to search",
        ));
    }
    let rows = sparse_rows(&solution_space_constraints(params)?);
    let accept =
        |w: &[i64]| QVector::from_counts(params, w.to_vec()).is_ok_and(|w| is_admissible(&tri, &w));
    let result = find_proper_solution_with(&rows, qv.counts(), &[], budget, &accept);
    let verdict = MinimalityVerdict::from_search(result.outcome, result.nodes);
    if let Some(w) = &verdict.witness {
        let wq = QVector::from_counts(params, w.clone())?;
        if in_solution_space(&wq)?.is_none() || !is_proper_below(w, qv.counts()) {
            return Err(LensError::Inconsistent(
                "search returned an invalid witness".into(),
            ));
        }
    }
    Ok(verdict)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{h0, Construction};
    use crate::normal::DiskKind;
    use crate::quad::{reconstruct_tdisks, t_vector};
    use crate::triangulation::LensParams;

    fn l83() -> Triangulation {
        Triangulation::build(LensParams::new(8, 3).unwrap()).unwrap()
    }

    fn h1(tri: &Triangulation) -> HakenVector {
        let c = Construction::new(2).unwrap();
        let h = c.apply_step(&c.h0().unwrap(), 1).unwrap();
        reconstruct_tdisks(tri, &h).unwrap()
    }

    #[test]
    fn criterion_on_h0_h1_and_torus() {
        let tri = l83();
        let h0 = reconstruct_tdisks(&tri, &h0(tri.params()).unwrap()).unwrap();
        assert!(haken_fund_criterion(&tri, &h0).unwrap());
        assert!(haken_fund_criterion(&tri, &h1(&tri)).unwrap());
        let mut torus = HakenVector::zeros(tri.params());
        for tet in 1..=8 {
            torus.set(tet, DiskKind::Quad1, 1);
        }
        assert!(!haken_fund_criterion(&tri, &torus).unwrap());
    }

    #[test]
    fn criterion_rejects_non_normal() {
        let tri = l83();
        let mut v = HakenVector::zeros(tri.params());
        v.set(1, DiskKind::Quad2, 1);
        assert!(matches!(
            haken_fund_criterion(&tri, &v),
            Err(LensError::NotNormal(_))
        ));
    }

    #[test]
    fn h1_is_fundamental() {
        let tri = l83();
        let v = minimality_oracle(&tri, &h1(&tri), DEFAULT_BUDGET).unwrap();
        assert_eq!(v.status, Status::Fundamental);
    }

    #[test]
    fn vertex_links() {
        let tri = l83();
        let link = HakenVector::vertex_link(&tri, 0);
        let v = minimality_oracle(&tri, &link, DEFAULT_BUDGET).unwrap();
        assert_eq!(v.status, Status::Fundamental);
        let v = minimality_oracle(&tri, &link.scaled(2), DEFAULT_BUDGET).unwrap();
        assert_eq!(v.status, Status::Decomposable);
        assert_eq!(v.witness.unwrap(), link.counts());
    }

    #[test]
    fn q_oracle_h0_and_t1() {
        let params = LensParams::new(8, 3).unwrap();
        let v = q_minimality_oracle(&h0(params).unwrap(), DEFAULT_BUDGET).unwrap();
        assert_eq!(v.status, Status::Decomposable);
        assert_eq!(v.witness.unwrap(), t_vector(params, 1).counts());
        let v = q_minimality_oracle(&t_vector(params, 1), DEFAULT_BUDGET).unwrap();
        assert_eq!(v.status, Status::Fundamental);
    }

    #[test]
    fn budget_makes_it_inconclusive() {
        let tri = l83();
        let v = minimality_oracle(&tri, &h1(&tri), 2).unwrap();
        assert_eq!(v.status, Status::Inconclusive);
        assert_eq!(v.nodes_explored, 2);
    }
}
