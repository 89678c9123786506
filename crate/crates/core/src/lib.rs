//! Exact combinatorics of normal surfaces in the lens space triangulations
//! T(p,q), and the compression construction of non-orientable fundamental
//! surfaces in the family L(8,3), L(30,11), L(112,41), ...

pub mod arith;
pub mod construction;
pub mod error;
pub mod fundamental;
pub mod linalg;
pub mod normal;
pub mod placement;
pub mod quad;
pub mod search;
pub mod theorem;
pub mod triangulation;
pub mod union_find;

pub use construction::{construct_surface, h0, sheet_count, ConstructionReport, SurfaceReport};
pub use error::{LensError, Result};
pub use fundamental::{minimality_oracle, q_minimality_oracle, MinimalityVerdict};
pub use normal::{DiskKind, HakenVector};
pub use placement::{compression_schedule, verify_placements, CompressionSchedule, PatchPlacement};
pub use quad::QVector;
pub use theorem::{verify_theorem, TheoremReport};
pub use triangulation::{EdgeClass, LensParams, Triangulation};
