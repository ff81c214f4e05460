//! Exact combinatorics, strand-diagram algebra and linear algebra for the
//! Beck–Chevalley cubes of nil-Hecke module categories.
//!
//! The crate builds bifactorization cubes for pairs of two-part
//! compositions, computes the iterated total fibers of their Beck–Chevalley
//! cubes in a diagram-set model, and cross-checks the results with exact
//! matrix computations on nil-Coxeter modules.

pub mod algebra;
pub mod compositions;
pub mod cubes;
pub mod error;
pub mod fiber;
pub mod linalg;
pub mod oracle;
pub mod perm;
pub mod render;
pub mod report;
pub mod shuffles;

pub use algebra::{evaluate, normal_form, AlgebraElement, FiniteModule, HPoly};
pub use compositions::{classify_pair, parse_pair, psi, psi_inv, refines, BinaryString, Composition, PairCase};
pub use cubes::{bc_vertex, build_bifactorization, vertex_rank, Axis, BCVertex, CubeSpec, FunctorWord};
pub use error::{Error, Result};
pub use fiber::{total_fiber, FiberReport, LevelTable, Verdict};
pub use linalg::Matrix;
pub use perm::Perm;
pub use report::{run_checks, CheckOptions, ReportDocument, SCHEMA_VERSION};
pub use shuffles::{enumerate_shuffles, ShuffleSet};
