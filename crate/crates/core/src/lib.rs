//! Local discontinuous Galerkin (LDG) solver for the third-order singularly
//! perturbed boundary-value problem
//!
//! ```text
//! eps u''' - (a u')' + b u' + c u = f  on (0, 1),   u(0) = u(1) = u'(1) = 0,
//! ```
//!
//! on Shishkin, Bakhvalov-Shishkin and Bakhvalov layer-adapted meshes, with
//! the error norms and convergence-study harness used to verify it.

// index loops read closer to the math here; NaN must fail the negated checks
#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod error_analysis;
pub mod ldg;
pub mod manufactured;
pub mod mesh;
pub mod poly;
pub mod problem;
pub mod study;

pub use error::{LdgError, Result};
pub use mesh::{phi_eval, transition_tau, Coord, Mesh, MeshKind, MeshSpec, Transition};
pub use problem::{Problem, ScalarFn};
