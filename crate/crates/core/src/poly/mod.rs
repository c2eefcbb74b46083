//! Polynomial spaces: quadrature, reference basis, discontinuous
//! piecewise polynomials and the local Gauss-Radau projections.

mod basis;
mod piecewise;
mod projection;
mod quadrature;

pub use basis::{left_end_value, orthonormal_legendre, right_end_value, BasisTable};
pub use piecewise::{jump, Difference, ElementField, ExactField, PiecewisePoly, Side};
pub use projection::{project_gauss_radau, project_l2, projection_residuals, ProjectionResiduals, ProjectionSign};
pub use quadrature::{gauss_quadrature, Quadrature, MAX_POINTS};
