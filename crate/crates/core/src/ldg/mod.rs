//! LDG discretization: numerical fluxes, block-banded assembly and direct
//! solve, and the compact bilinear form.

mod assembly;
mod banded;
mod bilinear;
mod flux;

pub use assembly::{assemble, solve, solve_problem, BlockSystem, DofLayout, LdgSolution, SolveInfo, Var};
pub use banded::{BandedLu, BandedMatrix};
pub use bilinear::{bilinear_form, load_functional, max_element_residual, ResidualReport, Test, Trial};
pub use flux::{flux_values, upwind_split, FluxRecord};
