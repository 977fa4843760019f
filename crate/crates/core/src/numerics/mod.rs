//! Radial and one-dimensional quadrature, finite-difference stencils and the
//! closed-form integrals used to cross-check them.

pub mod adaptive;
mod closed_forms;
mod quadrature;
mod stencil;

pub use closed_forms::{
    analytic_radial_integral, half_line_beta_integral, rational_moment, rational_moment_as_printed,
    rational_moment_quadrature, verify_integral_formulas, RadialFormula,
};
pub(crate) use quadrature::check_dimension;
pub use quadrature::{
    build_grid, gauss_legendre_panels, integrate_line, integrate_radial, Domain, Integral,
    LineGrid, RadialGrid, Truncation, TAIL_TOLERANCE,
};
pub use stencil::{observed_order, richardson, StencilSpec};
