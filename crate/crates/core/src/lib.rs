//! Maximum Rényi entropy densities under moment constraints, the self-similar
//! solutions of the fast diffusion and porous medium equations, and numerical
//! checks of the identities and inequalities that connect them.
//!
//! ```
//! use renyi_maxent::profiles::{AlphaRegime, MaxEntProfile};
//!
//! let regime = AlphaRegime::new(0.75, 1).unwrap();
//! let f = MaxEntProfile::centered(regime, 1.0).unwrap();
//! assert!((f.pdf(&[0.0]) - f.constants().a_const).abs() < 1e-15);
//! ```

// `!(x > 0.0)` is used on purpose so that NaN is rejected along with the bound.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod diffusion;
pub mod error;
pub mod functionals;
pub mod numerics;
pub mod profiles;
pub mod report;
pub mod specfun;
pub mod variational;

pub use error::{Error, Result};
pub use report::{Check, ConformanceReport, Severity};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/profiles.md")]
    mod profiles {}
    #[doc = include_str!("../../../book/src/functionals.md")]
    mod functionals {}
    #[doc = include_str!("../../../book/src/variational.md")]
    mod variational {}
    #[doc = include_str!("../../../book/src/diffusion.md")]
    mod diffusion {}
    #[doc = include_str!("../../../book/src/specfun.md")]
    mod specfun {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
