//! Closed-form densities: the Rényi maximizers and the self-similar
//! solutions of the fast diffusion and porous medium equations.

mod maxent;
mod regime;
mod shape;
mod zkb;

pub use maxent::{
    compare_double_factorial_form, double_factorial_form, gaussian_limit_distance,
    shifted_maxent_pdf, DoubleFactorialComparison, MaxEntProfile,
};
pub use regime::{derive_constants, window_text, AlphaRegime, ProfileConstants, Regime};
pub use shape::RadialShape;
pub use zkb::ZkbProfile;

/// Either closed-form family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile {
    MaxEnt(MaxEntProfile),
    Zkb(ZkbProfile),
}

impl Profile {
    pub fn sup_norm(&self) -> f64 {
        match self {
            Profile::MaxEnt(p) => p.sup_norm(),
            Profile::Zkb(p) => p.sup_norm(),
        }
    }
}

/// Analytic peak value of either family.
pub fn sup_norm(profile: &Profile) -> f64 {
    profile.sup_norm()
}
