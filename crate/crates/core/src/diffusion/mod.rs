//! The PDE side: residuals of both diffusion problems, the sup-norm
//! threshold, entropy-power concavity and the pointwise gradient bounds.

mod bounds;
mod concavity;
mod residual;
mod threshold;

pub use bounds::pointwise_bounds;
pub use concavity::{
    concavity_integral_criterion, derivative_identities, entropy_power_concavity, ConcavityReport,
    IntegralCriterion,
};
pub use residual::{pde_residual, Family, ResidualReport};
pub use threshold::{
    supnorm_compare, supnorm_gap, threshold_alpha, threshold_report, SupNormComparison,
    ThresholdReport, THRESHOLD_BRACKET,
};

use crate::error::Result;
use crate::functionals::{DensityField, DEFAULT_NODES};
use crate::numerics::richardson;
use crate::profiles::{AlphaRegime, MaxEntProfile};

/// Relative step used for time derivatives.
pub const TIME_STEP: f64 = 1e-3;

/// Member of the self-similar maximizer family at time `t`.
pub(crate) fn family_field(regime: AlphaRegime, t: f64) -> Result<DensityField> {
    DensityField::from_maxent(&MaxEntProfile::at_time(regime, t)?, DEFAULT_NODES)
}

/// Centered first and second derivatives of `g` at `t`, each Richardson
/// extrapolated from steps `h` and `h/2`.
pub(crate) fn time_derivatives(
    g: impl Fn(f64) -> Result<f64>,
    t: f64,
    h: f64,
) -> Result<(f64, f64)> {
    let g0 = g(t)?;
    let est = |h: f64| -> Result<(f64, f64)> {
        let (p, m) = (g(t + h)?, g(t - h)?);
        Ok(((p - m) / (2.0 * h), (p - 2.0 * g0 + m) / (h * h)))
    };
    let (d1c, d2c) = est(h)?;
    let (d1f, d2f) = est(h / 2.0)?;
    Ok((richardson(d1c, d1f, 2), richardson(d2c, d2f, 2)))
}
