use crate::error::{domain, Result};
use crate::numerics::{observed_order, StencilSpec};
use crate::profiles::{AlphaRegime, MaxEntProfile, RadialShape, ZkbProfile};
use serde::Serialize;

/// Which closed-form solution to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Maximizer with `μ₂ = t^γ`, solving `K ∂_t f = Δf^α`.
    MaxEnt,
    /// Source-type solution of `∂_t u = Δu^α`.
    Zkb,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub family: Family,
    pub alpha: f64,
    pub dimension: u32,
    pub time: f64,
    /// Time steps `h, h/2, h/4`.
    pub grid_sizes: Vec<f64>,
    /// `sup |coef·∂_t f − Δf^α| / sup |Δf^α|` over the sample radii, per step.
    pub residual_norms: Vec<f64>,
    /// Smallest log₂ ratio of consecutive residuals.
    pub observed_order: f64,
    pub sample_points: usize,
    /// Sample radii dropped because they fall outside the support.
    pub skipped: usize,
}

const SAMPLES: usize = 64;

fn shape_at(family: Family, regime: AlphaRegime, t: f64) -> Result<RadialShape> {
    Ok(match family {
        Family::MaxEnt => MaxEntProfile::at_time(regime, t)?.shape(),
        Family::Zkb => ZkbProfile::new(regime, t)?.shape(),
    })
}

/// Residual of the diffusion equation satisfied by `family` at time `t`.
///
/// The time derivative uses `stencil` (then halved twice); `Δf^α` is exact.
pub fn pde_residual(
    family: Family,
    alpha: f64,
    d: u32,
    t: f64,
    stencil: StencilSpec,
) -> Result<ResidualReport> {
    if !(t > 0.0) {
        return Err(domain(
            "pde_residual",
            format!("t must be positive, got {t}"),
        ));
    }
    if stencil.reach() >= t {
        return Err(domain("pde_residual", "time stencil reaches t <= 0"));
    }
    let regime = AlphaRegime::new(alpha, d)?;
    let coef = match family {
        Family::MaxEnt => MaxEntProfile::at_time(regime, t)?.constants().k_coeff,
        Family::Zkb => 1.0,
    };
    let now = shape_at(family, regime, t)?;
    // sample out to 4 widths, staying strictly inside a compact support
    let width = match now {
        RadialShape::Power { curv, .. } => 1.0 / curv.abs().sqrt(),
        RadialShape::Gaussian { var, .. } => var.sqrt(),
    };
    let reach = 4.0 * width;
    let radii: Vec<f64> = (0..SAMPLES)
        .map(|j| reach * j as f64 / SAMPLES as f64)
        .collect();
    // points that leave the support anywhere in the time stencil are skipped
    let lo = shape_at(family, regime, t - 4.0 * stencil.reach())?.support_radius();
    let hi = shape_at(family, regime, t + 4.0 * stencil.reach())?.support_radius();
    let edge = lo.min(hi).min(now.support_radius());
    let inside: Vec<f64> = radii.iter().copied().filter(|&r| r < 0.98 * edge).collect();
    let skipped = radii.len() - inside.len();

    let lap: Vec<f64> = inside
        .iter()
        .map(|&r| now.powf(alpha).laplacian(r, d))
        .collect();
    let scale = lap.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut grid_sizes = Vec::new();
    let mut residual_norms = Vec::new();
    for k in 0..3 {
        let s = stencil.scaled(0.5f64.powi(k));
        let mut worst: f64 = 0.0;
        for (&r, &l) in inside.iter().zip(&lap) {
            let dt = s.first_derivative(
                |tau| {
                    shape_at(family, regime, tau)
                        .map(|sh| sh.value(r))
                        .unwrap_or(f64::NAN)
                },
                t,
            );
            worst = worst.max((coef * dt - l).abs());
        }
        grid_sizes.push(s.step());
        residual_norms.push(worst / scale);
    }
    let observed = observed_order(&residual_norms)
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Ok(ResidualReport {
        family,
        alpha,
        dimension: d,
        time: t,
        grid_sizes,
        residual_norms,
        observed_order: observed,
        sample_points: inside.len(),
        skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn second_order_convergence() {
        for family in [Family::MaxEnt, Family::Zkb] {
            for &(a, d) in &[(1.0, 1), (0.75, 1), (2.2, 1), (0.9, 2), (2.0, 3)] {
                let r =
                    pde_residual(family, a, d, 1.0, StencilSpec::new(2, 1e-2).unwrap()).unwrap();
                assert!(r.observed_order >= 1.9, "{r:?}");
                assert!(r.residual_norms[2] < 1e-4, "{r:?}");
            }
        }
    }

    #[test]
    fn small_step_residual() {
        for (family, a) in [(Family::MaxEnt, 0.75), (Family::Zkb, 2.2)] {
            let r = pde_residual(family, a, 1, 1.0, StencilSpec::new(2, 1e-4).unwrap()).unwrap();
            assert!(r.residual_norms[0] < 1e-6, "{r:?}");
        }
    }

    #[test]
    fn compact_support_skips_outside_points() {
        let r = pde_residual(Family::Zkb, 2.0, 1, 1.0, StencilSpec::new(2, 1e-2).unwrap()).unwrap();
        assert!(r.skipped > 0 && r.sample_points > 0);
    }
}
