use crate::error::{Error, Result};
use crate::numerics::check_dimension;
use crate::specfun::{beta_fn, sphere_area};
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `α < 1`: heavy-tailed profiles.
    FastDiffusion,
    /// `α > 1`: compactly supported profiles.
    PorousMedium,
    /// `α = 1`: Gaussian / heat kernel.
    ShannonLimit,
}

/// Order `α` and dimension `d`, validated against the window in which the
/// second moment of the maximizer is finite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaRegime {
    alpha: f64,
    dimension: u32,
    regime: Regime,
}

impl AlphaRegime {
    pub fn new(alpha: f64, dimension: u32) -> Result<Self> {
        check_dimension(dimension)?;
        let regime = if alpha == 1.0 {
            Regime::ShannonLimit
        } else if alpha > 1.0 && alpha.is_finite() {
            Regime::PorousMedium
        } else {
            let lo = dimension as f64 / (dimension as f64 + 2.0);
            if !(alpha > lo && alpha < 1.0) {
                return Err(Error::AlphaOutOfRange {
                    alpha,
                    dimension,
                    window: window_text(dimension),
                });
            }
            Regime::FastDiffusion
        };
        Ok(Self {
            alpha,
            dimension,
            regime,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn window(&self) -> String {
        window_text(self.dimension)
    }
}

pub fn window_text(d: u32) -> String {
    format!("{}/{} < alpha < 1, alpha = 1, or alpha > 1", d, d + 2)
}

/// Derived constants shared by the maximizer and the self-similar solution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ProfileConstants {
    /// `|1−α|/(2α + d(α−1))`; zero in the Shannon limit.
    pub beta: f64,
    /// `1/(2 + d(α−1))`.
    pub gamma: f64,
    /// `dγ`.
    pub delta: f64,
    /// Normalization of the maximizer at unit scale.
    pub a_const: f64,
    /// Constant of the self-similar solution.
    pub c_const: f64,
    /// `|1−α|δ/(2αd)`; `1/4` in the Shannon limit.
    pub kappa_abs: f64,
    /// Coefficient `K` in `K ∂_t f = Δ f^α` for the time-parameterized maximizer.
    pub k_coeff: f64,
}

/// All derived constants for `regime`.
///
/// ```
/// use renyi_maxent::profiles::{derive_constants, AlphaRegime};
/// let c = derive_constants(AlphaRegime::new(0.75, 1).unwrap()).unwrap();
/// assert!((c.beta - 0.2).abs() < 1e-15);
/// assert!((c.gamma - 4.0 / 7.0).abs() < 1e-15);
/// ```
pub fn derive_constants(regime: AlphaRegime) -> Result<ProfileConstants> {
    let a = regime.alpha;
    let d = regime.dimension as f64;
    let s = sphere_area(regime.dimension);
    let gamma = 1.0 / (2.0 + d * (a - 1.0));
    let delta = d * gamma;
    match regime.regime {
        Regime::ShannonLimit => Ok(ProfileConstants {
            beta: 0.0,
            gamma,
            delta,
            a_const: (2.0 * PI).powf(-d / 2.0),
            c_const: (4.0 * PI).powf(-d / 2.0),
            kappa_abs: 0.25,
            k_coeff: 2.0,
        }),
        Regime::FastDiffusion | Regime::PorousMedium => {
            let beta = (1.0 - a).abs() / (2.0 * a + d * (a - 1.0));
            let kappa_abs = (1.0 - a).abs() * delta / (2.0 * a * d);
            let (a_const, c_const) = if a < 1.0 {
                let lambda = 1.0 / (1.0 - a);
                let b = beta_fn(d / 2.0, lambda - d / 2.0)?;
                let a_const = 2.0 * beta.powf(d / 2.0) / (s * b);
                let c_const =
                    (s * b / (2.0 * kappa_abs.powf(d / 2.0))).powf(2.0 * gamma * (1.0 - a));
                (a_const, c_const)
            } else {
                let b = beta_fn(d / 2.0, a / (a - 1.0))?;
                let a_const = 2.0 * beta.powf(d / 2.0) / (s * b);
                let c_const =
                    (2.0 * kappa_abs.powf(d / 2.0) / (s * b)).powf(2.0 * gamma * (a - 1.0));
                (a_const, c_const)
            };
            let k_coeff =
                2.0 * a * (2.0 + d * (a - 1.0)) / (2.0 * a + d * (a - 1.0)) * a_const.powf(a - 1.0);
            Ok(ProfileConstants {
                beta,
                gamma,
                delta,
                a_const,
                c_const,
                kappa_abs,
                k_coeff,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_enforced() {
        assert!(AlphaRegime::new(1.0 / 3.0, 1).is_err());
        assert!(AlphaRegime::new(0.34, 1).is_ok());
        assert!(AlphaRegime::new(0.5, 2).is_err());
        assert!(AlphaRegime::new(0.6, 3).is_err());
        assert!(AlphaRegime::new(0.61, 3).is_ok());
        assert!(AlphaRegime::new(0.0, 1).is_err());
        assert!(AlphaRegime::new(f64::NAN, 1).is_err());
        assert!(matches!(AlphaRegime::new(1.5, 4), Err(Error::Dimension(4))));
        let msg = AlphaRegime::new(0.2, 1).unwrap_err().to_string();
        assert!(msg.contains("1/3 < alpha < 1"), "{msg}");
    }

    #[test]
    fn constant_examples() {
        let c = derive_constants(AlphaRegime::new(2.0, 1).unwrap()).unwrap();
        assert!((c.beta - 0.2).abs() < 1e-15);
        for d in 1..=3 {
            let c = derive_constants(AlphaRegime::new(1.0, d).unwrap()).unwrap();
            assert_eq!(c.k_coeff, 2.0);
            assert_eq!(c.gamma, 0.5);
        }
    }

    #[test]
    fn one_dimensional_reference_values() {
        let c = derive_constants(AlphaRegime::new(0.75, 1).unwrap()).unwrap();
        assert!((c.a_const - 0.45553).abs() < 1e-5);
        assert!((c.c_const - 1.39187).abs() < 1e-5);
        let c = derive_constants(AlphaRegime::new(2.2, 1).unwrap()).unwrap();
        assert!((c.a_const - 0.33058).abs() < 1e-5);
        assert!((c.c_const - 0.30853).abs() < 1e-5);
    }
}
