use super::regime::{derive_constants, AlphaRegime, ProfileConstants, Regime};
use super::shape::RadialShape;
use crate::error::{domain, Result};
use serde::Serialize;
use std::f64::consts::PI;

/// Self-similar source-type solution of `∂_t u = Δ u^α` with unit mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZkbProfile {
    regime: AlphaRegime,
    time: f64,
    constants: ProfileConstants,
}

impl ZkbProfile {
    pub fn new(regime: AlphaRegime, time: f64) -> Result<Self> {
        if !(time > 0.0 && time.is_finite()) {
            return Err(domain(
                "ZkbProfile",
                format!("time must be positive, got {time}"),
            ));
        }
        Ok(Self {
            regime,
            time,
            constants: derive_constants(regime)?,
        })
    }

    pub fn regime(&self) -> AlphaRegime {
        self.regime
    }

    pub fn alpha(&self) -> f64 {
        self.regime.alpha()
    }

    pub fn dimension(&self) -> u32 {
        self.regime.dimension()
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn constants(&self) -> &ProfileConstants {
        &self.constants
    }

    /// Same solution at another time.
    pub fn at(&self, time: f64) -> Result<Self> {
        Self::new(self.regime, time)
    }

    /// Signed coefficient of `ξ²`: `+|κ|` for `α < 1`, `−|κ|` for `α > 1`.
    pub fn signed_kappa(&self) -> f64 {
        match self.regime.regime() {
            Regime::PorousMedium => -self.constants.kappa_abs,
            _ => self.constants.kappa_abs,
        }
    }

    pub fn shape(&self) -> RadialShape {
        let c = &self.constants;
        let t = self.time;
        let d = self.dimension() as f64;
        match self.regime.regime() {
            Regime::ShannonLimit => RadialShape::Gaussian {
                amp: (4.0 * PI * t).powf(-d / 2.0),
                var: 2.0 * t,
            },
            _ => {
                let p = 1.0 / (self.alpha() - 1.0);
                RadialShape::Power {
                    amp: t.powf(-c.delta) * c.c_const.powf(p),
                    curv: self.signed_kappa() / (c.c_const * t.powf(2.0 * c.gamma)),
                    exp: p,
                }
            }
        }
    }

    pub fn radial_pdf(&self, r: f64) -> f64 {
        self.shape().value(r)
    }

    pub fn pdf(&self, x: &[f64]) -> f64 {
        assert_eq!(
            x.len(),
            self.dimension() as usize,
            "point dimension mismatch"
        );
        let r2: f64 = x.iter().map(|xi| xi * xi).sum();
        self.radial_pdf(r2.sqrt())
    }

    pub fn support_radius(&self) -> f64 {
        self.shape().support_radius()
    }

    /// `‖u(·,t)‖_∞ = t^{−δ} C^{1/(α−1)}`.
    pub fn sup_norm(&self) -> f64 {
        self.shape().peak()
    }
}
