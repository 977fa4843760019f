use super::regime::{derive_constants, AlphaRegime, ProfileConstants, Regime};
use super::shape::RadialShape;
use crate::error::{domain, Result};
use crate::numerics::{build_grid, integrate_radial};
use crate::specfun::double_factorial_f64;
use serde::Serialize;
use std::f64::consts::PI;

/// The density maximizing `H_α` under a fixed mean `μ₁·(1,…,1)` and
/// per-coordinate variance `μ₂²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxEntProfile {
    regime: AlphaRegime,
    mu1: f64,
    mu2: f64,
    constants: ProfileConstants,
}

impl MaxEntProfile {
    pub fn shifted(regime: AlphaRegime, mu1: f64, mu2: f64) -> Result<Self> {
        if !(mu2 > 0.0 && mu2.is_finite()) || !mu1.is_finite() {
            return Err(domain(
                "MaxEntProfile",
                format!("need finite mu1 and mu2 > 0, got mu1 = {mu1}, mu2 = {mu2}"),
            ));
        }
        Ok(Self {
            regime,
            mu1,
            mu2,
            constants: derive_constants(regime)?,
        })
    }

    pub fn centered(regime: AlphaRegime, mu2: f64) -> Result<Self> {
        Self::shifted(regime, 0.0, mu2)
    }

    /// Member of the self-similar family, `μ₂ = t^γ`.
    pub fn at_time(regime: AlphaRegime, t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(domain(
                "MaxEntProfile::at_time",
                format!("t must be positive, got {t}"),
            ));
        }
        let c = derive_constants(regime)?;
        Self::centered(regime, t.powf(c.gamma))
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

    pub fn mu1(&self) -> f64 {
        self.mu1
    }

    pub fn mu2(&self) -> f64 {
        self.mu2
    }

    pub fn constants(&self) -> &ProfileConstants {
        &self.constants
    }

    /// Signed curvature `b` of `(1 + b r²/μ₂²)`: `+β` for `α < 1`, `−β` for `α > 1`.
    pub fn signed_beta(&self) -> f64 {
        match self.regime.regime() {
            Regime::PorousMedium => -self.constants.beta,
            _ => self.constants.beta,
        }
    }

    /// Radial shape about the mean.
    pub fn shape(&self) -> RadialShape {
        let d = self.dimension() as f64;
        match self.regime.regime() {
            Regime::ShannonLimit => RadialShape::Gaussian {
                amp: (2.0 * PI * self.mu2 * self.mu2).powf(-d / 2.0),
                var: self.mu2 * self.mu2,
            },
            _ => RadialShape::Power {
                amp: self.constants.a_const * self.mu2.powf(-d),
                curv: self.signed_beta() / (self.mu2 * self.mu2),
                exp: 1.0 / (self.alpha() - 1.0),
            },
        }
    }

    /// Density as a function of the distance to the mean.
    pub fn radial_pdf(&self, r: f64) -> f64 {
        self.shape().value(r)
    }

    /// Density at a point of `ℝ^d`.
    pub fn pdf(&self, x: &[f64]) -> f64 {
        assert_eq!(
            x.len(),
            self.dimension() as usize,
            "point dimension mismatch"
        );
        let r2: f64 = x.iter().map(|&xi| (xi - self.mu1).powi(2)).sum();
        self.radial_pdf(r2.sqrt())
    }

    pub fn support_radius(&self) -> f64 {
        match self.regime.regime() {
            Regime::PorousMedium => self.mu2 / self.constants.beta.sqrt(),
            _ => f64::INFINITY,
        }
    }

    /// `‖f‖_∞ = A μ₂^{−d}`.
    pub fn sup_norm(&self) -> f64 {
        self.shape().peak()
    }
}

/// One-dimensional maximizer with mean `μ₁` and standard deviation `μ₂`,
/// evaluated at `x`.
pub fn shifted_maxent_pdf(alpha: f64, mu1: f64, mu2: f64, x: f64) -> Result<f64> {
    let p = MaxEntProfile::shifted(AlphaRegime::new(alpha, 1)?, mu1, mu2)?;
    Ok(p.pdf(&[x]))
}

/// The tabulated double-factorial form of the shifted maximizer for integer
/// `n = 1/(1−α) ≥ 2`, evaluated exactly as tabulated.
pub fn double_factorial_form(n: u32, mu1: f64, mu2: f64, x: f64) -> Result<f64> {
    if n < 2 {
        return Err(domain(
            "double_factorial_form",
            format!("need n >= 2, got {n}"),
        ));
    }
    let n = n as i64;
    let r1 = double_factorial_f64(2 * n - 3)? / double_factorial_f64(2 * n - 5)?;
    let pre = double_factorial_f64(2 * n - 2)? / double_factorial_f64(2 * n - 3)?
        * (double_factorial_f64(2 * n - 5)? / double_factorial_f64(2 * n - 3)?).sqrt()
        / mu2;
    let y = (x - mu1) / mu2;
    Ok(pre * (1.0 + r1 * y * y).powi(-(n as i32)))
}

/// Comparison of [`double_factorial_form`] with the closed-form maximizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DoubleFactorialComparison {
    pub n: u32,
    /// Tabulated peak over closed-form peak.
    pub prefactor_ratio: f64,
    /// Coefficient of `((x−μ₁)/μ₂)²` as tabulated.
    pub tabulated_coefficient: f64,
    /// Coefficient in the closed form, `β = 1/(2n−3)`.
    pub closed_form_coefficient: f64,
    /// Mass of the tabulated form by quadrature.
    pub tabulated_mass: f64,
    /// `sup |tabulated − closed form|` over a sample window.
    pub max_abs_deviation: f64,
}

pub fn compare_double_factorial_form(
    n: u32,
    mu1: f64,
    mu2: f64,
) -> Result<DoubleFactorialComparison> {
    let alpha = 1.0 - 1.0 / n as f64;
    let profile = MaxEntProfile::shifted(AlphaRegime::new(alpha, 1)?, mu1, mu2)?;
    let tabulated_peak = double_factorial_form(n, mu1, mu2, mu1)?;
    let ni = n as i64;
    let tabulated_coefficient =
        double_factorial_f64(2 * ni - 3)? / double_factorial_f64(2 * ni - 5)?;
    // the tabulated form decays like |x|^{-2n}
    let grid = build_grid(
        crate::numerics::Domain::HalfLine {
            core: mu2 / tabulated_coefficient.sqrt(),
            tail_scale: mu2 / tabulated_coefficient.sqrt(),
            decay: 2.0 * n as f64,
        },
        256,
        1,
        0,
    )?;
    let tabulated_mass =
        integrate_radial(|r| double_factorial_form(n, 0.0, mu2, r).unwrap(), &grid)?.value;
    let mut max_abs_deviation: f64 = 0.0;
    for i in 0..=2000 {
        let x = mu1 + mu2 * (-10.0 + 0.01 * i as f64);
        let dev = (double_factorial_form(n, mu1, mu2, x)? - profile.pdf(&[x])).abs();
        max_abs_deviation = max_abs_deviation.max(dev);
    }
    Ok(DoubleFactorialComparison {
        n,
        prefactor_ratio: tabulated_peak / profile.sup_norm(),
        tabulated_coefficient,
        closed_form_coefficient: profile.constants().beta,
        tabulated_mass,
        max_abs_deviation,
    })
}

/// `sup_x |f̂(x) − N(0, μ₂²)(x)|` for the one-dimensional maximizer of order `α`.
pub fn gaussian_limit_distance(alpha: f64, mu2: f64) -> Result<f64> {
    let f = MaxEntProfile::centered(AlphaRegime::new(alpha, 1)?, mu2)?;
    let norm = 1.0 / (2.0 * PI * mu2 * mu2).sqrt();
    let mut worst: f64 = 0.0;
    for i in 0..=6000 {
        let x = mu2 * 12.0 * i as f64 / 6000.0;
        let g = norm * (-x * x / (2.0 * mu2 * mu2)).exp();
        worst = worst.max((f.radial_pdf(x) - g).abs());
    }
    Ok(worst)
}
