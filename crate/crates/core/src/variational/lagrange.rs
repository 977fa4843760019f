use crate::error::{domain, Error, Result};
use crate::profiles::{AlphaRegime, MaxEntProfile, Regime};
use crate::report::{rel_dev, Check, ConformanceReport};
use crate::specfun::{beta, double_factorial_f64, BetaArgs};
use serde::Serialize;

/// Multipliers of the one-dimensional problem with stationarity form
/// `f^{α−1} = λ̃₀ + 2λ̃₁x + λ̃₂x²` (on the support).
///
/// `λ̃_k = g(α)λ_k` with `g(α) = (1−α)/α·∫f^α`; `g` is negative for `α > 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LagrangeSolution {
    pub alpha: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub lambda0_t: f64,
    pub lambda1_t: f64,
    pub lambda2_t: f64,
    pub g_alpha_factor: f64,
    pub lambda0: f64,
    pub lambda1: f64,
    pub lambda2: f64,
}

impl LagrangeSolution {
    /// `f^{α−1}` as given by the multipliers, clipped at zero outside the support.
    pub fn stationary_power(&self, x: f64) -> f64 {
        (self.lambda0_t + 2.0 * self.lambda1_t * x + self.lambda2_t * x * x).max(0.0)
    }

    pub fn density(&self, x: f64) -> f64 {
        let p = self.stationary_power(x);
        if p <= 0.0 {
            0.0
        } else {
            p.powf(1.0 / (self.alpha - 1.0))
        }
    }
}

fn regime_1d(alpha: f64) -> Result<AlphaRegime> {
    if alpha == 1.0 {
        return Err(domain(
            "solve_lagrange",
            "alpha = 1 has no power-law stationarity form",
        ));
    }
    match AlphaRegime::new(alpha, 1) {
        Err(Error::AlphaOutOfRange { window, .. }) => Err(Error::MomentDiverges(format!(
            "second moment diverges for alpha = {alpha} in d = 1 (window {window})"
        ))),
        other => other,
    }
}

/// Closed-form multipliers for mean `μ₁` and standard deviation `μ₂` (`d = 1`).
pub fn solve_lagrange(alpha: f64, d: u32, mu1: f64, mu2: f64) -> Result<LagrangeSolution> {
    if d != 1 {
        return Err(Error::Dimension(d));
    }
    let regime = regime_1d(alpha)?;
    let p = MaxEntProfile::shifted(regime, mu1, mu2)?;
    let c = p.constants();
    let l0c = (c.a_const / mu2).powf(alpha - 1.0);
    let l2 = l0c * p.signed_beta() / (mu2 * mu2);
    let l1 = -l2 * mu1;
    let l0 = l0c + l2 * mu1 * mu1;
    // ∫f^α = ∫f·f^{α−1} = λ̃₀ + 2λ̃₁μ₁ + λ̃₂(μ₂² + μ₁²) = λ̃₀ (centred) + λ̃₂μ₂²
    let p_alpha = l0c + l2 * mu2 * mu2;
    let g = (1.0 - alpha) / alpha * p_alpha;
    Ok(LagrangeSolution {
        alpha,
        mu1,
        mu2,
        lambda0_t: l0,
        lambda1_t: l1,
        lambda2_t: l2,
        g_alpha_factor: g,
        lambda0: l0 / g,
        lambda1: l1 / g,
        lambda2: l2 / g,
    })
}

/// Consistency checks on a solution: sign conditions, normalization and
/// second-moment relations through Beta functions, the unwound `g(α)`
/// relation, and the double-factorial ratio for integer `1/(1−α)`.
pub fn verify_lagrange(s: &LagrangeSolution, tolerance: f64) -> Result<ConformanceReport> {
    let a = s.alpha;
    let regime = regime_1d(a)?;
    let mut r = ConformanceReport::new();
    // centred multipliers
    let l2 = s.lambda2_t;
    let l0 = s.lambda0_t - l2 * s.mu1 * s.mu1;
    let porous = regime.regime() == Regime::PorousMedium;

    if !porous {
        r.push(Check::hard_flag(
            "multipliers_positive",
            l0.min(l2),
            l0 > 0.0 && l2 > 0.0,
        ));
        let det = s.lambda2_t * s.lambda0_t - s.lambda1_t * s.lambda1_t;
        r.push(Check::hard_flag(
            "shifted_multiplier_determinant_positive",
            det,
            det > 0.0,
        ));
    } else {
        r.push(Check::hard_flag(
            "multiplier_signs_porous",
            l2,
            l0 > 0.0 && l2 < 0.0,
        ));
    }

    // ∫(λ̃₀ + λ̃₂x²)^{1/(α−1)} = 1 and the matching second moment
    let (b_half, b_three_half, norm_lhs) = if porous {
        let m = 1.0 / (a - 1.0);
        let bh = beta(BetaArgs::new(0.5, m + 1.0)?)?;
        let b3 = beta(BetaArgs::new(1.5, m + 1.0)?)?;
        (bh, b3, l0.powf(m + 0.5) * bh / (-l2).sqrt())
    } else {
        let n = 1.0 / (1.0 - a);
        let bh = beta(BetaArgs::new(0.5, n - 0.5)?)?;
        let b3 = beta(BetaArgs::new(1.5, n - 1.5)?)?;
        (bh, b3, l0.powf(0.5 - n) * bh / l2.sqrt())
    };
    r.push(Check::hard(
        "normalization_beta_form",
        rel_dev(norm_lhs, 1.0),
        tolerance,
    ));
    let ratio = (l0 / l2).abs() * b_three_half / b_half;
    r.push(Check::hard(
        "variance_ratio_beta_form",
        rel_dev(ratio, s.mu2 * s.mu2),
        tolerance,
    ));

    // λ̃₀ = (A/μ₂)^{α−1} with the unit-scale normalization
    let c = MaxEntProfile::centered(regime, s.mu2)?.constants().a_const;
    r.push(Check::hard(
        "lambda0_closed_form",
        rel_dev(l0, (c / s.mu2).powf(a - 1.0)),
        tolerance,
    ));

    // λ₀ + 2λ₁μ₁ + λ₂(μ₂² + μ₁²) = α/(1−α); the centred case is λ₀ + μ₂²λ₂
    let lhs = s.lambda0 + 2.0 * s.lambda1 * s.mu1 + s.lambda2 * (s.mu2 * s.mu2 + s.mu1 * s.mu1);
    r.push(Check::hard(
        "unwound_multiplier_relation",
        rel_dev(lhs, a / (1.0 - a)),
        tolerance,
    ));
    r.push(Check::hard(
        "mean_from_multipliers",
        (-s.lambda1 / s.lambda2 - s.mu1).abs() / (1.0 + s.mu1.abs()),
        tolerance,
    ));

    if !porous {
        let n = 1.0 / (1.0 - a);
        if (n - n.round()).abs() < 1e-12 && n.round() >= 2.0 {
            let k = n.round() as i64;
            let df = double_factorial_f64(2 * k - 3)? / double_factorial_f64(2 * k - 5)?;
            let expected = df * s.mu2 * s.mu2 + s.mu1 * s.mu1;
            r.push(Check::hard(
                "integer_order_multiplier_ratio",
                rel_dev(s.lambda0 / s.lambda2, expected),
                tolerance,
            ));
        }
    }
    Ok(r)
}
