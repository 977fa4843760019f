use crate::error::{domain, Error, Result};
use crate::functionals::{DensityField, Layout};
use crate::numerics::LineGrid;
use crate::profiles::{MaxEntProfile, RadialShape, Regime};
use crate::variational::LagrangeSolution;
use serde::{Deserialize, Serialize};

/// `h(x) = Q(x−μ₁)·exp(−b|x−μ₁|^μ)` with `Q` odd; `odd_coeffs[k]` multiplies
/// `(x−μ₁)^{2k+1}`, so even terms cannot be expressed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationSpec {
    pub odd_coeffs: Vec<f64>,
    pub b: f64,
    pub mu_exp: f64,
    /// `c` in `|h| < c·f̂`.
    pub amplitude_ratio: f64,
    /// Rescale `h` so that `max |h|/f̂ = c(1 − 10⁻³)`; otherwise `|h| < c f̂` must already hold.
    pub auto_scale: bool,
}

impl PerturbationSpec {
    pub fn new(odd_coeffs: Vec<f64>, b: f64, mu_exp: f64, amplitude_ratio: f64) -> Result<Self> {
        let spec = Self {
            odd_coeffs,
            b,
            mu_exp,
            amplitude_ratio,
            auto_scale: true,
        };
        spec.validate()?;
        Ok(spec)
    }

    fn validate(&self) -> Result<()> {
        if self.odd_coeffs.is_empty() || self.odd_coeffs.iter().any(|c| !c.is_finite()) {
            return Err(domain(
                "PerturbationSpec",
                "need at least one finite odd coefficient",
            ));
        }
        if !(self.b > 0.0 && self.mu_exp > 0.0) {
            return Err(domain(
                "PerturbationSpec",
                format!(
                    "need b > 0 and mu > 0, got b = {}, mu = {}",
                    self.b, self.mu_exp
                ),
            ));
        }
        if !(self.amplitude_ratio > 0.0 && self.amplitude_ratio < 1.0) {
            return Err(domain(
                "PerturbationSpec",
                format!(
                    "amplitude ratio must lie in (0, 1), got {}",
                    self.amplitude_ratio
                ),
            ));
        }
        Ok(())
    }

    fn raw(&self, y: f64) -> f64 {
        let y2 = y * y;
        let mut q = 0.0;
        let mut p = y;
        for &c in &self.odd_coeffs {
            q += c * p;
            p *= y2;
        }
        q * (-self.b * y.abs().powf(self.mu_exp)).exp()
    }
}

/// An admissible perturbation sampled on a line grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbation {
    spec: PerturbationSpec,
    scale: f64,
    center: f64,
    /// Set for compactly supported targets: `h` carries the factor `f̂/‖f̂‖_∞`.
    weight: Option<RadialShape>,
    /// Coefficient of the mean-correcting term `(x−μ₁)e^{−b|x−μ₁|^μ}` (shifted targets).
    mean_fix: f64,
    grid: LineGrid,
    values: Vec<f64>,
    max_ratio: f64,
}

impl Perturbation {
    fn unscaled(&self, x: f64) -> f64 {
        let y = x - self.center;
        let base = self.spec.raw(y)
            - self.mean_fix * y * (-self.spec.b * y.abs().powf(self.spec.mu_exp)).exp();
        match self.weight {
            Some(w) => base * w.value(y.abs()) / w.peak(),
            None => base,
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        self.scale * self.unscaled(x)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn grid(&self) -> &LineGrid {
        &self.grid
    }

    pub fn spec(&self) -> &PerturbationSpec {
        &self.spec
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `max |h|/f̂` over the grid.
    pub fn max_ratio(&self) -> f64 {
        self.max_ratio
    }

    /// The zero perturbation on `grid`.
    pub fn zero(grid: &LineGrid) -> Self {
        Self {
            spec: PerturbationSpec {
                odd_coeffs: vec![0.0],
                b: 1.0,
                mu_exp: 2.0,
                amplitude_ratio: 0.5,
                auto_scale: false,
            },
            scale: 0.0,
            center: grid.center(),
            weight: None,
            mean_fix: 0.0,
            grid: grid.clone(),
            values: vec![0.0; grid.len()],
            max_ratio: 0.0,
        }
    }

    /// `Σ wᵢ (x−μ₁)^k hᵢ`.
    pub fn moment(&self, k: i32) -> f64 {
        self.grid
            .nodes()
            .iter()
            .zip(self.grid.weights())
            .zip(&self.values)
            .map(|((&x, &w), &h)| w * (x - self.center).powi(k) * h)
            .sum()
    }
}

/// Samples `spec` against `target` on `grid`, enforcing `|h| < c f̂`,
/// `∫h = 0` and `∫(x−μ₁)²h = 0` (plus `∫(x−μ₁)h = 0` when `μ₁ ≠ 0`).
pub fn make_admissible_perturbation(
    spec: &PerturbationSpec,
    target: &MaxEntProfile,
    grid: &LineGrid,
) -> Result<Perturbation> {
    spec.validate()?;
    if target.dimension() != 1 {
        return Err(Error::Dimension(target.dimension()));
    }
    let shape = target.shape();
    let center = target.mu1();
    if (grid.center() - center).abs() > 1e-12 * (1.0 + center.abs()) {
        return Err(Error::GridMismatch(format!(
            "grid centred at {} but the target mean is {center}",
            grid.center()
        )));
    }
    let weight = (target.regime().regime() == Regime::PorousMedium).then_some(shape);
    let mut h = Perturbation {
        spec: spec.clone(),
        scale: 1.0,
        center,
        weight,
        mean_fix: 0.0,
        grid: grid.clone(),
        values: Vec::new(),
        max_ratio: 0.0,
    };
    if center != 0.0 {
        // remove the component that would move the mean
        let q1 = |y: f64| {
            y * (-spec.b * y.abs().powf(spec.mu_exp)).exp()
                * weight.map_or(1.0, |w| w.value(y.abs()) / w.peak())
        };
        let mut num = 0.0;
        let mut den = 0.0;
        for (&x, &w) in grid.nodes().iter().zip(grid.weights()) {
            let y = x - center;
            num += w * y * h.unscaled(x);
            den += w * y * q1(y);
        }
        h.mean_fix = num / den;
    }
    let raw: Vec<f64> = grid.nodes().iter().map(|&x| h.unscaled(x)).collect();
    let mut max_ratio: f64 = 0.0;
    let mut argmax = 0;
    for (i, (&x, &v)) in grid.nodes().iter().zip(&raw).enumerate() {
        let f = shape.value((x - center).abs());
        if v == 0.0 {
            continue;
        }
        if f <= 0.0 {
            return Err(Error::TailDominance(format!(
                "h = {v:e} where the target vanishes (x = {x})"
            )));
        }
        let r = v.abs() / f;
        if r > max_ratio {
            max_ratio = r;
            argmax = i;
        }
    }
    if max_ratio == 0.0 {
        return Err(Error::Inadmissible(
            "perturbation vanishes identically on the grid".into(),
        ));
    }
    let reach = grid.truncation().radius();
    let at = (grid.nodes()[argmax] - center).abs();
    if weight.is_none() && at > 0.9 * reach {
        return Err(Error::TailDominance(format!(
            "|h|/f peaks at |x - mu1| = {at:.3e}, near the truncation radius {reach:.3e}: h decays slower than the target"
        )));
    }
    let c = spec.amplitude_ratio;
    let scale = if spec.auto_scale {
        c * (1.0 - 1e-3) / max_ratio
    } else if max_ratio < c {
        1.0
    } else {
        return Err(Error::Inadmissible(format!(
            "max |h|/f = {max_ratio} is not below c = {c}"
        )));
    };
    h.scale = scale;
    h.values = raw.iter().map(|v| v * scale).collect();
    h.max_ratio = max_ratio * scale;
    let abs_mass: f64 = h
        .values
        .iter()
        .zip(grid.weights())
        .map(|(v, w)| w * v.abs())
        .sum();
    let tol = 1e-12 * abs_mass.max(1.0);
    let mut conditions = vec![(0, h.moment(0)), (2, h.moment(2))];
    if center != 0.0 {
        conditions.push((1, h.moment(1)));
    }
    for (k, m) in conditions {
        if m.abs() > tol * (1.0 + reach.min(1e6)).powi(k) {
            return Err(Error::Inadmissible(format!(
                "moment of order {k} is {m:e}, not zero"
            )));
        }
    }
    Ok(h)
}

fn on_same_grid(f: &DensityField, h: &Perturbation) -> Result<()> {
    match f.layout() {
        Layout::Line(g) if g.nodes() == h.grid.nodes() => Ok(()),
        _ => Err(Error::GridMismatch(
            "density and perturbation must share one line grid".into(),
        )),
    }
}

/// `∫(f^{α−1} − λ̃₀ − 2λ̃₁x − λ̃₂x²) h`.
pub fn first_variation(
    f: &DensityField,
    h: &Perturbation,
    alpha: f64,
    lagrange: &LagrangeSolution,
) -> Result<f64> {
    on_same_grid(f, h)?;
    let mut acc = 0.0;
    for (i, ((&x, &w), (&v, &hv))) in h
        .grid
        .nodes()
        .iter()
        .zip(h.grid.weights())
        .zip(f.values().iter().zip(&h.values))
        .enumerate()
    {
        if hv == 0.0 {
            continue;
        }
        if v <= 0.0 {
            return Err(Error::SupportViolation(format!(
                "h != 0 where f = 0 at node {i}"
            )));
        }
        let poly = lagrange.lambda0_t + 2.0 * lagrange.lambda1_t * x + lagrange.lambda2_t * x * x;
        acc += w * (v.powf(alpha - 1.0) - poly) * hv;
    }
    Ok(acc)
}

/// `(∫f̂^α)(∫f̂^{α−2}h²) − (α/(α−1))∫f̂^{α−1}h`; positive certifies a strict local maximum.
pub fn second_variation_margin(f_hat: &MaxEntProfile, h: &Perturbation, alpha: f64) -> Result<f64> {
    if alpha == 1.0 {
        return Err(domain(
            "second_variation_margin",
            "alpha = 1 has no power form",
        ));
    }
    let shape = f_hat.shape();
    let c = f_hat.mu1();
    let (mut p, mut q, mut l) = (0.0, 0.0, 0.0);
    for ((&x, &w), &hv) in h.grid.nodes().iter().zip(h.grid.weights()).zip(&h.values) {
        let f = shape.value((x - c).abs());
        if f <= 0.0 {
            if hv != 0.0 {
                return Err(Error::Inadmissible(
                    "h is nonzero outside the target support".into(),
                ));
            }
            continue;
        }
        p += w * f.powf(alpha);
        if hv != 0.0 {
            q += w * f.powf(alpha - 2.0) * hv * hv;
            l += w * f.powf(alpha - 1.0) * hv;
        }
    }
    let margin = p * q - alpha / (alpha - 1.0) * l;
    if !margin.is_finite() {
        return Err(Error::Inadmissible(format!(
            "second variation diverges (margin {margin})"
        )));
    }
    Ok(margin)
}
