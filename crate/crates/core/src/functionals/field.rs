use crate::error::{domain, Error, Result};
use crate::numerics::{build_grid, LineGrid, RadialGrid, StencilSpec, Truncation};
use crate::profiles::{MaxEntProfile, RadialShape, ZkbProfile};
use crate::specfun::sphere_area;
use std::fmt;
use std::sync::Arc;

/// Scalar function of the layout coordinate (radius or abscissa).
pub type Closure = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Mass tolerance for fields flagged as normalized.
pub const MASS_TOLERANCE: f64 = 1e-6;
/// Densities below this are treated as zero in divisions.
pub const DENSITY_FLOOR: f64 = 1e-300;
/// Default number of base nodes for profile-backed fields.
pub const DEFAULT_NODES: usize = 512;

#[derive(Debug, Clone, PartialEq)]
pub enum Layout {
    /// Radially symmetric density in `ℝ^d`, sampled along the radius.
    Radial(RadialGrid),
    /// Density on `ℝ`, sampled along the line.
    Line(LineGrid),
}

/// Behaviour of the density beyond the last node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TailModel {
    /// Exactly zero outside the grid.
    Compact,
    /// `f ≲ c·r^{−decay}`.
    PowerLaw { decay: f64 },
    /// Faster than any power (Gaussian).
    Rapid,
}

/// A density sampled on a certified quadrature grid.
#[derive(Clone)]
pub struct DensityField {
    layout: Layout,
    measure: Vec<f64>,
    coords: Vec<f64>,
    values: Vec<f64>,
    gradient: Option<Vec<f64>>,
    density: Option<Closure>,
    shape: Option<RadialShape>,
    tail: TailModel,
    normalized: bool,
}

impl fmt::Debug for DensityField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DensityField")
            .field("dimension", &self.dimension())
            .field("nodes", &self.values.len())
            .field("tail", &self.tail)
            .field("normalized", &self.normalized)
            .field("analytic_shape", &self.shape)
            .finish()
    }
}

fn layout_parts(layout: &Layout) -> (Vec<f64>, Vec<f64>) {
    match layout {
        Layout::Radial(g) => (g.nodes().to_vec(), g.measure_weights()),
        Layout::Line(g) => (g.nodes().to_vec(), g.weights().to_vec()),
    }
}

impl DensityField {
    fn assemble(
        layout: Layout,
        values: Vec<f64>,
        tail: TailModel,
        normalized: bool,
    ) -> Result<Self> {
        let (coords, measure) = layout_parts(&layout);
        if values.len() != coords.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for {} nodes",
                values.len(),
                coords.len()
            )));
        }
        if let Some((i, &v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::NonFinite { index: i, value: v });
        }
        let field = Self {
            layout,
            measure,
            coords,
            values,
            gradient: None,
            density: None,
            shape: None,
            tail,
            normalized,
        };
        if normalized {
            let m = field.mass();
            if (m - 1.0).abs() > MASS_TOLERANCE {
                return Err(domain(
                    "DensityField",
                    format!(
                        "mass {m} outside 1 ± {MASS_TOLERANCE}; flag the field as unnormalized"
                    ),
                ));
            }
        }
        Ok(field)
    }

    /// Samples `f` on the layout; the mass must be `1 ± 1e-6`.
    pub fn from_closure(layout: Layout, f: Closure, tail: TailModel) -> Result<Self> {
        let values = layout_parts(&layout).0.iter().map(|&x| f(x)).collect();
        let mut field = Self::assemble(layout, values, tail, true)?;
        field.density = Some(f);
        Ok(field)
    }

    /// As [`DensityField::from_closure`] without the mass check.
    pub fn unnormalized(layout: Layout, f: Closure, tail: TailModel) -> Result<Self> {
        let values = layout_parts(&layout).0.iter().map(|&x| f(x)).collect();
        let mut field = Self::assemble(layout, values, tail, false)?;
        field.density = Some(f);
        Ok(field)
    }

    /// Field from node values only; derivative-bearing functionals are unavailable.
    pub fn from_values(
        layout: Layout,
        values: Vec<f64>,
        tail: TailModel,
        normalized: bool,
    ) -> Result<Self> {
        Self::assemble(layout, values, tail, normalized)
    }

    /// Attaches an exact derivative (radial or along the line).
    pub fn with_gradient(mut self, g: Closure) -> Self {
        self.gradient = Some(self.coords.iter().map(|&x| g(x)).collect());
        self
    }

    /// Radially symmetric field for a closed-form shape in `ℝ^d`, with exact
    /// derivatives. The grid is certified for powers `f^q` with `q ≥ 1/2`.
    pub fn from_shape(shape: RadialShape, d: u32, n_nodes: usize) -> Result<Self> {
        let df = d as f64;
        let (domain, moment, tail) = match shape.decay() {
            Some(p) => {
                let moment = if p > df + 2.25 { 2 } else { 0 };
                let cert = (0.5 * p).max(df + moment as f64 + 0.25).min(p);
                (shape.domain(cert), moment, TailModel::PowerLaw { decay: p })
            }
            None => {
                let tail = match shape {
                    RadialShape::Gaussian { .. } => TailModel::Rapid,
                    _ => TailModel::Compact,
                };
                (shape.domain(f64::INFINITY), 2, tail)
            }
        };
        let grid = build_grid(domain, n_nodes, d, moment)?;
        let f: Closure = Arc::new(move |r| shape.value(r));
        let g: Closure = Arc::new(move |r| shape.derivative(r));
        let mut field = Self::from_closure(Layout::Radial(grid), f, tail)?.with_gradient(g);
        field.shape = Some(shape);
        Ok(field)
    }

    /// Field for a maximizer: radial about the mean, or along the line when
    /// `d = 1` and `μ₁ ≠ 0`.
    pub fn from_maxent(profile: &MaxEntProfile, n_nodes: usize) -> Result<Self> {
        if profile.mu1() == 0.0 || profile.dimension() != 1 {
            return Self::from_shape(profile.shape(), profile.dimension(), n_nodes);
        }
        Self::from_maxent_on_line(profile, n_nodes)
    }

    /// One-dimensional maximizer on a line grid mirrored about `μ₁`.
    pub fn from_maxent_on_line(profile: &MaxEntProfile, n_nodes: usize) -> Result<Self> {
        if profile.dimension() != 1 {
            return Err(Error::Dimension(profile.dimension()));
        }
        let shape = profile.shape();
        let radial = Self::from_shape(shape, 1, n_nodes)?;
        let Layout::Radial(grid) = &radial.layout else {
            unreachable!()
        };
        let mu1 = profile.mu1();
        let line = LineGrid::from_radial(grid, mu1)?;
        let f: Closure = Arc::new(move |x| shape.value((x - mu1).abs()));
        let g: Closure = Arc::new(move |x| (x - mu1).signum() * shape.derivative((x - mu1).abs()));
        let mut field = Self::from_closure(Layout::Line(line), f, radial.tail)?.with_gradient(g);
        field.shape = Some(shape);
        Ok(field)
    }

    pub fn from_zkb(profile: &ZkbProfile, n_nodes: usize) -> Result<Self> {
        Self::from_shape(profile.shape(), profile.dimension(), n_nodes)
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn dimension(&self) -> u32 {
        match &self.layout {
            Layout::Radial(g) => g.dimension(),
            Layout::Line(_) => 1,
        }
    }

    pub fn is_radial(&self) -> bool {
        matches!(self.layout, Layout::Radial(_))
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Quadrature weights including the radial measure.
    pub fn measure(&self) -> &[f64] {
        &self.measure
    }

    pub fn tail(&self) -> TailModel {
        self.tail
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn shape(&self) -> Option<RadialShape> {
        self.shape
    }

    pub fn density(&self) -> Option<&Closure> {
        self.density.as_ref()
    }

    pub fn tail_bound(&self) -> f64 {
        match &self.layout {
            Layout::Radial(g) => g.tail_bound(),
            Layout::Line(g) => g.tail_bound(),
        }
    }

    pub fn truncation(&self) -> Truncation {
        match &self.layout {
            Layout::Radial(g) => g.truncation(),
            Layout::Line(g) => g.truncation(),
        }
    }

    fn center(&self) -> f64 {
        match &self.layout {
            Layout::Radial(_) => 0.0,
            Layout::Line(g) => g.center(),
        }
    }

    /// `Σ mᵢ g(fᵢ, xᵢ)` over the nodes.
    pub fn integrate(&self, g: impl Fn(f64, f64) -> f64) -> Result<f64> {
        let mut acc = 0.0;
        for (i, ((&m, &v), &x)) in self
            .measure
            .iter()
            .zip(&self.values)
            .zip(&self.coords)
            .enumerate()
        {
            let y = g(v, x);
            if !y.is_finite() {
                return Err(Error::NonFinite { index: i, value: y });
            }
            acc += m * y;
        }
        Ok(acc)
    }

    /// Leading-order estimate of `∫` beyond the truncation radius for an
    /// integrand whose node values are `h(i)` and which decays like
    /// `r^{−exponent}`. Zero unless the tail is a power law.
    pub(crate) fn tail_estimate(&self, h: impl Fn(usize) -> f64, exponent: f64) -> f64 {
        if !matches!(self.tail, TailModel::PowerLaw { .. }) {
            return 0.0;
        }
        let n = self.coords.len();
        match &self.layout {
            Layout::Radial(g) => {
                let d = g.dimension() as f64;
                let r = self.coords[n - 1];
                sphere_area(g.dimension()) * h(n - 1) * r.powf(d) / (exponent - d)
            }
            Layout::Line(g) => {
                let c = g.center();
                let right = (self.coords[n - 1] - c) * h(n - 1);
                let left = (c - self.coords[0]) * h(0);
                (right + left) / (exponent - 1.0)
            }
        }
    }

    /// Decay exponent of the density tail, if it is a power law.
    pub fn decay(&self) -> Option<f64> {
        match self.tail {
            TailModel::PowerLaw { decay } => Some(decay),
            _ => None,
        }
    }

    /// Quadrature mass plus the leading tail correction.
    pub fn mass(&self) -> f64 {
        let body = self.integrate(|v, _| v).unwrap_or(f64::NAN);
        let tail = self
            .decay()
            .map_or(0.0, |p| self.tail_estimate(|i| self.values[i], p));
        body + tail
    }

    /// Lebesgue measure of `{f > 0}`; infinite for non-compact tails.
    pub fn support_measure(&self) -> f64 {
        if self.tail != TailModel::Compact {
            return f64::INFINITY;
        }
        self.measure
            .iter()
            .zip(&self.values)
            .filter(|(_, &v)| v > 0.0)
            .map(|(m, _)| m)
            .sum()
    }

    pub fn sup_norm(&self) -> f64 {
        match self.shape {
            Some(s) => s.peak(),
            None => self.values.iter().cloned().fold(0.0, f64::max),
        }
    }

    /// Derivative values at the nodes: exact if attached, otherwise central
    /// differences of the density closure. Nodes within three steps of a
    /// compact support edge are reported as `None`.
    pub fn gradient_at_nodes(&self) -> Result<Vec<Option<f64>>> {
        if let Some(g) = &self.gradient {
            return Ok(g.iter().map(|&v| Some(v)).collect());
        }
        let f = self.density.as_ref().ok_or_else(|| {
            Error::NoDerivative("field has neither a gradient nor a density closure".into())
        })?;
        let radius = self.truncation().radius();
        let step = 1e-4 * radius.clamp(1e-6, 1.0);
        let stencil = StencilSpec::new(4, step)?;
        let margin = 3.0 * stencil.reach();
        let compact = self.tail == TailModel::Compact;
        let c = self.center();
        Ok(self
            .coords
            .iter()
            .map(|&x| {
                let dist = (x - c).abs();
                if compact && dist > radius - margin {
                    None
                } else if self.is_radial() && x < stencil.reach() {
                    // one-sided near the origin: use the even extension
                    Some(stencil.first_derivative(|y| f(y.abs()), x))
                } else {
                    Some(stencil.first_derivative(|y| f(y), x))
                }
            })
            .collect())
    }

    /// `f_λ(x) = λ^{dγ} f(λ^γ x)`; requires a density closure.
    pub fn dilate(&self, lambda: f64, gamma: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(domain(
                "dilate",
                format!("lambda must be positive, got {lambda}"),
            ));
        }
        let f = self
            .density
            .clone()
            .ok_or_else(|| Error::NoDerivative("dilation needs a density closure".into()))?;
        let d = self.dimension() as f64;
        let s = lambda.powf(gamma);
        let amp = lambda.powf(d * gamma);
        let inv = 1.0 / s;
        let layout = match &self.layout {
            Layout::Radial(g) => Layout::Radial(g.scaled(inv)),
            Layout::Line(g) => Layout::Line(g.scaled(inv)),
        };
        let fl: Closure = Arc::new(move |x| amp * f(s * x));
        let mut out = if self.normalized {
            Self::from_closure(layout, fl, self.tail)?
        } else {
            Self::unnormalized(layout, fl, self.tail)?
        };
        if self.gradient.is_some() {
            if let Some(shape) = self.shape {
                let scaled = match shape {
                    RadialShape::Power { amp: a0, curv, exp } => RadialShape::Power {
                        amp: a0 * amp,
                        curv: curv * s * s,
                        exp,
                    },
                    RadialShape::Gaussian { amp: a0, var } => RadialShape::Gaussian {
                        amp: a0 * amp,
                        var: var / (s * s),
                    },
                };
                let c = out.center();
                let radial = out.is_radial();
                let g: Closure = Arc::new(move |x| {
                    if radial {
                        scaled.derivative(x)
                    } else {
                        (x - c).signum() * scaled.derivative((x - c).abs())
                    }
                });
                out = out.with_gradient(g);
                out.shape = Some(scaled);
            }
        }
        Ok(out)
    }

    pub(crate) fn set_shape(&mut self, shape: RadialShape) {
        self.shape = Some(shape);
    }

    /// Value of the density at an arbitrary coordinate, via the closure.
    pub fn eval(&self, x: f64) -> Option<f64> {
        self.density.as_ref().map(|f| f(x))
    }

    /// Same grid, new values (for perturbed or iterated densities).
    pub fn with_values(&self, values: Vec<f64>, normalized: bool) -> Result<Self> {
        Self::assemble(self.layout.clone(), values, self.tail, normalized)
    }

    /// Same grid, new density closure.
    pub fn with_closure(&self, f: Closure, normalized: bool) -> Result<Self> {
        if normalized {
            Self::from_closure(self.layout.clone(), f, self.tail)
        } else {
            Self::unnormalized(self.layout.clone(), f, self.tail)
        }
    }
}
