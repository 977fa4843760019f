use crate::error::{domain, Error, Result};
use crate::specfun::{beta_fn, sphere_area};
use std::sync::OnceLock;

const GL_POINTS: usize = 16;
/// Relative tail mass allowed beyond the truncation radius.
pub const TAIL_TOLERANCE: f64 = 1e-12;
const MAX_TRUNCATION_RATIO: f64 = 1e100;
const CORE_WIDTHS: f64 = 8.0;
const GRADING_LEVELS: usize = 40;
const GAUSSIAN_WIDTHS: f64 = 12.0;

fn gauss_legendre_16() -> &'static ([f64; GL_POINTS], [f64; GL_POINTS]) {
    static RULE: OnceLock<([f64; GL_POINTS], [f64; GL_POINTS])> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_POINTS;
        let mut x = [0.0; GL_POINTS];
        let mut w = [0.0; GL_POINTS];
        for i in 0..n {
            let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, z);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                let dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
                let dz = p1 / dp;
                z -= dz;
                if dz.abs() < 1e-16 {
                    let (mut q0, mut q1) = (1.0, z);
                    for k in 2..=n {
                        let q2 = ((2 * k - 1) as f64 * z * q1 - (k - 1) as f64 * q0) / k as f64;
                        q0 = q1;
                        q1 = q2;
                    }
                    let dq = n as f64 * (z * q1 - q0) / (z * z - 1.0);
                    w[i] = 2.0 / ((1.0 - z * z) * dq * dq);
                    break;
                }
            }
            x[i] = z;
        }
        // ascending order
        x.reverse();
        w.reverse();
        (x, w)
    })
}

fn push_panel(nodes: &mut Vec<f64>, weights: &mut Vec<f64>, a: f64, b: f64) {
    let (x, w) = gauss_legendre_16();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    for i in 0..GL_POINTS {
        nodes.push(mid + half * x[i]);
        weights.push(half * w[i]);
    }
}

/// Composite Gauss–Legendre on `[a, b]` with `panels` equal panels.
pub fn gauss_legendre_panels(a: f64, b: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(panels * GL_POINTS);
    let mut weights = Vec::with_capacity(panels * GL_POINTS);
    let h = (b - a) / panels as f64;
    for p in 0..panels {
        push_panel(
            &mut nodes,
            &mut weights,
            a + p as f64 * h,
            a + (p + 1) as f64 * h,
        );
    }
    (nodes, weights)
}

/// Radial integration domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Domain {
    /// `[0, ∞)` for an integrand bounded by `(1 + (r/tail_scale)²)^{−decay/2}`;
    /// `core` is the length scale on which the integrand varies near the origin.
    HalfLine {
        core: f64,
        tail_scale: f64,
        decay: f64,
    },
    /// `[0, radius]`, with panels graded geometrically toward `radius`.
    Compact { radius: f64 },
    /// `[0, ∞)` for an integrand bounded by a Gaussian of width `sigma`.
    GaussianTail { sigma: f64 },
}

impl Domain {
    pub fn half_line(scale: f64, decay: f64) -> Self {
        Domain::HalfLine {
            core: scale,
            tail_scale: scale,
            decay,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Truncation {
    /// Half-line cut at this radius; the omitted tail is bounded by `tail_bound`.
    Radius(f64),
    /// Exact finite support.
    Support(f64),
}

impl Truncation {
    pub fn radius(&self) -> f64 {
        match *self {
            Truncation::Radius(r) | Truncation::Support(r) => r,
        }
    }
}

/// Radial quadrature nodes and weights; immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    dimension: u32,
    truncation: Truncation,
    tail_bound: f64,
    tail_decay: Option<f64>,
}

/// Value of a quadrature together with the certified bound on the omitted tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub tail_bound: f64,
}

pub(crate) fn check_dimension(d: u32) -> Result<()> {
    if (1..=3).contains(&d) {
        Ok(())
    } else {
        Err(Error::Dimension(d))
    }
}

/// Builds a composite 16-point Gauss–Legendre radial grid.
///
/// `moment` is the highest radial moment order `m` for which
/// `∫ r^{d−1+m} f dr` must be certified on a half-line.
///
/// ```
/// use renyi_maxent::numerics::{build_grid, integrate_radial, Domain};
/// let grid = build_grid(Domain::half_line(1.0, 4.0), 64, 1, 0).unwrap();
/// let v = integrate_radial(|r| (1.0 + r * r).powi(-2), &grid).unwrap().value;
/// assert!((v - std::f64::consts::FRAC_PI_2).abs() < 1e-10);
/// ```
pub fn build_grid(
    domain: Domain,
    n_nodes: usize,
    dimension: u32,
    moment: u32,
) -> Result<RadialGrid> {
    check_dimension(dimension)?;
    if n_nodes < GL_POINTS {
        return Err(domain_err(format!("n_nodes must be >= 16, got {n_nodes}")));
    }
    let panels = n_nodes.div_ceil(GL_POINTS);
    match domain {
        Domain::Compact { radius } => {
            if !(radius > 0.0 && radius.is_finite()) {
                return Err(domain_err(format!("radius must be positive, got {radius}")));
            }
            let h = radius / panels as f64;
            let (mut nodes, mut weights) = gauss_legendre_panels(0.0, radius - h, panels - 1);
            let mut a = radius - h;
            let mut width = h;
            for _ in 0..GRADING_LEVELS {
                width *= 0.5;
                push_panel(&mut nodes, &mut weights, a, radius - width);
                a = radius - width;
            }
            push_panel(&mut nodes, &mut weights, a, radius);
            Ok(RadialGrid {
                nodes,
                weights,
                dimension,
                truncation: Truncation::Support(radius),
                tail_bound: 0.0,
                tail_decay: None,
            })
        }
        Domain::GaussianTail { sigma } => {
            if !(sigma > 0.0 && sigma.is_finite()) {
                return Err(domain_err(format!("sigma must be positive, got {sigma}")));
            }
            let radius = GAUSSIAN_WIDTHS * sigma;
            let (nodes, weights) = gauss_legendre_panels(0.0, radius, panels);
            // (R/σ)^{d+m} e^{−R²/(2σ²)} dominates the relative tail for R/σ ≫ d + m
            let tail_bound = GAUSSIAN_WIDTHS.powi((dimension + moment) as i32)
                * (-0.5 * GAUSSIAN_WIDTHS * GAUSSIAN_WIDTHS).exp();
            Ok(RadialGrid {
                nodes,
                weights,
                dimension,
                truncation: Truncation::Radius(radius),
                tail_bound,
                tail_decay: None,
            })
        }
        Domain::HalfLine {
            core,
            tail_scale,
            decay,
        } => {
            if !(core > 0.0 && tail_scale > 0.0) || !core.is_finite() || !tail_scale.is_finite() {
                return Err(domain_err(format!(
                    "scales must be positive, got core = {core}, tail_scale = {tail_scale}"
                )));
            }
            let d = dimension as f64;
            let excess = decay - d - moment as f64;
            if !(excess > 0.0) {
                return Err(Error::NonIntegrableTail {
                    moment,
                    decay,
                    dimension,
                });
            }
            // ∫_0^∞ r^{d−1+m}(1+(r/s)²)^{−decay/2} dr = s^{d+m}·½B((d+m)/2, excess/2)
            let unit = 0.5 * beta_fn((d + moment as f64) / 2.0, excess / 2.0)?;
            let rho = (TAIL_TOLERANCE * unit * excess).powf(-1.0 / excess);
            if !(rho <= MAX_TRUNCATION_RATIO) {
                return Err(Error::TailNotCertifiable {
                    limit: MAX_TRUNCATION_RATIO,
                });
            }
            let core_end = CORE_WIDTHS * core;
            let (mut nodes, mut weights) = gauss_legendre_panels(0.0, core_end, panels);
            let target = (rho * tail_scale).max(core_end);
            let mut a = core_end;
            while a < target {
                push_panel(&mut nodes, &mut weights, a, 2.0 * a);
                a *= 2.0;
            }
            let ratio = a / tail_scale;
            let tail_bound = ratio.powf(-excess) / excess / unit;
            Ok(RadialGrid {
                nodes,
                weights,
                dimension,
                truncation: Truncation::Radius(a),
                tail_bound,
                tail_decay: Some(decay),
            })
        }
    }
}

fn domain_err(detail: String) -> Error {
    domain("build_grid", detail)
}

impl RadialGrid {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_compact(&self) -> bool {
        matches!(self.truncation, Truncation::Support(_))
    }

    /// Envelope decay exponent the grid was certified for (half-line only).
    pub fn tail_decay(&self) -> Option<f64> {
        self.tail_decay
    }

    /// Grid for the substitution `r → factor·r`.
    pub fn scaled(&self, factor: f64) -> RadialGrid {
        let truncation = match self.truncation {
            Truncation::Radius(r) => Truncation::Radius(r * factor),
            Truncation::Support(r) => Truncation::Support(r * factor),
        };
        RadialGrid {
            nodes: self.nodes.iter().map(|r| r * factor).collect(),
            weights: self.weights.iter().map(|w| w * factor).collect(),
            dimension: self.dimension,
            truncation,
            tail_bound: self.tail_bound,
            tail_decay: self.tail_decay,
        }
    }

    /// Weights including the measure `|S_{d−1}| r^{d−1}`.
    pub fn measure_weights(&self) -> Vec<f64> {
        let s = sphere_area(self.dimension);
        let k = self.dimension as i32 - 1;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(r, w)| s * w * r.powi(k))
            .collect()
    }
}

/// `|S_{d−1}| Σ wᵢ rᵢ^{d−1} f(rᵢ)`.
pub fn integrate_radial(f: impl Fn(f64) -> f64, grid: &RadialGrid) -> Result<Integral> {
    let s = sphere_area(grid.dimension);
    let k = grid.dimension as i32 - 1;
    let mut acc = 0.0;
    for (i, (&r, &w)) in grid.nodes.iter().zip(&grid.weights).enumerate() {
        let v = f(r);
        if !v.is_finite() {
            return Err(Error::NonFinite { index: i, value: v });
        }
        acc += w * r.powi(k) * v;
    }
    Ok(Integral {
        value: s * acc,
        tail_bound: grid.tail_bound,
    })
}

/// One-dimensional grid on the whole line, mirrored about `center`.
#[derive(Debug, Clone, PartialEq)]
pub struct LineGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    center: f64,
    truncation: Truncation,
    tail_bound: f64,
    tail_decay: Option<f64>,
}

impl LineGrid {
    /// Mirrors a `d = 1` radial grid about `center`.
    pub fn from_radial(grid: &RadialGrid, center: f64) -> Result<Self> {
        if grid.dimension != 1 {
            return Err(Error::GridMismatch(format!(
                "line grid needs a d = 1 radial grid, got d = {}",
                grid.dimension
            )));
        }
        let n = grid.nodes.len();
        let mut nodes = Vec::with_capacity(2 * n);
        let mut weights = Vec::with_capacity(2 * n);
        for i in (0..n).rev() {
            nodes.push(center - grid.nodes[i]);
            weights.push(grid.weights[i]);
        }
        for i in 0..n {
            nodes.push(center + grid.nodes[i]);
            weights.push(grid.weights[i]);
        }
        Ok(Self {
            nodes,
            weights,
            center,
            truncation: grid.truncation,
            tail_bound: grid.tail_bound,
            tail_decay: grid.tail_decay,
        })
    }

    /// Grid for the substitution `x → factor·x`.
    pub fn scaled(&self, factor: f64) -> LineGrid {
        let truncation = match self.truncation {
            Truncation::Radius(r) => Truncation::Radius(r * factor),
            Truncation::Support(r) => Truncation::Support(r * factor),
        };
        LineGrid {
            nodes: self.nodes.iter().map(|x| x * factor).collect(),
            weights: self.weights.iter().map(|w| w * factor).collect(),
            center: self.center * factor,
            truncation,
            tail_bound: self.tail_bound,
            tail_decay: self.tail_decay,
        }
    }

    pub fn build(domain: Domain, n_nodes: usize, center: f64, moment: u32) -> Result<Self> {
        Self::from_radial(&build_grid(domain, n_nodes, 1, moment)?, center)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn center(&self) -> f64 {
        self.center
    }

    pub fn truncation(&self) -> Truncation {
        self.truncation
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail_bound
    }

    pub fn tail_decay(&self) -> Option<f64> {
        self.tail_decay
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_compact(&self) -> bool {
        matches!(self.truncation, Truncation::Support(_))
    }
}

/// `Σ wᵢ f(xᵢ)` over a line grid.
pub fn integrate_line(f: impl Fn(f64) -> f64, grid: &LineGrid) -> Result<Integral> {
    let mut acc = 0.0;
    for (i, (&x, &w)) in grid.nodes.iter().zip(&grid.weights).enumerate() {
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::NonFinite { index: i, value: v });
        }
        acc += w * v;
    }
    Ok(Integral {
        value: acc,
        tail_bound: grid.tail_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let (x, w) = gauss_legendre_16();
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        for k in 0..32 {
            let q: f64 = x.iter().zip(w).map(|(x, w)| w * x.powi(k)).sum();
            let exact = if k % 2 == 1 {
                0.0
            } else {
                2.0 / (k as f64 + 1.0)
            };
            assert!((q - exact).abs() < 1e-14, "degree {k}");
        }
    }

    #[test]
    fn compact_weights_sum_to_length() {
        let g = build_grid(Domain::Compact { radius: 1.0 }, 64, 1, 0).unwrap();
        assert!((g.weights().iter().sum::<f64>() - 1.0).abs() < 1e-14);
        assert!(g.nodes().windows(2).all(|w| w[1] > w[0]));
        assert!(g.nodes()[0] > 0.0 && *g.nodes().last().unwrap() < 1.0);
        assert!(g.weights().iter().all(|&w| w > 0.0));
    }

    #[test]
    fn constant_on_compact_d1() {
        let r = 2.5;
        let g = build_grid(Domain::Compact { radius: r }, 64, 1, 0).unwrap();
        assert!((integrate_radial(|_| 1.0, &g).unwrap().value - 2.0 * r).abs() < 1e-13);
    }

    #[test]
    fn lorentzian_square_half_line() {
        let g = build_grid(Domain::half_line(1.0, 4.0), 64, 1, 0).unwrap();
        let v = integrate_radial(|r| (1.0 + r * r).powi(-2), &g).unwrap();
        // ∫_ℝ (1+x²)^{−2} = 2·π/4
        assert!((v.value - PI / 2.0).abs() < 1e-10);
        assert!(v.tail_bound <= TAIL_TOLERANCE);
    }

    #[test]
    fn three_dimensional_power() {
        let g = build_grid(Domain::half_line(1.0, 5.0), 128, 3, 0).unwrap();
        let v = integrate_radial(|r| (1.0 + r * r).powf(-2.5), &g)
            .unwrap()
            .value;
        // 4π·½B(3/2, 1) = 4π/3
        assert!((v - 4.0 * PI / 3.0).abs() / v < 1e-10);
    }

    #[test]
    fn graded_compact_handles_endpoint_singularity() {
        let g = build_grid(Domain::Compact { radius: 1.0 }, 64, 2, 0).unwrap();
        let v = integrate_radial(|r| (1.0 - r * r).max(0.0).powi(2), &g)
            .unwrap()
            .value;
        // 2π·½B(1,3) = π/3
        assert!((v - PI / 3.0).abs() < 1e-12);
        let v = integrate_radial(|r| (1.0 - r * r).max(0.0).powf(0.3), &g)
            .unwrap()
            .value;
        let exact = PI / 1.3;
        assert!((v - exact).abs() < 1e-11);
    }

    #[test]
    fn gaussian_tail_grid() {
        let g = build_grid(Domain::GaussianTail { sigma: 2.0 }, 256, 1, 2).unwrap();
        let v = integrate_radial(|r| (-r * r / 8.0).exp(), &g).unwrap();
        assert!((v.value - (8.0 * PI).sqrt()).abs() < 1e-13);
        assert!(v.tail_bound < 1e-20);
    }

    #[test]
    fn divergent_tail_rejected() {
        let err = build_grid(Domain::half_line(1.0, 3.0), 64, 1, 2).unwrap_err();
        assert!(matches!(err, Error::NonIntegrableTail { moment: 2, .. }));
        assert!(build_grid(Domain::half_line(1.0, 1.0), 64, 1, 0).is_err());
        assert!(build_grid(Domain::half_line(1.0, 1.0 + 1e-6), 64, 1, 0).is_err());
    }

    #[test]
    fn too_few_nodes_rejected() {
        assert!(build_grid(Domain::Compact { radius: 1.0 }, 8, 1, 0).is_err());
        assert!(matches!(
            build_grid(Domain::Compact { radius: 1.0 }, 64, 4, 0),
            Err(Error::Dimension(4))
        ));
    }

    #[test]
    fn non_finite_reports_node() {
        let g = build_grid(Domain::Compact { radius: 1.0 }, 16, 1, 0).unwrap();
        let bad = g.nodes()[5];
        let err = integrate_radial(|r| if r == bad { f64::NAN } else { 1.0 }, &g).unwrap_err();
        assert!(matches!(err, Error::NonFinite { index: 5, .. }));
    }

    #[test]
    fn line_grid_mirrors() {
        let lg = LineGrid::build(Domain::half_line(1.0, 4.0), 64, 3.0, 0).unwrap();
        let v = integrate_line(|x| (1.0 + (x - 3.0).powi(2)).powi(-2), &lg)
            .unwrap()
            .value;
        assert!((v - PI / 2.0).abs() < 1e-10);
        let m = integrate_line(|x| x * (1.0 + (x - 3.0).powi(2)).powi(-3), &lg)
            .unwrap()
            .value;
        assert!((m - 3.0 * 3.0 * PI / 8.0).abs() < 1e-10);
    }

    #[test]
    fn refinement_gains_at_least_sixteen() {
        let f = |r: f64| 1.0 / (1.0 + 400.0 * (r - 0.25).powi(2));
        let reference = {
            let g = build_grid(Domain::Compact { radius: 1.0 }, 2048, 1, 0).unwrap();
            integrate_radial(f, &g).unwrap().value
        };
        let e1 = {
            let g = build_grid(Domain::Compact { radius: 1.0 }, 32, 1, 0).unwrap();
            (integrate_radial(f, &g).unwrap().value - reference).abs()
        };
        let e2 = {
            let g = build_grid(Domain::Compact { radius: 1.0 }, 64, 1, 0).unwrap();
            (integrate_radial(f, &g).unwrap().value - reference).abs()
        };
        assert!(e1 > 1e-12, "baseline error {e1} too small to measure");
        assert!(e2 * 16.0 <= e1, "{e1} -> {e2}");
    }

    proptest! {
        #[test]
        fn integration_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, k in 1.0f64..5.0) {
            let g = build_grid(Domain::half_line(1.0, 6.0), 64, 2, 0).unwrap();
            let f = |r: f64| (1.0 + r * r).powi(-3);
            let h = |r: f64| (-k * r * r).exp();
            let lhs = integrate_radial(|r| a * f(r) + b * h(r), &g).unwrap().value;
            let rhs = a * integrate_radial(f, &g).unwrap().value + b * integrate_radial(h, &g).unwrap().value;
            prop_assert!((lhs - rhs).abs() <= 1e-14 * (lhs.abs() + rhs.abs()).max(1.0));
        }
    }
}
