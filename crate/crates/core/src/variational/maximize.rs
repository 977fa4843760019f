use crate::error::{domain, Error, Result};
use crate::functionals::{DensityField, Layout, TailModel};
use crate::numerics::adaptive::{integrate, integrate_real_line};
use crate::numerics::LineGrid;
use crate::profiles::{AlphaRegime, MaxEntProfile};

const QUAD_TOL: f64 = 1e-13;
const FD_STEP: f64 = 1e-6;
const MAX_HALVINGS: usize = 40;

/// Result of the independent maximizer: the stationarity-form density
/// `f = (a(1 + s(x−m)²))₊^{1/(α−1)}` sampled on a line grid.
#[derive(Debug, Clone)]
pub struct NumericMaximum {
    pub alpha: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub a: f64,
    pub s: f64,
    pub m: f64,
    /// `[λ̃₀, λ̃₁, λ̃₂]` in `f^{α−1} = λ̃₀ + 2λ̃₁x + λ̃₂x²`.
    pub lambda_t: [f64; 3],
    /// `H_α` of the iterate, by adaptive quadrature.
    pub entropy: f64,
    pub iterations: usize,
    /// Last change in `H_α`.
    pub last_change: f64,
    /// Constraint residual norm at exit.
    pub residual: f64,
    pub field: DensityField,
}

impl NumericMaximum {
    pub fn density(&self, x: f64) -> f64 {
        stationary_density(self.alpha, self.a, self.s, self.m, x)
    }

    /// Half-width of the support; infinite for `α < 1`.
    pub fn support_radius(&self) -> f64 {
        if self.s < 0.0 {
            1.0 / (-self.s).sqrt()
        } else {
            f64::INFINITY
        }
    }

    /// `∫|f − f̂|` by adaptive quadrature, splitting at both support edges.
    pub fn l1_distance(&self, profile: &MaxEntProfile) -> Result<f64> {
        let diff = |x: f64| (self.density(x) - profile.pdf(&[x])).abs();
        let scale = profile.mu2();
        if self.alpha < 1.0 {
            let c = profile.mu1();
            return integrate_real_line(|t| scale * diff(c + scale * t), 1e-12);
        }
        let r1 = self.support_radius();
        let r2 = profile.support_radius();
        let mut cuts = [
            self.m - r1,
            self.m + r1,
            profile.mu1() - r2,
            profile.mu1() + r2,
        ];
        cuts.sort_by(f64::total_cmp);
        let mut total = 0.0;
        for w in cuts.windows(2) {
            if w[1] > w[0] {
                total += integrate(diff, w[0], w[1], 1e-12)?;
            }
        }
        Ok(total)
    }
}

fn stationary_density(alpha: f64, a: f64, s: f64, m: f64, x: f64) -> f64 {
    let q = a * (1.0 + s * (x - m) * (x - m));
    if q <= 0.0 {
        0.0
    } else {
        q.powf(1.0 / (alpha - 1.0))
    }
}

/// Moments of `u = (1 + s(x−m)²)₊^{1/(α−1)}`: `[∫u, ∫xu, ∫(x−μ₁)²u, ∫u^α]`.
fn shape_moments(alpha: f64, s: f64, m: f64, mu1: f64) -> Result<[f64; 4]> {
    let e = 1.0 / (alpha - 1.0);
    let len = 1.0 / s.abs().sqrt();
    let mut out = [0.0; 4];
    for (k, slot) in out.iter_mut().enumerate() {
        // y = (x − m)/len
        let g = |y: f64| {
            let base = 1.0 + s.signum() * y * y;
            if base <= 0.0 {
                return 0.0;
            }
            let u = base.powf(e);
            let x = m + len * y;
            len * match k {
                0 => u,
                1 => x * u,
                2 => (x - mu1) * (x - mu1) * u,
                _ => u.powf(alpha),
            }
        };
        *slot = if s > 0.0 {
            integrate_real_line(g, QUAD_TOL)?
        } else {
            integrate(g, -1.0, 1.0, QUAD_TOL)?
        };
    }
    Ok(out)
}

struct Eval {
    residual: Vec<f64>,
    entropy: f64,
}

fn evaluate(
    alpha: f64,
    mu1: f64,
    mu2: f64,
    theta: &[f64],
    sign: f64,
    shifted: bool,
) -> Result<Eval> {
    let (ln_a, m, ln_s) = (
        theta[0],
        if shifted { theta[1] } else { 0.0 },
        theta[theta.len() - 1],
    );
    let s = sign * ln_s.exp();
    let [u0, u1, u2, ua] = shape_moments(alpha, s, m, mu1)?;
    let e = 1.0 / (alpha - 1.0);
    let mut residual = vec![e * ln_a + u0.ln()];
    if shifted {
        residual.push((u1 / u0 - mu1) / mu2);
    }
    residual.push((u2 / u0).ln() - 2.0 * mu2.ln());
    let entropy = (ua.ln() - alpha * u0.ln()) / (1.0 - alpha);
    Ok(Eval { residual, entropy })
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let pivot = a[col].clone();
        for row in col + 1..n {
            let f = a[row][col] / pivot[col];
            for (x, p) in a[row][col..].iter_mut().zip(&pivot[col..]) {
                *x -= f * p;
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let s: f64 = (i + 1..n).map(|k| a[i][k] * x[k]).sum();
        x[i] = (b[i] - s) / a[i][i];
    }
    Some(x)
}

/// Grid on which the maximizer for `(α, μ₁, μ₂)` is certified.
pub fn default_line_grid(alpha: f64, mu1: f64, mu2: f64, n_nodes: usize) -> Result<LineGrid> {
    let p = MaxEntProfile::shifted(AlphaRegime::new(alpha, 1)?, mu1, mu2)?;
    match DensityField::from_maxent_on_line(&p, n_nodes)?.layout() {
        Layout::Line(g) => Ok(g.clone()),
        Layout::Radial(_) => unreachable!("line layout requested"),
    }
}

/// Maximizes `H_α` under `∫f = 1`, `∫x²f = μ₂²` (`d = 1`) by damped Newton on
/// the two parameters of the stationarity form; constraints are evaluated by
/// adaptive quadrature, never through the closed form.
pub fn numeric_maximize(
    alpha: f64,
    d: u32,
    mu2: f64,
    grid: &LineGrid,
    max_iter: usize,
    tol: f64,
) -> Result<NumericMaximum> {
    run(alpha, d, 0.0, mu2, grid, max_iter, tol, false)
}

/// Same with a prescribed mean `μ₁` (three unknowns).
pub fn numeric_maximize_shifted(
    alpha: f64,
    d: u32,
    mu1: f64,
    mu2: f64,
    grid: &LineGrid,
    max_iter: usize,
    tol: f64,
) -> Result<NumericMaximum> {
    run(alpha, d, mu1, mu2, grid, max_iter, tol, true)
}

#[allow(clippy::too_many_arguments)]
fn run(
    alpha: f64,
    d: u32,
    mu1: f64,
    mu2: f64,
    grid: &LineGrid,
    max_iter: usize,
    tol: f64,
    shifted: bool,
) -> Result<NumericMaximum> {
    if d != 1 {
        return Err(Error::Dimension(d));
    }
    if alpha == 1.0 {
        return Err(domain(
            "numeric_maximize",
            "alpha = 1 has no power-law stationarity form",
        ));
    }
    AlphaRegime::new(alpha, 1)?;
    if !(mu2 > 0.0 && mu2.is_finite() && mu1.is_finite() && tol > 0.0) {
        return Err(domain(
            "numeric_maximize",
            "need finite mu1, mu2 > 0 and tol > 0",
        ));
    }
    let sign = if alpha < 1.0 { 1.0 } else { -1.0 };
    let mut theta = if shifted {
        vec![0.0, 0.0, -2.0 * mu2.ln()]
    } else {
        vec![0.0, -2.0 * mu2.ln()]
    };
    let mut cur = evaluate(alpha, mu1, mu2, &theta, sign, shifted)?;
    let mut last_change = f64::INFINITY;
    let mut iterations = 0;
    while iterations < max_iter {
        iterations += 1;
        let n = theta.len();
        let mut jac = vec![vec![0.0; n]; n];
        for j in 0..n {
            let h = FD_STEP * (1.0 + theta[j].abs());
            let mut tp = theta.clone();
            let mut tm = theta.clone();
            tp[j] += h;
            tm[j] -= h;
            let rp = evaluate(alpha, mu1, mu2, &tp, sign, shifted)?.residual;
            let rm = evaluate(alpha, mu1, mu2, &tm, sign, shifted)?.residual;
            for i in 0..n {
                jac[i][j] = (rp[i] - rm[i]) / (2.0 * h);
            }
        }
        let rhs: Vec<f64> = cur.residual.iter().map(|r| -r).collect();
        let step = solve_linear(jac, rhs).ok_or(Error::NotConverged {
            iterations,
            gap: norm(&cur.residual),
        })?;
        let mut t = 1.0;
        let mut next = None;
        for _ in 0..MAX_HALVINGS {
            let trial: Vec<f64> = theta.iter().zip(&step).map(|(a, b)| a + t * b).collect();
            if let Ok(e) = evaluate(alpha, mu1, mu2, &trial, sign, shifted) {
                if norm(&e.residual) < norm(&cur.residual) || norm(&e.residual) < tol {
                    next = Some((trial, e));
                    break;
                }
            }
            t *= 0.5;
        }
        let Some((trial, e)) = next else {
            break;
        };
        last_change = (e.entropy - cur.entropy).abs();
        theta = trial;
        cur = e;
        if last_change < tol && norm(&cur.residual) < tol {
            break;
        }
    }
    let residual = norm(&cur.residual);
    if !(last_change < tol && residual < tol) {
        return Err(Error::NotConverged {
            iterations,
            gap: last_change.max(residual),
        });
    }
    let a = theta[0].exp();
    let m = if shifted { theta[1] } else { 0.0 };
    let s = sign * theta[theta.len() - 1].exp();
    let values: Vec<f64> = grid
        .nodes()
        .iter()
        .map(|&x| stationary_density(alpha, a, s, m, x))
        .collect();
    let tail = if alpha < 1.0 {
        TailModel::PowerLaw {
            decay: 2.0 / (1.0 - alpha),
        }
    } else {
        TailModel::Compact
    };
    let field = DensityField::from_values(Layout::Line(grid.clone()), values, tail, true)?;
    Ok(NumericMaximum {
        alpha,
        mu1,
        mu2,
        a,
        s,
        m,
        lambda_t: [a * (1.0 + s * m * m), -a * s * m, a * s],
        entropy: cur.entropy,
        iterations,
        last_change,
        residual,
        field,
    })
}

/// Slow path: preconditioned projected ascent of `H_α` over grid densities.
#[derive(Debug, Clone)]
pub struct AscentResult {
    pub values: Vec<f64>,
    pub entropy: f64,
    pub iterations: usize,
    pub last_change: f64,
}

fn grid_entropy(alpha: f64, w: &[f64], f: &[f64]) -> f64 {
    let p: f64 = w.iter().zip(f).map(|(w, v)| w * v.powf(alpha)).sum();
    p.ln() / (1.0 - alpha)
}

/// Normalized `exp(lf − c₂x²)` and its second moment.
fn tilt(lf: &[f64], x: &[f64], w: &[f64], c2: f64) -> (Vec<f64>, f64) {
    let z: Vec<f64> = lf.iter().zip(x).map(|(l, x)| l - c2 * x * x).collect();
    let top = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = z.iter().map(|v| (v - top).exp()).collect();
    let mass: f64 = e.iter().zip(w).map(|(e, w)| e * w).sum();
    let f: Vec<f64> = e.iter().map(|v| v / mass).collect();
    let m2 = f
        .iter()
        .zip(w)
        .zip(x)
        .map(|((f, w), x)| f * w * x * x)
        .sum();
    (f, m2)
}

fn match_second_moment(lf: &[f64], x: &[f64], w: &[f64], mu2: f64) -> Result<Vec<f64>> {
    let target = mu2 * mu2;
    let (mut lo, mut hi) = (-1.0 / target, 1.0 / target);
    while tilt(lf, x, w, lo).1 < target {
        lo *= 2.0;
        if lo.abs() > 1e12 / target {
            return Err(domain(
                "numeric_maximize_ascent",
                "cannot raise the second moment to the target",
            ));
        }
    }
    while tilt(lf, x, w, hi).1 > target {
        hi *= 2.0;
        if hi > 1e12 / target {
            return Err(domain(
                "numeric_maximize_ascent",
                "cannot lower the second moment to the target",
            ));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if tilt(lf, x, w, mid).1 > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(tilt(lf, x, w, 0.5 * (lo + hi)).0)
}

/// Function-space ascent for the centred problem on a centred `grid`.
///
/// Each step moves `f` by `τ(f − f^{2−α}(k₀ + k₂x²))/(1−α)`, the gradient of
/// `∫f^α` scaled by its inverse curvature, with `(k₀, k₂)` chosen so the step
/// keeps both constraints. Its fixed points are exactly `f^{α−1} = k₀ + k₂x²`.
/// Negative entries are clipped and the second moment restored by a Gaussian tilt.
pub fn numeric_maximize_ascent(
    alpha: f64,
    mu2: f64,
    grid: &LineGrid,
    step: f64,
    max_iter: usize,
    tol: f64,
) -> Result<AscentResult> {
    if alpha == 1.0 {
        return Err(domain(
            "numeric_maximize_ascent",
            "alpha = 1 has no power-law stationarity form",
        ));
    }
    AlphaRegime::new(alpha, 1)?;
    if grid.center() != 0.0 {
        return Err(Error::GridMismatch(
            "ascent runs on a grid centred at 0".into(),
        ));
    }
    if !(step > 0.0 && step <= 1.0) {
        return Err(domain(
            "numeric_maximize_ascent",
            format!("step must lie in (0, 1], got {step}"),
        ));
    }
    let x = grid.nodes();
    let w = grid.weights();
    let lf0: Vec<f64> = x
        .iter()
        .map(|x| -2.0 * (1.0 + x * x / (mu2 * mu2)).ln())
        .collect();
    let mut f = match_second_moment(&lf0, x, w, mu2)?;
    let mut h = grid_entropy(alpha, w, &f);
    let mut last_change = f64::INFINITY;
    for it in 1..=max_iter {
        let pre: Vec<f64> = f
            .iter()
            .map(|&v| if v > 0.0 { v.powf(2.0 - alpha) } else { 0.0 })
            .collect();
        let mut a = [[0.0; 2]; 2];
        let mut b = [0.0; 2];
        for i in 0..x.len() {
            let x2 = x[i] * x[i];
            let wp = w[i] * pre[i];
            a[0][0] += wp;
            a[0][1] += wp * x2;
            a[1][1] += wp * x2 * x2;
            b[0] += w[i] * f[i];
            b[1] += w[i] * f[i] * x2;
        }
        a[1][0] = a[0][1];
        let k = solve_linear(a.iter().map(|r| r.to_vec()).collect(), b.to_vec()).ok_or(
            Error::NotConverged {
                iterations: it,
                gap: last_change,
            },
        )?;
        let lf: Vec<f64> = f
            .iter()
            .zip(&pre)
            .zip(x)
            .map(|((&v, &p), &x)| {
                let next = v + step * (v - p * (k[0] + k[1] * x * x)) / (1.0 - alpha);
                if next > 0.0 {
                    next.ln()
                } else {
                    f64::NEG_INFINITY
                }
            })
            .collect();
        f = match_second_moment(&lf, x, w, mu2)?;
        let hn = grid_entropy(alpha, w, &f);
        last_change = (hn - h).abs();
        h = hn;
        if last_change < tol {
            return Ok(AscentResult {
                values: f,
                entropy: h,
                iterations: it,
                last_change,
            });
        }
    }
    Err(Error::NotConverged {
        iterations: max_iter,
        gap: last_change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::renyi_entropy;

    fn profile(alpha: f64, mu1: f64, mu2: f64) -> MaxEntProfile {
        MaxEntProfile::shifted(AlphaRegime::new(alpha, 1).unwrap(), mu1, mu2).unwrap()
    }

    #[test]
    fn converges_to_closed_form() {
        for a in [0.8, 2.0, 0.6, 1.5] {
            let grid = default_line_grid(a, 0.0, 1.0, 256).unwrap();
            let r = numeric_maximize(a, 1, 1.0, &grid, 100, 1e-11).unwrap();
            let p = profile(a, 0.0, 1.0);
            assert!(r.l1_distance(&p).unwrap() < 1e-6, "alpha {a}");
            let h = renyi_entropy(&DensityField::from_maxent_on_line(&p, 256).unwrap(), a).unwrap();
            assert!(r.entropy <= h + 1e-8);
        }
    }

    #[test]
    fn porous_support_within_one_cell() {
        let grid = default_line_grid(2.0, 0.0, 1.0, 256).unwrap();
        let r = numeric_maximize(2.0, 1, 1.0, &grid, 100, 1e-11).unwrap();
        let exact = profile(2.0, 0.0, 1.0).support_radius();
        let cell = grid
            .nodes()
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max);
        assert!((r.support_radius() - exact).abs() < cell);
    }

    #[test]
    fn shifted_problem_is_equivalent() {
        for a in [0.8, 2.0] {
            let grid = default_line_grid(a, 1.5, 0.7, 256).unwrap();
            let r = numeric_maximize_shifted(a, 1, 1.5, 0.7, &grid, 100, 1e-11).unwrap();
            assert!(r.l1_distance(&profile(a, 1.5, 0.7)).unwrap() < 1e-3);
        }
    }

    #[test]
    fn iteration_cap() {
        let grid = default_line_grid(0.8, 0.0, 1.0, 128).unwrap();
        assert!(matches!(
            numeric_maximize(0.8, 1, 1.0, &grid, 1, 1e-11),
            Err(Error::NotConverged { .. })
        ));
    }

    #[test]
    fn ascent_approaches_maximizer() {
        for a in [0.8, 2.0] {
            let grid = default_line_grid(a, 0.0, 1.0, 256).unwrap();
            let r = numeric_maximize_ascent(a, 1.0, &grid, 0.5, 5_000, 1e-13).unwrap();
            let p = profile(a, 0.0, 1.0);
            let l1: f64 = grid
                .nodes()
                .iter()
                .zip(grid.weights())
                .zip(&r.values)
                .map(|((&x, &w), &v)| w * (v - p.pdf(&[x])).abs())
                .sum();
            assert!(l1 < 1e-3, "alpha {a}: l1 {l1} after {}", r.iterations);
        }
    }
}
