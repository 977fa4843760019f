//! Information functionals of densities sampled on certified grids.

mod field;
mod properties;

pub use field::{
    Closure, DensityField, Layout, TailModel, DEFAULT_NODES, DENSITY_FLOOR, MASS_TOLERANCE,
};
pub use properties::{verify_entropy_properties, PROPERTY_DILATIONS};

use crate::error::{domain, Error, Result};
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

fn tail_exponent_ok(f: &DensityField, exponent: f64, what: &str) -> Result<()> {
    if f.decay().is_some() && exponent <= f.dimension() as f64 {
        return Err(Error::EntropyUndefined(format!(
            "{what}: integrand decays like r^-{exponent}, not integrable in d = {}",
            f.dimension()
        )));
    }
    Ok(())
}

/// `∫ f^q` including the tail correction.
pub fn power_integral(f: &DensityField, q: f64) -> Result<f64> {
    scaled_power_integral(f, q, 1.0)
}

/// `∫ (f/m)^q`; with `m = ‖f‖_∞` this stays representable for large `q`.
fn scaled_power_integral(f: &DensityField, q: f64, m: f64) -> Result<f64> {
    if !(q > 0.0 && q.is_finite()) {
        return Err(domain(
            "power_integral",
            format!("exponent must be positive, got {q}"),
        ));
    }
    if let Some(p) = f.decay() {
        tail_exponent_ok(f, q * p, &format!("f^{q}"))?;
    }
    let body = f.integrate(|v, _| if v > 0.0 { (v / m).powf(q) } else { 0.0 })?;
    let tail = f.decay().map_or(0.0, |p| {
        f.tail_estimate(|i| (f.values()[i] / m).powf(q), q * p)
    });
    Ok(body + tail)
}

/// Moment of order `k`: `∫ |x|^k f` for radial fields, `∫ x^k f` on the line.
pub fn moment(f: &DensityField, k: u32) -> Result<f64> {
    if let Some(p) = f.decay() {
        if p - k as f64 <= f.dimension() as f64 {
            return Err(Error::MomentDiverges(format!(
                "order {k} with tail decay {p} in d = {}",
                f.dimension()
            )));
        }
    }
    let radial = f.is_radial();
    let body = f.integrate(|v, x| {
        if radial {
            x.abs().powi(k as i32) * v
        } else {
            x.powi(k as i32) * v
        }
    })?;
    let tail = f.decay().map_or(0.0, |p| {
        let c = f.coords();
        f.tail_estimate(|i| c[i].abs().powi(k as i32) * f.values()[i], p - k as f64)
    });
    Ok(body + tail)
}

/// `H_α[f] = ln(∫f^α)/(1−α)`; Shannon at `α = 1`, log support measure at `α = 0`.
pub fn renyi_entropy(f: &DensityField, alpha: f64) -> Result<f64> {
    if !(alpha >= 0.0) || !alpha.is_finite() {
        return Err(domain(
            "renyi_entropy",
            format!("alpha must be finite and >= 0, got {alpha}"),
        ));
    }
    if alpha == 1.0 {
        return shannon_entropy(f);
    }
    if alpha == 0.0 {
        let m = f.support_measure();
        if !m.is_finite() {
            return Err(Error::EntropyUndefined(
                "order 0 needs a compactly supported density".into(),
            ));
        }
        return Ok(m.ln());
    }
    let m = f.sup_norm();
    Ok((alpha * m.ln() + scaled_power_integral(f, alpha, m)?.ln()) / (1.0 - alpha))
}

/// `−∫ f ln f` with `0 ln 0 = 0`.
pub fn shannon_entropy(f: &DensityField) -> Result<f64> {
    let h = |v: f64| if v > 0.0 { -v * v.ln() } else { 0.0 };
    let body = f.integrate(|v, _| h(v))?;
    let tail = f
        .decay()
        .map_or(0.0, |p| f.tail_estimate(|i| h(f.values()[i]), p));
    Ok(body + tail)
}

/// `S_α = (1 − ∫f^α)/(α−1)`.
pub fn tsallis_entropy(f: &DensityField, alpha: f64) -> Result<f64> {
    if alpha == 1.0 {
        return shannon_entropy(f);
    }
    if !(alpha > 0.0) {
        return Err(domain(
            "tsallis_entropy",
            format!("alpha must be positive, got {alpha}"),
        ));
    }
    Ok((1.0 - power_integral(f, alpha)?) / (alpha - 1.0))
}

/// Exponent `2/d + α − 1` of the entropy power.
pub fn entropy_power_exponent(alpha: f64, d: u32) -> f64 {
    2.0 / d as f64 + alpha - 1.0
}

/// `N_α = exp((2/d + α − 1) H_α)`; for `α = 0`, `μ(supp f)^{2/d − 1}`.
pub fn entropy_power(f: &DensityField, alpha: f64, d: u32) -> Result<f64> {
    if !(alpha >= 0.0) {
        return Err(domain(
            "entropy_power",
            format!("alpha must be >= 0, got {alpha}"),
        ));
    }
    if d != f.dimension() {
        return Err(Error::GridMismatch(format!(
            "field has d = {}, asked for d = {d}",
            f.dimension()
        )));
    }
    if alpha == 0.0 {
        let m = f.support_measure();
        if !m.is_finite() {
            return Err(Error::EntropyUndefined(
                "order 0 needs a compactly supported density".into(),
            ));
        }
        return Ok(m.powf(2.0 / d as f64 - 1.0));
    }
    Ok((entropy_power_exponent(alpha, d) * renyi_entropy(f, alpha)?).exp())
}

/// Both quadratures of `G_α` together with the nodes that were dropped.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GFunctional {
    /// `∫ |∇f^α|²/f`.
    pub value: f64,
    /// `∫ f |∇v|²`, `v = α f^{α−1}/(α−1)`; equal to `value` at `α = 1`.
    pub alternate: f64,
    pub deviation: f64,
    pub excluded_nodes: usize,
    /// Quadrature mass of the excluded nodes.
    pub excluded_mass: f64,
}

/// `α`-Fisher information with its ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FisherInformation {
    pub value: f64,
    pub g: GFunctional,
    pub power_integral: f64,
}

/// `G_α[f] = ∫|∇f^α|²/f`, evaluated in both forms. At `α = 1` this is `∫ f|∇ln f|²`.
pub fn g_functional(f: &DensityField, alpha: f64) -> Result<GFunctional> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(domain(
            "g_functional",
            format!("alpha must be positive, got {alpha}"),
        ));
    }
    let grads = f.gradient_at_nodes()?;
    let values = f.values();
    let coords = f.coords();
    let measure = f.measure();
    let center = match f.layout() {
        Layout::Line(g) => g.center(),
        Layout::Radial(_) => 0.0,
    };
    let shapes = f
        .shape()
        .filter(|_| alpha != 1.0)
        .map(|s| (s.powf(alpha), s.powf(alpha - 1.0)));
    let mut excluded_nodes = 0;
    let mut excluded_mass = 0.0;
    let mut first = vec![0.0; values.len()];
    let mut second = vec![0.0; values.len()];
    for i in 0..values.len() {
        let v = values[i];
        let Some(g) = grads[i] else {
            excluded_nodes += 1;
            excluded_mass += measure[i] * v;
            continue;
        };
        if v < DENSITY_FLOOR {
            if v > 0.0 {
                excluded_nodes += 1;
                excluded_mass += measure[i] * v;
            }
            continue;
        }
        let (a, b) = match shapes {
            Some((sa, sb)) => {
                let r = (coords[i] - center).abs();
                let da = sa.derivative(r);
                let dv = alpha / (alpha - 1.0) * sb.derivative(r);
                (da * da / v, v * dv * dv)
            }
            None => {
                let da = alpha * v.powf(alpha - 1.0) * g;
                let dv = alpha * v.powf(alpha - 2.0) * g;
                (da * da / v, v * dv * dv)
            }
        };
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::NonFinite {
                index: i,
                value: if a.is_finite() { b } else { a },
            });
        }
        first[i] = a;
        second[i] = b;
    }
    let sum = |w: &[f64]| w.iter().zip(measure).map(|(x, m)| x * m).sum::<f64>();
    let (mut value, mut alternate) = (sum(&first), sum(&second));
    if let Some(p) = f.decay() {
        let exponent = p * (2.0 * alpha - 1.0) + 2.0;
        tail_exponent_ok(f, exponent, "G functional")?;
        value += f.tail_estimate(|i| first[i], exponent);
        alternate += f.tail_estimate(|i| second[i], exponent);
    }
    Ok(GFunctional {
        value,
        alternate,
        deviation: (value - alternate).abs(),
        excluded_nodes,
        excluded_mass,
    })
}

/// `I_α[f] = (∫f^α)^{−1} ∫|∇f^α|²/f` with its ingredients.
pub fn fisher_information_detail(f: &DensityField, alpha: f64) -> Result<FisherInformation> {
    let g = g_functional(f, alpha)?;
    let pi = power_integral(f, alpha)?;
    Ok(FisherInformation {
        value: g.value / pi,
        g,
        power_integral: pi,
    })
}

pub fn fisher_information_alpha(f: &DensityField, alpha: f64) -> Result<f64> {
    Ok(fisher_information_detail(f, alpha)?.value)
}

fn same_grid(g: &DensityField, f: &DensityField) -> Result<()> {
    if g.is_radial() != f.is_radial() || g.coords() != f.coords() || g.dimension() != f.dimension()
    {
        return Err(Error::GridMismatch("densities must share one grid".into()));
    }
    Ok(())
}

fn check_support(g: &DensityField, f: &DensityField) -> Result<()> {
    for (i, (&gv, &fv)) in g.values().iter().zip(f.values()).enumerate() {
        if gv > 0.0 && fv <= 0.0 {
            return Err(Error::SupportViolation(format!(
                "g > 0 but f = 0 at node {i} (x = {})",
                f.coords()[i]
            )));
        }
    }
    Ok(())
}

fn require_normalized(f: &DensityField, who: &'static str) -> Result<()> {
    if !f.is_normalized() {
        return Err(domain(who, "both densities must be normalized"));
    }
    Ok(())
}

/// `D_α(g‖f) = ln(∫f^{α−1}g)/(1−α) + (1−α)H_α[f]/α − H_α[g]/α`.
pub fn relative_renyi(g: &DensityField, f: &DensityField, alpha: f64) -> Result<f64> {
    require_normalized(g, "relative_renyi")?;
    require_normalized(f, "relative_renyi")?;
    same_grid(g, f)?;
    check_support(g, f)?;
    if alpha == 1.0 {
        return kl_divergence(g, f);
    }
    if !(alpha > 0.0) {
        return Err(domain(
            "relative_renyi",
            format!("alpha must be positive, got {alpha}"),
        ));
    }
    let fv = f.values();
    let gv = g.values();
    let cross: Vec<f64> = fv
        .iter()
        .zip(gv)
        .map(|(&a, &b)| {
            if b > 0.0 {
                a.powf(alpha - 1.0) * b
            } else {
                0.0
            }
        })
        .collect();
    let mut integral: f64 = cross.iter().zip(f.measure()).map(|(x, m)| x * m).sum();
    if let (Some(pf), Some(pg)) = (f.decay(), g.decay()) {
        let exponent = (alpha - 1.0) * pf + pg;
        tail_exponent_ok(f, exponent, "relative Renyi cross term")?;
        integral += f.tail_estimate(|i| cross[i], exponent);
    }
    let hf = renyi_entropy(f, alpha)?;
    let hg = renyi_entropy(g, alpha)?;
    Ok(integral.ln() / (1.0 - alpha) + (1.0 - alpha) / alpha * hf - hg / alpha)
}

/// `∫ g ln(g/f)`.
pub fn kl_divergence(g: &DensityField, f: &DensityField) -> Result<f64> {
    require_normalized(g, "kl_divergence")?;
    require_normalized(f, "kl_divergence")?;
    same_grid(g, f)?;
    check_support(g, f)?;
    let terms: Vec<f64> = g
        .values()
        .iter()
        .zip(f.values())
        .map(|(&a, &b)| if a > 0.0 { a * (a / b).ln() } else { 0.0 })
        .collect();
    let mut value: f64 = terms.iter().zip(g.measure()).map(|(x, m)| x * m).sum();
    if let Some(p) = g.decay() {
        value += g.tail_estimate(|i| terms[i], p);
    }
    Ok(value)
}

/// Escort density `f^α / ∫f^α` on the same grid.
pub fn escort(f: &DensityField, alpha: f64) -> Result<DensityField> {
    let z = power_integral(f, alpha)?;
    let tail = match f.tail() {
        TailModel::PowerLaw { decay } => TailModel::PowerLaw {
            decay: alpha * decay,
        },
        t => t,
    };
    let values: Vec<f64> = f.values().iter().map(|&v| v.powf(alpha) / z).collect();
    let mut out = match f.density() {
        Some(h) => {
            let h = h.clone();
            let c: Closure = Arc::new(move |x| h(x).powf(alpha) / z);
            DensityField::from_closure(f.layout().clone(), c, tail)?
        }
        None => DensityField::from_values(f.layout().clone(), values, tail, true)?,
    };
    if let Some(s) = f.shape() {
        let s = match s.powf(alpha) {
            crate::profiles::RadialShape::Power { amp, curv, exp } => {
                crate::profiles::RadialShape::Power {
                    amp: amp / z,
                    curv,
                    exp,
                }
            }
            crate::profiles::RadialShape::Gaussian { amp, var } => {
                crate::profiles::RadialShape::Gaussian { amp: amp / z, var }
            }
        };
        let center = match f.layout() {
            Layout::Line(g) => g.center(),
            Layout::Radial(_) => 0.0,
        };
        let radial = f.is_radial();
        let grad: Closure = Arc::new(move |x| {
            if radial {
                s.derivative(x)
            } else {
                (x - center).signum() * s.derivative((x - center).abs())
            }
        });
        out = out.with_gradient(grad);
        out.set_shape(s);
    }
    Ok(out)
}

/// All scalar functionals of one density at one order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntropyReport {
    pub alpha: f64,
    pub dimension: u32,
    pub h_alpha: f64,
    pub s_alpha: f64,
    pub n_alpha: f64,
    pub i_alpha: f64,
    pub g_alpha: f64,
    /// Order → `∫|x|^k f` (radial) or `∫x^k f` (line); divergent orders are omitted.
    pub moments: BTreeMap<u32, f64>,
    pub sup_norm: f64,
}

impl EntropyReport {
    /// `|N_α − exp((2/d + α − 1)H_α)|` relative; zero up to round-off.
    pub fn consistency_gap(&self) -> f64 {
        let e = if self.alpha == 1.0 {
            2.0 / self.dimension as f64
        } else {
            entropy_power_exponent(self.alpha, self.dimension)
        };
        ((e * self.h_alpha).exp() - self.n_alpha).abs() / self.n_alpha
    }
}

pub fn entropy_report(f: &DensityField, alpha: f64) -> Result<EntropyReport> {
    let d = f.dimension();
    let mut moments = BTreeMap::new();
    for k in 0..=2 {
        if let Ok(m) = moment(f, k) {
            moments.insert(k, m);
        }
    }
    let fisher = fisher_information_detail(f, alpha)?;
    Ok(EntropyReport {
        alpha,
        dimension: d,
        h_alpha: renyi_entropy(f, alpha)?,
        s_alpha: tsallis_entropy(f, alpha)?,
        n_alpha: entropy_power(f, alpha, d)?,
        i_alpha: fisher.value,
        g_alpha: fisher.g.value,
        moments,
        sup_norm: f.sup_norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{build_grid, Domain};
    use crate::profiles::{AlphaRegime, MaxEntProfile, RadialShape, ZkbProfile};
    use std::f64::consts::{E, PI};

    fn gaussian(sigma: f64) -> DensityField {
        DensityField::from_shape(
            RadialShape::Gaussian {
                amp: 1.0 / (2.0 * PI * sigma * sigma).sqrt(),
                var: sigma * sigma,
            },
            1,
            256,
        )
        .unwrap()
    }

    fn uniform(l: f64) -> DensityField {
        let grid = build_grid(Domain::Compact { radius: l / 2.0 }, 64, 1, 0).unwrap();
        DensityField::from_closure(
            Layout::Radial(grid),
            Arc::new(move |_| 1.0 / l),
            TailModel::Compact,
        )
        .unwrap()
    }

    fn maxent(alpha: f64, d: u32, mu2: f64) -> DensityField {
        let p = MaxEntProfile::centered(AlphaRegime::new(alpha, d).unwrap(), mu2).unwrap();
        DensityField::from_maxent(&p, DEFAULT_NODES).unwrap()
    }

    #[test]
    fn uniform_entropies() {
        let f = uniform(3.0);
        for &a in &[0.5, 2.0, 5.0] {
            assert!((renyi_entropy(&f, a).unwrap() - 3f64.ln()).abs() < 1e-12);
        }
        assert!((shannon_entropy(&f).unwrap() - 3f64.ln()).abs() < 1e-12);
        assert!((renyi_entropy(&f, 0.0).unwrap() - 3f64.ln()).abs() < 1e-12);
        let u = uniform(1.0);
        assert!(tsallis_entropy(&u, 2.0).unwrap().abs() < 1e-12);
    }

    #[test]
    fn gaussian_closed_forms() {
        let f = gaussian(1.0);
        let h = shannon_entropy(&f).unwrap();
        assert!((h - 0.5 * (2.0 * PI * E).ln()).abs() < 1e-12);
        let g = gaussian(1.7);
        let n = entropy_power(&g, 1.0, 1).unwrap();
        assert!((n - 2.0 * PI * E * 1.7 * 1.7).abs() < 1e-10);
        let i = fisher_information_alpha(&g, 1.0).unwrap();
        assert!((i - 1.0 / 2.89).abs() < 1e-10);
        let lo = renyi_entropy(&f, 1.0 - 1e-4).unwrap();
        let hi = renyi_entropy(&f, 1.0 + 1e-4).unwrap();
        assert!(lo > h && h > hi);
    }

    #[test]
    fn gaussian_kl() {
        // both on the wider grid so they share nodes
        let wide = gaussian(2.0);
        let Layout::Radial(grid) = wide.layout().clone() else {
            unreachable!()
        };
        let narrow = DensityField::from_closure(
            Layout::Radial(grid),
            Arc::new(|r: f64| (-r * r / 2.0).exp() / (2.0 * PI).sqrt()),
            TailModel::Rapid,
        )
        .unwrap();
        let d = kl_divergence(&narrow, &wide).unwrap();
        assert!((d - (2f64.ln() + 0.125 - 0.5)).abs() < 1e-12);
        assert!(kl_divergence(&wide, &wide).unwrap().abs() < 1e-15);
    }

    #[test]
    fn tsallis_first_order() {
        let f = maxent(0.8, 1, 1.0);
        for &a in &[1.0 - 1e-5, 1.0 + 1e-5] {
            let s = tsallis_entropy(&f, a).unwrap();
            assert!((s - shannon_entropy(&f).unwrap()).abs() < 1e-4);
        }
        let a = 0.8;
        let h = renyi_entropy(&f, a).unwrap();
        let s = tsallis_entropy(&f, a).unwrap();
        assert!((s - (1.0 - ((1.0 - a) * h).exp()) / (a - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn g_forms_and_fisher() {
        let f = maxent(0.8, 1, 1.0);
        let g = g_functional(&f, 0.8).unwrap();
        assert!(g.deviation < 1e-9 * g.value);
        let fi = fisher_information_detail(&f, 0.8).unwrap();
        assert!((fi.value * fi.power_integral - g.value).abs() < 1e-12 * g.value);
        // v = 2f for the porous medium profile at alpha = 2
        let p = maxent(2.0, 1, 1.0);
        let g2 = g_functional(&p, 2.0).unwrap();
        assert!(g2.value.is_finite() && g2.deviation < 1e-9 * g2.value);
    }

    #[test]
    fn fisher_matches_entropy_rate() {
        // K⁻¹ I_α = δ at t = 1 on the self-similar family
        let regime = AlphaRegime::new(0.75, 1).unwrap();
        let p = MaxEntProfile::at_time(regime, 1.0).unwrap();
        let f = DensityField::from_maxent(&p, DEFAULT_NODES).unwrap();
        let i = fisher_information_alpha(&f, 0.75).unwrap();
        let c = p.constants();
        assert!(
            (i / c.k_coeff - c.delta).abs() < 1e-9,
            "{} vs {}",
            i / c.k_coeff,
            c.delta
        );
        let h = |t: f64| {
            let q = MaxEntProfile::at_time(regime, t).unwrap();
            renyi_entropy(&DensityField::from_maxent(&q, DEFAULT_NODES).unwrap(), 0.75).unwrap()
        };
        let rate = (h(1.0 + 1e-4) - h(1.0 - 1e-4)) / 2e-4;
        assert!((rate - c.delta).abs() < 1e-6);
    }

    #[test]
    fn finite_difference_gradient_agrees() {
        let f = maxent(0.8, 1, 1.0);
        let shape = f.shape().unwrap();
        let Layout::Radial(grid) = f.layout().clone() else {
            unreachable!()
        };
        let bare = DensityField::from_closure(
            Layout::Radial(grid),
            Arc::new(move |r| shape.value(r)),
            f.tail(),
        )
        .unwrap();
        let a = fisher_information_alpha(&f, 0.8).unwrap();
        let b = fisher_information_alpha(&bare, 0.8).unwrap();
        assert!((a - b).abs() < 1e-7 * a);
        let values =
            DensityField::from_values(f.layout().clone(), f.values().to_vec(), f.tail(), true)
                .unwrap();
        assert!(matches!(
            fisher_information_alpha(&values, 0.8),
            Err(Error::NoDerivative(_))
        ));
    }

    #[test]
    fn fisher_dilation() {
        let f = maxent(0.8, 1, 1.0);
        let i = fisher_information_alpha(&f, 1.0).unwrap();
        for &lam in &[0.5, 2.0, 3.0] {
            // x → λx with mass preserved: γ = 1, d = 1
            let fl = f.dilate(lam, 1.0).unwrap();
            let il = fisher_information_alpha(&fl, 1.0).unwrap();
            assert!((il / i - lam * lam).abs() < 1e-9);
        }
    }

    #[test]
    fn self_similar_entropy_power_linear() {
        let regime = AlphaRegime::new(0.75, 1).unwrap();
        let n = |t: f64| {
            let p = MaxEntProfile::at_time(regime, t).unwrap();
            entropy_power(
                &DensityField::from_maxent(&p, DEFAULT_NODES).unwrap(),
                0.75,
                1,
            )
            .unwrap()
        };
        let n1 = n(1.0);
        for &t in &[0.5, 2.0, 4.0] {
            assert!((n(t) / (t * n1) - 1.0).abs() < 1e-6);
        }
        let pme = maxent(2.0, 1, 1.0);
        let r = pme.shape().unwrap().support_radius();
        assert!((entropy_power(&pme, 0.0, 1).unwrap() - 2.0 * r).abs() < 1e-10);
    }

    #[test]
    fn report_consistency() {
        for &(a, d) in &[(0.75, 1), (2.0, 2), (1.0, 3), (0.9, 3)] {
            let f = if a == 1.0 {
                DensityField::from_zkb(
                    &ZkbProfile::new(AlphaRegime::new(1.0, d).unwrap(), 1.0).unwrap(),
                    256,
                )
                .unwrap()
            } else {
                maxent(a, d, 1.0)
            };
            let r = entropy_report(&f, a).unwrap();
            assert!(r.consistency_gap() < 1e-12);
            assert!((r.moments[&0] - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn relative_renyi_zero_on_diagonal() {
        let f = maxent(0.8, 1, 1.0);
        assert!(relative_renyi(&f, &f, 0.8).unwrap().abs() < 1e-13);
    }

    #[test]
    fn escort_kl_identity() {
        let f = maxent(0.8, 1, 1.0);
        let g = escort(&f, 0.8).unwrap();
        let d = kl_divergence(&g, &f).unwrap();
        let h1g = shannon_entropy(&g).unwrap();
        let ha = renyi_entropy(&f, 0.8).unwrap();
        assert!(d > 0.0);
        assert!((d - 0.25 * (h1g - ha)).abs() < 1e-10);
    }

    #[test]
    fn support_and_divergence_errors() {
        let pme = maxent(2.0, 1, 1.0);
        let wide = maxent(2.0, 1, 1.2);
        assert!(matches!(
            kl_divergence(&pme, &wide),
            Err(Error::GridMismatch(_))
        ));
        let Layout::Radial(grid) = wide.layout().clone() else {
            unreachable!()
        };
        let s = pme.shape().unwrap();
        let on_wide = DensityField::from_closure(
            Layout::Radial(grid),
            Arc::new(move |r| s.value(r)),
            TailModel::Compact,
        )
        .unwrap();
        assert!(matches!(
            kl_divergence(&wide, &on_wide),
            Err(Error::SupportViolation(_))
        ));
        let heavy = maxent(0.75, 1, 1.0);
        assert!(matches!(
            renyi_entropy(&heavy, 0.1),
            Err(Error::EntropyUndefined(_))
        ));
        assert!(matches!(moment(&heavy, 7), Err(Error::MomentDiverges(_))));
        assert!(entropy_power(&heavy, -1.0, 1).is_err());
    }
}
