use crate::error::{domain, Result};
use crate::profiles::{AlphaRegime, MaxEntProfile, RadialShape, ZkbProfile};
use crate::report::{Check, ConformanceReport};

/// `Δv` for `v = α f^{α−1}/(α−1)`, or `Δ ln f` at `α = 1`.
fn pressure_laplacian(shape: RadialShape, alpha: f64, r: f64, d: u32) -> f64 {
    if alpha == 1.0 {
        shape.log_laplacian(r, d)
    } else {
        alpha / (alpha - 1.0) * shape.powf(alpha - 1.0).laplacian(r, d)
    }
}

fn min_margin(shape: RadialShape, alpha: f64, d: u32, bound: f64, radii: &[f64]) -> (f64, usize) {
    let edge = shape.support_radius();
    let mut worst = f64::INFINITY;
    let mut used = 0;
    for &r in radii {
        if r.abs() >= edge {
            continue;
        }
        used += 1;
        worst = worst.min(pressure_laplacian(shape, alpha, r.abs(), d) - bound);
    }
    (worst, used)
}

/// Aronson–Bénilan lower bound on `Δ(α u^{α−1}/(α−1))` and the Li–Yau bound
/// on `Δ ln u`, at the given radii.
pub fn pointwise_bounds(
    alpha: f64,
    d: u32,
    t: f64,
    sample_points: &[f64],
) -> Result<ConformanceReport> {
    if !(t > 0.0) {
        return Err(domain(
            "pointwise_bounds",
            format!("t must be positive, got {t}"),
        ));
    }
    let df = d as f64;
    if alpha <= 1.0 - 2.0 / df {
        return Err(domain(
            "pointwise_bounds",
            format!("needs alpha > 1 - 2/d, got {alpha}"),
        ));
    }
    let regime = AlphaRegime::new(alpha, d)?;
    let bound = -df / ((df * (alpha - 1.0) + 2.0) * t);
    let tol = 1e-12 * bound.abs();
    let mut report = ConformanceReport::new();

    let u = ZkbProfile::new(regime, t)?.shape();
    let (m, n) = min_margin(u, alpha, d, bound, sample_points);
    let name = if alpha == 1.0 {
        "li_yau_heat_kernel"
    } else {
        "aronson_benilan_source_solution"
    };
    report.push(Check::hard_flag(name, m, m >= -tol).with_note(format!("{n} interior points")));
    if alpha != 1.0 {
        let heat = ZkbProfile::new(AlphaRegime::new(1.0, d)?, t)?.shape();
        let (m, n) = min_margin(heat, 1.0, d, -df / (2.0 * t), sample_points);
        report.push(
            Check::hard_flag("li_yau_heat_kernel", m, m >= -tol)
                .with_note(format!("{n} interior points")),
        );
    }

    // the maximizer family runs on the clock t/K
    let f = MaxEntProfile::at_time(regime, t)?;
    let k = f.constants().k_coeff;
    let (m, n) = min_margin(f.shape(), alpha, d, bound, sample_points);
    report.push(
        Check::warning("aronson_benilan_maxent_family", -m.min(0.0), tol).with_note(format!(
            "{n} interior points; family solves K df/dt = lap f^alpha with K = {k:.6}"
        )),
    );
    let (m, _) = min_margin(f.shape(), alpha, d, k * bound, sample_points);
    report.push(Check::hard_flag(
        "aronson_benilan_maxent_family_rescaled_time",
        m,
        m >= -tol * k.max(1.0),
    ));
    Ok(report)
}
