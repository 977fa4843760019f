use crate::error::{Error, Result};
use crate::functionals::{relative_renyi, renyi_entropy, DensityField, Layout};
use crate::numerics::LineGrid;
use crate::profiles::{AlphaRegime, MaxEntProfile, Regime};
use crate::variational::{make_admissible_perturbation, PerturbationSpec};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;

/// Nodes (per half-line) of the grid each trial is sampled on.
pub const CERTIFICATE_NODES: usize = 384;
/// Allowed negative excursion of `D_α` and of `H_α[f̂] − H_α[g]`.
pub const CERTIFICATE_TOLERANCE: f64 = 1e-10;
const MAX_REDRAWS: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificateReport {
    pub alpha: f64,
    pub d: u32,
    pub trials: usize,
    pub failures: usize,
    /// Smallest `D_α(g‖f̂)` over the trials.
    pub min_margin: f64,
    /// Smallest `H_α[f̂] − H_α[g]` over the trials.
    pub min_entropy_gap: f64,
    pub seed: u64,
}

/// One matched-moment competitor: `g = (p + qφ)(f̂ + h + e)` with `h` an
/// admissible odd perturbation, `e = ηf̂cos(ωx/μ₂)` an even one, and
/// `φ = x²e^{−x²/2μ₂²}/μ₂²`; `(p, q)` restore `∫g = 1` and `∫x²g = μ₂²`.
fn draw(
    rng: &mut ChaCha8Rng,
    target: &MaxEntProfile,
    f_hat: &DensityField,
    grid: &LineGrid,
) -> Result<DensityField> {
    let mu2 = target.mu2();
    let shape = target.shape();
    for _ in 0..MAX_REDRAWS {
        let terms = rng.gen_range(1..=3);
        let coeffs: Vec<f64> = (0..terms)
            .map(|k| rng.gen_range(-1.0..1.0) / mu2.powi(2 * k + 1))
            .collect();
        let mu_exp = rng.gen_range(1.5..2.5);
        let b = rng.gen_range(0.3..2.0) / mu2.powf(mu_exp);
        let c = rng.gen_range(0.05..0.5);
        let spec = PerturbationSpec::new(coeffs, b, mu_exp, c)?;
        let h = match make_admissible_perturbation(&spec, target, grid) {
            Ok(h) => h,
            Err(Error::TailDominance(_) | Error::Inadmissible(_)) => continue,
            Err(e) => return Err(e),
        };
        let eta = rng.gen_range(-0.4..0.4) * (1.0 - c);
        let omega = rng.gen_range(0.5..3.0);
        let g0 = move |x: f64| {
            let f = shape.value(x.abs());
            f + h.value(x) + eta * f * (omega * x / mu2).cos()
        };
        let phi = move |x: f64| x * x / (mu2 * mu2) * (-0.5 * x * x / (mu2 * mu2)).exp();
        let base = f_hat.with_closure(Arc::new(g0.clone()), false)?;
        let m0 = base.integrate(|v, _| v)?;
        let m2 = base.integrate(|v, x| v * x * x)?;
        let p0 = base.integrate(|v, x| v * phi(x))?;
        let p2 = base.integrate(|v, x| v * phi(x) * x * x)?;
        let det = m0 * p2 - m2 * p0;
        let p = (p2 - mu2 * mu2 * p0) / det;
        let q = (mu2 * mu2 * m0 - m2) / det;
        // φ ∈ [0, 2/e]
        if p <= 0.0 || p + q * 2.0 / std::f64::consts::E <= 0.0 {
            continue;
        }
        let g = move |x: f64| (p + q * phi(x)) * g0(x);
        return f_hat.with_closure(Arc::new(g), true);
    }
    Err(Error::Inadmissible(
        "no admissible competitor after repeated draws".into(),
    ))
}

/// Checks `D_α(g‖f̂) ≥ 0` and `H_α[g] ≤ H_α[f̂]` for `trials` seeded
/// competitors with the same normalization and second moment (`d = 1`).
pub fn global_max_certificate(
    alpha: f64,
    d: u32,
    trials: usize,
    seed: u64,
) -> Result<CertificateReport> {
    if d != 1 {
        return Err(Error::Dimension(d));
    }
    if trials == 0 {
        return Err(crate::error::domain(
            "global_max_certificate",
            "need at least one trial",
        ));
    }
    let regime = AlphaRegime::new(alpha, 1)?;
    if regime.regime() == Regime::ShannonLimit {
        return Err(crate::error::domain(
            "global_max_certificate",
            "alpha = 1 is not covered",
        ));
    }
    let target = MaxEntProfile::centered(regime, 1.0)?;
    let f_hat = DensityField::from_maxent_on_line(&target, CERTIFICATE_NODES)?;
    let Layout::Line(grid) = f_hat.layout().clone() else {
        unreachable!("line layout requested")
    };
    let h_hat = renyi_entropy(&f_hat, alpha)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    let mut min_margin = f64::INFINITY;
    let mut min_gap = f64::INFINITY;
    for _ in 0..trials {
        let g = draw(&mut rng, &target, &f_hat, &grid)?;
        let dv = relative_renyi(&g, &f_hat, alpha)?;
        let gap = h_hat - renyi_entropy(&g, alpha)?;
        if dv < -CERTIFICATE_TOLERANCE || gap < -CERTIFICATE_TOLERANCE {
            failures += 1;
        }
        min_margin = min_margin.min(dv);
        min_gap = min_gap.min(gap);
    }
    Ok(CertificateReport {
        alpha,
        d,
        trials,
        failures,
        min_margin,
        min_entropy_gap: min_gap,
        seed,
    })
}

/// A test function with nonzero pairing against a grid function.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaWitness {
    pub node: usize,
    pub a: f64,
    pub b: f64,
    pub pairing: f64,
}

/// Discrete form of the fundamental lemma: if `values` is nonzero at an
/// interior node, the bump `(x−a)(b−x)e^{−(x−xᵢ)²}` on the cell `(a, b)` around node `xᵢ`
/// pairs nonzero with `values`. `None` means the function vanishes at every
/// interior node, i.e. it pairs to zero with the whole family.
pub fn lemma_witness(values: &[f64], grid: &LineGrid) -> Result<Option<LemmaWitness>> {
    let x = grid.nodes();
    if values.len() != x.len() {
        return Err(Error::GridMismatch(format!(
            "{} values for {} nodes",
            values.len(),
            x.len()
        )));
    }
    for i in 1..x.len().saturating_sub(1) {
        if values[i] == 0.0 {
            continue;
        }
        let a = 0.5 * (x[i - 1] + x[i]);
        let b = 0.5 * (x[i] + x[i + 1]);
        let test = |t: f64| {
            if t > a && t < b {
                (t - a) * (b - t) * (-(t - x[i]) * (t - x[i])).exp()
            } else {
                0.0
            }
        };
        let pairing: f64 = x
            .iter()
            .zip(grid.weights())
            .zip(values)
            .map(|((&t, &w), &v)| w * test(t) * v)
            .sum();
        return Ok(Some(LemmaWitness {
            node: i,
            a,
            b,
            pairing,
        }));
    }
    Ok(None)
}
