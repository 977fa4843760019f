use crate::diffusion::{
    concavity_integral_criterion, derivative_identities, entropy_power_concavity, pde_residual,
    pointwise_bounds, supnorm_compare, threshold_report, Family,
};
use crate::error::{Error, Result};
use crate::functionals::{verify_entropy_properties, DensityField};
use crate::numerics::{verify_integral_formulas, StencilSpec};
use crate::profiles::{AlphaRegime, MaxEntProfile, ZkbProfile};
use crate::report::{Check, ConformanceReport};
use crate::specfun::verify_appendix_identities;
use crate::variational::{
    default_line_grid, first_variation, global_max_certificate, lemma_witness,
    make_admissible_perturbation, numeric_maximize, numeric_maximize_shifted,
    second_variation_margin, solve_lagrange, verify_lagrange, PerturbationSpec,
};
use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::cmp::Ordering;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Specfun,
    Properties,
    Variational,
    Diffusion,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Specfun,
        Suite::Properties,
        Suite::Variational,
        Suite::Diffusion,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Properties => "properties",
            Suite::Variational => "variational",
            Suite::Diffusion => "diffusion",
        }
    }
}

/// Tolerance for the closed-form special-function and integral identities.
pub const IDENTITY_TOLERANCE: f64 = 1e-10;
/// Orders at which entropy properties are checked.
pub const PROPERTY_ALPHAS: [f64; 5] = [0.5, 0.8, 1.5, 2.0, 3.0];
/// Orders on the self-similar family used by the diffusion suite.
pub const DIFFUSION_ALPHAS: [f64; 4] = [0.75, 0.9, 1.5, 2.2];
/// Printed value of the `d = 1` porous-medium threshold and its tolerance.
pub const PRINTED_THRESHOLD: (f64, f64) = (1.8268, 0.005);

pub fn run_suite(suite: Suite, seed: u64) -> Result<ConformanceReport> {
    match suite {
        Suite::Specfun => specfun_suite(),
        Suite::Properties => properties_suite(),
        Suite::Variational => variational_suite(seed),
        Suite::Diffusion => diffusion_suite(),
    }
}

fn tagged(report: ConformanceReport, tag: &str) -> ConformanceReport {
    ConformanceReport {
        checks: report
            .checks
            .into_iter()
            .map(|mut c| {
                c.identity_name = format!("{tag}/{}", c.identity_name);
                c
            })
            .collect(),
    }
}

pub fn specfun_suite() -> Result<ConformanceReport> {
    let mut r = verify_appendix_identities(IDENTITY_TOLERANCE);
    r.extend(verify_integral_formulas(IDENTITY_TOLERANCE));
    Ok(r)
}

/// The density battery for entropy properties.
pub fn property_battery() -> Result<Vec<(String, DensityField)>> {
    let maxent = |a: f64, d: u32| -> Result<DensityField> {
        DensityField::from_maxent(&MaxEntProfile::centered(AlphaRegime::new(a, d)?, 1.0)?, 512)
    };
    Ok(vec![
        ("maxent_alpha0.8_d1".into(), maxent(0.8, 1)?),
        ("maxent_alpha2_d1".into(), maxent(2.0, 1)?),
        ("maxent_alpha0.9_d2".into(), maxent(0.9, 2)?),
        ("gaussian_d1".into(), maxent(1.0, 1)?),
        (
            "zkb_alpha2_d1".into(),
            DensityField::from_zkb(&ZkbProfile::new(AlphaRegime::new(2.0, 1)?, 1.0)?, 512)?,
        ),
    ])
}

pub fn properties_suite() -> Result<ConformanceReport> {
    let mut r = ConformanceReport::new();
    for (tag, f) in property_battery()? {
        r.extend(tagged(
            verify_entropy_properties(&f, &PROPERTY_ALPHAS),
            &tag,
        ));
    }
    Ok(r)
}

pub fn variational_suite(seed: u64) -> Result<ConformanceReport> {
    let mut r = ConformanceReport::new();
    for &(a, mu1, mu2) in &[
        (0.75, 0.0, 1.0),
        (2.0 / 3.0, 1.0, 1.0),
        (0.8, -0.5, 2.0),
        (2.0, 0.0, 1.0),
        (2.2, 0.3, 0.7),
    ] {
        let s = solve_lagrange(a, 1, mu1, mu2)?;
        r.extend(tagged(
            verify_lagrange(&s, 1e-10)?,
            &format!("lagrange[alpha={a:.4},mu1={mu1},mu2={mu2}]"),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_first: f64 = 0.0;
    let mut min_second = f64::INFINITY;
    for &(a, mu1) in &[
        (0.7, 0.0),
        (0.8, 0.0),
        (0.9, 0.0),
        (2.0, 0.0),
        (0.8, 1.2),
        (2.0, -0.5),
    ] {
        let p = MaxEntProfile::shifted(AlphaRegime::new(a, 1)?, mu1, 1.0)?;
        let f = DensityField::from_maxent_on_line(&p, 256)?;
        let grid = default_line_grid(a, mu1, 1.0, 256)?;
        let lag = solve_lagrange(a, 1, mu1, 1.0)?;
        let mut drawn = 0;
        while drawn < 20 {
            let terms = rng.gen_range(1..=3);
            let coeffs: Vec<f64> = (0..terms).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let spec = PerturbationSpec::new(
                coeffs,
                rng.gen_range(0.3..2.0),
                rng.gen_range(1.5..2.5),
                0.5,
            )?;
            let h = match make_admissible_perturbation(&spec, &p, &grid) {
                Ok(h) => h,
                Err(Error::Inadmissible(_) | Error::TailDominance(_)) => continue,
                Err(e) => return Err(e),
            };
            drawn += 1;
            worst_first = worst_first.max(first_variation(&f, &h, a, &lag)?.abs());
            if mu1 == 0.0 {
                min_second = min_second.min(second_variation_margin(&p, &h, a)?);
            }
        }
    }
    r.push(Check::hard(
        "first_variation_vanishes_at_maximizer",
        worst_first,
        1e-10,
    ));
    r.push(Check::hard_flag(
        "second_variation_margin_positive",
        min_second,
        min_second > 0.0,
    ));

    for a in [0.8, 2.0] {
        let c = global_max_certificate(a, 1, 100, seed)?;
        r.push(
            Check::hard_flag(
                format!("global_max_certificate[alpha={a}]"),
                c.min_margin,
                c.failures == 0,
            )
            .with_note(format!(
                "{}/{} trials pass",
                c.trials - c.failures,
                c.trials
            )),
        );
        for (mu1, mu2) in [(0.0, 1.0), (1.5, 0.7)] {
            let grid = default_line_grid(a, mu1, mu2, 256)?;
            let p = MaxEntProfile::shifted(AlphaRegime::new(a, 1)?, mu1, mu2)?;
            let m = if mu1 == 0.0 {
                numeric_maximize(a, 1, mu2, &grid, 100, 1e-11)?
            } else {
                numeric_maximize_shifted(a, 1, mu1, mu2, &grid, 100, 1e-11)?
            };
            let l1 = m.l1_distance(&p)?;
            r.push(Check::hard(
                format!("numeric_maximizer_matches_closed_form[alpha={a},mu1={mu1}]"),
                l1,
                1e-3,
            ));
        }
    }

    let grid = default_line_grid(0.8, 0.0, 1.0, 64)?;
    let mut lemma_ok = true;
    for _ in 0..50 {
        let mut v = vec![0.0; grid.len()];
        let i = rng.gen_range(1..grid.len() - 1);
        v[i] = rng.gen_range(-1.0..1.0);
        lemma_ok &= v[i] == 0.0 || lemma_witness(&v, &grid)?.is_some_and(|w| w.pairing != 0.0);
    }
    lemma_ok &= lemma_witness(&vec![0.0; grid.len()], &grid)?.is_none();
    r.push(Check::hard_flag(
        "zero_pairing_implies_zero_at_interior_nodes",
        0.0,
        lemma_ok,
    ));
    Ok(r)
}

pub fn diffusion_suite() -> Result<ConformanceReport> {
    let mut r = ConformanceReport::new();
    for &(a, d) in &[(0.75, 1), (2.2, 1), (0.9, 2)] {
        for family in [Family::MaxEnt, Family::Zkb] {
            let coarse = pde_residual(family, a, d, 1.0, StencilSpec::new(2, 1e-2)?)?;
            let fine = pde_residual(family, a, d, 1.0, StencilSpec::new(2, 1e-4)?)?;
            let tag = format!("{family:?}[alpha={a},d={d}]").to_lowercase();
            r.push(Check::hard(
                format!("pde_residual/{tag}"),
                fine.residual_norms[0],
                1e-6,
            ));
            r.push(Check::hard_flag(
                format!("pde_residual_observed_order/{tag}"),
                coarse.observed_order,
                coarse.observed_order >= 1.9,
            ));
        }
    }
    let samples: Vec<f64> = (0..40).map(|i| 0.1 * i as f64).collect();
    let times = [0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0];
    let cases: Vec<(f64, u32)> = DIFFUSION_ALPHAS
        .iter()
        .map(|&a| (a, 1))
        .chain([(0.9, 2), (1.5, 3)])
        .collect();
    for (a, d) in cases {
        let tag = format!("alpha={a},d={d}");
        r.extend(tagged(
            derivative_identities(a, d, 1.0)?,
            &format!("identities[{tag}]"),
        ));
        r.extend(tagged(
            pointwise_bounds(a, d, 1.0, &samples)?,
            &format!("bounds[{tag}]"),
        ));
        r.extend(tagged(
            entropy_power_concavity(a, d, &times)?.checks,
            &format!("concavity[{tag}]"),
        ));
        let name = format!("entropy_power_integral_criterion_nonnegative[{tag}]");
        r.push(match concavity_integral_criterion(a, d) {
            Ok(c) => Check::warning(name, (-c.value).max(0.0), 1e-10)
                .with_note(format!("integral = {:.6e}", c.value)),
            Err(e) => Check::warning(name, f64::INFINITY, 1e-10).with_note(e.to_string()),
        });
    }
    for d in 1..=3 {
        let t = threshold_report(d, 1e-10)?;
        if let Some(root) = t.supnorm_crossing {
            let below = supnorm_compare(root - 1e-3, d, 1.0)?.sign;
            let above = supnorm_compare(root + 1e-3, d, 1.0)?.sign;
            r.push(Check::hard_flag(
                format!("supnorm_ordering_switches_at_companion_root[d={d}]"),
                root,
                below == Ordering::Less && above == Ordering::Greater,
            ));
        }
        if d == 1 {
            let (printed, tol) = PRINTED_THRESHOLD;
            let dev = t
                .constant_crossing
                .map_or(f64::INFINITY, |a| (a - printed).abs());
            r.push(
                Check::warning("threshold_alpha_as_printed[d=1]", dev, tol).with_note(format!(
                    "constant crossing {:?}, sup-norm crossing {:?}",
                    t.constant_crossing, t.supnorm_crossing
                )),
            );
        }
    }
    Ok(r)
}
