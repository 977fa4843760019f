use super::{escort, kl_divergence, renyi_entropy, shannon_entropy, DensityField, TailModel};
use crate::report::{rel_dev, Check, ConformanceReport};

/// Dilation factors used by the scaling check.
pub const PROPERTY_DILATIONS: [f64; 3] = [0.5, 2.0, 10.0];
const DILATION_GAMMA: f64 = 0.5;
const SHANNON_STEP: f64 = 1e-4;
const ALPHA_STEP: f64 = 1e-4;

/// Property checks for the Rényi entropy of a fixed normalized density.
///
/// `alphas` is the sample used for monotonicity and the escort identities;
/// orders where `H_α` diverges are skipped and noted.
pub fn verify_entropy_properties(f: &DensityField, alphas: &[f64]) -> ConformanceReport {
    let mut report = ConformanceReport::new();
    let mut sorted: Vec<f64> = alphas
        .iter()
        .copied()
        .filter(|a| *a > 0.0 && a.is_finite())
        .collect();
    sorted.sort_by(f64::total_cmp);
    sorted.dedup();

    // monotonicity in alpha
    let mut hs = Vec::new();
    for &a in &sorted {
        match renyi_entropy(f, a) {
            Ok(h) => hs.push((a, h)),
            Err(e) => report.push(
                Check::warning(
                    format!("renyi_entropy_defined[alpha={a}]"),
                    f64::INFINITY,
                    0.0,
                )
                .with_note(e.to_string()),
            ),
        }
    }
    let rise = hs
        .windows(2)
        .map(|w| w[1].1 - w[0].1)
        .fold(f64::NEG_INFINITY, f64::max);
    let rise = if hs.len() < 2 { 0.0 } else { rise };
    report.push(Check::hard_flag(
        "renyi_entropy_nonincreasing_in_alpha",
        rise,
        rise <= 1e-10,
    ));

    let shannon = shannon_entropy(f);
    for &(a, ha) in &hs {
        if (a - 1.0).abs() < 0.05 {
            continue;
        }
        let tag = format!("alpha={a}");
        let g = match escort(f, a) {
            Ok(g) => g,
            Err(e) => {
                report.push(
                    Check::warning(format!("escort_defined[{tag}]"), f64::INFINITY, 0.0)
                        .with_note(e.to_string()),
                );
                continue;
            }
        };
        let (Ok(d), Ok(h1g)) = (kl_divergence(&g, f), shannon_entropy(&g)) else {
            continue;
        };
        let exact = (1.0 - a) / a * (h1g - ha);
        report.push(Check::hard(
            format!("kl_escort_identity[{tag}]"),
            rel_dev(d, exact),
            1e-8,
        ));
        report.push(Check::hard_flag(
            format!("kl_escort_positive[{tag}]"),
            d,
            d > 0.0,
        ));
        // the printed two-sided bound, reversed for alpha > 1
        let bound = h1g - (2.0 - a) * ha;
        let holds = if a < 1.0 { d < bound } else { d > bound };
        let side = g.mass() - f.mass();
        report.push(
            Check::warning(format!("kl_escort_printed_bound[{tag}]"), d - bound, 0.0)
                .pass_if(holds)
                .with_note(format!(
                    "D = {d:.6e}, bound = {bound:.6e}, side condition int(g - f) = {side:.3e}"
                )),
        );
        // derivative in alpha
        if let (Ok(hp), Ok(hm)) = (
            renyi_entropy(f, a + ALPHA_STEP),
            renyi_entropy(f, a - ALPHA_STEP),
        ) {
            let fd = (hp - hm) / (2.0 * ALPHA_STEP);
            let exact = -d / (1.0 - a).powi(2);
            report.push(Check::hard(
                format!("renyi_alpha_derivative[{tag}]"),
                rel_dev(fd, exact),
                1e-6,
            ));
            let printed = ((2.0 - a) * ha + d - h1g) / (a * (1.0 - a));
            report.push(Check::warning(
                format!("renyi_alpha_derivative_as_printed[{tag}]"),
                rel_dev(fd, printed),
                1e-6,
            ));
        }
    }

    // Shannon limit
    if let (Ok(h1), Ok(lo), Ok(hi)) = (
        shannon.clone(),
        renyi_entropy(f, 1.0 - SHANNON_STEP),
        renyi_entropy(f, 1.0 + SHANNON_STEP),
    ) {
        let gap = (lo - h1).abs().max((h1 - hi).abs());
        report.push(Check::hard_flag(
            "shannon_limit_bracket",
            gap,
            lo >= h1 && h1 >= hi && gap < 1e-3,
        ));
    }

    // alpha -> 0 and Jensen, for compact support only
    if f.tail() == TailModel::Compact {
        let ln_mu = f.support_measure().ln();
        if let Ok(h0) = renyi_entropy(f, 1e-7) {
            report.push(Check::hard(
                "renyi_zero_limit_log_support",
                (h0 - ln_mu).abs(),
                1e-4,
            ));
        }
        let mut worst: f64 = f64::NEG_INFINITY;
        let mut reversed_ok = true;
        let mut reversed_margin: f64 = f64::INFINITY;
        for &(a, ha) in &hs {
            worst = worst.max(ha - ln_mu);
            if a > 1.0 {
                reversed_ok &= ha > ln_mu;
                reversed_margin = reversed_margin.min(ha - ln_mu);
            }
        }
        if !hs.is_empty() {
            report.push(Check::hard_flag(
                "renyi_below_log_support_measure",
                worst,
                worst < 0.0,
            ));
        }
        if reversed_margin.is_finite() {
            report.push(
                Check::warning(
                    "renyi_above_log_support_for_alpha_gt_1_as_printed",
                    reversed_margin,
                    0.0,
                )
                .pass_if(reversed_ok)
                .with_note("Jensen gives H_alpha <= ln mu(supp) for every alpha"),
            );
        }
    }

    // alpha -> infinity
    let sup = f.sup_norm();
    let gaps: Vec<f64> = [10.0, 100.0, 1000.0]
        .iter()
        .filter_map(|&a| renyi_entropy(f, a).ok())
        .map(|h| h + sup.ln())
        .collect();
    if gaps.len() == 3 {
        let ok = gaps[0] >= gaps[1] && gaps[1] >= gaps[2] && gaps[2] >= -1e-10 && gaps[2] < 0.02;
        report.push(Check::hard_flag(
            "renyi_infinity_limit_neg_log_sup_norm",
            gaps[2],
            ok,
        ));
        let h = gaps[2] - sup.ln();
        report.push(Check::warning(
            "renyi_infinity_limit_sup_norm_as_printed",
            (h - sup).abs(),
            0.02,
        ));
    }

    // dilation scaling
    if let Ok(base) = renyi_entropy(f, dilation_order(&hs)) {
        let a = dilation_order(&hs);
        let delta = f.dimension() as f64 * DILATION_GAMMA;
        let mut worst: f64 = 0.0;
        let mut failed = None;
        for &lam in &PROPERTY_DILATIONS {
            match f
                .dilate(lam, DILATION_GAMMA)
                .and_then(|fl| renyi_entropy(&fl, a))
            {
                Ok(h) => worst = worst.max((h - base + delta * lam.ln()).abs()),
                Err(e) => failed = Some(e.to_string()),
            }
        }
        let check = Check::hard("renyi_dilation_scaling", worst, 1e-9);
        report.push(match failed {
            Some(e) => {
                Check::hard_flag("renyi_dilation_scaling", f64::INFINITY, false).with_note(e)
            }
            None => check,
        });
    }
    report
}

fn dilation_order(hs: &[(f64, f64)]) -> f64 {
    hs.iter().map(|p| p.0).find(|&a| a != 1.0).unwrap_or(0.8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::DEFAULT_NODES;
    use crate::profiles::{AlphaRegime, MaxEntProfile};

    fn field(alpha: f64) -> DensityField {
        let p = MaxEntProfile::centered(AlphaRegime::new(alpha, 1).unwrap(), 1.0).unwrap();
        DensityField::from_maxent(&p, DEFAULT_NODES).unwrap()
    }

    #[test]
    fn porous_medium_properties() {
        let r = verify_entropy_properties(&field(2.0), &[0.5, 0.8, 1.2, 2.0, 5.0]);
        for c in &r.checks {
            eprintln!("{c:?}");
        }
        assert!(r.all_hard_pass());
        assert!(
            !r.get("renyi_above_log_support_for_alpha_gt_1_as_printed")
                .unwrap()
                .pass
        );
    }

    #[test]
    fn fast_diffusion_properties() {
        let r = verify_entropy_properties(&field(0.8), &[0.8, 1.2, 2.0, 5.0]);
        for c in &r.checks {
            eprintln!("{c:?}");
        }
        assert!(r.all_hard_pass());
        assert!(!r.get("kl_escort_printed_bound[alpha=0.8]").unwrap().pass);
    }
}
