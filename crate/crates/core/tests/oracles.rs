//! Independent numerical oracles agree with the closed forms.

use renyi_maxent::diffusion::{supnorm_compare, supnorm_gap, threshold_report};
use renyi_maxent::functionals::{renyi_entropy, DensityField};
use renyi_maxent::profiles::{AlphaRegime, MaxEntProfile};
use renyi_maxent::variational::{
    default_line_grid, numeric_maximize, numeric_maximize_shifted, solve_lagrange,
};
use std::cmp::Ordering;

#[test]
fn shifted_problem_matches_translated_closed_form() {
    for (a, mu1, mu2) in [(0.8, 1.5, 0.7), (2.0, -2.0, 1.3), (0.6, 0.4, 2.0)] {
        let grid = default_line_grid(a, mu1, mu2, 256).unwrap();
        let m = numeric_maximize_shifted(a, 1, mu1, mu2, &grid, 100, 1e-11).unwrap();
        let p = MaxEntProfile::shifted(AlphaRegime::new(a, 1).unwrap(), mu1, mu2).unwrap();
        assert!(m.l1_distance(&p).unwrap() < 1e-3);
        // multipliers agree with the closed-form solution
        let s = solve_lagrange(a, 1, mu1, mu2).unwrap();
        for (num, exact) in m
            .lambda_t
            .iter()
            .zip([s.lambda0_t, s.lambda1_t, s.lambda2_t])
        {
            assert!(
                (num - exact).abs() <= 1e-6 * exact.abs().max(1.0),
                "{num} vs {exact}"
            );
        }
    }
}

#[test]
fn porous_maximizer_support_within_one_cell() {
    let grid = default_line_grid(2.0, 0.0, 1.0, 256).unwrap();
    let m = numeric_maximize(2.0, 1, 1.0, &grid, 100, 1e-11).unwrap();
    let p = MaxEntProfile::centered(AlphaRegime::new(2.0, 1).unwrap(), 1.0).unwrap();
    let cell = grid
        .nodes()
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(0.0, f64::max);
    assert!((m.support_radius() - p.support_radius()).abs() < cell);
    assert!((p.support_radius() - 5f64.sqrt()).abs() < 1e-12);
}

#[test]
fn numeric_entropy_never_exceeds_closed_form() {
    for a in [0.7, 0.8, 1.5, 2.0] {
        let grid = default_line_grid(a, 0.0, 1.0, 256).unwrap();
        let m = numeric_maximize(a, 1, 1.0, &grid, 100, 1e-11).unwrap();
        let p = MaxEntProfile::centered(AlphaRegime::new(a, 1).unwrap(), 1.0).unwrap();
        let h = renyi_entropy(&DensityField::from_maxent(&p, 512).unwrap(), a).unwrap();
        assert!(m.entropy <= h + 1e-8, "alpha {a}: {} vs {h}", m.entropy);
    }
}

#[test]
fn supnorm_ordering_flips_once() {
    for d in 1..=3 {
        let root = threshold_report(d, 1e-10)
            .unwrap()
            .supnorm_crossing
            .unwrap();
        assert_eq!(
            supnorm_compare(root - 0.05, d, 1.0).unwrap().sign,
            Ordering::Less
        );
        assert_eq!(
            supnorm_compare(root + 0.05, d, 1.0).unwrap().sign,
            Ordering::Greater
        );
        // the ordering is time independent on the two self-similar families
        for t in [0.3, 3.0] {
            let g1 = supnorm_gap(root + 0.05, d, 1.0).unwrap();
            let gt = supnorm_gap(root + 0.05, d, t).unwrap();
            assert_eq!(g1.signum(), gt.signum());
        }
    }
}
