//! Variational machinery for the one-dimensional moment problem: admissible
//! perturbations, first and second variations, closed-form multipliers, an
//! independent numerical maximizer and the relative-entropy certificate.

mod certificate;
mod lagrange;
mod maximize;
mod perturbation;

pub use certificate::{
    global_max_certificate, lemma_witness, CertificateReport, LemmaWitness, CERTIFICATE_NODES,
    CERTIFICATE_TOLERANCE,
};
pub use lagrange::{solve_lagrange, verify_lagrange, LagrangeSolution};
pub use maximize::{
    default_line_grid, numeric_maximize, numeric_maximize_ascent, numeric_maximize_shifted,
    AscentResult, NumericMaximum,
};
pub use perturbation::{
    first_variation, make_admissible_perturbation, second_variation_margin, Perturbation,
    PerturbationSpec,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::DensityField;
    use crate::profiles::{AlphaRegime, MaxEntProfile};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn setup(alpha: f64, mu1: f64) -> (MaxEntProfile, DensityField, crate::numerics::LineGrid) {
        let p = MaxEntProfile::shifted(AlphaRegime::new(alpha, 1).unwrap(), mu1, 1.0).unwrap();
        let f = DensityField::from_maxent_on_line(&p, 256).unwrap();
        let grid = default_line_grid(alpha, mu1, 1.0, 256).unwrap();
        (p, f, grid)
    }

    #[test]
    fn odd_perturbation_moments() {
        let (p, _, grid) = setup(0.8, 0.0);
        let h = make_admissible_perturbation(
            &PerturbationSpec::new(vec![1.0], 1.0, 2.0, 0.5).unwrap(),
            &p,
            &grid,
        )
        .unwrap();
        assert!(h.moment(0).abs() < 1e-14 && h.moment(2).abs() < 1e-14);
        let spec = PerturbationSpec::new(vec![-1.0, 1.0], 0.5, 2.0, 0.5).unwrap();
        let h = make_admissible_perturbation(&spec, &p, &grid).unwrap();
        let ratio = grid
            .nodes()
            .iter()
            .zip(h.values())
            .map(|(&x, &v)| v.abs() / p.pdf(&[x]))
            .fold(0.0, f64::max);
        assert!(ratio < 0.5 && (ratio - h.max_ratio()).abs() < 1e-15);
    }

    #[test]
    fn slow_decay_rejected() {
        let (p, _, grid) = setup(0.8, 0.0);
        // e^{−0.01|x|^{0.1}} is far heavier than the target tail
        let spec = PerturbationSpec::new(vec![1.0], 0.01, 0.1, 0.5).unwrap();
        assert!(matches!(
            make_admissible_perturbation(&spec, &p, &grid),
            Err(crate::Error::TailDominance(_))
        ));
    }

    #[test]
    fn bad_spec_rejected() {
        assert!(PerturbationSpec::new(vec![], 1.0, 2.0, 0.5).is_err());
        assert!(PerturbationSpec::new(vec![1.0], -1.0, 2.0, 0.5).is_err());
        assert!(PerturbationSpec::new(vec![1.0], 1.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn stationarity_at_the_maximizer() {
        for (a, mu1) in [(0.8, 0.0), (0.7, 0.0), (2.0, 0.0), (0.8, 1.2), (2.0, -0.5)] {
            let (p, f, grid) = setup(a, mu1);
            let lag = solve_lagrange(a, 1, mu1, 1.0).unwrap();
            // a lone linear term is removed entirely by the mean correction when μ₁ ≠ 0
            for coeffs in [vec![1.0], vec![-1.0, 1.0], vec![0.3, -0.2, 0.05]]
                .into_iter()
                .skip(usize::from(mu1 != 0.0))
            {
                let h = make_admissible_perturbation(
                    &PerturbationSpec::new(coeffs, 0.7, 2.0, 0.5).unwrap(),
                    &p,
                    &grid,
                )
                .unwrap();
                let v = first_variation(&f, &h, a, &lag).unwrap();
                assert!(v.abs() < 1e-10, "alpha {a} mu1 {mu1}: {v}");
            }
        }
    }

    #[test]
    fn perturbed_density_is_not_stationary() {
        let (p, f, grid) = setup(0.8, 0.0);
        let lag = solve_lagrange(0.8, 1, 0.0, 1.0).unwrap();
        let h = make_admissible_perturbation(
            &PerturbationSpec::new(vec![1.0], 1.0, 2.0, 0.5).unwrap(),
            &p,
            &grid,
        )
        .unwrap();
        let hv = h.clone();
        let shape = p.shape();
        let g = f
            .with_closure(
                Arc::new(move |x| shape.value(x.abs()) + 1e-2 * hv.value(x)),
                true,
            )
            .unwrap();
        let v = first_variation(&g, &h, 0.8, &lag).unwrap();
        assert!(v.abs() > 1e-6 && v.abs() < 1e-1, "{v}");
        let zero = Perturbation::zero(&grid);
        assert_eq!(first_variation(&g, &zero, 0.8, &lag).unwrap(), 0.0);
    }

    #[test]
    fn second_variation_positive() {
        let (p, _, grid) = setup(0.8, 0.0);
        let h = make_admissible_perturbation(
            &PerturbationSpec::new(vec![1.0], 1.0, 2.0, 0.5).unwrap(),
            &p,
            &grid,
        )
        .unwrap();
        assert!(second_variation_margin(&p, &h, 0.8).unwrap() > 0.0);
        assert_eq!(
            second_variation_margin(&p, &Perturbation::zero(&grid), 0.8).unwrap(),
            0.0
        );

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for a in [0.7, 0.8, 0.9, 2.0] {
            let (p, _, grid) = setup(a, 0.0);
            for _ in 0..20 {
                let coeffs: Vec<f64> = (0..rng.gen_range(1..=3))
                    .map(|_| rng.gen_range(-1.0..1.0))
                    .collect();
                let spec = PerturbationSpec::new(
                    coeffs,
                    rng.gen_range(0.3..2.0),
                    rng.gen_range(1.5..2.5),
                    0.5,
                )
                .unwrap();
                let h = make_admissible_perturbation(&spec, &p, &grid).unwrap();
                assert!(second_variation_margin(&p, &h, a).unwrap() > 0.0);
            }
        }
    }
}
