use crate::numerics::Domain;

/// Radial profile `φ(r)` in closed form, with exact derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialShape {
    /// `amp · (1 + curv·r²)_+^{exp}`.
    Power { amp: f64, curv: f64, exp: f64 },
    /// `amp · exp(−r²/(2 var))`.
    Gaussian { amp: f64, var: f64 },
}

impl RadialShape {
    fn base(curv: f64, r: f64) -> f64 {
        1.0 + curv * r * r
    }

    pub fn value(&self, r: f64) -> f64 {
        match *self {
            RadialShape::Power { amp, curv, exp } => {
                let w = Self::base(curv, r);
                if w <= 0.0 {
                    0.0
                } else {
                    amp * w.powf(exp)
                }
            }
            RadialShape::Gaussian { amp, var } => amp * (-r * r / (2.0 * var)).exp(),
        }
    }

    /// `φ'(r)`.
    pub fn derivative(&self, r: f64) -> f64 {
        match *self {
            RadialShape::Power { amp, curv, exp } => {
                let w = Self::base(curv, r);
                if w <= 0.0 {
                    0.0
                } else {
                    2.0 * amp * exp * curv * r * w.powf(exp - 1.0)
                }
            }
            RadialShape::Gaussian { amp, var } => -r / var * amp * (-r * r / (2.0 * var)).exp(),
        }
    }

    /// `φ''(r)`.
    pub fn second_derivative(&self, r: f64) -> f64 {
        match *self {
            RadialShape::Power { amp, curv, exp } => {
                let w = Self::base(curv, r);
                if w <= 0.0 {
                    0.0
                } else {
                    2.0 * amp
                        * exp
                        * curv
                        * w.powf(exp - 2.0)
                        * (w + 2.0 * (exp - 1.0) * curv * r * r)
                }
            }
            RadialShape::Gaussian { amp, var } => {
                (r * r / var - 1.0) / var * amp * (-r * r / (2.0 * var)).exp()
            }
        }
    }

    /// `Δφ` in `ℝ^d` for the radial function.
    pub fn laplacian(&self, r: f64, d: u32) -> f64 {
        let df = d as f64;
        match *self {
            RadialShape::Power { amp, curv, exp } => {
                let w = Self::base(curv, r);
                if w <= 0.0 {
                    0.0
                } else {
                    2.0 * amp
                        * exp
                        * curv
                        * w.powf(exp - 2.0)
                        * (df * w + 2.0 * (exp - 1.0) * curv * r * r)
                }
            }
            RadialShape::Gaussian { amp, var } => {
                (r * r / var - df) / var * amp * (-r * r / (2.0 * var)).exp()
            }
        }
    }

    /// `Δ ln φ` inside the support.
    pub fn log_laplacian(&self, r: f64, d: u32) -> f64 {
        let df = d as f64;
        match *self {
            RadialShape::Power { curv, exp, .. } => {
                let w = Self::base(curv, r);
                exp * 2.0 * curv / (w * w) * (df + (df - 2.0) * curv * r * r)
            }
            RadialShape::Gaussian { var, .. } => -df / var,
        }
    }

    /// `φ^q`, again a radial shape.
    pub fn powf(&self, q: f64) -> RadialShape {
        match *self {
            RadialShape::Power { amp, curv, exp } => RadialShape::Power {
                amp: amp.powf(q),
                curv,
                exp: exp * q,
            },
            RadialShape::Gaussian { amp, var } => RadialShape::Gaussian {
                amp: amp.powf(q),
                var: var / q,
            },
        }
    }

    pub fn peak(&self) -> f64 {
        match *self {
            RadialShape::Power { amp, .. } | RadialShape::Gaussian { amp, .. } => amp,
        }
    }

    /// Radius of the support; infinite unless the profile is compact.
    pub fn support_radius(&self) -> f64 {
        match *self {
            RadialShape::Power { curv, .. } if curv < 0.0 => 1.0 / (-curv).sqrt(),
            _ => f64::INFINITY,
        }
    }

    /// Tail decay exponent `p` with `φ ~ r^{−p}`; `None` when compact or Gaussian.
    pub fn decay(&self) -> Option<f64> {
        match *self {
            RadialShape::Power { curv, exp, .. } if curv > 0.0 => Some(-2.0 * exp),
            _ => None,
        }
    }

    /// Integration domain suited to this shape. `decay_floor` lowers the
    /// certified decay so that powers `φ^q`, `q < 1`, are also covered.
    pub fn domain(&self, decay_floor: f64) -> Domain {
        match *self {
            RadialShape::Power { curv, exp, .. } if curv > 0.0 => {
                let core = 1.0 / (2.0 * (-exp) * curv).sqrt();
                let tail_scale = 1.0 / curv.sqrt();
                Domain::HalfLine {
                    core: core.min(tail_scale),
                    tail_scale,
                    decay: (-2.0 * exp).min(decay_floor.max(0.0)).max(0.0),
                }
            }
            RadialShape::Power { curv, .. } if curv < 0.0 => Domain::Compact {
                radius: 1.0 / (-curv).sqrt(),
            },
            RadialShape::Power { .. } => Domain::Compact { radius: 1.0 },
            RadialShape::Gaussian { var, .. } => Domain::GaussianTail { sigma: var.sqrt() },
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::StencilSpec;

    fn fd_checks(shape: RadialShape, d: u32, r: f64) {
        let s = StencilSpec::new(4, 1e-3).unwrap();
        let d1 = s.first_derivative(|x| shape.value(x), r);
        let d2 = s.second_derivative(|x| shape.value(x), r);
        let scale = shape.peak();
        assert!(
            (d1 - shape.derivative(r)).abs() < 1e-8 * scale,
            "{shape:?} d1 at {r}"
        );
        assert!(
            (d2 - shape.second_derivative(r)).abs() < 1e-7 * scale,
            "{shape:?} d2 at {r}"
        );
        let lap = d2 + (d as f64 - 1.0) / r * d1;
        assert!((lap - shape.laplacian(r, d)).abs() < 1e-7 * scale);
        let l1 = s.first_derivative(|x| shape.value(x).ln(), r);
        let l2 = s.second_derivative(|x| shape.value(x).ln(), r);
        let loglap = l2 + (d as f64 - 1.0) / r * l1;
        assert!((loglap - shape.log_laplacian(r, d)).abs() < 1e-6);
    }

    #[test]
    fn derivatives_match_differences() {
        let shapes = [
            RadialShape::Power {
                amp: 0.7,
                curv: 0.3,
                exp: -4.0,
            },
            RadialShape::Power {
                amp: 1.3,
                curv: -0.2,
                exp: 0.8333,
            },
            RadialShape::Power {
                amp: 1.3,
                curv: -0.2,
                exp: 2.5,
            },
            RadialShape::Gaussian { amp: 0.4, var: 1.7 },
        ];
        for shape in shapes {
            for d in 1..=3 {
                for &r in &[0.3, 0.9, 1.6] {
                    fd_checks(shape, d, r);
                }
            }
        }
    }

    #[test]
    fn power_of_shape() {
        let s = RadialShape::Power {
            amp: 0.7,
            curv: 0.3,
            exp: -4.0,
        };
        let q = s.powf(0.75);
        assert!((q.value(1.2) - s.value(1.2).powf(0.75)).abs() < 1e-15);
        let g = RadialShape::Gaussian { amp: 0.4, var: 1.7 };
        assert!((g.powf(2.0).value(0.8) - g.value(0.8).powi(2)).abs() < 1e-15);
    }

    #[test]
    fn compact_support() {
        let s = RadialShape::Power {
            amp: 1.0,
            curv: -0.25,
            exp: 1.0,
        };
        assert_eq!(s.support_radius(), 2.0);
        assert_eq!(s.value(2.5), 0.0);
        assert_eq!(s.derivative(2.5), 0.0);
    }
}
