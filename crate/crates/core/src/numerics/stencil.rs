use crate::error::{domain, Result};

/// Central finite-difference stencil of order 2 or 4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilSpec {
    order: u32,
    step: f64,
}

impl StencilSpec {
    pub fn new(order: u32, step: f64) -> Result<Self> {
        if order != 2 && order != 4 {
            return Err(domain(
                "StencilSpec",
                format!("order must be 2 or 4, got {order}"),
            ));
        }
        if !(step > 0.0 && step.is_finite()) {
            return Err(domain(
                "StencilSpec",
                format!("step must be positive, got {step}"),
            ));
        }
        Ok(Self { order, step })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    /// Same order with the step scaled by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            order: self.order,
            step: self.step * factor,
        }
    }

    pub fn first_derivative(&self, f: impl Fn(f64) -> f64, x: f64) -> f64 {
        let h = self.step;
        match self.order {
            2 => (f(x + h) - f(x - h)) / (2.0 * h),
            _ => (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h),
        }
    }

    pub fn second_derivative(&self, f: impl Fn(f64) -> f64, x: f64) -> f64 {
        let h = self.step;
        match self.order {
            2 => (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h),
            _ => {
                (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h))
                    / (12.0 * h * h)
            }
        }
    }

    /// Half-width of the stencil footprint.
    pub fn reach(&self) -> f64 {
        match self.order {
            2 => self.step,
            _ => 2.0 * self.step,
        }
    }
}

/// Richardson extrapolation of estimates at steps `h` and `h/2`.
pub fn richardson(coarse: f64, fine: f64, order: u32) -> f64 {
    let k = 2f64.powi(order as i32);
    fine + (fine - coarse) / (k - 1.0)
}

/// Observed convergence order from errors at consecutive halvings.
pub fn observed_order(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}
