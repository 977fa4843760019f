use crate::error::{domain, Error, Result};
use crate::numerics::check_dimension;
use crate::profiles::{derive_constants, AlphaRegime, MaxEntProfile, ZkbProfile};
use serde::Serialize;
use std::cmp::Ordering;

/// Search interval for the porous medium threshold.
pub const THRESHOLD_BRACKET: (f64, f64) = (1.05, 4.0);
const MAX_BISECTIONS: usize = 200;

fn constant_gap(alpha: f64, d: u32) -> Result<f64> {
    let c = derive_constants(AlphaRegime::new(alpha, d)?)?;
    Ok(c.c_const - c.a_const)
}

/// `‖u(·,t)‖_∞ − ‖f(·,t)‖_∞` with `f` on the self-similar family.
pub fn supnorm_gap(alpha: f64, d: u32, t: f64) -> Result<f64> {
    let c = supnorm_compare(alpha, d, t)?;
    Ok(c.zkb - c.maxent)
}

fn bisect(g: impl Fn(f64) -> Result<f64>, tol: f64) -> Result<f64> {
    let (mut lo, mut hi) = THRESHOLD_BRACKET;
    let (mut g_lo, g_hi) = (g(lo)?, g(hi)?);
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::NoThreshold {
            lo,
            hi,
            f_lo: g_lo,
            f_hi: g_hi,
        });
    }
    for _ in 0..MAX_BISECTIONS {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let g_mid = g(mid)?;
        if g_mid == 0.0 {
            return Ok(mid);
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Root of `C_{α>1}(d) − A_{α>1}(d)` on [`THRESHOLD_BRACKET`] by bisection.
///
/// ```
/// use renyi_maxent::diffusion::threshold_alpha;
/// let a = threshold_alpha(1, 1e-10).unwrap();
/// assert!((a - 2.10062).abs() < 1e-4);
/// assert!(threshold_alpha(3, 1e-10).is_err());
/// ```
pub fn threshold_alpha(d: u32, tol: f64) -> Result<f64> {
    check_dimension(d)?;
    if !(tol > 0.0) {
        return Err(domain(
            "threshold_alpha",
            format!("tol must be positive, got {tol}"),
        ));
    }
    bisect(|a| constant_gap(a, d), tol)
}

/// Both crossings: the constant condition and the sup-norm ordering at `t = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdReport {
    pub dimension: u32,
    /// Root of `C − A`, if the bracket contains one.
    pub constant_crossing: Option<f64>,
    /// Root of `‖u(·,1)‖_∞ − ‖f(·,1)‖_∞`, i.e. `C^{1/(α−1)} = A`.
    pub supnorm_crossing: Option<f64>,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

pub fn threshold_report(d: u32, tol: f64) -> Result<ThresholdReport> {
    check_dimension(d)?;
    let (constant_crossing, note) = match threshold_alpha(d, tol) {
        Ok(a) => (Some(a), None),
        Err(e @ Error::NoThreshold { .. }) => (None, Some(e.to_string())),
        Err(e) => return Err(e),
    };
    let supnorm_crossing = match bisect(|a| supnorm_gap(a, d, 1.0), tol) {
        Ok(a) => Some(a),
        Err(Error::NoThreshold { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(ThresholdReport {
        dimension: d,
        constant_crossing,
        supnorm_crossing,
        tolerance: tol,
        note,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupNormComparison {
    pub alpha: f64,
    pub dimension: u32,
    pub time: f64,
    /// `‖f(·,t)‖_∞` on the self-similar maximizer family.
    pub maxent: f64,
    /// `‖u(·,t)‖_∞` of the source-type solution.
    pub zkb: f64,
    /// Ordering of `‖u‖_∞` relative to `‖f‖_∞`.
    #[serde(serialize_with = "ser_ordering")]
    pub sign: Ordering,
}

fn ser_ordering<S: serde::Serializer>(o: &Ordering, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_i8(*o as i8)
}

pub fn supnorm_compare(alpha: f64, d: u32, t: f64) -> Result<SupNormComparison> {
    let regime = AlphaRegime::new(alpha, d)?;
    let maxent = MaxEntProfile::at_time(regime, t)?.sup_norm();
    let zkb = ZkbProfile::new(regime, t)?.sup_norm();
    Ok(SupNormComparison {
        alpha,
        dimension: d,
        time: t,
        maxent,
        zkb,
        sign: zkb.partial_cmp(&maxent).unwrap_or(Ordering::Equal),
    })
}
