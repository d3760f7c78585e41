//! Two-sided estimates of `∫ t^{±α} (1 - Log t)^β dt` against their
//! endpoint values.

use serde::Serialize;

use super::{u_of, LogWeight};
use crate::error::{Error, Result};

const REL_TOL: f64 = 1e-12;
const MAX_DEPTH: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundProbe {
    pub a: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogBoundsReport {
    pub alpha: f64,
    pub beta: f64,
    /// `∫_0^a t^{-α}(1 - Log t)^β dt / [a^{1-α} (1 - Log a)^β]`
    pub head: Vec<BoundProbe>,
    /// `∫_a^1 t^α (1 - Log t)^β dt / [a^{α+1} (1 - Log a)^β]`, only for `α < -1`.
    pub tail: Vec<BoundProbe>,
    pub max_head_ratio: f64,
    pub max_tail_ratio: Option<f64>,
    /// `1/(1-α)`, present when `β >= 0`.
    pub lower_bound: Option<f64>,
    /// Probes whose head ratio fell below `lower_bound` (relative slack 1e-9).
    pub lower_bound_violations: Vec<f64>,
}

/// Ratios of the weighted integrals to their endpoint values on every `a`
/// in `a_grid`.
pub fn log_integral_bounds_check(alpha: f64, beta: f64, a_grid: &[f64]) -> Result<LogBoundsReport> {
    if !alpha.is_finite() || !beta.is_finite() {
        return Err(Error::NonFiniteInput(format!("exponents ({alpha}, {beta})")));
    }
    if !(alpha < 1.0) {
        return Err(Error::BadExponent(format!("alpha = {alpha} must be below 1")));
    }
    if let Some(&a) = a_grid.iter().find(|&&a| !(a > 0.0 && a < 1.0)) {
        return Err(Error::BadPoint(a));
    }
    let head_w = LogWeight { a: -alpha, b: beta };
    let tail_w = LogWeight { a: alpha, b: beta };
    let mut head = Vec::with_capacity(a_grid.len());
    let mut tail = Vec::new();
    for &a in a_grid {
        let u = u_of(a);
        let num = head_w.integral_u(u, f64::INFINITY, REL_TOL, MAX_DEPTH)?;
        let den = ((1.0 - alpha) * a.ln() + beta * u.ln()).exp();
        head.push(BoundProbe { a, ratio: num / den });
        if alpha < -1.0 {
            let num = tail_w.integral_u(1.0, u, REL_TOL, MAX_DEPTH)?;
            let den = ((alpha + 1.0) * a.ln() + beta * u.ln()).exp();
            tail.push(BoundProbe { a, ratio: num / den });
        }
    }
    let max_head_ratio = head.iter().map(|p| p.ratio).fold(f64::NEG_INFINITY, f64::max);
    let max_tail_ratio = (!tail.is_empty()).then(|| tail.iter().map(|p| p.ratio).fold(f64::NEG_INFINITY, f64::max));
    let lower_bound = (beta >= 0.0).then(|| 1.0 / (1.0 - alpha));
    let lower_bound_violations = match lower_bound {
        Some(lb) => head.iter().filter(|p| p.ratio < lb * (1.0 - 1e-9)).map(|p| p.a).collect(),
        None => Vec::new(),
    };
    Ok(LogBoundsReport {
        alpha,
        beta,
        head,
        tail,
        max_head_ratio,
        max_tail_ratio,
        lower_bound,
        lower_bound_violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unweighted_ratio_is_one() {
        let r = log_integral_bounds_check(0.0, 0.0, &[0.01, 0.3, 0.9]).unwrap();
        for p in &r.head {
            assert!((p.ratio - 1.0).abs() < 1e-14);
        }
        assert!(r.lower_bound_violations.is_empty());
    }

    #[test]
    fn linear_log() {
        let a = (-1f64).exp();
        let r = log_integral_bounds_check(0.0, 1.0, &[a]).unwrap();
        assert!((r.head[0].ratio - 1.5).abs() < 1e-10);
    }

    #[test]
    fn tail_branch() {
        let r = log_integral_bounds_check(-2.0, 0.0, &[0.1]).unwrap();
        assert!((r.tail[0].ratio - 0.9).abs() < 1e-12);
        assert!(r.max_tail_ratio.is_some());
        assert!(log_integral_bounds_check(-0.5, 0.0, &[0.1]).unwrap().tail.is_empty());
    }

    #[test]
    fn rejects_alpha_at_least_one() {
        assert!(matches!(log_integral_bounds_check(1.0, 0.0, &[0.5]), Err(Error::BadExponent(_))));
    }
}
