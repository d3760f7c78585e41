//! Inversion of the monotone maps `t ↦ t^a (1 - Log t)^b`.

use serde::Serialize;

use super::{t_of, u_of, LogWeight};
use crate::error::{Error, Result};

/// Largest `u` probed by the bisections (t ≈ e^{-699}).
const U_CEILING: f64 = 700.0;

/// A weight restricted to its increasing range and normalized to map
/// `[0, 1]` onto `[0, 1]`: `g(t) = Φ(t t_0) / Φ(t_0)`, where `t_0` is the end
/// of the interval on which `Φ` increases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MonotoneMap {
    weight: LogWeight,
    t0: f64,
    /// `-Log t_0 >= 0`: shift between `u` of `t` and `u` of `t t_0`.
    shift: f64,
    ln_phi_t0: f64,
}

impl MonotoneMap {
    /// Requires `a > 0`, or `a = 0` with `b < 0`.
    pub fn new(weight: LogWeight) -> Result<Self> {
        let LogWeight { a, b } = weight;
        if !(a > 0.0 || (a == 0.0 && b < 0.0)) {
            return Err(Error::BadExponent(format!(
                "t^{a} (1 - Log t)^{b} is not increasing near 0"
            )));
        }
        let shift = if a > 0.0 && a < b { (b - a) / a } else { 0.0 };
        let t0 = (-shift).exp();
        let ln_phi_t0 = weight.ln_value_u(1.0 + shift);
        Ok(Self { weight, t0, shift, ln_phi_t0 })
    }

    /// `φ_1`-map: `(1 - Log t)^{-1}`, whose inverse is `e^{1 - 1/t}`.
    pub fn log_reciprocal() -> Self {
        Self::new(LogWeight { a: 0.0, b: -1.0 }).expect("valid")
    }

    pub fn weight(&self) -> LogWeight {
        self.weight
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    fn ln_forward_u(&self, u: f64) -> f64 {
        self.weight.ln_value_u(u + self.shift) - self.ln_phi_t0
    }

    /// `g(t)` for `t` in `[0, 1]`.
    pub fn forward(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::OutOfRange { y: t });
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        Ok(self.ln_forward_u(u_of(t)).exp())
    }

    /// `Φ(t_0)`, the largest value of the weight on its increasing range.
    pub fn peak(&self) -> f64 {
        self.ln_phi_t0.exp()
    }

    /// `Φ(t)` itself for `t` in `(0, t_0]`.
    pub fn weight_at(&self, t: f64) -> f64 {
        self.weight.value(t)
    }

    /// The root `φ(y)` of `Φ(φ) = y` on `(0, t_0]`, for `0 <= y <= Φ(t_0)`.
    pub fn solve(&self, y: f64) -> Result<f64> {
        let peak = self.peak();
        if !(y >= 0.0 && y <= peak * (1.0 + 1e-15)) {
            return Err(Error::OutOfRange { y });
        }
        Ok(self.t0 * self.inverse((y / peak).min(1.0))?)
    }

    /// `g^{-1}(y)` for `y` in `[0, 1]`.
    pub fn inverse(&self, y: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&y) || y.is_nan() {
            return Err(Error::OutOfRange { y });
        }
        if y == 0.0 {
            return Ok(0.0);
        }
        if y == 1.0 {
            return Ok(1.0);
        }
        let target = y.ln();
        let LogWeight { a, b } = self.weight;
        if a == 0.0 {
            // u^b = y
            return Ok(t_of((target / b).exp()));
        }
        // ln g decreases in u; bracket then bisect
        let mut lo = 1.0;
        let mut hi = 2.0;
        while self.ln_forward_u(hi) > target {
            lo = hi;
            hi *= 2.0;
            if hi > 1e300 {
                return Err(Error::OutOfRange { y });
            }
        }
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.ln_forward_u(mid) > target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let u = if (self.ln_forward_u(lo) - target).abs() <= (self.ln_forward_u(hi) - target).abs() {
            lo
        } else {
            hi
        };
        Ok(t_of(u))
    }
}

/// Solves `psi(t) = y` for a strictly monotone `psi` on (0,1] by bisection
/// in `u = 1 - Log t`. The returned `t` satisfies
/// `|psi(t) - y| <= tol · max(|y|, 1e-300)` or an error is raised.
pub fn invert_monotone<F: Fn(f64) -> f64>(psi: &F, y: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0 && tol <= 1e-6) {
        return Err(Error::BadParameter(format!("inversion tolerance {tol} outside (0, 1e-6]")));
    }
    let at_one = psi(1.0);
    let at_small = psi(t_of(U_CEILING));
    let increasing = at_one > at_small;
    let (min, max) = if increasing { (at_small, at_one) } else { (at_one, at_small) };
    let scale = y.abs().max(1e-300);
    if !(y >= min - tol * scale && y <= max + tol * scale) {
        return Err(Error::OutOfRange { y });
    }
    // h(u) = psi(t(u)) - y changes sign on [1, U_CEILING]; h(1) has the sign of `increasing`
    let h = |u: f64| psi(t_of(u)) - y;
    let (mut lo, mut hi) = (1.0, U_CEILING);
    let positive_at_lo = increasing;
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = h(mid);
        if v == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if (v > 0.0) == positive_at_lo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = if h(lo).abs() <= h(hi).abs() { lo } else { hi };
    let t = t_of(u);
    if (psi(t) - y).abs() > tol * scale {
        return Err(Error::OutOfRange { y });
    }
    Ok(t)
}

/// `min` and `max` over `ts` of `(1 + |Log φ(t)|) / (1 + |Log t|)` for the
/// inverse `φ` of a monotone map.
pub fn log_distortion_bracket(map: &MonotoneMap, ts: &[f64]) -> Result<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    for &t in ts {
        let phi = map.inverse(t)?;
        let r = (1.0 + phi.ln().abs()) / (1.0 + t.ln().abs());
        lo = lo.min(r);
        hi = hi.max(r);
    }
    Ok((lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_power_inverse() {
        let m = MonotoneMap::new(LogWeight::new(0.5, 0.0).unwrap()).unwrap();
        assert!((m.inverse(0.5).unwrap() - 0.25).abs() < 1e-15);
        for k in 1..200 {
            let y = (k as f64 / 200.0).powi(3);
            assert!((m.inverse(y).unwrap() - y * y).abs() <= 1e-12 * y * y);
        }
    }

    #[test]
    fn power_over_log() {
        let m = MonotoneMap::new(LogWeight::new(0.25, -1.0).unwrap()).unwrap();
        let t = m.inverse(0.5).unwrap();
        let psi = t.powf(0.25) / (1.0 - t.ln());
        assert!((psi - 0.5).abs() <= 1e-10);
        assert!((t - 0.504).abs() < 1e-3);
        let generic = invert_monotone(&|t: f64| t.powf(0.25) / (1.0 - t.ln()), 0.5, 1e-10).unwrap();
        assert!((generic - t).abs() < 1e-9);
    }

    #[test]
    fn log_reciprocal_closed_form() {
        let m = MonotoneMap::log_reciprocal();
        for k in 1..100 {
            let y = k as f64 / 100.0;
            let exact = (1.0 - 1.0 / y).exp();
            assert!((m.inverse(y).unwrap() - exact).abs() <= 1e-12 * exact.max(1e-300));
        }
        assert!((m.inverse(0.5).unwrap() - (-1f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn threshold_construction() {
        // a < b: Φ increases only up to t0 = e^{(a-b)/a}
        let m = MonotoneMap::new(LogWeight::new(0.25, 0.75).unwrap()).unwrap();
        assert!((m.t0() - (-2f64).exp()).abs() < 1e-15);
        assert!((m.forward(1.0).unwrap() - 1.0).abs() < 1e-15);
        let mut prev = 0.0;
        for k in 1..=1000 {
            let t = k as f64 / 1000.0;
            let v = m.forward(t).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn raw_root_beyond_threshold() {
        // (1/4, 3/4): increasing up to e^{-2}, with Φ(1) = 1 < Φ(e^{-2})
        let m = MonotoneMap::new(LogWeight::new(0.25, 0.75).unwrap()).unwrap();
        for k in 1..=100 {
            let y = k as f64 / 100.0;
            let t = m.solve(y).unwrap();
            assert!(t <= m.t0());
            assert!((m.weight_at(t) - y).abs() <= 1e-12 * y);
        }
        assert!(m.solve(m.peak() * 1.01).is_err());
    }

    #[test]
    fn out_of_range() {
        let m = MonotoneMap::new(LogWeight::new(0.5, 0.0).unwrap()).unwrap();
        assert!(matches!(m.inverse(1.5), Err(Error::OutOfRange { .. })));
        assert!(matches!(
            invert_monotone(&|t: f64| t.sqrt(), 2.0, 1e-10),
            Err(Error::OutOfRange { .. })
        ));
        assert!(MonotoneMap::new(LogWeight::new(-0.5, 0.0).unwrap()).is_err());
    }
}
