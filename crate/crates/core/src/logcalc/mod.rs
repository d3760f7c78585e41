//! Logarithmic-weight calculus on (0,1).
//!
//! Everything here works in the variable `u = 1 - Log t`, in which the
//! weights `t^a (1 - Log t)^b` become `e^{a(1-u)} u^b`.

mod bounds;
mod invert;
pub mod quadrature;
mod sup;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rearrangement::StepFunction;

pub use bounds::{log_integral_bounds_check, BoundProbe, LogBoundsReport};
pub use invert::{invert_monotone, log_distortion_bracket, MonotoneMap};
pub use sup::{golden_max_u, sup_on_grid, sup_on_range};

/// `u = 1 - Log t`.
#[inline]
pub fn u_of(t: f64) -> f64 {
    1.0 - t.ln()
}

/// `t = e^{1-u}`.
#[inline]
pub fn t_of(u: f64) -> f64 {
    (1.0 - u).exp()
}

/// The weight `w(t) = t^a (1 - Log t)^b`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogWeight {
    pub a: f64,
    pub b: f64,
}

impl LogWeight {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::NonFiniteInput(format!("weight exponents ({a}, {b})")));
        }
        Ok(Self { a, b })
    }

    pub const fn unit() -> Self {
        Self { a: 0.0, b: 0.0 }
    }

    pub fn value(&self, t: f64) -> f64 {
        self.value_u(u_of(t))
    }

    pub fn value_u(&self, u: f64) -> f64 {
        self.ln_value_u(u).exp()
    }

    pub fn ln_value_u(&self, u: f64) -> f64 {
        let mut s = 0.0;
        if self.a != 0.0 {
            s += self.a * (1.0 - u);
        }
        if self.b != 0.0 {
            s += self.b * u.ln();
        }
        s
    }

    /// Pointwise product of two weights.
    pub fn times(&self, other: &LogWeight) -> LogWeight {
        LogWeight { a: self.a + other.a, b: self.b + other.b }
    }

    pub fn powf(&self, s: f64) -> LogWeight {
        LogWeight { a: self.a * s, b: self.b * s }
    }

    pub fn recip(&self) -> LogWeight {
        self.powf(-1.0)
    }

    /// Smallest `K` with `w(2t) <= K w(t)` for all `t` in (0, 1/2).
    pub fn doubling_constant(&self) -> f64 {
        // w(2t)/w(t) = 2^a (1 - ln2/u)^b with u ranging over (1 + ln 2, ∞)
        let two_a = 2f64.powf(self.a);
        if self.b >= 0.0 {
            two_a
        } else {
            two_a * (1.0 + std::f64::consts::LN_2).powf(-self.b)
        }
    }

    /// `∫_{u1}^{u2} e^{(a+1)(1-u)} u^b du`, i.e. `∫ w(s) ds` over the matching
    /// `s`-interval; `u2 = ∞` means the interval reaches `s = 0`.
    pub fn integral_u(&self, u1: f64, u2: f64, rel_tol: f64, max_depth: u32) -> Result<f64> {
        let c = self.a + 1.0;
        if c == 0.0 {
            return quadrature::power_u_integral(self.b, u1, u2);
        }
        if self.b == 0.0 {
            return quadrature::exp_u_integral(c, u1, u2);
        }
        let g = |u: f64| (c * (1.0 - u) + self.b * u.ln()).exp();
        if u2.is_infinite() {
            if c < 0.0 {
                return Err(Error::Divergent(format!("∫_0 t^{} (1 - Log t)^{} dt", self.a, self.b)));
            }
            return quadrature::integrate_tail(&g, u1, rel_tol, max_depth);
        }
        quadrature::integrate(&g, u1, u2, rel_tol, max_depth)
    }
}

/// Uniform grid in `u` on `[u_min, u_max]` with `count` nodes, inducing the
/// nodes `t_j = e^{1 - u_j}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UGrid {
    pub u_min: f64,
    pub u_max: f64,
    pub count: usize,
}

impl UGrid {
    pub fn new(u_max: f64, count: usize) -> Result<Self> {
        Self::span(1.0, u_max, count)
    }

    pub fn span(u_min: f64, u_max: f64, count: usize) -> Result<Self> {
        if !(u_max > u_min) || !u_min.is_finite() || !u_max.is_finite() || u_min < 1.0 {
            return Err(Error::BadParameter(format!("u-grid [{u_min}, {u_max}]")));
        }
        if count < 2 {
            return Err(Error::BadParameter(format!("u-grid count {count} < 2")));
        }
        Ok(Self { u_min, u_max, count })
    }

    pub fn u_nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let h = (self.u_max - self.u_min) / (self.count - 1) as f64;
        (0..self.count).map(move |j| self.u_min + h * j as f64)
    }

    /// Nodes in increasing order of `t`.
    pub fn t_nodes(&self) -> Vec<f64> {
        let mut t: Vec<f64> = self.u_nodes().map(t_of).collect();
        t.reverse();
        t
    }
}

/// `∫_{t_lo}^{t_hi} g(t) dt/t`, integrated in `u` as `∫ g(e^{1-u}) du`.
///
/// `g` may jump only at the supplied `breaks`. With `t_lo = 0` the piece
/// below the smallest break is a half-line in `u` and goes to the tail
/// integrator.
pub fn integrate_dt_over_t<G: Fn(f64) -> f64>(
    g: &G,
    t_lo: f64,
    t_hi: f64,
    breaks: &[f64],
    rel_tol: f64,
    max_depth: u32,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&t_lo) || !(0.0..=1.0).contains(&t_hi) || t_lo > t_hi {
        return Err(Error::BadInterval { a: t_lo, b: t_hi });
    }
    if t_hi == t_lo || t_hi == 0.0 {
        return Ok(0.0);
    }
    let mut edges: Vec<f64> = breaks
        .iter()
        .copied()
        .filter(|&x| x > t_lo && x < t_hi)
        .map(u_of)
        .collect();
    edges.push(u_of(t_hi));
    if t_lo > 0.0 {
        edges.push(u_of(t_lo));
    }
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    let h = |u: f64| g(t_of(u));
    let mut total = if edges.len() > 1 {
        quadrature::integrate_pieces(&|_, u| h(u), &edges, rel_tol, max_depth)?
    } else {
        0.0
    };
    if t_lo == 0.0 {
        total += quadrature::integrate_tail(&h, *edges.last().unwrap(), rel_tol, max_depth)?;
    }
    Ok(total)
}

/// `∫_a^b f^p(s) w(s) ds` for a step function `f`.
///
/// Panels are integrated in `u`; pieces with a closed form (pure log weight
/// against `ds/s`, or pure power weight) bypass the quadrature.
pub fn log_weight_integral(
    f: &StepFunction,
    p: f64,
    w: &LogWeight,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<f64> {
    log_weight_integral_with_depth(f, p, w, a, b, rel_tol, 40)
}

pub fn log_weight_integral_with_depth(
    f: &StepFunction,
    p: f64,
    w: &LogWeight,
    a: f64,
    b: f64,
    rel_tol: f64,
    max_depth: u32,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&a) || !(0.0..=1.0).contains(&b) || a >= b {
        return Err(Error::BadInterval { a, b });
    }
    if !(rel_tol > 0.0 && rel_tol <= 1e-4) {
        return Err(Error::BadParameter(format!("rel_tol = {rel_tol} outside (0, 1e-4]")));
    }
    if !(p > 0.0) || !p.is_finite() {
        return Err(Error::BadExponent(format!("power p = {p} must be positive")));
    }
    let c = w.a + 1.0;
    let closed = c == 0.0 || w.b == 0.0;
    let mut total = 0.0;
    // (u_start, u_end, coef) for panels handled by quadrature
    let mut pieces: Vec<(f64, f64, f64)> = Vec::new();
    for i in 0..f.len() {
        let v = f.values()[i];
        let lo = f.breaks()[i].max(a);
        let hi = f.breaks()[i + 1].min(b);
        if hi <= lo || v == 0.0 {
            continue;
        }
        let coef = v.powf(p);
        let u_hi = u_of(hi);
        let u_lo = if lo == 0.0 { f64::INFINITY } else { u_of(lo) };
        if closed || u_lo.is_infinite() {
            total += coef * w.integral_u(u_hi, u_lo, rel_tol, max_depth)?;
        } else {
            pieces.push((u_hi, u_lo, coef));
        }
    }
    if !pieces.is_empty() {
        pieces.sort_by(|x, y| x.0.total_cmp(&y.0));
        let mut edges = vec![pieces[0].0];
        let mut coefs = Vec::with_capacity(pieces.len());
        for &(u0, u1, cf) in &pieces {
            if u0 > *edges.last().unwrap() {
                edges.push(u0);
                coefs.push(0.0);
            }
            edges.push(u1);
            coefs.push(cf);
        }
        let g = |k: usize, u: f64| {
            let cf = coefs[k];
            if cf == 0.0 {
                0.0
            } else {
                cf * (c * (1.0 - u) + w.b * u.ln()).exp()
            }
        };
        total += quadrature::integrate_pieces(&g, &edges, rel_tol, max_depth)?;
    }
    Ok(total)
}
