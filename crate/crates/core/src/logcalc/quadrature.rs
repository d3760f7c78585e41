//! Adaptive 15-point Gauss-Legendre quadrature in the `u = 1 - Log t`
//! variable.
//!
//! Integrands are handed over already expressed in `u` (Jacobian included).
//! The adaptive driver refines globally: all pieces share one error budget,
//! and the piece with the largest error estimate is bisected next.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const GL_POINTS: usize = 15;

/// Hard cap on the number of live segments of one adaptive run.
const MAX_SEGMENTS: usize = 400_000;

/// Tail segments stop once they start beyond `u0 + TAIL_SPAN`.
const TAIL_SPAN: f64 = 65_536.0;

struct GaussLegendre {
    nodes: [f64; GL_POINTS],
    weights: [f64; GL_POINTS],
}

fn gauss_legendre() -> &'static GaussLegendre {
    static RULE: OnceLock<GaussLegendre> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_POINTS;
        let mut nodes = [0.0; GL_POINTS];
        let mut weights = [0.0; GL_POINTS];
        for i in 0..n {
            // Newton on P_n from the Chebyshev-like initial guess
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = x;
            weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        }
        GaussLegendre { nodes, weights }
    })
}

/// Fixed 15-point rule on `[a, b]`.
pub fn gauss_legendre_15<F: Fn(f64) -> f64>(g: &F, a: f64, b: f64) -> f64 {
    let rule = gauss_legendre();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for i in 0..GL_POINTS {
        acc += rule.weights[i] * g(mid + half * rule.nodes[i]);
    }
    acc * half
}

struct Segment {
    piece: usize,
    a: f64,
    b: f64,
    left: f64,
    right: f64,
    err: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}

impl Eq for Segment {}

impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn t_of(u: f64) -> f64 {
    (1.0 - u).exp()
}

fn check_finite(v: f64, u: f64) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteValue { t: t_of(u), value: v })
    }
}

fn make_segment<F: Fn(usize, f64) -> f64>(
    g: &F,
    piece: usize,
    a: f64,
    b: f64,
    whole: f64,
    depth: u32,
) -> Result<Segment> {
    let m = 0.5 * (a + b);
    let h = |u: f64| g(piece, u);
    let left = check_finite(gauss_legendre_15(&h, a, m), m)?;
    let right = check_finite(gauss_legendre_15(&h, m, b), m)?;
    Ok(Segment {
        piece,
        a,
        b,
        left,
        right,
        err: (left + right - whole).abs(),
        depth,
    })
}

/// Adaptive integration over consecutive pieces `[edges[k], edges[k+1]]`.
///
/// `g(k, u)` is the integrand on piece `k`; it may be nonsmooth only across
/// piece boundaries. Returns `Σ_k ∫ g(k, u) du` with global relative error
/// at most `rel_tol`.
pub fn integrate_pieces<F: Fn(usize, f64) -> f64>(
    g: &F,
    edges: &[f64],
    rel_tol: f64,
    max_depth: u32,
) -> Result<f64> {
    let mut heap = BinaryHeap::new();
    for k in 0..edges.len().saturating_sub(1) {
        let (a, b) = (edges[k], edges[k + 1]);
        if b <= a {
            continue;
        }
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::BadInterval { a: t_of(b), b: t_of(a) });
        }
        let whole = check_finite(gauss_legendre_15(&|u| g(k, u), a, b), a)?;
        heap.push(make_segment(g, k, a, b, whole, 0)?);
    }
    let sums = |heap: &BinaryHeap<Segment>| {
        let mut total = 0.0;
        let mut err = 0.0;
        for s in heap.iter() {
            total += s.left + s.right;
            err += s.err;
        }
        (total, err)
    };
    let (mut total, mut err) = sums(&heap);
    loop {
        if err <= rel_tol * total.abs() || err == 0.0 {
            let (t, e) = sums(&heap);
            if e <= rel_tol * t.abs() || e == 0.0 {
                return Ok(t);
            }
            total = t;
            err = e;
        }
        let worst = match heap.pop() {
            Some(s) => s,
            None => return Ok(0.0),
        };
        if worst.depth >= max_depth || heap.len() >= MAX_SEGMENTS {
            return Err(Error::NoConvergence { a: t_of(worst.b), b: t_of(worst.a) });
        }
        let m = 0.5 * (worst.a + worst.b);
        let l = make_segment(g, worst.piece, worst.a, m, worst.left, worst.depth + 1)?;
        let r = make_segment(g, worst.piece, m, worst.b, worst.right, worst.depth + 1)?;
        total += l.left + l.right + r.left + r.right - worst.left - worst.right;
        err += l.err + r.err - worst.err;
        heap.push(l);
        heap.push(r);
    }
}

/// `∫_a^b g(u) du` adaptively.
pub fn integrate<F: Fn(f64) -> f64>(g: &F, a: f64, b: f64, rel_tol: f64, max_depth: u32) -> Result<f64> {
    integrate_pieces(&|_, u| g(u), &[a, b], rel_tol, max_depth)
}

/// `∫_{u0}^∞ g(u) du` for an integrand that eventually decays.
///
/// The half-line is covered by segments of doubling length. Summation stops
/// once a segment adds less than `1e-2 · rel_tol` of the running total, or
/// once `g` is seen to decay exactly like a power `u^{-κ}`, in which case
/// the remainder is added in closed form. A power decay with `κ <= 1`, or a
/// tail still contributing at `u0 + 65536`, is reported as divergent.
pub fn integrate_tail<F: Fn(f64) -> f64>(g: &F, u0: f64, rel_tol: f64, max_depth: u32) -> Result<f64> {
    let mut total = 0.0;
    let mut lo = u0;
    let mut len = 1.0;
    loop {
        let hi = lo + len;
        let seg = integrate(g, lo, hi, rel_tol, max_depth)?;
        total += seg;
        let end_val = g(hi).abs();
        let small = seg.abs() <= 1e-2 * rel_tol * total.abs();
        if (small && end_val * len <= rel_tol * total.abs()) || (seg == 0.0 && end_val == 0.0) {
            return Ok(total);
        }
        if !total.is_finite() {
            return Err(Error::Divergent(format!("tail integral from u = {u0} overflows")));
        }
        if let Some(kappa) = power_decay(g, hi) {
            if kappa <= 1.0 + 1e-9 {
                return Err(Error::Divergent(format!("integrand decays like u^-{kappa} from u = {u0}")));
            }
            return Ok(total + g(hi) * hi / (kappa - 1.0));
        }
        lo = hi;
        len *= 2.0;
        if lo - u0 > TAIL_SPAN {
            return Err(Error::Divergent(format!("tail integral from u = {u0} does not settle")));
        }
    }
}

/// `κ` when `g(u), g(2u), g(4u)` fit `c u^{-κ}` to near machine precision.
fn power_decay<F: Fn(f64) -> f64>(g: &F, u: f64) -> Option<f64> {
    let (g1, g2, g4) = (g(u), g(2.0 * u), g(4.0 * u));
    if !(g1 != 0.0 && g1.signum() == g2.signum() && g2.signum() == g4.signum()) || !g4.is_normal() {
        return None;
    }
    let k1 = (g1 / g2).log2();
    let k2 = (g2 / g4).log2();
    ((k1 - k2).abs() <= 1e-11 * k2.abs().max(1.0)).then_some(k2)
}

/// `∫_{u1}^{u2} u^b du`, with `u2 = ∞` allowed when `b < -1`.
pub fn power_u_integral(b: f64, u1: f64, u2: f64) -> Result<f64> {
    if u2.is_infinite() {
        if b < -1.0 {
            return Ok(u1.powf(b + 1.0) / (-b - 1.0));
        }
        return Err(Error::Divergent(format!("∫ u^{b} du to infinity")));
    }
    if b == -1.0 {
        Ok((u2 / u1).ln())
    } else {
        Ok((u2.powf(b + 1.0) - u1.powf(b + 1.0)) / (b + 1.0))
    }
}

/// `∫_{u1}^{u2} e^{c(1-u)} du`, with `u2 = ∞` allowed when `c > 0`.
pub fn exp_u_integral(c: f64, u1: f64, u2: f64) -> Result<f64> {
    if c == 0.0 {
        if u2.is_infinite() {
            return Err(Error::Divergent("∫ du to infinity".into()));
        }
        return Ok(u2 - u1);
    }
    if u2.is_infinite() {
        if c > 0.0 {
            return Ok((c * (1.0 - u1)).exp() / c);
        }
        return Err(Error::Divergent(format!("∫ e^{{{c}(1-u)}} du to infinity")));
    }
    // e^{c(1-u1)} (1 - e^{-c(u2-u1)}) / c, written to avoid cancellation
    Ok((c * (1.0 - u1)).exp() * (-(-c * (u2 - u1)).exp_m1()) / c)
}
