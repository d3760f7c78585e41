//! Supremum search on the logarithmic scale.

use super::{t_of, u_of, UGrid};
use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximization of `h(u)` on `[lo, hi]`; returns
/// `(max value seen, argmax u)`.
pub fn golden_max_u<H: Fn(f64) -> Result<f64>>(h: &H, mut lo: f64, mut hi: f64, rel_width: f64) -> Result<(f64, f64)> {
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = h(x1)?;
    let mut f2 = h(x2)?;
    let (mut best, mut best_u) = if f1 >= f2 { (f1, x1) } else { (f2, x2) };
    for _ in 0..200 {
        if hi - lo <= rel_width * lo.abs().max(1.0) {
            break;
        }
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = h(x1)?;
            if f1 > best {
                best = f1;
                best_u = x1;
            }
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = h(x2)?;
            if f2 > best {
                best = f2;
                best_u = x2;
            }
        }
    }
    Ok((best, best_u))
}

fn probe<G: Fn(f64) -> f64>(g: &G, u: f64) -> Result<f64> {
    let t = t_of(u);
    let v = g(t);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFiniteValue { t, value: v })
    }
}

/// `sup_{0<t<1} g(t)` estimated on the grid nodes plus the supplied
/// breakpoints, then refined by golden-section search around the best
/// probe. Returns `(sup, argmax t)`.
pub fn sup_on_grid<G: Fn(f64) -> f64>(g: &G, grid: &UGrid, breaks: &[f64], rel_width: f64) -> Result<(f64, f64)> {
    let mut us: Vec<f64> = grid.u_nodes().collect();
    us.extend(
        breaks
            .iter()
            .filter(|&&t| t > 0.0 && t <= 1.0)
            .map(|&t| u_of(t))
            .filter(|&u| u >= grid.u_min && u <= grid.u_max),
    );
    us.sort_by(f64::total_cmp);
    us.dedup();
    let mut best = f64::NEG_INFINITY;
    let mut k_best = 0;
    for (k, &u) in us.iter().enumerate() {
        let v = probe(g, u)?;
        if v > best {
            best = v;
            k_best = k;
        }
    }
    let lo = us[k_best.saturating_sub(1)];
    let hi = us[(k_best + 1).min(us.len() - 1)];
    let mut arg = us[k_best];
    if hi > lo {
        let (v, u) = golden_max_u(&|u| probe(g, u), lo, hi, rel_width)?;
        if v > best {
            best = v;
            arg = u;
        }
    }
    Ok((best, t_of(arg)))
}

/// `sup_{t_lo < t < t_hi} g(t)` on a `count`-node grid uniform in `u`.
/// `t_lo = 0` is truncated at `u = u_cap`.
pub fn sup_on_range<G: Fn(f64) -> f64>(
    g: &G,
    t_lo: f64,
    t_hi: f64,
    count: usize,
    u_cap: f64,
    breaks: &[f64],
    rel_width: f64,
) -> Result<(f64, f64)> {
    let u_min = u_of(t_hi.min(1.0));
    let u_max = if t_lo > 0.0 { u_of(t_lo) } else { u_cap.max(u_min + 1.0) };
    if !(u_max > u_min) {
        let v = probe(g, u_min)?;
        return Ok((v, t_hi));
    }
    let grid = UGrid { u_min, u_max, count: count.max(2) };
    sup_on_grid(g, &grid, breaks, rel_width)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parabola() {
        let grid = UGrid::new(35.0, 4096).unwrap();
        let (v, t) = sup_on_grid(&|t: f64| t * (1.0 - t), &grid, &[], 1e-8).unwrap();
        assert!((v - 0.25).abs() < 1e-12);
        assert!((t - 0.5).abs() < 1e-6);
    }

    #[test]
    fn root_over_log() {
        let grid = UGrid::new(35.0, 4096).unwrap();
        let g = |t: f64| (1.0 - t).sqrt() / (1.0 - t.ln());
        let (v, t) = sup_on_grid(&g, &grid, &[], 1e-8).unwrap();
        // oracle: dense bisection on the derivative sign over (0,1)
        let dg = |t: f64| {
            let h = 1e-7;
            g(t + h) - g(t - h)
        };
        let (mut lo, mut hi) = (0.1, 0.9);
        for _ in 0..60 {
            let m = 0.5 * (lo + hi);
            if dg(m) > 0.0 {
                lo = m
            } else {
                hi = m
            }
        }
        assert!((v - g(lo)).abs() < 1e-12);
        assert!((t - lo).abs() < 1e-4);
        assert!((v - 0.4198).abs() < 1e-4);
    }

    #[test]
    fn constant_function() {
        let grid = UGrid::new(35.0, 64).unwrap();
        let (v, _) = sup_on_grid(&|_t: f64| 3.5, &grid, &[], 1e-8).unwrap();
        assert_eq!(v, 3.5);
    }

    #[test]
    fn non_finite_probe_is_an_error() {
        let grid = UGrid::new(35.0, 64).unwrap();
        assert!(matches!(
            sup_on_grid(&|t: f64| 1.0 / (t - 1.0), &grid, &[], 1e-8),
            Err(Error::NonFiniteValue { .. })
        ));
    }
}
