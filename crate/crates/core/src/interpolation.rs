//! Real-interpolation norms computed from sampled K-curves, and the target
//! norms that the interpolation spaces are identified with.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::config::NumConfig;
use crate::error::{Error, Result};
use crate::kfunctional::{k_curve, CoupleSpec, KCurve, KMethod};
use crate::logcalc::{integrate_dt_over_t, sup_on_grid, u_of, UGrid};
use crate::norms::{grand_norm, ggamma_norm, lebesgue_norm, lorentz_zygmund_norm, small_norm, GammaDouble, SpaceSpec};
use crate::rearrangement::{PowerPrefix, StepRearrangement};

/// `(θ, r, α)` of the norm `‖t^{-θ} (1 - Log t)^α K(t)‖_{L^r(dt/t)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterpParams {
    pub theta: f64,
    #[serde(with = "crate::norms::exponent")]
    pub r: f64,
    #[serde(default)]
    pub alpha: f64,
}

impl InterpParams {
    pub fn new(theta: f64, r: f64, alpha: f64) -> Result<Self> {
        let p = Self { theta, r, alpha };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.theta) {
            return Err(Error::BadParameter(format!("theta = {} outside [0, 1]", self.theta)));
        }
        if !(self.r >= 1.0) {
            return Err(Error::BadExponent(format!("r = {} below 1", self.r)));
        }
        if !self.alpha.is_finite() {
            return Err(Error::NonFiniteInput(format!("alpha = {}", self.alpha)));
        }
        Ok(())
    }
}

/// Exponents derived from `(p, q, θ, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DerivedExponents {
    /// `1/p_θ = (1-θ)/p + θ/q`.
    pub p_theta: f64,
    /// `pq/(q-p)`, or `p` when `q = ∞`.
    pub sigma: f64,
    /// `1 - θ - 1/p_θ`.
    pub alpha_theta: f64,
    /// `θ (1/p - 1/q)`.
    pub lambda: f64,
    /// `(1-θ)(1/p - 1/q)`.
    pub lambda1: f64,
    /// `λ - θ`.
    pub a: f64,
    /// `θ - 1/p - 1/r`.
    pub beta_theta: f64,
}

impl DerivedExponents {
    pub fn new(p: f64, q: f64, theta: f64, r: f64) -> Self {
        let gap = 1.0 / p - 1.0 / q;
        let p_theta = 1.0 / ((1.0 - theta) / p + theta / q);
        let sigma = if q.is_infinite() { p } else { p * q / (q - p) };
        let lambda = theta * gap;
        Self {
            p_theta,
            sigma,
            alpha_theta: 1.0 - theta - 1.0 / p_theta,
            lambda,
            lambda1: (1.0 - theta) * gap,
            a: lambda - theta,
            beta_theta: theta - 1.0 / p - 1.0 / r,
        }
    }
}

/// `(∫_0^1 [t^{-θ} (1 - Log t)^α K(t)]^r dt/t)^{1/r}`, or the supremum of
/// the bracket when `r = ∞`.
pub fn interp_norm(curve: &KCurve, params: &InterpParams, cfg: &NumConfig) -> Result<f64> {
    params.validate()?;
    if curve.is_zero() {
        return Ok(0.0);
    }
    let InterpParams { theta, r, alpha } = *params;
    let ln_bracket = |t: f64| {
        let k = curve.value_at(t);
        if k <= 0.0 {
            f64::NEG_INFINITY
        } else {
            -theta * t.ln() + alpha * u_of(t).ln() + k.ln()
        }
    };
    if r.is_infinite() {
        return sup_bracket(curve, params, &ln_bracket, cfg);
    }
    let g = |t: f64| (r * ln_bracket(t)).exp();
    let v = integrate_dt_over_t(&g, 0.0, 1.0, &curve.t_nodes, cfg.rel_tol, cfg.max_depth)?;
    if !v.is_finite() {
        return Err(Error::Divergent(format!("interpolation integral is {v}")));
    }
    Ok(v.powf(1.0 / r))
}

fn sup_bracket<B: Fn(f64) -> f64>(curve: &KCurve, params: &InterpParams, ln_bracket: &B, cfg: &NumConfig) -> Result<f64> {
    let InterpParams { theta, alpha, .. } = *params;
    let t1 = curve.t_nodes[0];
    let u1 = u_of(t1);
    // below the first node the bracket is K(t_1)/t_1 · t^{1-θ} u^α
    let below = if theta == 1.0 {
        if alpha > 0.0 {
            return Err(Error::Divergent("t^{-1} K(t) (1 - Log t)^α grows without bound at 0".into()));
        }
        ln_bracket(t1)
    } else {
        let u_star = (alpha / (1.0 - theta)).max(u1);
        let c = curve.k_values[0] / t1;
        if c == 0.0 {
            f64::NEG_INFINITY
        } else {
            c.ln() + (1.0 - theta) * (1.0 - u_star) + alpha * u_star.ln()
        }
    };
    let above = if u1 > 1.0 {
        let grid = UGrid::span(1.0, u1, cfg.sup_count)?;
        let g = |t: f64| ln_bracket(t).exp();
        sup_on_grid(&g, &grid, &curve.t_nodes, cfg.golden_tol)?.0
    } else {
        ln_bracket(1.0).exp()
    };
    Ok(above.max(below.exp()))
}

/// The identifications of interpolation spaces that can be tested
/// numerically, each named by its couple and its target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Identification {
    /// `L^{q),α} = (L^{p),α}, L^q)_{1,∞;-α/q}`.
    #[serde(rename = "grand-endpoint-of-grand-lq")]
    GrandFromGrandLq,
    /// `L^{q),α} = (L^p, L^q)_{1,∞;-α/q}`.
    #[serde(rename = "grand-endpoint-of-lp-lq")]
    GrandFromLpLq,
    /// `(L^{p),α}, L^{q),α})_{θ,r} = L^{p_θ,r}(Log L)^{-α/p_θ}`.
    #[serde(rename = "grand-grand-lorentz-zygmund")]
    GrandGrandToLz,
    /// `(L^{(p,α}, L^{(q,α})_{θ,r} = L^{p_θ,r}(Log L)^{α/p_θ}`.
    #[serde(rename = "small-small-lorentz-zygmund")]
    SmallSmallToLz,
    /// `(L^{(p}, L^{(q})_{θ,r} = L^{p_θ,r}(Log L)^{α_θ}`.
    #[serde(rename = "unit-small-small-lorentz-zygmund")]
    SmallSmallUnitToLz,
    /// `L^{(p,α} = (L^p, L^∞)_{0,1;-α/p+α-1}`.
    #[serde(rename = "small-endpoint-of-lp-linf")]
    SmallFromLpLinf,
    /// `L^{(p,α} = (L^p, L^q)_{0,1;-α/p+α-1}`.
    #[serde(rename = "small-endpoint-of-lp-lq")]
    SmallFromLpLq,
    /// `(L^{p)}, L^{(p})_{θ,r}` against the double-weight Gamma norm.
    #[serde(rename = "grand-small-gamma")]
    SameExponentToGamma,
    /// `(L^{p)}, L^{(p})_{θ,r}` against the three-case `Z` norm.
    #[serde(rename = "grand-small-z")]
    SameExponentToZ,
    /// `(L^{p)}, L^{(p})_{1/p,p} = L^p`.
    #[serde(rename = "grand-small-critical-lp")]
    SameExponentCriticalToLp,
    /// `(L^{p)}, L^{(p})_{θ,r}` against the single-integral `Z` norm.
    #[serde(rename = "grand-small-z-single")]
    SameExponentToZAlt,
    /// `(L^{p)}, L^{(p})_{θ,r}` against the weighted block sum.
    #[serde(rename = "grand-small-blocks")]
    SameExponentToBlocks,
}

impl Identification {
    pub const ALL: [Identification; 12] = [
        Identification::GrandFromGrandLq,
        Identification::GrandFromLpLq,
        Identification::GrandGrandToLz,
        Identification::SmallSmallToLz,
        Identification::SmallSmallUnitToLz,
        Identification::SmallFromLpLinf,
        Identification::SmallFromLpLq,
        Identification::SameExponentToGamma,
        Identification::SameExponentToZ,
        Identification::SameExponentCriticalToLp,
        Identification::SameExponentToZAlt,
        Identification::SameExponentToBlocks,
    ];

    pub fn code(&self) -> &'static str {
        match self {
            Identification::GrandFromGrandLq => "grand-endpoint-of-grand-lq",
            Identification::GrandFromLpLq => "grand-endpoint-of-lp-lq",
            Identification::GrandGrandToLz => "grand-grand-lorentz-zygmund",
            Identification::SmallSmallToLz => "small-small-lorentz-zygmund",
            Identification::SmallSmallUnitToLz => "unit-small-small-lorentz-zygmund",
            Identification::SmallFromLpLinf => "small-endpoint-of-lp-linf",
            Identification::SmallFromLpLq => "small-endpoint-of-lp-lq",
            Identification::SameExponentToGamma => "grand-small-gamma",
            Identification::SameExponentToZ => "grand-small-z",
            Identification::SameExponentCriticalToLp => "grand-small-critical-lp",
            Identification::SameExponentToZAlt => "grand-small-z-single",
            Identification::SameExponentToBlocks => "grand-small-blocks",
        }
    }

    pub fn describe(&self) -> &'static str {
        match self {
            Identification::GrandFromGrandLq => "Grand space as the (1,∞) limit of (grand, L^q)",
            Identification::GrandFromLpLq => "Grand space as the (1,∞) limit of (L^p, L^q)",
            Identification::GrandGrandToLz => "two Grand spaces interpolate to a Lorentz-Zygmund space",
            Identification::SmallSmallToLz => "two small spaces with log exponent α interpolate to a Lorentz-Zygmund space",
            Identification::SmallSmallUnitToLz => "two small spaces interpolate to L^{p_θ,r}(Log L)^{α_θ}",
            Identification::SmallFromLpLinf => "small space as the (0,1) limit of (L^p, L^∞)",
            Identification::SmallFromLpLq => "small space as the (0,1) limit of (L^p, L^q)",
            Identification::SameExponentToGamma => "Grand and small spaces of one exponent interpolate to a Gamma space",
            Identification::SameExponentToZ => "Grand and small spaces of one exponent against the three-case norm",
            Identification::SameExponentCriticalToLp => "critical Grand/small interpolation space equals L^p",
            Identification::SameExponentToZAlt => "Grand and small spaces of one exponent against the single-integral norm",
            Identification::SameExponentToBlocks => "Grand and small spaces of one exponent against the weighted block sum",
        }
    }
}

impl fmt::Display for Identification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Identification {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Identification::ALL
            .into_iter()
            .find(|id| id.code().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::BadParameter(format!("unknown identification '{s}'")))
    }
}

/// Exponents for [`identify_target`]; each identification reads the ones it
/// needs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TargetParams {
    pub p: f64,
    #[serde(with = "crate::norms::exponent")]
    pub q: f64,
    pub theta: f64,
    #[serde(with = "crate::norms::exponent")]
    pub r: f64,
    pub alpha: f64,
}

fn require(ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::HypothesisViolation(what.to_string()))
    }
}

/// The couple and interpolation parameters on the left of an
/// identification.
pub fn target_couple(id: Identification, tp: &TargetParams) -> Result<(CoupleSpec, InterpParams)> {
    let TargetParams { p, q, theta, r, alpha } = *tp;
    let open_p = p > 1.0 && p.is_finite();
    let open_theta = theta > 0.0 && theta < 1.0;
    let finite_r = (1.0..f64::INFINITY).contains(&r);
    let grand_limit = InterpParams { theta: 1.0, r: f64::INFINITY, alpha: -alpha / q };
    let small_limit = InterpParams { theta: 0.0, r: 1.0, alpha: -alpha / p + alpha - 1.0 };
    let plain = InterpParams { theta, r, alpha: 0.0 };
    let out = match id {
        Identification::GrandFromGrandLq => {
            require(open_p, "1 < p")?;
            require(p < q && q.is_finite(), "p < q < ∞")?;
            require(alpha > 0.0, "α > 0")?;
            (CoupleSpec::GrandLq { p, q, alpha }, grand_limit)
        }
        Identification::GrandFromLpLq => {
            require(p >= 1.0 && p.is_finite(), "1 ≤ p")?;
            require(p < q && q.is_finite(), "p < q < ∞")?;
            require(alpha > 0.0, "α > 0")?;
            (CoupleSpec::LpLq { p, q }, grand_limit)
        }
        Identification::GrandGrandToLz => {
            require(open_theta, "0 < θ < 1")?;
            require(finite_r, "1 ≤ r < ∞")?;
            require(alpha > 0.0, "α > 0")?;
            require(open_p && p < q && q.is_finite(), "1 < p < q")?;
            (CoupleSpec::GrandGrand { p, q, alpha }, plain)
        }
        Identification::SmallSmallToLz => {
            require(open_theta, "0 < θ < 1")?;
            require(r > 1.0 && r.is_finite(), "1 < r < ∞")?;
            require(open_p && p < q && q.is_finite(), "1 < p < q")?;
            require(alpha > 0.0, "α > 0")?;
            let x0 = SpaceSpec::Small { p, alpha };
            let x1 = SpaceSpec::Small { p: q, alpha };
            (CoupleSpec::General { x0, x1 }, plain)
        }
        Identification::SmallSmallUnitToLz => {
            require(open_theta, "0 < θ < 1")?;
            require(finite_r, "1 ≤ r < ∞")?;
            require(open_p && p < q && q.is_finite(), "1 < p < q < ∞")?;
            (CoupleSpec::SmallSmall { p, q }, plain)
        }
        Identification::SmallFromLpLinf => {
            require(open_p, "1 < p < ∞")?;
            require(alpha > 0.0, "α > 0")?;
            (CoupleSpec::LpLq { p, q: f64::INFINITY }, small_limit)
        }
        Identification::SmallFromLpLq => {
            require(open_p, "1 < p < ∞")?;
            require(p < q, "p < q")?;
            require(alpha > 0.0, "α > 0")?;
            (CoupleSpec::LpLq { p, q }, small_limit)
        }
        Identification::SameExponentToGamma
        | Identification::SameExponentToZ
        | Identification::SameExponentToZAlt
        | Identification::SameExponentToBlocks => {
            require(open_p, "1 < p < ∞")?;
            require(open_theta, "0 < θ < 1")?;
            require(finite_r, "1 ≤ r < ∞")?;
            (CoupleSpec::GrandSmallSameP { p }, plain)
        }
        Identification::SameExponentCriticalToLp => {
            require(open_p, "1 < p < ∞")?;
            require((theta * p - 1.0).abs() <= 1e-12, "θ = 1/p")?;
            require((r - p).abs() <= 1e-12, "r = p")?;
            (CoupleSpec::GrandSmallSameP { p }, plain)
        }
    };
    Ok(out)
}

/// The norm on the right of an identification.
pub fn target_norm(id: Identification, f: &StepRearrangement, tp: &TargetParams, cfg: &NumConfig) -> Result<f64> {
    let TargetParams { p, q, theta, r, alpha } = *tp;
    let d = DerivedExponents::new(p, q, theta, r);
    match id {
        Identification::GrandFromGrandLq | Identification::GrandFromLpLq => grand_norm(f, q, alpha),
        Identification::GrandGrandToLz => lorentz_zygmund_norm(f, d.p_theta, r, -alpha / d.p_theta, cfg),
        Identification::SmallSmallToLz => lorentz_zygmund_norm(f, d.p_theta, r, alpha / d.p_theta, cfg),
        Identification::SmallSmallUnitToLz => lorentz_zygmund_norm(f, d.p_theta, r, d.alpha_theta, cfg),
        Identification::SmallFromLpLinf | Identification::SmallFromLpLq => small_norm(f, p, alpha, cfg),
        Identification::SameExponentToGamma => ggamma_norm(f, &GammaDouble::critical_pair(p, theta, r)?, cfg),
        Identification::SameExponentToZ => z_norm(f, p, theta, r, cfg),
        Identification::SameExponentCriticalToLp => lebesgue_norm(f, p),
        Identification::SameExponentToZAlt => z_norm_alt(f, p, theta, r, cfg),
        Identification::SameExponentToBlocks => block_norm(f, p, theta, r),
    }
}

/// `(lhs, rhs)`: the interpolation norm from the oracle K-curve of the
/// couple, and the norm it is identified with.
pub fn identify_target(id: Identification, f: &StepRearrangement, tp: &TargetParams, cfg: &NumConfig) -> Result<(f64, f64)> {
    let (couple, params) = target_couple(id, tp)?;
    if f.is_zero() {
        return Ok((0.0, 0.0));
    }
    let grid = UGrid::new(cfg.u_max, cfg.k_nodes)?;
    let curve = k_curve(f, &couple, &grid, KMethod::Oracle, cfg)?;
    let lhs = interp_norm(&curve, &params, cfg)?;
    let rhs = target_norm(id, f, tp, cfg)?;
    Ok((lhs, rhs))
}

fn z_hypotheses(p: f64, theta: f64, r: f64) -> Result<()> {
    require(p > 1.0 && p.is_finite(), "1 < p < ∞")?;
    require(theta > 0.0 && theta < 1.0, "0 < θ < 1")?;
    require((1.0..f64::INFINITY).contains(&r), "1 ≤ r < ∞")
}

/// Dyadic-exponential points `t_k = 2^{1-2^k}`; `t_k` underflows to 0 from
/// `k = 11` on.
pub fn block_point(k: u32) -> f64 {
    (1.0 - 2f64.powi(k as i32)).exp2()
}

/// Last block index of the critical sum; the block `(0, t_11]` already
/// absorbs everything below the smallest positive double.
pub const LAST_BLOCK: u32 = 10;

/// Equivalent norm of `(L^{p)}, L^{(p})_{θ,r}` in its three cases.
///
/// `θ < 1/p` uses `∫_t^1 f_*^p`, `θ > 1/p` uses `∫_0^t f_*^p`, both weighted
/// by `(1 - Log t)^{β_θ}`, and `θ = 1/p` is the block sum over `(t_{k+1}, t_k]`.
pub fn z_norm(f: &StepRearrangement, p: f64, theta: f64, r: f64, cfg: &NumConfig) -> Result<f64> {
    z_hypotheses(p, theta, r)?;
    if f.is_zero() {
        return Ok(0.0);
    }
    let pp = PowerPrefix::new(f, p);
    let critical = (theta * p - 1.0).abs() <= 1e-12;
    if critical {
        let sum: f64 = (0..=LAST_BLOCK)
            .map(|k| pp.between(block_point(k + 1), block_point(k)).powf(r / p))
            .sum();
        return Ok(sum.powf(1.0 / r));
    }
    let beta = theta - 1.0 / p - 1.0 / r;
    let inner = |t: f64| if theta < 1.0 / p { pp.tail(t) } else { pp.head(t) };
    let g = |t: f64| {
        let v = inner(t);
        if v <= 0.0 {
            0.0
        } else {
            (r * beta * u_of(t).ln() + (r / p) * v.ln()).exp()
        }
    };
    let v = integrate_dt_over_t(&g, 0.0, 1.0, f.breaks(), cfg.rel_tol, cfg.max_depth)?;
    Ok(v.powf(1.0 / r))
}

/// `(Σ_k 2^{kr(θ-1/p)} (∫_{t_{k+1}}^{t_k} f_*^p)^{r/p})^{1/r}`.
pub fn block_norm(f: &StepRearrangement, p: f64, theta: f64, r: f64) -> Result<f64> {
    z_hypotheses(p, theta, r)?;
    let pp = PowerPrefix::new(f, p);
    let sum: f64 = (0..=LAST_BLOCK)
        .map(|k| {
            let b = pp.between(block_point(k + 1), block_point(k));
            if b == 0.0 {
                0.0
            } else {
                (k as f64 * r * (theta - 1.0 / p) * std::f64::consts::LN_2 + (r / p) * b.ln()).exp()
            }
        })
        .sum();
    Ok(sum.powf(1.0 / r))
}

/// `(∫_0^1 (1 - Log t)^{θr} (∫_0^t (1 - Log x)^{-1} f_*^p dx)^{r/p} dt/((1 - Log t) t))^{1/r}`.
///
/// This is the double-weight Gamma norm with `w1 = t^{-1}(1-Log t)^{θr-1}`,
/// `w2 = (1-Log t)^{-1}`, `m = r`.
pub fn z_norm_alt(f: &StepRearrangement, p: f64, theta: f64, r: f64, cfg: &NumConfig) -> Result<f64> {
    z_hypotheses(p, theta, r)?;
    if f.is_zero() {
        return Ok(0.0);
    }
    ggamma_norm(f, &GammaDouble::critical_pair(p, theta, r)?, cfg)
}
