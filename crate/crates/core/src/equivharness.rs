//! Ratio experiments over function families.
//!
//! Every two-sided equivalence `A ≈ B` becomes a report of `A/B` over a
//! family of test functions, evaluated twice (base and refined
//! discretization). One-sided estimates with an explicit constant are
//! asserted exactly instead of bracketed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::NumConfig;
use crate::error::{Error, Result};
use crate::interpolation::{block_point, identify_target, target_couple, Identification, TargetParams, LAST_BLOCK};
use crate::kfunctional::{CoupleSpec, DecompositionTable, ExplicitK};
use crate::logcalc::quadrature::power_u_integral;
use crate::logcalc::{integrate_dt_over_t, sup_on_grid, u_of, UGrid};
use crate::norms::{grand_norm, ggamma_lower_bound_check, norm, small_norm, GammaDouble, SpaceSpec};
use crate::rearrangement::{discretize_model, FunctionModel, PowerPrefix, StepFunction, StepRearrangement};

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 20_240_517;

#[derive(Debug, Clone, PartialEq)]
pub struct FamilyMember {
    pub id: String,
    pub model: FunctionModel,
}

/// A named set of test functions, discretized on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionFamily {
    pub name: String,
    pub members: Vec<FamilyMember>,
    pub seed: u64,
}

impl FunctionFamily {
    /// `f ≡ 1`, three indicators, twelve power-log profiles tuned to the
    /// exponent `q`, and ten random nonincreasing step functions.
    pub fn standard(q: f64, seed: u64) -> Result<Self> {
        if !(q > 1.0 && q.is_finite()) {
            return Err(Error::BadExponent(format!("standard family needs 1 < q < ∞, got {q}")));
        }
        let mut members = vec![FamilyMember { id: "one".into(), model: FunctionModel::Char { a: 1.0 } }];
        for (id, a) in [("chi_1/2", 0.5), ("chi_1/8", 0.125), ("chi_1/128", 1.0 / 128.0)] {
            members.push(FamilyMember { id: id.into(), model: FunctionModel::Char { a } });
        }
        let q_conj = q / (q - 1.0);
        for gamma in [0.0, 1.0 / (2.0 * q_conj), 1.0 / q - 1e-3] {
            for delta in [-1.0, 0.0, 1.0, 2.0] {
                members.push(FamilyMember {
                    id: format!("powerlog(g={gamma:.4},d={delta})"),
                    model: FunctionModel::PowerLog { gamma, delta },
                });
            }
        }
        members.extend(random_steps(10, seed));
        Ok(Self { name: format!("standard(q={q})"), members, seed })
    }

    /// Only the random step functions of the standard family.
    pub fn random(count: usize, seed: u64) -> Self {
        Self { name: format!("random({count})"), members: random_steps(count, seed), seed }
    }

    pub fn single(id: &str, model: FunctionModel) -> Self {
        Self { name: id.to_string(), members: vec![FamilyMember { id: id.into(), model }], seed: DEFAULT_SEED }
    }

    pub fn discretize(&self, cfg: &NumConfig) -> Result<Vec<(String, StepRearrangement)>> {
        self.members
            .iter()
            .map(|m| Ok((m.id.clone(), discretize_model(&m.model, cfg.u_max, cfg.panels)?)))
            .collect()
    }
}

/// Nonincreasing step functions with 2 to 12 panels whose breaks are
/// uniform in `u` on `(1, 12)`.
fn random_steps(count: usize, seed: u64) -> Vec<FamilyMember> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let n = rng.gen_range(2..=12usize);
            let mut us: Vec<f64> = (0..n - 1).map(|_| rng.gen_range(1.0..12.0)).collect();
            us.sort_by(|a, b| b.total_cmp(a));
            let mut breaks = vec![0.0];
            breaks.extend(us.iter().map(|&u| (1.0 - u).exp()));
            breaks.push(1.0);
            breaks.dedup();
            let mut v = rng.gen_range(0.0..3.0f64).exp();
            let mut values = Vec::with_capacity(breaks.len() - 1);
            for _ in 1..breaks.len() {
                values.push(v);
                v *= rng.gen_range(0.2..0.95);
            }
            if rng.gen_bool(0.3) {
                *values.last_mut().unwrap() = 0.0;
            }
            FamilyMember { id: format!("random_{i}"), model: FunctionModel::ExplicitSteps { breaks, values } }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberRatio {
    pub id: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Skipped {
    pub id: String,
    pub reason: String,
}

/// Outcome of one ratio experiment.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquivReport {
    pub experiment: String,
    pub params: Value,
    pub members: Vec<MemberRatio>,
    pub max_ratio: Option<f64>,
    pub min_ratio: Option<f64>,
    pub median_ratio: Option<f64>,
    /// Relative change of `max_ratio` under refinement.
    pub drift: Option<f64>,
    pub ceiling: f64,
    pub pass: bool,
    pub seed: u64,
    pub skipped: Vec<Skipped>,
    /// Members whose evaluation failed.
    pub failures: Vec<Skipped>,
    /// Entries breaking an exact inequality.
    pub violations: Vec<String>,
}

impl EquivReport {
    /// `max(max_ratio, 1/min_ratio)`.
    pub fn spread(&self) -> Option<f64> {
        Some(self.max_ratio?.max(1.0 / self.min_ratio?))
    }

    pub fn summary(&self) -> String {
        let f = |v: Option<f64>| v.map_or("-".to_string(), |x| format!("{x:.4}"));
        format!(
            "{}: {} members, ratio in [{}, {}], median {}, drift {}, {} skipped, {} failed, {} violations -> {}",
            self.experiment,
            self.members.len(),
            f(self.min_ratio),
            f(self.max_ratio),
            f(self.median_ratio),
            f(self.drift),
            self.skipped.len(),
            self.failures.len(),
            self.violations.len(),
            if self.pass { "pass" } else { "FAIL" }
        )
    }
}

/// How the ratios of a report are judged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Criteria {
    /// Ratios must lie in `[1/ceiling, ceiling]`.
    pub two_sided: bool,
    /// Ratios must stay below `ceiling`.
    pub upper: bool,
    /// Every ratio must be at least this.
    pub exact_min: Option<f64>,
    /// Every ratio must be at most this.
    pub exact_max: Option<f64>,
    pub max_drift: Option<f64>,
}

impl Criteria {
    pub const TWO_SIDED: Criteria =
        Criteria { two_sided: true, upper: true, exact_min: None, exact_max: None, max_drift: Some(0.05) };
    pub const UPPER: Criteria =
        Criteria { two_sided: false, upper: true, exact_min: None, exact_max: None, max_drift: Some(0.05) };

    pub fn at_most(bound: f64) -> Self {
        Criteria { two_sided: false, upper: false, exact_min: None, exact_max: Some(bound), max_drift: None }
    }

    pub fn at_least(bound: f64) -> Self {
        Criteria { two_sided: false, upper: false, exact_min: Some(bound), exact_max: None, max_drift: None }
    }
}

/// One `(lhs, rhs)` pair produced for a member; `label` is appended to the
/// member id.
#[derive(Debug, Clone, PartialEq)]
pub struct Side {
    pub label: String,
    pub lhs: f64,
    pub rhs: f64,
}

impl Side {
    pub fn new(label: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self { label: label.into(), lhs, rhs }
    }
}

struct Pass {
    members: Vec<MemberRatio>,
    skipped: Vec<Skipped>,
    failures: Vec<Skipped>,
}

fn evaluate<E>(family: &[(String, StepRearrangement)], cfg: &NumConfig, eval: &E) -> Pass
where
    E: Fn(&StepRearrangement, &NumConfig) -> Result<Vec<Side>>,
{
    let mut out = Pass { members: Vec::new(), skipped: Vec::new(), failures: Vec::new() };
    for (id, f) in family {
        let sides = match eval(f, cfg) {
            Ok(s) => s,
            Err(e) => {
                out.failures.push(Skipped { id: id.clone(), reason: e.to_string() });
                continue;
            }
        };
        for s in sides {
            let id = format!("{id}{}", s.label);
            if s.lhs == 0.0 || s.rhs == 0.0 {
                out.skipped.push(Skipped { id, reason: "degenerate member skipped: zero on one side".into() });
            } else if !(s.lhs.is_finite() && s.rhs.is_finite() && s.lhs > 0.0 && s.rhs > 0.0) {
                out.failures.push(Skipped { id, reason: format!("non-finite sides ({}, {})", s.lhs, s.rhs) });
            } else {
                out.members.push(MemberRatio { id, lhs: s.lhs, rhs: s.rhs, ratio: s.lhs / s.rhs });
            }
        }
    }
    out
}

fn extremes(members: &[MemberRatio]) -> (Option<f64>, Option<f64>, Option<f64>) {
    if members.is_empty() {
        return (None, None, None);
    }
    let mut r: Vec<f64> = members.iter().map(|m| m.ratio).collect();
    r.sort_by(f64::total_cmp);
    let n = r.len();
    let median = if n % 2 == 1 { r[n / 2] } else { 0.5 * (r[n / 2 - 1] + r[n / 2]) };
    (Some(r[n - 1]), Some(r[0]), Some(median))
}

fn exact_violations(members: &[MemberRatio], criteria: &Criteria, tag: &str) -> Vec<String> {
    members
        .iter()
        .filter(|m| criteria.exact_min.is_some_and(|b| m.ratio < b) || criteria.exact_max.is_some_and(|b| m.ratio > b))
        .map(|m| format!("{}{tag}: ratio {}", m.id, m.ratio))
        .collect()
}

/// Runs `eval` over the family at `cfg` and at `cfg.refined()` and judges
/// the ratios by `criteria`.
pub fn run_family<E>(
    experiment: &str,
    params: Value,
    family: &FunctionFamily,
    cfg: &NumConfig,
    criteria: Criteria,
    eval: E,
) -> Result<EquivReport>
where
    E: Fn(&StepRearrangement, &NumConfig) -> Result<Vec<Side>>,
{
    cfg.validate()?;
    let base = evaluate(&family.discretize(cfg)?, cfg, &eval);
    let fine_cfg = cfg.refined();
    let fine = evaluate(&family.discretize(&fine_cfg)?, &fine_cfg, &eval);
    let (max_ratio, min_ratio, median_ratio) = extremes(&base.members);
    let (fine_max, _, _) = extremes(&fine.members);
    let drift = match (max_ratio, fine_max) {
        (Some(a), Some(b)) => Some((b - a).abs() / a),
        _ => None,
    };
    let mut violations = exact_violations(&base.members, &criteria, "");
    violations.extend(exact_violations(&fine.members, &criteria, " (refined)"));
    let mut failures = base.failures;
    failures.extend(fine.failures.into_iter().map(|f| Skipped { id: format!("{} (refined)", f.id), ..f }));
    let ceiling = cfg.ceiling;
    let in_bracket = match (max_ratio, min_ratio) {
        (Some(hi), Some(lo)) => {
            (!criteria.upper || hi <= ceiling) && (!criteria.two_sided || lo >= 1.0 / ceiling)
        }
        _ => true,
    };
    let drift_ok = match (criteria.max_drift, drift) {
        (Some(limit), Some(d)) => d < limit,
        _ => true,
    };
    let pass = failures.is_empty() && violations.is_empty() && in_bracket && drift_ok;
    Ok(EquivReport {
        experiment: experiment.to_string(),
        params,
        members: base.members,
        max_ratio,
        min_ratio,
        median_ratio,
        drift,
        ceiling,
        pass,
        seed: family.seed,
        skipped: base.skipped,
        failures,
        violations,
    })
}

/// `lhs/rhs` of an identification over a family.
pub fn run_identity_experiment(id: Identification, tp: &TargetParams, family: &FunctionFamily, cfg: &NumConfig) -> Result<EquivReport> {
    target_couple(id, tp)?;
    let params = serde_json::to_value(tp).map_err(|e| Error::BadParameter(e.to_string()))?;
    run_family(id.code(), params, family, cfg, Criteria::TWO_SIDED, |f, c| {
        let (lhs, rhs) = identify_target(id, f, tp, c)?;
        Ok(vec![Side::new("", lhs, rhs)])
    })
}

/// Oracle against explicit K-functional on the K-curve grid. Each member
/// contributes its largest and its smallest quotient.
pub fn k_bracket_check(couple: &CoupleSpec, family: &FunctionFamily, cfg: &NumConfig) -> Result<EquivReport> {
    couple.validate()?;
    let params = serde_json::to_value(couple).map_err(|e| Error::BadParameter(e.to_string()))?;
    run_family(&format!("k-bracket {}", couple.label()), params, family, cfg, Criteria::TWO_SIDED, |f, c| {
        if f.is_zero() {
            return Ok(vec![Side::new("", 0.0, 0.0)]);
        }
        let table = DecompositionTable::new(f, couple, c)?;
        let explicit = ExplicitK::new(f, couple, c)?;
        let mut hi = Side::new("@max", 0.0, 0.0);
        let mut lo = Side::new("@min", 0.0, 0.0);
        let (mut r_hi, mut r_lo) = (f64::NEG_INFINITY, f64::INFINITY);
        for t in UGrid::new(c.u_max, c.k_nodes)?.t_nodes() {
            let (ko, ke) = (table.k(t), explicit.k(t)?);
            if ko == 0.0 || ke == 0.0 {
                continue;
            }
            let r = ko / ke;
            if r > r_hi {
                r_hi = r;
                hi = Side::new("@max", ko, ke);
            }
            if r < r_lo {
                r_lo = r;
                lo = Side::new("@min", ko, ke);
            }
        }
        Ok(vec![hi, lo])
    })
}

/// The four weighted Hardy inequalities: power weights with `λ > 0`, or
/// pure logarithmic weights.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "display", rename_all = "snake_case")]
pub enum HardyDisplay {
    /// `∫[t^{-λ} u^β ∫_0^t Φ]^b dt/t ≲ ∫[t^{1-λ} u^β Φ]^b dt/t`.
    PowerHead { lambda: f64, b: f64, beta: f64 },
    /// `∫[t^{λ} u^β ∫_t^1 Φ]^b dt/t ≲ ∫[t^{1+λ} u^β Φ]^b dt/t`.
    PowerTail { lambda: f64, b: f64, beta: f64 },
    /// `∫[u^α ∫_0^t ψ]^a dt/t ≲ ∫[t u^{1+α} ψ]^a dt/t`, for `α + 1/a > 0`.
    LogHead { a: f64, alpha: f64 },
    /// `∫[u^α ∫_t^1 ψ]^a dt/t ≲ ∫[t u^{1+α} ψ]^a dt/t`, for `α + 1/a < 0`.
    LogTail { a: f64, alpha: f64 },
}

impl HardyDisplay {
    pub fn validate(&self) -> Result<()> {
        match *self {
            HardyDisplay::PowerHead { lambda, b, .. } | HardyDisplay::PowerTail { lambda, b, .. } => {
                if !(lambda > 0.0) {
                    return Err(Error::BadExponent(format!("λ = {lambda} must be positive")));
                }
                if !(b >= 1.0) {
                    return Err(Error::BadExponent(format!("b = {b} below 1")));
                }
            }
            HardyDisplay::LogHead { a, alpha } | HardyDisplay::LogTail { a, alpha } => {
                if !(a >= 1.0) {
                    return Err(Error::BadExponent(format!("a = {a} below 1")));
                }
                let s = alpha + 1.0 / a;
                let head = matches!(self, HardyDisplay::LogHead { .. });
                if (head && !(s > 0.0)) || (!head && !(s < 0.0)) {
                    return Err(Error::BadExponent(format!("α + 1/a = {s} has the wrong sign for this display")));
                }
            }
        }
        Ok(())
    }

    /// `(left weight (a, b), right weight (a, b), exponent, uses prefix)`:
    /// the integrands are `[t^a u^b F(t)]^e` with `F` the prefix or suffix
    /// integral on the left and `Φ` itself on the right.
    fn shape(&self) -> ((f64, f64), (f64, f64), f64, bool) {
        match *self {
            HardyDisplay::PowerHead { lambda, b, beta } => ((-lambda, beta), (1.0 - lambda, beta), b, true),
            HardyDisplay::PowerTail { lambda, b, beta } => ((lambda, beta), (1.0 + lambda, beta), b, false),
            HardyDisplay::LogHead { a, alpha } => ((0.0, alpha), (1.0, 1.0 + alpha), a, true),
            HardyDisplay::LogTail { a, alpha } => ((0.0, alpha), (1.0, 1.0 + alpha), a, false),
        }
    }
}

/// `(lhs, rhs)` of a Hardy display for one nonnegative step integrand,
/// both raised to `1/exponent`.
pub fn hardy_sides(phi: &StepFunction, display: &HardyDisplay, cfg: &NumConfig) -> Result<(f64, f64)> {
    display.validate()?;
    let ((la, lb), (ra, rb), e, head) = display.shape();
    let pp = PowerPrefix::new(phi, 1.0);
    let ln_w = |t: f64, a: f64, b: f64| a * t.ln() + b * u_of(t).ln();
    let left = |t: f64| {
        let v = if head { pp.head(t) } else { pp.tail(t) };
        if v <= 0.0 {
            f64::NEG_INFINITY
        } else {
            ln_w(t, la, lb) + v.ln()
        }
    };
    let right = |t: f64| {
        let i = phi.panel_index(t);
        let v = phi.values()[i];
        if v <= 0.0 {
            f64::NEG_INFINITY
        } else {
            ln_w(t, ra, rb) + v.ln()
        }
    };
    let side = |g: &dyn Fn(f64) -> f64| -> Result<f64> {
        if e.is_infinite() {
            let grid = UGrid::new(cfg.u_max, cfg.sup_count)?;
            Ok(sup_on_grid(&|t| g(t).exp(), &grid, phi.breaks(), cfg.golden_tol)?.0)
        } else {
            let v = integrate_dt_over_t(&|t| (e * g(t)).exp(), 0.0, 1.0, phi.breaks(), cfg.rel_tol, cfg.max_depth)?;
            Ok(v.powf(1.0 / e))
        }
    };
    Ok((side(&left)?, side(&right)?))
}

/// Hardy display over a family of integrands; one-sided bracket.
pub fn hardy_check(display: &HardyDisplay, family: &FunctionFamily, cfg: &NumConfig) -> Result<EquivReport> {
    display.validate()?;
    let params = serde_json::to_value(display).map_err(|e| Error::BadParameter(e.to_string()))?;
    run_family("hardy", params, family, cfg, Criteria::UPPER, |f, c| {
        let (l, r) = hardy_sides(f.as_step(), display, c)?;
        Ok(vec![Side::new("", l, r)])
    })
}

/// Exponents of the supremum-smoothing equivalence
/// `∫[t^ν u^{b} sup_{s>t} u(s)^{-c} K(s)]^r dt/t ≈ ∫[t^ν u^{b-c} K(t)]^r dt/t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "snake_case")]
pub enum SmoothingForm {
    /// `ν = 1-θ`, `b = α(1-θ)/q`, `c = α/q`.
    Interpolation { theta: f64, r: f64, alpha: f64, q: f64 },
    /// `ν`, `b = β`, `c = 1/q`.
    General { nu: f64, beta: f64, q: f64, r: f64 },
}

impl SmoothingForm {
    /// `(ν, b, c, r)`.
    fn exponents(&self) -> Result<(f64, f64, f64, f64)> {
        let (nu, b, c, r) = match *self {
            SmoothingForm::Interpolation { theta, r, alpha, q } => {
                if !(theta > 0.0 && theta < 1.0) || !(alpha > 0.0) || !(q > 1.0) {
                    return Err(Error::BadExponent("needs 0 < θ < 1, α > 0, q > 1".into()));
                }
                (1.0 - theta, alpha * (1.0 - theta) / q, alpha / q, r)
            }
            SmoothingForm::General { nu, beta, q, r } => {
                if !(nu > 0.0) || !(q > 0.0) {
                    return Err(Error::BadExponent("needs ν > 0, q > 0".into()));
                }
                (nu, beta, 1.0 / q, r)
            }
        };
        if !(r >= 1.0 && r.is_finite()) {
            return Err(Error::BadExponent(format!("r = {r} outside [1, ∞)")));
        }
        Ok((nu, b, c, r))
    }
}

/// `(I_r, I_d)` for a nonincreasing step function `kd`. The inner supremum
/// is exact: on each panel `u(s)^{-c}` increases, so the panel's share is
/// its right-end value.
pub fn sup_smoothing_pair(kd: &StepFunction, form: &SmoothingForm, cfg: &NumConfig) -> Result<(f64, f64)> {
    if !kd.is_nonincreasing() {
        return Err(Error::NotMonotone);
    }
    let (nu, b, c, r) = form.exponents()?;
    let n = kd.len();
    let mut running = vec![0.0f64; n + 1];
    for i in (0..n).rev() {
        let right = u_of(kd.breaks()[i + 1]).powf(-c) * kd.values()[i];
        running[i] = running[i + 1].max(right);
    }
    let bracket = |t: f64, v: f64, b: f64| {
        if v <= 0.0 {
            0.0
        } else {
            (r * (nu * t.ln() + b * u_of(t).ln() + v.ln())).exp()
        }
    };
    let i_r = |t: f64| bracket(t, running[kd.panel_index(t)], b);
    let i_d = |t: f64| bracket(t, kd.values()[kd.panel_index(t)], b - c);
    let lhs = integrate_dt_over_t(&i_r, 0.0, 1.0, kd.breaks(), cfg.rel_tol, cfg.max_depth)?;
    let rhs = integrate_dt_over_t(&i_d, 0.0, 1.0, kd.breaks(), cfg.rel_tol, cfg.max_depth)?;
    Ok((lhs.powf(1.0 / r), rhs.powf(1.0 / r)))
}

/// `I_r / I_d` over a family of decreasing `K_d`; two-sided bracket plus
/// the exact direction `I_r ≥ I_d`.
pub fn sup_smoothing_check(form: &SmoothingForm, family: &FunctionFamily, cfg: &NumConfig) -> Result<EquivReport> {
    form.exponents()?;
    let params = serde_json::to_value(form).map_err(|e| Error::BadParameter(e.to_string()))?;
    let criteria = Criteria { exact_min: Some(1.0 - 1e-9), ..Criteria::TWO_SIDED };
    run_family("sup-smoothing", params, family, cfg, criteria, |f, c| {
        let (l, r) = sup_smoothing_pair(f.as_step(), form, c)?;
        Ok(vec![Side::new("", l, r)])
    })
}

/// Block integrals `∫_{t_{k+1}}^{t_k} h` for `k = 0..=LAST_BLOCK`.
fn blocks(pp: &PowerPrefix<'_>) -> Vec<f64> {
    (0..=LAST_BLOCK).map(|k| pp.between(block_point(k + 1), block_point(k))).collect()
}

/// `Σ_k c_k^q 2^{s k q}` over the block range, skipping zero terms.
fn weighted_sum(terms: impl Iterator<Item = (u32, f64)>, s: f64, q: f64) -> f64 {
    terms
        .filter(|&(_, c)| c > 0.0)
        .map(|(k, c)| (q * (c.ln() + s * k as f64 * std::f64::consts::LN_2)).exp())
        .sum()
}

/// `Σ_{k ≥ 0} (∫_{t_{k+1}}^1 h)^q 2^{-λkq}` with `λ > 0`; from `k = LAST_BLOCK + 1`
/// on the integral is the whole mass and the geometric remainder is summed
/// in closed form.
fn suffix_sum(pp: &PowerPrefix<'_>, lambda: f64, q: f64) -> f64 {
    let total = pp.total();
    let head = weighted_sum((0..=LAST_BLOCK).map(|k| (k, pp.tail(block_point(k + 1)))), -lambda, q);
    let ratio = (-lambda * q * std::f64::consts::LN_2).exp();
    let k0 = (LAST_BLOCK + 1) as f64;
    head + total.powf(q) * ratio.powf(k0) / (1.0 - ratio)
}

/// Both sides of the discrete and continuous block estimates for one
/// nonnegative step function `h`, with `λ > 0`, `q > 0`:
///
/// * prefix sums against weighted blocks, and suffix sums against
///   weighted blocks;
/// * prefix sums against `∫[u^λ ∫_0^t h]^q dt/(u t)`, suffix sums with `-λ`
///   against the suffix integral, and the unweighted prefix version.
pub fn discretization_sides(h: &StepFunction, lambda: f64, q: f64, cfg: &NumConfig) -> Result<Vec<Side>> {
    if !(lambda > 0.0) || !(q > 0.0) {
        return Err(Error::BadExponent(format!("needs λ > 0 and q > 0, got λ = {lambda}, q = {q}")));
    }
    let pp = PowerPrefix::new(h, 1.0);
    let b = blocks(&pp);
    let idx = || (0..=LAST_BLOCK).map(|k| (k, b[k as usize]));
    let prefixes = |s: f64| weighted_sum((0..=LAST_BLOCK).map(|k| (k, pp.head(block_point(k)))), s, q);
    let integral = |head: bool, lam: f64| -> Result<f64> {
        let g = |t: f64| {
            let v = if head { pp.head(t) } else { pp.tail(t) };
            if v <= 0.0 {
                0.0
            } else {
                let u = u_of(t);
                (q * (lam * u.ln() + v.ln()) - u.ln()).exp()
            }
        };
        integrate_dt_over_t(&g, 0.0, 1.0, h.breaks(), cfg.rel_tol, cfg.max_depth)
    };
    Ok(vec![
        Side::new("/prefix-vs-blocks", prefixes(lambda), weighted_sum(idx(), lambda, q)),
        Side::new("/suffix-vs-blocks", suffix_sum(&pp, lambda, q), weighted_sum(idx(), -lambda, q)),
        Side::new("/prefix-vs-integral", prefixes(lambda), integral(true, lambda)?),
        Side::new("/suffix-vs-integral", suffix_sum(&pp, lambda, q), integral(false, -lambda)?),
        Side::new("/unweighted-prefix-vs-integral", prefixes(0.0), integral(true, 0.0)?),
    ])
}

/// `2^k` against `1 - Log s` at both ends of each block, and
/// `∫_{t_{k+1}}^{t_k} u^{λ-1} dt/t` against `2^{kλ}`, for `k = 0..=k_max`.
pub fn block_scale_sides(lambda: f64, k_max: u32) -> Result<Vec<Side>> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::BadExponent(format!("λ = {lambda} must be finite and nonzero")));
    }
    let ln2 = std::f64::consts::LN_2;
    // u(t_k) = 1 + (2^k - 1) Log 2, computed without forming t_k
    let u_k = |k: u32| 1.0 + (2f64.powi(k as i32) - 1.0) * ln2;
    let mut out = Vec::new();
    for k in 0..=k_max {
        let two_k = 2f64.powi(k as i32);
        out.push(Side::new(format!("k={k}/upper-end"), two_k, u_k(k)));
        out.push(Side::new(format!("k={k}/lower-end"), two_k, u_k(k + 1)));
        let integral = power_u_integral(lambda - 1.0, u_k(k), u_k(k + 1))?;
        out.push(Side::new(format!("k={k}/block-integral"), integral, two_k.powf(lambda)));
    }
    Ok(out)
}

/// Block estimates over a family of step functions, plus the
/// function-independent scale comparisons; all two-sided.
pub fn discretization_check(lambda: f64, q: f64, family: &FunctionFamily, cfg: &NumConfig) -> Result<EquivReport> {
    let scale = block_scale_sides(lambda, 40)?;
    let params = json!({ "lambda": lambda, "q": q });
    let mut report = run_family("discretization", params, family, cfg, Criteria::TWO_SIDED, |f, c| {
        discretization_sides(f.as_step(), lambda, q, c)
    })?;
    report.members.extend(
        scale
            .into_iter()
            .map(|s| MemberRatio { id: format!("scale/{}", s.label), lhs: s.lhs, rhs: s.rhs, ratio: s.lhs / s.rhs }),
    );
    let (max_ratio, min_ratio, median_ratio) = extremes(&report.members);
    report.max_ratio = max_ratio;
    report.min_ratio = min_ratio;
    report.median_ratio = median_ratio;
    let ceiling = cfg.ceiling;
    let in_bracket = matches!((max_ratio, min_ratio), (Some(hi), Some(lo)) if hi <= ceiling && lo >= 1.0 / ceiling);
    report.pass = report.pass && in_bracket;
    Ok(report)
}

/// `(sup_{0<t<x} t^a f_*(t), 2 (Log 2)^{1/r'} (∫_0^x s^{ra-1} f_*^r ds)^{1/r})`
/// with `a = (1-ε)/p`, both exact on step data.
pub fn prop_sup_power_sides(f: &StepRearrangement, p: f64, r: f64, eps: f64, x: f64) -> Result<(f64, f64)> {
    if !(eps > 0.0 && eps < 1.0) || !(r > 1.0 && r.is_finite()) || !(p >= 1.0) {
        return Err(Error::BadExponent(format!("needs 0 < ε < 1, 1 < r < ∞, p ≥ 1; got ε = {eps}, r = {r}, p = {p}")));
    }
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::BadPoint(x));
    }
    let a = (1.0 - eps) / p;
    let mut lhs: f64 = 0.0;
    let mut integral = 0.0;
    for i in 0..f.len() {
        let (lo, hi) = (f.breaks()[i], f.breaks()[i + 1].min(x));
        if lo >= hi {
            break;
        }
        let v = f.values()[i];
        lhs = lhs.max(hi.powf(a) * v);
        integral += v.powf(r) * (hi.powf(r * a) - lo.powf(r * a)) / (r * a);
    }
    let r_conj = r / (r - 1.0);
    let constant = 2.0 * std::f64::consts::LN_2.powf(1.0 / r_conj);
    Ok((lhs, constant * integral.powf(1.0 / r)))
}

/// Asserts the explicit-constant supremum bound for every member at every
/// `x` in `xs`.
pub fn sup_power_check(p: f64, r: f64, eps: f64, xs: &[f64], family: &FunctionFamily, cfg: &NumConfig) -> Result<EquivReport> {
    let params = json!({ "p": p, "r": r, "eps": eps, "x": xs });
    run_family("sup-power-bound", params, family, cfg, Criteria::at_most(1.0 + 1e-12), |f, _| {
        xs.iter()
            .map(|&x| {
                let (l, r) = prop_sup_power_sides(f, p, r, eps, x)?;
                Ok(Side::new(format!("@x={x}"), l, r))
            })
            .collect()
    })
}

/// Which of the two Grand-norm domination estimates to run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "estimate", rename_all = "snake_case")]
pub enum GrandDomination {
    /// `sup t^{-1} u^{-α/p} ∫_0^{t^σ} f_*`, `σ = p/(p-1)`, against the Grand norm.
    L1Head { p: f64, alpha: f64 },
    /// `sup t^{1/q-1/p} u^{-α/q} (∫_0^t f_*^p)^{1/p}` against the Grand `q` norm.
    LpHead { p: f64, q: f64, alpha: f64 },
}

/// `(lhs, rhs)` of a Grand-norm domination estimate.
pub fn grand_domination_sides(f: &StepRearrangement, which: &GrandDomination, cfg: &NumConfig) -> Result<(f64, f64)> {
    if f.is_zero() {
        return Ok((0.0, 0.0));
    }
    let grid = UGrid::new(cfg.u_max, cfg.sup_count)?;
    match *which {
        GrandDomination::L1Head { p, alpha } => {
            if !(p > 1.0 && p.is_finite()) || !(alpha > 0.0) {
                return Err(Error::BadExponent("needs 1 < p < ∞, α > 0".into()));
            }
            let sigma = p / (p - 1.0);
            let pp = PowerPrefix::new(f, 1.0);
            let g = |t: f64| pp.head(t.powf(sigma)) / t * u_of(t).powf(-alpha / p);
            let breaks: Vec<f64> = f.breaks().iter().map(|x| x.powf(1.0 / sigma)).collect();
            let lhs = sup_on_grid(&g, &grid, &breaks, cfg.golden_tol)?.0;
            Ok((lhs, grand_norm(f, p, alpha)?))
        }
        GrandDomination::LpHead { p, q, alpha } => {
            if !(p > 1.0 && q > p && q.is_finite()) || !(alpha > 0.0) {
                return Err(Error::BadExponent("needs 1 < p < q < ∞, α > 0".into()));
            }
            let pp = PowerPrefix::new(f, p);
            let g = |t: f64| t.powf(1.0 / q - 1.0 / p) * u_of(t).powf(-alpha / q) * pp.head(t).powf(1.0 / p);
            let lhs = sup_on_grid(&g, &grid, f.breaks(), cfg.golden_tol)?.0;
            Ok((lhs, grand_norm(f, q, alpha)?))
        }
    }
}

/// Grand-norm domination over a family; one-sided bracket.
pub fn grand_domination_check(which: &GrandDomination, family: &FunctionFamily, cfg: &NumConfig) -> Result<EquivReport> {
    let params = serde_json::to_value(which).map_err(|e| Error::BadParameter(e.to_string()))?;
    run_family("grand-domination", params, family, cfg, Criteria::UPPER, |f, c| {
        let (l, r) = grand_domination_sides(f, which, c)?;
        Ok(vec![Side::new("", l, r)])
    })
}

/// `max_g ∫ f_* g_* / ‖g‖_X` over the candidates: a lower bound for the
/// associate norm of `f`.
pub fn associate_lower_bound(f: &StepRearrangement, space: &SpaceSpec, candidates: &[StepRearrangement], cfg: &NumConfig) -> Result<f64> {
    let mut best: f64 = 0.0;
    for g in candidates {
        if g.is_zero() {
            continue;
        }
        let n = norm(g, space, cfg)?;
        if n > 0.0 && n.is_finite() {
            best = best.max(f.pairing(g) / n);
        }
    }
    Ok(best)
}

/// Associate lower bound of the Grand space `L^{p),α}` against the small
/// norm with the conjugate exponent; one-sided bracket.
pub fn associate_check(p: f64, alpha: f64, family: &FunctionFamily, cfg: &NumConfig) -> Result<EquivReport> {
    let space = SpaceSpec::Grand { p, alpha };
    space.validate()?;
    let p_conj = p / (p - 1.0);
    let params = json!({ "p": p, "alpha": alpha });
    run_family("associate-grand", params, family, cfg, Criteria::UPPER, |f, c| {
        let candidates: Vec<StepRearrangement> = family.discretize(c)?.into_iter().map(|(_, g)| g).collect();
        let lb = associate_lower_bound(f, &space, &candidates, c)?;
        Ok(vec![Side::new("", lb, small_norm(f, p_conj, alpha, c)?)])
    })
}

/// The lower estimate of a double-weight Gamma norm on `(0, |E|)`,
/// asserted for every `|E|` in `measures` (ratio `lhs/rhs ≥ 1 - 1e-8`).
pub fn gamma_lower_bound_check(space: &GammaDouble, measures: &[f64], family: &FunctionFamily, cfg: &NumConfig) -> Result<EquivReport> {
    let params = serde_json::to_value(space).map_err(|e| Error::BadParameter(e.to_string()))?;
    run_family("gamma-lower-bound", params, family, cfg, Criteria::at_least(1.0 - 1e-8), |f, c| {
        measures
            .iter()
            .map(|&e| {
                let (l, r) = ggamma_lower_bound_check(f, space, e, c)?;
                Ok(Side::new(format!("@E={e}"), l, r))
            })
            .collect()
    })
}

/// One row of an oracle-against-explicit K table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KRow {
    pub t: f64,
    #[serde(rename = "K_oracle")]
    pub k_oracle: f64,
    #[serde(rename = "K_explicit")]
    pub k_explicit: f64,
    /// Empty where the explicit value vanishes.
    pub ratio: Option<f64>,
}

/// Oracle and explicit K-functional of `f` at the K-curve nodes.
pub fn k_table(f: &StepRearrangement, couple: &CoupleSpec, cfg: &NumConfig) -> Result<Vec<KRow>> {
    couple.validate()?;
    let table = DecompositionTable::new(f, couple, cfg)?;
    let explicit = ExplicitK::new(f, couple, cfg)?;
    UGrid::new(cfg.u_max, cfg.k_nodes)?
        .t_nodes()
        .into_iter()
        .map(|t| {
            let (k_oracle, k_explicit) = (table.k(t), explicit.k(t)?);
            let ratio = (k_explicit > 0.0).then(|| k_oracle / k_explicit);
            Ok(KRow { t, k_oracle, k_explicit, ratio })
        })
        .collect()
}

fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Error::Io(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Io(e.to_string()))
}

/// `t,K_oracle,K_explicit,ratio`.
pub fn k_table_csv(rows: &[KRow]) -> Result<String> {
    if rows.is_empty() {
        return Ok("t,K_oracle,K_explicit,ratio\n".into());
    }
    to_csv(rows)
}

#[derive(Serialize)]
struct CsvMember<'a> {
    function_id: &'a str,
    lhs: f64,
    rhs: f64,
    ratio: f64,
}

/// `function_id,lhs,rhs,ratio` for every evaluated member.
pub fn members_csv(report: &EquivReport) -> Result<String> {
    if report.members.is_empty() {
        return Ok("function_id,lhs,rhs,ratio\n".into());
    }
    let rows: Vec<CsvMember<'_>> = report
        .members
        .iter()
        .map(|m| CsvMember { function_id: &m.id, lhs: m.lhs, rhs: m.rhs, ratio: m.ratio })
        .collect();
    to_csv(&rows)
}
