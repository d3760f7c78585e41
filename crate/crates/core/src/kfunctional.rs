//! K-functionals of the couples built from Lebesgue, Grand and small
//! spaces: a decomposition-search oracle and the explicit equivalents.

use serde::{Deserialize, Serialize};

use crate::config::NumConfig;
use crate::error::{Error, Result};
use crate::logcalc::{integrate_dt_over_t, u_of, LogWeight, MonotoneMap, UGrid};
use crate::norms::{norm, sup_log_tail, SpaceSpec};
use crate::rearrangement::{discretize_model, FunctionModel, PowerPrefix, StepRearrangement};

/// A compatible couple `(X0, X1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "couple", rename_all = "snake_case")]
pub enum CoupleSpec {
    /// `(L^p, L^q)`.
    LpLq {
        p: f64,
        #[serde(with = "crate::norms::exponent")]
        q: f64,
    },
    /// `(L^{p),α}, L^q)`.
    GrandLq { p: f64, q: f64, alpha: f64 },
    /// `(L^{p),α}, L^{q),α})`.
    GrandGrand { p: f64, q: f64, alpha: f64 },
    /// `(L^{(p}, L^{(q})` with log exponent 1.
    SmallSmall { p: f64, q: f64 },
    /// `(L^{p)}, L^{(p})` with log exponent 1.
    GrandSmallSameP { p: f64 },
    /// Any two spaces with closed-form fundamental functions.
    General { x0: SpaceSpec, x1: SpaceSpec },
}

impl CoupleSpec {
    pub fn validate(&self) -> Result<()> {
        let ordered = |p: f64, q: f64| {
            if p < q {
                Ok(())
            } else {
                Err(Error::BadExponent(format!("couple needs p < q, got p = {p}, q = {q}")))
            }
        };
        match *self {
            CoupleSpec::LpLq { p, q } => {
                if !(p >= 1.0 && p.is_finite()) {
                    return Err(Error::BadExponent(format!("p = {p} outside [1, ∞)")));
                }
                ordered(p, q)
            }
            CoupleSpec::GrandLq { p, q, .. } | CoupleSpec::GrandGrand { p, q, .. } | CoupleSpec::SmallSmall { p, q } => {
                ordered(p, q)?;
                let (x0, x1) = self.spaces();
                x0.validate()?;
                x1.validate()?;
                if !q.is_finite() {
                    return Err(Error::BadExponent("q must be finite".into()));
                }
                Ok(())
            }
            CoupleSpec::GrandSmallSameP { .. } => {
                let (x0, x1) = self.spaces();
                x0.validate()?;
                x1.validate()
            }
            CoupleSpec::General { x0, x1 } => {
                x0.validate()?;
                x1.validate()?;
                if x0.fundamental_weight().is_none() || x1.fundamental_weight().is_none() {
                    return Err(Error::BadParameter("general couples need closed-form fundamental functions".into()));
                }
                MonotoneMap::new(self.psi_weight()).map(|_| ())
            }
        }
    }

    /// `(X0, X1)`.
    pub fn spaces(&self) -> (SpaceSpec, SpaceSpec) {
        match *self {
            CoupleSpec::LpLq { p, q } => (SpaceSpec::Lebesgue { p }, SpaceSpec::Lebesgue { p: q }),
            CoupleSpec::GrandLq { p, q, alpha } => (SpaceSpec::Grand { p, alpha }, SpaceSpec::Lebesgue { p: q }),
            CoupleSpec::GrandGrand { p, q, alpha } => (SpaceSpec::Grand { p, alpha }, SpaceSpec::Grand { p: q, alpha }),
            CoupleSpec::SmallSmall { p, q } => (SpaceSpec::Small { p, alpha: 1.0 }, SpaceSpec::Small { p: q, alpha: 1.0 }),
            CoupleSpec::GrandSmallSameP { p } => (SpaceSpec::Grand { p, alpha: 1.0 }, SpaceSpec::Small { p, alpha: 1.0 }),
            CoupleSpec::General { x0, x1 } => (x0, x1),
        }
    }

    /// The increasing map `ψ` whose inverse locates the split point of the
    /// explicit formula.
    pub fn psi_weight(&self) -> LogWeight {
        match *self {
            CoupleSpec::LpLq { p, q } => LogWeight { a: 1.0 / p - 1.0 / q, b: 0.0 },
            CoupleSpec::GrandLq { p, q, alpha } => LogWeight { a: 1.0 / p - 1.0 / q, b: -alpha / p },
            CoupleSpec::GrandGrand { p, q, alpha } => LogWeight { a: 1.0 / p - 1.0 / q, b: -alpha / p + alpha / q },
            CoupleSpec::SmallSmall { p, q } => LogWeight { a: 1.0 / p - 1.0 / q, b: (p - q + p * q) / (p * q) },
            CoupleSpec::GrandSmallSameP { .. } => LogWeight { a: 0.0, b: -1.0 },
            CoupleSpec::General { x0, x1 } => {
                let w0 = x0.fundamental_weight().unwrap_or(LogWeight::unit());
                let w1 = x1.fundamental_weight().unwrap_or(LogWeight::unit());
                w0.times(&w1.recip())
            }
        }
    }

    pub fn psi(&self) -> Result<MonotoneMap> {
        MonotoneMap::new(self.psi_weight())
    }

    pub fn label(&self) -> String {
        match self {
            CoupleSpec::LpLq { p, q } => format!("lp_lq(p={p}, q={q})"),
            CoupleSpec::GrandLq { p, q, alpha } => format!("grand_lq(p={p}, q={q}, alpha={alpha})"),
            CoupleSpec::GrandGrand { p, q, alpha } => format!("grand_grand(p={p}, q={q}, alpha={alpha})"),
            CoupleSpec::SmallSmall { p, q } => format!("small_small(p={p}, q={q})"),
            CoupleSpec::GrandSmallSameP { p } => format!("grand_small_same_p(p={p})"),
            CoupleSpec::General { x0, x1 } => format!("general({}, {})", x0.label(), x1.label()),
        }
    }
}

/// `(‖g_c‖_{X0}, ‖h_c‖_{X1})` for every truncation level `c` of `f`, with
/// `g_c = (f - c)_+` and `h_c = min(f, c)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecompositionTable {
    pairs: Vec<(f64, f64)>,
}

impl DecompositionTable {
    pub fn new(f: &StepRearrangement, couple: &CoupleSpec, cfg: &NumConfig) -> Result<Self> {
        couple.validate()?;
        if f.is_zero() {
            return Ok(Self { pairs: vec![(0.0, 0.0)] });
        }
        let (x0, x1) = couple.spaces();
        let mut levels: Vec<f64> = f.values().to_vec();
        levels.push(0.0);
        levels.sort_by(|a, b| b.total_cmp(a));
        levels.dedup();
        let mut pairs = Vec::with_capacity(levels.len());
        for &c in &levels {
            let a = norm(&f.excess_over(c), &x0, cfg);
            let b = norm(&f.capped_at(c), &x1, cfg);
            if let (Ok(a), Ok(b)) = (a, b) {
                if a.is_finite() && b.is_finite() {
                    pairs.push((a, b));
                }
            }
        }
        if pairs.is_empty() {
            return Err(Error::InfiniteNorm);
        }
        Ok(Self { pairs })
    }

    /// `min_c ‖g_c‖_{X0} + t ‖h_c‖_{X1}`.
    pub fn k(&self, t: f64) -> f64 {
        self.pairs.iter().map(|&(a, b)| a + t * b).fold(f64::INFINITY, f64::min)
    }

    pub fn pairs(&self) -> &[(f64, f64)] {
        &self.pairs
    }
}

/// Upper estimate of `K(f, t)` by truncation of `f_*` at each of its levels.
pub fn k_oracle(f: &StepRearrangement, couple: &CoupleSpec, t: f64, cfg: &NumConfig) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::BadPoint(t));
    }
    Ok(DecompositionTable::new(f, couple, cfg)?.k(t))
}

/// Evaluator of the explicit K formula of one couple for one function.
pub struct ExplicitK<'a> {
    f: &'a StepRearrangement,
    couple: CoupleSpec,
    psi: MonotoneMap,
    pp_p: PowerPrefix<'a>,
    pp_q: Option<PowerPrefix<'a>>,
    cfg: NumConfig,
}

impl<'a> ExplicitK<'a> {
    /// Prepares the evaluator; general couples have their C-conditions
    /// checked here.
    pub fn new(f: &'a StepRearrangement, couple: &CoupleSpec, cfg: &NumConfig) -> Result<Self> {
        couple.validate()?;
        if let CoupleSpec::General { x0, x1 } = couple {
            let grid = UGrid::new(cfg.u_max, cfg.k_nodes.min(64))?;
            let report = check_c_conditions(x0, x1, &grid, cfg)?;
            if !report.pass {
                return Err(Error::ConditionCheckFailed(report.summary()));
            }
        }
        let (p, q) = match *couple {
            CoupleSpec::LpLq { p, q } | CoupleSpec::GrandLq { p, q, .. } | CoupleSpec::GrandGrand { p, q, .. } => (p, Some(q)),
            CoupleSpec::SmallSmall { p, q } => (p, Some(q)),
            CoupleSpec::GrandSmallSameP { p } => (p, None),
            CoupleSpec::General { .. } => (1.0, None),
        };
        let pp_q = q.filter(|q| q.is_finite()).map(|q| PowerPrefix::new(f, q));
        Ok(Self { f, couple: *couple, psi: couple.psi()?, pp_p: PowerPrefix::new(f, p), pp_q, cfg: *cfg })
    }

    /// `φ(t) = ψ^{-1}(t)`.
    pub fn phi(&self, t: f64) -> Result<f64> {
        match self.couple {
            CoupleSpec::LpLq { p, q } => {
                let sigma = if q.is_infinite() { p } else { p * q / (q - p) };
                Ok(t.powf(sigma).min(1.0))
            }
            CoupleSpec::GrandSmallSameP { .. } => Ok((1.0 - 1.0 / t).exp().min(1.0)),
            _ => self.psi.solve(t),
        }
    }

    pub fn k(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::BadPoint(t));
        }
        if self.f.is_zero() {
            return Ok(0.0);
        }
        let f = self.f;
        let cfg = &self.cfg;
        let x = self.phi(t)?;
        Ok(match self.couple {
            CoupleSpec::LpLq { p, q } => {
                let head = self.pp_p.head(x).powf(1.0 / p);
                let tail = match &self.pp_q {
                    Some(pq) => pq.tail(x).powf(1.0 / q),
                    None => f.value_right_of(x),
                };
                head + t * tail
            }
            CoupleSpec::GrandLq { p, q, alpha } => {
                let first = sup_log_tail(&self.pp_p, p, alpha / p, 0.0, x, x);
                let pq = self.pp_q.as_ref().expect("finite q");
                first + t * pq.tail(x).powf(1.0 / q)
            }
            CoupleSpec::GrandGrand { p, q, alpha } => {
                let first = sup_log_tail(&self.pp_p, p, alpha / p, 0.0, x, x);
                let pq = self.pp_q.as_ref().expect("finite q");
                first + t * sup_log_tail(pq, q, alpha / q, x, 1.0, 1.0)
            }
            CoupleSpec::SmallSmall { p, q } => {
                let pp = &self.pp_p;
                let g = |s: f64| u_of(s).powf(-1.0 / p) * pp.head(s).powf(1.0 / p);
                let k1 = integrate_dt_over_t(&g, 0.0, x, f.breaks(), cfg.rel_tol, cfg.max_depth)?;
                let k2 = u_of(t).powf((p - 1.0) / p) * pp.head(x).powf(1.0 / p);
                let pq = self.pp_q.as_ref().expect("finite q");
                let k3 = t * sup_log_tail(pq, q, 1.0 / q, x, 1.0, 1.0);
                k1 + k2 + k3
            }
            CoupleSpec::GrandSmallSameP { p } => {
                let pp = &self.pp_p;
                let first = sup_log_tail(pp, p, 1.0 / p, 0.0, x, x);
                let g = |s: f64| u_of(s).powf(-1.0 / p) * pp.between(x, s).powf(1.0 / p);
                let second = if x < 1.0 {
                    integrate_dt_over_t(&g, x, 1.0, f.breaks(), cfg.rel_tol, cfg.max_depth)?
                } else {
                    0.0
                };
                first + t * second
            }
            CoupleSpec::General { x0, x1 } => norm(&f.head(x), &x0, cfg)? + t * norm(&f.tail(x), &x1, cfg)?,
        })
    }
}

/// Explicit equivalent of `K(f, t)` for the couple.
pub fn k_explicit(f: &StepRearrangement, couple: &CoupleSpec, t: f64, cfg: &NumConfig) -> Result<f64> {
    ExplicitK::new(f, couple, cfg)?.k(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KMethod {
    Oracle,
    Explicit,
}

/// `t ↦ K(f, t)` sampled on a logarithmic grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KCurve {
    pub t_nodes: Vec<f64>,
    pub k_values: Vec<f64>,
    /// `K` nondecreasing in `t`.
    pub monotone: bool,
    /// `K(t)/t` nonincreasing in `t`.
    pub concave: bool,
}

const SHAPE_SLACK: f64 = 1e-9;

impl KCurve {
    pub fn new(t_nodes: Vec<f64>, k_values: Vec<f64>) -> Result<Self> {
        if t_nodes.len() != k_values.len() || t_nodes.len() < 2 {
            return Err(Error::BadParameter("a K-curve needs at least two (t, K) pairs".into()));
        }
        if t_nodes.windows(2).any(|w| !(w[1] > w[0])) || t_nodes[0] <= 0.0 {
            return Err(Error::BadParameter("K-curve nodes must be positive and increasing".into()));
        }
        if k_values.iter().any(|&k| !(k >= 0.0) || !k.is_finite()) {
            return Err(Error::BadParameter("K values must be finite and nonnegative".into()));
        }
        let slack = |a: f64, b: f64| SHAPE_SLACK * a.abs().max(b.abs());
        let monotone = k_values.windows(2).all(|w| w[1] >= w[0] - slack(w[0], w[1]));
        let concave = t_nodes
            .windows(2)
            .zip(k_values.windows(2))
            .all(|(t, k)| k[1] / t[1] <= k[0] / t[0] + slack(k[0] / t[0], k[1] / t[1]));
        Ok(Self { t_nodes, k_values, monotone, concave })
    }

    pub fn is_zero(&self) -> bool {
        self.k_values.iter().all(|&k| k == 0.0)
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self { k_values: self.k_values.iter().map(|k| k * lambda).collect(), ..self.clone() }
    }

    /// `K(t)`, interpolated as a power law between nodes, continued by
    /// `K(t_1) t/t_1` below the first node and held constant above the last.
    pub fn value_at(&self, t: f64) -> f64 {
        let (ts, ks) = (&self.t_nodes, &self.k_values);
        if t <= ts[0] {
            return ks[0] * t / ts[0];
        }
        let n = ts.len();
        if t >= ts[n - 1] {
            return ks[n - 1];
        }
        let j = ts.partition_point(|&x| x <= t) - 1;
        let (t0, t1, k0, k1) = (ts[j], ts[j + 1], ks[j], ks[j + 1]);
        if k0 > 0.0 && k1 > 0.0 {
            let s = (t / t0).ln() / (t1 / t0).ln();
            (k0.ln() + s * (k1 / k0).ln()).exp()
        } else {
            k0 + (k1 - k0) * (t - t0) / (t1 - t0)
        }
    }
}

/// Samples `K(f, ·)` at the grid nodes `t_j = e^{1-u_j}`.
pub fn k_curve(f: &StepRearrangement, couple: &CoupleSpec, grid: &UGrid, method: KMethod, cfg: &NumConfig) -> Result<KCurve> {
    let ts = grid.t_nodes();
    let ks = match method {
        KMethod::Oracle => {
            let table = DecompositionTable::new(f, couple, cfg)?;
            ts.iter().map(|&t| table.k(t)).collect()
        }
        KMethod::Explicit => {
            let ek = ExplicitK::new(f, couple, cfg)?;
            ts.iter().map(|&t| ek.k(t)).collect::<Result<Vec<_>>>()?
        }
    };
    KCurve::new(ts, ks)
}

/// Largest values of the three C-condition quotients on a grid, with the
/// same quantities on the refined grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CConditionReport {
    /// `sup_t ∫_0^t ds/Φ_i ÷ (t/Φ_i(t))` for `i = 0, 1`.
    pub c0: [f64; 2],
    /// `sup_t (Φ_1/Φ_0)(t) ‖χ_[0,t]/Φ_1‖_{A_0}`.
    pub c1: f64,
    /// `sup_t (Φ_0/Φ_1)(t) ‖χ_[t,1]/Φ_0‖_{A_1}`.
    pub c2: f64,
    pub c1_refined: f64,
    pub c2_refined: f64,
    pub drift: f64,
    pub pass: bool,
}

impl CConditionReport {
    pub fn summary(&self) -> String {
        format!(
            "C0 = ({:.4}, {:.4}), C1 = {:.4}, C2 = {:.4}, drift = {:.4}",
            self.c0[0], self.c0[1], self.c1, self.c2, self.drift
        )
    }
}

/// `1/Φ` as a decreasing step model on the discretization grid.
fn reciprocal_model(w: LogWeight, u_max: f64, panels: usize) -> Result<StepRearrangement> {
    discretize_model(&FunctionModel::PowerLog { gamma: w.a, delta: w.b }, u_max, panels)
        .map_err(|e| Error::ConditionCheckFailed(format!("1/Φ is not a valid model: {e}")))
}

fn c12_sups(x0: &SpaceSpec, x1: &SpaceSpec, ts: &[f64], panels: usize, cfg: &NumConfig) -> Result<(f64, f64)> {
    let w0 = x0.fundamental_weight().expect("checked");
    let w1 = x1.fundamental_weight().expect("checked");
    let inv0 = reciprocal_model(w0, cfg.u_max, panels)?;
    let inv1 = reciprocal_model(w1, cfg.u_max, panels)?;
    let mut c1: f64 = 0.0;
    let mut c2: f64 = 0.0;
    for &t in ts {
        let r10 = w1.value(t) / w0.value(t);
        let n1 = norm(&inv1.head(t), x0, cfg).unwrap_or(f64::INFINITY);
        c1 = c1.max(r10 * n1);
        let n2 = if t < 1.0 { norm(&inv0.tail(t), x1, cfg).unwrap_or(f64::INFINITY) } else { 0.0 };
        c2 = c2.max(n2 / r10);
    }
    Ok((c1, c2))
}

/// Evaluates the conditions C0–C2 of a couple from the closed-form
/// fundamental functions of `X0`, `X1`.
pub fn check_c_conditions(x0: &SpaceSpec, x1: &SpaceSpec, grid: &UGrid, cfg: &NumConfig) -> Result<CConditionReport> {
    let w = [
        x0.fundamental_weight().ok_or_else(|| Error::BadParameter(format!("{} has no closed-form Φ", x0.label())))?,
        x1.fundamental_weight().ok_or_else(|| Error::BadParameter(format!("{} has no closed-form Φ", x1.label())))?,
    ];
    let ts = grid.t_nodes();
    let mut c0 = [0.0f64; 2];
    for (i, wi) in w.iter().enumerate() {
        let inv = wi.recip();
        for &t in &ts {
            let v = match inv.integral_u(u_of(t), f64::INFINITY, cfg.rel_tol, cfg.max_depth) {
                Ok(int) => int * wi.value(t) / t,
                Err(_) => f64::INFINITY,
            };
            c0[i] = c0[i].max(v);
        }
    }
    let (c1, c2) = c12_sups(x0, x1, &ts, cfg.panels, cfg)?;
    let (c1_refined, c2_refined) = c12_sups(x0, x1, &ts, cfg.panels * 2, cfg)?;
    let rel = |a: f64, b: f64| if a == b { 0.0 } else { (a - b).abs() / a.abs().max(b.abs()) };
    let drift = rel(c1, c1_refined).max(rel(c2, c2_refined));
    let pass = c0.iter().all(|v| v.is_finite()) && [c1, c2, c1_refined, c2_refined].iter().all(|v| v.is_finite()) && drift < 0.05;
    Ok(CConditionReport { c0, c1, c2, c1_refined, c2_refined, drift, pass })
}
