//! Named harness experiments and their `key=value` parameters.

use std::collections::BTreeMap;

use rispaces::equivharness::*;
use rispaces::interpolation::{Identification, TargetParams};
use rispaces::kfunctional::CoupleSpec;
use rispaces::norms::GammaDouble;
use rispaces::{Error, NumConfig, Result};

/// Experiment names that are not identifications.
const CHECKS: [(&str, &str); 9] = [
    ("k-bracket", "oracle against explicit K-functional; couple=lp_lq|grand_lq|grand_grand|small_small|grand_small_same_p p q alpha"),
    ("hardy", "weighted Hardy inequality; display=power_head|power_tail (lambda b beta) or log_head|log_tail (a alpha)"),
    ("sup-smoothing", "supremum smoothing of a K-curve; form=interpolation (theta r alpha q) or general (nu beta q r)"),
    ("discretization", "log-weighted integrals against doubly exponential block sums; lambda q count"),
    ("sup-power-bound", "pointwise bound by a power of the small norm; p r eps"),
    ("grand-domination", "head integrals dominated by the Grand norm; estimate=l1_head|lp_head p q alpha"),
    ("associate", "small space norm against the dual of the Grand norm; p alpha"),
    ("gamma-lower-bound", "lower estimate of a Gamma norm on initial intervals; p theta r"),
    ("log-integral-bounds", "weighted integrals against endpoint values; alpha beta"),
];

pub fn list() -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> =
        Identification::ALL.iter().map(|id| (id.code().to_string(), id.describe().to_string())).collect();
    out.extend(CHECKS.iter().map(|(n, d)| (n.to_string(), d.to_string())));
    out
}

/// Parsed `key=value` arguments.
pub struct Params(BTreeMap<String, String>);

impl Params {
    pub fn parse(args: &[String]) -> Result<Self> {
        let mut map = BTreeMap::new();
        for arg in args {
            let (k, v) = arg
                .split_once('=')
                .ok_or_else(|| Error::BadParameter(format!("expected key=value, got '{arg}'")))?;
            map.insert(k.trim().to_ascii_lowercase(), v.trim().to_string());
        }
        Ok(Self(map))
    }

    fn num(&self, key: &str, default: f64) -> Result<f64> {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) => match v.to_ascii_lowercase().as_str() {
                "inf" | "infinity" => Ok(f64::INFINITY),
                s => s.parse().map_err(|_| Error::BadParameter(format!("{key} = '{v}' is not a number"))),
            },
        }
    }

    fn word<'a>(&'a self, key: &str, default: &'a str) -> &'a str {
        self.0.get(key).map_or(default, String::as_str)
    }

    fn count(&self, key: &str, default: usize) -> Result<usize> {
        match self.0.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| Error::BadParameter(format!("{key} = '{v}' is not a count"))),
        }
    }
}

fn identity_defaults(id: Identification) -> TargetParams {
    let mut tp = TargetParams { p: 2.0, q: 4.0, theta: 0.5, r: 2.0, alpha: 1.0 };
    match id {
        Identification::GrandFromGrandLq | Identification::GrandFromLpLq => {
            tp.theta = 1.0;
            tp.r = f64::INFINITY;
        }
        Identification::SmallFromLpLinf => {
            tp.q = f64::INFINITY;
            tp.theta = 0.0;
            tp.r = 1.0;
        }
        Identification::SmallFromLpLq => {
            tp.theta = 0.0;
            tp.r = 1.0;
        }
        Identification::SmallSmallUnitToLz => tp.theta = 1.0 / 3.0,
        Identification::SameExponentToGamma
        | Identification::SameExponentToZ
        | Identification::SameExponentCriticalToLp
        | Identification::SameExponentToZAlt
        | Identification::SameExponentToBlocks => tp.q = 2.0,
        _ => {}
    }
    tp
}

/// Standard family tuned to `q`, falling back to `p` when `q` is infinite.
fn standard_family(params: &Params, p: f64, q: f64, seed: u64) -> Result<FunctionFamily> {
    let default_q = if q.is_finite() && q > 1.0 { q } else { p };
    FunctionFamily::standard(params.num("family_q", default_q)?, seed)
}

fn couple(params: &Params) -> Result<CoupleSpec> {
    let p = params.num("p", 2.0)?;
    let q = params.num("q", 4.0)?;
    let alpha = params.num("alpha", 1.0)?;
    Ok(match params.word("couple", "grand_lq") {
        "lp_lq" => CoupleSpec::LpLq { p, q },
        "grand_lq" => CoupleSpec::GrandLq { p, q, alpha },
        "grand_grand" => CoupleSpec::GrandGrand { p, q, alpha },
        "small_small" => CoupleSpec::SmallSmall { p, q },
        "grand_small_same_p" => CoupleSpec::GrandSmallSameP { p },
        other => return Err(Error::BadParameter(format!("unknown couple '{other}'"))),
    })
}

/// Runs the experiment `name` with `params`.
pub fn run(name: &str, params: &Params, seed: u64, cfg: &NumConfig) -> Result<EquivReport> {
    if let Ok(id) = name.parse::<Identification>() {
        let d = identity_defaults(id);
        let tp = TargetParams {
            p: params.num("p", d.p)?,
            q: params.num("q", d.q)?,
            theta: params.num("theta", d.theta)?,
            r: params.num("r", d.r)?,
            alpha: params.num("alpha", d.alpha)?,
        };
        rispaces::interpolation::target_couple(id, &tp)?;
        let family = standard_family(params, tp.p, tp.q, seed)?;
        return run_identity_experiment(id, &tp, &family, cfg);
    }
    let p = params.num("p", 2.0)?;
    let q = params.num("q", 4.0)?;
    match name {
        "k-bracket" => {
            let c = couple(params)?;
            let fq = match c {
                CoupleSpec::GrandSmallSameP { .. } => 4.0,
                _ => q,
            };
            k_bracket_check(&c, &standard_family(params, p, fq, seed)?, cfg)
        }
        "hardy" => {
            let display = match params.word("display", "power_head") {
                "power_head" | "power_tail" => {
                    let (lambda, b, beta) = (params.num("lambda", 0.5)?, params.num("b", 2.0)?, params.num("beta", 0.0)?);
                    if params.word("display", "power_head") == "power_head" {
                        HardyDisplay::PowerHead { lambda, b, beta }
                    } else {
                        HardyDisplay::PowerTail { lambda, b, beta }
                    }
                }
                "log_head" => HardyDisplay::LogHead { a: params.num("a", 2.0)?, alpha: params.num("alpha", 1.0)? },
                "log_tail" => HardyDisplay::LogTail { a: params.num("a", 2.0)?, alpha: params.num("alpha", -1.0)? },
                other => return Err(Error::BadParameter(format!("unknown Hardy display '{other}'"))),
            };
            display.validate()?;
            hardy_check(&display, &standard_family(params, p, q, seed)?, cfg)
        }
        "sup-smoothing" => {
            let r = params.num("r", 2.0)?;
            let form = match params.word("form", "interpolation") {
                "interpolation" => SmoothingForm::Interpolation {
                    theta: params.num("theta", 0.5)?,
                    r,
                    alpha: params.num("alpha", 1.0)?,
                    q,
                },
                "general" => SmoothingForm::General { nu: params.num("nu", 0.5)?, beta: params.num("beta", 0.5)?, q, r },
                other => return Err(Error::BadParameter(format!("unknown smoothing form '{other}'"))),
            };
            sup_smoothing_check(&form, &standard_family(params, p, q, seed)?, cfg)
        }
        "discretization" => {
            let family = FunctionFamily::random(params.count("count", 20)?, seed);
            discretization_check(params.num("lambda", 1.0)?, params.num("q", 1.0)?, &family, cfg)
        }
        "sup-power-bound" => {
            let xs = [1.0, 0.5, 0.1, 1e-3, 1e-8];
            let family = standard_family(params, p, q, seed)?;
            sup_power_check(p, params.num("r", 2.0)?, params.num("eps", 0.5)?, &xs, &family, cfg)
        }
        "grand-domination" => {
            let alpha = params.num("alpha", 1.0)?;
            let which = match params.word("estimate", "l1_head") {
                "l1_head" => GrandDomination::L1Head { p, alpha },
                "lp_head" => GrandDomination::LpHead { p, q, alpha },
                other => return Err(Error::BadParameter(format!("unknown estimate '{other}'"))),
            };
            grand_domination_check(&which, &standard_family(params, p, q, seed)?, cfg)
        }
        "associate" => associate_check(p, params.num("alpha", 1.0)?, &standard_family(params, p, q, seed)?, cfg),
        "gamma-lower-bound" => {
            let space = GammaDouble::critical_pair(p, params.num("theta", 0.5)?, params.num("r", 2.0)?)?;
            let family = FunctionFamily::standard(params.num("family_q", p)?, seed)?;
            gamma_lower_bound_check(&space, &[1.0, 0.5, 0.01, 1e-6], &family, cfg)
        }
        "log-integral-bounds" => log_bounds(params.num("alpha", 0.0)?, params.num("beta", 1.0)?, seed, cfg),
        other => Err(Error::BadParameter(format!("unknown experiment '{other}'"))),
    }
}

/// Head ratios of the log-weighted integral on a fixed grid of endpoints,
/// judged against `1/(1-α)` when `β >= 0`.
fn log_bounds(alpha: f64, beta: f64, seed: u64, cfg: &NumConfig) -> Result<EquivReport> {
    let grid: Vec<f64> = (1..=30).map(|k| (-(k as f64) * 0.7).exp()).collect();
    let rep = rispaces::logcalc::log_integral_bounds_check(alpha, beta, &grid)?;
    let members: Vec<MemberRatio> = rep
        .head
        .iter()
        .map(|probe| MemberRatio { id: format!("a={:.6e}", probe.a), lhs: probe.ratio, rhs: 1.0, ratio: probe.ratio })
        .collect();
    let mut sorted: Vec<f64> = members.iter().map(|m| m.ratio).collect();
    sorted.sort_by(f64::total_cmp);
    let violations: Vec<String> = rep.lower_bound_violations.iter().map(|a| format!("a={a:e} below 1/(1-alpha)")).collect();
    Ok(EquivReport {
        experiment: "log-integral-bounds".into(),
        params: serde_json::json!({ "alpha": alpha, "beta": beta, "lower_bound": rep.lower_bound }),
        max_ratio: sorted.last().copied(),
        min_ratio: sorted.first().copied(),
        median_ratio: sorted.get(sorted.len() / 2).copied(),
        members,
        drift: None,
        ceiling: cfg.ceiling,
        pass: violations.is_empty(),
        seed,
        skipped: Vec::new(),
        failures: Vec::new(),
        violations,
    })
}
