//! Acceptance criteria AC1–AC14. Each test prints one `ACn PASS|FAIL` line
//! straight to stdout so the lines survive output capture.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rispaces::equivharness::*;
use rispaces::interpolation::*;
use rispaces::kfunctional::CoupleSpec;
use rispaces::logcalc::{log_integral_bounds_check, MonotoneMap};
use rispaces::norms::{self, GammaDouble, SpaceSpec};
use rispaces::rearrangement::{rearrange_from_samples, WEIGHT_SUM_TOL};
use rispaces::NumConfig;

fn cfg() -> NumConfig {
    NumConfig { panels: 160, ..NumConfig::default() }
}

fn verdict(ac: &str, ok: bool, detail: &str) {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{ac} {} {detail}", if ok { "PASS" } else { "FAIL" }).unwrap();
    out.flush().unwrap();
    assert!(ok, "{ac}: {detail}");
}

fn all_pass(ac: &str, reports: &[EquivReport]) {
    let ok = reports.iter().all(|r| r.pass);
    let detail = reports.iter().map(EquivReport::summary).collect::<Vec<_>>().join(" | ");
    verdict(ac, ok, &detail);
}

fn fam(q: f64) -> FunctionFamily {
    FunctionFamily::standard(q, DEFAULT_SEED).unwrap()
}

#[test]
fn ac01_rearrangement_matches_descending_sort() {
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut worst = 0.0f64;
    let mut ok = true;
    for _ in 0..1000 {
        let n = rng.gen_range(1..=64);
        let raw: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let samples: Vec<(f64, f64)> = raw
            .iter()
            .map(|w| (rng.gen_range(0.0..10.0f64).floor() * rng.gen::<f64>(), w / total))
            .collect();
        let wsum: f64 = samples.iter().map(|s| s.1).sum();
        ok &= (wsum - 1.0).abs() <= WEIGHT_SUM_TOL;
        let f = rearrange_from_samples(&samples).unwrap();

        let mut sorted = samples.clone();
        sorted.sort_by(|a, b| b.0.total_cmp(&a.0));
        let values: Vec<f64> = sorted.iter().map(|s| s.0).collect();
        ok &= f.as_step().values() == values.as_slice();
        let mut cum = 0.0;
        for (i, s) in sorted.iter().enumerate().take(n - 1) {
            cum += s.1;
            ok &= (f.as_step().breaks()[i + 1] - cum).abs() <= 1e-15;
        }

        let exact: f64 = samples.iter().map(|(v, w)| v * w).sum();
        let integral = f.as_step().power_integral(1.0, 0.0, 1.0).unwrap();
        worst = worst.max((integral - exact).abs() / exact.max(1.0));
    }
    ok &= worst <= 1e-12;
    verdict("AC1", ok, &format!("1000 sample sets, worst integral error {worst:.2e}"));
}

#[test]
fn ac02_norm_degeneracies_and_homogeneity() {
    let c = cfg();
    let members = fam(4.0).discretize(&c).unwrap();
    let mut worst_lz = 0.0f64;
    for (_, f) in &members {
        for p in [1.5, 2.0, 4.0] {
            let lz = norms::lorentz_zygmund_norm(f, p, p, 0.0, &c).unwrap();
            let lp = norms::lebesgue_norm(f, p).unwrap();
            worst_lz = worst_lz.max((lz - lp).abs() / lp);
        }
    }
    let spaces = [
        SpaceSpec::Lebesgue { p: 2.0 },
        SpaceSpec::LorentzZygmund { p: 2.0, q: 4.0, alpha: 0.5 },
        SpaceSpec::Grand { p: 2.0, alpha: 1.0 },
        SpaceSpec::Small { p: 2.0, alpha: 1.0 },
        SpaceSpec::GammaDouble(GammaDouble::critical_pair(2.0, 0.5, 2.0).unwrap()),
    ];
    let mut worst_hom = 0.0f64;
    for (_, f) in members.iter().take(8) {
        for s in &spaces {
            let base = norms::norm(f, s, &c).unwrap();
            for lambda in [0.5, 3.0, 0.7] {
                let scaled = norms::norm(&f.scaled(lambda), s, &c).unwrap();
                worst_hom = worst_hom.max((scaled - lambda * base).abs() / (lambda * base));
            }
        }
    }
    let ok = worst_lz <= 1e-8 && worst_hom <= 1e-12;
    verdict("AC2", ok, &format!("LZ(p,p,0) vs Lp {worst_lz:.2e}, homogeneity {worst_hom:.2e}"));
}

#[test]
fn ac03_lebesgue_couple_k_bracket() {
    let c = NumConfig { ceiling: 16.0, ..cfg() };
    let f = fam(4.0);
    let reports: Vec<_> = [CoupleSpec::LpLq { p: 1.0, q: 2.0 }, CoupleSpec::LpLq { p: 2.0, q: 4.0 }]
        .iter()
        .map(|couple| k_bracket_check(couple, &f, &c).unwrap())
        .collect();
    all_pass("AC3", &reports);
}

#[test]
fn ac04_explicit_k_brackets() {
    let f = fam(4.0);
    let reports: Vec<_> = [
        CoupleSpec::GrandLq { p: 2.0, q: 4.0, alpha: 1.0 },
        CoupleSpec::GrandGrand { p: 2.0, q: 4.0, alpha: 1.0 },
        CoupleSpec::SmallSmall { p: 2.0, q: 4.0 },
        CoupleSpec::GrandSmallSameP { p: 2.0 },
    ]
    .iter()
    .map(|couple| k_bracket_check(couple, &f, &cfg()).unwrap())
    .collect();
    all_pass("AC4", &reports);
}

#[test]
fn ac05_grand_space_as_endpoint() {
    let tp = TargetParams { p: 2.0, q: 4.0, theta: 1.0, r: f64::INFINITY, alpha: 1.0 };
    let rep = run_identity_experiment(Identification::GrandFromGrandLq, &tp, &fam(4.0), &cfg()).unwrap();
    all_pass("AC5", &[rep]);
}

#[test]
fn ac06_grand_grand_is_lorentz_zygmund() {
    let tp = TargetParams { p: 2.0, q: 4.0, theta: 0.5, r: 2.0, alpha: 1.0 };
    let rep = run_identity_experiment(Identification::GrandGrandToLz, &tp, &fam(4.0), &cfg()).unwrap();
    all_pass("AC6", &[rep]);
}

#[test]
fn ac07_small_small_is_lorentz_zygmund() {
    let tp = TargetParams { p: 2.0, q: 4.0, theta: 1.0 / 3.0, r: 2.0, alpha: 1.0 };
    let rep = run_identity_experiment(Identification::SmallSmallUnitToLz, &tp, &fam(4.0), &cfg()).unwrap();
    all_pass("AC7", &[rep]);
}

#[test]
fn ac08_same_exponent_couple_three_regimes() {
    let f = fam(2.0);
    let mut reports: Vec<_> = [0.25, 0.5, 0.75]
        .iter()
        .map(|&theta| {
            let tp = TargetParams { p: 2.0, q: 2.0, theta, r: 2.0, alpha: 1.0 };
            run_identity_experiment(Identification::SameExponentToZ, &tp, &f, &cfg()).unwrap()
        })
        .collect();
    let tp = TargetParams { p: 2.0, q: 2.0, theta: 0.5, r: 2.0, alpha: 1.0 };
    let tight = NumConfig { ceiling: 16.0, ..cfg() };
    reports.push(run_identity_experiment(Identification::SameExponentCriticalToLp, &tp, &f, &tight).unwrap());
    all_pass("AC8", &reports);
}

#[test]
fn ac09_doubly_exponential_discretization() {
    let c = NumConfig { ceiling: 32.0, ..cfg() };
    let f = FunctionFamily::random(20, DEFAULT_SEED);
    let mut reports = Vec::new();
    for lambda in [0.5, 1.0] {
        for q in [1.0, 1.5] {
            reports.push(discretization_check(lambda, q, &f, &c).unwrap());
        }
    }
    let spots = [block_point(0), block_point(1), block_point(2), block_point(3)];
    let spots_ok = spots == [1.0, 0.5, 0.125, 1.0 / 128.0];
    let detail = reports.iter().map(EquivReport::summary).collect::<Vec<_>>().join(" | ");
    let ok = spots_ok && reports.iter().all(|r| r.pass);
    verdict("AC9", ok, &format!("block points {spots:?}; {detail}"));
}

#[test]
fn ac10_inversion_residuals() {
    let couples = [
        CoupleSpec::LpLq { p: 1.0, q: 2.0 },
        CoupleSpec::LpLq { p: 2.0, q: 4.0 },
        CoupleSpec::GrandLq { p: 2.0, q: 4.0, alpha: 1.0 },
        CoupleSpec::GrandGrand { p: 2.0, q: 4.0, alpha: 1.0 },
        CoupleSpec::SmallSmall { p: 2.0, q: 4.0 },
        CoupleSpec::GrandSmallSameP { p: 2.0 },
    ];
    let mut maps: Vec<(String, MonotoneMap)> = couples.iter().map(|c| (c.label(), c.psi().unwrap())).collect();
    maps.push(("phi_1".into(), MonotoneMap::log_reciprocal()));
    let mut worst = 0.0f64;
    for (_, map) in &maps {
        // smallest value whose root is still a normal double
        let lo = map.weight_at(f64::MIN_POSITIVE).max(1e-12).ln();
        let hi = map.peak().ln();
        for i in 0..1000 {
            let t = (lo + (hi - lo) * i as f64 / 999.0).exp().min(map.peak());
            let x = map.solve(t).unwrap();
            worst = worst.max((map.weight_at(x) - t).abs() / t);
        }
    }
    let phi1 = MonotoneMap::log_reciprocal();
    let mut worst_closed = 0.0f64;
    for i in 0..1000 {
        let t = 1e-3 + (1.0 - 1e-3) * i as f64 / 999.0;
        let exact = (1.0 - 1.0 / t).exp();
        if exact.is_normal() {
            worst_closed = worst_closed.max((phi1.inverse(t).unwrap() - exact).abs() / exact);
        }
    }
    let ok = worst <= 1e-10 && worst_closed <= 1e-12;
    verdict("AC10", ok, &format!("{} maps, worst residual {worst:.2e}, phi_1 closed form {worst_closed:.2e}", maps.len()));
}

#[test]
fn ac11_explicit_constant_inequalities() {
    let c = cfg();
    let gamma = GammaDouble::critical_pair(2.0, 0.5, 2.0).unwrap();
    let lower = gamma_lower_bound_check(&gamma, &[1.0, 0.5, 0.01, 1e-6], &fam(2.0), &c).unwrap();

    let a_grid: Vec<f64> = (1..=30).map(|k| (-(k as f64) * 0.7).exp()).collect();
    let mut log_violations = 0;
    for alpha in [-3.0, -1.5, -0.5, 0.0, 0.5, 0.9] {
        for beta in [0.0, 0.5, 1.0, 3.0] {
            log_violations += log_integral_bounds_check(alpha, beta, &a_grid).unwrap().lower_bound_violations.len();
        }
    }

    let sup_power = sup_power_check(2.0, 2.0, 0.5, &[1.0, 0.5, 0.1, 1e-3, 1e-8], &fam(4.0), &c).unwrap();
    let ok = lower.pass && log_violations == 0 && sup_power.pass;
    let detail = format!("{} | log-integral lower bound violations {log_violations} | {}", lower.summary(), sup_power.summary());
    verdict("AC11", ok, &detail);
}

#[test]
fn ac12_hardy_and_sup_smoothing() {
    let f = fam(4.0);
    let mut reports: Vec<_> = [
        HardyDisplay::PowerHead { lambda: 0.5, b: 1.0, beta: 0.0 },
        HardyDisplay::PowerTail { lambda: 0.5, b: 2.0, beta: 1.0 },
        HardyDisplay::LogHead { a: 2.0, alpha: 1.0 },
        HardyDisplay::LogTail { a: 2.0, alpha: -1.0 },
    ]
    .iter()
    .map(|d| hardy_check(d, &f, &cfg()).unwrap())
    .collect();
    for form in [
        SmoothingForm::Interpolation { theta: 0.5, r: 2.0, alpha: 1.0, q: 4.0 },
        SmoothingForm::General { nu: 0.5, beta: 0.5, q: 4.0, r: 2.0 },
    ] {
        reports.push(sup_smoothing_check(&form, &f, &cfg()).unwrap());
    }
    all_pass("AC12", &reports);
}

#[test]
fn ac13_small_space_as_endpoint() {
    let linf = TargetParams { p: 2.0, q: f64::INFINITY, theta: 0.0, r: 1.0, alpha: 1.0 };
    let lq = TargetParams { p: 2.0, q: 4.0, theta: 0.0, r: 1.0, alpha: 1.0 };
    let reports = [
        run_identity_experiment(Identification::SmallFromLpLinf, &linf, &fam(2.0), &cfg()).unwrap(),
        run_identity_experiment(Identification::SmallFromLpLq, &lq, &fam(4.0), &cfg()).unwrap(),
    ];
    all_pass("AC13", &reports);
}

#[test]
fn ac14_outputs_are_deterministic() {
    let run = || {
        let family = FunctionFamily::standard(4.0, DEFAULT_SEED).unwrap();
        let tp = TargetParams { p: 2.0, q: 4.0, theta: 0.5, r: 2.0, alpha: 1.0 };
        let rep = run_identity_experiment(Identification::GrandGrandToLz, &tp, &family, &cfg()).unwrap();
        let (_, f) = family.discretize(&cfg()).unwrap().swap_remove(13);
        let table = k_table(&f, &CoupleSpec::GrandLq { p: 2.0, q: 4.0, alpha: 1.0 }, &cfg()).unwrap();
        (
            serde_json::to_string_pretty(&rep).unwrap(),
            members_csv(&rep).unwrap(),
            k_table_csv(&table).unwrap(),
        )
    };
    let (a, b) = (run(), run());
    let ok = a == b;
    verdict("AC14", ok, &format!("report JSON {} bytes, member CSV {} bytes, K table CSV {} bytes", a.0.len(), a.1.len(), a.2.len()));
}
