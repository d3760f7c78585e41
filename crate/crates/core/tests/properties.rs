use proptest::prelude::*;
use rispaces::equivharness::discretization_sides;
use rispaces::interpolation::{block_norm, interp_norm, InterpParams};
use rispaces::kfunctional::{k_curve, k_oracle, CoupleSpec, KMethod};
use rispaces::logcalc::{LogWeight, MonotoneMap, UGrid};
use rispaces::norms::{self, GammaDouble, SpaceSpec};
use rispaces::rearrangement::{rearrange_from_samples, StepRearrangement};
use rispaces::NumConfig;

fn cfg() -> NumConfig {
    NumConfig { panels: 40, k_nodes: 40, sup_count: 512, ..NumConfig::default() }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// Nonincreasing step functions with up to eight panels whose breaks are
/// spread over several decades.
fn rearrangement() -> impl Strategy<Value = StepRearrangement> {
    (1usize..8)
        .prop_flat_map(|n| (prop::collection::vec(0.5f64..20.0, n - 1), prop::collection::vec(0.05f64..1.0, n), 0.1f64..5.0))
        .prop_map(|(us, ratios, top)| {
            let mut us = us;
            us.sort_by(|a, b| b.total_cmp(a));
            us.dedup();
            let mut breaks = vec![0.0];
            breaks.extend(us.iter().map(|u| (-u).exp()));
            breaks.push(1.0);
            let mut v = top;
            let values = (1..breaks.len())
                .map(|i| {
                    let cur = v;
                    v *= ratios[i - 1];
                    cur
                })
                .collect();
            StepRearrangement::new(breaks, values).unwrap()
        })
}

fn samples() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0f64..10.0, 0.05f64..1.0), 1..32).prop_map(|raw| {
        let total: f64 = raw.iter().map(|s| s.1).sum();
        raw.into_iter().map(|(v, w)| (v, w / total)).collect()
    })
}

fn spaces() -> Vec<SpaceSpec> {
    vec![
        SpaceSpec::Lebesgue { p: 2.0 },
        SpaceSpec::LorentzZygmund { p: 2.0, q: 3.0, alpha: 0.5 },
        SpaceSpec::Grand { p: 2.0, alpha: 1.0 },
        SpaceSpec::Small { p: 2.0, alpha: 1.0 },
        SpaceSpec::GammaDouble(GammaDouble::critical_pair(2.0, 0.5, 2.0).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn rearrangement_is_sorted_and_equimeasurable(s in samples()) {
        let f = rearrange_from_samples(&s).unwrap();
        prop_assert!(f.as_step().is_nonincreasing());
        for p in [1.0, 2.0, 3.5] {
            let exact: f64 = s.iter().map(|(v, w)| v.powf(p) * w).sum();
            let got = f.as_step().power_integral(p, 0.0, 1.0).unwrap();
            prop_assert!((got - exact).abs() <= 1e-12 * exact.max(1.0));
        }
    }

    #[test]
    fn rearrangement_ignores_sample_order(s in samples()) {
        let mut reversed = s.clone();
        reversed.reverse();
        let a = rearrange_from_samples(&s).unwrap();
        let b = rearrange_from_samples(&reversed).unwrap();
        prop_assert_eq!(a.as_step().values(), b.as_step().values());
    }

    #[test]
    fn norms_are_positively_homogeneous(f in rearrangement(), lambda in 0.1f64..10.0) {
        for s in spaces() {
            let base = norms::norm(&f, &s, &cfg()).unwrap();
            let scaled = norms::norm(&f.scaled(lambda), &s, &cfg()).unwrap();
            prop_assert!(rel(scaled, lambda * base) <= 1e-12, "{}: {} vs {}", s.label(), scaled, lambda * base);
        }
    }

    #[test]
    fn norms_are_monotone(f in rearrangement(), cap in 0.05f64..1.0) {
        let g = f.capped_at(cap * f.sup());
        for s in spaces() {
            let big = norms::norm(&f, &s, &cfg()).unwrap();
            let small = norms::norm(&g, &s, &cfg()).unwrap();
            prop_assert!(small <= big * (1.0 + 1e-10), "{}: {} > {}", s.label(), small, big);
        }
    }

    #[test]
    fn k_functional_is_concave_and_below_both_norms(f in rearrangement()) {
        let couple = CoupleSpec::LpLq { p: 1.0, q: 2.0 };
        let (n0, n1) = (norms::lebesgue_norm(&f, 1.0).unwrap(), norms::lebesgue_norm(&f, 2.0).unwrap());
        let ts = [1e-6, 1e-4, 1e-2, 0.1, 0.5, 1.0];
        let ks: Vec<f64> = ts.iter().map(|&t| k_oracle(&f, &couple, t, &cfg()).unwrap()).collect();
        for (i, (&t, &k)) in ts.iter().zip(&ks).enumerate() {
            prop_assert!(k <= n0.min(t * n1) * (1.0 + 1e-12));
            if i > 0 {
                prop_assert!(k >= ks[i - 1] * (1.0 - 1e-12));
                prop_assert!(k / t <= ks[i - 1] / ts[i - 1] * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn interpolation_norm_is_homogeneous_and_monotone(
        f in rearrangement(),
        lambda in 0.1f64..10.0,
        theta in 0.1f64..0.9,
        r in prop_oneof![Just(1.0), Just(2.0), Just(f64::INFINITY)],
    ) {
        let grid = UGrid::new(35.0, 60).unwrap();
        let curve = k_curve(&f, &CoupleSpec::LpLq { p: 1.0, q: 2.0 }, &grid, KMethod::Oracle, &cfg()).unwrap();
        let params = InterpParams::new(theta, r, 0.5).unwrap();
        let base = interp_norm(&curve, &params, &cfg()).unwrap();
        let scaled = interp_norm(&curve.scaled(lambda), &params, &cfg()).unwrap();
        prop_assert!(rel(scaled, lambda * base) <= 1e-9);
        let larger = interp_norm(&curve.scaled(1.0 + lambda), &params, &cfg()).unwrap();
        prop_assert!(larger >= base);
    }

    #[test]
    fn discretization_ratios_are_scale_invariant(f in rearrangement(), lambda in 0.1f64..10.0, q in 1.0f64..2.0) {
        let base = discretization_sides(f.as_step(), 1.0, q, &cfg()).unwrap();
        let scaled = discretization_sides(f.scaled(lambda).as_step(), 1.0, q, &cfg()).unwrap();
        for (a, b) in base.iter().zip(&scaled) {
            prop_assert!(rel(b.lhs / b.rhs, a.lhs / a.rhs) <= 1e-9, "{}", a.label);
        }
    }

    #[test]
    fn critical_block_sum_is_the_lebesgue_norm(f in rearrangement(), p in 1.2f64..4.0) {
        let blocks = block_norm(&f, p, 1.0 / p, p).unwrap();
        let lp = norms::lebesgue_norm(&f, p).unwrap();
        prop_assert!(rel(blocks, lp) <= 1e-12);
    }

    #[test]
    fn monotone_maps_invert(a in 0.05f64..2.0, b in -2.0f64..2.0, s in 0.0f64..1.0) {
        let map = MonotoneMap::new(LogWeight { a, b }).unwrap();
        let y = map.peak() * (-30.0 * s).exp();
        let x = map.solve(y).unwrap();
        prop_assert!(x > 0.0 && x <= map.t0());
        prop_assert!(rel(map.weight_at(x), y) <= 1e-10);
    }
}
