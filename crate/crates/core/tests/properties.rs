use eulercc::classifier::{classify_e1, classify_e2, frontier_curve_m2, frontier_distance};
use eulercc::euler::{
    abc_terms, count_cell, eval_g, eval_g_expanded, eval_g_prime, eval_h, h_signomial, Cell, Count,
    MassTriple,
};
use eulercc::qps::{
    khovanskii_bound, restrict_to_line, straight_bound, AffineConstraint, BivariateSignomial,
};
use eulercc::signomial::DEFAULT_TOL;
use eulercc::verify::oracle;
use eulercc::{count_and_isolate, RootCount, RootRecord, Signomial};
use proptest::prelude::*;

fn mass() -> impl Strategy<Value = f64> {
    -10.0f64..10.0
}

fn masses() -> impl Strategy<Value = MassTriple> {
    (mass(), mass(), mass()).prop_map(|(a, b, c)| MassTriple::new(a, b, c))
}

/// `b ∈ [−5, 5]` away from the exponents where `g` may vanish identically.
fn exponent() -> impl Strategy<Value = f64> {
    (-5.0f64..5.0).prop_filter("generic exponent", |b| {
        [0.0, 1.0, 2.0, 3.0].iter().all(|k| (b - k).abs() > 1e-6)
    })
}

fn positive_s() -> impl Strategy<Value = f64> {
    (-2.0f64..2.0).prop_map(|e| 10f64.powf(e))
}

/// Signomials with up to six terms and exponents separated by at least `1e-3`.
fn signomial() -> impl Strategy<Value = Signomial> {
    prop::collection::vec((-10.0f64..10.0, -5.0f64..5.0), 1..=6)
        .prop_filter("separated exponents", |raw| {
            let mut e: Vec<f64> = raw.iter().map(|t| t.1).collect();
            e.sort_by(f64::total_cmp);
            e.windows(2).all(|w| w[1] - w[0] >= 1e-3)
        })
        .prop_map(Signomial::normalize)
}

/// Sum of the magnitudes of the monomials of the expanded form of `g`.
fn expanded_magnitude(m: MassTriple, b: f64, s: f64) -> f64 {
    let t = 1.0 + s;
    m.m1.abs() * (t.powf(b) + t)
        + m.m2.abs() * (s.powf(b) + s)
        + m.m3.abs() * (t * s.powf(b) + s * t.powf(b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn stable_and_expanded_forms_agree(m in masses(), b in -5.0f64..5.0, s in positive_s()) {
        let stable = eval_g(m, b, s).unwrap();
        let expanded = eval_g_expanded(m, b, s).unwrap();
        prop_assert!((stable - expanded).abs() <= 1e-9 * expanded_magnitude(m, b, s));
    }

    #[test]
    fn derivative_matches_central_difference(m in masses(), b in exponent(), s in positive_s()) {
        let h = 1e-6 * s;
        let fd = (eval_g(m, b, s + h).unwrap() - eval_g(m, b, s - h).unwrap()) / (2.0 * h);
        let exact = eval_g_prime(m, b, s).unwrap();
        let scale = exact.abs().max(expanded_magnitude(m, b, s) / s);
        prop_assert!((fd - exact).abs() <= 1e-6 * scale, "{fd} vs {exact}");
    }

    #[test]
    fn transform_identity(m in masses(), b in exponent(), y in 0.05f64..0.95) {
        let s = y / (1.0 - y);
        let h = h_signomial(m, b).unwrap();
        let scale = (1.0 - y).powf(1.0 - b);
        let exact = scale * h.evaluate(y).unwrap();
        let magnitude: f64 = scale
            * h.terms().iter().map(|t| (t.coefficient * y.powf(t.exponent)).abs()).sum::<f64>();
        // g without its affine part, which has no curvature and only adds rounding noise
        // x^b − 1, so the constant drops out as well
        let rho = |x: f64| (b * x.ln()).exp_m1();
        // (1+x)x^b − x(1+x)^b, or the same less 1; the smaller one at s loses least
        let third = |x: f64| -(1.0 + x) * x.powf(b) * ((b - 1.0) * (1.0 / x).ln_1p()).exp_m1();
        let third_less_one = |x: f64| (1.0 + x) * rho(x) - x * rho(1.0 + x);
        let shifted = third_less_one(s).abs() < third(s).abs();
        let curved = |x: f64| {
            let c = if shifted { third_less_one(x) } else { third(x) };
            m.m1 * rho(1.0 + x) + m.m2 * rho(x) + m.m3 * c
        };
        let fd = oracle::second_difference(curved, s, 1e-3 * s);
        prop_assert!((fd - exact).abs() <= 1e-5 * exact.abs().max(magnitude));
    }

    #[test]
    fn abc_ordering_below_one(b in -5.0f64..0.999, s in positive_s()) {
        let (a, bb, c) = abc_terms(b, s).unwrap();
        prop_assert!(a < 0.0 && c > 0.0);
        prop_assert!(a < bb && bb < c);
    }

    #[test]
    fn h_coefficient_functions_below_one(b in (-5.0f64..0.999).prop_filter("b != 0", |b| *b != 0.0), y in 0.01f64..0.99) {
        let alpha = eval_h(MassTriple::new(1.0, 0.0, 0.0), b, y).unwrap();
        let beta = eval_h(MassTriple::new(0.0, 1.0, 0.0), b, y).unwrap();
        let gamma = eval_h(MassTriple::new(0.0, 0.0, 1.0), b, y).unwrap();
        prop_assert!(alpha > 0.0 && beta > 0.0 && gamma > 0.0);
        prop_assert!(alpha < beta);
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        max_global_rejects: 1 << 16,
        ..ProptestConfig::with_cases(128)
    })]

    #[test]
    fn middle_cell_is_reflection_invariant(m in masses(), b in exponent()) {
        let a = count_cell(m, b, Cell::Two, DEFAULT_TOL).unwrap();
        let r = count_cell(m.reflected(), b, Cell::Two, DEFAULT_TOL).unwrap();
        prop_assert_eq!(a.count, r.count);
        // s ↦ 1/s
        let mut inverse: Vec<f64> = r.solutions.iter().map(|x| 1.0 / x.s).collect();
        inverse.sort_by(f64::total_cmp);
        // a pair may differ more only when both sit inside the rounding zone of g
        let unresolved = |s: f64| eval_g(m, b, s).unwrap().abs() <= 1e-12 * expanded_magnitude(m, b, s);
        for (x, &y) in a.solutions.iter().zip(&inverse) {
            prop_assert!(
                (x.s - y).abs() <= 1e-9 * x.s || (unresolved(x.s) && unresolved(y)),
                "{} vs {y}", x.s
            );
        }
    }

    #[test]
    fn middle_cell_bound_and_sign_laws(m in masses(), b in exponent()) {
        let r = count_cell(m, b, Cell::Two, DEFAULT_TOL).unwrap();
        let n = r.count.finite().unwrap();
        prop_assert!(n <= 3);
        if n == 3 {
            prop_assert!(r.solutions.iter().all(|x| !x.degenerate));
        }
        if n >= 2 && b < 1.0 {
            prop_assert!(m.m1 * m.m3 > 0.0 && m.m2 * m.m1 < 0.0);
            if b < 0.0 {
                prop_assert!(m.m1.abs().min(m.m3.abs()) < m.m2.abs());
            }
        }
    }

    #[test]
    fn isolation_respects_sign_rules(p in signomial()) {
        let iso = count_and_isolate(&p, 0.0, f64::INFINITY, DEFAULT_TOL).unwrap();
        let count = match iso.count {
            RootCount::Finite(n) => n,
            RootCount::IdenticallyZero => unreachable!("nonempty signomial"),
        };
        let n = p.len();
        prop_assert!(count <= p.sign_variations());
        prop_assert!(count < n);
        // brackets reaching past the float range cannot be evaluated at both ends
        let representable = |r: &&RootRecord| !r.degenerate && r.lo > 0.0 && r.hi.is_finite();
        for r in iso.roots.iter().filter(representable) {
            let (a, b) = (p.evaluate(r.lo).unwrap(), p.evaluate(r.hi).unwrap());
            if !(a.is_finite() && b.is_finite()) {
                continue;
            }
            prop_assert!(a * b <= 0.0, "{:?}: {a} and {b}", r);
        }
        if n >= 2 && count == n - 1 {
            prop_assert!(iso.roots.iter().all(|r| !r.degenerate));
        }
    }

    #[test]
    fn chain_removes_one_term_and_one_variation(p in signomial()) {
        let chain = p.derivative_chain();
        for w in chain.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if b.is_empty() {
                continue;
            }
            prop_assert_eq!(b.len() + 1, a.len());
            prop_assert!(b.sign_variations() < a.sign_variations());
        }
        prop_assert_eq!(chain.last().unwrap().sign_variations(), 0);
    }

    #[test]
    fn signomial_derivative_matches_central_difference(p in signomial(), lx in -3.0f64..3.0) {
        let x = lx.exp();
        let h = 1e-6 * x;
        let fd = (p.evaluate(x + h).unwrap() - p.evaluate(x - h).unwrap()) / (2.0 * h);
        let exact = p.derivative().evaluate(x).unwrap();
        let scale: f64 = p
            .terms()
            .iter()
            .map(|t| (t.coefficient * t.exponent * x.powf(t.exponent - 1.0)).abs())
            .sum::<f64>()
            .max(p.terms().iter().map(|t| (t.coefficient * x.powf(t.exponent)).abs()).sum::<f64>() / x);
        prop_assert!((fd - exact).abs() <= 1e-6 * scale, "{fd} vs {exact}");
    }

    #[test]
    fn curve_makes_symmetric_root_degenerate(b in (-5.0f64..5.0).prop_filter("b away from 1", |b| (b - 1.0).abs() > 1e-3)) {
        let m2 = frontier_curve_m2(b).unwrap();
        let d = eval_g_prime(MassTriple::new(1.0, m2, 1.0), b, 1.0).unwrap();
        prop_assert!(d.abs() < 1e-9, "g'(1) = {d}");
    }

    #[test]
    fn middle_count_off_frontiers_is_one_or_three(m2 in -4.0f64..2.0, b in -4.0f64..4.0) {
        let c = classify_e2(m2, b).unwrap();
        if !c.on_frontier {
            prop_assert!(c.value == Count::Finite(1) || c.value == Count::Finite(3));
        }
    }

    #[test]
    fn outer_count_matches_numerics(m2 in -4.0f64..2.0, b in -4.0f64..4.0) {
        prop_assume!(frontier_distance(m2, b) > 0.05);
        let c = classify_e1(m2, b).unwrap();
        let n = count_cell(MassTriple::new(1.0, m2, 1.0), b, Cell::One, DEFAULT_TOL).unwrap();
        prop_assert_eq!(c.value, n.count);
    }

    #[test]
    fn restriction_commutes_with_evaluation(
        raw in prop::collection::vec((-10.0f64..10.0, -3.0f64..3.0, -3.0f64..3.0), 1..=6),
        a1 in -3.0f64..3.0,
        x in 0.01f64..10.0,
        y in 0.01f64..10.0,
    ) {
        // the line through (x, y) with slope set by a1
        let a2 = (1.0 - a1 * x) / y;
        prop_assume!(a2.abs() > 1e-3);
        let f = BivariateSignomial::normalize(raw);
        let c = AffineConstraint::new(a1, a2).unwrap();
        let line = restrict_to_line(&f, c).unwrap();
        let (lo, hi) = line.interval;
        prop_assert!(lo < x && x < hi, "{x} outside ({lo}, {hi})");
        let direct: Vec<f64> = f
            .terms()
            .iter()
            .map(|m| m.coefficient * x.powf(m.x_exponent) * y.powf(m.y_exponent))
            .collect();
        let want: f64 = direct.iter().sum();
        let mag: f64 = direct.iter().map(|v| v.abs()).sum();
        let got = line.evaluate(x).unwrap();
        prop_assert!((got - want).abs() <= 1e-12 * mag, "{got} vs {want}");
    }

    #[test]
    fn bounds_are_monotone(n in 1u32..126, d1 in 1u32..6, d2 in 1u32..6, k in 0u32..6) {
        prop_assert!(straight_bound(n).unwrap() <= straight_bound(n + 1).unwrap());
        let base = khovanskii_bound(d1, d2, k).unwrap();
        prop_assert!(base <= khovanskii_bound(d1 + 1, d2, k).unwrap());
        prop_assert!(base <= khovanskii_bound(d1, d2 + 1, k).unwrap());
        prop_assert!(base <= khovanskii_bound(d1, d2, k + 1).unwrap());
    }
}
