mod common;

use common::{poly, poly_in, seeded_gammas};
use modjet::growth::{order_in_domain, order_of_poly};
use modjet::moebius::Moebius;
use modjet::orders::{measure_order, predict_cusp, predict_elliptic, OrderValue};
use modjet::polyalg::{parse_poly, Elliptic, MultiPoly, Var};
use proptest::prelude::*;
use proptest::strategy::ValueTree;

const P: u32 = 128;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn order_of_product_is_additive(f in poly(), g in poly()) {
        let (a, b) = (order_of_poly(&f).unwrap(), order_of_poly(&g).unwrap());
        let ab = order_of_poly(&(&f * &g)).unwrap();
        prop_assert_eq!((ab.e, ab.d), (a.e + b.e, a.d + b.d));
        prop_assert_eq!(&ab.alpha, &(&a.alpha * &b.alpha));
        prop_assert!(!ab.alpha.is_zero());
    }

    #[test]
    fn order_of_sum_is_at_least_the_minimum(f in poly(), g in poly()) {
        let s = &f + &g;
        prop_assume!(!s.is_zero());
        let (a, b) = (order_of_poly(&f).unwrap(), order_of_poly(&g).unwrap());
        let Ok(c) = order_of_poly(&s) else { return Ok(()) };
        let low = if a <= b { a.clone() } else { b.clone() };
        prop_assert!(c >= low);
        if a != b && (a.e, a.d) != (b.e, b.d) {
            prop_assert_eq!((c.e, c.d), (low.e, low.d));
        }
    }

    #[test]
    fn identity_domain_is_the_direct_order(f in poly()) {
        prop_assert_eq!(order_in_domain(&f, &Moebius::IDENTITY).unwrap(), order_of_poly(&f).unwrap());
    }
}

/// The cusp prediction (e, M) is attained at some sampled gamma with c != 0,
/// and no sampled gamma does better than e.
#[test]
fn cusp_prediction_is_generic() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    for _ in 0..20 {
        let p = poly_in(&Var::INPUT, 3, 4).new_tree(&mut runner).unwrap().current();
        let Ok(pred) = predict_cusp(&p) else { continue };
        let OrderValue::Cusp { e, m, .. } = pred.value else { unreachable!() };
        let mut hit = false;
        for g in seeded_gammas(3, 12, 20) {
            let Ok(o) = order_in_domain(&p, &g) else { continue };
            assert!(-o.e <= e as i64, "{p}: predicted e {e}, got {} at {g}", o.e);
            hit |= (-o.e, o.d) == (e as i64, m as i64);
        }
        assert!(hit, "{p}: prediction ({e}, {m}) never attained");
    }
}

/// Y2-free polynomials: measured order at gamma(rho) is at least the
/// prediction and equals it for some sampled gamma.
#[test]
fn elliptic_prediction_bounds_measurement() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let mut checked = 0;
    while checked < 5 {
        let p: MultiPoly = poly_in(&[Var::X, Var::Y0, Var::Y1], 3, 3).new_tree(&mut runner).unwrap().current();
        if p.uses_only(&[Var::X]) {
            continue;
        }
        checked += 1;
        let pred = predict_elliptic(&p, Elliptic::Rho).unwrap().order().unwrap() as i64;
        let mut hit = false;
        for g in seeded_gammas(11, 20, 20) {
            let z = g.act_point(&modjet::numeric::UHPoint::rho(P));
            let r = (z.im_f64() / 8.0).min(0.05);
            let m = measure_order(&p, &z, r, P).unwrap();
            assert!(m >= pred, "{p} at {g}: measured {m} < predicted {pred}");
            hit |= m == pred;
            if hit {
                break;
            }
        }
        assert!(hit, "{p}: prediction {pred} never attained");
    }
}

#[test]
fn measured_orders_at_elliptic_points() {
    let j1 = parse_poly("Y1").unwrap();
    let rho = modjet::numeric::UHPoint::rho(P);
    let i = modjet::numeric::UHPoint::i(P);
    assert_eq!(measure_order(&j1, &rho, 0.05, P).unwrap(), 2);
    assert_eq!(measure_order(&j1, &i, 0.05, P).unwrap(), 1);
    assert_eq!(measure_order(&j1, &rho, 0.025, P).unwrap(), 2);
    let f = parse_poly("Y0*Y2 - (2/3)*Y1^2").unwrap();
    assert!(measure_order(&f, &rho, 0.05, P).unwrap() >= 5);
}

/// With s the multiplicity of j(tau) = 2 as a root in Y0, the measured order
/// at some gamma(tau) equals s.
#[test]
fn unramified_prediction_is_attained() {
    use modjet::locate::invert_j;
    use modjet::orders::predict_unramified;
    use modjet::polyalg::CoefScalar;
    let tau = invert_j(&rug::Complex::with_val(P, 2), P).unwrap();
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    for s in 0..3u32 {
        let q = poly_in(&[Var::X, Var::Y1, Var::Y2], 2, 3).new_tree(&mut runner).unwrap().current();
        let p = &parse_poly("Y0 - 2").unwrap().pow(s) * &(&q + &parse_poly("Y0 + 1").unwrap());
        let pred = predict_unramified(&p, &CoefScalar::from_int(2)).unwrap().order().unwrap();
        assert_eq!(pred, s);
        let hit = seeded_gammas(5, 20, 20).iter().any(|g| {
            let z = g.act_point(&tau);
            let r = (z.im_f64() / 8.0).min(0.05);
            measure_order(&p, &z, r, P).is_ok_and(|m| m == s as i64)
        });
        assert!(hit, "{p}: order {s} never measured");
    }
}
