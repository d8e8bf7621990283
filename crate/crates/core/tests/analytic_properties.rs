mod common;

use common::moebius;
use modjet::moebius::{jet_anywhere, reduce, transform_jet, Moebius};
use modjet::numeric::{abs_up, UHPoint};
use modjet::qseries::{eval_jet, jet_series, Domain, JetSeries};
use proptest::prelude::*;
use rug::{Complex, Float};

const P: u32 = 128;

fn diff(a: &Complex, b: &Complex) -> f64 {
    abs_up(&Complex::with_val(P, a - b)).to_f64()
}

fn point(x: f64, y: f64) -> UHPoint {
    UHPoint::new(x, y, P).unwrap()
}

/// j'''/j' - (3/2)(j''/j')^2 + (j^2 - 1968 j + 2654208)/(2 j^2 (j - 1728)^2) j'^2, relative to its largest term.
pub fn ode_residual(z: &UHPoint) -> f64 {
    let jet = eval_jet(z, P).unwrap();
    let [j, d1, d2, d3] = &jet.val;
    let a = Complex::with_val(P, d3 / d1);
    let r = Complex::with_val(P, d2 / d1);
    let b = Complex::with_val(P, &r * &r) * 1.5f64;
    let jm = Complex::with_val(P, j - 1728u32);
    let num = Complex::with_val(P, j * j) - Complex::with_val(P, j * 1968u32) + 2654208u32;
    let den = Complex::with_val(P, j * j) * Complex::with_val(P, &jm * &jm) * 2u32;
    let c = Complex::with_val(P, &num / &den) * Complex::with_val(P, d1 * d1);
    let total = Complex::with_val(P, &a - &b) + &c;
    let scale = [&a, &b, &c].iter().map(|t| abs_up(t).to_f64()).fold(0.0, f64::max);
    abs_up(&total).to_f64() / scale
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn periodicity(x in -0.5f64..0.5, y in 0.3f64..2.5) {
        let z = point(x, y);
        let (a, b) = (eval_jet(&z, P).unwrap(), eval_jet(&z.translate(1), P).unwrap());
        for o in 0..4 {
            let bound = Float::with_val(64, &a.err[o] + &b.err[o]).to_f64();
            prop_assert!(diff(&a.val[o], &b.val[o]) <= bound, "order {}", o);
        }
    }

    #[test]
    fn differential_equation(x in -0.5f64..0.5, y in 0.9f64..2.5) {
        let z = point(x, y);
        let jet = eval_jet(&z, P).unwrap();
        prop_assume!(abs_up(jet.d1()).to_f64() > 1.0);
        prop_assert!(ode_residual(&z) < 1e-20);
    }

    #[test]
    fn truncation_is_sound(x in -0.5f64..0.5, y in 0.6f64..2.0, k in 20usize..40, order in 0u32..4) {
        let (JetSeries::Float(short), JetSeries::Float(long)) =
            (jet_series(order, k, Domain::Float(P)).unwrap(), jet_series(order, k + 10, Domain::Float(P)).unwrap())
        else {
            unreachable!()
        };
        let z = point(x, y);
        let q = Complex::with_val(P, modjet::numeric::two_pi_i(P) * z.as_complex()).exp();
        let qa = abs_up(&q).to_f64();
        prop_assume!(qa <= short.qmax());
        let bound = short.tail_bound() * qa.powi(short.trunc() as i32 + 1);
        let gap = diff(&short.eval(&q), &long.eval(&q));
        let scale = abs_up(&long.eval(&q)).to_f64().max(1.0);
        prop_assert!(gap <= bound + 1e-30 * scale, "gap {} bound {}", gap, bound);
    }

    #[test]
    fn reduce_is_idempotent(x in -20.0f64..20.0, y in 0.01f64..3.0) {
        let r = reduce(&point(x, y)).unwrap();
        let again = reduce(&r.zred).unwrap();
        prop_assert!(diff(again.zred.as_complex(), r.zred.as_complex()) < 1e-30);
        prop_assert!(diff(&r.gamma.act(r.zred.as_complex()), point(x, y).as_complex()) < 1e-25 * (1.0 + x.abs()));
    }

    #[test]
    fn action_is_a_group_action(g in moebius(10, false), h in moebius(10, false), x in -1.0f64..1.0, y in 0.5f64..2.0) {
        let z = point(x, y);
        let two_steps = g.act(&h.act(z.as_complex()));
        let one = g.compose(&h).act(z.as_complex());
        prop_assert!(diff(&two_steps, &one) < 1e-25);
        prop_assert!(diff(&g.inverse().act(&g.act(z.as_complex())), z.as_complex()) < 1e-25);
    }

    #[test]
    fn cocycle_composes(g in moebius(10, false), h in moebius(10, false), x in -0.5f64..0.5, y in 0.9f64..2.0) {
        let z = point(x, y);
        let jet = eval_jet(&z, P).unwrap();
        let hz = h.act(z.as_complex());
        let two = transform_jet(&g, &hz, &transform_jet(&h, z.as_complex(), &jet));
        let one = transform_jet(&g.compose(&h), z.as_complex(), &jet);
        for o in 0..4 {
            let scale = abs_up(&one.val[o]).to_f64().max(1.0);
            prop_assert!(diff(&two.val[o], &one.val[o]) <= 1e-25 * scale, "order {}", o);
        }
    }

    #[test]
    fn cocycle_matches_direct_evaluation(g in moebius(10, false), x in -0.5f64..0.5, y in 0.9f64..2.0) {
        let z = point(x, y);
        let gz = g.act_point(&z);
        prop_assume!(gz.im_f64() >= 0.3);
        let moved = transform_jet(&g, z.as_complex(), &eval_jet(&z, P).unwrap());
        let direct = eval_jet(&gz, P).unwrap();
        for o in 0..4 {
            let scale = abs_up(&direct.val[o]).to_f64().max(1.0);
            prop_assert!(diff(&moved.val[o], &direct.val[o]) <= 1e-18 * scale, "order {}", o);
        }
    }

    #[test]
    fn j_is_invariant(g in moebius(10, false), x in -0.5f64..0.5, y in 0.9f64..2.0) {
        let z = point(x, y);
        let gz = g.act_point(&z);
        prop_assume!(gz.im_f64() >= 0.3);
        let (a, b) = (eval_jet(&gz, P).unwrap(), eval_jet(&z, P).unwrap());
        // gz is itself rounded to P bits, which moves j by about |j'| |gz| 2^-P.
        let input = abs_up(a.d1()).to_f64() * abs_up(gz.as_complex()).to_f64() * 2f64.powi(-(P as i32) + 2);
        let bound = Float::with_val(64, &a.err[0] + &b.err[0]).to_f64() + input;
        prop_assert!(diff(a.j(), b.j()) <= bound);
    }
}

#[test]
fn special_values() {
    let i = eval_jet(&UHPoint::i(P), P).unwrap();
    assert!(diff(i.j(), &Complex::with_val(P, 1728)) < 1e-25);
    assert!(abs_up(i.d1()).to_f64() < 1e-20);
    let r = eval_jet(&UHPoint::rho(P), P).unwrap();
    for o in 0..3 {
        assert!(abs_up(&r.val[o]).to_f64() < 1e-20, "order {o}");
    }
    let s = jet_anywhere(&Moebius::S.act_point(&point(0.3, 1.7)), P).unwrap();
    let d = eval_jet(&point(0.3, 1.7), P).unwrap();
    assert!(diff(s.j(), d.j()) < 1e-25 * abs_up(d.j()).to_f64());
}
