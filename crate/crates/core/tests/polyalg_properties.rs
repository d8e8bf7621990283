mod common;

use common::{coef, moebius, poly, poly_in, rational_poly};
use modjet::moebius::Moebius;
use modjet::polyalg::{
    gamma_transform, is_j_homogeneous, j_degree, j_order, lemma61_check, parse_poly, slash, top_j_degree_part,
    w_decomposition, CoefScalar, MultiPoly, Var,
};
use proptest::prelude::*;

fn linear(c: i64, d: i64) -> MultiPoly {
    &MultiPoly::var(Var::X).scale(&CoefScalar::from_int(c)) + &MultiPoly::int(d)
}

fn rename_z(p: &MultiPoly) -> MultiPoly {
    p.rename(Var::Z, Var::X)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn parse_print_roundtrip(p in poly()) {
        let text = p.to_string();
        prop_assert_eq!(parse_poly(&text).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn gamma_is_a_ring_homomorphism(p in poly(), q in poly()) {
        let (gp, gq) = (gamma_transform(&p).unwrap(), gamma_transform(&q).unwrap());
        prop_assert_eq!(gamma_transform(&(&p * &q)).unwrap(), &gp * &gq);
        prop_assert_eq!(gamma_transform(&(&p + &q)).unwrap(), &gp + &gq);
    }

    #[test]
    fn gamma_has_a_left_inverse(p in poly()) {
        // W = 1, C = 0, Z = X recovers p.
        let g = gamma_transform(&p).unwrap();
        let back = g.eval_var(Var::W, &CoefScalar::one()).eval_var(Var::C, &CoefScalar::zero());
        prop_assert_eq!(rename_z(&back), p);
    }

    #[test]
    fn slash_is_multiplicative(p in poly(), q in poly(), g in moebius(12, false)) {
        let pq = &p * &q;
        let shift = p.degree_in(Var::X) + q.degree_in(Var::X) - pq.degree_in(Var::X);
        let lhs = &slash(&pq, &g).unwrap() * &linear(g.c(), g.d()).pow(shift);
        prop_assert_eq!(lhs, &slash(&p, &g).unwrap() * &slash(&q, &g).unwrap());
    }

    #[test]
    fn slash_composes(p in poly(), g in moebius(8, false), h in moebius(8, false)) {
        // Slashing by g then h equals r(X) times the slash by the product g h,
        // with r = (c_h X + d_h)^(n' - n) for n' the X-degree after the first slash.
        let pg = slash(&p, &g).unwrap();
        let twice = slash(&pg, &h).unwrap();
        let once = slash(&p, &g.compose(&h)).unwrap();
        let (n, n1) = (p.degree_in(Var::X), pg.degree_in(Var::X));
        let r = linear(h.c(), h.d());
        if n1 >= n {
            prop_assert_eq!(twice, &once * &r.pow(n1 - n));
        } else {
            prop_assert_eq!(&twice * &r.pow(n - n1), once);
        }
    }

    #[test]
    fn lemma_61_identity(p in poly(), a in coef(), b in coef()) {
        prop_assume!(a.is_unit());
        prop_assert!(lemma61_check(&p, &a, &b).unwrap());
    }

    #[test]
    fn top_w_coefficient_is_top_j_degree_part(p in poly()) {
        let w = w_decomposition(&p).unwrap();
        prop_assert_eq!(w.n, j_degree(&p));
        prop_assert_eq!(rename_z(&w.coeffs[w.n as usize]), top_j_degree_part(&p));
    }

    #[test]
    fn lowest_w_coefficient_structure(p in poly()) {
        let w = w_decomposition(&p).unwrap();
        let low = &w.coeffs[w.k0 as usize];
        prop_assert!(!low.depends_on(Var::Y2));
        prop_assert_eq!(w.k0, j_order(&p));
        let y1_power_times_xy0 = p.terms().map(|(m, _)| m.get(Var::Y2) == 0).all(|b| b)
            && p.terms().map(|(m, _)| m.get(Var::Y1)).collect::<std::collections::BTreeSet<_>>().len() == 1;
        if !y1_power_times_xy0 {
            prop_assert!(j_degree(&p) > 2 * low.degree_in(Var::Y1));
        }
    }

    #[test]
    fn j_homogeneous_structure(p in rational_poly(&[Var::Y0], 3, 3), e1 in 0u16..=2, e2 in 1u16..=2) {
        // F = p(Y0) Y1^(2 e2 + e1) + q(Y0) Y1^e1 Y2^e2 has constant j-degree.
        let a = p.mul_mono(&modjet::polyalg::Mono::one().with(Var::Y1, 2 * e2 + e1));
        let b = (&p + &MultiPoly::int(1)).mul_mono(&modjet::polyalg::Mono::one().with(Var::Y1, e1).with(Var::Y2, e2));
        let f = &a + &b;
        prop_assert!(is_j_homogeneous(&f));
        let w = w_decomposition(&f).unwrap();
        prop_assert_eq!(rename_z(&w.coeffs[w.n as usize]), f.clone());
        for (k, c) in w.coeffs.iter().enumerate() {
            let n_minus_k = w.n - k as u32;
            prop_assert!(c.is_zero() || (c.min_degree_in(Var::C) == n_minus_k && c.degree_in(Var::C) == n_minus_k));
        }
        let ell = w.ell.expect("lowest coefficient is a Y1 power times a Y0 polynomial");
        let t = f.degree_in(Var::Y2);
        prop_assert_eq!(w.k0, w.n - t);
        prop_assert_eq!(2 * ell, w.n - 2 * t);
        prop_assert!(2 * ell <= w.k0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn slash_matches_substitution_for_x_free(p in poly_in(&Var::Y, 3, 4), g in moebius(6, false)) {
        // Without X, p^g = Gamma(p) at W = cX + d, C = c.
        let direct = gamma_transform(&p).unwrap().substitute(&|v| match v {
            Var::W => Some(linear(g.c(), g.d())),
            Var::C => Some(MultiPoly::int(g.c())),
            _ => None,
        });
        prop_assert_eq!(slash(&p, &g).unwrap(), direct);
    }
}

#[test]
fn parser_examples() {
    let h = parse_poly("Y1^2 - Y0*Y2").unwrap();
    assert_eq!(h.total_degree(), 2);
    let p = parse_poly("4*pi^2*Y0 + Y2").unwrap();
    assert_eq!(p.len(), 2);
    let c = parse_poly("Y0*Y2 - (2/3)*Y1^2").unwrap();
    assert_eq!(c, parse_poly("-2/3*Y1^2 + Y2*Y0").unwrap());
    assert!(parse_poly("2 Y0").is_err());
    assert!(parse_poly("Y0 + Q").is_err());
    assert_eq!(slash(&parse_poly("X").unwrap(), &Moebius::T).unwrap(), parse_poly("X + 1").unwrap());
}
