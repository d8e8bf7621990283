#![allow(dead_code)]

use modjet::moebius::Moebius;
use modjet::polyalg::{CoefScalar, GaussRat, Mono, MultiPoly, Var};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn coef() -> impl Strategy<Value = CoefScalar> {
    (-9i64..=9, 1i64..=4, -3i64..=3, -1i32..=1).prop_map(|(re, den, im, k)| {
        let re = if re == 0 && im == 0 { 1 } else { re };
        CoefScalar::term(GaussRat::new(rug::Rational::from((re, den)), im), k)
    })
}

fn mono(vars: &'static [Var], max_deg: u32) -> impl Strategy<Value = Mono> {
    prop::collection::vec(0u16..=max_deg as u16, vars.len()).prop_map(move |es| {
        let mut m = Mono::one();
        let mut left = max_deg as u16;
        for (v, e) in vars.iter().zip(es) {
            let e = e.min(left);
            left -= e;
            m = m.with(*v, e);
        }
        m
    })
}

/// Nonzero polynomials in the given variables of total degree at most `max_deg`.
pub fn poly_in(vars: &'static [Var], max_deg: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((mono(vars, max_deg), coef()), 1..=max_terms)
        .prop_map(MultiPoly::from_terms)
        .prop_filter("nonzero", |p| !p.is_zero())
}

pub fn poly() -> impl Strategy<Value = MultiPoly> {
    poly_in(&Var::INPUT, 4, 5)
}

/// Polynomials with rational coefficients only.
pub fn rational_poly(vars: &'static [Var], max_deg: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((mono(vars, max_deg), -9i64..=9), 1..=max_terms)
        .prop_map(|ts| MultiPoly::from_terms(ts.into_iter().map(|(m, c)| (m, CoefScalar::from_int(c)))))
        .prop_filter("nonzero", |p| !p.is_zero())
}

pub fn moebius(max_entry: i64, need_c: bool) -> impl Strategy<Value = Moebius> {
    any::<u64>().prop_map(move |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        Moebius::random_bounded(&mut rng, 8, max_entry, need_c)
    })
}

pub fn seeded_gammas(seed: u64, n: usize, max_entry: i64) -> Vec<Moebius> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| Moebius::random_bounded(&mut rng, 8, max_entry, true)).collect()
}
