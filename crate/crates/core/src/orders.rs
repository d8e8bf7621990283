//! Vanishing orders of p(z, jet(z)): predictions at unramified points, at the
//! elliptic points and at the cusp, winding-number measurements, and the scan
//! for coefficient ratios with a pole or exponential growth.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::growth::{ratio_order_in_domain, GrowthOrder};
use crate::locate::{invert_j, polynomial_roots, winding_number, JetPoly, RegionSpec};
use crate::moebius::Moebius;
use crate::numeric::UHPoint;
use crate::polyalg::{gamma_transform, ramified_expansion, CoefScalar, Elliptic, MultiPoly, Var};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Location {
    Unramified { j_tau: String },
    Elliptic { point: Elliptic },
    Cusp,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OrderValue {
    Zero {
        order: u32,
    },
    /// Order (-e, -m) at the cusp with 0 <= m <= m_max.
    Cusp {
        e: u32,
        m: u32,
        m_max: u32,
    },
}

#[derive(Clone, Debug, Serialize)]
pub struct OrderPrediction {
    pub location: Location,
    pub value: OrderValue,
    /// Holds for gamma in a Zariski dense subset of SL2(Z) rather than for all.
    pub generic: bool,
}

impl OrderPrediction {
    pub fn order(&self) -> Option<u32> {
        match self.value {
            OrderValue::Zero { order } => Some(order),
            OrderValue::Cusp { .. } => None,
        }
    }
}

/// Largest s with (Y0 - j(tau))^s dividing p.
pub fn predict_unramified(p: &MultiPoly, j_tau: &CoefScalar) -> Result<OrderPrediction> {
    if *j_tau == CoefScalar::zero() || *j_tau == CoefScalar::from_int(1728) {
        return Err(Error::RamifiedValue(j_tau.to_string()));
    }
    if p.is_zero() {
        return Err(Error::InvalidArgument("zero polynomial has no order".into()));
    }
    Ok(OrderPrediction {
        location: Location::Unramified { j_tau: j_tau.to_string() },
        value: OrderValue::Zero { order: p.root_multiplicity(Var::Y0, j_tau) },
        generic: true,
    })
}

/// Highest power of T dividing p(X, T^mu Y0 + u, T^(mu-1) Y1).
pub fn predict_elliptic(p: &MultiPoly, at: Elliptic) -> Result<OrderPrediction> {
    let (nu, _) = ramified_expansion(p, at)?;
    Ok(OrderPrediction {
        location: Location::Elliptic { point: at },
        value: OrderValue::Zero { order: nu },
        generic: true,
    })
}

/// The T-substitution bound extended to Y2 by Y2 -> T^(mu-2) Y2. It is not a
/// valid prediction once p depends on Y2.
pub fn naive_elliptic_bound(p: &MultiPoly, at: Elliptic) -> u32 {
    let t = MultiPoly::var(Var::T);
    let mu = at.mu();
    let y0 = &(&t.pow(mu) * &MultiPoly::var(Var::Y0)) + &MultiPoly::int(at.value());
    let y1 = &t.pow(mu - 1) * &MultiPoly::var(Var::Y1);
    let y2 = &t.pow(mu - 2) * &MultiPoly::var(Var::Y2);
    p.substitute(&|v| match v {
        Var::Y0 => Some(y0.clone()),
        Var::Y1 => Some(y1.clone()),
        Var::Y2 => Some(y2.clone()),
        _ => None,
    })
    .min_degree_in(Var::T)
}

/// e = deg_T p(X, T Y) and the generic M = deg_W Gamma(p_e)(Z, W, C, 1, -2 pi i, -4 pi^2).
pub fn predict_cusp(p: &MultiPoly) -> Result<OrderPrediction> {
    if p.is_zero() {
        return Err(Error::InvalidArgument("zero polynomial has no order".into()));
    }
    let e = p.degree_in_set(&Var::Y);
    let top = MultiPoly::from_terms(p.terms().filter(|(m, _)| m.degree_in(&Var::Y) == e).map(|(m, c)| (*m, c.clone())));
    let g = gamma_transform(&top)?;
    let y1 = MultiPoly::constant(-CoefScalar::two_pi_i_pow(1));
    let y2 = MultiPoly::constant(CoefScalar::two_pi_i_pow(2));
    let r = g.substitute(&|v| match v {
        Var::Y0 => Some(MultiPoly::one()),
        Var::Y1 => Some(y1.clone()),
        Var::Y2 => Some(y2.clone()),
        _ => None,
    });
    let m_max = gamma_transform(p)?.degree_in(Var::W);
    Ok(OrderPrediction {
        location: Location::Cusp,
        value: OrderValue::Cusp { e, m: r.degree_in(Var::W), m_max },
        generic: true,
    })
}

const MIN_HALVINGS: u32 = 6;
const MAX_STEPS: u32 = 14;

/// Winding number of F(z, jet(z)) around |z - tau| = r. The count can only
/// drop as r shrinks, so r is halved at least MIN_HALVINGS times and then
/// until two consecutive counts agree. A failure at a small radius falls back
/// to the last agreeing pair.
pub fn measure_order(f: &MultiPoly, tau: &UHPoint, radius: f64, prec: u32) -> Result<i64> {
    let jp = JetPoly::new(f)?;
    let mut r = radius.min(tau.im_f64() / 2.0);
    let mut prev: Option<i64> = None;
    let mut stable: Option<i64> = None;
    let mut halvings = 0;
    let mut last_err = None;
    for _ in 0..MAX_STEPS {
        match winding_number(&jp, &RegionSpec::disc(tau.clone(), r), prec) {
            Ok(w) => {
                if prev == Some(w.count) {
                    stable = Some(w.count);
                    if halvings >= MIN_HALVINGS || w.count == 0 {
                        return Ok(w.count);
                    }
                } else if stable.is_some_and(|s| w.count > s) {
                    return Err(Error::Internal(format!("winding count rose from {stable:?} to {}", w.count)));
                }
                prev = Some(w.count);
                r /= 2.0;
                halvings += 1;
            }
            Err(e @ (Error::BoundaryZero(_) | Error::PrecisionExhausted { .. })) if stable.is_some() => {
                last_err = Some(e);
                break;
            }
            Err(e @ Error::BoundaryZero(_)) => {
                last_err = Some(e);
                r *= 0.7;
            }
            Err(e) => return Err(e),
        }
    }
    stable.ok_or_else(|| {
        last_err.unwrap_or_else(|| Error::Inconclusive("winding counts did not stabilize under shrinking".into()))
    })
}

/// The point of SL2(Z) orbit of an elliptic point under gamma.
pub fn elliptic_point(at: Elliptic, prec: u32) -> UHPoint {
    match at {
        Elliptic::Rho => UHPoint::rho(prec),
        Elliptic::I => UHPoint::i(prec),
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Criterion {
    Pole { k: u32, tau: UHPoint, label: String, order: i64 },
    Growth { k: u32, gamma: Moebius, e: i64, d: i64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanEntry {
    pub k: u32,
    pub verdict: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub n: u32,
    pub entries: Vec<ScanEntry>,
    /// The first satisfied criterion, or None when nothing was established.
    pub first: Option<Criterion>,
}

const SCAN_RADIUS: f64 = 0.05;
const SCAN_GAMMAS: usize = 6;

fn scan_gammas(seed: u64) -> Vec<Moebius> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![Moebius::IDENTITY, Moebius::S];
    while out.len() < SCAN_GAMMAS {
        out.push(Moebius::random_bounded(&mut rng, 6, 20, true));
    }
    out
}

/// For F = sum X^k p_k, looks for some p_k / p_n with a pole in H or with
/// exponential growth in a fundamental domain.
pub fn scan_ratio_criteria(f: &MultiPoly, prec: u32, seed: u64) -> Result<ScanReport> {
    if !f.uses_only(&Var::INPUT) {
        return Err(Error::InvalidArgument("polynomial must use only X, Y0, Y1, Y2".into()));
    }
    let coeffs = f.coeffs_in(Var::X);
    let n = coeffs.keys().next_back().copied().unwrap_or(0);
    let pn = coeffs.get(&n).cloned().unwrap_or_else(MultiPoly::zero);
    let mut entries = Vec::new();
    let mut first = None;
    let mut poles: Vec<(UHPoint, String)> =
        [Elliptic::Rho, Elliptic::I].iter().map(|&e| (elliptic_point(e, prec), e.name().to_string())).collect();
    if pn.uses_only(&[Var::Y0]) && pn.degree_in(Var::Y0) > 0 {
        for (u, _) in polynomial_roots(&pn, Var::Y0, prec)? {
            let tau = invert_j(&u, prec)?;
            if !poles.iter().any(|(p, _)| (p.re_f64() - tau.re_f64()).hypot(p.im_f64() - tau.im_f64()) < 1e-8) {
                let (a, b) = crate::numeric::to_f64(&u);
                poles.push((tau, format!("j = {a} + {b}i")));
            }
        }
    }
    let mut pn_orders = Vec::new();
    for (tau, _) in &poles {
        pn_orders.push(measure_order(&pn, tau, SCAN_RADIUS, prec)?);
    }
    let gammas = scan_gammas(seed);
    for (&k, pk) in coeffs.iter().filter(|(k, _)| **k != n) {
        let mut verdict = String::from("no pole at the tested points and no growth in the sampled domains");
        let mut hit = None;
        for ((tau, label), on) in poles.iter().zip(&pn_orders) {
            let ok = measure_order(pk, tau, SCAN_RADIUS, prec)?;
            if on > &ok {
                verdict = format!("pole of order {} at {label}", on - ok);
                hit = Some(Criterion::Pole { k, tau: tau.clone(), label: label.clone(), order: on - ok });
                break;
            }
        }
        if hit.is_none() {
            for g in &gammas {
                let o: GrowthOrder = ratio_order_in_domain(pk, &pn, g)?;
                if o.is_exponential_growth() {
                    verdict = format!("exponential growth of order ({}, {}) in the domain of {g}", o.e, o.d);
                    hit = Some(Criterion::Growth { k, gamma: *g, e: o.e, d: o.d });
                    break;
                }
            }
        }
        if first.is_none() {
            first = hit;
        }
        entries.push(ScanEntry { k, verdict });
    }
    Ok(ScanReport { n, entries, first })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::parse_poly;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn unramified_predictions() {
        let two = CoefScalar::from_int(2);
        assert_eq!(predict_unramified(&p("(Y0-2)^3"), &two).unwrap().order(), Some(3));
        assert_eq!(predict_unramified(&p("Y1"), &two).unwrap().order(), Some(0));
        assert!(matches!(
            predict_unramified(&p("Y0 - 1728"), &CoefScalar::from_int(1728)),
            Err(Error::RamifiedValue(_))
        ));
    }

    #[test]
    fn elliptic_predictions() {
        assert_eq!(predict_elliptic(&p("Y0"), Elliptic::Rho).unwrap().order(), Some(3));
        assert_eq!(predict_elliptic(&p("Y1"), Elliptic::I).unwrap().order(), Some(1));
        let q = p("Y0*Y2 - (2/3)*Y1^2");
        assert!(matches!(predict_elliptic(&q, Elliptic::Rho), Err(Error::Y2Dependence)));
        assert_eq!(naive_elliptic_bound(&q, Elliptic::Rho), 4);
    }

    #[test]
    fn cusp_predictions() {
        let v = |s: &str| predict_cusp(&p(s)).unwrap().value;
        assert_eq!(v("Y0"), OrderValue::Cusp { e: 1, m: 0, m_max: 0 });
        assert!(matches!(v("4*pi^2*Y0 + Y2"), OrderValue::Cusp { e: 1, m: 4, .. }));
        assert!(matches!(v("Y1^2 - Y0*Y2"), OrderValue::Cusp { e: 2, m: 3, .. }));
    }

    #[test]
    fn measured_orders_of_j_prime() {
        let y1 = p("Y1");
        assert_eq!(measure_order(&y1, &UHPoint::rho(128), 0.05, 128).unwrap(), 2);
        assert_eq!(measure_order(&y1, &UHPoint::i(128), 0.05, 128).unwrap(), 1);
        assert!(measure_order(&p("Y0*Y2 - (2/3)*Y1^2"), &UHPoint::rho(128), 0.05, 128).unwrap() >= 5);
    }

    #[test]
    fn scan_finds_pole_and_growth() {
        let r = scan_ratio_criteria(&p("X^4*Y1^2 + Y0*(Y0-1728)"), 128, 1).unwrap();
        assert!(matches!(r.first, Some(Criterion::Pole { k: 0, order: 1, .. })), "{r:?}");
        let r = scan_ratio_criteria(&p("X^4*Y1^2 + Y0^2*(Y0-1728)"), 128, 1).unwrap();
        assert!(matches!(r.first, Some(Criterion::Growth { k: 0, e: -1, .. })), "{r:?}");
        let r = scan_ratio_criteria(&p("X*Y1"), 128, 1).unwrap();
        assert!(r.first.is_none() && r.entries.is_empty());
    }
}
