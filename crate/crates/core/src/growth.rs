//! Orders at i-infinity of functions sum_k g_k(w) w^k with 1-periodic g_k.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moebius::Moebius;
use crate::numeric::{abs_up, two_pi_i, UHPoint};
use crate::polyalg::{slash, CoefScalar, MultiPoly, Var};
use crate::qseries::{exact_jet_series, QSeries};

/// Extra q-orders inspected beyond the candidate exponent.
pub const DEFAULT_GUARD: i64 = 10;

/// Largest truncation used when a candidate has to be confirmed deeper.
const MAX_DEPTH: usize = 400;

/// sum_k g_k(w) w^k with each g_k given by its exact q-expansion.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PeriodicPolyFunction {
    terms: BTreeMap<u32, QSeries<CoefScalar>>,
}

impl PeriodicPolyFunction {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds g * w^k.
    pub fn add_term(&mut self, k: u32, g: QSeries<CoefScalar>) {
        let s = match self.terms.remove(&k) {
            Some(old) => old.add(&g),
            None => g,
        };
        self.terms.insert(k, s);
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &QSeries<CoefScalar>)> {
        self.terms.iter().map(|(k, s)| (*k, s))
    }

    /// Lowest truncation order over all coefficient series.
    pub fn depth(&self) -> i64 {
        self.terms.values().map(|s| s.trunc()).min().unwrap_or(i64::MAX)
    }

    /// F(w, j(w), j'(w), j''(w)) for F in X, Y0, Y1, Y2, with series through q^k.
    pub fn from_poly(f: &MultiPoly, k: usize) -> Result<Self> {
        if !f.uses_only(&Var::INPUT) {
            return Err(Error::InvalidArgument("polynomial must use only X, Y0, Y1, Y2".into()));
        }
        let base: Vec<QSeries<CoefScalar>> = (0..3).map(|o| exact_jet_series(o, k)).collect::<Result<_>>()?;
        let one = QSeries::new(0, vec![CoefScalar::one()], i64::MAX / 4, 0.0, base[0].qmax());
        let mut powers: Vec<Vec<QSeries<CoefScalar>>> = vec![vec![one.clone()]; 3];
        let mut out = PeriodicPolyFunction::new();
        for (m, c) in f.terms() {
            let mut s = one.clone();
            for (i, v) in Var::Y.iter().enumerate() {
                let e = m.get(*v) as usize;
                while powers[i].len() <= e {
                    let next = powers[i].last().expect("nonempty").mul(&base[i]);
                    powers[i].push(next);
                }
                if e > 0 {
                    s = s.mul(&powers[i][e]);
                }
            }
            out.add_term(m.get(Var::X) as u32, s.scale(c));
        }
        Ok(out)
    }
}

/// f ~ alpha w^d q^e. The paper writes the same order as (e, -d) with
/// f ~ alpha w^(-d) q^e; [`GrowthOrder::paper_form`] returns that pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GrowthOrder {
    pub e: i64,
    pub d: i64,
    pub alpha: CoefScalar,
    /// Denominator of the leading coefficient for quotients whose leading
    /// denominator is not a unit; 1 otherwise.
    pub alpha_den: CoefScalar,
}

impl GrowthOrder {
    pub fn new(e: i64, d: i64, alpha: CoefScalar) -> Self {
        GrowthOrder { e, d, alpha, alpha_den: CoefScalar::one() }
    }

    pub fn paper_form(&self) -> (i64, i64) {
        (self.e, -self.d)
    }

    pub fn is_exponential_growth(&self) -> bool {
        self.e < 0
    }

    /// Order of the quotient self / den.
    pub fn ratio(&self, den: &GrowthOrder) -> GrowthOrder {
        let num = &self.alpha * &den.alpha_den;
        let dd = &self.alpha_den * &den.alpha;
        let (alpha, alpha_den) = match dd.inv() {
            Some(inv) => (&num * &inv, CoefScalar::one()),
            None => (num, dd),
        };
        GrowthOrder { e: self.e - den.e, d: self.d - den.d, alpha, alpha_den }
    }

    /// Leading coefficient as a complex number.
    pub fn alpha_complex(&self, prec: u32) -> Complex {
        self.alpha.to_complex(prec) / self.alpha_den.to_complex(prec)
    }

    fn key(&self) -> (i64, i64) {
        (self.e, -self.d)
    }
}

impl PartialOrd for GrowthOrder {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.key().cmp(&o.key()))
    }
}

/// Lexicographic on (e, -d): smaller means faster growth, so
/// ord(f + g) >= min(ord f, ord g).
impl Ord for GrowthOrder {
    fn cmp(&self, o: &Self) -> Ordering {
        self.key().cmp(&o.key())
    }
}

/// e = least q-exponent over the coefficient series; among those, d = the
/// largest w-power and alpha its leading coefficient.
pub fn order_at_infinity(f: &PeriodicPolyFunction) -> Result<GrowthOrder> {
    let mut best: Option<(i64, u32)> = None;
    for (k, s) in f.terms() {
        if let Some(v) = s.valuation() {
            best = match best {
                Some((e, d)) if e < v || (e == v && d > k) => Some((e, d)),
                _ => Some((v, k)),
            };
        }
    }
    let Some((e, d)) = best else {
        return Err(Error::Inconclusive(format!("all coefficients vanish through q^{}", f.depth())));
    };
    if f.depth() < e {
        return Err(Error::Inconclusive(format!(
            "series known only through q^{} but candidate exponent is {e}",
            f.depth()
        )));
    }
    let alpha = f.terms.get(&d).and_then(|s| s.coeff(e)).cloned().expect("leading coefficient exists");
    Ok(GrowthOrder::new(e, d as i64, alpha))
}

/// Order at i-infinity of F(w, jet(w)), with the inspection depth extended
/// once if the candidate sits too close to the truncation.
pub fn order_of_poly(f: &MultiPoly) -> Result<GrowthOrder> {
    let dy = f.degree_in_set(&Var::Y) as i64;
    let mut k = (DEFAULT_GUARD + 2 * dy + 2) as usize;
    let mut extended = false;
    loop {
        let pf = PeriodicPolyFunction::from_poly(f, k)?;
        let ord = order_at_infinity(&pf)?;
        let need = ord.e + DEFAULT_GUARD;
        if pf.depth() >= need || extended {
            if pf.depth() < ord.e {
                return Err(Error::Inconclusive("candidate exponent beyond inspected depth".into()));
            }
            return Ok(ord);
        }
        k = (k as i64 + need - pf.depth() + 2).min(MAX_DEPTH as i64) as usize;
        extended = true;
    }
}

/// Order of F(z, jet(z)) in the fundamental domain gamma F, that is the
/// order at i-infinity of F(gamma^-1 w, jet(gamma^-1 w)).
pub fn order_in_domain(f: &MultiPoly, gamma: &Moebius) -> Result<GrowthOrder> {
    let delta = gamma.inverse();
    let n = f.degree_in(Var::X) as i64;
    let fd = slash(f, &delta)?;
    let ord = order_of_poly(&fd)?;
    // F^delta(w) = (cw + d)^n F(delta w), and (cw + d)^n ~ c^n w^n when c != 0.
    let (c, d) = (delta.c(), delta.d());
    let (shift, lead) = if c != 0 { (n, c) } else { (0, d) };
    let inv = CoefScalar::from_int(lead).pow(n as u32).inv().expect("nonzero integer");
    let alpha = &ord.alpha * &inv;
    Ok(GrowthOrder { e: ord.e, d: ord.d - shift, alpha, alpha_den: ord.alpha_den })
}

/// Order of num/den in gamma F.
pub fn ratio_order_in_domain(num: &MultiPoly, den: &MultiPoly, gamma: &Moebius) -> Result<GrowthOrder> {
    Ok(order_in_domain(num, gamma)?.ratio(&order_in_domain(den, gamma)?))
}

pub fn has_exponential_growth(f: &MultiPoly, gamma: &Moebius) -> Result<bool> {
    Ok(order_in_domain(f, gamma)?.is_exponential_growth())
}

/// Outcome of a sampled confirmation. Heuristic only.
#[derive(Clone, Debug, Serialize)]
pub struct NumericCheck {
    pub confirmed: bool,
    /// Heights sampled.
    pub heights: Vec<f64>,
    /// |f / (alpha w^d q^e) - 1| at each height.
    pub deviations: Vec<f64>,
    pub heuristic: bool,
}

/// Samples f along w = x0 + iy for y = 2, 4, 8, 16 and accepts the candidate
/// when the relative deviation ends below 0.1 without growing.
pub fn numeric_order_check(
    f: &dyn Fn(&UHPoint) -> Result<Complex>,
    e: i64,
    d: i64,
    alpha: &Complex,
    x0: f64,
    prec: u32,
) -> NumericCheck {
    let heights = vec![2.0, 4.0, 8.0, 16.0];
    let mut deviations = Vec::new();
    for &y in &heights {
        let Ok(w) = UHPoint::new(x0, y, prec) else {
            deviations.push(f64::INFINITY);
            continue;
        };
        let dev = f(&w).ok().map(|v| {
            let q = Complex::with_val(prec, two_pi_i(prec) * w.as_complex()).exp();
            let model = Complex::with_val(prec, q.pow(e as i32))
                * Complex::with_val(prec, w.as_complex().pow(d as i32))
                * alpha;
            let r = Complex::with_val(prec, v / model) - 1u32;
            abs_up(&r).to_f64()
        });
        deviations.push(dev.unwrap_or(f64::INFINITY));
    }
    let last = *deviations.last().unwrap_or(&f64::INFINITY);
    let first = deviations.first().copied().unwrap_or(f64::INFINITY);
    NumericCheck { confirmed: last < 0.1 && last <= first, heights, deviations, heuristic: true }
}
