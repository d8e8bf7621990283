//! Truncated Laurent series in q with a bound on the discarded tail.

use rug::ops::Pow;
use rug::Complex;

use crate::error::Result;
use crate::polyalg::CoefScalar;

use super::table::{shared, FourierTable};

/// Coefficient domain of a [`QSeries`].
pub trait Coeff: Clone + std::fmt::Debug + PartialEq {
    fn is_zero(&self) -> bool;
    fn zero_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn scale_int(&self, k: i64) -> Self;
    /// Modulus estimate, used for tail bookkeeping only.
    fn magnitude(&self) -> f64;
}

impl Coeff for CoefScalar {
    fn is_zero(&self) -> bool {
        CoefScalar::is_zero(self)
    }
    fn zero_like(&self) -> Self {
        CoefScalar::zero()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale_int(&self, k: i64) -> Self {
        CoefScalar::scale_int(self, k)
    }
    fn magnitude(&self) -> f64 {
        CoefScalar::magnitude(self)
    }
}

impl Coeff for Complex {
    fn is_zero(&self) -> bool {
        self.real().is_zero() && self.imag().is_zero()
    }
    fn zero_like(&self) -> Self {
        Complex::new(self.prec())
    }
    fn add(&self, o: &Self) -> Self {
        Complex::with_val(self.prec(), self + o)
    }
    fn sub(&self, o: &Self) -> Self {
        Complex::with_val(self.prec(), self - o)
    }
    fn mul(&self, o: &Self) -> Self {
        Complex::with_val(self.prec(), self * o)
    }
    fn scale_int(&self, k: i64) -> Self {
        Complex::with_val(self.prec(), self * k)
    }
    fn magnitude(&self) -> f64 {
        self.clone().abs().real().to_f64()
    }
}

/// sum_{k=m0}^{K} c_k q^k + R(q), with |R(q)| <= tail * |q|^(K+1) for |q| <= qmax.
#[derive(Clone, Debug, PartialEq)]
pub struct QSeries<C: Coeff> {
    m0: i64,
    coeffs: Vec<C>,
    trunc: i64,
    tail: f64,
    qmax: f64,
}

/// qmax^e, saturating for extreme exponents.
fn qpow(qmax: f64, e: i64) -> f64 {
    if e < 0 {
        f64::INFINITY
    } else if e > 100_000 {
        0.0
    } else {
        qmax.powi(e as i32)
    }
}

/// |q| on the standard fundamental domain never exceeds exp(-pi*sqrt(3)).
pub fn default_qmax() -> f64 {
    (-std::f64::consts::PI * 3f64.sqrt()).exp()
}

impl<C: Coeff> QSeries<C> {
    /// Builds and normalizes. `coeffs[i]` multiplies q^(m0 + i).
    pub fn new(m0: i64, coeffs: Vec<C>, trunc: i64, tail: f64, qmax: f64) -> Self {
        let mut s = QSeries { m0, coeffs, trunc, tail, qmax };
        s.normalize();
        s
    }

    fn normalize(&mut self) {
        let keep = (self.trunc - self.m0 + 1).max(0) as usize;
        self.coeffs.truncate(keep);
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(i) => {
                self.coeffs.drain(..i);
                self.m0 += i as i64;
                while self.coeffs.last().is_some_and(|c| c.is_zero()) {
                    self.coeffs.pop();
                }
            }
            None => {
                self.coeffs.clear();
                self.m0 = self.trunc + 1;
            }
        }
    }

    /// Exponent of the leading known nonzero term, if any.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.m0)
    }

    pub fn leading(&self) -> Option<(i64, &C)> {
        self.coeffs.first().map(|c| (self.m0, c))
    }

    pub fn m0(&self) -> i64 {
        self.m0
    }

    /// Highest exponent known exactly.
    pub fn trunc(&self) -> i64 {
        self.trunc
    }

    pub fn tail_bound(&self) -> f64 {
        self.tail
    }

    pub fn qmax(&self) -> f64 {
        self.qmax
    }

    /// True when every coefficient through the truncation order vanishes.
    pub fn is_zero_to_depth(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: i64) -> Option<&C> {
        if k < self.m0 || k > self.trunc {
            return None;
        }
        self.coeffs.get((k - self.m0) as usize)
    }

    /// Nonzero terms as (exponent, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(i, c)| (self.m0 + i as i64, c))
    }

    fn some_coeff(&self, other: &Self) -> Option<C> {
        self.coeffs.first().or(other.coeffs.first()).map(|c| c.zero_like())
    }

    /// Bound on sum_{k=from}^{trunc} |c_k| qmax^(k-from).
    fn dropped_mass(&self, from: i64, qmax: f64) -> f64 {
        self.terms().filter(|(k, _)| *k >= from).map(|(k, c)| c.magnitude() * qpow(qmax, k - from)).sum()
    }

    /// Re-expresses the tail relative to a lower truncation `k`.
    fn tail_at(&self, k: i64, qmax: f64) -> f64 {
        debug_assert!(k <= self.trunc);
        self.dropped_mass(k + 1, qmax) + self.tail * qpow(qmax, self.trunc - k)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.combine(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.combine(o, true)
    }

    fn combine(&self, o: &Self, negate: bool) -> Self {
        let trunc = self.trunc.min(o.trunc);
        let qmax = self.qmax.min(o.qmax);
        let tail = self.tail_at(trunc, qmax) + o.tail_at(trunc, qmax);
        let Some(zero) = self.some_coeff(o) else {
            return QSeries { m0: trunc + 1, coeffs: vec![], trunc, tail, qmax };
        };
        let m0 = self.m0.min(o.m0);
        let mut coeffs = vec![zero; (trunc - m0 + 1).max(0) as usize];
        for (k, c) in self.terms() {
            if k <= trunc {
                let slot = &mut coeffs[(k - m0) as usize];
                *slot = slot.add(c);
            }
        }
        for (k, c) in o.terms() {
            if k <= trunc {
                let slot = &mut coeffs[(k - m0) as usize];
                *slot = if negate { slot.sub(c) } else { slot.add(c) };
            }
        }
        QSeries::new(m0, coeffs, trunc, tail, qmax)
    }

    pub fn neg(&self) -> Self {
        let mut s = self.clone();
        for c in s.coeffs.iter_mut() {
            *c = c.scale_int(-1);
        }
        s
    }

    pub fn scale(&self, a: &C) -> Self {
        let mut s = self.clone();
        for c in s.coeffs.iter_mut() {
            *c = c.mul(a);
        }
        s.tail *= a.magnitude();
        s.normalize();
        s
    }

    /// Product. Known through min(K_f + m0_g, K_g + m0_f); everything beyond,
    /// including tail cross terms, is folded into the new tail bound.
    pub fn mul(&self, o: &Self) -> Self {
        let qmax = self.qmax.min(o.qmax);
        let (fa, fb) = (self.m0.min(self.trunc + 1), o.m0.min(o.trunc + 1));
        let trunc = (self.trunc + fb).min(o.trunc + fa);
        let mag_f: Vec<(i64, f64)> = self.terms().map(|(k, c)| (k, c.magnitude())).collect();
        let mag_g: Vec<(i64, f64)> = o.terms().map(|(k, c)| (k, c.magnitude())).collect();
        let up = |e: i64| qpow(qmax, e);
        let mut tail = 0.0;
        // f_trunc * R_g and R_f * g_trunc and R_f * R_g
        for (k, m) in &mag_f {
            tail += m * o.tail * up(k + o.trunc - trunc);
        }
        for (k, m) in &mag_g {
            tail += m * self.tail * up(k + self.trunc - trunc);
        }
        tail += self.tail * o.tail * up(self.trunc + o.trunc + 1 - trunc);
        let Some(zero) = self.some_coeff(o) else {
            return QSeries { m0: trunc + 1, coeffs: vec![], trunc, tail, qmax };
        };
        if self.coeffs.is_empty() || o.coeffs.is_empty() {
            return QSeries { m0: trunc + 1, coeffs: vec![], trunc, tail, qmax };
        }
        let m0 = self.m0 + o.m0;
        let mut coeffs = vec![zero; (trunc - m0 + 1).max(0) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                let k = m0 + (i + j) as i64;
                if b.is_zero() {
                    continue;
                }
                if k <= trunc {
                    let slot = &mut coeffs[(k - m0) as usize];
                    *slot = slot.add(&a.mul(b));
                } else {
                    tail += a.magnitude() * b.magnitude() * up(k - trunc - 1);
                }
            }
        }
        QSeries::new(m0, coeffs, trunc, tail, qmax)
    }

    pub fn pow(&self, e: u32, one: &C) -> Self {
        if e == 0 {
            return QSeries::new(0, vec![one.clone()], i64::MAX / 4, 0.0, self.qmax);
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// q d/dq. The tail bound follows from Cauchy estimates and is valid on
    /// the halved disc |q| <= qmax/2.
    pub fn q_deriv(&self) -> Self {
        let mut s = self.clone();
        for (i, c) in s.coeffs.iter_mut().enumerate() {
            *c = c.scale_int(self.m0 + i as i64);
        }
        s.tail = self.tail * (2.0 * (self.trunc as f64 + 1.0) + 2.0);
        s.qmax = self.qmax / 2.0;
        s.normalize();
        s
    }
}

impl QSeries<Complex> {
    /// Sum of the known terms at q.
    pub fn eval(&self, q: &Complex) -> Complex {
        let prec = q.prec().0;
        let mut acc = Complex::new(prec);
        for (k, c) in self.terms() {
            let qk = Complex::with_val(prec, q.pow(k as i32));
            acc += Complex::with_val(prec, c * qk);
        }
        acc
    }
}

/// Coefficient domain requested from [`jet_series`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Domain {
    Exact,
    Float(u32),
}

/// Either kind of series, as returned by [`jet_series`].
#[derive(Clone, Debug, PartialEq)]
pub enum JetSeries {
    Exact(QSeries<CoefScalar>),
    Float(QSeries<Complex>),
}

/// q-expansion of the `order`-th derivative of j through q^K.
pub fn jet_series(order: u32, k: usize, domain: Domain) -> Result<JetSeries> {
    Ok(match domain {
        Domain::Exact => JetSeries::Exact(exact_jet_series(order, k)?),
        Domain::Float(prec) => {
            let ex = exact_jet_series(order, k)?;
            let coeffs: Vec<Complex> = (ex.m0..=ex.trunc)
                .map(|e| ex.coeff(e).map(|c| c.to_complex(prec)).unwrap_or_else(|| Complex::new(prec)))
                .collect();
            JetSeries::Float(QSeries::new(ex.m0, coeffs, ex.trunc, ex.tail, ex.qmax))
        }
    })
}

/// Exact q-expansion of j^(order) through q^K, tail valid for |q| <= default_qmax().
pub fn exact_jet_series(order: u32, k: usize) -> Result<QSeries<CoefScalar>> {
    exact_jet_series_with(order, k, default_qmax())
}

pub fn exact_jet_series_with(order: u32, k: usize, qmax: f64) -> Result<QSeries<CoefScalar>> {
    assert!(order <= 3, "derivatives up to order 3");
    let table = shared(k + 2)?;
    let factor = CoefScalar::two_pi_i_pow(order);
    let mut coeffs = Vec::with_capacity(k + 2);
    for e in -1..=(k as i64) {
        let a = CoefScalar::from_integer(&table.coeff(e));
        let w = match order {
            0 => a,
            _ => {
                let ke = e.pow(order);
                if ke == 0 {
                    CoefScalar::zero()
                } else {
                    &(&a * &factor) * &CoefScalar::from_int(ke)
                }
            }
        };
        coeffs.push(w);
    }
    let tail = tail_coefficient(&table, order, k, qmax) * (2.0 * std::f64::consts::PI).powi(order as i32);
    Ok(QSeries::new(-1, coeffs, k as i64, tail, qmax))
}

/// Bound on sum_{n>K} a_n n^o qmax^(n-K-1), assuming the ratios
/// a_{n+1}(n+1)^o / (a_n n^o) decrease, which holds on the stored range.
fn tail_coefficient(table: &FourierTable, order: u32, k: usize, qmax: f64) -> f64 {
    let n = k + 1;
    let ln_term = |m: usize| table.ln_coeff(m) + order as f64 * (m as f64).ln();
    let ratio = (ln_term(n + 1) - ln_term(n)).exp() * qmax;
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    ln_term(n).exp() / (1.0 - ratio)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exact(order: u32, k: usize) -> QSeries<CoefScalar> {
        exact_jet_series(order, k).unwrap()
    }

    #[test]
    fn leading_terms() {
        let j = exact(0, 0);
        assert_eq!(j.leading(), Some((-1, &CoefScalar::one())));
        assert_eq!(j.coeff(0), Some(&CoefScalar::from_int(744)));
        assert_eq!(j.trunc(), 0);
        let j1 = exact(1, 3);
        let minus_two_pi_i = -CoefScalar::two_pi_i_pow(1);
        assert_eq!(j1.leading(), Some((-1, &minus_two_pi_i)));
        assert!(j1.coeff(0).unwrap().is_zero());
        let j2 = exact(2, 3);
        let lead = &CoefScalar::from_int(-4) * &CoefScalar::pi_pow(2);
        assert_eq!(j2.leading(), Some((-1, &lead)));
    }

    #[test]
    fn product_truncation() {
        let j = exact(0, 10);
        let jj = j.mul(&j);
        assert_eq!(jj.m0(), -2);
        assert_eq!(jj.trunc(), 9);
        assert_eq!(jj.coeff(-1), Some(&CoefScalar::from_int(1488)));
    }

    #[test]
    fn q_deriv_of_j_matches_j_prime() {
        let j = exact(0, 12);
        let d = j.q_deriv().scale(&CoefScalar::two_pi_i_pow(1));
        let j1 = exact(1, 12);
        for k in -1..=12 {
            assert_eq!(d.coeff(k), j1.coeff(k), "k = {k}");
        }
    }

    #[test]
    fn cancellation_to_depth() {
        let j = exact(0, 8);
        let z = j.sub(&j);
        assert!(z.is_zero_to_depth());
        assert_eq!(z.trunc(), 8);
    }

    #[test]
    fn tail_bound_covers_dropped_terms() {
        let q: f64 = 0.004;
        let full = exact(0, 60);
        let short = exact(0, 20);
        let mut diff = 0.0;
        for (k, c) in full.terms() {
            if k > 20 {
                diff += c.magnitude() * q.powi(k as i32);
            }
        }
        assert!(diff <= short.tail_bound() * q.powi(21));
    }
}
