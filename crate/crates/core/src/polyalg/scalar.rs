//! Exact scalars: finite sums c*pi^k with c a Gaussian rational.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::ops::Pow;
use rug::{Complex, Float, Integer, Rational};

use crate::numeric::pi;

/// re + im*i with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussRat {
    pub re: Rational,
    pub im: Rational,
}

impl GaussRat {
    pub fn new(re: impl Into<Rational>, im: impl Into<Rational>) -> Self {
        GaussRat { re: re.into(), im: im.into() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::new(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn add(&self, o: &Self) -> Self {
        GaussRat { re: Rational::from(&self.re + &o.re), im: Rational::from(&self.im + &o.im) }
    }

    pub fn sub(&self, o: &Self) -> Self {
        GaussRat { re: Rational::from(&self.re - &o.re), im: Rational::from(&self.im - &o.im) }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let re = Rational::from(&self.re * &o.re) - Rational::from(&self.im * &o.im);
        let im = Rational::from(&self.re * &o.im) + Rational::from(&self.im * &o.re);
        GaussRat { re, im }
    }

    pub fn neg(&self) -> Self {
        GaussRat { re: Rational::from(-&self.re), im: Rational::from(-&self.im) }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = Rational::from(&self.re * &self.re) + Rational::from(&self.im * &self.im);
        let re = Rational::from(&self.re / &n);
        let im = -Rational::from(&self.im / &n);
        Some(GaussRat { re, im })
    }

    pub fn to_complex(&self, prec: u32) -> Complex {
        Complex::with_val(prec, (Float::with_val(prec, &self.re), Float::with_val(prec, &self.im)))
    }

    pub fn is_integral(&self) -> bool {
        *self.re.denom() == 1 && *self.im.denom() == 1
    }
}

/// A finite sum of c_k * pi^k, k in Z, c_k in Q(i). No zero values are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CoefScalar(BTreeMap<i32, GaussRat>);

impl CoefScalar {
    pub fn zero() -> Self {
        CoefScalar(BTreeMap::new())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_gauss(GaussRat::new(n, 0))
    }

    pub fn from_integer(n: &Integer) -> Self {
        Self::from_gauss(GaussRat::new(n.clone(), 0))
    }

    pub fn from_rational(r: Rational) -> Self {
        Self::from_gauss(GaussRat::new(r, 0))
    }

    pub fn from_gauss(g: GaussRat) -> Self {
        Self::term(g, 0)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        Self::from_gauss(GaussRat::new(0, 1))
    }

    /// pi^k.
    pub fn pi_pow(k: i32) -> Self {
        Self::term(GaussRat::one(), k)
    }

    /// g * pi^k.
    pub fn term(g: GaussRat, k: i32) -> Self {
        let mut m = BTreeMap::new();
        if !g.is_zero() {
            m.insert(k, g);
        }
        CoefScalar(m)
    }

    /// (2*pi*i)^k, the factor picked up by the k-th derivative of q^1.
    pub fn two_pi_i_pow(k: u32) -> Self {
        let mut g = GaussRat::one();
        for _ in 0..k {
            g = g.mul(&GaussRat::new(0, 2));
        }
        Self::term(g, k as i32)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &GaussRat)> {
        self.0.iter().map(|(k, g)| (*k, g))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// A single c*pi^k term; these are exactly the invertible elements.
    pub fn is_unit(&self) -> bool {
        self.0.len() == 1
    }

    /// Value as a rational number when this is a rational constant.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.0.len() {
            0 => Some(Rational::new()),
            1 => {
                let (k, g) = self.0.iter().next()?;
                (*k == 0 && g.im == 0).then(|| g.re.clone())
            }
            _ => None,
        }
    }

    pub fn as_gauss(&self) -> Option<GaussRat> {
        match self.0.len() {
            0 => Some(GaussRat::zero()),
            1 => {
                let (k, g) = self.0.iter().next()?;
                (*k == 0).then(|| g.clone())
            }
            _ => None,
        }
    }

    pub fn inv(&self) -> Option<Self> {
        if !self.is_unit() {
            return None;
        }
        let (k, g) = self.0.iter().next()?;
        Some(Self::term(g.inv()?, -k))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Integer power; negative exponents need a unit.
    pub fn powi(&self, e: i64) -> Option<Self> {
        if e >= 0 {
            Some(self.pow(e as u32))
        } else {
            Some(self.inv()?.pow((-e) as u32))
        }
    }

    pub fn scale_int(&self, n: i64) -> Self {
        self * &Self::from_int(n)
    }

    /// Coefficientwise complex conjugation (pi is real).
    pub fn conj(&self) -> Self {
        CoefScalar(
            self.0.iter().map(|(k, g)| (*k, GaussRat { re: g.re.clone(), im: Rational::from(-&g.im) })).collect(),
        )
    }

    pub fn to_complex(&self, prec: u32) -> Complex {
        let work = prec + 16;
        let p = pi(work);
        let mut acc = Complex::new(work);
        for (k, g) in &self.0 {
            let pk = Float::with_val(work, (&p).pow(*k));
            acc += g.to_complex(work) * pk;
        }
        Complex::with_val(prec, acc)
    }

    /// Rough modulus for bookkeeping.
    pub fn magnitude(&self) -> f64 {
        let z = self.to_complex(64);
        z.abs().real().to_f64()
    }

    fn insert_add(m: &mut BTreeMap<i32, GaussRat>, k: i32, g: GaussRat) {
        use std::collections::btree_map::Entry;
        match m.entry(k) {
            Entry::Vacant(v) => {
                if !g.is_zero() {
                    v.insert(g);
                }
            }
            Entry::Occupied(mut o) => {
                let s = o.get().add(&g);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }
}

impl Add for &CoefScalar {
    type Output = CoefScalar;
    fn add(self, o: &CoefScalar) -> CoefScalar {
        let mut m = self.0.clone();
        for (k, g) in &o.0 {
            CoefScalar::insert_add(&mut m, *k, g.clone());
        }
        CoefScalar(m)
    }
}

impl Sub for &CoefScalar {
    type Output = CoefScalar;
    fn sub(self, o: &CoefScalar) -> CoefScalar {
        let mut m = self.0.clone();
        for (k, g) in &o.0 {
            CoefScalar::insert_add(&mut m, *k, g.neg());
        }
        CoefScalar(m)
    }
}

impl Mul for &CoefScalar {
    type Output = CoefScalar;
    fn mul(self, o: &CoefScalar) -> CoefScalar {
        let mut m = BTreeMap::new();
        for (k1, g1) in &self.0 {
            for (k2, g2) in &o.0 {
                CoefScalar::insert_add(&mut m, k1 + k2, g1.mul(g2));
            }
        }
        CoefScalar(m)
    }
}

impl Neg for &CoefScalar {
    type Output = CoefScalar;
    fn neg(self) -> CoefScalar {
        CoefScalar(self.0.iter().map(|(k, g)| (*k, g.neg())).collect())
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for CoefScalar {
            type Output = CoefScalar;
            fn $f(self, o: CoefScalar) -> CoefScalar { (&self).$f(&o) }
        }
        impl $tr<&CoefScalar> for CoefScalar {
            type Output = CoefScalar;
            fn $f(self, o: &CoefScalar) -> CoefScalar { (&self).$f(o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for CoefScalar {
    type Output = CoefScalar;
    fn neg(self) -> CoefScalar {
        -&self
    }
}

fn fmt_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Renders g as a product-ready factor and a sign, e.g. ("3/2*i", false).
fn fmt_gauss(g: &GaussRat) -> (String, bool) {
    if g.im == 0 {
        let neg = g.re < 0;
        return (fmt_rational(&Rational::from(g.re.abs_ref())), neg);
    }
    if g.re == 0 {
        let neg = g.im < 0;
        let a = Rational::from(g.im.abs_ref());
        let s = if a == 1 { "i".to_string() } else { format!("{}*i", fmt_rational(&a)) };
        return (s, neg);
    }
    let im_sign = if g.im < 0 { "-" } else { "+" };
    let a = Rational::from(g.im.abs_ref());
    let ims = if a == 1 { "i".to_string() } else { format!("{}*i", fmt_rational(&a)) };
    (format!("({} {} {})", fmt_rational(&g.re), im_sign, ims), false)
}

impl CoefScalar {
    /// Canonical text as a (sign, factor) pair; the factor is "1" for +-1.
    pub(crate) fn signed_factor(&self) -> (bool, String) {
        if self.0.len() == 1 {
            let (k, g) = self.0.iter().next().expect("one term");
            let (gs, neg) = fmt_gauss(g);
            let s = match *k {
                0 => gs,
                k => {
                    let pp = if k == 1 { "pi".to_string() } else { format!("pi^({k})") };
                    if gs == "1" {
                        pp
                    } else {
                        format!("{gs}*{pp}")
                    }
                }
            };
            return (neg, s);
        }
        (false, format!("({self})"))
    }
}

impl fmt::Display for CoefScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, g) in self.0.iter().rev() {
            let (neg, s) = CoefScalar::term(g.clone(), *k).signed_factor();
            match (first, neg) {
                (true, true) => write!(f, "-{s}")?,
                (true, false) => write!(f, "{s}")?,
                (false, true) => write!(f, " - {s}")?,
                (false, false) => write!(f, " + {s}")?,
            }
            first = false;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_times_pi_i_is_two() {
        // alpha = 2/(pi*i)
        let pi_i = &CoefScalar::pi_pow(1) * &CoefScalar::i();
        let alpha = &CoefScalar::from_int(2) * &pi_i.inv().unwrap();
        assert_eq!(&alpha * &pi_i, CoefScalar::from_int(2));
    }

    #[test]
    fn cancellation_is_exact() {
        let a = &CoefScalar::from_int(4) * &CoefScalar::pi_pow(2);
        let b = &CoefScalar::from_int(-4) * &CoefScalar::pi_pow(2);
        assert!((&a + &b).is_zero());
    }

    #[test]
    fn two_pi_i_squared() {
        assert_eq!(CoefScalar::two_pi_i_pow(2), &CoefScalar::from_int(-4) * &CoefScalar::pi_pow(2));
    }

    #[test]
    fn non_units_have_no_inverse() {
        let s = &CoefScalar::one() + &CoefScalar::pi_pow(1);
        assert!(s.inv().is_none());
    }

    #[test]
    fn numeric_value() {
        let s = &CoefScalar::from_int(4) * &CoefScalar::pi_pow(2);
        let v = s.to_complex(64);
        assert!((v.real().to_f64() - 4.0 * std::f64::consts::PI.powi(2)).abs() < 1e-12);
    }
}

impl serde::Serialize for CoefScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
