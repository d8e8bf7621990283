//! Sparse multivariate polynomials over [`CoefScalar`].

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Complex;
use serde::Serialize;

use super::scalar::CoefScalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Var {
    X,
    Y0,
    Y1,
    Y2,
    Z,
    W,
    C,
    T,
    U1,
    U2,
}

pub const NVARS: usize = 10;

impl Var {
    pub const ALL: [Var; NVARS] = [Var::X, Var::Y0, Var::Y1, Var::Y2, Var::Z, Var::W, Var::C, Var::T, Var::U1, Var::U2];

    /// The jet variables Y0, Y1, Y2.
    pub const Y: [Var; 3] = [Var::Y0, Var::Y1, Var::Y2];

    /// Variables of an input polynomial F(X, Y0, Y1, Y2).
    pub const INPUT: [Var; 4] = [Var::X, Var::Y0, Var::Y1, Var::Y2];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Var::X => "X",
            Var::Y0 => "Y0",
            Var::Y1 => "Y1",
            Var::Y2 => "Y2",
            Var::Z => "Z",
            Var::W => "W",
            Var::C => "C",
            Var::T => "T",
            Var::U1 => "U1",
            Var::U2 => "U2",
        }
    }

    pub fn from_name(s: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == s)
    }
}

/// Exponent vector indexed by [`Var::index`].
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Mono(pub [u16; NVARS]);

impl Mono {
    pub fn one() -> Self {
        Mono::default()
    }

    pub fn var(v: Var) -> Self {
        Mono::one().with(v, 1)
    }

    pub fn get(&self, v: Var) -> u16 {
        self.0[v.index()]
    }

    pub fn with(mut self, v: Var, e: u16) -> Self {
        self.0[v.index()] = e;
        self
    }

    pub fn mul(&self, o: &Mono) -> Mono {
        let mut m = *self;
        for i in 0..NVARS {
            m.0[i] += o.0[i];
        }
        m
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn degree_in(&self, vars: &[Var]) -> u32 {
        vars.iter().map(|v| self.get(*v) as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Default, Hash)]
pub struct MultiPoly {
    terms: BTreeMap<Mono, CoefScalar>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(CoefScalar::one())
    }

    pub fn constant(c: CoefScalar) -> Self {
        let mut p = Self::zero();
        p.add_term(Mono::one(), c);
        p
    }

    pub fn int(n: i64) -> Self {
        Self::constant(CoefScalar::from_int(n))
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Mono::var(v), CoefScalar::one())
    }

    pub fn monomial(m: Mono, c: CoefScalar) -> Self {
        let mut p = Self::zero();
        p.add_term(m, c);
        p
    }

    pub fn from_terms(it: impl IntoIterator<Item = (Mono, CoefScalar)>) -> Self {
        let mut p = Self::zero();
        for (m, c) in it {
            p.add_term(m, c);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &CoefScalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: Mono, c: CoefScalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn coeff(&self, m: &Mono) -> CoefScalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The value if this polynomial is a constant.
    pub fn constant_value(&self) -> Option<CoefScalar> {
        match self.terms.len() {
            0 => Some(CoefScalar::zero()),
            1 => {
                let (m, c) = self.terms.iter().next()?;
                m.is_one().then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.get(v) as u32).max().unwrap_or(0)
    }

    /// Least exponent of `v` over all terms (0 for the zero polynomial).
    pub fn min_degree_in(&self, v: Var) -> u32 {
        self.terms.keys().map(|m| m.get(v) as u32).min().unwrap_or(0)
    }

    pub fn degree_in_set(&self, vars: &[Var]) -> u32 {
        self.terms.keys().map(|m| m.degree_in(vars)).max().unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|m| m.total_degree()).max().unwrap_or(0)
    }

    /// Variables that actually occur.
    pub fn vars(&self) -> Vec<Var> {
        Var::ALL.into_iter().filter(|v| self.degree_in(*v) > 0).collect()
    }

    pub fn uses_only(&self, allowed: &[Var]) -> bool {
        self.vars().iter().all(|v| allowed.contains(v))
    }

    pub fn depends_on(&self, v: Var) -> bool {
        self.degree_in(v) > 0
    }

    pub fn scale(&self, c: &CoefScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly { terms: self.terms.iter().map(|(m, k)| (*m, k * c)).filter(|(_, k)| !k.is_zero()).collect() }
    }

    pub fn mul_mono(&self, mono: &Mono) -> Self {
        MultiPoly { terms: self.terms.iter().map(|(m, k)| (m.mul(mono), k.clone())).collect() }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Splits into coefficients of powers of `v`: self = sum v^k * out[k].
    pub fn coeffs_in(&self, v: Var) -> BTreeMap<u32, MultiPoly> {
        let mut out: BTreeMap<u32, MultiPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            let k = m.get(v) as u32;
            out.entry(k).or_default().add_term(m.with(v, 0), c.clone());
        }
        out
    }

    /// Coefficient of v^k.
    pub fn coeff_of(&self, v: Var, k: u32) -> MultiPoly {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.get(v) as u32 == k)
                .map(|(m, c)| (m.with(v, 0), c.clone()))
                .collect(),
        }
    }

    /// Replaces each variable for which `f` returns a polynomial.
    pub fn substitute(&self, f: &dyn Fn(Var) -> Option<MultiPoly>) -> MultiPoly {
        let subs: Vec<Option<MultiPoly>> = Var::ALL.iter().map(|v| f(*v)).collect();
        let mut powers: Vec<Vec<MultiPoly>> = vec![vec![MultiPoly::one()]; NVARS];
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let mut kept = *m;
            let mut factor = MultiPoly::constant(c.clone());
            for v in Var::ALL {
                let i = v.index();
                let e = m.0[i] as usize;
                if e == 0 {
                    continue;
                }
                if let Some(s) = &subs[i] {
                    kept.0[i] = 0;
                    while powers[i].len() <= e {
                        let next = powers[i].last().expect("nonempty") * s;
                        powers[i].push(next);
                    }
                    factor = &factor * &powers[i][e];
                }
            }
            for (fm, fc) in factor.terms {
                out.add_term(fm.mul(&kept), fc);
            }
        }
        out
    }

    /// Substitutes a scalar for one variable.
    pub fn eval_var(&self, v: Var, value: &CoefScalar) -> MultiPoly {
        let p = MultiPoly::constant(value.clone());
        self.substitute(&|w| (w == v).then(|| p.clone()))
    }

    pub fn rename(&self, from: Var, to: Var) -> MultiPoly {
        let p = MultiPoly::var(to);
        self.substitute(&|w| (w == from).then(|| p.clone()))
    }

    pub fn derivative(&self, v: Var) -> MultiPoly {
        let mut out = MultiPoly::zero();
        for (m, c) in &self.terms {
            let e = m.get(v);
            if e > 0 {
                out.add_term(m.with(v, e - 1), c.scale_int(e as i64));
            }
        }
        out
    }

    /// Multiplicity of the root u of `self` as a polynomial in `v`.
    pub fn root_multiplicity(&self, v: Var, u: &CoefScalar) -> u32 {
        if self.is_zero() {
            return u32::MAX;
        }
        let shifted = &MultiPoly::var(v) + &MultiPoly::constant(u.clone());
        self.substitute(&|w| (w == v).then(|| shifted.clone())).min_degree_in(v)
    }

    /// Numeric form in (X, Y0, Y1, Y2) at `prec` bits.
    pub fn compile(&self, prec: u32) -> CompiledPoly {
        debug_assert!(self.uses_only(&Var::INPUT));
        CompiledPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (c.to_complex(prec), [m.get(Var::X), m.get(Var::Y0), m.get(Var::Y1), m.get(Var::Y2)]))
                .collect(),
            prec,
        }
    }
}

/// A polynomial in (X, Y0, Y1, Y2) with coefficients rounded to complex floats.
#[derive(Clone, Debug)]
pub struct CompiledPoly {
    terms: Vec<(Complex, [u16; 4])>,
    prec: u32,
}

impl CompiledPoly {
    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Value at `args` = (X, Y0, Y1, Y2), with the sum of term moduli for
    /// rounding estimates.
    pub fn eval(&self, args: &[Complex; 4]) -> (Complex, rug::Float) {
        let prec = self.prec;
        let maxdeg: Vec<usize> =
            (0..4).map(|i| self.terms.iter().map(|t| t.1[i] as usize).max().unwrap_or(0)).collect();
        let powers: Vec<Vec<Complex>> = (0..4)
            .map(|i| {
                let mut v = vec![Complex::with_val(prec, 1u32)];
                for e in 1..=maxdeg[i] {
                    let next = Complex::with_val(prec, &v[e - 1] * &args[i]);
                    v.push(next);
                }
                v
            })
            .collect();
        let mut acc = Complex::new(prec);
        let mut absum = crate::numeric::zero_bound();
        for (c, e) in &self.terms {
            let mut t = c.clone();
            for i in 0..4 {
                if e[i] > 0 {
                    t *= &powers[i][e[i] as usize];
                }
            }
            absum += crate::numeric::abs_up(&t);
            acc += &t;
        }
        (acc, absum)
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.iter().map(|t| t.1.iter().map(|&e| e as u32).sum::<u32>()).max().unwrap_or(0)
    }
}

impl Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, o: &MultiPoly) -> MultiPoly {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(*m, c.clone());
        }
        p
    }
}

impl Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, o: &MultiPoly) -> MultiPoly {
        let mut p = self.clone();
        for (m, c) in &o.terms {
            p.add_term(*m, -c);
        }
        p
    }
}

impl Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, o: &MultiPoly) -> MultiPoly {
        let mut p = MultiPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                p.add_term(m1.mul(m2), c1 * c2);
            }
        }
        p
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly { terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        -&self
    }
}

macro_rules! owned_poly_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, o: MultiPoly) -> MultiPoly { (&self).$f(&o) }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $f(self, o: &MultiPoly) -> MultiPoly { (&self).$f(o) }
        }
    )*};
}
owned_poly_ops!(Add add, Sub sub, Mul mul);

fn fmt_mono(m: &Mono) -> Vec<String> {
    Var::ALL
        .iter()
        .filter(|v| m.get(**v) > 0)
        .map(|v| match m.get(*v) {
            1 => v.name().to_string(),
            e => format!("{}^{}", v.name(), e),
        })
        .collect()
}

impl fmt::Display for MultiPoly {
    /// Canonical text: terms in descending monomial order, explicit `*`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let (neg, cs) = c.signed_factor();
            let mut factors = fmt_mono(m);
            if cs != "1" || factors.is_empty() {
                factors.insert(0, cs);
            }
            let body = factors.join("*");
            match (first, neg) {
                (true, true) => write!(f, "-{body}")?,
                (true, false) => write!(f, "{body}")?,
                (false, true) => write!(f, " - {body}")?,
                (false, false) => write!(f, " + {body}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl Serialize for MultiPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}
