//! SL2(Z) acting on the upper half-plane.

use rand::Rng;
use rug::{Complex, Float};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numeric::{abs_up, pow2, UHPoint};
use crate::qseries::{eval_jet, Jet};

/// (a b; c d) with ad - bc = 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Moebius {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl Moebius {
    pub const IDENTITY: Moebius = Moebius { a: 1, b: 0, c: 0, d: 1 };
    /// z -> -1/z.
    pub const S: Moebius = Moebius { a: 0, b: -1, c: 1, d: 0 };
    /// z -> z + 1.
    pub const T: Moebius = Moebius { a: 1, b: 1, c: 0, d: 1 };

    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if (a as i128) * (d as i128) - (b as i128) * (c as i128) != 1 {
            return Err(Error::InvalidMatrix { a, b, c, d });
        }
        Ok(Moebius { a, b, c, d })
    }

    pub fn translation(n: i64) -> Self {
        Moebius { a: 1, b: n, c: 0, d: 1 }
    }

    pub fn entries(&self) -> (i64, i64, i64, i64) {
        (self.a, self.b, self.c, self.d)
    }

    pub fn a(&self) -> i64 {
        self.a
    }
    pub fn b(&self) -> i64 {
        self.b
    }
    pub fn c(&self) -> i64 {
        self.c
    }
    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn max_entry(&self) -> i64 {
        [self.a, self.b, self.c, self.d].iter().map(|x| x.abs()).max().unwrap_or(0)
    }

    /// Matrix product self * o, so that (self * o) z = self(o(z)).
    pub fn compose(&self, o: &Moebius) -> Moebius {
        let m = |x: i64, y: i64, u: i64, v: i64| {
            x.checked_mul(y)
                .and_then(|p| u.checked_mul(v).and_then(|q| p.checked_add(q)))
                .expect("matrix entry overflow")
        };
        Moebius {
            a: m(self.a, o.a, self.b, o.c),
            b: m(self.a, o.b, self.b, o.d),
            c: m(self.c, o.a, self.d, o.c),
            d: m(self.c, o.b, self.d, o.d),
        }
    }

    pub fn inverse(&self) -> Moebius {
        Moebius { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    /// cz + d.
    pub fn factor(&self, z: &Complex) -> Complex {
        let p = z.prec().0;
        Complex::with_val(p, z * self.c) + self.d
    }

    /// (az + b)/(cz + d).
    pub fn act(&self, z: &Complex) -> Complex {
        let p = z.prec().0;
        let num = Complex::with_val(p, z * self.a) + self.b;
        num / self.factor(z)
    }

    pub fn act_point(&self, z: &UHPoint) -> UHPoint {
        UHPoint::from_complex(self.act(z.as_complex())).expect("SL2(Z) preserves the upper half-plane")
    }

    /// Same action on the upper half-plane (equal up to sign).
    pub fn same_action(&self, o: &Moebius) -> bool {
        self == o || (self.a == -o.a && self.b == -o.b && self.c == -o.c && self.d == -o.d)
    }

    /// A random word in S and T^(+-1) of length at most `max_len`.
    pub fn random_word<R: Rng>(rng: &mut R, max_len: usize) -> Moebius {
        let len = rng.gen_range(1..=max_len.max(1));
        let mut g = Moebius::IDENTITY;
        for _ in 0..len {
            let step = match rng.gen_range(0..3) {
                0 => Moebius::S,
                1 => Moebius::T,
                _ => Moebius::translation(-1),
            };
            g = g.compose(&step);
        }
        g
    }

    /// A random word with entries bounded by `max_entry`, optionally with c != 0.
    pub fn random_bounded<R: Rng>(rng: &mut R, max_len: usize, max_entry: i64, need_c: bool) -> Moebius {
        loop {
            let g = Moebius::random_word(rng, max_len);
            if g.max_entry() <= max_entry && (!need_c || g.c != 0) {
                return g;
            }
        }
    }
}

impl std::fmt::Display for Moebius {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}; {}, {})", self.a, self.b, self.c, self.d)
    }
}

/// A point of the fundamental domain and the matrix carrying it back.
#[derive(Clone, Debug)]
pub struct Reduction {
    /// Representative in the standard fundamental domain.
    pub zred: UHPoint,
    /// gamma with gamma * zred = z.
    pub gamma: Moebius,
    /// The representative lies within the tolerance band of the boundary.
    pub on_boundary: bool,
}

/// Reduces z into {-1/2 <= Re < 1/2, |z| >= 1, and Re <= 0 on the unit arc}.
pub fn reduce(z: &UHPoint) -> Result<Reduction> {
    let prec = z.prec();
    let tol = pow2(-(prec as i64) / 2);
    let im = z.im_f64();
    let max_steps = 10 * (1 + (1.0 / im).ln().max(0.0).ceil() as usize) + 16;
    let mut w = z.as_complex().clone();
    let mut m = Moebius::IDENTITY;
    let mut steps = 0;
    loop {
        steps += 1;
        if steps > max_steps {
            return Err(Error::ReductionDiverged { steps });
        }
        let shift = Float::with_val(prec, w.real() + 0.5f64).floor();
        let n = shift.to_f64();
        if n.abs() > 4e18 {
            return Err(Error::ReductionDiverged { steps });
        }
        let n = n as i64;
        if n != 0 {
            *w.mut_real() -= n;
            m = Moebius::translation(-n).compose(&m);
        }
        let norm = Float::with_val(prec, w.norm_ref());
        let below = Float::with_val(prec, &norm - 1u32);
        if below < -tol.clone() {
            w = Complex::with_val(prec, w.recip_ref()) * -1i32;
            m = Moebius::S.compose(&m);
            continue;
        }
        if below.clone().abs() <= tol && *w.real() > tol {
            w = Complex::with_val(prec, w.recip_ref()) * -1i32;
            m = Moebius::S.compose(&m);
        }
        break;
    }
    let norm = Float::with_val(prec, w.norm_ref());
    let on_boundary = Float::with_val(prec, &norm - 1u32).abs() <= tol
        || Float::with_val(prec, w.real() + 0.5f64).abs() <= tol
        || Float::with_val(prec, w.real() - 0.5f64).abs() <= tol;
    Ok(Reduction { zred: UHPoint::from_complex(w)?, gamma: m.inverse(), on_boundary })
}

/// A cusp a/c in lowest terms with c >= 0; (1, 0) is infinity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CuspTarget {
    a: i64,
    c: i64,
}

impl CuspTarget {
    pub fn new(a: i64, c: i64) -> Result<Self> {
        let (a, c) = if c < 0 { (-a, -c) } else { (a, c) };
        if c == 0 && a != 1 && a != -1 {
            return Err(Error::InvalidArgument("infinity is written 1/0".into()));
        }
        if gcd(a, c) != 1 {
            return Err(Error::InvalidArgument(format!("{a}/{c} is not in lowest terms")));
        }
        Ok(CuspTarget { a: if c == 0 { 1 } else { a }, c })
    }

    pub fn infinity() -> Self {
        CuspTarget { a: 1, c: 0 }
    }

    pub fn is_infinity(&self) -> bool {
        self.c == 0
    }

    pub fn numer(&self) -> i64 {
        self.a
    }

    pub fn denom(&self) -> i64 {
        self.c
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// (g, x, y) with a x + b y = g.
fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        return if a < 0 { (-a, -1, 0) } else { (a, 1, 0) };
    }
    let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
    (g, y, x - a.div_euclid(b) * y)
}

/// gamma_k = (a, l + k a; c, m + k c) with a m - c l = 1, (m, l) chosen with
/// |l| minimal and then |m| minimal. gamma_k z tends to a/c as k grows.
pub fn cusp_sequence(u: &CuspTarget, k: i64) -> Result<Moebius> {
    if u.is_infinity() {
        return Err(Error::InvalidArgument("cusp sequences need a finite cusp".into()));
    }
    let (a, c) = (u.a, u.c);
    let (g, x, y) = ext_gcd(a, c);
    debug_assert_eq!(g, 1);
    // a x + c y = 1, so m = x and l = -y; shifting t gives m + c t, l + a t.
    let (m0, l0) = (x, -y);
    let (m, l) = if a == 0 {
        (m0 - c * (m0 as f64 / c as f64).round() as i64, l0)
    } else {
        let t0 = (-(l0 as f64) / a as f64).floor() as i64;
        (t0 - 1..=t0 + 2)
            .map(|t| (m0 + c * t, l0 + a * t))
            .min_by_key(|(m, l)| (l.abs(), m.abs()))
            .expect("nonempty range")
    };
    Moebius::new(a, l + k * a, c, m + k * c)
}

/// Moves the jet at z to the jet at gamma z using the derivative cocycle
/// with f = cz + d:
/// j'(gz) = f^2 j', j''(gz) = f^4 j'' + 2c f^3 j',
/// j'''(gz) = f^6 j''' + 6c f^5 j'' + 6c^2 f^4 j'.
pub fn transform_jet(g: &Moebius, z: &Complex, jet: &Jet) -> Jet {
    let prec = jet.prec();
    let f = g.factor(&Complex::with_val(prec, z));
    let c = g.c;
    let pw: Vec<Complex> = (0..=6).map(|e| Complex::with_val(prec, rug::ops::Pow::pow(&f, e as u32))).collect();
    let [j0, j1, j2, j3] = &jet.val;
    let v1 = Complex::with_val(prec, &pw[2] * j1);
    let v2 = Complex::with_val(prec, &pw[4] * j2) + Complex::with_val(prec, &pw[3] * j1) * (2 * c);
    let v3 = Complex::with_val(prec, &pw[6] * j3)
        + Complex::with_val(prec, &pw[5] * j2) * (6 * c)
        + Complex::with_val(prec, &pw[4] * j1) * (6 * c * c);
    let af: Vec<Float> = pw.iter().map(abs_up).collect();
    let cf = c.unsigned_abs() as f64;
    let e = &jet.err;
    let round = |v: &Complex| abs_up(v) * pow2(-(prec as i64) + 4);
    let e1 = Float::with_val(64, &af[2] * &e[1]) + round(&v1);
    let e2 = Float::with_val(64, &af[4] * &e[2]) + Float::with_val(64, &af[3] * &e[1]) * (2.0 * cf) + round(&v2);
    let e3 = Float::with_val(64, &af[6] * &e[3])
        + Float::with_val(64, &af[5] * &e[2]) * (6.0 * cf)
        + Float::with_val(64, &af[4] * &e[1]) * (6.0 * cf * cf)
        + round(&v3);
    Jet { val: [j0.clone(), v1, v2, v3], err: [e[0].clone(), e1, e2, e3] }
}

/// The jet anywhere in the upper half-plane: reduce, evaluate the series at
/// the representative, and transport back along the cocycle.
pub fn jet_anywhere(z: &UHPoint, prec: u32) -> Result<Jet> {
    let z = if z.prec() < prec { z.with_prec(prec) } else { z.clone() };
    let r = reduce(&z)?;
    let jet = eval_jet(&r.zred, prec)?;
    Ok(transform_jet(&r.gamma, r.zred.as_complex(), &jet))
}
