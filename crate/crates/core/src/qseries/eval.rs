//! Evaluation of j, j', j'', j''' from the q-expansion.

use rug::ops::Pow;
use rug::{Complex, Float};

use super::table::{shared, FourierTable, MAX_TERMS};
use crate::error::{Error, Result};
use crate::numeric::{abs_up, pi, pow2, two_pi_i, zero_bound, UHPoint, BOUND_PREC};
use crate::polyalg::{CompiledPoly, MultiPoly, Var};

/// Smallest Im(z) accepted by [`eval_jet`]; reduce to the fundamental domain first.
pub const EVAL_FLOOR: f64 = 0.05;

/// Reported bounds stay below 2^(-prec + GUARD_BITS) once Im(z) >= 0.5.
pub const GUARD_BITS: u32 = 40;

const EXTRA_BITS: u32 = 24;

/// (j, j', j'', j''') at a point, each with an absolute error bound.
#[derive(Clone, Debug)]
pub struct Jet {
    pub val: [Complex; 4],
    pub err: [Float; 4],
}

impl Jet {
    pub fn j(&self) -> &Complex {
        &self.val[0]
    }

    pub fn d1(&self) -> &Complex {
        &self.val[1]
    }

    pub fn d2(&self) -> &Complex {
        &self.val[2]
    }

    pub fn d3(&self) -> &Complex {
        &self.val[3]
    }

    pub fn prec(&self) -> u32 {
        self.val[0].prec().0
    }

    /// (z, j, j', j'') as arguments for a polynomial F(X, Y0, Y1, Y2).
    pub fn args(&self, z: &Complex) -> [Complex; 4] {
        let p = self.prec();
        [Complex::with_val(p, z), self.val[0].clone(), self.val[1].clone(), self.val[2].clone()]
    }
}

/// ln of the tail sum_{n>K} a_n n^o |q|^n, or +inf when the ratio test fails.
fn ln_tail(table: &FourierTable, order: u32, k: usize, ln_q: f64) -> f64 {
    let n = k + 1;
    let ln_term = |m: usize| table.ln_coeff(m) + order as f64 * (m as f64).ln() + m as f64 * ln_q;
    let ratio = (ln_term(n + 1) - ln_term(n)).exp();
    if ratio >= 1.0 {
        return f64::INFINITY;
    }
    ln_term(n) - (1.0 - ratio).ln()
}

/// Truncation order for |q| = exp(ln_q) at `prec` bits, growing the shared
/// table when needed.
fn choose_terms(ln_q: f64, prec: u32) -> Result<(std::sync::Arc<FourierTable>, usize)> {
    let target = -((prec + 10) as f64) * std::f64::consts::LN_2 - 3.0 * (2.0 * std::f64::consts::PI).ln();
    let mut table = shared(8)?;
    let mut k = 1usize;
    loop {
        if k + 2 > table.len() {
            if k + 2 > MAX_TERMS {
                return Err(Error::ResourceLimit { what: "Fourier terms", requested: k + 2, max: MAX_TERMS });
            }
            table = shared((2 * table.len()).max(k + 2).min(MAX_TERMS))?;
        }
        if ln_tail(&table, 3, k, ln_q) < target {
            return Ok((table, k));
        }
        k += 1;
    }
}

/// Evaluates the jet directly from the series. Requires Im(z) >= [`EVAL_FLOOR`].
pub fn eval_jet(z: &UHPoint, prec: u32) -> Result<Jet> {
    let y = z.im_f64();
    if y < EVAL_FLOOR {
        return Err(Error::PrecisionUnachievable { im: y, floor: EVAL_FLOOR });
    }
    let two_pi = 2.0 * std::f64::consts::PI;
    let ln_q = -two_pi * y;
    let (table, k) = choose_terms(ln_q, prec)?;
    let work = prec + EXTRA_BITS;
    let coeffs = table.floats(work);

    let tpi = two_pi_i(work);
    let arg = Complex::with_val(work, &tpi * z.as_complex());
    let q = arg.exp();

    let mut sums = [Complex::new(work), Complex::new(work), Complex::new(work), Complex::new(work)];
    let mut abs_sums = [zero_bound(), zero_bound(), zero_bound(), zero_bound(), zero_bound()];
    let mut qk = q.clone();
    for (i, a) in coeffs.iter().take(k).enumerate() {
        let n = (i + 1) as u32;
        if i > 0 {
            qk *= &q;
        }
        let mut t = Complex::with_val(work, &qk * a);
        let mut at = abs_up(&t);
        for o in 0..4 {
            sums[o] += &t;
            abs_sums[o] += &at;
            if o < 3 {
                t *= n;
                at *= n;
            }
        }
        at *= n;
        abs_sums[4] += &at;
    }
    let qinv = Complex::with_val(work, q.recip_ref());
    let abs_qinv = abs_up(&qinv);

    let mut val = [
        Complex::with_val(work, &qinv + &sums[0]) + 744u32,
        Complex::with_val(work, &sums[1] - &qinv) * &tpi,
        Complex::with_val(work, &sums[2] + &qinv) * Complex::with_val(work, &tpi * &tpi),
        Complex::with_val(work, &sums[3] - &qinv) * Complex::with_val(work, (&tpi).pow(3u32)),
    ];

    // Error: truncation tail, accumulated rounding over k terms, and the
    // relative error of q inherited by q^n as n times that error.
    let zabs = abs_up(z.as_complex()).to_f64();
    let dq = pow2(-(work as i64)) * (2.0 * two_pi * (1.0 + zabs) + 4.0);
    let round = pow2(-(work as i64)) * ((k + 16) as f64 * 4.0);
    let two_pi_b = Float::with_val(BOUND_PREC, &pi(BOUND_PREC) * 2u32);
    let mut err: [Float; 4] = std::array::from_fn(|_| zero_bound());
    for o in 0..4 {
        let tail = Float::with_val(BOUND_PREC, ln_tail(&table, o as u32, k, ln_q)).exp();
        let mass = Float::with_val(BOUND_PREC, &abs_sums[o] + &abs_qinv) + if o == 0 { 744u32 } else { 0 };
        let rounding = Float::with_val(BOUND_PREC, &mass * &round);
        let qerr = Float::with_val(BOUND_PREC, &abs_sums[o + 1] + &abs_qinv) * &dq;
        let scale = Float::with_val(BOUND_PREC, (&two_pi_b).pow(o as u32));
        err[o] = (tail + rounding + qerr) * scale * 1.25f64;
    }
    for (v, e) in val.iter_mut().zip(err.iter_mut()) {
        let rounded = Complex::with_val(prec, &*v);
        *e += abs_up(&rounded) * pow2(-(prec as i64) + 1);
        *v = rounded;
    }
    Ok(Jet { val, err })
}

/// j'''(z) from the differentiated series, with its error bound.
pub fn eval_jppp(z: &UHPoint, prec: u32) -> Result<(Complex, Float)> {
    let jet = eval_jet(z, prec)?;
    let [_, _, _, v] = jet.val;
    let [_, _, _, e] = jet.err;
    Ok((v, e))
}

/// F(z, j(z), j'(z), j''(z)) with a first-order error bound, from the series
/// directly (same floor as [`eval_jet`]).
pub fn eval_poly_in_j(f: &MultiPoly, z: &UHPoint, prec: u32) -> Result<(Complex, Float)> {
    if !f.uses_only(&Var::INPUT) {
        return Err(Error::InvalidArgument("polynomial must use only X, Y0, Y1, Y2".into()));
    }
    let jet = eval_jet(z, prec)?;
    Ok(eval_poly_with_jet(f, z.as_complex(), &jet))
}

/// F at (z, jet) with first-order propagation of the jet errors.
pub fn eval_poly_with_jet(f: &MultiPoly, z: &Complex, jet: &Jet) -> (Complex, Float) {
    let prec = jet.prec();
    let c = f.compile(prec);
    let partials: Vec<CompiledPoly> =
        [Var::Y0, Var::Y1, Var::Y2].iter().map(|v| f.derivative(*v).compile(prec)).collect();
    let args = jet.args(z);
    let (v, absum) = c.eval(&args);
    let mut err = absum * pow2(-(prec as i64) + 4) * (c.max_degree() + 2);
    for (i, p) in partials.iter().enumerate() {
        if p.is_zero() {
            continue;
        }
        let (d, _) = p.eval(&args);
        err += abs_up(&d) * &jet.err[i];
    }
    (v, err)
}
