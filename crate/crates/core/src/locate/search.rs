use std::collections::BTreeMap;
use std::f64::consts::PI;

use nalgebra::Complex as C64;
use rug::Complex;

use super::contour::{count_only, count_zeros};
use super::roots::{aberth, newton};
use super::{Chart, GrowthParams, Holomorphic, JetPoly, Quotient, RegionSpec, Sample, ZeroCertificate};
use crate::error::{Error, Result};
use crate::growth::ratio_order_in_domain;
use crate::moebius::{cusp_sequence, reduce, CuspTarget, Moebius};
use crate::numeric::{abs_up, complex, to_f64, UHPoint};
use crate::orders::measure_order;
use crate::par::{self, Exec};
use crate::polyalg::{CoefScalar, MultiPoly, Var};

#[derive(Clone, Debug)]
pub struct SearchOptions {
    pub prec: u32,
    pub exec: Exec,
    pub initial_radius: f64,
    pub max_halvings: u32,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { prec: 128, exec: Exec::auto(), initial_radius: 0.1, max_halvings: 10 }
    }
}

fn x_coefficients(f: &MultiPoly) -> Result<(u32, BTreeMap<u32, MultiPoly>)> {
    if !f.uses_only(&Var::INPUT) {
        return Err(Error::InvalidArgument("polynomial must use only X, Y0, Y1, Y2".into()));
    }
    let coeffs = f.coeffs_in(Var::X);
    let n = coeffs.keys().next_back().copied().ok_or_else(|| Error::Precondition("zero polynomial".into()))?;
    Ok((n, coeffs))
}

/// A point of the standard fundamental domain with j(z) = u.
pub fn invert_j(u: &Complex, prec: u32) -> Result<UHPoint> {
    let jf = JetPoly::new(&MultiPoly::var(Var::Y0))?;
    let target = u.clone();
    let g = |z: &Complex, p: u32| -> Result<Sample> {
        let mut s = jf.eval(z, p)?;
        s.value -= &target;
        Ok(s)
    };
    let (ur, ui) = to_f64(u);
    let uc = C64::new(ur, ui);
    let seed = if uc.norm() > 1e5 {
        let w = (C64::new(1.0, 0.0) / (uc - 744.0)).ln() / C64::new(0.0, 2.0 * PI);
        C64::new(w.re - (w.re + 0.5).floor(), w.im)
    } else {
        let mut best = (f64::INFINITY, C64::new(0.0, 1.0));
        for ix in 0..=20 {
            for iy in 0..=33 {
                let w = C64::new(-0.5 + 0.05 * ix as f64, 0.85 + 0.05 * iy as f64);
                if w.norm() < 0.999 {
                    continue;
                }
                let s = jf.eval(&complex(64, w.re, w.im), 64)?;
                let (a, b) = to_f64(&s.value);
                let d = (C64::new(a, b) - uc).norm();
                if d < best.0 {
                    best = (d, w);
                }
            }
        }
        best.1
    };
    let p = newton(&g, &Chart::IDENTITY, seed, 0.5, prec)?;
    Ok(reduce(&UHPoint::from_complex(p.w)?)?.zred)
}

/// Roots of a polynomial in the single variable `v`, with multiplicities.
pub fn polynomial_roots(p: &MultiPoly, v: Var, prec: u32) -> Result<Vec<(Complex, u32)>> {
    if !p.uses_only(&[v]) {
        return Err(Error::InvalidArgument(format!("polynomial is not univariate in {}", v.name())));
    }
    let coeffs: BTreeMap<u32, Complex> = p
        .coeffs_in(v)
        .into_iter()
        .map(|(k, c)| (k, c.constant_value().expect("univariate").to_complex(prec)))
        .collect();
    let n = coeffs.keys().next_back().copied().unwrap_or(0) as usize;
    if n == 0 {
        return Ok(Vec::new());
    }
    let all: Vec<Complex> =
        (0..=n as u32).map(|k| coeffs.get(&k).cloned().unwrap_or_else(|| Complex::new(prec))).collect();
    let lead = all[n].clone();
    let monic: Vec<C64<f64>> = (0..n)
        .rev()
        .map(|k| {
            let (a, b) = to_f64(&Complex::with_val(prec, &all[k] / &lead));
            C64::new(a, b)
        })
        .collect();
    let approx = aberth(&monic);
    let horner = |coef: &[Complex], x: &Complex| -> (Complex, Complex) {
        let mut v = Complex::new(prec);
        let mut d = Complex::new(prec);
        for c in coef.iter().rev() {
            d = Complex::with_val(prec, &d * x) + &v;
            v = Complex::with_val(prec, &v * x) + c;
        }
        (v, d)
    };
    let scale = 1.0 + monic.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut clusters: Vec<(C64<f64>, u32)> = Vec::new();
    for r in approx {
        match clusters.iter_mut().find(|(c, _)| (c - r).norm() < 1e-5 * scale) {
            Some(c) => c.1 += 1,
            None => clusters.push((r, 1)),
        }
    }
    let mut out = Vec::new();
    for (r, k) in clusters {
        // The (k-1)-th derivative has a simple root at a k-fold root.
        let mut d: Vec<Complex> = all.clone();
        for _ in 1..k {
            d = (1..d.len()).map(|i| Complex::with_val(prec, &d[i] * i as u32)).collect();
        }
        let mut x = complex(prec, r.re, r.im);
        for _ in 0..100 {
            let (val, der) = horner(&d, &x);
            if der.is_zero() {
                break;
            }
            let step = Complex::with_val(prec, &val / &der);
            x -= &step;
            if abs_up(&step) <= abs_up(&x) * crate::numeric::pow2(-(prec as i64) + 8) {
                break;
            }
        }
        out.push((x, k));
    }
    Ok(out)
}

/// How pole_shift_search isolates a pole of the coefficient ratios.
#[derive(Clone, Debug, serde::Serialize)]
pub struct PoleShiftPlan {
    pub z0: UHPoint,
    pub radius: f64,
    /// Largest pole order of p_k / p_n at z0.
    pub ell: i64,
    /// The coefficient index attaining it; F / p_pivot is counted.
    pub pivot: u32,
    /// Measured order of each nonzero coefficient p_k at z0.
    pub orders: Vec<(u32, i64)>,
}

pub fn pole_shift_plan(f: &MultiPoly, z0: &UHPoint, opts: &SearchOptions) -> Result<PoleShiftPlan> {
    let (n, coeffs) = x_coefficients(f)?;
    if n == 0 {
        return Err(Error::Precondition("F has no X-dependence, so no coefficient ratio exists".into()));
    }
    let mut orders = Vec::new();
    for (&k, p) in &coeffs {
        let r = (0.01f64).min(z0.im_f64() / 4.0);
        orders.push((k, measure_order(p, z0, r, opts.prec)?));
    }
    let on = orders.iter().find(|(k, _)| *k == n).map(|(_, o)| *o).expect("leading coefficient");
    let (pivot, omin) = orders.iter().copied().min_by_key(|&(k, o)| (o, std::cmp::Reverse(k))).expect("nonempty");
    let ell = on - omin;
    if ell <= 0 {
        return Err(Error::Precondition(format!("no coefficient ratio p_k/p_{n} has a pole at the given point")));
    }
    let mut radius = opts.initial_radius.min(z0.im_f64() / 2.0);
    let mut conflict = String::new();
    for _ in 0..=opts.max_halvings {
        let disc = RegionSpec::disc(z0.clone(), radius);
        let mut clean = true;
        for (k, o) in &orders {
            match count_only(&JetPoly::new(&coeffs[k])?, &disc, opts.prec) {
                Ok(w) if w.count == *o => {}
                Ok(w) => {
                    clean = false;
                    conflict = format!(
                        "p_{k} has {} zeros in the disc of radius {radius} but order {o} at its center",
                        w.count
                    );
                }
                Err(e) => {
                    clean = false;
                    conflict = e.to_string();
                }
            }
            if !clean {
                break;
            }
        }
        if clean {
            return Ok(PoleShiftPlan { z0: z0.clone(), radius, ell, pivot, orders });
        }
        radius /= 2.0;
    }
    Err(Error::DiscSelection(conflict))
}

/// Counts zeros of F near the shifted pole z0 + m for each m.
pub fn pole_shift_search(f: &MultiPoly, z0: &UHPoint, ms: &[i64]) -> Result<Vec<ZeroCertificate>> {
    pole_shift_search_with(f, z0, ms, &SearchOptions::default()).map(|(_, c)| c)
}

pub fn pole_shift_search_with(
    f: &MultiPoly,
    z0: &UHPoint,
    ms: &[i64],
    opts: &SearchOptions,
) -> Result<(PoleShiftPlan, Vec<ZeroCertificate>)> {
    let plan = pole_shift_plan(f, z0, opts)?;
    let num = JetPoly::new(f)?;
    let den = JetPoly::new(&f.coeff_of(Var::X, plan.pivot))?;
    let q = Quotient { num: &num, den: &den };
    let certs = par::map(opts.exec, ms, |&m| {
        let region = RegionSpec::shifted(RegionSpec::disc(z0.clone(), plan.radius), m, Moebius::IDENTITY);
        count_zeros(&q, &region, opts.prec).map(|mut c| {
            c.expected = Some(plan.ell);
            c
        })
    });
    Ok((plan, certs.into_iter().collect::<Result<Vec<_>>>()?))
}

/// The minimal exponential order e < 0 of p_k/p_n in the domain of gamma,
/// over k < n.
pub fn growth_exponent(f: &MultiPoly, gamma: &Moebius) -> Result<i64> {
    let (n, coeffs) = x_coefficients(f)?;
    let pn = &coeffs[&n];
    let mut best: Option<i64> = None;
    for (k, p) in &coeffs {
        if *k == n {
            continue;
        }
        let o = ratio_order_in_domain(p, pn, gamma)?;
        best = Some(best.map_or(o.e, |b| b.min(o.e)));
    }
    match best {
        Some(e) if e < 0 => Ok(e),
        _ => Err(Error::Precondition("no coefficient ratio has exponential growth in this domain".into())),
    }
}

const GROWTH_X0: f64 = 0.137;
const MAX_M_EXP: u32 = 6;

/// Counts zeros of F in m + gamma^(-1) Xi_m, where the coefficient ratios grow.
pub fn cusp_growth_search(f: &MultiPoly, gamma: &Moebius, ms: &[i64]) -> Result<Vec<ZeroCertificate>> {
    cusp_growth_search_with(f, gamma, ms, &SearchOptions::default())
}

pub fn cusp_growth_search_with(
    f: &MultiPoly,
    gamma: &Moebius,
    ms: &[i64],
    opts: &SearchOptions,
) -> Result<Vec<ZeroCertificate>> {
    let e = growth_exponent(f, gamma)?;
    let e0 = 1.0 / (4.0 * PI * e.unsigned_abs() as f64);
    let delta = gamma.inverse();
    let fp = JetPoly::new(f)?;
    let certs = par::map(opts.exec, ms, |&m| -> Result<ZeroCertificate> {
        let mf = (m.unsigned_abs() as f64).max(1.0);
        let mut last = None;
        for m_exp in 2..=MAX_M_EXP {
            let (y0, y1) = (e0 * mf.ln(), mf.powf(1.0 / m_exp as f64));
            if y0 <= 0.0 || y0 >= y1 {
                break;
            }
            let rect = RegionSpec::Rectangle { x0: GROWTH_X0, x1: GROWTH_X0 + 1.0, y0, y1 };
            let region = RegionSpec::shifted(rect, m, delta);
            let mut c = count_zeros(&fp, &region, opts.prec)?;
            c.expected = Some(-e);
            c.growth = Some(GrowthParams { x0: GROWTH_X0, e0, m_exp });
            let ok = c.count == -e;
            last = Some(c);
            if ok {
                break;
            }
        }
        last.ok_or_else(|| Error::RegionDegenerate(format!("E0 log m >= m^(1/M) at m = {m}")))
    });
    certs.into_iter().collect()
}

/// Searches the discs gamma_k B around gamma_k rho along a sequence
/// gamma_k z -> u and returns the first certified zero.
pub fn rouche_existence(f: &MultiPoly, u: &CuspTarget, ks: &[i64]) -> Result<ZeroCertificate> {
    rouche_existence_with(f, u, ks, &SearchOptions::default())
}

pub fn rouche_existence_with(
    f: &MultiPoly,
    u: &CuspTarget,
    ks: &[i64],
    opts: &SearchOptions,
) -> Result<ZeroCertificate> {
    x_coefficients(f)?;
    if f.uses_only(&[Var::X]) {
        return Err(Error::Precondition("F lies in C[X]".into()));
    }
    if !f.depends_on(Var::Y1) && !f.depends_on(Var::Y2) {
        return delegated_search(f, opts);
    }
    let pure_x = f.substitute(&|v| matches!(v, Var::Y0 | Var::Y1 | Var::Y2).then(MultiPoly::zero));
    let g = f - &pure_x;
    let t = MultiPoly::var(Var::T);
    let gt = g.substitute(&|v| match v {
        Var::Y1 => Some(&t.pow(2) * &MultiPoly::var(Var::Y1)),
        Var::Y2 => Some(&t.pow(4) * &MultiPoly::var(Var::Y2)),
        _ => None,
    });
    let h = gt.coeff_of(Var::T, gt.degree_in(Var::T));
    let uval = CoefScalar::from_rational(rug::Rational::from((u.numer(), u.denom())));
    let hu = h.eval_var(Var::X, &uval);
    if hu.is_zero() {
        return Err(Error::Precondition("H(u, Y) vanishes identically at this cusp".into()));
    }
    let rho = UHPoint::rho(opts.prec);
    let mut radius = opts.initial_radius;
    let hf = JetPoly::new(&hu)?;
    let mut sized = false;
    for _ in 0..=opts.max_halvings {
        if hu.constant_value().is_some_and(|c| !c.is_zero())
            || count_only(&hf, &RegionSpec::disc(rho.clone(), radius), opts.prec).is_ok()
        {
            sized = true;
            break;
        }
        radius /= 2.0;
    }
    if !sized {
        return Err(Error::DiscSelection("H(u, jet) vanishes on every trial circle around rho".into()));
    }
    let fp = JetPoly::new(f)?;
    for &k in ks {
        let g = cusp_sequence(u, k)?;
        let region = RegionSpec::shifted(RegionSpec::disc(rho.clone(), radius), 0, g);
        match count_zeros(&fp, &region, opts.prec) {
            Ok(c) if c.count >= 1 => return Ok(c),
            Ok(_) | Err(Error::BoundaryZero(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::BudgetExhausted(format!("no certified zero for k in the given range ({} values)", ks.len())))
}

/// F in C[X, Y0]: invert j at roots of F when X is absent, otherwise shift
/// towards a pole of the coefficient ratios or grow towards the cusp.
fn delegated_search(f: &MultiPoly, opts: &SearchOptions) -> Result<ZeroCertificate> {
    let fp = JetPoly::new(f)?;
    let (n, coeffs) = x_coefficients(f)?;
    if n == 0 {
        for (u, _) in polynomial_roots(f, Var::Y0, opts.prec)? {
            let z = invert_j(&u, opts.prec)?;
            let r = (z.im_f64() / 4.0).min(0.05);
            let c = count_zeros(&fp, &RegionSpec::disc(z, r), opts.prec)?;
            if c.count >= 1 {
                return Ok(c);
            }
        }
        return Err(Error::Inconclusive("no root of F(j) could be inverted".into()));
    }
    for (u, _) in polynomial_roots(&coeffs[&n], Var::Y0, opts.prec)? {
        let Ok(z0) = invert_j(&u, opts.prec) else { continue };
        if let Ok((_, certs)) = pole_shift_search_with(f, &z0, &[5, 8, 12, 20], opts) {
            if let Some(c) = certs.into_iter().find(|c| c.count >= 1) {
                return Ok(c);
            }
        }
    }
    let certs = cusp_growth_search_with(f, &Moebius::IDENTITY, &[1_000_000], opts)?;
    certs.into_iter().find(|c| c.count >= 1).ok_or_else(|| Error::Inconclusive("delegated search found no zero".into()))
}
