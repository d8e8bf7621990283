use nalgebra::Complex as C64;
use rug::Complex;

use super::contour::{count_only, moments, Boundary, CountOptions, Winding};
use super::{Chart, Holomorphic, JetPoly, RegionSpec, Root};
use crate::error::{Error, Result};
use crate::numeric::{abs_up, complex, pow2, to_f64, UHPoint};
use crate::polyalg::MultiPoly;

const MAX_NEWTON: usize = 50;
const MAX_DEPTH: u32 = 9;

/// Roots of a monic polynomial with coefficients `a` (leading first omitted)
/// by Aberth iteration.
pub(super) fn aberth(coef: &[C64<f64>]) -> Vec<C64<f64>> {
    let n = coef.len();
    if n == 0 {
        return Vec::new();
    }
    let eval = |z: C64<f64>| {
        let mut p = C64::new(1.0, 0.0);
        let mut d = C64::new(0.0, 0.0);
        for c in coef {
            d = d * z + p;
            p = p * z + c;
        }
        (p, d)
    };
    let bound = 1.0 + coef.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut z: Vec<C64<f64>> =
        (0..n).map(|k| C64::from_polar(0.5 * bound, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64)).collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, d) = eval(z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / d;
            let s: C64<f64> = (0..n).filter(|&k| k != i).map(|k| (z[i] - z[k]).inv()).sum();
            let step = ratio / (C64::new(1.0, 0.0) - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / (1.0 + z[i].norm()));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Approximate zeros inside a traced contour from its power sums.
fn seeds(wn: &Winding, b: &Boundary) -> Vec<C64<f64>> {
    let n = wn.count as usize;
    let c = b.center();
    let s = b.scale();
    let p = moments(&wn.nodes, c, s, n);
    let mut e = vec![C64::new(1.0, 0.0)];
    for k in 1..=n {
        let mut acc = C64::new(0.0, 0.0);
        for i in 1..=k {
            let sign = if i % 2 == 1 { 1.0 } else { -1.0 };
            acc += e[k - i] * p[i] * sign;
        }
        e.push(acc / k as f64);
    }
    let coef: Vec<C64<f64>> = (1..=n).map(|k| if k % 2 == 1 { -e[k] } else { e[k] }).collect();
    aberth(&coef).into_iter().map(|u| c + u * s).collect()
}

pub(super) struct Polished {
    pub w: Complex,
    pub mult: u32,
}

/// Newton's method in the chart, switching to the multiplicity-corrected
/// step when convergence turns out to be linear.
pub(super) fn newton(f: &dyn Holomorphic, chart: &Chart, w0: C64<f64>, scale: f64, prec: u32) -> Result<Polished> {
    let mut w = complex(prec, w0.re, w0.im);
    let start = w.clone();
    let mut mult = 1u32;
    let mut steps: Vec<f64> = Vec::new();
    let mut switches = 0;
    for it in 0..MAX_NEWTON {
        let s = chart.eval(f, &w, prec)?;
        if s.value.is_zero() {
            return Ok(Polished { w, mult });
        }
        if s.deriv.is_zero() {
            return Err(Error::DerivativeDegenerate);
        }
        let mut step = Complex::with_val(prec, &s.value / &s.deriv) * mult;
        let mut len = abs_up(&step).to_f64();
        if len > scale / 2.0 {
            step *= scale / 2.0 / len;
            len = scale / 2.0;
        }
        w -= &step;
        if !(len.is_finite()) || abs_up(&Complex::with_val(prec, &w - &start)).to_f64() > 4.0 * scale || *w.imag() <= 0
        {
            return Err(Error::NewtonDiverged { steps: it + 1 });
        }
        let tol = scale.max(1.0) * pow2(-(prec as i64) / mult as i64 + 6).to_f64();
        if len <= tol {
            return Ok(Polished { w, mult });
        }
        steps.push(len);
        let k = steps.len();
        if mult > 1 && k >= 3 && steps[k - 1] > 0.5 * steps[k - 2] {
            mult = 1;
            steps.clear();
        } else if mult == 1 && k >= 5 && switches < 3 {
            let r: Vec<f64> = (k - 3..k).map(|i| steps[i] / steps[i - 1]).collect();
            let avg = r.iter().sum::<f64>() / 3.0;
            if r.iter().all(|x| (x - avg).abs() < 0.05) && avg > 0.3 && avg < 0.95 {
                mult = (1.0 / (1.0 - avg)).round().max(2.0) as u32;
                switches += 1;
                steps.clear();
            }
        }
        let k = steps.len();
        if k >= 4 && len > steps[k - 2] && len < scale.max(1.0) * pow2(-(prec as i64) / (4 * mult as i64)).to_f64() {
            return Ok(Polished { w, mult });
        }
    }
    Err(Error::NewtonDiverged { steps: MAX_NEWTON })
}

/// Certifies a polished zero by counting on a small disc around it.
fn certify(f: &dyn Holomorphic, chart: &Chart, p: &Polished, scale: f64, prec: u32) -> Result<(Root, Complex)> {
    let (wr, wi) = to_f64(&p.w);
    let mut r = scale.max(1e-300) * pow2(-(prec as i64) / (4 * p.mult as i64)).to_f64();
    r = r.min(wi / 4.0);
    for _ in 0..8 {
        let center = UHPoint::from_complex(p.w.clone())?;
        let disc = RegionSpec::shifted(RegionSpec::disc(center, r), chart.m, chart.gamma);
        match count_only(f, &disc, prec) {
            Ok(wn) if wn.count >= 1 && wn.count <= p.mult as i64 => {
                let s = chart.eval(f, &p.w, prec)?;
                let z = chart.to_z(&p.w);
                let jac = abs_up(&chart.dz_dw(&p.w)).to_f64();
                return Ok((
                    Root {
                        z: UHPoint::from_complex(z)?,
                        error_radius: r * jac,
                        residual: abs_up(&s.value).to_f64(),
                        multiplicity: wn.count as u32,
                    },
                    p.w.clone(),
                ));
            }
            _ => r *= 4.0,
        }
        if r > wi / 2.0 {
            break;
        }
    }
    Err(Error::Inconclusive(format!("could not certify zero near w = {wr} + {wi}i")))
}

fn polish_in(
    f: &dyn Holomorphic,
    chart: &Chart,
    b: &Boundary,
    wn: &Winding,
    prec: u32,
) -> Result<Vec<(Root, C64<f64>)>> {
    let scale = b.scale();
    let mut found: Vec<(Root, C64<f64>)> = Vec::new();
    for s in seeds(wn, b) {
        let Ok(p) = newton(f, chart, s, scale, prec) else { continue };
        let (wr, wi) = to_f64(&p.w);
        let w = C64::new(wr, wi);
        if !b.contains(w) {
            continue;
        }
        if found.iter().any(|(_, v)| (v - w).norm() < 1e-9 * scale.max(1e-300)) {
            continue;
        }
        if let Ok((root, _)) = certify(f, chart, &p, scale, prec) {
            found.push((root, w));
        }
    }
    Ok(found)
}

fn total(found: &[(Root, C64<f64>)]) -> i64 {
    found.iter().map(|(r, _)| r.multiplicity as i64).sum()
}

/// Bisects the bounding box of the base region until each piece yields to
/// moments plus Newton.
fn subdivide(
    f: &dyn Holomorphic,
    chart: &Chart,
    outer: &Boundary,
    rect: [f64; 4],
    depth: u32,
    prec: u32,
    out: &mut Vec<(Root, C64<f64>)>,
) -> Result<()> {
    let [x0, x1, y0, y1] = rect;
    let reg = RegionSpec::shifted(RegionSpec::Rectangle { x0, x1, y0, y1 }, chart.m, chart.gamma);
    let Ok(wn) = count_only(f, &reg, prec) else {
        return Ok(());
    };
    if wn.count <= 0 {
        return Ok(());
    }
    let (traced, _) = wn.region.flatten();
    let b = Boundary::of(&traced);
    let mut local = polish_in(f, chart, &b, &wn, prec)?;
    if total(&local) == wn.count || depth >= MAX_DEPTH {
        local.retain(|(_, w)| outer.contains(*w) && !out.iter().any(|(_, v)| (v - w).norm() < 1e-9));
        out.extend(local);
        return Ok(());
    }
    let (xm, ym) = ((x0 + x1) / 2.0 + (x1 - x0) * 0.0137, (y0 + y1) / 2.0 - (y1 - y0) * 0.0091);
    for q in [[x0, xm, y0, ym], [xm, x1, y0, ym], [x0, xm, ym, y1], [xm, x1, ym, y1]] {
        subdivide(f, chart, outer, q, depth + 1, prec, out)?;
    }
    Ok(())
}

/// All zeros inside the traced region of `wn`, each certified by a winding
/// count on a small disc.
pub(super) fn locate_all(f: &dyn Holomorphic, wn: &Winding, _opts: &CountOptions) -> Result<Vec<Root>> {
    let (base, chart) = wn.region.flatten();
    let b = Boundary::of(&base);
    let prec = wn.precision_used;
    let mut found = polish_in(f, &chart, &b, wn, prec)?;
    if total(&found) != wn.count {
        let rect = match b {
            Boundary::Disc { c, r } => [c.re - r, c.re + r, (c.im - r).max(c.im * 1e-3), c.im + r],
            Boundary::Rect { x0, x1, y0, y1 } => [x0, x1, y0, y1],
        };
        let mut more = Vec::new();
        subdivide(f, &chart, &b, rect, 0, prec, &mut more)?;
        if total(&more) > total(&found) {
            found = more;
        }
    }
    let mut roots: Vec<Root> = found.into_iter().map(|(r, _)| r).collect();
    roots.sort_by(|a, b| (a.z.im_f64(), a.z.re_f64()).partial_cmp(&(b.z.im_f64(), b.z.re_f64())).unwrap());
    Ok(roots)
}

/// Newton refinement of a zero of F near z0, certified by a winding count on
/// a small disc around the result.
pub fn refine_root(f: &MultiPoly, z0: &UHPoint, prec: u32) -> Result<Root> {
    let jp = JetPoly::new(f)?;
    refine_root_in(&jp, &Chart::IDENTITY, z0, prec)
}

pub fn refine_root_in(f: &dyn Holomorphic, chart: &Chart, w0: &UHPoint, prec: u32) -> Result<Root> {
    let scale = (w0.im_f64() / 4.0).min(0.1);
    let p = newton(f, chart, C64::new(w0.re_f64(), w0.im_f64()), scale, prec)?;
    Ok(certify(f, chart, &p, scale, prec)?.0)
}
