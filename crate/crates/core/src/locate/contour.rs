use std::f64::consts::PI;

use nalgebra::Complex as C64;
use rug::{Complex, Float};

use super::{roots, Chart, Holomorphic, RegionSpec, Sample, ZeroCertificate};
use crate::error::{Error, Result};
use crate::numeric::{abs_up, complex, to_f64};

#[derive(Clone, Debug)]
pub struct CountOptions {
    /// Largest accepted change of arg G between samples.
    pub max_arg_step: f64,
    /// Largest accepted change of ln |G| between samples.
    pub max_log_step: f64,
    /// Boundary perturbations tried when a zero sits on the contour.
    pub perturbations: u32,
    /// Precision doublings after the perturbations fail.
    pub escalations: u32,
    pub refine: bool,
}

impl Default for CountOptions {
    fn default() -> Self {
        CountOptions { max_arg_step: PI / 4.0, max_log_step: 1.0, perturbations: 3, escalations: 4, refine: true }
    }
}

#[derive(Clone, Debug)]
pub struct Winding {
    pub count: i64,
    pub residual: f64,
    pub precision_used: u32,
    /// The region actually traced, after any perturbation.
    pub region: RegionSpec,
    pub(super) nodes: Vec<Node>,
}

#[derive(Clone, Debug)]
pub(super) struct Node {
    pub w: C64<f64>,
    /// Exact increment of log G from the previous node.
    pub dlog: C64<f64>,
}

#[derive(Clone, Copy, Debug)]
pub(super) enum Boundary {
    Disc { c: C64<f64>, r: f64 },
    Rect { x0: f64, x1: f64, y0: f64, y1: f64 },
}

impl Boundary {
    pub fn of(region: &RegionSpec) -> Boundary {
        match region {
            RegionSpec::Disc { center, radius } => {
                Boundary::Disc { c: C64::new(center.re_f64(), center.im_f64()), r: *radius }
            }
            RegionSpec::Rectangle { x0, x1, y0, y1 } => Boundary::Rect { x0: *x0, x1: *x1, y0: *y0, y1: *y1 },
            RegionSpec::Shifted { .. } => unreachable!("flattened before tracing"),
        }
    }

    pub fn center(&self) -> C64<f64> {
        match *self {
            Boundary::Disc { c, .. } => c,
            Boundary::Rect { x0, x1, y0, y1 } => C64::new((x0 + x1) / 2.0, (y0 + y1) / 2.0),
        }
    }

    pub fn scale(&self) -> f64 {
        match *self {
            Boundary::Disc { r, .. } => r,
            Boundary::Rect { x0, x1, y0, y1 } => (x1 - x0).max(y1 - y0) / 2.0,
        }
    }

    pub fn contains(&self, w: C64<f64>) -> bool {
        match *self {
            Boundary::Disc { c, r } => (w - c).norm() < r,
            Boundary::Rect { x0, x1, y0, y1 } => w.re > x0 && w.re < x1 && w.im > y0 && w.im < y1,
        }
    }

    /// Counterclockwise parametrization over t in [0, 1]: (w, dw/dt).
    fn point(&self, t: f64) -> (C64<f64>, C64<f64>) {
        match *self {
            Boundary::Disc { c, r } => {
                let e = C64::from_polar(1.0, 2.0 * PI * t);
                (c + e * r, e * C64::new(0.0, 2.0 * PI * r))
            }
            Boundary::Rect { x0, x1, y0, y1 } => {
                let (wx, wy) = (x1 - x0, y1 - y0);
                let per = 2.0 * (wx + wy);
                let s = t * per;
                if s < wx {
                    (C64::new(x0 + s, y0), C64::new(per, 0.0))
                } else if s < wx + wy {
                    (C64::new(x1, y0 + (s - wx)), C64::new(0.0, per))
                } else if s < 2.0 * wx + wy {
                    (C64::new(x1 - (s - wx - wy), y1), C64::new(-per, 0.0))
                } else {
                    (C64::new(x0, y1 - (s - 2.0 * wx - wy)), C64::new(0.0, -per))
                }
            }
        }
    }
}

/// Perturbation number k of a region, moving the boundary by well under 1/100
/// of its size.
fn perturbed(region: &RegionSpec, k: u32) -> RegionSpec {
    if k == 0 {
        return region.clone();
    }
    let f = 0.0023 * k as f64 * if k % 2 == 0 { -1.0 } else { 1.0 };
    match region {
        RegionSpec::Disc { center, radius } => RegionSpec::Disc { center: center.clone(), radius: radius * (1.0 + f) },
        RegionSpec::Rectangle { x0, x1, y0, y1 } => {
            let (dx, dy) = ((x1 - x0) * f, (y1 - y0) * f);
            RegionSpec::Rectangle { x0: x0 - dx, x1: x1 + dx, y0: y0 - dy, y1: y1 + dy }
        }
        RegionSpec::Shifted { base, m, gamma } => {
            RegionSpec::Shifted { base: Box::new(perturbed(base, k)), m: *m, gamma: *gamma }
        }
    }
}

struct Point {
    t: f64,
    w: C64<f64>,
    g: Complex,
    /// d log G / dt.
    lt: C64<f64>,
}

fn sample(f: &dyn Holomorphic, chart: &Chart, b: &Boundary, t: f64, prec: u32) -> Result<Point> {
    let (w, dw) = b.point(t);
    let wc = complex(prec, w.re, w.im);
    let Sample { value, deriv, err } = chart.eval(f, &wc, prec)?;
    let a = abs_up(&value);
    if a <= Float::with_val(64, &err * 4u32) || a.is_zero() {
        return Err(Error::BoundaryZero(format!("|G| not separated from 0 at w = {} + {}i", w.re, w.im)));
    }
    let (lr, li) = to_f64(&Complex::with_val(prec, &deriv / &value));
    Ok(Point { t, w, g: value, lt: C64::new(lr, li) * dw })
}

fn trace(f: &dyn Holomorphic, chart: &Chart, b: &Boundary, prec: u32, opts: &CountOptions) -> Result<Vec<Node>> {
    let start = sample(f, chart, b, 0.0, prec)?;
    let mut nodes = vec![Node { w: start.w, dlog: C64::new(0.0, 0.0) }];
    let mut cur = Point { t: 0.0, w: start.w, g: start.g.clone(), lt: start.lt };
    let mut h: f64 = 1.0 / 64.0;
    while cur.t < 1.0 {
        h = h.min(1.0 - cur.t);
        let t1 = if 1.0 - (cur.t + h) < 1e-14 { 1.0 } else { cur.t + h };
        let next = if t1 == 1.0 {
            Point { t: 1.0, w: start.w, g: start.g.clone(), lt: start.lt }
        } else {
            sample(f, chart, b, t1, prec)?
        };
        let ratio = Complex::with_val(prec, &next.g / &cur.g);
        let darg = Float::with_val(53, ratio.arg_ref()).to_f64();
        let dln = Float::with_val(53, ratio.abs_ref()).ln().to_f64();
        let predicted = (cur.lt + next.lt) * ((t1 - cur.t) / 2.0);
        let mismatch = (predicted - C64::new(dln, darg)).norm();
        if darg.abs() > opts.max_arg_step || dln.abs() > opts.max_log_step || mismatch > 0.25 {
            h /= 2.0;
            if h < 1e-13 {
                return Err(Error::BoundaryZero(format!("step collapse near w = {} + {}i", cur.w.re, cur.w.im)));
            }
            continue;
        }
        nodes.push(Node { w: next.w, dlog: C64::new(dln, darg) });
        if darg.abs() < opts.max_arg_step / 4.0 && dln.abs() < opts.max_log_step / 4.0 && mismatch < 0.02 {
            h = (h * 2.0).min(1.0 / 16.0);
        }
        cur = next;
    }
    Ok(nodes)
}

/// Winding number of G(w) = F(m + gamma w) around the base region boundary,
/// perturbing the boundary and then raising precision when a zero lies on it.
pub fn winding_number(f: &dyn Holomorphic, region: &RegionSpec, prec: u32) -> Result<Winding> {
    winding_with(f, region, prec, &CountOptions::default())
}

fn winding_with(f: &dyn Holomorphic, region: &RegionSpec, prec: u32, opts: &CountOptions) -> Result<Winding> {
    region.validate()?;
    let mut p = prec;
    let mut last = None;
    for _ in 0..=opts.escalations {
        for k in 0..=opts.perturbations {
            let reg = perturbed(region, k);
            let (base, chart) = reg.flatten();
            let b = Boundary::of(&base);
            match trace(f, &chart, &b, p, opts) {
                Ok(nodes) => {
                    let total: f64 = nodes.iter().map(|n| n.dlog.im).sum::<f64>() / (2.0 * PI);
                    let count = total.round() as i64;
                    return Ok(Winding {
                        count,
                        residual: (total - count as f64).abs(),
                        precision_used: p,
                        region: reg,
                        nodes,
                    });
                }
                Err(e @ Error::BoundaryZero(_)) => last = Some(e),
                Err(e) => return Err(e),
            }
        }
        p *= 2;
    }
    Err(last.unwrap_or_else(|| Error::Internal("winding loop".into())))
}

/// Counts zeros of F in a region by the argument principle and, when asked,
/// refines each one.
pub fn count_zeros(f: &dyn Holomorphic, region: &RegionSpec, prec: u32) -> Result<ZeroCertificate> {
    count_zeros_with(f, region, prec, &CountOptions::default())
}

pub fn count_zeros_with(
    f: &dyn Holomorphic,
    region: &RegionSpec,
    prec: u32,
    opts: &CountOptions,
) -> Result<ZeroCertificate> {
    let wn = winding_with(f, region, prec, opts)?;
    let roots = if opts.refine && wn.count > 0 { roots::locate_all(f, &wn, opts)? } else { Vec::new() };
    Ok(ZeroCertificate {
        region: wn.region.clone(),
        count: wn.count,
        winding_residual: wn.residual,
        roots,
        precision_used: wn.precision_used,
        expected: None,
        growth: None,
    })
}

pub(super) fn count_only(f: &dyn Holomorphic, region: &RegionSpec, prec: u32) -> Result<Winding> {
    winding_with(f, region, prec, &CountOptions { refine: false, ..CountOptions::default() })
}

/// Power sums sum (r_i - c)^p / s^p for p = 0..=n from the traced increments.
pub(super) fn moments(nodes: &[Node], c: C64<f64>, s: f64, n: usize) -> Vec<C64<f64>> {
    let mut out = vec![C64::new(0.0, 0.0); n + 1];
    for pair in nodes.windows(2) {
        let u0 = (pair[0].w - c) / s;
        let u1 = (pair[1].w - c) / s;
        let (mut a, mut b) = (C64::new(1.0, 0.0), C64::new(1.0, 0.0));
        for m in out.iter_mut() {
            *m += (a + b) * 0.5 * pair[1].dlog;
            a *= u0;
            b *= u1;
        }
    }
    let k = C64::new(0.0, 2.0 * PI);
    out.iter().map(|m| m / k).collect()
}
