//! Zero counting by the argument principle, root refinement, and the region
//! searches near interior poles, near cusps and along cusp sequences.

mod contour;
mod roots;
mod search;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use rug::{Complex, Float};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::moebius::{jet_anywhere, Moebius};
use crate::numeric::{abs_up, pow2, UHPoint};
use crate::polyalg::{CompiledPoly, MultiPoly, Var};

pub use contour::{count_zeros, count_zeros_with, winding_number, CountOptions, Winding};
pub use roots::{refine_root, refine_root_in};
pub use search::{
    cusp_growth_search, cusp_growth_search_with, growth_exponent, invert_j, pole_shift_plan, pole_shift_search,
    pole_shift_search_with, polynomial_roots, rouche_existence, rouche_existence_with, PoleShiftPlan, SearchOptions,
};

/// Value, derivative and an absolute error bound on the value.
#[derive(Clone, Debug)]
pub struct Sample {
    pub value: Complex,
    pub deriv: Complex,
    pub err: Float,
}

/// A function holomorphic where it is evaluated.
pub trait Holomorphic: Sync {
    fn eval(&self, z: &Complex, prec: u32) -> Result<Sample>;
}

impl<F> Holomorphic for F
where
    F: Fn(&Complex, u32) -> Result<Sample> + Sync,
{
    fn eval(&self, z: &Complex, prec: u32) -> Result<Sample> {
        self(z, prec)
    }
}

struct Compiled {
    f: CompiledPoly,
    partials: [CompiledPoly; 4],
}

/// z -> F(z, j(z), j'(z), j''(z)) for F in X, Y0, Y1, Y2, evaluated anywhere
/// in the upper half-plane through reduction.
pub struct JetPoly {
    poly: MultiPoly,
    partials: [MultiPoly; 4],
    cache: Mutex<HashMap<u32, Arc<Compiled>>>,
}

impl std::fmt::Debug for JetPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "JetPoly({})", self.poly)
    }
}

impl JetPoly {
    pub fn new(poly: &MultiPoly) -> Result<Self> {
        if !poly.uses_only(&Var::INPUT) {
            return Err(Error::InvalidArgument("polynomial must use only X, Y0, Y1, Y2".into()));
        }
        let partials = Var::INPUT.map(|v| poly.derivative(v));
        Ok(JetPoly { poly: poly.clone(), partials, cache: Mutex::new(HashMap::new()) })
    }

    pub fn poly(&self) -> &MultiPoly {
        &self.poly
    }

    fn compiled(&self, prec: u32) -> Arc<Compiled> {
        let mut c = self.cache.lock().expect("compile cache poisoned");
        c.entry(prec)
            .or_insert_with(|| {
                Arc::new(Compiled {
                    f: self.poly.compile(prec),
                    partials: std::array::from_fn(|i| self.partials[i].compile(prec)),
                })
            })
            .clone()
    }

    pub fn at(&self, z: &UHPoint, prec: u32) -> Result<Sample> {
        self.eval(z.as_complex(), prec)
    }
}

impl Holomorphic for JetPoly {
    fn eval(&self, z: &Complex, prec: u32) -> Result<Sample> {
        let zp = UHPoint::from_complex(Complex::with_val(prec, z))?;
        let jet = jet_anywhere(&zp, prec)?;
        let c = self.compiled(prec);
        let args = jet.args(zp.as_complex());
        let (value, absum) = c.f.eval(&args);
        let mut deriv = Complex::new(prec);
        let mut err = absum * pow2(-(prec as i64) + 4) * (c.f.max_degree() + 2);
        for (i, p) in c.partials.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let (d, _) = p.eval(&args);
            if i == 0 {
                deriv += &d;
            } else {
                err += abs_up(&d) * &jet.err[i - 1];
                deriv += Complex::with_val(prec, &d * &jet.val[i]);
            }
        }
        Ok(Sample { value, deriv, err })
    }
}

/// num / den, used where den has a zero that the quotient cancels.
pub struct Quotient<'a> {
    pub num: &'a dyn Holomorphic,
    pub den: &'a dyn Holomorphic,
}

impl Holomorphic for Quotient<'_> {
    fn eval(&self, z: &Complex, prec: u32) -> Result<Sample> {
        let n = self.num.eval(z, prec)?;
        let d = self.den.eval(z, prec)?;
        let dabs = abs_up(&d.value);
        if dabs.is_zero() {
            return Err(Error::BoundaryZero("quotient denominator vanishes".into()));
        }
        let value = Complex::with_val(prec, &n.value / &d.value);
        let deriv = (Complex::with_val(prec, &n.deriv * &d.value) - Complex::with_val(prec, &n.value * &d.deriv))
            / Complex::with_val(prec, &d.value * &d.value);
        let err = (n.err + abs_up(&value) * &d.err) / dabs;
        Ok(Sample { value, deriv, err })
    }
}

/// Parameters of a growth rectangle
/// {x0 < Re w < x0 + 1, e0 log m < Im w < m^(1/m_exp)}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GrowthParams {
    pub x0: f64,
    pub e0: f64,
    pub m_exp: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RegionSpec {
    Disc {
        center: UHPoint,
        radius: f64,
    },
    Rectangle {
        x0: f64,
        x1: f64,
        y0: f64,
        y1: f64,
    },
    /// z = m + gamma(w) for w in the base region.
    Shifted {
        base: Box<RegionSpec>,
        m: i64,
        gamma: Moebius,
    },
}

impl RegionSpec {
    pub fn disc(center: UHPoint, radius: f64) -> Self {
        RegionSpec::Disc { center, radius }
    }

    pub fn shifted(base: RegionSpec, m: i64, gamma: Moebius) -> Self {
        RegionSpec::Shifted { base: Box::new(base), m, gamma }
    }

    /// The base region and the chart w -> m + gamma(w).
    pub fn flatten(&self) -> (RegionSpec, Chart) {
        match self {
            RegionSpec::Shifted { base, m, gamma } => {
                let (b, inner) = base.flatten();
                let g = gamma.compose(&Moebius::translation(inner.m)).compose(&inner.gamma);
                (b, Chart { m: *m, gamma: g })
            }
            other => (other.clone(), Chart::IDENTITY),
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            RegionSpec::Disc { center, radius } => {
                if !(*radius > 0.0) || center.im_f64() <= *radius {
                    return Err(Error::RegionDegenerate(format!(
                        "disc of radius {radius} leaves the upper half-plane"
                    )));
                }
            }
            RegionSpec::Rectangle { x0, x1, y0, y1 } => {
                if !(x1 > x0 && y1 > y0 && *y0 > 0.0) {
                    return Err(Error::RegionDegenerate(format!("rectangle [{x0}, {x1}] x [{y0}, {y1}]")));
                }
            }
            RegionSpec::Shifted { base, .. } => base.validate()?,
        }
        Ok(())
    }
}

/// w -> m + gamma(w).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Chart {
    pub m: i64,
    pub gamma: Moebius,
}

impl Chart {
    pub const IDENTITY: Chart = Chart { m: 0, gamma: Moebius::IDENTITY };

    pub fn to_z(&self, w: &Complex) -> Complex {
        let mut z = self.gamma.act(w);
        *z.mut_real() += self.m;
        z
    }

    /// dz/dw = 1/(cw + d)^2.
    pub fn dz_dw(&self, w: &Complex) -> Complex {
        let f = self.gamma.factor(w);
        Complex::with_val(w.prec().0, &f * &f).recip()
    }

    /// G(w) = F(m + gamma w) with G' = F'(z) dz/dw.
    pub fn eval(&self, f: &dyn Holomorphic, w: &Complex, prec: u32) -> Result<Sample> {
        if *self == Chart::IDENTITY {
            return f.eval(w, prec);
        }
        let z = self.to_z(&Complex::with_val(prec, w));
        let s = f.eval(&z, prec)?;
        let deriv = Complex::with_val(prec, &s.deriv * &self.dz_dw(&Complex::with_val(prec, w)));
        Ok(Sample { value: s.value, deriv, err: s.err })
    }
}

/// A refined zero.
#[derive(Clone, Debug, Serialize)]
pub struct Root {
    pub z: UHPoint,
    /// A disc of this radius around z holds exactly `multiplicity` zeros.
    pub error_radius: f64,
    /// |G| at the root, where G is the function that was counted.
    pub residual: f64,
    pub multiplicity: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct ZeroCertificate {
    pub region: RegionSpec,
    pub count: i64,
    pub winding_residual: f64,
    pub roots: Vec<Root>,
    pub precision_used: u32,
    /// Count predicted by the search that built the region, if any.
    pub expected: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth: Option<GrowthParams>,
}

impl ZeroCertificate {
    pub fn matches_expected(&self) -> bool {
        self.expected.is_none_or(|e| e == self.count)
    }
}

/// j, j', j - 1728 and similar single-polynomial targets.
pub fn jet_function(poly: &str) -> Result<JetPoly> {
    JetPoly::new(&crate::polyalg::parse_poly(poly)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::CuspTarget;
    use crate::polyalg::parse_poly;

    const P: u32 = 128;

    fn disc_count(f: &str, at: UHPoint, r: f64) -> ZeroCertificate {
        count_zeros(&jet_function(f).unwrap(), &RegionSpec::disc(at, r), P).unwrap()
    }

    #[test]
    fn elliptic_counts() {
        let c = disc_count("Y1", UHPoint::rho(P), 0.05);
        assert_eq!(c.count, 2);
        assert!(c.winding_residual < 0.25);
        assert_eq!(c.roots.len(), 1);
        assert_eq!(c.roots[0].multiplicity, 2);
        assert_eq!(disc_count("Y0 - 1728", UHPoint::i(P), 0.05).count, 2);
        assert_eq!(disc_count("Y0", UHPoint::i(P), 0.05).count, 0);
    }

    #[test]
    fn simple_root_refined() {
        let f = parse_poly("Y0 - 1728").unwrap();
        let z0 = UHPoint::new(0.0, 1.01, P).unwrap();
        let r = refine_root(&f, &z0, P).unwrap();
        assert!((r.z.re_f64()).abs() < 1e-30 && (r.z.im_f64() - 1.0).abs() < 1e-18);
        assert!(r.residual < 2f64.powi(-64));
        let r = refine_root(&parse_poly("Y1").unwrap(), &UHPoint::new(-0.49, 0.87, P).unwrap(), P).unwrap();
        assert_eq!(r.multiplicity, 2);
    }

    #[test]
    fn rectangle_count() {
        let f = jet_function("Y0 - 3000").unwrap();
        let c = count_zeros(&f, &RegionSpec::Rectangle { x0: -0.4, x1: 0.4, y0: 1.05, y1: 2.0 }, P).unwrap();
        assert_eq!(c.count, 1);
        let z = &c.roots[0].z;
        let j = jet_anywhere(z, P).unwrap();
        assert!((j.j().real().to_f64() - 3000.0).abs() < 1e-20);
    }

    #[test]
    fn intro_pole_shift() {
        let f = parse_poly("X^4*Y1^2 + Y0*(Y0-1728)").unwrap();
        let (plan, certs) = pole_shift_search_with(&f, &UHPoint::rho(P), &[5, 6], &SearchOptions::default()).unwrap();
        assert_eq!(plan.ell, 1);
        for c in certs {
            assert_eq!(c.count, 1, "{c:?}");
            assert_eq!(c.roots.len(), 1);
        }
    }

    #[test]
    fn growth_rectangle_count() {
        let f = parse_poly("X^4*Y1^2 + Y0^2*(Y0-1728)").unwrap();
        let certs = cusp_growth_search(&f, &Moebius::IDENTITY, &[1_000_000]).unwrap();
        assert_eq!(certs[0].count, 1, "{:?}", certs[0]);
        assert!(certs[0].matches_expected());
    }

    #[test]
    fn growth_needs_precondition() {
        let f = parse_poly("X*Y1 + Y1").unwrap();
        assert!(matches!(cusp_growth_search(&f, &Moebius::IDENTITY, &[100]), Err(Error::Precondition(_))));
    }

    #[test]
    fn rouche_finds_zero() {
        let f = parse_poly("X + Y0*Y1 + X^2*Y2").unwrap();
        let u = CuspTarget::new(0, 1).unwrap();
        assert!(matches!(rouche_existence(&f, &u, &[1]), Err(Error::Precondition(_))));
        let c = rouche_existence(&f, &CuspTarget::new(1, 2).unwrap(), &(1..=12).collect::<Vec<_>>()).unwrap();
        assert!(c.count >= 1);
        for r in &c.roots {
            let (v, _) = crate::qseries::eval_poly_with_jet(&f, r.z.as_complex(), &jet_anywhere(&r.z, P).unwrap());
            assert!(crate::numeric::abs_up(&v).to_f64() < 1e-15);
        }
        let f = parse_poly("Y0 - 2").unwrap();
        let c = rouche_existence(&f, &u, &[1]).unwrap();
        assert_eq!(c.count, 1);
    }
}
