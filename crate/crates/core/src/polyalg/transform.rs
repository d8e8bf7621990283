//! The generic SL2(Z)-transform, the slash action and the degree/order
//! bookkeeping built on them.

use serde::Serialize;

use super::poly::{Mono, MultiPoly, Var};
use super::scalar::CoefScalar;
use crate::error::{Error, Result};
use crate::moebius::Moebius;

fn require_input(p: &MultiPoly) -> Result<()> {
    if p.uses_only(&Var::INPUT) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("expected a polynomial in X, Y0, Y1, Y2, got {p}")))
    }
}

fn x() -> MultiPoly {
    MultiPoly::var(Var::X)
}

fn lin(a: i64, b: i64) -> MultiPoly {
    &x().scale(&CoefScalar::from_int(a)) + &MultiPoly::int(b)
}

/// Gamma(p) = p(Z, Y0, W^2 Y1, W^4 Y2 + 2 C W^3 Y1).
pub fn gamma_transform(p: &MultiPoly) -> Result<MultiPoly> {
    require_input(p)?;
    let w = MultiPoly::var(Var::W);
    let y1 = MultiPoly::var(Var::Y1);
    let y1_img = &w.pow(2) * &y1;
    let y2_img = &(&w.pow(4) * &MultiPoly::var(Var::Y2))
        + &(&(&w.pow(3) * &MultiPoly::var(Var::C)) * &y1).scale(&CoefScalar::from_int(2));
    let z = MultiPoly::var(Var::Z);
    Ok(p.substitute(&|v| match v {
        Var::X => Some(z.clone()),
        Var::Y1 => Some(y1_img.clone()),
        Var::Y2 => Some(y2_img.clone()),
        _ => None,
    }))
}

/// p^gamma = (cX + d)^n Gamma(p)((aX + b)/(cX + d), cX + d, c, Y) with n = deg_X p.
/// Satisfies p(gz, jet(gz)) = p^gamma(z, jet(z)) / (cz + d)^n.
pub fn slash(p: &MultiPoly, g: &Moebius) -> Result<MultiPoly> {
    let gp = gamma_transform(p)?;
    let n = p.degree_in(Var::X);
    let (a, b, c, d) = g.entries();
    let num = lin(a, b);
    let den = lin(c, d);
    let cc = MultiPoly::int(c);
    let mut out = MultiPoly::zero();
    for (k, gk) in gp.coeffs_in(Var::Z) {
        let sub = gk.substitute(&|v| match v {
            Var::W => Some(den.clone()),
            Var::C => Some(cc.clone()),
            _ => None,
        });
        out = &out + &(&(&num.pow(k) * &den.pow(n - k)) * &sub);
    }
    Ok(out)
}

/// max over terms of 2 deg_Y1 + 4 deg_Y2, the T-degree of F(X, Y0, T^2 Y1, T^4 Y2).
pub fn j_degree(f: &MultiPoly) -> u32 {
    f.terms().map(|(m, _)| jdeg_mono(m)).max().unwrap_or(0)
}

fn jdeg_mono(m: &Mono) -> u32 {
    2 * m.get(Var::Y1) as u32 + 4 * m.get(Var::Y2) as u32
}

pub fn is_j_homogeneous(f: &MultiPoly) -> bool {
    let mut it = f.terms().map(|(m, _)| jdeg_mono(m));
    match it.next() {
        Some(first) => it.all(|d| d == first),
        None => true,
    }
}

/// Sum of the terms of maximal j-degree.
pub fn top_j_degree_part(f: &MultiPoly) -> MultiPoly {
    let n = j_degree(f);
    MultiPoly::from_terms(f.terms().filter(|(m, _)| jdeg_mono(m) == n).map(|(m, c)| (*m, c.clone())))
}

/// Largest power of T dividing F(X, Y0, T^2 Y1, T^3 Y2).
pub fn j_order(f: &MultiPoly) -> u32 {
    f.terms().map(|(m, _)| 2 * m.get(Var::Y1) as u32 + 3 * m.get(Var::Y2) as u32).min().unwrap_or(0)
}

/// Gamma(F) = sum_k p_k(Z, C, Y) W^k.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WDecomposition {
    /// deg_W Gamma(F), which equals the j-degree.
    pub n: u32,
    /// p_0 .. p_N.
    pub coeffs: Vec<MultiPoly>,
    /// Least k with p_k != 0.
    pub k0: u32,
    /// For j-homogeneous F, the l with C^(N-k0) p_{k0} in Y1^l C[Y0] times that C power.
    pub ell: Option<u32>,
}

pub fn w_decomposition(f: &MultiPoly) -> Result<WDecomposition> {
    let g = gamma_transform(f)?;
    let parts = g.coeffs_in(Var::W);
    let n = parts.keys().copied().max().unwrap_or(0);
    let mut coeffs = vec![MultiPoly::zero(); n as usize + 1];
    for (k, p) in parts {
        coeffs[k as usize] = p;
    }
    let k0 = coeffs.iter().position(|p| !p.is_zero()).unwrap_or(0) as u32;
    // For j-homogeneous F the W^k coefficient is C^(N-k) p_k.
    let pk0 = coeffs[k0 as usize].eval_var(Var::C, &CoefScalar::one());
    let ell = if is_j_homogeneous(f) && pk0.uses_only(&[Var::Z, Var::Y0, Var::Y1]) && !pk0.depends_on(Var::Z) {
        let e = pk0.degree_in(Var::Y1);
        (pk0.min_degree_in(Var::Y1) == e).then_some(e)
    } else {
        None
    };
    Ok(WDecomposition { n, coeffs, k0, ell })
}

/// p(X, T Y) = sum_k T^k p_k, graded by total Y-degree; zero parts omitted.
pub fn homog_decompose_cusp(p: &MultiPoly) -> Vec<(u32, MultiPoly)> {
    let mut parts: std::collections::BTreeMap<u32, MultiPoly> = Default::default();
    for (m, c) in p.terms() {
        parts.entry(m.degree_in(&Var::Y)).or_default().add_term(*m, c.clone());
    }
    parts.into_iter().collect()
}

/// The elliptic points, with their (mu, u) data: j - u vanishes to order mu.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Elliptic {
    Rho,
    I,
}

impl Elliptic {
    pub fn mu(self) -> u32 {
        match self {
            Elliptic::Rho => 3,
            Elliptic::I => 2,
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Elliptic::Rho => 0,
            Elliptic::I => 1728,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Elliptic::Rho => "rho",
            Elliptic::I => "i",
        }
    }
}

/// p(X, T^mu Y0 + u, T^(mu-1) Y1) = sum_{k >= nu} T^k p_k; returns (nu, p_nu).
pub fn ramified_expansion(p: &MultiPoly, at: Elliptic) -> Result<(u32, MultiPoly)> {
    require_input(p)?;
    if p.depends_on(Var::Y2) {
        return Err(Error::Y2Dependence);
    }
    if p.is_zero() {
        return Err(Error::InvalidArgument("zero polynomial has no expansion".into()));
    }
    let t = MultiPoly::var(Var::T);
    let mu = at.mu();
    let y0_img = &(&t.pow(mu) * &MultiPoly::var(Var::Y0)) + &MultiPoly::int(at.value());
    let y1_img = &t.pow(mu - 1) * &MultiPoly::var(Var::Y1);
    let e = p.substitute(&|v| match v {
        Var::Y0 => Some(y0_img.clone()),
        Var::Y1 => Some(y1_img.clone()),
        _ => None,
    });
    let nu = e.min_degree_in(Var::T);
    Ok((nu, e.coeff_of(Var::T, nu)))
}

/// Checks Gamma(p)(X, a^-1 U1, a(U2 - a^-4 b U1^4)/(2 U1^3), Y0, a^2, b) = p(X, Y0, U1^2, U2)
/// with the U1 denominators cleared. `alpha` must be invertible in the scalar ring.
pub fn lemma61_check(p: &MultiPoly, alpha: &CoefScalar, beta: &CoefScalar) -> Result<bool> {
    let g = gamma_transform(p)?;
    let ainv = alpha.inv().ok_or_else(|| Error::InvalidArgument("alpha must be a nonzero monomial c*pi^k".into()))?;
    let u1 = MultiPoly::var(Var::U1);
    let u2 = MultiPoly::var(Var::U2);
    let cmax = g.degree_in(Var::C);
    // C = cnum / (2 U1^3)
    let a4inv = ainv.pow(4);
    let cnum = (&u2 - &u1.pow(4).scale(&(&a4inv * beta))).scale(alpha);
    let denom = u1.pow(3).scale(&CoefScalar::from_int(2));
    let w_img = u1.scale(&ainv);
    let y1_val = MultiPoly::constant(alpha.pow(2));
    let y2_val = MultiPoly::constant(beta.clone());
    let z_img = MultiPoly::var(Var::X);
    let mut lhs = MultiPoly::zero();
    for (k, gk) in g.coeffs_in(Var::C) {
        let sub = gk.substitute(&|v| match v {
            Var::Z => Some(z_img.clone()),
            Var::W => Some(w_img.clone()),
            Var::Y1 => Some(y1_val.clone()),
            Var::Y2 => Some(y2_val.clone()),
            _ => None,
        });
        lhs = &lhs + &(&(&sub * &cnum.pow(k)) * &denom.pow(cmax - k));
    }
    let rhs = p.substitute(&|v| match v {
        Var::Y1 => Some(u1.pow(2)),
        Var::Y2 => Some(u2.clone()),
        _ => None,
    });
    Ok(lhs == &rhs * &denom.pow(cmax))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RejectReason {
    ZeroPolynomial,
    /// F lies in C[X].
    NoJetDependence,
    DivisibleByY0,
    DivisibleByY0Minus1728,
    DivisibleByY1,
}

impl std::fmt::Display for RejectReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RejectReason::ZeroPolynomial => "F is the zero polynomial",
            RejectReason::NoJetDependence => "F lies in C[X]",
            RejectReason::DivisibleByY0 => "F is divisible by Y0",
            RejectReason::DivisibleByY0Minus1728 => "F is divisible by Y0 - 1728",
            RejectReason::DivisibleByY1 => "F is divisible by Y1",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Gate {
    Admissible,
    Rejected(RejectReason),
}

/// Admissible iff F is not in C[X] and not divisible by Y0, Y0 - 1728 or Y1.
pub fn gate_hypotheses(f: &MultiPoly) -> Result<Gate> {
    require_input(f)?;
    use RejectReason::*;
    let r = if f.is_zero() {
        Some(ZeroPolynomial)
    } else if f.uses_only(&[Var::X]) {
        Some(NoJetDependence)
    } else if f.min_degree_in(Var::Y0) > 0 {
        Some(DivisibleByY0)
    } else if f.min_degree_in(Var::Y1) > 0 {
        Some(DivisibleByY1)
    } else if f.eval_var(Var::Y0, &CoefScalar::from_int(1728)).is_zero() {
        Some(DivisibleByY0Minus1728)
    } else {
        None
    };
    Ok(r.map_or(Gate::Admissible, Gate::Rejected))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyalg::parse_poly;

    fn p(s: &str) -> MultiPoly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn gamma_of_jet_variables() {
        assert_eq!(gamma_transform(&p("Y2")).unwrap(), p("W^4*Y2 + 2*C*W^3*Y1"));
        assert_eq!(gamma_transform(&p("Y1")).unwrap(), p("W^2*Y1"));
    }

    #[test]
    fn slash_examples() {
        assert_eq!(slash(&p("Y2"), &Moebius::S).unwrap(), p("X^4*Y2 + 2*X^3*Y1"));
        assert_eq!(slash(&p("X"), &Moebius::S).unwrap(), p("-1"));
        // f(a - 1/z) = a z^4 j'' + z^3 (2a j' - j''); the slash carries the
        // extra factor (cz + d)^deg_X = z.
        for a in [-3i64, 0, 2, 5] {
            let g = Moebius::new(a, -1, 1, 0).unwrap();
            let value = p(&format!("{a}*X^4*Y2 + X^3*(2*{a}*Y1 - Y2)"));
            assert_eq!(slash(&p("2*Y1 + X*Y2"), &g).unwrap(), &p("X") * &value, "a = {a}");
        }
    }

    #[test]
    fn degrees_and_orders() {
        assert_eq!(j_degree(&p("Y2")), 4);
        assert!(is_j_homogeneous(&p("Y2")));
        assert_eq!(j_degree(&p("Y1^2 - Y0*Y2")), 4);
        assert!(is_j_homogeneous(&p("Y1^2 - Y0*Y2")));
        assert_eq!(j_degree(&p("X^3 + Y0")), 0);
        assert!(is_j_homogeneous(&p("X^3 + Y0")));
        assert_eq!(j_order(&p("Y1^2 - Y0*Y2")), 3);
        assert_eq!(j_order(&p("Y2")), 3);
        assert_eq!(j_order(&p("Y0")), 0);
    }

    #[test]
    fn w_decomposition_of_y2() {
        let d = w_decomposition(&p("Y2")).unwrap();
        assert_eq!(d.n, 4);
        assert_eq!(d.coeffs[4], p("Y2"));
        assert_eq!(d.coeffs[3], p("2*C*Y1"));
        assert_eq!(d.k0, 3);
        assert_eq!(w_decomposition(&p("Y1^2 - Y0*Y2")).unwrap().n, 4);
    }

    #[test]
    fn cusp_grading() {
        let parts = homog_decompose_cusp(&p("4*pi^2*Y0 + Y2"));
        assert_eq!(parts.len(), 1);
        assert_eq!(parts[0].0, 1);
        let parts = homog_decompose_cusp(&p("Y0^2 + X*Y1"));
        assert_eq!(parts, vec![(1, p("X*Y1")), (2, p("Y0^2"))]);
    }

    #[test]
    fn ramified_examples() {
        assert_eq!(ramified_expansion(&p("Y0"), Elliptic::Rho).unwrap().0, 3);
        assert_eq!(ramified_expansion(&p("Y1"), Elliptic::I).unwrap().0, 1);
        assert_eq!(ramified_expansion(&p("Y0 - 1728"), Elliptic::I).unwrap().0, 2);
        assert!(matches!(ramified_expansion(&p("Y0*Y2 - (2/3)*Y1^2"), Elliptic::Rho), Err(Error::Y2Dependence)));
    }

    #[test]
    fn lemma61_simple_cases() {
        let alpha = p("3*pi").constant_value().unwrap();
        assert!(lemma61_check(&p("Y1"), &alpha, &CoefScalar::from_int(5)).unwrap());
        assert!(lemma61_check(&p("Y2"), &CoefScalar::one(), &CoefScalar::zero()).unwrap());
        assert!(lemma61_check(&p("X*Y2^2 - Y0*Y1*Y2 + 7"), &alpha, &CoefScalar::i()).unwrap());
    }

    #[test]
    fn gate_examples() {
        assert_eq!(gate_hypotheses(&p("Y1")).unwrap(), Gate::Rejected(RejectReason::DivisibleByY1));
        assert_eq!(gate_hypotheses(&p("Y0 - 1728")).unwrap(), Gate::Rejected(RejectReason::DivisibleByY0Minus1728));
        assert_eq!(gate_hypotheses(&p("Y2")).unwrap(), Gate::Admissible);
        assert_eq!(gate_hypotheses(&p("X^2 + 1")).unwrap(), Gate::Rejected(RejectReason::NoJetDependence));
        assert_eq!(gate_hypotheses(&p("Y0*Y2")).unwrap(), Gate::Rejected(RejectReason::DivisibleByY0));
        assert_eq!(gate_hypotheses(&p("Y0 - 2")).unwrap(), Gate::Admissible);
    }
}
