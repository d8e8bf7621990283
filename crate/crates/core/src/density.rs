//! The density pipeline: gate, generic transform, pole or growth routes,
//! witness harvesting, orbit separation and a finite-degree rank check.

use nalgebra::{Complex as C64, DMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::locate::{
    cusp_growth_search_with, growth_exponent, invert_j, pole_shift_search_with, polynomial_roots, refine_root, JetPoly,
    SearchOptions, ZeroCertificate,
};
use crate::moebius::{jet_anywhere, reduce, Moebius};
use crate::numeric::{abs_up, complex, to_f64, ComplexText, UHPoint};
use crate::orders::measure_order;
use crate::par::Exec;
use crate::polyalg::{gate_hypotheses, parse_poly, slash, Gate, MultiPoly, RejectReason, Var};
use crate::qseries::eval_poly_with_jet;

#[derive(Clone, Debug)]
pub struct DensityBudget {
    pub prec: u32,
    pub seed: u64,
    /// Degree of the rank surrogate.
    pub degree: u32,
    pub min_orbits: usize,
    pub max_gammas: usize,
    /// Pole routes tried per transformed polynomial.
    pub max_poles: usize,
    pub pole_ms: Vec<i64>,
    pub growth_ms: Vec<i64>,
    pub exec: Exec,
}

impl Default for DensityBudget {
    fn default() -> Self {
        DensityBudget {
            prec: 128,
            seed: 0,
            degree: 2,
            min_orbits: 5,
            max_gammas: 6,
            max_poles: 3,
            pole_ms: (5..=20).collect(),
            growth_ms: vec![1_000_000, 2_000_000, 4_000_000, 8_000_000],
            exec: Exec::auto(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Verdict {
    DenseWitnessed,
    Rejected { reason: RejectReason },
    Inconclusive { reason: String },
}

/// Where a witness came from.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Route {
    /// gamma(tau) for a solution tau of F(j) = 0 in the fundamental domain.
    Orbit { gamma: Moebius },
    /// gamma(w) for w a zero of F^gamma near tau + m.
    Pole { gamma: Moebius, tau: UHPoint, m: i64 },
    /// gamma(w) for w a zero of F^gamma in m + delta Xi_m.
    Growth { gamma: Moebius, domain: Moebius, m: i64 },
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Witness {
    pub z: UHPoint,
    /// (j, j', j'') at z.
    pub jet: [ComplexText; 3],
    pub reduced: UHPoint,
    pub orbit_key: ComplexText,
    /// |F(z, jet(z))| relative to the sum of absolute term values.
    pub residual: f64,
    pub error_radius: f64,
    pub route: Route,
    #[serde(skip)]
    tuple: [C64<f64>; 4],
    #[serde(skip)]
    key: C64<f64>,
}

impl Witness {
    /// Records z as a solution of F, with its jet, reduction and residual.
    pub fn new(f: &MultiPoly, z: UHPoint, error_radius: f64, route: Route, prec: u32) -> Result<Witness> {
        let jet = jet_anywhere(&z, prec)?;
        let (v, _) = eval_poly_with_jet(f, z.as_complex(), &jet);
        let (_, absum) = f.compile(prec).eval(&jet.args(z.as_complex()));
        let scale = absum.to_f64().max(1.0);
        let reduced = reduce(&z)?.zred;
        Ok(Witness {
            tuple: [c64(z.as_complex()), c64(jet.j()), c64(jet.d1()), c64(jet.d2())],
            key: c64(jet.j()),
            jet: [jet.j().into(), jet.d1().into(), jet.d2().into()],
            orbit_key: jet.j().into(),
            residual: abs_up(&v).to_f64() / scale,
            error_radius,
            route,
            reduced,
            z,
        })
    }

    pub fn tuple(&self) -> [C64<f64>; 4] {
        self.tuple
    }

    pub fn j_value(&self) -> C64<f64> {
        self.key
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RankCheck {
    pub degree: u32,
    pub monomials: usize,
    pub rank: usize,
    pub expected: usize,
    pub passed: bool,
    pub singular_values: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DensityReport {
    pub input: String,
    pub verdict: Verdict,
    pub witnesses: Vec<Witness>,
    pub orbit_keys: Vec<ComplexText>,
    pub rank_check: Option<RankCheck>,
    pub certificates: Vec<ZeroCertificate>,
    pub precision: u32,
    pub seed: u64,
    pub notes: Vec<String>,
}

fn c64(z: &Complex) -> C64<f64> {
    let (a, b) = to_f64(z);
    C64::new(a, b)
}

/// Groups witnesses whose j-values agree within 2^(-prec/4), relatively.
pub fn distinct_orbits(witnesses: &[Witness], prec: u32) -> Vec<Vec<usize>> {
    let tol = 2f64.powi(-(prec as i32) / 4);
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for (i, w) in witnesses.iter().enumerate() {
        let k = w.key;
        match groups.iter_mut().find(|g| {
            let r = witnesses[g[0]].key;
            (r - k).norm() <= tol * r.norm().max(k.norm()).max(1.0)
        }) {
            Some(g) => g.push(i),
            None => groups.push(vec![i]),
        }
    }
    groups
}

fn monomials(degree: u32) -> Vec<[u32; 4]> {
    let mut out = Vec::new();
    for total in 0..=degree {
        for a in 0..=total {
            for b in 0..=total - a {
                for c in 0..=total - a - b {
                    out.push([a, b, c, total - a - b - c]);
                }
            }
        }
    }
    out
}

/// Number of monomials in four variables of total degree at most d.
pub fn monomial_count(d: i64) -> usize {
    if d < 0 {
        0
    } else {
        let d = d as usize;
        (d + 1) * (d + 2) * (d + 3) * (d + 4) / 24
    }
}

/// Numerical rank of the degree-D monomial evaluation matrix at the tuples,
/// against the dimension of degree-D polynomials modulo multiples of F.
pub fn independence_check(tuples: &[[C64<f64>; 4]], f_degree: u32, degree: u32, prec: u32) -> Result<RankCheck> {
    let mons = monomials(degree);
    let expected = mons.len() - monomial_count(degree as i64 - f_degree as i64);
    if tuples.len() < expected.max(2) {
        return Err(Error::InsufficientWitnesses { have: tuples.len(), need: expected.max(2) });
    }
    let scale: Vec<f64> = (0..4).map(|v| tuples.iter().map(|t| t[v].norm()).fold(1.0, f64::max)).collect();
    let m = DMatrix::from_fn(tuples.len(), mons.len(), |r, c| {
        let t = &tuples[r];
        (0..4).fold(C64::new(1.0, 0.0), |acc, v| acc * (t[v] / scale[v]).powu(mons[c][v]))
    });
    let sv = m.singular_values();
    let mut svs: Vec<f64> = sv.iter().copied().collect();
    svs.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let top = svs.first().copied().unwrap_or(0.0);
    let tol = 2f64.powi(-(prec as i32) / 4).max(1e-13) * top.max(1e-300);
    let rank = svs.iter().filter(|&&s| s > tol).count();
    Ok(RankCheck { degree, monomials: mons.len(), rank, expected, passed: rank == expected, singular_values: svs })
}

fn sample_gammas(seed: u64, n: usize) -> Vec<Moebius> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = vec![Moebius::S];
    while out.len() < n {
        let g = Moebius::random_bounded(&mut rng, 12, 40, true);
        if !out.iter().any(|h| h.same_action(&g)) {
            out.push(g);
        }
    }
    out
}

/// Zeros of p(jet(z)) in {-1/2 <= Re z < 1/2, 0.3 <= Im z <= 2} away from
/// the orbits of rho and i, from grid minima refined by Newton.
pub fn window_zeros(p: &MultiPoly, prec: u32, max: usize) -> Result<Vec<UHPoint>> {
    let jp = JetPoly::new(p)?;
    let (nx, ny) = (40usize, 34usize);
    let (dx, dy) = (1.0 / nx as f64, 1.7 / ny as f64);
    let mut grid = vec![vec![f64::INFINITY; ny + 1]; nx];
    for (ix, row) in grid.iter_mut().enumerate() {
        for (iy, cell) in row.iter_mut().enumerate() {
            let z = complex(64, -0.5 + ix as f64 * dx, 0.3 + iy as f64 * dy);
            if let Ok(s) = crate::locate::Holomorphic::eval(&jp, &z, 64) {
                let ds = c64(&s.deriv).norm();
                *cell = c64(&s.value).norm() / ds.max(1e-300);
            }
        }
    }
    let mut seeds = Vec::new();
    for ix in 0..nx {
        for iy in 1..ny {
            let v = grid[ix][iy];
            let neighbors = [grid[(ix + nx - 1) % nx][iy], grid[(ix + 1) % nx][iy], grid[ix][iy - 1], grid[ix][iy + 1]];
            if v.is_finite() && neighbors.iter().all(|&n| v <= n) && v < 2.0 * dx {
                seeds.push((-0.5 + ix as f64 * dx, 0.3 + iy as f64 * dy));
            }
        }
    }
    seeds.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap());
    let mut out: Vec<UHPoint> = Vec::new();
    for (x, y) in seeds {
        let Ok(root) = refine_root(p, &UHPoint::new(x, y, prec)?, prec) else { continue };
        let z = root.z;
        let (re, im) = (z.re_f64(), z.im_f64());
        if !(-0.5..0.5).contains(&re) || !(0.3..=2.0).contains(&im) {
            continue;
        }
        let jet = jet_anywhere(&z, prec)?;
        if c64(jet.d1()).norm() < 1e-12 * (1.0 + c64(jet.j()).norm()) {
            continue;
        }
        if out.iter().any(|o| (o.re_f64() - re).hypot(o.im_f64() - im) < 1e-9) {
            continue;
        }
        out.push(z);
        if out.len() >= max {
            break;
        }
    }
    Ok(out)
}

enum Plan {
    Pole(UHPoint),
    Growth(Moebius),
}

fn pole_candidates(hn: &MultiPoly, budget: &DensityBudget) -> Result<Vec<UHPoint>> {
    let prec = budget.prec;
    let mut c = vec![UHPoint::rho(prec), UHPoint::i(prec)];
    if hn.uses_only(&[Var::Y0]) {
        if hn.degree_in(Var::Y0) > 0 {
            for (u, _) in polynomial_roots(hn, Var::Y0, prec)? {
                let (a, b) = to_f64(&u);
                if (a.abs() < 1e-20 && b.abs() < 1e-20) || ((a - 1728.0).abs() < 1e-20 && b.abs() < 1e-20) {
                    continue;
                }
                c.push(invert_j(&u, prec)?);
            }
        }
    } else {
        c.extend(window_zeros(hn, prec, budget.max_poles)?);
    }
    Ok(c)
}

fn plans_for(fg: &MultiPoly, budget: &DensityBudget) -> Result<Vec<Plan>> {
    let coeffs = fg.coeffs_in(Var::X);
    let Some((&n, hn)) = coeffs.iter().next_back() else { return Ok(Vec::new()) };
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut plans = Vec::new();
    let cands = pole_candidates(hn, budget)?;
    for (i, tau) in cands.iter().enumerate() {
        let nearest = cands
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, o)| (o.re_f64() - tau.re_f64()).hypot(o.im_f64() - tau.im_f64()))
            .fold(f64::INFINITY, f64::min);
        let r = 0.05f64.min(tau.im_f64() / 4.0).min(nearest / 3.0);
        let Ok(on) = measure_order(hn, tau, r, budget.prec) else { continue };
        for (k, hk) in coeffs.iter().filter(|(k, _)| **k != n) {
            let _ = k;
            if let Ok(ok) = measure_order(hk, tau, r, budget.prec) {
                if ok < on {
                    plans.push(Plan::Pole(tau.clone()));
                    break;
                }
            }
        }
        if plans.len() >= budget.max_poles {
            break;
        }
    }
    if plans.is_empty() {
        for g in [Moebius::IDENTITY, Moebius::S, Moebius::T.compose(&Moebius::S)] {
            if growth_exponent(fg, &g).is_ok() {
                plans.push(Plan::Growth(g));
                break;
            }
        }
    }
    Ok(plans)
}

fn is_new(ws: &[Witness], z: &UHPoint) -> bool {
    !ws.iter().any(|w| (w.z.re_f64() - z.re_f64()).hypot(w.z.im_f64() - z.im_f64()) < 1e-12)
}

fn needed_witnesses(f: &MultiPoly, budget: &DensityBudget) -> usize {
    let expected =
        monomial_count(budget.degree as i64) - monomial_count(budget.degree as i64 - f.total_degree() as i64);
    expected.max(budget.min_orbits) + 2
}

fn harvest_general(
    f: &MultiPoly,
    budget: &DensityBudget,
    ws: &mut Vec<Witness>,
    certs: &mut Vec<ZeroCertificate>,
    notes: &mut Vec<String>,
) -> Result<()> {
    let prec = budget.prec;
    let need = needed_witnesses(f, budget);
    let opts = SearchOptions { prec, exec: budget.exec, ..SearchOptions::default() };
    let mut routes_used = 0;
    for g in sample_gammas(budget.seed, budget.max_gammas) {
        if ws.len() >= need && distinct_orbits(ws, prec).len() >= budget.min_orbits && routes_used >= 2 {
            break;
        }
        let fg = slash(f, &g)?;
        let plans = match plans_for(&fg, budget) {
            Ok(p) => p,
            Err(e) => {
                notes.push(format!("gamma {g}: {e}"));
                continue;
            }
        };
        if plans.is_empty() {
            notes.push(format!("gamma {g}: no pole or growth route"));
        }
        for plan in plans {
            let found = match &plan {
                Plan::Pole(tau) => pole_shift_search_with(&fg, tau, &budget.pole_ms, &opts).map(|(_, c)| {
                    c.into_iter()
                        .zip(budget.pole_ms.iter())
                        .map(|(c, &m)| (c, Route::Pole { gamma: g, tau: tau.clone(), m }))
                        .collect::<Vec<_>>()
                }),
                Plan::Growth(d) => cusp_growth_search_with(&fg, d, &budget.growth_ms, &opts).map(|c| {
                    c.into_iter()
                        .zip(budget.growth_ms.iter())
                        .map(|(c, &m)| (c, Route::Growth { gamma: g, domain: *d, m }))
                        .collect::<Vec<_>>()
                }),
            };
            let found = match found {
                Ok(v) => v,
                Err(e) => {
                    notes.push(format!("gamma {g}: {e}"));
                    continue;
                }
            };
            routes_used += 1;
            for (cert, route) in found {
                if !cert.matches_expected() {
                    notes.push(format!(
                        "count {} differs from the expected {:?} ({route:?})",
                        cert.count, cert.expected
                    ));
                }
                for root in &cert.roots {
                    let z = g.act_point(&root.z);
                    if is_new(ws, &z) {
                        ws.push(Witness::new(f, z, root.error_radius, route.clone(), prec)?);
                    }
                }
                certs.push(cert);
            }
        }
    }
    Ok(())
}

/// Bottom row up to sign. Witnesses sharing it differ by a translation and
/// lie on a line in the jet coordinates.
fn bottom_row(g: &Moebius) -> (i64, i64) {
    let (c, d) = (g.c(), g.d());
    if c < 0 || (c == 0 && d < 0) {
        (-c, -d)
    } else {
        (c, d)
    }
}

fn harvest_orbits(f: &MultiPoly, budget: &DensityBudget, ws: &mut Vec<Witness>, notes: &mut Vec<String>) -> Result<()> {
    let prec = budget.prec;
    let need = needed_witnesses(f, budget);
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let roots = polynomial_roots(f, Var::Y0, prec)?;
    notes.push(format!(
        "F lies in C[Y0]: solutions of j(z) = u form {} orbit(s), so the orbit minimum is waived",
        roots.len()
    ));
    let per_root = need.div_ceil(roots.len().max(1)) + 1;
    for (u, _) in roots {
        let tau = invert_j(&u, prec)?;
        let mut gammas = vec![Moebius::IDENTITY, Moebius::S];
        while gammas.len() < per_root {
            let g = Moebius::random_bounded(&mut rng, 12, 40, true);
            if !gammas.iter().any(|h| bottom_row(h) == bottom_row(&g)) {
                gammas.push(g);
            }
        }
        for g in gammas {
            let z0 = g.act_point(&tau);
            let root = refine_root(f, &z0, prec)?;
            if is_new(ws, &root.z) {
                ws.push(Witness::new(f, root.z, root.error_radius, Route::Orbit { gamma: g }, prec)?);
            }
        }
    }
    Ok(())
}

/// Runs the density pipeline on F.
pub fn run_pipeline(f: &MultiPoly, budget: &DensityBudget) -> Result<DensityReport> {
    let prec = budget.prec;
    let mut report = DensityReport {
        input: f.to_string(),
        verdict: Verdict::Inconclusive { reason: String::new() },
        witnesses: Vec::new(),
        orbit_keys: Vec::new(),
        rank_check: None,
        certificates: Vec::new(),
        precision: prec,
        seed: budget.seed,
        notes: Vec::new(),
    };
    if let Gate::Rejected(reason) = gate_hypotheses(f)? {
        report.verdict = Verdict::Rejected { reason };
        return Ok(report);
    }
    let single_orbit = f.uses_only(&[Var::Y0]);
    let mut ws = Vec::new();
    if single_orbit {
        harvest_orbits(f, budget, &mut ws, &mut report.notes)?;
    } else {
        harvest_general(f, budget, &mut ws, &mut report.certificates, &mut report.notes)?;
    }
    report
        .notes
        .push("density is certified only up to the stated degree; irreducibility of F is assumed, not checked".into());
    let groups = distinct_orbits(&ws, prec);
    report.orbit_keys = groups.iter().map(|g| ws[g[0]].orbit_key.clone()).collect();
    let tuples: Vec<[C64<f64>; 4]> = ws.iter().map(|w| w.tuple).collect();
    let rank = match independence_check(&tuples, f.total_degree(), budget.degree, prec) {
        Ok(r) => Some(r),
        Err(e) => {
            report.notes.push(e.to_string());
            None
        }
    };
    let tol = 2f64.powi(-(prec as i32) / 2);
    let residuals_ok = ws.iter().all(|w| w.residual < tol);
    let orbits_ok = single_orbit || groups.len() >= budget.min_orbits;
    report.verdict = if ws.is_empty() {
        Verdict::Inconclusive { reason: "no witnesses found within budget".into() }
    } else if !residuals_ok {
        Verdict::Inconclusive { reason: "a witness residual exceeds the tolerance".into() }
    } else if !orbits_ok {
        Verdict::Inconclusive { reason: format!("{} distinct orbits, {} required", groups.len(), budget.min_orbits) }
    } else if !rank.as_ref().is_some_and(|r| r.passed) {
        Verdict::Inconclusive { reason: "rank check did not pass".into() }
    } else {
        Verdict::DenseWitnessed
    };
    report.rank_check = rank;
    report.witnesses = ws;
    Ok(report)
}

/// 3 Y0^2 (Y0 - 1728)^2 Y2^2 - (Y0^2 - 1968 Y0 + 2654208) Y1^4, whose zeros off
/// the elliptic orbits are zeros of j'''.
pub fn jppp_polynomial() -> MultiPoly {
    parse_poly("3*Y0^2*(Y0-1728)^2*Y2^2 - (Y0^2 - 1968*Y0 + 2654208)*Y1^4").expect("valid polynomial")
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Accumulation {
    pub tau: UHPoint,
    pub m: i64,
    /// |-1/(tau + m)|.
    pub modulus: f64,
    /// Distance from the witness to -1/(tau + m).
    pub distance: f64,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct JpppStudy {
    pub report: DensityReport,
    pub max_abs_jppp: f64,
    pub accumulation: Vec<Accumulation>,
}

/// The pipeline on the j''' equation plus the j''' values at the witnesses
/// and their approach to -1/(tau + m).
pub fn jppp_case_study(budget: &DensityBudget) -> Result<JpppStudy> {
    let prec = budget.prec;
    let report = run_pipeline(&jppp_polynomial(), budget)?;
    let mut max_abs_jppp: f64 = 0.0;
    let mut accumulation = Vec::new();
    for w in &report.witnesses {
        let jet = jet_anywhere(&w.z, prec)?;
        max_abs_jppp = max_abs_jppp.max(abs_up(jet.d3()).to_f64());
        if let Route::Pole { gamma, tau, m } = &w.route {
            if *gamma == Moebius::S {
                let a = Complex::with_val(prec, tau.as_complex() + *m);
                let target = Complex::with_val(prec, a.recip_ref()) * -1i32;
                accumulation.push(Accumulation {
                    tau: tau.clone(),
                    m: *m,
                    modulus: abs_up(&target).to_f64(),
                    distance: abs_up(&Complex::with_val(prec, &target - w.z.as_complex())).to_f64(),
                });
            }
        }
    }
    Ok(JpppStudy { report, max_abs_jppp, accumulation })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomial_count(1), 5);
        assert_eq!(monomial_count(2), 15);
        assert_eq!(monomials(2).len(), 15);
        assert_eq!(monomial_count(-1), 0);
    }

    #[test]
    fn rank_of_points_on_a_hyperplane() {
        let t: Vec<[C64<f64>; 4]> = (0..6)
            .map(|k| {
                let k = k as f64;
                [C64::new(k, 1.0), C64::new(2.0, 0.0), C64::new(k * k, -k), C64::new(1.0 / (k + 1.0), k.sqrt())]
            })
            .collect();
        let r = independence_check(&t, 1, 1, 128).unwrap();
        assert_eq!((r.rank, r.expected), (4, 4));
        assert!(r.passed);
        assert!(matches!(independence_check(&t[..1], 1, 1, 128), Err(Error::InsufficientWitnesses { have: 1, .. })));
        let dup = vec![t[0]; 6];
        assert!(!independence_check(&dup, 1, 1, 128).unwrap().passed);
    }

    #[test]
    fn rejections() {
        for s in ["Y1", "Y0 - 1728", "Y0*Y2 + Y0", "X^2 + 1"] {
            let r = run_pipeline(&parse_poly(s).unwrap(), &DensityBudget::default()).unwrap();
            assert!(matches!(r.verdict, Verdict::Rejected { .. }), "{s}");
        }
    }

    #[test]
    fn single_orbit_input() {
        let r = run_pipeline(&parse_poly("Y0 - 2").unwrap(), &DensityBudget::default()).unwrap();
        assert_eq!(r.orbit_keys.len(), 1);
    }

    #[test]
    fn j_second_derivative_zeros() {
        let r = run_pipeline(&parse_poly("Y2").unwrap(), &DensityBudget::default()).unwrap();
        assert_eq!(r.verdict, Verdict::DenseWitnessed, "{:?} {:?}", r.notes, r.rank_check);
        assert!(r.orbit_keys.len() >= 5);
        let rank = r.rank_check.unwrap();
        assert_eq!((rank.rank, rank.expected), (10, 10));
        for w in &r.witnesses {
            let j = w.j_value();
            assert!(j.norm() > 1e-10 && (j - 1728.0).norm() > 1e-10);
        }
    }

    #[test]
    fn jppp_witnesses() {
        let st = jppp_case_study(&DensityBudget::default()).unwrap();
        assert_eq!(st.report.verdict, Verdict::DenseWitnessed);
        assert!(st.max_abs_jppp < 1e-15);
        let far: Vec<_> = st.accumulation.iter().filter(|a| a.m >= 10).collect();
        assert!(!far.is_empty());
        assert!(far.iter().all(|a| a.modulus < 0.11 && a.distance < 1e-4));
    }
}
