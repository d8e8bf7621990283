use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use modjet::density::{run_pipeline, DensityBudget, RankCheck, Verdict, Witness};
use modjet::error::{Error, Result};
use modjet::growth::{order_in_domain, GrowthOrder};
use modjet::locate::{cusp_growth_search_with, pole_shift_search_with, SearchOptions, ZeroCertificate};
use modjet::moebius::{jet_anywhere, Moebius};
use modjet::numeric::{ComplexText, UHPoint};
use modjet::orders::{
    elliptic_point, measure_order, predict_cusp, predict_elliptic, predict_unramified, scan_ratio_criteria, Criterion,
};
use modjet::par::Exec;
use modjet::polyalg::{parse_poly, Elliptic, MultiPoly};
use modjet::qseries::eval_poly_with_jet;
use modjet::repro::{run_example, EXAMPLES};

#[derive(Parser)]
#[command(name = "modjet", version, about = "Certified zeros of polynomials in z, j, j', j''")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Clone)]
struct Common {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 128, value_parser = clap::value_parser!(u32).range(53..=4096))]
    prec: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Run the parallel stages on one thread.
    #[arg(long, global = true)]
    sequential: bool,
}

#[derive(Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct PolyArg {
    /// Polynomial in X, Y0, Y1, Y2 (Y0 = j, Y1 = j', Y2 = j'').
    #[arg(value_name = "POLY", required_unless_present = "poly")]
    text: Option<String>,
    #[arg(long, conflicts_with = "text")]
    poly: Option<String>,
}

impl PolyArg {
    fn get(&self) -> Result<(String, MultiPoly)> {
        let s = self.poly.as_ref().or(self.text.as_ref()).cloned().unwrap_or_default();
        let p = parse_poly(&s)?;
        Ok((s, p))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the jet and F at a point.
    Eval {
        #[command(flatten)]
        poly: PolyArg,
        /// Point as "re,im".
        #[arg(long)]
        z: String,
    },
    /// Vanishing orders: predictions, measurements and the ratio scan.
    Orders {
        #[command(flatten)]
        poly: PolyArg,
        /// Extra unramified value j(tau) = u to predict at.
        #[arg(long)]
        u: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Order at i infinity in the fundamental domain of gamma.
    Growth {
        #[command(flatten)]
        poly: PolyArg,
        /// Matrix as "a,b,c,d".
        #[arg(long)]
        gamma: Option<String>,
    },
    /// Count and refine zeros in shifted regions, one certificate per m.
    Locate {
        #[command(flatten)]
        poly: PolyArg,
        /// Shifts as "a..b" (inclusive) or a comma list.
        #[arg(long)]
        mrange: String,
        /// Pole point: rho, i or "re,im". Chooses the pole route.
        #[arg(long)]
        at: Option<String>,
        /// Fundamental domain for the growth route, as "a,b,c,d".
        #[arg(long, conflicts_with = "at")]
        gamma: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Harvest certified witnesses and test the rank surrogate.
    Density {
        #[command(flatten)]
        poly: PolyArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Degree of the rank surrogate.
        #[arg(long, default_value_t = 2)]
        degree: u32,
    },
    /// Run a bundled worked example.
    Repro {
        #[arg(required_unless_present = "list")]
        id: Option<String>,
        #[arg(long)]
        list: bool,
    },
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Timings {
    total_ms: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Envelope {
    command: &'static str,
    input: String,
    verdict: Value,
    certificates: Vec<ZeroCertificate>,
    witnesses: Vec<Witness>,
    orbit_keys: Vec<ComplexText>,
    rank: Option<RankCheck>,
    precision: u32,
    seed: u64,
    timings: Timings,
    details: Value,
}

struct CsvRow {
    re: String,
    im: String,
    residual: f64,
    key: ComplexText,
}

struct Outcome {
    env: Envelope,
    rows: Vec<CsvRow>,
    ok: bool,
}

impl Outcome {
    fn new(command: &'static str, input: String, prec: u32, seed: u64) -> Self {
        Outcome {
            env: Envelope {
                command,
                input,
                verdict: json!({ "kind": "ok" }),
                certificates: Vec::new(),
                witnesses: Vec::new(),
                orbit_keys: Vec::new(),
                rank: None,
                precision: prec,
                seed,
                timings: Timings { total_ms: 0.0 },
                details: Value::Null,
            },
            rows: Vec::new(),
            ok: true,
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value> {
    serde_json::to_value(v).map_err(|e| Error::Internal(e.to_string()))
}

fn parse_point(s: &str, prec: u32) -> Result<UHPoint> {
    match s.trim() {
        "rho" => Ok(UHPoint::rho(prec)),
        "i" => Ok(UHPoint::i(prec)),
        t => {
            let (re, im) = t
                .split_once(',')
                .ok_or_else(|| Error::InvalidArgument(format!("point `{t}` is not of the form re,im")))?;
            UHPoint::parse(re.trim(), im.trim(), prec)
        }
    }
}

fn parse_gamma(s: &str) -> Result<Moebius> {
    let v: Vec<i64> = s
        .split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|e| Error::InvalidArgument(format!("gamma entry `{t}`: {e}"))))
        .collect::<Result<_>>()?;
    match v[..] {
        [a, b, c, d] => Moebius::new(a, b, c, d),
        _ => Err(Error::InvalidArgument(format!("gamma `{s}` needs four entries a,b,c,d"))),
    }
}

fn parse_mrange(s: &str) -> Result<Vec<i64>> {
    let int = |t: &str| -> Result<i64> {
        let t = t.trim();
        t.parse::<i64>()
            .or_else(|_| {
                t.parse::<f64>().ok().filter(|x| x.fract() == 0.0 && x.abs() < 9e15).map(|x| x as i64).ok_or(())
            })
            .map_err(|_| Error::InvalidArgument(format!("bad shift `{t}`")))
    };
    let ms: Vec<i64> = match s.split_once("..") {
        Some((a, b)) => (int(a)?..=int(b)?).collect(),
        None => s.split(',').map(int).collect::<Result<_>>()?,
    };
    if ms.is_empty() {
        return Err(Error::InvalidArgument(format!("mrange `{s}` is empty")));
    }
    Ok(ms)
}

fn key_row(z: &UHPoint, residual: f64, prec: u32) -> Result<CsvRow> {
    let jet = jet_anywhere(z, prec)?;
    let text: ComplexText = z.as_complex().into();
    Ok(CsvRow { re: text.re, im: text.im, residual, key: jet.j().into() })
}

fn growth_json(o: &GrowthOrder) -> Value {
    let (pe, pd) = o.paper_form();
    json!({
        "internal": { "e": o.e, "d": o.d, "convention": "f ~ alpha w^d q^e" },
        "paper": { "e": pe, "d": pd, "convention": "f ~ alpha w^(-d) q^e" },
        "alpha": o.alpha.to_string(),
        "exponentialGrowth": o.is_exponential_growth(),
    })
}

fn eval_cmd(poly: &PolyArg, z: &str, c: &Common) -> Result<Outcome> {
    let (text, f) = poly.get()?;
    let z = parse_point(z, c.prec)?;
    let jet = jet_anywhere(&z, c.prec)?;
    let (v, err) = eval_poly_with_jet(&f, z.as_complex(), &jet);
    let mut out = Outcome::new("eval", text, c.prec, 0);
    let names = ["j", "j'", "j''", "j'''"];
    let jets: Vec<Value> = (0..4)
        .map(|k| json!({ "name": names[k], "value": ComplexText::from(&jet.val[k]), "error": jet.err[k].to_f64() }))
        .collect();
    out.env.details = json!({
        "z": z,
        "jet": jets,
        "value": ComplexText::from(&v),
        "errorBound": err.to_f64(),
    });
    out.rows.push(key_row(&z, err.to_f64(), c.prec)?);
    Ok(out)
}

fn orders_cmd(poly: &PolyArg, u: Option<&str>, seed: u64, c: &Common) -> Result<Outcome> {
    let (text, f) = poly.get()?;
    let mut out = Outcome::new("orders", text, c.prec, seed);
    let mut preds = Vec::new();
    let mut measured = Vec::new();
    for at in [Elliptic::Rho, Elliptic::I] {
        preds.push(to_value(&predict_elliptic(&f, at)?)?);
        let m = measure_order(&f, &elliptic_point(at, c.prec), 0.05, c.prec)?;
        measured.push(json!({ "point": at.name(), "order": m }));
    }
    if let Some(u) = u {
        let val = parse_poly(u)?
            .constant_value()
            .ok_or_else(|| Error::InvalidArgument(format!("`{u}` is not a constant")))?;
        preds.push(to_value(&predict_unramified(&f, &val)?)?);
    }
    match predict_cusp(&f) {
        Ok(p) => preds.push(to_value(&p)?),
        Err(e) => preds.push(json!({ "location": { "kind": "cusp" }, "error": e.to_string() })),
    }
    let scan = scan_ratio_criteria(&f, c.prec, seed)?;
    out.env.details = json!({ "predictions": preds, "measured": measured, "scan": scan });
    Ok(out)
}

fn growth_cmd(poly: &PolyArg, gamma: Option<&str>, c: &Common) -> Result<Outcome> {
    let (text, f) = poly.get()?;
    let g = gamma.map(parse_gamma).transpose()?.unwrap_or(Moebius::IDENTITY);
    let o = order_in_domain(&f, &g)?;
    let mut out = Outcome::new("growth", text, c.prec, 0);
    out.env.details = json!({ "gamma": g, "order": growth_json(&o) });
    Ok(out)
}

fn locate_cmd(
    poly: &PolyArg,
    mrange: &str,
    at: Option<&str>,
    gamma: Option<&str>,
    seed: u64,
    c: &Common,
    exec: Exec,
) -> Result<Outcome> {
    let (text, f) = poly.get()?;
    let ms = parse_mrange(mrange)?;
    let opts = SearchOptions { prec: c.prec, exec, ..SearchOptions::default() };
    let mut out = Outcome::new("locate", text, c.prec, seed);
    let route = match (at, gamma) {
        (Some(a), _) => Criterion::Pole { k: 0, tau: parse_point(a, c.prec)?, label: a.into(), order: 0 },
        (None, Some(g)) => Criterion::Growth { k: 0, gamma: parse_gamma(g)?, e: 0, d: 0 },
        (None, None) => scan_ratio_criteria(&f, c.prec, seed)?
            .first
            .ok_or_else(|| Error::Inconclusive("no coefficient ratio has a pole or exponential growth".into()))?,
    };
    let certs = match &route {
        Criterion::Pole { tau, .. } => {
            let (plan, certs) = pole_shift_search_with(&f, tau, &ms, &opts)?;
            out.env.details = json!({ "route": route, "plan": plan });
            certs
        }
        Criterion::Growth { gamma, .. } => {
            out.env.details = json!({ "route": route });
            cusp_growth_search_with(&f, gamma, &ms, &opts)?
        }
    };
    for cert in &certs {
        for r in &cert.roots {
            out.rows.push(key_row(&r.z, r.residual, c.prec)?);
        }
    }
    let bad: Vec<i64> =
        certs.iter().zip(&ms).filter(|(k, _)| !k.matches_expected() || k.count < 1).map(|(_, m)| *m).collect();
    if !bad.is_empty() {
        out.ok = false;
        out.env.verdict = json!({ "kind": "inconclusive", "reason": format!("unexpected counts at m = {bad:?}") });
    } else {
        out.env.verdict = json!({ "kind": "certified" });
    }
    out.env.certificates = certs;
    Ok(out)
}

fn density_cmd(poly: &PolyArg, seed: u64, degree: u32, c: &Common, exec: Exec) -> Result<Outcome> {
    let (text, f) = poly.get()?;
    let budget = DensityBudget { prec: c.prec, seed, degree, exec, ..DensityBudget::default() };
    let r = run_pipeline(&f, &budget)?;
    let mut out = Outcome::new("density", text, c.prec, seed);
    out.ok = r.verdict == Verdict::DenseWitnessed;
    out.env.verdict = to_value(&r.verdict)?;
    for w in &r.witnesses {
        out.rows.push(CsvRow {
            re: ComplexText::from(w.z.as_complex()).re,
            im: ComplexText::from(w.z.as_complex()).im,
            residual: w.residual,
            key: w.orbit_key.clone(),
        });
    }
    out.env.details = json!({ "canonical": r.input, "notes": r.notes });
    out.env.certificates = r.certificates;
    out.env.witnesses = r.witnesses;
    out.env.orbit_keys = r.orbit_keys;
    out.env.rank = r.rank_check;
    Ok(out)
}

fn repro_cmd(id: Option<&str>, list: bool, c: &Common, exec: Exec) -> Result<Outcome> {
    if list {
        let mut out = Outcome::new("repro", String::new(), c.prec, 0);
        out.env.details = json!(EXAMPLES.iter().map(|(k, t)| json!({ "id": k, "title": t })).collect::<Vec<_>>());
        return Ok(out);
    }
    let id = id.unwrap_or_default();
    let r = run_example(id, c.prec, exec)?;
    let mut out = Outcome::new("repro", id.into(), c.prec, 0);
    out.ok = r.passed;
    out.env.verdict = json!({ "kind": if r.passed { "pass" } else { "fail" } });
    for k in &r.checks {
        eprintln!(
            "{} {}: expected {}, observed {}",
            if k.passed { "PASS" } else { "FAIL" },
            k.name,
            k.expected,
            k.observed
        );
    }
    out.env.details = to_value(&r)?;
    Ok(out)
}

fn render(out: &Outcome, format: Format) -> Result<String> {
    match format {
        Format::Json => serde_json::to_string_pretty(&out.env).map_err(|e| Error::Internal(e.to_string())),
        Format::Csv => {
            let mut s = String::from("re,im,residual,orbit_key_re,orbit_key_im\n");
            for r in &out.rows {
                s += &format!("{},{},{:e},{},{}\n", r.re, r.im, r.residual, r.key.re, r.key.im);
            }
            Ok(s)
        }
    }
}

fn write_out(text: &str, path: Option<&PathBuf>) -> Result<()> {
    match path {
        Some(p) => {
            let mut f = File::create(p).map_err(|e| Error::Internal(format!("{}: {e}", p.display())))?;
            f.write_all(text.as_bytes()).map_err(|e| Error::Internal(format!("{}: {e}", p.display())))?;
        }
        None => {
            let mut so = io::stdout().lock();
            so.write_all(text.as_bytes())?;
            if !text.ends_with('\n') {
                so.write_all(b"\n")?;
            }
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    let c = &cli.common;
    let exec = if c.sequential { Exec::Sequential } else { Exec::auto() };
    let start = Instant::now();
    let mut out = match &cli.command {
        Command::Eval { poly, z } => eval_cmd(poly, z, c)?,
        Command::Orders { poly, u, seed } => orders_cmd(poly, u.as_deref(), *seed, c)?,
        Command::Growth { poly, gamma } => growth_cmd(poly, gamma.as_deref(), c)?,
        Command::Locate { poly, mrange, at, gamma, seed } => {
            locate_cmd(poly, mrange, at.as_deref(), gamma.as_deref(), *seed, c, exec)?
        }
        Command::Density { poly, seed, degree } => density_cmd(poly, *seed, *degree, c, exec)?,
        Command::Repro { id, list } => repro_cmd(id.as_deref(), *list, c, exec)?,
    };
    out.env.timings.total_ms = start.elapsed().as_secs_f64() * 1e3;
    write_out(&render(&out, c.format)?, c.out.as_ref())?;
    Ok(out.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
