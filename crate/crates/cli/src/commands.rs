use std::path::Path;

use berndt_core::barnes::{barnes_integral, barnes_lattice_with_budget, zeta4_closed_form, BarnesSpec, DEFAULT_LATTICE_BUDGET};
use berndt_core::closedform::{
    assembled_c_coefficients, berndt_closed_form, closed_form_at_pi, closed_form_cosh3, formula_c_coefficients, ClosedForm, EllipticFamily,
};
use berndt_core::elliptic_core::{working_precision, BigComplex, BigReal};
use berndt_core::exactalg::rat_to_string;
use berndt_core::hyperseries::{series as eval_series, SeriesFamily};
use berndt_core::jacobi_maclaurin::{table, Family};
use berndt_core::verify::{berndt_quadrature, gamma_exponent_evidence, run_suite, Status, Suite, VerifyOptions, SCHEMA};
use clap::ValueEnum;
use serde_json::{json, Value};

use crate::parse::{parse_complex, parse_real, parse_sign};
use crate::{exit, ClosedKind, CmdResult, Failure, Format, Global, Route};

const BARNES_DIGITS: u32 = 30;
const LATTICE_DIGITS: u32 = 25;

/// Significant digits printed for values: at most 50, and never more than
/// the working precision supports.
pub fn out_digits(prec: usize) -> usize {
    ((prec as f64 * std::f64::consts::LOG10_2) as usize).min(50)
}

pub fn agrees(rel: &BigReal, digits: u32) -> bool {
    rel.is_zero() || rel.log10_abs() < -(digits as f64)
}

fn status(pass: bool) -> Status {
    if pass {
        Status::Pass
    } else {
        Status::Fail
    }
}

pub fn print_json(v: &Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("JSON value serializes"));
}

fn with_schema(command: &str, mut v: Value) -> Value {
    if let Value::Object(map) = &mut v {
        let mut out = serde_json::Map::new();
        out.insert("schema".into(), SCHEMA.into());
        out.insert("command".into(), command.into());
        out.extend(std::mem::take(map));
        return Value::Object(out);
    }
    v
}

pub fn kind_name(kind: ClosedKind) -> String {
    kind.to_possible_value().expect("no skipped variants").get_name().to_string()
}

pub fn coeffs(g: &Global, family: &str, max_index: usize) -> CmdResult {
    let fam: Family = family.parse().map_err(|_| Failure::usage(format!("unknown family {family:?}; expected S, A, P, Q or R")))?;
    let t = table(fam, max_index)?;
    match g.format {
        Format::Text => print!("{t}"),
        Format::Json => print_json(&with_schema("coeffs", t.to_json())),
        Format::Latex => println!("\\begin{{align*}}\n{}\n\\end{{align*}}", t.latex()),
    }
    Ok(exit::PASS)
}

fn tex_arg(s: &str) -> String {
    s.replace("pi", "\\pi").replace('*', "")
}

pub fn series(g: &Global, family: &str, p: i64, m: u32, y: &str) -> CmdResult {
    let fam: SeriesFamily = family.parse().map_err(|_| {
        Failure::usage(format!("unknown series family {family:?}; expected one of G, Gprime, Gbar, X, Xprime, DXprime, Y, DY, B, DB"))
    })?;
    let yv = parse_real(y, g.prec_bits).ok_or_else(|| Failure::usage(format!("cannot parse y = {y:?}")))?;
    let v = eval_series(fam, p, m, &yv, g.prec_bits)?;
    let value = v.to_decimal(out_digits(g.prec_bits));
    match g.format {
        Format::Text => println!("{fam}_{{{p},{m}}}({y}) = {value}"),
        Format::Json => print_json(&json!({
            "schema": SCHEMA,
            "command": "series",
            "family": fam.name(),
            "p": p,
            "m": m,
            "y": y,
            "precision_bits": g.prec_bits,
            "value": value,
        })),
        Format::Latex => println!("{} \\approx {value}", fam.latex_sum(p, m, &tex_arg(y))),
    }
    Ok(exit::PASS)
}

/// The closed form selected by `kind` with a one-line description.
pub fn closed_form_for(kind: ClosedKind, m: u32) -> Result<(ClosedForm, String, String), Failure> {
    let p = 4 * m as i64 - 1;
    let at_pi = |fam: EllipticFamily| -> Result<(ClosedForm, String, String), Failure> {
        let (sf, mm) = fam.series();
        Ok((closed_form_at_pi(fam, m)?, format!("{sf}_{{{p},{mm}}}(pi)"), sf.latex_sum(p, mm, "\\pi")))
    };
    match kind {
        ClosedKind::G2 => at_pi(EllipticFamily::G2),
        ClosedKind::Gprime2 => at_pi(EllipticFamily::Gprime2),
        ClosedKind::Gbar1 => at_pi(EllipticFamily::Gbar1),
        ClosedKind::Xprime3 => at_pi(EllipticFamily::Xprime3),
        ClosedKind::Cosh3 => Ok((
            closed_form_cosh3(m)?,
            format!("sum_{{n>=1}} (-1)^n (2n-1)^{p} / cosh^3((2n-1)pi/2)"),
            format!("\\sum_{{n\\ge 1}} \\frac{{(-1)^n (2n-1)^{{{p}}}}}{{\\cosh^{{3}}(\\tfrac{{(2n-1)\\pi}}{{2}})}}"),
        )),
        ClosedKind::Berndt => Ok((
            berndt_closed_form(m)?,
            format!("int_0^inf x^{p} dx / [(cosh 2x - cos 2x)(cosh x + cos x)]"),
            format!("\\int_0^{{\\infty}} \\frac{{x^{{{p}}}\\,\\mathrm{{d}}x}}{{[\\cosh(2x)-\\cos(2x)][\\cosh x+\\cos x]}}"),
        )),
        ClosedKind::Zeta4 => Ok((
            zeta4_closed_form(m)?,
            format!("zeta_4({}, 3 | 2+2i, 2-2i, 1+i, 1-i; +, +, -, -)", 4 * m),
            format!("\\zeta_4({}, 3 \\mid 2+2i, 2-2i, 1+i, 1-i; +, +, -, -)", 4 * m),
        )),
        ClosedKind::CCoefficients => unreachable!("handled separately"),
    }
}

pub fn closed_form(g: &Global, kind: ClosedKind, m: u32) -> CmdResult {
    if m == 0 {
        return Err(Failure::usage("--m must be at least 1"));
    }
    if kind == ClosedKind::CCoefficients {
        return c_coefficients(g, m);
    }
    let (form, text, tex) = closed_form_for(kind, m)?;
    let value = form.eval(g.prec_bits).to_decimal(out_digits(g.prec_bits));
    match g.format {
        Format::Text => println!("{text}\n  = {form}\n  ~ {value}"),
        Format::Json => print_json(&json!({
            "schema": SCHEMA,
            "command": "closed-form",
            "kind": kind_name(kind),
            "m": m,
            "statement": text,
            "closed_form": form.to_terms(),
            "text": form.to_string(),
            "latex": form.latex(),
            "precision_bits": g.prec_bits,
            "value": value,
        })),
        Format::Latex => println!("{tex} = {} \\approx {value}", form.latex()),
    }
    Ok(exit::PASS)
}

fn c_coefficients(g: &Global, m: u32) -> CmdResult {
    let assembled = assembled_c_coefficients(m)?;
    let formula = formula_c_coefficients(m)?;
    let names = ["c1", "c2", "c3", "c4", "c5"];
    match g.format {
        Format::Text => {
            for (i, n) in names.iter().enumerate() {
                let (a, f) = (&assembled.c[i], &formula.c[i]);
                let mark = if a == f { "agrees".to_string() } else { format!("coefficient formula gives {}", rat_to_string(f)) };
                println!("{n} = {} ({mark})", rat_to_string(a));
            }
        }
        Format::Json => print_json(&json!({
            "schema": SCHEMA,
            "command": "closed-form",
            "kind": "c-coefficients",
            "m": m,
            "assembled": assembled.c.iter().map(rat_to_string).collect::<Vec<_>>(),
            "formula": formula.c.iter().map(rat_to_string).collect::<Vec<_>>(),
            "agree": assembled.c.iter().zip(&formula.c).map(|(a, f)| a == f).collect::<Vec<_>>(),
        })),
        Format::Latex => {
            let rows: Vec<String> =
                names.iter().zip(&assembled.c).map(|(n, c)| format!("c_{{{},{m}}} &= {} \\\\", &n[1..], rat_to_string(c))).collect();
            println!("\\begin{{align*}}\n{}\n\\end{{align*}}", rows.join("\n"));
        }
    }
    Ok(exit::PASS)
}

pub fn integral(g: &Global, m: u32) -> CmdResult {
    if m == 0 {
        return Err(Failure::usage("--m must be at least 1"));
    }
    let prec = g.prec_bits;
    let d = out_digits(prec);
    let quad = berndt_quadrature(m, prec)?;
    let form = berndt_closed_form(m)?;
    let cf = form.eval(prec);
    let rel = BigReal::rel_diff(&quad, &cf);
    let pass = agrees(&rel, g.tolerance_digits);
    let note = if m == 2 { Some(gamma_exponent_evidence(&quad, prec)?.note()) } else { None };
    match g.format {
        Format::Json => print_json(&json!({
            "schema": SCHEMA,
            "command": "integral",
            "m": m,
            "p": 4 * m - 1,
            "precision_bits": prec,
            "quadrature": quad.to_decimal(d),
            "closed_form": form.to_terms(),
            "closed_form_text": form.to_string(),
            "closed_form_value": cf.to_decimal(d),
            "rel_residual": rel.to_decimal(6),
            "tolerance": format!("1e-{}", g.tolerance_digits),
            "status": status(pass),
            "note": note,
        })),
        _ => {
            let p = 4 * m - 1;
            println!("int_0^inf x^{p} dx / [(cosh 2x - cos 2x)(cosh x + cos x)]");
            println!("  quadrature   = {}", quad.to_decimal(d));
            println!("  closed form  = {form}");
            println!("               = {}", cf.to_decimal(d));
            println!("  rel residual = {}", rel.to_decimal(6));
            println!("  status       = {}", status(pass));
            if let Some(n) = note {
                println!("  note: {n}");
            }
        }
    }
    Ok(if pass { exit::PASS } else { exit::VERIFY_FAIL })
}

pub fn verify(g: &Global, suite: &str, out: Option<&Path>, timings: bool) -> CmdResult {
    let suite: Suite = suite.parse().map_err(|_| {
        Failure::usage(format!(
            "unknown suite {suite:?}; expected residues, transforms, elliptic, closedforms, integrals, barnes, tables, infrastructure or all"
        ))
    })?;
    if g.prec_bits < 128 {
        return Err(Failure::usage(format!("verify needs --prec-bits >= 128, got {}", g.prec_bits)));
    }
    let opts = VerifyOptions { precision: g.prec_bits, seed: g.seed, tolerance_digits: g.tolerance_digits };
    let report = run_suite(suite, &opts, timings)?;
    let text = report.to_json();
    if let Some(path) = out {
        std::fs::write(path, format!("{text}\n")).map_err(|e| Failure::io(path, e))?;
    }
    match g.format {
        Format::Json => println!("{text}"),
        Format::Text => {
            for it in &report.items {
                let params: Vec<String> = it.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let note = it.note.as_deref().map(|n| format!("  [{n}]")).unwrap_or_default();
                println!(
                    "{:<7} {:<36} {:<40} rel={} tol={}{note}",
                    it.status,
                    it.identity_id,
                    params.join(" "),
                    it.rel_residual,
                    it.tolerance
                );
            }
            let s = &report.summary;
            println!("{}: {} pass, {} fail, {} skipped", report.suite, s.pass, s.fail, s.skipped);
        }
        Format::Latex => {
            println!("\\begin{{tabular}}{{llll}}");
            println!("identity & parameters & relative residual & status \\\\ \\hline");
            for it in &report.items {
                let params: Vec<String> = it.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
                println!(
                    "\\texttt{{{}}} & {} & {} & {} \\\\",
                    it.identity_id,
                    params.join(", ").replace('_', "\\_"),
                    it.rel_residual,
                    it.status
                );
            }
            println!("\\end{{tabular}}");
        }
    }
    Ok(if report.all_passed() { exit::PASS } else { exit::VERIFY_FAIL })
}

pub struct BarnesArgs<'a> {
    pub m: Option<u32>,
    pub s: Option<u32>,
    pub w: Option<&'a str>,
    pub periods: &'a [String],
    pub signs: &'a [String],
    pub route: Route,
    pub lattice_bits: usize,
}

fn barnes_spec(a: &BarnesArgs, prec: usize) -> Result<BarnesSpec, Failure> {
    let wp = working_precision(prec);
    if let Some(m) = a.m {
        return Ok(BarnesSpec::berndt(m, wp)?);
    }
    let s = a.s.ok_or_else(|| Failure::usage("give --m, or --s with --periods and --signs"))?;
    if a.periods.is_empty() {
        return Err(Failure::usage("--periods is required without --m"));
    }
    if a.periods.len() != a.signs.len() {
        return Err(Failure::usage("--periods and --signs must have the same length"));
    }
    let w = a.w.unwrap_or("1");
    let w = parse_complex(w, wp).ok_or_else(|| Failure::usage(format!("cannot parse w = {w:?}")))?;
    let periods = a
        .periods
        .iter()
        .map(|p| parse_complex(p, wp).ok_or_else(|| Failure::usage(format!("cannot parse period {p:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    let signs = a
        .signs
        .iter()
        .map(|t| parse_sign(t).ok_or_else(|| Failure::usage(format!("cannot parse sign {t:?}"))))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(BarnesSpec::new(s, w, periods, signs)?)
}

fn complex_json(z: &BigComplex, d: usize) -> Value {
    json!({ "re": z.re.to_decimal(d), "im": z.im.to_decimal(d) })
}

pub fn barnes(g: &Global, a: &BarnesArgs) -> CmdResult {
    if a.lattice_bits < 32 {
        return Err(Failure::usage("--lattice-bits must be at least 32"));
    }
    let prec = g.prec_bits;
    let d = out_digits(prec);
    let spec = barnes_spec(a, prec)?;
    let closed = match a.m {
        Some(m) => Some(zeta4_closed_form(m)?),
        None => None,
    };
    let integral = match a.route {
        Route::Integral | Route::Both => Some(barnes_integral(&spec, prec)?),
        Route::Lattice => None,
    };
    let lattice = match a.route {
        Route::Lattice | Route::Both => {
            let lspec = barnes_spec(a, a.lattice_bits)?;
            Some(barnes_lattice_with_budget(&lspec, a.lattice_bits, DEFAULT_LATTICE_BUDGET)?)
        }
        Route::Integral => None,
    };
    let ld = out_digits(a.lattice_bits);
    let mut checks = Vec::new();
    let closed_value = closed.as_ref().map(|c| c.eval(prec));
    if let (Some(cv), Some(z)) = (&closed_value, &integral) {
        let rel = BigReal::rel_diff(&z.re, cv);
        let digits = g.tolerance_digits.min(BARNES_DIGITS);
        checks.push(("integral-vs-closed-form", rel.clone(), digits, agrees(&rel, digits)));
    }
    if let (Some(cv), Some(l)) = (&closed_value, &lattice) {
        let rel = BigReal::rel_diff(&l.value.re.round_to(working_precision(prec)), cv);
        let digits = g.tolerance_digits.min(LATTICE_DIGITS);
        checks.push(("lattice-vs-closed-form", rel.clone(), digits, agrees(&rel, digits)));
    }
    if let (Some(z), Some(l)) = (&integral, &lattice) {
        let lv = BigComplex::new(l.value.re.round_to(working_precision(prec)), l.value.im.round_to(working_precision(prec)));
        let rel = BigComplex::rel_diff(z, &lv);
        let digits = g.tolerance_digits.min(LATTICE_DIGITS);
        checks.push(("lattice-vs-integral", rel.clone(), digits, agrees(&rel, digits)));
    }
    let pass = checks.iter().all(|c| c.3);
    match g.format {
        Format::Json => print_json(&json!({
            "schema": SCHEMA,
            "command": "barnes",
            "s": spec.s,
            "w": complex_json(&spec.w, 6),
            "periods": spec.periods.iter().map(|p| complex_json(p, 6)).collect::<Vec<_>>(),
            "signs": spec.signs,
            "precision_bits": prec,
            "integral": integral.as_ref().map(|z| complex_json(z, d)),
            "lattice": lattice.as_ref().map(|l| json!({
                "value": complex_json(&l.value, ld),
                "error_estimate": l.error_estimate.to_decimal(3),
                "box_size": l.box_size,
                "points": l.points,
                "precision_bits": a.lattice_bits,
            })),
            "closed_form": closed.as_ref().map(|c| c.to_terms()),
            "closed_form_value": closed_value.as_ref().map(|v| v.to_decimal(d)),
            "checks": checks.iter().map(|(id, rel, digits, ok)| json!({
                "id": id,
                "rel_residual": rel.to_decimal(6),
                "tolerance": format!("1e-{digits}"),
                "status": status(*ok),
            })).collect::<Vec<_>>(),
        })),
        _ => {
            println!("s = {}, periods = {}, signs = {:?}", spec.s, a.periods.join(","), spec.signs);
            if let Some(z) = &integral {
                println!("  integral route = {} + {} i", z.re.to_decimal(d), z.im.to_decimal(6));
            }
            if let Some(l) = &lattice {
                println!(
                    "  lattice route  = {} + {} i  (box {}, {} points, {} bits)",
                    l.value.re.to_decimal(ld),
                    l.value.im.to_decimal(6),
                    l.box_size,
                    l.points,
                    a.lattice_bits
                );
            }
            if let (Some(c), Some(v)) = (&closed, &closed_value) {
                println!("  closed form    = {c}");
                println!("                 = {}", v.to_decimal(d));
            }
            for (id, rel, digits, ok) in &checks {
                println!("  {id}: rel residual {} (tolerance 1e-{digits}) {}", rel.to_decimal(6), status(*ok));
            }
        }
    }
    Ok(if pass { exit::PASS } else { exit::VERIFY_FAIL })
}
