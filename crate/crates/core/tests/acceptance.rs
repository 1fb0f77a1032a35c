//! Acceptance checks, one PASS/FAIL line per criterion.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use berndt_core::closedform::berndt_closed_form;
use berndt_core::elliptic_core::BigReal;
use berndt_core::verify::{self, ReportItem, Status, VerifyOptions};

const PREC: usize = 256;
const INTEGRAL_SECONDS: f64 = 60.0;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn opts() -> VerifyOptions {
    VerifyOptions { precision: PREC, seed: 0, tolerance_digits: 40 }
}

fn failures(items: &[ReportItem]) -> Vec<String> {
    items
        .iter()
        .filter(|i| i.status == Status::Fail)
        .map(|i| format!("{} {:?} rel {} {}", i.identity_id, i.parameters, i.rel_residual, i.note.clone().unwrap_or_default()))
        .collect()
}

fn judge(items: &[ReportItem], extra: &str) -> Outcome {
    let bad = failures(items);
    let passed = items.iter().filter(|i| i.status == Status::Pass).count();
    let skipped = items.iter().filter(|i| i.status == Status::Skipped).count();
    let mut detail = format!("{passed} pass, {} fail, {skipped} skipped", bad.len());
    if !extra.is_empty() {
        detail.push_str("; ");
        detail.push_str(extra);
    }
    for b in &bad {
        detail.push_str("\n    ");
        detail.push_str(b);
    }
    Outcome { pass: bad.is_empty() && !items.is_empty(), detail }
}

fn by_tag(items: &[ReportItem], tags: &[&str]) -> Vec<ReportItem> {
    items.iter().filter(|i| tags.contains(&i.tag.as_str())).cloned().collect()
}

fn criterion_1() -> Outcome {
    let tol = BigReal::from_i64(10, PREC).powi(-40);
    let mut ok = true;
    let mut parts = Vec::new();
    let mut quad2 = None;
    for m in 1u32..=3 {
        let start = Instant::now();
        let quad = match verify::berndt_quadrature(m, PREC) {
            Ok(q) => q,
            Err(e) => return Outcome { pass: false, detail: format!("m = {m}: {e}") },
        };
        let secs = start.elapsed().as_secs_f64();
        let cf = match berndt_closed_form(m) {
            Ok(c) => c.eval(PREC),
            Err(e) => return Outcome { pass: false, detail: format!("m = {m}: {e}") },
        };
        let rel = BigReal::rel_diff(&quad, &cf);
        let good = rel < tol && secs < INTEGRAL_SECONDS;
        ok &= good;
        parts.push(format!("m = {m}: rel {} in {secs:.1} s", rel.to_decimal(3)));
        if m == 2 {
            quad2 = Some(quad);
        }
    }
    match verify::gamma_exponent_evidence(quad2.as_ref().expect("m = 2 ran"), PREC) {
        Ok(ev) => {
            ok &= ev.rel_correct < ev.rel_alt && ev.rel_correct < tol;
            parts.push(ev.note());
        }
        Err(e) => {
            ok = false;
            parts.push(e.to_string());
        }
    }
    Outcome { pass: ok, detail: parts.join("; ") }
}

fn criterion_2() -> Outcome {
    let items = verify::closedforms(&opts());
    judge(&by_tag(&items, &["lemniscatic-closed-form", "cosh-cubed-closed-form"]), "")
}

fn criterion_3() -> Outcome {
    let items = by_tag(&verify::elliptic(&opts()), &["elliptic-expression"]);
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for i in &items {
        *counts.entry(i.identity_id.clone()).or_default() += 1;
    }
    let mut out = judge(&items, &format!("instances per family {counts:?}"));
    out.pass &= counts.values().all(|&n| n == 12);
    out
}

fn criterion_4() -> Outcome {
    let items = verify::residues(&VerifyOptions { precision: 200, ..opts() });
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for i in &items {
        *counts.entry(i.identity_id.clone()).or_default() += 1;
    }
    let mut out = judge(&items, &format!("rows per identity at 200 bits {counts:?}"));
    out.pass &= counts.len() == 3 && counts.values().all(|&n| n >= verify::SAMPLES_PER_IDENTITY);
    out
}

fn criterion_5() -> Outcome {
    judge(&verify::transforms(&opts()), "")
}

fn criterion_6() -> Outcome {
    judge(&by_tag(&verify::integrals(&opts()), &["contour-identity"]), "p = 3, 7, 11")
}

fn criterion_7() -> Outcome {
    judge(&verify::tables(&opts()), "")
}

fn criterion_8() -> Outcome {
    let items = verify::barnes(&opts());
    let ratios: Vec<String> = items.iter().filter(|i| i.identity_id == "barnes-prefactor-four").filter_map(|i| i.note.clone()).collect();
    let mut out = judge(&items, &ratios.join("; "));
    out.pass &= ratios.len() == 2 && items.iter().any(|i| i.identity_id == "barnes-lattice-vs-integral");
    out
}

fn criterion_9() -> Outcome {
    judge(&verify::infrastructure(&opts()), "")
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("integral closed forms for m = 1, 2, 3 and the Gamma exponent at m = 2", criterion_1),
        ("series closed forms at y = pi for m = 1, 2", criterion_2),
        ("series against elliptic expressions at generic modulus", criterion_3),
        ("residue identities on seeded triples", criterion_4),
        ("modular transformations", criterion_5),
        ("contour identity against twice the quadrature", criterion_6),
        ("coefficient table integrity and calibration", criterion_7),
        ("Barnes zeta integral route, lattice route and prefactor", criterion_8),
        ("AGM, K, Gamma(1/4), modular point and derivative checks", criterion_9),
    ];
    let mut all = true;
    for (n, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = f();
        all &= out.pass;
        println!(
            "{} criterion {}: {name} ({:.1} s): {}",
            if out.pass { "PASS" } else { "FAIL" },
            n + 1,
            start.elapsed().as_secs_f64(),
            out.detail
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
