//! The document of worked examples: each closed form with its value and the
//! independent computation it was checked against.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use berndt_core::barnes::{barnes_integral, BarnesSpec};
use berndt_core::closedform::{assembled_c_coefficients, formula_c_coefficients, ClosedForm, ClosedFormTerm, EllipticFamily};
use berndt_core::elliptic_core::{working_precision, BigReal};
use berndt_core::exactalg::{factorial, rat_to_string};
use berndt_core::hyperseries::{contour_identity_value, series, SeriesFamily};
use berndt_core::verify::{berndt_quadrature, gamma_exponent_evidence, Status, SCHEMA};
use serde::Serialize;

use crate::commands::{agrees, closed_form_for, kind_name, out_digits};
use crate::{exit, ClosedKind, CmdResult, Failure, Format, Global};

const CONTOUR_DIGITS: u32 = 35;
const BARNES_DIGITS: u32 = 30;

#[derive(Serialize)]
pub struct Check {
    pub method: String,
    pub value: String,
    pub rel_residual: String,
    pub tolerance: String,
    pub status: Status,
}

#[derive(Serialize)]
pub struct Entry {
    pub id: String,
    pub section: String,
    pub kind: String,
    pub m: u32,
    pub statement: String,
    pub statement_latex: String,
    pub closed_form: Vec<ClosedFormTerm>,
    pub closed_form_text: String,
    pub closed_form_latex: String,
    pub value: String,
    pub checks: Vec<Check>,
    pub status: Status,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

#[derive(Serialize)]
pub struct Document {
    pub schema: &'static str,
    pub kind: &'static str,
    pub precision_bits: usize,
    pub tolerance_digits: u32,
    pub gamma: &'static str,
    pub entries: Vec<Entry>,
    pub summary: BTreeMap<&'static str, usize>,
}

struct Builder<'a> {
    g: &'a Global,
    digits: usize,
    entries: Vec<Entry>,
}

impl Builder<'_> {
    fn check(&self, method: &str, value: &BigReal, reference: &BigReal, digits: u32) -> Check {
        let rel = BigReal::rel_diff(value, reference);
        let ok = agrees(&rel, digits);
        Check {
            method: method.into(),
            value: value.to_decimal(self.digits),
            rel_residual: rel.to_decimal(6),
            tolerance: format!("1e-{digits}"),
            status: if ok { Status::Pass } else { Status::Fail },
        }
    }

    fn failed(&self, method: &str, e: impl std::fmt::Display) -> Check {
        Check {
            method: format!("{method}: {e}"),
            value: String::new(),
            rel_residual: String::new(),
            tolerance: String::new(),
            status: Status::Fail,
        }
    }

    fn push(&mut self, section: &str, kind: ClosedKind, m: u32, checks: Vec<Check>, notes: Vec<String>) -> Result<(), Failure> {
        let (form, text, tex) = closed_form_for(kind, m)?;
        let status = if checks.iter().all(|c| c.status == Status::Pass) { Status::Pass } else { Status::Fail };
        self.entries.push(Entry {
            id: format!("{}-m{m}", kind_name(kind)),
            section: section.into(),
            kind: kind_name(kind),
            m,
            statement: text,
            statement_latex: tex,
            closed_form: form.to_terms(),
            closed_form_text: form.to_string(),
            closed_form_latex: form.latex(),
            value: form.eval(self.g.prec_bits).to_decimal(self.digits),
            checks,
            status,
            notes,
        });
        Ok(())
    }
}

fn tol(g: &Global, cap: u32) -> u32 {
    g.tolerance_digits.min(cap)
}

/// Computes every entry. Quadratures are shared between the integral and
/// Barnes sections.
pub fn build(g: &Global) -> Result<Document, Failure> {
    let prec = g.prec_bits;
    let mut b = Builder { g, digits: out_digits(prec), entries: Vec::new() };
    let pi = BigReal::pi(working_precision(prec));

    let lemniscatic = [
        (ClosedKind::G2, EllipticFamily::G2),
        (ClosedKind::Gprime2, EllipticFamily::Gprime2),
        (ClosedKind::Gbar1, EllipticFamily::Gbar1),
        (ClosedKind::Xprime3, EllipticFamily::Xprime3),
    ];
    for (kind, fam) in lemniscatic {
        for m in [1u32, 2] {
            let (sf, mm) = fam.series();
            let cf = closed_form_for(kind, m)?.0.eval(prec);
            let check = match series(sf, 4 * m as i64 - 1, mm, &pi, prec) {
                Ok(s) => b.check("series summation", &s, &cf, g.tolerance_digits),
                Err(e) => b.failed("series summation", e),
            };
            b.push("Hyperbolic series at y = pi", kind, m, vec![check], Vec::new())?;
        }
    }

    for m in [1u32, 2] {
        let cf = closed_form_for(ClosedKind::Cosh3, m)?.0.eval(prec);
        let check = match series(SeriesFamily::Xprime, 4 * m as i64 - 1, 3, &pi, prec) {
            Ok(s) => b.check("series summation", &s, &cf, g.tolerance_digits),
            Err(e) => b.failed("series summation", e),
        };
        b.push("Cubed hyperbolic cosine sums", ClosedKind::Cosh3, m, vec![check], Vec::new())?;
    }

    let mut quadratures = BTreeMap::new();
    for m in 1u32..=3 {
        let form = closed_form_for(ClosedKind::Berndt, m)?.0;
        let cf = form.eval(prec);
        let mut checks = Vec::new();
        let mut notes = Vec::new();
        match berndt_quadrature(m, prec) {
            Ok(q) => {
                checks.push(b.check("Gauss-Legendre quadrature", &q, &cf, g.tolerance_digits));
                if m == 2 {
                    notes.push(gamma_exponent_evidence(&q, prec)?.note());
                }
                quadratures.insert(m, q);
            }
            Err(e) => checks.push(b.failed("Gauss-Legendre quadrature", e)),
        }
        match contour_identity_value(4 * m as i64 - 1, prec) {
            Ok(c) => {
                checks.push(b.check("half the contour-integration combination", &c.re.div_i64(2), &cf, tol(g, CONTOUR_DIGITS)));
                notes.push(format!("imaginary part of the contour combination: {}", c.im.to_decimal(6)));
            }
            Err(e) => checks.push(b.failed("contour-integration combination", e)),
        }
        let assembled = assembled_c_coefficients(m)?;
        let formula = formula_c_coefficients(m)?;
        let list = |c: &[berndt_core::exactalg::Rational; 5]| c.iter().map(rat_to_string).collect::<Vec<_>>().join(", ");
        notes.push(format!("five constants c1..c5 of the closed form: {}", list(&assembled.c)));
        if assembled != formula {
            notes.push(format!("the coefficient formulas give {}; the differing entries are not used", list(&formula.c)));
        }
        b.push("Berndt-type integrals", ClosedKind::Berndt, m, checks, notes)?;
    }

    for m in [1u32, 2] {
        let cf = closed_form_for(ClosedKind::Zeta4, m)?.0.eval(prec);
        let mut checks = Vec::new();
        let mut notes = Vec::new();
        match BarnesSpec::berndt(m, working_precision(prec)).and_then(|s| barnes_integral(&s, prec)) {
            Ok(z) => {
                checks.push(b.check("integral representation", &z.re, &cf, tol(g, BARNES_DIGITS)));
                if let Some(q) = quadratures.get(&m) {
                    let g4m = BigReal::from_bigint(&factorial(4 * m - 1), working_precision(prec));
                    let ratio = q / &(&g4m * &z.re);
                    notes.push(format!(
                        "integral / (Gamma({}) zeta_4) = {} computed from quadrature and the integral representation",
                        4 * m,
                        ratio.to_decimal(30)
                    ));
                }
            }
            Err(e) => checks.push(b.failed("integral representation", e)),
        }
        b.push("Barnes zeta values", ClosedKind::Zeta4, m, checks, notes)?;
    }

    let mut summary = BTreeMap::new();
    for key in ["pass", "fail", "skipped"] {
        summary.insert(key, 0);
    }
    for e in &b.entries {
        *summary.get_mut(e.status.to_string().as_str()).expect("status key") += 1;
    }
    Ok(Document {
        schema: SCHEMA,
        kind: "report",
        precision_bits: prec,
        tolerance_digits: g.tolerance_digits,
        gamma: "Gamma = Gamma(1/4)",
        entries: b.entries,
        summary,
    })
}

/// Splits a closed form into LaTeX lines of at most three terms, with the
/// leading sign of each term.
pub fn latex_lines(form: &ClosedForm) -> Vec<String> {
    let terms = form.terms();
    if terms.is_empty() {
        return vec!["0".into()];
    }
    let mut lines = Vec::new();
    let mut cur = String::new();
    for (i, (mono, c)) in terms.iter().enumerate() {
        let neg = c < &berndt_core::exactalg::rint(0);
        let mag = if neg { -c.clone() } else { c.clone() };
        let t = ClosedForm::monomial(mag, mono.gamma_exp, mono.pi_half_exp, mono.two_half_exp).latex();
        if i == 0 {
            cur.push_str(if neg { "-" } else { "" });
        } else {
            cur.push_str(if neg { " - " } else { " + " });
        }
        cur.push_str(&t);
        if (i + 1) % 3 == 0 && i + 1 < terms.len() {
            lines.push(std::mem::take(&mut cur));
        }
    }
    lines.push(cur);
    lines.into_iter().map(|l| l.trim_start().to_string()).collect()
}

fn latex_escape(s: &str) -> String {
    s.replace('_', "\\_").replace('^', "\\^{}")
}

pub fn latex(doc: &Document) -> Result<String, Failure> {
    let mut out = String::new();
    out.push_str("\\documentclass{article}\n\\usepackage{amsmath}\n\\usepackage[margin=2cm]{geometry}\n\\begin{document}\n");
    out.push_str(&format!("\\noindent Worked examples at {} bits. Here $\\Gamma = \\Gamma(1/4)$.\n", doc.precision_bits));
    let mut section = "";
    for e in &doc.entries {
        if e.section != section {
            section = &e.section;
            out.push_str(&format!("\n\\section*{{{}}}\n", latex_escape(section)));
        }
        let form = ClosedForm::from_terms(&e.closed_form).map_err(|m| Failure { code: exit::INTERNAL, message: m })?;
        let lines = latex_lines(&form);
        out.push_str(&format!("\n\\paragraph{{\\texttt{{{}}}}}\n\\begin{{align*}}\n", latex_escape(&e.id)));
        out.push_str(&format!("{} &= {}", e.statement_latex, lines[0]));
        for l in &lines[1..] {
            out.push_str(&format!("\\\\\n&\\quad {l}"));
        }
        out.push_str(&format!("\\\\\n&\\approx {}\n\\end{{align*}}\n", e.value));
        for c in &e.checks {
            out.push_str(&format!(
                "{}: relative residual {} (tolerance {}), \\textbf{{{}}}.\\\\\n",
                latex_escape(&c.method),
                c.rel_residual,
                c.tolerance,
                c.status
            ));
        }
        for n in &e.notes {
            out.push_str(&format!("{}\\\\\n", latex_escape(n)));
        }
    }
    out.push_str("\n\\end{document}\n");
    Ok(out)
}

fn format_for(g: &Global, path: &Path) -> Format {
    match g.format {
        Format::Text => {
            if path.extension().is_some_and(|e| e == "tex") {
                Format::Latex
            } else {
                Format::Json
            }
        }
        f => f,
    }
}

pub fn write(g: &Global, path: &Path) -> CmdResult {
    let mut file = std::fs::File::create(path).map_err(|e| Failure::io(path, e))?;
    let doc = build(g)?;
    let body = match format_for(g, path) {
        Format::Latex => latex(&doc)?,
        _ => format!("{}\n", serde_json::to_string_pretty(&doc).expect("report serializes")),
    };
    file.write_all(body.as_bytes()).map_err(|e| Failure::io(path, e))?;
    let fails = doc.summary["fail"];
    println!("wrote {} ({} entries, {} failing)", path.display(), doc.entries.len(), fails);
    Ok(if fails == 0 { exit::PASS } else { exit::VERIFY_FAIL })
}

#[cfg(test)]
mod tests {
    use super::*;
    use berndt_core::closedform::berndt_closed_form;

    #[test]
    fn m1_block_lines() {
        let lines = latex_lines(&berndt_closed_form(1).unwrap());
        assert_eq!(
            lines,
            vec![
                "\\frac{\\Gamma^{12}}{16384\\pi^5} - \\frac{\\Gamma^{10}}{4096\\sqrt{2}\\pi^{7/2}} + \\frac{\\Gamma^8}{2048\\pi^2}",
                "- \\frac{3\\Gamma^6}{512\\sqrt{2}\\pi^{3/2}} + \\frac{3\\Gamma^4}{256\\pi}",
            ]
        );
    }
}
