//! Browser bindings: coefficient tables, series values and the integral check.

use berndt_core::closedform::berndt_closed_form;
use berndt_core::elliptic_core::{working_precision, BigReal};
use berndt_core::hyperseries::{series, SeriesFamily};
use berndt_core::jacobi_maclaurin::{table, Family};
use berndt_core::verify::berndt_quadrature;
use wasm_bindgen::prelude::*;

const MIN_BITS: usize = 64;
const MAX_BITS: usize = 1024;
const MAX_INDEX: usize = 40;

fn err(e: impl ToString) -> JsValue {
    JsValue::from_str(&e.to_string())
}

fn digits(prec: usize) -> usize {
    ((prec as f64 * std::f64::consts::LOG10_2) as usize).min(60)
}

fn check_bits(prec: usize) -> Result<(), JsValue> {
    if (MIN_BITS..=MAX_BITS).contains(&prec) {
        Ok(())
    } else {
        Err(err(format!("precision must lie in {MIN_BITS}..={MAX_BITS} bits")))
    }
}

/// `y` as a decimal, `pi`, or `k*pi` / `pi/k` with decimal `k`.
fn parse_y(s: &str, prec: usize) -> Option<BigReal> {
    let wp = working_precision(prec);
    let s = s.trim();
    let pi = BigReal::pi(wp);
    if s == "pi" {
        return Some(pi);
    }
    if let Some(d) = s.strip_prefix("pi/") {
        return Some(pi / BigReal::parse(d, wp)?);
    }
    if let Some(k) = s.strip_suffix("*pi") {
        return Some(BigReal::parse(k, wp)? * pi);
    }
    BigReal::parse(s, wp)
}

/// Coefficient polynomial table for family `S`, `A`, `P`, `Q` or `R`, one line per entry.
#[wasm_bindgen]
pub fn coefficient_table(family: &str, max_index: usize) -> Result<String, JsValue> {
    if max_index > MAX_INDEX {
        return Err(err(format!("largest index is {MAX_INDEX}")));
    }
    let fam: Family = family.parse().map_err(|_| err("family must be S, A, P, Q or R"))?;
    Ok(table(fam, max_index).map_err(err)?.to_string())
}

/// Decimal value of the hyperbolic series `F_{p,m}(y)`.
#[wasm_bindgen]
pub fn series_value(family: &str, p: i32, m: u32, y: &str, prec_bits: usize) -> Result<String, JsValue> {
    check_bits(prec_bits)?;
    let fam: SeriesFamily = family.parse().map_err(|_| err(format!("unknown series family {family:?}")))?;
    let yv = parse_y(y, prec_bits).ok_or_else(|| err(format!("cannot parse y = {y:?}")))?;
    let v = series(fam, p as i64, m, &yv, prec_bits).map_err(err)?;
    Ok(v.to_decimal(digits(prec_bits)))
}

/// Closed form of the mixed trigonometric-hyperbolic integral with exponent
/// `4m - 1`, its value, the quadrature value and their relative difference.
#[wasm_bindgen]
pub fn integral_check(m: u32, prec_bits: usize) -> Result<String, JsValue> {
    check_bits(prec_bits)?;
    if !(1..=4).contains(&m) {
        return Err(err("m must lie in 1..=4"));
    }
    let form = berndt_closed_form(m).map_err(err)?;
    let exact = form.eval(prec_bits);
    let quad = berndt_quadrature(m, prec_bits).map_err(err)?;
    let d = digits(prec_bits);
    Ok(format!(
        "closed form  = {form}\nclosed value = {}\nquadrature   = {}\nrelative difference = {}",
        exact.to_decimal(d),
        quad.to_decimal(d),
        BigReal::rel_diff(&exact, &quad).to_decimal(3)
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_and_series() {
        assert!(coefficient_table("S", 4).unwrap().contains("S_4 = 1 - 6*x + 5*x^2"));
        let v = series_value("G", 3, 2, "pi", 128).unwrap();
        assert!(!v.is_empty());
        assert!(parse_y("pi/2", 128).is_some());
        assert!(parse_y("1.5*pi", 128).is_some());
        assert!(parse_y("x", 128).is_none());
    }

    #[test]
    fn integral_agrees() {
        let s = integral_check(1, 128).unwrap();
        assert!(s.contains("relative difference"), "{s}");
    }
}
