use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::elliptic_core::{gamma_quarter, working_precision, BigReal};
use crate::exactalg::{rat_pow, rint, Rational};

/// Exponent triple of `Γ(1/4)^g · π^{h/2} · 2^{t/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub gamma_exp: i32,
    pub pi_half_exp: i32,
    pub two_half_exp: i32,
}

/// Finite sum of rational multiples of basis monomials.
///
/// Whole powers of 2 are folded into the coefficient, so every stored
/// `two_half_exp` is `0` or `-1` (a factor `1/√2`).
#[derive(Clone, Debug, PartialEq, Eq, Default, Hash)]
pub struct ClosedForm {
    terms: BTreeMap<Monomial, Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormTerm {
    pub coef_num: String,
    pub coef_den: String,
    pub gamma_exp: i32,
    pub pi_half_exp: i32,
    pub two_half_exp: i32,
}

fn normalize(coef: Rational, m: Monomial) -> (Rational, Monomial) {
    let t = m.two_half_exp;
    let (whole, rest) = if t.rem_euclid(2) == 0 { (t / 2, 0) } else { ((t + 1).div_euclid(2), -1) };
    let coef = coef * rat_pow(&rint(2), whole);
    (coef, Monomial { two_half_exp: rest, ..m })
}

impl ClosedForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn rational(c: Rational) -> Self {
        Self::monomial(c, 0, 0, 0)
    }

    pub fn monomial(coef: Rational, gamma_exp: i32, pi_half_exp: i32, two_half_exp: i32) -> Self {
        let mut out = Self::zero();
        out.push(coef, Monomial { gamma_exp, pi_half_exp, two_half_exp });
        out
    }

    fn push(&mut self, coef: Rational, m: Monomial) {
        if coef.is_zero() {
            return;
        }
        let (coef, m) = normalize(coef, m);
        let slot = self.terms.entry(m).or_insert_with(Rational::zero);
        *slot += coef;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Rebuilds the form from its own terms; canonical inputs come back unchanged.
    pub fn canonicalize(&self) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.push(c.clone(), *m);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms ordered by descending Γ exponent, then descending π exponent.
    pub fn terms(&self) -> Vec<(Monomial, Rational)> {
        self.terms.iter().rev().map(|(m, c)| (*m, c.clone())).collect()
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficient of the monomial with the given Γ exponent, if exactly one exists.
    pub fn term_with_gamma(&self, gamma_exp: i32) -> Option<(Monomial, Rational)> {
        let mut it = self.terms.iter().filter(|(m, _)| m.gamma_exp == gamma_exp);
        let first = it.next()?;
        if it.next().is_some() {
            return None;
        }
        Some((*first.0, first.1.clone()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (m, a) in &self.terms {
            out.push(a * c, *m);
        }
        out
    }

    /// Multiplies by `Γ^g π^{h/2} 2^{t/2}`.
    pub fn mul_monomial(&self, g: i32, h: i32, t: i32) -> Self {
        let mut out = Self::zero();
        for (m, a) in &self.terms {
            out.push(a.clone(), Monomial { gamma_exp: m.gamma_exp + g, pi_half_exp: m.pi_half_exp + h, two_half_exp: m.two_half_exp + t });
        }
        out
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::rational(rint(1)), |acc, _| &acc * self)
    }

    /// Numerical value at `precision + GUARD_BITS` bits.
    pub fn eval(&self, precision: usize) -> BigReal {
        let wp = working_precision(precision);
        let g = gamma_quarter(precision).round_to(wp);
        let sqrt_pi = BigReal::pi(wp).sqrt();
        let sqrt2 = BigReal::from_i64(2, wp).sqrt();
        let mut acc = BigReal::zero(wp);
        for (m, c) in &self.terms {
            let v = BigReal::from_rational(c, wp)
                * g.powi(m.gamma_exp as i64)
                * sqrt_pi.powi(m.pi_half_exp as i64)
                * sqrt2.powi(m.two_half_exp as i64);
            acc = acc + v;
        }
        acc
    }

    pub fn to_terms(&self) -> Vec<ClosedFormTerm> {
        self.terms()
            .into_iter()
            .map(|(m, c)| ClosedFormTerm {
                coef_num: c.numer().to_string(),
                coef_den: c.denom().to_string(),
                gamma_exp: m.gamma_exp,
                pi_half_exp: m.pi_half_exp,
                two_half_exp: m.two_half_exp,
            })
            .collect()
    }

    pub fn from_terms(terms: &[ClosedFormTerm]) -> Result<Self, String> {
        let mut out = Self::zero();
        for t in terms {
            let n: BigInt = t.coef_num.trim().parse().map_err(|_| format!("bad numerator {:?}", t.coef_num))?;
            let d: BigInt = t.coef_den.trim().parse().map_err(|_| format!("bad denominator {:?}", t.coef_den))?;
            if d.is_zero() {
                return Err("zero denominator".into());
            }
            out.push(Rational::new(n, d), Monomial { gamma_exp: t.gamma_exp, pi_half_exp: t.pi_half_exp, two_half_exp: t.two_half_exp });
        }
        Ok(out)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_terms()).expect("closed form terms serialize")
    }

    pub fn from_json(s: &str) -> Result<Self, String> {
        let terms: Vec<ClosedFormTerm> = serde_json::from_str(s).map_err(|e| e.to_string())?;
        Self::from_terms(&terms)
    }

    /// Display style with `\Gamma` for Γ(1/4) and `\sqrt{2}` kept in denominators.
    pub fn latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.terms().into_iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let c = c.abs();
            let mut num = Vec::new();
            let mut den = Vec::new();
            if !c.numer().is_one() {
                num.push(c.numer().to_string());
            }
            if !c.denom().is_one() {
                den.push(c.denom().to_string());
            }
            if m.two_half_exp == -1 {
                den.push("\\sqrt{2}".into());
            }
            let g = latex_power("\\Gamma", m.gamma_exp.abs(), false);
            let p = latex_power("\\pi", m.pi_half_exp.abs(), true);
            if m.gamma_exp > 0 {
                num.push(g);
            } else if m.gamma_exp < 0 {
                den.push(g);
            }
            if m.pi_half_exp > 0 {
                num.push(p);
            } else if m.pi_half_exp < 0 {
                den.push(p);
            }
            let num_s = if num.is_empty() { "1".to_string() } else { num.concat() };
            if den.is_empty() {
                out.push_str(&num_s);
            } else {
                out.push_str(&format!("\\frac{{{}}}{{{}}}", num_s, den.concat()));
            }
        }
        out
    }
}

fn latex_power(base: &str, e: i32, halves: bool) -> String {
    let exp = if halves {
        if e % 2 == 0 {
            (e / 2).to_string()
        } else {
            format!("{e}/2")
        }
    } else {
        e.to_string()
    };
    match exp.len() {
        _ if exp == "1" => base.to_string(),
        1 => format!("{base}^{exp}"),
        _ => format!("{base}^{{{exp}}}"),
    }
}

fn text_power(base: &str, e: i32, halves: bool) -> String {
    let exp = if halves {
        if e % 2 == 0 {
            (e / 2).to_string()
        } else {
            format!("({e}/2)")
        }
    } else {
        e.to_string()
    };
    if exp == "1" {
        base.to_string()
    } else {
        format!("{base}^{exp}")
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms().into_iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let c = c.abs();
            let mut num = Vec::new();
            let mut den = Vec::new();
            if !c.numer().is_one() || (m.gamma_exp <= 0 && m.pi_half_exp <= 0) {
                num.push(c.numer().to_string());
            }
            if !c.denom().is_one() {
                den.push(c.denom().to_string());
            }
            if m.two_half_exp == -1 {
                den.push("sqrt(2)".into());
            }
            let g = text_power("Gamma", m.gamma_exp.abs(), false);
            let p = text_power("pi", m.pi_half_exp.abs(), true);
            if m.gamma_exp > 0 {
                num.push(g);
            } else if m.gamma_exp < 0 {
                den.push(g);
            }
            if m.pi_half_exp > 0 {
                num.push(p);
            } else if m.pi_half_exp < 0 {
                den.push(p);
            }
            write!(f, "{}", num.join("*"))?;
            match den.len() {
                0 => {}
                1 => write!(f, "/{}", den[0])?,
                _ => write!(f, "/({})", den.join("*"))?,
            }
        }
        Ok(())
    }
}

impl Add for &ClosedForm {
    type Output = ClosedForm;
    fn add(self, o: &ClosedForm) -> ClosedForm {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.push(c.clone(), *m);
        }
        out
    }
}

impl Sub for &ClosedForm {
    type Output = ClosedForm;
    fn sub(self, o: &ClosedForm) -> ClosedForm {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.push(-c, *m);
        }
        out
    }
}

impl Mul for &ClosedForm {
    type Output = ClosedForm;
    fn mul(self, o: &ClosedForm) -> ClosedForm {
        let mut out = ClosedForm::zero();
        for (ma, a) in &self.terms {
            for (mb, b) in &o.terms {
                out.push(
                    a * b,
                    Monomial {
                        gamma_exp: ma.gamma_exp + mb.gamma_exp,
                        pi_half_exp: ma.pi_half_exp + mb.pi_half_exp,
                        two_half_exp: ma.two_half_exp + mb.two_half_exp,
                    },
                );
            }
        }
        out
    }
}

impl Neg for &ClosedForm {
    type Output = ClosedForm;
    fn neg(self) -> ClosedForm {
        self.scale(&rint(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use proptest::prelude::*;

    fn mono(n: i64, d: i64, g: i32, h: i32, t: i32) -> ClosedForm {
        ClosedForm::monomial(rat(n, d), g, h, t)
    }

    #[test]
    fn arithmetic_examples() {
        let a = &mono(1, 3, 4, -2, 0) + &mono(-2, 7, 6, -3, -1);
        assert!((&a - &a).is_zero());
        assert_eq!(mono(1, 1, 4, -2, 0).scale(&rint(3)), mono(3, 1, 4, -2, 0));
        let z = mono(1, 2, 2, -3, 0);
        assert_eq!(&z * &z, mono(1, 4, 4, -6, 0));
    }

    #[test]
    fn sqrt2_normalization() {
        assert_eq!(mono(1, 1, 0, 0, 2), ClosedForm::rational(rint(2)));
        assert_eq!(mono(1, 1, 0, 0, 1), mono(2, 1, 0, 0, -1));
        assert_eq!(mono(1, 1, 0, 0, -3), mono(1, 2, 0, 0, -1));
        let r2 = mono(1, 1, 0, 0, -1);
        assert_eq!(&r2 * &r2, ClosedForm::rational(rat(1, 2)));
    }

    #[test]
    fn latex_and_text() {
        let f = &(&mono(1, 16384, 12, -10, 0) - &mono(1, 4096, 10, -7, -1)) + &mono(3, 256, 4, -2, 0);
        assert_eq!(
            f.latex(),
            "\\frac{\\Gamma^{12}}{16384\\pi^5} - \\frac{\\Gamma^{10}}{4096\\sqrt{2}\\pi^{7/2}} + \\frac{3\\Gamma^4}{256\\pi}"
        );
        assert_eq!(f.to_string(), "Gamma^12/(16384*pi^5) - Gamma^10/(4096*sqrt(2)*pi^(7/2)) + 3*Gamma^4/(256*pi)");
        assert_eq!(mono(4, 1, -2, 1, 0).latex(), "\\frac{4\\pi^{1/2}}{\\Gamma^2}");
        assert_eq!(ClosedForm::zero().latex(), "0");
    }

    #[test]
    fn eval_basics() {
        assert!(ClosedForm::zero().eval(128).is_zero());
        let v = mono(3, 2, 0, 2, 1).eval(128);
        let expect = BigReal::pi(192) * BigReal::from_i64(2, 192).sqrt().mul_i64(3).div_i64(2);
        assert!(BigReal::rel_diff(&v, &expect).abs_below_pow2(-180));
    }

    fn arb_cf() -> impl Strategy<Value = ClosedForm> {
        prop::collection::vec((-40i64..40, 1i64..50, -12i32..12, -12i32..12, -3i32..3), 0..6)
            .prop_map(|ts| ts.into_iter().fold(ClosedForm::zero(), |acc, (n, d, g, h, t)| &acc + &mono(n, d, g, h, t)))
    }

    proptest! {
        #[test]
        fn canonicalize_idempotent(a in arb_cf()) {
            prop_assert_eq!(a.canonicalize(), a.clone());
            prop_assert_eq!(a.canonicalize().canonicalize(), a.canonicalize());
        }

        #[test]
        fn json_round_trip(a in arb_cf()) {
            prop_assert_eq!(ClosedForm::from_json(&a.to_json()).unwrap(), a);
        }

        #[test]
        fn mul_distributes(a in arb_cf(), b in arb_cf(), c in arb_cf()) {
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }
    }
}
