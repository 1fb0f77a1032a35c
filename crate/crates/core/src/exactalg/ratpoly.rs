use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::{factorial, rat_to_string, rint, Rational};
use crate::error::{Error, Result};

/// Dense polynomial in `x` with exact rational coefficients, lowest power first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<Rational>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        RatPoly { coeffs }
    }

    pub fn zero() -> Self {
        RatPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(rint(1))
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `x`.
    pub fn x() -> Self {
        Self::new(vec![rint(0), rint(1)])
    }

    /// The polynomial `1 - x`.
    pub fn one_minus_x() -> Self {
        Self::new(vec![rint(1), rint(-1)])
    }

    pub fn from_i64s(cs: &[i64]) -> Self {
        Self::new(cs.iter().map(|&c| rint(c)).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        RatPoly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    /// Multiply by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Rational::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        RatPoly { coeffs }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn diff(&self) -> Self {
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, c)| c * rint(k as i64)).collect())
    }

    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * t + c)
    }

    /// Horner evaluation at a real point, at the point's precision.
    pub fn eval_real(&self, t: &crate::elliptic_core::BigReal) -> crate::elliptic_core::BigReal {
        use crate::elliptic_core::BigReal;
        let p = t.prec();
        self.coeffs.iter().rev().fold(BigReal::zero(p), |acc, c| acc * t + BigReal::from_rational(c, p))
    }

    /// `a(p(x))`.
    pub fn compose(&self, p: &RatPoly) -> Self {
        self.coeffs.iter().rev().fold(Self::zero(), |acc, c| &(&acc * p) + &Self::constant(c.clone()))
    }

    /// `a(1 - x)`.
    pub fn reflect(&self) -> Self {
        self.compose(&Self::one_minus_x())
    }

    /// Computes `(-x)^e · a((1-x)/(-x)) / (p-1)!` with `e = (p-3)/2`.
    ///
    /// With `t = (1-x)/(-x)` each term contributes `a_k (-1)^e x^(e-k) (x-1)^k`,
    /// so the result is a polynomial exactly when `deg a <= e`.
    pub fn compose_moebius(&self, p: u32) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) {
            return Err(Error::Domain(format!("moebius substitution needs odd p >= 3, got {p}")));
        }
        let e = ((p - 3) / 2) as usize;
        if let Some(d) = self.degree() {
            if d > e {
                return Err(Error::NonPolynomialResult(format!("degree {d} exceeds the clearing power {e} for p = {p}")));
            }
        }
        let x_minus_1 = Self::from_i64s(&[-1, 1]);
        let mut acc = Self::zero();
        for (k, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let term = x_minus_1.pow(k as u32).shift(e - k).scale(a);
            acc = &acc + &term;
        }
        let sign = if e.is_multiple_of(2) { rint(1) } else { rint(-1) };
        let norm = Rational::from_integer(factorial(p - 1));
        Ok(acc.scale(&(sign / norm)))
    }

    pub fn coeff_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(rat_to_string).collect()
    }

    pub fn latex(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = match k {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{{{k}}}"),
            };
            let coef = if mag.denom().is_one() {
                if mag.is_one() && k > 0 {
                    String::new()
                } else {
                    mag.numer().to_string()
                }
            } else {
                format!("\\frac{{{}}}{{{}}}", mag.numer(), mag.denom())
            };
            out.push_str(&coef);
            out.push_str(&mono);
        }
        out
    }
}

impl RatPoly {
    /// Plain-text rendering in the variable `var`.
    pub fn text(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let coef = rat_to_string(&mag);
            match k {
                0 => out.push_str(&coef),
                _ => {
                    if !mag.is_one() {
                        out.push_str(&coef);
                        out.push('*');
                    }
                    out.push_str(var);
                    if k > 1 {
                        out.push_str(&format!("^{k}"));
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text("x"))
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        RatPoly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() || rhs.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

/// Serialized as the list of coefficient strings, lowest power first.
impl Serialize for RatPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.coeff_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        let coeffs = raw
            .iter()
            .map(|s| super::parse_rational(s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Ok(RatPoly::new(coeffs))
    }
}

impl From<BigInt> for RatPoly {
    fn from(n: BigInt) -> Self {
        RatPoly::constant(Rational::from_integer(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use proptest::prelude::*;

    fn p(cs: &[i64]) -> RatPoly {
        RatPoly::from_i64s(cs)
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(&p(&[1, 1]) + &p(&[-1, 1]), p(&[0, 2]));
        assert_eq!(&p(&[1, -1]) * &p(&[1, -1]), p(&[1, -2, 1]));
        assert_eq!(&p(&[-2, 3]) * &RatPoly::zero(), RatPoly::zero());
        assert_eq!(&p(&[1, 1]) - &p(&[1, 1]), RatPoly::zero());
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(p(&[0, 0, 1]).diff(), p(&[0, 2]));
        assert_eq!(p(&[5]).diff(), RatPoly::zero());
        assert_eq!(p(&[1, -2, 1]).diff(), p(&[-2, 2]));
    }

    #[test]
    fn evaluation_examples() {
        assert_eq!(p(&[1, -1]).eval(&rat(1, 2)), rat(1, 2));
        assert_eq!(p(&[1, -2, 1]).eval(&rint(1)), rint(0));
    }

    #[test]
    fn display_forms() {
        assert_eq!(p(&[1, -1]).to_string(), "1 - x");
        assert_eq!(p(&[-1, 2]).to_string(), "-1 + 2*x");
        assert_eq!(RatPoly::new(vec![rat(2, 45), rat(-17, 45), rat(17, 45)]).to_string(), "2/45 - 17/45*x + 17/45*x^2");
        assert_eq!(RatPoly::zero().to_string(), "0");
        assert_eq!(p(&[1, -1]).latex("x"), "-x + 1");
    }

    #[test]
    fn moebius_constant() {
        assert_eq!(p(&[7]).compose_moebius(3).unwrap(), RatPoly::constant(rat(7, 2)));
    }

    #[test]
    fn moebius_rejects_high_degree() {
        assert!(matches!(p(&[0, 1]).compose_moebius(3), Err(Error::NonPolynomialResult(_))));
        assert!(matches!(p(&[1]).compose_moebius(4), Err(Error::Domain(_))));
    }

    #[test]
    fn serde_round_trip() {
        let a = RatPoly::new(vec![rat(2, 45), rat(-17, 45), rint(3)]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"["2/45","-17/45","3"]"#);
        assert_eq!(serde_json::from_str::<RatPoly>(&s).unwrap(), a);
    }

    fn arb_poly(max_deg: usize) -> impl Strategy<Value = RatPoly> {
        prop::collection::vec((-50i64..50, 1i64..20), 0..=max_deg + 1)
            .prop_map(|v| RatPoly::new(v.into_iter().map(|(n, d)| rat(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn add_sub_round_trip(a in arb_poly(40), b in arb_poly(40)) {
            prop_assert_eq!(&(&a + &b) - &b, a);
        }

        #[test]
        fn mul_degree_adds(a in arb_poly(20), b in arb_poly(20)) {
            let c = &a * &b;
            match (a.degree(), b.degree()) {
                (Some(da), Some(db)) => prop_assert_eq!(c.degree(), Some(da + db)),
                _ => prop_assert!(c.is_zero()),
            }
        }

        #[test]
        fn product_rule(a in arb_poly(12), b in arb_poly(12)) {
            let lhs = (&a * &b).diff();
            let rhs = &(&a.diff() * &b) + &(&a * &b.diff());
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn eval_is_ring_hom(a in arb_poly(10), b in arb_poly(10), n in -9i64..9, d in 1i64..9) {
            let t = rat(n, d);
            prop_assert_eq!((&a * &b).eval(&t), a.eval(&t) * b.eval(&t));
        }

        #[test]
        fn moebius_matches_pointwise(half in 0u32..6, cs in prop::collection::vec(-30i64..30, 0..6),
                                     n in 1i64..40, d in 1i64..40, neg in any::<bool>()) {
            let p_exp = 2 * half + 3;
            let e = half as usize;
            let a = RatPoly::from_i64s(&cs[..cs.len().min(e + 1)]);
            let r = a.compose_moebius(p_exp).unwrap();
            let x0 = if neg { -rat(n, d) } else { rat(n, d) };
            let t = (rint(1) - &x0) / (-&x0);
            let expect = crate::exactalg::rat_pow(&(-&x0), e as i32) * a.eval(&t)
                / Rational::from_integer(factorial(p_exp - 1));
            prop_assert_eq!(r.eval(&x0), expect);
        }
    }
}
