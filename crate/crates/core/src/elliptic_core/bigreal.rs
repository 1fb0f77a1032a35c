use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use astro_float_num::{BigFloat, Consts, Radix, RoundingMode};
use num_bigint::{BigInt, Sign};
use num_traits::ToPrimitive;

use crate::exactalg::Rational;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Binary floating-point real carried at an explicit precision in bits.
///
/// Binary operations round to the smaller of the two operand precisions.
#[derive(Clone)]
pub struct BigReal {
    v: BigFloat,
    prec: usize,
}

impl BigReal {
    fn wrap(v: BigFloat, prec: usize) -> Self {
        BigReal { v, prec }
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    pub fn zero(prec: usize) -> Self {
        Self::wrap(BigFloat::from_word(0, prec), prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64(1, prec)
    }

    pub fn from_i64(n: i64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_i64(n, prec.max(64)), prec)
    }

    pub fn from_u64(n: u64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_u64(n, prec.max(64)), prec)
    }

    pub fn from_f64(f: f64, prec: usize) -> Self {
        Self::wrap(BigFloat::from_f64(f, prec.max(64)), prec)
    }

    pub fn from_bigint(n: &BigInt, prec: usize) -> Self {
        if let Some(small) = n.to_i64() {
            return Self::from_i64(small, prec);
        }
        let (sign, digits) = n.to_u32_digits();
        let p = prec + 64;
        let base = BigFloat::from_u64(1u64 << 32, p);
        let mut acc = BigFloat::from_word(0, p);
        for d in digits.iter().rev() {
            acc = acc.mul(&base, p, RM).add(&BigFloat::from_u64(*d as u64, p), p, RM);
        }
        if sign == Sign::Minus {
            acc = BigFloat::neg(&acc);
        }
        Self::wrap(acc, p).round_to(prec)
    }

    pub fn from_rational(r: &Rational, prec: usize) -> Self {
        let n = Self::from_bigint(r.numer(), prec + 8);
        let d = Self::from_bigint(r.denom(), prec + 8);
        (&n / &d).round_to(prec)
    }

    /// Parses a decimal literal such as `"1.7"` or `"-3.2e-5"`.
    pub fn parse(s: &str, prec: usize) -> Option<Self> {
        let t = s.trim();
        let ok = !t.is_empty()
            && t.chars().all(|c| c.is_ascii_digit() || matches!(c, '.' | '-' | '+' | 'e' | 'E'))
            && t.chars().any(|c| c.is_ascii_digit());
        if !ok {
            return None;
        }
        let v = with_consts(|cc| BigFloat::parse(t, Radix::Dec, prec.max(64), RM, cc));
        if v.is_nan() || v.is_inf() {
            None
        } else {
            Some(Self::wrap(v, prec))
        }
    }

    pub fn pi(prec: usize) -> Self {
        Self::wrap(with_consts(|cc| cc.pi(prec.max(64), RM)), prec)
    }

    /// Re-rounds (or widens) to a new nominal precision.
    pub fn round_to(&self, prec: usize) -> Self {
        let mut v = self.v.clone();
        let _ = v.set_precision(prec.max(64), RM);
        Self::wrap(v, prec)
    }

    fn p2(&self, o: &Self) -> usize {
        self.prec.min(o.prec)
    }

    fn wp(&self) -> usize {
        self.prec.max(64)
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        let p = self.p2(o);
        Self::wrap(self.v.add(&o.v, p.max(64), RM), p)
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        let p = self.p2(o);
        Self::wrap(self.v.sub(&o.v, p.max(64), RM), p)
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        let p = self.p2(o);
        Self::wrap(self.v.mul(&o.v, p.max(64), RM), p)
    }

    pub fn div_ref(&self, o: &Self) -> Self {
        let p = self.p2(o);
        Self::wrap(self.v.div(&o.v, p.max(64), RM), p)
    }

    pub fn mul_i64(&self, n: i64) -> Self {
        self.mul_ref(&Self::from_i64(n, self.prec))
    }

    pub fn div_i64(&self, n: i64) -> Self {
        self.div_ref(&Self::from_i64(n, self.prec))
    }

    pub fn mul_rational(&self, r: &Rational) -> Self {
        self.mul_ref(&Self::from_rational(r, self.prec))
    }

    pub fn recip(&self) -> Self {
        Self::wrap(self.v.reciprocal(self.wp(), RM), self.prec)
    }

    pub fn abs(&self) -> Self {
        Self::wrap(self.v.abs(), self.prec)
    }

    pub fn square(&self) -> Self {
        self.mul_ref(self)
    }

    pub fn sqrt(&self) -> Self {
        Self::wrap(self.v.sqrt(self.wp(), RM), self.prec)
    }

    pub fn exp(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.exp(self.wp(), RM, cc)), self.prec)
    }

    pub fn ln(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.ln(self.wp(), RM, cc)), self.prec)
    }

    pub fn sin(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.sin(self.wp(), RM, cc)), self.prec)
    }

    pub fn cos(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.cos(self.wp(), RM, cc)), self.prec)
    }

    pub fn sinh(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.sinh(self.wp(), RM, cc)), self.prec)
    }

    pub fn cosh(&self) -> Self {
        Self::wrap(with_consts(|cc| self.v.cosh(self.wp(), RM, cc)), self.prec)
    }

    /// Integer power by repeated squaring; negative exponents invert.
    pub fn powi(&self, e: i64) -> Self {
        if e == 0 {
            return Self::one(self.prec);
        }
        let mut base = self.clone();
        let mut n = e.unsigned_abs();
        let mut acc: Option<Self> = None;
        while n > 0 {
            if n & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul_ref(&base),
                });
            }
            n >>= 1;
            if n > 0 {
                base = base.square();
            }
        }
        let r = acc.expect("nonzero exponent");
        if e < 0 {
            r.recip()
        } else {
            r
        }
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        !(self.v.is_nan() || self.v.is_inf())
    }

    pub fn is_positive(&self) -> bool {
        !self.is_zero() && self.v.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        !self.is_zero() && self.v.is_negative()
    }

    /// `e` such that `2^(e-1) <= |self| < 2^e`; `None` for zero or non-finite values.
    pub fn exponent(&self) -> Option<i64> {
        if self.is_zero() || !self.is_finite() {
            return None;
        }
        self.v.exponent().map(|e| e as i64)
    }

    /// True when `|self| < 2^k` (zero always qualifies).
    pub fn abs_below_pow2(&self, k: i64) -> bool {
        match self.exponent() {
            None => self.is_zero(),
            Some(e) => e <= k,
        }
    }

    /// Approximate `log10 |self|`; `-inf` for zero.
    pub fn log10_abs(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let e = self.exponent().unwrap_or(0);
        let mut m = self.v.abs();
        m.set_exponent(0);
        let mf = Self::wrap(m, 64).to_f64();
        mf.log10() + e as f64 * std::f64::consts::LOG10_2
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let s = with_consts(|cc| self.v.format(Radix::Dec, RM, cc)).unwrap_or_default();
        s.parse().unwrap_or(f64::NAN)
    }

    /// Decimal digits guaranteed meaningful at this precision.
    pub fn default_digits(&self) -> usize {
        ((self.prec as f64) * std::f64::consts::LOG10_2).floor().max(1.0) as usize
    }

    /// Decimal string rounded to `digits` significant digits. Positional form is
    /// used for moderate exponents, scientific otherwise.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return "0".into();
        }
        if !self.is_finite() {
            return "NaN".into();
        }
        let raw = with_consts(|cc| self.v.format(Radix::Dec, RM, cc)).unwrap_or_default();
        let (neg, body) = match raw.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, raw.as_str()),
        };
        let (mant, exp) = body.split_once(['e', 'E']).unwrap_or((body, "0"));
        let mut exp10: i64 = exp.parse().unwrap_or(0);
        let mut ds: Vec<u8> = mant.bytes().filter(u8::is_ascii_digit).map(|b| b - b'0').collect();
        let lead = ds.iter().position(|&d| d != 0).unwrap_or(0);
        ds.drain(..lead);
        exp10 -= lead as i64;
        if ds.len() > digits {
            let round_up = ds[digits] >= 5;
            ds.truncate(digits);
            if round_up {
                let mut i = digits;
                loop {
                    if i == 0 {
                        ds.insert(0, 1);
                        ds.truncate(digits);
                        exp10 += 1;
                        break;
                    }
                    i -= 1;
                    if ds[i] == 9 {
                        ds[i] = 0;
                    } else {
                        ds[i] += 1;
                        break;
                    }
                }
            }
        }
        while ds.len() > 1 && ds.last() == Some(&0) {
            ds.pop();
        }
        let digit_str: String = ds.iter().map(|d| (b'0' + d) as char).collect();
        let sign = if neg { "-" } else { "" };
        if (-6..=24).contains(&exp10) {
            let point = exp10 + 1;
            if point <= 0 {
                format!("{sign}0.{}{}", "0".repeat((-point) as usize), digit_str)
            } else if (point as usize) >= digit_str.len() {
                format!("{sign}{}{}", digit_str, "0".repeat(point as usize - digit_str.len()))
            } else {
                let (a, b) = digit_str.split_at(point as usize);
                format!("{sign}{a}.{b}")
            }
        } else {
            let (a, b) = digit_str.split_at(1);
            if b.is_empty() {
                format!("{sign}{a}e{exp10}")
            } else {
                format!("{sign}{a}.{b}e{exp10}")
            }
        }
    }

    /// `|a - b| / max(|a|, |b|)`, or the absolute difference when both are zero.
    pub fn rel_diff(a: &Self, b: &Self) -> Self {
        let d = a.sub_ref(b).abs();
        let scale = if a.abs() >= b.abs() { a.abs() } else { b.abs() };
        if scale.is_zero() {
            d
        } else {
            d.div_ref(&scale)
        }
    }

    pub fn max(a: &Self, b: &Self) -> Self {
        if a >= b {
            a.clone()
        } else {
            b.clone()
        }
    }
}

impl PartialEq for BigReal {
    fn eq(&self, o: &Self) -> bool {
        self.partial_cmp(o) == Some(Ordering::Equal)
    }
}

impl PartialOrd for BigReal {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        self.v.cmp(&o.v).map(|c| c.cmp(&0))
    }
}

impl fmt::Debug for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BigReal({}, {} bits)", self.to_decimal(self.default_digits().min(40)), self.prec)
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = f.precision().unwrap_or_else(|| self.default_digits());
        write!(f, "{}", self.to_decimal(d))
    }
}

macro_rules! bin_op {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr<&BigReal> for &BigReal {
            type Output = BigReal;
            fn $m(self, o: &BigReal) -> BigReal {
                self.$f(o)
            }
        }
        impl $tr<BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, o: BigReal) -> BigReal {
                self.$f(&o)
            }
        }
        impl $tr<&BigReal> for BigReal {
            type Output = BigReal;
            fn $m(self, o: &BigReal) -> BigReal {
                self.$f(o)
            }
        }
        impl $tr<BigReal> for &BigReal {
            type Output = BigReal;
            fn $m(self, o: BigReal) -> BigReal {
                self.$f(&o)
            }
        }
    };
}

bin_op!(Add, add, add_ref);
bin_op!(Sub, sub, sub_ref);
bin_op!(Mul, mul, mul_ref);
bin_op!(Div, div, div_ref);

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal::wrap(BigFloat::neg(&self.v), self.prec)
    }
}

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        -&self
    }
}

impl std::iter::Sum for BigReal {
    fn sum<I: Iterator<Item = BigReal>>(mut it: I) -> BigReal {
        let first = it.next().unwrap_or_else(|| BigReal::zero(64));
        it.fold(first, |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;

    #[test]
    fn decimal_output() {
        let p = 128;
        assert_eq!(BigReal::from_i64(0, p).to_decimal(10), "0");
        assert_eq!(BigReal::from_i64(-25, p).div_i64(10).to_decimal(10), "-2.5");
        assert_eq!(BigReal::from_i64(1, p).div_i64(3).to_decimal(5), "0.33333");
        assert_eq!(BigReal::from_i64(2, p).div_i64(3).to_decimal(5), "0.66667");
        assert_eq!(BigReal::from_i64(999_999, p).to_decimal(3), "1000000");
        assert_eq!(BigReal::from_f64(1e-30, p).to_decimal(3), "1e-30");
        assert_eq!(BigReal::from_i64(123456, p).to_decimal(20), "123456");
        assert_eq!(BigReal::pi(256).to_decimal(30), "3.14159265358979323846264338328");
    }

    #[test]
    fn precision_is_min_of_operands() {
        let a = BigReal::from_i64(1, 128);
        let b = BigReal::from_i64(3, 256);
        assert_eq!((&a / &b).prec(), 128);
    }

    #[test]
    fn rational_and_bigint_conversion() {
        let big: BigInt = BigInt::from(10).pow(40) + 7;
        let r = BigReal::from_bigint(&big, 256);
        assert_eq!(r.to_decimal(41), "1.0000000000000000000000000000000000000007e40");
        let q = BigReal::from_rational(&rat(-17, 45), 200);
        assert!(BigReal::rel_diff(&q, &BigReal::from_i64(-17, 200).div_i64(45)).abs_below_pow2(-190));
    }

    #[test]
    fn exponent_convention() {
        assert_eq!(BigReal::from_i64(1, 64).exponent(), Some(1));
        assert_eq!(BigReal::from_f64(0.75, 64).exponent(), Some(0));
        assert!(BigReal::from_f64(0.75, 64).abs_below_pow2(0));
        assert!(!BigReal::from_i64(1, 64).abs_below_pow2(0));
        assert!((BigReal::from_f64(2.5e-40, 128).log10_abs() - (-39.602)).abs() < 1e-3);
    }

    #[test]
    fn powi_matches_repeated_product() {
        let x = BigReal::parse("1.7", 192).unwrap();
        let mut acc = BigReal::one(192);
        for _ in 0..13 {
            acc = &acc * &x;
        }
        assert!(BigReal::rel_diff(&x.powi(13), &acc).abs_below_pow2(-180));
        assert!(BigReal::rel_diff(&x.powi(-3), &(&x * &x * &x).recip()).abs_below_pow2(-180));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(BigReal::parse("abc", 64).is_none());
        assert!(BigReal::parse("", 64).is_none());
        assert_eq!(BigReal::parse("-2.5e1", 64).unwrap().to_f64(), -25.0);
    }
}
