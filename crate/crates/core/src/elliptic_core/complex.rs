use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::BigReal;

/// Complex number with components at a shared precision.
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        let p = re.prec().min(im.prec());
        BigComplex { re: re.round_to(p), im: im.round_to(p) }
    }

    pub fn from_real(re: BigReal) -> Self {
        let p = re.prec();
        BigComplex { re, im: BigReal::zero(p) }
    }

    pub fn from_i64s(re: i64, im: i64, prec: usize) -> Self {
        BigComplex { re: BigReal::from_i64(re, prec), im: BigReal::from_i64(im, prec) }
    }

    pub fn zero(prec: usize) -> Self {
        Self::from_i64s(0, 0, prec)
    }

    pub fn one(prec: usize) -> Self {
        Self::from_i64s(1, 0, prec)
    }

    pub fn prec(&self) -> usize {
        self.re.prec()
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: -&self.im }
    }

    pub fn scale(&self, r: &BigReal) -> Self {
        BigComplex { re: &self.re * r, im: &self.im * r }
    }

    pub fn norm_sqr(&self) -> BigReal {
        self.re.square() + self.im.square()
    }

    pub fn abs(&self) -> BigReal {
        self.norm_sqr().sqrt()
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        BigComplex { re: &self.re / &n, im: -(&self.im / &n) }
    }

    pub fn div(&self, o: &Self) -> Self {
        self * &o.recip()
    }

    pub fn square(&self) -> Self {
        let re = (&self.re + &self.im) * (&self.re - &self.im);
        let im = (&self.re * &self.im).mul_i64(2);
        BigComplex { re, im }
    }

    pub fn powi(&self, e: i64) -> Self {
        if e == 0 {
            return Self::one(self.prec());
        }
        let mut base = self.clone();
        let mut n = e.unsigned_abs();
        let mut acc: Option<Self> = None;
        while n > 0 {
            if n & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => &a * &base,
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

    pub fn exp(&self) -> Self {
        let m = self.re.exp();
        BigComplex { re: &m * &self.im.cos(), im: &m * &self.im.sin() }
    }

    /// `sinh(a+ib) = sinh a cos b + i cosh a sin b`.
    pub fn sinh(&self) -> Self {
        BigComplex { re: self.re.sinh() * self.im.cos(), im: self.re.cosh() * self.im.sin() }
    }

    /// `cosh(a+ib) = cosh a cos b + i sinh a sin b`.
    pub fn cosh(&self) -> Self {
        BigComplex { re: self.re.cosh() * self.im.cos(), im: self.re.sinh() * self.im.sin() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    /// `|a - b| / max(|a|, |b|)`.
    pub fn rel_diff(a: &Self, b: &Self) -> BigReal {
        let d = (a - b).abs();
        let s = BigReal::max(&a.abs(), &b.abs());
        if s.is_zero() {
            d
        } else {
            d / s
        }
    }
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + i{:?})", self.re, self.im)
    }
}

impl Add for &BigComplex {
    type Output = BigComplex;
    fn add(self, o: &BigComplex) -> BigComplex {
        BigComplex { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &BigComplex) -> BigComplex {
        BigComplex { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &BigComplex) -> BigComplex {
        BigComplex { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { re: -&self.re, im: -&self.im }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_integer_powers() {
        let z = BigComplex::from_i64s(1, -1, 128);
        let z4 = z.powi(4);
        assert_eq!(z4.re.to_f64(), -4.0);
        assert_eq!(z4.im.to_f64(), 0.0);
        let w = z.powi(-2);
        assert_eq!(w.re.to_f64(), 0.0);
        assert_eq!(w.im.to_f64(), 0.5);
    }

    #[test]
    fn sinh_cosh_identity() {
        let p = 192;
        let z = BigComplex::new(BigReal::parse("1.3", p).unwrap(), BigReal::parse("-0.7", p).unwrap());
        let c = z.cosh();
        let s = z.sinh();
        let one = &c.square() - &s.square();
        assert!(BigComplex::rel_diff(&one, &BigComplex::one(p)).abs_below_pow2(-180));
    }

    #[test]
    fn division_inverts_multiplication() {
        let p = 160;
        let a = BigComplex::from_i64s(3, 4, p);
        let b = BigComplex::from_i64s(-2, 7, p);
        let q = (&a * &b).div(&b);
        assert!(BigComplex::rel_diff(&q, &a).abs_below_pow2(-150));
    }
}
