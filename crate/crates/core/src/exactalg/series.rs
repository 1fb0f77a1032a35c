use super::{RatPoly, Rational};
use crate::error::{Error, Result};
use num_traits::Zero;

/// Power series in `u` truncated before `u^order`, with `RatPoly` coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySeries {
    terms: Vec<RatPoly>,
    order: usize,
}

impl PolySeries {
    /// Builds a series from its leading coefficients; missing ones are zero
    /// and any beyond `order` are dropped.
    pub fn new(mut terms: Vec<RatPoly>, order: usize) -> Self {
        terms.truncate(order);
        terms.resize(order, RatPoly::zero());
        PolySeries { terms, order }
    }

    pub fn one(order: usize) -> Self {
        Self::new(vec![RatPoly::one()], order)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, k: usize) -> &RatPoly {
        &self.terms[k]
    }

    pub fn terms(&self) -> &[RatPoly] {
        &self.terms
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PolySeries { terms: self.terms.iter().map(|t| t.scale(c)).collect(), order: self.order }
    }

    pub fn add(&self, b: &Self) -> Self {
        let n = self.order.min(b.order);
        Self::new((0..n).map(|k| &self.terms[k] + &b.terms[k]).collect(), n)
    }

    pub fn sub(&self, b: &Self) -> Self {
        let n = self.order.min(b.order);
        Self::new((0..n).map(|k| &self.terms[k] - &b.terms[k]).collect(), n)
    }

    pub fn mul(&self, b: &Self) -> Self {
        let n = self.order.min(b.order);
        let mut out = vec![RatPoly::zero(); n];
        for i in 0..n {
            if self.terms[i].is_zero() {
                continue;
            }
            for j in 0..n - i {
                if !b.terms[j].is_zero() {
                    out[i + j] = &out[i + j] + &(&self.terms[i] * &b.terms[j]);
                }
            }
        }
        Self::new(out, n)
    }

    /// `self / b`; the constant term of `b` must be a nonzero constant polynomial
    /// so that its inverse stays polynomial in `x`.
    pub fn div(&self, b: &Self) -> Result<Self> {
        let n = self.order.min(b.order);
        let b0 = &b.terms[0];
        if b0.degree() != Some(0) {
            return Err(Error::DivisorNotUnit);
        }
        let inv = b0.coeff(0).recip();
        let mut out: Vec<RatPoly> = Vec::with_capacity(n);
        for k in 0..n {
            let mut acc = self.terms[k].clone();
            for j in 1..=k {
                if !b.terms[j].is_zero() && !out[k - j].is_zero() {
                    acc = &acc - &(&b.terms[j] * &out[k - j]);
                }
            }
            out.push(acc.scale(&inv));
        }
        Ok(Self::new(out, n))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(RatPoly::is_zero)
    }

    /// Indices of nonzero coefficients all share the parity `parity` (0 even, 1 odd).
    pub fn has_parity(&self, parity: usize) -> bool {
        self.terms.iter().enumerate().all(|(k, t)| k % 2 == parity || t.is_zero())
    }

    /// Evaluates every coefficient at `x = t`, giving a rational series.
    pub fn eval_coeffs(&self, t: &Rational) -> Vec<Rational> {
        self.terms.iter().map(|c| c.eval(t)).collect()
    }
}

impl Zero for PolySeries {
    fn zero() -> Self {
        PolySeries { terms: Vec::new(), order: 0 }
    }
    fn is_zero(&self) -> bool {
        PolySeries::is_zero(self)
    }
}

impl std::ops::Add for PolySeries {
    type Output = PolySeries;
    fn add(self, rhs: Self) -> Self {
        PolySeries::add(&self, &rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, rint};
    use proptest::prelude::*;

    fn s(cs: &[i64], order: usize) -> PolySeries {
        PolySeries::new(cs.iter().map(|&c| RatPoly::constant(rint(c))).collect(), order)
    }

    #[test]
    fn product_truncates() {
        let a = s(&[1, 0, 1], 6);
        let b = s(&[1, 0, -1], 6);
        assert_eq!(a.mul(&b), s(&[1, 0, 0, 0, -1], 6));
        assert_eq!(a.mul(&b).order(), 6);
        assert_eq!(a.mul(&s(&[1], 3)).order(), 3);
    }

    #[test]
    fn self_division() {
        let a = PolySeries::new(vec![RatPoly::constant(rat(3, 2)), RatPoly::x(), RatPoly::from_i64s(&[1, 1])], 7);
        assert_eq!(a.div(&a).unwrap(), PolySeries::one(7));
    }

    #[test]
    fn division_needs_unit() {
        let a = s(&[1, 1], 4);
        assert_eq!(a.div(&s(&[0, 1], 4)), Err(Error::DivisorNotUnit));
        let b = PolySeries::new(vec![RatPoly::x()], 4);
        assert_eq!(a.div(&b), Err(Error::DivisorNotUnit));
    }

    fn arb_unit_series(order: usize) -> impl Strategy<Value = PolySeries> {
        (prop_oneof![-5i64..=-1, 1i64..=5], prop::collection::vec(prop::collection::vec(-6i64..6, 0..4), order - 1)).prop_map(
            move |(c0, rest)| {
                let mut terms = vec![RatPoly::constant(rint(c0))];
                terms.extend(rest.iter().map(|cs| RatPoly::from_i64s(cs)));
                PolySeries::new(terms, order)
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn div_mul_round_trip(a in arb_unit_series(8), b in arb_unit_series(8)) {
            let q = a.div(&b).unwrap();
            prop_assert_eq!(q.mul(&b), a);
        }
    }
}
