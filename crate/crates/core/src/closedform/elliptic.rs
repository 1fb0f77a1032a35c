use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use super::ClosedForm;
use crate::elliptic_core::{BigReal, ModularPoint};
use crate::error::{Error, Result};
use crate::exactalg::{factorial, rat, rat_pow, rint, RatPoly, Rational};
use crate::hyperseries::{epsilon, SeriesFamily};
use crate::jacobi_maclaurin::{poly, table_r, Family};

/// Structural part `z^a z'^b √x^s √(1-x)^t` of an elliptic expression term.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExprKey {
    pub z_exp: i32,
    pub zprime_exp: i32,
    pub sqrt_x: bool,
    pub sqrt_1mx: bool,
}

/// Sum of `poly(x) · z^a z'^b √x^s √(1-x)^t` with like structures merged.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EllipticExpr {
    terms: BTreeMap<ExprKey, RatPoly>,
}

fn x_one_minus_x() -> RatPoly {
    RatPoly::from_i64s(&[0, 1, -1])
}

impl EllipticExpr {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(poly: RatPoly, z_exp: i32, zprime_exp: i32, sqrt_x: bool, sqrt_1mx: bool) -> Self {
        let mut e = Self::zero();
        e.push(ExprKey { z_exp, zprime_exp, sqrt_x, sqrt_1mx }, poly);
        e
    }

    fn push(&mut self, key: ExprKey, poly: RatPoly) {
        if poly.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(RatPoly::zero);
        *slot = &*slot + &poly;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExprKey, &RatPoly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (k, p) in &o.terms {
            out.push(*k, p.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&rint(-1)))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero();
        for (k, p) in &self.terms {
            out.push(*k, p.scale(c));
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::zero();
        for (ka, pa) in &self.terms {
            for (kb, pb) in &o.terms {
                let mut poly = pa * pb;
                if ka.sqrt_x && kb.sqrt_x {
                    poly = poly.shift(1);
                }
                if ka.sqrt_1mx && kb.sqrt_1mx {
                    poly = &poly * &RatPoly::one_minus_x();
                }
                let key = ExprKey {
                    z_exp: ka.z_exp + kb.z_exp,
                    zprime_exp: ka.zprime_exp + kb.zprime_exp,
                    sqrt_x: ka.sqrt_x ^ kb.sqrt_x,
                    sqrt_1mx: ka.sqrt_1mx ^ kb.sqrt_1mx,
                };
                out.push(key, poly);
            }
        }
        out
    }

    /// `θ = x(1-x) d/dx`, using `θz = x(1-x)z'` and `θz' = z/4 - (1-2x)z'`.
    pub fn theta(&self) -> Self {
        let xx = x_one_minus_x();
        let mut out = Self::zero();
        for (k, p) in &self.terms {
            out.push(*k, &xx * &p.diff());
            if k.z_exp != 0 {
                let key = ExprKey { z_exp: k.z_exp - 1, zprime_exp: k.zprime_exp + 1, ..*k };
                out.push(key, (&xx * p).scale(&rint(k.z_exp as i64)));
            }
            if k.zprime_exp != 0 {
                let b = rint(k.zprime_exp as i64);
                let key = ExprKey { z_exp: k.z_exp + 1, zprime_exp: k.zprime_exp - 1, ..*k };
                out.push(key, p.scale(&(&b / rint(4))));
                out.push(*k, (&RatPoly::from_i64s(&[-1, 2]) * p).scale(&b));
            }
            if k.sqrt_x {
                out.push(*k, (&RatPoly::one_minus_x() * p).scale(&rat(1, 2)));
            }
            if k.sqrt_1mx {
                out.push(*k, (&RatPoly::x() * p).scale(&rat(-1, 2)));
            }
        }
        out
    }

    /// `d/dy = -z² θ`.
    pub fn d_y(&self) -> Self {
        Self::term(RatPoly::constant(rint(-1)), 2, 0, false, false).mul(&self.theta())
    }

    pub fn eval(&self, mp: &ModularPoint) -> BigReal {
        let sx = mp.sqrt_x();
        let s1 = mp.sqrt_x_comp();
        let mut acc = BigReal::zero(mp.prec());
        for (k, p) in &self.terms {
            let mut v = p.eval_real(&mp.x) * mp.z.powi(k.z_exp as i64) * mp.zprime.powi(k.zprime_exp as i64);
            if k.sqrt_x {
                v = v * &sx;
            }
            if k.sqrt_1mx {
                v = v * &s1;
            }
            acc = acc + v;
        }
        acc
    }

    /// Exact value at `x = 1/2` (`y = π`), where `z = Γ²/(2π^{3/2})` and
    /// `z' = 4√π/Γ²`.
    pub fn at_lemniscatic(&self) -> ClosedForm {
        let half = rat(1, 2);
        let z = ClosedForm::monomial(rat(1, 2), 2, -3, 0);
        let zp = ClosedForm::monomial(rint(4), -2, 1, 0);
        let mut acc = ClosedForm::zero();
        for (k, p) in &self.terms {
            let c = p.eval(&half);
            if c.is_zero() {
                continue;
            }
            let roots = k.sqrt_x as i32 + k.sqrt_1mx as i32;
            let mut t = ClosedForm::monomial(c, 0, 0, -roots);
            t = &t * &pow_signed(&z, &ClosedForm::monomial(rint(2), -2, 3, 0), k.z_exp);
            t = &t * &pow_signed(&zp, &ClosedForm::monomial(rat(1, 4), 2, -1, 0), k.zprime_exp);
            acc = &acc + &t;
        }
        acc
    }
}

fn pow_signed(v: &ClosedForm, inv: &ClosedForm, e: i32) -> ClosedForm {
    if e >= 0 {
        v.pow(e as u32)
    } else {
        inv.pow(e.unsigned_abs())
    }
}

impl fmt::Display for EllipticExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(k, p)| {
                let mut s = format!("({p})");
                if k.z_exp != 0 {
                    s += &format!("*z^{}", k.z_exp);
                }
                if k.zprime_exp != 0 {
                    s += &format!("*z'^{}", k.zprime_exp);
                }
                if k.sqrt_x {
                    s += "*sqrt(x)";
                }
                if k.sqrt_1mx {
                    s += "*sqrt(1-x)";
                }
                s
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// Series families with an elliptic-function evaluation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EllipticFamily {
    /// `G_{p,2}`
    G2,
    /// `G'_{p,2}`
    Gprime2,
    /// `Ḡ_{p,2}` (one cosh factor)
    Gbar1,
    /// `X'_{p,3}`
    Xprime3,
}

impl EllipticFamily {
    pub const ALL: [EllipticFamily; 4] = [EllipticFamily::G2, EllipticFamily::Gprime2, EllipticFamily::Gbar1, EllipticFamily::Xprime3];

    /// The hyperbolic series `(family, m)` this expression evaluates.
    pub fn series(self) -> (SeriesFamily, u32) {
        match self {
            EllipticFamily::G2 => (SeriesFamily::G, 2),
            EllipticFamily::Gprime2 => (SeriesFamily::Gprime, 2),
            EllipticFamily::Gbar1 => (SeriesFamily::Gbar, 2),
            EllipticFamily::Xprime3 => (SeriesFamily::Xprime, 3),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            EllipticFamily::G2 => "G2",
            EllipticFamily::Gprime2 => "Gprime2",
            EllipticFamily::Gbar1 => "Gbar1",
            EllipticFamily::Xprime3 => "Xprime3",
        }
    }
}

impl fmt::Display for EllipticFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EllipticFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        EllipticFamily::ALL
            .iter()
            .copied()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Domain(format!("unknown elliptic family {s:?}")))
    }
}

fn zpow(a: i32, b: i32) -> EllipticExpr {
    EllipticExpr::term(RatPoly::one(), a, b, false, false)
}

/// `X'_{p,1} = -ε z^{p+1} √(x(1-x)) P_p(x) / 2`.
fn xprime1(p: i64) -> Result<EllipticExpr> {
    let pp = poly(Family::P, p as usize)?;
    let coef = rat(-epsilon(p), 2);
    Ok(EllipticExpr::term(pp.scale(&coef), (p + 1) as i32, 0, true, true))
}

/// The elliptic-function evaluation of the series named by `family` at odd `p >= 3`.
pub fn elliptic_expr_for(family: EllipticFamily, p: i64) -> Result<EllipticExpr> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::Domain(format!("elliptic expressions need odd p >= 3, got {p}")));
    }
    let eps = rint(epsilon(p));
    let pi = p as i32;
    let xx = EllipticExpr::term(x_one_minus_x(), 0, 0, false, false);
    let two_p = rat_pow(&rint(2), -pi);
    Ok(match family {
        EllipticFamily::G2 => {
            let r = table_r(p as u32)?.reflect();
            let first = EllipticExpr::term(r, pi + 1, 0, false, false)
                .mul(&xx)
                .scale(&(&eps * Rational::from_integer(factorial((p - 1) as u32)) * rat_pow(&rint(2), -(pi + 1))));
            let h = EllipticExpr::term(poly(Family::S, (p - 1) as usize)?.reflect(), 0, 0, false, true);
            let inner = xx.mul(&zpow(pi + 1, 1)).mul(&h).scale(&rint(p)).add(&zpow(pi + 2, 0).mul(&h.theta()));
            first.sub(&inner.scale(&(&eps * &two_p)))
        }
        EllipticFamily::Gprime2 => {
            let a = poly(Family::A, (p - 1) as usize)?.reflect();
            let first = EllipticExpr::term(a, pi, 0, true, false).scale(&(-&eps / rint(2)));
            let k = EllipticExpr::term(poly(Family::P, (p - 2) as usize)?.reflect(), 0, 0, true, true);
            let second = xx.mul(&zpow(pi, 1)).mul(&k).scale(&rint(p - 1));
            let third = zpow(pi + 1, 0).mul(&k.theta());
            first.add(&second).add(&third)
        }
        EllipticFamily::Gbar1 => {
            let pp = poly(Family::P, p as usize)?.reflect();
            let first = EllipticExpr::term(pp, pi + 1, 0, true, true).scale(&rat(1, 2));
            let a = EllipticExpr::term(poly(Family::A, (p - 1) as usize)?.reflect(), 0, 0, true, false);
            let inner = xx.mul(&zpow(pi + 1, 1)).mul(&a).scale(&rint(p)).add(&zpow(pi + 2, 0).mul(&a.theta()));
            first.sub(&inner.scale(&eps))
        }
        EllipticFamily::Xprime3 => {
            let lower = xprime1(p - 2)?;
            xprime1(p)?.scale(&rat(1, 2)).sub(&lower.d_y().d_y().scale(&rint(2)))
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperseries::series;

    #[test]
    fn theta_of_z_and_roots() {
        let z = zpow(1, 0);
        assert_eq!(z.theta(), EllipticExpr::term(x_one_minus_x(), 0, 1, false, false));
        let sx = EllipticExpr::term(RatPoly::one(), 0, 0, true, false);
        assert_eq!(sx.theta(), EllipticExpr::term(RatPoly::one_minus_x().scale(&rat(1, 2)), 0, 0, true, false));
        // √x · √x = x
        assert_eq!(sx.mul(&sx), EllipticExpr::term(RatPoly::x(), 0, 0, false, false));
    }

    #[test]
    fn g2_example_structure() {
        // (1/16) x z⁴ {6 z' x (1-x)^{3/2} - √(1-x)(3x-2) z + 2(x-1)}
        let e = elliptic_expr_for(EllipticFamily::G2, 3).unwrap();
        let x = RatPoly::x();
        let one_minus = RatPoly::one_minus_x();
        let expect = EllipticExpr::term((&(&x * &x) * &one_minus).scale(&rat(6, 16)), 4, 1, false, true)
            .add(&EllipticExpr::term((&x * &RatPoly::from_i64s(&[2, -3])).scale(&rat(1, 16)), 5, 0, false, true))
            .add(&EllipticExpr::term((&x * &RatPoly::from_i64s(&[-1, 1])).scale(&rat(2, 16)), 4, 0, false, false));
        assert_eq!(e, expect);
    }

    #[test]
    fn gprime2_example_structure() {
        // (1/2) z³ √((1-x)x) {4 z'(1-x)x + (1-2x) z - √(1-x)}
        let e = elliptic_expr_for(EllipticFamily::Gprime2, 3).unwrap();
        let expect = EllipticExpr::term(x_one_minus_x().scale(&rint(2)), 3, 1, true, true)
            .add(&EllipticExpr::term(RatPoly::from_i64s(&[1, -2]).scale(&rat(1, 2)), 4, 0, true, true))
            .add(&EllipticExpr::term(RatPoly::one_minus_x().scale(&rat(-1, 2)), 3, 0, true, false));
        assert_eq!(e, expect);
    }

    #[test]
    fn gbar1_example_structure() {
        // (1/2) √x z⁴ {-6 z'(x-1)² x - (x-1)(3x-1) z + (1-2x) √(1-x)}
        let e = elliptic_expr_for(EllipticFamily::Gbar1, 3).unwrap();
        let xm1 = RatPoly::from_i64s(&[-1, 1]);
        let expect = EllipticExpr::term((&(&xm1 * &xm1) * &RatPoly::x()).scale(&rint(-3)), 4, 1, true, false)
            .add(&EllipticExpr::term((&xm1 * &RatPoly::from_i64s(&[-1, 3])).scale(&rat(-1, 2)), 5, 0, true, false))
            .add(&EllipticExpr::term(RatPoly::from_i64s(&[1, -2]).scale(&rat(1, 2)), 4, 0, true, true));
        assert_eq!(e, expect);
    }

    #[test]
    fn expressions_match_series() {
        let prec = 160;
        for y in ["1.2", "2", "pi"] {
            let yv = if y == "pi" { BigReal::pi(prec) } else { BigReal::parse(y, prec).unwrap() };
            let mp = ModularPoint::from_y(&yv, prec).unwrap();
            for fam in EllipticFamily::ALL {
                for p in [3i64, 5, 7] {
                    let (sf, m) = fam.series();
                    let s = series(sf, p, m, &yv, prec).unwrap();
                    let e = elliptic_expr_for(fam, p).unwrap().eval(&mp);
                    let scale = BigReal::max(&s.abs(), &BigReal::from_f64(1e-30, prec));
                    let d = (&s - &e).abs() / scale;
                    assert!(d.abs_below_pow2(-140), "{fam} p={p} y={y}: {} vs {}", s.to_decimal(20), e.to_decimal(20));
                }
            }
        }
    }

    #[test]
    fn vanishing_roots_at_degenerate_modulus() {
        let e = elliptic_expr_for(EllipticFamily::Gbar1, 5).unwrap();
        assert!(e.terms().all(|(k, _)| k.sqrt_x));
    }
}
