use serde::Serialize;

use super::{elliptic_expr_for, ClosedForm, EllipticFamily, Monomial};
use crate::error::{Error, Result};
use crate::exactalg::{rat, rat_pow, rint, RatPoly, Rational};
use crate::jacobi_maclaurin::{poly, Family};

fn check_m(m: u32) -> Result<i64> {
    if m == 0 {
        return Err(Error::Domain("closed forms need m >= 1".into()));
    }
    Ok(4 * m as i64 - 1)
}

/// Exact value of the series of `family` at `y = π` with `p = 4m - 1`.
pub fn closed_form_at_pi(family: EllipticFamily, m: u32) -> Result<ClosedForm> {
    let p = check_m(m)?;
    Ok(elliptic_expr_for(family, p)?.at_lemniscatic())
}

/// `Σ (-1)^n (2n-1)^{4m-1} / cosh³((2n-1)π/2)` as
/// `Γ^{8m-4}/(2^{4m+7} π^{6m+3}) {128(8m²-6m+1)π⁴ P + Γ⁸[(4m-6)P + P'']}`
/// with `P = P_{4m-3}(1/2)`.
pub fn closed_form_cosh3(m: u32) -> Result<ClosedForm> {
    check_m(m)?;
    let mi = m as i64;
    let half = rat(1, 2);
    let pm = poly(Family::P, (4 * mi - 3) as usize)?;
    let p0 = pm.eval(&half);
    let p2 = pm.diff().diff().eval(&half);
    let pre = rat_pow(&rint(2), -(4 * m as i32 + 7));
    let g = 8 * m as i32 - 4;
    let h = -(12 * m as i32 + 6);
    let first = ClosedForm::monomial(&pre * rint(128 * (8 * mi * mi - 6 * mi + 1)) * &p0, g, h + 8, 0);
    let second = ClosedForm::monomial(&pre * (rint(4 * mi - 6) * &p0 + p2), g + 8, h, 0);
    Ok(&first + &second)
}

/// The same value through the elliptic expression of `X'_{p,3}` at `x = 1/2`.
pub fn closed_form_cosh3_elliptic(m: u32) -> Result<ClosedForm> {
    closed_form_at_pi(EllipticFamily::Xprime3, m)
}

/// Exact value of `∫_0^∞ x^{4m-1} dx / [(cosh 2x - cos 2x)(cosh x + cos x)]`,
/// assembled from the four lemniscatic series values weighted by the
/// Gaussian-integer residue factors `i(1-i)^{p-1} = (-1)^{m+1} 2^{2m-1}` and
/// `(1-i)^{p+1} = (-4)^m`.
pub fn berndt_closed_form(m: u32) -> Result<ClosedForm> {
    let p = check_m(m)?;
    let pi2 = 2 * p as i32;
    let w = rint(if m % 2 == 1 { 1 } else { -1 }) * rat_pow(&rint(2), 2 * m as i32 - 1);
    let four_m = rat_pow(&rint(-4), m as i32);
    let two = |k: i64| rat_pow(&rint(2), k as i32);
    let gp = closed_form_at_pi(EllipticFamily::Gprime2, m)?;
    let g = closed_form_at_pi(EllipticFamily::G2, m)?;
    let x3 = closed_form_at_pi(EllipticFamily::Xprime3, m)?;
    let gb = closed_form_at_pi(EllipticFamily::Gbar1, m)?;
    let t1 = gp.scale(&(&w * rint(p) * two(-(p + 1)))).mul_monomial(0, pi2, 0);
    let t2 = g.scale(&(&four_m / rint(8))).mul_monomial(0, pi2 + 2, 0);
    let t3 = x3.scale(&(&w * two(-(p + 1)))).mul_monomial(0, pi2 + 2, 0);
    let t4 = gb.scale(&(&w * two(-(p + 2)))).mul_monomial(0, pi2 + 2, 0);
    Ok((&(&(&t1 + &t2) - &t3) - &t4).scale(&rat(1, 2)))
}

/// Five rational constants of the basis
/// `c₁Γ^{8m-4}/π^{2m-1} + (c₂/√2)Γ^{8m-2}/π^{(4m-1)/2} + c₃Γ^{8m}/π^{2m}
///  + (c₄/√2)Γ^{8m+2}/π^{(4m+3)/2} + c₅Γ^{8m+4}/π^{2m+3}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CCoefficients {
    #[serde(serialize_with = "ser_rats")]
    pub c: [Rational; 5],
}

fn ser_rats<S: serde::Serializer>(v: &[Rational; 5], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(5))?;
    for r in v {
        seq.serialize_element(&crate::exactalg::rat_to_string(r))?;
    }
    seq.end()
}

fn basis(m: u32) -> [Monomial; 5] {
    let m = m as i32;
    let mono = |g, h, t| Monomial { gamma_exp: g, pi_half_exp: h, two_half_exp: t };
    [
        mono(8 * m - 4, -(4 * m - 2), 0),
        mono(8 * m - 2, -(4 * m - 1), -1),
        mono(8 * m, -4 * m, 0),
        mono(8 * m + 2, -(4 * m + 3), -1),
        mono(8 * m + 4, -(4 * m + 6), 0),
    ]
}

impl CCoefficients {
    pub fn to_closed_form(&self, m: u32) -> ClosedForm {
        basis(m)
            .iter()
            .zip(&self.c)
            .fold(ClosedForm::zero(), |acc, (b, c)| &acc + &ClosedForm::monomial(c.clone(), b.gamma_exp, b.pi_half_exp, b.two_half_exp))
    }
}

/// Reads the five constants off the assembled closed form; fails if a term
/// falls outside the basis.
pub fn assembled_c_coefficients(m: u32) -> Result<CCoefficients> {
    let form = berndt_closed_form(m)?;
    let b = basis(m);
    for (mono, _) in form.terms() {
        if !b.contains(&mono) {
            return Err(Error::Domain(format!("term {mono:?} outside the five-term basis")));
        }
    }
    Ok(CCoefficients { c: b.map(|mono| form.coefficient(&mono)) })
}

/// The constants from the closed-form coefficient formulas
/// `c₁ = (-1)^{m-1} 2^{-6m-2}(8m²-6m+1)P`, `c₂ = (-1)^{m-1} 2^{-6m-3}(4m-1)(S-A)`,
/// `c₃ = (-1)^{m-1} 2^{-8m-4} q_{4m-2}(-1)`, `c₄ = (-1)^{m-1} 2^{-6m-6}(S'-S+A'+A)`,
/// `c₅ = (-1)^m 2^{-6m-9}[(4m-6)P + P'']`, with `P = P_{4m-3}(1/2)` and
/// `S, A` the index `4m-2` polynomials at `1/2`. These disagree with the
/// assembled value in `c₂` and `c₄`; see [`assembled_c_coefficients`].
pub fn formula_c_coefficients(m: u32) -> Result<CCoefficients> {
    check_m(m)?;
    let mi = m as i64;
    let mi32 = m as i32;
    let half = rat(1, 2);
    let at = |p: &RatPoly| p.eval(&half);
    let pm = poly(Family::P, (4 * mi - 3) as usize)?;
    let s = poly(Family::S, (4 * mi - 2) as usize)?;
    let a = poly(Family::A, (4 * mi - 2) as usize)?;
    let q = poly(Family::Q, (4 * mi - 2) as usize)?;
    let sgn = rint(if m % 2 == 1 { 1 } else { -1 });
    let two = |k: i32| rat_pow(&rint(2), k);
    let c1 = &sgn * two(-6 * mi32 - 2) * rint(8 * mi * mi - 6 * mi + 1) * at(&pm);
    let c2 = &sgn * two(-6 * mi32 - 3) * rint(4 * mi - 1) * (at(&s) - at(&a));
    let c3 = &sgn * two(-8 * mi32 - 4) * q.eval(&rint(-1));
    let c4 = &sgn * two(-6 * mi32 - 6) * (at(&s.diff()) - at(&s) + at(&a.diff()) + at(&a));
    let c5 = -&sgn * two(-6 * mi32 - 9) * (rint(4 * mi - 6) * at(&pm) + at(&pm.diff().diff()));
    Ok(CCoefficients { c: [c1, c2, c3, c4, c5] })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic_core::BigReal;
    use crate::hyperseries::{contour_identity_rhs, series, SeriesFamily};

    fn cf(terms: &[(i64, i64, i32, i32, i32)]) -> ClosedForm {
        terms.iter().fold(ClosedForm::zero(), |acc, &(n, d, g, h, t)| &acc + &ClosedForm::monomial(rat(n, d), g, h, t))
    }

    #[test]
    fn lemniscatic_values_m1() {
        let g2 = closed_form_at_pi(EllipticFamily::G2, 1).unwrap();
        let expect = cf(&[(1, 2048, 10, -15, -1), (-1, 512, 8, -12, 0), (3, 256, 6, -11, -1)]);
        assert_eq!(g2, expect);
        let gp = closed_form_at_pi(EllipticFamily::Gprime2, 1).unwrap();
        assert_eq!(gp, cf(&[(1, 8, 4, -8, 0), (-1, 32, 6, -9, -1)]));
        let gb = closed_form_at_pi(EllipticFamily::Gbar1, 1).unwrap();
        assert_eq!(gb, cf(&[(1, 256, 10, -15, -1), (-3, 32, 6, -11, -1)]));
    }

    #[test]
    fn lemniscatic_values_match_series() {
        let prec = 192;
        let pi = BigReal::pi(prec);
        for m in [1, 2] {
            for fam in EllipticFamily::ALL {
                let (sf, mm) = fam.series();
                let s = series(sf, 4 * m as i64 - 1, mm, &pi, prec).unwrap();
                let c = closed_form_at_pi(fam, m).unwrap().eval(prec);
                assert!(BigReal::rel_diff(&s, &c).abs_below_pow2(-170), "{fam} m={m}");
            }
        }
    }

    #[test]
    fn cosh3_two_routes() {
        for m in 1..=4 {
            let formula = closed_form_cosh3(m).unwrap();
            assert_eq!(formula, closed_form_cosh3_elliptic(m).unwrap(), "m = {m}");
            assert!(formula.len() <= 2);
        }
        let prec = 192;
        let s = series(SeriesFamily::Xprime, 3, 3, &BigReal::pi(prec), prec).unwrap();
        assert!(BigReal::rel_diff(&s, &closed_form_cosh3(1).unwrap().eval(prec)).abs_below_pow2(-170));
    }

    #[test]
    fn berndt_m1_exact() {
        let b = berndt_closed_form(1).unwrap();
        let expect = cf(&[(1, 16384, 12, -10, 0), (-1, 4096, 10, -7, -1), (1, 2048, 8, -4, 0), (-3, 512, 6, -3, -1), (3, 256, 4, -2, 0)]);
        assert_eq!(b, expect);
    }

    #[test]
    fn berndt_matches_contour_rhs() {
        let prec = 192;
        for m in [1u32, 2] {
            let v = berndt_closed_form(m).unwrap().eval(prec);
            let r = contour_identity_rhs(4 * m as i64 - 1, prec).unwrap().div_i64(2);
            assert!(BigReal::rel_diff(&v, &r).abs_below_pow2(-170));
        }
    }

    #[test]
    fn c_coefficient_formulas_versus_assembly() {
        let formula = formula_c_coefficients(1).unwrap();
        let assembled = assembled_c_coefficients(1).unwrap();
        assert_eq!(assembled.c, [rat(3, 256), rat(-3, 512), rat(1, 2048), rat(-1, 4096), rat(1, 16384)]);
        assert_eq!(formula.c[0], assembled.c[0]);
        assert_eq!(formula.c[2], assembled.c[2]);
        assert_eq!(formula.c[4], assembled.c[4]);
        assert_ne!(formula.c[1], assembled.c[1]);
        assert_ne!(formula.c[3], assembled.c[3]);
        assert_eq!(assembled.to_closed_form(1), berndt_closed_form(1).unwrap());
    }
}
