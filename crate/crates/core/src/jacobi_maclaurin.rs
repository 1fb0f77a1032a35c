//! Exact Maclaurin coefficient polynomials of the Jacobi functions in the
//! modulus variable `x = k²`, and the numerical identities tying them to the
//! hyperbolic series.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::elliptic_core::{BigReal, ModularPoint};
use crate::error::{Error, Result};
use crate::exactalg::{factorial, PolySeries, RatPoly, Rational};
use crate::hyperseries::{epsilon, series, SeriesFamily};

/// `(sn, cn, dn)` truncated before `u^order`, from the system
/// `sn' = cn dn`, `cn' = -sn dn`, `dn' = -x sn cn`.
pub fn jacobi_base_series(order: usize) -> Result<(PolySeries, PolySeries, PolySeries)> {
    if order < 2 {
        return Err(Error::Domain(format!("base series need order >= 2, got {order}")));
    }
    let mut s = vec![RatPoly::zero(); order];
    let mut c = vec![RatPoly::zero(); order];
    let mut d = vec![RatPoly::zero(); order];
    c[0] = RatPoly::one();
    d[0] = RatPoly::one();
    let conv = |a: &[RatPoly], b: &[RatPoly], k: usize| -> RatPoly {
        (0..=k).fold(RatPoly::zero(), |acc, i| if a[i].is_zero() || b[k - i].is_zero() { acc } else { &acc + &(&a[i] * &b[k - i]) })
    };
    for k in 0..order - 1 {
        let inv = Rational::new(BigInt::one(), BigInt::from(k + 1));
        s[k + 1] = conv(&c, &d, k).scale(&inv);
        c[k + 1] = (-&conv(&s, &d, k)).scale(&inv);
        d[k + 1] = (-&conv(&s, &c, k)).shift(1).scale(&inv);
    }
    Ok((PolySeries::new(s, order), PolySeries::new(c, order), PolySeries::new(d, order)))
}

/// Derived expansions shared by every table.
struct Expansions {
    order: usize,
    cd: PolySeries,
    nd: PolySeries,
    sd: PolySeries,
    sn2: PolySeries,
}

fn expansions(order: usize) -> Result<Arc<Expansions>> {
    static CACHE: OnceLock<Mutex<Option<Arc<Expansions>>>> = OnceLock::new();
    let cell = CACHE.get_or_init(|| Mutex::new(None));
    let mut guard = cell.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(e) = guard.as_ref() {
        if e.order >= order {
            return Ok(e.clone());
        }
    }
    let order = order.max(8).next_multiple_of(8);
    let (sn, cn, dn) = jacobi_base_series(order)?;
    let nd = PolySeries::one(order).div(&dn)?;
    let e = Arc::new(Expansions { order, cd: cn.mul(&nd), sd: sn.mul(&nd), sn2: sn.mul(&sn), nd });
    *guard = Some(e.clone());
    Ok(e)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    S,
    A,
    P,
    Q,
    R,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "S" => Ok(Family::S),
            "A" => Ok(Family::A),
            "P" => Ok(Family::P),
            "Q" => Ok(Family::Q),
            "R" => Ok(Family::R),
            _ => Err(Error::Domain(format!("unknown coefficient family {s:?}"))),
        }
    }
}

/// Power of `yz/π` in the transformed `X_{p,1}` identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub enum ExponentRule {
    Fixed(i64),
    /// `p + offset`
    PPlus(i64),
}

impl ExponentRule {
    pub fn apply(self, p: i64) -> i64 {
        match self {
            ExponentRule::Fixed(k) => k,
            ExponentRule::PPlus(k) => p + k,
        }
    }
}

impl From<ExponentRule> for String {
    fn from(e: ExponentRule) -> String {
        e.to_string()
    }
}

impl TryFrom<String> for ExponentRule {
    type Error = String;
    fn try_from(s: String) -> std::result::Result<Self, String> {
        let bad = || format!("bad exponent rule {s:?}");
        match s.strip_prefix('p') {
            Some("") => Ok(ExponentRule::PPlus(0)),
            Some(rest) => rest.trim_start_matches('+').parse().map(ExponentRule::PPlus).map_err(|_| bad()),
            None => s.parse().map(ExponentRule::Fixed).map_err(|_| bad()),
        }
    }
}

impl fmt::Display for ExponentRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExponentRule::Fixed(k) => write!(f, "{k}"),
            ExponentRule::PPlus(0) => write!(f, "p"),
            ExponentRule::PPlus(k) if *k > 0 => write!(f, "p+{k}"),
            ExponentRule::PPlus(k) => write!(f, "p{k}"),
        }
    }
}

/// Normalization `sign · (±1)^{⌊n/2⌋} · (n!)^factorial_power` applied to the
/// raw Maclaurin coefficient `[u^n]`, fixed by a numerical calibration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub sign: i32,
    pub alternating: bool,
    pub factorial_power: i32,
    pub exponent: Option<ExponentRule>,
    /// Evaluation point of the calibration, as `y`.
    pub point: String,
    /// Worst agreement over the calibration indices, in decimal digits.
    #[serde(with = "digits_string")]
    pub digits: f64,
}

/// Agreement digits as a decimal string with one fractional digit.
mod digits_string {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{:.1}", v.min(999.0)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl Calibration {
    fn factor(&self, n: usize) -> Rational {
        let mut f = Rational::from_integer(BigInt::from(self.sign));
        if self.alternating && (n / 2) % 2 == 1 {
            f = -f;
        }
        let fact = Rational::from_integer(factorial(n as u32));
        match self.factorial_power {
            1 => f * fact,
            -1 => f / fact,
            _ => f,
        }
    }
}

const CALIBRATION_PRECISION: usize = 192;
const CALIBRATION_DIGITS: f64 = 40.0;
const CALIBRATION_Y: &str = "2";

fn candidates() -> Vec<(i32, bool, i32)> {
    let mut v = Vec::new();
    for sign in [1, -1] {
        for alternating in [false, true] {
            for factorial_power in [1, 0, -1] {
                v.push((sign, alternating, factorial_power));
            }
        }
    }
    v
}

fn agreement_digits(a: &BigReal, b: &BigReal) -> f64 {
    let d = BigReal::rel_diff(a, b);
    if d.is_zero() {
        f64::INFINITY
    } else {
        -d.log10_abs()
    }
}

fn pick_unique(family: &str, passing: Vec<Calibration>) -> Result<Calibration> {
    match passing.len() {
        1 => Ok(passing.into_iter().next().expect("one element")),
        0 => Err(Error::CalibrationFailure {
            family: family.into(),
            detail: format!("no candidate normalization agrees to {CALIBRATION_DIGITS} digits"),
        }),
        k => Err(Error::CalibrationFailure { family: family.into(), detail: format!("{k} candidates agree") }),
    }
}

/// Normalization of `P_n` from `X'_{p,1}(y) = -ε z^{p+1} √(x(1-x)) P_p(x) / 2`,
/// checked at `p = 3, 5`.
pub fn calibration_p() -> Result<Calibration> {
    static CAL: OnceLock<std::result::Result<Calibration, Error>> = OnceLock::new();
    CAL.get_or_init(|| {
        let prec = CALIBRATION_PRECISION;
        let y = BigReal::parse(CALIBRATION_Y, prec).expect("literal");
        let pt = ModularPoint::from_y(&y, prec)?;
        let ex = expansions(8)?;
        let root = (&pt.x * &pt.x_comp).sqrt();
        let ps = [3i64, 5];
        let lhs: Vec<BigReal> = ps.iter().map(|&p| series(SeriesFamily::Xprime, p, 1, &y, prec)).collect::<Result<_>>()?;
        let mut passing = Vec::new();
        for (sign, alternating, factorial_power) in candidates() {
            let mut cal = Calibration {
                sign,
                alternating,
                factorial_power,
                exponent: None,
                point: format!("y = {CALIBRATION_Y}"),
                digits: f64::INFINITY,
            };
            for (i, &p) in ps.iter().enumerate() {
                let poly = ex.sd.coeff(p as usize).scale(&cal.factor(p as usize));
                let rhs = -(pt.z.powi(p + 1) * &root * poly.eval_real(&pt.x)).mul_i64(epsilon(p)).div_i64(2);
                cal.digits = cal.digits.min(agreement_digits(&lhs[i], &rhs));
            }
            if cal.digits >= CALIBRATION_DIGITS {
                passing.push(cal);
            }
        }
        pick_unique("P", passing)
    })
    .clone()
}

/// Normalization of `q_n` and the power of `yz/π` from
/// `X_{p,1}(π²/y) = -((p-1)!/2^{p+1}) (yz/π)^E x(1-x) R_{p-1}(1-x)`,
/// checked at `p = 3, 5, 7`.
pub fn calibration_q() -> Result<Calibration> {
    static CAL: OnceLock<std::result::Result<Calibration, Error>> = OnceLock::new();
    CAL.get_or_init(|| {
        let prec = CALIBRATION_PRECISION;
        let y = BigReal::parse(CALIBRATION_Y, prec).expect("literal");
        let pt = ModularPoint::from_y(&y, prec)?;
        let wp = pt.prec();
        let pi = BigReal::pi(wp);
        let t = pi.square() / y.round_to(wp);
        let ex = expansions(8)?;
        let ratio = &y.round_to(wp) * &pt.z / &pi;
        let xx = &pt.x * &pt.x_comp;
        let ps = [3i64, 5, 7];
        let lhs: Vec<BigReal> = ps.iter().map(|&p| series(SeriesFamily::X, p, 1, &t, prec)).collect::<Result<_>>()?;
        let rules =
            [ExponentRule::Fixed(2), ExponentRule::PPlus(-1), ExponentRule::PPlus(0), ExponentRule::PPlus(1), ExponentRule::PPlus(2)];
        let mut passing = Vec::new();
        for (sign, alternating, factorial_power) in candidates() {
            for rule in rules {
                let mut cal = Calibration {
                    sign,
                    alternating,
                    factorial_power,
                    exponent: Some(rule),
                    point: format!("y = {CALIBRATION_Y}"),
                    digits: f64::INFINITY,
                };
                for (i, &p) in ps.iter().enumerate() {
                    let n = (p - 1) as usize;
                    let q = ex.sn2.coeff(n).scale(&cal.factor(n));
                    let r = q.compose_moebius(p as u32)?;
                    let pref = BigReal::from_bigint(&factorial((p - 1) as u32), wp) / BigReal::from_i64(2, wp).powi(p + 1);
                    let rhs = -(pref * ratio.powi(rule.apply(p)) * &xx * r.eval_real(&pt.x));
                    cal.digits = cal.digits.min(agreement_digits(&lhs[i], &rhs));
                }
                if cal.digits >= CALIBRATION_DIGITS {
                    passing.push(cal);
                }
            }
        }
        pick_unique("Q", passing)
    })
    .clone()
}

/// Exact coefficient polynomials keyed by subscript.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoefficientTable {
    pub family: Family,
    pub entries: BTreeMap<usize, RatPoly>,
    pub max_index: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub calibration: Option<Calibration>,
}

#[derive(Serialize)]
struct ExportEntry<'a> {
    index: usize,
    coefficients: &'a RatPoly,
}

#[derive(Serialize)]
struct Export<'a> {
    family: Family,
    max_index: usize,
    variable: &'static str,
    entries: Vec<ExportEntry<'a>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    calibration: &'a Option<Calibration>,
}

impl CoefficientTable {
    pub fn get(&self, index: usize) -> Option<&RatPoly> {
        self.entries.get(&index)
    }

    /// JSON layout: family, max_index, and per entry the index with its
    /// ascending coefficient list as decimal strings.
    pub fn to_json(&self) -> serde_json::Value {
        let export = Export {
            family: self.family,
            max_index: self.max_index,
            variable: if self.family == Family::R { "t" } else { "x" },
            entries: self.entries.iter().map(|(&index, coefficients)| ExportEntry { index, coefficients }).collect(),
            calibration: &self.calibration,
        };
        serde_json::to_value(export).expect("table serializes")
    }

    pub fn latex(&self) -> String {
        let var = if self.family == Family::R { "t" } else { "x" };
        self.entries
            .iter()
            .map(|(n, p)| format!("{}_{{{}}}({var}) &= {} \\\\", self.family, n, p.latex(var)))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

impl fmt::Display for CoefficientTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let var = if self.family == Family::R { "t" } else { "x" };
        for (n, p) in &self.entries {
            writeln!(f, "{}_{} = {}", self.family, n, p.text(var))?;
        }
        if let Some(c) = &self.calibration {
            writeln!(f, "# normalization: {c}")?;
        }
        Ok(())
    }
}

impl fmt::Display for Calibration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sign {:+}, alternating {}, (n!)^{}", self.sign, self.alternating, self.factorial_power)?;
        if let Some(e) = self.exponent {
            write!(f, ", exponent {e}")?;
        }
        write!(f, " (calibrated at {}, {:.1} digits)", self.point, self.digits.min(999.0))
    }
}

fn signed_factorial_scale(n: usize) -> Rational {
    let f = Rational::from_integer(factorial(n as u32));
    if (n / 2) % 2 == 1 {
        -f
    } else {
        f
    }
}

fn check_integral(family: Family, entries: &BTreeMap<usize, RatPoly>) -> Result<()> {
    for (&index, p) in entries {
        if !p.is_integral() {
            return Err(Error::IntegralityViolation { family: family.to_string(), index });
        }
    }
    Ok(())
}

/// `S_{2n}(x) = (-1)^n (2n)! [u^{2n}] cd(u)` for even subscripts up to `max_index`.
pub fn table_s(max_index: usize) -> Result<CoefficientTable> {
    let ex = expansions(max_index + 1)?;
    let entries: BTreeMap<_, _> = (0..=max_index).step_by(2).map(|n| (n, ex.cd.coeff(n).scale(&signed_factorial_scale(n)))).collect();
    check_integral(Family::S, &entries)?;
    Ok(CoefficientTable { family: Family::S, entries, max_index, calibration: None })
}

/// `A_{2n}(x) = (-1)^n (2n)! [u^{2n}] nd(u)` for even subscripts up to `max_index`.
pub fn table_a(max_index: usize) -> Result<CoefficientTable> {
    let ex = expansions(max_index + 1)?;
    let entries: BTreeMap<_, _> = (0..=max_index).step_by(2).map(|n| (n, ex.nd.coeff(n).scale(&signed_factorial_scale(n)))).collect();
    check_integral(Family::A, &entries)?;
    Ok(CoefficientTable { family: Family::A, entries, max_index, calibration: None })
}

/// `P_n(x)` from `sd(u)` for odd subscripts `1..=max_index`, normalized by [`calibration_p`].
pub fn table_p(max_index: usize) -> Result<CoefficientTable> {
    if max_index < 1 {
        return Err(Error::Domain("table P needs max_index >= 1".into()));
    }
    let cal = calibration_p()?;
    let ex = expansions(max_index + 1)?;
    let entries = (1..=max_index).step_by(2).map(|n| (n, ex.sd.coeff(n).scale(&cal.factor(n)))).collect();
    Ok(CoefficientTable { family: Family::P, entries, max_index, calibration: Some(cal) })
}

/// `q_n(x)` from `sn(u)²` for even subscripts `2..=max_index`, normalized by [`calibration_q`].
pub fn table_q(max_index: usize) -> Result<CoefficientTable> {
    if max_index < 2 {
        return Err(Error::Domain("table Q needs max_index >= 2".into()));
    }
    let cal = calibration_q()?;
    let ex = expansions(max_index + 1)?;
    let entries = (2..=max_index).step_by(2).map(|n| (n, ex.sn2.coeff(n).scale(&cal.factor(n)))).collect();
    Ok(CoefficientTable { family: Family::Q, entries, max_index, calibration: Some(cal) })
}

/// `R_{p-1}` as a polynomial in its own argument `t`; the transformed
/// identity evaluates it at `t = 1 - x`.
pub fn table_r(p: u32) -> Result<RatPoly> {
    if p < 3 || p.is_multiple_of(2) {
        return Err(Error::Domain(format!("R needs odd p >= 3, got {p}")));
    }
    let q = table_q((p - 1) as usize)?;
    let in_x = q.get((p - 1) as usize).expect("entry present").compose_moebius(p)?;
    Ok(in_x.reflect())
}

/// `R_{p-1}(t)` for odd `p` in `3..=max_p`, keyed by `p - 1`.
pub fn table_r_family(max_p: u32) -> Result<CoefficientTable> {
    if max_p < 3 {
        return Err(Error::Domain("table R needs max p >= 3".into()));
    }
    let mut entries = BTreeMap::new();
    for p in (3..=max_p).step_by(2) {
        entries.insert((p - 1) as usize, table_r(p)?);
    }
    Ok(CoefficientTable { family: Family::R, entries, max_index: (max_p - 1) as usize, calibration: calibration_q().ok() })
}

/// Table for a family up to a subscript (for `R`, up to `p`).
pub fn table(family: Family, max_index: usize) -> Result<CoefficientTable> {
    match family {
        Family::S => table_s(max_index),
        Family::A => table_a(max_index),
        Family::P => table_p(max_index),
        Family::Q => table_q(max_index),
        Family::R => table_r_family(max_index as u32),
    }
}

/// Single polynomial lookup that builds only what is needed.
pub fn poly(family: Family, index: usize) -> Result<RatPoly> {
    if family == Family::R {
        return table_r(index as u32 + 1);
    }
    let t = table(family, index)?;
    t.get(index).cloned().ok_or_else(|| Error::Domain(format!("{family}_{index} has the wrong parity")))
}

/// Both sides of a series identity.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub lhs: BigReal,
    pub rhs: BigReal,
}

impl IdentityCheck {
    pub fn rel_diff(&self) -> BigReal {
        BigReal::rel_diff(&self.lhs, &self.rhs)
    }

    pub fn digits(&self) -> f64 {
        agreement_digits(&self.lhs, &self.rhs)
    }
}

/// `Y_{2n+1,1}(y) = -z^{2n+1} √x S_{2n}(x) / 2`.
pub fn y_identity(n: u32, y: &BigReal, precision: usize) -> Result<IdentityCheck> {
    let p = 2 * n as i64 + 1;
    let pt = ModularPoint::from_y(y, precision)?;
    let s = poly(Family::S, 2 * n as usize)?;
    let lhs = series(SeriesFamily::Y, p, 1, y, precision)?;
    let rhs = -(pt.z.powi(p) * pt.sqrt_x() * s.eval_real(&pt.x)).div_i64(2);
    Ok(IdentityCheck { lhs, rhs })
}

/// `B_{p,1}(y) = z^p √(1-x) A_{p-1}(x) / 2^p` for odd `p`.
pub fn b_identity(p: u32, y: &BigReal, precision: usize) -> Result<IdentityCheck> {
    if p < 1 || p.is_multiple_of(2) {
        return Err(Error::Domain(format!("B identity needs odd p, got {p}")));
    }
    let p = p as i64;
    let pt = ModularPoint::from_y(y, precision)?;
    let a = poly(Family::A, (p - 1) as usize)?;
    let lhs = series(SeriesFamily::B, p, 1, y, precision)?;
    let rhs = pt.z.powi(p) * pt.sqrt_x_comp() * a.eval_real(&pt.x) / BigReal::from_i64(2, pt.prec()).powi(p);
    Ok(IdentityCheck { lhs, rhs })
}

/// `X'_{p,1}(y) = -ε z^{p+1} √(x(1-x)) P_p(x) / 2` for odd `p`.
pub fn xprime_identity(p: u32, y: &BigReal, precision: usize) -> Result<IdentityCheck> {
    if p < 1 || p.is_multiple_of(2) {
        return Err(Error::Domain(format!("X' identity needs odd p, got {p}")));
    }
    let p = p as i64;
    let pt = ModularPoint::from_y(y, precision)?;
    let pp = poly(Family::P, p as usize)?;
    let lhs = series(SeriesFamily::Xprime, p, 1, y, precision)?;
    let rhs = -(pt.z.powi(p + 1) * (&pt.x * &pt.x_comp).sqrt() * pp.eval_real(&pt.x)).mul_i64(epsilon(p)).div_i64(2);
    Ok(IdentityCheck { lhs, rhs })
}

/// `X_{p,1}(π²/y) = -((p-1)!/2^{p+1}) (yz/π)^E x(1-x) R_{p-1}(1-x)` for odd `p >= 3`,
/// with `E` from the calibrated exponent rule.
pub fn x_transformed_identity(p: u32, y: &BigReal, precision: usize) -> Result<IdentityCheck> {
    let r = table_r(p)?;
    let rule = calibration_q()?.exponent.unwrap_or(ExponentRule::PPlus(1));
    let p = p as i64;
    let pt = ModularPoint::from_y(y, precision)?;
    let wp = pt.prec();
    let pi = BigReal::pi(wp);
    let yw = y.round_to(wp);
    let lhs = series(SeriesFamily::X, p, 1, &(pi.square() / &yw), precision)?;
    let pref = BigReal::from_bigint(&factorial((p - 1) as u32), wp) / BigReal::from_i64(2, wp).powi(p + 1);
    let ratio = &yw * &pt.z / &pi;
    let rhs = -(pref * ratio.powi(rule.apply(p)) * &pt.x * &pt.x_comp * r.eval_real(&pt.x_comp));
    Ok(IdentityCheck { lhs, rhs })
}

/// Raw Maclaurin coefficient `[u^n]` of one of the derived expansions, for tests
/// and diagnostics.
pub fn raw_coefficient(which: &str, n: usize) -> Result<RatPoly> {
    let ex = expansions(n + 1)?;
    let s = match which {
        "cd" => &ex.cd,
        "nd" => &ex.nd,
        "sd" => &ex.sd,
        "sn2" => &ex.sn2,
        _ => return Err(Error::Domain(format!("unknown expansion {which:?}"))),
    };
    Ok(s.coeff(n).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::{rat, rint};
    use num_traits::Zero;

    #[test]
    fn base_series_leading_terms() {
        let (sn, cn, dn) = jacobi_base_series(6).unwrap();
        assert_eq!(sn.coeff(1), &RatPoly::one());
        assert_eq!(sn.coeff(3), &RatPoly::new(vec![rat(-1, 6), rat(-1, 6)]));
        assert!(sn.coeff(0).is_zero() && cn.coeff(0) == &RatPoly::one() && dn.coeff(0) == &RatPoly::one());
        assert!(sn.has_parity(1) && cn.has_parity(0) && dn.has_parity(0));
        assert_eq!(dn.coeff(2), &RatPoly::new(vec![rint(0), rat(-1, 2)]));
    }

    #[test]
    fn degenerate_modulus_gives_trig() {
        let (sn, cn, dn) = jacobi_base_series(12).unwrap();
        let zero = rint(0);
        for k in 0..12 {
            let f = Rational::from_integer(factorial(k as u32));
            let sin_k = match k % 4 {
                1 => rint(1),
                3 => rint(-1),
                _ => rint(0),
            };
            let cos_k = match k % 4 {
                0 => rint(1),
                2 => rint(-1),
                _ => rint(0),
            };
            assert_eq!(sn.coeff(k).eval(&zero) * &f, sin_k);
            assert_eq!(cn.coeff(k).eval(&zero) * &f, cos_k);
            assert_eq!(dn.coeff(k).eval(&zero), if k == 0 { rint(1) } else { rint(0) });
        }
    }

    #[test]
    fn s_and_a_tables() {
        let s = table_s(12).unwrap();
        assert_eq!(s.get(0).unwrap(), &RatPoly::one());
        assert_eq!(s.get(2).unwrap(), &RatPoly::one_minus_x());
        for p in s.entries.values() {
            assert_eq!(p.eval(&rint(0)), rint(1));
            assert!(p.is_integral());
        }
        let a = table_a(12).unwrap();
        assert_eq!(a.get(0).unwrap(), &RatPoly::one());
        assert_eq!(a.get(2).unwrap(), &RatPoly::from_i64s(&[0, -1]));
        for (n, p) in &a.entries {
            if *n > 0 {
                assert_eq!(p.eval(&rint(0)), rint(0));
            }
        }
    }

    #[test]
    fn calibrations_match_golden_conventions() {
        let p = calibration_p().unwrap();
        assert_eq!((p.sign, p.alternating, p.factorial_power), (1, false, 1));
        assert!(p.digits >= 40.0);
        let q = calibration_q().unwrap();
        assert_eq!((q.sign, q.alternating, q.factorial_power), (1, false, 1));
        assert_eq!(q.exponent, Some(ExponentRule::PPlus(1)));
    }

    #[test]
    fn p_table_values() {
        let t = table_p(7).unwrap();
        assert_eq!(t.get(1).unwrap(), &RatPoly::one());
        assert_eq!(t.get(3).unwrap(), &RatPoly::from_i64s(&[-1, 2]));
        let half = rat(1, 2);
        assert!(t.get(3).unwrap().eval(&half).is_zero());
        assert!(t.get(7).unwrap().eval(&half).is_zero());
        assert!(t.get(5).unwrap().diff().eval(&half).is_zero());
    }

    #[test]
    fn q_table_at_zero_is_sine_squared() {
        let t = table_q(10).unwrap();
        // n! [u^n] sin²u = -(-4)^{n/2} / 2 for even n >= 2
        for (n, p) in &t.entries {
            let expect = -num_traits::pow(rint(-4), n / 2) / rint(2);
            assert_eq!(p.eval(&rint(0)), expect, "n = {n}");
        }
        assert_eq!(t.get(2).unwrap(), &RatPoly::constant(rint(2)));
    }

    #[test]
    fn r_is_polynomial_through_p19() {
        for p in (3..=19).step_by(2) {
            let r = table_r(p).unwrap();
            assert!(r.degree().unwrap_or(0) <= ((p - 3) / 2) as usize);
        }
        assert_eq!(table_r(3).unwrap(), RatPoly::one());
    }

    #[test]
    fn y_and_b_identities() {
        let prec = 192;
        for y in [BigReal::pi(prec), BigReal::from_i64(2, prec)] {
            for n in [1, 2] {
                assert!(y_identity(n, &y, prec).unwrap().digits() > 45.0);
            }
            for p in [3, 5] {
                assert!(b_identity(p, &y, prec).unwrap().digits() > 45.0);
            }
        }
    }

    #[test]
    fn transformed_x_identity_at_generic_point() {
        let prec = 192;
        let y = BigReal::pi(prec).square().div_i64(2);
        assert!(x_transformed_identity(5, &y, prec).unwrap().digits() > 45.0);
        assert!(xprime_identity(7, &BigReal::parse("1.3", prec).unwrap(), prec).unwrap().digits() > 45.0);
    }

    #[test]
    fn table_json_layout() {
        let t = table_s(4).unwrap();
        let v = t.to_json();
        assert_eq!(v["family"], "S");
        assert_eq!(v["entries"][1]["index"], 2);
        assert_eq!(v["entries"][1]["coefficients"], serde_json::json!(["1", "-1"]));
    }
}
