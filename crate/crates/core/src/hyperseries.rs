//! Alternating hyperbolic series families and residual evaluators for the
//! residue, modular-transformation and contour identities.

use std::fmt;
use std::str::FromStr;

use crate::elliptic_core::{working_precision, BigComplex, BigReal};
use crate::error::{Error, Result};
use num_bigint::BigInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SeriesFamily {
    G,
    Gprime,
    Gbar,
    X,
    Xprime,
    DXprime,
    Y,
    DY,
    B,
    DB,
}

impl SeriesFamily {
    pub const ALL: [SeriesFamily; 10] = [
        SeriesFamily::G,
        SeriesFamily::Gprime,
        SeriesFamily::Gbar,
        SeriesFamily::X,
        SeriesFamily::Xprime,
        SeriesFamily::DXprime,
        SeriesFamily::Y,
        SeriesFamily::DY,
        SeriesFamily::B,
        SeriesFamily::DB,
    ];

    /// Half-odd families use the argument `(2n-1)y/2` and the base `2n-1`.
    pub fn half_odd(self) -> bool {
        !matches!(self, SeriesFamily::G | SeriesFamily::X | SeriesFamily::B | SeriesFamily::DB)
    }

    /// Exponents `(a, b)` of `sinh^a(t) cosh^b(t)` in each term.
    fn hyperbolic_exponents(self, m: i64) -> (i64, i64) {
        match self {
            SeriesFamily::G | SeriesFamily::Gprime => (-1, -m),
            SeriesFamily::Gbar => (-m, -1),
            SeriesFamily::X | SeriesFamily::Y => (-m, 0),
            SeriesFamily::DY => (-m, 1),
            SeriesFamily::Xprime | SeriesFamily::B => (0, -m),
            SeriesFamily::DXprime | SeriesFamily::DB => (1, -m),
        }
    }

    /// Power of the base integer in each term, given `p`.
    fn base_power(self, p: i64) -> i64 {
        match self {
            SeriesFamily::Gprime | SeriesFamily::Y | SeriesFamily::B => p - 1,
            SeriesFamily::DXprime => p + 1,
            _ => p,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SeriesFamily::G => "G",
            SeriesFamily::Gprime => "Gprime",
            SeriesFamily::Gbar => "Gbar",
            SeriesFamily::X => "X",
            SeriesFamily::Xprime => "Xprime",
            SeriesFamily::DXprime => "DXprime",
            SeriesFamily::Y => "Y",
            SeriesFamily::DY => "DY",
            SeriesFamily::B => "B",
            SeriesFamily::DB => "DB",
        }
    }
}

impl fmt::Display for SeriesFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SeriesFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        SeriesFamily::ALL
            .iter()
            .copied()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Domain(format!("unknown series family {s:?}")))
    }
}

impl SeriesFamily {
    /// LaTeX for `Σ_{n≥1} (-1)^n base^k sinh^a(t) cosh^b(t)` with `y` rendered as `y_tex`.
    pub fn latex_sum(self, p: i64, m: u32, y_tex: &str) -> String {
        let (a, b) = self.hyperbolic_exponents(m as i64);
        let k = self.base_power(p);
        let (base, arg) = if self.half_odd() { ("(2n-1)", format!("\\tfrac{{(2n-1){y_tex}}}{{2}}")) } else { ("n", format!("n{y_tex}")) };
        let pow = |e: i64| if e == 1 { String::new() } else { format!("^{{{e}}}") };
        let mut num = vec!["(-1)^n".to_string()];
        if k != 0 {
            num.push(format!("{base}{}", pow(k)));
        }
        let mut den = Vec::new();
        for (name, e) in [("\\sinh", a), ("\\cosh", b)] {
            match e.signum() {
                1 => num.push(format!("{name}{}({arg})", pow(e))),
                -1 => den.push(format!("{name}{}({arg})", pow(-e))),
                _ => {}
            }
        }
        let num = num.join(" ");
        if den.is_empty() {
            format!("\\sum_{{n\\ge 1}} {num}")
        } else {
            format!("\\sum_{{n\\ge 1}} \\frac{{{num}}}{{{}}}", den.join(" "))
        }
    }
}

/// One member `F_{p,m}(y)` of a series family.
#[derive(Clone, Debug)]
pub struct SeriesSpec {
    pub family: SeriesFamily,
    pub p: i64,
    pub m: u32,
    pub y: BigReal,
}

impl SeriesSpec {
    pub fn new(family: SeriesFamily, p: i64, m: u32, y: BigReal) -> Self {
        SeriesSpec { family, p, m, y }
    }

    /// Exponential decay rate of the terms in units of the hyperbolic argument.
    pub fn decay(&self) -> i64 {
        let (a, b) = self.family.hyperbolic_exponents(self.m as i64);
        -(a + b)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.y.is_positive() {
            return Err(Error::Domain("series need y > 0".into()));
        }
        if self.m == 0 {
            return Err(Error::Domain("series need m >= 1".into()));
        }
        if self.decay() < 1 {
            return Err(Error::Domain(format!("{}_{{p,{}}} diverges: the terms do not decay", self.family, self.m)));
        }
        Ok(())
    }
}

/// Index after which the majorant tail `Σ_{n>N} C n'^k e^{-λ t_n}` of a series
/// with arguments `t_n = t1 + (n-1) dt` drops below `2^{-target_bits}`.
fn cutoff(k: f64, lambda: f64, t1: f64, dt: f64, half_odd: bool, log2_c: f64, target_bits: f64) -> usize {
    let log2_e = std::f64::consts::LOG2_E;
    let base = |n: f64| if half_odd { 2.0 * n - 1.0 } else { n };
    let log2_term = |n: f64| log2_c + k * base(n).log2() - lambda * (t1 + (n - 1.0) * dt) * log2_e;
    let mut n = 1usize;
    loop {
        let nf = n as f64;
        let ratio_log2 = log2_term(nf + 2.0) - log2_term(nf + 1.0);
        if ratio_log2 < -0.5 {
            let tail = log2_term(nf + 1.0) - (1.0 - ratio_log2.exp2()).log2();
            if tail < -target_bits {
                return n;
            }
        }
        n = if n < 64 { n + 1 } else { n + n / 8 };
        if n > 50_000_000 {
            return n;
        }
    }
}

/// Evaluates `F_{p,m}(y)` with truncation error below
/// `2^{-precision-10} · min(1, |first term|)`. The result carries
/// `precision + GUARD_BITS` bits.
pub fn eval_series(spec: &SeriesSpec, precision: usize) -> Result<BigReal> {
    spec.validate()?;
    let wp = working_precision(precision);
    let y = spec.y.round_to(wp);
    let fam = spec.family;
    let half = fam.half_odd();
    let (a, b) = fam.hyperbolic_exponents(spec.m as i64);
    let lambda = -(a + b);
    let k = fam.base_power(spec.p);

    let yf = y.to_f64();
    let (t1, dt) = if half { (yf / 2.0, yf) } else { (yf, yf) };
    let e1 = (-t1).exp();
    // bound on (1-E²)^a (1+E²)^b 2^λ over n >= 1
    let log2_c = lambda as f64 + if a < 0 { -(a as f64) * -(1.0 - e1 * e1).log2() } else { 0.0 } + if b > 0 { b as f64 } else { 0.0 };
    let first_log2 = log2_c - lambda as f64 * t1 * std::f64::consts::LOG2_E;
    let target = precision as f64 + 10.0 + (-first_log2).max(0.0) + 4.0;
    let n_max = cutoff(k.max(0) as f64, lambda as f64, t1, dt, half, log2_c, target);

    let one = BigReal::one(wp);
    let step = (-&y).exp();
    let mut e = if half { (-(y.div_i64(2))).exp() } else { step.clone() };
    let mut sum = BigReal::zero(wp);
    for n in 1..=n_max as i64 {
        let base = if half { 2 * n - 1 } else { n };
        let e2 = e.square();
        let sh = &one - &e2;
        let ch = &one + &e2;
        let mut num = BigReal::from_i64(base, wp).powi(k) * e.mul_i64(2).powi(lambda);
        let mut den = one.clone();
        match a.signum() {
            1 => num = num * sh.powi(a),
            -1 => den = den * sh.powi(-a),
            _ => {}
        }
        match b.signum() {
            1 => num = num * ch.powi(b),
            -1 => den = den * ch.powi(-b),
            _ => {}
        }
        let term = num / den;
        if n % 2 == 1 {
            sum = sum - term;
        } else {
            sum = sum + term;
        }
        e = &e * &step;
    }
    Ok(sum)
}

/// Convenience wrapper: `F_{p,m}(y)`.
pub fn series(family: SeriesFamily, p: i64, m: u32, y: &BigReal, precision: usize) -> Result<BigReal> {
    eval_series(&SeriesSpec::new(family, p, m, y.clone()), precision)
}

/// `(sinh t, cosh t)`, via `e^{-|t|}` away from zero.
fn sinh_cosh(t: &BigReal) -> (BigReal, BigReal) {
    let p = t.prec();
    if t.abs_below_pow2(-2) {
        let s = t.sinh();
        let c = (BigReal::one(p) + s.square()).sqrt();
        return (s, c);
    }
    let e = (-t.abs()).exp();
    let inv = e.recip();
    let s = (&inv - &e).div_i64(2);
    let c = (&inv + &e).div_i64(2);
    if t.is_negative() {
        (-s, c)
    } else {
        (s, c)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ResidueIdentity {
    Z1,
    Z2,
    Z3,
}

impl FromStr for ResidueIdentity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "Z1" => Ok(ResidueIdentity::Z1),
            "Z2" => Ok(ResidueIdentity::Z2),
            "Z3" => Ok(ResidueIdentity::Z3),
            _ => Err(Error::Domain(format!("unknown residue identity {s:?}"))),
        }
    }
}

/// Terms needed so that `C e^{-ρ n}` summed past `N` is below `2^{-bits}`.
fn terms_for_rate(rho: f64, log2_c: f64, bits: f64) -> i64 {
    let r = rho * std::f64::consts::LOG2_E;
    let tail_factor = -(1.0 - (-rho).exp()).log2();
    (((log2_c + bits + tail_factor) / r).ceil() as i64 + 2).max(2)
}

/// Left side of the residue identity (all four sums and the constant term);
/// it vanishes when the identity holds.
pub fn residue_identity_residual(which: ResidueIdentity, a: &BigReal, b: &BigReal, theta: &BigReal, precision: usize) -> Result<BigReal> {
    let wp = working_precision(precision);
    let (a, b, theta) = (a.round_to(wp), b.round_to(wp), theta.round_to(wp));
    if a.is_zero() || b.is_zero() {
        return Err(Error::Domain("residue identities need a, b != 0".into()));
    }
    let pi = BigReal::pi(wp);
    let two_b_pi = (&b * &pi).mul_i64(2).abs();
    if theta.abs() >= two_b_pi {
        return Err(Error::Domain("residue identities need |theta| < 2|b|pi".into()));
    }
    let (af, bf, tf) = (a.to_f64().abs(), b.to_f64().abs(), theta.to_f64().abs());
    let pif = std::f64::consts::PI;
    let bits = precision as f64 + 12.0;
    // mixed sums decay like e^{-n(3|b|π - |θ|)/|a|}, trig sums like e^{-n|a|π/|b|}
    let rho_mixed = (3.0 * bf * pif - tf) / af;
    let rho_trig = af * pif / bf;
    let scale = (af + bf + tf + 1.0).log2() * 2.0 + 8.0;
    let n_mixed = terms_for_rate(rho_mixed, scale, bits);
    let n_trig = terms_for_rate(rho_trig, scale + 4.0, bits);

    let a2pi = a.square() * &pi;
    let b2pi = b.square() * &pi;
    let abpi = &a * &b * &pi;

    // Σ (-1)^n num(j θ/a) / den(sinh, cosh)(j bπ/a), j = n or n - 1/2
    let mixed_sum = |half: bool, num_sinh: bool, den: fn(&BigReal, &BigReal) -> BigReal| -> BigReal {
        let mut s = BigReal::zero(wp);
        for n in 1..=n_mixed {
            let j = if half { BigReal::from_i64(2 * n - 1, wp).div_i64(2) } else { BigReal::from_i64(n, wp) };
            let (ns, nc) = sinh_cosh(&(&j * &theta / &a));
            let (ds, dc) = sinh_cosh(&(&j * &b * &pi / &a));
            let v = if num_sinh { ns } else { nc } / den(&ds, &dc);
            s = if n % 2 == 1 { s - v } else { s + v };
        }
        s
    };
    let whole = |f: &TrigTerm| trig_sum(false, &theta, &a, &b, &pi, n_trig, wp, f);
    let half = |f: &TrigTerm| trig_sum(true, &theta, &a, &b, &pi, n_trig, wp, f);

    let value = match which {
        ResidueIdentity::Z1 => {
            let t1 = &b2pi * &mixed_sum(false, true, |s, c| s * &c.square());
            let t2 = &abpi * &whole(&|_c, s, hs, _hc| s / hs);
            let t3 = &a * &theta * half(&|c, _s, hs, _hc| c / hs);
            let t4 = &a2pi * &half(&|_c, s, hs, hc| s * hc / hs.square());
            t1 + t2 - t3 + t4 + (&theta * &b).div_i64(2)
        }
        ResidueIdentity::Z2 => {
            let t1 = &b2pi * &mixed_sum(true, false, |s, c| s * &c.square());
            let t2 = &a * &theta * half(&|_c, s, _hs, hc| s / hc);
            let t3 = &a2pi * &half(&|c, _s, hs, hc| c * hs / hc.square());
            let t4 = &abpi * &whole(&|c, _s, _hs, hc| c / hc);
            t1 + t2 + t3 + t4 + abpi.div_i64(2)
        }
        ResidueIdentity::Z3 => {
            let t1 = &b2pi * &mixed_sum(true, true, |s, c| s.square() * c);
            let t2 = &a * &theta * whole(&|c, _s, _hs, hc| c / hc);
            let t3 = &a2pi * &whole(&|_c, s, hs, hc| s * hs / hc.square());
            let t4 = &abpi * &half(&|_c, s, _hs, hc| s / hc);
            t1 + t2 - t3 + t4 + (&a * &theta).div_i64(2)
        }
    };
    Ok(value)
}

type TrigTerm = dyn Fn(&BigReal, &BigReal, &BigReal, &BigReal) -> BigReal;

/// `Σ (-1)^n f(cos jθ/b, sin jθ/b, sinh jaπ/b, cosh jaπ/b)` with `j = n` or `n - 1/2`.
#[allow(clippy::too_many_arguments)]
fn trig_sum(half: bool, theta: &BigReal, a: &BigReal, b: &BigReal, pi: &BigReal, n_terms: i64, wp: usize, f: &TrigTerm) -> BigReal {
    let alpha = if half { theta.div_ref(b).div_i64(2) } else { theta.div_ref(b) };
    let (c1, s1) = (alpha.cos(), alpha.sin());
    // step between consecutive j is 2α for half-odd j, α otherwise
    let (cs, ss) = if half { (&c1 * &c1 - &s1 * &s1, (&s1 * &c1).mul_i64(2)) } else { (c1.clone(), s1.clone()) };
    let (mut c, mut s) = (c1, s1);
    let mut acc = BigReal::zero(wp);
    for n in 1..=n_terms {
        let j = if half { BigReal::from_i64(2 * n - 1, wp).div_i64(2) } else { BigReal::from_i64(n, wp) };
        let (hs, hc) = sinh_cosh(&(&j * a * pi / b));
        let v = f(&c, &s, &hs, &hc);
        acc = if n % 2 == 1 { acc - v } else { acc + v };
        let nc = &c * &cs - &s * &ss;
        let ns = &s * &cs + &c * &ss;
        c = nc;
        s = ns;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TransformIdentity {
    /// `G_{p,2}` against `X_{p,1}`, `Y_{p,1}`, `DY_{p,2}` at `π²/y`.
    Js1,
    /// `G'_{p,2}` against `B_{p,1}`, `X'_{p-2,1}`, `DX'_{p-2,2}` at `π²/y`.
    Js2,
    /// `Ḡ_{p,2}` against `X'_{p,1}`, `B_{p,1}`, `DB_{p,2}` at `π²/y`.
    Js3,
}

impl FromStr for TransformIdentity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "js1" => Ok(TransformIdentity::Js1),
            "js2" => Ok(TransformIdentity::Js2),
            "js3" => Ok(TransformIdentity::Js3),
            _ => Err(Error::Domain(format!("unknown transformation identity {s:?}"))),
        }
    }
}

/// Both sides of a modular transformation identity.
#[derive(Clone, Debug)]
pub struct TransformCheck {
    pub lhs: BigReal,
    pub rhs: BigReal,
}

impl TransformCheck {
    pub fn rel_diff(&self) -> BigReal {
        BigReal::rel_diff(&self.lhs, &self.rhs)
    }
}

/// `(-1)^{(p-1)/2}` for odd `p`.
pub fn epsilon(p: i64) -> i64 {
    if ((p - 1) / 2) % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Evaluates both sides of a transformation identity at `y`; the right side
/// uses series at `π²/y`.
pub fn transform_residual(which: TransformIdentity, p: i64, y: &BigReal, precision: usize) -> Result<TransformCheck> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::Domain(format!("transformation identities need odd p >= 3, got {p}")));
    }
    if !y.is_positive() {
        return Err(Error::Domain("transformation identities need y > 0".into()));
    }
    let wp = working_precision(precision);
    let y = y.round_to(wp);
    let pi = BigReal::pi(wp);
    let t = pi.square() / &y;
    let eps = epsilon(p);
    let r = &pi / &y;
    let ev = |f: SeriesFamily, pp: i64, m: u32, at: &BigReal| series(f, pp, m, at, precision);
    let two = |k: i64| BigReal::from_i64(2, wp).powi(k);
    let (lhs, rhs) = match which {
        TransformIdentity::Js1 => {
            let lhs = ev(SeriesFamily::G, p, 2, &y)?;
            let x = ev(SeriesFamily::X, p, 1, &t)?;
            let yv = ev(SeriesFamily::Y, p, 1, &t)?;
            let dy = ev(SeriesFamily::DY, p, 2, &t)?;
            let c1 = r.powi(p + 1);
            let c2 = (pi.powi(p) / y.powi(p + 1) / two(p - 1)).mul_i64(p);
            let c3 = pi.powi(p + 2) / y.powi(p + 2) / two(p);
            (lhs, (-(c1 * x) + c2 * yv - c3 * dy).mul_i64(eps))
        }
        TransformIdentity::Js2 => {
            let lhs = ev(SeriesFamily::Gprime, p, 2, &y)?;
            let b = ev(SeriesFamily::B, p, 1, &t)?;
            let xp = ev(SeriesFamily::Xprime, p - 2, 1, &t)?;
            let dxp = ev(SeriesFamily::DXprime, p - 2, 2, &t)?;
            let c1 = two(p - 1) * pi.powi(p) / y.powi(p);
            let c2 = (pi.powi(p - 1) / y.powi(p)).mul_i64(2 * (p - 1));
            let c3 = r.powi(p + 1);
            (lhs, (-(c1 * b) + c2 * xp - c3 * dxp).mul_i64(eps))
        }
        TransformIdentity::Js3 => {
            let lhs = ev(SeriesFamily::Gbar, p, 2, &y)?;
            let xp = ev(SeriesFamily::Xprime, p, 1, &t)?;
            let b = ev(SeriesFamily::B, p, 1, &t)?;
            let db = ev(SeriesFamily::DB, p, 2, &t)?;
            let c1 = r.powi(p + 1);
            let c2 = (two(p) * pi.powi(p) / y.powi(p + 1)).mul_i64(p);
            let c3 = two(p) * pi.powi(p + 2) / y.powi(p + 2);
            (lhs, (-(c1 * xp) - c2 * b + c3 * db).mul_i64(eps))
        }
    };
    Ok(TransformCheck { lhs, rhs })
}

/// `(1 - i)^k` as a Gaussian integer.
fn one_minus_i_pow(k: u32) -> (BigInt, BigInt) {
    let (mut re, mut im) = (BigInt::from(1), BigInt::from(0));
    for _ in 0..k {
        // (re + i im)(1 - i) = (re + im) + i(im - re)
        let nr = &re + &im;
        let ni = &im - &re;
        re = nr;
        im = ni;
    }
    (re, im)
}

fn gaussian(v: &(BigInt, BigInt), wp: usize) -> BigComplex {
    BigComplex::new(BigReal::from_bigint(&v.0, wp), BigReal::from_bigint(&v.1, wp))
}

/// Right side of the contour-integration identity, equal to twice
/// `∫_0^∞ x^p dx / [(cosh 2x - cos 2x)(cosh x + cos x)]` for `p ≡ 3 (mod 4)`,
/// as a combination of `G'_{p,2}`, `G_{p,2}`, `X'_{p,3}`, `Ḡ_{p,2}` at `y = π`.
/// Fails with `ImaginaryResidue` if the imaginary part exceeds `2^{-precision/2}`.
pub fn contour_identity_rhs(p: i64, precision: usize) -> Result<BigReal> {
    let total = contour_identity_value(p, precision)?;
    if !total.im.abs_below_pow2(-(precision as i64) / 2) {
        return Err(Error::ImaginaryResidue(format!("imaginary part {} exceeds 2^-{}", total.im.to_decimal(12), precision / 2)));
    }
    Ok(total.re)
}

/// The complex combination behind [`contour_identity_rhs`], before the
/// imaginary part is checked.
pub fn contour_identity_value(p: i64, precision: usize) -> Result<BigComplex> {
    if p < 3 || p % 4 != 3 {
        return Err(Error::Domain(format!("contour identity needs p = 3 mod 4, got {p}")));
    }
    let wp = working_precision(precision);
    let pi = BigReal::pi(wp);
    let ev = |f: SeriesFamily, pp: i64, m: u32| series(f, pp, m, &pi, precision);
    let gp = BigComplex::from_real(ev(SeriesFamily::Gprime, p, 2)?);
    let g = BigComplex::from_real(ev(SeriesFamily::G, p, 2)?);
    let x3 = BigComplex::from_real(ev(SeriesFamily::Xprime, p, 3)?);
    let gb = BigComplex::from_real(ev(SeriesFamily::Gbar, p, 2)?);

    let w_pm1 = one_minus_i_pow((p - 1) as u32);
    let w_pp1 = one_minus_i_pow((p + 1) as u32);
    // i (1-i)^{p-1}
    let iw = (-w_pm1.1.clone(), w_pm1.0.clone());
    let two = |k: i64| BigReal::from_i64(2, wp).powi(k);
    let c_gp = gaussian(&iw, wp).scale(&(pi.powi(p) / two(p + 1)).mul_i64(p));
    let c_g = gaussian(&w_pp1, wp).scale(&pi.powi(p + 1).div_i64(8));
    let c_x3 = gaussian(&iw, wp).scale(&(pi.powi(p + 1) / two(p + 1)));
    let c_gb = gaussian(&iw, wp).scale(&(pi.powi(p + 1) / two(p + 2)));
    Ok(&(&(&c_gp * &gp) + &(&c_g * &g)) - &(&(&c_x3 * &x3) + &(&c_gb * &gb)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{integrate, IntegrandSpec};

    fn bits_agree(a: &BigReal, b: &BigReal, bits: i64) -> bool {
        BigReal::rel_diff(a, b).abs_below_pow2(-bits)
    }

    #[test]
    fn first_term_dominates_for_large_y() {
        let p = 160;
        let y = BigReal::from_i64(50, p);
        for fam in SeriesFamily::ALL {
            let m = if matches!(fam, SeriesFamily::DY | SeriesFamily::DXprime | SeriesFamily::DB) { 2 } else { 1 };
            let v = series(fam, 3, m, &y, p).unwrap();
            // the n = 1 term alone
            let t = if fam.half_odd() { y.div_i64(2) } else { y.clone() };
            let (sh, ch) = (t.sinh(), t.cosh());
            let (a, b) = fam.hyperbolic_exponents(m as i64);
            let first = -(sh.powi(a) * ch.powi(b));
            assert!((&v - &first).abs().log10_abs() < -20.0, "{fam}");
        }
    }

    #[test]
    fn derivative_families_need_m_two() {
        let y = BigReal::from_i64(1, 128);
        for fam in [SeriesFamily::DY, SeriesFamily::DXprime, SeriesFamily::DB] {
            assert!(matches!(series(fam, 3, 1, &y, 128), Err(Error::Domain(_))));
        }
        assert!(matches!(series(SeriesFamily::X, 3, 1, &BigReal::zero(128), 128), Err(Error::Domain(_))));
    }

    #[test]
    fn direct_summation_matches_for_moderate_y() {
        let p = 200;
        let y = BigReal::parse("1.3", p).unwrap();
        let v = series(SeriesFamily::G, 3, 2, &y, p).unwrap();
        let mut s = BigReal::zero(p + 64);
        for n in 1..400i64 {
            let t = y.mul_i64(n);
            let term = BigReal::from_i64(n, p + 64).powi(3) / (t.sinh() * t.cosh().square());
            s = if n % 2 == 1 { s - term } else { s + term };
        }
        assert!(bits_agree(&v, &s, 190));
    }

    #[test]
    fn residue_identities_vanish() {
        let p = 160;
        let cases = [("1", "1", "1"), ("2", "1", "3.14159"), ("0.7", "2.3", "-3.1"), ("2.5", "0.6", "3.2")];
        for which in [ResidueIdentity::Z1, ResidueIdentity::Z2, ResidueIdentity::Z3] {
            for (a, b, th) in cases {
                let r = residue_identity_residual(
                    which,
                    &BigReal::parse(a, p).unwrap(),
                    &BigReal::parse(b, p).unwrap(),
                    &BigReal::parse(th, p).unwrap(),
                    p,
                )
                .unwrap();
                assert!(r.abs_below_pow2(-140), "{which:?} {a} {b} {th}: {}", r.to_decimal(10));
            }
        }
    }

    #[test]
    fn residue_z1_exact_at_zero_angle() {
        let p = 128;
        let r = residue_identity_residual(ResidueIdentity::Z1, &BigReal::from_i64(1, p), &BigReal::from_i64(2, p), &BigReal::zero(p), p)
            .unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn residue_domain() {
        let p = 128;
        let one = BigReal::one(p);
        let big = BigReal::from_i64(7, p);
        assert!(residue_identity_residual(ResidueIdentity::Z2, &one, &one, &big, p).is_err());
        assert!(residue_identity_residual(ResidueIdentity::Z2, &BigReal::zero(p), &one, &one, p).is_err());
    }

    #[test]
    fn transformations_hold() {
        let p = 192;
        for which in [TransformIdentity::Js1, TransformIdentity::Js2, TransformIdentity::Js3] {
            for pp in [3, 5, 7] {
                for y in ["1", "1.7", "4"] {
                    let c = transform_residual(which, pp, &BigReal::parse(y, p).unwrap(), p).unwrap();
                    assert!(c.rel_diff().abs_below_pow2(-170), "{which:?} p={pp} y={y}");
                }
            }
        }
    }

    #[test]
    fn contour_rhs_matches_quadrature() {
        let p = 160;
        let rhs = contour_identity_rhs(3, p).unwrap().div_i64(2);
        let lhs = integrate(&IntegrandSpec::BerndtMixed { p: 3 }, p).unwrap().real();
        assert!(bits_agree(&rhs, &lhs, 140), "{} vs {}", rhs.to_decimal(30), lhs.to_decimal(30));
    }

    #[test]
    fn gaussian_powers() {
        assert_eq!(one_minus_i_pow(2), (BigInt::from(0), BigInt::from(-2)));
        assert_eq!(one_minus_i_pow(4), (BigInt::from(-4), BigInt::from(0)));
    }
}
