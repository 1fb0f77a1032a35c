//! Composite Gauss-Legendre quadrature for the Berndt integrand and for
//! exponential kernels with sinh/cosh denominators.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::elliptic_core::{working_precision, BigComplex, BigReal};
use crate::error::{Error, Result};

const INITIAL_NODES: usize = 16;
const MAX_DOUBLINGS: u32 = 20;
const MAX_NODES: usize = 4096;

type Rule = Arc<Vec<(BigReal, BigReal)>>;

fn rule_cache() -> &'static Mutex<HashMap<(usize, usize), Rule>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, usize), Rule>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// `P_n(x)` and `P_n'(x)` by the three-term recurrence.
fn legendre(n: usize, x: &BigReal) -> (BigReal, BigReal) {
    let p = x.prec();
    let mut p0 = BigReal::one(p);
    let mut p1 = x.clone();
    for k in 2..=n {
        let k = k as i64;
        let p2 = ((x * &p1).mul_i64(2 * k - 1) - p0.mul_i64(k - 1)).div_i64(k);
        p0 = p1;
        p1 = p2;
    }
    let one = BigReal::one(p);
    let d = (&p0 - x * &p1).mul_i64(n as i64) / (one - x.square());
    (p1, d)
}

/// Nodes and weights of the `n`-point rule on `[-1, 1]` at `prec` bits, cached.
pub fn gauss_legendre_rule(n: usize, prec: usize) -> Rule {
    if let Some(r) = rule_cache().lock().expect("rule cache").get(&(n, prec)) {
        return r.clone();
    }
    let mut half = Vec::with_capacity(n / 2 + 1);
    for i in 1..=n.div_ceil(2) {
        let guess = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut x = BigReal::from_f64(guess, prec);
        let mut dp = BigReal::one(prec);
        for _ in 0..100 {
            let (pn, d) = legendre(n, &x);
            let dx = &pn / &d;
            x = &x - &dx;
            dp = d;
            if dx.is_zero() || BigReal::rel_diff(&(&x + &dx), &x).abs_below_pow2(-(prec as i64) + 4) {
                let (_, d) = legendre(n, &x);
                dp = d;
                break;
            }
        }
        let w = BigReal::from_i64(2, prec) / ((BigReal::one(prec) - x.square()) * dp.square());
        half.push((x, w));
    }
    let mut nodes = Vec::with_capacity(n);
    for (x, w) in half {
        if !(n % 2 == 1 && x.abs_below_pow2(-(prec as i64) / 2)) {
            nodes.push((-&x, w.clone()));
            nodes.push((x, w));
        } else {
            nodes.push((BigReal::zero(prec), w));
        }
    }
    let rule = Arc::new(nodes);
    rule_cache().lock().expect("rule cache").insert((n, prec), rule.clone());
    rule
}

#[cfg(feature = "parallel")]
fn map_panels<T: Send, F: Fn(usize) -> T + Sync + Send>(count: usize, f: F) -> Vec<T> {
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_panels<T, F: Fn(usize) -> T>(count: usize, f: F) -> Vec<T> {
    (0..count).map(f).collect()
}

/// Values that the panel integrator can accumulate.
pub trait Integrand: Clone + Send {
    fn zero(prec: usize) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn scale(&self, r: &BigReal) -> Self;
    fn magnitude(&self) -> BigReal;
    fn distance(&self, o: &Self) -> BigReal;
}

impl Integrand for BigReal {
    fn zero(prec: usize) -> Self {
        BigReal::zero(prec)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn scale(&self, r: &BigReal) -> Self {
        self * r
    }
    fn magnitude(&self) -> BigReal {
        self.abs()
    }
    fn distance(&self, o: &Self) -> BigReal {
        (self - o).abs()
    }
}

impl Integrand for BigComplex {
    fn zero(prec: usize) -> Self {
        BigComplex::zero(prec)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn scale(&self, r: &BigReal) -> Self {
        BigComplex::scale(self, r)
    }
    fn magnitude(&self) -> BigReal {
        self.abs()
    }
    fn distance(&self, o: &Self) -> BigReal {
        (self - o).abs()
    }
}

fn composite_pass<T, F>(f: &F, a: &BigReal, b: &BigReal, panels: usize, n: usize, wp: usize) -> Result<T>
where
    T: Integrand,
    F: Fn(&BigReal) -> Result<T> + Sync,
{
    let rule = gauss_legendre_rule(n, wp);
    let width = (b - a).div_i64(panels as i64);
    let half = width.div_i64(2);
    let parts = map_panels(panels, |k| -> Result<T> {
        let mid = a + &(&width * &BigReal::from_i64(k as i64, wp)) + &half;
        let mut acc = T::zero(wp);
        for (x, w) in rule.iter() {
            let t = &mid + &(&half * x);
            acc = acc.add(&f(&t)?.scale(w));
        }
        Ok(acc.scale(&half))
    });
    let mut total = T::zero(wp);
    for part in parts {
        total = total.add(&part?);
    }
    Ok(total)
}

/// Integrates `f` over `[a, b]` with panels of width about `panel_width`,
/// doubling the per-panel node count until successive passes agree to
/// `2^{-precision-8}` relative.
pub fn gauss_legendre_integrate<T, F>(f: F, a: &BigReal, b: &BigReal, panel_width: f64, precision: usize) -> Result<T>
where
    T: Integrand,
    F: Fn(&BigReal) -> Result<T> + Sync,
{
    let wp = working_precision(precision);
    let (a, b) = (a.round_to(wp), b.round_to(wp));
    let span = (&b - &a).to_f64();
    let panels = ((span / panel_width).ceil() as usize).max(1);
    let mut n = INITIAL_NODES;
    let mut prev: T = composite_pass(&f, &a, &b, panels, n, wp)?;
    for _ in 0..MAX_DOUBLINGS {
        n *= 2;
        if n > MAX_NODES {
            break;
        }
        let next: T = composite_pass(&f, &a, &b, panels, n, wp)?;
        let diff = next.distance(&prev);
        let scale = next.magnitude();
        let agreed = if scale.is_zero() {
            diff.abs_below_pow2(-(precision as i64) - 8)
        } else {
            (diff / scale).abs_below_pow2(-(precision as i64) - 8)
        };
        if agreed {
            return Ok(next);
        }
        prev = next;
    }
    Err(Error::NonConvergence(format!("panel agreement not reached with {} nodes per panel", n / 2)))
}

/// Integrand choices for [`integrate`].
#[derive(Clone, Debug)]
pub enum IntegrandSpec {
    /// `x^p / [(cosh 2x - cos 2x)(cosh x + cos x)]`.
    BerndtMixed { p: u32 },
    /// `u^{s-1} e^{-w u} / (Π sinh(a_i u) · Π cosh(b_j u))`.
    ExpKernel { s: u32, w: BigComplex, sinh_periods: Vec<BigComplex>, cosh_periods: Vec<BigComplex> },
}

#[derive(Clone, Debug)]
pub enum IntegralValue {
    Real(BigReal),
    Complex(BigComplex),
}

impl IntegralValue {
    pub fn real(&self) -> BigReal {
        match self {
            IntegralValue::Real(r) => r.clone(),
            IntegralValue::Complex(c) => c.re.clone(),
        }
    }

    pub fn complex(&self) -> BigComplex {
        match self {
            IntegralValue::Real(r) => BigComplex::from_real(r.clone()),
            IntegralValue::Complex(c) => c.clone(),
        }
    }
}

/// Smallest `X >= 2` (on a grid of 1/4) with `C X^k e^{-ρX} / (ρ - k/X) < 2^{-precision-10}`.
pub fn tail_cutoff(k: f64, rho: f64, log2_c: f64, precision: usize) -> f64 {
    let target = -(precision as f64) - 10.0;
    let mut x: f64 = 2.0;
    loop {
        let margin = rho - k / x;
        if margin > 0.0 {
            let log2_bound = log2_c + k * x.log2() - rho * x * std::f64::consts::LOG2_E - margin.log2();
            if log2_bound < target {
                return x;
            }
        }
        x += 0.25;
    }
}

/// Berndt integrand, using `cosh 2x - cos 2x = 2(sinh²x + sin²x)`.
pub fn berndt_integrand(p: u32, x: &BigReal) -> Result<BigReal> {
    if x.is_zero() {
        return Ok(BigReal::zero(x.prec()));
    }
    let sh = x.sinh();
    let ch = (BigReal::one(x.prec()) + sh.square()).sqrt();
    let s = x.sin();
    let c = x.cos();
    let first = (sh.square() + s.square()).mul_i64(2);
    let second = ch + c;
    if !first.is_positive() || !second.is_positive() {
        return Err(Error::SingularIntegrand(format!("denominator vanishes at x = {}", x.to_decimal(20))));
    }
    Ok(x.powi(p as i64) / (first * second))
}

fn factor_values(a: &BigComplex, u: &BigReal, cache: &mut Vec<(BigReal, BigReal, BigReal)>) -> (BigReal, BigReal, BigReal, BigReal) {
    // returns sinh(αu), cosh(αu), cos(βu), sin(βu)
    let au = &a.re * u;
    let sh = au.sinh();
    let ch = (BigReal::one(u.prec()) + sh.square()).sqrt();
    let b_abs = a.im.abs();
    let hit = cache.iter().find(|(b, _, _)| *b == b_abs).map(|(_, c, s)| (c.clone(), s.clone()));
    let (c, s_abs) = match hit {
        Some(v) => v,
        None => {
            let bu = &b_abs * u;
            let c = bu.cos();
            let s = bu.sin();
            cache.push((b_abs.clone(), c.clone(), s.clone()));
            (c, s)
        }
    };
    let s = if a.im.is_negative() { -s_abs } else { s_abs };
    (sh, ch, c, s)
}

fn exp_kernel_integrand(
    s: u32,
    w: &BigComplex,
    sinh_periods: &[BigComplex],
    cosh_periods: &[BigComplex],
    u: &BigReal,
) -> Result<BigComplex> {
    let p = u.prec();
    if u.is_zero() {
        return Ok(BigComplex::zero(p));
    }
    let mut trig = Vec::new();
    let mut den = BigComplex::one(p);
    for a in sinh_periods {
        let (sh, ch, c, sn) = factor_values(a, u, &mut trig);
        let f = BigComplex::new(&sh * &c, &ch * &sn);
        den = &den * &f;
    }
    for b in cosh_periods {
        let (sh, ch, c, sn) = factor_values(b, u, &mut trig);
        let f = BigComplex::new(&ch * &c, &sh * &sn);
        den = &den * &f;
    }
    if den.is_zero() {
        return Err(Error::SingularIntegrand(format!("kernel denominator vanishes at u = {}", u.to_decimal(20))));
    }
    let wu = BigComplex::new(-(&w.re * u), -(&w.im * u));
    let e = if wu.is_zero() { BigComplex::one(p) } else { wu.exp() };
    let num = e.scale(&u.powi(s as i64 - 1));
    Ok(num.div(&den))
}

fn kernel_rates(sinh_periods: &[BigComplex], cosh_periods: &[BigComplex]) -> Vec<f64> {
    sinh_periods.iter().chain(cosh_periods.iter()).map(|a| a.re.to_f64()).collect()
}

/// Integral over `(0, ∞)` with the tail beyond the analytic cutoff dropped.
pub fn integrate(spec: &IntegrandSpec, precision: usize) -> Result<IntegralValue> {
    let wp = working_precision(precision);
    match spec {
        IntegrandSpec::BerndtMixed { p } => {
            if *p < 3 {
                return Err(Error::Domain(format!("Berndt integrand needs p >= 3, got {p}")));
            }
            // |denominator| >= e^{3x}/16 for x >= 2
            let x0 = tail_cutoff(*p as f64, 3.0, 4.0, precision);
            let v = gauss_legendre_integrate(
                |x: &BigReal| berndt_integrand(*p, x),
                &BigReal::zero(wp),
                &BigReal::from_f64(x0, wp),
                1.0,
                precision,
            )?;
            Ok(IntegralValue::Real(v))
        }
        IntegrandSpec::ExpKernel { s, w, sinh_periods, cosh_periods } => {
            if *s < 1 {
                return Err(Error::Domain("exp kernel needs s >= 1".into()));
            }
            let rates = kernel_rates(sinh_periods, cosh_periods);
            if rates.iter().any(|&a| a <= 0.0) {
                return Err(Error::Domain("kernel periods need positive real part".into()));
            }
            let rho = w.re.to_f64() + rates.iter().sum::<f64>();
            if rho <= 0.0 {
                return Err(Error::Domain("kernel does not decay".into()));
            }
            let small = rates.iter().copied().fold(f64::INFINITY, f64::min);
            let n = rates.len() as f64;
            // |sinh|,|cosh| >= sinh(αu) >= e^{αu}/4 once αu >= ln 2
            let start = if small.is_finite() { (std::f64::consts::LN_2 / small).max(2.0) } else { 2.0 };
            let x0 = tail_cutoff(*s as f64 - 1.0, rho, 2.0 * n, precision).max(start);
            let v = gauss_legendre_integrate(
                |u: &BigReal| exp_kernel_integrand(*s, w, sinh_periods, cosh_periods, u),
                &BigReal::zero(wp),
                &BigReal::from_f64(x0, wp),
                1.0,
                precision,
            )?;
            Ok(IntegralValue::Complex(v))
        }
    }
}

/// Max relative difference over sample points in `(0, 30]` between
/// `(cosh 2x - cos 2x)(cosh x + cos x)` and
/// `4 sinh((1+i)x) sinh((1-i)x) cosh((1+i)x/2) cosh((1-i)x/2)`.
pub fn berndt_sinh_cosh_factorization_check(p: u32, precision: usize) -> Result<BigReal> {
    if p < 3 {
        return Err(Error::Domain("factorization check needs p >= 3".into()));
    }
    let wp = working_precision(precision);
    let samples = 60 + p as i64;
    let mut worst = BigReal::zero(wp);
    let one_i = BigComplex::from_i64s(1, 1, wp);
    let one_mi = BigComplex::from_i64s(1, -1, wp);
    for k in 1..=samples {
        let x = BigReal::from_i64(30 * k, wp).div_i64(samples);
        let lhs = (x.mul_i64(2).cosh() - x.mul_i64(2).cos()) * (x.cosh() + x.cos());
        let a = one_i.scale(&x);
        let b = one_mi.scale(&x);
        let half = BigReal::one(wp).div_i64(2);
        let rhs = &(&(&a.sinh() * &b.sinh()) * &a.scale(&half).cosh()) * &b.scale(&half).cosh();
        let rhs = rhs.scale(&BigReal::from_i64(4, wp));
        let d = BigComplex::rel_diff(&BigComplex::from_real(lhs), &rhs);
        if d > worst {
            worst = d;
        }
    }
    Ok(worst)
}

/// `Γ(1/4) = 4∫₀^∞ e^{-u⁴} du`, an independent check on the AGM route.
pub fn gamma_quarter_by_quadrature(precision: usize) -> Result<BigReal> {
    let wp = working_precision(precision);
    let upper = ((precision as f64 + 20.0) * std::f64::consts::LN_2).powf(0.25).ceil() + 1.0;
    let v: BigReal = gauss_legendre_integrate(
        |u: &BigReal| Ok((-u.square().square()).exp()),
        &BigReal::zero(wp),
        &BigReal::from_f64(upper, wp),
        1.0,
        precision,
    )?;
    Ok(v.mul_i64(4))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::elliptic_core::{complete_elliptic_k, gamma_quarter};

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let rule = gauss_legendre_rule(7, 192);
        assert_eq!(rule.len(), 7);
        // ∫_{-1}^{1} x^12 dx = 2/13
        let mut acc = BigReal::zero(192);
        for (x, w) in rule.iter() {
            acc = acc + w * &x.powi(12);
        }
        let expect = BigReal::from_i64(2, 192).div_i64(13);
        assert!(BigReal::rel_diff(&acc, &expect).abs_below_pow2(-180));
        let even = gauss_legendre_rule(8, 128);
        let wsum: BigReal = even.iter().map(|(_, w)| w.clone()).sum();
        assert!(BigReal::rel_diff(&wsum, &BigReal::from_i64(2, 128)).abs_below_pow2(-120));
    }

    #[test]
    fn gamma_routes_agree_to_sixty_digits() {
        let q = gamma_quarter_by_quadrature(256).unwrap();
        let a = gamma_quarter(256);
        assert!(BigReal::rel_diff(&q, &a).log10_abs() < -60.0);
    }

    #[test]
    fn k_against_defining_integral() {
        let p = 160;
        let wp = working_precision(p);
        for s in ["0.1", "0.25", "0.5", "0.9"] {
            let x = BigReal::parse(s, wp).unwrap();
            let xx = x.clone();
            let quad: BigReal = gauss_legendre_integrate(
                move |phi: &BigReal| Ok((BigReal::one(phi.prec()) - &xx * &phi.sin().square()).sqrt().recip()),
                &BigReal::zero(wp),
                &BigReal::pi(wp).div_i64(2),
                0.5,
                p,
            )
            .unwrap();
            let k = complete_elliptic_k(&x).unwrap();
            assert!(BigReal::rel_diff(&quad, &k).log10_abs() < -40.0, "x = {s}");
        }
    }

    #[test]
    fn exp_kernel_gamma_four() {
        let spec = IntegrandSpec::ExpKernel { s: 4, w: BigComplex::from_i64s(1, 0, 192), sinh_periods: vec![], cosh_periods: vec![] };
        let v = integrate(&spec, 128).unwrap().complex();
        assert!(BigReal::rel_diff(&v.re, &BigReal::from_i64(6, 192)).abs_below_pow2(-120));
        assert!(v.im.abs_below_pow2(-120));
    }

    #[test]
    fn factorization_identity() {
        let r = berndt_sinh_cosh_factorization_check(3, 200).unwrap();
        assert!(r.log10_abs() < -50.0);
        // small-x behaviour: both sides ≈ 8x² (spot check at x = 1e-8 and 1.7)
        let wp = 264;
        for s in ["1e-8", "1.7"] {
            let x = BigReal::parse(s, wp).unwrap();
            let lhs = (x.mul_i64(2).cosh() - x.mul_i64(2).cos()) * (x.cosh() + x.cos());
            let direct = (x.sinh().square() + x.sin().square()).mul_i64(2) * (x.cosh() + x.cos());
            assert!(BigReal::rel_diff(&lhs, &direct).log10_abs() < -40.0);
        }
    }

    #[test]
    fn berndt_integrand_small_x() {
        let x = BigReal::parse("1e-10", 200).unwrap();
        let v = berndt_integrand(3, &x).unwrap();
        // x³ / (4x² · 2) = x/8 to leading order
        let expect = x.div_i64(8);
        assert!(BigReal::rel_diff(&v, &expect).log10_abs() < -15.0);
    }

    #[test]
    fn tail_cutoff_is_monotone_in_precision() {
        let a = tail_cutoff(3.0, 3.0, 4.0, 128);
        let b = tail_cutoff(3.0, 3.0, 4.0, 256);
        assert!(a >= 2.0 && b > a);
    }
}
