//! Barnes multiple zeta values with complex periods and mixed signs,
//!
//! `ζ_N(s, w | a; σ) = Σ_{n ∈ ℕ^N} Π σ_j^{n_j} / (w + n·a)^s`,
//!
//! by lattice summation and by the integral representation.

use crate::closedform::{berndt_closed_form, ClosedForm};
use crate::elliptic_core::{working_precision, BigComplex, BigReal};
use crate::error::{Error, Result};
use crate::exactalg::{factorial, Rational};
use crate::quadrature::{integrate, IntegrandSpec};

#[derive(Clone, Debug)]
pub struct BarnesSpec {
    pub s: u32,
    pub w: BigComplex,
    pub periods: Vec<BigComplex>,
    pub signs: Vec<i8>,
}

impl BarnesSpec {
    pub fn new(s: u32, w: BigComplex, periods: Vec<BigComplex>, signs: Vec<i8>) -> Result<Self> {
        let spec = BarnesSpec { s, w, periods, signs };
        spec.validate()?;
        Ok(spec)
    }

    /// `s = 4m`, `w = 3`, periods `(2+2i, 2-2i, 1+i, 1-i)`, signs `(+,+,-,-)`.
    pub fn berndt(m: u32, prec: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::Domain("need m >= 1".into()));
        }
        let c = |a, b| BigComplex::from_i64s(a, b, prec);
        Self::new(4 * m, c(3, 0), vec![c(2, 2), c(2, -2), c(1, 1), c(1, -1)], vec![1, 1, -1, -1])
    }

    pub fn validate(&self) -> Result<()> {
        if self.periods.len() != self.signs.len() {
            return Err(Error::Domain("periods and signs differ in length".into()));
        }
        if self.s == 0 {
            return Err(Error::Domain("Barnes zeta needs s >= 1".into()));
        }
        if !self.w.re.is_positive() {
            return Err(Error::Domain("Barnes zeta needs Re(w) > 0".into()));
        }
        if self.periods.iter().any(|a| !a.re.is_positive()) {
            return Err(Error::Domain("periods need positive real part".into()));
        }
        if self.signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(Error::Domain("signs must be +1 or -1".into()));
        }
        Ok(())
    }
}

/// Integral route:
/// `ζ = (1/Γ(s)) ∫_0^∞ u^{s-1} e^{-wu} Π (1 - σ_j e^{-a_j u})^{-1} du`, rewritten with
/// `(1 ∓ e^{-au})^{-1} = e^{au/2} / (2 sinh(au/2))` or `/ (2 cosh(au/2))`.
pub fn barnes_integral(spec: &BarnesSpec, precision: usize) -> Result<BigComplex> {
    spec.validate()?;
    let wp = working_precision(precision);
    let sinh_count = spec.signs.iter().filter(|&&s| s == 1).count();
    if spec.s as usize <= sinh_count {
        return Err(Error::Domain(format!("integral diverges at 0: s = {} with {} unsigned periods", spec.s, sinh_count)));
    }
    let two = BigReal::from_i64(2, wp);
    let mut w = BigComplex::new(spec.w.re.round_to(wp), spec.w.im.round_to(wp));
    let mut sinh_periods = Vec::new();
    let mut cosh_periods = Vec::new();
    for (a, &sg) in spec.periods.iter().zip(&spec.signs) {
        let half = BigComplex::new(a.re.round_to(wp) / &two, a.im.round_to(wp) / &two);
        w = &w - &half;
        if sg == 1 {
            sinh_periods.push(half);
        } else {
            cosh_periods.push(half);
        }
    }
    let kernel = IntegrandSpec::ExpKernel { s: spec.s, w, sinh_periods, cosh_periods };
    let v = integrate(&kernel, precision)?.complex();
    let denom = BigReal::from_bigint(&factorial(spec.s - 1), wp) * two.powi(spec.periods.len() as i64);
    Ok(BigComplex::new(&v.re / &denom, &v.im / &denom))
}

/// One lattice axis after merging periods that are positive-integer multiples
/// of a common base period.
struct Axis {
    base: BigComplex,
    /// members as (multiplier, sign)
    members: Vec<(u64, i8)>,
}

impl Axis {
    /// Weight of index `k`: Σ over member indices with `Σ r_j n_j = k` of `Π σ_j^{n_j}`.
    fn weights(&self, len: usize) -> Vec<i128> {
        let mut acc = vec![0i128; len];
        acc[0] = 1;
        for &(r, sg) in &self.members {
            let r = r as usize;
            let mut next = vec![0i128; len];
            for (k, &v) in acc.iter().enumerate() {
                if v == 0 {
                    continue;
                }
                let mut n = 0usize;
                while k + n * r < len {
                    let sign = if sg == -1 && n % 2 == 1 { -1 } else { 1 };
                    next[k + n * r] += sign * v;
                    n += 1;
                }
            }
            acc = next;
        }
        acc
    }
}

fn integer_ratio(a: &BigComplex, b: &BigComplex) -> Option<u64> {
    // a = r b with r a positive integer up to 64
    let q = a.div(b);
    let r = q.re.to_f64().round();
    if !(1.0..=64.0).contains(&r) {
        return None;
    }
    let diff = &BigComplex::from_real(BigReal::from_f64(r, q.prec())) - &q;
    if diff.abs().abs_below_pow2(-(q.prec() as i64) + 16) {
        Some(r as u64)
    } else {
        None
    }
}

fn merge_axes(spec: &BarnesSpec) -> Vec<Axis> {
    let mut order: Vec<usize> = (0..spec.periods.len()).collect();
    order.sort_by(|&i, &j| spec.periods[i].norm_sqr().partial_cmp(&spec.periods[j].norm_sqr()).unwrap_or(std::cmp::Ordering::Equal));
    let mut axes: Vec<Axis> = Vec::new();
    for i in order {
        let a = &spec.periods[i];
        let sg = spec.signs[i];
        if let Some(axis) = axes.iter_mut().find(|ax| integer_ratio(a, &ax.base).is_some()) {
            let r = integer_ratio(a, &axis.base).expect("checked");
            axis.members.push((r, sg));
        } else {
            axes.push(Axis { base: a.clone(), members: vec![(1, sg)] });
        }
    }
    axes
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    a / gcd(a, b) * b
}

/// Outcome of the extrapolated lattice summation.
#[derive(Clone, Debug)]
pub struct LatticeResult {
    pub value: BigComplex,
    /// Difference between the last two extrapolants.
    pub error_estimate: BigReal,
    pub box_size: usize,
    pub points: u64,
}

pub const DEFAULT_LATTICE_BUDGET: u64 = 4_000_000;

/// Lattice route with the default point budget.
pub fn barnes_lattice(spec: &BarnesSpec, precision: usize) -> Result<BigComplex> {
    barnes_lattice_with_budget(spec, precision, DEFAULT_LATTICE_BUDGET).map(|r| r.value)
}

/// Box sums `S(K)` over `[0, K)^d` for `K = K₀, 2K₀, 3K₀, …` (with `K₀` a
/// multiple of every sign period), extrapolated to `K → ∞` by Neville
/// interpolation in `1/K`. Stops when two successive extrapolants agree to
/// `2^{-precision-4}` relative; fails with `SlowConvergence` when the point
/// budget runs out first.
pub fn barnes_lattice_with_budget(spec: &BarnesSpec, precision: usize, budget: u64) -> Result<LatticeResult> {
    spec.validate()?;
    let axes = merge_axes(spec);
    let d = axes.len();
    if spec.s as usize <= spec.periods.len() {
        return Err(Error::Domain(format!("lattice sum needs s > N for absolute convergence: s = {}, N = {}", spec.s, spec.periods.len())));
    }
    const MAX_LEVELS: usize = 48;
    let wp = working_precision(precision) + 2 * MAX_LEVELS;
    let period = axes.iter().flat_map(|ax| ax.members.iter().map(|&(r, _)| 2 * r)).fold(1, lcm);
    let k0 = (16u64.div_ceil(period) * period) as usize;

    let w = BigComplex::new(spec.w.re.round_to(wp), spec.w.im.round_to(wp));
    let bases: Vec<BigComplex> = axes.iter().map(|a| BigComplex::new(a.base.re.round_to(wp), a.base.im.round_to(wp))).collect();
    let tol_bits = precision as i64 + 4;

    let mut sums: Vec<BigComplex> = Vec::new();
    let mut extrapolants: Vec<BigComplex> = Vec::new();
    let mut total = BigComplex::zero(wp);
    let mut points: u64 = 0;
    let mut small_diffs = 0;
    for level in 1..=MAX_LEVELS {
        let k_new = k0 * level;
        let k_old = k0 * (level - 1);
        let shell = (k_new as u64).pow(d as u32) - (k_old as u64).pow(d as u32);
        if points + shell > budget {
            break;
        }
        let weights: Vec<Vec<i128>> = axes.iter().map(|a| a.weights(k_new)).collect();
        total = &total + &shell_sum(spec.s, &w, &bases, &weights, k_old, k_new, wp);
        points += shell;
        sums.push(total.clone());
        let e = neville_at_zero(&sums, wp);
        if let Some(prev) = extrapolants.last() {
            let diff = (&e - prev).abs();
            let scale = BigReal::max(&e.abs(), &BigReal::from_f64(1e-300, wp));
            if (&diff / &scale).abs_below_pow2(-tol_bits) {
                small_diffs += 1;
                if small_diffs >= 2 {
                    return Ok(LatticeResult { value: e, error_estimate: diff, box_size: k_new, points });
                }
            } else {
                small_diffs = 0;
            }
        }
        extrapolants.push(e);
    }
    let est = match extrapolants.as_slice() {
        [.., a, b] => (b - a).abs().to_decimal(6),
        _ => "n/a".into(),
    };
    Err(Error::SlowConvergence(format!("{points} lattice points did not reach 2^-{tol_bits} (last change {est})")))
}

/// Sum over lattice points with max index in `[k_old, k_new)`.
fn shell_sum(s: u32, w: &BigComplex, bases: &[BigComplex], weights: &[Vec<i128>], k_old: usize, k_new: usize, wp: usize) -> BigComplex {
    let d = bases.len();
    let first: Vec<usize> = (0..k_new).filter(|&k| weights[0][k] != 0).collect();
    let row = |k1: usize| -> BigComplex {
        let mut acc = BigComplex::zero(wp);
        let start = BigComplex::new(
            &w.re + &(&bases[0].re * &BigReal::from_i64(k1 as i64, wp)),
            &w.im + &(&bases[0].im * &BigReal::from_i64(k1 as i64, wp)),
        );
        let mut idx = vec![0usize; d];
        idx[0] = k1;
        loop {
            let inside = idx.iter().all(|&k| k < k_old);
            if !inside {
                let wt: i128 = idx.iter().enumerate().map(|(j, &k)| weights[j][k]).product();
                if wt != 0 {
                    let mut z = start.clone();
                    for j in 1..d {
                        if idx[j] > 0 {
                            let kk = BigReal::from_i64(idx[j] as i64, wp);
                            z = BigComplex::new(&z.re + &(&bases[j].re * &kk), &z.im + &(&bases[j].im * &kk));
                        }
                    }
                    let term = z.powi(s as i64).recip();
                    let wt = BigReal::from_bigint(&num_bigint::BigInt::from(wt), wp);
                    acc = &acc + &term.scale(&wt);
                }
            }
            // odometer over axes 1..d
            let mut j = 1;
            while j < d {
                idx[j] += 1;
                if idx[j] < k_new {
                    break;
                }
                idx[j] = 0;
                j += 1;
            }
            if j >= d {
                break;
            }
        }
        acc
    };
    let parts: Vec<BigComplex> = {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            first.par_iter().map(|&k1| row(k1)).collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            first.iter().map(|&k1| row(k1)).collect()
        }
    };
    parts.iter().fold(BigComplex::zero(wp), |acc, p| &acc + p)
}

/// Value at `x = 0` of the polynomial through `(1/i, S_i)`, `i = 1..n`.
fn neville_at_zero(sums: &[BigComplex], wp: usize) -> BigComplex {
    let n = sums.len();
    let x: Vec<BigReal> = (1..=n).map(|i| BigReal::one(wp).div_i64(i as i64)).collect();
    let mut p: Vec<BigComplex> = sums.to_vec();
    for k in 1..n {
        for i in 0..n - k {
            let den = &x[i] - &x[i + k];
            let a = p[i].scale(&(-&x[i + k] / &den));
            let b = p[i + 1].scale(&(&x[i] / &den));
            p[i] = &a + &b;
        }
    }
    p[0].clone()
}

/// `ζ₄(4m, 3 | c₄; σ₄)` as an exact closed form, from
/// `∫_0^∞ x^{4m-1} dx / [(cosh 2x - cos 2x)(cosh x + cos x)] = 4 Γ(4m) ζ₄(4m, 3 | c₄; σ₄)`.
pub fn zeta4_closed_form(m: u32) -> Result<ClosedForm> {
    let b = berndt_closed_form(m)?;
    let den = Rational::from_integer(factorial(4 * m - 1) * 4);
    Ok(b.scale(&den.recip()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one_dim(s: u32, sign: i8, prec: usize) -> BarnesSpec {
        BarnesSpec::new(s, BigComplex::one(prec), vec![BigComplex::one(prec)], vec![sign]).unwrap()
    }

    #[test]
    fn riemann_and_alternating_reductions() {
        let prec = 128;
        let pi = BigReal::pi(prec + 64);
        let z4 = pi.powi(4).div_i64(90);
        let eta2 = pi.square().div_i64(12);
        let l = barnes_lattice(&one_dim(4, 1, prec), prec).unwrap();
        assert!(BigReal::rel_diff(&l.re, &z4).abs_below_pow2(-120), "{}", l.re.to_decimal(40));
        let i = barnes_integral(&one_dim(4, 1, prec), prec).unwrap();
        assert!(BigReal::rel_diff(&i.re, &z4).abs_below_pow2(-120));
        let l = barnes_lattice(&one_dim(2, -1, prec), prec).unwrap();
        assert!(BigReal::rel_diff(&l.re, &eta2).abs_below_pow2(-120));
        let i = barnes_integral(&one_dim(2, -1, prec), prec).unwrap();
        assert!(BigReal::rel_diff(&i.re, &eta2).abs_below_pow2(-120));
    }

    #[test]
    fn merged_weights() {
        let prec = 64;
        let spec = BarnesSpec::berndt(2, prec).unwrap();
        let axes = merge_axes(&spec);
        assert_eq!(axes.len(), 2);
        let w = axes[0].weights(6);
        // (-1)^k (⌊k/2⌋ + 1)
        assert_eq!(w, vec![1, -1, 2, -2, 3, -3]);
    }

    #[test]
    fn integral_diverges_without_enough_order() {
        let prec = 64;
        let spec = BarnesSpec::new(1, BigComplex::one(prec), vec![BigComplex::one(prec)], vec![1]).unwrap();
        assert!(matches!(barnes_integral(&spec, prec), Err(Error::Domain(_))));
    }

    #[test]
    fn zeta4_scaling() {
        for m in [1, 2] {
            let z = zeta4_closed_form(m).unwrap();
            let back = z.scale(&Rational::from_integer(factorial(4 * m - 1) * 4));
            assert_eq!(back, berndt_closed_form(m).unwrap());
        }
    }

    #[test]
    fn berndt_spec_integral_matches_closed_form() {
        let prec = 128;
        let spec = BarnesSpec::berndt(1, prec).unwrap();
        let v = barnes_integral(&spec, prec).unwrap();
        let cf = zeta4_closed_form(1).unwrap().eval(prec);
        assert!(BigReal::rel_diff(&v.re, &cf).abs_below_pow2(-110));
        assert!(v.im.abs_below_pow2(-64));
    }

    #[test]
    fn lattice_and_integral_agree_at_s8() {
        let prec = 96;
        let spec = BarnesSpec::berndt(2, 160).unwrap();
        let l = barnes_lattice(&spec, prec).unwrap();
        let i = barnes_integral(&spec, 128).unwrap();
        assert!(BigReal::rel_diff(&l.re, &i.re).log10_abs() < -25.0, "{} vs {}", l.re.to_decimal(30), i.re.to_decimal(30));
    }

    #[test]
    fn budget_exhaustion_reports_slow_convergence() {
        let spec = BarnesSpec::berndt(2, 160).unwrap();
        assert!(matches!(barnes_lattice_with_budget(&spec, 200, 2000), Err(Error::SlowConvergence(_))));
    }
}
