//! Arbitrary-precision scalars, AGM-based elliptic integrals, theta-function
//! nome inversion and the constant Γ(1/4).

mod bigreal;
mod complex;

pub use bigreal::BigReal;
pub use complex::BigComplex;

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use crate::closedform::ClosedForm;
use crate::error::{Error, Result};
use crate::exactalg::{rat, rint, Rational};

/// Extra bits carried by every internal computation beyond the requested precision.
pub const GUARD_BITS: usize = 64;

/// Working precision for a requested output precision.
pub fn working_precision(precision: usize) -> usize {
    precision + GUARD_BITS
}

pub fn agm(a: &BigReal, b: &BigReal) -> Result<BigReal> {
    if !a.is_positive() || !b.is_positive() {
        return Err(Error::Domain("agm needs positive arguments".into()));
    }
    let prec = a.prec().min(b.prec());
    let (mut a, mut b) = (a.round_to(prec + 16), b.round_to(prec + 16));
    for _ in 0..200 {
        let close = BigReal::rel_diff(&a, &b).abs_below_pow2(-(prec as i64) - 8);
        let next_a = (&a + &b).div_i64(2);
        b = (&a * &b).sqrt();
        a = next_a;
        if close {
            break;
        }
    }
    Ok(a.round_to(prec))
}

/// Complete elliptic integral of the first kind in the parameter `x = k²`.
pub fn complete_elliptic_k(x: &BigReal) -> Result<BigReal> {
    let p = x.prec();
    if !x.is_positive() || x >= &BigReal::one(p) {
        return Err(Error::Domain("K(x) needs 0 < x < 1".into()));
    }
    complete_elliptic_k_from_complement(&(BigReal::one(p) - x))
}

/// `K` given `1 - x` directly, which avoids cancellation near `x = 1`.
pub fn complete_elliptic_k_from_complement(xc: &BigReal) -> Result<BigReal> {
    let p = xc.prec();
    if !xc.is_positive() || xc >= &BigReal::one(p) {
        return Err(Error::Domain("K needs 0 < 1 - x < 1".into()));
    }
    let m = agm(&BigReal::one(p), &xc.sqrt())?;
    Ok(BigReal::pi(p) / m.mul_i64(2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theta {
    Two,
    Three,
    Four,
}

pub fn theta_series(which: Theta, q: &BigReal) -> Result<BigReal> {
    let p = q.prec();
    if !q.is_positive() || q >= &BigReal::one(p) {
        return Err(Error::Domain("theta series needs 0 < q < 1".into()));
    }
    let cutoff = -(p as i64) - 10;
    let q2 = q.square();
    match which {
        Theta::Two => {
            // 2 q^{1/4} Σ_{n≥0} q^{n(n+1)}
            let mut sum = BigReal::one(p);
            let mut term = BigReal::one(p);
            let mut step = BigReal::one(p);
            loop {
                step = &step * &q2;
                term = &term * &step;
                if term.abs_below_pow2(cutoff) {
                    break;
                }
                sum = &sum + &term;
            }
            Ok(sum.mul_i64(2) * q.sqrt().sqrt())
        }
        Theta::Three | Theta::Four => {
            let alt = which == Theta::Four;
            let mut sum = BigReal::zero(p);
            let mut term = BigReal::one(p);
            let mut step = q.clone();
            let mut n = 1u64;
            loop {
                term = &term * &step;
                step = &step * &q2;
                if term.abs_below_pow2(cutoff) {
                    break;
                }
                if alt && n % 2 == 1 {
                    sum = &sum - &term;
                } else {
                    sum = &sum + &term;
                }
                n += 1;
            }
            Ok(BigReal::one(p) + sum.mul_i64(2))
        }
    }
}

/// `Σ_{n≥1} n² q^{n²}`, the termwise nome derivative needed for `dθ₃/dy`.
fn theta3_weighted(q: &BigReal) -> BigReal {
    let p = q.prec();
    let q2 = q.square();
    let mut sum = BigReal::zero(p);
    let mut term = BigReal::one(p);
    let mut step = q.clone();
    let mut n = 1i64;
    loop {
        term = &term * &step;
        step = &step * &q2;
        let w = term.mul_i64(n * n);
        if w.abs_below_pow2(-(p as i64) - 10) {
            break;
        }
        sum = &sum + &w;
        n += 1;
    }
    sum
}

/// The tuple `(x, y, q, z, z')` tied together by `y = πK(1-x)/K(x)`, `z = 2K/π`
/// and `z' = dz/dx`. `x_comp` holds `1 - x` computed without cancellation.
#[derive(Clone, Debug)]
pub struct ModularPoint {
    pub x: BigReal,
    pub x_comp: BigReal,
    pub y: BigReal,
    pub q: BigReal,
    pub z: BigReal,
    pub zprime: BigReal,
}

impl ModularPoint {
    /// Nome inversion through theta quotients. Values carry `precision + GUARD_BITS`
    /// bits.
    pub fn from_y(y: &BigReal, precision: usize) -> Result<Self> {
        let wp = working_precision(precision);
        let y = y.round_to(wp);
        if !y.is_positive() {
            return Err(Error::Domain("modular point needs y > 0".into()));
        }
        if y.to_f64() > 1.0e8 {
            return Err(Error::PrecisionLoss("y too large: the nome underflows".into()));
        }
        let q = (-&y).exp();
        let t2 = theta_series(Theta::Two, &q)?;
        let t3 = theta_series(Theta::Three, &q)?;
        let t4 = theta_series(Theta::Four, &q)?;
        let t3_4 = t3.square().square();
        let x = t2.square().square() / &t3_4;
        let x_comp = t4.square().square() / &t3_4;
        if x.is_zero() || x_comp.is_zero() || x_comp.abs_below_pow2(-(wp as i64)) {
            return Err(Error::PrecisionLoss(format!("x or 1-x vanishes at working precision for y = {}", y.to_decimal(12))));
        }
        let z = t3.square();
        let dt3_dy = theta3_weighted(&q).mul_i64(-2);
        let dz_dy = (&t3 * &dt3_dy).mul_i64(2);
        let dx_dy = -(&x * &x_comp * z.square());
        let zprime = dz_dy / dx_dy;
        Ok(ModularPoint { x, x_comp, y, q, z, zprime })
    }

    pub fn prec(&self) -> usize {
        self.x.prec()
    }

    pub fn sqrt_x(&self) -> BigReal {
        self.x.sqrt()
    }

    pub fn sqrt_x_comp(&self) -> BigReal {
        self.x_comp.sqrt()
    }

    /// `y` recomputed from `x` through the ratio of complete integrals.
    pub fn y_from_x(&self) -> Result<BigReal> {
        let k = complete_elliptic_k_from_complement(&self.x_comp)?;
        let kp = complete_elliptic_k_from_complement(&self.x)?;
        Ok(BigReal::pi(self.prec()) * kp / k)
    }
}

fn gamma_cache() -> &'static Mutex<HashMap<usize, BigReal>> {
    static CACHE: OnceLock<Mutex<HashMap<usize, BigReal>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Precision of the independent quadrature route for Γ(1/4).
const GAMMA_CHECK_BITS: usize = 256;

fn gamma_quarter_check() -> &'static BigReal {
    static CHECK: OnceLock<BigReal> = OnceLock::new();
    CHECK.get_or_init(|| crate::quadrature::gamma_quarter_by_quadrature(GAMMA_CHECK_BITS).expect("quadrature route for Γ(1/4)"))
}

fn gamma_quarter_agm(wp: usize) -> BigReal {
    let two_pi = BigReal::pi(wp).mul_i64(2);
    let num = &two_pi * &two_pi.sqrt();
    let m = agm(&BigReal::one(wp), &BigReal::from_i64(2, wp).sqrt()).expect("positive agm arguments");
    (num / m).sqrt()
}

/// Γ(1/4) from `Γ(1/4)² = (2π)^{3/2} / agm(1, √2)`, checked once against the Euler
/// integral and cached per precision. Returned at `precision + GUARD_BITS` bits.
pub fn gamma_quarter(precision: usize) -> BigReal {
    let precision = precision.max(64);
    if let Some(v) = gamma_cache().lock().expect("gamma cache").get(&precision) {
        return v.clone();
    }
    let wp = working_precision(precision);
    let g = gamma_quarter_agm(wp);
    let check = gamma_quarter_check();
    let agree_bits = (GAMMA_CHECK_BITS.min(wp) as i64) - 40;
    assert!(
        BigReal::rel_diff(&g.round_to(GAMMA_CHECK_BITS), check).abs_below_pow2(-agree_bits),
        "Γ(1/4): AGM and quadrature routes disagree"
    );
    gamma_cache().lock().expect("gamma cache").insert(precision, g.clone());
    g
}

/// Relative errors of the central-difference checks `dx/dy ≈ -x(1-x)z²` and
/// `Δz/Δx ≈ z'` with step `h = 2^{-precision/3}`.
#[derive(Clone, Debug)]
pub struct DerivativeCheck {
    pub dx_dy_rel: BigReal,
    pub zprime_rel: BigReal,
}

pub fn derivative_check(y: &BigReal, precision: usize) -> Result<DerivativeCheck> {
    let mid = ModularPoint::from_y(y, precision)?;
    let wp = mid.prec();
    let h = BigReal::from_i64(2, wp).powi(-(precision as i64) / 3);
    let yw = y.round_to(wp);
    let plus = ModularPoint::from_y(&(&yw + &h), precision)?;
    let minus = ModularPoint::from_y(&(&yw - &h), precision)?;
    let dx = &plus.x - &minus.x;
    let fd = &dx / &h.mul_i64(2);
    let analytic = -(&mid.x * &mid.x_comp * mid.z.square());
    let zfd = (&plus.z - &minus.z) / &dx;
    Ok(DerivativeCheck { dx_dy_rel: BigReal::rel_diff(&fd, &analytic), zprime_rel: BigReal::rel_diff(&zfd, &mid.zprime) })
}

fn pochhammer(a: &Rational, n: u32) -> Rational {
    (0..n).fold(rint(1), |acc, k| acc * (a + rint(k as i64)))
}

/// `dⁿz/dxⁿ` at `x = 1/2`, equal to `(1/2)ₙ² √π / Γ²(n/2 + 3/4)`, in the Γ(1/4)-π-√2 basis.
///
/// Even `n = 2k` uses `Γ(k + 3/4) = (3/4)_k π√2 / Γ(1/4)`; odd `n = 2k+1` uses
/// `Γ(k + 5/4) = (1/4)_{k+1} Γ(1/4)`.
pub fn z_derivative_at_half(n: u32) -> ClosedForm {
    let half_n = pochhammer(&rat(1, 2), n);
    let num = &half_n * &half_n;
    if n.is_multiple_of(2) {
        let a = pochhammer(&rat(3, 4), n / 2);
        ClosedForm::monomial(num / (a.clone() * a * rint(2)), 2, -3, 0)
    } else {
        let a = pochhammer(&rat(1, 4), n / 2 + 1);
        ClosedForm::monomial(num / (a.clone() * a), -2, 1, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &BigReal, b: &BigReal, bits: i64) -> bool {
        BigReal::rel_diff(a, b).abs_below_pow2(-bits)
    }

    #[test]
    fn agm_fixed_point_and_recurrence() {
        let p = 256;
        let one = BigReal::one(p);
        assert!(close(&agm(&one, &one).unwrap(), &one, 250));
        let a = agm(&BigReal::from_i64(4, p), &one).unwrap();
        let b = agm(&BigReal::parse("2.5", p).unwrap(), &BigReal::from_i64(2, p)).unwrap();
        assert!(close(&a, &b, 248));
        assert!(agm(&BigReal::zero(p), &one).is_err());
    }

    #[test]
    fn agm_gauss_constant_stable_across_precisions() {
        let a = agm(&BigReal::one(300), &BigReal::from_i64(2, 300).sqrt()).unwrap();
        let b = agm(&BigReal::one(400), &BigReal::from_i64(2, 400).sqrt()).unwrap();
        assert!(close(&a, &b.round_to(300), 290));
        assert!(a.to_decimal(15).starts_with("1.19814023473559"));
    }

    #[test]
    fn k_small_parameter_limit() {
        let p = 200;
        let x = BigReal::parse("1e-30", p).unwrap();
        let k = complete_elliptic_k(&x).unwrap();
        let half_pi = BigReal::pi(p).div_i64(2);
        assert!(BigReal::rel_diff(&k, &half_pi).log10_abs() < -25.0);
        assert!(complete_elliptic_k(&BigReal::one(p)).is_err());
    }

    #[test]
    fn z_at_half_matches_gamma() {
        let p = 256;
        let wp = working_precision(p);
        let k = complete_elliptic_k(&BigReal::one(wp).div_i64(2)).unwrap();
        let z = k.mul_i64(2) / BigReal::pi(wp);
        let g = gamma_quarter(p);
        let expect = g.square() / (BigReal::pi(wp).powi(3).sqrt().mul_i64(2));
        assert!(close(&z, &expect, p as i64));
    }

    #[test]
    fn gamma_quarter_digits_and_fourth_power() {
        let g = gamma_quarter(256);
        assert!(g.to_decimal(21).starts_with("3.62560990822190831193"));
        assert_eq!(g.square().square(), g.powi(4));
    }

    #[test]
    fn theta_identities() {
        let p = 256;
        let q = (-BigReal::pi(p)).exp();
        let t2 = theta_series(Theta::Two, &q).unwrap();
        let t3 = theta_series(Theta::Three, &q).unwrap();
        let t4 = theta_series(Theta::Four, &q).unwrap();
        let lhs = t3.powi(4);
        let rhs = t2.powi(4) + t4.powi(4);
        assert!(close(&lhs, &rhs, 245));
        let ratio = &t2 / &t3;
        let expect = BigReal::from_i64(2, p).sqrt().sqrt().recip();
        assert!(close(&ratio, &expect, 245));
        let tiny = BigReal::parse("1e-40", p).unwrap();
        let t = theta_series(Theta::Three, &tiny).unwrap() - BigReal::one(p);
        assert!(t.log10_abs() < -39.0);
        assert!(theta_series(Theta::Three, &BigReal::one(p)).is_err());
    }

    #[test]
    fn lemniscatic_point() {
        let p = 256;
        let mp = ModularPoint::from_y(&BigReal::pi(p + 64), p).unwrap();
        let half = BigReal::one(mp.prec()).div_i64(2);
        assert!(close(&mp.x, &half, p as i64));
        assert!(close(&mp.x_comp, &half, p as i64));
        let g = gamma_quarter(p);
        let pi = BigReal::pi(mp.prec());
        let z = g.square() / (pi.powi(3).sqrt().mul_i64(2));
        let zp = pi.sqrt().mul_i64(4) / g.square();
        assert!(close(&mp.z, &z, p as i64));
        assert!(close(&mp.zprime, &zp, p as i64 - 4));
    }

    #[test]
    fn round_trip_generic() {
        let p = 200;
        for s in ["0.5", "2", "3.3", "6"] {
            let y = BigReal::parse(s, p + 64).unwrap();
            let mp = ModularPoint::from_y(&y, p).unwrap();
            assert!(close(&mp.y_from_x().unwrap(), &y, p as i64 - 8), "y = {s}");
        }
        assert!(ModularPoint::from_y(&BigReal::zero(128), 64).is_err());
    }

    #[test]
    fn z_derivatives_at_half() {
        assert_eq!(z_derivative_at_half(0), ClosedForm::monomial(rat(1, 2), 2, -3, 0));
        assert_eq!(z_derivative_at_half(1), ClosedForm::monomial(rint(4), -2, 1, 0));
        assert_eq!(z_derivative_at_half(2), ClosedForm::monomial(rat(1, 2), 2, -3, 0));
    }

    #[test]
    fn finite_difference_derivatives() {
        let p = 192;
        for y in ["0.7", "2", "5.5"] {
            let c = derivative_check(&BigReal::parse(y, p).unwrap(), p).unwrap();
            assert!(c.dx_dy_rel.abs_below_pow2(-(p as i64) / 3), "{y}");
            assert!(c.zprime_rel.abs_below_pow2(-(p as i64) / 3), "{y}");
        }
    }

    #[test]
    fn z_derivative_recurrence_at_half() {
        // z^{(n+2)}(1/2) = (2n+1)² z^{(n)}(1/2)
        for n in 0..8u32 {
            let lhs = z_derivative_at_half(n + 2);
            let rhs = z_derivative_at_half(n).scale(&rint(((2 * n + 1) * (2 * n + 1)) as i64));
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }
}
