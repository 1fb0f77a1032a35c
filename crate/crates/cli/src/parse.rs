//! Parsers for real and complex command-line arguments.

use berndt_core::elliptic_core::{working_precision, BigComplex, BigReal};

fn factor(s: &str, wp: usize) -> Option<BigReal> {
    let s = s.trim();
    if let Some(rest) = s.strip_prefix("pi") {
        let pi = BigReal::pi(wp);
        if rest.is_empty() {
            return Some(pi);
        }
        let e: i64 = rest.strip_prefix('^')?.parse().ok()?;
        return Some(pi.powi(e));
    }
    BigReal::parse(s, wp)
}

/// Real argument: products and one quotient of decimals and powers of `pi`,
/// e.g. `2`, `1.7`, `pi`, `pi^2/2`, `3*pi/4`.
pub fn parse_real(s: &str, precision: usize) -> Option<BigReal> {
    let wp = working_precision(precision);
    let mut parts = s.split('/');
    let num = parts.next()?;
    let den = parts.next();
    if parts.next().is_some() {
        return None;
    }
    let product = |t: &str| -> Option<BigReal> { t.split('*').try_fold(BigReal::one(wp), |acc, f| Some(acc * factor(f, wp)?)) };
    let mut v = product(num)?;
    if let Some(d) = den {
        let d = product(d)?;
        if d.is_zero() {
            return None;
        }
        v = v / d;
    }
    Some(v)
}

/// Complex argument `a`, `a+bi`, `a-bi`, `a+i`, `a-i` with decimal `a`, `b`.
pub fn parse_complex(s: &str, precision: usize) -> Option<BigComplex> {
    let wp = working_precision(precision);
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(body) = s.strip_suffix('i') else {
        return Some(BigComplex::from_real(BigReal::parse(&s, wp)?));
    };
    let split = body.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(i, _)| i).last();
    let (re, im) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => BigReal::one(wp),
        "-" => -BigReal::one(wp),
        t => BigReal::parse(t.strip_prefix('+').unwrap_or(t), wp)?,
    };
    Some(BigComplex::new(BigReal::parse(re, wp)?, im))
}

/// Sign list entries: `+`, `-`, `+1`, `-1`.
pub fn parse_sign(s: &str) -> Option<i8> {
    match s.trim() {
        "+" | "+1" | "1" => Some(1),
        "-" | "-1" => Some(-1),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &BigReal, b: f64) -> bool {
        (a.to_f64() - b).abs() < 1e-12
    }

    #[test]
    fn reals() {
        assert!(close(&parse_real("2", 128).unwrap(), 2.0));
        assert!(close(&parse_real("1.7", 128).unwrap(), 1.7));
        assert!(close(&parse_real("pi", 128).unwrap(), std::f64::consts::PI));
        assert!(close(&parse_real("pi^2/2", 128).unwrap(), std::f64::consts::PI.powi(2) / 2.0));
        assert!(close(&parse_real("3*pi/4", 128).unwrap(), 3.0 * std::f64::consts::PI / 4.0));
        assert!(parse_real("abc", 128).is_none());
        assert!(parse_real("1/0", 128).is_none());
        assert!(parse_real("1/2/3", 128).is_none());
    }

    #[test]
    fn complexes() {
        let c = parse_complex("2+2i", 128).unwrap();
        assert!(close(&c.re, 2.0) && close(&c.im, 2.0));
        let c = parse_complex("1-i", 128).unwrap();
        assert!(close(&c.re, 1.0) && close(&c.im, -1.0));
        let c = parse_complex("3", 128).unwrap();
        assert!(close(&c.re, 3.0) && c.im.is_zero());
        let c = parse_complex("-0.5+1.5i", 128).unwrap();
        assert!(close(&c.re, -0.5) && close(&c.im, 1.5));
        assert!(parse_complex("x+i", 128).is_none());
    }

    #[test]
    fn signs() {
        assert_eq!(parse_sign("+"), Some(1));
        assert_eq!(parse_sign("-1"), Some(-1));
        assert_eq!(parse_sign("0"), None);
    }
}
