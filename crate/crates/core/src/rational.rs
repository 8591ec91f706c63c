//! Small helpers over arbitrary precision integers and rationals.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: &BigInt) -> Rat {
    Rat::from_integer(n.clone())
}

/// Largest integer `x` with `x*x <= n` for `n >= 0`.
pub fn isqrt_floor(n: &BigInt) -> BigInt {
    if n.is_negative() {
        return BigInt::zero();
    }
    n.sqrt()
}

/// Smallest integer `x` with `x*x >= n` for `n >= 0`.
pub fn isqrt_ceil(n: &BigInt) -> BigInt {
    let s = isqrt_floor(n);
    if &s * &s == *n {
        s
    } else {
        s + 1
    }
}

/// Rational lower bound of `sqrt(q)` with relative accuracy about `2^-bits`.
pub fn sqrt_lower(q: &Rat, bits: u32) -> Rat {
    if !q.is_positive() {
        return Rat::zero();
    }
    let scale = BigInt::one() << (2 * bits as usize);
    let n = q.numer() * &scale * q.denom();
    let s = isqrt_floor(&n);
    Rat::new(s, q.denom() * (BigInt::one() << bits as usize))
}

/// Rational upper bound of `sqrt(q)` with relative accuracy about `2^-bits`.
pub fn sqrt_upper(q: &Rat, bits: u32) -> Rat {
    if !q.is_positive() {
        return Rat::zero();
    }
    let scale = BigInt::one() << (2 * bits as usize);
    let n = q.numer() * &scale * q.denom();
    let s = isqrt_ceil(&n);
    Rat::new(s, q.denom() * (BigInt::one() << bits as usize))
}

/// Rational upper bound of `q^(1/k)` for `q >= 0`, within a relative
/// `2^-bits` of the true root.
pub fn nth_root_upper(q: &Rat, k: u32, bits: u32) -> Rat {
    assert!(k >= 1, "root index must be positive");
    if !q.is_positive() {
        return Rat::zero();
    }
    if k == 1 {
        return q.clone();
    }
    // bracket the root between powers of two, then bisect
    let e = (q.numer().bits() as i64 - q.denom().bits() as i64) / k as i64;
    let mut lo = pow2(e - 2);
    let mut hi = pow2(e + 2);
    while lo.pow(k as i32) > *q {
        lo /= Rat::from_integer(BigInt::from(2));
    }
    while hi.pow(k as i32) < *q {
        hi *= Rat::from_integer(BigInt::from(2));
    }
    let tol = &lo * pow2(-(bits as i64));
    while &hi - &lo > tol {
        let mid = round_dyadic(&((&lo + &hi) / Rat::from_integer(BigInt::from(2))), bits + 8 + e.unsigned_abs() as u32);
        if mid <= lo || mid >= hi {
            break;
        }
        if mid.pow(k as i32) >= *q {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Exact square root when `q` is the square of a rational.
pub fn sqrt_exact(q: &Rat) -> Option<Rat> {
    if q.is_negative() {
        return None;
    }
    let n = isqrt_floor(q.numer());
    let d = isqrt_floor(q.denom());
    if &n * &n == *q.numer() && &d * &d == *q.denom() {
        Some(Rat::new(n, d))
    } else {
        None
    }
}

/// Exact `k`-th root of a positive integer when it exists.
pub fn nth_root_exact(n: &BigUint, k: u32) -> Option<BigUint> {
    let r = n.nth_root(k);
    if num_traits::pow(r.clone(), k as usize) == *n {
        Some(r)
    } else {
        None
    }
}

/// Round to the nearest integer, halves rounding up.
pub fn round_nearest(q: &Rat) -> BigInt {
    (q + ratio(1, 2)).floor().to_integer()
}

/// Round `q` to a dyadic rational with denominator `2^bits`, returning the
/// rounded value. The error is at most `2^-(bits+1)`.
pub fn round_dyadic(q: &Rat, bits: u32) -> Rat {
    if q.denom().is_one() {
        return q.clone();
    }
    let scale = BigInt::one() << bits as usize;
    let scaled = q * Rat::from_integer(scale.clone());
    Rat::new(round_nearest(&scaled), scale)
}

pub fn pow2(bits: i64) -> Rat {
    if bits >= 0 {
        Rat::from_integer(BigInt::one() << bits as usize)
    } else {
        Rat::new(BigInt::one(), BigInt::one() << (-bits) as usize)
    }
}

pub fn to_f64(q: &Rat) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // shift both parts into f64 range
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift_n = (nb - 60).max(0);
    let shift_d = (db - 60).max(0);
    let n = (q.numer() >> shift_n as usize).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> shift_d as usize).to_f64().unwrap_or(1.0);
    n / d * 2f64.powi((shift_n - shift_d) as i32)
}

/// Exact rational from an f64 (every finite double is a dyadic rational).
pub fn from_f64(x: f64) -> Rat {
    Rat::from_float(x).unwrap_or_else(Rat::zero)
}

/// Parse "p", "p/q", or a finite decimal such as "-0.125" or "1e-3" exactly.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: `{s}`"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rat::new(p, q));
    }
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().map_err(|_| bad())? };
    let e = exp - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let mut value =
        if e >= 0 { Rat::from_integer(n * num_traits::pow(ten, e as usize)) } else { Rat::new(n, num_traits::pow(ten, (-e) as usize)) };
    if neg {
        value = -value;
    }
    Ok(value)
}

pub fn fmt_rat(q: &Rat) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn gcd_all<'a>(it: impl IntoIterator<Item = &'a BigInt>) -> BigInt {
    it.into_iter().fold(BigInt::zero(), |g, x| g.gcd(x))
}

pub fn lcm_denoms<'a>(it: impl IntoIterator<Item = &'a Rat>) -> BigInt {
    it.into_iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()))
}

pub fn abs_biguint(n: &BigInt) -> BigUint {
    n.magnitude().clone()
}

pub fn is_integral(q: &Rat) -> bool {
    q.denom().is_one()
}

pub fn sign_of(q: &Rat) -> Sign {
    q.numer().sign()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nth_root_bounds() {
        let r = nth_root_upper(&rat(1000), 3, 40);
        assert!(r.pow(3) >= rat(1000));
        assert!(to_f64(&r) - 10.0 < 1e-9);
        let r = nth_root_upper(&ratio(1, 7), 4, 40);
        assert!(r.pow(4) >= ratio(1, 7));
        assert!((to_f64(&r) - (1.0f64 / 7.0).powf(0.25)).abs() < 1e-9);
        assert_eq!(nth_root_upper(&rat(5), 1, 10), rat(5));
    }

    #[test]
    fn parses_decimal_and_fraction() {
        assert_eq!(parse_rat("0.5").unwrap(), ratio(1, 2));
        assert_eq!(parse_rat("-3/6").unwrap(), ratio(-1, 2));
        assert_eq!(parse_rat("1e-3").unwrap(), ratio(1, 1000));
        assert_eq!(parse_rat("-.25").unwrap(), ratio(-1, 4));
        assert_eq!(parse_rat("7").unwrap(), rat(7));
        assert!(parse_rat("x").is_err());
        assert!(parse_rat("1/0").is_err());
    }

    #[test]
    fn sqrt_bounds_bracket() {
        let two = rat(2);
        let lo = sqrt_lower(&two, 64);
        let hi = sqrt_upper(&two, 64);
        assert!(&lo * &lo <= two && &hi * &hi >= two);
        assert!(&hi - &lo < pow2(-60));
        assert_eq!(sqrt_exact(&ratio(9, 4)), Some(ratio(3, 2)));
        assert_eq!(sqrt_exact(&rat(2)), None);
    }

    #[test]
    fn round_nearest_halves_up() {
        assert_eq!(round_nearest(&ratio(1, 2)), BigInt::from(1));
        assert_eq!(round_nearest(&ratio(-1, 2)), BigInt::from(0));
        assert_eq!(round_nearest(&ratio(-3, 4)), BigInt::from(-1));
    }

    #[test]
    fn huge_rational_to_f64() {
        let q = Rat::new(BigInt::one() << 2000usize, BigInt::one() << 1999usize);
        assert!((to_f64(&q) - 2.0).abs() < 1e-12);
    }
}
