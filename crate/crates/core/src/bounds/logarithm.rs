//! Certified natural logarithms and exponentials of rationals.
//!
//! Results are closed intervals with dyadic endpoints of `prec` fractional
//! bits, rounded outward, so every returned interval contains the true value.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::ball::Interval;
use crate::rational::{pow2, Rat};

pub(crate) fn round_down(q: &Rat, prec: u32) -> Rat {
    let s = BigInt::one() << prec as usize;
    let scaled = q * Rat::from_integer(s.clone());
    Rat::new(scaled.floor().to_integer(), s)
}

pub(crate) fn round_up(q: &Rat, prec: u32) -> Rat {
    let s = BigInt::one() << prec as usize;
    let scaled = q * Rat::from_integer(s.clone());
    Rat::new(scaled.ceil().to_integer(), s)
}

pub(crate) fn outward(iv: Interval, prec: u32) -> Interval {
    Interval { lo: round_down(&iv.lo, prec), hi: round_up(&iv.hi, prec) }
}

/// `2 atanh(z) = ln((1+z)/(1-z))` for `0 <= z <= 1/3`, bounded from the
/// requested side.
fn two_atanh(z: &Rat, prec: u32, upper: bool) -> Rat {
    let work = prec + 16;
    let z2 = z * z;
    let mut term = z.clone();
    let mut sum = Rat::zero();
    let eps = pow2(-(work as i64));
    let mut k: u64 = 1;
    loop {
        let t = &term / Rat::from_integer(BigInt::from(k));
        sum += if upper { round_up(&t, work) } else { round_down(&t, work) };
        // remaining terms are below term * z^2 / (1 - z^2) <= term * 9/8 * z^2
        let tail = &term * &z2 * Rat::new(BigInt::from(9), BigInt::from(8));
        if tail < eps {
            if upper {
                sum += tail;
            }
            break;
        }
        let next = &term * &z2;
        term = if upper { round_up(&next, work + 8) } else { round_down(&next, work + 8) };
        k += 2;
    }
    let v = sum * Rat::from_integer(BigInt::from(2));
    if upper {
        round_up(&v, prec)
    } else {
        round_down(&v, prec)
    }
}

/// Enclosure of `ln 2`.
pub fn ln2(prec: u32) -> Interval {
    let third = Rat::new(BigInt::one(), BigInt::from(3));
    Interval { lo: two_atanh(&third, prec + 4, false), hi: two_atanh(&third, prec + 4, true) }
}

/// Enclosure of `ln q` for a positive rational `q`.
pub fn ln_rational(q: &Rat, prec: u32) -> Interval {
    assert!(q.is_positive(), "logarithm of a nonpositive number");
    if q.is_one() {
        return Interval::point(Rat::zero());
    }
    // q = 2^k m with m in [1, 2)
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let mut k = nb - db;
    let mut m = q / pow2(k);
    if m >= Rat::from_integer(BigInt::from(2)) {
        m /= Rat::from_integer(BigInt::from(2));
        k += 1;
    } else if m < Rat::one() {
        m *= Rat::from_integer(BigInt::from(2));
        k -= 1;
    }
    // ln m = 2 atanh((m - 1)/(m + 1)); the argument is below 1/3
    let z = (&m - Rat::one()) / (&m + Rat::one());
    let extra = 8 + 64 - (k.unsigned_abs().max(1)).leading_zeros();
    let p = prec + extra;
    let zl = round_down(&z, p + 8);
    let zh = round_up(&z, p + 8).min(Rat::new(BigInt::one(), BigInt::from(3)));
    let lm = Interval { lo: two_atanh(&zl, p, false), hi: two_atanh(&zh, p, true) };
    let l2 = ln2(p);
    let kq = Rat::from_integer(BigInt::from(k));
    outward(l2.scale(&kq).add(&lm), prec)
}

/// Enclosure of `ln x` for every `x` in a positive interval.
pub fn ln_interval(iv: &Interval, prec: u32) -> Interval {
    Interval { lo: ln_rational(&iv.lo, prec).lo, hi: ln_rational(&iv.hi, prec).hi }
}

/// Enclosure of `e^y` for a rational `y`.
pub fn exp_rational(y: &Rat, prec: u32) -> Interval {
    if y.is_zero() {
        return Interval::point(Rat::one());
    }
    // e^y underflows the working grid once y < -(prec + 2) ln 2
    if *y < Rat::from_integer(-BigInt::from(prec as i64 + 2)) {
        return Interval { lo: Rat::zero(), hi: pow2(-(prec as i64)) };
    }
    // halve until |x| <= 1/4, then square back
    let mut s: u32 = 0;
    let quarter = Rat::new(BigInt::one(), BigInt::from(4));
    while y.abs() / pow2(s as i64) > quarter {
        s += 1;
    }
    let mag = y.abs().ceil().to_integer();
    let mag_bits = if mag.is_zero() { 0 } else { mag.bits() as u32 };
    let work = prec + s + 2 * mag_bits + 32;
    let x = y / pow2(s as i64);
    let mut sum = Rat::zero();
    let mut term = Rat::one();
    let mut k = 0u64;
    let eps = pow2(-(work as i64));
    loop {
        sum += &term;
        k += 1;
        term = &term * &x / Rat::from_integer(BigInt::from(k));
        if term.abs() < eps {
            break;
        }
    }
    // Taylor remainder with |x| <= 1/4 is at most 4/3 |next term|
    let rem = term.abs() * Rat::new(BigInt::from(4), BigInt::from(3)) + &eps;
    let mut lo = round_down(&(&sum - &rem), work).max(Rat::zero());
    let mut hi = round_up(&(&sum + &rem), work);
    for _ in 0..s {
        lo = round_down(&(&lo * &lo), work);
        hi = round_up(&(&hi * &hi), work);
    }
    outward(Interval { lo, hi }, prec)
}

/// Enclosure of `e^y` for every `y` in an interval.
pub fn exp_interval(iv: &Interval, prec: u32) -> Interval {
    Interval { lo: exp_rational(&iv.lo, prec).lo, hi: exp_rational(&iv.hi, prec).hi }
}

/// `ln(sum e^{l_i})` for intervals `l_i`.
pub fn log_sum_exp(logs: &[Interval], prec: u32) -> Interval {
    let m = logs.iter().map(|l| l.lo.clone()).max().expect("nonempty sum");
    let work = prec + 8 + (64 - (logs.len() as u64).leading_zeros());
    let mut total = Interval::zero();
    for l in logs {
        let shifted = Interval { lo: &l.lo - &m, hi: &l.hi - &m };
        total = total.add(&exp_interval(&shifted, work));
    }
    let base = Interval::point(m);
    outward(base.add(&ln_interval(&total, work)), prec)
}
