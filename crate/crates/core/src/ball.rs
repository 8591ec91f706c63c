//! Complex balls with rational centres and rational radii, plus closed real
//! intervals. All operations are outward rounded.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::rational::{pow2, round_dyadic, sqrt_lower, sqrt_upper, to_f64, Rat};

/// Guard bits used when bounding moduli by square roots.
const SQRT_BITS: u32 = 96;

/// Closed real interval `[lo, hi]` with rational endpoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Rat,
}

impl Interval {
    pub fn point(x: Rat) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn new(lo: Rat, hi: Rat) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn zero() -> Self {
        Interval::point(Rat::zero())
    }

    pub fn width(&self) -> Rat {
        &self.hi - &self.lo
    }

    pub fn mid_f64(&self) -> f64 {
        (to_f64(&self.lo) + to_f64(&self.hi)) / 2.0
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    pub fn add(&self, o: &Interval) -> Interval {
        Interval::new(&self.lo + &o.lo, &self.hi + &o.hi)
    }

    pub fn mul(&self, o: &Interval) -> Interval {
        let c = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = c.iter().min().unwrap().clone();
        let hi = c.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }

    pub fn scale(&self, q: &Rat) -> Interval {
        if q.is_negative() {
            Interval::new(&self.hi * q, &self.lo * q)
        } else {
            Interval::new(&self.lo * q, &self.hi * q)
        }
    }

    /// Bounds of `sqrt` on a nonnegative interval.
    pub fn sqrt(&self) -> Interval {
        Interval::new(sqrt_lower(&self.lo, SQRT_BITS), sqrt_upper(&self.hi, SQRT_BITS))
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:.12e}, {:.12e}]", to_f64(&self.lo), to_f64(&self.hi))
    }
}

/// The disc `{ z : |z - (re + i im)| <= rad }`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CBall {
    pub re: Rat,
    pub im: Rat,
    pub rad: Rat,
}

impl CBall {
    pub fn exact(re: Rat, im: Rat) -> Self {
        CBall { re, im, rad: Rat::zero() }
    }

    pub fn real(re: Rat) -> Self {
        CBall::exact(re, Rat::zero())
    }

    pub fn zero() -> Self {
        CBall::real(Rat::zero())
    }

    pub fn is_exact(&self) -> bool {
        self.rad.is_zero()
    }

    pub fn conj(&self) -> CBall {
        CBall { re: self.re.clone(), im: -&self.im, rad: self.rad.clone() }
    }

    pub fn neg(&self) -> CBall {
        CBall { re: -&self.re, im: -&self.im, rad: self.rad.clone() }
    }

    pub fn add(&self, o: &CBall) -> CBall {
        CBall { re: &self.re + &o.re, im: &self.im + &o.im, rad: &self.rad + &o.rad }
    }

    pub fn sub(&self, o: &CBall) -> CBall {
        CBall { re: &self.re - &o.re, im: &self.im - &o.im, rad: &self.rad + &o.rad }
    }

    pub fn scale(&self, q: &Rat) -> CBall {
        CBall { re: &self.re * q, im: &self.im * q, rad: &self.rad * q.abs() }
    }

    pub fn mul(&self, o: &CBall) -> CBall {
        let re = &self.re * &o.re - &self.im * &o.im;
        let im = &self.re * &o.im + &self.im * &o.re;
        let rad = if self.rad.is_zero() && o.rad.is_zero() {
            Rat::zero()
        } else {
            self.center_abs_upper() * &o.rad + o.center_abs_upper() * &self.rad + &self.rad * &o.rad
        };
        CBall { re, im, rad }
    }

    pub fn center_abs2(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Cheap upper bound of `|centre|` (the l1 modulus).
    pub fn center_abs_upper(&self) -> Rat {
        self.re.abs() + self.im.abs()
    }

    /// Bounds of `|z|` over the ball.
    pub fn abs(&self) -> Interval {
        let c = Interval::point(self.center_abs2()).sqrt();
        let lo = &c.lo - &self.rad;
        let lo = if lo.is_positive() { lo } else { Rat::zero() };
        Interval::new(lo, &c.hi + &self.rad)
    }

    /// Bounds of `|z|^2` over the ball.
    pub fn abs2(&self) -> Interval {
        if self.rad.is_zero() {
            return Interval::point(self.center_abs2());
        }
        let a = self.abs();
        Interval::new(&a.lo * &a.lo, &a.hi * &a.hi)
    }

    /// Bounds of the real part.
    pub fn re_interval(&self) -> Interval {
        Interval::new(&self.re - &self.rad, &self.re + &self.rad)
    }

    pub fn contains_zero(&self) -> bool {
        self.center_abs2() <= &self.rad * &self.rad
    }

    /// Round the centre to a dyadic grid of step `2^-bits`, widening the radius.
    pub fn round(&self, bits: u32) -> CBall {
        if self.re.denom().bits() <= bits as u64 + 2 && self.im.denom().bits() <= bits as u64 + 2 {
            return self.clone();
        }
        let re = round_dyadic(&self.re, bits);
        let im = round_dyadic(&self.im, bits);
        let rad = round_up_dyadic(&self.rad, bits) + pow2(-(bits as i64));
        CBall { re, im, rad }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (to_f64(&self.re), to_f64(&self.im))
    }
}

/// Smallest dyadic `k/2^bits >= q` for `q >= 0`.
pub fn round_up_dyadic(q: &Rat, bits: u32) -> Rat {
    if q.is_zero() {
        return Rat::zero();
    }
    let scale = BigInt::from(1) << bits as usize;
    let scaled = q * Rat::from_integer(scale.clone());
    Rat::new(scaled.ceil().to_integer(), scale)
}

impl fmt::Display for CBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (re, im) = self.to_f64();
        write!(f, "({re:.12} {} {:.12}i) ± {:.3e}", if im < 0.0 { '-' } else { '+' }, im.abs(), to_f64(&self.rad))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, ratio};

    #[test]
    fn multiplication_contains_true_product() {
        // (1 ± 1/10) * (2 ± 1/10): true product range [1.71, 2.31]
        let a = CBall { re: rat(1), im: rat(0), rad: ratio(1, 10) };
        let b = CBall { re: rat(2), im: rat(0), rad: ratio(1, 10) };
        let p = a.mul(&b);
        assert_eq!(p.re, rat(2));
        assert!(p.rad >= ratio(31, 100));
    }

    #[test]
    fn abs2_of_exact_is_exact() {
        let z = CBall::exact(rat(3), rat(4));
        assert_eq!(z.abs2(), Interval::point(rat(25)));
        assert!(z.abs().lo <= rat(5) && z.abs().hi >= rat(5));
    }

    #[test]
    fn rounding_widens_radius() {
        let z = CBall::exact(ratio(1, 3), ratio(-2, 7));
        let r = z.round(20);
        let d = r.sub(&z);
        assert!(d.center_abs2() <= &r.rad * &r.rad);
    }
}
