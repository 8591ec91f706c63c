//! Dense univariate polynomials over the rationals, and certified complex
//! root isolation.

use num_traits::{One, Signed, Zero};

use crate::ball::{CBall, Interval};
use crate::error::{Error, Result};
use crate::rational::{from_f64, pow2, rat, round_dyadic, Rat};

/// Coefficients, constant term first. Trailing zeros are trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly(pub Vec<Rat>);

impl Poly {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| rat(x)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn lead(&self) -> Rat {
        self.0.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.0.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(k, c)| c * rat(k as i64)).collect())
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly(vec![]);
        }
        let mut c = vec![Rat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    pub fn scale(&self, q: &Rat) -> Poly {
        Poly::new(self.0.iter().map(|c| c * q).collect())
    }

    /// Quotient and remainder of Euclidean division by a nonzero divisor.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let mut rem = self.0.clone();
        let dd = divisor.degree();
        let lead = divisor.lead();
        if self.is_zero() || self.degree() < dd {
            return (Poly(vec![]), self.clone());
        }
        let mut quot = vec![Rat::zero(); self.degree() - dd + 1];
        for k in (dd..rem.len()).rev() {
            let c = &rem[k] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.0.iter().enumerate() {
                rem[k - dd + j] -= &c * dc;
            }
            quot[k - dd] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.div_rem(divisor).1
    }

    pub fn monic(&self) -> Poly {
        let l = self.lead();
        if l.is_zero() {
            return self.clone();
        }
        self.scale(&(Rat::one() / l))
    }

    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.0.iter().rev().fold(Rat::zero(), |acc, c| acc * x + c)
    }

    /// Evaluate at the exact complex point `re + i im`.
    pub fn eval_complex(&self, re: &Rat, im: &Rat) -> (Rat, Rat) {
        let mut acc = (Rat::zero(), Rat::zero());
        for c in self.0.iter().rev() {
            let nr = &acc.0 * re - &acc.1 * im + c;
            let ni = &acc.0 * im + &acc.1 * re;
            acc = (nr, ni);
        }
        acc
    }

    /// Enclosure of `p(z)` for every `z` in the ball.
    pub fn eval_ball(&self, z: &CBall) -> CBall {
        let (re, im) = self.eval_complex(&z.re, &z.im);
        if z.rad.is_zero() {
            return CBall::exact(re, im);
        }
        // |p(c + e) - p(c)| <= sum |a_k| ((|c| + r)^k - |c|^k)
        let c = z.abs().hi;
        let outer = &c + &z.rad;
        let mut err = Rat::zero();
        let mut pc = Rat::one();
        let mut po = Rat::one();
        for a in self.0.iter().skip(1) {
            pc *= &c;
            po *= &outer;
            err += a.abs() * (&po - &pc);
        }
        CBall { re, im, rad: err }
    }

    /// `self(g(x)) mod m`.
    pub fn compose_mod(&self, g: &Poly, m: &Poly) -> Poly {
        let mut acc = Poly(vec![]);
        for c in self.0.iter().rev() {
            acc = acc.mul(g).add(&Poly::new(vec![c.clone()])).rem(m);
        }
        acc
    }
}

/// One isolated root of a squarefree polynomial.
#[derive(Clone, Debug)]
pub struct IsolatedRoot {
    pub ball: CBall,
    pub is_real: bool,
}

/// Float approximations of all complex roots (Durand-Kerner iteration).
fn approximate_roots(p: &Poly) -> Vec<(f64, f64)> {
    let n = p.degree();
    let lead = crate::rational::to_f64(&p.lead());
    let c: Vec<f64> = p.0.iter().map(|x| crate::rational::to_f64(x) / lead).collect();
    let eval = |z: (f64, f64)| {
        let mut acc = (0.0f64, 0.0f64);
        for k in (0..=n).rev() {
            acc = (acc.0 * z.0 - acc.1 * z.1 + c[k], acc.0 * z.1 + acc.1 * z.0);
        }
        acc
    };
    let bound = 1.0 + c[..n].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut z: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let t = 0.4 + 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            (bound * 0.9 * t.cos(), bound * 0.9 * t.sin())
        })
        .collect();
    for _ in 0..2000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let num = eval(z[i]);
            let mut den = (1.0f64, 0.0f64);
            for j in 0..n {
                if i != j {
                    let d = (z[i].0 - z[j].0, z[i].1 - z[j].1);
                    den = (den.0 * d.0 - den.1 * d.1, den.0 * d.1 + den.1 * d.0);
                }
            }
            let m = den.0 * den.0 + den.1 * den.1;
            if m == 0.0 {
                continue;
            }
            let q = ((num.0 * den.0 + num.1 * den.1) / m, (num.1 * den.0 - num.0 * den.1) / m);
            z[i] = (z[i].0 - q.0, z[i].1 - q.1);
            delta = delta.max(q.0.abs() + q.1.abs());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

fn newton_step(p: &Poly, dp: &Poly, re: &Rat, im: &Rat, bits: u32) -> Option<(Rat, Rat)> {
    let (vr, vi) = p.eval_complex(re, im);
    let (dr, di) = dp.eval_complex(re, im);
    let m = &dr * &dr + &di * &di;
    if m.is_zero() {
        return None;
    }
    let qr = (&vr * &dr + &vi * &di) / &m;
    let qi = (&vi * &dr - &vr * &di) / &m;
    Some((round_dyadic(&(re - qr), bits), round_dyadic(&(im - qi), bits)))
}

/// Certified radius `deg * |p(z)| / |p'(z)|`: some root lies in the disc.
fn inclusion_radius(p: &Poly, dp: &Poly, re: &Rat, im: &Rat) -> Option<Rat> {
    let (vr, vi) = p.eval_complex(re, im);
    if vr.is_zero() && vi.is_zero() {
        return Some(Rat::zero());
    }
    let (dr, di) = dp.eval_complex(re, im);
    let num = Interval::point(&vr * &vr + &vi * &vi).sqrt().hi;
    let den = Interval::point(&dr * &dr + &di * &di).sqrt().lo;
    if !den.is_positive() {
        return None;
    }
    Some(rat(p.degree() as i64) * num / den)
}

/// Isolate all roots of a squarefree polynomial to radius `< 2^-bits`.
///
/// Real roots come first in increasing order, followed by complex roots
/// with positive imaginary part, each immediately followed by its conjugate.
pub fn isolate_roots(p: &Poly, bits: u32) -> Result<Vec<IsolatedRoot>> {
    let n = p.degree();
    if n == 0 {
        return Ok(vec![]);
    }
    let dp = p.derivative();
    let target = pow2(-(bits as i64));
    let approx = approximate_roots(p);

    let mut reals: Vec<f64> = vec![];
    let mut uppers: Vec<(f64, f64)> = vec![];
    let scale = approx.iter().fold(1.0f64, |m, z| m.max(z.0.abs() + z.1.abs()));
    for &(re, im) in &approx {
        if im.abs() <= 1e-7 * scale {
            reals.push(re);
        } else if im > 0.0 {
            uppers.push((re, im));
        }
    }
    if reals.len() + 2 * uppers.len() != n {
        return Err(Error::PrecisionUnreachable(bits));
    }
    reals.sort_by(|a, b| a.partial_cmp(b).unwrap());
    uppers.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let work = bits + 16;
    let refine = |mut re: Rat, mut im: Rat| -> Result<(Rat, Rat, Rat)> {
        for _ in 0..(2 * work.ilog2() + 40) {
            if let Some(r) = inclusion_radius(p, &dp, &re, &im) {
                if r < target {
                    return Ok((re, im, r));
                }
            }
            let (nr, ni) = newton_step(p, &dp, &re, &im, work).ok_or(Error::PrecisionUnreachable(bits))?;
            re = nr;
            im = ni;
        }
        Err(Error::PrecisionUnreachable(bits))
    };

    let mut roots = Vec::with_capacity(n);
    for r in reals {
        let (re, im, rad) = refine(from_f64(r), Rat::zero())?;
        debug_assert!(im.is_zero());
        roots.push(IsolatedRoot { ball: CBall { re, im, rad }, is_real: true });
    }
    for (r, i) in uppers {
        let (re, im, rad) = refine(from_f64(r), from_f64(i))?;
        if !im.is_positive() {
            return Err(Error::PrecisionUnreachable(bits));
        }
        let b = CBall { re, im, rad };
        roots.push(IsolatedRoot { ball: b.conj(), is_real: false });
        let last = roots.len() - 1;
        roots.insert(last, IsolatedRoot { ball: b, is_real: false });
    }

    // Pairwise disjoint inclusion discs each hold exactly one root.
    for i in 0..n {
        for j in i + 1..n {
            let d = roots[i].ball.sub(&CBall::exact(roots[j].ball.re.clone(), roots[j].ball.im.clone()));
            let gap = CBall::exact(d.re, d.im).abs().lo;
            if gap <= &roots[i].ball.rad + &roots[j].ball.rad {
                return Err(Error::PrecisionUnreachable(bits));
            }
        }
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn division_identity() {
        let a = Poly::from_ints(&[1, 2, 3, 4, 5]);
        let b = Poly::from_ints(&[1, 0, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), a);
        assert!(r.degree() < 2);
    }

    #[test]
    fn gcd_detects_repeated_factor() {
        let p = Poly::from_ints(&[1, 2, 1]); // (x+1)^2
        assert_eq!(p.gcd(&p.derivative()), Poly::from_ints(&[1, 1]));
        let q = Poly::from_ints(&[1, 0, 1]);
        assert_eq!(q.gcd(&q.derivative()), Poly::from_ints(&[1]));
    }

    #[test]
    fn isolates_sqrt2() {
        let roots = isolate_roots(&Poly::from_ints(&[-2, 0, 1]), 100).unwrap();
        assert_eq!(roots.len(), 2);
        assert!(roots.iter().all(|r| r.is_real));
        let lo = &roots[0].ball;
        assert!(lo.re < rat(0));
        let sq = &lo.re * &lo.re - rat(2);
        assert!(sq.abs() < pow2(-90));
    }

    #[test]
    fn isolates_gaussian_exactly() {
        let roots = isolate_roots(&Poly::from_ints(&[1, 0, 1]), 64).unwrap();
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[0].ball.im, rat(1));
        assert_eq!(roots[1].ball.im, rat(-1));
        assert!(roots[0].ball.rad.is_zero());
    }

    #[test]
    fn isolates_cyclotomic_5() {
        let roots = isolate_roots(&Poly::from_ints(&[1, 1, 1, 1, 1]), 128).unwrap();
        assert_eq!(roots.len(), 4);
        assert!(roots.iter().all(|r| !r.is_real));
        assert!(roots[0].ball.rad < pow2(-128));
    }

    #[test]
    fn compose_mod_conjugation_of_omega() {
        // x^2 - x + 1, conj(w) = 1 - w, and f(1 - x) = 0 mod f
        let f = Poly::from_ints(&[1, -1, 1]);
        let g = Poly::from_ints(&[1, -1]);
        assert!(f.compose_mod(&g, &f).is_zero());
        let _ = ratio(1, 2);
    }
}
