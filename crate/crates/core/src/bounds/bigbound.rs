//! Symbolic positive reals `prod b_i^{e_i}` with rational exponents.
//!
//! Bases are integers, sums of bounds, or logarithms of bounds. Integer
//! bases are kept pairwise coprime (prime whenever they are small), so a product
//! of integer factors equals 1 exactly when its factor list is empty. Any
//! other comparison is decided on certified log intervals, refining the
//! precision until the intervals separate.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::logarithm::{ln_interval, ln_rational, log_sum_exp, outward};
use crate::ball::Interval;
use crate::error::{Error, Result};
use crate::rational::{fmt_rat, rat, Rat};

/// Precisions (fractional bits) tried in turn when deciding comparisons.
const PRECISIONS: [u32; 7] = [64, 128, 256, 512, 1024, 2048, 4096];

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Base {
    Int(BigUint),
    Sum(Vec<BigBound>),
    Ln(Box<BigBound>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BigBound {
    factors: Vec<(Base, Rat)>,
}

fn base_key(b: &Base) -> (u8, BigUint, String) {
    match b {
        Base::Int(n) => (0, n.clone(), String::new()),
        Base::Sum(_) => (1, BigUint::zero(), b.to_string()),
        Base::Ln(_) => (2, BigUint::zero(), b.to_string()),
    }
}

/// Split off small prime factors by trial division. Bases below `2^32`
/// come out fully factored; larger cofactors are kept whole.
fn split_small_primes(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out = vec![];
    if let Some(mut v) = n.to_u64() {
        let mut p = 2u64;
        while p <= 1 << 16 && p * p <= v {
            let mut k = 0;
            while v % p == 0 {
                v /= p;
                k += 1;
            }
            if k > 0 {
                out.push((BigUint::from(p), k));
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if v > 1 {
            out.push((BigUint::from(v), 1));
        }
        return out;
    }
    let mut v = n.clone();
    for p in 2u32..1024 {
        let mut k = 0;
        while (&v % p).is_zero() {
            v /= p;
            k += 1;
        }
        if k > 0 {
            out.push((BigUint::from(p), k));
        }
    }
    if !v.is_one() {
        out.push((v, 1));
    }
    out
}

/// Rewrite integer factors over a pairwise coprime set of bases.
fn coprime_refine(mut fs: Vec<(BigUint, Rat)>) -> Vec<(BigUint, Rat)> {
    loop {
        fs.retain(|(b, e)| !b.is_one() && !e.is_zero());
        fs.sort_by(|a, b| a.0.cmp(&b.0));
        // merge equal bases
        let mut merged: Vec<(BigUint, Rat)> = vec![];
        for (b, e) in fs.drain(..) {
            match merged.last_mut() {
                Some((lb, le)) if *lb == b => *le += e,
                _ => merged.push((b, e)),
            }
        }
        merged.retain(|(_, e)| !e.is_zero());
        let mut split = None;
        'outer: for i in 0..merged.len() {
            for j in i + 1..merged.len() {
                let g = merged[i].0.gcd(&merged[j].0);
                if !g.is_one() {
                    split = Some((i, j, g));
                    break 'outer;
                }
            }
        }
        match split {
            None => {
                // small primes make the representation canonical for all
                // moderately sized bases; splitting keeps coprimality
                let mut out: Vec<(BigUint, Rat)> = vec![];
                let mut again = false;
                for (b, e) in merged {
                    let parts = split_small_primes(&b);
                    if parts.len() > 1 || parts[0].1 > 1 {
                        again = true;
                    }
                    out.extend(parts.into_iter().map(|(p, k)| (p, &e * rat(k as i64))));
                }
                if again {
                    fs = out;
                    continue;
                }
                out.sort_by(|a, b| a.0.cmp(&b.0));
                return out;
            }
            Some((i, j, g)) => {
                let (bi, ei) = merged[i].clone();
                let (bj, ej) = merged[j].clone();
                let mut next: Vec<(BigUint, Rat)> =
                    merged.into_iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, f)| f).collect();
                next.push((&bi / &g, ei.clone()));
                next.push((&bj / &g, ej.clone()));
                next.push((g, ei + ej));
                fs = next;
            }
        }
    }
}

thread_local! {
    static LN_CACHE: RefCell<HashMap<(BigUint, u32), Interval>> = RefCell::new(HashMap::new());
}

/// `ln n`, memoized per thread; grid checks hit the same small primes often.
fn cached_ln_int(n: &BigUint, prec: u32) -> Interval {
    let key = (n.clone(), prec);
    if let Some(iv) = LN_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return iv;
    }
    let iv = ln_rational(&Rat::from_integer(BigInt::from(n.clone())), prec);
    LN_CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() > 1 << 16 {
            c.clear();
        }
        c.insert(key, iv.clone());
    });
    iv
}

impl BigBound {
    pub fn one() -> Self {
        BigBound { factors: vec![] }
    }

    fn from_parts(ints: Vec<(BigUint, Rat)>, atoms: Vec<(Base, Rat)>) -> Self {
        let mut factors: Vec<(Base, Rat)> = coprime_refine(ints).into_iter().map(|(b, e)| (Base::Int(b), e)).collect();
        let mut atoms = atoms;
        atoms.sort_by_key(|a| base_key(&a.0));
        let mut merged: Vec<(Base, Rat)> = vec![];
        for (b, e) in atoms {
            match merged.last_mut() {
                Some((lb, le)) if *lb == b => *le += e,
                _ => merged.push((b, e)),
            }
        }
        merged.retain(|(_, e)| !e.is_zero());
        factors.extend(merged);
        BigBound { factors }
    }

    fn split(&self) -> (Vec<(BigUint, Rat)>, Factors) {
        let mut ints = vec![];
        let mut atoms = vec![];
        for (b, e) in &self.factors {
            match b {
                Base::Int(n) => ints.push((n.clone(), e.clone())),
                other => atoms.push((other.clone(), e.clone())),
            }
        }
        (ints, atoms)
    }

    pub fn from_int(n: u64) -> Self {
        assert!(n > 0, "bounds are positive");
        BigBound::from_parts(vec![(BigUint::from(n), Rat::one())], vec![])
    }

    pub fn from_biguint(n: &BigUint) -> Self {
        assert!(!n.is_zero(), "bounds are positive");
        BigBound::from_parts(vec![(n.clone(), Rat::one())], vec![])
    }

    /// A positive rational as `num * den^-1`.
    pub fn from_rational(q: &Rat) -> Result<Self> {
        if !q.is_positive() {
            return Err(Error::Domain(format!("bound must be positive, got {q}")));
        }
        let num = q.numer().to_biguint().unwrap();
        let den = q.denom().to_biguint().unwrap();
        Ok(BigBound::from_parts(vec![(num, Rat::one()), (den, -Rat::one())], vec![]))
    }

    /// `n^e` for an integer base.
    pub fn int_pow(n: u64, e: Rat) -> Self {
        BigBound::from_int(n).pow(&e)
    }

    pub fn factors(&self) -> &[(Base, Rat)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn mul(&self, o: &BigBound) -> BigBound {
        let (mut ints, mut atoms) = self.split();
        let (i2, a2) = o.split();
        ints.extend(i2);
        atoms.extend(a2);
        BigBound::from_parts(ints, atoms)
    }

    pub fn pow(&self, e: &Rat) -> BigBound {
        if e.is_zero() {
            return BigBound::one();
        }
        let (ints, atoms) = self.split();
        BigBound::from_parts(ints.into_iter().map(|(b, x)| (b, x * e)).collect(), atoms.into_iter().map(|(b, x)| (b, x * e)).collect())
    }

    pub fn powi(&self, e: i64) -> BigBound {
        self.pow(&rat(e))
    }

    pub fn recip(&self) -> BigBound {
        self.powi(-1)
    }

    pub fn div(&self, o: &BigBound) -> BigBound {
        self.mul(&o.recip())
    }

    pub fn sqrt(&self) -> BigBound {
        self.pow(&Rat::new(BigInt::one(), BigInt::from(2)))
    }

    /// Exact rational value when every exponent is an integer.
    pub fn as_rational(&self) -> Option<Rat> {
        let mut v = Rat::one();
        for (b, e) in &self.factors {
            let Base::Int(n) = b else { return None };
            if !e.is_integer() {
                return None;
            }
            let k = e.to_integer().to_i32()?;
            let p = Rat::from_integer(BigInt::from(n.clone())).pow(k.abs());
            v = if k >= 0 { v * p } else { v / p };
        }
        Some(v)
    }

    /// Sum of positive bounds. Exact rational sums collapse to integer factors.
    pub fn sum(terms: &[BigBound]) -> BigBound {
        assert!(!terms.is_empty(), "empty sum");
        if let Some(vals) = terms.iter().map(|t| t.as_rational()).collect::<Option<Vec<_>>>() {
            let s = vals.into_iter().fold(Rat::zero(), |a, b| a + b);
            return BigBound::from_rational(&s).expect("sum of positive terms");
        }
        if terms.len() == 1 {
            return terms[0].clone();
        }
        let mut ts = terms.to_vec();
        ts.sort_by_key(|t| t.to_string());
        BigBound::from_parts(vec![], vec![(Base::Sum(ts), Rat::one())])
    }

    pub fn add(&self, o: &BigBound) -> BigBound {
        BigBound::sum(&[self.clone(), o.clone()])
    }

    /// Natural logarithm; requires the value to exceed 1.
    pub fn ln(&self) -> Result<BigBound> {
        if self.compare(&BigBound::one())? != Ordering::Greater {
            return Err(Error::Domain("logarithm of a bound <= 1 is not a positive bound".into()));
        }
        // ln(x^g) = g ln(x): pull out the content of the exponent vector so
        // that logarithms of powers of the same value share one atom
        let nums = self.factors.iter().map(|(_, e)| e.numer().clone());
        let num_gcd = nums.fold(BigInt::zero(), |a, b| a.gcd(&b));
        let den_lcm = self.factors.iter().fold(BigInt::one(), |a, (_, e)| a.lcm(e.denom()));
        let g = Rat::new(num_gcd, den_lcm);
        let inner = self.pow(&g.recip());
        let atom = BigBound::from_parts(vec![], vec![(Base::Ln(Box::new(inner)), Rat::one())]);
        Ok(BigBound::from_rational(&g)?.mul(&atom))
    }

    fn base_ln(b: &Base, prec: u32) -> Result<Interval> {
        match b {
            Base::Int(n) => Ok(cached_ln_int(n, prec)),
            Base::Sum(ts) => {
                let logs = ts.iter().map(|t| t.ln_interval(prec + 8)).collect::<Result<Vec<_>>>()?;
                Ok(log_sum_exp(&logs, prec))
            }
            Base::Ln(x) => {
                let l = x.ln_interval(prec + 8)?;
                if !l.lo.is_positive() {
                    return Err(Error::Undecided);
                }
                Ok(ln_interval(&l, prec))
            }
        }
    }

    /// Certified enclosure of the natural log, evaluated with `prec`
    /// fractional bits per factor.
    pub fn ln_interval(&self, prec: u32) -> Result<Interval> {
        let extra = 8 + 64 - (self.factors.len() as u64 + 1).leading_zeros();
        let mut acc = Interval::zero();
        for (b, e) in &self.factors {
            // scale precision by the exponent's size so the product stays tight
            let mag = e.abs().ceil().to_integer();
            let mag_bits = mag.bits() as u32;
            let l = BigBound::base_ln(b, prec + extra + mag_bits)?;
            acc = acc.add(&l.scale(e));
        }
        Ok(outward(acc, prec + 4))
    }

    /// Certified enclosure of `log10`.
    pub fn log10_interval(&self, prec: u32) -> Result<Interval> {
        let l = self.ln_interval(prec + 8)?;
        let l10 = ln_rational(&rat(10), prec + 8);
        // divide an interval by a positive interval
        let cands = [&l.lo / &l10.lo, &l.lo / &l10.hi, &l.hi / &l10.lo, &l.hi / &l10.hi];
        let lo = cands.iter().min().unwrap().clone();
        let hi = cands.iter().max().unwrap().clone();
        Ok(outward(Interval { lo, hi }, prec))
    }

    /// `log10` enclosure refined until its width is below `rel` times the
    /// magnitude of the value (or below `rel` itself near zero).
    pub fn log10_certified(&self, rel: f64) -> Result<Interval> {
        let rel = crate::rational::from_f64(rel);
        for &p in &PRECISIONS {
            let iv = self.log10_interval(p)?;
            let scale = iv.lo.abs().max(iv.hi.abs()).max(Rat::one());
            if iv.width() < &rel * scale {
                return Ok(iv);
            }
        }
        Err(Error::Undecided)
    }

    /// Three-way comparison, exact whenever it is decidable at all.
    pub fn compare(&self, o: &BigBound) -> Result<Ordering> {
        if self == o {
            return Ok(Ordering::Equal);
        }
        let ratio = self.div(o);
        if ratio.is_one() {
            return Ok(Ordering::Equal);
        }
        for &p in &PRECISIONS {
            let iv = match ratio.ln_interval(p) {
                Ok(iv) => iv,
                Err(Error::Undecided) => continue,
                Err(e) => return Err(e),
            };
            if iv.lo.is_positive() {
                return Ok(Ordering::Greater);
            }
            if iv.hi.is_negative() {
                return Ok(Ordering::Less);
            }
            // with no transcendental atoms and coprime bases the log is nonzero
        }
        Err(Error::Undecided)
    }

    pub fn le(&self, o: &BigBound) -> Result<bool> {
        Ok(self.compare(o)? != Ordering::Greater)
    }

    pub fn lt(&self, o: &BigBound) -> Result<bool> {
        Ok(self.compare(o)? == Ordering::Less)
    }

    /// Float approximation of the natural log.
    pub fn ln_f64(&self) -> f64 {
        self.ln_interval(64).map(|iv| iv.mid_f64()).unwrap_or(f64::NAN)
    }

    pub fn log10_f64(&self) -> f64 {
        self.ln_f64() / std::f64::consts::LN_10
    }

    /// Float approximation of the value (infinite when out of range).
    pub fn to_f64(&self) -> f64 {
        self.ln_f64().exp()
    }

    /// `[base, exp_num, exp_den]` triples; non-integer bases are rendered as
    /// expressions.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.factors
                .iter()
                .map(|(b, e)| {
                    let base = match b {
                        Base::Int(n) => n.to_string(),
                        other => other.to_string(),
                    };
                    json!([base, e.numer().to_string(), e.denom().to_string()])
                })
                .collect(),
        )
    }

    /// Parse the integer-base triples written by [`BigBound::to_json`].
    pub fn from_json(v: &Value) -> Result<BigBound> {
        let arr = v.as_array().ok_or_else(|| Error::Parse("bound must be a list of triples".into()))?;
        let mut ints = vec![];
        for t in arr {
            let t = t.as_array().filter(|t| t.len() == 3).ok_or_else(|| Error::Parse("expected [base, num, den]".into()))?;
            let s = |i: usize| t[i].as_str().map(str::to_string).unwrap_or_else(|| t[i].to_string());
            let b: BigUint = s(0).parse().map_err(|_| Error::Parse(format!("non-integer base `{}`", s(0))))?;
            let num: BigInt = s(1).parse().map_err(|_| Error::Parse("bad exponent".into()))?;
            let den: BigInt = s(2).parse().map_err(|_| Error::Parse("bad exponent".into()))?;
            if b.is_zero() || den.is_zero() {
                return Err(Error::Parse("zero base or denominator".into()));
            }
            ints.push((b, Rat::new(num, den)));
        }
        Ok(BigBound::from_parts(ints, vec![]))
    }
}

type Factors = Vec<(Base, Rat)>;

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Base::Int(n) => write!(f, "{n}"),
            Base::Sum(ts) => {
                let parts: Vec<String> = ts.iter().map(|t| t.to_string()).collect();
                write!(f, "({})", parts.join(" + "))
            }
            Base::Ln(x) => write!(f, "ln({x})"),
        }
    }
}

impl fmt::Display for BigBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.factors.iter().map(|(b, e)| if e.is_one() { b.to_string() } else { format!("{b}^({})", fmt_rat(e)) }).collect();
        write!(f, "{}", parts.join(" * "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use proptest::prelude::*;

    fn b(n: u64) -> BigBound {
        BigBound::from_int(n)
    }

    #[test]
    fn canonical_forms_make_equal_values_equal() {
        // 4^(1/2) = 2, 6 * 10 / 15 = 4
        assert_eq!(b(4).sqrt(), b(2));
        assert_eq!(b(6).mul(&b(10)).div(&b(15)), b(4));
        assert_eq!(b(8).pow(&ratio(2, 3)).compare(&b(4)).unwrap(), Ordering::Equal);
        assert!(b(1).is_one());
    }

    #[test]
    fn irrational_comparisons() {
        // sqrt(2) < 3/2 < sqrt(3)
        let three_halves = BigBound::from_rational(&ratio(3, 2)).unwrap();
        assert!(b(2).sqrt().lt(&three_halves).unwrap());
        assert!(three_halves.lt(&b(3).sqrt()).unwrap());
        // 2^10 = 1024 > 1000 = 10^3
        assert_eq!(b(2).powi(10).compare(&b(10).powi(3)).unwrap(), Ordering::Greater);
        // 3^(1/3) vs 2^(1/2): 9 > 8 so 3^(1/3) > 2^(1/2)
        assert_eq!(b(3).pow(&ratio(1, 3)).compare(&b(2).sqrt()).unwrap(), Ordering::Greater);
    }

    #[test]
    fn sums_and_logs() {
        assert_eq!(b(2).add(&b(3)), b(5));
        let s = b(1).add(&b(2).sqrt());
        let v = s.to_f64();
        assert!((v - (1.0 + 2f64.sqrt())).abs() < 1e-12);
        assert!(s.lt(&b(3)).unwrap() && b(2).lt(&s).unwrap());
        let l = b(8).ln().unwrap();
        assert!((l.to_f64() - 8f64.ln()).abs() < 1e-12);
        assert!(b(1).ln().is_err());
    }

    #[test]
    fn huge_values() {
        // 5^300 2^10000 4^9000 has log10 = 300 log10 5 + 28000 log10 2
        let v = b(5).powi(300).mul(&b(2).powi(10000)).mul(&b(4).powi(9000));
        let iv = v.log10_certified(1e-12).unwrap();
        let expect = 300.0 * 5f64.log10() + 28000.0 * 2f64.log10();
        assert!(crate::rational::to_f64(&iv.lo) <= expect + 1e-9 && expect - 1e-9 <= crate::rational::to_f64(&iv.hi));
    }

    #[test]
    fn json_round_trip() {
        let v = b(12).pow(&ratio(7, 3)).div(&b(5));
        assert_eq!(BigBound::from_json(&v.to_json()).unwrap(), v);
    }

    proptest! {
        #[test]
        fn integer_powers_agree_with_exact_arithmetic(a in 1u64..200, x in 0i64..12, c in 1u64..200, y in 0i64..12) {
            let l = b(a).powi(x);
            let r = b(c).powi(y);
            let exact = Rat::from_integer(BigInt::from(a).pow(x as u32)).cmp(&Rat::from_integer(BigInt::from(c).pow(y as u32)));
            prop_assert_eq!(l.compare(&r).unwrap(), exact);
        }

        #[test]
        fn comparison_is_antisymmetric_and_transitive(a in 2u64..50, b_ in 2u64..50, c in 2u64..50, p in 1i64..5, q in 1i64..5) {
            let x = b(a).pow(&ratio(p, q));
            let y = b(b_).pow(&ratio(q, p));
            let z = b(c).sqrt();
            let xy = x.compare(&y).unwrap();
            prop_assert_eq!(y.compare(&x).unwrap(), xy.reverse());
            let yz = y.compare(&z).unwrap();
            if xy != Ordering::Greater && yz != Ordering::Greater {
                prop_assert!(x.le(&z).unwrap());
            }
        }
    }
}
