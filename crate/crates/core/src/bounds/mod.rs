//! Explicit constants of the geometry-of-numbers estimates and their
//! assembly into torsion bounds for `K_n` of a ring of integers.
//!
//! Every constant is a [`BigBound`]; inequalities between them are decided
//! exactly (or on certified log intervals), never in floating point.

pub mod bigbound;
pub mod logarithm;
pub mod verify;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

pub use bigbound::{Base, BigBound};

use crate::error::{Error, Result};
use crate::field::NumberField;
use crate::rational::{rat, ratio, Rat};

/// Degree, signature and absolute discriminant of a number field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldParams {
    pub d: u32,
    pub r1: u32,
    pub r2: u32,
    pub abs_disc: BigUint,
}

impl FieldParams {
    pub fn new(d: u32, r1: u32, r2: u32, abs_disc: u64) -> Result<Self> {
        FieldParams::with_disc(d, r1, r2, BigUint::from(abs_disc))
    }

    pub fn with_disc(d: u32, r1: u32, r2: u32, abs_disc: BigUint) -> Result<Self> {
        if d == 0 {
            return Err(Error::Domain("degree must be at least 1".into()));
        }
        if r1 + 2 * r2 != d {
            return Err(Error::Domain(format!("signature ({r1}, {r2}) does not match degree {d}")));
        }
        if abs_disc.is_zero() {
            return Err(Error::Domain("discriminant must be nonzero".into()));
        }
        Ok(FieldParams { d, r1, r2, abs_disc })
    }

    pub fn of_field(f: &NumberField) -> Self {
        let (r1, r2) = f.signature();
        FieldParams {
            d: f.degree() as u32,
            r1: r1 as u32,
            r2: r2 as u32,
            abs_disc: f.abs_discriminant().to_biguint().expect("absolute value"),
        }
    }

    /// A field with `|D| = 1` has `|D|^x = 1`; keep it as the empty product.
    fn disc_pow(&self, e: Rat) -> BigBound {
        BigBound::from_biguint(&self.abs_disc).pow(&e)
    }

    fn require_nontrivial(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::Domain("constant needs a field of degree at least 2".into()));
        }
        Ok(())
    }
}

/// `n`, the stable rank `N = 2n + 1`, and the small-torsion cutoff
/// `l = max(d + 1, 2n + 2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KParams {
    pub n: u32,
    #[serde(rename = "N")]
    pub big_n: u32,
    pub ell: u32,
}

impl KParams {
    pub fn new(n: u32, d: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("n must be at least 2, got {n}")));
        }
        Ok(KParams { n, big_n: 2 * n + 1, ell: (d + 1).max(2 * n + 2) })
    }

    /// `t = floor(log2 N) + 1`.
    pub fn t(&self) -> u32 {
        floor_log2(self.big_n) + 1
    }
}

pub fn floor_log2(n: u32) -> u32 {
    31 - n.leading_zeros()
}

/// `C_1 = |D|^(1/2)`.
pub fn c1(fp: &FieldParams) -> BigBound {
    fp.disc_pow(ratio(1, 2))
}

/// `C_2 = (d/2) |D|^(1/d)`.
pub fn c2(fp: &FieldParams) -> BigBound {
    BigBound::from_rational(&ratio(fp.d as i64, 2)).unwrap().mul(&fp.disc_pow(ratio(1, fp.d as i64)))
}

/// `C_3 = sqrt(d) |D|^(1/d)`.
pub fn c3(fp: &FieldParams) -> BigBound {
    BigBound::from_int(fp.d as u64).sqrt().mul(&fp.disc_pow(ratio(1, fp.d as i64)))
}

/// Whether `C_2 >= 1`, which the bounded-basis estimates rely on.
pub fn c2_at_least_one(fp: &FieldParams) -> Result<bool> {
    c2(fp).compare(&BigBound::one()).map(|o| o != std::cmp::Ordering::Less)
}

/// Dimension of the space of Hermitian forms: `r1 N(N+1)/2 + r2 N^2`, and
/// the upper bound `d N(N+1)/2`.
pub fn dim_x(fp: &FieldParams, big_n: u64) -> (u64, u64) {
    let tri = big_n * (big_n + 1) / 2;
    (fp.r1 as u64 * tri + fp.r2 as u64 * big_n * big_n, fp.d as u64 * tri)
}

/// `e(d, n) = d(2n^2 + 3n + 1) - n - 1`.
pub fn e_dn(d: u64, n: u64) -> u64 {
    d * (2 * n * n + 3 * n + 1) - n - 1
}

/// Bound on the number of `k`-cells: `card(Phi)^(d N(N+1)/2 - k)`.
pub fn alpha_k(card_phi: &BigBound, d: u64, big_n: u64, k: u64) -> Result<BigBound> {
    let top = d * big_n * (big_n + 1) / 2;
    if k > top {
        return Err(Error::Domain(format!("cell dimension {k} exceeds {top}")));
    }
    Ok(card_phi.powi((top - k) as i64))
}

/// Bound on codimension-one faces of a cell: `card(Phi)^(N+1)`.
pub fn beta(card_phi: &BigBound, big_n: u64) -> BigBound {
    card_phi.powi(big_n as i64 + 1)
}

/// The sharper cell count `binomial(card(Phi), N + j)` for an explicit
/// integer `card(Phi)`.
pub fn binomial_cell_count(card_phi: &BigUint, big_n: u64, j: u64) -> BigUint {
    let k = big_n + j;
    let mut acc = BigUint::one();
    for i in 0..k {
        let i = BigUint::from(i);
        if &i >= card_phi {
            return BigUint::zero();
        }
        acc = acc * (card_phi - &i) / (i + BigUint::one());
    }
    acc
}

/// `k = C_1 C_3^d`, the index bound of the rank-one generators.
pub fn index_constant(fp: &FieldParams) -> BigBound {
    c1(fp).mul(&c3(fp).powi(fp.d as i64))
}

/// General basis bound `N C_2 (1 + C_2)^(floor(log2 N) + 2) (C_1 C_3^d)^((d+1)(4N-1))`.
pub fn basis_bound_general(fp: &FieldParams, big_n: u32) -> Result<BigBound> {
    fp.require_nontrivial()?;
    if big_n == 0 {
        return Err(Error::Domain("rank must be at least 1".into()));
    }
    let c2v = c2(fp);
    let lambda = BigBound::from_int(big_n as u64).mul(&c2v);
    let growth = BigBound::one().add(&c2v).powi(floor_log2(big_n) as i64 + 2);
    let k_exp = (fp.d as i64 + 1) * (4 * big_n as i64 - 1);
    Ok(lambda.mul(&growth).mul(&index_constant(fp).powi(k_exp)))
}

/// Intermediate form `4 N^2 C_2^N (C_1 C_3^d)^((d+1)(4N-1))`, valid for `N >= 5`.
pub fn basis_bound_intermediate(fp: &FieldParams, big_n: u32) -> Result<BigBound> {
    fp.require_nontrivial()?;
    let k_exp = (fp.d as i64 + 1) * (4 * big_n as i64 - 1);
    Ok(BigBound::from_int(4 * (big_n as u64).pow(2)).mul(&c2(fp).powi(big_n as i64)).mul(&index_constant(fp).powi(k_exp)))
}

/// Simplified `B = 4N^2 / 2^N d^(5 N d^2) |D|^(6 N (d+1))`, stated for `N >= 5`.
pub fn basis_bound_simplified(fp: &FieldParams, big_n: u32) -> Result<BigBound> {
    fp.require_nontrivial()?;
    if big_n < 5 {
        return Err(Error::Domain("simplified basis bound needs N >= 5".into()));
    }
    let (n, d) = (big_n as i64, fp.d as i64);
    let lead = BigBound::from_rational(&(rat(4 * n * n) / Rat::from_integer(num_bigint::BigInt::from(2).pow(big_n))))?;
    Ok(lead.mul(&BigBound::from_int(d as u64).powi(5 * n * d * d)).mul(&fp.disc_pow(rat(6 * n * (d + 1)))))
}

/// Both forms of the basis bound; the simplified one only when `N >= 5`.
#[derive(Clone, Debug)]
pub struct BasisBound {
    pub general: BigBound,
    pub simplified: Option<BigBound>,
}

pub fn basis_bound(fp: &FieldParams, big_n: u32) -> Result<BasisBound> {
    let general = basis_bound_general(fp, big_n)?;
    let simplified = if big_n >= 5 { Some(basis_bound_simplified(fp, big_n)?) } else { None };
    Ok(BasisBound { general, simplified })
}

/// The basis bound used downstream: simplified when defined, else general.
pub fn basis_bound_used(fp: &FieldParams, big_n: u32) -> Result<BigBound> {
    let b = basis_bound(fp, big_n)?;
    Ok(b.simplified.unwrap_or(b.general))
}

/// `T = N^(N d) d^((3/2) N d + 1) B^(2(N d - 1)) |D|^(2N)`.
pub fn coeff_bound_t(fp: &FieldParams, big_n: u32, b: &BigBound) -> BigBound {
    let nd = big_n as i64 * fp.d as i64;
    BigBound::from_int(big_n as u64)
        .powi(nd)
        .mul(&BigBound::from_int(fp.d as u64).pow(&(ratio(3, 2) * rat(nd) + rat(1))))
        .mul(&b.powi(2 * (nd - 1)))
        .mul(&fp.disc_pow(rat(2 * big_n as i64)))
}

/// Hermite-type constant bound `gamma <= N^d |D|`.
pub fn icaza_gamma(fp: &FieldParams, big_n: u32) -> BigBound {
    BigBound::from_int(big_n as u64).powi(fp.d as i64).mul(&fp.disc_pow(rat(1)))
}

/// Number of `x in O_F` with `sum |sigma(x)|^2 <= T` is at most `T^(d/2) 2^(d+3)`.
pub fn per_coordinate_count_bound(fp: &FieldParams, t: &BigBound) -> BigBound {
    t.pow(&ratio(fp.d as i64, 2)).mul(&BigBound::from_int(2).powi(fp.d as i64 + 3))
}

/// Bounds on `card(Phi)`: expanded `T^(N d / 2) 2^(N(d+3))` and, for
/// `N >= 5`, the closed form `N^(3 N^2 d^2) d^(5 N^3 d^4) |D|^(9 N^3 d^3)`.
#[derive(Clone, Debug)]
pub struct PhiBound {
    pub basis: BigBound,
    pub t: BigBound,
    pub expanded: BigBound,
    pub closed: Option<BigBound>,
}

pub fn phi_closed(fp: &FieldParams, big_n: u32) -> Result<BigBound> {
    fp.require_nontrivial()?;
    if big_n < 5 {
        return Err(Error::Domain("closed form of card(Phi) needs N >= 5".into()));
    }
    let (n, d) = (big_n as i64, fp.d as i64);
    Ok(BigBound::from_int(big_n as u64)
        .powi(3 * n * n * d * d)
        .mul(&BigBound::from_int(d as u64).powi(5 * n.pow(3) * d.pow(4)))
        .mul(&fp.disc_pow(rat(9 * n.pow(3) * d.pow(3)))))
}

pub fn phi_card_bound(fp: &FieldParams, big_n: u32) -> Result<PhiBound> {
    fp.require_nontrivial()?;
    let basis = basis_bound_used(fp, big_n)?;
    let t = coeff_bound_t(fp, big_n, &basis);
    let nd = big_n as i64 * fp.d as i64;
    let expanded = t.pow(&ratio(nd, 2)).mul(&BigBound::from_int(2).powi(big_n as i64 * (fp.d as i64 + 3)));
    let closed = if big_n >= 5 { Some(phi_closed(fp, big_n)?) } else { None };
    Ok(PhiBound { basis, t, expanded, closed })
}

/// `(2n+1)^(71 n^4 d^3) d^(293 n^5 d^5) |D|^(528 n^5 d^4)`.
pub fn closed_form_bound(fp: &FieldParams, kp: &KParams) -> BigBound {
    let (n, d) = (kp.n as i64, fp.d as i64);
    BigBound::from_int(2 * kp.n as u64 + 1)
        .powi(71 * n.pow(4) * d.pow(3))
        .mul(&BigBound::from_int(d as u64).powi(293 * n.pow(5) * d.pow(5)))
        .mul(&fp.disc_pow(rat(528 * n.pow(5) * d.pow(4))))
}

/// `(n+1) ln(card Phi) card(Phi)^e(d,n)`, the torsion bound in terms of `card(Phi)`.
pub fn log_torsion_bound(card_phi: &BigBound, d: u64, n: u64) -> Result<BigBound> {
    Ok(BigBound::from_int(n + 1).mul(&card_phi.ln()?).mul(&card_phi.powi(e_dn(d, n) as i64)))
}

/// Bounds on `log card_l K_n(O_F)_tors` from the explicit pipeline and the
/// closed form, together with the intermediate quantities.
#[derive(Clone, Debug)]
pub struct KBound {
    pub kp: KParams,
    pub e: u64,
    pub phi: PhiBound,
    /// `(n+1) ln(card Phi) card(Phi)^e` with the expanded `card(Phi)` bound.
    pub assembled: BigBound,
    /// `card(Phi)^(e + n + 1)` with the closed `card(Phi)` bound.
    pub relaxed: BigBound,
    pub closed_form: BigBound,
}

pub fn k_bound(fp: &FieldParams, kp: &KParams) -> Result<KBound> {
    fp.require_nontrivial()?;
    let n = kp.n as u64;
    let phi = phi_card_bound(fp, kp.big_n)?;
    let e = e_dn(fp.d as u64, n);
    let assembled = log_torsion_bound(&phi.expanded, fp.d as u64, n)?;
    let closed = phi.closed.clone().expect("N = 2n + 1 >= 5");
    let relaxed = closed.powi((e + n + 1) as i64);
    let closed_form = closed_form_bound(fp, kp);
    Ok(KBound { kp: *kp, e, phi, assembled, relaxed, closed_form })
}

/// `log(beta^(alpha_(n+1) / 2))` for the given `card(Phi)`, which must
/// equal [`log_torsion_bound`] exactly.
pub fn log_torsion_via_cells(card_phi: &BigBound, d: u64, n: u64) -> Result<BigBound> {
    let big_n = 2 * n + 1;
    let a = alpha_k(card_phi, d, big_n, n + 1)?;
    let b = beta(card_phi, big_n);
    // ln(beta^(a/2)) = (a/2) ln(beta)
    Ok(a.mul(&BigBound::from_rational(&ratio(1, 2))?).mul(&b.ln()?))
}

/// Torsion bound of a chain complex in degree `k`:
/// `beta^(min(alpha_(k+1), alpha_k) / 2)` for integer face counts.
pub fn complex_torsion_bound(alphas: &[u64], beta_val: u64, k: usize) -> Result<BigBound> {
    if beta_val == 0 {
        return Err(Error::Domain("beta must be at least 1".into()));
    }
    let a_k = *alphas.get(k).ok_or_else(|| Error::Domain(format!("no face count for degree {k}")))?;
    let a_k1 = alphas.get(k + 1).copied().unwrap_or(0);
    Ok(BigBound::from_int(beta_val).pow(&ratio(a_k.min(a_k1) as i64, 2)))
}

/// `e(d, n) + n + 1 <= (15/4) n^2 d`, returning the slack.
pub fn exponent_slack(d: u64, n: u64) -> Rat {
    ratio(15, 4) * rat((n * n * d) as i64) - rat((e_dn(d, n) + n + 1) as i64)
}

/// `2n + 1 <= (5/2) n`, returning the slack.
pub fn rank_slack(n: u64) -> Rat {
    ratio(5, 2) * rat(n as i64) - rat(2 * n as i64 + 1)
}

/// Nearest `f64` to a rational, saturating.
pub fn approx(q: &Rat) -> f64 {
    crate::rational::to_f64(q)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::cmp::Ordering;

    fn gauss() -> FieldParams {
        FieldParams::new(2, 0, 1, 4).unwrap()
    }

    #[test]
    fn constants_for_gaussian_field() {
        let fp = gauss();
        assert_eq!(c1(&fp), BigBound::from_int(2));
        assert_eq!(c2(&fp), BigBound::from_int(2));
        assert_eq!(c3(&fp), BigBound::from_int(8).sqrt());
    }

    #[test]
    fn constants_for_rationals() {
        let fp = FieldParams::new(1, 1, 0, 1).unwrap();
        assert!(c1(&fp).is_one());
        assert_eq!(c2(&fp), BigBound::from_rational(&ratio(1, 2)).unwrap());
        assert!(c3(&fp).is_one());
        assert!(!c2_at_least_one(&fp).unwrap());
        assert!(basis_bound(&fp, 3).is_err());
        // hypothetical |D| = 1 with d = 2 gives C_2 = 1
        assert!(c2(&FieldParams::new(2, 2, 0, 1).unwrap()).is_one());
    }

    #[test]
    fn dimensions_and_exponents() {
        assert_eq!(dim_x(&gauss(), 3), (9, 12));
        assert_eq!(dim_x(&FieldParams::new(2, 2, 0, 8).unwrap(), 3), (12, 12));
        assert_eq!(e_dn(2, 2), 27);
        assert_eq!(e_dn(1, 1), 4);
        let ten = BigBound::from_int(10);
        assert_eq!(alpha_k(&ten, 2, 3, 0).unwrap(), ten.powi(12));
        assert!(alpha_k(&ten, 2, 3, 12).unwrap().is_one());
        assert!(alpha_k(&ten, 2, 3, 13).is_err());
        assert_eq!(beta(&ten, 3), ten.powi(4));
        assert_eq!(binomial_cell_count(&BigUint::from(10u32), 3, 1), BigUint::from(210u32));
    }

    #[test]
    fn simplified_basis_bound_at_gaussian_n5() {
        let b = basis_bound_simplified(&gauss(), 5).unwrap();
        let expect =
            BigBound::from_rational(&ratio(25, 8)).unwrap().mul(&BigBound::from_int(2).powi(100)).mul(&BigBound::from_int(4).powi(90));
        assert_eq!(b, expect);
        assert!(basis_bound(&gauss(), 4).unwrap().simplified.is_none());
    }

    #[test]
    fn t_and_gamma() {
        let t = coeff_bound_t(&gauss(), 1, &BigBound::one());
        assert_eq!(t, BigBound::from_int(256));
        assert_eq!(icaza_gamma(&gauss(), 5), BigBound::from_int(100));
    }

    #[test]
    fn phi_closed_anchor() {
        let closed = phi_closed(&gauss(), 5).unwrap();
        let expect = BigBound::from_int(5).powi(300).mul(&BigBound::from_int(2).powi(10000)).mul(&BigBound::from_int(4).powi(9000));
        assert_eq!(closed.compare(&expect).unwrap(), Ordering::Equal);
        let lg = closed.log10_f64();
        let formula = 300.0 * 5f64.log10() + 10000.0 * 2f64.log10() + 9000.0 * 4f64.log10();
        assert!((lg - formula).abs() < 1e-6, "{lg}");
    }

    #[test]
    fn expanded_phi_below_closed_at_d2_n5_disc3() {
        let fp = FieldParams::new(2, 0, 1, 3).unwrap();
        let p = phi_card_bound(&fp, 5).unwrap();
        assert!(p.expanded.le(p.closed.as_ref().unwrap()).unwrap());
    }

    #[test]
    fn k_params() {
        let kp = KParams::new(2, 7).unwrap();
        assert_eq!((kp.big_n, kp.ell), (5, 8));
        assert_eq!(KParams::new(2, 2).unwrap().ell, 6);
        assert!(KParams::new(1, 2).is_err());
        assert_eq!(exponent_slack(2, 2), rat(0));
        assert_eq!(rank_slack(2), rat(0));
    }

    #[test]
    fn cell_route_matches_direct_route() {
        let c = BigBound::from_int(1000);
        let a = log_torsion_bound(&c, 2, 2).unwrap();
        let b = log_torsion_via_cells(&c, 2, 2).unwrap();
        assert_eq!(a.compare(&b).unwrap(), Ordering::Equal);
    }

    #[test]
    fn chain_bounds() {
        // min(4, 6) / 2 = 2
        assert_eq!(complex_torsion_bound(&[4, 6], 3, 0).unwrap(), BigBound::from_int(9));
        assert!(complex_torsion_bound(&[4, 6], 1, 0).unwrap().is_one());
        assert!(complex_torsion_bound(&[4, 0], 5, 0).unwrap().is_one());
    }
}
