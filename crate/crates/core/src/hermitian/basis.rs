//! Short generators of rank-one lattices, bounded bases of well-rounded
//! lattices, the coefficient bound for minimal vectors, and the finite set
//! `Phi` of small combinations of a basis.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{roots_of_unity, unit_orbit_key, FVector, HermitianLattice, UnimodularMatrix};
use crate::bounds::{basis_bound_general, basis_bound_simplified, coeff_bound_t, per_coordinate_count_bound, BigBound, FieldParams};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FractionalIdeal, NumberField};
use crate::ideal_lattice::{scaling_multiplier, IdealLattice};
use crate::rational::{fmt_rat, rat, Rat};

/// Backtracking nodes allowed per search radius in [`bounded_basis`].
const BASIS_SEARCH_NODES: u64 = 200_000;
/// Radius doublings tried in [`bounded_basis`].
const BASIS_SEARCH_ROUNDS: u32 = 12;

fn require_class_number_one(field: &NumberField) -> Result<()> {
    if field.is_class_number_one() {
        Ok(())
    } else {
        Err(Error::NotWhitelisted(field.name().to_string()))
    }
}

/// `d^d |D|^3`, the bound for both `index^2` and `(|f|_h^2)^d` below.
fn rank_one_rhs(field: &NumberField) -> Rat {
    let d = field.degree() as i32;
    let disc = Rat::from_integer(field.abs_discriminant());
    rat(d as i64).pow(d) * disc.pow(3)
}

/// A generator of a principal fractional ideal.
pub fn ideal_generator(field: &NumberField, ideal: &FractionalIdeal) -> Result<FieldElement> {
    let lat = IdealLattice::of_ideal(field, ideal.clone())?;
    let mut r2 = lat.shortest_vector()?.len2.hi;
    for _ in 0..32 {
        for (c, _) in lat.points_in_ball(&r2)? {
            let y = lat.element(&c);
            if !y.is_zero() && &field.norm_abs(&y) == ideal.norm() {
                return Ok(y);
            }
        }
        r2 *= rat(2);
    }
    Err(Error::SearchExhausted(format!("no generator found for {ideal}")))
}

/// Output of [`rank_one_generator`].
#[derive(Clone, Debug)]
pub struct RankOneGenerator {
    /// Generator `x` of `L` with `|L / O_F x| = 1`.
    pub generator: FieldElement,
    /// `alpha` with `x = alpha e`.
    pub alpha: FieldElement,
    /// `a` with `sup |sigma(a alpha)|` small.
    pub multiplier: FieldElement,
    /// `f = a x`.
    pub f: FieldElement,
    /// `|L / O_F f|`.
    pub index: Rat,
    /// `|f|_h^2`.
    pub norm2: Rat,
    /// `index <= C_1 C_3^d`.
    pub index_within: bool,
    /// `|f|_h <= C_3 C_1^(1/d)`.
    pub norm_within: bool,
}

/// For `L = b e0` inside the line `(F, h(u, v) = h0 u conj(v))` and a vector
/// `e` of `L` with `|e|_h <= 1`, an `f` in `L` of bounded index and length.
pub fn rank_one_generator(field: &NumberField, ideal: &FractionalIdeal, h0: &FieldElement, e: &FieldElement) -> Result<RankOneGenerator> {
    require_class_number_one(field)?;
    let line = HermitianLattice::new(field, vec![vec![h0.clone()]])?;
    if e.is_zero() || !ideal.contains(e) {
        return Err(Error::Domain("spanning vector must be a nonzero element of the module".into()));
    }
    let e_norm2 = line.qh_value(std::slice::from_ref(e))?;
    if e_norm2 > rat(1) {
        return Err(Error::Domain(format!("spanning vector has |e|^2 = {} > 1", fmt_rat(&e_norm2))));
    }
    let x = ideal_generator(field, ideal)?;
    let alpha = field.div(&x, e).expect("e is nonzero");
    let sm = scaling_multiplier(field, &field.embed_default(&alpha))?;
    let a = sm.element;
    let f = field.mul(&a, &x);
    let index = field.norm_abs(&f) / ideal.norm();
    let norm2 = line.qh_value(std::slice::from_ref(&f))?;
    let rhs = rank_one_rhs(field);
    // index <= |D|^(1/2) d^(d/2) |D|  <=>  index^2 <= d^d |D|^3
    let index_within = &index * &index <= rhs;
    // |f|^2 <= d |D|^(2/d) |D|^(1/d)  <=>  (|f|^2)^d <= d^d |D|^3
    let norm_within = norm2.pow(field.degree() as i32) <= rhs;
    Ok(RankOneGenerator { generator: x, alpha, multiplier: a, f, index, norm2, index_within, norm_within })
}

/// A basis of `L` with all `q_h` values small, and how it compares with
/// the existence bounds.
#[derive(Clone, Debug)]
pub struct BoundedBasis {
    pub basis: Vec<FVector>,
    /// `max_i q_h(e_i)`.
    pub max_norm: Rat,
    /// The general bound on `|e_i|_h`; absent for `F = Q`.
    pub certificate: Option<BigBound>,
    pub within_general: Option<bool>,
    /// The simplified bound, for `N >= 5`.
    pub simplified: Option<BigBound>,
    pub within_simplified: Option<bool>,
    /// `q_h` radius at which the basis was found.
    pub search_radius: Rat,
}

/// Backtracking over candidate vectors (sorted by length) for `N` of them
/// forming a basis; `F`-dependent prefixes are pruned.
struct BasisSearch<'a> {
    field: &'a NumberField,
    cands: &'a [FVector],
    n: usize,
    nodes: u64,
}

impl BasisSearch<'_> {
    fn run(&mut self, start: usize, chosen: &mut Vec<usize>, ech: &super::linalg::Echelon) -> Option<Vec<usize>> {
        if chosen.len() == self.n {
            let cols: Vec<FVector> = chosen.iter().map(|&i| self.cands[i].clone()).collect();
            return UnimodularMatrix::from_columns(self.field, &cols).is_ok().then(|| chosen.clone());
        }
        for i in start..self.cands.len() {
            if self.cands.len() - i < self.n - chosen.len() {
                break;
            }
            self.nodes += 1;
            if self.nodes > BASIS_SEARCH_NODES {
                return None;
            }
            let mut next = ech.clone();
            if !next.insert(self.field, &self.cands[i]) {
                continue;
            }
            chosen.push(i);
            if let Some(found) = self.run(i + 1, chosen, &next) {
                return Some(found);
            }
            chosen.pop();
        }
        None
    }
}

/// A basis of a well-rounded lattice of small `q_h` values, found by search
/// over short vectors and then checked against the general existence bound.
pub fn bounded_basis(lat: &HermitianLattice) -> Result<BoundedBasis> {
    let field = lat.field();
    require_class_number_one(field)?;
    let wr = lat.well_roundedness()?;
    if let Some(reason) = wr.reason {
        return Err(Error::NotWellRounded(reason));
    }
    let roots = roots_of_unity(field)?;
    let n = lat.rank();
    let mut r2 = rat(1);
    let mut found = None;
    for _ in 0..BASIS_SEARCH_ROUNDS {
        let mut seen = HashSet::new();
        let cands: Vec<FVector> = lat
            .vectors_within(&r2)?
            .into_iter()
            .filter(|(v, _)| v.iter().any(|c| !c.is_zero()))
            .filter(|(v, _)| seen.insert(unit_orbit_key(field, &roots, v)))
            .map(|(v, _)| v)
            .collect();
        let mut search = BasisSearch { field, cands: &cands, n, nodes: 0 };
        if let Some(idx) = search.run(0, &mut vec![], &super::linalg::Echelon::new()) {
            found = Some(idx.iter().map(|&i| cands[i].clone()).collect::<Vec<_>>());
            break;
        }
        r2 *= rat(2);
    }
    let basis = found.ok_or_else(|| Error::SearchExhausted(format!("no unimodular basis among vectors with q_h <= {}", fmt_rat(&r2))))?;
    let max_norm = basis.iter().map(|v| lat.qh_value(v)).collect::<Result<Vec<_>>>()?.into_iter().max().unwrap();
    let fp = FieldParams::of_field(field);
    let observed = BigBound::from_rational(&max_norm)?.sqrt();
    let (certificate, within_general) = if fp.d >= 2 {
        let g = basis_bound_general(&fp, n as u32)?;
        let ok = observed.le(&g)?;
        (Some(g), Some(ok))
    } else {
        (None, None)
    };
    let (simplified, within_simplified) = if fp.d >= 2 && n >= 5 {
        let s = basis_bound_simplified(&fp, n as u32)?;
        let ok = observed.le(&s)?;
        (Some(s), Some(ok))
    } else {
        (None, None)
    };
    Ok(BoundedBasis { basis, max_norm, certificate, within_general, simplified, within_simplified, search_radius: r2 })
}

/// Coordinates of the minimal vectors in a bounded basis, measured against
/// the coefficient bound `T`.
#[derive(Clone, Debug)]
pub struct CoefficientReport {
    /// Number of coordinates examined (`N` per minimal vector).
    pub checked: usize,
    /// `max sum_sigma |sigma(x_i)|^2` over all coordinates.
    pub max_sum: Rat,
    /// `T` with `B = sqrt(max_norm)` of the basis.
    pub t_observed: BigBound,
    /// `T` with `B` the certificate of the basis.
    pub t_certificate: Option<BigBound>,
    /// Coordinates exceeding `t_observed`.
    pub violations: usize,
    /// `log10(max_sum / t_observed)`, advisory.
    pub log10_ratio: f64,
}

pub fn coefficient_bound_check(lat: &HermitianLattice, bb: &BoundedBasis) -> Result<CoefficientReport> {
    let field = lat.field();
    let n = lat.rank();
    let gamma = UnimodularMatrix::from_columns(field, &bb.basis)?;
    let mv = lat.minimal_vectors()?;
    let mut sums = vec![];
    for x in &mv.vectors {
        for xi in gamma.apply_inverse(field, x) {
            sums.push(field.q0(&xi)?);
        }
    }
    let fp = FieldParams::of_field(field);
    let b_obs = BigBound::from_rational(&bb.max_norm)?.sqrt();
    let t_observed = coeff_bound_t(&fp, n as u32, &b_obs);
    let t_certificate = bb.certificate.as_ref().map(|c| coeff_bound_t(&fp, n as u32, c));
    let distinct: HashSet<Rat> = sums.iter().cloned().collect();
    let mut bad = HashSet::new();
    for s in distinct {
        if !s.is_zero() && !BigBound::from_rational(&s)?.le(&t_observed)? {
            bad.insert(s);
        }
    }
    let violations = sums.iter().filter(|s| bad.contains(*s)).count();
    let max_sum = sums.iter().max().cloned().unwrap_or_else(Rat::zero);
    let log10_ratio = crate::rational::to_f64(&max_sum).log10() - t_observed.log10_f64();
    Ok(CoefficientReport { checked: sums.len(), max_sum, t_observed, t_certificate, violations, log10_ratio })
}

/// The set `Phi = { sum x_i f_i : q0(x_i) <= T }` for a small `T`.
#[derive(Clone, Debug)]
pub struct PhiSet {
    /// The `x in O_F` with `q0(x) <= T`.
    pub coordinates: Vec<FieldElement>,
    /// `T^(d/2) 2^(d+3)`; absent for `T = 0`.
    pub count_bound: Option<BigBound>,
    /// Whether `T >= 1`, where the count bound is meant to apply.
    pub bound_applies: bool,
    pub within_bound: bool,
    /// `card(coordinates)^N`.
    pub total: BigUint,
    /// The elements of `Phi`, when `total` is at most the cap.
    pub vectors: Option<Vec<FVector>>,
}

pub fn phi_enumerate(field: &NumberField, basis: &[FVector], t: &Rat, cap: u64) -> Result<PhiSet> {
    let n = basis.len();
    if n == 0 || basis.iter().any(|v| v.len() != n) {
        return Err(Error::Dimension("basis must consist of N vectors of length N".into()));
    }
    if t.is_negative() {
        return Err(Error::Domain("T must be nonnegative".into()));
    }
    let ring = IdealLattice::ring_of_integers(field)?;
    let coordinates: Vec<FieldElement> =
        ring.points_in_ball(t)?.into_iter().filter(|(_, v)| v.hi <= *t).map(|(c, _)| ring.element(&c)).collect();
    if coordinates.len() as u64 > cap {
        return Err(Error::CapExceeded(format!("{} coordinate values exceed the cap {cap}", coordinates.len())));
    }
    let fp = FieldParams::of_field(field);
    let count_bound = if t.is_zero() { None } else { Some(per_coordinate_count_bound(&fp, &BigBound::from_rational(t)?)) };
    let count = BigBound::from_int(coordinates.len() as u64);
    let within_bound = match &count_bound {
        Some(b) => count.le(b)?,
        None => false,
    };
    let total = BigUint::from(coordinates.len()).pow(n as u32);
    let vectors = if total <= BigUint::from(cap) {
        let mut out: Vec<FVector> = vec![vec![field.zero(); n]];
        for f in basis {
            let mut next = Vec::with_capacity(out.len() * coordinates.len());
            for v in &out {
                for x in &coordinates {
                    let add: FVector = f.iter().map(|fi| field.mul(x, fi)).collect();
                    next.push(v.iter().zip(&add).map(|(a, b)| a.add(b)).collect());
                }
            }
            out = next;
        }
        Some(out)
    } else {
        None
    };
    debug_assert!(total.to_u64().is_none_or(|t| vectors.as_ref().is_none_or(|v| v.len() as u64 == t)));
    Ok(PhiSet { coordinates, count_bound, bound_applies: *t >= rat(1), within_bound, total, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::field::preset;
    use crate::hermitian::linalg::identity;
    use crate::rational::ratio;

    fn field(name: &str) -> NumberField {
        preset(name, Config::default()).unwrap()
    }

    #[test]
    fn rank_one_over_gaussian_integers() {
        let g = field("gaussian");
        let h0 = g.from_rational(&ratio(1, 2));
        let r = rank_one_generator(&g, &g.unit_ideal(), &h0, &g.one()).unwrap();
        assert!(r.index_within && r.norm_within);
        assert!(r.index <= rat(8));
        let q = field("rational");
        let r = rank_one_generator(&q, &q.unit_ideal(), &q.one(), &q.one()).unwrap();
        assert_eq!((r.index, r.norm2), (rat(1), rat(1)));
    }

    #[test]
    fn rank_one_over_a_fractional_ideal() {
        let g = field("gaussian");
        let one_plus_i = FieldElement::from_ints(&[1, 1]);
        let b = g.principal_ideal(&g.inverse(&one_plus_i).unwrap()).unwrap();
        // e = 1 lies in (1+i)^-1 Z[i]; h0 = 1/2 gives |e|^2 = 1
        let r = rank_one_generator(&g, &b, &g.from_rational(&ratio(1, 2)), &g.one()).unwrap();
        assert!(r.index_within && r.norm_within);
        assert!(r.index <= rat(16));
        assert!(b.contains(&r.f));
    }

    #[test]
    fn rank_one_rejects_other_fields() {
        let c5 = field("cyclotomic_5");
        let e = rank_one_generator(&c5, &c5.unit_ideal(), &c5.one(), &c5.one());
        assert!(matches!(e, Err(Error::NotWhitelisted(_))));
    }

    #[test]
    fn bounded_basis_examples() {
        let g = field("gaussian");
        let l = HermitianLattice::from_rational(&g, &[vec![ratio(1, 2)]]).unwrap();
        let bb = bounded_basis(&l).unwrap();
        assert_eq!(bb.max_norm, rat(1));
        assert_eq!(bb.within_general, Some(true));
        let q = field("rational");
        let a2 = HermitianLattice::from_rational(&q, &[vec![rat(1), ratio(1, 2)], vec![ratio(1, 2), rat(1)]]).unwrap();
        let bb = bounded_basis(&a2).unwrap();
        assert_eq!(bb.max_norm, rat(1));
        assert!(bb.certificate.is_none());
        let e = field("eisenstein");
        let l = HermitianLattice::from_rational(&e, &[vec![ratio(1, 2), rat(0)], vec![rat(0), ratio(1, 2)]]).unwrap();
        let bb = bounded_basis(&l).unwrap();
        assert_eq!(bb.within_general, Some(true));
        let rep = coefficient_bound_check(&l, &bb).unwrap();
        assert_eq!(rep.violations, 0);
        assert_eq!(rep.checked, 12 * 2);
    }

    #[test]
    fn bounded_basis_needs_well_rounded_input() {
        let g = field("gaussian");
        let l = HermitianLattice::from_rational(&g, &[vec![rat(1)]]).unwrap();
        assert!(matches!(bounded_basis(&l), Err(Error::NotWellRounded(_))));
    }

    #[test]
    fn coefficient_examples() {
        let g = field("gaussian");
        let l = HermitianLattice::from_rational(&g, &[vec![ratio(1, 2)]]).unwrap();
        let rep = coefficient_bound_check(&l, &bounded_basis(&l).unwrap()).unwrap();
        assert_eq!(rep.max_sum, rat(2));
        assert_eq!(rep.violations, 0);
        let q = field("rational");
        let a2 = HermitianLattice::from_rational(&q, &[vec![rat(1), ratio(1, 2)], vec![ratio(1, 2), rat(1)]]).unwrap();
        let rep = coefficient_bound_check(&a2, &bounded_basis(&a2).unwrap()).unwrap();
        assert_eq!(rep.max_sum, rat(1));
    }

    #[test]
    fn phi_examples() {
        let q = field("rational");
        let p = phi_enumerate(&q, &identity(&q, 1), &rat(1), 1000).unwrap();
        assert_eq!(p.coordinates.len(), 3);
        assert!(p.within_bound && p.bound_applies);
        let p = phi_enumerate(&q, &identity(&q, 1), &ratio(1, 2), 1000).unwrap();
        assert_eq!(p.coordinates.len(), 1);
        let g = field("gaussian");
        let p = phi_enumerate(&g, &identity(&g, 1), &rat(2), 1000).unwrap();
        assert_eq!(p.coordinates.len(), 5);
        assert!(p.within_bound);
        let p = phi_enumerate(&g, &identity(&g, 2), &rat(2), 1000).unwrap();
        assert_eq!(p.vectors.unwrap().len(), 25);
    }
}
