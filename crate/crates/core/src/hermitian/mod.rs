//! Hermitian lattices `(O_F^N, h)` over a conjugation-closed field, their
//! trace metric `q_h = Tr h(x, x)`, minimal vectors, well-roundedness and
//! the action of `GL_N(O_F)`.
//!
//! A vector of `L = O_F^N` is a list of `N` integral field elements. As a
//! Z-lattice it has the basis `a_i e_j` (with `a_i` the integral basis),
//! flattened to index `j d + i`.

pub mod basis;
pub mod linalg;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::enumerate::{points_within, shortest};
use crate::error::{Error, Result};
use crate::field::{FieldElement, NumberField};
use crate::ideal_lattice::GramMatrix;
use crate::rational::{rat, Rat};

pub use basis::{
    bounded_basis, coefficient_bound_check, phi_enumerate, rank_one_generator, BoundedBasis, CoefficientReport, PhiSet, RankOneGenerator,
};
pub use linalg::FMatrix;

/// A vector of `O_F^N` (or `F^N`).
pub type FVector = Vec<FieldElement>;

#[derive(Clone, Debug)]
pub struct HermitianLattice {
    field: NumberField,
    h: FMatrix,
    q_gram: GramMatrix,
}

/// `m(L, h)` and `M(L, h)`, closed under negation, sorted by flat
/// coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimalVectorSet {
    pub minimum: Rat,
    pub vectors: Vec<FVector>,
}

impl MinimalVectorSet {
    pub fn count(&self) -> usize {
        self.vectors.len()
    }

    /// Number of vectors up to sign.
    pub fn count_mod_sign(&self) -> usize {
        self.vectors.len() / 2
    }
}

/// Verdict of [`HermitianLattice::well_roundedness`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WellRounded {
    pub well_rounded: bool,
    /// Indices into the minimal vectors of an `F`-independent subset of
    /// maximal size.
    pub witness: Vec<usize>,
    pub reason: Option<String>,
}

impl HermitianLattice {
    /// `h` must be Hermitian with entries in `F` and positive definite at
    /// every embedding.
    pub fn new(field: &NumberField, h: FMatrix) -> Result<Self> {
        if !field.is_conjugation_closed() {
            return Err(Error::ConjugationUnavailable);
        }
        let n = h.len();
        let d = field.degree();
        if n == 0 || h.iter().any(|r| r.len() != n || r.iter().any(|x| x.0.len() != d)) {
            return Err(Error::Dimension(format!("Hermitian form must be a square matrix of degree-{d} elements")));
        }
        for i in 0..n {
            for j in i..n {
                if h[j][i] != field.conjugate(&h[i][j])? {
                    return Err(Error::Domain(format!("form is not Hermitian at ({i}, {j})")));
                }
            }
        }
        let conj_basis: Vec<FieldElement> = (0..d).map(|k| field.conjugate(&field.basis_element(k))).collect::<Result<_>>()?;
        let dim = n * d;
        let mut g = vec![vec![Rat::zero(); dim]; dim];
        for j in 0..n {
            for l in 0..n {
                for i in 0..d {
                    let ah = field.mul(&field.basis_element(i), &h[j][l]);
                    for (k, ck) in conj_basis.iter().enumerate() {
                        g[j * d + i][l * d + k] = field.trace(&field.mul(&ah, ck));
                    }
                }
            }
        }
        let q_gram = GramMatrix::new(g)?;
        Ok(HermitianLattice { field: field.clone(), h, q_gram })
    }

    /// Build from rational entries (a form over `Q` extended to `F`).
    pub fn from_rational(field: &NumberField, h: &[Vec<Rat>]) -> Result<Self> {
        HermitianLattice::new(field, h.iter().map(|r| r.iter().map(|x| field.from_rational(x)).collect()).collect())
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn rank(&self) -> usize {
        self.h.len()
    }

    pub fn form(&self) -> &FMatrix {
        &self.h
    }

    pub fn q_gram(&self) -> &GramMatrix {
        &self.q_gram
    }

    fn budget(&self) -> u64 {
        self.field.config().node_budget
    }

    /// Flat Z-coordinates of an integral vector.
    pub fn flatten(&self, x: &[FieldElement]) -> Result<Vec<BigInt>> {
        if x.len() != self.rank() || x.iter().any(|c| !c.is_integral()) {
            return Err(Error::Dimension(format!("expected {} integral coordinates", self.rank())));
        }
        Ok(x.iter().flat_map(|c| c.0.iter().map(|q| q.to_integer())).collect())
    }

    pub fn unflatten(&self, c: &[BigInt]) -> FVector {
        c.chunks(self.field.degree()).map(|ch| FieldElement(ch.iter().map(|v| Rat::from_integer(v.clone())).collect())).collect()
    }

    /// `h(x, y) = sum_(j,l) x_j h_jl conj(y_l)`.
    pub fn h_value(&self, x: &[FieldElement], y: &[FieldElement]) -> Result<FieldElement> {
        let f = &self.field;
        let mut acc = f.zero();
        for (j, xj) in x.iter().enumerate() {
            for (l, yl) in y.iter().enumerate() {
                acc = acc.add(&f.mul(&f.mul(xj, &self.h[j][l]), &f.conjugate(yl)?));
            }
        }
        Ok(acc)
    }

    /// `q_h(x) = Tr h(x, x)`, for any `x` in `F^N`.
    pub fn qh_value(&self, x: &[FieldElement]) -> Result<Rat> {
        if x.len() != self.rank() {
            return Err(Error::Dimension(format!("expected {} coordinates", self.rank())));
        }
        Ok(self.field.trace(&self.h_value(x, x)?))
    }

    pub fn minimal_vectors(&self) -> Result<MinimalVectorSet> {
        let (minimum, hits) = shortest(self.q_gram.entries(), self.budget())?;
        Ok(MinimalVectorSet { minimum, vectors: hits.iter().map(|c| self.unflatten(c)).collect() })
    }

    /// All lattice vectors with `q_h <= r2`, zero included, sorted by value.
    pub fn vectors_within(&self, r2: &Rat) -> Result<Vec<(FVector, Rat)>> {
        let pts = points_within(self.q_gram.entries(), None, r2, self.budget())?;
        Ok(pts.into_iter().map(|p| (self.unflatten(&p.coords), p.q)).collect())
    }

    /// Minimum exactly 1 and minimal vectors spanning `F^N`.
    pub fn well_roundedness(&self) -> Result<WellRounded> {
        let mv = self.minimal_vectors()?;
        let mut ech = linalg::Echelon::new();
        let witness: Vec<usize> = mv.vectors.iter().enumerate().filter(|(_, v)| ech.insert(&self.field, v)).map(|(i, _)| i).collect();
        let reason = if mv.minimum != rat(1) {
            Some(format!("minimum is {}, not 1", crate::rational::fmt_rat(&mv.minimum)))
        } else if witness.len() < self.rank() {
            Some(format!("minimal vectors span rank {} < {}", witness.len(), self.rank()))
        } else {
            None
        };
        Ok(WellRounded { well_rounded: reason.is_none(), witness, reason })
    }

    pub fn is_well_rounded(&self) -> Result<bool> {
        Ok(self.well_roundedness()?.well_rounded)
    }

    /// `h / m(L, h)`, whose minimum is 1.
    pub fn normalize_minimum(&self) -> Result<HermitianLattice> {
        let m = self.minimal_vectors()?.minimum;
        self.scaled(&m.recip())
    }

    pub fn scaled(&self, s: &Rat) -> Result<HermitianLattice> {
        if !s.is_positive() {
            return Err(Error::Domain("scale factor must be positive".into()));
        }
        HermitianLattice::new(&self.field, self.h.iter().map(|r| r.iter().map(|x| x.scale(s)).collect()).collect())
    }

    /// `(gamma . h)(x, y) = h(gamma^-1 x, gamma^-1 y)`, i.e. the form with
    /// matrix `G^T H conj(G)` for `G = gamma^-1`.
    pub fn gamma_action(&self, gamma: &UnimodularMatrix) -> Result<HermitianLattice> {
        if gamma.dim() != self.rank() {
            return Err(Error::Dimension("matrix size differs from the lattice rank".into()));
        }
        let f = &self.field;
        let g = &gamma.inverse;
        let left = linalg::mat_mul(f, &linalg::transpose(g), &self.h);
        let h2 = linalg::mat_mul(f, &left, &linalg::conjugate(f, g)?);
        HermitianLattice::new(f, h2)
    }
}

/// A matrix in `GL_N(O_F)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnimodularMatrix {
    entries: FMatrix,
    inverse: FMatrix,
}

impl UnimodularMatrix {
    /// Accepts an integral square matrix whose determinant is a unit.
    pub fn new(field: &NumberField, entries: FMatrix) -> Result<Self> {
        let n = entries.len();
        if n == 0 || entries.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("unimodular matrix must be square".into()));
        }
        if entries.iter().flatten().any(|x| !x.is_integral()) {
            return Err(Error::NonUnimodular);
        }
        let det = linalg::determinant(field, &entries);
        if det.is_zero() || !field.norm_abs(&det).is_integer() || field.norm_abs(&det) != rat(1) {
            return Err(Error::NonUnimodular);
        }
        let inverse = linalg::inverse(field, &entries).ok_or(Error::NonUnimodular)?;
        if inverse.iter().flatten().any(|x| !x.is_integral()) {
            return Err(Error::NonUnimodular);
        }
        Ok(UnimodularMatrix { entries, inverse })
    }

    pub fn identity(field: &NumberField, n: usize) -> Self {
        UnimodularMatrix { entries: linalg::identity(field, n), inverse: linalg::identity(field, n) }
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(field: &NumberField, cols: &[FVector]) -> Result<Self> {
        UnimodularMatrix::new(field, linalg::transpose(&cols.to_vec()))
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &FMatrix {
        &self.entries
    }

    pub fn inverse(&self) -> &FMatrix {
        &self.inverse
    }

    pub fn apply(&self, field: &NumberField, x: &[FieldElement]) -> FVector {
        linalg::mat_vec(field, &self.entries, x)
    }

    pub fn apply_inverse(&self, field: &NumberField, x: &[FieldElement]) -> FVector {
        linalg::mat_vec(field, &self.inverse, x)
    }

    pub fn mul(&self, field: &NumberField, o: &UnimodularMatrix) -> UnimodularMatrix {
        UnimodularMatrix {
            entries: linalg::mat_mul(field, &self.entries, &o.entries),
            inverse: linalg::mat_mul(field, &o.inverse, &self.inverse),
        }
    }
}

/// Roots of unity of `O_F`: the integers with `q0 = d`.
pub fn roots_of_unity(field: &NumberField) -> Result<Vec<FieldElement>> {
    let lat = crate::ideal_lattice::IdealLattice::ring_of_integers(field)?;
    let (m, vs) = lat.minimal_vectors()?;
    debug_assert_eq!(m, rat(field.degree() as i64));
    Ok(vs.iter().map(|c| lat.element(c)).collect())
}

/// Lexicographically least flat coordinates among `zeta x`.
pub(crate) fn unit_orbit_key(field: &NumberField, roots: &[FieldElement], x: &[FieldElement]) -> Vec<BigInt> {
    roots
        .iter()
        .map(|z| x.iter().flat_map(|c| field.mul(z, c).0.into_iter().map(|q| q.to_integer())).collect::<Vec<_>>())
        .min()
        .expect("1 is a root of unity")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::field::preset;
    use crate::rational::ratio;

    fn field(name: &str) -> NumberField {
        preset(name, Config::default()).unwrap()
    }

    fn a2() -> Vec<Vec<Rat>> {
        vec![vec![rat(1), ratio(1, 2)], vec![ratio(1, 2), rat(1)]]
    }

    #[test]
    fn qh_examples() {
        let g = field("gaussian");
        let l = HermitianLattice::from_rational(&g, &[vec![ratio(1, 2)]]).unwrap();
        assert_eq!(l.qh_value(&[g.one()]).unwrap(), rat(1));
        assert_eq!(l.qh_value(&[g.zero()]).unwrap(), rat(0));
        let q = field("rational");
        let e = HermitianLattice::from_rational(&q, &[vec![rat(1), rat(0)], vec![rat(0), rat(1)]]).unwrap();
        assert_eq!(e.qh_value(&[q.from_int(3), q.from_int(4)]).unwrap(), rat(25));
    }

    #[test]
    fn gram_matches_direct_evaluation() {
        let g = field("eisenstein");
        let w = FieldElement::from_ints(&[0, 1]);
        let h = vec![vec![g.from_int(2), w.clone()], vec![g.conjugate(&w).unwrap(), g.from_int(3)]];
        let l = HermitianLattice::new(&g, h).unwrap();
        let x = vec![FieldElement::from_ints(&[1, -2]), FieldElement::from_ints(&[3, 1])];
        let flat = l.flatten(&x).unwrap();
        assert_eq!(l.q_gram().value(&flat), l.qh_value(&x).unwrap());
    }

    #[test]
    fn minimal_vector_examples() {
        let g = field("gaussian");
        let l = HermitianLattice::from_rational(&g, &[vec![ratio(1, 2)]]).unwrap();
        let mv = l.minimal_vectors().unwrap();
        assert_eq!((mv.minimum.clone(), mv.count(), mv.count_mod_sign()), (rat(1), 4, 2));
        let q = field("rational");
        let a = HermitianLattice::from_rational(&q, &a2()).unwrap();
        let mv = a.minimal_vectors().unwrap();
        assert_eq!(mv.count(), 6);
        assert!(a.is_well_rounded().unwrap());
    }

    #[test]
    fn well_roundedness_failures() {
        let q = field("rational");
        let l = HermitianLattice::from_rational(&q, &[vec![rat(1), rat(0)], vec![rat(0), rat(2)]]).unwrap();
        let w = l.well_roundedness().unwrap();
        assert!(!w.well_rounded);
        assert_eq!(w.witness.len(), 1);
        let g = field("gaussian");
        let l = HermitianLattice::from_rational(&g, &[vec![rat(1)]]).unwrap();
        assert!(l.well_roundedness().unwrap().reason.unwrap().contains("minimum is 2"));
        let n = l.normalize_minimum().unwrap();
        assert_eq!(n.form()[0][0], g.from_rational(&ratio(1, 2)));
        assert!(n.is_well_rounded().unwrap());
    }

    #[test]
    fn normalization_of_scaled_identity() {
        let q = field("rational");
        let l = HermitianLattice::from_rational(&q, &[vec![rat(4), rat(0)], vec![rat(0), rat(4)]]).unwrap();
        let n = l.normalize_minimum().unwrap();
        assert_eq!(n.form(), &linalg::identity(&q, 2));
        assert_eq!(n.minimal_vectors().unwrap().vectors, l.minimal_vectors().unwrap().vectors);
    }

    #[test]
    fn gamma_action_moves_minimal_vectors() {
        let q = field("rational");
        let l = HermitianLattice::from_rational(&q, &[vec![rat(1), rat(0)], vec![rat(0), rat(1)]]).unwrap();
        let gamma = UnimodularMatrix::new(&q, vec![vec![q.one(), q.one()], vec![q.zero(), q.one()]]).unwrap();
        let l2 = l.gamma_action(&gamma).unwrap();
        let mut moved: Vec<FVector> = l.minimal_vectors().unwrap().vectors.iter().map(|v| gamma.apply(&q, v)).collect();
        moved.sort_by_key(|v| l2.flatten(v).unwrap());
        assert_eq!(l2.minimal_vectors().unwrap().vectors, moved);
        let x = vec![q.from_int(2), q.from_int(-5)];
        assert_eq!(l2.qh_value(&gamma.apply(&q, &x)).unwrap(), l.qh_value(&x).unwrap());
    }

    #[test]
    fn unimodularity_is_checked() {
        let g = field("gaussian");
        let e = |a, b| FieldElement::from_ints(&[a, b]);
        assert!(UnimodularMatrix::new(&g, vec![vec![e(0, 1), e(5, 0)], vec![e(0, 0), e(1, 0)]]).is_ok());
        assert_eq!(UnimodularMatrix::new(&g, vec![vec![e(1, 1), e(0, 0)], vec![e(0, 0), e(1, 0)]]).unwrap_err(), Error::NonUnimodular);
    }

    #[test]
    fn non_hermitian_and_indefinite_forms_are_rejected() {
        let g = field("gaussian");
        let i = FieldElement::from_ints(&[0, 1]);
        let h = vec![vec![g.one(), i.clone()], vec![i, g.one()]];
        assert!(matches!(HermitianLattice::new(&g, h), Err(Error::Domain(_))));
        let q = field("rational");
        let bad = HermitianLattice::from_rational(&q, &[vec![rat(1), rat(2)], vec![rat(2), rat(1)]]);
        assert_eq!(bad.unwrap_err(), Error::NotPositiveDefinite);
        let c5 = field("cyclotomic_5");
        assert!(HermitianLattice::from_rational(&c5, &[vec![rat(1)]]).is_ok());
    }

    #[test]
    fn roots_of_unity_counts() {
        assert_eq!(roots_of_unity(&field("gaussian")).unwrap().len(), 4);
        assert_eq!(roots_of_unity(&field("eisenstein")).unwrap().len(), 6);
        assert_eq!(roots_of_unity(&field("real_quad_5")).unwrap().len(), 2);
        assert_eq!(roots_of_unity(&field("cyclotomic_5")).unwrap().len(), 10);
    }
}
