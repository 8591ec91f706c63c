//! Ideal lattices `(I, q0)` with `I = x a`, `q0(y) = sum_sigma |y_sigma|^2`,
//! and exact closest and shortest vector search on them.
//!
//! When the field is closed under complex conjugation and the scaling `x`
//! lies in `F`, the Gram matrix is an exact rational matrix. Otherwise it is
//! known only up to a rational error radius, and enumeration radii are
//! widened by a rigorous slack so that no candidate can be missed.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::ball::{CBall, Interval};
use crate::bounds::BigBound;
use crate::enumerate::{closest, points_within, shortest, to_rat_vec};
use crate::error::{Error, Result};
use crate::field::{FieldElement, FractionalIdeal, NumberField, RealEmbeddingVector};
use crate::matrix::{determinant, inverse, is_positive_definite, is_symmetric, mat_vec, quad_form, RatMatrix};
use crate::rational::{nth_root_upper, rat, sqrt_upper, to_f64, Rat};

/// Highest field precision tried when a closest vector cannot be separated
/// from its competitors.
const MAX_REFINE_BITS: u32 = 1024;

/// The `x` in `I = x a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Scaling {
    Element(FieldElement),
    Real(RealEmbeddingVector),
}

/// A symmetric positive definite rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramMatrix {
    entries: RatMatrix,
}

impl GramMatrix {
    pub fn new(entries: RatMatrix) -> Result<Self> {
        if entries.iter().any(|r| r.len() != entries.len()) {
            return Err(Error::Dimension("Gram matrix must be square".into()));
        }
        if !is_symmetric(&entries) || !is_positive_definite(&entries) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(GramMatrix { entries })
    }

    pub fn entries(&self) -> &RatMatrix {
        &self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn determinant(&self) -> Rat {
        determinant(&self.entries)
    }

    pub fn value(&self, x: &[BigInt]) -> Rat {
        quad_form(&self.entries, &to_rat_vec(x))
    }
}

/// `R = sqrt(d)/2 |D|^(1/d) N(I)^(1/d)`, the covering radius bound.
#[derive(Clone, Debug)]
pub struct CoveringBound {
    /// Exact value when `N(I)` is known exactly.
    pub value: Option<BigBound>,
    /// Enclosure of `(R^2)^d = (d/4)^d |D|^2 N(I)^2`.
    pub r2_pow_d: Interval,
    /// Rational upper bound of `R^2`.
    pub r2_upper: Rat,
    pub approx: f64,
    d: u32,
}

impl CoveringBound {
    fn new(d: u32, abs_disc: &BigInt, norm2: Interval) -> Self {
        let dq = rat(d as i64);
        let base = (&dq / rat(4)).pow(d as i32) * Rat::from_integer(abs_disc * abs_disc);
        let r2_pow_d = norm2.scale(&base);
        let r2_upper = nth_root_upper(&r2_pow_d.hi, d, 64);
        let value = (norm2.lo == norm2.hi).then(|| {
            let n2 = BigBound::from_rational(&norm2.lo).expect("positive norm");
            let b = BigBound::from_rational(&base).expect("positive");
            b.mul(&n2).pow(&Rat::new(BigInt::one(), BigInt::from(2 * d)))
        });
        let approx = (to_f64(&r2_pow_d.hi).ln() / (2.0 * d as f64)).exp();
        CoveringBound { value, r2_pow_d, r2_upper, approx, d }
    }

    /// Whether a squared distance is certainly at most `R^2`.
    pub fn covers(&self, dist2: &Interval) -> bool {
        dist2.hi.pow(self.d as i32) <= self.r2_pow_d.lo
    }

    /// Whether a squared length is certainly at most `(2R)^2`.
    pub fn covers_twice(&self, len2: &Interval) -> bool {
        (&len2.hi / rat(4)).pow(self.d as i32) <= self.r2_pow_d.lo
    }
}

/// A lattice point closest to a target.
#[derive(Clone, Debug)]
pub struct ClosestVector {
    /// Coordinates in the Z-basis of the ideal part.
    pub coords: Vec<BigInt>,
    /// The element of the ideal part; the lattice point is `x` times it.
    pub element: FieldElement,
    pub dist2: Interval,
    /// The minimum is proven: every other candidate is at least as far.
    pub certified: bool,
    /// Other candidates whose distance could not be separated from the
    /// winner's (exact ties included).
    pub ties: usize,
}

/// A shortest nonzero lattice vector.
#[derive(Clone, Debug)]
pub struct ShortestVector {
    pub coords: Vec<BigInt>,
    pub element: FieldElement,
    pub len2: Interval,
    pub certified: bool,
    pub ties: usize,
}

/// Error budget of the midpoint quadratic form: for `c = c0 + u` the true
/// objective differs from `q_mid(u)` (up to a constant) by at most
/// `g_rad S^2 + 2 b_rad S`, where `S = a + sqrt(nt q_mid(u))` bounds `|c|_1`.
struct Slack {
    g_rad: Rat,
    b_rad: Rat,
    a: Rat,
    nt: Rat,
}

impl Slack {
    fn is_zero(&self) -> bool {
        self.g_rad.is_zero() && self.b_rad.is_zero()
    }

    fn s(&self, q: &Rat) -> Rat {
        &self.a + sqrt_upper(&(&self.nt * q), 40)
    }

    fn e(&self, q: &Rat) -> Rat {
        let s = self.s(q);
        &self.g_rad * &s * &s + rat(2) * &self.b_rad * &s
    }

    /// A radius `rho` such that every `u` with `q_mid(u) - E(q_mid(u)) <= thr`
    /// has `q_mid(u) <= rho`.
    fn enclosing(&self, thr: &Rat) -> Result<Rat> {
        if self.is_zero() {
            return Ok(thr.clone());
        }
        if &self.g_rad * &self.nt * rat(8) > Rat::one() {
            return Err(Error::PrecisionUnreachable(0));
        }
        // E(Q) <= 2 g a^2 + Q/2 + 2 b (a + sqrt(nt Q)) once g nt <= 1/8, so
        // Q - E(Q) >= L(Q), which increases past 4 b^2 nt
        let lower = |q: &Rat| {
            q / rat(2)
                - rat(2) * &self.g_rad * &self.a * &self.a
                - rat(2) * &self.b_rad * &self.a
                - rat(2) * &self.b_rad * sqrt_upper(&(&self.nt * q), 40)
        };
        let mut rho = (rat(4) * &self.b_rad * &self.b_rad * &self.nt + Rat::one()).max(rat(2) * thr + Rat::one());
        while lower(&rho) <= *thr {
            rho *= rat(2);
        }
        Ok(thr + self.e(&rho))
    }
}

/// The lattice `x a` in `F_R` with the trace form.
#[derive(Clone, Debug)]
pub struct IdealLattice {
    field: NumberField,
    ideal: FractionalIdeal,
    scaling: Scaling,
    x_embed: RealEmbeddingVector,
    /// `sigma(x z_i)`, row `i`.
    basis_embed: Vec<RealEmbeddingVector>,
    exact: Option<GramMatrix>,
    gram_mid: RatMatrix,
    gram_rad: Rat,
    gram_inv: RatMatrix,
    norm_x2: Interval,
}

impl IdealLattice {
    pub fn new(field: &NumberField, ideal: FractionalIdeal, scaling: Scaling) -> Result<Self> {
        let d = field.degree();
        let x_embed = match &scaling {
            Scaling::Element(x) => {
                if x.0.len() != d {
                    return Err(Error::Dimension(format!("scaling needs {d} coordinates")));
                }
                if x.is_zero() {
                    return Err(Error::ZeroComponent);
                }
                field.embed_default(x)
            }
            Scaling::Real(v) => {
                if v.len() != d {
                    return Err(Error::Dimension(format!("scaling needs {d} embedding values")));
                }
                if !field.is_invariant(v) {
                    return Err(Error::Domain("scaling is not a point of F_R".into()));
                }
                if v.values.iter().any(|c| c.contains_zero()) {
                    return Err(Error::ZeroComponent);
                }
                v.clone()
            }
        };
        let basis_embed: Vec<RealEmbeddingVector> = ideal.z_basis().iter().map(|z| field.embed_default(z).mul(&x_embed)).collect();
        let (exact, norm_x2) = match &scaling {
            Scaling::Element(x) if field.is_conjugation_closed() => {
                let xx = field.mul(x, &field.conjugate(x)?);
                let zc: Vec<FieldElement> = ideal.z_basis().iter().map(|z| field.conjugate(z)).collect::<Result<_>>()?;
                let g: RatMatrix = (0..d)
                    .map(|i| {
                        let xi = field.mul(&xx, &ideal.z_basis()[i]);
                        (0..d).map(|j| field.trace(&field.mul(&xi, &zc[j]))).collect()
                    })
                    .collect();
                let n = field.norm_abs(x);
                (Some(GramMatrix::new(g)?), Interval::point(&n * &n))
            }
            Scaling::Element(x) => {
                let n = field.norm_abs(x);
                (None, Interval::point(&n * &n))
            }
            Scaling::Real(v) => (None, v.norm_abs2()),
        };
        let (gram_mid, gram_rad) = match &exact {
            Some(g) => (g.entries.clone(), Rat::zero()),
            None => interval_gram(&basis_embed),
        };
        let gram_inv = inverse(&gram_mid).ok_or(Error::NotPositiveDefinite)?;
        if !is_positive_definite(&gram_mid) {
            return Err(Error::NotPositiveDefinite);
        }
        Ok(IdealLattice { field: field.clone(), ideal, scaling, x_embed, basis_embed, exact, gram_mid, gram_rad, gram_inv, norm_x2 })
    }

    /// `(O_F, q0)`.
    pub fn ring_of_integers(field: &NumberField) -> Result<Self> {
        IdealLattice::new(field, field.unit_ideal(), Scaling::Element(field.one()))
    }

    /// `(a, q0)` for a fractional ideal `a`.
    pub fn of_ideal(field: &NumberField, ideal: FractionalIdeal) -> Result<Self> {
        IdealLattice::new(field, ideal, Scaling::Element(field.one()))
    }

    pub fn field(&self) -> &NumberField {
        &self.field
    }

    pub fn ideal(&self) -> &FractionalIdeal {
        &self.ideal
    }

    pub fn scaling(&self) -> &Scaling {
        &self.scaling
    }

    pub fn rank(&self) -> usize {
        self.field.degree()
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// The exact Gram matrix `Tr(x conj(x) z_i conj(z_j))`.
    pub fn trace_gram(&self) -> Result<&GramMatrix> {
        self.exact.as_ref().ok_or(Error::FloatModeOnly)
    }

    /// Midpoint Gram matrix and a bound on the error of every entry.
    pub fn interval_gram(&self) -> (&RatMatrix, &Rat) {
        (&self.gram_mid, &self.gram_rad)
    }

    /// Enclosure of `N(I) = N(x) N(a)`.
    pub fn norm(&self) -> Interval {
        let na = self.ideal.norm();
        let nx = self.norm_x2.sqrt();
        if self.norm_x2.lo == self.norm_x2.hi {
            if let Some(r) = crate::rational::sqrt_exact(&self.norm_x2.lo) {
                return Interval::point(r * na);
            }
        }
        nx.scale(na)
    }

    /// Enclosure of `N(I)^2`, exact whenever `N(x)^2` is.
    pub fn norm2(&self) -> Interval {
        let na = self.ideal.norm();
        self.norm_x2.scale(&(na * na))
    }

    /// `N(I)^2 |D|`, which the Gram determinant must equal.
    pub fn expected_determinant(&self) -> Interval {
        self.norm2().scale(&Rat::from_integer(self.field.abs_discriminant()))
    }

    pub fn covering_bound(&self) -> CoveringBound {
        CoveringBound::new(self.rank() as u32, &self.field.abs_discriminant(), self.norm2())
    }

    /// The element `sum c_i z_i` of the ideal part.
    pub fn element(&self, coords: &[BigInt]) -> FieldElement {
        let d = self.rank();
        let mut acc = FieldElement::zero(d);
        for (c, z) in coords.iter().zip(self.ideal.z_basis()) {
            if !c.is_zero() {
                acc = acc.add(&z.scale(&Rat::from_integer(c.clone())));
            }
        }
        acc
    }

    /// Embedding of the lattice point with coordinates `coords`.
    pub fn embed_point(&self, coords: &[BigInt]) -> RealEmbeddingVector {
        let a = self.element(coords);
        match &self.scaling {
            Scaling::Element(x) => self.field.embed_default(&self.field.mul(x, &a)),
            Scaling::Real(_) => self.field.embed_default(&a).mul(&self.x_embed),
        }
    }

    /// Enclosure of `q0` at a lattice point, exact in exact mode.
    pub fn value(&self, coords: &[BigInt]) -> Interval {
        match &self.exact {
            Some(g) => Interval::point(g.value(coords)),
            None => self.embed_point(coords).q0(),
        }
    }

    fn slack(&self, a: Rat, b_rad: Rat) -> Slack {
        let n = self.rank();
        let tr: Rat = (0..n).map(|i| self.gram_inv[i][i].clone()).sum();
        Slack { g_rad: self.gram_rad.clone(), b_rad, a, nt: rat(n as i64) * tr }
    }

    fn budget(&self) -> u64 {
        self.field.config().node_budget
    }

    /// Every lattice point whose true `q0` is at most `r2`, possibly with
    /// a few more, sorted by midpoint value and then lexicographically.
    pub fn points_in_ball(&self, r2: &Rat) -> Result<Vec<(Vec<BigInt>, Interval)>> {
        let rho = self.slack(Rat::zero(), Rat::zero()).enclosing(r2)?;
        let pts = points_within(&self.gram_mid, None, &rho, self.budget())?;
        Ok(pts
            .into_iter()
            .map(|p| {
                let v = self.value(&p.coords);
                (p.coords, v)
            })
            .collect())
    }

    /// A closest lattice point to `target`; ties go to the lexicographically
    /// smallest coordinate vector.
    pub fn closest_vector(&self, target: &RealEmbeddingVector) -> Result<ClosestVector> {
        let cv = self.closest_once(target)?;
        if cv.certified || !self.is_refinable() {
            return Ok(cv);
        }
        let mut bits = self.field.precision_bits();
        let mut last = cv;
        while bits < MAX_REFINE_BITS {
            bits *= 4;
            let finer = self.with_precision(bits.min(MAX_REFINE_BITS))?;
            last = finer.closest_once(target)?;
            if last.certified {
                break;
            }
        }
        Ok(last)
    }

    /// Closest lattice point to an element of `F`, decided exactly.
    pub fn closest_to_element(&self, p: &FieldElement) -> Result<ClosestVector> {
        let g = self.trace_gram()?;
        let Scaling::Element(x) = &self.scaling else { return Err(Error::FloatModeOnly) };
        let px = self.field.div(p, x).ok_or(Error::ZeroComponent)?;
        let y = self.ideal.coordinates(&px);
        let (best, hits) = closest(&g.entries, &y, self.budget())?;
        let coords = hits[0].clone();
        Ok(ClosestVector { element: self.element(&coords), coords, dist2: Interval::point(best), certified: true, ties: hits.len() - 1 })
    }

    fn is_refinable(&self) -> bool {
        self.field.precision_bits() < MAX_REFINE_BITS
    }

    /// The same lattice with its field embeddings at another precision.
    pub fn with_precision(&self, bits: u32) -> Result<IdealLattice> {
        let mut cfg = *self.field.config();
        cfg.precision_bits = bits;
        let f = self.field.with_config(cfg)?;
        IdealLattice::new(&f, self.ideal.clone(), self.scaling.clone())
    }

    fn closest_once(&self, target: &RealEmbeddingVector) -> Result<ClosestVector> {
        let n = self.rank();
        if target.len() != n {
            return Err(Error::Dimension(format!("target needs {n} embedding values")));
        }
        // b_i = Re <t, v_i>, so the objective is c^T G c - 2 b^T c + q0(t)
        let b: Vec<Interval> = self
            .basis_embed
            .iter()
            .map(|v| v.values.iter().zip(&target.values).fold(CBall::zero(), |acc, (vs, ts)| acc.add(&ts.mul(&vs.conj()))).re_interval())
            .collect();
        let b_mid: Vec<Rat> = b.iter().map(|iv| (&iv.lo + &iv.hi) / rat(2)).collect();
        let b_rad = b.iter().map(|iv| (&iv.hi - &iv.lo) / rat(2)).max().unwrap_or_else(Rat::zero);
        let c0 = mat_vec(&self.gram_inv, &b_mid);
        let (best, hits) = closest(&self.gram_mid, &c0, self.budget())?;
        let a: Rat = c0.iter().map(|x| x.abs()).sum();
        let slack = self.slack(a, b_rad);
        let candidates = if slack.is_zero() {
            hits
        } else {
            let thr = &best + slack.e(&best);
            let rho = slack.enclosing(&thr)?;
            points_within(&self.gram_mid, Some(&c0), &rho, self.budget())?.into_iter().map(|p| p.coords).collect()
        };
        // candidates arrive sorted by midpoint value then lexicographically;
        // the first one wins
        let dists: Vec<Interval> = candidates.iter().map(|c| target.sub(&self.embed_point(c)).q0()).collect();
        let win = 0;
        let ties = dists.iter().enumerate().filter(|&(i, iv)| i != win && iv.lo < dists[win].hi).count();
        let exact_ties = dists.iter().enumerate().filter(|&(i, iv)| i != win && iv.lo == iv.hi && iv.lo == dists[win].hi).count();
        let coords = candidates[win].clone();
        Ok(ClosestVector {
            element: self.element(&coords),
            coords,
            dist2: dists[win].clone(),
            certified: ties == 0,
            ties: ties + exact_ties,
        })
    }

    /// A shortest nonzero lattice vector; ties go to the lexicographically
    /// smallest coordinate vector.
    pub fn shortest_vector(&self) -> Result<ShortestVector> {
        if let Some(g) = &self.exact {
            let (best, hits) = shortest(&g.entries, self.budget())?;
            let coords = hits[0].clone();
            return Ok(ShortestVector {
                element: self.element(&coords),
                coords,
                len2: Interval::point(best),
                certified: true,
                ties: hits.len() - 1,
            });
        }
        let (best, _) = shortest(&self.gram_mid, self.budget())?;
        let slack = self.slack(Rat::zero(), Rat::zero());
        let thr = &best + slack.e(&best);
        let rho = slack.enclosing(&thr)?;
        let pts: Vec<Vec<BigInt>> = points_within(&self.gram_mid, None, &rho, self.budget())?
            .into_iter()
            .filter(|p| p.coords.iter().any(|c| !c.is_zero()))
            .map(|p| p.coords)
            .collect();
        let lens: Vec<Interval> = pts.iter().map(|c| self.embed_point(c).q0()).collect();
        let win = 0;
        let ties = lens.iter().enumerate().filter(|&(i, iv)| i != win && iv.lo < lens[win].hi).count();
        let coords = pts[win].clone();
        Ok(ShortestVector { element: self.element(&coords), coords, len2: lens[win].clone(), certified: ties == 0, ties })
    }

    /// All minimal vectors in exact mode, sorted lexicographically.
    pub fn minimal_vectors(&self) -> Result<(Rat, Vec<Vec<BigInt>>)> {
        let g = self.trace_gram()?;
        shortest(&g.entries, self.budget())
    }
}

/// Midpoint and entrywise error radius of `Re sum_sigma v_i conj(v_j)`.
fn interval_gram(v: &[RealEmbeddingVector]) -> (RatMatrix, Rat) {
    let n = v.len();
    let mut mid = vec![vec![Rat::zero(); n]; n];
    let mut rad = Rat::zero();
    for i in 0..n {
        for j in i..n {
            let s = v[i].values.iter().zip(&v[j].values).fold(CBall::zero(), |acc, (a, b)| acc.add(&a.mul(&b.conj())));
            mid[i][j] = s.re.clone();
            mid[j][i] = s.re;
            rad = rad.max(s.rad);
        }
    }
    (mid, rad)
}

/// Output of [`close_integer`].
#[derive(Clone, Debug)]
pub struct CloseInteger {
    pub element: FieldElement,
    /// `sum_sigma |x_sigma - sigma(a)|`.
    pub l1: Interval,
    /// `|x - a|^2`.
    pub dist2: Interval,
    /// `l1 <= C_2`, certified.
    pub l1_within: bool,
    /// `sqrt(d) |x - a| <= C_2`, certified.
    pub euclid_within: bool,
}

/// An integer `a` of `F` close to `x`: the closest point of `(O_F, q0)`,
/// whose `l1` distance is then at most `C_2 = (d/2)|D|^(1/d)`.
pub fn close_integer(field: &NumberField, x: &RealEmbeddingVector) -> Result<CloseInteger> {
    let d = field.degree() as i32;
    let a = if x.values.iter().all(|v| v.is_exact() && v.re.is_zero() && v.im.is_zero()) {
        field.zero()
    } else {
        IdealLattice::ring_of_integers(field)?.closest_vector(x)?.element
    };
    let diff = x.sub(&field.embed_default(&a));
    let l1 = diff.l1();
    let dist2 = diff.q0();
    let disc = Rat::from_integer(field.abs_discriminant());
    let dd = rat(d as i64).pow(d);
    // l1 <= (d/2)|D|^(1/d)  <=>  (2 l1)^d <= d^d |D|
    let l1_within = (rat(2) * &l1.hi).pow(d) <= &dd * &disc;
    // d |x-a|^2 <= (d^2/4)|D|^(2/d)  <=>  (4 |x-a|^2)^d <= d^d |D|^2
    let euclid_within = (rat(4) * &dist2.hi).pow(d) <= &dd * &disc * &disc;
    Ok(CloseInteger { element: a, l1, dist2, l1_within, euclid_within })
}

/// Output of [`scaling_multiplier`].
#[derive(Clone, Debug)]
pub struct ScalingMultiplier {
    pub element: FieldElement,
    /// `sup_sigma |sigma(a) x_sigma|`.
    pub sup: Interval,
    /// `|x a|^2`.
    pub len2: Interval,
    /// `sup <= C_3 N(x)^(1/d)`, certified.
    pub sup_within: bool,
    /// `|x a| <= 2R`, certified.
    pub euclid_within: bool,
}

/// A nonzero integer `a` with `x a` short: the shortest vector of `(x O_F, q0)`.
pub fn scaling_multiplier(field: &NumberField, x: &RealEmbeddingVector) -> Result<ScalingMultiplier> {
    if x.values.iter().any(|v| v.contains_zero()) {
        return Err(Error::ZeroComponent);
    }
    let lat = IdealLattice::new(field, field.unit_ideal(), Scaling::Real(x.clone()))?;
    let sv = lat.shortest_vector()?;
    let xa = field.embed_default(&sv.element).mul(x);
    let sup = xa.sup();
    let len2 = xa.q0();
    let d = field.degree() as i32;
    let disc = Rat::from_integer(field.abs_discriminant());
    let rhs = rat(d as i64).pow(d) * &disc * &disc * &x.norm_abs2().lo;
    // sup <= sqrt(d)|D|^(1/d) N(x)^(1/d)  <=>  (sup^2)^d <= d^d |D|^2 N(x)^2
    let sup_within = (&sup.hi * &sup.hi).pow(d) <= rhs;
    // |xa|^2 <= 4 R^2  <=>  (|xa|^2)^d <= d^d |D|^2 N(x)^2
    let euclid_within = len2.hi.pow(d) <= rhs;
    Ok(ScalingMultiplier { element: sv.element, sup, len2, sup_within, euclid_within })
}

/// One representative of `O_F / a`.
#[derive(Clone, Debug)]
pub struct Residue {
    pub element: FieldElement,
    /// `sum_sigma |sigma(x)|`.
    pub l1: Interval,
    /// `l1 <= C_2 N(a)^(1/d)`, certified.
    pub within: bool,
}

/// Representatives of `O_F / a` of small `l1` norm: for each class the
/// element of least `q0` (then lexicographically least) among the integers
/// in the ball of radius `R` of `(a, q0)`, which meets every class.
pub fn residue_representatives(field: &NumberField, ideal: &FractionalIdeal, cap: u64) -> Result<Vec<Residue>> {
    if !ideal.is_integral() {
        return Err(Error::InvalidIdeal("residues need an integral ideal".into()));
    }
    let norm = ideal.norm().to_integer().to_u64().unwrap_or(u64::MAX);
    if norm > cap {
        return Err(Error::CapExceeded(format!("ideal norm {norm} exceeds the cap {cap}")));
    }
    let d = field.degree() as i32;
    let ring = IdealLattice::ring_of_integers(field)?;
    let cover = IdealLattice::of_ideal(field, ideal.clone())?.covering_bound();
    let pts = ring.points_in_ball(&cover.r2_upper)?;
    let mut seen = std::collections::HashSet::new();
    let disc = Rat::from_integer(field.abs_discriminant());
    let rhs = rat(d as i64).pow(d) * &disc * ideal.norm();
    let mut out = vec![];
    for (c, _) in pts {
        let x = ring.element(&c);
        if seen.insert(ideal.reduce(&x)) {
            let l1 = field.embed_default(&x).l1();
            // l1 <= (d/2)|D|^(1/d) N^(1/d)  <=>  (2 l1)^d <= d^d |D| N
            let within = (rat(2) * &l1.hi).pow(d) <= rhs;
            out.push(Residue { element: x, l1, within });
        }
    }
    if out.len() as u64 != norm {
        return Err(Error::IncompleteCoverage { found: out.len() as u64, expected: norm });
    }
    Ok(out)
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

    #[test]
    fn gram_of_gaussian_and_eisenstein_integers() {
        let g = IdealLattice::ring_of_integers(&field("gaussian")).unwrap();
        assert_eq!(g.trace_gram().unwrap().entries(), &vec![vec![rat(2), rat(0)], vec![rat(0), rat(2)]]);
        let e = IdealLattice::ring_of_integers(&field("eisenstein")).unwrap();
        let gm = e.trace_gram().unwrap();
        assert_eq!(gm.determinant(), rat(3));
        let q = field("rational");
        let z = IdealLattice::ring_of_integers(&q).unwrap();
        assert_eq!(z.trace_gram().unwrap().entries(), &vec![vec![rat(1)]]);
    }

    #[test]
    fn determinant_identity_on_principal_ideals() {
        for name in ["gaussian", "eisenstein", "real_quad_2", "real_quad_5", "cyclotomic_5"] {
            let f = field(name);
            let d = f.degree();
            let mut c = vec![0i64; d];
            c[0] = 2;
            c[d - 1] += 1;
            let a = FieldElement::from_ints(&c);
            let lat = IdealLattice::of_ideal(&f, f.principal_ideal(&a).unwrap()).unwrap();
            let det = lat.trace_gram().unwrap().determinant();
            assert_eq!(Interval::point(det), lat.expected_determinant(), "{name}");
        }
    }

    #[test]
    fn covering_bound_values() {
        let g = IdealLattice::ring_of_integers(&field("gaussian")).unwrap().covering_bound();
        assert_eq!(g.value.unwrap(), BigBound::from_int(2).sqrt());
        let z = IdealLattice::ring_of_integers(&field("rational")).unwrap().covering_bound();
        assert_eq!(z.value.unwrap(), BigBound::from_rational(&ratio(1, 2)).unwrap());
        let e = IdealLattice::ring_of_integers(&field("eisenstein")).unwrap().covering_bound();
        assert!((e.approx - 1.5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn closest_vector_examples() {
        let f = field("gaussian");
        let lat = IdealLattice::ring_of_integers(&f).unwrap();
        let t = f.real_point(&[], &[(ratio(1, 2), ratio(1, 2))]).unwrap();
        let cv = lat.closest_vector(&t).unwrap();
        assert_eq!(cv.dist2, Interval::point(rat(1)));
        assert_eq!(cv.coords, vec![BigInt::from(0), BigInt::from(0)]);
        assert_eq!(cv.ties, 3);
        let q = field("rational");
        let z = IdealLattice::ring_of_integers(&q).unwrap();
        let cv = z.closest_vector(&q.real_point(&[ratio(3, 10)], &[]).unwrap()).unwrap();
        assert!(cv.element.is_zero());
        assert_eq!(cv.dist2, Interval::point(ratio(9, 100)));
        assert!(cv.certified);
    }

    #[test]
    fn closest_to_a_lattice_point_is_itself() {
        let f = field("real_quad_5");
        let lat = IdealLattice::ring_of_integers(&f).unwrap();
        let p = FieldElement::from_ints(&[3, -2]);
        let cv = lat.closest_vector(&f.embed_default(&p)).unwrap();
        assert_eq!(cv.element, p);
        assert!(cv.certified);
        let ce = lat.closest_to_element(&p).unwrap();
        assert_eq!(ce.element, p);
        assert!(ce.dist2.hi.is_zero());
    }

    #[test]
    fn shortest_vectors() {
        let f = field("gaussian");
        let sv = IdealLattice::ring_of_integers(&f).unwrap().shortest_vector().unwrap();
        assert_eq!(sv.len2, Interval::point(rat(2)));
        assert_eq!(sv.ties, 3);
        let p = f.principal_ideal(&FieldElement::from_ints(&[1, 1])).unwrap();
        let sv = IdealLattice::of_ideal(&f, p).unwrap().shortest_vector().unwrap();
        assert_eq!(sv.len2, Interval::point(rat(4)));
    }

    #[test]
    fn float_mode_shortest_vector() {
        let f = field("gaussian");
        let x = f.real_point(&[], &[(ratio(3, 1), ratio(1, 7))]).unwrap();
        let lat = IdealLattice::new(&f, f.unit_ideal(), Scaling::Real(x.clone())).unwrap();
        assert_eq!(lat.trace_gram().unwrap_err(), Error::FloatModeOnly);
        let sv = lat.shortest_vector().unwrap();
        // x O_F is a rotated, scaled copy of Z[i], so the minimum is 2|x|^2
        let m = rat(2) * (rat(9) + ratio(1, 49));
        assert!(sv.len2.lo <= m && m <= sv.len2.hi);
    }

    #[test]
    fn close_integer_examples() {
        let g = field("gaussian");
        let x = g.real_point(&[], &[(ratio(2, 5), ratio(1, 10))]).unwrap();
        let ci = close_integer(&g, &x).unwrap();
        assert!(ci.element.is_zero());
        assert!((to_f64(&ci.l1.hi) - 2.0 * (0.17f64).sqrt()).abs() < 1e-9);
        assert!(ci.l1_within && ci.euclid_within);
        let s2 = field("real_quad_2");
        let x = s2.embed_default(&FieldElement::from_ints(&[0, 1]));
        let x = RealEmbeddingVector::new(
            x.values.iter().map(|v| CBall::real(if v.re.is_positive() { ratio(7, 5) } else { ratio(-7, 5) })).collect(),
        );
        let ci = close_integer(&s2, &x).unwrap();
        assert_eq!(ci.element, FieldElement::from_ints(&[0, 1]));
        assert!((to_f64(&ci.l1.hi) - 2.0 * (2f64.sqrt() - 1.4)).abs() < 1e-9);
        let zero = g.real_point(&[], &[(rat(0), rat(0))]).unwrap();
        assert!(close_integer(&g, &zero).unwrap().element.is_zero());
    }

    #[test]
    fn scaling_multiplier_examples() {
        let g = field("gaussian");
        let one = g.embed_default(&g.one());
        let sm = scaling_multiplier(&g, &one).unwrap();
        assert_eq!(sm.sup, Interval::point(rat(1)));
        assert!(sm.sup_within && sm.euclid_within);
        let q = field("rational");
        let five = q.real_point(&[rat(5)], &[]).unwrap();
        let sm = scaling_multiplier(&q, &five).unwrap();
        assert_eq!(sm.element.0[0].abs(), rat(1));
        assert!(sm.sup_within);
        let z = g.real_point(&[], &[(rat(0), rat(0))]).unwrap();
        assert_eq!(scaling_multiplier(&g, &z).unwrap_err(), Error::ZeroComponent);
    }

    #[test]
    fn residue_examples() {
        let g = field("gaussian");
        let r = residue_representatives(&g, &g.unit_ideal(), 10_000).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r[0].element.is_zero());
        let p = g.principal_ideal(&FieldElement::from_ints(&[1, 1])).unwrap();
        let r = residue_representatives(&g, &p, 10_000).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|x| x.within));
        let q = field("rational");
        let two = q.principal_ideal(&q.from_int(2)).unwrap();
        let r = residue_representatives(&q, &two, 10_000).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(r[1].element.0[0].abs(), rat(1));
        assert!(matches!(residue_representatives(&g, &p, 1), Err(Error::CapExceeded(_))));
    }
}
