//! Exact arithmetic in a number field given by a monic minimal polynomial and
//! an integral basis, together with certified complex embeddings.
//!
//! Elements are stored as rational coordinate vectors with respect to the
//! integral basis `a_1, ..., a_d`. Embeddings are ordered with the real ones
//! first, followed by complex pairs `(sigma, conj sigma)` in adjacent slots.

use std::fmt;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Deserialize;

use crate::ball::{CBall, Interval};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::matrix::{clear_denominators, determinant, hermite_rows, inverse, vec_mat, RatMatrix};
use crate::poly::{isolate_roots, IsolatedRoot, Poly};
use crate::rational::{is_integral, parse_rat, rat, to_f64, Rat};

/// An element of `F` in integral-basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement(pub Vec<Rat>);

impl FieldElement {
    pub fn zero(d: usize) -> Self {
        FieldElement(vec![Rat::zero(); d])
    }

    pub fn from_ints(c: &[i64]) -> Self {
        FieldElement(c.iter().map(|&x| rat(x)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|x| x.is_zero())
    }

    /// Integer coordinates, i.e. the element lies in `O_F`.
    pub fn is_integral(&self) -> bool {
        self.0.iter().all(is_integral)
    }

    pub fn add(&self, o: &FieldElement) -> FieldElement {
        FieldElement(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, o: &FieldElement) -> FieldElement {
        FieldElement(self.0.iter().zip(&o.0).map(|(a, b)| a - b).collect())
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement(self.0.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, q: &Rat) -> FieldElement {
        FieldElement(self.0.iter().map(|a| a * q).collect())
    }

    pub fn l1(&self) -> Rat {
        self.0.iter().fold(Rat::zero(), |acc, x| acc + x.abs())
    }

    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.0.iter().map(|x| if x.is_integer() { x.to_integer().to_i64() } else { None }).collect()
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(crate::rational::fmt_rat).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// A point of `F_R`, given by its values at every embedding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RealEmbeddingVector {
    pub values: Vec<CBall>,
}

impl RealEmbeddingVector {
    pub fn new(values: Vec<CBall>) -> Self {
        RealEmbeddingVector { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn radius(&self) -> Rat {
        self.values.iter().map(|v| v.rad.clone()).max().unwrap_or_else(Rat::zero)
    }

    pub fn is_exact(&self) -> bool {
        self.values.iter().all(|v| v.is_exact())
    }

    /// Bounds of `N(x) = prod |x_sigma|`.
    pub fn norm_abs(&self) -> Interval {
        self.values.iter().fold(Interval::point(Rat::one()), |acc, v| acc.mul(&v.abs()))
    }

    /// Bounds of `prod |x_sigma|^2`, exact for exact inputs.
    pub fn norm_abs2(&self) -> Interval {
        self.values.iter().fold(Interval::point(Rat::one()), |acc, v| acc.mul(&v.abs2()))
    }

    /// Bounds of `sum |x_sigma|^2`.
    pub fn q0(&self) -> Interval {
        self.values.iter().fold(Interval::zero(), |acc, v| acc.add(&v.abs2()))
    }

    /// Bounds of `sum |x_sigma|`.
    pub fn l1(&self) -> Interval {
        self.values.iter().fold(Interval::zero(), |acc, v| acc.add(&v.abs()))
    }

    /// Bounds of `sup |x_sigma|`.
    pub fn sup(&self) -> Interval {
        let abs: Vec<Interval> = self.values.iter().map(|v| v.abs()).collect();
        let lo = abs.iter().map(|a| a.lo.clone()).max().unwrap_or_else(Rat::zero);
        let hi = abs.iter().map(|a| a.hi.clone()).max().unwrap_or_else(Rat::zero);
        Interval::new(lo, hi)
    }

    pub fn mul(&self, o: &RealEmbeddingVector) -> RealEmbeddingVector {
        RealEmbeddingVector::new(self.values.iter().zip(&o.values).map(|(a, b)| a.mul(b)).collect())
    }

    pub fn sub(&self, o: &RealEmbeddingVector) -> RealEmbeddingVector {
        RealEmbeddingVector::new(self.values.iter().zip(&o.values).map(|(a, b)| a.sub(b)).collect())
    }

    pub fn add(&self, o: &RealEmbeddingVector) -> RealEmbeddingVector {
        RealEmbeddingVector::new(self.values.iter().zip(&o.values).map(|(a, b)| a.add(b)).collect())
    }

    pub fn to_f64(&self) -> Vec<(f64, f64)> {
        self.values.iter().map(|v| v.to_f64()).collect()
    }
}

/// Fractional ideal, stored as the Hermite normal form of its Z-basis in
/// integral-basis coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FractionalIdeal {
    basis: Vec<FieldElement>,
    norm: Rat,
}

impl FractionalIdeal {
    pub fn z_basis(&self) -> &[FieldElement] {
        &self.basis
    }

    pub fn norm(&self) -> &Rat {
        &self.norm
    }

    pub fn basis_matrix(&self) -> RatMatrix {
        self.basis.iter().map(|b| b.0.clone()).collect()
    }

    /// Ideal contained in `O_F`.
    pub fn is_integral(&self) -> bool {
        self.basis.iter().all(|b| b.is_integral())
    }

    /// Coordinates of `x` with respect to the ideal's Z-basis.
    pub fn coordinates(&self, x: &FieldElement) -> Vec<Rat> {
        let inv = inverse(&self.basis_matrix()).expect("ideal basis is nonsingular");
        vec_mat(&x.0, &inv)
    }

    pub fn contains(&self, x: &FieldElement) -> bool {
        self.coordinates(x).iter().all(is_integral)
    }

    /// Canonical representative of `x + I` for an integral ideal and an
    /// integral `x`: reduce against the triangular basis.
    pub fn reduce(&self, x: &FieldElement) -> Vec<BigInt> {
        let mut v: Vec<BigInt> = x.0.iter().map(|c| c.to_integer()).collect();
        for (i, row) in self.basis.iter().enumerate() {
            let piv = row.0[i].to_integer();
            let q = num_integer::Integer::div_floor(&v[i], &piv);
            if !q.is_zero() {
                for (vj, rj) in v.iter_mut().zip(&row.0) {
                    *vj -= &q * rj.to_integer();
                }
            }
        }
        v
    }
}

impl fmt::Display for FractionalIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.basis.iter().map(|b| b.to_string()).collect();
        write!(f, "<{}> (norm {})", parts.join(", "), crate::rational::fmt_rat(&self.norm))
    }
}

/// A number field with a chosen integral basis of its ring of integers.
#[derive(Clone, Debug)]
pub struct NumberField {
    name: String,
    min_poly: Poly,
    /// Row `i` holds the power-basis coefficients of `a_i`.
    basis_power: RatMatrix,
    basis_inv: RatMatrix,
    /// `mul_table[i][j]` holds the coordinates of `a_i a_j`.
    mul_table: Vec<Vec<Vec<Rat>>>,
    traces: Vec<Rat>,
    signature: (usize, usize),
    discriminant: BigInt,
    roots: Vec<IsolatedRoot>,
    basis_embeddings: Vec<Vec<CBall>>,
    conj_perm: Option<Vec<usize>>,
    /// Row `i` holds the coordinates of `conj(a_i)`.
    conj_matrix: Option<RatMatrix>,
    config: Config,
}

impl NumberField {
    /// Build a field from a monic squarefree minimal polynomial (constant
    /// term first) and an integral basis given as power-basis coordinates.
    ///
    /// Irreducibility of `min_poly` is not checked.
    pub fn new(name: &str, min_poly: Poly, integral_basis: &[Vec<Rat>], config: Config) -> Result<Self> {
        if min_poly.is_zero() || min_poly.degree() == 0 {
            return Err(Error::ConstantPolynomial);
        }
        if !min_poly.lead().is_one() {
            return Err(Error::NonMonic);
        }
        if min_poly.0.iter().any(|c| !c.is_integer()) {
            return Err(Error::InvalidBasis("minimal polynomial must have integer coefficients".into()));
        }
        if min_poly.gcd(&min_poly.derivative()).degree() > 0 {
            return Err(Error::NotSquarefree);
        }
        let d = min_poly.degree();
        if integral_basis.len() != d {
            return Err(Error::InvalidBasis(format!("expected {d} basis elements, got {}", integral_basis.len())));
        }
        let basis_power: RatMatrix = integral_basis
            .iter()
            .map(|v| {
                if v.len() > d {
                    return Err(Error::InvalidBasis("basis vector longer than the degree".into()));
                }
                let mut row = v.clone();
                row.resize(d, Rat::zero());
                Ok(row)
            })
            .collect::<Result<_>>()?;
        let basis_inv = inverse(&basis_power).ok_or_else(|| Error::InvalidBasis("basis is linearly dependent".into()))?;

        let basis_polys: Vec<Poly> = basis_power.iter().map(|r| Poly::new(r.clone())).collect();
        let to_coords = |p: &Poly| -> Vec<Rat> {
            let mut c = p.0.clone();
            c.resize(d, Rat::zero());
            vec_mat(&c, &basis_inv)
        };
        let mut mul_table = vec![vec![vec![]; d]; d];
        for i in 0..d {
            for j in 0..d {
                let prod = basis_polys[i].mul(&basis_polys[j]).rem(&min_poly);
                let c = to_coords(&prod);
                if !c.iter().all(is_integral) {
                    return Err(Error::NotARing(format!("a_{} * a_{} has non-integral coordinates", i + 1, j + 1)));
                }
                mul_table[i][j] = c;
            }
        }
        let one = to_coords(&Poly::from_ints(&[1]));
        if !one.iter().all(is_integral) {
            return Err(Error::NotARing("1 is not in the Z-span of the basis".into()));
        }
        let traces: Vec<Rat> = (0..d).map(|i| (0..d).fold(Rat::zero(), |acc, k| acc + &mul_table[i][k][k])).collect();
        let tp: RatMatrix = (0..d)
            .map(|i| (0..d).map(|j| mul_table[i][j].iter().zip(&traces).fold(Rat::zero(), |a, (c, t)| a + c * t)).collect())
            .collect();
        let disc = determinant(&tp);
        if !disc.is_integer() || disc.is_zero() {
            return Err(Error::InvalidBasis(format!("trace pairing determinant {disc} is not a nonzero integer")));
        }

        let roots = isolate_roots(&min_poly, config.precision_bits)?;
        let r1 = roots.iter().filter(|r| r.is_real).count();
        let signature = (r1, (d - r1) / 2);
        let basis_embeddings = embed_basis(&basis_polys, &roots, config.precision_bits);

        let mut field = NumberField {
            name: name.to_string(),
            min_poly,
            basis_power,
            basis_inv,
            mul_table,
            traces,
            signature,
            discriminant: disc.to_integer(),
            roots,
            basis_embeddings,
            conj_perm: None,
            conj_matrix: None,
            config,
        };
        field.detect_conjugation();
        Ok(field)
    }

    fn detect_conjugation(&mut self) {
        let d = self.degree();
        let perm: Vec<usize> = (0..d)
            .map(|k| {
                if self.roots[k].is_real {
                    k
                } else if self.roots[k].ball.im.is_positive() {
                    k + 1
                } else {
                    k - 1
                }
            })
            .collect();
        let g = if self.signature.1 == 0 {
            Poly::from_ints(&[0, 1])
        } else {
            match conjugation_polynomial(&self.min_poly, &self.roots) {
                Some(g) => g,
                None => return,
            }
        };
        // g(theta) must be a root of the minimal polynomial ...
        if !self.min_poly.compose_mod(&g, &self.min_poly).is_zero() {
            return;
        }
        // ... and the one isolated in the disc of the conjugate root.
        for k in 0..d {
            let v = g.eval_ball(&self.roots[k].ball);
            for (j, r) in self.roots.iter().enumerate() {
                let gap = v.sub(&CBall::exact(r.ball.re.clone(), r.ball.im.clone()));
                let close = gap.center_abs2() <= (&gap.rad + &r.ball.rad) * (&gap.rad + &r.ball.rad);
                let target = self.roots[k].ball.conj();
                let is_conj = j == perm[k] && target.re == r.ball.re && target.im == r.ball.im;
                if close != is_conj {
                    return;
                }
            }
        }
        let conj_matrix: RatMatrix = self
            .basis_power
            .iter()
            .map(|row| {
                let p = Poly::new(row.clone()).compose_mod(&g, &self.min_poly);
                let mut c = p.0.clone();
                c.resize(d, Rat::zero());
                vec_mat(&c, &self.basis_inv)
            })
            .collect();
        if conj_matrix.iter().flatten().all(is_integral) {
            self.conj_perm = Some(perm);
            self.conj_matrix = Some(conj_matrix);
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn degree(&self) -> usize {
        self.min_poly.degree()
    }

    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    pub fn abs_discriminant(&self) -> BigInt {
        self.discriminant.abs()
    }

    pub fn min_poly(&self) -> &Poly {
        &self.min_poly
    }

    pub fn config(&self) -> &Config {
        &self.config
    }

    pub fn precision_bits(&self) -> u32 {
        self.config.precision_bits
    }

    /// Certified enclosures of the generator's images, one per embedding.
    pub fn embedding_table(&self) -> Vec<CBall> {
        self.roots.iter().map(|r| r.ball.clone()).collect()
    }

    pub fn conj_perm(&self) -> Option<&[usize]> {
        self.conj_perm.as_deref()
    }

    pub fn is_conjugation_closed(&self) -> bool {
        self.conj_perm.is_some()
    }

    /// Rows are the power-basis coordinates of the integral basis.
    pub fn integral_basis(&self) -> &RatMatrix {
        &self.basis_power
    }

    /// A copy of this field with a different working configuration.
    /// Whether this is one of the class-number-one presets (same name and
    /// defining polynomial).
    pub fn is_class_number_one(&self) -> bool {
        CLASS_NUMBER_ONE.contains(&self.name.as_str()) && preset(&self.name, self.config).is_ok_and(|p| p.min_poly == self.min_poly)
    }

    pub fn with_config(&self, config: Config) -> Result<NumberField> {
        if config.precision_bits == self.config.precision_bits {
            let mut f = self.clone();
            f.config = config;
            return Ok(f);
        }
        let rows: Vec<Vec<Rat>> = self.basis_power.clone();
        NumberField::new(&self.name, self.min_poly.clone(), &rows, config)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::zero(self.degree())
    }

    pub fn one(&self) -> FieldElement {
        self.from_rational(&Rat::one())
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_rational(&rat(n))
    }

    pub fn from_rational(&self, q: &Rat) -> FieldElement {
        let mut c = vec![Rat::zero(); self.degree()];
        c[0] = q.clone();
        FieldElement(vec_mat(&c, &self.basis_inv))
    }

    /// The `i`-th integral basis element.
    pub fn basis_element(&self, i: usize) -> FieldElement {
        let mut c = vec![Rat::zero(); self.degree()];
        c[i] = Rat::one();
        FieldElement(c)
    }

    /// The element `sum c_k theta^k`.
    pub fn from_power_coeffs(&self, c: &[Rat]) -> FieldElement {
        let p = Poly::new(c.to_vec()).rem(&self.min_poly);
        let mut c = p.0;
        c.resize(self.degree(), Rat::zero());
        FieldElement(vec_mat(&c, &self.basis_inv))
    }

    /// Power-basis coefficients of `a`.
    pub fn power_coeffs(&self, a: &FieldElement) -> Vec<Rat> {
        vec_mat(&a.0, &self.basis_power)
    }

    pub fn mul(&self, a: &FieldElement, b: &FieldElement) -> FieldElement {
        let d = self.degree();
        let mut out = vec![Rat::zero(); d];
        for (i, ai) in a.0.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                if bj.is_zero() {
                    continue;
                }
                let c = ai * bj;
                for (k, m) in self.mul_table[i][j].iter().enumerate() {
                    if !m.is_zero() {
                        out[k] += &c * m;
                    }
                }
            }
        }
        FieldElement(out)
    }

    /// Matrix of multiplication by `a`: row `j` holds the coordinates of `a a_j`.
    pub fn mult_matrix(&self, a: &FieldElement) -> RatMatrix {
        (0..self.degree()).map(|j| self.mul(a, &self.basis_element(j)).0).collect()
    }

    pub fn trace(&self, a: &FieldElement) -> Rat {
        a.0.iter().zip(&self.traces).fold(Rat::zero(), |acc, (c, t)| acc + c * t)
    }

    /// Signed field norm, the determinant of multiplication by `a`.
    pub fn norm(&self, a: &FieldElement) -> Rat {
        determinant(&self.mult_matrix(a))
    }

    /// `|N(a)|`, exact.
    pub fn norm_abs(&self, a: &FieldElement) -> Rat {
        self.norm(a).abs()
    }

    pub fn inverse(&self, a: &FieldElement) -> Option<FieldElement> {
        let m = inverse(&self.mult_matrix(a))?;
        // a * y = 1  <=>  y^T M = coords(1)
        Some(FieldElement(vec_mat(&self.one().0, &m)))
    }

    pub fn div(&self, a: &FieldElement, b: &FieldElement) -> Option<FieldElement> {
        self.inverse(b).map(|bi| self.mul(a, &bi))
    }

    pub fn pow(&self, a: &FieldElement, e: u32) -> FieldElement {
        (0..e).fold(self.one(), |acc, _| self.mul(&acc, a))
    }

    pub fn conjugate(&self, a: &FieldElement) -> Result<FieldElement> {
        let m = self.conj_matrix.as_ref().ok_or(Error::ConjugationUnavailable)?;
        Ok(FieldElement(vec_mat(&a.0, m)))
    }

    /// `Tr(a conj(a))`.
    pub fn q0(&self, a: &FieldElement) -> Result<Rat> {
        Ok(self.trace(&self.mul(a, &self.conjugate(a)?)))
    }

    /// Enclosures of `sigma(a_i)`; row `sigma`, column `i`.
    pub fn basis_embeddings(&self) -> &[Vec<CBall>] {
        &self.basis_embeddings
    }

    /// Embedding vector of `a` at the field's working precision.
    pub fn embed_default(&self, a: &FieldElement) -> RealEmbeddingVector {
        embed_with(&self.basis_embeddings, a, self.config.precision_bits)
    }

    /// Embedding vector of `a` with every radius at most `2^-bits`.
    pub fn embed(&self, a: &FieldElement, bits: u32) -> Result<RealEmbeddingVector> {
        if bits == 0 || bits > 1 << 14 {
            return Err(Error::PrecisionUnreachable(bits));
        }
        let limit = crate::rational::pow2(-(bits as i64));
        let l1 = a.l1();
        let mut work = bits.max(self.config.precision_bits);
        for _ in 0..4 {
            let v = if work == self.config.precision_bits {
                embed_with(&self.basis_embeddings, a, bits + 8)
            } else {
                let roots = isolate_roots(&self.min_poly, work)?;
                let polys: Vec<Poly> = self.basis_power.iter().map(|r| Poly::new(r.clone())).collect();
                embed_with(&embed_basis(&polys, &roots, work), a, bits + 8)
            };
            if v.values.iter().all(|x| x.rad <= limit) {
                return Ok(v);
            }
            work = work.max(bits) + 16 + to_f64(&l1).max(1.0).log2().ceil() as u32;
        }
        Err(Error::PrecisionUnreachable(bits))
    }

    /// Whether a vector satisfies the `F_R` invariance `x(conj sigma) = conj x(sigma)`.
    pub fn is_invariant(&self, x: &RealEmbeddingVector) -> bool {
        if x.len() != self.degree() {
            return false;
        }
        (0..self.degree()).all(|k| {
            if self.roots[k].is_real {
                x.values[k].im.is_zero()
            } else if self.roots[k].ball.im.is_positive() {
                let a = &x.values[k];
                let b = &x.values[k + 1];
                a.re == b.re && a.im == -b.im.clone() && a.rad == b.rad
            } else {
                true
            }
        })
    }

    /// Build an `F_R` point from `r1` real values and `r2` values for the
    /// embeddings with positive imaginary part of the generator.
    pub fn real_point(&self, reals: &[Rat], complexes: &[(Rat, Rat)]) -> Result<RealEmbeddingVector> {
        let (r1, r2) = self.signature;
        if reals.len() != r1 || complexes.len() != r2 {
            return Err(Error::Dimension(format!("expected {r1} real and {r2} complex values")));
        }
        let mut v = Vec::with_capacity(self.degree());
        v.extend(reals.iter().map(|x| CBall::real(x.clone())));
        for (re, im) in complexes {
            let b = CBall::exact(re.clone(), im.clone());
            v.push(b.conj().conj());
            v.push(b.conj());
        }
        Ok(RealEmbeddingVector::new(v))
    }

    /// Whether `k` is an embedding slot with a real image.
    pub fn is_real_embedding(&self, k: usize) -> bool {
        self.roots[k].is_real
    }

    // ---- ideals ----

    /// Ideal with the given Z-basis; validated for rank and O_F-closure.
    pub fn ideal_from_z_basis(&self, basis: &[FieldElement]) -> Result<FractionalIdeal> {
        let d = self.degree();
        if basis.len() != d || basis.iter().any(|b| b.0.len() != d) {
            return Err(Error::InvalidIdeal(format!("need {d} basis vectors of length {d}")));
        }
        let ideal = self.normalize_lattice(basis.iter().map(|b| b.0.clone()).collect())?;
        if ideal.basis.len() != d {
            return Err(Error::InvalidIdeal("basis is not of full rank".into()));
        }
        for b in &ideal.basis {
            for i in 0..d {
                let p = self.mul(b, &self.basis_element(i));
                if !ideal.contains(&p) {
                    return Err(Error::InvalidIdeal("Z-module is not closed under multiplication by O_F".into()));
                }
            }
        }
        Ok(ideal)
    }

    /// The O_F-module generated by `gens`.
    pub fn ideal_from_generators(&self, gens: &[FieldElement]) -> Result<FractionalIdeal> {
        if gens.iter().all(|g| g.is_zero()) {
            return Err(Error::InvalidIdeal("zero ideal".into()));
        }
        let mut rows = vec![];
        for g in gens {
            for i in 0..self.degree() {
                rows.push(self.mul(g, &self.basis_element(i)).0);
            }
        }
        self.normalize_lattice(rows)
    }

    pub fn principal_ideal(&self, a: &FieldElement) -> Result<FractionalIdeal> {
        self.ideal_from_generators(std::slice::from_ref(a))
    }

    pub fn unit_ideal(&self) -> FractionalIdeal {
        self.principal_ideal(&self.one()).expect("O_F is an ideal")
    }

    pub fn ideal_mul(&self, a: &FractionalIdeal, b: &FractionalIdeal) -> FractionalIdeal {
        let mut rows = vec![];
        for x in &a.basis {
            for y in &b.basis {
                rows.push(self.mul(x, y).0);
            }
        }
        self.normalize_lattice(rows).expect("product of nonzero ideals is nonzero")
    }

    fn normalize_lattice(&self, rows: RatMatrix) -> Result<FractionalIdeal> {
        let d = self.degree();
        let (den, ints) = clear_denominators(&rows);
        let h = hermite_rows(&ints, d);
        if h.len() != d {
            return Err(Error::InvalidIdeal("generators do not span a full-rank lattice".into()));
        }
        let den = Rat::from_integer(den);
        let basis: Vec<FieldElement> =
            h.iter().map(|r| FieldElement(r.iter().map(|x| Rat::from_integer(x.clone()) / &den).collect())).collect();
        let norm = determinant(&basis.iter().map(|b| b.0.clone()).collect()).abs();
        Ok(FractionalIdeal { basis, norm })
    }

    /// All integral ideals of norm at most `max_norm`, via Dedekind-Kummer
    /// factorisation. Requires the integral basis to span `Z[theta]`.
    pub fn integral_ideals_up_to(&self, max_norm: u64) -> Result<Vec<FractionalIdeal>> {
        let d = self.degree();
        let monogenic = self.basis_power.iter().flatten().all(is_integral) && determinant(&self.basis_power).abs().is_one();
        if !monogenic {
            return Err(Error::Domain("ideal enumeration needs a monogenic integral basis".into()));
        }
        let f: Vec<i64> = self.min_poly.0.iter().map(|c| c.to_integer().to_i64().unwrap()).collect();
        let mut primes: Vec<(u64, FractionalIdeal)> = vec![];
        for p in (2..=max_norm).filter(|&p| is_prime(p)) {
            for (g, _mult) in factor_mod_p(&f, p, max_norm) {
                let deg = g.len() - 1;
                let norm = p.pow(deg as u32);
                let gen = self.from_power_coeffs(&g.iter().map(|&c| rat(c as i64)).collect::<Vec<_>>());
                let ideal = self.ideal_from_generators(&[self.from_int(p as i64), gen])?;
                debug_assert_eq!(ideal.norm, rat(norm as i64));
                primes.push((norm, ideal));
            }
        }
        let mut out = vec![self.unit_ideal()];
        fn extend(
            field: &NumberField,
            primes: &[(u64, FractionalIdeal)],
            start: usize,
            cur: &FractionalIdeal,
            cur_norm: u64,
            max: u64,
            out: &mut Vec<FractionalIdeal>,
        ) {
            for i in start..primes.len() {
                let (pn, p) = &primes[i];
                if cur_norm * pn > max {
                    continue;
                }
                let next = field.ideal_mul(cur, p);
                out.push(next.clone());
                extend(field, primes, i, &next, cur_norm * pn, max, out);
            }
        }
        let unit = self.unit_ideal();
        extend(self, &primes, 0, &unit, 1, max_norm, &mut out);
        debug_assert!(out.iter().all(|i| i.basis.len() == d));
        Ok(out)
    }
}

fn embed_basis(polys: &[Poly], roots: &[IsolatedRoot], bits: u32) -> Vec<Vec<CBall>> {
    roots.iter().map(|r| polys.iter().map(|p| p.eval_ball(&r.ball).round(bits + 8)).collect()).collect()
}

fn embed_with(table: &[Vec<CBall>], a: &FieldElement, bits: u32) -> RealEmbeddingVector {
    let values = table
        .iter()
        .map(|row| row.iter().zip(&a.0).filter(|(_, c)| !c.is_zero()).fold(CBall::zero(), |acc, (e, c)| acc.add(&e.scale(c))).round(bits))
        .collect();
    RealEmbeddingVector::new(values)
}

/// Rational polynomial `g` of degree `< d` with `g(z_k) = conj(z_k)`, found
/// in floating point and rounded to small-denominator rationals.
fn conjugation_polynomial(f: &Poly, roots: &[IsolatedRoot]) -> Option<Poly> {
    let d = f.degree();
    let z: Vec<(f64, f64)> = roots.iter().map(|r| r.ball.to_f64()).collect();
    // complex Vandermonde system V c = conj(z)
    let mut a: Vec<Vec<(f64, f64)>> = z
        .iter()
        .map(|&zk| {
            let mut row = Vec::with_capacity(d + 1);
            let mut p = (1.0, 0.0);
            for _ in 0..d {
                row.push(p);
                p = (p.0 * zk.0 - p.1 * zk.1, p.0 * zk.1 + p.1 * zk.0);
            }
            row.push((zk.0, -zk.1));
            row
        })
        .collect();
    let cmul = |a: (f64, f64), b: (f64, f64)| (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0);
    let cdiv = |a: (f64, f64), b: (f64, f64)| {
        let m = b.0 * b.0 + b.1 * b.1;
        ((a.0 * b.0 + a.1 * b.1) / m, (a.1 * b.0 - a.0 * b.1) / m)
    };
    for c in 0..d {
        let p = (c..d).max_by(|&i, &j| {
            let ni = a[i][c].0.hypot(a[i][c].1);
            let nj = a[j][c].0.hypot(a[j][c].1);
            ni.partial_cmp(&nj).unwrap()
        })?;
        a.swap(p, c);
        let piv = a[c][c];
        if piv.0.hypot(piv.1) < 1e-300 {
            return None;
        }
        for r in 0..d {
            if r != c {
                let f = cdiv(a[r][c], piv);
                for k in c..=d {
                    let t = cmul(f, a[c][k]);
                    a[r][k] = (a[r][k].0 - t.0, a[r][k].1 - t.1);
                }
            }
        }
    }
    let coeffs: Option<Vec<Rat>> = (0..d)
        .map(|i| {
            let c = cdiv(a[i][d], a[i][i]);
            if c.1.abs() > 1e-6 {
                return None;
            }
            best_rational(c.0, 10_000)
        })
        .collect();
    coeffs.map(Poly::new)
}

/// Continued-fraction approximation with bounded denominator, accepted only
/// when it reproduces `x` to about 1e-7.
fn best_rational(x: f64, max_den: i64) -> Option<Rat> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i64, 1i64);
    let (mut k0, mut k1) = (1i64, 0i64);
    let mut v = x;
    for _ in 0..40 {
        let a = v.floor();
        if a.abs() > 1e12 {
            break;
        }
        let a = a as i64;
        let h2 = a.checked_mul(h1)?.checked_add(h0)?;
        let k2 = a.checked_mul(k1)?.checked_add(k0)?;
        if k2 > max_den {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = v - a as f64;
        if frac.abs() < 1e-12 || ((h1 as f64 / k1 as f64) - x).abs() < 1e-12 {
            break;
        }
        v = 1.0 / frac;
    }
    if k1 == 0 || ((h1 as f64 / k1 as f64) - x).abs() > 1e-7 {
        return None;
    }
    Some(Rat::new(BigInt::from(h1), BigInt::from(k1)))
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|k| k * k <= n).all(|k| !n.is_multiple_of(k))
}

/// Monic polynomials over F_p, coefficients constant term first.
fn poly_divides_mod_p(f: &[i64], g: &[u64], p: u64) -> Option<Vec<i64>> {
    let p = p as i64;
    let mut r: Vec<i64> = f.iter().map(|&c| c.rem_euclid(p)).collect();
    let dg = g.len() - 1;
    if r.len() < g.len() {
        return None;
    }
    let mut q = vec![0i64; r.len() - dg];
    for k in (dg..r.len()).rev() {
        let c = r[k].rem_euclid(p);
        if c == 0 {
            continue;
        }
        q[k - dg] = c;
        for (j, &gc) in g.iter().enumerate() {
            r[k - dg + j] = (r[k - dg + j] - c * gc as i64).rem_euclid(p);
        }
    }
    if r[..dg].iter().all(|&c| c.rem_euclid(p) == 0) {
        Some(q)
    } else {
        None
    }
}

fn monic_polys(p: u64, deg: usize) -> impl Iterator<Item = Vec<u64>> {
    let count = p.pow(deg as u32);
    (0..count).map(move |mut n| {
        let mut c = Vec::with_capacity(deg + 1);
        for _ in 0..deg {
            c.push(n % p);
            n /= p;
        }
        c.push(1);
        c
    })
}

fn is_irreducible_mod_p(g: &[u64], p: u64) -> bool {
    let deg = g.len() - 1;
    let gi: Vec<i64> = g.iter().map(|&c| c as i64).collect();
    (1..=deg / 2).all(|k| monic_polys(p, k).all(|h| poly_divides_mod_p(&gi, &h, p).is_none()))
}

/// Irreducible monic factors of `f mod p` with `p^deg <= max_norm`, with
/// their multiplicities.
fn factor_mod_p(f: &[i64], p: u64, max_norm: u64) -> Vec<(Vec<u64>, usize)> {
    let n = f.len() - 1;
    let mut out = vec![];
    for deg in 1..=n {
        if p.checked_pow(deg as u32).is_none_or(|q| q > max_norm) {
            break;
        }
        for g in monic_polys(p, deg) {
            if !is_irreducible_mod_p(&g, p) {
                continue;
            }
            let mut rest = f.to_vec();
            let mut mult = 0;
            while let Some(q) = poly_divides_mod_p(&rest, &g, p) {
                mult += 1;
                rest = q;
                if rest.len() < g.len() {
                    break;
                }
            }
            if mult > 0 {
                out.push((g, mult));
            }
        }
    }
    out
}

// ---- presets and field description files ----

pub const PRESETS: &[&str] = &["rational", "gaussian", "eisenstein", "real_quad_2", "real_quad_5", "cyclotomic_5"];

/// Names of fields with class number one, for which every rank-one module is free.
pub const CLASS_NUMBER_ONE: &[&str] = &["rational", "gaussian", "eisenstein", "real_quad_2", "real_quad_5"];

pub fn preset(name: &str, config: Config) -> Result<NumberField> {
    let (poly, d): (&[i64], usize) = match name {
        "rational" => (&[-1, 1], 1),
        "gaussian" => (&[1, 0, 1], 2),
        "eisenstein" => (&[1, -1, 1], 2),
        "real_quad_2" => (&[-2, 0, 1], 2),
        "real_quad_5" => (&[-1, -1, 1], 2),
        "cyclotomic_5" => (&[1, 1, 1, 1, 1], 4),
        _ => return Err(Error::Parse(format!("unknown preset `{name}` (known: {})", PRESETS.join(", ")))),
    };
    let basis: Vec<Vec<Rat>> = (0..d).map(|i| (0..d).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect();
    NumberField::new(name, Poly::from_ints(poly), &basis, config)
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RatRepr {
    Int(i64),
    Text(String),
}

impl RatRepr {
    fn to_rat(&self) -> Result<Rat> {
        match self {
            RatRepr::Int(n) => Ok(rat(*n)),
            RatRepr::Text(s) => parse_rat(s),
        }
    }
}

#[derive(Deserialize)]
struct FieldDescription {
    name: Option<String>,
    min_poly: Vec<i64>,
    integral_basis: Vec<Vec<RatRepr>>,
}

/// Parse a field description (JSON, or TOML when `toml` is set).
pub fn parse_field_description(text: &str, toml_syntax: bool, config: Config) -> Result<NumberField> {
    let desc: FieldDescription = if toml_syntax {
        toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?
    } else {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?
    };
    let basis: Vec<Vec<Rat>> =
        desc.integral_basis.iter().map(|v| v.iter().map(RatRepr::to_rat).collect::<Result<_>>()).collect::<Result<_>>()?;
    NumberField::new(desc.name.as_deref().unwrap_or("custom"), Poly::from_ints(&desc.min_poly), &basis, config)
}

pub fn load_field_file(path: &Path, config: Config) -> Result<NumberField> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let is_toml = path.extension().is_some_and(|e| e == "toml");
    parse_field_description(&text, is_toml, config)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn field(name: &str) -> NumberField {
        preset(name, Config::default()).unwrap()
    }

    #[test]
    fn gaussian_invariants() {
        let f = field("gaussian");
        assert_eq!(f.degree(), 2);
        assert_eq!(f.signature(), (0, 1));
        assert_eq!(*f.discriminant(), BigInt::from(-4));
        assert!(f.is_conjugation_closed());
    }

    #[test]
    fn rational_field() {
        let f = field("rational");
        assert_eq!(f.signature(), (1, 0));
        assert_eq!(*f.discriminant(), BigInt::from(1));
        assert_eq!(f.trace(&f.one()), rat(1));
    }

    #[test]
    fn sqrt2_discriminant() {
        let f = field("real_quad_2");
        assert_eq!(f.signature(), (2, 0));
        assert_eq!(*f.discriminant(), BigInt::from(8));
        let x = FieldElement::from_ints(&[3, 1]);
        assert_eq!(f.trace(&x), rat(6));
        assert_eq!(f.conjugate(&FieldElement::from_ints(&[0, 1])).unwrap(), FieldElement::from_ints(&[0, 1]));
    }

    #[test]
    fn eisenstein_conjugation_and_norm() {
        let f = field("eisenstein");
        assert_eq!(*f.discriminant(), BigInt::from(-3));
        let w = FieldElement::from_ints(&[0, 1]);
        assert_eq!(f.conjugate(&w).unwrap(), FieldElement::from_ints(&[1, -1]));
        assert_eq!(f.norm_abs(&w), rat(1));
    }

    #[test]
    fn cyclotomic_5_discriminant() {
        let f = field("cyclotomic_5");
        assert_eq!(f.signature(), (0, 2));
        assert_eq!(*f.discriminant(), BigInt::from(125));
        assert!(f.is_conjugation_closed());
        let z = FieldElement::from_ints(&[0, 1, 0, 0]);
        // conj(zeta) = zeta^4 = -1 - zeta - zeta^2 - zeta^3
        assert_eq!(f.conjugate(&z).unwrap(), FieldElement::from_ints(&[-1, -1, -1, -1]));
    }

    #[test]
    fn rejects_bad_input() {
        let c = Config::default();
        let id = |d: usize| -> Vec<Vec<Rat>> { (0..d).map(|i| (0..d).map(|j| if i == j { rat(1) } else { rat(0) }).collect()).collect() };
        assert_eq!(NumberField::new("x", Poly::from_ints(&[1, 0, 2]), &id(2), c).unwrap_err(), Error::NonMonic);
        assert_eq!(NumberField::new("x", Poly::from_ints(&[1, 2, 1]), &id(2), c).unwrap_err(), Error::NotSquarefree);
        // {1, x/2} is not a ring for x^2 + 1
        let basis = vec![vec![rat(1), rat(0)], vec![rat(0), ratio(1, 2)]];
        assert!(matches!(NumberField::new("x", Poly::from_ints(&[1, 0, 1]), &basis, c), Err(Error::NotARing(_))));
    }

    #[test]
    fn nonmonogenic_basis_for_sqrt_minus_3() {
        // x^2 + 3 with basis {1, (1 + x)/2}
        let basis = vec![vec![rat(1)], vec![ratio(1, 2), ratio(1, 2)]];
        let f = NumberField::new("q3", Poly::from_ints(&[3, 0, 1]), &basis, Config::default()).unwrap();
        assert_eq!(*f.discriminant(), BigInt::from(-3));
        assert!(f.is_conjugation_closed());
    }

    #[test]
    fn ideal_norms() {
        let f = field("gaussian");
        assert_eq!(*f.unit_ideal().norm(), rat(1));
        let p = f.principal_ideal(&FieldElement::from_ints(&[1, 1])).unwrap();
        assert_eq!(*p.norm(), rat(2));
        let three = f.principal_ideal(&f.from_int(3)).unwrap();
        assert_eq!(*three.norm(), rat(9));
        let inv = f.principal_ideal(&f.inverse(&FieldElement::from_ints(&[1, 1])).unwrap()).unwrap();
        assert_eq!(*inv.norm(), ratio(1, 2));
        assert!(!inv.is_integral());
    }

    #[test]
    fn ideal_closure_is_checked() {
        let f = field("gaussian");
        // Z-span of {1, 2i} is an order, not an ideal
        let bad = f.ideal_from_z_basis(&[FieldElement::from_ints(&[1, 0]), FieldElement::from_ints(&[0, 2])]);
        assert!(bad.is_err());
    }

    #[test]
    fn ideals_of_gaussian_integers_up_to_10() {
        let f = field("gaussian");
        let ideals = f.integral_ideals_up_to(10).unwrap();
        // number of ideals of norm n in Z[i] is sum over d | n of chi_4(d)
        let expect = [1, 1, 0, 1, 2, 0, 0, 1, 1, 2];
        for (n, e) in expect.iter().enumerate() {
            let c = ideals.iter().filter(|i| *i.norm() == rat(n as i64 + 1)).count();
            assert_eq!(c, *e, "norm {}", n + 1);
        }
    }

    #[test]
    fn embed_sqrt2() {
        let f = field("real_quad_2");
        let v = f.embed(&FieldElement::from_ints(&[0, 1]), 200).unwrap();
        let (hi, lo) = (v.values[1].to_f64().0, v.values[0].to_f64().0);
        assert!((hi - 2f64.sqrt()).abs() < 1e-15 && (lo + 2f64.sqrt()).abs() < 1e-15);
        assert!(v.radius() <= crate::rational::pow2(-200));
    }

    #[test]
    fn parses_toml_description() {
        let text = "name = \"g\"\nmin_poly = [1, 0, 1]\nintegral_basis = [[1, 0], [0, 1]]\n";
        let f = parse_field_description(text, true, Config::default()).unwrap();
        assert_eq!(*f.discriminant(), BigInt::from(-4));
        let json = r#"{"min_poly": [3, 0, 1], "integral_basis": [[1], ["1/2", "1/2"]]}"#;
        assert_eq!(*parse_field_description(json, false, Config::default()).unwrap().discriminant(), BigInt::from(-3));
    }
}
