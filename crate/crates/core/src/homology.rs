//! Integer linear algebra for torsion counting: Smith normal form, cokernel
//! torsion, Gabber's column-norm bound, `card_l` of finite abelian groups,
//! and homology of integer chain complexes.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::bounds::{complex_torsion_bound, BigBound};
use crate::error::{Error, Result};
use crate::rational::ratio;

/// A dense integer matrix with explicit shape, so that `0 x n` and `n x 0`
/// are representable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn new(entries: Vec<Vec<BigInt>>) -> Result<Self> {
        let cols = entries.first().map_or(0, |r| r.len());
        if entries.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("rows have different lengths".into()));
        }
        Ok(IntMatrix { rows: entries.len(), cols, entries })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        IntMatrix::new(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, entries: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zeros(n, n);
        for i in 0..n {
            m.entries[i][i] = BigInt::one();
        }
        m
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = IntMatrix::zeros(rows, cols);
        for (i, x) in diag.iter().enumerate().take(rows.min(cols)) {
            m.entries[i][i] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for (i, row) in self.entries.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                t.entries[j][i] = x.clone();
            }
        }
        t
    }

    pub fn mul(&self, o: &IntMatrix) -> Result<IntMatrix> {
        if self.cols != o.rows {
            return Err(Error::Dimension(format!("cannot multiply {}x{} by {}x{}", self.rows, self.cols, o.rows, o.cols)));
        }
        let mut out = IntMatrix::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.entries[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    out.entries[i][j] += a * &o.entries[k][j];
                }
            }
        }
        Ok(out)
    }

    /// Squared Euclidean norm of column `j`.
    pub fn column_norm2(&self, j: usize) -> BigUint {
        self.entries.iter().map(|r| (&r[j] * &r[j]).to_biguint().unwrap()).sum()
    }

    /// Largest squared column norm, zero for a matrix without columns.
    pub fn max_column_norm2(&self) -> BigUint {
        (0..self.cols).map(|j| self.column_norm2(j)).max().unwrap_or_default()
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        self.entries.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in &mut self.entries {
            r.swap(i, j);
        }
    }

    /// `row_i += q row_j`.
    fn add_row(&mut self, i: usize, j: usize, q: &BigInt) {
        for c in 0..self.cols {
            let t = q * &self.entries[j][c];
            self.entries[i][c] += t;
        }
    }

    /// `col_i += q col_j`.
    fn add_col(&mut self, i: usize, j: usize, q: &BigInt) {
        for r in &mut self.entries {
            let t = q * &r[j];
            r[i] += t;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.entries[i] {
            *x = -&*x;
        }
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.entries.iter().map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))).collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Accepts a JSON-style grid `[[1, 2], [3, 4]]` or rows separated by `;` or
/// newlines with entries separated by spaces or commas. `0x3` and `3x0`
/// denote empty shapes.
impl FromStr for IntMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((r, c)) = s.split_once('x') {
            if let (Ok(r), Ok(c)) = (r.trim().parse(), c.trim().parse()) {
                return Ok(IntMatrix::zeros(r, c));
            }
        }
        let bad = |t: &str| Error::Parse(format!("bad matrix entry `{t}`"));
        let rows: Vec<Vec<BigInt>> = if s.starts_with('[') {
            let v: Vec<Vec<serde_json::Value>> = serde_json::from_str(s).map_err(|e| Error::Parse(format!("matrix: {e}")))?;
            v.into_iter()
                .map(|r| {
                    r.into_iter()
                        .map(|x| match x {
                            serde_json::Value::Number(n) => n.to_string().parse().map_err(|_| bad(&n.to_string())),
                            serde_json::Value::String(t) => t.trim().parse().map_err(|_| bad(&t)),
                            other => Err(bad(&other.to_string())),
                        })
                        .collect()
                })
                .collect::<Result<_>>()?
        } else {
            s.split([';', '\n'])
                .map(str::trim)
                .filter(|r| !r.is_empty())
                .map(|r| r.split([',', ' ', '\t']).filter(|t| !t.is_empty()).map(|t| t.parse().map_err(|_| bad(t))).collect())
                .collect::<Result<_>>()?
        };
        IntMatrix::new(rows)
    }
}

/// Invariant factors `d_1 | d_2 | ... | d_r` (all positive, units included)
/// and the free rank of a finitely generated abelian group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ElementaryDivisors {
    pub divisors: Vec<BigUint>,
    pub free_rank: usize,
}

impl ElementaryDivisors {
    /// The finite group `Z/o_1 + ... + Z/o_k`, brought into invariant-factor
    /// form.
    pub fn from_cyclic_orders(orders: &[u64]) -> Result<Self> {
        if orders.contains(&0) {
            return Err(Error::Domain("cyclic orders must be positive".into()));
        }
        let diag: Vec<BigInt> = orders.iter().map(|&o| BigInt::from(o)).collect();
        let n = diag.len();
        let snf = smith_normal_form(&IntMatrix::diagonal(n, n, &diag));
        Ok(snf.divisors)
    }

    /// `|A_tors|`.
    pub fn torsion_order(&self) -> BigUint {
        self.divisors.iter().product()
    }

    /// Invariant factors greater than one.
    pub fn torsion_factors(&self) -> Vec<BigUint> {
        self.divisors.iter().filter(|d| !d.is_one()).cloned().collect()
    }
}

impl fmt::Display for ElementaryDivisors {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.torsion_factors().iter().map(|d| format!("Z/{d}")).collect();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".into() } else { format!("Z^{}", self.free_rank) });
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `U M V = D` with `U`, `V` unimodular and `D` diagonal with a divisibility
/// chain. `v_inv` is `V^-1`. `divisors` describes the cokernel of `M`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
    pub divisors: ElementaryDivisors,
}

fn smallest_nonzero<'a>(it: impl Iterator<Item = ((usize, usize), &'a BigInt)>) -> Option<(usize, usize)> {
    it.filter(|(_, x)| !x.is_zero()).min_by(|a, b| a.1.abs().cmp(&b.1.abs())).map(|(p, _)| p)
}

/// Smith normal form by smallest-entry pivoting with gcd reduction.
pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut u = IntMatrix::identity(r);
    let mut v = IntMatrix::identity(c);
    let mut v_inv = IntMatrix::identity(c);
    let swap_rows = |a: &mut IntMatrix, u: &mut IntMatrix, i, j| {
        a.swap_rows(i, j);
        u.swap_rows(i, j);
    };
    let swap_cols = |a: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, i, j| {
        a.swap_cols(i, j);
        v.swap_cols(i, j);
        vi.swap_rows(i, j);
    };
    let mut t = 0;
    while t < r.min(c) {
        let cells = (t..r).flat_map(|i| (t..c).map(move |j| (i, j)));
        let Some((pi, pj)) = smallest_nonzero(cells.clone().map(|(i, j)| ((i, j), &a.entries[i][j]))) else {
            break;
        };
        swap_rows(&mut a, &mut u, t, pi);
        swap_cols(&mut a, &mut v, &mut v_inv, t, pj);
        loop {
            let p = a.entries[t][t].clone();
            for i in t + 1..r {
                if !a.entries[i][t].is_zero() {
                    let q = -a.entries[i][t].div_floor(&p);
                    a.add_row(i, t, &q);
                    u.add_row(i, t, &q);
                }
            }
            for j in t + 1..c {
                if !a.entries[t][j].is_zero() {
                    let q = -a.entries[t][j].div_floor(&p);
                    a.add_col(j, t, &q);
                    v.add_col(j, t, &q);
                    // V^-1 <- E^-1 V^-1 with E = I + q e_(t,j)
                    v_inv.add_row(t, j, &-&q);
                }
            }
            let col = (t + 1..r).map(|i| ((i, t), &a.entries[i][t]));
            let row = (t + 1..c).map(|j| ((t, j), &a.entries[t][j]));
            if let Some((i, j)) = smallest_nonzero(col.chain(row)) {
                if j == t {
                    swap_rows(&mut a, &mut u, t, i);
                } else {
                    swap_cols(&mut a, &mut v, &mut v_inv, t, j);
                }
                continue;
            }
            let p = a.entries[t][t].clone();
            let bad = (t + 1..r).find(|&i| (t + 1..c).any(|j| !a.entries[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    a.add_row(t, i, &BigInt::one());
                    u.add_row(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if a.entries[t][t].is_negative() {
            a.negate_row(t);
            u.negate_row(t);
        }
        t += 1;
    }
    let divisors = (0..t).map(|i| a.entries[i][i].to_biguint().unwrap()).collect();
    Smith { u, d: a, v, v_inv, rank: t, divisors: ElementaryDivisors { divisors, free_rank: r - t } }
}

/// `|coker(M)_tors|`, the product of the nonzero invariant factors.
pub fn cokernel_torsion(m: &IntMatrix) -> BigUint {
    smith_normal_form(m).divisors.torsion_order()
}

/// Gabber's bound `alpha^min(a, b)` for `M: Z^a -> Z^b` (a `b x a` matrix)
/// with `alpha` the largest column norm, checked against the exact torsion.
#[derive(Clone, Debug)]
pub struct GabberCheck {
    /// `alpha^2`, clamped below at 1 (zero columns do not matter).
    pub alpha2: BigUint,
    pub exponent: usize,
    pub bound: BigBound,
    pub torsion: BigUint,
    /// `torsion^2 <= (alpha^2)^exponent`, decided in integers.
    pub holds: bool,
    pub equality: bool,
}

pub fn gabber_bound(m: &IntMatrix) -> BigBound {
    gabber_parts(m).2
}

fn gabber_parts(m: &IntMatrix) -> (BigUint, usize, BigBound) {
    let alpha2 = m.max_column_norm2().max(BigUint::one());
    let k = m.rows.min(m.cols);
    let bound = BigBound::from_biguint(&alpha2).pow(&ratio(k as i64, 2));
    (alpha2, k, bound)
}

pub fn gabber_check(m: &IntMatrix) -> GabberCheck {
    let (alpha2, exponent, bound) = gabber_parts(m);
    let torsion = cokernel_torsion(m);
    let lhs = &torsion * &torsion;
    let rhs = alpha2.pow(exponent as u32);
    GabberCheck { holds: lhs <= rhs, equality: lhs == rhs, alpha2, exponent, bound, torsion }
}

/// `card_l(A) = |A / B|` where `B` is generated by the elements of order at
/// most `l`. Per cyclic factor `Z/d`, `B` is cyclic of order
/// `lcm { k : k | d, k <= l }`.
pub fn card_ell(a: &ElementaryDivisors, ell: u64) -> BigUint {
    a.divisors
        .iter()
        .map(|d| {
            let mut b = BigUint::one();
            let mut k = 1u64;
            while k <= ell && BigUint::from(k) <= *d {
                if (d % k).is_zero() {
                    b = b.lcm(&BigUint::from(k));
                }
                k += 1;
            }
            d / b
        })
        .product()
}

/// `card_l` by listing the group `Z/o_1 + ... + Z/o_k` and generating the
/// subgroup explicitly. Exponential in the group order.
pub fn card_ell_brute_force(orders: &[u64], ell: u64) -> Result<u64> {
    if orders.contains(&0) {
        return Err(Error::Domain("cyclic orders must be positive".into()));
    }
    let size: u64 = orders.iter().product();
    if size > 100_000 {
        return Err(Error::CapExceeded(format!("group of order {size}")));
    }
    let decode = |mut x: u64| -> Vec<u64> {
        orders
            .iter()
            .map(|&o| {
                let c = x % o;
                x /= o;
                c
            })
            .collect()
    };
    let encode = |v: &[u64]| -> u64 { v.iter().zip(orders).rev().fold(0, |acc, (&c, &o)| acc * o + c) };
    let add = |x: u64, y: u64| -> u64 {
        let s: Vec<u64> = decode(x).iter().zip(decode(y)).zip(orders).map(|((a, b), o)| (a + b) % o).collect();
        encode(&s)
    };
    let order = |x: u64| -> u64 { decode(x).iter().zip(orders).fold(1, |acc, (&c, &o)| acc.lcm(&(o / c.gcd(&o)))) };
    let mut sub: HashSet<u64> = HashSet::from([0]);
    for g in (0..size).filter(|&g| order(g) <= ell) {
        if sub.contains(&g) {
            continue;
        }
        let mut next = sub.clone();
        let mut step = g;
        while step != 0 {
            for &s in &sub {
                next.insert(add(s, step));
            }
            step = add(step, g);
        }
        sub = next;
    }
    Ok(size / sub.len() as u64)
}

fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = vec![];
    let mut p = 2;
    while p * p <= n {
        let mut k = 0;
        while n.is_multiple_of(p) {
            n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = vec![];
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every abelian group of order `n` up to isomorphism, as lists of
/// prime-power cyclic orders.
pub fn abelian_groups_of_order(n: u64) -> Vec<Vec<u64>> {
    let mut groups: Vec<Vec<u64>> = vec![vec![]];
    for (p, e) in factor_u64(n) {
        let local: Vec<Vec<u64>> = partitions(e, e).into_iter().map(|part| part.into_iter().map(|k| p.pow(k)).collect()).collect();
        groups = groups
            .iter()
            .flat_map(|g| {
                local.iter().map(move |l| {
                    let mut h = g.clone();
                    h.extend(l);
                    h
                })
            })
            .collect();
    }
    groups
}

/// A chain complex `... -> C_2 -> C_1 -> C_0 -> 0` given by its boundary
/// maps; `boundaries[k]` is `d_(k+1): C_(k+1) -> C_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainComplex {
    boundaries: Vec<IntMatrix>,
}

/// `H_k = Z^betti + torsion`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homology {
    pub degree: usize,
    pub betti: usize,
    pub torsion: ElementaryDivisors,
}

impl Homology {
    pub fn torsion_order(&self) -> BigUint {
        self.torsion.torsion_order()
    }
}

/// Torsion of `H_k` against `beta^(min(alpha_(k+1), alpha_k) / 2)` with
/// `alpha` the ranks and `beta` the largest squared column norm of
/// `d_(k+1)`.
#[derive(Clone, Debug)]
pub struct ComplexBoundCheck {
    pub degree: usize,
    pub torsion: BigUint,
    pub ranks: Vec<u64>,
    pub beta: u64,
    pub bound: BigBound,
    pub holds: bool,
}

impl ChainComplex {
    pub fn new(boundaries: Vec<IntMatrix>) -> Result<Self> {
        for (k, w) in boundaries.windows(2).enumerate() {
            if w[0].cols != w[1].rows {
                return Err(Error::Dimension(format!("d_{} has {} columns but d_{} has {} rows", k + 1, w[0].cols, k + 2, w[1].rows)));
            }
            if !w[0].mul(&w[1])?.is_zero() {
                return Err(Error::BoundaryViolation(k + 1, k + 2));
            }
        }
        Ok(ChainComplex { boundaries })
    }

    /// Ranks of `C_0, C_1, ...`.
    pub fn ranks(&self) -> Vec<usize> {
        match self.boundaries.first() {
            None => vec![],
            Some(b) => std::iter::once(b.rows).chain(self.boundaries.iter().map(|b| b.cols)).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.ranks().len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundaries.is_empty()
    }

    pub fn boundaries(&self) -> &[IntMatrix] {
        &self.boundaries
    }

    /// `d_k: C_k -> C_(k-1)`, with `d_0 = 0` and `d_k = 0` past the top.
    fn boundary(&self, k: usize) -> IntMatrix {
        let ranks = self.ranks();
        let rank = |i: usize| ranks.get(i).copied().unwrap_or(0);
        match k {
            0 => IntMatrix::zeros(0, rank(0)),
            _ => self.boundaries.get(k - 1).cloned().unwrap_or_else(|| IntMatrix::zeros(rank(k - 1), rank(k))),
        }
    }

    /// `H_k = ker d_k / im d_(k+1)`, computed in a basis of `ker d_k`.
    pub fn homology(&self, k: usize) -> Homology {
        let dk = self.boundary(k);
        let dk1 = self.boundary(k + 1);
        let n = dk.cols;
        let s = smith_normal_form(&dk);
        // last n - rank columns of V span ker d_k; V^-1 d_(k+1) has zero
        // top rows because im d_(k+1) lies in the kernel
        let moved = s.v_inv.mul(&dk1).expect("shapes agree");
        debug_assert!(moved.entries[..s.rank].iter().flatten().all(|x| x.is_zero()));
        let rel = IntMatrix { rows: n - s.rank, cols: dk1.cols, entries: moved.entries[s.rank..].to_vec() };
        let h = smith_normal_form(&rel);
        let torsion = ElementaryDivisors { divisors: h.divisors.torsion_factors(), free_rank: 0 };
        Homology { degree: k, betti: h.divisors.free_rank, torsion }
    }

    pub fn homology_torsion(&self, k: usize) -> BigUint {
        self.homology(k).torsion_order()
    }

    pub fn torsion_bound_check(&self, k: usize) -> Result<ComplexBoundCheck> {
        let ranks: Vec<u64> = self.ranks().iter().map(|&r| r as u64).collect();
        let beta = self.boundary(k + 1).max_column_norm2().max(BigUint::one());
        let beta = beta.to_u64().ok_or_else(|| Error::Domain("column norms too large".into()))?;
        let mut alphas = ranks.clone();
        alphas.resize(alphas.len().max(k + 2), 0);
        let bound = complex_torsion_bound(&alphas, beta, k)?;
        let torsion = self.homology_torsion(k);
        let e = alphas[k].min(alphas[k + 1]) as u32;
        let holds = &torsion * &torsion <= BigUint::from(beta).pow(e);
        Ok(ComplexBoundCheck { degree: k, torsion, ranks, beta, bound, holds })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64(rows).unwrap()
    }

    fn divs(s: &Smith) -> Vec<u64> {
        s.divisors.divisors.iter().map(|d| d.to_u64().unwrap()).collect()
    }

    /// `|det|` of a square integer matrix by cofactor expansion.
    fn abs_det(a: &IntMatrix) -> BigInt {
        fn det(rows: &[Vec<BigInt>], cols: &[usize]) -> BigInt {
            if cols.is_empty() {
                return BigInt::one();
            }
            let mut acc = BigInt::zero();
            for (idx, &c) in cols.iter().enumerate() {
                let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
                let term = &rows[0][c] * det(&rows[1..], &rest);
                if idx % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
        det(&a.entries, &(0..a.cols).collect::<Vec<_>>()).abs()
    }

    #[test]
    fn smith_examples() {
        assert_eq!(divs(&smith_normal_form(&m(&[&[2, 0], &[0, 3]]))), [1, 6]);
        assert_eq!(divs(&smith_normal_form(&m(&[&[2, 1], &[0, 2]]))), [1, 4]);
        assert_eq!(divs(&smith_normal_form(&IntMatrix::identity(3))), [1, 1, 1]);
        let z = smith_normal_form(&IntMatrix::zeros(2, 3));
        assert_eq!((z.rank, z.divisors.free_rank), (0, 2));
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel_torsion(&m(&[&[2, 0], &[0, 3]])), BigUint::from(6u32));
        assert_eq!(cokernel_torsion(&IntMatrix::zeros(2, 2)), BigUint::one());
        assert_eq!(cokernel_torsion(&m(&[&[2, 1], &[0, 2]])), BigUint::from(4u32));
        assert_eq!(smith_normal_form(&m(&[&[2], &[4]])).divisors.to_string(), "Z/2 + Z");
    }

    #[test]
    fn gabber_examples() {
        let g = gabber_check(&m(&[&[2, 0], &[0, 3]]));
        assert_eq!(g.bound, BigBound::from_int(9));
        assert!(g.holds && !g.equality);
        let g = gabber_check(&IntMatrix::identity(4));
        assert!(g.bound.is_one() && g.equality);
        let g = gabber_check(&m(&[&[2, 1], &[0, 2]]));
        assert_eq!((g.alpha2.to_u64(), g.bound.clone()), (Some(5), BigBound::from_int(5)));
        assert!(gabber_check(&m(&[&[3, 0], &[0, 3]])).equality);
        assert!(gabber_check(&IntMatrix::zeros(2, 2)).holds);
    }

    #[test]
    fn card_ell_examples() {
        let a = ElementaryDivisors::from_cyclic_orders(&[2, 8]).unwrap();
        assert_eq!(card_ell(&a, 3), BigUint::from(4u32));
        assert_eq!(card_ell_brute_force(&[2, 8], 3).unwrap(), 4);
        assert_eq!(card_ell(&a, 8), BigUint::one());
        let z4 = ElementaryDivisors::from_cyclic_orders(&[4]).unwrap();
        assert_eq!(card_ell(&z4, 5), BigUint::one());
        assert_eq!(card_ell(&z4, 1), BigUint::from(4u32));
        let z6 = ElementaryDivisors::from_cyclic_orders(&[6]).unwrap();
        // elements of order 2 and 3 generate Z/6
        assert_eq!(card_ell(&z6, 3), BigUint::one());
        assert_eq!(card_ell_brute_force(&[6], 3).unwrap(), 1);
    }

    #[test]
    fn groups_of_small_order() {
        assert_eq!(abelian_groups_of_order(8).len(), 3);
        assert_eq!(abelian_groups_of_order(72).len(), 6);
        assert_eq!(abelian_groups_of_order(1), vec![Vec::<u64>::new()]);
        let z2z2 = ElementaryDivisors::from_cyclic_orders(&[2, 2]).unwrap();
        assert_eq!(z2z2.torsion_factors().len(), 2);
    }

    #[test]
    fn homology_examples() {
        let cx = ChainComplex::new(vec![m(&[&[2]])]).unwrap();
        assert_eq!(cx.homology_torsion(0), BigUint::from(2u32));
        assert_eq!(cx.homology(1).betti, 0);
        let cx = ChainComplex::new(vec![m(&[&[0]])]).unwrap();
        let h0 = cx.homology(0);
        assert_eq!((h0.betti, h0.torsion_order()), (1, BigUint::one()));
        // 0 -> Z -> Z^2 -> Z -> 0 exact
        let cx = ChainComplex::new(vec![m(&[&[1, 1]]), m(&[&[1], &[-1]])]).unwrap();
        for k in 0..3 {
            let h = cx.homology(k);
            assert_eq!((h.betti, h.torsion_order()), (0, BigUint::one()), "degree {k}");
        }
        assert!(matches!(ChainComplex::new(vec![m(&[&[1, 1]]), m(&[&[1], &[1]])]), Err(Error::BoundaryViolation(1, 2))));
    }

    #[test]
    fn real_projective_plane() {
        // cellular chains of RP^2: Z -2-> Z -0-> Z
        let cx = ChainComplex::new(vec![m(&[&[0]]), m(&[&[2]])]).unwrap();
        assert_eq!(cx.homology(0).betti, 1);
        assert_eq!(cx.homology_torsion(1), BigUint::from(2u32));
        assert_eq!(cx.homology(2).betti, 0);
        let chk = cx.torsion_bound_check(1).unwrap();
        assert!(chk.holds);
        assert_eq!(chk.bound, BigBound::from_int(2));
    }

    #[test]
    fn parses_matrices() {
        assert_eq!("[[1, 2], [3, 4]]".parse::<IntMatrix>().unwrap(), m(&[&[1, 2], &[3, 4]]));
        assert_eq!("1 2; 3 4".parse::<IntMatrix>().unwrap(), m(&[&[1, 2], &[3, 4]]));
        assert_eq!("[[\"-5\"]]".parse::<IntMatrix>().unwrap(), m(&[&[-5]]));
        assert_eq!("0x3".parse::<IntMatrix>().unwrap().cols(), 3);
        assert!("1 2; 3".parse::<IntMatrix>().is_err());
        let a = m(&[&[1, -2], &[0, 7]]);
        assert_eq!(a.to_string().parse::<IntMatrix>().unwrap(), a);
    }

    fn small_matrix() -> impl Strategy<Value = IntMatrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-10i64..=10, c), r)
                .prop_map(|rows| IntMatrix::new(rows.into_iter().map(|r| r.into_iter().map(BigInt::from).collect()).collect()).unwrap())
        })
    }

    proptest! {
        #[test]
        fn smith_reconstructs(a in small_matrix()) {
            let s = smith_normal_form(&a);
            prop_assert_eq!(s.u.mul(&a).unwrap().mul(&s.v).unwrap(), s.d.clone());
            prop_assert_eq!(s.v.mul(&s.v_inv).unwrap(), IntMatrix::identity(a.cols()));
            prop_assert_eq!(abs_det(&s.u), BigInt::one());
            for w in s.divisors.divisors.windows(2) {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
        }

        #[test]
        fn gabber_never_fails(a in small_matrix()) {
            prop_assert!(gabber_check(&a).holds);
        }

        #[test]
        fn square_torsion_is_determinant(a in small_matrix()) {
            if a.rows() == a.cols() {
                let det = abs_det(&a);
                if !det.is_zero() {
                    prop_assert_eq!(BigInt::from(cokernel_torsion(&a)), det);
                }
            }
        }

        #[test]
        fn homology_torsion_is_cokernel_torsion(a in small_matrix()) {
            // d_1 = 0, d_2 = a: H_1 torsion equals coker(a) torsion
            let d1 = IntMatrix::zeros(1, a.rows());
            let cx = ChainComplex::new(vec![d1, a.clone()]).unwrap();
            prop_assert_eq!(cx.homology_torsion(1), cokernel_torsion(&a));
        }
    }
}
