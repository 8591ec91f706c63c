//! Exact Fincke-Pohst enumeration of integer points in ellipsoids
//! `(x - c)^T G (x - c) <= r`, with Schnorr-Euchner zigzag ordering.
//!
//! All arithmetic is over the rationals; the integer range at each level is
//! decided by exact comparison, so no point is lost or invented by rounding.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::{inverse, ldl, Ldl, RatMatrix};
use crate::rational::{round_nearest, Rat};

/// An integer coordinate vector together with its value `q(x - c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticePoint {
    pub coords: Vec<BigInt>,
    pub q: Rat,
}

/// What the visitor wants after seeing a leaf.
enum Radius {
    Keep,
    Shrink(Rat),
}

struct Search<'a> {
    ldl: &'a Ldl,
    center: &'a [Rat],
    x: Vec<BigInt>,
    budget: u64,
    nodes: u64,
    bound: Option<Rat>,
}

impl Search<'_> {
    fn within(&self, v: &Rat) -> bool {
        self.bound.as_ref().is_none_or(|b| v <= b)
    }

    fn run(&mut self, visit: &mut dyn FnMut(&[BigInt], &Rat) -> Radius) -> Result<()> {
        let n = self.x.len();
        if n == 0 {
            visit(&self.x, &Rat::zero());
            return Ok(());
        }
        self.level(n - 1, Rat::zero(), visit)
    }

    fn level(&mut self, i: usize, partial: Rat, visit: &mut dyn FnMut(&[BigInt], &Rat) -> Radius) -> Result<()> {
        let n = self.x.len();
        let mut t = self.center[i].clone();
        for j in i + 1..n {
            let mu = &self.ldl.mu[i][j];
            if !mu.is_zero() {
                t -= mu * (Rat::from_integer(self.x[j].clone()) - &self.center[j]);
            }
        }
        let diag = &self.ldl.diag[i];
        let start = round_nearest(&t);
        // zigzag outward from the nearest integer; each direction stops once
        // its term exceeds the remaining radius
        let mut up: Option<BigInt> = Some(start.clone());
        let mut down: Option<BigInt> = Some(&start - 1i32);
        loop {
            let cand_up = up.as_ref().map(|u| {
                let d = Rat::from_integer(u.clone()) - &t;
                &d * &d * diag
            });
            let cand_down = down.as_ref().map(|u| {
                let d = Rat::from_integer(u.clone()) - &t;
                &d * &d * diag
            });
            let pick_up = match (&cand_up, &cand_down) {
                (None, None) => break,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (Some(a), Some(b)) => a <= b,
            };
            let (xi, term) = if pick_up { (up.clone().unwrap(), cand_up.unwrap()) } else { (down.clone().unwrap(), cand_down.unwrap()) };
            let total = &partial + &term;
            if !self.within(&total) {
                if pick_up {
                    up = None;
                } else {
                    down = None;
                }
                continue;
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExceeded(self.budget));
            }
            self.x[i] = xi.clone();
            if i == 0 {
                if let Radius::Shrink(r) = visit(&self.x, &total) {
                    self.bound = Some(r);
                }
            } else {
                self.level(i - 1, total, visit)?;
            }
            if pick_up {
                up = Some(xi + 1);
            } else {
                down = Some(xi - 1);
            }
        }
        Ok(())
    }
}

fn decompose(g: &RatMatrix) -> Result<Ldl> {
    ldl(g).ok_or(Error::NotPositiveDefinite)
}

fn new_search<'a>(l: &'a Ldl, center: &'a [Rat], budget: u64, bound: Option<Rat>) -> Search<'a> {
    Search { ldl: l, center, x: vec![BigInt::zero(); center.len()], budget, nodes: 0, bound }
}

fn sort_points(pts: &mut [LatticePoint]) {
    pts.sort_by(|a, b| a.q.cmp(&b.q).then_with(|| a.coords.cmp(&b.coords)));
}

/// Every integer point with `(x - c)^T G (x - c) <= r2`, sorted by value and
/// then lexicographically. `center = None` means the origin.
pub fn points_within(g: &RatMatrix, center: Option<&[Rat]>, r2: &Rat, budget: u64) -> Result<Vec<LatticePoint>> {
    let l = decompose(g)?;
    let zero = vec![Rat::zero(); g.len()];
    let c = center.unwrap_or(&zero);
    let mut out = vec![];
    let mut s = new_search(&l, c, budget, Some(r2.clone()));
    s.run(&mut |x, q| {
        out.push(LatticePoint { coords: x.to_vec(), q: q.clone() });
        Radius::Keep
    })?;
    sort_points(&mut out);
    Ok(out)
}

/// Number of integer points with `x^T G x <= r2`, without storing them.
pub fn count_within(g: &RatMatrix, r2: &Rat, budget: u64) -> Result<u64> {
    let l = decompose(g)?;
    let zero = vec![Rat::zero(); g.len()];
    let mut count = 0u64;
    let mut s = new_search(&l, &zero, budget, Some(r2.clone()));
    s.run(&mut |_, _| {
        count += 1;
        Radius::Keep
    })?;
    Ok(count)
}

/// Minimum of `q(x - c)` over integer `x` and all minimizers, sorted
/// lexicographically.
pub fn closest(g: &RatMatrix, center: &[Rat], budget: u64) -> Result<(Rat, Vec<Vec<BigInt>>)> {
    let l = decompose(g)?;
    let mut best: Option<Rat> = None;
    let mut hits: Vec<Vec<BigInt>> = vec![];
    let mut s = new_search(&l, center, budget, None);
    s.run(&mut |x, q| {
        match &best {
            Some(b) if q > b => return Radius::Keep,
            Some(b) if q == b => hits.push(x.to_vec()),
            _ => {
                best = Some(q.clone());
                hits = vec![x.to_vec()];
            }
        }
        Radius::Shrink(q.clone())
    })?;
    hits.sort();
    Ok((best.expect("enumeration visits at least one point"), hits))
}

/// Minimum of `q` over nonzero integer vectors and all vectors attaining it
/// (closed under negation), sorted lexicographically.
pub fn shortest(g: &RatMatrix, budget: u64) -> Result<(Rat, Vec<Vec<BigInt>>)> {
    let l = decompose(g)?;
    let n = g.len();
    if n == 0 {
        return Err(Error::Dimension("empty lattice has no nonzero vectors".into()));
    }
    // a basis vector bounds the minimum from above
    let start = (0..n).map(|i| g[i][i].clone()).min().unwrap();
    let zero = vec![Rat::zero(); n];
    let mut best = start.clone();
    let mut hits: Vec<Vec<BigInt>> = vec![];
    let mut s = new_search(&l, &zero, budget, Some(start));
    s.run(&mut |x, q| {
        if q.is_zero() || *q > best {
            return Radius::Keep;
        }
        if *q < best {
            best = q.clone();
            hits.clear();
        }
        hits.push(x.to_vec());
        Radius::Shrink(best.clone())
    })?;
    hits.sort();
    Ok((best, hits))
}

/// `max_i (G^-1)_ii`: every `y` satisfies `y_i^2 <= q(y) * max_i (G^-1)_ii`.
pub fn coordinate_bound_factor(g: &RatMatrix) -> Result<Rat> {
    let inv = inverse(g).ok_or(Error::NotPositiveDefinite)?;
    Ok((0..g.len()).map(|i| inv[i][i].clone()).max().unwrap_or_else(Rat::one))
}

pub fn to_rat_vec(x: &[BigInt]) -> Vec<Rat> {
    x.iter().map(|v| Rat::from_integer(v.clone())).collect()
}

pub fn l1_int(x: &[BigInt]) -> BigInt {
    x.iter().map(|v| v.abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::quad_form;
    use crate::rational::{rat, ratio};
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> RatMatrix {
        rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn a2_has_six_minimal_vectors() {
        let g = vec![vec![rat(1), ratio(1, 2)], vec![ratio(1, 2), rat(1)]];
        let (min, v) = shortest(&g, 1000).unwrap();
        assert_eq!(min, rat(1));
        assert_eq!(v.len(), 6);
        assert!(v.contains(&ints(&[1, -1])));
    }

    #[test]
    fn closest_integer_on_the_line() {
        let g = m(&[&[1]]);
        let (d, v) = closest(&g, &[ratio(3, 10)], 100).unwrap();
        assert_eq!(d, ratio(9, 100));
        assert_eq!(v, vec![ints(&[0])]);
        // a half-integer has two minimizers
        let (_, v) = closest(&g, &[ratio(1, 2)], 100).unwrap();
        assert_eq!(v, vec![ints(&[0]), ints(&[1])]);
    }

    #[test]
    fn counts_points_in_disc() {
        // x^2 + y^2 <= 5 has 21 integer points
        assert_eq!(count_within(&m(&[&[1, 0], &[0, 1]]), &rat(5), 10_000).unwrap(), 21);
        let pts = points_within(&m(&[&[1, 0], &[0, 1]]), None, &rat(1), 100).unwrap();
        assert_eq!(pts.len(), 5);
        assert_eq!(pts[0].coords, ints(&[0, 0]));
    }

    #[test]
    fn budget_is_enforced() {
        let g = m(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(points_within(&g, None, &rat(100), 10), Err(Error::BudgetExceeded(10)));
    }

    #[test]
    fn rejects_indefinite() {
        assert_eq!(shortest(&m(&[&[1, 2], &[2, 1]]), 100), Err(Error::NotPositiveDefinite));
    }

    fn brute_force(g: &RatMatrix, c: &[Rat], box_r: i64) -> (Rat, Vec<Vec<BigInt>>) {
        let n = g.len();
        let mut best: Option<Rat> = None;
        let mut hits = vec![];
        let total = (2 * box_r + 1).pow(n as u32);
        for mut k in 0..total {
            let x: Vec<i64> = (0..n)
                .map(|_| {
                    let v = k % (2 * box_r + 1) - box_r;
                    k /= 2 * box_r + 1;
                    v
                })
                .collect();
            let y: Vec<Rat> = x.iter().zip(c).map(|(&a, b)| rat(a) - b).collect();
            let q = quad_form(g, &y);
            match &best {
                Some(b) if q > *b => {}
                Some(b) if q == *b => hits.push(ints(&x)),
                _ => {
                    best = Some(q);
                    hits = vec![ints(&x)];
                }
            }
        }
        hits.sort();
        (best.unwrap(), hits)
    }

    fn pd_matrix() -> impl Strategy<Value = RatMatrix> {
        // G = A^T A + I for a small integer A is positive definite
        prop::collection::vec(-3i64..=3, 4).prop_map(|a| {
            let a = [[a[0], a[1]], [a[2], a[3]]];
            (0..2).map(|i| (0..2).map(|j| rat((0..2).map(|k| a[k][i] * a[k][j]).sum::<i64>() + i64::from(i == j))).collect()).collect()
        })
    }

    proptest! {
        #[test]
        fn closest_matches_box_search(g in pd_matrix(), cx in -20i64..20, cy in -20i64..20) {
            let c = vec![ratio(cx, 7), ratio(cy, 5)];
            let (d, v) = closest(&g, &c, 1_000_000).unwrap();
            let (bd, bv) = brute_force(&g, &c, 12);
            prop_assert_eq!(d, bd);
            prop_assert_eq!(v, bv);
        }

        #[test]
        fn shortest_matches_box_search(g in pd_matrix()) {
            let (d, v) = shortest(&g, 1_000_000).unwrap();
            let n = g.len();
            let mut best = None;
            let mut hits = vec![];
            for x in -12i64..=12 {
                for y in -12i64..=12 {
                    if x == 0 && y == 0 { continue; }
                    let q = quad_form(&g, &[rat(x), rat(y)]);
                    match &best {
                        Some(b) if q > *b => {}
                        Some(b) if q == *b => hits.push(ints(&[x, y])),
                        _ => { best = Some(q); hits = vec![ints(&[x, y])]; }
                    }
                }
            }
            hits.sort();
            prop_assert_eq!(n, 2);
            prop_assert_eq!(d, best.unwrap());
            prop_assert_eq!(v, hits);
        }
    }
}
