//! Generators and brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use hermlat::field::preset;
use hermlat::hermitian::linalg::{identity, mat_mul, transpose};
use hermlat::hermitian::{roots_of_unity, FVector, HermitianLattice, UnimodularMatrix};
use hermlat::homology::{smith_normal_form, ChainComplex, IntMatrix};
use hermlat::rational::{rat, ratio, Rat};
use hermlat::{Config, FieldElement, NumberField, RealEmbeddingVector};
use num_bigint::BigInt;
use num_traits::Zero;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn field(name: &str) -> NumberField {
    preset(name, Config::default()).unwrap()
}

pub fn random_rat(r: &mut Rng8, max_abs: i64, max_den: i64) -> Rat {
    let den = r.gen_range(1..=max_den);
    ratio(r.gen_range(-max_abs * den..=max_abs * den), den)
}

pub fn random_element(r: &mut Rng8, f: &NumberField, max_abs: i64, max_den: i64) -> FieldElement {
    FieldElement((0..f.degree()).map(|_| random_rat(r, max_abs, max_den)).collect())
}

pub fn random_integer(r: &mut Rng8, f: &NumberField, max_abs: i64) -> FieldElement {
    FieldElement((0..f.degree()).map(|_| rat(r.gen_range(-max_abs..=max_abs))).collect())
}

/// A point of `F_R` with independent random coordinates in every embedding.
pub fn random_real_point(r: &mut Rng8, f: &NumberField, max_abs: i64) -> RealEmbeddingVector {
    let (r1, r2) = f.signature();
    let reals: Vec<Rat> = (0..r1).map(|_| random_rat(r, max_abs, 1000)).collect();
    let cs: Vec<(Rat, Rat)> = (0..r2).map(|_| (random_rat(r, max_abs, 1000), random_rat(r, max_abs, 1000))).collect();
    f.real_point(&reals, &cs).unwrap()
}

/// Same, with every coordinate bounded away from zero.
pub fn random_unit_free_point(r: &mut Rng8, f: &NumberField) -> RealEmbeddingVector {
    loop {
        let x = random_real_point(r, f, 4);
        if x.values.iter().all(|v| !v.contains_zero() && v.abs().lo > ratio(1, 20)) {
            return x;
        }
    }
}

/// Product of random transvections, a permutation and unit scalings.
pub fn random_unimodular(r: &mut Rng8, f: &NumberField, n: usize, steps: usize) -> UnimodularMatrix {
    let units = roots_of_unity(f).unwrap();
    let mut m = identity(f, n);
    for _ in 0..steps {
        if n > 1 {
            let i = r.gen_range(0..n);
            let mut j = r.gen_range(0..n - 1);
            if j >= i {
                j += 1;
            }
            let x = random_integer(r, f, 1);
            let mut e = identity(f, n);
            e[i][j] = x;
            m = mat_mul(f, &e, &m);
        }
    }
    let mut d = identity(f, n);
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = units[r.gen_range(0..units.len())].clone();
    }
    m = mat_mul(f, &m, &d);
    if n > 1 && r.gen_bool(0.5) {
        m.swap(0, n - 1);
    }
    UnimodularMatrix::new(f, m).unwrap()
}

/// `M^T conj(M) + c I` for a random integral `M`: a positive definite
/// Hermitian form.
pub fn random_form(r: &mut Rng8, f: &NumberField, n: usize) -> HermitianLattice {
    let m: Vec<FVector> = (0..n).map(|_| (0..n).map(|_| random_integer(r, f, 1)).collect()).collect();
    let conj: Vec<FVector> = m.iter().map(|row| row.iter().map(|x| f.conjugate(x).unwrap()).collect()).collect();
    let mut h = mat_mul(f, &transpose(&m), &conj);
    let shift = ratio(r.gen_range(1..=4), r.gen_range(1..=3));
    for (i, row) in h.iter_mut().enumerate() {
        row[i] = row[i].add(&f.from_rational(&shift));
    }
    HermitianLattice::new(f, h).unwrap()
}

/// Minimum and minimal vectors (flat coordinates) of a positive definite
/// rational Gram matrix, by exhaustive search of the box
/// `|c_i| <= sqrt(m0 (G^-1)_ii)` with `m0` the least diagonal entry.
/// `None` when the box has more than `limit` points.
pub fn brute_force_minimum(g: &[Vec<Rat>], limit: u64) -> Option<(Rat, BTreeSet<Vec<BigInt>>)> {
    let n = g.len();
    let m0 = (0..n).map(|i| g[i][i].clone()).min().unwrap();
    let inv = hermlat::matrix::inverse(&g.to_vec()).unwrap();
    let bounds: Vec<i64> = (0..n)
        .map(|i| {
            let b2 = &m0 * &inv[i][i];
            let mut b = 0i64;
            while rat((b + 1) * (b + 1)) <= b2 {
                b += 1;
            }
            b
        })
        .collect();
    let size: u64 = bounds.iter().map(|&b| 2 * b as u64 + 1).product();
    if size > limit {
        return None;
    }
    let mut best: Option<Rat> = None;
    let mut found = BTreeSet::new();
    let mut c: Vec<i64> = bounds.iter().map(|&b| -b).collect();
    loop {
        if c.iter().any(|&x| x != 0) {
            let mut v = Rat::zero();
            for i in 0..n {
                for j in 0..n {
                    v += &g[i][j] * rat(c[i] * c[j]);
                }
            }
            match &best {
                Some(b) if v > *b => {}
                Some(b) if v == *b => {
                    found.insert(c.iter().map(|&x| BigInt::from(x)).collect());
                }
                _ => {
                    best = Some(v);
                    found.clear();
                    found.insert(c.iter().map(|&x| BigInt::from(x)).collect());
                }
            }
        }
        let mut k = 0;
        loop {
            if k == n {
                return best.map(|b| (b, found));
            }
            if c[k] < bounds[k] {
                c[k] += 1;
                break;
            }
            c[k] = -bounds[k];
            k += 1;
        }
    }
}

/// Well-rounded starting forms `(1/d) A` for `A` among `I_N`, `A_2`, `A_3`.
pub fn well_rounded_seeds(f: &NumberField) -> Vec<HermitianLattice> {
    let d = f.degree() as i64;
    let s = |x: Rat| x / rat(d);
    let forms: Vec<Vec<Vec<Rat>>> = vec![
        vec![vec![s(rat(1))]],
        vec![vec![s(rat(1)), rat(0)], vec![rat(0), s(rat(1))]],
        vec![vec![s(rat(1)), s(ratio(1, 2))], vec![s(ratio(1, 2)), s(rat(1))]],
        vec![
            vec![s(rat(1)), s(ratio(1, 2)), s(ratio(1, 2))],
            vec![s(ratio(1, 2)), s(rat(1)), s(ratio(1, 2))],
            vec![s(ratio(1, 2)), s(ratio(1, 2)), s(rat(1))],
        ],
        vec![vec![s(rat(1)), rat(0), rat(0)], vec![rat(0), s(rat(1)), rat(0)], vec![rat(0), rat(0), s(rat(1))]],
    ];
    forms
        .iter()
        .filter_map(|h| HermitianLattice::from_rational(f, h).ok())
        .filter_map(|l| l.normalize_minimum().ok())
        .filter(|l| l.is_well_rounded().unwrap_or(false))
        .collect()
}

/// A two-step complex `Z^a -> Z^b -> Z^c` with `d1 d2 = 0`: `d2` random,
/// `d1` a random combination of the rows of the left kernel of `d2`.
pub fn random_complex(r: &mut Rng8) -> ChainComplex {
    let a = r.gen_range(1..=4);
    let b = r.gen_range(1..=5);
    let c = r.gen_range(1..=4);
    let rank_cap = r.gen_range(0..=b.min(a));
    let mut d2 = IntMatrix::zeros(b, a);
    if rank_cap > 0 {
        // product of b x k and k x a factors keeps rank <= k
        let left = IntMatrix::new((0..b).map(|_| (0..rank_cap).map(|_| BigInt::from(r.gen_range(-3..=3))).collect()).collect()).unwrap();
        let right = IntMatrix::new((0..rank_cap).map(|_| (0..a).map(|_| BigInt::from(r.gen_range(-3..=3))).collect()).collect()).unwrap();
        d2 = left.mul(&right).unwrap();
    }
    let s = smith_normal_form(&d2.transpose());
    // columns rank.. of V span ker(d2^T), i.e. rows y with y d2 = 0
    let kernel: Vec<Vec<BigInt>> = (s.rank..b).map(|j| (0..b).map(|i| s.v.get(i, j).clone()).collect()).collect();
    let mut rows = vec![];
    for _ in 0..c {
        let mut row = vec![BigInt::zero(); b];
        for k in &kernel {
            let coef = BigInt::from(r.gen_range(-2..=2));
            for (x, y) in row.iter_mut().zip(k) {
                *x += &coef * y;
            }
        }
        rows.push(row);
    }
    ChainComplex::new(vec![IntMatrix::new(rows).unwrap(), d2]).unwrap()
}

pub fn random_int_matrix(r: &mut Rng8, max_dim: usize, max_abs: i64) -> IntMatrix {
    let rows = r.gen_range(1..=max_dim);
    let cols = r.gen_range(1..=max_dim);
    IntMatrix::new((0..rows).map(|_| (0..cols).map(|_| BigInt::from(r.gen_range(-max_abs..=max_abs))).collect()).collect()).unwrap()
}
