//! Exact dense linear algebra over the rationals and the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::{lcm_denoms, Rat};

pub type RatMatrix = Vec<Vec<Rat>>;
pub type IntRows = Vec<Vec<BigInt>>;

pub fn identity(n: usize) -> RatMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect()
}

pub fn transpose(m: &RatMatrix) -> RatMatrix {
    if m.is_empty() {
        return vec![];
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_mul(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter().map(|row| (0..cols).map(|j| (0..inner).fold(Rat::zero(), |acc, k| acc + &row[k] * &b[k][j])).collect()).collect()
}

pub fn mat_vec(a: &RatMatrix, v: &[Rat]) -> Vec<Rat> {
    a.iter().map(|row| row.iter().zip(v).fold(Rat::zero(), |acc, (x, y)| acc + x * y)).collect()
}

/// Row vector times matrix.
pub fn vec_mat(v: &[Rat], a: &RatMatrix) -> Vec<Rat> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    (0..cols).map(|j| v.iter().zip(a).fold(Rat::zero(), |acc, (x, row)| acc + x * &row[j])).collect()
}

pub fn determinant(m: &RatMatrix) -> Rat {
    let n = m.len();
    let mut a = m.clone();
    let mut det = Rat::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return Rat::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let piv = a[c][c].clone();
        det *= &piv;
        for r in c + 1..n {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &piv;
            for k in c..n {
                let t = &f * &a[c][k];
                a[r][k] -= t;
            }
        }
    }
    det
}

pub fn rank(m: &RatMatrix) -> usize {
    let mut a = m.clone();
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(p, r);
        for i in r + 1..rows {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &a[r][c];
            for k in c..cols {
                let t = &f * &a[r][k];
                a[i][k] -= t;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

/// Inverse of a square matrix, `None` when singular.
pub fn inverse(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m.iter().zip(identity(n)).map(|(row, id)| row.iter().cloned().chain(id).collect()).collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(p, c);
        let piv = a[c][c].clone();
        for k in 0..2 * n {
            a[c][k] = &a[c][k] / &piv;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for k in 0..2 * n {
                    let t = &f * &a[c][k];
                    a[r][k] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Solve `m x = b` for square invertible `m`.
pub fn solve(m: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    inverse(m).map(|inv| mat_vec(&inv, b))
}

/// `q(x) = sum_i diag[i] (x_i + sum_{j>i} mu[i][j] x_j)^2`, the LDL^T
/// decomposition of a symmetric matrix processed from the last coordinate.
#[derive(Clone, Debug)]
pub struct Ldl {
    pub diag: Vec<Rat>,
    pub mu: RatMatrix,
}

/// Exact LDL^T of a symmetric matrix; `None` unless positive definite.
pub fn ldl(g: &RatMatrix) -> Option<Ldl> {
    let n = g.len();
    let mut diag = vec![Rat::zero(); n];
    let mut mu = vec![vec![Rat::zero(); n]; n];
    // Cholesky-style recurrence over the upper triangle.
    for i in 0..n {
        let mut d = g[i][i].clone();
        for k in 0..i {
            d -= &mu[k][i] * &mu[k][i] * &diag[k];
        }
        if !d.is_positive() {
            return None;
        }
        for j in i + 1..n {
            let mut s = g[i][j].clone();
            for k in 0..i {
                s -= &mu[k][i] * &mu[k][j] * &diag[k];
            }
            mu[i][j] = s / &d;
        }
        diag[i] = d;
    }
    Some(Ldl { diag, mu })
}

/// Exact positive definiteness through leading principal minors.
pub fn is_positive_definite(g: &RatMatrix) -> bool {
    (1..=g.len()).all(|k| {
        let minor: RatMatrix = g[..k].iter().map(|r| r[..k].to_vec()).collect();
        determinant(&minor).is_positive()
    })
}

pub fn is_symmetric(g: &RatMatrix) -> bool {
    let n = g.len();
    g.iter().all(|r| r.len() == n) && (0..n).all(|i| (0..i).all(|j| g[i][j] == g[j][i]))
}

pub fn quad_form(g: &RatMatrix, x: &[Rat]) -> Rat {
    let gx = mat_vec(g, x);
    x.iter().zip(&gx).fold(Rat::zero(), |acc, (a, b)| acc + a * b)
}

pub fn quad_form_int(g: &RatMatrix, x: &[i64]) -> Rat {
    let mut acc = Rat::zero();
    for (i, xi) in x.iter().enumerate() {
        if *xi == 0 {
            continue;
        }
        let mut row = Rat::zero();
        for (j, xj) in x.iter().enumerate() {
            if *xj != 0 {
                row += &g[i][j] * Rat::from_integer(BigInt::from(*xj));
            }
        }
        acc += row * Rat::from_integer(BigInt::from(*xi));
    }
    acc
}

/// Common denominator and integer matrix with `m = ints / denom`.
pub fn clear_denominators(m: &RatMatrix) -> (BigInt, IntRows) {
    let l = lcm_denoms(m.iter().flatten());
    let ints = m.iter().map(|r| r.iter().map(|x| (x * Rat::from_integer(l.clone())).to_integer()).collect()).collect();
    (l, ints)
}

/// Row Hermite normal form of the lattice spanned by `rows` (integer
/// vectors of length `n`). The result is upper triangular with positive
/// pivots and entries above each pivot reduced into `[0, pivot)`; zero rows
/// are dropped.
pub fn hermite_rows(rows: &IntRows, n: usize) -> IntRows {
    let mut a: IntRows = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let mut out: IntRows = vec![];
    let mut col = 0;
    while col < n && !a.is_empty() {
        // gcd-combine all rows into a single pivot row for this column
        loop {
            let nz: Vec<usize> = (0..a.len()).filter(|&i| !a[i][col].is_zero()).collect();
            if nz.len() <= 1 {
                break;
            }
            let p = *nz.iter().min_by_key(|&&i| a[i][col].abs()).unwrap();
            for &i in &nz {
                if i == p {
                    continue;
                }
                let q = a[i][col].div_floor(&a[p][col]);
                let prow = a[p].clone();
                for (x, y) in a[i].iter_mut().zip(&prow) {
                    *x -= &q * y;
                }
            }
        }
        if let Some(p) = (0..a.len()).find(|&i| !a[i][col].is_zero()) {
            let mut row = a.remove(p);
            if row[col].is_negative() {
                row.iter_mut().for_each(|x| *x = -x.clone());
            }
            out.push(row);
        }
        a.retain(|r| r.iter().any(|x| !x.is_zero()));
        col += 1;
    }
    // reduce entries above pivots
    for i in 0..out.len() {
        let pc = (0..n).find(|&c| !out[i][c].is_zero()).unwrap();
        for k in 0..i {
            let q = out[k][pc].div_floor(&out[i][pc]);
            if !q.is_zero() {
                let prow = out[i].clone();
                for (x, y) in out[k].iter_mut().zip(&prow) {
                    *x -= &q * y;
                }
            }
        }
    }
    out
}
