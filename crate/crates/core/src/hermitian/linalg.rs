//! Exact linear algebra over a number field.

use crate::field::{FieldElement, NumberField};

pub type FMatrix = Vec<Vec<FieldElement>>;

pub fn identity(field: &NumberField, n: usize) -> FMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { field.one() } else { field.zero() }).collect()).collect()
}

pub fn transpose(m: &FMatrix) -> FMatrix {
    if m.is_empty() {
        return vec![];
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j].clone()).collect()).collect()
}

pub fn mat_mul(field: &NumberField, a: &FMatrix, b: &FMatrix) -> FMatrix {
    let d = field.degree();
    a.iter()
        .map(|row| {
            (0..b[0].len())
                .map(|j| row.iter().zip(b).fold(FieldElement::zero(d), |acc, (x, brow)| acc.add(&field.mul(x, &brow[j]))))
                .collect()
        })
        .collect()
}

pub fn mat_vec(field: &NumberField, a: &FMatrix, v: &[FieldElement]) -> Vec<FieldElement> {
    let d = field.degree();
    a.iter().map(|row| row.iter().zip(v).fold(FieldElement::zero(d), |acc, (x, y)| acc.add(&field.mul(x, y)))).collect()
}

/// Entrywise conjugate.
pub fn conjugate(field: &NumberField, m: &FMatrix) -> crate::Result<FMatrix> {
    m.iter().map(|r| r.iter().map(|x| field.conjugate(x)).collect()).collect()
}

/// Row reduction of `m` with the row operations mirrored on `aug`.
/// Returns the pivot columns and the determinant factor of the operations.
fn eliminate(field: &NumberField, m: &mut FMatrix, aug: &mut FMatrix) -> (Vec<usize>, FieldElement) {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut det = field.one();
    let mut pivots = vec![];
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else { continue };
        if p != r {
            m.swap(p, r);
            aug.swap(p, r);
            det = det.neg();
        }
        let inv = field.inverse(&m[r][c]).expect("nonzero pivot");
        det = field.mul(&det, &m[r][c]);
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let f = field.mul(&m[i][c], &inv);
            for j in 0..cols {
                let t = field.mul(&f, &m[r][j]);
                m[i][j] = m[i][j].sub(&t);
            }
            for j in 0..aug[0].len() {
                let t = field.mul(&f, &aug[r][j]);
                aug[i][j] = aug[i][j].sub(&t);
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    (pivots, det)
}

pub fn determinant(field: &NumberField, m: &FMatrix) -> FieldElement {
    let n = m.len();
    let mut a = m.clone();
    let mut aug: FMatrix = vec![vec![]; n];
    let (pivots, det) = eliminate(field, &mut a, &mut aug);
    if pivots.len() < n {
        field.zero()
    } else {
        det
    }
}

pub fn inverse(field: &NumberField, m: &FMatrix) -> Option<FMatrix> {
    let n = m.len();
    let mut a = m.clone();
    let mut aug = identity(field, n);
    let (pivots, _) = eliminate(field, &mut a, &mut aug);
    if pivots.len() < n {
        return None;
    }
    for i in 0..n {
        let inv = field.inverse(&a[i][i])?;
        for x in aug[i].iter_mut() {
            *x = field.mul(x, &inv);
        }
    }
    Some(aug)
}

/// Rank over `F` of a list of vectors.
pub fn rank(field: &NumberField, vecs: &[Vec<FieldElement>]) -> usize {
    let mut a = vecs.to_vec();
    let mut aug: FMatrix = vec![vec![]; a.len()];
    eliminate(field, &mut a, &mut aug).0.len()
}

/// Incremental echelon form used to test `F`-linear independence.
#[derive(Clone, Debug)]
pub struct Echelon {
    rows: Vec<(usize, Vec<FieldElement>)>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon { rows: vec![] }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    fn reduce(&self, field: &NumberField, v: &[FieldElement]) -> Vec<FieldElement> {
        let mut v = v.to_vec();
        for (p, row) in &self.rows {
            if v[*p].is_zero() {
                continue;
            }
            let f = field.div(&v[*p], &row[*p]).expect("nonzero pivot");
            for (x, r) in v.iter_mut().zip(row) {
                *x = x.sub(&field.mul(&f, r));
            }
        }
        v
    }

    /// Add `v` if it is independent of the rows so far.
    pub fn insert(&mut self, field: &NumberField, v: &[FieldElement]) -> bool {
        let r = self.reduce(field, v);
        match r.iter().position(|x| !x.is_zero()) {
            Some(p) => {
                self.rows.push((p, r));
                true
            }
            None => false,
        }
    }
}

impl Default for Echelon {
    fn default() -> Self {
        Echelon::new()
    }
}
