//! Dense linear algebra over a finite residue field `F_{p^m}`.

use crate::ring::{GaloisRing, RingElem};

pub type Vector = Vec<RingElem>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMatrix {
    rows: usize,
    cols: usize,
    data: Vec<RingElem>,
}

impl FieldMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        FieldMatrix { rows, cols, data: vec![RingElem::default(); rows * cols] }
    }

    pub fn identity(field: &GaloisRing, n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(rows: &[Vector]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            m.data[i * cols..(i + 1) * cols].copy_from_slice(r);
        }
        m
    }

    pub fn from_columns(cols: &[Vector], nrows: usize) -> Self {
        let mut m = Self::zeros(nrows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..nrows {
                m.set(i, j, c[i]);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> RingElem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RingElem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> Vector {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul(&self, field: &GaloisRing, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = FieldMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if field.is_zero(&a) {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j);
                    out.set(i, j, field.add(&cur, &field.mul(&a, &other.get(k, j))));
                }
            }
        }
        out
    }

    pub fn apply(&self, field: &GaloisRing, v: &[RingElem]) -> Vector {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(field.zero(), |acc, j| {
                    field.add(&acc, &field.mul(&self.get(i, j), &v[j]))
                })
            })
            .collect()
    }

    pub fn add(&self, field: &GaloisRing, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FieldMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| field.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, field: &GaloisRing, other: &FieldMatrix) -> FieldMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        FieldMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| field.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, field: &GaloisRing, s: &RingElem) -> FieldMatrix {
        FieldMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| field.mul(s, a)).collect(),
        }
    }

    pub fn transpose(&self) -> FieldMatrix {
        let mut out = FieldMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn pow(&self, field: &GaloisRing, mut e: u64) -> FieldMatrix {
        let mut base = self.clone();
        let mut acc = FieldMatrix::identity(field, self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(field, &base);
            }
            base = base.mul(field, &base);
            e >>= 1;
        }
        acc
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self, field: &GaloisRing) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some(pr) = (r..self.rows).find(|&i| !field.is_zero(&self.get(i, c))) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = field.invert(&self.get(r, c)).expect("nonzero field element");
            for j in c..self.cols {
                let v = field.mul(&inv, &self.get(r, j));
                self.set(r, j, v);
            }
            for i in 0..self.rows {
                if i == r {
                    continue;
                }
                let f = self.get(i, c);
                if field.is_zero(&f) {
                    continue;
                }
                for j in c..self.cols {
                    let v = field.sub(&self.get(i, j), &field.mul(&f, &self.get(r, j)));
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self, field: &GaloisRing) -> usize {
        self.clone().rref(field).len()
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self, field: &GaloisRing) -> Option<FieldMatrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = FieldMatrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j));
            }
            aug.set(i, n + i, field.one());
        }
        let pivots = aug.rref(field);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut out = FieldMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, aug.get(i, n + j));
            }
        }
        Some(out)
    }

    pub fn is_identity(&self, field: &GaloisRing) -> bool {
        self.rows == self.cols && *self == FieldMatrix::identity(field, self.rows)
    }

    /// Multiplicative order of an invertible square matrix.
    pub fn order(&self, field: &GaloisRing, cap: u64) -> Option<u64> {
        let mut acc = self.clone();
        for k in 1..=cap {
            if acc.is_identity(field) {
                return Some(k);
            }
            acc = acc.mul(field, self);
        }
        None
    }

    /// Basis of the right kernel `{x : A x = 0}`, one vector per free column.
    pub fn kernel(&self, field: &GaloisRing) -> Vec<Vector> {
        let mut m = self.clone();
        let pivots = m.rref(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![field.zero(); self.cols];
                v[f] = field.one();
                for (r, &pc) in pivots.iter().enumerate() {
                    v[pc] = field.neg(&m.get(r, f));
                }
                v
            })
            .collect()
    }
}

/// Dimension of the span of a list of vectors.
pub fn span_dim(field: &GaloisRing, vectors: &[Vector]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    FieldMatrix::from_rows(vectors).rank(field)
}

/// Incrementally maintained row-echelon basis of a subspace of `F^n`.
#[derive(Clone, Debug)]
pub struct EchelonBasis {
    width: usize,
    rows: Vec<(usize, Vector)>,
}

impl EchelonBasis {
    pub fn new(width: usize) -> Self {
        EchelonBasis { width, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis.
    pub fn reduce(&self, field: &GaloisRing, v: &[RingElem]) -> Vector {
        let mut v = v.to_vec();
        for (pc, row) in &self.rows {
            let f = v[*pc];
            if field.is_zero(&f) {
                continue;
            }
            for j in 0..self.width {
                v[j] = field.sub(&v[j], &field.mul(&f, &row[j]));
            }
        }
        v
    }

    pub fn contains(&self, field: &GaloisRing, v: &[RingElem]) -> bool {
        self.reduce(field, v).iter().all(|x| field.is_zero(x))
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, field: &GaloisRing, v: &[RingElem]) -> bool {
        let mut v = self.reduce(field, v);
        let Some(pc) = v.iter().position(|x| !field.is_zero(x)) else {
            return false;
        };
        let inv = field.invert(&v[pc]).unwrap();
        for x in v.iter_mut() {
            *x = field.mul(&inv, x);
        }
        // keep earlier rows reduced at the new pivot
        for (_, row) in self.rows.iter_mut() {
            let f = row[pc];
            if !field.is_zero(&f) {
                for j in 0..self.width {
                    row[j] = field.sub(&row[j], &field.mul(&f, &v[j]));
                }
            }
        }
        self.rows.push((pc, v));
        true
    }

    pub fn vectors(&self) -> Vec<Vector> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> GaloisRing {
        GaloisRing::integers(5, 1).unwrap()
    }

    fn v(f: &GaloisRing, xs: &[i64]) -> Vector {
        xs.iter().map(|&x| f.from_int(x)).collect()
    }

    #[test]
    fn kernel_of_rank_one() {
        let f = f5();
        let m = FieldMatrix::from_rows(&[v(&f, &[1, 2, 3]), v(&f, &[2, 4, 6])]);
        assert_eq!(m.rank(&f), 1);
        let k = m.kernel(&f);
        assert_eq!(k.len(), 2);
        for x in &k {
            assert!(m.apply(&f, x).iter().all(|e| f.is_zero(e)));
        }
    }

    #[test]
    fn echelon_basis_membership() {
        let f = f5();
        let mut b = EchelonBasis::new(3);
        assert!(b.insert(&f, &v(&f, &[0, 1, 1])));
        assert!(b.insert(&f, &v(&f, &[1, 1, 0])));
        assert!(!b.insert(&f, &v(&f, &[1, 2, 1])));
        assert!(b.contains(&f, &v(&f, &[2, 3, 1])));
        assert!(!b.contains(&f, &v(&f, &[0, 0, 1])));
        assert_eq!(b.dim(), 2);
    }

    #[test]
    fn inverse_and_order() {
        let f = f5();
        let m = FieldMatrix::from_rows(&[v(&f, &[2, 0]), v(&f, &[0, 1])]);
        let inv = m.inverse(&f).unwrap();
        assert!(m.mul(&f, &inv).is_identity(&f));
        assert_eq!(m.order(&f, 100), Some(4));
        let sing = FieldMatrix::from_rows(&[v(&f, &[1, 2]), v(&f, &[2, 4])]);
        assert!(sing.inverse(&f).is_none());
    }

    #[test]
    fn works_over_extension_field() {
        let f = GaloisRing::new(3, 1, 2).unwrap();
        let x = f.generator();
        let m = FieldMatrix::from_rows(&[vec![f.one(), x], vec![x, f.mul(&x, &x)]]);
        assert_eq!(m.rank(&f), 1);
    }
}
