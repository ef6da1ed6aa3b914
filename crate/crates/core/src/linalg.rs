//! Dense linear algebra over a [`Field`]: row vectors, square matrices,
//! reduced row-echelon forms and orthogonal complements.

use serde::{Deserialize, Serialize};

use crate::field::{Elem, Field};

pub type Vector = Vec<Elem>;

/// Scales `v` so its first nonzero entry is 1. Returns `false` for the zero vector.
pub fn normalize(f: &Field, v: &mut [Elem]) -> bool {
    match v.iter().position(|&x| x != 0) {
        None => false,
        Some(i) => {
            let s = f.inv(v[i]);
            for x in v.iter_mut() {
                *x = f.mul(*x, s);
            }
            true
        }
    }
}

pub fn dot(f: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// `a + s*b` in place.
pub fn axpy(f: &Field, a: &mut [Elem], s: Elem, b: &[Elem]) {
    for (x, &y) in a.iter_mut().zip(b) {
        *x = f.add(*x, f.mul(s, y));
    }
}

/// Reduces `rows` to reduced row-echelon form, dropping zero rows.
/// The result is the canonical basis of the row space.
pub fn rref(f: &Field, rows: &mut Vec<Vector>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, piv);
        let s = f.inv(rows[rank][col]);
        for x in rows[rank].iter_mut() {
            *x = f.mul(*x, s);
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let c = f.neg(row[col]);
                axpy(f, row, c, &pivot_row);
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
}

pub fn rank(f: &Field, rows: &[Vector]) -> usize {
    let mut r = rows.to_vec();
    rref(f, &mut r);
    r.len()
}

/// Basis of `{x : x . r = 0 for every row r}`, in RREF.
pub fn orthogonal_complement(f: &Field, rows: &[Vector], dim: usize) -> Vec<Vector> {
    let mut r = rows.to_vec();
    rref(f, &mut r);
    let pivots: Vec<usize> = r.iter().map(|row| row.iter().position(|&x| x != 0).unwrap()).collect();
    let mut basis = Vec::new();
    for free in (0..dim).filter(|c| !pivots.contains(c)) {
        let mut v = vec![0; dim];
        v[free] = 1;
        for (row, &pc) in r.iter().zip(&pivots) {
            v[pc] = f.neg(row[free]);
        }
        basis.push(v);
    }
    rref(f, &mut basis);
    basis
}

/// All normalized nonzero vectors of the span of `basis` (the projective points).
pub fn span_points(f: &Field, basis: &[Vector]) -> Vec<Vector> {
    let k = basis.len();
    let dim = basis.first().map_or(0, Vec::len);
    let q = f.order() as usize;
    let mut out = Vec::new();
    let total = q.pow(k as u32);
    for code in 1..total {
        let mut coeffs = Vec::with_capacity(k);
        let mut c = code;
        for _ in 0..k {
            coeffs.push((c % q) as Elem);
            c /= q;
        }
        // keep only coefficient vectors whose last nonzero entry is 1
        if *coeffs.iter().rev().find(|&&x| x != 0).unwrap() != 1 {
            continue;
        }
        let mut v = vec![0; dim];
        for (b, &s) in basis.iter().zip(&coeffs) {
            axpy(f, &mut v, s, b);
        }
        normalize(f, &mut v);
        out.push(v);
    }
    out
}

/// Square matrix acting on row vectors from the right: `x -> x M`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Matrix {
    pub n: usize,
    pub data: Vec<Elem>,
}

impl Matrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        Matrix { n, data }
    }

    pub fn from_rows(rows: &[Vector]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix { n, data: rows.concat() }
    }

    pub fn rows(&self) -> Vec<Vector> {
        self.data.chunks(self.n).map(<[Elem]>::to_vec).collect()
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.n + j] = v;
    }

    pub fn apply(&self, f: &Field, x: &[Elem]) -> Vector {
        let mut out = vec![0; self.n];
        for (i, &xi) in x.iter().enumerate() {
            if xi != 0 {
                axpy(f, &mut out, xi, &self.data[i * self.n..(i + 1) * self.n]);
            }
        }
        out
    }

    pub fn mul(&self, f: &Field, other: &Matrix) -> Matrix {
        let rows: Vec<Vector> = self.rows().iter().map(|r| other.apply(f, r)).collect();
        Matrix::from_rows(&rows)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Applies the `e`-th Frobenius power entrywise.
    pub fn frobenius(&self, f: &Field, e: u32) -> Matrix {
        Matrix { n: self.n, data: self.data.iter().map(|&x| f.frobenius(x, e)).collect() }
    }

    pub fn scale(&self, f: &Field, s: Elem) -> Matrix {
        Matrix { n: self.n, data: self.data.iter().map(|&x| f.mul(x, s)).collect() }
    }

    pub fn inverse(&self, f: &Field) -> Option<Matrix> {
        let n = self.n;
        let mut aug: Vec<Vector> = self
            .rows()
            .into_iter()
            .enumerate()
            .map(|(i, mut r)| {
                r.extend((0..n).map(|j| (i == j) as Elem));
                r
            })
            .collect();
        rref(f, &mut aug);
        if aug.len() < n || (0..n).any(|i| aug[i][i] != 1) {
            return None;
        }
        Some(Matrix::from_rows(&aug.iter().map(|r| r[n..].to_vec()).collect::<Vec<_>>()))
    }

    pub fn is_invertible(&self, f: &Field) -> bool {
        rank(f, &self.rows()) == self.n
    }

    /// Scales so the first nonzero entry is 1; projective equality becomes `==`.
    pub fn projective_normal_form(&self, f: &Field) -> Matrix {
        let mut m = self.clone();
        normalize(f, &mut m.data);
        m
    }

    pub fn block_diagonal(blocks: &[Matrix]) -> Matrix {
        let n = blocks.iter().map(|b| b.n).sum();
        let mut m = Matrix { n, data: vec![0; n * n] };
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    m.set(off + i, off + j, b.get(i, j));
                }
            }
            off += b.n;
        }
        m
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complement_is_orthogonal_and_of_right_dimension() {
        let f = Field::new(3).unwrap();
        let rows = vec![vec![1, 2, 0, 1], vec![0, 1, 1, 1]];
        let c = orthogonal_complement(&f, &rows, 4);
        assert_eq!(c.len(), 2);
        for r in &rows {
            for v in &c {
                assert_eq!(dot(&f, r, v), 0);
            }
        }
    }

    #[test]
    fn span_points_counts_projective_points() {
        let f = Field::new(4).unwrap();
        let basis = vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0]];
        let pts = span_points(&f, &basis);
        assert_eq!(pts.len(), 21);
        let mut sorted = pts.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 21);
    }

    #[test]
    fn inverse_round_trips() {
        let f = Field::new(5).unwrap();
        let m = Matrix::from_rows(&[vec![1, 2, 3], vec![0, 1, 4], vec![2, 0, 1]]);
        let inv = m.inverse(&f).expect("invertible");
        assert_eq!(m.mul(&f, &inv), Matrix::identity(3));
        let singular = Matrix::from_rows(&[vec![1, 2], vec![2, 4]]);
        assert!(singular.inverse(&f).is_none());
    }
}
