//! Dense exact linear algebra over the prime field F_p.
//!
//! Everything that is additive over a coefficient ring (Frobenius twists,
//! additive polynomials, restriction of scalars) eventually lands here as an
//! F_p-matrix, so kernels and solves stay exact and deterministic.

use crate::fppoly::inv_mod_p;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FpMat {
    pub p: u32,
    pub rows: usize,
    pub cols: usize,
    data: Vec<u32>,
}

impl FpMat {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        FpMat { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u32, n: usize) -> Self {
        let mut m = FpMat::zeros(p, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_columns(p: u32, rows: usize, cols: &[Vec<u32>]) -> Self {
        let mut m = FpMat::zeros(p, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for i in 0..rows {
                m[(i, j)] = c[i] % p;
            }
        }
        m
    }

    pub fn column(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul(&self, other: &FpMat) -> FpMat {
        assert_eq!(self.cols, other.rows);
        let p = self.p as u64;
        let mut out = FpMat::zeros(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)] as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let v = (out[(i, j)] as u64 + a * other[(k, j)] as u64) % p;
                    out[(i, j)] = v as u32;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(self.cols, v.len());
        let p = self.p as u64;
        let mut out = vec![0u32; self.rows];
        for i in 0..self.rows {
            let mut acc = 0u64;
            for j in 0..self.cols {
                acc = (acc + self[(i, j)] as u64 * v[j] as u64) % p;
            }
            out[i] = acc as u32;
        }
        out
    }

    /// In-place reduction to reduced row echelon form; returns pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let p = self.p;
        let mut pivots = vec![];
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let mut sel = None;
            for r in row..self.rows {
                if self[(r, col)] != 0 {
                    sel = Some(r);
                    break;
                }
            }
            let Some(sel) = sel else { continue };
            self.swap_rows(row, sel);
            let inv = inv_mod_p(p, self[(row, col)]);
            for c in 0..self.cols {
                self[(row, c)] = ((self[(row, c)] as u64 * inv as u64) % p as u64) as u32;
            }
            for r in 0..self.rows {
                if r != row && self[(r, col)] != 0 {
                    let f = self[(r, col)] as u64;
                    for c in 0..self.cols {
                        let v = (self[(r, c)] as u64 + (p as u64 - f) * self[(row, c)] as u64)
                            % p as u64;
                        self[(r, c)] = v as u32;
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.rref().len()
    }

    /// Basis of the right kernel, each vector of length `cols`.
    /// Vectors are emitted in ascending order of their free column index,
    /// so the basis is deterministic.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let p = self.p;
        let mut m = self.clone();
        let pivots = m.rref();
        let pivot_set: std::collections::BTreeMap<usize, usize> =
            pivots.iter().enumerate().map(|(r, &c)| (c, r)).collect();
        let mut basis = vec![];
        for free in 0..self.cols {
            if pivot_set.contains_key(&free) {
                continue;
            }
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (&pc, &pr) in &pivot_set {
                if pc < free {
                    let coeff = m[(pr, free)];
                    v[pc] = (p - coeff) % p;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Solve self * x = b; returns one solution if consistent.
    pub fn solve(&self, b: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(b.len(), self.rows);
        let mut aug = FpMat::zeros(self.p, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, self.cols)] = b[i] % self.p;
        }
        let pivots = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![0u32; self.cols];
        for (r, &c) in pivots.iter().enumerate() {
            x[c] = aug[(r, self.cols)];
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<FpMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = FpMat::zeros(self.p, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = 1;
        }
        let pivots = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        let mut inv = FpMat::zeros(self.p, n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)];
            }
        }
        Some(inv)
    }

    pub fn pow(&self, mut e: usize) -> FpMat {
        assert_eq!(self.rows, self.cols);
        let mut acc = FpMat::identity(self.p, self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }
}

impl std::ops::Index<(usize, usize)> for FpMat {
    type Output = u32;
    fn index(&self, (i, j): (usize, usize)) -> &u32 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for FpMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u32 {
        &mut self.data[i * self.cols + j]
    }
}

impl FpMat {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// Enumerate all F_p-linear combinations of the given basis vectors, in
/// lexicographic order of the coefficient tuples. Includes the zero vector.
pub fn span_elements(p: u32, basis: &[Vec<u32>], dim: usize) -> Vec<Vec<u32>> {
    let mut out = vec![];
    let k = basis.len();
    let total = (p as u64).checked_pow(k as u32).expect("span too large");
    assert!(total <= 1 << 24, "span enumeration too large");
    let mut coeffs = vec![0u32; k];
    for _ in 0..total {
        let mut v = vec![0u32; dim];
        for (c, b) in coeffs.iter().zip(basis) {
            if *c != 0 {
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi = (*vi + c * bi) % p;
                }
            }
        }
        out.push(v);
        for c in coeffs.iter_mut() {
            *c += 1;
            if *c < p {
                break;
            }
            *c = 0;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_and_solve() {
        // over F_2: [[1,1,0],[0,1,1]] has kernel spanned by (1,1,1)
        let mut m = FpMat::zeros(2, 2, 3);
        m[(0, 0)] = 1;
        m[(0, 1)] = 1;
        m[(1, 1)] = 1;
        m[(1, 2)] = 1;
        let k = m.kernel_basis();
        assert_eq!(k, vec![vec![1, 1, 1]]);
        let x = m.solve(&[1, 0]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![1, 0]);
    }

    #[test]
    fn inverse_roundtrip() {
        let p = 5;
        let mut m = FpMat::zeros(p, 2, 2);
        m[(0, 0)] = 2;
        m[(0, 1)] = 1;
        m[(1, 0)] = 1;
        m[(1, 1)] = 1;
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), FpMat::identity(p, 2));
    }
}
