//! Matrices over `k[t]` and the Smith normal form over a field base.
//!
//! The pivot rule is fixed for bit-reproducible output: among nonzero
//! entries of the working submatrix pick one of minimal degree, breaking
//! ties leftmost, then topmost. Pivots are normalized monic.

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::{CoeffRing, RingElem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Poly>,
}

impl PolyMat {
    pub fn new(rows: usize, cols: usize, data: Vec<Poly>) -> Self {
        assert_eq!(data.len(), rows * cols);
        PolyMat { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        PolyMat { rows, cols, data: vec![Poly::zero(); rows * cols] }
    }

    pub fn identity(ring: &CoeffRing, n: usize) -> Self {
        let mut m = PolyMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Poly::one(ring);
        }
        m
    }

    pub fn scalar(n: usize, s: &Poly) -> Self {
        let mut m = PolyMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
        m
    }

    pub fn from_ring_matrix(ring: &CoeffRing, rows: usize, cols: usize, data: &[RingElem]) -> Self {
        assert_eq!(data.len(), rows * cols);
        PolyMat::new(
            rows,
            cols,
            data.iter().map(|c| Poly::constant(ring, c.clone())).collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn add(&self, ring: &CoeffRing, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.add(ring, b)).collect();
        PolyMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, ring: &CoeffRing, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.sub(ring, b)).collect();
        PolyMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, ring: &CoeffRing, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = PolyMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self[(i, k)].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = self[(i, k)].mul(ring, &other[(k, j)]);
                    out[(i, j)] = out[(i, j)].add(ring, &t);
                }
            }
        }
        out
    }

    pub fn scale(&self, ring: &CoeffRing, s: &Poly) -> Self {
        PolyMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| e.mul(ring, s)).collect(),
        }
    }

    /// Entry-wise sigma-twist (coefficient q^i-power).
    pub fn twist(&self, ring: &CoeffRing, i: usize) -> Self {
        PolyMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| e.twist(ring, i)).collect(),
        }
    }

    /// Entry-wise remainder mod a polynomial.
    pub fn rem(&self, ring: &CoeffRing, m: &Poly) -> Result<Self> {
        let data = self
            .data
            .iter()
            .map(|e| e.rem(ring, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(PolyMat { rows: self.rows, cols: self.cols, data })
    }

    pub fn transpose(&self) -> Self {
        let mut out = PolyMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Determinant by cofactor expansion along the first column. Fine for
    /// the small ranks this crate works with.
    pub fn det(&self, ring: &CoeffRing) -> Poly {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return Poly::one(ring);
        }
        if n == 1 {
            return self[(0, 0)].clone();
        }
        let mut acc = Poly::zero();
        for i in 0..n {
            if self[(i, 0)].is_zero() {
                continue;
            }
            let minor = self.minor(i, 0);
            let term = self[(i, 0)].mul(ring, &minor.det(ring));
            if i % 2 == 0 {
                acc = acc.add(ring, &term);
            } else {
                acc = acc.sub(ring, &term);
            }
        }
        acc
    }

    fn minor(&self, row: usize, col: usize) -> PolyMat {
        let n = self.rows;
        let mut data = Vec::with_capacity((n - 1) * (n - 1));
        for i in 0..n {
            if i == row {
                continue;
            }
            for j in 0..n {
                if j == col {
                    continue;
                }
                data.push(self[(i, j)].clone());
            }
        }
        PolyMat::new(n - 1, n - 1, data)
    }

    /// Adjugate matrix: adj(A) * A = A * adj(A) = det(A) * I.
    pub fn adjugate(&self, ring: &CoeffRing) -> PolyMat {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return self.clone();
        }
        if n == 1 {
            return PolyMat::identity(ring, 1);
        }
        let mut out = PolyMat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(i, j).det(ring);
                out[(j, i)] = if (i + j) % 2 == 0 { c } else { c.neg(ring) };
            }
        }
        out
    }

    pub fn max_deg(&self) -> Option<usize> {
        self.data.iter().filter_map(|e| e.deg()).max()
    }
}

impl std::ops::Index<(usize, usize)> for PolyMat {
    type Output = Poly;
    fn index(&self, (i, j): (usize, usize)) -> &Poly {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for PolyMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Poly {
        &mut self.data[i * self.cols + j]
    }
}

/// Smith normal form over `k[t]`: U * A * V = D with U, V unimodular and D
/// diagonal with monic entries d_1 | d_2 | ... (zeros last). Field base only.
pub struct SmithForm {
    pub u: PolyMat,
    pub d: PolyMat,
    pub v: PolyMat,
    /// The nonzero diagonal entries, in divisibility order.
    pub divisors: Vec<Poly>,
}

pub fn smith_normal_form(ring: &CoeffRing, a: &PolyMat) -> Result<SmithForm> {
    if !ring.is_field() {
        return Err(Error::UnsupportedBase);
    }
    let rows = a.rows;
    let cols = a.cols;
    let mut m = a.clone();
    let mut u = PolyMat::identity(ring, rows);
    let mut v = PolyMat::identity(ring, cols);
    let steps = rows.min(cols);
    for k in 0..steps {
        loop {
            // pivot: minimal degree, ties broken leftmost then topmost
            let mut pivot: Option<(usize, usize, usize)> = None;
            for j in k..cols {
                for i in k..rows {
                    if let Some(d) = m[(i, j)].deg() {
                        let better = match pivot {
                            None => true,
                            Some((_, _, pd)) => d < pd,
                        };
                        if better {
                            pivot = Some((i, j, d));
                        }
                    }
                }
            }
            let Some((pi, pj, _)) = pivot else { break };
            swap_rows(&mut m, k, pi);
            swap_rows(&mut u, k, pi);
            swap_cols(&mut m, k, pj);
            swap_cols(&mut v, k, pj);
            // clear column k below/above with division steps
            let mut dirty = false;
            for i in 0..rows {
                if i != k && !m[(i, k)].is_zero() {
                    let (q, _) = m[(i, k)].divmod(ring, &m[(k, k)])?;
                    row_sub(ring, &mut m, i, k, &q);
                    row_sub(ring, &mut u, i, k, &q);
                    if !m[(i, k)].is_zero() {
                        dirty = true;
                    }
                }
            }
            for j in 0..cols {
                if j != k && !m[(k, j)].is_zero() {
                    let (q, _) = m[(k, j)].divmod(ring, &m[(k, k)])?;
                    col_sub(ring, &mut m, j, k, &q);
                    col_sub(ring, &mut v, j, k, &q);
                    if !m[(k, j)].is_zero() {
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // pivot now divides its row and column remainders (all zero);
            // enforce divisibility into the rest of the submatrix
            let mut fixed = true;
            'outer: for i in k + 1..rows {
                for j in k + 1..cols {
                    if !m[(i, j)].is_zero() {
                        let (_, r) = m[(i, j)].divmod(ring, &m[(k, k)])?;
                        if !r.is_zero() {
                            // fold row i into row k and restart the pivot loop
                            row_add(ring, &mut m, k, i);
                            row_add(ring, &mut u, k, i);
                            fixed = false;
                            break 'outer;
                        }
                    }
                }
            }
            if fixed {
                break;
            }
        }
    }
    // normalize pivots monic by scaling rows of m (and u)
    let mut divisors = vec![];
    for k in 0..steps {
        if m[(k, k)].is_zero() {
            continue;
        }
        let lc = m[(k, k)].lc(ring);
        if lc != ring.one() {
            let inv = ring.inv(&lc).ok_or(Error::NonUnitLeadingCoefficient)?;
            let invp = Poly::constant(ring, inv);
            scale_row(ring, &mut m, k, &invp);
            scale_row(ring, &mut u, k, &invp);
        }
        divisors.push(m[(k, k)].clone());
    }
    debug_assert!({
        let prod = u.mul(ring, a).mul(ring, &v);
        prod == m
    });
    debug_assert!({
        let mut ok = true;
        for w in divisors.windows(2) {
            ok &= w[1].rem(ring, &w[0]).map(|r| r.is_zero()).unwrap_or(false);
        }
        ok
    });
    Ok(SmithForm { u, d: m, v, divisors })
}

fn swap_rows(m: &mut PolyMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols {
        let t = m[(a, j)].clone();
        m[(a, j)] = m[(b, j)].clone();
        m[(b, j)] = t;
    }
}

fn swap_cols(m: &mut PolyMat, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows {
        let t = m[(i, a)].clone();
        m[(i, a)] = m[(i, b)].clone();
        m[(i, b)] = t;
    }
}

/// row_i -= q * row_k
fn row_sub(ring: &CoeffRing, m: &mut PolyMat, i: usize, k: usize, q: &Poly) {
    for j in 0..m.cols {
        let t = q.mul(ring, &m[(k, j)]);
        m[(i, j)] = m[(i, j)].sub(ring, &t);
    }
}

/// col_j -= q * col_k
fn col_sub(ring: &CoeffRing, m: &mut PolyMat, j: usize, k: usize, q: &Poly) {
    for i in 0..m.rows {
        let t = q.mul(ring, &m[(i, k)]);
        m[(i, j)] = m[(i, j)].sub(ring, &t);
    }
}

/// row_k += row_i
fn row_add(ring: &CoeffRing, m: &mut PolyMat, k: usize, i: usize) {
    for j in 0..m.cols {
        m[(k, j)] = m[(k, j)].add(ring, &m[(i, j)]);
    }
}

fn scale_row(ring: &CoeffRing, m: &mut PolyMat, k: usize, s: &Poly) {
    for j in 0..m.cols {
        m[(k, j)] = m[(k, j)].mul(ring, s);
    }
}
