//! Deterministic construction of extension fields K/k together with the
//! embedding k -> K, used for counting and enumerating geometric points.
//!
//! K is presented as `F_p[z]/(g)` for the lexicographically first irreducible
//! g of the right degree, and k is embedded by sending its generator to the
//! lexicographically smallest root of k's modulus inside the subfield of K
//! of order |k|. Both choices are reproducible across runs.

use crate::error::{Error, Result};
use crate::fppoly;
use crate::linalg::FpMat;
use crate::ring::{CoeffRing, RingElem};

#[derive(Debug, Clone)]
pub struct Extension {
    pub field: CoeffRing,
    /// F_p-linear embedding matrix k -> K.
    matrix: FpMat,
    pub degree: usize,
}

impl Extension {
    pub fn embed(&self, x: &RingElem) -> RingElem {
        RingElem::new(self.matrix.mul_vec(&x.coeffs))
    }

    pub fn embed_vec(&self, xs: &[RingElem]) -> Vec<RingElem> {
        xs.iter().map(|x| self.embed(x)).collect()
    }
}

/// Build the degree-m extension of a finite field k. For m = 1 this is k
/// itself with the identity embedding.
pub fn extend_field(k: &CoeffRing, m: usize) -> Result<Extension> {
    if !k.is_field() {
        return Err(Error::UnsupportedBase);
    }
    assert!(m >= 1);
    if m == 1 {
        return Ok(Extension {
            field: k.clone(),
            matrix: FpMat::identity(k.p(), k.dim()),
            degree: 1,
        });
    }
    let p = k.p();
    let dk = k.dim();
    let dd = dk * m;
    let g = fppoly::first_irreducible(p, dd);
    let big = CoeffRing::finite_field(p, k.q(), g.clone(), vec![0; dd])?;
    // subfield of order p^dk: kernel of frob_p^dk - id
    let frob_p = p_frobenius_matrix(&big);
    let mut fmat = frob_p.pow(dk);
    for i in 0..dd {
        fmat[(i, i)] = (fmat[(i, i)] + p - 1) % p;
    }
    let sub_basis = fmat.kernel_basis();
    debug_assert_eq!(sub_basis.len(), dk);
    // lexicographically smallest root of k's modulus in the subfield
    // (zero is a valid root exactly when the modulus is x itself)
    let mut root = None;
    for cand in crate::linalg::span_elements(p, &sub_basis, dd) {
        let x = RingElem::new(cand);
        if big.is_zero(&eval_fp_poly(&big, k.modulus(), &x)) {
            root = Some(x);
            break;
        }
    }
    let root = root.ok_or_else(|| {
        Error::PreconditionViolated("no root of the base modulus in the extension".into())
    })?;
    // embedding matrix: basis power x^i of k maps to root^i
    let mut cols = Vec::with_capacity(dk);
    let mut acc = big.one();
    for _ in 0..dk {
        cols.push(acc.coeffs.clone());
        acc = big.mul(&acc, &root);
    }
    let matrix = FpMat::from_columns(p, dd, &cols);
    // theta of K = embedded theta of k
    let theta = matrix.mul_vec(&k.theta().coeffs);
    let field = CoeffRing::finite_field(p, k.q(), g, theta)?;
    Ok(Extension { field, matrix, degree: m })
}

/// Matrix of the p-power Frobenius on the coordinate space of a field.
fn p_frobenius_matrix(k: &CoeffRing) -> FpMat {
    let dim = k.dim();
    let mut cols = Vec::with_capacity(dim);
    for i in 0..dim {
        let mut e = k.zero();
        e.coeffs[i] = 1;
        cols.push(k.pow(&e, k.p() as u64).coeffs);
    }
    FpMat::from_columns(k.p(), dim, &cols)
}

fn eval_fp_poly(ring: &CoeffRing, f: &[u32], x: &RingElem) -> RingElem {
    let mut acc = ring.zero();
    for &c in f.iter().rev() {
        acc = ring.mul(&acc, x);
        acc = ring.add(&acc, &ring.from_prime(c));
    }
    acc
}

/// Greedily extract an F_q-basis from an F_p-spanning set of a subspace
/// closed under multiplication by F_q. Vectors live in the coordinate space
/// of `ring`^n (concatenated coordinates).
pub fn fq_basis_of_span(ring: &CoeffRing, n: usize, fp_basis: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let p = ring.p();
    let dim = ring.dim() * n;
    let fq = crate::poly::fq_basis(ring);
    let mut chosen: Vec<Vec<u32>> = vec![];
    let mut span = FpMat::zeros(p, 0, dim);
    for v in fp_basis {
        // is v in the current F_q-span?
        if span.rows > 0 {
            let mut m = FpMat::zeros(p, dim, span.rows);
            for (j, row) in span_rows(&span).iter().enumerate() {
                for i in 0..dim {
                    m[(i, j)] = row[i];
                }
            }
            if m.solve(v).is_some() {
                continue;
            }
        }
        chosen.push(v.clone());
        // extend the F_p-span by all F_q-multiples of v
        let mut rows = span_rows(&span);
        for lam in &fq {
            rows.push(mul_scalar_vec(ring, n, lam, v));
        }
        let mut m = FpMat::zeros(p, rows.len(), dim);
        for (i, row) in rows.iter().enumerate() {
            for j in 0..dim {
                m[(i, j)] = row[j];
            }
        }
        m.rref();
        span = m;
    }
    chosen
}

fn span_rows(m: &FpMat) -> Vec<Vec<u32>> {
    let mut out = vec![];
    for i in 0..m.rows {
        let row: Vec<u32> = (0..m.cols).map(|j| m[(i, j)]).collect();
        if row.iter().any(|&c| c != 0) {
            out.push(row);
        }
    }
    out
}

/// Multiply a concatenated coordinate vector of ring^n by a ring scalar.
pub fn mul_scalar_vec(ring: &CoeffRing, n: usize, lam: &RingElem, v: &[u32]) -> Vec<u32> {
    let d = ring.dim();
    assert_eq!(v.len(), d * n);
    let mut out = Vec::with_capacity(v.len());
    for b in 0..n {
        let part = RingElem::new(v[b * d..(b + 1) * d].to_vec());
        out.extend(ring.mul(lam, &part).coeffs);
    }
    out
}

/// Solve for all F_q-coordinates of `target` in terms of the given F_q-basis
/// vectors: target = sum c_j basis_j with c_j in F_q. Returns the c_j as
/// ring elements. The basis must be F_q-linearly independent.
pub fn fq_coordinates(
    ring: &CoeffRing,
    basis: &[Vec<u32>],
    target: &[u32],
) -> Option<Vec<RingElem>> {
    let p = ring.p();
    let dim = target.len();
    let n = dim / ring.dim();
    let fq = crate::poly::fq_basis(ring);
    let e = fq.len();
    let mut m = FpMat::zeros(p, dim, basis.len() * e);
    for (j, b) in basis.iter().enumerate() {
        for (u, lam) in fq.iter().enumerate() {
            let col = mul_scalar_vec(ring, n, lam, b);
            for i in 0..dim {
                m[(i, j * e + u)] = col[i];
            }
        }
    }
    let sol = m.solve(target)?;
    let mut out = vec![];
    for j in 0..basis.len() {
        let mut c = ring.zero();
        for (u, lam) in fq.iter().enumerate() {
            if sol[j * e + u] != 0 {
                c = ring.add(&c, &ring.mul(&ring.from_prime(sol[j * e + u]), lam));
            }
        }
        out.push(c);
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> CoeffRing {
        CoeffRing::finite_field(2, 2, vec![1, 1, 1], vec![0, 1]).unwrap()
    }

    #[test]
    fn extension_embeds_base_field() {
        let k = f4();
        let ext = extend_field(&k, 3).unwrap();
        assert_eq!(ext.field.dim(), 6);
        // embedding is a ring homomorphism
        for a in k.all_elements() {
            for b in k.all_elements() {
                assert_eq!(
                    ext.embed(&k.mul(&a, &b)),
                    ext.field.mul(&ext.embed(&a), &ext.embed(&b))
                );
                assert_eq!(
                    ext.embed(&k.add(&a, &b)),
                    ext.field.add(&ext.embed(&a), &ext.embed(&b))
                );
            }
        }
        assert_eq!(ext.embed(&k.one()), ext.field.one());
        // theta carried along
        assert_eq!(ext.field.theta(), ext.embed(&k.theta()));
    }

    #[test]
    fn extension_commutes_with_frobenius() {
        let k = f4();
        let ext = extend_field(&k, 2).unwrap();
        for a in k.all_elements() {
            assert_eq!(ext.embed(&k.frob(&a)), ext.field.frob(&ext.embed(&a)));
        }
    }

    #[test]
    fn extension_of_prime_field_with_x_modulus() {
        // F_2 presented as F_2[x]/(x): the generator is zero, and the
        // embedding into any extension must still work
        let k = CoeffRing::finite_field(2, 2, vec![0, 1], vec![1]).unwrap();
        let ext = extend_field(&k, 2).unwrap();
        assert_eq!(ext.field.dim(), 2);
        assert_eq!(ext.embed(&k.one()), ext.field.one());
        assert_eq!(ext.embed(&k.zero()), ext.field.zero());
    }

    #[test]
    fn trivial_extension_is_identity() {
        let k = f4();
        let ext = extend_field(&k, 1).unwrap();
        assert_eq!(ext.field, k);
        for a in k.all_elements() {
            assert_eq!(ext.embed(&a), a);
        }
    }

    #[test]
    fn fq_basis_extraction() {
        let k = f4();
        // the whole of F_4 as an F_2-space has F_4-dimension 1
        let fp_basis = vec![vec![1, 0], vec![0, 1]];
        let b = fq_basis_of_span(&k, 1, &fp_basis);
        assert_eq!(b.len(), 2); // q = 2 here, so F_q = F_2 and dim_F2 = 2
        // with q = 4 the F_q-dimension is 1
        let k4 = CoeffRing::finite_field(2, 4, vec![1, 1, 1], vec![0, 1]).unwrap();
        let b = fq_basis_of_span(&k4, 1, &fp_basis);
        assert_eq!(b.len(), 1);
    }
}
