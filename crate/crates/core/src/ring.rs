//! Coefficient rings: finite fields `F_p[x]/(f)` containing F_q, and truncated
//! local algebras `k[eps]/(eps^N)` over them, together with the q-Frobenius
//! and the characteristic point theta = gamma(t).
//!
//! Elements are dense coordinate vectors over F_p with respect to the basis
//! x^i (field kind) or x^i * eps^j (truncated kind, blocks of ascending
//! eps-power).

use crate::error::{Error, Result};
use crate::fppoly;
use crate::linalg::FpMat;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RingElem {
    pub coeffs: Vec<u32>,
}

impl RingElem {
    pub fn new(coeffs: Vec<u32>) -> Self {
        RingElem { coeffs }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingKind {
    FiniteField,
    Truncated { nil_index: usize },
}

#[derive(Debug, Clone)]
pub struct CoeffRing {
    p: u32,
    /// q = p^q_exp; the Frobenius of the theory is x -> x^q.
    q: u64,
    q_exp: usize,
    kind: RingKind,
    /// Monic irreducible modulus over F_p of the field part; its degree is
    /// the F_p-dimension of the field part.
    modulus: Vec<u32>,
    base_dim: usize,
    theta: RingElem,
    frob_mat: FpMat,
    frob_inv_mat: Option<FpMat>,
}

impl PartialEq for CoeffRing {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
            && self.q == other.q
            && self.kind == other.kind
            && self.modulus == other.modulus
            && self.theta == other.theta
    }
}
impl Eq for CoeffRing {}

impl CoeffRing {
    pub fn finite_field(p: u32, q: u64, modulus: Vec<u32>, theta: Vec<u32>) -> Result<Self> {
        Self::build(p, q, modulus, RingKind::FiniteField, theta)
    }

    pub fn truncated(
        p: u32,
        q: u64,
        modulus: Vec<u32>,
        nil_index: usize,
        theta: Vec<u32>,
    ) -> Result<Self> {
        if nil_index == 0 {
            return Err(Error::InvalidRing("nil_index must be >= 1".into()));
        }
        Self::build(p, q, modulus, RingKind::Truncated { nil_index }, theta)
    }

    fn build(p: u32, q: u64, modulus: Vec<u32>, kind: RingKind, theta: Vec<u32>) -> Result<Self> {
        if !fppoly::is_prime(p) {
            return Err(Error::InvalidRing(format!("{} is not prime", p)));
        }
        let mut q_exp = 0usize;
        let mut qq = q;
        while qq > 1 {
            if qq % p as u64 != 0 {
                return Err(Error::InvalidRing(format!("q = {} is not a power of p = {}", q, p)));
            }
            qq /= p as u64;
            q_exp += 1;
        }
        if q_exp == 0 {
            return Err(Error::InvalidRing("q must be at least p".into()));
        }
        let modulus = fppoly::normalize(modulus);
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidRing("modulus must be monic of degree >= 1".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidRing("modulus coefficients must be reduced mod p".into()));
        }
        if !fppoly::is_irreducible(p, &modulus) {
            return Err(Error::InvalidRing("modulus is not irreducible over F_p".into()));
        }
        let base_dim = modulus.len() - 1;
        if base_dim % q_exp != 0 {
            return Err(Error::InvalidRing(format!(
                "field of dimension {} over F_p does not contain F_q = F_{}",
                base_dim, q
            )));
        }
        let mut ring = CoeffRing {
            p,
            q,
            q_exp,
            kind,
            modulus,
            base_dim,
            theta: RingElem::new(vec![]),
            frob_mat: FpMat::zeros(p, 0, 0),
            frob_inv_mat: None,
        };
        let dim = ring.dim();
        if theta.len() != dim {
            return Err(Error::InvalidRing(format!(
                "theta has {} coordinates, ring has dimension {}",
                theta.len(),
                dim
            )));
        }
        if theta.iter().any(|&c| c >= p) {
            return Err(Error::InvalidRing("theta coordinates must be reduced mod p".into()));
        }
        ring.theta = RingElem::new(theta);
        // q-Frobenius as an F_p-matrix on the coordinate space.
        let mut cols = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut e = ring.zero();
            e.coeffs[i] = 1;
            let mut f = e;
            for _ in 0..q_exp {
                f = ring.pow_raw(&f, p as u64);
            }
            cols.push(f.coeffs);
        }
        ring.frob_mat = FpMat::from_columns(p, dim, &cols);
        ring.frob_inv_mat = ring.frob_mat.inverse();
        Ok(ring)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    /// e with q = p^e.
    pub fn q_exp(&self) -> usize {
        self.q_exp
    }

    pub fn kind(&self) -> &RingKind {
        &self.kind
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// F_p-dimension of the field part.
    pub fn base_dim(&self) -> usize {
        self.base_dim
    }

    /// Degree of the field part over F_q.
    pub fn field_degree(&self) -> usize {
        self.base_dim / self.q_exp
    }

    pub fn nil_index(&self) -> usize {
        match self.kind {
            RingKind::FiniteField => 1,
            RingKind::Truncated { nil_index } => nil_index,
        }
    }

    pub fn is_field(&self) -> bool {
        self.nil_index() == 1
    }

    /// F_p-dimension of the whole ring.
    pub fn dim(&self) -> usize {
        self.base_dim * self.nil_index()
    }

    pub fn order(&self) -> u64 {
        (self.p as u64).pow(self.dim() as u32)
    }

    pub fn theta(&self) -> RingElem {
        self.theta.clone()
    }

    pub fn zero(&self) -> RingElem {
        RingElem::new(vec![0; self.dim()])
    }

    pub fn one(&self) -> RingElem {
        let mut e = self.zero();
        e.coeffs[0] = 1;
        e
    }

    /// Image of the field generator x.
    pub fn gen(&self) -> RingElem {
        let mut e = self.zero();
        if self.base_dim > 1 {
            e.coeffs[1] = 1;
        } else {
            // prime field: the generator is 1
            e.coeffs[0] = 1;
        }
        e
    }

    /// The nilpotent generator eps (zero in a field).
    pub fn eps(&self) -> RingElem {
        let mut e = self.zero();
        if self.nil_index() > 1 {
            e.coeffs[self.base_dim] = 1;
        }
        e
    }

    pub fn from_prime(&self, c: u32) -> RingElem {
        let mut e = self.zero();
        e.coeffs[0] = c % self.p;
        e
    }

    pub fn is_zero(&self, a: &RingElem) -> bool {
        a.coeffs.iter().all(|&c| c == 0)
    }

    pub fn add(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.check(a);
        self.check(b);
        RingElem::new(
            a.coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| (x + y) % self.p)
                .collect(),
        )
    }

    pub fn sub(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.check(a);
        self.check(b);
        RingElem::new(
            a.coeffs
                .iter()
                .zip(&b.coeffs)
                .map(|(&x, &y)| (x + self.p - y) % self.p)
                .collect(),
        )
    }

    pub fn neg(&self, a: &RingElem) -> RingElem {
        self.check(a);
        RingElem::new(a.coeffs.iter().map(|&x| (self.p - x) % self.p).collect())
    }

    pub fn mul(&self, a: &RingElem, b: &RingElem) -> RingElem {
        self.check(a);
        self.check(b);
        let n = self.nil_index();
        let d = self.base_dim;
        let mut blocks = vec![vec![0u32; d]; n];
        for i in 0..n {
            let ai = &a.coeffs[i * d..(i + 1) * d];
            if ai.iter().all(|&c| c == 0) {
                continue;
            }
            for j in 0..n - i {
                let bj = &b.coeffs[j * d..(j + 1) * d];
                if bj.iter().all(|&c| c == 0) {
                    continue;
                }
                let prod = fppoly::rem(self.p, &fppoly::mul(self.p, ai, bj), &self.modulus);
                for (k, &c) in prod.iter().enumerate() {
                    blocks[i + j][k] = (blocks[i + j][k] + c) % self.p;
                }
            }
        }
        RingElem::new(blocks.concat())
    }

    pub fn pow(&self, a: &RingElem, e: u64) -> RingElem {
        self.pow_raw(a, e)
    }

    fn pow_raw(&self, a: &RingElem, mut e: u64) -> RingElem {
        let mut acc = self.one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// x -> x^q, the q-Frobenius. A ring endomorphism; an automorphism on
    /// fields.
    pub fn frob(&self, a: &RingElem) -> RingElem {
        self.check(a);
        RingElem::new(self.frob_mat.mul_vec(&a.coeffs))
    }

    /// x -> x^{q^i}.
    pub fn frob_iter(&self, a: &RingElem, i: usize) -> RingElem {
        let mut out = a.clone();
        let reduce = if self.is_field() { self.field_degree() } else { 0 };
        let steps = if reduce > 0 { i % reduce } else { i };
        for _ in 0..steps {
            out = self.frob(&out);
        }
        out
    }

    /// Inverse of the q-Frobenius; fields only.
    pub fn frob_inv(&self, a: &RingElem) -> Result<RingElem> {
        self.check(a);
        let m = self.frob_inv_mat.as_ref().ok_or(Error::UnsupportedBase)?;
        Ok(RingElem::new(m.mul_vec(&a.coeffs)))
    }

    pub fn is_unit(&self, a: &RingElem) -> bool {
        self.check(a);
        a.coeffs[..self.base_dim].iter().any(|&c| c != 0)
    }

    pub fn is_nilpotent(&self, a: &RingElem) -> bool {
        !self.is_unit(a)
    }

    pub fn inv(&self, a: &RingElem) -> Option<RingElem> {
        if !self.is_unit(a) {
            return None;
        }
        // invert the field-part residue, then lift by Newton iteration
        let res = &a.coeffs[..self.base_dim];
        let (g, u, _) = ext_gcd_fp(self.p, res, &self.modulus);
        debug_assert_eq!(fppoly::deg(&g), Some(0));
        let ginv = fppoly::inv_mod_p(self.p, g[0]);
        let mut inv0 = vec![0u32; self.base_dim];
        for (i, &c) in u.iter().enumerate() {
            inv0[i] = ((c as u64 * ginv as u64) % self.p as u64) as u32;
        }
        let mut y = self.zero();
        y.coeffs[..self.base_dim].copy_from_slice(&inv0);
        if self.nil_index() > 1 {
            let two = self.from_prime(2);
            let mut steps = 0;
            let mut n = 1;
            while n < self.nil_index() {
                n *= 2;
                steps += 1;
            }
            for _ in 0..steps {
                // y <- y(2 - ay)
                let t = self.sub(&two, &self.mul(a, &y));
                y = self.mul(&y, &t);
            }
        }
        debug_assert!(self.is_zero(&self.sub(&self.mul(a, &y), &self.one())));
        Some(y)
    }

    /// The q elements of F_q inside the ring, sorted lexicographically.
    /// These are exactly the Frobenius fixed points x^q = x.
    pub fn frob_fixed_points(&self) -> Vec<RingElem> {
        let dim = self.dim();
        let mut m = self.frob_mat.clone();
        for i in 0..dim {
            m[(i, i)] = (m[(i, i)] + self.p - 1) % self.p;
        }
        let kb = m.kernel_basis();
        let mut pts: Vec<RingElem> = crate::linalg::span_elements(self.p, &kb, dim)
            .into_iter()
            .map(RingElem::new)
            .collect();
        pts.sort();
        debug_assert_eq!(pts.len() as u64, self.q);
        pts
    }

    /// All ring elements in lexicographic coordinate order. Only for small
    /// rings; guarded by an order bound.
    pub fn all_elements(&self) -> Vec<RingElem> {
        assert!(self.order() <= 1 << 20, "ring too large to enumerate");
        let dim = self.dim();
        let mut out = Vec::with_capacity(self.order() as usize);
        let mut coeffs = vec![0u32; dim];
        loop {
            out.push(RingElem::new(coeffs.clone()));
            let mut i = 0;
            loop {
                if i == dim {
                    return out;
                }
                coeffs[i] += 1;
                if coeffs[i] < self.p {
                    break;
                }
                coeffs[i] = 0;
                i += 1;
            }
        }
    }

    /// Multiplication-by-a as an F_p-matrix on the coordinate space.
    pub fn mul_matrix(&self, a: &RingElem) -> FpMat {
        let dim = self.dim();
        let mut cols = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut e = self.zero();
            e.coeffs[i] = 1;
            cols.push(self.mul(a, &e).coeffs);
        }
        FpMat::from_columns(self.p, dim, &cols)
    }

    pub fn elem_to_string(&self, a: &RingElem) -> String {
        let mut terms = vec![];
        let d = self.base_dim;
        for (idx, &c) in a.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let i = idx % d;
            let j = idx / d;
            let mut s = String::new();
            if c != 1 || (i == 0 && j == 0) {
                s.push_str(&c.to_string());
            }
            if i > 0 {
                if !s.is_empty() {
                    s.push('*');
                }
                s.push('x');
                if i > 1 {
                    s.push_str(&format!("^{}", i));
                }
            }
            if j > 0 {
                if !s.is_empty() {
                    s.push('*');
                }
                s.push_str("e");
                if j > 1 {
                    s.push_str(&format!("^{}", j));
                }
            }
            terms.push(s);
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    fn check(&self, a: &RingElem) {
        assert_eq!(a.coeffs.len(), self.dim(), "element has wrong coordinate length");
    }
}

/// Extended Euclid over F_p[x]: returns (g, u, v) with u*a + v*b = g.
fn ext_gcd_fp(p: u32, a: &[u32], b: &[u32]) -> (Vec<u32>, Vec<u32>, Vec<u32>) {
    let mut r0 = fppoly::normalize(a.to_vec());
    let mut r1 = fppoly::normalize(b.to_vec());
    let mut s0 = vec![1u32];
    let mut s1: Vec<u32> = vec![];
    let mut t0: Vec<u32> = vec![];
    let mut t1 = vec![1u32];
    while !r1.is_empty() {
        let (quo, rem) = divmod_fp(p, &r0, &r1);
        let ns = fppoly::sub(p, &s0, &fppoly::mul(p, &quo, &s1));
        let nt = fppoly::sub(p, &t0, &fppoly::mul(p, &quo, &t1));
        r0 = r1;
        r1 = rem;
        s0 = s1;
        s1 = ns;
        t0 = t1;
        t1 = nt;
    }
    (r0, s0, t0)
}

fn divmod_fp(p: u32, a: &[u32], b: &[u32]) -> (Vec<u32>, Vec<u32>) {
    let b = fppoly::normalize(b.to_vec());
    assert!(!b.is_empty());
    let lead_inv = fppoly::inv_mod_p(p, *b.last().unwrap());
    let mut r = fppoly::normalize(a.to_vec());
    let mut q = vec![0u32; a.len().max(1)];
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let c = ((*r.last().unwrap() as u64 * lead_inv as u64) % p as u64) as u32;
        q[shift] = c;
        let mut sub = vec![0u32; shift];
        sub.extend(b.iter().map(|&x| ((x as u64 * c as u64) % p as u64) as u32));
        r = fppoly::sub(p, &r, &sub);
        if r.is_empty() {
            break;
        }
    }
    (fppoly::normalize(q), r)
}
