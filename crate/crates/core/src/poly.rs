//! Commutative polynomials over a coefficient ring, used both for the base
//! ring A = `F_q[t]` (coefficients constrained to the Frobenius-fixed subfield)
//! and for `k[t]`-module coordinates of t-motives.

use crate::error::{Error, Result};
use crate::ring::{CoeffRing, RingElem};

/// Dense ascending-degree coefficients; trailing coefficient nonzero unless
/// the polynomial is zero.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poly {
    pub coeffs: Vec<RingElem>,
}

impl Poly {
    pub fn new(ring: &CoeffRing, mut coeffs: Vec<RingElem>) -> Self {
        while coeffs.last().map(|c| ring.is_zero(c)) == Some(true) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one(ring: &CoeffRing) -> Self {
        Poly { coeffs: vec![ring.one()] }
    }

    pub fn constant(ring: &CoeffRing, c: RingElem) -> Self {
        Poly::new(ring, vec![c])
    }

    pub fn t(ring: &CoeffRing) -> Self {
        Poly { coeffs: vec![ring.zero(), ring.one()] }
    }

    pub fn monomial(ring: &CoeffRing, c: RingElem, i: usize) -> Self {
        let mut coeffs = vec![ring.zero(); i + 1];
        coeffs[i] = c;
        Poly::new(ring, coeffs)
    }

    /// Polynomial with prime-field coefficients, e.g. from integer arrays.
    pub fn from_prime_coeffs(ring: &CoeffRing, cs: &[u32]) -> Self {
        Poly::new(ring, cs.iter().map(|&c| ring.from_prime(c)).collect())
    }

    pub fn deg(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self, ring: &CoeffRing) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == ring.one()
    }

    pub fn coeff(&self, ring: &CoeffRing, i: usize) -> RingElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| ring.zero())
    }

    pub fn lc(&self, ring: &CoeffRing) -> RingElem {
        self.coeffs.last().cloned().unwrap_or_else(|| ring.zero())
    }

    pub fn is_monic(&self, ring: &CoeffRing) -> bool {
        self.lc(ring) == ring.one()
    }

    pub fn add(&self, ring: &CoeffRing, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(ring.add(&self.coeff(ring, i), &other.coeff(ring, i)));
        }
        Poly::new(ring, out)
    }

    pub fn sub(&self, ring: &CoeffRing, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(ring.sub(&self.coeff(ring, i), &other.coeff(ring, i)));
        }
        Poly::new(ring, out)
    }

    pub fn neg(&self, ring: &CoeffRing) -> Self {
        Poly::new(ring, self.coeffs.iter().map(|c| ring.neg(c)).collect())
    }

    pub fn mul(&self, ring: &CoeffRing, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if ring.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = ring.add(&out[i + j], &ring.mul(a, b));
            }
        }
        Poly::new(ring, out)
    }

    pub fn scale(&self, ring: &CoeffRing, c: &RingElem) -> Self {
        Poly::new(ring, self.coeffs.iter().map(|a| ring.mul(c, a)).collect())
    }

    pub fn shift(&self, ring: &CoeffRing, i: usize) -> Self {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![ring.zero(); i];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly::new(ring, coeffs)
    }

    pub fn pow(&self, ring: &CoeffRing, mut e: usize) -> Self {
        let mut acc = Poly::one(ring);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(ring, &base);
            }
            base = base.mul(ring, &base);
            e >>= 1;
        }
        acc
    }

    /// Division with remainder; the divisor's leading coefficient must be a
    /// unit.
    pub fn divmod(&self, ring: &CoeffRing, divisor: &Self) -> Result<(Poly, Poly)> {
        let db = divisor.deg().ok_or(Error::NonUnitLeadingCoefficient)?;
        let lead_inv = ring
            .inv(&divisor.lc(ring))
            .ok_or(Error::NonUnitLeadingCoefficient)?;
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some(dr) = r.deg() {
            if dr < db {
                break;
            }
            let c = ring.mul(&r.lc(ring), &lead_inv);
            let m = Poly::monomial(ring, c, dr - db);
            q = q.add(ring, &m);
            r = r.sub(ring, &m.mul(ring, divisor));
        }
        Ok((q, r))
    }

    pub fn rem(&self, ring: &CoeffRing, divisor: &Self) -> Result<Poly> {
        Ok(self.divmod(ring, divisor)?.1)
    }

    /// Exact division; errors if the remainder is nonzero.
    pub fn div_exact(&self, ring: &CoeffRing, divisor: &Self) -> Result<Poly> {
        let (q, r) = self.divmod(ring, divisor)?;
        if !r.is_zero() {
            return Err(Error::PreconditionViolated("division is not exact".into()));
        }
        Ok(q)
    }

    pub fn eval(&self, ring: &CoeffRing, x: &RingElem) -> RingElem {
        let mut acc = ring.zero();
        for c in self.coeffs.iter().rev() {
            acc = ring.add(&ring.mul(&acc, x), c);
        }
        acc
    }

    pub fn derivative(&self, ring: &CoeffRing) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (i, c) in self.coeffs.iter().enumerate().skip(1) {
            let mut acc = ring.zero();
            for _ in 0..(i as u32 % ring.p()) {
                acc = ring.add(&acc, c);
            }
            out.push(acc);
        }
        Poly::new(ring, out)
    }

    /// Coefficient-wise q^i-power; fixes t. This is the sigma-twist on `k[t]`.
    pub fn twist(&self, ring: &CoeffRing, i: usize) -> Poly {
        Poly::new(
            ring,
            self.coeffs.iter().map(|c| ring.frob_iter(c, i)).collect(),
        )
    }

    pub fn monic(&self, ring: &CoeffRing) -> Result<Poly> {
        if self.is_zero() {
            return Ok(Poly::zero());
        }
        let inv = ring
            .inv(&self.lc(ring))
            .ok_or(Error::NonUnitLeadingCoefficient)?;
        Ok(self.scale(ring, &inv))
    }

    /// All coefficients lie in F_q (i.e. are Frobenius-fixed).
    pub fn has_fq_coeffs(&self, ring: &CoeffRing) -> bool {
        self.coeffs.iter().all(|c| ring.frob(c) == *c)
    }

    pub fn to_string(&self, ring: &CoeffRing) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = vec![];
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if ring.is_zero(c) {
                continue;
            }
            let cs = ring.elem_to_string(c);
            let t = match i {
                0 => cs,
                1 => {
                    if *c == ring.one() {
                        "t".into()
                    } else {
                        format!("({})t", cs)
                    }
                }
                _ => {
                    if *c == ring.one() {
                        format!("t^{}", i)
                    } else {
                        format!("({})t^{}", cs, i)
                    }
                }
            };
            terms.push(t);
        }
        terms.join(" + ")
    }
}

/// Monic gcd over a field base.
pub fn gcd(ring: &CoeffRing, a: &Poly, b: &Poly) -> Result<Poly> {
    let mut a = a.clone();
    let mut b = b.clone();
    while !b.is_zero() {
        let r = a.rem(ring, &b)?;
        a = b;
        b = r;
    }
    a.monic(ring)
}

/// Extended gcd: (g, u, v) monic with u*a + v*b = g.
pub fn ext_gcd(ring: &CoeffRing, a: &Poly, b: &Poly) -> Result<(Poly, Poly, Poly)> {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut s0 = Poly::one(ring);
    let mut s1 = Poly::zero();
    let mut t0 = Poly::zero();
    let mut t1 = Poly::one(ring);
    while !r1.is_zero() {
        let (q, r) = r0.divmod(ring, &r1)?;
        let ns = s0.sub(ring, &q.mul(ring, &s1));
        let nt = t0.sub(ring, &q.mul(ring, &t1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = ns;
        t0 = t1;
        t1 = nt;
    }
    if r0.is_zero() {
        return Ok((Poly::zero(), Poly::zero(), Poly::zero()));
    }
    let lcinv = ring.inv(&r0.lc(ring)).ok_or(Error::NonUnitLeadingCoefficient)?;
    Ok((
        r0.scale(ring, &lcinv),
        s0.scale(ring, &lcinv),
        t0.scale(ring, &lcinv),
    ))
}

/// gamma: A -> R, evaluation of an `F_q[t]`-polynomial at theta.
pub fn gamma(ring: &CoeffRing, a: &Poly) -> RingElem {
    a.eval(ring, &ring.theta())
}

/// Minimal monic polynomial over F_q satisfied by a sequence of F_p-vectors
/// v_0, v_1, ... (images of t^0, t^1, ...): the least D with
/// sum_{i<D} c_i v_i = -v_D solvable with all c_i in F_q. Returns the
/// polynomial t^D + sum c_i t^i with coefficients embedded in the ring.
///
/// `vecs` must contain at least one more vector than the expected degree.
pub fn fq_minimal_polynomial(ring: &CoeffRing, vecs: &[Vec<u32>]) -> Result<Poly> {
    use crate::linalg::FpMat;
    let p = ring.p();
    let dim = vecs[0].len();
    // F_p-basis of F_q inside the ring
    let fq = fq_basis(ring);
    let e = fq.len();
    let blocks = dim / ring.dim();
    for d in 1..vecs.len() {
        // unknowns: c_{i,u} for i < d, u < e
        let mut m = FpMat::zeros(p, dim, d * e);
        for i in 0..d {
            for (u, lam) in fq.iter().enumerate() {
                let col = crate::ext::mul_scalar_vec(ring, blocks, lam, &vecs[i]);
                for (row, &val) in col.iter().enumerate() {
                    m[(row, i * e + u)] = val;
                }
            }
        }
        let rhs: Vec<u32> = vecs[d].iter().map(|&c| (p - c % p) % p).collect();
        if let Some(sol) = m.solve(&rhs) {
            let mut coeffs = Vec::with_capacity(d + 1);
            for i in 0..d {
                let mut c = ring.zero();
                for (u, lam) in fq.iter().enumerate() {
                    if sol[i * e + u] != 0 {
                        let s = ring.mul(&ring.from_prime(sol[i * e + u]), lam);
                        c = ring.add(&c, &s);
                    }
                }
                coeffs.push(c);
            }
            coeffs.push(ring.one());
            let out = Poly::new(ring, coeffs);
            debug_assert!(out.has_fq_coeffs(ring));
            return Ok(out);
        }
    }
    Err(Error::PreconditionViolated(
        "no F_q-dependency found within the provided powers".into(),
    ))
}

/// An F_p-basis of F_q embedded in the ring (from Frobenius fixed points).
pub fn fq_basis(ring: &CoeffRing) -> Vec<RingElem> {
    use crate::linalg::FpMat;
    let dim = ring.dim();
    let mut m = FpMat::zeros(ring.p(), dim, dim);
    for j in 0..dim {
        let mut e = ring.zero();
        e.coeffs[j] = 1;
        let f = ring.frob(&e);
        for i in 0..dim {
            m[(i, j)] = (f.coeffs[i] + ring.p() - if i == j { 1 } else { 0 }) % ring.p();
        }
    }
    m.kernel_basis().into_iter().map(RingElem::new).collect()
}

/// Parse a polynomial in t written as a sum of monomials with nonnegative
/// integer coefficients, e.g. "t^2 + 2t + 1". Coefficients land in the
/// prime field.
pub fn parse_prime_poly(ring: &CoeffRing, s: &str) -> Result<Poly> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if cleaned.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut out = Poly::zero();
    for term in cleaned.split('+') {
        if term.is_empty() {
            return Err(Error::Parse(format!("bad term in '{}'", s)));
        }
        let (coeff_str, deg) = if let Some(pos) = term.find('t') {
            let c = &term[..pos];
            let rest = &term[pos + 1..];
            let d = if rest.is_empty() {
                1usize
            } else if let Some(stripped) = rest.strip_prefix('^') {
                stripped
                    .parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad exponent in '{}'", term)))?
            } else {
                return Err(Error::Parse(format!("bad term '{}'", term)));
            };
            (c.trim_end_matches('*'), d)
        } else {
            (term, 0usize)
        };
        let c: u32 = if coeff_str.is_empty() {
            1
        } else {
            coeff_str
                .parse()
                .map_err(|_| Error::Parse(format!("bad coefficient '{}'", coeff_str)))?
        };
        let mono = Poly::monomial(ring, ring.from_prime(c), deg);
        out = out.add(ring, &mono);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> CoeffRing {
        CoeffRing::finite_field(2, 2, vec![1, 1, 1], vec![0, 1]).unwrap()
    }

    #[test]
    fn gamma_examples() {
        let r = f4();
        let w = r.gen();
        assert_eq!(gamma(&r, &Poly::t(&r)), w);
        // t^2 + t + 1 is the minimal polynomial of omega
        let a = Poly::from_prime_coeffs(&r, &[1, 1, 1]);
        assert_eq!(gamma(&r, &a), r.zero());
        assert_eq!(gamma(&r, &Poly::one(&r)), r.one());
    }

    #[test]
    fn gamma_is_ring_hom() {
        let r = f4();
        let a = Poly::from_prime_coeffs(&r, &[1, 0, 1]);
        let b = Poly::from_prime_coeffs(&r, &[0, 1, 1]);
        assert_eq!(
            gamma(&r, &a.mul(&r, &b)),
            r.mul(&gamma(&r, &a), &gamma(&r, &b))
        );
        assert_eq!(
            gamma(&r, &a.add(&r, &b)),
            r.add(&gamma(&r, &a), &gamma(&r, &b))
        );
    }

    #[test]
    fn divmod_roundtrip() {
        let r = f4();
        let w = r.gen();
        let a = Poly::new(&r, vec![w.clone(), r.one(), w.clone(), r.one()]);
        let b = Poly::new(&r, vec![r.one(), w]);
        let (q, rem) = a.divmod(&r, &b).unwrap();
        assert_eq!(q.mul(&r, &b).add(&r, &rem), a);
        assert!(rem.deg().map_or(true, |d| d < b.deg().unwrap()));
    }

    #[test]
    fn gcd_of_coprime() {
        let r = f4();
        let t = Poly::t(&r);
        let t1 = t.add(&r, &Poly::one(&r));
        let g = gcd(&r, &t, &t1).unwrap();
        assert!(g.is_one(&r));
        let (g, u, v) = ext_gcd(&r, &t, &t1).unwrap();
        assert!(g.is_one(&r));
        let lhs = u.mul(&r, &t).add(&r, &v.mul(&r, &t1));
        assert!(lhs.is_one(&r));
    }

    #[test]
    fn minimal_polynomial_of_theta() {
        let r = f4();
        let mut vecs = vec![];
        let mut x = r.one();
        for _ in 0..4 {
            vecs.push(x.coeffs.clone());
            x = r.mul(&x, &r.theta());
        }
        let p = fq_minimal_polynomial(&r, &vecs).unwrap();
        assert_eq!(p, Poly::from_prime_coeffs(&r, &[1, 1, 1]));
    }

    #[test]
    fn parse_simple_polys() {
        let r = f4();
        assert_eq!(parse_prime_poly(&r, "t").unwrap(), Poly::t(&r));
        assert_eq!(
            parse_prime_poly(&r, "t^2 + t + 1").unwrap(),
            Poly::from_prime_coeffs(&r, &[1, 1, 1])
        );
        assert_eq!(parse_prime_poly(&r, "1").unwrap(), Poly::one(&r));
        assert!(parse_prime_poly(&r, "").is_err());
    }
}
