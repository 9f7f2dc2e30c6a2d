//! Local shtukas at a prime of `F_q[t]`: the z-adic completion of a t-motive
//! at eps = (p(t)) to finite precision, with Hensel-lifted coordinates,
//! formality and divisibility checks, and local invariants.
//!
//! The uniformizer is fixed as z = p(t), so the completion embeds `k[t]` into
//! `k[z]/(z^n)` through the Hensel root omega(z) of p(X) - z at X = theta.

use crate::error::{Error, Result};
use crate::poly::{fq_minimal_polynomial, gamma, Poly};
use crate::ring::{CoeffRing, RingElem};
use crate::tmodule::TModule;
use crate::tmotive::TMotive;

/// Truncated power series over k: coefficients of z^0..z^{n-1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZSeries {
    pub coeffs: Vec<RingElem>,
}

impl ZSeries {
    pub fn zero(ring: &CoeffRing, n: usize) -> Self {
        ZSeries { coeffs: vec![ring.zero(); n] }
    }

    pub fn constant(ring: &CoeffRing, c: RingElem, n: usize) -> Self {
        let mut s = Self::zero(ring, n);
        s.coeffs[0] = c;
        s
    }

    pub fn z(ring: &CoeffRing, n: usize) -> Self {
        let mut s = Self::zero(ring, n);
        if n > 1 {
            s.coeffs[1] = ring.one();
        }
        s
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self, ring: &CoeffRing) -> bool {
        self.coeffs.iter().all(|c| ring.is_zero(c))
    }

    /// z-valuation; None if zero to the working precision.
    pub fn val(&self, ring: &CoeffRing) -> Option<usize> {
        self.coeffs.iter().position(|c| !ring.is_zero(c))
    }

    pub fn add(&self, ring: &CoeffRing, other: &Self) -> Self {
        assert_eq!(self.prec(), other.prec());
        ZSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| ring.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, ring: &CoeffRing, other: &Self) -> Self {
        assert_eq!(self.prec(), other.prec());
        ZSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| ring.sub(a, b))
                .collect(),
        }
    }

    pub fn mul(&self, ring: &CoeffRing, other: &Self) -> Self {
        let n = self.prec();
        assert_eq!(n, other.prec());
        let mut out = vec![ring.zero(); n];
        for i in 0..n {
            if ring.is_zero(&self.coeffs[i]) {
                continue;
            }
            for j in 0..n - i {
                let t = ring.mul(&self.coeffs[i], &other.coeffs[j]);
                out[i + j] = ring.add(&out[i + j], &t);
            }
        }
        ZSeries { coeffs: out }
    }

    /// Inverse of a unit (constant term a unit) by Newton iteration.
    pub fn inv(&self, ring: &CoeffRing) -> Result<Self> {
        let n = self.prec();
        let c0 = ring
            .inv(&self.coeffs[0])
            .ok_or(Error::PreconditionViolated("series is not a unit".into()))?;
        let mut y = ZSeries::constant(ring, c0, n);
        let two = ZSeries::constant(ring, ring.from_prime(2), n);
        let mut prec = 1;
        while prec < n {
            // y <- y (2 - x y)
            let t = two.sub(ring, &self.mul(ring, &y));
            y = y.mul(ring, &t);
            prec *= 2;
        }
        debug_assert!({
            let p = self.mul(ring, &y);
            p.coeffs[0] == ring.one() && p.coeffs[1..].iter().all(|c| ring.is_zero(c))
        });
        Ok(y)
    }

    /// Coefficient-wise q^i-power (sigma-hat fixes z).
    pub fn twist(&self, ring: &CoeffRing, i: usize) -> Self {
        ZSeries {
            coeffs: self.coeffs.iter().map(|c| ring.frob_iter(c, i)).collect(),
        }
    }

    pub fn truncate(&self, n: usize) -> Self {
        assert!(n <= self.prec());
        ZSeries { coeffs: self.coeffs[..n].to_vec() }
    }
}

/// Evaluate a polynomial over k at a series.
pub fn eval_poly_at_series(ring: &CoeffRing, f: &Poly, x: &ZSeries) -> ZSeries {
    let n = x.prec();
    let mut acc = ZSeries::zero(ring, n);
    for c in f.coeffs.iter().rev() {
        acc = acc.mul(ring, x);
        acc.coeffs[0] = ring.add(&acc.coeffs[0], c);
    }
    acc
}

/// Hensel-lift the root of p(X) - z starting at the simple root x0 of p.
pub fn hensel_root(ring: &CoeffRing, p: &Poly, x0: &RingElem, n: usize) -> Result<ZSeries> {
    let pd = p.derivative(ring);
    if ring.is_zero(&pd.eval(ring, x0)) {
        return Err(Error::PreconditionViolated(
            "root of p is not simple; Hensel lifting fails".into(),
        ));
    }
    let mut omega = ZSeries::constant(ring, x0.clone(), n);
    let z = ZSeries::z(ring, n);
    let mut prec = 1;
    while prec < n {
        // omega <- omega - (p(omega) - z) / p'(omega)
        let num = eval_poly_at_series(ring, p, &omega).sub(ring, &z);
        let den = eval_poly_at_series(ring, &pd, &omega).inv(ring)?;
        omega = omega.sub(ring, &num.mul(ring, &den));
        prec *= 2;
    }
    // exactness at full precision
    let check = eval_poly_at_series(ring, p, &omega).sub(ring, &z);
    if !check.is_zero(ring) {
        return Err(Error::PreconditionViolated("Hensel iteration did not converge".into()));
    }
    Ok(omega)
}

/// Square matrix over `k[z]/(z^n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZSMat {
    pub n: usize,
    pub size: usize,
    pub data: Vec<ZSeries>,
}

impl ZSMat {
    pub fn zero(ring: &CoeffRing, size: usize, n: usize) -> Self {
        ZSMat {
            n,
            size,
            data: vec![ZSeries::zero(ring, n); size * size],
        }
    }

    pub fn mul(&self, ring: &CoeffRing, other: &Self) -> Self {
        assert_eq!(self.size, other.size);
        let mut out = ZSMat::zero(ring, self.size, self.n);
        for i in 0..self.size {
            for k in 0..self.size {
                for j in 0..self.size {
                    let t = self[(i, k)].mul(ring, &other[(k, j)]);
                    out[(i, j)] = out[(i, j)].add(ring, &t);
                }
            }
        }
        out
    }

    pub fn twist(&self, ring: &CoeffRing, i: usize) -> Self {
        ZSMat {
            n: self.n,
            size: self.size,
            data: self.data.iter().map(|s| s.twist(ring, i)).collect(),
        }
    }

    pub fn det(&self, ring: &CoeffRing) -> ZSeries {
        if self.size == 0 {
            let mut one = ZSeries::zero(ring, self.n);
            one.coeffs[0] = ring.one();
            return one;
        }
        if self.size == 1 {
            return self[(0, 0)].clone();
        }
        let mut acc = ZSeries::zero(ring, self.n);
        for i in 0..self.size {
            let mut minor = ZSMat::zero(ring, self.size - 1, self.n);
            let mut mi = 0;
            for ii in 0..self.size {
                if ii == i {
                    continue;
                }
                let mut mj = 0;
                for jj in 1..self.size {
                    minor[(mi, mj)] = self[(ii, jj)].clone();
                    mj += 1;
                }
                mi += 1;
            }
            let term = self[(i, 0)].mul(ring, &minor.det(ring));
            if i % 2 == 0 {
                acc = acc.add(ring, &term);
            } else {
                acc = acc.sub(ring, &term);
            }
        }
        acc
    }

    pub fn truncate(&self, ring: &CoeffRing, n: usize) -> Self {
        let _ = ring;
        ZSMat {
            n,
            size: self.size,
            data: self.data.iter().map(|s| s.truncate(n)).collect(),
        }
    }

    /// Reduction mod z as a k-matrix (row-major).
    pub fn mod_z(&self, ring: &CoeffRing) -> Vec<RingElem> {
        let _ = ring;
        self.data.iter().map(|s| s.coeffs[0].clone()).collect()
    }
}

impl std::ops::Index<(usize, usize)> for ZSMat {
    type Output = ZSeries;
    fn index(&self, (i, j): (usize, usize)) -> &ZSeries {
        &self.data[i * self.size + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ZSMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ZSeries {
        &mut self.data[i * self.size + j]
    }
}

/// A truncated local shtuka at eps = (p(t)).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalShtuka {
    pub ring: CoeffRing,
    /// The prime p(t), monic irreducible over F_q.
    pub eps: Poly,
    /// deg p = `[F_eps : F_q]`; the completed Frobenius is sigma^f.
    pub f_deg: usize,
    /// Working precision n: everything is modulo z^n.
    pub precision: usize,
    pub rank: usize,
    pub tauhat: ZSMat,
    /// The Hensel coordinate omega(z) used for the substitution.
    pub omega: ZSeries,
}

/// The characteristic prime: minimal polynomial of theta over F_q.
pub fn char_prime(e: &TModule) -> Result<Poly> {
    let ring = &e.ring;
    if !ring.is_field() {
        return Err(Error::UnsupportedBase);
    }
    let mut vecs = vec![];
    let mut x = ring.one();
    for _ in 0..=ring.dim() + 1 {
        vecs.push(x.coeffs.clone());
        x = ring.mul(&x, &ring.theta());
    }
    fq_minimal_polynomial(ring, &vecs)
}

/// Monic irreducibility over F_q for a polynomial with F_q-coefficients,
/// by the q-power criterion computed inside `F_q[t]`/(p).
pub fn is_irreducible_fq(ring: &CoeffRing, p: &Poly) -> Result<bool> {
    if !p.has_fq_coeffs(ring) || !p.is_monic(ring) {
        return Ok(false);
    }
    let d = match p.deg() {
        None | Some(0) => return Ok(false),
        Some(d) => d,
    };
    if d == 1 {
        return Ok(true);
    }
    let t = Poly::t(ring);
    // t^{q^j} mod p for j = 1..d
    let mut powers = vec![];
    let mut cur = t.clone();
    for _ in 0..d {
        cur = pow_mod(ring, &cur, ring.q(), p)?;
        powers.push(cur.clone());
    }
    if powers[d - 1] != t.rem(ring, p)? {
        return Ok(false);
    }
    for l in prime_divisors(d) {
        let diff = powers[d / l - 1].sub(ring, &t);
        let g = crate::poly::gcd(ring, p, &diff)?;
        if !g.is_one(ring) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn pow_mod(ring: &CoeffRing, base: &Poly, mut e: u64, m: &Poly) -> Result<Poly> {
    let mut acc = Poly::one(ring);
    let mut b = base.rem(ring, m)?;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(ring, &b).rem(ring, m)?;
        }
        b = b.mul(ring, &b).rem(ring, m)?;
        e >>= 1;
    }
    Ok(acc)
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = vec![];
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// The local shtuka of a motive at the prime p, to precision n.
///
/// The anchor of the Hensel lift is theta when p(theta) = 0 (characteristic
/// prime), otherwise the lexicographically smallest root of p in k (etale
/// prime). The tau-matrix is the f-fold twisted product
/// T T^(q) ... T^(q^{f-1}) evaluated at t = omega(z).
pub fn local_shtuka_at(m: &TMotive, p: &Poly, n: usize) -> Result<LocalShtuka> {
    let ring = &m.ring;
    if n == 0 {
        return Err(Error::PrecisionTooLow("precision must be at least 1".into()));
    }
    let p = p.monic(ring)?;
    if !is_irreducible_fq(ring, &p)? {
        return Err(Error::PreconditionViolated(
            "p must be monic irreducible over F_q".into(),
        ));
    }
    let f_deg = p.deg().unwrap();
    let anchor = if ring.is_zero(&gamma(ring, &p)) {
        ring.theta()
    } else {
        // etale prime: smallest root of p inside k
        find_root_in_field(ring, &p).ok_or(Error::ResidueFieldTooSmall)?
    };
    let omega = hensel_root(ring, &p, &anchor, n)?;
    // twisted product in k[t], then substitute t = omega(z)
    let mut prod = m.tmat.clone();
    for i in 1..f_deg {
        prod = prod.mul(ring, &m.tmat.twist(ring, i));
    }
    let mut tauhat = ZSMat::zero(ring, m.rank, n);
    for i in 0..m.rank {
        for j in 0..m.rank {
            tauhat[(i, j)] = eval_poly_at_series(ring, &prod[(i, j)], &omega);
        }
    }
    Ok(LocalShtuka {
        ring: ring.clone(),
        eps: p,
        f_deg,
        precision: n,
        rank: m.rank,
        tauhat,
        omega,
    })
}

fn find_root_in_field(ring: &CoeffRing, p: &Poly) -> Option<RingElem> {
    // the roots live in the subfield of order q^{deg p}; it exists inside k
    // iff deg p divides [k : F_q]
    let d = p.deg().unwrap();
    if ring.field_degree() % d != 0 {
        return None;
    }
    // kernel of frob^d - id
    let dim = ring.dim();
    let mut mat = crate::linalg::FpMat::zeros(ring.p(), dim, dim);
    for j in 0..dim {
        let mut e = ring.zero();
        e.coeffs[j] = 1;
        let f = ring.frob_iter(&e, d);
        for i in 0..dim {
            mat[(i, j)] = (f.coeffs[i] + ring.p() - if i == j { 1 } else { 0 }) % ring.p();
        }
    }
    let kb = mat.kernel_basis();
    let mut candidates: Vec<RingElem> = crate::linalg::span_elements(ring.p(), &kb, dim)
        .into_iter()
        .map(RingElem::new)
        .collect();
    candidates.sort();
    candidates
        .into_iter()
        .find(|x| ring.is_zero(&p.eval(ring, x)))
}

impl LocalShtuka {
    pub fn truncate(&self, n: usize) -> Result<LocalShtuka> {
        if n == 0 || n > self.precision {
            return Err(Error::PrecisionTooLow(format!(
                "cannot truncate precision {} to {}",
                self.precision, n
            )));
        }
        Ok(LocalShtuka {
            ring: self.ring.clone(),
            eps: self.eps.clone(),
            f_deg: self.f_deg,
            precision: n,
            rank: self.rank,
            tauhat: self.tauhat.truncate(&self.ring, n),
            omega: self.omega.truncate(n),
        })
    }

    /// The reduction mod z as a finite shtuka over k for the q^f-Frobenius.
    fn special_fiber(&self) -> Vec<RingElem> {
        self.tauhat.mod_z(&self.ring)
    }

    /// Twisted product of the special fiber with q-hat twists.
    fn fiber_twisted_product(&self, steps: usize) -> Vec<RingElem> {
        let ring = &self.ring;
        let r = self.rank;
        let fiber = self.special_fiber();
        let mut acc: Vec<RingElem> = (0..r * r)
            .map(|i| if i % r == i / r { ring.one() } else { ring.zero() })
            .collect();
        for s in 0..steps {
            let mut next = vec![ring.zero(); r * r];
            for i in 0..r {
                for kk in 0..r {
                    if ring.is_zero(&acc[i * r + kk]) {
                        continue;
                    }
                    for j in 0..r {
                        let tw = ring.frob_iter(&fiber[kk * r + j], s * self.f_deg);
                        let t = ring.mul(&acc[i * r + kk], &tw);
                        next[i * r + j] = ring.add(&next[i * r + j], &t);
                    }
                }
            }
            acc = next;
        }
        acc
    }
}

/// Topological nilpotence of tau-hat: the reduction mod z is nilpotent as a
/// q^f-semilinear operator.
pub fn is_formal(l: &LocalShtuka) -> bool {
    let ring = &l.ring;
    let prod = l.fiber_twisted_product(l.rank.max(1));
    prod.iter().all(|e| ring.is_zero(e))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalInvariants {
    /// log_q of the order of E[eps^j] for j = 1..=n.
    pub order_exponents: Vec<usize>,
    /// dim_k coker tau-hat = the local dimension d.
    pub omega_dim: usize,
    /// Rank of the etale part of the special fiber.
    pub etale_rank: usize,
}

/// Elementary z-exponents of a matrix over `k[z]/(z^n)` by valuation-pivot
/// elimination. Errors when an exponent reaches the precision.
fn z_elementary_exponents(ring: &CoeffRing, m: &ZSMat) -> Result<Vec<usize>> {
    let n = m.n;
    let size = m.size;
    let mut work = m.clone();
    let mut exps = vec![];
    let mut active: Vec<usize> = (0..size).collect(); // remaining rows/cols
    let mut rows: Vec<usize> = (0..size).collect();
    let mut cols: Vec<usize> = (0..size).collect();
    while !rows.is_empty() {
        // pivot of minimal valuation
        let mut best: Option<(usize, usize, usize)> = None;
        for &i in &rows {
            for &j in &cols {
                if let Some(v) = work[(i, j)].val(ring) {
                    if best.map_or(true, |(_, _, bv)| v < bv) {
                        best = Some((i, j, v));
                    }
                }
            }
        }
        let Some((pi, pj, v)) = best else {
            return Err(Error::PrecisionTooLow(
                "matrix vanishes to working precision".into(),
            ));
        };
        // clear the pivot row and column
        let piv = &work[(pi, pj)].clone();
        // unit u with piv = u * z^v
        let mut unit = ZSeries::zero(ring, n);
        for idx in v..n {
            unit.coeffs[idx - v] = piv.coeffs[idx].clone();
        }
        let unit_inv = unit.inv(ring)?;
        for &i in &rows {
            if i == pi {
                continue;
            }
            if let Some(vi) = work[(i, pj)].val(ring) {
                debug_assert!(vi >= v);
                // factor = entry / pivot = (entry-unit shifted) * unit_inv * z^{vi - v}
                let e = work[(i, pj)].clone();
                let mut eu = ZSeries::zero(ring, n);
                for idx in vi..n {
                    eu.coeffs[idx - vi] = e.coeffs[idx].clone();
                }
                let mut factor = eu.mul(ring, &unit_inv);
                // shift by z^{vi - v}
                let shift = vi - v;
                let mut shifted = ZSeries::zero(ring, n);
                for idx in 0..n - shift {
                    shifted.coeffs[idx + shift] = factor.coeffs[idx].clone();
                }
                factor = shifted;
                for &j in &cols {
                    let t = factor.mul(ring, &work[(pi, j)]);
                    work[(i, j)] = work[(i, j)].sub(ring, &t);
                }
            }
        }
        for &j in &cols {
            if j == pj {
                continue;
            }
            if let Some(vj) = work[(pi, j)].val(ring) {
                debug_assert!(vj >= v);
                let e = work[(pi, j)].clone();
                let mut eu = ZSeries::zero(ring, n);
                for idx in vj..n {
                    eu.coeffs[idx - vj] = e.coeffs[idx].clone();
                }
                let mut factor = eu.mul(ring, &unit_inv);
                let shift = vj - v;
                let mut shifted = ZSeries::zero(ring, n);
                for idx in 0..n - shift {
                    shifted.coeffs[idx + shift] = factor.coeffs[idx].clone();
                }
                factor = shifted;
                for &i in &rows {
                    let t = factor.mul(ring, &work[(i, pj)]);
                    work[(i, j)] = work[(i, j)].sub(ring, &t);
                }
            }
        }
        exps.push(v);
        rows.retain(|&i| i != pi);
        cols.retain(|&j| j != pj);
        active.pop();
    }
    exps.sort();
    Ok(exps)
}

/// Order exponents, co-Lie dimension, and etale rank of the special fiber.
/// Requires the precision to exceed the local dimension.
pub fn local_invariants(l: &LocalShtuka) -> Result<LocalInvariants> {
    let ring = &l.ring;
    let exps = z_elementary_exponents(ring, &l.tauhat)?;
    let omega_dim: usize = exps.iter().sum();
    if omega_dim >= l.precision {
        return Err(Error::PrecisionTooLow(format!(
            "local dimension {} needs precision > {}",
            omega_dim, omega_dim
        )));
    }
    // det consistency: val(det tauhat) = omega_dim
    let dv = l.tauhat.det(ring).val(ring);
    if dv != Some(omega_dim) {
        return Err(Error::PrecisionTooLow(
            "determinant valuation disagrees with elementary exponents".into(),
        ));
    }
    // etale rank: k-rank of the r-fold twisted product of the fiber
    let prod = l.fiber_twisted_product(l.rank.max(1));
    let etale_rank = k_matrix_rank(ring, l.rank, &prod);
    // |E[eps^j]| = q-hat^{r j} = q^{f r j}
    let order_exponents = (1..=l.precision)
        .map(|j| l.f_deg * l.rank * j)
        .collect();
    Ok(LocalInvariants {
        order_exponents,
        omega_dim,
        etale_rank,
    })
}

fn k_matrix_rank(ring: &CoeffRing, size: usize, m: &[RingElem]) -> usize {
    let dimk = ring.dim();
    let mut cols = Vec::with_capacity(size * dimk);
    for j in 0..size {
        for c in 0..dimk {
            let mut lam = ring.zero();
            lam.coeffs[c] = 1;
            let mut col = Vec::with_capacity(size * dimk);
            for i in 0..size {
                col.extend(ring.mul(&m[i * size + j], &lam).coeffs);
            }
            cols.push(col);
        }
    }
    crate::linalg::FpMat::from_columns(ring.p(), size * dimk, &cols).rank() / dimk
}

/// Divisibility of the truncated module data: multiplication by z embeds
/// `M-hat/z^j` into M-hat/z^{j+1} onto z M-hat, compatibly with tau-hat.
/// Operates on the expanded k-linear model so corrupted data can be caught;
/// see `divisibility_check_raw`.
pub fn divisibility_check(l: &LocalShtuka) -> bool {
    let ring = &l.ring;
    let (zmat, amat) = expanded_model(l);
    divisibility_check_raw(ring, l.rank, l.precision, &zmat, &amat)
}

/// The k-linear model of a truncated local shtuka: the space `(k[z]/z^n)^r`
/// flattened to dimension r*n over k, the z-shift matrix, and the matrix A
/// of tau-hat with v -> A v^(q-hat) (entries over k, basis (component i,
/// z-power j) at index i*n + j).
pub fn expanded_model(l: &LocalShtuka) -> (Vec<RingElem>, Vec<RingElem>) {
    let ring = &l.ring;
    let r = l.rank;
    let n = l.precision;
    let dim = r * n;
    let mut zmat = vec![ring.zero(); dim * dim];
    for i in 0..r {
        for j in 0..n - 1 {
            // z * (i, j) = (i, j+1)
            zmat[(i * n + j + 1) * dim + (i * n + j)] = ring.one();
        }
    }
    let mut amat = vec![ring.zero(); dim * dim];
    for i2 in 0..r {
        for j2 in 0..n {
            let col = i2 * n + j2;
            // tauhat * (z^{j2} e_{i2}): series column
            for i in 0..r {
                let s = &l.tauhat[(i, i2)];
                for j in 0..n {
                    if j >= j2 {
                        let c = &s.coeffs[j - j2];
                        if !ring.is_zero(c) {
                            amat[(i * n + j) * dim + col] = c.clone();
                        }
                    }
                }
            }
        }
    }
    (zmat, amat)
}

/// Raw divisibility check on the expanded model: the z-shift must have rank
/// r(n-1) with n-step nilpotency (freeness of each truncation layer) and
/// commute with the semilinear structure matrix.
pub fn divisibility_check_raw(
    ring: &CoeffRing,
    r: usize,
    n: usize,
    zmat: &[RingElem],
    amat: &[RingElem],
) -> bool {
    let dim = r * n;
    // rank of z^j must be r(n - j): multiplication by z is injective on
    // each quotient layer, i.e. M-hat is free
    let mut acc: Vec<RingElem> = identity_k(ring, dim);
    for j in 1..=n {
        acc = mat_mul_k(ring, zmat, &acc, dim);
        let rank = k_matrix_rank(ring, dim, &acc);
        if rank != r * (n - j) {
            return false;
        }
    }
    // commutation A Z = Z A (z is fixed by sigma-hat, so the twist does not
    // affect the z-shift)
    let az = mat_mul_k(ring, amat, zmat, dim);
    let za = mat_mul_k(ring, zmat, amat, dim);
    az == za
}

fn identity_k(ring: &CoeffRing, n: usize) -> Vec<RingElem> {
    let mut m = vec![ring.zero(); n * n];
    for i in 0..n {
        m[i * n + i] = ring.one();
    }
    m
}

fn mat_mul_k(ring: &CoeffRing, a: &[RingElem], b: &[RingElem], n: usize) -> Vec<RingElem> {
    let mut out = vec![ring.zero(); n * n];
    for i in 0..n {
        for k in 0..n {
            if ring.is_zero(&a[i * n + k]) {
                continue;
            }
            for j in 0..n {
                let t = ring.mul(&a[i * n + k], &b[k * n + j]);
                out[i * n + j] = ring.add(&out[i * n + j], &t);
            }
        }
    }
    out
}
