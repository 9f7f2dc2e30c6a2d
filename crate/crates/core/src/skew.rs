//! The twisted polynomial ring `R{tau}` with tau*b = b^q*tau, modelling
//! F_q-linear endomorphisms of the additive group. Provides arithmetic,
//! right division, the standard-form conjugation over truncated rings, and
//! rectangular matrices of skew polynomials.

use crate::error::{Error, Result};
use crate::ring::{CoeffRing, RingElem};

/// Coefficients ascending in tau-degree; the trailing coefficient is nonzero
/// unless the polynomial is zero (empty vector). The zero polynomial has
/// degree None.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SkewPoly {
    pub coeffs: Vec<RingElem>,
}

impl SkewPoly {
    pub fn new(ring: &CoeffRing, mut coeffs: Vec<RingElem>) -> Self {
        while coeffs.last().map(|c| ring.is_zero(c)) == Some(true) {
            coeffs.pop();
        }
        SkewPoly { coeffs }
    }

    pub fn zero() -> Self {
        SkewPoly { coeffs: vec![] }
    }

    pub fn one(ring: &CoeffRing) -> Self {
        SkewPoly { coeffs: vec![ring.one()] }
    }

    pub fn constant(ring: &CoeffRing, c: RingElem) -> Self {
        SkewPoly::new(ring, vec![c])
    }

    /// The monomial c * tau^i.
    pub fn monomial(ring: &CoeffRing, c: RingElem, i: usize) -> Self {
        let mut coeffs = vec![ring.zero(); i + 1];
        coeffs[i] = c;
        SkewPoly::new(ring, coeffs)
    }

    pub fn tau(ring: &CoeffRing) -> Self {
        Self::monomial(ring, ring.one(), 1)
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

    pub fn constant_term(&self, ring: &CoeffRing) -> RingElem {
        self.coeff(ring, 0)
    }

    pub fn add(&self, ring: &CoeffRing, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(ring.add(&self.coeff(ring, i), &other.coeff(ring, i)));
        }
        SkewPoly::new(ring, out)
    }

    pub fn sub(&self, ring: &CoeffRing, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(ring.sub(&self.coeff(ring, i), &other.coeff(ring, i)));
        }
        SkewPoly::new(ring, out)
    }

    pub fn neg(&self, ring: &CoeffRing) -> Self {
        SkewPoly::new(ring, self.coeffs.iter().map(|c| ring.neg(c)).collect())
    }

    /// Product with the defining relation tau^i * c = c^{q^i} * tau^i.
    pub fn mul(&self, ring: &CoeffRing, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return SkewPoly::zero();
        }
        let mut out = vec![ring.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if ring.is_zero(a) {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if ring.is_zero(b) {
                    continue;
                }
                let t = ring.mul(a, &ring.frob_iter(b, i));
                out[i + j] = ring.add(&out[i + j], &t);
            }
        }
        SkewPoly::new(ring, out)
    }

    pub fn scale(&self, ring: &CoeffRing, c: &RingElem) -> Self {
        SkewPoly::new(ring, self.coeffs.iter().map(|a| ring.mul(c, a)).collect())
    }

    /// As an additive polynomial, evaluate at a point: sum b_i x^{q^i}.
    /// The coefficients are mapped into the target ring through `embed`.
    pub fn eval_additive(
        &self,
        target: &CoeffRing,
        embed: impl Fn(&RingElem) -> RingElem,
        x: &RingElem,
    ) -> RingElem {
        let mut acc = target.zero();
        let mut xq = x.clone();
        for (i, b) in self.coeffs.iter().enumerate() {
            if i > 0 {
                xq = target.frob(&xq);
            }
            acc = target.add(&acc, &target.mul(&embed(b), &xq));
        }
        acc
    }

    pub fn to_string(&self, ring: &CoeffRing) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = vec![];
        for (i, c) in self.coeffs.iter().enumerate() {
            if ring.is_zero(c) {
                continue;
            }
            let cs = ring.elem_to_string(c);
            let t = match i {
                0 => cs,
                1 => format!("({})t", cs),
                _ => format!("({})t^{}", cs, i),
            };
            terms.push(t);
        }
        terms.join(" + ")
    }
}

/// Right division: c = g*phi + h with deg h < deg phi. Requires the leading
/// coefficient of phi to be a unit. Uses the recursion
/// g_i = b_r^{-q^i} (c_{i+r} - sum_{j=i+1}^{i+r} g_j b_{i+r-j}^{q^j}).
pub fn right_divmod(
    ring: &CoeffRing,
    c: &SkewPoly,
    phi: &SkewPoly,
) -> Result<(SkewPoly, SkewPoly)> {
    let r = match phi.deg() {
        None => return Err(Error::NonUnitLeadingCoefficient),
        Some(r) => r,
    };
    let br = phi.coeffs[r].clone();
    let br_inv = ring.inv(&br).ok_or(Error::NonUnitLeadingCoefficient)?;
    let n = match c.deg() {
        None => return Ok((SkewPoly::zero(), SkewPoly::zero())),
        Some(n) => n,
    };
    if n < r {
        return Ok((SkewPoly::zero(), c.clone()));
    }
    let mut g = vec![ring.zero(); n - r + 1];
    for i in (0..=n - r).rev() {
        let mut acc = c.coeff(ring, i + r);
        for j in i + 1..=(i + r).min(n - r) {
            let t = ring.mul(&g[j], &ring.frob_iter(&phi.coeff(ring, i + r - j), j));
            acc = ring.sub(&acc, &t);
        }
        g[i] = ring.mul(&acc, &ring.frob_iter(&br_inv, i));
    }
    let g = SkewPoly::new(ring, g);
    let h = c.sub(ring, &g.mul(ring, phi));
    debug_assert!(h.deg().map_or(true, |d| d < r));
    Ok((g, h))
}

/// Standard-form conjugation: given b with b_r a unit and all higher
/// coefficients nilpotent, produce the unit c = 1 + (nilpotent coefficients)
/// such that b*c = c*b_std where b_std = c^{-1} b c has degree exactly r.
///
/// Works up the nilpotency filtration: offending coefficients in eps^s are
/// pushed into eps^{s+1} by one conjugation, so the loop terminates at the
/// nil index of the ring.
pub fn standard_form(ring: &CoeffRing, b: &SkewPoly, r: usize) -> Result<(SkewPoly, SkewPoly)> {
    if r == 0 || b.deg().is_none() || b.deg().unwrap() < r {
        return Err(Error::PreconditionViolated(format!(
            "polynomial must have degree >= r = {}",
            r
        )));
    }
    let br = b.coeff(ring, r);
    if !ring.is_unit(&br) {
        return Err(Error::PreconditionViolated("coefficient b_r is not a unit".into()));
    }
    for i in r + 1..b.coeffs.len() {
        if !ring.is_nilpotent(&b.coeffs[i]) {
            return Err(Error::PreconditionViolated(format!(
                "coefficient b_{} is not nilpotent",
                i
            )));
        }
    }
    let mut cur = b.clone();
    let mut c_total = SkewPoly::one(ring);
    // each pass strictly deepens the nilpotency order of everything above r
    for _pass in 0..ring.nil_index() + 1 {
        let top = cur.deg().unwrap();
        if top == r {
            break;
        }
        let b0 = cur.coeff(ring, 0);
        let brr = cur.coeff(ring, r);
        // solve for u_1..u_{top-r} from the top degree down:
        // coefficient at degree m > r must vanish to first order:
        //   b_m + b_0 u_m - sum_{i+j=m, j<=r, i>=1} u_i b_j^{q^i} = 0
        // where the j = r term carries the invertible factor.
        let mut u = vec![ring.zero(); top - r + 1]; // u[i] for tau^i, u[0] unused
        for m in (r + 1..=top).rev() {
            let i0 = m - r;
            let mut acc = cur.coeff(ring, m);
            if m <= top - r {
                acc = ring.add(&acc, &ring.mul(&b0, &u[m]));
            }
            for j in 0..r {
                let i = m - j;
                if i >= 1 && i <= top - r && i != i0 {
                    let t = ring.mul(&u[i], &ring.frob_iter(&cur.coeff(ring, j), i));
                    acc = ring.sub(&acc, &t);
                }
            }
            let denom = ring.frob_iter(&brr, i0);
            let denom_inv = ring.inv(&denom).ok_or(Error::PreconditionViolated(
                "unit coefficient lost during conjugation".into(),
            ))?;
            u[i0] = ring.mul(&acc, &denom_inv);
        }
        let mut c_coeffs = vec![ring.one()];
        c_coeffs.extend(u[1..].iter().cloned());
        let c = SkewPoly::new(ring, c_coeffs);
        let c_inv = invert_unit(ring, &c)?;
        cur = c_inv.mul(ring, &cur).mul(ring, &c);
        c_total = c_total.mul(ring, &c);
    }
    if cur.deg() != Some(r) {
        return Err(Error::PreconditionViolated(
            "standard form iteration did not terminate at degree r".into(),
        ));
    }
    Ok((c_total, cur))
}

/// Inverse of a unit of `R{tau}`: constant term a unit, all higher
/// coefficients nilpotent. Geometric series in the nilpotent part.
pub fn invert_unit(ring: &CoeffRing, c: &SkewPoly) -> Result<SkewPoly> {
    let c0 = c.constant_term(ring);
    let c0_inv = ring.inv(&c0).ok_or(Error::PreconditionViolated(
        "constant term is not a unit".into(),
    ))?;
    for i in 1..c.coeffs.len() {
        if !ring.is_nilpotent(&c.coeffs[i]) {
            return Err(Error::PreconditionViolated(
                "higher coefficient of a unit must be nilpotent".into(),
            ));
        }
    }
    let c0i = SkewPoly::constant(ring, c0_inv);
    // c = c0 (1 + w) with w nilpotent-coefficient; invert by geometric series
    let w = c0i.mul(ring, c).sub(ring, &SkewPoly::one(ring));
    let mut acc = SkewPoly::one(ring);
    let mut pw = w.clone();
    let mut guard = 0;
    while !pw.is_zero() {
        // signs alternate: (1+w)^{-1} = 1 - w + w^2 - ...
        if guard % 2 == 0 {
            acc = acc.sub(ring, &pw);
        } else {
            acc = acc.add(ring, &pw);
        }
        pw = pw.mul(ring, &w);
        guard += 1;
        if guard > 4 * ring.nil_index() * (c.coeffs.len() + 1) {
            return Err(Error::PreconditionViolated("element is not a unit".into()));
        }
    }
    let inv = acc.mul(ring, &c0i);
    debug_assert_eq!(inv.mul(ring, c), SkewPoly::one(ring));
    Ok(inv)
}

/// Rectangular matrix of skew polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkewMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<SkewPoly>,
}

impl SkewMat {
    pub fn new(rows: usize, cols: usize, data: Vec<SkewPoly>) -> Self {
        assert_eq!(data.len(), rows * cols);
        SkewMat { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        SkewMat { rows, cols, data: vec![SkewPoly::zero(); rows * cols] }
    }

    pub fn identity(ring: &CoeffRing, n: usize) -> Self {
        let mut m = SkewMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = SkewPoly::one(ring);
        }
        m
    }

    pub fn scalar(ring: &CoeffRing, n: usize, s: &SkewPoly) -> Self {
        let mut m = SkewMat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = s.clone();
        }
        let _ = ring;
        m
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_zero())
    }

    pub fn add(&self, ring: &CoeffRing, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.add(ring, b))
            .collect();
        SkewMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, ring: &CoeffRing, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.sub(ring, b))
            .collect();
        SkewMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, ring: &CoeffRing, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = SkewMat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = SkewPoly::zero();
                for k in 0..self.cols {
                    acc = acc.add(ring, &self[(i, k)].mul(ring, &other[(k, j)]));
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// Max tau-degree over all entries; None for the zero matrix.
    pub fn deg(&self) -> Option<usize> {
        self.data.iter().filter_map(|e| e.deg()).max()
    }

    /// The coefficient of tau^i, entrywise, as a matrix over R.
    pub fn coeff_matrix(&self, ring: &CoeffRing, i: usize) -> Vec<RingElem> {
        self.data.iter().map(|e| e.coeff(ring, i)).collect()
    }

    /// Constant-term matrix, i.e. the Lie action.
    pub fn lie(&self, ring: &CoeffRing) -> RMat {
        RMat {
            rows: self.rows,
            cols: self.cols,
            data: self.coeff_matrix(ring, 0),
        }
    }

    pub fn transpose(&self) -> Self {
        let mut out = SkewMat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn row(&self, i: usize) -> Vec<SkewPoly> {
        (0..self.cols).map(|j| self[(i, j)].clone()).collect()
    }
}

impl std::ops::Index<(usize, usize)> for SkewMat {
    type Output = SkewPoly;
    fn index(&self, (i, j): (usize, usize)) -> &SkewPoly {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for SkewMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut SkewPoly {
        &mut self.data[i * self.cols + j]
    }
}

/// Matrix over R (constant matrices), with inversion over local rings by
/// Gauss-Jordan on unit pivots.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<RingElem>,
}

impl RMat {
    pub fn zero(ring: &CoeffRing, rows: usize, cols: usize) -> Self {
        RMat { rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &CoeffRing, n: usize) -> Self {
        let mut m = RMat::zero(ring, n, n);
        for i in 0..n {
            m[(i, i)] = ring.one();
        }
        m
    }

    pub fn mul(&self, ring: &CoeffRing, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut out = RMat::zero(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if ring.is_zero(&self[(i, k)]) {
                    continue;
                }
                for j in 0..other.cols {
                    let t = ring.mul(&self[(i, k)], &other[(k, j)]);
                    out[(i, j)] = ring.add(&out[(i, j)], &t);
                }
            }
        }
        out
    }

    pub fn sub(&self, ring: &CoeffRing, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| ring.sub(a, b))
            .collect();
        RMat { rows: self.rows, cols: self.cols, data }
    }

    pub fn frob_entrywise(&self, ring: &CoeffRing, i: usize) -> Self {
        RMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| ring.frob_iter(e, i)).collect(),
        }
    }

    pub fn is_zero(&self, ring: &CoeffRing) -> bool {
        self.data.iter().all(|e| ring.is_zero(e))
    }

    /// Inverse over a local ring: pivots must be units.
    pub fn inverse(&self, ring: &CoeffRing) -> Option<RMat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = RMat::identity(ring, n);
        for col in 0..n {
            let piv = (col..n).find(|&r| ring.is_unit(&a[(r, col)]))?;
            if piv != col {
                for j in 0..n {
                    let tmp = a[(piv, j)].clone();
                    a[(piv, j)] = a[(col, j)].clone();
                    a[(col, j)] = tmp;
                    let tmp = inv[(piv, j)].clone();
                    inv[(piv, j)] = inv[(col, j)].clone();
                    inv[(col, j)] = tmp;
                }
            }
            let pinv = ring.inv(&a[(col, col)])?;
            for j in 0..n {
                a[(col, j)] = ring.mul(&pinv, &a[(col, j)]);
                inv[(col, j)] = ring.mul(&pinv, &inv[(col, j)]);
            }
            for r in 0..n {
                if r != col && !ring.is_zero(&a[(r, col)]) {
                    let f = a[(r, col)].clone();
                    for j in 0..n {
                        let t = ring.mul(&f, &a[(col, j)]);
                        a[(r, j)] = ring.sub(&a[(r, j)], &t);
                        let t = ring.mul(&f, &inv[(col, j)]);
                        inv[(r, j)] = ring.sub(&inv[(r, j)], &t);
                    }
                }
            }
        }
        Some(inv)
    }

    /// Nilpotency of the matrix in the ordinary (linear) sense.
    pub fn is_nilpotent_matrix(&self, ring: &CoeffRing) -> bool {
        assert_eq!(self.rows, self.cols);
        let mut acc = self.clone();
        for _ in 0..self.rows * ring.nil_index() {
            if acc.is_zero(ring) {
                return true;
            }
            acc = acc.mul(ring, self);
        }
        acc.is_zero(ring)
    }
}

impl std::ops::Index<(usize, usize)> for RMat {
    type Output = RingElem;
    fn index(&self, (i, j): (usize, usize)) -> &RingElem {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut RingElem {
        &mut self.data[i * self.cols + j]
    }
}

/// Matrix right division C = G*Phi + H with all entries of H of tau-degree
/// below deg Phi. The top coefficient matrix of Phi must be invertible.
pub fn skew_matrix_right_divmod(
    ring: &CoeffRing,
    c: &SkewMat,
    phi: &SkewMat,
) -> Result<(SkewMat, SkewMat)> {
    assert_eq!(phi.rows, phi.cols);
    assert_eq!(c.cols, phi.rows);
    let n = phi.deg().ok_or(Error::SingularLeadingMatrix)?;
    let d = phi.rows;
    let lead = RMat {
        rows: d,
        cols: d,
        data: phi.coeff_matrix(ring, n),
    };
    let lead_inv = lead.inverse(ring).ok_or(Error::SingularLeadingMatrix)?;
    let mut rem = c.clone();
    let mut g = SkewMat::zero(c.rows, d);
    loop {
        let dc = match rem.deg() {
            None => break,
            Some(dc) => dc,
        };
        if dc < n {
            break;
        }
        let top = RMat {
            rows: c.rows,
            cols: d,
            data: rem.coeff_matrix(ring, dc),
        };
        // G_{dc-n} * frob^{dc-n}(lead) = top
        let linv = lead_inv.frob_entrywise(ring, dc - n);
        let gm = top.mul(ring, &linv);
        // g += gm * tau^{dc-n}; rem -= gm tau^{dc-n} * phi
        let mut gm_skew = SkewMat::zero(c.rows, d);
        for i in 0..c.rows {
            for j in 0..d {
                if !ring.is_zero(&gm[(i, j)]) {
                    gm_skew[(i, j)] = SkewPoly::monomial(ring, gm[(i, j)].clone(), dc - n);
                }
            }
        }
        g = g.add(ring, &gm_skew);
        rem = rem.sub(ring, &gm_skew.mul(ring, phi));
        if rem.deg().map_or(true, |x| x < dc) {
            continue;
        }
        return Err(Error::SingularLeadingMatrix);
    }
    Ok((g, rem))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> CoeffRing {
        CoeffRing::finite_field(2, 2, vec![1, 1, 1], vec![0, 1]).unwrap()
    }

    fn f2_eps(n: usize) -> CoeffRing {
        let mut th = vec![0u32; n];
        th[0] = 1;
        CoeffRing::truncated(2, 2, vec![1, 1], n, th).unwrap()
    }

    #[test]
    fn tau_times_omega() {
        let r = f4();
        let w = r.gen();
        let lhs = SkewPoly::tau(&r).mul(&r, &SkewPoly::constant(&r, w.clone()));
        // tau * omega = omega^2 tau = (omega+1) tau
        let expect = SkewPoly::monomial(&r, r.add(&w, &r.one()), 1);
        assert_eq!(lhs, expect);
    }

    #[test]
    fn square_of_omega_plus_tau() {
        let r = f4();
        let w = r.gen();
        let f = SkewPoly::new(&r, vec![w.clone(), r.one()]);
        let sq = f.mul(&r, &f);
        // (w + tau)^2 = (w+1) + tau + tau^2
        let expect = SkewPoly::new(&r, vec![r.add(&w, &r.one()), r.one(), r.one()]);
        assert_eq!(sq, expect);
    }

    #[test]
    fn one_is_identity() {
        let r = f4();
        let b = SkewPoly::new(&r, vec![r.gen(), r.one(), r.gen()]);
        assert_eq!(SkewPoly::one(&r).mul(&r, &b), b);
        assert_eq!(b.mul(&r, &SkewPoly::one(&r)), b);
    }

    #[test]
    fn divmod_tau_squared_by_tau_plus_omega() {
        let r = f4();
        let w = r.gen();
        let c = SkewPoly::monomial(&r, r.one(), 2);
        let phi = SkewPoly::new(&r, vec![w.clone(), r.one()]);
        let (g, h) = right_divmod(&r, &c, &phi).unwrap();
        // g = tau + omega^2, h = 1
        let w2 = r.frob(&w);
        assert_eq!(g, SkewPoly::new(&r, vec![w2, r.one()]));
        assert_eq!(h, SkewPoly::one(&r));
        assert_eq!(g.mul(&r, &phi).add(&r, &h), c);
    }

    #[test]
    fn divmod_trivial_cases() {
        let r = f4();
        let phi = SkewPoly::new(&r, vec![r.gen(), r.one()]);
        let c = SkewPoly::constant(&r, r.gen());
        let (g, h) = right_divmod(&r, &c, &phi).unwrap();
        assert!(g.is_zero());
        assert_eq!(h, c);
        let (g, h) = right_divmod(&r, &phi, &phi).unwrap();
        assert_eq!(g, SkewPoly::one(&r));
        assert!(h.is_zero());
    }

    #[test]
    fn divmod_rejects_nonunit_lead() {
        let r = f2_eps(2);
        let phi = SkewPoly::new(&r, vec![r.one(), r.eps()]);
        let c = SkewPoly::monomial(&r, r.one(), 2);
        assert_eq!(
            right_divmod(&r, &c, &phi).unwrap_err(),
            Error::NonUnitLeadingCoefficient
        );
    }

    #[test]
    fn standard_form_removes_nilpotent_tail() {
        let r = f2_eps(2);
        // b = 1 + tau + eps tau^2, r = 1
        let b = SkewPoly::new(&r, vec![r.one(), r.one(), r.eps()]);
        let (c, bstd) = standard_form(&r, &b, 1).unwrap();
        assert_eq!(bstd.deg(), Some(1));
        assert!(r.is_unit(&bstd.coeff(&r, 1)));
        assert_eq!(c.constant_term(&r), r.one());
        for i in 1..c.coeffs.len() {
            assert!(r.is_nilpotent(&c.coeffs[i]));
        }
        // b*c = c*b_std
        assert_eq!(b.mul(&r, &c), c.mul(&r, &bstd));
    }

    #[test]
    fn standard_form_noop_cases() {
        let r = f4();
        let b = SkewPoly::new(&r, vec![r.gen(), r.one()]);
        let (c, bstd) = standard_form(&r, &b, 1).unwrap();
        assert_eq!(c, SkewPoly::one(&r));
        assert_eq!(bstd, b);
        let rt = f2_eps(3);
        let b = SkewPoly::new(&rt, vec![rt.one(), rt.add(&rt.one(), &rt.eps())]);
        let (c, bstd) = standard_form(&rt, &b, 1).unwrap();
        assert_eq!(c, SkewPoly::one(&rt));
        assert_eq!(bstd, b);
    }

    #[test]
    fn standard_form_conjugator_is_unique() {
        // enumerate every candidate unit c = 1 + sum c_i tau^i with
        // nilpotent coefficients up to degree 6: exactly one conjugates
        // b = 1 + tau + eps tau^2 to degree 1, and it is the computed one
        let r = f2_eps(2);
        let b = SkewPoly::new(&r, vec![r.one(), r.one(), r.eps()]);
        let (c, _) = standard_form(&r, &b, 1).unwrap();
        let mut matches = vec![];
        for mask in 0..64u32 {
            let mut coeffs = vec![r.one()];
            for i in 0..6 {
                coeffs.push(if mask >> i & 1 == 1 { r.eps() } else { r.zero() });
            }
            let cand = SkewPoly::new(&r, coeffs);
            let inv = invert_unit(&r, &cand).unwrap();
            let conj = inv.mul(&r, &b).mul(&r, &cand);
            if conj.deg() == Some(1) {
                matches.push(cand);
            }
        }
        assert_eq!(matches.len(), 1);
        assert_eq!(matches[0], c);
    }

    #[test]
    fn standard_form_deep_truncation() {
        let r = f2_eps(4);
        let e = r.eps();
        let e2 = r.mul(&e, &e);
        // b = 1 + tau + eps tau^2 + eps^2 tau^3
        let b = SkewPoly::new(&r, vec![r.one(), r.one(), e.clone(), e2]);
        let (c, bstd) = standard_form(&r, &b, 1).unwrap();
        assert_eq!(bstd.deg(), Some(1));
        assert_eq!(b.mul(&r, &c), c.mul(&r, &bstd));
    }

    #[test]
    fn matrix_divmod_reduces_to_scalar() {
        let r = f4();
        let w = r.gen();
        let c = SkewMat::new(1, 1, vec![SkewPoly::monomial(&r, r.one(), 2)]);
        let phi = SkewMat::new(1, 1, vec![SkewPoly::new(&r, vec![w.clone(), r.one()])]);
        let (g, h) = skew_matrix_right_divmod(&r, &c, &phi).unwrap();
        let (gs, hs) = right_divmod(&r, &c[(0, 0)], &phi[(0, 0)]).unwrap();
        assert_eq!(g[(0, 0)], gs);
        assert_eq!(h[(0, 0)], hs);
    }

    #[test]
    fn matrix_divmod_diagonal() {
        let r = f4();
        let w = r.gen();
        let t2 = SkewPoly::monomial(&r, r.one(), 2);
        let c = SkewMat::new(
            2,
            2,
            vec![t2.clone(), SkewPoly::zero(), SkewPoly::zero(), t2],
        );
        let phi_s = SkewPoly::new(&r, vec![w.clone(), r.one()]);
        let phi = SkewMat::scalar(&r, 2, &phi_s);
        let (g, h) = skew_matrix_right_divmod(&r, &c, &phi).unwrap();
        let (gs, hs) = right_divmod(&r, &SkewPoly::monomial(&r, r.one(), 2), &phi_s).unwrap();
        assert_eq!(g[(0, 0)], gs);
        assert_eq!(g[(1, 1)], gs);
        assert_eq!(h[(0, 0)], hs);
        assert_eq!(g.mul(&r, &phi).add(&r, &h), c);
    }

    #[test]
    fn matrix_divmod_identity_case() {
        let r = f4();
        let th = SkewPoly::constant(&r, r.theta());
        let tau = SkewPoly::tau(&r);
        let mut phi = SkewMat::zero(2, 2);
        phi[(0, 0)] = th.add(&r, &tau);
        phi[(1, 1)] = th.add(&r, &tau);
        let (g, h) = skew_matrix_right_divmod(&r, &phi.clone(), &phi).unwrap();
        assert_eq!(g, SkewMat::identity(&r, 2));
        assert!(h.is_zero());
    }
}
