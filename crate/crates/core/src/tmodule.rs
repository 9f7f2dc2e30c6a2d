//! Abelian Anderson t-modules and Drinfeld modules presented as skew-matrix
//! data on G_a^d, morphisms between them, isogeny and separability tests on
//! the module side, and kernel point enumeration over extension fields.

use crate::error::{Error, Result};
use crate::ext::{extend_field, Extension};
use crate::linalg::FpMat;
use crate::poly::Poly;
use crate::ring::{CoeffRing, RingElem};
use crate::skew::{standard_form, RMat, SkewMat, SkewPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TModule {
    pub ring: CoeffRing,
    /// Dimension d of the underlying group G_a^d.
    pub dim: usize,
    /// The t-action as a d x d matrix over `R{tau}`; Drinfeld modules are the
    /// d = 1 case kept in standard form.
    pub phi_t: SkewMat,
    /// Rank r; known when the top tau-coefficient matrix is invertible
    /// (always for Drinfeld modules).
    pub rank: Option<usize>,
    /// For Drinfeld modules the conjugating unit applied to reach standard
    /// form, when the input was not already standard.
    pub normalizer: Option<SkewPoly>,
}

impl TModule {
    /// Validated Drinfeld module: constant term gamma(t), some unit
    /// coefficient, nilpotent tail conjugated away into standard form.
    pub fn new_drinfeld(ring: &CoeffRing, phi_t: SkewPoly) -> Result<TModule> {
        if phi_t.constant_term(ring) != ring.theta() {
            return Err(Error::NotDrinfeld(
                "constant term of phi_t must equal gamma(t) = theta".into(),
            ));
        }
        let deg = phi_t.deg().unwrap_or(0);
        let mut r = 0;
        for i in 1..=deg {
            if ring.is_unit(&phi_t.coeff(ring, i)) {
                r = i;
            }
        }
        if r == 0 {
            return Err(Error::NotDrinfeld(
                "phi_t has no unit coefficient in positive degree".into(),
            ));
        }
        let (normalizer, std) = if deg > r {
            let (c, b) = standard_form(ring, &phi_t, r)?;
            (Some(c), b)
        } else {
            (None, phi_t)
        };
        Ok(TModule {
            ring: ring.clone(),
            dim: 1,
            phi_t: SkewMat::new(1, 1, vec![std]),
            rank: Some(r),
            normalizer,
        })
    }

    /// General abelian t-module from a d x d skew matrix. Validates the
    /// gamma-unipotence of the Lie action; the rank is known when the top
    /// coefficient matrix is invertible.
    pub fn new(ring: &CoeffRing, phi_t: SkewMat) -> Result<TModule> {
        if phi_t.rows != phi_t.cols || phi_t.rows == 0 {
            return Err(Error::UnsupportedShape("phi_t must be square and nonempty".into()));
        }
        let d = phi_t.rows;
        if d == 1 {
            return Self::new_drinfeld(ring, phi_t[(0, 0)].clone());
        }
        let n = phi_t.deg().ok_or(Error::UnsupportedShape("phi_t is zero".into()))?;
        if n == 0 {
            return Err(Error::UnsupportedShape("phi_t has tau-degree 0".into()));
        }
        // (Lie phi_t - theta)^d = 0
        let lie = phi_t.lie(ring);
        let mut shifted = lie.clone();
        for i in 0..d {
            shifted[(i, i)] = ring.sub(&shifted[(i, i)], &ring.theta());
        }
        let mut acc = shifted.clone();
        for _ in 1..d {
            acc = acc.mul(ring, &shifted);
        }
        if !acc.is_zero(ring) {
            return Err(Error::NotDrinfeld(
                "(Lie phi_t - gamma(t))^d does not vanish".into(),
            ));
        }
        let lead = RMat {
            rows: d,
            cols: d,
            data: phi_t.coeff_matrix(ring, n),
        };
        let rank = lead.inverse(ring).map(|_| n * d);
        Ok(TModule {
            ring: ring.clone(),
            dim: d,
            phi_t,
            rank,
            normalizer: None,
        })
    }

    /// The Carlitz module phi_t = theta + tau over the given ring.
    pub fn carlitz(ring: &CoeffRing) -> Result<TModule> {
        let phi = SkewPoly::new(ring, vec![ring.theta(), ring.one()]);
        Self::new_drinfeld(ring, phi)
    }

    /// phi_a for a polynomial a over F_q: substitute phi_t into a.
    /// Coefficients of a are central because they are Frobenius-fixed.
    pub fn phi_of(&self, a: &Poly) -> Result<SkewMat> {
        let ring = &self.ring;
        if !a.has_fq_coeffs(ring) {
            return Err(Error::PreconditionViolated(
                "phi_of requires coefficients in F_q".into(),
            ));
        }
        let d = self.dim;
        let mut acc = SkewMat::zero(d, d);
        let deg = match a.deg() {
            None => return Ok(acc),
            Some(deg) => deg,
        };
        for j in (0..=deg).rev() {
            acc = acc.mul(ring, &self.phi_t);
            let c = a.coeff(ring, j);
            if !ring.is_zero(&c) {
                let scal = SkewMat::scalar(ring, d, &SkewPoly::constant(ring, c));
                acc = acc.add(ring, &scal);
            }
        }
        Ok(acc)
    }

    pub fn drinfeld_poly(&self) -> Option<&SkewPoly> {
        if self.dim == 1 {
            Some(&self.phi_t[(0, 0)])
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TModuleMorphism {
    pub source: TModule,
    pub target: TModule,
    /// d' x d matrix acting on points of G_a^d.
    pub mat: SkewMat,
}

impl TModuleMorphism {
    /// Validates commutation with the t-action: F phi_t = phi'_t F.
    pub fn new(source: &TModule, target: &TModule, mat: SkewMat) -> Result<Self> {
        if source.ring != target.ring {
            return Err(Error::RingMismatch);
        }
        if mat.rows != target.dim || mat.cols != source.dim {
            return Err(Error::UnsupportedShape(
                "morphism matrix has wrong dimensions".into(),
            ));
        }
        let ring = &source.ring;
        let lhs = mat.mul(ring, &source.phi_t);
        let rhs = target.phi_t.mul(ring, &mat);
        if lhs != rhs {
            return Err(Error::PreconditionViolated(
                "matrix does not commute with the t-action".into(),
            ));
        }
        Ok(TModuleMorphism {
            source: source.clone(),
            target: target.clone(),
            mat,
        })
    }

    pub fn identity(e: &TModule) -> Self {
        TModuleMorphism {
            source: e.clone(),
            target: e.clone(),
            mat: SkewMat::identity(&e.ring, e.dim),
        }
    }

    /// phi_a as an endomorphism.
    pub fn from_scalar(e: &TModule, a: &Poly) -> Result<Self> {
        let mat = e.phi_of(a)?;
        Ok(TModuleMorphism {
            source: e.clone(),
            target: e.clone(),
            mat,
        })
    }

    /// self after other: self: E' -> E'', other: E -> E'.
    pub fn compose(&self, other: &TModuleMorphism) -> Result<TModuleMorphism> {
        if self.source != other.target {
            return Err(Error::PreconditionViolated(
                "morphisms are not composable".into(),
            ));
        }
        let ring = &self.source.ring;
        TModuleMorphism::new(
            &other.source,
            &self.target,
            self.mat.mul(ring, &other.mat),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.mat.is_zero()
    }

    /// Constant-term matrix of the morphism; functorial for composition.
    pub fn lie(&self) -> RMat {
        self.mat.lie(&self.source.ring)
    }
}

/// Module-side isogeny test. Drinfeld case: f is an isogeny iff f != 0.
/// Higher dimension delegates to the motive side.
pub fn is_isogeny_module(f: &TModuleMorphism) -> Result<bool> {
    if !f.source.ring.is_field() {
        return Err(Error::UnsupportedBase);
    }
    if f.source.dim == 1 && f.target.dim == 1 {
        return Ok(!f.is_zero());
    }
    let mf = crate::tmotive::motive_of_morphism(f)?;
    Ok(crate::tmotive::is_isogeny_motive(&mf))
}

/// Separability: for Drinfeld isogenies, Lie f must be a unit. Higher
/// dimension goes through the cokernel shtuka of the motive morphism.
pub fn is_separable_module(f: &TModuleMorphism) -> Result<bool> {
    if !is_isogeny_module(f)? {
        return Err(Error::NotAnIsogeny);
    }
    if f.source.dim == 1 && f.target.dim == 1 {
        let ring = &f.source.ring;
        return Ok(ring.is_unit(&f.lie()[(0, 0)]));
    }
    let mf = crate::tmotive::motive_of_morphism(f)?;
    crate::tmotive::is_separable_motive(&mf)
}

/// Points of a kernel over an extension field.
#[derive(Debug, Clone)]
pub struct PointSet {
    pub extension: Extension,
    /// Kernel points in K^d, sorted lexicographically by concatenated
    /// coordinate vectors.
    pub points: Vec<Vec<RingElem>>,
    /// F_p-basis of the kernel as a subspace of K^d.
    pub fp_basis: Vec<Vec<u32>>,
}

impl PointSet {
    pub fn count(&self) -> usize {
        self.points.len()
    }
}

/// Apply a skew matrix (with coefficients in the base ring) to a point of
/// K^d through the embedding.
pub fn apply_skew_at(
    ext: &Extension,
    mat: &SkewMat,
    x: &[RingElem],
) -> Vec<RingElem> {
    assert_eq!(x.len(), mat.cols);
    let kk = &ext.field;
    let mut out = Vec::with_capacity(mat.rows);
    for i in 0..mat.rows {
        let mut acc = kk.zero();
        for j in 0..mat.cols {
            let v = mat[(i, j)].eval_additive(kk, |c| ext.embed(c), &x[j]);
            acc = kk.add(&acc, &v);
        }
        out.push(acc);
    }
    out
}

/// F_p-matrix of the additive operator K^d -> K^{d'} given by a skew matrix.
pub fn additive_operator_matrix(ext: &Extension, mat: &SkewMat) -> FpMat {
    let kk = &ext.field;
    let dimk = kk.dim();
    let in_dim = mat.cols * dimk;
    let out_dim = mat.rows * dimk;
    let mut cols = Vec::with_capacity(in_dim);
    for j in 0..mat.cols {
        for c in 0..dimk {
            let mut x = vec![kk.zero(); mat.cols];
            x[j].coeffs[c] = 1;
            let y = apply_skew_at(ext, mat, &x);
            let mut col = Vec::with_capacity(out_dim);
            for e in y {
                col.extend(e.coeffs);
            }
            cols.push(col);
        }
    }
    FpMat::from_columns(kk.p(), out_dim, &cols)
}

/// All x in K^d with f(x) = 0, for K the degree-m extension of the base
/// field. The zero set of the q-linearized coordinate polynomials is the
/// kernel of an F_p-linear operator on the restriction of scalars.
pub fn kernel_points(f: &TModuleMorphism, m: usize) -> Result<PointSet> {
    if !f.source.ring.is_field() {
        return Err(Error::UnsupportedBase);
    }
    let ext = extend_field(&f.source.ring, m)?;
    kernel_points_in(&ext, &f.mat)
}

/// Kernel points of a skew matrix over a prescribed extension.
pub fn kernel_points_in(ext: &Extension, mat: &SkewMat) -> Result<PointSet> {
    let kk = ext.field.clone();
    let op = additive_operator_matrix(ext, mat);
    let basis = op.kernel_basis();
    let dimk = kk.dim();
    let total = (kk.p() as u64).checked_pow(basis.len() as u32);
    if total.is_none() || total.unwrap() > 1 << 22 {
        return Err(Error::PreconditionViolated(
            "kernel too large to enumerate".into(),
        ));
    }
    let mut points: Vec<Vec<RingElem>> = crate::linalg::span_elements(kk.p(), &basis, mat.cols * dimk)
        .into_iter()
        .map(|flat| {
            (0..mat.cols)
                .map(|j| RingElem::new(flat[j * dimk..(j + 1) * dimk].to_vec()))
                .collect()
        })
        .collect();
    points.sort();
    Ok(PointSet {
        extension: ext.clone(),
        points,
        fp_basis: basis,
    })
}

/// Search for the splitting field of ker f: scan extension degrees
/// 1..=cap until the F_p-dimension of the kernel reaches `target_fp_dim`.
/// Returns the point set over the first such extension. The scan is
/// exhaustive because fixed spaces of intermediate Frobenius powers can
/// stall below the target at proper divisors of the splitting degree.
pub fn kernel_points_split(
    f: &TModuleMorphism,
    target_fp_dim: usize,
    cap: usize,
) -> Result<(PointSet, usize)> {
    if !f.source.ring.is_field() {
        return Err(Error::UnsupportedBase);
    }
    for m in 1..=cap.max(1) {
        let ext = extend_field(&f.source.ring, m)?;
        let op = additive_operator_matrix(&ext, &f.mat);
        let dim = op.kernel_basis().len();
        if dim >= target_fp_dim {
            let ps = kernel_points_in(&ext, &f.mat)?;
            return Ok((ps, m));
        }
    }
    Err(Error::PreconditionViolated(format!(
        "kernel did not split within extension degree cap {}",
        cap
    )))
}

/// Default cap for splitting field searches.
pub const DEFAULT_EXTENSION_CAP: usize = 24;
