//! Seeded randomized invariant suites, runnable from the CLI. The
//! generators here are also used by the acceptance tests.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::poly::{gamma, Poly};
use crate::ring::{CoeffRing, RingElem};
use crate::skew::{right_divmod, SkewPoly};
use crate::tmodule::TModule;

/// Deterministic generators for random test data.
pub mod gen {
    use super::*;

    pub fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    pub fn elem(ring: &CoeffRing, rng: &mut ChaCha8Rng) -> RingElem {
        RingElem::new((0..ring.dim()).map(|_| rng.gen_range(0..ring.p())).collect())
    }

    pub fn nonzero_elem(ring: &CoeffRing, rng: &mut ChaCha8Rng) -> RingElem {
        loop {
            let e = elem(ring, rng);
            if !ring.is_zero(&e) {
                return e;
            }
        }
    }

    pub fn unit_elem(ring: &CoeffRing, rng: &mut ChaCha8Rng) -> RingElem {
        loop {
            let e = elem(ring, rng);
            if ring.is_unit(&e) {
                return e;
            }
        }
    }

    /// Random skew polynomial of degree at most `max_deg`.
    pub fn skew_poly(ring: &CoeffRing, rng: &mut ChaCha8Rng, max_deg: usize) -> SkewPoly {
        let deg = rng.gen_range(0..=max_deg);
        SkewPoly::new(ring, (0..=deg).map(|_| elem(ring, rng)).collect())
    }

    /// Random skew polynomial with unit leading coefficient and the given
    /// exact degree.
    pub fn skew_poly_unit_lead(
        ring: &CoeffRing,
        rng: &mut ChaCha8Rng,
        deg: usize,
    ) -> SkewPoly {
        let mut coeffs: Vec<RingElem> = (0..deg).map(|_| elem(ring, rng)).collect();
        coeffs.push(unit_elem(ring, rng));
        SkewPoly::new(ring, coeffs)
    }

    /// Random polynomial with F_q-coefficients of degree at most `max_deg`.
    pub fn poly_fq(ring: &CoeffRing, rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
        let fq = ring.frob_fixed_points();
        let deg = rng.gen_range(0..=max_deg);
        let coeffs: Vec<RingElem> = (0..=deg)
            .map(|_| fq[rng.gen_range(0..fq.len())].clone())
            .collect();
        Poly::new(ring, coeffs)
    }

    /// Random nonzero monic polynomial with F_q-coefficients of exact degree.
    pub fn poly_fq_monic(ring: &CoeffRing, rng: &mut ChaCha8Rng, deg: usize) -> Poly {
        let fq = ring.frob_fixed_points();
        let mut coeffs: Vec<RingElem> = (0..deg)
            .map(|_| fq[rng.gen_range(0..fq.len())].clone())
            .collect();
        coeffs.push(ring.one());
        Poly::new(ring, coeffs)
    }

    /// Random Drinfeld module of exact rank `rank` over a field.
    pub fn drinfeld(ring: &CoeffRing, rng: &mut ChaCha8Rng, rank: usize) -> TModule {
        assert!(rank >= 1);
        loop {
            let mut coeffs = vec![ring.theta()];
            for _ in 1..rank {
                coeffs.push(elem(ring, rng));
            }
            coeffs.push(nonzero_elem(ring, rng));
            if let Ok(e) = TModule::new_drinfeld(ring, SkewPoly::new(ring, coeffs)) {
                return e;
            }
        }
    }

    /// Random polynomial over k of degree at most `max_deg`.
    pub fn poly_k(ring: &CoeffRing, rng: &mut ChaCha8Rng, max_deg: usize) -> Poly {
        let deg = rng.gen_range(0..=max_deg);
        Poly::new(ring, (0..=deg).map(|_| elem(ring, rng)).collect())
    }
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub name: String,
    pub cases: usize,
    pub passed: bool,
}

fn small_rings() -> Vec<CoeffRing> {
    vec![
        CoeffRing::finite_field(2, 2, vec![1, 1], vec![1]).unwrap(),
        CoeffRing::finite_field(2, 2, vec![1, 1, 1], vec![0, 1]).unwrap(),
        CoeffRing::finite_field(3, 3, vec![1, 1], vec![2]).unwrap(),
        CoeffRing::finite_field(2, 4, vec![1, 1, 1], vec![0, 1]).unwrap(),
        CoeffRing::truncated(2, 2, vec![1, 1], 2, vec![1, 0]).unwrap(),
        CoeffRing::truncated(2, 4, vec![1, 1, 1], 2, vec![0, 1, 0, 0]).unwrap(),
    ]
}

/// Run every invariant suite with the given seed; returns one report per
/// suite.
pub fn run_all(seed: u64) -> Vec<CheckReport> {
    vec![
        check_ring_laws(seed),
        check_skew_laws(seed),
        check_divmod(seed),
        check_gamma(seed),
        check_anderson_roundtrip(seed),
        check_shtuka_functor(seed),
        check_smith(seed),
        check_dual(seed),
    ]
}

fn check_ring_laws(seed: u64) -> CheckReport {
    let mut rng = gen::rng(seed ^ 0x01);
    let mut cases = 0;
    let mut passed = true;
    for ring in small_rings() {
        if ring.order() <= 256 {
            let elems = ring.all_elements();
            for a in &elems {
                for b in &elems {
                    cases += 1;
                    passed &= ring.frob(&ring.mul(a, b)) == ring.mul(&ring.frob(a), &ring.frob(b));
                    passed &= ring.frob(&ring.add(a, b)) == ring.add(&ring.frob(a), &ring.frob(b));
                }
            }
            for x in &elems {
                passed &= ring.is_unit(x) != ring.is_nilpotent(x);
            }
        } else {
            for _ in 0..200 {
                cases += 1;
                let a = gen::elem(&ring, &mut rng);
                let b = gen::elem(&ring, &mut rng);
                passed &= ring.frob(&ring.mul(&a, &b)) == ring.mul(&ring.frob(&a), &ring.frob(&b));
            }
        }
    }
    CheckReport { name: "ring-frobenius-laws".into(), cases, passed }
}

fn check_skew_laws(seed: u64) -> CheckReport {
    let mut rng = gen::rng(seed ^ 0x02);
    let mut cases = 0;
    let mut passed = true;
    for ring in small_rings() {
        for _ in 0..2000 {
            cases += 1;
            let a = gen::skew_poly(&ring, &mut rng, 3);
            let b = gen::skew_poly(&ring, &mut rng, 3);
            let c = gen::skew_poly(&ring, &mut rng, 3);
            let lhs = a.mul(&ring, &b).mul(&ring, &c);
            let rhs = a.mul(&ring, &b.mul(&ring, &c));
            passed &= lhs == rhs;
            let dist = a.mul(&ring, &b.add(&ring, &c));
            let dist2 = a.mul(&ring, &b).add(&ring, &a.mul(&ring, &c));
            passed &= dist == dist2;
        }
    }
    CheckReport { name: "skew-ring-laws".into(), cases, passed }
}

fn check_divmod(seed: u64) -> CheckReport {
    let mut rng = gen::rng(seed ^ 0x03);
    let mut cases = 0;
    let mut passed = true;
    for ring in small_rings() {
        for _ in 0..400 {
            cases += 1;
            let c = gen::skew_poly(&ring, &mut rng, 6);
            let phi = gen::skew_poly_unit_lead(&ring, &mut rng, 1 + (cases % 3));
            let (g, h) = right_divmod(&ring, &c, &phi).unwrap();
            passed &= g.mul(&ring, &phi).add(&ring, &h) == c;
            passed &= h.deg().map_or(true, |d| d < phi.deg().unwrap());
        }
    }
    CheckReport { name: "skew-right-division".into(), cases, passed }
}

fn check_gamma(seed: u64) -> CheckReport {
    let mut rng = gen::rng(seed ^ 0x04);
    let mut cases = 0;
    let mut passed = true;
    for ring in small_rings() {
        for _ in 0..200 {
            cases += 1;
            let a = gen::poly_fq(&ring, &mut rng, 5);
            let b = gen::poly_fq(&ring, &mut rng, 5);
            passed &= gamma(&ring, &a.mul(&ring, &b))
                == ring.mul(&gamma(&ring, &a), &gamma(&ring, &b));
            passed &= gamma(&ring, &a.add(&ring, &b))
                == ring.add(&gamma(&ring, &a), &gamma(&ring, &b));
        }
    }
    CheckReport { name: "gamma-homomorphism".into(), cases, passed }
}

fn check_anderson_roundtrip(seed: u64) -> CheckReport {
    let mut rng = gen::rng(seed ^ 0x05);
    let mut cases = 0;
    let mut passed = true;
    for ring in small_rings().into_iter().filter(|r| r.is_field()) {
        for _ in 0..10 {
            cases += 1;
            let rank = 1 + (cases % 3);
            let e = gen::drinfeld(&ring, &mut rng, rank);
            let m = match crate::tmotive::motive_of(&e) {
                Ok(m) => m,
                Err(_) => {
                    passed = false;
                    continue;
                }
            };
            match crate::tmotive::tmodule_of(&m) {
                Ok((e2, iso)) => {
                    passed &= e2.rank == e.rank;
                    passed &= iso.mat.det(&ring).deg() == Some(0);
                }
                Err(_) => passed = false,
            }
        }
    }
    CheckReport { name: "anderson-roundtrip".into(), cases, passed }
}

fn check_shtuka_functor(seed: u64) -> CheckReport {
    let mut rng = gen::rng(seed ^ 0x06);
    let mut cases = 0;
    let mut passed = true;
    for ring in small_rings().into_iter().filter(|r| r.is_field()) {
        for _ in 0..50 {
            cases += 1;
            let n = 1 + (cases % 4);
            let fmat: Vec<RingElem> = (0..n * n).map(|_| gen::elem(&ring, &mut rng)).collect();
            let v = crate::shtuka::FinShtuka::new(&ring, n, fmat).unwrap();
            let g = crate::shtuka::dr_q(&v);
            let v2 = crate::shtuka::m_q(&g).unwrap();
            passed &= v2 == v;
            passed &= crate::shtuka::dr_q(&v2).cmat == g.cmat;
            passed &= g.order_exponent() == n;
        }
    }
    CheckReport { name: "shtuka-functor-roundtrip".into(), cases, passed }
}

fn check_smith(seed: u64) -> CheckReport {
    let mut rng = gen::rng(seed ^ 0x07);
    let mut cases = 0;
    let mut passed = true;
    for ring in small_rings().into_iter().filter(|r| r.is_field()) {
        for _ in 0..30 {
            cases += 1;
            let size = 1 + (cases % 3);
            let mut data = vec![];
            for _ in 0..size * size {
                data.push(gen::poly_k(&ring, &mut rng, 3));
            }
            let a = crate::pmat::PolyMat::new(size, size, data);
            let s = crate::pmat::smith_normal_form(&ring, &a).unwrap();
            passed &= s.u.mul(&ring, &a).mul(&ring, &s.v) == s.d;
            passed &= s.u.det(&ring).deg() == Some(0);
            passed &= s.v.det(&ring).deg() == Some(0);
            for w in s.divisors.windows(2) {
                passed &= w[1].rem(&ring, &w[0]).map(|r| r.is_zero()).unwrap_or(false);
            }
        }
    }
    CheckReport { name: "smith-normal-form".into(), cases, passed }
}

fn check_dual(seed: u64) -> CheckReport {
    let mut rng = gen::rng(seed ^ 0x08);
    let mut cases = 0;
    let mut passed = true;
    for ring in small_rings().into_iter().filter(|r| r.is_field()) {
        for _ in 0..8 {
            cases += 1;
            let rank = 1 + (cases % 2);
            let e = gen::drinfeld(&ring, &mut rng, rank);
            let a = loop {
                let a = gen::poly_fq(&ring, &mut rng, 2);
                if a.deg().map_or(false, |d| d >= 1) {
                    break a;
                }
            };
            let f = crate::tmodule::TModuleMorphism::from_scalar(&e, &a).unwrap();
            let mf = match crate::tmotive::motive_of_morphism(&f) {
                Ok(m) => m,
                Err(_) => {
                    passed = false;
                    continue;
                }
            };
            match crate::isogeny::dual_isogeny(&mf) {
                Ok(cert) => passed &= cert.verified,
                Err(_) => passed = false,
            }
        }
    }
    CheckReport { name: "dual-isogeny".into(), cases, passed }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selfcheck_passes_with_fixed_seed() {
        for report in run_all(7) {
            assert!(report.passed, "suite {} failed", report.name);
            assert!(report.cases > 0);
        }
    }

    #[test]
    fn selfcheck_is_deterministic() {
        let a = run_all(42);
        let b = run_all(42);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.cases, y.cases);
            assert_eq!(x.passed, y.passed);
        }
    }
}
