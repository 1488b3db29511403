//! Level structures for an ideal I = (a): A-module maps
//! iota: (I^{-1}/A)^d -> E(B) subject to a Cartier-divisor condition, in two
//! forms. The per-prime form asks, for each monic prime pi | a, that the sum
//! of (iota(x)) over the pi-torsion part of the source equal div(h_pi); the
//! single-ideal form asks that the sum over the whole source equal div(h_a).
//! Both are checked exactly as polynomial identities in B[X].
//!
//! The products Pi (X - iota(x)) are additive polynomials: the image of iota
//! is an F_q-subspace H of B and each fiber has the same size t, so the
//! product is P_H(X)^t with P_H the subspace polynomial of H. We build P_H
//! by the standard one-generator-at-a-time recursion and raise it to the
//! q-power t coefficientwise. A dense plain-polynomial product is kept as an
//! independent oracle for small cases.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{fq_rref, AlgebraElement, AlgebraError, ArtinLocalAlgebra};
use crate::apoly::APoly;
use crate::drinfeld::{DrinfeldError, DrinfeldModule};
use crate::torsion::{division_poly, torsion_points_self, TorsionError};
use crate::twisted::{TwistedError, TwistedPoly};

/// Cap on the number of source tuples enumerated by the dense oracle.
pub const DEFAULT_DENSE_PRODUCT_BOUND: u64 = 1 << 12;
/// Cap on the number of candidate tuples enumerated per module.
pub const DEFAULT_TUPLE_BOUND: u64 = 1 << 20;

#[derive(Debug, Error)]
pub enum LevelError {
    #[error("candidate point {0} is not an a-torsion point")]
    PointNotTorsion(usize),
    #[error("candidate has {got} points, the rank is {rank}")]
    WrongArity { got: usize, rank: usize },
    #[error("{count} tuples exceed the enumeration bound {bound}")]
    TooManyTuples { count: u64, bound: u64 },
    #[error(transparent)]
    Torsion(#[from] TorsionError),
    #[error(transparent)]
    Drinfeld(#[from] DrinfeldError),
    #[error(transparent)]
    Twisted(#[from] TwistedError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Which divisor identity defines a level structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LevelMode {
    /// One identity per monic prime dividing a, on the prime-torsion part
    /// of the source.
    PerPrime,
    /// A single identity for the full ideal.
    SingleIdeal,
}

/// A candidate level-I structure: the images y_1..y_d of the standard
/// generators of (I^{-1}/A)^d = (A/a)^d. Construction checks that each
/// point is killed by e_a, which is what makes iota well defined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelCandidate {
    pub ideal: APoly,
    pub points: Vec<AlgebraElement>,
}

impl LevelCandidate {
    pub fn new(
        e: &DrinfeldModule,
        a: &APoly,
        points: Vec<AlgebraElement>,
    ) -> Result<Self, LevelError> {
        if points.len() != e.rank() {
            return Err(LevelError::WrongArity {
                got: points.len(),
                rank: e.rank(),
            });
        }
        let alg = e.algebra();
        let ea = e.e_of(a)?;
        for (j, y) in points.iter().enumerate() {
            if !alg.is_zero(&ea.eval(y)) {
                return Err(LevelError::PointNotTorsion(j));
            }
        }
        Ok(LevelCandidate {
            ideal: a.clone(),
            points,
        })
    }

    /// iota at the residue tuple (r_1, .., r_d): sum e_{r_j}(y_j).
    pub fn iota(&self, e: &DrinfeldModule, residues: &[APoly]) -> Result<AlgebraElement, LevelError> {
        assert_eq!(residues.len(), self.points.len());
        let alg = e.algebra();
        let mut acc = alg.zero();
        for (r, y) in residues.iter().zip(&self.points) {
            acc = alg.add(&acc, &e.e_of(r)?.eval(y));
        }
        Ok(acc)
    }

    pub fn point_indices(&self, alg: &ArtinLocalAlgebra) -> Vec<u64> {
        self.points.iter().map(|y| alg.index_of(y)).collect()
    }
}

/// The subspace polynomial P_H of the F_q-span H of `gens`, raised to
/// q^{target_log - dim H} so the result has X-degree q^{target_log}.
///
/// P_{H + F_q w} = P_H^q - P_H(w)^{q-1} P_H, a formal identity valid over
/// any F_q-algebra because P_H is additive and prod_{c in F_q}(U - c*beta)
/// = U^q - beta^{q-1} U in F_q[U, beta].
fn subspace_product(
    alg: &Arc<ArtinLocalAlgebra>,
    gens: &[AlgebraElement],
    target_log: usize,
) -> Result<TwistedPoly, LevelError> {
    let g = alg.ground();
    let q = g.q();
    let rows: Vec<_> = gens.iter().map(|x| x.fq_coords().to_vec()).collect();
    let (basis, _) = fq_rref(g, rows);
    assert!(
        basis.len() <= target_log,
        "image larger than the source group"
    );
    let mut p = TwistedPoly::one(alg.clone()); // X in X-form
    for coords in basis {
        let w = alg.from_fq_coords(coords);
        let beta = p.eval(&w);
        let scale = alg.pow(&beta, q - 1);
        p = p.pow_q().sub(&p.scale(&scale));
    }
    // uniform fiber multiplicity t = q^{target_log - dim H}
    for _ in 0..target_log - p.degree().unwrap() {
        p = p.pow_q();
    }
    Ok(p)
}

/// Outcome of one divisor identity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeCheck {
    /// Monic generator of the prime (or of the full ideal for the
    /// single-ideal mode), as F_p-coefficient lists.
    pub modulus: Vec<Vec<u64>>,
    pub matched: bool,
}

/// Result of running one checker on one candidate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorReport {
    pub mode: LevelMode,
    pub passed: bool,
    pub checks: Vec<PrimeCheck>,
}

fn apoly_coeff_lists(a: &APoly) -> Vec<Vec<u64>> {
    a.coeffs().to_vec()
}

/// Precomputed data for checking many candidates against one (module,
/// ideal) pair: the polynomials e_{T^i b} and division polynomials are
/// shared across candidates; only the generator evaluations and the
/// subspace product are per-candidate.
pub struct CheckContext {
    algebra: Arc<ArtinLocalAlgebra>,
    rank: usize,
    ideal: APoly,
    /// e_{T^i}, i < deg a: the full-source image generators applied to y_j.
    full_polys: Vec<TwistedPoly>,
    h_a: TwistedPoly,
    /// Per monic prime pi | a: (pi, e_{T^i * (a/pi)} for i < deg pi, h_pi).
    primes: Vec<(APoly, Vec<TwistedPoly>, TwistedPoly)>,
}

impl CheckContext {
    pub fn new(e: &DrinfeldModule, a: &APoly) -> Result<Self, LevelError> {
        let alg = e.algebra().clone();
        let g = alg.ground().clone();
        let da = a.degree().expect("nonzero ideal");
        let powers = |b: &APoly, count: usize| -> Result<Vec<TwistedPoly>, LevelError> {
            let mut out = Vec::with_capacity(count);
            let mut tb = b.clone();
            for _ in 0..count {
                out.push(e.e_of(&tb)?);
                tb = tb.mul(&g, &APoly::t(&g));
            }
            Ok(out)
        };
        let full_polys = powers(&APoly::one(&g), da)?;
        let h_a = division_poly(e, a)?.h;
        let mut primes = Vec::new();
        for (pi, _) in a.factor(&g) {
            let (b, r) = a.divmod(&g, &pi);
            debug_assert!(r.is_zero());
            let h_pi = division_poly(e, &pi)?.h;
            primes.push((pi.clone(), powers(&b, pi.degree().unwrap())?, h_pi));
        }
        Ok(CheckContext {
            algebra: alg,
            rank: e.rank(),
            ideal: a.clone(),
            full_polys,
            h_a,
            primes,
        })
    }

    fn product_matches(
        &self,
        polys: &[TwistedPoly],
        points: &[AlgebraElement],
        target_log: usize,
        h: &TwistedPoly,
    ) -> Result<bool, LevelError> {
        let gens: Vec<AlgebraElement> = polys
            .iter()
            .flat_map(|p| points.iter().map(|y| p.eval(y)))
            .collect();
        Ok(subspace_product(&self.algebra, &gens, target_log)? == *h)
    }

    pub fn check_single_ideal(&self, points: &[AlgebraElement]) -> Result<DivisorReport, LevelError> {
        let da = self.ideal.degree().unwrap();
        let matched = self.product_matches(&self.full_polys, points, self.rank * da, &self.h_a)?;
        Ok(DivisorReport {
            mode: LevelMode::SingleIdeal,
            passed: matched,
            checks: vec![PrimeCheck {
                modulus: apoly_coeff_lists(&self.ideal),
                matched,
            }],
        })
    }

    pub fn check_per_prime(&self, points: &[AlgebraElement]) -> Result<DivisorReport, LevelError> {
        let mut checks = Vec::new();
        let mut passed = true;
        for (pi, polys, h_pi) in &self.primes {
            let dp = pi.degree().unwrap();
            let matched = self.product_matches(polys, points, self.rank * dp, h_pi)?;
            passed &= matched;
            checks.push(PrimeCheck {
                modulus: apoly_coeff_lists(pi),
                matched,
            });
        }
        Ok(DivisorReport {
            mode: LevelMode::PerPrime,
            passed,
            checks,
        })
    }
}

/// Single-ideal identity: div(h_a) = sum of (iota(x)) over all source
/// tuples, checked as h_a = P_H^t with H the image of iota.
pub fn check_def_b(e: &DrinfeldModule, cand: &LevelCandidate) -> Result<DivisorReport, LevelError> {
    CheckContext::new(e, &cand.ideal)?.check_single_ideal(&cand.points)
}

/// Per-prime identity: for each monic prime pi | a, div(h_pi) = sum of
/// (iota(x)) over the pi-torsion part of the source, i.e. over the tuples
/// b*(A/pi)^d with b = a/pi.
pub fn check_def_a(e: &DrinfeldModule, cand: &LevelCandidate) -> Result<DivisorReport, LevelError> {
    CheckContext::new(e, &cand.ideal)?.check_per_prime(&cand.points)
}

/// Dense oracle for the single-ideal identity: multiply out
/// prod (X - iota(x)) over every source tuple as a plain polynomial in B[X]
/// and compare with h_a literally.
pub fn check_def_b_dense(e: &DrinfeldModule, cand: &LevelCandidate) -> Result<bool, LevelError> {
    let alg = e.algebra().clone();
    let g = alg.ground().clone();
    let a = &cand.ideal;
    let da = a.degree().unwrap();
    let d = e.rank();
    let residues = APoly::residues(&g, da);
    let tuple_count = (residues.len() as u64).pow(d as u32);
    if tuple_count > DEFAULT_DENSE_PRODUCT_BOUND {
        return Err(LevelError::TooManyTuples {
            count: tuple_count,
            bound: DEFAULT_DENSE_PRODUCT_BOUND,
        });
    }
    // precompute e_{r}(y_j) for every residue r and slot j
    let mut images = Vec::with_capacity(residues.len());
    for r in &residues {
        let er = e.e_of(r)?;
        let row: Vec<AlgebraElement> = cand.points.iter().map(|y| er.eval(y)).collect();
        images.push(row);
    }
    let mut product = vec![alg.one()]; // constant polynomial 1
    let mut odometer = vec![0usize; d];
    loop {
        let mut v = alg.zero();
        for (j, &i) in odometer.iter().enumerate() {
            v = alg.add(&v, &images[i][j]);
        }
        // multiply by (X - v)
        let mut next = vec![alg.zero(); product.len() + 1];
        for (i, c) in product.iter().enumerate() {
            next[i + 1] = alg.add(&next[i + 1], c);
            next[i] = alg.sub(&next[i], &alg.mul(c, &v));
        }
        product = next;
        // advance, last slot fastest
        let mut pos = d;
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            odometer[pos] += 1;
            if odometer[pos] < residues.len() {
                break;
            }
            odometer[pos] = 0;
        }
        if odometer.iter().all(|&i| i == 0) {
            break;
        }
    }
    let h = division_poly(e, a)?.h;
    // compare against the dense form of the additive polynomial h
    let q = g.q() as usize;
    let mut dense_h = vec![alg.zero(); product.len()];
    let mut xdeg = 1usize;
    for i in 0..=h.degree().unwrap() {
        dense_h[xdeg] = h.coeff(i);
        xdeg *= q;
    }
    Ok(product == dense_h)
}

pub fn check(
    e: &DrinfeldModule,
    cand: &LevelCandidate,
    mode: LevelMode,
) -> Result<DivisorReport, LevelError> {
    match mode {
        LevelMode::PerPrime => check_def_a(e, cand),
        LevelMode::SingleIdeal => check_def_b(e, cand),
    }
}

/// All level structures on E for (a) over the module's own base, in
/// odometer order over d-tuples of a-torsion points (last slot fastest).
pub fn enumerate_level_structures(
    e: &DrinfeldModule,
    a: &APoly,
    mode: LevelMode,
) -> Result<Vec<LevelCandidate>, LevelError> {
    let ctx = CheckContext::new(e, a)?;
    enumerate_with(e, a, |_, c| {
        let rep = match mode {
            LevelMode::PerPrime => ctx.check_per_prime(&c.points)?,
            LevelMode::SingleIdeal => ctx.check_single_ideal(&c.points)?,
        };
        Ok(rep.passed)
    })
}

fn enumerate_with<F>(
    e: &DrinfeldModule,
    a: &APoly,
    mut keep: F,
) -> Result<Vec<LevelCandidate>, LevelError>
where
    F: FnMut(&DrinfeldModule, &LevelCandidate) -> Result<bool, LevelError>,
{
    let torsion = torsion_points_self(e, a)?;
    let d = e.rank();
    let count = (torsion.len() as u64).checked_pow(d as u32).unwrap_or(u64::MAX);
    if count > DEFAULT_TUPLE_BOUND {
        return Err(LevelError::TooManyTuples {
            count,
            bound: DEFAULT_TUPLE_BOUND,
        });
    }
    let mut out = Vec::new();
    let mut odometer = vec![0usize; d];
    loop {
        let points: Vec<AlgebraElement> = odometer
            .iter()
            .map(|&i| torsion.points[i].clone())
            .collect();
        let cand = LevelCandidate {
            ideal: a.clone(),
            points,
        };
        if keep(e, &cand)? {
            out.push(cand);
        }
        let mut pos = d;
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            odometer[pos] += 1;
            if odometer[pos] < torsion.len() {
                break;
            }
            odometer[pos] = 0;
        }
        if odometer.iter().all(|&i| i == 0) {
            break;
        }
    }
    Ok(out)
}

/// Side-by-side run of both checkers over every candidate tuple.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EquivalenceReport {
    /// Monic generator of the ideal, F_p coefficient lists, ascending.
    pub ideal: Vec<Vec<u64>>,
    pub rank: usize,
    pub torsion_count: usize,
    pub tuple_count: u64,
    /// Accepted tuples per mode, as element enumeration indices.
    pub accepted_per_prime: Vec<Vec<u64>>,
    pub accepted_single_ideal: Vec<Vec<u64>>,
    /// Both modes accept exactly the same tuples.
    pub agree: bool,
    /// Every per-prime acceptance is also a single-ideal acceptance.
    pub a_implies_b: bool,
}

pub fn equivalence_report(e: &DrinfeldModule, a: &APoly) -> Result<EquivalenceReport, LevelError> {
    let torsion_count = torsion_points_self(e, a)?.len();
    let ctx = CheckContext::new(e, a)?;
    let mut accepted_a: Vec<Vec<u64>> = Vec::new();
    let mut accepted_b: Vec<Vec<u64>> = Vec::new();
    enumerate_with(e, a, |e, c| {
        let pa = ctx.check_per_prime(&c.points)?.passed;
        let pb = ctx.check_single_ideal(&c.points)?.passed;
        if pa {
            accepted_a.push(c.point_indices(e.algebra()));
        }
        if pb {
            accepted_b.push(c.point_indices(e.algebra()));
        }
        Ok(false)
    })?;
    let tuple_count = (torsion_count as u64).pow(e.rank() as u32);
    let agree = accepted_a == accepted_b;
    let a_implies_b = accepted_a.iter().all(|t| accepted_b.contains(t));
    Ok(EquivalenceReport {
        ideal: a.coeffs().to_vec(),
        rank: e.rank(),
        torsion_count,
        tuple_count,
        accepted_per_prime: accepted_a,
        accepted_single_ideal: accepted_b,
        agree,
        a_implies_b,
    })
}

/// Closed form for the number of level structures in the etale case over a
/// base where E[a] is isomorphic to (A/a)^d: the order of GL_d(A/a),
/// multiplicative over the prime factorization, with
/// |GL_d(A/pi^n)| = Q^{d^2 (n-1)} * prod_{i=0}^{d-1} (Q^d - Q^i), Q = q^{deg pi}.
pub fn etale_level_count(g: &crate::algebra::GroundField, a: &APoly, d: usize) -> u64 {
    let q = g.q();
    let mut total: u64 = 1;
    for (pi, n) in a.factor(g) {
        let qq = q.pow(pi.degree().unwrap() as u32);
        let mut local: u64 = qq.pow((d * d * (n - 1)) as u32);
        for i in 0..d {
            local *= qq.pow(d as u32) - qq.pow(i as u32);
        }
        total *= local;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{AlgebraHom, ArtinLocalAlgebra};

    fn f2() -> Arc<ArtinLocalAlgebra> {
        ArtinLocalAlgebra::new(2, 1, 1, 1).unwrap()
    }

    fn f2y2() -> Arc<ArtinLocalAlgebra> {
        ArtinLocalAlgebra::new(2, 1, 1, 2).unwrap()
    }

    fn carlitz(alg: &Arc<ArtinLocalAlgebra>, gamma: AlgebraElement) -> DrinfeldModule {
        DrinfeldModule::new(alg.clone(), gamma, vec![alg.one()]).unwrap()
    }

    #[test]
    fn subspace_product_small() {
        // H = F_2 * 1 inside F_2: P = X(X-1) = X^2 + X
        let alg = f2();
        let p = subspace_product(&alg, &[alg.one()], 1).unwrap();
        assert_eq!(p.coeff(0), alg.one());
        assert_eq!(p.coeff(1), alg.one());
        // H = 0, target_log 1: X^2
        let p0 = subspace_product(&alg, &[], 1).unwrap();
        assert!(alg.is_zero(&p0.coeff(0)));
        assert_eq!(p0.coeff(1), alg.one());
        // H = {0, Y} in F_2[Y]/(Y^2): X(X-Y) = X^2 + YX
        let b = f2y2();
        let py = subspace_product(&b, &[b.y()], 1).unwrap();
        assert_eq!(py.coeff(0), b.y());
        assert_eq!(py.coeff(1), b.one());
    }

    #[test]
    fn subspace_product_matches_dense_product() {
        let b = ArtinLocalAlgebra::new(2, 1, 2, 2).unwrap();
        let gens = vec![b.omega(), b.y()];
        let p = subspace_product(&b, &gens, 2).unwrap();
        // dense product over the actual span
        let span = b.span_elements(&gens);
        assert_eq!(span.len(), 4);
        let mut dense = vec![b.one()];
        for v in &span {
            let mut next = vec![b.zero(); dense.len() + 1];
            for (i, c) in dense.iter().enumerate() {
                next[i + 1] = b.add(&next[i + 1], c);
                next[i] = b.sub(&next[i], &b.mul(c, v));
            }
            dense = next;
        }
        // dense[q^i] should match p.coeff(i), others zero
        let mut expect = vec![b.zero(); dense.len()];
        let mut xdeg = 1usize;
        for i in 0..=p.degree().unwrap() {
            expect[xdeg] = p.coeff(i);
            xdeg *= 2;
        }
        assert_eq!(dense, expect);
    }

    #[test]
    fn carlitz_level_structures_over_f2() {
        // gamma = 1, a = T: torsion {0,1}; only y = 1 is a level structure
        let alg = f2();
        let g = alg.ground().clone();
        let e = carlitz(&alg, alg.one());
        let a = APoly::t(&g);
        let both_a = enumerate_level_structures(&e, &a, LevelMode::PerPrime).unwrap();
        let both_b = enumerate_level_structures(&e, &a, LevelMode::SingleIdeal).unwrap();
        assert_eq!(both_a.len(), 1);
        assert_eq!(both_a, both_b);
        assert_eq!(both_a[0].points, vec![alg.one()]);
        assert_eq!(etale_level_count(&g, &a, 1), 1);
    }

    #[test]
    fn nonreduced_characteristic_example() {
        // gamma(T) = Y over F_2[Y]/(Y^2), a = T: e_T = YX + X^2,
        // torsion {0, Y}; y = Y passes (X(X-Y) = X^2+YX = h_T), y = 0 fails
        let b = f2y2();
        let g = b.ground().clone();
        let e = carlitz(&b, b.y());
        let a = APoly::t(&g);
        let found = enumerate_level_structures(&e, &a, LevelMode::SingleIdeal).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].points, vec![b.y()]);
        // both checkers agree on every candidate
        let rep = equivalence_report(&e, &a).unwrap();
        assert!(rep.agree);
        assert_eq!(rep.accepted_single_ideal, vec![vec![b.index_of(&b.y())]]);
    }

    #[test]
    fn dense_oracle_agrees_with_subspace_path() {
        let b = f2y2();
        let g = b.ground().clone();
        let e = carlitz(&b, b.y());
        for a in [APoly::t(&g), APoly::t_plus(&g, 1), APoly::t(&g).pow(&g, 2)] {
            let torsion = torsion_points_self(&e, &a).unwrap();
            for y in &torsion.points {
                let cand = LevelCandidate::new(&e, &a, vec![y.clone()]).unwrap();
                let fast = check_def_b(&e, &cand).unwrap().passed;
                let dense = check_def_b_dense(&e, &cand).unwrap();
                assert_eq!(fast, dense, "a = {}, y index {}", a.to_string_t(&g), b.index_of(y));
            }
        }
    }

    #[test]
    fn candidate_validation() {
        let alg = f2();
        let g = alg.ground().clone();
        let e = carlitz(&alg, alg.one());
        // 1 is T-torsion (1 + 1 = 0), so fine
        assert!(LevelCandidate::new(&e, &APoly::t(&g), vec![alg.one()]).is_ok());
        // wrong arity
        assert!(matches!(
            LevelCandidate::new(&e, &APoly::t(&g), vec![]),
            Err(LevelError::WrongArity { .. })
        ));
        // 1 is not (T+1)-torsion: e_{T+1}(1) = 1 + 1 + 1 = 1
        assert!(matches!(
            LevelCandidate::new(&e, &APoly::t_plus(&g, 1), vec![alg.one()]),
            Err(LevelError::PointNotTorsion(0))
        ));
    }

    #[test]
    fn etale_count_over_splitting_field() {
        // Carlitz gamma = 1 over F_2, a = T^2; E[T^2] splits over F_4 and
        // the number of level structures is |(A/T^2)^*| = 2
        let alg = f2();
        let g = alg.ground().clone();
        let e = carlitz(&alg, alg.one());
        let a = APoly::t(&g).pow(&g, 2);
        let f4 = ArtinLocalAlgebra::new(2, 1, 2, 1).unwrap();
        let hom = AlgebraHom::embedding(&alg, &f4).unwrap();
        let e4 = DrinfeldModule::from_e_t(e.e_t().map_coeffs(&hom)).unwrap();
        let found = enumerate_level_structures(&e4, &a, LevelMode::SingleIdeal).unwrap();
        assert_eq!(found.len() as u64, etale_level_count(&g, &a, 1));
        // and the two modes agree there
        let rep = equivalence_report(&e4, &a).unwrap();
        assert!(rep.agree && rep.a_implies_b);
    }

    #[test]
    fn composite_ideal_per_prime() {
        // a = T(T+1), Carlitz gamma = w over F_4 (characteristic T + w):
        // both primes are away from the characteristic
        let f4 = ArtinLocalAlgebra::new(2, 1, 2, 1).unwrap();
        let g = f4.ground().clone();
        let e = carlitz(&f4, f4.omega());
        let a = APoly::t(&g).mul(&g, &APoly::t_plus(&g, 1));
        let rep = equivalence_report(&e, &a).unwrap();
        assert!(rep.agree);
        assert_eq!(
            rep.accepted_single_ideal.len() as u64,
            etale_level_count(&g, &a, 1)
        );
        // per-prime report has one entry per prime
        let cand_pts = rep.accepted_per_prime[0].clone();
        let cand = LevelCandidate::new(
            &e,
            &a,
            cand_pts.iter().map(|&i| f4.element(i)).collect(),
        )
        .unwrap();
        let da = check_def_a(&e, &cand).unwrap();
        assert_eq!(da.checks.len(), 2);
        assert!(da.passed);
    }

    #[test]
    fn rank_two_level_structures() {
        // e_T = X + X^4 over F_2 (rank 2, gamma = 1), a = T; E[T] has 4
        // points over F_4 and level structures are the bases: |GL_2(F_2)| = 6
        let alg = f2();
        let g = alg.ground().clone();
        let e = DrinfeldModule::new(alg.clone(), alg.one(), vec![alg.zero(), alg.one()])
            .unwrap();
        let f4 = ArtinLocalAlgebra::new(2, 1, 2, 1).unwrap();
        let hom = AlgebraHom::embedding(&alg, &f4).unwrap();
        let e4 = DrinfeldModule::from_e_t(e.e_t().map_coeffs(&hom)).unwrap();
        let a = APoly::t(&g);
        let rep = equivalence_report(&e4, &a).unwrap();
        assert!(rep.agree);
        assert_eq!(rep.accepted_single_ideal.len() as u64, etale_level_count(&g, &a, 2));
    }
}
