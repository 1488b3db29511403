//! Deformations over artinian test rings and quotient isogenies.
//!
//! A deformation datum: a Drinfeld module E0 over the residue field l, a
//! test ring B = l[Y]/(Y^k) with a chosen lift of gamma0(T), and the
//! reduction B -> l. Lifts are standard-form modules over B with the given
//! gamma(T) whose coefficients reduce to those of E0; two lifts are
//! isomorphic as deformations when some u congruent to 1 mod (Y)
//! conjugates one into the other. All enumerations are exhaustive over the
//! nilradical, with an explicit tau-degree bound on u.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgebraElement, AlgebraError, AlgebraHom, ArtinLocalAlgebra};
use crate::apoly::APoly;
use crate::drinfeld::{DrinfeldError, DrinfeldModule};
use crate::level::{check, LevelCandidate, LevelError, LevelMode};
use crate::torsion::{torsion_points_self, TorsionError};
use crate::twisted::{TwistedError, TwistedPoly};

#[derive(Debug, Error)]
pub enum DeformationError {
    #[error("the base module must live over a field")]
    BaseNotAField,
    #[error("the test ring does not extend the base field")]
    IncompatibleTestRing,
    #[error("gamma lift does not reduce to gamma0(T)")]
    BadGammaLift,
    #[error("kernel polynomial does not divide: remainder is nonzero")]
    NotAQuotient,
    #[error(transparent)]
    Drinfeld(#[from] DrinfeldError),
    #[error(transparent)]
    Twisted(#[from] TwistedError),
    #[error(transparent)]
    Torsion(#[from] TorsionError),
    #[error(transparent)]
    Level(#[from] LevelError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// E0 over l, the test ring B, a lift of gamma0(T), and the two structure
/// maps l -> B -> l.
#[derive(Clone, Debug)]
pub struct DeformationProblem {
    pub e0: DrinfeldModule,
    pub algebra: Arc<ArtinLocalAlgebra>,
    pub gamma_lift: AlgebraElement,
    pub inclusion: AlgebraHom,
    pub reduction: AlgebraHom,
}

impl DeformationProblem {
    /// The canonical datum: B = l[Y]/(Y^k) over the base field of e0, and
    /// `gamma_lift` an element of B reducing to gamma0(T).
    pub fn new(
        e0: DrinfeldModule,
        algebra: Arc<ArtinLocalAlgebra>,
        gamma_lift: AlgebraElement,
    ) -> Result<Self, DeformationError> {
        let base = e0.algebra().clone();
        if !base.is_field() {
            return Err(DeformationError::BaseNotAField);
        }
        if base.ground() != algebra.ground() || base.m() != algebra.m() {
            return Err(DeformationError::IncompatibleTestRing);
        }
        let inclusion = AlgebraHom::embedding(&base, &algebra)?;
        let reduction = AlgebraHom::reduction(&algebra)?;
        if reduction.apply(&gamma_lift) != compose(&reduction, &inclusion, &e0.gamma_t()) {
            return Err(DeformationError::BadGammaLift);
        }
        Ok(DeformationProblem {
            e0,
            algebra,
            gamma_lift,
            inclusion,
            reduction,
        })
    }

    /// The trivial lift of gamma0(T) (no Y-part).
    pub fn with_trivial_gamma(
        e0: DrinfeldModule,
        algebra: Arc<ArtinLocalAlgebra>,
    ) -> Result<Self, DeformationError> {
        let base = e0.algebra().clone();
        if !base.is_field() {
            return Err(DeformationError::BaseNotAField);
        }
        let inclusion = AlgebraHom::embedding(&base, &algebra)?;
        let gamma_lift = inclusion.apply(&e0.gamma_t());
        Self::new(e0, algebra, gamma_lift)
    }

    /// All standard-form lifts of e0 over B with the chosen gamma(T):
    /// c_i = c_i(e0) + (element of the nilradical) for i = 1..d, in
    /// odometer order (slot d fastest).
    pub fn enumerate_lifts(&self) -> Result<Vec<DrinfeldModule>, DeformationError> {
        let b = &self.algebra;
        let d = self.e0.rank();
        let base_coeffs: Vec<AlgebraElement> = (1..=d)
            .map(|i| self.inclusion.apply(&self.e0.e_t().coeff(i)))
            .collect();
        let nil = b.nilradical_elements();
        let mut out = Vec::new();
        let mut odometer = vec![0usize; d];
        loop {
            let higher: Vec<AlgebraElement> = (0..d)
                .map(|i| b.add(&base_coeffs[i], &nil[odometer[i]]))
                .collect();
            out.push(DrinfeldModule::new(
                b.clone(),
                self.gamma_lift.clone(),
                higher,
            )?);
            let mut pos = d;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                odometer[pos] += 1;
                if odometer[pos] < nil.len() {
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

    /// All u = u_0 + u_1 tau + .. + u_n tau^n with u_0 in 1 + (Y),
    /// u_i in (Y) for i >= 1: the isomorphisms reducing to the identity.
    pub fn identity_reducing_units(&self, tau_degree: usize) -> Vec<TwistedPoly> {
        let b = &self.algebra;
        let nil = b.nilradical_elements();
        let mut out = Vec::new();
        let mut odometer = vec![0usize; tau_degree + 1];
        loop {
            let mut coeffs: Vec<AlgebraElement> =
                odometer.iter().map(|&i| nil[i].clone()).collect();
            coeffs[0] = b.add(&b.one(), &coeffs[0]);
            out.push(TwistedPoly::new(b.clone(), coeffs));
            let mut pos = tau_degree + 1;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                odometer[pos] += 1;
                if odometer[pos] < nil.len() {
                    break;
                }
                odometer[pos] = 0;
            }
            if odometer.iter().all(|&i| i == 0) {
                break;
            }
        }
        out
    }

    /// Partition the lifts into isomorphism classes of deformations, using
    /// conjugation by every identity-reducing u of tau-degree <= bound.
    /// Returns the classes as sorted index lists into `enumerate_lifts`.
    pub fn classes(&self, u_tau_degree: usize) -> Result<Vec<Vec<usize>>, DeformationError> {
        let lifts = self.enumerate_lifts()?;
        let units = self.identity_reducing_units(u_tau_degree);
        let key = |e: &DrinfeldModule| -> Vec<Vec<u64>> {
            e.e_t()
                .coeffs()
                .iter()
                .map(|c| self.algebra.fp_coords(c))
                .collect()
        };
        let index: std::collections::HashMap<Vec<Vec<u64>>, usize> = lifts
            .iter()
            .enumerate()
            .map(|(i, e)| (key(e), i))
            .collect();
        // union-find over lift indices
        let mut parent: Vec<usize> = (0..lifts.len()).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let r = find(parent, parent[i]);
                parent[i] = r;
            }
            parent[i]
        }
        for (i, e) in lifts.iter().enumerate() {
            for u in &units {
                let conj = e.conjugate_e_t(u)?;
                if let Some(&j) = index.get(&key(&DrinfeldModule::from_e_t(conj.clone())?)) {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri] = rj;
                    }
                } else {
                    // conjugate left standard form; ignore (it is then not a
                    // standard lift and cannot identify two lifts directly)
                    debug_assert!(conj.degree().unwrap() > self.e0.rank());
                }
            }
        }
        let mut classes: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for i in 0..lifts.len() {
            let r = find(&mut parent, i);
            classes.entry(r).or_default().push(i);
        }
        Ok(classes.into_values().collect())
    }
}

fn compose(outer: &AlgebraHom, inner: &AlgebraHom, x: &AlgebraElement) -> AlgebraElement {
    outer.apply(&inner.apply(x))
}

/// Lifts over B of a level structure given over the residue field: the
/// candidate tuples whose pointwise reduction matches, classified by each
/// checker.
#[derive(Clone, Debug)]
pub struct LevelLiftReport {
    pub base_points: Vec<u64>,
    pub lifts_per_prime: Vec<Vec<u64>>,
    pub lifts_single_ideal: Vec<Vec<u64>>,
    pub agree: bool,
}

pub fn level_lift_report(
    e: &DrinfeldModule,
    a: &APoly,
    reduction: &AlgebraHom,
    base: &LevelCandidate,
) -> Result<LevelLiftReport, DeformationError> {
    let b = e.algebra().clone();
    let l = reduction.dst().clone();
    let d = e.rank();
    let torsion = torsion_points_self(e, a)?;
    let matching: Vec<&AlgebraElement> = torsion
        .points
        .iter()
        .collect();
    let mut lifts_a = Vec::new();
    let mut lifts_b = Vec::new();
    let mut odometer = vec![0usize; d];
    loop {
        let points: Vec<AlgebraElement> = odometer
            .iter()
            .map(|&i| matching[i].clone())
            .collect();
        let reduces = points
            .iter()
            .zip(&base.points)
            .all(|(p, bp)| reduction.apply(p) == *bp);
        if reduces {
            let cand = LevelCandidate {
                ideal: a.clone(),
                points: points.clone(),
            };
            let indices: Vec<u64> = points.iter().map(|p| b.index_of(p)).collect();
            if check(e, &cand, LevelMode::PerPrime)?.passed {
                lifts_a.push(indices.clone());
            }
            if check(e, &cand, LevelMode::SingleIdeal)?.passed {
                lifts_b.push(indices);
            }
        }
        let mut pos = d;
        loop {
            if pos == 0 {
                break;
            }
            pos -= 1;
            odometer[pos] += 1;
            if odometer[pos] < matching.len() {
                break;
            }
            odometer[pos] = 0;
        }
        if odometer.iter().all(|&i| i == 0) {
            break;
        }
    }
    let agree = lifts_a == lifts_b;
    Ok(LevelLiftReport {
        base_points: base.points.iter().map(|p| l.index_of(p)).collect(),
        lifts_per_prime: lifts_a,
        lifts_single_ideal: lifts_b,
        agree,
    })
}

/// The quotient module E' = E/V(h) for a monic additive h with
/// h * e_T = e'_T * h: e'_T is the exact right quotient of h*e_T by h.
/// Errors if h does not right-divide h*e_T exactly.
pub fn quotient_by(
    e: &DrinfeldModule,
    h: &TwistedPoly,
) -> Result<DrinfeldModule, DeformationError> {
    let (e_t_new, r) = h.mul(e.e_t())?.right_divide(h)?;
    if !r.is_zero() {
        return Err(DeformationError::NotAQuotient);
    }
    let out = DrinfeldModule::from_e_t(e_t_new)?;
    // the quotient has the same characteristic map
    debug_assert_eq!(out.gamma_t(), e.gamma_t());
    Ok(out)
}

/// Quotient by the full a-torsion: E/E[a], together with the isogeny h_a.
pub fn quotient_isogeny(
    e: &DrinfeldModule,
    a: &APoly,
) -> Result<(DrinfeldModule, TwistedPoly), DeformationError> {
    let h = crate::torsion::division_poly(e, a)?.h;
    let out = quotient_by(e, &h)?;
    Ok((out, h))
}
