//! Drinfeld modules of rank d over B for A = Fq[T]: construction and
//! validation, the ring homomorphism a -> e_a, standard form, the
//! characteristic, and the height over a field.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgebraElement, AlgebraError, ArtinLocalAlgebra};
use crate::apoly::APoly;
use crate::polyutil;
use crate::twisted::{TwistedError, TwistedPoly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DrinfeldError {
    #[error("no unit coefficient among c_1..c_N: not a Drinfeld module over a local base")]
    NoUnitCoefficient,
    #[error("all higher coefficients vanish: the module would have rank 0")]
    ZeroDegreeModule,
    #[error("coefficient above the top unit index must be nilpotent")]
    BadCoefficient(usize),
    #[error("pi is not the characteristic of this module")]
    NotCharacteristic,
    #[error("operation requires a field base")]
    NotAField,
    #[error("standardization did not terminate (internal error)")]
    NoTermination,
    #[error(transparent)]
    Twisted(#[from] TwistedError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The characteristic as found by a bounded search over monic irreducibles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharacteristicInfo {
    /// The unique monic irreducible pi with gamma(pi) a non-unit, if one
    /// exists within the search bound.
    pub pi: Option<APoly>,
    /// Degree bound of the search; `None` for pi means "general
    /// characteristic within this bound".
    pub degree_bound: usize,
}

pub const DEFAULT_CHARACTERISTIC_DEGREE_BOUND: usize = 4;

/// A Drinfeld module over B, determined by e_T. The constant coefficient of
/// e_T is gamma(T); the rank d is the index of the highest unit coefficient,
/// and everything above it must be nilpotent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrinfeldModule {
    e_t: TwistedPoly,
    rank: usize,
}

impl DrinfeldModule {
    /// Build from gamma(T) and the coefficients c_1..c_N of e_T.
    pub fn new(
        algebra: Arc<ArtinLocalAlgebra>,
        gamma_t: AlgebraElement,
        higher: Vec<AlgebraElement>,
    ) -> Result<Self, DrinfeldError> {
        let mut coeffs = Vec::with_capacity(higher.len() + 1);
        coeffs.push(gamma_t);
        coeffs.extend(higher);
        let e_t = TwistedPoly::new(algebra.clone(), coeffs);
        Self::from_e_t(e_t)
    }

    pub fn from_e_t(e_t: TwistedPoly) -> Result<Self, DrinfeldError> {
        let alg = e_t.algebra().clone();
        let n = match e_t.degree() {
            Some(n) if n >= 1 => n,
            _ => return Err(DrinfeldError::ZeroDegreeModule),
        };
        let rank = (1..=n)
            .rev()
            .find(|&i| alg.is_unit(&e_t.coeff(i)))
            .ok_or(DrinfeldError::NoUnitCoefficient)?;
        for i in rank + 1..=n {
            if !alg.is_nilpotent(&e_t.coeff(i)) {
                return Err(DrinfeldError::BadCoefficient(i));
            }
        }
        Ok(DrinfeldModule { e_t, rank })
    }

    pub fn algebra(&self) -> &Arc<ArtinLocalAlgebra> {
        self.e_t.algebra()
    }

    pub fn e_t(&self) -> &TwistedPoly {
        &self.e_t
    }

    pub fn gamma_t(&self) -> AlgebraElement {
        self.e_t.coeff(0)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Standard form: deg_tau e_T = d.
    pub fn is_standard(&self) -> bool {
        self.e_t.degree() == Some(self.rank)
    }

    /// gamma(a): the characteristic map A -> B evaluated at a.
    pub fn gamma_of(&self, a: &APoly) -> AlgebraElement {
        a.eval_in(self.algebra(), &self.gamma_t())
    }

    /// e_a = a(e_T) in B{tau}; a ring homomorphism in a. e_0 = 0.
    pub fn e_of(&self, a: &APoly) -> Result<TwistedPoly, TwistedError> {
        let alg = self.algebra().clone();
        let g = alg.ground();
        let mut acc = TwistedPoly::zero(alg.clone());
        for c in a.coeffs().iter().rev() {
            acc = acc.mul(&self.e_t)?;
            if !g.fq_is_zero(c) {
                acc = acc.add(&TwistedPoly::scalar(alg.clone(), alg.scalar_from_fq(c)));
            }
        }
        Ok(acc)
    }

    /// Verify deg_tau e_a = d*deg(a) with unit leading coefficient on a
    /// sample of a's. Returns the first failing witness, if any.
    pub fn rank_check(&self) -> Result<(), APoly> {
        let g = self.algebra().ground().clone();
        let samples = vec![
            APoly::t(&g),
            APoly::t_plus(&g, 1),
            APoly::t(&g).pow(&g, 2),
            APoly::least_irreducible(&g, 2),
        ];
        for a in samples {
            let ea = match self.e_of(&a) {
                Ok(p) => p,
                Err(_) => return Err(a),
            };
            let want = self.rank * a.degree().unwrap();
            let ok = ea.degree() == Some(want)
                && self.algebra().is_unit(ea.leading_coeff().unwrap());
            if !ok {
                return Err(a);
            }
        }
        Ok(())
    }

    /// Conjugate e_T by an invertible u: u * e_T * u^{-1}.
    pub fn conjugate_e_t(&self, u: &TwistedPoly) -> Result<TwistedPoly, TwistedError> {
        let u_inv = u.invert_unit()?;
        u.mul(&self.e_t)?.mul(&u_inv)
    }

    /// Standard form plus the isomorphism u with u*e_T*u^{-1} = e_T,std.
    /// Each pass kills the top excess coefficient modulo an increasing
    /// power of the nilradical.
    pub fn standardize(&self) -> Result<(DrinfeldModule, TwistedPoly), DrinfeldError> {
        let alg = self.algebra().clone();
        let d = self.rank;
        let mut e = self.e_t.clone();
        let mut u_total = TwistedPoly::one(alg.clone());
        let mut guard = 0usize;
        while e.degree().unwrap() > d {
            guard += 1;
            if guard > 1000 {
                return Err(DrinfeldError::NoTermination);
            }
            let n = e.degree().unwrap();
            let c_n = e.coeff(n);
            let c_d = e.coeff(d);
            // u = 1 + w tau^{n-d} with w = -c_n / c_d^{q^{n-d}} removes the
            // leading excess term up to higher nilpotency order.
            let w = alg.neg(&alg.mul(&c_n, &alg.inv(&alg.frobenius(&c_d, n - d))?));
            let mut u_coeffs = vec![alg.zero(); n - d + 1];
            u_coeffs[0] = alg.one();
            u_coeffs[n - d] = w;
            let u = TwistedPoly::new(alg.clone(), u_coeffs);
            let u_inv = u.invert_unit()?;
            e = u.mul(&e)?.mul(&u_inv)?;
            u_total = u.mul(&u_total)?;
        }
        let std = DrinfeldModule::from_e_t(e)?;
        debug_assert_eq!(std.rank, d);
        Ok((std, u_total))
    }

    /// Bounded search for the monic irreducible pi with gamma(pi) a
    /// non-unit. For a local base there is at most one.
    pub fn characteristic_of(&self, degree_bound: usize) -> CharacteristicInfo {
        let g = self.algebra().ground().clone();
        let mut found: Option<APoly> = None;
        for deg in 1..=degree_bound {
            let count = g.q().pow(deg as u32);
            for idx in 0..count {
                let pi = APoly::from_coeffs(&g, polyutil::monic_by_index(&g, deg, idx));
                if !pi.is_irreducible(&g) {
                    continue;
                }
                if !self.algebra().is_unit(&self.gamma_of(&pi)) {
                    assert!(
                        found.is_none(),
                        "two bad primes over a local base (internal error)"
                    );
                    found = Some(pi);
                }
            }
        }
        CharacteristicInfo {
            pi: found,
            degree_bound,
        }
    }

    /// Height over a field base at the characteristic pi: the least i with
    /// a unit coefficient in e_pi, divided by deg(pi).
    pub fn height(&self, pi: &APoly) -> Result<usize, DrinfeldError> {
        let alg = self.algebra();
        if !alg.is_field() {
            return Err(DrinfeldError::NotAField);
        }
        if !alg.is_zero(&self.gamma_of(pi)) {
            return Err(DrinfeldError::NotCharacteristic);
        }
        let e_pi = self.e_of(pi)?;
        let i = (0..=e_pi.degree().unwrap())
            .find(|&i| alg.is_unit(&e_pi.coeff(i)))
            .expect("e_pi has a unit coefficient for a valid module");
        let dp = pi.degree().unwrap();
        assert_eq!(i % dp, 0, "inseparability index not divisible by deg(pi)");
        Ok(i / dp)
    }
}
