//! The twisted polynomial ring B{tau} with tau*b = b^q*tau, together with
//! its X-form avatar: the F_q-linear polynomial sum c_i X^{q^i}. A single
//! coefficient list carries both views; multiplication in tau-form equals
//! composition in X-form.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgebraElement, AlgebraError, AlgebraHom, ArtinLocalAlgebra, FqLinearMap};

/// Cap on the X-degree q^n of any product we agree to form.
pub const DEFAULT_X_DEGREE_CAP: u128 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistedError {
    #[error("leading coefficient is not a unit")]
    NonUnitLeadingCoefficient,
    #[error("X-degree cap exceeded (tau-degree {0})")]
    DegreeCapExceeded(usize),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// An element of B{tau}; coeffs[i] multiplies tau^i. Canonical form trims
/// trailing zeros. In X-form this is the additive polynomial
/// sum coeffs[i] * X^{q^i}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistedPoly {
    algebra: Arc<ArtinLocalAlgebra>,
    coeffs: Vec<AlgebraElement>,
}

fn check_cap(q: u64, tau_deg: usize) -> Result<(), TwistedError> {
    let mut x_deg: u128 = 1;
    for _ in 0..tau_deg {
        x_deg = x_deg.saturating_mul(q as u128);
        if x_deg > DEFAULT_X_DEGREE_CAP {
            return Err(TwistedError::DegreeCapExceeded(tau_deg));
        }
    }
    Ok(())
}

impl TwistedPoly {
    pub fn new(algebra: Arc<ArtinLocalAlgebra>, coeffs: Vec<AlgebraElement>) -> Self {
        let mut p = TwistedPoly { algebra, coeffs };
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self
            .coeffs
            .last()
            .map_or(false, |c| self.algebra.is_zero(c))
        {
            self.coeffs.pop();
        }
    }

    pub fn zero(algebra: Arc<ArtinLocalAlgebra>) -> Self {
        TwistedPoly {
            algebra,
            coeffs: Vec::new(),
        }
    }

    pub fn one(algebra: Arc<ArtinLocalAlgebra>) -> Self {
        let one = algebra.one();
        TwistedPoly {
            algebra,
            coeffs: vec![one],
        }
    }

    pub fn tau(algebra: Arc<ArtinLocalAlgebra>) -> Self {
        let coeffs = vec![algebra.zero(), algebra.one()];
        TwistedPoly { algebra, coeffs }
    }

    pub fn scalar(algebra: Arc<ArtinLocalAlgebra>, x: AlgebraElement) -> Self {
        TwistedPoly::new(algebra, vec![x])
    }

    pub fn algebra(&self) -> &Arc<ArtinLocalAlgebra> {
        &self.algebra
    }

    pub fn coeffs(&self) -> &[AlgebraElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> AlgebraElement {
        self.coeffs
            .get(i)
            .cloned()
            .unwrap_or_else(|| self.algebra.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// tau-degree; the X-degree is q^degree.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading_coeff(&self) -> Option<&AlgebraElement> {
        self.coeffs.last()
    }

    fn same_base(&self, other: &TwistedPoly) {
        assert!(
            Arc::ptr_eq(&self.algebra, &other.algebra) || *self.algebra == *other.algebra,
            "twisted polynomials over different algebras"
        );
    }

    pub fn add(&self, other: &TwistedPoly) -> TwistedPoly {
        self.same_base(other);
        let alg = &self.algebra;
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n)
            .map(|i| alg.add(&self.coeff(i), &other.coeff(i)))
            .collect();
        TwistedPoly::new(self.algebra.clone(), coeffs)
    }

    pub fn neg(&self) -> TwistedPoly {
        let coeffs = self.coeffs.iter().map(|c| self.algebra.neg(c)).collect();
        TwistedPoly {
            algebra: self.algebra.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, other: &TwistedPoly) -> TwistedPoly {
        self.add(&other.neg())
    }

    /// Left scalar multiple u*f.
    pub fn scale(&self, u: &AlgebraElement) -> TwistedPoly {
        let coeffs = self.coeffs.iter().map(|c| self.algebra.mul(u, c)).collect();
        TwistedPoly::new(self.algebra.clone(), coeffs)
    }

    /// (b tau^i)(c tau^j) = b c^{q^i} tau^{i+j}, extended bilinearly. The
    /// X-form of the product is the composition of the X-forms.
    pub fn mul(&self, other: &TwistedPoly) -> Result<TwistedPoly, TwistedError> {
        self.same_base(other);
        let alg = &self.algebra;
        if self.is_zero() || other.is_zero() {
            return Ok(TwistedPoly::zero(self.algebra.clone()));
        }
        let n = self.coeffs.len() + other.coeffs.len() - 2;
        check_cap(alg.ground().q(), n)?;
        let mut out = vec![alg.zero(); n + 1];
        for (i, b) in self.coeffs.iter().enumerate() {
            if alg.is_zero(b) {
                continue;
            }
            for (j, c) in other.coeffs.iter().enumerate() {
                if alg.is_zero(c) {
                    continue;
                }
                let t = alg.mul(b, &alg.frobenius(c, i));
                out[i + j] = alg.add(&out[i + j], &t);
            }
        }
        Ok(TwistedPoly::new(self.algebra.clone(), out))
    }

    pub fn pow(&self, e: usize) -> Result<TwistedPoly, TwistedError> {
        let mut acc = TwistedPoly::one(self.algebra.clone());
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Evaluate the X-form at x in the base algebra: sum c_i x^{q^i}.
    pub fn eval(&self, x: &AlgebraElement) -> AlgebraElement {
        let alg = &self.algebra;
        let mut acc = alg.zero();
        let mut pow = x.clone();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                pow = alg.frobenius(&pow, 1);
            }
            if !alg.is_zero(c) {
                acc = alg.add(&acc, &alg.mul(c, &pow));
            }
        }
        acc
    }

    /// Map the coefficients through `hom` and evaluate at x in the target
    /// algebra.
    pub fn eval_in(&self, hom: &AlgebraHom, x: &AlgebraElement) -> AlgebraElement {
        self.map_coeffs(hom).eval(x)
    }

    /// The same polynomial with coefficients pushed through an algebra map.
    pub fn map_coeffs(&self, hom: &AlgebraHom) -> TwistedPoly {
        assert!(**hom.src() == *self.algebra, "hom source mismatch");
        let coeffs = self.coeffs.iter().map(|c| hom.apply(c)).collect();
        TwistedPoly::new(hom.dst().clone(), coeffs)
    }

    /// Matrix of x -> f(x) on the base algebra in the canonical F_q-basis.
    pub fn as_linear_map(&self) -> FqLinearMap {
        let alg = &self.algebra;
        let g = alg.ground();
        let dim = alg.dim();
        let cols = (0..dim)
            .map(|c| {
                let mut coords = vec![g.fq_zero(); dim];
                coords[c] = g.fq_one();
                let e = alg.from_fq_coords(coords);
                self.eval(&e).fq_coords().to_vec()
            })
            .collect();
        FqLinearMap { dim, cols }
    }

    /// Matrix of x -> f(x) on the target algebra of `hom`.
    pub fn as_linear_map_in(&self, hom: &AlgebraHom) -> FqLinearMap {
        self.map_coeffs(hom).as_linear_map()
    }

    /// Right division: self = g*h + r with deg r < deg h; h must have a
    /// unit leading coefficient.
    pub fn right_divide(&self, h: &TwistedPoly) -> Result<(TwistedPoly, TwistedPoly), TwistedError> {
        self.same_base(h);
        let alg = &self.algebra;
        let dh = h.degree().ok_or(TwistedError::NonUnitLeadingCoefficient)?;
        let lc_h = h.leading_coeff().unwrap().clone();
        if !alg.is_unit(&lc_h) {
            return Err(TwistedError::NonUnitLeadingCoefficient);
        }
        let mut rem = self.clone();
        let mut quot = TwistedPoly::zero(self.algebra.clone());
        while let Some(dr) = rem.degree() {
            if dr < dh {
                break;
            }
            let e = dr - dh;
            // lc(rem) = c * lc(h)^{q^e}
            let lc_h_fr = alg.frobenius(&lc_h, e);
            let c = alg.mul(rem.leading_coeff().unwrap(), &alg.inv(&lc_h_fr)?);
            let mut term_coeffs = vec![alg.zero(); e + 1];
            term_coeffs[e] = c;
            let term = TwistedPoly::new(self.algebra.clone(), term_coeffs);
            quot = quot.add(&term);
            rem = rem.sub(&term.mul(h)?);
        }
        Ok((quot, rem))
    }

    /// lc^{-1} * self: monic, same kernel on every algebra in scope.
    pub fn normalize(&self) -> Result<TwistedPoly, TwistedError> {
        let alg = &self.algebra;
        let lc = self
            .leading_coeff()
            .ok_or(TwistedError::NonUnitLeadingCoefficient)?;
        if !alg.is_unit(lc) {
            return Err(TwistedError::NonUnitLeadingCoefficient);
        }
        Ok(self.scale(&alg.inv(lc)?))
    }

    /// Separable iff the X-coefficient (the formal derivative) is a unit.
    pub fn is_separable(&self) -> bool {
        !self.coeffs.is_empty() && self.algebra.is_unit(&self.coeffs[0])
    }

    /// The q-th power of the X-form: sum c_i^q X^{q^{i+1}}. Valid in any
    /// commutative F_p-algebra by the freshman's dream.
    pub fn pow_q(&self) -> TwistedPoly {
        if self.is_zero() {
            return self.clone();
        }
        let alg = &self.algebra;
        let mut coeffs = vec![alg.zero()];
        for c in &self.coeffs {
            coeffs.push(alg.frobenius(c, 1));
        }
        TwistedPoly::new(self.algebra.clone(), coeffs)
    }

    /// Inverse of a twisted polynomial with unit constant coefficient and
    /// nilpotent higher coefficients. Errors if no inverse exists within
    /// the nilpotency budget.
    pub fn invert_unit(&self) -> Result<TwistedPoly, TwistedError> {
        let alg = &self.algebra;
        let c0 = self.coeff(0);
        if !alg.is_unit(&c0) {
            return Err(TwistedError::NonUnitLeadingCoefficient);
        }
        for c in self.coeffs.iter().skip(1) {
            if alg.is_unit(c) {
                return Err(TwistedError::NonUnitLeadingCoefficient);
            }
        }
        let one = TwistedPoly::one(self.algebra.clone());
        let mut v = TwistedPoly::scalar(self.algebra.clone(), alg.inv(&c0)?);
        // Newton iteration: r = 1 - v*self has nilpotent coefficients and
        // squares towards zero.
        for _ in 0..=(64 - (alg.k() as u32).leading_zeros()) + 2 {
            let r = one.sub(&v.mul(self)?);
            if r.is_zero() {
                break;
            }
            v = one.add(&r).mul(&v)?;
        }
        let check = v.mul(self)?;
        if check != one || self.mul(&v)? != one {
            return Err(TwistedError::NonUnitLeadingCoefficient);
        }
        Ok(v)
    }

    /// X-form rendering, e.g. "Y*X + X^2".
    pub fn to_x_string(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let alg = &self.algebra;
        let q = alg.ground().q();
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if alg.is_zero(c) {
                continue;
            }
            let xs = if i == 0 {
                "X".to_string()
            } else {
                format!("X^{}", (q as u128).pow(i as u32))
            };
            if *c == alg.one() {
                parts.push(xs);
            } else {
                parts.push(format!("({:?})*{}", alg.fp_coords(c), xs));
            }
        }
        parts.join(" + ")
    }
}
