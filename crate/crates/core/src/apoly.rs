//! The coefficient ring A = Fq[T]: dense polynomials over F_q, monic
//! irreducibles, factorization by trial division, and evaluation into a
//! base algebra. Every nonzero ideal of A is (a) for a unique monic a.

use thiserror::Error;

use crate::algebra::{AlgebraElement, ArtinLocalAlgebra, FqElem, GroundField};
use crate::polyutil;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum APolyError {
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is not irreducible")]
    NotIrreducible,
    #[error("exponent must be at least 1")]
    ZeroExponent,
}

/// An element of A = Fq[T], ascending coefficients, canonical (trimmed) form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct APoly {
    coeffs: Vec<FqElem>,
}

impl APoly {
    pub fn zero() -> Self {
        APoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(g: &GroundField, coeffs: Vec<FqElem>) -> Self {
        APoly {
            coeffs: polyutil::trim(g, coeffs),
        }
    }

    pub fn one(g: &GroundField) -> Self {
        APoly {
            coeffs: vec![g.fq_one()],
        }
    }

    pub fn t(g: &GroundField) -> Self {
        APoly {
            coeffs: vec![g.fq_zero(), g.fq_one()],
        }
    }

    /// T + c for an F_p scalar c.
    pub fn t_plus(g: &GroundField, c: u64) -> Self {
        APoly::from_coeffs(g, vec![g.fq_from_fp(c), g.fq_one()])
    }

    pub fn scalar(g: &GroundField, c: &FqElem) -> Self {
        APoly::from_coeffs(g, vec![c.clone()])
    }

    pub fn coeffs(&self) -> &[FqElem] {
        &self.coeffs
    }

    pub fn coeff(&self, g: &GroundField, i: usize) -> FqElem {
        self.coeffs.get(i).cloned().unwrap_or_else(|| g.fq_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_monic(&self, g: &GroundField) -> bool {
        self.coeffs.last().map_or(false, |c| *c == g.fq_one())
    }

    pub fn add(&self, g: &GroundField, other: &APoly) -> APoly {
        APoly {
            coeffs: polyutil::poly_add(g, &self.coeffs, &other.coeffs),
        }
    }

    pub fn sub(&self, g: &GroundField, other: &APoly) -> APoly {
        APoly {
            coeffs: polyutil::poly_sub(g, &self.coeffs, &other.coeffs),
        }
    }

    pub fn mul(&self, g: &GroundField, other: &APoly) -> APoly {
        APoly {
            coeffs: polyutil::poly_mul(g, &self.coeffs, &other.coeffs),
        }
    }

    pub fn divmod(&self, g: &GroundField, other: &APoly) -> (APoly, APoly) {
        let (q, r) = polyutil::poly_divmod(g, &self.coeffs, &other.coeffs);
        (APoly { coeffs: q }, APoly { coeffs: r })
    }

    pub fn rem(&self, g: &GroundField, other: &APoly) -> APoly {
        self.divmod(g, other).1
    }

    pub fn pow(&self, g: &GroundField, e: usize) -> APoly {
        let mut acc = APoly::one(g);
        for _ in 0..e {
            acc = acc.mul(g, self);
        }
        acc
    }

    pub fn gcd(&self, g: &GroundField, other: &APoly) -> APoly {
        APoly {
            coeffs: polyutil::poly_gcd(g, &self.coeffs, &other.coeffs),
        }
    }

    pub fn is_coprime(&self, g: &GroundField, other: &APoly) -> bool {
        self.gcd(g, other).degree() == Some(0)
    }

    pub fn is_irreducible(&self, g: &GroundField) -> bool {
        polyutil::poly_is_irreducible(g, &self.coeffs)
    }

    /// Evaluate at an element of a base algebra; F_q coefficients map
    /// through the scalar embedding Fq -> B.
    pub fn eval_in(&self, alg: &ArtinLocalAlgebra, x: &AlgebraElement) -> AlgebraElement {
        let g = alg.ground();
        let mut acc = alg.zero();
        for c in self.coeffs.iter().rev() {
            acc = alg.mul(&acc, x);
            if !g.fq_is_zero(c) {
                acc = alg.add(&acc, &alg.scalar_from_fq(c));
            }
        }
        acc
    }

    /// Monic irreducible factorization by trial division in enumeration
    /// order. The leading unit is discarded; the input must be nonzero.
    pub fn factor(&self, g: &GroundField) -> Vec<(APoly, usize)> {
        let mut rem = self.clone();
        assert!(!rem.is_zero(), "factor of zero polynomial");
        let mut out: Vec<(APoly, usize)> = Vec::new();
        let mut deg = 1usize;
        while rem.degree().unwrap_or(0) >= deg {
            let count = g.q().pow(deg as u32);
            for idx in 0..count {
                if rem.degree().unwrap_or(0) < deg {
                    break;
                }
                let cand = APoly {
                    coeffs: polyutil::monic_by_index(g, deg, idx),
                };
                if !cand.is_irreducible(g) {
                    continue;
                }
                let mut mult = 0usize;
                loop {
                    let (q, r) = rem.divmod(g, &cand);
                    if r.is_zero() {
                        rem = q;
                        mult += 1;
                    } else {
                        break;
                    }
                }
                if mult > 0 {
                    out.push((cand, mult));
                }
            }
            deg += 1;
        }
        out
    }

    /// All residues mod a monic polynomial of the given degree, i.e. the
    /// polynomials of degree < deg, in enumeration order (constant
    /// coefficient fastest).
    pub fn residues(g: &GroundField, deg: usize) -> Vec<APoly> {
        let q = g.q();
        let count = q.pow(deg as u32);
        (0..count)
            .map(|idx| {
                let mut coeffs = Vec::with_capacity(deg);
                let mut rem = idx;
                for _ in 0..deg {
                    coeffs.push(g.fq_element(rem % q));
                    rem /= q;
                }
                APoly::from_coeffs(g, coeffs)
            })
            .collect()
    }

    /// The monic irreducible of the given degree with the least enumeration
    /// index.
    pub fn least_irreducible(g: &GroundField, deg: usize) -> APoly {
        APoly {
            coeffs: polyutil::least_irreducible(g, deg).expect("no irreducible found"),
        }
    }

    pub fn to_string_t(&self, g: &GroundField) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if g.fq_is_zero(c) {
                continue;
            }
            let cs = if *c == g.fq_one() && i > 0 {
                String::new()
            } else {
                format!("{:?}", c)
            };
            let ts = match i {
                0 => {
                    if cs.is_empty() {
                        "1".into()
                    } else {
                        String::new()
                    }
                }
                1 => "T".into(),
                _ => format!("T^{}", i),
            };
            parts.push(format!("{}{}", cs, ts));
        }
        parts.join(" + ")
    }
}

/// A prime power ideal (pi^n) of A with pi monic irreducible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimePower {
    pub pi: APoly,
    pub n: usize,
}

impl PrimePower {
    pub fn new(g: &GroundField, pi: APoly, n: usize) -> Result<Self, APolyError> {
        if n == 0 {
            return Err(APolyError::ZeroExponent);
        }
        if !pi.is_monic(g) {
            return Err(APolyError::NotMonic);
        }
        if !pi.is_irreducible(g) {
            return Err(APolyError::NotIrreducible);
        }
        Ok(PrimePower { pi, n })
    }

    pub fn generator(&self, g: &GroundField) -> APoly {
        self.pi.pow(g, self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64, s: usize) -> GroundField {
        GroundField::new(p, s).unwrap()
    }

    #[test]
    fn factorization_over_f2() {
        let g = gf(2, 1);
        // T^2 + T = T(T+1)
        let a = APoly::t(&g).mul(&g, &APoly::t_plus(&g, 1));
        let f = a.factor(&g);
        assert_eq!(f.len(), 2);
        assert_eq!(f[0].0, APoly::t(&g));
        assert_eq!(f[1].0, APoly::t_plus(&g, 1));
        // T^2 is T with multiplicity 2
        let t2 = APoly::t(&g).pow(&g, 2);
        let f2 = t2.factor(&g);
        assert_eq!(f2, vec![(APoly::t(&g), 2)]);
    }

    #[test]
    fn irreducible_quadratic() {
        let g = gf(2, 1);
        let pi = APoly::least_irreducible(&g, 2);
        // T^2 + T + 1
        assert_eq!(
            pi.coeffs(),
            &[g.fq_one(), g.fq_one(), g.fq_one()]
        );
        assert!(pi.is_irreducible(&g));
        let f = pi.factor(&g);
        assert_eq!(f, vec![(pi.clone(), 1)]);
    }

    #[test]
    fn eval_in_algebra() {
        let g = gf(2, 1);
        let b = ArtinLocalAlgebra::new(2, 1, 1, 2).unwrap();
        // evaluate T^2 + T at Y: Y^2 + Y = Y
        let a = APoly::t(&g).pow(&g, 2).add(&g, &APoly::t(&g));
        assert_eq!(a.eval_in(&b, &b.y()), b.y());
    }

    #[test]
    fn residues_enumeration() {
        let g = gf(2, 1);
        let r = APoly::residues(&g, 2);
        assert_eq!(r.len(), 4);
        assert!(r[0].is_zero());
        assert_eq!(r[1], APoly::one(&g));
        assert_eq!(r[2], APoly::t(&g));
    }

    #[test]
    fn prime_power_validation() {
        let g = gf(2, 1);
        assert!(PrimePower::new(&g, APoly::t(&g), 0).is_err());
        let t2 = APoly::t(&g).pow(&g, 2);
        assert!(matches!(
            PrimePower::new(&g, t2, 1),
            Err(APolyError::NotIrreducible)
        ));
        assert!(PrimePower::new(&g, APoly::t(&g), 2).is_ok());
    }

    #[test]
    fn gcd_coprime() {
        let g = gf(3, 1);
        let t = APoly::t(&g);
        let t1 = APoly::t_plus(&g, 1);
        assert!(t.is_coprime(&g, &t1));
        assert!(!t.is_coprime(&g, &t.pow(&g, 2)));
    }
}
