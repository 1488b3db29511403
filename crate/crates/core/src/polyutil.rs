//! Dense univariate polynomial helpers over a small finite field.
//!
//! Used for two coefficient fields: F_p (to build the ground field modulus)
//! and F_q (for the extension modulus and for A = Fq[T]). Polynomials are
//! coefficient vectors in ascending degree order; the canonical form is
//! either empty (zero) or has a nonzero last entry.

/// Arithmetic of a finite field, enough to do dense polynomial algebra
/// with coefficients in it.
pub(crate) trait FieldOps {
    type Elem: Clone + PartialEq + std::fmt::Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse; must only be called on nonzero elements.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn cardinality(&self) -> u64;
    /// The element with the given enumeration index, 0 <= index < cardinality.
    /// Index 0 is zero and index 1 is one.
    fn element(&self, index: u64) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
}

/// The prime field F_p with elements represented as 0..p-1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct FpField(pub u64);

impl FieldOps for FpField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }
    fn neg(&self, a: &u64) -> u64 {
        (self.0 - a % self.0) % self.0
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.0
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a % self.0 != 0, "inverse of zero in F_p");
        // Fermat: a^(p-2)
        let mut acc = 1u64;
        let mut base = *a % self.0;
        let mut e = self.0 - 2;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % self.0;
            }
            base = base * base % self.0;
            e >>= 1;
        }
        acc
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a % self.0 == 0
    }
    fn cardinality(&self) -> u64 {
        self.0
    }
    fn element(&self, index: u64) -> u64 {
        index % self.0
    }
}

pub(crate) fn trim<F: FieldOps>(field: &F, mut v: Vec<F::Elem>) -> Vec<F::Elem> {
    while v.last().map_or(false, |c| field.is_zero(c)) {
        v.pop();
    }
    v
}

pub(crate) fn poly_is_zero<F: FieldOps>(field: &F, a: &[F::Elem]) -> bool {
    a.iter().all(|c| field.is_zero(c))
}

pub(crate) fn poly_degree<F: FieldOps>(field: &F, a: &[F::Elem]) -> Option<usize> {
    a.iter().rposition(|c| !field.is_zero(c))
}

pub(crate) fn poly_add<F: FieldOps>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let n = a.len().max(b.len());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(|| field.zero());
        let y = b.get(i).cloned().unwrap_or_else(|| field.zero());
        out.push(field.add(&x, &y));
    }
    trim(field, out)
}

pub(crate) fn poly_neg<F: FieldOps>(field: &F, a: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().map(|c| field.neg(c)).collect()
}

pub(crate) fn poly_sub<F: FieldOps>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    poly_add(field, a, &poly_neg(field, b))
}

pub(crate) fn poly_mul<F: FieldOps>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if poly_is_zero(field, a) || poly_is_zero(field, b) {
        return Vec::new();
    }
    let mut out = vec![field.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if field.is_zero(x) {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = field.add(&out[i + j], &field.mul(x, y));
        }
    }
    trim(field, out)
}

/// Division with remainder; the divisor must be nonzero.
pub(crate) fn poly_divmod<F: FieldOps>(
    field: &F,
    a: &[F::Elem],
    b: &[F::Elem],
) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let db = poly_degree(field, b).expect("division by zero polynomial");
    let lc_inv = field.inv(&b[db]);
    let mut rem: Vec<F::Elem> = trim(field, a.to_vec());
    let mut quot: Vec<F::Elem> = Vec::new();
    while let Some(dr) = poly_degree(field, &rem) {
        if dr < db {
            break;
        }
        let c = field.mul(&rem[dr], &lc_inv);
        let shift = dr - db;
        if quot.len() < shift + 1 {
            quot.resize(shift + 1, field.zero());
        }
        quot[shift] = field.add(&quot[shift], &c);
        for i in 0..=db {
            let t = field.mul(&b[i], &c);
            rem[shift + i] = field.sub(&rem[shift + i], &t);
        }
        rem = trim(field, rem);
    }
    (trim(field, quot), rem)
}

pub(crate) fn poly_rem<F: FieldOps>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    poly_divmod(field, a, b).1
}

pub(crate) fn poly_gcd<F: FieldOps>(field: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut x = trim(field, a.to_vec());
    let mut y = trim(field, b.to_vec());
    while !poly_is_zero(field, &y) {
        let r = poly_rem(field, &x, &y);
        x = y;
        y = r;
    }
    // make monic
    if let Some(d) = poly_degree(field, &x) {
        let inv = field.inv(&x[d]);
        x = x.iter().map(|c| field.mul(c, &inv)).collect();
    }
    x
}

/// The monic polynomial of the given degree whose non-leading coefficients
/// are the base-|F| digits of `index`, least degree fastest.
pub(crate) fn monic_by_index<F: FieldOps>(field: &F, degree: usize, index: u64) -> Vec<F::Elem> {
    let card = field.cardinality();
    let mut idx = index;
    let mut out = Vec::with_capacity(degree + 1);
    for _ in 0..degree {
        out.push(field.element(idx % card));
        idx /= card;
    }
    out.push(field.one());
    out
}

/// Irreducibility over a finite field by trial division: a polynomial of
/// degree n >= 1 is irreducible iff no monic polynomial of degree
/// 1..=n/2 divides it.
pub(crate) fn poly_is_irreducible<F: FieldOps>(field: &F, a: &[F::Elem]) -> bool {
    let deg = match poly_degree(field, a) {
        Some(d) => d,
        None => return false,
    };
    if deg == 0 {
        return false;
    }
    let card = field.cardinality();
    for t in 1..=deg / 2 {
        let count = card.pow(t as u32);
        for idx in 0..count {
            let divisor = monic_by_index(field, t, idx);
            if poly_is_zero(field, &poly_rem(field, a, &divisor)) {
                return false;
            }
        }
    }
    true
}

/// The monic irreducible polynomial of the given degree with the least
/// enumeration index (non-leading coefficients as base-|F| digits, constant
/// coefficient fastest). Deterministic across runs.
pub(crate) fn least_irreducible<F: FieldOps>(field: &F, degree: usize) -> Option<Vec<F::Elem>> {
    let card = field.cardinality();
    let count = card.checked_pow(degree as u32)?;
    for idx in 0..count {
        let cand = monic_by_index(field, degree, idx);
        if poly_is_irreducible(field, &cand) {
            return Some(cand);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_inverse() {
        let f = FpField(7);
        for a in 1..7 {
            assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        }
    }

    #[test]
    fn divmod_roundtrip() {
        let f = FpField(3);
        let a = vec![1, 2, 0, 1, 2]; // 2x^4 + x^3 + 2x + 1
        let b = vec![2, 1, 1]; // x^2 + x + 2
        let (q, r) = poly_divmod(&f, &a, &b);
        let back = poly_add(&f, &poly_mul(&f, &q, &b), &r);
        assert_eq!(trim(&f, a), back);
        assert!(poly_degree(&f, &r).map_or(true, |d| d < 2));
    }

    #[test]
    fn least_irreducibles_over_f2() {
        let f = FpField(2);
        assert_eq!(least_irreducible(&f, 1).unwrap(), vec![0, 1]); // x
        assert_eq!(least_irreducible(&f, 2).unwrap(), vec![1, 1, 1]); // x^2+x+1
        assert_eq!(least_irreducible(&f, 3).unwrap(), vec![1, 1, 0, 1]); // x^3+x+1
        let deg8 = least_irreducible(&f, 8).unwrap();
        assert!(poly_is_irreducible(&f, &deg8));
    }

    #[test]
    fn irreducible_detects_products() {
        let f = FpField(2);
        // (x+1)^2 = x^2+1
        assert!(!poly_is_irreducible(&f, &[1, 0, 1]));
        assert!(poly_is_irreducible(&f, &[1, 1, 1]));
    }
}
