//! Exact arithmetic in the base rings B = l[Y]/(Y^k) with l = F_{q^m}.
//!
//! Elements live in a three-level tower: coordinates over F_p represent an
//! element of F_q = F_p[x]/(modulus), vectors of those represent an element
//! of l = F_q[w]/(ext_modulus), and vectors of those represent an element of
//! B as a truncated polynomial in Y. All moduli are the lexicographically
//! least monic irreducibles of the required degree, so element encodings are
//! reproducible across runs and languages.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polyutil::{self, FieldOps, FpField};

/// Default cap on the cardinality of any algebra we agree to enumerate.
pub const DEFAULT_ENUMERATION_BOUND: u64 = 1 << 16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("cardinality {cardinality} exceeds the enumeration bound {bound}")]
    BoundExceeded { cardinality: u64, bound: u64 },
    #[error("no monic irreducible of degree {0} found (internal error)")]
    NoIrreducible(usize),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("incompatible algebras: {0}")]
    Incompatible(String),
}

/// An element of F_q as a length-s coordinate vector over F_p.
pub type FqElem = Vec<u64>;

/// The ground field F_q = F_p[x]/(modulus), q = p^s.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundField {
    p: u64,
    s: usize,
    /// Monic irreducible of degree s over F_p, ascending coefficients.
    modulus: Vec<u64>,
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl GroundField {
    pub fn new(p: u64, s: usize) -> Result<Self, AlgebraError> {
        if !is_prime(p) {
            return Err(AlgebraError::NotPrime(p));
        }
        assert!(s >= 1, "extension degree must be positive");
        let fp = FpField(p);
        let modulus =
            polyutil::least_irreducible(&fp, s).ok_or(AlgebraError::NoIrreducible(s))?;
        Ok(GroundField { p, s, modulus })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn q(&self) -> u64 {
        self.p.pow(self.s as u32)
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    fn fp(&self) -> FpField {
        FpField(self.p)
    }

    fn pad(&self, mut v: Vec<u64>) -> FqElem {
        v.resize(self.s, 0);
        v
    }

    pub fn fq_zero(&self) -> FqElem {
        vec![0; self.s]
    }

    pub fn fq_one(&self) -> FqElem {
        let mut v = vec![0; self.s];
        v[0] = 1;
        v
    }

    pub fn fq_from_fp(&self, a: u64) -> FqElem {
        let mut v = vec![0; self.s];
        v[0] = a % self.p;
        v
    }

    pub fn fq_is_zero(&self, a: &FqElem) -> bool {
        a.iter().all(|&c| c % self.p == 0)
    }

    pub fn fq_add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.pad(polyutil::poly_add(&self.fp(), a, b))
    }

    pub fn fq_neg(&self, a: &FqElem) -> FqElem {
        self.pad(polyutil::poly_neg(&self.fp(), a))
    }

    pub fn fq_sub(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.pad(polyutil::poly_sub(&self.fp(), a, b))
    }

    pub fn fq_mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        let fp = self.fp();
        let prod = polyutil::poly_mul(&fp, a, b);
        self.pad(polyutil::poly_rem(&fp, &prod, &self.modulus))
    }

    pub fn fq_pow(&self, a: &FqElem, mut e: u64) -> FqElem {
        let mut acc = self.fq_one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.fq_mul(&acc, &base);
            }
            base = self.fq_mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn fq_inv(&self, a: &FqElem) -> Result<FqElem, AlgebraError> {
        if self.fq_is_zero(a) {
            return Err(AlgebraError::NotAUnit);
        }
        Ok(self.fq_pow(a, self.q() - 2))
    }

    /// The element whose F_p coordinates are the base-p digits of `index`,
    /// least coordinate fastest.
    pub fn fq_element(&self, index: u64) -> FqElem {
        let mut v = Vec::with_capacity(self.s);
        let mut idx = index;
        for _ in 0..self.s {
            v.push(idx % self.p);
            idx /= self.p;
        }
        v
    }

    pub fn fq_index(&self, a: &FqElem) -> u64 {
        let mut idx = 0u64;
        for &c in a.iter().rev() {
            idx = idx * self.p + c % self.p;
        }
        idx
    }

    pub fn fq_elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        (0..self.q()).map(|i| self.fq_element(i))
    }
}

impl FieldOps for GroundField {
    type Elem = FqElem;

    fn zero(&self) -> FqElem {
        self.fq_zero()
    }
    fn one(&self) -> FqElem {
        self.fq_one()
    }
    fn add(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.fq_add(a, b)
    }
    fn neg(&self, a: &FqElem) -> FqElem {
        self.fq_neg(a)
    }
    fn mul(&self, a: &FqElem, b: &FqElem) -> FqElem {
        self.fq_mul(a, b)
    }
    fn inv(&self, a: &FqElem) -> FqElem {
        self.fq_inv(a).expect("inverse of zero in F_q")
    }
    fn is_zero(&self, a: &FqElem) -> bool {
        self.fq_is_zero(a)
    }
    fn cardinality(&self) -> u64 {
        self.q()
    }
    fn element(&self, index: u64) -> FqElem {
        self.fq_element(index)
    }
}

/// An element of an [`ArtinLocalAlgebra`], stored as m*k coordinates over
/// F_q in the canonical basis {w^i Y^j}; coordinate j*m + i is the
/// coefficient of w^i Y^j.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AlgebraElement {
    pub(crate) c: Vec<FqElem>,
}

impl AlgebraElement {
    pub fn fq_coords(&self) -> &[FqElem] {
        &self.c
    }
}

/// B = l[Y]/(Y^k) with l = F_{q^m}; local with maximal ideal (Y) for k > 1,
/// a field for k = 1.
#[derive(Clone, Debug)]
pub struct ArtinLocalAlgebra {
    ground: GroundField,
    m: usize,
    /// Monic irreducible of degree m over F_q defining l.
    ext_modulus: Vec<FqElem>,
    k: usize,
    cardinality: u64,
    enum_bound: u64,
}

impl PartialEq for ArtinLocalAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.ground == other.ground
            && self.m == other.m
            && self.k == other.k
            && self.ext_modulus == other.ext_modulus
    }
}
impl Eq for ArtinLocalAlgebra {}

impl ArtinLocalAlgebra {
    pub fn new(p: u64, s: usize, m: usize, k: usize) -> Result<Arc<Self>, AlgebraError> {
        Self::with_bound(p, s, m, k, DEFAULT_ENUMERATION_BOUND)
    }

    pub fn with_bound(
        p: u64,
        s: usize,
        m: usize,
        k: usize,
        bound: u64,
    ) -> Result<Arc<Self>, AlgebraError> {
        assert!(m >= 1 && k >= 1);
        let ground = GroundField::new(p, s)?;
        let q = ground.q();
        let cardinality = (0..m * k).try_fold(1u64, |acc, _| acc.checked_mul(q)).ok_or(
            AlgebraError::BoundExceeded {
                cardinality: u64::MAX,
                bound,
            },
        )?;
        if cardinality > bound {
            return Err(AlgebraError::BoundExceeded { cardinality, bound });
        }
        let ext_modulus = polyutil::least_irreducible(&ground, m)
            .ok_or(AlgebraError::NoIrreducible(m))?;
        Ok(Arc::new(ArtinLocalAlgebra {
            ground,
            m,
            ext_modulus,
            k,
            cardinality,
            enum_bound: bound,
        }))
    }

    pub fn ground(&self) -> &GroundField {
        &self.ground
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn is_field(&self) -> bool {
        self.k == 1
    }

    pub fn cardinality(&self) -> u64 {
        self.cardinality
    }

    pub fn enumeration_bound(&self) -> u64 {
        self.enum_bound
    }

    pub fn ext_modulus(&self) -> &[FqElem] {
        &self.ext_modulus
    }

    /// F_q-dimension of B.
    pub fn dim(&self) -> usize {
        self.m * self.k
    }

    /// Order of the unit group: (q^m - 1) * q^{m(k-1)}.
    pub fn unit_group_order(&self) -> u64 {
        let q = self.ground.q();
        let l_card = q.pow(self.m as u32);
        (l_card - 1) * q.pow((self.m * (self.k - 1)) as u32)
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            c: vec![self.ground.fq_zero(); self.dim()],
        }
    }

    pub fn one(&self) -> AlgebraElement {
        let mut e = self.zero();
        e.c[0] = self.ground.fq_one();
        e
    }

    /// The class of w, a generator of l over F_q (equals a root of the
    /// extension modulus; for m = 1 this is an element of F_q).
    pub fn omega(&self) -> AlgebraElement {
        if self.m == 1 {
            // l = F_q; w is the root of the linear extension modulus.
            let root = self.ground.fq_neg(&self.ext_modulus[0]);
            return self.scalar_from_fq(&root);
        }
        let mut e = self.zero();
        e.c[1] = self.ground.fq_one();
        e
    }

    /// The class of Y; zero when k = 1.
    pub fn y(&self) -> AlgebraElement {
        let mut e = self.zero();
        if self.k > 1 {
            e.c[self.m] = self.ground.fq_one();
        }
        e
    }

    pub fn scalar_from_fq(&self, a: &FqElem) -> AlgebraElement {
        let mut e = self.zero();
        e.c[0] = a.clone();
        e
    }

    pub fn from_fq_coords(&self, coords: Vec<FqElem>) -> AlgebraElement {
        assert_eq!(coords.len(), self.dim(), "coordinate length mismatch");
        for c in &coords {
            assert_eq!(c.len(), self.ground.s, "F_q coordinate length mismatch");
        }
        AlgebraElement { c: coords }
    }

    /// Flat coordinates over F_p, length s*m*k, little-endian canonical order.
    pub fn fp_coords(&self, x: &AlgebraElement) -> Vec<u64> {
        x.c.iter().flat_map(|fq| fq.iter().copied()).collect()
    }

    pub fn from_fp_coords(&self, coords: &[u64]) -> AlgebraElement {
        let s = self.ground.s;
        assert_eq!(coords.len(), s * self.dim(), "coordinate length mismatch");
        let c = coords
            .chunks(s)
            .map(|ch| ch.iter().map(|&v| v % self.ground.p).collect())
            .collect();
        AlgebraElement { c }
    }

    pub fn is_zero(&self, x: &AlgebraElement) -> bool {
        x.c.iter().all(|c| self.ground.fq_is_zero(c))
    }

    pub fn add(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            c: x.c
                .iter()
                .zip(&y.c)
                .map(|(a, b)| self.ground.fq_add(a, b))
                .collect(),
        }
    }

    pub fn neg(&self, x: &AlgebraElement) -> AlgebraElement {
        AlgebraElement {
            c: x.c.iter().map(|a| self.ground.fq_neg(a)).collect(),
        }
    }

    pub fn sub(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        self.add(x, &self.neg(y))
    }

    /// Multiplication in l: polynomial product modulo the extension modulus.
    fn l_mul(&self, a: &[FqElem], b: &[FqElem]) -> Vec<FqElem> {
        let g = &self.ground;
        let prod = polyutil::poly_mul(g, a, b);
        let mut r = polyutil::poly_rem(g, &prod, &self.ext_modulus);
        r.resize(self.m, g.fq_zero());
        r
    }

    fn l_slice<'a>(&self, x: &'a AlgebraElement, j: usize) -> &'a [FqElem] {
        &x.c[j * self.m..(j + 1) * self.m]
    }

    pub fn mul(&self, x: &AlgebraElement, y: &AlgebraElement) -> AlgebraElement {
        let g = &self.ground;
        let mut out = vec![g.fq_zero(); self.dim()];
        for j1 in 0..self.k {
            if (0..self.m).all(|i| g.fq_is_zero(&x.c[j1 * self.m + i])) {
                continue;
            }
            for j2 in 0..self.k - j1 {
                let prod = self.l_mul(self.l_slice(x, j1), self.l_slice(y, j2));
                let j = j1 + j2;
                for i in 0..self.m {
                    out[j * self.m + i] = g.fq_add(&out[j * self.m + i], &prod[i]);
                }
            }
        }
        AlgebraElement { c: out }
    }

    pub fn pow(&self, x: &AlgebraElement, mut e: u64) -> AlgebraElement {
        let mut acc = self.one();
        let mut base = x.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// x^{q^j}; F_q-linear in x.
    pub fn frobenius(&self, x: &AlgebraElement, j: usize) -> AlgebraElement {
        let mut out = x.clone();
        for _ in 0..j {
            out = self.pow(&out, self.ground.q());
        }
        out
    }

    /// Residue of x in l = B/(Y): the degree-0 part in Y.
    pub fn residue_coords<'a>(&self, x: &'a AlgebraElement) -> &'a [FqElem] {
        &x.c[0..self.m]
    }

    pub fn is_unit(&self, x: &AlgebraElement) -> bool {
        self.residue_coords(x)
            .iter()
            .any(|c| !self.ground.fq_is_zero(c))
    }

    pub fn is_nilpotent(&self, x: &AlgebraElement) -> bool {
        !self.is_unit(x)
    }

    pub fn inv(&self, x: &AlgebraElement) -> Result<AlgebraElement, AlgebraError> {
        if !self.is_unit(x) {
            return Err(AlgebraError::NotAUnit);
        }
        let inv = self.pow(x, self.unit_group_order() - 1);
        debug_assert_eq!(self.mul(x, &inv), self.one());
        Ok(inv)
    }

    /// The element whose flat F_p coordinates are the base-p digits of
    /// `index`, least coordinate fastest. Index 0 is zero, index 1 is one.
    pub fn element(&self, index: u64) -> AlgebraElement {
        let p = self.ground.p;
        let mut idx = index;
        let mut flat = Vec::with_capacity(self.ground.s * self.dim());
        for _ in 0..self.ground.s * self.dim() {
            flat.push(idx % p);
            idx /= p;
        }
        self.from_fp_coords(&flat)
    }

    pub fn index_of(&self, x: &AlgebraElement) -> u64 {
        let p = self.ground.p;
        let mut idx = 0u64;
        for &c in self.fp_coords(x).iter().rev() {
            idx = idx * p + c;
        }
        idx
    }

    /// Every element exactly once, in lexicographic coordinate order.
    pub fn elements(&self) -> impl Iterator<Item = AlgebraElement> + '_ {
        (0..self.cardinality).map(|i| self.element(i))
    }

    /// Elements of the maximal ideal (Y), in enumeration order.
    pub fn nilradical_elements(&self) -> Vec<AlgebraElement> {
        if self.k == 1 {
            return vec![self.zero()];
        }
        let g = &self.ground;
        let nil_dim = self.m * (self.k - 1);
        let count = g.q().pow(nil_dim as u32);
        let mut out = Vec::with_capacity(count as usize);
        for idx in 0..count {
            let mut coords = vec![g.fq_zero(); self.dim()];
            let mut rem = idx;
            for t in 0..nil_dim {
                coords[self.m + t] = g.fq_element(rem % g.q());
                rem /= g.q();
            }
            out.push(AlgebraElement { c: coords });
        }
        out
    }

    /// All elements of the F_q-span of the given elements, deduplicated and
    /// sorted by enumeration index.
    pub fn span_elements(&self, gens: &[AlgebraElement]) -> Vec<AlgebraElement> {
        let rows: Vec<Vec<FqElem>> = gens.iter().map(|g| g.c.clone()).collect();
        let (basis, _) = fq_rref(&self.ground, rows);
        let q = self.ground.q();
        let mut out = Vec::with_capacity(q.pow(basis.len() as u32) as usize);
        let count = q.pow(basis.len() as u32);
        for idx in 0..count {
            let mut acc = self.zero();
            let mut rem = idx;
            for b in &basis {
                let coef = self.ground.fq_element(rem % q);
                rem /= q;
                let term = AlgebraElement {
                    c: b.iter().map(|c| self.ground.fq_mul(c, &coef)).collect(),
                };
                acc = self.add(&acc, &term);
            }
            out.push(acc);
        }
        out.sort_by_key(|e| self.index_of(e));
        out.dedup();
        out
    }
}

/// Row-reduce vectors over F_q. Returns a reduced row-echelon basis of the
/// row space together with the pivot column of each basis row.
pub fn fq_rref(g: &GroundField, rows: Vec<Vec<FqElem>>) -> (Vec<Vec<FqElem>>, Vec<usize>) {
    let mut basis: Vec<Vec<FqElem>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();
    for mut row in rows {
        // reduce against existing pivots
        for (b, &pc) in basis.iter().zip(&pivots) {
            let c = row[pc].clone();
            if !g.fq_is_zero(&c) {
                for i in 0..row.len() {
                    let t = g.fq_mul(&b[i], &c);
                    row[i] = g.fq_sub(&row[i], &t);
                }
            }
        }
        if let Some(pc) = row.iter().position(|c| !g.fq_is_zero(c)) {
            let inv = g.fq_inv(&row[pc]).unwrap();
            for c in row.iter_mut() {
                *c = g.fq_mul(c, &inv);
            }
            // back-substitute into existing rows
            for (b, _) in basis.iter_mut().zip(&pivots) {
                let c = b[pc].clone();
                if !g.fq_is_zero(&c) {
                    for i in 0..b.len() {
                        let t = g.fq_mul(&row[i], &c);
                        b[i] = g.fq_sub(&b[i], &t);
                    }
                }
            }
            // keep rows sorted by pivot column
            let ins = pivots.partition_point(|&x| x < pc);
            pivots.insert(ins, pc);
            basis.insert(ins, row);
        }
    }
    (basis, pivots)
}

/// An F_q-linear endomorphism of B in the canonical basis, stored as the
/// list of images of the basis vectors (column-major).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FqLinearMap {
    pub dim: usize,
    /// cols[c][r]: r-th coordinate of the image of basis vector c.
    pub cols: Vec<Vec<FqElem>>,
}

impl FqLinearMap {
    pub fn identity(g: &GroundField, dim: usize) -> Self {
        let cols = (0..dim)
            .map(|c| {
                let mut v = vec![g.fq_zero(); dim];
                v[c] = g.fq_one();
                v
            })
            .collect();
        FqLinearMap { dim, cols }
    }

    pub fn zero(g: &GroundField, dim: usize) -> Self {
        FqLinearMap {
            dim,
            cols: vec![vec![g.fq_zero(); dim]; dim],
        }
    }

    pub fn apply(&self, g: &GroundField, coords: &[FqElem]) -> Vec<FqElem> {
        let mut out = vec![g.fq_zero(); self.dim];
        for (c, col) in self.cols.iter().enumerate() {
            if g.fq_is_zero(&coords[c]) {
                continue;
            }
            for r in 0..self.dim {
                let t = g.fq_mul(&col[r], &coords[c]);
                out[r] = g.fq_add(&out[r], &t);
            }
        }
        out
    }

    /// self after other (matrix product self * other).
    pub fn compose(&self, g: &GroundField, other: &FqLinearMap) -> FqLinearMap {
        assert_eq!(self.dim, other.dim);
        let cols = other.cols.iter().map(|col| self.apply(g, col)).collect();
        FqLinearMap {
            dim: self.dim,
            cols,
        }
    }

    /// A basis of the kernel {v : M v = 0}, via row reduction.
    pub fn kernel_basis(&self, g: &GroundField) -> Vec<Vec<FqElem>> {
        let n = self.dim;
        // rows of the matrix
        let rows: Vec<Vec<FqElem>> = (0..n)
            .map(|r| (0..n).map(|c| self.cols[c][r].clone()).collect())
            .collect();
        let (basis, pivots) = fq_rref(g, rows);
        let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![g.fq_zero(); n];
                v[fc] = g.fq_one();
                for (row, &pc) in basis.iter().zip(&pivots) {
                    v[pc] = g.fq_neg(&row[fc]);
                }
                v
            })
            .collect()
    }

    pub fn rank(&self, g: &GroundField) -> usize {
        let rows: Vec<Vec<FqElem>> = (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.cols[c][r].clone()).collect())
            .collect();
        fq_rref(g, rows).0.len()
    }
}

impl ArtinLocalAlgebra {
    /// All elements of the kernel of an F_q-linear map on B, sorted by
    /// enumeration index. The size is a power of q.
    pub fn linear_kernel(&self, f: &FqLinearMap) -> Vec<AlgebraElement> {
        assert_eq!(f.dim, self.dim());
        let basis = f.kernel_basis(&self.ground);
        let gens: Vec<AlgebraElement> = basis
            .into_iter()
            .map(|coords| self.from_fq_coords(coords))
            .collect();
        self.span_elements(&gens)
    }
}

/// A structure map between two algebras over the same ground field: either a
/// residue-field extension, the reduction mod (Y), or a composition of the
/// two. Determined by the images of w and Y.
#[derive(Clone, Debug)]
pub struct AlgebraHom {
    src: Arc<ArtinLocalAlgebra>,
    dst: Arc<ArtinLocalAlgebra>,
    omega_image: AlgebraElement,
    y_image: AlgebraElement,
}

impl AlgebraHom {
    pub fn identity(alg: &Arc<ArtinLocalAlgebra>) -> Self {
        AlgebraHom {
            src: alg.clone(),
            dst: alg.clone(),
            omega_image: alg.omega(),
            y_image: alg.y(),
        }
    }

    /// B -> l, setting Y to 0.
    pub fn reduction(src: &Arc<ArtinLocalAlgebra>) -> Result<Self, AlgebraError> {
        let g = src.ground();
        let dst = ArtinLocalAlgebra::with_bound(
            g.p(),
            g.s(),
            src.m(),
            1,
            src.enumeration_bound(),
        )?;
        let omega_image = dst.omega();
        let y_image = dst.zero();
        Ok(AlgebraHom {
            src: src.clone(),
            dst,
            omega_image,
            y_image,
        })
    }

    /// Embedding src -> dst for src.m dividing dst.m and src.k <= dst.k
    /// (with equal k unless src is a field). w maps to the least root of
    /// the source extension modulus among the l-scalars of dst; Y maps to Y.
    pub fn embedding(
        src: &Arc<ArtinLocalAlgebra>,
        dst: &Arc<ArtinLocalAlgebra>,
    ) -> Result<Self, AlgebraError> {
        if src.ground() != dst.ground() {
            return Err(AlgebraError::Incompatible(
                "different ground fields".into(),
            ));
        }
        if dst.m() % src.m() != 0 {
            return Err(AlgebraError::Incompatible(format!(
                "extension degree {} does not divide {}",
                src.m(),
                dst.m()
            )));
        }
        if src.k() > dst.k() || (src.k() != dst.k() && src.k() != 1) {
            return Err(AlgebraError::Incompatible(format!(
                "cannot embed nilpotency index {} into {}",
                src.k(),
                dst.k()
            )));
        }
        let omega_image = if src.m() == dst.m() {
            dst.omega()
        } else {
            find_root_among_scalars(src, dst)?
        };
        Ok(AlgebraHom {
            src: src.clone(),
            dst: dst.clone(),
            omega_image,
            y_image: dst.y(),
        })
    }

    pub fn src(&self) -> &Arc<ArtinLocalAlgebra> {
        &self.src
    }

    pub fn dst(&self) -> &Arc<ArtinLocalAlgebra> {
        &self.dst
    }

    pub fn apply(&self, x: &AlgebraElement) -> AlgebraElement {
        let src = &self.src;
        let dst = &self.dst;
        let g = src.ground();
        let mut out = dst.zero();
        let mut y_pow = dst.one();
        for j in 0..src.k() {
            let mut w_pow = dst.one();
            for i in 0..src.m() {
                let coef = &x.c[j * src.m() + i];
                if !g.fq_is_zero(coef) {
                    let term = dst.mul(&dst.scalar_from_fq(coef), &dst.mul(&w_pow, &y_pow));
                    out = dst.add(&out, &term);
                }
                if i + 1 < src.m() {
                    w_pow = dst.mul(&w_pow, &self.omega_image);
                }
            }
            if j + 1 < src.k() {
                y_pow = dst.mul(&y_pow, &self.y_image);
            }
        }
        out
    }
}

fn find_root_among_scalars(
    src: &Arc<ArtinLocalAlgebra>,
    dst: &Arc<ArtinLocalAlgebra>,
) -> Result<AlgebraElement, AlgebraError> {
    let g = src.ground();
    // Scalars of dst living in its residue-field part: coordinates with Y-degree 0.
    let l_card = g.q().pow(dst.m() as u32);
    for idx in 0..l_card {
        let mut coords = vec![g.fq_zero(); dst.dim()];
        let mut rem = idx;
        for i in 0..dst.m() {
            coords[i] = g.fq_element(rem % g.q());
            rem /= g.q();
        }
        let cand = dst.from_fq_coords(coords);
        // evaluate the source extension modulus at cand
        let mut acc = dst.zero();
        let mut pow = dst.one();
        for c in src.ext_modulus() {
            if !g.fq_is_zero(c) {
                acc = dst.add(&acc, &dst.mul(&dst.scalar_from_fq(c), &pow));
            }
            pow = dst.mul(&pow, &cand);
        }
        if dst.is_zero(&acc) {
            return Ok(cand);
        }
    }
    Err(AlgebraError::Incompatible(
        "no root of the source modulus in the destination".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2y2() -> Arc<ArtinLocalAlgebra> {
        ArtinLocalAlgebra::new(2, 1, 1, 2).unwrap()
    }

    fn f4() -> Arc<ArtinLocalAlgebra> {
        ArtinLocalAlgebra::new(2, 1, 2, 1).unwrap()
    }

    #[test]
    fn construction_examples() {
        let f2 = ArtinLocalAlgebra::new(2, 1, 1, 1).unwrap();
        assert_eq!(f2.cardinality(), 2);
        let f4 = f4();
        assert_eq!(f4.cardinality(), 4);
        // unique irreducible of degree 2 over F_2: w^2 + w + 1
        assert_eq!(f4.ext_modulus(), &[vec![1], vec![1], vec![1]]);
        let b = f2y2();
        assert_eq!(b.cardinality(), 4);
    }

    #[test]
    fn non_prime_rejected() {
        assert!(matches!(
            ArtinLocalAlgebra::new(4, 1, 1, 1),
            Err(AlgebraError::NotPrime(4))
        ));
    }

    #[test]
    fn bound_exceeded() {
        assert!(matches!(
            ArtinLocalAlgebra::with_bound(2, 1, 8, 3, 1 << 16),
            Err(AlgebraError::BoundExceeded { .. })
        ));
    }

    #[test]
    fn nilpotency_and_inverse_in_f2y2() {
        let b = f2y2();
        let y = b.y();
        assert!(b.is_zero(&b.mul(&y, &y)));
        let one_plus_y = b.add(&b.one(), &y);
        // (1+Y)^2 = 1, so 1+Y is its own inverse
        assert_eq!(b.inv(&one_plus_y).unwrap(), one_plus_y);
        assert!(b.inv(&y).is_err());
    }

    #[test]
    fn f4_multiplication() {
        let f4 = f4();
        let w = f4.omega();
        let w2 = f4.mul(&w, &w);
        // w^3 = 1 since w^2 + w + 1 = 0
        assert_eq!(f4.mul(&w, &w2), f4.one());
    }

    #[test]
    fn unit_nilpotent_dichotomy() {
        let b = ArtinLocalAlgebra::new(2, 1, 2, 2).unwrap();
        for x in b.elements() {
            if b.is_zero(&x) {
                assert!(b.is_nilpotent(&x));
                continue;
            }
            assert!(b.is_unit(&x) ^ b.is_nilpotent(&x));
            if b.is_unit(&x) {
                let inv = b.inv(&x).unwrap();
                assert_eq!(b.mul(&x, &inv), b.one());
            } else {
                // nilpotent: some power vanishes
                let mut p = x.clone();
                for _ in 0..b.k() {
                    p = b.mul(&p, &x);
                }
                assert!(b.is_zero(&p));
            }
        }
    }

    #[test]
    fn frobenius_examples() {
        let b = f2y2();
        assert!(b.is_zero(&b.frobenius(&b.y(), 1)));
        let one_plus_y = b.add(&b.one(), &b.y());
        assert_eq!(b.frobenius(&one_plus_y, 1), b.one());
        let f4 = f4();
        let w = f4.omega();
        assert_eq!(f4.frobenius(&w, 1), f4.mul(&w, &w));
        assert_eq!(f4.frobenius(&w, 0), w);
    }

    #[test]
    fn frobenius_additive() {
        for alg in [
            ArtinLocalAlgebra::new(2, 1, 2, 2).unwrap(),
            ArtinLocalAlgebra::new(3, 1, 1, 2).unwrap(),
        ] {
            let elems: Vec<_> = alg.elements().collect();
            for x in &elems {
                for y in &elems {
                    let lhs = alg.frobenius(&alg.add(x, y), 1);
                    let rhs = alg.add(&alg.frobenius(x, 1), &alg.frobenius(y, 1));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn enumeration_order() {
        let b = f2y2();
        let elems: Vec<_> = b.elements().collect();
        assert_eq!(elems.len(), 4);
        assert_eq!(elems[0], b.zero());
        assert_eq!(elems[1], b.one());
        assert_eq!(elems[2], b.y());
        assert_eq!(elems[3], b.add(&b.one(), &b.y()));
        for (i, e) in elems.iter().enumerate() {
            assert_eq!(b.index_of(e), i as u64);
        }
    }

    #[test]
    fn kernel_of_simple_maps() {
        let f4 = f4();
        let id = FqLinearMap::identity(f4.ground(), f4.dim());
        assert_eq!(f4.linear_kernel(&id), vec![f4.zero()]);

        let b = f2y2();
        let z = FqLinearMap::zero(b.ground(), b.dim());
        assert_eq!(b.linear_kernel(&z).len(), 4);

        // x -> x^2 + Y*x on F_2[Y]/(Y^2): kernel {0, Y}
        let g = b.ground().clone();
        let cols: Vec<Vec<FqElem>> = (0..b.dim())
            .map(|c| {
                let mut basis = vec![g.fq_zero(); b.dim()];
                basis[c] = g.fq_one();
                let e = b.from_fq_coords(basis);
                let img = b.add(&b.mul(&e, &e), &b.mul(&b.y(), &e));
                img.c.clone()
            })
            .collect();
        let f = FqLinearMap { dim: b.dim(), cols };
        let ker = b.linear_kernel(&f);
        assert_eq!(ker, vec![b.zero(), b.y()]);
        // matches brute force
        let brute: Vec<_> = b
            .elements()
            .filter(|x| b.is_zero(&b.add(&b.mul(x, x), &b.mul(&b.y(), x))))
            .collect();
        assert_eq!(ker, brute);
    }

    #[test]
    fn reduction_is_ring_hom() {
        let b = ArtinLocalAlgebra::new(2, 1, 2, 2).unwrap();
        let red = AlgebraHom::reduction(&b).unwrap();
        let elems: Vec<_> = b.elements().collect();
        for x in &elems {
            for y in &elems {
                assert_eq!(
                    red.apply(&b.mul(x, y)),
                    red.dst().mul(&red.apply(x), &red.apply(y))
                );
                assert_eq!(
                    red.apply(&b.add(x, y)),
                    red.dst().add(&red.apply(x), &red.apply(y))
                );
            }
            assert_eq!(b.is_unit(x), red.dst().is_unit(&red.apply(x)));
        }
    }

    #[test]
    fn field_embedding_preserves_arithmetic() {
        let f4 = f4();
        let f16 = ArtinLocalAlgebra::new(2, 1, 4, 1).unwrap();
        let emb = AlgebraHom::embedding(&f4, &f16).unwrap();
        let elems: Vec<_> = f4.elements().collect();
        for x in &elems {
            for y in &elems {
                assert_eq!(
                    emb.apply(&f4.mul(x, y)),
                    f16.mul(&emb.apply(x), &emb.apply(y))
                );
            }
        }
        // injective on F_4
        let images: std::collections::HashSet<_> =
            elems.iter().map(|x| f16.index_of(&emb.apply(x))).collect();
        assert_eq!(images.len(), 4);
    }
}
