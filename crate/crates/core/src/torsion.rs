//! Division points E[I] and division polynomials h_I: torsion point sets
//! over extensions as kernels of F_q-linear maps, splitting extensions,
//! the module structure of the pi-primary torsion, and the standard
//! properties of E[I] (coprime splitting, separability off the
//! characteristic, base change).

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgebraElement, AlgebraError, AlgebraHom, ArtinLocalAlgebra};
use crate::apoly::{APoly, PrimePower};
use crate::drinfeld::{DrinfeldError, DrinfeldModule, DEFAULT_CHARACTERISTIC_DEGREE_BOUND};
use crate::twisted::{TwistedError, TwistedPoly};

pub const DEFAULT_SPLITTING_DEGREE_BOUND: usize = 12;

#[derive(Debug, Error)]
pub enum TorsionError {
    #[error("the module must be in standard form")]
    NotStandard,
    #[error("operation requires a field base")]
    NotAField,
    #[error("no splitting extension of relative degree <= {bound} (best count {best})")]
    SplittingBoundExceeded { bound: usize, best: u64 },
    #[error("extension too small: found {found} points, separable degree is {expected}")]
    ExtensionTooSmall { found: u64, expected: u64 },
    #[error(transparent)]
    Drinfeld(#[from] DrinfeldError),
    #[error(transparent)]
    Twisted(#[from] TwistedError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// The unique normalized additive polynomial with V(h) = E[(a)].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisionPolynomial {
    pub ideal: APoly,
    pub h: TwistedPoly,
}

/// h_{(a)} = normalize(e_a); monic of X-degree q^{d*deg a}.
pub fn division_poly(e: &DrinfeldModule, a: &APoly) -> Result<DivisionPolynomial, TorsionError> {
    if !e.is_standard() {
        return Err(TorsionError::NotStandard);
    }
    assert!(!a.is_zero(), "division polynomial of the zero ideal");
    let h = e.e_of(a)?.normalize()?;
    debug_assert_eq!(h.degree(), Some(e.rank() * a.degree().unwrap()));
    Ok(DivisionPolynomial {
        ideal: a.clone(),
        h,
    })
}

/// The a-torsion points of E with values in an algebra, sorted by
/// enumeration index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionSet {
    pub algebra: Arc<ArtinLocalAlgebra>,
    pub points: Vec<AlgebraElement>,
}

impl TorsionSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, x: &AlgebraElement) -> bool {
        self.points.binary_search_by_key(&self.algebra.index_of(x), |p| {
            self.algebra.index_of(p)
        })
        .is_ok()
    }
}

/// {x in B' : e_a(x) = 0}, computed exactly as the kernel of the F_q-linear
/// map of h_a on B'.
pub fn torsion_points(
    e: &DrinfeldModule,
    a: &APoly,
    hom: &AlgebraHom,
) -> Result<TorsionSet, TorsionError> {
    let h = division_poly(e, a)?.h;
    let map = h.as_linear_map_in(hom);
    let points = hom.dst().linear_kernel(&map);
    Ok(TorsionSet {
        algebra: hom.dst().clone(),
        points,
    })
}

pub fn torsion_points_self(e: &DrinfeldModule, a: &APoly) -> Result<TorsionSet, TorsionError> {
    torsion_points(e, a, &AlgebraHom::identity(e.algebra()))
}

/// Independent oracle: evaluate e_a at every element of the target algebra.
pub fn torsion_points_brute_force(
    e: &DrinfeldModule,
    a: &APoly,
    hom: &AlgebraHom,
) -> Result<TorsionSet, TorsionError> {
    let ea = e.e_of(a)?.map_coeffs(hom);
    let dst = hom.dst().clone();
    let points = dst
        .elements()
        .filter(|x| dst.is_zero(&ea.eval(x)))
        .collect();
    Ok(TorsionSet {
        algebra: dst,
        points,
    })
}

/// The separable degree of e_a over a field base: q^{d*deg a} divided by
/// q^{h*deg pi*n} for the characteristic prime power pi^n dividing (a).
pub fn separable_torsion_count(e: &DrinfeldModule, a: &APoly) -> Result<u64, TorsionError> {
    let alg = e.algebra();
    if !alg.is_field() {
        return Err(TorsionError::NotAField);
    }
    let g = alg.ground();
    let q = g.q();
    let d = e.rank();
    let mut log = d * a.degree().expect("nonzero ideal");
    let char_info = e.characteristic_of(DEFAULT_CHARACTERISTIC_DEGREE_BOUND);
    if let Some(pi) = char_info.pi {
        if alg.is_zero(&e.gamma_of(&pi)) {
            let mut n = 0usize;
            let mut rem = a.clone();
            loop {
                let (qq, r) = rem.divmod(g, &pi);
                if r.is_zero() {
                    n += 1;
                    rem = qq;
                } else {
                    break;
                }
            }
            if n > 0 {
                let h = e.height(&pi)?;
                log -= h * pi.degree().unwrap() * n;
            }
        }
    }
    Ok(q.pow(log as u32))
}

/// The least extension of the field base l over which E[a] reaches its full
/// separable-degree point count. Returns the relative degree and the
/// embedding l -> F_{q^{m*t}}.
pub fn splitting_extension(
    e: &DrinfeldModule,
    a: &APoly,
    max_rel_degree: usize,
) -> Result<(usize, AlgebraHom), TorsionError> {
    let alg = e.algebra();
    if !alg.is_field() {
        return Err(TorsionError::NotAField);
    }
    let g = alg.ground();
    let expected = separable_torsion_count(e, a)?;
    let mut best = 0u64;
    for t in 1..=max_rel_degree {
        let ext = ArtinLocalAlgebra::with_bound(
            g.p(),
            g.s(),
            alg.m() * t,
            1,
            alg.enumeration_bound(),
        )?;
        let hom = AlgebraHom::embedding(alg, &ext)?;
        let count = torsion_points(e, a, &hom)?.len() as u64;
        if count == expected {
            return Ok((t, hom));
        }
        best = best.max(count);
    }
    Err(TorsionError::SplittingBoundExceeded {
        bound: max_rel_degree,
        best,
    })
}

/// Elementary divisor exponents (n_1 >= n_2 >= ...) of the pi-primary
/// module E[pi^n](B') as a direct sum of A/(pi^{n_i}).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModuleStructure {
    pub exponents: Vec<usize>,
}

/// Read off the elementary divisors from the filtration sizes |E[pi^j]|,
/// j = 1..n.
pub fn module_structure(
    e: &DrinfeldModule,
    pp: &PrimePower,
    hom: &AlgebraHom,
) -> Result<ModuleStructure, TorsionError> {
    let g = e.algebra().ground();
    let q = g.q();
    let dp = pp.pi.degree().unwrap();
    // r_j: rank over A/(pi) of the pi^j-torsion layer
    let mut ranks = vec![0usize];
    for j in 1..=pp.n {
        let aj = pp.pi.pow(g, j);
        let count = torsion_points(e, &aj, hom)?.len() as u64;
        // count = q^{dp * r_j}
        let mut log = 0usize;
        let mut c = count;
        while c > 1 {
            assert_eq!(c % q, 0, "torsion count is not a power of q");
            c /= q;
            log += 1;
        }
        assert_eq!(log % dp, 0, "torsion count is not a power of |A/pi|");
        ranks.push(log / dp);
    }
    // c_j = #{i : n_i >= j} must be non-increasing in j
    let layer_counts: Vec<usize> = (1..=pp.n).map(|j| ranks[j] - ranks[j - 1]).collect();
    for w in layer_counts.windows(2) {
        assert!(w[0] >= w[1], "filtration sizes are not a valid module");
    }
    let top = layer_counts.first().copied().unwrap_or(0);
    let exponents: Vec<usize> = (0..top)
        .map(|i| layer_counts.iter().filter(|&&c| c > i).count())
        .collect();
    Ok(ModuleStructure { exponents })
}

/// Checks of the standard properties of E[I] for a pair of ideals.
#[derive(Clone, Debug)]
pub struct PropertyReport {
    /// |E[ab]| = |E[a]|*|E[b]| and (x,y) -> x+y is a bijection
    /// E[a] x E[b] -> E[ab] (for coprime a, b).
    pub coprime_splitting: bool,
    /// h_a separable iff gamma(a) is a unit.
    pub separability_a: bool,
    pub separability_b: bool,
    /// h_a over B pushed through the base change equals h_a of the
    /// base-changed module.
    pub base_change: bool,
    pub failures: Vec<String>,
}

impl PropertyReport {
    pub fn all_ok(&self) -> bool {
        self.coprime_splitting && self.separability_a && self.separability_b && self.base_change
    }
}

pub fn property_checks(
    e: &DrinfeldModule,
    a: &APoly,
    b: &APoly,
    hom: &AlgebraHom,
) -> Result<PropertyReport, TorsionError> {
    let alg = e.algebra();
    let g = alg.ground();
    let dst = hom.dst();
    let mut failures = Vec::new();

    // coprime splitting
    let ab = a.mul(g, b);
    let ta = torsion_points(e, a, hom)?;
    let tb = torsion_points(e, b, hom)?;
    let tab = torsion_points(e, &ab, hom)?;
    let mut coprime_splitting = a.is_coprime(g, b);
    if coprime_splitting {
        coprime_splitting = ta.len() * tb.len() == tab.len();
        if coprime_splitting {
            let mut sums: Vec<u64> = ta
                .points
                .iter()
                .flat_map(|x| tb.points.iter().map(|y| dst.index_of(&dst.add(x, y))))
                .collect();
            sums.sort_unstable();
            sums.dedup();
            let target: Vec<u64> = tab.points.iter().map(|p| dst.index_of(p)).collect();
            coprime_splitting = sums == target;
        }
        if !coprime_splitting {
            failures.push("coprime splitting failed".into());
        }
    } else {
        failures.push("ideals are not coprime; splitting not checked".into());
    }

    // separability iff gamma(.) is a unit
    let check_sep = |x: &APoly| -> Result<bool, TorsionError> {
        let h = division_poly(e, x)?.h;
        Ok(h.is_separable() == alg.is_unit(&e.gamma_of(x)))
    };
    let separability_a = check_sep(a)?;
    if !separability_a {
        failures.push("separability criterion failed for a".into());
    }
    let separability_b = check_sep(b)?;
    if !separability_b {
        failures.push("separability criterion failed for b".into());
    }

    // base change commutes with forming h_a
    let h_mapped = division_poly(e, a)?.h.map_coeffs(hom);
    let e_mapped = DrinfeldModule::from_e_t(e.e_t().map_coeffs(hom))?;
    let h_of_mapped = division_poly(&e_mapped, a)?.h;
    let base_change = h_mapped == h_of_mapped;
    if !base_change {
        failures.push("base change does not commute with h_a".into());
    }

    Ok(PropertyReport {
        coprime_splitting,
        separability_a,
        separability_b,
        base_change,
        failures,
    })
}
