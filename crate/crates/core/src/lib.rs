//! Exact arithmetic for Drinfeld modules over A = Fq[T] on finite and
//! artinian local base rings B = F_{q^m}[Y]/(Y^k).
//!
//! The crate provides twisted (Ore) polynomial arithmetic, division points
//! and division polynomials, level-I structures with both Cartier-divisor
//! checkers (the per-prime condition and the single-ideal condition),
//! deformations over artinian test rings, and quotient isogenies. Every
//! computation is exact and deterministic: elements are coordinate vectors
//! over the prime field, moduli are the lexicographically least monic
//! irreducibles, and enumeration orders are fixed.

pub mod algebra;
pub mod apoly;
pub mod config;
pub mod deformation;
pub mod drinfeld;
pub mod evidence;
pub mod level;
pub mod torsion;
pub mod twisted;

pub(crate) mod polyutil;

pub use algebra::{
    AlgebraElement, AlgebraError, AlgebraHom, ArtinLocalAlgebra, FqLinearMap, GroundField,
};
pub use apoly::{APoly, PrimePower};
pub use config::ExperimentConfig;
pub use deformation::DeformationProblem;
pub use drinfeld::{CharacteristicInfo, DrinfeldError, DrinfeldModule};
pub use evidence::EvidenceRecord;
pub use level::{DivisorReport, EquivalenceReport, LevelCandidate, LevelMode};
pub use torsion::{DivisionPolynomial, ModuleStructure, TorsionSet};
pub use twisted::{TwistedError, TwistedPoly};
