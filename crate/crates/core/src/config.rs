//! Experiment configuration: a single JSON document naming base rings,
//! modules, ideals and bounds. Elements are flat coefficient lists over F_p
//! in the canonical bases, so configs are bit-exact and language-neutral.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{AlgebraError, ArtinLocalAlgebra, DEFAULT_ENUMERATION_BOUND};
use crate::apoly::{APoly, APolyError, PrimePower};
use crate::deformation::{DeformationError, DeformationProblem};
use crate::drinfeld::{DrinfeldError, DrinfeldModule};
use crate::level::LevelMode;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("base index {0} out of range")]
    BadBaseIndex(usize),
    #[error("module index {0} out of range")]
    BadModuleIndex(usize),
    #[error("module {module}: {source}")]
    BadModule {
        module: usize,
        source: DrinfeldError,
    },
    #[error("ideal {ideal}: {source}")]
    BadIdeal { ideal: usize, source: APolyError },
    #[error("ideal {ideal} uses {got} F_p coordinates per coefficient, the ground field needs {want}")]
    BadIdealCoeff { ideal: usize, got: usize, want: usize },
    #[error("element has {got} F_p coordinates, the algebra needs {want}")]
    BadElement { got: usize, want: usize },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Deformation(#[from] DeformationError),
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// B = F_{p^s}^{(m)}[Y]/(Y^k) — i.e. l = F_{q^m} with q = p^s.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseSpec {
    pub p: u64,
    pub s: usize,
    pub m: usize,
    pub k: usize,
}

/// A Drinfeld module over one of the configured bases. `gamma` and each
/// entry of `coeffs` (c_1, c_2, ..) are flat little-endian F_p coordinate
/// lists of length s*m*k.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleSpec {
    pub base: usize,
    pub gamma: Vec<u64>,
    pub coeffs: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// The ideal (pi^n); `pi` is a list of F_q coefficients (ascending, each a
/// length-s F_p coordinate list) of a monic irreducible.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdealSpec {
    pub pi: Vec<Vec<u64>>,
    pub n: usize,
}

/// A deformation problem: module over a field base, the test-ring
/// nilpotency index, and an optional explicit lift of gamma(T) (flat F_p
/// coordinates in the test ring; defaults to the trivial lift).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeformationSpec {
    pub module: usize,
    pub k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_lift: Option<Vec<u64>>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub enumeration: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iso_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splitting_degree: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub characteristic_degree: Option<usize>,
}

fn default_modes() -> Vec<LevelMode> {
    vec![LevelMode::PerPrime, LevelMode::SingleIdeal]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub bases: Vec<BaseSpec>,
    pub modules: Vec<ModuleSpec>,
    #[serde(default)]
    pub ideals: Vec<IdealSpec>,
    #[serde(default = "default_modes")]
    pub modes: Vec<LevelMode>,
    #[serde(default)]
    pub bounds: Bounds,
    #[serde(default)]
    pub deformations: Vec<DeformationSpec>,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn enumeration_bound(&self) -> u64 {
        self.bounds.enumeration.unwrap_or(DEFAULT_ENUMERATION_BOUND)
    }

    pub fn splitting_degree_bound(&self) -> usize {
        self.bounds
            .splitting_degree
            .unwrap_or(crate::torsion::DEFAULT_SPLITTING_DEGREE_BOUND)
    }

    pub fn characteristic_degree_bound(&self) -> usize {
        self.bounds
            .characteristic_degree
            .unwrap_or(crate::drinfeld::DEFAULT_CHARACTERISTIC_DEGREE_BOUND)
    }

    pub fn build_base(&self, i: usize) -> Result<Arc<ArtinLocalAlgebra>, ConfigError> {
        let spec = self.bases.get(i).ok_or(ConfigError::BadBaseIndex(i))?;
        Ok(ArtinLocalAlgebra::with_bound(
            spec.p,
            spec.s,
            spec.m,
            spec.k,
            self.enumeration_bound(),
        )?)
    }

    pub fn build_module(&self, i: usize) -> Result<DrinfeldModule, ConfigError> {
        let spec = self.modules.get(i).ok_or(ConfigError::BadModuleIndex(i))?;
        let alg = self.build_base(spec.base)?;
        let want = alg.ground().s() * alg.dim();
        let elem = |coords: &Vec<u64>| -> Result<_, ConfigError> {
            if coords.len() != want {
                return Err(ConfigError::BadElement {
                    got: coords.len(),
                    want,
                });
            }
            Ok(alg.from_fp_coords(coords))
        };
        let gamma = elem(&spec.gamma)?;
        let higher = spec
            .coeffs
            .iter()
            .map(elem)
            .collect::<Result<Vec<_>, _>>()?;
        DrinfeldModule::new(alg, gamma, higher)
            .map_err(|source| ConfigError::BadModule { module: i, source })
    }

    /// The prime power for ideal `j` over the ground field of base `base`.
    pub fn build_ideal(
        &self,
        base: &ArtinLocalAlgebra,
        j: usize,
    ) -> Result<PrimePower, ConfigError> {
        let spec = &self.ideals[j];
        let g = base.ground();
        for c in &spec.pi {
            if c.len() != g.s() {
                return Err(ConfigError::BadIdealCoeff {
                    ideal: j,
                    got: c.len(),
                    want: g.s(),
                });
            }
        }
        let pi = APoly::from_coeffs(g, spec.pi.clone());
        PrimePower::new(g, pi, spec.n)
            .map_err(|source| ConfigError::BadIdeal { ideal: j, source })
    }

    pub fn build_deformation(&self, i: usize) -> Result<DeformationProblem, ConfigError> {
        let spec = &self.deformations[i];
        let e0 = self.build_module(spec.module)?;
        let base = e0.algebra().clone();
        let g = base.ground();
        let test_ring = ArtinLocalAlgebra::with_bound(
            g.p(),
            g.s(),
            base.m(),
            spec.k,
            self.enumeration_bound(),
        )?;
        let prob = match &spec.gamma_lift {
            Some(coords) => {
                let want = g.s() * test_ring.dim();
                if coords.len() != want {
                    return Err(ConfigError::BadElement {
                        got: coords.len(),
                        want,
                    });
                }
                let lift = test_ring.from_fp_coords(coords);
                DeformationProblem::new(e0, test_ring, lift)?
            }
            None => DeformationProblem::with_trivial_gamma(e0, test_ring)?,
        };
        Ok(prob)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_build() {
        let text = r#"{
            "bases": [{"p": 2, "s": 1, "m": 1, "k": 2}],
            "modules": [{"base": 0, "gamma": [0, 1], "coeffs": [[1, 0]]}],
            "ideals": [{"pi": [[0], [1]], "n": 1}]
        }"#;
        let cfg = ExperimentConfig::from_json(text).unwrap();
        assert_eq!(cfg.modes, default_modes());
        let e = cfg.build_module(0).unwrap();
        assert_eq!(e.rank(), 1);
        let b = e.algebra();
        assert_eq!(e.gamma_t(), b.y());
        let pp = cfg.build_ideal(b, 0).unwrap();
        assert_eq!(pp.pi, APoly::t(b.ground()));
        // serialization round-trips
        let text2 = serde_json::to_string(&cfg).unwrap();
        let cfg2 = ExperimentConfig::from_json(&text2).unwrap();
        assert_eq!(cfg, cfg2);
    }

    #[test]
    fn errors_are_reported() {
        let cfg = ExperimentConfig::from_json(
            r#"{"bases": [], "modules": [{"base": 3, "gamma": [], "coeffs": []}]}"#,
        )
        .unwrap();
        assert!(matches!(
            cfg.build_module(0),
            Err(ConfigError::BadBaseIndex(3))
        ));
        assert!(ExperimentConfig::from_json("{").is_err());
    }

    #[test]
    fn deformation_spec_builds() {
        let text = r#"{
            "bases": [{"p": 2, "s": 1, "m": 1, "k": 1}],
            "modules": [{"base": 0, "gamma": [1], "coeffs": [[1]]}],
            "deformations": [{"module": 0, "k": 2}]
        }"#;
        let cfg = ExperimentConfig::from_json(text).unwrap();
        let prob = cfg.build_deformation(0).unwrap();
        assert_eq!(prob.algebra.k(), 2);
        assert_eq!(prob.enumerate_lifts().unwrap().len(), 2);
    }
}
