//! Finite direct sums `S_1 ⊕ … ⊕ S_n` of numerical monoids.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numon::NumericalMonoid;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AffineError {
    #[error("a direct sum needs at least one component")]
    EmptyList,
    #[error("vector has {found} coordinates, the monoid has {expected} components")]
    DimensionMismatch { found: usize, expected: usize },
    #[error("{0:?} is not an element of the monoid")]
    NotInMonoid(Vec<i64>),
}

/// Direct sum of numerical monoids; elements are integer vectors whose
/// `i`-th coordinate lies in the `i`-th component. Quotient group `Z^n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "AffineJson")]
pub struct AffineSumMonoid {
    components: Vec<NumericalMonoid>,
}

#[derive(Deserialize)]
struct AffineJson {
    components: Vec<NumericalMonoid>,
}

impl TryFrom<AffineJson> for AffineSumMonoid {
    type Error = AffineError;
    fn try_from(j: AffineJson) -> Result<Self, AffineError> {
        Self::direct_sum(j.components)
    }
}

impl AffineSumMonoid {
    pub fn direct_sum(components: Vec<NumericalMonoid>) -> Result<Self, AffineError> {
        if components.is_empty() {
            return Err(AffineError::EmptyList);
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[NumericalMonoid] {
        &self.components
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    /// Some component differs from `N_0`.
    pub fn has_proper_component(&self) -> bool {
        self.components.iter().any(|s| !s.is_naturals())
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        v.len() == self.rank() && v.iter().zip(&self.components).all(|(&x, s)| s.contains(x))
    }

    pub fn check(&self, v: &[i64]) -> Result<(), AffineError> {
        if v.len() != self.rank() {
            return Err(AffineError::DimensionMismatch { found: v.len(), expected: self.rank() });
        }
        if !self.contains(v) {
            return Err(AffineError::NotInMonoid(v.to_vec()));
        }
        Ok(())
    }

    /// The atoms `e_i(a)` for `a` an atom of `S_i`, component by component.
    pub fn atoms(&self) -> Vec<Vec<u64>> {
        let n = self.rank();
        let mut out = Vec::new();
        for (i, s) in self.components.iter().enumerate() {
            for &a in s.atoms() {
                let mut v = vec![0; n];
                v[i] = a;
                out.push(v);
            }
        }
        out
    }

    pub fn properties_report(&self) -> PropertiesReport {
        let seminormal = self.components.iter().all(NumericalMonoid::is_naturals);
        let (path, cited) = if self.rank() == 1 {
            (ReportPath::Numerical, vec![Citation::NUMERICAL_PRIMARY, Citation::NUMERICAL_ROOT_CLOSURE])
        } else {
            (ReportPath::AffineSum, vec![Citation::AFFINE_WEAKLY_KRULL, Citation::AFFINE_UMT])
        };
        PropertiesReport {
            path,
            rank: self.rank(),
            has_proper_component: self.has_proper_component(),
            weakly_krull: true,
            umt: true,
            seminormal,
            root_closure_rank: self.rank(),
            root_closure_factorial: true,
            seminormal_witnesses: self
                .components
                .iter()
                .enumerate()
                .filter_map(|(i, s)| s.seminormality_witness().map(|g| (i, g)))
                .collect(),
            citations: cited.into_iter().map(str::to_owned).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportPath {
    Numerical,
    AffineSum,
}

/// Structural facts about a direct sum of numerical monoids. The root closure
/// is always `N_0^n`, which is factorial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertiesReport {
    pub path: ReportPath,
    pub rank: usize,
    pub has_proper_component: bool,
    pub weakly_krull: bool,
    pub umt: bool,
    pub seminormal: bool,
    pub root_closure_rank: usize,
    pub root_closure_factorial: bool,
    /// `(component, gap g)` with `2g, 3g` in the component.
    pub seminormal_witnesses: Vec<(usize, u64)>,
    pub citations: Vec<String>,
}

/// Statements the report relies on.
pub struct Citation;

impl Citation {
    pub const NUMERICAL_PRIMARY: &'static str =
        "a numerical monoid is primary: S \\ {0} is its unique nonempty prime ideal, so it is a weakly Krull UMT-monoid";
    pub const NUMERICAL_ROOT_CLOSURE: &'static str =
        "N_0 is the integral closure of a numerical monoid in Z and is a valuation monoid";
    pub const AFFINE_WEAKLY_KRULL: &'static str =
        "a finite direct sum of numerical monoids is an affine weakly Krull monoid";
    pub const AFFINE_UMT: &'static str = "every weakly Krull affine monoid is a UMT-monoid";
}
