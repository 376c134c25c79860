//! Class groups of semigroup rings.
//!
//! For a prime field `F_p` and a numerical monoid `S` with conductor `c`, the
//! ring `A = F_p[S]` sits inside `B = F_p[X]` with conductor ideal `X^c·B`.
//! Since `Pic(B)` is trivial and both rings have unit group `F_p^*`, the
//! conductor square gives `Pic(A) ≅ U(B/X^c) / U(A/X^c)`, computed here by
//! explicit coset enumeration.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{checked_pow, is_prime};
use crate::groups::{quotient_structure, FiniteAbelianGroup, GroupError, CARRIER_CAP};
use crate::numon::NumericalMonoid;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassGroupError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("unit group of order {p}^{exponent} exceeds the cap {cap}")]
    SizeCapExceeded { p: u64, exponent: u64, cap: usize },
    #[error("the list of summands is empty")]
    EmptyList,
    #[error("units supported on the monoid do not form a subgroup")]
    DenominatorNotClosed,
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// `(F_p[X]/X^c)^× ∩ (1 + X·F_p[X])`, the units with constant term 1.
/// Element `1 + a₁X + … + a_{c−1}X^{c−1}` is encoded as `Σ aᵢ·p^{i−1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedUnitGroup {
    p: u64,
    c: u64,
}

impl TruncatedUnitGroup {
    pub fn new(p: u64, c: u64) -> Result<Self, ClassGroupError> {
        if !is_prime(p) {
            return Err(ClassGroupError::NotPrime(p));
        }
        let exponent = c.saturating_sub(1);
        let fits =
            u32::try_from(exponent).ok().and_then(|e| checked_pow(p, e)).is_some_and(|n| n <= CARRIER_CAP as u64);
        if !fits {
            return Err(ClassGroupError::SizeCapExceeded { p, exponent, cap: CARRIER_CAP });
        }
        Ok(Self { p, c })
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn conductor(&self) -> u64 {
        self.c
    }

    pub fn order(&self) -> u64 {
        self.p.pow(self.c.saturating_sub(1) as u32)
    }

    /// Coefficients `[1, a₁, …, a_{c−1}]`.
    pub fn decode(&self, code: u64) -> Vec<u64> {
        let mut coeffs = vec![1];
        let mut x = code;
        for _ in 1..self.c.max(1) {
            coeffs.push(x % self.p);
            x /= self.p;
        }
        coeffs
    }

    pub fn encode(&self, coeffs: &[u64]) -> u64 {
        coeffs.iter().skip(1).rev().fold(0, |acc, &a| acc * self.p + a % self.p)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        let (x, y) = (self.decode(a), self.decode(b));
        let n = x.len();
        let mut z = vec![0u64; n];
        for i in 0..n {
            if x[i] == 0 {
                continue;
            }
            for j in 0..n - i {
                z[i + j] = (z[i + j] + x[i] * y[j]) % self.p;
            }
        }
        self.encode(&z)
    }

    pub fn elements(&self) -> Vec<u64> {
        (0..self.order()).collect()
    }

    /// `1 + a₁X + …` rendered with the lowest degree first.
    pub fn describe(&self, code: u64) -> String {
        let mut parts = vec!["1".to_owned()];
        for (i, &a) in self.decode(code).iter().enumerate().skip(1) {
            if a == 0 {
                continue;
            }
            let mono = if i == 1 { "X".to_owned() } else { format!("X^{i}") };
            parts.push(if a == 1 { mono } else { format!("{a}{mono}") });
        }
        parts.join(" + ")
    }
}

/// Units `1 + Σ_{s ∈ S, 0 < s < c} a_s X^s`, listed directly.
fn supported_units(u: &TruncatedUnitGroup, s: &NumericalMonoid) -> Vec<u64> {
    u.elements()
        .into_iter()
        .filter(|&code| u.decode(code).iter().enumerate().skip(1).all(|(i, &a)| a == 0 || s.contains(i as i64)))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ConductorSquareUnitQuotient,
    PolynomialRing,
    Cited,
    DirectSum,
}

/// A finite class group together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassGroupResult {
    pub group: FiniteAbelianGroup,
    pub method: Method,
    pub prime: u64,
    pub monoid: NumericalMonoid,
    /// Order of `U(F_p[X]/X^c)` modulo constants.
    pub unit_group_order: u64,
    /// Order of the subgroup of units supported on the monoid.
    pub denominator_order: u64,
    /// The units `1 + αX^s` generating the denominator.
    pub denominator_generators: Vec<String>,
}

/// `C_v(F_p[S]) = Pic(F_p[S])` by coset enumeration.
pub fn cv_numerical_ring(p: u64, s: &NumericalMonoid) -> Result<ClassGroupResult, ClassGroupError> {
    let c = s.conductor();
    let u = TruncatedUnitGroup::new(p, c)?;
    if s.is_naturals() {
        return Ok(ClassGroupResult {
            group: FiniteAbelianGroup::trivial(),
            method: Method::PolynomialRing,
            prime: p,
            monoid: s.clone(),
            unit_group_order: 1,
            denominator_order: 1,
            denominator_generators: Vec::new(),
        });
    }
    let mut gens = Vec::new();
    let mut gen_names = Vec::new();
    for e in 1..c {
        if !s.contains(e as i64) {
            continue;
        }
        for alpha in 1..p {
            let mut coeffs = vec![0u64; c as usize];
            coeffs[0] = 1;
            coeffs[e as usize] = alpha;
            let code = u.encode(&coeffs);
            gens.push(code);
            gen_names.push(u.describe(code));
        }
    }
    let direct = supported_units(&u, s);
    let direct_set: HashSet<u64> = direct.iter().copied().collect();
    for &a in &direct {
        for &b in &direct {
            if !direct_set.contains(&u.mul(a, b)) {
                return Err(ClassGroupError::DenominatorNotClosed);
            }
        }
    }
    let carrier = u.elements();
    let q = quotient_structure(&carrier, |a, b| u.mul(*a, *b), &0, &gens)?;
    // Generated ⊆ supported since S is closed under addition; equal orders
    // make them equal.
    if q.subgroup_order != direct.len() {
        return Err(ClassGroupError::DenominatorNotClosed);
    }
    Ok(ClassGroupResult {
        group: q.group,
        method: Method::ConductorSquareUnitQuotient,
        prime: p,
        monoid: s.clone(),
        unit_group_order: q.carrier_order as u64,
        denominator_order: q.subgroup_order as u64,
        denominator_generators: gen_names,
    })
}

/// The base ring of a class group summand.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseField {
    Prime {
        p: u64,
    },
    /// An infinite field, e.g. `Q` or a rational function field.
    Infinite {
        label: String,
    },
}

/// A class group given either by computation or by a cited structural fact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClassGroupExpr {
    Finite { result: ClassGroupResult },
    Trivial,
    Infinite { monoid: NumericalMonoid, field: String, citation: String },
    DirectSum { summands: Vec<ClassGroupExpr> },
}

/// Statement behind every infinite verdict.
pub const INFINITE_PIC_CITATION: &str = "Pic(K[S]) is infinite for an infinite field K and a numerical monoid S != N_0";

/// Statement behind the direct-sum decomposition.
pub const DIRECT_SUM_CITATION: &str =
    "C_v(K[S_1 + ... + S_n]) = C_v(K(X_1..X_{n-1})[S_1]) + ... + C_v(K(X_1..X_{n-1})[S_n])";

impl ClassGroupExpr {
    pub fn is_trivial(&self) -> bool {
        match self {
            Self::Trivial => true,
            Self::Finite { result } => result.group.is_trivial(),
            Self::Infinite { .. } => false,
            Self::DirectSum { summands } => summands.iter().all(Self::is_trivial),
        }
    }

    pub fn is_infinite(&self) -> bool {
        match self {
            Self::Infinite { .. } => true,
            Self::Trivial | Self::Finite { .. } => false,
            Self::DirectSum { summands } => summands.iter().any(Self::is_infinite),
        }
    }

    /// Order when every summand is finite.
    pub fn order(&self) -> Option<u64> {
        match self {
            Self::Trivial => Some(1),
            Self::Finite { result } => Some(result.group.order()),
            Self::Infinite { .. } => None,
            Self::DirectSum { summands } => {
                summands.iter().try_fold(1u64, |acc, s| s.order().and_then(|o| acc.checked_mul(o)))
            }
        }
    }
}

impl fmt::Display for ClassGroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Trivial => write!(f, "0"),
            Self::Finite { result } => write!(f, "{}", result.group),
            Self::Infinite { .. } => write!(f, "INFINITE"),
            Self::DirectSum { summands } => {
                let parts: Vec<String> = summands.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(" + "))
            }
        }
    }
}

/// Formal direct sum; nested sums are flattened and a single summand is
/// returned unchanged.
pub fn cv_direct_sum(exprs: Vec<ClassGroupExpr>) -> Result<ClassGroupExpr, ClassGroupError> {
    let mut flat = Vec::new();
    for e in exprs {
        match e {
            ClassGroupExpr::DirectSum { summands } => flat.extend(summands),
            other => flat.push(other),
        }
    }
    match flat.len() {
        0 => Err(ClassGroupError::EmptyList),
        1 => Ok(flat.pop().expect("one summand")),
        _ => Ok(ClassGroupExpr::DirectSum { summands: flat }),
    }
}

/// `C_v(K[S₁ ⊕ … ⊕ Sₙ])` as a direct sum of one-variable class groups over
/// `K(X₁, …, X_{n−1})`. That field is infinite once `n ≥ 2`, so such summands
/// with `Sᵢ ≠ N_0` are infinite; over a prime field with `n = 1` the summand
/// is computed.
pub fn cv_semigroup_ring_sum(
    field: &BaseField,
    components: &[NumericalMonoid],
) -> Result<ClassGroupExpr, ClassGroupError> {
    if components.is_empty() {
        return Err(ClassGroupError::EmptyList);
    }
    let n = components.len();
    let base = match field {
        BaseField::Prime { p } => format!("F_{p}"),
        BaseField::Infinite { label } => label.clone(),
    };
    let summand_field = match n {
        1 => base,
        2 => format!("{base}(X_1)"),
        _ => format!("{base}(X_1..X_{})", n - 1),
    };
    let mut summands = Vec::with_capacity(n);
    for s in components {
        let e = if s.is_naturals() {
            ClassGroupExpr::Trivial
        } else {
            match field {
                BaseField::Prime { p } if n == 1 => ClassGroupExpr::Finite { result: cv_numerical_ring(*p, s)? },
                _ => ClassGroupExpr::Infinite {
                    monoid: s.clone(),
                    field: summand_field.clone(),
                    citation: INFINITE_PIC_CITATION.to_owned(),
                },
            }
        };
        summands.push(e);
    }
    cv_direct_sum(summands)
}
