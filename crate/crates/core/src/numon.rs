//! Numerical monoids and their fractional ideals.
//!
//! A numerical monoid `S ⊆ N_0` is stored through its minimal generators, its
//! gaps and its Frobenius number. Fractional ideals (`I + S ⊆ I`, bounded
//! below) are stored as an explicit window of elements below a threshold, with
//! every integer at or above the threshold belonging to the ideal. That form
//! makes duals and divisorial closures finite, exact computations.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::gcd;

/// Monoids whose conductor exceeds this are rejected.
pub const CONDUCTOR_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumonError {
    #[error("at least one generator is required")]
    EmptyGenerators,
    #[error("generators must be positive")]
    ZeroGenerator,
    #[error("generators have gcd {0}, expected 1")]
    GcdNotOne(u64),
    #[error("{0} is not an element of the monoid")]
    NotInMonoid(i64),
    #[error("the Apery set needs a nonzero element")]
    ZeroElement,
    #[error("conductor {conductor} exceeds the cap of {cap}")]
    MonoidTooLarge { conductor: u64, cap: u64 },
    #[error("gap set is not the complement of a monoid: {a} + {b} is a gap")]
    NotClosed { a: u64, b: u64 },
    #[error("an ideal needs at least one generator")]
    EmptyIdeal,
    #[error("set is not closed under adding monoid elements: {0} + atom leaves it")]
    IdealNotClosed(i64),
}

/// A cofinite submonoid of the nonnegative integers.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MonoidJson", into = "MonoidJson")]
pub struct NumericalMonoid {
    atoms: Vec<u64>,
    frobenius: i64,
    gaps: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct MonoidJson {
    atoms: Vec<u64>,
}

impl TryFrom<MonoidJson> for NumericalMonoid {
    type Error = NumonError;
    fn try_from(j: MonoidJson) -> Result<Self, NumonError> {
        Self::from_generators(&j.atoms)
    }
}

impl From<NumericalMonoid> for MonoidJson {
    fn from(s: NumericalMonoid) -> Self {
        MonoidJson { atoms: s.atoms }
    }
}

impl fmt::Debug for NumericalMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for NumericalMonoid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atoms: Vec<String> = self.atoms.iter().map(u64::to_string).collect();
        write!(f, "<{}>", atoms.join(","))
    }
}

impl NumericalMonoid {
    /// The monoid generated by `gens`, reduced to its minimal generators.
    ///
    /// The Apéry set with respect to the smallest generator is found by a
    /// shortest-path search over residues; the Frobenius number is its
    /// maximum minus that generator.
    pub fn from_generators(gens: &[u64]) -> Result<Self, NumonError> {
        if gens.is_empty() {
            return Err(NumonError::EmptyGenerators);
        }
        if gens.contains(&0) {
            return Err(NumonError::ZeroGenerator);
        }
        let g = gens.iter().copied().fold(0, gcd);
        if g != 1 {
            return Err(NumonError::GcdNotOne(g));
        }
        let mut gens = gens.to_vec();
        gens.sort_unstable();
        gens.dedup();
        let m = gens[0];

        let mut dist = vec![u64::MAX; m as usize];
        dist[0] = 0;
        let mut heap = BinaryHeap::from([Reverse((0u64, 0usize))]);
        while let Some(Reverse((d, r))) = heap.pop() {
            if d > dist[r] {
                continue;
            }
            for &a in &gens[1..] {
                let nd = d + a;
                let nr = (nd % m) as usize;
                if nd < dist[nr] {
                    dist[nr] = nd;
                    heap.push(Reverse((nd, nr)));
                }
            }
        }
        let frobenius = *dist.iter().max().unwrap() as i64 - m as i64;
        let conductor = (frobenius + 1) as u64;
        if conductor > CONDUCTOR_CAP {
            return Err(NumonError::MonoidTooLarge { conductor, cap: CONDUCTOR_CAP });
        }
        let gaps: Vec<u64> = (1..conductor).filter(|&n| n < dist[(n % m) as usize]).collect();

        // A generator a > conductor + m is m plus a nonzero element.
        let limit = conductor + m + 1;
        let mut reach = vec![false; limit as usize];
        reach[0] = true;
        let mut atoms = Vec::new();
        for &a in gens.iter().filter(|&&a| a < limit) {
            if reach[a as usize] {
                continue;
            }
            atoms.push(a);
            for v in a as usize..limit as usize {
                if reach[v - a as usize] {
                    reach[v] = true;
                }
            }
        }
        Ok(Self { atoms, frobenius, gaps })
    }

    /// The monoid whose gaps are exactly `gaps`.
    pub fn from_gaps(gaps: &[u64]) -> Result<Self, NumonError> {
        let mut gaps = gaps.to_vec();
        gaps.sort_unstable();
        gaps.dedup();
        if gaps.contains(&0) {
            return Err(NumonError::NotClosed { a: 0, b: 0 });
        }
        let conductor = gaps.last().map_or(0, |&f| f + 1);
        let member = |n: u64| gaps.binary_search(&n).is_err();
        let elems: Vec<u64> = (1..conductor).filter(|&n| member(n)).collect();
        for (i, &a) in elems.iter().enumerate() {
            for &b in &elems[i..] {
                if a + b < conductor && !member(a + b) {
                    return Err(NumonError::NotClosed { a, b });
                }
            }
        }
        let m = elems.first().copied().unwrap_or(conductor.max(1));
        let candidates: Vec<u64> = (1..conductor + m + 1).filter(|&n| member(n)).collect();
        Self::from_generators(&candidates)
    }

    /// `N_0`.
    pub fn naturals() -> Self {
        Self { atoms: vec![1], frobenius: -1, gaps: Vec::new() }
    }

    /// Every numerical monoid with Frobenius number at most `max_frobenius`,
    /// found by walking the tree in which each monoid's parent adjoins its
    /// Frobenius number. `N_0` comes first; the order is deterministic.
    pub fn all_with_frobenius_at_most(max_frobenius: u64) -> Vec<Self> {
        let mut out = Vec::new();
        let mut stack = vec![Self::naturals()];
        while let Some(s) = stack.pop() {
            let mut children = Vec::new();
            for &a in &s.atoms {
                if (a as i64) > s.frobenius && a <= max_frobenius {
                    let mut gaps = s.gaps.clone();
                    gaps.push(a);
                    children.push(Self::from_gaps(&gaps).expect("removing an atom above F keeps a monoid"));
                }
            }
            out.push(s);
            stack.extend(children.into_iter().rev());
        }
        out
    }

    pub fn atoms(&self) -> &[u64] {
        &self.atoms
    }

    pub fn embedding_dimension(&self) -> usize {
        self.atoms.len()
    }

    pub fn multiplicity(&self) -> u64 {
        self.atoms[0]
    }

    /// Largest gap, or `-1` for `N_0`.
    pub fn frobenius(&self) -> i64 {
        self.frobenius
    }

    pub fn conductor(&self) -> u64 {
        (self.frobenius + 1) as u64
    }

    pub fn gaps(&self) -> &[u64] {
        &self.gaps
    }

    pub fn genus(&self) -> usize {
        self.gaps.len()
    }

    pub fn is_naturals(&self) -> bool {
        self.gaps.is_empty()
    }

    pub fn contains(&self, n: i64) -> bool {
        n >= 0 && (n as u64 >= self.conductor() || self.gaps.binary_search(&(n as u64)).is_err())
    }

    /// Elements of the monoid in `[0, bound]`.
    pub fn elements_up_to(&self, bound: u64) -> Vec<u64> {
        (0..=bound).filter(|&n| self.contains(n as i64)).collect()
    }

    /// The smallest element of each residue class modulo `n`, sorted.
    pub fn apery_set(&self, n: u64) -> Result<Vec<u64>, NumonError> {
        if n == 0 {
            return Err(NumonError::ZeroElement);
        }
        if !self.contains(n as i64) {
            return Err(NumonError::NotInMonoid(n as i64));
        }
        let mut found = vec![false; n as usize];
        let mut left = n as usize;
        let mut out = Vec::with_capacity(n as usize);
        let mut s = 0u64;
        while left > 0 {
            if self.contains(s as i64) && !found[(s % n) as usize] {
                found[(s % n) as usize] = true;
                out.push(s);
                left -= 1;
            }
            s += 1;
        }
        Ok(out)
    }

    /// A gap `g` with `2g, 3g ∈ S`, if any. `None` means seminormal.
    pub fn seminormality_witness(&self) -> Option<u64> {
        self.gaps.iter().copied().find(|&g| self.contains(2 * g as i64) && self.contains(3 * g as i64))
    }

    pub fn is_seminormal(&self) -> bool {
        self.seminormality_witness().is_none()
    }

    /// Root closure in `Z`, which is always `N_0`, with the smallest
    /// multiplier `n ≥ 2` putting each gap into the monoid.
    pub fn root_closure(&self) -> RootClosure {
        let witnesses = self
            .gaps
            .iter()
            .map(|&g| {
                let n = (2..).find(|&n| self.contains((n * g) as i64)).unwrap();
                RootWitness { gap: g, multiplier: n }
            })
            .collect();
        RootClosure { closure: Self::naturals(), witnesses }
    }

    /// Divisibility is a total order only for `N_0`.
    pub fn is_valuation(&self) -> bool {
        self.atoms == [1]
    }

    /// Two atoms neither of which divides the other, when the monoid is not a
    /// valuation monoid. The two smallest atoms always work: if `a₁ | a₂` then
    /// `a₂ = a₁ + (a₂ − a₁)` would not be an atom.
    pub fn non_valuation_pair(&self) -> Option<(u64, u64)> {
        (self.atoms.len() >= 2).then(|| (self.atoms[0], self.atoms[1]))
    }

    /// `M = S \ {0}`.
    pub fn maximal_ideal(&self) -> MonoidIdeal {
        let c = self.conductor() as i64;
        MonoidIdeal::from_predicate(self.clone(), 1, c.max(1), |x| self.contains(x))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootWitness {
    pub gap: u64,
    pub multiplier: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootClosure {
    pub closure: NumericalMonoid,
    pub witnesses: Vec<RootWitness>,
}

/// A fractional ideal `I` of a numerical monoid: `I + S ⊆ I`, bounded below.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MonoidIdeal {
    owner: NumericalMonoid,
    /// Elements strictly below `threshold`, sorted.
    below: Vec<i64>,
    /// Least integer `t` with `[t, ∞) ⊆ I` and `t − 1 ∉ I`.
    threshold: i64,
}

impl fmt::Debug for MonoidIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for MonoidIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.below.iter().map(i64::to_string).collect();
        parts.push(format!("{}→", self.threshold));
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl MonoidIdeal {
    /// `{x ∈ [lo, hi) : pred(x)} ∪ [hi, ∞)`, normalized. Callers guarantee
    /// the result is an ideal.
    fn from_predicate(owner: NumericalMonoid, lo: i64, hi: i64, pred: impl Fn(i64) -> bool) -> Self {
        let hi = hi.max(lo);
        let mut below: Vec<i64> = (lo..hi).filter(|&x| pred(x)).collect();
        let mut threshold = hi;
        while below.last() == Some(&(threshold - 1)) {
            below.pop();
            threshold -= 1;
        }
        Self { owner, below, threshold }
    }

    /// `x + S`.
    pub fn principal(owner: NumericalMonoid, x: i64) -> Self {
        let c = owner.conductor() as i64;
        let s = owner.clone();
        Self::from_predicate(owner, x, x + c, move |y| s.contains(y - x))
    }

    /// `⋃ (g + S)` over the generators.
    pub fn generated_by(owner: NumericalMonoid, gens: &[i64]) -> Result<Self, NumonError> {
        let lo = *gens.iter().min().ok_or(NumonError::EmptyIdeal)?;
        let hi = lo + owner.conductor() as i64;
        let s = owner.clone();
        Ok(Self::from_predicate(owner, lo, hi, move |y| gens.iter().any(|&g| s.contains(y - g))))
    }

    /// Ideal given explicitly: `below ∪ [threshold, ∞)`, checked for closure.
    pub fn from_parts(owner: NumericalMonoid, below: &[i64], threshold: i64) -> Result<Self, NumonError> {
        let mut sorted: Vec<i64> = below.iter().copied().filter(|&x| x < threshold).collect();
        sorted.sort_unstable();
        sorted.dedup();
        let lo = sorted.first().copied().unwrap_or(threshold);
        let candidate = Self::from_predicate(owner, lo, threshold, |x| sorted.binary_search(&x).is_ok());
        for &x in &candidate.below {
            for &a in candidate.owner.atoms() {
                if !candidate.contains(x + a as i64) {
                    return Err(NumonError::IdealNotClosed(x));
                }
            }
        }
        Ok(candidate)
    }

    pub fn owner(&self) -> &NumericalMonoid {
        &self.owner
    }

    pub fn min(&self) -> i64 {
        self.below.first().copied().unwrap_or(self.threshold)
    }

    pub fn threshold(&self) -> i64 {
        self.threshold
    }

    pub fn elements_below_threshold(&self) -> &[i64] {
        &self.below
    }

    pub fn contains(&self, x: i64) -> bool {
        x >= self.threshold || self.below.binary_search(&x).is_ok()
    }

    /// Minimal generators: elements not of the form `y + s` with `y ∈ I`, `s ∈ S∖{0}`.
    pub fn minimal_generators(&self) -> Vec<i64> {
        let top = self.threshold + self.owner.multiplicity() as i64;
        (self.min()..top)
            .filter(|&x| self.contains(x))
            .filter(|&x| !self.owner.atoms().iter().any(|&a| self.contains(x - a as i64)))
            .collect()
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        (self.min()..self.threshold.max(other.threshold)).all(|x| !self.contains(x) || other.contains(x))
    }

    /// `I + J`.
    pub fn sum(&self, other: &Self) -> Self {
        let lo = self.min() + other.min();
        let hi = (self.min() + other.threshold).min(self.threshold + other.min());
        Self::from_predicate(self.owner.clone(), lo, hi, |x| {
            (self.min()..=x - other.min()).any(|a| self.contains(a) && other.contains(x - a))
        })
    }

    /// `I⁻¹ = {x : x + I ⊆ S}`.
    pub fn dual(&self) -> Self {
        let c = self.owner.conductor() as i64;
        let m = self.min();
        let s = &self.owner;
        Self::from_predicate(self.owner.clone(), -m, c - m, |x| {
            (m..c - x).all(|y| !self.contains(y) || s.contains(x + y))
        })
    }

    /// `I_v = (I⁻¹)⁻¹`.
    pub fn v_closure(&self) -> Self {
        self.dual().dual()
    }

    /// Every ideal of a numerical monoid is finitely generated, so the
    /// t-closure coincides with the v-closure.
    pub fn t_closure(&self) -> Self {
        self.v_closure()
    }

    pub fn is_divisorial(&self) -> bool {
        self.v_closure() == *self
    }

    /// `(I + I⁻¹)_t = S`.
    pub fn is_t_invertible(&self) -> bool {
        self.sum(&self.dual()).t_closure() == Self::principal(self.owner.clone(), 0)
    }

    pub fn is_principal(&self) -> bool {
        *self == Self::principal(self.owner.clone(), self.min())
    }

    pub fn is_integral(&self) -> bool {
        self.min() >= 0 && self.is_subset_of(&Self::principal(self.owner.clone(), 0))
    }

    /// Proper integral ideal with `a + b ∈ I ⇒ a ∈ I or b ∈ I` for `a, b ∈ S`.
    pub fn is_prime(&self) -> bool {
        if !self.is_integral() || self.contains(0) {
            return false;
        }
        // Elements of S outside I all lie below the threshold.
        let outside: Vec<i64> = (0..self.threshold).filter(|&x| self.owner.contains(x) && !self.contains(x)).collect();
        outside.iter().all(|&a| outside.iter().all(|&b| !self.contains(a + b)))
    }
}
