//! Factorizations and length invariants of numerical monoids and their
//! direct sums.
//!
//! Sets of lengths are computed by a dynamic program over the monoid
//! (`L(n) = ⋃_a (L(n − a) + 1)`), with one bitset of lengths per element.
//! Explicit factorizations come from a separate depth-first enumeration;
//! the two routes are cross-checked in the tests.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::affine::{AffineError, AffineSumMonoid};
use crate::arith::gcd;
use crate::numon::NumericalMonoid;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactorError {
    #[error("{0} is not an element of the monoid")]
    NotInMonoid(i64),
    #[error("bound {bound} is below the conductor {conductor}")]
    BoundTooSmall { bound: u64, conductor: u64 },
    #[error(transparent)]
    Affine(#[from] AffineError),
}

/// Exponent vector over the atom list of the ambient monoid.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Factorization {
    exponents: Vec<u64>,
}

impl Factorization {
    pub fn new(exponents: Vec<u64>) -> Self {
        Self { exponents }
    }

    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn length(&self) -> u64 {
        self.exponents.iter().sum()
    }

    pub fn evaluate(&self, atoms: &[u64]) -> u64 {
        self.exponents.iter().zip(atoms).map(|(x, a)| x * a).sum()
    }
}

/// A finite set of nonnegative integers, kept sorted.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LengthSet(BTreeSet<u64>);

impl LengthSet {
    pub fn new() -> Self {
        Self(BTreeSet::new())
    }

    pub fn singleton(k: u64) -> Self {
        Self(BTreeSet::from([k]))
    }

    pub fn insert(&mut self, k: u64) {
        self.0.insert(k);
    }

    pub fn extend(&mut self, other: &LengthSet) {
        self.0.extend(other.0.iter().copied());
    }

    pub fn contains(&self, k: u64) -> bool {
        self.0.contains(&k)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> Option<u64> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.0.last().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.0.iter().copied().collect()
    }

    /// Contiguous run of integers (the empty set counts as one).
    pub fn is_interval(&self) -> bool {
        match (self.min(), self.max()) {
            (Some(a), Some(b)) => (b - a + 1) as usize == self.len(),
            _ => true,
        }
    }

    /// `{a + b : a ∈ self, b ∈ other}`.
    pub fn sumset(&self, other: &LengthSet) -> LengthSet {
        self.iter().flat_map(|a| other.iter().map(move |b| a + b)).collect()
    }

    /// Successive differences of the sorted elements.
    pub fn delta(&self) -> BTreeSet<u64> {
        delta_of(self)
    }

    fn from_bits(bits: &[u64]) -> Self {
        let mut out = BTreeSet::new();
        for (w, &word) in bits.iter().enumerate() {
            let mut x = word;
            while x != 0 {
                let b = x.trailing_zeros() as u64;
                out.insert(w as u64 * 64 + b);
                x &= x - 1;
            }
        }
        Self(out)
    }
}

impl FromIterator<u64> for LengthSet {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl fmt::Display for LengthSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|x| x.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// `Δ(L)`: gaps between consecutive elements.
pub fn delta_of(l: &LengthSet) -> BTreeSet<u64> {
    let v = l.to_vec();
    v.windows(2).map(|w| w[1] - w[0]).collect()
}

/// Sets of lengths for every `n ≤ bound`, one bitset per element.
#[derive(Debug, Clone)]
pub struct LengthTable {
    words: usize,
    bits: Vec<u64>,
    bound: u64,
}

impl LengthTable {
    pub fn build(s: &NumericalMonoid, bound: u64) -> Self {
        let max_len = bound / s.multiplicity();
        let words = (max_len as usize + 1).div_ceil(64);
        let n = bound as usize + 1;
        let mut bits = vec![0u64; n * words];
        bits[0] = 1;
        for v in 1..n {
            for &a in s.atoms() {
                let a = a as usize;
                if a > v {
                    break;
                }
                let (head, tail) = bits.split_at_mut(v * words);
                let src = &head[(v - a) * words..(v - a + 1) * words];
                let dst = &mut tail[..words];
                // dst |= src << 1
                let mut carry = 0u64;
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d |= (s << 1) | carry;
                    carry = s >> 63;
                }
            }
        }
        Self { words, bits, bound }
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    /// `L(n)`; empty when `n` is not in the monoid.
    pub fn lengths(&self, n: u64) -> LengthSet {
        assert!(n <= self.bound);
        let i = n as usize * self.words;
        LengthSet::from_bits(&self.bits[i..i + self.words])
    }
}

/// All factorizations of `n`, in decreasing lexicographic order of exponent
/// vectors (the first atom is used as often as possible first).
pub fn factorizations(s: &NumericalMonoid, n: i64) -> Result<Vec<Factorization>, FactorError> {
    if !s.contains(n) {
        return Err(FactorError::NotInMonoid(n));
    }
    let atoms = s.atoms();
    let n = n as usize;
    let k = atoms.len();
    // reach[i][v]: v is a sum of atoms[i..].
    let mut reach = vec![vec![false; n + 1]; k + 1];
    reach[k][0] = true;
    for i in (0..k).rev() {
        let a = atoms[i] as usize;
        for v in 0..=n {
            reach[i][v] = reach[i + 1][v] || (v >= a && reach[i][v - a]);
        }
    }
    let mut out = Vec::new();
    let mut current = vec![0u64; k];
    enumerate(atoms, &reach, 0, n, &mut current, &mut out);
    Ok(out)
}

fn enumerate(
    atoms: &[u64],
    reach: &[Vec<bool>],
    i: usize,
    rest: usize,
    current: &mut Vec<u64>,
    out: &mut Vec<Factorization>,
) {
    if i == atoms.len() {
        if rest == 0 {
            out.push(Factorization::new(current.clone()));
        }
        return;
    }
    let a = atoms[i] as usize;
    for x in (0..=rest / a).rev() {
        let left = rest - x * a;
        if reach[i + 1][left] {
            current[i] = x as u64;
            enumerate(atoms, reach, i + 1, left, current, out);
        }
    }
    current[i] = 0;
}

/// `L(n)`.
pub fn length_set(s: &NumericalMonoid, n: i64) -> Result<LengthSet, FactorError> {
    if !s.contains(n) {
        return Err(FactorError::NotInMonoid(n));
    }
    Ok(LengthTable::build(s, n as u64).lengths(n as u64))
}

/// `L(v)` in a direct sum: the sumset of the component length sets.
pub fn affine_length_set(g: &AffineSumMonoid, v: &[i64]) -> Result<LengthSet, FactorError> {
    g.check(v)?;
    let mut acc = LengthSet::singleton(0);
    for (s, &x) in g.components().iter().zip(v) {
        acc = acc.sumset(&length_set(s, x)?);
    }
    Ok(acc)
}

/// Union of `Δ(L(n))` for `n ≤ bound`. This under-approximates `Δ(S)`
/// except for `N_0`, where every set of lengths is a singleton.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundedDelta {
    pub values: BTreeSet<u64>,
    pub bound: u64,
    pub complete: bool,
    /// gcd of the differences of consecutive atoms; `None` for `N_0`.
    pub atom_difference_gcd: Option<u64>,
}

pub fn delta_monoid_bounded(s: &NumericalMonoid, bound: u64) -> Result<BoundedDelta, FactorError> {
    if bound < s.conductor() {
        return Err(FactorError::BoundTooSmall { bound, conductor: s.conductor() });
    }
    let table = LengthTable::build(s, bound);
    let mut values = BTreeSet::new();
    for n in 0..=bound {
        if s.contains(n as i64) {
            values.extend(table.lengths(n).delta());
        }
    }
    let atom_difference_gcd = (s.atoms().len() >= 2).then(|| s.atoms().windows(2).map(|w| w[1] - w[0]).fold(0, gcd));
    Ok(BoundedDelta { values, bound, complete: s.is_naturals(), atom_difference_gcd })
}

/// Union of the `L(n)`, `n ≤ bound`, that contain `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundedLengths {
    pub values: LengthSet,
    pub bound: u64,
    pub complete: bool,
}

pub fn uk_bounded(s: &NumericalMonoid, k: u64, bound: u64) -> BoundedLengths {
    let table = LengthTable::build(s, bound);
    let mut values = LengthSet::new();
    for n in 0..=bound {
        let l = table.lengths(n);
        if l.contains(k) {
            values.extend(&l);
        }
    }
    BoundedLengths { values, bound, complete: s.is_naturals() }
}
